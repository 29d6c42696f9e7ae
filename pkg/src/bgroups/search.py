"""Obstruction screening and bounded search for groups realizing a family.

The search works on the reduced form used by the spectrum engine: ranks per
type plus one type-bitmask ("edge") per index prime.  Spectra do not depend
on the prime exponents, so every candidate is searched with exponent 1.

Candidates are generated decomposition-first.  A witness must realize the
anchor partition of the family (smallest largest part, then most parts), so
each candidate is a placement of the anchor's blocks on the types together
with a connected edge multiset inside every block.  Levels are visited by
total edge count, so the first hit uses the fewest primes.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from ._hyper import Canonicalizer, Hypergraph, bits, is_connected, popcount
from .errors import InputError
from .groups import BGroup, RigidPiece, direct_sum, fresh_types, invariant_data, realize_from_invariants
from .partitions import Partition, PartitionFamily, family_S, hook_report


class Status(str, Enum):
    REALIZED = "REALIZED"
    REFUTED_WITHIN_BUDGET = "REFUTED_WITHIN_BUDGET"
    OBSTRUCTED = "OBSTRUCTED"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SearchBudget:
    max_primes: int = 6
    max_exponent: int = 2
    max_types: int | None = None  # None means the family's n
    time_cap: float = 60.0

    def __post_init__(self):
        for name in ("max_primes", "max_exponent", "time_cap"):
            value = getattr(self, name)
            if isinstance(value, bool) or value <= 0:
                raise InputError(f"budget field {name} must be positive, got {value!r}")
        if self.max_types is not None and self.max_types <= 0:
            raise InputError(f"budget field max_types must be positive, got {self.max_types!r}")

    def types_for(self, n: int) -> int:
        return n if self.max_types is None else self.max_types

    def to_dict(self) -> dict:
        return {"max_primes": self.max_primes, "max_exponent": self.max_exponent,
                "max_types": self.max_types, "time_cap": self.time_cap}


@dataclass
class Verdict:
    status: Status
    family: PartitionFamily
    mode: str = "equals"
    witness: BGroup | None = None
    obstruction: str | None = None
    obstructions: tuple[str, ...] = ()
    candidates: int = 0
    log: list[dict] = field(default_factory=list)
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        from .groups import group_to_json

        out = {
            "status": self.status.value,
            "n": self.family.n,
            "family": self.family.as_lists(),
            "mode": self.mode,
            "candidates": self.candidates,
            "elapsed": round(self.elapsed, 3),
            "log": self.log,
        }
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction
            out["obstructions"] = list(self.obstructions)
        if self.witness is not None:
            out["witness"] = group_to_json(self.witness)
        return out


# --- obstructions ----------------------------------------------------------


def blago_pair_check(p1: Partition, p2: Partition) -> bool:
    """Parts of each partition are bounded by ``n - len(other) + 1``."""
    if p1.n != p2.n:
        raise InputError(f"partitions of {p1.n} and {p2.n} cannot be compared")
    n = p1.n
    return p1.largest <= n - len(p2) + 1 and p2.largest <= n - len(p1) + 1


class NegativeCache:
    """Smallest refuted ``n`` per ``(k, max_primes, max_exponent)``."""

    def __init__(self):
        self._refuted: dict[tuple[int, int, int], int] = {}

    @staticmethod
    def _key(k: int, budget: SearchBudget) -> tuple[int, int, int]:
        return k, budget.max_primes, budget.max_exponent

    def record(self, n: int, k: int, budget: SearchBudget) -> None:
        key = self._key(k, budget)
        self._refuted[key] = min(n, self._refuted.get(key, n))

    def lookup(self, n: int, k: int, budget: SearchBudget) -> int | None:
        n0 = self._refuted.get(self._key(k, budget))
        return n0 if n0 is not None and n0 <= n else None


def _as_s_family(family: PartitionFamily) -> int | None:
    """``k`` when ``family == S(n, k)``, else ``None``."""
    k = max(p.largest for p in family)
    return k if family == family_S(family.n, k) else None


def obstruction_screen(family: PartitionFamily, cache: NegativeCache | None = None,
                       budget: SearchBudget | None = None) -> Verdict | None:
    """An OBSTRUCTED (or cached refutation) verdict, or ``None`` when all tests pass.

    Tests run in this order: more than one hook, hook condition, pairwise
    inequality, negative cache.  All failing tests are listed; the first one
    names the obstruction.
    """
    report = hook_report(family)
    failures: list[str] = []
    log: list[dict] = []
    if len(report.hooks) > 1:
        failures.append("multiple_hooks")
        log.append({"test": "multiple_hooks", "hooks": [list(h.parts) for h in report.hooks]})
    if not report.hooked:
        failures.append("hook_condition")
        log.append({"test": "hook_condition", "r": report.r, "t": report.t, "n": family.n})
    bad_pairs = [(a, b) for a, b in itertools.combinations(family.members, 2) if not blago_pair_check(a, b)]
    if bad_pairs:
        failures.append("pair_inequality")
        log.append({"test": "pair_inequality", "pairs": [[list(a.parts), list(b.parts)] for a, b in bad_pairs]})
    if failures:
        return Verdict(Status.OBSTRUCTED, family, obstruction=failures[0], obstructions=tuple(failures), log=log)
    if cache is not None and budget is not None:
        k = _as_s_family(family)
        n0 = cache.lookup(family.n, k, budget) if k is not None else None
        if n0 is not None:
            log.append({"test": "negative_cache", "refuted": [n0, k],
                        "note": f"S({n0},{k}) refuted within budget, so S(n,{k}) is too for n >= {n0}"})
            return Verdict(Status.REFUTED_WITHIN_BUDGET, family, obstruction="negative_cache",
                           obstructions=("negative_cache",), log=log)
    return None


# --- candidate generation --------------------------------------------------


@dataclass(frozen=True)
class _Shape:
    """Constraints on every candidate for a family."""

    n: int
    anchor: Partition
    blocks: tuple[int, ...]  # anchor parts >= 2
    ones: int
    h_max: int
    k_max: int
    type_range: tuple[int, ...]
    pinned_ranks: tuple[int, ...] | None  # exact descending rank vector when pinned


def _shape(family: PartitionFamily, budget: SearchBudget) -> _Shape:
    n = family.n
    anchor = min(family, key=lambda p: (p.largest, -len(p), p.parts))
    blocks = tuple(p for p in anchor.parts if p >= 2)
    h_max = min(p.largest for p in family)
    k_max = min(len(p) for p in family)
    max_types = min(budget.types_for(n), n)
    pinned = None
    hooks = [p for p in family if p.is_hook()]
    two_part = any(len(p) == 2 and p.parts[1] >= 2 for p in family)
    if hooks and two_part:
        k = hooks[0].largest
        doubles = n - k
        singles = 2 * k - n
        pinned = (2,) * doubles + (1,) * singles if singles >= 0 else ()
    if pinned is not None:
        types = (len(pinned),) if pinned and len(pinned) <= max_types else ()
    else:
        types = tuple(range(max(blocks, default=1), max_types + 1))
    return _Shape(n, anchor, blocks, anchor.parts.count(1), h_max, k_max, types, pinned)


def _row_options(s: int, k_max: int, ones: int) -> list[tuple[int, tuple[int, ...], int]]:
    """(rank, membership, ones) rows sorted by descending rank."""
    rows = []
    for member in itertools.product((1, 0), repeat=s):
        base = sum(member)
        for o in range(0, min(ones, k_max - base) + 1):
            if base + o >= 1:
                rows.append((base + o, member, o))
    rows.sort(key=lambda row: (-row[0], tuple(-b for b in row[1]), row[2]))
    return rows


def _incidences(shape: _Shape, r: int) -> list[tuple[tuple[int, tuple[int, ...], int], ...]]:
    """Type/block incidence structures up to relabelling of types and of
    equal-size blocks."""
    s = len(shape.blocks)
    options = _row_options(s, shape.k_max, shape.ones)
    want = Counter(shape.pinned_ranks) if shape.pinned_ranks is not None else None
    found: dict[tuple, tuple] = {}
    column_perms = [perm for perm in itertools.permutations(range(s))
                    if all(shape.blocks[perm[j]] == shape.blocks[j] for j in range(s))]

    def canonical(rows):
        best = None
        for perm in column_perms:
            image = tuple(sorted((rk, tuple(m[perm[j]] for j in range(s)), o) for rk, m, o in rows))
            if best is None or image < best:
                best = image
        return best

    def extend(start, chosen, colrem, onesrem, ranks_left):
        left = r - len(chosen)
        if left == 0:
            if not any(colrem) and onesrem == 0:
                rows = tuple(chosen)
                found.setdefault(canonical(rows), rows)
            return
        if max(colrem, default=0) > left or sum(colrem) + onesrem < left:
            return
        if sum(colrem) + onesrem > left * shape.k_max:
            return
        for idx in range(start, len(options)):
            rk, member, o = options[idx]
            if o > onesrem or any(m > c for m, c in zip(member, colrem)):
                continue
            if ranks_left is not None and not ranks_left[rk]:
                continue
            if ranks_left is not None:
                ranks_left[rk] -= 1
            chosen.append(options[idx])
            extend(idx, chosen, [c - m for c, m in zip(colrem, member)], onesrem - o, ranks_left)
            chosen.pop()
            if ranks_left is not None:
                ranks_left[rk] += 1

    extend(0, [], list(shape.blocks), shape.ones, want)
    out = []
    for rows in found.values():
        ordered = tuple(sorted(rows, key=lambda row: (-row[0], tuple(-b for b in row[1]), row[2])))
        out.append(ordered)
    out.sort()
    return out


@lru_cache(maxsize=None)
def _local_edge_sets(c: int, h_max: int, count: int) -> tuple[tuple[int, ...], ...]:
    """Multisets of ``count`` edges (size 2..h_max) on ``c`` local vertices that
    connect all of them."""
    full = (1 << c) - 1
    masks = [m for m in range(1, full + 1) if 2 <= popcount(m) <= h_max]
    out = []
    for combo in itertools.combinations_with_replacement(masks, count):
        union = 0
        for m in combo:
            union |= m
        if union == full and is_connected(combo):
            out.append(combo)
    return tuple(out)


def _min_edges(c: int, h_max: int) -> int:
    return math.ceil((c - 1) / (h_max - 1)) if c > 1 else 0


def _lift(local: Sequence[int], members: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(1 << members[i] for i in bits(m)) for m in local)


@dataclass(frozen=True)
class _Candidate:
    ranks: tuple[int, ...]
    edges: tuple[int, ...]
    owners: tuple[int, ...]  # block index per edge
    blocks: tuple[int, ...]  # type bitmask per block
    ones: tuple[int, ...]  # rank-1 copies per type in the anchor decomposition


def _level(shape: _Shape, level: int, incidences_by_r, canon_cache, seen, deadline) -> Iterator[_Candidate]:
    for r, incidences in incidences_by_r:
        for rows in incidences:
            ranks = tuple(row[0] for row in rows)
            s = len(shape.blocks)
            blocks = tuple(sum(1 << i for i, row in enumerate(rows) if row[1][j]) for j in range(s))
            members = [bits(b) for b in blocks]
            sizes = [len(m) for m in members]
            floor = [_min_edges(c, shape.h_max) for c in sizes]
            if sum(floor) > level:
                continue
            canon = canon_cache.get(ranks)
            if canon is None:
                canon = canon_cache[ranks] = Canonicalizer(ranks)
            all_types = (1 << r) - 1
            for counts in _compositions(level, floor):
                pools = [[_lift(loc, members[j]) for loc in _local_edge_sets(sizes[j], shape.h_max, counts[j])]
                         for j in range(s)]
                for choice in itertools.product(*pools):
                    if deadline is not None and time.monotonic() > deadline:
                        return
                    edges = tuple(itertools.chain.from_iterable(choice))
                    if not _within_caps(edges, ranks):
                        continue
                    if shape.pinned_ranks is not None:
                        union = 0
                        for m in edges:
                            union |= m
                        if union != all_types or not is_connected(edges):
                            continue
                    key = (ranks, canon.key(edges))
                    if key in seen:
                        continue
                    seen.add(key)
                    owners = tuple(itertools.chain.from_iterable([j] * len(c) for j, c in enumerate(choice)))
                    yield _Candidate(ranks, edges, owners, blocks, tuple(row[2] for row in rows))


def _compositions(total: int, floor: Sequence[int]) -> Iterator[tuple[int, ...]]:
    if not floor:
        if total == 0:
            yield ()
        return
    head, rest = floor[0], floor[1:]
    for x in range(head, total - sum(rest) + 1):
        for tail in _compositions(total - x, rest):
            yield (x,) + tail


def _within_caps(edges: Sequence[int], ranks: Sequence[int]) -> bool:
    for mask, count in Counter(edges).items():
        if count > min(ranks[i] for i in bits(mask)):
            return False
    return True


class _Tester:
    """Checks candidates against the family, moving the last failing
    partition to the front."""

    def __init__(self, family: PartitionFamily, anchor: Partition, mode: str):
        self.target = {p.parts for p in family}
        self.order = [p.parts for p in family if p != anchor]
        self.mode = mode

    def __call__(self, cand: _Candidate) -> bool:
        graph = Hypergraph(cand.ranks, cand.edges)
        for i, parts in enumerate(self.order):
            if not graph.realizes(parts):
                if i:
                    self.order.insert(0, self.order.pop(i))
                return False
        return self.mode == "contains" or graph.spectrum() == self.target


def _test_chunk(args) -> int | None:
    family_lists, anchor, mode, chunk, deadline = args
    tester = _Tester(PartitionFamily(family_lists), Partition(anchor), mode)
    for i, cand in enumerate(chunk):
        if deadline is not None and time.monotonic() > deadline:
            return -1
        if tester(cand):
            return i
    return None


def _witness(cand: _Candidate) -> BGroup:
    from .constructions import default_primes

    primes = default_primes(len(cand.edges), start=2)
    types = fresh_types(len(cand.ranks), avoid=math.prod(primes))
    pieces: list[RigidPiece] = []
    for j, block in enumerate(cand.blocks):
        owned = [(p, e) for p, e, o in zip(primes, cand.edges, cand.owners) if o == j]
        block_types = [types[i] for i in bits(block)]
        mu = {types[i]: math.prod(p for p, e in owned if e >> i & 1) for i in bits(block)}
        pieces.append(realize_from_invariants(block_types, mu))
    for i, count in enumerate(cand.ones):
        pieces.extend(RigidPiece((types[i],)) for _ in range(count))
    return direct_sum(pieces)


def search_realizer(family: PartitionFamily, mode: str = "equals", budget: SearchBudget | None = None,
                    threads: int = 1, cache: NegativeCache | None = None,
                    progress: Callable[[dict], None] | None = None) -> Verdict:
    """Bounded search for a group whose spectrum contains or equals ``family``."""
    from .decomp import partition_spectrum

    if mode not in ("contains", "equals"):
        raise InputError(f"mode must be 'contains' or 'equals', got {mode!r}")
    if not len(family):
        raise InputError("cannot search for an empty family")
    budget = budget or SearchBudget()
    started = time.monotonic()
    screened = obstruction_screen(family, cache, budget)
    if screened is not None:
        screened.mode = mode
        return screened
    shape = _shape(family, budget)
    deadline = started + budget.time_cap
    log: list[dict] = [{
        "event": "shape",
        "anchor": list(shape.anchor.parts),
        "max_edge_size": shape.h_max,
        "max_type_rank": shape.k_max,
        "type_counts": list(shape.type_range),
        "pinned_ranks": list(shape.pinned_ranks) if shape.pinned_ranks is not None else None,
        "exponent_note": "spectra do not depend on exponents; candidates use exponent 1",
    }]
    incidences_by_r = [(r, _incidences(shape, r)) for r in shape.type_range]
    log.append({"event": "incidences", "counts": {str(r): len(inc) for r, inc in incidences_by_r}})
    tester = _Tester(family, shape.anchor, mode)
    canon_cache: dict = {}
    total = 0
    workers = threads if threads > 0 else _cpu_count()

    def finish(status, witness=None, note=None):
        if note:
            log.append(note)
        return Verdict(status, family, mode, witness=witness, candidates=total, log=log,
                       elapsed=time.monotonic() - started)

    for level in range(0, budget.max_primes + 1):
        seen: set = set()
        level_count = 0
        hit = None
        if workers > 1:
            batch = list(_level(shape, level, incidences_by_r, canon_cache, seen, deadline))
            level_count = len(batch)
            hit = _parallel_first(family, shape.anchor, mode, batch, workers, deadline)
            if hit == -1:
                total += level_count
                return finish(Status.UNKNOWN, note={"event": "time_cap", "level": level})
        else:
            for cand in _level(shape, level, incidences_by_r, canon_cache, seen, deadline):
                level_count += 1
                if level_count % 64 == 0 and time.monotonic() > deadline:
                    break
                if tester(cand):
                    hit = cand
                    break
        total += level_count
        entry = {"event": "level", "primes": level, "candidates": level_count}
        log.append(entry)
        if progress:
            progress(entry)
        if hit is None and time.monotonic() > deadline:
            return finish(Status.UNKNOWN, note={"event": "time_cap", "level": level})
        if hit is not None:
            cand = batch[hit] if workers > 1 else hit
            witness = _witness(cand)
            spectrum = partition_spectrum(invariant_data(witness))
            ok = spectrum == family if mode == "equals" else family <= spectrum
            if not ok:
                raise AssertionError("search witness failed independent spectrum check")
            return finish(Status.REALIZED, witness, {"event": "witness", "primes": len(cand.edges),
                                                     "spectrum": spectrum.as_lists()})
    return finish(Status.REFUTED_WITHIN_BUDGET, note={
        "event": "exhausted",
        "candidates": total,
        "note": "no candidate within the budget realizes the family",
    })


def _cpu_count() -> int:
    import os

    return os.cpu_count() or 1


def _parallel_first(family, anchor, mode, batch, workers, deadline) -> int | None:
    if not batch:
        return None
    size = max(1, math.ceil(len(batch) / (workers * 4)))
    chunks = [batch[i:i + size] for i in range(0, len(batch), size)]
    args = [(family.as_lists(), anchor.parts, mode, chunk, deadline) for chunk in chunks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_test_chunk, args))
    for i, res in enumerate(results):
        if res == -1:
            return -1
        if res is not None:
            return i * size + res
    return None


# --- theorem table ---------------------------------------------------------


def known_realizer(n: int, k: int) -> tuple[BGroup, str] | None:
    """Explicit group for ``S(n, k)`` where a construction exists."""
    from .constructions import corner_group, homogeneous_free, named_example, rigid_indecomposable, sn2_realizer

    if k == 1:
        return homogeneous_free(n), "homogeneous completely decomposable group"
    if k == n:
        return rigid_indecomposable(n), "rigid indecomposable piece with all coefficients 1"
    if k == 2:
        return sn2_realizer(n), "parallel rank-2 pieces on one pair of types"
    if k == n - 1:
        return corner_group(n, 2), "Corner group with two parts"
    if (n, k) == (5, 3):
        return named_example("s53").group, "named example s53"
    if (n, k) == (6, 4):
        return named_example("s64").group, "named example s64"
    return None


#: Prime cap for checking explicit constructions; Corner groups use n - 2 primes.
CONSTRUCTION_PRIME_CAP = 12


@dataclass
class TheoremTable:
    n_max: int
    budget: SearchBudget
    cells: dict[tuple[int, int], Verdict]

    def status(self, n: int, k: int) -> Status:
        return self.cells[(n, k)].status

    def render(self) -> str:
        short = {Status.REALIZED: "R", Status.REFUTED_WITHIN_BUDGET: "x", Status.OBSTRUCTED: "o",
                 Status.UNKNOWN: "?"}
        lines = ["n\\k " + " ".join(f"{k:>2}" for k in range(1, self.n_max + 1))]
        for n in range(1, self.n_max + 1):
            row = [f"{short[self.cells[(n, k)].status]:>2}" for k in range(1, n + 1)]
            lines.append(f"{n:>3} " + " ".join(row))
        lines.append("R = REALIZED, x = REFUTED_WITHIN_BUDGET, o = OBSTRUCTED, ? = UNKNOWN")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        cells = []
        for (n, k), v in sorted(self.cells.items()):
            cell = {"n": n, "k": k, "status": v.status.value, "candidates": v.candidates,
                    "elapsed": round(v.elapsed, 3), "log": v.log}
            if v.witness is not None:
                from .groups import group_to_json

                cell["witness"] = group_to_json(v.witness)
            cells.append(cell)
        return {"n_max": self.n_max, "budget": self.budget.to_dict(), "cells": cells}


def verify_theorem_table(n_max: int, budget: SearchBudget | None = None, threads: int = 1,
                         propagate: bool = False,
                         progress: Callable[[int, int, Verdict], None] | None = None) -> TheoremTable:
    """Verdicts for every ``S(n, k)`` with ``1 <= k <= n <= n_max``.

    Cells with an explicit construction are checked directly; every other
    cell is searched.  With ``propagate`` a refutation of ``S(n0, k)`` is
    carried to all larger ``n`` through the negative cache instead of being
    searched.  That shortcut rests on a monotonicity claim which the search
    itself contradicts (``S(6,3)`` is refuted but ``S(7,3)`` is realized),
    so it is off by default.
    """
    from .decomp import partition_spectrum

    if isinstance(n_max, bool) or not isinstance(n_max, int) or not 1 <= n_max <= 12:
        raise InputError(f"n_max must lie in 1..12, got {n_max!r}")
    budget = budget or SearchBudget()
    cache = NegativeCache() if propagate else None
    cells: dict[tuple[int, int], Verdict] = {}
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            family = family_S(n, k)
            started = time.monotonic()
            verdict = None
            known = known_realizer(n, k)
            if known is not None:
                group, how = known
                # constructions may use more primes than the search budget
                spectrum = partition_spectrum(invariant_data(group), prime_cap=CONSTRUCTION_PRIME_CAP)
                if spectrum == family:
                    primes = len([p for p in group.pieces if p.index > 1])
                    verdict = Verdict(Status.REALIZED, family, witness=group, log=[
                        {"event": "construction", "source": how, "pieces_with_primes": primes}])
                    verdict.elapsed = time.monotonic() - started
            if verdict is None:
                verdict = search_realizer(family, "equals", budget, threads=threads, cache=cache)
                if cache is not None and verdict.status is Status.REFUTED_WITHIN_BUDGET:
                    cache.record(n, k, budget)
            cells[(n, k)] = verdict
            if progress:
                progress(n, k, verdict)
    return TheoremTable(n_max, budget, cells)


__all__ = [
    "NegativeCache",
    "SearchBudget",
    "Status",
    "TheoremTable",
    "Verdict",
    "blago_pair_check",
    "known_realizer",
    "obstruction_screen",
    "search_realizer",
    "verify_theorem_table",
]
