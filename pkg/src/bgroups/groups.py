"""Rigid pieces in standard form, their direct sums, and near-isomorphism data.

A rigid piece ``[t1 ... tr; e]`` carries an index ``e`` and one coefficient
``alpha_t`` per type, each dividing ``e``.  Integers are plain Python ints;
prime factorizations are produced on demand with :func:`sympy.factorint`.

>>> t = fresh_types(2, avoid=15)
>>> mu_invariants(RigidPiece.make(t, 15))[t[0]]
15
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from sympy import factorint, isprime, nextprime

from .errors import InputError, ParseError, PreconditionError, ValidationError


# --- integer helpers -------------------------------------------------------


def factor(n: int) -> dict[int, int]:
    if n < 1:
        raise InputError(f"cannot factor non-positive integer {n}")
    return {int(p): int(k) for p, k in factorint(n).items()}


def prime_support(n: int) -> frozenset[int]:
    return frozenset(factor(n))


def from_factors(factors: Mapping[int, int]) -> int:
    out = 1
    for p, k in factors.items():
        out *= int(p) ** int(k)
    return out


def valuation(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def gcd_base(e: int, coeffs: Sequence[int]) -> int:
    """gcd of ``e`` with the coordinates of ``sum c_i v_i`` over an e-basis.

    Equals ``e / ord(c + e Z^r)``; an empty list is the zero element, giving ``e``.
    """
    if e < 1:
        raise InputError(f"e must be positive, got {e}")
    if any(c < 0 for c in coeffs):
        raise InputError("coefficients must be non-negative")
    return math.gcd(e, *coeffs)


# --- types -----------------------------------------------------------------


@dataclass(frozen=True)
class PrimeType:
    """Type of the subgroup of Q generated by ``1/p`` for the inverted primes."""

    label: str
    inverted_primes: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        primes = frozenset(int(p) for p in self.inverted_primes)
        bad = sorted(p for p in primes if not isprime(p))
        if bad:
            raise InputError(f"type {self.label!r}: {bad} are not primes")
        object.__setattr__(self, "inverted_primes", primes)
        object.__setattr__(self, "label", str(self.label))

    def __le__(self, other: "PrimeType") -> bool:
        return self.inverted_primes <= other.inverted_primes

    def comparable(self, other: "PrimeType") -> bool:
        return self.inverted_primes <= other.inverted_primes or other.inverted_primes <= self.inverted_primes

    def is_free_of(self, e: int) -> bool:
        return all(e % p for p in self.inverted_primes)

    def __repr__(self) -> str:
        return f"PrimeType({self.label!r}, {sorted(self.inverted_primes)})"

    def __str__(self) -> str:
        return self.label


def fresh_types(count: int, avoid: int = 1, prefix: str = "t", start: int = 1) -> tuple[PrimeType, ...]:
    """``count`` pairwise incomparable types, each inverting one fresh prime
    larger than every prime dividing ``avoid``."""
    p = max(factor(avoid), default=2)
    out = []
    for i in range(count):
        p = nextprime(p)
        out.append(PrimeType(f"{prefix}{start + i}", frozenset({p})))
    return tuple(out)


# --- validation reports ----------------------------------------------------


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    detail: Mapping = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, **dict(self.detail)}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def raise_if_invalid(self) -> None:
        if self.violations:
            raise ValidationError(self)

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_dict() for v in self.violations]}


def _antichain_violations(types: Sequence[PrimeType], where: str) -> list[Violation]:
    out = []
    distinct: dict[frozenset, PrimeType] = {}
    labels: dict[str, PrimeType] = {}
    for t in types:
        seen = labels.get(t.label)
        if seen is not None and seen != t:
            out.append(Violation("LABEL_CONFLICT", f"{where}: label {t.label!r} names two different types",
                                 {"type": t.label}))
        labels[t.label] = t
        other = distinct.get(t.inverted_primes)
        if other is not None and other.label != t.label:
            out.append(Violation("DUPLICATE_TYPE", f"{where}: {other.label} and {t.label} are the same type",
                                 {"types": [other.label, t.label]}))
        distinct.setdefault(t.inverted_primes, t)
    reps = list(distinct.values())
    for i, a in enumerate(reps):
        for b in reps[i + 1:]:
            if a.comparable(b):
                out.append(Violation("NOT_ANTICHAIN", f"{where}: types {a.label} and {b.label} are comparable",
                                     {"types": [a.label, b.label]}))
    return out


# --- rigid pieces ----------------------------------------------------------


@dataclass(frozen=True)
class RigidPiece:
    """``[typeset; index]`` with one coefficient per type.

    Construction does not validate; use :func:`validate_rigid` or
    :func:`direct_sum`.
    """

    typeset: tuple[PrimeType, ...]
    index: int = 1
    coefficients: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "typeset", tuple(self.typeset))
        coeffs = tuple(int(c) for c in self.coefficients) or (1,) * len(self.typeset)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "index", int(self.index))

    @classmethod
    def make(cls, types: Iterable[PrimeType], index: int = 1, coefficients: Iterable[int] = ()) -> "RigidPiece":
        return cls(tuple(types), index, tuple(coefficients))

    @property
    def rank(self) -> int:
        return len(self.typeset)

    def coefficient(self, t: PrimeType) -> int:
        return self.coefficients[self.typeset.index(t)]

    def __str__(self) -> str:
        types = " ".join(t.label for t in self.typeset)
        if self.index == 1:
            return f"[{types}]"
        coeffs = "" if all(c == 1 for c in self.coefficients) else f"; alpha={self.coefficients}"
        return f"[{types}; {self.index}{coeffs}]"


def validate_rigid(p: RigidPiece) -> ValidationReport:
    """Check every standard-form clause; violations are listed in check order."""
    out: list[Violation] = []
    e = p.index
    if p.rank == 0:
        return ValidationReport((Violation("EMPTY_TYPESET", "a rigid piece needs at least one type"),))
    if e < 1:
        return ValidationReport((Violation("BAD_INDEX", f"index must be positive, got {e}"),))
    if len(p.coefficients) != p.rank:
        return ValidationReport((Violation("COEFF_COUNT", f"{len(p.coefficients)} coefficients for rank {p.rank}"),))
    labels = [t.label for t in p.typeset]
    if len(set(labels)) != len(labels) or len(set(p.typeset)) != p.rank:
        out.append(Violation("REPEATED_TYPE", "a rigid piece lists each type once", {"types": labels}))
    out += _antichain_violations(p.typeset, "piece")
    for t in p.typeset:
        if not t.is_free_of(e):
            shared = sorted(q for q in t.inverted_primes if e % q == 0)
            out.append(Violation("NOT_E_FREE", f"type {t.label} inverts {shared}, which divide the index {e}",
                                 {"type": t.label, "primes": shared}))
    for t, a in zip(p.typeset, p.coefficients):
        if a < 1 or e % a:
            out.append(Violation("COEFF_NOT_DIVISOR", f"coefficient {a} of {t.label} does not divide {e}",
                                 {"type": t.label, "coefficient": a}))
    if out:
        return ValidationReport(tuple(out))
    if p.rank == 1:
        if e != 1:
            out.append(Violation("RANK1_INDEX", f"a rank-1 piece must have index 1, got {e}",
                                 {"type": labels[0], "index": e}))
        return ValidationReport(tuple(out))
    for i, t in enumerate(p.typeset):
        g = gcd_base(e, p.coefficients[:i] + p.coefficients[i + 1:])
        if g != 1:
            out.append(Violation("REGULATOR_CRITERION",
                                 f"gcd of {e} with the coefficients off {t.label} is {g}",
                                 {"type": t.label, "gcd": g}))
    return ValidationReport(tuple(out))


def mu_invariants(p: RigidPiece) -> dict[PrimeType, int]:
    validate_rigid(p).raise_if_invalid()
    return {t: p.index // a for t, a in zip(p.typeset, p.coefficients)}


# --- direct sums -----------------------------------------------------------


@dataclass(frozen=True)
class BGroup:
    """Direct sum of rigid pieces.  Build with :func:`direct_sum` to validate."""

    pieces: tuple[RigidPiece, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    @property
    def rank(self) -> int:
        return sum(p.rank for p in self.pieces)

    @property
    def index(self) -> int:
        return math.prod(p.index for p in self.pieces)

    def types(self) -> tuple[PrimeType, ...]:
        seen: dict[PrimeType, None] = {}
        for p in self.pieces:
            for t in p.typeset:
                seen.setdefault(t)
        return tuple(seen)

    def __str__(self) -> str:
        return " + ".join(str(p) for p in self.pieces)


def validate_group(pieces: Sequence[RigidPiece]) -> ValidationReport:
    out: list[Violation] = []
    if not pieces:
        return ValidationReport((Violation("EMPTY_GROUP", "a group needs at least one piece"),))
    for i, p in enumerate(pieces):
        for v in validate_rigid(p).violations:
            out.append(Violation(v.code, f"piece {i}: {v.message}", {"piece": i, **dict(v.detail)}))
    for i, a in enumerate(pieces):
        for j in range(i + 1, len(pieces)):
            g = math.gcd(a.index, pieces[j].index)
            if g != 1:
                out.append(Violation("INDEX_NOT_COPRIME",
                                     f"pieces {i} and {j} have indices sharing the factor {g}",
                                     {"pieces": [i, j], "gcd": g}))
    all_types = [t for p in pieces for t in p.typeset]
    out += _antichain_violations(all_types, "group")
    e = math.prod(p.index for p in pieces)
    for t in dict.fromkeys(all_types):
        if not t.is_free_of(e):
            shared = sorted(q for q in t.inverted_primes if e % q == 0)
            v = Violation("NOT_E_FREE", f"type {t.label} inverts {shared}, which divide the group index",
                          {"type": t.label, "primes": shared})
            if v not in out:
                out.append(v)
    seen = set()
    unique = []
    for v in out:
        key = (v.code, v.message)
        if key not in seen:
            seen.add(key)
            unique.append(v)
    return ValidationReport(tuple(unique))


def direct_sum(pieces: Iterable[RigidPiece]) -> BGroup:
    pieces = tuple(pieces)
    validate_group(pieces).raise_if_invalid()
    return BGroup(pieces)


# --- invariant data --------------------------------------------------------


@dataclass(frozen=True)
class InvariantData:
    """Near-isomorphism class: per type its homogeneous rank and ``mu``.

    ``entries`` holds ``(type, rank, mu)`` triples in first-seen order.
    """

    entries: tuple[tuple[PrimeType, int, int], ...]

    def __post_init__(self):
        entries = tuple((t, int(k), int(m)) for t, k, m in self.entries)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_maps(cls, ranks: Mapping[PrimeType, int], mu: Mapping[PrimeType, int]) -> "InvariantData":
        return cls(tuple((t, ranks[t], mu.get(t, 1)) for t in ranks))

    @property
    def types(self) -> tuple[PrimeType, ...]:
        return tuple(t for t, _, _ in self.entries)

    @property
    def ranks(self) -> dict[PrimeType, int]:
        return {t: k for t, k, _ in self.entries}

    @property
    def mu(self) -> dict[PrimeType, int]:
        return {t: m for t, _, m in self.entries}

    @property
    def n(self) -> int:
        return sum(k for _, k, _ in self.entries)

    @property
    def e(self) -> int:
        return math.lcm(*(m for _, _, m in self.entries)) if self.entries else 1

    def key(self) -> tuple:
        """Label-sorted form used for deduplication and equality tests."""
        return tuple(sorted((t.label, tuple(sorted(t.inverted_primes)), k, m) for t, k, m in self.entries))

    def validate(self) -> ValidationReport:
        out: list[Violation] = []
        labels = [t.label for t in self.types]
        if len(set(labels)) != len(labels):
            out.append(Violation("REPEATED_TYPE", "each type may appear once in invariant data"))
        for t, k, m in self.entries:
            if k < 1:
                out.append(Violation("BAD_RANK", f"rank of {t.label} must be positive", {"type": t.label}))
            if m < 1:
                out.append(Violation("BAD_MU", f"mu of {t.label} must be positive", {"type": t.label}))
        if out:
            return ValidationReport(tuple(out))
        out += _antichain_violations(self.types, "invariant data")
        e = self.e
        for t in self.types:
            if not t.is_free_of(e):
                out.append(Violation("NOT_E_FREE", f"type {t.label} inverts a prime dividing {e}",
                                     {"type": t.label}))
        for p in sorted(factor(e)):
            top = max(valuation(m, p) for _, _, m in self.entries)
            at = [t.label for t, _, m in self.entries if valuation(m, p) == top]
            if len(at) < 2:
                out.append(Violation("REGULATOR_CRITERION",
                                     f"prime {p} attains its top valuation only at {at[0]}",
                                     {"prime": p, "type": at[0]}))
        return ValidationReport(tuple(out))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "e": self.e,
            "types": [
                {"label": t.label, "inverted_primes": sorted(t.inverted_primes), "rank": k, "mu": m,
                 "mu_factors": _factor_json(m)}
                for t, k, m in self.entries
            ],
        }


def invariant_data(g: BGroup) -> InvariantData:
    validate_group(g.pieces).raise_if_invalid()
    ranks: dict[PrimeType, int] = {}
    mu: dict[PrimeType, int] = {}
    for p in g.pieces:
        for t, m in mu_invariants(p).items():
            ranks[t] = ranks.get(t, 0) + 1
            mu[t] = mu.get(t, 1) * m
    return InvariantData.from_maps(ranks, mu)


def near_iso_equal(d1: InvariantData, d2: InvariantData) -> bool:
    return d1.ranks == d2.ranks and d1.mu == d2.mu


def is_clipped(d: InvariantData) -> bool:
    return all(k == 1 and m > 1 for _, k, m in d.entries)


# --- frames ----------------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    vertices: tuple[PrimeType, ...]
    edges: frozenset[frozenset[PrimeType]]

    def components(self) -> list[list[PrimeType]]:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for edge in self.edges:
            a, b = tuple(edge)
            parent[find(a)] = find(b)
        groups: dict[PrimeType, list[PrimeType]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def edge_list(self) -> list[tuple[str, str]]:
        order = {v: i for i, v in enumerate(self.vertices)}
        pairs = sorted(tuple(sorted(order[v] for v in edge)) for edge in self.edges)
        return [(self.vertices[i].label, self.vertices[j].label) for i, j in pairs]

    def to_dict(self) -> dict:
        return {
            "vertices": [v.label for v in self.vertices],
            "edges": [list(e) for e in self.edge_list()],
            "connected": self.is_connected(),
        }


def frame_of(mu: Mapping[PrimeType, int] | InvariantData) -> Frame:
    if isinstance(mu, InvariantData):
        mu = mu.mu
    verts = tuple(mu)
    edges = frozenset(
        frozenset((a, b))
        for i, a in enumerate(verts)
        for b in verts[i + 1:]
        if math.gcd(mu[a], mu[b]) > 1
    )
    return Frame(verts, edges)


def is_indecomposable(p: RigidPiece) -> bool:
    mu = mu_invariants(p)
    return p.rank == 1 or frame_of(mu).is_connected()


# --- overlap merge and realization ----------------------------------------


def merge_overlap(x1: RigidPiece, x2: RigidPiece) -> tuple[RigidPiece, tuple[PrimeType, ...]]:
    """Rewrite ``x1 + x2`` with overlapping typesets as one piece on the union
    plus a rank-1 summand for each shared type."""
    validate_group((x1, x2)).raise_if_invalid()
    shared = [t for t in x1.typeset if t in x2.typeset]
    if not shared:
        raise PreconditionError("pieces share no type; use direct_sum", code="no_overlap")
    e1, e2 = x1.index, x2.index
    types: list[PrimeType] = []
    coeffs: list[int] = []
    for t, a in zip(x1.typeset, x1.coefficients):
        types.append(t)
        coeffs.append(math.gcd(e2 * a, e1 * x2.coefficient(t)) if t in x2.typeset else e2 * a)
    for t, b in zip(x2.typeset, x2.coefficients):
        if t not in x1.typeset:
            types.append(t)
            coeffs.append(e1 * b)
    y = RigidPiece(tuple(types), e1 * e2, tuple(coeffs))
    validate_rigid(y).raise_if_invalid()
    return y, tuple(shared)


def realize_from_invariants(types: Sequence[PrimeType], mu: Mapping[PrimeType, int]) -> RigidPiece:
    """Standard-form piece with ``e = lcm(mu)`` and ``alpha_t = e / mu_t``.

    Raises :class:`ValidationError` naming the prime and the lone type when
    some prime reaches its top valuation at a single type.
    """
    types = tuple(types)
    missing = [t.label for t in types if t not in mu]
    if missing:
        raise InputError(f"no mu given for {missing}")
    data = InvariantData(tuple((t, 1, mu[t]) for t in types))
    report = data.validate()
    if report.valid and len(types) == 1 and mu[types[0]] != 1:
        report = ValidationReport((Violation("RANK1_INDEX", "a rank-1 piece must have mu = 1",
                                             {"type": types[0].label}),))
    report.raise_if_invalid()
    e = data.e
    piece = RigidPiece(types, e, tuple(e // mu[t] for t in types))
    validate_rigid(piece).raise_if_invalid()
    return piece


# --- JSON ------------------------------------------------------------------


def _factor_json(n: int) -> dict[str, int]:
    return {str(p): k for p, k in sorted(factor(n).items())}


_INT_KEY = re.compile(r"^[0-9]+$")


def _factors_from_json(obj: Mapping[str, int], where: str) -> int:
    factors = {}
    for p, k in obj.items():
        if not _INT_KEY.match(str(p)) or not isprime(int(p)):
            raise ParseError(f"{p!r} is not a prime", location=where)
        factors[int(p)] = int(k)
    return from_factors(factors)


def group_to_json(g: BGroup) -> dict:
    type_defs = {t.label: {"inverted_primes": sorted(t.inverted_primes)} for t in g.types()}
    pieces = []
    for p in g.pieces:
        piece = {"types": [t.label for t in p.typeset], "index": _factor_json(p.index)}
        piece["coefficients"] = {t.label: _factor_json(a) for t, a in zip(p.typeset, p.coefficients)}
        pieces.append(piece)
    return {"type_defs": type_defs, "pieces": pieces}


def group_from_json(doc: Mapping, validate: bool = True) -> BGroup:
    from .schemas import check_schema

    check_schema(doc, "group")
    types = {}
    for label, spec in doc["type_defs"].items():
        try:
            types[label] = PrimeType(label, frozenset(spec["inverted_primes"]))
        except InputError as exc:
            raise ParseError(str(exc), location=f"type_defs.{label}") from exc
    pieces = []
    for i, spec in enumerate(doc["pieces"]):
        where = f"pieces[{i}]"
        try:
            typeset = tuple(types[label] for label in spec["types"])
        except KeyError as exc:
            raise ParseError(f"undefined type {exc.args[0]!r}", location=f"{where}.types") from exc
        index = _factors_from_json(spec.get("index", {}), f"{where}.index")
        coeff_spec = spec.get("coefficients")
        if coeff_spec is None:
            if len(typeset) > 2:
                raise ParseError("coefficients are required for rank above 2", location=f"{where}.coefficients")
            coeffs = (1,) * len(typeset)
        else:
            unknown = set(coeff_spec) - set(spec["types"])
            if unknown:
                raise ParseError(f"coefficients for types outside the piece: {sorted(unknown)}",
                                 location=f"{where}.coefficients")
            coeffs = tuple(_factors_from_json(coeff_spec.get(label, {}), f"{where}.coefficients.{label}")
                           for label in spec["types"])
        pieces.append(RigidPiece(typeset, index, coeffs))
    return direct_sum(pieces) if validate else BGroup(tuple(pieces))
