"""Named generators: Corner groups, chain groups, S(n,2) realizers and the
worked example groups with their companions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from sympy import nextprime

from .errors import InputError
from .groups import BGroup, RigidPiece, direct_sum, fresh_types, gcd_base
from .partitions import Partition, PartitionFamily, family_S


def default_primes(count: int, start: int = 3) -> tuple[int, ...]:
    """The ``count`` smallest primes that are at least ``start``."""
    out = []
    p = start - 1
    for _ in range(count):
        p = nextprime(p)
        out.append(int(p))
    return tuple(out)


def _check_coprime(values: Sequence[int], what: str) -> tuple[int, ...]:
    values = tuple(int(v) for v in values)
    for v in values:
        if v <= 1:
            raise InputError(f"{what} must be integers > 1, got {v}")
    for i, a in enumerate(values):
        for b in values[i + 1:]:
            if math.gcd(a, b) != 1:
                raise InputError(f"{what} must be pairwise coprime: gcd({a}, {b}) = {math.gcd(a, b)}")
    return values


def corner_group(n: int, k: int, q: Sequence[int] | None = None) -> BGroup:
    """``k - 1`` copies of ``[t0]`` plus one rigid piece on ``t0, t1, ..., t_{n-k}``
    with ``mu(t0) = q1 ... q_{n-k}`` and ``mu(ti) = qi``."""
    if not 1 <= k <= n:
        raise InputError(f"need 1 <= k <= n, got n={n}, k={k}")
    q = default_primes(n - k) if q is None else _check_coprime(q, "Corner moduli")
    if len(q) != n - k:
        raise InputError(f"need n - k = {n - k} moduli, got {len(q)}")
    e = math.prod(q)
    types = fresh_types(n - k + 1, avoid=e, start=0)
    tau = types[0]
    cofactors = [e // qi for qi in q]
    # combined generator (e1 + ... + e_{n-k}) u1 + e1 v1 + ... , reduced mod e
    alpha = (gcd_base(e, [sum(cofactors)]),) + tuple(gcd_base(e, [c]) for c in cofactors)
    pieces = [RigidPiece((tau,)) for _ in range(k - 1)]
    pieces.append(RigidPiece(types, e, alpha))
    return direct_sum(pieces)


def chain_group(n: int, p: Sequence[int] | None = None) -> BGroup:
    """``[t1 t2; p1] + [t2 t3; p2] + ... + [tn t_{n+1}; pn]``."""
    if n < 1:
        raise InputError(f"chain length must be positive, got {n}")
    p = default_primes(n) if p is None else _check_coprime(p, "chain indices")
    if len(p) != n:
        raise InputError(f"need {n} chain indices, got {len(p)}")
    types = fresh_types(n + 1, avoid=math.prod(p))
    return direct_sum(RigidPiece((types[i], types[i + 1]), p[i]) for i in range(n))


def sn2_realizer(n: int, primes: Sequence[int] | None = None) -> BGroup:
    """``n // 2`` copies of ``[t1 t2]`` with coprime indices, plus ``[t1]`` for odd ``n``."""
    if n < 2:
        raise InputError(f"S(n,2) needs n >= 2, got {n}")
    p = default_primes(n // 2) if primes is None else _check_coprime(primes, "indices")
    if len(p) != n // 2:
        raise InputError(f"need {n // 2} indices, got {len(p)}")
    t1, t2 = fresh_types(2, avoid=math.prod(p))
    pieces = [RigidPiece((t1, t2), pi) for pi in p]
    if n % 2:
        pieces.append(RigidPiece((t1,)))
    return direct_sum(pieces)


def rigid_indecomposable(n: int, p: int = 3) -> BGroup:
    """``[t1 ... tn; p]`` with all coefficients 1 (a single ``[t1]`` when n = 1)."""
    if n < 1:
        raise InputError(f"rank must be positive, got {n}")
    types = fresh_types(n, avoid=p)
    return direct_sum([RigidPiece(types, p if n > 1 else 1)])


def homogeneous_free(n: int) -> BGroup:
    """``n`` copies of one rank-1 type."""
    if n < 1:
        raise InputError(f"rank must be positive, got {n}")
    (t,) = fresh_types(1)
    return direct_sum([RigidPiece((t,))] * n)


@dataclass(frozen=True)
class NamedExample:
    name: str
    group: BGroup
    expected_spectrum: PartitionFamily | None = None
    expected_contains: tuple[Partition, ...] = ()
    companions: dict[str, BGroup] = field(default_factory=dict)
    provenance: str = ""


def _s42(p: Sequence[int] = (3, 5)) -> NamedExample:
    t1, t2 = fresh_types(2, avoid=math.prod(p))
    x = direct_sum([RigidPiece((t1, t2), p[0]), RigidPiece((t1, t2), p[1])])
    return NamedExample("s42", x, family_S(4, 2),
                        provenance="two rank-2 pieces on the same pair of types")


def _s53_pieces(p: Sequence[int]):
    p1, p2, p3 = p
    t1, t2, t3 = fresh_types(3, avoid=p1 * p2 * p3)
    x = direct_sum([
        RigidPiece((t1, t2), p2 * p3),
        RigidPiece((t1, t3), p1),
        RigidPiece((t2,)),
    ])
    y = direct_sum([
        RigidPiece((t1, t2, t3), p1 * p2, (1, p1, p2)),
        RigidPiece((t1, t2), p3),
    ])
    return x, y


def _s53(p: Sequence[int] = (3, 5, 7)) -> NamedExample:
    x, y = _s53_pieces(p)
    return NamedExample("s53", x, family_S(5, 3), companions={"Y": y},
                        provenance="realizer of S(5,3); companion Y realizes (3,2)")


def _s53_alt(p: Sequence[int] = (3, 5, 7)) -> NamedExample:
    x, y = _s53_pieces(p)
    return NamedExample("s53_alt", y, family_S(5, 3), companions={"X": x},
                        provenance="the (3,2) form of the S(5,3) realizer")


def _s64_groups():
    t1, t2, t3, t4 = fresh_types(4, avoid=3 * 5 * 7 * 11)
    x = direct_sum([RigidPiece((t1, t2), 55), RigidPiece((t1, t3), 7), RigidPiece((t2, t4), 3)])
    # the rank-4 piece of y splits as [t1 t3; 7] + [t2 t4; 3], so y is another (2,2,2) form
    y = direct_sum([RigidPiece((t1, t2, t3, t4), 21, (3, 7, 3, 7)), RigidPiece((t1, t2), 55)])
    z = direct_sum([RigidPiece((t1, t2, t3), 35, (1, 7, 5)), RigidPiece((t1, t2, t4), 33, (3, 1, 11))])
    w = direct_sum([RigidPiece((t1, t2, t3, t4), 231, (3, 7, 33, 77)), RigidPiece((t1, t2), 5)])
    return x, y, z, w


def _s64() -> NamedExample:
    x, y, z, _ = _s64_groups()
    return NamedExample("s64", x, family_S(6, 4), companions={"Y": y, "Z": z},
                        provenance="realizer of S(6,4) with indices 55, 7, 3")


def _s64_42() -> NamedExample:
    x, _, _, w = _s64_groups()
    return NamedExample("s64_42", w, family_S(6, 4), companions={"X": x},
                        provenance="the (4,2) form of the S(6,4) realizer, indices 231 and 5")


def _s64_33() -> NamedExample:
    x, _, z, _ = _s64_groups()
    return NamedExample("s64_33", z, family_S(6, 4), companions={"X": x},
                        provenance="the (3,3) form of the S(6,4) realizer")


def _corner_thm() -> NamedExample:
    from .partitions import family_C

    return NamedExample("corner_thm", corner_group(4, 2, (3, 5)), family_C(4, 2),
                        provenance="Corner group with n=4, k=2, q=(3,5)")


def _ex_522_432() -> NamedExample:
    t = fresh_types(7, avoid=3 * 5 * 7 * 11)
    t1, t2, t3, t4, t5, t6, t7 = t
    x = direct_sum([
        RigidPiece((t1, t3, t4, t5, t6), 15, (1, 3, 3, 5, 5)),
        RigidPiece((t1, t2), 7),
        RigidPiece((t2, t7), 11),
    ])
    y = direct_sum([
        RigidPiece((t1, t2, t3, t4), 35, (1, 5, 7, 7)),
        RigidPiece((t1, t5, t6), 3),
        RigidPiece((t2, t7), 11),
    ])
    wanted = tuple(Partition(p) for p in [(5, 2, 2), (4, 3, 2), (5, 3, 1), (6, 2, 1), (7, 1, 1)])
    return NamedExample("ex_522_432", x, None, wanted, companions={"Y": y},
                        provenance="rank-9 group realizing both (5,2,2) and (4,3,2)")


_NAMED = {
    "s42": _s42,
    "s53": _s53,
    "s53_alt": _s53_alt,
    "s64": _s64,
    "s64_33": _s64_33,
    "s64_42": _s64_42,
    "corner_thm": _corner_thm,
    "ex_522_432": _ex_522_432,
}

EXAMPLE_NAMES = tuple(_NAMED)


def named_example(name: str) -> NamedExample:
    try:
        build = _NAMED[name]
    except KeyError:
        raise InputError(f"unknown example {name!r}; choose from {', '.join(EXAMPLE_NAMES)}") from None
    return build()
