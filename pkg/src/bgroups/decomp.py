"""Indecomposable decompositions and partition spectra of near-isomorphism classes.

Every prime ``p`` of the index is owned by exactly one summand, whose typeset
must contain all types with ``p | mu``.  A summand's typeset is the union of
the supports of its primes and must be connected through them; remaining
copies of each type become rank-1 summands with ``mu = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._hyper import Hypergraph, bits
from .errors import InputError, ResourceError
from .groups import (
    BGroup,
    InvariantData,
    PrimeType,
    direct_sum,
    factor,
    realize_from_invariants,
)
from .partitions import Partition, PartitionFamily

RANK_CAP = 12
PRIME_CAP = 8


@dataclass(frozen=True)
class Decomposition:
    summands: tuple[InvariantData, ...]

    @property
    def partition(self) -> Partition:
        return Partition(tuple(s.n for s in self.summands))

    def key(self) -> tuple:
        return tuple(sorted(s.key() for s in self.summands))

    def as_group(self) -> BGroup:
        pieces = [realize_from_invariants(s.types, s.mu) for s in self.summands]
        return direct_sum(pieces)

    def to_dict(self) -> dict:
        return {
            "partition": list(self.partition.parts),
            "summands": [
                {"types": [t.label for t in s.types], "index": s.e, "mu": {t.label: m for t, m in s.mu.items()}}
                for s in self.summands
            ],
        }

    def __str__(self) -> str:
        return " + ".join(str(realize_from_invariants(s.types, s.mu)) for s in self.summands)


@dataclass(frozen=True)
class _Reduced:
    data: InvariantData
    types: tuple[PrimeType, ...]
    primes: tuple[int, ...]
    graph: Hypergraph


def _reduce(d: InvariantData, rank_cap: int, prime_cap: int) -> _Reduced:
    d.validate().raise_if_invalid()
    if d.n > rank_cap:
        raise ResourceError(f"total rank {d.n} exceeds the cap {rank_cap}", dimension="rank", cap=rank_cap)
    primes = tuple(sorted(factor(d.e)))
    if len(primes) > prime_cap:
        raise ResourceError(f"{len(primes)} index primes exceed the cap {prime_cap}",
                            dimension="primes", cap=prime_cap)
    types = d.types
    edges = [sum(1 << i for i, t in enumerate(types) if d.mu[t] % p == 0) for p in primes]
    return _Reduced(d, types, primes, Hypergraph([d.ranks[t] for t in types], edges))


def _p_part(m: int, p: int) -> int:
    out = 1
    while m % p == 0:
        m //= p
        out *= p
    return out


def enumerate_decompositions(d: InvariantData, rank_cap: int = RANK_CAP,
                             prime_cap: int = PRIME_CAP) -> list[Decomposition]:
    """All decompositions of ``d`` into indecomposable classes, each once."""
    red = _reduce(d, rank_cap, prime_cap)
    g = red.graph
    out = {}
    for groups in g.decompositions():
        summands = []
        used = [0] * len(red.types)
        for s in groups:
            owned = [red.primes[i] for i in bits(s)]
            members = bits(g.union[s])
            entries = []
            for t in members:
                tau = red.types[t]
                mu = 1
                for p in owned:
                    mu *= _p_part(d.mu[tau], p)
                entries.append((tau, 1, mu))
                used[t] += 1
            summands.append(InvariantData(tuple(entries)))
        for t, tau in enumerate(red.types):
            summands.extend(InvariantData(((tau, 1, 1),)) for _ in range(g.ranks[t] - used[t]))
        dec = Decomposition(tuple(summands))
        out.setdefault(dec.key(), dec)
    return sorted(out.values(), key=lambda x: (tuple(-p for p in x.partition.parts), x.key()))


def partition_spectrum(d: InvariantData, rank_cap: int = RANK_CAP, prime_cap: int = PRIME_CAP) -> PartitionFamily:
    red = _reduce(d, rank_cap, prime_cap)
    return PartitionFamily((Partition(p) for p in red.graph.spectrum()), n=d.n)


def realizes(d: InvariantData, p: Partition, rank_cap: int = RANK_CAP, prime_cap: int = PRIME_CAP) -> bool:
    if p.n != d.n:
        raise InputError(f"partition of {p.n} cannot describe a group of rank {d.n}")
    return _reduce(d, rank_cap, prime_cap).graph.realizes(p.parts)

