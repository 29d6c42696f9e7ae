"""Integer partitions and families of partitions.

A :class:`Partition` is stored with its parts in non-increasing order; a
:class:`PartitionFamily` is a deduplicated set of partitions of one integer,
kept in descending lexicographic order so that text output is stable.

>>> str(family_S(4, 2))
'2,2\\n2,1,1'
>>> hook_report(family_S(10, 6)).hooks
(Partition(parts=(6, 1, 1, 1, 1)),)
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable

from sympy.utilities.iterables import partitions as _sympy_partitions

from .errors import InputError, ParseError, PreconditionError

#: Largest n accepted by :func:`enumerate_all` unless a caller overrides it.
ENUMERATION_CAP = 30


@dataclass(frozen=True, order=False)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if not parts:
            raise InputError("a partition needs at least one part")
        if any(p < 1 for p in parts):
            raise InputError(f"partition parts must be positive, got {parts}")
        object.__setattr__(self, "parts", tuple(sorted(parts, reverse=True)))

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def largest(self) -> int:
        return self.parts[0]

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __lt__(self, other: "Partition") -> bool:
        return self.parts < other.parts

    def is_hook(self) -> bool:
        """True for shapes ``(k, 1, ..., 1)``, including ``(n)`` and ``(1^n)``."""
        return all(p == 1 for p in self.parts[1:])

    def conjugate(self) -> "Partition":
        return Partition(tuple(sum(1 for p in self.parts if p > i) for i in range(self.largest)))

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))

    def compact(self) -> str:
        """Exponent notation, e.g. ``2^3,1^2``."""
        out = []
        i = 0
        while i < len(self.parts):
            j = i
            while j < len(self.parts) and self.parts[j] == self.parts[i]:
                j += 1
            out.append(f"{self.parts[i]}^{j - i}" if j - i > 1 else str(self.parts[i]))
            i = j
        return ",".join(out)


def _sort_key(p: Partition):
    return p.parts


class PartitionFamily:
    """Finite set of partitions of a common ``n``."""

    __slots__ = ("n", "members", "_set")

    def __init__(self, members: Iterable[Partition | Iterable[int]] = (), n: int | None = None):
        parts = [m if isinstance(m, Partition) else Partition(tuple(m)) for m in members]
        sizes = {p.n for p in parts}
        if n is None:
            if not sizes:
                raise InputError("an empty family needs an explicit n")
            if len(sizes) > 1:
                raise InputError(f"family members partition different integers: {sorted(sizes)}")
            n = sizes.pop()
        elif sizes - {n}:
            raise InputError(f"family members must all partition {n}, got sums {sorted(sizes)}")
        self.n = int(n)
        self._set = frozenset(parts)
        self.members = tuple(sorted(self._set, key=_sort_key, reverse=True))

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, item) -> bool:
        if not isinstance(item, Partition):
            item = Partition(tuple(item))
        return item in self._set

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartitionFamily):
            return NotImplemented
        return self.n == other.n and self._set == other._set

    def __hash__(self) -> int:
        return hash((self.n, self._set))

    def __le__(self, other: "PartitionFamily") -> bool:
        return self.n == other.n and self._set <= other._set

    def __or__(self, other: "PartitionFamily") -> "PartitionFamily":
        if self.n != other.n:
            raise InputError("cannot unite families of different n")
        return PartitionFamily(self._set | other._set, n=self.n)

    def __repr__(self) -> str:
        inner = ", ".join(f"({p})" for p in self.members)
        return f"PartitionFamily(n={self.n}, {{{inner}}})"

    def __str__(self) -> str:
        return "\n".join(str(p) for p in self.members)

    def as_lists(self) -> list[list[int]]:
        return [list(p.parts) for p in self.members]


def _check_n(n: int, cap: int | None = None) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise InputError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    if cap is not None and n > cap:
        raise InputError(f"n={n} exceeds the enumeration cap {cap}", cap=cap)
    return n


def _check_k(n: int, k: int) -> int:
    if isinstance(k, bool) or int(k) != k or not 1 <= int(k) <= n:
        raise InputError(f"k must lie in 1..{n}, got {k!r}")
    return int(k)


def _generate(n: int, max_parts: int | None = None, max_part: int | None = None):
    kwargs = {}
    if max_parts is not None:
        kwargs["m"] = max_parts
    if max_part is not None:
        kwargs["k"] = max_part
    for mult in _sympy_partitions(n, **kwargs):
        parts = []
        for value, count in mult.items():
            parts.extend([value] * count)
        yield Partition(tuple(parts))


def enumerate_all(n: int, cap: int = ENUMERATION_CAP) -> PartitionFamily:
    n = _check_n(n, cap)
    return PartitionFamily(_generate(n), n=n)


def family_C(n: int, k: int) -> PartitionFamily:
    """Partitions of ``n`` into exactly ``k`` parts."""
    n = _check_n(n, ENUMERATION_CAP)
    k = _check_k(n, k)
    return PartitionFamily((p for p in _generate(n, max_parts=k) if len(p) == k), n=n)


def family_S(n: int, k: int) -> PartitionFamily:
    """Partitions with largest part at most ``k`` and at most ``n + 1 - k`` parts."""
    n = _check_n(n, ENUMERATION_CAP)
    k = _check_k(n, k)
    return PartitionFamily(_generate(n, max_parts=n + 1 - k, max_part=k), n=n)


def hook(n: int, k: int) -> Partition:
    return Partition((k,) + (1,) * (n - k))


@dataclass(frozen=True)
class HookReport:
    n: int
    r: int
    t: int
    hooks: tuple[Partition, ...]
    hooked: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "t": self.t,
            "hooks": [list(h.parts) for h in self.hooks],
            "hooked": self.hooked,
        }


def hook_report(family: PartitionFamily) -> HookReport:
    if not len(family):
        raise InputError("hook report of an empty family")
    r = max(p.largest for p in family)
    t = max(len(p) for p in family)
    hooks = tuple(p for p in family if p.is_hook())
    return HookReport(family.n, r, t, hooks, r + t <= family.n + 1)


def family_product(first: PartitionFamily, second: PartitionFamily) -> PartitionFamily:
    return PartitionFamily(
        (Partition(p.parts + q.parts) for p in first for q in second), n=first.n + second.n
    )


def is_maximal_hooked(family: PartitionFamily) -> bool:
    if not hook_report(family).hooked:
        raise PreconditionError("family is not hooked")
    for p in enumerate_all(family.n):
        if p in family:
            continue
        if hook_report(family | PartitionFamily([p])).hooked:
            return False
    return True


# --- text syntax -----------------------------------------------------------

_TOKEN = re.compile(r"^(\d+)(?:\^(\d+))?$")
_SHORTHAND = re.compile(r"^\s*([SCP])\s*\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*$", re.IGNORECASE)


def parse_partition(text: str, line: int | None = None) -> Partition:
    """Parse ``4,2``, ``2^3,1^2`` or ``(6,1^{4})``."""
    cleaned = text.strip().strip("()[]").replace("{", "").replace("}", "").replace(" ", "")
    if not cleaned:
        raise ParseError("empty partition", location=line)
    parts: list[int] = []
    for token in cleaned.split(","):
        m = _TOKEN.match(token)
        if not m:
            raise ParseError(f"bad partition token {token!r}", location=line)
        value, exp = int(m.group(1)), int(m.group(2) or 1)
        if value < 1:
            raise ParseError(f"partition parts must be positive, got {value}", location=line)
        parts.extend([value] * exp)
    if not parts:
        raise ParseError("partition has no parts", location=line)
    return Partition(tuple(parts))


def parse_family(text: str) -> PartitionFamily:
    """Parse a family from JSON, one partition per line, ``;``-separated, or
    the shorthands ``S(n,k)``, ``C(n,k)`` and ``P(n)``."""
    stripped = text.strip()
    m = _SHORTHAND.match(stripped)
    if m:
        kind, n, k = m.group(1).upper(), int(m.group(2)), m.group(3)
        if kind == "P":
            if k is not None:
                raise ParseError("P(n) takes a single argument")
            return enumerate_all(n)
        if k is None:
            raise ParseError(f"{kind}(n,k) needs two arguments")
        return (family_S if kind == "S" else family_C)(n, int(k))
    if stripped.startswith("[") or stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", location=exc.lineno) from exc
        n = None
        if isinstance(data, dict):
            n = data.get("n")
            data = data.get("spectrum", data.get("members"))
        if not isinstance(data, list) or not all(isinstance(p, list) for p in data):
            raise ParseError("family JSON must be an array of arrays of integers", location="$")
        members = []
        for i, p in enumerate(data):
            if not p or not all(isinstance(x, int) and not isinstance(x, bool) and x > 0 for x in p):
                raise ParseError(f"bad partition {p!r}", location=f"$[{i}]")
            members.append(Partition(tuple(p)))
        try:
            return PartitionFamily(members, n=n)
        except InputError as exc:
            raise ParseError(str(exc), location="$") from exc
    members = []
    for lineno, raw in enumerate(stripped.replace(";", "\n").splitlines(), start=1):
        raw = raw.split("#", 1)[0].strip()
        if raw:
            members.append(parse_partition(raw, line=lineno))
    if not members:
        raise ParseError("no partitions found")
    try:
        return PartitionFamily(members)
    except InputError as exc:
        raise ParseError(str(exc)) from exc
