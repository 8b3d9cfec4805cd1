"""Exact-rational intervals and the distinct-endpoints order.

Every endpoint is an :class:`EndpointKey`: a rational coordinate plus its
openness, its side (left/right) and the arrival index of the input interval
that owns it.  Keys are totally ordered so that no two endpoints of different
intervals compare equal, while any two intervals still intersect as closed
segments under that order exactly when they intersect as point sets.

Raw point-set questions (proper containment among duplicates, zone
membership) use *cuts* instead: a left endpoint ``[a`` is the cut just before
``a``, ``(a`` the cut just after it, and symmetrically for right endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from numbers import Rational
from typing import Iterable, Sequence

LEFT = "left"
RIGHT = "right"
INPUT = "input"
VIRTUAL = "virtual"

BRUTE_FORCE_LIMIT = 20

# Rank of each (side, closed) pair among keys sharing a coordinate.
_GROUP = {
    (RIGHT, False): 0,
    (LEFT, True): 1,
    (RIGHT, True): 2,
    (LEFT, False): 3,
}


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` strings; reject floats."""
    if isinstance(value, float):
        raise TypeError("floating-point coordinates are not supported")
    if isinstance(value, (int, Rational, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as a coordinate")


def _fast(coord: Fraction):
    # ints compare much faster than Fractions and mix with them freely
    return coord.numerator if coord.denominator == 1 else coord


@dataclass(frozen=True, slots=True)
class EndpointKey:
    coord: Fraction
    closed: bool
    side: str
    arrival: int
    rank: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.side not in (LEFT, RIGHT):
            raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}")
        if self.arrival < 0:
            raise ValueError("arrival index must be non-negative")
        coord = as_fraction(self.coord)
        object.__setattr__(self, "coord", coord)
        tie = -self.arrival if self.side == LEFT else self.arrival
        rank = (_fast(coord), _GROUP[self.side, self.closed], tie)
        object.__setattr__(self, "rank", rank)

    @property
    def cut(self) -> tuple:
        """Position of the endpoint as a cut between points of the line."""
        c = _fast(self.coord)
        if self.side == LEFT:
            return (c, 0) if self.closed else (c, 2)
        return (c, 2) if self.closed else (c, 0)

    def __lt__(self, other: EndpointKey) -> bool:
        return self.rank < other.rank

    def __le__(self, other: EndpointKey) -> bool:
        return self.rank <= other.rank

    def __gt__(self, other: EndpointKey) -> bool:
        return self.rank > other.rank

    def __ge__(self, other: EndpointKey) -> bool:
        return self.rank >= other.rank


def cprime_compare(p: EndpointKey, q: EndpointKey) -> int:
    """Compare two endpoints under the distinct-endpoints oracle.

    Written as the literal case table rather than through ``rank`` so the
    two can be checked against each other.
    """
    if p.coord != q.coord:
        return -1 if p.coord < q.coord else 1
    if p.side == q.side and p.arrival == q.arrival:
        return 0
    if p.side != q.side:
        either_open = not (p.closed and q.closed)
        if p.side == RIGHT:
            return -1 if either_open else 1
        return 1 if either_open else -1
    if p.closed != q.closed:
        open_first = -1 if p.side == RIGHT else 1
        return open_first if not p.closed else -open_first
    # same side, same openness: the earlier interval is pulled inwards
    earlier = p.arrival < q.arrival
    if p.side == LEFT:
        return 1 if earlier else -1
    return -1 if earlier else 1


@dataclass(frozen=True, slots=True)
class Interval:
    lo: EndpointKey
    hi: EndpointKey
    id: object
    kind: str = INPUT
    lo_cut: tuple = field(init=False, repr=False, compare=False)
    hi_cut: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.lo.side != LEFT or self.hi.side != RIGHT:
            raise ValueError("lo must be a left key and hi a right key")
        if not self.lo.rank < self.hi.rank:
            raise ValueError("left endpoint must precede right endpoint")
        if self.kind not in (INPUT, VIRTUAL):
            raise ValueError(f"unknown interval kind {self.kind!r}")
        object.__setattr__(self, "lo_cut", self.lo.cut)
        object.__setattr__(self, "hi_cut", self.hi.cut)

    @property
    def left(self) -> Fraction:
        return self.lo.coord

    @property
    def right(self) -> Fraction:
        return self.hi.coord

    @property
    def keys(self) -> tuple[tuple, tuple]:
        return self.lo.rank, self.hi.rank

    def __str__(self) -> str:
        lb = "[" if self.lo.closed else "("
        rb = "]" if self.hi.closed else ")"
        return f"{lb}{self.left}, {self.right}{rb}"


def make_interval(left, right, arrival: int, closed: str = "[]", id=None) -> Interval:
    """Build an input interval; ``closed`` is two bracket characters."""
    if len(closed) != 2 or closed[0] not in "[(" or closed[1] not in "])":
        raise ValueError(f"bad bracket pair {closed!r}")
    left, right = as_fraction(left), as_fraction(right)
    if not left < right:
        raise ValueError(f"need left < right, got {left} and {right}")
    return Interval(
        EndpointKey(left, closed[0] == "[", LEFT, arrival),
        EndpointKey(right, closed[1] == "]", RIGHT, arrival),
        arrival if id is None else id,
    )


def intersection(a: Interval, b: Interval) -> Interval:
    """The closed segment common to ``a`` and ``b``, as a virtual interval."""
    lo = a.lo if a.lo.rank > b.lo.rank else b.lo
    hi = a.hi if a.hi.rank < b.hi.rank else b.hi
    return Interval(lo, hi, ("v", lo.arrival, hi.arrival), VIRTUAL)


def intersects(a: Interval, b: Interval) -> bool:
    """Closed-segment overlap under the distinct-endpoints order."""
    return not (a.hi.rank < b.lo.rank or b.hi.rank < a.lo.rank)


def raw_intersects(a: Interval, b: Interval) -> bool:
    """Point-set overlap honouring open and closed endpoints."""
    return a.lo_cut < b.hi_cut and b.lo_cut < a.hi_cut


NONE, WEAK, PROPER = "none", "weak", "proper"


def contains(a: Interval, b: Interval) -> str:
    """Whether ``a`` contains ``b`` under the distinct-endpoints order."""
    lo, hi = cprime_compare(a.lo, b.lo), cprime_compare(b.hi, a.hi)
    if lo > 0 or hi > 0:
        return NONE
    if lo < 0 and hi < 0:
        return PROPER
    return WEAK


def raw_contains(a: Interval, b: Interval) -> str:
    """Point-set containment of ``b`` in ``a``."""
    if not (a.lo_cut <= b.lo_cut and b.hi_cut <= a.hi_cut):
        return NONE
    if a.lo_cut == b.lo_cut and a.hi_cut == b.hi_cut:
        return WEAK
    return PROPER


def is_proper(intervals: Iterable[Interval]) -> bool:
    """True iff no member properly contains another as a point set.

    Point-set semantics keeps identical duplicates legal; the perturbed
    order would split such a pair into a nested one.
    """
    items = sorted(intervals, key=lambda iv: (iv.lo_cut, iv.hi_cut))
    reach = None  # largest right cut among strictly earlier left cuts
    i = 0
    while i < len(items):
        lo, hi = items[i].lo_cut, items[i].hi_cut
        j = i
        while j < len(items) and items[j].lo_cut == lo:
            if items[j].hi_cut != hi:
                return False
            j += 1
        if reach is not None and hi <= reach:
            return False
        reach = hi if reach is None else max(reach, hi)
        i = j
    return True


def offline_optimum(intervals: Iterable[Interval]) -> list[Interval]:
    """Earliest-finish greedy: a maximum set of pairwise disjoint intervals."""
    chosen: list[Interval] = []
    last = None
    for iv in sorted(intervals, key=lambda iv: iv.hi.rank):
        if last is None or iv.lo.rank > last:
            chosen.append(iv)
            last = iv.hi.rank
    return chosen


def brute_force_optimum(intervals: Sequence[Interval]) -> int:
    """Exact maximum independent set size by exhaustive branching.

    Independent of the greedy: it never sorts, it only asks ``intersects``.
    """
    items = list(intervals)
    n = len(items)
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force is limited to {BRUTE_FORCE_LIMIT} intervals, got {n}")
    conflict = [0] * n
    for i, j in combinations(range(n), 2):
        if intersects(items[i], items[j]):
            conflict[i] |= 1 << j
            conflict[j] |= 1 << i

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if not mask:
            return 0
        low = mask & -mask
        i = low.bit_length() - 1
        skip = best(mask & ~low)
        take = 1 + best(mask & ~low & ~conflict[i])
        return max(skip, take)

    return best((1 << n) - 1)


def load(intervals: Iterable[Interval]) -> int:
    """Largest number of members sharing a point (sweep over ordered keys)."""
    events = []
    for iv in intervals:
        events.append((iv.lo.rank, 0))
        events.append((iv.hi.rank, 1))
    # at a shared key, openings go first: the key point is covered by both
    events.sort()
    depth = peak = 0
    for _, kind in events:
        if kind == 0:
            depth += 1
            peak = max(peak, depth)
        else:
            depth -= 1
    return peak


def intersecting_pairs(xs: Iterable[Interval], ys: Iterable[Interval] | None = None):
    """Yield every intersecting pair, output-sensitively.

    With ``ys`` omitted, pairs are drawn from ``xs`` itself (each once);
    otherwise each yielded pair is ``(x, y)`` with ``x`` from ``xs``.
    """
    same = ys is None
    events = []
    for iv in xs:
        events.append((iv.lo.rank, 0, 0, iv))
        events.append((iv.hi.rank, 1, 0, iv))
    if not same:
        for iv in ys:
            events.append((iv.lo.rank, 0, 1, iv))
            events.append((iv.hi.rank, 1, 1, iv))
    events.sort(key=lambda e: (e[0], e[1]))
    active: tuple[dict, dict] = ({}, {})
    for _, kind, group, iv in events:
        bucket = active[group]
        if kind == 1:
            bucket.pop(id(iv), None)
            continue
        if same:
            for other in bucket.values():
                yield other, iv
        elif group == 0:
            for other in active[1].values():
                yield iv, other
        else:
            for other in active[0].values():
                yield other, iv
        bucket[id(iv)] = iv
