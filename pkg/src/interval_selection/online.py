"""Randomized preemptive online selection.

The actual set A of the one-pass algorithm is coloured first-fit with three
colours as intervals join it; the answer at any time is the colour class of a
colour ``c`` drawn once, up front, from the seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .core import Interval, intersects
from .general import GeneralState, Round

COLORS = (1, 2, 3)
_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One output of the SplitMix64 generator seeded with ``x``."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def color_for_seed(seed: int) -> int:
    return 1 + splitmix64(seed & _MASK) % 3


class ColorExhaustion(RuntimeError):
    """All three colours are taken by neighbours of a new member of A."""


@dataclass(frozen=True)
class Event:
    kind: str  # "accept", "preempt" or "reject"
    id: object
    color: int | None = None

    def __str__(self):
        tail = "" if self.color is None else f" color={self.color}"
        return f"{self.kind} id={self.id}{tail}"


@dataclass
class OnlineState:
    seed: int
    chosen: int
    inner: GeneralState = field(default_factory=GeneralState)
    colors: dict = field(default_factory=dict)
    events: list = field(default_factory=list)
    peak_neighbours: int = 0
    last_neighbours: int | None = None  # members of A met by the last new member

    def arrive(self, interval: Interval) -> Round:
        self.last_neighbours = None
        result = self.inner.process(interval)
        if not result.accepted:
            self.events.append(Event("reject", interval.id))
            return result
        for j in result.evicted:
            self.events.append(Event("preempt", j.id, self.colors.pop(j)))
        if interval in self.inner.actual:
            # coloured after the round's evictions, against what is left of A
            taken = set()
            neighbours = 0
            for j in _overlapping(self.inner.actual, interval):
                neighbours += 1
                taken.add(self.colors[j])
            self.last_neighbours = neighbours
            self.peak_neighbours = max(self.peak_neighbours, neighbours)
            free = [c for c in COLORS if c not in taken]
            if not free:
                raise ColorExhaustion(f"{interval} meets colours {sorted(taken)}")
            self.colors[interval] = free[0]
            self.events.append(Event("accept", interval.id, free[0]))
        return result

    def solution(self) -> list[Interval]:
        return [iv for iv in self.inner.actual if self.colors[iv] == self.chosen]

    def class_sizes(self) -> dict[int, int]:
        sizes = dict.fromkeys(COLORS, 0)
        for c in self.colors.values():
            sizes[c] += 1
        return sizes


def _overlapping(actual, interval):
    # members of A are ordered by both ends, so overlaps form a contiguous run
    i = actual.bisect_key_left(interval.lo.rank)
    j = i - 1
    while j >= 0 and actual[j].hi.rank >= interval.lo.rank:
        if actual[j] is not interval:
            yield actual[j]
        j -= 1
    while i < len(actual) and actual[i].lo.rank <= interval.hi.rank:
        if actual[i] is not interval:
            yield actual[i]
        i += 1


def online_init(seed: int) -> OnlineState:
    return OnlineState(seed, color_for_seed(seed))


def online_arrive(state: OnlineState, interval: Interval) -> Round:
    return state.arrive(interval)


def online_solution(state: OnlineState) -> list[Interval]:
    return state.solution()


def run_online(stream: Iterable[Interval], seed: int) -> OnlineState:
    state = online_init(seed)
    for iv in stream:
        state.arrive(iv)
    return state


def coloring_violations(state: OnlineState) -> list[str]:
    """Problems with the colouring of the current A (empty when valid)."""
    actual = list(state.inner.actual)
    out = []
    if set(state.colors) != set(actual):
        out.append("coloured set differs from A")
    # A is ordered by both ends, so each member only meets a run after it
    for i, a in enumerate(actual):
        for b in actual[i + 1:]:
            if b.lo.rank > a.hi.rank:
                break
            if intersects(a, b) and state.colors.get(a) == state.colors.get(b):
                out.append(f"{a} and {b} share colour {state.colors.get(a)}")
    return out
