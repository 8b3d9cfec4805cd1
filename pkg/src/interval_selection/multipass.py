"""p-pass selection: a one-pass base set, then nearest disjoint neighbours.

Pass 1 runs a one-pass algorithm and keeps its stored set A.  Every further
pass follows each frontier interval one step: ``next(I)`` is the interval
starting after I ends that ends earliest, ``prev(I)`` the interval ending
before I starts that starts latest.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import Interval, offline_optimum
from .general import run_general
from .proper import run_proper

GENERAL = "general"
PROPER = "proper"
MODES = (GENERAL, PROPER)


def first_pass(stream: Iterable[Interval], mode: str = GENERAL) -> list[Interval]:
    if mode == GENERAL:
        return list(run_general(stream).actual)
    if mode == PROPER:
        return run_proper(stream).records()
    raise ValueError(f"unknown mode {mode!r}")


def neighbor_pass(stream: Iterable[Interval], tracked: Sequence[Interval]):
    """One scan computing ``next`` and ``prev`` for every tracked interval.

    Returns two dicts; tracked intervals without a neighbour are absent.
    Memory is one pending candidate per tracked interval: an arrival that
    starts after the right ends of a prefix of the tracked intervals (sorted
    by right end) is a candidate for that whole prefix, so it is recorded at
    the prefix's last slot and slots are combined by a suffix minimum at the
    end.  ``prev`` is the mirror image.
    """
    by_hi = sorted(set(tracked), key=lambda iv: iv.hi.rank)
    by_lo = sorted(set(tracked), key=lambda iv: iv.lo.rank)
    his = [iv.hi.rank for iv in by_hi]
    los = [iv.lo.rank for iv in by_lo]
    nxt: list = [None] * len(by_hi)
    prv: list = [None] * len(by_lo)

    for j in stream:
        pos = bisect_left(his, j.lo.rank)
        if pos:
            cur = nxt[pos - 1]
            if cur is None or j.hi.rank < cur.hi.rank:
                nxt[pos - 1] = j
        pos = bisect_right(los, j.hi.rank)
        if pos < len(prv):
            cur = prv[pos]
            if cur is None or j.lo.rank > cur.lo.rank:
                prv[pos] = j

    next_map, best = {}, None
    for i in range(len(by_hi) - 1, -1, -1):
        cand = nxt[i]
        if cand is not None and (best is None or cand.hi.rank < best.hi.rank):
            best = cand
        if best is not None:
            next_map[by_hi[i]] = best
    prev_map, best = {}, None
    for i in range(len(by_lo)):
        cand = prv[i]
        if cand is not None and (best is None or cand.lo.rank > best.lo.rank):
            best = cand
        if best is not None:
            prev_map[by_lo[i]] = best
    return next_map, prev_map


@dataclass
class MultiPassState:
    mode: str
    base: list[Interval]
    frontier_next: list[Interval]
    frontier_prev: list[Interval]
    accumulated: dict = field(default_factory=dict)  # insertion-ordered set
    passes: int = 1
    history: list[int] = field(default_factory=list)  # |A_p| after each pass

    def selection(self) -> list[Interval]:
        return offline_optimum(self.accumulated)


def start(stream: Iterable[Interval], mode: str = GENERAL) -> MultiPassState:
    base = first_pass(stream, mode)
    state = MultiPassState(mode, base, list(base), list(base))
    state.accumulated = dict.fromkeys(base)
    state.history.append(len(state.accumulated))
    return state


def extend(state: MultiPassState, stream: Iterable[Interval]) -> MultiPassState:
    """Run one more neighbour pass over ``stream``."""
    tracked = state.frontier_next + state.frontier_prev
    if not tracked:
        state.passes += 1
        state.history.append(len(state.accumulated))
        return state
    next_map, prev_map = neighbor_pass(stream, tracked)
    state.frontier_next = list(dict.fromkeys(next_map[iv] for iv in state.frontier_next if iv in next_map))
    state.frontier_prev = list(dict.fromkeys(prev_map[iv] for iv in state.frontier_prev if iv in prev_map))
    for iv in state.frontier_next + state.frontier_prev:
        state.accumulated.setdefault(iv)
    state.passes += 1
    state.history.append(len(state.accumulated))
    return state


def run_passes(stream: Iterable[Interval], p: int, mode: str = GENERAL) -> MultiPassState:
    """``stream`` is iterated once per pass, so it must be re-iterable."""
    if p < 1:
        raise ValueError("need at least one pass")
    if iter(stream) is stream:
        raise TypeError("multiple passes need a re-iterable stream, not an iterator")
    state = start(stream, mode)
    for _ in range(p - 1):
        extend(state, stream)
    return state


def run_multipass(stream: Iterable[Interval], p: int, mode: str = GENERAL) -> list[Interval]:
    return run_passes(stream, p, mode).selection()


def end_simplicial(stream: Iterable[Interval]) -> list[Interval]:
    """Per component of the stream: the interval whose right end comes first
    and the one whose left end comes last."""
    items = sorted(stream, key=lambda iv: iv.lo.rank)
    out = []
    i = 0
    while i < len(items):
        reach = items[i].hi.rank
        first_hi = last_lo = items[i]
        j = i + 1
        while j < len(items) and items[j].lo.rank <= reach:
            iv = items[j]
            if iv.hi.rank > reach:
                reach = iv.hi.rank
            if iv.hi.rank < first_hi.hi.rank:
                first_hi = iv
            last_lo = iv
            j += 1
        out.append(first_hi)
        if last_lo is not first_hi:
            out.append(last_lo)
        i = j
    return out
