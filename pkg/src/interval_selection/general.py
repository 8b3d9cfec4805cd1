"""One-pass 2-approximation: actual intervals A plus blocking virtual intervals V.

An arriving interval joins A unless it contains a stored actual or virtual
interval.  Whenever two actual intervals overlap, their intersection is kept
in V so that later intervals containing it are turned away even after one of
the two has been preempted.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from sortedcontainers import SortedKeyList

from .core import INPUT, Interval, intersecting_pairs, intersection, load, offline_optimum


def _by_lo(iv: Interval):
    return iv.lo.rank


class Round(NamedTuple):
    """What one arrival did to the actual set."""

    accepted: bool
    evicted: tuple[Interval, ...] = ()


class GeneralState:
    """The pair (A, V) plus arrival counter and peak sizes.

    Both sets are kept ordered by left key.  Members of A never contain one
    another and members of V are pairwise disjoint, so in either list the
    right keys are ordered the same way as the left keys and every lookup
    below is a neighbour query.
    """

    def __init__(self):
        self.actual = SortedKeyList(key=_by_lo)
        self.virtual = SortedKeyList(key=_by_lo)
        self.arrivals = 0
        self.peak_actual = 0
        self.peak_virtual = 0

    def __repr__(self):
        return (
            f"GeneralState(arrivals={self.arrivals}, |A|={len(self.actual)}, "
            f"|V|={len(self.virtual)})"
        )

    def process(self, interval: Interval) -> Round:
        if interval.kind != INPUT:
            raise ValueError("only input intervals can arrive")
        if interval.lo.arrival != self.arrivals:
            raise ValueError(
                f"expected arrival {self.arrivals}, got {interval.lo.arrival}"
            )
        self.arrivals += 1
        lo, hi = interval.lo.rank, interval.hi.rank
        actual, virtual = self.actual, self.virtual

        if _has_member_inside(actual, lo, hi) or _has_member_inside(virtual, lo, hi):
            return Round(False)

        evicted = _members_around(actual, lo, hi)
        for j in evicted:
            actual.remove(j)
        for j in _members_around(virtual, lo, hi):
            virtual.remove(j)
        actual.add(interval)

        created = []
        for p in (lo, hi):
            j = _member_at(virtual, p)
            if j is not None:
                virtual.remove(j)
                k = intersection(interval, j)
                virtual.add(k)
                created.append(k)
                continue
            j = _member_at(actual, p, skip=interval)
            if j is not None:
                k = intersection(interval, j)
                virtual.add(k)
                created.append(k)

        # Only virtual intervals created this round can sit strictly inside an
        # actual one: older pairs were cleared in their own round, and the
        # new interval contains no older virtual interval.
        for k in created:
            if k not in virtual:
                continue
            for j in _members_strictly_around(actual, k.lo.rank, k.hi.rank):
                actual.remove(j)
                evicted.append(j)

        self.peak_actual = max(self.peak_actual, len(actual))
        self.peak_virtual = max(self.peak_virtual, len(virtual))
        return Round(True, tuple(evicted))


def _has_member_inside(members, lo, hi) -> bool:
    i = members.bisect_key_left(lo)
    return i < len(members) and members[i].hi.rank <= hi


def _members_around(members, lo, hi) -> list:
    found = []
    i = members.bisect_key_right(lo) - 1
    while i >= 0 and members[i].hi.rank >= hi:
        found.append(members[i])
        i -= 1
    return found


def _members_strictly_around(members, lo, hi) -> list:
    found = []
    i = members.bisect_key_left(lo) - 1
    while i >= 0 and members[i].hi.rank > hi:
        found.append(members[i])
        i -= 1
    return found


def _member_at(members, p, skip=None):
    i = members.bisect_key_right(p) - 1
    while i >= 0 and members[i] is skip:
        i -= 1
    if i >= 0 and members[i].hi.rank >= p:
        return members[i]
    return None


def process(state: GeneralState, interval: Interval) -> Round:
    return state.process(interval)


def run_general(stream: Iterable[Interval]) -> GeneralState:
    state = GeneralState()
    for iv in stream:
        state.process(iv)
    return state


def finalize(state: GeneralState) -> list[Interval]:
    """The output: an optimal selection out of the actual set."""
    return offline_optimum(state.actual)


# -- portion strings ---------------------------------------------------------

FEASIBLE = frozenset({(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)})

_COMPONENT_RE = re.compile(r"(11)?10(2110)*(11)?")
_GAP_RE = re.compile(r"00(0100)*")


def portion_string(state: GeneralState) -> tuple[tuple[int, int], ...]:
    """Coverage types (#actual, #virtual) met scanning the line left to right."""
    return _portions(state.actual, state.virtual)


def _portions(actual: Iterable[Interval], virtual: Iterable[Interval]):
    events = []
    for iv in actual:
        events.append((iv.lo.rank, 1, 0))
        events.append((iv.hi.rank, -1, 0))
    for iv in virtual:
        events.append((iv.lo.rank, 0, 1))
        events.append((iv.hi.rank, 0, -1))
    events.sort()
    x = y = 0
    out = [(0, 0)]
    i = 0
    while i < len(events):
        key = events[i][0]
        while i < len(events) and events[i][0] == key:
            x += events[i][1]
            y += events[i][2]
            i += 1
        if (x, y) != out[-1]:
            out.append((x, y))
    return tuple(out)


def split_portions(portions: Sequence[tuple[int, int]]):
    """Split a portion string into alternating gap and component runs."""
    runs = []
    for pair in portions:
        inside = pair[0] > 0
        if runs and runs[-1][0] == inside:
            runs[-1][1].append(pair)
        else:
            runs.append((inside, [pair]))
    return [(inside, tuple(run)) for inside, run in runs]


def _encode(run) -> str:
    return "".join(f"{x}{y}" for x, y in run)


# -- invariant checking ------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def __str__(self):
        return f"{self.code}: {self.detail}"


def check_invariants(
    state: GeneralState,
    seen: Sequence[Interval],
    accepted: Interval | None = None,
) -> list[Violation]:
    """Audit (A, V) against the structural properties of the algorithm.

    ``seen`` is the full prefix of processed inputs, kept by the caller.
    ``accepted``, when given, is the latest arrival that was not rejected and
    must therefore be in A.  Returns an empty list when everything holds.
    """
    actual = list(state.actual)
    virtual = list(state.virtual)
    report = structure_violations(actual, virtual)
    report.extend(_trace_violations(actual + virtual, seen))

    seen_keys = set()
    for iv in seen:
        seen_keys.add(iv.lo.rank)
        seen_keys.add(iv.hi.rank)
    report.extend(provenance_violations(virtual, seen_keys))

    if accepted is not None and accepted not in state.actual:
        report.append(Violation("not-kept", f"accepted {accepted} is not in A"))
    report.extend(portion_violations(portion_string(state), nonempty=bool(seen)))
    return report


def structure_violations(actual: list[Interval], virtual: list[Interval]) -> list[Violation]:
    """Properties of (A, V) alone: nesting, overlaps, loads and |V| <= |A|."""
    report: list[Violation] = []
    for rho, sigma in intersecting_pairs(actual, virtual):
        inside = rho.lo.rank <= sigma.lo.rank and sigma.hi.rank <= rho.hi.rank
        shares = rho.lo.rank == sigma.lo.rank or rho.hi.rank == sigma.hi.rank
        strict = rho.keys != sigma.keys
        if not (inside and shares and strict):
            report.append(Violation("nested-virtual", f"virtual {sigma} meets actual {rho}"))

    virtual_keys = {iv.keys for iv in virtual}
    for rho, sigma in intersecting_pairs(actual):
        k = intersection(rho, sigma)
        if k.keys not in virtual_keys:
            report.append(Violation("missing-overlap", f"{rho} and {sigma} overlap without {k} in V"))

    if load(virtual) > 1:
        report.append(Violation("virtual-load", f"virtual load {load(virtual)}"))
    if load(actual) > 2:
        report.append(Violation("actual-load", f"actual load {load(actual)}"))

    ordered = sorted(actual, key=_by_lo)
    for a, b in zip(ordered, ordered[1:]):
        if b.hi.rank <= a.hi.rank:
            report.append(Violation("nested-actual", f"{b} lies inside {a}"))

    if len(virtual) > len(actual):
        report.append(Violation("space", f"|V|={len(virtual)} exceeds |A|={len(actual)}"))
    return report


def provenance_violations(virtual: Iterable[Interval], seen_keys) -> list[Violation]:
    return [
        Violation("provenance", f"virtual {iv} uses an unseen endpoint")
        for iv in virtual
        if iv.lo.rank not in seen_keys or iv.hi.rank not in seen_keys
    ]


def _trace_violations(stored: list[Interval], seen: Iterable[Interval]) -> list[Violation]:
    # each seen interval must contain a stored one: among stored intervals
    # starting at or after its left key, the smallest right key must fit
    stored = sorted(stored, key=_by_lo)
    los = [iv.lo.rank for iv in stored]
    suffix_min = [None] * (len(stored) + 1)
    for i in range(len(stored) - 1, -1, -1):
        h = stored[i].hi.rank
        nxt = suffix_min[i + 1]
        suffix_min[i] = h if nxt is None or h < nxt else nxt
    out = []
    for iv in seen:
        i = bisect_left(los, iv.lo.rank)
        best = suffix_min[i]
        if best is None or best > iv.hi.rank:
            out.append(Violation("trace", f"{iv} leaves no trace in A or V"))
    return out


def portion_violations(portions, nonempty: bool = True) -> list[Violation]:
    out = []
    bad = [p for p in portions if p not in FEASIBLE]
    if bad:
        out.append(Violation("portions", f"infeasible coverage pairs {bad}"))
    for inside, run in split_portions(portions):
        pattern = _COMPONENT_RE if inside else _GAP_RE
        if not pattern.fullmatch(_encode(run)):
            kind = "component" if inside else "gap"
            out.append(Violation("portions", f"{kind} string {_encode(run)} is malformed"))
    if nonempty:
        for i, pair in enumerate(portions):
            if pair != (0, 0):
                continue
            before = portions[i - 1] if i > 0 else None
            after = portions[i + 1] if i + 1 < len(portions) else None
            if before != (1, 0) and after != (1, 0):
                out.append(Violation("bare-gap", f"(0,0) portion #{i} has no (1,0) neighbour"))
    return out
