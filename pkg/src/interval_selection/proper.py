"""Zone algorithm for proper intervals: a 3/2-approximation in O(|OPT|) space.

The covered part of the line is partitioned into zones.  Each zone remembers
the interval with the leftmost left endpoint falling in it (``L``) and the one
with the rightmost right endpoint falling in it (``R``); the output is an
optimal selection among those records.

Positions are *zone keys*: a left endpoint maps to ``(cut, 1)`` and a right
endpoint to ``(cut, 0)``.  Point-set identical intervals get identical keys,
while a left key never equals a right key, so ``[0, 2)`` and ``[2, 3)`` are
separated by a gap exactly as they are on the line.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from sortedcontainers import SortedKeyList

from .core import Interval, offline_optimum
from .general import Violation

CASE_NEW = "1"
CASE_INSIDE = "2"
CASE_BRIDGE = "3"
CASE_EXTEND = "4"


class ProperViolation(ValueError):
    """The stream contains two intervals, one properly inside the other."""


def lkey(iv: Interval) -> tuple:
    return (iv.lo_cut, 1)


def rkey(iv: Interval) -> tuple:
    return (iv.hi_cut, 0)


@dataclass(slots=True, eq=False)
class Zone:
    lo: tuple
    hi: tuple
    fixed: bool
    L: Interval | None = None
    R: Interval | None = None

    def __repr__(self):
        state = "fixed" if self.fixed else "flexible"
        return f"Zone({self.lo}, {self.hi}, {state}, L={self.L}, R={self.R})"


def _nested(a: Interval, b: Interval) -> bool:
    al, ar, bl, br = lkey(a), rkey(a), lkey(b), rkey(b)
    if (al, ar) == (bl, br):
        return False
    return (al <= bl and br <= ar) or (bl <= al and ar <= br)


class ZoneTable:
    """Zones and components, both ordered by their left key."""

    def __init__(self):
        self.zones = SortedKeyList(key=lambda z: z.lo)
        self.components = SortedKeyList(key=lambda c: c[0])
        self.arrivals = 0
        self.peak_zones = 0

    def __repr__(self):
        return f"ZoneTable(arrivals={self.arrivals}, zones={len(self.zones)})"

    def __len__(self):
        return len(self.zones)

    # -- lookups -------------------------------------------------------------

    def component_at(self, p):
        i = self.components.bisect_key_right(p) - 1
        if i >= 0 and p <= self.components[i][1]:
            return self.components[i]
        return None

    def zone_at(self, p) -> Zone:
        """The zone an endpoint key falls in.

        Every zone boundary is an endpoint key of some seen interval; a
        boundary that is a left key belongs to the zone on its right and one
        that is a right key to the zone on its left.  This only matters for
        duplicates, whose endpoints can land exactly on a boundary.
        """
        if p[1] == 1:
            i = self.zones.bisect_key_right(p) - 1
        else:
            i = self.zones.bisect_key_left(p) - 1
        return self.zones[i]

    def _components_between(self, a, b) -> bool:
        i = self.components.bisect_key_right(a)
        return i < len(self.components) and self.components[i][0] < b

    def records(self) -> list[Interval]:
        """Stored L and R intervals, point-set duplicates collapsed."""
        seen, out = set(), []
        for z in self.zones:
            for iv in (z.L, z.R):
                if iv is not None and (iv.lo_cut, iv.hi_cut) not in seen:
                    seen.add((iv.lo_cut, iv.hi_cut))
                    out.append(iv)
        return out

    # -- the algorithm -------------------------------------------------------

    def process(self, interval: Interval) -> str:
        """Handle one arrival and return its case label."""
        l, h = lkey(interval), rkey(interval)
        cl, ch = self.component_at(l), self.component_at(h)
        if cl is None and ch is None:
            case = self._new_component(interval, l, h)
        elif cl is not None and cl == ch:
            case = self._inside(interval, l, h)
        elif cl is not None and ch is not None:
            case = self._bridge(interval, l, h, cl, ch)
        elif cl is not None:
            case = self._extend_right(interval, l, h, cl)
        else:
            case = self._extend_left(interval, l, h, ch)
        self.arrivals += 1
        self.peak_zones = max(self.peak_zones, len(self.zones))
        return case

    def _new_component(self, iv, l, h):
        if self._components_between(l, h):
            raise ProperViolation(f"{iv} covers an earlier component")
        self.zones.add(Zone(l, h, True, iv, iv))
        self.components.add((l, h))
        return CASE_NEW

    def _offer(self, iv, left_zone: Zone | None, right_zone: Zone | None):
        # checks come first so a rejected arrival leaves the table untouched
        for z in (left_zone, right_zone):
            if z is None:
                continue
            for rec in (z.L, z.R):
                if rec is not None and _nested(rec, iv):
                    raise ProperViolation(f"{iv} and {rec} are nested")
        if left_zone is not None and (left_zone.L is None or lkey(iv) < lkey(left_zone.L)):
            left_zone.L = iv
        if right_zone is not None and (right_zone.R is None or rkey(iv) > rkey(right_zone.R)):
            right_zone.R = iv

    def _inside(self, iv, l, h):
        self._offer(iv, self.zone_at(l), self.zone_at(h))
        return CASE_INSIDE

    def _absorbable(self, iv, inner: list[Zone]) -> Zone | None:
        # a proper arrival can swallow at most one flexible zone per side
        if not inner:
            return None
        if len(inner) > 1 or inner[0].fixed:
            raise ProperViolation(f"{iv} properly contains a fixed zone")
        for rec in (inner[0].L, inner[0].R):
            if rec is not None and _nested(rec, iv):
                raise ProperViolation(f"{iv} and {rec} are nested")
        return inner[0]

    def _bridge(self, iv, l, h, cl, ch):
        if self._components_between(cl[1], ch[0]):
            raise ProperViolation(f"{iv} covers a whole component")
        kl, kh = self.zone_at(l), self.zone_at(h)
        left_in = self._absorbable(iv, self._zones_after(kl, cl))
        right_in = self._absorbable(iv, self._zones_before(kh, ch))
        self._offer(iv, kl, kh)
        kl.fixed = kh.fixed = True
        lo = cl[1]
        hi = ch[0]
        if left_in is not None:
            lo = left_in.lo
            self.zones.remove(left_in)
        if right_in is not None:
            hi = right_in.hi
            self.zones.remove(right_in)
        absorbed = [z for z in (left_in, right_in) if z is not None]
        lefts = [z.L for z in absorbed if z.L is not None]
        rights = [z.R for z in absorbed if z.R is not None]
        z = Zone(lo, hi, True,
                 min(lefts, key=lkey) if lefts else None,
                 max(rights, key=rkey) if rights else None)
        self.zones.add(z)
        self.components.remove(cl)
        self.components.remove(ch)
        self.components.add((cl[0], ch[1]))
        return CASE_BRIDGE

    def _extend_right(self, iv, l, h, c):
        if self._components_between(c[1], h):
            raise ProperViolation(f"{iv} covers a whole component")
        k = self.zone_at(l)
        inner = self._absorbable(iv, self._zones_after(k, c))
        self._offer(iv, k, None)
        k.fixed = True
        lo, L = c[1], None
        if inner is not None:
            lo, L = inner.lo, inner.L
            self.zones.remove(inner)
        self.zones.add(Zone(lo, h, False, L, iv))
        self.components.remove(c)
        self.components.add((c[0], h))
        return CASE_EXTEND

    def _extend_left(self, iv, l, h, c):
        if self._components_between(l, c[0]):
            raise ProperViolation(f"{iv} covers a whole component")
        k = self.zone_at(h)
        inner = self._absorbable(iv, self._zones_before(k, c))
        self._offer(iv, None, k)
        k.fixed = True
        hi, R = c[0], None
        if inner is not None:
            hi, R = inner.hi, inner.R
            self.zones.remove(inner)
        self.zones.add(Zone(l, hi, False, iv, R))
        self.components.remove(c)
        self.components.add((l, c[1]))
        return CASE_EXTEND

    # at most two neighbours are returned: more already means a violation

    def _zones_after(self, k: Zone, c) -> list[Zone]:
        i = self.zones.index(k)
        return [z for z in self.zones.islice(i + 1, i + 3) if z.lo < c[1]]

    def _zones_before(self, k: Zone, c) -> list[Zone]:
        i = self.zones.index(k)
        return [z for z in self.zones.islice(max(0, i - 2), i) if z.lo >= c[0]]


def process_proper(table: ZoneTable, interval: Interval) -> str:
    return table.process(interval)


def run_proper(stream: Iterable[Interval]) -> ZoneTable:
    table = ZoneTable()
    for iv in stream:
        table.process(iv)
    return table


def finalize_proper(table: ZoneTable) -> list[Interval]:
    return offline_optimum(table.records())


# -- invariant checking ------------------------------------------------------

def zone_invariants(
    table: ZoneTable,
    seen: Sequence[Interval],
    case_log: Sequence[str],
    opt: int | None = None,
) -> list[Violation]:
    """Audit the zone table against the seen prefix.

    ``case_log[t]`` is the label returned for ``seen[t]``.  ``opt`` may be
    passed in when the caller already maintains the prefix optimum.
    """
    zones = list(table.zones)
    report: list[Violation] = []
    los = [z.lo for z in zones]
    his = [z.hi for z in zones]

    for a, b in zip(zones, zones[1:]):
        if b.lo < a.hi:
            report.append(Violation("partition", f"{a} and {b} overlap"))
    for z in zones:
        if not z.lo < z.hi:
            report.append(Violation("partition", f"{z} is empty"))

    spans = sorted((lkey(iv), rkey(iv)) for iv in seen)
    support = _merge(spans)
    covered = _merge([(z.lo, z.hi) for z in zones], touching=True)
    if support != covered:
        report.append(Violation("partition", "zones do not cover exactly supp(seen)"))

    # each zone lies inside some seen interval
    reach, best = [], None
    for lo, hi in spans:
        best = hi if best is None or hi > best else best
        reach.append(best)
    lefts = [lo for lo, _ in spans]
    for z in zones:
        i = bisect_right(lefts, z.lo) - 1
        if i < 0 or reach[i] < z.hi:
            report.append(Violation("unhosted-zone", f"{z} is inside no seen interval"))

    # each seen interval strictly contains at most one zone, two for a
    # bridging arrival ("one-zone"); "two-zone" allows two for everyone
    for iv, case in zip(seen, case_log):
        inside = bisect_left(his, rkey(iv)) - bisect_right(los, lkey(iv))
        if inside > 2:
            report.append(Violation("two-zone", f"{iv} contains {inside} zones"))
        if inside > (2 if case == CASE_BRIDGE else 1):
            report.append(Violation("one-zone", f"{iv} contains {inside} zones"))

    if opt is None:
        opt = len(offline_optimum(seen))
    if len(zones) > 5 * opt + 4:
        report.append(Violation("zone-total", f"{len(zones)} zones exceed 5*{opt}+4"))

    for run in _component_runs(zones):
        for z in run[1:-1]:
            if not z.fixed:
                report.append(Violation("flexible", f"inner {z} is flexible"))
    return report


def _merge(spans, touching=False):
    out = []
    for lo, hi in sorted(spans):
        if out and (lo < out[-1][1] or touching and lo == out[-1][1]):
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [tuple(s) for s in out]


def _component_runs(zones):
    runs = []
    for z in zones:
        if runs and runs[-1][-1].hi == z.lo:
            runs[-1].append(z)
        else:
            runs.append([z])
    return runs


def span_reach(stored: Iterable[Interval]):
    """For each left key, the least right key bounding two disjoint stored intervals.

    Returns a function ``f(left_key)``: the smallest ``r`` such that the
    stored set has two disjoint members inside ``[left_key, r]``, or None.
    """
    items = sorted(((lkey(iv), rkey(iv)) for iv in stored))
    lefts = [lo for lo, _ in items]
    suffix = [None] * (len(items) + 1)
    for i in range(len(items) - 1, -1, -1):
        h, nxt = items[i][1], suffix[i + 1]
        suffix[i] = h if nxt is None or h < nxt else nxt

    def first_end(after):
        return suffix[bisect_left(lefts, after)]

    def reach(left_key):
        first = first_end(left_key)
        if first is None:
            return None
        # any later left key exceeds a right key it is not equal to
        return first_end(first)

    return reach


def span_violations(stored: Iterable[Interval], seen: Sequence[Interval]) -> list[Violation]:
    """Every disjoint triple of seen intervals spans two disjoint stored ones.

    Enumerates all triples, so keep ``seen`` small.
    """
    reach = span_reach(stored)
    items = sorted(seen, key=lambda iv: (lkey(iv), rkey(iv)))
    keys = [(lkey(iv), rkey(iv)) for iv in items]
    report = []
    n = len(items)
    for a in range(n):
        l1, h1 = keys[a]
        r = reach(l1)
        for b in range(a + 1, n):
            l2, h2 = keys[b]
            if l2 < h1:
                continue
            for c in range(b + 1, n):
                l3, h3 = keys[c]
                if l3 < h2:
                    continue
                if r is None or r > h3:
                    report.append(Violation(
                        "span", f"span of {items[a]}, {items[b]}, {items[c]} lacks two stored intervals"))
    return report
