"""Per-arrival auditors for long fuzz runs.

Each auditor checks the same properties as ``check_invariants`` and
``zone_invariants`` after every arrival, but reuses work across arrivals:
a violation is reported on the arrival where it first appears.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right

from sortedcontainers import SortedKeyList

from .core import Interval, offline_optimum
from .general import (
    GeneralState,
    Round,
    Violation,
    _portions,
    portion_violations,
    provenance_violations,
    structure_violations,
)
from .proper import CASE_BRIDGE, ZoneTable, lkey, rkey


class PrefixOptimum:
    """Size of an optimal selection of everything added so far."""

    def __init__(self):
        self._items = SortedKeyList(key=lambda iv: iv.hi.rank)
        self.value = 0

    def add(self, interval: Interval) -> int:
        self._items.add(interval)
        count, last = 0, None
        for iv in self._items:
            if last is None or iv.lo.rank > last:
                count += 1
                last = iv.hi.rank
        self.value = count
        return count


class _TraceIndex:
    def __init__(self, stored):
        stored = sorted(stored, key=lambda iv: iv.lo.rank)
        self.los = [iv.lo.rank for iv in stored]
        self.best = [None] * (len(stored) + 1)
        for i in range(len(stored) - 1, -1, -1):
            nxt = self.best[i + 1]
            if nxt is None or stored[i].hi.rank < nxt.hi.rank:
                self.best[i] = stored[i]
            else:
                self.best[i] = nxt

    def inside(self, iv: Interval):
        cand = self.best[bisect_left(self.los, iv.lo.rank)]
        if cand is not None and cand.hi.rank <= iv.hi.rank:
            return cand.keys
        return None


class GeneralAudit:
    """Invariants, prefix ratio and space bound of the one-pass algorithm."""

    def __init__(self):
        self.seen: list[Interval] = []
        self.seen_keys: set = set()
        self.witness: list = []
        self.opt = PrefixOptimum()
        self.last_output = 0

    def check(self, state: GeneralState, interval: Interval, result: Round) -> list[Violation]:
        self.seen.append(interval)
        self.seen_keys.add(interval.lo.rank)
        self.seen_keys.add(interval.hi.rank)
        self.witness.append(None)
        opt = self.opt.add(interval)

        actual, virtual = list(state.actual), list(state.virtual)
        report = structure_violations(actual, virtual)
        report.extend(provenance_violations(virtual, self.seen_keys))
        if result.accepted and interval not in state.actual:
            report.append(Violation("not-kept", f"accepted {interval} is not in A"))
        report.extend(portion_violations(_portions(actual, virtual)))

        stored = {iv.keys for iv in actual}
        stored.update(iv.keys for iv in virtual)
        index = None
        for t, w in enumerate(self.witness):
            if w is not None and w in stored:
                continue
            if index is None:
                index = _TraceIndex(actual + virtual)
            w = self.witness[t] = index.inside(self.seen[t])
            if w is None:
                report.append(Violation("trace", f"{self.seen[t]} leaves no trace in A or V"))

        out = self.last_output = len(offline_optimum(actual))
        if 2 * out < opt:
            report.append(Violation("ratio", f"output {out} below half of {opt}"))
        if len(actual) > 2 * out:
            report.append(Violation("space", f"|A|={len(actual)} exceeds 2*{out}"))
        return report


class ProperAudit:
    """Zone invariants of the proper-interval algorithm."""

    def __init__(self):
        self.seen: list[Interval] = []
        self.case_log: list[str] = []
        self.checked: set = set()  # zones already known to lie inside a seen interval
        self.support = SortedKeyList(key=lambda span: span[0])
        self.opt = PrefixOptimum()

    def _cover(self, lo, hi):
        # merge [lo, hi] into the union of seen spans
        i = self.support.bisect_key_right(lo)
        if i and self.support[i - 1][1] >= lo:
            i -= 1
        while i < len(self.support) and self.support[i][0] <= hi:
            old = self.support.pop(i)
            lo, hi = min(lo, old[0]), max(hi, old[1])
        self.support.add((lo, hi))

    def check(self, table: ZoneTable, interval: Interval, case: str) -> list[Violation]:
        self.seen.append(interval)
        self.case_log.append(case)
        self._cover(lkey(interval), rkey(interval))
        opt = self.opt.add(interval)
        zones = list(table.zones)
        report: list[Violation] = []

        runs = []
        for z in zones:
            if not z.lo < z.hi:
                report.append(Violation("partition", f"{z} is empty"))
            if runs and z.lo < runs[-1][-1].hi:
                report.append(Violation("partition", f"{runs[-1][-1]} and {z} overlap"))
            if runs and runs[-1][-1].hi == z.lo:
                runs[-1].append(z)
            else:
                runs.append([z])
        if [(r[0].lo, r[-1].hi) for r in runs] != list(self.support):
            report.append(Violation("partition", "zones do not cover exactly supp(seen)"))
        for run in runs:
            for z in run[1:-1]:
                if not z.fixed:
                    report.append(Violation("flexible", f"inner {z} is flexible"))

        los = [z.lo for z in zones]
        his = [z.hi for z in zones]
        recount = {len(self.seen) - 1}
        for z in zones:
            if z in self.checked:
                continue
            self.checked.add(z)
            host = False
            for t, iv in enumerate(self.seen):
                l, h = lkey(iv), rkey(iv)
                if l <= z.lo and z.hi <= h:
                    host = True
                if l < z.lo and z.hi < h:
                    recount.add(t)
            if not host:
                report.append(Violation("unhosted-zone", f"{z} is inside no seen interval"))
        for t in sorted(recount):
            iv = self.seen[t]
            inside = bisect_left(his, rkey(iv)) - bisect_right(los, lkey(iv))
            if inside > 2:
                report.append(Violation("two-zone", f"{iv} contains {inside} zones"))
            if inside > (2 if self.case_log[t] == CASE_BRIDGE else 1):
                report.append(Violation("one-zone", f"{iv} contains {inside} zones"))

        if len(zones) > 5 * opt + 4:
            report.append(Violation("zone-total", f"{len(zones)} zones exceed 5*{opt}+4"))
        return report
