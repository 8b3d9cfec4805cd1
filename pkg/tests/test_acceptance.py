"""Acceptance checks 1-11, all exact.

Each check records one PASS/FAIL line.  Under pytest the lines are printed in
the terminal summary; ``python3 tests/test_acceptance.py`` prints them
directly.  The large fuzz corpora are built once per module.
"""

from __future__ import annotations

import random
import sys
import time
from collections import Counter
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from interval_selection.adversary import (  # noqa: E402
    FAMILIES,
    OPENNESS,
    PROPER_FAMILIES,
    _layout,
    decode_unit_good,
    gadget_optimum_bound,
    gen_random,
    gen_tree_gadget,
    gen_unit_gadget,
    good_intervals,
    verify_gadget,
)
from interval_selection.audit import GeneralAudit, PrefixOptimum, ProperAudit  # noqa: E402
from interval_selection.core import (  # noqa: E402
    BRUTE_FORCE_LIMIT,
    brute_force_optimum,
    make_interval,
    offline_optimum,
)
from interval_selection.general import GeneralState  # noqa: E402
from interval_selection.multipass import GENERAL, PROPER, end_simplicial, extend, start  # noqa: E402
from interval_selection.online import COLORS, color_for_seed, coloring_violations, online_init  # noqa: E402
from interval_selection.proper import ProperViolation, ZoneTable, finalize_proper, span_violations  # noqa: E402
from interval_selection.streamio import emit_stream, parse_stream  # noqa: E402
from reference import exhaustive_optimum  # noqa: E402

OPEN = tuple(OPENNESS)
RESULTS: dict[int, str] = {}

STRUCTURE_CODES = {"nested-virtual", "missing-overlap", "virtual-load", "actual-load", "nested-actual", "trace", "provenance", "not-kept", "portions", "bare-gap"}


def record(number: int, ok: bool, detail: str) -> None:
    RESULTS[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


# -- corpora -----------------------------------------------------------------

def general_corpus(count=2000, max_n=200):
    """Random streams over every family and openness, then every gadget shape."""
    out = []
    for k in range(count):
        n = random.Random(k).randint(1, max_n)
        out.append(gen_random(n, FAMILIES[k % 4], k, OPEN[(k // 4) % 4]))
    for depth in range(1, 5):
        for n in range(2, 9):
            out.append(gen_tree_gadget(depth, n, 100 * depth + n)[0])
    for blocks in range(1, 9):
        for n in range(2, 9):
            out.append(gen_unit_gadget(blocks, n, 100 * blocks + n)[0])
    return out


def proper_corpus(count=2000, max_n=200, salt=0):
    out = []
    for k in range(count):
        seed = salt + k
        n = random.Random(seed).randint(1, max_n)
        out.append(gen_random(n, PROPER_FAMILIES[k % 2], seed, OPEN[(k // 2) % 4]))
    return out


@pytest.fixture(scope="module")
def general_streams():
    return general_corpus()


@pytest.fixture(scope="module")
def proper_runs():
    """Criterion-5 runs with a zone audit after every arrival."""
    streams = proper_corpus()
    short, refused, codes = [], [], Counter()  # codes: streams showing each code
    for k, s in enumerate(streams):
        table, audit, hit = ZoneTable(), ProperAudit(), set()
        try:
            for iv in s:
                case = table.process(iv)
                hit.update(v.code for v in audit.check(table, iv, case))
        except ProperViolation as exc:
            refused.append((k, str(exc)))
            continue
        codes.update(hit)
        assert len(audit.case_log) == len(s)
        out, opt = len(finalize_proper(table)), len(offline_optimum(s))
        if 3 * out < 2 * opt:
            short.append((k, out, opt))
    return {"streams": streams, "short": short, "refused": refused, "codes": codes}


# -- 1 -----------------------------------------------------------------------

def test_criterion_01_general_ratio_every_prefix():
    began = time.perf_counter()
    streams = general_corpus()
    bad = []
    for k, s in enumerate(streams):
        state, opt = GeneralState(), PrefixOptimum()
        for t, iv in enumerate(s):
            state.process(iv)
            best = opt.add(iv)
            if 2 * len(offline_optimum(state.actual)) < best:
                bad.append((k, t))
    elapsed = time.perf_counter() - began
    ok = not bad and elapsed < 60
    record(1, ok, f"{len(streams)} streams, {len(bad)} prefix ratio failures, {elapsed:.1f}s (limit 60s)")
    assert not bad, bad[:5]
    assert elapsed < 60


# -- 2 -----------------------------------------------------------------------

def test_criterion_02_oracle_equivalence():
    bad = 0
    for k in range(500):
        n = random.Random(10_000 + k).randint(0, 12)
        s = gen_random(n, FAMILIES[k % 4], 10_000 + k, OPEN[(k // 4) % 4])
        greedy = len(offline_optimum(s))
        if not greedy == brute_force_optimum(s) == exhaustive_optimum(s):
            bad += 1
    record(2, bad == 0, f"500 streams n<=12, {bad} disagreements (greedy, bitmask, subset scan)")
    assert bad == 0


# -- 3, 4 --------------------------------------------------------------------

@pytest.fixture(scope="module")
def general_audit(general_streams):
    codes, first = Counter(), {}
    for k, s in enumerate(general_streams):
        state, audit = GeneralState(), GeneralAudit()
        for t, iv in enumerate(s):
            result = state.process(iv)
            for v in audit.check(state, iv, result):
                codes[v.code] += 1
                first.setdefault(v.code, (k, t, str(v)))
    return codes, first


def test_criterion_03_structural_invariants(general_audit):
    codes, first = general_audit
    found = {c: n for c, n in codes.items() if c in STRUCTURE_CODES}
    record(3, not found, f"checked after every arrival of criterion-1 streams, violations {found or 0}")
    assert not found, [first[c] for c in found]


def test_criterion_04_general_space(general_audit):
    codes, first = general_audit
    ok = codes["space"] == 0
    record(4, ok, f"|V|<=|A|<=2|Opt(A)| at every prefix, {codes['space']} violations")
    assert ok, first.get("space")


# -- 5, 6 --------------------------------------------------------------------

def test_criterion_05_proper_ratio(proper_runs):
    short, refused = proper_runs["short"], proper_runs["refused"]
    ok = not short and not refused
    record(5, ok, f"{len(proper_runs['streams'])} proper streams, {len(short)} below 2/3, {len(refused)} refused")
    assert ok, (short[:5], refused[:5])


def test_criterion_06_zone_bounds(proper_runs):
    codes = proper_runs["codes"]
    counted = {c: codes[c] for c in ("unhosted-zone", "one-zone", "zone-total")}
    context = f"two-zone bound {codes['two-zone']}, partition {codes['partition']}, flexible {codes['flexible']}"
    ok = not any(counted.values())
    record(6, ok, f"streams with violations of {len(proper_runs['streams'])}: {counted}; {context}")
    assert ok, counted


# -- 7 -----------------------------------------------------------------------

def test_criterion_07_span_property():
    streams = proper_corpus(count=100, max_n=60, salt=50_000)
    bad = 0
    for s in streams:
        table = ZoneTable()
        for iv in s:
            table.process(iv)
        bad += bool(span_violations(table.records(), s))
    record(7, bad == 0, f"100 proper streams n<=60, all disjoint triples enumerated, {bad} streams failing")
    assert bad == 0


# -- 8 -----------------------------------------------------------------------

def _member(iv, mode):
    return (iv.lo_cut, iv.hi_cut) if mode == PROPER else iv


def test_criterion_08_multipass():
    failures = Counter()
    for mode in (GENERAL, PROPER):
        streams = (
            [gen_random(random.Random(70_000 + k).randint(1, 200), FAMILIES[k % 4], 70_000 + k, OPEN[(k // 4) % 4])
             for k in range(500)]
            if mode == GENERAL
            else proper_corpus(count=500, salt=80_000)
        )
        for s in streams:
            opt = len(offline_optimum(s))
            state = start(s, mode)
            base = len(state.base)
            have = {_member(iv, mode) for iv in state.base}
            failures["end-simplicial"] += any(_member(iv, mode) not in have for iv in end_simplicial(s))
            for p in range(1, 5):
                if p > 1:
                    extend(state, s)
                out = len(state.selection())
                failures["space"] += len(state.accumulated) > (2 * p - 1) * base
                if mode == GENERAL:
                    failures["ratio"] += 2 * p * out < (2 * p - 1) * opt
                else:
                    failures["ratio"] += (2 * p + 1) * out < 2 * p * opt
    total = sum(failures.values())
    record(8, total == 0, f"500 streams per mode, p=1..4, failures {dict(failures) or 0}")
    assert total == 0, failures


# -- 9 -----------------------------------------------------------------------

def test_criterion_09_online(general_streams):
    freq = Counter(color_for_seed(seed) for seed in range(3000))
    problems = Counter()
    for k, s in enumerate(general_streams):
        state = online_init(0)
        for iv in s:
            state.arrive(iv)
            problems["coloring"] += bool(coloring_violations(state))
            if state.last_neighbours is not None and state.last_neighbours > 2:
                problems["neighbours"] += 1
        sizes = state.class_sizes()
        a, opt = len(state.inner.actual), len(offline_optimum(s))
        problems["identity"] += sum(sizes.values()) != a or 2 * a < opt
        # mean over seeds 0..2999: each seed's output is its colour's class
        problems["mean"] += 6 * sum(freq[c] * sizes[c] for c in COLORS) < 3000 * opt
        if k < 20:
            for seed in range(30):
                rerun = online_init(seed)
                for iv in s:
                    rerun.arrive(iv)
                problems["class"] += len(rerun.solution()) != sizes[rerun.chosen]
    total = sum(problems.values())
    record(9, total == 0, f"{len(general_streams)} streams, seed colours {dict(sorted(freq.items()))}, "
                          f"problems {dict(problems) if total else 0}")
    assert total == 0, problems


# -- 10 ----------------------------------------------------------------------

def _tampered(stream, secret):
    layout, _ = _layout(secret)
    spec, i, first = layout.stacks[-1]
    eps = spec.eps

    def rebuild(items):
        return [make_interval(lo, hi, t, br) for t, (lo, hi, br) in enumerate(items)]

    rows = [(iv.left, iv.right, "[)") for iv in stream]
    pos = layout.aux[-1][0]
    shifted = list(rows)
    shifted[pos] = (rows[pos][0] + eps / 2, rows[pos][1] + eps / 2, "[)")
    good = first + i - 1
    nudged = list(rows)
    nudged[good] = (rows[good][0] + eps, rows[good][1] + eps, "[)")
    swapped = list(rows)
    swapped[0], swapped[1] = rows[1], rows[0]
    yield "aux shifted", rebuild(shifted)
    yield "good nudged", rebuild(nudged)
    yield "pair swapped", rebuild(swapped)
    yield "dropped", rebuild(rows[:-1])
    if len(layout.stacks) > 1:
        n = secret.n
        a, b = layout.stacks[0][2], layout.stacks[1][2]
        moved = rows[:a] + rows[b:b + n] + rows[a + n:b] + rows[a:a + n] + rows[b + n:]
        yield "stacks swapped", rebuild(moved)


def test_criterion_10_gadgets():
    instances = []
    for k in range(100):
        rng = random.Random(90_000 + k)
        instances.append(gen_unit_gadget(rng.randint(1, 8), rng.randint(2, 8), 90_000 + k))
        instances.append(gen_tree_gadget(rng.randint(1, 4), rng.randint(2, 8), 90_000 + k))
    issues = Counter()
    confirmed = set()
    for s, secret in instances:
        issues["verify"] += bool(verify_gadget(s, secret))
        for name, bad in _tampered(s, secret):
            issues[f"tamper:{name}"] += not verify_gadget(bad, secret)
        if secret.kind == "unit-gadget":
            for t, good in enumerate(good_intervals(s, secret)):
                i = secret.indices[t]
                issues["decode"] += decode_unit_good(good, t, secret.n, i) != secret.perms[t][i - 1]
            issues["unit opt"] += len(offline_optimum(s)) != 3 * secret.size
        elif secret.size <= 2 and len(s) <= BRUTE_FORCE_LIMIT:
            brute = brute_force_optimum(s)
            issues["tree brute"] += brute != gadget_optimum_bound(secret)
            confirmed.add(secret.size)
    # the closed form is relied on only once the oracle has confirmed it
    if confirmed == {1, 2}:
        for s, secret in instances:
            if secret.kind == "tree-gadget":
                issues["tree opt"] += len(offline_optimum(s)) != gadget_optimum_bound(secret)
    else:
        issues["tree unconfirmed"] += 1
    total = sum(issues.values())
    record(10, total == 0, f"{len(instances)} instances, tree optimum confirmed by brute force at depths "
                           f"{sorted(confirmed)}, problems {dict(issues) if total else 0}")
    assert total == 0, issues


# -- 11 ----------------------------------------------------------------------

def test_criterion_11_serialization():
    bad = 0
    for k in range(1000):
        n = random.Random(120_000 + k).randint(0, 200)
        family = FAMILIES[k % 4]
        openness = OPEN[(k // 4) % 4] if family in PROPER_FAMILIES else (*OPEN, "mixed")[(k // 4) % 5]
        s = gen_random(n, family, 120_000 + k, openness)
        text = emit_stream(s)
        back = parse_stream(text)
        exact = [(iv.lo, iv.hi) for iv in back] == [(iv.lo, iv.hi) for iv in s]
        bad += not exact or emit_stream(back) != text
    record(11, bad == 0, f"1000 streams, {bad} inexact round trips")
    assert bad == 0


def summary_lines() -> list[str]:
    return [RESULTS[k] for k in sorted(RESULTS)]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
