from fractions import Fraction

import pytest
from hypothesis import given, settings

from interval_selection.adversary import gen_random
from interval_selection.core import is_proper, make_interval, offline_optimum
from interval_selection.general import run_general
from interval_selection.multipass import (
    GENERAL,
    PROPER,
    end_simplicial,
    first_pass,
    neighbor_pass,
    run_multipass,
    run_passes,
)
from strategies import proper_streams, streams


def build(spans, br="[]"):
    return [make_interval(Fraction(a), Fraction(b), t, br) for t, (a, b) in enumerate(spans)]


def slow_next(stream, iv):
    after = [j for j in stream if j.lo.rank > iv.hi.rank]
    return min(after, key=lambda j: j.hi.rank, default=None)


def slow_prev(stream, iv):
    before = [j for j in stream if j.hi.rank < iv.lo.rank]
    return max(before, key=lambda j: j.lo.rank, default=None)


def test_next_example():
    s = build([(0, 1), (2, 5), (3, 4), ("1/2", "5/2")])
    nxt, prv = neighbor_pass(s, [s[0]])
    assert nxt[s[0]] is s[2]
    assert s[0] not in prv


def test_no_neighbours():
    s = build([(0, 5), (1, 6)])
    nxt, prv = neighbor_pass(s, s)
    assert nxt == {} and prv == {}


@settings(max_examples=200, deadline=None)
@given(streams(max_size=14))
def test_neighbours_match_linear_scan(s):
    tracked = s[::2]
    nxt, prv = neighbor_pass(s, tracked)
    for iv in tracked:
        assert nxt.get(iv) is slow_next(s, iv)
        assert prv.get(iv) is slow_prev(s, iv)


def test_first_pass_examples():
    disjoint = build([(0, 1), (2, 3), (4, 5)])
    assert first_pass(disjoint) == disjoint
    s = build([(0, 10), (2, 12), (4, 14)])
    assert sorted((iv.left, iv.right) for iv in first_pass(s)) == [(0, 10), (4, 14)]
    unit = build([(0, 1), ("1/2", "3/2")], br="[)")
    assert first_pass(unit, PROPER) == unit


def test_one_pass_is_the_base_algorithm():
    for seed in range(20):
        s = gen_random(40, "uniform-general", seed)
        assert run_multipass(s, 1) == offline_optimum(run_general(s).actual)


def test_iterator_rejected():
    s = build([(0, 1)])
    with pytest.raises(TypeError):
        run_passes(iter(s), 2)
    with pytest.raises(ValueError):
        run_passes(s, 0)
    with pytest.raises(ValueError):
        first_pass(s, "sideways")


def test_end_simplicial_examples():
    s = build([(0, 10), (5, 6), (20, 21)])
    assert end_simplicial(s) == [s[1], s[2]]
    chain = build([(0, 2), (1, 3), (2, 4)])
    assert end_simplicial(chain) == [chain[0], chain[2]]


def _check(stream, mode, max_p=4):
    opt = len(offline_optimum(stream))
    state = run_passes(stream, 1, mode)
    base = len(state.base)
    have = {(iv.lo_cut, iv.hi_cut) if mode == PROPER else iv for iv in state.accumulated}
    for iv in end_simplicial(stream):
        assert ((iv.lo_cut, iv.hi_cut) if mode == PROPER else iv) in have
    for p in range(1, max_p + 1):
        state = run_passes(stream, p, mode)
        out = len(state.selection())
        assert len(state.accumulated) <= (2 * p - 1) * base
        if mode == GENERAL:
            assert 2 * p * out >= (2 * p - 1) * opt
        else:
            assert (2 * p + 1) * out >= 2 * p * opt


@settings(max_examples=120, deadline=None)
@given(streams(max_size=14))
def test_general_bounds(s):
    _check(s, GENERAL)


@settings(max_examples=120, deadline=None)
@given(proper_streams(max_size=14))
def test_proper_bounds(s):
    assert is_proper(s)
    _check(s, PROPER)


def test_history_grows():
    s = gen_random(60, "uniform-general", 5)
    state = run_passes(s, 4)
    assert state.passes == 4
    assert state.history == sorted(state.history)
    assert len(state.history) == 4
