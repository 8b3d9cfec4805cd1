"""Hypothesis strategies for small interval streams on a coarse grid."""

from fractions import Fraction

from hypothesis import strategies as st

from interval_selection.core import make_interval

BRACKETS = ("[]", "()", "[)", "(]")


@st.composite
def streams(draw, max_size=12, grid=8, brackets=BRACKETS):
    # a coarse half-integer grid forces shared coordinates
    size = draw(st.integers(0, max_size))
    out = []
    for t in range(size):
        a = draw(st.integers(0, 2 * grid))
        b = draw(st.integers(a + 1, 2 * grid + 1))
        br = draw(st.sampled_from(brackets))
        out.append(make_interval(Fraction(a, 2), Fraction(b, 2), t, br))
    return out


@st.composite
def proper_streams(draw, max_size=12, brackets="[)"):
    # distinct lefts with strictly increasing rights, replayed in any order
    k = draw(st.integers(1, max(1, max_size)))
    lefts = sorted(draw(st.sets(st.integers(0, 40), min_size=1, max_size=k)))
    rights = []
    for lo in lefts:
        hi = lo + draw(st.integers(1, 6))
        if rights:
            hi = max(hi, rights[-1] + 1)
        rights.append(hi)
    pairs = list(zip(lefts, rights))
    size = draw(st.integers(1, max_size))
    picks = [draw(st.sampled_from(pairs)) for _ in range(size)]
    return [make_interval(lo, hi, t, brackets) for t, (lo, hi) in enumerate(picks)]
