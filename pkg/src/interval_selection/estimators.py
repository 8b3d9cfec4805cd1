"""scikit-learn style wrappers around the selection algorithms.

Rows of ``X`` are intervals: ``(left, right)`` pairs, ``(left, right,
brackets)`` triples with brackets such as ``"[)"``, or ready-made
:class:`~interval_selection.core.Interval` objects.  Rows are fed to the
algorithm in order, so row position is arrival time.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .core import Interval, as_fraction, is_proper, make_interval, offline_optimum
from .general import GeneralState
from .multipass import GENERAL, PROPER, run_passes
from .online import online_init
from .proper import ProperViolation, ZoneTable


def check_intervals(X, closed: str = "[]", start: int = 0, require_proper: bool = False) -> list[Interval]:
    """Validate ``X`` and return fresh input intervals numbered from ``start``.

    Parameters
    ----------
    X : iterable of rows
        Each row is an Interval, a ``(left, right)`` pair or a
        ``(left, right, brackets)`` triple.  Coordinates must be exact:
        ints, Fractions or ``"p/q"`` strings.  Floats are rejected.
    closed : str, default="[]"
        Brackets used for pairs.
    start : int, default=0
        Arrival index of the first row.
    require_proper : bool, default=False
        Raise ProperViolation unless no interval properly contains another.

    Returns
    -------
    intervals : list of Interval
    """
    if isinstance(X, np.ndarray):
        if X.dtype.kind == "f":
            raise TypeError("floating-point coordinates are not supported")
        if X.ndim != 2 or X.shape[1] not in (2, 3):
            raise ValueError(f"expected shape (n, 2) or (n, 3), got {X.shape}")
        X = X.tolist()
    out = []
    for t, row in enumerate(X, start=start):
        if isinstance(row, Interval):
            br = ("[" if row.lo.closed else "(") + ("]" if row.hi.closed else ")")
            out.append(make_interval(row.left, row.right, t, br))
            continue
        row = tuple(row)
        if len(row) == 2:
            left, right, br = row[0], row[1], closed
        elif len(row) == 3:
            left, right, br = row
        else:
            raise ValueError(f"row {t - start} has {len(row)} fields, expected 2 or 3")
        out.append(make_interval(as_fraction(left), as_fraction(right), t, br))
    if require_proper and not is_proper(out):
        raise ProperViolation("input contains a properly nested pair")
    return out


def _row_key(iv: Interval):
    return (iv.lo_cut, iv.hi_cut)


class _Selector(BaseEstimator):
    """Shared fit / partial_fit / predict plumbing."""

    def _reset(self):
        self.n_seen_ = 0

    def fit(self, X, y=None):
        self._reset()
        return self.partial_fit(X)

    def partial_fit(self, X, y=None):
        if not hasattr(self, "n_seen_"):
            self._reset()
        for iv in check_intervals(X, self.closed, start=self.n_seen_):
            self._consume(iv)
            self.n_seen_ += 1
        self.selection_ = self._selection()
        return self

    def predict(self, X):
        """Boolean mask of rows holding a selected interval.

        Each selected interval marks only the first row equal to it as a
        point set, so the marked rows are pairwise disjoint.
        """
        check_is_fitted(self, "selection_")
        wanted = {}
        for iv in self.selection_:
            wanted[_row_key(iv)] = wanted.get(_row_key(iv), 0) + 1
        rows = check_intervals(X, self.closed)
        mask = np.zeros(len(rows), dtype=bool)
        for i, iv in enumerate(rows):
            key = _row_key(iv)
            if wanted.get(key):
                mask[i] = True
                wanted[key] -= 1
        return mask

    def score(self, X, y=None) -> Fraction:
        """Selected size over the optimum of ``X``, as an exact fraction."""
        rows = check_intervals(X, self.closed)
        opt = len(offline_optimum(rows))
        chosen = int(self.predict(X).sum())
        return Fraction(1) if opt == 0 else Fraction(chosen, opt)


class GeneralSelector(_Selector):
    """One-pass 2-approximation for arbitrary intervals."""

    def __init__(self, closed: str = "[]"):
        self.closed = closed

    def _reset(self):
        super()._reset()
        self.state_ = GeneralState()

    def _consume(self, iv):
        self.state_.process(iv)

    def _selection(self):
        self.peak_actual_ = self.state_.peak_actual
        self.peak_virtual_ = self.state_.peak_virtual
        return offline_optimum(self.state_.actual)


class ProperSelector(_Selector):
    """One-pass 3/2-approximation for proper intervals."""

    def __init__(self, closed: str = "[]"):
        self.closed = closed

    def _reset(self):
        super()._reset()
        self.table_ = ZoneTable()

    def _consume(self, iv):
        self.table_.process(iv)

    def _selection(self):
        self.peak_zones_ = self.table_.peak_zones
        return offline_optimum(self.table_.records())


class OnlineSelector(_Selector):
    """Preemptive online selection: one random colour class of A."""

    def __init__(self, seed: int = 0, closed: str = "[]"):
        self.seed = seed
        self.closed = closed

    def _reset(self):
        super()._reset()
        self.state_ = online_init(self.seed)
        self.color_ = self.state_.chosen

    def _consume(self, iv):
        self.state_.arrive(iv)

    def _selection(self):
        return sorted(self.state_.solution(), key=lambda iv: iv.lo.rank)


class GreedySelector(_Selector):
    """Offline earliest-finish greedy; keeps every interval."""

    def __init__(self, closed: str = "[]"):
        self.closed = closed

    def _reset(self):
        super()._reset()
        self.seen_ = []

    def _consume(self, iv):
        self.seen_.append(iv)

    def _selection(self):
        return offline_optimum(self.seen_)


class MultiPassSelector(_Selector):
    """p-pass selection; needs the whole input, so only ``fit`` is offered."""

    def __init__(self, passes: int = 2, base: str = "auto", closed: str = "[]"):
        self.passes = passes
        self.base = base
        self.closed = closed

    def fit(self, X, y=None):
        if self.base not in ("auto", GENERAL, PROPER):
            raise ValueError(f"unknown base {self.base!r}")
        rows = check_intervals(X, self.closed)
        mode = self.base
        if mode == "auto":
            mode = PROPER if is_proper(rows) else GENERAL
        self.mode_ = mode
        self.state_ = run_passes(rows, self.passes, mode)
        self.n_seen_ = len(rows)
        self.stored_sizes_ = list(self.state_.history)
        self.selection_ = self.state_.selection()
        return self

    def partial_fit(self, X, y=None):
        raise NotImplementedError("multiple passes need the whole stream; use fit")


def as_rows(intervals: Iterable[Interval]) -> list[tuple]:
    """Intervals back to ``(left, right, brackets)`` rows."""
    out = []
    for iv in intervals:
        br = ("[" if iv.lo.closed else "(") + ("]" if iv.hi.closed else ")")
        out.append((iv.left, iv.right, br))
    return out
