"""Exact rational simplex for the packing LP and its covering dual.

Packing LP (LP1)::

    max 1'y   s.t.  B' y <= 1,  y >= 0

Covering LP (LP2)::

    min 1'x   s.t.  B x >= 1,   x >= 0

``B`` is the N x M server-by-set incidence matrix of the joint pattern.  All
arithmetic uses :class:`fractions.Fraction`; pivoting follows Bland's rule so
the returned vertex is deterministic for a given column order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DualityGap, InfeasibleLp, LpError, UnboundedLp
from .patterns import IncidenceMatrix

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class LpSolution:
    vector: tuple[Fraction, ...]
    value: Fraction
    basis: tuple[int, ...]
    status: str = OPTIMAL
    iterations: int = 0


def _as_int_matrix(b) -> np.ndarray:
    entries = b.entries if isinstance(b, IncidenceMatrix) else np.asarray(b)
    if entries.ndim != 2:
        raise LpError("incidence matrix must be two-dimensional")
    return entries.astype(np.int64)


class _Tableau:
    """Canonical-form tableau ``A x = b`` with an identity basis already in place."""

    def __init__(self, a: list[list[Fraction]], b: list[Fraction], basis: list[int]):
        self.a = a
        self.b = b
        self.basis = basis
        self.iterations = 0

    @property
    def n_vars(self) -> int:
        return len(self.a[0]) if self.a else 0

    def reduced_costs(self, c: Sequence[Fraction]) -> list[Fraction]:
        r = list(c)
        for i, bi in enumerate(self.basis):
            cb = c[bi]
            if cb:
                row = self.a[i]
                for j in range(self.n_vars):
                    if row[j]:
                        r[j] -= cb * row[j]
        return r

    def pivot(self, row: int, col: int) -> None:
        a, b = self.a, self.b
        piv = a[row][col]
        pr = [v / piv for v in a[row]]
        a[row] = pr
        b[row] = b[row] / piv
        for i in range(len(a)):
            if i == row:
                continue
            factor = a[i][col]
            if factor:
                ai = a[i]
                for j, v in enumerate(pr):
                    if v:
                        ai[j] -= factor * v
                b[i] -= factor * b[row]
        self.basis[row] = col
        self.iterations += 1

    def maximize(self, c: Sequence[Fraction]) -> str:
        """Run primal simplex with Bland's rule; returns OPTIMAL or UNBOUNDED."""
        while True:
            r = self.reduced_costs(c)
            entering = next((j for j, rj in enumerate(r) if rj > 0), None)
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.a):
                if row[entering] > 0:
                    ratio = self.b[i] / row[entering]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)

    def point(self, n: int) -> list[Fraction]:
        x = [ZERO] * n
        for i, bi in enumerate(self.basis):
            if bi < n:
                x[bi] = self.b[i]
        return x


def solve_lp1(b) -> LpSolution:
    """Maximize ``1'y`` subject to ``B'y <= 1, y >= 0``.

    The all-slack basis is feasible, so no phase one is needed.  Raises
    :class:`UnboundedLp` when some server lies in no set (its ``y_n`` is
    unconstrained), which means coverage completion was skipped upstream.
    """
    bm = _as_int_matrix(b)
    n, m = bm.shape
    if n == 0:
        raise LpError("incidence matrix has no rows")
    # rows: one per set; columns: y_1..y_N then one slack per set
    a = []
    for col in range(m):
        row = [Fraction(int(v)) for v in bm[:, col]]
        row += [ONE if k == col else ZERO for k in range(m)]
        a.append(row)
    tab = _Tableau(a, [ONE] * m, [n + k for k in range(m)])
    c = [ONE] * n + [ZERO] * m
    if tab.maximize(c) == UNBOUNDED:
        raise UnboundedLp("packing LP is unbounded: some server is in no set")
    y = tab.point(n)
    return LpSolution(tuple(y), sum(y, ZERO), tuple(tab.basis), OPTIMAL, tab.iterations)


def solve_lp2(b) -> LpSolution:
    """Minimize ``1'x`` subject to ``Bx >= 1, x >= 0`` by two-phase simplex.

    Raises :class:`InfeasibleLp` when a server is covered by no set.
    """
    bm = _as_int_matrix(b)
    n, m = bm.shape
    if n == 0:
        raise LpError("incidence matrix has no rows")
    # columns: x_1..x_M, surplus s_1..s_N, artificial a_1..a_N
    a = []
    for i in range(n):
        row = [Fraction(int(v)) for v in bm[i, :]]
        row += [-ONE if k == i else ZERO for k in range(n)]
        row += [ONE if k == i else ZERO for k in range(n)]
        a.append(row)
    tab = _Tableau(a, [ONE] * n, [m + n + i for i in range(n)])

    phase1 = [ZERO] * (m + n) + [-ONE] * n
    tab.maximize(phase1)
    infeas = sum((tab.b[i] for i, bi in enumerate(tab.basis) if bi >= m + n), ZERO)
    if infeas > 0:
        raise InfeasibleLp("covering LP is infeasible: some server is in no set")

    # drive zero-level artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tab.basis):
        if tab.basis[i] >= m + n:
            col = next((j for j in range(m + n) if tab.a[i][j] != 0), None)
            if col is None:
                del tab.a[i], tab.b[i], tab.basis[i]
                continue
            tab.pivot(i, col)
        i += 1
    for row in tab.a:
        del row[m + n:]

    c = [-ONE] * m + [ZERO] * n
    if tab.maximize(c) == UNBOUNDED:  # pragma: no cover - objective bounded below by 0
        raise LpError("covering LP reported unbounded")
    x = tab.point(m)
    return LpSolution(tuple(x), sum(x, ZERO), tuple(tab.basis), OPTIMAL, tab.iterations)


def packing_feasible(b, y: Sequence[Fraction]) -> bool:
    bm = _as_int_matrix(b)
    if len(y) != bm.shape[0] or any(v < 0 for v in y):
        return False
    return all(sum((y[n] for n in range(bm.shape[0]) if bm[n, m]), ZERO) <= 1 for m in range(bm.shape[1]))


def covering_feasible(b, x: Sequence[Fraction]) -> bool:
    bm = _as_int_matrix(b)
    if len(x) != bm.shape[1] or any(v < 0 for v in x):
        return False
    return all(sum((x[m] for m in range(bm.shape[1]) if bm[n, m]), ZERO) >= 1 for n in range(bm.shape[0]))


@dataclass(frozen=True)
class DualityCertificate:
    packing: LpSolution
    covering: LpSolution
    slack_ok: bool

    @property
    def value(self) -> Fraction:
        return self.packing.value


def complementary_slackness(b, y: Sequence[Fraction], x: Sequence[Fraction]) -> bool:
    """``y_n > 0 => (Bx)_n = 1`` and ``x_m > 0 => (B'y)_m = 1``, checked exactly."""
    bm = _as_int_matrix(b)
    n, m = bm.shape
    for i in range(n):
        if y[i] > 0 and sum((x[j] for j in range(m) if bm[i, j]), ZERO) != 1:
            return False
    for j in range(m):
        if x[j] > 0 and sum((y[i] for i in range(n) if bm[i, j]), ZERO) != 1:
            return False
    return True


def verify_duality(b) -> tuple[Fraction, DualityCertificate]:
    """Solve both LPs and certify equal optima plus complementary slackness."""
    p = solve_lp1(b)
    d = solve_lp2(b)
    if not (packing_feasible(b, p.vector) and covering_feasible(b, d.vector)):
        raise DualityGap("solver returned an infeasible vertex")
    if p.value != d.value:
        raise DualityGap(f"packing optimum {p.value} != covering optimum {d.value}")
    slack = complementary_slackness(b, p.vector, d.vector)
    if not slack:
        raise DualityGap("complementary slackness violated")
    return p.value, DualityCertificate(p, d, slack)
