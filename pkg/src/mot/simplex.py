"""Dense two-phase tableau simplex with Bland's rule.

Works on ``numpy`` arrays of dtype ``object`` holding ``Fraction`` (exact) or
``float64``.  The artificial columns stay in the tableau for the whole run, so
the final objective row carries the dual vector:  y_i = -(reduced cost of
artificial i).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list
    value: object
    duals: list
    basis: tuple
    iterations: int
    warm_started: bool = False


class _Tableau:
    def __init__(self, A, b, exact: bool, tol: float):
        self.exact = exact
        self.tol = 0 if exact else tol
        self.R, self.N = len(A), len(A[0]) if len(A) else 0
        dtype = object if exact else float
        conv = Fraction if exact else float
        A = np.array([[conv(v) for v in row] for row in A], dtype=dtype).reshape(self.R, self.N)
        b = np.array([conv(v) for v in b], dtype=dtype)
        self.sign = np.where(b < 0, -1, 1)
        A = A * self.sign[:, None]
        b = b * self.sign
        one, zero = conv(1), conv(0)
        eye = np.array([[one if i == k else zero for k in range(self.R)] for i in range(self.R)], dtype=dtype)
        eye = eye.reshape(self.R, self.R)
        self.T = np.concatenate([A, eye, b[:, None]], axis=1)
        self.basis = list(range(self.N, self.N + self.R))
        self.rows = list(range(self.R))  # original row index of each tableau row
        self.obj = None
        self.iterations = 0

    def zero(self):
        return Fraction(0) if self.exact else 0.0

    def pivot(self, r: int, j: int):
        T = self.T
        T[r] = T[r] / T[r, j]
        col = T[:, j].copy()
        col[r] = 0
        nz = np.nonzero(col != 0)[0] if self.exact else np.nonzero(col)[0]
        if len(nz):
            T[nz] -= np.outer(col[nz], T[r]).astype(T.dtype)
        if self.obj is not None and self.obj[j] != 0:
            self.obj = self.obj - self.obj[j] * T[r]
        self.basis[r] = j
        self.iterations += 1

    def set_objective(self, cost):
        """Objective row of reduced costs (last entry = -objective value)."""
        c = np.array(list(cost) + [self.zero()], dtype=self.T.dtype)
        cb = np.array([cost[j] for j in self.basis], dtype=self.T.dtype)
        self.obj = c - cb @ self.T if len(cb) else c

    def run(self, allowed: int, max_iter: int) -> str:
        """Bland's rule on columns < allowed until optimal or unbounded."""
        T, tol = self.T, self.tol
        for _ in range(max_iter):
            d = self.obj[:allowed]
            cand = np.nonzero(d < -tol)[0]
            if not len(cand):
                return "optimal"
            j = int(cand[0])
            col = T[:, j]
            rows = np.nonzero(col > tol)[0]
            if not len(rows):
                return "unbounded"
            ratios = [T[r, -1] / col[r] for r in rows]
            best = min(ratios)
            # relative slack only: an absolute one lets Bland pick rows whose
            # ratio is visibly larger when masses are small, and it cycles
            slack = 0 if self.exact else 1e-12 * abs(float(best))
            ties = [r for r, q in zip(rows, ratios) if q <= best + slack]
            r = min(ties, key=lambda i: self.basis[i])
            self.pivot(int(r), j)
        raise RuntimeError("simplex iteration limit reached")

    def crash(self, x0) -> bool:
        """Pivot the support of a feasible point into the basis; True on success."""
        tol = self.tol
        support = [j for j in np.argsort([-float(v) for v in x0], kind="stable") if x0[j] > tol]
        for j in support:
            col = self.T[:, j]
            best, best_r = self.zero(), None
            for r in range(len(self.basis)):
                if self.basis[r] >= self.N and abs(col[r]) > max(best, tol):
                    best, best_r = abs(col[r]), r
            if best_r is not None:
                self.pivot(best_r, j)
        rhs = self.T[:, -1]
        feas_tol = 0 if self.exact else 1e3 * tol
        if any(v < -feas_tol for v in rhs):
            return False
        for r, j in enumerate(self.basis):
            if j >= self.N and abs(rhs[r]) > feas_tol:
                return False
        if not self.exact:
            self.T[:, -1] = np.maximum(rhs, 0.0)
        return True

    def drive_out_artificials(self):
        r = 0
        while r < len(self.basis):
            if self.basis[r] >= self.N:
                row = self.T[r, : self.N]
                nz = np.nonzero(np.abs(row) > self.tol)[0] if not self.exact else np.nonzero(row != 0)[0]
                if len(nz):
                    self.pivot(r, int(nz[0]))
                else:
                    # redundant constraint
                    self.T = np.delete(self.T, r, axis=0)
                    del self.basis[r]
                    del self.rows[r]
                    continue
            r += 1


def simplex(A, b, c, exact: bool, start=None, tol: float = 1e-9, max_iter: int = 100000) -> LPResult:
    """Minimize c.x subject to A x = b, x >= 0."""
    tab = _Tableau(A, b, exact, tol)
    N, R = tab.N, tab.R
    zero = tab.zero()
    warm = False
    if start is not None:
        warm = tab.crash(start)
        if not warm:
            tab = _Tableau(A, b, exact, tol)
    phase1 = [zero] * N + [zero + 1] * R
    tab.set_objective(phase1)
    if not warm:
        tab.run(N + R, max_iter)
        if -tab.obj[-1] > (0 if exact else tol * max(1.0, float(np.max(np.abs(tab.T[:, -1]))) if R else 1.0)):
            return LPResult("infeasible", [], None, [], tuple(tab.basis), tab.iterations, warm)
    tab.obj = None
    tab.drive_out_artificials()
    conv = Fraction if exact else float
    cost = [conv(v) for v in c] + [zero] * R
    tab.set_objective(cost)
    status = tab.run(N, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", [], None, [], tuple(tab.basis), tab.iterations, warm)
    x = [zero] * N
    for r, j in enumerate(tab.basis):
        if j < N:
            x[j] = tab.T[r, -1]
    value = sum((cost[j] * x[j] for j in range(N)), zero)
    duals = [-tab.obj[N + i] * int(tab.sign[i]) for i in range(R)]
    return LPResult("optimal", x, value, duals, tuple(tab.basis), tab.iterations, warm)
