"""Classical and martingale transport LPs on finite grids.

The martingale LP over pi[i, j] >= 0 has three constraint blocks::

    sum_j pi[i, j]                = mu_i      (row sums, duals phi)
    sum_i pi[i, j]                = nu_j      (column sums, duals psi)
    sum_j pi[i, j] (y_j - x_i)    = 0         (martingale rows, duals Delta)

Exact instances go through the in-house rational simplex.  Small float
instances use the same code in binary64; large float instances are handed to
HiGHS (dual simplex, so the answer is still a vertex with basis duals).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .costs import CostSpec
from .curtain import Coupling, NotInConvexOrder, left_curtain
from .measures import DiscreteMeasure, convex_order
from .numeric import DEFAULT_TOL, MotError
from .simplex import LPResult, simplex


class MassMismatch(MotError, ValueError):
    pass


class LPFailure(MotError, RuntimeError):
    pass


SIMPLEX_MAX_VARS = 600


@dataclass(frozen=True)
class MartingaleLP:
    mu: DiscreteMeasure
    nu: DiscreteMeasure
    cost: object  # n x m matrix (list of lists or ndarray)
    martingale: bool = True

    @classmethod
    def build(cls, mu, nu, cost: CostSpec, martingale: bool = True, exact: bool | None = None) -> "MartingaleLP":
        if exact is None:
            exact = mu.exact and nu.exact and cost.exact_capable
        if not exact:
            mu, nu = mu.to_float(), nu.to_float()
        return cls(mu, nu, cost.matrix(mu.xs, nu.xs, exact=exact), martingale)

    @property
    def exact(self) -> bool:
        return self.mu.exact and self.nu.exact and not isinstance(self.cost, np.ndarray)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.mu), len(self.nu)

    def cost_vector(self) -> list:
        if isinstance(self.cost, np.ndarray):
            return list(self.cost.reshape(-1))
        return [v for row in self.cost for v in row]

    def constraints(self):
        """Dense (A, b) in the row order: row sums, column sums, martingale rows."""
        n, m = self.shape
        exact = self.exact
        conv = Fraction if exact else float
        xs = [conv(x) for x in self.mu.xs]
        ys = [conv(y) for y in self.nu.xs]
        zero, one = conv(0), conv(1)
        A, b = [], []
        for i in range(n):
            row = [zero] * (n * m)
            row[i * m : (i + 1) * m] = [one] * m
            A.append(row)
            b.append(conv(self.mu.ws[i]))
        for j in range(m):
            row = [zero] * (n * m)
            for i in range(n):
                row[i * m + j] = one
            A.append(row)
            b.append(conv(self.nu.ws[j]))
        if self.martingale:
            for i in range(n):
                row = [zero] * (n * m)
                row[i * m : (i + 1) * m] = [y - xs[i] for y in ys]
                A.append(row)
                b.append(zero)
        return A, b

    def sparse_constraints(self):
        """The float constraint system as a CSR matrix, same row order as ``constraints``."""
        from scipy import sparse

        n, m = self.shape
        xs = np.array([float(x) for x in self.mu.xs])
        ys = np.array([float(y) for y in self.nu.xs])
        cols = np.arange(n * m)
        ii, jj = np.divmod(cols, m)
        rows = [ii, n + jj]
        vals = [np.ones(n * m), np.ones(n * m)]
        if self.martingale:
            rows.append(n + m + ii)
            vals.append(ys[jj] - xs[ii])
        R = 2 * n + m if self.martingale else n + m
        A = sparse.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.tile(cols, len(rows)))), shape=(R, n * m)
        )
        b = np.concatenate([np.array([float(w) for w in self.mu.ws]), np.array([float(w) for w in self.nu.ws])])
        if self.martingale:
            b = np.concatenate([b, np.zeros(n)])
        return A, b

    def scale(self) -> float:
        c = self.cost_vector()
        return max(1.0, max((abs(float(v)) for v in c), default=0.0))

    def plan(self, x: Sequence, threshold=0) -> Coupling:
        n, m = self.shape
        mat = [list(x[i * m : (i + 1) * m]) for i in range(n)]
        return Coupling.from_matrix(self.mu.xs, self.nu.xs, mat, threshold=threshold)

    def flatten(self, plan: Coupling) -> list:
        n, m = self.shape
        key = (lambda v: v) if self.exact else float
        xi = {key(x): i for i, x in enumerate(self.mu.xs)}
        yj = {key(y): j for j, y in enumerate(self.nu.xs)}
        out = [Fraction(0) if self.exact else 0.0] * (n * m)
        for x, y, w in plan.entries():
            out[xi[key(x)] * m + yj[key(y)]] += w if self.exact else float(w)
        return out

    def value_of(self, plan: Coupling):
        return sum((c * p for c, p in zip(self.cost_vector(), self.flatten(plan))), 0)


@dataclass(frozen=True)
class DualCertificate:
    phi: tuple
    psi: tuple
    delta: tuple  # zeros for the classical problem
    gap: object

    def dual_value(self, mu: DiscreteMeasure, nu: DiscreteMeasure):
        return sum((p * w for p, w in zip(self.phi, mu.ws)), 0) + sum((q * w for q, w in zip(self.psi, nu.ws)), 0)

    def violation(self, problem: MartingaleLP):
        """Largest amount by which phi(x) + psi(y) + Delta(x)(y - x) exceeds c(x, y)."""
        n, m = problem.shape
        c = problem.cost_vector()
        worst = 0
        for i, x in enumerate(problem.mu.xs):
            for j, y in enumerate(problem.nu.xs):
                lhs = self.phi[i] + self.psi[j] + self.delta[i] * (y - x)
                worst = max(worst, lhs - c[i * m + j])
        return worst

    def is_feasible(self, problem: MartingaleLP, tol: float | None = None) -> bool:
        if tol is None:
            tol = 0 if problem.exact else DEFAULT_TOL.feas * problem.scale()
        return self.violation(problem) <= tol


@dataclass(frozen=True)
class MartingaleSolution:
    plan: Coupling
    value: object
    dual: DualCertificate
    problem: MartingaleLP
    backend: str
    x: tuple  # flattened primal vector


def _choose_backend(problem: MartingaleLP, backend: str) -> str:
    if backend != "auto":
        return backend
    n, m = problem.shape
    if problem.exact or n * m <= SIMPLEX_MAX_VARS:
        return "simplex"
    return "highs"


HIGHS_OPTIONS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


def _highs(c, A, b, bounds=None):
    from scipy.optimize import linprog

    args = dict(
        A_eq=A if hasattr(A, "tocsr") else np.asarray(A, dtype=float),
        b_eq=np.asarray(b, dtype=float),
        bounds=(0, None) if bounds is None else bounds,
        method="highs-ds",
    )
    res = linprog(np.asarray(c, dtype=float), options=HIGHS_OPTIONS, **args)
    if res.status == 2:
        # presolve can misjudge feasibility when masses span many magnitudes
        res = linprog(np.asarray(c, dtype=float), options={**HIGHS_OPTIONS, "presolve": False}, **args)
    if res.status == 2:
        return LPResult("infeasible", [], None, [], (), res.nit)
    if res.status == 3:
        return LPResult("unbounded", [], None, [], (), res.nit)
    if res.status != 0:
        raise LPFailure(res.message)
    x = [max(float(v), 0.0) for v in res.x]
    return LPResult("optimal", x, float(res.fun), [float(v) for v in res.eqlin.marginals], (), res.nit)


def solve_lp(problem: MartingaleLP, backend: str = "auto", start=None, tol: float | None = None) -> MartingaleSolution:
    """Solve a prepared LP and package plan, value and dual certificate."""
    backend = _choose_backend(problem, backend)
    c = problem.cost_vector()
    tol = DEFAULT_TOL.pivot if tol is None else tol
    if backend == "simplex":
        A, b = problem.constraints()
        res = simplex(A, b, c, exact=problem.exact, start=start, tol=tol)
    elif backend == "highs":
        A, b = problem.sparse_constraints()
        res = _highs(c, A, b)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if res.status == "infeasible":
        raise NotInConvexOrder("no coupling satisfies the constraints")
    if res.status != "optimal":
        raise LPFailure(f"LP {res.status}")
    n, m = problem.shape
    y = res.duals
    zero = Fraction(0) if problem.exact else 0.0
    phi = tuple(y[:n])
    psi = tuple(y[n : n + m])
    delta = tuple(y[n + m : 2 * n + m]) if problem.martingale else tuple([zero] * n)
    threshold = 0 if problem.exact else DEFAULT_TOL.prune
    plan = problem.plan(res.x, threshold=threshold)
    value = res.value
    dual_value = sum((p * w for p, w in zip(phi, b[:n])), zero) + sum((q * w for q, w in zip(psi, b[n : n + m])), zero)
    cert = DualCertificate(phi, psi, delta, value - dual_value)
    return MartingaleSolution(plan, value, cert, problem, backend, tuple(res.x))


def solve_martingale(
    mu: DiscreteMeasure,
    nu: DiscreteMeasure,
    cost: CostSpec,
    backend: str = "auto",
    exact: bool | None = None,
    warm_start: bool = True,
) -> MartingaleSolution:
    """Minimize the expected cost over martingale couplings of (mu, nu)."""
    if not convex_order(mu, nu):
        raise NotInConvexOrder("mu and nu are not in convex order")
    problem = MartingaleLP.build(mu, nu, cost, exact=exact)
    return solve_problem(problem, backend=backend, warm_start=warm_start)


def solve_problem(problem: MartingaleLP, backend: str = "auto", warm_start: bool = True) -> MartingaleSolution:
    start = None
    if warm_start and problem.martingale and _choose_backend(problem, backend) == "simplex":
        mu, nu = problem.mu, problem.nu
        lc = left_curtain(mu, nu) if problem.exact else left_curtain(mu.to_float(), nu.to_float())
        start = problem.flatten(lc)
    return solve_lp(problem, backend=backend, start=start)


def solve_classical(mu: DiscreteMeasure, nu: DiscreteMeasure, cost: CostSpec, backend: str = "auto", exact=None):
    """Classical transport: returns (plan, value)."""
    if mu.exact and nu.exact and mu.mass != nu.mass or abs(float(mu.mass) - float(nu.mass)) > DEFAULT_TOL.feas:
        raise MassMismatch("marginals have different total mass")
    problem = MartingaleLP.build(mu, nu, cost, martingale=False, exact=exact)
    sol = solve_lp(problem, backend=backend)
    return sol.plan, sol.value


def martingale_feasible(mu: DiscreteMeasure, nu: DiscreteMeasure) -> bool:
    """Phase-1 feasibility of the martingale polytope (no curtain warm start)."""
    exact = mu.exact and nu.exact
    n, m = len(mu), len(nu)
    zero = Fraction(0) if exact else 0.0
    problem = MartingaleLP(mu, nu, [[zero] * m for _ in range(n)] if exact else np.zeros((n, m)))
    A, b = problem.constraints()
    res = simplex(A, b, [zero] * (n * m), exact=exact)
    return res.status == "optimal"


def hoeffding_frechet(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Coupling:
    """Quantile (co-monotone) coupling, built by merging the two quantile step functions."""
    exact = mu.exact and nu.exact
    if (mu.mass != nu.mass) if exact else abs(float(mu.mass) - float(nu.mass)) > DEFAULT_TOL.feas:
        raise MassMismatch("marginals have different total mass")
    i = j = 0
    a = list(mu.ws)
    bw = list(nu.ws)
    entries = []
    while i < len(a) and j < len(bw):
        w = min(a[i], bw[j])
        if w > 0:
            entries.append((mu.xs[i], nu.xs[j], w))
        a[i] -= w
        bw[j] -= w
        if a[i] <= (0 if exact else DEFAULT_TOL.prune):
            i += 1
        if j < len(bw) and bw[j] <= (0 if exact else DEFAULT_TOL.prune):
            j += 1
    return Coupling.from_entries(entries, exact=exact)


def is_monotone_support(plan: Coupling, threshold=0) -> bool:
    """No (x, y), (x', y') in the support with x < x' and y > y'."""
    best = None
    for x, row in plan.rows:
        ys = [y for y, w in row if w > threshold]
        if not ys:
            continue
        if best is not None and min(ys) < best:
            return False
        best = max(ys)
    return True


def diagonal_gap(mu: DiscreteMeasure, nu: DiscreteMeasure, cost: CostSpec) -> tuple[float, float]:
    """(free value, value with pi(x, x) pinned to min(mu({x}), nu({x}))).

    Float LPs through HiGHS; the pinned problem only adds variable bounds.
    """
    problem = MartingaleLP.build(mu, nu, cost, exact=False)
    A, b = problem.sparse_constraints()
    c = problem.cost_vector()
    free = _highs(c, A, b)
    n, m = problem.shape
    col = {y: j for j, y in enumerate(problem.nu.xs)}
    bounds = [(0.0, None)] * (n * m)
    for i, x in enumerate(problem.mu.xs):
        j = col.get(x)
        if j is not None:
            stay = min(float(problem.mu.ws[i]), float(problem.nu.ws[j]))
            bounds[i * m + j] = (stay, stay)
    forced = _highs(c, A, b, bounds=bounds)
    if free.status != "optimal" or forced.status != "optimal":
        raise LPFailure(f"diagonal comparison: free {free.status}, forced {forced.status}")
    return free.value, forced.value


# uniqueness probe


def uniqueness_probe(problem: MartingaleLP, value, trials: int = 3, seed: int = 0, tol: float | None = None) -> bool:
    """Randomized test that the optimal face is a single point.

    Each trial maximizes and minimizes a random linear functional over the
    optimal face; the face is a singleton iff max == min for almost every
    functional.  Exact instances describe the face as {feasible, cost <= value}.
    Float instances use complementary slackness instead: the face is the set of
    feasible plans vanishing on every column whose reduced cost under an
    optimal dual is positive.  A cost slab {cost <= value + eps} would admit
    plans at distance eps / (smallest positive reduced cost), which swamps the
    comparison when reduced costs are small.
    """
    rng = np.random.default_rng(seed)
    A, b = problem.constraints()
    c = problem.cost_vector()
    exact = problem.exact
    N = len(c)
    sol = _optimal_solution(problem)
    if exact:
        cols = list(range(N))
        A2 = [row[:] for row in A] + [list(c)]
        b2 = list(b) + [Fraction(value)]
        start = None if sol is None else list(sol.x)
    else:
        if sol is None:
            raise LPFailure("probe needs an optimal dual")
        zt = (DEFAULT_TOL.feas if tol is None else tol) * problem.scale()
        cols = [k for k, r in enumerate(_reduced_costs(problem, sol.dual)) if r <= zt]
        A2 = [[row[k] for k in cols] for row in A]
        b2 = list(b)
        start = [float(sol.x[k]) for k in cols]
    backend = "simplex" if exact or len(cols) <= SIMPLEX_MAX_VARS else "highs"
    cmp_tol = 0 if exact else 1e-7 * max(1.0, float(problem.mu.mass))
    for _ in range(trials):
        r = rng.integers(-1000, 1001, size=N)
        rv = [Fraction(int(r[k]), 1000) if exact else float(r[k]) / 1000 for k in cols]
        vals = []
        for sign in (1, -1):
            obj = [sign * v for v in rv]
            if backend == "simplex":
                res = simplex(A2, b2, obj, exact=exact, start=start)
            else:
                res = _highs(obj, A2, b2)
            if res.status != "optimal":
                raise LPFailure(f"probe LP {res.status}")
            vals.append(sign * res.value)
        if abs(vals[0] - vals[1]) > cmp_tol:
            return False
    return True


def _reduced_costs(problem: MartingaleLP, dual: DualCertificate) -> list:
    n, m = problem.shape
    c = problem.cost_vector()
    out = []
    for i, x in enumerate(problem.mu.xs):
        for j, y in enumerate(problem.nu.xs):
            out.append(c[i * m + j] - dual.phi[i] - dual.psi[j] - dual.delta[i] * (y - x))
    return out


def _optimal_solution(problem: MartingaleLP):
    try:
        return solve_problem(problem)
    except MotError:
        return None


# support structure


@dataclass(frozen=True)
class SupportProfile:
    xs: tuple
    masses: tuple
    counts: tuple  # atoms above threshold per row
    offdiag: tuple  # same, excluding y == x

    def mass_fraction(self, max_atoms: int) -> float:
        total = sum(float(w) for w in self.masses)
        ok = sum(float(w) for w, k in zip(self.masses, self.counts) if k <= max_atoms)
        return ok / total if total else 1.0


def support_profile(plan: Coupling, threshold=None) -> SupportProfile:
    if threshold is None:
        threshold = 0 if plan.exact else DEFAULT_TOL.support
    xs, masses, counts, offdiag = [], [], [], []
    for x, row in plan.rows:
        ys = [y for y, w in row if w > threshold]
        xs.append(x)
        masses.append(sum((w for _, w in row), 0))
        counts.append(len(ys))
        offdiag.append(sum(1 for y in ys if y != x))
    return SupportProfile(tuple(xs), tuple(masses), tuple(counts), tuple(offdiag))


# vertex enumeration for tiny instances


def _exact_rank_rows(A) -> list[int]:
    """Indices of a maximal set of linearly independent rows (exact elimination)."""
    rows = [list(map(Fraction, r)) for r in A]
    basis: list[list] = []
    pivots: list[int] = []
    keep = []
    for idx, r in enumerate(rows):
        r = r[:]
        for bvec, p in zip(basis, pivots):
            if r[p] != 0:
                f = r[p] / bvec[p]
                r = [u - f * v for u, v in zip(r, bvec)]
        nz = next((k for k, v in enumerate(r) if v != 0), None)
        if nz is not None:
            basis.append(r)
            pivots.append(nz)
            keep.append(idx)
    return keep


def _exact_solve(A, b, cols) -> list | None:
    """Unique solution of A[:, cols] z = b (exact), or None."""
    M = [[Fraction(A[i][j]) for j in cols] + [Fraction(b[i])] for i in range(len(A))]
    k = len(cols)
    r = 0
    piv_cols = []
    for c in range(k):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            return None
        M[r], M[p] = M[p], M[r]
        M[r] = [v / M[r][c] for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [u - f * v for u, v in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    if any(M[i][-1] != 0 for i in range(r, len(M))):
        return None
    return [M[i][-1] for i in range(k)]


def enumerate_vertices(problem: MartingaleLP, limit_vars: int = 16) -> list[Coupling]:
    """All vertices of the (exact) transport polytope, for n * m <= limit_vars."""
    n, m = problem.shape
    if n * m > limit_vars:
        raise ValueError("vertex enumeration is limited to tiny grids")
    A, b = problem.constraints()
    keep = _exact_rank_rows(A)
    A = [A[i] for i in keep]
    b = [b[i] for i in keep]
    r = len(A)
    N = n * m
    Af = np.array([[float(v) for v in row] for row in A])
    bf = np.array([float(v) for v in b])
    supports = set()
    combos = list(itertools.combinations(range(N), r))
    for start in range(0, len(combos), 4096):
        chunk = np.array(combos[start : start + 4096])
        mats = np.transpose(Af[:, chunk], (1, 0, 2))
        dets = np.linalg.det(mats)
        ok = np.abs(dets) > 1e-9
        if not ok.any():
            continue
        sols = np.linalg.solve(mats[ok], np.broadcast_to(bf, (ok.sum(), r))[..., None])[..., 0]
        for cols, z in zip(chunk[ok], sols):
            if (z >= -1e-9).all():
                supports.add(tuple(int(c) for c, v in zip(cols, z) if v > 1e-9))
    vertices = []
    for supp in sorted(supports):
        z = _exact_solve(A, b, supp)
        if z is None or any(v <= 0 for v in z):
            continue
        x = [Fraction(0)] * N
        for c, v in zip(supp, z):
            x[c] = v
        plan = problem.plan(x)
        if all(p.entries() != plan.entries() for p in vertices):
            vertices.append(plan)
    return vertices
