"""Competitors, variations and the local optimality check for martingale plans.

A competitor of a finite measure alpha on the plane has the same two marginals
and the same barycenter in every source row.  Differences of competitors form
the variation space: signed measures with vanishing marginals and vanishing
row first moments.  An optimal plan admits no cheaper competitor for any
finite sub-measure of its support.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .costs import CostSpec
from .curtain import Coupling
from .numeric import DEFAULT_TOL, DomainError, MotError
from .simplex import simplex


def _key_exact(entries) -> bool:
    return all(not isinstance(v, float) for (x, y), w in entries.items() for v in (x, y, w))


@dataclass(frozen=True)
class Variation:
    entries: dict  # (x, y) -> signed mass

    @property
    def positive(self) -> dict:
        return {k: w for k, w in self.entries.items() if w > 0}

    @property
    def negative(self) -> dict:
        return {k: -w for k, w in self.entries.items() if w < 0}

    def residuals(self) -> dict:
        """Largest absolute total / x-marginal / y-marginal / row-moment imbalance."""
        rows, cols, moments = {}, {}, {}
        for (x, y), w in self.entries.items():
            rows[x] = rows.get(x, 0) + w
            cols[y] = cols.get(y, 0) + w
            moments[x] = moments.get(x, 0) + w * y
        total = sum(self.entries.values(), 0)
        return {
            "total": abs(total),
            "rows": max((abs(v) for v in rows.values()), default=0),
            "cols": max((abs(v) for v in cols.values()), default=0),
            "moments": max((abs(v) for v in moments.values()), default=0),
        }

    def is_valid(self, tol=0) -> bool:
        return all(v <= tol for v in self.residuals().values())


@dataclass(frozen=True)
class SubMeasure:
    """Finite positive measure on the plane, (x, y) -> mass."""

    entries: dict

    def __post_init__(self):
        if any(w <= 0 for w in self.entries.values()):
            raise DomainError("sub-measure masses must be positive")

    @property
    def exact(self) -> bool:
        return _key_exact(self.entries)

    def cost(self, cost: CostSpec):
        return sum((w * cost(x, y) for (x, y), w in self.entries.items()), 0)

    def within(self, plan: Coupling, threshold=0) -> bool:
        supp = {(x, y) for x, y, w in plan.entries() if w > threshold}
        return set(self.entries) <= supp

    def __sub__(self, other: "SubMeasure") -> Variation:
        acc = dict(self.entries)
        for k, w in other.entries.items():
            acc[k] = acc.get(k, 0) - w
        return Variation({k: w for k, w in acc.items() if w != 0})


def is_competitor(alpha: SubMeasure, beta: SubMeasure, tol=0) -> bool:
    return (alpha - beta).is_valid(tol)


def best_competitor(alpha: SubMeasure, cost: CostSpec, exact: bool | None = None) -> tuple[SubMeasure, object]:
    """Cheapest competitor of alpha, found by LP on supp_x(alpha) x supp_y(alpha).

    Both marginals of a competitor equal those of alpha, so no mass can leave
    that grid.
    """
    if exact is None:
        exact = alpha.exact and cost.exact_capable
    conv = Fraction if exact else float
    xs = sorted({x for x, _ in alpha.entries})
    ys = sorted({y for _, y in alpha.entries})
    n, m = len(xs), len(ys)
    rows = {x: 0 for x in xs}
    cols = {y: 0 for y in ys}
    moms = {x: 0 for x in xs}
    for (x, y), w in alpha.entries.items():
        rows[x] += w
        cols[y] += w
        moms[x] += w * y
    zero, one = conv(0), conv(1)
    A, b = [], []
    for i, x in enumerate(xs):
        r = [zero] * (n * m)
        r[i * m : (i + 1) * m] = [one] * m
        A.append(r)
        b.append(conv(rows[x]))
        r = [zero] * (n * m)
        r[i * m : (i + 1) * m] = [conv(y) for y in ys]
        A.append(r)
        b.append(conv(moms[x]))
    for j, y in enumerate(ys):
        r = [zero] * (n * m)
        for i in range(n):
            r[i * m + j] = one
        A.append(r)
        b.append(conv(cols[y]))
    c = [conv(cost(x, y)) for x in xs for y in ys]
    start = [zero] * (n * m)
    for (x, y), w in alpha.entries.items():
        start[xs.index(x) * m + ys.index(y)] = conv(w)
    res = simplex(A, b, c, exact=exact, start=start)
    if res.status != "optimal":
        raise MotError(f"competitor LP {res.status}")
    thr = 0 if exact else DEFAULT_TOL.prune
    out = {(xs[k // m], ys[k % m]): v for k, v in enumerate(res.x) if v > thr}
    return SubMeasure(out), res.value


def three_point_variation(x, y_minus, y_plus, x2, y2) -> tuple[SubMeasure, SubMeasure]:
    """The rerouting that swaps which source point splits across y-, y+.

    alpha  = lam d(x, y+) + (1 - lam) d(x, y-) + d(x', y')
    alpha' = lam d(x', y+) + (1 - lam) d(x', y-) + d(x, y')
    with lam chosen so that lam y+ + (1 - lam) y- = y'.
    """
    if not y_minus < y2 < y_plus:
        raise DomainError("need y- < y' < y+")
    if x == x2:
        raise DomainError("the two source points must differ")
    lam = (y2 - y_minus) / (y_plus - y_minus)
    alpha = SubMeasure({(x, y_plus): lam, (x, y_minus): 1 - lam, (x2, y2): 1 + 0 * lam})
    alpha2 = SubMeasure({(x2, y_plus): lam, (x2, y_minus): 1 - lam, (x, y2): 1 + 0 * lam})
    return alpha, alpha2


@dataclass
class VariationalReport:
    trials: int
    checked: int
    violations: list = field(default_factory=list)  # (alpha, cost(alpha), competitor value)
    worst_margin: float = float("inf")  # min over trials of competitor value - cost(alpha)

    @property
    def passed(self) -> bool:
        return not self.violations


def sample_submeasure(plan: Coupling, rng: np.random.Generator, max_points: int, threshold=0) -> SubMeasure:
    """Random finite sub-measure of supp(plan) with at most ``max_points`` atoms.

    Rows are drawn without replacement and contribute their full conditional
    when it fits; otherwise a uniformly chosen subset of the row's atoms.
    """
    rows = [(x, [(y, w) for y, w in row if w > threshold]) for x, row in plan.rows]
    rows = [r for r in rows if r[1]]
    budget = int(rng.integers(2, max_points + 1)) if max_points >= 2 else 1
    order = rng.permutation(len(rows))
    out = {}
    for k in order:
        if budget <= 0:
            break
        x, atoms = rows[k]
        if len(atoms) > budget:
            pick = rng.choice(len(atoms), size=budget, replace=False)
            atoms = [atoms[i] for i in sorted(pick)]
        for y, w in atoms:
            out[(x, y)] = w
        budget -= len(atoms)
    return SubMeasure(out)


def verify_variational(
    plan: Coupling,
    cost: CostSpec,
    max_points: int = 4,
    trials: int = 200,
    seed: int = 7,
    tol: float | None = None,
    seeded: tuple = (),
) -> VariationalReport:
    """No sampled sub-measure of supp(plan) may have a strictly cheaper competitor.

    ``seeded`` sub-measures are checked first (used to replay known witnesses).
    """
    rng = np.random.default_rng(seed)
    exact = plan.exact and cost.exact_capable
    scale = max(1.0, max((abs(float(cost(x, y))) for x, y, _ in plan.entries()), default=0.0))
    if tol is None:
        tol = 0 if exact else DEFAULT_TOL.feas * scale
    report = VariationalReport(trials=trials, checked=0)
    threshold = 0 if plan.exact else DEFAULT_TOL.support
    samples = list(seeded)
    if sum(1 for _, _, w in plan.entries() if w > threshold) >= 2:
        samples += [sample_submeasure(plan, rng, max_points, threshold) for _ in range(trials)]
    for alpha in samples:
        own = alpha.cost(cost)
        _, best = best_competitor(alpha, cost, exact=exact)
        margin = best - own
        report.checked += 1
        report.worst_margin = min(report.worst_margin, float(margin))
        if margin < -tol:
            report.violations.append((alpha, own, best))
    return report


# Hobson-Neuberger comparison for c = |y - x|


def hn_difference(x, y_minus, y2, y_plus, x2):
    """A - B for the three-point rerouting under c(x, y) = |x - y|."""
    lam = (y2 - y_minus) / (y_plus - y_minus)
    a = lam * abs(x - y_plus) + (1 - lam) * abs(x - y_minus) + abs(x2 - y2)
    b = lam * abs(x2 - y_plus) + (1 - lam) * abs(x2 - y_minus) + abs(x - y2)
    return a - b


@dataclass(frozen=True)
class HNSign:
    sign: int
    case: int  # 1: y' < x, 2: y' > x, 3: y' == x
    thresholds: tuple  # zeros of A - B as a function of x'


def hn_sign_table(x, y_minus, y2, y_plus, x2) -> HNSign:
    """Sign of A - B from the closed-form zero set, for y- < y' < y+ and y- < x < y+.

    Case y' < x: zeros at x0 = y' + t (y- - y') and x, where x = y' + t (y+ - y');
    A - B is negative strictly between them and positive outside.  Case y' > x
    mirrors this with x1 in ]y', y+[.  Case y' = x: A - B >= 0, zero only at x.
    """
    if not y_minus < y2 < y_plus:
        raise DomainError("need y- < y' < y+")
    if not y_minus < x < y_plus:
        raise DomainError("the sign table needs x strictly between y- and y+")
    if y2 < x:
        t = (x - y2) / (y_plus - y2)
        lo, hi = y2 + t * (y_minus - y2), x
        case = 1
    elif y2 > x:
        t = (y2 - x) / (y2 - y_minus)
        lo, hi = x, y2 + t * (y_plus - y2)
        case = 2
    else:
        sign = 0 if x2 == x else 1
        return HNSign(sign, 3, (x,))
    if x2 == lo or x2 == hi:
        sign = 0
    elif lo < x2 < hi:
        sign = -1
    else:
        sign = 1
    return HNSign(sign, case, (lo, hi))


def bad_hn_configuration(plan: Coupling, threshold=None):
    """First (x, y-, y+, x', y') in supp(plan) with y- < y' < y+ and
    y' <= x' < x or x < x' <= y'; None if there is none."""
    if threshold is None:
        threshold = 0 if plan.exact else DEFAULT_TOL.support
    supp = [(x, [y for y, w in row if w > threshold]) for x, row in plan.rows]
    supp = [(x, ys) for x, ys in supp if ys]
    for x, ys in supp:
        lo, hi = min(ys), max(ys)
        if lo == hi:
            continue
        for x2, ys2 in supp:
            if x2 == x:
                continue
            for y2 in ys2:
                if lo < y2 < hi and (y2 <= x2 < x or x < x2 <= y2):
                    return (x, lo, hi, x2, y2)
    return None
