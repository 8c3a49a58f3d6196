"""Finitely supported measures on the real line.

Measures are immutable.  Positions and masses are either all ``Fraction``
(exact mode) or all ``float``.  Most queries reduce to prefix sums of mass and
first moment, so potentials, hinge integrals and quantile integrals are exact
in rational mode.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from statistics import NormalDist
from typing import Iterable, Sequence

from .numeric import DEFAULT_TOL, DomainError, MotError, all_exact, parse_number, to_mode, tol_for


class InvalidMeasure(MotError, ValueError):
    pass


@dataclass(frozen=True)
class DiscreteMeasure:
    xs: tuple
    ws: tuple
    exact: bool = True
    _cw: tuple = field(init=False, repr=False, compare=False)  # cumulative mass
    _cm: tuple = field(init=False, repr=False, compare=False)  # cumulative first moment

    def __post_init__(self):
        if len(self.xs) != len(self.ws):
            raise InvalidMeasure("positions and weights differ in length")
        for a, b in zip(self.xs, self.xs[1:]):
            if not a < b:
                raise InvalidMeasure("positions must be strictly increasing")
        if any(w <= 0 for w in self.ws):
            raise InvalidMeasure("masses must be positive")
        zero = Fraction(0) if self.exact else 0.0
        object.__setattr__(self, "_cw", tuple(accumulate(self.ws, initial=zero)))
        object.__setattr__(
            self, "_cm", tuple(accumulate((x * w for x, w in zip(self.xs, self.ws)), initial=zero))
        )

    # basic quantities

    @property
    def mass(self):
        return self._cw[-1]

    @property
    def total_mass(self):
        return self._cw[-1]

    @property
    def first_moment(self):
        return self._cm[-1]

    @property
    def mean(self):
        if self.mass == 0:
            raise DomainError("mean of the zero measure")
        return self.first_moment / self.mass

    def second_moment(self):
        return sum((x * x * w for x, w in zip(self.xs, self.ws)), self._zero())

    def atoms(self) -> list[tuple]:
        return list(zip(self.xs, self.ws))

    def __len__(self):
        return len(self.xs)

    def __iter__(self):
        return iter(zip(self.xs, self.ws))

    def is_zero(self) -> bool:
        return not self.xs

    def weight_at(self, x):
        i = bisect_left(self.xs, x)
        if i < len(self.xs) and self.xs[i] == x:
            return self.ws[i]
        return self._zero()

    def _zero(self):
        return Fraction(0) if self.exact else 0.0

    # prefix sums: mass and moment strictly left of / up to t

    def mass_le(self, t):
        return self._cw[bisect_right(self.xs, t)]

    def moment_le(self, t):
        return self._cm[bisect_right(self.xs, t)]

    def hinge_right(self, k):
        """Integral of (x - k)_+."""
        i = bisect_right(self.xs, k)
        return (self._cm[-1] - self._cm[i]) - k * (self._cw[-1] - self._cw[i])

    def hinge_left(self, k):
        """Integral of (k - x)_+."""
        i = bisect_right(self.xs, k)
        return k * self._cw[i] - self._cm[i]

    # algebra

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        exact = self.exact and other.exact
        return make_measure(list(self) + list(other), exact=exact)

    def subtract(self, other: "DiscreteMeasure", tol: float | None = None) -> "DiscreteMeasure":
        """Atomwise difference; float-mode dust below the prune threshold is dropped."""
        exact = self.exact and other.exact
        scale = max(1.0, float(self.mass))
        neg_tol = tol_for(exact, tol, DEFAULT_TOL.feas) * scale
        prune = 0.0 if exact else DEFAULT_TOL.prune * scale
        acc = dict((to_mode(x, exact), to_mode(w, exact)) for x, w in self)
        for x, w in other:
            x = to_mode(x, exact)
            acc[x] = acc.get(x, 0) - to_mode(w, exact)
        pairs = []
        for x, w in acc.items():
            if w < -neg_tol:
                raise InvalidMeasure(f"difference is negative at {x}: {w}")
            if w > prune:
                pairs.append((x, w))
        return make_measure(pairs, exact=exact)

    def __sub__(self, other):
        return self.subtract(other)

    def scale(self, c) -> "DiscreteMeasure":
        exact = self.exact and not isinstance(c, float)
        return make_measure([(x, w * c) for x, w in self], exact=exact)

    def restrict(self, lo=None, hi=None) -> "DiscreteMeasure":
        """Restriction to ]lo, hi] (``None`` means unbounded)."""
        pairs = [(x, w) for x, w in self if (lo is None or x > lo) and (hi is None or x <= hi)]
        return make_measure(pairs, exact=self.exact)

    def reflect(self) -> "DiscreteMeasure":
        return make_measure([(-x, w) for x, w in self], exact=self.exact)

    def to_float(self) -> "DiscreteMeasure":
        return make_measure([(float(x), float(w)) for x, w in self], exact=False)

    def equals(self, other: "DiscreteMeasure", tol: float = 0.0) -> bool:
        """Atomwise equality; with ``tol`` > 0 masses are compared up to ``tol``."""
        if tol == 0:
            return list(self) == list(other)
        diff: dict = {}
        for x, w in self:
            diff[float(x)] = diff.get(float(x), 0.0) + float(w)
        for x, w in other:
            diff[float(x)] = diff.get(float(x), 0.0) - float(w)
        return all(abs(v) <= tol for v in diff.values())


def make_measure(pairs: Iterable[tuple], exact: bool | None = None) -> DiscreteMeasure:
    """Build a measure from (position, weight) pairs.

    Duplicates are merged, zero weights dropped, atoms sorted.  Without an
    explicit ``exact`` flag the measure is exact iff no value is a float.
    """
    pairs = list(pairs)
    if exact is None:
        exact = all_exact(v for p in pairs for v in p)
    acc: dict = {}
    for x, w in pairs:
        x = parse_number(x, exact) if exact or not isinstance(x, float) else x
        w = parse_number(w, exact) if exact or not isinstance(w, float) else w
        if w < 0:
            raise InvalidMeasure(f"negative weight {w} at {x}")
        acc[x] = acc.get(x, 0) + w
    items = sorted((x, w) for x, w in acc.items() if w != 0)
    return DiscreteMeasure(tuple(x for x, _ in items), tuple(w for _, w in items), exact)


def zero_measure(exact: bool = True) -> DiscreteMeasure:
    return DiscreteMeasure((), (), exact)


def dirac(x, mass=1) -> DiscreteMeasure:
    return make_measure([(x, mass)])


def uniform(points: Sequence, mass=1) -> DiscreteMeasure:
    exact = all_exact(list(points) + [mass])
    w = Fraction(mass) / len(points) if exact else float(mass) / len(points)
    return make_measure([(p, w) for p in points], exact=exact)


# distribution and quantile functions


def cdf(mu: DiscreteMeasure, t):
    return mu.mass_le(t)


def quantile(mu: DiscreteMeasure, s):
    """Generalized inverse G(s) = inf{t : s <= F(t)} for 0 < s <= mass."""
    if not 0 < s <= mu.mass:
        raise DomainError(f"quantile level {s} outside (0, {mu.mass}]")
    i = bisect_left(mu._cw, s, lo=1)
    return mu.xs[min(i, len(mu.xs)) - 1]


def quantile_integral(mu: DiscreteMeasure, t):
    """Integral of the quantile function G over [0, t], for 0 <= t <= mass."""
    cw = mu._cw
    i = bisect_right(cw, t) - 1  # atoms 0..i-1 fully below t
    i = min(max(i, 0), len(mu.xs))
    partial = mu.xs[i] * (t - cw[i]) if i < len(mu.xs) else 0
    return mu._cm[i] + partial


def quantile_slice(mu: DiscreteMeasure, s, e) -> DiscreteMeasure:
    """Image of Lebesgue measure on [s, e] under the quantile function."""
    pairs = []
    cw = mu._cw
    lo = max(bisect_right(cw, s) - 1, 0)
    for j in range(lo, len(mu.xs)):
        a, b = cw[j], cw[j + 1]
        if a >= e:
            break
        w = min(b, e) - max(a, s)
        if w > 0:
            pairs.append((mu.xs[j], w))
    return make_measure(pairs, exact=mu.exact)


# potential functions


@dataclass(frozen=True)
class PotentialFunction:
    """u(x) = integral |y - x| dmu(y), kept as breakpoints and exact values."""

    measure: DiscreteMeasure
    breakpoints: tuple
    values: tuple
    mass: object
    mean: object

    def __call__(self, x):
        mu = self.measure
        i = bisect_right(mu.xs, x)
        wl, ml = mu._cw[i], mu._cm[i]
        return (x * wl - ml) + (mu._cm[-1] - ml) - x * (mu._cw[-1] - wl)

    def slopes(self) -> tuple:
        """Slopes on the len(breakpoints)+1 linear pieces, left to right."""
        cw = self.measure._cw
        return tuple(2 * c - self.mass for c in cw)


def potential(mu: DiscreteMeasure) -> PotentialFunction:
    zero = mu._zero()
    pf = PotentialFunction(mu, mu.xs, (), mu.mass, mu.mean if mu.mass else zero)
    object.__setattr__(pf, "values", tuple(pf(x) for x in mu.xs))
    return pf


def _order_scale(mu, nu) -> float:
    xs = mu.xs + nu.xs
    reach = max((abs(float(x)) for x in xs), default=0.0)
    return max(1.0, float(max(mu.mass, nu.mass)) * max(1.0, reach))


def convex_order(mu: DiscreteMeasure, nu: DiscreteMeasure, tol: float | None = None) -> bool:
    """mu <=_c nu, tested on potentials at every atom of either measure."""
    exact = mu.exact and nu.exact
    eps = tol_for(exact, tol, DEFAULT_TOL.order) * _order_scale(mu, nu)
    if abs(mu.mass - nu.mass) > eps or abs(mu.first_moment - nu.first_moment) > eps:
        return False
    um, un = potential(mu), potential(nu)
    return all(um(x) - un(x) <= eps for x in mu.xs + nu.xs)


def extended_order(mu: DiscreteMeasure, nu: DiscreteMeasure, tol: float | None = None) -> bool:
    """mu <=_E nu via the mass inequality and hinge functions at all atoms.

    Every non-negative convex function is, on the atoms involved, a constant
    plus a non-negative combination of hinges (x - k)_+ and (k - x)_+ with
    knots at those atoms, so these finitely many tests are exhaustive.
    """
    exact = mu.exact and nu.exact
    eps = tol_for(exact, tol, DEFAULT_TOL.order) * _order_scale(mu, nu)
    if mu.mass - nu.mass > eps:
        return False
    for k in mu.xs + nu.xs:
        if mu.hinge_right(k) - nu.hinge_right(k) > eps:
            return False
        if mu.hinge_left(k) - nu.hinge_left(k) > eps:
            return False
    return True


def extended_order_lp(mu: DiscreteMeasure, nu: DiscreteMeasure, tol: float = 1e-9) -> bool:
    """Cross-check of :func:`extended_order` through the characterization
    "there is theta <= nu with mu <=_c theta", solved as an LP feasibility problem."""
    import numpy as np
    from scipy.optimize import linprog

    if mu.is_zero():
        return True
    ys = np.array([float(y) for y in nu.xs])
    cap = np.array([float(w) for w in nu.ws])
    knots = sorted(set(float(x) for x in mu.xs + nu.xs))
    a_eq = [np.ones_like(ys), ys]
    b_eq = [float(mu.mass), float(mu.first_moment)]
    a_ub, b_ub = [], []
    for k in knots:
        # mean and mass fixed, so (y - k)_+ dominance is the full convex order test
        a_ub.append(-np.maximum(ys - k, 0.0))
        b_ub.append(-float(mu.hinge_right(k)))
    res = linprog(
        np.zeros_like(ys),
        A_ub=np.array(a_ub),
        b_ub=np.array(b_ub),
        A_eq=np.array(a_eq),
        b_eq=np.array(b_eq),
        bounds=list(zip([0.0] * len(ys), cap)),
        method="highs",
        options={"primal_feasibility_tolerance": tol},
    )
    return res.status == 0


def wasserstein1(mu: DiscreteMeasure, nu: DiscreteMeasure):
    """Area between the two distribution functions; ``math.inf`` when masses differ."""
    if mu.mass != nu.mass and not (
        not (mu.exact and nu.exact) and math.isclose(float(mu.mass), float(nu.mass), rel_tol=1e-12)
    ):
        return math.inf
    pts = sorted(set(mu.xs) | set(nu.xs))
    total = Fraction(0) if mu.exact and nu.exact else 0.0
    for a, b in zip(pts, pts[1:]):
        total += abs(mu.mass_le(a) - nu.mass_le(a)) * (b - a)
    return total


def coarsen(gamma: DiscreteMeasure, cuts: Sequence) -> DiscreteMeasure:
    """Collapse each cell ]c_i, c_{i+1}] of the cut partition to its barycenter."""
    cuts = list(cuts)
    if any(not a < b for a, b in zip(cuts, cuts[1:])):
        raise DomainError("cuts must be strictly increasing")
    bounds = [None] + cuts + [None]
    pairs = []
    for lo, hi in zip(bounds, bounds[1:]):
        cell = gamma.restrict(lo, hi)
        if not cell.is_zero():
            pairs.append((cell.first_moment / cell.mass, cell.mass))
    return make_measure(pairs, exact=gamma.exact)


_STD = NormalDist()


def gaussian_quantize(mean: float, sd: float, n: int) -> DiscreteMeasure:
    """n equal-mass atoms at the conditional means of the quantile cells."""
    if sd <= 0:
        raise DomainError("standard deviation must be positive")
    if n < 1:
        raise DomainError("need at least one atom")
    z = [-math.inf] + [_STD.inv_cdf(i / n) for i in range(1, n)] + [math.inf]
    dens = [0.0 if math.isinf(t) else _STD.pdf(t) for t in z]
    pairs = [(mean + sd * n * (dens[i] - dens[i + 1]), 1.0 / n) for i in range(n)]
    return make_measure(pairs, exact=False)


def gaussian_potential(mean: float, sd: float, x: float) -> float:
    """E|Y - x| for Y ~ N(mean, sd^2)."""
    d = (x - mean) / sd
    return sd * (2 * _STD.pdf(d) + d * (2 * _STD.cdf(d) - 1))


def gaussian_lattice(mean: float, sd: float, h: float, k_lo: int, k_hi: int) -> DiscreteMeasure:
    """Gaussian spread onto the nodes k * h, k_lo <= k <= k_hi (hat-function projection).

    Between nodes the result's potential has the slopes of the Gaussian
    potential's chords, so two Gaussians in convex order stay in convex order
    on a shared lattice.  Node values agree up to the tail mass beyond the
    end nodes.  Mass is exactly 1; tail mass outside the node range is folded
    into the end nodes.
    """
    if sd <= 0:
        raise DomainError("standard deviation must be positive")
    if k_hi <= k_lo:
        raise DomainError("need at least two lattice nodes")
    xs = [k * h for k in range(k_lo, k_hi + 1)]
    u = [gaussian_potential(mean, sd, x) for x in xs]
    slopes = [-1.0] + [(u[i + 1] - u[i]) / h for i in range(len(xs) - 1)] + [1.0]
    ws = [(slopes[i + 1] - slopes[i]) / 2 for i in range(len(xs))]
    return make_measure([(x, w) for x, w in zip(xs, ws) if w > 0], exact=False)


def min_measure(mu: DiscreteMeasure, nu: DiscreteMeasure) -> DiscreteMeasure:
    exact = mu.exact and nu.exact
    pairs = [(x, min(w, nu.weight_at(x))) for x, w in mu if nu.weight_at(x) > 0]
    return make_measure(pairs, exact=exact)
