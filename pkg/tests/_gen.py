"""Random instances shared by the property and acceptance tests."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from mot.measures import DiscreteMeasure, make_measure


def random_measure(rng: np.random.Generator, n: int, lo: int = -6, hi: int = 6, den: int = 2, mass=Fraction(1)) -> DiscreteMeasure:
    """n atoms on the grid (1/den) Z within [lo, hi], integer-ratio masses summing to ``mass``."""
    grid = np.arange(lo * den, hi * den + 1)
    pos = rng.choice(grid, size=n, replace=False)
    raw = rng.integers(1, 10, size=n)
    total = int(raw.sum())
    return make_measure([(Fraction(int(p), den), mass * Fraction(int(r), total)) for p, r in zip(pos, raw)])


def random_spread(rng: np.random.Generator, mu: DiscreteMeasure, keep: float = 0.2, reach: int = 3, den: int = 2) -> DiscreteMeasure:
    """A measure above mu in convex order: each atom either stays or splits in two
    (rarely three) points on the same grid, barycenter preserved."""
    pairs = []
    for x, w in mu:
        u = rng.random()
        if u < keep:
            pairs.append((x, w))
            continue
        a = Fraction(int(rng.integers(1, reach * den + 1)), den)
        b = Fraction(int(rng.integers(1, reach * den + 1)), den)
        if u < 0.85:
            pairs += [(x - a, w * b / (a + b)), (x + b, w * a / (a + b))]
        else:
            # keep a share at x and spread the rest
            s = Fraction(int(rng.integers(1, 4)), 4)
            pairs += [(x, w * s), (x - a, w * (1 - s) * b / (a + b)), (x + b, w * (1 - s) * a / (a + b))]
    return make_measure(pairs)


def random_pair(rng: np.random.Generator, n_max: int = 6, m_max: int = 12, n_min: int = 1):
    """(mu, nu) with mu <=_c nu, |supp mu| <= n_max, |supp nu| <= m_max, rational data."""
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        mu = random_measure(rng, n)
        nu = random_spread(rng, mu)
        if len(nu) <= m_max:
            return mu, nu


def to_float(mu: DiscreteMeasure) -> DiscreteMeasure:
    return mu.to_float()


# hypothesis strategies


@st.composite
def measures(draw, min_atoms=1, max_atoms=5, lo=-8, hi=8, den=2, mass=None):
    n = draw(st.integers(min_atoms, max_atoms))
    pos = draw(st.lists(st.integers(lo * den, hi * den), min_size=n, max_size=n, unique=True))
    ws = draw(st.lists(st.integers(1, 9), min_size=n, max_size=n))
    total = sum(ws)
    scale = Fraction(1) if mass is None else Fraction(mass)
    return make_measure([(Fraction(p, den), scale * Fraction(w, total)) for p, w in zip(pos, ws)])


@st.composite
def convex_pairs(draw, max_atoms=4, max_target=10):
    mu = draw(measures(max_atoms=max_atoms))
    seed = draw(st.integers(0, 2**32 - 1))
    nu = random_spread(np.random.default_rng(seed), mu)
    if len(nu) > max_target:
        nu = random_spread(np.random.default_rng(seed), mu, keep=1.0)
    return mu, nu


@st.composite
def extended_pairs(draw, max_atoms=4):
    """(mu, nu) with mu <=_E nu: mu <=_c theta <= nu for a theta built by spreading."""
    mu, theta = draw(convex_pairs(max_atoms=max_atoms))
    extra = draw(measures(min_atoms=0, max_atoms=3, mass=Fraction(draw(st.integers(1, 4)), 4))) if draw(st.booleans()) else None
    nu = theta if extra is None or extra.is_zero() else theta + extra
    return mu, nu


# LP-sampled objects (exact vertices for random objectives)


def lp_sampled_targets(mu: DiscreteMeasure, nu: DiscreteMeasure, rng: np.random.Generator, count: int) -> list:
    """Measures eta with mu <=_c eta <= nu, as vertices of random-objective LPs.

    Variables are a martingale plan pi from mu into supp(nu) plus one slack per
    target atom, so eta = nu - slack.
    """
    from mot.simplex import simplex

    n, m = len(mu), len(nu)
    N = n * m + m
    A, b = [], []
    for i, (x, w) in enumerate(mu):
        row = [Fraction(0)] * N
        row[i * m : (i + 1) * m] = [Fraction(1)] * m
        A.append(row)
        b.append(w)
        row = [Fraction(0)] * N
        row[i * m : (i + 1) * m] = [y - x for y in nu.xs]
        A.append(row)
        b.append(Fraction(0))
    for j, w in enumerate(nu.ws):
        row = [Fraction(0)] * N
        for i in range(n):
            row[i * m + j] = Fraction(1)
        row[n * m + j] = Fraction(1)
        A.append(row)
        b.append(w)
    out = []
    for _ in range(count):
        c = [Fraction(int(v)) for v in rng.integers(-20, 21, size=n * m)] + [Fraction(0)] * m
        res = simplex(A, b, c, exact=True)
        assert res.status == "optimal"
        eta = make_measure([(y, sum(res.x[i * m + j] for i in range(n))) for j, y in enumerate(nu.xs)])
        out.append(eta)
    return out


def random_rival(mu: DiscreteMeasure, nu: DiscreteMeasure, rng: np.random.Generator):
    """A martingale coupling of (mu, nu): the exact optimum for a random integer cost."""
    from mot.lp import MartingaleLP, solve_lp

    n, m = len(mu), len(nu)
    cost = [[Fraction(int(v)) for v in rng.integers(-20, 21, size=m)] for _ in range(n)]
    return solve_lp(MartingaleLP(mu, nu, cost), backend="simplex").plan


def random_coarse_pair(rng: np.random.Generator, m_max: int = 12, m_min: int = 2):
    """(mu, nu) with mu = coarsen(nu, cuts): up to m_max atoms on both sides."""
    from mot.measures import coarsen

    m = int(rng.integers(m_min, m_max + 1))
    nu = random_measure(rng, m, lo=-5, hi=5)
    mids = [(a + b) / 2 for a, b in zip(nu.xs, nu.xs[1:])]
    keep = rng.random(len(mids)) < 0.6
    cuts = [c for c, k in zip(mids, keep) if k]
    return coarsen(nu, cuts), nu


def random_instance(rng: np.random.Generator, n_max: int = 12, m_max: int = 12):
    """Alternate between split-based and coarsening-based convex-order pairs."""
    if rng.random() < 0.5:
        return random_pair(rng, n_max=min(n_max, 6), m_max=m_max)
    while True:
        mu, nu = random_coarse_pair(rng, m_max=m_max)
        if len(mu) <= n_max:
            return mu, nu


def random_extended_pair(rng: np.random.Generator, n_max: int = 4, m_max: int = 8, extra_max: int = 3):
    """(mu, nu) with mu <=_E nu and mass(nu) >= mass(mu)."""
    mu, theta = random_pair(rng, n_max=n_max, m_max=m_max)
    k = int(rng.integers(0, extra_max + 1))
    if k == 0:
        return mu, theta
    extra = random_measure(rng, k, mass=Fraction(int(rng.integers(1, 5)), 4))
    return mu, theta + extra
