from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from mot.costs import ExpDiff, PowerDiff
from mot.curtain import Coupling, left_curtain, right_curtain, is_left_monotone
from mot.lp import solve_martingale
from mot.numeric import DomainError
from mot.variation import (
    SubMeasure,
    Variation,
    bad_hn_configuration,
    best_competitor,
    hn_difference,
    hn_sign_table,
    is_competitor,
    sample_submeasure,
    three_point_variation,
    verify_variational,
)

from _gen import convex_pairs, random_pair


def scipy_competitor_value(alpha, cost):
    xs = sorted({x for x, _ in alpha.entries})
    ys = sorted({y for _, y in alpha.entries})
    n, m = len(xs), len(ys)
    A, b = [], []
    for i, x in enumerate(xs):
        r = np.zeros(n * m)
        r[i * m : (i + 1) * m] = 1
        A.append(r)
        b.append(float(sum(w for (a, _), w in alpha.entries.items() if a == x)))
        r = np.zeros(n * m)
        r[i * m : (i + 1) * m] = [float(y) for y in ys]
        A.append(r)
        b.append(float(sum(w * y for (a, y), w in alpha.entries.items() if a == x)))
    for j, y in enumerate(ys):
        r = np.zeros(n * m)
        r[j::m] = 1
        A.append(r)
        b.append(float(sum(w for (_, c), w in alpha.entries.items() if c == y)))
    c = [float(cost(x, y)) for x in xs for y in ys]
    return linprog(c, A_eq=np.array(A), b_eq=np.array(b), method="highs").fun


@st.composite
def submeasures(draw, max_rows=3, max_cols=4):
    xs = draw(st.lists(st.integers(-6, 6), min_size=1, max_size=max_rows, unique=True))
    ys = draw(st.lists(st.integers(-8, 8), min_size=1, max_size=max_cols, unique=True))
    cells = draw(st.lists(st.tuples(st.sampled_from(xs), st.sampled_from(ys), st.integers(1, 9)), min_size=1, max_size=8))
    entries = {}
    for x, y, w in cells:
        entries[(F(x), F(y))] = entries.get((F(x), F(y)), 0) + F(w, 10)
    return SubMeasure(entries)


class TestThreePoint:
    def test_example(self):
        alpha, alpha2 = three_point_variation(0, -1, 1, 1, 0)
        assert alpha2.entries == {(1, 1): F(1, 2), (1, -1): F(1, 2), (0, 0): 1}
        assert alpha.entries == {(0, 1): F(1, 2), (0, -1): F(1, 2), (1, 0): 1}

    @given(st.fractions(-5, 5), st.fractions(-5, 5), st.fractions(-5, 5), st.fractions(0, 1), st.fractions(-5, 5))
    def test_competitor_exact(self, x, x2, ym, t, width):
        assume(x != x2 and width != 0 and 0 < t < 1)
        yp = ym + abs(width)
        y2 = ym + t * abs(width)
        alpha, alpha2 = three_point_variation(x, ym, yp, x2, y2)
        var = alpha - alpha2
        assert isinstance(var, Variation)
        assert all(v == 0 for v in var.residuals().values())
        assert is_competitor(alpha, alpha2)

    def test_domain(self):
        with pytest.raises(DomainError):
            three_point_variation(0, -1, 1, 1, 2)
        with pytest.raises(DomainError):
            three_point_variation(0, -1, 1, 0, 0)

    def test_exp_rerouting_cheaper(self):
        # x < x' with y- < y' < y+: the swapped configuration wins for convex h'
        alpha, alpha2 = three_point_variation(0.0, -1.0, 2.0, 1.0, 0.5)
        assert alpha2.cost(ExpDiff()) < alpha.cost(ExpDiff())
        best, value = best_competitor(alpha, ExpDiff())
        assert value <= alpha2.cost(ExpDiff()) + 1e-12


class TestBestCompetitor:
    def test_single_row_is_pinned(self):
        alpha = SubMeasure({(0, -2): F(1, 4), (0, 1): F(1, 2), (0, 3): F(1, 4)})
        best, value = best_competitor(alpha, PowerDiff(4))
        assert best.entries == alpha.entries and value == alpha.cost(PowerDiff(4))

    @given(submeasures())
    @settings(max_examples=80)
    def test_matches_scipy_and_is_competitor(self, alpha):
        best, value = best_competitor(alpha, PowerDiff(3))
        assert is_competitor(alpha, best)
        assert value == best.cost(PowerDiff(3))
        assert value <= alpha.cost(PowerDiff(3))
        assert float(value) == pytest.approx(scipy_competitor_value(alpha, PowerDiff(3)), abs=1e-7)

    @given(submeasures())
    @settings(max_examples=60)
    def test_idempotent(self, alpha):
        best, value = best_competitor(alpha, PowerDiff(3))
        again, value2 = best_competitor(best, PowerDiff(3))
        assert value2 == value

    @given(submeasures(), st.integers(-20, 20))
    @settings(max_examples=60)
    def test_variation_membership(self, alpha, k):
        # a competitor from another cost gives a variation sigma with alpha - sigma >= 0
        beta, _ = best_competitor(alpha, PowerDiff(3) if k % 2 else ExpDiff(), exact=True if k % 2 else None)
        if not beta.exact:
            return
        sigma = alpha - beta
        assert sigma.is_valid()
        rebuilt = {key: alpha.entries.get(key, 0) - sigma.entries.get(key, 0) for key in set(alpha.entries) | set(sigma.entries)}
        assert is_competitor(alpha, SubMeasure({key: w for key, w in rebuilt.items() if w != 0}))
        # breaking a row moment leaves the variation space
        (key, w), *_ = alpha.entries.items()
        moved = dict(alpha.entries)
        del moved[key]
        moved[(key[0], key[1] + 1)] = moved.get((key[0], key[1] + 1), 0) + w
        assert not is_competitor(alpha, SubMeasure(moved))


class TestVerifyVariational:
    def test_exp_optimum_passes(self):
        mu, nu = random_pair(np.random.default_rng(4))
        sol = solve_martingale(mu, nu, ExpDiff())
        rep = verify_variational(sol.plan, ExpDiff(), trials=60)
        assert rep.passed and rep.checked == 60

    def test_seeded_witness_fails(self):
        rng = np.random.default_rng(9)
        while True:
            mu, nu = random_pair(rng, n_min=2)
            plan = right_curtain(mu, nu)
            w = is_left_monotone(plan)
            if w is not None:
                break
        alpha, _ = three_point_variation(w.x, w.y_minus, w.y_plus, w.x2, w.y2)
        rep = verify_variational(plan, ExpDiff(), trials=0, seeded=(alpha,))
        assert not rep.passed

    def test_singleton_vacuous(self):
        plan = Coupling.from_entries([(0, 0, 1)])
        rep = verify_variational(plan, ExpDiff(), trials=50)
        assert rep.passed and rep.checked == 0

    @given(convex_pairs(), st.integers(0, 2**32 - 1))
    @settings(max_examples=30)
    def test_sampler_stays_in_support(self, pair, seed):
        plan = left_curtain(*pair)
        alpha = sample_submeasure(plan, np.random.default_rng(seed), 4)
        assert alpha.within(plan) and 1 <= len(alpha.entries) <= 4


class TestHNSign:
    def test_case1_table(self):
        x, ym, y2, yp = 2, 0, 1, 3
        assert hn_sign_table(x, ym, y2, yp, -5).sign == 1
        assert hn_sign_table(x, ym, y2, yp, 1).sign == -1
        assert hn_sign_table(x, ym, y2, yp, F(1, 2)).sign == 0
        assert hn_sign_table(x, ym, y2, yp, 2).sign == 0
        assert hn_sign_table(x, ym, y2, yp, 9).sign == 1
        assert hn_sign_table(x, ym, y2, yp, 0).thresholds == (F(1, 2), 2)

    def test_case3(self):
        assert hn_sign_table(1, 0, 1, 3, 1).sign == 0
        for x2 in (-4, 0, F(1, 2), 2, 7):
            assert hn_sign_table(1, 0, 1, 3, x2).sign == 1
            assert hn_difference(1, 0, 1, 3, x2) > 0

    def test_domain(self):
        with pytest.raises(DomainError):
            hn_sign_table(2, 0, 4, 3, 1)
        with pytest.raises(DomainError):
            hn_sign_table(5, 0, 1, 3, 1)

    @given(
        st.fractions(-4, 4, max_denominator=6),
        st.fractions(0, 1, max_denominator=8),
        st.fractions(0, 1, max_denominator=8),
        st.fractions(1, 6, max_denominator=4),
    )
    @settings(max_examples=300)
    def test_matches_direct_evaluation(self, ym, u, v, width):
        assume(0 < u < 1 and 0 < v < 1)
        yp = ym + width
        y2, x = ym + u * width, ym + v * width
        for k in range(-40, 41):
            x2 = ym - 2 + F(k, 40) * (width + 4)
            sign = hn_sign_table(x, ym, y2, yp, x2).sign
            d = hn_difference(x, ym, y2, yp, x2)
            assert sign == (d > 0) - (d < 0)
        for t in hn_sign_table(x, ym, y2, yp, x).thresholds:
            assert hn_difference(x, ym, y2, yp, t) == 0


class TestBadConfiguration:
    def test_detects_pattern(self):
        # x = 2 splits over {0, 3}; x' = 1 sits at y' = 1: y' <= x' < x
        plan = Coupling.from_entries([(2, 0, F(1, 3)), (2, 3, F(2, 3)), (1, 1, 1)])
        assert bad_hn_configuration(plan) == (2, 0, 3, 1, 1)

    def test_clean_plan(self):
        plan = Coupling.from_entries([(0, -1, F(1, 2)), (0, 1, F(1, 2)), (5, 5, 1)])
        assert bad_hn_configuration(plan) is None
