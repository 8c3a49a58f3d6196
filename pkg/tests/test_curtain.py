from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mot.curtain import (
    Coupling,
    InvalidRival,
    NotInConvexOrder,
    check_convex_minimality,
    curtain_prefix_shadow,
    is_left_monotone,
    left_curtain,
    prefix_target,
    right_curtain,
    row_maps,
)
from mot.measures import convex_order, dirac, uniform

from _gen import convex_pairs, random_pair, random_rival

U2 = uniform([-1, 1])
U3 = uniform([-2, 0, 2])


class TestLeftCurtain:
    def test_identity(self):
        plan = left_curtain(U3, U3)
        assert plan.entries() == [(y, y, w) for y, w in U3]

    def test_two_by_three(self):
        plan = left_curtain(U2, U3)
        assert plan.rows == (
            (-1, ((-2, F(1, 4)), (0, F(1, 4)))),
            (1, ((-2, F(1, 12)), (0, F(1, 12)), (2, F(1, 3)))),
        )

    def test_forced_split(self):
        assert left_curtain(dirac(0), U2).rows == ((0, ((-1, F(1, 2)), (1, F(1, 2)))),)

    def test_not_in_order(self):
        with pytest.raises(NotInConvexOrder):
            left_curtain(U3, U2)

    @given(convex_pairs())
    def test_martingale_and_left_monotone(self, pair):
        mu, nu = pair
        plan = left_curtain(mu, nu)
        assert plan.is_martingale_coupling(mu, nu, tol=0)
        assert is_left_monotone(plan) is None

    @given(convex_pairs())
    def test_prefixes_are_shadows(self, pair):
        mu, nu = pair
        plan = left_curtain(mu, nu)
        for t in mu.xs:
            assert prefix_target(plan, t).atoms() == curtain_prefix_shadow(mu, nu, t).atoms()

    @given(convex_pairs())
    def test_float_matches_exact(self, pair):
        mu, nu = pair
        assert left_curtain(mu.to_float(), nu.to_float()).equals(left_curtain(mu, nu), tol=1e-12)


class TestRightCurtain:
    def test_identity(self):
        assert right_curtain(U3, U3).entries() == left_curtain(U3, U3).entries()

    def test_symmetric_is_reflection(self):
        plan = right_curtain(U2, U3)
        assert plan.entries() == left_curtain(U2, U3).reflect().entries()
        assert plan.rows[0] == (-1, ((-2, F(1, 3)), (0, F(1, 12)), (2, F(1, 12))))

    @given(convex_pairs())
    def test_right_monotone(self, pair):
        mu, nu = pair
        plan = right_curtain(mu, nu)
        assert plan.is_martingale_coupling(mu, nu, tol=0)
        assert is_left_monotone(plan.reflect()) is None


class TestMonotonicity:
    def test_curtain_on_two_by_three(self):
        assert is_left_monotone(left_curtain(U2, U3)) is None

    def test_constructed_violation(self):
        plan = Coupling.from_entries([(0, -2, F(1, 4)), (0, 2, F(1, 4)), (1, 0, F(1, 2))])
        w = is_left_monotone(plan)
        assert w is not None and w.as_tuple() == (0, 1, -2, 2, 0)

    def test_single_row(self):
        assert is_left_monotone(Coupling.from_entries([(0, -1, F(1, 2)), (0, 1, F(1, 2))])) is None

    def test_threshold_hides_dust(self):
        plan = Coupling.from_entries([(0.0, -2.0, 0.25), (0.0, 2.0, 0.25), (1.0, 0.0, 1e-12)])
        assert is_left_monotone(plan) is None
        assert is_left_monotone(plan, mass_threshold=0) is not None


class TestPrefixTarget:
    def test_examples(self):
        plan = left_curtain(U2, U3)
        assert prefix_target(plan, -5).is_zero()
        assert prefix_target(plan, 1).atoms() == U3.atoms()
        assert prefix_target(plan, 0).atoms() == [(-2, F(1, 4)), (0, F(1, 4))]


class TestConvexMinimality:
    def test_two_by_three_family(self):
        # every martingale plan of this instance: a one-parameter segment
        for lam in (F(0), F(1, 2), F(1)):
            rival = Coupling.from_matrix(
                U2.xs,
                U3.xs,
                [[F(1, 4) + lam / 12, F(1, 4) - lam / 6, lam / 12], [F(1, 12) - lam / 12, F(1, 12) + lam / 6, F(1, 3) - lam / 12]],
            )
            assert rival.is_martingale_coupling(U2, U3, tol=0)
            assert check_convex_minimality(U2, U3, rival)

    def test_invalid_rival(self):
        with pytest.raises(InvalidRival):
            check_convex_minimality(U2, U3, Coupling.from_entries([(-1, -1, F(1, 2)), (1, 1, F(1, 2))]))

    @given(convex_pairs(), st.integers(0, 2**32 - 1))
    @settings(max_examples=40)
    def test_against_random_vertices(self, pair, seed):
        mu, nu = pair
        rng = np.random.default_rng(seed)
        for _ in range(3):
            assert check_convex_minimality(mu, nu, random_rival(mu, nu, rng))


class TestCoupling:
    def test_roundtrip_matrix(self):
        plan = left_curtain(U2, U3)
        assert Coupling.from_matrix(U2.xs, U3.xs, plan.to_matrix()).entries() == plan.entries()

    def test_row_maps(self):
        assert row_maps(left_curtain(U2, U3)) == [(-1, -2, 0), (1, -2, 2)]

    def test_marginals_recomputed(self):
        plan = Coupling.from_entries([(0, -1, F(1, 2)), (0, 1, F(1, 2))])
        assert plan.source.atoms() == [(0, 1)]
        assert plan.martingale_residuals() == [0]

    def test_random_instances_seeded(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            mu, nu = random_pair(rng)
            plan = left_curtain(mu, nu)
            assert convex_order(plan.source, plan.target)
            assert plan.marginal_residual(mu, nu) == 0
