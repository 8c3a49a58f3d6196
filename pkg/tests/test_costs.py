import json
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mot.costs import (
    AbsDiff,
    ExpDiff,
    Indicator,
    InvalidCost,
    NegAbsDiff,
    ParseError,
    PolyDiff,
    PowerDiff,
    Separable,
    UnsupportedCost,
    parse_cost,
    strict_convex_derivative,
)
from mot.measures import uniform


class TestEvaluation:
    def test_examples(self):
        assert PowerDiff(4)(1, -2) == 81
        assert NegAbsDiff()(3, 3) == 0
        assert Indicator(0, 1)(-1, 3) == 2
        assert Indicator(0, 1)(1, 3) == 0

    def test_poly_horner(self):
        h = PolyDiff((F(1), F(-2), F(0), F(3)))
        assert h(1, 3) == 1 - 4 + 3 * 8

    def test_matrix_modes(self):
        m = PowerDiff(2).matrix([F(0), F(1)], [F(2)], exact=True)
        assert m == [[4], [1]]
        assert ExpDiff().matrix([0.0], [1.0], exact=True).dtype == float


class TestParse:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("pow:4", PowerDiff(4)),
            ("abs", AbsDiff()),
            ("neg-abs", NegAbsDiff()),
            ("exp", ExpDiff()),
            ("ind:0,1", Indicator(F(0), F(1))),
            ("poly:1,1/2,-3", PolyDiff((F(1), F(1, 2), F(-3)))),
        ],
    )
    def test_valid(self, text, expected):
        cost = parse_cost(text)
        assert cost == expected
        assert parse_cost(cost.format()) == cost

    @pytest.mark.parametrize("text, pos", [("pow:-1", 4), ("pow:x", 4), ("cube", 0), ("abs:2", 3), ("poly:1,a", 7), ("ind:1", 4)])
    def test_errors_carry_position(self, text, pos):
        with pytest.raises(ParseError) as info:
            parse_cost(text)
        assert info.value.position == pos

    @given(st.lists(st.fractions(-5, 5, max_denominator=7), min_size=1, max_size=5))
    def test_poly_roundtrip(self, coeffs):
        cost = PolyDiff(tuple(coeffs))
        assert parse_cost(cost.format()) == cost

    def test_separable_file(self, tmp_path):
        mu, nu = uniform([-1, 1]), uniform([-2, 0, 2])
        path = tmp_path / "sep.json"
        path.write_text(json.dumps({"phi": [2, 1], "psi": [5, 1, "5"]}))
        cost = parse_cost(f"sep:{path}", mu, nu)
        assert cost(-1, 0) == 2 and cost(1, 2) == 5
        path.write_text(json.dumps({"phi": [1, 2], "psi": [5, 1, 5]}))
        with pytest.raises(InvalidCost):
            parse_cost(f"sep:{path}", mu, nu)

    def test_separable_needs_convex_psi(self):
        with pytest.raises(InvalidCost):
            Separable(((0, 1),), ((0, 1), (1, 3), (2, 4)))


class TestStrictConvexity:
    def test_examples(self):
        assert strict_convex_derivative(ExpDiff())
        assert strict_convex_derivative(PowerDiff(3))
        assert not strict_convex_derivative(PowerDiff(4))
        assert not strict_convex_derivative(PowerDiff(2))

    def test_hull_restriction(self):
        # h''' = 24 t is nonnegative on [0, 5]
        assert strict_convex_derivative(PowerDiff(4), (0, 5))
        assert not strict_convex_derivative(PowerDiff(4), (-1, 5))

    def test_unsupported(self):
        with pytest.raises(UnsupportedCost):
            strict_convex_derivative(AbsDiff())


class TestIdentities:
    @given(st.fractions(-5, 5), st.fractions(-5, 5), st.fractions(-3, 3), st.fractions(-3, 3))
    def test_shift_identity_pointwise(self, x, y, p, q):
        base = PolyDiff((F(0), F(0), F(0), F(1)))
        shifted = PolyDiff((F(0), q, p, F(1)))
        assert shifted(x, y) - base(x, y) == p * (y - x) ** 2 + q * (y - x)

    @given(st.fractions(-5, 5), st.fractions(-5, 5))
    def test_pythagorean_pointwise(self, x, y):
        # (y - x)^2 = y^2 - x^2 - 2x (y - x)
        assert PowerDiff(2)(x, y) == y * y - x * x - 2 * x * (y - x)
