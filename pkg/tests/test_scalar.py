"""
Tests de l'arithmétique exacte : Q(ζ_{2d}) et scalaires Q(ζ)[a][t]/(t^N).
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.errors import CyclotomicZeroDivisionError, SessionMismatchError
from app.core.scalar import Cyclotomic, Scalar, cyclotomic_field, format_rational, root_power
from app.core.session import get_session

# ═══════════════════════════════════════════════════════════════════════════════
# Corps cyclotomique
# ═══════════════════════════════════════════════════════════════════════════════


class TestCyclotomicField:
    """Tests des tables de réduction."""

    @pytest.mark.parametrize(("m", "degree"), [(4, 2), (6, 2), (8, 4), (10, 4), (12, 4)])
    def test_degree_is_totient(self, m: int, degree: int):
        """Le degré du corps doit valoir φ(m)."""
        assert cyclotomic_field(m).degree == degree

    def test_rejects_nonpositive_order(self):
        """Un ordre nul doit être refusé."""
        with pytest.raises(ValueError):
            cyclotomic_field(0)


class TestCyclotomic:
    """Tests des éléments de Q(ζ_m)."""

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_roots_of_unity(self, d: int):
        """ζ^d = 1 et z^d = -1 pour z = ζ_{2d}."""
        m = 2 * d
        assert root_power(m, d) == Cyclotomic.one(m)
        assert root_power(m, d, half=True) == -Cyclotomic.one(m)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_inverse(self, d: int):
        """x * x^-1 doit valoir 1."""
        m = 2 * d
        x = Cyclotomic.one(m) + root_power(m, 1, half=True)
        assert x * x.inverse() == Cyclotomic.one(m)

    def test_inverse_of_zero_raises(self):
        """L'inverse de zéro doit lever CyclotomicZeroDivisionError."""
        with pytest.raises(CyclotomicZeroDivisionError):
            Cyclotomic.zero(6).inverse()

    def test_division_by_zero_raises(self):
        with pytest.raises(CyclotomicZeroDivisionError):
            Cyclotomic.one(6) / 0

    def test_order_mismatch_raises(self):
        """Deux corps différents ne doivent pas se mélanger."""
        with pytest.raises(SessionMismatchError):
            Cyclotomic.one(6) + Cyclotomic.one(8)

    def test_times_root(self):
        """times_root(k) multiplie par z^k."""
        one = Cyclotomic.one(8)
        assert one.times_root(3) == root_power(8, 3, half=True)
        assert one.times_root(8) == one

    def test_render(self):
        assert Cyclotomic.from_rational(6, Fraction(-3, 2)).render() == "-3/2"
        assert (Cyclotomic.one(6) - root_power(6, 1, half=True) * 2).render() == "1 - 2*z"

    def test_to_fraction(self):
        assert Cyclotomic.from_rational(10, Fraction(5, 7)).to_fraction() == Fraction(5, 7)


# ═══════════════════════════════════════════════════════════════════════════════
# Scalaires
# ═══════════════════════════════════════════════════════════════════════════════


class TestScalar:
    """Tests de Q(ζ)[a][t]/(t^N)."""

    def test_t_vanishes_at_order_one(self):
        """En session t_order = 1, t = 0."""
        assert Scalar.t(get_session(3, 1)).is_zero()

    def test_t_squared_truncated(self):
        """En session t_order = 2, t ≠ 0 mais t^2 = 0."""
        session = get_session(3, 2)
        t = Scalar.t(session)
        assert not t.is_zero()
        assert (t * t).is_zero()

    def test_specialize_a(self, session3):
        """3a^2 + 1 spécialisé en a = 2 vaut 13."""
        x = Scalar.a(session3) ** 2 * 3 + 1
        assert x.specialize_a(2) == 13

    def test_a_coefficient(self, session3):
        x = Scalar.a(session3) ** 2 * 3 + Scalar.a(session3) * Fraction(1, 2)
        assert x.a_coefficient(2) == 3
        assert x.a_coefficient(1) == Fraction(1, 2)
        assert x.a_coefficient(0).is_zero()

    def test_t_coefficient_moves_session(self):
        """Le coefficient de t^1 se transporte dans la session t = 0."""
        lifted = get_session(3, 2)
        x = Scalar.t(lifted) * Scalar.a(lifted) + 5
        base = get_session(3, 1)
        assert x.t_coefficient(1, base) == Scalar.a(base)
        assert x.t_coefficient(0, base) == 5

    def test_session_mismatch_raises(self):
        """Deux d différents ne doivent pas se mélanger."""
        with pytest.raises(SessionMismatchError):
            Scalar.one(get_session(3, 1)) + Scalar.one(get_session(4, 1))

    def test_components(self, session3):
        x = Scalar.root(session3, 1, half=True) * 2 + Scalar.a(session3)
        assert x.components() == {(0, 0, 1): Fraction(2), (1, 0, 0): Fraction(1)}

    def test_render(self, session3):
        assert Scalar.zero(session3).render() == "0"
        assert Scalar.a(session3).render() == "a"

    @given(
        st.lists(st.integers(-5, 5), min_size=3, max_size=3),
        st.lists(st.integers(-5, 5), min_size=3, max_size=3),
        st.lists(st.integers(-5, 5), min_size=3, max_size=3),
    )
    def test_distributivity(self, xs: list[int], ys: list[int], ws: list[int]):
        """(x + y) w = xw + yw pour des combinaisons de a et de racines."""
        session = get_session(4, 1)

        def build(cs: list[int]) -> Scalar:
            return (
                Scalar.from_rational(session, cs[0])
                + Scalar.root(session, 1, half=True) * cs[1]
                + Scalar.a(session) * cs[2]
            )

        x, y, w = build(xs), build(ys), build(ws)
        assert (x + y) * w == x * w + y * w


class TestFormatRational:
    """Tests du rendu p/q."""

    def test_integer(self):
        assert format_rational(Fraction(4, 2)) == "2"

    def test_fraction(self):
        assert format_rational(Fraction(-1, 3)) == "-1/3"
