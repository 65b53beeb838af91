"""
Tests des polynômes creux multivariés.
"""

from fractions import Fraction

import pytest

from app.core.errors import SessionMismatchError
from app.core.multipoly import MultiPoly, coordinates, family_rank, monomials_of_degree

NAMES = ("q", "Q", "e")


@pytest.fixture
def gens() -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    return tuple(MultiPoly.generator(NAMES, name) for name in NAMES)  # type: ignore[return-value]


class TestArithmetic:
    """Tests des opérations de base."""

    def test_square(self, gens):
        q, Q, _ = gens
        assert (q + Q) ** 2 == q**2 + 2 * q * Q + Q**2

    def test_cancellation(self, gens):
        q, _, e = gens
        assert (q * e - e * q).is_zero()

    def test_constant_equality(self):
        assert MultiPoly.constant(NAMES, 3) == 3
        assert MultiPoly.constant(NAMES, 0).is_zero()

    def test_variable_mismatch(self):
        """Deux jeux de variables ne doivent pas se mélanger."""
        with pytest.raises(SessionMismatchError):
            MultiPoly.generator(NAMES, 0) + MultiPoly.generator(("u",), 0)

    def test_negative_power(self, gens):
        with pytest.raises(ValueError):
            gens[0] ** -1


class TestStructure:
    """Tests des degrés, dérivées et substitutions."""

    def test_degree(self, gens):
        q, Q, e = gens
        p = e**2 - 4 * q * Q + 1
        assert p.degree() == 2
        assert not p.is_homogeneous()
        assert p.homogeneous_component(2) == e**2 - 4 * q * Q
        assert MultiPoly(NAMES).degree() == -1

    def test_derivative(self, gens):
        q, Q, e = gens
        p = e**3 - q * Q
        assert p.derivative(2) == 3 * e**2
        assert p.derivative(0) == -Q

    def test_monomial_gcd(self, gens):
        q, Q, e = gens
        p = q**2 * e + q * Q * e
        assert p.monomial_gcd() == (1, 0, 1)
        assert p.divide_monomial((1, 0, 1)) == q + Q

    def test_substitute_keeps_variables(self, gens):
        q, Q, e = gens
        p = e**2 - q * Q
        restricted = p.substitute({1: 2})
        assert restricted.variables == NAMES
        assert restricted == e**2 - 2 * q

    def test_scale_variables(self, gens):
        q, _, e = gens
        assert (q * e).scale_variables([2, 1, Fraction(1, 2)]) == q * e

    def test_evaluate_at(self, gens):
        q, Q, e = gens
        assert (e**2 - 4 * q * Q).evaluate_at([1, 1, 3]) == 5

    def test_evaluate_in_ring(self, gens):
        """Évaluation générique : composition de polynômes."""
        q, Q, e = gens
        p = q * Q
        assert p.evaluate([e, e, q], MultiPoly.constant(NAMES, 1)) == e**2

    def test_evaluate_arity(self, gens):
        with pytest.raises(ValueError):
            gens[0].evaluate_at([1])


class TestRendering:
    """Tests du rendu canonique."""

    def test_render(self, gens):
        q, Q, _ = gens
        assert (q**2 - Fraction(3, 2) * Q).render() == "q^2 - 3/2*Q"

    def test_render_truncated(self, gens):
        q, Q, e = gens
        assert (q + Q + e).render(max_terms=1) == "q + ... (2 more terms)"

    def test_to_dict(self, gens):
        q, _, e = gens
        assert (2 * q * e - 1).to_dict() == {"q^1*e^1": "2", "1": "-1"}


class TestFamilies:
    """Tests des coordonnées dans une famille."""

    def test_monomials_of_degree(self):
        monomials = monomials_of_degree(3, 2)
        assert len(monomials) == 6
        assert monomials[0] == (2, 0, 0)

    def test_family_rank(self, gens):
        q, Q, e = gens
        assert family_rank([q, Q, q + Q]) == 2
        assert family_rank([]) == 0

    def test_coordinates(self, gens):
        q, Q, e = gens
        assert coordinates(2 * q - Q, [q, Q]) == [2, -1]
        assert coordinates(e, [q, Q]) is None
