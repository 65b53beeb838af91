"""
Tests du moteur de réécriture de H_{t,c} et des éléments centraux.
"""

import pytest

from app.core.cherednik import HElement, element_sum, get_algebra
from app.core.dihedral import GroupElement, reflections
from app.core.errors import NotCentralError
from app.core.polyring import CommPoly, InvariantName, Var, invariant_generator
from app.core.psi import PsiPoly
from app.core.scalar import Scalar

# ═══════════════════════════════════════════════════════════════════════════════
# Éléments
# ═══════════════════════════════════════════════════════════════════════════════


class TestHElement:
    """Tests de la forme normale PBW."""

    def test_from_parts_ordered(self, session3):
        left = CommPoly.variable(session3, Var.x)
        right = CommPoly.variable(session3, Var.Y)
        element = HElement.from_parts(left, GroupElement.reflection(1, 3), right)
        assert element.render() == "(1) * x * s[1] * Y"

    def test_from_parts_rejects_unordered(self, session3):
        with pytest.raises(ValueError):
            HElement.from_parts(
                CommPoly.variable(session3, Var.X), GroupElement.identity(3), CommPoly.one(session3)
            )

    def test_scalar_equality(self, session3):
        assert HElement.scalar(session3, 2) == 2
        assert HElement.zero(session3).is_zero()

    def test_to_dict(self, algebra3):
        data = algebra3.s(0).to_dict()
        assert data["d"] == 3
        assert data["terms"] == [{"group": "s[0]", "left": "1", "right": "1", "coeff": "1"}]

    def test_render_truncated(self, algebra3):
        assert algebra3.euler().render(max_terms=1).endswith("... (4 more terms)")


# ═══════════════════════════════════════════════════════════════════════════════
# Produit
# ═══════════════════════════════════════════════════════════════════════════════


class TestMultiplication:
    """Tests des relations de définition."""

    @pytest.mark.parametrize("d", [2, 3, 4])
    @pytest.mark.parametrize("t_order", [1, 2])
    def test_self_test(self, d: int, t_order: int):
        """L'auto-test de convention ne doit rien signaler."""
        assert get_algebra(d, t_order).self_test() == []

    def test_X_times_x(self, lifted3):
        """X·x = xX - t + a Σ s_i."""
        session = lifted3.session
        expected = (
            lifted3.x * lifted3.X
            - HElement.scalar(session, Scalar.t(session))
            + element_sum(session, (HElement.group(session, s, Scalar.a(session)) for s in reflections(3)))
        )
        assert lifted3.X * lifted3.x == expected

    def test_reflection_squares(self, algebra3):
        for i in range(3):
            assert algebra3.s(i) * algebra3.s(i) == algebra3.one()

    def test_associativity(self, algebra3):
        x, y, X, Y = algebra3.x, algebra3.y, algebra3.X, algebra3.Y
        left = (X * Y) * (x * algebra3.s(1))
        right = X * ((Y * x) * algebra3.s(1))
        assert left == right
        assert (Y * X) * y == Y * (X * y)

    def test_variables_commute_at_t_zero(self, algebra3):
        """[x, y] = [X, Y] = 0."""
        assert algebra3.commutator(algebra3.x, algebra3.y).is_zero()
        assert algebra3.commutator(algebra3.X, algebra3.Y).is_zero()

    def test_power(self, algebra3):
        assert algebra3.s(0) ** 2 == 1
        with pytest.raises(ValueError):
            algebra3.s(0) ** -1

    def test_trunc(self, algebra3):
        """Trunc(eu) = eu_0."""
        assert algebra3.trunc(algebra3.euler()) == invariant_generator(InvariantName.EU0, algebra3.session)


# ═══════════════════════════════════════════════════════════════════════════════
# Centre
# ═══════════════════════════════════════════════════════════════════════════════


class TestCentralElements:
    """Tests des éléments centraux de H_c."""

    def test_basic_central(self, algebra3):
        assert algebra3.is_central(algebra3.euler())
        assert algebra3.is_central(algebra3.q())
        assert algebra3.is_central(algebra3.Q())

    def test_non_central(self, algebra3):
        assert not algebra3.is_central(algebra3.x)
        assert not algebra3.is_central(algebra3.s(0))

    @pytest.mark.parametrize("j", range(4))
    def test_central_a(self, algebra3, j: int):
        assert algebra3.is_central(algebra3.central_a(j))

    @pytest.mark.parametrize("j", range(5))
    def test_central_a_even(self, algebra4, j: int):
        assert algebra4.is_central(algebra4.central_a(j))

    @pytest.mark.parametrize("j", range(4))
    def test_alternative_writing(self, algebra3, j: int):
        """Les deux écritures de a_j coïncident."""
        assert algebra3.central_a(j) == algebra3.central_a_alternative(j)

    def test_central_a_range(self, algebra3):
        with pytest.raises(ValueError):
            algebra3.central_a(4)

    def test_evaluate_invariant(self, algebra3):
        """p(eu, q, Q) pour p = T T' coïncide avec eu·q."""
        assert algebra3.evaluate_invariant(PsiPoly.monomial(1, 1, 0)) == algebra3.euler() * algebra3.q()

    def test_eu_power(self, algebra3):
        assert algebra3.eu_power(0) == 1
        assert algebra3.eu_power(2) == algebra3.euler() * algebra3.euler()


# ═══════════════════════════════════════════════════════════════════════════════
# Crochet de Poisson
# ═══════════════════════════════════════════════════════════════════════════════


class TestPoisson:
    """Tests du crochet de Z_c obtenu par déformation."""

    def test_qQ_is_eu(self, algebra3):
        """{q, Q} = +eu."""
        assert algebra3.poisson(algebra3.q(), algebra3.Q()) == algebra3.euler()

    def test_eu_grading(self, algebra3):
        """{eu, q} = -2q et {eu, Q} = 2Q."""
        eu = algebra3.euler()
        assert algebra3.poisson(eu, algebra3.q()) == algebra3.q() * -2
        assert algebra3.poisson(eu, algebra3.Q()) == algebra3.Q() * 2

    def test_antisymmetric(self, algebra3):
        a1 = algebra3.central_a(1)
        assert algebra3.poisson(algebra3.q(), a1) == -algebra3.poisson(a1, algebra3.q())

    def test_rejects_non_central(self, algebra3):
        with pytest.raises(NotCentralError):
            algebra3.poisson(algebra3.x, algebra3.q())

    def test_variable_bracket(self, algebra3):
        """Le coefficient de t dans [x, eu] vaut x."""
        eu = algebra3.euler()
        assert algebra3.variable_bracket(Var.x, eu) == algebra3.x
        assert algebra3.variable_bracket_formula(Var.x, eu) == algebra3.x

    def test_variable_bracket_rejects_X(self, algebra3):
        with pytest.raises(ValueError):
            algebra3.variable_bracket(Var.X, algebra3.q())
