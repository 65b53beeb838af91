"""
Tests de C[V × V*] : action de W, crochet canonique, invariants et division exacte.
"""

import pytest

from app.core.dihedral import GroupElement, elements
from app.core.errors import NonExactDivisionError, SessionMismatchError
from app.core.polyring import (
    CommPoly,
    InvariantName,
    Var,
    invariant_generator,
    is_w_invariant,
    poisson_vv,
    solve_in_span,
    span_rank,
)
from app.core.scalar import Scalar
from app.core.session import get_session


def _var(session, var: Var) -> CommPoly:
    return CommPoly.variable(session, var)


class TestGroupAction:
    """Tests de l'action monomiale de W."""

    def test_s0_swaps_x_and_y(self, session3):
        """s_0 x = y et s_0 X = Y."""
        s0 = GroupElement.reflection(0, 3)
        assert _var(session3, Var.x).act(s0) == _var(session3, Var.y)
        assert _var(session3, Var.X).act(s0) == _var(session3, Var.Y)

    def test_rotation_scales(self, session3):
        """c x = ζ x."""
        c = GroupElement.rotation(1, 3)
        expected = _var(session3, Var.x) * Scalar.root(session3, 1)
        assert _var(session3, Var.x).act(c) == expected

    def test_wrong_order_rejected(self, session3):
        with pytest.raises(ValueError):
            _var(session3, Var.x).act(GroupElement.reflection(0, 4))

    def test_pairing_invariant(self, small_d):
        """xX + yY est fixe par tout W."""
        session = get_session(small_d, 1)
        eu0 = invariant_generator(InvariantName.EU0, session)
        for g in elements(small_d):
            assert eu0.act(g) == eu0


class TestInvariants:
    """Tests des invariants nommés."""

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_generators_invariant(self, d: int):
        session = get_session(d, 1)
        names = [InvariantName.Q_LOWER, InvariantName.Q_UPPER, InvariantName.EU0]
        family = [invariant_generator(name, session) for name in names]
        family += [invariant_generator(InvariantName.A0, session, i) for i in range(d + 1)]
        assert all(is_w_invariant(f) for f in family)

    def test_non_invariant(self, session3):
        assert not is_w_invariant(_var(session3, Var.x) * _var(session3, Var.X))

    def test_index_required(self, session3):
        with pytest.raises(ValueError):
            invariant_generator(InvariantName.A0, session3)
        with pytest.raises(ValueError):
            invariant_generator(InvariantName.A0, session3, 4)

    @pytest.mark.parametrize("i", [2, 3, 4, 5])
    def test_power_sum_recurrence(self, session3, i: int):
        """eu_0^{(i)} = eu_0 eu_0^{(i-1)} - qQ eu_0^{(i-2)}."""
        eu0 = invariant_generator(InvariantName.EU0, session3)
        qQ = invariant_generator(InvariantName.Q_LOWER, session3) * invariant_generator(
            InvariantName.Q_UPPER, session3
        )
        lhs = invariant_generator(InvariantName.EU0_ROUND, session3, i)
        rhs = eu0 * invariant_generator(InvariantName.EU0_ROUND, session3, i - 1) - qQ * (
            invariant_generator(InvariantName.EU0_ROUND, session3, i - 2)
        )
        assert lhs == rhs

    def test_complete_sum(self, session3):
        """eu_0^{[2]} = (xX)^2 + xXyY + (yY)^2."""
        expected = (
            CommPoly.monomial(session3, (2, 0, 2, 0))
            + CommPoly.monomial(session3, (1, 1, 1, 1))
            + CommPoly.monomial(session3, (0, 2, 0, 2))
        )
        assert invariant_generator(InvariantName.EU0_SQUARE, session3, 2) == expected


class TestPoisson:
    """Tests du crochet canonique de C[V × V*]."""

    def test_qQ(self, session3):
        """{q, Q} = eu_0."""
        q = invariant_generator(InvariantName.Q_LOWER, session3)
        Q = invariant_generator(InvariantName.Q_UPPER, session3)
        assert poisson_vv(q, Q) == invariant_generator(InvariantName.EU0, session3)

    def test_antisymmetric(self, session3):
        f = _var(session3, Var.x) ** 2 * _var(session3, Var.Y)
        g = _var(session3, Var.X) * _var(session3, Var.y)
        assert poisson_vv(f, g) == -poisson_vv(g, f)


class TestDivision:
    """Tests de la division exacte."""

    def test_exact(self, session3):
        xX = CommPoly.monomial(session3, (1, 0, 1, 0))
        yY = CommPoly.monomial(session3, (0, 1, 0, 1))
        assert (xX**2 - yY**2).divide_exact(xX - yY) == xX + yY

    def test_not_exact(self, session3):
        with pytest.raises(NonExactDivisionError):
            _var(session3, Var.x).divide_exact(_var(session3, Var.y))

    def test_zero_divisor(self, session3):
        with pytest.raises(ZeroDivisionError):
            _var(session3, Var.x).divide_exact(CommPoly.zero(session3))

    def test_session_mismatch(self, session3, session4):
        with pytest.raises(SessionMismatchError):
            _var(session3, Var.x) + _var(session4, Var.x)


class TestSpan:
    """Tests des coordonnées rationnelles."""

    def test_solve_in_span(self, session3):
        q = invariant_generator(InvariantName.Q_LOWER, session3)
        eu0 = invariant_generator(InvariantName.EU0, session3)
        assert solve_in_span(q * 2 + eu0, [q, eu0]) == [2, 1]
        assert solve_in_span(q, [eu0]) is None

    def test_span_rank(self, session3):
        q = invariant_generator(InvariantName.Q_LOWER, session3)
        Q = invariant_generator(InvariantName.Q_UPPER, session3)
        assert span_rank([q, Q, q - Q]) == 2
        assert span_rank([CommPoly.zero(session3)]) == 0
