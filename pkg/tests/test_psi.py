"""
Tests de la famille Ψ_i et de ses identités.
"""

from math import comb

import pytest

from app.core.errors import DegreeError
from app.core.polyring import InvariantName, invariant_generator
from app.core.psi import (
    T1,
    PsiPoly,
    basis_coordinates,
    express_in_invariants,
    psi,
    psi_coefficients,
    reconstruct,
    substitution_injective,
    verify_basis,
    verify_bracket_with_Q,
    verify_psi_closed_form,
    verify_psi_derivatives,
)


class TestRecurrence:
    """Tests de la récurrence Ψ_{i+1} = TΨ_i - T'T''Ψ_{i-1}."""

    def test_first_terms(self):
        assert psi(0) == 1
        assert psi(1) == PsiPoly.monomial(1, 0, 0)
        assert psi(2) == PsiPoly.monomial(2, 0, 0) - PsiPoly.monomial(0, 1, 1)

    def test_negative_index(self):
        with pytest.raises(ValueError):
            psi(-1)

    @pytest.mark.parametrize("i", range(11))
    def test_coefficients(self, i: int):
        """m_{i,j} = (-1)^j C(i-j, j)."""
        expected = {j: (-1) ** j * comb(i - j, j) for j in range(i // 2 + 1)}
        assert psi_coefficients(i) == {j: m for j, m in expected.items() if m}

    @pytest.mark.parametrize("k", range(8))
    def test_leading_power(self, k: int):
        """Ψ_k restreint à T' = 0 vaut T^k."""
        assert psi(k).substitute({T1: 0}) == PsiPoly.monomial(k, 0, 0)

    def test_render(self):
        assert psi(2).render() == "T^2 - T1*T2"


class TestIdentities:
    """Tests des identités de Ψ_i."""

    @pytest.mark.parametrize("i", range(1, 9))
    def test_derivatives(self, i: int):
        assert verify_psi_derivatives(i)

    @pytest.mark.parametrize("i", range(2, 7))
    def test_shifted_derivatives_fail(self, i: int):
        """Un facteur (i+2) au lieu de (i+1) doit être détecté."""
        assert not verify_psi_derivatives(i, shift=1)

    def test_derivatives_index(self):
        with pytest.raises(ValueError):
            verify_psi_derivatives(0)

    @pytest.mark.parametrize("i", range(7))
    def test_closed_form(self, session3, i: int):
        """Ψ_i(eu_0, q, Q) = eu_0^{[i]}."""
        assert verify_psi_closed_form(i, session3)

    @pytest.mark.parametrize("i", range(1, 6))
    def test_bracket_with_Q(self, session3, i: int):
        assert verify_bracket_with_Q(i, session3)


class TestBasis:
    """Tests de la base de degré k."""

    @pytest.mark.parametrize("k", range(8))
    def test_full_rank(self, k: int):
        assert verify_basis(k)

    def test_coordinates(self):
        p = PsiPoly.monomial(3, 0, 0) - 2 * PsiPoly.monomial(1, 1, 1)
        coords = basis_coordinates(p)
        assert reconstruct(coords, 3) == p

    def test_coordinates_of_psi(self):
        """Ψ_k a pour seule coordonnée (0, k)."""
        assert basis_coordinates(psi(4)) == {(0, 4): 1}

    def test_inhomogeneous_rejected(self):
        with pytest.raises(DegreeError):
            basis_coordinates(PsiPoly.monomial(2, 0, 0) + 1)


class TestSubstitution:
    """Tests de la substitution T ↦ eu_0, T' ↦ q, T'' ↦ Q."""

    @pytest.mark.parametrize("k", range(5))
    def test_injective(self, session3, k: int):
        assert substitution_injective(k, session3)

    def test_express(self, session3):
        f = invariant_generator(InvariantName.EU0, session3) * invariant_generator(
            InvariantName.Q_LOWER, session3
        )
        assert express_in_invariants(f, 2) == PsiPoly.monomial(1, 1, 0)

    def test_express_outside(self, session3):
        """a_{0,0} n'est pas un polynôme en eu_0, q, Q."""
        f = invariant_generator(InvariantName.A0, session3, 0)
        assert express_in_invariants(f, 3) is None
