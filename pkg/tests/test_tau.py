"""
Tests de l'automorphisme τ et du lieu fixe Z_c^τ.
"""

from fractions import Fraction

import pytest

from app.core.multipoly import MultiPoly
from app.services import tau_analyzer
from app.services.cuspidal import variety_variables
from app.services.tau import FIXED_VARIABLES, PRINTED_FORM, lie_poisson, restrict_to_fixed_plane, tau_act


def _fixed(name: str) -> MultiPoly:
    return MultiPoly.generator(FIXED_VARIABLES, name)


class TestTauAction:
    """Tests de τ sur H_c."""

    def test_fixes_invariants(self, algebra3):
        assert tau_act(algebra3.q()) == algebra3.q()
        assert tau_act(algebra3.euler()) == algebra3.euler()

    def test_negates_a(self, algebra3):
        a1 = algebra3.central_a(1)
        assert tau_act(a1) == a1 * -1

    def test_reflections(self, algebra3):
        """τ s_i τ^{-1} = s_{1-i}."""
        assert tau_act(algebra3.s(0)) == algebra3.s(1)

    def test_involution(self, algebra4):
        for _, generator in algebra4.generators():
            assert tau_act(tau_act(generator)) == generator

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_verify(self, d: int):
        assert tau_analyzer.verify_tau_action(d, samples=2).passed


class TestLiePoisson:
    """Tests du crochet de Lie-Poisson de sl₂ sur C[q, Q, e]."""

    def test_table(self):
        q, big_q, e = _fixed("q"), _fixed("Q"), _fixed("e")
        assert lie_poisson(q, big_q) == e
        assert lie_poisson(e, q) == q * -2
        assert lie_poisson(e, big_q) == big_q * 2

    def test_casimir(self):
        q, big_q, e = _fixed("q"), _fixed("Q"), _fixed("e")
        casimir = e * e - q * big_q * 4
        for generator in (q, big_q, e):
            assert lie_poisson(casimir, generator).is_zero()

    def test_restriction(self):
        names = variety_variables(2)
        poly = MultiPoly.generator(names, "e") ** 2 + MultiPoly.generator(names, "a1") * 3
        assert restrict_to_fixed_plane(poly) == _fixed("e") ** 2


class TestFixedLocus:
    """Tests de l'analyse du lieu fixe."""

    @pytest.mark.parametrize("d", [3, 4])
    def test_analysis(self, d: int):
        result = tau_analyzer.fixed_locus_analysis(d)
        assert result.report.passed
        q, big_q, e = _fixed("q"), _fixed("Q"), _fixed("e")
        assert result.derived_quadric == e * e - q * big_q * 4 - d * d

    def test_discrepancy_flagged(self):
        """La forme e² - qQ - d²a² n'est pas celle dérivée des relations."""
        result = tau_analyzer.fixed_locus_analysis(3)
        assert result.discrepancy
        assert any("printed form" in note for note in result.report.notes)

    def test_strata(self):
        result = tau_analyzer.fixed_locus_analysis(3, Fraction(1, 3))
        assert result.strata[:3] == ["origin (0,0,0)", "(0,0,1)", "(0,0,-1)"]
        assert len(result.samples) == 20
        assert len({point.coords for point in result.samples}) == 20

    def test_residual_relations(self):
        """Seules les relations (Z_{i,j}) survivent sur a_i = 0."""
        result = tau_analyzer.fixed_locus_analysis(4)
        assert all("," in relation.name for relation in result.residual)
        assert len(result.residual) == 6

    def test_to_dict(self):
        data = tau_analyzer.fixed_locus_analysis(3).to_dict()
        assert data["printed_form"] == PRINTED_FORM
        assert data["derived_quadric"] == "-4*q*Q + e^2 - 9"
        assert data["discrepancy"] is True

    def test_rejects_small_d(self):
        with pytest.raises(ValueError):
            tau_analyzer.fixed_locus_analysis(2)

    def test_rejects_zero_a(self):
        with pytest.raises(ValueError):
            tau_analyzer.fixed_locus_analysis(3, 0)


class TestQuadricPoisson:
    """Tests du crochet de la quadrique."""

    def test_quadric(self):
        assert tau_analyzer.fixed_quadric_poisson_check(3).passed

    def test_mutation(self):
        """e³ - q n'est pas un Casimir."""
        assert not tau_analyzer.fixed_quadric_poisson_check(3, mutate=True).passed

    def test_suite(self):
        reports = tau_analyzer.verify_tau_suite(3)
        assert [r.name for r in reports] == ["tau_action", "tau_fixed_locus", "tau_quadric_poisson"]
        assert all(r.passed for r in reports)
