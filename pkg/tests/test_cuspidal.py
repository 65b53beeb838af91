"""
Tests du point cuspidal : équations de Z_c, espace tangent et algèbre de Lie.
"""

from fractions import Fraction

import pytest

from app.core.linalg import rank
from app.services import cuspidal_analyzer
from app.services.cuspidal import (
    LieTable,
    VarietyPoint,
    cm_polynomial,
    evaluate_point,
    lie_labels,
    relation_system,
    tangent_dim_origin,
    variety_variables,
)


def _sl2_table() -> LieTable:
    """sl₂ dans la base (q̇, Q̇, ė)."""
    table = LieTable(2, Fraction(1), ["dq", "dQ", "de"])
    table.set_bracket(0, 1, [0, 0, 1])
    table.set_bracket(2, 0, [-2, 0, 0])
    table.set_bracket(2, 1, [0, 2, 0])
    return table


class TestRelations:
    """Tests du système d'équations de Z_c ⊂ C^{d+4}."""

    def test_variables(self):
        assert variety_variables(3) == ("q", "Q", "e", "a0", "a1", "a2", "a3")
        assert lie_labels(2) == ["dq", "dQ", "de", "da0", "da1", "da2"]

    def test_cm_polynomial(self):
        """P(T) = T - d²a²."""
        assert cm_polynomial(3, Fraction(1, 3)) == [-1, 1]

    def test_relation_names(self):
        names = [r.name for r in relation_system(4, cm_polynomial(4, 1))]
        assert names[:3] == ["Z_1", "Z_2", "Z_3"]
        assert "Z_1,3" in names
        assert len(names) == 3 + 6

    def test_point_on_variety(self):
        """Sur a_i = 0, e² - 4qQ = d²a² donne un point de Z_c."""
        system = relation_system(4, cm_polynomial(4, 1))
        point = VarietyPoint.on_fixed_plane(4, 1, 5, 6)
        assert not any(evaluate_point(point, system))

    def test_point_off_variety(self):
        system = relation_system(4, cm_polynomial(4, 1))
        point = VarietyPoint.on_fixed_plane(4, 1, 5, 7)
        assert any(evaluate_point(point, system))

    def test_point_to_dict(self):
        point = VarietyPoint.from_values([1, Fraction(1, 2), 0, 0, 0, 0], a_value=2)
        assert point.d == 2
        assert point.to_dict() == {"coords": ["1", "1/2", "0", "0", "0", "0"], "a": "2"}


class TestTangentSpace:
    """Tests de la dimension de l'espace tangent à l'origine."""

    @pytest.mark.parametrize("d", [4, 5, 6])
    def test_cuspidal(self, d: int):
        """Pour d ≥ 4, aucune équation n'a de partie linéaire."""
        assert tangent_dim_origin(d, 1) == d + 4

    def test_d3_not_cuspidal(self):
        """Pour d = 3, les parties linéaires -9a²(q, e, Q) abaissent la dimension."""
        assert tangent_dim_origin(3, 1) == 4

    def test_a_zero(self):
        assert tangent_dim_origin(3, 0) == 7

    def test_origin_not_on_variety(self):
        """Pour d = 2, l'origine n'est pas sur Z_c quand a ≠ 0."""
        with pytest.raises(ValueError):
            tangent_dim_origin(2, 1)


class TestLieTable:
    """Tests de la table de constantes de structure."""

    def test_antisymmetry(self):
        table = _sl2_table()
        assert table.is_antisymmetric()
        assert table.bracket_basis(1, 0) == [0, 0, -1]

    def test_jacobi(self):
        assert _sl2_table().satisfies_jacobi()

    def test_jacobi_violation(self):
        table = _sl2_table()
        table.set_bracket(0, 1, [0, 0, 3])
        table.set_bracket(2, 0, [1, 0, 0])
        assert not table.satisfies_jacobi()

    def test_killing_form(self):
        """La forme de Killing de sl₂ est non dégénérée."""
        killing = _sl2_table().killing_form()
        assert rank(killing) == 3
        assert killing[2][2] == 8
        assert killing[0][1] == killing[1][0] == -4
        assert killing[0][0] == 0

    def test_to_dict(self):
        data = _sl2_table().to_dict()
        assert data["dim"] == 3
        assert ["dq", "dQ", "de", "1"] in data["constants"]


class TestLieAlgebra:
    """Tests de Lie_0(Z_c)."""

    def test_requires_d4(self):
        with pytest.raises(ValueError):
            cuspidal_analyzer.lie_algebra_at_origin(3)

    def test_requires_nonzero_a(self):
        with pytest.raises(ValueError):
            cuspidal_analyzer.lie_algebra_at_origin(4, 0)

    @pytest.mark.slow
    def test_d4_is_sl3(self):
        table = cuspidal_analyzer.lie_algebra_at_origin(4)
        classification = cuspidal_analyzer.classify_lie(table)
        assert classification.label == "sl3"
        assert classification.killing_rank == 8
        assert classification.checks.passed

    @pytest.mark.slow
    def test_d5_sl2_plus_abelian(self):
        table = cuspidal_analyzer.lie_algebra_at_origin(5)
        classification = cuspidal_analyzer.classify_lie(table)
        assert classification.label == "sl2 ⊕ irreducible abelian S_5 (dim 6)"
        assert classification.killing_rank == 3

    @pytest.mark.slow
    def test_verify_cuspidal(self):
        reports = cuspidal_analyzer.verify_cuspidal(4)
        assert [r.name for r in reports] == ["tangent_dimension", "lie_classification", "lie_scaling"]
        assert all(r.passed for r in reports)
