"""
Tests du groupe diédral, de son action monomiale et de l'automorphisme τ.
"""

import pytest

from app.core.dihedral import (
    TAU_MONOMIAL_MAP,
    GroupElement,
    apply_monomial_map,
    check_action_law,
    check_group_law,
    check_monomial_maps,
    elements,
    longest_element,
    tau_conjugate,
    tau_fixed_subgroup,
)

DEGREES = [2, 3, 4, 5, 6]


class TestGroupLaw:
    """Tests de la loi de groupe abstraite."""

    @pytest.mark.parametrize("d", DEGREES)
    def test_order(self, d: int):
        """W doit avoir 2d éléments distincts."""
        assert len(set(elements(d))) == 2 * d

    @pytest.mark.parametrize("d", DEGREES)
    def test_matches_matrices(self, d: int):
        """La loi abstraite doit coïncider avec le produit matriciel."""
        assert check_group_law(d) == []

    def test_reflection_product(self):
        """s_i s_j = c^{i-j}."""
        d = 5
        assert GroupElement.reflection(2, d) * GroupElement.reflection(4, d) == GroupElement.rotation(-2, d)

    def test_index_reduced(self):
        assert GroupElement.reflection(7, 5).index == 2
        assert GroupElement.rotation(-1, 5) == GroupElement.rotation(4, 5)

    def test_inverse(self, small_d):
        for g in elements(small_d):
            assert (g * g.inverse()).is_identity

    def test_mixed_orders_rejected(self):
        with pytest.raises(ValueError):
            GroupElement.reflection(0, 3) * GroupElement.reflection(0, 4)

    def test_render(self):
        assert GroupElement.identity(3).render() == "1"
        assert GroupElement.reflection(1, 3).render() == "s[1]"
        assert GroupElement.rotation(2, 3).render() == "c[2]"


class TestMonomialAction:
    """Tests de l'action sur x, y, X, Y."""

    @pytest.mark.parametrize("d", DEGREES)
    def test_monomial_maps_match_matrices(self, d: int):
        assert check_monomial_maps(d) == []

    @pytest.mark.parametrize("d", DEGREES)
    def test_action_is_left_action(self, d: int):
        """(gh)·p = g·(h·p)."""
        assert check_action_law(d) == []


class TestLongestElement:
    """Tests de w_0."""

    def test_odd(self):
        """Pour d = 3, w_0 = s_1 s_0 s_1 = s_2."""
        assert longest_element(3) == GroupElement.reflection(2, 3)

    def test_even(self):
        """Pour d pair, w_0 est la rotation centrale c^{d/2}."""
        assert longest_element(4) == GroupElement.rotation(2, 4)
        assert longest_element(6) == GroupElement.rotation(3, 6)

    @pytest.mark.parametrize("d", DEGREES)
    def test_involution(self, d: int):
        w0 = longest_element(d)
        assert (w0 * w0).is_identity


class TestTau:
    """Tests de la conjugaison par τ."""

    @pytest.mark.parametrize("d", DEGREES)
    def test_involution(self, d: int):
        for g in elements(d):
            assert tau_conjugate(tau_conjugate(g)) == g

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_automorphism(self, d: int):
        """τ(gh) = τ(g)τ(h)."""
        for g in elements(d):
            for h in elements(d):
                assert tau_conjugate(g * h) == tau_conjugate(g) * tau_conjugate(h)

    @pytest.mark.parametrize("d", DEGREES)
    def test_fixed_subgroup(self, d: int):
        """Le sous-groupe fixe est {1, w_0}."""
        fixed = {g.sort_key() for g in tau_fixed_subgroup(d)}
        expected = {GroupElement.identity(d).sort_key(), longest_element(d).sort_key()}
        assert fixed == expected

    def test_monomial_map(self):
        """τ envoie x sur √ζ^{-1} y."""
        assert apply_monomial_map(TAU_MONOMIAL_MAP, (1, 0, 0, 0)) == ((0, 1, 0, 0), -1)
        assert apply_monomial_map(TAU_MONOMIAL_MAP, (1, 0, 1, 0)) == ((0, 1, 0, 1), 0)
