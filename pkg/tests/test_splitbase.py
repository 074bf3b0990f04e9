import random

import pytest

from courant.complexes import exterior_complex_from_q, naive_ideal_filtration
from courant.graded import coordinate_derivation, parse_element
from courant.splitbase import (SplitBaseError, SplitBaseModel,
                               alekseev_model, sheet_tables,
                               smith_invariant_factors, split_cohomology)
from courant.scalars import FIELD_Q


class TestModel:
    def test_severa_degree_enforced(self):
        with pytest.raises(SplitBaseError):
            SplitBaseModel([("C", 3), ("y", 2)], 1, severa="y*t1")

    def test_odd_generators_square_to_zero(self):
        model = SplitBaseModel([("C", 3)], 1)
        c = model.gs.gen("C")
        assert (c * c).is_zero()

    def test_naive_monomials_mixed_parities(self):
        model = SplitBaseModel([("a", 2), ("b", 3)], 0)
        assert len(model.naive_monomials(6)) == 1   # a^3 (b^2 = 0)
        assert len(model.naive_monomials(5)) == 1   # a b
        assert len(model.naive_monomials(7)) == 1   # a^2 b
        assert len(model.naive_monomials(1)) == 0


class TestTransgression:
    def test_constant_severa_gives_zero(self):
        model = alekseev_model(1, "1")
        assert model.transgression().is_zero()

    def test_linear_severa_hits_generator(self):
        model = alekseev_model(1, "t1")
        tmap = model.transgression()
        assert not tmap.is_zero()
        assert tmap.generic_rank() == 1
        img = tmap.image_elements()[0]
        assert img == model.gs.gen("C")

    def test_zero_severa(self):
        model = SplitBaseModel([("C", 3)], 2)
        assert model.transgression().is_zero()

    def test_polynomial_linearity(self):
        model = alekseev_model(2, "t1^2")
        rng = random.Random(60)
        base = coordinate_derivation(model.gs, "t1").apply(model.severa)
        for _ in range(5):
            coeffs = [rng.randint(-3, 3) for _ in range(3)]
            g = parse_element(
                "%d + %d*t1 + %d*t1^2" % tuple(coeffs), model.gs)
            # multiplying the field by g multiplies the image by g
            assert g * base == g * base  # associativity of the model
            scaled = (g * model.severa)
            # derivative of g*severa = dg*severa + g*dse良... direct check:
            d = coordinate_derivation(model.gs, "t1")
            assert d.apply(scaled) == d.apply(g) * model.severa + g * base


class TestSmith:
    def test_invariant_factors(self):
        model = SplitBaseModel([("C", 3)], 1)
        t = model.gs.gen("t1")
        one = model.gs.one()
        factors = smith_invariant_factors([[t, one]])
        assert len(factors) == 1
        assert factors[0] == one
        factors = smith_invariant_factors([[t * t]])
        assert factors[0] == t * t


class TestAlekseev:
    def test_constant_twist_doubles_leaf_cohomology(self):
        report = split_cohomology(alekseev_model(1, "1"), 6)
        assert report["ranks"] == [1, 0, 1, 1, 1, 1, 1]
        assert report["kernel_rank"] == 1
        assert report["kernel_flag"] == "free"

    def test_linear_twist_kills_degree_three(self):
        report = split_cohomology(alekseev_model(1, "t1"), 6)
        assert report["ranks"] == [1, 0, 0, 0, 0, 0, 0]
        assert report["kernel_rank"] == 0

    def test_rank_two_group_linear(self):
        # rank-2 compact model: generators C (3) and x2 (3)
        report = split_cohomology(alekseev_model(2, "t1"), 7)
        # degree 3 keeps the second generator; products with C die
        assert report["ranks"][0] == 1
        assert report["ranks"][3] == 1
        assert report["ranks"][6] == 0

    def test_quadratic_twist_flags_torsion(self):
        report = split_cohomology(alekseev_model(2, "t1^2"), 6)
        assert report["kernel_rank"] == 0
        assert report["quotient_flags"][3] == "torsion"
        assert any("flagged" in note for note in report["notes"])


class TestSheets:
    def test_transitive_concentrated_in_q0(self):
        model = SplitBaseModel([("y3", 3)], 0)
        tables = sheet_tables(model, 4)
        assert all(key.endswith(",0") for key in tables["e2"])
        report = split_cohomology(model, 4)
        assert report["ranks"] == [1, 0, 0, 1, 0]

    def test_zero_severa_stable_equals_middle(self):
        model = SplitBaseModel([("y3", 3)], 1)
        tables = sheet_tables(model, 5)
        assert tables["e2"] == tables["e4"]
        assert tables["collapse_at_4"]

    def test_linear_twist_kills_column(self):
        tables = sheet_tables(alekseev_model(1, "t1"), 6)
        assert "3,0" in tables["e2"]
        assert "3,0" not in tables["e4"]
        assert all(not key.startswith("0,") or key == "0,0"
                   for key in tables["e4"])


def test_transitive_model_matches_filtered_complex(so3_presentation):
    """m = 0 cross-check: the free degree-3 model realizes the filtered
    standard complex of the rank-3 quadratic presentation."""
    model = SplitBaseModel([("y3", 3)], 0)
    report = split_cohomology(model, 3)
    cx = exterior_complex_from_q(so3_presentation.chart(),
                                 so3_presentation.hamiltonian())
    _, conv = naive_ideal_filtration(cx).e_infinity()
    for degree in range(0, 4):
        assert report["ranks"][degree] == \
            conv["einf_dims_by_degree"].get(degree, 0)
