"""Acceptance suite: one test per criterion, each printing a PASS line
with its measured cost.  All comparisons are exact; there are no
tolerances anywhere in this file.
"""

import random
import time
from fractions import Fraction

import pytest

from conftest import IDENT3
from oracles import SO3_BRACKETS, ce_cohomology_dims

from courant.complexes import (exterior_complex_from_q, naive_complex,
                               naive_ideal_filtration, torus_model,
                               ce_cochain_complex)
from courant.matched import (MatchedPairPresentation,
                             flat_standard_to_matched, matched_iff_courant,
                             matched_sum)
from courant.presentations import (AlternatingForm, CourantPresentation,
                                   LieAlgebraPresentation, StandardCAData,
                                   canonical_splitting, cartan_three_form,
                                   l_infinity_check, quadratic_lie_algebra,
                                   severa_form, shift_splitting, so3,
                                   splitting_change, standard_regular_build,
                                   verify_courant)
from courant.scalars import FIELD_Q
from courant.splitbase import alekseev_model, split_cohomology

F = FIELD_Q


def report(number, title, started):
    print("ACCEPTANCE %d (%s): PASS  [%.2fs]"
          % (number, title, time.monotonic() - started))


@pytest.fixture
def point_fixtures(so3_presentation, abelian2_presentation,
                   abelian4_presentation, sl2_double_presentation,
                   split_double_presentation):
    return {
        "abelian rank 2": abelian2_presentation,
        "abelian rank 4": abelian4_presentation,
        "so(3)": so3_presentation,
        "sl2 bialgebra double": sl2_double_presentation,
        "split-metric double": split_double_presentation,
    }


def test_criterion_1_torus_spectral_sequence():
    started = time.monotonic()
    filtered = torus_model()
    sheet = filtered.sheet(2)
    assert sheet.dims() == {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): 1}
    _, conv = filtered.e_infinity()
    assert conv["cohomology_dims"] == {0: 1, 1: 2, 2: 1}
    assert conv["converged"]
    elapsed = time.monotonic() - started
    assert elapsed < 1.0, "torus demonstration exceeded one second"
    report(1, "torus spectral sequence", started)


def test_criterion_2_derived_bracket_correspondence(point_fixtures):
    started = time.monotonic()
    assert len(point_fixtures) >= 5
    for name, pres in point_fixtures.items():
        rep = verify_courant(pres, random.Random(0), samples=2)
        assert rep["hamiltonian_nilpotent"], name
        assert rep["direct_ok"], name
        assert rep["agreement"], name
        c_table, rho_table = pres.round_trip_tables()
        assert c_table == pres.structure, name
        assert rho_table == pres.anchor, name
    elapsed = time.monotonic() - started
    assert elapsed < 10.0, "correspondence suite exceeded ten seconds"
    report(2, "derived-bracket correspondence", started)


def test_criterion_3_naive_equals_standard(point_fixtures):
    started = time.monotonic()
    for name, pres in point_fixtures.items():
        ncx = naive_complex(pres, max_degree=4)
        scx = exterior_complex_from_q(pres.chart(), pres.hamiltonian(),
                                      max_degree=4)
        ndims = ncx.cohomology_dims()
        sdims = scx.cohomology_dims()
        for degree in range(0, 5):
            assert ndims.get(degree, 0) == sdims.get(degree, 0), \
                (name, degree)
    report(3, "naive equals standard cohomology in degrees 0..4", started)


def test_criterion_4_so3_against_brute_force_oracle(so3_presentation):
    started = time.monotonic()
    oracle = ce_cohomology_dims(3, SO3_BRACKETS)
    assert oracle == {0: 1, 1: 0, 2: 0, 3: 1}
    engine = exterior_complex_from_q(so3_presentation.chart(),
                                     so3_presentation.hamiltonian())
    assert engine.cohomology_dims() == oracle
    report(4, "so(3) cohomology against the brute-force oracle", started)


def test_criterion_5_severa_class_behavior(twisted_so3_presentation):
    started = time.monotonic()
    pres = twisted_so3_presentation
    algebra = so3(F)
    base_form = severa_form(pres, canonical_splitting(pres))
    assert base_form == cartan_three_form(algebra, IDENT3)
    ce = ce_cochain_complex(algebra)
    image = ce.coboundaries(3)
    rng = random.Random(5)
    from courant import linalg
    ops = linalg.ops_for_field(F)
    for _ in range(10):
        entries = {}
        for key in ((0, 1), (0, 2), (1, 2)):
            v = rng.randint(-4, 4)
            if v:
                entries[key] = Fraction(v)
        b2 = AlternatingForm(3, 2, entries, F)
        moved = severa_form(
            pres, shift_splitting(pres, canonical_splitting(pres), b2))
        expected = splitting_change(base_form, b2)
        assert moved == expected
        # class comparison inside the degree-3 cochain space
        diff = [moved(0, 1, 2) - base_form(0, 1, 2)]
        if any(x != F.zero for x in diff):
            assert linalg.coords_in_span(image, diff, ops) is not None
    report(5, "splitting 3-form changes by an exact term only", started)


def _random_matched_instance(rng):
    from test_matched import random_matched_instance
    return random_matched_instance(rng)


def test_criterion_6_matched_pair_equivalence():
    started = time.monotonic()
    instances = []
    # deliberately broken curvature example
    from test_matched import broken_curvature_pair, inner_connection_pair
    instances.append(broken_curvature_pair())
    data, flat_pair = inner_connection_pair()
    instances.append(flat_pair)
    for k in range(48):
        instances.append(_random_matched_instance(random.Random(2000 + k)))
    assert len(instances) >= 50
    matched_seen = unmatched_seen = 0
    for k, mp in enumerate(instances):
        rep = matched_iff_courant(mp, random.Random(k), samples=1)
        assert rep["equivalent"], k
        if rep["pair_matched"]:
            matched_seen += 1
        else:
            unmatched_seen += 1
    assert matched_seen and unmatched_seen
    # the flat fixture reproduces the assembled bracket table exactly
    build, cond = standard_regular_build(data)
    assert cond["all"]
    total = matched_sum(flat_pair)
    order = [0, 2, 3, 4, 1]
    cols = [[0] * 5 for _ in range(5)]
    for u, su in enumerate(order):
        cols[su][u] = 1
    assert total.change_frame(cols).coefficient_tables() == \
        build.coefficient_tables()
    report(6, "matched-pair equivalence on %d instances"
           % len(instances), started)


def test_criterion_7_split_base_theorem():
    started = time.monotonic()
    doubled = split_cohomology(alekseev_model(1, "1"), 6)
    assert doubled["ranks"] == [1, 0, 1, 1, 1, 1, 1]
    killed = split_cohomology(alekseev_model(1, "t1"), 6)
    assert killed["ranks"] == [1, 0, 0, 0, 0, 0, 0]
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, "split-base computation exceeded five seconds"
    report(7, "split-base rank patterns", started)


def test_criterion_8_spectral_oracle_equivalence():
    started = time.monotonic()
    from test_complexes import random_filtered_complex
    rng = random.Random(808)
    for k in range(100):
        filtered = random_filtered_complex(rng, max_total=12)
        sheet, conv = filtered.e_infinity()
        # oracle: direct cohomology of the unfiltered complex
        direct = filtered.complex.cohomology_dims()
        totals = {}
        for (p, q), reps in sheet.cells.items():
            totals[p + q] = totals.get(p + q, 0) + len(reps)
        for degree in set(direct) | set(totals):
            assert totals.get(degree, 0) == direct.get(degree, 0), k
        assert conv["converged"]
    report(8, "stable page dimensions equal direct cohomology "
              "(100 instances)", started)


def test_criterion_9_homotopy_identities(point_fixtures):
    started = time.monotonic()
    for name, pres in point_fixtures.items():
        rep = l_infinity_check(pres)
        assert all(rep[n]["holds"] for n in range(1, 5)), name
    # the sign of the trilinear operation is invisible over a point; the
    # anchored line presentation pins it and must break exactly the
    # three-argument identity
    f1 = LieAlgebraPresentation(1, {}, F)
    g0 = LieAlgebraPresentation(0, {}, F)
    anchored, _ = standard_regular_build(
        StandardCAData(F, ["x"], f1, {(0, 0): 1}, g0, [], {}, {}, {}))
    rep = l_infinity_check(anchored)
    assert all(rep[n]["holds"] for n in range(1, 5))
    flipped = l_infinity_check(anchored, l3_sign=-1)
    assert flipped[1]["holds"]
    assert flipped[2]["holds"]
    assert not flipped[3]["holds"]
    assert flipped[4]["holds"]
    report(9, "homotopy identities and the trilinear sign", started)
