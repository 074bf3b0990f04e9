import random
from fractions import Fraction

import pytest

from courant.graded import (AmbientMismatchError, Element, GeneratorSet,
                            GradingError, coordinate_derivation,
                            euler_derivation, exact_div, parse_element)
from courant.scalars import FIELD_Q, FIELD_QI


@pytest.fixture
def gs():
    return GeneratorSet([("x", 0), ("y", 0), ("xi1", 1), ("xi2", 1),
                         ("xi3", 1), ("p", 2)])


def random_homogeneous(gs, rng, degree):
    out = gs.zero()
    names_by_degree = {0: ["x", "y"], 1: ["xi1", "xi2", "xi3"], 2: ["p"]}
    for _ in range(3):
        factors = []
        remaining = degree
        while remaining > 0:
            d = rng.choice([d for d in (1, 2) if d <= remaining])
            factors.append((rng.choice(names_by_degree[d]), 1))
            remaining -= d
        for _ in range(rng.randint(0, 2)):
            factors.append((rng.choice(names_by_degree[0]), 1))
        out = out + gs.monomial(factors, rng.randint(-3, 3))
    return out


def test_odd_generators_anticommute(gs):
    xi1, xi2 = gs.gen("xi1"), gs.gen("xi2")
    assert xi2 * xi1 == -(xi1 * xi2)
    assert (xi2 * xi1).render() == "-xi1*xi2"


def test_odd_square_is_zero(gs):
    xi1 = gs.gen("xi1")
    assert (xi1 * xi1).is_zero()


def test_even_powers_allowed(gs):
    p = gs.gen("p")
    assert (p * p).render() == "p^2"
    assert (p * p).degree() == 4


def test_graded_commutativity_random(gs):
    rng = random.Random(11)
    for _ in range(30):
        da, db = rng.randint(0, 3), rng.randint(0, 3)
        a = random_homogeneous(gs, rng, da)
        b = random_homogeneous(gs, rng, db)
        sign = -1 if (da * db) % 2 else 1
        assert a * b == (b * a).scale(sign)


def test_associativity_random(gs):
    rng = random.Random(12)
    for _ in range(20):
        a = random_homogeneous(gs, rng, rng.randint(0, 2))
        b = random_homogeneous(gs, rng, rng.randint(0, 2))
        c = random_homogeneous(gs, rng, rng.randint(0, 2))
        assert (a * b) * c == a * (b * c)


def test_leibniz_rule_random(gs):
    rng = random.Random(13)
    derivations = [coordinate_derivation(gs, n)
                   for n in ("x", "xi1", "xi2", "p")]
    for _ in range(20):
        d = rng.choice(derivations)
        da = rng.randint(0, 3)
        a = random_homogeneous(gs, rng, da)
        b = random_homogeneous(gs, rng, rng.randint(0, 3))
        sign = -1 if (d.degree * da) % 2 else 1
        lhs = d.apply(a * b)
        rhs = d.apply(a) * b + (a * d.apply(b)).scale(sign)
        assert lhs == rhs


def test_euler_counts_degree(gs):
    rng = random.Random(14)
    eps = euler_derivation(gs)
    for degree in range(0, 5):
        a = random_homogeneous(gs, rng, degree)
        assert eps.apply(a) == a.scale(degree)
    assert eps.apply(gs.gen("xi1") * gs.gen("xi2")) == \
        (gs.gen("xi1") * gs.gen("xi2")).scale(2)
    assert eps.apply(gs.gen("x")).is_zero()


def test_left_derivation_signs(gs):
    d1 = coordinate_derivation(gs, "xi1")
    xi1, xi2 = gs.gen("xi1"), gs.gen("xi2")
    assert d1.apply(xi1 * xi2) == xi2
    assert d1.apply(xi2 * xi1) == -xi2
    assert coordinate_derivation(gs, "x").apply(xi1).is_zero()
    dp = coordinate_derivation(gs, "p")
    assert dp.apply(gs.gen("p") * gs.gen("p")) == gs.gen("p").scale(2)


def test_normalization_idempotent(gs):
    rng = random.Random(15)
    for _ in range(10):
        a = random_homogeneous(gs, rng, rng.randint(0, 3))
        rebuilt = gs.zero()
        for mono, coeff in a.terms.items():
            rebuilt = rebuilt + Element(gs, {mono: coeff})
        assert rebuilt == a
        assert rebuilt.render() == a.render()


def test_homogeneity_detection(gs):
    a = gs.gen("x") + gs.gen("xi1")
    assert not a.is_homogeneous()
    with pytest.raises(GradingError):
        a.degree()
    assert a.homogeneous_part(1) == gs.gen("xi1")


def test_ambient_mismatch():
    gs1 = GeneratorSet([("x", 0)])
    gs2 = GeneratorSet([("y", 0)])
    with pytest.raises(AmbientMismatchError):
        gs1.gen("x") * gs2.gen("y")


def test_field_is_per_generator_set():
    gsq = GeneratorSet([("x", 0)], FIELD_Q)
    gsi = GeneratorSet([("x", 0)], FIELD_QI)
    with pytest.raises(AmbientMismatchError):
        gsq.gen("x") + gsi.gen("x")


def test_degree_restriction_default():
    with pytest.raises(GradingError):
        GeneratorSet([("c", 3)])
    gs = GeneratorSet([("c", 3)], allowed_degrees=None)
    assert (gs.gen("c") * gs.gen("c")).is_zero()


def test_parse_render_round_trip(gs):
    rng = random.Random(16)
    for _ in range(15):
        a = random_homogeneous(gs, rng, rng.randint(0, 3))
        assert parse_element(a.render(), gs) == a


def test_parse_rejects_unknown_names(gs):
    with pytest.raises(ValueError):
        parse_element("2*zz", gs)


def test_exact_division():
    gs = GeneratorSet([("x", 0), ("y", 0)])
    a = parse_element("x^2*y + x*y^2", gs)
    b = parse_element("x*y", gs)
    assert exact_div(a, b) == parse_element("x + y", gs)
    with pytest.raises(ArithmeticError):
        exact_div(parse_element("x + 1", gs), parse_element("y", gs))


def test_canonical_rendering_scalars(gs):
    e = gs.monomial([("x", 2), ("xi1", 1)], Fraction(-3, 2)) + gs.scalar(2)
    assert e.render() == "2 - 3/2*x^2*xi1"
