import random
from fractions import Fraction

import pytest

from courant import linalg
from courant.complexes import (CochainComplex, ComplexError,
                               FilteredComplex, ce_cochain_complex,
                               exterior_complex_from_q, naive_complex,
                               naive_ideal_filtration, torus_model)
from courant.presentations import so3
from courant.scalars import FIELD_Q

OPS = linalg.ops_for_field(FIELD_Q)


def test_d_squared_validated():
    bases = {0: ["a"], 1: ["b"], 2: ["c"]}
    good = {0: [[Fraction(1)]], 1: [[Fraction(0)]]}
    CochainComplex(FIELD_Q, bases, good)
    bad = {0: [[Fraction(1)]], 1: [[Fraction(1)]]}
    with pytest.raises(ComplexError):
        CochainComplex(FIELD_Q, bases, bad)


def test_zero_differential_cohomology():
    bases = {0: ["a", "b"], 1: ["c", "d"]}
    diffs = {0: [[FIELD_Q.zero] * 2 for _ in range(2)]}
    cx = CochainComplex(FIELD_Q, bases, diffs)
    assert cx.cohomology_dims() == {0: 2, 1: 2}


def test_representatives_are_cocycles():
    cx = ce_cochain_complex(so3(FIELD_Q))
    for n, (dim, reps) in cx.cohomology().items():
        for rep in reps:
            assert all(x == FIELD_Q.zero for x in cx.apply_d(n, rep))


def test_filtration_preservation_enforced():
    bases = {0: ["a"], 1: ["b"]}
    diffs = {0: [[Fraction(1)]]}
    cx = CochainComplex(FIELD_Q, bases, diffs)
    FilteredComplex(cx, {0: [0], 1: [1]})
    with pytest.raises(ComplexError):
        FilteredComplex(cx, {0: [1], 1: [0]})


class TestTorus:
    def test_e1_all_ones(self):
        ft = torus_model()
        assert ft.sheet(1).dims() == {(0, 0): 1, (0, 1): 1,
                                      (1, 0): 1, (1, 1): 1}

    def test_e2_and_cohomology(self):
        ft = torus_model()
        assert ft.sheet(2).dims() == {(0, 0): 1, (0, 1): 1,
                                      (1, 0): 1, (1, 1): 1}
        _, report = ft.e_infinity()
        assert report["collapse_page"] == 2
        assert report["cohomology_dims"] == {0: 1, 1: 2, 2: 1}
        assert report["converged"]

    def test_d1_vanishes(self):
        ft = torus_model()
        sheet = ft.sheet(1)
        for (p, q) in sheet.dims():
            mat = sheet.differential(p, q)
            assert all(x == FIELD_Q.zero for row in mat for x in row)


class TestStandardComplexes:
    def test_so3_dims(self, so3_presentation):
        cx = exterior_complex_from_q(so3_presentation.chart(),
                                     so3_presentation.hamiltonian())
        assert cx.cohomology_dims() == {0: 1, 1: 0, 2: 0, 3: 1}

    def test_abelian_dims(self, abelian2_presentation):
        cx = exterior_complex_from_q(abelian2_presentation.chart(),
                                     abelian2_presentation.hamiltonian())
        assert cx.cohomology_dims() == {0: 1, 1: 2, 2: 1}

    def test_double_truncated_dims(self, sl2_double_presentation):
        cx = exterior_complex_from_q(sl2_double_presentation.chart(),
                                     sl2_double_presentation.hamiltonian(),
                                     max_degree=2)
        assert [cx.dim(n) for n in (0, 1, 2)] == [1, 6, 15]
        d1 = cx.differential(1)
        assert any(x != FIELD_Q.zero for row in d1 for x in row)

    def test_base_rejected(self):
        from courant.presentations import (LieAlgebraPresentation,
                                           StandardCAData,
                                           standard_regular_build)
        f1 = LieAlgebraPresentation(1, {}, FIELD_Q)
        g0 = LieAlgebraPresentation(0, {}, FIELD_Q)
        pres, _ = standard_regular_build(
            StandardCAData(FIELD_Q, ["x"], f1, {(0, 0): 1}, g0, [],
                           {}, {}, {}))
        with pytest.raises(ComplexError):
            exterior_complex_from_q(pres.chart(), pres.hamiltonian())


class TestNaive:
    def test_matches_standard_orthonormal(self, so3_presentation):
        ncx = naive_complex(so3_presentation)
        scx = exterior_complex_from_q(so3_presentation.chart(),
                                      so3_presentation.hamiltonian())
        for n in range(3):
            assert ncx.differential(n) == scx.differential(n)

    def test_metric_identification(self, sl2_double_presentation):
        from itertools import combinations
        pres = sl2_double_presentation
        ncx = naive_complex(pres, max_degree=2)
        scx = exterior_complex_from_q(pres.chart(), pres.hamiltonian(),
                                      max_degree=2)
        rank = pres.rank

        def t_matrix(n):
            subsets = list(combinations(range(rank), n))
            rows = [[FIELD_Q.zero] * len(subsets) for _ in subsets]
            for c, a_set in enumerate(subsets):
                for r, b_set in enumerate(subsets):
                    rows[r][c] = linalg.det(
                        [[pres.metric[a][b] for b in b_set]
                         for a in a_set], OPS)
            return rows

        for n in range(0, 3):
            lhs = linalg.matrix_mul(t_matrix(n + 1), ncx.differential(n),
                                    OPS)
            rhs = linalg.matrix_mul(scx.differential(n), t_matrix(n), OPS)
            assert lhs == rhs

    def test_abelian_zero_differential(self, abelian2_presentation):
        ncx = naive_complex(abelian2_presentation)
        for n in range(2):
            assert all(x == FIELD_Q.zero
                       for row in ncx.differential(n) for x in row)

    def test_dims_match_standard(self, so3_presentation,
                                 sl2_double_presentation,
                                 split_double_presentation):
        for pres in (so3_presentation, sl2_double_presentation,
                     split_double_presentation):
            nd = naive_complex(pres, max_degree=4).cohomology_dims()
            sd = exterior_complex_from_q(pres.chart(), pres.hamiltonian(),
                                         max_degree=4).cohomology_dims()
            for degree in range(0, 5):
                assert nd.get(degree, 0) == sd.get(degree, 0)


def random_filtered_complex(rng, max_total=12, max_filt=3):
    """Random exact-differential complex with a compatible filtration:
    built from kill-pairs and singletons, then sheared by a
    filtration-compatible change of basis."""
    ndeg = rng.randint(2, 4)
    dims = [0] * ndeg
    pairs = []
    singles = []
    total = 0
    while total < rng.randint(2, max_total):
        if rng.random() < 0.6 and ndeg >= 2:
            n = rng.randrange(ndeg - 1)
            if total + 2 > max_total:
                break
            pairs.append((n, dims[n], dims[n + 1]))
            dims[n] += 1
            dims[n + 1] += 1
            total += 2
        else:
            n = rng.randrange(ndeg)
            singles.append((n, dims[n]))
            dims[n] += 1
            total += 1
    filt = {n: [0] * dims[n] for n in range(ndeg)}
    for (n, i, j) in pairs:
        pu = rng.randint(0, max_filt)
        filt[n][i] = pu
        filt[n + 1][j] = rng.randint(pu, max_filt)
    for (n, i) in singles:
        filt[n][i] = rng.randint(0, max_filt)
    diffs = {}
    for n in range(ndeg - 1):
        rows = [[FIELD_Q.zero] * dims[n] for _ in range(dims[n + 1])]
        for (m, i, j) in pairs:
            if m == n:
                rows[j][i] = Fraction(rng.choice([1, -1, 2]))
        diffs[n] = rows
    # filtration-compatible unipotent shear in each degree
    mats = {}
    for n in range(ndeg):
        k = dims[n]
        order = sorted(range(k), key=lambda t: -filt[n][t])
        t_mat = [[Fraction(1) if i == j else Fraction(0) for j in range(k)]
                 for i in range(k)]
        for pos_a in range(len(order)):
            for pos_b in range(pos_a):
                # new low-filtration vectors may gain higher-filtration
                # components: row = earlier (higher filt), column = later
                if rng.random() < 0.5:
                    t_mat[order[pos_b]][order[pos_a]] = \
                        Fraction(rng.randint(-2, 2))
        mats[n] = t_mat

    def inverse(m):
        k = len(m)
        aug = [list(m[i]) + [Fraction(1) if j == i else Fraction(0)
                             for j in range(k)] for i in range(k)]
        red, piv = linalg.rref(aug, OPS)
        assert piv[:k] == list(range(k))
        return [red[i][k:] for i in range(k)]

    new_diffs = {}
    for n in range(ndeg - 1):
        if dims[n] and dims[n + 1]:
            # columns transform by T_n, rows by T_{n+1}^{-1}
            m = linalg.matrix_mul(diffs[n], mats[n], OPS)
            m = linalg.matrix_mul(inverse(mats[n + 1]), m, OPS)
            new_diffs[n] = m
    bases = {n: ["v%d_%d" % (n, i) for i in range(dims[n])]
             for n in range(ndeg) if dims[n]}
    cx = CochainComplex(FIELD_Q, bases,
                        {n: m for n, m in new_diffs.items()
                         if n in bases and (n + 1) in bases})
    filtration = {n: list(filt[n]) for n in bases}
    return FilteredComplex(cx, filtration)


class TestRandomSpectral:
    def test_wait_shear_is_filtration_compatible(self):
        rng = random.Random(40)
        for _ in range(10):
            random_filtered_complex(rng)  # constructor validates

    def test_convergence_identity(self):
        rng = random.Random(41)
        for _ in range(30):
            fc = random_filtered_complex(rng)
            _, report = fc.e_infinity()
            assert report["converged"], report

    def test_page_dims_monotone(self):
        rng = random.Random(42)
        for _ in range(10):
            fc = random_filtered_complex(rng)
            prev = None
            for r in range(0, fc.max_filtration + 2):
                dims = fc.sheet(r).dims()
                if prev is not None:
                    for pq, d in dims.items():
                        assert d <= prev.get(pq, 0) or prev.get(pq, 0) == 0 \
                            or d <= prev[pq]
                prev = dims

    def test_dr_squares_to_zero_and_page_recursion(self):
        rng = random.Random(43)
        for _ in range(8):
            fc = random_filtered_complex(rng)
            for r in range(0, fc.max_filtration + 1):
                sheet = fc.sheet(r)
                nxt = fc.sheet(r + 1)
                for (p, q) in sheet.dims():
                    mat = sheet.differential(p, q)
                    src_dim = sheet.dims()[(p, q)]
                    tgt = (p + r, q + 1 - r)
                    # rank-nullity across the page recursion
                    if mat and mat[0]:
                        kdim = len(linalg.kernel_basis(mat, src_dim, OPS))
                    else:
                        kdim = src_dim
                    into = sheet.differential(p - r, q - 1 + r) \
                        if (p - r, q - 1 + r) in sheet.dims() else []
                    rank_in = linalg.rank(into, OPS) if into and into[0] \
                        else 0
                    assert nxt.dims().get((p, q), 0) == kdim - rank_in
                    # d_r o d_r = 0
                    if tgt in sheet.dims():
                        mat2 = sheet.differential(*tgt)
                        if mat2 and mat2[0] and mat and mat[0]:
                            comp = linalg.matrix_mul(mat2, mat, OPS)
                            assert all(x == FIELD_Q.zero
                                       for row in comp for x in row)


def test_deterministic_representatives(so3_presentation):
    cx1 = exterior_complex_from_q(so3_presentation.chart(),
                                  so3_presentation.hamiltonian())
    cx2 = exterior_complex_from_q(so3_presentation.chart(),
                                  so3_presentation.hamiltonian())
    assert cx1.cohomology() == cx2.cohomology()
