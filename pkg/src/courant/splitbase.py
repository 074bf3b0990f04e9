"""Split-base cohomology models: free cohomology algebras over a
polynomial transverse ring, the transgression map, and the resulting
standard-cohomology ranks.

A model consists of a free graded-commutative algebra on generators of
positive degree (the leafwise cohomology), polynomial variables t_1..t_m
(the transverse functions), and a degree-3 element with polynomial
coefficients (the structure form).  The transgression sends the k-th
coordinate vector field to the t_k-derivative of the structure form; the
cohomology in each total degree is

    H^n = sum over p + q = n of  (degree-p part) / (ideal of the
          transgression image)  tensor  S^{q/2}(kernel of the
          transgression),   q even,

computed as module ranks over the polynomial ring.  Ranks are generic
(fraction-field) ranks; over one variable, freeness and torsion are
decided exactly by Smith normal form, otherwise they are reported with a
caveat flag.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

from .graded import (Element, GeneratorSet, coordinate_derivation,
                     exact_div, monomial_degree, parse_element)
from .linalg import bareiss_echelon, ops_for_polynomials


class SplitBaseError(ValueError):
    pass


class SplitBaseModel:
    def __init__(self, naive_generators, n_vars, severa=None, field=None):
        from .scalars import FIELD_Q
        self.field = field or FIELD_Q
        self.naive_generators = tuple((str(n), int(d))
                                      for n, d in naive_generators)
        for name, degree in self.naive_generators:
            if degree < 1:
                raise SplitBaseError(
                    "naive generators must have positive degree")
        self.n_vars = n_vars
        self.t_names = tuple("t%d" % (k + 1) for k in range(n_vars))
        gens = list(self.naive_generators) + [(t, 0) for t in self.t_names]
        self.gs = GeneratorSet(gens, self.field, allowed_degrees=None)
        if severa is None:
            self.severa = self.gs.zero()
        elif isinstance(severa, str):
            self.severa = parse_element(severa, self.gs)
        else:
            self.severa = severa.substitute(self.gs)
        if not self.severa.is_zero() and not self.severa.is_homogeneous(3):
            raise SplitBaseError("structure form must have degree 3")

    # --- bases -------------------------------------------------------------

    def naive_monomials(self, degree):
        """Canonical monomials of the naive algebra in a given degree."""
        gens = [(self.gs.index(n), d) for n, d in self.naive_generators]
        out = []

        def rec(pos, remaining, acc):
            if remaining == 0:
                out.append(tuple(acc))
                return
            if pos == len(gens):
                return
            idx, d = gens[pos]
            max_e = 1 if d % 2 else remaining // d
            for e in range(0, max_e + 1):
                if e * d > remaining:
                    break
                if e:
                    acc.append((idx, e))
                    rec(pos + 1, remaining - e * d, acc)
                    acc.pop()
                else:
                    rec(pos + 1, remaining, acc)

        rec(0, degree, [])
        return sorted(out)

    def naive_rank(self, degree):
        return len(self.naive_monomials(degree))

    def split_poly_coefficients(self, element, degree):
        """Write a naive-degree-homogeneous element as a vector of
        polynomial coefficients over the degree-d monomial basis."""
        basis = self.naive_monomials(degree)
        pos = {m: k for k, m in enumerate(basis)}
        naive_idx = {self.gs.index(n) for n, _ in self.naive_generators}
        out = [self.gs.zero() for _ in basis]
        for mono, coeff in element.terms.items():
            npart = tuple((i, e) for i, e in mono if i in naive_idx)
            tpart = tuple((i, e) for i, e in mono if i not in naive_idx)
            if npart not in pos:
                raise SplitBaseError("element leaves the declared degree")
            out[pos[npart]] = out[pos[npart]] + Element(
                self.gs, {tpart: coeff})
        return out

    # --- transgression ------------------------------------------------------

    def transgression(self):
        """Matrix of the transgression over the polynomial ring: one
        column per transverse coordinate vector field, rows over the
        degree-3 naive monomial basis."""
        cols = []
        for t in self.t_names:
            image = coordinate_derivation(self.gs, t).apply(self.severa)
            cols.append(self.split_poly_coefficients(image, 3))
        basis = self.naive_monomials(3)
        matrix = [[cols[k][r] for k in range(self.n_vars)]
                  for r in range(len(basis))]
        return TransgressionMap(self, matrix)


class TransgressionMap:
    """Polynomial-linear map from transverse vector fields to the
    degree-3 part of the naive algebra."""

    def __init__(self, model, matrix):
        self.model = model
        self.matrix = matrix          # rows: degree-3 monomials
        self.ops = ops_for_polynomials(model.gs)

    def is_zero(self):
        return all(p.is_zero() for row in self.matrix for p in row)

    def generic_rank(self):
        rows = [row for row in self.matrix]
        if not rows or not rows[0]:
            return 0
        return len(bareiss_echelon(rows, self.ops)[1])

    def kernel_generic_rank(self):
        return self.model.n_vars - self.generic_rank()

    def image_elements(self):
        """The transgression of each coordinate field, as elements."""
        out = []
        basis = self.model.naive_monomials(3)
        for k in range(self.model.n_vars):
            acc = self.model.gs.zero()
            for r, mono in enumerate(basis):
                p = self.matrix[r][k]
                if not p.is_zero():
                    acc = acc + p * Element(self.model.gs,
                                            {mono: self.model.field.one})
            out.append(acc)
        return out

    def render(self):
        basis = self.model.naive_monomials(3)
        labels = [Element(self.model.gs,
                          {m: self.model.field.one}).render()
                  for m in basis]
        return {"rows": labels,
                "matrix": [[p.render() for p in row]
                           for row in self.matrix]}


# --- univariate Smith analysis ----------------------------------------------


def _poly_degree_univar(p):
    if p.is_zero():
        return -1
    return max(sum(e for _, e in m) for m in p.terms)


def _univar_divmod(a, b):
    """Polynomial division with remainder in one variable."""
    gs = a.ambient
    q = gs.zero()
    r = a
    db = _poly_degree_univar(b)
    if db < 0:
        raise ZeroDivisionError("division by zero polynomial")
    bm = max(b.terms, key=lambda m: sum(e for _, e in m))
    bc = b.terms[bm]
    while not r.is_zero() and _poly_degree_univar(r) >= db:
        rm = max(r.terms, key=lambda m: sum(e for _, e in m))
        rc = r.terms[rm]
        shift = sum(e for _, e in rm) - db
        if shift == 0:
            mono = ()
        else:
            var = rm[0][0]
            mono = ((var, shift),)
        qt = Element(gs, {mono: rc / bc})
        q = q + qt
        r = r - qt * b
    return q, r


def _univar_gcd(a, b):
    while not b.is_zero():
        _, r = _univar_divmod(a, b)
        a, b = b, r
    if a.is_zero():
        return a
    lead = max(a.terms, key=lambda m: sum(e for _, e in m))
    return a.scale(1 / a.terms[lead]) if a.terms[lead] != 1 else a


def smith_invariant_factors(matrix_rows):
    """Invariant factors of a matrix over a one-variable polynomial
    ring; monic, possibly trailing zeros omitted."""
    m = [[p for p in row] for row in matrix_rows]
    if not m or not m[0]:
        return []
    factors = []
    top = 0
    while top < len(m) and top < len(m[0]):
        best = None
        for i in range(top, len(m)):
            for j in range(top, len(m[0])):
                if not m[i][j].is_zero():
                    d = _poly_degree_univar(m[i][j])
                    if best is None or d < best[0]:
                        best = (d, i, j)
        if best is None:
            break
        _, bi, bj = best
        m[top], m[bi] = m[bi], m[top]
        for row in m:
            row[top], row[bj] = row[bj], row[top]
        dirty = True
        while dirty:
            dirty = False
            for i in range(top + 1, len(m)):
                if m[i][top].is_zero():
                    continue
                q, r = _univar_divmod(m[i][top], m[top][top])
                m[i] = [a - q * b for a, b in zip(m[i], m[top])]
                if not r.is_zero():
                    m[top], m[i] = m[i], m[top]
                    dirty = True
            for j in range(top + 1, len(m[0])):
                if m[top][j].is_zero():
                    continue
                q, r = _univar_divmod(m[top][j], m[top][top])
                for i in range(len(m)):
                    m[i][j] = m[i][j] - q * m[i][top]
                if not r.is_zero():
                    for i in range(len(m)):
                        m[i][top], m[i][j] = m[i][j], m[i][top]
                    dirty = True
        piv = m[top][top]
        lead = max(piv.terms, key=lambda mm: sum(e for _, e in mm))
        factors.append(piv.scale(1 / piv.terms[lead]))
        top += 1
    return factors


# --- the cohomology formula ---------------------------------------------------


def _relation_matrix(model, tmap, degree):
    """Rows over the degree-d naive monomial basis; columns generate the
    degree-d slice of the ideal of the transgression image."""
    basis_d = model.naive_monomials(degree)
    images = [e for e in tmap.image_elements() if not e.is_zero()]
    cols = []
    if degree >= 3 and images:
        for mono in model.naive_monomials(degree - 3):
            mult = Element(model.gs, {mono: model.field.one})
            for img in images:
                prod = mult * img
                if prod.is_zero():
                    continue
                cols.append(model.split_poly_coefficients(prod, degree))
    rows = [[cols[c][r] for c in range(len(cols))]
            for r in range(len(basis_d))]
    return rows, len(basis_d)


def quotient_rank(model, tmap, degree):
    """(generic rank, freeness flag) of the degree-d quotient by the
    transgression ideal."""
    rows, nbasis = _relation_matrix(model, tmap, degree)
    if nbasis == 0:
        return 0, "free"
    if not rows or not rows[0]:
        return nbasis, "free"
    rel_rank = len(bareiss_echelon(rows, tmap.ops)[1])
    rank = nbasis - rel_rank
    if model.n_vars == 1:
        factors = smith_invariant_factors(rows)
        nonunit = [f for f in factors if _poly_degree_univar(f) > 0]
        flag = "free" if not nonunit else "torsion"
    elif rel_rank == 0:
        flag = "free"
    else:
        flag = "undetermined"
    return rank, flag


def kernel_rank_report(model, tmap):
    """Generic rank of the kernel plus a freeness note: over one
    variable the kernel of a map from a free module is free; otherwise
    the rank is generic and the locus where it jumps is not resolved."""
    kr = tmap.kernel_generic_rank()
    if model.n_vars <= 1 or tmap.is_zero() or kr == 0:
        flag = "free"
    else:
        flag = "generic-rank-only"
    return kr, flag


def _sym_rank(kernel_rank, half_q):
    if kernel_rank == 0:
        return 1 if half_q == 0 else 0
    return comb(kernel_rank + half_q - 1, half_q)


def split_cohomology(model, max_degree):
    """Per-degree ranks of the total cohomology, with structure report.

    Ranks are free-module ranks over the polynomial coefficient ring;
    note that every column keeps its polynomial-ring factor, including
    degree zero, so rank 1 there means one free generator over that
    ring, not over the scalars.
    """
    tmap = model.transgression()
    kr, kflag = kernel_rank_report(model, tmap)
    q_ranks = {}
    q_flags = {}
    for p in range(0, max_degree + 1):
        q_ranks[p], q_flags[p] = quotient_rank(model, tmap, p)
    ranks = []
    breakdown = {}
    for n in range(0, max_degree + 1):
        total = 0
        cells = []
        for q in range(0, n + 1, 2):
            p = n - q
            r = q_ranks[p] * _sym_rank(kr, q // 2)
            if r:
                cells.append({"p": p, "q": q, "rank": r})
            total += r
        ranks.append(total)
        breakdown[n] = cells
    report = {
        "ranks": ranks,
        "breakdown": breakdown,
        "kernel_rank": kr,
        "kernel_flag": kflag,
        "quotient_flags": q_flags,
        "transgression": tmap.render(),
        "notes": [
            "ranks are free-module ranks over the transverse polynomial "
            "ring; torsion or undetermined quotients are flagged, "
            "not resolved",
        ],
    }
    if any(flag != "free" for flag in q_flags.values()) or kflag != "free":
        report["notes"].append(
            "a non-free quotient or kernel was flagged; generic ranks "
            "are reported")
    return report


def sheet_tables(model, max_degree):
    """Dimension tables of the middle and stable pages.

    The middle page is the naive algebra tensor the symmetric
    multivector table; the next differential is the derivation extending
    the transgression; the page after collapses for degree reasons, and
    the table reported as stable is computed from the quotient and
    kernel data.
    """
    tmap = model.transgression()
    kr, _ = kernel_rank_report(model, tmap)
    e2 = {}
    e4 = {}
    for p in range(0, max_degree + 1):
        n_p = model.naive_rank(p)
        qr, _ = quotient_rank(model, tmap, p)
        for q in range(0, max_degree + 1 - p, 2):
            if n_p:
                r2 = n_p * _sym_rank(model.n_vars, q // 2)
                if r2:
                    e2[(p, q)] = r2
            r4 = qr * _sym_rank(kr, q // 2)
            if r4:
                e4[(p, q)] = r4
    # degree-reason collapse: generators sit in q = 0 and (p, q) = (0, 2);
    # the next differential has bidegree (4, -3), whose target leaves the
    # populated quadrant from both generator families.
    collapse_ok = all(q - 3 < 0 for (p, q) in ((0, 0), (0, 2)))
    return {
        "e2": {"%d,%d" % k: v for k, v in sorted(e2.items())},
        "e3_equals_e2": True,
        "e4": {"%d,%d" % k: v for k, v in sorted(e4.items())},
        "d3": tmap.render(),
        "collapse_at_4": collapse_ok,
    }


def alekseev_model(group_rank, f_poly, field=None):
    """Compact-group model: generators of the leaf cohomology are one
    degree-3 class and exterior classes of degree 2k-1 for k = 2..rank;
    the structure form is the degree-3 class times a polynomial in one
    transverse variable."""
    from .scalars import FIELD_Q
    field = field or FIELD_Q
    if group_rank < 1:
        raise SplitBaseError("group rank must be at least 1")
    gens = [("C", 3)] + [("x%d" % k, 2 * k - 1)
                         for k in range(2, group_rank + 1)]
    model = SplitBaseModel(gens, 1, field=field)
    f = parse_element(str(f_poly), model.gs) if isinstance(f_poly, str) \
        else model.gs.scalar(f_poly)
    model.severa = model.gs.gen("C") * f
    if not model.severa.is_zero() and not model.severa.is_homogeneous(3):
        raise SplitBaseError("structure form must have degree 3")
    return model
