"""Graded Poisson brackets and the degree -2 realization chart.

The chart for a metric vector bundle presentation has coordinates x^i of
degree 0, fiber coordinates xi^a of degree 1 and momenta p_i of degree 2
with the canonical bracket {p_i, x^j} = delta, {xi^a, xi^b} = g^{ab}.
A cubic hamiltonian H = rho^i_a(x) xi^a p_i - 1/6 C_abc(x) xi^a xi^b xi^c
encodes an anchored bracket structure; Q = {H, .} raises degree by one
and squares to zero exactly when {H, H} = 0.

Sign conventions (degree d bracket):
  {f, gh} = {f,g} h + (-1)^{(|f|+d)|g|} g {f,h}
  {g, f}  = -(-1)^{(|f|+d)(|g|+d)} {f, g}
from which {fh, g} = (-1)^{(|g|+d)|h|} {f,g} h + f {h,g}.
"""

from __future__ import annotations

from .graded import (AmbientMismatchError, Element, GeneratorSet,
                     GradingError, monomial_degree)
from .linalg import identity_rows, ops_for_field, rref


class PoissonStructure:
    """Bracket of fixed degree, given on generator pairs, extended as a
    biderivation."""

    def __init__(self, ambient, bracket_degree, generator_brackets):
        self.ambient = ambient
        self.degree = bracket_degree
        self._table = {}
        for (i, j), elem in generator_brackets.items():
            ii = ambient.index(i) if isinstance(i, str) else i
            jj = ambient.index(j) if isinstance(j, str) else j
            if not elem.is_zero():
                self._table[(ii, jj)] = elem
        self._gen_cache = {}

    def _gen_pair(self, i, j):
        got = self._table.get((i, j))
        if got is not None:
            return got
        swapped = self._table.get((j, i))
        if swapped is not None:
            gs = self.ambient
            di = gs.degree_of_index(i) + self.degree
            dj = gs.degree_of_index(j) + self.degree
            sign = -1 if (di * dj) % 2 == 0 else 1
            return swapped.scale(sign) if sign != 1 else swapped
        return self.ambient.zero()

    def bracket(self, a, b):
        if a.ambient != self.ambient or b.ambient != self.ambient:
            raise AmbientMismatchError("bracket arguments ambient mismatch")
        out = self.ambient.zero()
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                part = self._mono_mono(m1, m2)
                if not part.is_zero():
                    out = out + part.scale(c1 * c2)
        return out

    def _mono_mono(self, m, n):
        gs = self.ambient
        if not m or not n:
            return gs.zero()
        i, e = m[0]
        if len(m) == 1 and e == 1:
            return self._gen_mono(i, n)
        # split m = f h with f the first generator (power one)
        f = ((i, 1),)
        h = ((i, e - 1),) + m[1:] if e > 1 else m[1:]
        sign = 1
        if (monomial_degree(gs, n) + self.degree) % 2 \
                and monomial_degree(gs, h) % 2:
            sign = -1
        left = self._gen_mono(i, n) * Element(gs, {h: gs.field.one})
        right = Element(gs, {f: gs.field.one}) * self._mono_mono(h, n)
        out = left.scale(sign) + right if sign != 1 else left + right
        return out

    def _gen_mono(self, i, n):
        cached = self._gen_cache.get((i, n))
        if cached is not None:
            return cached
        gs = self.ambient
        if not n:
            out = gs.zero()
        else:
            j, e = n[0]
            if len(n) == 1 and e == 1:
                out = self._gen_pair(i, j)
            else:
                k = ((j, 1),)
                rest = ((j, e - 1),) + n[1:] if e > 1 else n[1:]
                sign = 1
                if (gs.degree_of_index(i) + self.degree) % 2 \
                        and gs.degree_of_index(j) % 2:
                    sign = -1
                left = self._gen_pair(i, j) * Element(gs, {rest: gs.field.one})
                right = Element(gs, {k: gs.field.one}) * self._gen_mono(i, rest)
                out = left + right.scale(sign) if sign != 1 else left + right
        self._gen_cache[(i, n)] = out
        return out


def invert_matrix(rows, field):
    ops = ops_for_field(field)
    n = len(rows)
    aug = [list(rows[i]) + identity_rows(n, ops)[i] for i in range(n)]
    red, pivots = rref(aug, ops)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is not invertible")
    return [red[i][n:] for i in range(n)]


class RealizationChart:
    """Degree-2 symplectic chart hosting a cubic hamiltonian.

    base_names give the degree-0 coordinates; the fiber coordinates are
    xi1..xi<rank>; each base coordinate x has a degree-2 momentum p_x.
    """

    def __init__(self, base_names, rank, metric, field):
        self.base_names = tuple(base_names)
        self.rank = rank
        self.field = field
        self.metric = tuple(tuple(field.coerce(v) for v in row)
                            for row in metric)
        if len(self.metric) != rank or any(len(r) != rank
                                           for r in self.metric):
            raise ValueError("metric shape does not match rank")
        for a in range(rank):
            for b in range(a):
                if self.metric[a][b] != self.metric[b][a]:
                    raise ValueError("metric must be symmetric")
        self.metric_inv = tuple(tuple(r) for r in
                                invert_matrix(self.metric, field))
        width = len(str(rank))  # keeps lexicographic = numeric order
        self.xi_names = tuple("xi%0*d" % (width, a + 1) for a in range(rank))
        self.p_names = tuple("p_%s" % x for x in self.base_names)
        gens = ([(x, 0) for x in self.base_names]
                + [(n, 1) for n in self.xi_names]
                + [(n, 2) for n in self.p_names])
        self.gs = GeneratorSet(gens, field)
        table = {}
        for i, x in enumerate(self.base_names):
            table[(self.gs.index(self.p_names[i]), self.gs.index(x))] = \
                self.gs.one()
        for a in range(rank):
            for b in range(a, rank):
                v = self.metric_inv[a][b]
                if v:
                    table[(self.gs.index(self.xi_names[a]),
                           self.gs.index(self.xi_names[b]))] = self.gs.scalar(v)
        self.poisson = PoissonStructure(self.gs, -2, table)

    def bracket(self, a, b):
        return self.poisson.bracket(a, b)

    def xi(self, a):
        return self.gs.gen(self.xi_names[a])

    def x(self, i):
        return self.gs.gen(self.base_names[i])

    def p(self, i):
        return self.gs.gen(self.p_names[i])

    def embed_poly(self, poly):
        """Pull a polynomial over the base ring into the chart algebra."""
        return poly.substitute(self.gs)

    def section_element(self, coeffs):
        """The odd linear function of the section with frame coefficients
        psi^a: returns g_ab psi^a xi^b."""
        out = self.gs.zero()
        for a, ca in enumerate(coeffs):
            if isinstance(ca, Element):
                pa = self.embed_poly(ca)
            else:
                pa = self.gs.scalar(ca)
            if pa.is_zero():
                continue
            for b in range(self.rank):
                v = self.metric[a][b]
                if v:
                    out = out + pa.scale(v) * self.xi(b)
        return out

    def element_section(self, elem):
        """Frame coefficients psi^a of a degree-1 element (inverse of
        section_element)."""
        if not elem.is_homogeneous(1) and not elem.is_zero():
            raise GradingError("not a section: element is not of degree 1")
        lowered = [self.gs.zero() for _ in range(self.rank)]
        xi_idx = {self.gs.index(n): a for a, n in enumerate(self.xi_names)}
        for mono, coeff in elem.terms.items():
            rest = []
            hit = None
            for idx, e in mono:
                if idx in xi_idx:
                    hit = xi_idx[idx]
                else:
                    rest.append((idx, e))
            if hit is None:
                raise GradingError("degree-1 element with no fiber factor")
            lowered[hit] = lowered[hit] + Element(
                self.gs, {tuple(rest): coeff})
        return [sum((lowered[b].scale(self.metric_inv[a][b])
                     for b in range(self.rank)), self.gs.zero())
                for a in range(self.rank)]


def hamiltonian(chart, anchor, structure):
    """Cubic hamiltonian rho^i_a xi^a p_i - 1/6 C_abc xi^a xi^b xi^c.

    anchor: map (a, i) -> polynomial over the base ring; structure:
    map (a, b, c) -> polynomial.  Index positions are 0-based.
    """
    gs = chart.gs
    H = gs.zero()
    for (a, i), poly in anchor.items():
        p = chart.embed_poly(poly)
        if not p.is_zero():
            H = H + p * chart.xi(a) * chart.p(i)
    sixth = gs.field.coerce(1) / gs.field.coerce(6)
    for (a, b, c), poly in structure.items():
        p = chart.embed_poly(poly)
        if not p.is_zero():
            H = H - (p * chart.xi(a) * chart.xi(b) * chart.xi(c)).scale(sixth)
    if not H.is_zero() and H.degree() != 3:
        raise GradingError("hamiltonian assembled with degree != 3")
    return H


def q_operator(chart, H):
    """The degree +1 operator f -> {H, f}."""
    if not H.is_zero() and not H.is_homogeneous(3):
        raise GradingError("Q requires a homogeneous degree-3 hamiltonian")

    def q(f):
        return chart.bracket(H, f)

    return q


def self_bracket_residual(chart, H):
    """{H, H}; zero exactly when Q squares to zero."""
    return chart.bracket(H, H)


def derived_bracket(chart, H, phi, psi):
    """{{H, phi}, psi} on degree-1 elements: the anchored bracket of the
    sections phi and psi encode."""
    for arg in (phi, psi):
        if not arg.is_zero() and not arg.is_homogeneous(1):
            raise GradingError("derived bracket arguments must have degree 1")
    return chart.bracket(chart.bracket(H, phi), psi)


def anchor_apply(chart, H, psi, f):
    """{{psi, H}, f}: the vector field of the section psi applied to the
    degree-0 function f."""
    if not psi.is_zero() and not psi.is_homogeneous(1):
        raise GradingError("anchor argument must have degree 1")
    if not f.is_zero() and not f.is_homogeneous(0):
        raise GradingError("anchor acts on degree-0 functions")
    return chart.bracket(chart.bracket(psi, H), f)
