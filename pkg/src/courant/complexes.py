"""Finite cochain complexes, filtrations, and spectral sequences.

A complex stores labeled bases per degree and exact differential
matrices (column-vector convention: ``d[n]`` has one row per basis
vector of degree n+1).  d o d = 0 is validated at construction.

A filtered complex assigns each basis vector a filtration index p >= 0;
F^p A^n is the span of vectors with index >= p, so the decreasing
property is automatic and d(F^p) within F^p is checked vector by
vector.  Pages of the induced spectral sequence are computed directly
from

    Z_r^{p,q} = F^p A^{p+q}  intersect  d^{-1}(F^{p+r} A^{p+q+1})
    E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2})

with coset-representative bases recomputed per page.
"""

from __future__ import annotations

from itertools import combinations

from . import linalg
from .graded import GeneratorSet


class ComplexError(ValueError):
    pass


class CochainComplex:
    """Bounded complex over an exact field.

    bases: dict degree -> list of labels.  diffs: dict degree n -> matrix
    rows taking degree-n coordinates to degree-(n+1) coordinates.
    Degrees absent from ``bases`` are zero spaces.
    """

    def __init__(self, field, bases, diffs):
        self.field = field
        self.ops = linalg.ops_for_field(field)
        self.bases = {n: list(v) for n, v in bases.items() if v}
        self.diffs = {}
        for n, rows in diffs.items():
            rows = [[field.coerce(x) for x in row] for row in rows]
            src = self.dim(n)
            dst = self.dim(n + 1)
            if len(rows) != dst or any(len(r) != src for r in rows):
                raise ComplexError(
                    "differential at degree %d has shape %dx%d, expected "
                    "%dx%d" % (n, len(rows), len(rows[0]) if rows else 0,
                               dst, src))
            self.diffs[n] = rows
        for n in self.diffs:
            if n + 1 in self.diffs and self.dim(n) and self.dim(n + 2):
                comp = linalg.matrix_mul(self.diffs[n + 1], self.diffs[n],
                                         self.ops)
                if any(not self.ops.is_zero(x) for row in comp for x in row):
                    raise ComplexError(
                        "d o d != 0 between degrees %d and %d" % (n, n + 2))

    def degrees(self):
        return sorted(self.bases)

    def dim(self, n):
        return len(self.bases.get(n, ()))

    def differential(self, n):
        got = self.diffs.get(n)
        if got is not None:
            return got
        return [[self.field.zero] * self.dim(n)
                for _ in range(self.dim(n + 1))]

    def apply_d(self, n, vector):
        return linalg.matrix_apply(self.differential(n), vector, self.ops)

    def cocycles(self, n):
        if not self.dim(n):
            return []
        return linalg.kernel_basis(self.differential(n), self.dim(n),
                                   self.ops)

    def coboundaries(self, n):
        if not self.dim(n) or not self.dim(n - 1):
            return []
        return linalg.column_space_basis(self.differential(n - 1), self.ops)

    def cohomology(self):
        """Per-degree (dimension, representative cocycles)."""
        out = {}
        for n in self.degrees():
            z = self.cocycles(n)
            b = self.coboundaries(n)
            reps = linalg.quotient_representatives(z, b, self.ops)
            out[n] = (len(reps), reps)
        return out

    def cohomology_dims(self):
        return {n: dim for n, (dim, _) in self.cohomology().items()}


class FilteredComplex:
    """A complex plus a filtration index per basis vector."""

    def __init__(self, complex_, filtration):
        self.complex = complex_
        self.ops = complex_.ops
        self.filtration = {n: list(filtration[n]) for n in complex_.bases}
        for n in complex_.bases:
            if len(self.filtration.get(n, ())) != complex_.dim(n):
                raise ComplexError("filtration indices missing in degree %d"
                                   % n)
            if any(p < 0 for p in self.filtration[n]):
                raise ComplexError("filtration indices must be >= 0")
        self.max_filtration = max(
            (p for v in self.filtration.values() for p in v), default=0)
        for n in complex_.bases:
            d = complex_.differential(n)
            for j in range(complex_.dim(n)):
                p = self.filtration[n][j]
                for i in range(complex_.dim(n + 1)):
                    if not self.ops.is_zero(d[i][j]) \
                            and self.filtration.get(n + 1, [])[i] < p:
                        raise ComplexError(
                            "differential does not preserve the filtration "
                            "at degree %d, vector %d" % (n, j))

    def space(self, p, n):
        """Basis of F^p A^n as coordinate vectors."""
        dim = self.complex.dim(n)
        if dim == 0:
            return []
        if p <= 0:
            return linalg.identity_rows(dim, self.ops)
        out = []
        for j in range(dim):
            if self.filtration[n][j] >= p:
                v = [self.ops.zero] * dim
                v[j] = self.ops.one
                out.append(v)
        return out

    def z_space(self, r, p, q):
        """Z_r^{p,q} = F^p A^{p+q} n d^{-1}(F^{p+r} A^{p+q+1})."""
        n = p + q
        fp = self.space(p, n)
        if not fp:
            return []
        if r < 0:
            return fp
        target = self.space(p + r, n + 1)
        if self.complex.dim(n + 1) == 0:
            return fp
        pre = linalg.preimage_space(self.complex.differential(n), target,
                                    self.complex.dim(n), self.ops)
        return linalg.intersect_spaces(fp, pre, self.ops)

    def page_cell(self, r, p, q):
        """(representatives, denominator basis) for E_r^{p,q}."""
        num = self.z_space(r, p, q)
        if not num:
            return [], []
        den = list(self.z_space(r - 1, p + 1, q - 1))
        lower = self.z_space(r - 1, p - r + 1, q + r - 2)
        if lower and self.complex.dim(p + q):
            d_prev = self.complex.differential(p + q - 1)
            if self.complex.dim(p + q - 1):
                den += [linalg.matrix_apply(d_prev, v, self.ops)
                        for v in lower]
        den = linalg.span_basis(den, self.ops)
        reps = linalg.quotient_representatives(num, den, self.ops)
        return reps, den

    def _cells(self, r):
        cells = {}
        for n in self.complex.degrees():
            for p in range(0, self.max_filtration + 1):
                reps, den = self.page_cell(r, p, n - p)
                if reps:
                    cells[(p, n - p)] = (reps, den)
        return cells

    def sheet(self, r):
        return SpectralSheet(self, r, self._cells(r))

    def collapse_page(self):
        """Smallest r from which every later differential is forced to
        vanish because its source or target cell is empty."""
        r_bound = self.max_filtration + 1
        cells_at = {r: set(self._cells(r)) for r in range(r_bound + 1)}
        for r in range(r_bound + 1):
            ok = True
            for rp in range(r, r_bound + 1):
                live = cells_at[rp]
                for (p, q) in live:
                    if (p + rp, q + 1 - rp) in live:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return r
        return r_bound + 1

    def e_infinity(self):
        """(stable sheet, report) with the convergence identity checked."""
        r = self.collapse_page()
        sheet = self.sheet(r)
        h = self.complex.cohomology_dims()
        totals = {}
        for (p, q), reps in sheet.cells.items():
            totals[p + q] = totals.get(p + q, 0) + len(reps)
        degrees = sorted(set(h) | set(totals))
        converged = all(totals.get(n, 0) == h.get(n, 0) for n in degrees)
        report = {
            "collapse_page": r,
            "einf_dims_by_degree": {n: totals.get(n, 0) for n in degrees},
            "cohomology_dims": {n: h.get(n, 0) for n in degrees},
            "converged": converged,
        }
        return sheet, report


class SpectralSheet:
    """One page E_r with its induced differential d_r."""

    def __init__(self, filtered, r, cells):
        self.filtered = filtered
        self.r = r
        self.cells = {pq: reps for pq, (reps, den) in cells.items()}
        self._dens = {pq: den for pq, (reps, den) in cells.items()}

    def dims(self):
        return {pq: len(reps) for pq, reps in self.cells.items()}

    def differential(self, p, q):
        """Matrix of d_r: E_r^{p,q} -> E_r^{p+r,q+1-r} in the
        representative bases (empty target gives a 0-row matrix)."""
        src = self.cells.get((p, q), [])
        tgt_pq = (p + self.r, q + 1 - self.r)
        tgt = self.cells.get(tgt_pq, [])
        ops = self.filtered.ops
        n = p + q
        cols = []
        for z in src:
            dz = self.filtered.complex.apply_d(n, z)
            if not tgt:
                if any(not ops.is_zero(x) for x in dz):
                    _, den = self.filtered.page_cell(self.r, *tgt_pq)
                    if linalg.coords_in_span(den, dz, ops) is None:
                        raise ComplexError(
                            "d_r image escapes the computed page cell")
                cols.append([])
                continue
            den = self._dens[tgt_pq]
            coords = linalg.coords_in_span(list(tgt) + list(den), dz, ops)
            if coords is None:
                raise ComplexError("d_r image is not in the target cell")
            cols.append(coords[:len(tgt)])
        nrows = len(tgt)
        return [[cols[j][i] for j in range(len(src))] for i in range(nrows)]


# --- ready-made complexes ---------------------------------------------------


def exterior_complex_from_q(chart, H, max_degree=None):
    """Standard complex of an over-a-point chart: basis the xi-monomials,
    differential the matrix of Q = {H, .}."""
    from .poisson import q_operator
    if chart.base_names:
        raise ComplexError(
            "standard cohomology requires a presentation over a point "
            "(degree-0 coordinates make the function space infinite "
            "dimensional)")
    q = q_operator(chart, H)
    rank = chart.rank
    top = rank if max_degree is None else min(max_degree + 1, rank)
    bases = {}
    index_of = {}
    for n in range(0, top + 1):
        combos = list(combinations(range(rank), n))
        bases[n] = ["*".join(chart.xi_names[a] for a in combo) or "1"
                    for combo in combos]
        index_of[n] = {combo: k for k, combo in enumerate(combos)}
    xi_position = {chart.gs.index(name): a
                   for a, name in enumerate(chart.xi_names)}
    diffs = {}
    for n in range(0, top):
        combos_n = list(combinations(range(rank), n))
        rows = [[chart.field.zero] * len(combos_n)
                for _ in range(len(bases[n + 1]))]
        for j, combo in enumerate(combos_n):
            elem = chart.gs.one()
            for a in combo:
                elem = elem * chart.xi(a)
            image = q(elem)
            for mono, coeff in image.terms.items():
                idxs = tuple(xi_position[i] for i, _ in mono)
                rows[index_of[n + 1][idxs]][j] = coeff
        diffs[n] = rows
    return CochainComplex(chart.field, bases, diffs)


def naive_complex(pres, max_degree=None):
    """Over a point the anchor vanishes, so the whole exterior algebra of
    the frame carries the Cartan-formula differential: only the pairwise
    bracket terms survive,

      <d a, v_1 ^ .. ^ v_{n+1}> =
          sum_{i<j} (-1)^{i+j} <a, (v_i o v_j) ^ v_1 ^ ..i..j.. ^ v_{n+1}>

    with the pairing of wedges the determinant of pairwise pairings.
    Coefficients of d a are solved through the (invertible) Gram matrix.
    """
    if pres.base_names:
        raise ComplexError("the naive complex is computed over a point")
    field = pres.field
    ops = linalg.ops_for_field(field)
    rank = pres.rank
    top = rank if max_degree is None else min(max_degree + 1, rank)

    bracket = {}
    for i in range(rank):
        for j in range(rank):
            vec = [field.zero] * rank
            for d in range(rank):
                c = pres.structure.get((i, j, d))
                if c is None:
                    continue
                cv = c.constant_term()
                for t in range(rank):
                    gi = pres.metric_inv[d][t]
                    if gi:
                        vec[t] = vec[t] + cv * gi
            bracket[(i, j)] = vec

    def pair_wedges(left, right):
        """det of pairwise metric pairings; left entries may be linear
        combinations (vectors), right entries are basis indices."""
        rows = []
        for u in left:
            row = []
            for b in right:
                if isinstance(u, int):
                    row.append(pres.metric[u][b])
                else:
                    row.append(sum((u[a] * pres.metric[a][b]
                                    for a in range(rank)), field.zero))
            rows.append(row)
        return linalg.det(rows, ops)

    bases = {}
    combos = {}
    for n in range(0, top + 1):
        combos[n] = list(combinations(range(rank), n))
        bases[n] = ["^".join(pres.labels[a] for a in combo) or "1"
                    for combo in combos[n]]
    diffs = {}
    for n in range(0, top):
        gram = [[pair_wedges(list(wa), list(wb)) for wb in combos[n + 1]]
                for wa in combos[n + 1]]
        rows = [[field.zero] * len(combos[n])
                for _ in range(len(combos[n + 1]))]
        for col, alpha in enumerate(combos[n]):
            pairings = []
            for wedge in combos[n + 1]:
                acc = field.zero
                for i in range(n + 1):
                    for j in range(i + 1, n + 1):
                        rest = [wedge[t] for t in range(n + 1)
                                if t != i and t != j]
                        # 1-based (-1)^{i+j} equals 0-based parity of i+j
                        val = pair_wedges(
                            [bracket[(wedge[i], wedge[j])]] + rest,
                            list(alpha))
                        if val:
                            acc = acc + (val if (i + j) % 2 == 0 else -val)
                pairings.append(acc)
            coords = linalg.solve(gram, pairings, len(combos[n + 1]), ops)
            if coords is None:
                raise ComplexError("wedge Gram matrix is singular")
            for r, c in enumerate(coords):
                rows[r][col] = c
        diffs[n] = rows
    return CochainComplex(field, bases, diffs)


def naive_ideal_filtration(complex_):
    """Filtration of an exterior complex by fiber degree: over a point the
    whole fiber sits in the kernel of the anchor, so the ideal it generates
    filters each degree by the monomial's fiber degree."""
    filtration = {n: [n] * complex_.dim(n) for n in complex_.bases}
    return FilteredComplex(complex_, filtration)


def ce_cochain_complex(algebra, max_degree=None):
    """Cochain complex of constant alternating forms on a
    finite-dimensional Lie algebra (structure-constant differential)."""
    from .presentations import AlternatingForm
    field = algebra.field
    dim = algebra.dim
    top = dim if max_degree is None else min(max_degree + 1, dim)
    bases = {}
    subsets = {}
    for n in range(0, top + 1):
        subsets[n] = list(combinations(range(dim), n))
        bases[n] = ["^".join("w%d" % (a + 1) for a in combo) or "1"
                    for combo in subsets[n]]
    diffs = {}
    for n in range(0, top):
        index = {c: k for k, c in enumerate(subsets[n + 1])}
        rows = [[field.zero] * len(subsets[n])
                for _ in range(len(subsets[n + 1]))]
        for col, combo in enumerate(subsets[n]):
            form = AlternatingForm(dim, n, {combo: field.one}, field)
            image = algebra.ce_differential(form)
            for idx, v in image.entries.items():
                rows[index[idx]][col] = v
        diffs[n] = rows
    return CochainComplex(field, bases, diffs)


def torus_model(field=None):
    """Finite model of the two-torus de Rham complex: one odd generator
    per circle factor, zero differential, filtered by the second factor's
    form degree."""
    from .scalars import FIELD_Q
    field = field or FIELD_Q
    bases = {0: ["1"], 1: ["tA", "tB"], 2: ["tA*tB"]}
    diffs = {0: [[field.zero], [field.zero]],
             1: [[field.zero, field.zero]]}
    cx = CochainComplex(field, bases, diffs)
    filtration = {0: [0], 1: [0, 1], 2: [1]}
    return FilteredComplex(cx, filtration)


def complex_from_elements(field, bases_elements, diff_fn, labels=None):
    """Complex from per-degree lists of algebra elements and a linear map.

    ``bases_elements``: dict degree -> list of Elements forming a basis;
    ``diff_fn``: Element -> Element raising degree by one.  Matrices are
    extracted by exact coordinate solving.
    """
    ops = linalg.ops_for_field(field)
    degrees = sorted(bases_elements)
    bases = {}
    for n in degrees:
        elems = bases_elements[n]
        bases[n] = (labels[n] if labels else
                    [e.render() for e in elems])
    diffs = {}
    for n in degrees:
        if n + 1 not in bases_elements:
            continue
        target = bases_elements[n + 1]
        monos = sorted({m for e in target for m in e.terms})
        mono_idx = {m: k for k, m in enumerate(monos)}
        tmat = [[field.zero] * len(target) for _ in monos]
        for col, e in enumerate(target):
            for m, c in e.terms.items():
                tmat[mono_idx[m]][col] = c
        rows = [[field.zero] * len(bases_elements[n])
                for _ in range(len(target))]
        for j, e in enumerate(bases_elements[n]):
            img = diff_fn(e)
            vec = [field.zero] * len(monos)
            for m, c in img.terms.items():
                if m not in mono_idx:
                    raise ComplexError(
                        "image leaves the declared degree-%d basis" % (n + 1))
                vec[mono_idx[m]] = c
            coords = linalg.solve(tmat, vec, len(target), ops)
            if coords is None:
                raise ComplexError(
                    "image leaves the declared degree-%d basis" % (n + 1))
            for i, c in enumerate(coords):
                rows[i][j] = c
        diffs[n] = rows
    return CochainComplex(field, bases, diffs)
