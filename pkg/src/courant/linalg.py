"""Exact linear algebra over Q, Q(i), and polynomial coefficient rings.

Elimination is fraction-free (Bareiss-style) with a deterministic pivot
rule: scan columns left to right, take the first row with a nonzero
entry.  Repeated runs on equal input produce identical output, so
representative bases are stable across runs and platforms.

Vectors are lists of scalars; a matrix is a list of rows; a subspace is
represented by a list of spanning vectors.
"""

from __future__ import annotations

from fractions import Fraction

from .graded import Element, exact_div as poly_exact_div


class FieldOps:
    """Arithmetic hooks so elimination runs over scalars or polynomials."""

    def __init__(self, zero, one, is_field=True, div=None):
        self.zero = zero
        self.one = one
        self.is_field = is_field
        self.div = div or (lambda a, b: a / b)

    def is_zero(self, a):
        return a == self.zero if not isinstance(a, Element) else a.is_zero()


def ops_for_field(field):
    return FieldOps(field.zero, field.one)


def ops_for_polynomials(gs):
    return FieldOps(gs.zero(), gs.one(), is_field=False,
                    div=poly_exact_div)


def bareiss_echelon(rows, ops):
    """Fraction-free row echelon form.

    Returns (echelon_rows, pivot_cols).  Works over any integral domain
    whose exact division is supplied by ``ops.div``; over a field the
    divisions are ordinary.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    prev = ops.one
    r = 0
    for c in range(ncols):
        pr = None
        for k in range(r, len(m)):
            if not ops.is_zero(m[k][c]):
                pr = k
                break
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        for k in range(r + 1, len(m)):
            for j in range(ncols):
                if j == c:
                    continue
                m[k][j] = ops.div(piv * m[k][j] - m[k][c] * m[r][j], prev)
            m[k][c] = ops.zero
        prev = piv
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, ops):
    return len(bareiss_echelon(rows, ops)[1])


def rref(rows, ops):
    """Reduced row echelon form over a field: unit pivots, cleared columns.

    Returns (nonzero_rows, pivot_cols); the rows are a canonical basis of
    the row space.
    """
    if not ops.is_field:
        raise ValueError("rref requires field coefficients")
    ech, pivots = bareiss_echelon(rows, ops)
    for r, c in enumerate(pivots):
        piv = ech[r][c]
        ech[r] = [x / piv for x in ech[r]]
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        for k in range(r):
            f = ech[k][c]
            if not ops.is_zero(f):
                ech[k] = [a - f * b for a, b in zip(ech[k], ech[r])]
    return ech, pivots


def span_basis(vectors, ops):
    """Canonical (reduced echelon) basis of the span of the vectors."""
    vectors = [v for v in vectors if any(not ops.is_zero(x) for x in v)]
    if not vectors:
        return []
    return rref(vectors, ops)[0]


def reduce_mod(basis_rows, pivots, v, ops):
    """Subtract the span of a reduced-echelon basis from v."""
    out = list(v)
    for row, c in zip(basis_rows, pivots):
        f = out[c]
        if not ops.is_zero(f):
            out = [a - f * b for a, b in zip(out, row)]
    return out


def kernel_basis(matrix_rows, ncols, ops):
    """Canonical basis of {v : M v = 0} (column-vector convention)."""
    if not matrix_rows:
        return [[ops.one if j == k else ops.zero for j in range(ncols)]
                for k in range(ncols)]
    red, pivots = rref(matrix_rows, ops)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    out = []
    for fc in free:
        v = [ops.zero] * ncols
        v[fc] = ops.one
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        out.append(v)
    return out


def solve(matrix_rows, b, ncols, ops):
    """One solution of M x = b, or None when inconsistent."""
    aug = [list(row) + [bv] for row, bv in zip(matrix_rows, b)]
    red, pivots = rref(aug, ops)
    x = [ops.zero] * ncols
    for r, c in enumerate(pivots):
        if c == ncols:
            return None
        x[c] = red[r][ncols]
    return x


def coords_in_span(basis_vectors, v, ops):
    """Coordinates of v in the given spanning set, or None if outside."""
    if not basis_vectors:
        return None if any(not ops.is_zero(x) for x in v) else []
    cols = len(basis_vectors)
    rows = [[basis_vectors[k][i] for k in range(cols)]
            for i in range(len(v))]
    return solve(rows, v, cols, ops)


def matrix_apply(matrix_rows, v, ops):
    return [sum((row[j] * v[j] for j in range(len(v))), ops.zero)
            for row in matrix_rows]


def matrix_mul(a_rows, b_rows, ops):
    if not b_rows:
        return [[] for _ in a_rows]
    ncols = len(b_rows[0])
    return [[sum((a_rows[i][k] * b_rows[k][j] for k in range(len(b_rows))),
                 ops.zero)
             for j in range(ncols)]
            for i in range(len(a_rows))]


def transpose(rows, nrows_hint=0):
    if not rows:
        return []
    return [list(col) for col in zip(*rows)]


def column_space_basis(matrix_rows, ops):
    return span_basis(transpose(matrix_rows), ops)


def sum_spaces(a_vectors, b_vectors, ops):
    return span_basis(list(a_vectors) + list(b_vectors), ops)


def intersect_spaces(a_vectors, b_vectors, ops):
    """Zassenhaus intersection of two spans inside the same ambient."""
    if not a_vectors or not b_vectors:
        return []
    n = len(a_vectors[0])
    stacked = [list(v) + list(v) for v in a_vectors]
    stacked += [list(v) + [ops.zero] * n for v in b_vectors]
    ech, _ = rref(stacked, ops)
    out = []
    for row in ech:
        if all(ops.is_zero(x) for x in row[:n]):
            tail = row[n:]
            if any(not ops.is_zero(x) for x in tail):
                out.append(tail)
    return span_basis(out, ops)


def preimage_space(matrix_rows, w_vectors, ncols, ops):
    """Basis of {x : M x lies in span(w_vectors)}."""
    k = len(w_vectors)
    nrows = len(matrix_rows)
    sys_rows = []
    for i in range(nrows):
        row = list(matrix_rows[i]) + [-w_vectors[t][i] for t in range(k)]
        sys_rows.append(row)
    ker = kernel_basis(sys_rows, ncols + k, ops)
    return span_basis([v[:ncols] for v in ker], ops)


def quotient_representatives(v_vectors, w_vectors, ops):
    """Representatives of span(V)/span(W); requires span(W) within span(V)."""
    wred, wpiv = rref(w_vectors, ops) if w_vectors else ([], [])
    reduced = [reduce_mod(wred, wpiv, v, ops) for v in v_vectors]
    return span_basis(reduced, ops)


def det(rows, ops):
    """Determinant by fraction-free elimination."""
    n = len(rows)
    if n == 0:
        return ops.one
    m = [list(r) for r in rows]
    sign = 1
    prev = ops.one
    for c in range(n - 1):
        pr = None
        for k in range(c, n):
            if not ops.is_zero(m[k][c]):
                pr = k
                break
        if pr is None:
            return ops.zero
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            sign = -sign
        piv = m[c][c]
        for k in range(c + 1, n):
            for j in range(c + 1, n):
                m[k][j] = ops.div(piv * m[k][j] - m[k][c] * m[c][j], prev)
            m[k][c] = ops.zero
        prev = piv
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


def identity_rows(n, ops):
    return [[ops.one if i == j else ops.zero for j in range(n)]
            for i in range(n)]


def fraction_rows(rows):
    return [[Fraction(x) for x in row] for row in rows]
