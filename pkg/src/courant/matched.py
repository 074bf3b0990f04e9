"""Matched pairs: cross-connections, correction terms, and the summed
bracket on an orthogonal direct sum.

Conventions.  conn_right[(a, alpha, beta)] is the coefficient of
eps_beta in the right connection applied along the a-th frame section of
the first factor to eps_alpha; conn_left[(alpha, a, b)] mirrors it.  The
correction terms are solved from

    <gamma, Omega(a,b)>_2 = (1/2)(<L_gamma a, b>_1 - <a, L_gamma b>_1)

and its mirror; the summed bracket assembles factor brackets,
connections, corrections and the exact terms.  The curvature condition
pairs both curvature tensors:  <R>(a,b,alpha,beta) + <L>(alpha,beta,a,b)
must vanish; the sign convention is pinned by requiring the equivalence
with the direct verifier on the flat regular fixture.
"""

from __future__ import annotations

import random as _random
from fractions import Fraction

from . import linalg
from .graded import coordinate_derivation
from .poisson import invert_matrix
from .presentations import (CourantPresentation, LieAlgebraPresentation,
                            PresentationError, StandardCAData, dirac_check,
                            quadratic_lie_algebra, random_poly,
                            standard_regular_build, standard_structure_conditions,
                            verify_courant)

CONDITION_NAMES = ("derived_compat_1", "derived_compat_2", "curvature_sum",
                   "cyclic_first", "cyclic_second")


class MatchedPairPresentation:
    """Two presentations over one base plus the two cross-connections."""

    def __init__(self, e1, e2, conn_right=None, conn_left=None):
        if e1.field != e2.field:
            raise PresentationError("matched factors must share the field")
        if e1.base_names != e2.base_names:
            raise PresentationError("matched factors must share the base")
        self.e1 = e1
        self.e2 = e2
        self.field = e1.field
        self.base_ring = e1.base_ring
        self.conn_right = {}
        for (a, alpha, beta), p in (conn_right or {}).items():
            poly = e1._as_poly(p)
            if not poly.is_zero():
                self.conn_right[(a, alpha, beta)] = poly
        self.conn_left = {}
        for (alpha, a, b), p in (conn_left or {}).items():
            poly = e1._as_poly(p)
            if not poly.is_zero():
                self.conn_left[(alpha, a, b)] = poly

    # --- connection operators (tensorial in the direction, Leibniz in
    # the section argument) ------------------------------------------------

    def right_apply(self, u, beta):
        """Connection along the E1-section u applied to the E2-section
        beta."""
        e1, e2 = self.e1, self.e2
        out = e2.zero_section()
        for g in range(e2.rank):
            if not beta[g].is_zero():
                out[g] = out[g] + e1.rho_apply(u, beta[g])
        for (a, alpha, gamma), w in self.conn_right.items():
            if u[a].is_zero() or beta[alpha].is_zero():
                continue
            out[gamma] = out[gamma] + u[a] * beta[alpha] * w
        return out

    def left_apply(self, alpha, u):
        e1, e2 = self.e1, self.e2
        out = e1.zero_section()
        for b in range(e1.rank):
            if not u[b].is_zero():
                out[b] = out[b] + e2.rho_apply(alpha, u[b])
        for (g, a, b), w in self.conn_left.items():
            if alpha[g].is_zero() or u[a].is_zero():
                continue
            out[b] = out[b] + alpha[g] * u[a] * w
        return out

    # --- correction terms -------------------------------------------------

    def omega(self, u, v):
        """E2-valued correction of the first-factor bracket."""
        e1, e2 = self.e1, self.e2
        half = Fraction(1, 2)
        lowered = []
        for g in range(e2.rank):
            gamma = e2.basis_section(g)
            val = (e1.pairing(self.left_apply(gamma, u), v)
                   - e1.pairing(u, self.left_apply(gamma, v))).scale(half)
            lowered.append(val)
        out = e2.zero_section()
        for g in range(e2.rank):
            for h in range(e2.rank):
                gi = e2.metric_inv[h][g]
                if gi and not lowered[h].is_zero():
                    out[g] = out[g] + lowered[h].scale(gi)
        return out

    def mho(self, alpha, beta):
        """E1-valued correction of the second-factor bracket."""
        e1, e2 = self.e1, self.e2
        half = Fraction(1, 2)
        lowered = []
        for c in range(e1.rank):
            cu = e1.basis_section(c)
            val = (e2.pairing(self.right_apply(cu, alpha), beta)
                   - e2.pairing(alpha, self.right_apply(cu, beta))).scale(half)
            lowered.append(val)
        out = e1.zero_section()
        for c in range(e1.rank):
            for d in range(e1.rank):
                gi = e1.metric_inv[d][c]
                if gi and not lowered[d].is_zero():
                    out[c] = out[c] + lowered[d].scale(gi)
        return out

    # --- structural invariants ---------------------------------------------

    def structural_report(self):
        e1, e2 = self.e1, self.e2
        report = {}
        bad = None
        for a in range(e1.rank):
            for alpha in range(e2.rank):
                for beta in range(e2.rank):
                    acc = self.base_ring.zero()
                    for g in range(e2.rank):
                        w = self.conn_right.get((a, alpha, g))
                        if w is not None:
                            acc = acc + w.scale(e2.metric[g][beta])
                        w = self.conn_right.get((a, beta, g))
                        if w is not None:
                            acc = acc + w.scale(e2.metric[alpha][g])
                    rho_term = e1.rho_apply(e1.basis_section(a),
                                            self.base_ring.scalar(
                                                e2.metric[alpha][beta]))
                    if not (acc - rho_term).is_zero():
                        bad = ("right", a, alpha, beta)
                        break
                if bad:
                    break
            if bad:
                break
        if bad is None:
            for alpha in range(e2.rank):
                for a in range(e1.rank):
                    for b in range(e1.rank):
                        acc = self.base_ring.zero()
                        for c in range(e1.rank):
                            w = self.conn_left.get((alpha, a, c))
                            if w is not None:
                                acc = acc + w.scale(e1.metric[c][b])
                            w = self.conn_left.get((alpha, b, c))
                            if w is not None:
                                acc = acc + w.scale(e1.metric[a][c])
                        rho_term = e2.rho_apply(e2.basis_section(alpha),
                                                self.base_ring.scalar(
                                                    e1.metric[a][b]))
                        if not (acc - rho_term).is_zero():
                            bad = ("left", alpha, a, b)
                            break
                    if bad:
                        break
                if bad:
                    break
        report["metric_preserving"] = {"holds": bad is None, "witness": bad}

        bad = None
        for i, x in enumerate(e1.base_names):
            f = self.base_ring.gen(x)
            d1 = e1.d_func(f)
            for alpha in range(e2.rank):
                val = self.right_apply(d1, e2.basis_section(alpha))
                if not e2.is_zero_section(val):
                    bad = ("right", x, alpha)
                    break
            if bad:
                break
            d2 = e2.d_func(f)
            for a in range(e1.rank):
                val = self.left_apply(d2, e1.basis_section(a))
                if not e1.is_zero_section(val):
                    bad = ("left", x, a)
                    break
            if bad:
                break
        report["exact_annihilation"] = {"holds": bad is None, "witness": bad}
        report["factors_valid"] = {
            "holds": self.e1.is_valid() and self.e2.is_valid(),
            "witness": None}
        report["ok"] = all(report[k]["holds"] for k in
                           ("metric_preserving", "exact_annihilation",
                            "factors_valid"))
        return report

    # --- curvature ---------------------------------------------------------

    def curv_right(self, a_sec, b_sec, alpha):
        return [x - y for x, y in zip(
            self.right_apply(a_sec, self.right_apply(b_sec, alpha)),
            self._right_brk(a_sec, b_sec, alpha))]

    def _right_brk(self, a_sec, b_sec, alpha):
        term = self.right_apply(b_sec, self.right_apply(a_sec, alpha))
        term2 = self.right_apply(self.e1.dorfman(a_sec, b_sec), alpha)
        return [x + y for x, y in zip(term, term2)]

    def curv_left(self, alpha, beta, a_sec):
        first = self.left_apply(alpha, self.left_apply(beta, a_sec))
        second = self.left_apply(beta, self.left_apply(alpha, a_sec))
        third = self.left_apply(self.e2.dorfman(alpha, beta), a_sec)
        return [x - y - z for x, y, z in zip(first, second, third)]


def omega(mp, a_sec, b_sec):
    return mp.omega(a_sec, b_sec)


def mho(mp, alpha_sec, beta_sec):
    return mp.mho(alpha_sec, beta_sec)


def matched_sum(mp):
    """The presentation on the orthogonal direct sum."""
    e1, e2 = mp.e1, mp.e2
    n1, n2 = e1.rank, e2.rank
    rank = n1 + n2
    field = mp.field
    metric = [[field.zero] * rank for _ in range(rank)]
    for a in range(n1):
        for b in range(n1):
            metric[a][b] = e1.metric[a][b]
    for a in range(n2):
        for b in range(n2):
            metric[n1 + a][n1 + b] = e2.metric[a][b]
    anchor = {}
    for (a, i), p in e1.anchor.items():
        anchor[(a, i)] = p
    for (a, i), p in e2.anchor.items():
        anchor[(n1 + a, i)] = p
    structure = {}

    def put(key, poly):
        if not poly.is_zero():
            structure[key] = poly

    basis1 = [e1.basis_section(a) for a in range(n1)]
    basis2 = [e2.basis_section(a) for a in range(n2)]
    for a in range(n1):
        for b in range(n1):
            for c in range(n1):
                put((a, b, c), e1.c_poly(a, b, c))
            om = mp.omega(basis1[a], basis1[b])
            for g in range(n2):
                acc = mp.base_ring.zero()
                for h in range(n2):
                    if not om[h].is_zero():
                        acc = acc + om[h].scale(e2.metric[h][g])
                put((a, b, n1 + g), acc)
    for a in range(n1):
        for alpha in range(n2):
            left = mp.left_apply(basis2[alpha], basis1[a])
            right = mp.right_apply(basis1[a], basis2[alpha])
            for c in range(n1):
                acc = mp.base_ring.zero()
                for d in range(n1):
                    if not left[d].is_zero():
                        acc = acc + left[d].scale(e1.metric[d][c])
                put((a, n1 + alpha, c), -acc)
                put((n1 + alpha, a, c), acc)
            for g in range(n2):
                acc = mp.base_ring.zero()
                for h in range(n2):
                    if not right[h].is_zero():
                        acc = acc + right[h].scale(e2.metric[h][g])
                put((a, n1 + alpha, n1 + g), acc)
                put((n1 + alpha, a, n1 + g), -acc)
    for alpha in range(n2):
        for beta in range(n2):
            for g in range(n2):
                put((n1 + alpha, n1 + beta, n1 + g),
                    e2.c_poly(alpha, beta, g))
            mh = mp.mho(basis2[alpha], basis2[beta])
            for c in range(n1):
                acc = mp.base_ring.zero()
                for d in range(n1):
                    if not mh[d].is_zero():
                        acc = acc + mh[d].scale(e1.metric[d][c])
                put((n1 + alpha, n1 + beta, c), acc)
    labels = tuple("a%d" % (k + 1) for k in range(n1)) \
        + tuple("b%d" % (k + 1) for k in range(n2))
    return CourantPresentation(field, e1.base_names, rank, metric, anchor,
                               structure, labels=labels)


def _pair_sections(pres, u, v):
    return pres.pairing(u, v)


def verify_matched_pair(mp, rng=None, samples=2, poly_degree=2):
    """The five compatibility conditions, each with a witness."""
    rng = rng or _random.Random(0)
    e1, e2 = mp.e1, mp.e2
    half = Fraction(1, 2)
    report = {}

    def sections1():
        out = [e1.basis_section(a) for a in range(e1.rank)]
        if e1.base_names:
            for _ in range(samples):
                out.append([random_poly(e1.base_ring, rng, poly_degree, 1)
                            for _ in range(e1.rank)])
        return out

    def sections2():
        out = [e2.basis_section(a) for a in range(e2.rank)]
        if e2.base_names:
            for _ in range(samples):
                out.append([random_poly(e2.base_ring, rng, poly_degree, 1)
                            for _ in range(e2.rank)])
        return out

    s1, s2 = sections1(), sections2()

    def cond_one():
        for gi, alpha in enumerate(s2):
            for i, a1 in enumerate(s1):
                for j, a2 in enumerate(s1):
                    lhs = mp.left_apply(alpha, e1.dorfman(a1, a2))
                    lhs = e1.sub(lhs, e1.dorfman(mp.left_apply(alpha, a1), a2))
                    lhs = e1.sub(lhs, e1.dorfman(a1, mp.left_apply(alpha, a2)))
                    lhs = e1.sub(lhs, mp.left_apply(
                        mp.right_apply(a2, alpha), a1))
                    lhs = e1.add(lhs, mp.left_apply(
                        mp.right_apply(a1, alpha), a2))
                    inner = mp.omega(a1, a2)
                    inner = e2.add(inner, [x.scale(half) for x in
                                           e2.d_func(e1.pairing(a1, a2))])
                    rhs = [(-x).scale(1) for x in mp.mho(alpha, inner)]
                    rhs = e1.sub(rhs, [x.scale(half) for x in
                                       e1.d_func(e2.pairing(alpha, inner))])
                    if not e1.is_zero_section(e1.sub(lhs, rhs)):
                        return {"holds": False, "witness": (gi, i, j)}
        return {"holds": True, "witness": None}

    def cond_two():
        for i, a in enumerate(s1):
            for gi, al1 in enumerate(s2):
                for gj, al2 in enumerate(s2):
                    lhs = mp.right_apply(a, e2.dorfman(al1, al2))
                    lhs = e2.sub(lhs, e2.dorfman(mp.right_apply(a, al1), al2))
                    lhs = e2.sub(lhs, e2.dorfman(al1, mp.right_apply(a, al2)))
                    lhs = e2.sub(lhs, mp.right_apply(
                        mp.left_apply(al2, a), al1))
                    lhs = e2.add(lhs, mp.right_apply(
                        mp.left_apply(al1, a), al2))
                    inner = mp.mho(al1, al2)
                    inner = e1.add(inner, [x.scale(half) for x in
                                           e1.d_func(e2.pairing(al1, al2))])
                    rhs = [(-x).scale(1) for x in mp.omega(a, inner)]
                    rhs = e2.sub(rhs, [x.scale(half) for x in
                                       e2.d_func(e1.pairing(a, inner))])
                    if not e2.is_zero_section(e2.sub(lhs, rhs)):
                        return {"holds": False, "witness": (i, gi, gj)}
        return {"holds": True, "witness": None}

    def cond_curv():
        for i, a in enumerate(s1):
            for j, b in enumerate(s1):
                for gi, al in enumerate(s2):
                    rr = mp.curv_right(a, b, al)
                    for gj, be in enumerate(s2):
                        t_right = e2.pairing(rr, be)
                        ll = mp.curv_left(al, be, a)
                        t_left = e1.pairing(ll, b)
                        if not (t_right + t_left).is_zero():
                            return {"holds": False,
                                    "witness": (i, j, gi, gj)}
        return {"holds": True, "witness": None}

    def cond_cyc1():
        for i, a1 in enumerate(s1):
            for j, a2 in enumerate(s1):
                for k, a3 in enumerate(s1):
                    acc = e1.zero_section()
                    for (u, v, w) in ((a1, a2, a3), (a2, a3, a1),
                                      (a3, a1, a2)):
                        acc = e1.add(acc, mp.left_apply(mp.omega(u, v), w))
                    if not e1.is_zero_section(acc):
                        return {"holds": False, "witness": (i, j, k)}
        return {"holds": True, "witness": None}

    def cond_cyc2():
        for i, a1 in enumerate(s2):
            for j, a2 in enumerate(s2):
                for k, a3 in enumerate(s2):
                    acc = e2.zero_section()
                    for (u, v, w) in ((a1, a2, a3), (a2, a3, a1),
                                      (a3, a1, a2)):
                        acc = e2.add(acc, mp.right_apply(mp.mho(u, v), w))
                    if not e2.is_zero_section(acc):
                        return {"holds": False, "witness": (i, j, k)}
        return {"holds": True, "witness": None}

    report["derived_compat_1"] = cond_one()
    report["derived_compat_2"] = cond_two()
    report["curvature_sum"] = cond_curv()
    report["cyclic_first"] = cond_cyc1()
    report["cyclic_second"] = cond_cyc2()
    report["matched"] = all(report[k]["holds"] for k in CONDITION_NAMES)

    # Anchored-connection compatibility; the source equation carries the
    # author's own doubt, so it is reported but not folded into the verdict.
    bad = None
    for x in mp.e1.base_names:
        f = mp.base_ring.gen(x)
        for a in range(e1.rank):
            for alpha in range(e2.rank):
                asec = e1.basis_section(a)
                alsec = e2.basis_section(alpha)
                lhs = e2.rho_apply(mp.right_apply(asec, alsec), f) \
                    - e1.rho_apply(mp.left_apply(alsec, asec), f)
                rhs = e1.rho_apply(asec, e2.rho_apply(alsec, f)) \
                    - e2.rho_apply(alsec, e1.rho_apply(asec, f))
                if not (lhs - rhs).is_zero():
                    bad = (x, a, alpha)
                    break
            if bad:
                break
        if bad:
            break
    report["anchor_compat"] = {"holds": bad is None, "witness": bad,
                               "status": "paper-uncertain"}
    return report


def matched_iff_courant(mp, rng=None, samples=2, poly_degree=2):
    """Both verdicts plus the equivalence bit; a disagreement is a bug,
    not a tie-break."""
    rng = rng or _random.Random(0)
    pair_report = verify_matched_pair(mp, rng, samples, poly_degree)
    total = matched_sum(mp)
    sum_report = verify_courant(total, rng, samples, poly_degree)
    return {
        "pair_matched": pair_report["matched"],
        "sum_valid": sum_report["valid"],
        "equivalent": pair_report["matched"] == sum_report["valid"],
        "pair_report": pair_report,
        "sum_report": sum_report,
    }


def decompose(pres, p1_columns, rng=None):
    """Split a presentation along a subspace with nondegenerate metric
    restriction; the orthogonal complement is computed, both restricted
    presentations and the induced connections are returned."""
    field = pres.field
    ops = linalg.ops_for_field(field)
    n = pres.rank
    p1 = [[field.coerce(p1_columns[a][j]) for a in range(n)]
          for j in range(len(p1_columns[0]))]  # rows = basis vectors
    k1 = len(p1)
    g_rows = [list(row) for row in pres.metric]
    # orthogonal complement: kernel of P1^T g
    constraints = [linalg.matrix_apply(g_rows, v, ops) for v in p1]
    p2 = linalg.kernel_basis(constraints, n, ops)
    k2 = len(p2)
    if k1 + k2 != n:
        raise PresentationError("subspace meets its orthogonal complement")
    g1 = [[sum((p1[i][a] * pres.metric[a][b] * p1[j][b]
                for a in range(n) for b in range(n)), field.zero)
           for j in range(k1)] for i in range(k1)]
    g2 = [[sum((p2[i][a] * pres.metric[a][b] * p2[j][b]
                for a in range(n) for b in range(n)), field.zero)
           for j in range(k2)] for i in range(k2)]
    try:
        invert_matrix(g1, field)
        invert_matrix(g2, field)
    except ValueError:
        raise PresentationError(
            "metric restriction is degenerate on the splitting") from None

    def restricted(block, gblock):
        kk = len(block)
        anchor = {}
        for u in range(kk):
            for i in range(len(pres.base_names)):
                acc = pres.base_ring.zero()
                for a in range(n):
                    p = pres.anchor.get((a, i))
                    if p is not None and block[u][a]:
                        acc = acc + p.scale(block[u][a])
                if not acc.is_zero():
                    anchor[(u, i)] = acc
        structure = {}
        for u in range(kk):
            for v in range(kk):
                for w in range(kk):
                    acc = pres.base_ring.zero()
                    for (a, b, c), poly in pres.structure.items():
                        coef = block[u][a] * block[v][b] * block[w][c]
                        if coef:
                            acc = acc + poly.scale(coef)
                    if not acc.is_zero():
                        structure[(u, v, w)] = acc
        return CourantPresentation(field, pres.base_names, kk, gblock,
                                   anchor, structure)

    e1 = restricted(p1, g1)
    e2 = restricted(p2, g2)

    def embed(block, coeffs):
        out = pres.zero_section()
        for u, c in enumerate(coeffs):
            for a in range(n):
                if block[u][a]:
                    out[a] = out[a] + c.scale(block[u][a])
        return out

    g2_inv = invert_matrix(g2, field)
    g1_inv = invert_matrix(g1, field)
    conn_right = {}
    conn_left = {}
    for a in range(k1):
        ua = embed(p1, e1.basis_section(a))
        for alpha in range(k2):
            va = embed(p2, e2.basis_section(alpha))
            br = pres.dorfman(ua, va)
            lowered2 = []
            for g in range(k2):
                wg = embed(p2, e2.basis_section(g))
                lowered2.append(pres.pairing(br, wg))
            for g in range(k2):
                acc = pres.base_ring.zero()
                for h in range(k2):
                    if g2_inv[h][g] and not lowered2[h].is_zero():
                        acc = acc + lowered2[h].scale(g2_inv[h][g])
                if not acc.is_zero():
                    conn_right[(a, alpha, g)] = acc
            br2 = pres.dorfman(va, ua)
            lowered1 = []
            for c in range(k1):
                wc = embed(p1, e1.basis_section(c))
                lowered1.append(pres.pairing(br2, wc))
            for c in range(k1):
                acc = pres.base_ring.zero()
                for h in range(k1):
                    if g1_inv[h][c] and not lowered1[h].is_zero():
                        acc = acc + lowered1[h].scale(g1_inv[h][c])
                if not acc.is_zero():
                    conn_left[(alpha, a, c)] = acc
    mp = MatchedPairPresentation(e1, e2, conn_right, conn_left)

    # mixed-term identity: (a + 0) o (0 + beta) = -L_beta a + R_a beta
    obstruction = None
    for a in range(k1):
        ua = embed(p1, e1.basis_section(a))
        for alpha in range(k2):
            va = embed(p2, e2.basis_section(alpha))
            lhs = pres.dorfman(ua, va)
            rhs = embed(p1, [(-x).scale(1) for x in mp.left_apply(
                e2.basis_section(alpha), e1.basis_section(a))])
            rhs = pres.add(rhs, embed(p2, mp.right_apply(
                e1.basis_section(a), e2.basis_section(alpha))))
            if not pres.is_zero_section(pres.sub(lhs, rhs)):
                obstruction = ("mixed_term", a, alpha)
                break
        if obstruction:
            break
    return mp, {"mixed_term_ok": obstruction is None,
                "witness": obstruction, "p1": p1, "p2": p2}


def flat_standard_to_matched(data):
    """The matched pair of a flat standard structure: the twisted
    first factor on F + F* and the quadratic block, with the connection
    along the leaf direction and the curvature-pairing return
    connection."""
    fd, gd = data.f_algebra.dim, data.g_algebra.dim
    field = data.field
    flat = True
    from .presentations import _rr_four_form, _d_f_three_form
    from itertools import combinations
    for idx in combinations(range(fd), 4):
        if not _rr_four_form(data, *idx).is_zero():
            flat = False
    for idx in combinations(range(fd), 4):
        if not _d_f_three_form(data, data.h_value, *idx).is_zero():
            flat = False
    if not flat:
        raise PresentationError("structure is not flat: the curvature "
                                "square or the twist gradient is nonzero")
    # first factor: the g = 0 standard build (basis xi^1..xi^F, f_1..f_F)
    zero_g = LieAlgebraPresentation(0, {}, field)
    sub = StandardCAData(field, data.base_names, data.f_algebra, data.action,
                         zero_g, [], conn={}, curv={}, h_form=data.h_form)
    e1, _ = standard_regular_build(sub)
    g_structure = {}
    for a in range(gd):
        for b in range(gd):
            for c in range(gd):
                v = sum((data.g_algebra.bracket_coeffs(a, b)
                         .get(d, field.zero) * data.g_metric[d][c]
                         for d in range(gd)), field.zero)
                if v:
                    g_structure[(a, b, c)] = v
    e2 = CourantPresentation(field, data.base_names, gd, data.g_metric, {},
                             g_structure)
    conn_right = {}
    for (i, alpha, beta), p in data.conn.items():
        conn_right[(fd + i, alpha, beta)] = p
    conn_left = {}
    for alpha in range(gd):
        ra = [data.base_ring.one() if t == alpha else data.base_ring.zero()
              for t in range(gd)]
        for i in range(fd):
            for k in range(fd):
                q = data.g_pair(ra, data.curv_section(i, k))
                if not q.is_zero():
                    conn_left[(alpha, fd + i, k)] = q
    return MatchedPairPresentation(e1, e2, conn_right, conn_left)


def matched_dirac_check(mp, d1_vectors, d2_vectors):
    """Closure of the connections on a pair of Dirac subspaces, plus the
    direct check on the sum and the Lie-algebroid matched-pair equations
    for the restricted data."""
    e1, e2 = mp.e1, mp.e2
    field = mp.field
    ops = linalg.ops_for_field(field)
    r1 = dirac_check(e1, d1_vectors)
    r2 = dirac_check(e2, d2_vectors)
    if not r1["dirac"] or not r2["dirac"]:
        raise PresentationError("inputs are not Dirac structures")
    d1 = [[field.coerce(v) for v in row] for row in d1_vectors]
    d2 = [[field.coerce(v) for v in row] for row in d2_vectors]
    ann1 = linalg.kernel_basis(d1, e1.rank, ops)
    ann2 = linalg.kernel_basis(d2, e2.rank, ops)

    def in_span(section, ann):
        for r in ann:
            acc = mp.base_ring.zero()
            for j, c in enumerate(r):
                if c and not section[j].is_zero():
                    acc = acc + section[j].scale(c)
            if not acc.is_zero():
                return False
        return True

    closed = True
    witness = None
    for u in d1:
        for v in d2:
            left = mp.left_apply(e2.section(v), e1.section(u))
            if not in_span(left, ann1):
                closed = False
                witness = ("left", u, v)
                break
            right = mp.right_apply(e1.section(u), e2.section(v))
            if not in_span(right, ann2):
                closed = False
                witness = ("right", u, v)
                break
        if not closed:
            break
    out = {"connections_preserve": closed, "witness": witness}
    if not closed:
        out["sum_dirac"] = None
        out["lie_matched"] = None
        return out

    total = matched_sum(mp)
    n1 = e1.rank
    sum_basis = [list(u) + [field.zero] * e2.rank for u in d1] \
        + [[field.zero] * n1 + list(v) for v in d2]
    out["sum_dirac"] = dirac_check(total, sum_basis)["dirac"]

    # Lie-algebroid matched-pair equations for the restricted connections
    ok = True
    lw = None
    for v in d2:
        al = e2.section(v)
        for ub in d1:
            for uc in d1:
                b, c = e1.section(ub), e1.section(uc)
                lhs = mp.left_apply(al, e1.skew_bracket(b, c))
                rhs = e1.skew_bracket(mp.left_apply(al, b), c)
                rhs = e1.add(rhs, e1.skew_bracket(b, mp.left_apply(al, c)))
                rhs = e1.add(rhs, mp.left_apply(mp.right_apply(c, al), b))
                rhs = e1.sub(rhs, mp.left_apply(mp.right_apply(b, al), c))
                if not e1.is_zero_section(e1.sub(lhs, rhs)):
                    ok = False
                    lw = ("first", v, ub, uc)
                    break
            if not ok:
                break
        if not ok:
            break
    if ok:
        for u in d1:
            a = e1.section(u)
            for vb in d2:
                for vc in d2:
                    b, c = e2.section(vb), e2.section(vc)
                    lhs = mp.right_apply(a, e2.skew_bracket(b, c))
                    rhs = e2.skew_bracket(mp.right_apply(a, b), c)
                    rhs = e2.add(rhs, e2.skew_bracket(b, mp.right_apply(a, c)))
                    rhs = e2.add(rhs, mp.right_apply(mp.left_apply(c, a), b))
                    rhs = e2.sub(rhs, mp.right_apply(mp.left_apply(b, a), c))
                    if not e2.is_zero_section(e2.sub(lhs, rhs)):
                        ok = False
                        lw = ("second", u, vb, vc)
                        break
                if not ok:
                    break
            if not ok:
                break
    out["lie_matched"] = ok
    out["lie_witness"] = lw
    return out
