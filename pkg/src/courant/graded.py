"""Free graded-commutative polynomial algebras with exact coefficients.

Generators carry integer degrees (0, 1, 2 in this package).  Odd
generators anticommute and square to zero; even generators commute and
admit powers.  Reordering a product emits the Koszul sign: moving an odd
generator past an odd generator flips the sign.

A monomial is a tuple of (generator_index, exponent) pairs in canonical
generator order: degree-0 block first, then degree 1, then degree 2,
lexicographic by name inside each block.  An element is a finite map
monomial -> nonzero scalar.  Elements are immutable values; all
operations are pure functions.
"""

from __future__ import annotations

import re

from .scalars import FIELD_Q, FieldMismatchError, render_scalar


class AmbientMismatchError(ValueError):
    """Two elements over different generator sets were combined."""


class GradingError(ValueError):
    """Degree rule violation (odd square, inhomogeneous degree query...)."""


class Generator:
    __slots__ = ("name", "degree")

    def __init__(self, name, degree):
        if not isinstance(degree, int):
            raise GradingError("degree must be an integer")
        self.name = name
        self.degree = degree

    @property
    def parity(self):
        return self.degree % 2

    def __repr__(self):
        return "Generator(%r, %d)" % (self.name, self.degree)


class GeneratorSet:
    """An ordered family of graded generators over a fixed scalar field.

    Realization charts restrict generator degrees to 0, 1, 2 (the default
    ``allowed_degrees``); free models of cohomology rings lift the
    restriction and may use any nonnegative degree.
    """

    def __init__(self, generators, field=FIELD_Q, allowed_degrees=(0, 1, 2)):
        gens = [g if isinstance(g, Generator) else Generator(*g)
                for g in generators]
        for g in gens:
            if g.degree < 0:
                raise GradingError(
                    "generator %r has negative degree" % g.name)
            if allowed_degrees is not None and g.degree not in allowed_degrees:
                raise GradingError(
                    "generator %r has degree %d; this generator set only "
                    "admits degrees %s" % (g.name, g.degree,
                                           sorted(allowed_degrees)))
        gens.sort(key=lambda g: (g.degree, g.name))
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError("invalid generator name %r" % name)
            if name == "i" and field.name == "Q_i":
                raise ValueError(
                    "'i' is reserved for the imaginary unit in field Q_i")
        self.generators = tuple(gens)
        self.field = field
        self._index = {g.name: k for k, g in enumerate(gens)}

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError("unknown generator %r" % name) from None

    def degree_of_index(self, k):
        return self.generators[k].degree

    @property
    def names(self):
        return tuple(g.name for g in self.generators)

    def zero(self):
        return Element(self, {})

    def scalar(self, value):
        c = self.field.coerce(value)
        if not c:
            return self.zero()
        return Element(self, {(): c})

    def one(self):
        return self.scalar(1)

    def gen(self, name):
        k = self.index(name)
        return Element(self, {((k, 1),): self.field.one})

    def monomial(self, factors, coeff=1):
        """Element from (name, exponent) factors in any order."""
        c = self.field.coerce(coeff)
        sign, mono = normalize_factors(
            self, [(self.index(n), e) for n, e in factors])
        if mono is None or not c:
            return self.zero()
        return Element(self, {mono: c * sign if sign != 1 else c})

    def __eq__(self, other):
        return (isinstance(other, GeneratorSet)
                and other.field == self.field
                and [(g.name, g.degree) for g in other.generators]
                == [(g.name, g.degree) for g in self.generators])

    def __hash__(self):
        return hash((self.field,
                     tuple((g.name, g.degree) for g in self.generators)))

    def __repr__(self):
        return "GeneratorSet(%s; %s)" % (
            ", ".join("%s:%d" % (g.name, g.degree) for g in self.generators),
            self.field.name)


def normalize_factors(gs, factors):
    """Sort (index, exponent) factors into canonical order.

    Returns (koszul_sign, monomial) where monomial is None when an odd
    generator appears squared.  The sign is +1/-1 as an int.
    """
    flat = []
    for idx, exp in factors:
        if exp < 0:
            raise GradingError("negative exponent")
        if exp == 0:
            continue
        parity = gs.generators[idx].degree % 2
        if parity and exp > 1:
            return 1, None
        flat.extend([idx] * exp)
    # insertion sort counting odd-odd transpositions
    sign = 1
    for k in range(1, len(flat)):
        j = k
        while j > 0 and flat[j - 1] > flat[j]:
            if (gs.generators[flat[j - 1]].degree % 2
                    and gs.generators[flat[j]].degree % 2):
                sign = -sign
            flat[j - 1], flat[j] = flat[j], flat[j - 1]
            j -= 1
    mono = []
    for idx in flat:
        if mono and mono[-1][0] == idx:
            if gs.generators[idx].degree % 2:
                return 1, None
            mono[-1] = (idx, mono[-1][1] + 1)
        else:
            mono.append((idx, 1))
    return sign, tuple(mono)


def monomial_degree(gs, mono):
    return sum(gs.generators[i].degree * e for i, e in mono)


def _merge(terms, mono, coeff):
    if not coeff:
        return
    acc = terms.get(mono)
    if acc is None:
        terms[mono] = coeff
    else:
        acc = acc + coeff
        if acc:
            terms[mono] = acc
        else:
            del terms[mono]


class Element:
    """A finite scalar combination of canonical monomials."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient, terms):
        self.ambient = ambient
        self.terms = dict(terms)

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if not isinstance(other, Element):
            raise TypeError("expected Element, got %r" % (other,))
        if other.ambient is not self.ambient and other.ambient != self.ambient:
            raise AmbientMismatchError(
                "elements live over different generator sets")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            _merge(terms, mono, c)
        return Element(self.ambient, terms)

    def __sub__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            _merge(terms, mono, -c)
        return Element(self.ambient, terms)

    def __neg__(self):
        return Element(self.ambient, {m: -c for m, c in self.terms.items()})

    def scale(self, value):
        c = self.ambient.field.coerce(value)
        if not c:
            return self.ambient.zero()
        return Element(self.ambient, {m: k * c for m, k in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        gs = self.ambient
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, mono = normalize_factors(gs, list(m1) + list(m2))
                if mono is None:
                    continue
                c = c1 * c2
                _merge(terms, mono, c * sign if sign != 1 else c)
        return Element(gs, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return (isinstance(other, Element)
                and other.ambient == self.ambient
                and other.terms == self.terms)

    def __hash__(self):
        return hash((self.ambient,
                     tuple(sorted(self.terms.items()))))

    def degree(self):
        """Common degree of all terms; GradingError if inhomogeneous."""
        if not self.terms:
            return None
        degs = {monomial_degree(self.ambient, m) for m in self.terms}
        if len(degs) > 1:
            raise GradingError("element is not homogeneous: degrees %s"
                               % sorted(degs))
        return degs.pop()

    def is_homogeneous(self, degree=None):
        if not self.terms:
            return True
        try:
            d = self.degree()
        except GradingError:
            return False
        return degree is None or d == degree

    def homogeneous_part(self, degree):
        gs = self.ambient
        return Element(gs, {m: c for m, c in self.terms.items()
                            if monomial_degree(gs, m) == degree})

    def coefficient(self, factors):
        """Scalar coefficient of the monomial given by (name, exp) factors."""
        sign, mono = normalize_factors(
            self.ambient,
            [(self.ambient.index(n), e) for n, e in factors])
        if mono is None:
            return self.ambient.field.zero
        c = self.terms.get(mono, self.ambient.field.zero)
        return c * sign if sign != 1 else c

    def constant_term(self):
        return self.terms.get((), self.ambient.field.zero)

    def map_coefficients(self, fn):
        terms = {}
        for m, c in self.terms.items():
            _merge(terms, m, fn(c))
        return Element(self.ambient, terms)

    def substitute(self, target_gs, name_map=None):
        """Re-express over another generator set, matching names."""
        name_map = name_map or {}
        terms = {}
        for mono, c in self.terms.items():
            factors = []
            for idx, e in mono:
                name = self.ambient.generators[idx].name
                factors.append((target_gs.index(name_map.get(name, name)), e))
            sign, new_mono = normalize_factors(target_gs, factors)
            if new_mono is None:
                continue
            _merge(terms, new_mono, c * sign if sign != 1 else c)
        return Element(target_gs, terms)

    def render(self):
        """Canonical text form; byte-stable for goldens."""
        if not self.terms:
            return "0"
        gs = self.ambient
        keyed = sorted(self.terms.items(),
                       key=lambda kv: (monomial_degree(gs, kv[0]), kv[0]))
        parts = []
        for mono, coeff in keyed:
            body = "*".join(
                gs.generators[i].name + ("^%d" % e if e > 1 else "")
                for i, e in mono)
            ctext = render_scalar(coeff)
            if not body:
                text = ctext
            elif ctext == "1":
                text = body
            elif ctext == "-1":
                text = "-" + body
            else:
                text = ctext + "*" + body
            parts.append(text)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return "<Element %s>" % self.render()


class Derivation:
    """A graded derivation given by its action on generators.

    Extension to products uses the left Leibniz rule
    D(ab) = D(a) b + (-1)^{|D||a|} a D(b); odd coordinate derivatives
    therefore act "from the left".
    """

    def __init__(self, ambient, degree, action):
        self.ambient = ambient
        self.degree = degree
        self.action = {}
        for key, elem in action.items():
            idx = ambient.index(key) if isinstance(key, str) else key
            if elem.ambient != ambient:
                raise AmbientMismatchError("derivation action ambient mismatch")
            if not elem.is_zero():
                self.action[idx] = elem

    def __call__(self, element):
        return self.apply(element)

    def apply(self, element):
        if element.ambient != self.ambient:
            raise AmbientMismatchError("derivation applied across ambients")
        gs = self.ambient
        out = gs.zero()
        for mono, coeff in element.terms.items():
            out = out + self._apply_monomial(mono).scale(coeff)
        return out

    def _apply_monomial(self, mono):
        gs = self.ambient
        out = gs.zero()
        prefix_degree = 0
        for pos, (idx, exp) in enumerate(mono):
            image = self.action.get(idx)
            if image is not None:
                gdeg = gs.generators[idx].degree
                # d(g^e) = e g^{e-1} dg for even g; odd g has e = 1
                rest = list(mono[:pos])
                if exp > 1:
                    rest.append((idx, exp - 1))
                prefix = Element(
                    gs, {tuple(rest): gs.field.coerce(exp)})
                tail = Element(
                    gs, {tuple(mono[pos + 1:]): gs.field.one})
                sign = -1 if (self.degree % 2 and prefix_degree % 2) else 1
                term = prefix * image * tail
                out = out + (term.scale(sign) if sign != 1 else term)
            prefix_degree += gs.generators[idx].degree * exp
        return out


def coordinate_derivation(gs, name):
    """Left derivation g -> 1 (zero on the others), of degree -|g|."""
    idx = gs.index(name)
    return Derivation(gs, -gs.generators[idx].degree, {idx: gs.one()})


def euler_derivation(gs):
    """The degree-counting vector field: g -> |g| g."""
    action = {}
    for k, g in enumerate(gs.generators):
        if g.degree:
            action[k] = gs.gen(g.name).scale(g.degree)
    return Derivation(gs, 0, action)


# --- polynomial helpers (all-even subalgebras, used as coefficient rings) ---

def leading_term(element):
    """(monomial, coeff) with the largest monomial tuple (lex-ish order)."""
    if element.is_zero():
        raise ZeroDivisionError("zero polynomial has no leading term")
    mono = max(element.terms)
    return mono, element.terms[mono]


def _monomial_quotient(m1, m2):
    """m1 / m2 as a factor list, or None when m2 does not divide m1."""
    exp = {i: e for i, e in m1}
    for i, e in m2:
        if exp.get(i, 0) < e:
            return None
        exp[i] -= e
    return tuple((i, e) for i, e in sorted(exp.items()) if e > 0)

def exact_div(a, b):
    """Exact division of commutative (even-generator) elements.

    Raises ArithmeticError when b does not divide a exactly.  Used by the
    fraction-free elimination over polynomial coefficient rings.
    """
    gs = a.ambient
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    quotient = gs.zero()
    rem = a
    bm, bc = leading_term(b)
    while not rem.is_zero():
        rm, rc = leading_term(rem)
        q = _monomial_quotient(rm, bm)
        if q is None:
            raise ArithmeticError("inexact polynomial division")
        qelem = Element(gs, {q: rc / bc})
        quotient = quotient + qelem
        rem = rem - qelem * b
    return quotient


# --- element parsing -------------------------------------------------------

_TOKEN = re.compile(r"\s*(\d+/\d+|\d+|[A-Za-z_][A-Za-z0-9_]*|\*\*|[()+\-*^])")


def parse_element(text, gs):
    """Parse '2*x^2*xi1 - 1/3' style expressions over a generator set.

    Grammar: sums/differences of products of powers; atoms are rational
    literals, generator names, 'i' (in field Q_i) and parenthesized
    subexpressions.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError("cannot tokenize %r" % text[pos:])
            break
        tok = m.group(1)
        tokens.append("^" if tok == "**" else tok)
        pos = m.end()
    state = {"k": 0}

    def peek():
        return tokens[state["k"]] if state["k"] < len(tokens) else None

    def advance():
        state["k"] += 1

    def parse_sum():
        node = parse_product()
        while peek() in ("+", "-"):
            op = peek()
            advance()
            rhs = parse_product()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_product():
        node = parse_power()
        while True:
            tok = peek()
            if tok == "*":
                advance()
                node = node * parse_power()
            else:
                return node

    def parse_power():
        base = parse_atom()
        if peek() == "^":
            advance()
            tok = peek()
            if tok is None or not tok.isdigit():
                raise ValueError("expected integer exponent")
            advance()
            exp = int(tok)
            out = gs.one()
            for _ in range(exp):
                out = out * base
            return out
        return base

    def parse_atom():
        tok = peek()
        if tok is None:
            raise ValueError("unexpected end of expression in %r" % text)
        if tok == "(":
            advance()
            node = parse_sum()
            if peek() != ")":
                raise ValueError("unbalanced parentheses in %r" % text)
            advance()
            return node
        if tok == "-":
            advance()
            return -parse_power()
        if tok == "+":
            advance()
            return parse_power()
        advance()
        if tok[0].isdigit():
            return gs.scalar(tok)
        if tok == "i" and gs.field.name == "Q_i":
            return gs.scalar(gs.field.imaginary_unit())
        try:
            return gs.gen(tok)
        except KeyError:
            raise ValueError("unknown name %r in %r" % (tok, text)) from None

    if not tokens:
        return gs.zero()
    out = parse_sum()
    if state["k"] != len(tokens):
        raise ValueError("trailing tokens in %r" % text)
    return out
