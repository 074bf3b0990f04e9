"""Exact scalar arithmetic: rationals and Gaussian rationals.

Every computation in this package is exact.  Scalars are either
``fractions.Fraction`` (field "Q") or :class:`GaussianRational` (field
"Q_i", numbers a + b*i with rational a, b).  The ambient field is fixed
per generator set; mixing fields is an error, never a coercion.
"""

from __future__ import annotations

from fractions import Fraction


class GaussianRational:
    """Exact complex rational a + b*i with Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __eq__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return "GaussianRational(%r, %r)" % (str(self.re), str(self.im))

    def __str__(self):
        return render_scalar(self)


def _as_gaussian(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(value)
    return NotImplemented


class FieldMismatchError(TypeError):
    """Raised when values from different scalar fields are combined."""


class Field:
    """A scalar field tag: exact rationals or exact Gaussian rationals."""

    def __init__(self, name):
        if name not in ("Q", "Q_i"):
            raise ValueError("unknown field %r (expected 'Q' or 'Q_i')" % name)
        self.name = name

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, value):
        """Turn an int/Fraction/GaussianRational/string into a field scalar."""
        if self.name == "Q":
            if isinstance(value, GaussianRational):
                if value.im != 0:
                    raise FieldMismatchError(
                        "Gaussian rational %s used in field Q" % value)
                return value.re
            if isinstance(value, bool) or not isinstance(
                    value, (int, Fraction, str)):
                raise FieldMismatchError(
                    "cannot coerce %r into field Q" % (value,))
            return Fraction(value)
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        if isinstance(value, str):
            return parse_scalar(value, self)
        raise FieldMismatchError("cannot coerce %r into field Q_i" % (value,))

    def imaginary_unit(self):
        if self.name != "Q_i":
            raise FieldMismatchError("field Q has no imaginary unit")
        return GaussianRational(0, 1)

    def __eq__(self, other):
        return isinstance(other, Field) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return "Field(%r)" % self.name


FIELD_Q = Field("Q")
FIELD_QI = Field("Q_i")


def field_by_name(name):
    if name == "Q":
        return FIELD_Q
    if name == "Q_i":
        return FIELD_QI
    raise ValueError("unknown field %r" % name)


def render_scalar(value):
    """Canonical text form: '-3/2' for rationals, '(a+bi)' for complex."""
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    if isinstance(value, GaussianRational):
        if value.im == 0:
            return str(value.re)
        if value.re == 0:
            if value.im == 1:
                return "i"
            if value.im == -1:
                return "-i"
            return "%si" % value.im
        sign = "+" if value.im > 0 else "-"
        mag = abs(value.im)
        imag = "i" if mag == 1 else "%si" % mag
        return "(%s%s%s)" % (value.re, sign, imag)
    raise TypeError("not a scalar: %r" % (value,))


def parse_scalar(text, field):
    """Parse '-3/2', 'i', '1/2+3/4i' style literals into a field scalar."""
    text = text.strip().replace(" ", "")
    if field.name == "Q":
        return Fraction(text)
    # Q_i: split a+bi / a-bi / bi / a, minding the sign of the first part.
    if text in ("i", "+i"):
        return GaussianRational(0, 1)
    if text == "-i":
        return GaussianRational(0, -1)
    if text.endswith("i"):
        body = text[:-1]
        # find the split point between real and imaginary parts
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "+-/":
                re_part, im_part = body[:k], body[k:]
                if im_part in ("+", "-"):
                    im_part += "1"
                return GaussianRational(Fraction(re_part), Fraction(im_part))
        if body in ("+", "-"):
            body += "1"
        return GaussianRational(0, Fraction(body))
    return GaussianRational(Fraction(text), 0)


def scalar_to_json(value):
    """JSON form: rational string for Q, {"re","im"} object for Q_i."""
    if isinstance(value, GaussianRational):
        return {"re": str(value.re), "im": str(value.im)}
    return str(Fraction(value))


def scalar_from_json(data, field):
    if isinstance(data, dict):
        if field.name != "Q_i":
            raise FieldMismatchError(
                "complex scalar %r in rational-field input" % (data,))
        return GaussianRational(Fraction(data["re"]), Fraction(data["im"]))
    return field.coerce(str(data))
