"""Exact scalars: rationals (``fractions.Fraction``) and Gaussian rationals.

Rational scalars are plain ``int`` / ``Fraction`` values.  Elements of Q(i)
with a nonzero imaginary part are :class:`GaussianRational` instances.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

FIELDS = ("Q", "Q(i)")


class ScalarDivisionError(ZeroDivisionError, ArithmeticError):
    """Raised when dividing an exact scalar by zero."""


class ScalarParseError(ValueError):
    pass


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rational | int = 0, im: Rational | int = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ScalarDivisionError("division by zero")
        num = self * o.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[int, Fraction, GaussianRational]

I = GaussianRational(0, 1)


def normalize(x: Scalar) -> Scalar:
    """Collapse to the simplest exact type (int, Fraction, or Gaussian)."""
    if isinstance(x, GaussianRational):
        if x.im != 0:
            return x
        x = x.re
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    if isinstance(x, bool):
        return int(x)
    return x


def is_gaussian(x) -> bool:
    return isinstance(x, GaussianRational) and x.im != 0


def scalar_arith(a: Scalar, b: Scalar | None, op: str) -> Scalar:
    """Apply ``op`` in {add, sub, mul, div, neg} exactly."""
    if op == "neg":
        return normalize(-a)
    if op == "add":
        return normalize(a + b)
    if op == "sub":
        return normalize(a - b)
    if op == "mul":
        return normalize(a * b)
    if op == "div":
        if not b:
            raise ScalarDivisionError("division by zero")
        if isinstance(a, GaussianRational) or isinstance(b, GaussianRational):
            return normalize(GaussianRational._coerce(a) / b)
        return normalize(Fraction(a) / b)
    raise ValueError(f"unknown operation {op!r}")


def _fmt_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar) -> str:
    """``"p/q"``, ``"p"`` or ``"p/q+r/s i"`` with no spaces around '/'."""
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return _fmt_rational(x.re)
        im = _fmt_rational(abs(x.im))
        sign = "-" if x.im < 0 else "+"
        return f"{_fmt_rational(x.re)}{sign}{im} i"
    return _fmt_rational(x)


_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")


def _rational(text: str, original: str) -> Fraction:
    if not _RATIONAL.fullmatch(text):
        raise ScalarParseError(f"bad scalar string: {original!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError as exc:
        raise ScalarParseError(f"zero denominator in {original!r}") from exc


def parse_scalar(text, field: str = "Q(i)") -> Scalar:
    """Parse ``"p"``, ``"p/q"``, ``"p/q+r/s i"``, ``"r/s i"`` or ``"i"``.

    Integers (not bools) are accepted as-is.  With ``field="Q"`` an imaginary
    part is rejected.
    """
    if isinstance(text, bool) or not isinstance(text, (int, str)):
        raise ScalarParseError(f"not a scalar: {text!r}")
    if isinstance(text, int):
        return text
    s = text.strip()
    if not s.endswith("i"):
        return normalize(_rational(s, text))
    body = s[:-1].rstrip()
    # split "re+im" at the last sign that is not the leading one
    cut = max(body.rfind("+", 1), body.rfind("-", 1))
    if cut > 0 and body[cut - 1] not in "+-":
        re_txt, im_txt = body[:cut].strip(), body[cut:].replace(" ", "")
    else:
        re_txt, im_txt = "", body.replace(" ", "")
    re_part = _rational(re_txt, text) if re_txt else Fraction(0)
    if im_txt in ("", "+"):
        im_part = Fraction(1)
    elif im_txt == "-":
        im_part = Fraction(-1)
    else:
        im_part = _rational(im_txt, text)
    if im_part != 0 and field == "Q":
        raise ScalarParseError(f"imaginary scalar {text!r} not allowed over Q")
    return normalize(GaussianRational(re_part, im_part))
