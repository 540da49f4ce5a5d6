"""Precision context, exact polynomial coefficients and the accuracy metric.

Working precision is expressed in decimal digits.  Every numeric routine in the
package receives a :class:`PrecisionContext` explicitly; each context owns a
private mpmath context so that no global precision state is touched.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from numbers import Rational
from typing import Iterable, Sequence

from mpmath.ctx_mp import MPContext

from .errors import DomainError

GUARD_BITS = 8
MIN_DIGITS = 16


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (decimal digits) plus derived tolerances.

    ``eps_rel`` is ``10**(-digits/2)``: ties and equality tests use half the
    working precision so that modelling error is kept apart from roundoff.
    """

    digits: int = 128
    mp: MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.digits) != self.digits or self.digits < MIN_DIGITS:
            raise ValueError(f"digits must be an integer >= {MIN_DIGITS}, got {self.digits!r}")
        object.__setattr__(self, "digits", int(self.digits))
        ctx = MPContext()
        ctx.prec = self.bits
        object.__setattr__(self, "mp", ctx)

    @property
    def bits(self) -> int:
        return math.ceil(self.digits * math.log2(10)) + GUARD_BITS

    @cached_property
    def eps_rel(self):
        mp = self.mp
        return mp.power(mp.mpf(10), -mp.mpf(self.digits) / 2)

    @property
    def acc_cap(self) -> float:
        return float(self.digits)

    def mpc(self, value):
        """Convert a number (QComplex, Fraction, int, float, complex, mpmath) to mpc."""
        mp = self.mp
        if isinstance(value, QComplex):
            return mp.mpc(_frac_mp(mp, value.re), _frac_mp(mp, value.im))
        if isinstance(value, Fraction):
            return mp.mpc(_frac_mp(mp, value))
        if isinstance(value, str):
            return self.mpc(parse_number(value))
        return mp.mpc(value)

    def mpf(self, value):
        mp = self.mp
        if isinstance(value, Fraction):
            return _frac_mp(mp, value)
        return mp.mpf(value)

    def with_digits(self, digits: int) -> "PrecisionContext":
        return PrecisionContext(digits)


def _frac_mp(mp, q: Fraction):
    if q.denominator == 1:
        return mp.mpf(q.numerator)
    return mp.mpf(q.numerator) / q.denominator


# ---------------------------------------------------------------------------
# Exact complex rationals
# ---------------------------------------------------------------------------

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?P<re>[+-]?{_NUM})?(?:(?P<im>[+-](?:{_NUM})?)i)?$"
)
_IMAG_RE = re.compile(rf"^(?P<im>[+-]?(?:{_NUM})?)i$")


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(num) / Fraction(den)
        return Fraction(s)
    raise TypeError(f"cannot convert {value!r} to an exact rational")


@dataclass(frozen=True)
class QComplex:
    """Gaussian rational: exact complex number with Fraction parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _to_fraction(self.re))
        object.__setattr__(self, "im", _to_fraction(self.im))

    @classmethod
    def of(cls, value) -> "QComplex":
        if isinstance(value, QComplex):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, str):
            return parse_number(value)
        if isinstance(value, (tuple, list)) and len(value) == 2:
            return cls(_to_fraction(value[0]), _to_fraction(value[1]))
        return cls(_to_fraction(value))

    def __add__(self, other):
        other = QComplex.of(other)
        return QComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-QComplex.of(other))

    def __rsub__(self, other):
        return QComplex.of(other) - self

    def __mul__(self, other):
        o = QComplex.of(other)
        return QComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QComplex.of(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by exact zero")
        return QComplex(
            (self.re * o.re + self.im * o.im) / den,
            (self.im * o.re - self.re * o.im) / den,
        )

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = QComplex.of(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        return format_number(self)

    def pair(self) -> list[str]:
        return [_frac_str(self.re), _frac_str(self.im)]


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_number(z: QComplex) -> str:
    if z.im == 0:
        return _frac_str(z.re)
    sign = "+" if z.im >= 0 else "-"
    return f"{_frac_str(z.re)}{sign}{_frac_str(abs(z.im))}i"


def parse_number(text: str) -> QComplex:
    """Parse ``a``, ``p/q``, ``a+bi``, ``bi`` (no spaces) into an exact QComplex."""
    s = str(text).strip().replace(" ", "").replace("j", "i")
    m = _IMAG_RE.match(s)
    if m is not None:
        im_txt = m.group("im")
        im_part = {"": Fraction(1), "+": Fraction(1), "-": Fraction(-1)}.get(im_txt)
        return QComplex(0, im_part if im_part is not None else _to_fraction(im_txt))
    m = _COMPLEX_RE.match(s)
    if not s or m is None or (m.group("re") is None and m.group("im") is None):
        raise DomainError(f"cannot parse number {text!r}", value=str(text))
    re_part = _to_fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_txt = m.group("im")
    if im_txt is None:
        im_part = Fraction(0)
    elif im_txt in ("", "+"):
        im_part = Fraction(1)
    elif im_txt == "-":
        im_part = Fraction(-1)
    else:
        im_part = _to_fraction(im_txt)
    return QComplex(re_part, im_part)


# ---------------------------------------------------------------------------
# Polynomials in the index variable
# ---------------------------------------------------------------------------

ZERO = QComplex()
ONE = QComplex(1)


@dataclass(frozen=True)
class Poly:
    """Polynomial in ``n`` with exact Gaussian-rational coefficients (ascending)."""

    coeffs: tuple = (ZERO,)

    def __post_init__(self):
        cs = [QComplex.of(c) for c in self.coeffs]
        while len(cs) > 1 and not cs[-1]:
            cs.pop()
        if not cs:
            cs = [ZERO]
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def of(cls, coeffs: Iterable) -> "Poly":
        if isinstance(coeffs, Poly):
            return coeffs
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        if len(self.coeffs) == 1 and not self.coeffs[0]:
            return -1
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> QComplex:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __call__(self, n) -> QComplex:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def eval_mp(self, n, ctx: PrecisionContext):
        cs = self.mp_coeffs(ctx)
        acc = cs[-1]
        for c in reversed(cs[:-1]):
            acc = acc * n + c
        return acc

    def mp_coeffs(self, ctx: PrecisionContext) -> tuple:
        cache = self.__dict__.setdefault("_mp_cache", {})
        got = cache.get(ctx.digits)
        if got is None:
            got = tuple(ctx.mpc(c) for c in self.coeffs)
            cache[ctx.digits] = got
        return got

    def shift(self) -> "Poly":
        return poly_shift(self)

    def scale(self, c) -> "Poly":
        c = QComplex.of(c)
        return Poly(tuple(c * a for a in self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        other = Poly.of(other)
        k = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coeff(i) + other.coeff(i) for i in range(k)))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + Poly.of(other).scale(-1)

    def __mul__(self, other: "Poly") -> "Poly":
        other = Poly.of(other)
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(tuple(out))

    def compose_linear(self, s, t) -> "Poly":
        """Return ``n -> p(s*n + t)``."""
        lin = Poly((QComplex.of(t), QComplex.of(s)))
        acc = Poly((ZERO,))
        for c in reversed(self.coeffs):
            acc = acc * lin + Poly((c,))
        return acc

    def to_pairs(self) -> list:
        return [c.pair() for c in self.coeffs]

    def __repr__(self):
        return f"Poly([{', '.join(format_number(c) for c in self.coeffs)}])"


def poly_shift(p: Poly) -> Poly:
    """Coefficients of ``n -> p(n + 1)`` by exact binomial re-expansion."""
    cs = p.coeffs
    out = []
    for k in range(len(cs)):
        total = ZERO
        for i in range(k, len(cs)):
            total = total + cs[i] * comb(i, k)
        out.append(total)
    return Poly(tuple(out))


def monomial_poly(coeffs: Sequence) -> Poly:
    return Poly(tuple(QComplex.of(c) for c in coeffs))


# ---------------------------------------------------------------------------
# Accuracy metric
# ---------------------------------------------------------------------------

def acc(x, v, ctx: PrecisionContext) -> float:
    """Number of exact significant decimal digits of ``x`` in ``v``.

    ``-log10|1 - x/v|``, capped at ``ctx.acc_cap`` (reached when x == v).
    """
    mp = ctx.mp
    x = ctx.mpc(x)
    v = ctx.mpc(v)
    if v == 0:
        raise DomainError("reference value is zero")
    err = abs(1 - x / v)
    if err == 0:
        return ctx.acc_cap
    return min(float(-mp.log10(err)), ctx.acc_cap)


def round_half_away(value: float, places: int = 2) -> str:
    """Decimal rounding used for table display (half away from zero)."""
    from decimal import Decimal, ROUND_HALF_UP

    q = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(value))).quantize(q, rounding=ROUND_HALF_UP))


def quadratic_roots(alpha, beta, gamma, ctx: PrecisionContext):
    """Both roots of alpha*x**2 + beta*x + gamma = 0 without cancellation.

    The larger-magnitude root comes first; the companion is ``gamma/(alpha*x1)``.
    """
    mp = ctx.mp
    if alpha == 0:
        raise ZeroDivisionError("leading coefficient of quadratic is zero")
    s = mp.sqrt(beta * beta - 4 * alpha * gamma)
    if (mp.conj(beta) * s).real < 0:
        s = -s
    x1 = -(beta + s) / (2 * alpha)
    if x1 == 0:
        return x1, x1
    return x1, gamma / (alpha * x1)


def principal_sqrt(z, ctx: PrecisionContext):
    """Principal square root (Re >= 0; Im >= 0 when Re == 0)."""
    return ctx.mp.sqrt(ctx.mpc(z))
