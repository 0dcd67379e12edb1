"""Exact scalars: rationals plus elements a + b*sqrt(d) of one quadratic field.

Rationals are plain ``int``/``fractions.Fraction`` values.  Elements of
Q(sqrt(d)) with a nonzero irrational part are :class:`QuadraticScalar`;
every arithmetic result with zero irrational part collapses back to a
rational, so purely rational computations never see the wrapper.

Which square root may be adjoined is governed by a *field session*
(:func:`field_session`).  Inside one session at most one ``d`` is ever
active; asking for a second, incompatible square root raises
:class:`FieldExtensionRequired`.
"""

from __future__ import annotations

import contextlib
import contextvars
import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import sympy

__all__ = [
    "FieldExtensionRequired",
    "QuadraticScalar",
    "active_extension",
    "field_session",
    "format_scalar",
    "is_rational",
    "norm",
    "operation_session",
    "parse_scalar",
    "quad",
    "sqrt",
    "squarefree_part",
]


class FieldExtensionRequired(ArithmeticError):
    """A square root outside the active field was needed."""

    def __init__(self, d: int, active: int | None = None):
        self.d = d
        self.active = active
        msg = f"field extension required: {d}"
        if active is not None:
            msg += f" (Q(sqrt({active})) already active)"
        super().__init__(msg)


def norm(x):
    """Collapse integral Fractions to ``int`` (keeps arithmetic fast)."""
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def squarefree_part(q) -> int:
    """Square-free integer ``d`` with ``q = d * s**2`` for some rational ``s``."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("zero has no square-free part")
    n = q.numerator * q.denominator
    sign = -1 if n < 0 else 1
    d = 1
    for p, e in sympy.factorint(abs(n)).items():
        if e % 2:
            d *= p
    return sign * d


def _rational_sqrt(q):
    """Exact rational square root of ``q`` or None."""
    q = Fraction(q)
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return norm(Fraction(ra, rb))
    return None


class QuadraticScalar:
    """``a + b*sqrt(d)`` with rational a, b (b != 0) and square-free d."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        if b == 0:
            raise ValueError("use quad() for values that may be rational")
        if d in (0, 1) or squarefree_part(d) != d:
            raise ValueError(f"d={d} is not a square-free integer != 0, 1")
        self.a = norm(Fraction(a))
        self.b = norm(Fraction(b))
        self.d = d

    def _coerce(self, other):
        if isinstance(other, QuadraticScalar):
            if other.d != self.d:
                raise FieldExtensionRequired(other.d, self.d)
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return other, 0
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return quad(self.a + o[0], self.b + o[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticScalar(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return quad(self.a - o[0], self.b - o[1], self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return quad(o[0] - self.a, o[1] - self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = o
        return quad(self.a * a + self.d * self.b * b, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticScalar(self.a, -self.b, self.d)

    def field_norm(self):
        return norm(Fraction(self.a) ** 2 - self.d * Fraction(self.b) ** 2)

    def inverse(self):
        n = Fraction(self.field_norm())
        return quad(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(other, QuadraticScalar):
            return self * other.inverse()
        if other == 0:
            raise ZeroDivisionError("division by zero")
        return quad(Fraction(self.a) / other, Fraction(self.b) / other, self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = 1
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadraticScalar):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return True

    def __repr__(self):
        return f"QuadraticScalar({format_scalar(self)!r})"

    __str__ = lambda self: format_scalar(self)  # noqa: E731


def quad(a, b, d: int):
    """Build ``a + b*sqrt(d)``, returning a rational when ``b == 0``."""
    if b == 0:
        return norm(Fraction(a)) if not isinstance(a, int) else a
    return QuadraticScalar(a, b, d)


# -- field sessions ---------------------------------------------------------


@dataclass
class _Session:
    d: int | None
    allow_activation: bool


_SESSION: contextvars.ContextVar[_Session | None] = contextvars.ContextVar(
    "superquad_field_session", default=None
)


@contextlib.contextmanager
def field_session(d: int | None = None, allow_activation: bool = True):
    """Scope in which at most one quadratic extension may be used.

    ``d`` pre-activates Q(sqrt(d)).  With ``allow_activation=False`` and no
    ``d`` the session is strictly rational.
    """
    if d is not None and squarefree_part(d) != d:
        raise ValueError(f"{d} is not square-free")
    token = _SESSION.set(_Session(d, allow_activation))
    try:
        yield
    finally:
        _SESSION.reset(token)


@contextlib.contextmanager
def operation_session():
    """Open a fresh auto-activating session unless one is already open."""
    if _SESSION.get() is None:
        with field_session():
            yield
    else:
        yield


def active_extension() -> int | None:
    s = _SESSION.get()
    return None if s is None else s.d


def sqrt(q):
    """Exact square root of a rational ``q`` inside the current session."""
    if not is_rational(q):
        raise TypeError("square roots are only taken of rationals")
    if q == 0:
        return 0
    r = _rational_sqrt(q)
    if r is not None:
        return r
    d = squarefree_part(q)
    s = _rational_sqrt(Fraction(q) / d)
    session = _SESSION.get()
    if session is None:
        session = _Session(None, True)
    if session.d is None:
        if not session.allow_activation:
            raise FieldExtensionRequired(d)
        session.d = d
    elif session.d != d:
        raise FieldExtensionRequired(d, session.d)
    return QuadraticScalar(0, s, d)


# -- text form --------------------------------------------------------------


def _format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_scalar(x) -> str:
    """Canonical text: ``p``, ``p/q`` or ``p/q+r/s*sqrt(d)``."""
    if isinstance(x, QuadraticScalar):
        sign = "+" if x.b > 0 else "-"
        return f"{_format_rational(x.a)}{sign}{_format_rational(abs(x.b))}*sqrt({x.d})"
    if isinstance(x, (int, Fraction)):
        return _format_rational(x)
    raise TypeError(f"not an exact scalar: {x!r}")


_RAT = r"-?(?:0|[1-9][0-9]*)(?:/[1-9][0-9]*)?"
_RAT_RE = re.compile(rf"^{_RAT}$")
_QUAD_RE = re.compile(rf"^({_RAT})([+-])({_RAT})\*sqrt\((-?[1-9][0-9]*)\)$")


class ScalarSyntaxError(ValueError):
    pass


def _parse_rational(tok: str):
    if not _RAT_RE.match(tok):
        raise ScalarSyntaxError(f"malformed rational {tok!r}")
    if "/" in tok:
        p, q = tok.split("/")
        p, q = int(p), int(q)
        val = Fraction(p, q)
        if q == 1 or val.numerator != p or val.denominator != q:
            raise ScalarSyntaxError(f"non-canonical rational {tok!r}")
        return val
    if tok == "-0":
        raise ScalarSyntaxError("non-canonical rational '-0'")
    return int(tok)


def parse_scalar(tok: str):
    """Inverse of :func:`format_scalar`; rejects non-canonical spellings."""
    m = _QUAD_RE.match(tok)
    if m:
        a = _parse_rational(m.group(1))
        b = _parse_rational(m.group(3))
        d = int(m.group(4))
        if b == 0 or b < 0:
            raise ScalarSyntaxError(f"non-canonical quadratic scalar {tok!r}")
        if m.group(2) == "-":
            b = -b
        if d in (0, 1) or squarefree_part(d) != d:
            raise ScalarSyntaxError(f"sqrt({d}) is not square-free")
        return QuadraticScalar(a, b, d)
    return norm(_parse_rational(tok))
