"""Exact coefficient field: rational functions in m over Q(i), adjoined s with s^2 = -i*m.

Since ``m = i*s^2`` the field is the rational function field Q(i)(s), and
values are stored that way: a reduced fraction ``num(s)/den(s)`` with
``num`` a Laurent polynomial and ``den`` a monic polynomial with nonzero
constant term, or ``None`` when the value is a Laurent polynomial. The
``a0 + a1*s`` form with ``a0, a1`` rational in ``m`` is derived on demand
for rendering and for the :attr:`Scalar.a0` / :attr:`Scalar.a1` views.

Everything on the Laurent fast path avoids gcd computations; catalog
operators never leave it.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

from gmpy2 import mpq

from . import expr as _expr

Rational = type(mpq())
Gauss = tuple  # (re: mpq, im: mpq)

_Q0 = mpq(0)
_Q1 = mpq(1)
_G0 = (_Q0, _Q0)
_G1 = (_Q1, _Q0)
_GI = (_Q0, _Q1)


def rational(numerator, denominator=1) -> Rational:
    """Canonical arbitrary-precision rational ``numerator/denominator``."""
    if denominator == 0:
        raise ZeroDivisionError("rational with zero denominator")
    return _to_q(numerator) / _to_q(denominator)


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _ginv(a):
    n = a[0] * a[0] + a[1] * a[1]
    if n == 0:
        raise ZeroDivisionError("inverse of zero")
    return (a[0] / n, -a[1] / n)


def _gzero(a) -> bool:
    return a[0] == 0 and a[1] == 0


# --------------------------------------------------------------------------
# Dense univariate polynomials over Q(i)
# --------------------------------------------------------------------------


class GaussPoly:
    """Polynomial with Gaussian rational coefficients, stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [(mpq(c[0]), mpq(c[1])) for c in coeffs]
        while cs and _gzero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: list) -> GaussPoly:
        while coeffs and _gzero(coeffs[-1]):
            coeffs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(coeffs)
        return p

    @classmethod
    def constant(cls, c) -> GaussPoly:
        return cls._raw([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, GaussPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"GaussPoly({self.render('x')!r})"

    def __add__(self, other: GaussPoly) -> GaussPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = (out[k][0] + c[0], out[k][1] + c[1])
        return GaussPoly._raw(out)

    def __neg__(self) -> GaussPoly:
        return GaussPoly._raw([(-c[0], -c[1]) for c in self.coeffs])

    def __sub__(self, other: GaussPoly) -> GaussPoly:
        return self + (-other)

    def __mul__(self, other: GaussPoly) -> GaussPoly:
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return GaussPoly._raw([])
        out = [_G0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if _gzero(x):
                continue
            for j, y in enumerate(b):
                p = _gmul(x, y)
                o = out[i + j]
                out[i + j] = (o[0] + p[0], o[1] + p[1])
        return GaussPoly._raw(out)

    def scale(self, c) -> GaussPoly:
        return GaussPoly._raw([_gmul(c, x) for x in self.coeffs])

    def monic(self) -> GaussPoly:
        return self.scale(_ginv(self.lc))

    def __divmod__(self, other: GaussPoly):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv_lc = _ginv(other.lc)
        if len(rem) - 1 < db:
            return GaussPoly._raw([]), self
        quot = [_G0] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db]
            if _gzero(c):
                continue
            f = _gmul(c, inv_lc)
            quot[k] = f
            for j, y in enumerate(other.coeffs):
                p = _gmul(f, y)
                r = rem[k + j]
                rem[k + j] = (r[0] - p[0], r[1] - p[1])
        return GaussPoly._raw(quot), GaussPoly._raw(rem[:db])

    def __floordiv__(self, other: GaussPoly) -> GaussPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: GaussPoly) -> GaussPoly:
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = _G0
        for c in reversed(self.coeffs):
            acc = _gmul(acc, x)
            acc = (acc[0] + c[0], acc[1] + c[1])
        return acc

    def render(self, var: str = "m") -> str:
        """Descending-degree rendering, parseable by :func:`parse_scalar`."""
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if _gzero(c):
                continue
            parts.append(_render_term(c, var, k))
        return _join_signed(parts)


def poly_gcd(a: GaussPoly, b: GaussPoly) -> GaussPoly:
    """Monic gcd (the zero polynomial only when both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def _render_gauss(c) -> tuple[int, str]:
    """(sign, body) for a nonzero Gaussian rational; body is atom-like."""
    re_, im_ = c
    if im_ == 0:
        return (1 if re_ > 0 else -1), _render_q(abs(re_))
    if re_ == 0:
        mag = abs(im_)
        body = "i" if mag == 1 else f"{_render_q(mag)}*i"
        return (1 if im_ > 0 else -1), body
    im_part = "i" if abs(im_) == 1 else f"{_render_q(abs(im_))}*i"
    op = "+" if im_ > 0 else "-"
    return 1, f"({_render_q_signed(re_)} {op} {im_part})"


def _render_q(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"({q.numerator}/{q.denominator})"


def _render_q_signed(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _render_term(c, var: str, k: int) -> tuple[int, str]:
    sign, body = _render_gauss(c)
    if k == 0:
        return sign, body
    mono = var if k == 1 else f"{var}^{k}"
    if body == "1":
        return sign, mono
    return sign, f"{body}*{mono}"


def _join_signed(parts: list[tuple[int, str]]) -> str:
    out = []
    for idx, (sign, body) in enumerate(parts):
        if idx == 0:
            out.append(body if sign > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if sign > 0 else f" - {body}")
    return "".join(out)


# --------------------------------------------------------------------------
# Laurent polynomials in s (dict exponent -> Gaussian rational)
# --------------------------------------------------------------------------


def _ladd(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for e, c in b.items():
        o = out.get(e)
        if o is None:
            out[e] = c
        else:
            r = (o[0] + c[0], o[1] + c[1])
            if r[0] == 0 and r[1] == 0:
                del out[e]
            else:
                out[e] = r
    return out


def _lmul(a: dict, b: dict) -> dict:
    if len(a) == 1 and len(b) == 1:
        (e1, x), = a.items()
        (e2, y), = b.items()
        return {e1 + e2: (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])}
    out: dict = {}
    for e1, x in a.items():
        x0, x1 = x
        for e2, y in b.items():
            e = e1 + e2
            re_ = x0 * y[0] - x1 * y[1]
            im_ = x0 * y[1] + x1 * y[0]
            o = out.get(e)
            if o is not None:
                re_ += o[0]
                im_ += o[1]
            out[e] = (re_, im_)
    return {e: c for e, c in out.items() if c[0] != 0 or c[1] != 0}


def _lscale(a: dict, c) -> dict:
    if c[1] == 0:
        k = c[0]
        return {e: (x[0] * k, x[1] * k) for e, x in a.items()}
    return {e: _gmul(x, c) for e, x in a.items()}


def _lneg(a: dict) -> dict:
    return {e: (-x[0], -x[1]) for e, x in a.items()}


def _split_laurent(a: dict) -> tuple[int, GaussPoly]:
    """Write a nonzero Laurent polynomial as s^k * p(s) with p(0) != 0."""
    k = min(a)
    top = max(a)
    coeffs = [a.get(e, _G0) for e in range(k, top + 1)]
    return k, GaussPoly._raw(coeffs)


def _join_laurent(k: int, p: GaussPoly) -> dict:
    return {k + j: c for j, c in enumerate(p.coeffs) if not _gzero(c)}


def _poly_as_laurent(p: GaussPoly) -> dict:
    return {j: c for j, c in enumerate(p.coeffs) if not _gzero(c)}


# --------------------------------------------------------------------------
# Scalar
# --------------------------------------------------------------------------

ScalarLike = Union["Scalar", int, Fraction, Rational]


class Scalar:
    """Immutable element of the coefficient field.

    Construct from rationals (``Scalar(3)``, ``Scalar(Fraction(1, 2))``),
    the named generators :data:`I`, :data:`M`, :data:`S`, or by parsing the
    text rendering (``Scalar.parse("(1 + i)/m")``).
    """

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, value=0, imag=0):
        if isinstance(value, Scalar):
            self._num, self._den = value._num, value._den
        else:
            c = (_to_q(value), _to_q(imag))
            self._num = {} if _gzero(c) else {0: c}
            self._den = None
        self._hash = None

    @classmethod
    def _make(cls, num: dict, den) -> Scalar:
        x = object.__new__(cls)
        x._num = num
        x._den = den
        x._hash = None
        return x

    @classmethod
    def _normalize(cls, num: dict, den: GaussPoly | None) -> Scalar:
        if not num:
            return ZERO
        if den is None:
            return cls._make(num, None)
        if den.degree == 0:
            return cls._make(_lscale(num, _ginv(den.coeffs[0])), None)
        k, p = _split_laurent(num)
        g = poly_gcd(p, den)
        if g.degree > 0:
            p = p // g
            den = den // g
        lc = den.lc
        if lc != _G1:
            inv_lc = _ginv(lc)
            p = p.scale(inv_lc)
            den = den.scale(inv_lc)
        if den.degree == 0:
            return cls._make(_join_laurent(k, p), None)
        return cls._make(_join_laurent(k, p), den)

    @classmethod
    def gauss(cls, re_, im_=0) -> Scalar:
        return cls(re_, im_)

    @classmethod
    def s_power(cls, k: int, coeff=(1, 0)) -> Scalar:
        """``coeff * s**k`` for any integer ``k``."""
        c = (_to_q(coeff[0]), _to_q(coeff[1]))
        return cls._make({k: c} if not _gzero(c) else {}, None)

    @classmethod
    def parse(cls, text: str) -> Scalar:
        """Parse the text rendering (any expression over rationals, i, m, s)."""
        value = _expr.evaluate(_expr.parse(text), _SCALAR_SYMBOLS.__getitem__)
        return as_scalar(value)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._num

    def __bool__(self) -> bool:
        return bool(self._num)

    def is_laurent(self) -> bool:
        """True when the value is a Laurent polynomial in s (no denominator)."""
        return self._den is None

    def is_rational(self) -> bool:
        return self._den is None and (not self._num or (len(self._num) == 1 and 0 in self._num
                                                        and self._num[0][1] == 0))

    def __eq__(self, other) -> bool:
        if type(other) is not Scalar:
            try:
                other = as_scalar(other)
            except TypeError:
                return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self._num.items()), self._den))
        return self._hash

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> Scalar:
        if type(other) is not Scalar:
            other = _coerce(other)
            if other is NotImplemented:
                return other
        if self._den is None and other._den is None:
            return Scalar._make(_ladd(self._num, other._num), None)
        return _general_add(self, other)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar._make(_lneg(self._num), self._den)

    def __sub__(self, other) -> Scalar:
        if type(other) is not Scalar:
            other = _coerce(other)
            if other is NotImplemented:
                return other
        return self + (-other)

    def __rsub__(self, other) -> Scalar:
        return (-self) + other

    def __mul__(self, other) -> Scalar:
        t = type(other)
        if t is int:
            if other == 0:
                return ZERO
            k = mpq(other)
            return Scalar._make({e: (x[0] * k, x[1] * k) for e, x in self._num.items()}, self._den)
        if t is not Scalar:
            other = _coerce(other)
            if other is NotImplemented:
                return other
        if self._den is None and other._den is None:
            return Scalar._make(_lmul(self._num, other._num), None)
        return _general_mul(self, other)

    __rmul__ = __mul__

    def inv(self) -> Scalar:
        if not self._num:
            raise ZeroDivisionError("inverse of zero Scalar")
        if self._den is None and len(self._num) == 1:
            (e, c), = self._num.items()
            return Scalar._make({-e: _ginv(c)}, None)
        k, p = _split_laurent(self._num)
        num = {-k: _G1} if self._den is None else _join_laurent(-k, self._den)
        return Scalar._normalize(num, p)

    def __truediv__(self, other) -> Scalar:
        if type(other) is not Scalar:
            other = _coerce(other)
            if other is NotImplemented:
                return other
        return self * other.inv()

    def __rtruediv__(self, other) -> Scalar:
        return as_scalar(other) * self.inv()

    def __pow__(self, k: int) -> Scalar:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate_s(self) -> Scalar:
        """Image under the field automorphism s -> -s."""
        num = {e: ((-c[0], -c[1]) if e % 2 else c) for e, c in self._num.items()}
        den = None
        if self._den is not None:
            den = GaussPoly._raw([(-c[0], -c[1]) if j % 2 else c for j, c in enumerate(self._den.coeffs)])
            # keep the denominator monic
            return Scalar._normalize(num, den)
        return Scalar._make(num, None)

    # -- views ------------------------------------------------------------

    def components(self) -> tuple[tuple[GaussPoly, GaussPoly], tuple[GaussPoly, GaussPoly]]:
        """Return ``((p0, q0), (p1, q1))`` with value ``p0/q0 + (p1/q1)*s``.

        Each fraction is reduced over Q(i)[m] with monic denominator.
        """
        num = self._num
        den_s = _G1_POLY
        if self._den is not None:
            conj = GaussPoly._raw([(-c[0], -c[1]) if j % 2 else c for j, c in enumerate(self._den.coeffs)])
            num = _lmul(num, _poly_as_laurent(conj))
            den_s = self._den * conj
        # den_s is even in s: rewrite as a polynomial in m via s^2 = -i*m
        den_m = GaussPoly._raw([_gmul(c, _minus_i_pow(j // 2)) for j, c in enumerate(den_s.coeffs) if j % 2 == 0])
        even = {}
        odd = {}
        for e, c in num.items():
            if e % 2 == 0:
                even[e // 2] = _gmul(c, _minus_i_pow(e // 2))
            else:
                odd[(e - 1) // 2] = _gmul(c, _minus_i_pow((e - 1) // 2))
        return _reduce_m(even, den_m), _reduce_m(odd, den_m)

    @property
    def a0(self) -> tuple[GaussPoly, GaussPoly]:
        return self.components()[0]

    @property
    def a1(self) -> tuple[GaussPoly, GaussPoly]:
        return self.components()[1]

    def laurent_terms(self) -> dict:
        """Laurent coefficients in s; only valid when :meth:`is_laurent`."""
        if self._den is not None:
            raise ValueError("Scalar has a nontrivial denominator")
        return dict(self._num)

    def to_complex(self, s_value: complex) -> complex:
        """Numeric evaluation at a chosen value of s (test oracles only)."""
        num = sum(complex(float(c[0]), float(c[1])) * s_value**e for e, c in self._num.items())
        if self._den is None:
            return num
        den = sum(complex(float(c[0]), float(c[1])) * s_value**j for j, c in enumerate(self._den.coeffs))
        return num / den

    def render(self) -> str:
        (p0, q0), (p1, q1) = self.components()
        parts = []
        if not p0.is_zero():
            parts.append(_render_fraction(p0, q0))
        if not p1.is_zero():
            f = _render_fraction(p1, q1)
            if f[1] == "1":
                parts.append((f[0], "s"))
            else:
                parts.append((f[0], f"{f[1]}*s"))
        if not parts:
            return "0"
        return _join_signed(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Scalar({self.render()!r})"

    def __reduce__(self):
        return (Scalar._make, (self._num, self._den))


_G1_POLY = GaussPoly._raw([_G1])


def _minus_i_pow(j: int):
    # (-i)^j for any integer j
    return [(_Q1, _Q0), (_Q0, -_Q1), (-_Q1, _Q0), (_Q0, _Q1)][j % 4]


def _reduce_m(laurent: dict, den: GaussPoly) -> tuple[GaussPoly, GaussPoly]:
    if not laurent:
        return GaussPoly._raw([]), _G1_POLY
    k, p = _split_laurent(laurent)
    if k < 0:
        den = den * GaussPoly._raw([_G0] * (-k) + [_G1])
        k = 0
    p = GaussPoly._raw([_G0] * k + list(p.coeffs))
    g = poly_gcd(p, den)
    if g.degree > 0:
        p = p // g
        den = den // g
    inv_lc = _ginv(den.lc)
    return p.scale(inv_lc), den.scale(inv_lc)


def _render_fraction(p: GaussPoly, q: GaussPoly) -> tuple[int, str]:
    if q.degree == 0:
        if len([c for c in p.coeffs if not _gzero(c)]) == 1:
            k = p.degree
            return _render_term(p.lc, "m", k)
        return 1, f"({p.render('m')})"
    num = p.render("m")
    sign = 1
    if len([c for c in p.coeffs if not _gzero(c)]) == 1:
        sign, body = _render_term(p.lc, "m", p.degree)
        num = body
    else:
        num = f"({num})"
    nonzero = [c for c in q.coeffs if not _gzero(c)]
    den = q.render("m")
    if len(nonzero) > 1 or "*" in den:
        den = f"({den})"
    return sign, f"{num}/{den}"


def _to_q(x) -> Rational:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, (int, Rational)):
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def _coerce(x):
    if isinstance(x, (int, Fraction, Rational)):
        return Scalar(x)
    return NotImplemented


def as_scalar(x: ScalarLike) -> Scalar:
    if isinstance(x, Scalar):
        return x
    y = _coerce(x)
    if y is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar")
    return y


def _general_add(x: Scalar, y: Scalar) -> Scalar:
    if x._den is None:
        num = _ladd(_lmul(x._num, _poly_as_laurent(y._den)), y._num)
        return Scalar._normalize(num, y._den)
    if y._den is None:
        num = _ladd(x._num, _lmul(y._num, _poly_as_laurent(x._den)))
        return Scalar._normalize(num, x._den)
    if x._den == y._den:
        return Scalar._normalize(_ladd(x._num, y._num), x._den)
    num = _ladd(_lmul(x._num, _poly_as_laurent(y._den)), _lmul(y._num, _poly_as_laurent(x._den)))
    return Scalar._normalize(num, x._den * y._den)


def _general_mul(x: Scalar, y: Scalar) -> Scalar:
    if not x._num or not y._num:
        return ZERO
    num = _lmul(x._num, y._num)
    if x._den is None:
        den = y._den
    elif y._den is None:
        den = x._den
    else:
        den = x._den * y._den
    return Scalar._normalize(num, den)


ZERO = Scalar._make({}, None)
ONE = Scalar._make({0: _G1}, None)
I = Scalar._make({0: _GI}, None)
S = Scalar._make({1: _G1}, None)
M = Scalar._make({2: _GI}, None)  # m = i*s^2

_SCALAR_SYMBOLS = {"i": I, "m": M, "s": S}


def parse_scalar(text: str) -> Scalar:
    return Scalar.parse(text)


def format_scalar(x: Scalar) -> str:
    return x.render()
