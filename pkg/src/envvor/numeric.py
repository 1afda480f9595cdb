"""Exact scalar arithmetic: arbitrary-precision rationals, one-square-root
field extensions, and a floating-point interval filter.

All geometry in this package is computed over these scalars.  A value is
either a rational (``gmpy2.mpq``) or a ``SqrtExt`` representing
``a + b*sqrt(c)`` with rational a, b, c and c >= 0.  Values sharing the same
radicand form a field; comparing values with different radicands is still
decidable with a bounded number of squarings (`sign_two_roots`), which is all
the sweep and the annulus width comparison ever need.

The interval filter evaluates a predicate over outward-rounded double
intervals first and falls back to exact arithmetic only when the interval
straddles zero.  Each fallback is recorded in the global `COUNTERS` as a
filter failure.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple, Union

import gmpy2
from gmpy2 import mpq

Rational = mpq

_INF = math.inf


class IncompatibleExtensions(ValueError):
    """Two square-root extensions with different radicands were combined."""


class Counters:
    """Global instrumentation: predicate calls and exact fallbacks."""

    __slots__ = ("predicate_calls", "filter_failures")

    def __init__(self) -> None:
        self.predicate_calls = 0
        self.filter_failures = 0

    def reset(self) -> None:
        self.predicate_calls = 0
        self.filter_failures = 0

    def snapshot(self) -> tuple[int, int]:
        return (self.predicate_calls, self.filter_failures)


COUNTERS = Counters()


class Interval(NamedTuple):
    """Closed floating interval guaranteed to contain the exact value."""

    lo: float
    hi: float


def _down(v: float) -> float:
    return math.nextafter(v, -_INF) if math.isfinite(v) else v


def _up(v: float) -> float:
    return math.nextafter(v, _INF) if math.isfinite(v) else v


_MAXF = math.nextafter(_INF, 0.0)


def iv_from_rational(q) -> Interval:
    try:
        f = float(q)
    except OverflowError:
        f = _INF if q > 0 else -_INF
    if not math.isfinite(f):
        return Interval(_MAXF, _INF) if f > 0 else Interval(-_INF, -_MAXF)
    if q == f:
        return Interval(f, f)
    return Interval(_down(f), _up(f))


def iv_add(a: Interval, b: Interval) -> Interval:
    return Interval(_down(a.lo + b.lo), _up(a.hi + b.hi))


def iv_sub(a: Interval, b: Interval) -> Interval:
    return Interval(_down(a.lo - b.hi), _up(a.hi - b.lo))


def iv_neg(a: Interval) -> Interval:
    return Interval(-a.hi, -a.lo)


def iv_mul(a: Interval, b: Interval) -> Interval:
    p0 = a.lo * b.lo
    p1 = a.lo * b.hi
    p2 = a.hi * b.lo
    p3 = a.hi * b.hi
    if math.isnan(p0) or math.isnan(p1) or math.isnan(p2) or math.isnan(p3):
        return Interval(-_INF, _INF)
    return Interval(_down(min(p0, p1, p2, p3)), _up(max(p0, p1, p2, p3)))


def iv_square(a: Interval) -> Interval:
    lo, hi = abs(a.lo), abs(a.hi)
    if lo > hi:
        lo, hi = hi, lo
    if a.lo <= 0.0 <= a.hi:
        lo = 0.0
    return Interval(_down(lo * lo) if lo else 0.0, _up(hi * hi))


def iv_sqrt(a: Interval) -> Interval:
    # exact radicands are >= 0; a.lo < 0 only from outward rounding
    lo = math.sqrt(a.lo) if a.lo > 0.0 else 0.0
    hi = math.sqrt(a.hi) if a.hi > 0.0 else 0.0
    return Interval(max(_down(lo), 0.0), _up(hi))


def iv_sign(a: Interval) -> int | None:
    """Sign if decidable from the interval, else None."""
    if a.lo > 0.0:
        return 1
    if a.hi < 0.0:
        return -1
    if a.lo == 0.0 and a.hi == 0.0:
        return 0
    return None


def counted_sign(iv: Interval, exact_fn: Callable[[], int]) -> int:
    """Interval-filtered sign evaluation with fallback accounting.

    This is the single chokepoint for the package's filter-failure
    instrumentation: the exact path runs only when the interval is
    inconclusive, and each such fallback is counted.
    """
    COUNTERS.predicate_calls += 1
    if iv.lo > 0.0:
        return 1
    if iv.hi < 0.0:
        return -1
    if iv.lo == 0.0 and iv.hi == 0.0:
        return 0
    COUNTERS.filter_failures += 1
    return exact_fn()


def _sign_q(q) -> int:
    if q > 0:
        return 1
    if q < 0:
        return -1
    return 0


class SqrtExt:
    """a + b*sqrt(c) over the rationals, c >= 0.

    The radicand is stored as produced by the construction; no square-free
    reduction is attempted.  Use `make_scalar` to build values that collapse
    to a plain rational whenever the result is rational.
    """

    __slots__ = ("a", "b", "c", "_iv")

    def __init__(self, a, b, c):
        self.a = mpq(a)
        self.b = mpq(b)
        self.c = mpq(c)
        if self.c < 0:
            raise ValueError("negative radicand")
        self._iv = None

    def __repr__(self) -> str:
        return f"SqrtExt({self.a}, {self.b}, {self.c})"

    def interval(self) -> Interval:
        iv = self._iv
        if iv is None:
            iv = iv_add(iv_from_rational(self.a),
                        iv_mul(iv_from_rational(self.b),
                               iv_sqrt(iv_from_rational(self.c))))
            self._iv = iv
        return iv

    def is_rational(self) -> bool:
        return self.b == 0 or self.c == 0

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not a rational value")
        return self.a

    # arithmetic within one extension field (rationals mix freely)

    def _coerce(self, other):
        if isinstance(other, SqrtExt):
            if self.b != 0 and self.c != 0 and other.b != 0 and other.c != 0 \
                    and self.c != other.c:
                raise IncompatibleExtensions(
                    f"radicands differ: {self.c} vs {other.c}")
            c = self.c if (self.b != 0 and self.c != 0) else other.c
            return other.a, other.b, c
        return mpq(other), mpq(0), self.c

    def __add__(self, other):
        oa, ob, c = self._coerce(other)
        return make_scalar(self.a + oa, self.b + ob, c)

    __radd__ = __add__

    def __sub__(self, other):
        oa, ob, c = self._coerce(other)
        return make_scalar(self.a - oa, self.b - ob, c)

    def __rsub__(self, other):
        oa, ob, c = self._coerce(other)
        return make_scalar(oa - self.a, ob - self.b, c)

    def __mul__(self, other):
        oa, ob, c = self._coerce(other)
        return make_scalar(self.a * oa + self.b * ob * c,
                           self.a * ob + self.b * oa, c)

    __rmul__ = __mul__

    def __neg__(self):
        return SqrtExt(-self.a, -self.b, self.c)

    def __truediv__(self, other):
        if isinstance(other, SqrtExt) and not other.is_rational():
            # rationalize: 1/(a+b sqrt(c)) = (a-b sqrt(c))/(a^2-b^2 c)
            den = other.a * other.a - other.b * other.b * other.c
            if den == 0:
                raise ZeroDivisionError
            return self * SqrtExt(other.a / den, -other.b / den, other.c)
        q = other.rational_value() if isinstance(other, SqrtExt) else mpq(other)
        return make_scalar(self.a / q, self.b / q, self.c)

    def __rtruediv__(self, other):
        den = self.a * self.a - self.b * self.b * self.c
        if den == 0:
            raise ZeroDivisionError
        inv = SqrtExt(self.a / den, -self.b / den, self.c)
        return inv * other

    def __eq__(self, other):
        try:
            return scalar_cmp(self, other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return scalar_cmp(self, other) < 0

    def __le__(self, other):
        return scalar_cmp(self, other) <= 0

    def __gt__(self, other):
        return scalar_cmp(self, other) > 0

    def __ge__(self, other):
        return scalar_cmp(self, other) >= 0

    __hash__ = None  # value identity needs exact comparison; keep unhashable


Scalar = Union[mpq, SqrtExt]


def _is_square_q(q) -> bool:
    return q >= 0 and gmpy2.is_square(q.numerator) and gmpy2.is_square(q.denominator)


def _sqrt_exact_q(q):
    return mpq(gmpy2.isqrt(q.numerator), gmpy2.isqrt(q.denominator))


def make_scalar(a, b, c) -> Scalar:
    """a + b*sqrt(c), collapsed to a rational when the value is rational."""
    a = mpq(a)
    b = mpq(b)
    c = mpq(c)
    if b == 0 or c == 0:
        return a
    if _is_square_q(c):
        return a + b * _sqrt_exact_q(c)
    return SqrtExt(a, b, c)


def as_rational(x: Scalar):
    if isinstance(x, SqrtExt):
        return x.rational_value()
    return mpq(x)


def is_rational_scalar(x: Scalar) -> bool:
    return not isinstance(x, SqrtExt) or x.is_rational()


def scalar_interval(x: Scalar) -> Interval:
    if isinstance(x, SqrtExt):
        return x.interval()
    return iv_from_rational(x)


def sqrtext_sign(x) -> int:
    """Exact sign of a + b*sqrt(c), by case analysis and one squaring."""
    if not isinstance(x, SqrtExt):
        return _sign_q(mpq(x))
    if x.c < 0:
        raise ValueError("negative radicand")
    if x.b == 0 or x.c == 0:
        return _sign_q(x.a)
    sb = _sign_q(x.b)
    if x.a == 0:
        return sb
    sa = _sign_q(x.a)
    if sa == sb:
        return sa
    d = x.a * x.a - x.b * x.b * x.c
    if d == 0:
        return 0
    return sa if d > 0 else sb


def sqrtext_compare(x, y) -> int:
    """Ordering of two SqrtExt values that are rational or share a radicand.

    Raises IncompatibleExtensions when both have a genuine root part with
    different radicands; `scalar_cmp` handles that general case.
    """
    xa, xb, xc = _parts(x)
    ya, yb, yc = _parts(y)
    x_irr = xb != 0 and xc != 0
    y_irr = yb != 0 and yc != 0
    if x_irr and y_irr and xc != yc:
        raise IncompatibleExtensions(f"radicands differ: {xc} vs {yc}")
    c = xc if x_irr else yc
    return sqrtext_sign(SqrtExt(xa - ya, xb - yb, c))


def _parts(x):
    if isinstance(x, SqrtExt):
        return x.a, x.b, x.c
    return mpq(x), mpq(0), mpq(0)


def to_interval(x) -> Interval:
    """Enclosing double interval of a scalar; [v, v] when v is exactly a double."""
    if isinstance(x, SqrtExt):
        if x.is_rational():
            return iv_from_rational(x.a)
        return x.interval()
    return iv_from_rational(x)


# -- sign of q + s*sqrt(u) + t*sqrt(v): the bounded two-root procedure -------

def _term_list(q, s, u, t, v):
    """Split into signed (positive-magnitude) terms; roots kept symbolic."""
    pos = []
    neg = []
    if q > 0:
        pos.append(("rat", q))
    elif q < 0:
        neg.append(("rat", -q))
    for coeff, rad in ((s, u), (t, v)):
        if coeff == 0 or rad == 0:
            continue
        if _is_square_q(rad):
            r = coeff * _sqrt_exact_q(rad)
            if r > 0:
                pos.append(("rat", r))
            elif r < 0:
                neg.append(("rat", -r))
        elif coeff > 0:
            pos.append(("root", coeff, rad))
        else:
            neg.append(("root", -coeff, rad))
    return pos, neg


def _merge_rats(terms):
    rats = [t[1] for t in terms if t[0] == "rat"]
    roots = [t for t in terms if t[0] == "root"]
    if len(rats) > 1:
        roots.append(("rat", sum(rats)))
        return roots
    return terms


def _sq(term):
    # square of a positive term, a rational
    if term[0] == "rat":
        return term[1] * term[1]
    return term[1] * term[1] * term[2]


def _cmp_single(x, y) -> int:
    # both terms positive
    if x[0] == "rat" and y[0] == "rat":
        return _sign_q(x[1] - y[1])
    return _sign_q(_sq(x) - _sq(y))


def _cmp_pair_single(pair, single) -> int:
    # sign of (x + y) - z for positive terms x, y, z: one more squaring
    x, y = pair
    r = _sq(x) + _sq(y) - _sq(single)
    # (x+y)^2 vs z^2  <=>  r + 2xy vs 0, with xy > 0
    if r >= 0:
        return 1
    # compare r^2 vs 4 x^2 y^2 (both rational); sign flips since r < 0
    return _sign_q(4 * _sq(x) * _sq(y) - r * r)


def sign_two_roots(q, s, u, t, v) -> int:
    """Exact sign of q + s*sqrt(u) + t*sqrt(v), u, v >= 0 rational.

    Terminates after at most two squarings; no nested radicals are formed.
    """
    q, s, u, t, v = mpq(q), mpq(s), mpq(u), mpq(t), mpq(v)
    if u < 0 or v < 0:
        raise ValueError("negative radicand")
    pos, neg = _term_list(q, s, u, t, v)
    pos = _merge_rats(pos)
    neg = _merge_rats(neg)
    if not neg:
        return 1 if pos else 0
    if not pos:
        return -1
    if len(pos) == 1 and len(neg) == 1:
        return _cmp_single(pos[0], neg[0])
    if len(pos) == 2:
        return _cmp_pair_single(pos, neg[0])
    return -_cmp_pair_single(neg, pos[0])


def scalar_sign(x: Scalar) -> int:
    if isinstance(x, SqrtExt):
        return sqrtext_sign(x)
    return _sign_q(x)


def scalar_cmp(x: Scalar, y: Scalar) -> int:
    """Exact comparison of any two scalars, radicands need not match.

    A cached float-interval prefilter resolves the generic cases; ties and
    near-ties go through the bounded two-root sign procedure.
    """
    xe = isinstance(x, SqrtExt)
    ye = isinstance(y, SqrtExt)
    if not xe and not ye:
        if x < y:
            return -1
        if x > y:
            return 1
        return 0
    ivx = x.interval() if xe else iv_from_rational(x)
    ivy = y.interval() if ye else iv_from_rational(y)
    if ivx.lo > ivy.hi:
        return 1
    if ivx.hi < ivy.lo:
        return -1
    xa, xb, xc = _parts(x)
    ya, yb, yc = _parts(y)
    return sign_two_roots(xa - ya, xb, xc, -yb, yc)


def scalar_min(x: Scalar, y: Scalar) -> Scalar:
    return x if scalar_cmp(x, y) <= 0 else y


def scalar_max(x: Scalar, y: Scalar) -> Scalar:
    return x if scalar_cmp(x, y) >= 0 else y


# -- directed mpfr evaluation, used to separate nearly-equal scalars ---------

def scalar_mpfr_bounds(x: Scalar, prec: int):
    """(lo, hi) mpfr bounds of x at the given precision (directed rounding)."""
    ctx_d = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
    ctx_u = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
    if not isinstance(x, SqrtExt) or x.is_rational():
        q = as_rational(x)
        return gmpy2.mpfr(q, prec, ctx_d), gmpy2.mpfr(q, prec, ctx_u)
    c_lo = ctx_d.sqrt(gmpy2.mpfr(x.c, prec, ctx_d))
    c_hi = ctx_u.sqrt(gmpy2.mpfr(x.c, prec, ctx_u))
    b_lo = gmpy2.mpfr(x.b, prec, ctx_d)
    b_hi = gmpy2.mpfr(x.b, prec, ctx_u)
    if x.b >= 0:
        t_lo, t_hi = ctx_d.mul(b_lo, c_lo), ctx_u.mul(b_hi, c_hi)
    else:
        t_lo, t_hi = ctx_d.mul(b_lo, c_hi), ctx_u.mul(b_hi, c_lo)
    lo = ctx_d.add(gmpy2.mpfr(x.a, prec, ctx_d), t_lo)
    hi = ctx_u.add(gmpy2.mpfr(x.a, prec, ctx_u), t_hi)
    return lo, hi


def rational_between(x: Scalar, y: Scalar):
    """A rational strictly between x < y."""
    if scalar_cmp(x, y) >= 0:
        raise ValueError("need x < y")
    ivx = scalar_interval(x)
    ivy = scalar_interval(y)
    if ivx.hi < ivy.lo and math.isfinite(ivx.hi) and math.isfinite(ivy.lo):
        cand = mpq((ivx.hi + ivy.lo) / 2.0) if math.isfinite(ivx.hi + ivy.lo) \
            else mpq(0)
        if scalar_cmp(x, cand) < 0 and scalar_cmp(cand, y) < 0:
            return cand
    prec = 64
    while prec <= 16384:
        _, x_hi = scalar_mpfr_bounds(x, prec)
        y_lo, _ = scalar_mpfr_bounds(y, prec)
        if x_hi < y_lo:
            cand = (mpq(x_hi) + mpq(y_lo)) / 2
            if scalar_cmp(x, cand) < 0 and scalar_cmp(cand, y) < 0:
                return cand
        prec *= 2
    raise ArithmeticError("failed to separate scalars")


# -- serialization ------------------------------------------------------------

def rational_str(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_from_str(s: str):
    return mpq(s)


def scalar_to_json(x: Scalar):
    if isinstance(x, SqrtExt) and not x.is_rational():
        return {"a": rational_str(x.a), "b": rational_str(x.b),
                "c": rational_str(x.c)}
    return rational_str(as_rational(x))


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, dict):
        return make_scalar(mpq(obj["a"]), mpq(obj["b"]), mpq(obj["c"]))
    return mpq(obj)
