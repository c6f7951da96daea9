"""Validated arithmetic kernel.

Four number layers, from fastest to most precise:

* ``FloatInterval``: IEEE binary64 intervals with outward rounding by one ulp
  and hard magnitude guards.  Used in fast search paths.
* ``RatInterval``: exact rational intervals.  Used wherever endpoints stay small.
* ``PrecInterval``: arbitrary-precision rational intervals with validated
  ``sqrt``/``log``/``exp``/``pow`` built from self-contained series with
  explicit remainder bounds.  Used for every decimal constant we certify.
* ``QuadNum``: exact elements a + b*sqrt(3), with exact sign evaluation.

All values are immutable and all operations are pure.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import gmpy2

from .errors import DomainError, GuardViolation, PrecisionExhausted

BigRat = Fraction

Ratlike = Union[int, Fraction]

# Magnitude guards for binary64 interval ops; results may never exceed R0.
ADD_GUARD = 2.0 ** 40
MUL_BIG_GUARD = 2.0 ** 40
MUL_SMALL_GUARD = 2.0 ** 10
DIV_NUM_GUARD = 2.0 ** 40
DIV_DEN_LO = 2.0 ** -10
DIV_DEN_HI = 2.0 ** 10
R0 = 2.0 ** 50

_TINY = math.ulp(0.0)  # smallest positive subnormal


def float_succ(x: float) -> float:
    """Next binary64 value above x; at 0.0 steps to the smallest subnormal."""
    if x != x:
        raise GuardViolation("succ of NaN")
    return math.nextafter(x, math.inf)


def float_pred(x: float) -> float:
    """Next binary64 value below x; at 0.0 steps to minus the smallest subnormal."""
    if x != x:
        raise GuardViolation("pred of NaN")
    return math.nextafter(x, -math.inf)


def default_precision() -> int:
    """Default PrecInterval precision in bits (env PENTACHARGE_PRECISION)."""
    raw = os.environ.get("PENTACHARGE_PRECISION", "")
    try:
        bits = int(raw)
    except ValueError:
        bits = 0
    return bits if bits >= 8 else 128


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # exact: binary64 is dyadic
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact rational")


@dataclass(frozen=True)
class RatInterval:
    """Closed interval with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_fraction(self.lo))
        object.__setattr__(self, "hi", _as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x) -> "RatInterval":
        x = _as_fraction(x)
        return RatInterval(x, x)

    def contains(self, x) -> bool:
        x = _as_fraction(x)
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "RatInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def mag(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def __add__(self, other) -> "RatInterval":
        other = _coerce_rat(other)
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other) -> "RatInterval":
        other = _coerce_rat(other)
        return RatInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other) -> "RatInterval":
        return _coerce_rat(other) - self

    def __mul__(self, other) -> "RatInterval":
        other = _coerce_rat(other)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RatInterval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatInterval":
        other = _coerce_rat(other)
        if other.lo <= 0 <= other.hi:
            raise GuardViolation("division by an interval containing zero")
        quotients = (
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        )
        return RatInterval(min(quotients), max(quotients))

    def __rtruediv__(self, other) -> "RatInterval":
        return _coerce_rat(other) / self

    def __pow__(self, n: int) -> "RatInterval":
        if not isinstance(n, int) or n < 0:
            raise ValueError("integer power with n >= 0 only")
        result = RatInterval.point(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def hull(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __repr__(self) -> str:
        return f"RatInterval({self.lo}, {self.hi})"


def _coerce_rat(x) -> RatInterval:
    if isinstance(x, RatInterval):
        return x
    return RatInterval.point(x)


def rat_interval_op(i1: RatInterval, i2: RatInterval, op: str) -> RatInterval:
    """Exact endpoint arithmetic; result is the minimal interval containing the image."""
    if op in ("+",):
        return i1 + i2
    if op in ("-", "−"):
        return i1 - i2
    if op in ("*", "×"):
        return i1 * i2
    if op in ("/", "÷"):
        return i1 / i2
    raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class FloatInterval:
    """binary64 interval; every op rounds outward one ulp and checks guards."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = self.lo, self.hi
        if lo != lo or hi != hi:
            raise GuardViolation("NaN endpoint")
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        if max(abs(lo), abs(hi)) > R0:
            raise GuardViolation("endpoint magnitude above R0")

    @staticmethod
    def point(x: float) -> "FloatInterval":
        x = float(x)
        return FloatInterval(x, x)

    @staticmethod
    def from_rat(lo, hi=None) -> "FloatInterval":
        """Smallest float interval containing the rational interval [lo, hi]."""
        lo = _as_fraction(lo)
        hi = lo if hi is None else _as_fraction(hi)
        flo = float(lo)
        if Fraction(flo) > lo:
            flo = float_pred(flo)
        fhi = float(hi)
        if Fraction(fhi) < hi:
            fhi = float_succ(fhi)
        return FloatInterval(flo, fhi)

    def to_rat(self) -> RatInterval:
        return RatInterval(Fraction(self.lo), Fraction(self.hi))

    def contains(self, x) -> bool:
        if isinstance(x, float):
            return self.lo <= x <= self.hi
        x = _as_fraction(x)
        return Fraction(self.lo) <= x <= Fraction(self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    def __neg__(self) -> "FloatInterval":
        return FloatInterval(-self.hi, -self.lo)

    def __add__(self, other) -> "FloatInterval":
        other = _coerce_float(other)
        if max(self.mag(), other.mag()) > ADD_GUARD:
            raise GuardViolation("add operand above 2^40")
        return FloatInterval(float_pred(self.lo + other.lo), float_succ(self.hi + other.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "FloatInterval":
        other = _coerce_float(other)
        if max(self.mag(), other.mag()) > ADD_GUARD:
            raise GuardViolation("sub operand above 2^40")
        return FloatInterval(float_pred(self.lo - other.hi), float_succ(self.hi - other.lo))

    def __rsub__(self, other) -> "FloatInterval":
        return _coerce_float(other) - self

    def __mul__(self, other) -> "FloatInterval":
        other = _coerce_float(other)
        big, small = self.mag(), other.mag()
        if big < small:
            big, small = small, big
        if big >= MUL_BIG_GUARD or small >= MUL_SMALL_GUARD:
            raise GuardViolation("mul operands escape (2^40, 2^10) guard")
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return FloatInterval(float_pred(min(products)), float_succ(max(products)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FloatInterval":
        other = _coerce_float(other)
        if self.mag() > DIV_NUM_GUARD:
            raise GuardViolation("div numerator above 2^40")
        dmin = min(abs(other.lo), abs(other.hi))
        if other.lo <= 0.0 <= other.hi or dmin < DIV_DEN_LO or other.mag() > DIV_DEN_HI:
            raise GuardViolation("div denominator escapes [2^-10, 2^10] guard")
        quotients = (
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        )
        return FloatInterval(float_pred(min(quotients)), float_succ(max(quotients)))

    def __rtruediv__(self, other) -> "FloatInterval":
        return _coerce_float(other) / self

    def __pow__(self, n: int) -> "FloatInterval":
        if not isinstance(n, int) or n < 0:
            raise ValueError("integer power with n >= 0 only")
        result = FloatInterval.point(1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self) -> str:
        return f"FloatInterval({self.lo!r}, {self.hi!r})"


def _coerce_float(x) -> FloatInterval:
    if isinstance(x, FloatInterval):
        return x
    if isinstance(x, float):
        return FloatInterval.point(x)
    if isinstance(x, int):
        return FloatInterval.from_rat(Fraction(x))
    if isinstance(x, Fraction):
        return FloatInterval.from_rat(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to FloatInterval")


def float_interval_op(i1: FloatInterval, i2: FloatInterval, op: str) -> FloatInterval:
    """Guarded binary64 interval arithmetic with outward rounding."""
    if op in ("+",):
        return i1 + i2
    if op in ("-", "−"):
        return i1 - i2
    if op in ("*", "×"):
        return i1 * i2
    if op in ("/", "÷"):
        return i1 / i2
    raise ValueError(f"unknown op {op!r}")


def _round_down(x: Fraction, bits: int) -> Fraction:
    scaled = x * (1 << bits)
    return Fraction(scaled.numerator // scaled.denominator, 1 << bits)


def _round_up(x: Fraction, bits: int) -> Fraction:
    scaled = x * (1 << bits)
    return Fraction(-((-scaled.numerator) // scaled.denominator), 1 << bits)


@dataclass(frozen=True)
class PrecInterval:
    """Arbitrary-precision rational interval with a working precision in bits."""

    lo: Fraction
    hi: Fraction
    prec: int = 0  # 0 means "use the package default"

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_fraction(self.lo))
        object.__setattr__(self, "hi", _as_fraction(self.hi))
        if self.prec <= 0:
            object.__setattr__(self, "prec", default_precision())
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x, prec: int = 0) -> "PrecInterval":
        x = _as_fraction(x)
        return PrecInterval(x, x, prec)

    def with_prec(self, prec: int) -> "PrecInterval":
        return PrecInterval(self.lo, self.hi, prec)

    def contains(self, x) -> bool:
        x = _as_fraction(x)
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "PrecInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def mag(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def sign(self) -> int:
        """Definite sign, or raise if the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        raise PrecisionExhausted(f"sign undecided on [{self.lo}, {self.hi}]")

    def outward(self, bits: int = 0) -> "PrecInterval":
        """Round endpoints outward to the dyadic grid with 2^-bits spacing."""
        bits = bits or self.prec
        return PrecInterval(_round_down(self.lo, bits), _round_up(self.hi, bits), self.prec)

    def __neg__(self) -> "PrecInterval":
        return PrecInterval(-self.hi, -self.lo, self.prec)

    def __add__(self, other) -> "PrecInterval":
        other = _coerce_prec(other, self.prec)
        return PrecInterval(self.lo + other.lo, self.hi + other.hi, max(self.prec, other.prec))

    __radd__ = __add__

    def __sub__(self, other) -> "PrecInterval":
        other = _coerce_prec(other, self.prec)
        return PrecInterval(self.lo - other.hi, self.hi - other.lo, max(self.prec, other.prec))

    def __rsub__(self, other) -> "PrecInterval":
        return _coerce_prec(other, self.prec) - self

    def __mul__(self, other) -> "PrecInterval":
        other = _coerce_prec(other, self.prec)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return PrecInterval(min(products), max(products), max(self.prec, other.prec))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PrecInterval":
        other = _coerce_prec(other, self.prec)
        if other.lo <= 0 <= other.hi:
            raise GuardViolation("division by an interval containing zero")
        quotients = (
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        )
        return PrecInterval(min(quotients), max(quotients), max(self.prec, other.prec))

    def __rtruediv__(self, other) -> "PrecInterval":
        return _coerce_prec(other, self.prec) / self

    def __pow__(self, n: int) -> "PrecInterval":
        if not isinstance(n, int) or n < 0:
            raise ValueError("integer power with n >= 0 only")
        result = PrecInterval.point(1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self) -> str:
        return f"PrecInterval({self.lo}, {self.hi}, prec={self.prec})"


def _coerce_prec(x, prec: int) -> PrecInterval:
    if isinstance(x, PrecInterval):
        return x
    if isinstance(x, RatInterval):
        return PrecInterval(x.lo, x.hi, prec)
    return PrecInterval.point(x, prec)


# ---------------------------------------------------------------------------
# Validated elementary functions.
#
# Every enclosure below is a partial sum of an explicit series plus an explicit
# remainder bound, all in exact rational arithmetic.  No platform libm call
# participates in any certified value.
# ---------------------------------------------------------------------------


def _sqrt_point(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    # sqrt(p/q) = sqrt(p*q)/q; scale by 4^bits so isqrt gives 2^-bits resolution
    p, q = x.numerator, x.denominator
    n = p * q << (2 * bits)
    s = math.isqrt(n)
    denom = q << bits
    lo = Fraction(s, denom)
    hi = lo if s * s == n else Fraction(s + 1, denom)
    return lo, hi


def validated_sqrt(x, prec: int = 0) -> PrecInterval:
    """Enclosure of sqrt(x); requires x >= 0."""
    x = _coerce_prec(x, prec or 0)
    bits = prec or x.prec
    if x.lo < 0:
        raise DomainError("sqrt of a nonpositive interval")
    if x.hi == 0:
        return PrecInterval.point(0, bits)
    # bounded-size dyadic stand-ins for fat endpoints keep isqrt inputs small
    xlo, xhi = x.lo, x.hi
    if xlo.denominator.bit_length() > 4 * bits:
        xlo = _round_down(xlo, 2 * bits)
        if xlo < 0:
            xlo = Fraction(0)
    if xhi.denominator.bit_length() > 4 * bits:
        xhi = _round_up(xhi, 2 * bits)
    lo = _sqrt_point(xlo, bits + 2)[0] if xlo > 0 else Fraction(0)
    _, hi = _sqrt_point(xhi, bits + 2)
    return PrecInterval(lo, hi, bits)


_LOG2_CACHE: dict[int, tuple[Fraction, Fraction]] = {}


def _atanh_series(z: Fraction, err_bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of atanh(z) for |z| < 1/2 with error below 2^-err_bits."""
    assert abs(z) < Fraction(1, 2)
    zq = gmpy2.mpq(z.numerator, z.denominator)
    z2 = zq * zq
    one_minus = 1 - z2
    target = gmpy2.mpq(1, 1 << err_bits)
    total = gmpy2.mpq(0)
    term = zq  # z^(2j+1)
    j = 0
    while True:
        total += term / (2 * j + 1)
        term *= z2
        j += 1
        # remainder = sum_{i>=j} |z|^(2i+1)/(2i+1) <= |z|^(2j+1)/((2j+1)(1-z^2))
        rem = abs(term) / ((2 * j + 1) * one_minus)
        if rem <= target:
            lo = total - rem
            hi = total + rem
            return (
                Fraction(int(lo.numerator), int(lo.denominator)),
                Fraction(int(hi.numerator), int(hi.denominator)),
            )


def _log2_enclosure(bits: int) -> tuple[Fraction, Fraction]:
    if bits not in _LOG2_CACHE:
        lo, hi = _atanh_series(Fraction(1, 3), bits + 2)
        _LOG2_CACHE[bits] = (2 * lo, 2 * hi)
    return _LOG2_CACHE[bits]


def _dyadic_down(x: Fraction, bits: int) -> Fraction:
    return _round_down(x, bits)


def _dyadic_up(x: Fraction, bits: int) -> Fraction:
    return _round_up(x, bits)


def _log_point(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    if x <= 0:
        raise DomainError("log of a nonpositive value")
    # reduce to y in [2/3, 4/3]: x = 2^e * y
    e = x.numerator.bit_length() - x.denominator.bit_length()
    two_thirds, four_thirds = Fraction(2, 3), Fraction(4, 3)
    y = x / Fraction(2) ** e
    while y < two_thirds:
        y *= 2
        e -= 1
    while y > four_thirds:
        y /= 2
        e += 1
    z = (y - 1) / (y + 1)  # |z| <= 1/5
    # working on the dyadic grid keeps term sizes bounded; the grid error is
    # folded into the remainder (|atanh'| <= 25/24 on |z| <= 1/5)
    grid = Fraction(1, 1 << (bits + 8))
    z_lo, z_hi = _dyadic_down(z, bits + 8), _dyadic_up(z, bits + 8)
    slack = 2 * grid  # covers |z - z_grid| * sup|atanh'|
    alo = _atanh_series(z_lo, bits + 4)[0] - slack if z_lo else -slack
    ahi = _atanh_series(z_hi, bits + 4)[1] + slack if z_hi else slack
    series_lo, series_hi = 2 * alo, 2 * ahi
    if e == 0:
        return series_lo, series_hi
    l2lo, l2hi = _log2_enclosure(bits + 4)
    if e > 0:
        return series_lo + e * l2lo, series_hi + e * l2hi
    return series_lo + e * l2hi, series_hi + e * l2lo


def validated_log(x, prec: int = 0) -> PrecInterval:
    """Enclosure of log(x); requires x.lo > 0."""
    x = _coerce_prec(x, prec or 0)
    bits = prec or x.prec
    if x.lo <= 0:
        raise DomainError("log of a nonpositive interval")
    lo_pair = _log_point(x.lo, bits + 2)
    hi = lo_pair[1] if x.hi == x.lo else _log_point(x.hi, bits + 2)[1]
    return PrecInterval(lo_pair[0], hi, bits).outward(bits + 4)


def _exp_point(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    # halve until |y| <= 1/2, run Taylor, then square back up
    k = 0
    y = gmpy2.mpq(x.numerator, x.denominator)
    half = gmpy2.mpq(1, 2)
    while abs(y) > half:
        y /= 2
        k += 1
    # each squaring doubles relative error, so pad the working precision
    err_bits = bits + 2 * k + 16
    scale = 1 << err_bits
    target = gmpy2.mpq(1, scale)
    grid = target
    total = gmpy2.mpq(1)
    term = gmpy2.mpq(1)
    j = 0
    drift = gmpy2.mpq(0)
    while True:
        j += 1
        term = term * y / j
        if j % 8 == 0:
            # truncate to the working grid to bound operand sizes; the
            # perturbation feeds later terms with total factor <= 2
            term = gmpy2.mpq(int(term * scale), scale)
            drift += 4 * grid
        total += term
        # remainder <= |y|^(j+1)/(j+1)! / (1-|y|) <= 2*|term*y/(j+1)|
        tail = 2 * abs(term * y) / (j + 1)
        if tail <= target:
            break
    rem = tail + drift
    lo, hi = total - rem, total + rem
    if lo <= 0:
        lo = gmpy2.mpq(0)  # exp is positive; a crushed lower bound stays valid
    # directed dyadic rounding keeps the squaring chain small and outward
    lo_n = int(gmpy2.mpz(lo * scale))  # trunc = floor for nonnegative
    hi_n = -int(gmpy2.mpz(-hi * scale))
    if gmpy2.mpq(hi_n, 1) < hi * scale:
        hi_n += 1
    for _ in range(k):
        lo_n = (lo_n * lo_n) >> err_bits  # floor
        sq = hi_n * hi_n
        hi_n = -((-sq) >> err_bits)  # ceil
    return Fraction(lo_n, scale), Fraction(hi_n, scale)


def validated_exp(x, prec: int = 0) -> PrecInterval:
    """Enclosure of exp(x)."""
    x = _coerce_prec(x, prec or 0)
    bits = prec or x.prec
    if x.mag() > 4096:
        raise GuardViolation("exp argument magnitude above 4096")
    # monotone, so dyadic stand-ins for the endpoints preserve the enclosure
    xlo = _dyadic_down(x.lo, bits + 8)
    xhi = _dyadic_up(x.hi, bits + 8)
    lo_pair = _exp_point(xlo, bits + 2)
    hi = lo_pair[1] if xhi == xlo else _exp_point(xhi, bits + 2)[1]
    return PrecInterval(lo_pair[0], hi, bits).outward(bits + 4)


def validated_pow(b, s, prec: int = 0) -> PrecInterval:
    """Enclosure of b**s = exp(s*log(b)); requires b > 0."""
    b = _coerce_prec(b, prec or 0)
    s = _coerce_prec(s, prec or 0)
    bits = prec or max(b.prec, s.prec)
    # integer exponent on a point base stays exact
    if s.lo == s.hi and s.lo.denominator == 1 and b.lo == b.hi:
        n = s.lo.numerator
        base = b.lo
        if base <= 0:
            raise DomainError("pow of a nonpositive base")
        value = base ** n if n >= 0 else 1 / base ** (-n)
        return PrecInterval.point(value, bits)
    logb = validated_log(b, bits + 8)
    return validated_exp(s * logb, bits)


def refine(fn, x, target_width: Fraction, max_bits: int = 1 << 16) -> PrecInterval:
    """Re-run an enclosure at doubling precision until its width meets the target."""
    bits = max(default_precision(), 16)
    while True:
        result = fn(x, bits)
        if result.width <= target_width:
            return result
        bits *= 2
        if bits > max_bits:
            raise PrecisionExhausted(f"target width {target_width} unreachable at {max_bits} bits")


@dataclass(frozen=True)
class QuadNum:
    """Exact number a + b*sqrt(3)."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", _as_fraction(self.b))

    def __add__(self, other) -> "QuadNum":
        other = _coerce_quad(other)
        return QuadNum(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other) -> "QuadNum":
        other = _coerce_quad(other)
        return QuadNum(self.a - other.a, self.b - other.b)

    def __rsub__(self, other) -> "QuadNum":
        return _coerce_quad(other) - self

    def __neg__(self) -> "QuadNum":
        return QuadNum(-self.a, -self.b)

    def __mul__(self, other) -> "QuadNum":
        other = _coerce_quad(other)
        return QuadNum(
            self.a * other.a + 3 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadNum":
        norm = self.a * self.a - 3 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadNum(self.a / norm, -self.b / norm)

    def __truediv__(self, other) -> "QuadNum":
        return self * _coerce_quad(other).inverse()

    def __rtruediv__(self, other) -> "QuadNum":
        return _coerce_quad(other) * self.inverse()

    def __pow__(self, n: int) -> "QuadNum":
        if not isinstance(n, int):
            raise ValueError("integer power only")
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadNum(Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_rational(self) -> bool:
        return self.b == 0

    def enclosure(self, prec: int = 0) -> PrecInterval:
        bits = prec or default_precision()
        root = validated_sqrt(PrecInterval.point(3, bits))
        return PrecInterval.point(self.a, bits) + root * PrecInterval.point(self.b, bits)

    def __repr__(self) -> str:
        return f"QuadNum({self.a}, {self.b})"


def _coerce_quad(x) -> QuadNum:
    if isinstance(x, QuadNum):
        return x
    return QuadNum(_as_fraction(x))


def quad_sign(x: QuadNum) -> int:
    """Exact sign of a + b*sqrt(3)."""
    a, b = x.a, x.b
    if a == 0 and b == 0:
        return 0
    if a >= 0 and b >= 0:
        return 1
    if a <= 0 and b <= 0:
        return -1
    norm = a * a - 3 * b * b  # sign of (a + b*sqrt3)(a - b*sqrt3)
    if a > 0:  # b < 0: positive iff a > |b|*sqrt3 iff norm > 0
        return 1 if norm > 0 else (-1 if norm < 0 else 0)
    return -1 if norm > 0 else (1 if norm < 0 else 0)
