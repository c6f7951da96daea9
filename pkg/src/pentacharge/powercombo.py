"""Power combos and their polynomial under/over-approximations.

A power combo is the six-term expression

    C_Y(s) = a2*2^(-s/2) + a3*3^(-s/2) + a4*4^(-s/2)
           + b2*s*2^(-s/2) + b3*s*3^(-s/2) + b4*s*4^(-s/2).

Near an even anchor 2k the substitution s = 2k +- t turns each power term
into m^(-k) * exp(-+ (t/2) log m), whose Taylor series in t has coefficients
built from an enclosure of log m.  Truncating after twelve terms leaves a
remainder below t^12/12! because the twelfth s-derivative of m^(-s/2) stays
below 1 on [-2, 16].  Assembling the six terms as one interval polynomial
and taking endpoint polynomials yields exact-coefficient under and over
approximations valid for t in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import PrecInterval, RatInterval, validated_log, validated_pow
from .errors import PrecisionExhausted
from .poly import IntervalPoly, MultiPoly

TAYLOR_TERMS = 12  # j = 0..11, remainder sits in the t^12 slot
REMAINDER = Fraction(1, math.factorial(TAYLOR_TERMS))

ANCHORS = tuple(range(-2, 17, 2))
LEFT = "left"  # s = anchor - t
RIGHT = "right"  # s = anchor + t


@dataclass(frozen=True)
class ComboCoeffs:
    a2: Fraction
    a3: Fraction
    a4: Fraction
    b2: Fraction
    b3: Fraction
    b4: Fraction

    @staticmethod
    def of(*vals) -> "ComboCoeffs":
        return ComboCoeffs(*(Fraction(v) for v in vals))

    def weights(self):
        return ((2, self.a2, self.b2), (3, self.a3, self.b3), (4, self.a4, self.b4))


@dataclass(frozen=True)
class LogEnclosure:
    m: int
    interval: RatInterval


LOG_ENCLOSURES = {
    2: LogEnclosure(2, RatInterval(Fraction(25469, 36744), Fraction(7050, 10171))),
    3: LogEnclosure(3, RatInterval(Fraction(5225, 4756), Fraction(708784, 645163))),
    4: LogEnclosure(4, RatInterval(Fraction(25469, 18372), Fraction(345197, 249007))),
}


def verify_log_enclosure(e: LogEnclosure, max_bits: int = 1 << 12) -> bool:
    """Decide whether e.interval really contains log(e.m)."""
    bits = 64
    while bits <= max_bits:
        t = validated_log(Fraction(e.m), bits)
        if e.interval.lo <= t.lo and t.hi <= e.interval.hi:
            return True
        if t.hi < e.interval.lo or e.interval.hi < t.lo:
            return False
        bits *= 2
    raise PrecisionExhausted(
        f"log({e.m}) vs {e.interval} undecidable at {max_bits} bits"
    )


def _verified_enclosures():
    for e in LOG_ENCLOSURES.values():
        if not verify_log_enclosure(e):
            raise PrecisionExhausted(f"stored enclosure for log {e.m} is wrong")
    return LOG_ENCLOSURES


_CHECKED = False


def checked_log_enclosures():
    global _CHECKED
    if not _CHECKED:
        _verified_enclosures()
        _CHECKED = True
    return LOG_ENCLOSURES


def remainder_bound_hypothesis() -> bool:
    """Re-check log(4)^12 < 64, the arithmetic behind the 1/12! remainder."""
    l4 = checked_log_enclosures()[4].interval
    return l4.hi**12 < 64


def power_term_series(m: int, k: int, direction: str) -> IntervalPoly:
    """Interval Taylor series of m^(-s/2) at s = 2k -+ t, degree 12 in t."""
    L = checked_log_enclosures()[m].interval
    mk = Fraction(1, m**k) if k >= 0 else Fraction(m ** (-k))
    sign = -1 if direction == RIGHT else 1
    coeffs = []
    for j in range(TAYLOR_TERMS):
        c = L**j * RatInterval.point(
            Fraction(sign**j, (2**j) * math.factorial(j)) * mk
        )
        coeffs.append(c)
    coeffs.append(RatInterval(-REMAINDER, REMAINDER))
    return IntervalPoly(coeffs)


@dataclass(frozen=True)
class PowerApprox:
    Y: ComboCoeffs
    anchor: int
    direction: str
    under: MultiPoly
    over: MultiPoly

    def dump(self) -> str:
        head = f"anchor {self.anchor} direction {self.direction}"
        return "\n".join([head, "under", self.under.dump(), "over", self.over.dump()])


def build_power_approx(Y: ComboCoeffs, anchor: int, direction: str) -> PowerApprox:
    """Degree-13 exact polynomials trapping C_Y(anchor -+ t) on t in [0, 1]."""
    if anchor not in ANCHORS:
        raise ValueError(f"anchor {anchor} not an even integer in [-2, 16]")
    if direction not in (LEFT, RIGHT):
        raise ValueError(f"direction must be {LEFT!r} or {RIGHT!r}")
    if (anchor, direction) in ((-2, LEFT), (16, RIGHT)):
        raise ValueError("approximation would leave the s-range [-2, 16]")
    k = anchor // 2
    # s itself as a linear interval polynomial in t
    t_sign = Fraction(1) if direction == RIGHT else Fraction(-1)
    s_linear = IntervalPoly(
        [RatInterval.point(Fraction(anchor)), RatInterval.point(t_sign)]
    )
    total = None
    for m, a_m, b_m in Y.weights():
        if a_m == 0 and b_m == 0:
            continue
        series = power_term_series(m, k, direction)
        piece = series * a_m + (series * s_linear) * b_m
        total = piece if total is None else total + piece
    if total is None:
        zero = MultiPoly.zero(1)
        return PowerApprox(Y, anchor, direction, zero, zero)
    return PowerApprox(Y, anchor, direction, total.min_poly(), total.max_poly())


def eval_combo(Y: ComboCoeffs, s, prec: int = 0) -> PrecInterval:
    """Enclosure of C_Y(s)."""
    if not isinstance(s, PrecInterval):
        s = PrecInterval.point(Fraction(s), prec)
    # even integer point: every power term is an exact rational
    if (
        s.lo == s.hi
        and s.lo.denominator == 1
        and s.lo.numerator % 2 == 0
    ):
        k = s.lo.numerator // 2
        acc = Fraction(0)
        for m, a_m, b_m in Y.weights():
            p = Fraction(1, m**k) if k >= 0 else Fraction(m ** (-k))
            acc += (a_m + b_m * s.lo) * p
        return PrecInterval.point(acc, prec or s.prec)
    bits = prec or s.prec
    total = PrecInterval.point(Fraction(0), bits)
    for m, a_m, b_m in Y.weights():
        if a_m == 0 and b_m == 0:
            continue
        power = validated_pow(Fraction(m), -s * Fraction(1, 2), bits)
        coeff = PrecInterval.point(a_m, bits) + s * PrecInterval.point(b_m, bits)
        total = total + coeff * power
    return total
