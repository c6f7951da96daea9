"""Sparse exact multivariate polynomials and univariate interval polynomials.

``MultiPoly`` stores exponent tuples mapped to nonzero rational coefficients.
``IntervalPoly`` is a univariate polynomial whose coefficients are rational
intervals: it traps every polynomial obtained by picking one member per
coefficient, which is how Taylor enclosures travel through the package.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .arith import RatInterval
from .errors import DegenerateDenominator

_ZERO = Fraction(0)


def _degrevlex_key(expo: tuple) -> tuple:
    # descending total degree, then reverse-lex: later variables weigh less
    return (sum(expo), tuple(-e for e in reversed(expo)))


class MultiPoly:
    """Immutable sparse polynomial over the rationals."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[tuple, Fraction] | Iterable = ()):
        self.n = n
        data = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for expo, coeff in items:
            expo = tuple(int(e) for e in expo)
            if len(expo) != n:
                raise ValueError(f"exponent {expo} has arity {len(expo)}, expected {n}")
            if any(e < 0 for e in expo):
                raise ValueError(f"negative exponent in {expo}")
            coeff = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
            if coeff:
                data[expo] = data.get(expo, _ZERO) + coeff
                if not data[expo]:
                    del data[expo]
        self._terms = data
        self._hash = None

    # construction helpers -------------------------------------------------

    @staticmethod
    def zero(n: int) -> "MultiPoly":
        return MultiPoly(n)

    @staticmethod
    def constant(n: int, c) -> "MultiPoly":
        return MultiPoly(n, {(0,) * n: Fraction(c)})

    @staticmethod
    def variable(n: int, i: int) -> "MultiPoly":
        expo = [0] * n
        expo[i] = 1
        return MultiPoly(n, {tuple(expo): Fraction(1)})

    @staticmethod
    def univariate(coeffs: Sequence) -> "MultiPoly":
        """Polynomial in one variable from an ascending coefficient list."""
        return MultiPoly(1, {(d,): Fraction(c) for d, c in enumerate(coeffs)})

    # queries ---------------------------------------------------------------

    def terms(self):
        return self._terms.items()

    def coeff(self, expo: tuple) -> Fraction:
        return self._terms.get(tuple(expo), _ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self._terms), default=0)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # arithmetic ------------------------------------------------------------

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        data = dict(self._terms)
        for expo, c in other._terms.items():
            s = data.get(expo, _ZERO) + c
            if s:
                data[expo] = s
            else:
                data.pop(expo, None)
        return self._wrap(data)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return self._wrap({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return MultiPoly.zero(self.n)
            return self._wrap({e: k * c for e, k in self._terms.items()})
        other = self._coerce(other)
        data = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                s = data.get(expo, _ZERO) + c1 * c2
                if s:
                    data[expo] = s
                else:
                    del data[expo]
        return self._wrap(data)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("integer power with k >= 0 only")
        result = MultiPoly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.n != self.n:
                raise ValueError("variable counts differ")
            return other
        return MultiPoly.constant(self.n, other)

    def _wrap(self, data: dict) -> "MultiPoly":
        p = MultiPoly.__new__(MultiPoly)
        p.n = self.n
        p._terms = data
        p._hash = None
        return p

    # calculus and evaluation ------------------------------------------------

    def derivative(self, var: int) -> "MultiPoly":
        data = {}
        for expo, c in self._terms.items():
            e = expo[var]
            if e:
                nexpo = expo[:var] + (e - 1,) + expo[var + 1 :]
                s = data.get(nexpo, _ZERO) + c * e
                if s:
                    data[nexpo] = s
                else:
                    del data[nexpo]
        return self._wrap(data)

    def evaluate(self, point: Sequence):
        """Evaluate at a point of any commutative ring (Fraction, intervals, QuadNum)."""
        if len(point) != self.n:
            raise ValueError("point arity mismatch")
        total = None
        for expo, c in self._terms.items():
            term = c
            for x, e in zip(point, expo):
                if e:
                    term = term * x**e
            total = term if total is None else total + term
        if total is None:
            return _ZERO
        return total

    def compose(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute variable i by images[i]; all images share one arity."""
        if len(images) != self.n:
            raise ValueError("need one image per variable")
        m = images[0].n
        if any(im.n != m for im in images):
            raise ValueError("images must share a variable count")
        power_cache = [{0: MultiPoly.constant(m, 1)} for _ in range(self.n)]

        def img_power(i, e):
            cache = power_cache[i]
            if e not in cache:
                cache[e] = img_power(i, e - 1) * images[i]
            return cache[e]

        total = MultiPoly.zero(m)
        for expo, c in self._terms.items():
            term = MultiPoly.constant(m, c)
            for i, e in enumerate(expo):
                if e:
                    term = term * img_power(i, e)
            total = total + term
        return total

    # presentation ------------------------------------------------------------

    def dump(self) -> str:
        """Canonical text form: one 'coeff e1 .. en' line per term."""
        lines = []
        for expo in sorted(self._terms, key=_degrevlex_key, reverse=True):
            c = self._terms[expo]
            coeff = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            lines.append(" ".join([coeff, *map(str, expo)]))
        return "\n".join(lines)

    @staticmethod
    def parse(text: str, n: int) -> "MultiPoly":
        terms = {}
        for line in text.strip().splitlines():
            parts = line.split()
            if not parts:
                continue
            coeff = Fraction(parts[0])
            expo = tuple(int(x) for x in parts[1:])
            if len(expo) != n:
                raise ValueError(f"bad arity in line {line!r}")
            terms[expo] = terms.get(expo, _ZERO) + coeff
        return MultiPoly(n, terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "MultiPoly(0)"
        bits = []
        for expo in sorted(self._terms, key=_degrevlex_key, reverse=True)[:8]:
            mono = "*".join(f"x{i}^{e}" for i, e in enumerate(expo) if e) or "1"
            bits.append(f"{self._terms[expo]}*{mono}")
        suffix = " + ..." if len(self._terms) > 8 else ""
        return f"MultiPoly({' + '.join(bits)}{suffix})"


def poly_arith(p: MultiPoly, q: MultiPoly, op: str) -> MultiPoly:
    if op == "+":
        return p + q
    if op in ("-", "−"):
        return p - q
    if op in ("*", "×"):
        return p * q
    raise ValueError(f"unknown op {op!r}")


def poly_derivative(p: MultiPoly, var: int) -> MultiPoly:
    return p.derivative(var)


def affine_substitute(p: MultiPoly, maps: Sequence[tuple]) -> MultiPoly:
    """Substitute x_i -> a_i*x_i + b_i with rational (a_i, b_i) pairs."""
    if len(maps) != p.n:
        raise ValueError("need one (scale, offset) pair per variable")
    images = []
    for i, (a, b) in enumerate(maps):
        img = MultiPoly(p.n, {})
        img = MultiPoly.variable(p.n, i) * Fraction(a) + MultiPoly.constant(p.n, Fraction(b))
        images.append(img)
    return p.compose(images)


def coeff_abs_sum(p: MultiPoly) -> Fraction:
    return sum((abs(c) for _, c in p.terms()), _ZERO)


def half_substitution(p: MultiPoly, var: int, upper: bool) -> MultiPoly:
    """Map the unit cube onto its lower or upper half along one variable.

    Direct binomial transform of the one affected variable; equivalent to
    affine_substitute with x_var -> (x_var + offset)/2 but much cheaper
    inside subdivision loops.
    """
    terms: dict = {}
    for expo, coeff in p.terms():
        e = expo[var]
        scaled = coeff / (1 << e)
        if not upper:
            terms[expo] = terms.get(expo, _ZERO) + scaled
            continue
        for j in range(e + 1):
            c = scaled * comb(e, j)
            ne = expo[:var] + (j,) + expo[var + 1 :]
            terms[ne] = terms.get(ne, _ZERO) + c
    return MultiPoly(p.n, {k: v for k, v in terms.items() if v})


class IntervalPoly:
    """Univariate polynomial with rational-interval coefficients on t in [0,1]."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[RatInterval]):
        self.coeffs = tuple(
            c if isinstance(c, RatInterval) else RatInterval.point(c) for c in coeffs
        )

    @staticmethod
    def from_exact(values: Sequence) -> "IntervalPoly":
        return IntervalPoly([RatInterval.point(Fraction(v)) for v in values])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def _padded(self, size: int):
        zero = RatInterval.point(0)
        return list(self.coeffs) + [zero] * (size - len(self.coeffs))

    def __add__(self, other: "IntervalPoly") -> "IntervalPoly":
        size = max(len(self.coeffs), len(other.coeffs))
        a, b = self._padded(size), other._padded(size)
        return IntervalPoly([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "IntervalPoly") -> "IntervalPoly":
        size = max(len(self.coeffs), len(other.coeffs))
        a, b = self._padded(size), other._padded(size)
        return IntervalPoly([x - y for x, y in zip(a, b)])

    def __neg__(self) -> "IntervalPoly":
        return IntervalPoly([-c for c in self.coeffs])

    def __mul__(self, other) -> "IntervalPoly":
        if isinstance(other, (int, Fraction, RatInterval)):
            o = other if isinstance(other, RatInterval) else RatInterval.point(other)
            return IntervalPoly([c * o for c in self.coeffs])
        zero = RatInterval.point(0)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return IntervalPoly(out)

    __rmul__ = __mul__

    def shift_up(self, k: int) -> "IntervalPoly":
        """Multiply by t^k."""
        zero = RatInterval.point(0)
        return IntervalPoly([zero] * k + list(self.coeffs))

    def evaluate(self, t) -> RatInterval:
        total = RatInterval.point(0)
        for c in reversed(self.coeffs):
            total = total * t + c
        return total

    def min_poly(self) -> MultiPoly:
        """Exact polynomial below every trapped polynomial on [0,1]."""
        return MultiPoly(1, {(d,): c.lo for d, c in enumerate(self.coeffs)})

    def max_poly(self) -> MultiPoly:
        """Exact polynomial above every trapped polynomial on [0,1]."""
        return MultiPoly(1, {(d,): c.hi for d, c in enumerate(self.coeffs)})

    def __repr__(self) -> str:
        return f"IntervalPoly(deg={self.degree})"


def interval_poly_arith(P: IntervalPoly, Q: IntervalPoly, op: str) -> IntervalPoly:
    if op == "+":
        return P + Q
    if op in ("-", "−"):
        return P - Q
    if op in ("*", "×"):
        return P * Q
    raise ValueError(f"unknown op {op!r}")


class RationalFn:
    """Reduced fraction of polynomials, denominator positive at the cube center."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly):
        self.num = num
        self.den = den

    def evaluate(self, point):
        return self.num.evaluate(point) / self.den.evaluate(point)

    def __repr__(self) -> str:
        return f"RationalFn({len(self.num)} terms / {len(self.den)} terms)"


def _to_sympy(p: MultiPoly, symbols):
    import sympy

    expr = sympy.Integer(0)
    for expo, c in p.terms():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(symbols, expo):
            if e:
                term *= s**e
        expr += term
    return expr


def _from_sympy(expr, symbols, n: int) -> MultiPoly:
    import sympy

    poly = sympy.Poly(expr, *symbols)
    terms = {}
    for expo, c in poly.terms():
        c = sympy.Rational(c)
        terms[tuple(int(e) for e in expo)] = Fraction(int(c.p), int(c.q))
    return MultiPoly(n, terms)


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """A common divisor of p and q, verified by exact division.

    The candidate comes from a computer-algebra gcd; the result is trusted
    only after exact multiplication confirms it divides both inputs.
    """
    import sympy

    if p.is_zero():
        return q
    if q.is_zero():
        return p
    n = p.n
    symbols = sympy.symbols(f"x0:{n}") if n > 1 else (sympy.Symbol("x0"),)
    g = sympy.gcd(_to_sympy(p, symbols), _to_sympy(q, symbols))
    gp = _from_sympy(g, symbols, n)
    for target in (p, q):
        quotient = _exact_divide(target, gp)
        if quotient is None or quotient * gp != target:
            raise ArithmeticError("gcd candidate failed exact-division verification")
    return gp


def _exact_divide(p: MultiPoly, d: MultiPoly) -> MultiPoly | None:
    """p / d when the division is exact, else None."""
    import math

    if d.is_zero():
        return None
    n = p.n
    remainder = p
    quotient = {}
    d_lead = max(d._terms, key=_degrevlex_key)
    d_lead_c = d._terms[d_lead]
    # an exact quotient emits one term per step, so this bound is generous
    guard = math.comb(p.total_degree() + n, n) + 64
    while not remainder.is_zero():
        guard -= 1
        if guard < 0:
            return None
        r_lead = max(remainder._terms, key=_degrevlex_key)
        expo = tuple(a - b for a, b in zip(r_lead, d_lead))
        if any(e < 0 for e in expo):
            return None
        c = remainder._terms[r_lead] / d_lead_c
        quotient[expo] = quotient.get(expo, _ZERO) + c
        remainder = remainder - MultiPoly(n, {expo: c}) * d
    return MultiPoly(n, quotient)


def reduce_rational(num: MultiPoly, den: MultiPoly) -> RationalFn:
    """Remove the common factor and normalize the denominator sign at the center."""
    if den.is_zero():
        raise DegenerateDenominator("denominator is identically zero")
    if num.is_zero():
        return RationalFn(MultiPoly.zero(num.n), MultiPoly.constant(den.n, 1))
    g = poly_gcd(num, den)
    num_r = _exact_divide(num, g)
    den_r = _exact_divide(den, g)
    if num_r is None or den_r is None:
        num_r, den_r = num, den
    center = [Fraction(1, 2)] * den_r.n
    den_c = den_r.evaluate(center)
    if den_c < 0:
        num_r, den_r = -num_r, -den_r
    return RationalFn(num_r, den_r)
