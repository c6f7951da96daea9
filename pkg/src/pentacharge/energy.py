"""Energy functions built on the radial basis G_k(r) = (4 - r^2)^k.

G_k measures a pair of unit vectors through their chordal distance r; the
named combinations below are the energies whose minima are compared against
the triangular bi-pyramid.  The first half of the module is the radial part.
The second half evaluates energies over dyadic blocks: exact vertex
energies, the local error terms eps(Q,Q') that account for how far a patch
bulges away from the convex hull of its pushed corners, the block error sum
ERR(B), and the resulting rigorous lower bound with its subdivision
recommendation.  The module also carries the true power-law (Riesz) pair
energies used by the symmetrization and endgame stages, together with the
base/bow decomposition of the five-point energy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, Optional, Sequence, Tuple

from gmpy2 import mpq

from .arith import PrecInterval, QuadNum, validated_pow
from .errors import CoincidentPoints
from .geometry import (
    INFINITY,
    Configuration,
    DyadicBlock,
    dot_max,
    hull_metrics,
    pushed_vertices,
)
from .poly import MultiPoly

# named energies: mapping k -> coefficient on G_k
COMBOS = {
    "G1": {1: Fraction(1)},
    "G2": {2: Fraction(1)},
    "G3": {3: Fraction(1)},
    "G4": {4: Fraction(1)},
    "G5": {5: Fraction(1)},
    "G6": {6: Fraction(1)},
    "G10": {10: Fraction(1)},
    "G5b": {5: Fraction(1), 1: Fraction(-25)},
    "G10s": {10: Fraction(1), 5: Fraction(13), 2: Fraction(68)},
    "G10ss": {10: Fraction(1), 5: Fraction(28), 2: Fraction(102)},
}


def radial_poly(combo: dict) -> MultiPoly:
    """The combo as an exact univariate polynomial in r."""
    r = MultiPoly.variable(1, 0)
    base = MultiPoly.constant(1, Fraction(4)) - r * r
    total = MultiPoly.zero(1)
    for k, coeff in combo.items():
        total = total + base**k * coeff
    return total


def radial_value(combo: dict, r) -> object:
    """Evaluate sum_k c_k (4 - r^2)^k at r in any ring."""
    base = 4 - r * r
    total = 0
    for k, coeff in sorted(combo.items()):
        term = coeff
        for _ in range(k):
            term = term * base
        total = total + term
    return total


def gk_tbp(k: int) -> Fraction:
    """Exact G_k energy of the triangular bi-pyramid: 3(2^(k+1) + 1)."""
    return Fraction(3 * (2 ** (k + 1) + 1))


def combo_tbp(combo: dict) -> Fraction:
    return sum((c * gk_tbp(k) for k, c in combo.items()), Fraction(0))


# ---------------------------------------------------------------------------
# pair potentials on planar points

EnergyCombo = Dict[int, Fraction]


def tbp_planar() -> tuple:
    """The four planar charges of the equatorial TBP, with exact 1/sqrt(3)."""
    a = QuadNum(Fraction(0), Fraction(1, 3))
    one = Fraction(1)
    zero = Fraction(0)
    return ((one, zero), (zero, -a), (-one, zero), (zero, a))


def _push_planar(p):
    """Inverse stereographic image of p as a raw 3-tuple, in p's own ring."""
    if p is INFINITY:
        return (Fraction(0), Fraction(0), Fraction(1))
    x, y = p
    s = 1 + x * x + y * y
    return (2 * x / s, 2 * y / s, 1 - 2 / s)


def _dot3(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _as_rational(value):
    if isinstance(value, QuadNum) and value.is_rational():
        return value.a
    return value


def g_pair(k: int, p, q):
    """Exact G_k between two planar charges: (2 + 2 p^.q^)^k.

    The chordal identity 4 - |p^ - q^|^2 = 2 + 2 p^.q^ keeps everything in
    the coordinate ring, so rational inputs give a Fraction and QuadNum
    inputs collapse back to a Fraction whenever the result is rational.
    """
    if p == q:
        raise CoincidentPoints("G_k of a pair of equal charges")
    u, v = _push_planar(p), _push_planar(q)
    t = 2 + 2 * _dot3(u, v)
    return _as_rational(t**k)


def combo_pair(combo: EnergyCombo, p, q):
    """The combo energy sum_k a_k G_k between two charges."""
    if p == q:
        raise CoincidentPoints("energy of a pair of equal charges")
    u, v = _push_planar(p), _push_planar(q)
    t = 2 + 2 * _dot3(u, v)
    return _as_rational(radial_gram(combo, t))


def radial_gram(combo: EnergyCombo, t):
    """Evaluate sum_k a_k t^k for t = 2 + 2 cos(angle) in any ring."""
    total = 0
    for k, coeff in sorted(combo.items()):
        total = total + coeff * t**k
    return total


def config_energy(combo: EnergyCombo, points: Iterable) -> Fraction:
    """Total combo energy of four planar charges plus the charge at infinity."""
    pts = list(points) + [INFINITY]
    total = Fraction(0)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            total = total + combo_pair(combo, pts[i], pts[j])
    return total


# ---------------------------------------------------------------------------
# local error terms and block bounds


@dataclass(frozen=True)
class BlockBound:
    """Rigorous lower-bound data for one block.

    vertex_min is the minimum exact energy over the vertex configurations
    (None when only the error part was requested), err the total error sum,
    err_by_index the per-charge partial sums, and recommendation the index
    whose partial sum is largest (ties to the smaller index).
    """

    vertex_min: Optional[Fraction]
    err: Fraction
    err_by_index: Tuple[Fraction, Fraction, Fraction, Fraction]
    recommendation: int

    @property
    def bound(self) -> Fraction:
        if self.vertex_min is None:
            raise ValueError("error-only bound, vertex energies not computed")
        return self.vertex_min - self.err


def _eps_raw(m, t, k: int) -> Fraction:
    """eps_k from the first component's metrics m and T = 2+2(Q.Q')_max."""
    second = 2 * k * t ** (k - 1) * m.delta
    if k < 2:
        return second
    return Fraction(k * (k - 1), 2) * t ** (k - 2) * m.d_sq + second


def eps(q, qp, k: int) -> Fraction:
    """Local error eps_k(Q,Q') = k(k-1)/2 T^(k-2) d^2 + 2k T^(k-1) delta.

    d^2 and delta belong to the first argument, T = 2 + 2 (Q.Q')_max; the
    function is deliberately asymmetric.  Equal arguments stand for the
    formal diagonal of the error double sum and give 0; err_block keeps
    distinct charges apart by index, so two coincident squares in one block
    still contribute their cross terms.
    """
    if q == qp:
        return Fraction(0)
    m = hull_metrics(q)
    if m.d_sq == 0 and m.delta == 0:
        return Fraction(0)
    t = 2 + 2 * dot_max(q, qp)
    return _eps_raw(m, t, k)


# The block bound is graded millions of times per search, so the inner
# arithmetic runs on gmpy2 rationals and converts back at the boundary.
# Everything stays exact.


def _to_frac(x) -> Fraction:
    return Fraction(x.numerator, x.denominator)


@lru_cache(maxsize=65536)
def _fast_vertices(q):
    return tuple(tuple(mpq(c) for c in v) for v in pushed_vertices(q))


@lru_cache(maxsize=65536)
def _fast_metrics(q):
    m = hull_metrics(q)
    return (mpq(m.d_sq), mpq(m.delta))


@lru_cache(maxsize=65536)
def _fast_dot_max(q, qp):
    return mpq(dot_max(q, qp))


def _fast_combo(combo: EnergyCombo):
    return tuple((k, mpq(c)) for k, c in sorted(combo.items()) if c)


def _fast_eps(terms, d_sq, delta, t) -> "mpq":
    total = mpq(0)
    for k, coeff in terms:
        second = 2 * k * t ** (k - 1) * delta
        if k >= 2:
            second += mpq(k * (k - 1), 2) * t ** (k - 2) * d_sq
        total += abs(coeff) * second
    return total


def err_block(combo: EnergyCombo, b) -> BlockBound:
    """ERR(B) = sum_i sum_{j != i} eps(Q_i, Q_j) over the four charges.

    j runs over the four charges and the charge at infinity.  Accepts a
    DyadicBlock or any sequence of four regions (squares, segments, or
    INFINITY); the diagonal is skipped by index, so repeated regions are
    handled soundly.
    """
    comps = list(b.components()) if isinstance(b, DyadicBlock) else list(b)
    if len(comps) != 4:
        raise ValueError("a block has exactly four movable charges")
    all5 = comps + [INFINITY]
    terms = _fast_combo(combo)
    sums = []
    for i in range(4):
        d_sq, delta = _fast_metrics(all5[i])
        total = mpq(0)
        if d_sq or delta:
            for j in range(5):
                if j == i:
                    continue
                t = 2 + 2 * _fast_dot_max(all5[i], all5[j])
                total += _fast_eps(terms, d_sq, delta, t)
        sums.append(total)
    rec = 0
    for i in (1, 2, 3):
        if sums[i] > sums[rec]:
            rec = i
    return BlockBound(None, _to_frac(sum(sums)), tuple(map(_to_frac, sums)), rec)


def block_lower_bound(combo: EnergyCombo, b: DyadicBlock) -> BlockBound:
    """Exact vertex minimum minus ERR(B): a lower bound for the combo
    energy over every configuration in the block's hull."""
    err_part = err_block(combo, b)
    comps = list(b.components()) + [INFINITY]
    verts = [_fast_vertices(c) for c in comps]
    terms = _fast_combo(combo)

    def gram(u, v):
        t = 2 + 2 * (u[0] * v[0] + u[1] * v[1] + u[2] * v[2])
        return sum(coeff * t**k for k, coeff in terms)

    tables = {}
    for i in range(5):
        for j in range(i + 1, 5):
            tables[(i, j)] = [[gram(u, v) for v in verts[j]] for u in verts[i]]
    pairs = list(tables)
    vertex_min = None
    for choice in product(*(range(len(v)) for v in verts)):
        e = sum(tables[p][choice[p[0]]][choice[p[1]]] for p in pairs)
        if vertex_min is None or e < vertex_min:
            vertex_min = e
    return BlockBound(
        _to_frac(vertex_min),
        err_part.err,
        err_part.err_by_index,
        err_part.recommendation,
    )


# ---------------------------------------------------------------------------
# true power-law energies


def _pair_dist_sq(u, v):
    d = tuple(a - b for a, b in zip(u, v))
    return _as_rational(_dot3(d, d))


def riesz_pair(u, v, s, prec: int = 0) -> PrecInterval:
    """Enclosure of |u - v|^(-s) for 3-space points with exact coordinates."""
    dsq = _pair_dist_sq(u, v)
    if dsq == 0:
        raise CoincidentPoints("power law at zero distance")
    if isinstance(dsq, QuadNum):
        dsq = dsq.enclosure(prec)
    exponent = s * Fraction(-1, 2)
    return validated_pow(dsq, exponent, prec)


def tour_riesz(points: Sequence, s, prec: int = 0) -> PrecInterval:
    """Cyclic tour energy sum_i |V_i - V_{i-1}|^(-s)."""
    total = None
    for i, pt in enumerate(points):
        term = riesz_pair(pt, points[i - 1], s, prec)
        total = term if total is None else total + term
    return total


def _planar_five(points) -> list:
    pts = list(points.points()) if isinstance(points, Configuration) else list(points)
    if len(pts) != 4:
        raise ValueError("expected the four planar charges")
    return [_push_planar(p) for p in pts] + [(Fraction(0), Fraction(0), Fraction(1))]


def base_energy(points, s, prec: int = 0) -> PrecInterval:
    """A_s: the cyclic tour over the four pushed planar charges."""
    return tour_riesz(_planar_five(points)[:4], s, prec)


def bow_energy(points, pair: Tuple[int, int], s, prec: int = 0) -> PrecInterval:
    """B_ij,s: the triangle tour charge i, charge j, north pole."""
    vs = _planar_five(points)
    i, j = pair
    return tour_riesz([vs[i], vs[j], vs[4]], s, prec)


def riesz_energy(points, s, prec: int = 0) -> PrecInterval:
    """Total s-energy of the five charges (four planar plus infinity)."""
    vs = _planar_five(points)
    total = None
    for i in range(5):
        for j in range(i + 1, 5):
            term = riesz_pair(vs[i], vs[j], s, prec)
            total = term if total is None else total + term
    return total
