"""Configuration space for five charges, one pinned at the north pole.

Working coordinates are planar: the charge at (0,0,1) goes to infinity and
the other four live in the plane through stereographic projection.  The
search domain is the box [0,4] x [-2,2]^6 holding (p0, p1, p2, p3) with p0
on the positive x-axis.  Dyadic segments, squares and blocks carve that box
into integer-encoded pieces, and the estimates here (hull metrics, dot
product bounds, block classification) are the exact rational ingredients
the block search consumes.

Conventions for a square or segment Q:

* the *patch* is the image of Q on the sphere,
* the *hull* is the convex hull of Q's pushed vertices,
* delta(Q) bounds the distance from any patch point to the hull,
* every bound is an exact Fraction; nothing here rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import NamedTuple, Tuple, Union

from .errors import DepthLimit, NotGood, PoleError

# in-radius of the pass cube around the known minimizer
EPS0 = Fraction(1, 1 << 18)

_POLE = (Fraction(0), Fraction(0), Fraction(1))

Planar = Tuple[Fraction, Fraction]


# ---------------------------------------------------------------------------
# projection


@dataclass(frozen=True)
class SpherePoint:
    """Exact rational point on the unit sphere."""

    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        object.__setattr__(self, "z", Fraction(self.z))
        if self.x * self.x + self.y * self.y + self.z * self.z != 1:
            raise ValueError("SpherePoint requires exact unit norm")

    def dot(self, other: "SpherePoint") -> Fraction:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.x, self.y, self.z)


def _push(x, y) -> Tuple[Fraction, Fraction, Fraction]:
    # raw inverse projection; s = 1 + |p|^2 is never zero
    x = Fraction(x)
    y = Fraction(y)
    s = 1 + x * x + y * y
    return (2 * x / s, 2 * y / s, 1 - 2 / s)


def stereo_inv(x, y) -> SpherePoint:
    """Pull a planar point back to the sphere; (0,0) goes to the south pole."""
    return SpherePoint(*_push(x, y))


def stereo(q: SpherePoint) -> Planar:
    """Project a sphere point to the plane from (0,0,1)."""
    if q.z == 1:
        raise PoleError("stereo undefined at (0,0,1)")
    w = 1 - q.z
    return (q.x / w, q.y / w)


# ---------------------------------------------------------------------------
# dyadic pieces

# Integer encoding: a square of side 2^-k centered at (Sx/S, Sy/S) is stored
# as (Sx, Sy, k); a segment of length 2^-k centered at Sx/S as (Sx, k).  The
# scale S is a power of two, so coordinate comparisons clear denominators.


def _scaled_pow2(S: int, e: int) -> int:
    """S * 2^e as a positive integer; DepthLimit when the grid runs out."""
    if e >= 0:
        return S << e
    if S & ((1 << -e) - 1):
        raise DepthLimit(f"scale {S} cannot represent 2^{e}")
    return S >> -e


def _check_scale(S: int):
    if S < 4 or S & (S - 1):
        raise ValueError("scale must be a power of two, at least 4")


@dataclass(frozen=True)
class DyadicSquare:
    """Axis-aligned square with center (Sx/S, Sy/S) and side 2^-k."""

    Sx: int
    Sy: int
    k: int
    S: int

    def __post_init__(self):
        _check_scale(self.S)
        if self.k < -2:
            raise ValueError("side exceeds the base square")
        h = self.half_scaled
        if abs(self.Sx) + h > 2 * self.S or abs(self.Sy) + h > 2 * self.S:
            raise ValueError("square leaves [-2,2]^2")

    @property
    def half_scaled(self) -> int:
        # half the side length, in units of 1/S
        return _scaled_pow2(self.S, -self.k - 1)

    def side(self) -> Fraction:
        return Fraction(2) ** (-self.k)

    def center(self) -> Planar:
        return (Fraction(self.Sx, self.S), Fraction(self.Sy, self.S))

    def x_range(self) -> Tuple[int, int]:
        h = self.half_scaled
        return (self.Sx - h, self.Sx + h)

    def y_range(self) -> Tuple[int, int]:
        h = self.half_scaled
        return (self.Sy - h, self.Sy + h)

    def corners(self) -> Tuple[Planar, Planar, Planar, Planar]:
        """The four vertices in cyclic order."""
        x0, x1 = self.x_range()
        y0, y1 = self.y_range()
        S = self.S
        return (
            (Fraction(x0, S), Fraction(y0, S)),
            (Fraction(x1, S), Fraction(y0, S)),
            (Fraction(x1, S), Fraction(y1, S)),
            (Fraction(x0, S), Fraction(y1, S)),
        )

    def is_good(self) -> bool:
        """Side at most 1/2 and contained in [-3/2,3/2]^2."""
        if self.k < 1:
            return False
        h = self.half_scaled
        limit = 3 * self.S  # compare 2*(|coord| + h) against 3S
        return 2 * (abs(self.Sx) + h) <= limit and 2 * (abs(self.Sy) + h) <= limit

    def subdivide(self) -> Tuple["DyadicSquare", ...]:
        """The four half-side children, ordered by (Sy, Sx)."""
        q = _scaled_pow2(self.S, -self.k - 2)
        Sx, Sy, k, S = self.Sx, self.Sy, self.k + 1, self.S
        return (
            DyadicSquare(Sx - q, Sy - q, k, S),
            DyadicSquare(Sx + q, Sy - q, k, S),
            DyadicSquare(Sx - q, Sy + q, k, S),
            DyadicSquare(Sx + q, Sy + q, k, S),
        )


@dataclass(frozen=True)
class DyadicSegment:
    """Segment on the x-axis with center Sx/S and length 2^-k, inside [0,4]."""

    Sx: int
    k: int
    S: int

    def __post_init__(self):
        _check_scale(self.S)
        if self.k < -2:
            raise ValueError("length exceeds the base segment")
        h = self.half_scaled
        if self.Sx - h < 0 or self.Sx + h > 4 * self.S:
            raise ValueError("segment leaves [0,4]")

    @property
    def half_scaled(self) -> int:
        return _scaled_pow2(self.S, -self.k - 1)

    def side(self) -> Fraction:
        return Fraction(2) ** (-self.k)

    def center(self) -> Fraction:
        return Fraction(self.Sx, self.S)

    def x_range(self) -> Tuple[int, int]:
        h = self.half_scaled
        return (self.Sx - h, self.Sx + h)

    def endpoints(self) -> Tuple[Fraction, Fraction]:
        lo, hi = self.x_range()
        return (Fraction(lo, self.S), Fraction(hi, self.S))

    def subdivide(self) -> Tuple["DyadicSegment", "DyadicSegment"]:
        q = _scaled_pow2(self.S, -self.k - 2)
        return (
            DyadicSegment(self.Sx - q, self.k + 1, self.S),
            DyadicSegment(self.Sx + q, self.k + 1, self.S),
        )


class _Infinity:
    """The fifth charge, pinned at (0,0,1)."""

    __slots__ = ()

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()

Region = Union[DyadicSquare, DyadicSegment, _Infinity]


@lru_cache(maxsize=65536)
def pushed_vertices(q: Region) -> Tuple[Tuple[Fraction, Fraction, Fraction], ...]:
    """The region's vertices as exact unit vectors (one point for infinity)."""
    if isinstance(q, _Infinity):
        return (_POLE,)
    if isinstance(q, DyadicSegment):
        a, b = q.endpoints()
        return (_push(a, 0), _push(b, 0))
    return tuple(_push(x, y) for x, y in q.corners())


@dataclass(frozen=True)
class DyadicBlock:
    """One segment for p0 plus three squares for p1, p2, p3; p4 is infinity."""

    q0: DyadicSegment
    q1: DyadicSquare
    q2: DyadicSquare
    q3: DyadicSquare

    def __post_init__(self):
        if not (self.q0.S == self.q1.S == self.q2.S == self.q3.S):
            raise ValueError("block components must share one scale")

    @property
    def S(self) -> int:
        return self.q0.S

    def components(self) -> Tuple[DyadicSegment, DyadicSquare, DyadicSquare, DyadicSquare]:
        return (self.q0, self.q1, self.q2, self.q3)

    def squares(self) -> Tuple[DyadicSquare, DyadicSquare, DyadicSquare]:
        return (self.q1, self.q2, self.q3)

    def subdivide(self, index: int) -> Tuple["DyadicBlock", ...]:
        """Split component `index`: two children for 0, four otherwise."""
        if index not in (0, 1, 2, 3):
            raise ValueError("index must be 0..3")
        parts = list(self.components())
        children = parts[index].subdivide()
        out = []
        for child in children:
            parts[index] = child
            out.append(DyadicBlock(*parts))
        return tuple(out)


def base_block(S: int) -> DyadicBlock:
    """The whole search box [0,4] x [-2,2]^6 at scale S."""
    square = DyadicSquare(0, 0, -2, S)
    return DyadicBlock(DyadicSegment(2 * S, -2, S), square, square, square)


def block_to_text(b: DyadicBlock) -> str:
    q0, q1, q2, q3 = b.components()
    return (
        f"{q0.k} {q0.Sx} | {q1.k} {q1.Sx} {q1.Sy} | "
        f"{q2.k} {q2.Sx} {q2.Sy} | {q3.k} {q3.Sx} {q3.Sy}"
    )


def block_from_text(line: str, S: int) -> DyadicBlock:
    parts = [field.split() for field in line.split("|")]
    if len(parts) != 4 or len(parts[0]) != 2 or any(len(p) != 3 for p in parts[1:]):
        raise ValueError(f"malformed block record: {line!r}")
    seg = DyadicSegment(int(parts[0][1]), int(parts[0][0]), S)
    squares = [DyadicSquare(int(p[1]), int(p[2]), int(p[0]), S) for p in parts[1:]]
    return DyadicBlock(seg, *squares)


# ---------------------------------------------------------------------------
# hull metrics


class HullMetrics(NamedTuple):
    d_sq: Fraction  # squared diameter of the pushed-vertex hull
    d1_sq: Fraction  # squared longest hull edge
    d2_sq: Fraction  # squared diameter of the spherical cap through the vertices
    delta: Fraction  # patch-to-hull separation bound


def _dist_sq(u, v) -> Fraction:
    return (u[0] - v[0]) ** 2 + (u[1] - v[1]) ** 2 + (u[2] - v[2]) ** 2


def _cap_diameter_sq(r_sq: Fraction, R_sq: Fraction) -> Fraction:
    # planar disk of radius r centered R from the origin, pushed to the sphere
    return 16 * r_sq / (1 + 2 * r_sq + 2 * R_sq + (R_sq - r_sq) ** 2)


def _chi(D: int, d_sq: Fraction) -> Fraction:
    # rational overestimate of the circle-sagitta function, valid for d <= D
    return d_sq / (4 * D) + d_sq * d_sq / (2 * D**3)


@lru_cache(maxsize=65536)
def hull_metrics(q: Region) -> HullMetrics:
    """Exact (d^2, d1^2, d2^2, delta) for a segment, good square, or infinity."""
    zero = Fraction(0)
    if isinstance(q, _Infinity):
        return HullMetrics(zero, zero, zero, zero)

    if isinstance(q, DyadicSegment):
        a, b = q.endpoints()
        v0, v1 = pushed_vertices(q)
        d_sq = _dist_sq(v0, v1)
        r = (b - a) / 2
        R = (a + b) / 2
        if r > R:
            raise NotGood("segment extends left of 0")
        d2_sq = _cap_diameter_sq(r * r, R * R)
        return HullMetrics(d_sq, d_sq, d2_sq, _chi(2, d2_sq))

    if not q.is_good():
        raise NotGood("square must have side <= 1/2 inside [-3/2,3/2]^2")
    vs = pushed_vertices(q)
    d_sq = max(_dist_sq(vs[i], vs[j]) for i in range(4) for j in range(i + 1, 4))
    d1_sq = max(_dist_sq(vs[i], vs[(i + 1) % 4]) for i in range(4))
    side = q.side()
    r_sq = side * side / 2  # circumdisk of the square
    cx, cy = q.center()
    R_sq = cx * cx + cy * cy
    if r_sq > R_sq:
        raise NotGood("square circumdisk contains the origin")
    d2_sq = _cap_diameter_sq(r_sq, R_sq)
    return HullMetrics(d_sq, d1_sq, d2_sq, max(_chi(1, d1_sq), _chi(2, d2_sq)))


# ---------------------------------------------------------------------------
# dot product bounds

# For regions Q, Q' the patch and hull of each lie within delta of the
# pushed-vertex hull, so every pair of points drawn from them has dot
# product inside [vertex min - slack, vertex max + slack] with
# slack = delta + delta' + delta*delta'.  Pairs involving infinity need no
# slack: distance to (0,0,1) is extremized at vertices.


def _dot(u, v) -> Fraction:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _vertex_dot_range(vs, ws) -> Tuple[Fraction, Fraction]:
    dots = [_dot(v, w) for v in vs for w in ws]
    return (min(dots), max(dots))


@lru_cache(maxsize=65536)
def _pair_dot_range(q: Region, qp: Region) -> Tuple[Fraction, Fraction]:
    return _vertex_dot_range(pushed_vertices(q), pushed_vertices(qp))


def _dot_slack(q: Region, qp: Region) -> Fraction:
    if isinstance(q, _Infinity) or isinstance(qp, _Infinity):
        return Fraction(0)
    da = hull_metrics(q).delta
    db = hull_metrics(qp).delta
    return da + db + da * db


def dot_max(q: Region, qp: Region) -> Fraction:
    """Upper bound for v.v' over all points v of Q and v' of Q'."""
    _, hi = _pair_dot_range(q, qp)
    return hi + _dot_slack(q, qp)


def dot_min(q: Region, qp: Region) -> Fraction:
    """Lower bound for v.v' over all points v of Q and v' of Q'."""
    lo, _ = _pair_dot_range(q, qp)
    return lo - _dot_slack(q, qp)


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class Configuration:
    """Four planar points with exact rational coordinates; p4 is infinity."""

    p0: Planar
    p1: Planar
    p2: Planar
    p3: Planar
    normalized: bool = False

    def __post_init__(self):
        for name in ("p0", "p1", "p2", "p3"):
            x, y = getattr(self, name)
            object.__setattr__(self, name, (Fraction(x), Fraction(y)))
        if self.normalized and not _is_normalized(self):
            raise ValueError("configuration violates the normalization")

    def points(self) -> Tuple[Planar, Planar, Planar, Planar]:
        return (self.p0, self.p1, self.p2, self.p3)


def _norm_sq(p: Planar) -> Fraction:
    return p[0] * p[0] + p[1] * p[1]


def _is_normalized(c: Configuration) -> bool:
    if c.p0[0] <= 0 or c.p0[1] != 0:
        return False
    n0 = _norm_sq(c.p0)
    if any(_norm_sq(p) > n0 for p in (c.p1, c.p2, c.p3)):
        return False
    return c.p1[1] <= c.p2[1] <= c.p3[1] and c.p2[1] >= 0


def totally_normalized(c: Configuration) -> bool:
    """True when the pinned charge is a farthest-spread point of the five.

    With delta_k the largest squared chordal distance from charge k to the
    rest, the test is delta_4 <= delta_j for j = 0..3, all exact.
    """
    pts = [_push(x, y) for x, y in c.points()] + [_POLE]
    deltas = []
    for k in range(5):
        deltas.append(max(_dist_sq(pts[k], pts[j]) for j in range(5) if j != k))
    return all(deltas[4] <= deltas[j] for j in range(4))


# ---------------------------------------------------------------------------
# the pass regions: near the minimizer, and the small-search box

# Bounds scaled by 512, one row per charge: x-range then y-range.
_SMALL_SEG = (433, 498)
_SMALL_BOXES = (
    ((-16, 16), (-464, -349)),
    ((-498, -400), (0, 24)),
    ((-16, 16), (349, 364)),
)


def in_small(c: Configuration) -> bool:
    """Exact membership test for the hand-off region around the minimizer."""
    lo, hi = _SMALL_SEG
    x0, y0 = c.p0
    if y0 != 0 or not lo <= 512 * x0 <= hi:
        return False
    for p, (xr, yr) in zip((c.p1, c.p2, c.p3), _SMALL_BOXES):
        if not (xr[0] <= 512 * p[0] <= xr[1] and yr[0] <= 512 * p[1] <= yr[1]):
            return False
    n0 = _norm_sq(c.p0)
    return all(_norm_sq(p) <= n0 for p in (c.p1, c.p2, c.p3))


def block_in_small(b: DyadicBlock) -> bool:
    """True when every configuration in the block lies in the small region.

    The box conditions are interval containments (equivalently: all 128
    vertex configurations satisfy them); the norm condition compares the
    segment's left end against each square's farthest corner.
    """
    S = b.S
    if S % 512:
        return False  # bounds not representable on this grid
    u = S // 512
    lo0, hi0 = b.q0.x_range()
    if lo0 < _SMALL_SEG[0] * u or hi0 > _SMALL_SEG[1] * u:
        return False
    for q, (xr, yr) in zip(b.squares(), _SMALL_BOXES):
        xlo, xhi = q.x_range()
        ylo, yhi = q.y_range()
        if xlo < xr[0] * u or xhi > xr[1] * u or ylo < yr[0] * u or yhi > yr[1] * u:
            return False
    for q in b.squares():
        h = q.half_scaled
        far = (abs(q.Sx) + h) ** 2 + (abs(q.Sy) + h) ** 2
        if far > lo0 * lo0:
            return False
    return True


def near_center_box(S: int, eps0: Fraction = EPS0):
    """Intervals (in units of 1/S) that certify a block sits in the pass cube.

    The cube has in-radius eps0 around the minimizing configuration; since
    1/sqrt(3) is irrational the y-centers are snapped to the grid point
    a* = floor(S/sqrt(3))/S and the intervals widened by 1/S to cover the
    snap error, whichever admissible a* is chosen.
    """
    E = eps0 * S
    if E.denominator != 1 or E < 1:
        raise ValueError("eps0 must scale to a positive integer")
    E = int(E)
    A = isqrt(S * S // 3)  # floor(S/sqrt(3))
    return (
        (S - E, S + E),
        ((-E, E), (-1 - A - E, 1 - A + E)),
        ((-S - E, -S + E), (-E, E)),
        ((-E, E), (-1 + A - E, 1 + A + E)),
    )


def block_near_center(b: DyadicBlock, eps0: Fraction = EPS0) -> bool:
    """Exact integer containment test against near_center_box."""
    seg_box, *square_boxes = near_center_box(b.S, eps0)
    lo, hi = b.q0.x_range()
    if lo < seg_box[0] or hi > seg_box[1]:
        return False
    for q, (xr, yr) in zip(b.squares(), square_boxes):
        xlo, xhi = q.x_range()
        ylo, yhi = q.y_range()
        if xlo < xr[0] or xhi > xr[1] or ylo < yr[0] or yhi > yr[1]:
            return False
    return True


# ---------------------------------------------------------------------------
# block classification


@dataclass(frozen=True)
class NeedsSplit:
    index: int


@dataclass(frozen=True)
class Irrelevant:
    reason: int


@dataclass(frozen=True)
class OutOfDomain:
    index: int


@dataclass(frozen=True)
class NearTBP:
    via: str = "cube"


@dataclass(frozen=True)
class Undecided:
    pass


Verdict = Union[NeedsSplit, Irrelevant, OutOfDomain, NearTBP, Undecided]


def _disordered(b: DyadicBlock) -> bool:
    """True when charge 4 is provably never the farthest-spread one.

    Compares (B,4)_max = min_j dot_max(Q_j, infinity) against
    (B,k)_min = min_j dot_min(Q_j, Q_k); a strict gap for any k means no
    configuration in the block is totally normalized.
    """
    comps: Tuple[Region, ...] = (*b.components(), INFINITY)
    verts = [pushed_vertices(q) for q in comps]
    deltas = [hull_metrics(q).delta for q in comps]
    pair_min = {}
    pair_max = {}
    for j in range(5):
        for k in range(j + 1, 5):
            lo, hi = _vertex_dot_range(verts[j], verts[k])
            if j == 4 or k == 4:
                slack = Fraction(0)
            else:
                slack = deltas[j] + deltas[k] + deltas[j] * deltas[k]
            pair_min[j, k] = lo - slack
            pair_max[j, k] = hi + slack
    b4_max = min(pair_max[j, 4] for j in range(4))
    for k in range(4):
        bk_min = min(pair_min[min(j, k), max(j, k)] for j in range(5) if j != k)
        if b4_max < bk_min:
            return True
    return False


def _irrelevant_reason(b: DyadicBlock, monotone_energy: bool) -> int:
    """First matching irrelevance criterion, or 0.

    1/2: some square's |x| (resp. |y|) stays at least the segment's max,
    so that charge is farther out than charge 0;  3: charge 1 above the
    x-axis (monotone energies only);  4: charge 2 below it;  5/6: the
    y-order of charges 1,2,3 is violated;  7: disordered.
    """
    seg_hi = b.q0.x_range()[1]
    squares = b.squares()
    for q in squares:
        lo, hi = q.x_range()
        # lo*hi >= 0 rules out ranges straddling zero, where min |coord| is 0
        if lo * hi >= 0 and min(abs(lo), abs(hi)) >= seg_hi:
            return 1
    for q in squares:
        lo, hi = q.y_range()
        if lo * hi >= 0 and min(abs(lo), abs(hi)) >= seg_hi:
            return 2
    q1, q2, q3 = squares
    if monotone_energy and q1.y_range()[0] >= 0:
        return 3
    if q2.y_range()[1] <= 0:
        return 4
    if q3.y_range()[1] <= q2.y_range()[0]:
        return 5
    if q2.y_range()[1] <= q1.y_range()[0]:
        return 6
    if all(q.is_good() for q in squares) and _disordered(b):
        return 7
    return 0


def classify_block(
    b: DyadicBlock,
    monotone_energy: bool = False,
    *,
    eps0: Fraction = EPS0,
    small_mode: bool = False,
) -> Verdict:
    """Grade a block through the pre-energy steps.

    In order: split any square wider than 1/2; pass irrelevant blocks; pass
    blocks that left [-3/2,3/2]^2; pass blocks inside the cube around the
    minimizer (and, in small mode, inside the small region).  Undecided
    means the caller must fall through to the energy bound.
    """
    for i, q in enumerate(b.squares(), start=1):
        if q.k < 1:
            return NeedsSplit(i)
    reason = _irrelevant_reason(b, monotone_energy)
    if reason:
        return Irrelevant(reason)
    for i, q in enumerate(b.squares(), start=1):
        if not q.is_good():
            return OutOfDomain(i)
    if block_near_center(b, eps0):
        return NearTBP("cube")
    if small_mode and block_in_small(b):
        return NearTBP("small")
    return Undecided()
