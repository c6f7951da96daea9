"""Polynomial positivity certification on boxes.

Two coefficient criteria and their subdivision closure:

* weak dominance: every downward partial sum of coefficients nonnegative and
  the total sum positive, certifying positivity on the half-open cube
  (0,1]^k (the closed left face needs a separate endpoint check by callers);
* strict dominance: every downward partial sum positive, certifying
  positivity on the closed cube [0,1]^k.

The subdivision algorithm splits the least-refined variable (marker order)
and re-tests each half until every leaf passes, producing a replayable
certificate.  Failure to certify is always reported as an exception, never
as a claim of negativity.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import gmpy2

from .errors import DepthExceeded, NotSquarefree
from .poly import MultiPoly, affine_substitute, half_substitution

DEFAULT_MAX_DEPTH = 40


@dataclass(frozen=True)
class Marker:
    """Per-variable subdivision counts; successor bumps the youngest entry."""

    entries: tuple

    @staticmethod
    def fresh(n: int) -> "Marker":
        return Marker((0,) * n)

    def youngest(self) -> int:
        """Index of the first minimum entry, left to right."""
        m = min(self.entries)
        return self.entries.index(m)

    def successor(self) -> "Marker":
        i = self.youngest()
        e = list(self.entries)
        e[i] += 1
        return Marker(tuple(e))

    def depth(self) -> int:
        return max(self.entries)


def _downward_sums(p: MultiPoly):
    """Dense array of all downward partial sums over the degree box."""
    n = p.n
    dims = [p.degree_in(i) + 1 for i in range(n)]
    size = 1
    for d in dims:
        size *= d
    strides = [0] * n
    acc = 1
    for i in range(n - 1, -1, -1):
        strides[i] = acc
        acc *= dims[i]
    zero = gmpy2.mpq(0)
    arr = [zero] * size
    for expo, c in p.terms():
        flat = sum(e * s for e, s in zip(expo, strides))
        arr[flat] = gmpy2.mpq(c.numerator, c.denominator)
    for axis in range(n):
        stride = strides[axis]
        dim = dims[axis]
        if dim == 1:
            continue
        # prefix-sum along this axis
        for base in range(size):
            idx = (base // stride) % dim
            if idx:
                arr[base] = arr[base] + arr[base - stride]
    return arr, dims


def _dominance(p: MultiPoly, strict: bool) -> bool:
    sums, _ = _downward_sums(p)
    if not sums:
        return False
    if strict:
        return all(s > 0 for s in sums)
    return all(s >= 0 for s in sums) and sums[-1] > 0


def is_wpd(p: MultiPoly) -> bool:
    """Weak dominance for a univariate polynomial: positive on (0,1]."""
    if p.n != 1:
        raise ValueError("is_wpd is univariate; use is_weak_pd for several variables")
    return _dominance(p, strict=False)


def is_weak_pd(p: MultiPoly) -> bool:
    """Weak dominance in any arity: positive on (0,1]^k."""
    return _dominance(p, strict=False)


def is_pd(p: MultiPoly) -> bool:
    """Strict dominance: positive on the closed cube [0,1]^k."""
    return _dominance(p, strict=True)


@dataclass(frozen=True)
class Leaf:
    marker: tuple
    offsets: tuple
    criterion: str
    member: int = -1  # which family member passed (parallel mode)

    def box(self):
        return [
            (Fraction(o, 1 << m), Fraction(o + 1, 1 << m))
            for o, m in zip(self.offsets, self.marker)
        ]


@dataclass
class PositivityCertificate:
    poly_hash: str
    mode: str
    leaves: list = field(default_factory=list)
    subdivision_count: int = 0

    def dump(self) -> str:
        lines = [f"mode {self.mode}", f"hash {self.poly_hash}", f"leaves {len(self.leaves)}"]
        for leaf in self.leaves:
            marker = ",".join(map(str, leaf.marker))
            offsets = ",".join(map(str, leaf.offsets))
            member = f" member={leaf.member}" if leaf.member >= 0 else ""
            lines.append(f"{marker} | {offsets} | {leaf.criterion}{member}")
        return "\n".join(lines)


def poly_fingerprint(polys) -> str:
    if isinstance(polys, MultiPoly):
        polys = [polys]
    digest = hashlib.sha256()
    for p in polys:
        digest.update(p.dump().encode())
        digest.update(b"\x00")
    return digest.hexdigest()[:16]


def _leaf_to_unit_map(leaf_marker, leaf_offsets):
    return [
        (Fraction(1, 1 << m), Fraction(o, 1 << m))
        for m, o in zip(leaf_marker, leaf_offsets)
    ]


# The subdivision loops run on dense integer arrays: denominators are cleared
# once at entry and each child is scaled by 2^deg along the split variable.
# Positive scaling leaves every dominance sign unchanged, so the recorded
# leaves replay identically against the original rational polynomial.


class _DensePoly:
    __slots__ = ("arr", "dims", "strides")

    def __init__(self, arr, dims, strides):
        self.arr = arr
        self.dims = dims
        self.strides = strides

    @staticmethod
    def from_poly(p: MultiPoly) -> "_DensePoly":
        n = p.n
        dims = [p.degree_in(i) + 1 for i in range(n)]
        size = 1
        for d in dims:
            size *= d
        strides = [0] * n
        acc = 1
        for i in range(n - 1, -1, -1):
            strides[i] = acc
            acc *= dims[i]
        den_lcm = 1
        for _, c in p.terms():
            den_lcm = lcm(den_lcm, c.denominator)
        arr = [0] * size
        content = 0
        for expo, c in p.terms():
            v = c.numerator * (den_lcm // c.denominator)
            arr[sum(e * s for e, s in zip(expo, strides))] = v
            content = gcd(content, v)
        if content > 1:
            arr = [v // content for v in arr]
        return _DensePoly(arr, dims, strides)

    def dominant(self, strict: bool) -> bool:
        sums = list(self.arr)
        size = len(sums)
        if not any(sums):
            return False
        for axis, stride in enumerate(self.strides):
            dim = self.dims[axis]
            if dim == 1:
                continue
            for base in range(size):
                if (base // stride) % dim:
                    sums[base] += sums[base - stride]
        if strict:
            return all(s > 0 for s in sums)
        return all(s >= 0 for s in sums) and sums[-1] > 0

    def half(self, var: int, upper: bool) -> "_DensePoly":
        arr, dims, strides = self.arr, self.dims, self.strides
        stride = strides[var]
        dim = dims[var]
        deg = dim - 1
        size = len(arr)
        out = [0] * size
        line_starts = (
            (base // stride) * (stride * dim) + (base % stride)
            for base in range(size // dim)
        )
        if not upper:
            for start in line_starts:
                for e in range(dim):
                    v = arr[start + e * stride]
                    if v:
                        out[start + e * stride] = v << (deg - e)
        else:
            for start in line_starts:
                for e in range(dim):
                    v = arr[start + e * stride]
                    if not v:
                        continue
                    v <<= deg - e
                    row = _BINOMIALS[e]
                    for j in range(e + 1):
                        out[start + j * stride] += row[j] * v
        return _DensePoly(out, dims, strides)


class _BinomialRows:
    def __init__(self):
        self.rows = [[1]]

    def __getitem__(self, e: int):
        while len(self.rows) <= e:
            prev = self.rows[-1]
            self.rows.append(
                [1] + [prev[i] + prev[i + 1] for i in range(len(prev) - 1)] + [1]
            )
        return self.rows[e]


_BINOMIALS = _BinomialRows()


def _run_subdivision(dense_family, n, strict, max_depth, cert, need_member):
    stack = [(dense_family, Marker.fresh(n), (0,) * n)]
    criterion = "PD" if strict else "WPD"
    while stack:
        family, marker, offsets = stack.pop()
        member = next((i for i, q in enumerate(family) if q.dominant(strict)), -1)
        if member >= 0:
            cert.leaves.append(
                Leaf(marker.entries, offsets, criterion, member if need_member else -1)
            )
            continue
        if marker.depth() >= max_depth:
            raise DepthExceeded(
                f"not certified: depth {max_depth} reached at box {offsets}/{marker.entries}"
            )
        var = marker.youngest()
        succ = marker.successor()
        low = [q.half(var, upper=False) for q in family]
        high = [q.half(var, upper=True) for q in family]
        o_low = tuple(2 * o if i == var else o for i, o in enumerate(offsets))
        o_high = tuple(2 * o + 1 if i == var else o for i, o in enumerate(offsets))
        cert.subdivision_count += 1
        stack.append((low, succ, o_low))
        stack.append((high, succ, o_high))


def pda(
    p: MultiPoly,
    criterion: str = "PD",
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> PositivityCertificate:
    """Certify p > 0 on the cube (closed for PD, half-open for WPD) by subdivision."""
    if criterion not in ("PD", "WPD"):
        raise ValueError("criterion must be PD or WPD")
    strict = criterion == "PD"
    cert = PositivityCertificate(
        poly_fingerprint(p), "PDA" if strict else "weak-PDA"
    )
    _run_subdivision(
        [_DensePoly.from_poly(p)], p.n, strict, max_depth, cert, need_member=False
    )
    return cert


def parallel_pda(
    ps: Sequence[MultiPoly],
    criterion: str = "PD",
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> PositivityCertificate:
    """Certify that at each cube point at least one family member is positive.

    All members subdivide in lockstep; a leaf passes when any single member
    passes the criterion on that leaf.
    """
    ps = list(ps)
    if not ps:
        raise ValueError("empty family")
    n = ps[0].n
    if any(q.n != n for q in ps):
        raise ValueError("family members must share a variable count")
    strict = criterion == "PD"
    cert = PositivityCertificate(poly_fingerprint(ps), "parallel-PDA")
    _run_subdivision(
        [_DensePoly.from_poly(q) for q in ps], n, strict, max_depth, cert, need_member=True
    )
    return cert


def replay(cert: PositivityCertificate, p: MultiPoly) -> bool:
    """Re-run every leaf check recorded in a certificate."""
    if poly_fingerprint(p) != cert.poly_hash:
        return False
    for leaf in cert.leaves:
        q = affine_substitute(p, _leaf_to_unit_map(leaf.marker, leaf.offsets))
        if not _dominance(q, strict=leaf.criterion == "PD"):
            return False
    return True


# ---------------------------------------------------------------------------
# Univariate root isolation by bisection with exact signs plus no-root
# certificates on the complement.
# ---------------------------------------------------------------------------


def _univariate_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    a, b = p, q
    while not b.is_zero():
        a, b = b, _poly_mod(a, b)
    return a


def _poly_mod(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    db = b.degree_in(0)
    lead_b = b.coeff((db,))
    r = a
    while not r.is_zero() and r.degree_in(0) >= db:
        dr = r.degree_in(0)
        c = r.coeff((dr,)) / lead_b
        r = r - MultiPoly(1, {(dr - db,): c}) * b
    return r


def _onto_unit(p: MultiPoly, a: Fraction, b: Fraction) -> MultiPoly:
    return affine_substitute(p, [(b - a, a)])


@dataclass(frozen=True)
class RootRecord:
    interval: tuple  # (lo, hi); lo == hi for an exact rational root
    kind: str  # "isolated" or "exact"


@dataclass
class RootIsolation:
    roots: list
    no_root_certificates: list  # (lo, hi, "pos"|"neg") pieces covering the rest


def isolate_roots(
    p: MultiPoly, domain, max_depth: int = 60
) -> RootIsolation:
    """Isolating intervals for the real roots of p on [lo, hi].

    Each returned interval either is an exact rational root or carries a
    sign change at its endpoints together with a dominance certificate that
    the derivative keeps one sign inside, so it contains exactly one root.
    """
    if p.n != 1:
        raise ValueError("isolate_roots is univariate")
    lo, hi = (Fraction(domain[0]), Fraction(domain[1]))
    dp = p.derivative(0)
    g = _univariate_gcd(p, dp)
    if g.degree_in(0) > 0:
        raise NotSquarefree(f"gcd(p, p') has degree {g.degree_in(0)}")

    out = RootIsolation([], [])

    def sign_at(x: Fraction) -> int:
        v = p.evaluate([x])
        return (v > 0) - (v < 0)

    def carve_collar(center: Fraction, span: Fraction) -> Fraction:
        """Half-width around an exact root on which p is certified monotone."""
        w = span / 8
        while not monotone_on(max(lo, center - w), min(hi, center + w)):
            w /= 2
            if w < span / 2**max_depth:
                raise DepthExceeded(f"no monotone collar at exact root {center}")
        return w

    def monotone_on(a: Fraction, b: Fraction) -> bool:
        q = _onto_unit(dp, a, b)
        return is_weak_pd(q) or is_weak_pd(-q)

    def no_root_on(a: Fraction, b: Fraction):
        """Certified sign of p on [a, b], or None."""
        q = _onto_unit(p, a, b)
        if sign_at(a) > 0 and is_weak_pd(q):
            return "pos"
        if sign_at(a) < 0 and is_weak_pd(-q):
            return "neg"
        return None

    # roots sitting exactly on the domain boundary get their own collar
    if sign_at(lo) == 0:
        w = carve_collar(lo, hi - lo)
        out.roots.append(RootRecord((lo, lo), "exact"))
        out.no_root_certificates.append((lo, lo + w, "collar"))
        lo = lo + w
    if sign_at(hi) == 0:
        w = carve_collar(hi, hi - lo)
        out.roots.append(RootRecord((hi, hi), "exact"))
        out.no_root_certificates.append((hi - w, hi, "collar"))
        hi = hi - w

    stack = [(lo, hi, 0)]
    while stack:
        a, b, depth = stack.pop()
        sign = no_root_on(a, b)
        if sign is not None:
            out.no_root_certificates.append((a, b, sign))
            continue
        sa, sb = sign_at(a), sign_at(b)
        if sa != 0 and sb != 0 and sa != sb and monotone_on(a, b):
            out.roots.append(RootRecord((a, b), "isolated"))
            continue
        if depth >= max_depth:
            raise DepthExceeded(f"root isolation stalled on [{a}, {b}]")
        m = (a + b) / 2
        if sign_at(m) == 0:
            # exact rational root; carve out a certified-monotone collar
            w = carve_collar(m, b - a)
            out.roots.append(RootRecord((m, m), "exact"))
            stack.append((a, m - w, depth + 1))
            stack.append((m + w, b, depth + 1))
            out.no_root_certificates.append((m - w, m, "collar"))
            out.no_root_certificates.append((m, m + w, "collar"))
            continue
        stack.append((a, m, depth + 1))
        stack.append((m, b, depth + 1))
    out.roots.sort(key=lambda r: r.interval[0])
    return out
