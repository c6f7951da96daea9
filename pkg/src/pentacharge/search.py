"""Divide-and-conquer search over dyadic blocks.

The driver keeps a LIFO list of blocks, grades the last one, and either
records it with its pass reason or subdivides it along the recommendation
and pushes the children.  Grading follows a fixed order: oversized squares
force a split, then irrelevance, then the [-3/2,3/2]^2 domain check, then
containment in the near-minimizer cube (and, in small mode, the small
region), and finally the rigorous energy bound against the TBP value.

The gilded path mirrors the exact grading with plain floats: a float fail
is always safe (the block just gets subdivided), and a float pass is only
a candidate that must be re-established with exact arithmetic before the
block is recorded.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Tuple, Union

from .energy import COMBOS, EnergyCombo, combo_tbp, block_lower_bound
from .errors import BlockBudgetExceeded
from .geometry import (
    EPS0,
    INFINITY,
    DyadicBlock,
    DyadicSegment,
    Irrelevant,
    NearTBP,
    NeedsSplit,
    OutOfDomain,
    base_block,
    block_from_text,
    block_to_text,
    classify_block,
)

BIG_SCALE = 1 << 25
SMALL_SCALE = 1 << 30

FORMAT_VERSION = 1


def combo_of(energy: Union[str, EnergyCombo]) -> EnergyCombo:
    """Resolve a named combo, a "k:coeff,k:coeff" string, or a mapping."""
    if isinstance(energy, str):
        if energy in COMBOS:
            return COMBOS[energy]
        if ":" not in energy:
            raise ValueError(f"unknown energy name {energy!r}")
        combo = {}
        for item in energy.split(","):
            k, _, coeff = item.partition(":")
            combo[int(k)] = Fraction(coeff)
        return combo
    return dict(energy)


def combo_is_monotone(combo: EnergyCombo) -> bool:
    """True when every coefficient is nonnegative, so each G_k term (and
    hence the combo) decreases with distance."""
    return all(c >= 0 for c in combo.values())


def default_scale(energy: Union[str, EnergyCombo]) -> int:
    """2^25 for the low-degree combos, 2^30 for the degree-10 ones."""
    combo = combo_of(energy)
    return SMALL_SCALE if max(combo) >= 10 else BIG_SCALE


@dataclass(frozen=True)
class SearchParams:
    energy: Union[str, EnergyCombo]
    scale: Optional[int] = None
    eps0: Fraction = EPS0
    mode: str = "big"
    gilded: bool = True
    max_steps: Optional[int] = None
    workers: int = 1
    checkpoint_every: int = 10**6
    checkpoint_path: Optional[str] = None

    def __post_init__(self):
        if self.mode not in ("big", "small"):
            raise ValueError("mode must be 'big' or 'small'")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @property
    def combo(self) -> EnergyCombo:
        return combo_of(self.energy)

    @property
    def scale_value(self) -> int:
        return self.scale if self.scale is not None else default_scale(self.energy)

    @property
    def energy_name(self) -> str:
        if isinstance(self.energy, str):
            return self.energy
        return ",".join(f"{k}:{c}" for k, c in sorted(self.energy.items()))


@dataclass(frozen=True)
class Graded:
    """Result of grading one block: a pass with a reason, or a fail with
    the index to subdivide."""

    passed: bool
    reason: Optional[str] = None
    split_index: Optional[int] = None


def _classify_reason(verdict) -> Optional[Graded]:
    if isinstance(verdict, NeedsSplit):
        return Graded(False, split_index=verdict.index)
    if isinstance(verdict, Irrelevant):
        return Graded(True, reason=f"irrelevant:{verdict.reason}")
    if isinstance(verdict, OutOfDomain):
        return Graded(True, reason="out_of_domain")
    if isinstance(verdict, NearTBP):
        return Graded(True, reason="near_tbp" if verdict.via == "cube" else "small")
    return None


def grade(b: DyadicBlock, params: SearchParams) -> Graded:
    """Grade with exact arithmetic throughout."""
    combo = params.combo
    verdict = classify_block(
        b,
        monotone_energy=combo_is_monotone(combo),
        eps0=params.eps0,
        small_mode=params.mode == "small",
    )
    early = _classify_reason(verdict)
    if early is not None:
        return early
    bb = block_lower_bound(combo, b)
    if bb.bound > combo_tbp(combo):
        return Graded(True, reason="energy")
    return Graded(False, split_index=bb.recommendation)


# ---------------------------------------------------------------------------
# float fast path


def _push_f(x: float, y: float) -> Tuple[float, float, float]:
    s = 1.0 + x * x + y * y
    return (2.0 * x / s, 2.0 * y / s, 1.0 - 2.0 / s)


def _chi_f(diam: float, d_sq: float) -> float:
    return d_sq / (4.0 * diam) + d_sq * d_sq / (2.0 * diam**3)


def _vertices_f(q) -> List[Tuple[float, float, float]]:
    if q is INFINITY:
        return [(0.0, 0.0, 1.0)]
    if isinstance(q, DyadicSegment):
        a, b = (float(e) for e in q.endpoints())
        return [_push_f(a, 0.0), _push_f(b, 0.0)]
    return [_push_f(float(x), float(y)) for x, y in q.corners()]


def _metrics_f(q, verts) -> Tuple[float, float]:
    """(d^2, delta) with plain floats, mirroring the exact hull metrics."""
    if q is INFINITY:
        return 0.0, 0.0
    if isinstance(q, DyadicSegment):
        a, b = (float(e) for e in q.endpoints())
        u, v = verts
        d_sq = sum((p - r) ** 2 for p, r in zip(u, v))
        return d_sq, _chi_f(2.0, d_sq)
    d_sq = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            d_sq = max(
                d_sq, sum((p - r) ** 2 for p, r in zip(verts[i], verts[j]))
            )
    d1_sq = max(
        sum((p - r) ** 2 for p, r in zip(verts[i], verts[(i + 1) % 4]))
        for i in range(4)
    )
    side = float(q.side())
    cx, cy = (float(c) for c in q.center())
    r_sq = side * side / 2.0
    big_r_sq = cx * cx + cy * cy
    gap = big_r_sq - r_sq
    d2_sq = 16.0 * r_sq / (1.0 + 2.0 * r_sq + 2.0 * big_r_sq + gap * gap)
    return d_sq, max(_chi_f(1.0, d1_sq), _chi_f(2.0, d2_sq))


def _float_bound(combo: EnergyCombo, b: DyadicBlock):
    """(vertex_min, err, err_by_index) in floats; prune-only quality."""
    comps = list(b.components()) + [INFINITY]
    verts = [_vertices_f(q) for q in comps]
    mets = [_metrics_f(q, v) for q, v in zip(comps, verts)]
    ks = sorted(combo)
    coeffs = [float(combo[k]) for k in ks]
    weights = [abs(c) for c in coeffs]

    def dot_hi(i: int, j: int) -> float:
        hi = max(
            u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
            for u in verts[i]
            for v in verts[j]
        )
        if comps[i] is INFINITY or comps[j] is INFINITY:
            return hi
        di, dj = mets[i][1], mets[j][1]
        return hi + di + dj + di * dj

    err_by_index = []
    for i in range(4):
        d_sq, delta = mets[i]
        total = 0.0
        if d_sq or delta:
            for j in range(5):
                if j == i:
                    continue
                t = 2.0 + 2.0 * dot_hi(i, j)
                for k, w in zip(ks, weights):
                    term = 2.0 * k * t ** (k - 1) * delta
                    if k >= 2:
                        term += 0.5 * k * (k - 1) * t ** (k - 2) * d_sq
                    total += w * term
        err_by_index.append(total)

    tables = {}
    for i in range(5):
        for j in range(i + 1, 5):
            tables[(i, j)] = [
                [
                    sum(
                        c * (2.0 + 2.0 * (u[0] * v[0] + u[1] * v[1] + u[2] * v[2])) ** k
                        for k, c in zip(ks, coeffs)
                    )
                    for v in verts[j]
                ]
                for u in verts[i]
            ]
    pairs = list(tables)
    vertex_min = min(
        sum(tables[p][choice[p[0]]][choice[p[1]]] for p in pairs)
        for choice in product(*(range(len(v)) for v in verts))
    )
    return vertex_min, sum(err_by_index), err_by_index


def gilded_grade(b: DyadicBlock, params: SearchParams) -> Graded:
    """Float screen in front of the exact energy bound.

    Steps 1-4 are exact integer work either way.  At the energy step a
    float fail subdivides immediately; a float pass candidate is confirmed
    (or demoted to fail) by the exact bound.
    """
    combo = params.combo
    verdict = classify_block(
        b,
        monotone_energy=combo_is_monotone(combo),
        eps0=params.eps0,
        small_mode=params.mode == "small",
    )
    early = _classify_reason(verdict)
    if early is not None:
        return early
    vertex_min, err, err_by_index = _float_bound(combo, b)
    target = float(combo_tbp(combo))
    if vertex_min - err <= target:
        rec = 0
        for i in (1, 2, 3):
            if err_by_index[i] > err_by_index[rec]:
                rec = i
        return Graded(False, split_index=rec)
    bb = block_lower_bound(combo, b)
    if bb.bound > combo_tbp(combo):
        return Graded(True, reason="energy")
    return Graded(False, split_index=bb.recommendation)


# ---------------------------------------------------------------------------
# the driver


@dataclass
class Partition:
    params: SearchParams
    records: List[Tuple[DyadicBlock, str]] = field(default_factory=list)
    counters: Counter = field(default_factory=Counter)
    steps: int = 0
    max_depth: int = 0
    wall_seconds: float = 0.0

    @property
    def leaves(self) -> int:
        return len(self.records)

    def summary(self) -> Dict:
        return {
            "steps": self.steps,
            "leaves": self.leaves,
            "reasons": dict(sorted(self.counters.items())),
            "wall_seconds": round(self.wall_seconds, 3),
            "max_depth": self.max_depth,
        }


def _block_depth(b: DyadicBlock) -> int:
    return max(q.k for q in b.components())


def _run_stack(
    params: SearchParams,
    stack: List[DyadicBlock],
    partition: Partition,
    budget: Optional[int],
) -> Partition:
    grader = gilded_grade if params.gilded else grade
    start = time.monotonic()
    while stack:
        if budget is not None and partition.steps >= budget:
            partition.wall_seconds += time.monotonic() - start
            _maybe_checkpoint(params, stack, partition)
            raise BlockBudgetExceeded(
                f"step budget {budget} exhausted with {len(stack)} blocks pending"
            )
        b = stack.pop()
        partition.steps += 1
        partition.max_depth = max(partition.max_depth, _block_depth(b))
        g = grader(b, params)
        if g.passed:
            partition.records.append((b, g.reason))
            partition.counters[g.reason] += 1
        else:
            stack.extend(b.subdivide(g.split_index))
        if params.checkpoint_path and partition.steps % params.checkpoint_every == 0:
            _maybe_checkpoint(params, stack, partition)
    partition.wall_seconds += time.monotonic() - start
    return partition


def run(params: SearchParams, initial=None) -> Partition:
    """Run the search to completion (or step budget) and return the
    partition of the initial block(s)."""
    if initial is None:
        roots = [base_block(params.scale_value)]
    elif isinstance(initial, DyadicBlock):
        roots = [initial]
    else:
        roots = list(initial)
    if params.workers > 1:
        return _run_parallel(params, roots)
    return _run_stack(params, roots, Partition(params), params.max_steps)


def _frontier_split(params: SearchParams, roots: List[DyadicBlock], want: int):
    """Grade breadth-first until at least `want` undecided blocks exist."""
    partition = Partition(params)
    grader = gilded_grade if params.gilded else grade
    frontier = list(roots)
    while frontier and len(frontier) < want:
        nxt = []
        for b in frontier:
            partition.steps += 1
            partition.max_depth = max(partition.max_depth, _block_depth(b))
            g = grader(b, params)
            if g.passed:
                partition.records.append((b, g.reason))
                partition.counters[g.reason] += 1
            else:
                nxt.extend(b.subdivide(g.split_index))
        if not nxt:
            break
        frontier = nxt
    return partition, frontier


def _worker_run(args):
    params, block_text, scale = args
    block = block_from_text(block_text, scale)
    sub = _run_stack(params, [block], Partition(params), None)
    return (
        [(block_to_text(b), reason) for b, reason in sub.records],
        dict(sub.counters),
        sub.steps,
        sub.max_depth,
        sub.wall_seconds,
    )


def _run_parallel(params: SearchParams, roots: List[DyadicBlock]) -> Partition:
    import multiprocessing as mp

    start = time.monotonic()
    seed, frontier = _frontier_split(params, roots, 4 * params.workers)
    worker_params = replace(
        params, workers=1, max_steps=None, checkpoint_path=None
    )
    scale = params.scale_value
    jobs = [(worker_params, block_to_text(b), scale) for b in frontier]
    with mp.get_context("spawn").Pool(params.workers) as pool:
        results = pool.map(_worker_run, jobs)
    for records, counters, steps, depth, _ in results:
        for text, reason in records:
            seed.records.append((block_from_text(text, scale), reason))
        for reason, n in counters.items():
            seed.counters[reason] += n
        seed.steps += steps
        seed.max_depth = max(seed.max_depth, depth)
    seed.wall_seconds = time.monotonic() - start
    if params.max_steps is not None and seed.steps > params.max_steps:
        raise BlockBudgetExceeded(
            f"parallel run used {seed.steps} steps, over budget {params.max_steps}"
        )
    return seed


# ---------------------------------------------------------------------------
# serialization


def _header_lines(params: SearchParams) -> List[str]:
    return [
        f"# pentacharge partition v{FORMAT_VERSION}",
        f"# energy={params.energy_name} scale={params.scale_value} "
        f"eps0={params.eps0} mode={params.mode}",
    ]


def save_partition(partition: Partition, path: str) -> None:
    """Header (energy, scale, eps0, mode) then one `reason<tab>block` line
    per leaf."""
    with open(path, "w", encoding="ascii") as fh:
        for line in _header_lines(partition.params):
            fh.write(line + "\n")
        for block, reason in partition.records:
            fh.write(f"{reason}\t{block_to_text(block)}\n")


def load_partition(path: str) -> Partition:
    with open(path, encoding="ascii") as fh:
        magic = fh.readline().strip()
        if magic != f"# pentacharge partition v{FORMAT_VERSION}":
            raise ValueError(f"unrecognized partition header {magic!r}")
        meta = dict(
            item.split("=", 1) for item in fh.readline().strip("#\n ").split()
        )
        params = SearchParams(
            energy=meta["energy"],
            scale=int(meta["scale"]),
            eps0=Fraction(meta["eps0"]),
            mode=meta["mode"],
        )
        partition = Partition(params)
        for line in fh:
            reason, text = line.rstrip("\n").split("\t")
            partition.records.append(
                (block_from_text(text, params.scale_value), reason)
            )
            partition.counters[reason] += 1
    return partition


def _maybe_checkpoint(
    params: SearchParams,
    stack: List[DyadicBlock],
    partition: Partition,
) -> None:
    if not params.checkpoint_path:
        return
    state = {
        "version": FORMAT_VERSION,
        "energy": params.energy_name,
        "scale": params.scale_value,
        "eps0": str(params.eps0),
        "mode": params.mode,
        "steps": partition.steps,
        "max_depth": partition.max_depth,
        "counters": dict(partition.counters),
        "stack": [block_to_text(b) for b in stack],
        "records": [
            [reason, block_to_text(b)] for b, reason in partition.records
        ],
    }
    with open(params.checkpoint_path, "w", encoding="ascii") as fh:
        json.dump(state, fh)


def resume(params: SearchParams, checkpoint_path: str) -> Partition:
    """Continue a checkpointed run; params must describe the same search."""
    with open(checkpoint_path, encoding="ascii") as fh:
        state = json.load(fh)
    if state["energy"] != params.energy_name or state["scale"] != params.scale_value:
        raise ValueError("checkpoint belongs to a different search")
    scale = params.scale_value
    partition = Partition(params)
    partition.steps = state["steps"]
    partition.max_depth = state["max_depth"]
    partition.counters = Counter(state["counters"])
    partition.records = [
        (block_from_text(text, scale), reason) for reason, text in state["records"]
    ]
    stack = [block_from_text(text, scale) for text in state["stack"]]
    return _run_stack(params, stack, partition, params.max_steps)
