"""Divide-and-conquer search driver tests.

The subtree fixtures are sub-blocks of the standard search box whose
subtrees are small enough to replay in a test run; their step and leaf
counts were measured once on a reference run and pinned.
"""

import os
import random
from dataclasses import replace
from fractions import Fraction as F

import pytest

from pentacharge.energy import COMBOS, combo_tbp, config_energy
from pentacharge.errors import BlockBudgetExceeded
from pentacharge.geometry import (
    DyadicBlock,
    DyadicSegment,
    DyadicSquare,
    base_block,
    block_from_text,
    block_to_text,
)
from pentacharge.search import (
    BIG_SCALE,
    SMALL_SCALE,
    SearchParams,
    combo_is_monotone,
    combo_of,
    default_scale,
    gilded_grade,
    grade,
    load_partition,
    resume,
    run,
    save_partition,
)

S25 = 1 << 25
S30 = 1 << 30

# sub-blocks of the standard box: whole segment, three side-1/2 squares
RICH = "-2 67108864 | 1 -8388608 -8388608 | 1 8388608 8388608 | 1 25165824 41943040"
TINY = "-2 67108864 | 1 25165824 -41943040 | 1 25165824 8388608 | 1 -41943040 41943040"
MID = "-2 67108864 | 1 41943040 -25165824 | 1 -8388608 8388608 | 1 -8388608 25165824"

# a leaf of the TINY subtree that clears the energy bound on its own
ENERGY_LEAF = "-1 100663296 | 1 25165824 -41943040 | 2 29360128 12582912 | 1 -41943040 41943040"

G3 = SearchParams(energy="G3", gilded=True)


@pytest.fixture(scope="module")
def rich_partition():
    return run(G3, initial=block_from_text(RICH, S25))


@pytest.fixture(scope="module")
def mid_partition():
    return run(G3, initial=block_from_text(MID, S25))


# ---------------------------------------------------------------------------
# parameters and combo handling


class TestParams:
    def test_named_combos_resolve(self):
        assert combo_of("G3") == COMBOS["G3"]
        assert combo_of("G10s") == COMBOS["G10s"]

    def test_custom_combo_string(self):
        assert combo_of("10:1,5:13,2:68") == {
            10: F(1), 5: F(13), 2: F(68),
        }

    def test_dict_passthrough(self):
        combo = {3: F(2), 1: F(-1)}
        assert combo_of(combo) == combo

    def test_unknown_name_rejected(self):
        with pytest.raises((KeyError, ValueError)):
            combo_of("G99")

    def test_monotone_detection(self):
        assert combo_is_monotone(COMBOS["G3"])
        assert combo_is_monotone(COMBOS["G10s"])
        assert not combo_is_monotone(COMBOS["G5b"])

    def test_scale_follows_top_degree(self):
        assert default_scale(COMBOS["G3"]) == BIG_SCALE == S25
        assert default_scale(COMBOS["G6"]) == BIG_SCALE
        assert default_scale(COMBOS["G10s"]) == SMALL_SCALE == S30

    def test_params_properties(self):
        p = SearchParams(energy="G10ss")
        assert p.combo == COMBOS["G10ss"]
        assert p.scale_value == SMALL_SCALE
        assert p.energy_name == "G10ss"
        q = SearchParams(energy={2: F(1)}, scale=S25)
        assert q.scale_value == S25


# ---------------------------------------------------------------------------
# grading single blocks


class TestGrade:
    def test_base_block_needs_a_split(self):
        g = grade(base_block(S25), G3)
        assert not g.passed
        assert g.split_index in (0, 1)

    def test_near_tbp_cube_passes(self):
        from math import isqrt

        a = isqrt(S25 * S25 // 3)
        b = DyadicBlock(
            DyadicSegment(S25, 18, S25),
            DyadicSquare(0, -a, 18, S25),
            DyadicSquare(-S25, 0, 18, S25),
            DyadicSquare(0, a, 18, S25),
        )
        for grader in (grade, gilded_grade):
            g = grader(b, G3)
            assert g.passed and g.reason == "near_tbp"

    def test_energy_leaf_passes_in_both_modes(self):
        b = block_from_text(ENERGY_LEAF, S25)
        for grader in (grade, gilded_grade):
            g = grader(b, G3)
            assert g.passed and g.reason == "energy"

    def test_out_of_domain_square_passes(self):
        b = DyadicBlock(
            DyadicSegment(3 * S25 // 2, 1, S25),
            DyadicSquare(25 * S25 // 16, -S25 // 16, 3, S25),
            DyadicSquare(S25 // 2, S25 // 2, 3, S25),
            DyadicSquare(-S25 // 2, S25 // 2, 3, S25),
        )
        g = grade(b, G3)
        assert g.passed and g.reason == "out_of_domain"

    def test_small_region_block_needs_small_mode(self):
        u = S30 // 512
        b = DyadicBlock(
            DyadicSegment(465 * u, 9, S30),
            DyadicSquare(0, -400 * u, 9, S30),
            DyadicSquare(-450 * u, 12 * u, 9, S30),
            DyadicSquare(0, 356 * u, 9, S30),
        )
        small = SearchParams(energy="G10s", mode="small")
        g = grade(b, small)
        assert g.passed and g.reason == "small"
        big = SearchParams(energy="G10s", mode="big", scale=S30)
        h = grade(b, big)
        assert h.reason != "small"


class TestGildedAgreement:
    def test_random_blocks_decide_identically(self):
        rng = random.Random(20260816)
        base = base_block(S25)
        checked = 0
        while checked < 200:
            seg = base.q0
            for _ in range(rng.randint(3, 6)):
                seg = rng.choice(seg.subdivide())
            squares = []
            for _ in range(3):
                q = base.q1
                for _ in range(rng.randint(3, 7)):
                    q = rng.choice(q.subdivide())
                squares.append(q)
            b = DyadicBlock(seg, *squares)
            exact = grade(b, G3)
            fast = gilded_grade(b, G3)
            assert exact.passed == fast.passed
            if exact.passed:
                assert exact.reason == fast.reason
            checked += 1


# ---------------------------------------------------------------------------
# running subtrees


class TestRunHalting:
    def test_rich_subtree_replays_exactly(self, rich_partition):
        s = rich_partition.summary()
        assert s["steps"] == 607
        assert s["leaves"] == 432
        assert s["reasons"] == {"energy": 332, "irrelevant:2": 1, "irrelevant:7": 99}
        assert s["max_depth"] == 3

    def test_restricted_rerun_of_a_deep_sub_block_halts(self):
        # walk six forced splits down from the base box, then run the
        # resulting sub-block to completion
        b = base_block(S25)
        for _ in range(6):
            g = gilded_grade(b, G3)
            assert not g.passed
            b = b.subdivide(g.split_index)[-1]
        part = run(replace(G3, max_steps=10**4), initial=b)
        assert 0 < part.steps < 10**4
        assert part.leaves == sum(part.counters.values())

    def test_budget_stops_the_run(self):
        with pytest.raises(BlockBudgetExceeded):
            run(replace(G3, max_steps=5))


class TestDeterminism:
    def test_two_runs_agree_record_for_record(self, mid_partition):
        again = run(G3, initial=block_from_text(MID, S25))
        first = [(block_to_text(b), r) for b, r in mid_partition.records]
        second = [(block_to_text(b), r) for b, r in again.records]
        assert first == second

    def test_saved_partitions_are_byte_identical(self, mid_partition, tmp_path):
        p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
        save_partition(mid_partition, str(p1))
        save_partition(mid_partition, str(p2))
        assert p1.read_bytes() == p2.read_bytes()


class TestTiling:
    @staticmethod
    def _measure(b):
        q0, q1, q2, q3 = b.components()
        m = F(2) ** (-q0.k)
        for q in (q1, q2, q3):
            m *= (F(2) ** (-q.k)) ** 2
        return m

    @staticmethod
    def _disjoint(a, b):
        s1, s2 = a.q0, b.q0
        lo1, hi1 = s1.x_range()
        lo2, hi2 = s2.x_range()
        if hi1 <= lo2 or hi2 <= lo1:
            return True
        for qa, qb in zip(a.squares(), b.squares()):
            xl1, xh1 = qa.x_range()
            xl2, xh2 = qb.x_range()
            if xh1 <= xl2 or xh2 <= xl1:
                return True
            yl1, yh1 = qa.y_range()
            yl2, yh2 = qb.y_range()
            if yh1 <= yl2 or yh2 <= yl1:
                return True
        return False

    def test_leaves_tile_the_initial_block(self, mid_partition):
        initial = block_from_text(MID, S25)
        leaves = [b for b, _ in mid_partition.records]
        assert sum(self._measure(b) for b in leaves) == self._measure(initial)
        for i in range(len(leaves)):
            for j in range(i + 1, len(leaves)):
                assert self._disjoint(leaves[i], leaves[j])


class TestEnergyPassSoundness:
    def test_sampled_configurations_beat_the_target(self, rich_partition):
        rng = random.Random(5)
        combo = COMBOS["G3"]
        target = combo_tbp(combo)
        leaves = [b for b, r in rich_partition.records if r == "energy"]
        assert len(leaves) >= 100
        for b in rng.sample(leaves, 100):
            pts = []
            lo, hi = b.q0.x_range()
            pts.append((F(rng.randint(lo, hi), b.S), F(0)))
            for q in b.squares():
                xl, xh = q.x_range()
                yl, yh = q.y_range()
                pts.append(
                    (F(rng.randint(xl, xh), b.S), F(rng.randint(yl, yh), b.S))
                )
            assert config_energy(combo, pts) > target


# ---------------------------------------------------------------------------
# persistence


class TestPersistence:
    def test_partition_round_trip(self, mid_partition, tmp_path):
        path = tmp_path / "part.txt"
        save_partition(mid_partition, str(path))
        loaded = load_partition(str(path))
        assert loaded.counters == mid_partition.counters
        assert [(block_to_text(b), r) for b, r in loaded.records] == [
            (block_to_text(b), r) for b, r in mid_partition.records
        ]
        assert loaded.params.energy_name == "G3"
        assert loaded.params.scale_value == S25

    def test_corrupt_header_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("# something else\n")
        with pytest.raises(ValueError):
            load_partition(str(path))

    def test_checkpoint_and_resume_complete_the_run(self, rich_partition, tmp_path):
        ck = tmp_path / "ck.json"
        budgeted = replace(G3, max_steps=300, checkpoint_path=str(ck))
        with pytest.raises(BlockBudgetExceeded):
            run(budgeted, initial=block_from_text(RICH, S25))
        assert ck.exists()
        finished = resume(replace(G3, max_steps=None), str(ck))
        assert finished.steps == rich_partition.steps
        assert [(block_to_text(b), r) for b, r in finished.records] == [
            (block_to_text(b), r) for b, r in rich_partition.records
        ]

    def test_resume_rejects_a_different_search(self, tmp_path):
        ck = tmp_path / "ck.json"
        budgeted = replace(G3, max_steps=30, checkpoint_path=str(ck))
        with pytest.raises(BlockBudgetExceeded):
            run(budgeted, initial=block_from_text(RICH, S25))
        with pytest.raises(ValueError):
            resume(SearchParams(energy="G4"), str(ck))


class TestParallel:
    def test_two_workers_match_the_serial_leaf_set(self, mid_partition):
        par = run(replace(G3, workers=2), initial=block_from_text(MID, S25))
        serial = set((block_to_text(b), r) for b, r in mid_partition.records)
        parallel = set((block_to_text(b), r) for b, r in par.records)
        assert parallel == serial
        assert par.steps == mid_partition.steps
