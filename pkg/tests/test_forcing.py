"""Forcing-case tests: matrices against an independent exact solve, coefficient
positivity, the derivative-count polynomial, and the root-structure certificates."""

import random
from fractions import Fraction

import pytest

from pentacharge.arith import PrecInterval, validated_sqrt
from pentacharge.energy import COMBOS
from pentacharge.errors import CertificationFailed
from pentacharge.forcing import (
    CASES,
    PowerCoeffs,
    build_psi_approx,
    certified_sign,
    coefficient_row,
    defining_condition_residuals,
    g_basis_coeffs,
    gamma_at_zero_combo,
    gamma_value,
    h_second_derivative,
    monic_psi_exact,
    n_basis_coeffs,
    plan_coverage,
    power_law_value,
    verify_case,
    verify_coefficient_positivity,
    verify_simple_roots,
    verify_single_coefficient,
)
from pentacharge.posdom import isolate_roots, parallel_pda
from pentacharge.powercombo import LEFT, RIGHT, ComboCoeffs

F = Fraction


# ---------------------------------------------------------------------------
# Oracle: re-solve the five matching conditions per case with plain linear
# algebra over Fraction and compare every matrix row.
# ---------------------------------------------------------------------------


def gk_val(k, m):
    return F(4 - m) ** k


def gk_rderiv(k, m):
    # r G_k'(r) at r = sqrt(m), from r G_k' = 2k G_k - 8k G_(k-1)
    if k == 0:
        return F(0)
    return 2 * k * gk_val(k, m) - 8 * k * gk_val(k - 1, m)


def solve_case_matrix(triple, sign):
    basis = [{0: F(1)}, {1: F(1)}] + [COMBOS[name] for name in triple]
    M = [
        [sum(F(c) * gk_val(k, m) for k, c in b.items()) for b in basis]
        for m in (2, 3, 4)
    ]
    M += [
        [sum(F(c) * gk_rderiv(k, m) for k, c in b.items()) for b in basis]
        for m in (2, 3)
    ]
    rows = []
    for slot in range(6):
        rhs = [F(0)] * 5
        if slot < 3:
            rhs[slot] = F(sign)
        elif slot - 3 < 2:
            rhs[slot] = F(-sign)
        rows.append(rhs)
    # gaussian elimination on the transposed system: solve M a = rhs per slot
    n = 5
    aug = [[M[i][j] for j in range(n)] + [rows[c][i] for c in range(6)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    solved = [aug[i][n:] for i in range(n)]
    c1 = [F(0)] * 6
    for b, arow in zip(basis, solved):
        g1c = b.get(1, 0)
        if g1c:
            c1 = [x + g1c * y for x, y in zip(c1, arow)]
    delta = [-8 * x for x in c1]
    delta[5] += sign
    solved.append(delta)
    return solved


class TestMatrices:
    @pytest.mark.parametrize("cid", [1, 2, 3, 4])
    def test_rows_match_exact_solve(self, cid):
        case = CASES[cid]
        solved = solve_case_matrix(case.triple, case.sign)
        for name, expected in zip(("a0", "a1", "a2", "a3", "a4", "delta"), solved):
            row = coefficient_row(case, name)
            got = (row.a2, row.a3, row.a4, row.b2, row.b3, row.b4)
            assert got == tuple(expected), f"case {cid} row {name}"

    def test_known_row_values(self):
        r = coefficient_row(CASES[1], "a1")
        assert (r.a2, r.a3, r.a4) == (F(1), F(1152, 792), F(-1944, 792))
        assert (r.b2, r.b3, r.b4) == (F(-54, 792), F(-288, 792), F(0))
        r = coefficient_row(CASES[4], "a4")
        assert (r.a2, r.a3, r.a4, r.b2, r.b3, r.b4) == (
            F(30, 144), F(-24, 144), F(-6, 144), F(-3, 144), F(-4, 144), F(0),
        )
        r = coefficient_row(CASES[2], "delta")
        assert (r.a2, r.b4) == (F(-707520, 268536), F(1))

    def test_a0_is_the_pure_power(self):
        # a0(s) = sign * 4^(-s/2) in every case
        for case in CASES.values():
            r = coefficient_row(case, "a0")
            assert (r.a2, r.a3, r.b2, r.b3, r.b4) == (F(0),) * 5
            assert r.a4 == F(case.sign)

    @pytest.mark.parametrize("cid", [1, 2, 3, 4])
    def test_defining_conditions_at_random_parameters(self, cid):
        rng = random.Random(71 + cid)
        case = CASES[cid]
        lo, hi = case.s_interval
        for _ in range(5):
            s = lo + (hi - lo) * F(rng.randint(1, 63), 64)
            for res in defining_condition_residuals(case, s, prec=128):
                assert res.lo <= 0 <= res.hi

    def test_cases_two_and_three_share_gamma(self):
        # same function space, same matching conditions, same function
        c2 = g_basis_coeffs(CASES[2])
        c3 = g_basis_coeffs(CASES[3])
        assert set(c2) == set(c3) == {0, 1, 2, 5, 10}
        for k in c2:
            assert c2[k] == c3[k]
        assert monic_psi_exact(CASES[2], 14) == monic_psi_exact(CASES[3], 14)


class TestGammaUnderApproximation:
    @pytest.mark.parametrize("cid", [1, 2, 3, 4])
    def test_gamma_never_certified_above_power_law(self, cid):
        rng = random.Random(11 * cid)
        case = CASES[cid]
        lo, hi = case.s_interval
        for _ in range(50):
            s = lo + (hi - lo) * F(rng.randint(1, 127), 128)
            r = F(rng.randint(1, 128), 64)  # (0, 2]
            r_enc = PrecInterval.point(r, 128)
            g = gamma_value(case, s, r_enc, 128)
            p = power_law_value(case, s, r_enc, 128)
            assert not g.lo > p.hi, f"Gamma certified above R at s={s}, r={r}"

    def test_gamma_at_zero_negative_in_the_negative_case(self):
        combo = gamma_at_zero_combo(CASES[4])
        assert certified_sign(combo, F(-1)) == -1
        assert certified_sign(combo, F(-1, 2)) == -1


class TestCoveragePlan:
    def test_unit_cells_and_directions(self):
        plan = plan_coverage(F(0), F(6))
        assert plan[0] == (0, RIGHT, F(0), F(1))
        assert plan[1] == (2, LEFT, F(0), F(1))
        assert len(plan) == 6

    def test_fractional_endpoints_clip(self):
        plan = plan_coverage(F(0), F(13, 2))
        assert plan[-1] == (6, RIGHT, F(0), F(1, 2))
        plan = plan_coverage(F(13), F(15) + F(25, 512))
        assert plan[0] == (14, LEFT, F(0), F(1))
        assert plan[-1] == (16, LEFT, F(487, 512), F(1))

    def test_negative_range_avoids_missing_anchors(self):
        plan = plan_coverage(F(-2), F(0))
        assert plan == [(-2, RIGHT, F(0), F(1)), (0, LEFT, F(0), F(1))]


class TestCoefficientPositivity:
    def test_case_one_passes(self):
        section = verify_coefficient_positivity(CASES[1])
        names = {r["coefficient"] for r in section["records"]}
        assert names == {"a1", "a2", "a3", "a4", "delta"}

    def test_case_four_passes_with_zero_value_extra(self):
        section = verify_coefficient_positivity(CASES[4])
        assert section["extra"], "negative case must also certify Gamma(0) < 0"

    def test_negative_control_fails_past_six(self):
        # a3 of the first case dips negative between 6 and 6.1
        with pytest.raises(CertificationFailed):
            verify_single_coefficient(CASES[1], "a3", F(0), F(13, 2), "(]")

    def test_spot_check_failure_detected(self):
        # delta of the first case evaluated far outside its range goes negative
        pc = PowerCoeffs.from_combo(coefficient_row(CASES[4], "a0"))
        with pytest.raises(CertificationFailed):
            verify_single_coefficient(
                CASES[4], "a0", F(-2), F(0), "()", pc=pc
            )

    def test_case_three_covers_cutoff(self):
        section = verify_coefficient_positivity(CASES[3])
        spots = {r["spot_check"] for r in section["records"] if "spot_check" in r}
        assert str(F(15) + F(25, 512)) in spots


class TestPsi:
    def test_explicit_decade_polynomial(self):
        psi = monic_psi_exact(CASES[2], 6)
        expected = {
            (10,): F(1),
            (9,): F(-40, 13),
            (5,): F(830304, 5785),
            (4,): F(-415152, 1157),
            (2,): F(789255, 1157),
            (1,): F(-3264104, 5785),
            (0,): F(115060, 1157),
        }
        assert dict(psi.terms()) == expected

    def test_monic_leading_coefficients(self):
        # t^(K-1) coefficient is -8K/(2K + s) at the top in every case
        for cid, K in ((1, 6), (2, 10), (3, 10), (4, 5)):
            psi = monic_psi_exact(CASES[cid], 2)
            assert psi.coeff((K,)) == 1
            assert psi.coeff((K - 1,)) == F(-8 * K, 2 * K + 2)

    def test_four_simple_roots_at_the_exact_parameter(self):
        psi = monic_psi_exact(CASES[2], 6)
        iso = isolate_roots(psi, (F(0), F(4)))
        assert len(iso.roots) == 4
        # the known rational roots 1 and 2 each sit in exactly one record
        for root in (F(1), F(2)):
            hits = [r for r in iso.roots if r.interval[0] <= root <= r.interval[1]]
            assert len(hits) == 1
            assert psi.evaluate([root]) == 0
        # the other two roots are strictly inside (0,1) and (1,2)
        others = [
            r for r in iso.roots
            if not (r.interval[0] <= 1 <= r.interval[1])
            and not (r.interval[0] <= 2 <= r.interval[1])
        ]
        assert len(others) == 2
        assert others[0].interval[1] < 1
        assert 1 < others[1].interval[0] and others[1].interval[1] < 2

    def test_leading_combo_positive(self):
        # N = d_K * psi with d_K = (s + 2K) * a4hat, certified positive
        for cid in (1, 2, 3, 4):
            case = CASES[cid]
            d = n_basis_coeffs(case)
            top = max(d)
            assert top == case.psi_degree
            lo, hi = case.s_interval
            mid = (lo + hi) / 2
            assert certified_sign(d[top], mid) == 1

    def test_sandwich_traps_the_combo_values(self):
        approx = build_psi_approx(CASES[2], (6, 7))
        d = n_basis_coeffs(CASES[2])
        t, u = F(1, 8), F(1, 8)
        s = 6 + t
        v = 4 * u
        n_val = PrecInterval.point(F(0), 160)
        dn_val = PrecInterval.point(F(0), 160)
        for k, pc in d.items():
            dk = pc.eval(s, 160)
            n_val = n_val + dk * v**k
            if k >= 1:
                dn_val = dn_val + dk * k * v ** (k - 1)
        under = approx.psi_under.evaluate([t, u])
        over = approx.psi_over.evaluate([t, u])
        assert under <= n_val.lo and n_val.hi <= over
        dunder = approx.dpsi_under.evaluate([t, u])
        dover = approx.dpsi_over.evaluate([t, u])
        assert dunder <= dn_val.lo and dn_val.hi <= dover

    def test_sandwich_collapses_at_anchor(self):
        approx = build_psi_approx(CASES[2], (8, 9))
        # left direction: t = 0 is s = anchor = 8, where the series is exact
        d = n_basis_coeffs(CASES[2])
        u = F(1, 4)
        exact = sum(pc.eval(8).lo * (4 * u) ** k for k, pc in d.items())
        assert approx.psi_under.evaluate([F(0), u]) == exact
        assert approx.psi_over.evaluate([F(0), u]) == exact

    def test_parallel_family_certifies_one_span(self):
        approx = build_psi_approx(CASES[2], (6, 7))
        cert = parallel_pda(approx.family(), "PD", max_depth=40)
        assert cert.leaves
        members = {leaf.member for leaf in cert.leaves}
        assert members <= {0, 1, 2, 3}


class TestSecondDerivativeChecks:
    def test_touch_points_are_strict_minima(self):
        for cid, s in ((1, F(3)), (4, F(-1))):
            for m in (2, 3):
                enc = h_second_derivative(CASES[cid], s, m)
                assert enc.lo > 0

    def test_first_derivative_vanishes_at_touch_points(self):
        # H'(sqrt m) = 0 is the derivative matching condition, m = 2, 3
        case = CASES[1]
        s = F(3)
        for m in (2, 3):
            r = validated_sqrt(F(m), 160)
            g1 = gamma_value(case, s, r, 160, deriv=1)
            p1 = power_law_value(case, s, r, 160, deriv=1)
            diff = g1 - p1
            assert diff.lo <= 0 <= diff.hi


class TestCaseReports:
    def test_fast_cases_end_to_end(self):
        for cid in (1, 4):
            report = verify_case(CASES[cid])
            assert report.passed
            assert report.assumptions
            assert report.second_derivative_checks
            text = report.to_text()
            assert '"passed": true' in text

    def test_decade_case_end_to_end(self):
        report = verify_case(CASES[2])
        assert report.passed
        assert len(report.psi_runs) == 7
        assert report.root_isolation is not None

    def test_root_verification_rejects_bad_span(self):
        with pytest.raises(ValueError):
            build_psi_approx(CASES[2], (F(6), F(15, 2)))


class TestPowerCoeffs:
    def test_times_s_shifts_and_overflows(self):
        pc = PowerCoeffs.from_combo(ComboCoeffs.of(1, 0, 0, 0, 2, 0))
        shifted = pc.times_s()
        assert shifted.a == (F(0),) * 3
        assert shifted.b == (F(1), F(0), F(0))
        assert shifted.c == (F(0), F(2), F(0))
        with pytest.raises(ValueError):
            shifted.times_s()

    def test_eval_exact_at_even_integers(self):
        pc = PowerCoeffs((F(1), F(0), F(0)), (F(0), F(0), F(0)), (F(1), F(0), F(0)))
        # 2^(-s/2) + s^2 * 2^(-s/2) at s = 4: (1 + 16)/4
        enc = pc.eval(4)
        assert enc.lo == enc.hi == F(17, 4)

    def test_under_over_traps_squared_slot(self):
        pc = PowerCoeffs((F(0),) * 3, (F(0),) * 3, (F(1), F(0), F(0)))
        under, over = pc.under_over(2, RIGHT)
        for tnum in (0, 1, 3, 8):
            t = F(tnum, 8)
            s = 2 + t
            truth = pc.eval(s, 192)
            assert under.evaluate([t]) <= truth.lo
            assert truth.hi <= over.evaluate([t])
