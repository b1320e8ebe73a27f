"""Acceptance criteria, one test per criterion, each printing a PASS line.

Long-running pieces (the n = 5758 conference row and the n = 6 oracle)
carry the `slow` marker and run with `pytest -m slow`.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from maxdet.border import (SearchConfig, exhaustive_search, iter_all_borders,
                           run_trial, search, trial_generator, verify_witness)
from maxdet.bounds import evaluate_bounds, maxdet_oracle, run_lemma_suite
from maxdet.cli import EXCEPTIONAL_ROWS
from maxdet.constructions import (CONFERENCE, HADAMARD, build_recipe,
                                  paley_conference, plan_recipe, validate)
from maxdet.sieve import hadregion_violations

# documented deviation for criterion 7: fixpoint closure of the product
# rule over Yamada-rule orders lands inside two of the table's intervals
EXPECTED_INTERIOR_MEMBERS = {47976: "product8", 53736: "product8"}


def _report(num: int, name: str, detail: str = "") -> None:
    suffix = f"  [{detail}]" if detail else ""
    print(f"ACCEPTANCE {num:02d} {name}: PASS{suffix}")


def test_criterion_01_construction_validity():
    t0 = time.time()
    checked = 0
    for m in [1, 2] + list(range(4, 2001, 4)):
        recipe = plan_recipe(HADAMARD, m)
        if recipe is not None:
            assert validate(build_recipe(recipe)), recipe
            checked += 1
    for m in range(2, 2001, 2):
        recipe = plan_recipe(CONFERENCE, m)
        if recipe is not None:
            assert validate(build_recipe(recipe)), recipe
            checked += 1
    elapsed = time.time() - t0
    assert elapsed < 60
    _report(1, "construction validity", f"{checked} matrices, {elapsed:.1f}s")


def test_criterion_02_exact_expectations(h4):
    f11 = [Fraction(res.border.G[0, 0], 4) for res in iter_all_borders(h4, 1)]
    assert len(f11) == 16
    assert sum(f11) / 16 == Fraction(3, 2)  # = g(4) - 1, zero tolerance

    f12_sq = [Fraction(res.border.G[0, 1], 4) ** 2
              for res in iter_all_borders(h4, 2)]
    assert len(f12_sq) == 256
    assert sum(f12_sq) / 256 == 1
    _report(2, "exact expectations at h=4")


def test_criterion_03_best_bound_invariants():
    t0 = time.time()
    d = 3
    trials_per_h = 3400  # > 10^4 across the three core orders
    for h in (8, 12, 16):
        q = build_recipe(plan_recipe(HADAMARD, h))
        qm = q.matrix.astype(np.int64)
        rng = trial_generator(2024, h)
        b_all = (rng.integers(0, 2, size=(trials_per_h, h, d),
                              dtype=np.int64) * 2 - 1)
        p = b_all.transpose(0, 2, 1) @ qm
        c_all = np.where(p >= 0, 1, -1)
        cqt = c_all @ qm.T
        g_all = cqt @ b_all
        bound = h ** 1.5
        diag = g_all[:, np.arange(d), np.arange(d)]
        assert np.all(diag >= 0) and np.all(diag <= bound)
        off = g_all[:, ~np.eye(d, dtype=bool)]
        assert np.all(np.abs(off) <= bound)
        assert np.all((cqt ** 2).sum(axis=2) == h * h)
    _report(3, "Gram block bounds and row norms",
            f"3x{trials_per_h} trials, {time.time()-t0:.1f}s")


def test_criterion_04_small_border_ladder():
    t0 = time.time()
    for h in (4, 8, 12, 16, 20, 24):
        q = build_recipe(plan_recipe(HADAMARD, h))
        for d in (1, 2, 3):
            n = h + d
            rhs_log = 0.5 * d * math.log(2 * n / math.pi)
            trials = 1000
            while True:
                best = search(q, d, SearchConfig(trials=trials, master_seed=0))
                lhs_log = math.log(abs(best.det_n)) - d * math.log(h)
                if lhs_log > rhs_log:
                    break
                assert trials < 8000, (h, d, lhs_log, rhs_log)
                trials *= 2
    elapsed = time.time() - t0
    assert elapsed < 120
    _report(4, "direct-expectation floor at small h,d", f"{elapsed:.1f}s")


def test_criterion_05_oracle_agreement(h4):
    t0 = time.time()
    assert [maxdet_oracle(n) for n in (1, 2, 3, 4)] == [1, 2, 4, 16]
    d5 = maxdet_oracle(5)
    oracle_log = math.log(d5) - 2.5 * math.log(5)

    best = exhaustive_search(h4, 1)
    # exhaustive bordering attains the true maximum at n = 5, exactly
    assert 4 * abs(best.det_n) == d5
    assert abs(best.ratio.log_abs - oracle_log) < 1e-9
    for t in range(50):
        res = run_trial(h4, 1, trial_generator(31337, t))
        assert res.ratio.log_abs <= oracle_log + 1e-12
    elapsed = time.time() - t0
    assert elapsed < 10
    _report(5, "maxdet oracle agreement", f"D(5)={d5}, {elapsed:.1f}s")


@pytest.mark.slow
def test_criterion_05s_oracle_n6(h4):
    d6 = maxdet_oracle(6)
    assert d6 == 160
    oracle_log = math.log(d6) - 3.0 * math.log(6)
    best = exhaustive_search(h4, 2)
    assert best.ratio.log_abs <= oracle_log + 1e-12
    _report(5, "slow: n=6 oracle", f"D(6)={d6}")


def test_criterion_06_table_fast_rows():
    t0 = time.time()
    h664 = build_recipe("paley1(331);double")
    target_670 = 3 * math.log(2 / (math.pi * math.e))
    trials = 256
    while True:
        best = search(h664, 6, SearchConfig(trials=trials, master_seed=0))
        if best.ratio.sign > 0 and best.ratio.log_abs > target_670:
            break
        assert trials < 1024, best.ratio.value()
        trials *= 2

    c710 = paley_conference(709)
    target_717 = 5 * math.log(0.352)
    trials = 256
    while True:
        best = search(c710, 7, SearchConfig(trials=trials, master_seed=0))
        if best.ratio.sign > 0 and best.ratio.log_abs > target_717:
            break
        assert trials < 1024, best.ratio.value()
        trials *= 2
    elapsed = time.time() - t0
    assert elapsed < 300
    _report(6, "fast exceptional rows n=670, n=717", f"{elapsed:.1f}s")


@pytest.mark.slow
def test_criterion_06s_conference_5758():
    t0 = time.time()
    q = paley_conference(5749)
    target = math.log(0.002115)
    trials = 256
    while True:
        best = search(q, 8, SearchConfig(trials=trials, master_seed=0))
        if best.ratio.sign > 0 and best.ratio.log_abs > target:
            break
        assert trials < 1024, best.ratio.value()
        trials *= 2
    elapsed = time.time() - t0
    assert elapsed < 1800
    _report(6, "slow: conference row n=5758",
            f"ratio={best.ratio.value():.6f}, {elapsed:.0f}s")


def test_criterion_07_sieve_calibration(order_set):
    t0 = time.time()
    deviations = []
    for h, hp, *_ in EXCEPTIONAL_ROWS:
        assert h in order_set, h
        assert hp in order_set, hp
        for x in range(h + 4, hp, 4):
            if x in order_set:
                rule = order_set.rule_tags.get(x)
                deviations.append((h, hp, x, rule))
                assert x in EXPECTED_INTERIOR_MEMBERS, (x, rule)
                assert rule == EXPECTED_INTERIOR_MEMBERS[x], (x, rule)
    if deviations:
        print("DOCUMENTED DEVIATION: fixpoint rule closure generates interior "
              "members the source table treats as gaps:")
        for h, hp, x, rule in deviations:
            print(f"  interval [{h},{hp}]: {x} generated by rule '{rule}' "
                  f"(product of 12 with the Yamada-rule order {x * 2 // 12})")
    assert len(deviations) == len(EXPECTED_INTERIOR_MEMBERS)

    violations = hadregion_violations(order_set, 65536)
    assert max(violations) == 60480
    elapsed = time.time() - t0
    assert elapsed < 120
    _report(7, "sieve calibration at 65536",
            f"max violation 60480; {len(deviations)} documented interior "
            f"members; {elapsed:.1f}s")


def test_criterion_08_schur_direct_consistency():
    t0 = time.time()
    cores = ["unit;double;double", "unit;double;double;double", "paley1(11)",
             "paley1(19)", "paley1(23)", "paley1(31)", "paley1(43)",
             "unit;double;double;double;double",
             "unit;double;double;double;double;double",
             "paley2(5)", "paley2(13)", "conference(5)", "conference(13)",
             "conference(17)", "conference(29)", "conference(37)",
             "conference(41)", "conference(53)"]
    rng = np.random.default_rng(888)
    checked = 0
    t = 0
    while checked < 100:
        q = build_recipe(cores[rng.integers(len(cores))])
        max_d = min(8, 64 - q.order)
        t += 1
        if max_d < 1:
            continue
        d = int(rng.integers(1, max_d + 1))
        res = run_trial(q, d, trial_generator(4242, t), trial_index=t)
        verify_witness(res)  # raises unless direct == Schur, exactly
        checked += 1
    elapsed = time.time() - t0
    assert elapsed < 30
    _report(8, "Schur vs direct determinants", f"100 cases, {elapsed:.1f}s")


def test_criterion_09_lemma_property_suites():
    t0 = time.time()
    report = run_lemma_suite(n_random=100_000)
    assert report["ok"], report["failures"]
    lem = report["lemmas"]
    for name in ("near_identity_floor", "near_identity_zero_diag_floor",
                 "dd_product_floor", "near_identity_floor_tight",
                 "reverse_markov_exhaustive", "hoeffding_tail", "power_ratio_floor", "tail_bound_normalized",
                 "chord_below_exp", "eps_product_cap", "eps_upper_bound",
                 "tail_mass_balance", "diagonal_mean_floor"):
        assert lem[name]["fail"] == 0, name
        assert lem[name]["pass"] > 0, name
    elapsed = time.time() - t0
    assert elapsed < 120
    _report(9, "lemma property suites", f"{elapsed:.1f}s")


def test_criterion_10_bound_spot_checks():
    val = math.exp(1.5 * math.log(2 / (math.pi * math.e)))
    assert 0.1133 < val < 0.1134
    for d in range(0, 51):
        assert 0.07 * 0.352 ** d > 3.0 ** (-(d + 3))
    assert not evaluate_bounds(658, 656, 2).entry("tail_bound").applicable
    assert evaluate_bounds(657, 656, 1).entry("tail_bound").applicable
    _report(10, "bound formula spot checks")
