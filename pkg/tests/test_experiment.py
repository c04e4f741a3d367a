import json
import math

import pytest

from defectus import (
    BoundInputs, BudgetExceeded, ExperimentConfig, OutcomeCounts, classify,
    cp_interval, cp_upper_one_sided, linear_census_oracle, run_census,
    run_monte_carlo, sample_system, system_from_census_index,
)
from defectus.experiment import (
    census_size, coefficient_layout, gaussian_binomial, matrices_of_rank,
)
from defectus.rng import HashStream


def _mc_config(q, d, n, seed=0, threads=1, **kw):
    return ExperimentConfig(inputs=BoundInputs(3, 2, q, d),
                            mode="monte_carlo", n_samples=n, seed=seed,
                            threads=threads, **kw)


def test_sample_determinism(f101):
    inputs = BoundInputs(3, 2, 101, (2, 2))
    a = sample_system(inputs, f101, HashStream("sample", 42, 7))
    b = sample_system(inputs, f101, HashStream("sample", 42, 7))
    c = sample_system(inputs, f101, HashStream("sample", 42, 8))
    assert a == b
    assert a != c


def test_zero_draw_is_possible_and_fails_regularity(f2):
    inputs = BoundInputs(3, 2, 2, (1, 1))
    zero = system_from_census_index(inputs, f2, 0)
    assert all(p.is_zero() for p in zero.polys)
    rep = classify(zero)
    assert not rep.regular_sequence
    assert rep.regular_sequence_failure_index == 1


def test_coefficient_uniformity_chi(f5):
    # 100000 pooled coefficient draws, each element within 4 sigma
    inputs = BoundInputs(3, 2, 5, (1, 1))
    width = sum(len(m) for m in coefficient_layout(inputs))
    n_systems = 100_000 // width
    counts = [0] * 5
    for idx in range(n_systems):
        stream = HashStream("sample", 2024, idx)
        for _ in range(width):
            counts[stream.randint(5)] += 1
    draws = n_systems * width
    expect = draws / 5
    sigma = math.sqrt(draws * 0.2 * 0.8)
    for c in counts:
        assert abs(c - expect) <= 4 * sigma


def test_census_index_bijection(f2):
    inputs = BoundInputs(3, 2, 2, (1, 1))
    total = census_size(inputs)
    assert total == 256
    seen = set()
    for idx in range(total):
        system = system_from_census_index(inputs, f2, idx)
        seen.add(tuple(p.canonical_bytes() for p in system.polys))
    assert len(seen) == total


def test_census_order_is_lexicographic(f2):
    # index 0 is the zero system; index 1 sets the least significant slot,
    # which is the constant term of the last generator
    inputs = BoundInputs(3, 2, 2, (1, 1))
    zero = system_from_census_index(inputs, f2, 0)
    assert all(p.is_zero() for p in zero.polys)
    one = system_from_census_index(inputs, f2, 1)
    assert one.polys[0].is_zero()
    assert one.polys[1].degree() == 0


def test_aggregation_is_a_monoid(f3):
    inputs = BoundInputs(3, 2, 3, (1, 1))
    reports = [classify(sample_system(inputs, f3, HashStream("agg", i)))
               for i in range(30)]
    parts = [OutcomeCounts.from_report(r) for r in reports]
    total = OutcomeCounts.zero(2)
    for p in parts:
        total = total + p
    # arbitrary re-partition gives identical totals
    left = OutcomeCounts.zero(2)
    for p in parts[:11]:
        left = left + p
    right = OutcomeCounts.zero(2)
    for p in parts[11:]:
        right = right + p
    assert left + right == total
    assert total.n == 30
    assert (total.certified_irreducible + total.certified_reducible
            + total.undetermined) == 30


def test_gaussian_binomial_and_rank_counts():
    assert gaussian_binomial(2, 1, 2) == 3
    assert gaussian_binomial(3, 1, 2) == 7
    assert matrices_of_rank(2, 3, 1, 2) == 21
    assert sum(matrices_of_rank(2, 3, t, 2) for t in range(3)) == 2 ** 6
    assert sum(matrices_of_rank(2, 3, t, 3) for t in range(3)) == 3 ** 6


def test_linear_oracle_values():
    q2 = linear_census_oracle(BoundInputs(3, 2, 2, (1, 1)))
    assert q2["in_B1"] == 22 * 4 == 88
    assert q2["total"] == 256
    q3 = linear_census_oracle(BoundInputs(3, 2, 3, (1, 1)))
    assert q3["in_B1"] == 105 * 9
    assert q3["total"] == 3 ** 8
    with pytest.raises(ValueError):
        linear_census_oracle(BoundInputs(3, 2, 2, (2, 1)))


def test_census_matches_oracle_q2():
    inputs = BoundInputs(3, 2, 2, (1, 1))
    report, rows = run_census(
        ExperimentConfig(inputs=inputs, mode="census", threads=2),
        dump_rows=True)
    oracle = linear_census_oracle(inputs)
    assert report.counts.n == 256
    assert report.counts.in_B1 == oracle["in_B1"]
    assert report.counts.in_B2_lower == report.counts.in_B2_upper
    assert len(rows) == 256
    assert [idx for idx, _ in rows] == list(range(256))


def test_census_budget_refusal():
    config = ExperimentConfig(inputs=BoundInputs(3, 2, 101, (2, 2)),
                              mode="census", census_budget=1000)
    with pytest.raises(BudgetExceeded):
        run_census(config)


def test_cp_closed_forms():
    # x = 0: the one-sided upper bound is 1 - alpha^(1/n) exactly
    for n, conf in ((20000, 0.99), (500, 0.95), (50, 0.99)):
        alpha = 1 - conf
        expected = 1 - alpha ** (1 / n)
        assert cp_upper_one_sided(0, n, conf) == pytest.approx(
            expected, abs=1e-9)
        lo, hi = cp_interval(0, n, conf)
        assert lo == 0.0
        assert hi == pytest.approx(1 - (alpha / 2) ** (1 / n), abs=1e-9)
    assert cp_upper_one_sided(10, 10, 0.99) == 1.0
    lo, hi = cp_interval(10, 10, 0.99)
    assert hi == 1.0 and lo > 0


def test_cp_interval_covers_point_estimate():
    for x, n in ((1, 50), (3, 100), (7, 22)):
        lo, hi = cp_interval(x, n, 0.99)
        assert lo < x / n < hi
        assert cp_upper_one_sided(x, n, 0.99) < hi  # one-sided is tighter


def test_cp_interval_tails_against_brute_force():
    # equal-tailed: each endpoint puts exactly alpha/2 past the count
    def survival(x, n, p):
        return sum(math.comb(n, j) * p ** j * (1 - p) ** (n - j)
                   for j in range(x, n + 1))

    for x, n in ((1, 50), (3, 100), (7, 22)):
        lo, hi = cp_interval(x, n, 0.99)
        assert survival(x, n, lo) == pytest.approx(0.005, abs=1e-9)
        assert 1 - survival(x + 1, n, hi) == pytest.approx(0.005, abs=1e-9)


def test_mc_thread_independence():
    base = dict(q=7, d=(2, 2), n=50, seed=5)
    r1 = run_monte_carlo(_mc_config(threads=1, **base))
    r2 = run_monte_carlo(_mc_config(threads=2, **base))
    assert json.dumps(r1.to_json_dict(False), sort_keys=True) == \
        json.dumps(r2.to_json_dict(False), sort_keys=True)


def test_mc_counts_partition():
    rep = run_monte_carlo(_mc_config(q=5, d=(2, 2), n=40, seed=3, threads=2))
    c = rep.counts
    assert c.n == 40
    assert c.certified_irreducible + c.certified_reducible + c.undetermined \
        == 40
    assert rep.p2_lower_hat <= rep.p2_upper_hat


def test_mc_vacuous_verdict():
    rep = run_monte_carlo(_mc_config(q=2, d=(2, 2), n=30, seed=1))
    assert rep.bound_report.vacuous_B1 and rep.bound_report.vacuous_B2
    assert rep.verdict_B1 == "VACUOUS_PASS"
    assert rep.verdict_B2 == "VACUOUS_PASS"


def test_inapplicable_verdict_linear():
    config = ExperimentConfig(inputs=BoundInputs(3, 2, 2, (1, 1)),
                              mode="census", threads=2)
    report, _ = run_census(config)
    assert report.verdict_B1 == "INAPPLICABLE"
    assert report.verdict_B2 == "INAPPLICABLE"


def test_estimator_consistency_census_vs_mc():
    # the CP interval from a seeded MC run contains the exact census ratio
    inputs = BoundInputs(3, 2, 3, (1, 1))
    census_rep, _ = run_census(
        ExperimentConfig(inputs=inputs, mode="census", threads=2))
    exact = census_rep.counts.in_B1 / census_rep.counts.n
    mc_rep = run_monte_carlo(
        ExperimentConfig(inputs=inputs, mode="monte_carlo", n_samples=400,
                         seed=17, threads=2))
    assert mc_rep.p1_cp_low <= exact <= mc_rep.p1_cp_high


def test_report_json_schema_fields():
    rep = run_monte_carlo(_mc_config(q=5, d=(2, 2), n=10, seed=0))
    blob = rep.to_json_dict()
    for key in ("schema_version", "mode", "inputs", "seed", "confidence",
                "counts", "p1_hat", "p1_cp_low", "p1_cp_high",
                "p1_cp_upper_one_sided", "p2_lower_hat", "p2_upper_hat",
                "bounds", "verdict_B1", "verdict_B2", "meta"):
        assert key in blob
    assert "meta" not in rep.to_json_dict(include_meta=False)
    assert blob["counts"]["n"] == 10


def test_mc_over_extension_field():
    # q = 4 exercises vector coefficients through the entire pipeline
    config = ExperimentConfig(inputs=BoundInputs(3, 2, 4, (2, 2)),
                              mode="monte_carlo", n_samples=12, seed=3,
                              threads=2)
    rep = run_monte_carlo(config)
    assert rep.counts.n == 12
    assert rep.verdict_B1 == "VACUOUS_PASS"  # 2*s*sigma*delta = 32 > 4
    blob = rep.to_json_dict(False)
    assert blob["inputs"] == {"r": 3, "s": 2, "q": 4, "p": 2, "k": 2,
                              "d": [2, 2]}


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(inputs=BoundInputs(3, 2, 5, (1, 1)), mode="guess")
    with pytest.raises(ValueError):
        ExperimentConfig(inputs=BoundInputs(3, 2, 5, (1, 1)),
                         mode="monte_carlo", n_samples=0)
    with pytest.raises(ValueError):
        ExperimentConfig(inputs=BoundInputs(3, 2, 5, (1, 1)),
                         mode="monte_carlo", n_samples=5, confidence=1.5)
