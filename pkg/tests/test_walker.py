"""Tests for the sampler, Monte Carlo estimators and exact small-n laws."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from entropyforge.exceptions import BallBudgetError, DistributionBudgetError
from entropyforge.exponents import ExponentProfile, beta_of_n
from entropyforge.walker import (
    child_length_distribution,
    child_length_p,
    conditional_uniformity_failures,
    drift_bounds,
    entropy_exact,
    estimate_activity,
    estimate_phi_trivial,
    estimate_support,
    exact_distribution,
    exact_distributions,
    expected_phi_trivial_exact,
    expected_support_exact,
    norm_oracle,
    phi_trivial_exact,
    plugin_entropy,
    return_diagnostics,
    return_prob_exact,
    run_count_law,
    sample_word,
    simulate,
    tail_exponent,
    total_variation,
)
from entropyforge.words import AlternateWord, rewrite_step

SEED = 4242


# ============================================================================
# SAMPLING
# ============================================================================


def test_sample_word_is_seed_deterministic(binary_spec) -> None:
    a = sample_word(binary_spec, 200, np.random.default_rng(SEED))
    b = sample_word(binary_spec, 200, np.random.default_rng(SEED))
    assert a == b
    assert a.length == 200
    assert sample_word(binary_spec, 0, np.random.default_rng(SEED)).length == 0


def test_letter_marginals_are_uniform(binary_spec) -> None:
    rng = np.random.default_rng(SEED)
    s_counts: Counter = Counter()
    k_counts: Counter = Counter()
    for _ in range(2000):
        word = sample_word(binary_spec, 10, rng)
        s_counts.update(word.s)
        k_counts.update(word.k)
    assert len(s_counts) == 2
    assert len(k_counts) == 4
    assert stats.chisquare(list(s_counts.values())).pvalue > 0.001
    assert stats.chisquare(list(k_counts.values())).pvalue > 0.001


# ============================================================================
# MONTE CARLO ESTIMATORS
# ============================================================================


def test_simulate_is_independent_of_worker_count(binary_spec) -> None:
    inline = simulate(binary_spec, 32, 200, seed=SEED, workers=1)
    pooled = simulate(binary_spec, 32, 200, seed=SEED, workers=2)
    assert inline == pooled
    assert inline.samples == 200


def test_single_factor_has_activity_one(binary_spec) -> None:
    result = simulate(binary_spec, 1, 64, seed=SEED, workers=1)
    assert result.mean_activity == 1.0
    assert result.se_activity == 0.0


def test_estimators_share_one_pass(binary_spec, monkeypatch) -> None:
    monkeypatch.setenv("ENTROPYFORGE_THREADS", "1")
    expected = simulate(binary_spec, 8, 64, seed=SEED, workers=1)
    assert estimate_activity(binary_spec, 8, 64, seed=SEED) == expected
    assert estimate_support(binary_spec, 8, 64, seed=SEED) == expected
    assert estimate_phi_trivial(binary_spec, 8, 64, seed=SEED) == expected


def test_too_few_samples_rejected(binary_spec) -> None:
    with pytest.raises(ValueError, match="at least 30"):
        simulate(binary_spec, 8, 10, workers=1)


def test_estimates_match_exact_values(dinf_spec) -> None:
    result = simulate(dinf_spec, 3, 2000, seed=SEED, workers=1)
    dist = exact_distribution(dinf_spec, 3)
    phi = float(phi_trivial_exact(dist))
    support = float(expected_support_exact(dist))
    assert abs(result.phi_trivial - phi) <= 4 * result.se_phi_trivial
    assert abs(result.mean_support - support) <= 4 * result.se_support
    assert result.log_phi_trivial == pytest.approx(math.log(result.phi_trivial))


def test_child_histogram_counts_are_conserved(binary_spec) -> None:
    result = simulate(binary_spec, 16, 128, seed=SEED, workers=1)
    assert sum(result.child_lengths.values()) == 2 * 128
    assert 0 <= result.small_activity <= 128


def test_plugin_entropy_near_exact(dinf_spec) -> None:
    exact = entropy_exact(exact_distribution(dinf_spec, 2))
    estimate = plugin_entropy(dinf_spec, 2, 256, seed=SEED, workers=1)
    assert estimate.distinct <= 256
    assert 0 < estimate.value <= math.log(estimate.distinct) + 1e-9
    assert abs(estimate.value - exact) <= 0.5


# ============================================================================
# CHILD LENGTH LAW
# ============================================================================


def test_run_count_law_binary() -> None:
    law = run_count_law(2, 1, 16)
    assert law.sum() == pytest.approx(1.0)
    mean = float((np.arange(17) * law).sum())
    # first token plus an S-then-K transition on each later step
    assert mean == pytest.approx(0.5 + 15 / 4)


@pytest.mark.parametrize(
    ("spec_name", "n"),
    [("binary_spec", 1), ("binary_spec", 3), ("binary_spec", 4), ("relative_spec", 2)],
)
def test_run_count_law_matches_enumeration(spec_name, n, request) -> None:
    spec = request.getfixturevalue(spec_name)
    counts: Counter = Counter()
    for s in itertools.product(spec.rooted_at(0).elements(), repeat=n + 1):
        for k in itertools.product(spec.hf_elements(), repeat=n):
            step = rewrite_step(spec, AlternateWord(0, s, k))
            counts[step.children[0].length] += 1
    total = sum(counts.values())
    exact = np.array([counts[m] / total for m in range(n + 1)])
    assert run_count_law(spec.d(0), spec.c(0), n) == pytest.approx(exact)


@pytest.mark.parametrize("n", [16, 64, 256])
def test_run_count_law_is_not_binomial(n) -> None:
    # same centre, different spread; the gap does not shrink with n
    law = run_count_law(2, 1, n)
    binomial = stats.binom.pmf(np.arange(n + 1), n, 0.25)
    assert 0.24 <= total_variation(law, binomial) <= 0.28


def test_run_count_law_relative_rate() -> None:
    law = run_count_law(3, 1, 600)
    mean = float((np.arange(601) * law).sum())
    assert mean / 600 == pytest.approx(1 / 6, abs=2e-3)


def test_child_length_p(binary_spec, relative_spec) -> None:
    assert child_length_p(binary_spec) == Fraction(1, 4)
    assert child_length_p(relative_spec) == Fraction(1, 6)


def test_empirical_child_law_matches_run_count_law(binary_spec) -> None:
    report = child_length_distribution(binary_spec, 16, 2000, seed=SEED, workers=1)
    assert report.p == Fraction(1, 4)
    assert report.empirical.sum() == pytest.approx(1.0)
    assert report.tv_exact <= 0.06
    assert report.binomial.sum() == pytest.approx(1.0)


def test_child_length_needs_positive_n(binary_spec) -> None:
    with pytest.raises(ValueError, match="n >= 1"):
        child_length_distribution(binary_spec, 0, 64, workers=1)


def test_tail_decays() -> None:
    assert tail_exponent(2, 1, (32, 64, 128, 256)) < 0
    assert tail_exponent(3, 1, (32, 64, 128, 256)) < 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_conditioned_children_are_uniform(binary_spec, n) -> None:
    assert conditional_uniformity_failures(binary_spec, n) == []


# ============================================================================
# EXACT DISTRIBUTIONS
# ============================================================================


def test_exact_law_at_zero_and_one(dinf_spec) -> None:
    laws = list(exact_distributions(dinf_spec, 1))
    assert entropy_exact(laws[0]) == pytest.approx(math.log(2))
    assert return_prob_exact(dinf_spec, laws[0]) == Fraction(1, 2)
    assert return_prob_exact(dinf_spec, laws[1]) == Fraction(1, 8)
    for law in laws:
        assert law.total() == 1


def test_entropy_is_subadditive(dinf_spec) -> None:
    entropy = [entropy_exact(d) for d in exact_distributions(dinf_spec, 4)]
    for n in range(5):
        for m in range(5 - n):
            assert entropy[n + m] <= entropy[n] + entropy[m] + 1e-12


def _check_entropy_chain(spec, n_max: int) -> None:
    log_f = math.log(spec.f.order)
    for dist in exact_distributions(spec, n_max):
        support = expected_support_exact(dist)
        assert entropy_exact(dist) >= log_f * float(support) - 1e-12
        phi = phi_trivial_exact(dist)
        assert return_prob_exact(spec, dist) <= phi
        assert phi == expected_phi_trivial_exact(spec, dist.n)


def test_return_and_boundary_triviality(dinf_spec) -> None:
    _check_entropy_chain(dinf_spec, 4)


@pytest.mark.slow
def test_return_and_boundary_triviality_up_to_eight(dinf_spec) -> None:
    _check_entropy_chain(dinf_spec, 8)


def test_distribution_budget(dinf_spec) -> None:
    with pytest.raises(DistributionBudgetError) as exc_info:
        exact_distribution(dinf_spec, 3, budget=5)
    assert exc_info.value.budget == 5
    with pytest.raises(DistributionBudgetError):
        expected_phi_trivial_exact(dinf_spec, 5, budget=10)


def test_return_diagnostics(binary_spec) -> None:
    out = return_diagnostics(binary_spec, 16, Fraction(1, 100))
    assert out["log_neg_log_return"] == pytest.approx(math.log(math.log(100)))
    assert out["beta_log_n"] == pytest.approx(0.5 * math.log(16))
    assert math.isnan(return_diagnostics(binary_spec, 1, Fraction(1))["beta_log_n"])


# ============================================================================
# NORMS AND DRIFT
# ============================================================================


def test_norm_oracle_small_ball(dinf_spec) -> None:
    oracle = norm_oracle(dinf_spec, 1)
    assert oracle.norm(dinf_spec, AlternateWord.empty(dinf_spec)) == 0
    assert oracle.generators > 0
    ident = (0, 1)
    for hf in dinf_spec.hf_elements():
        word = AlternateWord(0, (ident, (1, 0)), (hf,))
        assert oracle.norm(dinf_spec, word) == 1


def test_ball_budget(dinf_spec) -> None:
    with pytest.raises(BallBudgetError):
        norm_oracle(dinf_spec, 3, budget=10)


def test_drift_within_entropy_sandwich(dinf_spec) -> None:
    report = drift_bounds(dinf_spec, 3, 128, radius=3, seed=SEED, workers=1)
    assert report.censored == 0
    assert report.lower <= report.mean_norm <= report.upper
    assert report.entropy > math.log(2)


def test_samples_outside_ball_are_censored(dinf_spec) -> None:
    report = drift_bounds(dinf_spec, 3, 128, radius=1, seed=SEED, workers=1)
    assert report.censored > 0
    assert report.samples == 128


# ============================================================================
# ACTIVITY GROWTH
# ============================================================================


@pytest.mark.slow
@pytest.mark.parametrize("spec_name", ["binary_spec", "ternary_spec"])
def test_activity_and_support_exponents(spec_name, request) -> None:
    spec = request.getfixturevalue(spec_name)
    ns = [2**j for j in range(7, 17)]
    runs = [simulate(spec, n, 1000, seed=SEED) for n in ns]
    profile = ExponentProfile.from_spec(spec)
    target = float(np.mean([float(beta_of_n(profile, n)) for n in ns]))
    for means in (
        [r.mean_activity for r in runs],
        [r.mean_support for r in runs],
    ):
        slope = stats.linregress(np.log(ns), np.log(means)).slope
        assert abs(slope - target) <= 0.07
