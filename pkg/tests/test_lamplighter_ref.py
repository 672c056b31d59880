"""Tests for the F ≀ D∞ reference walk, its norms and the covering identity."""

from __future__ import annotations

from functools import reduce

import numpy as np
import pytest

from entropyforge.exceptions import NonAbelianBoundaryError, SpecValidationError
from entropyforge.group_model import act_ray
from entropyforge.lamplighter_ref import (
    H_CODE,
    LampElement,
    SchreierHalfLine,
    bfs_lamp_norms,
    build_dinf,
    covering_map,
    covering_mismatches,
    dinf_inv,
    dinf_letters,
    dinf_mul,
    dinf_step,
    dinf_word,
    lamp_drift,
    lamp_norm,
    lamp_returns,
    lamp_walk,
    norm_comparison,
    tour_length,
)
from entropyforge.words import is_trivial

SEED = 1618


# ============================================================================
# D∞ AND THE HALF-LINE
# ============================================================================


def test_dinf_arithmetic() -> None:
    assert dinf_mul(1, 1) == 0
    assert dinf_mul(H_CODE, H_CODE) == 0
    assert dinf_letters(3) == ["s", "h", "s"]
    assert dinf_letters(-2) == ["h", "s"]
    for t in range(-20, 21):
        assert dinf_mul(t, dinf_inv(t)) == 0
        assert reduce(dinf_step, dinf_letters(t), 0) == t


@pytest.mark.parametrize(("t", "index"), [(0, 0), (-1, 0), (1, 1), (2, 2), (3, 3)])
def test_covering_values(t, index) -> None:
    assert covering_map(t) == index


def test_covering_ignores_leading_h() -> None:
    for t in range(-30, 31):
        assert covering_map(dinf_mul(H_CODE, t)) == covering_map(t)
    assert len({covering_map(t) for t in range(1, 40)}) == 39


def test_dinf_relations(dinf_spec) -> None:
    assert is_trivial(dinf_spec, dinf_word(dinf_spec, 0))
    for k in range(1, 65):
        assert not is_trivial(dinf_spec, dinf_word(dinf_spec, 2 * k))


def test_schreier_graph_is_half_line(dinf_spec) -> None:
    half_line = SchreierHalfLine(dinf_spec)
    assert half_line.path_failures(64) == []
    for t in range(-12, 13):
        ray, _ = act_ray(dinf_spec, dinf_word(dinf_spec, t), ())
        assert half_line.index(ray, 16) == covering_map(t)


def test_dinf_generator_needs_dinf(ternary_spec) -> None:
    with pytest.raises(SpecValidationError, match="not D∞"):
        SchreierHalfLine(ternary_spec)


# ============================================================================
# NORMS
# ============================================================================


def test_lamp_norm_examples() -> None:
    assert lamp_norm(LampElement((), 0)) == 0
    assert lamp_norm(LampElement(((1, 1),), 0)) == 3
    assert lamp_norm(LampElement(((1, 1), (2, 1)), 0)) == 6
    assert tour_length([-2, 3], 1) == min(2 + 5 + 2, 3 + 5 + 3)


def test_lamp_norm_matches_bfs(dinf_spec) -> None:
    norms = bfs_lamp_norms(dinf_spec.f, 10)
    assert len(norms) > 100
    for element, norm in norms.items():
        assert lamp_norm(element) == norm


def test_lamp_norm_matches_bfs_z3() -> None:
    spec = build_dinf("cyclic", 3)
    for element, norm in bfs_lamp_norms(spec.f, 7).items():
        assert lamp_norm(element) == norm


# ============================================================================
# THE PAIRED WALK
# ============================================================================


def test_empty_walk(dinf_spec) -> None:
    step = lamp_walk(dinf_spec, 0, np.random.default_rng(SEED))
    assert step.cover.is_identity()
    assert is_trivial(dinf_spec, step.extended)


def test_walk_is_seed_deterministic(dinf_spec) -> None:
    a = lamp_walk(dinf_spec, 32, np.random.default_rng(SEED))
    b = lamp_walk(dinf_spec, 32, np.random.default_rng(SEED))
    assert a == b


def test_covering_identity_per_sample(dinf_spec) -> None:
    half_line = SchreierHalfLine(dinf_spec)
    rng = np.random.default_rng(SEED)
    for _ in range(200):
        step = lamp_walk(dinf_spec, 32, rng)
        assert covering_mismatches(dinf_spec, step, half_line) == []


@pytest.mark.parametrize("n", [4, 8, 16])
def test_cover_returns_imply_extended_returns(dinf_spec, n) -> None:
    report = lamp_returns(dinf_spec, n, 500, seed=SEED)
    assert report.covering_violations == 0
    assert report.lift_violations == 0
    assert report.return_freq_extended >= report.return_freq_cover
    assert report.mean_norm_cover > 0


def test_covering_identity_with_z3() -> None:
    report = lamp_returns(build_dinf("cyclic", 3), 12, 200, seed=SEED)
    assert report.covering_violations == 0


def test_non_abelian_boundary_rejected() -> None:
    spec = build_dinf("symmetric", 3)
    with pytest.raises(NonAbelianBoundaryError):
        lamp_walk(spec, 4, np.random.default_rng(SEED))
    with pytest.raises(NonAbelianBoundaryError):
        lamp_drift(spec.f, [8, 16], 64)


def test_quotient_norm_is_shorter(dinf_spec) -> None:
    report = norm_comparison(dinf_spec, 2, 200, radius=6, seed=SEED)
    assert report.samples == 200
    assert report.extended_le_cover == report.samples - report.censored
    assert report.censored < report.samples


# ============================================================================
# DRIFT
# ============================================================================


def test_lamp_drift_is_deterministic(dinf_spec) -> None:
    a = lamp_drift(dinf_spec.f, [16, 32, 64], 64, seed=SEED)
    b = lamp_drift(dinf_spec.f, [16, 32, 64], 64, seed=SEED)
    assert a == b
    assert all(m > 0 for m in a.mean_norms)
    with pytest.raises(ValueError, match="two lengths"):
        lamp_drift(dinf_spec.f, [16], 64)


@pytest.mark.slow
def test_lamp_drift_exponent_is_one_half(dinf_spec) -> None:
    drift = lamp_drift(dinf_spec.f, [2**j for j in range(8, 14)], 300, seed=SEED)
    assert 0.45 <= drift.slope <= 0.55
