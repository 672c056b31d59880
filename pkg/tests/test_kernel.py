"""Tests for the coded, level-batched rewriting kernel."""

from __future__ import annotations

import numpy as np
import pytest

from entropyforge import kernel, walker
from entropyforge.kernel import RewriteKernel
from entropyforge.walker import (
    _coded_metrics,
    _metrics,
    child_length_p,
    sample_word,
    simulate,
)
from entropyforge.words import AlternateWord, activity, boundary_function

SEED = 977

ALL_SPECS = [
    "dinf_spec",
    "binary_spec",
    "pattern23_spec",
    "ternary_spec",
    "mother_spec",
    "relative_spec",
]


@pytest.mark.parametrize("spec_name", ALL_SPECS)
def test_shipped_specs_are_tabulated(spec_name, request) -> None:
    spec = request.getfixturevalue(spec_name)
    assert RewriteKernel.build(spec) is not None


@pytest.mark.parametrize("spec_name", ALL_SPECS)
@pytest.mark.parametrize("theta", [0.05, -0.3])
def test_coded_rows_match_tree_rows(spec_name, theta, request) -> None:
    spec = request.getfixturevalue(spec_name)
    coded = RewriteKernel.build(spec)
    assert coded is not None
    rng = np.random.default_rng(SEED)
    words = [
        sample_word(spec, int(n), rng)
        for n in rng.integers(0, 90, size=150)
    ]
    expected = [_metrics(spec, w, 3, theta) for w in words]
    assert _coded_metrics(spec, coded, words, 3, theta) == expected


def test_coded_support_counts_boundary(mother_spec) -> None:
    coded = RewriteKernel.build(mother_spec)
    assert coded is not None
    rng = np.random.default_rng(SEED)
    words = [sample_word(mother_spec, 200, rng) for _ in range(20)]
    out = coded.metrics(words, 0, 0.05, lambda _: 0.0)
    for i, word in enumerate(words):
        assert out.activity[i] == activity(mother_spec, word)
        assert out.support[i] == len(boundary_function(mother_spec, word))


def test_short_words(binary_spec) -> None:
    coded = RewriteKernel.build(binary_spec)
    assert coded is not None
    empty = AlternateWord.empty(binary_spec)
    single = AlternateWord(0, ((1, 0), (0, 1)), ((((0, 1),), 1),))
    out = coded.metrics([empty, single], 4, 0.05, lambda _: 0.25)
    assert list(out.activity) == [0, 1]
    assert list(out.support) == [0, 1]
    assert not out.small_activity.any()
    assert out.child_lengths == ((), ())


def test_small_batches_give_the_same_rows(binary_spec, monkeypatch) -> None:
    coded = RewriteKernel.build(binary_spec)
    assert coded is not None
    rng = np.random.default_rng(SEED)
    words = [sample_word(binary_spec, 100, rng) for _ in range(12)]
    p_at = lambda level: float(child_length_p(binary_spec, level))  # noqa: E731
    whole = coded.metrics(words, 2, 0.05, p_at)
    monkeypatch.setattr(kernel, "KERNEL_BATCH_LETTERS", 150)
    split = coded.metrics(words, 2, 0.05, p_at)
    assert np.array_equal(whole.activity, split.activity)
    assert np.array_equal(whole.support, split.support)
    assert whole.child_lengths == split.child_lengths


def test_large_tables_fall_back(binary_spec, monkeypatch) -> None:
    monkeypatch.setenv("ENTROPYFORGE_THREADS", "1")
    coded = simulate(binary_spec, 40, 64, seed=SEED, workers=1)
    monkeypatch.setattr(kernel, "KERNEL_TABLE_CAP", 1)
    monkeypatch.setattr(walker, "_KERNELS", {})
    assert RewriteKernel.build(binary_spec) is None
    assert simulate(binary_spec, 40, 64, seed=SEED, workers=1) == coded


@pytest.mark.slow
def test_long_words_stay_consistent(ternary_spec) -> None:
    coded = RewriteKernel.build(ternary_spec)
    assert coded is not None
    rng = np.random.default_rng(SEED)
    words = [sample_word(ternary_spec, 4096, rng) for _ in range(4)]
    out = coded.metrics(words, 0, 0.05, lambda _: 0.0)
    for i, word in enumerate(words):
        assert out.activity[i] == activity(ternary_spec, word)
