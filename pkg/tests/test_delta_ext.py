"""Tests for extended-valency groups: blocks, localisation, lifting, schedules."""

from __future__ import annotations

import math

import numpy as np
import pytest

from entropyforge import perms
from entropyforge.const import (
    CONF_LEVEL,
    CONF_MODE,
    CONF_RADIUS,
    BlockMode,
    ScaleMode,
)
from entropyforge.delta_ext import (
    Block,
    DeltaSpec,
    block_level,
    FreeProductWord,
    delta_returns,
    free_image,
    free_letters,
    is_embedding,
    is_trivial_delta,
    lift,
    lift_from_level1,
    localisation_depth,
    quotient_to_gamma,
    regime,
    regular_representation,
    rewrite_delta,
    schedule_scales,
    witness,
)
from entropyforge.exceptions import (
    MissingQuotientError,
    QuotientRadiusError,
    ScheduleError,
    SpecValidationError,
)
from entropyforge.walker import sample_words
from entropyforge.words import (
    AlternateWord,
    canonical_alternate,
    is_trivial,
    rewrite_step,
)

SEED = 777
SWAP = (1, 0)
IDENT = (0, 1)


def _free_at(spec, level: int = 0) -> DeltaSpec:
    return DeltaSpec(spec, {level: Block(level, BlockMode.FREE)})


def _sh_power(spec, letters, power: int) -> AlternateWord:
    return canonical_alternate(spec, [letters["s"], letters["h"]] * power)


# ============================================================================
# SPECS AND PORTRAITS
# ============================================================================


def test_no_blocks_is_gamma(dinf_spec) -> None:
    dspec = DeltaSpec(dinf_spec)
    assert dspec.portraits == {}
    assert dspec.d_prime(0) == 0
    for n in range(1, 6):
        for word in sample_words(dinf_spec, n, 40, seed=SEED):
            assert is_trivial_delta(dspec, word) == is_trivial(dinf_spec, word)


def test_block_from_config(dinf_spec) -> None:
    raw = [
        {CONF_LEVEL: 2, CONF_MODE: "truncated", CONF_RADIUS: 9},
        {CONF_LEVEL: 5, CONF_MODE: "free"},
    ]
    dspec = DeltaSpec.from_config(dinf_spec, raw)
    assert dspec.block(2) == Block(2, BlockMode.TRUNCATED, radius=9)
    assert dspec.d_prime(5) is None
    assert dspec.d_prime(3) == 0
    assert dspec.without(2).block(2) is None


def test_duplicate_block_levels_rejected(dinf_spec) -> None:
    raw = [{CONF_LEVEL: 1, CONF_MODE: "free"}, {CONF_LEVEL: 1, CONF_MODE: "regular"}]
    with pytest.raises(SpecValidationError, match="level 1"):
        DeltaSpec.from_config(dinf_spec, raw)


def test_truncated_block_needs_radius() -> None:
    with pytest.raises(MissingQuotientError):
        Block(0, BlockMode.TRUNCATED)


def test_regular_block_portraits(dinf_spec) -> None:
    dspec = DeltaSpec(dinf_spec, {0: Block(0, BlockMode.REGULAR)})
    portrait = dspec.portraits[0]
    # |S_2| points for s'' and |H_0 x F| = 4 points for (hf)''
    assert dspec.d_prime(0) == 6
    assert portrait.s_prime(SWAP)[:2] == SWAP
    assert len(portrait.s_prime(SWAP)) == 8
    images = portrait.hf_images
    for a in images.values():
        for b in images.values():
            assert perms.compose(a, b) == perms.compose(b, a)


def test_regular_block_degree_too_small(dinf_spec) -> None:
    dspec = DeltaSpec(dinf_spec, {0: Block(0, BlockMode.REGULAR, degree=4)})
    with pytest.raises(SpecValidationError, match="smaller than the regular"):
        dspec.portraits


def test_regular_block_extra_points_fixed(dinf_spec) -> None:
    dspec = DeltaSpec(dinf_spec, {0: Block(0, BlockMode.REGULAR, degree=9)})
    portrait = dspec.portraits[0]
    assert portrait.d_prime == 9
    for image in portrait.s_images.values():
        assert image[6:] == (6, 7, 8)


def test_symbolic_block_has_no_permutation(dinf_spec) -> None:
    portrait = _free_at(dinf_spec).portraits[0]
    assert portrait.d_prime is None
    with pytest.raises(MissingQuotientError):
        portrait.s_prime(SWAP)


def test_regular_representation_is_embedding(ternary_spec) -> None:
    elements = ternary_spec.rooted_at(0).elements()
    images = regular_representation(elements, perms.compose)
    assert is_embedding(elements, perms.compose, images)
    collapsed = {g: perms.identity(len(elements)) for g in elements}
    assert not is_embedding(elements, perms.compose, collapsed)


# ============================================================================
# FREE PRODUCT
# ============================================================================


def test_free_product_reduction_is_confluent(binary_spec) -> None:
    rng = np.random.default_rng(SEED)
    for word in sample_words(binary_spec, 12, 30, seed=SEED):
        letters = free_letters(binary_spec, word)
        whole = FreeProductWord.reduce(binary_spec, 0, letters)
        for _ in range(5):
            cut = sorted(rng.choice(len(letters) + 1, size=2))
            parts = [letters[: cut[0]], letters[cut[0] : cut[1]], letters[cut[1] :]]
            reduced = [FreeProductWord.reduce(binary_spec, 0, p) for p in parts]
            left = reduced[0].mul(binary_spec, reduced[1]).mul(binary_spec, reduced[2])
            right = reduced[0].mul(binary_spec, reduced[1].mul(binary_spec, reduced[2]))
            assert left == whole
            assert right == whole


def test_free_product_inverse(binary_spec) -> None:
    for word in sample_words(binary_spec, 8, 20, seed=SEED):
        image = free_image(binary_spec, word)
        assert image.mul(binary_spec, image.inverse(binary_spec)).is_identity()


def test_sh_powers_grow_in_free_block(dinf_spec, dinf_letters) -> None:
    dspec = _free_at(dinf_spec)
    for k in range(1, 9):
        word = _sh_power(dinf_spec, dinf_letters, 2 * k)
        assert free_image(dinf_spec, word).length == 4 * k
        assert not is_trivial_delta(dspec, word)


# ============================================================================
# REWRITING AND THE WORD PROBLEM
# ============================================================================


def test_rewrite_delta_children_match_gamma(dinf_spec, dinf_letters) -> None:
    word = _sh_power(dinf_spec, dinf_letters, 2)
    plain = rewrite_delta(DeltaSpec(dinf_spec), word)
    assert plain.children == rewrite_step(dinf_spec, word).children
    assert plain.root.tail.is_identity()
    assert plain.root.sigma == IDENT

    blocked = rewrite_delta(_free_at(dinf_spec), word)
    assert blocked.children == plain.children
    assert blocked.root.tail.length == 4
    assert not blocked.root.is_identity()


def test_rewrite_delta_children_match_on_samples(binary_spec) -> None:
    dspec = _free_at(binary_spec)
    for word in sample_words(binary_spec, 10, 30, seed=SEED):
        step = rewrite_step(binary_spec, word)
        result = rewrite_delta(dspec, word)
        assert result.children == step.children
        assert result.root.sigma == step.root


def test_short_free_tail(dinf_spec, dinf_letters) -> None:
    word = canonical_alternate(
        dinf_spec, [dinf_letters["s"], dinf_letters["h"], dinf_letters["phi"]]
    )
    result = rewrite_delta(_free_at(dinf_spec), word)
    assert 0 < result.root.tail.length <= 2


def test_directed_and_boundary_letters_commute(dinf_spec) -> None:
    dspec = _free_at(dinf_spec)
    for h in dinf_spec.h.elements():
        for f in dinf_spec.f.elements():
            hw = AlternateWord(0, (IDENT, IDENT), ((h, dinf_spec.f.identity),))
            fw = AlternateWord(0, (IDENT, IDENT), ((dinf_spec.h.identity(), f),))
            comm = hw.then(fw).then(hw.inverse(dinf_spec)).then(fw.inverse(dinf_spec))
            assert is_trivial_delta(dspec, comm)


def test_delta_trivial_implies_gamma_trivial(dinf_spec) -> None:
    free = _free_at(dinf_spec)
    regular = DeltaSpec(dinf_spec, {0: Block(0, BlockMode.REGULAR)})
    for word in sample_words(dinf_spec, 4, 300, seed=SEED):
        in_free = is_trivial_delta(free, word)
        in_regular = is_trivial_delta(regular, word)
        in_gamma = is_trivial(dinf_spec, word)
        assert not in_free or in_regular
        assert not in_regular or in_gamma


def test_conjugated_cancellation_is_trivial(binary_spec) -> None:
    dspec = _free_at(binary_spec)
    words = list(sample_words(binary_spec, 6, 20, seed=SEED))
    for w, u in zip(words, reversed(words)):
        word = w.then(u).then(u.inverse(binary_spec)).then(w.inverse(binary_spec))
        assert is_trivial_delta(dspec, word)


def test_truncated_block_radius(dinf_spec, dinf_letters) -> None:
    dspec = DeltaSpec(dinf_spec, {0: Block(0, BlockMode.TRUNCATED, radius=3)})
    assert not is_trivial_delta(dspec, _sh_power(dinf_spec, dinf_letters, 1))
    with pytest.raises(QuotientRadiusError) as exc_info:
        is_trivial_delta(dspec, _sh_power(dinf_spec, dinf_letters, 2))
    assert exc_info.value.radius == 3


@pytest.mark.parametrize(("n", "depth"), [(0, 0), (1, 0), (2, 1), (3, 2), (5, 3)])
def test_localisation_depth(n, depth) -> None:
    assert localisation_depth(n) == depth


# ============================================================================
# QUOTIENT AND LIFTING
# ============================================================================


def test_quotient_keeps_letters(dinf_spec, dinf_letters) -> None:
    word = _sh_power(dinf_spec, dinf_letters, 3)
    assert quotient_to_gamma(_free_at(dinf_spec), word) == word


@pytest.mark.parametrize("f", [0, 1])
def test_lift_reproduces_spine_child(dinf_spec, dinf_letters, f) -> None:
    h1 = dinf_spec.h.restrict(dinf_letters["h"].hf[0], 1)
    word = AlternateWord(1, (SWAP, SWAP, IDENT), ((h1, f), (h1, 0)))
    lifted = lift_from_level1(dinf_spec, word)
    assert lifted.level == 0
    assert lifted.length <= 2 * word.length + 1
    step = rewrite_step(dinf_spec, lifted)
    assert step.root == IDENT
    assert free_image(dinf_spec, step.children[0]) == free_image(dinf_spec, word)


def test_lift_of_identity(dinf_spec) -> None:
    lifted = lift(dinf_spec, AlternateWord.empty(dinf_spec, 1))
    assert lifted.length == 0
    with pytest.raises(ValueError, match="level-1"):
        lift_from_level1(dinf_spec, AlternateWord.empty(dinf_spec, 0))


# ============================================================================
# SCALE SCHEDULING
# ============================================================================


def test_empty_schedule_is_gamma(dinf_spec) -> None:
    dspec = schedule_scales(dinf_spec, [])
    assert dspec.blocks == {}


def test_single_scale_matches_gamma(dinf_spec) -> None:
    radius = 2
    dspec = schedule_scales(dinf_spec, [radius], ScaleMode.RETURN)
    (level,) = dspec.blocks
    assert dspec.blocks[level].mode is BlockMode.FREE
    assert level > localisation_depth(2 * radius + 1)
    regular = DeltaSpec(dinf_spec, {level: Block(level, BlockMode.REGULAR)})
    for n in range(1, 2 * radius + 2):
        for word in sample_words(dinf_spec, n, 60, seed=SEED + n):
            expected = is_trivial(dinf_spec, word)
            assert is_trivial_delta(dspec, word) == expected
            assert is_trivial_delta(regular, word) == expected


def test_two_scales_and_witness(dinf_spec) -> None:
    dspec = schedule_scales(dinf_spec, [1, 64])
    levels = sorted(dspec.blocks)
    assert levels == [3, 9]
    assert dspec.blocks[3] == Block(3, BlockMode.TRUNCATED, radius=129)
    assert dspec.blocks[9].mode is BlockMode.FREE
    for n in range(1, 4):
        for word in sample_words(dinf_spec, n, 60, seed=SEED):
            assert is_trivial_delta(dspec, word) == is_trivial(dinf_spec, word)

    word = witness(dinf_spec, 3)
    assert word.length == 32 <= 2 * 64 + 1
    assert is_trivial(dinf_spec, word)
    assert not is_trivial_delta(dspec, word)
    assert is_trivial_delta(dspec.without(3), word)


@pytest.mark.parametrize("radius", [4, 8])
def test_localisation_at_radius(dinf_spec, radius) -> None:
    level = block_level(radius)
    free = DeltaSpec(dinf_spec, {level: Block(level, BlockMode.FREE)})
    regular = DeltaSpec(dinf_spec, {level: Block(level, BlockMode.REGULAR)})
    words = []
    for n in range(1, 2 * radius + 2):
        words.extend(sample_words(dinf_spec, n, 30, seed=SEED + n))
    for n in range(1, radius + 1):
        for w in sample_words(dinf_spec, n, 10, seed=SEED - n):
            words.append(w.then(w.inverse(dinf_spec)))
    assert any(is_trivial(dinf_spec, w) for w in words)
    for word in words:
        assert word.length <= 2 * radius + 1
        answer = is_trivial_delta(free, word)
        assert answer == is_trivial_delta(regular, word)
        assert answer == is_trivial(dinf_spec, word)

    longer = witness(dinf_spec, level)
    assert longer.length > 2 * radius + 1
    assert not is_trivial_delta(free, longer)
    assert is_trivial_delta(regular, longer)


@pytest.mark.parametrize("radius", [1, 2, 4, 8, 64])
def test_block_level_sits_above_reached_levels(radius) -> None:
    # words of length 2R + 1 reach depth ceil(log2(2R + 1)) and the block sits
    # one level below it; for R = 2^k that is two levels past 1 + log2 R
    assert block_level(radius) == math.ceil(math.log2(2 * radius + 1)) + 1
    if radius & (radius - 1) == 0:
        assert block_level(radius) == 1 + int(math.log2(radius)) + 2


@pytest.mark.parametrize(
    ("radii", "match"),
    [([3, 2], "strictly increasing"), ([2, 3], "too dense"), ([0], ">= 1")],
)
def test_schedule_errors(dinf_spec, radii, match) -> None:
    with pytest.raises(ScheduleError, match=match):
        schedule_scales(dinf_spec, radii)


def test_regime(dinf_spec) -> None:
    dspec = schedule_scales(dinf_spec, [1, 64])
    assert regime(dspec, 3) == "low"
    assert regime(dspec, 8) == "high@3"
    assert dspec.describe()["blocks"][0]["radius"] == 129


def test_delta_returns_bounded_by_gamma(dinf_spec) -> None:
    result = delta_returns(_free_at(dinf_spec), 4, 200, seed=SEED)
    assert result.samples == 200
    assert result.censored == 0
    assert result.delta_returns <= result.gamma_returns
    assert result.regime == "high@0"
    assert 0 <= result.delta_freq <= result.gamma_freq <= 1
