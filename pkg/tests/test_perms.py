"""Tests for permutation tuple helpers and finite groups."""

from __future__ import annotations

import logging

import numpy as np
import pytest

from entropyforge import perms
from entropyforge.const import FStructure
from entropyforge.exceptions import SpecValidationError
from entropyforge.finite_groups import FGroup, RootedGroup


def test_compose_applies_left_factor_first() -> None:
    p = (1, 2, 0)  # 0->1->2->0
    q = (1, 0, 2)  # swap 0, 1
    # p first, then q: 0 -> 1 -> 0
    assert perms.compose(p, q) == (0, 2, 1)


def test_compose_matches_sympy_product() -> None:
    p = (2, 0, 3, 1)
    q = (1, 3, 0, 2)
    expected = perms.from_sympy(perms.to_sympy(p) * perms.to_sympy(q), 4)
    assert perms.compose(p, q) == expected


def test_inverse_and_identity() -> None:
    p = (3, 0, 2, 1)
    assert perms.is_identity(perms.compose(p, perms.inverse(p)))
    assert perms.is_identity(perms.compose(perms.inverse(p), p))
    assert perms.identity(3) == (0, 1, 2)


def test_cycle_and_transposition() -> None:
    assert perms.cycle(4, 0, 2, 3) == (2, 1, 3, 0)
    assert perms.transposition(3, 0, 2) == (2, 1, 0)


def test_compose_all_is_left_to_right() -> None:
    a = perms.transposition(3, 0, 1)
    b = perms.transposition(3, 1, 2)
    assert perms.compose_all([a, b], 3) == perms.compose(a, b)
    assert perms.compose_all([], 3) == (0, 1, 2)


def test_is_perm_rejects_repeats() -> None:
    assert perms.is_perm((1, 0, 2), 3)
    assert not perms.is_perm((1, 1, 2), 3)
    assert not perms.is_perm((0, 1), 3)


def test_from_sympy_pads_short_array_form() -> None:
    short = perms.to_sympy((1, 0))
    assert perms.from_sympy(short, 4) == (1, 0, 2, 3)


# ============================================================================
# ROOTED GROUPS
# ============================================================================


def test_symmetric_rooted_group_order_and_elements() -> None:
    group = RootedGroup.symmetric(3)
    assert group.order == 6
    assert len(group.elements()) == 6
    assert group.is_transitive
    assert group.contains((2, 0, 1))


def test_cyclic_rooted_group_is_transitive_but_experimental(
    caplog: pytest.LogCaptureFixture,
) -> None:
    with caplog.at_level(logging.WARNING):
        group = RootedGroup.from_generators(4, [perms.cycle(4, 0, 1, 2, 3)])
    assert group.order == 4
    assert not group.full
    assert group.contains((1, 2, 3, 0))
    assert not group.contains((1, 0, 2, 3))
    assert "experimental" in caplog.text


def test_generators_of_full_group_collapse_to_symmetric() -> None:
    group = RootedGroup.from_generators(
        3, [perms.transposition(3, 0, 1), perms.cycle(3, 0, 1, 2)]
    )
    assert group.full
    assert group == RootedGroup.symmetric(3)


def test_intransitive_rooted_group_rejected() -> None:
    with pytest.raises(SpecValidationError, match="not transitive"):
        RootedGroup.from_generators(3, [perms.transposition(3, 0, 1)])


def test_bad_generator_rejected() -> None:
    with pytest.raises(SpecValidationError, match="not a permutation"):
        RootedGroup.from_generators(3, [(0, 0, 1)])


def test_stabilizer_of_zero() -> None:
    stab = RootedGroup.symmetric(3).stabilizer_of_zero()
    assert stab == ((0, 1, 2), (0, 2, 1))


def test_random_rooted_element_is_member() -> None:
    rng = np.random.default_rng(7)
    group = RootedGroup.from_generators(4, [perms.cycle(4, 0, 1, 2, 3)])
    for _ in range(20):
        assert group.contains(group.random(rng))
    full = RootedGroup.symmetric(5)
    assert full.contains(full.random(rng))


# ============================================================================
# BOUNDARY GROUP
# ============================================================================


def test_cyclic_boundary_group_arithmetic() -> None:
    f = FGroup(FStructure.CYCLIC, 3)
    assert f.order == 3
    assert f.mul(2, 2) == 1
    assert f.inv(1) == 2
    assert f.is_identity(0)
    assert f.is_abelian


def test_symmetric_boundary_group() -> None:
    f = FGroup(FStructure.SYMMETRIC, 3)
    assert f.order == 6
    assert not f.is_abelian
    a = (1, 0, 2)
    assert f.is_identity(f.mul(a, f.inv(a)))
    assert len(f.elements()) == 6


def test_boundary_group_size_validated() -> None:
    with pytest.raises(SpecValidationError):
        FGroup(FStructure.CYCLIC, 0)
