"""Test fixtures for entropyforge tests.

Group specs are built from the sample records in configs/, the same files
the CLI reads, so a test that passes here exercises the config path too.
Fixtures are organized from raw records to built specs to word letters.
"""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
import pytest

from entropyforge.config import load_config
from entropyforge.group_model import GroupSpec, build_group
from entropyforge.words import DirectedLetter, RootedLetter

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

# =============================================================================
# RAW CONFIG RECORDS
# =============================================================================


@pytest.fixture
def sample_config() -> Callable[[str], dict[str, Any]]:
    """Load a validated sample record from configs/ by stem name.

    Use this for:
    - Config tests that tweak one key of a known-good record
    - shift_config tests

    Example:
        def test_x(sample_config):
            cfg = sample_config("dinf")
            cfg["fGroup"]["size"] = 3
    """

    def _load(name: str) -> dict[str, Any]:
        return load_config(CONFIG_DIR / f"{name}.json")

    return _load


@pytest.fixture
def config_dir() -> Path:
    """Directory holding the sample group configs."""
    return CONFIG_DIR


def _spec(name: str) -> GroupSpec:
    return build_group(load_config(CONFIG_DIR / f"{name}.json"))


# =============================================================================
# SPEC FIXTURES - Built once per session, immutable
# =============================================================================


@pytest.fixture(scope="session")
def dinf_spec() -> GroupSpec:
    """The infinite dihedral group with boundary group F = Z/2.

    Use this for:
    - Hand-checked rewriting examples (s h s h)
    - The exhaustive truncated-action oracle
    - Lamplighter covering tests
    """
    return _spec("dinf")


@pytest.fixture(scope="session")
def binary_spec() -> GroupSpec:
    """Binary saturated group with the diagonal H = S_2 and F = Z/2.

    Use this for:
    - Walker and exact-distribution tests
    - Run-count law checks (d = 2, c = 1)
    """
    return _spec("binary")


@pytest.fixture(scope="session")
def pattern23_spec() -> GroupSpec:
    """Valency pattern (2, 3), diagonal H = S_3 x S_2."""
    return _spec("pattern23")


@pytest.fixture(scope="session")
def ternary_spec() -> GroupSpec:
    """Ternary diagonal group with F = Z/3."""
    return _spec("ternary")


@pytest.fixture(scope="session")
def mother_spec() -> GroupSpec:
    """Ternary mother group with non-abelian F = S_3."""
    return _spec("mother")


@pytest.fixture(scope="session")
def relative_spec() -> GroupSpec:
    """Ternary group with relative saturation c = 1."""
    return _spec("relative")


# =============================================================================
# LETTER FIXTURES
# =============================================================================


@pytest.fixture(scope="session")
def dinf_letters(dinf_spec: GroupSpec) -> dict[str, RootedLetter | DirectedLetter]:
    """Generators of D∞F: s (root swap), h (directed), phi (boundary).

    Example:
        word = canonical_alternate(spec, [letters["s"], letters["h"]])
    """
    h = next(g for g in dinf_spec.h.elements() if g != dinf_spec.h.identity())
    return {
        "s": RootedLetter((1, 0)),
        "h": DirectedLetter((h, 0)),
        "phi": DirectedLetter((dinf_spec.h.identity(), 1)),
    }


@pytest.fixture
def rng() -> np.random.Generator:
    """Deterministic numpy generator."""
    return np.random.default_rng(12345)
