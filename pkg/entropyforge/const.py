"""Constants for the entropyforge toolkit.

This module contains ALL constants used across the package, organized by:
1. General package constants
2. Group configuration keys and model kinds
3. Decision-procedure budgets
4. Random-walk and Monte Carlo defaults
5. Exponent calculus and designer defaults
6. Delta (extended valency) constants
7. CLI commands and CSV reporting

Architecture Note:
    Centralizing constants here keeps budgets and report formats in one
    place. Every module imports from here instead of hardcoding numbers, so a
    changed default (for example the state cap of the word problem) applies
    to the library and the CLI at the same time.
"""

from enum import StrEnum
from typing import Final

# ============================================================================
# GENERAL PACKAGE CONSTANTS
# ============================================================================

PACKAGE: Final = "entropyforge"
VERSION: Final = "1.0.0"

# Environment variable that caps worker processes for Monte Carlo fan-out
ENV_THREADS: Final = "ENTROPYFORGE_THREADS"

# ============================================================================
# GROUP CONFIGURATION
# ============================================================================

CONF_NAME: Final = "name"
CONF_VALENCY: Final = "valency"
CONF_PREFIX: Final = "prefix"
CONF_PATTERN: Final = "pattern"
CONF_H_MODEL: Final = "hModel"
CONF_KIND: Final = "kind"
CONF_GENERATORS: Final = "generators"
CONF_ROOTED_GROUPS: Final = "rootedGroups"
CONF_F_GROUP: Final = "fGroup"
CONF_STRUCTURE: Final = "structure"
CONF_SIZE: Final = "size"
CONF_C_SEQ: Final = "cSeq"
CONF_SATURATED: Final = "saturated"
CONF_SECTIONS: Final = "sections"
CONF_ROOT: Final = "root"
CONF_DELTA: Final = "delta"
CONF_LEVEL: Final = "level"
CONF_MODE: Final = "mode"
CONF_RADIUS: Final = "radius"
CONF_DEGREE: Final = "degree"

# Word files read by the wordtest command
CONF_WORD_S: Final = "s"
CONF_WORD_K: Final = "k"
CONF_WORD_H: Final = "h"
CONF_WORD_F: Final = "f"

# Rooted group spelled out as the full symmetric group
ROOTED_SYMMETRIC: Final = "symmetric"


class HModelKind(StrEnum):
    """Directed group models."""

    DIAGONAL = "diagonal"  # product of S_e over distinct valencies, diagonal
    MOTHER = "mother"  # product over level types (d_l, d_{l+1}, c_l)
    PORTRAIT = "portrait"  # generated by periodic portraits (e.g. D-infinity)


class FStructure(StrEnum):
    """Finite boundary group structures."""

    CYCLIC = "cyclic"  # Z/m, elements are ints mod m
    SYMMETRIC = "symmetric"  # S_m, elements are permutation tuples


# Valency bounds
MIN_VALENCY: Final = 2
MAX_VALENCY: Final = 16

# ============================================================================
# DECISION-PROCEDURE BUDGETS
# ============================================================================

DEFAULT_STATE_BUDGET: Final = 1_000_000  # is_trivial / canonical_key states
DEFAULT_KEY_BUDGET: Final = 1_000_000  # exact distribution keys
DEFAULT_BALL_BUDGET: Final = 200_000  # norm oracle ball size
DEFAULT_ENUMERATION_CAP: Final = 10_000  # exhaustive enumeration of H
SATURATION_ENUMERATION_CAP: Final = 10_000  # exhaustive saturation check

# ============================================================================
# RANDOM WALK DEFAULTS
# ============================================================================

DEFAULT_SEED: Final = 20240117
DEFAULT_SAMPLES: Final = 1000
MIN_SAMPLES: Final = 30
# Samples per chunk; each chunk owns one SeedSequence child so that results
# do not depend on the number of workers
SAMPLES_PER_CHUNK: Final = 64
TAIL_THETA: Final = 0.05
# Below this value the phi-trivial estimate is reported as a log-mean
PHI_TRIVIAL_LOG_THRESHOLD: Final = 1e-6
# Coded rewriting: largest tabulated H, F or permutation set, and the
# number of k-letters rewritten together
KERNEL_TABLE_CAP: Final = 256
KERNEL_BATCH_LETTERS: Final = 1 << 20

# ============================================================================
# EXPONENT CALCULUS
# ============================================================================

DEFAULT_N0: Final = 1
# Rational approximation of float targets (alpha, beta) for exact crossings
TARGET_DENOMINATOR_LIMIT: Final = 1000
# Levels materialized by the oscillating designer before the repeating tail
OSCILLATING_LEVELS: Final = 4000

# ============================================================================
# DELTA (EXTENDED VALENCY)
# ============================================================================


class BlockMode(StrEnum):
    """Root-component groups attached to a level of the extended tree."""

    FREE = "free"  # free product S * HF, d' infinite
    TRUNCATED = "truncated"  # finite quotient agreeing with the free product
    REGULAR = "regular"  # right regular representation of S and of HF


class ScaleMode(StrEnum):
    """Which asymptotic quantity a scale schedule is built for."""

    ENTROPY = "entropy"
    RETURN = "return"
    DRIFT = "drift"


# ============================================================================
# CLI COMMANDS AND REPORTING
# ============================================================================


class Command(StrEnum):
    """CLI commands."""

    VALIDATE = "validate"
    SIMULATE = "simulate"
    EXACT = "exact"
    DESIGN = "design"
    WORDTEST = "wordtest"
    DELTA_SIM = "delta-sim"
    LAMPLIGHTER = "lamplighter"
    REPORT = "report"


# Exit statuses
EXIT_OK: Final = 0
EXIT_FAILURE: Final = 1
EXIT_USAGE: Final = 2

# Default n-grids per command, in --n syntax
DEFAULT_N_GRID: Final = "16,32,64,128"
DEFAULT_EXACT_GRID: Final = "1:6"
DEFAULT_LAMP_GRID: Final = "4,8,16,32"

# design: rows n = 2^j up to this bound, and the printed valency prefix
DEFAULT_DESIGN_N_MAX: Final = 10**9
DEFAULT_DESIGN_PREFIX: Final = 32

# report: two-sided confidence level of the slope interval
REPORT_CONFIDENCE: Final = 0.95

# Seed splitting rule, written into every CSV header
SEED_RULE: Final = (
    f"SeedSequence(seed).spawn(ceil(samples/{SAMPLES_PER_CHUNK})), "
    f"{SAMPLES_PER_CHUNK} samples per chunk"
)

# CSV columns (name, unit); the header row writes them as name[unit]
SIMULATE_COLUMNS: Final = [
    ("n", "steps"),
    ("samples", "count"),
    ("mean_activity", "points"),
    ("se_activity", "points"),
    ("mean_support", "points"),
    ("se_support", "points"),
    ("phi_trivial", "probability"),
    ("se_phi_trivial", "probability"),
    ("small_activity", "count"),
    ("beta_n", "exponent"),
    ("beta_prime_n", "exponent"),
    ("entropy_exact", "nats"),
    ("entropy_exact_bits", "bits"),
    ("return_prob_exact", "probability"),
    ("phi_trivial_exact", "probability"),
    ("support_exact", "points"),
    ("log_neg_log_return", "log-nats"),
    ("mean_norm", "word-norm"),
    ("drift_lb", "word-norm"),
    ("drift_ub", "word-norm"),
]

DELTA_COLUMNS: Final = SIMULATE_COLUMNS + [
    ("gamma_return_freq", "frequency"),
    ("delta_return_freq", "frequency"),
    ("delta_censored", "count"),
    ("regime", "label"),
]

LAMPLIGHTER_COLUMNS: Final = [
    ("n", "steps"),
    ("samples", "count"),
    ("mean_norm_cover", "word-norm"),
    ("return_freq_cover", "frequency"),
    ("return_freq_extended", "frequency"),
    ("covering_violations", "count"),
]

DESIGN_COLUMNS: Final = [
    ("n", "integer"),
    ("k_n", "level"),
    ("beta_n", "exponent"),
    ("beta_prime_n", "exponent"),
]

REPORT_COLUMNS: Final = [
    ("source", "path"),
    ("x", "column"),
    ("y", "column"),
    ("points", "count"),
    ("slope", "exponent"),
    ("stderr", "exponent"),
    ("ci_low", "exponent"),
    ("ci_high", "exponent"),
    ("mean_beta_n", "exponent"),
]

CSV_COMMENT: Final = "#"
FLOAT_FORMAT: Final = ".10g"
