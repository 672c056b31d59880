"""Random walks on saturated directed groups of rooted tree automorphisms.

entropyforge builds groups Γ(S, HF) of automorphisms of a spherically
homogeneous rooted tree, decides their word problem, and measures random
walks on them: activity, boundary support, entropy, return probability and
drift. It also designs valency sequences with prescribed entropy exponents,
extends the groups with finite-group blocks (Δ), and checks the results
against a lamplighter reference walk.

Architecture:
    - Group model (group_model.py, finite_groups.py, perms.py) and the JSON
      config layer (config.py) describe one group
    - words.py rewrites alternate words and decides triviality
    - walker.py samples and convolves the walk
    - exponents.py computes and designs the exponent sequences
    - delta_ext.py and lamplighter_ref.py hold the extensions and the
      reference walk
    - cli.py runs the experiments and writes CSV/JSON reports

See Also:
    - docs/index.md: Command walkthrough
    - docs/config_schema.md: Group config format
"""

from __future__ import annotations

from .config import config_digest, load_config, validate_config
from .const import VERSION
from .exceptions import EntropyForgeError
from .group_model import GroupSpec, build_group
from .words import AlternateWord, canonical_key, is_trivial, rewrite_step

__version__ = VERSION

__all__ = [
    "AlternateWord",
    "EntropyForgeError",
    "GroupSpec",
    "build_group",
    "canonical_key",
    "config_digest",
    "is_trivial",
    "load_config",
    "rewrite_step",
    "validate_config",
]
