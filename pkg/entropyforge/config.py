"""Group config ingestion: JSON parsing, schema validation, digests.

A group config is a JSON document describing one saturated directed group
(see docs/config_schema.md). Validation uses voluptuous with unknown keys
rejected; every failure becomes a ConfigValidationError carrying the dotted
path of the offending key and, when the source text is known, its line and
column.

Architecture Note:
    This module only checks shape. Whether the described group is valid
    (c_l in range, transitive rooted groups, saturation) is decided by
    group_model.build_group, which calls validate_config first.
"""

from __future__ import annotations

import copy
import hashlib
import json
import logging
import os
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import voluptuous as vol

from .const import (
    CONF_C_SEQ,
    CONF_DEGREE,
    CONF_DELTA,
    CONF_F_GROUP,
    CONF_GENERATORS,
    CONF_H_MODEL,
    CONF_KIND,
    CONF_LEVEL,
    CONF_MODE,
    CONF_NAME,
    CONF_PATTERN,
    CONF_PREFIX,
    CONF_RADIUS,
    CONF_ROOT,
    CONF_ROOTED_GROUPS,
    CONF_SATURATED,
    CONF_SECTIONS,
    CONF_SIZE,
    CONF_STRUCTURE,
    CONF_VALENCY,
    CONF_WORD_F,
    CONF_WORD_H,
    CONF_WORD_K,
    CONF_WORD_S,
    ENV_THREADS,
    MAX_VALENCY,
    MIN_VALENCY,
    ROOTED_SYMMETRIC,
    BlockMode,
    FStructure,
    HModelKind,
)
from .exceptions import ConfigValidationError

_LOGGER = logging.getLogger(__name__)

# ============================================================================
# SCHEMA
# ============================================================================

_NON_NEG = vol.All(int, vol.Range(min=0))
_VALENCY_INT = vol.All(int, vol.Range(min=MIN_VALENCY, max=MAX_VALENCY))
_C_INT = vol.All(int, vol.Range(min=1, max=MAX_VALENCY - 1))
_PERM = vol.All([_NON_NEG], vol.Length(min=1))

_VALENCY_SEQ = vol.Schema(
    {
        vol.Optional(CONF_PREFIX, default=[]): [_VALENCY_INT],
        vol.Required(CONF_PATTERN): vol.All([_VALENCY_INT], vol.Length(min=1)),
    }
)

_C_SEQ = vol.Schema(
    {
        vol.Optional(CONF_PREFIX, default=[]): [_C_INT],
        vol.Required(CONF_PATTERN): vol.All([_C_INT], vol.Length(min=1)),
    }
)

_LEVEL_ENTRY = vol.Schema(
    {
        vol.Optional(CONF_SECTIONS, default=[]): [_PERM],
        vol.Optional(CONF_ROOT): _PERM,
    }
)

_PORTRAIT = vol.Schema(
    {
        vol.Optional(CONF_PREFIX, default=[]): [_LEVEL_ENTRY],
        vol.Required(CONF_PATTERN): vol.All([_LEVEL_ENTRY], vol.Length(min=1)),
    }
)


def _portrait_needs_generators(value: dict[str, Any]) -> dict[str, Any]:
    kind = value[CONF_KIND]
    has_gens = bool(value.get(CONF_GENERATORS))
    if kind == HModelKind.PORTRAIT and not has_gens:
        raise vol.Invalid("portrait model needs generators", path=[CONF_GENERATORS])
    if kind != HModelKind.PORTRAIT and has_gens:
        raise vol.Invalid(
            f"generators are only allowed for kind '{HModelKind.PORTRAIT}'",
            path=[CONF_GENERATORS],
        )
    return value


_H_MODEL = vol.All(
    vol.Schema(
        {
            vol.Required(CONF_KIND): vol.In([str(k) for k in HModelKind]),
            vol.Optional(CONF_GENERATORS): [_PORTRAIT],
        }
    ),
    _portrait_needs_generators,
)

_F_GROUP = vol.Schema(
    {
        vol.Required(CONF_STRUCTURE): vol.In([str(s) for s in FStructure]),
        vol.Required(CONF_SIZE): vol.All(int, vol.Range(min=1)),
    }
)

_ROOTED_GROUPS = vol.Schema(
    {
        vol.Match(r"^\d+$"): vol.Any(
            ROOTED_SYMMETRIC, vol.All([_PERM], vol.Length(min=1))
        )
    }
)

_DELTA_BLOCK = vol.Schema(
    {
        vol.Required(CONF_LEVEL): _NON_NEG,
        vol.Required(CONF_MODE): vol.In([str(m) for m in BlockMode]),
        vol.Optional(CONF_RADIUS): _NON_NEG,
        vol.Optional(CONF_DEGREE): vol.All(int, vol.Range(min=1)),
    }
)

CONFIG_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_NAME, default="group"): str,
        vol.Required(CONF_VALENCY): _VALENCY_SEQ,
        vol.Required(CONF_H_MODEL): _H_MODEL,
        vol.Optional(CONF_ROOTED_GROUPS, default={}): _ROOTED_GROUPS,
        vol.Required(CONF_F_GROUP): _F_GROUP,
        vol.Optional(CONF_C_SEQ): _C_SEQ,
        vol.Optional(CONF_SATURATED, default=True): bool,
        vol.Optional(CONF_DELTA, default=[]): [_DELTA_BLOCK],
    },
    extra=vol.PREVENT_EXTRA,
)

WORD_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_LEVEL, default=0): _NON_NEG,
        vol.Required(CONF_WORD_S): vol.All([_PERM], vol.Length(min=1)),
        vol.Optional(CONF_WORD_K, default=[]): [
            {vol.Required(CONF_WORD_H): _NON_NEG, vol.Required(CONF_WORD_F): _NON_NEG}
        ],
    },
    extra=vol.PREVENT_EXTRA,
)


# ============================================================================
# VALIDATION AND LOADING
# ============================================================================


def _locate(text: str, path: list[Any]) -> tuple[int | None, int | None]:
    """Line and column of the last key of ``path`` found in ``text``."""
    pos = -1
    cursor = 0
    for part in path:
        if not isinstance(part, str):
            continue
        idx = text.find(f'"{part}"', cursor)
        if idx < 0:
            break
        pos = cursor = idx
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


def _apply(
    schema: vol.Schema,
    raw: Mapping[str, Any],
    source_text: str | None,
    source: str | None = None,
) -> dict[str, Any]:
    try:
        return dict(schema(dict(raw)))
    except vol.MultipleInvalid as err:
        first = err.errors[0]
        path = ".".join(str(p) for p in first.path)
        line, column = (None, None)
        if source_text:
            line, column = _locate(source_text, first.path)
        raise ConfigValidationError(
            f"{path or '<root>'}: {first.msg}",
            path=path,
            line=line,
            column=column,
            source=source,
        ) from err


def validate_config(
    raw: Mapping[str, Any], source_text: str | None = None
) -> dict[str, Any]:
    """Validate a raw config mapping against CONFIG_SCHEMA.

    Args:
        raw: Parsed JSON object
        source_text: Original text, used to report line and column

    Returns:
        The validated config with defaults filled in

    Raises:
        ConfigValidationError: On the first schema violation
    """
    return _apply(CONFIG_SCHEMA, raw, source_text)


def _read_json(path: str | Path, what: str) -> tuple[dict[str, Any], str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigValidationError(f"Cannot read {what} {path}: {err}") from err
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigValidationError(
            f"Invalid JSON: {err.msg}",
            line=err.lineno,
            column=err.colno,
            source=str(path),
        ) from err
    if not isinstance(raw, dict):
        raise ConfigValidationError(
            f"A {what} must be a JSON object", line=1, column=1, source=str(path)
        )
    return raw, text


def load_config(path: str | Path) -> dict[str, Any]:
    """Read and validate a JSON group config file.

    Raises:
        ConfigValidationError: If the file cannot be read, is not JSON, or
            does not match the schema
    """
    raw, text = _read_json(path, "config")
    cfg = _apply(CONFIG_SCHEMA, raw, text, str(path))
    _LOGGER.debug("Loaded config %s (digest %s)", path, config_digest(cfg)[:12])
    return cfg


def load_word(path: str | Path) -> dict[str, Any]:
    """Read a word file: rooted factors as permutations, HF factors as indices.

    The h and f indices point into ``spec.h.elements()`` and
    ``spec.f.elements()``; resolving them needs the group, so it happens in
    the caller.
    """
    raw, text = _read_json(path, "word file")
    return _apply(WORD_SCHEMA, raw, text, str(path))


def config_digest(cfg: Mapping[str, Any]) -> str:
    """SHA-256 of the canonical JSON dump (sorted keys, no whitespace)."""
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _shift_periodic(raw: Mapping[str, Any], level: int) -> dict[str, Any]:
    prefix = list(raw.get(CONF_PREFIX, []))
    pattern = list(raw[CONF_PATTERN])
    if level < len(prefix):
        return {CONF_PREFIX: prefix[level:], CONF_PATTERN: pattern}
    r = (level - len(prefix)) % len(pattern)
    return {CONF_PREFIX: [], CONF_PATTERN: pattern[r:] + pattern[:r]}


def shift_config(cfg: Mapping[str, Any], level: int) -> dict[str, Any]:
    """Config of the shifted group Γ_level: every sequence loses ``level`` terms."""
    out = copy.deepcopy(dict(validate_config(cfg)))
    out[CONF_NAME] = f"{out[CONF_NAME]}@{level}"
    out[CONF_VALENCY] = _shift_periodic(out[CONF_VALENCY], level)
    if CONF_C_SEQ in out:
        out[CONF_C_SEQ] = _shift_periodic(out[CONF_C_SEQ], level)
    h_model = out[CONF_H_MODEL]
    if CONF_GENERATORS in h_model:
        h_model[CONF_GENERATORS] = [
            _shift_periodic(g, level) for g in h_model[CONF_GENERATORS]
        ]
    out[CONF_DELTA] = [
        {**block, CONF_LEVEL: block[CONF_LEVEL] - level}
        for block in out[CONF_DELTA]
        if block[CONF_LEVEL] >= level
    ]
    return out


def worker_count() -> int:
    """Worker processes for Monte Carlo fan-out (ENTROPYFORGE_THREADS or CPUs)."""
    raw = os.environ.get(ENV_THREADS)
    if raw:
        try:
            value = int(raw)
        except ValueError as err:
            raise ConfigValidationError(
                f"{ENV_THREADS} must be an integer, got {raw!r}"
            ) from err
        if value < 1:
            raise ConfigValidationError(f"{ENV_THREADS} must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1
