"""Command-line entry point: one subcommand per experiment.

Every command follows the same path: flags become a RunConfig, the group
config is loaded and validated, rows are computed, and a single writer turns
them into CSV (tables) or JSON (structured dumps). Output goes to --out or to
stdout.

Architecture Note:
    Errors raised on purpose by the package are EntropyForgeError subclasses.
    main() turns them into one line on stderr and exit status 2; anything
    else is a bug and keeps its traceback. Commands that check an identity
    (covering map, Δ returns bounded by Γ returns) write their table first
    and then return exit status 1 when a check failed.

    The writer emits no timestamps, host names or worker counts, and every
    estimator derives its random streams from --seed alone, so identical
    flags give byte-identical files.

See Also:
    docs/commands.md for every command and its columns
    const.py for column names, units and default grids
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from scipy import stats

from .config import config_digest, load_config, load_word
from .const import (
    CONF_DELTA,
    CONF_LEVEL,
    CONF_WORD_F,
    CONF_WORD_H,
    CONF_WORD_K,
    CONF_WORD_S,
    CSV_COMMENT,
    DEFAULT_BALL_BUDGET,
    DEFAULT_DESIGN_N_MAX,
    DEFAULT_DESIGN_PREFIX,
    DEFAULT_EXACT_GRID,
    DEFAULT_KEY_BUDGET,
    DEFAULT_LAMP_GRID,
    DEFAULT_N_GRID,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_STATE_BUDGET,
    DELTA_COLUMNS,
    DESIGN_COLUMNS,
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    FLOAT_FORMAT,
    LAMPLIGHTER_COLUMNS,
    MIN_SAMPLES,
    PACKAGE,
    REPORT_COLUMNS,
    REPORT_CONFIDENCE,
    SEED_RULE,
    SIMULATE_COLUMNS,
    VERSION,
    Command,
    FStructure,
    ScaleMode,
)
from .delta_ext import DeltaSpec, delta_returns, is_trivial_delta, schedule_scales
from .exceptions import (
    BudgetExceededError,
    ConfigValidationError,
    EntropyForgeError,
    QuotientRadiusError,
    ScheduleError,
    SpecValidationError,
    TableError,
    ThresholdError,
)
from .exponents import (
    DesignTarget,
    ExponentProfile,
    beta_of_n,
    beta_prime,
    design_constant,
    design_oscillating,
    k_of_n,
)
from .group_model import GroupSpec, ValencySeq, build_group
from .lamplighter_ref import build_dinf, lamp_returns
from .logtools import command_log, configure_logging, count, info_banner, kv
from .walker import (
    WalkStats,
    drift_bounds,
    entropy_exact,
    exact_distributions,
    expected_support_exact,
    norm_oracle,
    phi_trivial_exact,
    return_diagnostics,
    return_prob_exact,
    sample_word,
    simulate,
)
from .words import (
    AlternateWord,
    activity_report,
    canonical_key,
    dump_canonical,
    dump_minimal_tree,
    dump_word_tree,
    is_trivial,
    minimal_tree,
    rewrite_full,
    word_to_json,
)

_LOGGER = logging.getLogger(__name__)

Row = dict[str, Any]
Columns = Sequence[tuple[str, str]]

# ============================================================================
# RUN CONFIGURATION
# ============================================================================


def _grid_value(token: str) -> int:
    token = token.strip()
    if token.startswith("2^"):
        return 2 ** int(token[2:])
    return int(token)


def parse_n_grid(text: str) -> tuple[int, ...]:
    """Parse an n-grid: ``8,16,32``, ``1:6`` (inclusive), ``2^4:2^9`` or a mix.

    A range whose ends are both written as powers of two steps through the
    powers in between; any other range steps by one, or by an explicit
    third field (``0:100:25``).

    Raises:
        argparse.ArgumentTypeError: On malformed or negative values
    """
    values: set[int] = set()
    try:
        for part in text.split(","):
            fields = part.split(":")
            if len(fields) == 1:
                values.add(_grid_value(fields[0]))
                continue
            if len(fields) > 3:
                raise ValueError(part)
            lo, hi = _grid_value(fields[0]), _grid_value(fields[1])
            if len(fields) == 2 and all(f.strip().startswith("2^") for f in fields):
                start = int(fields[0].strip()[2:])
                stop = int(fields[1].strip()[2:])
                values.update(2**j for j in range(start, stop + 1))
                continue
            step = int(fields[2]) if len(fields) == 3 else 1
            if step < 1:
                raise ValueError(part)
            values.update(range(lo, hi + 1, step))
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"invalid n-grid {text!r}") from err
    if not values:
        raise argparse.ArgumentTypeError(f"empty n-grid {text!r}")
    if min(values) < 0:
        raise argparse.ArgumentTypeError(f"n-grid {text!r} has negative values")
    return tuple(sorted(values))


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}") from err


@dataclass(frozen=True)
class RunConfig:
    """Flags shared by every command.

    Attributes:
        config: Group config path (None when the command does not need one)
        command: Command to run
        n_grid: Sorted walk lengths
        samples: Monte Carlo samples per n
        seed: Root seed for all random streams
        budget_states: State cap of the word problem and canonical keys
        budget_keys: Key cap of exact distributions
        radius: Norm ball radius for drift columns (None: no drift)
        out: Output file (None: stdout)
    """

    config: Path | None
    command: Command
    n_grid: tuple[int, ...]
    samples: int
    seed: int
    budget_states: int
    budget_keys: int
    radius: int | None
    out: Path | None

    def __post_init__(self) -> None:
        for flag, value in (
            ("--budget-states", self.budget_states),
            ("--budget-keys", self.budget_keys),
        ):
            if value < 1:
                raise ConfigValidationError(f"{flag} must be positive, got {value}")
        if self.radius is not None and self.radius < 1:
            raise ConfigValidationError(f"--radius must be positive, got {self.radius}")
        if self.samples < MIN_SAMPLES:
            raise ConfigValidationError(
                f"--samples must be at least {MIN_SAMPLES}, got {self.samples}"
            )
        if list(self.n_grid) != sorted(set(self.n_grid)):
            raise ConfigValidationError(f"n-grid must be sorted, got {self.n_grid}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        return cls(
            config=args.config,
            command=Command(args.command),
            n_grid=args.n,
            samples=args.samples,
            seed=args.seed,
            budget_states=args.budget_states,
            budget_keys=args.budget_keys,
            radius=args.radius,
            out=args.out,
        )

    def require_config(self) -> Path:
        if self.config is None:
            raise ConfigValidationError(f"{self.command} needs --config")
        return self.config


# ============================================================================
# OUTPUT
# ============================================================================


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, float):
        return "" if math.isnan(value) else format(value, FLOAT_FORMAT)
    return str(value)


def _emit(out: Path | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    _LOGGER.debug("Wrote %s", out)


def render_csv(columns: Columns, rows: Iterable[Row], meta: Mapping[str, Any]) -> str:
    """CSV text: ``# key: value`` comment lines, a name[unit] header, rows."""
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"{CSV_COMMENT} {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"{name}[{unit}]" for name, unit in columns])
    for row in rows:
        writer.writerow([_fmt(row.get(name)) for name, _ in columns])
        count("rows")
    return buf.getvalue()


def read_csv(path: Path) -> tuple[dict[str, str], list[Row]]:
    """Parse a CSV written by render_csv into its metadata and rows.

    Units are dropped from the column names.

    Raises:
        TableError: If the file has no header row
    """
    meta: dict[str, str] = {}
    body: list[str] = []
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise TableError(f"Cannot read {path}: {err}") from err
    for line in text.splitlines():
        if line.startswith(CSV_COMMENT):
            key, _, value = line[len(CSV_COMMENT) :].strip().partition(":")
            meta[key.strip()] = value.strip()
        elif line:
            body.append(line)
    if not body:
        raise TableError(f"{path} has no header row")
    reader = csv.reader(body)
    names = [cell.split("[", 1)[0] for cell in next(reader)]
    return meta, [dict(zip(names, cells)) for cells in reader]


def _meta(run: RunConfig, digest: str, **extra: Any) -> dict[str, Any]:
    meta: dict[str, Any] = {PACKAGE: f"{run.command} {VERSION}"}
    meta["config_digest"] = digest
    meta["seed"] = run.seed
    meta["seed_rule"] = SEED_RULE
    meta.update((k, v) for k, v in extra.items() if v is not None)
    return meta


def _dump_json(run: RunConfig, payload: Mapping[str, Any]) -> None:
    _emit(run.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ============================================================================
# ROW BUILDERS
# ============================================================================


def _exponent_cells(profile: ExponentProfile, n: int) -> Row:
    row: Row = {}
    try:
        row["beta_n"] = float(beta_of_n(profile, n))
    except ThresholdError:
        pass
    try:
        row["beta_prime_n"] = float(beta_prime(profile, n))
    except ThresholdError:
        pass
    return row


def _walk_cells(walk: WalkStats) -> Row:
    return {
        "n": walk.n,
        "samples": walk.samples,
        "mean_activity": walk.mean_activity,
        "se_activity": walk.se_activity,
        "mean_support": walk.mean_support,
        "se_support": walk.se_support,
        "phi_trivial": walk.phi_trivial,
        "se_phi_trivial": walk.se_phi_trivial,
        "small_activity": walk.small_activity,
    }


def _load_spec(run: RunConfig) -> tuple[GroupSpec, dict[str, Any]]:
    cfg = load_config(run.require_config())
    return build_group(cfg), cfg


def _word_from_json(spec: GroupSpec, raw: Mapping[str, Any]) -> AlternateWord:
    level = raw[CONF_LEVEL]
    rooted = spec.rooted_at(level)
    s = tuple(tuple(p) for p in raw[CONF_WORD_S])
    for p in s:
        if not rooted.contains(p):
            raise SpecValidationError(
                f"{list(p)} is not in the rooted group of level {level}"
            )
    h_elements, f_elements = spec.h.elements(), spec.f.elements()
    k = []
    for entry in raw[CONF_WORD_K]:
        h_index, f_index = entry[CONF_WORD_H], entry[CONF_WORD_F]
        if h_index >= len(h_elements) or f_index >= len(f_elements):
            raise SpecValidationError(
                f"HF index ({h_index}, {f_index}) outside "
                f"#H={len(h_elements)}, #F={len(f_elements)}"
            )
        k.append((h_elements[h_index], f_elements[f_index]))
    if len(s) != len(k) + 1:
        raise SpecValidationError(
            f"A word with {len(k)} HF factors needs {len(k) + 1} rooted factors, "
            f"got {len(s)}"
        )
    return AlternateWord(level, s, tuple(k))


# ============================================================================
# COMMANDS
# ============================================================================


def _cmd_validate(run: RunConfig, args: argparse.Namespace) -> int:
    spec, cfg = _load_spec(run)
    summary: dict[str, Any] = {
        "config": str(run.config),
        "config_digest": config_digest(cfg),
        "spec": spec.describe(),
    }
    if cfg[CONF_DELTA]:
        dspec = DeltaSpec.from_config(spec, cfg[CONF_DELTA])
        summary["delta"] = dspec.describe()
    info_banner(_LOGGER, "Config valid", name=spec.name, h_order=spec.h.order)
    _dump_json(run, summary)
    return EXIT_OK


def _cmd_simulate(run: RunConfig, args: argparse.Namespace) -> int:
    spec, cfg = _load_spec(run)
    profile = ExponentProfile.from_spec(spec)
    oracle = None
    if run.radius is not None:
        oracle = norm_oracle(spec, run.radius, DEFAULT_BALL_BUDGET)
    rows = []
    for n in run.n_grid:
        row = _walk_cells(simulate(spec, n, run.samples, run.seed))
        row.update(_exponent_cells(profile, n))
        if oracle is not None:
            drift = drift_bounds(
                spec, n, run.samples, oracle.radius, run.seed, oracle=oracle
            )
            row.update(
                mean_norm=drift.mean_norm, drift_lb=drift.lower, drift_ub=drift.upper
            )
        kv(_LOGGER, logging.DEBUG, "simulate row", **row)
        rows.append(row)
    meta = _meta(run, config_digest(cfg), samples=run.samples, radius=run.radius)
    _emit(run.out, render_csv(SIMULATE_COLUMNS, rows, meta))
    return EXIT_OK


def _cmd_exact(run: RunConfig, args: argparse.Namespace) -> int:
    spec, cfg = _load_spec(run)
    profile = ExponentProfile.from_spec(spec)
    wanted = set(run.n_grid)
    rows = []
    laws = exact_distributions(
        spec, max(run.n_grid), budget=run.budget_keys, state_budget=run.budget_states
    )
    for dist in laws:
        if dist.n not in wanted:
            continue
        entropy = entropy_exact(dist)
        p_return = return_prob_exact(spec, dist)
        row: Row = {
            "n": dist.n,
            "entropy_exact": entropy,
            "entropy_exact_bits": entropy / math.log(2),
            "return_prob_exact": p_return,
            "phi_trivial_exact": phi_trivial_exact(dist),
            "support_exact": expected_support_exact(dist),
            "log_neg_log_return": return_diagnostics(spec, dist.n, p_return)[
                "log_neg_log_return"
            ],
        }
        row.update(_exponent_cells(profile, dist.n))
        kv(_LOGGER, logging.DEBUG, "exact row", keys=dist.support_size, n=dist.n)
        rows.append(row)
    meta = _meta(run, config_digest(cfg), budget_keys=run.budget_keys)
    _emit(run.out, render_csv(SIMULATE_COLUMNS, rows, meta))
    return EXIT_OK


def _design_valency(alpha: float, beta: float, d: int, D: int) -> ValencySeq:
    if alpha == beta:
        return design_constant(beta, d, D)
    return design_oscillating(DesignTarget.of(alpha, beta, d, D)).valency()


def _cmd_design(run: RunConfig, args: argparse.Namespace) -> int:
    alpha = args.beta if args.alpha is None else args.alpha
    valency = _design_valency(alpha, args.beta, args.d, args.D)
    profile = ExponentProfile.from_valency(valency)
    rows = []
    for j in range(1, int(math.log2(args.n_max)) + 1):
        n = 2**j
        row: Row = {"n": n, "k_n": k_of_n(profile, n)}
        row.update(_exponent_cells(profile, n))
        rows.append(row)
    target = {"alpha": alpha, "beta": args.beta, "d": args.d, "D": args.D}
    prefix = ",".join(str(v) for v in valency.values(args.prefix))
    meta: dict[str, Any] = {PACKAGE: f"{run.command} {VERSION}"}
    meta["config_digest"] = config_digest(target)
    meta["target"] = json.dumps(target, sort_keys=True)
    meta["valency_prefix"] = prefix
    info_banner(_LOGGER, "Designed valency", levels=args.prefix, prefix=prefix)
    _emit(run.out, render_csv(DESIGN_COLUMNS, rows, meta))
    return EXIT_OK


def _cmd_wordtest(run: RunConfig, args: argparse.Namespace) -> int:
    spec, cfg = _load_spec(run)
    if args.word is not None:
        word = _word_from_json(spec, load_word(args.word))
    else:
        word = sample_word(spec, args.length, np.random.default_rng(run.seed))
    trivial = is_trivial(spec, word, run.budget_states)
    report = activity_report(spec, word)
    payload: dict[str, Any] = {
        "config_digest": config_digest(cfg),
        "word": word_to_json(word),
        "trivial": trivial,
        "activity": asdict(report),
        "activity_consistent": report.consistent,
        "word_tree": dump_word_tree(rewrite_full(spec, word)),
        "minimal_tree": dump_minimal_tree(minimal_tree(spec, word)),
        "canonical": dump_canonical(canonical_key(spec, word, run.budget_states)),
    }
    if cfg[CONF_DELTA]:
        dspec = DeltaSpec.from_config(spec, cfg[CONF_DELTA])
        try:
            payload["delta_trivial"] = is_trivial_delta(
                dspec, word, run.budget_states
            )
        except QuotientRadiusError as err:
            _LOGGER.warning("Δ triviality undecided: %s", err)
            payload["delta_trivial"] = None
    info_banner(_LOGGER, "Word test", length=word.length, trivial=trivial)
    _dump_json(run, payload)
    return EXIT_OK if report.consistent else EXIT_FAILURE


def _delta_spec(
    spec: GroupSpec, cfg: Mapping[str, Any], args: argparse.Namespace
) -> DeltaSpec:
    if args.radii:
        return schedule_scales(spec, args.radii, ScaleMode(args.mode))
    if cfg[CONF_DELTA]:
        return DeltaSpec.from_config(spec, cfg[CONF_DELTA])
    raise ScheduleError("delta-sim needs --radii or delta blocks in the config")


def _cmd_delta_sim(run: RunConfig, args: argparse.Namespace) -> int:
    spec, cfg = _load_spec(run)
    dspec = _delta_spec(spec, cfg, args)
    profile = ExponentProfile.from_spec(spec)
    rows = []
    exceeded = []
    for n in run.n_grid:
        row = _walk_cells(simulate(spec, n, run.samples, run.seed))
        row.update(_exponent_cells(profile, n))
        returns = delta_returns(dspec, n, run.samples, run.seed)
        row.update(
            gamma_return_freq=returns.gamma_freq,
            delta_return_freq=returns.delta_freq,
            delta_censored=returns.censored,
            regime=returns.regime,
        )
        if returns.delta_returns > returns.gamma_returns:
            exceeded.append(n)
        kv(_LOGGER, logging.DEBUG, "delta-sim row", **row)
        rows.append(row)
    delta = json.dumps(dspec.describe(), sort_keys=True)
    meta = _meta(run, config_digest(cfg), samples=run.samples, delta=delta)
    _emit(run.out, render_csv(DELTA_COLUMNS, rows, meta))
    if exceeded:
        _LOGGER.error("Δ returned more often than Γ at n=%s", exceeded)
        return EXIT_FAILURE
    return EXIT_OK


def _cmd_lamplighter(run: RunConfig, args: argparse.Namespace) -> int:
    if run.config is not None:
        spec, _ = _load_spec(run)
    else:
        spec = build_dinf(args.f_structure, args.f_size)
    rows = []
    violations = 0
    for n in run.n_grid:
        report = lamp_returns(spec, n, run.samples, run.seed)
        violations += report.covering_violations + report.lift_violations
        rows.append(
            {
                "n": n,
                "samples": report.samples,
                "mean_norm_cover": report.mean_norm_cover,
                "return_freq_cover": report.return_freq_cover,
                "return_freq_extended": report.return_freq_extended,
                "covering_violations": report.covering_violations,
            }
        )
    meta = _meta(run, config_digest(spec.config), samples=run.samples)
    _emit(run.out, render_csv(LAMPLIGHTER_COLUMNS, rows, meta))
    if violations:
        _LOGGER.error("Covering identity failed on %s trajectories", violations)
        return EXIT_FAILURE
    return EXIT_OK


def _column(rows: list[Row], name: str, path: Path) -> list[str]:
    if rows and name not in rows[0]:
        raise TableError(f"{path} has no column {name!r}")
    return [row.get(name, "") for row in rows]


def fit_loglog(
    xs: Sequence[float], ys: Sequence[float], confidence: float = REPORT_CONFIDENCE
) -> tuple[float, float, float, float]:
    """Least-squares slope of log y on log x with a Student t interval.

    Returns:
        (slope, stderr, ci_low, ci_high)

    Raises:
        TableError: With fewer than three positive points
    """
    points = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len(points) < 3:
        raise TableError(f"A slope interval needs 3 positive points, got {len(points)}")
    log_x = np.log([p[0] for p in points])
    log_y = np.log([p[1] for p in points])
    fit = stats.linregress(log_x, log_y)
    half = stats.t.ppf((1 + confidence) / 2, len(points) - 2) * fit.stderr
    return fit.slope, fit.stderr, fit.slope - half, fit.slope + half


def _cmd_report(run: RunConfig, args: argparse.Namespace) -> int:
    rows = []
    digests = []
    for path in args.inputs:
        meta, table = read_csv(path)
        digests.append(meta.get("config_digest", ""))
        xs_raw = _column(table, args.x, path)
        ys_raw = _column(table, args.y, path)
        keep = [i for i, (x, y) in enumerate(zip(xs_raw, ys_raw)) if x and y]
        xs = [float(xs_raw[i]) for i in keep]
        ys = [float(ys_raw[i]) for i in keep]
        slope, stderr, low, high = fit_loglog(xs, ys)
        betas = [float(table[i]["beta_n"]) for i in keep if table[i].get("beta_n")]
        rows.append(
            {
                "source": str(path),
                "x": args.x,
                "y": args.y,
                "points": len(keep),
                "slope": slope,
                "stderr": stderr,
                "ci_low": low,
                "ci_high": high,
                "mean_beta_n": float(np.mean(betas)) if betas else None,
            }
        )
        info_banner(_LOGGER, "Slope", source=path.name, slope=slope, stderr=stderr)
    meta = {PACKAGE: f"{run.command} {VERSION}"}
    meta["config_digest"] = ",".join(sorted(set(digests)))
    meta["confidence"] = str(REPORT_CONFIDENCE)
    _emit(run.out, render_csv(REPORT_COLUMNS, rows, meta))
    return EXIT_OK


_COMMANDS: dict[Command, Callable[[RunConfig, argparse.Namespace], int]] = {
    Command.VALIDATE: _cmd_validate,
    Command.SIMULATE: _cmd_simulate,
    Command.EXACT: _cmd_exact,
    Command.DESIGN: _cmd_design,
    Command.WORDTEST: _cmd_wordtest,
    Command.DELTA_SIM: _cmd_delta_sim,
    Command.LAMPLIGHTER: _cmd_lamplighter,
    Command.REPORT: _cmd_report,
}

# ============================================================================
# ARGUMENT PARSING
# ============================================================================


def _common_flags(default_grid: str) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="group config (JSON)")
    common.add_argument(
        "--n",
        type=parse_n_grid,
        default=parse_n_grid(default_grid),
        help=f"walk lengths, e.g. 8,16 or 1:6 or 2^4:2^9 (default {default_grid})",
    )
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--out", type=Path, help="output file (default stdout)")
    common.add_argument("--budget-states", type=int, default=DEFAULT_STATE_BUDGET)
    common.add_argument("--budget-keys", type=int, default=DEFAULT_KEY_BUDGET)
    common.add_argument(
        "--radius", type=int, help="norm ball radius; adds drift columns"
    )
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--quiet", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PACKAGE,
        description="Random walks on saturated directed groups of tree automorphisms.",
    )
    parser.add_argument("--version", action="version", version=VERSION)
    sub = parser.add_subparsers(dest="command", required=True)
    walk = _common_flags(DEFAULT_N_GRID)
    exact = _common_flags(DEFAULT_EXACT_GRID)
    lamp = _common_flags(DEFAULT_LAMP_GRID)

    sub.add_parser(Command.VALIDATE, parents=[walk], help="check a group config")
    sub.add_parser(Command.SIMULATE, parents=[walk], help="Monte Carlo estimates")
    sub.add_parser(Command.EXACT, parents=[exact], help="exact laws for small n")

    design = sub.add_parser(Command.DESIGN, parents=[walk], help="design valencies")
    design.add_argument("--alpha", type=float, help="lower exponent (default beta)")
    design.add_argument("--beta", type=float, required=True)
    design.add_argument("--d", type=int, required=True)
    design.add_argument("--D", type=int, required=True)
    design.add_argument("--n-max", type=int, default=DEFAULT_DESIGN_N_MAX)
    design.add_argument("--prefix", type=int, default=DEFAULT_DESIGN_PREFIX)

    wordtest = sub.add_parser(
        Command.WORDTEST, parents=[walk], help="word problem with dumps"
    )
    wordtest.add_argument("--word", type=Path, help="word file (JSON)")
    wordtest.add_argument(
        "--length", type=int, default=8, help="length of a sampled word"
    )

    delta = sub.add_parser(
        Command.DELTA_SIM, parents=[walk], help="returns in Γ and in Δ"
    )
    delta.add_argument("--radii", type=_int_list, help="scale radii, e.g. 1,64")
    delta.add_argument(
        "--mode", choices=[str(m) for m in ScaleMode], default=ScaleMode.ENTROPY
    )

    lamplighter = sub.add_parser(
        Command.LAMPLIGHTER, parents=[lamp], help="F ≀ D∞ reference walk"
    )
    lamplighter.add_argument(
        "--f-structure", choices=[str(s) for s in FStructure], default="cyclic"
    )
    lamplighter.add_argument("--f-size", type=int, default=2)

    report = sub.add_parser(Command.REPORT, parents=[walk], help="log-log slopes")
    report.add_argument("inputs", type=Path, nargs="+", help="CSV files")
    report.add_argument("--x", default="n")
    report.add_argument("--y", default="mean_activity")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit status."""
    args = build_parser().parse_args(argv)
    configure_logging(-1 if args.quiet else args.verbose)
    try:
        with command_log(args.command) as log:
            run = RunConfig.from_args(args)
            status = _COMMANDS[run.command](run, args)
    except ConfigValidationError as err:
        if err.line is None:
            print(f"{PACKAGE}: {err}", file=sys.stderr)
        else:
            where = err.location(str(args.config))
            print(f"{PACKAGE}: {where}: {err}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as err:
        print(f"{PACKAGE}: {err} (budget={err.budget}, n={err.n})", file=sys.stderr)
        return EXIT_USAGE
    except EntropyForgeError as err:
        print(f"{PACKAGE}: {err}", file=sys.stderr)
        return EXIT_USAGE
    log.finish(_LOGGER, status)
    return status
