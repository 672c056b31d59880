"""Tests for the command-line entry point and its CSV/JSON writers."""

from __future__ import annotations

import argparse
import json
import logging
import math
from pathlib import Path

import pytest

from entropyforge import cli
from entropyforge.cli import fit_loglog, main, parse_n_grid, read_csv, render_csv
from entropyforge.config import config_digest, load_config
from entropyforge.const import (
    ENV_THREADS,
    EXIT_OK,
    EXIT_USAGE,
    SIMULATE_COLUMNS,
)
from entropyforge.exceptions import TableError

SEED = "4242"


@pytest.fixture(autouse=True)
def _quiet_cli(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep the CLI from attaching stderr handlers and from forking workers."""
    monkeypatch.setattr(cli, "configure_logging", lambda verbosity=0: None)
    monkeypatch.setenv(ENV_THREADS, "1")


def _config(config_dir: Path, name: str) -> str:
    return str(config_dir / f"{name}.json")


# ============================================================================
# FLAGS
# ============================================================================


def test_parse_n_grid_forms() -> None:
    assert parse_n_grid("8,16,32") == (8, 16, 32)
    assert parse_n_grid("1:4") == (1, 2, 3, 4)
    assert parse_n_grid("2^2:2^4") == (4, 8, 16)
    assert parse_n_grid("0:10:5") == (0, 5, 10)
    assert parse_n_grid("4,2,4,2^1") == (2, 4)


@pytest.mark.parametrize("text", ["a", "1:2:3:4", "-1", "3:1", "0:4:0"])
def test_parse_n_grid_rejects(text: str) -> None:
    with pytest.raises(argparse.ArgumentTypeError):
        parse_n_grid(text)


def test_missing_config_is_usage_error(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["validate"]) == EXIT_USAGE
    assert "needs --config" in capsys.readouterr().err


def test_too_few_samples(config_dir, capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["simulate", "--config", _config(config_dir, "dinf"), "--samples", "5"]
    assert main(argv) == EXIT_USAGE
    assert "--samples" in capsys.readouterr().err


def test_non_positive_budget(config_dir, capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["exact", "--config", _config(config_dir, "dinf"), "--budget-keys", "0"]
    assert main(argv) == EXIT_USAGE
    assert "--budget-keys must be positive" in capsys.readouterr().err


# ============================================================================
# CSV WRITER
# ============================================================================


def test_render_and_read_csv(tmp_path: Path) -> None:
    columns = [("n", "steps"), ("mean_activity", "points"), ("regime", "label")]
    rows = [
        {"n": 4, "mean_activity": 1.5, "regime": "low"},
        {"n": 8, "mean_activity": math.nan},
    ]
    text = render_csv(columns, rows, {"config_digest": "abc", "seed": 1})
    lines = text.splitlines()
    assert lines[0] == "# config_digest: abc"
    assert lines[2] == "n[steps],mean_activity[points],regime[label]"
    path = tmp_path / "t.csv"
    path.write_text(text, encoding="utf-8")
    meta, table = read_csv(path)
    assert meta == {"config_digest": "abc", "seed": "1"}
    assert table == [
        {"n": "4", "mean_activity": "1.5", "regime": "low"},
        {"n": "8", "mean_activity": "", "regime": ""},
    ]


def test_read_csv_needs_header(tmp_path: Path) -> None:
    path = tmp_path / "empty.csv"
    path.write_text("# only: comments\n", encoding="utf-8")
    with pytest.raises(TableError, match="no header"):
        read_csv(path)


def test_fit_loglog_recovers_power_law() -> None:
    xs = [16, 32, 64, 128, 256]
    slope, stderr, low, high = fit_loglog(xs, [3 * x**0.5 for x in xs])
    assert slope == pytest.approx(0.5)
    assert stderr == pytest.approx(0.0, abs=1e-9)
    assert low == pytest.approx(0.5) and high == pytest.approx(0.5)

    noisy = [3 * x**0.5 * (1.05 if i % 2 else 0.95) for i, x in enumerate(xs)]
    slope, stderr, low, high = fit_loglog(xs, noisy)
    assert stderr > 0
    assert low < slope < high


def test_fit_loglog_needs_three_points() -> None:
    with pytest.raises(TableError, match="3 positive points"):
        fit_loglog([1, 2, 4], [1, 0, 2])


# ============================================================================
# VALIDATE
# ============================================================================


def test_validate_summary(config_dir, capsys: pytest.CaptureFixture[str]) -> None:
    path = _config(config_dir, "dinf")
    assert main(["validate", "--config", path]) == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["spec"]["name"] == "dinf"
    assert summary["spec"]["f_order"] == 2
    assert summary["config_digest"] == config_digest(load_config(path))
    assert "delta" not in summary


def test_validate_delta_blocks(config_dir, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["validate", "--config", _config(config_dir, "dinf_delta")]) == 0
    blocks = json.loads(capsys.readouterr().out)["delta"]["blocks"]
    assert [b["level"] for b in blocks] == [2, 5]
    assert blocks[0]["d_prime"] == 6
    assert blocks[0]["embedding"] == "right-regular"
    assert blocks[1]["d_prime"] is None


def test_validate_reports_position(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    path = tmp_path / "bad.json"
    path.write_text(
        "{\n"
        '  "name": "bad",\n'
        '  "valency": {"pattern": [1]},\n'
        '  "hModel": {"kind": "diagonal"},\n'
        '  "fGroup": {"structure": "cyclic", "size": 2}\n'
        "}\n",
        encoding="utf-8",
    )
    assert main(["validate", "--config", str(path)]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert f"{path}:3:" in err
    assert len(err.strip().splitlines()) == 1


# ============================================================================
# SIMULATE AND EXACT
# ============================================================================


def test_simulate_is_byte_identical(config_dir, tmp_path: Path) -> None:
    outputs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        argv = ["simulate", "--config", _config(config_dir, "dinf"), "--n", "2,4"]
        argv += ["--samples", "64", "--seed", SEED, "--out", str(out)]
        assert main(argv) == EXIT_OK
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]

    meta, rows = read_csv(tmp_path / "a.csv")
    assert meta["config_digest"] == config_digest(
        load_config(_config(config_dir, "dinf"))
    )
    assert meta["seed"] == SEED
    assert [r["n"] for r in rows] == ["2", "4"]
    assert all(r["samples"] == "64" for r in rows)
    assert all(float(r["mean_activity"]) >= 0 for r in rows)
    assert all(r["entropy_exact"] == "" for r in rows)
    header = (tmp_path / "a.csv").read_text(encoding="utf-8").splitlines()[5]
    assert header.split(",") == [f"{n}[{u}]" for n, u in SIMULATE_COLUMNS]


def test_simulate_logs_work_done(
    config_dir, tmp_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    argv = ["simulate", "--config", _config(config_dir, "dinf"), "--n", "2,4"]
    argv += ["--samples", "64", "--seed", SEED, "--out", str(tmp_path / "s.csv")]
    with caplog.at_level(logging.INFO, logger="entropyforge"):
        assert main(argv) == EXIT_OK
    [line] = [r.message for r in caplog.records if "Command finished" in r.message]
    assert "command=simulate" in line
    assert "walk_samples=128" in line
    assert "rows=2" in line
    assert "status=0" in line


def test_exact_entropy_suite(config_dir, tmp_path: Path) -> None:
    out = tmp_path / "exact.csv"
    argv = ["exact", "--config", _config(config_dir, "dinf"), "--n", "0:3"]
    assert main([*argv, "--out", str(out)]) == EXIT_OK
    _, rows = read_csv(out)
    assert [int(r["n"]) for r in rows] == [0, 1, 2, 3]
    entropy = [float(r["entropy_exact"]) for r in rows]
    assert entropy[0] == 0
    assert float(rows[0]["return_prob_exact"]) == 1
    assert entropy[2] <= 2 * entropy[1] + 1e-8
    assert entropy[3] <= entropy[1] + entropy[2] + 1e-8
    for row in rows:
        assert float(row["phi_trivial_exact"]) >= float(row["return_prob_exact"])
        assert float(row["entropy_exact_bits"]) == pytest.approx(
            float(row["entropy_exact"]) / math.log(2), rel=1e-8
        )


def test_exact_budget_names_n(config_dir, capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["exact", "--config", _config(config_dir, "dinf"), "--n", "0:3"]
    assert main([*argv, "--budget-keys", "1"]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "budget=1" in err
    assert "n=1" in err


# ============================================================================
# DESIGN
# ============================================================================


def test_design_oscillating(tmp_path: Path) -> None:
    out = tmp_path / "design.csv"
    argv = ["design", "--alpha", "0.5", "--beta", "0.75", "--d", "2", "--D", "16"]
    assert main([*argv, "--n-max", str(2**20), "--out", str(out)]) == EXIT_OK
    meta, rows = read_csv(out)
    prefix = [int(v) for v in meta["valency_prefix"].split(",")]
    assert len(prefix) == 32
    assert set(prefix) <= {2, 16}
    assert [int(r["n"]) for r in rows] == [2**j for j in range(1, 21)]
    levels = [int(r["k_n"]) for r in rows]
    assert levels == sorted(levels)


def test_design_is_deterministic(tmp_path: Path) -> None:
    argv = ["design", "--beta", "0.6", "--d", "2", "--D", "16", "--n-max", "4096"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main([*argv, "--out", str(a)]) == EXIT_OK
    assert main([*argv, "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_design_inadmissible_target(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["design", "--alpha", "0.3", "--beta", "0.4", "--d", "2", "--D", "16"]
    assert main(argv) == EXIT_USAGE
    assert "outside" in capsys.readouterr().err


# ============================================================================
# WORDTEST
# ============================================================================


def _word_file(tmp_path: Path, payload: dict) -> str:
    path = tmp_path / "word.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_wordtest_sampled_word(config_dir, capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["wordtest", "--config", _config(config_dir, "dinf"), "--length", "6"]
    assert main([*argv, "--seed", SEED]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["word"]["length"] == 6
    assert payload["activity_consistent"] is True
    assert payload["activity"]["leaves"] == len(payload["minimal_tree"]["active"])
    assert set(payload) >= {"trivial", "word_tree", "canonical"}
    assert "delta_trivial" not in payload


@pytest.mark.parametrize(("perm", "trivial"), [([0, 1], True), ([1, 0], False)])
def test_wordtest_word_file(
    config_dir, tmp_path: Path, capsys: pytest.CaptureFixture[str], perm, trivial
) -> None:
    word = _word_file(tmp_path, {"s": [perm]})
    argv = ["wordtest", "--config", _config(config_dir, "dinf_delta"), "--word", word]
    assert main(argv) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["trivial"] is trivial
    assert payload["delta_trivial"] is trivial


@pytest.mark.parametrize(
    ("payload", "message"),
    [
        ({"s": [[0, 0]]}, "not in the rooted group"),
        ({"s": [[0, 1]], "k": [{"h": 0, "f": 0}]}, "needs 2 rooted factors"),
        ({"s": [[0, 1], [0, 1]], "k": [{"h": 0, "f": 99}]}, "outside"),
    ],
)
def test_wordtest_rejects_bad_words(
    config_dir, tmp_path: Path, capsys: pytest.CaptureFixture[str], payload, message
) -> None:
    word = _word_file(tmp_path, payload)
    argv = ["wordtest", "--config", _config(config_dir, "dinf"), "--word", word]
    assert main(argv) == EXIT_USAGE
    assert message in capsys.readouterr().err


def test_wordtest_schema_error_names_word_file(
    config_dir, tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    word = _word_file(tmp_path, {"s": [[0, 1]], "extra": 1})
    argv = ["wordtest", "--config", _config(config_dir, "dinf"), "--word", word]
    assert main(argv) == EXIT_USAGE
    assert f"{word}:1:" in capsys.readouterr().err


# ============================================================================
# DELTA-SIM
# ============================================================================


def test_delta_sim_scheduled(config_dir, tmp_path: Path) -> None:
    out = tmp_path / "delta.csv"
    argv = ["delta-sim", "--config", _config(config_dir, "dinf"), "--radii", "2"]
    argv += ["--n", "2,4", "--samples", "64", "--seed", SEED, "--out", str(out)]
    assert main(argv) == EXIT_OK
    meta, rows = read_csv(out)
    delta = json.loads(meta["delta"])
    assert delta["radii"] == [2]
    assert [b["mode"] for b in delta["blocks"]] == ["free"]
    for row in rows:
        assert float(row["delta_return_freq"]) <= float(row["gamma_return_freq"])
        assert row["regime"] == "low" or row["regime"].startswith("high@")


def test_delta_sim_from_config(config_dir, tmp_path: Path) -> None:
    out = tmp_path / "delta.csv"
    argv = ["delta-sim", "--config", _config(config_dir, "dinf_delta")]
    argv += ["--n", "2", "--samples", "32", "--out", str(out)]
    assert main(argv) == EXIT_OK
    _, rows = read_csv(out)
    assert rows[0]["delta_censored"] == "0"


def test_delta_sim_needs_blocks(config_dir, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["delta-sim", "--config", _config(config_dir, "dinf")]) == EXIT_USAGE
    assert "needs --radii" in capsys.readouterr().err


def test_delta_sim_bad_radii(config_dir, capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["delta-sim", "--config", _config(config_dir, "dinf"), "--radii", "8,4"]
    assert main(argv) == EXIT_USAGE
    assert "strictly increasing" in capsys.readouterr().err


# ============================================================================
# LAMPLIGHTER
# ============================================================================


def test_lamplighter_default_group(tmp_path: Path) -> None:
    out = tmp_path / "lamp.csv"
    argv = ["lamplighter", "--n", "4,8", "--samples", "64", "--seed", SEED]
    assert main([*argv, "--out", str(out)]) == EXIT_OK
    _, rows = read_csv(out)
    assert [r["n"] for r in rows] == ["4", "8"]
    for row in rows:
        assert row["covering_violations"] == "0"
        assert float(row["return_freq_extended"]) >= float(row["return_freq_cover"])
    again = tmp_path / "again.csv"
    assert main([*argv, "--out", str(again)]) == EXIT_OK
    assert again.read_bytes() == out.read_bytes()


def test_lamplighter_non_abelian(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["lamplighter", "--n", "4", "--f-structure", "symmetric", "--f-size", "3"]
    assert main(argv) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("entropyforge: ")


# ============================================================================
# REPORT
# ============================================================================


def test_report_slope(tmp_path: Path) -> None:
    columns = [("n", "steps"), ("mean_activity", "points"), ("beta_n", "exponent")]
    ns = [16, 32, 64, 128]
    rows = [{"n": n, "mean_activity": 2 * n**0.5, "beta_n": 0.5} for n in ns]
    source = tmp_path / "sim.csv"
    source.write_text(
        render_csv(columns, rows, {"config_digest": "d1"}), encoding="utf-8"
    )
    out = tmp_path / "report.csv"
    assert main(["report", str(source), "--out", str(out)]) == EXIT_OK
    meta, table = read_csv(out)
    assert meta["config_digest"] == "d1"
    (row,) = table
    assert row["points"] == "4"
    assert float(row["slope"]) == pytest.approx(0.5, abs=1e-8)
    assert float(row["mean_beta_n"]) == pytest.approx(0.5)


def test_report_over_simulate_output(config_dir, tmp_path: Path) -> None:
    sim = tmp_path / "sim.csv"
    argv = ["simulate", "--config", _config(config_dir, "binary"), "--n", "2^3:2^5"]
    assert main([*argv, "--samples", "64", "--out", str(sim)]) == EXIT_OK
    out = tmp_path / "report.csv"
    argv = ["report", str(sim), "--y", "mean_support", "--out", str(out)]
    assert main(argv) == EXIT_OK
    _, (row,) = read_csv(out)
    assert row["y"] == "mean_support"
    assert float(row["ci_low"]) <= float(row["slope"]) <= float(row["ci_high"])


def test_report_unknown_column(tmp_path: Path, capsys) -> None:
    source = tmp_path / "sim.csv"
    source.write_text(render_csv([("n", "steps")], [{"n": 1}], {}), encoding="utf-8")
    assert main(["report", str(source), "--y", "nope"]) == EXIT_USAGE
    assert "no column 'nope'" in capsys.readouterr().err
