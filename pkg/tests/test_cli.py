from __future__ import annotations

import csv
import json
import logging
import math
from typing import TYPE_CHECKING

import pytest

from latticetdma import __version__
from latticetdma.cli import (
    COMMAND_HANDLERS,
    EXIT_FAILURE,
    EXIT_FATAL_ERROR,
    EXIT_SUCCESS,
    EXIT_USAGE_ERROR,
    configure_logging,
    create_parser,
    export_metadata,
    main,
    seed_output_path,
)
from latticetdma.constants import RNG_IDENTITY, UNIX_SIGNAL_EXIT_OFFSET, OutputFormat

if TYPE_CHECKING:
    from collections.abc import Iterator
    from pathlib import Path

    from pytest_mock import MockerFixture


@pytest.fixture(autouse=True)
def _isolate_cli(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    monkeypatch.setattr("latticetdma.cli.setup_signal_handlers", lambda: None)
    root = logging.getLogger()
    level = root.level
    yield
    root.setLevel(level)


def data_lines(text: str) -> list[str]:
    return [line for line in text.splitlines() if line and not line.startswith("#")]


def test_schedule_to_stdout(capsys: pytest.CaptureFixture[str]) -> None:
    code = main(["schedule", "--kind", "hex", "--k", "2", "--extent", "3x3", "--no-timestamp", "-q"])

    out = capsys.readouterr().out
    assert code == EXIT_SUCCESS
    assert out.startswith("#kind=hex\n#k=2\n#frame_length=9\n")
    assert f"#rng={RNG_IDENTITY}" in out
    assert "generated_at" not in out
    lines = data_lines(out)
    assert lines[0] == "x,y,slot"
    assert lines[1:4] == ["0,0,0", "1,0,1", "2,0,2"]
    assert len(lines) == 10


def test_schedule_then_verify_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    schedule_path = tmp_path / "square.csv"
    report_path = tmp_path / "violations.csv"

    assert main(["schedule", "--kind", "square", "--k", "3", "--extent", "6x6", "--out", str(schedule_path)]) == 0
    assert "Wrote schedule (36 rows)" in capsys.readouterr().err

    code = main(["verify", str(schedule_path), "--out", str(report_path), "--no-timestamp"])

    assert code == EXIT_SUCCESS
    report = report_path.read_text(encoding="utf-8")
    assert "#kind=square" in report
    assert "#summary.valid=true" in report
    assert data_lines(report) == ["slot,node_a,node_b,reason"]


def test_verify_reports_violations(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    bad = tmp_path / "bad.csv"
    bad.write_text("#kind=hex\n#k=1\n#frame_length=4\nx,y,slot\n0,0,0\n1,0,0\n", encoding="utf-8")

    code = main(["verify", str(bad), "-q"])

    out = capsys.readouterr().out
    assert code == EXIT_FAILURE
    assert "#summary.valid=false" in out
    assert "0,0:0,1:0,primary" in data_lines(out)


def test_verify_builtin_schedules_for_several_k(capsys: pytest.CaptureFixture[str]) -> None:
    code = main(["verify", "--kind", "hex", "--k", "1:3", "--extent", "10x10", "-q"])

    out = capsys.readouterr().out
    assert code == EXIT_SUCCESS
    assert "#k=1,2,3" in out
    assert "#frame_length=4,9,16" in out


def test_verify_missing_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    code = main(["verify", str(tmp_path / "missing.csv")])

    assert code == EXIT_USAGE_ERROR
    assert "Schedule File Error" in capsys.readouterr().err


def test_clique_agrees(capsys: pytest.CaptureFixture[str]) -> None:
    code = main(["clique", "--kind", "hex", "--k", "2:3", "--format", "json", "-q"])

    data = json.loads(capsys.readouterr().out)
    assert code == EXIT_SUCCESS
    assert [row[0] for row in data["rows"]] == ["hex", "hex"]
    assert [row[2] for row in data["rows"]] == [7, 12]


def test_clique_disagrees_on_tiny_extent(capsys: pytest.CaptureFixture[str]) -> None:
    code = main(["clique", "--kind", "hex", "--k", "4", "--extent", "2x2"])

    assert code == EXIT_FAILURE
    assert "Maximum cliques" in capsys.readouterr().err


def test_feasibility_json(capsys: pytest.CaptureFixture[str]) -> None:
    code = main(["feasibility", "--kind", "hex", "--gamma", "4", "--k", "2", "--rings", "20", "--format", "json"])

    captured = capsys.readouterr()
    data = json.loads(captured.out)
    assert code == EXIT_SUCCESS
    assert "Feasibility region" in captured.err
    row = dict(zip(data["columns"], data["rows"][0], strict=True))
    assert row["dd_max"] == pytest.approx(1.5)
    assert row["beta_max"] == pytest.approx(81 / 16)
    assert row["bound"] == pytest.approx(16 / 81)
    assert data["metadata"]["rings"] == 20


def test_feasibility_all_infeasible(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["feasibility", "--kind", "hex", "--gamma", "2.5", "--k", "1", "-q"]) == EXIT_FAILURE
    assert "false" in capsys.readouterr().out


def test_simulate_writes_per_seed_files(tmp_path: Path) -> None:
    out = tmp_path / "runs" / "hex.csv"
    argv = ["simulate", "--k", "2", "--gamma", "4", "--f", "0.5", "--nodes", "64", "--seed", "0:1"]

    code = main([*argv, "--out", str(out), "--positions", "-q"])

    assert code == EXIT_SUCCESS
    assert sorted(path.name for path in out.parent.iterdir()) == [
        "hex.csv",
        "hex.seed0.csv",
        "hex.seed0.positions.csv",
        "hex.seed1.csv",
        "hex.seed1.positions.csv",
    ]
    summary = out.read_text(encoding="utf-8")
    assert data_lines(summary)[0].startswith("seed,")
    assert len(data_lines(summary)) == 3
    positions = (out.parent / "hex.seed1.positions.csv").read_text(encoding="utf-8")
    assert len(data_lines(positions)) == 65


def test_simulate_is_deterministic(tmp_path: Path) -> None:
    argv = ["simulate", "--kind", "square", "--k", "2", "--gamma", "3", "--f", "0.25", "--nodes", "81", "--seed", "7"]
    first = tmp_path / "a" / "run.csv"
    second = tmp_path / "b" / "run.csv"

    assert main([*argv, "--out", str(first), "--no-timestamp", "-q"]) == EXIT_SUCCESS
    assert main([*argv, "--out", str(second), "--no-timestamp", "-q"]) == EXIT_SUCCESS

    for name in ("run.csv", "run.seed7.csv"):
        assert (first.parent / name).read_bytes() == (second.parent / name).read_bytes()


def test_simulate_summary_matches_link_rows(tmp_path: Path) -> None:
    out = tmp_path / "run.csv"
    argv = ["simulate", "--kind", "square", "--k", "2", "--gamma", "3", "--f", "0.5", "--nodes", "100", "--seed", "3"]

    assert main([*argv, "--out", str(out), "--no-timestamp", "-q"]) == EXIT_SUCCESS

    text = (tmp_path / "run.seed3.csv").read_text(encoding="utf-8")
    summary = dict(
        line.removeprefix("#summary.").split("=", 1) for line in text.splitlines() if line.startswith("#summary.")
    )
    header, *rows = list(csv.reader(data_lines(text)))
    rhos = [float(row[header.index("rho")]) for row in rows]
    assert int(summary["count"]) == len(rhos)
    assert int(summary["violations"]) == sum(1 for rho in rhos if rho < 1.0)
    assert float(summary["min_rho"]) == min(rhos)
    assert float(summary["avg_rho"]) == math.fsum(rhos) / len(rhos)
    assert float(summary["avg_over_min"]) == (math.fsum(rhos) / len(rhos)) / min(rhos)

    seed_row = dict(zip(*csv.reader(data_lines(out.read_text(encoding="utf-8")))))
    assert float(seed_row["min_rho"]) == min(rhos)
    assert int(seed_row["count"]) == len(rhos)


def test_simulate_to_stdout_warns_about_seeds(
    capsys: pytest.CaptureFixture[str],
    caplog: pytest.LogCaptureFixture,
) -> None:
    code = main(["simulate", "--k", "2", "--gamma", "4", "--f", "0.5", "--nodes", "36", "--seed", "0,1"])

    assert code == EXIT_SUCCESS
    assert "only written with --out" in caplog.text
    assert len(data_lines(capsys.readouterr().out)) == 3


def test_simulate_degenerate_point_fails(capsys: pytest.CaptureFixture[str]) -> None:
    code = main(["simulate", "--k", "2", "--gamma", "4", "--f", "0", "--nodes", "16", "-q"])

    assert code == EXIT_FAILURE
    assert "#summary.feasible=false" in capsys.readouterr().out


def test_sweep_over_f(tmp_path: Path) -> None:
    out = tmp_path / "f.csv"

    code = main(
        ["sweep", "--over", "f", "--f", "0.25,0.5", "--k", "2", "--gamma", "4", "--nodes", "49", "--out", str(out)],
    )

    assert code == EXIT_SUCCESS
    text = out.read_text(encoding="utf-8")
    assert "#over=f" in text
    assert "#k=2" in text
    rows = data_lines(text)
    assert rows[0].startswith("f,")
    assert [row.split(",")[0] for row in rows[1:]] == ["0.25", "0.5"]


def test_config_file_supplies_defaults(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    config = tmp_path / "run.conf"
    config.write_text("kind = square\nk = 3\nextent = 4x2\n", encoding="utf-8")

    code = main(["schedule", "--config", str(config), "--k", "1", "-q", "--no-timestamp"])

    out = capsys.readouterr().out
    assert code == EXIT_SUCCESS
    assert out.startswith("#kind=square\n#k=1\n#frame_length=2\n")
    assert len(data_lines(out)) == 9


@pytest.mark.parametrize(
    ("argv", "match"),
    [
        (["schedule", "--k", "0"], "k must be"),
        (["schedule", "--k", "1,2"], "single k value"),
        (["simulate", "--gamma", "2"], "gamma must be > 2"),
        (["clique", "--kind", "triangle"], "triangle"),
    ],
)
def test_configuration_errors(argv: list[str], match: str, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(argv) == EXIT_USAGE_ERROR

    err = capsys.readouterr().err
    assert "Configuration Error" in err
    assert match in err


def test_missing_config_file(tmp_path: Path) -> None:
    assert main(["clique", "--config", str(tmp_path / "none.conf")]) == EXIT_USAGE_ERROR


def test_unknown_command_exits_with_usage_error(capsys: pytest.CaptureFixture[str]) -> None:
    with pytest.raises(SystemExit) as excinfo:
        main(["bogus"])

    assert excinfo.value.code == EXIT_USAGE_ERROR
    assert "Argument Error" in capsys.readouterr().err


def test_cli_version(capsys: pytest.CaptureFixture[str]) -> None:
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])

    assert excinfo.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_main_handles_unexpected_exception(mocker: MockerFixture, capsys: pytest.CaptureFixture[str]) -> None:
    mocker.patch.dict(COMMAND_HANDLERS, {"clique": mocker.Mock(side_effect=RuntimeError("boom"))})

    assert main(["clique", "-q"]) == EXIT_FATAL_ERROR
    assert "Internal Error" in capsys.readouterr().err


def test_main_handles_keyboard_interrupt(mocker: MockerFixture) -> None:
    mocker.patch.dict(COMMAND_HANDLERS, {"schedule": mocker.Mock(side_effect=KeyboardInterrupt)})

    assert main(["schedule", "-q"]) == UNIX_SIGNAL_EXIT_OFFSET + 2


def test_every_command_has_a_handler() -> None:
    parser = create_parser()

    for command in COMMAND_HANDLERS:
        assert parser.parse_args([command]).command == command


def test_unset_flags_are_absent() -> None:
    args = create_parser().parse_args(["schedule", "--k", "2"])

    assert args.k == "2"
    assert not hasattr(args, "kind")
    assert not hasattr(args, "config")


@pytest.mark.parametrize(
    ("out", "seed", "suffix", "expected"),
    [
        ("runs/hex.csv", 3, "", "runs/hex.seed3.csv"),
        ("runs/hex", 0, "", "runs/hex.seed0.csv"),
        ("hex.csv", 2, ".positions", "hex.seed2.positions.csv"),
    ],
)
def test_seed_output_path(out: str, seed: int, suffix: str, expected: str) -> None:
    assert seed_output_path(out, seed, OutputFormat.CSV, suffix=suffix) == expected


def test_seed_output_path_uses_format_extension() -> None:
    assert seed_output_path("runs/square", 1, OutputFormat.JSON) == "runs/square.seed1.json"


def test_export_metadata() -> None:
    assert export_metadata(timestamp=False) == {"tool": "latticetdma", "version": __version__, "rng": RNG_IDENTITY}
    assert "generated_at" in export_metadata(timestamp=True)


@pytest.mark.parametrize(("verbosity", "level"), [(0, logging.WARNING), (1, logging.INFO), (3, logging.DEBUG)])
def test_configure_logging(verbosity: int, level: int) -> None:
    configure_logging(verbosity)

    assert logging.getLogger().level == level
