from pathlib import Path

import pytest
from faker import Faker

from latticetdma.config import (
    CONFIG_KEYS,
    RunConfig,
    build_config,
    convert_value,
    load_config_file,
    normalize_key,
    parse_cli_values,
    parse_config_text,
    parse_extent,
    parse_float_list,
    parse_int_list,
    validate_config,
)
from latticetdma.constants import (
    DEFAULT_FEASIBILITY_GAMMAS,
    DEFAULT_FEASIBILITY_KS,
    DEFAULT_SWEEP_FS,
    DEFAULT_SWEEP_KS,
    DEFAULT_SWEEP_NODES,
    LatticeKind,
    OutputFormat,
    SweepAxis,
)
from latticetdma.errors import ConfigSpecError


class TestParseIntList:
    """Integer lists and ranges."""

    def test_comma_list(self) -> None:
        assert parse_int_list("3, 1,2", key="k") == (3, 1, 2)

    def test_inclusive_range(self) -> None:
        assert parse_int_list("1:5", key="k") == (1, 2, 3, 4, 5)

    def test_stepped_range(self) -> None:
        assert parse_int_list("0:10:4", key="seed") == (0, 4, 8)

    def test_single_value(self) -> None:
        assert parse_int_list("7", key="k") == (7,)

    @pytest.mark.parametrize("raw", ["", "1,,2", "a", "1:2:3:4", "1:", "1.5"])
    def test_malformed(self, raw: str) -> None:
        with pytest.raises(ConfigSpecError, match="'k'"):
            parse_int_list(raw, key="k")

    def test_descending_range_rejected(self) -> None:
        with pytest.raises(ConfigSpecError, match="stop must not be below start"):
            parse_int_list("5:1", key="k")

    def test_zero_step_rejected(self) -> None:
        with pytest.raises(ConfigSpecError, match="step must be positive"):
            parse_int_list("1:5:0", key="k")


class TestParseFloatList:
    """Float lists and ranges."""

    def test_range_hits_stop_exactly(self) -> None:
        assert parse_float_list("2.5:6:0.5", key="gamma") == (2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0)

    def test_tenths_are_rounded(self) -> None:
        assert parse_float_list("0.1:0.3:0.1", key="f") == (0.1, 0.2, 0.3)

    def test_comma_list(self) -> None:
        assert parse_float_list("3, 4.5", key="gamma") == (3.0, 4.5)

    @pytest.mark.parametrize("raw", ["inf", "1,nan", "x"])
    def test_rejects_non_finite_or_garbage(self, raw: str) -> None:
        with pytest.raises(ConfigSpecError, match="'gamma'"):
            parse_float_list(raw, key="gamma")


class TestParseExtent:
    """Extent syntax."""

    @pytest.mark.parametrize(
        ("raw", "expected"),
        [("6x4", (6, 4)), ("30", (30, 30)), (" 2X3 ", (2, 3)), ("0x0", (0, 0))],
    )
    def test_valid(self, raw: str, expected: tuple[int, int]) -> None:
        assert parse_extent(raw) == expected

    @pytest.mark.parametrize("raw", ["6x", "axb", "", "1.5"])
    def test_invalid(self, raw: str) -> None:
        with pytest.raises(ConfigSpecError, match="expected WxH or N"):
            parse_extent(raw)


class TestConvertValue:
    """Per-key conversion."""

    def test_kind_is_case_insensitive(self) -> None:
        assert convert_value("kind", "SQUARE") is LatticeKind.SQUARE

    def test_format_choice(self) -> None:
        assert convert_value("format", "json") is OutputFormat.JSON

    def test_over_choice(self) -> None:
        assert convert_value("over", "nodes") is SweepAxis.NODES

    def test_invalid_choice_lists_values(self) -> None:
        with pytest.raises(ConfigSpecError, match="Valid values: hex, square"):
            convert_value("kind", "triangle")

    def test_unknown_key(self, faker: Faker) -> None:
        key = f"x_{faker.pystr(min_chars=4, max_chars=8).lower()}"
        with pytest.raises(ConfigSpecError, match="Unknown config key"):
            convert_value(key, "1")

    @pytest.mark.parametrize(("key", "raw"), [("beta", "abc"), ("beta", "inf"), ("rings", "2.5"), ("out", "  ")])
    def test_bad_scalars(self, key: str, raw: str) -> None:
        with pytest.raises(ConfigSpecError, match=f"'{key}'"):
            convert_value(key, raw)

    def test_every_key_has_a_config_field(self) -> None:
        assert CONFIG_KEYS >= {"kind", "k", "gamma", "beta", "f", "seed", "nodes", "out", "format", "k_ref"}

    def test_normalize_key(self) -> None:
        assert normalize_key(" K-Ref ") == "k_ref"


class TestParseConfigText:
    """Config-file grammar."""

    def test_pairs_comments_and_blanks(self) -> None:
        text = "# run\nkind = square\n\nk = 1:3  # several\nbeta=2\n"
        assert parse_config_text(text) == {"kind": LatticeKind.SQUARE, "k": (1, 2, 3), "beta": 2.0}

    def test_dashed_keys(self) -> None:
        assert parse_config_text("k-ref = 3") == {"k_ref": 3}

    def test_missing_equals(self) -> None:
        with pytest.raises(ConfigSpecError, match=r"cfg:2: invalid line"):
            parse_config_text("k=2\nkind square\n", source="cfg")

    def test_empty_key(self) -> None:
        with pytest.raises(ConfigSpecError, match="KEY must not be empty"):
            parse_config_text(" = 3")

    def test_duplicate_key(self) -> None:
        with pytest.raises(ConfigSpecError, match="duplicate key 'k'"):
            parse_config_text("k=1\nK=2\n")

    def test_bad_value_names_line(self) -> None:
        with pytest.raises(ConfigSpecError, match=r"<config>:1: Invalid value for 'beta'"):
            parse_config_text("beta = high")

    def test_load_from_file(self, tmp_path: Path) -> None:
        path = tmp_path / "run.conf"
        path.write_text("kind = hex\nseed = 0:2\n", encoding="utf-8")
        assert load_config_file(path) == {"kind": LatticeKind.HEXAGONAL, "seed": (0, 1, 2)}

    def test_load_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigSpecError, match="Cannot read config file"):
            load_config_file(tmp_path / "missing.conf")


class TestBuildConfig:
    """Layer precedence."""

    def test_defaults(self) -> None:
        config = build_config()
        assert config == RunConfig()
        assert config.kind is LatticeKind.HEXAGONAL

    def test_cli_beats_file(self) -> None:
        file_values = parse_config_text("kind = square\nbeta = 2\n")
        cli_values = parse_cli_values({"beta": "3", "gamma": None})
        config = build_config(file_values=file_values, cli_values=cli_values)
        assert config.kind is LatticeKind.SQUARE
        assert config.beta == 3.0
        assert config.gamma is None

    def test_format_maps_to_field(self) -> None:
        config = build_config(cli_values={"format": OutputFormat.JSON})
        assert config.output_format is OutputFormat.JSON

    def test_unknown_key(self) -> None:
        with pytest.raises(ConfigSpecError, match="Unknown config key 'colour'"):
            build_config(file_values={"colour": "red"})


class TestResolved:
    """Command-specific defaults."""

    def test_feasibility_grid_defaults(self) -> None:
        resolved = RunConfig().resolved("feasibility")
        assert resolved.ks == DEFAULT_FEASIBILITY_KS
        assert resolved.gammas == DEFAULT_FEASIBILITY_GAMMAS

    def test_k_sweep_defaults(self) -> None:
        resolved = RunConfig(over=SweepAxis.K).resolved("sweep")
        assert resolved.ks == DEFAULT_SWEEP_KS
        assert resolved.fs == (0.9,)

    def test_f_sweep_defaults(self) -> None:
        assert RunConfig(over=SweepAxis.F).resolved("sweep").fs == DEFAULT_SWEEP_FS

    def test_size_sweep_defaults(self) -> None:
        assert RunConfig(over=SweepAxis.NODES).resolved("sweep").node_counts == DEFAULT_SWEEP_NODES

    def test_schedule_extent_default(self) -> None:
        assert RunConfig().resolved("schedule").extent == (30, 30)
        assert RunConfig().resolved("verify").extent is None

    def test_explicit_values_kept(self) -> None:
        resolved = RunConfig(k=(4,), gamma=(3.5,)).resolved("feasibility")
        assert resolved.ks == (4,)
        assert resolved.gammas == (3.5,)


class TestValidateConfig:
    """Command preconditions."""

    def test_valid_simulate(self) -> None:
        resolved = validate_config(RunConfig(k=(2,), gamma=(3.0,), f=(0.5,)), "simulate")
        assert resolved.node_counts == (4000,)

    @pytest.mark.parametrize(
        ("config", "match"),
        [
            (RunConfig(k=(0,)), "k must be >= 1"),
            (RunConfig(beta=0.0), "beta must be > 0"),
            (RunConfig(eta=-1.0), "eta must be >= 0"),
            (RunConfig(f=(1.5,)), r"f must lie within \[0, 1\]"),
            (RunConfig(nodes=(0,)), "nodes must be >= 1"),
            (RunConfig(seed=(-1,)), "seed values must be >= 0"),
            (RunConfig(rings=0), "rings must be >= 1"),
            (RunConfig(jobs=0), "jobs must be >= 1"),
            (RunConfig(budget=0), "budget must be >= 1"),
            (RunConfig(k_ref=0), "k_ref must be >= 1"),
            (RunConfig(margin=-0.5), "margin must be >= 0"),
            (RunConfig(extent=(-1, 3)), "extent dimensions must be >= 0"),
        ],
    )
    def test_rejects(self, config: RunConfig, match: str) -> None:
        with pytest.raises(ConfigSpecError, match=match):
            validate_config(config, "verify")

    @pytest.mark.parametrize("command", ["feasibility", "simulate", "sweep"])
    def test_gamma_domain(self, command: str) -> None:
        with pytest.raises(ConfigSpecError, match="gamma must be > 2"):
            validate_config(RunConfig(gamma=(2.0,)), command)  # type: ignore[arg-type]

    def test_gamma_not_checked_for_schedule(self) -> None:
        assert validate_config(RunConfig(gamma=(1.0,)), "schedule").gammas == (1.0,)

    def test_schedule_needs_single_k(self) -> None:
        with pytest.raises(ConfigSpecError, match="'schedule' takes a single k value, got 3"):
            validate_config(RunConfig(k=(1, 2, 3)), "schedule")

    def test_verify_accepts_several_k(self) -> None:
        assert validate_config(RunConfig(k=(1, 2, 3)), "verify").ks == (1, 2, 3)

    def test_simulate_needs_single_f(self) -> None:
        with pytest.raises(ConfigSpecError, match="single f value"):
            validate_config(RunConfig(f=(0.2, 0.4)), "simulate")

    def test_sweep_allows_only_the_swept_list(self) -> None:
        assert validate_config(RunConfig(over=SweepAxis.F, f=(0.1, 0.2)), "sweep").fs == (0.1, 0.2)
        with pytest.raises(ConfigSpecError, match="'sweep' takes a single k value"):
            validate_config(RunConfig(over=SweepAxis.F, k=(2, 3)), "sweep")

    def test_empty_extent_allowed(self) -> None:
        assert validate_config(RunConfig(extent=(0, 0)), "schedule").extent == (0, 0)
