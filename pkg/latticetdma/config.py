"""Run configuration: config-file grammar, list syntax and validation.

A configuration is assembled from three layers, highest precedence first:
CLI flags, a flat ``key=value`` config file (``--config``), built-in
defaults. Both CLI flags and file values are plain strings parsed by the same
converters, so ``--k 1:5`` and ``k = 1:5`` mean the same thing.

Typical usage:
    >>> values = parse_config_text("kind = square\\nk = 1:3\\n")
    >>> config = build_config(file_values=values, cli_values={"beta": 2.0})
    >>> config.k
    (1, 2, 3)

"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from functools import partial
from pathlib import Path
from typing import TYPE_CHECKING, Any, Literal

from .constants import (
    CLIQUE_NODE_BUDGET,
    DEFAULT_BETA,
    DEFAULT_ETA,
    DEFAULT_EXTENT_SIDE,
    DEFAULT_F,
    DEFAULT_FEASIBILITY_GAMMAS,
    DEFAULT_FEASIBILITY_KS,
    DEFAULT_GAMMA,
    DEFAULT_JOBS,
    DEFAULT_K,
    DEFAULT_K_SWEEP_F,
    DEFAULT_K_SWEEP_REFERENCE_K,
    DEFAULT_NODE_COUNT,
    DEFAULT_POWER_MARGIN,
    DEFAULT_RINGS,
    DEFAULT_SEED,
    DEFAULT_SWEEP_FS,
    DEFAULT_SWEEP_KS,
    DEFAULT_SWEEP_NODES,
    MIN_PATH_LOSS_EXPONENT,
    LatticeKind,
    OutputFormat,
    SweepAxis,
)
from .errors import ConfigSpecError

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping, Sequence

Command = Literal["schedule", "verify", "clique", "feasibility", "simulate", "sweep"]
COMMANDS: tuple[Command, ...] = ("schedule", "verify", "clique", "feasibility", "simulate", "sweep")

# Tolerance used when counting the points of a float range.
_RANGE_EPSILON = 1e-9
_RANGE_DECIMALS = 12


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Parameters of one CLI invocation.

    ``None`` list fields take command-specific defaults in :meth:`resolved`
    (e.g. ``sweep --over k`` defaults ``k`` to ``2..6`` and ``f`` to 0.9).

    Attributes:
        kind: Lattice topology.
        k: Interference parameters.
        extent: ``(width, height)`` of the lattice box, ``None`` for the
            command default.
        gamma: Path-loss exponents.
        beta: SINR threshold for ``feasibility``.
        f: Operating fractions towards the region boundary.
        eta: Noise power.
        seed: Deployment seeds.
        nodes: Network sizes.
        out: Output path; ``None`` or ``-`` writes to stdout.
        output_format: File format of the output.
        rings: Ring count of exact interference sums.
        margin: Relative power margin above the threshold.
        jobs: Worker processes for simulations and sweeps.
        k_ref: Reference ``k`` whose operating point a ``k`` sweep keeps.
        over: Parameter varied by ``sweep``.
        budget: Node budget of the exact max-clique search.

    """

    kind: LatticeKind = LatticeKind.HEXAGONAL
    k: tuple[int, ...] | None = None
    extent: tuple[int, int] | None = None
    gamma: tuple[float, ...] | None = None
    beta: float = DEFAULT_BETA
    f: tuple[float, ...] | None = None
    eta: float = DEFAULT_ETA
    seed: tuple[int, ...] = (DEFAULT_SEED,)
    nodes: tuple[int, ...] | None = None
    out: str | None = None
    output_format: OutputFormat = OutputFormat.CSV
    rings: int = DEFAULT_RINGS
    margin: float = DEFAULT_POWER_MARGIN
    jobs: int = DEFAULT_JOBS
    k_ref: int = DEFAULT_K_SWEEP_REFERENCE_K
    over: SweepAxis = SweepAxis.K
    budget: int = CLIQUE_NODE_BUDGET

    def resolved(self, command: Command) -> RunConfig:
        """Return a copy with every ``None`` list replaced by the command default."""
        sweeping = command == "sweep"
        k_default: tuple[int, ...] = (DEFAULT_K,)
        gamma_default: tuple[float, ...] = (DEFAULT_GAMMA,)
        f_default: tuple[float, ...] = (DEFAULT_F,)
        nodes_default: tuple[int, ...] = (DEFAULT_NODE_COUNT,)
        if command == "feasibility":
            k_default, gamma_default = DEFAULT_FEASIBILITY_KS, DEFAULT_FEASIBILITY_GAMMAS
        elif sweeping and self.over is SweepAxis.K:
            k_default, f_default = DEFAULT_SWEEP_KS, (DEFAULT_K_SWEEP_F,)
        elif sweeping and self.over is SweepAxis.F:
            f_default = DEFAULT_SWEEP_FS
        elif sweeping:
            nodes_default = DEFAULT_SWEEP_NODES

        extent = self.extent
        if extent is None and command == "schedule":
            extent = (DEFAULT_EXTENT_SIDE, DEFAULT_EXTENT_SIDE)
        return replace(
            self,
            k=self.k if self.k is not None else k_default,
            gamma=self.gamma if self.gamma is not None else gamma_default,
            f=self.f if self.f is not None else f_default,
            nodes=self.nodes if self.nodes is not None else nodes_default,
            extent=extent,
        )

    @property
    def ks(self) -> tuple[int, ...]:
        """Resolved ``k`` values."""
        return self.k if self.k is not None else (DEFAULT_K,)

    @property
    def gammas(self) -> tuple[float, ...]:
        """Resolved ``γ`` values."""
        return self.gamma if self.gamma is not None else (DEFAULT_GAMMA,)

    @property
    def fs(self) -> tuple[float, ...]:
        """Resolved ``f`` values."""
        return self.f if self.f is not None else (DEFAULT_F,)

    @property
    def node_counts(self) -> tuple[int, ...]:
        """Resolved network sizes."""
        return self.nodes if self.nodes is not None else (DEFAULT_NODE_COUNT,)


def _range_count(start: float, stop: float, step: float, raw: str, key: str) -> int:
    if step <= 0:
        msg = f"Invalid range '{raw}' for '{key}': step must be positive."
        raise ConfigSpecError(msg)
    if stop < start:
        msg = f"Invalid range '{raw}' for '{key}': stop must not be below start."
        raise ConfigSpecError(msg)
    return math.floor((stop - start) / step + _RANGE_EPSILON) + 1


def _split_items(raw: str, key: str) -> list[str]:
    text = raw.strip()
    if not text:
        msg = f"Empty value for '{key}'."
        raise ConfigSpecError(msg)
    items = [item.strip() for item in text.split(",")]
    if any(not item for item in items):
        msg = f"Empty item in '{raw}' for '{key}' (expected a,b,c or start:stop[:step])."
        raise ConfigSpecError(msg)
    return items


def _range_parts(raw: str, key: str) -> list[str] | None:
    text = raw.strip()
    if ":" not in text:
        return None
    parts = [part.strip() for part in text.split(":")]
    if len(parts) not in {2, 3} or any(not part for part in parts):
        msg = f"Invalid range '{raw}' for '{key}' (expected start:stop[:step])."
        raise ConfigSpecError(msg)
    return parts


def parse_int_list(raw: str, *, key: str) -> tuple[int, ...]:
    """Parse ``a,b,c`` or an inclusive ``start:stop[:step]`` range of integers.

    Raises:
        ConfigSpecError: If an item is not an integer or the range is empty.

    Examples:
        >>> parse_int_list("1:5:2", key="k")
        (1, 3, 5)
        >>> parse_int_list("7, 9", key="seed")
        (7, 9)

    """
    try:
        parts = _range_parts(raw, key)
        if parts is None:
            return tuple(int(item) for item in _split_items(raw, key))
        start, stop = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1  # noqa: PLR2004
    except ConfigSpecError:
        raise
    except ValueError as exc:
        msg = f"Invalid integer list '{raw}' for '{key}'."
        raise ConfigSpecError(msg) from exc
    count = _range_count(start, stop, step, raw, key)
    return tuple(start + i * step for i in range(count))


def parse_float_list(raw: str, *, key: str) -> tuple[float, ...]:
    """Parse ``a,b,c`` or an inclusive ``start:stop[:step]`` range of floats.

    Range points are rounded so that ``2.5:6:0.5`` ends exactly at 6.0.

    Raises:
        ConfigSpecError: If an item is not a finite number or the range is empty.

    """
    try:
        parts = _range_parts(raw, key)
        if parts is None:
            values = tuple(float(item) for item in _split_items(raw, key))
        else:
            start, stop = float(parts[0]), float(parts[1])
            step = float(parts[2]) if len(parts) == 3 else 1.0  # noqa: PLR2004
            count = _range_count(start, stop, step, raw, key)
            values = tuple(round(start + i * step, _RANGE_DECIMALS) for i in range(count))
    except ConfigSpecError:
        raise
    except ValueError as exc:
        msg = f"Invalid number list '{raw}' for '{key}'."
        raise ConfigSpecError(msg) from exc
    if not all(math.isfinite(value) for value in values):
        msg = f"Invalid number list '{raw}' for '{key}': values must be finite."
        raise ConfigSpecError(msg)
    return values


def parse_extent(raw: str, *, key: str = "extent") -> tuple[int, int]:
    """Parse ``WxH`` or a single side ``N`` into ``(width, height)``.

    Examples:
        >>> parse_extent("6x4")
        (6, 4)
        >>> parse_extent("30")
        (30, 30)

    """
    text = raw.strip().lower()
    try:
        if "x" in text:
            width_raw, height_raw = text.split("x", 1)
            return int(width_raw), int(height_raw)
        side = int(text)
    except ValueError as exc:
        msg = f"Invalid extent '{raw}' for '{key}' (expected WxH or N)."
        raise ConfigSpecError(msg) from exc
    return side, side


def _parse_float(raw: str, *, key: str) -> float:
    try:
        value = float(raw)
    except ValueError as exc:
        msg = f"Invalid value for '{key}': '{raw}' is not a number."
        raise ConfigSpecError(msg) from exc
    if not math.isfinite(value):
        msg = f"Invalid value for '{key}': '{raw}' must be finite."
        raise ConfigSpecError(msg)
    return value


def _parse_int(raw: str, *, key: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        msg = f"Invalid value for '{key}': '{raw}' is not an integer."
        raise ConfigSpecError(msg) from exc


def _parse_choice(raw: str, *, key: str, choices: type[LatticeKind | OutputFormat | SweepAxis]) -> object:
    try:
        return choices(raw.strip().lower())
    except ValueError as exc:
        allowed = ", ".join(member.value for member in choices)
        msg = f"Invalid value for '{key}': '{raw}'. Valid values: {allowed}."
        raise ConfigSpecError(msg) from exc


def _parse_out(raw: str, *, key: str) -> str:
    text = raw.strip()
    if not text:
        msg = f"Empty value for '{key}'."
        raise ConfigSpecError(msg)
    return text


_CONVERTERS: dict[str, Callable[[str], object]] = {
    "kind": partial(_parse_choice, key="kind", choices=LatticeKind),
    "k": partial(parse_int_list, key="k"),
    "extent": partial(parse_extent, key="extent"),
    "gamma": partial(parse_float_list, key="gamma"),
    "beta": partial(_parse_float, key="beta"),
    "f": partial(parse_float_list, key="f"),
    "eta": partial(_parse_float, key="eta"),
    "seed": partial(parse_int_list, key="seed"),
    "nodes": partial(parse_int_list, key="nodes"),
    "out": partial(_parse_out, key="out"),
    "format": partial(_parse_choice, key="format", choices=OutputFormat),
    "rings": partial(_parse_int, key="rings"),
    "margin": partial(_parse_float, key="margin"),
    "jobs": partial(_parse_int, key="jobs"),
    "k_ref": partial(_parse_int, key="k_ref"),
    "over": partial(_parse_choice, key="over", choices=SweepAxis),
    "budget": partial(_parse_int, key="budget"),
}

# Keys accepted in config files and as CLI flags (``k_ref`` ↔ ``--k-ref``).
CONFIG_KEYS: frozenset[str] = frozenset(_CONVERTERS)

_FIELD_NAMES = {"format": "output_format"}


def normalize_key(raw: str) -> str:
    """Lower-case a key and map ``-`` to ``_``."""
    return raw.strip().lower().replace("-", "_")


def convert_value(key: str, raw: str) -> object:
    """Convert the string ``raw`` for ``key``.

    Raises:
        ConfigSpecError: If ``key`` is unknown or ``raw`` does not parse.

    """
    converter = _CONVERTERS.get(key)
    if converter is None:
        allowed = ", ".join(sorted(CONFIG_KEYS))
        msg = f"Unknown config key '{key}'. Valid keys: {allowed}."
        raise ConfigSpecError(msg)
    return converter(raw)


def parse_config_text(text: str, *, source: str = "<config>") -> dict[str, object]:
    """Parse a flat ``key=value`` config file body.

    One pair per line; ``#`` starts a comment; blank lines are skipped.

    Returns:
        Converted values keyed by normalized key.

    Raises:
        ConfigSpecError: On a malformed line, unknown or duplicate key, or a
            value that does not parse. The message names the line.

    """
    values: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if content.count("=") != 1:
            msg = f"{source}:{lineno}: invalid line '{content}' (expected exactly one '=' between KEY and VALUE)."
            raise ConfigSpecError(msg)
        key_raw, value_raw = content.split("=", 1)
        key = normalize_key(key_raw)
        if not key:
            msg = f"{source}:{lineno}: KEY must not be empty."
            raise ConfigSpecError(msg)
        if key in values:
            msg = f"{source}:{lineno}: duplicate key '{key}'."
            raise ConfigSpecError(msg)
        try:
            values[key] = convert_value(key, value_raw)
        except ConfigSpecError as exc:
            msg = f"{source}:{lineno}: {exc}"
            raise ConfigSpecError(msg) from exc
    return values


def load_config_file(path: str | Path) -> dict[str, object]:
    """Read and parse a config file.

    Raises:
        ConfigSpecError: If the file cannot be read or does not parse.

    """
    config_path = Path(path)
    try:
        text = config_path.read_text(encoding="utf-8")
    except OSError as exc:
        msg = f"Cannot read config file '{config_path}': {exc.strerror or exc}"
        raise ConfigSpecError(msg) from exc
    return parse_config_text(text, source=str(config_path))


def parse_cli_values(raw: Mapping[str, str | None]) -> dict[str, object]:
    """Convert the string flags that were given; ``None`` means not given."""
    given = {normalize_key(key): value for key, value in raw.items() if value is not None}
    return {key: convert_value(key, value) for key, value in given.items()}


def build_config(
    *,
    file_values: Mapping[str, object] | None = None,
    cli_values: Mapping[str, object] | None = None,
) -> RunConfig:
    """Merge layers into a :class:`RunConfig`; CLI beats file beats defaults."""
    merged = {**(file_values or {}), **(cli_values or {})}
    known = {f.name for f in fields(RunConfig)}
    kwargs: dict[str, Any] = {}
    for key, value in merged.items():
        name = _FIELD_NAMES.get(key, key)
        if name not in known:
            msg = f"Unknown config key '{key}'."
            raise ConfigSpecError(msg)
        kwargs[name] = value
    return RunConfig(**kwargs)


def _require(condition: bool, message: str) -> None:  # noqa: FBT001
    if not condition:
        raise ConfigSpecError(message)


def _require_single(values: Sequence[object], key: str, command: Command) -> None:
    _require(len(values) == 1, f"'{command}' takes a single {key} value, got {len(values)}.")


def validate_config(config: RunConfig, command: Command) -> RunConfig:
    """Resolve defaults and check every precondition the command relies on.

    Returns:
        The resolved configuration.

    Raises:
        ConfigSpecError: Naming the first violated constraint.

    """
    resolved = config.resolved(command)
    ks, gammas, fs, nodes = resolved.ks, resolved.gammas, resolved.fs, resolved.node_counts

    _require(all(k >= 1 for k in ks), f"k must be >= 1 (got {min(ks)}).")
    _require(resolved.beta > 0, f"beta must be > 0 (got {resolved.beta}).")
    _require(resolved.eta >= 0, f"eta must be >= 0 (got {resolved.eta}).")
    _require(all(0.0 <= f <= 1.0 for f in fs), "f must lie within [0, 1].")
    _require(all(n >= 1 for n in nodes), f"nodes must be >= 1 (got {min(nodes)}).")
    _require(all(seed >= 0 for seed in resolved.seed), "seed values must be >= 0.")
    _require(len(resolved.seed) >= 1, "at least one seed is required.")
    _require(resolved.rings >= 1, f"rings must be >= 1 (got {resolved.rings}).")
    _require(resolved.jobs >= 1, f"jobs must be >= 1 (got {resolved.jobs}).")
    _require(resolved.budget >= 1, f"budget must be >= 1 (got {resolved.budget}).")
    _require(resolved.k_ref >= 1, f"k_ref must be >= 1 (got {resolved.k_ref}).")
    _require(resolved.margin >= 0, f"margin must be >= 0 (got {resolved.margin}).")
    if resolved.extent is not None:
        width, height = resolved.extent
        _require(width >= 0 and height >= 0, f"extent dimensions must be >= 0 (got {width}x{height}).")

    if command in {"feasibility", "simulate", "sweep"}:
        _require(
            all(gamma > MIN_PATH_LOSS_EXPONENT for gamma in gammas),
            f"gamma must be > {MIN_PATH_LOSS_EXPONENT:g} (got {min(gammas)}).",
        )

    if command == "schedule":
        _require_single(ks, "k", command)
    elif command == "simulate":
        for key, values in (("k", ks), ("gamma", gammas), ("f", fs), ("nodes", nodes)):
            _require_single(values, key, command)
    elif command == "sweep":
        swept = resolved.over.value
        for key, values in (("k", ks), ("gamma", gammas), ("f", fs), ("nodes", nodes)):
            if key != swept:
                _require_single(values, key, command)
    return resolved
