# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Pipeline configuration module

    Experiments are described by a YAML file (JSON is valid YAML) whose keys
    are validated in strict mode. Command-line flags override file values.

    Copyright 2026 by the z3ro authors, GNU license
"""

import argparse
import logging
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import yaml

from .channel.data import (
    ChannelVector,
    explicit_channel,
    iid_rayleigh,
    los_ula,
    strip_inactive,
)
from .channel.utils import get_deg_to_rad
from .dataEng import read_channel_csv
from .errors import ConfigError, InvalidParameter
from .models.pa import PaModel, ThirdOrder, parse_pa
from .util import MAX_SEED, derive_stream

logger = logging.getLogger(__name__)

# experiments run by each subcommand
SUBCOMMANDS = {
    "array-gain": ("array_gain",),
    "pattern": ("pattern",),
    "compare-maxima": ("compare_maxima",),
    "sweep-backoff": ("sweep_backoff_fixed_ppa", "sweep_backoff_fixed_psat"),
    "rate": ("ergodic_rate",),
    "verify": ("verify",),
}
EXPERIMENTS = tuple(e for kinds in SUBCOMMANDS.values() for e in kinds)

# precoder labels
PRECODERS = ("mrt", "mrt_dpd", "z3ro", "line_search_max", "los_critical")
CHANNEL_KINDS = ("los", "rayleigh", "file")

# defaults that depend on the experiment
DEFAULT_GRIDS = {
    "sweep_backoff_fixed_ppa": (-10.0, 2.0, 20),
    "sweep_backoff_fixed_psat": (-10.0, 0.0, 20),
    "ergodic_rate": (-10.0, 2.0, 12),
}
DEFAULT_BUDGETS = {"sweep_backoff_fixed_psat": 29.0}
DEFAULT_PRECODERS = {
    "sweep_backoff_fixed_ppa": ("mrt", "z3ro", "mrt_dpd"),
    "sweep_backoff_fixed_psat": ("mrt", "z3ro", "mrt_dpd"),
    "ergodic_rate": ("mrt", "line_search_max", "z3ro", "mrt_dpd"),
    "pattern": ("mrt", "z3ro"),
}
DEFAULT_CHANNEL = {"compare_maxima": "rayleigh", "ergodic_rate": "rayleigh"}
DEFAULT_M_GRID = tuple(2**k for k in range(3, 13))


@dataclass(frozen=True)
class ChannelSpec:
    """How the experiment draws its channels

    Args:
        kind (str): "los", "rayleigh" or "file"
        beta (float): path loss
        path (str, optional): channel CSV (kind "file")
    """

    kind: str = "los"
    beta: float = 1.0
    path: Optional[str] = None


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one experiment

    Args:
        experiment (str): experiment kind
        figure (str): label of the figure the table is plotted for,
            the experiment kind by default
        M (int): number of antennas
        M_s (int): number of saturated antennas
        M_s_list (tuple): saturated counts compared by array-gain and
            pattern experiments, (M_s,) when empty
        M_grid (tuple): array sizes of the array-gain experiment
        saturated_set (tuple, optional): explicit saturated antennas
        channel (ChannelSpec): channel
        pa (str): PA model in the --pa grammar
        theta_deg (float): user direction in degree
        spacing_over_lambda (float): antenna spacing in wavelengths
        snr_budget_db (float): M·beta·p/sigma_v^2 in dB
        backoff_grid_db (tuple): back-offs p_PA/p_sat in dB, ascending
        precoders (tuple): precoder labels compared
        n_symbols (int): symbols per metric
        n_channels (int): channel draws
        pattern_points (int): uniform points of the pattern grid
        p (float): symbol power of the patterns
        grid_n (int): oracle points per angle
        n_restarts (int): random starts of the complex-gain probe
        seed (int): master seed
        output_path (str): CSV path
        defaulted (tuple): keys filled with defaults
    """

    experiment: str
    figure: str = ""
    M: int = 64
    M_s: int = 1
    M_s_list: Tuple[int, ...] = ()
    M_grid: Tuple[int, ...] = DEFAULT_M_GRID
    saturated_set: Optional[Tuple[int, ...]] = None
    channel: ChannelSpec = field(default_factory=ChannelSpec)
    pa: str = "rapp:S=2,psat=1"
    theta_deg: float = 90.0
    spacing_over_lambda: float = 0.5
    snr_budget_db: float = 26.0
    backoff_grid_db: Tuple[float, ...] = ()
    precoders: Tuple[str, ...] = ("mrt", "z3ro")
    n_symbols: int = 100_000
    n_channels: int = 100
    pattern_points: int = 2048
    p: float = 1.0
    grid_n: int = 64
    n_restarts: int = 20
    seed: int = 0
    output_path: str = ""
    defaulted: Tuple[str, ...] = ()

    @property
    def pa_model(self) -> PaModel:
        return parse_pa(self.pa)

    @property
    def theta_rad(self) -> float:
        return get_deg_to_rad(self.theta_deg, signed=True)

    @property
    def saturated_counts(self) -> Tuple[int, ...]:
        return self.M_s_list or (self.M_s,)

    @property
    def backoff_convention(self) -> str:
        if self.experiment == "sweep_backoff_fixed_psat":
            return "fixed_psat"
        return "fixed_ppa"

    def draw_channel(self, index: int = 0, seed: int = None, prefix: str = "") -> ChannelVector:
        """get the channel of draw `index`

        Rayleigh draws use the stream "channel-<index>" of the seed.
        Zero-gain antennas of a channel file are dropped.
        """
        return self.draw_active_channel(index, seed, prefix)[0]

    def draw_active_channel(
        self, index: int = 0, seed: int = None, prefix: str = ""
    ) -> Tuple[ChannelVector, np.ndarray]:
        """get the channel of draw `index` and the original index of each
        of its antennas

        An explicit saturated_set refers to the antennas left after the
        zero-gain ones are dropped.
        """
        seed = self.seed if seed is None else seed
        if self.channel.kind == "los":
            channel = los_ula(
                self.M, self.channel.beta, self.theta_rad, self.spacing_over_lambda
            )
        elif self.channel.kind == "rayleigh":
            channel = iid_rayleigh(
                self.M,
                self.channel.beta,
                derive_stream(seed, f"{prefix}channel-{index}"),
            )
        else:
            return strip_inactive(explicit_channel(read_channel_csv(self.channel.path)))
        return channel, np.arange(channel.M)

    def to_dict(self) -> Dict[str, Any]:
        """resolved config as plain values"""
        out = asdict(self)
        out["defaulted"] = list(self.defaulted)
        return out


def parametrize_pipe(argv: List[str] = None) -> argparse.Namespace:
    """get terminal args to parametrize the pipeline

    Args:
        argv (List[str], optional): arguments, sys.argv by default

    Returns:
        (argparse.Namespace): parsed arguments
    """
    parser = argparse.ArgumentParser(
        description="This runs the precoder experiments."
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command, kinds in SUBCOMMANDS.items():
        sub = subparsers.add_parser(command, help=f"run {' or '.join(kinds)}")
        sub.add_argument("--config", type=str, help="experiment YAML/JSON file")
        sub.add_argument("--seed", type=int, help="master seed")
        sub.add_argument("--out", type=str, help="output CSV path")
        sub.add_argument(
            "--threads", type=int, default=1, help="worker threads (no effect on results)"
        )
        sub.add_argument("--M", type=int, help="number of antennas")
        sub.add_argument("--Ms", type=int, help="number of saturated antennas")
        sub.add_argument("--pa", type=str, help="e.g. rapp:S=2,psat=1")
        sub.add_argument("--theta", type=float, help="user direction, degree")
        sub.add_argument("--n-symbols", type=int, help="symbols per metric")
        sub.add_argument("--n-channels", type=int, help="channel draws")
        sub.add_argument("--channel-file", type=str, help="channel CSV (index,re,im)")
        if len(kinds) > 1:
            sub.add_argument(
                "--experiment", choices=kinds, help=f"experiment variant, default {kinds[0]}"
            )
    return parser.parse_args(argv)


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    """map command-line flags onto config keys"""
    flags = {
        "seed": "seed",
        "out": "output_path",
        "M": "M",
        "Ms": "M_s",
        "pa": "pa",
        "theta": "theta_deg",
        "n_symbols": "n_symbols",
        "n_channels": "n_channels",
    }
    overrides = {
        key: getattr(args, flag)
        for flag, key in flags.items()
        if getattr(args, flag, None) is not None
    }
    if getattr(args, "channel_file", None):
        overrides["channel"] = {"kind": "file", "path": args.channel_file}
    if getattr(args, "experiment", None):
        overrides["experiment"] = args.experiment
    return overrides


def _check_int(errors, path, value, low=None, high=None):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        errors.append((path, f"must be an integer, got {value!r}"))
        return False
    if low is not None and value < low:
        errors.append((path, f"must be >= {low}, got {value}"))
        return False
    if high is not None and value > high:
        errors.append((path, f"must be <= {high}, got {value}"))
        return False
    return True


def _check_real(errors, path, value, low=None, strict=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
        errors.append((path, f"must be a finite number, got {value!r}"))
        return False
    if low is not None and (value <= low if strict else value < low):
        errors.append((path, f"must be {'>' if strict else '>='} {low}, got {value}"))
        return False
    return True


def _check_int_list(errors, path, values, low=1):
    if not isinstance(values, (list, tuple)) or not values:
        errors.append((path, "must be a non-empty list"))
        return
    for i, value in enumerate(values):
        _check_int(errors, f"{path}[{i}]", value, low=low)


def _check_channel(errors, raw) -> Optional[ChannelSpec]:
    if not isinstance(raw, dict):
        errors.append(("channel", "must be a mapping"))
        return None
    unknown = sorted(set(raw) - {"kind", "beta", "path"})
    for key in unknown:
        errors.append((f"channel.{key}", "unknown key"))
    spec = ChannelSpec(
        kind=raw.get("kind", "los"), beta=raw.get("beta", 1.0), path=raw.get("path")
    )
    if spec.kind not in CHANNEL_KINDS:
        errors.append(("channel.kind", f"must be one of {list(CHANNEL_KINDS)}"))
    _check_real(errors, "channel.beta", spec.beta, low=0.0)
    if spec.kind == "file" and not spec.path:
        errors.append(("channel.path", "required when channel.kind is file"))
    if unknown:
        return None
    return replace(spec, beta=float(spec.beta)) if isinstance(spec.beta, (int, float)) else spec


def validate(
    config_text: str, overrides: Dict[str, Any] = None, command: str = None
) -> ExperimentConfig:
    """parse and range-check an experiment config

    Args:
        config_text (str): YAML (or JSON) text, may be empty when the
            overrides name the experiment
        overrides (Dict[str, Any], optional): values replacing the file's
        command (str, optional): CLI subcommand; it sets the experiment
            when the config has none and must run the config's

    Usage:
        .. code-block:: python

            from z3ro.nodes.config import validate
            config = validate("experiment: array_gain\\nM_s: 1\\n")
            config.seed

            # Out: 0 (defaulted)

    Raises:
        ConfigError: every violation as (path, reason)

    Returns:
        ExperimentConfig: the resolved config
    """
    # parse
    try:
        raw = yaml.safe_load(config_text) if config_text else {}
    except yaml.YAMLError as error:
        raise ConfigError([("<config>", f"not valid YAML/JSON: {error}")]) from error
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError([("<config>", "top level must be a mapping")])
    overrides = dict(overrides or {})
    if isinstance(raw.get("channel"), dict) and isinstance(overrides.get("channel"), dict):
        overrides["channel"] = {**raw["channel"], **overrides["channel"]}
    raw = {**raw, **overrides}

    # reject unknown keys
    errors: List[Tuple[str, str]] = []
    known = {f for f in ExperimentConfig.__dataclass_fields__ if f != "defaulted"}
    for key in sorted(set(raw) - known):
        errors.append((key, "unknown key"))

    # experiment
    if command is not None:
        raw.setdefault("experiment", SUBCOMMANDS[command][0])
        if raw["experiment"] not in SUBCOMMANDS[command]:
            errors.append(
                ("experiment", f"{raw['experiment']!r} is not run by the {command} subcommand")
            )
            raise ConfigError(errors)
    experiment = raw.get("experiment")
    if experiment not in EXPERIMENTS:
        errors.append(("experiment", f"must be one of {list(EXPERIMENTS)}"))
        raise ConfigError(errors)

    # fill defaults that depend on the experiment
    defaults = {
        "backoff_grid_db": tuple(
            float(x) for x in np.linspace(*DEFAULT_GRIDS.get(experiment, (-10.0, 2.0, 20)))
        ),
        "snr_budget_db": DEFAULT_BUDGETS.get(experiment, 26.0),
        "precoders": DEFAULT_PRECODERS.get(experiment, ("mrt", "z3ro")),
        "channel": {"kind": DEFAULT_CHANNEL.get(experiment, "los")},
    }
    if experiment == "pattern":
        defaults.update(M=32, theta_deg=80.0, pa="third-order:a3=-0.05")
    defaulted = tuple(
        sorted(
            k
            for k in known
            if k not in raw
            and k not in ("experiment", "figure", "output_path")
        )
    )
    for key, value in defaults.items():
        raw.setdefault(key, value)
    if not raw.get("output_path"):
        raw["output_path"] = f"results/{experiment}.csv"
    if raw.get("figure") is None:
        raw["figure"] = experiment
    elif not isinstance(raw["figure"], str) or not raw["figure"]:
        errors.append(("figure", "must be a non-empty string"))

    # channel
    channel = _check_channel(errors, raw.get("channel", {}))

    # counts
    _check_int(errors, "M", raw.get("M", 64), low=1)
    _check_int(errors, "M_s", raw.get("M_s", 1), low=1)
    if "M_s_list" in raw:
        _check_int_list(errors, "M_s_list", raw["M_s_list"])
    if "M_grid" in raw:
        _check_int_list(errors, "M_grid", raw["M_grid"], low=2)
    for key, low in (
        ("n_symbols", 1000),
        ("n_channels", 10),
        ("pattern_points", 2),
        ("n_restarts", 0),
    ):
        if key in raw:
            _check_int(errors, key, raw[key], low=low)
    if "grid_n" in raw:
        _check_int(errors, "grid_n", raw["grid_n"], low=64, high=512)
    if "seed" in raw:
        _check_int(errors, "seed", raw["seed"], low=0, high=MAX_SEED)

    # saturated antennas
    M, M_s = raw.get("M", 64), raw.get("M_s", 1)
    counts = raw.get("M_s_list") or [M_s]
    numeric = all(
        isinstance(v, int) and not isinstance(v, bool) for v in [M, *counts]
    ) if isinstance(counts, (list, tuple)) else False
    if numeric and experiment not in ("array_gain", "verify"):
        for i, count in enumerate(counts):
            if not 0 < count < M / 2:
                path = "M_s" if "M_s_list" not in raw else f"M_s_list[{i}]"
                errors.append((path, "saturated set must satisfy 0 < M_s < M/2"))
    if raw.get("saturated_set") is not None:
        values = raw["saturated_set"]
        _check_int_list(errors, "saturated_set", values, low=0)
        if isinstance(values, (list, tuple)) and values:
            if len(values) != M_s:
                errors.append(("saturated_set", f"must list M_s={M_s} antennas"))
            if len(set(values)) != len(values):
                errors.append(("saturated_set", "duplicated antennas"))
            if any(isinstance(v, int) and v >= M for v in values):
                errors.append(("saturated_set", f"indices must be < M={M}"))

    # reals
    _check_real(errors, "theta_deg", raw.get("theta_deg", 90.0))
    _check_real(errors, "spacing_over_lambda", raw.get("spacing_over_lambda", 0.5), low=0.0, strict=True)
    _check_real(errors, "snr_budget_db", raw["snr_budget_db"])
    _check_real(errors, "p", raw.get("p", 1.0), low=0.0, strict=True)

    # back-off grid
    grid = raw["backoff_grid_db"]
    if not isinstance(grid, (list, tuple)) or not grid:
        errors.append(("backoff_grid_db", "must be a non-empty list"))
    else:
        for i, value in enumerate(grid):
            _check_real(errors, f"backoff_grid_db[{i}]", value)
        if all(isinstance(v, (int, float)) for v in grid) and np.any(np.diff(grid) <= 0):
            errors.append(("backoff_grid_db", "must be sorted ascending"))

    # precoders
    precoders = raw["precoders"]
    if not isinstance(precoders, (list, tuple)) or not precoders:
        errors.append(("precoders", "must be a non-empty list"))
    else:
        for i, label in enumerate(precoders):
            if label not in PRECODERS:
                errors.append((f"precoders[{i}]", f"must be one of {list(PRECODERS)}"))

    # PA
    try:
        pa = parse_pa(raw.get("pa", "rapp:S=2,psat=1"))
        if experiment == "pattern" and not isinstance(pa, ThirdOrder):
            errors.append(("pa", "pattern needs a third-order PA (third-order:a3=...)"))
    except InvalidParameter as error:
        errors.append(("pa", str(error)))

    if errors:
        raise ConfigError(errors)

    # build
    values = {k: v for k, v in raw.items() if k in known}
    for key in ("M_s_list", "M_grid", "saturated_set", "precoders"):
        if values.get(key) is not None:
            values[key] = tuple(values[key])
    values["backoff_grid_db"] = tuple(float(x) for x in values["backoff_grid_db"])
    values["channel"] = channel
    config = ExperimentConfig(**values, defaulted=defaulted)
    if defaulted:
        logger.warning("Using defaults for %s", ", ".join(defaulted))
    return config


def load_config(
    path: Optional[str], overrides: Dict[str, Any] = None, command: str = None
) -> ExperimentConfig:
    """read and validate a config file

    Args:
        path (str, optional): YAML/JSON file, none to use the overrides only
        overrides (Dict[str, Any], optional): values replacing the file's
        command (str, optional): CLI subcommand

    Returns:
        ExperimentConfig: the resolved config
    """
    text = ""
    if path:
        try:
            with open(path, "r", encoding="utf8") as f:
                text = f.read()
        except OSError as error:
            raise ConfigError([("--config", f"cannot read {path}: {error}")]) from error
    return validate(text, overrides, command)
