# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Experiment pipelines: each chains nodes into one result table

    Every table starts with an ``experiment`` column naming the dataset it
    reproduces. Rows are in grid order whatever the number of threads.

    Copyright 2026 by the z3ro authors, GNU license
"""

import logging
import os
from typing import Callable, Dict

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from ..nodes.analysis.metrics import (
    achievable_rate_or_nan,
    channel_link_metrics,
    channel_metrics,
    los_z3ro_ratio,
)
from ..nodes.analysis.pattern import (
    pattern_grid,
    pattern_samples_table,
    radiated_power,
    radiation_pattern,
)
from ..nodes.channel.utils import get_rad_to_deg
from ..nodes.config import ExperimentConfig
from ..nodes.dataEng import write_precoder_csv, write_results, write_sidecar
from ..nodes.models.pa import SoftLimiter
from ..nodes.models.precoder import (
    all_maxima,
    array_gain,
    best_maximum,
    build_precoder,
    z3ro_heuristic,
)
from ..nodes.models.utils import median_gain_set
from ..nodes.util import derive_stream, linear_to_db
from .verification import verify_table

logger = logging.getLogger(__name__)


def precoder_path(config: ExperimentConfig, name: str) -> str:
    """path of a precoder CSV written next to the result table"""
    return os.path.join(os.path.splitext(config.output_path)[0] + "_precoders", f"{name}.csv")


def array_gain_table(config: ExperimentConfig, threads: int = 1) -> pd.DataFrame:
    """closed-form line-of-sight array gains of MRT and Z3RO vs M

    Pairs (M, M_s) with M_s > M/2 are skipped.

    Returns:
        pd.DataFrame: M, M_s, zeta, mrt_gain_db, z3ro_gain_db, penalty_db
    """
    rows = []
    for M in config.M_grid:
        for M_s in config.saturated_counts:
            if not 0 < M_s <= M / 2:
                logger.warning("Skipping M=%s, M_s=%s (needs 0 < M_s <= M/2)", M, M_s)
                continue
            mrt_gain_db = linear_to_db(M * config.channel.beta)
            ratio = los_z3ro_ratio(M_s / M)
            rows.append(
                {
                    "M": M,
                    "M_s": M_s,
                    "zeta": M_s / M,
                    "mrt_gain_db": mrt_gain_db,
                    "z3ro_gain_db": mrt_gain_db + linear_to_db(ratio),
                    "penalty_db": -linear_to_db(ratio),
                }
            )
    return pd.DataFrame(rows)


def pattern_table(config: ExperimentConfig, threads: int = 1) -> pd.DataFrame:
    """linear and third-order distortion patterns of each precoder on a
    line-of-sight channel

    MRT does not depend on M_s and is reported once with M_s = 0.

    Returns:
        pd.DataFrame: one row per precoder, M_s and direction
    """
    channel, antennas = config.draw_active_channel(0)
    theta = pattern_grid(config.pattern_points, [config.theta_rad])
    a3 = config.pa_model.a3

    # list the precoders
    cases = []
    for label in config.precoders:
        counts = (0,) if label in ("mrt", "mrt_dpd") else config.saturated_counts
        for M_s in counts:
            cases.append((label, M_s))

    def one_case(label, M_s):
        precoder = build_precoder(
            "mrt" if label == "mrt_dpd" else label,
            channel,
            M_s=max(M_s, 1),
            saturated_set=config.saturated_set,
        )
        if precoder is None:
            logger.warning("Skipping %s (M_s=%s): no feasible precoder", label, M_s)
            return None
        write_precoder_csv(precoder, precoder_path(config, f"{label}-Ms{M_s}"), antennas)
        samples = radiation_pattern(
            precoder, a3, config.p, config.spacing_over_lambda, theta
        )
        logger.info(
            "Pattern %s (M_s=%s): total distortion power %.6g",
            label,
            M_s,
            radiated_power(theta, np.array([s.distortion_power for s in samples])),
        )
        table = pattern_samples_table(samples).drop(columns="theta_tilde_rad")
        table.insert(0, "theta_deg", get_rad_to_deg(theta))
        table.insert(0, "M_s", M_s)
        table.insert(0, "precoder", label)
        return table

    tables = Parallel(n_jobs=threads, prefer="threads")(
        delayed(one_case)(label, M_s) for label, M_s in cases
    )
    return pd.concat([t for t in tables if t is not None], ignore_index=True)


def compare_maxima_table(config: ExperimentConfig, threads: int = 1) -> pd.DataFrame:
    """array gain of the maximum and of the heuristic precoder with each
    antenna saturated, antennas ranked by channel gain

    Returns:
        pd.DataFrame: rank, antenna, channel_gain, feasible, xi,
        optimal_gain_db, z3ro_gain_db
    """
    channel, antennas = config.draw_active_channel(0)
    maxima = all_maxima(channel, n_jobs=threads)
    order = np.argsort(channel.gains, kind="stable")
    rows = []
    for rank, m in enumerate(order):
        maximum = maxima[m]
        heuristic = z3ro_heuristic(channel, [int(m)])
        rows.append(
            {
                "rank": rank,
                "antenna": int(antennas[m]),
                "channel_gain": float(channel.gains[m]),
                "feasible": maximum is not None,
                "xi": np.nan if maximum is None else maximum.xi,
                "optimal_gain_db": (
                    np.nan
                    if maximum is None
                    else linear_to_db(array_gain(channel, maximum))
                ),
                "z3ro_gain_db": linear_to_db(array_gain(channel, heuristic)),
            }
        )
    n_feasible = sum(row["feasible"] for row in rows)
    logger.info("%s of %s antennas give a feasible maximum", n_feasible, len(rows))

    # weights of the best maximum and of the median-gain heuristic
    best = best_maximum(channel, maxima)
    if best is not None:
        write_precoder_csv(best, precoder_path(config, "line_search_max"), antennas)
    heuristic = z3ro_heuristic(channel, median_gain_set(channel.gains, 1))
    write_precoder_csv(heuristic, precoder_path(config, "z3ro_heuristic"), antennas)
    return pd.DataFrame(rows)


def _sweep_pa(config: ExperimentConfig, label: str):
    if label == "mrt_dpd":
        return SoftLimiter(p_sat=getattr(config.pa_model, "p_sat", 1.0))
    return config.pa_model


def _metric_rows(x_values, label: str, snr, sdr, sndr) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "x_value_db": x_values,
            "precoder": label,
            "snr_db": linear_to_db(snr),
            "sdr_db": linear_to_db(sdr),
            "sndr_db": linear_to_db(sndr),
            "rate_bps": achievable_rate_or_nan(np.asarray(sndr, dtype=float)),
        }
    )


def _interleave(tables, n_points: int) -> pd.DataFrame:
    """order rows by grid point, then by precoder"""
    table = pd.concat(tables, ignore_index=True)
    point = np.tile(np.arange(n_points), len(tables))
    source = np.repeat(np.arange(len(tables)), n_points)
    order = np.lexsort((source, point))
    return table.iloc[order].reset_index(drop=True)


def sweep_backoff_table(config: ExperimentConfig, threads: int = 1) -> pd.DataFrame:
    """SNR, SDR and SNDR of each precoder over the back-off grid

    All precoders see the same channel and the same symbols. Infeasible
    precoders give NaN rows.

    Returns:
        pd.DataFrame: x_value_db, precoder, snr_db, sdr_db, sndr_db, rate_bps
    """
    channel = config.draw_channel(0)
    grid = np.asarray(config.backoff_grid_db, dtype=float)
    logger.info(
        "Running sweep %s over %s back-off points", config.backoff_convention, grid.size
    )

    def one_precoder(label):
        precoder = build_precoder(
            "mrt" if label == "mrt_dpd" else label,
            channel,
            M_s=config.M_s,
            saturated_set=config.saturated_set,
        )
        if precoder is None:
            nan = np.full(grid.size, np.nan)
            return _metric_rows(grid, label, nan, nan, nan)
        metrics = channel_link_metrics(
            channel,
            precoder,
            _sweep_pa(config, label),
            config.channel.beta,
            config.snr_budget_db,
            grid,
            config.n_symbols,
            derive_stream(config.seed, "symbols-0"),
            config.backoff_convention,
        )
        return _metric_rows(
            grid,
            label,
            [m.snr for m in metrics],
            [m.sdr for m in metrics],
            [m.sndr for m in metrics],
        )

    tables = Parallel(n_jobs=threads, prefer="threads")(
        delayed(one_precoder)(label) for label in config.precoders
    )
    return _interleave(tables, grid.size)


def ergodic_rate_table(config: ExperimentConfig, threads: int = 1) -> pd.DataFrame:
    """ergodic rate of each precoder over the back-off grid

    SNR, SDR and SNDR are averaged over the channel draws in linear scale;
    the rate is the mean of log2(1 + SNDR). Channels where a precoder is
    infeasible are left out and counted.

    Returns:
        pd.DataFrame: the sweep columns plus n_channels and n_infeasible
    """
    grid = np.asarray(config.backoff_grid_db, dtype=float)
    logger.info("Running ergodic rate over %s channels", config.n_channels)
    tables = []
    for label in config.precoders:
        metrics = channel_metrics(config, label, config.n_channels, n_jobs=threads)
        infeasible = np.isnan(metrics[:, 0, 0])
        n_infeasible = int(np.sum(infeasible))
        if n_infeasible:
            logger.warning("%s: %s infeasible channels", label, n_infeasible)
        if n_infeasible == config.n_channels:
            nan = np.full(grid.size, np.nan)
            table = _metric_rows(grid, label, nan, nan, nan)
        else:
            kept = metrics[~infeasible]
            table = _metric_rows(
                grid,
                label,
                kept[..., 0].mean(axis=0),
                kept[..., 1].mean(axis=0),
                kept[..., 2].mean(axis=0),
            )
            table["rate_bps"] = achievable_rate_or_nan(kept[..., 2]).mean(axis=0)
        table["n_channels"] = config.n_channels
        table["n_infeasible"] = n_infeasible
        tables.append(table)
    return _interleave(tables, grid.size)


PIPELINES: Dict[str, Callable[[ExperimentConfig, int], pd.DataFrame]] = {
    "array_gain": array_gain_table,
    "pattern": pattern_table,
    "compare_maxima": compare_maxima_table,
    "sweep_backoff_fixed_ppa": sweep_backoff_table,
    "sweep_backoff_fixed_psat": sweep_backoff_table,
    "ergodic_rate": ergodic_rate_table,
    "verify": verify_table,
}


def run(config: ExperimentConfig, threads: int = 1) -> pd.DataFrame:
    """run an experiment and write its CSV and JSON sidecar

    Args:
        config (ExperimentConfig): validated config
        threads (int): worker threads; the output does not depend on it

    Usage:
        .. code-block:: python

            from z3ro.nodes.config import validate
            from z3ro.pipes.experiments import run
            table = run(validate("experiment: array_gain\\noutput_path: out.csv\\n"))

    Returns:
        pd.DataFrame: the result table as written
    """
    logger.info("Running %s ...", config.experiment)
    table = PIPELINES[config.experiment](config, threads)
    table.insert(0, "figure", config.figure)
    table.insert(0, "experiment", config.experiment)
    write_results(table, config.output_path)
    write_sidecar(
        config.output_path,
        config.to_dict(),
        {"rows": len(table), "defaulted": list(config.defaulted)},
    )
    logger.info("Done. %s rows written to %s", len(table), config.output_path)
    return table
