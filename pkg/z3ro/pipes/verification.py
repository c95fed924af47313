# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Verification suites run by the ``verify`` subcommand

    Each suite returns pass/fail rows (suite, case, passed, value,
    reference, detail). Channels are drawn from the config seed, one
    stream per case.

    Copyright 2026 by the z3ro authors, GNU license
"""

import logging
from typing import Dict, List

import numpy as np
import pandas as pd

from ..nodes.analysis.metrics import los_z3ro_ratio
from ..nodes.channel.data import iid_rayleigh, los_ula
from ..nodes.config import ExperimentConfig
from ..nodes.errors import InfeasibleChannel
from ..nodes.models.precoder import (
    array_gain,
    critical_point,
    distortion_residual,
    global_maximum,
    los_critical_point,
    real_gains,
    saturated_maximum,
    z3ro_heuristic,
)
from ..nodes.models.utils import median_gain_set
from ..nodes.util import derive_stream, linear_to_db
from ..nodes.verify.conjecture import conjecture_probe
from ..nodes.verify.hessian import hessian_check
from ..nodes.verify.oracle import brute_force_real

logger = logging.getLogger(__name__)

# tolerances
NULL_TOL = 1e-10
ORACLE_RTOL = 1e-3
LOS_TOL = 1e-9
NSD_RTOL = 1e-4

# suite sizes
NULL_CHANNELS = 200
ORACLE_CHANNELS = 50
HESSIAN_CHANNELS = 10
SNR_RATIO_SEEDS = 20
HEURISTIC_CHANNELS = 100
PROBE_CHANNELS = 2


def _row(suite: str, case: str, passed: bool, value=np.nan, reference=np.nan, detail=""):
    return {
        "suite": suite,
        "case": case,
        "passed": bool(passed),
        "value": float(value),
        "reference": float(reference),
        "detail": detail,
    }


def _rayleigh(config: ExperimentConfig, label: str, M: int):
    return iid_rayleigh(M, 1.0, derive_stream(config.seed, f"verify/{label}"))


def null_suite(config: ExperimentConfig, threads: int = 1) -> List[Dict]:
    """the zero-distortion precoders null the distortion and have unit power"""
    rows = []
    sizes = (16, 32, 64)
    for k, M in enumerate(sizes):
        n_channels = NULL_CHANNELS // len(sizes) + (k < NULL_CHANNELS % len(sizes))
        residual = {"z3ro_heuristic": 0.0, "line_search_max": 0.0, "los_critical": 0.0}
        power = dict.fromkeys(residual, 0.0)
        for i in range(n_channels):
            channel = _rayleigh(config, f"null-{M}-{i}", M)
            precoders = {
                "z3ro_heuristic": z3ro_heuristic(
                    channel, median_gain_set(channel.gains, max(1, M // 16))
                ),
                "line_search_max": global_maximum(channel),
            }
            for kind, precoder in precoders.items():
                residual[kind] = max(residual[kind], abs(distortion_residual(channel, precoder)))
                power[kind] = max(power[kind], abs(precoder.power - 1.0))
        los = los_ula(M, theta_rad=config.theta_rad)
        for M_s in range(1, M // 2):
            precoder = los_critical_point(M, M_s, phases=-los.phases)
            residual["los_critical"] = max(
                residual["los_critical"], abs(distortion_residual(los, precoder))
            )
            power["los_critical"] = max(power["los_critical"], abs(precoder.power - 1.0))
        for kind in residual:
            worst = max(residual[kind], power[kind])
            rows.append(
                _row(
                    "null",
                    f"{kind} M={M}",
                    worst < NULL_TOL,
                    worst,
                    NULL_TOL,
                    f"{n_channels} channels, max |distortion| {residual[kind]:.3g}, "
                    f"max |power-1| {power[kind]:.3g}",
                )
            )
    return rows


def oracle_suite(config: ExperimentConfig, threads: int = 1) -> List[Dict]:
    """the line-search global maximum matches the brute-force oracle"""
    rows = []

    # closed form
    result = brute_force_real(np.ones(3), grid_n=config.grid_n, n_jobs=threads)
    reference = 3 * los_z3ro_ratio(1 / 3)
    error = abs(result.best_array_gain - reference) / reference
    rows.append(
        _row("oracle", "los M=3", error <= ORACLE_RTOL, result.best_array_gain, reference)
    )

    # random channels
    for i in range(ORACLE_CHANNELS):
        M = 3 + i % 3
        r = _rayleigh(config, f"oracle-{i}", M).gains
        result = brute_force_real(r, grid_n=config.grid_n, n_jobs=threads)
        reference = array_gain(r, global_maximum(r))
        error = abs(result.best_array_gain - reference) / reference
        n_negative = int(np.sum(result.best_g < 0))
        rows.append(
            _row(
                "oracle",
                f"rayleigh-{i} M={M}",
                error <= ORACLE_RTOL and n_negative == 1,
                result.best_array_gain,
                reference,
                f"relative error {error:.2e}, {n_negative} negative gain(s)",
            )
        )
    return rows


def los_suite(config: ExperimentConfig, threads: int = 1) -> List[Dict]:
    """the line search reproduces the line-of-sight critical point"""
    rows = []
    for M in (3, 9, 33):
        channel = los_ula(M, theta_rad=config.theta_rad)
        maximum = saturated_maximum(channel, 0)
        reference = los_critical_point(M, 1, phases=-channel.phases)
        c = np.cbrt(M - 1)
        xi = ((c + 1) / (c - 1)) ** 2 - 1
        xi_error = abs(maximum.xi - xi) / xi
        w_error = np.max(np.abs(maximum.w - reference.w))
        rows.append(
            _row(
                "los",
                f"M={M}",
                xi_error <= LOS_TOL and w_error <= LOS_TOL,
                maximum.xi,
                xi,
                f"max |w - w_los| {w_error:.3g}",
            )
        )
    return rows


def hessian_suite(config: ExperimentConfig, threads: int = 1) -> List[Dict]:
    """maxima have a negative semi-definite Hessian, points with several
    negative gains have an ascent direction"""
    rows = []

    # maxima
    for i in range(HESSIAN_CHANNELS):
        channel = _rayleigh(config, f"hessian-{i}", 6)
        g = real_gains(channel, global_maximum(channel))
        summary = hessian_check(channel.gains, g)
        rows.append(
            _row(
                "hessian",
                f"maximum rayleigh-{i} M=6",
                summary.is_negative_semidefinite(NSD_RTOL),
                summary.max_eigenvalue,
                NSD_RTOL * abs(summary.min_eigenvalue),
                f"gradient norm {summary.gradient_norm:.2e}",
            )
        )

    # flat direction of the line-of-sight maximum
    los = los_ula(8)
    summary = hessian_check(los.gains, real_gains(los, los_critical_point(8, 1)))
    scale = max(abs(summary.eigenvalues))
    n_flat = int(np.sum(np.abs(summary.eigenvalues) <= NSD_RTOL * scale))
    rows.append(
        _row(
            "hessian",
            "los M=8 M_s=1",
            summary.is_negative_semidefinite(NSD_RTOL) and n_flat >= 1,
            summary.max_eigenvalue,
            NSD_RTOL * abs(summary.min_eigenvalue),
            f"{n_flat} flat direction(s)",
        )
    )

    # two negative gains
    summary = hessian_check(los.gains, real_gains(los, los_critical_point(8, 2)))
    rows.append(
        _row(
            "hessian",
            "los M=8 M_s=2",
            summary.has_ascent_direction(NSD_RTOL),
            summary.max_eigenvalue,
            0.0,
            "expects a positive eigenvalue",
        )
    )
    for i in range(HESSIAN_CHANNELS):
        channel = _rayleigh(config, f"saddle-{i}", 8)
        point = critical_point(channel, (0, 1))
        if point is None:
            rows.append(_row("hessian", f"saddle rayleigh-{i} M=8", True, detail="no critical point"))
            continue
        summary = hessian_check(channel.gains, real_gains(channel, point))
        rows.append(
            _row(
                "hessian",
                f"saddle rayleigh-{i} M=8",
                summary.has_ascent_direction(NSD_RTOL),
                summary.max_eigenvalue,
                0.0,
                "expects a positive eigenvalue",
            )
        )
    return rows


def statistics_suite(config: ExperimentConfig, threads: int = 1) -> List[Dict]:
    """Rayleigh statistics of the heuristic precoder"""
    rows = []

    # array gain over Rayleigh channels vs the line-of-sight formula
    M, M_s = 1024, 16
    ratios = []
    for i in range(SNR_RATIO_SEEDS):
        channel = _rayleigh(config, f"snr-ratio-{i}", M)
        precoder = z3ro_heuristic(channel, range(M_s))
        ratios.append(array_gain(channel, precoder) / (M * los_z3ro_ratio(M_s / M)))
    mean_ratio = float(np.mean(ratios))
    rows.append(
        _row(
            "statistics",
            f"rayleigh vs los snr M={M} M_s={M_s}",
            0.95 <= mean_ratio <= 1.05,
            mean_ratio,
            1.0,
        )
    )

    # heuristic vs global maximum
    penalties = []
    for i in range(HEURISTIC_CHANNELS):
        channel = _rayleigh(config, f"heuristic-{i}", 64)
        try:
            best = array_gain(channel, global_maximum(channel, n_jobs=threads))
        except InfeasibleChannel:
            logger.warning("Skipping infeasible channel %s", i)
            continue
        heuristic = z3ro_heuristic(channel, median_gain_set(channel.gains, 1))
        penalties.append(linear_to_db(best / array_gain(channel, heuristic)))
    median = float(np.median(penalties))
    rows.append(
        _row(
            "statistics",
            "heuristic penalty M=64",
            median <= 0.5,
            median,
            0.5,
            f"median over {len(penalties)} channels, dB",
        )
    )
    return rows


def probe_suite(config: ExperimentConfig, threads: int = 1) -> List[Dict]:
    """complex gains vs the best real gains; reported, never failed"""
    rows = []
    channels = {"los M=4": los_ula(4).gains}
    for i in range(PROBE_CHANNELS):
        channels[f"rayleigh-{i} M=4"] = _rayleigh(config, f"probe-{i}", 4).gains
    for case, r in channels.items():
        report = conjecture_probe(
            r, config.n_restarts, derive_stream(config.seed, f"verify/probe-starts-{case}")
        )
        if report.empty:
            rows.append(_row("probe", case, True, detail="no restarts"))
            continue
        rows.append(
            _row(
                "probe",
                case,
                True,
                report.best_complex_gain,
                report.best_real_gain,
                f"gap {report.gap:.2e}, imaginary residual {report.imag_residual:.2e}",
            )
        )
    return rows


SUITES = (
    null_suite,
    oracle_suite,
    los_suite,
    hessian_suite,
    statistics_suite,
    probe_suite,
)


def verify_table(config: ExperimentConfig, threads: int = 1) -> pd.DataFrame:
    """run every verification suite

    Args:
        config (ExperimentConfig): seed, theta_deg, grid_n and n_restarts
            are used
        threads (int): threads of the oracle and the line searches

    Returns:
        pd.DataFrame: suite, case, passed, value, reference, detail
    """
    rows = []
    for suite in SUITES:
        logger.info("Running %s ...", suite.__name__)
        suite_rows = suite(config, threads)
        n_failed = sum(not row["passed"] for row in suite_rows)
        if n_failed:
            logger.error("%s: %s case(s) failed", suite.__name__, n_failed)
        rows += suite_rows
    return pd.DataFrame(rows)
