# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Link metrics: closed-form SNRs, Bussgang SNR/SDR/SNDR by Monte Carlo
    and achievable/ergodic rates

    The received signal is decomposed as r = G·s + d + v, where the
    distortion d is uncorrelated with the symbol s and v is the receiver
    noise. Noise enters the metrics analytically.

    Copyright 2026 by the z3ro authors, GNU license
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from joblib import Parallel, delayed

from ..errors import InvalidParameter
from ..models.pa import PaModel, SoftLimiter
from ..models.precoder import Precoder, _matched, build_precoder
from ..util import (
    as_generator,
    complex_gaussian,
    db_to_linear,
    derive_stream,
    linear_to_db,
)

logger = logging.getLogger(__name__)

# SDR reported when the distortion is below the Monte Carlo floor (200 dB)
SDR_SENTINEL = 1e20

# symbols processed at once, times the number of antennas
CHUNK_ELEMENTS = 2**21

# minimum number of symbols per metric
MIN_SYMBOLS = 1000


def snr_closed_form_mrt(M: int, beta: float, p: float, sigma_v2: float) -> float:
    """SNR of MRT with linear PAs, M·beta·p/sigma_v^2

    Args:
        M (int): number of antennas
        beta (float): path loss
        p (float): transmit power
        sigma_v2 (float): noise power

    Returns:
        float: linear SNR
    """
    if not sigma_v2 > 0:
        raise InvalidParameter(f"""sigma_v2 must be > 0, got {sigma_v2}""")
    return float(beta * p * M / sigma_v2)


def los_z3ro_ratio(zeta) -> np.ndarray:
    """array gain of the line-of-sight Z3RO precoder relative to MRT

    .. math::

        \\frac{(\\zeta^{2/3} - (1-\\zeta)^{2/3})^2}{\\zeta^{1/3} + (1-\\zeta)^{1/3}}

    Args:
        zeta (float | np.ndarray): saturated fraction M_s/M, in (0, 1/2]

    Returns:
        float | np.ndarray: ratio in [0, 1), zero at zeta = 1/2
    """
    zeta = np.asarray(zeta, dtype=float)
    ratio = (np.cbrt(zeta) ** 2 - np.cbrt(1 - zeta) ** 2) ** 2 / (
        np.cbrt(zeta) + np.cbrt(1 - zeta)
    )
    return ratio if ratio.ndim else float(ratio)


def _check_saturated_count(M: int, M_s: int):
    if not (M >= 2 and 0 < M_s <= M / 2):
        raise InvalidParameter(
            f"""saturated set must satisfy 0 < M_s < M/2 (M={M}, M_s={M_s})"""
        )


def snr_closed_form_z3ro_los(
    M: int, M_s: int, beta: float, p: float, sigma_v2: float
) -> float:
    """SNR of the line-of-sight Z3RO precoder with M_s saturated antennas

    M_s = M/2 is accepted as the limit where the SNR vanishes.

    Args:
        M (int): number of antennas
        M_s (int): number of saturated antennas
        beta (float): path loss
        p (float): transmit power
        sigma_v2 (float): noise power

    Usage:
        .. code-block:: python

            from z3ro.nodes.analysis.metrics import snr_closed_form_z3ro_los
            snr_closed_form_z3ro_los(64, 1, 1.0, 1.0, 1.0)

            # Out: 44.18... (16.45 dB, vs 64 for MRT)

    Raises:
        InvalidParameter: M_s out of range or sigma_v2 <= 0

    Returns:
        float: linear SNR
    """
    _check_saturated_count(M, M_s)
    return snr_closed_form_mrt(M, beta, p, sigma_v2) * los_z3ro_ratio(M_s / M)


def array_gain_penalty_db(M: int, M_s: int) -> float:
    """array gain lost by the line-of-sight Z3RO precoder vs MRT, in dB"""
    _check_saturated_count(M, M_s)
    return -linear_to_db(los_z3ro_ratio(M_s / M))


@dataclass(frozen=True)
class LinkMetrics:
    """Bussgang metrics of one link

    Args:
        bussgang_gain_G (complex): linear gain G = E(r s*)/p
        signal_power (float): |G|^2 p
        distortion_power (float): E|d|^2
        noise_power (float): sigma_v^2
        snr (float): signal over noise
        sdr (float): signal over distortion (sentinel below the floor)
        sndr (float): signal over noise plus distortion
        n_symbols (int): number of symbols
        distortion_floor (float): Monte Carlo floor of the distortion power
    """

    bussgang_gain_G: complex
    signal_power: float
    distortion_power: float
    noise_power: float
    snr: float
    sdr: float
    sndr: float
    n_symbols: int
    distortion_floor: float = 0.0

    @property
    def snr_db(self) -> float:
        return linear_to_db(self.snr)

    @property
    def sdr_db(self) -> float:
        return linear_to_db(self.sdr)

    @property
    def sndr_db(self) -> float:
        return linear_to_db(self.sndr)

    @property
    def rate(self) -> float:
        return achievable_rate(self.sndr)


def received_signal(
    h: np.ndarray, w: np.ndarray, pa: PaModel, s: np.ndarray
) -> np.ndarray:
    """noiseless received signal sum_m h_m y_m(w_m s) for each symbol

    Args:
        h (np.ndarray): channel
        w (np.ndarray): precoder weights
        pa (PaModel): PA model of every antenna
        s (np.ndarray): symbols

    Returns:
        np.ndarray: received samples, one per symbol
    """
    r = np.empty(s.size, dtype=np.complex128)
    chunk = max(1, CHUNK_ELEMENTS // h.size)
    for start in range(0, s.size, chunk):
        block = s[start : start + chunk]
        r[start : start + chunk] = pa(np.outer(w, block)).T @ h
    return r


def metrics_from_samples(
    s: np.ndarray, r: np.ndarray, p: float, sigma_v2: float
) -> LinkMetrics:
    """Bussgang metrics from symbols and noiseless received samples

    G is estimated against the sample symbol power so that a linear link
    gives G exactly. Distortion powers below the Monte Carlo floor
    10·sqrt(n)·eps·E|r|^2 are reported as zero with the SDR sentinel.
    This floor replaces 10·E|r|^2/sqrt(n), which would flag any SDR above
    about 15 dB at 10^5 symbols as distortion-free.

    Args:
        s (np.ndarray): symbols
        r (np.ndarray): noiseless received samples
        p (float): symbol power
        sigma_v2 (float): noise power

    Returns:
        LinkMetrics: the metrics
    """
    n = s.size
    p_hat = np.mean(np.abs(s) ** 2)
    gain = np.mean(r * np.conj(s)) / p_hat
    received_power = np.mean(np.abs(r) ** 2)
    distortion = received_power - np.abs(gain) ** 2 * p_hat
    floor = 10.0 * np.sqrt(n) * np.finfo(float).eps * received_power

    # signal over noise
    signal_power = float(np.abs(gain) ** 2 * p)
    snr = signal_power / sigma_v2

    # signal over distortion, both measured on the drawn symbols
    if distortion <= floor:
        distortion = max(distortion, 0.0)
        sdr = SDR_SENTINEL
    else:
        sdr = min(np.abs(gain) ** 2 * p_hat / distortion, SDR_SENTINEL)
    sndr = 1.0 / (1.0 / snr + 1.0 / sdr) if snr > 0 else 0.0
    return LinkMetrics(
        bussgang_gain_G=complex(gain),
        signal_power=signal_power,
        distortion_power=float(distortion),
        noise_power=float(sigma_v2),
        snr=float(snr),
        sdr=float(sdr),
        sndr=float(sndr),
        n_symbols=int(n),
        distortion_floor=float(floor),
    )


def bussgang_metrics(
    h,
    w,
    pa: PaModel,
    p: float,
    sigma_v2: float,
    n_symbols: int,
    rng,
) -> LinkMetrics:
    """estimate SNR, SDR and SNDR at the user by Monte Carlo

    Draws s ~ CN(0, p), sends w_m·s through the PA of every antenna and
    combines the outputs through the channel.

    Args:
        h (ChannelVector | array-like): channel
        w (Precoder | array-like): precoder
        pa (PaModel): PA model
        p (float): symbol power
        sigma_v2 (float): noise power
        n_symbols (int): number of symbols, >= 1000
        rng (RngStream | np.random.Generator): random source

    Usage:
        .. code-block:: python

            from z3ro.nodes.analysis.metrics import bussgang_metrics
            from z3ro.nodes.channel.data import los_ula
            from z3ro.nodes.models.pa import Rapp
            from z3ro.nodes.models.precoder import mrt
            from z3ro.nodes.util import derive_stream

            channel = los_ula(64)
            metrics = bussgang_metrics(
                channel, mrt(channel), Rapp(S=2, p_sat=1/64),
                p=1.0, sigma_v2=64/398.1, n_symbols=100_000,
                rng=derive_stream(0, "point-0"),
            )
            metrics.sndr_db

    Raises:
        InvalidParameter: n_symbols < 1000, p <= 0 or sigma_v2 <= 0

    Returns:
        LinkMetrics: the metrics
    """
    if int(n_symbols) < MIN_SYMBOLS:
        raise InvalidParameter(
            f"""n_symbols must be >= {MIN_SYMBOLS}, got {n_symbols}"""
        )
    if not p > 0:
        raise InvalidParameter(f"""p must be > 0, got {p}""")
    if not sigma_v2 > 0:
        raise InvalidParameter(f"""sigma_v2 must be > 0, got {sigma_v2}""")
    h, w = _matched(h, w)
    s = complex_gaussian(as_generator(rng), int(n_symbols), power=p)
    return metrics_from_samples(s, received_signal(h, w, pa, s), p, sigma_v2)


def achievable_rate(sndr):
    """achievable rate log2(1 + SNDR) with Gaussian noise and distortion

    Args:
        sndr (float | np.ndarray): linear SNDR, >= 0

    Raises:
        InvalidParameter: negative SNDR

    Returns:
        float | np.ndarray: rate in bits/symbol
    """
    sndr = np.asarray(sndr, dtype=float)
    if np.any(sndr < 0):
        raise InvalidParameter("""SNDR must be >= 0""")
    rate = np.log2(1.0 + sndr)
    return rate if rate.ndim else float(rate)


# sweep conventions
FIXED_PPA = "fixed_ppa"
FIXED_PSAT = "fixed_psat"


def operating_point(
    M: int,
    beta: float,
    pa: PaModel,
    snr_budget_db: float,
    backoff_db: float,
    convention: str = FIXED_PPA,
) -> Tuple[float, float, PaModel]:
    """get the symbol power, noise power and PA of one back-off point

    The back-off is the ratio p_PA/p_sat of the per-antenna drive power
    p_PA = p/M to the PA saturation power.

    - fixed_ppa: p = 1 and sigma_v^2 = M·beta·p/budget; p_sat follows the
      back-off.
    - fixed_psat: p_sat is the PA's own; p = M·p_sat·backoff and the budget
      M·beta·p/sigma_v^2 holds at 0 dB back-off.

    Args:
        M (int): number of antennas
        beta (float): path loss
        pa (PaModel): PA model
        snr_budget_db (float): M·beta·p/sigma_v^2 in dB
        backoff_db (float): p_PA/p_sat in dB
        convention (str): "fixed_ppa" or "fixed_psat"

    Returns:
        Tuple[float, float, PaModel]: p, sigma_v^2 and the PA at this point
    """
    budget = db_to_linear(snr_budget_db)
    backoff = db_to_linear(backoff_db)
    if convention == FIXED_PPA:
        p = 1.0
        sigma_v2 = M * beta * p / budget
        return p, sigma_v2, pa.with_p_sat((p / M) / backoff)
    if convention == FIXED_PSAT:
        p_sat = getattr(pa, "p_sat", 1.0)
        p = M * p_sat * backoff
        sigma_v2 = M * beta * (M * p_sat) / budget
        return p, sigma_v2, pa
    raise InvalidParameter(f"""unknown back-off convention "{convention}" """)


def channel_link_metrics(
    channel,
    precoder: Precoder,
    pa: PaModel,
    beta: float,
    snr_budget_db: float,
    backoff_grid_db,
    n_symbols: int,
    rng,
    convention: str = FIXED_PPA,
):
    """link metrics of one precoder over a back-off grid

    The same symbols are used at every back-off point.

    Args:
        channel (ChannelVector): channel
        precoder (Precoder): precoder (the soft limiter PA models MRT with
            perfect per-antenna DPD)
        pa (PaModel): PA model
        beta (float): path loss used by the SNR budget
        snr_budget_db (float): M·beta·p/sigma_v^2 in dB
        backoff_grid_db (array-like): back-offs in dB
        n_symbols (int): number of symbols
        rng (RngStream | np.random.Generator): symbol source
        convention (str): "fixed_ppa" or "fixed_psat"

    Returns:
        List[LinkMetrics]: metrics of each back-off point
    """
    h, w = _matched(channel, precoder)
    unit = complex_gaussian(as_generator(rng), int(n_symbols), power=1.0)
    metrics = []
    for backoff_db in backoff_grid_db:
        p, sigma_v2, point_pa = operating_point(
            h.size, beta, pa, snr_budget_db, backoff_db, convention
        )
        s = unit * np.sqrt(p)
        metrics.append(
            metrics_from_samples(
                s, received_signal(h, w, point_pa, s), p, sigma_v2
            )
        )
    return metrics


def ergodic_rate(config, precoder_kind: str, n_channels: int = None, rng=None, n_jobs: int = 1):
    """ergodic achievable rate over independent channel draws

    For each channel draw, the precoder is built and its SNDR is estimated
    at every back-off point of the config; the rates log2(1 + SNDR) are
    averaged over the draws. Channels where the precoder is infeasible are
    left out of the average.

    Args:
        config (ExperimentConfig): experiment (M, channel, PA, budget, grid,
            n_symbols)
        precoder_kind (str): "mrt", "mrt_dpd", "z3ro" or "line_search_max"
        n_channels (int, optional): number of draws, config.n_channels
            by default, >= 10
        rng (RngStream, optional): stream keying the draws, the config seed
            by default
        n_jobs (int): threads; the result does not depend on it

    Returns:
        np.ndarray: ergodic rate at each back-off point, bits/symbol
    """
    n_channels = config.n_channels if n_channels is None else int(n_channels)
    if n_channels < 10:
        raise InvalidParameter(f"""n_channels must be >= 10, got {n_channels}""")
    rates = channel_rates(config, precoder_kind, n_channels, rng, n_jobs)
    if np.all(np.isnan(rates)):
        return np.full(rates.shape[1], np.nan)
    return np.nanmean(rates, axis=0)


def channel_rates(config, precoder_kind: str, n_channels: int, rng=None, n_jobs: int = 1):
    """rates of every channel draw and back-off point

    Returns:
        np.ndarray: (n_channels, n_backoffs) rates, NaN rows for
        channels where the precoder is infeasible
    """
    return achievable_rate_or_nan(
        channel_metrics(config, precoder_kind, n_channels, rng, n_jobs)[..., 2]
    )


def achievable_rate_or_nan(sndr: np.ndarray) -> np.ndarray:
    """log2(1 + SNDR) keeping NaN entries"""
    rate = np.full(sndr.shape, np.nan)
    valid = ~np.isnan(sndr)
    rate[valid] = achievable_rate(sndr[valid])
    return rate


def _one_channel_metrics(config, precoder_kind: str, index: int, seed: int, prefix: str):
    grid = np.asarray(config.backoff_grid_db, dtype=float)
    out = np.full((grid.size, 3), np.nan)
    channel = config.draw_channel(index, seed=seed, prefix=prefix)
    label = "mrt" if precoder_kind == "mrt_dpd" else precoder_kind
    precoder = build_precoder(
        label, channel, M_s=config.M_s, saturated_set=config.saturated_set
    )
    if precoder is None:
        return out
    pa = (
        SoftLimiter(p_sat=getattr(config.pa_model, "p_sat", 1.0))
        if precoder_kind == "mrt_dpd"
        else config.pa_model
    )
    metrics = channel_link_metrics(
        channel,
        precoder,
        pa,
        config.channel.beta,
        config.snr_budget_db,
        grid,
        config.n_symbols,
        derive_stream(seed, f"{prefix}symbols-{index}"),
        config.backoff_convention,
    )
    for i, m in enumerate(metrics):
        out[i] = m.snr, m.sdr, m.sndr
    return out


def channel_metrics(config, precoder_kind: str, n_channels: int, rng=None, n_jobs: int = 1):
    """linear SNR, SDR and SNDR of every channel draw and back-off point

    Draw i uses the streams "channel-i" and "symbols-i" of the seed, so
    every precoder sees the same channels and symbols.

    Args:
        config (ExperimentConfig): experiment
        precoder_kind (str): precoder label
        n_channels (int): number of draws
        rng (RngStream, optional): stream keying the draws, the config seed
            by default
        n_jobs (int): threads; the result does not depend on it

    Returns:
        np.ndarray: (n_channels, n_backoffs, 3) metrics, NaN for channels
        where the precoder is infeasible
    """
    seed = config.seed if rng is None else rng.master_seed
    prefix = "" if rng is None else f"{rng.stream_id}/"
    per_channel = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_one_channel_metrics)(config, precoder_kind, index, seed, prefix)
        for index in range(int(n_channels))
    )
    return np.stack(per_channel)
