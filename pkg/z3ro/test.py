# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    The unit-testing module

    usage:

    .. highlight:: python
    .. code-block:: python

        pytest z3ro/test.py

    Copyright 2026 by the z3ro authors, GNU license
"""

import logging
import os

import numpy as np
import pandas as pd
import pytest
from scipy.integrate import trapezoid

from .nodes.analysis.metrics import (
    SDR_SENTINEL,
    array_gain_penalty_db,
    bussgang_metrics,
    ergodic_rate,
    los_z3ro_ratio,
    metrics_from_samples,
    operating_point,
    snr_closed_form_mrt,
    snr_closed_form_z3ro_los,
)
from .nodes.analysis.pattern import (
    directivity,
    pattern_grid,
    radiated_power,
    radiation_pattern,
)
from .nodes.channel.data import (
    explicit_channel,
    iid_rayleigh,
    los_ula,
    strip_inactive,
)
from .nodes.channel.utils import get_deg_to_rad, get_rad_to_deg
from .nodes.config import (
    ExperimentConfig,
    load_config,
    overrides_from_args,
    parametrize_pipe,
    validate,
)
from .nodes.dataEng import (
    read_channel_csv,
    read_precoder_csv,
    sidecar_path,
    write_channel_csv,
    write_precoder_csv,
    write_results,
)
from .nodes.errors import (
    ConfigError,
    DegenerateChannel,
    InvalidCriticalPoint,
    InvalidParameter,
    InvalidSaturatedSet,
)
from .nodes.models.pa import (
    IdealLinear,
    Rapp,
    SoftLimiter,
    ThirdOrder,
    amplify,
    amplify_vec,
    parse_pa,
)
from .nodes.models.precoder import (
    all_maxima,
    array_gain,
    build_precoder,
    critical_point,
    distortion_residual,
    global_maximum,
    los_critical_point,
    mrt,
    real_gains,
    saturated_maximum,
    xi_line_search,
    z3ro_heuristic,
)
from .nodes.models.utils import median_gain_set
from .nodes.util import RngStream, db_to_linear, derive_stream, is_all_in, linear_to_db
from .nodes.verify.conjecture import conjecture_probe
from .nodes.verify.hessian import hessian_check
from .nodes.verify.oracle import brute_force_real
from .pipes.experiments import precoder_path, run, sweep_backoff_table
from .pipes.verification import los_suite, null_suite

# shipped experiment configs
CONF_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "conf", "experiments")


def _rayleigh(label: str, M: int, seed: int = 0):
    return iid_rayleigh(M, 1.0, derive_stream(seed, label))


def array_response_is_positive(channel, precoder) -> bool:
    response = np.sum(channel.h * precoder.w)
    return abs(response.imag) < 1e-10 and response.real > 0


# core


def test_is_all_in():
    """test "is_all_in" function"""
    assert is_all_in({0, 1, 2, 3}, {0, 1, 2, 3}), "is_all_in is flawed"
    assert not is_all_in({4}, {0, 1, 2, 3}), "is_all_in is flawed"


def test_db_conversions():
    """test dB to linear conversions"""
    assert db_to_linear(26) == pytest.approx(398.107170553, rel=1e-9)
    assert linear_to_db(0.5) == pytest.approx(-3.0103, abs=1e-4)
    assert linear_to_db(0.0, floor_db=-300) == -300
    with pytest.raises(InvalidParameter):
        db_to_linear(np.inf)


def test_rng_streams_are_reproducible():
    """same (seed, label) gives the same draws, other labels differ"""
    a = derive_stream(7, "channel-0").generator().standard_normal(4)
    b = derive_stream(7, "channel-0").generator().standard_normal(4)
    c = derive_stream(7, "channel-1").generator().standard_normal(4)
    assert np.array_equal(a, b), "stream is not reproducible"
    assert not np.array_equal(a, c), "streams collide"
    with pytest.raises(InvalidParameter):
        RngStream(master_seed=-1, stream_id=0)


def test_angle_conversions():
    """test degree/radian conversions"""
    assert get_deg_to_rad(90) == pytest.approx(np.pi / 2)
    assert get_deg_to_rad(270) == pytest.approx(-np.pi / 2)
    assert get_rad_to_deg(np.pi) == pytest.approx(180)


# channel


def test_los_ula():
    """broadside LOS gains are all sqrt(beta), endfire alternate"""
    channel = los_ula(8, beta=2.0)
    assert np.allclose(channel.h, np.sqrt(2.0)), "broadside LOS channel is wrong"
    endfire = los_ula(3, theta_rad=0.0)
    assert np.allclose(endfire.h, [1, -1, 1]), "endfire LOS channel is wrong"
    with pytest.raises(InvalidParameter):
        los_ula(0)
    with pytest.raises(InvalidParameter):
        los_ula(4, spacing_over_lambda=0.0)


def test_iid_rayleigh_power():
    """Rayleigh draws have power beta"""
    channel = _rayleigh("power", 20000)
    assert np.mean(np.abs(channel.h) ** 2) == pytest.approx(1.0, abs=0.05)
    assert not channel.h.flags.writeable, "channel must be read-only"
    scaled = iid_rayleigh(20000, 4.0, derive_stream(0, "power"))
    assert np.allclose(scaled.h, 2.0 * channel.h), "beta must scale the power"


def test_strip_inactive():
    """zero-gain antennas are dropped with their indices"""
    channel, active = strip_inactive(explicit_channel([1.0, 0.0, 2.0j]))
    assert channel.M == 2
    assert active.tolist() == [0, 2]
    with pytest.raises(DegenerateChannel):
        strip_inactive(explicit_channel([0.0, 0.0]))


# PA models


def test_pa_models():
    """test PA transfer functions on known points"""
    assert amplify(IdealLinear(), 0.3 + 0.4j)[0] == pytest.approx(0.3 + 0.4j)
    assert amplify(ThirdOrder(a3=-0.05), 1.0)[0] == pytest.approx(0.95)
    assert abs(amplify(Rapp(S=2, p_sat=1), 1.0)[0]) == pytest.approx(0.840896, abs=1e-6)
    assert abs(amplify(SoftLimiter(p_sat=1), 2.0j)[0]) == pytest.approx(1.0)
    assert amplify(SoftLimiter(p_sat=1), 0.0)[0] == 0


def test_rapp_tends_to_soft_limiter():
    """a large smoothness S gives the soft limiter"""
    x = np.array([0.1, 0.5, 0.9, 1.5, 10.0, 1e6])
    assert np.allclose(Rapp(S=200, p_sat=1)(x), SoftLimiter(p_sat=1)(x), atol=1e-2)
    assert np.all(np.isfinite(Rapp(S=1e4, p_sat=1)(x))), "Rapp overflows"

    dense = np.linspace(0, 3, 3001)
    assert np.max(np.abs(Rapp(S=64, p_sat=1)(dense) - SoftLimiter(p_sat=1)(dense))) < 0.02
    for S in (0.5, 2, 64):
        assert np.all(np.diff(np.abs(Rapp(S=S, p_sat=1)(dense))) >= -1e-12), f"S={S} AM/AM decreases"


def test_pa_phase_equivariance():
    """rotating the input rotates the output by the same phase"""
    x = np.array([0.3, 1.2 + 0.4j, -2.0j, 0.05 - 0.7j])
    rotation = np.exp(0.7j)
    for pa in (ThirdOrder(a3=-0.05 + 0.02j), Rapp(S=2, p_sat=1), SoftLimiter(p_sat=0.5)):
        error = np.abs(amplify_vec(pa, x * rotation) - rotation * amplify_vec(pa, x))
        assert np.max(error) < 1e-12, f"{pa.describe()} is not phase equivariant"


def test_parse_pa():
    """test the --pa grammar"""
    assert parse_pa("rapp:S=2,psat=1") == Rapp(S=2, p_sat=1)
    assert parse_pa("linear") == IdealLinear()
    assert parse_pa("third-order:a3=-0.05+0.01i").a3 == pytest.approx(-0.05 + 0.01j)
    assert Rapp(S=2, p_sat=1).describe() == "rapp:S=2,psat=1"
    with pytest.raises(InvalidParameter):
        parse_pa("softlim:psat=-1")
    with pytest.raises(InvalidParameter):
        parse_pa("tube")


# precoders


def test_mrt_array_gain():
    """MRT array gain is M on a unit LOS channel"""
    channel = los_ula(64, theta_rad=get_deg_to_rad(30))
    precoder = mrt(channel)
    assert array_gain(channel, precoder) == pytest.approx(64.0)
    assert precoder.power == pytest.approx(1.0)
    assert np.allclose(mrt([3, 4j]).w, [0.6, -0.8j])
    with pytest.raises(DegenerateChannel):
        mrt([0.0, 0.0])


def test_zero_distortion_precoders_null_distortion():
    """heuristic, maxima and LOS critical points null the distortion"""
    for M in (16, 32, 64):
        for i in range(5):
            channel = _rayleigh(f"null-{M}-{i}", M)
            precoders = [
                z3ro_heuristic(channel, median_gain_set(channel.gains, 1)),
                z3ro_heuristic(channel, range(M // 4)),
                global_maximum(channel),
            ]
            for precoder in precoders:
                assert abs(distortion_residual(channel, precoder)) < 1e-10
                assert abs(precoder.power - 1.0) < 1e-10
                assert array_response_is_positive(channel, precoder)
        los = los_ula(M, theta_rad=get_deg_to_rad(60))
        precoder = los_critical_point(M, 3, phases=-los.phases)
        assert abs(distortion_residual(los, precoder)) < 1e-10


def test_saturated_set_checks():
    """saturated sets must be non-empty, below M/2 and unique"""
    channel = _rayleigh("sets", 8)
    with pytest.raises(InvalidSaturatedSet):
        z3ro_heuristic(channel, [])
    with pytest.raises(InvalidSaturatedSet):
        z3ro_heuristic(channel, [0, 1, 2, 3])
    with pytest.raises(InvalidSaturatedSet):
        z3ro_heuristic(channel, [1, 1])
    with pytest.raises(InvalidSaturatedSet):
        z3ro_heuristic(channel, [8])
    with pytest.raises(DegenerateChannel):
        z3ro_heuristic([1.0, 0.0, 1.0, 1.0, 1.0], [0])


def test_los_critical_point():
    """LOS critical point matches the closed-form array gain"""
    precoder = los_critical_point(64, 1)
    assert array_gain(np.ones(64), precoder) == pytest.approx(64 * 0.690436, rel=1e-6)
    assert precoder.saturated_set == (0,)
    assert real_gains(np.ones(64), precoder)[0] < 0
    assert array_gain(np.ones(2), los_critical_point(2, 1)) == pytest.approx(0.0, abs=1e-20)
    with pytest.raises(InvalidSaturatedSet):
        los_critical_point(8, 5)


def test_xi_line_search_on_los():
    """the line search root matches the LOS reduction"""
    for M in (3, 9, 33):
        c = np.cbrt(M - 1)
        expected = ((c + 1) / (c - 1)) ** 2 - 1
        result = xi_line_search(np.ones(M), 0)
        assert result.feasible, f"M={M} should be feasible"
        assert result.xi == pytest.approx(expected, rel=1e-9)
    assert xi_line_search(np.ones(9), 0).xi == pytest.approx(8.0, rel=1e-9)
    assert not xi_line_search([100.0, 1.0, 1.0], 0).feasible, "a dominant antenna has no root"
    with pytest.raises(InvalidParameter):
        xi_line_search(np.ones(4), 4)


def test_saturated_maximum_sign_structure():
    """only the saturated antenna gets a negative real gain"""
    checked = 0
    for i in range(10):
        channel = _rayleigh(f"signs-{i}", 8)
        m = int(median_gain_set(channel.gains, 1)[0])
        point = saturated_maximum(channel, m)
        if point is None:
            continue
        negative = np.flatnonzero(real_gains(channel, point) < 0).tolist()
        assert negative == [m], f"channel {i}: negative gains at {negative}, expected [{m}]"
        checked += 1
    assert checked > 0, "no feasible maximum"


def test_null_suite_counts():
    """the null suite covers 200 Rayleigh channels"""
    rows = null_suite(ExperimentConfig(experiment="verify"))
    assert all(row["passed"] for row in rows), rows
    counted = [
        int(row["detail"].split()[0])
        for row in rows
        if row["case"].startswith("z3ro_heuristic")
    ]
    assert sum(counted) == 200


def test_saturated_maximum_reproduces_los_critical_point():
    """on LOS channels the maximum is the LOS critical point"""
    rows = los_suite(ExperimentConfig(experiment="verify"))
    assert all(row["passed"] for row in rows), rows


def test_critical_point_with_two_negative_gains():
    """two negative gains on LOS give the LOS critical point with M_s = 2"""
    channel = los_ula(8)
    point = critical_point(channel, (0, 1))
    reference = los_critical_point(8, 2, phases=-channel.phases)
    assert point is not None
    assert np.max(np.abs(point.w - reference.w)) < 1e-9


def test_global_maximum_beats_heuristic():
    """the global maximum has the largest array gain of all candidates"""
    for i in range(10):
        channel = _rayleigh(f"global-{i}", 32)
        best = array_gain(channel, global_maximum(channel))
        heuristic = z3ro_heuristic(channel, median_gain_set(channel.gains, 1))
        assert best >= array_gain(channel, heuristic) * (1 - 1e-12)
        for candidate in all_maxima(channel):
            if candidate is not None:
                assert best >= array_gain(channel, candidate) * (1 - 1e-12)
        assert best < array_gain(channel, mrt(channel))


def test_all_maxima_threads_agree():
    """threads do not change the maxima"""
    channel = _rayleigh("threads", 16)
    one = all_maxima(channel, n_jobs=1)
    four = all_maxima(channel, n_jobs=4)
    for a, b in zip(one, four):
        assert (a is None) == (b is None)
        if a is not None:
            assert np.array_equal(a.w, b.w)


def test_build_precoder_labels():
    """test the precoder labels of the experiments"""
    channel = explicit_channel(np.ones(16))
    assert build_precoder("mrt", channel).kind == "mrt"
    assert build_precoder("z3ro", channel, M_s=2).saturated_set == (0, 1)
    assert build_precoder("los_critical", channel, M_s=2).kind == "los_critical"
    assert build_precoder("line_search_max", channel).kind == "line_search_max"
    with pytest.raises(InvalidParameter):
        build_precoder("zf", channel)


# analysis


def test_closed_form_array_gain():
    """M=64, M_s=1: MRT 18.06 dB, Z3RO 16.45 dB"""
    assert linear_to_db(snr_closed_form_mrt(64, 1, 1, 1)) == pytest.approx(18.06, abs=0.01)
    snr = snr_closed_form_z3ro_los(64, 1, 1.0, 1.0, 1.0)
    assert linear_to_db(snr) == pytest.approx(16.45, abs=0.01)
    assert array_gain_penalty_db(64, 1) == pytest.approx(1.61, abs=0.01)
    assert snr_closed_form_z3ro_los(2, 1, 1.0, 1.0, 1.0) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(InvalidParameter):
        snr_closed_form_z3ro_los(8, 5, 1.0, 1.0, 1.0)


def test_penalty_vanishes():
    """the penalty decreases with M and vanishes"""
    penalties = [array_gain_penalty_db(M, 1) for M in 2 ** np.arange(3, 13)]
    assert np.all(np.diff(penalties) < 0), "penalty is not decreasing"
    assert penalties[-1] == pytest.approx(0.2984, abs=0.005)
    assert array_gain_penalty_db(10**6, 1) == pytest.approx(0.0441, abs=0.002)
    assert los_z3ro_ratio(0.5) == pytest.approx(0.0, abs=1e-15)


def test_bussgang_with_linear_pa():
    """a linear PA has no distortion and G is the array response"""
    channel = los_ula(64)
    precoder = mrt(channel)
    metrics = bussgang_metrics(
        channel, precoder, IdealLinear(), p=1.0, sigma_v2=1.0,
        n_symbols=10_000, rng=derive_stream(0, "linear"),
    )
    assert metrics.sdr == SDR_SENTINEL
    assert metrics.snr == pytest.approx(64.0, rel=1e-9)
    assert metrics.sndr == pytest.approx(metrics.snr, rel=1e-9)
    with pytest.raises(InvalidParameter):
        bussgang_metrics(channel, precoder, IdealLinear(), 1.0, 1.0, 10, derive_stream(0, "x"))


def _distorting_link(n_symbols: int, rng):
    channel = los_ula(16)
    return bussgang_metrics(
        channel, mrt(channel), Rapp(S=2, p_sat=1 / 16), p=1.0,
        sigma_v2=16 / db_to_linear(26), n_symbols=n_symbols, rng=rng,
    )


def test_bussgang_sndr_identity():
    """1/SNDR = 1/SNR + 1/SDR on a distorting link"""
    metrics = _distorting_link(10_000, derive_stream(0, "sndr"))
    assert metrics.sdr < SDR_SENTINEL, "the Rapp PA should distort"
    assert 1 / metrics.sndr == pytest.approx(1 / metrics.snr + 1 / metrics.sdr, rel=1e-12)


def test_bussgang_gain_standard_error():
    """doubling the symbols divides the spread of G by about sqrt(2)"""
    spread = {
        n: np.std(
            [
                _distorting_link(n, derive_stream(seed, f"se-{n}")).bussgang_gain_G
                for seed in range(100)
            ]
        )
        for n in (2000, 4000)
    }
    ratio = spread[4000] / spread[2000]
    assert 0.5 < ratio < 0.95, f"spread ratio {ratio:.3f} is far from 1/sqrt(2)"


def test_bussgang_gain_absorbs_constant_envelope():
    """a constant-envelope nonlinearity only scales G"""
    s = np.exp(1j * np.linspace(0, 2 * np.pi, 4000, endpoint=False)) * np.sqrt(2.0)
    r = 0.5 * s + 0.1 * s * np.abs(s) ** 2
    metrics = metrics_from_samples(s, r, p=2.0, sigma_v2=1.0)
    assert metrics.bussgang_gain_G == pytest.approx(0.7, abs=1e-12)
    assert metrics.distortion_power == pytest.approx(0.0, abs=1e-12)


def test_operating_points():
    """test the two back-off conventions"""
    p, sigma_v2, pa = operating_point(64, 1.0, Rapp(), 26, 0.0, "fixed_ppa")
    assert p == 1.0
    assert sigma_v2 == pytest.approx(64 / 398.107170553)
    assert pa.p_sat == pytest.approx(1 / 64)
    p, sigma_v2, pa = operating_point(64, 1.0, Rapp(p_sat=1.0), 29, -3.0, "fixed_psat")
    assert p == pytest.approx(64 * db_to_linear(-3.0))
    assert pa.p_sat == 1.0
    with pytest.raises(InvalidParameter):
        operating_point(64, 1.0, Rapp(), 26, 0.0, "other")


def _sweep_config(**values):
    text = "experiment: sweep_backoff_fixed_ppa\n"
    return validate(text, values)


def test_sweep_saturation_gap():
    """Z3RO beats MRT by about 2 dB at -2.4 dB back-off and loses in the
    linear regime"""
    config = _sweep_config(M=64, M_s=4, precoders=["mrt", "z3ro"], n_symbols=100_000)
    table = sweep_backoff_table(config)
    mrt_rows = table[table.precoder == "mrt"].reset_index(drop=True)
    z3ro_rows = table[table.precoder == "z3ro"].reset_index(drop=True)
    point = int(np.argmin(np.abs(mrt_rows.x_value_db + 2.42105)))
    gap = z3ro_rows.sndr_db[point] - mrt_rows.sndr_db[point]
    assert gap == pytest.approx(2.0, abs=0.5)
    assert mrt_rows.sndr_db[0] > z3ro_rows.sndr_db[0], "MRT should win at -10 dB"

    # back-off reaching 15 dB of SNDR
    x = mrt_rows.x_value_db.to_numpy()
    x_mrt = np.interp(15.0, mrt_rows.sndr_db.to_numpy()[::-1], x[::-1])
    x_z3ro = np.interp(15.0, z3ro_rows.sndr_db.to_numpy()[::-1], x[::-1])
    assert x_z3ro - x_mrt == pytest.approx(1.5, abs=0.5)


def test_sweep_uses_common_symbols():
    """MRT and MRT with DPD coincide without clipping"""
    config = _sweep_config(
        M=16, M_s=1, precoders=["mrt", "mrt_dpd"], n_symbols=2000,
        backoff_grid_db=[-40.0, -30.0], pa="softlim:psat=1",
    )
    table = sweep_backoff_table(config)
    assert np.allclose(
        table[table.precoder == "mrt"].sndr_db.to_numpy(),
        table[table.precoder == "mrt_dpd"].sndr_db.to_numpy(),
    )


def test_fixed_psat_sweep_runs():
    """the fixed-p_sat sweep gives finite metrics in order"""
    config = validate(
        "experiment: sweep_backoff_fixed_psat\nM: 16\nM_s: 1\nn_symbols: 2000\n"
    )
    table = sweep_backoff_table(config)
    assert len(table) == 3 * len(config.backoff_grid_db)
    assert np.all(np.diff(table.x_value_db.to_numpy()) >= 0), "rows are not in grid order"
    assert np.all(np.isfinite(table.sndr_db))


def test_backoff_monotonicity_fixed_psat():
    """with p_sat fixed, less back-off raises SNR and lowers SDR"""
    config = validate(
        "experiment: sweep_backoff_fixed_psat\n", {"M": 64, "M_s": 4, "n_symbols": 20_000}
    )
    table = sweep_backoff_table(config)
    for label, rows in table.groupby("precoder"):
        assert np.all(np.diff(rows.snr_db.to_numpy()) >= -1e-9), f"{label}: SNR decreases"
        assert np.all(np.diff(rows.sdr_db.to_numpy()) <= 1e-9), f"{label}: SDR increases"


def test_deep_saturation_rate_ordering():
    """Z3RO has a higher rate than MRT at +2 dB back-off"""
    config = validate(
        "experiment: ergodic_rate\n",
        {"M": 64, "n_symbols": 5000, "n_channels": 10, "backoff_grid_db": [-10.0, 2.0]},
    )
    assert ergodic_rate(config, "z3ro")[1] > ergodic_rate(config, "mrt")[1]


def test_ergodic_rate_linear_regime():
    """MRT has the highest rate when distortion is negligible"""
    config = validate(
        "experiment: ergodic_rate\n",
        {"M": 16, "n_symbols": 2000, "n_channels": 10, "backoff_grid_db": [-20.0]},
    )
    mrt_rate = ergodic_rate(config, "mrt")
    z3ro_rate = ergodic_rate(config, "z3ro")
    dpd_rate = ergodic_rate(config, "mrt_dpd", n_jobs=2)
    assert mrt_rate.shape == (1,)
    assert mrt_rate[0] > z3ro_rate[0]
    assert dpd_rate[0] >= mrt_rate[0] - 1e-9
    with pytest.raises(InvalidParameter):
        ergodic_rate(config, "mrt", n_channels=5)


def test_rayleigh_snr_matches_los_formula():
    """heuristic SNR on Rayleigh channels averages to the LOS formula"""
    M, M_s = 1024, 16
    ratios = [
        array_gain(channel, z3ro_heuristic(channel, range(M_s)))
        / (M * los_z3ro_ratio(M_s / M))
        for channel in (_rayleigh("snr-ratio", M, seed) for seed in range(20))
    ]
    assert 0.95 <= np.mean(ratios) <= 1.05


def test_heuristic_is_near_optimal():
    """median-gain heuristic loses little against the global maximum, whose
    saturated antenna has a middle gain"""
    penalties, ranks = [], []
    for i in range(100):
        channel = _rayleigh(f"heuristic-{i}", 64)
        best = global_maximum(channel)
        heuristic = z3ro_heuristic(channel, median_gain_set(channel.gains, 1))
        penalties.append(
            linear_to_db(array_gain(channel, best) / array_gain(channel, heuristic))
        )
        ranks.append(int(np.argsort(np.argsort(channel.gains))[best.saturated_set[0]]))
    assert np.median(penalties) <= 0.5
    assert 16 <= np.median(ranks) <= 48


# patterns


def test_pattern_nulls_distortion_at_user():
    """MRT distortion points at the user, Z3RO nulls it there"""
    M, theta = 32, get_deg_to_rad(80)
    channel = los_ula(M, theta_rad=theta)
    grid = pattern_grid(2048, [theta])
    user = int(np.argmin(np.abs(grid - theta)))

    mrt_pattern = radiation_pattern(mrt(channel), -0.05, 1.0, 0.5, grid)
    distortion = np.array([s.distortion_power for s in mrt_pattern])
    peak = grid[int(np.argmax(distortion))]
    assert abs(np.cos(peak) - np.cos(theta)) < 1e-9, "MRT distortion should point at the user"

    for M_s in (1, 8):
        z3ro = los_critical_point(M, M_s, phases=-channel.phases)
        pattern = radiation_pattern(z3ro, -0.05, 1.0, 0.5, grid)
        d = np.array([s.directivity_distortion_db for s in pattern])
        assert d[user] <= d.max() - 80

    def total(M_s):
        z3ro = los_critical_point(M, M_s, phases=-channel.phases)
        power = [s.distortion_power for s in radiation_pattern(z3ro, -0.05, 1.0, 0.5, grid)]
        return radiated_power(grid, np.array(power))

    assert total(8) < total(1), "more saturated antennas should radiate less distortion"


def test_isotropic_single_antenna_pattern():
    """one antenna radiates 0 dBi in every direction"""
    pattern = radiation_pattern(mrt(explicit_channel([1.0])), -0.05, 1.0, 0.5, pattern_grid(256))
    for sample in pattern:
        assert sample.directivity_linear_db == pytest.approx(0.0, abs=1e-9)
        assert sample.directivity_distortion_db == pytest.approx(0.0, abs=1e-9)


def test_directivity_and_grid_checks():
    """directivity averages to one, bad grids are rejected"""
    grid = pattern_grid(512)
    power = 1.0 + np.cos(grid) ** 2
    d = directivity(grid, power)
    assert trapezoid(d, grid) / (grid[-1] - grid[0]) == pytest.approx(1.0)
    assert np.all(directivity(grid, np.zeros_like(grid)) == 0)
    with pytest.raises(InvalidParameter):
        radiation_pattern(np.ones(4) / 2, -0.05, 1.0, 0.5, grid[::-1])
    with pytest.raises(InvalidParameter):
        radiation_pattern(np.ones(4) / 2, -0.05, 1.0, 0.5, [])


# verification


def test_oracle_on_los():
    """oracle matches the closed form for M=3"""
    result = brute_force_real([1.0, 1.0, 1.0], grid_n=64)
    assert result.best_array_gain == pytest.approx(3 * los_z3ro_ratio(1 / 3), rel=1e-3)
    assert result.best_array_gain == pytest.approx(0.1527, abs=1e-3)
    assert np.sum(result.best_g < 0) == 1
    assert result.grid_points_evaluated == 64
    with pytest.raises(InvalidParameter):
        brute_force_real(np.ones(6))


def test_oracle_matches_global_maximum():
    """oracle and line search agree, the oracle point has one negative gain"""
    for M in (3, 4, 5):
        for i in range(3):
            r = _rayleigh(f"oracle-{M}-{i}", M).gains
            result = brute_force_real(r, grid_n=64, n_jobs=2)
            best = array_gain(r, global_maximum(r))
            assert result.best_array_gain == pytest.approx(best, rel=1e-3)
            assert np.sum(result.best_g < 0) == 1
            assert abs(np.sum(r * result.best_g**3)) < 1e-9
    assert brute_force_real([1.0, 2.0, 3.0]).best_array_gain == pytest.approx(
        array_gain([1.0, 2.0, 3.0], global_maximum([1.0, 2.0, 3.0])), rel=1e-3
    )


def test_hessian_at_maxima():
    """maxima are negative semi-definite, two negative gains are not maxima"""
    for i in range(5):
        channel = _rayleigh(f"hessian-{i}", 6)
        summary = hessian_check(channel.gains, real_gains(channel, global_maximum(channel)))
        assert summary.is_negative_semidefinite(1e-4), summary.eigenvalues
        assert summary.gradient_norm < 1e-4 * max(abs(summary.eigenvalues))
        assert summary.asymmetry <= 1e-6 * max(abs(summary.eigenvalues))

    los = los_ula(8)
    saddle = hessian_check(los.gains, real_gains(los, los_critical_point(8, 2)))
    assert saddle.has_ascent_direction(1e-4), saddle.eigenvalues

    flat = hessian_check(los.gains, real_gains(los, los_critical_point(8, 1)))
    scale = max(abs(flat.eigenvalues))
    assert np.any(np.abs(flat.eigenvalues) <= 1e-4 * scale), "no flat direction"


def test_hessian_rejects_infeasible_points():
    """points violating the constraints are rejected"""
    with pytest.raises(InvalidCriticalPoint):
        hessian_check(np.ones(4), np.ones(4) / 2)
    with pytest.raises(InvalidCriticalPoint):
        hessian_check(np.ones(4), np.ones(4))


def test_conjecture_probe():
    """complex gains do not beat the best real gains on LOS"""
    assert conjecture_probe(np.ones(4), 0, derive_stream(0, "probe")).empty
    report = conjecture_probe(np.ones(4), 10, derive_stream(0, "probe"))
    assert report.best_real_gain == pytest.approx(4 * los_z3ro_ratio(0.25))
    assert report.gap <= 1e-6


# config and outputs


def test_validate_defaults():
    """missing keys take defaults recorded in the config"""
    config = validate("experiment: array_gain\nM_s: 1\n")
    assert config.seed == 0
    assert "seed" in config.defaulted
    assert config.output_path == "results/array_gain.csv"
    assert config.figure == "array_gain", "figure defaults to the experiment kind"
    assert "figure" not in config.defaulted
    psat = validate("experiment: sweep_backoff_fixed_psat\n")
    assert psat.snr_budget_db == 29.0
    assert psat.backoff_grid_db[-1] == 0.0
    assert psat.backoff_convention == "fixed_psat"


def test_validate_errors():
    """every violation is reported with its path"""
    with pytest.raises(ConfigError) as error:
        validate("experiment: sweep_backoff_fixed_ppa\nM: 8\nM_s: 4\ncolour: red\n")
    errors = dict(error.value.errors)
    assert errors["M_s"] == "saturated set must satisfy 0 < M_s < M/2"
    assert errors["colour"] == "unknown key"

    with pytest.raises(ConfigError) as error:
        validate("experiment: ergodic_rate\npa: rapp:S=2,psat=-1\n")
    assert "pa" in dict(error.value.errors)

    with pytest.raises(ConfigError) as error:
        validate("experiment: sweep_backoff_fixed_ppa\nbackoff_grid_db: [0, -1]\n")
    assert "backoff_grid_db" in dict(error.value.errors)

    with pytest.raises(ConfigError) as error:
        validate("experiment: array_gain\nfigure: 3\n")
    assert "figure" in dict(error.value.errors)

    with pytest.raises(ConfigError):
        validate("experiment: pattern\npa: rapp:S=2,psat=1\n")
    with pytest.raises(ConfigError):
        validate("experiment: array_gain\n", command="rate")
    with pytest.raises(ConfigError):
        validate("[1, 2")


def test_parametrize_pipe():
    """flags override the config"""
    args = parametrize_pipe(["sweep-backoff", "--M", "32", "--seed", "3", "--threads", "2"])
    assert args.command == "sweep-backoff"
    assert args.threads == 2
    config = validate("", overrides_from_args(args), command=args.command)
    assert config.experiment == "sweep_backoff_fixed_ppa"
    assert (config.M, config.seed) == (32, 3)


def test_results_csv_format(tmp_path):
    """CRLF line ends and 12 significant digits"""
    path = str(tmp_path / "out" / "table.csv")
    write_results(pd.DataFrame({"experiment": ["x"], "value": [1 / 3]}), path)
    with open(path, "rb") as f:
        assert f.read() == b"experiment,value\r\nx,0.333333333333\r\n"


def test_channel_file(tmp_path):
    """channel CSV files are read back in index order"""
    path = str(tmp_path / "channel.csv")
    h = np.array([1 + 2j, -0.5j, 3.0])
    write_channel_csv(h, path)
    assert np.allclose(read_channel_csv(path), h)
    pd.DataFrame({"index": [0], "re": [1.0]}).to_csv(path, index=False)
    with pytest.raises(ConfigError):
        read_channel_csv(path)


def test_precoder_file(tmp_path):
    """precoder CSV files keep weights and saturated antennas"""
    path = str(tmp_path / "precoder.csv")
    precoder = z3ro_heuristic(_rayleigh("file", 8), [2])
    write_precoder_csv(precoder, path)
    loaded = read_precoder_csv(path)
    assert np.allclose(loaded.w, precoder.w, rtol=1e-11, atol=1e-12)
    assert loaded.saturated_set == (2,)
    assert loaded.kind == "explicit"
    with open(path, "rb") as f:
        assert f.readline() == b"index,re,im,is_saturated\r\n"
    with pytest.raises(InvalidParameter):
        write_precoder_csv(precoder, path, antennas=[0, 1, 2])


def _inactive_channel_file(tmp_path, zero: int) -> str:
    h = np.array(_rayleigh("inactive", 8).h)
    h[zero] = 0.0
    path = str(tmp_path / "inactive.csv")
    write_channel_csv(h, path)
    return path


def test_channel_file_with_inactive_antennas(tmp_path, caplog):
    """zero-gain antennas of a channel file are dropped with a warning"""
    channel_path = _inactive_channel_file(tmp_path, 1)
    config = validate(
        "experiment: sweep_backoff_fixed_ppa\n",
        {
            "M": 8,
            "channel": {"kind": "file", "path": channel_path},
            "precoders": ["mrt", "z3ro"],
            "n_symbols": 2000,
            "output_path": str(tmp_path / "sweep.csv"),
        },
    )
    with caplog.at_level(logging.WARNING):
        table = run(config)
    assert np.all(np.isfinite(table.sndr_db)), "the zero-gain antenna breaks the sweep"
    assert any("inactive" in record.getMessage() for record in caplog.records)

    config = validate(
        "experiment: compare_maxima\n",
        {
            "M": 8,
            "channel": {"kind": "file", "path": channel_path},
            "output_path": str(tmp_path / "maxima.csv"),
        },
    )
    table = run(config)
    assert 1 not in table.antenna.tolist()
    assert len(table) == 7
    written = pd.read_csv(precoder_path(config, "z3ro_heuristic"))
    assert 1 not in written["index"].tolist()


def test_run_is_deterministic_across_threads(tmp_path):
    """same config and seed give byte-identical CSVs at 1 and 8 threads"""
    outputs = []
    for threads in (1, 8):
        path = str(tmp_path / f"sweep-{threads}.csv")
        config = _sweep_config(
            M=16, M_s=1, n_symbols=2000, output_path=path, seed=11,
            precoders=["mrt", "z3ro", "mrt_dpd", "line_search_max"],
        )
        run(config, threads=threads)
        with open(path, "rb") as f:
            outputs.append(f.read())
    assert outputs[0] == outputs[1]
    assert outputs[0].startswith(b"experiment,figure,x_value_db,precoder,snr_db")
    assert b"\r\nsweep_backoff_fixed_ppa,sweep_backoff_fixed_ppa," in outputs[0]
    assert (tmp_path / "sweep-1.json").exists()
    assert sidecar_path(path).endswith("sweep-8.json")


def test_rate_is_deterministic_across_threads(tmp_path):
    """the ergodic rate table does not depend on the threads"""
    outputs = []
    for threads in (1, 8):
        path = str(tmp_path / f"rate-{threads}.csv")
        config = validate(
            "experiment: ergodic_rate\n",
            {
                "M": 16,
                "n_symbols": 2000,
                "n_channels": 10,
                "backoff_grid_db": [-5.0, 0.0],
                "output_path": path,
            },
        )
        run(config, threads=threads)
        with open(path, "rb") as f:
            outputs.append(f.read())
    assert outputs[0] == outputs[1]


def test_array_gain_experiment(tmp_path):
    """array-gain table reproduces the closed form"""
    path = str(tmp_path / "gain.csv")
    config = load_config(os.path.join(CONF_PATH, "array_gain.yml"), {"output_path": path})
    table = run(config)
    row = table[(table.M == 64) & (table.M_s == 1)].iloc[0]
    assert row.z3ro_gain_db == pytest.approx(16.45, abs=0.01)
    assert row.penalty_db == pytest.approx(1.61, abs=0.01)
    assert list(table.columns)[:2] == ["experiment", "figure"]
    assert config.figure != "array_gain", "the shipped config names its figure"
    assert set(table.figure) == {config.figure}
    with open(path, "rb") as f:
        assert f.readline().startswith(b"experiment,figure,")


def test_compare_maxima_experiment(tmp_path):
    """maxima table ranks antennas by gain, the weights are written"""
    path = str(tmp_path / "maxima.csv")
    config = validate("experiment: compare_maxima\n", {"M": 16, "output_path": path})
    table = run(config)
    assert table["rank"].tolist() == list(range(16))
    assert np.all(np.diff(table.channel_gain) >= 0)
    assert table.optimal_gain_db.max() >= table.z3ro_gain_db.max() - 1e-9
    for name in ("line_search_max", "z3ro_heuristic"):
        precoder = read_precoder_csv(precoder_path(config, name))
        residual = abs(distortion_residual(config.draw_channel(0), precoder))
        assert residual < 1e-9, f"{name} weights do not null the distortion"
