# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Radiation patterns of the linear signal and of the third-order
    distortion of a uniform linear array

    Copyright 2026 by the z3ro authors, GNU license
"""

from dataclasses import asdict, dataclass
from typing import Iterable, List

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

from ..channel.utils import steering_phases
from ..errors import InvalidParameter
from ..models.precoder import _weights
from ..util import linear_to_db

# default grid size
N_POINTS = 2048

# dB value of an empty pattern
FLOOR_DB = -300.0


@dataclass(frozen=True)
class PatternSample:
    """Radiated power in one direction

    Args:
        theta_tilde_rad (float): direction, radian
        linear_power (float): power of the linear signal
        distortion_power (float): power of the third-order distortion
        directivity_linear_db (float): linear directivity, dBi
        directivity_distortion_db (float): distortion directivity, dBi
    """

    theta_tilde_rad: float
    linear_power: float
    distortion_power: float
    directivity_linear_db: float
    directivity_distortion_db: float


def pattern_grid(n_points: int = N_POINTS, extra_angles_rad: Iterable = ()) -> np.ndarray:
    """uniform direction grid over [-pi, pi], plus given directions

    Args:
        n_points (int): uniform points
        extra_angles_rad (Iterable): directions to include exactly
            (e.g., the user's)

    Returns:
        np.ndarray: sorted unique directions
    """
    grid = np.linspace(-np.pi, np.pi, int(n_points))
    extra = np.asarray(list(extra_angles_rad), dtype=float)
    return np.unique(np.concatenate([grid, extra]))


def directivity(theta: np.ndarray, power: np.ndarray) -> np.ndarray:
    """normalize a pattern by its mean over the grid (trapezoidal rule)

    Returns:
        np.ndarray: linear directivity, zero for an empty pattern
    """
    if theta.size < 2:
        return np.ones_like(power)
    mean_power = trapezoid(power, theta) / (theta[-1] - theta[0])
    if mean_power <= 0:
        return np.zeros_like(power)
    return power / mean_power


def radiated_power(theta: np.ndarray, power: np.ndarray) -> float:
    """total power of a pattern over the grid (trapezoidal rule)"""
    return float(trapezoid(power, theta))


def radiation_pattern(
    w,
    pa_a3: complex,
    p: float,
    spacing_over_lambda: float,
    theta_grid,
) -> List[PatternSample]:
    """linear and third-order distortion patterns of a precoder

    .. math::

        P_{lin}(\\tilde\\theta) = p |\\sum_m w_m e^{-j\\tilde\\phi_m}|^2,
        \\quad
        P_{dist}(\\tilde\\theta) = 6 p^3 |a_3|^2
        |\\sum_m w_m |w_m|^2 e^{-j\\tilde\\phi_m}|^2

    6p^3 is E|s|^6 of circular Gaussian symbols of power p.

    Args:
        w (Precoder | array-like): precoder
        pa_a3 (complex): third-order PA coefficient
        p (float): symbol power
        spacing_over_lambda (float): antenna spacing in wavelengths
        theta_grid (array-like): sorted directions in [-pi, pi]

    Raises:
        InvalidParameter: empty, unsorted or out-of-range grid

    Returns:
        List[PatternSample]: one sample per direction
    """
    w = _weights(w)
    theta = np.asarray(theta_grid, dtype=float)
    if theta.ndim != 1 or theta.size == 0:
        raise InvalidParameter("""theta_grid must be a non-empty 1-D grid""")
    if np.any(np.diff(theta) < 0):
        raise InvalidParameter("""theta_grid must be sorted""")
    if theta[0] < -np.pi or theta[-1] > np.pi:
        raise InvalidParameter("""theta_grid must lie in [-pi, pi]""")

    # steering matrix (directions x antennas)
    phases = np.stack(
        [steering_phases(w.size, t, spacing_over_lambda) for t in theta]
    )
    steering = np.exp(-1j * phases)

    # linear and third-order patterns
    linear = p * np.abs(steering @ w) ** 2
    distortion = (
        6.0 * p**3 * np.abs(pa_a3) ** 2 * np.abs(steering @ (w * np.abs(w) ** 2)) ** 2
    )

    # directivities
    d_linear = linear_to_db(directivity(theta, linear), floor_db=FLOOR_DB)
    d_distortion = linear_to_db(directivity(theta, distortion), floor_db=FLOOR_DB)
    return [
        PatternSample(
            theta_tilde_rad=float(theta[i]),
            linear_power=float(linear[i]),
            distortion_power=float(distortion[i]),
            directivity_linear_db=float(d_linear[i]),
            directivity_distortion_db=float(d_distortion[i]),
        )
        for i in range(theta.size)
    ]


def pattern_samples_table(samples: List[PatternSample]) -> pd.DataFrame:
    """gather pattern samples in a table, one row per direction"""
    return pd.DataFrame([asdict(sample) for sample in samples])
