# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Brute-force oracle of the all-real zero-distortion problem for small
    arrays (3 <= M <= 5)

    The gain of antenna 0 is eliminated through the third-order constraint,

    .. math::

        g_0 = -\\left(\\sum_{m \\geq 1} \\frac{r_m}{r_0} g_m^3\\right)^{1/3}

    so the remaining gains only need a direction in R^(M-1). Directions are
    gridded in hyperspherical angles; the best cells are refined with a
    Nelder-Mead simplex.

    Copyright 2026 by the z3ro authors, GNU license
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from joblib import Parallel, delayed
from scipy.optimize import fmin

from ..errors import InvalidParameter
from ..models.utils import check_gains

logger = logging.getLogger(__name__)

# grid points evaluated at once
CHUNK_POINTS = 2**18

# candidates refined by the simplex
N_REFINE = 8


@dataclass(frozen=True)
class OracleResult:
    """Best feasible point found by the oracle

    Args:
        best_g (np.ndarray): unit-power real gains with zero third-order residual
        best_array_gain (float): (sum_m r_m g_m)^2
        grid_points_evaluated (int): number of grid directions
    """

    best_g: np.ndarray
    best_array_gain: float
    grid_points_evaluated: int


def directions(angles: np.ndarray) -> np.ndarray:
    """unit vectors of R^(k+1) from k hyperspherical angles

    Args:
        angles (np.ndarray): (n, k) angles, the last one is the azimuth

    Returns:
        np.ndarray: (n, k + 1) unit vectors
    """
    n, k = angles.shape
    u = np.ones((n, k + 1))
    for i in range(k):
        u[:, i] *= np.cos(angles[:, i])
        u[:, i + 1 :] *= np.sin(angles[:, i])[:, None]
    return u


def full_gains(r: np.ndarray, free: np.ndarray) -> np.ndarray:
    """complete free gains g_1..g_{M-1} with the eliminated g_0

    Args:
        r (np.ndarray): channel magnitudes
        free (np.ndarray): (n, M-1) gains of antennas 1..M-1

    Returns:
        np.ndarray: (n, M) gains meeting the third-order constraint
    """
    g0 = -np.cbrt(free**3 @ (r[1:] / r[0]))
    return np.column_stack([g0, free])


def objective(r: np.ndarray, g: np.ndarray) -> np.ndarray:
    """array gain (sum r g)^2 / sum g^2 of each row of g"""
    return (g @ r) ** 2 / np.sum(g**2, axis=1)


def _axes(grid_n: int, n_angles: int) -> List[np.ndarray]:
    polar = np.linspace(0.0, np.pi, grid_n)
    azimuth = np.linspace(0.0, 2 * np.pi, grid_n, endpoint=False)
    return [polar] * (n_angles - 1) + [azimuth]


def _angles_at(axes: List[np.ndarray], flat: np.ndarray) -> np.ndarray:
    index = np.unravel_index(flat, [axis.size for axis in axes])
    return np.column_stack([axis[i] for axis, i in zip(axes, index)])


def _scan_chunk(
    r: np.ndarray, axes: List[np.ndarray], start: int, stop: int
) -> Tuple[np.ndarray, np.ndarray]:
    """best grid cells of one chunk

    Returns:
        Tuple[np.ndarray, np.ndarray]: flat indices and objective values
    """
    flat = np.arange(start, stop)
    values = objective(r, full_gains(r, directions(_angles_at(axes, flat))))
    keep = min(N_REFINE, values.size)
    top = np.argpartition(-values, keep - 1)[:keep]
    return flat[top], values[top]


def brute_force_real(r, grid_n: int = 64, n_jobs: int = 1) -> OracleResult:
    """maximize the array gain over real gains by exhaustive search

    Args:
        r (array-like): channel magnitudes, 3 <= M <= 5, all > 0
        grid_n (int): points per hyperspherical angle, 64 <= grid_n <= 512
        n_jobs (int): threads; the result does not depend on it

    Usage:
        .. code-block:: python

            from z3ro.nodes.verify.oracle import brute_force_real
            brute_force_real([1.0, 1.0, 1.0]).best_array_gain

            # Out: 0.1527... (closed form for M=3, one saturated antenna)

    Raises:
        InvalidParameter: M or grid_n out of range

    Returns:
        OracleResult: the best point
    """
    r = check_gains(r)
    if not 3 <= r.size <= 5:
        raise InvalidParameter(f"""the oracle needs 3 <= M <= 5, got M={r.size}""")
    if not 64 <= int(grid_n) <= 512:
        raise InvalidParameter(f"""grid_n must be in [64, 512], got {grid_n}""")

    # grid hyperspherical angles
    axes = _axes(int(grid_n), r.size - 2)
    n_points = int(grid_n) ** (r.size - 2)
    bounds = [
        (start, min(start + CHUNK_POINTS, n_points))
        for start in range(0, n_points, CHUNK_POINTS)
    ]
    chunks = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_scan_chunk)(r, axes, start, stop) for start, stop in bounds
    )

    # rank candidates by value then by lexicographic grid index
    flat = np.concatenate([c[0] for c in chunks])
    values = np.concatenate([c[1] for c in chunks])
    order = np.lexsort((flat, -values))[:N_REFINE]
    logger.debug("Oracle grid best %.6g over %s points", values[order[0]], n_points)

    # refine the best cells
    best_g, best_value = None, -np.inf
    for angles in _angles_at(axes, flat[order]):
        refined = fmin(
            lambda a: -objective(r, full_gains(r, directions(a[None, :])))[0],
            angles,
            xtol=1e-10,
            ftol=1e-12,
            maxiter=20000,
            maxfun=40000,
            disp=False,
        )
        for candidate in (angles, refined):
            g = full_gains(r, directions(candidate[None, :]))[0]
            value = objective(r, g[None, :])[0]
            if value > best_value:
                best_g, best_value = g, value

    # normalize with a positive array response
    best_g = best_g / np.linalg.norm(best_g)
    if best_g @ r < 0:
        best_g = -best_g
    return OracleResult(
        best_g=best_g,
        best_array_gain=float((best_g @ r) ** 2),
        grid_points_evaluated=n_points,
    )
