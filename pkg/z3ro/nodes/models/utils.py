# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Line search and gain helpers of the zero-distortion precoders

    The critical points of the all-real problem

    .. math::

        \\max_g \\; (\\sum_m r_m g_m)^2 \\quad s.t. \\quad
        \\sum_m g_m^2 = 1, \\; \\sum_m r_m g_m^3 = 0

    are parametrized by one positive scalar xi and a set of antennas with a
    negative gain:

    .. math::

        g_m \\propto \\frac{-1+\\sqrt{1+r_m^2\\xi}}{r_m} \\; (m \\notin M_-),
        \\quad
        g_m \\propto -\\frac{1+\\sqrt{1+r_m^2\\xi}}{r_m} \\; (m \\in M_-)

    xi is the root of the third-order constraint written for these gains.

    Copyright 2026 by the z3ro authors, GNU license
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
from scipy.optimize import bisect

from ..errors import DegenerateChannel, InvalidParameter, InvalidSaturatedSet
from ..util import is_all_in

logger = logging.getLogger(__name__)

# line search defaults
XI_START = 1.0
XI_SPAN = 1e12
RTOL = 1e-12
MAX_ITER = 200
FEASIBLE_RESIDUAL = 1e-9


@dataclass(frozen=True)
class LineSearchResult:
    """Outcome of the line search over xi

    Args:
        xi (float): root of the constraint (nan when infeasible)
        residual (float): constraint value at xi relative to the
            negative-gain term
        iterations (int): bisection iterations
        feasible (bool): a root was bracketed and converged
    """

    xi: float
    residual: float
    iterations: int
    feasible: bool


def check_gains(r: Iterable) -> np.ndarray:
    """check channel magnitudes are finite and strictly positive

    Raises:
        InvalidParameter: empty or non-finite entries
        DegenerateChannel: zero or negative entries

    Returns:
        np.ndarray: r as a float vector
    """
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.size == 0 or not np.all(np.isfinite(r)):
        raise InvalidParameter("""channel gains must be a finite 1-D vector""")
    if np.any(r <= 0):
        raise DegenerateChannel(
            f"""antennas {np.flatnonzero(r <= 0).tolist()} have zero gain,
            strip inactive antennas first"""
        )
    return r


def check_index_set(indices: Iterable, M: int, max_size: float) -> Tuple[int, ...]:
    """check a set of antenna indices

    Args:
        indices (Iterable): antenna indices
        M (int): number of antennas
        max_size (float): the set must hold strictly fewer entries

    Raises:
        InvalidSaturatedSet: empty, too large, duplicated or out of range

    Returns:
        Tuple[int, ...]: sorted indices
    """
    indices = [int(i) for i in indices]
    if len(indices) == 0 or len(indices) >= max_size:
        raise InvalidSaturatedSet(
            f"""saturated set must satisfy 0 < M_s < M/2 (M={M}), got M_s={len(indices)}"""
        )
    if len(set(indices)) != len(indices):
        raise InvalidSaturatedSet(f"""duplicated antennas in {indices}""")
    if not is_all_in(indices, range(M)):
        raise InvalidSaturatedSet(
            f"""antenna indices {indices} out of range [0, {M})"""
        )
    return tuple(sorted(indices))


def branch_gains(r: np.ndarray, xi: float) -> Tuple[np.ndarray, np.ndarray]:
    """get the positive and negative branch gains at xi (unnormalized)

    Uses (-1 + s)/r = r·xi/(1 + s) with s = sqrt(1 + r^2 xi) to avoid the
    cancellation at small r^2 xi.

    Args:
        r (np.ndarray): channel magnitudes
        xi (float): line search variable

    Returns:
        Tuple[np.ndarray, np.ndarray]: (positive, magnitude of negative) gains
    """
    root = np.sqrt(1.0 + r**2 * xi)
    return r * xi / (1.0 + root), (1.0 + root) / r


def constraint_value(
    r: np.ndarray, negative: np.ndarray, xi: float
) -> Tuple[float, float]:
    """evaluate the third-order constraint along the critical-point curve

    Args:
        r (np.ndarray): channel magnitudes
        negative (np.ndarray): boolean mask of the negative-gain antennas
        xi (float): line search variable

    Returns:
        Tuple[float, float]: constraint value and the negative-gain term
        it is measured against
    """
    positive_gain, negative_gain = branch_gains(r, xi)
    plus = np.sum(r[~negative] * positive_gain[~negative] ** 3)
    minus = np.sum(r[negative] * negative_gain[negative] ** 3)
    return plus - minus, minus


def solve_xi(
    r: np.ndarray,
    negative: np.ndarray,
    rtol: float = RTOL,
    max_iter: int = MAX_ITER,
) -> LineSearchResult:
    """find the xi > 0 that zeroes the third-order constraint

    The constraint is negative at xi = 0 and grows like
    xi^(3/2)·(sum of r over positive antennas - sum over negative ones), so
    a root exists iff the positive antennas outweigh the negative ones.
    The bracket doubles from 1 up to 1e12/min(r)^2 before bisection.

    Args:
        r (np.ndarray): channel magnitudes (> 0)
        negative (np.ndarray): boolean mask of the negative-gain antennas
        rtol (float): relative tolerance on xi
        max_iter (int): maximum number of bisection iterations

    Returns:
        LineSearchResult: root, relative residual and feasibility
    """
    xi_max = XI_SPAN / np.min(r) ** 2

    # bracket the root
    low, high = 0.0, XI_START
    value, _ = constraint_value(r, negative, high)
    while value < 0 and high < xi_max:
        low, high = high, 2.0 * high
        value, _ = constraint_value(r, negative, high)

    # case no sign change
    if value < 0:
        logger.debug("No root below xi_max=%.3g", xi_max)
        return LineSearchResult(
            xi=float("nan"), residual=float("nan"), iterations=0, feasible=False
        )

    # case the bracket end is the root
    if value == 0:
        xi, iterations, converged = high, 0, True
    else:
        xi, info = bisect(
            lambda x: constraint_value(r, negative, x)[0],
            low,
            high,
            xtol=1e-300,
            rtol=rtol,
            maxiter=max_iter,
            full_output=True,
            disp=False,
        )
        iterations, converged = info.iterations, info.converged

    # measure the residual against the negative-gain term
    value, scale = constraint_value(r, negative, xi)
    residual = value / scale
    return LineSearchResult(
        xi=float(xi),
        residual=float(residual),
        iterations=int(iterations),
        feasible=bool(converged and abs(residual) <= FEASIBLE_RESIDUAL),
    )


def gains_at(
    r: np.ndarray, negative: np.ndarray, xi: float
) -> Tuple[np.ndarray, float]:
    """get the unit-power real gains of the critical point at xi

    Args:
        r (np.ndarray): channel magnitudes
        negative (np.ndarray): boolean mask of the negative-gain antennas
        xi (float): root of the constraint

    Returns:
        Tuple[np.ndarray, float]: real gains g with sum(g^2) = 1 and the
        normalization alpha applied to the unnormalized gains
    """
    positive_gain, negative_gain = branch_gains(r, xi)
    g = np.where(negative, -negative_gain, positive_gain)
    alpha = 1.0 / np.linalg.norm(g)
    return alpha * g, float(alpha)


def median_gain_set(r: Iterable, M_s: int) -> Tuple[int, ...]:
    """choose the M_s antennas whose gain is closest to the median gain

    Ties are broken by antenna index.

    Args:
        r (Iterable): channel magnitudes
        M_s (int): number of saturated antennas

    Returns:
        Tuple[int, ...]: sorted antenna indices
    """
    r = np.asarray(r, dtype=float)
    if not 0 < M_s <= r.size:
        raise InvalidSaturatedSet(
            f"""cannot pick {M_s} antennas out of {r.size}"""
        )
    distance = np.abs(r - np.median(r))
    order = np.argsort(distance, kind="stable")
    return tuple(sorted(int(i) for i in order[:M_s]))
