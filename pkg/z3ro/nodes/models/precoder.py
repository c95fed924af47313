# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Linear precoders for a single-user array with nonlinear PAs

    - maximum ratio transmission (MRT)
    - the zero third-order (Z3RO) heuristic precoder
    - the line-of-sight critical points
    - the maxima of the zero-distortion problem, found by a line search

    All precoders have unit transmit power. The zero-distortion precoders
    null the third-order distortion at the user,
    sum_m h_m w_m |w_m|^2 = 0. Every precoder is rotated so that its array
    response sum_m h_m w_m is real and positive.

    Copyright 2026 by the z3ro authors, GNU license
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from ..channel.data import ChannelVector
from ..errors import (
    DegenerateChannel,
    InfeasibleChannel,
    InvalidParameter,
    InvalidSaturatedSet,
)
from ..util import as_complex_vec
from .utils import (
    LineSearchResult,
    check_gains,
    check_index_set,
    gains_at,
    median_gain_set,
    solve_xi,
)

logger = logging.getLogger(__name__)

# precoder kinds
MRT = "mrt"
Z3RO_HEURISTIC = "z3ro_heuristic"
LOS_CRITICAL = "los_critical"
LINE_SEARCH_MAX = "line_search_max"
CRITICAL_POINT = "critical_point"
EXPLICIT = "explicit"

# relative tolerance of ties between maxima
TIE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Precoder:
    """Unit-power precoding weights

    Args:
        w (np.ndarray): complex weights, sum |w_m|^2 = 1
        saturated_set (tuple): antennas with a negative real gain
        kind (str): how the weights were built
        alpha (float): normalization applied to the unnormalized gains
        xi (float, optional): line search root
        line_search (LineSearchResult, optional): line search outcome
    """

    w: np.ndarray
    saturated_set: Tuple[int, ...] = ()
    kind: str = MRT
    alpha: float = 1.0
    xi: Optional[float] = None
    line_search: Optional[LineSearchResult] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "w", as_complex_vec(self.w, "weights").copy())
        object.__setattr__(
            self, "saturated_set", tuple(sorted(int(i) for i in self.saturated_set))
        )
        self.w.setflags(write=False)

    @property
    def M(self) -> int:
        return self.w.size

    @property
    def power(self) -> float:
        """total transmit power sum |w_m|^2"""
        return float(np.sum(np.abs(self.w) ** 2))


def _channel_vector(h) -> np.ndarray:
    if isinstance(h, ChannelVector):
        return h.h
    return as_complex_vec(h, "channel")


def _weights(w) -> np.ndarray:
    if isinstance(w, Precoder):
        return w.w
    return as_complex_vec(w, "weights")


def _matched(h, w) -> Tuple[np.ndarray, np.ndarray]:
    h, w = _channel_vector(h), _weights(w)
    if h.size != w.size:
        raise InvalidParameter(
            f"""channel and weights lengths differ: {h.size} != {w.size}"""
        )
    return h, w


def align_phase(h: np.ndarray, w: np.ndarray) -> np.ndarray:
    """rotate w so that the array response sum h_m w_m is real positive

    A zero array response is left unrotated.
    """
    response = np.sum(h * w)
    if response == 0:
        return w
    return w * np.exp(-1j * np.angle(response))


def array_response(h, w) -> complex:
    """get the coherent array response sum_m h_m w_m"""
    h, w = _matched(h, w)
    return complex(np.sum(h * w))


def array_gain(h, w) -> float:
    """get the array gain |sum_m h_m w_m|^2

    Usage:
        .. code-block:: python

            from z3ro.nodes.channel.data import los_ula
            from z3ro.nodes.models.precoder import array_gain, mrt
            channel = los_ula(64)
            array_gain(channel, mrt(channel))

            # Out: 64.0 (up to rounding)
    """
    return abs(array_response(h, w)) ** 2


def distortion_residual(h, w) -> complex:
    """get the third-order distortion combined at the user,
    sum_m h_m w_m |w_m|^2

    Args:
        h (ChannelVector | array-like): channel
        w (Precoder | array-like): weights

    Raises:
        InvalidParameter: lengths differ

    Returns:
        complex: the residual, zero for the zero-distortion precoders
    """
    h, w = _matched(h, w)
    return complex(np.sum(h * w * np.abs(w) ** 2))


def real_gains(h, w) -> np.ndarray:
    """get the real gains g_m = Re(w_m e^{j arg h_m}) of a precoder that
    matches the channel phases"""
    h, w = _matched(h, w)
    return np.real(w * np.exp(1j * np.angle(h)))


def mrt(channel: ChannelVector) -> Precoder:
    """maximum ratio transmission, w_m = h_m^* / ||h||

    Args:
        channel (ChannelVector | array-like): channel

    Usage:
        .. code-block:: python

            from z3ro.nodes.models.precoder import mrt
            mrt([3, 4j]).w

            # Out: array([0.6+0.j , 0. -0.8j])

    Raises:
        DegenerateChannel: all-zero channel

    Returns:
        Precoder: MRT weights
    """
    h = _channel_vector(channel)
    norm = np.linalg.norm(h)
    if norm == 0:
        raise DegenerateChannel("""MRT is undefined on an all-zero channel""")
    return Precoder(w=np.conj(h) / norm, kind=MRT, alpha=float(1.0 / norm))


def z3ro_heuristic(channel: ChannelVector, saturated_set) -> Precoder:
    """zero third-order heuristic precoder

    The non-saturated antennas get the MRT gain r_m, the saturated ones the
    negative gain -gamma·r_m with

    .. math::

        \\gamma = \\left(\\frac{\\sum_{m \\notin M_s} r_m^4}
        {\\sum_{m \\in M_s} r_m^4}\\right)^{1/3}

    which cancels the third-order distortion at the user.

    Args:
        channel (ChannelVector | array-like): channel, no zero-gain antenna
        saturated_set (Iterable[int]): 0 < M_s < M/2 saturated antennas,
            e.g. median_gain_set(channel.gains, M_s)

    Raises:
        InvalidSaturatedSet: empty, too large or out-of-range set
        DegenerateChannel: a zero-gain antenna

    Returns:
        Precoder: unit-power heuristic weights
    """
    h = _channel_vector(channel)
    saturated = check_index_set(saturated_set, h.size, h.size / 2)
    r = check_gains(np.abs(h))

    # set gains
    mask = np.zeros(h.size, dtype=bool)
    mask[list(saturated)] = True
    gamma = np.cbrt(np.sum(r[~mask] ** 4) / np.sum(r[mask] ** 4))
    g = r * np.where(mask, -gamma, 1.0)

    # normalize
    alpha = 1.0 / np.linalg.norm(g)
    w = alpha * g * np.exp(-1j * np.angle(h))
    return Precoder(
        w=align_phase(h, w),
        saturated_set=saturated,
        kind=Z3RO_HEURISTIC,
        alpha=float(alpha),
    )


def los_critical_point(
    M: int, M_s: int, beta: float = 1.0, phases=None
) -> Precoder:
    """critical point of the zero-distortion problem on a line-of-sight
    channel with M_s saturated antennas

    The first M_s antennas get the gain -((M - M_s)/M_s)^(1/3), the others 1,
    before normalization. M_s = M/2 is the limit case where the array
    gain vanishes.

    Args:
        M (int): number of antennas
        M_s (int): number of saturated antennas, 0 < M_s <= M/2
        beta (float): path loss; it scales the array gain, not the weights
        phases (array-like, optional): LOS phases phi_m of
            h_m = sqrt(beta) e^{-j phi_m}, zero (broadside) by default

    Raises:
        InvalidSaturatedSet: M_s out of range

    Returns:
        Precoder: unit-power weights w_m = g_m e^{j phi_m}
    """
    if not np.isfinite(beta) or beta < 0:
        raise InvalidParameter(f"""beta must be >= 0, got {beta}""")
    if int(M) < 2 or not 0 < M_s <= M / 2:
        raise InvalidSaturatedSet(
            f"""saturated set must satisfy 0 < M_s <= M/2 (M={M}), got M_s={M_s}"""
        )
    saturated = tuple(range(int(M_s)))
    phases = np.zeros(int(M)) if phases is None else np.asarray(phases, dtype=float)
    if phases.shape != (int(M),):
        raise InvalidParameter(f"""expected {M} phases, got {phases.shape}""")

    # set gains
    g = np.ones(int(M))
    g[list(saturated)] = -np.cbrt((M - M_s) / M_s)
    alpha = 1.0 / np.linalg.norm(g)
    w = alpha * g * np.exp(1j * phases)
    h = np.exp(-1j * phases)
    return Precoder(
        w=align_phase(h, w),
        saturated_set=saturated,
        kind=LOS_CRITICAL,
        alpha=float(alpha),
    )


def xi_line_search(
    r, m_prime: int, tol: float = 1e-12, max_iter: int = 200
) -> LineSearchResult:
    """line search of the maximum with antenna m' saturated

    Solves, for xi > 0,

    .. math::

        \\sum_{m \\neq m'} \\frac{(-1+\\sqrt{1+r_m^2\\xi})^3}{r_m^2}
        = \\frac{(1+\\sqrt{1+r_{m'}^2\\xi})^3}{r_{m'}^2}

    by doubling a bracket then bisecting.

    Args:
        r (array-like): channel magnitudes, all > 0
        m_prime (int): saturated antenna
        tol (float): relative tolerance on xi
        max_iter (int): maximum number of bisection iterations

    Raises:
        InvalidParameter: non-positive r, M < 2 or m' out of range

    Returns:
        LineSearchResult: feasible=False when no root exists
    """
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.size < 2:
        raise InvalidParameter("""the line search needs M >= 2 antennas""")
    if not np.all(np.isfinite(r)) or np.any(r <= 0):
        raise InvalidParameter("""channel magnitudes must be finite and > 0""")
    if not 0 <= int(m_prime) < r.size:
        raise InvalidParameter(f"""m_prime={m_prime} out of range [0, {r.size})""")
    negative = np.zeros(r.size, dtype=bool)
    negative[int(m_prime)] = True
    return solve_xi(r, negative, rtol=tol, max_iter=max_iter)


def critical_point(
    channel: ChannelVector, negative_set, kind: str = CRITICAL_POINT
) -> Optional[Precoder]:
    """critical point of the zero-distortion problem with the given
    antennas at a negative gain

    Args:
        channel (ChannelVector | array-like): channel, no zero-gain antenna
        negative_set (Iterable[int]): antennas with a negative gain
        kind (str): kind recorded in the precoder

    Returns:
        Optional[Precoder]: None when the line search has no root
    """
    h = _channel_vector(channel)
    r = check_gains(np.abs(h))
    negative_set = check_index_set(negative_set, h.size, h.size)
    negative = np.zeros(h.size, dtype=bool)
    negative[list(negative_set)] = True

    # find xi
    result = solve_xi(r, negative)
    if not result.feasible:
        return None

    # build weights
    g, alpha = gains_at(r, negative, result.xi)
    w = g * np.exp(-1j * np.angle(h))
    return Precoder(
        w=align_phase(h, w),
        saturated_set=negative_set,
        kind=kind,
        alpha=alpha,
        xi=result.xi,
        line_search=result,
    )


def saturated_maximum(channel: ChannelVector, m_prime: int) -> Optional[Precoder]:
    """maximum of the zero-distortion problem with antenna m' saturated

    Only this antenna gets a negative gain:
    g_m = alpha·(-1 + sqrt(1 + r_m^2 xi))/r_m for m != m' and
    g_m' = alpha·(-1 - sqrt(1 + r_m'^2 xi))/r_m'.

    Args:
        channel (ChannelVector | array-like): channel, no zero-gain antenna
        m_prime (int): saturated antenna

    Usage:
        .. code-block:: python

            from z3ro.nodes.channel.data import los_ula
            from z3ro.nodes.models.precoder import saturated_maximum
            precoder = saturated_maximum(los_ula(9), 0)
            precoder.xi

            # Out: 8.0

    Returns:
        Optional[Precoder]: None when the line search is infeasible
    """
    h = _channel_vector(channel)
    if h.size < 2:
        raise InvalidParameter("""the line search needs M >= 2 antennas""")
    if not 0 <= int(m_prime) < h.size:
        raise InvalidParameter(f"""m_prime={m_prime} out of range [0, {h.size})""")
    return critical_point(h, [int(m_prime)], kind=LINE_SEARCH_MAX)


def all_maxima(channel: ChannelVector, n_jobs: int = 1) -> List[Optional[Precoder]]:
    """get the M candidate maxima, one per saturated antenna

    Args:
        channel (ChannelVector | array-like): channel
        n_jobs (int): threads; the result does not depend on it

    Returns:
        List[Optional[Precoder]]: candidate of each antenna, None if infeasible
    """
    h = _channel_vector(channel)
    check_gains(np.abs(h))
    if n_jobs == 1:
        return [saturated_maximum(h, m) for m in range(h.size)]
    return Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(saturated_maximum)(h, m) for m in range(h.size)
    )


def best_maximum(h, candidates: List[Optional[Precoder]]) -> Optional[Precoder]:
    """pick the candidate with the largest array gain, the first one on ties"""
    h = _channel_vector(h)
    gains = np.array(
        [-np.inf if c is None else array_gain(h, c) for c in candidates]
    )
    if not np.any(np.isfinite(gains)):
        return None
    best = np.max(gains)
    return candidates[int(np.flatnonzero(gains >= best * (1 - TIE_RTOL))[0])]


def global_maximum(channel: ChannelVector, n_jobs: int = 1) -> Precoder:
    """global maximum of the zero-distortion problem over real gains

    Runs the line search with every antenna saturated in turn and keeps the
    feasible maximum with the largest array gain (smallest index on ties).

    Args:
        channel (ChannelVector | array-like): channel, no zero-gain antenna
        n_jobs (int): threads; the result does not depend on it

    Raises:
        InfeasibleChannel: no antenna yields a feasible maximum

    Returns:
        Precoder: the global maximum
    """
    h = _channel_vector(channel)
    best = best_maximum(h, all_maxima(h, n_jobs=n_jobs))
    if best is None:
        raise InfeasibleChannel(
            f"""no feasible maximum on this channel (M={h.size})"""
        )
    return best


def build_precoder(
    label: str, channel: ChannelVector, M_s: int = 1, saturated_set=None
) -> Optional[Precoder]:
    """build a precoder from its experiment label

    Args:
        label (str): "mrt", "z3ro" (heuristic), "line_search_max" (global
            maximum) or "los_critical"
        channel (ChannelVector): channel
        M_s (int): number of saturated antennas of the heuristic
        saturated_set (Iterable[int], optional): explicit saturated set,
            the antennas closest to the median gain otherwise

    Returns:
        Optional[Precoder]: None when the global maximum is infeasible
    """
    if label == MRT:
        return mrt(channel)
    if label in ("z3ro", Z3RO_HEURISTIC):
        if saturated_set is None:
            saturated_set = median_gain_set(np.abs(_channel_vector(channel)), M_s)
        return z3ro_heuristic(channel, saturated_set)
    if label == LINE_SEARCH_MAX:
        try:
            return global_maximum(channel)
        except InfeasibleChannel:
            logger.warning("Infeasible channel, no line search maximum")
            return None
    if label == LOS_CRITICAL:
        h = _channel_vector(channel)
        return los_critical_point(h.size, M_s, phases=-np.angle(h))
    raise InvalidParameter(f"""unknown precoder "{label}" """)
