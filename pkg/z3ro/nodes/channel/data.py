# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Channel generation: line-of-sight uniform linear arrays, i.i.d. Rayleigh
    fading and explicit gain vectors

    Copyright 2026 by the z3ro authors, GNU license
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from ..errors import DegenerateChannel, InvalidParameter
from ..util import as_complex_vec, as_generator, complex_gaussian
from .utils import steering_phases

logger = logging.getLogger(__name__)

# channel kinds
LOS_ULA = "los_ula"
IID_RAYLEIGH = "iid_rayleigh"
EXPLICIT = "explicit"


@dataclass(frozen=True, eq=False)
class ChannelVector:
    """Per-antenna complex gains h_m and how they were generated

    Args:
        h (np.ndarray): complex gains, length M
        kind (str): "los_ula", "iid_rayleigh" or "explicit"
        beta (float, optional): path loss
        theta_rad (float, optional): user direction (LOS only)
        spacing_over_lambda (float, optional): antenna spacing (LOS only)
    """

    h: np.ndarray
    kind: str = EXPLICIT
    beta: Optional[float] = None
    theta_rad: Optional[float] = None
    spacing_over_lambda: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "h", as_complex_vec(self.h, "channel").copy())
        self.h.setflags(write=False)

    @property
    def M(self) -> int:
        """number of antennas"""
        return self.h.size

    @property
    def gains(self) -> np.ndarray:
        """channel magnitudes r_m = |h_m|"""
        return np.abs(self.h)

    @property
    def phases(self) -> np.ndarray:
        """channel phases arg(h_m)"""
        return np.angle(self.h)


def _check_count(M: int):
    if int(M) != M or M < 1:
        raise InvalidParameter(f"""M must be an integer >= 1, got {M}""")


def _check_beta(beta: float):
    if not np.isfinite(beta) or beta < 0:
        raise InvalidParameter(f"""beta must be finite and >= 0, got {beta}""")


def los_ula(
    M: int,
    beta: float = 1.0,
    theta_rad: float = np.pi / 2,
    spacing_over_lambda: float = 0.5,
) -> ChannelVector:
    """generate a line-of-sight channel towards a user at angle theta

    .. math::

        h_m = \\sqrt{\\beta} e^{-j m 2\\pi (d/\\lambda) \\cos\\theta}

    Args:
        M (int): number of antennas
        beta (float): path loss
        theta_rad (float): user direction, radian
        spacing_over_lambda (float): antenna spacing in wavelengths

    Usage:
        .. code-block:: python

            import numpy as np
            from z3ro.nodes.channel.data import los_ula
            los_ula(M=3, beta=1, theta_rad=0, spacing_over_lambda=0.5).h

            # Out: array([ 1.+0.j, -1.-0.j,  1.+0.j]) (up to rounding)

    Raises:
        InvalidParameter: non-positive spacing, negative beta, non-finite angle

    Returns:
        ChannelVector: the LOS channel
    """
    _check_count(M)
    _check_beta(beta)
    if not np.isfinite(spacing_over_lambda) or spacing_over_lambda <= 0:
        raise InvalidParameter(
            f"""spacing_over_lambda must be > 0, got {spacing_over_lambda}"""
        )
    if not np.isfinite(theta_rad):
        raise InvalidParameter("""theta_rad must be finite""")

    phases = steering_phases(M, theta_rad, spacing_over_lambda)
    return ChannelVector(
        h=np.sqrt(beta) * np.exp(-1j * phases),
        kind=LOS_ULA,
        beta=float(beta),
        theta_rad=float(theta_rad),
        spacing_over_lambda=float(spacing_over_lambda),
    )


def iid_rayleigh(M: int, beta: float, rng) -> ChannelVector:
    """draw an i.i.d. Rayleigh channel, h_m ~ CN(0, beta)

    Args:
        M (int): number of antennas
        beta (float): path loss (variance of each h_m)
        rng (RngStream | np.random.Generator): random source

    Returns:
        ChannelVector: the drawn channel
    """
    _check_count(M)
    _check_beta(beta)
    h = complex_gaussian(as_generator(rng), int(M), power=beta)
    return ChannelVector(h=h, kind=IID_RAYLEIGH, beta=float(beta))


def explicit_channel(h: Iterable) -> ChannelVector:
    """wrap a given gain vector (e.g., read from a channel file)"""
    return ChannelVector(h=h, kind=EXPLICIT)


def strip_inactive(
    channel: ChannelVector, atol: float = 0.0
) -> Tuple[ChannelVector, np.ndarray]:
    """drop the antennas with zero gain

    Zero-gain antennas do not reach the user; they are set inactive and
    discarded before precoding.

    Args:
        channel (ChannelVector): channel
        atol (float): antennas with |h_m| <= atol are dropped

    Returns:
        Tuple[ChannelVector, np.ndarray]: the active channel and the
        original indices of its antennas
    """
    active = np.flatnonzero(channel.gains > atol)
    if active.size == channel.M:
        return channel, active
    if active.size == 0:
        raise DegenerateChannel("""all antennas have zero gain""")
    logger.warning(
        "Dropping %s inactive antenna(s) out of %s",
        channel.M - active.size,
        channel.M,
    )
    stripped = ChannelVector(
        h=channel.h[active],
        kind=EXPLICIT,
        beta=channel.beta,
    )
    return stripped, active
