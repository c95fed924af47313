# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Angle helpers for uniform linear arrays

    Copyright 2026 by the z3ro authors, GNU license
"""
import numpy as np
from numpy import pi

from ..errors import InvalidParameter


def get_deg_to_rad(deg, signed: bool = True):
    """convert angles in degree to radian

    Args:
        deg (float | np.ndarray): angles in degree
        signed (bool): True maps to (-pi, pi], False to [0, 2*pi)

    Usage:
        .. code-block:: python

            import numpy as np
            from z3ro.nodes.channel.utils import get_deg_to_rad
            radians = get_deg_to_rad(np.array([0, 90, 180, 270]), True)

            Out: array([ 0., 1.57079633, 3.14159265, -1.57079633])

    Returns:
        float | np.ndarray: angles in radian
    """
    deg = np.asarray(deg, dtype=float)

    # get unsigned radians (0:2*pi)
    rad = np.mod(deg, 360.0) * (2 * pi / 360)

    # get signed radians (-pi:pi)
    if signed:
        rad = np.where(rad > pi, rad - 2 * pi, rad)
    return rad if rad.ndim else float(rad)


def get_rad_to_deg(rad):
    """convert angles in radian to degree, keeping their sign

    Args:
        rad (float | np.ndarray): angles in radian

    Returns:
        float | np.ndarray: angles in degree
    """
    deg = np.asarray(rad, dtype=float) * (360 / (2 * pi))
    return deg if deg.ndim else float(deg)


def steering_phases(
    M: int, theta_tilde_rad: float, spacing_over_lambda: float = 0.5
) -> np.ndarray:
    """get the phase of each antenna of a uniform linear array seen from
    direction theta

    .. math::

        \\tilde{\\phi}_m = m \\, 2\\pi \\, (d/\\lambda) \\cos(\\tilde{\\theta})

    Args:
        M (int): number of antennas
        theta_tilde_rad (float): direction, radian (pi/2 is broadside)
        spacing_over_lambda (float): antenna spacing in wavelengths

    Usage:
        .. code-block:: python

            from z3ro.nodes.channel.utils import steering_phases
            steering_phases(2, 0.0, 0.5)

            # Out: array([0.        , 3.14159265])

    Returns:
        np.ndarray: phases of the M antennas, radian
    """
    if int(M) < 1:
        raise InvalidParameter(f"""M must be >= 1, got {M}""")
    return (
        np.arange(int(M))
        * 2
        * pi
        * spacing_over_lambda
        * np.cos(theta_tilde_rad)
    )
