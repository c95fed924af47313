# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Exploratory probe: can complex gains beat the best real gains?

    The probe searches complex gains g_1..g_{M-1} from random starts. The
    gain of antenna 0 is set by the third-order constraint,
    r_0 g_0 |g_0|^2 = -c with c = sum_{m>=1} r_m g_m |g_m|^2, i.e.
    |g_0|^3 = |c|/r_0 and arg g_0 = arg(-c), and the gains are normalized to
    unit power. The probe reports what it finds and asserts nothing.

    Copyright 2026 by the z3ro authors, GNU license
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import fmin

from ..models.precoder import array_gain, global_maximum
from ..models.utils import check_gains
from ..util import as_generator, complex_gaussian

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProbeReport:
    """Best complex gains found vs the best real gains

    Args:
        n_restarts (int): random starts
        best_complex_gain (float, optional): best array gain over complex g
        best_real_gain (float, optional): global maximum over real g
        gap (float, optional): (complex - real)/real, > 0 if complex wins
        imag_residual (float, optional): ||Im g||/||g|| of the best complex
            point once rotated to a real positive array response
        best_g (np.ndarray, optional): best complex gains
    """

    n_restarts: int
    best_complex_gain: Optional[float] = None
    best_real_gain: Optional[float] = None
    gap: Optional[float] = None
    imag_residual: Optional[float] = None
    best_g: Optional[np.ndarray] = None

    @property
    def empty(self) -> bool:
        return self.n_restarts == 0


def complete_gains(r: np.ndarray, free: np.ndarray) -> np.ndarray:
    """add the gain of antenna 0 that nulls the third-order distortion and
    normalize to unit power"""
    c = np.sum(r[1:] * free * np.abs(free) ** 2)
    g0 = np.cbrt(np.abs(c) / r[0]) * np.exp(1j * np.angle(-c))
    g = np.concatenate([[g0], free])
    return g / np.linalg.norm(g)


def _neg_gain(x: np.ndarray, r: np.ndarray) -> float:
    free = x[: r.size - 1] + 1j * x[r.size - 1 :]
    if not np.any(free):
        return 0.0
    return -abs(np.sum(r * complete_gains(r, free))) ** 2


def conjecture_probe(r, n_restarts: int, rng) -> ProbeReport:
    """search complex gains from random starts and compare with the real
    global maximum

    Args:
        r (array-like): channel magnitudes, M >= 3, all > 0
        n_restarts (int): random starts, 0 gives an empty report
        rng (RngStream | np.random.Generator): source of the starts

    Returns:
        ProbeReport: best objectives, their gap and the imaginary residual
    """
    if int(n_restarts) <= 0:
        return ProbeReport(n_restarts=0)
    r = check_gains(r)
    generator = as_generator(rng)

    # search complex gains
    best_value, best_g = -np.inf, None
    for _ in range(int(n_restarts)):
        start = complex_gaussian(generator, r.size - 1)
        x = fmin(
            _neg_gain,
            np.concatenate([start.real, start.imag]),
            args=(r,),
            xtol=1e-10,
            ftol=1e-12,
            maxiter=20000,
            maxfun=40000,
            disp=False,
        )
        value = -_neg_gain(x, r)
        if value > best_value:
            best_value = value
            best_g = complete_gains(r, x[: r.size - 1] + 1j * x[r.size - 1 :])

    # compare with the best real gains
    best_real = array_gain(r, global_maximum(r))
    rotated = best_g * np.exp(-1j * np.angle(np.sum(r * best_g)))
    report = ProbeReport(
        n_restarts=int(n_restarts),
        best_complex_gain=float(best_value),
        best_real_gain=float(best_real),
        gap=float((best_value - best_real) / best_real),
        imag_residual=float(np.linalg.norm(rotated.imag)),
        best_g=rotated,
    )
    logger.info(
        "Complex probe: best %.9g vs real %.9g (gap %.2e)",
        report.best_complex_gain,
        report.best_real_gain,
        report.gap,
    )
    return report
