# note: the doctsring code below within
# """ is converted to a restructuredText
# .rst file by sphinx to automatically
# generate the api's documentation
#
# docstring style used: Google style
"""
    Second-order check of critical points with a finite-difference Hessian

    With g_0 eliminated through the third-order constraint, the problem
    becomes the unconstrained maximization of

    .. math::

        f(\\tilde g_1, ..., \\tilde g_{M-1}) =
        \\frac{(r_0 \\tilde g_0 + \\sum_{m \\geq 1} r_m \\tilde g_m)^2}
        {\\tilde g_0^2 + \\sum_{m \\geq 1} \\tilde g_m^2},
        \\quad
        \\tilde g_0 = -\\left(\\sum_{m \\geq 1} \\frac{r_m}{r_0}
        \\tilde g_m^3\\right)^{1/3}

    f is scale invariant, so its Hessian always has one zero eigenvalue
    along the critical point itself. A maximum has no positive eigenvalue.

    Copyright 2026 by the z3ro authors, GNU license
"""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidCriticalPoint
from ..models.utils import check_gains

# tolerance on the constraints of the input point
CONSTRAINT_TOL = 1e-8


@dataclass(frozen=True)
class HessianSummary:
    """Spectrum of the finite-difference Hessian at a critical point

    Args:
        eigenvalues (np.ndarray): ascending eigenvalues
        max_eigenvalue (float): largest eigenvalue
        min_eigenvalue (float): smallest eigenvalue
        asymmetry (float): max |H_ij - H_ji|
        gradient_norm (float): norm of the finite-difference gradient
        objective (float): value of f at the point
    """

    eigenvalues: np.ndarray
    max_eigenvalue: float
    min_eigenvalue: float
    asymmetry: float
    gradient_norm: float
    objective: float

    def is_negative_semidefinite(self, rtol: float = 1e-4) -> bool:
        """no eigenvalue above rtol·|min eigenvalue|"""
        return self.max_eigenvalue <= rtol * abs(self.min_eigenvalue)

    def has_ascent_direction(self, rtol: float = 1e-4) -> bool:
        """some eigenvalue is strictly positive beyond rtol·|min eigenvalue|"""
        scale = max(abs(self.min_eigenvalue), abs(self.max_eigenvalue))
        return self.max_eigenvalue > rtol * scale


def reduced_objective(r: np.ndarray, free: np.ndarray) -> float:
    """array gain as a function of the gains of antennas 1..M-1

    Args:
        r (np.ndarray): channel magnitudes
        free (np.ndarray): gains of antennas 1..M-1

    Returns:
        float: f(free)
    """
    g0 = -np.cbrt(np.sum(r[1:] / r[0] * free**3))
    return float((r[0] * g0 + r[1:] @ free) ** 2 / (g0**2 + free @ free))


def fd_gradient(fun, x0: np.ndarray, steps: np.ndarray) -> np.ndarray:
    """central finite-difference gradient"""
    gradient = np.zeros(x0.size)
    for i in range(x0.size):
        e = np.zeros(x0.size)
        e[i] = steps[i] / 2
        gradient[i] = (fun(x0 + e) - fun(x0 - e)) / steps[i]
    return gradient


def fd_hessian(fun, x0: np.ndarray, steps: np.ndarray) -> np.ndarray:
    """central finite-difference Hessian with per-coordinate steps

    Diagonal terms use x0 ± h_i, cross terms the four points x0 ± h_i/2 ± h_j/2.

    Args:
        fun (callable): scalar function
        x0 (np.ndarray): point
        steps (np.ndarray): step of each coordinate

    Returns:
        np.ndarray: Hessian estimate
    """
    dim = x0.size
    f0 = fun(x0)
    E = np.diag(steps / 2)
    hess = np.zeros((dim, dim))
    for ii in range(dim):
        for jj in range(dim):
            if ii == jj:
                # compute the diagonal
                pij = fun(x0 + 2 * E[ii]) - 2 * f0 + fun(x0 - 2 * E[ii])
            else:
                # compute the cross terms, symmetric in ii and jj
                pij = (fun(x0 + E[ii] + E[jj]) + fun(x0 - E[ii] - E[jj])) - (
                    fun(x0 + E[ii] - E[jj]) + fun(x0 - E[ii] + E[jj])
                )
            hess[ii, jj] = pij / steps[ii] / steps[jj]
    return hess


def hessian_check(r, g, fd_step: float = 1e-5) -> HessianSummary:
    """spectrum of the Hessian of the reduced objective at a critical point

    Antenna 0 is the eliminated variable.

    Args:
        r (array-like): channel magnitudes, all > 0
        g (array-like): real gains of the critical point
        fd_step (float): relative step, scaled by |g_m| + 1

    Raises:
        InvalidCriticalPoint: g is not unit power or violates the
            third-order constraint by more than 1e-8

    Returns:
        HessianSummary: eigenvalues and diagnostics
    """
    r = check_gains(r)
    g = np.asarray(g, dtype=float)
    if g.shape != r.shape or r.size < 2:
        raise InvalidCriticalPoint(
            f"""gains {g.shape} do not match channel {r.shape}, M >= 2 required"""
        )
    if abs(g @ g - 1.0) > CONSTRAINT_TOL:
        raise InvalidCriticalPoint(f"""power constraint violated: sum g^2 = {g @ g}""")
    residual = abs(np.sum(r * g**3)) / np.sum(r * np.abs(g) ** 3)
    if residual > CONSTRAINT_TOL:
        raise InvalidCriticalPoint(
            f"""third-order constraint violated: relative residual {residual:.3g}"""
        )

    # differentiate the reduced objective
    x0 = g[1:].copy()
    steps = fd_step * (np.abs(x0) + 1.0)

    def fun(x):
        return reduced_objective(r, x)

    hess = fd_hessian(fun, x0, steps)
    eigenvalues = np.linalg.eigvalsh((hess + hess.T) / 2)
    return HessianSummary(
        eigenvalues=eigenvalues,
        max_eigenvalue=float(eigenvalues[-1]),
        min_eigenvalue=float(eigenvalues[0]),
        asymmetry=float(np.max(np.abs(hess - hess.T))),
        gradient_norm=float(np.linalg.norm(fd_gradient(fun, x0, steps))),
        objective=fun(x0),
    )
