"""Steady-state covariance matrix and drift-spectrum stability.

The stationary covariance matrix V of the fluctuations solves the algebraic
Lyapunov equation

    M V + V M^T = -D

which is vectorized through Kronecker products into a single 36x36 linear
system and solved densely. V uses the same quadrature ordering as the drift
matrix and the vacuum normalization 1/2 per quadrature, so the two-mode
separability boundary sits at twice the minimum symplectic eigenvalue = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import NumericalError, StabilityError

# Verified residual bound for every solved point: ||M V + V M^T + D||_inf
# relative to ||D||_inf.
LYAPUNOV_RESIDUAL_RTOL = 1e-9


@dataclass(frozen=True)
class StabilityReport:
    """Drift spectrum summary: stable iff every eigenvalue has Re < 0."""

    max_real_part: float
    spectrum: np.ndarray
    stable: bool


def stability(m) -> StabilityReport:
    """Assess Hurwitz stability of a drift matrix from its full spectrum."""
    spectrum = numerics.eig_general(m)
    max_real = float(spectrum.real.max())
    return StabilityReport(max_real_part=max_real, spectrum=spectrum, stable=max_real < 0.0)


def solve_lyapunov(m, d) -> np.ndarray:
    """Steady-state covariance matrix for drift m and diffusion d.

    Refuses unstable drift matrices: the algebraic solution only describes
    the long-time state when m is Hurwitz. The result is symmetrized to
    remove round-off asymmetry and checked against the residual bound.
    """
    m = np.asarray(m, dtype=float)
    d = np.asarray(d, dtype=float)
    report = stability(m)
    if not report.stable:
        raise StabilityError(
            f"drift matrix is unstable (max Re lambda = {report.max_real_part:.6e})"
        )
    n = m.shape[0]
    eye = np.eye(n)
    coeff = numerics.kron(eye, m) + numerics.kron(m, eye)
    v = numerics.solve_linear(coeff, -d.reshape(-1)).reshape(n, n)
    v = 0.5 * (v + v.T)

    residual = np.linalg.norm(m @ v + v @ m.T + d, np.inf)
    bound = LYAPUNOV_RESIDUAL_RTOL * np.linalg.norm(d, np.inf)
    if residual > bound:
        raise NumericalError(
            f"Lyapunov residual {residual:.3e} exceeds bound {bound:.3e}"
        )
    return v
