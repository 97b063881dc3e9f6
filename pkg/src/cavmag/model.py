"""Physical parameters and the linearized fluctuation model.

The system is a magnon mode coupled to two microwave cavities by
beam-splitter (excitation-exchange) interactions, with both cavities driven
by a broadband two-mode squeezed vacuum and the magnon damped by a thermal
bath. After linearization the quadrature fluctuations obey

    dB/dt = M B + noise,   B = (x, y, X1, Y1, X2, Y2)

with the magnon quadratures first. All rates and detunings are angular
(rad/s); quadratures carry the 1/sqrt(2) normalization, so a vacuum mode has
variance 1/2 per quadrature.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateConfigurationError, DomainError

# CODATA-2018 values.
HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J/K

TWO_PI = 2.0 * np.pi

# Quadrature layout of the 6x6 matrices: magnon first, then the two cavities.
N_MODES = 3
MODE_LABELS = ("m", "c1", "c2")


@dataclass(frozen=True)
class PhysicalParams:
    """All inputs of the model, in angular units (rad/s) and kelvin.

    kappa_1, kappa_2, kappa_m : cavity and magnon amplitude decay rates
    gamma_1, gamma_2          : magnon-cavity coupling strengths
    delta_1, delta_2, delta_m : detunings from the squeezed-drive frequency
    r                         : squeezing parameter of the two-mode drive
    omega_m                   : magnon frequency (only used for the thermal
                                occupation of the magnon bath)
    temperature               : bath temperature in kelvin
    """

    kappa_1: float
    kappa_2: float
    kappa_m: float
    gamma_1: float = 0.0
    gamma_2: float = 0.0
    delta_1: float = 0.0
    delta_2: float = 0.0
    delta_m: float = 0.0
    r: float = 0.0
    omega_m: float = TWO_PI * 10e9
    temperature: float = 0.0

    def __post_init__(self):
        for name in ("kappa_1", "kappa_2", "kappa_m", "omega_m"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("gamma_1", "gamma_2", "r", "temperature"):
            if getattr(self, name) < 0.0:
                raise DomainError(f"{name} must be non-negative, got {getattr(self, name)}")
        for name in (f.name for f in dataclasses.fields(self)):
            if not np.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    @property
    def kappa_c(self) -> float:
        """Normalization scale for detunings and ratios (= kappa_1)."""
        return self.kappa_1

    def replace(self, **changes) -> "PhysicalParams":
        return dataclasses.replace(self, **changes)

    def swapped(self) -> "PhysicalParams":
        """Same configuration with the two cavity labels exchanged."""
        return self.replace(
            kappa_1=self.kappa_2,
            kappa_2=self.kappa_1,
            gamma_1=self.gamma_2,
            gamma_2=self.gamma_1,
            delta_1=self.delta_2,
            delta_2=self.delta_1,
        )


def default_params() -> PhysicalParams:
    """Reference microwave parameter set used by all presets.

    kappa_c/2pi = 5 MHz for both cavities, kappa_m/2pi = 1 MHz,
    Gamma = 4 kappa_c on both arms, omega_m/2pi = 10 GHz, r = 0.4,
    T = 20 mK, all detunings zero.
    """
    kappa_c = TWO_PI * 5e6
    return PhysicalParams(
        kappa_1=kappa_c,
        kappa_2=kappa_c,
        kappa_m=TWO_PI * 1e6,
        gamma_1=4.0 * kappa_c,
        gamma_2=4.0 * kappa_c,
        omega_m=TWO_PI * 10e9,
        r=0.4,
        temperature=0.02,
    )


@dataclass(frozen=True)
class NoiseMoments:
    """Second moments of the input noise.

    big_n : mean photon number of the squeezed drive, sinh(r)^2
    big_m : cross-correlation of the two drive rails, sinh(r) cosh(r)
    n_m   : thermal occupation of the magnon bath
    """

    big_n: float
    big_m: float
    n_m: float


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation 1/(exp(hbar w / kB T) - 1), exact 0 at T = 0."""
    if omega <= 0.0:
        raise DomainError(f"omega must be positive, got {omega}")
    if temperature < 0.0:
        raise DomainError(f"temperature must be non-negative, got {temperature}")
    if temperature == 0.0:
        return 0.0
    x = HBAR * omega / (K_B * temperature)
    if x > 700.0:  # exp would overflow; occupation is numerically zero
        return 0.0
    return 1.0 / np.expm1(x)


def noise_moments(r: float, omega_m: float, temperature: float) -> NoiseMoments:
    """Bath moments for squeezing r, magnon frequency omega_m and temperature T.

    The two-mode squeezed drive is minimum-uncertainty, so
    big_m^2 = big_n (big_n + 1) holds identically.
    """
    if r < 0.0:
        raise DomainError(f"r must be non-negative, got {r}")
    big_n = np.sinh(r) ** 2
    big_m = np.sinh(r) * np.cosh(r)
    return NoiseMoments(big_n=big_n, big_m=big_m, n_m=thermal_occupation(omega_m, temperature))


def drift_matrix(p: PhysicalParams) -> np.ndarray:
    """6x6 generator of the linearized quadrature dynamics.

    Detunings rotate each mode's quadrature pair, decay sits on the diagonal,
    and the couplings exchange excitations between the magnon and each cavity.
    """
    g1, g2 = p.gamma_1, p.gamma_2
    return np.array([
        [-p.kappa_m, p.delta_m, 0.0, g1, 0.0, g2],
        [-p.delta_m, -p.kappa_m, -g1, 0.0, -g2, 0.0],
        [0.0, g1, -p.kappa_1, p.delta_1, 0.0, 0.0],
        [-g1, 0.0, -p.delta_1, -p.kappa_1, 0.0, 0.0],
        [0.0, g2, 0.0, 0.0, -p.kappa_2, p.delta_2],
        [-g2, 0.0, 0.0, 0.0, -p.delta_2, -p.kappa_2],
    ])


def diffusion_matrix(p: PhysicalParams) -> np.ndarray:
    """6x6 noise-correlation source term of the Lyapunov equation.

    The magnon block is thermal, each cavity block carries the squeezed-drive
    occupation, and the cavity-cavity cross block holds the two-mode
    correlations: +2M sqrt(k1 k2) on (X1, X2) and the opposite sign on
    (Y1, Y2).
    """
    mom = noise_moments(p.r, p.omega_m, p.temperature)
    d = np.zeros((6, 6))
    d[0, 0] = d[1, 1] = p.kappa_m * (2.0 * mom.n_m + 1.0)
    d[2, 2] = d[3, 3] = p.kappa_1 * (2.0 * mom.big_n + 1.0)
    d[4, 4] = d[5, 5] = p.kappa_2 * (2.0 * mom.big_n + 1.0)
    cross = 2.0 * mom.big_m * np.sqrt(p.kappa_1 * p.kappa_2)
    d[2, 4] = d[4, 2] = cross
    d[3, 5] = d[5, 3] = -cross
    return d


def steady_state_means(p: PhysicalParams) -> np.ndarray:
    """Steady-state mean amplitudes (<m>, <c1>, <c2>).

    The squeezed vacuum drive has zero mean, so the mean-field equations are
    homogeneous and the unique fixed point is zero whenever the coefficient
    matrix is nonsingular (guaranteed for positive decay rates).
    """
    a = np.array([
        [p.kappa_m + 1j * p.delta_m, 1j * p.gamma_1, 1j * p.gamma_2],
        [1j * p.gamma_1, p.kappa_1 + 1j * p.delta_1, 0.0],
        [1j * p.gamma_2, 0.0, p.kappa_2 + 1j * p.delta_2],
    ])
    scale = np.linalg.norm(a, np.inf)
    if abs(np.linalg.det(a)) <= 1e-14 * scale**3:
        raise DegenerateConfigurationError(
            "mean-field coefficient matrix is singular for these parameters"
        )
    return np.zeros(3, dtype=complex)
