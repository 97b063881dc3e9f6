"""Correlation quantifiers of the three-mode Gaussian steady state.

All measures act on covariance matrices in the (x, y, X1, Y1, X2, Y2)
ordering with vacuum variance 1/2. Bipartite entanglement is quantified by
the logarithmic negativity E = max(0, -ln 2 eta), where eta is the smallest
symplectic eigenvalue after a partial transpose; genuine tripartite
entanglement by the minimal residual contangle; and directional quantum
steering by Renyi-2 entropy differences of the steerer's reduced state and
the joint two-mode state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import model, steady_state
from .errors import CavmagError, DomainError, PhysicalityError
from .model import PhysicalParams
from .steady_state import StabilityReport

# Slack absorbed by physicality checks before a covariance matrix is rejected.
PHYSICALITY_ATOL = 1e-6
# Floor below which a residual contangle counts as numerically zero.
RESIDUAL_FLOOR = -1e-9


class Mode(enum.IntEnum):
    """Mode labels mapped to quadrature index pairs of the global CM."""

    MAGNON = 0
    CAVITY_1 = 1
    CAVITY_2 = 2

    @property
    def label(self) -> str:
        return model.MODE_LABELS[self]

    @property
    def indices(self) -> tuple[int, int]:
        return (2 * self, 2 * self + 1)


_MODE_BY_LABEL = {m.label: m for m in Mode}


def as_mode(mode) -> Mode:
    if isinstance(mode, Mode):
        return mode
    try:
        return _MODE_BY_LABEL[mode]
    except (KeyError, TypeError):
        raise DomainError(f"unknown mode {mode!r}; expected one of {model.MODE_LABELS}")


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form, one [[0, 1], [-1, 0]] block per mode."""
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        out[2 * k:2 * k + 2, 2 * k:2 * k + 2] = j
    return out


OMEGA_2 = symplectic_form(2)
OMEGA_3 = symplectic_form(3)

# Partial-transpose sign masks: one -1 on the y quadrature of the transposed
# mode. Pairwise masks act on a reduced 4x4 CM with the transposed mode first;
# the tripartite masks act on the global CM for each one-vs-two split.
PT_PAIR = np.array([1.0, -1.0, 1.0, 1.0])
PT_ONE_VS_TWO = {
    Mode.MAGNON: np.array([1.0, -1.0, 1.0, 1.0, 1.0, 1.0]),
    Mode.CAVITY_1: np.array([1.0, 1.0, 1.0, -1.0, 1.0, 1.0]),
    Mode.CAVITY_2: np.array([1.0, 1.0, 1.0, 1.0, 1.0, -1.0]),
}

_PAIRS = (
    ("c1c2", Mode.CAVITY_1, Mode.CAVITY_2),
    ("mc1", Mode.MAGNON, Mode.CAVITY_1),
    ("mc2", Mode.MAGNON, Mode.CAVITY_2),
)
_STEERING_DIRECTIONS = (
    ("c1|c2", Mode.CAVITY_1, Mode.CAVITY_2),
    ("c2|c1", Mode.CAVITY_2, Mode.CAVITY_1),
    ("m|c1", Mode.MAGNON, Mode.CAVITY_1),
    ("c1|m", Mode.CAVITY_1, Mode.MAGNON),
    ("m|c2", Mode.MAGNON, Mode.CAVITY_2),
    ("c2|m", Mode.CAVITY_2, Mode.MAGNON),
)


def reduce(v, modes) -> np.ndarray:
    """Reduced covariance matrix of the given modes, in the given order."""
    modes = [as_mode(m) for m in modes]
    if not modes:
        raise DomainError("at least one mode is required")
    if len(set(modes)) != len(modes):
        raise DomainError(f"duplicate modes in {[m.label for m in modes]}")
    v = np.asarray(v, dtype=float)
    sel = [i for m in modes for i in m.indices]
    return v[np.ix_(sel, sel)]


_OMEGA_CACHE = {1: symplectic_form(1), 2: OMEGA_2, 3: OMEGA_3}


def symplectic_eigenvalues(v) -> np.ndarray:
    """Symplectic spectrum of a CM, ascending.

    The eigenvalues of Omega V are +/- i nu; the nu are read off the
    imaginary parts, which avoids complex-matrix machinery.
    """
    v = np.asarray(v, dtype=float)
    n = v.shape[0] // 2
    omega = _OMEGA_CACHE.get(n)
    if omega is None:
        omega = symplectic_form(n)
    ev = np.linalg.eigvals(omega @ v)
    return np.sort(np.abs(ev.imag))[1::2]


def _check_physical(v, atol: float = PHYSICALITY_ATOL) -> float:
    nu = symplectic_eigenvalues(v)
    nu_min = float(nu[0])
    if nu_min < 0.5 - atol:
        raise PhysicalityError(
            f"covariance matrix violates the Heisenberg bound "
            f"(min symplectic eigenvalue {nu_min:.6g} < 1/2)"
        )
    return nu_min


def _pt_min_eigenvalue(v, mask, omega) -> float:
    vt = v * np.outer(mask, mask)
    ev = np.linalg.eigvals(omega @ vt)
    return float(np.min(np.abs(ev.imag)))


def log_negativity(v4) -> float:
    """Logarithmic negativity of a two-mode CM: max(0, -ln 2 eta).

    eta is the minimum symplectic eigenvalue of the partially transposed CM;
    the state is separable, and the measure zero, once 2 eta >= 1.
    """
    v4 = np.asarray(v4, dtype=float)
    if v4.shape != (4, 4):
        raise DomainError(f"expected a 4x4 two-mode CM, got shape {v4.shape}")
    _check_physical(v4)
    eta = _pt_min_eigenvalue(v4, PT_PAIR, OMEGA_2)
    return max(0.0, -math.log(2.0 * eta))


def log_negativity_one_vs_two(v, focus) -> float:
    """Logarithmic negativity across the focus-mode-vs-rest bipartition."""
    focus = as_mode(focus)
    v = np.asarray(v, dtype=float)
    _check_physical(v)
    eta = _pt_min_eigenvalue(v, PT_ONE_VS_TWO[focus], OMEGA_3)
    return max(0.0, -math.log(2.0 * eta))


def residual_contangle(v, focus) -> float:
    """Residual contangle of the focus mode: E^2(u|vw) - E^2(u|v) - E^2(u|w).

    Contangle is the squared logarithmic negativity. The raw value is
    returned; tiny negatives are numerical, large ones would signal a
    monogamy violation and are deliberately not hidden.
    """
    focus = as_mode(focus)
    others = [m for m in Mode if m is not focus]
    one_vs_two = log_negativity_one_vs_two(v, focus)
    pairwise = [log_negativity(reduce(v, [focus, other])) for other in others]
    return one_vs_two**2 - pairwise[0] ** 2 - pairwise[1] ** 2


def min_residual_contangle(v) -> float:
    """Minimum residual contangle over the three one-vs-two splits.

    Clamped at zero when all three residuals are zero to within numerical
    noise; a genuinely negative residual is passed through raw.
    """
    residuals = [residual_contangle(v, focus) for focus in Mode]
    smallest = min(residuals)
    if smallest < RESIDUAL_FLOOR:
        return smallest
    return max(0.0, smallest)


def _renyi2_entropy_arg(det_value: float, context: str) -> float:
    if det_value <= 0.0:
        raise PhysicalityError(f"non-positive determinant ({det_value:.3e}) for {context}")
    return 0.5 * math.log(det_value)


def gaussian_steering(v, steerer, steered) -> float:
    """Renyi-2 steering from steerer to steered: max(0, S(2V_a) - S(2V_ab)).

    S(s) = (1/2) ln det s, V_a is the steerer's reduced single-mode block and
    V_ab the ordered two-mode CM. Positive value means the steerer's
    measurements can condition the steered mode below vacuum noise.
    """
    steerer = as_mode(steerer)
    steered = as_mode(steered)
    if steerer is steered:
        raise DomainError("steerer and steered must differ")
    v = np.asarray(v, dtype=float)
    va = 2.0 * reduce(v, [steerer])
    vab = 2.0 * reduce(v, [steerer, steered])
    det_a = va[0, 0] * va[1, 1] - va[0, 1] * va[1, 0]
    s_a = _renyi2_entropy_arg(det_a, f"reduced block of {steerer.label}")
    s_ab = _renyi2_entropy_arg(
        float(np.linalg.det(vab)), f"pair ({steerer.label}, {steered.label})"
    )
    return max(0.0, s_a - s_ab)


def steering_asymmetry(v, a, b) -> float:
    """Absolute difference of the two steering directions of a pair."""
    return abs(gaussian_steering(v, a, b) - gaussian_steering(v, b, a))


def classify_steering(z_ab: float, z_ba: float) -> str:
    """Steering taxonomy of a pair: no-way, one-way or two-way."""
    if z_ab > 0.0 and z_ba > 0.0:
        return "two-way"
    if z_ab > 0.0 or z_ba > 0.0:
        return "one-way"
    return "no-way"


# Flat column layout shared by reports, sweeps and serialized grids.
REPORT_COLUMNS = (
    "e_n_c1c2",
    "e_n_mc1",
    "e_n_mc2",
    "e_n_mc_max",
    "e_n_m_vs_c1c2",
    "e_n_c1_vs_mc2",
    "e_n_c2_vs_mc1",
    "r_tau_m",
    "r_tau_c1",
    "r_tau_c2",
    "r_tau_min",
    "zeta_c1_c2",
    "zeta_c2_c1",
    "zeta_m_c1",
    "zeta_c1_m",
    "zeta_m_c2",
    "zeta_c2_m",
    "zeta_s_c1c2",
    "zeta_s_mc1",
    "zeta_s_mc2",
    "nu_min",
    "lambda_max",
)


@dataclass(frozen=True)
class CorrelationReport:
    """Every scalar measure at one parameter point.

    For an unstable drift matrix only the stability assessment is filled in;
    the measure fields are None and serialize as NaN.
    """

    params: PhysicalParams
    stability: StabilityReport
    e_n: Optional[dict] = None
    e_n_one_vs_two: Optional[dict] = None
    residuals: Optional[dict] = None
    r_tau_min: Optional[float] = None
    steering: Optional[dict] = None
    asymmetry: Optional[dict] = None
    nu_min: Optional[float] = None

    @property
    def stable(self) -> bool:
        return self.stability.stable

    def as_dict(self) -> dict:
        """Flatten to the canonical column layout (NaN where unavailable)."""
        nan = float("nan")
        out = dict.fromkeys(REPORT_COLUMNS, nan)
        out["lambda_max"] = self.stability.max_real_part
        if self.stable:
            out.update({
                "e_n_c1c2": self.e_n["c1c2"],
                "e_n_mc1": self.e_n["mc1"],
                "e_n_mc2": self.e_n["mc2"],
                "e_n_mc_max": max(self.e_n["mc1"], self.e_n["mc2"]),
                "e_n_m_vs_c1c2": self.e_n_one_vs_two["m"],
                "e_n_c1_vs_mc2": self.e_n_one_vs_two["c1"],
                "e_n_c2_vs_mc1": self.e_n_one_vs_two["c2"],
                "r_tau_m": self.residuals["m"],
                "r_tau_c1": self.residuals["c1"],
                "r_tau_c2": self.residuals["c2"],
                "r_tau_min": self.r_tau_min,
                "zeta_c1_c2": self.steering["c1|c2"],
                "zeta_c2_c1": self.steering["c2|c1"],
                "zeta_m_c1": self.steering["m|c1"],
                "zeta_c1_m": self.steering["c1|m"],
                "zeta_m_c2": self.steering["m|c2"],
                "zeta_c2_m": self.steering["c2|m"],
                "zeta_s_c1c2": self.asymmetry["c1c2"],
                "zeta_s_mc1": self.asymmetry["mc1"],
                "zeta_s_mc2": self.asymmetry["mc2"],
                "nu_min": self.nu_min,
            })
        out["stable"] = self.stable
        return out


def full_report(p: PhysicalParams) -> CorrelationReport:
    """Stability, steady state and all correlation measures at one point."""
    try:
        m = model.drift_matrix(p)
        report = steady_state.stability(m)
        if not report.stable:
            return CorrelationReport(params=p, stability=report)
        d = model.diffusion_matrix(p)
        v = steady_state.solve_lyapunov(m, d)
        nu_min = _check_physical(v)

        e_n = {key: log_negativity(reduce(v, [a, b])) for key, a, b in _PAIRS}
        one_vs_two = {
            mode.label: log_negativity_one_vs_two(v, mode) for mode in Mode
        }
        residuals = {
            mode.label: one_vs_two[mode.label] ** 2
            - sum(
                e_n[key] ** 2
                for key, a, b in _PAIRS
                if mode in (a, b)
            )
            for mode in Mode
        }
        smallest = min(residuals.values())
        r_tau_min = smallest if smallest < RESIDUAL_FLOOR else max(0.0, smallest)
        steering = {
            key: gaussian_steering(v, a, b) for key, a, b in _STEERING_DIRECTIONS
        }
        asymmetry = {
            "c1c2": abs(steering["c1|c2"] - steering["c2|c1"]),
            "mc1": abs(steering["m|c1"] - steering["c1|m"]),
            "mc2": abs(steering["m|c2"] - steering["c2|m"]),
        }
        return CorrelationReport(
            params=p,
            stability=report,
            e_n=e_n,
            e_n_one_vs_two=one_vs_two,
            residuals=residuals,
            r_tau_min=r_tau_min,
            steering=steering,
            asymmetry=asymmetry,
            nu_min=nu_min,
        )
    except CavmagError as exc:
        raise type(exc)(f"{exc} [at parameter point {p}]") from exc
