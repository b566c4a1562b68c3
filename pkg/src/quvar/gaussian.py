"""Gaussian states on single-mode phase space and their exact moment flows.

A state is carried by its first moments (mean_x, mean_p) and the symmetric
second central moments (vxx, vxp, vpp), where vxp is the symmetrized
covariance ½⟨ΔXΔP + ΔPΔX⟩ (the anticommutator expectation equals 2·vxp).
Quadratic Hamiltonians generate linear Heisenberg flows, so the moments
evolve exactly through 2×2 symplectic matrices:

    mean → M·mean,   V → M·V·Mᵀ.

Three flows are provided:

* free mass, H = P²/(2m):            M = [[1, t/m], [0, 1]]
* oscillator, H = P²/(2m) + ½mω²X²:  M = [[cos ωt, sin ωt/(mω)],
                                          [−mω sin ωt, cos ωt]]
* dimensionless oscillator in quadratures x = √(mω/ħ)·X, p = P/√(mħω),
  H = ½ħω(p² + x²):                  M = [[cos ωt, sin ωt],
                                          [−sin ωt, cos ωt]]

All operations are pure functions; values are freely shareable across
threads. Negative t is allowed everywhere here (the flows form groups).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "SR_MARGIN_TOL",
    "StateValidationError",
    "PhysConfig",
    "FreeMass",
    "Oscillator",
    "DimensionlessOscillator",
    "SystemModel",
    "GaussianState",
    "ValidationReport",
    "validate_state",
    "flow_map",
    "evolve",
    "variance_x_closed_form",
]

# Tolerance on the determinant margin vxx·vpp − vxp² − ħ²/4, in units of ħ².
# Absorbs rounding so that exactly-saturating states built in floating point
# still validate.
SR_MARGIN_TOL = 1e-12


class StateValidationError(ValueError):
    """An operation received a state that fails validation."""


@dataclass(frozen=True)
class PhysConfig:
    """Physical constants for a run. ħ is a runtime parameter, default 1."""

    hbar: float = 1.0

    def __post_init__(self) -> None:
        if not self.hbar > 0:
            raise ValueError(f"hbar must be > 0, got {self.hbar}")


@dataclass(frozen=True)
class FreeMass:
    """Free particle of mass m, H = P²/(2m)."""

    m: float

    def __post_init__(self) -> None:
        if not self.m > 0:
            raise ValueError(f"m must be > 0, got {self.m}")


@dataclass(frozen=True)
class Oscillator:
    """Harmonic oscillator in dimensional variables, H = P²/(2m) + ½mω²X²."""

    m: float
    omega: float

    def __post_init__(self) -> None:
        if not self.m > 0:
            raise ValueError(f"m must be > 0, got {self.m}")
        if not self.omega > 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")


@dataclass(frozen=True)
class DimensionlessOscillator:
    """Oscillator in quadratures x = √(mω/ħ)·X, p = P/√(mħω).

    The quadratures obey [x, p] = i, so ħ = 1 is fixed internally; any
    PhysConfig.hbar passed alongside this model is ignored. ω = 0 is allowed
    and degenerates to the identity flow (the ω → 0 limit at fixed t).
    """

    omega: float

    def __post_init__(self) -> None:
        if self.omega < 0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")


SystemModel = Union[FreeMass, Oscillator, DimensionlessOscillator]


@dataclass(frozen=True)
class GaussianState:
    """First and second moments of a single-mode Gaussian state.

    Construction does not validate; use :func:`validate_state` to check
    positivity and the Schrödinger-Robertson bound vxx·vpp − vxp² ≥ ħ²/4.
    """

    mean_x: float = 0.0
    mean_p: float = 0.0
    vxx: float = 1.0
    vpp: float = 1.0
    vxp: float = 0.0

    @property
    def cov(self) -> np.ndarray:
        """Covariance matrix [[vxx, vxp], [vxp, vpp]]."""
        return np.array([[self.vxx, self.vxp], [self.vxp, self.vpp]])

    @property
    def mean(self) -> np.ndarray:
        return np.array([self.mean_x, self.mean_p])

    @classmethod
    def from_moments(cls, mean, cov) -> "GaussianState":
        mean = np.asarray(mean, dtype=float)
        cov = np.asarray(cov, dtype=float)
        return cls(
            mean_x=float(mean[0]),
            mean_p=float(mean[1]),
            vxx=float(cov[0, 0]),
            vpp=float(cov[1, 1]),
            vxp=float(0.5 * (cov[0, 1] + cov[1, 0])),
        )

    def to_dict(self) -> dict:
        return {
            "mean_x": self.mean_x,
            "mean_p": self.mean_p,
            "vxx": self.vxx,
            "vxp": self.vxp,
            "vpp": self.vpp,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GaussianState":
        return cls(
            mean_x=float(d["mean_x"]),
            mean_p=float(d["mean_p"]),
            vxx=float(d["vxx"]),
            vpp=float(d["vpp"]),
            vxp=float(d["vxp"]),
        )


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_state. sr_margin is vxx·vpp − vxp² − ħ²/4."""

    ok: bool
    violations: tuple[str, ...]
    sr_margin: float


def validate_state(state: GaussianState, config: PhysConfig = PhysConfig()) -> ValidationReport:
    """Check positivity and the Schrödinger-Robertson uncertainty bound.

    The state is accepted iff vxx > 0, vpp > 0 and
    vxx·vpp − vxp² ≥ ħ²/4 − SR_MARGIN_TOL·max(ħ², vxx·vpp). The tolerance
    scales with the variance product so that exactly-saturating states, and
    their images under the exact flows, still validate at any scale. Each
    violation message names the failing inequality and its margin.
    """
    hb2 = config.hbar**2
    violations = []
    if not state.vxx > 0:
        violations.append(f"vxx > 0 violated: vxx = {state.vxx}")
    if not state.vpp > 0:
        violations.append(f"vpp > 0 violated: vpp = {state.vpp}")
    margin = state.vxx * state.vpp - state.vxp**2 - 0.25 * hb2
    if margin < -SR_MARGIN_TOL * max(hb2, state.vxx * state.vpp):
        violations.append(
            "Schrodinger-Robertson violated: "
            f"vxx*vpp - vxp^2 - hbar^2/4 = {margin:.6g} (must be >= 0)"
        )
    return ValidationReport(ok=not violations, violations=tuple(violations), sr_margin=margin)


def _validation_config(model: SystemModel, config: PhysConfig) -> PhysConfig:
    # Dimensionless quadratures carry [x, p] = i regardless of config.hbar.
    if isinstance(model, DimensionlessOscillator):
        return PhysConfig(hbar=1.0)
    return config


def flow_map(model: SystemModel, t: float) -> np.ndarray:
    """2×2 symplectic matrix propagating (x, p) deviations for time t.

    det = 1 holds exactly up to rounding for every model; negative t gives
    the inverse flow.
    """
    if isinstance(model, FreeMass):
        return np.array([[1.0, t / model.m], [0.0, 1.0]])
    if isinstance(model, Oscillator):
        th = model.omega * t
        c, s = math.cos(th), math.sin(th)
        mw = model.m * model.omega
        return np.array([[c, s / mw], [-mw * s, c]])
    if isinstance(model, DimensionlessOscillator):
        th = model.omega * t
        c, s = math.cos(th), math.sin(th)
        return np.array([[c, s], [-s, c]])
    raise TypeError(f"unknown system model: {model!r}")


def evolve(
    state: GaussianState,
    model: SystemModel,
    t: float,
    config: PhysConfig = PhysConfig(),
) -> GaussianState:
    """Propagate a Gaussian state for time t under the model's Hamiltonian.

    mean → M·mean and V → M·V·Mᵀ with M = flow_map(model, t). The evolution
    is exact (no discretization) and preserves the Schrödinger-Robertson
    invariant vxx·vpp − vxp², since det M = 1.

    Raises StateValidationError if the input state is invalid.
    """
    report = validate_state(state, _validation_config(model, config))
    if not report.ok:
        raise StateValidationError("; ".join(report.violations))
    M = flow_map(model, t)
    mean = M @ state.mean
    cov = M @ state.cov @ M.T
    return GaussianState.from_moments(mean, cov)


def variance_x_closed_form(
    state: GaussianState,
    model: SystemModel,
    t: float,
    config: PhysConfig = PhysConfig(),
) -> float:
    """σ²(X(t)) by direct closed-form evaluation.

    Free mass:      vxx + 2(t/m)·vxp + (t/m)²·vpp
    Oscillator:     cos²ωt·vxx + sin²ωt/(mω)²·vpp + sin 2ωt/(mω)·vxp
    Dimensionless:  cos²ωt·vxx + sin²ωt·vpp + sin 2ωt·vxp

    Redundant with evolve(...).vxx (agrees to ~1e−12 relative); kept as an
    independent cross-check path.
    """
    report = validate_state(state, _validation_config(model, config))
    if not report.ok:
        raise StateValidationError("; ".join(report.violations))
    if isinstance(model, FreeMass):
        u = t / model.m
        return state.vxx + 2.0 * u * state.vxp + u * u * state.vpp
    if isinstance(model, Oscillator):
        th = model.omega * t
        c2, s2 = math.cos(th) ** 2, math.sin(th) ** 2
        mw = model.m * model.omega
        return c2 * state.vxx + s2 / mw**2 * state.vpp + math.sin(2.0 * th) / mw * state.vxp
    if isinstance(model, DimensionlessOscillator):
        th = model.omega * t
        c2, s2 = math.cos(th) ** 2, math.sin(th) ** 2
        return c2 * state.vxx + s2 * state.vpp + math.sin(2.0 * th) * state.vxp
    raise TypeError(f"unknown system model: {model!r}")
