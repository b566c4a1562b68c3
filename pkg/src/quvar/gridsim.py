"""Brute-force wavefunction oracle on a uniform spatial grid.

Everything the closed-form Gaussian engine claims is re-derivable here the
hard way: sample the wavefunction pointwise, propagate it with FFT-based
spectral methods, and compute moments by quadrature. Agreement between the
two routes is the package's core correctness argument.

Conventions (bit-exact, since vpp depends on them):

* grid points x_j = x_min + j·dx, j = 0..n−1, dx = (x_max − x_min)/n; the
  wrap point x_max is not a sample;
* momentum grid p_j = 2πħ·j/L for j ∈ [−n/2, n/2), L = x_max − x_min,
  stored in FFT order (``2π·ħ·numpy.fft.fftfreq(n, dx)``);
* position integrals use the trapezoid rule on the uniform grid, which is
  spectrally accurate for smooth decaying integrands; momentum moments are
  Parseval sums over the discrete spectral density.

Free evolution is exact up to discretization (pure momentum-space phase).
The oscillator uses the symmetric split step (half potential, full kinetic,
half potential), second order in t/n_steps; both preserve the quadrature
norm to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .bounds import (
    free_mass_bounds,
    oscillator_bounds_dimensional,
    oscillator_bounds_x,
    sqrt_uncertainty_excess,
)
from .extremal import ExtremalSpec, variances_from_complex_width
from .gaussian import (
    DimensionlessOscillator,
    FreeMass,
    GaussianState,
    Oscillator,
    PhysConfig,
    SystemModel,
    evolve,
    flow_map,
    validate_state,
)

__all__ = [
    "Grid",
    "WaveFn",
    "Moments",
    "GridError",
    "AliasingError",
    "ConvergenceError",
    "sample_gaussian",
    "sample_extremal",
    "quadrature_norm",
    "moments",
    "propagate_free",
    "propagate_osc",
    "propagate_osc_adaptive",
    "verify_bounds_oracle",
    "OracleReport",
    "wavefn_csv",
]


class GridError(ValueError):
    """Grid cannot faithfully represent the requested wavefunction."""


class AliasingError(GridError):
    """Momentum content or spreading exceeds what the grid resolves."""


class ConvergenceError(RuntimeError):
    """Split-step refinement hit its cap before reaching the tolerance."""


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [x_min, x_max) with n points, n a power of two."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self) -> None:
        if not self.x_max > self.x_min:
            raise ValueError(f"x_max must exceed x_min, got [{self.x_min}, {self.x_max}]")
        if self.n < 2 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"n must be a power of two >= 2, got {self.n}")

    @classmethod
    def centered(cls, center: float, half_width: float, n: int) -> "Grid":
        return cls(x_min=center - half_width, x_max=center + half_width, n=n)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.n

    def points(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    def momenta(self, hbar: float) -> np.ndarray:
        """p_j = 2πħ·j/L in FFT order."""
        return 2.0 * math.pi * hbar * np.fft.fftfreq(self.n, d=self.dx)


@dataclass(frozen=True, eq=False)
class WaveFn:
    """Complex amplitudes in position representation on a Grid."""

    grid: Grid
    amps: np.ndarray
    hbar: float = 1.0


@dataclass(frozen=True)
class Moments:
    """Quadrature moments of a wavefunction; same semantics as GaussianState."""

    norm: float
    mean_x: float
    mean_p: float
    vxx: float
    vpp: float
    vxp: float

    def to_state(self) -> GaussianState:
        return GaussianState(
            mean_x=self.mean_x, mean_p=self.mean_p, vxx=self.vxx, vpp=self.vpp, vxp=self.vxp
        )


def quadrature_norm(psi: WaveFn) -> float:
    """∫|ψ|² dx by the trapezoid rule."""
    return float(np.trapezoid(np.abs(psi.amps) ** 2, dx=psi.grid.dx))


def sample_gaussian(
    width: complex,
    mean_x: float,
    mean_p: float,
    grid: Grid,
    hbar: float = 1.0,
) -> WaveFn:
    """Sample ψ(x) = (Re w/(πħ))^¼ exp(i⟨P⟩x/ħ − w(x−⟨X⟩)²/(2ħ)) pointwise.

    The prefactor normalizes the continuum integral exactly; the quadrature
    norm is checked against 1 and a deficit beyond 1e−8 raises GridError
    (grid too narrow or too coarse).
    """
    if not width.real > 0:
        raise ValueError(f"Re(width) must be > 0, got {width}")
    sigma_x = math.sqrt(hbar / (2.0 * width.real))
    if grid.x_min > mean_x - 8.0 * sigma_x or grid.x_max < mean_x + 8.0 * sigma_x:
        raise GridError(
            f"grid [{grid.x_min:g}, {grid.x_max:g}] does not cover "
            f"mean_x ± 8σ = {mean_x:g} ± {8.0 * sigma_x:g}"
        )
    # An unresolvable momentum support would alias silently at sampling (the
    # measured moments of the aliased state look healthy), so guard here.
    sigma_p = math.sqrt(hbar * abs(width) ** 2 / (2.0 * width.real))
    limit = math.pi * hbar / (abs(mean_p) + 6.0 * sigma_p)
    if not grid.dx < limit:
        raise AliasingError(
            f"dx = {grid.dx:.3g} cannot represent mean_p = {mean_p:g} with "
            f"σP = {sigma_p:.3g} (need dx < πħ/(|⟨P⟩| + 6σP) = {limit:.3g})"
        )
    x = grid.points()
    dev = x - mean_x
    amps = (width.real / (math.pi * hbar)) ** 0.25 * np.exp(
        1j * mean_p * x / hbar - width * dev * dev / (2.0 * hbar)
    )
    psi = WaveFn(grid=grid, amps=amps, hbar=hbar)
    norm = quadrature_norm(psi)
    if abs(norm - 1.0) > 1e-8:
        raise GridError(f"sampled norm deviates from 1 by {abs(norm - 1.0):.3g}; refine the grid")
    return psi


def sample_extremal(
    spec: ExtremalSpec,
    mean_x: float,
    mean_p: float,
    grid: Grid,
    hbar: float = 1.0,
) -> WaveFn:
    """Sample the envelope-saturating state described by spec."""
    return sample_gaussian(spec.width, mean_x, mean_p, grid, hbar)


def moments(psi: WaveFn, check_norm: bool = True) -> Moments:
    """Position moments by trapezoid quadrature, momentum moments spectrally.

    vxp = Re⟨ψ|(X−⟨X⟩)(P̂−⟨P⟩)|ψ⟩ with P̂ applied through the FFT; the real
    part is automatically the symmetrized covariance. Raises GridError if
    the quadrature norm deviates from 1 by more than 1e−6.
    """
    grid, a, hbar = psi.grid, psi.amps, psi.hbar
    dx = grid.dx
    x = grid.points()
    dens = np.abs(a) ** 2
    norm = float(np.trapezoid(dens, dx=dx))
    if check_norm and abs(norm - 1.0) > 1e-6:
        raise GridError(f"norm deviates from 1 by {abs(norm - 1.0):.3g}")
    mean_x = float(np.trapezoid(x * dens, dx=dx)) / norm
    dev = x - mean_x
    vxx = float(np.trapezoid(dev * dev * dens, dx=dx)) / norm

    phi = np.fft.fft(a)
    p = grid.momenta(hbar)
    # |φ(p_j)|² with φ the continuum transform: Σ dens_p·Δp ≈ 1 by Parseval.
    dens_p = np.abs(phi) ** 2 * dx * dx / (2.0 * math.pi * hbar)
    dp = 2.0 * math.pi * hbar / grid.length
    norm_p = float(np.sum(dens_p)) * dp
    mean_p = float(np.sum(p * dens_p)) * dp / norm_p
    vpp = float(np.sum((p - mean_p) ** 2 * dens_p)) * dp / norm_p

    p_psi = np.fft.ifft(p * phi)
    vxp = float(
        np.real(np.trapezoid(np.conj(a) * dev * (p_psi - mean_p * a), dx=dx)) / norm
    )
    return Moments(norm=norm, mean_x=mean_x, mean_p=mean_p, vxx=vxx, vpp=vpp, vxp=vxp)


def _check_momentum_resolution(psi: WaveFn, mom: Moments) -> None:
    sigma_p = math.sqrt(mom.vpp)
    limit = math.pi * psi.hbar / (abs(mom.mean_p) + 6.0 * sigma_p)
    if not psi.grid.dx < limit:
        raise AliasingError(
            f"dx = {psi.grid.dx:.3g} does not resolve the momentum support "
            f"(need dx < πħ/(|⟨P⟩| + 6σP) = {limit:.3g})"
        )


def _check_result(psi: WaveFn) -> None:
    mom = moments(psi, check_norm=False)
    sigma_x = math.sqrt(mom.vxx)
    if (
        mom.mean_x - 8.0 * sigma_x < psi.grid.x_min
        or mom.mean_x + 8.0 * sigma_x > psi.grid.x_max
    ):
        raise AliasingError(
            f"spreading exceeds domain: mean_x ± 8σ = {mom.mean_x:g} ± "
            f"{8.0 * sigma_x:g} leaves [{psi.grid.x_min:g}, {psi.grid.x_max:g}]"
        )
    if abs(mom.norm - 1.0) > 1e-6:
        raise AliasingError(
            f"quadrature norm drifted by {abs(mom.norm - 1.0):.3g}: "
            "density reached the domain boundary"
        )


def propagate_free(psi: WaveFn, m: float, t: float) -> WaveFn:
    """Free evolution: multiply exp(−i p² t/(2mħ)) in momentum space.

    Exact up to discretization and unitary (norm preserved to rounding).
    Raises AliasingError when the momentum support is unresolved or the
    final 8σ window leaves the domain.
    """
    if not m > 0:
        raise ValueError(f"m must be > 0, got {m}")
    _check_momentum_resolution(psi, moments(psi))
    p = psi.grid.momenta(psi.hbar)
    phi = np.fft.fft(psi.amps)
    phi *= np.exp(-1j * p * p * t / (2.0 * m * psi.hbar))
    out = WaveFn(grid=psi.grid, amps=np.fft.ifft(phi), hbar=psi.hbar)
    _check_result(out)
    return out


def propagate_osc(psi: WaveFn, m: float, omega: float, t: float, n_steps: int) -> WaveFn:
    """Oscillator evolution by symmetric split step, V = ½mω²x².

    (e^{−iV dt/2ħ} e^{−iT dt/ħ} e^{−iV dt/2ħ})^n_steps with dt = t/n_steps;
    second-order accurate in dt, exactly unitary per step. ω = 0 reduces to
    the free propagator (the potential phase is identically 1).
    """
    if not m > 0:
        raise ValueError(f"m must be > 0, got {m}")
    if omega < 0:
        raise ValueError(f"omega must be >= 0, got {omega}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    _check_momentum_resolution(psi, moments(psi))
    dt = t / n_steps
    x = psi.grid.points()
    p = psi.grid.momenta(psi.hbar)
    half_v = np.exp(-1j * m * omega * omega * x * x * dt / (4.0 * psi.hbar))
    full_v = half_v * half_v
    kinetic = np.exp(-1j * p * p * dt / (2.0 * m * psi.hbar))

    a = psi.amps * half_v
    for step in range(n_steps):
        a = np.fft.ifft(kinetic * np.fft.fft(a))
        if step < n_steps - 1:
            a = a * full_v
    a = a * half_v
    out = WaveFn(grid=psi.grid, amps=a, hbar=psi.hbar)
    _check_result(out)
    return out


_MOMENT_FIELDS = ("mean_x", "mean_p", "vxx", "vpp", "vxp")


def _moment_delta(a: Moments, b: Moments) -> float:
    return max(abs(getattr(a, f) - getattr(b, f)) for f in _MOMENT_FIELDS)


def propagate_osc_adaptive(
    psi: WaveFn,
    m: float,
    omega: float,
    t: float,
    moment_tol: float = 1e-8,
    n_steps_start: int = 4096,
    n_steps_cap: int = 65536,
) -> tuple[WaveFn, float, int]:
    """Split-step with n_steps doubled until moments move by < moment_tol.

    Returns (wavefunction, last moment change, n_steps used). Raises
    ConvergenceError with the achieved error estimate if the cap is hit.
    """
    n = n_steps_start
    prev = propagate_osc(psi, m, omega, t, n)
    prev_m = moments(prev)
    delta = math.inf
    while 2 * n <= n_steps_cap:
        n *= 2
        cur = propagate_osc(psi, m, omega, t, n)
        cur_m = moments(cur)
        delta = _moment_delta(cur_m, prev_m)
        if delta < moment_tol:
            return cur, delta, n
        prev, prev_m = cur, cur_m
    raise ConvergenceError(
        f"no convergence below {moment_tol:g} at n_steps cap {n_steps_cap}; "
        f"achieved moment change estimate {delta:.3g}"
    )


def _propagate(
    psi: WaveFn, model: SystemModel, t: float, n_steps: Optional[int]
) -> WaveFn:
    def split_step(m_eff: float, omega: float) -> WaveFn:
        # n_steps None: auto-refine from the desk default until the moments
        # settle below 1e-8 (cap 2^16).
        if n_steps is None:
            return propagate_osc_adaptive(psi, m_eff, omega, t)[0]
        return propagate_osc(psi, m_eff, omega, t, n_steps)

    if isinstance(model, FreeMass):
        return propagate_free(psi, model.m, t)
    if isinstance(model, Oscillator):
        return split_step(model.m, model.omega)
    if isinstance(model, DimensionlessOscillator):
        if model.omega == 0.0 or t == 0.0:
            return WaveFn(grid=psi.grid, amps=psi.amps.copy(), hbar=psi.hbar)
        # i∂ψ/∂t = ½ω(−∂² + x²)ψ is an oscillator with m_eff = 1/ω, ω_eff = ω.
        return split_step(1.0 / model.omega, model.omega)
    raise TypeError(f"unknown system model: {model!r}")


def _spec_from_state(state: GaussianState, hbar: float) -> ExtremalSpec:
    report = validate_state(state, PhysConfig(hbar))
    if not report.ok:
        raise ValueError("; ".join(report.violations))
    if abs(report.sr_margin) > 1e-9 * max(hbar * hbar, state.vxx * state.vpp):
        raise ValueError(
            "grid oracle requires a pure Gaussian state (Schrodinger-Robertson "
            f"saturated); margin = {report.sr_margin:.3g}"
        )
    width = complex(hbar / (2.0 * state.vxx), -state.vxp / state.vxx)
    return ExtremalSpec(width=width, sign=1 if state.vxp <= 0 else -1)


def _extremal_variance_x(
    model: SystemModel, vxx0: float, vpp0: float, sign: int, t: float, hbar: float
) -> float:
    """σ²(X(t)) of the saturating state, evaluated via the envelope formulas."""
    if isinstance(model, FreeMass):
        pair = free_mass_bounds(vxx0, vpp0, model.m, hbar, t)
        return pair.lower if sign > 0 else pair.upper
    if isinstance(model, DimensionlessOscillator):
        th = model.omega * t
        s = sqrt_uncertainty_excess(vxx0, vpp0, 1.0)
        return (
            math.cos(th) ** 2 * vxx0
            + math.sin(th) ** 2 * vpp0
            - sign * 0.5 * math.sin(2.0 * th) * s
        )
    if isinstance(model, Oscillator):
        th = model.omega * t
        s = sqrt_uncertainty_excess(vxx0, vpp0, hbar)
        mw = model.m * model.omega
        return (
            math.cos(th) ** 2 * vxx0
            + math.sin(th) ** 2 / mw**2 * vpp0
            - sign * math.sin(2.0 * th) / (2.0 * mw) * s
        )
    raise TypeError(f"unknown system model: {model!r}")


def _envelope_upper(model: SystemModel, vxx0: float, vpp0: float, t: float, hbar: float) -> float:
    if isinstance(model, FreeMass):
        return free_mass_bounds(vxx0, vpp0, model.m, hbar, t).upper
    if isinstance(model, DimensionlessOscillator):
        return oscillator_bounds_x(vxx0, vpp0, model.omega * t).upper
    if isinstance(model, Oscillator):
        return oscillator_bounds_dimensional(vxx0, vpp0, model.m, model.omega, hbar, t).upper
    raise TypeError(f"unknown system model: {model!r}")


@dataclass(frozen=True)
class OracleRow:
    t: float
    moment_dev: float
    envelope_dev: float


@dataclass(frozen=True)
class OracleReport:
    """Max deviation between grid-oracle moments and the closed-form engine."""

    rows: tuple[OracleRow, ...]
    max_moment_dev: float
    max_envelope_dev: float
    tolerance: float
    ok: bool

    def render(self) -> str:
        lines = ["t,moment_dev,envelope_dev"]
        for row in self.rows:
            lines.append(f"{row.t:.17g},{row.moment_dev:.17g},{row.envelope_dev:.17g}")
        status = "OK" if self.ok else "FAIL"
        lines.append(
            f"max moment deviation {self.max_moment_dev:.3g}, "
            f"max envelope deviation {self.max_envelope_dev:.3g}, "
            f"tolerance {self.tolerance:.3g}: {status}"
        )
        return "\n".join(lines)


def verify_bounds_oracle(
    target: Union[ExtremalSpec, GaussianState],
    model: SystemModel,
    times,
    mean_x: float = 0.0,
    mean_p: float = 0.0,
    hbar: float = 1.0,
    n: int = 2**14,
    domain_sigmas: float = 40.0,
    n_steps: Optional[int] = None,
    tolerance: float = 1e-8,
) -> OracleReport:
    """Propagate a sampled state on the grid and compare against closed forms.

    For every requested time the oracle moments are held against (a) the
    symplectic evolution of quvar.gaussian and (b) the envelope value of
    quvar.bounds the pure state must saturate. Any pure Gaussian works as a
    target: passing a GaussianState requires a saturated SR margin (a mixed
    covariance has no single wavefunction). Oscillator propagation with
    n_steps=None auto-refines until the moments settle below 1e-8.
    """
    if isinstance(model, DimensionlessOscillator):
        hbar = 1.0
    if isinstance(target, GaussianState):
        spec = _spec_from_state(target, hbar)
        mean_x, mean_p = target.mean_x, target.mean_p
    else:
        spec = target
    vxx0, vpp0 = variances_from_complex_width(spec.width, hbar)
    state0 = GaussianState(
        mean_x=mean_x, mean_p=mean_p, vxx=vxx0, vpp=vpp0, vxp=-spec.width.imag * vxx0
    )

    times = [float(t) for t in times]
    if not times:
        raise ValueError("times must be a non-empty sequence")
    config = PhysConfig(hbar)
    # Domain must hold the state at every requested time: track the drifting
    # mean and the envelope's worst-case spread.
    lo, hi = math.inf, -math.inf
    for t in [0.0, *times]:
        m_t = float((flow_map(model, t) @ state0.mean)[0])
        sig = math.sqrt(_envelope_upper(model, state0.vxx, state0.vpp, t, hbar))
        lo = min(lo, m_t - domain_sigmas * sig)
        hi = max(hi, m_t + domain_sigmas * sig)
    grid = Grid(x_min=lo, x_max=hi, n=n)
    psi0 = sample_extremal(spec, mean_x, mean_p, grid, hbar)

    rows = []
    for t in times:
        psi_t = _propagate(psi0, model, t, n_steps)
        got = moments(psi_t)
        want = evolve(state0, model, t, config)
        moment_dev = max(
            abs(got.mean_x - want.mean_x),
            abs(got.mean_p - want.mean_p),
            abs(got.vxx - want.vxx),
            abs(got.vpp - want.vpp),
            abs(got.vxp - want.vxp),
        )
        env = _extremal_variance_x(model, state0.vxx, state0.vpp, spec.sign, t, hbar)
        rows.append(OracleRow(t=t, moment_dev=moment_dev, envelope_dev=abs(got.vxx - env)))

    max_m = max(r.moment_dev for r in rows)
    max_e = max(r.envelope_dev for r in rows)
    return OracleReport(
        rows=tuple(rows),
        max_moment_dev=max_m,
        max_envelope_dev=max_e,
        tolerance=tolerance,
        ok=max_m <= tolerance and max_e <= tolerance,
    )


def wavefn_csv(psi: WaveFn) -> str:
    """|ψ|² dump as CSV text with columns x, re, im, abs2."""
    lines = ["x,re,im,abs2"]
    x = psi.grid.points()
    for xi, ai in zip(x, psi.amps):
        lines.append(
            f"{xi:.17g},{ai.real:.17g},{ai.imag:.17g},{(ai.real**2 + ai.imag**2):.17g}"
        )
    return "\n".join(lines) + "\n"
