"""Two-sided envelopes on position/momentum variance under free evolution.

For any state with initial variances (vxx0, vpp0), the Schrödinger-Robertson
bound |2·vxp| ≤ √(4·vxx0·vpp0 − ħ²) pins the cross term of the exact variance
evolution, giving state-independent envelopes. Free mass:

    vxx0 + (t/m)²·vpp0 ∓ (t/m)·√(4·vxx0·vpp0 − ħ²)  ≤/≥  σ²(X(t))

and analogously for the oscillator with the cos²/sin² quadrature rotation.
The lower envelope dips below the heuristic ħt/m line (see sql_reference)
whenever the uncertainty product exceeds its minimum: contractive states
exist that track the lower envelope exactly (see quvar.extremal).

Envelope functions accept t ≥ 0 only; time-reversed analysis is out of scope
here (the underlying flows in quvar.gaussian do accept negative t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "BoundPair",
    "free_mass_bounds",
    "free_mass_lower_alt_forms",
    "contraction_time_free",
    "oscillator_bounds_x",
    "oscillator_bounds_p",
    "oscillator_bounds_dimensional",
    "contraction_phase_osc",
    "sql_reference",
]


@dataclass(frozen=True)
class BoundPair:
    """Lower/upper variance envelope values at one time (or phase ωt)."""

    lower: float
    upper: float
    t: float


def sqrt_uncertainty_excess(vxx0: float, vpp0: float, hbar: float = 1.0) -> float:
    """√(4·vxx0·vpp0 − ħ²), the envelope half-width scale.

    Arguments within −1e−12·max(ħ², 4·vxx0·vpp0) of zero are clamped to 0 so
    that exactly-saturating inputs built in floating point pass; anything
    more negative is an invalid uncertainty product and raises.
    """
    if not vxx0 > 0 or not vpp0 > 0:
        raise ValueError(f"variances must be positive, got vxx0={vxx0}, vpp0={vpp0}")
    arg = 4.0 * vxx0 * vpp0 - hbar * hbar
    tol = 1e-12 * max(hbar * hbar, 4.0 * vxx0 * vpp0)
    if arg < -tol:
        raise ValueError(
            f"uncertainty product below minimum: vxx0*vpp0 = {vxx0 * vpp0:.6g} "
            f"< hbar^2/4 = {0.25 * hbar * hbar:.6g}"
        )
    return math.sqrt(max(arg, 0.0))


def _require_time(t: float) -> None:
    if not t >= 0:
        raise ValueError(f"t must be >= 0, got {t}")


def free_mass_bounds(vxx0: float, vpp0: float, m: float, hbar: float, t: float) -> BoundPair:
    """Envelopes on σ²(X(t)) for a free mass of mass m.

    lower/upper = vxx0 + (t/m)²·vpp0 ∓ (t/m)·√(4·vxx0·vpp0 − ħ²). The lower
    envelope never drops below its analytic floor ħ²/(4·vpp0), reached at
    t = t_M/2; the returned value is snapped to that floor when rounding
    would put it underneath.
    """
    _require_time(t)
    if not m > 0:
        raise ValueError(f"m must be > 0, got {m}")
    s = sqrt_uncertainty_excess(vxx0, vpp0, hbar)
    u = t / m
    base = vxx0 + u * u * vpp0
    upper = base + u * s
    # Snap rounding dust up to the analytic floor, but never above the upper
    # side (the floor itself can land one ulp high at minimal products).
    lower = min(max(base - u * s, hbar * hbar / (4.0 * vpp0)), upper)
    return BoundPair(lower=lower, upper=upper, t=t)


def contraction_time_free(vxx0: float, vpp0: float, m: float, hbar: float) -> float:
    """Longest time the optimal contractive state keeps σ²(X(t)) ≤ σ²(X(0)).

    t_M = (m/vpp0)·√(4·vxx0·vpp0 − ħ²); zero at minimum uncertainty. On the
    lower envelope σ²(X(t_M)) returns exactly to vxx0, with the global
    minimum ħ²/(4·vpp0) reached at t_M/2.
    """
    if not m > 0:
        raise ValueError(f"m must be > 0, got {m}")
    return m / vpp0 * sqrt_uncertainty_excess(vxx0, vpp0, hbar)


def free_mass_lower_alt_forms(
    vxx0: float, vpp0: float, m: float, hbar: float, t: float
) -> tuple[float, float]:
    """Two algebraically equivalent rewrites of the free-mass lower envelope.

    form1 = (ħ/(2σP))² + (σP/m)²·(t − t_M/2)²   (vertex form)
    form2 = (t/m)·(2σXσP − √(4σX²σP² − ħ²)) + (t·σP/m − σX)²

    Both equal free_mass_bounds(...).lower identically; they are exposed as
    redundant evaluation paths for cross-checking.
    """
    _require_time(t)
    sx = math.sqrt(vxx0)
    sp = math.sqrt(vpp0)
    s = sqrt_uncertainty_excess(vxx0, vpp0, hbar)
    t_m = contraction_time_free(vxx0, vpp0, m, hbar)
    form1 = (hbar / (2.0 * sp)) ** 2 + (sp / m) ** 2 * (t - 0.5 * t_m) ** 2
    u = t / m
    form2 = u * (2.0 * sx * sp - s) + (u * sp - sx) ** 2
    return form1, form2


def oscillator_bounds_x(vxx0: float, vpp0: float, phase: float) -> BoundPair:
    """Envelopes on σ²(x(t)) for the dimensionless oscillator, phase = ωt.

    cos²ωt·vxx0 + sin²ωt·vpp0 ∓ ½|sin 2ωt|·√(4·vxx0·vpp0 − 1). Variances are
    in quadrature units ([x, p] = i), so the product floor is 1/4.
    """
    _require_time(phase)
    s = sqrt_uncertainty_excess(vxx0, vpp0, 1.0)
    c2 = math.cos(phase) ** 2
    s2 = math.sin(phase) ** 2
    half = 0.5 * abs(math.sin(2.0 * phase)) * s
    center = c2 * vxx0 + s2 * vpp0
    return BoundPair(lower=max(center - half, 0.0), upper=center + half, t=phase)


def oscillator_bounds_p(vxx0: float, vpp0: float, phase: float) -> BoundPair:
    """Envelopes on σ²(p(t)) for the dimensionless oscillator (cos²/sin² swap)."""
    _require_time(phase)
    s = sqrt_uncertainty_excess(vxx0, vpp0, 1.0)
    c2 = math.cos(phase) ** 2
    s2 = math.sin(phase) ** 2
    half = 0.5 * abs(math.sin(2.0 * phase)) * s
    center = s2 * vxx0 + c2 * vpp0
    return BoundPair(lower=max(center - half, 0.0), upper=center + half, t=phase)


def oscillator_bounds_dimensional(
    vxx0: float, vpp0: float, m: float, omega: float, hbar: float, t: float
) -> BoundPair:
    """Envelopes on σ²(X(t)) for a dimensional oscillator.

    cos²ωt·vxx0 + sin²ωt/(mω)²·vpp0 ∓ |sin 2ωt|/(2mω)·√(4·vxx0·vpp0 − ħ²).
    As ω → 0 at fixed t this converges to free_mass_bounds with O(ω²) error.
    """
    _require_time(t)
    if not m > 0 or not omega > 0:
        raise ValueError(f"m and omega must be > 0, got m={m}, omega={omega}")
    s = sqrt_uncertainty_excess(vxx0, vpp0, hbar)
    th = omega * t
    c2 = math.cos(th) ** 2
    s2 = math.sin(th) ** 2
    mw = m * omega
    center = c2 * vxx0 + s2 / mw**2 * vpp0
    half = abs(math.sin(2.0 * th)) / (2.0 * mw) * s
    return BoundPair(lower=max(center - half, 0.0), upper=center + half, t=t)


def contraction_phase_osc(vxx0: float, vpp0: float) -> float:
    """Phase ωt_M′ ∈ (0, π) below which the optimal oscillator contractive
    state keeps σ²(x(t)) ≤ σ²(x(0)).

    ωt_M′ = atan2(√(4·vxx0·vpp0 − 1), vpp0 − vxx0). The two-argument branch is
    deliberate: it stays in (0, π) also for vpp0 < vxx0, where the principal
    arctangent would go negative. A minimal uncertainty product admits no
    contraction and is reported as a zero horizon.
    """
    s = sqrt_uncertainty_excess(vxx0, vpp0, 1.0)
    if s == 0.0:
        return 0.0
    return math.atan2(s, vpp0 - vxx0)


def sql_reference(m: float, hbar: float, t: float) -> float:
    """The heuristic ħt/m line, for plotting comparison only.

    This is NOT a valid bound: contractive states beat it. It is emitted
    alongside the true envelopes so plots can show the violation.
    """
    _require_time(t)
    if not m > 0:
        raise ValueError(f"m must be > 0, got {m}")
    return hbar * t / m
