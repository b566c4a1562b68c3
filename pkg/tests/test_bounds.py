import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quvar import (
    DimensionlessOscillator,
    ExtremalSpec,
    FreeMass,
    GaussianState,
    Oscillator,
    contraction_phase_osc,
    contraction_time_free,
    evolve,
    free_mass_bounds,
    free_mass_lower_alt_forms,
    gaussian_from_extremal,
    oscillator_bounds_dimensional,
    oscillator_bounds_p,
    oscillator_bounds_x,
    sql_reference,
)

SQRT3 = math.sqrt(3.0)


@st.composite
def variance_pairs(draw):
    vxx = draw(st.floats(0.05, 50.0))
    vpp = draw(st.floats(max(0.25 / vxx, 0.01), 100.0))
    return vxx, vpp


class TestFreeMassBounds:
    def test_reference_point(self):
        pair = free_mass_bounds(1.0, 1.0, 1.0, 1.0, 1.0)
        assert pair.lower == pytest.approx(2.0 - SQRT3, rel=1e-14)
        assert pair.upper == pytest.approx(2.0 + SQRT3, rel=1e-14)

    def test_minimum_uncertainty_collapses(self):
        for t in (0.0, 0.7, 3.0):
            pair = free_mass_bounds(0.5, 0.5, 1.0, 1.0, t)
            want = 0.5 + t * t * 0.5
            assert pair.lower == pytest.approx(want, rel=1e-12)
            assert pair.upper == pytest.approx(want, rel=1e-12)

    def test_t0(self):
        pair = free_mass_bounds(0.8, 2.0, 1.3, 1.0, 0.0)
        assert pair.lower == pair.upper == 0.8

    def test_invalid_product_raises(self):
        with pytest.raises(ValueError, match="uncertainty product"):
            free_mass_bounds(0.1, 0.1, 1.0, 1.0, 1.0)

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError, match="t must be >= 0"):
            free_mass_bounds(1.0, 1.0, 1.0, 1.0, -0.5)

    @given(variance_pairs(), st.floats(0.0, 10.0), st.floats(0.1, 10.0))
    def test_lower_positive_and_floored(self, pair, t, m):
        vxx, vpp = pair
        b = free_mass_bounds(vxx, vpp, m, 1.0, t)
        assert 0.0 < b.lower <= b.upper
        assert b.lower >= 1.0 / (4.0 * vpp) * (1.0 - 1e-12)


class TestAltForms:
    def test_reference_point(self):
        f1, f2 = free_mass_lower_alt_forms(1.0, 1.0, 1.0, 1.0, 1.0)
        assert f1 == pytest.approx(2.0 - SQRT3, rel=1e-12)
        assert f2 == pytest.approx(2.0 - SQRT3, rel=1e-12)

    def test_minimum_uncertainty(self):
        for t in (0.0, 1.2):
            f1, f2 = free_mass_lower_alt_forms(0.5, 0.5, 1.0, 1.0, t)
            want = 0.5 + t * t * 0.5
            assert f1 == pytest.approx(want, rel=1e-12)
            assert f2 == pytest.approx(want, rel=1e-12)

    def test_vertex_hits_global_minimum(self):
        vxx, vpp, m, hbar = 2.0, 3.0, 1.5, 1.0
        t_m = contraction_time_free(vxx, vpp, m, hbar)
        f1, _ = free_mass_lower_alt_forms(vxx, vpp, m, hbar, 0.5 * t_m)
        assert f1 == pytest.approx(hbar**2 / (4.0 * vpp), rel=1e-12)

    @given(variance_pairs(), st.floats(0.0, 10.0), st.floats(0.1, 10.0))
    def test_identical_to_lower_everywhere(self, pair, t, m):
        vxx, vpp = pair
        lower = free_mass_bounds(vxx, vpp, m, 1.0, t).lower
        f1, f2 = free_mass_lower_alt_forms(vxx, vpp, m, 1.0, t)
        assert f1 == pytest.approx(lower, rel=1e-10)
        assert f2 == pytest.approx(lower, rel=1e-10)


class TestContractionTimeFree:
    def test_reference_point(self):
        assert contraction_time_free(1.0, 1.0, 1.0, 1.0) == pytest.approx(SQRT3, rel=1e-14)

    def test_minimum_uncertainty_zero(self):
        assert contraction_time_free(0.5, 0.5, 1.0, 1.0) == 0.0

    def test_linear_in_mass(self):
        t1 = contraction_time_free(1.0, 2.0, 1.0, 1.0)
        t2 = contraction_time_free(1.0, 2.0, 2.0, 1.0)
        assert t2 == pytest.approx(2.0 * t1, rel=1e-14)

    def test_envelope_returns_to_initial_at_horizon(self):
        vxx, vpp = 1.3, 0.9
        t_m = contraction_time_free(vxx, vpp, 1.0, 1.0)
        assert free_mass_bounds(vxx, vpp, 1.0, 1.0, t_m).lower == pytest.approx(
            vxx, rel=1e-12
        )


class TestOscillatorBounds:
    def test_quarter_period_swap(self):
        pair = oscillator_bounds_x(1.3, 0.7, math.pi / 2.0)
        assert pair.lower == pytest.approx(0.7, rel=1e-12)
        assert pair.upper == pytest.approx(0.7, rel=1e-12)

    def test_reference_point(self):
        pair = oscillator_bounds_x(1.0, 1.0, math.pi / 4.0)
        assert pair.lower == pytest.approx(1.0 - SQRT3 / 2.0, rel=1e-12)
        assert pair.upper == pytest.approx(1.0 + SQRT3 / 2.0, rel=1e-12)

    def test_phase_zero(self):
        pair = oscillator_bounds_x(0.6, 1.9, 0.0)
        assert pair.lower == pair.upper == 0.6

    def test_momentum_bounds_swap_roles(self):
        x_pair = oscillator_bounds_x(1.0, 2.0, 0.3)
        p_pair = oscillator_bounds_p(2.0, 1.0, 0.3)
        assert p_pair.lower == pytest.approx(x_pair.lower, rel=1e-12)
        assert p_pair.upper == pytest.approx(x_pair.upper, rel=1e-12)

    def test_dimensional_t0_and_half_period(self):
        pair0 = oscillator_bounds_dimensional(1.1, 0.9, 2.0, 3.0, 1.0, 0.0)
        assert pair0.lower == pair0.upper == 1.1
        t_half = math.pi / 3.0  # omega*t = pi
        pair = oscillator_bounds_dimensional(1.1, 0.9, 2.0, 3.0, 1.0, t_half)
        assert pair.lower == pytest.approx(1.1, rel=1e-10)
        assert pair.upper == pytest.approx(1.1, rel=1e-10)

    def test_free_mass_limit_quadratic_in_omega(self):
        # |bound(omega) - bound_free| should shrink like omega^2.
        free = free_mass_bounds(1.0, 1.0, 1.0, 1.0, 1.0)
        omegas = np.array([1e-2, 1e-3, 1e-4])
        lower_err = []
        upper_err = []
        for w in omegas:
            pair = oscillator_bounds_dimensional(1.0, 1.0, 1.0, w, 1.0, 1.0)
            lower_err.append(abs(pair.lower - free.lower))
            upper_err.append(abs(pair.upper - free.upper))
        for err in (lower_err, upper_err):
            slope = np.polyfit(np.log(omegas), np.log(err), 1)[0]
            assert slope == pytest.approx(2.0, abs=0.1)


class TestContractionPhaseOsc:
    def test_equal_variances_give_quarter_turn(self):
        assert contraction_phase_osc(1.0, 1.0) == pytest.approx(math.pi / 2.0, rel=1e-14)

    def test_reference_point(self):
        assert contraction_phase_osc(1.0, 2.0) == pytest.approx(
            math.atan2(math.sqrt(7.0), 1.0), rel=1e-14
        )

    def test_branch_stays_below_pi_when_vpp_smaller(self):
        phase = contraction_phase_osc(2.0, 0.4)
        assert math.pi / 2.0 < phase < math.pi

    def test_wide_momentum_variance_shrinks_horizon(self):
        # vpp >> vxx at fixed product: phase -> small positive.
        phase = contraction_phase_osc(0.01, 1000.0)
        assert 0.0 < phase < 0.01

    def test_minimal_product_zero_horizon(self):
        assert contraction_phase_osc(0.5, 0.5) == 0.0


class TestSqlReference:
    def test_values(self):
        assert sql_reference(1.0, 1.0, 1.0) == 1.0
        assert sql_reference(1.0, 1.0, 0.0) == 0.0
        assert sql_reference(2.0, 1.0, 1.0) == pytest.approx(0.5)


class TestSandwich:
    @given(
        variance_pairs(),
        st.floats(-0.999, 0.999),
        st.floats(0.0, 10.0),
        st.floats(0.1, 10.0),
    )
    def test_free_mass_sandwich(self, pair, corr, t, m):
        vxx, vpp = pair
        vxp = corr * math.sqrt(max(vxx * vpp - 0.25, 0.0))
        s = GaussianState(vxx=vxx, vpp=vpp, vxp=vxp)
        got = evolve(s, FreeMass(m=m), t).vxx
        b = free_mass_bounds(vxx, vpp, m, 1.0, t)
        assert b.lower - 1e-10 <= got <= b.upper + 1e-10

    @given(
        variance_pairs(),
        st.floats(-0.999, 0.999),
        st.floats(0.0, 10.0),
        st.floats(1e-3, 10.0),
    )
    def test_oscillator_sandwich(self, pair, corr, phase, omega):
        vxx, vpp = pair
        vxp = corr * math.sqrt(max(vxx * vpp - 0.25, 0.0))
        s = GaussianState(vxx=vxx, vpp=vpp, vxp=vxp)
        t = phase / omega
        got = evolve(s, DimensionlessOscillator(omega=omega), t).vxx
        b = oscillator_bounds_x(vxx, vpp, omega * t)
        assert b.lower - 1e-10 <= got <= b.upper + 1e-10

    @given(variance_pairs(), st.floats(-0.999, 0.999), st.floats(0.0, 10.0))
    def test_oscillator_momentum_sandwich(self, pair, corr, phase):
        vxx, vpp = pair
        vxp = corr * math.sqrt(max(vxx * vpp - 0.25, 0.0))
        s = GaussianState(vxx=vxx, vpp=vpp, vxp=vxp)
        got = evolve(s, DimensionlessOscillator(omega=1.0), phase).vpp
        b = oscillator_bounds_p(vxx, vpp, phase)
        assert b.lower - 1e-10 <= got <= b.upper + 1e-10

    @given(
        variance_pairs(),
        st.floats(-0.999, 0.999),
        st.floats(0.0, 10.0),
        st.floats(0.2, 5.0),
        st.floats(0.2, 5.0),
    )
    def test_dimensional_oscillator_sandwich(self, pair, corr, t, m, omega):
        vxx, vpp = pair
        vxp = corr * math.sqrt(max(vxx * vpp - 0.25, 0.0))
        s = GaussianState(vxx=vxx, vpp=vpp, vxp=vxp)
        got = evolve(s, Oscillator(m=m, omega=omega), t).vxx
        b = oscillator_bounds_dimensional(vxx, vpp, m, omega, 1.0, t)
        assert b.lower - 1e-9 <= got <= b.upper + 1e-9


class TestSaturation:
    def test_extremal_states_track_envelopes(self):
        vxx, vpp, m, hbar = 1.0, 1.0, 1.0, 1.0
        t_m = contraction_time_free(vxx, vpp, m, hbar)
        model = FreeMass(m=m)
        for sign, side in ((1, "lower"), (-1, "upper")):
            state = gaussian_from_extremal(
                ExtremalSpec.from_variances(vxx, vpp, hbar, sign), hbar=hbar
            )
            for t in np.linspace(0.0, 3.0 * t_m, 50):
                got = evolve(state, model, float(t)).vxx
                want = getattr(free_mass_bounds(vxx, vpp, m, hbar, float(t)), side)
                assert got == pytest.approx(want, rel=1e-9)


class TestSqlViolation:
    def test_lower_bound_far_below_sql_line(self):
        # 4*vxx*vpp/hbar^2 = 1e4; pick t so (t/m)*vpp = sigma_x*sigma_p.
        vxx = vpp = 50.0
        m = hbar = 1.0
        sx, sp = math.sqrt(vxx), math.sqrt(vpp)
        t = m * sx * sp / vpp
        lower = free_mass_bounds(vxx, vpp, m, hbar, t).lower
        sql = sql_reference(m, hbar, t)
        assert lower < 0.01 * sql
        asymptote = t * hbar**2 / (4.0 * m * sx * sp)
        assert lower == pytest.approx(asymptote, rel=0.1)
