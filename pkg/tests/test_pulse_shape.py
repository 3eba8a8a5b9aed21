import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nvpulse.errors import BoundViolation, EvenHarmonic, NoRoom, OutOfRange
from nvpulse.pulse_shape import (
    ExtendedPulseSpec,
    TopHatSpec,
    extended_pulse,
    f_instantaneous,
    f_modulated,
    f_top_hat,
    f_top_hat_ratio,
    format_waveform,
    fourier_numeric,
    intrapulse_residual,
    modulation_function,
    pulse_area,
    rabi_from_modulation,
    rotation_angle,
    round_trip_error,
    solve_a1,
    square_wave,
    synthesize_modulation,
    synthesize_top_hat,
    t_pi_for_target,
)

T = 1e-6
odd = st.integers(0, 12).map(lambda k: 2 * k + 1)


def test_f_instantaneous_values():
    assert f_instantaneous(1) == pytest.approx(4 / math.pi)
    assert f_instantaneous(3) == pytest.approx(-4 / (3 * math.pi))
    assert f_instantaneous(13) == pytest.approx(4 / (13 * math.pi))
    assert f_instantaneous(4) == 0.0
    with pytest.raises(ValueError):
        f_instantaneous(0)


@given(odd, st.floats(0.0, 0.49))
def test_top_hat_forms_agree(l, frac):
    t_pi = frac * T
    x = 2 * l * t_pi / T
    if abs(1 - x * x) < 1e-6:
        return
    direct = 4 * math.sin(math.pi * l / 2) * math.cos(math.pi * l * t_pi / T) / (math.pi * l * (1 - x * x))
    assert f_top_hat(l, t_pi, T) == pytest.approx(direct, rel=1e-10, abs=1e-14)
    assert f_top_hat_ratio(l, t_pi, T) == pytest.approx(direct, rel=1e-10, abs=1e-14)


def test_top_hat_removable_point_and_short_limit():
    for l in (3, 5, 13):
        assert f_top_hat(l, T / (2 * l), T) == pytest.approx(math.sin(math.pi * l / 2) / l, abs=1e-15)
        assert f_top_hat_ratio(l, T / (2 * l), T) == pytest.approx(math.sin(math.pi * l / 2) / l)
        assert f_top_hat(l, 0.0, T) == pytest.approx(f_instantaneous(l), rel=1e-15)
    with pytest.raises(ValueError):
        f_top_hat(3, T / 2, T)


@given(odd, st.floats(0.0, 0.5))
def test_f_modulated_matches_closed_form(l, frac):
    t_pi = frac * T
    expect = 4 / (math.pi * l) * math.cos(math.pi * t_pi * l / T) * math.sin(math.pi * l / 2)
    assert f_modulated(l, t_pi, T) == pytest.approx(expect, abs=1e-15)
    assert abs(f_modulated(l, t_pi, T)) <= abs(f_instantaneous(l)) * (1 + 1e-15)


def test_f_modulated_even_harmonic():
    with pytest.raises(EvenHarmonic):
        f_modulated(2, 0.1 * T, T)


@given(odd, st.floats(-1.0, 1.0), st.integers(0, 3))
def test_t_pi_for_target_inverts_f_modulated(l, y, branch):
    target = y * 4 / (math.pi * l)
    try:
        t_pi = t_pi_for_target(l, T, target, branch)
    except NoRoom:
        assert branch + 1 > l / 2 - 1
        return
    assert branch <= t_pi * l / T <= branch + 1
    assert f_modulated(l, t_pi, T) == pytest.approx(target, abs=1e-12)


def test_t_pi_for_target_extremes_sit_on_branch_edges():
    fmax = 4 / (math.pi * 5)
    assert t_pi_for_target(5, T, fmax, 0) == 0.0
    # the negative extreme is the far edge of branch 0 and the near edge of branch 1
    assert t_pi_for_target(5, T, -fmax, 0) == t_pi_for_target(5, T, -fmax, 1) == T / 5


def test_t_pi_for_target_errors():
    with pytest.raises(OutOfRange):
        t_pi_for_target(13, T, 0.2)
    with pytest.raises(NoRoom):
        t_pi_for_target(13, T, 0.0326, branch=7)
    with pytest.raises(EvenHarmonic):
        t_pi_for_target(4, T, 0.1)


def test_spec_validation():
    with pytest.raises(EvenHarmonic):
        ExtendedPulseSpec(4, T, 0.1 * T, 0.01 * T)
    with pytest.raises(NoRoom):
        ExtendedPulseSpec(13, T, 0.5 * T, 0.01 * T)
    with pytest.raises(NoRoom):
        TopHatSpec(T, 0.6 * T)
    with pytest.raises(ValueError):
        ExtendedPulseSpec(13, T, 0.1 * T, 0.0)


def test_a1_cancels_the_window_harmonic():
    spec = extended_pulse(13, T, 6 * T / 13)
    assert abs(intrapulse_residual(spec)) <= 1e-10 * spec.t_pi
    # without the Gaussian term the window does contribute
    from dataclasses import replace

    assert abs(intrapulse_residual(replace(spec, a1=0.0))) > 1e-3 * spec.t_pi
    assert solve_a1(spec) == spec.a1


def test_modulation_function_symmetries():
    spec = extended_pulse(13, T, 6 * T / 13)
    t = np.linspace(0, T / 2, 1001)
    F = modulation_function(spec, t)
    np.testing.assert_allclose(modulation_function(spec, t + T / 2), -F, atol=1e-13)
    np.testing.assert_allclose(modulation_function(spec, t + T), F, atol=1e-13)
    assert F[0] == 1.0
    assert modulation_function(spec, T / 2 - 1e-12) == pytest.approx(-1.0)


def test_rotation_angle_spans_zero_to_pi():
    spec = extended_pulse(13, T, 6 * T / 13)
    tau = np.linspace(0, spec.t_pi, 2001)
    theta = rotation_angle(spec, tau)
    assert theta[0] == 0.0 and theta[-1] == math.pi
    np.testing.assert_allclose(np.cos(theta), modulation_function(spec, spec.t_m + tau), atol=1e-12)


def test_square_wave_fourier():
    wave = square_wave(T, 20000)
    for n in (1, 3, 13):
        assert fourier_numeric(wave, n) == pytest.approx(f_instantaneous(n), abs=1e-6)


def test_synthesized_waveforms_match_oracles():
    spec = extended_pulse(13, T, 6 * T / 13)
    wave = synthesize_modulation(spec)
    assert fourier_numeric(wave, 13) == pytest.approx(f_modulated(13, spec.t_pi, T), abs=1e-6)
    top = synthesize_top_hat(T, 0.3 * T / 13, l=13)
    assert fourier_numeric(top, 13) == pytest.approx(f_top_hat(13, 0.3 * T / 13, T), abs=1e-6)
    # the window edges are sample points
    for a, b in wave.pulse_windows:
        assert a in wave.t and b in wave.t


def test_rabi_area_and_round_trip():
    wave = rabi_from_modulation(synthesize_modulation(extended_pulse(13, T, 6 * T / 13)))
    assert all(abs(a - math.pi) < 1e-6 for a in pulse_area(wave))
    assert round_trip_error(wave) < 1e-5
    assert not np.any(wave.rabi[~wave.in_pulse()])
    top = rabi_from_modulation(synthesize_top_hat(T, 0.2 * T, l=1))
    inside = top.rabi[top.in_pulse()]
    np.testing.assert_allclose(inside, math.pi / (0.2 * T), rtol=1e-6)


def test_bound_violation_is_raised():
    # large t_pi at low l needs a big Gaussian that pushes |F| past 1
    spec = extended_pulse(5, T, 1.2 * T / 5)
    with pytest.raises(BoundViolation) as info:
        synthesize_modulation(spec)
    assert info.value.overshoot > 0
    wave = synthesize_modulation(spec, check_bound=False)
    assert np.abs(wave.F).max() > 1


def test_samples_floor():
    spec = extended_pulse(13, T, 6 * T / 13)
    with pytest.raises(ValueError, match="cannot resolve"):
        synthesize_modulation(spec, samples_per_period=100)


def test_default_sampling_resolves_short_gaussians():
    spec = extended_pulse(3, T, 0.027 * T / 3)
    wave = synthesize_modulation(spec, check_bound=False)
    assert spec.c / wave.dt >= 12
    assert fourier_numeric(wave, 3) == pytest.approx(f_modulated(3, spec.t_pi, T), abs=1e-6)


@settings(max_examples=15, deadline=None)
@given(odd.filter(lambda l: l >= 5), st.floats(0.05, 0.95))
def test_modulated_fourier_property(l, u):
    r = 0.05 + u * (l / 2 - 0.1)
    spec = extended_pulse(l, T, r * T / l)
    wave = synthesize_modulation(spec, check_bound=False)
    assert fourier_numeric(wave, l) == pytest.approx(f_modulated(l, spec.t_pi, T), abs=1e-6)


def test_format_waveform_columns():
    wave = synthesize_top_hat(T, 0.2 * T, l=1, samples_per_period=400)
    text = format_waveform(wave, ["hello"])
    rows = [ln for ln in text.splitlines() if not ln.startswith("#")]
    assert len(rows) == len(wave.t)
    assert "# hello" in text and "# family = 'top-hat'" in text
    t, F, om, m = rows[0].split()
    assert float(F) == 1.0 and m == "0"
