import math

import numpy as np
import pytest

from nvpulse.errors import Overlap, UnknownNucleus
from nvpulse.pulse_shape import extended_pulse, f_instantaneous
from nvpulse.sequence import (
    ALL_X_PHASES,
    XY8_PHASES,
    build_xy8,
    format_rwa_report,
    format_schedule,
    resonance_period,
    rwa_margins,
)
from nvpulse.spin_model import CONSTANTS, NuclearSpin, SpinBath, five_proton_bath, hyperfine_components

KHZ = 2 * math.pi * 1e3


def test_resonance_period():
    w = CONSTANTS.gamma_h
    assert resonance_period(13, w) == pytest.approx(2 * math.pi * 13 / w)
    with pytest.raises(ValueError):
        resonance_period(0, w)
    with pytest.raises(ValueError):
        resonance_period(3, -1.0)


def test_xy8_layout():
    T = 1e-6
    s = build_xy8(T, 0.1 * T, 3)
    assert s.n_pulses == 24 and s.block_size == 8
    assert s.total_time == pytest.approx(12 * T)
    pulses = s.pulses()
    centers = np.array([p.center for p in pulses])
    np.testing.assert_allclose(centers, T / 4 + np.arange(24) * T / 2)
    assert tuple(p.phase for p in pulses[:8]) == XY8_PHASES
    assert [p.phase for p in pulses[8:16]] == [p.phase for p in pulses[:8]]
    assert all(p.duration == 0.1 * T for p in pulses)
    # XY-8 = XYXY YXYX
    x, y = 0.0, math.pi / 2
    assert XY8_PHASES == (x, y, x, y, y, x, y, x)


def test_xy8_edge_cases():
    T = 1e-6
    assert build_xy8(T, 0.0, 0).pulses() == []
    with pytest.raises(Overlap):
        build_xy8(T, T / 2, 1)
    with pytest.raises(ValueError):
        build_xy8(T, 0.1 * T, -1)
    s = build_xy8(T, 0.0, 1, phases=ALL_X_PHASES)
    assert {p.phase for p in s.pulses()} == {0.0}


def test_schedule_modulation_matches_pulse_layout():
    T = 1e-6
    spec = extended_pulse(13, T, 6 * T / 13)
    s = build_xy8(T, spec.t_pi, 2, spec)
    t = np.linspace(0, s.total_time, 4001)
    F = s.modulation(t)
    assert F[0] == 1.0
    assert np.all(np.abs(F) <= 1 + 1e-12)
    assert np.isnan(s.modulation(np.array([-1e-9, s.total_time + 1e-9]))).all()
    # between pulse k and k+1 the sign is (-1)^(k+1)
    gaps = T / 4 + np.arange(16) * T / 2 + T / 4
    np.testing.assert_allclose(s.modulation(gaps), (-1.0) ** (np.arange(16) + 1))


def test_format_schedule():
    text = format_schedule(build_xy8(1e-6, 1e-8, 1))
    rows = [ln for ln in text.splitlines() if not ln.startswith("#")]
    assert len(rows) == 8
    assert rows[1].split()[3] == repr(math.pi / 2)


def _two_nucleus_bath():
    a = NuclearSpin((10 * KHZ, 0.0, 0.0), CONSTANTS.gamma_h, "a")
    b = NuclearSpin((4 * KHZ, 0.0, -30 * KHZ), CONSTANTS.gamma_h, "b")
    return SpinBath(1.0, (a, b))


def test_rwa_margin_entries():
    bath = _two_nucleus_bath()
    rep = rwa_margins(bath, "a", 13, f_instantaneous, 15)
    fa = hyperfine_components(bath, bath.nucleus("a"))
    fb = hyperfine_components(bath, bath.nucleus("b"))
    assert rep.omega_m == pytest.approx(fa.omega_j / 13)
    (spec,) = rep.spectators
    assert spec.nucleus == "b"
    assert spec.detuning == pytest.approx(abs(fb.omega_j - fa.omega_j))
    assert spec.coupling == pytest.approx(abs(f_instantaneous(13)) * fb.ax / 4)
    assert spec.ratio == pytest.approx(spec.detuning / spec.coupling)
    # 14 harmonics n != l per nucleus, plus the spectator
    assert len(rep.entries) == 2 * 14 + 1
    even = [e for e in rep.entries if e.n % 2 == 0]
    assert all(e.ratio == math.inf and not e.flagged and not e.overlap for e in even)
    h11 = next(e for e in rep.entries if e.nucleus == "a" and e.n == 11)
    assert h11.detuning == pytest.approx(abs(fa.omega_j - 11 * rep.omega_m))
    # the window is the span of omega_j/13
    assert rep.window == pytest.approx((min(fa.omega_j, fb.omega_j) / 13, max(fa.omega_j, fb.omega_j) / 13))
    assert not rep.has_overlap


def test_rwa_overlap_detection():
    # nucleus "c" placed so its 11th-harmonic resonance sits inside the 13th-harmonic window
    wl = CONSTANTS.gamma_h * 0.01
    a = NuclearSpin((1 * KHZ, 0.0, 0.0), CONSTANTS.gamma_h, "a")
    bath0 = SpinBath(0.01, (a,))
    w13 = hyperfine_components(bath0, a).omega_j / 13
    # pick A_z so that omega_c = 11 * w13 exactly (A_x = 0 keeps the frame trivial)
    az = 2 * (wl - 11 * w13)
    c = NuclearSpin((1e-3 * KHZ, 0.0, az), CONSTANTS.gamma_h, "c")
    bath = SpinBath(0.01, (a, c))
    fc = hyperfine_components(bath, c)
    pad = 0.01 * w13
    rep = rwa_margins(bath, "a", 13, f_instantaneous, 15, window=(w13 - pad, w13 + pad))
    assert fc.omega_j / 11 == pytest.approx(w13, rel=1e-6)
    assert rep.overlap_harmonics() == [11]
    text = format_rwa_report(rep)
    assert "# overlap = 1" in text
    assert any(ln.startswith("c 11 ") and "overlap" in ln for ln in text.splitlines())


def test_rwa_accepts_coefficient_sequence_and_checks_target():
    bath = five_proton_bath()
    coeffs = [f_instantaneous(n) for n in range(1, 28)]
    r1 = rwa_margins(bath, "H3", 13, coeffs, 27)
    r2 = rwa_margins(bath, "H3", 13, f_instantaneous, 27)
    assert r1 == r2
    with pytest.raises(UnknownNucleus):
        rwa_margins(bath, "H9", 13, f_instantaneous, 27)
