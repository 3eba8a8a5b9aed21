"""Design an extended pi pulse and check that it is a valid pulse.

The Gaussian term inside each window is scaled (a1) so the window adds
nothing to the l-th harmonic.  The drive follows from Omega = d/dt arccos F.
A valid pulse keeps |F| <= 1, rotates by exactly pi, and reproduces F when
the drive is integrated back.
"""

import math
import sys
from pathlib import Path

import numpy as np

from nvpulse.pulse_shape import (
    extended_pulse,
    f_modulated,
    format_waveform,
    fourier_numeric,
    intrapulse_residual,
    pulse_area,
    rabi_from_modulation,
    round_trip_error,
    synthesize_modulation,
    t_pi_for_target,
)

l = 13
T = l / 42.577e6
out = Path(sys.argv[1]) if len(sys.argv) > 1 else None

for name, t_pi in (("dark", 6 * T / l), ("clear", t_pi_for_target(l, T, 0.0326, branch=6))):
    spec = extended_pulse(l, T, t_pi)
    wave = rabi_from_modulation(synthesize_modulation(spec))
    peak = np.abs(wave.rabi).max() / (2 * math.pi * 1e6)
    print(f"{name} pulse: t_pi = {t_pi * 1e9:.1f} ns, Gaussian width c = {spec.c * 1e9:.2f} ns, a1 = {spec.a1:.4f}")
    print(f"  f_13 from the samples {fourier_numeric(wave, l):.6f}  (closed form {f_modulated(l, t_pi, T):.6f})")
    print(f"  window residual {abs(intrapulse_residual(spec)) / t_pi:.1e} t_pi, "
          f"area - pi = {max(abs(a - math.pi) for a in pulse_area(wave)):.1e}, "
          f"arccos round trip {round_trip_error(wave):.1e}")
    print(f"  peak drive 2pi x {peak:.1f} MHz, drive changes sign: {wave.rabi_sign_changes}")
    if out:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}_waveform.txt").write_text(format_waveform(wave))
        print(f"  waveform written to {out / f'{name}_waveform.txt'}")
