"""How much of the l-th harmonic survives for each pulse family.

Dynamical decoupling with period T picks up a nucleus precessing at
omega_j when l * 2pi/T = omega_j, with strength f_l (the l-th Fourier
coefficient of the modulation function).  Finite pulses eat into f_l; the
modulated family lets t_pi grow while f_l follows cos(pi l t_pi / T).
"""

import math

from nvpulse.pulse_shape import f_instantaneous, f_modulated, f_top_hat, t_pi_for_target

l = 13
T = 2 * math.pi * l / (2 * math.pi * 42.577e6)  # resonant with a 1 T proton

print(f"instantaneous pulses: f_13 = {f_instantaneous(l):.5f}")
print()
print(" t_pi/(T/13)   modulated    top-hat")
for r in (0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 6.5):
    t_pi = r * T / l
    top = f"{f_top_hat(l, t_pi, T):+.5f}" if t_pi < T / 2 else "   n/a"
    print(f"   {r:6.2f}     {f_modulated(l, t_pi, T):+.5f}    {top}")

print()
print("Two operating points used in the 5-proton spectra:")
print(f"  dark area,  t_pi = 6 T/13      -> f_13 = {f_modulated(l, 6 * T / l, T):.4f}")
t_clear = t_pi_for_target(l, T, 0.0326, branch=6)
print(f"  clear area, target f_13 = 0.0326 -> t_pi = {t_clear / (T / l):.4f} T/13 "
      f"({t_clear * 1e9:.1f} ns)")
