"""Microwave energy of extended pulses versus constant-amplitude pulses.

The energy-equivalent Rabi frequency is the constant drive whose top-hat
pi pulse delivers the same energy.  The cross term (Omega Omega' / omega)
is computed rather than assumed small.
"""

import math

from nvpulse.energy import carrier_frequency, energy_report, energy_top_hat, equivalent_rabi
from nvpulse.pulse_shape import extended_pulse, rabi_from_modulation, synthesize_modulation, t_pi_for_target

l = 13
T = l / 42.577e6
carrier = carrier_frequency(1.0)
print(f"carrier (D - gamma_e B at 1 T): 2pi x {carrier / 2 / math.pi / 1e9:.3f} GHz")
for name, t_pi in (("dark", 6 * T / l), ("clear", t_pi_for_target(l, T, 0.0326, 6))):
    wave = rabi_from_modulation(synthesize_modulation(extended_pulse(l, T, t_pi)))
    rep = energy_report(wave, carrier)
    print(f"{name}: t_pi = {t_pi * 1e9:.1f} ns, energy {rep.e_si:.3e} J/m^2 per pulse, "
          f"{rep.e_relative:.2f}x a same-length top-hat, equivalent Rabi 2pi x "
          f"{rep.equivalent_rabi / 2 / math.pi / 1e6:.3f} MHz, cross term {rep.cross_fraction:.1e}")
om = 2 * math.pi * 18.2e6
print(f"round trip: equivalent_rabi(energy_top_hat(Omega)) == Omega -> {equivalent_rabi(energy_top_hat(om)) == om}")
