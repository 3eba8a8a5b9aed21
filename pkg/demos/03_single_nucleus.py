"""One proton, ideal pulses: the simulation against the closed-form signal.

On resonance the coherence of an electron coupled to a single nucleus
oscillates as cos(f_l A^x t / 4).  The full propagation should follow it.
"""

import math

import numpy as np

from nvpulse.dynamics import coherence_trace, ideal_signal
from nvpulse.pulse_shape import InstantaneousSpec, f_instantaneous
from nvpulse.sequence import build_xy8
from nvpulse.spin_model import five_proton_bath, hyperfine_components

l = 13
bath = five_proton_bath(1.0).subset(["H3"])
fc = hyperfine_components(bath, bath.nuclei[0])
T = 2 * math.pi * l / fc.omega_j
times, sig = coherence_trace(bath, build_xy8(T, 0.0, 400, InstantaneousSpec(T, l)))
ideal = ideal_signal(f_instantaneous(l), fc.ax, times)

print(f"H3: omega_j/2pi = {fc.omega_j / 2 / math.pi / 1e6:.6f} MHz, A^x/2pi = {fc.ax / 2 / math.pi / 1e3:.3f} kHz")
print("   t (ms)   simulated   cos(f A^x t/4)")
for k in range(0, 401, 50):
    print(f"  {times[k] * 1e3:7.4f}   {sig[k]:+.6f}    {ideal[k]:+.6f}")
print(f"max deviation over 400 blocks: {np.abs(sig - ideal).max():.1e}")
