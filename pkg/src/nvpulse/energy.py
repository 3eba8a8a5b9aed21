"""Microwave energy delivered per pi pulse and the energy-equivalent Rabi frequency.

Energies are Poynting fluxes per unit area.  The normalized unit factors out
``c / (mu0 gamma_e^2)``, so a normalized energy has units of (rad/s)^2 s and a
top-hat pi pulse at drive ``Omega`` carries ``pi Omega`` of it (up to the
carrier ripple).  SI values (J/m^2) are reported alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants as sc
from scipy import integrate
from scipy.interpolate import CubicSpline

from .pulse_shape import rabi_from_modulation
from .spin_model import CONSTANTS

POINTS_PER_CARRIER_CYCLE = 32


def carrier_frequency(b_field=None, constants=CONSTANTS):
    """``|0> <-> |1>`` transition, ``D - gamma_e B_z`` (rad/s); ``D`` alone when no field."""
    if b_field is None:
        return constants.D
    return constants.D - constants.gamma_e * b_field


def si_factor(constants=CONSTANTS):
    """J/m^2 per normalized energy unit, ``c / (mu0 gamma_e^2)``."""
    return sc.c / (sc.mu_0 * constants.gamma_e**2)


def energy_top_hat(rabi, t_pi=None, carrier=math.inf, phase=0.0):
    """Normalized energy of a constant-amplitude pulse.

    ``Omega^2 [t_pi + sin(2 w t_pi - 2 phi) / (2 w)]``; ``t_pi`` defaults to
    ``pi / rabi`` and ``carrier = inf`` drops the ripple term.
    """
    if not rabi > 0:
        raise ValueError("rabi must be positive")
    if t_pi is None and not math.isfinite(carrier):
        return math.pi * rabi
    if t_pi is None:
        t_pi = math.pi / rabi
    ripple = 0.0
    if math.isfinite(carrier):
        ripple = math.sin(2.0 * carrier * t_pi - 2.0 * phase) / (2.0 * carrier)
    return rabi * rabi * (t_pi + ripple)


def equivalent_rabi(energy):
    """Constant drive whose top-hat pi pulse carries ``energy`` (normalized units)."""
    if energy < 0:
        raise ValueError("energy must be nonnegative")
    x = energy / math.pi
    # pick a neighbour that maps back onto ``energy``, so the top-hat round
    # trip is exact wherever Omega -> pi Omega is one-to-one; where two floats
    # share an energy, the one with the shorter decimal form wins
    hits = [c for c in (x, math.nextafter(x, 0.0), math.nextafter(x, math.inf))
            if math.pi * c == energy]
    return min(hits, key=lambda c: len(repr(c))) if hits else x


@dataclass(frozen=True)
class WindowEnergy:
    main: float
    cross: float

    @property
    def total(self):
        return self.main + self.cross

    @property
    def cross_fraction(self):
        return abs(self.cross) / self.main if self.main > 0 else 0.0


def window_energy(t, rabi, carrier, phase=0.0):
    """Energy of one window sampled at ``t`` (time measured from ``t[0]``).

    The drive is interpolated with a cubic spline onto a grid that resolves
    the carrier (``POINTS_PER_CARRIER_CYCLE`` points per cycle) and both the
    ``2 Omega^2 cos^2`` term and the ``Omega Omega'`` cross term are
    integrated there by Simpson's rule.
    """
    tau = np.asarray(t, dtype=float) - t[0]
    rabi = np.asarray(rabi, dtype=float)
    if not np.any(rabi):
        return WindowEnergy(0.0, 0.0)
    spline = CubicSpline(tau, rabi)
    cycles = tau[-1] * carrier / (2.0 * math.pi)
    n = max(len(tau), int(math.ceil(cycles * POINTS_PER_CARRIER_CYCLE)))
    n += n % 2
    fine = np.linspace(0.0, tau[-1], n + 1)
    om = spline(fine)
    dom = spline(fine, 1)
    x = carrier * fine - phase
    main = float(integrate.simpson(2.0 * om * om * np.cos(x) ** 2, x=fine))
    cross = float(integrate.simpson(2.0 / carrier * om * dom * np.cos(x) * np.sin(x), x=fine))
    return WindowEnergy(main, cross)


def energy_extended(wave, carrier=None, phase=0.0):
    """Per-window energies of a sampled waveform (fills in ``Omega`` if missing)."""
    if carrier is None:
        carrier = carrier_frequency()
    if wave.rabi is None:
        wave = rabi_from_modulation(wave)
    return [window_energy(wave.t[sl], wave.rabi[sl], carrier, phase) for sl in wave.window_slices()]


@dataclass(frozen=True)
class EnergyReport:
    family: str
    t_pi: float
    e_per_pulse: float  # normalized
    e_si: float  # J/m^2
    e_relative: float  # over a top-hat pi pulse of the same length
    equivalent_rabi: float
    cross_fraction: float
    carrier: float
    phase: float


def energy_report(wave, carrier=None, phase=0.0, constants=CONSTANTS):
    """Energy accounting for one pulse of ``wave``, averaged over its windows."""
    if carrier is None:
        carrier = carrier_frequency(constants=constants)
    parts = energy_extended(wave, carrier, phase)
    e = float(np.mean([p.total for p in parts]))
    t_pi = wave.spec.t_pi
    ref = energy_top_hat(math.pi / t_pi, t_pi, carrier, phase)
    return EnergyReport(
        wave.spec.family, t_pi, e, e * si_factor(constants), e / ref, equivalent_rabi(e),
        max(p.cross_fraction for p in parts), carrier, phase,
    )


def format_energy_report(report, header=()):
    two_pi = 2.0 * math.pi
    rows = [f"# {h}" for h in header]
    rows += [
        f"family = {report.family}",
        f"t_pi_ns = {report.t_pi * 1e9:.12g}",
        f"carrier_over_2pi_GHz = {report.carrier / two_pi / 1e9:.12g}",
        f"phase_rad = {report.phase:.12g}",
        f"energy_normalized = {report.e_per_pulse:.12g}",
        f"energy_J_per_m2 = {report.e_si:.12g}",
        f"energy_over_same_length_top_hat = {report.e_relative:.12g}",
        f"equivalent_rabi_over_2pi_MHz = {report.equivalent_rabi / two_pi / 1e6:.12g}",
        f"cross_term_fraction = {report.cross_fraction:.6g}",
    ]
    return "\n".join(rows) + "\n"
