"""XY-8 pulse schedules, resonance periods and rotating-wave margins."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import Overlap, UnknownNucleus
from .pulse_shape import InstantaneousSpec, ModulationWaveform, modulation_function
from .spin_model import hyperfine_components

XY8_PHASES = (0.0, math.pi / 2, 0.0, math.pi / 2, math.pi / 2, 0.0, math.pi / 2, 0.0)
ALL_X_PHASES = (0.0,) * 8
MARGIN_THRESHOLD = 10.0


def resonance_period(l, omega_k):
    """Period ``T`` for which the ``l``-th harmonic of ``2 pi / T`` hits ``omega_k``."""
    if l < 1:
        raise ValueError("l must be >= 1")
    if not omega_k > 0:
        raise ValueError("omega_k must be positive")
    return 2.0 * math.pi * l / omega_k


@dataclass(frozen=True)
class Pulse:
    center: float
    duration: float
    phase: float


@dataclass(frozen=True)
class PulseSchedule:
    """``reps`` back-to-back copies of a phase block of equally spaced pulses.

    Pulse ``k`` (counting from 0) is centred at ``T/4 + k T/2``; a block of
    eight pulses therefore spans ``4T``.  ``shape`` is the waveform (or spec)
    every pulse follows; all pulses share it and differ only in phase.
    """

    period: float
    t_pi: float
    reps: int
    shape: object = None
    phases: tuple = XY8_PHASES

    @property
    def block_size(self):
        return len(self.phases)

    @property
    def block_duration(self):
        return self.block_size * self.period / 2.0

    @property
    def total_time(self):
        return self.reps * self.block_duration

    @property
    def n_pulses(self):
        return self.reps * self.block_size

    @property
    def spec(self):
        if isinstance(self.shape, ModulationWaveform):
            return self.shape.spec
        if self.shape is None:
            return InstantaneousSpec(self.period)
        return self.shape

    def block(self):
        T = self.period
        return [Pulse(T / 4 + k * T / 2, self.t_pi, ph) for k, ph in enumerate(self.phases)]

    def pulses(self):
        T = self.period
        n = self.block_size
        return [
            Pulse(T / 4 + k * T / 2, self.t_pi, self.phases[k % n]) for k in range(self.n_pulses)
        ]

    def modulation(self, t):
        """Composite modulation function F(t) of the whole schedule."""
        t = np.asarray(t, dtype=float)
        F = modulation_function(self.spec, t)
        return np.where((t >= 0) & (t <= self.total_time), F, np.nan)


def build_xy8(T, t_pi, reps, shape=None, phases=XY8_PHASES):
    """``reps`` XY-8 blocks (``8 reps`` pulses over ``4 T reps``); ``reps = 0`` is empty.

    Raises
    ------
    Overlap
        If ``t_pi >= T/2`` (adjacent pulses would touch).
    """
    if reps < 0:
        raise ValueError("reps must be >= 0")
    if t_pi >= T / 2:
        raise Overlap(f"t_pi={t_pi:g} >= T/2={T / 2:g}")
    if t_pi < 0:
        raise ValueError("t_pi must be >= 0")
    return PulseSchedule(T, t_pi, int(reps), shape, tuple(phases))


def format_schedule(schedule):
    lines = [
        f"# period_ns = {schedule.period * 1e9:.17g}",
        f"# reps = {schedule.reps}",
        "# index center_ns t_pi_ns phase_rad",
    ]
    for k, p in enumerate(schedule.pulses()):
        lines.append(f"{k} {p.center * 1e9:.12f} {p.duration * 1e9:.12f} {p.phase:.17g}")
    return "\n".join(lines) + "\n"


# -- rotating-wave margins ------------------------------------------------------


@dataclass(frozen=True)
class MarginEntry:
    nucleus: str
    n: int
    detuning: float
    coupling: float
    ratio: float
    kind: str  # 'spectator' (same harmonic, other nucleus) or 'harmonic' (n != l)
    flagged: bool
    overlap: bool = False


@dataclass(frozen=True)
class RwaReport:
    target: str
    l: int
    omega_m: float
    window: tuple
    threshold: float
    entries: tuple = field(default=())

    @property
    def spectators(self):
        return [e for e in self.entries if e.kind == "spectator"]

    @property
    def flagged(self):
        return [e for e in self.entries if e.flagged]

    @property
    def overlaps(self):
        return [e for e in self.entries if e.overlap]

    @property
    def has_overlap(self):
        return any(e.overlap for e in self.entries)

    def overlap_harmonics(self):
        return sorted({e.n for e in self.entries if e.overlap})


def _coefficient(coeffs, n):
    if callable(coeffs):
        return float(coeffs(n))
    return float(coeffs[n - 1])


def rwa_margins(bath, target, l, coeffs, n_max, threshold=MARGIN_THRESHOLD, window=None,
                t_final=None):
    """Rotating-wave margins with ``l omega_M`` tuned onto ``target``.

    Parameters
    ----------
    coeffs : sequence or callable
        Filter coefficients ``f_n``; ``coeffs[n - 1]`` (or ``coeffs(n)``) for
        ``n = 1..n_max``.
    window : (float, float), optional
        Scan window in ``omega_M`` (rad/s).  Defaults to the span of all
        harmonic-``l`` resonances ``omega_j / l``, widened on both sides by
        the Fourier linewidth ``2 pi / (l t_final)`` when ``t_final`` is given.

    Returns
    -------
    RwaReport
        One spectator entry per other nucleus (``n = l``) and one entry per
        nucleus and harmonic ``n != l``.  Entries with ``f_n A^x = 0`` carry
        an infinite ratio.  ``overlap`` marks harmonic-``n`` resonances that
        land inside the scan window.
    """
    labels = bath.labels
    if target not in labels:
        raise UnknownNucleus(target)
    frames = {n.label: hyperfine_components(bath, n) for n in bath.nuclei}
    omega_k = frames[target].omega_j
    omega_m = omega_k / l
    if window is None:
        pos = [fc.omega_j / l for fc in frames.values()]
        pad = 2.0 * math.pi / (l * t_final) if t_final else 0.0
        window = (min(pos) - pad, max(pos) + pad)
    lo, hi = window

    def ratio(det, coup):
        if coup == 0.0:
            return math.inf
        return det / coup

    entries = []
    f_l = abs(_coefficient(coeffs, l))
    for lab in labels:
        fc = frames[lab]
        if lab != target:
            det = abs(fc.omega_j - omega_k)
            coup = f_l * fc.ax / 4.0
            r = ratio(det, coup)
            entries.append(MarginEntry(lab, l, det, coup, r, "spectator", r < threshold))
        for n in range(1, n_max + 1):
            if n == l:
                continue
            f_n = abs(_coefficient(coeffs, n))
            det = abs(fc.omega_j - n * omega_m)
            coup = f_n * fc.ax / 4.0
            r = ratio(det, coup)
            inside = coup > 0.0 and lo <= fc.omega_j / n <= hi
            entries.append(MarginEntry(lab, n, det, coup, r, "harmonic", r < threshold, inside))
    return RwaReport(target, l, omega_m, (lo, hi), threshold, tuple(entries))


def format_rwa_report(report):
    two_pi = 2.0 * math.pi
    lines = [
        f"# target = {report.target}",
        f"# l = {report.l}",
        f"# omega_M_over_2pi_Hz = {report.omega_m / two_pi:.12g}",
        f"# window_Hz = {report.window[0] / two_pi:.12g} {report.window[1] / two_pi:.12g}",
        f"# threshold = {report.threshold:g}",
        f"# overlap = {int(report.has_overlap)}",
        "# nucleus n detuning_Hz coupling_Hz ratio flag",
    ]
    for e in report.entries:
        flags = [f for f, on in (("rwa", e.flagged), ("overlap", e.overlap)) if on]
        lines.append(
            f"{e.nucleus} {e.n} {e.detuning / two_pi:.10g} {e.coupling / two_pi:.10g} "
            f"{e.ratio:.6g} {'+'.join(flags) or '-'}"
        )
    return "\n".join(lines) + "\n"
