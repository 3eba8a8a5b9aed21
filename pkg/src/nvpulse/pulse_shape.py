"""Extended pi-pulse modulation functions and their filter coefficients.

One period ``T`` of the modulation function holds two pulse windows of
length ``t_pi`` centred at ``T/4`` and ``3T/4``, separated by flat regions of
length ``t_m = (T - 2 t_pi)/4`` (edges) and ``2 t_m`` (middle).  ``F`` is +1
before the first window, -1 between the windows, and ``F(t + T/2) = -F(t)``.

Inside the first window the modulated family reads::

    F = cos(pi tau / t_pi) + a1 exp(-(tau - t_pi/2)^2 / 2c^2) sin(l w_M (tau - t_pi/2))

with ``tau`` measured from the window start and ``a1`` chosen so that the
window contributes nothing to the ``l``-th Fourier coefficient.  The top-hat
family is the same expression with ``a1 = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from .errors import (
    BoundViolation,
    DegenerateDenominator,
    EdgeSingularity,
    EvenHarmonic,
    NoRoom,
    OutOfRange,
)

BOUND_TOL = 1e-9
EDGE_TOL = 1e-12


@dataclass(frozen=True)
class ExtendedPulseSpec:
    l: int
    period: float
    t_pi: float
    c: float
    a1: float | None = None
    q_max: int = 1

    def __post_init__(self):
        if self.l < 1 or self.l % 2 == 0:
            raise EvenHarmonic(f"harmonic must be a positive odd integer, got {self.l}")
        if not 0 < self.t_pi < self.period / 2:
            raise NoRoom(f"need 0 < t_pi < T/2 (t_pi={self.t_pi:g}, T={self.period:g})")
        if not self.c > 0:
            raise ValueError("Gaussian width c must be positive")
        if self.q_max != 1:
            raise NotImplementedError("only the q=1 Gaussian modulation is supported")

    family = "modulated"

    @property
    def t_m(self):
        return (self.period - 2.0 * self.t_pi) / 4.0

    @property
    def t_p(self):
        return self.t_m + self.t_pi / 2.0

    @property
    def omega_m(self):
        return 2.0 * math.pi / self.period


@dataclass(frozen=True)
class TopHatSpec:
    """Constant-amplitude pi pulses, ``Omega = pi / t_pi``."""

    period: float
    t_pi: float
    l: int | None = None

    def __post_init__(self):
        if not 0 < self.t_pi < self.period / 2:
            raise NoRoom(f"need 0 < t_pi < T/2 (t_pi={self.t_pi:g}, T={self.period:g})")

    family = "top-hat"
    a1 = 0.0

    @property
    def t_m(self):
        return (self.period - 2.0 * self.t_pi) / 4.0

    @property
    def omega_m(self):
        return 2.0 * math.pi / self.period

    @property
    def rabi(self):
        return math.pi / self.t_pi


@dataclass(frozen=True)
class InstantaneousSpec:
    """Zero-length pi pulses at ``T/4`` and ``3T/4``."""

    period: float
    l: int | None = None

    family = "instantaneous"
    t_pi = 0.0
    a1 = 0.0

    @property
    def t_m(self):
        return self.period / 4.0

    @property
    def omega_m(self):
        return 2.0 * math.pi / self.period


# -- analytic filter coefficients ------------------------------------------


def f_instantaneous(l):
    """Fourier coefficient of the ideal square-wave modulation."""
    if l < 1:
        raise ValueError("l must be >= 1")
    if l % 2 == 0:
        return 0.0
    return 4.0 / (math.pi * l) * (1.0 if l % 4 == 1 else -1.0)


def _sin_half_pi(l):
    return 0.0 if l % 2 == 0 else (1.0 if l % 4 == 1 else -1.0)


def f_top_hat(l, t_pi, T):
    """Fourier coefficient for constant-amplitude pulses of length ``t_pi``.

    Written with ``x = 2 l t_pi / T`` as ``2 s sinc((1 - x)/2) / (l (1 + x))``
    (``s = sin(pi l / 2)``), which equals the usual ratio form and is finite
    at the removable point ``x = 1`` where it takes the value ``s / l``.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    if not 0 <= t_pi < T / 2:
        raise ValueError("need 0 <= t_pi < T/2")
    x = 2.0 * l * t_pi / T
    return 2.0 * _sin_half_pi(l) * float(np.sinc((1.0 - x) / 2.0)) / (l * (1.0 + x))


def f_top_hat_ratio(l, t_pi, T):
    """Direct ratio form of the top-hat coefficient, limit taken near the pole."""
    x = 2.0 * l * t_pi / T
    den = 1.0 - x * x
    s = _sin_half_pi(l)
    if abs(den) < 1e-9:
        return s / l
    return 4.0 * s * math.cos(math.pi * l * t_pi / T) / (math.pi * l * den)


def f_modulated(l, t_pi, T):
    """Fourier coefficient for intrapulse-cancelled (modulated) pulses."""
    if l < 1:
        raise ValueError("l must be >= 1")
    if l % 2 == 0:
        raise EvenHarmonic(f"f_modulated vanishes identically for even l={l}")
    return 4.0 / (math.pi * l) * math.cos(math.pi * t_pi * l / T) * _sin_half_pi(l)


def t_pi_for_target(l, T, target, branch=0):
    """Pulse length giving ``f_modulated(l, t_pi, T) == target``.

    Solutions repeat every ``T/l``; ``branch = k`` selects the one with
    ``k <= t_pi/(T/l) <= k + 1``.  The extremes ``|target| = 4/(pi l)`` sit
    where two branches meet, so they land on a branch edge.

    Raises
    ------
    OutOfRange
        ``|target| > 4/(pi l)``.
    NoRoom
        The selected branch needs ``t_pi >= T/2``.
    """
    if l % 2 == 0:
        raise EvenHarmonic(f"no modulated pulse reaches a nonzero target at even l={l}")
    if branch < 0:
        raise ValueError("branch must be >= 0")
    fmax = 4.0 / (math.pi * l)
    y = target / (fmax * _sin_half_pi(l))
    if abs(y) > 1.0 + 1e-12:
        raise OutOfRange(f"|target|={abs(target):.6g} exceeds 4/(pi l)={fmax:.6g}")
    y = min(1.0, max(-1.0, y))
    if branch % 2:
        y = -y
    ratio = branch + math.acos(y) / math.pi
    t_pi = ratio * T / l
    if t_pi >= T / 2:
        raise NoRoom(f"branch {branch} needs t_pi = {ratio:.4f} T/l >= T/2")
    return t_pi


# -- intrapulse cancellation --------------------------------------------------


def _window_integrals(l, period, t_pi, c, tol):
    """Numerator and denominator of the a1 ratio, over the first window."""
    w = 2.0 * math.pi / period
    t_p = (period - 2.0 * t_pi) / 4.0 + t_pi / 2.0
    kappa = c / t_pi
    ph = l * w * t_p
    k = l * w * t_pi  # intrapulse phase advance

    def ramp(u):
        return -math.sin(math.pi * u) * math.cos(ph + k * u)

    def gauss(u):
        return math.exp(-u * u / (2.0 * kappa * kappa)) * math.sin(k * u) * math.cos(ph + k * u)

    opts = dict(epsabs=0.0, epsrel=tol, limit=2000)
    num = integrate.quad(ramp, -0.5, 0.5, **opts)[0] * t_pi
    den = integrate.quad(gauss, -0.5, 0.5, points=[0.0], **opts)[0] * t_pi
    return num, den


def solve_a1(spec, tol=1e-10):
    """Gaussian amplitude that cancels the window's ``l``-th harmonic.

    Both window integrals are evaluated by adaptive Gauss-Kronrod quadrature
    in the scaled variable ``u = (t - t_p)/t_pi``.

    Raises
    ------
    DegenerateDenominator
        If the Gaussian term has (numerically) no overlap with the harmonic.
    """
    import warnings

    with warnings.catch_warnings():
        # roundoff warnings come from numerators that vanish by symmetry
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        num, den = _window_integrals(spec.l, spec.period, spec.t_pi, spec.c, tol)
    if abs(den) < 1e-14 * spec.t_pi:
        raise DegenerateDenominator(f"denominator {den:.3e} too small at these parameters")
    if abs(num) < 1e-15 * spec.t_pi:
        return 0.0
    return -num / den


def extended_pulse(l, period, t_pi, c=None, c_ratio=0.07):
    """Build an :class:`ExtendedPulseSpec` with ``a1`` already solved."""
    if c is None:
        c = c_ratio * t_pi
    spec = ExtendedPulseSpec(l, period, t_pi, c)
    return replace(spec, a1=solve_a1(spec))


def intrapulse_residual(spec):
    """``integral over the first window of F cos(l w_M t) dt`` by direct quadrature."""
    l, w = spec.l, spec.omega_m
    t0 = spec.t_m

    def f(t):
        return float(window_modulation(spec, np.array([t - t0]))[0]) * math.cos(l * w * t)

    import warnings

    with warnings.catch_warnings():
        # the target is ~0, so the relative tolerance is never met; the absolute one is
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(f, t0, t0 + spec.t_pi, epsabs=1e-16 * spec.t_pi, epsrel=1e-13,
                              limit=4000)[0]


# -- waveforms -----------------------------------------------------------------


def _modulation_term(spec, tau):
    if not spec.a1:
        return np.zeros_like(tau)
    d = tau - spec.t_pi / 2.0
    return spec.a1 * np.exp(-d * d / (2.0 * spec.c**2)) * np.sin(spec.l * spec.omega_m * d)


def window_modulation(spec, tau):
    """F inside the first pulse window, ``tau`` in ``[0, t_pi]`` from its start."""
    tau = np.asarray(tau, dtype=float)
    return np.cos(math.pi * tau / spec.t_pi) + _modulation_term(spec, tau)


def rotation_angle(spec, tau, interior_check=True):
    """Accumulated drive angle ``theta = arccos F`` inside a window.

    ``1 - F`` and ``1 + F`` are formed without cancellation so that theta
    keeps full relative precision at both window edges.  Values that
    overshoot the bound by at most ``BOUND_TOL`` are clamped.

    Raises
    ------
    EdgeSingularity
        If ``|F|`` reaches 1 strictly inside the window.
    BoundViolation
        If ``|F|`` exceeds 1 by more than ``BOUND_TOL``.
    """
    tau = np.asarray(tau, dtype=float)
    h = math.pi * tau / (2.0 * spec.t_pi)
    g = _modulation_term(spec, tau)
    one_minus = 2.0 * np.sin(h) ** 2 - g
    one_plus = 2.0 * np.cos(h) ** 2 + g
    worst = max(-one_minus.min(initial=0.0), -one_plus.min(initial=0.0))
    if worst > BOUND_TOL:
        raise BoundViolation(worst)
    if interior_check:
        rel = tau / spec.t_pi
        inner = (rel > 1e-3) & (rel < 1 - 1e-3)
        if np.any(inner & ((one_minus <= EDGE_TOL) | (one_plus <= EDGE_TOL))):
            raise EdgeSingularity("|F| reaches 1 inside the pulse window")
    one_minus = np.clip(one_minus, 0.0, 2.0)
    one_plus = np.clip(one_plus, 0.0, 2.0)
    upper = 2.0 * np.arcsin(np.sqrt(one_minus / 2.0))
    lower = math.pi - 2.0 * np.arcsin(np.sqrt(one_plus / 2.0))
    theta = np.where(one_minus <= one_plus, upper, lower)
    # the Gaussian tail leaves F ~1e-12 short of +-1 at the edges; pin the
    # window to exactly 0 and pi so that each pulse has area pi
    theta = np.where(tau <= 0.0, 0.0, theta)
    return np.where(tau >= spec.t_pi, math.pi, theta)


def pulse_windows(spec):
    s1 = spec.t_m
    s2 = spec.period / 2.0 + spec.t_m
    return [(s1, s1 + spec.t_pi), (s2, s2 + spec.t_pi)]


def modulation_function(spec, t):
    """Periodic F(t) for a modulated or top-hat spec; ``F(0) = +1``."""
    t = np.mod(np.asarray(t, dtype=float), spec.period)
    half = spec.period / 2.0
    sign = np.where(t < half, 1.0, -1.0)
    s = np.where(t < half, t, t - half)
    tau = s - spec.t_m
    if spec.t_pi == 0.0:
        return sign * np.where(tau < 0.0, 1.0, -1.0)
    inside = (tau >= 0.0) & (tau <= spec.t_pi)
    flat = np.where(tau < 0.0, 1.0, -1.0)
    win = window_modulation(spec, np.clip(tau, 0.0, spec.t_pi))
    return sign * np.where(inside, win, flat)


@dataclass(frozen=True)
class ModulationWaveform:
    """One sampled period of ``F`` (and optionally ``Omega``).

    ``t`` is the uniform grid ``k T / N`` (``k = 0..N``) with the four
    window edges inserted, so every window is sampled from its first to its
    last instant.  Grid points closer than a quarter step to an inserted edge
    are dropped.
    """

    t: np.ndarray
    F: np.ndarray
    pulse_windows: tuple
    spec: object
    samples_per_period: int
    rabi: np.ndarray | None = field(default=None, compare=False)

    @property
    def period(self):
        return self.spec.period

    @property
    def dt(self):
        """Nominal sample spacing ``T/N``."""
        return self.period / self.samples_per_period

    def in_pulse(self):
        mask = np.zeros(self.t.shape, dtype=bool)
        for a, b in self.pulse_windows:
            mask |= (self.t >= a) & (self.t <= b)
        return mask

    def window_slices(self):
        out = []
        for a, b in self.pulse_windows:
            idx = np.nonzero((self.t >= a) & (self.t <= b))[0]
            out.append(slice(idx[0], idx[-1] + 1))
        return out

    @property
    def rabi_sign_changes(self):
        """True when the recovered drive amplitude goes negative in some window."""
        if self.rabi is None:
            return False
        return bool(np.any(self.rabi < -1e-9 * np.abs(self.rabi).max()))


def _sample_grid(spec, n):
    h = spec.period / n
    base = np.linspace(0.0, spec.period, n + 1)
    edges = np.array([e for w in pulse_windows(spec) for e in w])
    near = np.min(np.abs(base[:, None] - edges[None, :]), axis=1) < 0.25 * h
    near[0] = near[-1] = False
    return np.sort(np.concatenate([base[~near], edges]))


def _default_samples(l, spec=None):
    """``400 l`` per period, raised so that the Gaussian width spans at least 12 samples."""
    n = 400 * l
    c = getattr(spec, "c", None)
    if c:
        n = max(n, int(math.ceil(12.0 * spec.period / c)))
    return n + n % 2


def synthesize_modulation(spec, samples_per_period=None, check_bound=True):
    """Sample one period of the modulation function of ``spec``.

    ``spec`` may be an :class:`ExtendedPulseSpec` (``a1`` must be solved) or
    a :class:`TopHatSpec`.

    Raises
    ------
    BoundViolation
        If ``max |F| > 1 + 1e-9`` (suppressed with ``check_bound=False``).
    """
    l = spec.l or 1
    n = samples_per_period or _default_samples(l, spec)
    if n < 200 * l:
        raise ValueError(f"samples_per_period={n} cannot resolve harmonic {l} (need >= {200 * l})")
    n += n % 2
    if getattr(spec, "a1", 0.0) is None:
        raise ValueError("a1 has not been solved; use extended_pulse() or solve_a1()")
    t = _sample_grid(spec, n)
    F = modulation_function(spec, t)
    overshoot = float(np.abs(F).max() - 1.0)
    if overshoot > BOUND_TOL and check_bound:
        raise BoundViolation(overshoot)
    if overshoot <= BOUND_TOL:
        F = np.clip(F, -1.0, 1.0)
    return ModulationWaveform(t, F, tuple(pulse_windows(spec)), spec, n)


def synthesize_top_hat(period, t_pi, samples_per_period=None, l=None):
    spec = TopHatSpec(period, t_pi, l)
    return synthesize_modulation(spec, samples_per_period)


def rabi_from_modulation(wave):
    """Fill in ``Omega(t) = d/dt arccos F(t)``.

    The angle is tracked from 0 at each window start (so the second window,
    where F runs from -1 to +1, uses ``arccos(-F)``) and differentiated
    through a cubic spline on the window samples.  ``Omega`` is signed and
    zero outside the windows.

    Raises
    ------
    EdgeSingularity
        If ``|F| = 1`` at a sample strictly inside a window.
    """
    spec = wave.spec
    rabi = np.zeros_like(wave.t)
    for (a, _), sl in zip(wave.pulse_windows, wave.window_slices()):
        tw = wave.t[sl]
        sign = float(np.sign(wave.F[sl][0])) or 1.0
        Fw = sign * wave.F[sl]
        inner = Fw[1:-1]
        if np.any(np.abs(inner) >= 1.0 - EDGE_TOL):
            raise EdgeSingularity("|F| reaches 1 inside the pulse window")
        # the slice runs edge to edge; pin the end offsets, since b - a can
        # round below t_pi and miss the theta = pi pin
        tau = tw - a
        tau[0], tau[-1] = 0.0, spec.t_pi
        theta = rotation_angle(spec, tau, interior_check=False)
        rabi[sl] = CubicSpline(tw, theta)(tw, 1)
    return replace(wave, rabi=rabi)


def fourier_numeric(wave, n):
    """``(2/T) int_0^T F(t) cos(n w_M t) dt`` by composite Simpson on the samples."""
    if n < 1:
        raise ValueError("n must be >= 1")
    w = 2.0 * math.pi / wave.period
    return 2.0 / wave.period * float(integrate.simpson(wave.F * np.cos(n * w * wave.t), x=wave.t))


def accumulated_angle(wave):
    """Running ``int Omega dt`` from each window start, per window (cumulative Simpson)."""
    if wave.rabi is None:
        raise ValueError("waveform has no rabi samples; call rabi_from_modulation first")
    return [integrate.cumulative_simpson(wave.rabi[sl], x=wave.t[sl], initial=0.0)
            for sl in wave.window_slices()]


def round_trip_error(wave):
    """Sup-norm of ``+-cos(int Omega) - F`` over all window samples."""
    err = 0.0
    for sl, ang in zip(wave.window_slices(), accumulated_angle(wave)):
        sign = float(np.sign(wave.F[sl][0])) or 1.0
        err = max(err, float(np.abs(sign * np.cos(ang) - wave.F[sl]).max()))
    return err


def pulse_area(wave):
    """``int Omega dt`` over each window (Simpson on the samples)."""
    if wave.rabi is None:
        raise ValueError("waveform has no rabi samples; call rabi_from_modulation first")
    return [float(integrate.simpson(wave.rabi[sl], x=wave.t[sl])) for sl in wave.window_slices()]


def square_wave(period, samples_per_period, l=None):
    """Ideal instantaneous-pulse modulation sampled on a uniform grid."""
    spec = InstantaneousSpec(period, l)
    t = np.linspace(0.0, period, samples_per_period + 1)
    return ModulationWaveform(t, modulation_function(spec, t), (), spec, samples_per_period)


# -- export ------------------------------------------------------------------


def describe_spec(spec):
    out = {"family": spec.family, "period_ns": spec.period * 1e9, "t_pi_ns": spec.t_pi * 1e9}
    if spec.l is not None:
        out["l"] = spec.l
        out["t_pi_over_T_l"] = spec.t_pi * spec.l / spec.period
    if spec.family == "modulated":
        out["c_ns"] = spec.c * 1e9
        out["a1"] = spec.a1
    return out


def format_waveform(wave, header=()):
    if wave.rabi is None:
        wave = rabi_from_modulation(wave)
    lines = [f"# {k} = {v!r}" if isinstance(v, str) else f"# {k} = {v:.17g}"
             for k, v in describe_spec(wave.spec).items()]
    lines += [f"# {h}" for h in header]
    lines.append("# time_ns F rabi_over_2pi_MHz in_pulse")
    mask = wave.in_pulse()
    for t, F, om, m in zip(wave.t, wave.F, wave.rabi, mask):
        lines.append(f"{t * 1e9:.12g} {F:.15g} {om / (2 * math.pi) / 1e6:.12g} {int(m)}")
    return "\n".join(lines) + "\n"
