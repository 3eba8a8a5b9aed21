"""Propagation of the electron-nuclear system under a pulse schedule.

Basis ordering: the electron qubit is the slowest index with ``|1>`` first,
so ``sigma_z = diag(1, -1)`` and ``|1><0|`` is the upper-right block.  The
nuclei follow in bath order, each with ``|up>`` first.

Between pulses the Hamiltonian is block diagonal in the electron
(``H = |1><1| (x) H1 + |0><0| (x) H0``) and every flat segment is one exact
step.  Inside a pulse the drive is piecewise constant on a uniform step
``h``; the step amplitude is ``(theta(t+h) - theta(t)) / h`` with ``theta``
the analytic rotation angle, so each pulse rotates by exactly ``pi (1+eps)``.
All pulses of a schedule share one shape and differ only by phase, and a
phase is a rotation about the electron z axis that commutes with the free
Hamiltonian, so a single phase-0 propagator serves every pulse.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .errors import StepTooLarge
from .pulse_shape import (
    InstantaneousSpec,
    ModulationWaveform,
    TopHatSpec,
    _default_samples,
    extended_pulse,
    f_instantaneous,
    f_modulated,
    f_top_hat,
    rotation_angle,
)
from .sequence import XY8_PHASES, build_xy8
from .spin_model import hyperfine_components

MIN_PULSE_STEPS = 50
MAX_EXACT_NUCLEI = 12
_MODES = {"exact": "exact", "exact-cluster": "exact", "product": "product", "product-rule": "product"}
_CHUNK = 256

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def nuclear_operators(n):
    """``[(Ix, Iy, Iz), ...]`` for ``n`` spin-1/2 nuclei on a ``2**n`` space."""
    ops = []
    for j in range(n):
        left, right = np.eye(2**j), np.eye(2 ** (n - j - 1))
        ops.append(tuple(np.kron(np.kron(left, _PAULI[a] / 2), right) for a in "xyz"))
    return ops


def electron_operator(name, n_nuclei):
    return np.kron(_PAULI[name], np.eye(2**n_nuclei))


# -- states ----------------------------------------------------------------------


@dataclass(frozen=True)
class QuantumState:
    """Density matrix over the electron qubit and ``n_nuclei`` nuclei."""

    rho: np.ndarray
    n_nuclei: int

    def __post_init__(self):
        d = 2 ** (self.n_nuclei + 1)
        if self.rho.shape != (d, d):
            raise ValueError(f"rho must be {d}x{d} for {self.n_nuclei} nuclei")

    @classmethod
    def initial(cls, n_nuclei):
        """``|+><+| (x) I / 2**n``."""
        plus = np.full((2, 2), 0.5, dtype=complex)
        d = 2**n_nuclei
        return cls(np.kron(plus, np.eye(d) / d), n_nuclei)

    @property
    def dim(self):
        return self.rho.shape[0]

    def expectation(self, op):
        return float(np.real(np.trace(op @ self.rho)))

    def sigma(self, name):
        return self.expectation(electron_operator(name, self.n_nuclei))

    def diagnostics(self):
        """Deviations from a valid density matrix."""
        rho = self.rho
        return {
            "hermiticity": float(np.abs(rho - rho.conj().T).max()),
            "trace": float(abs(np.trace(rho) - 1.0)),
            "min_eigenvalue": float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()),
        }


# -- configuration ---------------------------------------------------------------


@dataclass(frozen=True)
class SimulationConfig:
    """Propagation settings.

    ``rabi_error`` is a static relative amplitude offset applied to every
    pulse.  ``rabi_noise`` (standard deviation, seeded by ``seed``) adds an
    independent Gaussian offset per pulse on top of it.  ``stepper`` picks
    the intrapulse propagator: ``'exact'`` exponentiates every frozen step,
    ``'split'`` uses a symmetric (Strang) splitting of drive and free parts.
    """

    mode: str = "exact"
    max_step: float | None = None
    substeps: int = 1
    rabi_error: float = 0.0
    rabi_noise: float = 0.0
    seed: int | None = None
    stepper: str = "exact"
    observable: str = "sigma_x"

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "mode", _MODES[self.mode])
        if self.max_step is not None and not self.max_step > 0:
            raise ValueError("max_step must be positive")
        if self.substeps < 1:
            raise ValueError("substeps must be >= 1")
        if self.rabi_noise < 0:
            raise ValueError("rabi_noise must be >= 0")
        if self.stepper not in ("exact", "split"):
            raise ValueError(f"unknown stepper {self.stepper!r}")
        if self.observable != "sigma_x":
            raise ValueError("only the sigma_x observable is supported")


# -- Hamiltonian -----------------------------------------------------------------


def _blocks(bath, nuclei):
    """Nuclear Hamiltonians conditioned on the electron in ``|1>`` and ``|0>``."""
    ops = nuclear_operators(len(nuclei))
    d = 2 ** len(nuclei)
    h1 = np.zeros((d, d), dtype=complex)
    h0 = np.zeros((d, d), dtype=complex)
    for nuc, I in zip(nuclei, ops):
        A = nuc.A
        w_vec = np.array([0.0, 0.0, nuc.gyro * bath.b_field]) - 0.5 * A
        for k in range(3):
            h1 += (w_vec[k] + 0.5 * A[k]) * I[k]
            h0 += (w_vec[k] - 0.5 * A[k]) * I[k]
    return h1, h0


@dataclass
class Hamiltonian:
    """``H(t) = sum_j w_j . I_j + (sigma_z/2) sum_j A_j . I_j + (Omega(t)/2)(|1><0| e^{i phi} + h.c.)``.

    ``rabi`` is a number or a callable of time.  Calling the object returns
    the full matrix at time ``t``.
    """

    h1: np.ndarray
    h0: np.ndarray
    n_nuclei: int
    rabi: object = 0.0
    phase: float = 0.0

    @property
    def static(self):
        d = self.h1.shape[0]
        out = np.zeros((2 * d, 2 * d), dtype=complex)
        out[:d, :d] = self.h1
        out[d:, d:] = self.h0
        return out

    def drive_operator(self, phase=None):
        phi = self.phase if phase is None else phase
        d = self.h1.shape[0]
        out = np.zeros((2 * d, 2 * d), dtype=complex)
        out[:d, d:] = np.exp(1j * phi) * np.eye(d)
        out[d:, :d] = np.exp(-1j * phi) * np.eye(d)
        return out

    def __call__(self, t=0.0):
        om = self.rabi(t) if callable(self.rabi) else self.rabi
        return self.static + 0.5 * om * self.drive_operator()


def hamiltonian(bath, nuclei_subset=None, drive=None):
    """Assemble the rotating-frame Hamiltonian for ``nuclei_subset`` of ``bath``.

    ``drive`` is ``(Omega, phi)`` with ``Omega`` a number or callable.
    """
    labels = bath.labels if nuclei_subset is None else list(nuclei_subset)
    if not labels:
        raise ValueError("nuclei subset must be nonempty")
    nuclei = [bath.nucleus(lb) for lb in labels]
    h1, h0 = _blocks(bath, nuclei)
    rabi, phase = drive if drive is not None else (0.0, 0.0)
    return Hamiltonian(h1, h0, len(nuclei), rabi, phase)


# -- propagation engine ---------------------------------------------------------


def _dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def _expm_h(w, V, t):
    """``exp(-i H t)`` from the eigendecomposition of ``H``."""
    return (V * np.exp(-1j * w * t)[..., None, :]) @ _dagger(V)


class _Engine:
    """Propagators for a batch of independent clusters of equal size.

    ``h1`` and ``h0`` have shape ``(B, d, d)``; every propagator returned has
    shape ``(B, 2d, 2d)``.
    """

    def __init__(self, h1, h0):
        self.h1 = np.asarray(h1, dtype=complex)
        self.h0 = np.asarray(h0, dtype=complex)
        self.batch, self.d = self.h1.shape[:2]
        self._e1 = np.linalg.eigh(self.h1)
        self._e0 = np.linalg.eigh(self.h0)
        d = self.d
        self.static = np.zeros((self.batch, 2 * d, 2 * d), dtype=complex)
        self.static[:, :d, :d] = self.h1
        self.static[:, d:, d:] = self.h0
        self.drive = np.zeros((2 * d, 2 * d), dtype=complex)
        self.drive[:d, d:] = np.eye(d)
        self.drive[d:, :d] = np.eye(d)

    @classmethod
    def for_clusters(cls, bath, clusters):
        blocks = [_blocks(bath, c) for c in clusters]
        return cls(np.stack([b[0] for b in blocks]), np.stack([b[1] for b in blocks]))

    def identity(self):
        return np.broadcast_to(np.eye(2 * self.d, dtype=complex), self.static.shape).copy()

    def free(self, t):
        d = self.d
        out = np.zeros_like(self.static)
        out[:, :d, :d] = _expm_h(*self._e1, t)
        out[:, d:, d:] = _expm_h(*self._e0, t)
        return out

    def rotate(self, U, phase):
        """Phase-``phase`` version of a phase-0 pulse propagator."""
        if phase == 0.0:
            return U
        d = self.d
        out = U.copy()
        out[:, :d, d:] *= np.exp(1j * phase)
        out[:, d:, :d] *= np.exp(-1j * phase)
        return out

    def instantaneous(self, angle, phase=0.0):
        """``exp(-i angle/2 sigma_phi)`` on the electron."""
        U = math.cos(angle / 2) * self.identity() - 1j * math.sin(angle / 2) * self.drive
        return self.rotate(U, phase)

    def shaped(self, dtheta, h, stepper="exact"):
        """Phase-0 propagator of a pulse with step angles ``dtheta`` on step ``h``."""
        dtheta = np.asarray(dtheta, dtype=float)
        if dtheta.size and np.ptp(dtheta) <= 1e-12 * np.abs(dtheta).max():
            # constant drive: the product of equal steps is a single step
            H = self.static + 0.5 * (dtheta[0] / h) * self.drive
            return _expm_h(*np.linalg.eigh(H), h * dtheta.size)
        if stepper == "split":
            return self._shaped_split(dtheta, h)
        U = self.identity()
        B, D = self.batch, 2 * self.d
        for start in range(0, dtheta.size, _CHUNK):
            part = dtheta[start:start + _CHUNK]
            H = self.static[None] + 0.5 * (part / h)[:, None, None, None] * self.drive
            w, V = np.linalg.eigh(H.reshape(-1, D, D))
            steps = _expm_h(w, V, h).reshape(part.size, B, D, D)
            for S in steps:
                U = S @ U
        return U

    def _shaped_split(self, dtheta, h):
        d = self.d
        half = self.free(h / 2)
        e1, e0 = half[:, :d, :d] @ half[:, :d, :d], half[:, d:, d:] @ half[:, d:, d:]
        M = half.copy()
        for k, a in enumerate(dtheta):
            c, s = math.cos(a / 2), math.sin(a / 2)
            top, bot = M[:, :d, :], M[:, d:, :]
            M = np.concatenate([c * top - 1j * s * bot, c * bot - 1j * s * top], axis=1)
            if k < dtheta.size - 1:
                M[:, :d, :] = e1 @ M[:, :d, :]
                M[:, d:, :] = e0 @ M[:, d:, :]
        return half @ M


def signal_from_unitary(U):
    """``<sigma_x>`` after ``U`` acts on ``|+><+| (x) I/d``, per batch entry."""
    U = np.asarray(U)
    d = U.shape[-1] // 2
    V = U[..., :, :d] + U[..., :, d:]
    return np.real(np.sum(V[..., :d, :] * np.conj(V[..., d:, :]), axis=(-1, -2))) / d


# -- schedules -------------------------------------------------------------------


def _pulse_steps(schedule, config, dt=None):
    """Uniform intrapulse step and the rotation angle of each step.

    ``dt`` is the waveform sample spacing; it defaults to the spacing of the
    schedule's waveform, or of the default sampling when it holds a spec.
    """
    spec = schedule.spec
    if dt is None:
        if isinstance(schedule.shape, ModulationWaveform):
            dt = schedule.shape.dt
        else:
            dt = spec.period / _default_samples(spec.l or 1, spec)
    h_max = dt / config.substeps
    if config.max_step is not None:
        h_max = min(h_max, config.max_step)
    n = int(math.ceil(spec.t_pi / h_max * (1.0 - 1e-12)))
    if n < MIN_PULSE_STEPS:
        raise StepTooLarge(f"pulse window holds {n} steps (< {MIN_PULSE_STEPS})")
    if isinstance(spec, TopHatSpec):
        return spec.t_pi / n, np.full(n, math.pi / n)
    tau = np.linspace(0.0, spec.t_pi, n + 1)
    return spec.t_pi / n, np.diff(rotation_angle(spec, tau))


class _Pulses:
    """Pulse propagators for one schedule, with optional per-pulse noise."""

    def __init__(self, engine, schedule, config, dt=None):
        self.engine = engine
        self.config = config
        self.instant = schedule.t_pi == 0.0
        if not self.instant:
            self.h, self.dtheta = _pulse_steps(schedule, config, dt)
        self.rng = np.random.default_rng(config.seed) if config.rabi_noise > 0 else None
        self._base = None

    def _make(self, eps):
        if self.instant:
            return self.engine.instantaneous(math.pi * (1.0 + eps))
        return self.engine.shaped(self.dtheta * (1.0 + eps), self.h, self.config.stepper)

    @property
    def noisy(self):
        return self.rng is not None

    def next(self, phase):
        eps = self.config.rabi_error
        if self.noisy:
            eps += self.config.rabi_noise * self.rng.standard_normal()
            return self.engine.rotate(self._make(eps), phase)
        if self._base is None:
            self._base = self._make(eps)
        return self.engine.rotate(self._base, phase)


def _block_unitary(engine, schedule, pulses, free):
    """Propagator of one phase block."""
    edge, gap = free
    U = edge
    last = schedule.block_size - 1
    for k, ph in enumerate(schedule.phases):
        U = pulses.next(ph) @ U
        U = (gap if k < last else edge) @ U
    return U


def _free_pair(engine, schedule):
    T, tp = schedule.period, schedule.t_pi
    return engine.free(T / 4 - tp / 2), engine.free(T / 2 - tp)


def _schedule_unitaries(engine, schedule, config, record=False, dt=None):
    """Total propagator, and optionally the propagators after every block."""
    if schedule.reps == 0:
        U = engine.identity()
        return (U, [U]) if record else U
    pulses = _Pulses(engine, schedule, config, dt)
    free = _free_pair(engine, schedule)
    if not record and not pulses.noisy:
        U = np.linalg.matrix_power(_block_unitary(engine, schedule, pulses, free), schedule.reps)
        return U
    U = engine.identity()
    trace = [U]
    block = None if pulses.noisy else _block_unitary(engine, schedule, pulses, free)
    for _ in range(schedule.reps):
        B = _block_unitary(engine, schedule, pulses, free) if pulses.noisy else block
        U = B @ U
        trace.append(U)
    return (U, trace) if record else U


def _check_exact(n):
    if n > MAX_EXACT_NUCLEI:
        raise ValueError(f"exact-cluster mode is limited to {MAX_EXACT_NUCLEI} nuclei (got {n})")


def evolve(state, schedule, bath, config=None, nuclei_subset=None):
    """Propagate ``state`` through ``schedule`` (exact cluster dynamics).

    Raises
    ------
    StepTooLarge
        If a pulse window would be covered by fewer than 50 steps.
    """
    config = config or SimulationConfig()
    labels = bath.labels if nuclei_subset is None else list(nuclei_subset)
    if state.n_nuclei != len(labels):
        raise ValueError(f"state has {state.n_nuclei} nuclei, subset has {len(labels)}")
    _check_exact(len(labels))
    if not labels:
        h1 = h0 = np.zeros((1, 1, 1), dtype=complex)
        engine = _Engine(h1, h0)
    else:
        engine = _Engine.for_clusters(bath, [[bath.nucleus(lb) for lb in labels]])
    U = _schedule_unitaries(engine, schedule, config)[0]  # single cluster
    return QuantumState(U @ state.rho @ U.conj().T, state.n_nuclei)


def _engine_for(bath, labels, mode):
    nuclei = [bath.nucleus(lb) for lb in labels]
    if mode == "exact":
        _check_exact(len(nuclei))
        return _Engine.for_clusters(bath, [nuclei])
    return _Engine.for_clusters(bath, [[n] for n in nuclei])


def coherence_trace(bath, schedule, config=None, nuclei_subset=None):
    """``(times, <sigma_x>)`` at ``t = 0`` and after every phase block."""
    config = config or SimulationConfig()
    labels = bath.labels if nuclei_subset is None else list(nuclei_subset)
    times = np.arange(schedule.reps + 1) * schedule.block_duration
    if not labels:
        return times, np.ones_like(times)
    engine = _engine_for(bath, labels, config.mode)
    _, trace = _schedule_unitaries(engine, schedule, config, record=True)
    sig = np.array([np.prod(signal_from_unitary(U)) for U in trace])
    return times, sig


def ideal_signal(f_l, ax, t):
    """``cos(f_l A^x t / 4)``."""
    return np.cos(f_l * ax * np.asarray(t, dtype=float) / 4.0)


# -- pulse families and scans ----------------------------------------------------


@dataclass(frozen=True)
class PulseFamily:
    """How to build the pulse shape at each point of a scan.

    ``modulated`` needs ``t_pi_ratio`` (``t_pi`` in units of ``T/l``) and uses
    a Gaussian width ``c_ratio * t_pi``.  ``top-hat`` needs a constant drive
    ``rabi`` (rad/s) and sets ``t_pi = pi / rabi``.  ``instantaneous`` needs
    nothing.
    """

    kind: str
    t_pi_ratio: float | None = None
    c_ratio: float = 0.07
    rabi: float | None = None
    samples_per_period: int | None = None

    def __post_init__(self):
        if self.kind not in ("modulated", "top-hat", "instantaneous"):
            raise ValueError(f"unknown pulse family {self.kind!r}")
        if self.kind == "modulated" and not (self.t_pi_ratio and self.t_pi_ratio > 0):
            raise ValueError("modulated family needs a positive t_pi_ratio")
        if self.kind == "top-hat" and not (self.rabi and self.rabi > 0):
            raise ValueError("top-hat family needs a positive rabi")
        if not self.c_ratio > 0:
            raise ValueError("c_ratio must be positive")

    def spec(self, T, l):
        if self.kind == "modulated":
            return extended_pulse(l, T, self.t_pi_ratio * T / l, c_ratio=self.c_ratio)
        if self.kind == "top-hat":
            return TopHatSpec(T, math.pi / self.rabi, l)
        return InstantaneousSpec(T, l)

    def sample_spacing(self, T, l, spec=None):
        return T / (self.samples_per_period or _default_samples(l, spec))

    def coefficient(self, T, l):
        if self.kind == "modulated":
            return f_modulated(l, self.t_pi_ratio * T / l, T)
        if self.kind == "top-hat":
            return f_top_hat(l, math.pi / self.rabi, T)
        return f_instantaneous(l)


@dataclass(frozen=True)
class Resonance:
    label: str
    n: int
    position: float  # omega_M (rad/s)
    depth: float  # predicted <sigma_x> at the dip


@dataclass(frozen=True)
class SpectrumResult:
    """Scan output; in product-rule mode ``factors[i, j]`` is nucleus ``j``'s factor at point ``i``."""

    omega_m: np.ndarray
    signal: np.ndarray
    annotations: tuple = ()
    meta: dict = field(default_factory=dict)
    labels: tuple = ()
    factors: np.ndarray | None = None

    def dips(self, prominence=0.01):
        return find_dips(self, prominence)


def find_dips(result, prominence=0.01):
    """``[(omega_M, signal), ...]`` at local minima with at least this prominence."""
    idx, _ = find_peaks(-np.asarray(result.signal), prominence=prominence)
    return [(float(result.omega_m[i]), float(result.signal[i])) for i in idx]


@dataclass(frozen=True)
class DipAttribution:
    omega_m: float
    signal: float
    label: str  # nucleus whose factor is smallest at the dip
    n: int  # harmonic placing that nucleus' resonance nearest the dip
    factor: float


def attribute_dips(result, bath, n_max, prominence=0.02, coeffs=None):
    """Assign every dip of a product-rule scan to a nucleus and a harmonic.

    The nucleus is the one with the smallest factor at the dip; the
    harmonic is the ``n <= n_max`` whose resonance ``omega_j / n`` lies
    closest to the dip.  With ``coeffs`` (callable ``f(n)``) harmonics whose
    filter coefficient vanishes are skipped.
    """
    if result.factors is None:
        raise ValueError("dip attribution needs a product-rule scan (per-nucleus factors)")
    harmonics = [k for k in range(1, n_max + 1) if coeffs is None or coeffs(k) != 0.0]
    out = []
    for w, s in find_dips(result, prominence):
        i = int(np.searchsorted(result.omega_m, w))
        j = int(np.argmin(result.factors[i]))
        label = result.labels[j]
        omega_j = hyperfine_components(bath, bath.nucleus(label)).omega_j
        n = min(harmonics, key=lambda k: abs(omega_j / k - w))
        out.append(DipAttribution(w, s, label, n, float(result.factors[i, j])))
    return out


def _annotations(bath, labels, l, family, t_final):
    out = []
    for lb in labels:
        fc = hyperfine_components(bath, bath.nucleus(lb))
        T = 2.0 * math.pi * l / fc.omega_j
        f = family.coefficient(T, l)
        out.append(Resonance(lb, l, fc.omega_j / l, float(ideal_signal(f, fc.ax, t_final))))
    return tuple(out)


def scan(bath, l, grid, family, config=None, nuclei_subset=None, reps=1, threads=1,
         phases=XY8_PHASES):
    """``<sigma_x>`` after ``reps`` XY-8 blocks for every ``omega_M`` in ``grid``.

    Each grid point sets ``T = 2 pi / omega_M`` and rebuilds the pulse for
    that period.  In product-rule mode the signal is the product of
    electron-plus-one-nucleus signals.
    """
    config = config or SimulationConfig()
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a nonempty 1-d sequence")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    labels = bath.labels if nuclei_subset is None else list(nuclei_subset)
    t_final = reps * 4.0 * 2.0 * math.pi / grid.mean()
    meta = {"l": l, "reps": reps, "family": family.kind, "mode": config.mode,
            "rabi_error": config.rabi_error, "t_final_s": t_final}
    if not labels:
        return SpectrumResult(grid, np.ones_like(grid), (), meta)
    # grid points are independent and share only read-only inputs
    engine = _engine_for(bath, labels, config.mode)

    def point(wm):
        T = 2.0 * math.pi / wm
        spec = family.spec(T, l)
        schedule = build_xy8(T, spec.t_pi, reps, spec, phases)
        U = _schedule_unitaries(engine, schedule, config, dt=family.sample_spacing(T, l, spec))
        return signal_from_unitary(U)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = np.array(list(pool.map(point, grid)))
    else:
        parts = np.array([point(w) for w in grid])
    factors = parts if config.mode == "product" else None
    return SpectrumResult(grid, np.prod(parts, axis=1),
                          _annotations(bath, labels, l, family, t_final), meta,
                          tuple(labels), factors)


def product_vs_exact_report(bath, l, grid, family, config=None, nuclei_subset=None, reps=1,
                            threads=1):
    """Max and mean ``|exact - product|`` over a scan of at most four nuclei."""
    labels = bath.labels if nuclei_subset is None else list(nuclei_subset)
    if len(labels) > 4:
        raise ValueError("product_vs_exact_report takes at most 4 nuclei")
    config = config or SimulationConfig()
    runs = {}
    for mode in ("exact", "product"):
        cfg = SimulationConfig(mode, config.max_step, config.substeps, config.rabi_error,
                               config.rabi_noise, config.seed, config.stepper)
        runs[mode] = scan(bath, l, grid, family, cfg, labels, reps, threads)
    dev = np.abs(runs["exact"].signal - runs["product"].signal)
    return {"max": float(dev.max()), "mean": float(dev.mean()),
            "exact": runs["exact"], "product": runs["product"]}


def format_spectrum(result, header=()):
    two_pi = 2.0 * math.pi
    lines = [f"# {h}" for h in header]
    for k, v in result.meta.items():
        lines.append(f"# {k} = {v}")
    for r in result.annotations:
        lines.append(f"# resonance {r.label} n={r.n} omega_M_over_2pi_MHz={r.position / two_pi / 1e6:.12f} "
                     f"predicted_depth={r.depth:.6f}")
    lines.append("# omega_M_over_2pi_MHz signal")
    for w, s in zip(result.omega_m, result.signal):
        lines.append(f"{w / two_pi / 1e6:.12f} {s:.12f}")
    return "\n".join(lines) + "\n"
