"""Electron sensor, nuclear spins and the per-nucleus precession frame.

Units: every frequency held by these objects is angular (rad/s), fields are
in tesla and lengths in metres.  Conversion to Hz/kHz/MHz happens only in
the bath file reader and writer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy import constants as sc

from .errors import InsufficientSites, ZeroFrequency

TWO_PI = 2.0 * math.pi
DIAMOND_LATTICE_CONSTANT = 3.567e-10  # m


@dataclass(frozen=True)
class PhysicalConstants:
    D: float = TWO_PI * 2.87e9
    gamma_e: float = -TWO_PI * 28.024e9
    gamma_c13: float = TWO_PI * 10.708e6
    gamma_h: float = TWO_PI * 42.577e6

    def gyro(self, species):
        """Nuclear gyromagnetic ratio for ``'H'`` / ``'1H'`` or ``'C13'`` / ``'13C'``."""
        key = species.upper().replace("-", "")
        if key in ("H", "1H", "H1"):
            return self.gamma_h
        if key in ("C13", "13C"):
            return self.gamma_c13
        raise KeyError(f"unknown nuclear species {species!r}")


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class NuclearSpin:
    hyperfine: tuple
    gyro: float
    label: str
    position: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        hf = tuple(float(a) for a in self.hyperfine)
        if len(hf) != 3 or not all(math.isfinite(a) for a in hf):
            raise ValueError(f"hyperfine of {self.label!r} must be 3 finite reals")
        if not self.gyro > 0:
            raise ValueError(f"gyro of {self.label!r} must be positive")
        object.__setattr__(self, "hyperfine", hf)
        if self.position is not None:
            object.__setattr__(self, "position", tuple(float(x) for x in self.position))

    @property
    def A(self):
        return np.array(self.hyperfine)


@dataclass(frozen=True)
class SpinBath:
    b_field: float
    nuclei: tuple = ()
    constants: PhysicalConstants = field(default=CONSTANTS)

    def __post_init__(self):
        if not self.b_field > 0:
            raise ValueError("b_field must be positive")
        nuclei = tuple(self.nuclei)
        labels = [n.label for n in nuclei]
        if len(set(labels)) != len(labels):
            raise ValueError("nucleus labels must be unique")
        object.__setattr__(self, "nuclei", nuclei)

    def __len__(self):
        return len(self.nuclei)

    def __iter__(self):
        return iter(self.nuclei)

    @property
    def labels(self):
        return [n.label for n in self.nuclei]

    def nucleus(self, label):
        from .errors import UnknownNucleus

        for n in self.nuclei:
            if n.label == label:
                return n
        raise UnknownNucleus(label)

    def subset(self, labels):
        """A bath holding only the nuclei named in ``labels`` (in that order)."""
        return SpinBath(self.b_field, tuple(self.nucleus(lb) for lb in labels), self.constants)

    def with_field(self, b_field):
        return SpinBath(b_field, self.nuclei, self.constants)


@dataclass(frozen=True)
class FrameComponents:
    omega_j: float
    ax: float
    ay: float
    az: float
    axes: tuple  # (x_hat, y_hat, omega_hat) as numpy arrays


def larmor_frequency(bath, nucleus):
    """Bare nuclear Larmor frequency ``gyro * B_z`` (rad/s)."""
    return nucleus.gyro * bath.b_field


def hyperfine_components(bath, nucleus):
    """Decompose the hyperfine vector in the nucleus' precession frame.

    The precession vector is ``omega_L z - A/2``; the transverse part of ``A``
    with respect to it sets the coupling that dynamical decoupling resonantly
    selects.

    Raises
    ------
    ZeroFrequency
        If the precession vector vanishes.
    """
    A = nucleus.A
    w_vec = np.array([0.0, 0.0, larmor_frequency(bath, nucleus)]) - 0.5 * A
    omega_j = float(np.linalg.norm(w_vec))
    if omega_j == 0.0:
        raise ZeroFrequency(f"precession frequency of {nucleus.label!r} is zero")
    w_hat = w_vec / omega_j
    az = float(A @ w_hat)
    a_perp = A - az * w_hat
    a_y_vec = np.cross(w_hat, A)
    ax = float(np.linalg.norm(a_perp))
    ay = float(np.linalg.norm(a_y_vec))
    # below this the transverse direction is numerical noise
    if ax > 1e-12 * max(np.linalg.norm(A), 1e-300):
        x_hat = a_perp / ax
    else:
        ax = ay = 0.0
        x_hat = np.cross([0.0, 0.0, 1.0], w_hat)
        nrm = np.linalg.norm(x_hat)
        x_hat = x_hat / nrm if nrm > 1e-12 else np.array([1.0, 0.0, 0.0])
        x_hat = x_hat - (x_hat @ w_hat) * w_hat
        x_hat /= np.linalg.norm(x_hat)
    y_hat = np.cross(w_hat, x_hat)
    return FrameComponents(omega_j, ax, ay, az, (x_hat, y_hat, w_hat))


# -- bath generation ---------------------------------------------------------

_DIAMOND_BASIS = np.array(
    [
        [0.0, 0.0, 0.0],
        [0.0, 0.5, 0.5],
        [0.5, 0.0, 0.5],
        [0.5, 0.5, 0.0],
        [0.25, 0.25, 0.25],
        [0.25, 0.75, 0.75],
        [0.75, 0.25, 0.75],
        [0.75, 0.75, 0.25],
    ]
)


def _nv_rotation():
    """Rotation taking the crystal [111] direction onto z."""
    z = np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0)
    x = np.array([1.0, -1.0, 0.0]) / math.sqrt(2.0)
    y = np.cross(z, x)
    return np.vstack([x, y, z])


def diamond_sites(max_distance, a=DIAMOND_LATTICE_CONSTANT):
    """Carbon sites within ``max_distance`` of a vacancy at the origin.

    Coordinates are in the NV frame (NV axis along z).  The vacancy and the
    nitrogen site at ``a/4 (1,1,1)`` are excluded.
    """
    n = int(math.ceil(max_distance / a)) + 1
    r = np.arange(-n, n + 1)
    cells = np.stack(np.meshgrid(r, r, r, indexing="ij"), axis=-1).reshape(-1, 3)
    pos = (cells[:, None, :] + _DIAMOND_BASIS[None, :, :]).reshape(-1, 3) * a
    pos = pos @ _nv_rotation().T
    d = np.linalg.norm(pos, axis=1)
    nitrogen = np.array([0.0, 0.0, a * math.sqrt(3.0) / 4.0])
    keep = (d > 1e-3 * a) & (d <= max_distance) & (np.linalg.norm(pos - nitrogen, axis=1) > 1e-3 * a)
    pos = pos[keep]
    # canonical order so that seeded choices do not depend on meshgrid layout
    order = np.lexsort(np.round(pos / a * 1e6).T[::-1])
    return pos[order]


def point_dipole_hyperfine(position, gyro, constants=CONSTANTS):
    """Secular point-dipole hyperfine vector for an NV along z (rad/s).

    ``A = (mu0/4pi) gamma_e gamma_n hbar / r^3 * (3 (z.r_hat) r_hat - z)``
    """
    r_vec = np.asarray(position, dtype=float)
    r = np.linalg.norm(r_vec)
    r_hat = r_vec / r
    pref = sc.mu_0 / (4.0 * math.pi) * constants.gamma_e * gyro * sc.hbar / r**3
    return pref * (3.0 * r_hat[2] * r_hat - np.array([0.0, 0.0, 1.0]))


def generate_c13_bath(seed, count, min_distance=0.8e-9, max_distance=2.5e-9, b_field=1.0,
                      constants=CONSTANTS):
    """Random 13C bath on diamond lattice sites inside a spherical shell.

    Parameters
    ----------
    seed : int
        Seed for ``numpy.random.default_rng``; the result is a pure function
        of all arguments.
    count : int
        Number of occupied sites.
    min_distance, max_distance : float
        Shell radii in metres.
    b_field : float
        Static field in tesla stored on the returned bath.

    Raises
    ------
    InsufficientSites
        If the shell holds fewer than ``count`` sites.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if not 0 < min_distance < max_distance:
        raise ValueError("need 0 < min_distance < max_distance")
    sites = diamond_sites(max_distance)
    sites = sites[np.linalg.norm(sites, axis=1) >= min_distance]
    if len(sites) < count:
        raise InsufficientSites(f"shell holds {len(sites)} sites, {count} requested")
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(len(sites), size=count, replace=False))
    gyro = _snap(constants.gamma_c13, _GYRO_UNIT)
    nuclei = []
    for k, idx in enumerate(chosen):
        A = point_dipole_hyperfine(sites[idx], constants.gamma_c13, constants)
        A = tuple(_snap(a, _HF_UNIT) for a in A)
        nuclei.append(NuclearSpin(A, gyro, f"C{k + 1}", tuple(sites[idx])))
    return SpinBath(b_field, tuple(nuclei), constants)


# -- bath files --------------------------------------------------------------

_HF_UNIT = TWO_PI * 1e3  # kHz -> rad/s
_GYRO_UNIT = TWO_PI * 1e6  # MHz/T -> rad/s/T


def _to_file(value, unit):
    """Decimal in file units that maps back onto ``value`` exactly when possible."""
    x = value / unit
    for cand in (x, np.nextafter(x, np.inf), np.nextafter(x, -np.inf)):
        if float(cand) * unit == value:
            return float(cand)
    return x


def _snap(value, unit):
    return float(_to_file(value, unit)) * unit


def format_bath(bath):
    lines = [f"# B_z_T = {bath.b_field:.17g}", "# label gyro_MHz_per_T Ax_kHz Ay_kHz Az_kHz"]
    for n in bath.nuclei:
        vals = [_to_file(n.gyro, _GYRO_UNIT)] + [_to_file(a, _HF_UNIT) for a in n.hyperfine]
        lines.append(" ".join([n.label] + [f"{v:.17g}" for v in vals]))
    return "\n".join(lines) + "\n"


def write_bath(bath, path):
    Path(path).write_text(format_bath(bath))


def parse_bath(text, constants=CONSTANTS):
    b_field = None
    nuclei = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("B_z_T"):
                b_field = float(body.split("=", 1)[1])
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(f"line {lineno}: expected 5 columns, got {len(parts)}")
        label = parts[0]
        gyro = float(parts[1]) * _GYRO_UNIT
        A = tuple(float(p) * _HF_UNIT for p in parts[2:])
        nuclei.append(NuclearSpin(A, gyro, label))
    if b_field is None:
        raise ValueError("bath file lacks a '# B_z_T = ...' header")
    return SpinBath(b_field, tuple(nuclei), constants)


def read_bath(path, constants=CONSTANTS):
    return parse_bath(Path(path).read_text(), constants)


def five_proton_bath(b_field=1.0):
    """The bundled 5-proton cluster (hyperfine vectors in kHz, 1H nuclei)."""
    text = resources.files("nvpulse.data").joinpath("five_h_cluster.bath").read_text()
    return parse_bath(text).with_field(b_field)
