"""Run configuration: INI sections with unit-suffixed quantities.

Frequencies are non-angular (Hz/kHz/MHz/GHz, MHz when bare), times take
s/ms/us/ns (ns when bare) and the field needs an explicit T, mT or G.
Everything is converted to SI angular units on load.  The effective
configuration (defaults filled in) can be rendered back to INI text; output
files embed it between marker lines so they can be fed back as ``--config``.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

CONFIG_BEGIN = "--- effective config ---"
CONFIG_END = "--- end config ---"

_FREQ = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_TIME = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9}
_FIELD = {"t": 1.0, "mt": 1e-3, "g": 1e-4}
_NUM = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z]*)\s*$")

FAMILIES = ("modulated", "top-hat", "instantaneous")


def _split(text, where):
    m = _NUM.match(text)
    if not m:
        raise ConfigError(f"{where}: cannot parse {text!r} as a number with optional unit")
    return float(m.group(1)), m.group(2).lower()


def parse_frequency(text, where="value"):
    """Angular frequency (rad/s) from e.g. ``'18.2 MHz'``."""
    x, unit = _split(text, where)
    unit = unit or "mhz"
    if unit not in _FREQ:
        raise ConfigError(f"{where}: unknown frequency unit {unit!r}")
    return 2.0 * math.pi * x * _FREQ[unit]


def parse_time(text, where="value"):
    x, unit = _split(text, where)
    unit = unit or "ns"
    if unit not in _TIME:
        raise ConfigError(f"{where}: unknown time unit {unit!r}")
    return x * _TIME[unit]


def parse_field(text, where="value"):
    x, unit = _split(text, where)
    if not unit:
        raise ConfigError(f"{where}: field needs a unit suffix (T, mT or G)")
    if unit not in _FIELD:
        raise ConfigError(f"{where}: unknown field unit {unit!r}")
    return x * _FIELD[unit]


def _exact(value, scale, to_si):
    """Decimal ``x`` near ``value / scale`` with ``to_si(x) == value`` when one exists."""
    x = value / scale
    cands = [x]
    up = down = x
    for _ in range(16):
        up, down = math.nextafter(up, math.inf), math.nextafter(down, -math.inf)
        cands += [up, down]
    for c in cands:
        if to_si(float(repr(c))) == value:
            return repr(c)
    return repr(x)


def _fmt_freq(w):
    for unit, name in (("mhz", "MHz"), ("khz", "kHz"), ("hz", "Hz"), ("ghz", "GHz")):
        scale = _FREQ[unit]
        text = _exact(w, 2.0 * math.pi * scale, lambda x: 2.0 * math.pi * x * scale)
        if 2.0 * math.pi * float(text) * scale == w:
            return f"{text} {name}"
    return f"{w / (2.0 * math.pi * 1e6):.17g} MHz"


def _fmt_scaled(value, scale, unit, si_unit):
    """``value`` in ``unit`` when that round-trips exactly, else in the SI unit."""
    text = _exact(value, scale, lambda x: x * scale)
    if float(text) * scale == value:
        return f"{text} {unit}"
    return f"{value!r} {si_unit}"


@dataclass
class RunConfig:
    # system
    b_field: float = 1.0
    species: str = "H"
    bath_file: str | None = "builtin:five_h"
    bath_count: int = 150
    bath_seed: int = 0
    min_distance: float = 0.8 * 1e-9
    max_distance: float = 2.5 * 1e-9
    # sequence
    l: int = 13
    target: str | None = None
    target_frequency: float | None = None
    reps: int = 400
    window: tuple | None = None  # offsets of l w_M from the bare Larmor frequency (rad/s)
    window_pad: float = 2.0 * math.pi * 2.0 * _FREQ["khz"]
    points: int = 301
    # pulse
    family: str = "modulated"
    t_pi: float | None = None  # units of T/l
    target_f: float | None = None
    branch: int = 0
    c: float = 0.07  # units of t_pi
    rabi: float | None = None
    rabi_error: float = 0.0
    samples_per_period: int | None = None
    sweep_max: float = 8.0
    sweep_points: int = 161
    # simulation
    mode: str = "exact"
    stepper: str = "exact"
    substeps: int = 1
    max_step: float | None = None
    rabi_noise: float = 0.0
    seed: int | None = None
    # check
    n_max: int | None = None
    threshold: float = 10.0
    # output
    name: str | None = None
    source: str | None = field(default=None, compare=False)

    def validate(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"[pulse] family: expected one of {', '.join(FAMILIES)}, got {self.family!r}")
        if self.family == "modulated":
            if (self.t_pi is None) == (self.target_f is None):
                raise ConfigError("[pulse]: give exactly one of t_pi and target_f")
            if self.t_pi is not None and not self.t_pi > 0:
                raise ConfigError("[pulse] t_pi: must be positive")
        if self.family == "top-hat" and not (self.rabi and self.rabi > 0):
            raise ConfigError("[pulse] rabi: top-hat pulses need a positive rabi")
        if not self.c > 0:
            raise ConfigError(f"[pulse] c: must be positive, got {self.c:g}")
        if self.l < 1:
            raise ConfigError("[sequence] l: must be >= 1")
        if self.reps < 1:
            raise ConfigError("[sequence] reps: must be >= 1")
        if self.points < 1:
            raise ConfigError("[sequence] points: must be >= 1")
        if self.window is not None and not self.window[0] < self.window[1]:
            raise ConfigError("[sequence] window: low must be below high")
        if not self.b_field > 0:
            raise ConfigError("[system] b_field: must be positive")
        if self.mode not in ("exact", "product", "exact-cluster", "product-rule"):
            raise ConfigError(f"[simulation] mode: unknown mode {self.mode!r}")
        if self.stepper not in ("exact", "split"):
            raise ConfigError(f"[simulation] stepper: unknown stepper {self.stepper!r}")
        if self.bath_file and not self.bath_file.startswith("builtin:"):
            if not Path(self.bath_file).is_file():
                raise ConfigError(f"[system] bath: file {self.bath_file!r} does not exist")
        return self

    def to_ini(self):
        """Effective configuration as INI text (loads back to an equal config)."""
        cp = configparser.ConfigParser()
        sysd = {"b_field": f"{self.b_field!r} T", "species": self.species,
                "bath_count": str(self.bath_count), "bath_seed": str(self.bath_seed),
                "min_distance": _fmt_scaled(self.min_distance, 1e-9, "nm", "m"),
                "max_distance": _fmt_scaled(self.max_distance, 1e-9, "nm", "m")}
        sysd["bath"] = self.bath_file or "generate"
        cp["system"] = sysd
        seq = {"l": str(self.l), "reps": str(self.reps), "points": str(self.points),
               "window_pad": _fmt_freq(self.window_pad)}
        if self.target:
            seq["target"] = self.target
        if self.target_frequency is not None:
            seq["target_frequency"] = _fmt_freq(self.target_frequency)
        if self.window is not None:
            seq["window"] = f"{_fmt_freq(self.window[0])}, {_fmt_freq(self.window[1])}"
        cp["sequence"] = seq
        pulse = {"family": self.family, "c": repr(self.c), "branch": str(self.branch),
                 "rabi_error": repr(self.rabi_error), "sweep_max": repr(self.sweep_max),
                 "sweep_points": str(self.sweep_points)}
        if self.t_pi is not None:
            pulse["t_pi"] = repr(self.t_pi)
        if self.target_f is not None:
            pulse["target_f"] = repr(self.target_f)
        if self.rabi is not None:
            pulse["rabi"] = _fmt_freq(self.rabi)
        if self.samples_per_period is not None:
            pulse["samples_per_period"] = str(self.samples_per_period)
        cp["pulse"] = pulse
        sim = {"mode": self.mode, "stepper": self.stepper, "substeps": str(self.substeps),
               "rabi_noise": repr(self.rabi_noise)}
        if self.seed is not None:
            sim["seed"] = str(self.seed)
        if self.max_step is not None:
            sim["max_step"] = _fmt_scaled(self.max_step, 1e-9, "ns", "s")
        cp["simulation"] = sim
        chk = {"threshold": repr(self.threshold)}
        if self.n_max is not None:
            chk["n_max"] = str(self.n_max)
        cp["check"] = chk
        if self.name:
            cp["output"] = {"name": self.name}
        lines = []
        for sec in cp.sections():
            lines.append(f"[{sec}]")
            lines += [f"{k} = {v}" for k, v in cp[sec].items()]
        return "\n".join(lines) + "\n"

    def header_lines(self):
        return [CONFIG_BEGIN] + self.to_ini().splitlines() + [CONFIG_END]


_KNOWN = {
    "system": {"b_field", "species", "bath", "bath_count", "bath_seed", "min_distance",
               "max_distance"},
    "sequence": {"l", "target", "target_frequency", "reps", "window", "window_pad", "points"},
    "pulse": {"family", "t_pi", "target_f", "branch", "c", "rabi", "rabi_error",
              "samples_per_period", "sweep_max", "sweep_points"},
    "simulation": {"mode", "stepper", "substeps", "max_step", "rabi_noise", "seed"},
    "check": {"n_max", "threshold"},
    "output": {"name"},
}


def _embedded(text):
    """INI text embedded in an output header, or ``text`` itself."""
    if CONFIG_BEGIN not in text:
        return text
    out, inside = [], False
    for line in text.splitlines():
        body = line[1:].strip() if line.startswith("#") else None
        if body == CONFIG_BEGIN:
            inside = True
        elif body == CONFIG_END:
            break
        elif inside and body is not None:
            out.append(body)
    return "\n".join(out) + "\n"


def parse_config(text, base_dir=None, source=None):
    """Build a validated :class:`RunConfig` from INI text.

    Relative bath paths resolve against ``base_dir``.  Errors name the
    offending section/key (and line for syntax errors).
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=(";",))
    try:
        cp.read_string(_embedded(text), source=source or "<config>")
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from None
    for sec in cp.sections():
        if sec not in _KNOWN:
            raise ConfigError(f"unknown section [{sec}]")
        extra = set(cp[sec]) - _KNOWN[sec]
        if extra:
            raise ConfigError(f"[{sec}]: unknown key(s) {', '.join(sorted(extra))}")
    cfg = RunConfig(source=source)

    def get(sec, key, conv=str):
        if not cp.has_option(sec, key):
            return None
        raw = cp.get(sec, key).strip()
        where = f"[{sec}] {key}"
        try:
            return conv(raw, where) if conv in (parse_frequency, parse_time, parse_field) else conv(raw)
        except ConfigError:
            raise
        except ValueError:
            raise ConfigError(f"{where}: invalid value {raw!r}") from None

    def setv(attr, value):
        if value is not None:
            setattr(cfg, attr, value)

    setv("b_field", get("system", "b_field", parse_field))
    setv("species", get("system", "species"))
    bath = get("system", "bath")
    if bath is not None:
        if bath.lower() in ("none", "generate", ""):
            cfg.bath_file = None
        elif bath.startswith("builtin:") or base_dir is None or Path(bath).is_absolute():
            cfg.bath_file = bath
        else:
            cfg.bath_file = str(Path(base_dir) / bath)
    setv("bath_count", get("system", "bath_count", int))
    setv("bath_seed", get("system", "bath_seed", int))
    setv("min_distance", _length(get("system", "min_distance"), "[system] min_distance"))
    setv("max_distance", _length(get("system", "max_distance"), "[system] max_distance"))

    setv("l", get("sequence", "l", int))
    setv("target", get("sequence", "target"))
    setv("target_frequency", get("sequence", "target_frequency", parse_frequency))
    setv("reps", get("sequence", "reps", int))
    win = get("sequence", "window")
    if win is not None:
        parts = [p for p in win.split(",") if p.strip()]
        if len(parts) != 2:
            raise ConfigError("[sequence] window: expected 'low, high'")
        cfg.window = tuple(parse_frequency(p, "[sequence] window") for p in parts)
    setv("window_pad", get("sequence", "window_pad", parse_frequency))
    setv("points", get("sequence", "points", int))

    setv("family", get("pulse", "family"))
    setv("t_pi", get("pulse", "t_pi", float))
    setv("target_f", get("pulse", "target_f", float))
    setv("branch", get("pulse", "branch", int))
    setv("c", get("pulse", "c", float))
    setv("rabi", get("pulse", "rabi", parse_frequency))
    setv("rabi_error", get("pulse", "rabi_error", float))
    setv("samples_per_period", get("pulse", "samples_per_period", int))
    setv("sweep_max", get("pulse", "sweep_max", float))
    setv("sweep_points", get("pulse", "sweep_points", int))

    setv("mode", get("simulation", "mode"))
    setv("stepper", get("simulation", "stepper"))
    setv("substeps", get("simulation", "substeps", int))
    setv("max_step", get("simulation", "max_step", parse_time))
    setv("rabi_noise", get("simulation", "rabi_noise", float))
    setv("seed", get("simulation", "seed", int))

    setv("n_max", get("check", "n_max", int))
    setv("threshold", get("check", "threshold", float))
    setv("name", get("output", "name"))
    return cfg.validate()


def _length(text, where):
    if text is None:
        return None
    x, unit = _split(text, where)
    scale = {"": 1e-9, "nm": 1e-9, "m": 1.0, "a": 1e-10}.get(unit)
    if scale is None:
        raise ConfigError(f"{where}: unknown length unit {unit!r}")
    return x * scale


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {str(path)!r}: {exc.strerror}") from None
    return parse_config(text, base_dir=path.parent, source=str(path))
