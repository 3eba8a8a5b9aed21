"""Command-line entry point: ``nvpulse {design,scan,check,energy,bath}``."""

from __future__ import annotations

import argparse
import datetime as _dt
import logging
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .dynamics import PulseFamily, SimulationConfig, format_spectrum, scan
from .energy import carrier_frequency, energy_report, format_energy_report
from .errors import ConfigError, NumericalError, NVPulseError
from .pulse_shape import (
    extended_pulse,
    f_instantaneous,
    f_modulated,
    f_top_hat,
    f_top_hat_ratio,
    fourier_numeric,
    pulse_area,
    rabi_from_modulation,
    round_trip_error,
    synthesize_modulation,
    synthesize_top_hat,
    t_pi_for_target,
)
from .sequence import format_rwa_report, rwa_margins
from .spin_model import (
    CONSTANTS,
    five_proton_bath,
    format_bath,
    generate_c13_bath,
    hyperfine_components,
    read_bath,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
log = logging.getLogger("nvpulse")


# -- shared helpers --------------------------------------------------------------


def load_bath(cfg):
    if cfg.bath_file is None:
        return generate_c13_bath(cfg.bath_seed, cfg.bath_count, cfg.min_distance,
                                 cfg.max_distance, cfg.b_field)
    if cfg.bath_file == "builtin:five_h":
        return five_proton_bath(cfg.b_field)
    if cfg.bath_file.startswith("builtin:"):
        raise ConfigError(f"[system] bath: unknown builtin {cfg.bath_file!r}")
    try:
        return read_bath(cfg.bath_file).with_field(cfg.b_field)
    except ValueError as exc:
        raise ConfigError(f"[system] bath: {cfg.bath_file}: {exc}") from None


def larmor(cfg):
    try:
        return CONSTANTS.gyro(cfg.species) * cfg.b_field
    except KeyError:
        raise ConfigError(f"[system] species: unknown species {cfg.species!r}") from None


def target_frequency(cfg, bath=None):
    """Frequency the ``l``-th harmonic is tuned to (rad/s)."""
    if cfg.target_frequency is not None:
        return cfg.target_frequency
    if cfg.target is not None:
        bath = bath if bath is not None else load_bath(cfg)
        if cfg.target not in bath.labels:
            raise ConfigError(f"[sequence] target: no nucleus {cfg.target!r} in the bath")
        return hyperfine_components(bath, bath.nucleus(cfg.target)).omega_j
    return larmor(cfg)


def t_pi_ratio(cfg, T):
    """``t_pi`` in units of ``T/l`` for the modulated family."""
    if cfg.t_pi is not None:
        return cfg.t_pi
    return t_pi_for_target(cfg.l, T, cfg.target_f, cfg.branch) * cfg.l / T


def pulse_family(cfg, T):
    if cfg.family == "modulated":
        return PulseFamily("modulated", t_pi_ratio=t_pi_ratio(cfg, T), c_ratio=cfg.c,
                           samples_per_period=cfg.samples_per_period)
    if cfg.family == "top-hat":
        return PulseFamily("top-hat", rabi=cfg.rabi, samples_per_period=cfg.samples_per_period)
    return PulseFamily("instantaneous")


def waveform(cfg, T):
    """Sampled pulse waveform (with drive amplitude) at period ``T``."""
    if cfg.family == "modulated":
        spec = extended_pulse(cfg.l, T, t_pi_ratio(cfg, T) * T / cfg.l, c_ratio=cfg.c)
        wave = synthesize_modulation(spec, cfg.samples_per_period)
    elif cfg.family == "top-hat":
        wave = synthesize_top_hat(T, math.pi / cfg.rabi, cfg.samples_per_period, cfg.l)
    else:
        raise ConfigError("[pulse] family: instantaneous pulses have no waveform to export")
    return rabi_from_modulation(wave)


def simulation_config(cfg):
    return SimulationConfig(cfg.mode, cfg.max_step, cfg.substeps, cfg.rabi_error, cfg.rabi_noise,
                            cfg.seed, cfg.stepper)


def scan_grid(cfg, bath):
    """``omega_M`` grid; the window is given as offsets of ``l omega_M`` from the bare Larmor frequency."""
    w_l = larmor(cfg)
    if cfg.window is not None:
        lo, hi = cfg.window
    else:
        offs = [hyperfine_components(bath, n).omega_j - w_l for n in bath.nuclei] or [0.0]
        lo, hi = min(offs) - cfg.window_pad, max(offs) + cfg.window_pad
    if cfg.points == 1:
        return np.array([(w_l + 0.5 * (lo + hi)) / cfg.l])
    return (w_l + np.linspace(lo, hi, cfg.points)) / cfg.l


def header(cmd, cfg, timestamp=True):
    lines = [f"nvpulse {__version__} {cmd}"]
    if timestamp:
        lines.append(f"generated = {_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}")
    return lines + cfg.header_lines()


def _write(out_dir, name, text):
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(text)
    log.info("wrote %s", path)
    return path


# -- commands ----------------------------------------------------------------


def cmd_design(cfg, out_dir, timestamp=True, **_):
    """Waveform export plus the coefficient sweep over t_pi."""
    if cfg.family == "instantaneous":
        raise ConfigError("[pulse] family: design needs a modulated or top-hat pulse")
    T = 2.0 * math.pi * cfg.l / target_frequency(cfg)
    wave = waveform(cfg, T)
    hdr = header("design", cfg, timestamp)
    spec = wave.spec
    f_l = (f_modulated(cfg.l, spec.t_pi, T) if cfg.family == "modulated"
           else f_top_hat(cfg.l, spec.t_pi, T))
    info = [
        f"f_l = {f_l:.12g}",
        f"f_l_numeric = {fourier_numeric(wave, cfg.l):.12g}",
        f"peak_rabi_over_2pi_MHz = {np.abs(wave.rabi).max() / (2 * math.pi * 1e6):.12g}",
        f"pulse_area_minus_pi = {max(abs(a - math.pi) for a in pulse_area(wave)):.3e}",
        f"round_trip_error = {round_trip_error(wave):.3e}",
        f"rabi_sign_changes = {int(wave.rabi_sign_changes)}",
    ]
    from .pulse_shape import format_waveform

    name = cfg.name or "design"
    paths = [_write(out_dir, f"{name}_waveform.txt", format_waveform(wave, hdr + info))]
    rows = [f"# {h}" for h in hdr]
    rows += [f"# period_ns = {T * 1e9:.17g}", f"# l = {cfg.l}",
             "# t_pi_over_T_l f_modulated f_top_hat f_instantaneous fits"]
    f_inst = f_instantaneous(cfg.l)
    for r in np.linspace(0.0, cfg.sweep_max, cfg.sweep_points):
        t_pi = r * T / cfg.l
        fits = t_pi < T / 2
        fth = f_top_hat(cfg.l, t_pi, T) if fits else f_top_hat_ratio(cfg.l, t_pi, T)
        rows.append(f"{r:.8f} {f_modulated(cfg.l, t_pi, T):.12g} {fth:.12g} {f_inst:.12g} {int(fits)}")
    paths.append(_write(out_dir, f"{name}_coefficients.txt", "\n".join(rows) + "\n"))
    return paths


def cmd_scan(cfg, out_dir, timestamp=True, threads=None, **_):
    """Signal spectrum over the omega_M grid."""
    bath = load_bath(cfg)
    grid = scan_grid(cfg, bath)
    T_ref = 2.0 * math.pi / grid.mean()
    family = pulse_family(cfg, T_ref)
    result = scan(bath, cfg.l, grid, family, simulation_config(cfg), reps=cfg.reps,
                  threads=threads or 1)
    text = format_spectrum(result, header("scan", cfg, timestamp))
    return [_write(out_dir, f"{cfg.name or 'scan'}_spectrum.txt", text)]


def _coefficients(cfg, T):
    if cfg.family == "instantaneous":
        return f_instantaneous
    if cfg.family == "top-hat":
        t_pi = math.pi / cfg.rabi
        return lambda n: f_top_hat(n, t_pi, T)
    wave = waveform(cfg, T)
    return lambda n: fourier_numeric(wave, n)


def cmd_check(cfg, out_dir, timestamp=True, **_):
    """Harmonic-overlap (RWA) check over the bath."""
    bath = load_bath(cfg)
    target = cfg.target or bath.labels[0]
    if target not in bath.labels:
        raise ConfigError(f"[sequence] target: no nucleus {target!r} in the bath")
    omega_k = hyperfine_components(bath, bath.nucleus(target)).omega_j
    T = 2.0 * math.pi * cfg.l / omega_k
    n_max = cfg.n_max or 2 * cfg.l + 1
    window = None
    if cfg.window is not None:
        window = tuple((larmor(cfg) + w) / cfg.l for w in cfg.window)
    report = rwa_margins(bath, target, cfg.l, _coefficients(cfg, T), n_max, cfg.threshold,
                         window=window, t_final=cfg.reps * 4.0 * T)
    hdr = [f"# {h}" for h in header("check", cfg, timestamp)]
    text = "\n".join(hdr) + "\n" + format_rwa_report(report)
    return [_write(out_dir, f"{cfg.name or 'check'}_rwa.txt", text)]


def cmd_energy(cfg, out_dir, timestamp=True, **_):
    """Pulse energy report and energy-equivalent Rabi frequency."""
    T = 2.0 * math.pi * cfg.l / target_frequency(cfg)
    wave = waveform(cfg, T)
    report = energy_report(wave, carrier_frequency(cfg.b_field))
    text = format_energy_report(report, header("energy", cfg, timestamp))
    return [_write(out_dir, f"{cfg.name or 'energy'}_report.txt", text)]


def cmd_bath(cfg, out_dir, timestamp=True, **_):
    """Write the nuclear bath as a reproducible .bath file."""
    bath = generate_c13_bath(cfg.bath_seed, cfg.bath_count, cfg.min_distance, cfg.max_distance,
                             cfg.b_field)
    hdr = "".join(f"# {h}\n" for h in header("bath", cfg, timestamp))
    return [_write(out_dir, f"{cfg.name or 'bath'}.bath", hdr + format_bath(bath))]


COMMANDS = {"design": cmd_design, "scan": cmd_scan, "check": cmd_check, "energy": cmd_energy,
            "bath": cmd_bath}


def build_parser():
    p = argparse.ArgumentParser(prog="nvpulse", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sp = sub.add_parser(name, help=(fn.__doc__ or name).splitlines()[0])
        sp.add_argument("--config", required=True, metavar="PATH",
                        help="INI config, or any earlier output file")
        sp.add_argument("--out", default=".", metavar="DIR", help="output directory")
        sp.add_argument("--threads", type=int, default=os.cpu_count() or 1, metavar="N",
                        help="worker threads for grid scans")
        sp.add_argument("--seed", type=int, default=None, metavar="N",
                        help="override bath and noise seeds")
        sp.add_argument("--no-timestamp", action="store_true",
                        help="omit the run timestamp from headers")
        sp.add_argument("-v", "--verbose", action="store_true")
    return p


def run(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = replace(cfg, bath_seed=args.seed, seed=args.seed)
        paths = COMMANDS[args.command](cfg, Path(args.out), timestamp=not args.no_timestamp,
                                       threads=args.threads)
    except NumericalError as exc:
        print(f"nvpulse: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, NVPulseError, ValueError) as exc:
        print(f"nvpulse: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for path in paths:
        print(path)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
