"""Configuration-driven experiment runner.

Subcommands: `simulate` (trajectory + thermodynamic ledger CSVs), `nm-scan`
(ohmicity scan of the non-Markovianity measures), and `reproduce` (built-in
parameter sets for the three reference figures, with rendered PNGs and
regeneratable plot scripts).  Exit codes: 0 success, 2 config/usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import config as cfg
from . import dynamics, nonmarkov, plotting
from .errors import ConfigError, NumericsError
from .opcore import bloch_to_density
from .thermo import Formulation, ledger

try:
    from importlib.metadata import version as _pkg_version
    __version__ = _pkg_version("qthermo")
except Exception:  # pragma: no cover - not installed
    __version__ = "0.0.0+local"

THERMO_COLUMNS = ["t", "U", "S", "E", "Q_std", "Q_ent", "Q_ergo", "Q_op",
                  "W_std", "W_ent", "W_ergo", "T_ergo", "T_conv", "T_ent",
                  "Sigma", "residual_max"]
TRAJECTORY_COLUMNS = ["t", "x", "y", "z", "hx", "hy", "hz"]
NM_SCAN_COLUMNS = ["s", "N_Q", "N_ent", "N_std", "n_intervals", "a1", "b1",
                   "truncated_flag", "argmax_r0", "argmax_theta0"]


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def write_csv(path: str, header: list[str], rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _trajectory_rows(traj):
    bloch = traj.bloch()
    for i, t in enumerate(traj.times):
        yield (t, *bloch[i], *traj.fields[i])


def _thermo_rows(samples):
    for s in samples:
        yield (s.t, s.U, s.S, s.E, s.Q_std, s.Q_ent, s.Q_ergo, s.Q_op,
               s.W_std, s.W_ent, s.W_ergo, s.T_ergo, s.T_conv, s.T_ent,
               s.Sigma, s.residual_first_law)


def _run_one(spec, r0, t_max, dt):
    traj = dynamics.integrate(spec, None, bloch_to_density(r0), t_max, dt)
    samples = ledger(traj, env=dynamics.environment(spec))
    return traj, samples


def cmd_simulate(args) -> int:
    exp = cfg.load_experiment(args.config)
    t_max = args.t_max if args.t_max is not None else exp.t_max
    dt = args.dt if args.dt is not None else exp.dt
    if dt <= 0.0 or t_max < dt:
        raise ConfigError(f"need dt > 0 and t_max >= dt, got dt={dt}, "
                          f"t_max={t_max}")
    out_dir = args.out or exp.outputs
    if not out_dir:
        raise ConfigError("no output directory (use --out or [run] outputs)")
    traj, samples = _run_one(exp.channel, exp.initial_state, t_max, dt)
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "trajectory.csv"), TRAJECTORY_COLUMNS,
              _trajectory_rows(traj))
    write_csv(os.path.join(out_dir, "thermo.csv"), THERMO_COLUMNS,
              _thermo_rows(samples))
    if exp.emit_plot_script:
        plotting.write_plot_script(
            os.path.join(out_dir, "thermo.gp"), "thermo.csv",
            [(7, "Q_ergo"), (8, "Q_op"), (6, "Q_ent"), (5, "Q_std")],
            "t", "accumulated heat", "heat ledgers")
        plotting.render_thermo_overview(out_dir)
    return 0


def cmd_nm_scan(args) -> int:
    scan = cfg.load_scan(args.config)
    out_dir = args.out or scan.outputs
    if not out_dir:
        raise ConfigError("no output directory (use --out)")
    s_step = args.s_step if args.s_step is not None else scan.s_step
    if s_step <= 0.0:
        raise ConfigError("s_step must be positive")
    rows = _scan_rows(scan.s_min, scan.s_max, s_step, scan.tau_max,
                      scan.channel.kappa)
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "nm_scan.csv"), NM_SCAN_COLUMNS, rows)
    return 0


def _scan_rows(s_min, s_max, s_step, tau_max, kappa):
    count = int(math.floor((s_max - s_min) / s_step + 1e-9)) + 1
    rows = []
    for i in range(count):
        s = s_min + i * s_step
        rep = nonmarkov.nm_measure(Formulation.ERGOTROPY_BASED, s,
                                   tau_max=tau_max, kappa=kappa)
        if rep.intervals:
            a1, b1 = rep.intervals[0].a, rep.intervals[0].b
            truncated = any(iv.clipped for iv in rep.intervals)
        else:
            a1 = b1 = math.nan
            truncated = False
        rows.append((s, rep.N_Q, rep.N_ent, rep.N_std, len(rep.intervals),
                     a1, b1, 1.0 if truncated else 0.0,
                     rep.argmax_state[0], rep.argmax_state[1]))
    return rows


def _reproduce_gad(out_dir, t_max, dt):
    spec = dynamics.gad_spec(omega0=1.0, gamma0=1.0, Te=10.0)
    t_max = t_max if t_max is not None else 1.0
    dt = dt if dt is not None else 1e-3
    ledgers = {}
    for tag, z0 in (("minus", -0.80), ("plus", +0.80)):
        traj, samples = _run_one(spec, np.array([0.45, 0.0, z0]), t_max, dt)
        write_csv(os.path.join(out_dir, f"gad_{tag}_trajectory.csv"),
                  TRAJECTORY_COLUMNS, _trajectory_rows(traj))
        write_csv(os.path.join(out_dir, f"gad_{tag}_thermo.csv"),
                  THERMO_COLUMNS, _thermo_rows(samples))
        ledgers[tag] = samples
    header = ["t", "T_ergo_minus", "T_conv_minus", "T_ent_minus",
              "T_ergo_plus", "T_conv_plus", "T_ent_plus", "Te_ref"]
    rows = [(a.t, a.T_ergo, a.T_conv, a.T_ent, b.T_ergo, b.T_conv, b.T_ent,
             spec.Te / spec.omega0)
            for a, b in zip(ledgers["minus"], ledgers["plus"])]
    write_csv(os.path.join(out_dir, "fig_gad.csv"), header, rows)
    plotting.write_plot_script(
        os.path.join(out_dir, "fig_gad.gp"), "fig_gad.csv",
        [(2, "T ergo (-)"), (3, "T conv (-)"), (4, "T ent (-)"),
         (8, "Te")], "omega0 t", "temperature", "GAD temperatures")
    plotting.render_fig_gad(out_dir)


def _reproduce_pdm(out_dir, t_max, dt):
    spec = dynamics.pd_markov_spec(omega0=1.0, gamma=1.0, omega=1.0)
    t_max = t_max if t_max is not None else 10.0
    dt = dt if dt is not None else 1e-3
    traj, samples = _run_one(spec, np.array([0.5, 0.7, 0.0]), t_max, dt)
    write_csv(os.path.join(out_dir, "pdm_trajectory.csv"),
              TRAJECTORY_COLUMNS, _trajectory_rows(traj))
    write_csv(os.path.join(out_dir, "pdm_thermo.csv"), THERMO_COLUMNS,
              _thermo_rows(samples))
    s0 = samples[0].S
    header = ["t", "Q_ergo", "Q_op", "Q_ent", "Q_std", "dS_vn", "dS_clausius"]
    rows = [(s.t, s.Q_ergo, s.Q_op, s.Q_ent, s.Q_std, s.S - s0, s.dS_clausius)
            for s in samples]
    write_csv(os.path.join(out_dir, "fig_pdm.csv"), header, rows)
    plotting.write_plot_script(
        os.path.join(out_dir, "fig_pdm.gp"), "fig_pdm.csv",
        [(2, "Q ergo"), (3, "Q op"), (4, "Q ent"), (5, "Q std"),
         (6, "dS"), (7, "int dQ/T")],
        "omega t", "heat / entropy", "PD heats and entropy")
    plotting.render_fig_pdm(out_dir)


def _reproduce_pdnm(out_dir, t_max, dt, s_step):
    kappa = 2.0
    rows = _scan_rows(2.0, 8.0, s_step if s_step is not None else 0.1,
                      50.0, kappa)
    write_csv(os.path.join(out_dir, "nm_scan.csv"), NM_SCAN_COLUMNS, rows)
    tau_max = t_max if t_max is not None else 20.0
    tau_dt = dt if dt is not None else 1e-2
    r0 = np.array([0.8, 0.0, 0.0])
    series = {}
    for key, s in (("T_s2", 2.0), ("T_s32", 3.2)):
        spec = dynamics.pd_nonmarkov_spec(omega0=1.0, s=s, kappa=kappa)
        traj = dynamics.pd_nonmarkov_trajectory(spec, r0, tau_max, tau_dt)
        series[key] = [smp.T_ergo for smp in ledger(traj)]
        times = traj.times
    write_csv(os.path.join(out_dir, "pdnm_inset.csv"),
              ["tau", "T_s2", "T_s32"],
              zip(times, series["T_s2"], series["T_s32"]))
    plotting.write_plot_script(
        os.path.join(out_dir, "fig_pdnm.gp"), "nm_scan.csv",
        [(2, "N ergo"), (3, "N ent"), (4, "N std")],
        "s", "non-Markovianity", "heat-based measures")
    plotting.render_fig_pdnm(out_dir)


def cmd_reproduce(args) -> int:
    out_dir = args.out
    os.makedirs(out_dir, exist_ok=True)
    if args.figure_id == "fig-gad":
        _reproduce_gad(out_dir, args.t_max, args.dt)
    elif args.figure_id == "fig-pdm":
        _reproduce_pdm(out_dir, args.t_max, args.dt)
    elif args.figure_id == "fig-pdnm":
        _reproduce_pdnm(out_dir, args.t_max, args.dt, args.s_step)
    else:  # pragma: no cover - argparse choices guard this
        raise ConfigError(f"unknown figure id {args.figure_id!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qthermo",
        description="ergotropy-based quantum thermodynamics of open qubits")
    parser.add_argument("--version", action="version",
                        version=f"qthermo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one channel simulation")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out", default=None)
    p_sim.add_argument("--dt", type=float, default=None)
    p_sim.add_argument("--t-max", dest="t_max", type=float, default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_scan = sub.add_parser("nm-scan", help="scan the ohmicity parameter")
    p_scan.add_argument("--config", required=True)
    p_scan.add_argument("--out", default=None)
    p_scan.add_argument("--s-step", dest="s_step", type=float, default=None)
    p_scan.set_defaults(func=cmd_nm_scan)

    p_rep = sub.add_parser("reproduce", help="rebuild a reference figure")
    p_rep.add_argument("figure_id", choices=["fig-gad", "fig-pdm", "fig-pdnm"])
    p_rep.add_argument("--out", required=True)
    p_rep.add_argument("--dt", type=float, default=None)
    p_rep.add_argument("--t-max", dest="t_max", type=float, default=None)
    p_rep.add_argument("--s-step", dest="s_step", type=float, default=None)
    p_rep.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"error: numerics: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
