"""Command-line driver: ``relaxwave <command> [--config FILE] [flags]``.

Every command resolves a :class:`RunConfig` (file values, then flags),
validates it completely before touching the output directory, writes its
CSVs with fixed formatting and finishes with ``manifest.json``.  Passing that
manifest back through ``--config`` reruns the same experiment.
"""

from __future__ import annotations

import argparse
import json
import math
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np
import scipy
from scipy.integrate import trapezoid

from . import __version__
from .asymptotics import corrector
from .energy import slope_estimate, verify_thm31, verify_thm33
from .errors import CompatibilityError, ConfigError, RelaxWaveError, WrongSign
from .io import MODES, RunConfig, build_config, load_config, snapshot_name, write_csv
from .model import Grid, InitialData, ProblemSpec, check_compatibility
from .reference import SchemeConfig, solve_system
from .spectral import evaluate_u, mode_rows, solve_spectral

MODE_COLUMNS = ["n", "branch", "c_mantissa", "c_exp", "d_mantissa", "d_exp",
                "alpha_minus", "alpha_plus", "beta"]
SWEEP_COLUMNS = ["epsilon", "t", "lhs", "rhs", "ratio", "slope_est"]

DEMO_PRESET = dict(a=2.0, b=1.0, epsilon=0.01, f="sin(pi*x)", gprime="-pi*sin(pi*x)",
                    output_times=(0.01, 0.05, 0.1, 0.2, 0.5), t_max=0.5)

# snapshots per unit eps for the energy functionals (time derivatives need eps-resolution)
SNAPSHOTS_PER_EPS = 20


@dataclass(frozen=True)
class Problem:
    cfg: RunConfig
    spec: ProblemSpec
    data: InitialData
    scheme: SchemeConfig


def prepare(cfg: RunConfig) -> Problem:
    """Validate every key against the solver preconditions."""
    if cfg.mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {cfg.mode!r}")
    spec = ProblemSpec(cfg.a, cfg.b, cfg.epsilon)
    data = InitialData.from_strings(cfg.f, cfg.gprime, cfg.g0)
    report = check_compatibility(data)
    if not report.ok:
        raise CompatibilityError("; ".join(report.failures()))
    if cfg.n_max < 1:
        raise ConfigError(f"n_max must be >= 1, got {cfg.n_max}")
    if cfg.m_grid < 2:
        raise ConfigError(f"m_grid must be >= 2, got {cfg.m_grid}")
    if cfg.t_max < 0 or any(t < 0 for t in cfg.output_times):
        raise ConfigError("times must be >= 0")
    if any(e <= 0 for e in cfg.eps_list):
        raise ConfigError("eps_list entries must be positive")
    for eps in cfg.eps_list:
        spec.with_epsilon(eps)
    try:
        scheme = SchemeConfig(Grid(cfg.m_grid), cfg.cfl, max(cfg.times()), cfg.splitting)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return Problem(cfg, spec, data, scheme)


def _snapshot_rows(x, u, v=None):
    if v is None:
        return ((xi, ui, None) for xi, ui in zip(x, u))
    return zip(x, u, v)


def run_solve(p: Problem, out: Path) -> list[Path]:
    sol = solve_spectral(p.spec, p.data, p.cfg.n_max)
    files = [write_csv(out / "modes.csv", MODE_COLUMNS, mode_rows(sol.mode_set))]
    x = p.scheme.grid.points
    for t in p.cfg.times():
        u = evaluate_u(sol, x, t)
        files.append(write_csv(out / snapshot_name("u", t), ["x", "u", "v"], _snapshot_rows(x, u)))
    return files


def run_reference(p: Problem, out: Path) -> list[Path]:
    traj = solve_system(p.spec, p.data, p.scheme, p.cfg.times())
    files = []
    for t in p.cfg.times():
        s = traj.at(t)
        files.append(write_csv(out / snapshot_name("ref", t), ["x", "u", "v"],
                               _snapshot_rows(s.x, s.u, s.v)))
    return files


def compare_errors(p: Problem):
    """``[(t, x, u_spectral, u_fd)]`` at each output time."""
    sol = solve_spectral(p.spec, p.data, p.cfg.n_max)
    traj = solve_system(p.spec, p.data, p.scheme, p.cfg.times())
    out = []
    for t in p.cfg.times():
        s = traj.at(t)
        out.append((t, s.x, evaluate_u(sol, s.x, t), s.u))
    return out


def run_compare(p: Problem, out: Path) -> list[Path]:
    files, summary = [], []
    for t, x, us, uf in compare_errors(p):
        diff = us - uf
        l2 = math.sqrt(float(trapezoid(diff**2, x)))
        summary.append((t, l2))
        files.append(write_csv(out / snapshot_name("compare", t),
                               ["x", "u_spectral", "u_fd", "diff"], zip(x, us, uf, diff)))
        print(f"t={t:.6f} l2_diff={l2:.6e}")
    files.append(write_csv(out / "compare_summary.csv", ["t", "l2_diff"], summary))
    return files


def run_layer(p: Problem, out: Path) -> list[Path]:
    if p.spec.b == 0:
        raise WrongSign("the layer expansion needs b != 0")
    traj = solve_system(p.spec, p.data, p.scheme, p.cfg.times())
    files = []
    cols = ["x", "u_eps", "u_e", "U0", "eps_U1", "w"]
    for t in p.cfg.times():
        field = corrector(p.spec, p.data, traj.at(t), t)
        files.append(write_csv(out / snapshot_name("layer", t), cols, field.rows()))
    return files


def energy_report(p: Problem):
    """Energy report at dense times on ``[0, t_max]`` from the system solver."""
    t_end = p.cfg.t_max
    n_out = max(100, math.ceil(SNAPSHOTS_PER_EPS * t_end / p.spec.epsilon))
    times = np.linspace(0.0, t_end, n_out + 1)
    traj = solve_system(p.spec, p.data, replace(p.scheme, t_max=t_end), times)
    if p.spec.b == 0:
        return verify_thm31(p.spec.a, p.spec.epsilon, p.data, traj), p.spec.epsilon
    return verify_thm33(p.spec, p.data, traj), 1.0


def sweep_point(cfg_dict: dict, eps: float) -> dict:
    """One ε of a sweep; takes plain data so it can run in a worker process."""
    cfg = replace(RunConfig(**cfg_dict), epsilon=eps, eps_list=())
    p = prepare(cfg)
    report, scale = energy_report(p)
    lhs, rhs_data, ratio = report.at(cfg.t_max)
    row = {"epsilon": eps, "t": cfg.t_max, "lhs": lhs, "rhs": scale * rhs_data, "ratio": ratio}
    if p.spec.b != 0:
        traj = solve_system(p.spec, p.data, p.scheme, [cfg.t_max])
        row["deviation"] = corrector(p.spec, p.data, traj.at(cfg.t_max), cfg.t_max).deviation_l2sq
    return row


def run_sweep_rows(cfg: RunConfig, jobs: int = 1) -> list[dict]:
    if not cfg.eps_list:
        raise ConfigError("sweep needs eps_list")
    payload = cfg.to_dict()
    payload["output_times"] = tuple(payload["output_times"])
    payload["eps_list"] = ()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(sweep_point, [payload] * len(cfg.eps_list), cfg.eps_list))
    else:
        rows = [sweep_point(payload, e) for e in cfg.eps_list]
    for i, row in enumerate(rows):
        eps = [r["epsilon"] for r in rows[: i + 1]]
        row["slope_est"] = slope_estimate(eps, [r["lhs"] for r in rows[: i + 1]]) if i else None
    return rows


def _limit_rows(rows):
    out = []
    for i, row in enumerate(rows):
        eps = [r["epsilon"] for r in rows[: i + 1]]
        dev = [r["deviation"] for r in rows[: i + 1]]
        out.append({"epsilon": row["epsilon"], "t": row["t"], "deviation": row["deviation"],
                    "slope_est": slope_estimate(eps, dev) if i else None})
    return out


def run_energy(p: Problem, out: Path, jobs: int = 1) -> list[Path]:
    report, _ = energy_report(p)
    files = [write_csv(out / "energy.csv", ["t", "lhs", "rhs_data", "c_empirical"], report.rows())]
    if p.cfg.eps_list:
        files.append(write_csv(out / "sweep.csv", SWEEP_COLUMNS, run_sweep_rows(p.cfg, jobs)))
    return files


def run_sweep(p: Problem, out: Path, jobs: int = 1) -> list[Path]:
    rows = run_sweep_rows(p.cfg, jobs)
    files = [write_csv(out / "sweep.csv", SWEEP_COLUMNS, rows)]
    if p.spec.b != 0:
        files.append(write_csv(out / "limit.csv", ["epsilon", "t", "deviation", "slope_est"],
                               _limit_rows(rows)))
    for row in rows:
        print(f"epsilon={row['epsilon']:.6g} lhs={row['lhs']:.6e} ratio={row['ratio']:.6e}")
    return files


PLOT_TEMPLATE = '''"""Plot the snapshot CSVs of this run (requires matplotlib)."""
import csv
import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = pathlib.Path(__file__).resolve().parent
FILES = {files!r}
Y_COLUMN = {column!r}

for name in FILES:
    with open(HERE / name, newline="") as fh:
        rows = list(csv.DictReader(fh))
    x = [float(r["x"]) for r in rows]
    y = [float(r[Y_COLUMN]) for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(x, y)
    ax.set_xlabel("x")
    ax.set_ylabel(Y_COLUMN)
    ax.set_title(name[:-4])
    fig.tight_layout()
    fig.savefig(HERE / (name[:-4] + ".png"), dpi=120)
    plt.close(fig)
'''

PLOT_COLUMN = {"u": "u", "ref": "u", "compare": "diff", "layer": "w"}


def write_plot_script(out: Path, files: list[Path]) -> Optional[Path]:
    snaps = [f.name for f in files if "_t" in f.name and f.name.split("_t")[0] in PLOT_COLUMN]
    if not snaps:
        return None
    column = PLOT_COLUMN[snaps[0].split("_t")[0]]
    path = out / "plot.py"
    path.write_text(PLOT_TEMPLATE.format(files=snaps, column=column), encoding="utf-8")
    return path


def write_manifest(out: Path, command: str, cfg: RunConfig, files, wall: float) -> Path:
    doc = {
        "command": command,
        "config": cfg.to_dict(),
        "versions": {"relaxwave": __version__, "python": platform.python_version(),
                     "numpy": np.__version__, "scipy": scipy.__version__},
        "wall_time_s": wall,
        "files": sorted(f.name for f in files),
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return path


RUNNERS = {"solve": run_solve, "reference": run_reference, "compare": run_compare,
           "layer": run_layer, "energy": run_energy, "sweep": run_sweep}


def run(cfg: RunConfig, command: Optional[str] = None, jobs: int = 1) -> list[Path]:
    """Validate, run and write outputs; returns the written paths."""
    start = time.perf_counter()
    p = prepare(cfg)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    runner = RUNNERS[cfg.mode]
    files = runner(p, out, jobs) if cfg.mode in ("energy", "sweep") else runner(p, out)
    plot = write_plot_script(out, files)
    if plot is not None:
        files.append(plot)
    write_manifest(out, command or cfg.mode, cfg, files, time.perf_counter() - start)
    return files


FLAGS = [
    ("--a", "a", float), ("--b", "b", float), ("--epsilon", "epsilon", float),
    ("--f", "f", str), ("--gprime", "gprime", str), ("--g0", "g0", float),
    ("--n-max", "n_max", int), ("--m-grid", "m_grid", int), ("--cfl", "cfl", float),
    ("--t-max", "t_max", float), ("--output-times", "output_times", str),
    ("--splitting", "splitting", str), ("--eps-list", "eps_list", str),
    ("--out", "out_dir", str),
]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relaxwave",
                                     description="Relaxation-system solvers and estimate checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*MODES, "repro-paper"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="key = value file or a manifest.json")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
        for flag, dest, kind in FLAGS:
            sp.add_argument(flag, dest=dest, type=kind, default=None)
    return parser


def resolve(args: argparse.Namespace) -> RunConfig:
    file_values = load_config(args.config) if args.config else {}
    overrides = {dest: getattr(args, dest) for _, dest, _ in FLAGS
                 if getattr(args, dest) is not None}
    if args.command == "repro-paper":
        base = dict(DEMO_PRESET)
        base.update(file_values)
        file_values = base
        mode = "solve"
    else:
        mode = args.command
    overrides["mode"] = mode
    return build_config(file_values, overrides)


def _join_values(argv: list[str]) -> list[str]:
    """Attach values that start with ``-`` (e.g. ``--gprime -pi*x``) to their flag."""
    value_flags = {flag for flag, _, _ in FLAGS} | {"--config"}
    out, i = [], 0
    while i < len(argv):
        arg = argv[i]
        if arg in value_flags and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        if args.jobs < 1:
            raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
        cfg = resolve(args)
        run(cfg, args.command, args.jobs)
    except RelaxWaveError as exc:
        message = " ".join(str(exc).split())
        print(f"error {exc.code} {exc.module} {message}", file=sys.stderr)
        return exc.exit_status
    return 0


if __name__ == "__main__":
    sys.exit(main())
