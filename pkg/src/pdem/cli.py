"""Command-line front end.

Subcommands: eigen, cs, observables, figures, verify.  All numeric output
uses 17 significant digits and LF line endings so identical configurations
produce byte-identical files; every file starts with a comment line
echoing the fully resolved configuration.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .coherent import build_cs, density, energy_moments, evolve, xp_uncertainty
from .deformation import DeformationProfile, make_profile
from .operators import Grid
from .oscillator import PhysicalParams, eigenstate
from .verify import REPORT_SCHEMA, run_all  # noqa: F401  (schema re-exported for consumers)

FIG1_ALPHAS = (0.5, 1.0, 2.0)
FIG1_TIMES = (3.0, 5.0, 7.0)
FIG1_N_TRUNC = 10
FIG2_ALPHAS = (2.0, 3.0, 4.0)


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    units: str = "atomic"
    hbar: float = 1.0
    m0: float = 0.5
    omega0: float = 1.0
    lam: float = 2.0
    profile_name: str = "constant"
    profile_params: tuple = ()
    grid_xmin: float = -6.0
    grid_xmax: float = 22.0
    grid_n: int = 801
    trunc_tol: float = 1e-12
    trunc_cap: int = 400
    figure_mode: bool = False
    out_dir: str = "."
    out_format: str = "csv"
    alphas: List[complex] = field(default_factory=lambda: [1.0 + 0.0j])
    times: List[float] = field(default_factory=lambda: [0.0])
    n_list: List[int] = field(default_factory=lambda: [0])

    @property
    def params(self) -> PhysicalParams:
        if self.units == "atomic":
            return PhysicalParams.atomic(lam=self.lam)
        return PhysicalParams(hbar=self.hbar, m0=self.m0, omega0=self.omega0, lam=self.lam)

    @property
    def profile(self) -> DeformationProfile:
        return make_profile(self.profile_name, *self.profile_params)

    @property
    def grid(self) -> Grid:
        return Grid(self.grid_xmin, self.grid_xmax, self.grid_n)

    def echo(self) -> dict:
        return {
            "units": self.units,
            "params": {"hbar": self.params.hbar, "m0": self.params.m0,
                       "omega0": self.params.omega0},
            "lambda": self.lam,
            "profile": {"name": self.profile_name, "params": list(self.profile_params)},
            "grid": {"xmin": self.grid_xmin, "xmax": self.grid_xmax, "n": self.grid_n},
            "truncation": {"tol": self.trunc_tol, "cap": self.trunc_cap},
            "figure_mode": self.figure_mode,
        }


def parse_alpha(text: str) -> complex:
    """Parse 'a+bi' (or plain real) into a complex number."""
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ConfigError(f"cannot parse alpha {text!r}") from exc


def load_config(path: Optional[str], args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if path is not None:
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if "units" in raw:
            cfg.units = raw["units"]
        p = raw.get("params", {})
        cfg.hbar = p.get("hbar", cfg.hbar)
        cfg.m0 = p.get("m0", cfg.m0)
        cfg.omega0 = p.get("omega0", cfg.omega0)
        cfg.lam = raw.get("lambda", cfg.lam)
        prof = raw.get("profile", {})
        cfg.profile_name = prof.get("name", cfg.profile_name)
        cfg.profile_params = tuple(prof.get("params", []))
        g = raw.get("grid", {})
        cfg.grid_xmin = g.get("xmin", cfg.grid_xmin)
        cfg.grid_xmax = g.get("xmax", cfg.grid_xmax)
        cfg.grid_n = g.get("n", cfg.grid_n)
        tr = raw.get("truncation", {})
        cfg.trunc_tol = tr.get("tol", cfg.trunc_tol)
        cfg.trunc_cap = tr.get("cap", cfg.trunc_cap)
        cfg.figure_mode = bool(raw.get("figure_mode", cfg.figure_mode))

    if getattr(args, "lam", None) is not None:
        cfg.lam = args.lam
    if getattr(args, "tol", None) is not None:
        cfg.trunc_tol = args.tol
    if getattr(args, "profile", None) is not None:
        name, _, rest = args.profile.partition(":")
        cfg.profile_name = name
        cfg.profile_params = tuple(float(v) for v in rest.split(",") if v)
    if getattr(args, "out", None) is not None:
        cfg.out_dir = args.out
    if getattr(args, "fmt", None) is not None:
        cfg.out_format = args.fmt
    if getattr(args, "alpha", None) is not None:
        cfg.alphas = [parse_alpha(v) for v in args.alpha.split(",")]
    if getattr(args, "t", None) is not None:
        cfg.times = [float(v) for v in args.t.split(",")]
    if getattr(args, "n", None) is not None:
        cfg.n_list = [int(v) for v in args.n.split(",")]

    try:
        cfg.params, cfg.profile, cfg.grid  # validate eagerly
    except (ValueError,) as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.out_format not in ("csv", "json"):
        raise ConfigError(f"unknown output format {cfg.out_format!r}")
    return cfg


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_table(path: str, columns: List[str], rows, cfg: RunConfig, fmt: str = "csv"):
    header = f"# config = {json.dumps(cfg.echo(), sort_keys=True)}\n"
    if fmt == "csv":
        lines = [header, ",".join(columns) + "\n"]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row) + "\n")
        _atomic_write(path, "".join(lines))
    else:
        payload = {"config": cfg.echo(),
                   "rows": [dict(zip(columns, [float(v) for v in row])) for row in rows]}
        _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _support_warning(dens: np.ndarray):
    peak = float(np.max(dens))
    edge = max(float(dens[0]), float(dens[-1]))
    if peak > 0 and edge > 1e-8 * peak:
        print(f"warning: grid may not cover the density support "
              f"(boundary/peak = {edge / peak:.2e})", file=sys.stderr)


def cmd_eigen(cfg: RunConfig) -> int:
    x = cfg.grid.points
    ext = cfg.out_format
    for n in cfg.n_list:
        state = eigenstate(n, cfg.params, cfg.profile)
        psi = state(x)
        dens = psi * psi
        _support_warning(dens)
        rows = [(xv, pv, dv) for xv, pv, dv in zip(x, psi, dens)]
        write_table(os.path.join(cfg.out_dir, f"eigen_n{n}.{ext}"),
                    ["x", "psi", "density"], rows, cfg, cfg.out_format)
    return 0


def cmd_cs(cfg: RunConfig) -> int:
    x = cfg.grid.points
    force = FIG1_N_TRUNC if cfg.figure_mode else None
    rows = []
    for alpha in cfg.alphas:
        cs = build_cs(alpha, cfg.params, cfg.profile, tol=cfg.trunc_tol,
                      cap=cfg.trunc_cap, force_n_trunc=force)
        for t in cfg.times:
            dens = density(evolve(cs, t), x)
            _support_warning(dens)
            for xv, dv in zip(x, dens):
                rows.append((alpha.real, alpha.imag, t, xv, dv))
    write_table(os.path.join(cfg.out_dir, f"cs.{cfg.out_format}"),
                ["alpha_re", "alpha_im", "t", "x", "density"], rows, cfg, cfg.out_format)
    return 0


def cmd_observables(cfg: RunConfig) -> int:
    rows = []
    for alpha in cfg.alphas:
        cs = build_cs(alpha, cfg.params, cfg.profile, tol=cfg.trunc_tol, cap=cfg.trunc_cap)
        m = energy_moments(cs)
        u = xp_uncertainty(cs)
        rows.append((alpha.real, alpha.imag, m.mean, m.mean_sq, m.variance,
                     u.dX, u.dP, u.product, u.bound, u.sum_check))
    write_table(os.path.join(cfg.out_dir, f"observables.{cfg.out_format}"),
                ["alpha_re", "alpha_im", "meanH", "meanH2", "varH",
                 "dX", "dP", "product", "bound", "sum_identity_residual"],
                rows, cfg, cfg.out_format)
    return 0


def cmd_figures(cfg: RunConfig) -> int:
    x = cfg.grid.points

    rows1 = []
    for alpha in FIG1_ALPHAS:
        cs = build_cs(alpha, cfg.params, cfg.profile, force_n_trunc=FIG1_N_TRUNC)
        for t in FIG1_TIMES:
            dens = density(evolve(cs, t), x)
            _support_warning(dens)
            for xv, dv in zip(x, dens):
                rows1.append((alpha, 0.0, t, xv, dv))
    write_table(os.path.join(cfg.out_dir, "fig1.csv"),
                ["alpha_re", "alpha_im", "t", "x", "density"], rows1, cfg, "csv")

    rows2 = []
    times = np.linspace(0.0, 4.0 * math.pi / cfg.params.omega0, 41)
    x2 = np.linspace(cfg.grid_xmin, cfg.grid_xmax, 281)
    for alpha in FIG2_ALPHAS:
        cs = build_cs(alpha, cfg.params, cfg.profile, tol=cfg.trunc_tol, cap=cfg.trunc_cap)
        for t in times:
            dens = density(evolve(cs, t), x2)
            for xv, dv in zip(x2, dens):
                rows2.append((alpha, 0.0, t, xv, dv))
    write_table(os.path.join(cfg.out_dir, "fig2.csv"),
                ["alpha_re", "alpha_im", "t", "x", "density"], rows2, cfg, "csv")

    print("wrote fig1.csv and fig2.csv; render with scripts/plot_figures.py <out_dir>")
    return 0


def cmd_verify(cfg: RunConfig, fault: Optional[str] = None) -> int:
    report = run_all(fault=fault)
    text = json.dumps(report, indent=2, sort_keys=True)
    _atomic_write(os.path.join(cfg.out_dir, "verify_report.json"), text + "\n")
    for c in report["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"[{status}] {c['check_id']}: metric={c['metric']:.3e} "
              f"threshold={c['threshold']:.1e}")
    print(f"overall: {'PASS' if report['pass'] else 'FAIL'}")
    return 0 if report["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pdem",
        description="Position-dependent-mass su(1,1) coherent states: "
                    "eigenfunctions, observables, figure data and verification.",
    )
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("eigen", "dump eigenfunctions psi_n as CSV/JSON"),
        ("cs", "dump coherent-state densities over x for given alpha, t"),
        ("observables", "energy moments and uncertainty table"),
        ("figures", "reproduce the probability-density figure data"),
        ("verify", "run the full verification suite"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", default=None, help="JSON config file")
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--format", dest="fmt", choices=["csv", "json"], default=None)
        sp.add_argument("--alpha", default=None, help="comma list, e.g. 0.5,1+0.5i")
        sp.add_argument("--t", default=None, help="comma list of times")
        sp.add_argument("--n", default=None, help="comma list of eigenstate indices")
        sp.add_argument("--profile", default=None, help="NAME[:param,...], e.g. quadratic:0.1")
        sp.add_argument("--lambda", dest="lam", type=float, default=None)
        sp.add_argument("--tol", type=float, default=None)
        if name == "verify":
            sp.add_argument("--inject-fault", dest="fault", default=None,
                            choices=["spectrum"], help=argparse.SUPPRESS)  # test hook
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args)
        if args.command == "eigen":
            return cmd_eigen(cfg)
        if args.command == "cs":
            return cmd_cs(cfg)
        if args.command == "observables":
            return cmd_observables(cfg)
        if args.command == "figures":
            return cmd_figures(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, fault=getattr(args, "fault", None))
        raise ConfigError(f"unknown command {args.command}")
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
