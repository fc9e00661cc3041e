"""Command-line entry point: ``pwave {roots,kernel,verify-bounds,solve,evolve}``."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .bounds import construct_bounds, find_max_delay
from .charpoly import (
    DelayedCharParams, PolyParams, eval_delta, solve_delayed_positive_roots,
    solve_kernel_roots, spectral_gap_mu0, vieta_residuals,
)
from .errors import EXIT_CODES, NoPositivePair, ValidationFailed, WaveError
from .funcspace import Grid, read_profile, write_csv, write_json
from .greenkernel import build_kernel, eval_G_derivs, green_identity_check, kernel_total_integral, matching_residuals
from .iterate import IterationConfig
from .pdecheck import SchemeConfig, comparison_probe, run_validation
from .pipeline import solve_wave
from .svgplot import thin, write_chart
from .waveop import Reaction, residual_curve

OMEGAS = (0.0, 0.5, -0.5, 1.0, -1.0, 10.0, -10.0)


def _emit(out: Path, name: str, obj) -> str:
    text = cfgmod.dumps(obj)
    (out / name).write_text(text)
    return text


def _write_rows(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(header)
        for row in rows:
            wr.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def _grid(cfg) -> Grid:
    return Grid(cfg["grid"]["L"], cfg["grid"]["h"])


def _iter_cfg(cfg) -> IterationConfig:
    it = cfg["iteration"]
    return IterationConfig(it["tol_fixed"], it["tol_residual"], int(it["max_iter"]), cfgmod.resolve_mu(cfg.data))


def cmd_roots(cfg, out: Path, args) -> int:
    params = PolyParams(cfg["c"], cfg["D"], cfg["beta"])
    roots = solve_kernel_roots(params)
    report = {
        "params": {"c": cfg["c"], "D": cfg["D"], "beta": cfg["beta"], "r": cfg.r},
        "kernel_roots": list(roots.as_tuple()),
        "vieta_residuals": vieta_residuals(params, roots),
        "mu0": spectral_gap_mu0(roots),
        "re_delta_imag_axis": [
            {"omega": w, "re": float(np.real(eval_delta(params, 1j * w))), "expected": -cfg["D"] * w * w - cfg["beta"]}
            for w in OMEGAS
        ],
    }
    code = 0
    try:
        pair = solve_delayed_positive_roots(DelayedCharParams(cfg["c"], cfg["D"], cfg.r))
        report["positive_pair"] = {"status": "ok", "eta1": pair.eta1, "eta2": pair.eta2}
    except NoPositivePair as exc:
        report["positive_pair"] = {"status": "NoPositivePair", "message": str(exc)}
        code = NoPositivePair.exit_code
    sys.stdout.write(_emit(out, "roots.json", report))
    return code


def cmd_kernel(cfg, out: Path, args) -> int:
    k = build_kernel(PolyParams(cfg["c"], cfg["D"], cfg["beta"]))
    xi = np.round(np.arange(-400, 401) * 0.05, 10)
    G, G1, G2 = eval_G_derivs(k, xi, "right")
    _write_rows(out / "kernel.csv", ["xi", "G", "dG", "d2G"], zip(xi, G, G1, G2))
    rep = matching_residuals(k)
    rep.update({
        "roots": list(k.roots.as_tuple()), "A1": k.A1, "A2": k.A2, "A3": k.A3,
        "total_integral": kernel_total_integral(k), "minus_inv_beta": -1.0 / k.beta,
        "gamma": k.gamma, "green_identity_residual": green_identity_check(k, 2.0, cfg["grid"]["h"]),
    })
    sys.stdout.write(_emit(out, "kernel.json", rep))
    return 0


def cmd_verify(cfg, out: Path, args) -> int:
    grid = _grid(cfg)
    bundle = construct_bounds(cfg["c"], cfg["D"], cfg.r, grid)
    report = bundle.to_dict()
    scan = find_max_delay(cfg["c"], cfg["D"], grid)
    report["r_star"] = scan.r_star
    report["scan"] = scan.to_dict()["records"]
    report["scan_nonmonotone"] = scan.nonmonotone
    sys.stdout.write(_emit(out, "bounds.json", report))
    return 0 if bundle.passed else EXIT_CODES["BoundsFailed"]


def cmd_solve(cfg, out: Path, args) -> int:
    grid = _grid(cfg)
    sol = solve_wave(cfg["c"], cfg["D"], cfg["beta"], cfg.r, grid, _iter_cfg(cfg),
                     skip_bounds=args.skip_bounds, ascending=args.ascending)
    p = sol.profile
    write_csv(p, out / "profile.csv")
    write_json(p, out / "profile.json", cfgmod.resolve_mu(cfg.data))
    rows = sol.trace.rows()
    cols = ["n", "sup_gap", "weighted_gap", "margin_lower", "margin_upper", "residual"]
    _write_rows(out / "trace.csv", cols, ([r[c] for c in cols] for r in rows))
    last = rows[-1]
    summary = {
        "parameters": cfg.to_dict(),
        "r": cfg.r,
        "mu": cfgmod.resolve_mu(cfg.data),
        "iterations": sol.trace.iterations,
        "final_sup_gap": last["sup_gap"],
        "final_weighted_gap": last["weighted_gap"],
        "residual": sol.residual.to_dict(),
        "classification": sol.trace.classification,
        "plateau": sol.trace.plateau,
        "endpoint_gaps": {"left": float(p.values[0]), "right": float(1.0 - p.values[-1])},
        "bounds": sol.bounds.to_dict(),
        "bounds_waived": sol.waived,
        "kernel": sol.kernel_report(),
    }
    sys.stdout.write(_emit(out, "summary.json", summary))
    res = np.abs(residual_curve(PolyParams(cfg["c"], cfg["D"], cfg["beta"]), Reaction(cfg.r), p))
    x = p.x
    write_chart(out / "plot.svg", [
        ("profile between the bounds", "value", [
            (*thin(x, p.values), "profile"),
            (*thin(x, sol.upper.values), "upper"),
            (*thin(x, sol.lower.values), "lower"),
        ]),
        ("profile equation residual", "log10 |res|", [
            (*thin(x, np.log10(np.maximum(res, 1e-300))), "residual"),
        ]),
    ])
    return 0


def cmd_evolve(cfg, out: Path, args) -> int:
    path = Path(args.profile) if args.profile else out / "profile.csv"
    p = read_profile(path)
    pde = cfg["pde"]
    c = cfg["c"]
    scheme = SchemeConfig(pde["dt"], pde["dx"], pde["T"], cfg["D"], cfg["alpha"], cfg["tau"], pde["X"], cfg["K"])
    rep = run_validation(p, c, scheme)
    _write_rows(out / "fronts.csv", ["t", "xi_half"], zip(rep.times, rep.fronts))
    verdict = rep.to_dict()
    verdict.update({"tau": cfg["tau"], "dt": scheme.dt, "dx": scheme.dx, "T": scheme.T, "X": scheme.X})
    if args.probe:
        verdict["comparison_probe"] = comparison_probe(p, c, scheme)
    sys.stdout.write(_emit(out, "evolve.json", verdict))
    ok = rep.passed and (not args.probe or verdict["comparison_probe"]["holds"])
    return 0 if ok else ValidationFailed.exit_code


COMMANDS = {
    "roots": cmd_roots,
    "kernel": cmd_kernel,
    "verify-bounds": cmd_verify,
    "solve": cmd_solve,
    "evolve": cmd_evolve,
}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--config", help="JSON config overriding the defaults table")
    p.add_argument("--out", help="output directory (default: current directory)")
    p.add_argument("--seed", type=int, help="seed for randomized checks")
    p.add_argument("--defaults", action="store_true", help="print the defaults table and exit")
    for name in ("c", "D", "beta", "tau"):
        p.add_argument(f"--{name}", type=float, help=f"override {name}")
    for name in ("dt", "dx", "T", "X"):
        p.add_argument(f"--{name}", type=float, dest=f"pde.{name}", help=f"override pde {name}")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="pwave", parents=[common],
                                     description="Travelling waves of a delayed pseudoparabolic equation.")
    sub = parser.add_subparsers(dest="command")
    sub.add_parser("roots", parents=[common], help="characteristic roots and spectral gap")
    sub.add_parser("kernel", parents=[common], help="Green's function samples and checks")
    sub.add_parser("verify-bounds", parents=[common], help="check the upper and lower solutions, scan the delay")
    s = sub.add_parser("solve", parents=[common], help="compute the wave profile")
    s.add_argument("--skip-bounds", action="store_true", help="iterate even if the bounds fail to verify")
    s.add_argument("--ascending", action="store_true", help="iterate upward from the lower solution")
    e = sub.add_parser("evolve", parents=[common], help="validate a profile with the PDE")
    e.add_argument("--profile", help="profile CSV (default: <out>/profile.csv)")
    e.add_argument("--probe", action="store_true", help="also run the comparison probe")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = vars(args)
    if opts.get("defaults"):
        sys.stdout.write(cfgmod.dumps(cfgmod.DEFAULTS))
        return 0
    if not opts.get("command"):
        build_parser().print_usage(sys.stderr)
        return 1
    for flag in ("skip_bounds", "ascending", "probe"):
        opts.setdefault(flag, False)
    opts.setdefault("profile", None)
    args = argparse.Namespace(**opts)
    extra = {k: v for k, v in opts.items() if k in ("c", "D", "beta", "tau", "seed") or k.startswith("pde.")}
    out = Path(opts.get("out", "."))
    try:
        cfg = cfgmod.load_config(opts.get("config"), extra)
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, out, args)
    except WaveError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
