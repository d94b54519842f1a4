"""Command-line entry point: ``rssdetect {roc,sweep-density,optimize,validate,xi-table}``.

Exit codes: 0 success, 1 usage/config error, 2 numerical failure, 3 validation breach.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .channel import build_interference_model, xi, xi_closed_form
from .config import RunConfig, horizontal_distance, load_config, number_grid
from .detector import EvalMethod, pd_avg, roc_curve, solve_threshold
from .errors import InvalidParams, MethodMismatch, NoConvergence, QuadratureFailure
from .io import line_plot, write_csv
from .optimizer import critical_density
from .simulator import TrialConfig, empirical_roc, truncation_report, validation_report

log = logging.getLogger("rssdetect")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_BREACH = 0, 1, 2, 3
PUBLISHED_XI = {2.0: 0.637, 1.5: 0.579, 1.75: 0.7403}


class UsageError(Exception):
    pass


def resolve_method(cfg: RunConfig, b_i: float) -> EvalMethod:
    name = cfg.method
    if name == "auto":
        name = "levy" if b_i == 2.0 else "mc"
    return EvalMethod.parse(name, n_samples=cfg.mc_samples, seed=cfg.seed)


def _out(cfg: RunConfig) -> Path:
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    return cfg.output_dir


def _alpha_grid(block):
    grid = number_grid(block.get("alpha_fa_grid"))
    if not grid:
        raise UsageError("alpha_fa_grid is empty")
    return grid


def cmd_roc(cfg: RunConfig):
    block = cfg.block("roc")
    grid = _alpha_grid(block)
    mode = block.get("mode", "single")
    densities = number_grid(block.get("densities_per_m2")) or [cfg.network.lam]
    altitudes = number_grid(block.get("altitudes_m")) or [cfg.network.h]
    n_trials = (block.get("empirical") or {}).get("n_trials")
    rows, series = [], []
    for env0 in cfg.environments:
        for gamma_i in number_grid(block.get("path_loss_exponents")) or [env0.gamma_i]:
            env = env0.with_(gamma_i=gamma_i)
            for lam in densities:
                for h in altitudes:
                    net = cfg.network.with_(lam=lam, h=h)
                    r0 = horizontal_distance(block, h)
                    model = build_interference_model(net, env)
                    method = resolve_method(cfg, env.b_i)
                    pts = roc_curve(mode, net, env, model, grid, method,
                                    r0=r0 if mode == "single" else None)
                    emp = [None] * len(pts)
                    if n_trials and mode == "single":
                        trial = TrialConfig(n_trials=int(n_trials), r0=r0, seed=cfg.seed)
                        emp = [e.p_d for e in empirical_roc(net, env, trial, [p.gamma_thr for p in pts])]
                    for p, e in zip(pts, emp):
                        rows.append({"p_fa": p.p_fa, "p_d_analytic": p.p_d, "p_d_empirical": e,
                                     "gamma_thr": p.gamma_thr, "lambda": lam, "env_label": env.label,
                                     "gamma_i": gamma_i, "altitude_m": h, "r0_m": r0, "mode": mode})
                    label = f"{env.label} lam={lam:g} gI={gamma_i:g} h={h:g}"
                    series.append((label, [p.p_fa for p in pts], [p.p_d for p in pts]))
    out = _out(cfg)
    paths = [write_csv(out / "roc.csv", "roc", rows)]
    paths.append(line_plot(out / "roc.svg", series, xlabel="P_FA", ylabel="P_D", logx=True))
    return paths


def cmd_sweep_density(cfg: RunConfig):
    block = cfg.block("sweep_density")
    densities = number_grid(block.get("densities_per_m2", {"start": 1e-7, "stop": 1e-3, "num": 41}))
    alphas = number_grid(block.get("alpha_fa", [0.01, 0.1]))
    if not densities or not alphas:
        raise UsageError("sweep_density needs densities and alpha_fa")
    rows, series = [], []
    for env in cfg.environments:
        method = resolve_method(cfg, env.b_i)
        for alpha in alphas:
            ys = []
            for lam in densities:
                net = cfg.network.with_(lam=lam)
                model = build_interference_model(net, env)
                g = solve_threshold(alpha, model, net.n0, method)
                p = pd_avg(net, env, model, g, method)
                ys.append(p)
                rows.append({"lambda": lam, "alpha_fa": alpha, "env_label": env.label,
                             "gamma_thr": g, "p_d_avg": p, "gamma_g": model.gamma_g})
            series.append((f"{env.label} P_FA={alpha:g}", densities, ys))
    out = _out(cfg)
    return [write_csv(out / "pdavg_vs_lambda.csv", "pdavg_vs_lambda", rows),
            line_plot(out / "pdavg_vs_lambda.svg", series, xlabel="lambda (per m^2)",
                      ylabel="average P_D", logx=True)]


def cmd_optimize(cfg: RunConfig):
    block = cfg.block("optimize")
    alphas = number_grid(block.get("alpha_fa", [0.01, 0.1]))
    lo, hi = number_grid(block.get("lambda_range_per_m2", [1e-7, 1e-3]))
    results, trace_rows = [], []
    for env in cfg.environments:
        method = resolve_method(cfg, env.b_i)
        for alpha in alphas:
            res = critical_density(alpha, cfg.network, env, (lo, hi),
                                   rel_tol=float(block.get("rel_tol", 1e-3)), method=method,
                                   n_grid=int(block.get("grid_points", 25)))
            results.append({"env_label": env.label, "alpha_fa": alpha, "lambda_c": res.lambda_c,
                            "pd_avg_max": res.pd_avg_max, "gamma_thr_at_opt": res.gamma_thr_at_opt,
                            "bracket": list(res.bracket), "boundary_maximum": res.boundary_maximum,
                            "degenerate": res.degenerate, "evaluations": len(res.trace)})
            for t in res.trace:
                trace_rows.append({"env_label": env.label, "alpha_fa": alpha, "lambda": t.lam,
                                   "gamma_thr": t.gamma_thr, "p_d_avg": t.pd_avg})
    out = _out(cfg)
    with open(out / "optimize_result.json", "w") as fh:
        json.dump(results, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return [out / "optimize_result.json",
            write_csv(out / "optimize_trace.csv", "optimize_trace", trace_rows)]


def cmd_validate(cfg: RunConfig):
    """Returns (paths, passed)."""
    block = cfg.block("validate")
    grid = _alpha_grid(block)
    lam = float(block.get("density_per_m2", cfg.network.lam))
    net = cfg.network.with_(lam=lam)
    r0 = horizontal_distance(block, net.h)
    tol = float(block.get("tolerance", 0.02))
    trial = TrialConfig(n_trials=int(block.get("n_trials", 100_000)), r0=r0, seed=cfg.seed)
    rows, lines, passed = [], [], True
    for env in cfg.environments:
        model = build_interference_model(net, env)
        analytic = roc_curve("single", net, env, model, grid, resolve_method(cfg, env.b_i), r0=r0)
        empirical = empirical_roc(net, env, trial, [p.gamma_thr for p in analytic])
        rep = validation_report(analytic, empirical, tol, trial.n_trials)
        passed &= rep.passed
        for r in rep.rows:
            rows.append({k: r[k] for k in ("gamma_thr", "p_fa_analytic", "p_fa_empirical",
                                           "p_d_analytic", "p_d_empirical", "delta_fa",
                                           "delta_d", "ok")})
        lines.append(f"{env.label}: {rep.summary()}; truncated-field variance "
                     f"{truncation_report(net, env, trial):.3g}")
    out = _out(cfg)
    (out / "validation.txt").write_text("\n".join(lines) + "\n")
    return [write_csv(out / "validation.csv", "validation", rows), out / "validation.txt"], passed


def cmd_xi_table(cfg: RunConfig):
    block = cfg.block("xi_table")
    grid = number_grid(block.get("b_i", {"start": 1.0, "stop": 2.5, "num": 16, "log": False}))
    grid = sorted(set(round(b, 12) for b in grid) | set(PUBLISHED_XI))
    rows = []
    for b in grid:
        val = xi(b)
        published = PUBLISHED_XI.get(b)
        rows.append({"b_i": b, "xi": val, "xi_closed_form": xi_closed_form(b), "published_value": published,
                     "published_agrees": None if published is None else abs(val - published) < 1e-3})
    return [write_csv(_out(cfg) / "xi_table.csv", "xi_table", rows)]


COMMANDS = {"roc": cmd_roc, "sweep-density": cmd_sweep_density, "optimize": cmd_optimize,
            "validate": cmd_validate, "xi-table": cmd_xi_table}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="rssdetect", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--out", type=Path, help="output directory (env RSSDETECT_OUT)")
    p.add_argument("--seed", type=int, help="master seed (env RSSDETECT_SEED)")
    p.add_argument("--method", choices=["levy", "mc", "auto"])
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, seed=args.seed, out=args.out, method=args.method)
        result = COMMANDS[args.command](cfg)
    except (UsageError, InvalidParams, MethodMismatch, FileNotFoundError, KeyError) as exc:
        print(f"rssdetect: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoConvergence, QuadratureFailure, ArithmeticError) as exc:
        print(f"rssdetect: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.command == "validate":
        paths, passed = result
        print((Path(cfg.output_dir) / "validation.txt").read_text(), end="")
        return EXIT_OK if passed else EXIT_BREACH
    for path in result:
        log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
