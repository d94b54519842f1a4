"""Critical sensor density: maximise network-average P_D under a P_FA equality constraint.

The constraint fixes the threshold for each density, so the problem reduces to a 1-D
search over lambda: coarse log-spaced grid, then golden-section refinement (in log lambda)
on the triple bracketing the best grid point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import NetworkConfig, build_interference_model
from .detector import EvalMethod, pd_avg, solve_threshold
from .errors import InvalidParams
from .geometry import EnvironmentProfile

INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class TracePoint:
    lam: float
    gamma_thr: float
    pd_avg: float


@dataclass
class OptimizationResult:
    alpha_fa: float
    lambda_c: float
    pd_avg_max: float
    gamma_thr_at_opt: float
    bracket: tuple
    trace: list = field(default_factory=list)
    boundary_maximum: bool = False
    degenerate: bool = False

    @property
    def interior(self) -> bool:
        return not (self.boundary_maximum or self.degenerate)


def composed_objective(alpha_fa, cfg: NetworkConfig, env: EnvironmentProfile,
                       method: EvalMethod = EvalMethod(), model_fn=build_interference_model):
    """lambda -> TracePoint with the threshold re-solved so that P_FA = alpha_fa."""
    def f(lam: float) -> TracePoint:
        c = cfg.with_(lam=float(lam))
        model = model_fn(c, env)
        g = solve_threshold(alpha_fa, model, c.n0, method)
        return TracePoint(float(lam), g, pd_avg(c, env, model, g, method))
    return f


def golden_section_max(f, lo, hi, tol):
    """Maximise f on [lo, hi] until the bracket is narrower than tol; returns (a, b, evaluated)."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    seen = [(c, fc), (d, fd)]
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
            seen.append((c, fc))
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            seen.append((d, fd))
    return a, b, seen


def critical_density(alpha_fa: float, cfg: NetworkConfig, env: EnvironmentProfile,
                     lambda_range=(1e-7, 1e-3), rel_tol: float = 1e-3,
                     method: EvalMethod = EvalMethod(), *, n_grid: int = 25,
                     flat_tol: float = 1e-9, model_fn=build_interference_model) -> OptimizationResult:
    lo, hi = map(float, lambda_range)
    if not 0 < lo < hi:
        raise InvalidParams("lambda_range must satisfy 0 < lo < hi")
    if not 0 < alpha_fa < 1:
        raise InvalidParams("alpha_fa must lie in (0, 1)")
    if n_grid < 3:
        raise InvalidParams("n_grid must be at least 3")
    objective = composed_objective(alpha_fa, cfg, env, method, model_fn)
    trace: list[TracePoint] = []
    cache: dict[float, TracePoint] = {}

    def f_log(log_lam):
        if log_lam not in cache:
            cache[log_lam] = objective(math.exp(log_lam))
            trace.append(cache[log_lam])
        return cache[log_lam].pd_avg

    logs = np.linspace(math.log(lo), math.log(hi), n_grid)
    vals = np.array([f_log(x) for x in logs])
    i = int(np.argmax(vals))
    degenerate = float(vals.max() - vals.min()) <= flat_tol
    boundary = i in (0, n_grid - 1)
    if degenerate or boundary:
        best = cache[logs[i]]
        bracket = (math.exp(logs[max(i - 1, 0)]), math.exp(logs[min(i + 1, n_grid - 1)]))
        return OptimizationResult(alpha_fa, best.lam, best.pd_avg, best.gamma_thr, bracket,
                                  trace, boundary_maximum=boundary and not degenerate,
                                  degenerate=degenerate)

    a, b, _ = golden_section_max(f_log, logs[i - 1], logs[i + 1], math.log1p(rel_tol))
    best = max(trace, key=lambda t: t.pd_avg)
    # the best evaluation normally lies inside the final bracket; widen it if not
    la = min(a, math.log(best.lam))
    lb = max(b, math.log(best.lam))
    return OptimizationResult(alpha_fa, best.lam, best.pd_avg, best.gamma_thr,
                              (math.exp(la), math.exp(lb)), trace)
