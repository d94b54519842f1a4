"""Analytic RSS detector: false-alarm and detection probabilities.

Every expectation over the mixing variable V goes through a (nodes, weights) rule:

* ``levy-quadrature`` (b_I = 2 only): V = 1/(2 N^2) with N standard normal, integrated
  over s = log|N| with composite Gauss-Legendre panels.  The rule is fixed, so P_FA is
  exactly monotone in the threshold and bisection is well posed.
* ``stable-montecarlo``: a seeded, immutable set of V draws reused for every threshold
  and distance (common random numbers).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize, special

from .channel import InterferenceModel, NetworkConfig, amplitude_constant
from .distributions import RngStream, sample_stable
from .errors import InvalidParams, MethodMismatch, NoConvergence
from .geometry import EnvironmentProfile, link_geometry, los_probability

_MARCUM_LOG_TAIL = math.log(1e16)   # each Poisson tail left out of the series is < 1e-16
_NN_TAIL_MASS = 1e-10


@dataclass(frozen=True)
class DetectorPoint:
    gamma_thr: float
    p_fa: float
    p_d: float
    error: str | None = None


@dataclass(frozen=True)
class EvalMethod:
    kind: str = "levy-quadrature"
    n_samples: int = 200_000
    seed: int = 0

    KINDS = ("levy-quadrature", "stable-montecarlo")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InvalidParams(f"unknown method {self.kind!r}")
        if self.n_samples < 1:
            raise InvalidParams("n_samples must be positive")

    @classmethod
    def levy(cls):
        return cls("levy-quadrature")

    @classmethod
    def montecarlo(cls, n_samples=200_000, seed=0):
        return cls("stable-montecarlo", int(n_samples), int(seed))

    @classmethod
    def parse(cls, name: str, n_samples=200_000, seed=0):
        aliases = {"levy": "levy-quadrature", "mc": "stable-montecarlo"}
        return cls(aliases.get(name, name), int(n_samples), int(seed))


# ---------------------------------------------------------------- Marcum Q

def marcum_q1(a, b):
    """First-order Marcum Q function Q_1(a, b), vectorised.

    Q_1(a, b) = sum_k Pois(k; a^2/2) * P(Pois(b^2/2) <= k).  Only the k-window where the
    Poisson(a^2/2) weights carry mass is summed; each omitted tail is bounded by 1e-16
    (Bernstein bound above, Chernoff bound below), so the absolute error is below 1e-15 plus rounding
    (a few 1e-14 for a^2/2 in the hundreds).
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    if np.any(a < 0) or np.any(b < 0):
        raise InvalidParams("marcum_q1 requires a, b >= 0")
    shape = a.shape
    mu = (a * a / 2).ravel()
    x = (b * b / 2).ravel()
    if mu.size == 0:
        return np.empty(shape)
    lt = _MARCUM_LOG_TAIL
    k_lo = np.floor(np.maximum(mu - np.sqrt(2 * mu * lt), 0.0))
    k_hi = np.ceil(mu + lt / 3 + np.sqrt(lt**2 / 9 + 2 * mu * lt))
    width = int(np.max(k_hi - k_lo)) + 1

    k = k_lo.copy()
    p = np.exp(special.xlogy(k, mu) - mu - special.gammaln(k + 1))
    cdf = special.gammaincc(k + 1, x)                       # P(Pois(x) <= k)
    log_term = special.xlogy(k, x) - x - special.gammaln(k + 1)
    log_x = np.log(x, where=x > 0, out=np.full_like(x, -np.inf))
    acc = p * cdf
    for _ in range(1, width):
        k += 1
        p *= mu / k
        log_term += log_x - np.log(k)
        cdf += np.exp(log_term)
        acc += p * np.minimum(cdf, 1.0)
    acc[x == 0] = 1.0
    out = np.clip(acc, 0.0, 1.0).reshape(shape)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------- V rules

@lru_cache(maxsize=None)
def _levy_rule(panel: float = 0.25, order: int = 8, s_lo: float = -32.0, s_hi: float = 2.3):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.arange(s_lo, s_hi + panel / 2, panel)
    mid = (edges[:-1] + edges[1:]) / 2
    s = (mid[:, None] + panel / 2 * x[None, :]).ravel()
    ws = np.tile(panel / 2 * w, len(mid))
    z = np.exp(s)
    weights = ws * 2 * z * np.exp(-z * z / 2) / math.sqrt(2 * math.pi)   # density of log|N|
    weights /= weights.sum()    # the ~1e-14 mass outside [s_lo, s_hi] is spread proportionally
    v = 0.5 / (z * z)
    v.setflags(write=False)
    weights.setflags(write=False)
    return v, weights


@lru_cache(maxsize=8)
def _stable_v_samples(b_i: float, n: int, seed: int):
    from .channel import mixing_params
    v = np.asarray(sample_stable(mixing_params(b_i), RngStream(seed, 0xC0FFEE), n), dtype=float)
    v.setflags(write=False)
    w = np.full(n, 1.0 / n)
    w.setflags(write=False)
    return v, w


def v_rule(model: InterferenceModel, method: EvalMethod):
    """Nodes and weights representing the law of V for ``model`` under ``method``."""
    if method.kind == "levy-quadrature" and model.b_i != 2.0:
        raise MethodMismatch(f"levy-quadrature needs b_I = 2, got {model.b_i}")
    if model.gamma_g == 0.0:
        return np.zeros(1), np.ones(1)
    if method.kind == "levy-quadrature":
        return _levy_rule()
    return _stable_v_samples(float(model.b_i), method.n_samples, method.seed)


# ---------------------------------------------------------------- false alarm

def _ccdf_exp(gamma_thr, var):
    """exp(-gamma / (2 var)) with the var = 0 limit (1 at gamma = 0, else 0)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(-gamma_thr / (2 * var))
    return np.where(var > 0, out, np.where(gamma_thr > 0, 0.0, 1.0))


def pfa(gamma_thr, model: InterferenceModel, n0: float, method: EvalMethod = EvalMethod()):
    """P(R_S > gamma_thr | H0) = E_V exp(-gamma_thr / (2 (V gamma_G + n0/2)))."""
    g = np.asarray(gamma_thr, dtype=float)
    if np.any(g < 0):
        raise InvalidParams("gamma_thr must be nonnegative")
    v, w = v_rule(model, method)
    var = v * model.gamma_g + n0 / 2
    out = _ccdf_exp(g[..., None], var) @ w
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def solve_threshold(alpha_fa: float, model: InterferenceModel, n0: float,
                    method: EvalMethod = EvalMethod(), *, max_decades: int = 60) -> float:
    """Invert pfa(gamma_thr) = alpha_fa by bracket expansion and Brent iteration on log gamma."""
    if not 0.0 < alpha_fa < 1.0:
        raise InvalidParams("alpha_fa must lie in (0, 1)")
    v, w = v_rule(model, method)
    var = v * model.gamma_g + n0 / 2
    if not np.any(var > 0):
        raise InvalidParams("no interference and no noise: every threshold gives P_FA = 0")
    scale = float(np.exp(np.log(var[var > 0]).mean()))

    def f(log_g):
        return pfa(math.exp(log_g), model, n0, method) - alpha_fa

    lo = hi = math.log(scale)
    step = math.log(10.0)
    for _ in range(max_decades):
        if f(lo) > 0:
            break
        lo -= step
    else:
        raise NoConvergence("could not bracket the threshold from below")
    for _ in range(max_decades):
        if f(hi) < 0:
            break
        hi += step
    else:
        raise NoConvergence("could not bracket the threshold from above")
    root = optimize.brentq(f, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=500)
    return math.exp(root)


# ---------------------------------------------------------------- detection

def _drone_terms(r0, cfg: NetworkConfig, env: EnvironmentProfile):
    k = amplitude_constant(cfg.f_c)
    d, _ = link_geometry(r0, cfg.h)
    d2 = np.asarray(d, dtype=float) ** 2
    rx = k * k * cfg.rho**2 * cfg.p_d / d2       # k^2 rho^2 P_d / d^2
    return rx / env.eta_los, rx / (2 * env.eta_nlos)


def pd_single(r0, gamma_thr: float, cfg: NetworkConfig, env: EnvironmentProfile,
              model: InterferenceModel, method: EvalMethod = EvalMethod(), *,
              los_weight=None):
    """Detection probability of a sensor at horizontal distance r0 (scalar or array).

    LOS branch: Q_1(a, sqrt(gamma)/sigma_1) with a^2 = k^2 rho^2 P_d / (eta_L d^2 sigma_1^2);
    NLOS branch: exp(-gamma / (2 sigma_1^2)); sigma_1^2 = k^2 rho^2 P_d/(2 eta_N d^2) + V gamma_G + n0/2.
    ``los_weight`` overrides P_L(r0) (0 or 1 isolates one branch).
    """
    if gamma_thr < 0:
        raise InvalidParams("gamma_thr must be nonnegative")
    r0 = np.asarray(r0, dtype=float)
    v, w = v_rule(model, method)
    los_power, diffuse_var = _drone_terms(r0, cfg, env)
    var1 = diffuse_var[..., None] + v * model.gamma_g + cfg.n0 / 2
    p_los = los_probability(r0, cfg.h, env) if los_weight is None else np.broadcast_to(
        np.asarray(los_weight, dtype=float), r0.shape)
    nlos = _ccdf_exp(gamma_thr, var1) @ w
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.sqrt(np.where(var1 > 0, los_power[..., None] / var1, np.inf))
        b = np.sqrt(np.where(var1 > 0, gamma_thr / var1, np.inf))
    need_los = np.broadcast_to(np.asarray(p_los) > 0, r0.shape)
    los = np.zeros(r0.shape)
    if np.any(need_los):
        aa, bb = a[need_los], b[need_los]
        finite = np.isfinite(aa) & np.isfinite(bb)
        q = np.where(gamma_thr > 0, 0.0, 1.0) * np.ones(aa.shape)
        q[finite] = marcum_q1(aa[finite], bb[finite])
        los[need_los] = q @ w
    out = np.clip(p_los * los + (1 - p_los) * nlos, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=None)
def _nn_rule(panels: int = 12, order: int = 8):
    """Gauss-Legendre rule for E f(R_0) written as int_0^W 2 t e^{-t^2} f(t / sqrt(pi lambda)) dt."""
    t_max = math.sqrt(-math.log(_NN_TAIL_MASS))
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, t_max, panels + 1)
    half = (edges[1:] - edges[:-1]) / 2
    mid = (edges[1:] + edges[:-1]) / 2
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel() * 2 * t * np.exp(-t * t)
    return t, wt


def network_average(fn, lam: float) -> float:
    """Integrate fn(r0) (vectorised over r0) against the nearest-sensor density."""
    if lam <= 0:
        raise InvalidParams("network averaging needs lambda > 0")
    t, wt = _nn_rule()
    r0 = t / math.sqrt(math.pi * lam)
    return float(np.asarray(fn(r0), dtype=float) @ wt)


def pd_avg(cfg: NetworkConfig, env: EnvironmentProfile, model: InterferenceModel,
           gamma_thr: float, method: EvalMethod = EvalMethod()) -> float:
    """Network-average detection probability using the nearest sensor."""
    val = network_average(lambda r0: pd_single(r0, gamma_thr, cfg, env, model, method), cfg.lam)
    return min(max(val, 0.0), 1.0)


def roc_curve(mode: str, cfg: NetworkConfig, env: EnvironmentProfile, model: InterferenceModel,
              alpha_fa_grid, method: EvalMethod = EvalMethod(), r0: float | None = None):
    """One DetectorPoint per false-alarm target; mode is 'single' (needs r0) or 'average'."""
    grid = [float(a) for a in alpha_fa_grid]
    if not grid:
        raise InvalidParams("empty false-alarm grid")
    if any(not 0 < a < 1 for a in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidParams("false-alarm grid must be strictly increasing inside (0, 1)")
    if mode not in ("single", "average"):
        raise InvalidParams(f"unknown ROC mode {mode!r}")
    if mode == "single" and r0 is None:
        raise InvalidParams("single-sensor ROC needs r0")
    points = []
    for alpha in grid:
        try:
            g = solve_threshold(alpha, model, cfg.n0, method)
            p_f = pfa(g, model, cfg.n0, method)
            if mode == "single":
                p_d = pd_single(r0, g, cfg, env, model, method)
            else:
                p_d = pd_avg(cfg, env, model, g, method)
            points.append(DetectorPoint(g, p_f, p_d))
        except (NoConvergence, ArithmeticError, ValueError) as exc:
            if isinstance(exc, MethodMismatch):
                raise
            points.append(DetectorPoint(math.nan, alpha, math.nan, error=str(exc)))
    return sorted(points, key=lambda p: p.p_fa)
