"""Path-loss constants and the stable-law description of the aggregate interference.

Per-component interference amplitude Y_n is symmetric alpha-stable with
alpha_Y = 2/b_I and dispersion gamma_Y = pi lambda E|U_n|^{2/b_I} / C_{alpha_Y}.
Conditioned on the positive-stable mixing variable V ~ S(1/b_I, 1, cos(pi/2b_I)),
each component is N(0, V gamma_G) with gamma_G = 2 gamma_Y^{b_I}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate, special

from .distributions import StableParams
from .errors import InvalidParams
from .geometry import EnvironmentProfile

SPEED_OF_LIGHT = 299_792_458.0
# Symbol period only enters through the narrowband condition f_c >> 1/T; it has no
# numerical role once the I-Q projection is reduced to the correlation rho.
SYMBOL_PERIOD = None

RHO_MODES = ("fixed-one", "uniform")


def dbm_to_watts(p_dbm: float) -> float:
    return 10 ** ((p_dbm - 30) / 10)


@dataclass(frozen=True)
class NetworkConfig:
    lam: float = 1e-5            # per m^2
    p_u: float = 0.1             # W
    p_d: float = 0.1             # W
    f_c: float = 5.8e9           # Hz
    n0: float = 1e-17            # noise floor, per-component variance is n0 / 2
    h: float = 300.0             # m
    rho: float = 1.0
    rho_mode: str = "fixed-one"

    def __post_init__(self):
        if self.lam < 0:
            raise InvalidParams("lambda must be nonnegative")
        if self.p_u <= 0 or self.p_d < 0 or self.f_c <= 0 or self.h <= 0:
            raise InvalidParams("powers, carrier frequency and altitude must be positive")
        if self.n0 < 0:
            raise InvalidParams("n0 must be nonnegative")
        if not 0.0 <= self.rho <= 1.0:
            raise InvalidParams("rho must lie in [0, 1]")
        if self.rho_mode not in RHO_MODES:
            raise InvalidParams(f"rho_mode must be one of {RHO_MODES}")

    def with_(self, **changes) -> "NetworkConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class InterferenceModel:
    b_i: float
    k_i: float
    moment: float
    stable_y: StableParams | None   # None when lambda = 0
    gamma_g: float

    @property
    def stable_v(self) -> StableParams:
        """Law of the positive mixing variable V."""
        return mixing_params(self.b_i)

    @property
    def is_levy(self) -> bool:
        return self.b_i == 2.0


def amplitude_constant(f_c: float) -> float:
    """Free-space amplitude constant k = c / (4 pi f_c)."""
    if f_c <= 0:
        raise InvalidParams("f_c must be positive")
    return SPEED_OF_LIGHT / (4 * math.pi * f_c)


def xi(b_i: float) -> float:
    """E|cos(Theta)|^{2/b_i} for Theta uniform on [0, 2 pi]."""
    if b_i <= 0:
        raise InvalidParams("b_i must be positive")
    p = 2.0 / b_i
    # symmetric over the four quarter periods
    val, _ = integrate.quad(lambda t: math.cos(t) ** p, 0.0, math.pi / 2,
                            epsabs=1e-12, epsrel=1e-12, limit=200)
    return val * 2 / math.pi


def stable_constant(alpha: float) -> float:
    """LePage normalisation C_alpha = (1-alpha) / (Gamma(2-alpha) cos(pi alpha/2)); C_1 = 2/pi."""
    if alpha == 1.0:
        return 2 / math.pi
    return (1 - alpha) / (special.gamma(2 - alpha) * math.cos(math.pi * alpha / 2))


def mixing_params(b_i: float) -> StableParams:
    return StableParams(1.0 / b_i, 1.0, math.cos(math.pi / (2 * b_i)))


def interference_moment(cfg: NetworkConfig, env: EnvironmentProfile, *,
                        linear_shadowing: bool = False) -> float:
    """E|U_n|^{2/b_I} for one interferer's in-phase (or quadrature) amplitude.

    ``linear_shadowing`` swaps the exact log-normal factor exp(2 sigma_s^2 / b_I^2) for the
    exp(2 sigma_s^2 / b_I) form; both are 1 when sigma_s = 0.
    """
    b = env.b_i
    p = 2.0 / b
    k_i = amplitude_constant(cfg.f_c) ** b
    if env.sigma_s == 0:
        shadow = 1.0
    elif linear_shadowing:
        shadow = math.exp(2 * env.sigma_s**2 / b)
    else:
        shadow = math.exp(2 * env.sigma_s**2 / b**2)
    rho_factor = b / (2 + b) if cfg.rho_mode == "uniform" else 1.0
    return k_i**p * cfg.p_u ** (1 / b) * shadow * special.gamma(1 + 1 / b) * rho_factor * xi(b)


def build_interference_model(cfg: NetworkConfig, env: EnvironmentProfile, *,
                             linear_shadowing: bool = False) -> InterferenceModel:
    b = env.b_i
    alpha_y = 2.0 / b
    moment = interference_moment(cfg, env, linear_shadowing=linear_shadowing)
    k_i = amplitude_constant(cfg.f_c) ** b
    if cfg.lam == 0:
        return InterferenceModel(b, k_i, moment, None, 0.0)
    gamma_y = math.pi * cfg.lam * moment / stable_constant(alpha_y)
    return InterferenceModel(b, k_i, moment, StableParams(alpha_y, 0.0, gamma_y),
                             2 * gamma_y**b)


def truncation_remainder_variance(cfg: NetworkConfig, env: EnvironmentProfile,
                                  r_max: float) -> float:
    """Per-component variance of interference from interferers beyond r_max.

    2 pi lambda E|U_n|^2 r_max^{2 - 2 b_I} / (2 b_I - 2), with E|U_n|^2 = k_I^2 P_u E[rho^2] e^{2 s^2} / 2.
    """
    b = env.b_i
    k_i = amplitude_constant(cfg.f_c) ** b
    rho2 = 1 / 3 if cfg.rho_mode == "uniform" else 1.0
    second = 0.5 * k_i**2 * cfg.p_u * rho2 * math.exp(2 * env.sigma_s**2)
    return 2 * math.pi * cfg.lam * second * r_max ** (2 - 2 * b) / (2 * b - 2)


def xi_closed_form(b_i: float) -> float:
    """Gamma-function identity E|cos|^p = Gamma((p+1)/2) / (sqrt(pi) Gamma(p/2+1))."""
    p = 2.0 / b_i
    return float(np.exp(special.gammaln((p + 1) / 2) - special.gammaln(p / 2 + 1)) / math.sqrt(math.pi))
