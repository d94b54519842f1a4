"""Poisson fields, the nearest-sensor distance law and air-to-ground link geometry."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .distributions import as_generator
from .errors import DomainError, InvalidParams

GAMMA_I_RANGE = (2.13, 4.89)


@dataclass(frozen=True)
class EnvironmentProfile:
    """LOS sigmoid (a, b), excess losses (linear power ratios) and interferer path loss."""
    a: float
    b: float
    eta_los: float
    eta_nlos: float
    gamma_i: float = 4.0
    sigma_s: float = 0.0
    label: str = "custom"

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise InvalidParams("LOS parameters a and b must be positive")
        if not self.eta_nlos > self.eta_los >= 1.0:
            raise InvalidParams("excess losses must satisfy eta_nlos > eta_los >= 1")
        lo, hi = GAMMA_I_RANGE
        if not lo <= self.gamma_i <= hi:
            raise InvalidParams(f"gamma_i must lie in [{lo}, {hi}], got {self.gamma_i}")
        if self.sigma_s < 0:
            raise InvalidParams("sigma_s must be nonnegative")

    @property
    def b_i(self) -> float:
        """Amplitude loss exponent gamma_I / 2."""
        return self.gamma_i / 2

    def with_(self, **changes) -> "EnvironmentProfile":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "eta_los_db": 10 * math.log10(self.eta_los),
                "eta_nlos_db": 10 * math.log10(self.eta_nlos), "gamma_i": self.gamma_i,
                "sigma_s": self.sigma_s, "label": self.label}

    @classmethod
    def from_dict(cls, d: dict) -> "EnvironmentProfile":
        return cls(a=float(d["a"]), b=float(d["b"]),
                   eta_los=10 ** (float(d["eta_los_db"]) / 10),
                   eta_nlos=10 ** (float(d["eta_nlos_db"]) / 10),
                   gamma_i=float(d.get("gamma_i", 4.0)), sigma_s=float(d.get("sigma_s", 0.0)),
                   label=str(d.get("label", "custom")))


# Standard A2G constants (LOS sigmoid fit and excess losses) for the two reference environments.
SUBURBAN = EnvironmentProfile(a=4.88, b=0.43, eta_los=10**0.01, eta_nlos=10**2.1, label="suburban")
URBAN = EnvironmentProfile(a=9.61, b=0.16, eta_los=10**0.1, eta_nlos=10**2.0, label="urban")
PRESETS = {"suburban": SUBURBAN, "urban": URBAN}


@dataclass(frozen=True)
class PointField:
    points: np.ndarray  # (n, 2), sorted by distance to the origin
    radius: float
    density: float

    @property
    def radii(self) -> np.ndarray:
        return np.hypot(self.points[:, 0], self.points[:, 1])

    def __len__(self):
        return len(self.points)


def default_truncation_radius(lam: float) -> float:
    """R_max = 30 / sqrt(pi lambda): P(no point inside) = exp(-900)."""
    return 30.0 / math.sqrt(math.pi * lam)


def sample_ppp_disk(lam: float, r_max: float, rng) -> PointField:
    if lam <= 0 or r_max <= 0:
        raise InvalidParams("density and radius must be positive")
    gen = as_generator(rng)
    n = gen.poisson(lam * math.pi * r_max**2)
    r = r_max * np.sqrt(gen.random(n))
    phi = gen.uniform(0.0, 2 * np.pi, n)
    order = np.argsort(r, kind="stable")
    r, phi = r[order], phi[order]
    pts = np.column_stack([r * np.cos(phi), r * np.sin(phi)])
    pts.setflags(write=False)
    return PointField(pts, float(r_max), float(lam))


def nearest_neighbor_pdf(r0, lam):
    """Rayleigh density 2 pi lambda r0 exp(-lambda pi r0^2) of the nearest-sensor distance."""
    r0 = np.asarray(r0, dtype=float)
    if np.any(r0 < 0):
        raise DomainError("r0 must be nonnegative")
    if lam <= 0:
        raise InvalidParams("density must be positive")
    out = 2 * np.pi * lam * r0 * np.exp(-lam * np.pi * r0**2)
    return out[()] if out.ndim == 0 else out


def sample_nearest_distance(lam, rng, size=None):
    if lam <= 0:
        raise InvalidParams("density must be positive")
    u = 1.0 - as_generator(rng).random(size)  # (0, 1]
    return np.sqrt(-np.log(u) / (np.pi * lam))


def link_geometry(r0, h):
    """Return (slant distance in m, elevation angle in degrees); 90 degrees at r0 = 0."""
    r0 = np.asarray(r0, dtype=float)
    d = np.hypot(r0, h)
    theta = np.degrees(np.arctan2(h, r0))
    if r0.ndim == 0:
        return float(d), float(theta)
    return d, theta


def los_probability(r0, h, env: EnvironmentProfile):
    _, theta = link_geometry(r0, h)
    return 1.0 / (1.0 + env.a * np.exp(-env.b * (np.asarray(theta) - env.a)))


def horizontal_distance_for_elevation(theta_deg: float, h: float) -> float:
    return h / math.tan(math.radians(theta_deg))
