"""Altitude effect on single-sensor P_D: fixed horizontal distance against fixed elevation.

At fixed r0 the higher drone gains LOS probability faster than it loses path gain, so
h = 600 m can beat h = 300 m; at fixed 18 degree elevation the longer link dominates.
"""
import numpy as np

from rssdetect.channel import NetworkConfig, build_interference_model
from rssdetect.detector import roc_curve
from rssdetect.geometry import SUBURBAN, URBAN, horizontal_distance_for_elevation, los_probability

GRID = np.logspace(-3, np.log10(0.5), 6)


def pd_curve(cfg, env, r0):
    m = build_interference_model(cfg, env)
    return np.array([p.p_d for p in roc_curve("single", cfg, env, m, GRID, r0=r0)])


def main():
    cfg = NetworkConfig(lam=1e-4)
    print("P_FA grid:", np.array2string(GRID, precision=3))
    for env in (SUBURBAN, URBAN):
        for label, r600 in (("fixed r0", 923.0), ("fixed theta", horizontal_distance_for_elevation(18.0, 600.0))):
            r300 = 923.0
            p300 = pd_curve(cfg.with_(h=300.0), env, r300)
            p600 = pd_curve(cfg.with_(h=600.0), env, r600)
            print(f"{env.label:9s} {label:11s} P_L(300)={los_probability(r300, 300.0, env):.3f} "
                  f"P_L(600)={los_probability(r600, 600.0, env):.3f}")
            print("   P_D(300) - P_D(600):", np.array2string(p300 - p600, precision=4))


if __name__ == "__main__":
    main()
