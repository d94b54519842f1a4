"""Why the ROC barely moves with density at r0 = 923 m: compare the drone and interference scales.

Prints the drone's received power, the interference mixing scale gamma_G and P_D at
P_FA = 0.1 for each density.  Interferer amplitude loss uses k^{b_I} against the drone's k,
so at 5.8 GHz the aggregate interference sits many orders of magnitude below the drone.
"""
import numpy as np

from rssdetect.channel import NetworkConfig, amplitude_constant, build_interference_model
from rssdetect.detector import pd_single, solve_threshold
from rssdetect.geometry import SUBURBAN, URBAN, link_geometry


def main():
    base = NetworkConfig()
    d, theta = link_geometry(923.0, base.h)
    rx = amplitude_constant(base.f_c) ** 2 * base.p_d / d**2
    print(f"d = {d:.1f} m, theta = {theta:.2f} deg, drone received power k^2 P_d / d^2 = {rx:.3e} W")
    for env in (SUBURBAN, URBAN):
        print(env.label, f"LOS mean power {rx / env.eta_los:.3e}, NLOS diffuse power {rx / env.eta_nlos:.3e}")
        for lam in (1e-6, 1e-5, 1e-4, 1e-3):
            cfg = base.with_(lam=lam)
            m = build_interference_model(cfg, env)
            g = solve_threshold(0.1, m, cfg.n0)
            print(f"  lambda={lam:.0e}  gamma_G={m.gamma_g:.3e}  threshold={g:.3e}  "
                  f"P_D={pd_single(923.0, g, cfg, env, m):.6f}")
    print("noise n0 =", base.n0, "; varying n0 changes the low-density end:")
    for n0 in (1e-21, 1e-17, 1e-15):
        cfg = base.with_(n0=n0, lam=1e-6)
        m = build_interference_model(cfg, SUBURBAN)
        g = solve_threshold(0.1, m, n0)
        print(f"  n0={n0:.0e}  P_D(lambda=1e-6)={pd_single(923.0, g, cfg, SUBURBAN, m):.6f}")


if __name__ == "__main__":
    main()
