"""RSS-based drone detection in a Poisson field of interferers."""
from .channel import NetworkConfig, build_interference_model
from .detector import EvalMethod, marcum_q1, pd_avg, pd_single, pfa, roc_curve, solve_threshold
from .geometry import SUBURBAN, URBAN, EnvironmentProfile
from .optimizer import critical_density

__all__ = [
    "NetworkConfig", "build_interference_model", "EvalMethod", "marcum_q1", "pd_avg",
    "pd_single", "pfa", "roc_curve", "solve_threshold", "SUBURBAN", "URBAN",
    "EnvironmentProfile", "critical_density",
]
