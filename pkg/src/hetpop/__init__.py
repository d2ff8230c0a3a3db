"""Heterogeneous catastrophe populations: simulation, exact moments and Poisson limits."""
from .distributions import (
    CModel, Constant, PowerLaw, RngStream, Uniform,
    density, mean_inverse, sample_c, sample_geometric, survival_moment,
)
from .moments import (
    SurvivalClass, classify, expected_size, expected_size_uniform,
    growth_ratio, tail_count_bound, variance_size,
)
from .population import SimConfig, Trajectory, alive_set, simulate_forward, simulate_tilde
from .point_process import (
    PointSet, PowerLawBox, UniformBox, count_in_powerlaw_box, count_in_uniform_box,
    independence_counts, intensity_powerlaw_box, intensity_uniform_box, sample_point_set,
)
from .stats import GofReport, MeanCI, mc_mean_ci, poisson_gof, two_sample_ks_discrete
from .baselines import ConstantDeath, FmsConfig, RandomEnv, recurrence_stats, simulate_fms

__version__ = "0.1.0"
