"""Rotatable-antenna cell-free downlink: channels, association, boresight optimization."""

from .antenna import directional_gain, smoothed_gain, smoothed_gain_grad
from .association import (
    AssociationMatrix,
    association_distance,
    brute_force_association,
    two_stage_association,
)
from .channel import FadingRealization, channel_coeff, channel_matrix, draw_fading, path_gain
from .experiments import (
    ExperimentConfig,
    TrialRecord,
    empirical_cdf,
    run_monte_carlo,
    run_trial,
    scheme_pointing,
)
from .layout import ScenarioLayout, layout_from_positions, make_layout
from .optimizer import (
    OptimizerConfig,
    linearize_channel,
    optimal_multiplier,
    optimize_pointing,
    project_to_ball,
    quadratic_transform_value,
    solve_subproblem,
    surrogate_objective,
)
from .params import SystemParams, dbm_to_watts
from .rates import RateReport, compute_sinr, conjugate_precoder, rate_report

__version__ = "0.1.0"
