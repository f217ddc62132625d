"""Willed distortion of choice distributions, its realization as directed
quantum-measurement collapse, and statistical detection of the resulting
deviations from squared-amplitude sampling statistics."""

from .agents import AgentProfile, agent_unpredictability, archetype, choose
from .collapse import (
    AmplitudeState,
    CollapseOutcome,
    PovmSet,
    build_povm,
    check_completeness,
    collapse,
    outcome_distribution,
    prepare_state,
)
from .detect import (
    NoiseLevel,
    TestReport,
    TrialCounts,
    apply_noise,
    chebyshev_bound,
    chi_squared_test,
    detection_power,
    lln_concentration,
    simulate_trials,
)
from .distributions import (
    CERTAINTY_INCREASING,
    STATIONARY,
    UNCERTAINTY_INCREASING,
    ChoiceSpace,
    ProbabilityVector,
    WillStrength,
    classify_regime,
    entropy_gradient,
    exercise_will,
    is_pure,
    kl_divergence,
    make_distribution,
    total_variation,
    uniform_distribution,
    unpredictability,
)
from .seeding import derive_seed, make_rng

__version__ = "0.1.0"

__all__ = [
    "AgentProfile",
    "AmplitudeState",
    "CERTAINTY_INCREASING",
    "ChoiceSpace",
    "CollapseOutcome",
    "NoiseLevel",
    "PovmSet",
    "ProbabilityVector",
    "STATIONARY",
    "TestReport",
    "TrialCounts",
    "UNCERTAINTY_INCREASING",
    "WillStrength",
    "agent_unpredictability",
    "apply_noise",
    "archetype",
    "build_povm",
    "chebyshev_bound",
    "check_completeness",
    "chi_squared_test",
    "choose",
    "classify_regime",
    "collapse",
    "derive_seed",
    "detection_power",
    "entropy_gradient",
    "exercise_will",
    "is_pure",
    "kl_divergence",
    "lln_concentration",
    "make_distribution",
    "make_rng",
    "outcome_distribution",
    "prepare_state",
    "simulate_trials",
    "total_variation",
    "uniform_distribution",
    "unpredictability",
]
