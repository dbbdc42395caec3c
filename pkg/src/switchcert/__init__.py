"""Data-driven stability certificates for constrained switching linear systems.

Workflow: describe a system as a labeled graph with one matrix per label,
observe l-step transitions (simulated or measured), fit node-wise
ellipsoidal norms with the scenario solver, and turn the fitted rate into
a high-confidence upper bound on the constrained joint spectral radius.
Model-based brackets (cycle lower bounds, certified upper bounds) are
included for reference.
"""

from .baselines import (
    BaselineReport,
    arbitrary_reduction_upper,
    baseline_report,
    cycle_lower,
    spectral_radius,
    whitebox_upper,
)
from .certify import BoundReport, continuous_bound, hybrid_bound, noise_adjusted_rate
from .chance import (
    BetaParams,
    inscribed_radius,
    measure_inflation,
    measure_retention,
    reg_inc_beta,
    reg_inc_beta_inv,
    violation_level,
)
from .config import ConfigError, ExperimentConfig, load_experiment, load_system, resolve_system
from .graphs import (
    Edge,
    LabeledGraph,
    LiftedGraph,
    Word,
    count_words,
    cycles_up_to,
    flower,
    language,
    product_lift,
)
from .ncs import ncs_example
from .sampling import (
    ContinuousSamples,
    HybridSamples,
    SamplingConfig,
    sample_continuous,
    sample_hybrid,
)
from .solver import (
    ConstraintRows,
    ScenarioSolution,
    SolverTolerances,
    UnboundedGrowthError,
    constraint_rows,
    feasibility,
    solve_continuous,
    solve_hybrid,
    solve_rows,
)
from .systems import LiftedSystem, SwitchedSystem, build_lift, simulate, step, switched_system
from .experiments import run_baseline, run_cell, run_config, run_experiment

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
