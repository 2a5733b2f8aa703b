"""frontlab: numerical laboratory for bistable reaction-diffusion fronts.

The package computes travelling-wave profiles and speeds by shooting,
evolves step-like data with a semi-implicit scheme in lab or comoving
frames, audits exponentially weighted energy inequalities along runs, and
packages the whole thing behind a claim-checking command line.
"""

from .potentials import (
    AssumptionReport,
    DerivedConstants,
    Potential,
    ThresholdBand,
    cubic_potential,
    derive_constants,
    make_potential,
    select_epsilon,
    validate_assumptions,
)
from .evolution import (
    BlowUpError,
    Field,
    FrontMarginError,
    Grid1D,
    SimulationAborted,
    Snapshot,
    Stepper,
    Trajectory,
    make_initial_data,
    simulate,
    step,
)
from .energetics import (
    AnchoredValue,
    EnergyAudit,
    TailNotDecayedError,
    audit_inequalities,
    dissipation_identity_residual,
    dissipation_weighted,
    energy_weighted,
    truncated_energy,
    weighted_tail_poincare,
)
from .front import (
    FrontFrameProfile,
    FrontSeries,
    SpeedEstimate,
    front_profile,
    front_series,
    instantaneous_speed,
    invasion_point,
    second_invasion_point,
    speed_estimates,
    xxcontrol_check,
    xxcontrol_margins,
)
from .wave import (
    DecayRates,
    ShootResult,
    WaveResult,
    decay_rates,
    find_wave_speed,
    speed_identity_check,
    normalize_profile,
    shoot,
)
from .verify import (
    ClaimReport,
    ClaimSpec,
    ExperimentReport,
    ExperimentSpec,
    PotentialConfig,
    default_suite,
    filter_suite,
    run_experiment,
    run_suite,
)
from .cli import RunConfig, main

__version__ = "0.1.0"
