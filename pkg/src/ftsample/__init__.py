"""Classical laboratory for Fourier sampling over approximate cyclic domains.

The package computes observation distributions of small superpositions
transformed over exact and oversized domains, mechanically checks the
concentration and mass bounds that make oversized domains usable, and runs
two desk-scale recovery pipelines on top of them: period finding and
hidden linear structure.
"""

from .bounds import (
    BoundReport,
    ThresholdParams,
    amplitude_lower_check,
    closeness_check,
    closeness_threshold,
    concentration_check,
    cross_term_check,
    delta_response,
    is_delta_uniform,
    multidim_concentration_check,
    multidim_cross_term_check,
    multidim_restricted_mass_check,
    partition_delta_uniform,
    phase_sum_check,
    restricted_mass_check,
    signed_mod,
    uniform_mass_check,
)
from .errors import (
    ConfigError,
    DegenerateDistributionError,
    DegenerateInstanceError,
    DomainTooSmallError,
    FTSampleError,
    InvalidSizeError,
    NoSmoothNumberError,
    RecoveryFailedError,
    UndefinedBoundError,
)
from .experiments import ExperimentConfig, RunManifest, emit_figure_data, run, validate_config
from .hidden_linear import (
    HiddenLinearInstance,
    bl_threshold,
    counting_bound_check,
    good_pairs,
    good_triple_mass,
    joint_distribution,
    observe_triple,
    predicted_good_frequency,
    random_hidden_linear_instance,
    recover_ratios,
)
from .numtheory import (
    euler_phi,
    multiplicative_order,
    power_of_two_in_range,
    round_to_fraction,
    smooth_number_in_range,
)
from .periodfind import (
    AffineMod,
    ModularExponentiation,
    PeriodicInstance,
    coset_domain_gap,
    coset_state,
    ideal_sampling_probability,
    random_modexp_instance,
    recover_period,
    run_pipeline,
)
from .sampling import (
    Distribution,
    IndexSet,
    PrimedMap,
    dist_beta,
    dist_gamma,
    l1_distance,
    multidim_dist_beta,
    multidim_dist_gamma,
    round_observation,
    sample,
)
from .transform import (
    MultiSuperposition,
    Superposition,
    dft,
    dft_at,
    dft_chirpz,
    dft_direct,
    embed,
    multidim_dft,
    multidim_dft_at,
)

__version__ = "0.1.0"
