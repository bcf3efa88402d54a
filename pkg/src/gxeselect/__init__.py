"""Semi-parametric Bayesian variable selection for gene-environment interactions.

A partially linear varying-coefficient model fit by an exact Gibbs sampler
with spike-and-slab priors on individual and group levels, plus simulation
designs, selection rules, scoring metrics and convergence diagnostics.
"""

from .errors import ConfigError, ConvergenceError, DataError, NumericalError
from .gibbs import (
    ChainOutput,
    ChainSettings,
    MethodVariant,
    concat_chains,
    geweke_prior_check,
    run_chain,
)
from .model import (
    DesignCache,
    GxEDataset,
    Hyperparameters,
    ModelState,
    Residual,
    assemble_designs,
    assemble_mean,
    log_likelihood,
    read_dataset_csv,
    residual_exclude,
    write_dataset_csv,
)
from .rng import (
    DEFAULT_SEED,
    RngStream,
    make_generator,
    sample_bernoulli,
    sample_beta,
    sample_gamma,
    sample_inverse_gamma,
    sample_inverse_gaussian,
    sample_mvn,
)
from .splines import (
    BasisBlock,
    SplineConfig,
    build_knot_vector,
    change_of_basis,
    eval_raw_basis,
    interaction_block,
    linear_basis_block,
    raw_basis_matrix,
)
from .inference import (
    CurveGrid,
    PointEstimates,
    PsrfReport,
    SelectionReport,
    ci_select,
    inclusion_probabilities,
    mpm_select,
    psrf,
    reconstruct_beta,
    select,
)
from .metrics import (
    IdentificationCounts,
    ReplicateScore,
    aggregate_scores,
    identification_counts,
    imse,
    prediction_error,
    score_fit,
    total_squared_error,
)
from .simulate import (
    LdSpec,
    TruthSpec,
    example_dataset,
    gen_example1,
    gen_example2,
    gen_example3,
    gen_from_genotype_file,
    read_truth_csv,
    trichotomize,
    write_truth_csv,
)
from .study import (
    FitResult,
    StudyConfig,
    StudyResult,
    benchmark_timings,
    fit_dataset,
    run_one_replicate,
    run_replicates,
    spline_for_data,
)

__version__ = "0.1.0"
