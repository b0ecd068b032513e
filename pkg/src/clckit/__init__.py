"""clckit: exact certification of log-concavity for coverage-like set functions.

The toolkit materializes set functions as exact rational tables, certifies
(complete) log-concavity of homogeneous restrictions and homogenizations by
Hessian inertia and indecomposability, verifies and synthesizes two-coverage
and strongly-two-coverage certificates, decomposes joint entropy into
mutual-information weights, checks ultra-log-concavity of level sequences,
and runs the down-up sampling walk with exact mixing diagnostics.
"""

from .setfn import (
    BudgetAdditive,
    Contraction,
    CoverageInstance,
    CoverageWeights,
    LinearFunction,
    MobiusResult,
    PredicateReport,
    SetFunctionTable,
    combine,
    contract,
    homogeneous_restrict,
    level_sequence,
    materialize,
    mobius_coverage_weights,
    predicates,
)
from .matroids import (
    ContractedMatroid,
    ExplicitMatroid,
    GraphicMatroid,
    Matroid,
    ParallelPartition,
    PartitionMatroid,
    UniformMatroid,
    contract_matroid,
    parallel_partition,
    to_setfunction,
    validate_explicit,
)
from .polynomials import (
    HomogenizedPolynomial,
    MultiaffinePolynomial,
    derive,
    evaluate,
    generating_poly,
    homogenize,
    quadratic_hessian,
)
from .logconcave import (
    CertificationReport,
    Inertia,
    MainPSDWitness,
    certify_clc_homogeneous,
    certify_clc_homogenization,
    inertia,
    is_indecomposable,
    mainpsd_witness,
    quadratic_log_concave,
    two_by_two_log_concave,
    ulc_check,
)
from .coverage2 import (
    StrongCertificate,
    TwoCoverageCertificate,
    TwoCoverageWitness,
    search_2cov_feasible,
    synth_2cov_indicator,
    synth_strong_from_parts,
    synth_strong_matroid,
    verify_2cov,
    verify_strong2cov,
)
from .entropy import JointDistribution, cond_entropy, entropy_decomposition, mmi
from .walk import (
    WalkInstance,
    is_irreducible,
    mixing_time_exact,
    sample_chain,
    step,
    transition_matrix,
    walk_instance,
)

__version__ = "0.1.0"
