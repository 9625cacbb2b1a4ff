"""Information measures, divergence expansions and reference-function metrics.

The package works on dense discrete joint distributions: subset entropies
and interaction informations related by lattice inversion, the
degree-ordered expansion of the Kullback-Leibler divergence with its
truncation-induced factorized approximations, a family of distances defined
by a reference distribution (with Gaussian, point and Poisson closed forms),
and mutual-information graph distances with a spanning-forest factorizer.
"""

from .distribution import (
    ConditionalTable,
    DatasetTable,
    JointDistribution,
    Schema,
    conditional,
    estimate_joint,
    load_dataset,
    marginal,
    normalize,
    product,
    uniform,
    write_samples,
)
from .errors import (
    DomainError,
    EmptyDataError,
    IncompleteProfileError,
    InfodistError,
    ParseError,
    SchemaError,
    UndefinedApproximationError,
    UndefinedDistanceError,
)
from .expansion import (
    DeltaReport,
    ExpansionReport,
    InfiniteDivergence,
    TruncationDivergence,
    TruncationFamily,
    convergence_profile,
    cross_entropy,
    delta_relation,
    expand_divergence,
    kl_divergence,
    truncated_approximation,
    truncation_coefficients,
    truncation_distance,
    truncation_divergence,
)
from .graphs import (
    DualPathReport,
    WeightedGraph,
    chowliu_tree,
    dual_path_report,
    edge_contributions,
    graph_distance_direct,
    graph_distance_mi,
    graph_distribution,
    mi_weighted_graph,
)
from .lattice import (
    InfoProfile,
    OmegaDecomposition,
    compute_profile,
    conditional_interaction,
    entropy,
    entropy_from_interactions,
    interaction_information,
    interaction_recursion_gap,
    invert_profile,
    multi_information,
    mutual_information,
    omega_decomposition,
)
from .serialize import (
    contributions_table,
    convergence_table,
    distance_doc,
    distribution_doc,
    dual_path_doc,
    emit_document,
    expansion_doc,
    expansion_table,
    graph_doc,
    parse_document,
    profile_doc,
    profile_table,
    read_distribution,
    read_graph,
    truncation_doc,
)
from .metrics import (
    DiracRef,
    DistanceResult,
    EmpiricalRef,
    GaussianParams,
    GaussianRef,
    PoissonRef,
    PseudometricWitness,
    ReferenceSpec,
    SearchInterval,
    UniformRef,
    dirac_distance,
    find_pseudometric_witness,
    gaussian_distance,
    independence_distance,
    independence_distance_sides,
    metric_distance,
    poisson_distance,
    reference_distance,
    surprisal_coordinates,
    uniform_distance,
)

__version__ = "0.1.0"

__all__ = [
    "Schema",
    "JointDistribution",
    "DatasetTable",
    "ConditionalTable",
    "load_dataset",
    "write_samples",
    "estimate_joint",
    "marginal",
    "conditional",
    "product",
    "uniform",
    "normalize",
    "entropy",
    "interaction_information",
    "mutual_information",
    "conditional_interaction",
    "interaction_recursion_gap",
    "multi_information",
    "omega_decomposition",
    "OmegaDecomposition",
    "InfoProfile",
    "compute_profile",
    "invert_profile",
    "entropy_from_interactions",
    "cross_entropy",
    "kl_divergence",
    "expand_divergence",
    "ExpansionReport",
    "InfiniteDivergence",
    "truncation_coefficients",
    "truncated_approximation",
    "TruncationFamily",
    "truncation_divergence",
    "TruncationDivergence",
    "convergence_profile",
    "truncation_distance",
    "delta_relation",
    "DeltaReport",
    "DistanceResult",
    "GaussianParams",
    "ReferenceSpec",
    "EmpiricalRef",
    "UniformRef",
    "GaussianRef",
    "DiracRef",
    "PoissonRef",
    "reference_distance",
    "uniform_distance",
    "gaussian_distance",
    "dirac_distance",
    "surprisal_coordinates",
    "poisson_distance",
    "independence_distance",
    "independence_distance_sides",
    "metric_distance",
    "SearchInterval",
    "PseudometricWitness",
    "find_pseudometric_witness",
    "WeightedGraph",
    "mi_weighted_graph",
    "chowliu_tree",
    "graph_distribution",
    "graph_distance_mi",
    "graph_distance_direct",
    "edge_contributions",
    "dual_path_report",
    "DualPathReport",
    "emit_document",
    "parse_document",
    "distribution_doc",
    "read_distribution",
    "profile_doc",
    "profile_table",
    "expansion_doc",
    "expansion_table",
    "truncation_doc",
    "convergence_table",
    "distance_doc",
    "graph_doc",
    "read_graph",
    "dual_path_doc",
    "contributions_table",
    "InfodistError",
    "SchemaError",
    "DomainError",
    "ParseError",
    "EmptyDataError",
    "IncompleteProfileError",
    "UndefinedApproximationError",
    "UndefinedDistanceError",
]
