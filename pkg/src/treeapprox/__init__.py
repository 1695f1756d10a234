"""Tree approximations of finite metric spaces.

Exact-rational tooling for the dimension-zero constant, dyadic-hierarchy
and sphere-halving spanning trees, optimal-distortion search, and
tree-scaffolded Lipschitz extension.
"""

__version__ = "0.1.0"

from .errors import (
    BoundViolation,
    InfeasibleConstraints,
    InputError,
    NotASpanningTree,
    NotZeroHyperbolic,
    OutOfRange,
    TooLarge,
    TreeApproxError,
)
from .extend import ExtensionResult, ValuedSubset, lipschitz_extend, one_point_extension
from .fixtures import (
    gen_adic,
    gen_binary_leaves,
    gen_cycle,
    gen_example33,
    gen_random_l1,
    gen_random_treeset,
    gen_random_ultrametric,
)
from .gupta import gupta_tree, trace_pairs, verify_gupta_bounds
from .hierarchy import build_hierarchy, nagata_tree, verify_hierarchy_bounds
from .metric import (
    MetricSpace,
    NagataReport,
    chain_components,
    is_ultrametric,
    is_zero_hyperbolic,
    nagata_constant,
    validate_metric,
)
from .rtree import complement_components, component_root, realize_rtree, zero_hyperbolic_fast
from .search import (
    SearchResult,
    enumerate_spanning_trees,
    improve_local,
    min_distortion_bnb,
    min_distortion_exhaustive,
)
from .trees import DistortionReport, WeightedTree, canonical_weights, distortion, make_tree, tree_metric

__all__ = [
    "BoundViolation",
    "DistortionReport",
    "ExtensionResult",
    "InfeasibleConstraints",
    "InputError",
    "MetricSpace",
    "NagataReport",
    "NotASpanningTree",
    "NotZeroHyperbolic",
    "OutOfRange",
    "SearchResult",
    "TooLarge",
    "TreeApproxError",
    "ValuedSubset",
    "WeightedTree",
    "build_hierarchy",
    "canonical_weights",
    "chain_components",
    "complement_components",
    "component_root",
    "distortion",
    "enumerate_spanning_trees",
    "gen_adic",
    "gen_binary_leaves",
    "gen_cycle",
    "gen_example33",
    "gen_random_l1",
    "gen_random_treeset",
    "gen_random_ultrametric",
    "gupta_tree",
    "improve_local",
    "is_ultrametric",
    "is_zero_hyperbolic",
    "lipschitz_extend",
    "make_tree",
    "min_distortion_bnb",
    "min_distortion_exhaustive",
    "nagata_constant",
    "nagata_tree",
    "one_point_extension",
    "realize_rtree",
    "trace_pairs",
    "tree_metric",
    "validate_metric",
    "verify_gupta_bounds",
    "verify_hierarchy_bounds",
    "zero_hyperbolic_fast",
]
