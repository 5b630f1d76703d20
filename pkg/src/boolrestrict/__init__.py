"""Fourier analysis of bounded functions on the hypercube under random restrictions."""
from .errors import (
    CapacityError,
    DomainError,
    InvalidConfigError,
    InvalidRestrictionError,
    PreconditionError,
)
from .families import FamilySpec, generate, parse_family
from .noise import interpolation_nodes, procedure_one, sample_noisy
from .partition import balanced_partition
from .querytree import greedy_influence_tree, max_influence, tree_error
from .restrictions import Restriction, RestrictionDistribution, restrict
from .sensitivity import block_sensitivity, junta_distance, influential_set
from .spectral import (
    FourierExpansion,
    TruthTable,
    evaluate,
    influence,
    influences,
    noise_operator,
    variance,
    wht_forward,
    wht_inverse,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "DomainError", "InvalidConfigError", "InvalidRestrictionError",
    "PreconditionError", "FamilySpec", "generate", "parse_family", "interpolation_nodes",
    "procedure_one", "sample_noisy", "balanced_partition", "greedy_influence_tree",
    "max_influence", "tree_error", "Restriction", "RestrictionDistribution", "restrict",
    "block_sensitivity", "junta_distance", "influential_set", "FourierExpansion",
    "TruthTable", "evaluate", "influence", "influences", "noise_operator", "variance",
    "wht_forward", "wht_inverse",
]
