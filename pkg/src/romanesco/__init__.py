"""Romanesco codes: Clifford-deformed bivariate bicycle codes built from
cellular-automaton stencils, with decoders, distance tools and simulations."""
from .analysis import (
    LogicalBasis,
    WeightProfile,
    code_distance,
    effective_distance,
    exact_distance_low_weight,
    logical_basis,
    sample_logicals,
    v_infinity,
)
from .automaton import CARule, ClassicalCode, build_classical_code, classical_params, enumerate_rules
from .codes import (
    StabilizerCode,
    build_cylinder,
    build_from_polynomials,
    build_plane,
    build_torus,
    clifford_deform,
    rotate_180,
    validate,
)
from .decoders import BpOsdDecoder, HybridDecoder, hybrid_decode, make_decoder
from .io import build_from_spec
from .noise import NoiseModel
from .search import SearchConfig, family_fit, run_search, select_best
from .sim import infinite_bias_mode, poisson_ci, run_memory_experiment, sample_error

BOWTIE = CARule(3, ((1, 0), (1, 1), (2, 1), (0, 2)))

__version__ = "0.1.0"

__all__ = [
    "LogicalBasis",
    "WeightProfile",
    "code_distance",
    "effective_distance",
    "exact_distance_low_weight",
    "logical_basis",
    "sample_logicals",
    "v_infinity",
    "CARule",
    "ClassicalCode",
    "build_classical_code",
    "classical_params",
    "enumerate_rules",
    "StabilizerCode",
    "build_cylinder",
    "build_from_polynomials",
    "build_plane",
    "build_torus",
    "clifford_deform",
    "rotate_180",
    "validate",
    "BpOsdDecoder",
    "HybridDecoder",
    "hybrid_decode",
    "make_decoder",
    "build_from_spec",
    "NoiseModel",
    "SearchConfig",
    "family_fit",
    "run_search",
    "select_best",
    "infinite_bias_mode",
    "poisson_ci",
    "run_memory_experiment",
    "sample_error",
    "BOWTIE",
    "__version__",
]
