"""Single-vertex-fault-tolerant additive spanners and their exhaustive verifiers."""
from .errors import FTSpannerError, NotASubgraph, ParseError, PerturbationTie
from .graph import Graph, PerturbedWeights, assign_perturbation
from .spanners import BETA, KINDS, build, build_2add, build_6add, build_4sw, build_8sw, build_ftmbfs_spanner
from .sourcewise import build_H4, build_H8
from .verify import check_ftmbfs_exact, check_spanner, check_stretch, check_structural, size_report

__version__ = "0.1.0"

__all__ = [
    "BETA", "KINDS", "FTSpannerError", "Graph", "NotASubgraph", "ParseError", "PerturbationTie",
    "PerturbedWeights", "assign_perturbation", "build", "build_2add", "build_4sw", "build_6add",
    "build_8sw", "build_H4", "build_H8", "build_ftmbfs_spanner", "check_ftmbfs_exact",
    "check_spanner", "check_stretch", "check_structural", "size_report",
]
