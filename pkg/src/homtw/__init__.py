"""Graph homomorphisms parameterized by treewidth.

Exact solvers (backtracking and tree decomposition DP), a dispatch layer
over components and direct-product factors, cores, projectivity and the
edge gadgets used in lower-bound reductions.
"""
from .algebra import (Factorization, ProjectivityReport, decomposable_nonprojective_witness,
                      factorize_prime, is_indecomposable, is_projective, truly_projective_check,
                      verify_factorization)
from .budget import Budget
from .cores import CoreCertificate, core_of, hom_equivalent, incomparable, is_core
from .decomp import (NiceDecomposition, TreeDecomposition, heuristic_decomposition, to_nice,
                     validate)
from .dp import hom_dp
from .errors import (DecompositionError, GraphError, HomtwError, Inconclusive, ParseError,
                     PreconditionError, VertexLimitError)
from .gadgets import (EdgeGadget, build_nonprojective_gadget, build_projective_gadget,
                      reduce_kcoloring, verify_gadget)
from .graph import Graph, build_graph, direct_product, disjoint_union, is_homomorphism
from .hom import HomQuery, HomResult, constructible_set, count_homs, find_hom, hom_backtrack
from .named import named_graph
from .solve import hom_solve

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "CoreCertificate",
    "DecompositionError",
    "EdgeGadget",
    "Factorization",
    "Graph",
    "GraphError",
    "HomQuery",
    "HomResult",
    "HomtwError",
    "Inconclusive",
    "NiceDecomposition",
    "ParseError",
    "PreconditionError",
    "ProjectivityReport",
    "TreeDecomposition",
    "VertexLimitError",
    "build_graph",
    "build_nonprojective_gadget",
    "build_projective_gadget",
    "constructible_set",
    "core_of",
    "count_homs",
    "decomposable_nonprojective_witness",
    "direct_product",
    "disjoint_union",
    "factorize_prime",
    "find_hom",
    "heuristic_decomposition",
    "hom_backtrack",
    "hom_dp",
    "hom_equivalent",
    "hom_solve",
    "incomparable",
    "is_core",
    "is_homomorphism",
    "is_indecomposable",
    "is_projective",
    "named_graph",
    "reduce_kcoloring",
    "to_nice",
    "truly_projective_check",
    "validate",
    "verify_factorization",
    "verify_gadget",
]
