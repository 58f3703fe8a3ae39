"""Exact total matching toolkit built around constraint-matrix
subdeterminants: maximum-subdeterminant computation and recognition,
structural graph decomposition, total matching solvers, and forest-specific
formulas and bounds."""

from .errors import (BoundExceededError, InputError, PreconditionError,
                     SizeCapError, TotmatchError)
from .graphs import (Element, Graph, classify_paths_and_cycles, components,
                     degree_sequence, edge_element, format_graph, generate,
                     incident, parse_graph, vertex_element)
from .matrices import (ExactMatrix, constraint_matrix, determinant, extract,
                       incidence_matrix, near_pencil)
from .subdet import (ElementColoring, SubdetResult, delta_by_components,
                     max_subdet_brute, max_subdet_forced,
                     max_subdet_principal, verify_result)
from .structure import (Certificate, CycleCertificate, Decomposition,
                        DegreeCertificate, DeltaOutcome, NearPencilCertificate,
                        SubdetCertificate, compute_decomposition,
                        contract_degree2_run, near_pencil_lower_bound,
                        recognize, shrink_to_core, verify_certificate)
from .matching import (PathInstance, TotalMatching, is_total_matching,
                       solve_brute, solve_fpt, solve_paths_dp,
                       total_matching_weight)
from .forests import (DegreeBounds, ForestPair, LTildeMatrix,
                      bipartition_lower_witness, degree_sequence_bounds,
                      delta_forest_formula, l_tilde)

__all__ = [
    "BoundExceededError", "InputError", "PreconditionError", "SizeCapError",
    "TotmatchError", "Element", "Graph", "classify_paths_and_cycles",
    "components", "degree_sequence", "edge_element", "format_graph",
    "generate", "incident", "parse_graph", "vertex_element", "ExactMatrix",
    "constraint_matrix", "determinant", "extract", "incidence_matrix",
    "near_pencil", "ElementColoring", "SubdetResult", "delta_by_components",
    "max_subdet_brute", "max_subdet_forced", "max_subdet_principal",
    "verify_result", "Certificate", "CycleCertificate", "Decomposition",
    "DegreeCertificate", "DeltaOutcome", "NearPencilCertificate",
    "SubdetCertificate", "compute_decomposition", "contract_degree2_run",
    "near_pencil_lower_bound", "recognize", "shrink_to_core",
    "verify_certificate", "PathInstance", "TotalMatching",
    "is_total_matching", "solve_brute", "solve_fpt", "solve_paths_dp",
    "total_matching_weight", "DegreeBounds", "ForestPair", "LTildeMatrix",
    "bipartition_lower_witness", "degree_sequence_bounds",
    "delta_forest_formula", "l_tilde",
]
