"""Supersingular isogeny graphs with level structure.

Builds the graphs G_p^(l)(N) whose vertices are supersingular elliptic
curves over F_{p^2} enhanced with a cyclic subgroup of squarefree order N,
and whose edges are degree-l isogenies, then verifies their structural,
spectral, and zeta-function properties.
"""

__version__ = "0.1.0"

from .enhanced import (
    AdmissibilityError,
    EnhancedGraph,
    GraphBuilder,
    check_admissible,
    sigma1,
    vertex_count,
)
from .fields import Field, FieldElement, get_embedding, make_extension_field
from .graph import (
    Graph,
    covering_map,
    euler_characteristic,
    graph_from_enhanced,
    verify_covering,
)
from .spectral import cheeger_constant, ramanujan_report, spectrum
from .supersingular import build_class_table, enumerate_supersingular
from .zeta import ihara_zeta, reciprocity_check

__all__ = [
    "AdmissibilityError",
    "EnhancedGraph",
    "Field",
    "FieldElement",
    "Graph",
    "GraphBuilder",
    "__version__",
    "build_class_table",
    "check_admissible",
    "cheeger_constant",
    "covering_map",
    "enumerate_supersingular",
    "euler_characteristic",
    "get_embedding",
    "graph_from_enhanced",
    "ihara_zeta",
    "make_extension_field",
    "ramanujan_report",
    "reciprocity_check",
    "sigma1",
    "spectrum",
    "vertex_count",
    "verify_covering",
]
