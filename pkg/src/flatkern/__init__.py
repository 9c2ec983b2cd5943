"""flatkern: exact certificates for cylinder decompositions of translation surfaces."""

from .diagram import (
    Matching,
    Prediagram,
    SeparatrixDiagram,
    are_isomorphic,
    component_type,
    diagram_isomorphic,
    metric_feasible,
)
from .exactalg import (
    QMatrix,
    QuadraticNumber,
    kernel_basis,
    positive_solution,
    qn,
    qspan_dimension,
    rational_closure,
)
from .presets import PresetEntry, list_presets, load_preset
from .prym import PrymInvolution, find_prym_involutions
from .surface import Surface, chain_complex, is_connected_surface, periods, stratum_signature
from .twistspace import (
    DeformationVector,
    ExplicitLocus,
    FullStratum,
    PrymLocus,
    TwistModel,
    has_property_p,
    isoperiodic_twist_space,
    minimal_deformations,
    twist_kernel,
)

__version__ = "0.1.0"

__all__ = [
    "Matching",
    "Prediagram",
    "SeparatrixDiagram",
    "are_isomorphic",
    "component_type",
    "diagram_isomorphic",
    "metric_feasible",
    "QMatrix",
    "QuadraticNumber",
    "kernel_basis",
    "positive_solution",
    "qn",
    "qspan_dimension",
    "rational_closure",
    "PresetEntry",
    "list_presets",
    "load_preset",
    "PrymInvolution",
    "find_prym_involutions",
    "Surface",
    "chain_complex",
    "is_connected_surface",
    "periods",
    "stratum_signature",
    "DeformationVector",
    "ExplicitLocus",
    "FullStratum",
    "PrymLocus",
    "TwistModel",
    "has_property_p",
    "isoperiodic_twist_space",
    "minimal_deformations",
    "twist_kernel",
    "__version__",
]
