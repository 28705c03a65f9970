"""equivect: equivariant complex vector bundles over RP^2 and S^2 for finite groups acting through SO(3)."""
from .config import Settings, load_settings
from .errors import EquivectError
from .semigroup import (
    BundleClass,
    ClassificationContext,
    build_constraints,
    build_context,
    classify_bundles,
    direct_sum,
    enumerate_triples,
    hilbert_basis,
    p1_transfer,
)
from .spec_io import GroupSpec, context_from_spec, load_spec

__version__ = "0.1.0"

__all__ = [
    "BundleClass",
    "ClassificationContext",
    "EquivectError",
    "GroupSpec",
    "Settings",
    "build_constraints",
    "build_context",
    "classify_bundles",
    "context_from_spec",
    "direct_sum",
    "enumerate_triples",
    "hilbert_basis",
    "load_settings",
    "load_spec",
    "p1_transfer",
]
