"""Exact computation in generalised Higman-Thompson groups V_r over
block-structured (Brin-like) Cantor algebras."""

from .algebra import (
    AlgebraSpec,
    Block,
    SpecError,
    compute_d,
    is_complete,
    normalize_report,
    parse_spec,
    render_spec,
)
from .terms import (
    Basis,
    Leaf,
    NotBoundedError,
    ResourceCapError,
    TermError,
    contract,
    elementary_core,
    elementary_leq,
    enumerate_bases,
    expand,
    glb,
    is_admissible,
    leq,
    lub,
    max_elementary,
    very_elementary_leq,
)

__all__ = [
    "AlgebraSpec",
    "Block",
    "SpecError",
    "compute_d",
    "is_complete",
    "normalize_report",
    "parse_spec",
    "render_spec",
    "Basis",
    "Leaf",
    "NotBoundedError",
    "ResourceCapError",
    "TermError",
    "contract",
    "elementary_core",
    "elementary_leq",
    "enumerate_bases",
    "expand",
    "glb",
    "is_admissible",
    "leq",
    "lub",
    "max_elementary",
    "very_elementary_leq",
]
