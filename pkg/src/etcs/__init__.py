"""Invariants of G2-manifolds built as extra-twisted connected sums."""
from .lattice import GramMatrix, LatticeSignature, direct_sum, is_even, is_unimodular, signature, standard_lattice
from .configuration import Configuration, configuration_angles, m_rho
from .gluing import GluingData, derive, enumerate_gluings, torus_figure, validate

__version__ = "0.1.0"

__all__ = [
    "Configuration",
    "GluingData",
    "GramMatrix",
    "LatticeSignature",
    "configuration_angles",
    "derive",
    "direct_sum",
    "enumerate_gluings",
    "is_even",
    "is_unimodular",
    "m_rho",
    "signature",
    "standard_lattice",
    "torus_figure",
    "validate",
]
