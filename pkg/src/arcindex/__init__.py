"""Grid diagrams, arc-index enumeration and knot-spoke arc presentations."""

from .diagram import PlanarKnotDiagram, from_dt, dt_code, canonical_dt, simplify
from .grid import GridDiagram, to_planar
from .invariants import Fingerprint, fingerprint, jones, alexander, determinant
from .laurent import LaurentPolynomial

__all__ = [
    "PlanarKnotDiagram",
    "GridDiagram",
    "LaurentPolynomial",
    "Fingerprint",
    "from_dt",
    "dt_code",
    "canonical_dt",
    "simplify",
    "to_planar",
    "fingerprint",
    "jones",
    "alexander",
    "determinant",
]

__version__ = "0.1.0"
