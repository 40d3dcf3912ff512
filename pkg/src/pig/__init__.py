"""pig: certified independent sets in embedded planar graphs.

Extracts an independent set of size at least ceil(3n/13) from any planar
graph given with its rotation system, producing a replayable certificate.
Also houses the exact-rational discharging engines and the configuration
detectors the extraction pipeline is built on.
"""

from .extract import Certificate, IncompletenessDiagnostic, check_certificate, extract
from .generate import GenSpec, generate
from .graph import EmbeddedGraph, parse_rotation_graph
from .mis import alpha, alpha_at_least, mis_exact, verify_independent
from .reduce import Ratio

__all__ = [
    "Certificate",
    "EmbeddedGraph",
    "GenSpec",
    "IncompletenessDiagnostic",
    "Ratio",
    "alpha",
    "alpha_at_least",
    "check_certificate",
    "extract",
    "generate",
    "mis_exact",
    "parse_rotation_graph",
    "verify_independent",
]

__version__ = "0.1.0"
