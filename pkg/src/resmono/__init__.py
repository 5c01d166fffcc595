"""Resource-monotone numerics for correlated catalytic transformations.

Modules
-------
qmat           states, channels, distances, spectral calculus
divergences    sandwiched / Petz / Umegaki / max divergence family
smoothing      smoothed divergences over subnormalized-state balls
monotones      free-set minimizations and the fidelity-of-coherence dual
constructions  hard-to-transform pairs and region classifiers
catalysis      catalyst bounds, the block catalyst, error exponents
cli            batch front-end emitting CSV / JSON
"""

from . import (catalysis, constructions, divergences, monotones, qmat,
               smoothing)
from .qmat import ClassicalDist, DensityOperator, KrausChannel

__all__ = [
    "catalysis", "constructions", "divergences", "monotones", "qmat",
    "smoothing", "ClassicalDist", "DensityOperator", "KrausChannel",
]

__version__ = "0.1.0"
