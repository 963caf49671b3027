from .aberth import AberthConfig, Root, RootSet, aberth_roots, poly_roots, ring_seeds
from .bigcomplex import PRECISION_LADDER, BigComplex, big, precision, tolerance
from .factored import ProductPowerSum, single_member
from .polynomial import ComplexPoly, X

__all__ = [
    "AberthConfig",
    "BigComplex",
    "ComplexPoly",
    "PRECISION_LADDER",
    "ProductPowerSum",
    "Root",
    "RootSet",
    "X",
    "aberth_roots",
    "big",
    "poly_roots",
    "precision",
    "ring_seeds",
    "single_member",
    "tolerance",
]
