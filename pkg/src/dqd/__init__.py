"""Computational toolkit for dianalytic quadratic differentials.

Flat structures on non-orientable surfaces presented as polygon complexes:
validation and topology, orientation double covers with their deck
involution, the Teichmueller geodesic flow, cylinder / Moebius-band
decompositions of the horizontal and vertical foliations, interval exchange
transformations with flips and their orbit measures, hyperbolic length
bounds, and the builtin genus-4 / genus-9 example families with their
systole certificates.
"""

from .scalars import QSqrt2, SQRT2
from .surface import (
    EdgeRef,
    Gluing,
    GluingMap,
    Polygon,
    Surface,
    Vec,
    classify_topology,
    cut_along,
    euler_characteristic,
    glue_pair,
    total_area,
    transform_polygon,
    validate,
    vertex_classes,
)

__version__ = "0.1.0"
