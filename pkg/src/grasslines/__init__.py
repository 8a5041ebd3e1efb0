"""Exact computations on codimension-2 linear sections of G(1,4) and G(1,5).

The package classifies the automorphism orbits of these sections, decomposes the
variety Z_x of lines through a point, and evaluates ch_2 on a plane of lines.
"""

__version__ = "0.1.0"

from .errors import GeometryError, InvariantViolation, IrrationalRootError, NotGeneralError, NotMemberError
from .pencil import AntisymPencil, g14_pencil, g15_pencil
from .section_model import OrbitLabel, SectionPoint, SectionSpace, classify_orbit, sample_orbit
from .lines_solver import ZxReport, decompose
from .fano_check import corollary_check

__all__ = [
    "AntisymPencil",
    "GeometryError",
    "InvariantViolation",
    "IrrationalRootError",
    "NotGeneralError",
    "NotMemberError",
    "OrbitLabel",
    "SectionPoint",
    "SectionSpace",
    "ZxReport",
    "classify_orbit",
    "corollary_check",
    "decompose",
    "g14_pencil",
    "g15_pencil",
    "sample_orbit",
]
