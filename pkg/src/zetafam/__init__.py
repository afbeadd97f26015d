"""Point counts and zeta functions of curves over finite fields, organized
around parametric families with discriminant gates."""

from .ecurve import EllipticCurve, count_naive, schoof_trace
from .family import FamilySpec, discriminant_gate, divisor_gate, parse_family, serialize_family, specialize
from .ff import FieldElement, make_field
from .hyperell import HyperCurve, MumfordDivisor, cantor_add, count_curve_points
from .planecurve import PlaneForm, corrected_smooth_count, count_plane_points, find_singular_points
from .upoly import UPoly
from .zeta import ZetaNumerator, check_weil, counts_from_zeta, zeta_from_counts

__version__ = "0.1.0"

__all__ = [
    "EllipticCurve",
    "FamilySpec",
    "FieldElement",
    "HyperCurve",
    "MumfordDivisor",
    "PlaneForm",
    "UPoly",
    "ZetaNumerator",
    "cantor_add",
    "check_weil",
    "corrected_smooth_count",
    "count_curve_points",
    "count_naive",
    "count_plane_points",
    "counts_from_zeta",
    "discriminant_gate",
    "divisor_gate",
    "find_singular_points",
    "make_field",
    "parse_family",
    "schoof_trace",
    "serialize_family",
    "specialize",
    "zeta_from_counts",
]
