"""Desk-scale p-adic integral geometry in exact arithmetic."""

from .countvol import (
    AlgebraicSet,
    CountConfig,
    CountResult,
    VolumeEstimate,
    count_points_mod,
    estimate_volume,
)
from .igf import (
    LinearSubspace,
    McConfig,
    McReport,
    intersect_linear,
    mc_expected_zeros,
    mc_igf_curve,
    mc_linear_lemma,
)
from .proj import (
    ProjPoint,
    ResidueProjPoint,
    enumerate_proj,
    proj_distance,
    reduce_mod,
    volume_proj_space,
)
from .roots import (
    RootReport,
    UnivariatePoly,
    adaptive_count,
    count_roots_annulus,
    count_roots_p1,
    count_roots_zp,
)
from .sample import (
    DigitStream,
    HaarMatrix,
    RandomPolyModel,
    Stream,
    sample_haar_gl,
    sample_poly,
    sample_zp,
)
from .veronese import VeroneseMap, arc_length, isometry_check, mahler_jacobian_norm
from .zp import PadicMatrix, PadicScalar, PadicVector, mat_det_valuation, padic_norm, wedge_norm

__version__ = "0.1.0"

__all__ = [
    "AlgebraicSet",
    "CountConfig",
    "CountResult",
    "DigitStream",
    "HaarMatrix",
    "LinearSubspace",
    "McConfig",
    "McReport",
    "PadicMatrix",
    "PadicScalar",
    "PadicVector",
    "ProjPoint",
    "RandomPolyModel",
    "ResidueProjPoint",
    "RootReport",
    "Stream",
    "UnivariatePoly",
    "VeroneseMap",
    "VolumeEstimate",
    "adaptive_count",
    "arc_length",
    "count_points_mod",
    "count_roots_annulus",
    "count_roots_p1",
    "count_roots_zp",
    "enumerate_proj",
    "estimate_volume",
    "intersect_linear",
    "isometry_check",
    "mahler_jacobian_norm",
    "mat_det_valuation",
    "mc_expected_zeros",
    "mc_igf_curve",
    "mc_linear_lemma",
    "padic_norm",
    "proj_distance",
    "reduce_mod",
    "sample_haar_gl",
    "sample_poly",
    "sample_zp",
    "volume_proj_space",
    "wedge_norm",
]
