"""Certified-precision frame computations on l2.

Everything is computed through "names": oracles that deliver dyadic
approximations with guaranteed error 2^-n at any requested precision n,
paired with the rational certificates (magnitude bounds, frame bounds,
adjoint rows) that make the moduli locally computable.
"""

from .dyadic import Dyadic
from .realnames import RealName, lift_arith, limit_fast, recip, sqrt_name
from .vectors import (
    FiniteVector,
    VectorName,
    WeakVectorName,
    inner,
    limit_vectors,
    linear_combo,
    strengthen,
    tail_norm,
    truncate,
)
from .operators import OperatorName, apply, banded_adjoint, compose, from_finite_matrix
from .frames import (
    CertifiedFrame,
    Frame,
    FrameAlgorithmResult,
    FrameCoeffName,
    analysis,
    analysis_coeffs,
    bessel_synthesis,
    complete_dual_gram_row,
    frame_algorithm,
    frame_from_analysis,
    frame_from_onb,
    frame_from_operator,
    frame_name_of,
    frame_operator,
    inverse_apply,
    pseudo_inverse,
    range_projection,
    reconstruct,
    synthesis,
    synthesis_operator,
)
from .duality import (
    BesselSequence,
    DualPair,
    DualityReport,
    DualityVerificationError,
    biorthogonal_dual_riesz,
    canonical_dual,
    cross_gram_operator,
    dual_from_bessel,
    dual_from_left_inverse,
    frame_from_coeff_operator,
    verify_duality,
)
from .riesz import (
    RenormedVectorName,
    RieszBasisName,
    renorm_from,
    renorm_to,
    riesz_as_frame,
    riesz_from_matrix,
)
from .oracle import ExactFrame, FrameSolution, NonSpanningError, embed, exact_frame_solve

__all__ = [
    "Dyadic",
    "RealName",
    "lift_arith",
    "limit_fast",
    "recip",
    "sqrt_name",
    "FiniteVector",
    "VectorName",
    "WeakVectorName",
    "inner",
    "limit_vectors",
    "linear_combo",
    "strengthen",
    "tail_norm",
    "truncate",
    "OperatorName",
    "apply",
    "banded_adjoint",
    "compose",
    "from_finite_matrix",
    "CertifiedFrame",
    "Frame",
    "FrameAlgorithmResult",
    "FrameCoeffName",
    "analysis",
    "analysis_coeffs",
    "bessel_synthesis",
    "complete_dual_gram_row",
    "frame_algorithm",
    "frame_from_analysis",
    "frame_from_onb",
    "frame_from_operator",
    "frame_name_of",
    "frame_operator",
    "inverse_apply",
    "pseudo_inverse",
    "range_projection",
    "reconstruct",
    "synthesis",
    "synthesis_operator",
    "BesselSequence",
    "DualPair",
    "DualityReport",
    "DualityVerificationError",
    "biorthogonal_dual_riesz",
    "canonical_dual",
    "cross_gram_operator",
    "dual_from_bessel",
    "dual_from_left_inverse",
    "frame_from_coeff_operator",
    "verify_duality",
    "RenormedVectorName",
    "RieszBasisName",
    "renorm_from",
    "renorm_to",
    "riesz_as_frame",
    "riesz_from_matrix",
    "ExactFrame",
    "FrameSolution",
    "NonSpanningError",
    "embed",
    "exact_frame_solve",
]
