"""Dual frames: canonical, parametrized, and verified.

The canonical dual (S^-1 f_k) is computable from an analysis certificate;
every other computable dual arises from it by perturbing with a Bessel
sequence (h_k), or equivalently as the columns of a left inverse of the
analysis operator.  Hypotheses such as "V is a left inverse" are not
decidable, so they are checked on finite built-in test sets and the
results are labelled accordingly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional, Sequence

from .dyadic import clog2, sqrt_upper
from .frames import (
    CertifiedFrame,
    Frame,
    analysis,
    bessel_synthesis,
    inverse_apply,
    synthesis,
)
from .operators import OperatorName, apply
from .realnames import RealName, _memoized, lift_arith
from .vectors import FiniteVector, VectorName, inner, linear_combo


class DualityVerificationError(ValueError):
    """A claimed duality property failed on a built-in test vector."""


class BesselSequence:
    """Sequence oracle with a rational Bessel bound certificate."""

    __slots__ = ("_elem", "bessel_bound")

    def __init__(self, elem: Callable[[int], VectorName], bessel_bound):
        object.__setattr__(self, "_elem", _memoized(elem))
        object.__setattr__(self, "bessel_bound", Fraction(bessel_bound))
        if self.bessel_bound < 0:
            raise ValueError("Bessel bound must be nonnegative")

    def __setattr__(self, name, value):
        raise AttributeError("BesselSequence is immutable")

    def elem(self, k: int) -> VectorName:
        if k < 0:
            raise ValueError("negative sequence index")
        return self._elem(k)

    @staticmethod
    def zero() -> "BesselSequence":
        return BesselSequence(lambda k: VectorName.zero(), Fraction(0))


class DualPair:
    """A frame together with one of its dual frames."""

    __slots__ = ("primal", "dual")

    def __init__(self, primal: CertifiedFrame, dual: Frame):
        object.__setattr__(self, "primal", primal)
        object.__setattr__(self, "dual", dual)

    def __setattr__(self, name, value):
        raise AttributeError("DualPair is immutable")


class DualityReport:
    """Residual bounds of f - sum_k <f, g_k> f_k over a test set."""

    __slots__ = ("passed", "residual_bounds", "worst", "tolerance")

    def __init__(self, passed, residual_bounds, worst, tolerance):
        object.__setattr__(self, "passed", passed)
        object.__setattr__(self, "residual_bounds", tuple(residual_bounds))
        object.__setattr__(self, "worst", worst)
        object.__setattr__(self, "tolerance", tolerance)

    def __setattr__(self, name, value):
        raise AttributeError("DualityReport is immutable")


def canonical_dual(CF: CertifiedFrame) -> CertifiedFrame:
    """The canonical dual (S^-1 f_k), certified with bounds (1/B, 1/A).

    The dual's analysis operator is T* S^-1: its column n is the primal
    analysis image of S^-1 e_n.
    """
    A, B = CF.lower, CF.upper

    if CF.finite_section is not None:
        from .oracle import ExactFrame, exact_frame_solve, embed

        sol = exact_frame_solve(CF.finite_section)
        dual_section = ExactFrame(sol.dual)
        K, d = len(dual_section), dual_section.d
        elements = [
            VectorName.from_finite(
                FiniteVector([(i, q) for i, q in enumerate(v) if q != 0])
            )
            for v in dual_section.vectors
        ]

        def elem(k: int) -> VectorName:
            return elements[k] if k < K else VectorName.zero()

        def col(n: int) -> VectorName:
            if n >= d:
                return VectorName.zero()
            return VectorName.from_finite(
                FiniteVector(
                    [
                        (k, sol.dual[k][n])
                        for k in range(K)
                        if sol.dual[k][n] != 0
                    ]
                )
            )

        analysis_op = OperatorName(
            col, sqrt_upper(1 / A), support_bound=K
        )
        return CertifiedFrame(
            Frame(elem, 1 / B, 1 / A), analysis_op, finite_section=dual_section
        )

    def elem(k: int) -> VectorName:
        return inverse_apply(CF, CF.elem(k))

    def col(n: int) -> VectorName:
        return analysis(CF, inverse_apply(CF, VectorName.basis(n)))

    analysis_op = OperatorName(col, sqrt_upper(B) / A)
    return CertifiedFrame(Frame(elem, 1 / B, 1 / A), analysis_op)


_BUILTIN_TESTS = (
    FiniteVector.parse("0:1"),
    FiniteVector.parse("1:1"),
    FiniteVector.parse("0:1 1:-2"),
    FiniteVector.parse("0:1/3 2:1"),
)


def dual_from_left_inverse(
    CF: CertifiedFrame,
    V: OperatorName,
    tol: Fraction = Fraction(1, 2**30),
) -> DualPair:
    """Dual (V delta_k) from a certified left inverse V of the analysis operator.

    Left-inverse-ness is undecidable; V T* = I is checked on built-in
    test vectors and a failure raises DualityVerificationError.
    """
    tol = Fraction(tol)
    p = max(2, clog2(4 / tol))
    tests = _BUILTIN_TESTS
    if CF.finite_section is not None:
        # keep only coordinates inside the span of the embedded frame
        d = CF.finite_section.d
        tests = tuple(
            FiniteVector([(i, q) for i, q in t.entries if i < d])
            for t in _BUILTIN_TESTS
        )
    for t in tests:
        f = VectorName.from_finite(t)
        back = apply(V, analysis(CF, f))
        resid = linear_combo(
            [
                (RealName.from_fraction(1), f),
                (RealName.from_fraction(-1), back),
            ]
        )
        bound = resid.norm.approx(p).as_fraction() + Fraction(1, 1 << p)
        if bound > tol:
            raise DualityVerificationError(
                f"V is not a left inverse on {t.format()!r}: "
                f"residual bound {bound} > {tol}"
            )
    lower = 1 / CF.upper
    upper = max(V.norm_bound * V.norm_bound, lower)
    return DualPair(CF, Frame(V.col, lower, upper))


def dual_from_bessel(CF: CertifiedFrame, h: BesselSequence) -> DualPair:
    """The dual family g_k = S^-1 f_k + h_k - sum_j <S^-1 f_k, f_j> h_j.

    Every computable dual of the frame arises this way from some Bessel
    sequence; h = 0 gives back the canonical dual.
    """
    A, B = CF.lower, CF.upper
    tilde = canonical_dual(CF)

    def elem(k: int) -> VectorName:
        fk_dual = tilde.elem(k)
        row = analysis(CF, fk_dual)
        corr = bessel_synthesis(h.elem, h.bessel_bound, row)
        return linear_combo(
            [
                (RealName.from_fraction(1), fk_dual),
                (RealName.from_fraction(1), h.elem(k)),
                (RealName.from_fraction(-1), corr),
            ]
        )

    # ||g_k|| <= 1/sqrt(A) + sqrt(D) (1 + sqrt(B/A)) gives the upper bound
    sqD = sqrt_upper(h.bessel_bound)
    u = sqrt_upper(1 / A) + sqD * (1 + sqrt_upper(B / A))
    upper = max(Fraction(u * u), 1 / B)
    return DualPair(CF, Frame(elem, 1 / B, upper))


def verify_duality(
    pair: DualPair,
    tests: Sequence[FiniteVector],
    tol: Fraction = Fraction(1, 2**30),
) -> DualityReport:
    """Bound ||f - sum_k <f, g_k> f_k|| for each test f against tol.

    Partial sums over increasing k-ranges; a test passes as soon as some
    range certifies a residual bound at most tol.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    p = max(2, clog2(4 / tol))
    if pair.primal.finite_section is not None:
        caps = [len(pair.primal.finite_section)]
    else:
        caps = [4, 16, 64]

    bounds = []
    for t in tests:
        f = VectorName.from_finite(t)
        best = None
        for N in caps:
            s = linear_combo(
                [
                    (inner(f, pair.dual.elem(k)), pair.primal.elem(k))
                    for k in range(N)
                ]
            )
            resid = linear_combo(
                [
                    (RealName.from_fraction(1), f),
                    (RealName.from_fraction(-1), s),
                ]
            )
            bound = resid.norm.approx(p).as_fraction() + Fraction(1, 1 << p)
            best = bound if best is None else min(best, bound)
            if best <= tol:
                break
        bounds.append(best)

    worst = max(bounds) if bounds else Fraction(0)
    return DualityReport(all(b <= tol for b in bounds), bounds, worst, tol)


def cross_gram_operator(
    F: CertifiedFrame, Phi: CertifiedFrame, s: Fraction
) -> OperatorName:
    """Operator on l2 with entries u_{lk} = <phi_l, S^-1 f_k>.

    s is a caller-certified rational upper bound on the operator norm.
    """
    s = Fraction(s)
    if s <= 0:
        raise ValueError("norm bound must be positive")

    tilde = canonical_dual(F)

    def col(k: int) -> VectorName:
        return analysis(Phi, tilde.elem(k))

    support = None
    if Phi.finite_section is not None:
        support = len(Phi.finite_section)
    return OperatorName(col, s, support_bound=support)


def frame_from_coeff_operator(
    F: CertifiedFrame,
    U_adjoint_rows: Callable[[int], VectorName],
    lower: Fraction,
    upper: Fraction,
) -> Frame:
    """Frame (phi_n) with phi_n = sum_k u_{nk} f_k from the rows of U*.

    The rows must be full l2 names; the frame bounds of (phi_n) are the
    caller's certificate.
    """
    rows = _memoized(U_adjoint_rows)
    return Frame(lambda n: synthesis(F.frame, rows(n)), lower, upper)


def biorthogonal_dual_riesz(R) -> Callable[[int], VectorName]:
    """The unique biorthogonal family of a Riesz basis (x_k) = (T e_k).

    g_k = (T^-1)* e_k = S^-1 x_k, so the family is the canonical dual of
    the basis viewed as a frame.
    """
    from .riesz import riesz_as_frame

    dual = canonical_dual(riesz_as_frame(R))
    return dual.elem
