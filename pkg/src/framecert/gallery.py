"""Parametric operator families sitting on the computability boundary.

All of them are driven by a positive sequence (a_i) with a_0 = 1 and
square-sum below 2.  With a norm certificate for (a_i) the induced
frames are fully computable end to end; without one (the Specker-style
instantiation, whose l2 norm is a left-c.e. real) the coefficientwise
data is still available but no analysis certificate can be built — the
constructors that need one reject the input at the type level.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Callable, Optional

from .dyadic import sqrt_upper
from .frames import CertifiedFrame, Frame
from .operators import OperatorName, banded_adjoint
from .realnames import RealName, _memoized, lift_arith
from .vectors import (
    FiniteVector,
    VectorName,
    WeakVectorName,
    linear_combo,
    sqrt_of_fraction,
)

ONE = RealName.from_fraction(1)


class MissingNormCertificateError(ValueError):
    """The construction needs a norm name the generator does not carry."""


class SequenceGen:
    """Positive sequence (a_i), a_0 = 1, with square-sum certificate.

    norm_name (a name of the l2 norm of (a_i)) is present only for
    instances whose norm is actually computable.  When the square sum is
    an exactly known rational, sq_sum_exact holds it and sq_tail(N)
    bounds the tail sum of a_i^2 over i >= N — together they enable a
    closed-form application of the induced frame operator.
    """

    __slots__ = ("_a", "sq_sum_upper", "norm_name", "sq_sum_exact", "sq_tail")

    def __init__(
        self,
        a: Callable[[int], RealName],
        sq_sum_upper: Fraction,
        norm_name: Optional[RealName] = None,
        sq_sum_exact: Optional[Fraction] = None,
        sq_tail: Optional[Callable[[int], Fraction]] = None,
    ):
        object.__setattr__(self, "_a", _memoized(a))
        object.__setattr__(self, "sq_sum_upper", Fraction(sq_sum_upper))
        object.__setattr__(self, "norm_name", norm_name)
        object.__setattr__(self, "sq_sum_exact", sq_sum_exact)
        object.__setattr__(self, "sq_tail", sq_tail)
        if not 0 < self.sq_sum_upper < 2:
            raise ValueError("square-sum bound must lie in (0, 2)")

    def __setattr__(self, name, value):
        raise AttributeError("SequenceGen is immutable")

    def a(self, i: int) -> RealName:
        if i < 0:
            raise ValueError("negative sequence index")
        return self._a(i)


def benign_sequence() -> SequenceGen:
    """Fully computable instance a_i = 2^-i (square sum 4/3)."""
    return SequenceGen(
        lambda i: RealName.from_fraction(Fraction(1, 1 << i)),
        Fraction(4, 3),
        sqrt_of_fraction(Fraction(4, 3)),
        sq_sum_exact=Fraction(4, 3),
        # sum_{i >= N} 4^-i = 4^-N * 4/3
        sq_tail=lambda N: Fraction(4, 3) / (1 << (2 * N)),
    )


def specker_sequence(enumerator: Callable[[int], int]) -> SequenceGen:
    """Norm-free instance from an injective enumeration of a c.e. set.

    a_0 = 1 and a_i^2 = 2^-(w+2) for w = enumerator(i-1), i >= 1.  The
    square sum is at most 1 + sum 2^-(w+2) <= 3/2, but its exact value
    encodes the enumerated set, so no norm name is attached.  Detected
    duplicate enumerations are rejected.
    """
    seen: dict[int, int] = {}
    lock = threading.Lock()

    def a(i: int) -> RealName:
        if i == 0:
            return ONE
        w = enumerator(i - 1)
        if w < 0:
            raise ValueError("enumerator must produce naturals")
        with lock:
            prev = seen.setdefault(w, i)
        if prev != i:
            raise ValueError(f"enumerator repeats value {w}")
        return sqrt_of_fraction(Fraction(1, 1 << (w + 2)))

    return SequenceGen(a, Fraction(3, 2), None)


def parse_enumerator(text: str) -> Callable[[int], int]:
    """Named enumerators usable from spec files: identity, squares."""
    if text == "identity":
        return lambda j: j
    if text == "squares":
        return lambda j: (j + 1) * (j + 1)
    raise ValueError(f"unknown enumerator {text!r}")


def example_upper_row(g: SequenceGen) -> OperatorName:
    """Surjective operator with first row (1, a_1, a_2, ...).

    Columns: col(0) = d_0 and col(i) = a_i d_0 + d_i; every column is a
    finite combination, hence a full name — the operator is computable
    even when the norm of (a_i) is not.
    """

    def col(i: int) -> VectorName:
        if i == 0:
            return VectorName.basis(0)
        return linear_combo(
            [(g.a(i), VectorName.basis(0)), (ONE, VectorName.basis(i))]
        )

    return OperatorName(col, Fraction(3))


def upper_row_analysis_coeff(g: SequenceGen, f: VectorName) -> WeakVectorName:
    """Coefficientwise analysis of the upper-row frame: always available."""

    def coeff(i: int) -> RealName:
        if i == 0:
            return f.coeff(0)
        return lift_arith(
            "add", lift_arith("mul", g.a(i), f.coeff(0)), f.coeff(i)
        )

    return WeakVectorName(coeff, Fraction(3) * f.norm.mag)


def upper_row_frame(g: SequenceGen) -> CertifiedFrame:
    """The upper-row frame with a full analysis certificate.

    Requires g.norm_name: the analysis column at index 0 is the whole
    sequence (a_i), a full name only when its norm is one.  Frame
    bounds: (1 -+ s)^2 for a dyadic upper bound s of ||(a_1, a_2, ...)||,
    from ||U* f|| >= (1 - ||a'||) ||f|| and ||U|| <= 1 + ||a'||.
    """
    if g.norm_name is None:
        raise MissingNormCertificateError(
            "the analysis certificate needs a norm name for (a_i)"
        )
    U = example_upper_row(g)

    s = sqrt_upper(g.sq_sum_upper - 1, bits=10)
    if s >= 1:
        raise ValueError("cannot certify a positive lower frame bound")
    lower = (1 - s) * (1 - s)
    upper = (1 + s) * (1 + s)

    def rows(n: int) -> VectorName:
        if n == 0:
            # row 0 of U is (1, a_1, a_2, ...); its norm is the norm of (a_i)
            return VectorName(lambda i: g.a(i), g.norm_name)
        return VectorName.basis(n)

    analysis_op = banded_adjoint(rows, Fraction(3))
    s_action = _upper_row_s_action(g)
    return CertifiedFrame(
        Frame(U.col, lower, upper), analysis_op, s_action=s_action
    )


def _upper_row_s_action(g: SequenceGen):
    """Closed-form frame-operator application for exactly known sequences.

    With S = U U* and U = I + e_0 a'^T one gets, for finite rational x,
    (Sx)_0 = x_0 * (square sum) + sum_{i>=1} a_i x_i and
    (Sx)_j = a_j x_0 + x_j for j >= 1; only the geometric tail a_j x_0
    needs truncating, bounded via sq_tail.
    """
    if g.sq_sum_exact is None or g.sq_tail is None:
        return None

    def exact(i: int) -> Optional[Fraction]:
        return g.a(i).exact

    if exact(1) is None:
        return None

    def s_action(entries: dict, budget: Fraction) -> dict:
        x0 = entries.get(0, Fraction(0))
        out: dict[int, Fraction] = {}
        head = x0 * g.sq_sum_exact
        for i, q in entries.items():
            if i >= 1:
                head += exact(i) * q
                out[i] = q
        if head != 0:
            out[0] = head
        if x0 != 0:
            N = 1
            goal = budget * budget
            while x0 * x0 * g.sq_tail(N) > goal:
                N *= 2
            for j in range(1, N):
                v = out.get(j, Fraction(0)) + exact(j) * x0
                if v != 0:
                    out[j] = v
                elif j in out:
                    del out[j]
        return {i: q for i, q in out.items() if q != 0}

    return s_action


def lower_column_operator(g: SequenceGen) -> OperatorName:
    """Operator with first column (1, a_1, a_2, ...) and identity beyond.

    col(0) is a full name only with a norm certificate; otherwise the
    constructor rejects, which is exactly the boundary the family marks.
    """
    if g.norm_name is None:
        raise MissingNormCertificateError(
            "column 0 is the sequence (a_i); its name needs the norm"
        )

    def col(i: int) -> VectorName:
        if i == 0:
            return VectorName(lambda n: g.a(n), g.norm_name)
        return VectorName.basis(i)

    return OperatorName(col, Fraction(3))


def lower_column_row_data(g: SequenceGen) -> Callable[[int], RealName]:
    """Coefficientwise data (n, i) -> entry of the lower-column operator.

    Exposed as n -> coeff oracle of column 0; available with or without
    a norm certificate.
    """
    return lambda n: g.a(n)


def coeff_perturbation_rows(g: SequenceGen) -> Callable[[int], VectorName]:
    """Rows of the operator that is the identity except row 1 = (0, 1, a_1, a_2, ...).

    Row 1 is a full name only when g carries a norm certificate; the
    other rows are standard basis vectors.
    """

    def rows(n: int) -> VectorName:
        if n != 1:
            return VectorName.basis(n)
        if g.norm_name is None:
            raise MissingNormCertificateError(
                "row 1 contains the whole sequence (a_i); needs its norm"
            )

        def coeff(i: int) -> RealName:
            if i == 0:
                return RealName.from_fraction(0)
            if i == 1:
                return ONE
            return g.a(i - 1)

        # ||row||^2 = 1 + (||a||^2 - 1) = ||a||^2   (a_0 = 1 replaced by the 1 at index 1)
        return VectorName(coeff, g.norm_name)

    return rows


def toeplitz_reciprocal(g: SequenceGen, i: int) -> RealName:
    """Coefficient i of the reciprocal power series of 1 + a_1 z + a_2 z^2 + ...

    b_0 = 1 and b_i = -(a_i + sum_{j=1}^{i-1} a_j b_{i-j}); the rows of
    the inverse Toeplitz operator are (b_i, ..., b_1, 1).  For geometric
    sequences all b_i with i >= 2 vanish.
    """
    if i < 0:
        raise ValueError("negative index")
    b: list[RealName] = [ONE]
    zero = RealName.from_fraction(0)
    for n in range(1, i + 1):
        acc = g.a(n)
        for j in range(1, n):
            acc = lift_arith("add", acc, lift_arith("mul", g.a(j), b[n - j]))
        b.append(lift_arith("sub", zero, acc))
    return b[i]


def toeplitz_dual_element(g: SequenceGen, i: int) -> VectorName:
    """Row i of the inverse Toeplitz operator: (b_i, ..., b_1, 1, 0, ...).

    Finite support, hence always a full name — even for norm-free
    sequences.  These are the biorthogonal (dual) elements of the
    shifted family g_i = (0, ..., 0, 1, a_1, a_2, ...).
    """
    if i < 0:
        raise ValueError("negative index")
    terms = [(toeplitz_reciprocal(g, i - j), VectorName.basis(j)) for j in range(i)]
    terms.append((ONE, VectorName.basis(i)))
    return linear_combo(terms)


def toeplitz_primal_element(g: SequenceGen, i: int) -> VectorName:
    """g_i = (0, ..., 0, 1, a_1, a_2, ...) starting at index i.

    A full name only with a norm certificate.
    """
    if g.norm_name is None:
        raise MissingNormCertificateError(
            "g_i contains the whole sequence (a_i); needs its norm"
        )

    def coeff(n: int) -> RealName:
        if n < i:
            return RealName.from_fraction(0)
        return g.a(n - i)

    return VectorName(coeff, g.norm_name)


def doubled_onb() -> CertifiedFrame:
    """Each basis vector listed twice: a tight frame with A = B = 2."""

    def elem(k: int) -> VectorName:
        return VectorName.basis(k // 2)

    def col(n: int) -> VectorName:
        return VectorName.from_finite(
            FiniteVector([(2 * n, Fraction(1)), (2 * n + 1, Fraction(1))])
        )

    analysis_op = OperatorName(col, sqrt_upper(Fraction(2)))
    return CertifiedFrame(Frame(elem, 2, 2), analysis_op)
