"""Names of bounded operators on l2, given by their columns.

An operator name is a column oracle (images of the standard basis)
together with a rational upper bound on the operator norm.  Column data
is exactly what computability of a bounded operator provides, and the
norm bound is what lets application absorb input tails.  Adjoints are
never derived automatically; they must be supplied as row data or be
structurally evident (finite matrices).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional, Sequence

from .dyadic import sqrt_upper
from .realnames import RealName, _memoized
from .vectors import (
    FiniteVector,
    VectorName,
    limit_vectors,
    linear_combo,
    truncate,
)


class OperatorName:
    """Column oracle ``k -> VectorName`` plus ``||U|| <= norm_bound``.

    ``support_bound``, when set, bounds the support of every column (and
    hence of every image).
    """

    __slots__ = ("_col", "norm_bound", "support_bound")

    def __init__(
        self,
        col: Callable[[int], VectorName],
        norm_bound: Fraction,
        support_bound: Optional[int] = None,
    ):
        object.__setattr__(self, "_col", _memoized(col))
        object.__setattr__(self, "norm_bound", Fraction(norm_bound))
        object.__setattr__(self, "support_bound", support_bound)
        if self.norm_bound < 0:
            raise ValueError("operator norm bound must be nonnegative")

    def __setattr__(self, name, value):
        raise AttributeError("OperatorName is immutable")

    def col(self, k: int) -> VectorName:
        if k < 0:
            raise ValueError("negative column index")
        return self._col(k)

    @staticmethod
    def identity() -> "OperatorName":
        return OperatorName(VectorName.basis, Fraction(1))

    @staticmethod
    def zero() -> "OperatorName":
        return OperatorName(lambda k: VectorName.zero(), Fraction(0), support_bound=0)


def apply(U: OperatorName, x: VectorName) -> VectorName:
    """Name of Ux; the input tail is truncated under the norm bound."""
    if U.norm_bound == 0:
        return VectorName.zero()

    if x.finite is not None:
        cols = [U.col(i) for i, _ in x.finite.entries]
        if all(c.finite is not None for c in cols):
            acc = FiniteVector()
            for (i, q), c in zip(x.finite.entries, cols):
                acc = acc.add(c.finite.scaled(q))
            return VectorName.from_finite(acc)

    def stage(m: int) -> VectorName:
        eps = Fraction(1, 1 << (m + 1)) / U.norm_bound
        v, _ = truncate(x, eps)
        return linear_combo(
            [(RealName.from_fraction(q), U.col(i)) for i, q in v.entries]
        )

    return limit_vectors(stage, support_bound=U.support_bound)


def compose(U: OperatorName, V: OperatorName) -> OperatorName:
    """Name of UV: columns are U applied to V's columns."""
    return OperatorName(
        lambda k: apply(U, V.col(k)),
        U.norm_bound * V.norm_bound,
        support_bound=U.support_bound,
    )


def from_finite_matrix(rows: Sequence[Sequence[Fraction]]) -> OperatorName:
    """Embed an exact rational matrix; Frobenius norm as the bound."""
    matrix = [[Fraction(q) for q in row] for row in rows]
    if not matrix or not matrix[0]:
        raise ValueError("matrix must be nonempty")
    ncols = len(matrix[0])
    if any(len(row) != ncols for row in matrix):
        raise ValueError("ragged matrix")
    frob_sq = sum((q * q for row in matrix for q in row), Fraction(0))
    columns = [
        VectorName.from_finite(
            FiniteVector([(i, matrix[i][k]) for i in range(len(matrix))])
        )
        for k in range(ncols)
    ]

    def col(k: int) -> VectorName:
        return columns[k] if k < ncols else VectorName.zero()

    return OperatorName(col, sqrt_upper(frob_sq), support_bound=len(matrix))


def banded_adjoint(
    rows: Callable[[int], VectorName], norm_bound: Fraction
) -> OperatorName:
    """Adjoint supplied as row data: col(n) of U* is row n of U."""
    return OperatorName(rows, norm_bound)
