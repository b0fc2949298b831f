from fractions import Fraction
from math import isqrt

import pytest

from framecert.operators import (
    OperatorName,
    apply,
    banded_adjoint,
    compose,
    from_finite_matrix,
)
from framecert.realnames import RealName
from framecert.vectors import (
    FiniteVector,
    VectorName,
    sqrt_of_fraction,
    linear_combo,
)


def tol(n):
    return Fraction(1, 2**n)


def approx(x, n):
    return x.approx(n).as_fraction()


def sqrt_oracle(q, bits=60):
    return Fraction(isqrt(Fraction(q).numerator * 4**bits // Fraction(q).denominator), 2**bits)


def benign_upper_row_operator():
    """Columns: col(0) = d0, col(i) = 2^-i d0 + d_i (the a_i = 2^-i instance)."""

    def col(i):
        if i == 0:
            return VectorName.basis(0)
        return VectorName.from_finite(
            FiniteVector([(0, Fraction(1, 2**i)), (i, Fraction(1))])
        )

    return OperatorName(col, Fraction(3))


class TestApply:
    def test_identity(self):
        x = VectorName.from_finite(FiniteVector.parse("0:2 3:-1"))
        y = apply(OperatorName.identity(), x)
        assert y.finite == x.finite

    def test_zero_operator(self):
        y = apply(OperatorName.zero(), VectorName.basis(4))
        assert y.finite == FiniteVector()

    def test_example_matrix_column_action(self):
        U = benign_upper_row_operator()
        y = apply(U, VectorName.basis(1))
        assert y.finite == FiniteVector.parse("0:1/2 1:1")
        assert abs(approx(y.norm, 30) - sqrt_oracle(Fraction(5, 4))) <= 2 * tol(30)

    def test_lazy_input(self):
        # x = geometric vector; identity application preserves coefficients
        x = VectorName(
            lambda i: RealName.from_fraction(Fraction(1, 2 ** (i + 1))),
            sqrt_of_fraction(Fraction(1, 3)),
        )
        y = apply(OperatorName.identity(), x)
        assert abs(approx(y.coeff(2), 25) - Fraction(1, 8)) <= tol(25)
        assert abs(approx(y.norm, 25) - sqrt_oracle(Fraction(1, 3))) <= 2 * tol(25)

    def test_norm_contract(self):
        U = from_finite_matrix([[2, 1], [1, 2]])
        x = VectorName.from_finite(FiniteVector.parse("0:1 1:1"))
        for n in (5, 20):
            assert approx(apply(U, x).norm, n) <= U.norm_bound * approx(
                x.norm, n
            ) + 2 * tol(n)

    def test_linearity_on_finite_vectors(self):
        U = from_finite_matrix([[1, 2], [3, 4]])
        x = VectorName.from_finite(FiniteVector.parse("0:1/2"))
        y = VectorName.from_finite(FiniteVector.parse("1:-2/3"))
        lhs = apply(
            U,
            linear_combo(
                [
                    (RealName.from_fraction(3), x),
                    (RealName.from_fraction(-1), y),
                ]
            ),
        )
        rhs = linear_combo(
            [
                (RealName.from_fraction(3), apply(U, x)),
                (RealName.from_fraction(-1), apply(U, y)),
            ]
        )
        assert lhs.finite == rhs.finite


class TestCompose:
    def test_identity_left(self):
        U = from_finite_matrix([[1, 1], [0, 1]])
        C = compose(OperatorName.identity(), U)
        for k in range(2):
            assert C.col(k).finite == U.col(k).finite

    def test_zero_right(self):
        C = compose(from_finite_matrix([[1, 0], [0, 1]]), OperatorName.zero())
        assert C.col(5).finite == FiniteVector()

    def test_mercedes_frame_operator_matrix(self):
        # synthesis columns {(1,0),(0,1),(1,1)}; S = T T* = [[2,1],[1,2]]
        T = from_finite_matrix([[1, 0, 1], [0, 1, 1]])
        Tstar = from_finite_matrix([[1, 0], [0, 1], [1, 1]])
        S = compose(T, Tstar)
        assert S.col(0).finite == FiniteVector.parse("0:2 1:1")
        assert S.col(1).finite == FiniteVector.parse("0:1 1:2")

    def test_associativity_vs_exact_product(self):
        A = [[1, 2], [0, 1]]
        B = [[2, 0], [1, 1]]
        C = [[1, 1], [1, 0]]

        def matmul(X, Y):
            return [
                [
                    sum(Fraction(X[i][k]) * Fraction(Y[k][j]) for k in range(2))
                    for j in range(2)
                ]
                for i in range(2)
            ]

        lhs = compose(from_finite_matrix(A), compose(from_finite_matrix(B), from_finite_matrix(C)))
        rhs = from_finite_matrix(matmul(matmul(A, B), C))
        for k in range(2):
            for i in range(2):
                got = approx(lhs.col(k).coeff(i), 30)
                assert abs(got - rhs.col(k).coeff(i).exact) <= tol(30)


class TestFromFiniteMatrix:
    def test_identity(self):
        I2 = from_finite_matrix([[1, 0], [0, 1]])
        assert I2.col(0).finite == FiniteVector.parse("0:1")
        assert I2.col(7).finite == FiniteVector()

    def test_frobenius_bound(self):
        U = from_finite_matrix([[2, 1], [1, 2]])
        frob = sqrt_oracle(10)
        assert frob <= U.norm_bound <= frob + tol(20)

    def test_zero_matrix(self):
        Z = from_finite_matrix([[0]])
        assert Z.col(0).finite == FiniteVector()

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            from_finite_matrix([])
        with pytest.raises(ValueError):
            from_finite_matrix([[1], [1, 2]])


class TestBandedAdjoint:
    def test_identity_rows(self):
        A = banded_adjoint(VectorName.basis, Fraction(1))
        assert A.col(3).finite == FiniteVector.parse("3:1")

    def test_benign_first_row(self):
        # rows of the upper-row example: row 0 = (1, 1/2, 1/4, ...), full name
        def rows(n):
            if n == 0:
                return VectorName(
                    lambda i: RealName.from_fraction(Fraction(1, 2**i)),
                    sqrt_of_fraction(Fraction(4, 3)),
                )
            return VectorName.basis(n)

        A = banded_adjoint(rows, Fraction(3))
        col0 = A.col(0)
        assert abs(approx(col0.coeff(2), 30) - Fraction(1, 4)) <= tol(30)
        assert abs(approx(col0.norm, 30) - sqrt_oracle(Fraction(4, 3))) <= 2 * tol(30)
