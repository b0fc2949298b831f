"""Property suites run against a loaded frame: duality, projection,
Gram completion, and iteration-rate checks.

Each suite produces a deterministic report of labelled residual bounds;
finite frames are additionally checked against the exact rational
ground truth.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, log2
from typing import Optional

from .dyadic import clog2
from .duality import DualPair, canonical_dual, verify_duality
from .frames import (
    CertifiedFrame,
    analysis,
    complete_dual_gram_row,
    frame_algorithm,
    inverse_apply,
    range_projection,
)
from .operators import apply
from .realnames import RealName
from .vectors import FiniteVector, VectorName, inner, linear_combo

DEFAULT_TOL = Fraction(1, 2**30)


class SuiteReport:
    """Outcome of one suite: labelled residual bounds and a verdict."""

    __slots__ = ("suite", "passed", "lines", "worst")

    def __init__(self, suite, passed, lines, worst):
        object.__setattr__(self, "suite", suite)
        object.__setattr__(self, "passed", passed)
        object.__setattr__(self, "lines", tuple(lines))
        object.__setattr__(self, "worst", worst)

    def __setattr__(self, name, value):
        raise AttributeError("SuiteReport is immutable")


def _report(suite, lines, tol):
    worst = max((r for _, r, _ in lines), default=Fraction(0))
    return SuiteReport(suite, all(ok for _, _, ok in lines), lines, worst)


def _bound(name: RealName, p: int) -> Fraction:
    return name.approx(p).as_fraction() + Fraction(1, 1 << p)


def _test_vectors(CF: CertifiedFrame, count: int = 4) -> list[FiniteVector]:
    """Deterministic small test vectors inside the frame's span."""
    d = None
    if CF.finite_section is not None:
        d = CF.finite_section.d
    base = [
        "0:1",
        "1:1",
        "0:1 1:-2",
        "0:1/3 1:1 2:-1/2",
        "0:-1 2:2 3:1/5",
    ]
    out = []
    for text in base[:count]:
        v = FiniteVector.parse(text)
        if d is not None:
            v = FiniteVector([(i, q) for i, q in v.entries if i < d])
        out.append(v)
    return out


def duality_suite(CF: CertifiedFrame, tol: Fraction = DEFAULT_TOL) -> SuiteReport:
    """Canonical-dual reconstruction residuals on the built-in test set."""
    pair = DualPair(CF, canonical_dual(CF).frame)
    tests = _test_vectors(CF)
    rep = verify_duality(pair, tests, tol)
    lines = [
        (f"reconstruct {t.format() or '0'}", r, r <= tol)
        for t, r in zip(tests, rep.residual_bounds)
    ]
    return _report("duality", lines, tol)


def projection_suite(CF: CertifiedFrame, tol: Fraction = DEFAULT_TOL) -> SuiteReport:
    """P idempotent, symmetric (against exact ground truth when present),
    and identity on analysis images."""
    p = max(2, clog2(4 / tol))
    P = range_projection(CF)
    lines = []

    cs = ["0:1", "1:1", "0:1 2:-1"]
    for text in cs:
        c = VectorName.from_finite(FiniteVector.parse(text))
        Pc = apply(P, c)
        PPc = apply(P, Pc)
        resid = linear_combo(
            [
                (RealName.from_fraction(1), PPc),
                (RealName.from_fraction(-1), Pc),
            ]
        )
        r = _bound(resid.norm, p)
        lines.append((f"idempotent on {text}", r, r <= tol))

    if CF.finite_section is not None:
        from .oracle import projection_matrix

        M = projection_matrix(CF.finite_section)
        K = len(CF.finite_section)
        worst = Fraction(0)
        for k in range(K):
            col = P.col(k)
            for l in range(K):
                got = col.coeff(l).approx(p).as_fraction()
                worst = max(worst, abs(got - M[l][k]) - Fraction(1, 1 << p))
        worst = max(worst, Fraction(0))
        lines.append(("matches exact symmetric projection", worst, worst <= tol))

    for text in ("0:1", "0:2 1:-1"):
        f = VectorName.from_finite(_restrict(CF, text))
        cf = analysis(CF, f)
        Pcf = apply(P, cf)
        resid = linear_combo(
            [
                (RealName.from_fraction(1), Pcf),
                (RealName.from_fraction(-1), cf),
            ]
        )
        r = _bound(resid.norm, p)
        lines.append((f"fixes analysis image of {text}", r, r <= tol))

    return _report("projection", lines, tol)


def _restrict(CF: CertifiedFrame, text: str) -> FiniteVector:
    v = FiniteVector.parse(text)
    if CF.finite_section is not None:
        d = CF.finite_section.d
        v = FiniteVector([(i, q) for i, q in v.entries if i < d])
    return v


def gram_suite(CF: CertifiedFrame, tol: Fraction = DEFAULT_TOL) -> SuiteReport:
    """Row energy of the dual Gram matrix equals its diagonal entry.

    The diagonal entry p_n = <f_n, S^-1 f_n> determines the whole row
    energy in closed form; compare against the directly computed energy
    (and the exact ground truth for finite frames).
    """
    p = max(2, clog2(4 / tol))
    K = 4
    if CF.finite_section is not None:
        K = len(CF.finite_section)
    lines = []
    exact_M = None
    if CF.finite_section is not None:
        from .oracle import projection_matrix

        exact_M = projection_matrix(CF.finite_section)

    for n in range(min(K, 10)):
        fn = CF.elem(n)
        dual_fn = inverse_apply(CF, fn)

        def diag(_m, fn=fn, dual_fn=dual_fn):
            return inner(fn, dual_fn)

        energy = complete_dual_gram_row(diag, n)
        got = energy.approx(p).as_fraction()
        if exact_M is not None:
            want = sum(exact_M[n][k] ** 2 for k in range(len(exact_M)))
            r = max(abs(got - want) - Fraction(1, 1 << p), Fraction(0))
            lines.append((f"row {n} energy vs exact", r, r <= tol))
            r2 = abs(want - exact_M[n][n])
            lines.append((f"row {n} energy equals diagonal", r2, r2 <= tol))
        else:
            # energy must equal the diagonal entry itself
            dd = inner(fn, dual_fn).approx(p).as_fraction()
            r = max(abs(got - dd) - Fraction(1, 1 << (p - 1)), Fraction(0))
            lines.append((f"row {n} energy equals diagonal", r, r <= tol))
    return _report("gram", lines, tol)


def max_iterations(A: Fraction, B: Fraction, f_mag: Fraction, p: int) -> int:
    """Ceiling bound on Richardson iterations at precision p."""
    if A == B:
        return 1
    ratio = float((B + A) / (B - A))
    arg = float(max(f_mag, Fraction(1)) / A)
    return ceil((p + log2(arg) + 4) / log2(ratio))


def rate_suite(CF: CertifiedFrame, tol: Fraction = DEFAULT_TOL) -> SuiteReport:
    """Iteration counts stay within the geometric-rate budget."""
    lines = []
    f = VectorName.from_finite(_restrict(CF, "0:1 1:1"))
    for p in (20, 40, 60):
        res = frame_algorithm(CF, f, p)
        cap = max_iterations(CF.lower, CF.upper, f.norm.mag, p)
        ok = res.iterations <= cap
        if CF.lower == CF.upper:
            ok = ok and res.iterations == 1
        lines.append(
            (f"p={p}: {res.iterations} iterations (cap {cap})",
             Fraction(res.iterations), ok)
        )
    return _report("rate", lines, tol)


SUITES = {
    "duality": duality_suite,
    "projection": projection_suite,
    "gram": gram_suite,
    "rate": rate_suite,
}


def run_suite(name: str, CF: CertifiedFrame, tol: Fraction = DEFAULT_TOL) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name](CF, tol)
