"""JSON frame descriptions for the command-line front end.

A spec file declares one frame: an orthonormal one, a finite rational
one (with exact ground truth available), a finite matrix of synthesis
columns, a gallery instance, or a Riesz basis.  Rationals travel as
strings "p/q"; parse errors carry the offending field.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .frames import CertifiedFrame, Frame, frame_from_onb
from .operators import OperatorName
from .vectors import FiniteVector, VectorName


class SpecFileError(ValueError):
    """Malformed spec file; message names the offending field."""


class InvalidFrameError(ValueError):
    """The spec parses but does not describe a valid frame."""


class MissingCertificateError(ValueError):
    """The requested operation needs an analysis certificate the spec lacks."""


class LoadedSpec:
    """A parsed spec: always a plain frame, optionally certified.

    ``certified`` is None exactly when no analysis certificate can be
    built (norm-free gallery instances); ``section`` is the exact
    rational ground truth for finite kinds.
    """

    __slots__ = ("kind", "frame", "certified", "section", "declared_bounds", "label")

    def __init__(self, kind, frame, certified, section, declared_bounds, label):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "certified", certified)
        object.__setattr__(self, "section", section)
        object.__setattr__(self, "declared_bounds", declared_bounds)
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        raise AttributeError("LoadedSpec is immutable")

    def require_certified(self) -> CertifiedFrame:
        if self.certified is None:
            raise MissingCertificateError(
                "this frame carries no analysis certificate: its element "
                "data is computable coefficientwise, but the certificate "
                "would need a norm that is not a computable real"
            )
        return self.certified


def parse_rational(value, field: str) -> Fraction:
    """Rational from "p/q" (or "p") with q != 0, or a JSON integer."""
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if not isinstance(value, str):
        raise SpecFileError(f"{field}: expected a rational string, got {value!r}")
    try:
        q = Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise SpecFileError(f"{field}: invalid rational {value!r} ({e})") from None
    return q


def parse_matrix(value, field: str):
    if not isinstance(value, list) or not value:
        raise SpecFileError(f"{field}: expected a non-empty list of rows")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or not row:
            raise SpecFileError(f"{field}[{i}]: expected a non-empty row")
        rows.append([parse_rational(q, f"{field}[{i}][{j}]") for j, q in enumerate(row)])
    if any(len(r) != len(rows[0]) for r in rows):
        raise SpecFileError(f"{field}: ragged rows")
    return rows


def parse_vector_text(text: str, field: str = "vector") -> FiniteVector:
    """Finite vector from "i:p/q,j:p/q" (comma or space separated)."""
    text = text.strip()
    if not text:
        return FiniteVector()
    entries = {}
    for part in text.replace(",", " ").split():
        if ":" not in part:
            raise SpecFileError(f"{field}: bad entry {part!r}, expected i:p/q")
        idx, _, val = part.partition(":")
        try:
            i = int(idx)
        except ValueError:
            raise SpecFileError(f"{field}: bad index in {part!r}") from None
        if i < 0:
            raise SpecFileError(f"{field}: negative index in {part!r}")
        q = parse_rational(val, field)
        entries[i] = entries.get(i, Fraction(0)) + q
    return FiniteVector(sorted(entries.items()))


def _load_finite(vectors) -> LoadedSpec:
    from .oracle import ExactFrame, NonSpanningError, embed

    rows = parse_matrix(vectors, "vectors")
    try:
        section = ExactFrame(rows)
        CF = embed(section)
    except NonSpanningError as e:
        raise InvalidFrameError(str(e)) from None
    return LoadedSpec("finite", CF.frame, CF, section, None, "finite frame")


def _load_operator(doc) -> LoadedSpec:
    matrix = parse_matrix(doc.get("matrix"), "matrix")
    bounds = doc.get("bounds")
    if not isinstance(bounds, list) or len(bounds) != 2:
        raise SpecFileError("bounds: expected [A, B]")
    A = parse_rational(bounds[0], "bounds[0]")
    B = parse_rational(bounds[1], "bounds[1]")
    if not 0 < A <= B:
        raise InvalidFrameError("declared bounds must satisfy 0 < A <= B")

    ncols = len(matrix[0])
    cols = [
        FiniteVector([(i, matrix[i][k]) for i in range(len(matrix)) if matrix[i][k] != 0])
        for k in range(ncols)
    ]

    def elem(k: int) -> VectorName:
        if k < ncols:
            return VectorName.from_finite(cols[k])
        return VectorName.zero()

    if "adjoint_rows" in doc:
        adj = parse_matrix(doc["adjoint_rows"], "adjoint_rows")
    else:
        adj = [[matrix[i][k] for k in range(ncols)] for i in range(len(matrix))]
    adj_cols = [
        FiniteVector([(k, row[k]) for k in range(len(row)) if row[k] != 0])
        for row in adj
    ]

    def analysis_col(n: int) -> VectorName:
        if n < len(adj_cols):
            return VectorName.from_finite(adj_cols[n])
        return VectorName.zero()

    from .dyadic import sqrt_upper

    frame = Frame(elem, A, B)
    analysis_op = OperatorName(analysis_col, sqrt_upper(B), support_bound=ncols)
    CF = CertifiedFrame(frame, analysis_op)
    return LoadedSpec("operator", frame, CF, None, (A, B), "operator frame")


def _load_gallery(doc) -> LoadedSpec:
    from . import gallery as gal

    info = doc.get("gallery")
    if not isinstance(info, dict):
        raise SpecFileError("gallery: expected an object with name and params")
    name = info.get("name")
    params = info.get("params", "benign")

    if name == "doubled-onb":
        CF = gal.doubled_onb()
        return LoadedSpec("gallery", CF.frame, CF, None, (Fraction(2), Fraction(2)), name)

    if name not in ("ex3.7", "ex3.14", "ex3.20", "ex3.27"):
        raise SpecFileError(f"gallery.name: unknown instance {name!r}")

    if params == "benign":
        g = gal.benign_sequence()
    elif isinstance(params, str) and params.startswith("specker:"):
        try:
            enum = gal.parse_enumerator(params.split(":", 1)[1])
        except ValueError as e:
            raise SpecFileError(f"gallery.params: {e}") from None
        g = gal.specker_sequence(enum)
    else:
        raise SpecFileError(f"gallery.params: unknown parameter {params!r}")

    if name != "ex3.7":
        # the other instances expose operator/sequence data, not a frame
        raise SpecFileError(
            f"gallery.name: {name} provides operator data only; "
            "use the library interfaces for it"
        )

    from .dyadic import sqrt_upper

    s = sqrt_upper(g.sq_sum_upper - 1, bits=10)
    frame = Frame(gal.example_upper_row(g).col, (1 - s) * (1 - s), (1 + s) * (1 + s))
    certified = None
    if g.norm_name is not None:
        certified = gal.upper_row_frame(g)
        frame = certified.frame
    return LoadedSpec("gallery", frame, certified, None, None, f"{name} ({params})")


def _load_riesz(doc) -> LoadedSpec:
    from .riesz import riesz_as_frame, riesz_from_matrix

    T = parse_matrix(doc.get("T"), "T")
    T_inv = parse_matrix(doc.get("T_inv"), "T_inv")
    try:
        R = riesz_from_matrix(T, T_inv)
    except ValueError as e:
        raise InvalidFrameError(str(e)) from None
    CF = riesz_as_frame(R)
    return LoadedSpec("riesz", CF.frame, CF, None, (CF.lower, CF.upper), "riesz basis")


def load_spec(path: str) -> LoadedSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise SpecFileError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise SpecFileError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise SpecFileError(f"{path}: top level must be an object")
    kind = doc.get("kind")
    if kind == "onb":
        CF = frame_from_onb()
        return LoadedSpec("onb", CF.frame, CF, None, (Fraction(1), Fraction(1)), "orthonormal")
    if kind == "finite":
        return _load_finite(doc.get("vectors"))
    if kind == "operator":
        return _load_operator(doc)
    if kind == "gallery":
        return _load_gallery(doc)
    if kind == "riesz":
        return _load_riesz(doc)
    raise SpecFileError(f"kind: unknown kind {kind!r}")
