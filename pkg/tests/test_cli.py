import io
import json
from contextlib import redirect_stdout
from fractions import Fraction
from pathlib import Path

import pytest

from framecert.cli import main
from framecert.specfile import (
    InvalidFrameError,
    MissingCertificateError,
    SpecFileError,
    load_spec,
    parse_rational,
    parse_vector_text,
)
from framecert.verify import max_iterations, run_suite

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


class TestSpecParsing:
    def test_rationals(self):
        assert parse_rational("3/4", "x") == Fraction(3, 4)
        assert parse_rational("-2", "x") == -2
        assert parse_rational(5, "x") == 5
        with pytest.raises(SpecFileError):
            parse_rational("1/0", "x")
        with pytest.raises(SpecFileError):
            parse_rational("abc", "x")

    def test_vector_text(self):
        v = parse_vector_text("0:1/2, 3:-2")
        assert v.coefficient(0) == Fraction(1, 2)
        assert v.coefficient(3) == -2
        with pytest.raises(SpecFileError):
            parse_vector_text("0:1 nope")

    def test_finite_kind(self):
        spec = load_spec(str(FIXTURES / "mercedes.json"))
        assert spec.kind == "finite"
        assert spec.section is not None and len(spec.section) == 3
        assert spec.certified is not None

    def test_onb_and_riesz_kinds(self):
        assert load_spec(str(FIXTURES / "onb.json")).declared_bounds == (1, 1)
        spec = load_spec(str(FIXTURES / "riesz_shear.json"))
        assert spec.kind == "riesz"
        assert spec.certified is not None

    def test_gallery_kinds(self):
        benign = load_spec(str(FIXTURES / "gallery_ex37_benign.json"))
        assert benign.certified is not None
        free = load_spec(str(FIXTURES / "gallery_ex37_specker.json"))
        assert free.certified is None
        with pytest.raises(MissingCertificateError):
            free.require_certified()

    def test_non_spanning_rejected(self):
        with pytest.raises(InvalidFrameError):
            load_spec(str(FIXTURES / "non_spanning.json"))

    def test_unknown_kind(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"kind": "mystery"}))
        with pytest.raises(SpecFileError):
            load_spec(str(p))


class TestVerifySuites:
    def test_all_suites_pass_on_mercedes(self):
        CF = load_spec(str(FIXTURES / "mercedes.json")).certified
        for name in ("duality", "projection", "gram", "rate"):
            rep = run_suite(name, CF)
            assert rep.passed, (name, rep.worst)

    def test_onb_rate_single_iteration(self):
        CF = load_spec(str(FIXTURES / "onb.json")).certified
        rep = run_suite("rate", CF)
        assert rep.passed

    def test_max_iterations_tight_case(self):
        assert max_iterations(Fraction(2), Fraction(2), Fraction(1), 40) == 1

    def test_corrupted_duality_fails(self):
        CF = load_spec(str(FIXTURES / "corrupted_dual.json")).certified
        rep = run_suite("duality", CF)
        assert not rep.passed
        assert rep.worst >= Fraction(1, 4)


class TestCliCommands:
    def test_bounds_finite(self):
        code, out = run_cli("bounds", str(FIXTURES / "mercedes.json"))
        assert code == 0
        assert "A in [" in out and "B in [" in out

    def test_bounds_declared(self):
        code, out = run_cli("bounds", str(FIXTURES / "onb.json"))
        assert code == 0
        assert "A = B = 1 (declared)" in out

    def test_reconstruct_mercedes(self):
        code, out = run_cli(
            "reconstruct", str(FIXTURES / "mercedes.json"), "--vector", "0:1", "-p", "40"
        )
        assert code == 0
        assert "0: 1 ± 2^-40" in out
        assert "residual bound" in out

    def test_reconstruct_onb_echo(self):
        code, out = run_cli(
            "reconstruct", str(FIXTURES / "onb.json"), "--vector", "1:3/4", "-p", "20"
        )
        assert code == 0
        assert "1: 0.75 ± 2^-20" in out

    def test_analyze(self):
        code, out = run_cli(
            "analyze", str(FIXTURES / "mercedes.json"), "--vector", "0:1", "-p", "30"
        )
        assert code == 0
        assert "2: 1 ± 2^-30" in out

    def test_dual_canonical(self):
        code, out = run_cli("dual", str(FIXTURES / "mercedes.json"), "-p", "20")
        assert code == 0
        assert "canonical dual" in out and "g_2" in out

    def test_dual_bessel(self):
        code, out = run_cli(
            "dual", str(FIXTURES / "onb.json"),
            "--bessel", str(FIXTURES / "bessel_small.json"), "-p", "10",
        )
        assert code == 0
        assert "Bessel" in out

    def test_verify_pass_and_fail(self):
        code, _ = run_cli(
            "verify", str(FIXTURES / "mercedes.json"), "--suite", "gram"
        )
        assert code == 0
        code, out = run_cli(
            "verify", str(FIXTURES / "corrupted_dual.json"), "--suite", "duality"
        )
        assert code == 1
        assert "FAIL" in out

    def test_exit_codes(self):
        assert run_cli("bounds", str(FIXTURES / "malformed.json"))[0] == 2
        assert run_cli("bounds", str(FIXTURES / "non_spanning.json"))[0] == 3
        assert (
            run_cli(
                "reconstruct", str(FIXTURES / "gallery_ex37_specker.json"),
                "--vector", "0:1",
            )[0]
            == 4
        )

    def test_gallery_listing(self):
        code, out = run_cli("gallery")
        assert code == 0
        assert "ex3.7" in out

    def test_deterministic_output(self):
        a = run_cli("dual", str(FIXTURES / "mercedes.json"), "-p", "25")
        b = run_cli("dual", str(FIXTURES / "mercedes.json"), "-p", "25")
        assert a == b
