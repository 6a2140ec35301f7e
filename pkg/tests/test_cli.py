"""CLI contract: exit codes, reports, witnesses, determinism."""

import json

from poisgeo.cli import main

from conftest import corpus_path


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExitCodes:
    def test_pass_examples(self, capsys):
        for name in ("r2_flat", "r3_flat", "r3_flat_zmetric"):
            code, out, _ = run_cli(capsys, "check", str(corpus_path(name)))
            assert code == 0, (name, out)
            assert "riemann_poisson: pass" in out

    def test_fail_examples(self, capsys):
        for name in ("r3_quadratic_nonparallel", "so3_star", "nonpoisson_jacobi"):
            code, out, _ = run_cli(capsys, "check", str(corpus_path(name)))
            assert code == 1, name

    def test_quadratic_witness_line(self, capsys):
        code, out, _ = run_cli(
            capsys, "check", str(corpus_path("r3_quadratic_nonparallel"))
        )
        assert code == 1
        assert "riemann_poisson: fail" in out
        assert "z^3+z" in out

    def test_so3_rank_error(self, capsys):
        code, out, _ = run_cli(capsys, "check", str(corpus_path("so3_star")))
        assert code == 1
        assert "rank_constant: fail" in out

    def test_syntax_error_exit2(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(
            json.dumps(
                {
                    "name": "bad",
                    "coordinates": ["x", "y"],
                    "pi": [[0, 1, "x+"]],
                    "cometric": [[0, 0, "1"], [1, 1, "1"]],
                    "declared_rank": 2,
                    "samples": [[0, 0]],
                }
            )
        )
        code, _, err = run_cli(capsys, "check", str(bad))
        assert code == 2
        assert "offset 2" in err

    def test_missing_file_exit2(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "check", str(tmp_path / "nope.json"))
        assert code == 2

    def test_bad_json_exit2(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, err = run_cli(capsys, "check", str(bad))
        assert code == 2

    def test_wrong_kind_exit2(self, capsys):
        code, _, err = run_cli(
            capsys, "check", str(corpus_path("foliation_flat_zmetric"))
        )
        assert code == 2


class TestJsonReports:
    def test_deterministic_modulo_timing(self, capsys):
        import re

        path = str(corpus_path("r3_flat_zmetric"))
        _, out1, _ = run_cli(capsys, "check", path, "--json")
        _, out2, _ = run_cli(capsys, "check", path, "--json")
        scrub = lambda s: re.sub(r'"timing_s": [0-9.e+-]+', '"timing_s": 0', s)
        assert scrub(out1) == scrub(out2)  # byte-identical apart from timing

    def test_every_fail_witness_reevaluates_nonzero(self, capsys, corpus):
        from fractions import Fraction

        from poisgeo import parse_scalar

        for name in ("r3_quadratic_nonparallel", "so3_star", "nonpoisson_jacobi"):
            code, out, _ = run_cli(capsys, "check", str(corpus_path(name)), "--json")
            assert code == 1
            report = json.loads(out)
            spec = corpus[name]
            fails = [c for c in report["checks"] if c["status"] == "fail"]
            assert fails
            for c in fails:
                assert c["witness"], c
                assert c["witness_nonzero_at"], c
                field = parse_scalar(c["witness"], spec.chart)
                point = [Fraction(v) for v in c["witness_nonzero_at"]]
                assert field.eval_at(point) != 0

    def test_report_subcommand(self, capsys):
        code, out, _ = run_cli(capsys, "report", str(corpus_path("r3_flat")))
        assert code == 0
        report = json.loads(out)
        assert report["foliation"]["rank"] == 2
        assert any(row["value"] == "0" for row in report["christoffel"])
        assert report["input_sha256"]

    def test_check_skips_marked(self, capsys):
        code, out, _ = run_cli(
            capsys, "check", str(corpus_path("r3_quadratic_nonparallel")), "--json"
        )
        report = json.loads(out)
        by_name = {c["name"]: c for c in report["checks"]}
        assert by_name["bundle_like"]["status"] == "skip"
        assert by_name["perp_invariance"]["status"] == "skip"


class TestChristoffel:
    def test_quadratic_table(self, capsys):
        code, out, _ = run_cli(
            capsys, "christoffel", str(corpus_path("r3_quadratic_nonparallel"))
        )
        assert code == 0
        assert "D[dx][dy] = (z)*dz" in out
        assert "D[dx][dz] = (-z)*dy" in out

    def test_flat_table_zero(self, capsys):
        code, out, _ = run_cli(
            capsys, "christoffel", str(corpus_path("r3_flat_zmetric")), "--json"
        )
        table = json.loads(out)["christoffel"]
        assert all(row["value"] == "0" for row in table)


class TestFoliation:
    def test_flat_output(self, capsys):
        code, out, _ = run_cli(capsys, "foliation", str(corpus_path("r3_flat")), "--json")
        assert code == 0
        details = json.loads(out)["foliation"]
        assert details["kernel_frame"] == ["(1)*dz"]
        assert details["leafwise_symplectic"] == {"(0,1)": "1"}

    def test_so3_exits_one(self, capsys):
        code, out, _ = run_cli(capsys, "foliation", str(corpus_path("so3_star")))
        assert code == 1


class TestConstruct:
    def test_construct_and_verify(self, capsys):
        code, out, err = run_cli(
            capsys,
            "construct",
            str(corpus_path("foliation_flat_zmetric")),
            "--verify",
        )
        assert code == 0
        constructed = json.loads(out)
        assert constructed["pi"] == [[0, 1, "1"]]
        assert [0, 0, "1"] in constructed["cometric"]
        assert [2, 2, "1/(z^2+1)"] in constructed["cometric"]
        assert "riemann_poisson: pass" in err

    def test_invariance_fails_exit1(self, capsys):
        code, out, err = run_cli(
            capsys, "construct", str(corpus_path("foliation_invariance_fails"))
        )
        assert code == 1
        assert "InvarianceFails" in err

    def test_missing_omega_exit2(self, capsys, tmp_path):
        data = json.loads(corpus_path("foliation_flat_zmetric").read_text())
        del data["omega"]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(data))
        code, _, err = run_cli(capsys, "construct", str(bad))
        assert code == 2
        assert "omega" in err

    def test_constructed_output_is_checkable(self, capsys, tmp_path):
        code, out, _ = run_cli(
            capsys, "construct", str(corpus_path("foliation_flat_zmetric"))
        )
        assert code == 0
        spec_path = tmp_path / "constructed.json"
        spec_path.write_text(out)
        code, out2, _ = run_cli(capsys, "check", str(spec_path))
        assert code == 0


class TestCohomology:
    def test_flat_r3(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "cohomology",
            str(corpus_path("r3_flat")),
            "--p", "1", "--degree", "3",
        )
        assert code == 0
        assert "b1(window d=3) = 4" in out

    def test_plane(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "cohomology",
            str(corpus_path("r2_flat")),
            "--p", "1", "--degree", "4",
        )
        assert code == 0
        assert "= 0" in out

    def test_thm31_flag(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "cohomology",
            str(corpus_path("r3_flat_zmetric")),
            "--p", "1", "--degree", "3",
            "--thm31", "--json",
        )
        assert code == 0
        rep = json.loads(out)
        assert rep["thm31"]["dimension_match"] is True
        assert rep["betti"]["betti"] == 4

    def test_thm31_fails_off_the_parallel_case(self, capsys):
        """Without vanishing Dpi the basic-form images are not cocycles."""
        code, out, _ = run_cli(
            capsys,
            "cohomology",
            str(corpus_path("r3_quadratic_nonparallel")),
            "--p", "1", "--degree", "2",
            "--thm31", "--json",
        )
        assert code == 1
        rep = json.loads(out)
        assert rep["thm31"]["basic_forms_closed"] is False

    def test_rational_pi_exit2(self, capsys, tmp_path):
        bad = tmp_path / "rational.json"
        bad.write_text(
            json.dumps(
                {
                    "name": "rational",
                    "coordinates": ["x", "y", "z"],
                    "pi": [[0, 1, "1/(1+z^2)"]],
                    "cometric": [[0, 0, "1"], [1, 1, "1"], [2, 2, "1"]],
                    "declared_rank": 2,
                    "samples": [[0, 0, 0]],
                }
            )
        )
        code, _, err = run_cli(capsys, "cohomology", str(bad), "--p", "1", "--degree", "2")
        assert code == 2
        assert "polynomial" in err


class TestSamplesOverride:
    def test_override_changes_verdict(self, capsys, tmp_path):
        """so(3)* fails rank at the origin; away from it the split succeeds."""
        samples = tmp_path / "samples.json"
        samples.write_text(json.dumps([[1, 1, 1], [2, 1, 1]]))
        code, out, _ = run_cli(
            capsys,
            "check",
            str(corpus_path("so3_star")),
            "--samples", str(samples),
        )
        assert "rank_constant: pass" in out
        assert code == 1  # still not parallel: Dpi != 0
        assert "riemann_poisson: fail" in out
