"""End-to-end tests of the heydecheck command line."""

import json
from pathlib import Path
from typing import Any

import pytest

from heydecheck.__main__ import EXIT_CONTRARY, EXIT_OK, EXIT_USAGE, main

CONFIGS_DIR = Path(__file__).parents[1] / "fixtures" / "configs"

RATIONAL_BOX = json.dumps(
    {"host": {"kind": "rational", "profile": {"*": "inf"}}, "kind": "box", "numeratorBound": 3}
)


def run(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, dict[str, Any]]:
    """Run main and parse the JSON envelope it prints."""
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out else {}


class TestAut:
    """Tests for the aut command."""

    def test_automorphism(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, envelope = run(capsys, "aut", "--profile", "2:inf,3:inf", "--n", "6")

        assert code == EXIT_OK
        assert envelope["result"]["isAut"] is True
        assert envelope["result"]["heydeAdmissible"] is True
        assert envelope["config"] == {"command": "aut", "n": 6, "profile": "2:inf,3:inf"}
        assert "generatedAt" in envelope

    def test_prime_witness(self, capsys: pytest.CaptureFixture[str]) -> None:
        """5 has multiplicity 0 in the profile."""
        code, envelope = run(capsys, "aut", "--profile", '{"2": "inf", "3": "inf"}', "--n", "10")

        assert code == EXIT_OK
        assert envelope["result"]["isAut"] is False
        assert envelope["result"]["primeWitness"] == 5

    def test_zero(self, capsys: pytest.CaptureFixture[str]) -> None:
        """f_0 is rejected as a usage error."""
        code = main(["aut", "--profile", "*", "--n", "0"])

        captured = capsys.readouterr()
        assert code == EXIT_USAGE
        assert captured.out == ""
        assert "not an endomorphism candidate" in captured.err


class TestConstruct:
    """Tests for the construct command."""

    def test_lemma2(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, envelope = run(capsys, "construct", "--name", "lemma2", "--q", "3")

        assert code == EXIT_OK
        construction = envelope["result"]["construction"]
        assert construction["equation"]["name"] == "l1(q=3)"
        assert envelope["result"]["classes"] == ["OUTSIDE", "OUTSIDE"]
        assert all(r["positive"] for r in envelope["result"]["psd"])

    def test_hypothesis_violation_is_a_usage_error(
        self, capsys: pytest.CaptureFixture[str]
    ) -> None:
        code = main(["construct", "--name", "lemma2", "--q", "5"])

        assert code == EXIT_USAGE
        assert "lemma hypothesis violated" in capsys.readouterr().err

    def test_forced(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, envelope = run(capsys, "construct", "--name", "lemma2", "--q", "5", "--force")

        assert code == EXIT_OK
        assert envelope["result"]["construction"]["parameters"]["forced"] is True


class TestVerify:
    """Tests for the verify command."""

    def test_lemma2(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, envelope = run(capsys, "verify", "--construction", "lemma2", "--q", "3")

        report = envelope["result"]["report"]
        assert code == EXIT_OK
        assert report["status"] == "VERIFIED"
        assert report["pairsChecked"] == report["exactPairs"] == 4096

    def test_forced_pair_is_violated(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Forced runs expect a violation, so finding one exits 0."""
        code, envelope = run(
            capsys, "verify", "--construction", "lemma2", "--q", "5", "--force", "--level", "3"
        )

        report = envelope["result"]["report"]
        assert code == EXIT_OK
        assert report["status"] == "VIOLATED"
        assert (report["witness"]["u"], report["witness"]["v"]) == ("1/8", "1/8")
        assert envelope["result"]["witnessRechecked"] is True
        assert any("v-major" in note for note in envelope["result"]["notes"])

    def test_expectation_mismatch(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, _ = run(
            capsys,
            "verify",
            "--construction", "lemma2",
            "--q", "5",
            "--force",
            "--level", "3",
            "--expect", "verified",
        )

        assert code == EXIT_CONTRARY

    def test_inline_expressions(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, envelope = run(
            capsys,
            "verify",
            "--dist1", '{"kind": "gaussian", "lam": "3"}',
            "--dist2", '{"kind": "gaussian", "lam": "1"}',
            "--equation", "symmetry",
            "--p", "1",
            "--q=-3",
            "--grid", RATIONAL_BOX,
        )

        assert code == EXIT_OK
        assert envelope["result"]["report"]["pairsChecked"] == 49

    def test_inline_expressions_need_a_grid(self, capsys: pytest.CaptureFixture[str]) -> None:
        code = main(
            [
                "verify",
                "--dist1", '{"kind": "gaussian", "lam": "3"}',
                "--dist2", '{"kind": "gaussian", "lam": "1"}',
                "--equation", "symmetry",
            ]
        )

        assert code == EXIT_USAGE
        assert "--grid is required" in capsys.readouterr().err

    def test_lemma6_implication(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, envelope = run(
            capsys,
            "verify",
            "--construction", "gaussian",
            "--p", "1",
            "--q=-3",
            "--grid", RATIONAL_BOX,
            "--implication", "lemma6",
        )

        implication = envelope["result"]["implication"]
        assert code == EXIT_OK
        assert implication["holds"] is True
        assert [c["equation"] for c in implication["conclusions"]] == [
            "l4.2(1,-3)",
            "l4.3(1,-3)",
            "l4.6(1,-3)",
        ]


class TestSimulate:
    """Tests for the simulate command."""

    def test_exact(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, envelope = run(capsys, "simulate", "--construction", "lemma2", "--q", "3")

        result = envelope["result"]
        assert code == EXIT_OK
        assert result["model"] == "Z(8)"
        assert result["pmf1"] == ["1/6", "1/12"] * 4
        assert result["symmetry"]["symmetric"] is True
        assert result["crossValidation"]["agree"] is True

    def test_sampled(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, envelope = run(
            capsys,
            "simulate",
            "--construction", "lemma2",
            "--q", "3",
            "--model", "4",
            "--sample", "500",
            "--seed", "1",
        )

        empirical = envelope["result"]["empirical"]
        assert code == EXIT_OK
        assert empirical["samples"] == 500
        assert empirical["seed"] == 1
        assert "symmetry" not in envelope["result"]

    def test_gaussians_have_no_finite_model(self, capsys: pytest.CaptureFixture[str]) -> None:
        code = main(["simulate", "--construction", "gaussian", "--p", "1", "--q=-3"])

        assert code == EXIT_USAGE
        assert "exactly one torsion host" in capsys.readouterr().err


class TestRender:
    """Tests for the render command."""

    def test_verified_text(self, workdir: Path, capsys: pytest.CaptureFixture[str]) -> None:
        code = main(["render", "--in", str(workdir / "fixtures" / "reports" / "verified.json")])

        assert code == EXIT_OK
        assert capsys.readouterr().out == "l1(q=3): VERIFIED (4096 pairs, exact)\n"

    def test_violated_markdown(self, workdir: Path) -> None:
        out = workdir / "violated.md"

        code = main(
            [
                "--out", str(out),
                "render",
                "--in", str(workdir / "fixtures" / "reports" / "violated.json"),
                "--format", "markdown",
            ]
        )

        markdown = out.read_text(encoding="utf-8")
        assert code == EXIT_OK
        assert "- (u,v) = (1/8, 1/8): lhs = 0, rhs = 1/3" in markdown
        assert "- `force`: `True`" in markdown

    def test_suite_text(self, workdir: Path, capsys: pytest.CaptureFixture[str]) -> None:
        main(["render", "--in", str(workdir / "fixtures" / "reports" / "suite.json")])

        assert capsys.readouterr().out.splitlines() == [
            "aut/examples: ok",
            "controls/lemma2-forced/q=5: ok",
            "lemma2/q=3/k=3/equation: FAIL",
            "2/3 green at level small",
        ]

    def test_missing_file(self, workdir: Path, capsys: pytest.CaptureFixture[str]) -> None:
        code = main(["render", "--in", str(workdir / "missing.json")])

        assert code == EXIT_USAGE
        assert "heydecheck: error:" in capsys.readouterr().err

    def test_malformed_result(self, workdir: Path, capsys: pytest.CaptureFixture[str]) -> None:
        report = workdir / "bad.json"
        report.write_text(
            json.dumps({"config": {"command": "aut"}, "result": {}, "generatedAt": "x"}),
            encoding="utf-8",
        )

        code = main(["render", "--in", str(report)])

        assert code == EXIT_USAGE
        assert "Report is missing 'isAut'" in capsys.readouterr().err


class TestGlobalOptions:
    """Tests for --out, --config and --version."""

    def test_out_writes_the_envelope(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        out = tmp_path / "aut.json"

        code = main(["--out", str(out), "-q", "aut", "--profile", "2:inf", "--n", "4"])

        assert code == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(out.read_text(encoding="utf-8"))["result"]["isAut"] is True

    def test_out_prints_a_summary(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        main(["--out", str(tmp_path / "aut.json"), "aut", "--profile", "2:inf", "--n", "6"])

        assert "f_6 is not an automorphism" in capsys.readouterr().out

    def test_config_defaults(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Top-level level and tol reach verify; its section sets expect."""
        code, envelope = run(
            capsys,
            "--config", str(CONFIGS_DIR / "small-grids.yaml"),
            "verify",
            "--construction", "lemma2",
            "--q", "3",
        )

        assert code == EXIT_OK
        assert envelope["result"]["report"]["pairsChecked"] == 64
        assert envelope["config"]["level"] == 3
        assert envelope["config"]["tol"] == 1e-6
        assert envelope["config"]["expect"] == "verified"

    def test_command_line_beats_config(self, capsys: pytest.CaptureFixture[str]) -> None:
        code, envelope = run(
            capsys,
            "--config", str(CONFIGS_DIR / "small-grids.yaml"),
            "verify",
            "--construction", "lemma2",
            "--q", "3",
            "--level", "4",
        )

        assert code == EXIT_OK
        assert envelope["result"]["report"]["pairsChecked"] == 256

    def test_version(self) -> None:
        with pytest.raises(SystemExit) as excinfo:
            main(["-V"])

        assert excinfo.value.code == 0

    def test_missing_command(self) -> None:
        with pytest.raises(SystemExit) as excinfo:
            main([])

        assert excinfo.value.code == 2
