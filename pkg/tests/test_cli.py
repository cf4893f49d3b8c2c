"""
Tests for the command-line interface
"""
import json

import pytest

from src.cli import ExitCode, main
from src.core.errors import NikolayevskyError

BAD_JACOBI = """name: broken
dim: 4
d e1 = -e2^e4
d e3 = -e1^e2
d e4 = -e1^e3 - e2^e3
"""


class TestQueries:
    """Tests for nik, series and free"""

    def test_nik_g11(self, capsys):
        """nik g11 prints the scaled diagonal"""
        assert main(["nik", "g11"]) == ExitCode.OK
        assert capsys.readouterr().out.strip() == "33/119 * diag(1,1,2,2,3,3,3,4,4,5,5)"

    def test_nik_json(self, capsys):
        """--json gives the eigenvalues as exact strings"""
        assert main(["nik", "g11", "--json"]) == ExitCode.OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["nikolayevsky"] == "33/119 * diag(1,1,2,2,3,3,3,4,4,5,5)"
        assert payload["eigenvalues"][0] == {"value": "33/119", "multiplicity": 2}

    def test_nik_zero(self, capsys):
        """n9 has zero Nikolayevsky derivation"""
        assert main(["nik", "n9"]) == ExitCode.OK
        assert capsys.readouterr().out.strip() == "0"

    def test_series_n9(self, capsys):
        """series n9 prints LCS and UCS dimensions"""
        assert main(["series", "n9"]) == ExitCode.OK
        assert capsys.readouterr().out.strip() == "LCS 9,6,5,3,2,1,0 / UCS 1,3,4,6,7,9"

    def test_free(self, capsys):
        """free 2 5 reports dimension 14 and the pair obstruction"""
        assert main(["free", "2", "5"]) == ExitCode.OK
        out = capsys.readouterr().out
        assert "n_2,5: dimension 14" in out
        assert "layers 2,1,2,3,6" in out
        assert "nonnice (pair-obstruction)" in out

    def test_free_lambda(self, capsys):
        """free 3 2 prints lambda = 3/5"""
        assert main(["free", "3", "2"]) == ExitCode.OK
        assert "nikolayevsky = 3/5 * (k on W_k)" in capsys.readouterr().out


class TestVerify:
    """Tests for verify"""

    def test_catalog_entry(self, capsys):
        """verify g11 passes"""
        assert main(["verify", "g11"]) == ExitCode.OK
        assert capsys.readouterr().out.strip() == "g11: PASS"

    def test_file(self, capsys, write_file):
        """A .lie file can be verified by path"""
        path = write_file("heis.lie", "name: heis\ndim: 3\nd e3 = -e1^e2\n")
        assert main(["verify", str(path)]) == ExitCode.OK
        assert "heis: PASS" in capsys.readouterr().out

    def test_jacobi_failure_without_check(self, capsys, write_file):
        """--no-jacobi lets verify report the failing triple"""
        path = write_file("broken.lie", BAD_JACOBI)
        assert main(["verify", str(path), "--no-jacobi"]) == ExitCode.FAILED
        out = capsys.readouterr().out
        assert "broken: FAIL" in out
        assert "jacobi:" in out

    def test_jacobi_failure_on_load(self, write_file):
        """Without --no-jacobi the file is rejected on load"""
        path = write_file("broken.lie", BAD_JACOBI)
        assert main(["verify", str(path)]) == ExitCode.PRECONDITION

    def test_parse_error(self, write_file):
        """Malformed files exit with the parse error code"""
        path = write_file("bad.lie", "dim: 3\nd e3 = e1^e9\n")
        assert main(["verify", str(path)]) == ExitCode.PARSE_ERROR

    def test_unknown_name(self):
        """Unknown catalog names exit with 3"""
        assert main(["nik", "nope"]) == ExitCode.UNKNOWN_NAME

    def test_nikolayevsky_failure(self, mocker):
        """A failed semisimple part is a precondition error, not a traceback"""
        mocker.patch("src.cli.nikolayevsky", side_effect=NikolayevskyError("did not converge"))
        assert main(["nik", "g11"]) == ExitCode.PRECONDITION


class TestUsage:
    """Tests for argument handling"""

    def test_no_command(self):
        """A command is required"""
        assert main([]) == ExitCode.USAGE

    def test_help(self):
        """--help exits cleanly"""
        assert main(["--help"]) == ExitCode.OK

    @pytest.mark.parametrize("argv", [["free", "1", "3"], ["free", "2", "0"], ["family", "11"], ["free", "x", "2"]])
    def test_invalid_arguments(self, argv):
        """Out-of-range or malformed arguments are usage errors"""
        assert main(argv) == ExitCode.USAGE


class TestConstructionsAndProofs:
    """Tests for cotangent, family and replay"""

    def test_cotangent_of_entry(self, capsys):
        """cotangent ext5 emits a 10-dimensional document"""
        assert main(["cotangent", "ext5"]) == ExitCode.OK
        out = capsys.readouterr().out
        assert out.startswith("name: T*ext5\ndim: 10\n")
        assert "\ng = " in out

    def test_cotangent_of_free(self, capsys):
        """cotangent n_{2,3} runs the structure checks"""
        assert main(["cotangent", "n_{2,3}"]) == ExitCode.OK
        out = capsys.readouterr().out
        assert "# step: PASS" in out
        assert "# graded irreducibility: irreducible" in out

    def test_family(self, capsys):
        """family 13 prints the document and a passing certificate"""
        assert main(["family", "13"]) == ExitCode.OK
        out = capsys.readouterr().out
        assert out.startswith("name: g13\ndim: 13\n")
        assert "= ntilde10 + R^" in out
        assert out.rstrip().splitlines()[-1].startswith("# PASS")

    def test_replay(self, capsys):
        """replay nonnice11 ends in a contradiction"""
        assert main(["replay", "nonnice11"]) == ExitCode.OK
        out = capsys.readouterr().out.strip().splitlines()
        assert out[0] == "target g11"
        assert out[-1] == "CONTRADICTION"

    def test_replay_inconclusive(self, write_file):
        """A script without a terminal step exits with 6"""
        path = write_file("open.proof", "target g11\n1. E12, E34, E567, E89, E1011 := eigenspaces\n")
        assert main(["replay", str(path)]) == ExitCode.INCONCLUSIVE

    def test_replay_step_failure(self, write_file):
        """A failing step exits with 5"""
        path = write_file("wrong.proof", "target g11\n1. E12, E34, E567, E89, E1011 := eigenspaces\n"
                                         "2. e3 := bracket_span E12 E12 expect span(e4)\n")
        assert main(["replay", str(path)]) == ExitCode.STEP_FAILURE

    def test_replay_missing_file(self):
        """A missing script exits with 3"""
        assert main(["replay", "does-not-exist.proof"]) == ExitCode.UNKNOWN_NAME

    @pytest.mark.slow
    def test_report(self, capsys):
        """report --max-k 13 passes"""
        assert main(["report", "--max-k", "13"]) == ExitCode.OK
        assert capsys.readouterr().out.rstrip().endswith("ALL PASS")
