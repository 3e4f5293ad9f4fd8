import json
import subprocess
import sys
from pathlib import Path

import pytest

from f4tori.cli import build_parser, load_datum_file, main

DATA = Path(__file__).parent / "data"


def run_cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "f4tori.cli", *argv],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


class TestClassify:
    @pytest.mark.parametrize("name,code,answer", [
        ("anisotropic_yes.toml", 0, "yes"),
        ("anisotropic_no.toml", 1, "no"),
        ("split_rrr_yes.toml", 0, "yes"),
        ("split_rc_yes.toml", 0, "yes"),
        ("rank1_rc_yes.toml", 0, "yes"),
        ("rank1_rc_no.toml", 1, "no"),
    ])
    def test_datum_files(self, capsys, name, code, answer):
        rc = main(["classify", str(DATA / name)])
        out = capsys.readouterr().out
        assert rc == code
        doc = json.loads(out)
        assert doc["answer"] == answer
        assert doc["conventions"]["rho_convention"].startswith("rho counts")
        assert "witnesses" in doc and "rho" in doc["witnesses"]

    def test_malformed_poly_exits_3(self, capsys):
        rc = main(["classify", str(DATA / "malformed.toml")])
        assert rc == 3

    def test_missing_file_exits_3(self):
        rc = main(["classify", str(DATA / "no_such_file.toml")])
        assert rc == 3

    def test_unknown_key_rejected(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text((DATA / "anisotropic_yes.toml").read_text()
                       .replace("[G]", "[G]\nrank = 3\n", 1)
                       .replace("rank = 3\n", "", 1) + "\n[extra]\nx = 1\n")
        rc = main(["classify", str(bad)])
        assert rc == 3

    def test_byte_identical_runs(self):
        rc1, out1, _ = run_cli("classify", str(DATA / "split_rc_yes.toml"))
        rc2, out2, _ = run_cli("classify", str(DATA / "split_rc_yes.toml"))
        assert rc1 == rc2 == 0
        assert out1 == out2
        assert out1.encode() == out2.encode()

    def test_loader_shape(self):
        datum, form, overrides, opts = load_datum_file(
            str(DATA / "anisotropic_yes.toml"))
        assert datum.beta == "opaque-token-1"
        assert form.value == "anisotropic"
        assert overrides == {}
        assert opts["prime_search_bound"] == 10000

    def test_overrides_parsed(self, tmp_path):
        text = (DATA / "anisotropic_yes.toml").read_text() + (
            "\n[[overrides.finite_splitting]]\n"
            "prime = 2\nfactor = 0\nall_split = false\n")
        f = tmp_path / "with_overrides.toml"
        f.write_text(text)
        datum, form, overrides, opts = load_datum_file(str(f))
        assert overrides == {(2, 0): False}
        rc = main(["classify", str(f)])
        assert rc == 0


class TestQform:
    def test_invariants(self, capsys):
        rc = main(["qform", "invariants", "1,1,-7"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc == {"dim": 3, "disc": 7, "hasse": [], "sig": [2, 1]}

    def test_clifford(self, capsys):
        rc = main(["qform", "clifford", "1,-1"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["trivial"] is True

    def test_clifford_odd_dim(self, capsys):
        rc = main(["qform", "clifford", "1,2,3"])
        assert rc == 0
        assert json.loads(capsys.readouterr().out)["trivial"] is False

    def test_isotropy(self, capsys):
        rc = main(["qform", "isotropy", "1,1,-7"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["isotropic"] is False
        assert doc["local"]["7"] is False
        assert doc["hyperbolic_rank"] == 0

    def test_equivalent(self, capsys):
        rc = main(["qform", "equivalent", "1,1", "2,2"])
        assert rc == 0
        assert json.loads(capsys.readouterr().out)["equivalent"] is True
        rc = main(["qform", "equivalent", "1,1", "1,-1"])
        assert json.loads(capsys.readouterr().out)["equivalent"] is False

    def test_parse_error(self, capsys):
        rc = main(["qform", "invariants", "1,0,2"])
        assert rc == 3
        rc = main(["qform", "invariants", "1,,"])
        assert rc == 3


class TestSelftest:
    def test_default_pass(self, capsys):
        rc = main(["selftest", "--trials", "25"])
        out = json.loads(capsys.readouterr().out)
        assert rc == 0
        assert out["passed"] is True
        assert out["composition_axioms"]["passed"] is True
        assert out["hilbert_reciprocity"]["passed"] is True

    def test_zero_trials_vacuous(self, capsys):
        rc = main(["selftest", "--trials", "0"])
        out = json.loads(capsys.readouterr().out)
        assert rc == 0
        assert "warning" in out

    def test_corruption_detected(self, capsys):
        rc = main(["selftest", "--trials", "25", "--corrupt-star-square"])
        out = json.loads(capsys.readouterr().out)
        assert rc == 1
        assert out["passed"] is False
        assert out["composition_axioms"]["failed"] == "star-square"
        assert "counterexample" in out["composition_axioms"]

    def test_seeded_reproducible(self):
        rc1, out1, _ = run_cli("selftest", "--trials", "10", "--seed", "7")
        rc2, out2, _ = run_cli("selftest", "--trials", "10", "--seed", "7")
        assert out1 == out2


def test_parser_structure():
    parser = build_parser()
    args = parser.parse_args(["qform", "equivalent", "1,1", "2,2"])
    assert args.subcommand == "equivalent" and args.other == "2,2"
