import io
import json
import os
import subprocess
import sys

import pytest

from genramsey.cli import main

SPECS = os.path.join(os.path.dirname(__file__), os.pardir, "specs")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def spec(name):
    return os.path.join(SPECS, name)


def test_classical_33():
    code, out = run("classical", "3", "3", "--horizon", "8")
    rep = json.loads(out)
    assert code == 0 and rep["candidate_value"] == 6 and rep["soundness"] == "exact"


def test_classical_exit_codes():
    assert run("classical", "2", "2", "--horizon", "4")[0] == 0
    assert json.loads(run("classical", "2", "2", "--horizon", "4")[1])["candidate_value"] == 2
    code, out = run("classical", "3", "3", "--horizon", "4")
    assert code == 2 and json.loads(out)["candidate_value"] is None


def test_general_matches_classical():
    assert run("general", spec("r33.json"))[1] == run("classical", "3", "3")[1]


def test_general_errors(tmp_path, capsys):
    assert run("general", spec("not_hereditary.json"))[0] == 1
    assert "member 0 does not embed in member 1" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"family": {"kind": "K"}, "alphabet": [0], "symbol": {"uniform": True, "targets": []}, "extra": 1}))
    assert run("general", str(bad))[0] == 1
    assert "$.extra" in capsys.readouterr().err
    code, out = run("general", spec("six_letters.json"))
    assert code == 2 and not json.loads(out)["classification"]["galois_type"]


def test_indicator_commands(capsys):
    code, out = run("indicator", "eval", spec("k4_triangles.json"), "--coloring", "1,1,0,0,1,0")
    assert code == 0 and json.loads(out)["value"] == 1
    code, out = run("indicator", "member", spec("k6_triangles.json"))
    res = json.loads(out)
    assert res["member"] is True and res["routes"] == {"reduction": True, "evaluation": True}
    assert json.loads(run("indicator", "member", spec("k4_triangles.json"))[1])["member"] is False
    code, out = run("indicator", "expand", spec("constant_one.json"))
    assert json.loads(out)["terms"] == [{"exps": [0], "coef": [1]}]
    code, _ = run("indicator", "expand", spec("k6_triangles.json"), "--capacity", "1000")
    assert code == 3 and "bound 1000" in capsys.readouterr().err


def test_capacity_env(monkeypatch):
    monkeypatch.setenv("GENRAMSEY_CAPACITY", "50")
    assert run("classical", "3", "3", "--horizon", "6")[0] == 3


def test_primes_commands():
    code, out = run("primes", "ap", "--t", "3", "--k", "6", "--m", "1", "--sieve-bound", "10000")
    rep = json.loads(out)
    assert code == 0 and rep["candidate_value"] == 8 and rep["extras"]["realizing_primes"] == [5, 11, 17, 23]
    rep = json.loads(run("primes", "twin", "--m", "1", "--sieve-bound", "10000")[1])
    assert rep["candidate_value"] == 2 and rep["extras"]["realizing_primes"] == [3, 5]
    rep = json.loads(run("primes", "polignac", "--t", "1", "--m", "1", "--mode", "both", "--sieve-bound", "10000")[1])
    assert rep["extras"]["mode_agreement"] is True
    rows = json.loads(run("primes", "zhang-scan", "--sieve-bound", "10000")[1])["table"]
    assert all(r["found_for_all_m"] for r in rows)


def test_sieve_bound_exit(monkeypatch, capsys):
    assert run("primes", "twin", "--m", "1", "--sieve-bound", "20")[0] == 4
    assert "required" in capsys.readouterr().err
    monkeypatch.setenv("GENRAMSEY_SIEVE_BOUND", "20")
    assert run("primes", "twin", "--m", "1")[0] == 4


def test_polignac_exhaustive_capacity():
    assert run("primes", "polignac", "--t", "1", "--mode", "exhaustive", "--sieve-bound", "1000")[0] == 3


def test_table_format():
    code, out = run("classical", "3", "3", "--format", "table")
    assert out.splitlines()[0].startswith("candidate: 6")
    assert "inferred" in out


def test_workers_byte_identical():
    assert run("classical", "3", "3", "--workers", "1")[1] == run("classical", "3", "3", "--workers", "3")[1]


def test_figure_flag(tmp_path):
    fig = tmp_path / "trace.png"
    assert run("classical", "3", "3", "--horizon", "6", "--figure", str(fig))[0] == 0
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_selftest_command():
    code, out = run("selftest", "--only", "field", "--only", "|K4/K3|")
    res = json.loads(out)
    assert code == 0 and res["passed"] and len(res["results"]) == 5


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "genramsey", "classical", "2", "2", "--horizon", "3"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["candidate_value"] == 2


def test_argparse_rejects_bad_numbers():
    with pytest.raises(SystemExit):
        main(["classical", "0", "3"])
    with pytest.raises(SystemExit):
        main(["classical", "3", "--workers", "0"])
