import json
import subprocess
import sys

import pytest

from hkderived.cli import OutputEnvelope, main, to_jsonable
from fractions import Fraction


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_classify_json(capsys):
    code, out = run(capsys, "classify", "--d", "1", "--div", "1", "--json")
    data = json.loads(out)
    assert code == 0 and data["result"]["kind"] == "Derived"
    assert data["result"]["partners_mod_negation"] == 2
    code, out = run(capsys, "classify", "--d", "12", "--div", "1", "--json")
    assert json.loads(out)["result"]["kind"] == "TwistedHalfDelta"
    code, out = run(capsys, "classify", "--d", "3", "--div", "2", "--json")
    assert json.loads(out)["result"]["kind"] == "Derived"
    assert json.loads(out)["warnings"]


def test_decompose(capsys):
    code, out = run(capsys, "decompose", "--d", "10", "--a", "9", "--b", "0", "--json")
    res = json.loads(out)["result"]
    assert code == 0
    assert [(s["r"], s["s"], s["l"]) for s in res["steps"]] == [(2, 7, 2)]
    assert res["steps"][0]["twists"] == ["delta/2", "delta/2"]
    code, out = run(capsys, "decompose", "--d", "5", "--a", "4", "--b", "1", "--json")
    assert json.loads(out)["result"]["steps"][0]["twists"] == ["trivial", "trivial"]
    code, out = run(capsys, "decompose", "--d", "15", "--a", "4", "--div", "2", "--json")
    step = json.loads(out)["result"]["steps"][0]
    assert (step["r"], step["s"], step["l"]) == (3, 2, 3)


def test_disc(capsys):
    code, out = run(capsys, "disc", "--d", "2", "--div", "1", "--json")
    res = json.loads(out)["result"]
    assert res["orders"] == [4, 2] and res["quads"] == ["7/4", "3/2"]
    code, out = run(capsys, "disc", "--d", "3", "--div", "2", "--json")
    assert json.loads(out)["result"]["orders"] == [3]
    _, red = run(capsys, "disc", "--d", "10", "--json")
    _, full = run(capsys, "disc", "--d", "10", "--model", "full", "--json")
    r, f = json.loads(red)["result"], json.loads(full)["result"]
    for key in ("orders", "quads", "bil", "gluing_index", "size"):
        assert r[key] == f[key]


def test_verify(capsys):
    code, out = run(capsys, "verify", "--suite", "congruence-counts", "--max-d", "300", "--json")
    data = json.loads(out)
    assert code == 0 and data["result"]["passes"] == 299
    code, out = run(capsys, "verify", "--suite", "rho-closed-form", "--max-d", "6", "--json")
    assert code == 0 and json.loads(out)["result"]["notes"]


def test_exit_codes(capsys):
    assert main(["verify", "--suite", "nope"]) == 1
    assert main(["classify"]) == 1
    assert main([]) == 1
    assert main(["verify", "--suite", "partner-counts", "--jobs", "0"]) == 1
    assert main(["classify", "--d", "5", "--div", "2"]) == 2
    assert main(["decompose", "--d", "10", "--a", "2"]) == 2
    assert main(["disc", "--d", "0"]) == 2
    capsys.readouterr()


def test_verification_failure_exit_code(capsys, monkeypatch):
    from hkderived import cli
    from hkderived.oracle import VerificationReport

    def broken(name, max_d, jobs):
        rep = VerificationReport(name, {})
        rep.record({"d": 1}, False, 1, 2)
        return rep

    monkeypatch.setattr(cli, "run_suite", broken)
    assert main(["verify", "--suite", "partner-counts"]) == 3
    capsys.readouterr()


def test_text_output(capsys):
    code, out = run(capsys, "classify", "--d", "13")
    assert code == 0 and "kind" in out and "warning:" in out


@pytest.mark.parametrize("argv", [
    ["classify", "--d", "13", "--json"],
    ["decompose", "--d", "13", "--a", "12", "--b", "1", "--json"],
    ["disc", "--d", "7", "--div", "2", "--json"],
    ["verify", "--suite", "partner-counts", "--max-d", "20", "--json"],
])
def test_envelope_round_trip(capsys, argv):
    _, out = run(capsys, *argv)
    env = OutputEnvelope.from_json(out)
    assert env.to_json() == out.rstrip("\n")
    assert OutputEnvelope.from_json(env.to_json()) == env


def test_deterministic_across_jobs(capsys):
    _, a = run(capsys, "verify", "--suite", "twist-rules", "--max-d", "8", "--json")
    _, b = run(capsys, "verify", "--suite", "twist-rules", "--max-d", "8", "--jobs", "2", "--json")
    ja, jb = json.loads(a), json.loads(b)
    ja["inputs"].pop("jobs"), jb["inputs"].pop("jobs")
    assert ja == jb


def test_to_jsonable():
    assert to_jsonable(Fraction(3, 4)) == "3/4" and to_jsonable(Fraction(4, 2)) == 2
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "hkderived", "classify", "--d", "5", "--json"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["result"]["kind"] == "Derived"
