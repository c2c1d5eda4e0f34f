import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from rlab import cli
from rlab.rigidity import RigidityReport

GOLDEN = Path(__file__).parent / "golden"
PLANE = """field F101
ring P = poly(x, y)
module M = coker(rows=1, [[x]])
module K = coker(rows=1, [[x, y]])
prime m = ideal(x, y)
prime px = ideal(x)
prime py = ideal(y)
prime z = ideal()
"""


def run(*argv, stdin=None):
    p = subprocess.run(
        [sys.executable, "-m", "rlab.cli", *argv], input=stdin, capture_output=True, text=True
    )
    return p.returncode, p.stdout, p.stderr


@pytest.fixture
def plane(tmp_path):
    f = tmp_path / "plane.rig"
    f.write_text(PLANE)
    return str(f)


def call(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr().out


def test_tor_table_gallery_d1(capsys):
    code, out = call(["tor", "--input", "builtin:example4-d1", "--module", "N", "--prime", "m", "--bound", "8"], capsys)
    assert code == 0
    rows = [l.split() for l in out.splitlines()[2:]]
    assert len(rows) == 9
    assert [int(r[1]) for r in rows] == [1, 1, 2, 3, 5, 8, 13, 21, 34]
    assert "threshold" in out.splitlines()[3]


def test_tor_json_schema(capsys, plane):
    code, out = call(["--json", "tor", "--input", plane, "--module", "M", "--prime", "m", "--bound", "4"], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["ranks"] == [1, 1, 0, 0, 0]
    assert {"ring", "object", "prime", "bound", "ranks", "threshold", "session_hash"} <= set(d)


def test_ext_non_maximal(capsys, plane):
    code, out = call(["ext", "--input", plane, "--module", "M", "--prime", "px", "--bound", "3", "--json"], capsys)
    assert json.loads(out)["localized_nonzero"] == [True, True, False, False]


def test_invariants(capsys, plane):
    code, out = call(["invariants", "--input", plane, "--module", "M", "--json", "--bound", "5"], capsys)
    d = json.loads(out)
    assert (d["depth"], d["proj_dim"], d["inj_dim"]) == (1, 1, 2)


def test_resolve_and_koszul(capsys, plane):
    code, out = call(["resolve", "--input", plane, "--module", "K", "--bound", "4"], capsys)
    assert code == 0
    code, out = call(["koszul", "--input", plane, "--module", "K", "--json"], capsys)
    assert code == 0 and json.loads(out)


@pytest.mark.parametrize(
    "kind,extra",
    [
        ("t1", ["--prime", "m"]),
        ("t2", ["--prime", "px"]),
        ("t3max", ["--prime", "m"]),
        ("p34", []),
        ("ab", []),
        ("bass", []),
        ("chouinard", ["--primes", "m,px,py,z"]),
        ("chouinard", ["--primes", "m,px,py,z", "--mode", "injective"]),
    ],
)
def test_checks_exit_zero(capsys, plane, kind, extra):
    code, out = call(["check", kind, "--input", plane, "--module", "M", "--bound", "6", "--json", *extra], capsys)
    assert code == 0
    assert json.loads(out)["verdict"] != "VIOLATION"


def test_usage_errors(capsys, plane):
    assert run("tor", "--bogus")[0] == 1
    assert cli.main(["check", "t3max", "--input", plane, "--module", "M", "--prime", "px"]) == 1
    assert cli.main(["check", "chouinard", "--input", plane, "--module", "M", "--primes", "px"]) == 1
    assert cli.main(["tor", "--input", plane, "--module", "nope"]) == 1
    assert cli.main(["gallery", "example4", "--d", "5"]) == 1
    assert cli.main(["gallery", "example4", "--d", "1", "--bound", "3"]) == 1


def test_parse_error_exit(tmp_path):
    f = tmp_path / "bad.rig"
    f.write_text("ring R = poly(x)/ideal(1)\n")
    code, _, err = run("tor", "--input", str(f), "--module", "R")
    assert code == 1 and "UnitIdeal" in err


def test_stdin_session():
    code, out, _ = run("--json", "tor", "--input", "-", "--module", "M", "--bound", "3", stdin=PLANE)
    assert code == 0 and json.loads(out)["ranks"] == [1, 1, 0, 0]


def test_violation_exits_two(monkeypatch, capsys, plane):
    def fake(*a, **k):
        return RigidityReport("T1", 0, 0, False, 1, "VIOLATION", [0, 1])

    monkeypatch.setattr(cli, "check_tor_rigidity", fake)
    assert cli.main(["check", "t1", "--input", plane, "--module", "M", "--prime", "m"]) == 2


def test_bad_thread_count(monkeypatch):
    monkeypatch.setenv("RL_THREADS", "zero")
    assert cli.main(["gallery", "example4"]) == 1


def test_gallery_verdict(capsys):
    code, out = call(["gallery", "example4", "--d", "1", "--json"], capsys)
    assert code == 0
    assert json.loads(out)["verdict"] == "rigid-threshold-sharp"


@pytest.mark.parametrize("d", [1, 2])
def test_gallery_golden_and_deterministic(d):
    a = run("gallery", "example4", "--d", str(d), "--json")
    b = run("gallery", "example4", "--d", str(d), "--json")
    assert a[0] == 0 and a[1] == b[1]
    assert a[1] == (GOLDEN / f"example4-d{d}.json").read_text()


def test_fixture_summary(capsys):
    code, out = call(["gallery", "fixtures", "--count", "5", "--json"], capsys)
    d = json.loads(out)
    assert code == 0 and d["count"] == 5 and d["violations"] == []


def test_timings_only_in_human_mode(capsys):
    _, out = call(["--timings", "gallery", "example4"], capsys)
    assert "elapsed" in out
    _, out = call(["--timings", "--json", "gallery", "example4"], capsys)
    assert "elapsed" not in out
