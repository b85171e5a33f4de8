import csv
import io
import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from grasscode.cli import SCHEMA_VERSION, int_range, main
from grasscode.codefile import read_code
from grasscode.designs import verify_code, verify_covering, verify_turan

SUBCOMMANDS = ["bounds", "enumerate", "spread", "match", "verify", "convert", "dual",
               "lift", "turan-dual", "cyclic-search"]


def run(*argv):
    return main([str(a) for a in argv])


def reparse(path, check):
    """Every emitted code file must parse back and pass its own check."""
    code, comments = read_code(path)
    assert any(c.startswith("config: ") for c in comments)
    assert check(code).valid
    return code


@pytest.fixture
def spread_file(tmp_path):
    path = tmp_path / "s.code"
    assert run("spread", "--q", 2, "--n", 4, "--k", 2, "--out", path) == 0
    return path


def test_int_range():
    assert int_range("4..8") == [4, 5, 6, 7, 8]
    assert int_range("2,3,7") == [2, 3, 7]
    assert int_range("1..2,5") == [1, 2, 5]


def test_help_lists_every_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert all(name in out for name in SUBCOMMANDS)


def test_unknown_flag_fails_loudly(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["spread", "--n", "4", "--k", "2", "--bogus"])
    assert exc.value.code == 2
    assert "bogus" in capsys.readouterr().err


def test_randomized_commands_require_seed(capsys):
    for argv in (["match", "--n", "4", "--k", "2", "--delta", "1"],
                 ["cyclic-search", "--n", "4", "--k", "2", "--d", "4"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


def test_bounds_csv(capsys):
    assert run("bounds", "--q", 2, "--n", "4..8", "--k", 3, "--delta", 1, "--format", "csv") == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# config: ")
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert list(rows[0]) == ["q", "n", "k", "delta", "packing", "iterated_johnson",
                             "covering", "iterated_schonheim"]
    assert [int(r["n"]) for r in rows] == [4, 5, 6, 7, 8]
    six = rows[2]
    assert (six["packing"], six["iterated_johnson"], six["covering"]) == ("93", "90", "93")


def test_bounds_json_and_closed_form(capsys):
    assert run("bounds", "--n", 6, "--k", 3, "--delta", "0..3") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema_version"] == SCHEMA_VERSION and doc["config"]["subcommand"] == "bounds"
    packing = [r for r in doc["results"] if r["kind"] == "packing"]
    assert [r["value"] for r in packing] == ["1395", "93", "9", "1"]
    assert run("bounds", "--closed-form", "covering_thm6", "--t", 1, "--r", 1) == 0
    doc = json.loads(capsys.readouterr().out)
    (res,) = doc["results"]
    assert res["value"] == "3" and "sufficiently large n" in res["caveat"]


def test_bounds_needs_grid():
    with pytest.raises(SystemExit):
        main(["bounds", "--n", "4"])


def test_spread_then_verify(spread_file, tmp_path):
    report = tmp_path / "r.json"
    assert run("verify", "--file", spread_file, "--min-distance", 4, "--report", report) == 0
    doc = json.loads(report.read_text())
    assert doc["valid"] and doc["stats"]["size"] == 5
    reparse(spread_file, lambda c: verify_code(c, 4))
    assert run("verify", "--file", spread_file, "--covering", 1) == 0


def test_verification_failure_exit_4(spread_file, tmp_path, capsys):
    assert run("verify", "--file", spread_file, "--turan", 3) == 0
    assert run("verify", "--file", spread_file, "--covering", 2) == 4
    path = tmp_path / "all.code"
    assert run("enumerate", "--q", 2, "--n", 4, "--k", 2, "--out", path) == 0
    assert run("verify", "--file", path, "--min-distance", 4) == 4
    assert run("convert", "--file", path, "--to", "covering", "--delta", 1) == 4


def test_cap_exit_3(tmp_path, capsys):
    assert run("--cap", 10, "enumerate", "--q", 2, "--n", 6, "--k", 3) == 3
    assert "cap" in capsys.readouterr().err


def test_bad_parameters_exit_2(capsys):
    assert run("spread", "--q", 2, "--n", 5, "--k", 2) == 2
    assert run("enumerate", "--q", 6, "--n", 3, "--k", 1) == 2


def test_env_cap_override(tmp_path):
    env = dict(os.environ, GRASSCODE_CAP="10")
    proc = subprocess.run([sys.executable, "-m", "grasscode", "enumerate", "--n", "6", "--k", "3"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 3
    env["GRASSCODE_CAP"] = "100000"
    proc = subprocess.run([sys.executable, "-m", "grasscode", "enumerate", "--n", "6", "--k", "3"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0 and proc.stdout.strip() == "1395"


def test_enumerate_count_and_extension_field(capsys, tmp_path):
    assert run("enumerate", "--q", 3, "--n", 4, "--k", 2) == 0
    assert capsys.readouterr().out.strip() == "130"
    path = tmp_path / "g4.code"
    assert run("enumerate", "--q", "2^2", "--n", 3, "--k", 1, "--out", path) == 0
    code, _ = read_code(path)
    assert len(code) == 21 and code.q == 4


@pytest.mark.parametrize("algo", ["greedy", "nibble"])
def test_match_is_byte_identical(tmp_path, algo):
    outs = []
    for name in ("a", "b"):
        out, stats = tmp_path / f"{name}.code", tmp_path / f"{name}.json"
        assert run("match", "--q", 2, "--n", 6, "--k", 3, "--delta", 1, "--algo", algo,
                   "--seed", 42, "--out", out, "--stats", stats) == 0
        outs.append((out.read_bytes(), stats.read_bytes()))
    assert outs[0] == outs[1]
    code = reparse(tmp_path / "a.code", lambda c: verify_code(c, 4))
    st = json.loads(outs[0][1])
    assert st["size"] == len(code) >= st["floor_guarantee"] == 14
    assert st["prng"] == "numpy-pcg64-v1" and st["seed"] == 42
    assert Fraction(st["ratio_to_packing"]["exact"]) == Fraction(len(code) * 7, 651)


def test_match_trivial_delta(tmp_path):
    out = tmp_path / "t.code"
    assert run("match", "--n", 4, "--k", 2, "--delta", 2, "--seed", 0, "--out", out) == 0
    code, _ = read_code(out)
    assert len(code) == 1


def test_convert_round_trip(spread_file, tmp_path):
    cov = tmp_path / "cov.code"
    assert run("convert", "--file", spread_file, "--to", "covering", "--delta", 1, "--out", cov) == 0
    reparse(cov, lambda c: verify_covering(c, 1))
    back = tmp_path / "back.code"
    assert run("convert", "--file", cov, "--to", "code", "--delta", 1, "--out", back) == 0
    assert reparse(back, lambda c: verify_code(c, 4)) == read_code(spread_file)[0]


def test_dual_and_lift(spread_file, tmp_path):
    dual = tmp_path / "d.code"
    assert run("dual", "--file", spread_file, "--min-distance", 4, "--out", dual) == 0
    reparse(dual, lambda c: verify_code(c, 4))
    lifted = tmp_path / "l.code"
    assert run("lift", "--file", spread_file, "--r", 1, "--out", lifted) == 0
    code = reparse(lifted, lambda c: verify_covering(c, 1))
    assert (code.n, code.k, len(code)) == (5, 3, 5)


def test_turan_dual_both_ways(spread_file, tmp_path):
    tur = tmp_path / "t.code"
    assert run("turan-dual", "--file", spread_file, "--role", "covering", "--param", 1, "--out", tur) == 0
    code = reparse(tur, lambda c: verify_turan(c, 3))
    assert (code.k, len(code)) == (2, 5)
    back = tmp_path / "c.code"
    assert run("turan-dual", "--file", tur, "--role", "turan", "--param", 3, "--out", back) == 0
    assert reparse(back, lambda c: verify_covering(c, 1)) == read_code(spread_file)[0]


def test_cyclic_search_with_sidecar(tmp_path):
    out = tmp_path / "cy.code"
    assert run("cyclic-search", "--q", 2, "--n", 4, "--k", 2, "--d", 4, "--seed", 0, "--out", out) == 0
    reparse(out, lambda c: verify_code(c, 4))
    side = json.loads((tmp_path / "cy.code.orbits.json").read_text())
    assert side["schema_version"] == SCHEMA_VERSION
    assert side["size"] == 5 and side["orbits"][0]["length"] == 5
    assert side["ratio_to_packing"] == {"exact": "1/1", "decimal": "1.0000"}
