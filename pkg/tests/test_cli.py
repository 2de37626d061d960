import json
import subprocess
import sys

import pytest

from homlie.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def verdict(doc, name):
    return next(v for v in doc["verdicts"] if v["name"] == name)


# -- check -----------------------------------------------------------------------


def test_check_sl2_passes(capsys, fixtures):
    code, out, _ = run(capsys, "check", fixtures / "sl2.json")
    assert code == 0
    assert out.startswith("check: PASS")


def test_check_qsl2_reports_multiplicativity_failure(capsys, fixtures):
    code, doc = run_json(capsys, "check", fixtures / "qsl2_q2.json")
    assert code == 1
    assert not verdict(doc, "multiplicative")["pass"]
    assert verdict(doc, "hom_jacobi")["pass"]
    w = doc["result"]["witnesses"]["multiplicative"]
    assert w["at"] == ["e", "f"]
    assert w["lhs"] == ["3/2", "0", "0"] and w["rhs"] == ["27/16", "0", "0"]


@pytest.mark.parametrize("name", ["yau_sl2_2.json", "abelian2.json", "sl2_approx.json", "z4_hom.json"])
def test_check_passing_fixtures(capsys, fixtures, name):
    assert run(capsys, "check", fixtures / name)[0] == 0


def test_check_bad_group_fixture(capsys, fixtures):
    code, doc = run_json(capsys, "check", fixtures / "z4_bad_twist.json")
    assert code == 1
    assert not verdict(doc, "twist_multiplicative")["pass"]


def test_input_errors_exit_two(capsys, fixtures, tmp_path):
    code, _, err = run(capsys, "check", fixtures / "garbage.json")
    assert code == 2 and "not valid JSON" in err
    assert run(capsys, "check", tmp_path / "missing.json")[0] == 2
    other = tmp_path / "other.json"
    other.write_text('{"hello": 1}')
    assert run(capsys, "check", other)[0] == 2
    code, doc = run_json(capsys, "check", fixtures / "garbage.json")
    assert code == 2 and doc["ok"] is False and doc["error"] == "InputError"


# -- cohomology ------------------------------------------------------------------


def test_cohomology_sl2(capsys, fixtures):
    code, doc = run_json(capsys, "cohomology", fixtures / "sl2.json", "--rep", "adjoint", "--max-degree", "2")
    assert code == 0
    assert [(c["Z"], c["B"], c["H"]) for c in doc["result"]["cohomology"]] == [(0, 0, 0), (3, 3, 0), (6, 6, 0)]
    assert verdict(doc, "d_squared_zero_k1")["pass"]


def test_cohomology_trivial_abelian(capsys, fixtures):
    code, doc = run_json(capsys, "cohomology", fixtures / "abelian2.json", "--rep", "trivial", "--max-degree", "2")
    assert code == 0
    assert [c["H"] for c in doc["result"]["cohomology"]] == [1, 2, 1]
    code, doc = run_json(capsys, "cohomology", "--rep-file", fixtures / "rep_trivial_abelian2.json")
    assert code == 0 and [c["H"] for c in doc["result"]["cohomology"]] == [1, 2, 1]


def test_cohomology_rejections(capsys, fixtures):
    code, doc = run_json(capsys, "cohomology", fixtures / "qsl2_q2.json", "--rep", "adjoint")
    assert code == 2 and doc["error"] == "NotMultiplicative"
    assert run(capsys, "cohomology", fixtures / "sl2_approx.json")[0] == 2
    assert run(capsys, "cohomology", fixtures / "sl2.json", "--max-degree", "9")[0] == 2
    code, doc = run_json(capsys, "cohomology", "--rep-file", fixtures / "rep_bad.json")
    assert code == 1 and not verdict(doc, "bracket_compatible")["pass"]


def test_cohomology_needs_a_source(capsys):
    with pytest.raises(SystemExit) as info:
        main(["cohomology"])
    assert info.value.code == 2
    capsys.readouterr()


# -- derivations / matrices ------------------------------------------------------


def test_derivations_sl2(capsys, fixtures):
    code, doc = run_json(capsys, "derivations", fixtures / "sl2.json")
    assert code == 0
    r = doc["result"]
    assert (r["dim"], r["inner"], r["outer"]) == (3, 3, 0)
    assert len(r["basis"]) == 3


def test_derivations_yau(capsys, fixtures):
    code, doc = run_json(capsys, "derivations", fixtures / "yau_sl2_2.json")
    assert code == 0 and doc["result"]["dim"] >= doc["result"]["inner"]


def test_hexp_nilpotent(capsys, fixtures):
    code, doc = run_json(capsys, "hexp", "--beta", fixtures / "I2.json", "--matrix", fixtures / "N.json", "--t", "1")
    assert code == 0
    assert doc["result"]["hexp"]["entries"] == [[1.0, 1.0], [0.0, 1.0]]


def test_hexp_singular_beta(capsys, fixtures):
    code, doc = run_json(capsys, "hexp", "--beta", fixtures / "singular2.json", "--matrix", fixtures / "N.json")
    assert code == 2 and doc["error"] == "SingularMatrix"


def test_verify_commutator(capsys, fixtures):
    args = ["verify-commutator", "--beta", fixtures / "diag12.json", "--A", fixtures / "E12.json", "--B", fixtures / "E21.json"]
    code, doc = run_json(capsys, *args, "--step", "1e-4")
    assert code == 0 and doc["result"]["residual"] <= 1e-6
    assert run(capsys, *args, "--step", "0.5")[0] == 2


# -- groups ----------------------------------------------------------------------


def test_group_commands(capsys, fixtures):
    assert run(capsys, "group", "check", fixtures / "z4_hom.json")[0] == 0
    assert run(capsys, "group", "check", fixtures / "z4_bad_twist.json")[0] == 1
    assert run(capsys, "group", "adaction", fixtures / "z4_hom.json")[0] == 0
    assert run(capsys, "group", "adaction", fixtures / "z4_bad_twist.json")[0] == 1


def test_group_weakhom(capsys, fixtures):
    z4 = fixtures / "z4_hom.json"
    code, doc = run_json(capsys, "group", "weakhom", "--src", z4, "--dst", z4, "--map", fixtures / "z4_twist_map.json")
    assert code == 0 and doc["result"]["homomorphism"]
    code, doc = run_json(capsys, "group", "weakhom", "--src", z4, "--dst", z4, "--map", fixtures / "z4_shift_map.json")
    assert code == 1 and not verdict(doc, "unit_preserved")["pass"]


# -- cross-cutting ---------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "qsl2_q2.json"],
        ["cohomology", "yau_sl2_2.json"],
        ["derivations", "yau_sl2_2.json"],
        ["group", "check", "z4_hom.json"],
    ],
)
def test_json_is_byte_identical(capsys, fixtures, argv):
    argv = argv[:-1] + [fixtures / argv[-1]]
    first = run(capsys, *argv, "--json")[1]
    second = run(capsys, *argv, "--json")[1]
    assert first == second
    assert "elapsed" not in first


def test_text_report_shows_timing(capsys, fixtures):
    out = run(capsys, "derivations", fixtures / "sl2.json")[1]
    assert out.rstrip().endswith("ms)")


@pytest.mark.parametrize("value", ["0", "-1", "many"])
def test_threads_env_validated(capsys, fixtures, monkeypatch, value):
    monkeypatch.setenv("HOMLIE_THREADS", value)
    assert run(capsys, "check", fixtures / "sl2.json")[0] == 2


def test_threads_env_accepted(capsys, fixtures, monkeypatch):
    monkeypatch.setenv("HOMLIE_THREADS", "4")
    assert run(capsys, "check", fixtures / "sl2.json")[0] == 0


def test_module_entry_point(fixtures):
    proc = subprocess.run(
        [sys.executable, "-m", "homlie", "check", str(fixtures / "qsl2_q2.json")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 1
    assert "multiplicative" in proc.stdout
