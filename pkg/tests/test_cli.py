import json

import pytest

from duflokit import checks
from duflokit.cli import main

BROKEN_SL2 = {
    "name": "bad-sl2",
    "dim": 3,
    "basis": ["e", "h", "f"],
    # [h, f] = +2f instead of -2f
    "brackets": [[0, 1, [[0, "-2"]]], [0, 2, [[1, "1"]]], [1, 2, [[2, "2"]]]],
}


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def broken(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(BROKEN_SL2))
    return str(p)


def test_jacobi_pass(capsys):
    code, out, _ = run(["check", "--check-id", "jacobi", "--algebra", "sl2"], capsys)
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_jacobi_broken_file(broken, capsys):
    code, out, _ = run(["check", "--check-id", "jacobi", "--algebra", broken], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["status"] == "fail"
    case = rep["cases"][0]
    assert case["violation"][:3] == [0, 1, 2]
    assert "(e, h, f)" in case["message"]


def test_other_checks_reject_broken_algebra(broken, capsys):
    code, _, err = run(["check", "--check-id", "duflo-hom", "--algebra", broken], capsys)
    assert code == 2 and "invalid algebra" in err


@pytest.mark.parametrize("argv", [
    ["check", "--check-id", "nope"],
    ["check", "--check-id", "jacobi", "--algebra", "so(5)"],
    ["check", "--check-id", "jacobi", "--algebra", "/no/such/file.json"],
    ["apply", "--map", "duflo", "--poly", "h^"],
    ["apply", "--map", "duflo", "--input", "{not json"],
    ["apply", "--map", "duflo", "--poly", "0.5*h"],
    ["trace", "--k", "0"],
    ["coeffs", "--max-k", "1"],
    ["invariants", "--degree", "-1"],
    ["coinvariants", "--degree", "2", "--poly", "h^3"],
])
def test_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err


def test_apply_duflo_casimir(capsys):
    omega = json.dumps({"terms": [{"exps": [0, 2, 0], "coeff": "1"},
                                  {"exps": [1, 0, 1], "coeff": "4"}]})
    code, out, _ = run(["apply", "--map", "duflo", "--algebra", "sl2", "--input", omega], capsys)
    assert code == 0
    assert json.loads(out)["text"] == "4*e*f + h^2 - 2*h + 1"
    code, out2, _ = run(["apply", "--map", "duflo", "--poly", "h^2 + 4*e*f"], capsys)
    assert json.loads(out2) == json.loads(out)


def test_apply_inverse_round_trip(capsys, tmp_path):
    code, out, _ = run(["apply", "--map", "duflo", "--poly", "h^2 + 4*e*f"], capsys)
    p = tmp_path / "u.json"
    p.write_text(out)
    code, back, _ = run(["apply", "--map", "duflo-inv", "--input", str(p)], capsys)
    assert code == 0 and json.loads(back)["text"] == "4*e*f + h^2"


def test_apply_strange_and_pbw(capsys):
    _, out, _ = run(["apply", "--map", "strange", "--poly", "h^2 + 4*e*f"], capsys)
    assert json.loads(out)["text"] == "4*e*f + h^2 + 1"
    _, out, _ = run(["apply", "--map", "pbw", "--poly", "4*e*f"], capsys)
    assert json.loads(out)["text"] == "4*e*f - 2*h"


def test_star_gutt(capsys):
    _, ef, _ = run(["star", "--flavor", "gutt", "--left-poly", "e", "--right-poly", "f"], capsys)
    _, fe, _ = run(["star", "--flavor", "gutt", "--left-poly", "f", "--right-poly", "e"], capsys)
    assert json.loads(ef)["text"] == "e*f + 1/2*h"
    assert json.loads(fe)["text"] == "e*f - 1/2*h"


def test_invariants_and_trace(capsys):
    _, out, _ = run(["invariants", "--degree", "2"], capsys)
    assert json.loads(out)["dim"] == 1
    _, out, _ = run(["trace", "--k", "2"], capsys)
    assert json.loads(out)["text"] == "8*de*df + 8*dh^2"


def test_coinvariants(capsys):
    code, out, _ = run(["coinvariants", "--degree", "1", "--algebra", "heisenberg3",
                        "--poly", "x + 3*z"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["dim"] == 2 and rep["g_bracket_span_dim"] == 1
    assert rep["class"]["text"] == "x"


def test_coeffs(capsys):
    _, out, _ = run(["coeffs", "--max-k", "4"], capsys)
    assert json.loads(out)["alpha"] == {"2": "1/48", "4": "-1/5760"}


def test_catalog(capsys):
    code, out, _ = run(["catalog", "--list"], capsys)
    names = out.split()
    assert code == 0 and "sl2" in names and "heisenberg3" in names
    _, out, _ = run(["catalog", "--show", "aff1"], capsys)
    assert json.loads(out)["basis"] == ["x", "y"]


def test_out_file(capsys, tmp_path):
    p = tmp_path / "r.json"
    code, out, _ = run(["check", "--check-id", "odd-traces", "--algebra", "aff1",
                        "--max-degree", "3", "--out", str(p)], capsys)
    assert code == 0 and out == ""
    assert json.loads(p.read_text())["empirical"] is True


@pytest.mark.parametrize("check_id", ["pbw-roundtrip", "star-assoc", "extract-c"])
def test_report_determinism(check_id, capsys):
    argv = ["check", "--check-id", check_id, "--algebra", "aff1", "--max-degree", "3", "--seed", "7"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b
    _, c, _ = run(argv[:-1] + ["8"], capsys)
    if check_id != "extract-c":  # exhaustive checks ignore the seed
        assert c != a


def test_timing_is_opt_in():
    spec = checks.CheckSpec("jacobi", "sl2", 2)
    assert "wall_time" not in checks.run_check(spec)
    assert "wall_time" in checks.run_check(spec, timing=True)


def test_extract_c_case_schema():
    rep = checks.run_check(checks.CheckSpec("extract-c", "sl2", 2))
    assert rep["status"] == "pass"
    for case in rep["cases"]:
        assert set(case) >= {"alpha", "beta", "c", "witness", "containment", "outcome"}
        assert case["containment"] == "g-span"
        for label, coeff in case["witness"]:
            assert label.startswith("{") and "/" in coeff or coeff.lstrip("-").isdigit()


def test_sampled_checks_state_samples():
    for cid in ("pbw-roundtrip", "pbw-confluence", "pbw-module-map"):
        rep = checks.run_check(checks.CheckSpec(cid, "abelian(1)", 2))
        assert rep["samples"] >= checks.MIN_SAMPLES
    rep = checks.run_check(checks.CheckSpec("star-assoc", "abelian(1)", 2, samples=3))
    assert rep["samples"] == checks.MIN_SAMPLES


def test_odd_traces_aff1_labels_nonzero_trace():
    rep = checks.run_check(checks.CheckSpec("odd-traces", "aff1", 4))
    assert rep["status"] == "pass"
    assert any(c["k"] == 1 and not c["trace_element_zero"] for c in rep["cases"])


def test_suite_battery_covers_every_check():
    ids = {s.check_id for s in checks.suite_battery(4)}
    assert ids == set(checks.CHECK_IDS)
