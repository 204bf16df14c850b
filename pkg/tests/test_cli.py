import json
import subprocess
import sys

import pytest

from octrans.cli import main

DIST_A = {"algebra": "scalar", "order": 3,
          "cumulants": {"psi": [["1"], ["1"], ["0"], ["0"]]}}
DIST_COND = {"algebra": "scalar", "order": 3,
             "cumulants": {"psi": [["1"], ["1"], ["0"], ["0"]],
                           "phi": [["1"], ["2"], ["1"], ["0"]]}}
UT2 = {"dim": 3, "unit": ["1", "0", "1"],
       "table": [[["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]],
                 [["0", "0", "0"], ["0", "0", "0"], ["0", "1", "0"]],
                 [["0", "0", "0"], ["0", "0", "0"], ["0", "0", "1"]]]}


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, doc in (("a", DIST_A), ("b", DIST_A), ("cond", DIST_COND),
                      ("ut2", UT2)):
        p = tmp_path / (name + ".json")
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    return paths


def run_cli(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_algebra(files, capsys):
    code, out, _ = run_cli(["validate-algebra", files["ut2"]], capsys)
    assert code == 0
    assert json.loads(out)["valid"] is True


def test_validate_algebra_failure(tmp_path, capsys):
    bad = {"dim": 2, "unit": ["1", "0"],
           "table": [[["0", "1"], ["0", "0"]], [["1", "0"], ["0", "0"]]]}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    code, out, _ = run_cli(["validate-algebra", str(p)], capsys)
    assert code == 1
    doc = json.loads(out)
    assert doc["valid"] is False and "witness" in doc


def test_cumulants_and_moments(files, capsys):
    code, out, _ = run_cli(["cumulants", files["a"]], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["main"]["components"][1] == ["1"]
    code, out, _ = run_cli(["moments", files["a"]], capsys)
    assert code == 0
    doc = json.loads(out)
    assert [c[0] for c in doc["psi_moments"]] == ["1", "1", "2", "4", "9"]


def test_t_transform_value(files, capsys):
    code, out, _ = run_cli(["t-transform", files["a"]], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["main"]["components"][2] == ["-1"]


def test_conditional_h(files, capsys):
    code, out, _ = run_cli(["h-transform", files["cond"]], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["role"] == "H" and "conditional" in doc


def test_convolve_free_matches_library(files, capsys):
    code, out, _ = run_cli(
        ["convolve", "--kind", "free", files["a"], files["b"]], capsys)
    assert code == 0
    doc = json.loads(out)

    from octrans.algebra import scalar_algebra
    from octrans.prob import multiplicative_convolve, t_transform
    from octrans.series import components_from_json, from_scalar_coeffs
    k = from_scalar_coeffs([1, 1, 0, 0])
    expected = multiplicative_convolve("free", t_transform(k),
                                       t_transform(k))
    got = components_from_json(doc["transform"]["main"]["components"],
                               scalar_algebra(),
                               doc["transform"]["main"]["order"])
    assert got == expected


def test_convolve_requires_kind(files, capsys):
    code, _, err = run_cli(["convolve", files["a"], files["b"]], capsys)
    assert code == 1
    assert "kind" in err


def test_monotone_note_on_stderr(files, capsys):
    code, out, err = run_cli(
        ["convolve", "--kind", "monotone", files["a"], files["b"]], capsys)
    assert code == 0
    assert "b.a" in err
    assert json.loads(out)["product"] == "b.a"


def test_subordination(files, capsys):
    code, out, _ = run_cli(["subordination", files["a"], files["b"]], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"k_left", "k_right", "h_left", "h_right"}


def test_order_cap_from_environment(files, capsys, monkeypatch):
    monkeypatch.setenv("OCTRANS_MAX_ORDER", "2")
    code, _, err = run_cli(["cumulants", files["a"]], capsys)
    assert code == 1
    assert "OCTRANS_MAX_ORDER" in err


def test_truncation_flag(files, capsys):
    code, out, _ = run_cli(["moments", files["a"], "--order", "2"], capsys)
    assert code == 0
    assert len(json.loads(out)["psi_moments"]) == 3


def test_mean_not_unit_rejected(tmp_path, capsys):
    bad = {"algebra": "scalar", "order": 2,
           "phi_moments": [["1"], ["2"], ["0"]]}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    code, _, err = run_cli(["moments", str(p)], capsys)
    assert code == 1


def test_malformed_rational(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"algebra": "scalar", "order": 1,
                             "phi_moments": [["1"], ["1/0"]]}))
    code, _, err = run_cli(["moments", str(p)], capsys)
    assert code == 1
    assert "1/0" in err


def test_verify_fliess_and_exit_codes(capsys):
    code, out, _ = run_cli(["verify", "fliess"], capsys)
    assert code == 0
    assert json.loads(out)["passed"] is True
    code, _, err = run_cli(["verify", "nonsense"], capsys)
    assert code == 1


def test_verify_named_property(capsys):
    code, out, _ = run_cli(
        ["verify", "sts", "--instance", "end-operad-1-3", "--format",
         "text"], capsys)
    assert code == 0
    assert "PASS" in out


def test_output_deterministic(files, capsys, tmp_path):
    outs = []
    for _ in range(2):
        code, out, _ = run_cli(
            ["convolve", "--kind", "cfree", files["cond"], files["cond"]],
            capsys)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "octrans.cli", "verify", "fliess"],
        capture_output=True, text=True)
    assert proc.returncode == 0
