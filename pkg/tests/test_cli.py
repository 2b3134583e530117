import json

import pytest

from calgrass.cli import (
    EXIT_FAILED,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_UNKNOWN,
    EXIT_USAGE,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_rp2(capsys):
    code, out, _ = run(capsys, "homology", "--complex", "rp2.json")
    assert code == EXIT_OK
    assert out.strip() == "H = (Z, Z2, 0)"


def test_homology_from_file_with_coefficients(capsys, tmp_path):
    path = tmp_path / "rp2.json"
    path.write_text(json.dumps({"boundaries": [[[0]], [[2]]]}))
    code, out, _ = run(capsys, "homology", "--complex", str(path), "--coeff", "2")
    assert code == EXIT_OK and out.strip() == "H(Z2) = (Z2, Z2, Z2)"


def test_spectral_summary_line(capsys):
    code, out, _ = run(capsys, "ss", "solve", "--scenario", "v2r5_s4.json")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "forced: d4 at (4,0) = ±2; total consistent"


def test_inconsistent_scenario_exit_code(capsys):
    code, out, _ = run(capsys, "ss", "solve", "--scenario", "lemma41_hypothetical")
    assert code == EXIT_FAILED and "INCONSISTENT" in out


def test_dimeq(capsys):
    code, out, _ = run(capsys, "slfree", "dimeq", "--kmax", "10")
    assert code == EXIT_OK and out.strip() == "(2,2), (6,5)"


def test_slfree_degree_and_scan(capsys, tmp_path):
    code, out, _ = run(capsys, "slfree", "degree", "--surface", "round_sphere", "--grid", "100")
    assert code == EXIT_OK and "deg p+ = -1, deg p- = -1" in out
    csv_path = tmp_path / "scan.csv"
    code, out, _ = run(capsys, "slfree", "scan", "--surface", "round_sphere", "--grid", "32",
                       "--csv", str(csv_path))
    assert code == EXIT_OK and out.startswith("round_sphere: 2 ")
    assert csv_path.read_text().startswith("u,v,abs_re_omega")


def test_ring_check_prints_citations(capsys):
    code, out, _ = run(capsys, "ring", "check", "--name", "g3r6", "--hom", "slag_pullback")
    assert code == EXIT_OK
    lines = [line for line in out.splitlines() if line.strip().startswith(("PASS", "FAIL"))]
    assert len(lines) == 3
    assert all(line.rstrip().endswith("]") and "[]" not in line for line in lines)


def test_comass_and_freedim(capsys):
    code, out, _ = run(capsys, "comass", "--form", "sl2", "--starts", "8")
    assert code == EXIT_OK and "comass(sl2) = 1.0000000000" in out
    code, out, _ = run(capsys, "freedim", "--cal", "sl4", "--trials", "10")
    assert code == EXIT_OK and out.startswith("fd(sl4) = 2")


def test_morse(capsys):
    code, out, _ = run(capsys, "morse", "--starts", "16")
    assert code == EXIT_OK
    assert "+1.000000      4        5" in out


def test_json_output_is_deterministic(capsys):
    _, a, _ = run(capsys, "--output", "json", "--seed", "3", "comass", "--form", "kaehler4", "--starts", "8")
    _, b, _ = run(capsys, "comass", "--form", "kaehler4", "--starts", "8", "--seed", "3", "--output", "json")
    assert a == b
    assert json.loads(a)["max_value"] == pytest.approx(1.0)


def test_verify_paper_json_is_deterministic(capsys):
    _, a, _ = run(capsys, "--output", "json", "verify-paper", "--only", "4,5,6")
    _, b, _ = run(capsys, "--output", "json", "verify-paper", "--only", "4,5,6")
    assert a == b
    data = json.loads(a)
    assert [c["criterion"] for c in data["criteria"]] == [4, 5, 6]
    assert all(c["passed"] and c["citation"] for c in data["criteria"])


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("CALGRASS_SEED", "5")
    _, a, _ = run(capsys, "--output", "json", "comass", "--form", "sl3", "--starts", "4")
    _, b, _ = run(capsys, "--output", "json", "--seed", "5", "comass", "--form", "sl3", "--starts", "4")
    assert a == b
    monkeypatch.setenv("CALGRASS_SEED", "abc")
    code, _, err = run(capsys, "comass", "--form", "sl2")
    assert code == EXIT_USAGE and "CALGRASS_SEED" in err


def test_unknown_names_list_options(capsys):
    code, _, err = run(capsys, "comass", "--form", "bogus")
    assert code == EXIT_UNKNOWN and "valid: assoc7" in err
    code, _, err = run(capsys, "slfree", "degree", "--surface", "klein")
    assert code == EXIT_UNKNOWN and "round_sphere" in err
    code, _, err = run(capsys, "ss", "solve", "--scenario", "nope")
    assert code == EXIT_UNKNOWN and "v2r5_s4" in err
    code, _, err = run(capsys, "ring", "check", "--name", "g3r6", "--hom", "nope")
    assert code == EXIT_UNKNOWN and "slag_pullback" in err


def test_malformed_file_reports_position(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"boundaries": [[[0]],\n [[2]]')
    code, _, err = run(capsys, "homology", "--complex", str(path))
    assert code == EXIT_PARSE
    assert f"{path}:2:" in err


def test_malformed_scenario_content(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"name": "x", "fiber": ["Q"], "base": ["Z"], "total": ["Z"]}))
    code, _, err = run(capsys, "ss", "solve", "--scenario", str(path))
    assert code == EXIT_PARSE and "malformed scenario" in err


def test_usage_errors(capsys):
    assert main([]) == EXIT_USAGE
    assert main(["comass"]) == EXIT_USAGE
    capsys.readouterr()
