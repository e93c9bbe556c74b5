import json
import subprocess
import sys

import pytest

from lacuna import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_tube_poly_k2_m1(capsys):
    code, out, _ = run(["tube-poly", "--k", "2", "--m", "1", "--eps", "1/2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["degree"] == 3 and data["terms"] == 3
    assert data["epsilon"] == "1/2" and data["pi_grade"] == 3
    assert len(data["cut_poly"]["terms"]) == 3


def test_tube_poly_k1_m2(capsys):
    code, out, _ = run(["tube-poly", "--k", "1", "--m", "2", "--eps", "1/2"], capsys)
    terms = json.loads(out)["cut_poly"]["terms"]
    assert code == 0
    assert len(terms) == 1
    assert (terms[0]["a"], terms[0]["b"]) == (0, 1)
    assert terms[0]["coef"] == [{"pi": 2, "q": "1/6"}]


@pytest.mark.parametrize("argv", [
    ["tube-poly", "--eps", "3/2"],
    ["tube-poly", "--eps", "0.5"],
    ["tube-poly", "--k", "0"],
    ["verify", "--k", "1", "--k-max", "2"],
    ["verify", "--m", "1", "--m-max", "3"],
    ["verify", "--seed", "-1"],
    ["classical", "--body", "cone", "--N", "3"],
    ["classical", "--body", "paraboloid", "--N", "1"],
    ["newton-demo", "--dmax", "-1"],
    [],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2
    capsys.readouterr()


def test_tube_cut_outside_lacuna_exits_1(capsys):
    code, out, err = run(["tube-cut", "--a", "0", "--b", "0.8"], capsys)
    assert code == 1 and out == "" and "lacuna" in err


def test_tube_cut_with_monte_carlo(capsys):
    argv = ["tube-cut", "--a", "0.1", "--b", "0.05", "--samples", "200000", "--seed", "5"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    data = json.loads(out)
    assert set(data["monte_carlo"]) == {"side_minus", "side_plus", "stderr", "samples", "seed"}
    assert data["exact"]["bigger"] > data["exact"]["smaller"]
    assert run(argv, capsys)[1] == out


def test_verify_small_grid_passes(capsys):
    code, out, _ = run(["verify", "--k", "1", "--m", "1", "--points", "5",
                        "--samples", "200000", "--seed", "11"], capsys)
    report = json.loads(out)
    assert code == 0 and report["passed"] and report["failed"] == 0
    assert {c["status"] for c in report["checks"]} == {"pass"}


def test_verify_low_power_is_flagged_and_deterministic(capsys):
    argv = ["verify", "--k-max", "1", "--m-max", "2", "--points", "3", "--samples", "1000", "--seed", "4"]
    code, out, _ = run(argv, capsys)
    report = json.loads(out)
    assert code == 0
    assert report["low_power"] == 6
    assert all(c["status"] == "low-power" for c in report["checks"] if "monte-carlo" in c["name"]
               or "symmetry" in c["name"])
    assert run(argv, capsys)[1] == out


def test_verify_failure_exits_1(capsys):
    # a tolerance below rounding makes the quadrature comparison fail
    code, out, _ = run(["verify", "--k", "2", "--m", "2", "--points", "5", "--samples", "1000",
                        "--tol", "1e-300"], capsys)
    assert code == 1 and not json.loads(out)["passed"]


def test_fit_default_detects_tube_degree(capsys):
    code, out, _ = run(["fit", "--k", "2", "--m", "1"], capsys)
    data = json.loads(out)
    assert code == 0 and data["detected"] == 3


def test_fit_csv_roundtrip(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    assert cli.main(["fit", "--k", "3", "--m", "2", "--grid", "10", "--format", "csv",
                     "--output", "p.csv"]) == 0
    path = tmp_path / "p.csv"
    assert path.read_text().startswith("a,b,value\n")
    code, out, _ = run(["fit", "--input", str(path), "--dmax", "8"], capsys)
    assert code == 0 and json.loads(out)["detected"] == 5


def test_classical_ball_n3(capsys):
    code, out, _ = run(["classical", "--body", "ball", "--N", "3"], capsys)
    data = json.loads(out)
    assert code == 0 and data["certificate"] == "polynomial"
    # pi * (2/3 - h + h^3/3)
    assert data["polynomial"] == {"terms": [
        {"e": 0, "coef": [{"pi": 1, "q": "2/3"}]},
        {"e": 1, "coef": [{"pi": 1, "q": "-1/1"}]},
        {"e": 3, "coef": [{"pi": 1, "q": "1/3"}]}]}


def test_classical_paraboloid_n4(capsys):
    code, out, _ = run(["classical", "--body", "paraboloid", "--N", "4", "--grid", "15"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["certificate"] == "square-is-polynomial"
    assert data["volume_fit"]["detected"] == "none"
    assert data["square_fit"]["detected"] == 10


def test_classical_even_ball_and_csv(capsys):
    code, out, _ = run(["classical", "--body", "ball", "--N", "2"], capsys)
    assert code == 0 and json.loads(out)["certificate"] == "transcendental-suspected"
    code, out, _ = run(["classical", "--body", "hyperboloid", "--N", "5", "--format", "csv",
                        "--grid", "5"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "h,value" and len(lines) == 6
    code, _, err = run(["classical", "--body", "hyperboloid", "--N", "4"], capsys)
    assert code == 1 and "odd" in err


def test_newton_demo(capsys):
    code, out, _ = run(["newton-demo", "--dmax", "15"], capsys)
    data = json.loads(out)
    assert code == 0 and data["detected"] == "none"
    assert [row["degree"] for row in data["residuals"]] == list(range(16))
    code, out, _ = run(["newton-demo", "--format", "csv"], capsys)
    assert out.splitlines()[0] == "degree,max_abs_residual,rms_residual"


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    assert cli.main(["tube-poly", "--k", "3", "--m", "3", "-o", "sub/poly.json"]) == 0
    assert capsys.readouterr().out == ""
    first = (tmp_path / "sub" / "poly.json").read_bytes()
    assert cli.main(["tube-poly", "--k", "3", "--m", "3", "-o", str(tmp_path / "abs.json")]) == 0
    assert (tmp_path / "abs.json").read_bytes() == first


@pytest.mark.parametrize("argv", [
    ["tube-cut", "--a", "0.2", "--b", "0.1", "--samples", "100000", "--seed", "9"],
    ["verify", "--k", "1", "--m", "2", "--points", "3", "--samples", "100000", "--seed", "9"],
    ["classical", "--body", "paraboloid", "--N", "3", "--grid", "8", "--format", "csv"],
])
def test_seeded_files_byte_identical(argv, tmp_path):
    paths = []
    for i, backend in enumerate(("python", None)):
        path = tmp_path / f"out{i}"
        prefix = ["--backend", backend] if backend and backend in cli._backend.BACKENDS else []
        assert cli.main(prefix + argv + ["--output", str(path)]) == 0
        paths.append(path.read_bytes())
    assert paths[0] == paths[1]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lacuna", "tube-poly", "--k", "1", "--m", "1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["cut_poly"]["terms"][0]["coef"] == [{"pi": 2, "q": "1/4"}]
