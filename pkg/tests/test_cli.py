import json
import math
import subprocess
import sys

import numpy as np
import pytest

from kpsynth import liegroup as lg
from kpsynth.cli import CommandConfig, main, read_matrix, run
from kpsynth.exceptions import InvalidInputError
from kpsynth.orbitspace import lift_conjugator, project, representative
from kpsynth.synthesis import TAU_SOL


@pytest.fixture
def identity_file(tmp_path):
    f = tmp_path / "eye.txt"
    f.write_text("1 0 0\n0 1 0\n0 0 1\n")
    return f


@pytest.fixture
def j_file(tmp_path):
    f = tmp_path / "j.json"
    f.write_text(json.dumps(lg.J.tolist()))
    return f


def run_json(argv, capsys):
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_solve_identity(identity_file, capsys):
    d = run_json(["solve", "--target", str(identity_file)], capsys)
    assert d["T_min"] == 0.0


def test_solve_j(j_file, capsys):
    d = run_json(["solve", "--target", str(j_file)], capsys)
    assert d["T_min"] == pytest.approx(math.pi * math.sqrt(3))
    assert d["alpha"] == pytest.approx(1 / math.sqrt(3))
    assert set(d["conjugator"]) == {"angle", "component"}


def test_solve_from_orbit(capsys):
    d = run_json(["solve", "--orbit", str(math.pi - 1.0), "0"], capsys)
    assert d["T_min"] == pytest.approx(1.0)


def test_project_modes(capsys, tmp_path):
    f = tmp_path / "k.txt"
    np.savetxt(f, lg.k_plus(-1.0))
    half = run_json(["project", "--target", str(f)], capsys)
    full = run_json(["project", "--target", str(f), "--mode", "full"], capsys)
    assert half["mode"] == "half_disc" and full["mode"] == "full_disc"
    assert abs(full["theta"]) == pytest.approx(half["theta"])
    assert main(["project", "--orbit", "1", "2", "--format", "csv"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "key,value"


def test_geodesic_table(capsys, tmp_path):
    out = tmp_path / "g.csv"
    assert main(["geodesic", "--orbit", "1.0", "2.0", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",")[:4] == ["t", "rho", "theta", "X11"]
    assert len(lines) == 102
    last = [float(v) for v in lines[-1].split(",")]
    assert last[1] == pytest.approx(1.0, abs=1e-7) and last[2] == pytest.approx(2.0, abs=1e-7)
    rows = run_json(["geodesic", "--orbit", "1.0", "2.0", "--times", "0,0.5", "--format", "json"], capsys)
    assert [r["t"] for r in rows] == [0.0, 0.5]


def test_reachset_pi_passes_origin(tmp_path, capsys):
    assert main(["reachset", "--times", repr(math.pi), "--out", str(tmp_path), "--format", "csv"]) == 0
    rhos = [float(line.split(",")[1]) for line in (tmp_path / "frontier_000.csv").read_text().splitlines()[1:]]
    assert min(rhos) <= 1e-9
    assert json.loads((tmp_path / "manifest.json").read_text())["times"] == [math.pi]


def test_reachset_default_grid(tmp_path):
    assert main(["reachset", "--out", str(tmp_path)]) == 0
    assert len(json.loads((tmp_path / "manifest.json").read_text())["files"]) == 12


def test_strata_map(capsys):
    rows = run_json(["strata", "--format", "json"], capsys)
    assert {r["stratum"] for r in rows} == {"Trivial", "V", "W", "Kplus", "FullG"}


def test_bad_matrix_exit_2(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("1 0 0\n0 1 0\n0 0 2\n")
    assert main(["solve", "--target", str(f)]) == 2
    assert "rotation" in capsys.readouterr().err
    f.write_text("1 0\n0 1\n")
    assert main(["solve", "--target", str(f)]) == 2
    f.write_text("a b c\n")
    assert main(["project", "--target", str(f)]) == 2
    assert main(["solve", "--target", str(tmp_path / "missing.txt")]) == 2
    assert main(["reachset", "--times", "9.0", "--out", str(tmp_path)]) == 2


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as e:
        main(["solve", "--target", "a", "--orbit", "1", "1"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2
    assert main(["solve"]) == 2


def test_solver_failure_exit_3(monkeypatch):
    from kpsynth import cli
    from kpsynth.exceptions import NumericalFailure

    def boom(_):
        raise NumericalFailure("no root")

    monkeypatch.setattr(cli, "solve", boom)
    assert run(CommandConfig("solve", orbit=(1.0, 1.0))) == 3


def test_config_validation():
    with pytest.raises(InvalidInputError):
        CommandConfig("fly")
    with pytest.raises(InvalidInputError):
        CommandConfig("solve")
    with pytest.raises(InvalidInputError):
        CommandConfig("strata", fmt="xml")


def test_outputs_are_deterministic(tmp_path):
    for sub in (["strata"], ["solve", "--orbit", "1.2", "0.4"], ["geodesic", "--orbit", "2", "1"]):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(sub + ["--out", str(a), "--seed", "3"]) == 0
        assert main(sub + ["--out", str(b), "--seed", "3"]) == 0
        assert a.read_bytes() == b.read_bytes()


def test_matrix_round_trip(rng, tmp_path):
    for i in range(10):
        x = lg.random_rotation(rng)
        f = tmp_path / ("m%d.txt" % i)
        np.savetxt(f, x, fmt="%.17g")
        y = read_matrix(f)
        p = project(y)
        k = lift_conjugator(p, y)
        assert np.linalg.norm(lg.conjugate(k, representative(p)) - x) <= TAU_SOL


def test_module_entry_point(j_file):
    out = subprocess.run([sys.executable, "-m", "kpsynth", "solve", "--target", str(j_file)],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["alpha"] == pytest.approx(1 / math.sqrt(3))


def test_format_defaults(tmp_path, capsys):
    assert main(["strata"]) == 0
    assert capsys.readouterr().out.startswith("rho,theta,x,y,stratum")
    assert main(["reachset", "--times", "1.0", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "frontier_000.csv").exists()


def test_verify_exit_codes(monkeypatch, tmp_path, capsys):
    from kpsynth import acceptance

    def broken(seed=0):
        raise RuntimeError("boom")

    monkeypatch.setattr(acceptance, "CRITERIA", (acceptance.criterion_1, acceptance.criterion_8))
    out = tmp_path / "r.json"
    assert main(["verify", "--out", str(out)]) == 0
    assert [r["passed"] for r in json.loads(out.read_text())] == [True, True]
    assert capsys.readouterr().out.count("[PASS]") == 2
    monkeypatch.setattr(acceptance, "CRITERIA", (acceptance.criterion_1, broken))
    assert main(["verify"]) == 1
    assert "[FAIL]" in capsys.readouterr().out
