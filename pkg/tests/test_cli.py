import json
import subprocess
import sys

import numpy as np
import pytest

from ffstab import load_model, load_spectrum
from ffstab.cli import main


def build_model(tmp_path, name="model.bin", mu=4.0, L=4, bc="open"):
    path = tmp_path / name
    code = main([
        "model", "build", "--model", "kitaev", "--L", str(L),
        "--mu", str(mu), "--bc", bc, "--out", str(path),
    ])
    assert code == 0
    return path


def test_model_build_and_gap(tmp_path, capsys):
    path = build_model(tmp_path, bc="periodic")
    out = capsys.readouterr().out
    assert out.startswith("gap ")
    gap = float(out.split()[1])
    # periodic dispersion minimum |mu - 2t| at momentum pi
    assert gap == pytest.approx(2.0, abs=1e-12)
    assert path.exists()
    assert (tmp_path / "model.bin.json").exists()
    assert main(["gap", str(path)]) == 0
    assert float(capsys.readouterr().out.split()[1]) == pytest.approx(gap)


def test_model_build_gapless_exit_code(tmp_path, capsys):
    path = tmp_path / "gapless.bin"
    code = main([
        "model", "build", "--model", "kitaev", "--L", "8",
        "--mu", "2.0", "--bc", "periodic", "--out", str(path),
    ])
    assert code == 3
    # the model file is still written before the gap check
    assert path.exists()
    err = capsys.readouterr().err
    assert "error" in err


def test_usage_error_exit_code(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["model", "build", "--model", "kitaev", "--out", str(tmp_path / "x.bin")])
    assert exc.value.code == 2


def test_dimension_overflow_exit_code(tmp_path, capsys):
    path = build_model(tmp_path, L=16)
    capsys.readouterr()
    code = main(["fock-spectrum", str(path), "--out", str(tmp_path / "spec.csv")])
    assert code == 4


def test_flatten_output(tmp_path, capsys):
    path = build_model(tmp_path, L=3)
    capsys.readouterr()
    flat = tmp_path / "flat.bin"
    assert main(["flatten", str(path), "--out", str(flat)]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["n_modes"] == 12
    assert info["constant"] > 0
    model = load_model(flat)
    assert model.n_modes == 12
    assert model.lattice.modes_per_site == 4


def test_double_output(tmp_path, capsys):
    path = build_model(tmp_path, L=3)
    capsys.readouterr()
    doubled = tmp_path / "doubled.bin"
    assert main(["double", str(path), "--out", str(doubled)]) == 0
    assert "n_modes 12" in capsys.readouterr().out
    model = load_model(doubled)
    orig = load_model(path)
    np.testing.assert_array_equal(model.matrix[:6, :6], orig.matrix)
    np.testing.assert_array_equal(model.matrix[6:, 6:], -orig.matrix)


def test_fock_spectrum_file(tmp_path, capsys):
    path = build_model(tmp_path, L=3)
    out = tmp_path / "spec.csv"
    assert main(["fock-spectrum", str(path), "--out", str(out)]) == 0
    evals = load_spectrum(out)
    assert evals.size == 8
    assert np.all(np.diff(evals) >= 0)


def test_decay_fit_output(tmp_path, capsys):
    path = build_model(tmp_path, L=8, mu=2.5, bc="periodic")
    capsys.readouterr()
    prof_path = tmp_path / "prof.json"
    assert main(["decay-fit", str(path), "--of", "sigma", "--out", str(prof_path)]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert set(printed) == {"K", "nu", "residual"}
    assert printed["nu"] > 0
    assert json.loads(prof_path.read_text()) == printed


def sweep_config(tmp_path):
    cfg = {
        "model": {"name": "kitaev", "L": 3, "mu": 4.0, "bc": "open"},
        "perturbation": {"kind": "quartic", "decay_rate": 1.0, "r_max": 2},
        "j_grid": [0.0, 0.02, 0.04],
        "seeds": 2,
        "target": "doubled",
        "model_id": "kit3",
    }
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps(cfg))
    return path


def test_sweep_end_to_end(tmp_path, capsys):
    cfg = sweep_config(tmp_path)
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    assert main(["sweep", "--config", str(cfg), "--out", str(out1), "--plot"]) == 0
    assert main(["sweep", "--config", str(cfg), "--out", str(out2), "--jobs", "3"]) == 0
    csv1 = (out1 / "sweep.csv").read_bytes()
    csv2 = (out2 / "sweep.csv").read_bytes()
    assert csv1 == csv2
    header = csv1.decode().splitlines()[0]
    assert header == "model,seed,J,kind,gap,delta,flag"
    assert len(csv1.decode().splitlines()) == 7
    summary = json.loads((out1 / "summary.json").read_text())
    assert summary == json.loads((out2 / "summary.json").read_text())
    assert "c1" in summary and "j0_observed" in summary
    assert summary["n_rows"] == 6
    assert "created" not in summary
    svg = (out1 / "sweep.svg").read_text()
    assert svg.lstrip().startswith("<?xml")


def test_filter_demo_weak_perturbation(tmp_path, capsys):
    path = build_model(tmp_path, L=3)
    capsys.readouterr()
    code = main([
        "filter-demo", "--model", str(path), "--J", "0.02",
        "--halfwidth", "0.5", "--r-max", "2",
    ])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["commutator_x"] < 1e-10
    assert 0 < report["max_x_norm"] <= 0.2
    assert report["band_constant"] > 0


def test_filter_demo_zero_strength(tmp_path, capsys):
    path = build_model(tmp_path, L=3)
    capsys.readouterr()
    assert main(["filter-demo", "--model", str(path), "--J", "0.0"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["max_x_norm"] < 1e-12


def test_filter_demo_gap_too_small(tmp_path, capsys):
    path = build_model(tmp_path, L=4, mu=2.5, bc="periodic")
    capsys.readouterr()
    code = main([
        "filter-demo", "--model", str(path), "--J", "0.01", "--halfwidth", "0.5",
    ])
    assert code == 5


def test_console_script_installed(tmp_path):
    path = build_model(tmp_path)
    proc = subprocess.run(
        [sys.executable, "-m", "ffstab.cli", "gap", str(path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("gap ")
