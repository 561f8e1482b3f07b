import csv
import json
import subprocess
import sys

import pytest

from resonator_metrology.sweep.cli import DEFAULTS, build_parser, run

SMALL = ["--cutoff-na", "6", "--cutoff-nb", "6", "--seedless"]


def read(path):
    return list(csv.reader(open(path, encoding="utf-8")))


def test_all_subcommands_exist():
    parser = build_parser()
    choices = parser._subparsers._group_actions[0].choices
    assert set(choices) == {"qfi-map", "qfi-vs-g", "wigner", "nongauss", "cfi", "qfim", "sld-check", "reproduce"}
    assert set(DEFAULTS) == set(choices) - {"reproduce"}


@pytest.mark.parametrize(
    "argv, first_cols",
    [
        (["qfi-map", "--axis", "temperature:0.1:0.3:2", "--axis", "b_ext:0:0.1:2"], ["temperature", "b_ext", "qfi_t"]),
        (["qfi-vs-g", "--param", "b", "--axis", "g:0.01:0.05:3"], ["g", "qfi_b"]),
        (["nongauss", "--axis", "g:0.01:0.05:2"], ["g", "delta"]),
        (
            ["cfi", "--observable", "quadrature_x", "--method", "projective", "--axis", "temperature:0.1:0.3:2"],
            ["temperature", "qfi_t", "cfi_proj_quadrature_x_t"],
        ),
        (["qfim", "--axis", "b_ext:0:0.1:2"], ["b_ext", "f_tt"]),
        (["sld-check", "--axis", "temperature:0.1:0.3:2"], ["temperature", "sld_residual_t"]),
    ],
)
def test_sweep_subcommands(tmp_path, argv, first_cols):
    out = tmp_path / "o.csv"
    assert run(argv + SMALL + ["--out", str(out)]) == 0
    rows = read(out)
    assert rows[0][: len(first_cols)] == first_cols
    assert rows[0][-5:] == ["converged", "cutoff_na", "cutoff_nb", "error_code", "wall_time_ms"]
    assert all(r[-1] == "0" for r in rows[1:])


def test_stdout_when_no_out(capsys):
    assert run(["qfi-vs-g", "--axis", "g:0.01:0.02:2"] + SMALL) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("g,qfi_t,") and len(lines) == 3


def test_wigner_subcommand(tmp_path):
    out = tmp_path / "w.csv"
    assert run(["wigner", "--g", "0", "--temperature", "0.01", "--out", str(out)] + SMALL) == 0
    rows = read(out)
    assert rows[0] == ["x", "p", "w"] and len(rows) == 1 + 201 * 201
    center = rows[1 + 100 * 201 + 100]
    assert float(center[0]) == 0 and float(center[1]) == 0
    assert float(center[2]) == pytest.approx(1 / 3.141592653589793, abs=1e-8)


def test_config_file_and_overrides(tmp_path):
    cfg = tmp_path / "spec.json"
    cfg.write_text(
        json.dumps(
            {
                "base": {"g": 0.02, "temperature": 0.2, "interaction": "radiation_pressure", "n_a": 6, "n_b": 6},
                "axes": [{"name": "b_ext", "min": 0.0, "max": 0.1, "count": 3}],
                "quantities": ["qfi_b", {"name": "cfi", "observable": "photon_number", "param": "b_ext"}],
                "output_path": str(tmp_path / "from_config.csv"),
            }
        )
    )
    assert run(["qfi-map", "--config", str(cfg), "--seedless"]) == 0
    rows = read(tmp_path / "from_config.csv")
    assert rows[0][:3] == ["b_ext", "qfi_b", "cfi_ep_photon_number_b"]
    assert len(rows) == 4
    # --out and cutoffs override the file
    out = tmp_path / "o.csv"
    assert run(["qfi-map", "--config", str(cfg), "--out", str(out), "--cutoff-na", "7", "--seedless"]) == 0
    assert read(out)[1][-4] == "7"


def test_tol_enables_convergence(tmp_path):
    out = tmp_path / "c.csv"
    argv = ["qfi-vs-g", "--interaction", "radiation_pressure", "--temperature", "0.03", "--axis", "g:0.01:0.02:2"]
    assert run(argv + ["--cutoff-na", "10", "--cutoff-nb", "20", "--tol", "1e-6", "--out", str(out), "--seedless"]) == 0
    rows = read(out)
    assert [r[2] for r in rows[1:]] == ["true", "true"]
    assert rows[1][3:5] == ["15", "25"]


def test_threads_give_identical_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["qfim", "--axis", "temperature:0.1:0.5:3", "--axis", "b_ext:0:0.1:3"] + SMALL
    assert run(base + ["--threads", "1", "--out", str(a)]) == 0
    assert run(base + ["--threads", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"base": {"g": 0.1, "temperature": 1.0, "interaction": "quadratic"}, "axes": [], "quantities": ["qfi_t"]}))
    assert run(["qfi-map", "--config", str(bad)]) == 2
    assert "field 'axes'" in capsys.readouterr().err
    bad.write_text("{\n  nope\n}")
    assert run(["qfi-map", "--config", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert run(["qfi-map", "--temperature", "-1"]) == 2
    assert run(["qfi-map", "--tol", "0"]) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        run(["qfi-map", "--axis", "g:1:2"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        run(["reproduce", "fig99"])
    assert info.value.code == 2


def test_partial_failure_exit_code(tmp_path):
    out = tmp_path / "p.csv"
    argv = ["cfi", "--observable", "parity", "--g", "0", "--axis", "temperature:0.001:0.3:2", "--out", str(out)]
    assert run(argv + SMALL) == 3
    rows = read(out)
    assert rows[1][-2] == "DegenerateVariance" and rows[1][2] == ""
    assert rows[2][-2] == ""


def test_io_error_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert run(["qfi-vs-g", "--axis", "g:0.01:0.02:2", "--out", str(blocker / "o.csv")] + SMALL) == 4


def test_reproduce_writes_panels(tmp_path):
    out = tmp_path / "fig2"
    assert run(["reproduce", "fig2", "--out", str(out), "--cutoff-na", "8", "--cutoff-nb", "8", "--seedless"]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert "fig2_summary.csv" in names and len(names) == 4
    summary = read(out / "fig2_summary.csv")
    assert summary[0][0] == "panel" and len(summary) == 4


def test_console_entry_points():
    out = subprocess.run([sys.executable, "-m", "resonator_metrology", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "reproduce" in out.stdout
