import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from imaglab.cli import FIGURES, format_value, main, run


def _call(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


@pytest.mark.parametrize("x, text", [
    (1.0, "1.000000000000e0"),
    (0.0, "0.000000000000e0"),
    (-0.0, "0.000000000000e0"),
    (0.0015, "1.500000000000e-3"),
    (-123.5, "-1.235000000000e2"),
])
def test_format_value(x, text):
    assert format_value(x) == text


@pytest.mark.parametrize("argv, expected", [
    (["measure", "plus", "--kind", "l1"], "1.000000000000e0"),
    (["measure", "canonical", "A=1", "--kind", "robustness"], "0.000000000000e0"),
    (["measure", "plus2", "--kind", "l1"], "2.000000000000e0"),
    (["measure", "plus2", "--kind", "rel-entropy"], "1.000000000000e0"),
    (["measure", "canonical2", "A=0", "pattern=01_10", "--kind", "robustness"], "1.000000000000e0"),
    (["measure", "[[0.5,-0.5j],[0.5j,0.5]]", "--kind", "rel-entropy"], "1.000000000000e0"),
])
def test_measure_command(argv, expected):
    code, out = _call(argv)
    assert code == 0
    assert out.strip() == expected


@pytest.mark.parametrize("argv, code", [
    (["measure", "[[1,0", "--kind", "l1"], 2),
    (["measure", "canonical", "B=0.3", "--kind", "l1"], 2),
    (["measure", "canonical2", "A=0.3", "pattern=01", "--kind", "l1"], 2),
    (["measure", "plus", "--kind", "weight"], 2),
    (["measure", "[[1,0],[0,1]]", "--kind", "l1"], 3),
    (["measure", "[[1.5,0],[0,-0.5]]", "--kind", "l1"], 3),
    (["measure", "canonical", "A=2", "--kind", "l1"], 3),
    (["figure", "fig11"], 2),
    (["power", "dephasing", "--p", "0.2", "--kind", "l1"], 2),
    (["power", "pd2", "--p1", "0.2", "--p2", "0.1", "--kind", "l1"], 2),
    (["decay", "dephasing", "--p", "0.2", "--A", "0.1", "--kind", "l1", "--pattern", "00_11"], 2),
    ([], 2),
])
def test_exit_codes(argv, code):
    assert _call(argv)[0] == code


def test_figure1_small_grid():
    code, out = _call(["figure", "fig1", "--grid", "11"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["A", "p", "dI_l1", "dI_R", "dI_r"]
    assert len(rows) == 1 + 121
    values = np.array(rows[1:], dtype=float)
    hit = values[(values[:, 0] == 0.0) & (values[:, 1] == 1.0)]
    assert hit.shape == (1, 5) and hit[0, 2] == 1.0
    # first axis varies slowest
    assert np.all(np.diff(values[:, 0]) >= 0)


def test_figure4_and_figure10_columns():
    out = run(["figure", "fig4", "--A", "0", "--grid", "11"])
    assert out.splitlines()[0] == "p1,p2,dI_l1,dI_R,dI_r"
    out = run(["figure", "fig10", "--grid", "11"])
    lines = out.splitlines()
    assert lines[0] == "p1,p2,D_l1,D_R,D_r"
    last = [float(v) for v in lines[-1].split(",")]
    assert last[:2] == [1.0, 1.0] and last[2] == 2.0


def test_figure3_skips_infeasible_points():
    values = np.array(list(csv.reader(io.StringIO(run(["figure", "fig3", "--grid", "11"]))))[1:], dtype=float)
    assert len(values) == 66
    assert np.all(values[:, 0] + values[:, 1] <= 1 + 1e-12)


def test_figure2_fixed_parameter_changes_output():
    assert run(["figure", "fig2", "--grid", "5"]) != run(["figure", "fig2", "--grid", "5", "--p1", "0.1"])


@pytest.mark.parametrize("figure_id", list(FIGURES))
def test_figure_output_is_deterministic_and_round_trips(figure_id, tmp_path):
    path = tmp_path / f"{figure_id}.csv"
    assert main(["figure", figure_id, "--grid", "7", "--out", str(path)]) == 0
    data = path.read_bytes()
    assert data == run(["figure", figure_id, "--grid", "7"]).encode("utf-8")
    assert b"\r" not in data
    rows = list(csv.reader(io.StringIO(data.decode("utf-8"))))
    for row in rows[1:]:
        for text in row:
            assert format_value(float(text)) == text


def test_power_command_examples():
    out = run(["power", "dep2", "--p1", "0.5", "--p2", "0.5", "--kind", "l1", "--mode", "de-imag"])
    assert "value=1.000000000000e0" in out
    out = run(["power", "bpf2", "--p1", "0.3", "--p2", "0.7", "--kind", "robustness", "--mode", "de-imag"])
    assert "value=0.000000000000e0" in out
    out = run(["power", "pd2", "--g1", "0.4", "--g2", "0.9", "--kind", "l1", "--mode", "imag",
               "--samples", "300", "--seed", "7"])
    value = float(out.splitlines()[0].split("=")[1])
    assert value <= 1e-10
    assert "seed=7" in out


def test_decay_command():
    out = run(["decay", "dephasing", "--p", "1", "--A", "0", "--kind", "l1"])
    assert out.splitlines() == ["initial=1.000000000000e0", "final=0.000000000000e0",
                                "delta=1.000000000000e0"]


def test_verify_channels_and_decay_pass():
    code, out = _call(["verify", "channels", "--seed", "42"])
    assert code == 0 and "verification passed" in out
    code, out = _call(["verify", "decay"])
    assert code == 0
    assert "OutsideVerifiedDomain" in [line for line in out.splitlines() if line.startswith("BF2_L1R")][0]


def test_verify_power_reports_the_offset_formula():
    code, out = _call(["verify", "power"])
    assert code == 1
    failing = [line.split()[0] for line in out.splitlines() if " FAIL " in line]
    assert failing == ["PFBF_r"]


def test_verify_all_is_deterministic():
    assert run(["verify", "all", "--seed", "42"]) == run(["verify", "all", "--seed", "42"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "imaglab", "measure", "plus", "--kind", "robustness"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "1.000000000000e0\n"
