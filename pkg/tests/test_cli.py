import csv
import json
import subprocess
import sys

import pytest

from eraserlab.cli import COMMANDS, main
from eraserlab.config import bundled_configs

FIGS = bundled_configs()


def run(tmp_path, command, fig="fig4", *extra):
    out = tmp_path / command
    code = main([command, "--config", str(FIGS[fig]), "--out", str(out), *extra])
    return code, out


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.mark.parametrize("command", COMMANDS)
def test_every_command_writes_csv_and_json(tmp_path, command):
    code, out = run(tmp_path, command)
    assert code == 0
    assert (out / f"{command}.csv").is_file()
    summary = json.loads((out / f"{command}.json").read_text())
    assert summary["command"] == command


def test_pattern_columns(tmp_path):
    _, out = run(tmp_path, "pattern", "fig2")
    rows = read_csv(out / "pattern.csv")
    assert rows[0] == ["position_m", "expected", "density"]
    assert len(rows) == 62
    assert json.loads((out / "pattern.json").read_text())["fit"]["visibility"] == pytest.approx(1, abs=1e-9)


def test_scan_columns_and_overrides(tmp_path):
    _, out = run(tmp_path, "scan", "fig2", "--seed", "17", "--points", "40")
    rows = read_csv(out / "scan.csv")
    assert rows[0] == ["position_m", "expected", "counts"]
    assert len(rows) == 41
    assert all(r[2].isdigit() for r in rows[1:])
    assert json.loads((out / "scan.json").read_text())["seed"] == 17


def test_erase_demo_visibilities(tmp_path):
    _, out = run(tmp_path, "erase-demo", "fig4")
    s = json.loads((out / "erase-demo.json").read_text())
    assert s["fringe"]["visibility"] > 0.99
    assert s["antifringe"]["visibility"] > 0.99
    assert s["max_abs_averaged_sum_minus_no_polarizer"] <= 1e-9
    assert read_csv(out / "erase-demo.csv")[0] == ["position_m", "fringe", "antifringe", "averaged_sum", "no_polarizer"]


def test_erase_demo_needs_plates(tmp_path, capsys):
    code, _ = run(tmp_path, "erase-demo", "fig2")
    assert code != 0
    assert "qwp1" in capsys.readouterr().err


def test_whichpath_fig3(tmp_path, capsys):
    _, out = run(tmp_path, "whichpath", "fig3")
    rows = {(r[0], r[1]): r for r in read_csv(out / "whichpath.csv")[1:]}
    assert f"{float(rows[('x', 'R')][3]):.3f}" == "1.000"
    assert "P(slit1)=1.000" in capsys.readouterr().out


@pytest.mark.parametrize("fig", sorted(FIGS))
def test_ordering_every_bundled_config(tmp_path, fig):
    _, out = run(tmp_path, "ordering", fig)
    assert json.loads((out / "ordering.json").read_text())["max_deviation"] <= 1e-12


def test_chsh_value(tmp_path):
    _, out = run(tmp_path, "chsh", "fig2")
    assert json.loads((out / "chsh.json").read_text())["S"] == pytest.approx(2 * 2**0.5, abs=1e-9)


@pytest.mark.parametrize("command", ["scan", "erase-demo", "chsh"])
def test_outputs_byte_identical(tmp_path, command):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for d in (a, b):
        assert main([command, "--config", str(FIGS["fig5"]), "--out", str(d), "--seed", "123"]) == 0
    for ext in ("csv", "json"):
        assert (a / f"{command}.{ext}").read_bytes() == (b / f"{command}.{ext}").read_bytes()


def test_bad_config_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.bench"
    bad.write_text("[geometry]\n[elements]\nqwp1 = 45\n")
    assert main(["pattern", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "line 3" in capsys.readouterr().err
    assert main(["pattern", "--config", str(tmp_path / "missing.bench")]) == 1


def test_unknown_command():
    with pytest.raises(SystemExit) as exc:
        main(["explode", "--config", "x"])
    assert exc.value.code != 0


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "eraserlab", "ordering", "--config", str(FIGS["fig8"]), "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "max |p-first - s-first|" in proc.stdout
