import subprocess
import sys

import pytest

from kneerom.cli import main


def test_filter_info(capsys):
    assert main(["filter-info"]) == 0
    out = capsys.readouterr().out
    assert "1,7.071068e-01" in out


def test_filter_info_nyquist(capsys):
    assert main(["filter-info", "--cutoff", "200", "--rate", "250"]) == 1
    assert "Nyquist" in capsys.readouterr().err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run"])
    assert exc.value.code == 1


def test_data_error_exit_code(tmp_path, capsys):
    (tmp_path / "a.csv").write_text("t_s,ax,ay,az\n0,0,0,30\n0.004,0,0,9.81\n")
    assert main(["run", str(tmp_path / "a.csv"), str(tmp_path / "a.csv"), "--out", str(tmp_path / "o")]) == 2
    assert "sensor range" in capsys.readouterr().err


def test_degenerate_exit_code(tmp_path, capsys):
    rows = "".join(f"{i * 0.004:.3f},0,0,0.1\n" for i in range(500))
    (tmp_path / "a.csv").write_text("t_s,ax,ay,az\n" + rows)
    assert main(["run", str(tmp_path / "a.csv"), str(tmp_path / "a.csv"), "--out", str(tmp_path / "o")]) == 3


def test_end_to_end(tmp_path, capsys):
    s = tmp_path / "s"
    assert main(["simulate", "--profile", "hinge", "--duration", "4", "--out", str(s)]) == 0
    assert main(["run", str(s / "thigh.csv"), str(s / "shank.csv"), "--method", "b",
                 "--targets", "30,60", "--ceiling", "100", "--out", str(s / "o")]) == 0
    assert main(["cv-extract", str(s / "manifest.csv"), "--out", str(s / "cv.csv")]) == 0
    capsys.readouterr()
    assert main(["compare", str(s / "o" / "angle.csv"), str(s / "cv.csv"), "--baseline-kind", "cv"]) == 0
    out = capsys.readouterr().out
    assert float(out.splitlines()[0].split("=")[1]) <= 2.0
    assert (s / "o" / "report.csv").read_text() == "target,count\n30,0\n60,0\n"


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "kneerom.cli", "filter-info"], capture_output=True, text=True)
    assert proc.returncode == 0 and "butterworth" in proc.stdout
