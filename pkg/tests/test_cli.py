import subprocess
import sys

import numpy as np
import pytest

from qafas.channel import write_channel_file
from qafas.cli import main


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "sweep.cfg"
    path.write_text(
        "n_antennas = 12\nn_users = 3\nk_values = 2, 4\nbits_values = 1, inf\n"
        "rho_dbm_values = 0, 10\ntrials = 2\nmethods = qafas, fas, random\n"
    )
    return path


def test_run_and_summarize(tmp_path, small_config):
    out = tmp_path / "run.csv"
    assert main(["run", "--config", str(small_config), "--out", str(out), "--seed", "3"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "method,K,bits,rho_dbm,trial,capacity_bps_hz"
    assert len(lines) == 1 + 3 * 2 * 2 * 2 * 2
    summary = tmp_path / "summary.csv"
    assert main(["summarize", "--in", str(out), "--out", str(summary)]) == 0
    rows = summary.read_text().splitlines()
    assert rows[0] == "method,K,bits,rho_dbm,trials,mean_capacity,stderr"
    assert len(rows) == 1 + 3 * 2 * 2 * 2


def test_run_byte_identical(tmp_path, small_config):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["run", "--config", str(small_config), "--out", str(a), "--seed", "9"])
    main(["run", "--config", str(small_config), "--out", str(b), "--seed", "9"])
    assert a.read_bytes() == b.read_bytes()


def test_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("n_antennas = 8\nk_values = 20\n")
    assert main(["run", "--config", str(bad)]) == 2
    assert "k_values" in capsys.readouterr().err


def test_oracle_cap_exit_code(tmp_path):
    cfg = tmp_path / "ex.cfg"
    cfg.write_text("n_antennas = 60\nk_values = 30\nmethods = exhaustive\ntrials = 1\n")
    assert main(["run", "--config", str(cfg)]) == 3


def test_select(tmp_path, capsys):
    H = np.array([[2, 0], [0, 1], [0, 1.5], [10, 1]], dtype=complex)
    path = tmp_path / "h.txt"
    write_channel_file(path, H)
    # rho = 10 mW
    assert main(["select", str(path), "--k", "2", "--bits", "1", "--rho-dbm", "10", "--method", "qafas"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "stage,antenna,capacity_bps_hz"
    assert [ln.split(",")[1] for ln in lines[1:]] == ["3", "2"]
    assert float(lines[-1].split(",")[2]) == pytest.approx(2.8089, abs=1e-3)
    assert main(["select", str(path), "--k", "2", "--bits", "1", "--rho-dbm", "10", "--method", "exhaustive"]) == 0
    assert [ln.split(",")[1] for ln in capsys.readouterr().out.splitlines()[1:]] == ["2", "3"]


def test_select_bad_k(tmp_path):
    path = tmp_path / "h.txt"
    write_channel_file(path, np.ones((3, 2)))
    assert main(["select", str(path), "--k", "5"]) == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qafas", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "summarize" in out.stdout
