import csv
import subprocess
import sys

import numpy as np
import pytest

from dutchlvf import analytic
from dutchlvf.cli import main

from .conftest import SIGMA_5PCT

COMMON = ["--vol-daily", "0.05", "--block-time", "12"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_lvf_headline(capsys):
    code, out, _ = run(capsys, "lvf", "--z0", "0.001", "--decay-per-sec", "1e-4", "--mu", "0", *COMMON)
    assert code == 0
    assert "0.1329%" in out
    assert "23.3" in out


def test_ft_subcommand(capsys):
    code, out, _ = run(capsys, "ft", "--z0", "0.001", "--decay-per-sec", "1e-4", *COMMON)
    assert code == 0 and "23.3" in out and "LVF" not in out


def test_bp_flag_scales_mispricing(capsys):
    _, a, _ = run(capsys, "lvf", "--z0", "10", "--bp", "--decay-per-sec", "1e-4", *COMMON)
    _, b, _ = run(capsys, "lvf", "--z0", "0.001", "--decay-per-sec", "1e-4", *COMMON)
    assert a == b


def test_vol_sec_equivalent(capsys):
    _, a, _ = run(capsys, "stationary", "--delta", "1e-4", *COMMON)
    _, b, _ = run(capsys, "stationary", "--delta", "1e-4", "--vol-sec", repr(SIGMA_5PCT), "--block-time", "12")
    assert a == b and "zeta_minus" in a


def test_sweep_delta_csv(tmp_path, capsys):
    path = tmp_path / "out.csv"
    code, _, _ = run(capsys, "sweep", "--vary", "delta", "--from", "1e-6", "--to", "1e-3", "--points", "200",
                     *COMMON, "--z0", "0", "--csv", str(path))
    assert code == 0
    rows = read_csv(path)
    assert rows[0] == ["delta", "lvf", "ft"]
    assert len(rows) == 201
    data = np.array(rows[1:], dtype=float)
    assert np.all(data[:, 1] >= 4.1649312786339027e-4)
    np.testing.assert_allclose(data[:, 1], analytic.lvf_plus(data[:, 0], SIGMA_5PCT, 12.0), rtol=1e-15)
    raw = path.read_bytes()
    assert b"\r" not in raw
    # 17 significant digits round-trip
    assert float(rows[5][0]) == np.geomspace(1e-6, 1e-3, 200)[4]


def test_sweep_is_byte_stable(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        run(capsys, "sweep", "--vary", "z0", "--from", "-5e-3", "--to", "5e-3", "--points", "101",
            "--decay-per-sec", "1e-4", *COMMON, "--csv", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()
    rows = read_csv(paths[0])
    assert rows[0] == ["z0", "lvf", "ft"] and len(rows) == 102


def test_sweep_to_stdout(capsys):
    code, out, _ = run(capsys, "sweep", "--vary", "z0", "--from", "-10", "--to", "10", "--bp", "--points", "3",
                       "--delta", "1e-4", *COMMON)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "z0,lvf,ft" and len(lines) == 4
    assert float(lines[1].split(",")[0]) == pytest.approx(-1e-3)


def test_frontier_csv(tmp_path, capsys):
    path = tmp_path / "f.csv"
    code, _, _ = run(capsys, "frontier", "--theta-from", "1e-6", "--theta-to", "1e-4", "--points", "4", *COMMON,
                     "--csv", str(path))
    assert code == 0
    rows = read_csv(path)
    assert rows[0] == ["theta", "z0", "delta", "lvf", "ft"] and len(rows) == 5
    lv = [float(r[3]) for r in rows[1:]]
    assert lv == sorted(lv)


def test_frontier_prior(capsys):
    code, out, _ = run(capsys, "frontier", "--thetas", "1e-5", "--prior-sigma0", "5e-4", *COMMON)
    assert code == 0
    assert out.splitlines()[0] == "theta,log_ask_ratio,delta,lvf,ft"


def test_gda_and_bayes(capsys):
    code, out, _ = run(capsys, "gda", "--decay-per-sec", "1e-4", "--emission-rate", "1", *COMMON)
    assert code == 0 and "ARB / VOL" in out and "0.001329" in out
    code, out, _ = run(capsys, "bayes", "--delta", "1e-4", "--sigma0", "5e-4", "--mu0", "0", *COMMON)
    assert code == 0 and "E[FT]" in out
    code, out, _ = run(capsys, "bayes", "--delta", "1e-4", "--sigma0", "0.01", "--ask0", "1", "--value-mean", "1",
                       *COMMON)
    assert code == 0 and "5e-05" in out


def test_simulate_table(capsys):
    code, out, _ = run(capsys, "simulate", "--delta", "1e-4", *COMMON, "--paths", "2000", "--seed", "1")
    assert code == 0
    assert "closed form" in out and "LVF" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["lvf", "--delta", "-1e-4", *COMMON],
        ["lvf", "--decay-per-sec", "1e-9", "--mu=-1e-3", *COMMON],
        ["sweep", "--vary", "delta", "--from", "0", "--to", "1e-3", "--spacing", "lin", *COMMON],
    ],
)
def test_domain_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert "Assumption 1" in err


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["lvf", "--delta", "1e-4"], "--vol-daily"),
        (["lvf", "--delta", "1e-4", "--vol-daily", "0.05", "--vol-sec", "1e-4"], "--vol-sec"),
        (["lvf", *COMMON], "--decay-per-sec"),
        (["bayes", "--delta", "1e-4", "--sigma0", "1e-3", *COMMON], "--mu0"),
        (["sweep", "--vary", "z0", "--from", "0", "--to", "1", *COMMON], "--delta"),
        (["simulate", "--delta", "1e-4", *COMMON, "--paths", "0"], "--paths"),
        (["frobnicate"], "frobnicate"),
        ([], "command"),
    ],
)
def test_usage_errors_exit_2(capsys, argv, flag):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert flag in err


def test_validate_passes_and_is_deterministic(capsys):
    argv = ["validate", "--suite", "all", "--paths", "20000", "--chains", "200", "--blocks-per-chain", "500",
            "--burn-in", "2000", "--seed", "42"]
    code, first, _ = run(capsys, *argv)
    assert code == 0 and first.rstrip().endswith("standard errors")
    _, second, _ = run(capsys, *argv)
    _, threaded, _ = run(capsys, *argv, "--threads", "3")
    assert first == second == threaded


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dutchlvf", "lvf", "--delta", "1e-4", *COMMON],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "LVF" in res.stdout
    res = subprocess.run([sys.executable, "-m", "dutchlvf", "lvf"], capture_output=True, text=True)
    assert res.returncode == 2
