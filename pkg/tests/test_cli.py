import re
import subprocess
import sys

import numpy as np
import pytest

from nie import ScanTable, load_preset
from nie.cli import main
from nie.scenarios import PRESETS

NUM = re.compile(r"^-?\d\.\d{12}e[+-]\d{2}$")


def test_spec_example(tmp_path):
    out = tmp_path / "t.csv"
    code = main(["run", "--preset", "na2_down", "--regime", "perturbative", "--scan", "y3",
                 "--from", "-80", "--to", "80", "--points", "161", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 162
    head = lines[0].split(",")
    assert head[:4] == ["y3", "re_chi4", "im_chi4", "abs2_chi4"]
    assert all(NUM.match(x) for x in lines[1].split(","))
    t = ScanTable.read(out)
    assert t.rows[0, 0] == -80 and t.rows[-1, 0] == 80


def test_tsv_and_plotscript(tmp_path):
    out = tmp_path / "t.tsv"
    code = main(["run", "--preset", "ne_v_open_fig2", "--points", "5", "--nodes", "401",
                 "--out", str(out), "--emit-plotscript"])
    assert code == 0
    assert "\t" in out.read_text().splitlines()[0]
    gp = (tmp_path / "t.tsv.gp").read_text()
    assert 'separator "\\t"' in gp and '"t.tsv"' in gp


def test_stdout(capsys):
    assert main(["run", "--preset", "na_closed_fig3", "--points", "3", "--nodes", "101", "--out", "-"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 4


def test_flags_override_preset(tmp_path):
    out = tmp_path / "t.csv"
    main(["run", "--preset", "na2_up", "--set", "S1=65", "--points", "3", "--nodes", "201", "--out", str(out)])
    t = ScanTable.read(out)
    assert t.column("S1") == pytest.approx([65.0] * 3, rel=1e-12)
    assert t.column("S2") == pytest.approx([350.0] * 3, rel=1e-12)


def test_variant_flag(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["run", "--preset", "na2_up", "--variant", "two_strong", "--points", "3",
                 "--nodes", "201", "--out", str(out)]) == 0
    assert "re_chi2" in out.read_text().splitlines()[0]


@pytest.mark.parametrize("argv, key", [
    (["run", "--preset", "nope", "--out", "x.csv"], "--preset"),
    (["run", "--preset", "na2_up", "--variant", "nope", "--out", "x.csv"], "--variant"),
    (["run", "--preset", "na2_up", "--points", "1", "--out", "x.csv"], "--points"),
    (["run", "--preset", "na2_up", "--scan", "q9", "--out", "x.csv"], "--scan"),
    (["run", "--preset", "na2_up", "--set", "S1", "--out", "x.csv"], "--set"),
    (["run", "--preset", "na2_up", "--set", "S1=big", "--out", "x.csv"], "--set S1"),
    (["run", "--preset", "na2_up", "--regime", "two_field", "--points", "2", "--out", "x.csv"], "--regime"),
    (["run", "--preset", "na2_up", "--nodes", "3", "--out", "x.csv"], "--grid"),
    (["run", "--preset", "na2_up", "--workers", "0", "--points", "2", "--out", "x.csv"], "--workers"),
    (["run", "--preset", "ne_v_open_fig2", "--lock", "omega2:omega1", "--points", "2", "--out", "x.csv"], "--lock"),
    (["run", "--preset", "na2_up", "--out", "/no/such/dir/x.csv"], "--out"),
    (["run", "--config", "/no/such.ini", "--out", "x.csv"], "--config"),
])
def test_usage_errors(argv, key, capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 1
    assert key in capsys.readouterr().err
    assert not (tmp_path / "x.csv").exists()


def test_argparse_errors_exit_one():
    assert main(["run", "--out", "x.csv"]) == 1
    assert main(["bogus"]) == 1


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0


def test_numeric_failure_exit_two(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text(load_preset("ne_v_open_fig2").to_ini().replace("m = 85.0", "m = 100.0"))
    assert main(["run", "--config", str(cfg), "--points", "5", "--nodes", "101", "--out", str(tmp_path / "x.csv")]) == 2
    err = capsys.readouterr().err
    assert "scan point 0" in err and "-20.0" in err


def test_config_file_round_trip(tmp_path):
    cfg = tmp_path / "mine.ini"
    cfg.write_text(load_preset("na_closed_fig3").to_ini())
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["run", "--config", str(cfg), "--points", "5", "--nodes", "201", "--out", str(a)]) == 0
    assert main(["run", "--preset", "na_closed_fig3", "--points", "5", "--nodes", "201", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()


def test_env_workers(tmp_path, monkeypatch):
    out = tmp_path / "t.csv"
    monkeypatch.setenv("NIE_THREADS", "3")
    assert main(["run", "--preset", "na2_up", "--points", "7", "--nodes", "201", "--out", str(out)]) == 0
    one = tmp_path / "one.csv"
    assert main(["run", "--preset", "na2_up", "--points", "7", "--nodes", "201", "--workers", "1", "--out", str(one)]) == 0
    assert out.read_text() == one.read_text()
    monkeypatch.setenv("NIE_THREADS", "many")
    assert main(["run", "--preset", "na2_up", "--points", "2", "--out", str(out)]) == 1


def test_presets_lists_five(capsys):
    assert main(["presets"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [ln.split()[0] for ln in lines] == list(PRESETS)
    assert all(len(ln.split()) > 3 for ln in lines)


def test_presets_describe_and_ini(capsys):
    assert main(["presets", "na2_down"]) == 0
    assert "S1 = |G1|^2" in capsys.readouterr().out
    assert main(["presets", "na2_down", "--ini"]) == 0
    assert "[field.1]" in capsys.readouterr().out
    assert main(["presets", "nope"]) == 1


def test_verify_ratios(capsys):
    assert main(["verify", "--suite", "ratios"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert all(ln.startswith("PASS") for ln in out[:-1])
    assert out[-1].endswith("checks passed")


def test_verify_oracle_small(capsys):
    assert main(["verify", "--suite", "oracle", "--draws", "2"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    out = tmp_path / "t.csv"
    r = subprocess.run([sys.executable, "-m", "nie.cli", "run", "--preset", "na2_up", "--points", "3",
                        "--nodes", "101", "--out", str(out)], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert np.isfinite(ScanTable.read(out).rows).all()
