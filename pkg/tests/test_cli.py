"""CLI contract: exit codes, file formats, byte determinism."""

import os
import subprocess
import sys

import numpy as np
import pytest

from kerrforge.cli import main

BASE = """
kappa = 1
B = -1.0
m = 0.5
k = 2.0
potential = holomorphic
coeff-file = coeffs.txt
radius = 0.9
samples = 4
seed = 7
tol = 1e-6
"""


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    (tmp_path / "coeffs.txt").write_text("0 -1.0 0.0\n")
    (tmp_path / "run.cfg").write_text(BASE)
    w = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    lines = "\n".join(f"{float(wi)!r} -1.0" for wi in w)
    (tmp_path / "bdata.txt").write_text(lines)
    (tmp_path / "solve.cfg").write_text(
        "kappa = 1\nB = -1.0\nm = 0.0\npotential = boundary-file\n"
        "boundary-file = bdata.txt\nn-r = 24\nn-theta = 48\nradius = 0.5\ntol = 1e-2\n"
    )
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(*argv):
    return main(list(argv))


def test_verify_ricci_exit_zero(workdir, capsys):
    assert run("verify", "ricci", "--config", "run.cfg") == 0
    out = capsys.readouterr().out
    assert '"check": "ricci-flat"' in out and '"pass": true' in out


def test_verify_ricci_bad_B_is_config_error(workdir, capsys):
    cfg = workdir / "bad.cfg"
    cfg.write_text(BASE.replace("B = -1.0", "B = 1.0"))
    assert run("verify", "ricci", "--config", str(cfg)) == 2


def test_verify_requires_explicit_signs(workdir):
    cfg = workdir / "nom.cfg"
    cfg.write_text(BASE.replace("m = 0.5\n", ""))
    assert run("verify", "ricci", "--config", str(cfg)) == 2


def test_verify_nogo_table(workdir, capsys):
    assert run("verify", "nogo", "--config", "run.cfg") == 0
    out = capsys.readouterr().out
    assert "D(4) = 0" in out and "D(6) = 36" in out and "D(8) = 96" in out


def test_verify_writes_reports(workdir):
    assert run("verify", "ricci", "--config", "run.cfg", "--out", "rep.json") == 0
    assert (workdir / "rep.json").exists()
    csv = (workdir / "rep.residuals.csv").read_text().splitlines()
    assert csv[0] == "check,x,y,v,r,residual"
    assert len(csv) == 5  # header + 4 samples


def test_metric_csv_roundtrip(workdir):
    assert run("metric", "--config", "run.cfg", "--out", "m.csv") == 0
    lines = (workdir / "m.csv").read_text().splitlines()
    header = lines[0].split(",")
    assert header == ["x", "y", "v", "r"] + [f"g{i}{j}" for i in range(4) for j in range(i, 4)]
    row = [float(t) for t in lines[1].split(",")]
    g = np.zeros((4, 4))
    idx = 4
    for i in range(4):
        for j in range(i, 4):
            g[i, j] = g[j, i] = row[idx]
            idx += 1
    np.testing.assert_allclose(g, g.T)
    # the fiber direction is null in every row
    for line in lines[1:]:
        assert line.split(",")[-1] == "0.0"


def test_metric_skips_inadmissible_points(workdir, capsys):
    cfg = workdir / "pts.cfg"
    cfg.write_text(BASE.replace("samples = 4\nseed = 7\n",
                                "points = 0.2,0.1,0.0,1.5; 5.0,5.0,0.0,1.0\n"))
    assert run("metric", "--config", str(cfg), "--out", "m2.csv") == 0
    err = capsys.readouterr().err
    assert "skipping point" in err
    lines = (workdir / "m2.csv").read_text().splitlines()
    assert len(lines) == 2


def test_metric_all_points_bad_exits_two(workdir, capsys):
    cfg = workdir / "allbad.cfg"
    cfg.write_text(BASE.replace("samples = 4\nseed = 7\n", "points = 5.0,5.0,0.0,1.0\n"))
    assert run("metric", "--config", str(cfg)) == 2


def test_invariants_csv(workdir):
    assert run("invariants", "--config", "run.cfg", "--out", "inv.csv") == 0
    lines = (workdir / "inv.csv").read_text().splitlines()
    assert lines[0] == "x,y,v,r,kretschmann,ricci_norm"
    assert len(lines) == 5


def test_solve_writes_grid_and_residual(workdir, capsys):
    assert run("solve", "--config", "solve.cfg", "--out", "grid.txt") == 0
    out = capsys.readouterr().out
    assert out.startswith("max_pde_residual=")
    assert (workdir / "grid.txt").exists()


def test_solve_sign_mixed_exit_two(workdir):
    w = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    lines = "\n".join(f"{float(wi)!r} {float(np.cos(wi))!r}" for wi in w)
    (workdir / "bmix.txt").write_text(lines)
    cfg = workdir / "smix.cfg"
    cfg.write_text((workdir / "solve.cfg").read_text().replace("bdata.txt", "bmix.txt"))
    assert run("solve", "--config", str(cfg)) == 2


def test_solve_zero_boundary_exit_two(workdir):
    w = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    (workdir / "bz.txt").write_text("\n".join(f"{float(wi)!r} 0.0" for wi in w))
    cfg = workdir / "sz.cfg"
    cfg.write_text((workdir / "solve.cfg").read_text().replace("bdata.txt", "bz.txt"))
    assert run("solve", "--config", str(cfg)) == 2


def test_unknown_suite_rejected(workdir):
    with pytest.raises(SystemExit):
        run("verify", "everything", "--config", "run.cfg")


def test_byte_determinism(workdir):
    env = dict(os.environ)
    for path, threads in (("a.csv", "1"), ("b.csv", "4")):
        env["KERRFORGE_THREADS"] = threads
        subprocess.run(
            [sys.executable, "-m", "kerrforge.cli", "invariants",
             "--config", "run.cfg", "--out", path],
            cwd=workdir, env=env, check=True, capture_output=True,
        )
    assert (workdir / "a.csv").read_bytes() == (workdir / "b.csv").read_bytes()


def test_grid_file_potential_via_cli(workdir):
    assert run("solve", "--config", "solve.cfg", "--out", "grid.txt") == 0
    cfg = workdir / "g.cfg"
    cfg.write_text(
        "kappa = 1\nB = -1.0\nm = 0.5\nk = 2.0\npotential = grid-file\n"
        "grid-file = grid.txt\npoints = 0.2,0.1,0.0,1.5\n"
    )
    assert run("metric", "--config", str(cfg), "--out", "gm.csv") == 0


def test_verify_ricci_scan_mode(workdir, capsys):
    cfg = workdir / "scan.cfg"
    cfg.write_text(BASE.replace("k = 2.0", "k = scan"))
    assert run("verify", "ricci", "--config", str(cfg)) == 0
    out = capsys.readouterr().out
    assert out.count('"check": "ricci-flat"') == 2


def test_config_validation_errors(workdir):
    dup = workdir / "dup.cfg"
    dup.write_text(BASE + "kappa = 1\n")
    assert run("verify", "ricci", "--config", str(dup)) == 2
    two = workdir / "two.cfg"
    two.write_text(BASE + "grid-file = grid.txt\n")
    assert run("verify", "ricci", "--config", str(two)) == 2
    neg = workdir / "neg.cfg"
    neg.write_text(BASE.replace("tol = 1e-6", "tol = -1"))
    assert run("verify", "ricci", "--config", str(neg)) == 2


def test_verify_background_via_cli(workdir):
    cfg = workdir / "bg.cfg"
    cfg.write_text(BASE.replace("m = 0.5", "m = 0.0").replace("B = -1.0", "B = 2.0"))
    assert run("verify", "background", "--config", str(cfg)) == 0
    # nonzero m is a config error for the background suite
    cfg2 = workdir / "bg2.cfg"
    cfg2.write_text(BASE.replace("B = -1.0", "B = 2.0"))
    assert run("verify", "background", "--config", str(cfg2)) == 2


def test_verify_pde_via_cli(workdir, capsys):
    assert run("verify", "pde", "--config", "run.cfg", "--tol", "1e-8") == 0
    assert '"check": "pde-residual"' in capsys.readouterr().out


def test_verify_kerr_match_via_cli(workdir, capsys):
    cfg = workdir / "km.cfg"
    cfg.write_text("kappa = 1\nB = -1.0\nm = 1.0\na = 1.0\nsamples = 3\nseed = 5\ntol = 1e-4\n")
    assert run("verify", "kerr-match", "--config", str(cfg)) == 0
    assert '"winning_k": 2.0' in capsys.readouterr().out


def test_verify_schwarzschild_via_cli(workdir):
    cfg = workdir / "sa.cfg"
    cfg.write_text("kappa = -1\nB = -1.0\nm = 1.0\nsamples = 4\nseed = 6\ntol = 1e-6\n")
    assert run("verify", "schwarzschild-analog", "--config", str(cfg)) == 0
