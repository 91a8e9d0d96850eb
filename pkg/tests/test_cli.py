import json
import math

import pytest

from qgeom.cli import main

CUT = "--cutoff"


def parse_csv(text):
    import csv
    lines = [ln for ln in text.strip().splitlines() if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    rows = [dict(zip(header, cells)) for cells in reader]
    return header, rows


def test_eval_gho_all_methods(capsys, tmp_path):
    out_file = tmp_path / "eval.csv"
    code = main(["eval", "--model", "gho", "--point", "2,0.5,1", "--n", "1",
                 "--method", "all", CUT, "40", "--out", str(out_file)])
    assert code == 0
    header, rows = parse_csv(out_file.read_text())
    methods = [r["method"] for r in rows]
    assert methods == ["perturbative", "overlap-fd", "covariance",
                       "closed-form", "agreement"]
    agree = rows[-1]
    assert float(agree["dev[perturbative-vs-overlap-fd]"]) < 1e-5
    assert float(agree["dev[perturbative-vs-covariance]"]) < 1e-8
    # split columns present for the perturbative record
    assert "metric_re[X|Y]" in header and "berry_re[X|Y]" in header


def test_eval_domain_message(capsys):
    code = main(["eval", "--model", "gho", "--point", "1,2,1", "--n", "0"])
    captured = capsys.readouterr()
    assert code == 2
    assert "XZ - Y^2" in captured.err


def test_unknown_model_exit_2(capsys):
    import subprocess, sys
    proc = subprocess.run([sys.executable, "-m", "qgeom.cli", "eval",
                           "--model", "bogus", "--point", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 2


def test_degenerate_state_exit_3(capsys):
    code = main(["eval", "--model", "sym-coupled", "--point", "2,3.000000004",
                 "--n", "1,2", CUT, "16"])
    captured = capsys.readouterr()
    assert code == 3


def test_eval_gaussian_expressions(capsys, tmp_path):
    out_file = tmp_path / "gauss.json"
    code = main(["eval", "--model", "gaussian", "--sigma", "X^(-1/4)",
                 "--mu", "W/X", "--params", "W,X", "--point", "1,1",
                 "--n", "0", CUT, "40", "--method", "perturbative,closed-form",
                 "--format", "json", "--out", str(out_file)])
    assert code == 0
    doc = json.loads(out_file.read_text())
    rows = doc["rows"]
    pert = rows[0]
    # metric at (W, X) = (1, 1): g_WW = 1/2, g_WX = -1/2, g_XX = 17/32
    assert pert["G_re[W|W]"] == pytest.approx(0.5, abs=1e-8)
    assert pert["G_re[W|X]"] == pytest.approx(-0.5, abs=1e-8)
    assert pert["G_re[X|X]"] == pytest.approx(17.0 / 32.0, abs=1e-8)


def test_sweep_monotone_trends(tmp_path):
    out_file = tmp_path / "sweep.csv"
    code = main(["sweep", "--model", "sym-coupled", "--axis", "k1=0:5:11",
                 "--fix", "k0=1", "--n", "0,0", CUT, "16",
                 "--quantities", "purity,entropy,nu,det_metric",
                 "--out", str(out_file), "--no-header-timestamp"])
    assert code == 0
    _, rows = parse_csv(out_file.read_text())
    assert len(rows) == 11
    mus = [float(r["purity"]) for r in rows]
    ents = [float(r["entropy"]) for r in rows]
    assert all(b < a for a, b in zip(mus, mus[1:]))
    assert all(b > a for a, b in zip(ents, ents[1:]))


def test_sweep_detqmt_column(tmp_path):
    # det g over Y at X = 1, W = 1 reproduces the closed determinant
    out_file = tmp_path / "det.csv"
    code = main(["sweep", "--model", "gho-linear", "--axis", "Y=-0.5:0.5:5",
                 "--fix", "W=1", "--fix", "X=1", "--fix", "Z=1", "--n", "1",
                 "--quantities", "metric_det", "--out", str(out_file)])
    assert code == 0
    _, rows = parse_csv(out_file.read_text())
    from qgeom.models import get_model
    model = get_model("gho-linear")
    for row in rows:
        y = float(row["point[Y]"])
        expected = model.closed_form("metric_det", model.point(1.0, 1.0, y, 1.0), (1,))
        assert float(row["metric_det"]) == pytest.approx(expected, rel=1e-12)


def test_sweep_curvature_columns(tmp_path):
    # phase-metric curvatures along Y at Z = 1, X = 2, n = 0
    out_file = tmp_path / "curv.csv"
    code = main(["sweep", "--model", "gho", "--axis", "Y=-0.9:0.9:7",
                 "--fix", "X=2", "--fix", "Z=1", "--n", "0",
                 "--quantities", "scalar:phase:XY,scalar:phase:XZ,scalar:phase:YZ",
                 "--out", str(out_file)])
    assert code == 0
    _, rows = parse_csv(out_file.read_text())
    from qgeom.models import get_model
    model = get_model("gho")
    for row in rows:
        y = float(row["point[Y]"])
        point = model.point(2.0, y, 1.0)
        for name in ("scalar:phase:XY", "scalar:phase:XZ", "scalar:phase:YZ"):
            assert float(row[name]) == pytest.approx(
                model.closed_form(name, point, (0,)), rel=1e-12)


def test_sweep_error_column_keeps_running(tmp_path):
    out_file = tmp_path / "err.csv"
    # the grid crosses the domain boundary 4AB = C^2
    code = main(["sweep", "--model", "lin-coupled", "--axis", "C=0:4:5",
                 "--fix", "A=1", "--fix", "B=2", "--n", "0,0",
                 "--quantities", "purity", "--out", str(out_file)])
    assert code == 0
    header, rows = parse_csv(out_file.read_text())
    assert "error" in header
    assert len(rows) == 5
    assert any(r.get("error") for r in rows)
    assert any(r.get("purity") for r in rows)


def test_sweep_workers_deterministic(tmp_path):
    args = ["sweep", "--model", "sym-coupled", "--axis", "k1=0:2:5",
            "--fix", "k0=1", "--n", "0,0", CUT, "12",
            "--quantities", "purity,entropy", "--no-header-timestamp"]
    f1 = tmp_path / "w1.csv"
    f2 = tmp_path / "w4.csv"
    assert main(args + ["--out", str(f1), "--workers", "1"]) == 0
    assert main(args + ["--out", str(f2), "--workers", "4"]) == 0
    assert f1.read_bytes() == f2.read_bytes()


def test_output_determinism_and_timestamp(tmp_path):
    args = ["eval", "--model", "gho", "--point", "1.5,0.2,1", "--n", "0",
            CUT, "24", "--method", "perturbative"]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(args + ["--out", str(a), "--no-header-timestamp"]) == 0
    assert main(args + ["--out", str(b), "--no-header-timestamp"]) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    assert main(args + ["--out", str(c)]) == 0
    assert c.read_text().startswith("# generated ")


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "job.ini"
    cfg.write_text("""
[job]
model = gho
point = 2, 0.5, 1
n = 0
cutoff = 24
method = perturbative
timestamp = false
""")
    out_file = tmp_path / "out.csv"
    code = main(["eval", "--config", str(cfg), "--n", "1", "--out", str(out_file)])
    assert code == 0
    _, rows = parse_csv(out_file.read_text())
    assert rows[0]["n"] == "1"  # flag wins over the config file


def test_gaussian_config_section(tmp_path):
    cfg = tmp_path / "job.ini"
    cfg.write_text("""
[job]
model = gaussian
point = 1, 1
n = 0
cutoff = 30
method = closed-form

[gaussian]
sigma = X^(-1/4)
mu = W/X
params = W, X
""")
    out_file = tmp_path / "out.csv"
    assert main(["eval", "--config", str(cfg), "--out", str(out_file)]) == 0
    _, rows = parse_csv(out_file.read_text())
    assert rows[0]["method"] == "closed-form"


def test_curvature_command(tmp_path):
    out_file = tmp_path / "curv.json"
    code = main(["curvature", "--model", "sym-coupled", "--point", "1,1",
                 "--n", "0,0", "--which", "param", "--format", "json",
                 "--out", str(out_file)])
    assert code == 0
    doc = json.loads(out_file.read_text())
    row = doc["rows"][0]
    assert row["flat"] is True
    assert row["christoffel[0|0|0]"] == pytest.approx(-1.0, abs=1e-6)


def test_curvature_phase_submanifold(tmp_path):
    out_file = tmp_path / "curv2.json"
    code = main(["curvature", "--model", "gho", "--point", "2,0.5,1",
                 "--n", "0", "--which", "phase:XY", "--format", "json",
                 "--out", str(out_file)])
    assert code == 0
    doc = json.loads(out_file.read_text())
    row = doc["rows"][0]
    from qgeom.models import get_model
    model = get_model("gho")
    expected = model.closed_form("scalar:phase:XY", model.point(2.0, 0.5, 1.0), (0,))
    assert row["scalar"] == pytest.approx(expected, abs=1e-4)
    assert row["scalar_2d_direct"] == pytest.approx(expected, abs=1e-4)


def test_entangle_command(tmp_path):
    out_file = tmp_path / "ent.csv"
    code = main(["entangle", "--model", "sym-coupled", "--point", "1,1",
                 "--n", "0,0", CUT, "20", "--out", str(out_file)])
    assert code == 0
    _, rows = parse_csv(out_file.read_text())
    row = rows[0]
    w1, w2 = 1.0, math.sqrt(3.0)
    assert float(row["purity"]) == pytest.approx(float(row["purity_closed"]), abs=1e-8)
    assert float(row["nu"]) == pytest.approx((w1 + w2) / (4 * math.sqrt(w1 * w2)),
                                             abs=1e-8)


def test_entangle_rejects_single_mode(capsys):
    assert main(["entangle", "--model", "gho", "--point", "1,0,1", "--n", "0"]) == 2


def test_bad_cutoff_rejected(capsys):
    assert main(["eval", "--model", "gho", "--point", "1,0,1", "--n", "0",
                 CUT, "4"]) == 2


def test_sweep_two_axes_grid_order(tmp_path):
    out_file = tmp_path / "grid.csv"
    code = main(["sweep", "--model", "sym-coupled", "--axis", "k0=1:2:2",
                 "--axis", "k1=0:2:3", "--n", "0,0",
                 "--quantities", "purity", "--out", str(out_file)])
    assert code == 0
    _, rows = parse_csv(out_file.read_text())
    got = [(float(r["point[k0]"]), float(r["point[k1]"])) for r in rows]
    assert got == [(1.0, 0.0), (1.0, 1.0), (1.0, 2.0),
                   (2.0, 0.0), (2.0, 1.0), (2.0, 2.0)]


def test_sweep_det_multiple_quantum_numbers(tmp_path):
    for n in (0, 2):
        out_file = tmp_path / f"det{n}.csv"
        assert main(["sweep", "--model", "gho-linear", "--axis", "Y=-0.4:0.4:3",
                     "--fix", "W=1", "--fix", "X=1", "--fix", "Z=1",
                     "--n", str(n), "--quantities", "metric_det",
                     "--out", str(out_file)]) == 0
        _, rows = parse_csv(out_file.read_text())
        assert all(float(r["metric_det"]) > 0 for r in rows)


def test_eval_two_mode_all_methods(tmp_path):
    out_file = tmp_path / "sym.csv"
    code = main(["eval", "--model", "sym-coupled", "--point", "1,0.8",
                 "--n", "0,0", "--method", "all", CUT, "16",
                 "--out", str(out_file)])
    assert code == 0
    _, rows = parse_csv(out_file.read_text())
    agree = rows[-1]
    assert agree["method"] == "agreement"
    assert float(agree["dev[perturbative-vs-covariance]"]) < 1e-8
    cov_row = rows[2]
    assert cov_row["method"] == "covariance"
    assert float(cov_row["sigma_re[q1|q1]"]) > 0


def test_curvature_param_z1(tmp_path):
    out_file = tmp_path / "z1.json"
    code = main(["curvature", "--model", "gho-linear", "--point", "1,1,0,1",
                 "--n", "0", "--which", "param-z1", "--format", "json",
                 "--out", str(out_file)])
    assert code == 0
    doc = json.loads(out_file.read_text())
    row = doc["rows"][0]
    assert row["scalar"] == pytest.approx(-6.88, abs=1e-4)
    assert row["flat"] is False


def test_config_two_axes(tmp_path):
    cfg = tmp_path / "grid.ini"
    cfg.write_text("""
[job]
model = sym-coupled
axis = k0=1:2:2; k1=0:1:2
n = 0, 0
quantities = purity
timestamp = false
""")
    out_file = tmp_path / "grid.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out_file)]) == 0
    _, rows = parse_csv(out_file.read_text())
    assert len(rows) == 4
