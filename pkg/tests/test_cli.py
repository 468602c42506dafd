import csv
import re

import numpy as np
import pytest

from hydrocasimir.cli import main


def read_csv(path):
    comments = []
    with open(path) as fh:
        lines = fh.readlines()
    rows = [line for line in lines if not line.startswith("#")]
    comments = [line for line in lines if line.startswith("#")]
    parsed = list(csv.reader(rows))
    return comments, parsed[0], parsed[1:]


def test_material_info(capsys):
    assert main(["material-info"]) == 0
    out = capsys.readouterr().out
    ell = float(re.search(r"mean free path ell \[nm\]\s+(\S+)", out).group(1))
    lamp = float(re.search(r"reduced plasma wavelength \[nm\]\s+(\S+)", out).group(1))
    assert ell == pytest.approx(34.0, rel=0.02)
    assert lamp == pytest.approx(22.0, rel=0.02)


def test_material_info_custom_file(tmp_path, capsys):
    cfg = tmp_path / "metal.cfg"
    cfg.write_text("name = custommetal\neps_b = 1.0\nhbar_omega_p_eV = 9.0\n"
                   "hbar_over_tau_meV = 30\nv_F_m_per_s = 1.2e6\n")
    assert main(["material-info", "--material", str(cfg)]) == 0
    assert "custommetal" in capsys.readouterr().out


def test_missing_material_file():
    assert main(["material-info", "--material", "/does/not/exist.cfg"]) == 1


def test_validate(capsys):
    assert main(["validate", "--rel-tol", "1e-7"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") >= 7
    assert "FAIL" not in out


def test_viscosity_scan(tmp_path):
    out = tmp_path / "visc.csv"
    assert main(["viscosity-scan", "--n-omega", "12", "--q-ell", "0.3,1",
                 "-o", str(out)]) == 0
    comments, header, rows = read_csv(out)
    assert header == ["omega_tau", "q_ell", "re_eta_over_vF2tau",
                      "beta_T_sq_over_vF2", "model_tag"]
    tags = {row[4] for row in rows}
    assert tags == {"hydro", "finite_q", "deandres"}
    assert any(line.startswith("# config-hash:") for line in comments)
    # hydro rows carry Re eta/(v_F^2 tau) = 1/5 at omega -> 0
    first_hydro = [row for row in rows if row[4] == "hydro"][0]
    assert float(first_hydro[2]) == pytest.approx(0.2, rel=1e-2)


def test_reflection_scan(tmp_path):
    out = tmp_path / "refl.csv"
    assert main(["reflection-scan", "--n-omega", "10", "--k-lamp", "0.3",
                 "--models", "local,hydro", "--pol", "s", "-o", str(out)]) == 0
    comments, header, rows = read_csv(out)
    assert header[:4] == ["k_per_lambda_p", "k_per_m", "omega_tau", "omega_eV"]
    assert len(rows) == 20
    # |r|^2 column is consistent with re/im
    for row in rows[:5]:
        assert float(row[8]) == pytest.approx(float(row[6]) ** 2 + float(row[7]) ** 2)


def test_reflection_scan_rejects_hydro_p(tmp_path):
    out = tmp_path / "refl.csv"
    assert main(["reflection-scan", "--models", "hydro", "--pol", "p",
                 "-o", str(out)]) == 1


def test_profile_csv(tmp_path):
    out = tmp_path / "prof.csv"
    assert main(["profile", "--k-lamp", "0.64", "--omega-tau", "1.0",
                 "--n-points", "50", "-o", str(out)]) == 0
    comments, header, rows = read_csv(out)
    assert header == ["z_nm", "re_v", "im_v", "re_v_loc", "im_v_loc", "re_A", "im_A"]
    assert len(rows) == 50
    assert float(rows[0][0]) == 0.0
    # no-slip: v vanishes at the surface, the local profile does not
    assert float(rows[0][1]) == 0.0 and float(rows[0][2]) == 0.0
    assert abs(complex(float(rows[0][3]), float(rows[0][4]))) > 0


def test_pressure_scan_and_determinism(tmp_path):
    args = ["pressure-scan", "--d-min-nm", "200", "--d-max-nm", "400",
            "--n-d", "2", "--models", "local", "--rel-tol", "1e-5"]
    blobs = []
    for threads in ("1", "4", "8"):
        out = tmp_path / f"p{threads}.csv"
        assert main(args + ["--threads", threads, "-o", str(out)]) == 0
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1] == blobs[2]
    comments, header, rows = read_csv(tmp_path / "p1.csv")
    assert header == ["d_nm", "model", "P_thermal_Pa", "P_evan", "P_prop", "err"]
    assert len(rows) == 2
    for row in rows:
        assert float(row[2]) > 0  # repulsive s-polarised thermal part


def test_pressure_scan_rejects_hydro_p(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["pressure-scan", "--models", "hydro", "--pol", "p",
                 "-o", str(out)]) == 1


def test_heat_scan(tmp_path):
    out = tmp_path / "h.csv"
    assert main(["heat-scan", "--d-min-nm", "100", "--d-max-nm", "200", "--n-d", "2",
                 "--models", "local,surfcond", "--rel-tol", "1e-4",
                 "-o", str(out)]) == 0
    comments, header, rows = read_csv(out)
    assert header == ["d_nm", "model", "h_W_m2K", "err"]
    assert len(rows) == 4
    by_model = {}
    for row in rows:
        by_model.setdefault(row[1], []).append(float(row[2]))
    assert all(h > 0 for hs in by_model.values() for h in hs)
    assert all(s < l for s, l in zip(by_model["surfcond"], by_model["local"]))


def test_map(tmp_path):
    out = tmp_path / "map.csv"
    assert main(["map", "--model", "local", "--n-k", "6", "--n-omega", "5",
                 "-o", str(out)]) == 0
    comments, header, rows = read_csv(out)
    assert header == ["k_over_lambda_p_inv", "omega_tau", "value_normalized"]
    assert len(rows) == 30
    vals = np.array([float(r[2]) for r in rows])
    assert np.abs(vals).max() == pytest.approx(1.0)
    assert any("guide magnetic_diffusion_coefficient" in line for line in comments)


def test_unknown_model(tmp_path):
    assert main(["pressure-scan", "--models", "plasma", "-o",
                 str(tmp_path / "x.csv")]) == 1


def test_bad_arguments_exit_one():
    # missing required output; argparse errors map to the config exit code
    assert main(["viscosity-scan"]) == 1
    assert main(["no-such-command"]) == 1
