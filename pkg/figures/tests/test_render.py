"""Renders every figure id from small golden CSVs produced by the
hydrocasimir CLI (the only interface this package consumes)."""

import subprocess
import sys

import pytest

from hydrofigs import FigureSpec, SchemaError, render
from hydrofigs.render import main


def cli(*args):
    proc = subprocess.run([sys.executable, "-m", "hydrocasimir.cli", *args],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def golden(tmp_path_factory):
    base = tmp_path_factory.mktemp("golden")
    cli("pressure-scan", "--d-min-nm", "160", "--d-max-nm", "750", "--n-d", "3",
        "--models", "local,hydro,surfcond", "--rel-tol", "1e-4",
        "-o", str(base / "press.csv"))
    cli("heat-scan", "--d-min-nm", "60", "--d-max-nm", "240", "--n-d", "3",
        "--models", "local,surfcond", "--rel-tol", "1e-3",
        "-o", str(base / "heat.csv"))
    cli("viscosity-scan", "--n-omega", "24", "--q-ell", "0.3,1,3",
        "-o", str(base / "visc.csv"))
    cli("profile", "--k-lamp", "0.79", "--omega-tau", "0.1", "--n-points", "80",
        "-o", str(base / "prof_low.csv"))
    cli("profile", "--k-lamp", "0.79", "--omega-tau", "1.0", "--n-points", "80",
        "-o", str(base / "prof_high.csv"))
    cli("reflection-scan", "--k-lamp", "0.3,3", "--n-omega", "60",
        "--models", "local,hydro,surfcond", "-o", str(base / "refl.csv"))
    cli("map", "--model", "hydro", "--n-k", "12", "--n-omega", "10",
        "--quantity", "pressure", "-o", str(base / "map_p.csv"))
    cli("map", "--model", "surfcond", "--n-k", "12", "--n-omega", "10",
        "--quantity", "heat", "-o", str(base / "map_h.csv"))
    # a tiny experimental-overlay table
    (base / "overlay.csv").write_text("d_nm,value,err\n200,1e-2,3e-3\n500,1.5e-3,5e-4\n")
    return base


CASES = {
    "fig1-left": ["press.csv"],
    "fig1-right": ["heat.csv"],
    "fig2": ["visc.csv"],
    "fig3": ["prof_low.csv", "prof_high.csv"],
    "fig4": ["refl.csv"],
    "fig5": ["map_p.csv", "map_h.csv"],
}


@pytest.mark.parametrize("figure", sorted(CASES))
def test_renders_every_figure(golden, tmp_path, figure):
    spec = FigureSpec(figure=figure,
                      inputs=[str(golden / name) for name in CASES[figure]],
                      output=str(tmp_path / figure.replace("-", "_")))
    written = render(spec)
    assert len(written) == 2
    for path in written:
        assert path.endswith((".png", ".svg"))
        with open(path, "rb") as fh:
            assert len(fh.read()) > 2000


def test_overlay_points(golden, tmp_path):
    spec = FigureSpec(figure="fig1-left", inputs=[str(golden / "press.csv")],
                      output=str(tmp_path / "fig1_overlay"),
                      overlay=str(golden / "overlay.csv"))
    assert len(render(spec)) == 2


def test_empty_overlay(golden, tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("d_nm,value,err\n")
    spec = FigureSpec(figure="fig1-left", inputs=[str(golden / "press.csv")],
                      output=str(tmp_path / "fig1_empty"), overlay=str(empty))
    assert len(render(spec)) == 2


def test_schema_mismatch_names_column(golden, tmp_path):
    # a pressure scan fed to the viscosity figure: the error names the
    # first column the figure needs and cannot find
    spec = FigureSpec(figure="fig2", inputs=[str(golden / "press.csv")],
                      output=str(tmp_path / "bad"))
    with pytest.raises(SchemaError, match="missing column 'omega_tau'"):
        render(spec)
    spec = FigureSpec(figure="fig2", inputs=[str(golden / "refl.csv")],
                      output=str(tmp_path / "bad2"))
    with pytest.raises(SchemaError, match="missing column 're_eta_over_vF2tau'"):
        render(spec)


def test_deterministic_output(golden, tmp_path):
    blobs = []
    for tag in ("a", "b"):
        spec = FigureSpec(figure="fig2", inputs=[str(golden / "visc.csv")],
                          output=str(tmp_path / f"det_{tag}"))
        paths = render(spec)
        blobs.append(tuple(open(p, "rb").read() for p in paths))
    assert blobs[0] == blobs[1]


def test_spec_validation(golden):
    with pytest.raises(ValueError):
        FigureSpec(figure="fig9", inputs=["x.csv"], output="y")
    with pytest.raises(ValueError):
        FigureSpec(figure="fig2", inputs=[], output="y")


def test_cli_entry(golden, tmp_path):
    out = tmp_path / "cli_fig2"
    assert main(["--figure", "fig2", "-i", str(golden / "visc.csv"),
                 "-o", str(out)]) == 0
    assert (tmp_path / "cli_fig2.png").exists()
    assert main(["--figure", "fig2", "-i", str(golden / "press.csv"),
                 "-o", str(out)]) == 1
