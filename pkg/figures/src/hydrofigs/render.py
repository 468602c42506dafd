"""Render the reference figures from hydrocasimir CSV files.

This package never computes physics: every plotted number comes out of a
CSV written by the hydrocasimir CLI (plus unit bookkeeping carried in the
CSV headers).  Rendering is deterministic for fixed inputs: SVG ids are
salted and no timestamps are embedded.

Figure ids
----------
fig1-left   pressure-scan CSVs    thermal pressure vs gap, one curve per model
fig1-right  heat-scan CSV         heat transfer coefficient vs gap
fig2        viscosity-scan CSV    shear viscosity (top) and modulus (bottom)
fig3        profile CSVs (1..4)   sub-surface current distribution panels
fig4        reflection-scan CSV   Im r / absorption vs frequency per model
fig5        map CSVs (1..2)       contribution maps in the k-omega plane
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

import matplotlib
matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "hydrofigs"
import matplotlib.pyplot as plt
import numpy as np

FIGURE_IDS = ("fig1-left", "fig1-right", "fig2", "fig3", "fig4", "fig5")

_MODEL_STYLE = {
    "local": dict(color="tab:blue"),
    "hydro": dict(color="tab:red"),
    "surfcond": dict(color="tab:green"),
    "ideal": dict(color="black"),
}


class SchemaError(ValueError):
    """A CSV is missing a column the figure needs."""


@dataclass
class ScanTable:
    comments: list
    columns: dict
    raw: dict = field(default_factory=dict)

    def __getitem__(self, name):
        if name not in self.columns:
            raise SchemaError(f"missing column {name!r}; found {sorted(self.raw)}")
        return self.columns[name]

    def strings(self, name):
        if name not in self.raw:
            raise SchemaError(f"missing column {name!r}; found {sorted(self.raw)}")
        return self.raw[name]

    def guideline(self, key):
        """Value of a '# guideline <key> ... = <value>' header line."""
        for line in self.comments:
            parts = line.lstrip("# ").split()
            if len(parts) >= 2 and parts[0] == "guideline" and parts[1] == key:
                return float(parts[-1])
        return None

    def lightlines(self):
        out = {}
        for line in self.comments:
            if line.startswith("# lightline"):
                fields = dict(part.split("=") for part in line.split()[2:])
                out[float(fields["k_lambda_p"])] = float(fields["omega_tau"])
        return out


def read_table(path) -> ScanTable:
    comments = []
    rows = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                comments.append(line.rstrip("\n"))
            else:
                rows.append(line)
    if not rows:
        raise SchemaError(f"{path}: no header row found")
    parsed = list(csv.reader(rows))
    header, data = parsed[0], parsed[1:]
    raw = {name: [row[i] for row in data] for i, name in enumerate(header)}
    columns = {}
    for name, values in raw.items():
        try:
            columns[name] = np.array([float(v) for v in values])
        except ValueError:
            columns[name] = None  # non-numeric column (model tags etc.)
    return ScanTable(comments=comments,
                     columns={k: v for k, v in columns.items() if v is not None},
                     raw=raw)


@dataclass
class FigureSpec:
    figure: str
    inputs: list
    output: str
    overlay: str | None = None

    def __post_init__(self):
        if self.figure not in FIGURE_IDS:
            raise ValueError(f"unknown figure id {self.figure!r}; choose from {FIGURE_IDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


def _groups(table, tag_column):
    tags = table.strings(tag_column)
    seen = []
    for tag in tags:
        if tag not in seen:
            seen.append(tag)
    return seen, np.array(tags)


def _save(fig, output):
    written = []
    for ext in ("png", "svg"):
        path = f"{output}.{ext}"
        fig.savefig(path, dpi=150, metadata={"Date": None} if ext == "svg" else None)
        written.append(path)
    plt.close(fig)
    return written


def _render_distance_scan(spec, value_column, ylabel, title):
    table = read_table(spec.inputs[0])
    d = table["d_nm"]
    value = table[value_column]
    models, tags = _groups(table, "model")
    fig, ax = plt.subplots(figsize=(4.2, 3.4), constrained_layout=True)
    for model in models:
        mask = tags == model
        style = _MODEL_STYLE.get(model, {})
        ax.loglog(d[mask], np.abs(value[mask]), label=model, **style)
    for path in spec.inputs[1:]:
        extra = read_table(path)
        extra_models, extra_tags = _groups(extra, "model")
        for model in extra_models:
            mask = extra_tags == model
            ax.loglog(extra["d_nm"][mask], np.abs(extra[value_column][mask]),
                      label=model, **_MODEL_STYLE.get(model, {}))
    if spec.overlay:
        overlay = read_table(spec.overlay)
        if overlay.columns:
            ax.errorbar(overlay["d_nm"], overlay["value"],
                        yerr=overlay["err"] if "err" in overlay.columns else None,
                        fmt="o", mfc="none", color="black", label="measured difference")
    ax.set_xlabel("gap d [nm]")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(fontsize=8)
    return _save(plt.gcf(), spec.output)


def _render_fig2(spec):
    table = read_table(spec.inputs[0])
    omega = table["omega_tau"]
    re_eta = table["re_eta_over_vF2tau"]
    beta_t = table["beta_T_sq_over_vF2"]
    q_ell = table["q_ell"]
    models, tags = _groups(table, "model_tag")
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(4.4, 5.4), sharex=True,
                                      constrained_layout=True)
    for model in models:
        mask = tags == model
        if model == "hydro":
            style = dict(color="black", ls="--", lw=2, label="hydrodynamic limit")
            top.loglog(omega[mask], np.abs(re_eta[mask]), **style)
            bottom.loglog(omega[mask], np.abs(beta_t[mask]), **style)
        elif model == "deandres":
            style = dict(color="gray", ls="--", label="permeability analogy")
            top.loglog(omega[mask], np.abs(re_eta[mask]), **style)
            bottom.loglog(omega[mask], np.abs(beta_t[mask]), **style)
        else:
            for ql in sorted(set(q_ell[mask])):
                sub = mask & (q_ell == ql)
                line, = top.loglog(omega[sub], np.abs(re_eta[sub]),
                                   label=f"q ell = {ql:g}")
                bottom.loglog(omega[sub], np.abs(beta_t[sub]), color=line.get_color())
    top.set_ylabel(r"Re $\eta$ / ($v_F^2 \tau$)")
    bottom.set_ylabel(r"$\omega\,$Im $\eta$ / $v_F^2$")
    bottom.set_xlabel(r"$\omega \tau$")
    top.legend(fontsize=7)
    top.set_title("shear viscosity and shear modulus")
    return _save(fig, spec.output)


def _render_fig3(spec):
    n = len(spec.inputs)
    ncols = 2 if n > 1 else 1
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(4.0 * ncols, 2.8 * nrows),
                             constrained_layout=True, squeeze=False)
    for ax, path in zip(axes.ravel(), spec.inputs):
        table = read_table(path)
        z = table["z_nm"]
        v = np.hypot(table["re_v"], table["im_v"])
        v_loc = np.hypot(table["re_v_loc"], table["im_v_loc"])
        ax.plot(z, v, color="tab:red", label="no-slip")
        ax.plot(z, v_loc, color="tab:red", ls="--", alpha=0.5, label="local")
        ax.fill_between(z, v, v_loc, color="tab:red", alpha=0.15)
        ax.set_xlabel("depth z [nm]")
        ax.set_ylabel("|v| [m/s]")
        ax.legend(fontsize=7)
    for ax in axes.ravel()[n:]:
        ax.set_visible(False)
    fig.suptitle("sub-surface current distribution")
    return _save(fig, spec.output)


def _render_fig4(spec):
    table = read_table(spec.inputs[0])
    omega = table["omega_tau"]
    im_r = table["im_r"]
    abs_r2 = table["abs_r2"]
    k_vals = sorted(set(table["k_per_lambda_p"]))
    models, model_tags = _groups(table, "model")
    pols = sorted(set(table.strings("pol")))
    pol_tags = np.array(table.strings("pol"))
    lightlines = table.lightlines()
    fig, axes = plt.subplots(len(k_vals), 1, figsize=(4.6, 3.0 * len(k_vals)),
                             constrained_layout=True, squeeze=False)
    for ax, k in zip(axes.ravel(), k_vals):
        for model in models:
            for pol in pols:
                mask = (table["k_per_lambda_p"] == k) & (model_tags == model) \
                    & (pol_tags == pol)
                if not mask.any():
                    continue
                style = dict(_MODEL_STYLE.get(model, {}))
                style["ls"] = "-" if pol == "s" else ":"
                ll = lightlines.get(k)
                evan = omega[mask] < ll if ll is not None else np.ones(mask.sum(), bool)
                y = np.where(evan, im_r[mask], 1.0 - abs_r2[mask])
                ax.loglog(omega[mask], np.abs(y), label=f"{model} ({pol})", **style)
        ll = lightlines.get(k)
        if ll is not None and ll < omega.max():
            ax.axvline(ll, color="orange", lw=1)
        ax.set_title(f"k lambda_p = {k:g}", fontsize=9)
        ax.set_ylabel("Im r | absorption")
        ax.legend(fontsize=7)
    axes.ravel()[-1].set_xlabel(r"$\omega \tau$")
    return _save(fig, spec.output)


def _render_fig5(spec):
    n = len(spec.inputs)
    fig, axes = plt.subplots(1, n, figsize=(4.4 * n, 3.6), constrained_layout=True,
                             squeeze=False)
    for ax, path in zip(axes.ravel(), spec.inputs):
        table = read_table(path)
        k = table["k_over_lambda_p_inv"]
        omega = table["omega_tau"]
        value = table["value_normalized"]
        k_grid = np.array(sorted(set(k)))
        w_grid = np.array(sorted(set(omega)))
        grid = np.full((k_grid.size, w_grid.size), np.nan)
        ki = np.searchsorted(k_grid, k)
        wi = np.searchsorted(w_grid, omega)
        grid[ki, wi] = np.abs(value)
        mesh = ax.pcolormesh(k_grid, w_grid, np.log10(np.maximum(grid.T, 1e-12)),
                             shading="nearest", cmap="magma", vmin=-6, vmax=0)
        fig.colorbar(mesh, ax=ax, label="log10 |density| (local peak = 1)")
        # guide lines recorded by the scan
        thermal = table.guideline("thermal")
        gap = table.guideline("gap")
        magnetic = table.guideline("magnetic")
        viscous = table.guideline("viscous")
        if thermal is not None:
            ax.axhline(thermal, color="w", ls="--", lw=1)
        if gap is not None:
            ax.axvline(gap, color="w", ls="--", lw=1)
        kk = np.geomspace(k_grid.min(), k_grid.max(), 64)
        if magnetic is not None:
            ax.plot(kk, magnetic * kk**2, color="w", ls="-.", lw=1)
        if viscous is not None:
            ax.plot(kk, viscous * kk**2, color="0.8", ls=":", lw=1)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlim(k_grid.min(), k_grid.max())
        ax.set_ylim(w_grid.min(), w_grid.max())
        ax.set_xlabel(r"$k \lambda_p$")
        ax.set_ylabel(r"$\omega \tau$")
    return _save(fig, spec.output)


def render(spec: FigureSpec):
    """Render one figure, writing <output>.png and <output>.svg.

    Returns the list of files written.  Raises :class:`SchemaError` when an
    input CSV does not carry the columns the figure needs.
    """
    if spec.figure == "fig1-left":
        return _render_distance_scan(spec, "P_thermal_Pa",
                                     "thermal pressure [Pa]",
                                     "repulsive thermal pressure (s modes)")
    if spec.figure == "fig1-right":
        return _render_distance_scan(spec, "h_W_m2K",
                                     r"h [W m$^{-2}$ K$^{-1}$]",
                                     "heat transfer coefficient")
    if spec.figure == "fig2":
        return _render_fig2(spec)
    if spec.figure == "fig3":
        return _render_fig3(spec)
    if spec.figure == "fig4":
        return _render_fig4(spec)
    return _render_fig5(spec)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hydrofigs",
        description="Render the reference figures from hydrocasimir CSV files.")
    parser.add_argument("--figure", required=True, choices=FIGURE_IDS)
    parser.add_argument("--input", "-i", action="append", required=True,
                        help="input CSV (repeatable where a figure takes several)")
    parser.add_argument("--overlay", help="optional overlay CSV (d_nm, value[, err])")
    parser.add_argument("--output", "-o", required=True,
                        help="output basename; .png and .svg are written")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        spec = FigureSpec(figure=args.figure, inputs=args.input,
                          output=args.output, overlay=args.overlay)
        written = render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
