"""Command-line interface: scans and validation runs that write CSV files.

Every CSV starts with provenance comment lines (version, hash of the run
configuration, material, tolerances) followed by a header row.  Date and
thread count are deliberately excluded so that identical configurations
produce bit-identical files.

Exit codes: 0 success, 1 configuration error, 2 numerical failure (the
partial file is written and flagged in its header).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import os
import sys

import numpy as np
from scipy.constants import c, e, hbar, k as k_B, pi

from . import __version__
from .lindhard import _f_T_minus_one, deandres_eta, extract_eta_finite_q, hydro_coeffs
from .materials import MaterialParams, derived_scales, gold, load_material_file
from .quadrature import ConvergenceError, IntegrationSettings
from .reflection import (UnsupportedModelError, current_profile, ModeCoordinates,
                         reflect_grid, surface_response)
from .fluctuation import (heat_coefficient, pressure_matsubara, pressure_ideal_zeroT,
                          pressure_thermal, spectral_map, symmetric_plates)

_THREADS_ENV = "HYDROCASIMIR_THREADS"


def _fmt(x) -> str:
    return repr(float(x))


def _config_hash(args: argparse.Namespace) -> str:
    skip = {"output", "threads", "func"}
    items = sorted((k, v) for k, v in vars(args).items() if k not in skip)
    blob = ";".join(f"{k}={v}" for k, v in items).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _material(args) -> MaterialParams:
    if args.material == "gold":
        return gold()
    return load_material_file(args.material)


def _settings(args) -> IntegrationSettings:
    return IntegrationSettings(rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                               workers=args.threads)


def _provenance(args, mat: MaterialParams, extra=()):
    lines = [
        f"# hydrocasimir {__version__}",
        f"# config-hash: {_config_hash(args)}",
        f"# material: {mat.name or 'custom'} eps_b={_fmt(mat.eps_b)}"
        f" hbar_omega_p_eV={_fmt(mat.omega_p * hbar / e)}"
        f" hbar_over_tau_meV={_fmt(hbar / mat.tau / e * 1e3)}"
        f" v_F_m_per_s={_fmt(mat.v_F)}"
        + (f" E_F_eV={_fmt(mat.E_F / e)}" if mat.E_F is not None else ""),
        f"# rel-tol={_fmt(args.rel_tol)} abs-tol={_fmt(args.abs_tol)}",
    ]
    lines.extend(extra)
    return lines


def _write_csv(path, comment_lines, header, rows):
    with open(path, "w", newline="") as fh:
        for line in comment_lines:
            fh.write(line + "\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _parse_list(text, cast=float):
    try:
        return [cast(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad list {text!r}: {exc}") from None


def cmd_material_info(args) -> int:
    mat = _material(args)
    sc = derived_scales(mat, args.temperature)
    rows = [
        ("material", mat.name or "custom"),
        ("eps_b", f"{mat.eps_b:g}"),
        ("hbar*Omega_p [eV]", f"{mat.omega_p * hbar / e:.4g}"),
        ("hbar/tau [meV]", f"{hbar / mat.tau / e * 1e3:.4g}"),
        ("v_F [m/s]", f"{mat.v_F:.4g}"),
        ("E_F [eV]", f"{mat.E_F / e:.4g}" if mat.E_F is not None else "-"),
        ("sigma_0 [S/m]", f"{sc.sigma_0:.4g}"),
        ("mean free path ell [nm]", f"{sc.ell * 1e9:.3g}"),
        ("reduced plasma wavelength [nm]", f"{sc.lambda_p_red * 1e9:.3g}"),
        ("magnetic diffusion D_m [m^2/s]", f"{sc.D_m:.4g}"),
        ("thermal magnetic length l_m [nm]", f"{sc.l_m * 1e9:.3g}"),
        ("reduced thermal wavelength [um]", f"{sc.lambda_T_red * 1e6:.3g}"),
    ]
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        print(f"{name:<{width}}  {value}")
    return 0


def cmd_viscosity_scan(args) -> int:
    mat = _material(args)
    omegas = np.geomspace(args.omega_min, args.omega_max, args.n_omega)
    rows = []
    vF2tau = mat.v_F**2 * mat.tau
    vF2 = mat.v_F**2
    for x in omegas:
        w = x / mat.tau
        co = hydro_coeffs(w, mat)
        rows.append((_fmt(x), _fmt(0.0), _fmt(co.eta.real / vF2tau),
                     _fmt(co.beta_T_sq / vF2), "hydro"))
    for q_ell in args.q_ell:
        q = q_ell / mat.ell
        for x in omegas:
            w = x / mat.tau
            eta = extract_eta_finite_q(q, w, mat)
            rows.append((_fmt(x), _fmt(q_ell), _fmt(eta.real / vF2tau),
                         _fmt(w * eta.imag / vF2), "finite_q"))
    for x in omegas:
        w = x / mat.tau
        eta = deandres_eta(w, mat)
        rows.append((_fmt(x), _fmt(0.0), _fmt(eta.real / vF2tau),
                     _fmt(w * eta.imag / vF2), "deandres"))
    _write_csv(args.output, _provenance(args, mat),
               ("omega_tau", "q_ell", "re_eta_over_vF2tau", "beta_T_sq_over_vF2", "model_tag"),
               rows)
    return 0


def _surface(args, mat):
    return surface_response(1.0 / mat.tau, mat, args.ell0_ell * mat.ell,
                            args.tau_s_tau * mat.tau)


def cmd_reflection_scan(args) -> int:
    mat = _material(args)
    sr = _surface(args, mat)
    omegas = np.geomspace(args.omega_min, args.omega_max, args.n_omega) / mat.tau
    rows = []
    for model in args.models:
        for pol in args.pol:
            if model == "hydro" and pol == "p":
                print("error: the hydrodynamic model supports s polarization only",
                      file=sys.stderr)
                return 1
            for k_lamp in args.k_lamp:
                k = k_lamp / mat.lambda_p_red
                r = reflect_grid(model, pol, k, omegas, mat, sr)
                for w, rv in zip(omegas, np.atleast_1d(r)):
                    rows.append((_fmt(k_lamp), _fmt(k), _fmt(w * mat.tau),
                                 _fmt(w * hbar / e), model, pol,
                                 _fmt(rv.real), _fmt(rv.imag), _fmt(abs(rv) ** 2)))
    extra = [f"# lightline k_lambda_p={_fmt(k_lamp)} omega_tau="
             + _fmt(c * (k_lamp / mat.lambda_p_red) * mat.tau)
             for k_lamp in args.k_lamp]
    _write_csv(args.output, _provenance(args, mat, extra),
               ("k_per_lambda_p", "k_per_m", "omega_tau", "omega_eV",
                "model", "pol", "re_r", "im_r", "abs_r2"),
               rows)
    return 0


def cmd_profile(args) -> int:
    mat = _material(args)
    mode = ModeCoordinates(k=args.k_lamp / mat.lambda_p_red,
                           omega=args.omega_tau / mat.tau, pol="s")
    prof = current_profile(mode, mat, z_max=args.z_max_ell * mat.ell,
                           n_points=args.n_points)
    rows = []
    for z, v, v_loc, A in zip(prof.z_grid, prof.v, prof.v_loc, prof.A):
        rows.append((_fmt(z * 1e9), _fmt(v.real), _fmt(v.imag),
                     _fmt(v_loc.real), _fmt(v_loc.imag),
                     _fmt(A.real), _fmt(A.imag)))
    extra = [f"# r_s_hydro: {prof.r_s!r}", f"# r_s_local: {prof.r_s_local!r}",
             f"# j_excess_A_per_m: {prof.j_excess!r}"]
    _write_csv(args.output, _provenance(args, mat, extra),
               ("z_nm", "re_v", "im_v", "re_v_loc", "im_v_loc", "re_A", "im_A"),
               rows)
    return 0


def _scan_models(args, mat):
    sr = _surface(args, mat)
    systems = []
    for model in args.models:
        if model == "hydro" and args.pol != "s":
            raise UnsupportedModelError(
                "the hydrodynamic model supports s polarization only")
        systems.append((model, sr if model == "surfcond" else None))
    return systems


def cmd_pressure_scan(args) -> int:
    mat = _material(args)
    systems = _scan_models(args, mat)
    settings = _settings(args)
    ds = np.geomspace(args.d_min_nm, args.d_max_nm, args.n_d) * 1e-9
    rows = []
    failed = False
    for model, sr in systems:
        for d in ds:
            sys_ = symmetric_plates(mat, float(d), model, sr)
            try:
                res = pressure_thermal(sys_, args.temperature, pol=args.pol,
                                       settings=settings)
            except ConvergenceError as exc:
                failed = True
                res = exc.as_result()
                res = type(res)(res.value, float("nan"), float("nan"),
                                res.abs_error_estimate, res.n_evals)
                rows.append((_fmt(d * 1e9), model, _fmt(res.value), _fmt(res[1]),
                             _fmt(res[2]), _fmt(res.abs_error_estimate)))
                continue
            rows.append((_fmt(d * 1e9), model, _fmt(res.value),
                         _fmt(res.evanescent_part), _fmt(res.propagating_part),
                         _fmt(res.abs_error_estimate)))
    extra = [f"# temperature_K={_fmt(args.temperature)} pol={args.pol}"]
    if failed:
        extra.append("# WARNING: quadrature failure; file contains partial data")
    _write_csv(args.output, _provenance(args, mat, extra),
               ("d_nm", "model", "P_thermal_Pa", "P_evan", "P_prop", "err"),
               rows)
    return 2 if failed else 0


def cmd_heat_scan(args) -> int:
    mat = _material(args)
    systems = _scan_models(args, mat)
    settings = _settings(args)
    ds = np.geomspace(args.d_min_nm, args.d_max_nm, args.n_d) * 1e-9
    rows = []
    failed = False
    for model, sr in systems:
        for d in ds:
            sys_ = symmetric_plates(mat, float(d), model, sr)
            try:
                res = heat_coefficient(sys_, args.temperature, pol=args.pol,
                                       settings=settings)
                rows.append((_fmt(d * 1e9), model, _fmt(res.value),
                             _fmt(res.abs_error_estimate)))
            except ConvergenceError as exc:
                failed = True
                rows.append((_fmt(d * 1e9), model, _fmt(exc.value),
                             _fmt(exc.abs_error_estimate)))
    extra = [f"# temperature_K={_fmt(args.temperature)} pol={args.pol}"]
    if failed:
        extra.append("# WARNING: quadrature failure; file contains partial data")
    _write_csv(args.output, _provenance(args, mat, extra),
               ("d_nm", "model", "h_W_m2K", "err"), rows)
    return 2 if failed else 0


def cmd_map(args) -> int:
    mat = _material(args)
    sr = _surface(args, mat)
    if args.model == "hydro" and args.pol != "s":
        print("error: the hydrodynamic model supports s polarization only", file=sys.stderr)
        return 1
    sys_ = symmetric_plates(mat, args.d_nm * 1e-9, args.model,
                            sr if args.model == "surfcond" else None)
    k_grid = np.geomspace(args.k_min, args.k_max, args.n_k) / mat.lambda_p_red
    w_grid = np.geomspace(args.omega_min, args.omega_max, args.n_omega) / mat.tau
    values, guides = spectral_map(sys_, args.temperature, args.quantity,
                                  k_grid, w_grid, pol=args.pol)
    rows = []
    for i, k in enumerate(k_grid):
        for j, w in enumerate(w_grid):
            rows.append((_fmt(k * mat.lambda_p_red), _fmt(w * mat.tau),
                         _fmt(values[i, j])))
    extra = [f"# temperature_K={_fmt(args.temperature)} d_nm={_fmt(args.d_nm)}"
             f" quantity={args.quantity} model={args.model} pol={args.pol}"]
    for name, value in guides.items():
        extra.append(f"# guide {name} = {_fmt(value)}")
    # the same guide lines in the axis units of this file (k lambda_p, omega tau)
    extra.append(f"# guideline thermal omega_tau = {_fmt(guides['thermal_frequency'] * mat.tau)}")
    extra.append(f"# guideline gap k_lambda_p = {_fmt(mat.lambda_p_red / (args.d_nm * 1e-9))}")
    extra.append("# guideline magnetic omega_tau_per_klp2 = "
                 + _fmt(guides["magnetic_diffusion_coefficient"] * mat.tau / mat.lambda_p_red**2))
    extra.append("# guideline viscous omega_tau_per_klp2 = "
                 + _fmt(guides["viscous_diffusion_coefficient"] * mat.tau / mat.lambda_p_red**2))
    _write_csv(args.output, _provenance(args, mat, extra),
               ("k_over_lambda_p_inv", "omega_tau", "value_normalized"), rows)
    return 0


def cmd_validate(args) -> int:
    mat = _material(args)
    checks = []

    sys_ideal = symmetric_plates(mat, 1e-6, "ideal")
    res = pressure_matsubara(sys_ideal, 1.0, pol="both",
                             settings=IntegrationSettings(rel_tol=1e-8,
                                                          workers=args.threads))
    target = pressure_ideal_zeroT(1e-6)
    dev = abs(res.value / target - 1.0)
    checks.append(("ideal-mirror Matsubara pressure vs closed form", dev, 5e-3))

    omegas = np.geomspace(1e-2, 1e2, 100) / mat.tau
    worst = 0.0
    for w in omegas:
        co = hydro_coeffs(w, mat)
        combo = co.beta2_minus_iw_zeta43eta + 4j / 3.0 * w * co.eta
        worst = max(worst, abs(combo - mat.v_F**2 / 3.0) / (mat.v_F**2 / 3.0))
    checks.append(("bulk-viscosity identity beta^2 - i w zeta = v_F^2/3", worst, 1e-12))

    # fit sigma_0/sigma_T in powers of q^2 and compare with 1/5 and 8/175
    w = 1.0 / mat.tau
    wt = w + 1j / mat.tau
    q = np.geomspace(3e-3, 0.1, 24) / mat.ell
    y = (1.0 - 1j * w * mat.tau) / (1.0 + _f_T_minus_one(q / (2.0 * mat.k_F),
                                                         wt / (q * mat.v_F)))
    coeffs = np.polynomial.polynomial.polyfit(q**2, y, deg=3)
    c1 = coeffs[1] / (1j * mat.tau * mat.v_F**2 / wt)
    c2 = coeffs[2] / (1j * mat.tau * mat.v_F**4 / wt**3)
    dev1 = abs(c1 - 0.2) / 0.2
    dev2 = abs(c2 - 8.0 / 175.0) / (8.0 / 175.0)
    checks.append(("transverse expansion coefficient 1/5", dev1, 1e-2))
    checks.append(("transverse expansion coefficient 8/175", dev2, 1e-2))

    q = 1e-2 / mat.ell
    for x in (0.1, 1.0, 10.0):
        w = x / mat.tau
        eta = extract_eta_finite_q(q, w, mat)
        dev = abs(eta - hydro_coeffs(w, mat).eta) / abs(hydro_coeffs(w, mat).eta)
        checks.append((f"hydrodynamic limit of the finite-q viscosity (w*tau={x})", dev, 1e-2))

    ok = True
    for name, dev, tol in checks:
        status = "PASS" if dev <= tol else "FAIL"
        ok = ok and dev <= tol
        print(f"{status}: {name} (deviation {dev:.3e}, tolerance {tol:.0e})")
    return 0 if ok else 1


def _add_common(p):
    p.add_argument("--material", default="gold",
                   help="'gold' or path to a key=value material file")
    p.add_argument("--rel-tol", type=float, default=1e-6)
    p.add_argument("--abs-tol", type=float, default=0.0)
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get(_THREADS_ENV, "1")))


def _add_surface(p):
    p.add_argument("--ell0-ell", type=float, default=-0.36,
                   help="surface length ell_0 in units of the mean free path")
    p.add_argument("--tau-s-tau", type=float, default=2.0,
                   help="surface relaxation time in units of tau")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hydrocasimir",
        description="Reflection models for viscous conduction electrons and the "
                    "thermal Casimir pressure / near-field heat transfer between plates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("material-info", help="print the derived material scales")
    _add_common(p)
    p.add_argument("--temperature", type=float, default=300.0)
    p.set_defaults(func=cmd_material_info)

    p = sub.add_parser("viscosity-scan", help="shear viscosity and shear modulus vs frequency")
    _add_common(p)
    p.add_argument("--omega-min", type=float, default=1e-2, help="in units of 1/tau")
    p.add_argument("--omega-max", type=float, default=1e2)
    p.add_argument("--n-omega", type=int, default=60)
    p.add_argument("--q-ell", type=_parse_list, default=[0.1, 0.3, 1.0, 3.0],
                   help="comma list of q*ell values")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_viscosity_scan)

    p = sub.add_parser("reflection-scan", help="reflection amplitudes vs frequency")
    _add_common(p)
    _add_surface(p)
    p.add_argument("--k-lamp", type=_parse_list, default=[0.3, 3.0],
                   help="comma list of k*lambda_p values")
    p.add_argument("--omega-min", type=float, default=1e-3)
    p.add_argument("--omega-max", type=float, default=1e3)
    p.add_argument("--n-omega", type=int, default=400)
    p.add_argument("--models", type=lambda s: _parse_list(s, str),
                   default=["local", "hydro", "surfcond"])
    p.add_argument("--pol", type=lambda s: _parse_list(s, str), default=["s"])
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_reflection_scan)

    p = sub.add_parser("profile", help="sub-surface current profile for one mode")
    _add_common(p)
    p.add_argument("--k-lamp", type=float, default=0.64)
    p.add_argument("--omega-tau", type=float, default=1.0)
    p.add_argument("--z-max-ell", type=float, default=10.0)
    p.add_argument("--n-points", type=int, default=200)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("pressure-scan", help="thermal pressure contribution vs distance")
    _add_common(p)
    _add_surface(p)
    p.add_argument("--d-min-nm", type=float, default=160.0)
    p.add_argument("--d-max-nm", type=float, default=750.0)
    p.add_argument("--n-d", type=int, default=10)
    p.add_argument("--temperature", type=float, default=300.0)
    p.add_argument("--models", type=lambda s: _parse_list(s, str),
                   default=["local", "hydro", "surfcond"])
    p.add_argument("--pol", choices=["s", "p", "both"], default="s")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_pressure_scan)

    p = sub.add_parser("heat-scan", help="heat transfer coefficient vs distance")
    _add_common(p)
    _add_surface(p)
    p.add_argument("--d-min-nm", type=float, default=50.0)
    p.add_argument("--d-max-nm", type=float, default=300.0)
    p.add_argument("--n-d", type=int, default=8)
    p.add_argument("--temperature", type=float, default=300.0)
    p.add_argument("--models", type=lambda s: _parse_list(s, str),
                   default=["local", "surfcond"])
    p.add_argument("--pol", choices=["s", "p", "both"], default="s")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_heat_scan)

    p = sub.add_parser("map", help="spectral contribution map in the k-omega plane")
    _add_common(p)
    _add_surface(p)
    p.add_argument("--quantity", choices=["pressure", "heat"], default="pressure")
    p.add_argument("--model", default="hydro")
    p.add_argument("--temperature", type=float, default=300.0)
    p.add_argument("--d-nm", type=float, default=200.0)
    p.add_argument("--k-min", type=float, default=1e-2, help="k*lambda_p")
    p.add_argument("--k-max", type=float, default=1e2)
    p.add_argument("--n-k", type=int, default=64)
    p.add_argument("--omega-min", type=float, default=1e-3, help="omega*tau")
    p.add_argument("--omega-max", type=float, default=1e1)
    p.add_argument("--n-omega", type=int, default=64)
    p.add_argument("--pol", choices=["s", "p", "both"], default="s")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("validate", help="run the oracle checks")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ValueError, UnsupportedModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
