"""Acceptance suite: one test per acceptance criterion.

Each test prints a PASS/FAIL line (run pytest with -s to see them all) and
enforces the criterion at its pinned tolerance.  Four criteria encode
idealisations that the exact models do not satisfy; they are implemented
faithfully at their stated tolerances and fail honestly, with the measured
numbers printed.  The physics behind each of those gaps is covered by
passing tests elsewhere in the suite:

* local-limit collapse: the no-slip correction scales like the square root
  of the viscosity (boundary layer), not linearly, so scaling eta by 1e-8
  moves r_s by ~1e-4 * k*ell rather than 1e-6 (see
  test_reflection.TestHydro for the verified sqrt scaling);
* the 4.11 (k lambda_p)^2/tau line marks the Im r_s maximum only in the
  k lambda_p -> 0 diffusive limit (verified below at k lambda_p = 0.01);
* the fitted surface model tracks the no-slip amplitudes to 5% over most,
  not all, of the stated wavelength-frequency box (6.8% at its corner);
* the negative-length surface sheet turns active for k lambda_p >~ 0.9 and
  there violates evanescent passivity; the local and no-slip models pass
  the same sweep with zero violations.
"""

import time
from contextlib import contextmanager
from dataclasses import replace

import numpy as np
import pytest
from scipy.constants import c, e as q_e, k as k_B, m_e, sigma as sigma_SB
from scipy.optimize import minimize_scalar

from hydrocasimir.cli import main
from hydrocasimir.fluctuation import (PlateSystem, heat_flux, heat_coefficient,
                                      pressure_ideal_zeroT, pressure_matsubara,
                                      pressure_thermal, symmetric_plates)
from hydrocasimir.lindhard import extract_eta_finite_q, hydro_coeffs, _f_T_minus_one
from hydrocasimir.materials import MaterialParams, gold
from hydrocasimir.quadrature import IntegrationSettings
from hydrocasimir.reflection import (ModeCoordinates, current_profile,
                                     default_surface_response, _r_local_arr,
                                     _r_s_hydro_arr, _r_surf_arr)

AU = gold()
LP = AU.lambda_p_red
ELL = AU.ell
TAU = AU.tau


@contextmanager
def criterion(name):
    try:
        yield
    except AssertionError:
        print(f"FAIL: {name}")
        raise
    else:
        print(f"PASS: {name}")


def test_ideal_mirror_oracle():
    with criterion("ideal-mirror Matsubara pressure reproduces -pi^2 hbar c/(240 d^4) "
                   "at T = 1 K, d = 1 um within 0.5% in under 1 s"):
        sys_ = symmetric_plates(AU, 1e-6, "ideal")
        start = time.perf_counter()
        res = pressure_matsubara(sys_, 1.0, pol="both",
                                 settings=IntegrationSettings(rel_tol=1e-8))
        elapsed = time.perf_counter() - start
        target = pressure_ideal_zeroT(1e-6)
        assert target == pytest.approx(-1.30e-3, rel=1e-2)
        dev = abs(res.value / target - 1.0)
        print(f"  deviation {dev:.2e}, runtime {elapsed:.2f} s")
        assert dev <= 5e-3
        assert elapsed < 1.0


def test_bulk_viscosity_identity():
    with criterion("beta^2 - i omega zeta = v_F^2/3 to <= 1e-12 relative on 100 "
                   "log-spaced frequencies in [1e-2, 1e2]/tau"):
        target = AU.v_F**2 / 3.0
        worst = 0.0
        for w in np.geomspace(1e-2, 1e2, 100) / TAU:
            co = hydro_coeffs(w, AU)
            combo = co.beta2_minus_iw_zeta43eta + 4j / 3.0 * w * co.eta
            worst = max(worst, abs(combo - target) / target)
        print(f"  worst relative deviation {worst:.2e}")
        assert worst <= 1e-12


def test_hydrodynamic_limit_recovery():
    with criterion("finite-q shear viscosity matches the hydrodynamic value within "
                   "1% at q ell = 1e-2 for omega tau in {0.1, 1, 10}, order >= 2"):
        q = 1e-2 / ELL
        for x in (0.1, 1.0, 10.0):
            w = x / TAU
            eta_h = hydro_coeffs(w, AU).eta
            dev = abs(extract_eta_finite_q(q, w, AU) - eta_h) / abs(eta_h)
            assert dev <= 1e-2
        w = 1.0 / TAU
        eta_h = hydro_coeffs(w, AU).eta
        dev = [abs(extract_eta_finite_q(ql / ELL, w, AU) - eta_h)
               for ql in (0.02, 0.01, 0.005)]
        orders = np.log2(np.array(dev[:-1]) / np.array(dev[1:]))
        print(f"  observed convergence orders {orders.round(3)}")
        assert np.all(orders >= 1.9)


def test_expansion_coefficient_fit():
    with criterion("least-squares fit of sigma_0/sigma_T in q^2 at omega tau = 1 "
                   "recovers 1/5 and 8/175 within 1%"):
        w = 1.0 / TAU
        wt = w + 1j / TAU
        q = np.geomspace(3e-3, 0.1, 24) / ELL
        y = (1.0 - 1j * w * TAU) / (1.0 + _f_T_minus_one(q / (2 * AU.k_F),
                                                         wt / (q * AU.v_F)))
        coeffs = np.polynomial.polynomial.polyfit(q**2, y, deg=3)
        c1 = coeffs[1] / (1j * TAU * AU.v_F**2 / wt)
        c2 = coeffs[2] / (1j * TAU * AU.v_F**4 / wt**3)
        dev1 = abs(c1 - 0.2) / 0.2
        dev2 = abs(c2 - 8.0 / 175.0) / (8.0 / 175.0)
        print(f"  coefficient deviations {dev1:.2e}, {dev2:.2e}")
        assert dev1 <= 1e-2
        assert dev2 <= 1e-2


def test_local_limit_collapse():
    # Faithful to the stated tolerance.  The no-slip correction to r_s is
    # -2 kappa/kappa_1 with kappa_1 ~ sqrt(5/eta tau)(1 - i omega tau), so an
    # eta scaled by 1e-8 leaves a residual ~1e-4 k ell/|1 - i omega tau|,
    # far above 1e-6 wherever k ell >~ 0.01; the criterion cannot hold on a
    # grid covering the sweep range used elsewhere in this suite.
    with criterion("r_s of the no-slip model with eta scaled by 1e-8 matches the "
                   "Fresnel amplitude within 1e-6 relative on a 32x32 grid, "
                   "(k, omega) in [1e-3, 1e3]/lambda_p x [1e-3, 1e3]/tau"):
        small = replace(AU, v_F=AU.v_F * 1e-4)  # eta ~ v_F^2 -> factor 1e-8
        ks = np.logspace(-3, 3, 32) / LP
        ws = np.logspace(-3, 3, 32) / TAU
        K, W = np.meshgrid(ks, ws, indexing="ij")
        rh = _r_s_hydro_arr(K, W, small)
        rl = _r_local_arr("s", K, W, AU)
        rel = np.abs(rh - rl) / np.abs(rl)
        i, j = np.unravel_index(rel.argmax(), rel.shape)
        print(f"  max relative deviation {rel.max():.3e} at "
              f"k lambda_p = {ks[i] * LP:.3g}, omega tau = {ws[j] * TAU:.3g}")
        assert rel.max() <= 1e-6


def test_low_frequency_maximum_position():
    # Faithful to the stated tolerance.  The position 4.11 (k lambda_p)^2/tau
    # is the k -> 0 asymptote of the diffusive Im r_s maximum (verified below
    # at k lambda_p = 0.01); at the pinned wavenumbers the true maximum sits
    # elsewhere (omega tau ~ 0.23 instead of 0.37 at k lambda_p = 0.3, and
    # ~0.95 instead of 37 at k lambda_p = 3).
    def argmax_omega(k):
        upper = min(1e3, 0.99 * c * k * TAU)

        def neg_im(logx):
            w = np.exp(logx) / TAU
            return -float(_r_local_arr("s", k, w, AU).imag)

        res = minimize_scalar(neg_im, bounds=(np.log(1e-5), np.log(upper)),
                              method="bounded", options={"xatol": 1e-12})
        return np.exp(res.x) / TAU

    with criterion("low-frequency maximum of Im r_s(local) sits at "
                   "4.11 (k lambda_p)^2/tau within 10% for k in {0.3, 3}/lambda_p"):
        # the asymptotic statement itself is sound:
        k_small = 0.01 / LP
        assert argmax_omega(k_small) * TAU == pytest.approx(4.11e-4, rel=0.05)
        for k_lamp in (0.3, 3.0):
            w_star = argmax_omega(k_lamp / LP)
            predicted = 4.11 * k_lamp**2 / TAU
            print(f"  k lambda_p = {k_lamp}: argmax omega tau = {w_star * TAU:.4g}, "
                  f"4.11 (k lambda_p)^2 = {predicted * TAU:.4g}")
            assert w_star == pytest.approx(predicted, rel=0.10)


def test_surface_hydro_agreement():
    # Faithful to the stated tolerance; the fitted sheet parameters hold the
    # deviation below 5% over ~96% of the box but reach 6.8% at the
    # (k lambda_p, omega tau) = (0.1, 3) corner.
    with criterion("surface-conductivity r_s matches the no-slip r_s within 5% for "
                   "evanescent modes with k lambda_p <= 0.1, omega tau <= 3"):
        sr = default_surface_response(1.0 / TAU, AU)
        ks = np.geomspace(0.01, 0.1, 12) / LP
        ws = np.geomspace(0.1, 3.0, 12) / TAU
        K, W = np.meshgrid(ks, ws, indexing="ij")
        evan = K > W / c
        rh = _r_s_hydro_arr(K, W, AU)
        rs = _r_surf_arr("s", K, W, AU, sr.ell_0, sr.tau_s)
        rel = np.where(evan, np.abs(rs - rh) / np.abs(rh), 0.0)
        i, j = np.unravel_index(rel.argmax(), rel.shape)
        print(f"  max relative difference {rel.max():.3e} at "
              f"k lambda_p = {ks[i] * LP:.3g}, omega tau = {ws[j] * TAU:.3g}; "
              f"fraction of box above 5%: {(rel > 0.05).mean():.3f}")
        assert rel.max() <= 0.05


def test_thermal_pressure_sign_and_ordering():
    with criterion("s-polarised thermal pressure is repulsive for gold at 300 K, "
                   "d in [100 nm, 1 um], with hydro and surfcond strictly below local"):
        sr = default_surface_response(1.0 / TAU, AU)
        settings = IntegrationSettings(rel_tol=1e-5)
        for d in (100e-9, 200e-9, 400e-9, 700e-9, 1000e-9):
            p_loc = pressure_thermal(symmetric_plates(AU, d, "local"), 300.0,
                                     pol="s", settings=settings).value
            p_hyd = pressure_thermal(symmetric_plates(AU, d, "hydro"), 300.0,
                                     pol="s", settings=settings).value
            p_srf = pressure_thermal(symmetric_plates(AU, d, "surfcond", sr), 300.0,
                                     pol="s", settings=settings).value
            assert p_loc > 0
            assert 0 < p_hyd < p_loc
            assert 0 < p_srf < p_loc


def test_heat_transfer_properties():
    with criterion("h > 0, evanescent >= 10x propagating at 100 nm, propagating "
                   "flux below the blackbody bound, exact antisymmetry"):
        sys_ = symmetric_plates(AU, 100e-9, "local")
        h = heat_coefficient(sys_, 300.0, pol="s")
        assert h.value > 0
        assert h.evanescent_part >= 10.0 * h.propagating_part

        T1, T2 = 350.0, 300.0
        res = heat_flux(sys_, T1, T2, pol="both",
                        settings=IntegrationSettings(rel_tol=1e-3))
        assert 0 < res.propagating_part <= sigma_SB * (T1**4 - T2**4)

        other = MaterialParams(eps_b=1.0, omega_p=0.8 * AU.omega_p, tau=1.3 * TAU,
                               v_F=1.2e6, E_F=4.0 * q_e, name="other")
        fwd = PlateSystem(AU, other, 150e-9, "local", "local")
        rev = PlateSystem(other, AU, 150e-9, "local", "local")
        assert heat_flux(rev, T2, T1, pol="s").value == -heat_flux(fwd, T1, T2, pol="s").value


def test_passivity_and_energy_conservation():
    # Faithful sweep over all three response models.  The local and no-slip
    # models show zero violations; the surface-conductivity sheet with its
    # negative length turns active at short wavelengths.
    with criterion("Im r >= 0 (evanescent) and |r| <= 1 (propagating) on a 64x64 "
                   "grid for the local, no-slip and surface-conductivity models"):
        sr = default_surface_response(1.0 / TAU, AU)
        ks = np.logspace(-3, 3, 64) / LP
        ws = np.logspace(-3, 3, 64) / TAU
        K, W = np.meshgrid(ks, ws, indexing="ij")
        evan = K > W / c
        violations = {}
        amplitudes = {
            ("local", "s"): _r_local_arr("s", K, W, AU),
            ("local", "p"): _r_local_arr("p", K, W, AU),
            ("hydro", "s"): _r_s_hydro_arr(K, W, AU),
            ("surfcond", "s"): _r_surf_arr("s", K, W, AU, sr.ell_0, sr.tau_s),
            ("surfcond", "p"): _r_surf_arr("p", K, W, AU, sr.ell_0, sr.tau_s),
        }
        for key, r in amplitudes.items():
            bad = int((r.imag[evan] < 0).sum()) + int((np.abs(r[~evan]) > 1.0).sum())
            violations[key] = bad
        print(f"  violation counts: {violations}")
        assert sum(violations.values()) == 0


def test_profile_residual():
    with criterion("current profile solves the coupled field equations to 1e-8 "
                   "relative residual with v(0) = 0 and v1 = -v2 exactly"):
        m = ModeCoordinates(k=1.0 / ELL, omega=0.5 / TAU, pol="s")
        p = current_profile(m, AU)
        assert p.v[0] == 0.0
        assert p.v1 == -p.v2
        w = complex(m.omega)
        eta = AU.v_F**2 * TAU / (5.0 * (1.0 - 1j * w * TAU))
        big_w = (1.0 - 1j * w * TAU) / (eta * TAU)
        lam2 = LP * LP
        d = p.decay
        z = p.z_grid
        vpp = p.v1 * d.kappa_1**2 * np.exp(-d.kappa_1 * z) \
            + p.v2 * d.kappa_2**2 * np.exp(-d.kappa_2 * z)
        app = (p.v1 / ((q_e / m_e) * (d.kappa_b**2 - d.kappa_1**2) * lam2)
               * d.kappa_1**2 * np.exp(-d.kappa_1 * z)
               + p.v2 / ((q_e / m_e) * (d.kappa_b**2 - d.kappa_2**2) * lam2)
               * d.kappa_2**2 * np.exp(-d.kappa_2 * z))
        res_v = vpp - (big_w + m.k**2) * p.v + (1j * w / eta) * (q_e / m_e) * p.A
        scale_v = np.abs(vpp) + np.abs((big_w + m.k**2) * p.v) \
            + np.abs((1j * w / eta) * (q_e / m_e) * p.A)
        res_a = app + m_e / (q_e * lam2) * p.v - d.kappa_b**2 * p.A
        scale_a = np.abs(app) + np.abs(m_e / (q_e * lam2) * p.v) \
            + np.abs(d.kappa_b**2 * p.A)
        worst = max((np.abs(res_v) / scale_v).max(), (np.abs(res_a) / scale_a).max())
        print(f"  worst relative residual {worst:.2e}")
        assert worst <= 1e-8


def test_pressure_scan_determinism(tmp_path):
    with criterion("pressure-scan CSV is bit-identical across 1, 4 and 8 threads"):
        args = ["pressure-scan", "--d-min-nm", "250", "--d-max-nm", "500",
                "--n-d", "2", "--models", "local", "--rel-tol", "1e-5"]
        blobs = []
        for threads in ("1", "4", "8"):
            out = tmp_path / f"scan{threads}.csv"
            assert main(args + ["--threads", threads, "-o", str(out)]) == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1] == blobs[2]
