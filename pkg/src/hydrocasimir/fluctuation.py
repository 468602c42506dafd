"""Thermal Casimir pressure and near-field radiative heat transfer.

The temperature-dependent part of the pressure between two thick plates is
evaluated on the real frequency axis, where the mode sum splits into an
evanescent leg (imaginary normal wavenumber, kernel ~ Im of the multiple
reflection loop) and a propagating leg.  Replacing the mean photon energy
coth weight by twice the Bose occupation isolates the thermal part exactly
(coth = 1 + 2 n_bar).

The full pressure (zero-point part included) is computed independently as
a Matsubara sum over imaginary frequencies, where every factor is real and
the integrals are rapidly converging; with ideal mirrors this reproduces
the classic -pi^2 hbar c/(240 d^4) result and serves as the quantitative
oracle for conventions and prefactors.

Heat transfer uses the standard two-plate transmission kernels: evanescent
4 Im(r1) Im(r2) e^(-2 kappa d)/|1 - r1 r2 e^(-2 kappa d)|^2 and propagating
(1-|r1|^2)(1-|r2|^2)/|1 - r1 r2 e^(2 i k_z d)|^2, weighted by the Bose
occupation difference (flux) or its temperature derivative (coefficient).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c, hbar, k as k_B, pi

from .materials import MaterialParams
from .quadrature import ConvergenceError, IntegrationSettings, integrate_adaptive
from .reflection import SurfaceResponse, UnsupportedModelError, MODELS, reflect_grid

__all__ = [
    "PlateSystem",
    "SpectralResult",
    "ThermalWeights",
    "symmetric_plates",
    "bose_factors",
    "pressure_thermal",
    "pressure_matsubara",
    "pressure_zero_temperature",
    "pressure_ideal_zeroT",
    "heat_flux",
    "heat_coefficient",
    "spectral_map",
]

# integration defaults (overridable through IntegrationSettings)
_OMEGA_MAX_FACTOR = 50.0   # omega_max = 50 k_B T / hbar: Bose weight < 2e-22
_OMEGA_MIN_FACTOR = 1e-8   # lower cutoff of the log-frequency integral
_KAPPA_MAX_FACTOR = 60.0   # kappa_max = 60/d: e^(-2 kappa d) < 1e-52
_MATSUBARA_DECAY = 45.0    # keep terms until 2 xi_n d / c > 45


@dataclass(frozen=True)
class PlateSystem:
    """Two thick plates separated by a vacuum gap of width d.

    Each plate carries its own material, reflection model tag and, for the
    surface-conductivity model, a :class:`SurfaceResponse` holding the sheet
    parameters."""

    mat1: MaterialParams
    mat2: MaterialParams
    d: float
    model1: str = "local"
    model2: str = "local"
    sr1: SurfaceResponse | None = None
    sr2: SurfaceResponse | None = None

    def __post_init__(self):
        if not self.d > 0:
            raise ValueError("gap width d must be positive")
        for model, sr, tag in ((self.model1, self.sr1, "1"), (self.model2, self.sr2, "2")):
            if model not in MODELS:
                raise UnsupportedModelError(f"unknown model {model!r} for plate {tag}")
            if model == "surfcond" and sr is None:
                raise UnsupportedModelError(f"plate {tag} uses 'surfcond' but has no SurfaceResponse")


def symmetric_plates(mat: MaterialParams, d: float, model="local",
                     sr: SurfaceResponse | None = None) -> PlateSystem:
    """Two identical plates."""
    return PlateSystem(mat1=mat, mat2=mat, d=d, model1=model, model2=model,
                       sr1=sr, sr2=sr)


@dataclass(frozen=True)
class ThermalWeights:
    """Bose-Einstein occupation and its temperature derivative."""

    n_bar: float
    dn_dT: float


@dataclass(frozen=True)
class SpectralResult:
    """Integrated spectral quantity split into its mode classes."""

    value: float
    evanescent_part: float
    propagating_part: float
    abs_error_estimate: float
    n_evals: int


def bose_factors(omega, T):
    """Mean occupation n_bar = 1/(exp(hbar omega/k_B T) - 1) and its
    analytic T derivative, both safe against overflow for large arguments.

    Scalars in give a :class:`ThermalWeights`; arrays give an array pair.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("omega must be positive")
    if not T > 0:
        raise ValueError("T must be positive")
    x = hbar * w / (k_B * T)
    # n = e^-x/(1 - e^-x); the e^-x forms stay finite for any x > 0
    em = np.exp(-x)
    denom = -np.expm1(-x)
    n = em / denom
    dn = (x / T) * em / denom**2
    if np.ndim(omega) == 0:
        return ThermalWeights(float(n), float(dn))
    return n, dn


def _bose_diff(omega, T1, T2):
    """n_bar(omega, T1) - n_bar(omega, T2), elementwise."""
    x1 = hbar * omega / (k_B * T1)
    x2 = hbar * omega / (k_B * T2)
    return np.exp(-x1) / (-np.expm1(-x1)) - np.exp(-x2) / (-np.expm1(-x2))


def _pols(pol):
    if pol == "both":
        return ("s", "p")
    if pol in ("s", "p"):
        return (pol,)
    raise ValueError("pol must be 's', 'p' or 'both'")


def _pair(sys, pol, k, omega):
    r1 = reflect_grid(sys.model1, pol, k, omega, sys.mat1, sys.sr1)
    r2 = reflect_grid(sys.model2, pol, k, omega, sys.mat2, sys.sr2)
    return r1, r2


def _loop_terms(rr, log_phase):
    """(x, 1 - x) for x = rr * exp(log_phase), stably.

    Near |x| = 1 (grazing incidence between good mirrors) the subtraction
    1 - x loses the real part entirely, so 1 - x is evaluated as
    -expm1(log x) without ever forming x; passivity keeps |x| < 1, hence
    1 - x never vanishes."""
    rr = np.asarray(rr, dtype=complex)
    log_phase = np.asarray(log_phase, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        lx = np.log(rr) + log_phase
    a = lx.real
    b = lx.imag
    ea = np.exp(a)
    cb = np.cos(b)
    sb = np.sin(b)
    x = ea * (cb + 1j * sb)
    one_minus = -(np.expm1(a) * cb - 2.0 * np.sin(0.5 * b) ** 2 + 1j * ea * sb)
    # rr == 0: log gave -inf, exp(-inf) = 0 and expm1(-inf) = -1, so x = 0
    # and one_minus = 1 exactly; nothing to patch.
    if np.any(one_minus == 0):
        raise ArithmeticError("multiple-reflection loop factor vanished")
    return x, one_minus


def _loop(sys, pol, k, omega, log_phase):
    """x/(1 - x) with x = r1 r2 exp(log_phase)."""
    r1, r2 = _pair(sys, pol, k, omega)
    x, one_minus = _loop_terms(r1 * r2, log_phase)
    return x / one_minus


class _InnerBudget:
    """Accumulates evaluation counts and the aggregate relative error of the
    inner (wavenumber) integrals across the outer frequency nodes; nodes
    with negligible kernels contribute to neither sum."""

    def __init__(self):
        self.n_evals = 0
        self.err_sum = 0.0
        self.mag_sum = 0.0

    def add(self, res, scale):
        self.n_evals += res.n_evals
        self.err_sum += res.abs_error_estimate
        self.mag_sum += scale

    @property
    def rel_err(self):
        return self.err_sum / self.mag_sum if self.mag_sum > 0 else 0.0


def _kernel_pressure_evan(sys, pol_list, omega, d, inner, budget):
    """-(hbar/pi) Int dkappa kappa^2 Sum_pol Im[loop] at one frequency."""
    kap_max = _KAPPA_MAX_FACTOR / d

    def f(kap):
        k = np.sqrt(kap**2 + (omega / c) ** 2)
        tot = 0.0
        for pol in pol_list:
            tot = tot + np.imag(_loop(sys, pol, k, omega, -2.0 * kap * d))
        return kap**2 * tot

    res = _integrate_kernel(f, 0.0, kap_max, inner)
    budget.add(res, abs(res.value))
    return -(hbar / pi) * res.value


def _kernel_pressure_prop(sys, pol_list, omega, d, inner, budget):
    """+(hbar/pi) Int dk_z k_z^2 Sum_pol Re[loop] at one frequency."""
    kz_max = omega / c

    def f(kz):
        k = np.sqrt(np.maximum((omega / c) ** 2 - kz**2, 0.0))
        tot = 0.0
        for pol in pol_list:
            tot = tot + np.real(_loop(sys, pol, k, omega, 2j * kz * d))
        return kz**2 * tot

    res = _integrate_kernel(f, 0.0, kz_max, inner)
    budget.add(res, abs(res.value))
    return (hbar / pi) * res.value


def _kernel_heat_evan(sys, pol_list, omega, d, inner, budget):
    """Int dkappa kappa Sum_pol 4 Im r1 Im r2 e^(-2 kappa d)/|1-r1 r2 e|^2 / (2 pi)."""
    kap_max = _KAPPA_MAX_FACTOR / d

    def f(kap):
        k = np.sqrt(kap**2 + (omega / c) ** 2)
        phase = np.exp(-2.0 * kap * d)
        tot = 0.0
        for pol in pol_list:
            r1, r2 = _pair(sys, pol, k, omega)
            _, one_minus = _loop_terms(r1 * r2, -2.0 * kap * d)
            tot = tot + 4.0 * r1.imag * r2.imag * phase / np.abs(one_minus) ** 2
        return kap * tot

    res = _integrate_kernel(f, 0.0, kap_max, inner)
    budget.add(res, abs(res.value))
    return res.value / (2.0 * pi)


def _kernel_heat_prop(sys, pol_list, omega, d, inner, budget):
    """Int dk_z k_z Sum_pol (1-|r1|^2)(1-|r2|^2)/|1-r1 r2 e^(2 i k_z d)|^2 / (2 pi)."""
    kz_max = omega / c

    def f(kz):
        k = np.sqrt(np.maximum((omega / c) ** 2 - kz**2, 0.0))
        tot = 0.0
        for pol in pol_list:
            r1, r2 = _pair(sys, pol, k, omega)
            _, one_minus = _loop_terms(r1 * r2, 2j * kz * d)
            tot = tot + (1.0 - np.abs(r1) ** 2) * (1.0 - np.abs(r2) ** 2) / np.abs(one_minus) ** 2
        return kz * tot

    res = _integrate_kernel(f, 0.0, kz_max, inner)
    budget.add(res, abs(res.value))
    return res.value / (2.0 * pi)


def _outer_frequency_integral(weight, kernel, T_scale, settings, budget):
    """Integrate weight(omega)*kernel(omega) d omega/(2 pi) over the thermal
    band on a logarithmic frequency grid."""
    w_min = _OMEGA_MIN_FACTOR * k_B * T_scale / hbar
    w_max = _OMEGA_MAX_FACTOR * k_B * T_scale / hbar

    def f(omegas):
        return np.array([weight(w) * kernel(w) for w in np.atleast_1d(omegas)])

    outer = IntegrationSettings(rel_tol=settings.rel_tol, abs_tol=settings.abs_tol,
                                max_evals=settings.max_evals, transform="log",
                                workers=settings.workers)
    res = integrate_adaptive(f, w_min, w_max, outer)
    return res.value / (2.0 * pi), res


def _default_settings(settings):
    return settings or IntegrationSettings(rel_tol=1e-6)


# wavenumber integrals get two extra digits but a bounded budget; a kernel
# that cannot reach that (round-off-limited integrands) degrades gracefully
# and surfaces through the abs_error_estimate instead of raising
_INNER_MAX_EVALS = 200_000


def _inner_settings(settings):
    return IntegrationSettings(rel_tol=max(settings.rel_tol * 1e-2, 1e-12),
                               max_evals=min(settings.max_evals, _INNER_MAX_EVALS))


def _integrate_kernel(f, a, b, inner):
    try:
        return integrate_adaptive(f, a, b, inner)
    except ConvergenceError as exc:
        return exc.as_result()


def pressure_thermal(sys: PlateSystem, T: float, pol="s",
                     settings: IntegrationSettings | None = None) -> SpectralResult:
    """Temperature-dependent part of the pressure at temperature T (Pa).

    Positive values push the plates apart.  The default evaluates
    s-polarised modes only; pass pol='both' for the full thermal part.
    The zero-temperature subtraction is exact: the photon weight used here
    is 2 n_bar(omega, T) instead of coth(hbar omega/(2 k_B T)).
    """
    if not T > 0:
        raise ValueError("T must be positive")
    settings = _default_settings(settings)
    inner = _inner_settings(settings)
    pol_list = _pols(pol)
    budget = _InnerBudget()

    def weight(w):
        x = hbar * w / (k_B * T)
        return 2.0 * math.exp(-x) / (-math.expm1(-x))

    evan, res_e = _outer_frequency_integral(
        weight, lambda w: _kernel_pressure_evan(sys, pol_list, w, sys.d, inner, budget),
        T, settings, budget)
    prop, res_p = _outer_frequency_integral(
        weight, lambda w: _kernel_pressure_prop(sys, pol_list, w, sys.d, inner, budget),
        T, settings, budget)
    value = evan + prop
    err = (res_e.abs_error_estimate + res_p.abs_error_estimate) / (2.0 * pi) \
        + budget.rel_err * abs(value)
    return SpectralResult(value=value, evanescent_part=evan, propagating_part=prop,
                          abs_error_estimate=err,
                          n_evals=budget.n_evals + res_e.n_evals + res_p.n_evals)


def _zero_frequency_product(model1, model2, pol):
    """r1*r2 in the static (n = 0) Matsubara term.

    Drude-class conductors lose the s reflection at zero frequency
    (kappa_m -> k) while r_p -> 1; ideal mirrors keep |r| = 1 for both.
    """
    r = {"s": -1.0, "p": 1.0}
    r1 = r[pol] if model1 == "ideal" else (0.0 if pol == "s" else 1.0)
    r2 = r[pol] if model2 == "ideal" else (0.0 if pol == "s" else 1.0)
    return r1 * r2


def pressure_matsubara(sys: PlateSystem, T: float, pol="both",
                       settings: IntegrationSettings | None = None) -> SpectralResult:
    """Total pressure (zero-point part included) as a Matsubara sum (Pa).

    P = -(k_B T/pi) Sum_n' Int k dk kappa_n Sum_pol r1 r2 e^(-2 kappa_n d)
        / (1 - r1 r2 e^(-2 kappa_n d)),

    with kappa_n = sqrt(k^2 + (xi_n/c)^2), xi_n = 2 pi n k_B T/hbar and the
    n = 0 term halved.  All reflection amplitudes are real on the imaginary
    frequency axis.  Negative values mean attraction.  The whole sum lives
    on the evanescent side of the rotated contour, so the result is
    reported as evanescent with a zero propagating part.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    settings = _default_settings(settings)
    d = sys.d
    pol_list = _pols(pol)
    xi_1 = 2.0 * pi * k_B * T / hbar
    n_max = max(1, math.ceil(_MATSUBARA_DECAY * c / (2.0 * d * xi_1)))
    xi = xi_1 * np.arange(1, n_max + 1)

    def f(karr):
        karr = np.atleast_1d(karr)
        kap = np.sqrt(karr[None, :] ** 2 + (xi[:, None] / c) ** 2)
        total = np.zeros(karr.shape)
        for pol_ in pol_list:
            r1 = reflect_grid(sys.model1, pol_, karr[None, :], 1j * xi[:, None], sys.mat1, sys.sr1)
            r2 = reflect_grid(sys.model2, pol_, karr[None, :], 1j * xi[:, None], sys.mat2, sys.sr2)
            x, one_minus = _loop_terms(np.real(r1 * r2), -2.0 * kap * d)
            total = total + np.sum(kap * np.real(x / one_minus), axis=0)
            rr0 = _zero_frequency_product(sys.model1, sys.model2, pol_)
            if rr0 != 0.0:
                x0, om0 = _loop_terms(rr0, -2.0 * karr * d)
                total = total + 0.5 * karr * np.real(x0 / om0)
        return karr * total

    quad = IntegrationSettings(rel_tol=settings.rel_tol, abs_tol=settings.abs_tol,
                               max_evals=settings.max_evals, transform="exp-tail",
                               scale=1.0 / d, workers=settings.workers)
    res = integrate_adaptive(f, 0.0, math.inf, quad)
    value = -(k_B * T / pi) * res.value
    err = (k_B * T / pi) * res.abs_error_estimate
    return SpectralResult(value=value, evanescent_part=value, propagating_part=0.0,
                          abs_error_estimate=err, n_evals=res.n_evals * (n_max + 1))


def pressure_zero_temperature(sys: PlateSystem, pol="both",
                              settings: IntegrationSettings | None = None) -> SpectralResult:
    """T -> 0 limit of the Matsubara sum: the zero-point pressure

    P(d, 0) = -(hbar/(2 pi^2)) Int_0^inf dxi Int k dk kappa_xi
              Sum_pol r1 r2 e^(-2 kappa d)/(1 - r1 r2 e^(-2 kappa d)).
    """
    settings = _default_settings(settings)
    inner = _inner_settings(settings)
    d = sys.d
    pol_list = _pols(pol)
    budget = _InnerBudget()

    def kernel(xi):
        def f(karr):
            kap = np.sqrt(karr**2 + (xi / c) ** 2)
            total = np.zeros(karr.shape)
            for pol_ in pol_list:
                r1 = reflect_grid(sys.model1, pol_, karr, 1j * xi, sys.mat1, sys.sr1)
                r2 = reflect_grid(sys.model2, pol_, karr, 1j * xi, sys.mat2, sys.sr2)
                x, one_minus = _loop_terms(np.real(r1 * r2), -2.0 * kap * d)
                total = total + kap * np.real(x / one_minus)
            return karr * total

        res = _integrate_kernel(f, 0.0, math.inf,
                                IntegrationSettings(rel_tol=inner.rel_tol,
                                                    max_evals=inner.max_evals,
                                                    transform="exp-tail", scale=1.0 / d))
        budget.add(res, abs(res.value))
        return res.value

    def f_outer(xis):
        return np.array([kernel(x) for x in np.atleast_1d(xis)])

    quad = IntegrationSettings(rel_tol=settings.rel_tol, max_evals=settings.max_evals,
                               transform="exp-tail", scale=c / (2.0 * d),
                               workers=settings.workers)
    res = integrate_adaptive(f_outer, 0.0, math.inf, quad)
    value = -(hbar / (2.0 * pi**2)) * res.value
    err = (hbar / (2.0 * pi**2)) * res.abs_error_estimate + budget.rel_err * abs(value)
    return SpectralResult(value=value, evanescent_part=value, propagating_part=0.0,
                          abs_error_estimate=err, n_evals=budget.n_evals + res.n_evals)


def pressure_ideal_zeroT(d: float) -> float:
    """Zero-temperature pressure between ideal mirrors: -pi^2 hbar c/(240 d^4)."""
    if not d > 0:
        raise ValueError("d must be positive")
    return -pi**2 * hbar * c / (240.0 * d**4)


def heat_flux(sys: PlateSystem, T1: float, T2: float, pol="s",
              settings: IntegrationSettings | None = None) -> SpectralResult:
    """Radiative heat flux from plate 1 (T1) to plate 2 (T2) in W/m^2.

    Positive for T1 > T2; swapping plates and temperatures flips the sign
    exactly.  Evanescent and propagating contributions are reported
    separately."""
    if not (T1 > 0 and T2 > 0):
        raise ValueError("temperatures must be positive")
    settings = _default_settings(settings)
    inner = _inner_settings(settings)
    pol_list = _pols(pol)
    budget = _InnerBudget()
    T_scale = max(T1, T2)

    def weight(w):
        return hbar * w * _bose_diff(w, T1, T2)

    evan, res_e = _outer_frequency_integral(
        weight, lambda w: _kernel_heat_evan(sys, pol_list, w, sys.d, inner, budget),
        T_scale, settings, budget)
    prop, res_p = _outer_frequency_integral(
        weight, lambda w: _kernel_heat_prop(sys, pol_list, w, sys.d, inner, budget),
        T_scale, settings, budget)
    value = evan + prop
    err = (res_e.abs_error_estimate + res_p.abs_error_estimate) / (2.0 * pi) \
        + budget.rel_err * abs(value)
    return SpectralResult(value=value, evanescent_part=evan, propagating_part=prop,
                          abs_error_estimate=err,
                          n_evals=budget.n_evals + res_e.n_evals + res_p.n_evals)


def heat_coefficient(sys: PlateSystem, T: float, pol="s",
                     settings: IntegrationSettings | None = None) -> SpectralResult:
    """Heat transfer coefficient h(d, T) = lim_{dT -> 0} S/dT in W m^-2 K^-1,
    evaluated with the analytic temperature derivative of the occupation."""
    if not T > 0:
        raise ValueError("T must be positive")
    settings = _default_settings(settings)
    inner = _inner_settings(settings)
    pol_list = _pols(pol)
    budget = _InnerBudget()

    def weight(w):
        x = hbar * w / (k_B * T)
        em = math.exp(-x)
        denom = -math.expm1(-x)
        return hbar * w * (x / T) * em / denom**2

    evan, res_e = _outer_frequency_integral(
        weight, lambda w: _kernel_heat_evan(sys, pol_list, w, sys.d, inner, budget),
        T, settings, budget)
    prop, res_p = _outer_frequency_integral(
        weight, lambda w: _kernel_heat_prop(sys, pol_list, w, sys.d, inner, budget),
        T, settings, budget)
    value = evan + prop
    err = (res_e.abs_error_estimate + res_p.abs_error_estimate) / (2.0 * pi) \
        + budget.rel_err * abs(value)
    return SpectralResult(value=value, evanescent_part=evan, propagating_part=prop,
                          abs_error_estimate=err,
                          n_evals=budget.n_evals + res_e.n_evals + res_p.n_evals)


def _map_cell(sys, pol_list, quantity, T, k, omega):
    """Signed contribution density per d(ln k) d(ln omega) at one node."""
    d = sys.d
    if quantity == "pressure":
        x = hbar * omega / (k_B * T)
        weight = 2.0 * math.exp(-x) / (-math.expm1(-x)) * hbar / (2.0 * pi**2)
    else:
        x = hbar * omega / (k_B * T)
        em = math.exp(-x)
        weight = hbar * omega * (x / T) * em / math.expm1(-x) ** 2 / (4.0 * pi**2)
    if k > omega / c:  # evanescent
        kappa = math.sqrt(k**2 - (omega / c) ** 2)
        phase = math.exp(-2.0 * kappa * d)
        tot = 0.0
        for pol in pol_list:
            r1, r2 = _pair(sys, pol, k, omega)
            x_loop, one_minus = _loop_terms(r1 * r2, -2.0 * kappa * d)
            if quantity == "pressure":
                tot += -np.imag(x_loop / one_minus) * kappa
            else:
                tot += 4.0 * r1.imag * r2.imag * phase / abs(one_minus) ** 2
        return weight * k * k * omega * tot
    kz = math.sqrt((omega / c) ** 2 - k**2)
    tot = 0.0
    for pol in pol_list:
        r1, r2 = _pair(sys, pol, k, omega)
        x_loop, one_minus = _loop_terms(r1 * r2, 2j * kz * d)
        if quantity == "pressure":
            tot += np.real(x_loop / one_minus) * kz
        else:
            tot += (1.0 - abs(r1) ** 2) * (1.0 - abs(r2) ** 2) / abs(one_minus) ** 2 * kz
    return weight * k * k * omega * tot


def spectral_map(sys: PlateSystem, T: float, quantity: str, k_grid, omega_grid, pol="s"):
    """Contribution density of the pressure or heat coefficient on a
    log-log (k, omega) grid, normalized to the peak of the local-model map.

    Returns (values, guides): ``values[i, j]`` is the signed density per
    d(ln k) d(ln omega) at (k_grid[i], omega_grid[j]) divided by
    max|local map|; ``guides`` holds the characteristic lines of the map
    (thermal frequency, inverse gap, magnetic and viscous diffusion).
    """
    if quantity not in ("pressure", "heat"):
        raise ValueError("quantity must be 'pressure' or 'heat'")
    if not T > 0:
        raise ValueError("T must be positive")
    pol_list = _pols(pol)
    k_grid = np.asarray(k_grid, dtype=float)
    omega_grid = np.asarray(omega_grid, dtype=float)

    def build(system):
        vals = np.empty((k_grid.size, omega_grid.size))
        for i, k in enumerate(k_grid):
            for j, w in enumerate(omega_grid):
                vals[i, j] = _map_cell(system, pol_list, quantity, T, k, w)
        return vals

    values = build(sys)
    if sys.model1 == "local" and sys.model2 == "local":
        local_vals = values
    else:
        local_vals = build(PlateSystem(sys.mat1, sys.mat2, sys.d, "local", "local"))
    norm = np.abs(local_vals).max()
    if norm == 0:
        raise ArithmeticError("local reference map vanished on this grid")
    mat = sys.mat1
    guides = {
        "thermal_frequency": k_B * T / hbar,
        "inverse_gap": 1.0 / sys.d,
        "magnetic_diffusion_coefficient": 4.11 * mat.lambda_p_red**2 / mat.tau,
        "viscous_diffusion_coefficient": 0.2 * mat.v_F**2 * mat.tau,
    }
    return values / norm, guides
