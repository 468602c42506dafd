"""Wavevector-resolved dielectric functions of the degenerate electron gas.

Longitudinal (L) and transverse (T) response in the self-consistent-field
approximation, their relaxation-time ("collisional") extensions that
preserve the static screening limit, the small-q hydrodynamic expansion
coefficients, and the visco-elastic moduli read off from them.

Conventions
-----------
Dimensionless variables z = q / (2 k_F) and u = omega / (q v_F) are used
throughout; u may be complex with Im(u) >= 0.  The logarithms are taken on
the principal branch approached from the upper half plane, which places the
particle-hole absorption (Im > 0) in the strips |u - z| < 1 and u + z < 1.

Two evaluation paths are used.  Near the branch points the log formulas are
evaluated directly.  When both |u - z| and |u + z| exceed a threshold, the
logs suffer catastrophic cancellation (the result is smaller than the
individual terms by ~ u^3/z), so the functions switch to an inverse-power
series in 1/(u^2 - z^2) whose coefficients are polynomials in z; the series
is exact in z and converges geometrically.  The two paths agree to ~1e-10
on the crossover ring.

Note: some published forms of the large-u transverse expansion carry an
extra z^2/u^2 cross term; for the f_T defined here that term cancels
identically, and the expansion below reflects this.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.constants import c, hbar

from .materials import MaterialParams

__all__ = [
    "LindhardVars",
    "ViscoelasticCoeffs",
    "lindhard_f",
    "eps0",
    "eps_collisional",
    "hydro_coeffs",
    "extract_eta_finite_q",
    "deandres_eta",
    "permeability",
    "mu_from_dielectric",
    "eps_hd",
]

# crossover to the inverse-power series: min(|u-z|, |u+z|) above this
_SERIES_THRESHOLD = 10.0
_N_SERIES = 9  # truncation error < threshold**(-2 N) ~ 1e-18
# below the series threshold, a Taylor expansion in z (exact in u) takes
# over when z is small against the distance to the poles at u = +-1
_SMALL_Z_FACTOR = 1e-3
# imaginary offset (relative to max(1, |u|)) applied to exactly real u
_U_OFFSET = 1e-12


@dataclass(frozen=True)
class LindhardVars:
    """Dimensionless arguments z = q/(2 k_F), u = omega/(q v_F)."""

    z: float
    u: complex

    def __post_init__(self):
        if not self.z > 0:
            raise ValueError("z must be positive")
        if np.imag(self.u) < 0:
            raise ValueError("u must lie in the closed upper half plane")


@dataclass(frozen=True)
class ViscoelasticCoeffs:
    """Visco-elastic moduli of the electron fluid at one frequency.

    beta2_minus_iw_zeta43eta : complex longitudinal modulus
        beta^2 - i*omega*(zeta + 4/3 eta)  (m^2/s^2)
    eta : complex kinematic shear viscosity (m^2/s)
    zeta : complex kinematic bulk viscosity (m^2/s); vanishes identically
    beta_T_sq : real shear-wave velocity squared omega*Im(eta) (m^2/s^2)
    """

    beta2_minus_iw_zeta43eta: complex
    eta: complex
    zeta: complex
    beta_T_sq: float


def _log_diff(a):
    """log((a+1)/(a-1)) on the principal branch, off the cut [-1, 1]."""
    return np.log(a + 1.0) - np.log(a - 1.0)


def _offset_u(u):
    """Push exactly real u into the upper half plane."""
    u = np.asarray(u, dtype=complex)
    real_mask = u.imag == 0
    if np.any(real_mask):
        bump = _U_OFFSET * np.maximum(1.0, np.abs(u.real))
        u = u + 1j * np.where(real_mask, bump, 0.0)
    return u


def _f_direct(pol, z, u):
    ap = z + u
    am = z - u
    lp = _log_diff(ap)
    lm = _log_diff(am)
    if pol == "L":
        return 0.5 + (1.0 - ap**2) / (8.0 * z) * lp + (1.0 - am**2) / (8.0 * z) * lm
    return (0.375 * (z * z + 3.0 * u * u + 1.0)
            - 3.0 * (1.0 - ap**2) ** 2 / (32.0 * z) * lp
            - 3.0 * (1.0 - am**2) ** 2 / (32.0 * z) * lm)


def _series_pieces(z, u):
    """Return [D_p/z for p = 1, 3, ...] with
    D_p/z = -2 * sum_{j odd <= p} C(p, j) u^(p-j) z^(j-1) / (u^2 - z^2)^p.

    Each piece is the combination ((u+z)^-p - (u-z)^-p)/z written without
    the subtraction, so small z costs no precision.
    """
    w = u * u - z * z
    pieces = []
    wp = w
    for n in range(_N_SERIES):
        p = 2 * n + 1
        num = 0.0
        for j in range(1, p + 1, 2):
            num = num + comb(p, j) * u ** (p - j) * z ** (j - 1)
        pieces.append(-2.0 * num / wp)
        wp = wp * w * w
    return pieces

def _series_f_L(z, u):
    total = 0.0
    for n, dz in enumerate(_series_pieces(z, u)):
        total = total + dz / (2.0 * (2 * n + 1) * (2 * n + 3))
    return total


def _series_f_T_tail(z, u):
    """f_T - 1 via the inverse-power series (no final subtraction)."""
    total = 0.0
    for n, dz in enumerate(_series_pieces(z, u)):
        total = total - 3.0 * dz / (2.0 * (2 * n + 1) * (2 * n + 3) * (2 * n + 5))
    return total


def _small_z_f(pol, z, u):
    """Taylor expansion in z at fixed u (derivatives of (1-a^2)^m log terms),
    used where the direct form would cancel to ~u^3/z * eps."""
    lu = _log_diff(u)
    u2m1 = u * u - 1.0
    if pol == "L":
        return (1.0 - 0.5 * u * lu
                - z**2 / (3.0 * u2m1**2)
                - z**4 * (5.0 * u * u + 1.0) / (15.0 * u2m1**4))
    s2p = (1.0 - u * u) * (2.0 - 4.0 * u * lu)
    s2ppp = 24.0 * u * lu + (20.0 - 36.0 * u * u) / u2m1
    s2p5 = (-48.0 / u2m1 + 48.0 * (u * u + 1.0) / u2m1**2
            - 32.0 * (3.0 * u * u + 1.0) / u2m1**3)
    return (0.375 * (z * z + 3.0 * u * u + 1.0)
            - 0.1875 * s2p - z * z / 32.0 * s2ppp - z**4 / 640.0 * s2p5)


def _check_zu(z, u):
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise ValueError("z must be positive")
    if np.any(np.imag(u) < 0):
        raise ValueError("u must lie in the closed upper half plane")
    return z


def _dispatch_f(pol, z, u, tail=False):
    """Evaluate f (or f_T - 1 for tail=True) choosing the stable path."""
    z = np.asarray(z, dtype=float)
    u = _offset_u(u)
    z, u = np.broadcast_arrays(z, u)
    amin = np.minimum(np.abs(u - z), np.abs(u + z))
    use_series = amin >= _SERIES_THRESHOLD
    use_taylor = ~use_series & (z <= _SMALL_Z_FACTOR * np.abs(u * u - 1.0))
    use_direct = ~use_series & ~use_taylor
    out = np.empty(np.broadcast(z, u).shape, dtype=complex)
    if np.any(use_series):
        zs, us = z[use_series], u[use_series]
        if tail:
            out[use_series] = _series_f_T_tail(zs, us)
        else:
            out[use_series] = _series_f_L(zs, us) if pol == "L" else 1.0 + _series_f_T_tail(zs, us)
    if np.any(use_taylor):
        zt, ut = z[use_taylor], u[use_taylor]
        val = _small_z_f("T" if tail else pol, zt, ut)
        out[use_taylor] = val - 1.0 if tail else val
    if np.any(use_direct):
        zd, ud = z[use_direct], u[use_direct]
        if tail:
            out[use_direct] = _f_direct("T", zd, ud) - 1.0
        else:
            out[use_direct] = _f_direct(pol, zd, ud)
    return out


def lindhard_f(pol, z, u):
    """Dimensionless response function f_L or f_T at (z, u).

    Parameters
    ----------
    pol : {"L", "T"}
    z : float or ndarray, positive
    u : complex or ndarray with Im(u) >= 0; exactly real input is displaced
        by a positive infinitesimal imaginary part.

    Limits: f_L -> 1 for z, u -> 0 (static screening), f_L -> -1/(3 u^2) and
    f_T -> 1 for z -> 0, |u| -> infinity.
    """
    if pol not in ("L", "T"):
        raise ValueError("pol must be 'L' or 'T'")
    _check_zu(z, u)
    out = _dispatch_f(pol, z, u)
    if np.ndim(z) == 0 and np.ndim(u) == 0:
        return complex(out)
    return out


def _f_T_minus_one(z, u):
    """f_T(z, u) - 1 without the cancellation of the final subtraction."""
    _check_zu(z, u)
    return _dispatch_f("T", z, u, tail=True)


def _static_log(z):
    """log|(1+z)/(1-z)| for z > 0, z != 1, via arctanh (no cancellation)."""
    return 2.0 * np.arctanh(np.where(z < 1.0, z, 1.0 / z))


def _static_f_L(z):
    """u -> 0 limit of f_L: 1/2 + (1-z^2)/(4z) * log|(1+z)/(1-z)|."""
    z = np.asarray(z, dtype=float)
    out = np.full(z.shape, 0.5)
    m = z != 1.0
    out[m] += (1.0 - z[m] ** 2) / (4.0 * z[m]) * _static_log(z[m])
    return out if out.ndim else float(out)


def _static_f_T(z):
    """u -> 0 limit of f_T; ~ z^2 - z^4/5 for small z."""
    z = np.asarray(z, dtype=float)
    out = 0.375 * (1.0 + z * z)
    m = z != 1.0
    out = np.asarray(out)
    out[m] -= 3.0 * (1.0 - z[m] ** 2) ** 2 / (16.0 * z[m]) * _static_log(z[m])
    return out if out.ndim else float(out)


def eps0(pol, q, omega_c, mat: MaterialParams, imag_offset=None):
    """Collisionless dielectric function at wavenumber q and complex
    frequency omega_c (Im >= 0).

    eps0_L = 1 + 3 omega_p^2/(q v_F)^2 * f_L,
    eps0_T = 1 - (omega_p/omega)^2 * f_T.

    A real frequency is displaced into the upper half plane by
    ``imag_offset`` (rad/s, default 1e-9/tau) before the branch-sensitive
    logs are evaluated.  omega_c = 0 returns the exact static longitudinal
    limit; the transverse function has a 1/omega^2 pole there.
    """
    if pol not in ("L", "T"):
        raise ValueError("pol must be 'L' or 'T'")
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0):
        raise ValueError("q must be positive")
    scalar = np.ndim(q) == 0 and np.ndim(omega_c) == 0
    z = q / (2.0 * mat.k_F)
    if np.ndim(omega_c) == 0 and omega_c == 0:
        if pol == "T":
            raise ValueError("eps0_T has a 1/omega^2 pole at omega = 0")
        out = 1.0 + 3.0 * mat.omega_p**2 / (q * mat.v_F) ** 2 * _static_f_L(z)
        return complex(out) if scalar else out + 0j
    w = np.asarray(omega_c, dtype=complex)
    if np.any(w.imag < 0):
        raise ValueError("omega_c must lie in the closed upper half plane")
    offset = (1e-9 / mat.tau) if imag_offset is None else imag_offset
    w = np.where(w.imag == 0, w + 1j * offset, w)
    u = w / (q * mat.v_F)
    if pol == "L":
        out = 1.0 + 3.0 * mat.omega_p**2 / (q * mat.v_F) ** 2 * _dispatch_f("L", z, u)
    else:
        out = 1.0 - (mat.omega_p / w) ** 2 * (1.0 + _f_T_minus_one(z, u))
    return complex(out) if scalar else out


def eps_collisional(pol, q, omega, mat: MaterialParams):
    """Relaxation-time extension of :func:`eps0` at real frequency.

    The longitudinal form relaxes towards the locally shifted equilibrium,
    which preserves the static screening limit:

        omega_t / (eps_L - 1) = omega/(eps0_L(q, omega_t) - 1)
                                + (i/tau)/(eps0_L(q, 0) - 1),

    with omega_t = omega + i/tau.  The transverse form is simply
    eps_T - 1 = (omega_t/omega) * (eps0_T(q, omega_t) - 1).
    """
    if pol not in ("L", "T"):
        raise ValueError("pol must be 'L' or 'T'")
    q = np.asarray(q, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if np.any(q <= 0):
        raise ValueError("q must be positive")
    if np.any(omega <= 0):
        raise ValueError("omega must be positive")
    scalar = q.ndim == 0 and omega.ndim == 0
    wt = omega + 1j / mat.tau
    if pol == "L":
        chi_t = eps0("L", q, wt, mat) - 1.0
        chi_0 = 3.0 * mat.omega_p**2 / (q * mat.v_F) ** 2 * _static_f_L(q / (2.0 * mat.k_F))
        out = 1.0 + wt / (omega / chi_t + (1j / mat.tau) / chi_0)
    else:
        out = 1.0 + (wt / omega) * (eps0("T", q, wt, mat) - 1.0)
    return complex(out) if scalar else out


def hydro_coeffs(omega, mat: MaterialParams) -> ViscoelasticCoeffs:
    """Visco-elastic coefficients matched to the small-q expansion.

    beta^2 - i omega (zeta + 4/3 eta) = v_F^2 (1/3 - 3 i omega tau/5)/(1 - i omega tau),
    eta = v_F^2 tau / (5 (1 - i omega tau)).

    The bulk viscosity, recovered by subtraction against the exact identity
    beta^2 - i omega zeta = v_F^2/3, vanishes (Stokes hypothesis).
    """
    if omega < 0:
        raise ValueError("omega must be >= 0")
    vF2 = mat.v_F**2
    wt_fac = 1.0 - 1j * omega * mat.tau
    modulus = vF2 * (1.0 / 3.0 - 0.6j * omega * mat.tau) / wt_fac
    eta = vF2 * mat.tau / (5.0 * wt_fac)
    if omega == 0:
        zeta = 0j
    else:
        zeta = 1j * (modulus + 4j / 3.0 * omega * eta - vF2 / 3.0) / omega
    return ViscoelasticCoeffs(
        beta2_minus_iw_zeta43eta=complex(modulus),
        eta=complex(eta),
        zeta=complex(zeta),
        beta_T_sq=float(omega * eta.imag),
    )


def extract_eta_finite_q(q, omega, mat: MaterialParams):
    """Effective shear viscosity at finite wavenumber.

    Computes [sigma_0/sigma_T(q, omega) - (1 - i omega tau)] / (q^2 tau)
    with sigma_T from the collisional transverse response; the local-limit
    subtraction is carried out analytically through f_T - 1, so small q
    costs no precision.  Converges to :func:`hydro_coeffs` eta as q -> 0
    at order q^2.
    """
    q = np.asarray(q, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if np.any(q <= 0):
        raise ValueError("q must be positive")
    if np.any(omega <= 0):
        raise ValueError("omega must be positive")
    scalar = q.ndim == 0 and omega.ndim == 0
    wt = omega + 1j / mat.tau
    u = wt / (q * mat.v_F)
    z = q / (2.0 * mat.k_F)
    tail = _f_T_minus_one(z, u)
    # sigma_0/sigma_T = (1 - i omega tau)/f_T
    out = (1.0 - 1j * omega * mat.tau) * (-tail) / ((1.0 + tail) * q * q * mat.tau)
    return complex(out) if scalar else out


def deandres_eta(omega, mat: MaterialParams):
    """Shear viscosity from the permeability-analogy construction.

    eta(omega) = (i v_F^2/omega)(1/3 - 3 i omega tau/5)/(1 - i omega tau)
                 + omega_t^3 tau / (4 omega k_F^2).

    The 1/omega pole gives a finite zero-frequency shear-wave speed
    (omega*Im(eta) -> v_F^2/3), which is the physically questionable
    feature of this variant; the last term is negligible whenever
    hbar*omega << E_F.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("omega must be positive (1/omega pole at zero)")
    scalar = omega.ndim == 0
    wt = omega + 1j / mat.tau
    vF2 = mat.v_F**2
    out = (1j * vF2 / omega) * (1.0 / 3.0 - 0.6j * omega * mat.tau) / (1.0 - 1j * omega * mat.tau) \
        + wt**3 * mat.tau / (4.0 * omega * mat.k_F**2)
    return complex(out) if scalar else out


def mu_from_dielectric(q, omega_c, eps_L, eps_T):
    """Relative permeability implied by the L/T splitting:

        1 - 1/mu = (omega/(c q))^2 * (eps_T - eps_L).

    Equal dielectric functions give mu = 1 identically.
    """
    x = (np.asarray(omega_c, dtype=complex) / (c * np.asarray(q, dtype=float))) ** 2 \
        * (np.asarray(eps_T) - np.asarray(eps_L))
    return 1.0 / (1.0 - x)


def _mu0_minus_one(q, omega_c, mat):
    """mu0(q, omega_c) - 1 from the bare (collisionless) response."""
    x = (np.asarray(omega_c, dtype=complex) / (c * q)) ** 2 \
        * (eps0("T", q, omega_c, mat) - eps0("L", q, omega_c, mat))
    return x / (1.0 - x)


def _mu0_minus_one_static(q, mat):
    """Static limit: 1 - 1/mu0 -> -omega_p^2 f_T(z, 0) / (c q)^2."""
    z = np.asarray(q, dtype=float) / (2.0 * mat.k_F)
    x = -(mat.omega_p / (c * np.asarray(q, dtype=float))) ** 2 * _static_f_T(z)
    return x / (1.0 - x)


def permeability(q, omega, mat: MaterialParams):
    """Collisional relative permeability mu(q, omega).

    The bare permeability implied by eps0_T - eps0_L is corrected for
    collisions with the same relaxation-time construction as the
    longitudinal dielectric function, which pins it to its static value

        mu - 1 ~ -omega_p^2/(2 k_F c)^2

    for omega up to ~1/tau (the static susceptibility term dominates).
    """
    q = np.asarray(q, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if np.any(q <= 0):
        raise ValueError("q must be positive")
    if np.any(omega <= 0):
        raise ValueError("omega must be positive")
    scalar = q.ndim == 0 and omega.ndim == 0
    wt = omega + 1j / mat.tau
    chi_t = _mu0_minus_one(q, wt, mat)
    chi_0 = _mu0_minus_one_static(q, mat)
    out = 1.0 + wt / (omega / chi_t + (1j / mat.tau) / chi_0)
    return complex(out) if scalar else out


def eps_hd(pol, q, omega, mat: MaterialParams):
    """Hydrodynamic dielectric functions with the coefficients of
    :func:`hydro_coeffs` (background permittivity 1):

    eps_L = 1 - omega_p^2 / (omega*(omega + i/tau) - [beta^2 - i omega (zeta + 4/3 eta)] q^2),
    eps_T = 1 - omega_p^2 / (omega*(omega + i/tau) + i omega eta q^2).

    q = 0 reduces to the local Drude form; the transverse denominator root
    is the diffusive shear mode.
    """
    if pol not in ("L", "T"):
        raise ValueError("pol must be 'L' or 'T'")
    q = np.asarray(q, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if np.any(q < 0):
        raise ValueError("q must be >= 0")
    if np.any(omega <= 0):
        raise ValueError("omega must be positive")
    scalar = q.ndim == 0 and omega.ndim == 0
    vF2 = mat.v_F**2
    wt_fac = 1.0 - 1j * omega * mat.tau
    modulus = vF2 * (1.0 / 3.0 - 0.6j * omega * mat.tau) / wt_fac
    eta = vF2 * mat.tau / (5.0 * wt_fac)
    wwt = omega * (omega + 1j / mat.tau)
    if pol == "L":
        out = 1.0 - mat.omega_p**2 / (wwt - modulus * q * q)
    else:
        out = 1.0 - mat.omega_p**2 / (wwt + 1j * omega * eta * q * q)
    return complex(out) if scalar else out
