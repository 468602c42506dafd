"""Reflection of plane waves by a conducting half space.

Three response models are implemented side by side:

* ``local``    -- Fresnel amplitudes with the local Drude permittivity,
* ``hydro``    -- viscous electron fluid with a no-slip surface condition;
  the s-polarised field couples to two decay modes (a boundary layer on the
  scale of the mean free path and the usual screened mode) whose surface
  impedance replaces the local decay constant,
* ``surfcond`` -- local bulk plus an excess surface current sheet described
  by a surface conductivity sigma_s and surface resistivity R_s,
* ``ideal``    -- perfect mirrors (r_s = -1, r_p = +1), used as an oracle.

All amplitudes accept frequencies on the positive imaginary axis
(omega = i xi), where they become real; this is what the Matsubara-sum
pressure evaluation uses.

Sign and branch conventions: time dependence exp(-i omega t); vacuum normal
wavenumber k_z carries Im(k_z) >= 0 (decay away from the source); material
decay constants carry Re >= 0 (decay into the bulk).

Note on the boundary-layer mode: with the dispersive shear viscosity the
exact two-mode decay constants give kappa_1 ~ sqrt(5)(1 - i omega tau)/ell
when the mean free path is unresolved, whereas a static viscosity would
give kappa_1 ~ sqrt(1 - i omega tau)/ell; this module always evaluates the
exact roots and leaves such estimates to the caller.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.constants import c, e, m_e, mu_0, epsilon_0

from .materials import MaterialParams

__all__ = [
    "ModeCoordinates",
    "DecayModes",
    "SurfaceResponse",
    "CurrentProfile",
    "UnsupportedModelError",
    "MODELS",
    "decay_modes",
    "r_local",
    "r_s_hydro",
    "current_profile",
    "excess_current",
    "surface_response",
    "default_surface_response",
    "r_surf",
    "reflect",
    "reflect_grid",
]

MODELS = ("local", "hydro", "surfcond", "ideal")


class UnsupportedModelError(ValueError):
    """Raised for invalid (model, polarization) combinations."""


@dataclass(frozen=True)
class ModeCoordinates:
    """One field mode: in-plane wavenumber, frequency, polarization.

    ``omega`` may be complex with Im >= 0; the vacuum normal wavenumber
    k_z = sqrt((omega/c)^2 - k^2) is stored with the branch Im(k_z) >= 0,
    i.e. k_z = i*kappa for evanescent modes.
    """

    k: float
    omega: complex
    pol: str
    k_z: complex = None  # derived

    def __post_init__(self):
        if self.pol not in ("s", "p"):
            raise ValueError("pol must be 's' or 'p'")
        if self.k < 0:
            raise ValueError("k must be >= 0")
        w = complex(self.omega)
        if w == 0:
            raise ValueError("omega must be nonzero")
        if w.imag < 0:
            raise ValueError("omega must lie in the closed upper half plane")
        object.__setattr__(self, "k_z", _kz_vacuum(self.k, w))

    @property
    def is_evanescent(self) -> bool:
        """True when k > omega/c (real frequencies only)."""
        w = complex(self.omega)
        if w.imag != 0:
            raise ValueError("propagating/evanescent split needs a real frequency")
        return self.k > w.real / c

    @property
    def kappa(self) -> float:
        """Evanescent decay rate Im(k_z) (1/m)."""
        return complex(self.k_z).imag


@dataclass(frozen=True)
class DecayModes:
    """Decay constants of the field and current below the surface (1/m)."""

    kappa_b: complex   # sqrt(k^2 - eps_b (omega/c)^2)
    kappa_m: complex   # local screened mode
    kappa_1: complex   # boundary-layer mode (larger real part)
    kappa_2: complex   # bulk-like mode


@dataclass(frozen=True)
class SurfaceResponse:
    """Drude-like excess-current response of the surface sheet.

    sigma_s and R_s are the values at ``omega``; their product equals
    ell_0^2 at any frequency.  ell_0 < 0 encodes a missing (rather than
    added) surface current.
    """

    ell_0: float
    tau_s: float
    omega: complex
    sigma_s: complex
    R_s: complex


@dataclass(frozen=True)
class CurrentProfile:
    """Sub-surface velocity / vector-potential distribution for one s mode.

    The grid starts at the surface (z = 0).  ``v_loc``/``A_loc`` hold the
    local-model profile computed without the no-slip condition, for
    comparison and for the excess-current integral.
    """

    mode: ModeCoordinates
    decay: DecayModes
    z_grid: np.ndarray
    v: np.ndarray
    A: np.ndarray
    v_loc: np.ndarray
    A_loc: np.ndarray
    v1: complex
    v2: complex
    r_s: complex
    r_s_local: complex
    j_excess: complex


def _kz_vacuum(k, omega):
    kz = np.sqrt((np.asarray(omega, dtype=complex) / c) ** 2 - np.asarray(k, dtype=float) ** 2)
    return np.where(kz.imag < 0, -kz, kz) if np.ndim(kz) else (-kz if kz.imag < 0 else kz)


def _eps_drude(omega, mat):
    w = np.asarray(omega, dtype=complex)
    return mat.eps_b - mat.omega_p**2 / (w * (w + 1j / mat.tau))


def _sqrt_decay(x):
    """Principal square root; Re >= 0 for any complex argument."""
    return np.sqrt(np.asarray(x, dtype=complex))


def _kappa_m_arr(k, omega, mat):
    return _sqrt_decay(np.asarray(k, dtype=float) ** 2
                       - (np.asarray(omega, dtype=complex) / c) ** 2 * _eps_drude(omega, mat))


def _kappa_b_arr(k, omega, mat):
    return _sqrt_decay(np.asarray(k, dtype=float) ** 2
                       - mat.eps_b * (np.asarray(omega, dtype=complex) / c) ** 2)


def _r_local_arr(pol, k, omega, mat):
    kz = _kz_vacuum(k, omega)
    km = _kappa_m_arr(k, omega, mat)
    if pol == "s":
        return (kz - 1j * km) / (kz + 1j * km)
    eps = _eps_drude(omega, mat)
    return (eps * kz - 1j * km) / (eps * kz + 1j * km)


def _hydro_eta(omega, mat):
    return mat.v_F**2 * mat.tau / (5.0 * (1.0 - 1j * np.asarray(omega, dtype=complex) * mat.tau))


def _decay_arr(k, omega, mat):
    """Two-mode decay constants of the viscous half space (stable roots)."""
    k = np.asarray(k, dtype=float)
    w = np.asarray(omega, dtype=complex)
    eta = _hydro_eta(w, mat)
    lam2 = mat.lambda_p_red**2
    kb2 = k**2 - mat.eps_b * (w / c) ** 2
    W = (1.0 - 1j * w * mat.tau) / (eta * mat.tau)
    s_sum = W + k**2 + kb2
    disc = (W + k**2 - kb2) ** 2 + 4j * w / (eta * lam2)
    d = np.sqrt(disc)
    degenerate = np.abs(d) < 1e-9 * np.abs(s_sum)
    if np.any(degenerate):
        warnings.warn("degenerate two-mode decay constants; perturbing the "
                      "shear viscosity by 1e-9", RuntimeWarning, stacklevel=2)
        eta = np.where(degenerate, eta * (1.0 + 1e-9), eta)
        W = (1.0 - 1j * w * mat.tau) / (eta * mat.tau)
        s_sum = W + k**2 + kb2
        d = np.sqrt((W + k**2 - kb2) ** 2 + 4j * w / (eta * lam2))
    big = np.where(np.abs(s_sum + d) >= np.abs(s_sum - d),
                   0.5 * (s_sum + d), 0.5 * (s_sum - d))
    prod = (W + k**2) * kb2 - 1j * w / (eta * lam2)
    small = prod / big
    k1 = _sqrt_decay(big)
    k2 = _sqrt_decay(small)
    swap = k2.real > k1.real
    k1, k2 = np.where(swap, k2, k1), np.where(swap, k1, k2)
    return _sqrt_decay(kb2), _kappa_m_arr(k, w, mat), k1, k2


def _r_s_hydro_arr(k, omega, mat):
    kb, _, k1, k2 = _decay_arr(k, omega, mat)
    kz = _kz_vacuum(k, omega)
    inv_z = (kb**2 + k1 * k2) / (k1 + k2)   # 1/Z, the inverse impedance length
    return (kz - 1j * inv_z) / (kz + 1j * inv_z)


def _surface_sigma(omega, mat, ell_0, tau_s):
    w = np.asarray(omega, dtype=complex)
    sigma_s = ell_0 * mat.sigma_0 / (1.0 - 1j * w * tau_s)
    R_s = ell_0 * (1.0 - 1j * w * tau_s) / mat.sigma_0
    return sigma_s, R_s


def _r_surf_arr(pol, k, omega, mat, ell_0, tau_s):
    k = np.asarray(k, dtype=float)
    w = np.asarray(omega, dtype=complex)
    kz = _kz_vacuum(k, w)
    km = _kappa_m_arr(k, w, mat)
    sigma_s, R_s = _surface_sigma(w, mat, ell_0, tau_s)
    if pol == "s":
        s_term = w * mu_0 * sigma_s
        return (kz - 1j * km - s_term) / (kz + 1j * km + s_term)
    eps = _eps_drude(w, mat)
    mixed = 1.0 + 0.25 * sigma_s * R_s * k**2
    cond = 1j * sigma_s / (epsilon_0 * w) * kz * km
    resist = epsilon_0 * eps * w * R_s * k**2
    return ((eps * kz - 1j * km) * mixed + cond - resist) / \
           ((eps * kz + 1j * km) * mixed + cond + resist)


def decay_modes(mode: ModeCoordinates, mat: MaterialParams, model="hydro") -> DecayModes:
    """Decay constants below the surface for the given model.

    For ``model="local"`` only the screened mode exists: kappa_2 = kappa_m
    and kappa_1 is infinite (the boundary layer collapses).
    """
    if model not in ("local", "hydro"):
        raise UnsupportedModelError(f"decay modes are defined for 'local' or 'hydro', not {model!r}")
    if model == "local":
        kb = _kappa_b_arr(mode.k, mode.omega, mat)
        km = _kappa_m_arr(mode.k, mode.omega, mat)
        return DecayModes(complex(kb), complex(km), complex(np.inf), complex(km))
    kb, km, k1, k2 = _decay_arr(mode.k, mode.omega, mat)
    return DecayModes(complex(kb), complex(km), complex(k1), complex(k2))


def r_local(mode: ModeCoordinates, mat: MaterialParams) -> complex:
    """Fresnel amplitude of the local Drude half space."""
    return complex(_r_local_arr(mode.pol, mode.k, mode.omega, mat))


def r_s_hydro(mode: ModeCoordinates, mat: MaterialParams) -> complex:
    """s-polarised amplitude of the viscous no-slip half space.

    r_s = (k_z - i/Z)/(k_z + i/Z) with the surface impedance length
    Z = (kappa_1 + kappa_2)/(kappa_b^2 + kappa_1 kappa_2).  The p
    polarization couples to the longitudinal channel and is not handled by
    this model.
    """
    if mode.pol != "s":
        raise UnsupportedModelError("the no-slip hydrodynamic model handles s polarization only")
    return complex(_r_s_hydro_arr(mode.k, mode.omega, mat))


def surface_response(omega, mat: MaterialParams, ell_0: float, tau_s: float) -> SurfaceResponse:
    """Drude-like surface response evaluated at ``omega``:

    sigma_s = ell_0 sigma_0 / (1 - i omega tau_s),
    R_s     = ell_0 (1 - i omega tau_s) / sigma_0.
    """
    if not tau_s > 0:
        raise ValueError("tau_s must be positive")
    sigma_s, R_s = _surface_sigma(omega, mat, ell_0, tau_s)
    return SurfaceResponse(ell_0=ell_0, tau_s=tau_s, omega=complex(omega),
                           sigma_s=complex(sigma_s), R_s=complex(R_s))


def default_surface_response(omega, mat: MaterialParams) -> SurfaceResponse:
    """Surface response with the parameters fitted to the no-slip model:
    ell_0 = -0.36 ell and tau_s = 2 tau."""
    return surface_response(omega, mat, -0.36 * mat.ell, 2.0 * mat.tau)


def r_surf(mode: ModeCoordinates, mat: MaterialParams, sr: SurfaceResponse) -> complex:
    """Reflection from a local bulk dressed with the excess surface sheet.

    s polarization feels only the surface conductivity; p picks up three
    extra terms (the sigma_s R_s k^2 mixed term, the sigma_s k_z kappa_m
    term and the resistive eps_m omega R_s k^2 term).
    """
    return complex(_r_surf_arr(mode.pol, mode.k, mode.omega, mat, sr.ell_0, sr.tau_s))


def current_profile(mode: ModeCoordinates, mat: MaterialParams,
                    z_max: float | None = None, n_points: int = 200) -> CurrentProfile:
    """Velocity and vector-potential profile below the surface for a unit
    (1 V/m) tangential electric field incident from vacuum.

    The no-slip condition forces v1 = -v2, so the tangential velocity
    vanishes at the surface and recovers the bulk (local) value over the
    boundary-layer scale.  The local-model profile is returned alongside;
    the closed-form integral of the difference is the excess surface
    current ``j_excess``.
    """
    if mode.pol != "s":
        raise UnsupportedModelError("current profiles are defined for s polarization")
    w = complex(mode.omega)
    if w.imag != 0:
        raise ValueError("current profiles want a real frequency")
    if z_max is None:
        z_max = 10.0 * mat.ell
    lam2 = mat.lambda_p_red**2
    kb, km, k1, k2 = (complex(x) for x in _decay_arr(mode.k, w, mat))
    kz = complex(mode.k_z)
    inv_z = (kb**2 + k1 * k2) / (k1 + k2)
    r_s = (kz - 1j * inv_z) / (kz + 1j * inv_z)

    A0 = 1.0 / (1j * w)  # unit incident tangential E field
    gamma = (kb**2 - k1**2) / (kb**2 - k2**2)
    A1 = A0 * (1.0 + r_s) / (1.0 - gamma)
    A2 = -gamma * A1
    mode_ratio = e / m_e * lam2  # v_l = (e/m)(kappa_b^2 - kappa_l^2) lam_p^2 A_l
    v1 = mode_ratio * (kb**2 - k1**2) * A1
    v2 = -v1  # no-slip, exactly

    r_loc = complex(_r_local_arr("s", mode.k, w, mat))
    At_loc = A0 * (1.0 + r_loc)
    v_fac_loc = mode_ratio * (kb**2 - km**2)

    z = np.concatenate([[0.0], np.geomspace(mat.lambda_p_red / 100.0, z_max, n_points - 1)])
    A = A1 * np.exp(-k1 * z) + A2 * np.exp(-k2 * z)
    v = v1 * np.exp(-k1 * z) + v2 * np.exp(-k2 * z)
    A_loc = At_loc * np.exp(-km * z)
    v_loc = v_fac_loc * A_loc

    # excess against the bulk (kappa_2 mode) extrapolated to the surface;
    # only the boundary layer survives the integral
    j_excess = mat.n_e * e * v1 / k1

    return CurrentProfile(
        mode=mode,
        decay=DecayModes(kb, km, k1, k2),
        z_grid=z, v=v, A=A, v_loc=v_loc, A_loc=A_loc,
        v1=v1, v2=v2, r_s=r_s, r_s_local=r_loc,
        j_excess=complex(j_excess),
    )


def excess_current(profile: CurrentProfile, mat: MaterialParams) -> complex:
    """Excess surface current n_e e Int dz [v(z) - v_bulk(z)] in closed form.

    The reference profile v_bulk extrapolates the bulk (kappa_2 mode)
    current of the same scattering solution down to the surface, as the
    boundary-layer bookkeeping requires; the integral then collapses to the
    boundary-layer mode alone, n_e e v1/kappa_1.  Subtracting the
    standalone local-model solution instead would contaminate the excess
    with the difference of the two reflection amplitudes.  A profile
    without a boundary layer (v1 = 0) has zero excess.
    """
    return complex(mat.n_e * e * profile.v1 / profile.decay.kappa_1)


def reflect(model: str, mode: ModeCoordinates, mat: MaterialParams,
            sr: SurfaceResponse | None = None) -> complex:
    """Dispatch to one of the reflection models.

    ``ideal`` returns r_s = -1, r_p = +1 for any mode.  ``hydro`` requires
    s polarization; ``surfcond`` requires a :class:`SurfaceResponse`.
    Imaginary frequencies are accepted by every model.
    """
    if model not in MODELS:
        raise UnsupportedModelError(f"unknown model {model!r}; choose from {MODELS}")
    if model == "ideal":
        return -1.0 + 0j if mode.pol == "s" else 1.0 + 0j
    if model == "local":
        return r_local(mode, mat)
    if model == "hydro":
        return r_s_hydro(mode, mat)
    if sr is None:
        raise UnsupportedModelError("model='surfcond' needs a SurfaceResponse")
    return r_surf(mode, mat, sr)


def reflect_grid(model: str, pol: str, k, omega, mat: MaterialParams,
                 sr: SurfaceResponse | None = None):
    """Vectorised reflection amplitudes on broadcastable (k, omega) arrays.

    Same contracts as :func:`reflect`; used by the fluctuation integrals
    and the CLI scans.
    """
    if pol not in ("s", "p"):
        raise ValueError("pol must be 's' or 'p'")
    if model not in MODELS:
        raise UnsupportedModelError(f"unknown model {model!r}; choose from {MODELS}")
    if model == "ideal":
        shape = np.broadcast(np.asarray(k), np.asarray(omega)).shape
        return np.full(shape, -1.0 + 0j if pol == "s" else 1.0 + 0j)
    if model == "local":
        return _r_local_arr(pol, k, omega, mat)
    if model == "hydro":
        if pol != "s":
            raise UnsupportedModelError("the no-slip hydrodynamic model handles s polarization only")
        return _r_s_hydro_arr(k, omega, mat)
    if sr is None:
        raise UnsupportedModelError("model='surfcond' needs a SurfaceResponse")
    return _r_surf_arr(pol, k, omega, mat, sr.ell_0, sr.tau_s)
