"""Bulk metal parameters, the local Drude response, and derived scales.

Everything downstream works in SI units; frequencies are angular (rad/s).
Frequencies may be complex as long as they stay in the closed upper half
plane (response functions are causal), which covers both real-frequency
evaluation and the imaginary axis omega = i*xi used for Matsubara sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import c, e, epsilon_0, hbar, k as k_B, m_e, mu_0

__all__ = [
    "MaterialParams",
    "DerivedScales",
    "gold",
    "load_material_file",
    "drude_response",
    "derived_scales",
]


@dataclass(frozen=True)
class MaterialParams:
    """Bulk description of a conductor.

    eps_b    : background permittivity of the bound electrons (>= 1)
    omega_p  : plasma frequency (rad/s)
    tau      : momentum relaxation time (s)
    v_F      : Fermi velocity (m/s)
    E_F      : Fermi energy (J); optional, required by the nonlocal response
    name     : label used in file output
    """

    eps_b: float
    omega_p: float
    tau: float
    v_F: float
    E_F: float | None = None
    name: str = ""

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ValueError("omega_p must be positive")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.v_F > 0:
            raise ValueError("v_F must be positive")
        if not self.eps_b >= 1:
            raise ValueError("eps_b must be >= 1")
        if self.E_F is not None and not self.E_F > 0:
            raise ValueError("E_F must be positive when given")

    @property
    def k_F(self) -> float:
        """Fermi wavenumber 2 E_F / (hbar v_F) (1/m)."""
        if self.E_F is None:
            raise ValueError(f"material {self.name!r} has no Fermi energy; "
                             "k_F is needed for the nonlocal response")
        return 2.0 * self.E_F / (hbar * self.v_F)

    @property
    def sigma_0(self) -> float:
        """DC conductivity epsilon_0 * omega_p**2 * tau (S/m)."""
        return epsilon_0 * self.omega_p**2 * self.tau

    @property
    def n_e(self) -> float:
        """Conduction electron density from the plasma frequency (1/m^3)."""
        return epsilon_0 * m_e * self.omega_p**2 / e**2

    @property
    def ell(self) -> float:
        """Mean free path v_F * tau (m)."""
        return self.v_F * self.tau

    @property
    def lambda_p_red(self) -> float:
        """Reduced plasma wavelength c / omega_p (m)."""
        return c / self.omega_p


@dataclass(frozen=True)
class DerivedScales:
    """Transport/length scales implied by a material at temperature T."""

    sigma_0: float      # DC conductivity (S/m)
    ell: float          # mean free path (m)
    lambda_p_red: float  # reduced plasma wavelength c/omega_p (m)
    D_m: float          # magnetic diffusion constant 1/(mu_0 sigma_0) (m^2/s)
    l_m: float          # thermal magnetic length sqrt(hbar D_m / k_B T) (m)
    lambda_T_red: float  # reduced thermal wavelength hbar c / k_B T (m)


def gold() -> MaterialParams:
    """Room-temperature gold: hbar*omega_p = 9.1 eV, hbar/tau = 27 meV,
    v_F = 1.4e6 m/s, E_F = 5.5 eV."""
    return MaterialParams(
        eps_b=1.0,
        omega_p=9.1 * e / hbar,
        tau=hbar / (0.027 * e),
        v_F=1.4e6,
        E_F=5.5 * e,
        name="gold",
    )


def load_material_file(path) -> MaterialParams:
    """Parse a flat key=value material file.

    Keys: name, eps_b, hbar_omega_p_eV, hbar_over_tau_meV, v_F_m_per_s and
    optionally E_F_eV.  Lines starting with '#' are comments.
    """
    entries: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            entries[key] = val
    required = ["eps_b", "hbar_omega_p_eV", "hbar_over_tau_meV", "v_F_m_per_s"]
    missing = [key for key in required if key not in entries]
    if missing:
        raise ValueError(f"{path}: missing material keys: {', '.join(missing)}")
    E_F = float(entries["E_F_eV"]) * e if "E_F_eV" in entries else None
    return MaterialParams(
        eps_b=float(entries["eps_b"]),
        omega_p=float(entries["hbar_omega_p_eV"]) * e / hbar,
        tau=hbar / (float(entries["hbar_over_tau_meV"]) * 1e-3 * e),
        v_F=float(entries["v_F_m_per_s"]),
        E_F=E_F,
        name=entries.get("name", ""),
    )


def _check_frequency(omega):
    """Reject omega = 0 and the lower half plane (causality)."""
    w = np.asarray(omega)
    if np.any(w == 0):
        raise ValueError("omega = 0 lies on the Drude pole")
    if np.any(w.imag < 0):
        raise ValueError("omega must lie in the closed upper half plane")


def drude_response(omega, mat: MaterialParams):
    """Local Drude permittivity and conductivity at (complex) frequency.

    Returns
    -------
    (eps_m, sigma) : complex or ndarray
        eps_m = eps_b - omega_p**2 / (omega*(omega + i/tau)),
        sigma = sigma_0 / (1 - i*omega*tau).
    """
    _check_frequency(omega)
    w = np.asarray(omega, dtype=complex)
    eps_m = mat.eps_b - mat.omega_p**2 / (w * (w + 1j / mat.tau))
    sigma = mat.sigma_0 / (1.0 - 1j * w * mat.tau)
    if np.isscalar(omega) or np.ndim(omega) == 0:
        return complex(eps_m), complex(sigma)
    return eps_m, sigma


def derived_scales(mat: MaterialParams, T: float) -> DerivedScales:
    """Length/time scales of the material at temperature T (> 0)."""
    if not T > 0:
        raise ValueError("T must be positive")
    sigma_0 = mat.sigma_0
    D_m = 1.0 / (mu_0 * sigma_0)
    return DerivedScales(
        sigma_0=sigma_0,
        ell=mat.ell,
        lambda_p_red=mat.lambda_p_red,
        D_m=D_m,
        l_m=float(np.sqrt(hbar * D_m / (k_B * T))),
        lambda_T_red=hbar * c / (k_B * T),
    )
