"""Reflection of electromagnetic waves by viscous conduction electrons and
the fluctuation phenomena it controls: thermal Casimir pressure and
near-field radiative heat transfer between metal plates."""

__version__ = "0.1.0"

from .materials import (MaterialParams, DerivedScales, gold, load_material_file,
                        drude_response, derived_scales)
from .lindhard import (LindhardVars, ViscoelasticCoeffs, lindhard_f, eps0,
                       eps_collisional, hydro_coeffs, extract_eta_finite_q,
                       deandres_eta, permeability, mu_from_dielectric, eps_hd)
from .reflection import (ModeCoordinates, DecayModes, SurfaceResponse,
                         CurrentProfile, UnsupportedModelError, MODELS,
                         decay_modes, r_local, r_s_hydro, current_profile,
                         excess_current, surface_response,
                         default_surface_response, r_surf, reflect, reflect_grid)
from .quadrature import (IntegrationSettings, QuadratureResult, ConvergenceError,
                         integrate_adaptive)
from .fluctuation import (PlateSystem, SpectralResult, ThermalWeights,
                          symmetric_plates, bose_factors, pressure_thermal,
                          pressure_matsubara, pressure_zero_temperature,
                          pressure_ideal_zeroT, heat_flux, heat_coefficient,
                          spectral_map)

__all__ = [name for name in dir() if not name.startswith("_")]
