"""emconv: electromechanical microwave frequency converter toolkit.

Forward simulation of a two-resonator, one-mechanical-mode converter via
input-output theory, thermal/added-noise bookkeeping, and nonlinear
least-squares parameter extraction from complex spectra.
"""

__version__ = "0.1.0"

from .errors import (ConfigError, DataFormatError, EmconvError,
                     InitializationError, InvalidInputError, SingularityError)
from .model import (CODATA, ConverterState, DriveConfig, MechanicalMode,
                    PhysicalConstants, ResonatorMode, angular_to_hz,
                    coupling_rate, dbm_to_watts, drive_photon_number,
                    hz_to_angular, operating_point, state_for_cooperativity,
                    watts_to_dbm)
from .scattering import (ComplexSpectrum, LineCalibration,
                         conversion_efficiency, conversion_spectrum,
                         eit_reflection, langevin_smatrix,
                         reflection_on_resonance, s11_single)
from .thermal import (HeatingModel, NoiseBudget, added_noise,
                      cooled_occupancy, heating_occupancy,
                      occupancy_temperature, thermal_occupancy)
from .fitters import (FitProblem, FitResult, fit, fit_lorentzian,
                      fit_power_law, fit_single_reflection,
                      fit_two_mode_eit, minimize, numeric_jacobian)

__all__ = [
    "__version__",
    "ConfigError", "DataFormatError", "EmconvError", "InitializationError",
    "InvalidInputError", "SingularityError",
    "CODATA", "ConverterState", "DriveConfig", "MechanicalMode",
    "PhysicalConstants", "ResonatorMode", "angular_to_hz", "coupling_rate",
    "dbm_to_watts", "drive_photon_number", "hz_to_angular", "operating_point",
    "state_for_cooperativity", "watts_to_dbm",
    "ComplexSpectrum", "LineCalibration", "conversion_efficiency",
    "conversion_spectrum", "eit_reflection", "langevin_smatrix",
    "reflection_on_resonance", "s11_single",
    "HeatingModel", "NoiseBudget", "added_noise", "cooled_occupancy",
    "heating_occupancy", "occupancy_temperature", "thermal_occupancy",
    "FitProblem", "FitResult", "fit", "fit_lorentzian", "fit_power_law",
    "fit_single_reflection", "fit_two_mode_eit", "minimize",
    "numeric_jacobian",
]
