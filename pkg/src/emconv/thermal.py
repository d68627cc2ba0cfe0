"""Occupancy and noise bookkeeping for the converter.

Covers the Bose-Einstein bath occupancy, the sideband-cooled phonon number
including the resonator-noise heating floor, a phenomenological power law
for the drive-dependent resonator occupancy, and the added output noise of
the converter.  The weighted-bath cooling form and the power law are model
choices fit to data, not first-principles results.
"""

import math
from dataclasses import dataclass

from .errors import InvalidInputError
from .model import CODATA

# Added-noise estimates are only meaningful deep in the cooperative regime;
# below this both-cooperativity threshold the harness flags them instead.
COOP_REGIME_THRESHOLD = 10.0


@dataclass(frozen=True)
class NoiseBudget:
    """Occupancies and resulting added noise at one operating point."""

    n_mech: float     # mechanical occupancy [quanta]
    n_res: tuple      # resonator occupancies (n_r1, n_r2) [quanta]
    n_add: tuple      # added noise per output port [photons s^-1 Hz^-1]

    def __post_init__(self):
        vals = (self.n_mech,) + tuple(self.n_res) + tuple(self.n_add)
        if any(v < 0.0 for v in vals if not math.isnan(v)):
            raise InvalidInputError("occupancies and added noise must be >= 0")


@dataclass(frozen=True)
class HeatingModel:
    """Power-law resonator occupancy versus drive photon number."""

    amplitude: float     # occupancy at the reference drive photon number
    exponent: float      # power-law slope (free fit parameter)
    reference_n: float   # reference drive photon number

    def __post_init__(self):
        if self.amplitude < 0.0:
            raise InvalidInputError(f"amplitude must be >= 0, got {self.amplitude}")
        if not self.reference_n > 0.0:
            raise InvalidInputError(f"reference_n must be > 0, got {self.reference_n}")


def thermal_occupancy(omega, temperature, constants=CODATA):
    """Bose-Einstein occupancy of a mode at ``omega`` [rad/s] and T [K]."""
    if not omega > 0.0:
        raise InvalidInputError(f"frequency must be > 0, got {omega}")
    if temperature < 0.0:
        raise InvalidInputError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0.0:
        return 0.0
    x = constants.hbar * omega / (constants.k_boltzmann * temperature)
    return 1.0 / math.expm1(x)


def occupancy_temperature(omega, occupancy, constants=CODATA):
    """Invert ``thermal_occupancy``: temperature [K] giving ``occupancy``."""
    if not omega > 0.0:
        raise InvalidInputError(f"frequency must be > 0, got {omega}")
    if occupancy < 0.0:
        raise InvalidInputError(f"occupancy must be >= 0, got {occupancy}")
    if occupancy == 0.0:
        return 0.0
    return constants.hbar * omega / (constants.k_boltzmann * math.log1p(1.0 / occupancy))


def cooled_occupancy(n_bath, coop, n_res):
    """Sideband-cooled phonon number with a resonator-noise heating floor.

    Weighted-bath form (n_bath + C n_res) / (C + 1): cooling pulls the
    mechanics toward the resonator occupancy, so n_res is the floor at
    large cooperativity.
    """
    if n_bath < 0.0 or coop < 0.0 or n_res < 0.0:
        raise InvalidInputError("n_bath, coop and n_res must all be >= 0")
    return (n_bath + coop * n_res) / (coop + 1.0)


def heating_occupancy(model, n_drive):
    """Resonator occupancy at a given drive photon number (power law)."""
    if not n_drive > 0.0:
        raise InvalidInputError(f"drive photon number must be > 0, got {n_drive}")
    return model.amplitude * (n_drive / model.reference_n) ** model.exponent


def added_noise(eta, n_res, n_mech):
    """Added noise per output port in the high-cooperativity regime.

    n_add,i = eta_i (n_r,1 + n_r,2 + 2 n_m); the caller is responsible for
    the C_1 ~ C_2 >> 1 regime assumption (see COOP_REGIME_THRESHOLD).
    """
    if any(v < 0.0 for v in tuple(n_res) + (n_mech,)):
        raise InvalidInputError("occupancies must be >= 0")
    for e in eta:
        if not 0.0 <= e <= 1.0:
            raise InvalidInputError(f"eta must be in [0, 1], got {eta}")
    total = n_res[0] + n_res[1] + 2.0 * n_mech
    return tuple(e * total for e in eta)
