"""Device parameters and the algebra from drive settings to an operating point.

All quantities are stored internally as angular rates [rad/s].  Constructors
suffixed ``from_hz`` and the harness convert ordinary frequencies [Hz] at the
boundary, which keeps every formula in this package free of 2*pi bookkeeping.

The operating point of the converter is fully determined by the two drive
tones: each tone, red-detuned from its resonator by the mechanical frequency,
builds up ``n_i`` intra-resonator photons, enhances the vacuum coupling to
``g_i = g0_i * sqrt(n_i)``, damps the mechanical mode by ``Gamma_i = 4 g_i^2
/ kappa_i`` and sets the cooperativity ``C_i = Gamma_i / gamma_m``.
"""

import math
from dataclasses import dataclass

from scipy import constants as _codata

from .errors import InvalidInputError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhysicalConstants:
    """Fixed CODATA constants used for photon-energy and occupancy conversions."""

    hbar: float          # reduced Planck constant [J s]
    k_boltzmann: float   # Boltzmann constant [J/K]


CODATA = PhysicalConstants(hbar=_codata.hbar, k_boltzmann=_codata.k)


def hz_to_angular(f):
    """Ordinary frequency [Hz] to angular frequency [rad/s]."""
    return TWO_PI * f


def angular_to_hz(w):
    """Angular frequency [rad/s] to ordinary frequency [Hz]."""
    return w / TWO_PI


def dbm_to_watts(p_dbm):
    """Convert a power level [dBm] to watts.  ``-inf`` maps to exactly 0 W."""
    if p_dbm == -math.inf:
        return 0.0
    return 1e-3 * 10.0 ** (p_dbm / 10.0)


def watts_to_dbm(p_watts):
    """Convert watts to dBm.  0 W maps to ``-inf``."""
    if p_watts < 0.0:
        raise InvalidInputError(f"power must be >= 0 W, got {p_watts}")
    if p_watts == 0.0:
        return -math.inf
    return 10.0 * math.log10(p_watts / 1e-3)


@dataclass(frozen=True)
class ResonatorMode:
    """One microwave LC mode coupled to the measurement waveguide."""

    omega: float      # resonance frequency [rad/s]
    kappa_in: float   # intrinsic decay rate [rad/s]
    kappa_ex: float   # external (waveguide) decay rate [rad/s]

    def __post_init__(self):
        if not self.omega > 0.0:
            raise InvalidInputError(f"resonator frequency must be > 0, got {self.omega}")
        if self.kappa_in < 0.0:
            raise InvalidInputError(f"kappa_in must be >= 0, got {self.kappa_in}")
        if not self.kappa_ex > 0.0:
            raise InvalidInputError(f"kappa_ex must be > 0, got {self.kappa_ex}")

    @property
    def kappa(self):
        """Total decay rate kappa_in + kappa_ex [rad/s]."""
        return self.kappa_in + self.kappa_ex

    @property
    def eta(self):
        """Waveguide coupling ratio kappa_ex / kappa, in (0, 1]."""
        return self.kappa_ex / self.kappa

    @classmethod
    def from_hz(cls, freq_hz, kappa_in_hz, kappa_ex_hz):
        return cls(hz_to_angular(freq_hz), hz_to_angular(kappa_in_hz),
                   hz_to_angular(kappa_ex_hz))


@dataclass(frozen=True)
class MechanicalMode:
    """The nanobeam mechanical mode shared by both resonators."""

    omega_m: float    # mechanical frequency [rad/s]
    gamma_m: float    # intrinsic damping rate [rad/s]
    n_bath: float     # thermal bath occupancy [quanta]

    def __post_init__(self):
        if not self.omega_m > 0.0:
            raise InvalidInputError(f"mechanical frequency must be > 0, got {self.omega_m}")
        if not self.gamma_m > 0.0:
            raise InvalidInputError(f"gamma_m must be > 0, got {self.gamma_m}")
        if self.n_bath < 0.0:
            raise InvalidInputError(f"n_bath must be >= 0, got {self.n_bath}")

    @classmethod
    def from_hz(cls, freq_hz, gamma_hz, n_bath):
        return cls(hz_to_angular(freq_hz), hz_to_angular(gamma_hz), n_bath)


@dataclass(frozen=True)
class DriveConfig:
    """One pump tone: applied power, line attenuation and placement.

    ``p_applied`` is referenced to the room-temperature source; ``attenuation``
    maps it to the on-chip waveguide, so the power arriving at the device is
    ``p_applied - attenuation`` on the dB scale.  ``omega_d = None`` selects
    the red-sideband default, one mechanical frequency below the resonator.
    """

    p_applied: float          # source power [dBm]; -inf means the tone is off
    attenuation: float        # input line loss [dB]
    g0: float                 # vacuum electromechanical coupling [rad/s]
    omega_d: float | None = None   # drive frequency [rad/s]; None -> red sideband

    def __post_init__(self):
        if self.attenuation < 0.0:
            raise InvalidInputError(f"attenuation must be >= 0 dB, got {self.attenuation}")
        if self.g0 < 0.0:
            raise InvalidInputError(f"g0 must be >= 0, got {self.g0}")
        if self.omega_d is not None and not self.omega_d > 0.0:
            raise InvalidInputError(f"drive frequency must be > 0, got {self.omega_d}")

    def drive_frequency(self, res, mech):
        """Resolve the drive frequency [rad/s], defaulting to omega - omega_m."""
        if self.omega_d is not None:
            return self.omega_d
        return res.omega - mech.omega_m

    def detuning(self, res, mech):
        """Drive detuning Delta = omega_res - omega_drive [rad/s]."""
        return res.omega - self.drive_frequency(res, mech)


@dataclass(frozen=True)
class ConverterState:
    """Derived operating point of the converter (one entry per resonator)."""

    n_drive: tuple            # intra-resonator drive photon numbers
    g: tuple                  # parametric couplings g_i = g0_i sqrt(n_i) [rad/s]
    big_gamma: tuple          # induced mechanical damping 4 g_i^2 / kappa_i [rad/s]
    coop: tuple               # cooperativities Gamma_i / gamma_m
    total_linewidth: float    # gamma_m + sum(Gamma_i) [rad/s]

    def __post_init__(self):
        for name in ("n_drive", "g", "big_gamma", "coop"):
            vals = getattr(self, name)
            if len(vals) != 2:
                raise InvalidInputError(f"{name} must have one entry per resonator")
            if any(v < 0.0 for v in vals):
                raise InvalidInputError(f"{name} entries must be >= 0, got {vals}")
        if self.total_linewidth < 0.0:
            raise InvalidInputError("total_linewidth must be >= 0")


def input_power_watts(p_applied, attenuation):
    """Power arriving at the on-chip waveguide [W] for a source power [dBm]."""
    return dbm_to_watts(p_applied - attenuation)


def drive_photon_number(p_applied, attenuation, omega_d, res, delta,
                        constants=CODATA):
    """Number of intra-resonator drive photons built up by one pump tone.

    Parameters
    ----------
    p_applied : float
        Source power [dBm].  ``-inf`` means the tone is off.
    attenuation : float
        Input line loss [dB] between source and on-chip waveguide.
    omega_d : float
        Drive frequency [rad/s].
    res : ResonatorMode
        The driven resonator.
    delta : float
        Drive detuning omega_res - omega_d [rad/s].

    Returns
    -------
    float
        n = (P_in / hbar omega_d) * 4 kappa_ex / (kappa^2 + 4 delta^2).
    """
    if not omega_d > 0.0:
        raise InvalidInputError(f"drive frequency must be > 0, got {omega_d}")
    p_in = input_power_watts(p_applied, attenuation)
    flux = p_in / (constants.hbar * omega_d)
    return flux * 4.0 * res.kappa_ex / (res.kappa ** 2 + 4.0 * delta ** 2)


def coupling_rate(g0, n_drive):
    """Drive-enhanced parametric coupling g = g0 * sqrt(n_drive) [rad/s]."""
    if n_drive < 0.0:
        raise InvalidInputError(f"photon number must be >= 0, got {n_drive}")
    return g0 * math.sqrt(n_drive)


def operating_point(drives, resonators, mech, constants=CODATA):
    """Evaluate the converter operating point for a pair of drive tones.

    Parameters
    ----------
    drives : (DriveConfig, DriveConfig)
    resonators : (ResonatorMode, ResonatorMode)
    mech : MechanicalMode

    Returns
    -------
    ConverterState
        Photon numbers, couplings, induced damping rates, cooperativities
        and the total back-action-damped mechanical linewidth.  The function
        is pure: identical inputs give bit-identical outputs.
    """
    n_drive, g, big_gamma, coop = [], [], [], []
    for drive, res in zip(drives, resonators):
        omega_d = drive.drive_frequency(res, mech)
        delta = res.omega - omega_d
        n = drive_photon_number(drive.p_applied, drive.attenuation, omega_d,
                                res, delta, constants)
        gi = coupling_rate(drive.g0, n)
        gam = 4.0 * gi ** 2 / res.kappa
        n_drive.append(n)
        g.append(gi)
        big_gamma.append(gam)
        coop.append(gam / mech.gamma_m)
    total = mech.gamma_m + big_gamma[0] + big_gamma[1]
    return ConverterState(n_drive=tuple(n_drive), g=tuple(g),
                          big_gamma=tuple(big_gamma), coop=tuple(coop),
                          total_linewidth=total)


def state_for_cooperativity(resonators, mech, coops, g0s=None):
    """Build a synthetic operating point with prescribed cooperativities.

    Inverts C_i = 4 g_i^2 / (kappa_i gamma_m) for the couplings.  Photon
    numbers are back-computed when the vacuum couplings ``g0s`` are supplied
    (and are reported as 0 otherwise, since they carry no information here).
    """
    if len(coops) != 2:
        raise InvalidInputError("coops must have one entry per resonator")
    if any(c < 0.0 for c in coops):
        raise InvalidInputError(f"cooperativities must be >= 0, got {coops}")
    g, big_gamma, n_drive = [], [], []
    for i, (c, res) in enumerate(zip(coops, resonators)):
        gam = c * mech.gamma_m
        gi = math.sqrt(gam * res.kappa) / 2.0
        g.append(gi)
        big_gamma.append(gam)
        if g0s is not None and g0s[i] > 0.0:
            n_drive.append((gi / g0s[i]) ** 2)
        else:
            n_drive.append(0.0)
    total = mech.gamma_m + big_gamma[0] + big_gamma[1]
    return ConverterState(n_drive=tuple(n_drive), g=tuple(g),
                          big_gamma=tuple(big_gamma), coop=tuple(coops),
                          total_linewidth=total)
