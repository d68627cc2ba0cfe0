"""Coherent scattering responses of the driven converter.

Two independent routes are provided on purpose:

* ``langevin_smatrix`` solves the full 3-mode linear response (two resonators
  plus the mechanical mode, each with its own input-output port) and is the
  oracle for everything else;
* the closed forms ``s11_single``, ``eit_reflection``,
  ``conversion_efficiency`` and ``reflection_on_resonance`` evaluate the
  textbook expressions directly.

All responses are computed in the rotating frame of the respective drive
tone; the harness maps laboratory frequencies into that frame.  Frequencies
and rates are angular [rad/s] except inside ``ComplexSpectrum``, which is a
data-exchange type and therefore carries ordinary frequency [Hz].
"""

import numpy as np
from dataclasses import dataclass

from .errors import InvalidInputError, SingularityError
from .model import TWO_PI

PORT_LABELS = ("S11", "S22", "S21", "S12")


@dataclass(frozen=True)
class ComplexSpectrum:
    """Frequency-indexed complex scattering data (measured or synthesized)."""

    freq: np.ndarray     # probe frequency axis [Hz], strictly increasing
    value: np.ndarray    # complex scattering amplitude per frequency
    meta: str            # port label, one of S11/S22/S21/S12

    def __post_init__(self):
        freq = np.asarray(self.freq, dtype=float)
        value = np.asarray(self.value, dtype=complex)
        if freq.ndim != 1 or value.ndim != 1 or freq.size != value.size:
            raise InvalidInputError("freq and value must be 1-d arrays of equal length")
        if freq.size < 1:
            raise InvalidInputError("spectrum must contain at least one point")
        if freq.size > 1 and not np.all(np.diff(freq) > 0.0):
            raise InvalidInputError("freq must be strictly increasing")
        if self.meta not in PORT_LABELS:
            raise InvalidInputError(f"meta must be one of {PORT_LABELS}, got {self.meta!r}")
        object.__setattr__(self, "freq", freq)
        object.__setattr__(self, "value", value)

    def __len__(self):
        return self.freq.size

    @property
    def power(self):
        """|value|^2 per frequency point."""
        return np.abs(self.value) ** 2


@dataclass(frozen=True)
class LineCalibration:
    """Global phase offset and cable delay of one measurement window."""

    phase_offset: float   # phi [rad]
    delay: float          # tau [s]

    def __post_init__(self):
        if self.delay < 0.0:
            raise InvalidInputError(f"delay must be >= 0, got {self.delay}")

    def factor(self, omega):
        """Multiplicative calibration term exp(-i (phi + omega tau))."""
        return np.exp(-1j * (self.phase_offset + np.asarray(omega) * self.delay))


def s11_single(res, cal, omega):
    """Reflection off a single resonator with no drives on.

    Parameters
    ----------
    res : ResonatorMode
    cal : LineCalibration
    omega : float or ndarray
        Probe frequency [rad/s] on the same axis as ``res.omega`` (lab frame
        for raw data, or a rotating-frame coordinate if ``res.omega`` is one).

    Returns
    -------
    complex or ndarray
        exp(-i(phi + omega tau)) * (1 - kappa_ex / (kappa/2 + i(omega_0 - omega)))
    """
    omega = np.asarray(omega, dtype=float)
    response = 1.0 - res.kappa_ex / (res.kappa / 2.0 + 1j * (res.omega - omega))
    out = cal.factor(omega) * response
    return out if np.ndim(out) else complex(out)


def _susceptibilities(resonators, mech, omega, detunings):
    if detunings is None:
        detunings = (mech.omega_m, mech.omega_m)
    chi_r = [1.0 / (res.kappa / 2.0 + 1j * (delta - omega))
             for res, delta in zip(resonators, detunings)]
    chi_m = 1.0 / (mech.gamma_m / 2.0 + 1j * (mech.omega_m - omega))
    return chi_r, chi_m


def eit_reflection(resonators, mech, state, port, omega, detunings=None):
    """Two-drive reflection spectrum at one resonator port (rotating frame).

    Both drive tones dress the mechanical mode, so the reflected probe shows
    a feature of width ``state.total_linewidth`` inside the resonator dip.
    ``detunings`` are the drive detunings Delta_i [rad/s]; the red-sideband
    default Delta_i = omega_m applies when omitted.

    Returns the bare interference term of the probe with the mechanical
    sideband; any line calibration is applied multiplicatively by the caller.
    """
    if port not in (1, 2):
        raise InvalidInputError(f"port must be 1 or 2, got {port}")
    omega = np.asarray(omega, dtype=float)
    i = port - 1
    j = 1 - i
    chi_r, chi_m = _susceptibilities(resonators, mech, omega, detunings)
    g1, g2 = state.g
    gi, gj = (g1, g2) if port == 1 else (g2, g1)
    denom = 1.0 + chi_m * (g1 ** 2 * chi_r[0] + g2 ** 2 * chi_r[1])
    out = 1.0 - resonators[i].kappa_ex * chi_r[i] * (1.0 + gj ** 2 * chi_m * chi_r[j]) / denom
    return out if np.ndim(out) else complex(out)


def conversion_efficiency(coop, eta):
    """Bidirectional photon conversion efficiency |T|^2 at line center.

    coop and eta are the per-resonator pairs (C_1, C_2) and (eta_1, eta_2);
    the result is eta_1 eta_2 * 4 C_1 C_2 / (1 + C_1 + C_2)^2.
    """
    c1, c2 = coop
    e1, e2 = eta
    if c1 < 0.0 or c2 < 0.0:
        raise InvalidInputError(f"cooperativities must be >= 0, got {coop}")
    for e in (e1, e2):
        if not 0.0 < e <= 1.0:
            raise InvalidInputError(f"eta must be in (0, 1], got {eta}")
    return e1 * e2 * 4.0 * c1 * c2 / (1.0 + c1 + c2) ** 2


def reflection_on_resonance(coop_i, coop_j, eta_i):
    """On-resonance power reflection at port i with both drives on.

    Returns (1 - 2 eta_i (1 + C_j) / (1 + C_i + C_j))^2.
    """
    if coop_i < 0.0 or coop_j < 0.0:
        raise InvalidInputError("cooperativities must be >= 0")
    if not 0.0 < eta_i <= 1.0:
        raise InvalidInputError(f"eta must be in (0, 1], got {eta_i}")
    return (1.0 - 2.0 * eta_i * (1.0 + coop_j) / (1.0 + coop_i + coop_j)) ** 2


def _arrowhead_smatrix(resonators, mech, state, omega, detunings):
    """Vectorized closed-form inverse of the arrowhead response matrix.

    Returns S with shape ``omega.shape + (3, 3)``.  The matrix is complex
    symmetric, so the off-diagonal elements are mirrored and S_12 == S_21
    holds bit-exactly.
    """
    if detunings is None:
        detunings = (mech.omega_m, mech.omega_m)
    g1, g2 = state.g
    d1 = resonators[0].kappa / 2.0 + 1j * (detunings[0] - omega)
    d2 = resonators[1].kappa / 2.0 + 1j * (detunings[1] - omega)
    dm = mech.gamma_m / 2.0 + 1j * (mech.omega_m - omega)

    det = d1 * d2 * dm + d1 * g2 ** 2 + d2 * g1 ** 2
    if np.any(det == 0.0):
        raise SingularityError("linear response matrix is singular")

    # adjugate of [[d1, 0, i g1], [0, d2, i g2], [i g1, i g2, dm]]
    a11 = d2 * dm + g2 ** 2
    a22 = d1 * dm + g1 ** 2
    a33 = d1 * d2
    a12 = -g1 * g2
    a13 = -1j * d2 * g1
    a23 = -1j * d1 * g2

    k1 = np.sqrt(resonators[0].kappa_ex)
    k2 = np.sqrt(resonators[1].kappa_ex)
    km = np.sqrt(mech.gamma_m)

    s = np.empty(np.shape(omega) + (3, 3), dtype=complex)
    s[..., 0, 0] = 1.0 - k1 * k1 * a11 / det
    s[..., 1, 1] = 1.0 - k2 * k2 * a22 / det
    s[..., 2, 2] = 1.0 - km * km * a33 / det
    s01 = -k1 * k2 * a12 / det
    s02 = -k1 * km * a13 / det
    s12 = -k2 * km * a23 / det
    s[..., 0, 1] = s01
    s[..., 1, 0] = s01
    s[..., 0, 2] = s02
    s[..., 2, 0] = s02
    s[..., 1, 2] = s12
    s[..., 2, 1] = s12
    return s


def _dense_smatrix(resonators, mech, state, omega, detunings):
    """General dense solve, S = I - K M^-1 K, kept for N-mode extensions."""
    if detunings is None:
        detunings = (mech.omega_m, mech.omega_m)
    g1, g2 = state.g
    omega = np.asarray(omega, dtype=float)
    scalar = omega.ndim == 0
    omega = np.atleast_1d(omega)
    k = np.diag([np.sqrt(resonators[0].kappa_ex),
                 np.sqrt(resonators[1].kappa_ex),
                 np.sqrt(mech.gamma_m)])
    out = np.empty((omega.size, 3, 3), dtype=complex)
    for n, w in enumerate(omega):
        m = np.array([
            [resonators[0].kappa / 2.0 + 1j * (detunings[0] - w), 0.0, 1j * g1],
            [0.0, resonators[1].kappa / 2.0 + 1j * (detunings[1] - w), 1j * g2],
            [1j * g1, 1j * g2, mech.gamma_m / 2.0 + 1j * (mech.omega_m - w)],
        ])
        try:
            minv_k = np.linalg.solve(m, k)
        except np.linalg.LinAlgError as exc:
            raise SingularityError("linear response matrix is singular") from exc
        out[n] = np.eye(3) - k @ minv_k
    return out[0] if scalar else out


def langevin_smatrix(resonators, mech, state, omega, detunings=None,
                     method="arrowhead"):
    """Full 3x3 scattering matrix of the driven three-mode network.

    Ports are ordered (resonator 1, resonator 2, mechanical bath).  The probe
    frequency ``omega`` [rad/s] lives in the drive rotating frame; arrays are
    accepted and produce a stacked ``(..., 3, 3)`` result.

    The global sign follows the input-output convention for which the
    decoupled diagonal reduces to the single-resonator reflection form with
    zero calibration, i.e. S_ii -> 1 - kappa_ex,i / (kappa_i/2 + i(Delta_i -
    omega)) as g -> 0.

    ``method`` selects the closed-form arrowhead inverse (default; exact and
    fast in sweeps) or the general dense solve.
    """
    if method == "arrowhead":
        omega = np.asarray(omega, dtype=float)
        s = _arrowhead_smatrix(resonators, mech, state, omega, detunings)
        return s
    if method == "dense":
        return _dense_smatrix(resonators, mech, state, omega, detunings)
    raise InvalidInputError(f"unknown method {method!r}")


def conversion_spectrum(resonators, mech, state, detunings_signal,
                        drive_detunings=None):
    """Transmission spectrum S_21 versus signal detuning from line center.

    Parameters
    ----------
    detunings_signal : ndarray
        Signal detunings delta [rad/s] about the conversion line center
        (the mechanical frequency in the rotating frame); strictly
        increasing.
    drive_detunings : optional pair of drive detunings Delta_i [rad/s].

    Returns
    -------
    ComplexSpectrum
        S_21(delta) with the detuning axis stored in ordinary frequency
        [Hz]; the conversion efficiency spectrum is its ``power``.
    """
    delta = np.asarray(detunings_signal, dtype=float)
    omega = mech.omega_m + delta
    s = _arrowhead_smatrix(resonators, mech, state, omega, drive_detunings)
    return ComplexSpectrum(freq=delta / TWO_PI, value=s[..., 1, 0], meta="S21")
