"""Device configuration: INI-style files and the built-in device preset.

Config files use named sections per component.  All frequencies and rates
are ordinary frequency [Hz], powers are [dBm], attenuations and gains are
[dB], delays are [s]; conversion to angular units happens here.
"""

import configparser
import io
from dataclasses import dataclass

from ..errors import ConfigError
from ..model import (DriveConfig, MechanicalMode, ResonatorMode,
                     angular_to_hz, hz_to_angular)
from ..scattering import LineCalibration
from ..thermal import HeatingModel


@dataclass(frozen=True)
class DeviceConfig:
    """Everything needed to simulate or analyze one converter device."""

    resonators: tuple       # (ResonatorMode, ResonatorMode)
    mech: MechanicalMode
    drives: tuple           # (DriveConfig, DriveConfig)
    calibrations: tuple     # (LineCalibration, LineCalibration), one per window
    gains_db: tuple         # output-path gains (beta_1, beta_2) [dB]
    heating: HeatingModel | None = None

    def eta(self):
        """Waveguide coupling ratios (eta_1, eta_2)."""
        return tuple(r.eta for r in self.resonators)

    def with_drive_powers(self, p1_dbm, p2_dbm):
        """Copy of this config with both source powers replaced."""
        d1 = DriveConfig(p1_dbm, self.drives[0].attenuation,
                         self.drives[0].g0, self.drives[0].omega_d)
        d2 = DriveConfig(p2_dbm, self.drives[1].attenuation,
                         self.drives[1].g0, self.drives[1].omega_d)
        return DeviceConfig(self.resonators, self.mech, (d1, d2),
                            self.calibrations, self.gains_db, self.heating)


def preset(name):
    """Return a named built-in device configuration.

    ``fink2018`` is an aluminum-on-nitride converter device: resonators at
    7.444 and 9.308 GHz, a 4.118 MHz nanobeam mode with gamma_m/2pi = 7 Hz
    and a 60-quanta bath, vacuum couplings of 33 and 44 Hz and input
    attenuations of 69.0 and 70.4 dB.  The total resonator linewidths are
    derived from the intrinsic quality factors (2.2e5, 5.5e4) and coupling
    ratios (0.92, 0.68), giving kappa/2pi of about 423 and 529 kHz.
    """
    if name != "fink2018":
        raise ConfigError(f"unknown preset {name!r}")
    kin1 = 7.444e9 / 2.2e5
    kin2 = 9.308e9 / 5.5e4
    res1 = ResonatorMode.from_hz(7.444e9, kin1, kin1 * 0.92 / 0.08)
    res2 = ResonatorMode.from_hz(9.308e9, kin2, kin2 * 0.68 / 0.32)
    mech = MechanicalMode.from_hz(4.118e6, 7.0, 60.0)
    drives = (
        DriveConfig(p_applied=-6.0, attenuation=69.0, g0=hz_to_angular(33.0)),
        DriveConfig(p_applied=-6.0, attenuation=70.4, g0=hz_to_angular(44.0)),
    )
    cal = LineCalibration(phase_offset=0.0, delay=50e-9)
    heating = HeatingModel(amplitude=4.0, exponent=0.33, reference_n=3.0e4)
    return DeviceConfig(resonators=(res1, res2), mech=mech, drives=drives,
                        calibrations=(cal, cal), gains_db=(69.0, 70.4),
                        heating=heating)


_SECTION_KEYS = {
    "resonator1": {"freq_hz", "kappa_in_hz", "kappa_ex_hz"},
    "resonator2": {"freq_hz", "kappa_in_hz", "kappa_ex_hz"},
    "mechanical": {"freq_hz", "gamma_hz", "n_bath"},
    "drive1": {"power_dbm", "attenuation_db", "g0_hz", "freq_hz"},
    "drive2": {"power_dbm", "attenuation_db", "g0_hz", "freq_hz"},
    "calibration1": {"phase_rad", "delay_s"},
    "calibration2": {"phase_rad", "delay_s"},
    "gains": {"beta1_db", "beta2_db"},
    "heating": {"amplitude", "exponent", "reference_n"},
}
_REQUIRED_SECTIONS = ("resonator1", "resonator2", "mechanical",
                      "drive1", "drive2", "calibration1", "calibration2",
                      "gains")


def load_config(path):
    """Parse a device configuration file into a DeviceConfig."""
    parser = configparser.ConfigParser()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc

    for section in _REQUIRED_SECTIONS:
        if section not in parser:
            raise ConfigError(f"missing config section [{section}]")
    for section in parser.sections():
        if section not in _SECTION_KEYS:
            raise ConfigError(f"unknown config section [{section}]")
        extra = set(parser[section]) - _SECTION_KEYS[section]
        if extra:
            raise ConfigError(f"unknown keys {sorted(extra)} in [{section}]")

    def num(section, key, default=None):
        if key not in parser[section]:
            if default is None:
                raise ConfigError(f"missing key {key} in [{section}]")
            return default
        try:
            return float(parser[section][key])
        except ValueError as exc:
            raise ConfigError(f"bad number for {key} in [{section}]") from exc

    resonators = tuple(
        ResonatorMode.from_hz(num(sec, "freq_hz"), num(sec, "kappa_in_hz"),
                              num(sec, "kappa_ex_hz"))
        for sec in ("resonator1", "resonator2"))
    mech = MechanicalMode.from_hz(num("mechanical", "freq_hz"),
                                  num("mechanical", "gamma_hz"),
                                  num("mechanical", "n_bath"))
    drives = []
    for sec in ("drive1", "drive2"):
        omega_d = None
        if "freq_hz" in parser[sec]:
            omega_d = hz_to_angular(num(sec, "freq_hz"))
        drives.append(DriveConfig(p_applied=num(sec, "power_dbm"),
                                  attenuation=num(sec, "attenuation_db"),
                                  g0=hz_to_angular(num(sec, "g0_hz")),
                                  omega_d=omega_d))
    calibrations = tuple(
        LineCalibration(phase_offset=num(sec, "phase_rad", 0.0),
                        delay=num(sec, "delay_s", 0.0))
        for sec in ("calibration1", "calibration2"))
    gains = (num("gains", "beta1_db"), num("gains", "beta2_db"))
    heating = None
    if "heating" in parser:
        heating = HeatingModel(amplitude=num("heating", "amplitude"),
                               exponent=num("heating", "exponent"),
                               reference_n=num("heating", "reference_n"))
    return DeviceConfig(resonators=resonators, mech=mech, drives=tuple(drives),
                        calibrations=calibrations, gains_db=gains,
                        heating=heating)


def write_config(path, cfg):
    """Write a DeviceConfig back to the INI format read by load_config."""
    parser = configparser.ConfigParser()
    for i, res in enumerate(cfg.resonators, start=1):
        parser[f"resonator{i}"] = {
            "freq_hz": repr(angular_to_hz(res.omega)),
            "kappa_in_hz": repr(angular_to_hz(res.kappa_in)),
            "kappa_ex_hz": repr(angular_to_hz(res.kappa_ex)),
        }
    parser["mechanical"] = {
        "freq_hz": repr(angular_to_hz(cfg.mech.omega_m)),
        "gamma_hz": repr(angular_to_hz(cfg.mech.gamma_m)),
        "n_bath": repr(cfg.mech.n_bath),
    }
    for i, drv in enumerate(cfg.drives, start=1):
        section = {
            "power_dbm": repr(drv.p_applied),
            "attenuation_db": repr(drv.attenuation),
            "g0_hz": repr(angular_to_hz(drv.g0)),
        }
        if drv.omega_d is not None:
            section["freq_hz"] = repr(angular_to_hz(drv.omega_d))
        parser[f"drive{i}"] = section
    for i, cal in enumerate(cfg.calibrations, start=1):
        parser[f"calibration{i}"] = {
            "phase_rad": repr(cal.phase_offset),
            "delay_s": repr(cal.delay),
        }
    parser["gains"] = {"beta1_db": repr(cfg.gains_db[0]),
                       "beta2_db": repr(cfg.gains_db[1])}
    if cfg.heating is not None:
        parser["heating"] = {"amplitude": repr(cfg.heating.amplitude),
                             "exponent": repr(cfg.heating.exponent),
                             "reference_n": repr(cfg.heating.reference_n)}
    buf = io.StringIO()
    parser.write(buf)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(buf.getvalue())
