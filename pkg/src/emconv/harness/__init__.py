"""Configuration, file I/O, synthetic data and sweep experiment drivers."""

from .config import DeviceConfig, load_config, preset, write_config
from .dataio import (ResultTable, read_power_spectrum, read_spectrum, read_xy,
                     write_json, write_power_spectrum, write_spectrum)
from .experiments import (NoiseSpec, SweepAxis, SweepSpec,
                          run_bandwidth_sweep, run_cooling_curve,
                          run_cooperativity_grid, run_dynamic_range,
                          run_noise_budget, synthesize_spectrum,
                          transmission_calibration)

__all__ = [
    "DeviceConfig", "load_config", "preset", "write_config",
    "ResultTable", "read_power_spectrum", "read_spectrum", "read_xy",
    "write_json", "write_power_spectrum", "write_spectrum",
    "NoiseSpec", "SweepAxis", "SweepSpec",
    "run_bandwidth_sweep", "run_cooling_curve", "run_cooperativity_grid",
    "run_dynamic_range", "run_noise_budget", "synthesize_spectrum",
    "transmission_calibration",
]
