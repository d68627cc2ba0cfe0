"""Sweep experiments, synthetic data generation and calibration steps.

Every driver is deterministic: rows are emitted in ascending axis order
(never completion order), randomness enters only through explicit seeds,
and grid points are evaluated as vectorized numpy expressions or plain
loops over stateless functions, so results are independent of evaluation
order.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, InvalidInputError
from ..fitters import FitProblem, fit_lorentzian
from ..model import (angular_to_hz, hz_to_angular, operating_point,
                     state_for_cooperativity)
from ..scattering import (ComplexSpectrum, conversion_efficiency,
                          conversion_spectrum, eit_reflection,
                          reflection_on_resonance, s11_single)
from ..thermal import (COOP_REGIME_THRESHOLD, NoiseBudget, added_noise,
                       cooled_occupancy, heating_occupancy)
from .dataio import ResultTable


@dataclass(frozen=True)
class SweepAxis:
    """One named sweep axis with explicit values."""

    name: str
    values: np.ndarray

    def __post_init__(self):
        vals = np.sort(np.asarray(self.values, dtype=float))
        if vals.size == 0 or not np.all(np.isfinite(vals)):
            raise InvalidInputError(f"axis {self.name!r} must be nonempty and finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def linear(cls, name, start, stop, num):
        return cls(name, np.linspace(start, stop, num))

    @classmethod
    def log(cls, name, start, stop, num):
        if start <= 0.0 or stop <= 0.0:
            raise InvalidInputError("log axis needs positive endpoints")
        return cls(name, np.geomspace(start, stop, num))

    @classmethod
    def db_steps(cls, name, start, stop, step):
        n = int(round((stop - start) / step)) + 1
        return cls(name, start + step * np.arange(n))


@dataclass(frozen=True)
class SweepSpec:
    """Axis definitions plus requested outputs and the sweep seed."""

    axes: tuple
    outputs: tuple = ()
    seed: int | None = None

    def __post_init__(self):
        if len(self.axes) == 0:
            raise InvalidInputError("sweep needs at least one axis")

    def axis(self, name):
        for ax in self.axes:
            if ax.name == name:
                return ax.values
        return None


@dataclass(frozen=True)
class NoiseSpec:
    """Additive complex Gaussian noise: std ``sigma`` per quadrature."""

    sigma: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0.0:
            raise InvalidInputError(f"sigma must be >= 0, got {self.sigma}")


def default_power_grid():
    """The stock drive-power grid: 8 x 7 = 56 power combinations."""
    return SweepSpec(axes=(SweepAxis.db_steps("p1", -14.0, 0.0, 2.0),
                           SweepAxis.db_steps("p2", -10.0, 2.0, 2.0)))


def run_cooperativity_grid(cfg, spec=None):
    """Closed-form scattering parameters over a cooperativity grid.

    The grid is given either directly (axes ``c1``, ``c2``) or as source
    powers (axes ``p1``, ``p2`` in dBm) that are mapped to cooperativities
    through the device parameters.  Rows are sorted by the axes and hold
    {c1, c2, s11, s22, t2} (plus p1_dbm/p2_dbm in power mode).
    """
    if spec is None:
        spec = default_power_grid()
    eta = cfg.eta()
    c1_axis, c2_axis = spec.axis("c1"), spec.axis("c2")
    p1_axis, p2_axis = spec.axis("p1"), spec.axis("p2")
    rows = []
    if c1_axis is not None and c2_axis is not None:
        columns = ("c1", "c2", "s11", "s22", "t2")
        for c1 in c1_axis:
            for c2 in c2_axis:
                rows.append((c1, c2,
                             reflection_on_resonance(c1, c2, eta[0]),
                             reflection_on_resonance(c2, c1, eta[1]),
                             conversion_efficiency((c1, c2), eta)))
        meta = {"grid": "cooperativity"}
    elif p1_axis is not None and p2_axis is not None:
        columns = ("p1_dbm", "p2_dbm", "c1", "c2", "s11", "s22", "t2")
        for p1 in p1_axis:
            for p2 in p2_axis:
                state = operating_point(
                    cfg.with_drive_powers(p1, p2).drives, cfg.resonators, cfg.mech)
                c1, c2 = state.coop
                rows.append((p1, p2, c1, c2,
                             reflection_on_resonance(c1, c2, eta[0]),
                             reflection_on_resonance(c2, c1, eta[1]),
                             conversion_efficiency((c1, c2), eta)))
        meta = {"grid": "power"}
    else:
        raise InvalidInputError("grid needs axes (c1, c2) or (p1, p2)")
    meta["eta"] = list(eta)
    return ResultTable(columns=columns, rows=rows, meta=meta)


def run_bandwidth_sweep(cfg, coops, span_factor=8.0, points=2001, tol=0.01):
    """Conversion bandwidth versus matched cooperativity.

    For each C the transmission spectrum is generated over a span of
    ``span_factor`` total linewidths, fitted to a Lorentzian, and compared
    against the expected width (1 + 2C) gamma_m.
    """
    rows = []
    g0s = tuple(d.g0 for d in cfg.drives)
    failures = []
    for c in sorted(float(c) for c in coops):
        state = state_for_cooperativity(cfg.resonators, cfg.mech, (c, c), g0s)
        span = span_factor * state.total_linewidth
        delta = np.linspace(-span / 2.0, span / 2.0, points)
        spec = conversion_spectrum(cfg.resonators, cfg.mech, state, delta)
        expected_hz = angular_to_hz(state.total_linewidth)
        try:
            res = fit_lorentzian(FitProblem(model="lorentzian",
                                            data=((spec.freq, spec.power),)))
            fwhm = res.params["fwhm_hz"]
            peak = res.params["peak"] + res.params["offset"]
            ok = res.converged and abs(fwhm - expected_hz) <= tol * expected_hz
        except InvalidInputError as exc:
            failures.append(f"C={c}: {exc}")
            fwhm, peak, ok = float("nan"), float("nan"), False
        rows.append((c, fwhm, peak, expected_hz, ok))
    meta = {"span_factor": span_factor, "points": points, "tolerance": tol}
    if failures:
        meta["failures"] = failures
    return ResultTable(columns=("coop", "fwhm_hz", "peak", "expected_fwhm_hz",
                                "within_tol"), rows=rows, meta=meta)


def run_noise_budget(cfg, power_pairs, threshold=COOP_REGIME_THRESHOLD):
    """Added-noise budget over drive power combinations.

    Chains drive powers -> photon numbers -> resonator occupancies (power
    law) -> cooled mechanical occupancy -> added output noise.  Points with
    either cooperativity at or below ``threshold`` are flagged out-of-regime
    and their added noise is reported as NaN instead of extrapolated.
    """
    if cfg.heating is None:
        raise ConfigError("noise budget requires a [heating] model in the config")
    eta = cfg.eta()
    rows = []
    for p1, p2 in sorted((float(a), float(b)) for a, b in power_pairs):
        state = operating_point(cfg.with_drive_powers(p1, p2).drives,
                                cfg.resonators, cfg.mech)
        n_res = tuple(heating_occupancy(cfg.heating, n) if n > 0.0 else 0.0
                      for n in state.n_drive)
        c1, c2 = state.coop
        # weighted-bath cooling by both drives at once
        n_mech = (cfg.mech.n_bath + c1 * n_res[0] + c2 * n_res[1]) / (1.0 + c1 + c2)
        in_regime = c1 > threshold and c2 > threshold
        if in_regime:
            n_add = added_noise(eta, n_res, n_mech)
        else:
            n_add = (float("nan"), float("nan"))
        budget = NoiseBudget(n_mech=n_mech, n_res=n_res, n_add=n_add)
        rows.append((p1, p2, c1, c2, budget.n_res[0], budget.n_res[1],
                     budget.n_mech, budget.n_add[0], budget.n_add[1],
                     in_regime))
    return ResultTable(columns=("p1_dbm", "p2_dbm", "c1", "c2", "n_res1",
                                "n_res2", "n_mech", "n_add1", "n_add2",
                                "in_regime"),
                       rows=rows, meta={"coop_threshold": threshold})


def run_cooling_curve(cfg, drive_index, powers_dbm):
    """Single-tone sideband cooling: occupancy versus drive power."""
    if drive_index not in (1, 2):
        raise InvalidInputError(f"drive_index must be 1 or 2, got {drive_index}")
    i = drive_index - 1
    rows = []
    for p in sorted(float(p) for p in powers_dbm):
        powers = [-math.inf, -math.inf]
        powers[i] = p
        state = operating_point(cfg.with_drive_powers(*powers).drives,
                                cfg.resonators, cfg.mech)
        n = state.n_drive[i]
        if cfg.heating is not None and n > 0.0:
            n_res = heating_occupancy(cfg.heating, n)
        else:
            n_res = 0.0
        n_mech = cooled_occupancy(cfg.mech.n_bath, state.coop[i], n_res)
        rows.append((p, n, state.coop[i], n_res, n_mech))
    return ResultTable(columns=("p_dbm", "n_drive", "coop", "n_res", "n_mech"),
                       rows=rows, meta={"drive": drive_index,
                                        "n_bath": cfg.mech.n_bath})


def run_dynamic_range(cfg, flux, eta1_bounds=(0.85, 0.92),
                      eta2_bounds=(0.64, 0.68)):
    """Conversion efficiency versus input signal flux (ideal linear model).

    The converter model is linear, so |T|^2 is flat in signal flux; the
    emitted band is the efficiency evaluated at the lower and upper
    waveguide-coupling bounds.  Compression physics is out of scope, which
    is recorded in the table metadata.
    """
    state = operating_point(cfg.drives, cfg.resonators, cfg.mech)
    coop = state.coop
    t2 = conversion_efficiency(coop, cfg.eta())
    internal = 4.0 * coop[0] * coop[1] / (1.0 + coop[0] + coop[1]) ** 2
    band_low = internal * eta1_bounds[0] * eta2_bounds[0]
    band_high = internal * eta1_bounds[1] * eta2_bounds[1]
    rows = [(float(f), t2, band_low, band_high)
            for f in sorted(float(f) for f in flux)]
    return ResultTable(columns=("flux_per_s", "t2", "band_low", "band_high"),
                       rows=rows,
                       meta={"c1": coop[0], "c2": coop[1],
                             "eta1_bounds": list(eta1_bounds),
                             "eta2_bounds": list(eta2_bounds),
                             "compression": "not modeled (ideal linear response)"})


def synthesize_spectrum(cfg, model_id, freq_hz, noise=None, port=1):
    """Forward-model a spectrum plus optional noise; returns (spectrum, truth).

    ``truth`` is the sidecar dictionary of generating parameters that the
    fit round-trip tests compare against.  With a NoiseSpec, complex
    Gaussian noise of std ``sigma`` per quadrature is added, seeded and
    therefore reproducible.
    """
    if port not in (1, 2):
        raise InvalidInputError(f"port must be 1 or 2, got {port}")
    freq_hz = np.asarray(freq_hz, dtype=float)
    omega = hz_to_angular(freq_hz)
    i = port - 1
    res = cfg.resonators[i]
    cal = cfg.calibrations[i]
    meta = "S11" if port == 1 else "S22"
    truth = {"model": model_id, "port": port}

    if model_id == "single-reflection":
        values = s11_single(res, cal, omega)
        truth.update({
            "f0_hz": angular_to_hz(res.omega),
            "kappa_hz": angular_to_hz(res.kappa),
            "kappa_ex_hz": angular_to_hz(res.kappa_ex),
            "phase_rad": cal.phase_offset,
            "delay_s": cal.delay,
            "eta": res.eta,
        })
    elif model_id == "two-mode-eit":
        state = operating_point(cfg.drives, cfg.resonators, cfg.mech)
        detunings = tuple(d.detuning(r, cfg.mech)
                          for d, r in zip(cfg.drives, cfg.resonators))
        w_rot = omega - cfg.drives[i].drive_frequency(res, cfg.mech)
        values = cal.factor(omega) * eit_reflection(
            cfg.resonators, cfg.mech, state, port, w_rot, detunings)
        truth.update({
            "g1_hz": angular_to_hz(state.g[0]),
            "g2_hz": angular_to_hz(state.g[1]),
            "gamma_m_hz": angular_to_hz(cfg.mech.gamma_m),
            "f_m_hz": angular_to_hz(cfg.mech.omega_m),
            "c1": state.coop[0],
            "c2": state.coop[1],
        })
    else:
        raise InvalidInputError(f"unknown synthesis model {model_id!r}")

    if noise is not None and noise.sigma > 0.0:
        rng = np.random.default_rng(noise.seed)
        values = values + noise.sigma * (rng.standard_normal(freq_hz.size)
                                         + 1j * rng.standard_normal(freq_hz.size))
        truth.update({"noise_sigma": noise.sigma, "seed": noise.seed})
    else:
        truth.update({"noise_sigma": 0.0})
    return ComplexSpectrum(freq=freq_hz, value=values, meta=meta), truth


def transmission_calibration(s21_raw, s12_raw, offres_s11, offres_s22):
    """Calibrated bidirectional conversion efficiency |T|^2 from raw data.

    Input-line attenuations and output-line gains cancel in the product of
    the two raw transmission magnitudes divided by the geometric mean of
    the off-resonant reflection levels measured on both ports.
    """
    for v in (s21_raw, s12_raw, offres_s11, offres_s22):
        if v <= 0.0:
            raise InvalidInputError("calibration inputs must be > 0")
    return s21_raw * s12_raw / math.sqrt(offres_s11 * offres_s22)
