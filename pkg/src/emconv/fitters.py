"""Inverse problem: recover device parameters from measured spectra.

A damped Gauss-Newton (Levenberg-Marquardt) engine with numeric central
difference Jacobians drives every fit.  Complex spectra are fitted on the
stacked real and imaginary residuals, never on the magnitude alone.  All
fitter surfaces accept and report ordinary frequency [Hz]; conversion to
angular rates happens inside the forward models.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InitializationError, InvalidInputError
from .model import TWO_PI
from .scattering import ComplexSpectrum

FIT_MODELS = ("single-reflection", "two-mode-eit", "lorentzian", "power-law")

# central differences: optimal relative step ~ cbrt(machine epsilon)
_DIFF_STEP = float(np.finfo(float).eps) ** (1.0 / 3.0)


@dataclass
class FitResult:
    """Outcome of one least-squares fit."""

    params: dict                 # named parameter estimates
    covariance: np.ndarray       # covariance over param_names (symmetric PSD)
    param_names: tuple           # row/column order of ``covariance``
    residual_norm: float         # final residual 2-norm
    iterations: int              # accepted Levenberg-Marquardt steps
    converged: bool
    message: str = ""
    active_bounds: tuple = ()    # names of parameters pinned at a bound
    derived: dict = field(default_factory=dict)

    def stderr(self, name):
        """Standard error of one fitted parameter."""
        i = self.param_names.index(name)
        return math.sqrt(max(self.covariance[i, i], 0.0))


@dataclass
class FitProblem:
    """A forward model identifier plus the data and options for its fit.

    ``data`` holds ComplexSpectrum objects for the complex models and
    ``(x, y)`` array pairs for the real-valued ones.  ``fixed`` carries
    model context that is held constant (e.g. resonator parameters and
    line calibrations for the two-mode EIT fit).
    """

    model: str
    data: tuple
    initial_guess: dict | None = None
    bounds: dict | None = None     # name -> (lo, hi)
    weights: tuple | None = None   # per-point multipliers, one array per dataset
    fixed: dict | None = None

    def __post_init__(self):
        if self.model not in FIT_MODELS:
            raise InvalidInputError(f"unknown fit model {self.model!r}")
        if len(self.data) == 0:
            raise InvalidInputError("fit problem needs at least one dataset")
        if self.initial_guess and self.bounds:
            for name, (lo, hi) in self.bounds.items():
                v = self.initial_guess.get(name)
                if v is not None and not lo <= v <= hi:
                    raise InvalidInputError(
                        f"initial guess {name}={v} outside bounds [{lo}, {hi}]")


# ----------------------------------------------------------------------
# Levenberg-Marquardt engine
# ----------------------------------------------------------------------

@dataclass
class MinimizeResult:
    x: np.ndarray
    cost: float                # sum of squared residuals
    grad_norm: float           # scaled gradient infinity norm
    iterations: int
    converged: bool
    message: str
    jacobian: np.ndarray       # at the solution
    residual: np.ndarray
    active: np.ndarray         # bool mask of parameters pinned at a bound


def numeric_jacobian(fun, x, x_scale=None, rel_step=_DIFF_STEP, bounds=None,
                     f0=None):
    """Central-difference Jacobian of a vector function.

    Steps are ``rel_step * x_scale`` per parameter; evaluation points are
    clipped into ``bounds`` and the actual point separation is used in the
    denominator, so columns stay correct next to an active bound.  ``f0``
    (the residual at ``x``) is only used for its shape and may be passed to
    save one evaluation.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    scale = _default_scale(x, x_scale)
    lo, hi = _expand_bounds(bounds, n)
    if f0 is None:
        f0 = np.asarray(fun(x), dtype=float)
    jac = np.zeros((f0.size, n))
    for j in range(n):
        h = rel_step * scale[j]
        xp, xm = x.copy(), x.copy()
        xp[j] = min(x[j] + h, hi[j])
        xm[j] = max(x[j] - h, lo[j])
        dx = xp[j] - xm[j]
        if dx == 0.0:
            continue
        jac[:, j] = (np.asarray(fun(xp), float) - np.asarray(fun(xm), float)) / dx
    return jac


def _default_scale(x, x_scale):
    if x_scale is None:
        return np.maximum(np.abs(x), 1.0)
    scale = np.asarray(x_scale, dtype=float)
    if np.any(scale <= 0.0):
        raise InvalidInputError("x_scale entries must be > 0")
    return scale


def _expand_bounds(bounds, n):
    if bounds is None:
        return np.full(n, -np.inf), np.full(n, np.inf)
    lo = np.asarray(bounds[0], dtype=float)
    hi = np.asarray(bounds[1], dtype=float)
    if np.any(lo > hi):
        raise InvalidInputError("lower bounds exceed upper bounds")
    return lo, hi


def minimize(residual, x0, bounds=None, x_scale=None, gtol=1e-10, xtol=1e-10,
             ftol=1e-10, max_iter=200, lambda0=1e-4):
    """Damped Gauss-Newton least squares with numeric central differences.

    Minimizes ``sum(residual(x)**2)`` inside optional box bounds.  The
    inner iteration works on scaled variables x / x_scale so the normal
    equations stay well conditioned for parameters of wildly different
    magnitude.  Stops on the scaled gradient infinity norm (< gtol), the
    scaled step norm (< xtol) or the relative cost decrease (< ftol);
    hitting ``max_iter`` returns a diagnostic result with
    ``converged=False``.

    Parameters pinned at a bound are reported through ``active`` and are
    frozen out of the Jacobian columns automatically by the clipped steps.
    """
    x = np.asarray(x0, dtype=float).copy()
    n = x.size
    scale = _default_scale(x, x_scale)
    lo, hi = _expand_bounds(bounds, n)
    if np.any(x < lo) or np.any(x > hi):
        raise InvalidInputError("initial guess outside bounds")

    # scaled coordinates: z = x / scale
    z = x / scale
    zlo, zhi = lo / scale, hi / scale

    def resid_z(zv):
        return np.asarray(residual(zv * scale), dtype=float)

    r = resid_z(z)
    if not np.all(np.isfinite(r)):
        raise InvalidInputError("residual is not finite at the initial guess")
    cost = float(r @ r)
    lam = lambda0
    iterations = 0
    converged = False
    message = "maximum iterations reached"
    jac_z = np.zeros((r.size, n))
    grad_norm = np.inf

    for _ in range(max_iter):
        jac_z = numeric_jacobian(resid_z, z, np.ones(n), bounds=(zlo, zhi),
                                 f0=r)
        jtj = jac_z.T @ jac_z
        grad = jac_z.T @ r
        grad_norm = float(np.max(np.abs(grad))) if n else 0.0
        if grad_norm < gtol:
            converged, message = True, "gradient tolerance reached"
            break

        diag = np.diag(jtj).copy()
        floor = 1e-12 * max(diag.max(), 1e-300)
        diag = np.maximum(diag, floor)

        accepted = False
        for _ in range(60):
            try:
                step = np.linalg.solve(jtj + lam * np.diag(diag), -grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            z_new = np.clip(z + step, zlo, zhi)
            actual = z_new - z
            r_new = resid_z(z_new)
            cost_new = float(r_new @ r_new)
            predicted = -(2.0 * grad @ actual + actual @ jtj @ actual)
            if np.isfinite(cost_new) and cost_new < cost:
                rho = (cost - cost_new) / predicted if predicted > 0.0 else 1.0
                lam = max(lam * max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0) ** 3), 1e-14)
                accepted = True
                break
            lam *= 4.0
            if lam > 1e16:
                break
        if not accepted:
            converged, message = True, "no further cost reduction possible"
            break

        iterations += 1
        step_norm = float(np.linalg.norm(actual))
        z_norm = float(np.linalg.norm(z))
        cost_drop = cost - cost_new
        z, r, cost = z_new, r_new, cost_new
        # a tiny step only signals convergence once damping has relaxed;
        # with lam large it is a trust-region artifact, not a minimum
        if step_norm < xtol * (xtol + z_norm) and lam <= 1.0:
            converged, message = True, "step tolerance reached"
            break
        # require the quadratic model to agree that nothing is left
        if (cost_drop <= ftol * max(cost, 1e-300)
                and predicted <= ftol * max(cost, 1e-300) and lam <= 1.0):
            converged, message = True, "cost tolerance reached"
            break

    x = z * scale
    active = (z <= zlo + 1e-10) | (z >= zhi - 1e-10)
    # report the Jacobian with respect to the unscaled parameters
    jac = jac_z / scale
    return MinimizeResult(x=x, cost=cost, grad_norm=grad_norm,
                          iterations=iterations, converged=converged,
                          message=message, jacobian=jac, residual=r,
                          active=active)


def _covariance(result):
    """Parameter covariance sigma^2 (J^T J)^-1 from the final Jacobian."""
    jac, r = result.jacobian, result.residual
    m, n = jac.shape
    dof = max(m - n, 1)
    sigma2 = float(r @ r) / dof
    cov = sigma2 * np.linalg.pinv(jac.T @ jac, hermitian=True)
    return 0.5 * (cov + cov.T)


def _pack_result(result, names, derived=None, message=None):
    params = dict(zip(names, (float(v) for v in result.x)))
    active = tuple(nm for nm, a in zip(names, result.active) if a)
    return FitResult(params=params, covariance=_covariance(result),
                     param_names=tuple(names),
                     residual_norm=math.sqrt(result.cost),
                     iterations=result.iterations, converged=result.converged,
                     message=message or result.message,
                     active_bounds=active, derived=derived or {})


# ----------------------------------------------------------------------
# Forward models (parameterized in Hz for conditioning and reporting)
# ----------------------------------------------------------------------

def reflection_model(freq_hz, f0_hz, kappa_hz, kappa_ex_hz, phase_rad, delay_s):
    """Single-resonator reflection with phase offset and cable delay."""
    omega = TWO_PI * np.asarray(freq_hz, dtype=float)
    dip = 1.0 - TWO_PI * kappa_ex_hz / (TWO_PI * kappa_hz / 2.0
                                        + 1j * (TWO_PI * f0_hz - omega))
    return np.exp(-1j * (phase_rad + omega * delay_s)) * dip


def eit_model(freq_hz, port, g1_hz, g2_hz, gamma_m_hz, f_m_hz, resonators,
              drive_freqs, cal):
    """Two-drive reflection at one port, evaluated on lab-frame frequencies."""
    omega_lab = TWO_PI * np.asarray(freq_hz, dtype=float)
    i = port - 1
    w = omega_lab - drive_freqs[i]          # rotating-frame coordinate
    deltas = [res.omega - wd for res, wd in zip(resonators, drive_freqs)]
    g = (TWO_PI * g1_hz, TWO_PI * g2_hz)
    chi = [1.0 / (res.kappa / 2.0 + 1j * (d - w))
           for res, d in zip(resonators, deltas)]
    chi_m = 1.0 / (TWO_PI * gamma_m_hz / 2.0 + 1j * (TWO_PI * f_m_hz - w))
    denom = 1.0 + chi_m * (g[0] ** 2 * chi[0] + g[1] ** 2 * chi[1])
    j = 1 - i
    bare = 1.0 - resonators[i].kappa_ex * chi[i] \
        * (1.0 + g[j] ** 2 * chi_m * chi[j]) / denom
    return cal.factor(omega_lab) * bare


def lorentzian_model(x, center, fwhm, peak, offset):
    half = fwhm / 2.0
    return offset + peak * half ** 2 / ((np.asarray(x, float) - center) ** 2 + half ** 2)


# ----------------------------------------------------------------------
# Initialization heuristics
# ----------------------------------------------------------------------

def _offres_mask(n, edge_fraction=0.15):
    edge = max(3, int(n * edge_fraction))
    mask = np.zeros(n, dtype=bool)
    mask[:edge] = True
    mask[-edge:] = True
    return mask


def _estimate_calibration(freq_hz, values, f_center_hz):
    """Delay from the off-resonant phase slope, center phase from its mean.

    Working relative to the window center keeps the phase estimate local
    instead of extrapolating hundreds of radians down to DC.
    """
    omega = TWO_PI * (freq_hz - f_center_hz)
    mask = _offres_mask(freq_hz.size)
    phase = np.unwrap(np.angle(values[mask]))
    slope, intercept = np.polyfit(omega[mask], phase, 1)
    phi_center = math.remainder(-intercept, TWO_PI)
    return phi_center, max(-slope, 0.0)


def _estimate_resonance(freq_hz, corrected):
    """Dip position, linewidth and coupling from a calibrated reflection."""
    mag = np.abs(corrected)
    n = mag.size
    idx = int(np.argmin(mag))
    if idx < max(2, n // 50) or idx > n - 1 - max(2, n // 50):
        raise InitializationError("no resonance bracketed by the data window")
    baseline = float(np.median(mag[_offres_mask(n)]))
    depth = baseline - mag[idx]
    noise = float(np.median(np.abs(np.diff(mag)))) + 1e-12
    if depth < max(0.01, 5.0 * noise):
        raise InitializationError("no resonance dip found in the data window")
    half = baseline - depth / 2.0
    left = idx
    while left > 0 and mag[left] < half:
        left -= 1
    right = idx
    while right < n - 1 and mag[right] < half:
        right += 1
    width_hz = max(freq_hz[right] - freq_hz[left], freq_hz[1] - freq_hz[0])
    eta = (1.0 - float(np.real(corrected[idx]))) / 2.0
    eta = min(max(eta, 0.02), 0.995)
    return float(freq_hz[idx]), float(width_hz), eta


def _find_narrow_feature(freq_hz, deviation):
    """Locate the mechanical feature from the data-minus-bare deviation.

    ``deviation`` is the measured window minus the drives-off prediction of
    the fixed resonator parameters, so a mechanical feature is the only
    structure left.  Returns (center_hz, width_hz, contrast) or None when
    nothing stands out of the noise.
    """
    resid = np.abs(deviation)
    n = resid.size
    idx = int(np.argmax(resid))
    contrast = float(resid[idx])
    floor = float(np.median(resid))
    if contrast < max(1e-3, 8.0 * floor):
        return None
    half = contrast / 2.0
    left = idx
    while left > 0 and resid[left] > half:
        left -= 1
    right = idx
    while right < n - 1 and resid[right] > half:
        right += 1
    width_hz = max(float(freq_hz[right] - freq_hz[left]),
                   float(freq_hz[1] - freq_hz[0]))
    return float(freq_hz[idx]), width_hz, contrast


# ----------------------------------------------------------------------
# Fitters
# ----------------------------------------------------------------------

def _stacked_residual(model, data_values, weights):
    if weights is None:
        def residual(x):
            diff = model(x) - data_values
            return np.concatenate([diff.real, diff.imag])
    else:
        w = np.asarray(weights, dtype=float)

        def residual(x):
            diff = (model(x) - data_values) * w
            return np.concatenate([diff.real, diff.imag])
    return residual


def fit_single_reflection(problem):
    """Fit one complex reflection spectrum to the single-resonator model.

    Parameters fitted: f0_hz, kappa_hz, kappa_ex_hz, phase_rad, delay_s.
    The waveguide coupling ratio eta is reported under ``derived``.

    Internally the calibration phase is referenced to the window center
    (phi_c = phi + omega_c tau), which decorrelates it from the delay; the
    reported phase and its covariance are transformed back to the DC
    reference of the model.  Because of that substitution a box bound on
    phase_rad cannot be honored and is rejected.
    """
    spec = problem.data[0]
    if not isinstance(spec, ComplexSpectrum):
        raise InvalidInputError("single-reflection fit expects a ComplexSpectrum")
    freq, values = spec.freq, spec.value
    f_center = float(0.5 * (freq[0] + freq[-1]))
    w_center = TWO_PI * f_center

    guess = dict(problem.initial_guess or {})
    names = ("f0_hz", "kappa_hz", "kappa_ex_hz", "phase_rad", "delay_s")
    if not set(names) <= set(guess):
        phic0, tau0 = _estimate_calibration(freq, values, f_center)
        corrected = values * np.exp(
            1j * (phic0 + TWO_PI * (freq - f_center) * tau0))
        f0, width, eta = _estimate_resonance(freq, corrected)
        guess.setdefault("f0_hz", f0)
        guess.setdefault("kappa_hz", width)
        guess.setdefault("kappa_ex_hz", eta * width)
        guess.setdefault("phase_rad", math.remainder(phic0 - w_center * tau0,
                                                     TWO_PI))
        guess.setdefault("delay_s", tau0)

    x0 = np.array([guess[n] for n in names])
    x0[3] = x0[3] + w_center * x0[4]          # -> center-referenced phase
    span = freq[-1] - freq[0]
    dfreq = span / max(freq.size - 1, 1)
    default_bounds = {
        "f0_hz": (freq[0], freq[-1]),
        "kappa_hz": (dfreq / 10.0, 10.0 * span),
        "kappa_ex_hz": (0.0, 10.0 * span),
        "phase_rad": (-np.inf, np.inf),
        "delay_s": (0.0, np.inf),
    }
    lo, hi = _named_bounds(names, default_bounds, problem.bounds)
    if np.isfinite(lo[3]) or np.isfinite(hi[3]):
        raise InvalidInputError("phase_rad cannot be bounded in this fit")
    scale = np.array([max(x0[1], dfreq), max(x0[1], dfreq),
                      max(x0[2], dfreq), 1.0, max(x0[4], 1e-9)])
    weights = problem.weights[0] if problem.weights else None

    def model(x):
        phi = x[3] - w_center * x[4]
        return reflection_model(freq, x[0], x[1], x[2], phi, x[4])

    res = minimize(_stacked_residual(model, values, weights), x0,
                   bounds=(lo, hi), x_scale=scale)
    # back to the DC phase reference: phi = phi_c - omega_c tau; the
    # Jacobian picks up d(phi_c)/d(phi, tau) = (1, +omega_c)
    res.x = res.x.copy()
    res.x[3] = math.remainder(res.x[3] - w_center * res.x[4], TWO_PI)
    to_internal = np.eye(5)
    to_internal[3, 4] = w_center
    res.jacobian = res.jacobian @ to_internal
    eta = res.x[2] / res.x[1] if res.x[1] > 0.0 else float("nan")
    return _pack_result(res, names, derived={"eta": float(eta)})


def fit_two_mode_eit(problem):
    """Joint fit of both reflection windows with both drive tones on.

    Fits a single parameter set (g1_hz, g2_hz, gamma_m_hz, f_m_hz) against
    the two spectra simultaneously; resonator parameters, drive frequencies
    and per-window line calibrations are held fixed from a prior fit and are
    supplied through ``problem.fixed`` (keys: resonators, drive_freqs,
    calibrations).  Cooperativities c1, c2 are reported under ``derived``.
    """
    if len(problem.data) != 2:
        raise InvalidInputError("two-mode EIT fit expects one spectrum per port")
    fixed = problem.fixed or {}
    try:
        resonators = fixed["resonators"]
        drive_freqs = fixed["drive_freqs"]
        calibrations = fixed["calibrations"]
    except KeyError as exc:
        raise InvalidInputError(f"missing fixed context {exc} for EIT fit") from exc

    names = ("g1_hz", "g2_hz", "gamma_m_hz", "f_m_hz")
    guess = dict(problem.initial_guess or {})
    if not set(names) <= set(guess):
        feats = []
        for port, spec in enumerate(problem.data, start=1):
            bare = eit_model(spec.freq, port, 0.0, 0.0, 1.0, 0.0, resonators,
                             drive_freqs, calibrations[port - 1])
            rot = spec.freq - drive_freqs[port - 1] / TWO_PI
            feats.append(_find_narrow_feature(rot, spec.value - bare))
        if all(f is None for f in feats):
            return _unidentifiable_result(names)
        best = max((f for f in feats if f is not None), key=lambda f: f[2])
        f_m0, width0 = best[0], best[1]
        gamma0 = max(width0 * 0.05, 1e-3)
        per_mode = max((width0 - gamma0) / 2.0, gamma0)
        g0 = [math.sqrt(per_mode * res.kappa / TWO_PI) / 2.0 for res in resonators]
        guess.setdefault("g1_hz", g0[0])
        guess.setdefault("g2_hz", g0[1])
        guess.setdefault("gamma_m_hz", gamma0)
        guess.setdefault("f_m_hz", f_m0)

    x0 = np.array([guess[n] for n in names])
    spans = [s.freq[-1] - s.freq[0] for s in problem.data]
    default_bounds = {
        "g1_hz": (0.0, np.inf),
        "g2_hz": (0.0, np.inf),
        "gamma_m_hz": (1e-6, max(spans)),
        "f_m_hz": (-np.inf, np.inf),
    }
    lo, hi = _named_bounds(names, default_bounds, problem.bounds)
    scale = np.array([max(x0[0], 1.0), max(x0[1], 1.0),
                      max(x0[2], 0.1), max(x0[2] * 10.0, 10.0)])

    all_values = np.concatenate([s.value for s in problem.data])
    if problem.weights:
        weights = np.concatenate([np.asarray(w, float) for w in problem.weights])
    else:
        weights = None

    def model(x):
        parts = [eit_model(spec.freq, port, x[0], x[1], x[2], x[3],
                           resonators, drive_freqs, calibrations[port - 1])
                 for port, spec in enumerate(problem.data, start=1)]
        return np.concatenate(parts)

    res = minimize(_stacked_residual(model, all_values, weights), x0,
                   bounds=(lo, hi), x_scale=scale)
    gamma = res.x[2]
    coop = [4.0 * (TWO_PI * res.x[i]) ** 2 / (r.kappa * TWO_PI * gamma)
            for i, r in enumerate(resonators)]
    return _pack_result(res, names,
                        derived={"c1": float(coop[0]), "c2": float(coop[1])})


def _unidentifiable_result(names):
    nan = float("nan")
    return FitResult(params={n: nan for n in names},
                     covariance=np.full((len(names), len(names)), nan),
                     param_names=tuple(names), residual_norm=nan,
                     iterations=0, converged=False,
                     message="no mechanical feature visible; "
                             "mechanical parameters unidentifiable")


def fit_lorentzian(problem):
    """Fit a real-valued power spectrum to a Lorentzian plus offset.

    Parameters fitted: center_hz, fwhm_hz, peak, offset.
    """
    x, y = _xy_data(problem.data[0])
    guess = dict(problem.initial_guess or {})
    if not {"center_hz", "fwhm_hz", "peak", "offset"} <= set(guess):
        offset0 = float(np.median(np.concatenate([y[:3], y[-3:]])))
        idx = int(np.argmax(y))
        peak0 = float(y[idx] - offset0)
        if peak0 <= 0.0:
            raise InitializationError("no peak found in the data window")
        half = offset0 + peak0 / 2.0
        left = idx
        while left > 0 and y[left] > half:
            left -= 1
        right = idx
        while right < y.size - 1 and y[right] > half:
            right += 1
        width0 = max(float(x[right] - x[left]), float(x[1] - x[0]))
        guess.setdefault("center_hz", float(x[idx]))
        guess.setdefault("fwhm_hz", width0)
        guess.setdefault("peak", peak0)
        guess.setdefault("offset", offset0)

    names = ("center_hz", "fwhm_hz", "peak", "offset")
    x0 = np.array([guess[n] for n in names])
    span = float(x[-1] - x[0])
    default_bounds = {
        "center_hz": (float(x[0]), float(x[-1])),
        "fwhm_hz": (float(x[1] - x[0]) / 10.0, 10.0 * span),
        "peak": (0.0, np.inf),
        "offset": (-np.inf, np.inf),
    }
    lo, hi = _named_bounds(names, default_bounds, problem.bounds)
    scale = np.array([max(x0[1], span / 100.0), max(x0[1], span / 100.0),
                      max(abs(x0[2]), 1e-6), max(abs(x0[2]), 1e-6)])
    weights = problem.weights[0] if problem.weights else None

    def residual(p):
        diff = lorentzian_model(x, *p) - y
        return diff if weights is None else diff * weights

    res = minimize(residual, x0, bounds=(lo, hi), x_scale=scale)
    return _pack_result(res, names)


def fit_power_law(problem, reference_x=1.0):
    """Linear least squares for amplitude and exponent on log-log data.

    The model is y = amplitude * (x / reference_x)**exponent; all data must
    be strictly positive.
    """
    x, y = _xy_data(problem.data[0])
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise InvalidInputError("power-law fit requires strictly positive data")
    lx = np.log(x / reference_x)
    ly = np.log(y)
    w = problem.weights[0] if problem.weights else np.ones_like(lx)
    design = np.vstack([np.ones_like(lx), lx]).T * np.asarray(w)[:, None]
    target = ly * w
    coef, _, _, _ = np.linalg.lstsq(design, target, rcond=None)
    fitted = design @ coef
    r = target - fitted
    dof = max(lx.size - 2, 1)
    sigma2 = float(r @ r) / dof
    cov_log = sigma2 * np.linalg.pinv(design.T @ design, hermitian=True)
    amplitude = math.exp(coef[0])
    # delta method: var(amplitude) = amplitude^2 var(log amplitude)
    cov = np.array([[amplitude ** 2 * cov_log[0, 0], amplitude * cov_log[0, 1]],
                    [amplitude * cov_log[1, 0], cov_log[1, 1]]])
    return FitResult(params={"amplitude": amplitude, "exponent": float(coef[1])},
                     covariance=0.5 * (cov + cov.T),
                     param_names=("amplitude", "exponent"),
                     residual_norm=float(np.linalg.norm(r)),
                     iterations=1, converged=True,
                     message="closed-form log-log least squares")


def fit(problem):
    """Dispatch a FitProblem to the matching fitter."""
    return {
        "single-reflection": fit_single_reflection,
        "two-mode-eit": fit_two_mode_eit,
        "lorentzian": fit_lorentzian,
        "power-law": fit_power_law,
    }[problem.model](problem)


def _xy_data(entry):
    if isinstance(entry, ComplexSpectrum):
        return entry.freq, entry.power
    x, y = entry
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 3:
        raise InvalidInputError("need matching x/y arrays with at least 3 points")
    return x, y


def _named_bounds(names, defaults, overrides):
    merged = dict(defaults)
    if overrides:
        merged.update(overrides)
    lo = np.array([merged[n][0] for n in names], dtype=float)
    hi = np.array([merged[n][1] for n in names], dtype=float)
    return lo, hi
