import math
from types import SimpleNamespace

import numpy as np
import pytest

from emconv import (ComplexSpectrum, InvalidInputError, LineCalibration,
                    MechanicalMode, ResonatorMode, SingularityError,
                    conversion_efficiency, conversion_spectrum,
                    eit_reflection, langevin_smatrix,
                    reflection_on_resonance, s11_single,
                    state_for_cooperativity)

TWO_PI = 2.0 * math.pi
CAL0 = LineCalibration(0.0, 0.0)

# mpmath, 50 digits: eta1*eta2*4*C^2/(1+2C)^2 at C=35, eta=(0.92, 0.68)
GOLDEN_EFFICIENCY = 0.6081015671493751
# (1 - 2*0.92*(1+35)/71)^2
GOLDEN_REFLECTION = 0.004494663757191034


def make_pair(kin1=34e3, kex1=389e3, kin2=169e3, kex2=360e3):
    return (ResonatorMode.from_hz(7.444e9, kin1, kex1),
            ResonatorMode.from_hz(9.308e9, kin2, kex2))


def make_mech(gamma_hz=7.0):
    return MechanicalMode.from_hz(4.118e6, gamma_hz, 60.0)


def random_system(rng, eta_range=(0.3, 0.98)):
    """A random valid red-detuned resolved-sideband operating point."""
    f_m = rng.uniform(1e6, 10e6)
    mech = MechanicalMode.from_hz(f_m, rng.uniform(1.0, 100.0), 60.0)
    resonators = []
    for f0 in (7.444e9, 9.308e9):
        kappa = rng.uniform(50e3, 500e3)
        eta = rng.uniform(*eta_range)
        resonators.append(ResonatorMode.from_hz(f0, kappa * (1.0 - eta),
                                                kappa * eta))
    coops = tuple(10.0 ** rng.uniform(-1.0, 2.3) for _ in range(2))
    state = state_for_cooperativity(resonators, mech, coops)
    return tuple(resonators), mech, state


class TestSingleReflection:
    def test_off_resonant_full_reflection(self):
        res = ResonatorMode.from_hz(7.444e9, 34e3, 389e3)
        value = s11_single(res, CAL0, res.omega + 1e6 * res.kappa)
        assert abs(value - 1.0) < 1e-5

    def test_on_resonance_overcoupled(self):
        res = ResonatorMode.from_hz(7.444e9, 423e3 * 0.08, 423e3 * 0.92)
        value = s11_single(res, CAL0, res.omega)
        assert value == pytest.approx(1.0 - 2.0 * 0.92, rel=1e-12)
        assert abs(value) ** 2 == pytest.approx(0.7056, rel=1e-12)

    def test_critical_coupling_absorbs(self):
        res = ResonatorMode.from_hz(7.444e9, 200e3, 200e3)
        assert abs(s11_single(res, CAL0, res.omega)) < 1e-14

    def test_calibration_factor(self):
        res = ResonatorMode.from_hz(7.444e9, 34e3, 389e3)
        cal = LineCalibration(0.35, 50e-9)
        omega = res.omega + 3.0 * res.kappa
        expected = np.exp(-1j * (0.35 + omega * 50e-9)) * \
            s11_single(res, CAL0, omega)
        assert s11_single(res, cal, omega) == pytest.approx(expected, rel=1e-14)

    def test_vectorized(self):
        res = ResonatorMode.from_hz(7.444e9, 34e3, 389e3)
        omega = np.linspace(res.omega - 5e6, res.omega + 5e6, 11)
        values = s11_single(res, CAL0, omega)
        assert values.shape == (11,)
        scalar = s11_single(res, CAL0, omega[5])
        assert isinstance(scalar, complex)
        assert values[5] == pytest.approx(scalar, rel=1e-14)


class TestClosedForms:
    def test_efficiency_trivial_points(self):
        assert conversion_efficiency((0.0, 10.0), (1.0, 1.0)) == 0.0
        big = conversion_efficiency((1e9, 1e9), (1.0, 1.0))
        assert big == pytest.approx(1.0, abs=1e-8)

    def test_efficiency_golden(self):
        t2 = conversion_efficiency((35.0, 35.0), (0.92, 0.68))
        assert t2 == pytest.approx(GOLDEN_EFFICIENCY, rel=1e-12)

    def test_efficiency_validation(self):
        with pytest.raises(InvalidInputError):
            conversion_efficiency((-1.0, 1.0), (1.0, 1.0))
        with pytest.raises(InvalidInputError):
            conversion_efficiency((1.0, 1.0), (0.0, 1.0))

    def test_reflection_trivial_points(self):
        assert reflection_on_resonance(0.0, 0.0, 1.0) == 1.0
        assert reflection_on_resonance(1e10, 1e10, 1.0) == pytest.approx(0.0, abs=1e-9)

    def test_reflection_golden(self):
        r = reflection_on_resonance(35.0, 35.0, 0.92)
        assert r == pytest.approx(GOLDEN_REFLECTION, rel=1e-12)


class TestEitReflection:
    def test_decoupled_matches_single(self):
        resonators = make_pair()
        mech = make_mech()
        state = state_for_cooperativity(resonators, mech, (0.0, 0.0))
        omega = np.linspace(mech.omega_m - 4e6, mech.omega_m + 4e6, 10000)
        for port in (1, 2):
            res = resonators[port - 1]
            rotated = ResonatorMode(mech.omega_m, res.kappa_in, res.kappa_ex)
            direct = s11_single(rotated, CAL0, omega)
            via_eit = eit_reflection(resonators, mech, state, port, omega)
            assert np.max(np.abs(direct - via_eit)) < 1e-12

    def test_matched_line_center_value(self):
        # eta = 1 resonators, matched C: value = 1 - 2(1+C)/(1+2C),
        # cross-checked against the matrix oracle
        mech = make_mech()
        for coop in (1.0, 35.0, 122.0):
            resonators = (ResonatorMode.from_hz(7.444e9, 0.0, 423e3),
                          ResonatorMode.from_hz(9.308e9, 0.0, 529e3))
            state = state_for_cooperativity(resonators, mech, (coop, coop))
            value = eit_reflection(resonators, mech, state, 1, mech.omega_m)
            expected = 1.0 - 2.0 * (1.0 + coop) / (1.0 + 2.0 * coop)
            assert value.real == pytest.approx(expected, rel=1e-9)
            assert abs(value.imag) < 1e-12
            oracle = langevin_smatrix(resonators, mech, state, mech.omega_m)
            assert value == pytest.approx(oracle[0, 0], rel=1e-12)

    def test_single_drive_transparency_window(self):
        # g2 = 0, C1 >> 1, eta1 = 1: line center approaches full transparency
        resonators = (ResonatorMode.from_hz(7.444e9, 0.0, 423e3),
                      ResonatorMode.from_hz(9.308e9, 169e3, 360e3))
        mech = make_mech()
        state = state_for_cooperativity(resonators, mech, (1e4, 0.0))
        value = eit_reflection(resonators, mech, state, 1, mech.omega_m)
        assert value.real == pytest.approx(1.0, abs=1e-3)

    def test_overcoupled_center_dip_and_critical_center_peak(self):
        mech = make_mech()
        # strongly overcoupled port with high matched C: reflection suppressed
        over = make_pair()
        state = state_for_cooperativity(over, mech, (30.0, 30.0))
        center = abs(eit_reflection(over, mech, state, 1, mech.omega_m)) ** 2
        bare = abs(eit_reflection(
            over, mech, state_for_cooperativity(over, mech, (0.0, 0.0)),
            1, mech.omega_m)) ** 2
        assert center < bare
        # critically coupled port: bare center absorbs fully, the mechanical
        # feature puts a peak back in the middle
        crit = (ResonatorMode.from_hz(7.444e9, 200e3, 200e3),
                ResonatorMode.from_hz(9.308e9, 169e3, 360e3))
        state = state_for_cooperativity(crit, mech, (30.0, 30.0))
        center = abs(eit_reflection(crit, mech, state, 1, mech.omega_m)) ** 2
        shoulder = abs(eit_reflection(crit, mech, state, 1,
                                      mech.omega_m + 50.0 * state.total_linewidth)) ** 2
        assert center > shoulder

    def test_port_validation(self):
        resonators = make_pair()
        mech = make_mech()
        state = state_for_cooperativity(resonators, mech, (1.0, 1.0))
        with pytest.raises(InvalidInputError):
            eit_reflection(resonators, mech, state, 3, mech.omega_m)


class TestLangevinSmatrix:
    def test_decoupled_diagonal(self):
        resonators = make_pair()
        mech = make_mech()
        state = state_for_cooperativity(resonators, mech, (0.0, 0.0))
        s = langevin_smatrix(resonators, mech, state, mech.omega_m)
        assert s[0, 0] == pytest.approx(1.0 - 2.0 * resonators[0].eta, rel=1e-12)
        assert s[1, 0] == 0.0

    def test_closed_form_equivalence_random_draws(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            resonators, mech, state = random_system(rng)
            eta = tuple(r.eta for r in resonators)
            s = langevin_smatrix(resonators, mech, state, mech.omega_m)
            t2 = conversion_efficiency(state.coop, eta)
            r1 = reflection_on_resonance(state.coop[0], state.coop[1], eta[0])
            r2 = reflection_on_resonance(state.coop[1], state.coop[0], eta[1])
            assert abs(s[1, 0]) ** 2 == pytest.approx(t2, rel=1e-9)
            assert abs(s[0, 0]) ** 2 == pytest.approx(r1, rel=1e-9, abs=1e-12)
            assert abs(s[1, 1]) ** 2 == pytest.approx(r2, rel=1e-9, abs=1e-12)

    def test_full_spectrum_equivalence_random_draws(self):
        # the single-resonator and two-drive reflection closed forms agree
        # with the matrix oracle at every frequency, 1000 random draws
        rng = np.random.default_rng(12)
        for _ in range(1000):
            resonators, mech, state = random_system(rng)
            omega = mech.omega_m + np.sort(rng.uniform(-10e6, 10e6, 20))
            s = langevin_smatrix(resonators, mech, state, omega)
            for port in (1, 2):
                closed = eit_reflection(resonators, mech, state, port, omega)
                matrix = s[..., port - 1, port - 1]
                assert np.max(np.abs(closed - matrix)) < 1e-9
            decoupled = state_for_cooperativity(resonators, mech, (0.0, 0.0))
            s0 = langevin_smatrix(resonators, mech, decoupled, omega)
            for port in (1, 2):
                res = resonators[port - 1]
                bare = s11_single(ResonatorMode(mech.omega_m, res.kappa_in,
                                                res.kappa_ex), CAL0, omega)
                assert np.max(np.abs(bare - s0[..., port - 1, port - 1])) < 1e-9

    def test_reciprocity_exact(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            resonators, mech, state = random_system(rng)
            omega = mech.omega_m + rng.uniform(-1e6, 1e6, 50)
            s = langevin_smatrix(resonators, mech, state, np.sort(omega))
            assert np.array_equal(s[..., 0, 1], s[..., 1, 0])
            assert np.array_equal(s[..., 0, 2], s[..., 2, 0])
            assert np.array_equal(s[..., 1, 2], s[..., 2, 1])

    def test_passivity(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            resonators, mech, state = random_system(rng)
            omega = mech.omega_m + np.sort(rng.uniform(-20e6, 20e6, 100))
            s = langevin_smatrix(resonators, mech, state, omega)
            assert np.max(np.abs(s) ** 2) <= 1.0

    def test_lossless_energy_bookkeeping(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            resonators, mech, state = random_system(rng)
            lossless = tuple(ResonatorMode(r.omega, 0.0, r.kappa_ex)
                             for r in resonators)
            state = state_for_cooperativity(lossless, mech, state.coop)
            omega = mech.omega_m + np.sort(rng.uniform(-5e6, 5e6, 32))
            s = langevin_smatrix(lossless, mech, state, omega)
            columns = np.sum(np.abs(s) ** 2, axis=-2)
            assert np.max(np.abs(columns - 1.0)) < 1e-9

    def test_dense_matches_arrowhead(self):
        rng = np.random.default_rng(11)
        resonators, mech, state = random_system(rng)
        omega = mech.omega_m + np.linspace(-2e6, 2e6, 21)
        dense = langevin_smatrix(resonators, mech, state, omega, method="dense")
        arrow = langevin_smatrix(resonators, mech, state, omega)
        assert np.max(np.abs(dense - arrow)) < 1e-12

    def test_singular_matrix_raises(self):
        # undamped mechanics (not constructible through MechanicalMode) makes
        # the response singular at the mechanical frequency with zero drive
        resonators = make_pair()
        mech = SimpleNamespace(omega_m=TWO_PI * 4.118e6, gamma_m=0.0)
        state = SimpleNamespace(g=(0.0, 0.0))
        with pytest.raises(SingularityError):
            langevin_smatrix(resonators, mech, state, mech.omega_m)
        with pytest.raises(SingularityError):
            langevin_smatrix(resonators, mech, state, mech.omega_m,
                             method="dense")

    def test_unknown_method(self):
        resonators = make_pair()
        mech = make_mech()
        state = state_for_cooperativity(resonators, mech, (1.0, 1.0))
        with pytest.raises(InvalidInputError):
            langevin_smatrix(resonators, mech, state, mech.omega_m, method="lu")


class TestConversionSpectrum:
    def test_peak_equals_efficiency(self):
        resonators = make_pair()
        mech = make_mech()
        state = state_for_cooperativity(resonators, mech, (35.0, 35.0))
        delta = np.linspace(-5e3, 5e3, 1001) * TWO_PI
        spec = conversion_spectrum(resonators, mech, state, delta)
        eta = tuple(r.eta for r in resonators)
        assert spec.power.max() == pytest.approx(
            conversion_efficiency(state.coop, eta), rel=1e-9)
        assert spec.meta == "S21"

    def test_axis_is_detuning_in_hz(self):
        resonators = make_pair()
        mech = make_mech()
        state = state_for_cooperativity(resonators, mech, (10.0, 10.0))
        delta = np.linspace(-1e3, 1e3, 5) * TWO_PI
        spec = conversion_spectrum(resonators, mech, state, delta)
        assert np.allclose(spec.freq, delta / TWO_PI)


class TestDataTypes:
    def test_spectrum_requires_increasing_axis(self):
        with pytest.raises(InvalidInputError):
            ComplexSpectrum(freq=np.array([2.0, 1.0]),
                            value=np.array([1.0 + 0j, 1.0]), meta="S11")

    def test_spectrum_meta_label(self):
        with pytest.raises(InvalidInputError):
            ComplexSpectrum(freq=np.array([1.0]), value=np.array([1.0 + 0j]),
                            meta="S31")

    def test_spectrum_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            ComplexSpectrum(freq=np.array([1.0, 2.0]),
                            value=np.array([1.0 + 0j]), meta="S11")

    def test_calibration_negative_delay(self):
        with pytest.raises(InvalidInputError):
            LineCalibration(0.0, -1e-9)
