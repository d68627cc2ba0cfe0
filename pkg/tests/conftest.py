import numpy as np
import pytest

from emconv import angular_to_hz
from emconv.harness import preset


@pytest.fixture(scope="session")
def cfg():
    return preset("fink2018")


def snr_sigma(snr_db, amplitude=1.0):
    """Per-quadrature noise std for a given complex SNR in dB."""
    return amplitude * 10.0 ** (-snr_db / 20.0) / np.sqrt(2.0)


def window_hz(res, span_kappa, points):
    """Frequency window [Hz] centered on a resonator."""
    f0 = angular_to_hz(res.omega)
    span = span_kappa * angular_to_hz(res.kappa)
    return np.linspace(f0 - span / 2.0, f0 + span / 2.0, points)
