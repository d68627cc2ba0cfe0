"""File formats: spectra, power spectra and result tables.

All files are UTF-8 CSV with LF line endings and full double precision
(17 significant digits), so repeated runs with identical inputs are
byte-identical.  Result tables carry a JSON metadata sidecar
(``<name>.meta.json``) recording parameters, seed and tool version.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .. import __version__
from ..errors import DataFormatError
from ..scattering import ComplexSpectrum


def fmt(x):
    """Render one number with 17 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_json(path, obj):
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_spectrum(path, spectrum):
    """Write a complex spectrum as ``freq_hz,re,im``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("freq_hz,re,im\n")
        for f, v in zip(spectrum.freq, spectrum.value):
            fh.write(f"{fmt(f)},{fmt(v.real)},{fmt(v.imag)}\n")


def read_spectrum(path, meta="S11"):
    """Read a ``freq_hz,re,im`` file into a ComplexSpectrum."""
    freq, re, im = _read_columns(path, 3, header="freq_hz,re,im")
    return ComplexSpectrum(freq=freq, value=re + 1j * im, meta=meta)


def write_power_spectrum(path, detuning_hz, power):
    """Write a real power spectrum as ``detuning_hz,power``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("detuning_hz,power\n")
        for d, p in zip(detuning_hz, power):
            fh.write(f"{fmt(d)},{fmt(p)}\n")


def read_power_spectrum(path):
    """Read ``detuning_hz,power`` into a pair of arrays."""
    x, y = _read_columns(path, 2, header="detuning_hz,power")
    return x, y


def read_xy(path):
    """Read any two-column numeric CSV with a single header row."""
    x, y = _read_columns(path, 2, header=None)
    return x, y


def _read_columns(path, ncols, header):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise DataFormatError(f"{path} is empty")
    if header is not None and lines[0].strip() != header:
        raise DataFormatError(f"{path}: expected header {header!r}, got {lines[0]!r}")
    rows = []
    for ln_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != ncols:
            raise DataFormatError(f"{path}:{ln_no}: expected {ncols} columns")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise DataFormatError(f"{path}:{ln_no}: non-numeric value") from exc
    if not rows:
        raise DataFormatError(f"{path} contains no data rows")
    cols = np.asarray(rows, dtype=float).T
    return tuple(cols)


@dataclass
class ResultTable:
    """A rectangular result set plus provenance metadata."""

    columns: tuple                 # column names
    rows: list                     # list of row tuples
    meta: dict = field(default_factory=dict)

    def column(self, name):
        """One column as a float ndarray."""
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows], dtype=float)

    def write(self, path):
        """Write CSV plus a ``.meta.json`` sidecar with provenance."""
        path = str(path)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(fmt(v) for v in row) + "\n")
        sidecar = dict(self.meta)
        sidecar.setdefault("tool", "emconv")
        sidecar.setdefault("version", __version__)
        write_json(path + ".meta.json", sidecar)
