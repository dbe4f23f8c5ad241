"""Bartlett direction-of-arrival estimation on the recovered field."""

from dataclasses import dataclass

import numpy as np

from .array_model import ArrayGeometry, DimensionError, FieldSnapshot, ReferenceWave, steering_matrix
from .holography import HologramTriplet, psi_recover


class DegenerateInputError(ValueError):
    """The field to scan is identically zero."""


@dataclass(frozen=True)
class ScanGrid:
    start_deg: float = -60.0
    stop_deg: float = 60.0
    step_deg: float = 0.1

    def __post_init__(self):
        if not self.step_deg > 0:
            raise ValueError("step_deg must be positive")
        if not self.start_deg < self.stop_deg:
            raise ValueError("start_deg must be below stop_deg")
        if self.stop_deg - self.start_deg < self.step_deg:
            raise ValueError("grid must contain at least two points")
        if self.start_deg < -90 or self.stop_deg > 90:
            raise ValueError("scan limits must lie in [-90, 90] deg")

    def angles(self) -> np.ndarray:
        n = int(np.floor((self.stop_deg - self.start_deg) / self.step_deg + 1e-9)) + 1
        # rounding keeps lattice points such as 40.0 exact in output files
        return np.round(self.start_deg + self.step_deg * np.arange(n), 10)


@dataclass(frozen=True, eq=False)
class BartlettSpectrum:
    """Normalized Bartlett spectrum over a scan grid.

    ``values`` are rescaled so the grid maximum is 1. ``peak_value`` keeps
    the pre-rescale coherence ``|a^H h|^2 / (|a|^2 |h|^2)`` at that maximum,
    which is 1 only when the field is a perfect plane wave on the grid.
    """

    angles_deg: np.ndarray
    values: np.ndarray
    peak_deg: float
    peak_value: float
    peak_index: int


def _refine_peak(angles, values, i):
    """Three-point parabolic fit on log-values around grid maximum ``i``.

    The abscissa is sin(theta): a linear array's beam is symmetric in that
    variable, so the vertex is nearly unbiased. Boundary maxima are
    returned as-is.
    """
    if i == 0 or i == len(values) - 1:
        return float(angles[i])
    y0, y1, y2 = np.log(np.maximum(values[i - 1 : i + 2], np.finfo(float).tiny))
    u0, u1, u2 = np.sin(np.deg2rad(angles[i - 1 : i + 2]))
    den = (u1 - u0) * (y1 - y2) - (u1 - u2) * (y1 - y0)
    if den == 0:
        return float(angles[i])
    num = (u1 - u0) ** 2 * (y1 - y2) - (u1 - u2) ** 2 * (y1 - y0)
    vertex = np.clip(u1 - 0.5 * num / den, u0, u2)
    return float(np.rad2deg(np.arcsin(vertex)))


def bartlett_spectrum(h, geom: ArrayGeometry, carrier_hz: float, grid: ScanGrid = ScanGrid()) -> BartlettSpectrum:
    """Scan a normalized matched filter over ``grid``.

    ``h`` is a single recovered snapshot or a ``(n_snapshots, n_units)``
    stack; for a stack the per-snapshot spectra are averaged.
    """
    h = h.values if isinstance(h, FieldSnapshot) else np.asarray(h, dtype=complex)
    snaps = np.atleast_2d(h)
    if snaps.shape[-1] != geom.n_units:
        raise DimensionError(f"field has {snaps.shape[-1]} units, geometry has {geom.n_units}")
    energy = np.sum(np.abs(snaps) ** 2, axis=1)
    if np.any(energy == 0):
        raise DegenerateInputError("cannot scan an all-zero field")

    angles = grid.angles()
    a = steering_matrix(geom, angles, carrier_hz)
    corr = np.abs(snaps @ a.conj().T) ** 2 / (geom.n_units * energy[:, None])
    coherence = corr.mean(axis=0)

    i = int(np.argmax(coherence))  # first maximum, i.e. the smaller angle on ties
    peak = coherence[i]
    values = coherence / peak
    return BartlettSpectrum(
        angles_deg=angles,
        values=values,
        peak_deg=_refine_peak(angles, values, i),
        peak_value=float(peak),
        peak_index=i,
    )


def estimate_doa(
    triplet: HologramTriplet,
    ref: ReferenceWave,
    geom: ArrayGeometry,
    carrier_hz: float,
    grid: ScanGrid = ScanGrid(),
):
    """Recover the field from ``triplet`` and return ``(peak_deg, spectrum)``."""
    field = psi_recover(triplet, ref)
    spectrum = bartlett_spectrum(field, geom, carrier_hz, grid)
    return spectrum.peak_deg, spectrum


@dataclass(frozen=True, eq=False)
class SweepMetrics:
    errors: np.ndarray
    max_abs_error: float
    rmse: float


def sweep_errors(true_thetas, estimates) -> SweepMetrics:
    """Signed per-angle errors (estimate minus truth) and their aggregates."""
    t = np.asarray(true_thetas, dtype=float)
    e = np.asarray(estimates, dtype=float)
    if t.shape != e.shape:
        raise DimensionError(f"length mismatch: {t.shape} vs {e.shape}")
    err = e - t
    if err.size == 0:
        return SweepMetrics(err, 0.0, 0.0)
    return SweepMetrics(err, float(np.max(np.abs(err))), float(np.sqrt(np.mean(err**2))))
