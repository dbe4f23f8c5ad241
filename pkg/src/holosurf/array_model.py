"""Array geometry, wavelength math and per-unit field synthesis.

Fields are phasor snapshots: the common e^{+j w t} carrier factor is
dropped because object and reference share one carrier and every
acquisition window spans a whole number of reference periods.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
DEFAULT_CARRIER_HZ = 2.6e9


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class DimensionError(ValueError):
    """Per-unit arrays do not match the geometry or each other."""


@dataclass(frozen=True)
class ArrayGeometry:
    """Rectangular grid of ``n_rows x n_cols`` radiating units.

    Unit ``(p, s)`` sits at ``(s * pitch_h, p * pitch_v, 0)`` metres. All
    per-unit arrays in this package are flattened row-major, so unit
    ``(p, s)`` is entry ``p * n_cols + s``.
    """

    n_rows: int
    n_cols: int
    pitch_h: float
    pitch_v: float

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise DomainError("array needs at least one row and one column")
        if not (self.pitch_h > 0 and self.pitch_v > 0):
            raise DomainError("unit pitches must be positive")

    @property
    def n_units(self) -> int:
        return self.n_rows * self.n_cols

    @property
    def shape(self) -> tuple:
        return (self.n_rows, self.n_cols)

    @property
    def unit_positions(self) -> np.ndarray:
        """(n_units, 3) array of unit positions in metres, row-major."""
        p, s = np.meshgrid(np.arange(self.n_rows), np.arange(self.n_cols), indexing="ij")
        pos = np.zeros((self.n_units, 3))
        pos[:, 0] = s.ravel() * self.pitch_h
        pos[:, 1] = p.ravel() * self.pitch_v
        return pos

    @property
    def extent(self) -> tuple:
        """Panel footprint (width, height) in metres, counting full unit cells."""
        return (self.n_cols * self.pitch_h, self.n_rows * self.pitch_v)

    def as_grid(self, values) -> np.ndarray:
        """Reshape a flat per-unit array to ``(n_rows, n_cols)``."""
        values = np.asarray(values)
        if values.shape[-1] != self.n_units:
            raise DimensionError(
                f"expected {self.n_units} per-unit values, got {values.shape[-1]}"
            )
        return values.reshape(values.shape[:-1] + self.shape)


@dataclass(frozen=True, eq=False)
class FieldSnapshot:
    """Complex field sampled at every unit of ``geometry`` (row-major)."""

    values: np.ndarray
    geometry: ArrayGeometry

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.geometry.n_units,):
            raise DimensionError(
                f"snapshot has shape {values.shape}, geometry needs ({self.geometry.n_units},)"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    def grid(self) -> np.ndarray:
        return self.geometry.as_grid(self.values)


@dataclass(frozen=True)
class PlaneWaveSource:
    """Far-field object wave arriving from ``azimuth_deg`` (broadside = 0)."""

    amplitude: float = 1.0
    azimuth_deg: float = 0.0
    carrier_hz: float = DEFAULT_CARRIER_HZ
    phase0: float = 0.0

    def __post_init__(self):
        if self.amplitude < 0:
            raise DomainError("source amplitude must be non-negative")
        if not self.carrier_hz > 0:
            raise DomainError("carrier frequency must be positive")
        _check_azimuth(self.azimuth_deg)


@dataclass(frozen=True)
class ReferenceWave:
    """Locally generated reference distributed to every unit.

    ``per_unit_gain`` models divider-network imbalance. Left as ``None`` the
    divider is ideal and every unit sees the same amplitude and phase.
    """

    amplitude: float = 1.0
    carrier_hz: float = DEFAULT_CARRIER_HZ
    global_phase: float = 0.0
    per_unit_gain: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        if self.amplitude < 0:
            raise DomainError("reference amplitude must be non-negative")
        if not self.carrier_hz > 0:
            raise DomainError("carrier frequency must be positive")
        if self.per_unit_gain is not None:
            gain = np.asarray(self.per_unit_gain, dtype=complex).ravel()
            gain.setflags(write=False)
            object.__setattr__(self, "per_unit_gain", gain)

    def shifted(self, delta: float) -> "ReferenceWave":
        """Same reference with ``delta`` radians added to the global phase."""
        return ReferenceWave(
            self.amplitude, self.carrier_hz, self.global_phase + delta, self.per_unit_gain
        )


def _check_azimuth(azimuth_deg):
    if not -90.0 <= azimuth_deg <= 90.0:
        raise DomainError(f"azimuth {azimuth_deg} deg outside [-90, 90]")


def default_his_geometry() -> ArrayGeometry:
    """The 32-unit prototype panel: 4 rows x 8 columns at 60 mm pitch."""
    return ArrayGeometry(n_rows=4, n_cols=8, pitch_h=0.060, pitch_v=0.060)


def wavelength(carrier_hz: float) -> float:
    if not carrier_hz > 0:
        raise DomainError(f"carrier frequency must be positive, got {carrier_hz}")
    return SPEED_OF_LIGHT / carrier_hz


def steering_vector(geom: ArrayGeometry, azimuth_deg: float, carrier_hz: float) -> FieldSnapshot:
    """Unit-modulus response of the array to a plane wave from ``azimuth_deg``.

    The scan plane is the horizontal (column) axis; elevation is fixed at 0,
    so only the x coordinate of each unit contributes a phase.
    """
    _check_azimuth(azimuth_deg)
    k = 2 * np.pi / wavelength(carrier_hz)
    x = geom.unit_positions[:, 0]
    return FieldSnapshot(np.exp(1j * k * np.sin(np.deg2rad(azimuth_deg)) * x), geom)


def steering_matrix(geom: ArrayGeometry, azimuths_deg, carrier_hz: float) -> np.ndarray:
    """Stack of steering vectors, shape ``(len(azimuths_deg), n_units)``."""
    az = np.atleast_1d(np.asarray(azimuths_deg, dtype=float))
    if np.any(np.abs(az) > 90):
        raise DomainError("scan angles must lie in [-90, 90] deg")
    k = 2 * np.pi / wavelength(carrier_hz)
    x = geom.unit_positions[:, 0]
    # same evaluation order as steering_vector so rows match it bit for bit
    return np.exp(1j * k * np.sin(np.deg2rad(az))[:, None] * x[None, :])


def object_field(src: PlaneWaveSource, geom: ArrayGeometry) -> FieldSnapshot:
    a = steering_vector(geom, src.azimuth_deg, src.carrier_hz).values
    return FieldSnapshot(src.amplitude * np.exp(1j * src.phase0) * a, geom)


def reference_field(ref: ReferenceWave, geom: ArrayGeometry) -> FieldSnapshot:
    """Per-unit reference phasor ``A_r e^{j phi} g[p, s]``."""
    values = np.full(geom.n_units, ref.amplitude * np.exp(1j * ref.global_phase))
    if ref.per_unit_gain is not None:
        if ref.per_unit_gain.shape != (geom.n_units,):
            raise DimensionError(
                f"per_unit_gain has {ref.per_unit_gain.size} entries, geometry has {geom.n_units} units"
            )
        values = values * ref.per_unit_gain
    return FieldSnapshot(values, geom)
