"""Hologram formation and three-step phase-shifting recovery.

A hologram is the per-unit power ``|E_o + E_r|^2``. Taking three of them
with the reference advanced by 0, pi/2 and pi lets the complex object wave
be solved for exactly::

    E_o = (1 - j) / (4 E_r*) * [I(0) - I(pi/2) + j (I(pi/2) - I(pi))]

where ``E_r`` is the unshifted reference. The naive alternative, weighting
a single hologram by the reference, is kept to expose the DC and
conjugate-image terms that the three-step scheme cancels.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .array_model import (
    ArrayGeometry,
    DimensionError,
    FieldSnapshot,
    ReferenceWave,
    reference_field,
)

PSI_SHIFTS = (0.0, np.pi / 2, np.pi)


class SingularReferenceError(ValueError):
    """The reference vanishes at one or more units, so E_r* cannot divide."""


class DecompositionError(ValueError):
    """The input is not a plane wave and the closed-form split is undefined."""


@dataclass(frozen=True, eq=False)
class HologramTriplet:
    """Per-unit powers for the 0, pi/2 and pi reference states."""

    i0: np.ndarray
    i90: np.ndarray
    i180: np.ndarray
    geometry: ArrayGeometry

    def __post_init__(self):
        n = self.geometry.n_units
        for name in ("i0", "i90", "i180"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n,):
                raise DimensionError(f"{name} has shape {arr.shape}, expected ({n},)")
            if np.any(arr < 0):
                raise ValueError(f"{name} contains negative power")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def stack(self) -> np.ndarray:
        """``(3, n_units)`` array ordered I(0), I(pi/2), I(pi)."""
        return np.stack([self.i0, self.i90, self.i180])


@dataclass(frozen=True, eq=False)
class ReconstructionComponents:
    """The three terms of ``E_r * I(0)``."""

    dc_term: np.ndarray
    object_term: np.ndarray
    conjugate_term: np.ndarray
    reconstructed: np.ndarray

    def total(self) -> np.ndarray:
        return self.dc_term + self.object_term + self.conjugate_term


def _values(x) -> np.ndarray:
    return x.values if isinstance(x, FieldSnapshot) else np.asarray(x, dtype=complex)


def form_hologram(e_o, e_r) -> np.ndarray:
    """Per-unit power of the superposed object and reference fields."""
    o, r = _values(e_o), _values(e_r)
    if o.shape != r.shape:
        raise DimensionError(f"field shapes differ: {o.shape} vs {r.shape}")
    return np.abs(o + r) ** 2


def synthesize_triplet(
    e_o: FieldSnapshot, ref: ReferenceWave, geom: Optional[ArrayGeometry] = None
) -> HologramTriplet:
    """Ideal holograms with the reference advanced by 0, pi/2 and pi."""
    geom = geom or e_o.geometry
    holograms = [form_hologram(e_o, reference_field(ref.shifted(d), geom)) for d in PSI_SHIFTS]
    return HologramTriplet(*holograms, geometry=geom)


def psi_recover(triplet: HologramTriplet, ref: ReferenceWave) -> FieldSnapshot:
    """Recover the complex object field from a phase-shifted triplet.

    Parameters
    ----------
    triplet : HologramTriplet
        Holograms for reference states 0, pi/2, pi.
    ref : ReferenceWave
        The reference as it was in state 0. Its per-unit field is the
        divisor, so any base phase or divider gain it carries is undone.

    Returns
    -------
    FieldSnapshot
        Estimate of E_o. Exact for noiseless triplets.
    """
    geom = triplet.geometry
    e_r = reference_field(ref, geom).values
    if np.any(e_r == 0):
        raise SingularReferenceError("reference field is zero at one or more units")
    bracket = triplet.i0 - triplet.i90 + 1j * (triplet.i90 - triplet.i180)
    return FieldSnapshot((1 - 1j) * bracket / (4 * np.conj(e_r)), geom)


def naive_reconstruct(
    e_o: FieldSnapshot, ref: ReferenceWave, geom: Optional[ArrayGeometry] = None, atol: float = 1e-9
) -> ReconstructionComponents:
    """Illuminate a single hologram with the reference and split the result.

    ``E_r * I(0)`` separates into a reference replica scaled by the total
    power, the wanted object term ``A_r^2 E_o`` and a conjugate image
    ``E_r^2 E_o*``. Only plane-wave inputs (uniform ``|E_o|``) are accepted.
    """
    geom = geom or e_o.geometry
    o = e_o.values
    mag = np.abs(o)
    if mag.size and np.ptp(mag) > atol:
        raise DecompositionError("object field amplitude varies across units; not a plane wave")
    e_r = reference_field(ref, geom).values
    recon = e_r * form_hologram(o, e_r)
    ar2 = np.abs(e_r) ** 2
    return ReconstructionComponents(
        dc_term=(ar2 + mag**2) * e_r,
        object_term=ar2 * o,
        conjugate_term=e_r**2 * np.conj(o),
        reconstructed=recon,
    )
