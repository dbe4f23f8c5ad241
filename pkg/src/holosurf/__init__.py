"""Simulation of holographic interference surfaces.

Power-only holograms of an object wave and a local reference, three-step
phase-shifting recovery of the complex field, and Bartlett DOA estimation.
"""

__version__ = "0.1.0"

from .array_model import (
    ArrayGeometry,
    DimensionError,
    DomainError,
    FieldSnapshot,
    PlaneWaveSource,
    ReferenceWave,
    default_his_geometry,
    object_field,
    reference_field,
    steering_matrix,
    steering_vector,
    wavelength,
)
from .holography import (
    DecompositionError,
    HologramTriplet,
    ReconstructionComponents,
    SingularReferenceError,
    form_hologram,
    naive_reconstruct,
    psi_recover,
    synthesize_triplet,
)
from .frontend import (
    AcquisitionRecord,
    FrontendConfig,
    acquire,
    derive_seed,
    noise_sweep,
    quantize_phase,
    rms_error,
)
from .doa import (
    BartlettSpectrum,
    DegenerateInputError,
    ScanGrid,
    bartlett_spectrum,
    estimate_doa,
    sweep_errors,
)
