"""Parametric model of the hologram acquisition hardware.

Each unit combines the received signal with its share of the reference
and an envelope detector reports the power. Imbalance and noise enter at
the points where the real chain adds them:

* digital phase shifter: the 0, pi/2, pi states are rounded to the
  shifter's grid;
* power divider: a static complex gain error per unit, fixed for a record;
* antenna/channel: complex white noise on the incident field, drawn fresh
  for every acquisition;
* detector: additive Gaussian noise on the detected power (linear law);
* ADC: clip to ``[0, full_scale]`` and mid-rise uniform quantization.
"""

from dataclasses import dataclass, field, replace, asdict
from typing import Optional

import numpy as np

from .array_model import ArrayGeometry, FieldSnapshot, ReferenceWave, reference_field
from .holography import PSI_SHIFTS, HologramTriplet, form_hologram, psi_recover

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class FrontendConfig:
    """Impairment knobs. ``None`` bit counts mean an ideal (unquantized) stage.

    ``adc_full_scale=None`` picks ``1.25 * (max|E_r| + max|E_o|)^2`` at
    acquisition time, so the largest noiseless hologram never clips.
    """

    phase_shifter_bits: Optional[int] = None
    divider_sigma: float = 0.0
    awgn_sigma: float = 0.0
    detector_noise_sigma: float = 0.0
    adc_bits: Optional[int] = 12
    adc_full_scale: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        for name in ("divider_sigma", "awgn_sigma", "detector_noise_sigma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("phase_shifter_bits", "adc_bits"):
            bits = getattr(self, name)
            if bits is not None and bits < 1:
                raise ValueError(f"{name} must be >= 1 or None")
        if self.adc_full_scale is not None and not self.adc_full_scale > 0:
            raise ValueError("adc_full_scale must be positive")

    @classmethod
    def ideal(cls, seed: int = 0) -> "FrontendConfig":
        """A transparent front end: no noise, no quantization."""
        return cls(adc_bits=None, seed=seed)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class AcquisitionRecord:
    triplet: HologramTriplet
    truth: Optional[FieldSnapshot]
    config_used: FrontendConfig
    seed_state: int
    clipped: int = 0
    phase_states: tuple = field(default=PSI_SHIFTS)
    divider_gain: Optional[np.ndarray] = None  # realised per-unit gain, when perturbed


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic 64-bit child seed for ``(seed, *keys)``.

    Used for per-angle and per-trial streams so results do not depend on the
    order in which work is scheduled.
    """
    ss = np.random.SeedSequence([int(seed), *(int(k) for k in keys)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def quantize_phase(phase: float, bits: Optional[int]) -> float:
    """Round ``phase`` to the nearest of ``2**bits`` levels on [0, 2 pi).

    Ties go to the smaller level. ``bits=None`` only wraps into [0, 2 pi).
    """
    wrapped = float(np.mod(phase, TWO_PI))
    if bits is None:
        return wrapped
    n = 2**bits
    step = TWO_PI / n
    k = int(np.ceil(wrapped / step - 0.5)) % n
    return k * step


def adc_quantize(power, bits: Optional[int], full_scale: Optional[float]):
    """Clip to ``[0, full_scale]`` then quantize mid-rise.

    Returns the quantized array and the number of samples that were clipped.
    With ``full_scale=None`` only the lower (zero) bound applies.
    """
    x = np.asarray(power, dtype=float)
    upper = np.inf if full_scale is None else full_scale
    clipped = int(np.count_nonzero((x < 0) | (x > upper)))
    x = np.clip(x, 0.0, upper)
    if bits is None or full_scale is None:
        return x, clipped
    n = 2**bits
    lsb = full_scale / n
    code = np.minimum(np.floor(x / lsb), n - 1)
    return (code + 0.5) * lsb, clipped


def _complex_noise(rng, sigma, n):
    # E|w|^2 = sigma^2, split evenly between I and Q
    return sigma / np.sqrt(2) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def acquire(
    e_o: FieldSnapshot,
    ref: ReferenceWave,
    geom: Optional[ArrayGeometry] = None,
    cfg: Optional[FrontendConfig] = None,
    seed: Optional[int] = None,
) -> AcquisitionRecord:
    """Run one three-state acquisition through the impaired front end.

    ``seed`` overrides ``cfg.seed``; the record keeps whichever was used.
    """
    geom = geom or e_o.geometry
    cfg = cfg or FrontendConfig()
    seed = cfg.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    n = geom.n_units

    hw_ref = ref
    if cfg.divider_sigma > 0:
        base = np.ones(n, complex) if ref.per_unit_gain is None else ref.per_unit_gain
        hw_ref = replace(ref, per_unit_gain=base * (1 + _complex_noise(rng, cfg.divider_sigma, n)))

    full_scale = cfg.adc_full_scale
    if full_scale is None and cfg.adc_bits is not None:
        peak_r = np.max(np.abs(reference_field(ref, geom).values))
        full_scale = 1.25 * (peak_r + np.max(np.abs(e_o.values))) ** 2

    holograms, clipped, states = [], 0, []
    for shift in PSI_SHIFTS:
        state = quantize_phase(shift, cfg.phase_shifter_bits)
        states.append(state)
        incident = e_o.values
        if cfg.awgn_sigma > 0:
            incident = incident + _complex_noise(rng, cfg.awgn_sigma, n)
        power = form_hologram(incident, reference_field(hw_ref.shifted(state), geom))
        if cfg.detector_noise_sigma > 0:
            power = power + cfg.detector_noise_sigma * rng.standard_normal(n)
        power, c = adc_quantize(power, cfg.adc_bits, full_scale)
        holograms.append(power)
        clipped += c

    return AcquisitionRecord(
        triplet=HologramTriplet(*holograms, geometry=geom),
        truth=e_o,
        config_used=cfg,
        seed_state=int(seed),
        clipped=clipped,
        phase_states=tuple(states),
        divider_gain=hw_ref.per_unit_gain if cfg.divider_sigma > 0 else None,
    )


def rms_error(estimate, truth) -> float:
    """Root-mean-square of the per-unit complex error."""
    est = estimate.values if isinstance(estimate, FieldSnapshot) else np.asarray(estimate)
    tru = truth.values if isinstance(truth, FieldSnapshot) else np.asarray(truth)
    return float(np.sqrt(np.mean(np.abs(est - tru) ** 2)))


def noise_sweep(e_o, ref, geom, base_cfg, sigma_list, trials: int):
    """Mean PSI recovery RMS error versus object-field noise level.

    Trial ``t`` uses seed ``derive_seed(base_cfg.seed, t)`` at every sigma, so
    the noise realisations are common across the sweep and the curve is
    smooth in sigma.

    Returns
    -------
    list of (sigma, mean_rms_error)
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    geom = geom or e_o.geometry
    seeds = [derive_seed(base_cfg.seed, t) for t in range(trials)]
    out = []
    for sigma in sigma_list:
        cfg = replace(base_cfg, awgn_sigma=float(sigma))
        errs = [
            rms_error(psi_recover(acquire(e_o, ref, geom, cfg, seed=s).triplet, ref), e_o)
            for s in seeds
        ]
        out.append((float(sigma), float(np.mean(errs))))
    return out
