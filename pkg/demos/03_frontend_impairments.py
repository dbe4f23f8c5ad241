"""
Hardware impairments and noise
==============================

The three-step recovery is exact only for an ideal front end. This script
switches on each impairment of the acquisition chain in turn and shows how
far the recovered field and the DOA estimate move, then runs the
Monte-Carlo noise study.
"""

import numpy as np

import holosurf as hs
from holosurf.frontend import derive_seed

geom = hs.default_his_geometry()
ref = hs.ReferenceWave(1.0)
theta = 20.0
e_o = hs.object_field(hs.PlaneWaveSource(1.0, theta), geom)

cases = {
    "ideal": hs.FrontendConfig.ideal(),
    "12-bit ADC": hs.FrontendConfig(adc_bits=12),
    "6-bit ADC": hs.FrontendConfig(adc_bits=6),
    # 0, pi/2 and pi are exact with 2 or more bits; 1 bit collapses pi/2 onto 0
    "1-bit phase shifter": hs.FrontendConfig(phase_shifter_bits=1, adc_bits=None),
    "divider imbalance 5%": hs.FrontendConfig(divider_sigma=0.05, adc_bits=None),
    "field noise 0.05": hs.FrontendConfig(awgn_sigma=0.05, adc_bits=None),
    "detector noise 0.05": hs.FrontendConfig(detector_noise_sigma=0.05, adc_bits=None),
}

print(f"{'case':<24}{'field rms err':>14}{'doa err (deg)':>15}{'clipped':>9}")
for name, cfg in cases.items():
    rec = hs.acquire(e_o, ref, geom, cfg, seed=derive_seed(1, 0))
    est = hs.psi_recover(rec.triplet, ref)
    doa, _ = hs.estimate_doa(rec.triplet, ref, geom, 2.6e9)
    print(f"{name:<24}{hs.rms_error(est, e_o):>14.2e}{doa - theta:>+15.4f}{rec.clipped:>9d}")

###############################################################################
# Error versus noise level
# ------------------------
# The same 200 noise realisations are reused at every sigma, so the curve is
# smooth and the small-noise slope is visible directly.
sigmas = [0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1]
curve = hs.noise_sweep(e_o, ref, geom, hs.FrontendConfig.ideal(seed=3), sigmas, trials=200)
print("\n  sigma   rms error   error / sigma")
for sigma, err in curve:
    print(f"{sigma:7.3f}  {err:10.3e}   {err / sigma:8.3f}")

hits = 0
for t in range(500):
    rec = hs.acquire(e_o, ref, geom, hs.FrontendConfig(awgn_sigma=0.01, adc_bits=None), seed=derive_seed(9, t))
    hits += abs(hs.estimate_doa(rec.triplet, ref, geom, 2.6e9)[0] - theta) <= 1.0
print(f"\nsigma 0.01: {hits}/500 trials within 1 deg of {theta} deg")
