import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from holosurf import (
    FrontendConfig,
    PlaneWaveSource,
    ReferenceWave,
    acquire,
    default_his_geometry,
    noise_sweep,
    object_field,
    psi_recover,
    quantize_phase,
    rms_error,
    synthesize_triplet,
)
from holosurf.frontend import adc_quantize, derive_seed

F = 2.6e9
G = default_his_geometry()
REF = ReferenceWave(1.0)
E_O = object_field(PlaneWaveSource(1.0, 20.0, F, 0.3), G)


def nearest_level(x, bits):
    """Exhaustive search over the phase-shifter levels, smaller level on ties."""
    n = 2**bits
    x = x % (2 * math.pi)
    best, best_d = None, None
    for k in range(n + 1):
        level = k * 2 * math.pi / n
        d = abs(x - level)
        if best_d is None or d < best_d - 1e-15:
            best, best_d = level % (2 * math.pi), d
    return best


class TestQuantizePhase:
    def test_on_grid(self):
        assert quantize_phase(math.pi / 2, 2) == math.pi / 2

    def test_three_bits(self):
        assert quantize_phase(0.8, 3) == pytest.approx(0.7854, abs=1e-4)

    def test_unbounded_wraps(self):
        assert quantize_phase(7.0, None) == pytest.approx(7.0 - 2 * math.pi)
        assert quantize_phase(-0.5, None) == pytest.approx(2 * math.pi - 0.5)

    def test_tie_goes_down(self):
        # exactly halfway between 0 and pi/2
        assert quantize_phase(math.pi / 4, 2) == 0.0

    @given(st.floats(-20, 20), st.integers(1, 10))
    def test_matches_exhaustive(self, x, bits):
        got = quantize_phase(x, bits)
        assert 0 <= got < 2 * math.pi
        want = nearest_level(x, bits)
        assert math.isclose(got, want, abs_tol=1e-12) or math.isclose(
            abs(got - want), 2 * math.pi, abs_tol=1e-12
        )


class TestAdc:
    def test_clip_count(self):
        x = np.array([-0.2, 0.0, 0.5, 1.0, 1.0001, 3.0])
        q, clipped = adc_quantize(x, 4, 1.0)
        assert clipped == 3
        assert np.all((q >= 0) & (q <= 1.0))

    def test_mid_rise_levels(self):
        q, _ = adc_quantize(np.array([0.0, 0.24, 0.26, 0.99]), 2, 1.0)
        np.testing.assert_allclose(q, [0.125, 0.125, 0.375, 0.875])

    @given(st.lists(st.floats(-1, 3), min_size=2, max_size=50), st.integers(1, 12))
    def test_monotone(self, xs, bits):
        x = np.sort(np.array(xs))
        q, _ = adc_quantize(x, bits, 2.0)
        assert np.all(np.diff(q) >= 0)


class TestAcquire:
    def test_transparent(self):
        rec = acquire(E_O, REF, G, FrontendConfig.ideal())
        ideal = synthesize_triplet(E_O, REF)
        assert np.array_equal(rec.triplet.stack(), ideal.stack())
        assert rec.clipped == 0

    def test_two_bit_shifter_transparent(self):
        rec = acquire(E_O, REF, G, FrontendConfig(phase_shifter_bits=2, adc_bits=None))
        assert np.array_equal(rec.triplet.stack(), synthesize_triplet(E_O, REF).stack())

    def test_coarse_shifter_breaks_exactness(self):
        rec = acquire(E_O, REF, G, FrontendConfig(phase_shifter_bits=1, adc_bits=None))
        assert rec.phase_states == (0.0, 0.0, math.pi)
        assert rms_error(psi_recover(rec.triplet, REF), E_O) > 0.1

    def test_noisy_is_reproducible(self):
        cfg = FrontendConfig(awgn_sigma=0.01, adc_bits=None, seed=11)
        a = acquire(E_O, REF, G, cfg)
        b = acquire(E_O, REF, G, cfg)
        assert a.triplet.stack().tobytes() == b.triplet.stack().tobytes()
        err = rms_error(psi_recover(a.triplet, REF), E_O)
        assert err > 0
        assert err == rms_error(psi_recover(b.triplet, REF), E_O)
        c = acquire(E_O, REF, G, cfg, seed=12)
        assert c.triplet.stack().tobytes() != a.triplet.stack().tobytes()
        assert c.seed_state == 12

    def test_full_impairment_chain_deterministic(self):
        cfg = FrontendConfig(
            phase_shifter_bits=5, divider_sigma=0.05, awgn_sigma=0.02, detector_noise_sigma=0.01, adc_bits=10, seed=3
        )
        a, b = acquire(E_O, REF, G, cfg), acquire(E_O, REF, G, cfg)
        assert a.triplet.stack().tobytes() == b.triplet.stack().tobytes()
        assert a.clipped == b.clipped

    def test_clip_accounting(self):
        ideal = synthesize_triplet(E_O, REF).stack()
        fs = 2.0
        rec = acquire(E_O, REF, G, FrontendConfig(adc_bits=8, adc_full_scale=fs))
        assert rec.clipped == int(np.count_nonzero(ideal > fs))
        assert rec.triplet.stack().max() <= fs

    def test_auto_full_scale_never_clips_noiseless(self):
        rec = acquire(E_O, REF, G, FrontendConfig(adc_bits=12))
        assert rec.clipped == 0

    def test_detector_noise_clips_at_zero(self):
        # I(pi) is ~0 at broadside for equal amplitudes, so noise pushes half below zero
        e_o = object_field(PlaneWaveSource(1.0, 0.0, F), G)
        rec = acquire(e_o, REF, G, FrontendConfig(detector_noise_sigma=0.05, adc_bits=None, seed=1))
        assert rec.clipped > 0
        assert np.all(rec.triplet.i180 >= 0)

    def test_divider_imbalance_static_across_states(self):
        rec = acquire(E_O, REF, G, FrontendConfig(divider_sigma=0.05, adc_bits=None, seed=5))
        assert rec.divider_gain is not None
        # one gain draw shared by all three states makes recovery against it exact
        hw = ReferenceWave(1.0, per_unit_gain=rec.divider_gain)
        np.testing.assert_allclose(psi_recover(rec.triplet, hw).values, E_O.values, atol=1e-12)
        # the nominal reference cannot see the imbalance
        assert rms_error(psi_recover(rec.triplet, REF), E_O) > 1e-3


class TestNoiseSweep:
    def test_zero_sigma(self):
        ((sigma, err),) = noise_sweep(E_O, REF, G, FrontendConfig.ideal(), [0.0], trials=3)
        assert sigma == 0.0 and err < 1e-10

    def test_strictly_increasing(self):
        res = noise_sweep(E_O, REF, G, FrontendConfig.ideal(seed=2), [0.001, 0.01, 0.1], trials=200)
        errs = [e for _, e in res]
        assert errs[0] < errs[1] < errs[2]

    @pytest.mark.parametrize("sigma", [0.005, 0.01, 0.025])
    def test_small_noise_linearity(self, sigma):
        (_, e1), (_, e2) = noise_sweep(E_O, REF, G, FrontendConfig.ideal(seed=9), [sigma, 2 * sigma], trials=200)
        assert e2 / e1 == pytest.approx(2.0, rel=0.2)

    def test_deterministic(self):
        cfg = FrontendConfig(seed=21)
        assert noise_sweep(E_O, REF, G, cfg, [0.01], 20) == noise_sweep(E_O, REF, G, cfg, [0.01], 20)

    def test_trials_validated(self):
        with pytest.raises(ValueError):
            noise_sweep(E_O, REF, G, FrontendConfig(), [0.01], 0)


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    assert len({derive_seed(0, i, t) for i in range(13) for t in range(20)}) == 260


@pytest.mark.parametrize(
    "kwargs", [dict(awgn_sigma=-1), dict(adc_bits=0), dict(phase_shifter_bits=0), dict(adc_full_scale=0.0)]
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        FrontendConfig(**kwargs)
