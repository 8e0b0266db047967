import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from conftest import profile, pulse
from mfn_hrrp.core import CoiMask
from mfn_hrrp.decomposition import (DecompositionParams, DegenerateInputError, distance_to_coi,
                                    gaussian_filter_1d, gaussian_kernel, mean_coi_amplitude,
                                    mfn_decompose, smooth_with_distance)
from mfn_hrrp.segmentation import coi_mask
from mfn_hrrp.synth import SceneParams, make_ship, render_hrrp

amplitudes = arrays(float, st.integers(5, 150), elements=st.floats(0, 1e3, allow_nan=False))
sigmas = st.sampled_from([0.1, 0.5, 2.0, 8.0])


def synthetic(n, seed=0):
    ship = make_ship("a", 90, 15, 60, seed=seed)
    scene = SceneParams(s=192, seed=seed)
    return [render_hrrp(ship, 7.3 * k % 360, scene, k) for k in range(n)]


class TestMeanCoiAmplitude:
    @pytest.mark.parametrize("cells, bits, expected", [
        ([2, 4, 6, 0], [1, 1, 1, 0], 4.0),
        ([3, 3, 9, 9], [1, 1, 0, 0], 3.0),
        ([0, 10, 0], [0, 1, 0], 10.0),
    ])
    def test_mean(self, cells, bits, expected):
        assert mean_coi_amplitude(profile(cells), CoiMask(np.array(bits))) == expected

    def test_empty_mask(self):
        with pytest.raises(DegenerateInputError):
            mean_coi_amplitude(profile([1.0, 2.0]), CoiMask(np.zeros(2)))


class TestSmoothWithDistance:
    def test_single_cell(self):
        coi = np.zeros(16, bool)
        coi[10] = True
        out = smooth_with_distance(coi * 3.0, coi, 2.0)
        assert out[10] == 1.0
        assert out[12] == pytest.approx(math.exp(-4), rel=1e-15)
        assert out[12] == pytest.approx(0.0183156388887, rel=1e-10)

    def test_all_ones(self):
        coi = np.ones(7, bool)
        np.testing.assert_array_equal(smooth_with_distance(coi * 1.0, coi), 1.0)

    def test_empty(self):
        with pytest.raises(DegenerateInputError):
            smooth_with_distance(np.zeros(5), np.zeros(5, bool))

    @given(arrays(bool, st.integers(1, 80)).filter(lambda b: b.any()),
           st.floats(0.1, 3.0))
    def test_matches_brute_force(self, coi, decay):
        np.testing.assert_allclose(smooth_with_distance(coi * 1.0, coi, decay),
                                   oracles.soft_mask(list(coi), decay), rtol=1e-14)

    @given(arrays(bool, st.integers(1, 80)).filter(lambda b: b.any()))
    def test_soft_mask_bounds(self, coi):
        soft = smooth_with_distance(coi * 1.0, coi)
        dist = distance_to_coi(coi)
        assert np.all(soft > 0) and np.all(soft <= 1)
        np.testing.assert_array_equal(soft == 1, coi)
        order = np.argsort(dist, kind="stable")
        d, v = dist[order], soft[order]
        assert np.all(v[1:][d[1:] > d[:-1]] < v[:-1][d[1:] > d[:-1]])


class TestGaussian:
    def test_constant(self):
        np.testing.assert_allclose(gaussian_filter_1d(np.full(20, 4.2), 2.0), 4.2, rtol=1e-14)

    def test_tiny_sigma_is_identity(self, rng):
        x = rng.random(50)
        np.testing.assert_allclose(gaussian_filter_1d(x, 0.05), x, rtol=0, atol=1e-9)

    def test_impulse_gives_kernel(self):
        x = np.zeros(21)
        x[10] = 1.0
        out = gaussian_filter_1d(x, 0.5)
        # 1 / (1 + 2 e^-2 + 2 e^-8)
        assert out[10] == pytest.approx(0.7865707258873422, rel=1e-14)
        np.testing.assert_allclose(out[8:13], oracles.gaussian_weights(0.5), rtol=1e-14)

    @pytest.mark.parametrize("sigma, radius", [(0.05, 1), (0.5, 2), (2.0, 8), (2.1, 9)])
    def test_kernel_radius(self, sigma, radius):
        k = gaussian_kernel(sigma)
        assert k.size == 2 * radius + 1
        assert k.sum() == pytest.approx(1.0, abs=1e-15)

    @given(amplitudes, sigmas)
    def test_matches_oracle(self, x, sigma):
        np.testing.assert_allclose(gaussian_filter_1d(x, sigma), oracles.gaussian_smooth(list(x), sigma),
                                   rtol=1e-12, atol=1e-9)


class TestMfnDecompose:
    def test_all_zero(self):
        c = mfn_decompose(profile(np.zeros(30)))
        for v in (c.m, c.f, c.n):
            np.testing.assert_array_equal(v, 0)

    def test_rectangular_pulse(self):
        rp = pulse()
        c = mfn_decompose(rp)
        assert np.max(np.abs(c.n[103:148])) <= 1e-6
        outside = ~coi_mask(rp).bits
        # Gaussian spill just past the COI edges; the oracle gives 2.2776
        assert np.sum(c.n[outside] ** 2) == pytest.approx(2.277616677369177, rel=1e-9)
        assert np.sum(c.n[outside] ** 2) <= 1e-3 * np.sum(rp.cells ** 2)
        assert set(np.unique(c.m)) == {0.0, 10.0}

    @settings(max_examples=150, deadline=None)
    @given(amplitudes, sigmas)
    def test_matches_pipeline_oracle(self, x, sigma):
        m, f, n, bits = oracles.decompose(list(x), sigma)
        c = mfn_decompose(profile(x), DecompositionParams(sigma))
        scale = max(1.0, float(x.max()))
        np.testing.assert_allclose(c.m, m, rtol=1e-12, atol=1e-12 * scale)
        np.testing.assert_allclose(c.f, f, rtol=1e-10, atol=1e-10 * scale)

    @given(amplitudes, sigmas)
    def test_exact_reconstruction(self, x, sigma):
        c = mfn_decompose(profile(x), DecompositionParams(sigma))
        assert np.max(np.abs(c.f + c.n - x)) <= 1e-9 * max(1.0, x.max())

    @given(amplitudes)
    def test_mask_structure(self, x):
        rp = profile(x)
        c, bits = mfn_decompose(rp), coi_mask(rp).bits
        levels = np.unique(c.m[c.m != 0])
        assert levels.size <= 1
        if levels.size:
            np.testing.assert_array_equal(c.m != 0, bits)

    @settings(deadline=None)
    @given(amplitudes, st.integers(-10, 10))
    def test_scale_equivariance(self, x, k):
        alpha = 2.0 ** k
        c1 = mfn_decompose(profile(x))
        c2 = mfn_decompose(profile(x * alpha))
        for a, b in ((c1.m, c2.m), (c1.f, c2.f), (c1.n, c2.n)):
            np.testing.assert_allclose(b, alpha * a, rtol=1e-12, atol=1e-12 * alpha * max(1, x.max()))

    def test_scale_equivariance_random_factor(self, rng):
        for rp in synthetic(20):
            alpha = rng.uniform(0.1, 10)
            c1, c2 = mfn_decompose(rp), mfn_decompose(rp.with_cells(rp.cells * alpha))
            np.testing.assert_allclose(c2.f, alpha * c1.f, rtol=1e-10, atol=1e-12)

    def test_total_variation_shrinks_with_sigma(self):
        for rp in synthetic(30, seed=3):
            mask = coi_mask(rp)
            tv = [np.abs(np.diff(mfn_decompose(rp, DecompositionParams(s), mask).f)).sum()
                  for s in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)]
            assert all(b <= a * (1 + 1e-12) for a, b in zip(tv, tv[1:]))

    def test_noise_routing(self, rng):
        for rp in synthetic(40, seed=5):
            mask = coi_mask(rp)
            far = distance_to_coi(mask.bits) >= 3
            delta = np.zeros(rp.s)
            delta[far] = rng.uniform(0, 0.05 * mean_coi_amplitude(rp, mask), far.sum())
            noisy = rp.with_cells(rp.cells + delta)
            if coi_mask(noisy) != mask:
                continue
            dn = mfn_decompose(noisy).n - mfn_decompose(rp).n
            assert np.sum(dn ** 2) >= 0.95 * np.sum(delta ** 2)
