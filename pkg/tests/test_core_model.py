import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.spatial.transform import Rotation

from ra_cellfree import (
    SystemParams,
    channel_coeff,
    dbm_to_watts,
    directional_gain,
    draw_fading,
    layout_from_positions,
    make_layout,
    path_gain,
    smoothed_gain,
    smoothed_gain_grad,
)


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def random_unit(rng, n=None):
    v = rng.standard_normal((n, 3) if n else 3)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


@pytest.mark.parametrize("dbm, watts", [(30, 1.0), (24, 0.25118864315095796), (-94, 3.981071705534969e-13)])
def test_dbm_to_watts(dbm, watts):
    assert dbm_to_watts(dbm) == pytest.approx(watts, rel=1e-12)


class TestLayout:
    def test_deterministic(self):
        p = SystemParams()
        a, b = make_layout(p, 7), make_layout(p, 7)
        assert np.array_equal(a.ap_positions, b.ap_positions)
        assert np.array_equal(a.user_positions, b.user_positions)

    def test_geometry_invariants(self):
        lay = make_layout(SystemParams(num_aps=12, num_users=4), 3)
        diff = lay.user_positions[None] - lay.ap_positions[:, None]
        np.testing.assert_allclose(lay.distances, np.linalg.norm(diff, axis=-1), rtol=1e-14)
        np.testing.assert_allclose(np.linalg.norm(lay.directions, axis=-1), 1.0, atol=1e-12)
        assert np.all(lay.distances >= 1.0)
        assert np.all(lay.ap_positions[:, 2] == 10.0)
        assert np.all(lay.user_positions[:, 2] == 1.5)

    def test_uniform_coordinates(self):
        # 10^4 coordinate draws: std of the mean is 300/sqrt(12)/100 ~ 0.87 m
        p = SystemParams(num_aps=50, num_users=50)
        xy = np.concatenate([make_layout(p, s).ap_positions[:, :2].ravel() for s in range(100)])
        assert xy.size == 10_000
        assert abs(xy.mean() - 150.0) < 4.0
        assert xy.min() >= 0 and xy.max() <= 300

    def test_rejects_more_users_than_aps(self):
        with pytest.raises(ValueError):
            make_layout(SystemParams(num_aps=1, num_users=2), 0)

    def test_floor_enforced(self):
        with pytest.raises(ValueError):
            layout_from_positions([[0, 0, 0]], [[0.5, 0, 0]])

    def test_redraw_until_floor_met(self):
        # same height: small area makes close pairs likely, redraw must avoid them
        p = SystemParams(num_aps=3, num_users=2, area_side=4.0, ap_height=0.0,
                         user_height=0.0)
        lay = make_layout(p, 5)
        assert np.all(lay.distances >= 1.0)


class TestDirectionalGain:
    def test_boresight(self):
        f = unit([1, 2, 3])
        assert directional_gain(f, f, 2) == pytest.approx(10.0, rel=1e-14)

    def test_sixty_degrees(self):
        f = np.array([1.0, 0, 0])
        d = np.array([0.5, np.sqrt(3) / 2, 0])
        assert directional_gain(f, d, 2) == pytest.approx(0.625, rel=1e-12)

    def test_back_hemisphere_and_edge(self):
        f = unit([0, 1, 1])
        assert directional_gain(f, -f, 2) == 0.0
        assert directional_gain(np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), 2) == 0.0

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            directional_gain(np.array([2.0, 0, 0]), np.array([1.0, 0, 0]), 2)

    def test_bounds(self, rng):
        f, d = random_unit(rng, 500), random_unit(rng, 500)
        for p in (1, 2, 4):
            g = directional_gain(f, d, p)
            assert np.all(g >= 0) and np.all(g < 2 * (2 * p + 1))

    @pytest.mark.parametrize("p", [0, 1, 2, 4])
    def test_energy_conservation(self, p):
        f = np.array([0.3, -0.4, np.sqrt(0.75)])

        # integrate in the frame of f so the hemisphere edge is a grid line
        R = Rotation.align_vectors([f], [[0, 0, 1]])[0].as_matrix()

        def integrand_f(theta, phi):
            d = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
            return directional_gain(f, R @ d, p) * np.sin(theta)

        total, _ = integrate.dblquad(integrand_f, 0, 2 * np.pi, 0, np.pi,
                                     epsabs=1e-12, epsrel=1e-10)
        assert total == pytest.approx(4 * np.pi, rel=1e-6)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(0, 2 * np.pi), st.integers(0, 5))
    def test_azimuth_independence(self, seed, angle, p):
        rng = np.random.default_rng(seed)
        f, d = random_unit(rng), random_unit(rng)
        d_rot = Rotation.from_rotvec(angle * f).apply(d)
        assert directional_gain(f, d_rot, p) == pytest.approx(directional_gain(f, d, p),
                                                              rel=1e-9, abs=1e-300)


class TestSmoothedGain:
    def test_aligned(self):
        f = np.array([0.0, 0, 1])
        assert smoothed_gain(f, f, 2, 20) == pytest.approx(10.0 * 1.0000000001030576**4, rel=1e-12)

    def test_orthogonal(self):
        assert smoothed_gain(np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), 2, 20) == \
            pytest.approx(1.4427193661442713e-05, rel=1e-12)

    def test_p_zero_constant(self, rng):
        for _ in range(10):
            assert smoothed_gain(random_unit(rng), random_unit(rng), 0, 20) == 2.0

    def test_no_overflow(self):
        f = np.array([1.0, 0, 0])
        assert np.isfinite(smoothed_gain(f, f, 2, 2000.0))
        assert smoothed_gain(-f, f, 2, 2000.0) >= 0

    def test_strictly_positive(self, rng):
        f, d = random_unit(rng, 200), random_unit(rng, 200)
        assert np.all(smoothed_gain(f, d, 2, 20) > 0)

    def test_approaches_exact(self):
        f = np.array([1.0, 0, 0])
        for t in (0.2, 0.5, 0.9):
            d = np.array([t, np.sqrt(1 - t * t), 0])
            exact = directional_gain(f, d, 2)
            errs = [abs(smoothed_gain(f, d, 2, m) - exact) for m in (20, 200, 2000)]
            # error underflows to exactly 0 once e^(-m t) drops below eps
            assert errs[0] > errs[1] >= errs[2]
            assert errs[2] < 1e-3 * errs[0]

    def test_grad_p_zero(self, rng):
        assert np.all(smoothed_gain_grad(random_unit(rng), random_unit(rng), 0, 20) == 0)

    def test_grad_orthogonal(self):
        d = np.array([0, 1.0, 0])
        g = smoothed_gain_grad(np.array([1.0, 0, 0]), d, 2, 20)
        np.testing.assert_allclose(g, 8.325616299723234e-04 * d, rtol=1e-12)

    def test_grad_finite_difference(self, rng):
        h = 1e-6
        for _ in range(100):
            d = random_unit(rng)
            f = random_unit(rng) * rng.uniform(0.3, 0.99)
            p = int(rng.integers(0, 5))
            m = float(rng.uniform(1, 30))
            g = smoothed_gain_grad(f, d, p, m)
            fd = np.array([(smoothed_gain(f + h * e, d, p, m) - smoothed_gain(f - h * e, d, p, m)) / (2 * h)
                           for e in np.eye(3)])
            scale = max(np.linalg.norm(g), 1e-300)
            assert np.linalg.norm(g - fd) / scale < 1e-6 or np.linalg.norm(g - fd) < 1e-12


class TestChannel:
    def test_path_gain_reference(self):
        p = SystemParams()
        assert path_gain(1.0, p) == pytest.approx(1e-4, rel=1e-14)
        assert path_gain(100.0, p) == pytest.approx(3.9810717055349695e-11, rel=1e-12)
        assert path_gain(10.0, p) == pytest.approx(6.30957344480193e-08, rel=1e-12)

    def test_path_gain_below_floor(self):
        with pytest.raises(ValueError):
            path_gain(0.5, SystemParams())

    def test_pure_los(self):
        p = SystemParams(num_aps=10, num_users=3, rician_k=1e12)
        lay = make_layout(p, 0)
        np.testing.assert_allclose(np.abs(draw_fading(lay, p, 1).g), 1.0, atol=1e-5)

    def _many_draws(self, kappa, n_draws=10_000):
        p = SystemParams(num_aps=10, num_users=1, rician_k=kappa)
        lay = make_layout(p, 0)
        return np.concatenate([draw_fading(lay, p, s).g.ravel() for s in range(n_draws)])

    def test_rayleigh_zero_mean(self):
        g = self._many_draws(0.0)
        assert g.size == 100_000
        # std of the complex mean is 1/sqrt(1e5) ~ 0.0032
        assert abs(g.mean()) < 0.015

    def test_unit_power(self):
        g = self._many_draws(7.94)
        assert np.mean(np.abs(g) ** 2) == pytest.approx(1.0, abs=0.02)

    def test_fading_deterministic(self):
        p = SystemParams()
        lay = make_layout(p, 0)
        assert np.array_equal(draw_fading(lay, p, 9).g, draw_fading(lay, p, 9).g)

    def _single_link(self):
        p = SystemParams(num_aps=1, num_users=1, rician_k=1e12)
        lay = layout_from_positions([[0, 0, 1.0]], [[0, 0, 0.0]])
        return p, lay, draw_fading(lay, p, 0)

    def test_channel_coeff_aligned(self):
        p, lay, fad = self._single_link()
        q = lay.directions[0, 0]
        assert abs(channel_coeff(lay, fad, q, 0, 0, p)) == pytest.approx(0.0316227766, rel=1e-5)

    def test_channel_coeff_anti_aligned(self):
        p, lay, fad = self._single_link()
        assert channel_coeff(lay, fad, -lay.directions[0, 0], 0, 0, p) == 0

    def test_smoothed_matches_exact_for_sharp_m(self):
        p, lay, fad = self._single_link()
        p = SystemParams(num_aps=1, num_users=1, rician_k=1e12, smoothness=2000.0)
        q = lay.directions[0, 0]
        exact = channel_coeff(lay, fad, q, 0, 0, p, "exact")
        smooth = channel_coeff(lay, fad, q, 0, 0, p, "smoothed")
        assert abs(smooth - exact) / abs(exact) < 1e-4
