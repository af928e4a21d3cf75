import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ra_cellfree import (
    AssociationMatrix,
    SystemParams,
    compute_sinr,
    conjugate_precoder,
    draw_fading,
    layout_from_positions,
    rate_report,
)
from ra_cellfree.channel import FadingRealization, channel_matrix
from ra_cellfree.optimizer import aligned_pointing
from ra_cellfree.rates import report_from_sinr

from conftest import instance


def test_precoder_definition():
    assert conjugate_precoder(3 + 4j) == pytest.approx((3 - 4j) / 5)
    assert conjugate_precoder(0j) == 1


@settings(max_examples=200)
@given(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False))
def test_coherent_identity(h):
    prod = h * conjugate_precoder(h)
    assert prod.imag == pytest.approx(0.0, abs=1e-9 * max(abs(h), 1))
    assert prod.real == pytest.approx(abs(h), rel=1e-12, abs=1e-300)


def single_link(kappa=1e12):
    p = SystemParams(num_aps=1, num_users=1, rician_k=kappa)
    lay = layout_from_positions([[0, 0, 1.0]], [[0, 0, 0.0]])
    return p, lay, draw_fading(lay, p, 0), AssociationMatrix(np.array([[1]]))


def test_single_link_sinr():
    p, lay, fad, B = single_link(kappa=7.94)
    F = aligned_pointing(lay, B)
    h = channel_matrix(lay, fad, F, p)[0, 0]
    assert compute_sinr(lay, fad, B, F, p, 0) == pytest.approx(
        p.tx_power * abs(h) ** 2 / p.noise_power, rel=1e-12)


def test_single_link_rate_closed_form():
    p, lay, fad, B = single_link()
    rep = rate_report(lay, fad, B, aligned_pointing(lay, B), p)
    assert rep.per_user_sinr[0] == pytest.approx(6.310e8, rel=1e-3)
    assert rep.sum_rate == pytest.approx(29.232967237295306, abs=1e-4)


def test_report_from_sinr():
    rep = report_from_sinr(np.ones(4))
    np.testing.assert_allclose(rep.per_user_rate, 1.0)
    assert rep.sum_rate == 4.0
    assert report_from_sinr(np.zeros(3)).sum_rate == 0.0


def test_index_out_of_range(small_instance):
    p, lay, fad, B = small_instance
    with pytest.raises(IndexError):
        compute_sinr(lay, fad, B, aligned_pointing(lay, B), p, 3)


def test_zero_gain_interferer():
    # AP 0 serves user 0 at +x and points there; user 1 sits behind it
    lay = layout_from_positions([[0, 0, 0], [-60, 0, 0]], [[50, 0, 0], [-50, 0, 0]])
    p = SystemParams(num_aps=2, num_users=2)
    fad = draw_fading(lay, p, 3)
    B = AssociationMatrix(np.eye(2, dtype=int))
    F = np.array([[1.0, 0, 0], [1.0, 0, 0]])
    H = channel_matrix(lay, fad, F, p)
    assert H[0, 1] == 0
    # user 1 then sees no interference at all
    sinr = compute_sinr(lay, fad, B, F, p, 1)
    assert sinr == pytest.approx(p.tx_power * abs(H[1, 1]) ** 2 / p.noise_power, rel=1e-12)


def scalar_sinr(H, serving, P, noise, k, mode):
    """Straight-line loops over the raw channel matrix."""
    L, K = len(H), len(H[0])

    def phi(l, i):
        h = H[l][i]
        return h.conjugate() / abs(h) if abs(h) > 0 else 1.0

    desired = 0j
    for l in range(L):
        if serving[l] == k:
            desired += H[l][k] * phi(l, k)
    per_user = []
    for i in range(K):
        if i == k:
            continue
        s = 0j
        for l in range(L):
            if serving[l] == i:
                s += H[l][k] * phi(l, i)
        per_user.append(s)
    if mode == "as_printed":
        interference = abs(sum(per_user)) ** 2
    else:
        interference = sum(abs(s) ** 2 for s in per_user)
    return P * abs(desired) ** 2 / (P * interference + noise)


@pytest.mark.parametrize("mode", ["as_printed", "per_interferer"])
def test_sinr_matches_scalar_oracle(mode):
    for seed in range(5):
        p, lay, fad, B = instance(4, 2, seed)
        F = aligned_pointing(lay, B)
        H = channel_matrix(lay, fad, F, p).tolist()
        for k in range(2):
            expected = scalar_sinr(H, B.serving.tolist(), p.tx_power, p.noise_power, k, mode)
            got = compute_sinr(lay, fad, B, F, p, k, denom_mode=mode)
            assert got == pytest.approx(expected, rel=1e-12)


def test_phase_rotation_invariance(small_instance):
    p, lay, fad, B = small_instance
    F = aligned_pointing(lay, B)
    g = fad.g.copy()
    k = 1
    g[:, k] *= np.exp(1j * 0.7)
    rotated = FadingRealization(g)
    for user in range(lay.num_users):
        assert compute_sinr(lay, rotated, B, F, p, user) == pytest.approx(
            compute_sinr(lay, fad, B, F, p, user), rel=1e-10)


def test_alignment_improves_single_user(rng):
    p, lay, fad, B = instance(4, 1, 5)
    aligned = aligned_pointing(lay, B)
    for _ in range(30):
        F = rng.standard_normal((4, 3))
        F /= np.linalg.norm(F, axis=1, keepdims=True)
        base = compute_sinr(lay, fad, B, F, p, 0)
        for l in range(4):
            G = F.copy()
            G[l] = aligned[l]
            assert compute_sinr(lay, fad, B, G, p, 0) >= base * (1 - 1e-12)


def test_sum_equals_parts(small_instance):
    p, lay, fad, B = small_instance
    rep = rate_report(lay, fad, B, aligned_pointing(lay, B), p)
    assert rep.sum_rate == float(np.sum(rep.per_user_rate))
    np.testing.assert_allclose(rep.per_user_rate, np.log2(1 + rep.per_user_sinr))
