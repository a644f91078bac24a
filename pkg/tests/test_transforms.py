import math

import numpy as np
import pytest

from jetrope.operators import bounded_coordinate, signed_bounded_coordinate
from jetrope.transforms import (
    AttentionTensors,
    HeadLayout,
    apply,
    build_transform,
    constrain_damping,
    constrain_shear,
    damping_raw_value,
    default_frequencies,
    max_scalar_factor,
    norm_profile,
    relative_score_check,
    scalar_factors,
    shear_raw_value,
    sigma_obstruction,
    window_center,
)


def rotation(phi):
    return np.array([[math.cos(phi), -math.sin(phi)],
                     [math.sin(phi), math.cos(phi)]])


class TestHeadLayout:
    def test_divisibility(self):
        with pytest.raises(ValueError):
            HeadLayout.create(head_dim=10, order=2)

    def test_default_frequency_grid(self):
        layout = HeadLayout.create(head_dim=16, order=2, theta=10000.0)
        k = np.arange(4)
        np.testing.assert_allclose(layout.frequencies, 10000.0 ** (-2 * k / 16))

    def test_channel_budget(self):
        assert HeadLayout.create(head_dim=24, order=3).n_frequencies == 4
        assert HeadLayout.create(head_dim=24, order=1).n_frequencies == 12

    def test_constraint_maps_round_trip(self):
        for gamma in (0.01, 0.3):
            assert constrain_damping(damping_raw_value(gamma)) == pytest.approx(gamma)
        for eta in (0.05, -0.09):
            assert constrain_shear(shear_raw_value(eta)) == pytest.approx(eta)
        with pytest.raises(ValueError):
            shear_raw_value(0.2)

    def test_from_raw_params(self):
        layout = HeadLayout.from_raw_params(head_dim=8, order=2, a=-4.6, b=0.1)
        assert layout.gamma_raw is not None
        np.testing.assert_allclose(layout.dampings,
                                   constrain_damping(np.full(2, -4.6)))


class TestBuildTransform:
    def test_position_zero_is_identity(self):
        layout = HeadLayout.create(head_dim=8, order=2, gamma=0.05, eta=0.1)
        tr = build_transform(layout, [0])
        for f in range(layout.n_frequencies):
            np.testing.assert_allclose(tr.blocks[0, f], np.eye(4), atol=1e-15)
            np.testing.assert_allclose(tr.inverse_t_blocks[0, f], np.eye(4),
                                       atol=1e-15)

    def test_inverse_blocks_are_inverses(self):
        layout = HeadLayout.create(head_dim=12, order=3, variant="scaled",
                                   gamma=0.0, eta=0.08, c=0.7, L=1024.0)
        tr = build_transform(layout, [513])
        for f in range(layout.n_frequencies):
            product = tr.blocks[0, f] @ tr.inverse_t_blocks[0, f].T
            np.testing.assert_allclose(product, np.eye(6), atol=1e-12)

    def test_center_invariance_of_relative_product(self):
        layout = HeadLayout.create(head_dim=8, order=2, variant="scaled",
                                   gamma=0.0, eta=0.05, c=1.0, L=1024.0)
        i, j = 700, 140
        reference = None
        for center in (None, 0.0, 512.0, 4096.0):
            tr = build_transform(layout, [i, j], center=center)
            prod = np.linalg.solve(tr.blocks[0, 0], tr.blocks[1, 0])
            if reference is None:
                reference = prod
            else:
                np.testing.assert_allclose(prod, reference, rtol=1e-10,
                                           atol=1e-12)

    def test_scaled_pre_cancellation_factor_at_8192(self):
        layout = HeadLayout.create(head_dim=8, order=2, variant="scaled",
                                   gamma=0.0, eta=0.05, c=1.0, L=1024.0)
        tr = build_transform(layout, [0, 8192])
        factor = max_scalar_factor(tr)
        assert abs(factor - math.exp(8.0)) / math.exp(8.0) < 0.10
        key, query = scalar_factors(tr)
        assert key[1, 0] == pytest.approx(math.exp(8.0))
        assert query[1, 0] == pytest.approx(math.exp(-8.0))

    def test_overflow_propagates_for_raw_at_extreme_positions(self):
        layout = HeadLayout.create(head_dim=8, order=2, gamma=0.02, eta=0.05)
        assert not build_transform(layout, [0, 256]).overflow
        assert build_transform(layout, [0, 8192]).overflow

    def test_window_center(self):
        assert window_center([10, 20, 110]) == 60.0


class TestApply:
    def test_rope_reduction(self):
        # order one with zero damping must match a plain rotary rotation
        layout = HeadLayout.create(head_dim=8, order=1, gamma=0.0, eta=0.0)
        rng = np.random.default_rng(1)
        q = rng.standard_normal((2, 3, 5, 8))
        k = rng.standard_normal((2, 3, 5, 8))
        tensors = AttentionTensors(q, k, np.arange(5))
        qt, kt = apply(layout, tensors)
        for t in range(5):
            for f, w in enumerate(layout.frequencies):
                R = rotation(-w * t)
                np.testing.assert_allclose(
                    kt[..., t, 2 * f:2 * f + 2],
                    np.einsum("ij,bhj->bhi", R, k[..., t, 2 * f:2 * f + 2]),
                    atol=1e-12)
                np.testing.assert_allclose(
                    qt[..., t, 2 * f:2 * f + 2],
                    np.einsum("ij,bhj->bhi", R, q[..., t, 2 * f:2 * f + 2]),
                    atol=1e-12)

    def test_damped_score_factorizes(self):
        # eta = 0: the transformed score is e^{-gamma (i-j)} times the
        # rotary score of the same frequencies
        layout = HeadLayout.create(head_dim=4, order=2, variant="damped",
                                   gamma=0.03, eta=0.0)
        rng = np.random.default_rng(2)
        q, k = rng.standard_normal(4), rng.standard_normal(4)
        i, j = 40, 12
        lhs, rhs, rel = relative_score_check(layout, q, k, i, j)
        # with eta = 0 every 2-wide pair inside a block rotates by the
        # same angle, so the block is blockdiag(R, R)
        rotary = 0.0
        for pair in range(layout.head_dim // 2):
            w = layout.frequencies[pair // layout.order]
            R = rotation(w * (i - j))
            rotary += q[2 * pair:2 * pair + 2] @ R @ k[2 * pair:2 * pair + 2]
        assert lhs == pytest.approx(math.exp(-0.03 * (i - j)) * rotary)
        assert rel < 1e-12

    def test_shape_validation(self):
        layout = HeadLayout.create(head_dim=8, order=2)
        rng = np.random.default_rng(0)
        q = rng.standard_normal((1, 1, 3, 8))
        with pytest.raises(ValueError):
            AttentionTensors(q, q[..., :6], np.arange(3))
        with pytest.raises(ValueError):
            AttentionTensors(q, q, np.arange(4))
        with pytest.raises(ValueError):
            AttentionTensors(q, q, np.array([0, 0, 1]))
        bad_layout = HeadLayout.create(head_dim=12, order=2)
        tensors = AttentionTensors(q, q, np.arange(3))
        with pytest.raises(ValueError):
            apply(bad_layout, tensors)

    def test_bilinearity(self):
        layout = HeadLayout.create(head_dim=8, order=2, variant="scaled",
                                   gamma=0.0, eta=0.06, c=0.5)
        rng = np.random.default_rng(3)
        q1, q2, k1 = (rng.standard_normal(8) for _ in range(3))
        i, j = 300, 120
        s = relative_score_check(layout, 2.0 * q1 + q2, k1, i, j)[0]
        s1 = relative_score_check(layout, q1, k1, i, j)[0]
        s2 = relative_score_check(layout, q2, k1, i, j)[0]
        assert s == pytest.approx(2.0 * s1 + s2, rel=1e-12)


class TestRelativeScoreCheck:
    def test_equal_positions_give_plain_inner_product(self):
        layout = HeadLayout.create(head_dim=8, order=2, gamma=0.02, eta=0.05)
        rng = np.random.default_rng(4)
        q, k = rng.standard_normal(8), rng.standard_normal(8)
        lhs, rhs, rel = relative_score_check(layout, q, k, 57, 57)
        assert lhs == pytest.approx(float(q @ k))
        assert rel < 1e-12

    def test_scaled_identity_far_positions(self):
        layout = HeadLayout.create(head_dim=8, order=2, variant="scaled",
                                   gamma=0.0, eta=0.05, c=1.0, L=1024.0)
        rng = np.random.default_rng(5)
        q = rng.standard_normal(8)
        k = rng.standard_normal(8)
        q, k = q / np.linalg.norm(q), k / np.linalg.norm(k)
        _, _, rel = relative_score_check(layout, q, k, 4096, 100)
        assert rel < 1e-8

    def test_lag_purity_under_shifts(self):
        layout = HeadLayout.create(head_dim=8, order=2, variant="scaled",
                                   gamma=0.0, eta=0.07, c=0.5, L=1024.0)
        rng = np.random.default_rng(6)
        q, k = rng.standard_normal(8), rng.standard_normal(8)
        base = relative_score_check(layout, q, k, 900, 350)[0]
        for shift in (64, 512, 2048):
            moved = relative_score_check(layout, q, k, 900 + shift, 350 + shift)[0]
            assert abs(moved - base) / abs(base) < 1e-8

    def test_stabilized_positionwise_differs_from_pairwise(self):
        layout = HeadLayout.create(head_dim=8, order=2, variant="stabilized",
                                   gamma=0.0, eta=0.1, L=1024.0)
        rng = np.random.default_rng(7)
        q, k = rng.standard_normal(8), rng.standard_normal(8)
        _, _, rel = relative_score_check(layout, q, k, 1500, 200)
        assert rel > 1e-3

    def test_stabilized_score_changes_under_shift(self):
        layout = HeadLayout.create(head_dim=8, order=2, variant="stabilized",
                                   gamma=0.0, eta=0.1, L=1024.0)
        rng = np.random.default_rng(8)
        q, k = rng.standard_normal(8), rng.standard_normal(8)
        base = relative_score_check(layout, q, k, 150, 50)[0]
        moved = relative_score_check(layout, q, k, 2150, 2050)[0]
        assert abs(moved - base) / abs(base) > 1e-3


class TestSigmaObstruction:
    def test_identity_sigma_is_pure_lag(self):
        assert sigma_obstruction(lambda t: t, 0.2, 10, 4) == pytest.approx(1.2)

    def test_bounded_tau_depends_on_absolute_pair(self):
        sigma = lambda t: signed_bounded_coordinate(t, 1024.0)
        near = sigma_obstruction(sigma, 0.1, 100, 50)
        far = sigma_obstruction(sigma, 0.1, 1000, 950)
        assert near != pytest.approx(far)
        assert abs(near - far) > 1e-2

    def test_zero_eta_kills_the_coefficient(self):
        assert sigma_obstruction(lambda t: bounded_coordinate(abs(t), 64.0),
                                 0.0, 9, 3) == 0.0


class TestNormProfile:
    def test_orthogonal_case_is_flat(self):
        layout = HeadLayout.create(head_dim=8, order=1, gamma=0.0, eta=0.0)
        q_ratio, k_ratio = norm_profile(layout, np.arange(64))
        np.testing.assert_allclose(q_ratio, 1.0, atol=1e-12)
        np.testing.assert_allclose(k_ratio, 1.0, atol=1e-12)

    def test_product_bounded_by_block_condition(self):
        layout = HeadLayout.create(head_dim=12, order=2, variant="scaled",
                                   gamma=0.002, eta=0.08, c=0.5, L=1024.0)
        positions = np.arange(0, 2048, 64)
        q_ratio, k_ratio = norm_profile(layout, positions)
        tr = build_transform(layout, positions)
        kappa = 1.0
        for t in range(positions.size):
            for f in range(layout.n_frequencies):
                s = np.linalg.svd(tr.blocks[t, f], compute_uv=False)
                kappa = max(kappa, s[0] / s[-1])
        product = q_ratio * k_ratio
        assert np.all(product <= kappa * (1 + 1e-9))
        assert np.all(product >= 1 / kappa * (1 - 1e-9))

    def test_contragredient_growth_signature(self):
        # scaled order-three block with the learned-diagnostic parameters:
        # keys grow by a factor on the order of 1e2, queries shrink
        layout = HeadLayout.create(head_dim=48, order=3, variant="scaled",
                                   gamma=0.0024, eta=0.104, c=0.5, L=1024.0)
        q_ratio, k_ratio = norm_profile(layout, np.arange(2048))
        assert 50.0 < k_ratio[-1] < 5000.0
        assert q_ratio[-1] < 0.05


def test_default_frequencies_shape():
    freqs = default_frequencies(32, 2, 10000.0)
    assert freqs.shape == (8,)
    assert freqs[0] == 1.0
    assert np.all(np.diff(freqs) < 0)
