import dataclasses

import numpy as np
import pytest

from scatlite import (FilterBankConfig, Init, ReconstructionConfig,
                      ScatteringCoeffs, build_filter_bank, psnr, reconstruct,
                      relative_err, scatter, scatter_jvp, scatter_vjp)


# ------------------------------------------------------------------- vjp

def test_vjp_zero_cotangent_gives_zero_gradient(bank16, rng):
    y = rng.random((16, 16))
    g = ScatteringCoeffs(np.zeros((25, 2, 2)), bank16.config_hash())
    assert np.array_equal(scatter_vjp(y, bank16, g), np.zeros((16, 16)))


def test_vjp_matches_central_finite_differences(bank16):
    rng = np.random.default_rng(11)
    h = 1e-4
    for _ in range(5):
        y = rng.random((16, 16))
        g = rng.standard_normal((25, 2, 2))
        g /= np.linalg.norm(g)
        d = rng.standard_normal((16, 16))
        d /= np.linalg.norm(d)
        grad = scatter_vjp(y, bank16, ScatteringCoeffs(g, bank16.config_hash()))

        def L(z):
            return float(np.sum(scatter(z, bank16).data * g))

        fd = (L(y + h * d) - L(y - h * d)) / (2 * h)
        assert abs(float(np.sum(grad * d)) - fd) <= 1e-4


def test_vjp_linear_in_cotangent(bank16, rng):
    y = rng.random((16, 16))
    g1 = rng.standard_normal((25, 2, 2))
    g2 = rng.standard_normal((25, 2, 2))
    h = bank16.config_hash()
    v12 = scatter_vjp(y, bank16, ScatteringCoeffs(g1 + g2, h))
    v1 = scatter_vjp(y, bank16, ScatteringCoeffs(g1, h))
    v2 = scatter_vjp(y, bank16, ScatteringCoeffs(g2, h))
    assert np.abs(v12 - (v1 + v2)).max() <= 1e-10


def test_vjp_shape_follows_input(bank16, rng):
    y3 = rng.random((3, 16, 16))
    g = rng.standard_normal((75, 2, 2))
    out = scatter_vjp(y3, bank16, ScatteringCoeffs(g, bank16.config_hash()))
    assert out.shape == (3, 16, 16)
    with pytest.raises(ValueError):
        scatter_vjp(y3[0], bank16, ScatteringCoeffs(g, bank16.config_hash()))


def test_adjoint_consistency(bank16):
    """<J(y)d, g> == <d, vjp(y, g)> away from the modulus kink."""
    rng = np.random.default_rng(5)
    y = 1.0 + rng.random((16, 16))  # strictly positive, moduli well above 0
    d = rng.standard_normal((16, 16))
    g = rng.standard_normal((25, 2, 2))
    jv = scatter_jvp(y, bank16, d).data
    lhs = float(np.sum(jv * g))
    rhs = float(np.sum(d * scatter_vjp(
        y, bank16, ScatteringCoeffs(g, bank16.config_hash()))))
    assert abs(lhs - rhs) <= 1e-8 * max(abs(lhs), abs(rhs), 1.0)


# ------------------------------------------------------------ reconstruct

def test_config_validation():
    with pytest.raises(ValueError):
        ReconstructionConfig(max_iters=0).validate()
    with pytest.raises(ValueError):
        ReconstructionConfig(lr_drop_factor=1.5).validate()
    with pytest.raises(ValueError):
        ReconstructionConfig(target_err=2.0).validate()
    with pytest.raises(ValueError):
        ReconstructionConfig(init=Init.PROVIDED_IMAGE).validate()
    ReconstructionConfig().validate()


def test_provided_image_fixed_point(bank16, rng):
    x = rng.random((16, 16))
    target = scatter(x, bank16)
    cfg = ReconstructionConfig(init=Init.PROVIDED_IMAGE, init_image=x,
                               max_iters=50)
    trace = reconstruct(target, bank16, cfg)
    assert trace.iterations_run == 1
    assert trace.err_history[0] <= 1e-10
    assert not trace.diverged


def test_config_hash_mismatch_rejected(bank16, bank32, rng):
    target = scatter(rng.random((32, 32)), bank32)
    with pytest.raises(ValueError):
        reconstruct(target, bank16, ReconstructionConfig(max_iters=1))


def test_trace_lengths_and_best_so_far(bank16, rng):
    x = rng.random((16, 16))
    cfg = ReconstructionConfig(max_iters=30, seed=4)
    trace = reconstruct(scatter(x, bank16), bank16, cfg)
    assert trace.iterations_run == len(trace.err_history)
    assert trace.iterations_run == len(trace.loss_history)
    assert all(e >= 0 for e in trace.err_history)
    running = np.minimum.accumulate(trace.loss_history)
    assert np.all(np.diff(running) <= 0.0 + 1e-30)
    assert trace.seed == 4


def test_determinism_bit_identical(bank16, rng):
    x = rng.random((16, 16))
    target = scatter(x, bank16)
    cfg = ReconstructionConfig(max_iters=10, seed=7)
    t1 = reconstruct(target, bank16, cfg)
    t2 = reconstruct(target, bank16, cfg)
    assert t1.err_history == t2.err_history
    assert t1.loss_history == t2.loss_history
    assert np.array_equal(t1.final_image, t2.final_image)


def test_divergence_flag_on_nonfinite_loss(bank16, rng):
    x = rng.random((16, 16))
    target = scatter(x, bank16)
    cfg = ReconstructionConfig(max_iters=8, initial_lr=1e160, seed=2)
    trace = reconstruct(target, bank16, cfg)
    assert trace.diverged
    assert trace.iterations_run <= 8
    assert np.all(np.isfinite(trace.final_image))


def test_small_grid_descent_reduces_error(bank16, rng):
    x = rng.random((16, 16))
    target = scatter(x, bank16)
    trace = reconstruct(target, bank16,
                        ReconstructionConfig(max_iters=150, seed=1))
    assert min(trace.err_history) < 0.3 * trace.err_history[0]


# ---------------------------------------------------------------- metrics

def test_relative_err_identity_and_homogeneity(bank32, rng):
    x = rng.random((32, 32))
    assert relative_err(x, x, bank32) == 0.0
    assert relative_err(2.0 * x, x, bank32) == pytest.approx(1.0, abs=1e-12)


def test_relative_err_zero_target_rejected(bank32):
    z = np.zeros((32, 32))
    with pytest.raises(ValueError):
        relative_err(z, z, bank32)


def test_psnr_exact_values(rng):
    a = 0.25 * np.ones((1, 8, 8))
    assert psnr(a + 0.1, a) == pytest.approx(20.0, abs=1e-12)
    assert psnr(a, a) == float("inf")
    with pytest.raises(ValueError):
        psnr(a, a[:, :4, :4])
