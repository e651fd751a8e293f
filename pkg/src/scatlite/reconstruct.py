"""Scattering inversion: reverse-mode gradients of the scattering pipeline
and an ADAM descent on ||S y - S x||^2.

The descent variable lives on a [0, 255] pixel scale internally -- ADAM step
sizes are absolute, so the classic schedule (learning rate 10, divided by 10
every 200 iterations) only makes sense against that value range.  Inputs and
outputs of the public API stay in [0, 1]; by positive homogeneity of S the
two parametrizations define the same optimization problem.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .filterbank import FilterBank
from .transform import ScatteringCoeffs, fft2, fold_spectrum, ifft2, scatter

__all__ = [
    "Init",
    "ReconstructionConfig",
    "ReconstructionTrace",
    "scatter_vjp",
    "scatter_jvp",
    "reconstruct",
    "relative_err",
    "psnr",
]

MODULUS_GRAD_FLOOR = 1e-12  # below this |z| the modulus subgradient is 0
PIXEL_SCALE = 255.0


class Init(str, Enum):
    ZEROS = "zeros"
    UNIFORM_NOISE = "uniform-noise"
    PROVIDED_IMAGE = "provided-image"


@dataclass(frozen=True)
class ReconstructionConfig:
    max_iters: int = 1000
    initial_lr: float = 10.0
    lr_drop_every: int = 200
    lr_drop_factor: float = 0.1
    target_err: float = 2e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    init: Init = Init.UNIFORM_NOISE
    seed: int = 0
    init_image: Optional[np.ndarray] = None

    def validate(self) -> None:
        if min(self.max_iters, self.lr_drop_every) < 1:
            raise ValueError("iteration counts must be positive")
        if min(self.initial_lr, self.target_err) <= 0:
            raise ValueError("initial_lr and target_err must be positive")
        if not (0.0 < self.lr_drop_factor < 1.0):
            raise ValueError("lr_drop_factor must lie in (0, 1)")
        if self.target_err >= 1.0:
            raise ValueError("target_err must be < 1")
        if self.init == Init.PROVIDED_IMAGE and self.init_image is None:
            raise ValueError("init=provided-image requires init_image")


@dataclass
class ReconstructionTrace:
    err_history: list
    loss_history: list
    final_image: np.ndarray
    iterations_run: int
    seed: int
    diverged: bool = False


def _unfold_spectrum(w: np.ndarray, k: int) -> np.ndarray:
    """Adjoint of fold_spectrum: tile the low-resolution spectrum over the
    k x k blocks and divide by k^2."""
    reps = (1,) * (w.ndim - 2) + (k, k)
    return np.tile(w, reps) / (k * k)


def _vjp_channel(x: np.ndarray, psis: np.ndarray, phi: np.ndarray, J: int,
                 g: np.ndarray) -> np.ndarray:
    """Gradient of <scatter(x), g> for one real channel x (N, N)."""
    n = x.shape[-1]
    k = 1 << J
    nn = n * n
    X = fft2(x)
    Z = ifft2(X[None] * psis)
    az = np.abs(Z)

    # adjoints used below: fold <-> unfold/k^2, ifft2 <-> fft2/n^2 (complex
    # inner product sum(a * conj(b))), fft2 <-> n^2 * ifft2
    g_sub = fft2(g) / (n // k) ** 2          # (1+B, n/k, n/k) -> low-res spectra
    Gm = np.conj(phi)[None] * _unfold_spectrum(g_sub, k)

    GX = Gm[0]
    gU = nn * ifft2(Gm[1:])
    safe = np.where(az > MODULUS_GRAD_FLOOR, az, 1.0)
    gZ = np.where(az > MODULUS_GRAD_FLOOR, gU.real * Z / safe, 0.0)
    GX = GX + np.sum(np.conj(psis) * fft2(gZ), axis=0) / nn
    return nn * ifft2(GX).real


def _jvp_channel(x: np.ndarray, psis: np.ndarray, phi: np.ndarray, J: int,
                 d: np.ndarray) -> np.ndarray:
    """Directional derivative of scatter at x along d, one channel."""
    k = 1 << J
    X, D = fft2(x), fft2(d)
    Z = ifft2(X[None] * psis)
    dZ = ifft2(D[None] * psis)
    az = np.abs(Z)
    safe = np.where(az > MODULUS_GRAD_FLOOR, az, 1.0)
    dU = np.where(az > MODULUS_GRAD_FLOOR, (Z.real * dZ.real + Z.imag * dZ.imag) / safe, 0.0)
    dlow = ifft2(fold_spectrum(D * phi, k)).real
    dband = ifft2(fold_spectrum(fft2(dU) * phi[None], k)).real
    return np.concatenate([dlow[None], dband], axis=0)


def _split_channels(x: np.ndarray) -> np.ndarray:
    a = np.asarray(x, dtype=np.float64)
    return a[None] if a.ndim == 2 else a


def scatter_vjp(y: np.ndarray, bank: FilterBank, cotangent: ScatteringCoeffs) -> np.ndarray:
    """Gradient of <scatter(y), cotangent> with respect to y.

    Shape follows y: (N, N) in, (N, N) out; (C, N, N) in, (C, N, N) out.
    """
    a = _split_channels(y)
    J, L = bank.config.scale_J, bank.config.num_angles
    per = 1 + J * L
    g = cotangent.data
    if g.shape[0] != per * a.shape[0]:
        raise ValueError(
            f"cotangent has {g.shape[0]} channels, expected {per * a.shape[0]}"
        )
    grads = np.stack([
        _vjp_channel(a[c], bank.stack, bank.low_pass, J, g[c * per:(c + 1) * per])
        for c in range(a.shape[0])
    ])
    return grads[0] if np.asarray(y).ndim == 2 else grads


def scatter_jvp(y: np.ndarray, bank: FilterBank, direction: np.ndarray) -> ScatteringCoeffs:
    """Linearization of scatter at y applied to a perturbation direction."""
    a = _split_channels(y)
    d = _split_channels(direction)
    if a.shape != d.shape:
        raise ValueError("direction shape must match y")
    J = bank.config.scale_J
    out = np.concatenate([
        _jvp_channel(a[c], bank.stack, bank.low_pass, J, d[c])
        for c in range(a.shape[0])
    ])
    return ScatteringCoeffs(data=out, config_hash=bank.config_hash())


def reconstruct(target: ScatteringCoeffs, bank: FilterBank,
                cfg: ReconstructionConfig = ReconstructionConfig()) -> ReconstructionTrace:
    """ADAM descent on ||scatter(y) - target||^2 with the step schedule
    lr(t) = initial_lr * lr_drop_factor^floor((t-1)/lr_drop_every).

    Stops when the relative scattering error reaches ``target_err`` or after
    ``max_iters`` iterations; a non-finite loss aborts with the best image
    seen and ``diverged`` set.  The returned image is not clipped.
    """
    cfg.validate()
    if target.config_hash != bank.config_hash():
        raise ValueError("target coefficients were produced by a different bank config")

    n = bank.config.grid_size
    J, L = bank.config.scale_J, bank.config.num_angles
    per = 1 + J * L
    channels, rem = divmod(target.data.shape[0], per)
    if rem != 0:
        raise ValueError("target channel count inconsistent with bank")

    T = PIXEL_SCALE * np.asarray(target.data, dtype=np.float64)
    norm_T = float(np.linalg.norm(T))
    if norm_T == 0.0:
        raise ValueError("target coefficients are identically zero")

    rng = np.random.default_rng(cfg.seed)
    shape = (channels, n, n)
    if cfg.init == Init.ZEROS:
        z = np.zeros(shape)
    elif cfg.init == Init.UNIFORM_NOISE:
        z = PIXEL_SCALE * rng.random(shape)
    else:
        z = PIXEL_SCALE * _split_channels(cfg.init_image).copy()
        if z.shape != shape:
            raise ValueError(f"init_image shape {z.shape} != {shape}")

    m = np.zeros(shape)
    v = np.zeros(shape)
    b1, b2, eps = cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps

    errs, losses = [], []
    best_err, best_z = np.inf, z.copy()
    diverged = False

    for t in range(1, cfg.max_iters + 1):
        S = scatter(z, bank).data
        R = S - T
        with np.errstate(over="ignore"):  # inf loss is the divergence signal
            loss = float(np.sum(R * R))
        err = float(np.sqrt(loss) / norm_T)
        errs.append(err)
        losses.append(loss)
        if not np.isfinite(loss):
            diverged = True
            break
        if err < best_err:
            best_err, best_z = err, z.copy()
        if err <= cfg.target_err:
            break

        grad = 2.0 * scatter_vjp(z, bank, ScatteringCoeffs(R, target.config_hash))
        lr = cfg.initial_lr * cfg.lr_drop_factor ** ((t - 1) // cfg.lr_drop_every)
        m = b1 * m + (1.0 - b1) * grad
        v = b2 * v + (1.0 - b2) * grad * grad
        m_hat = m / (1.0 - b1**t)
        v_hat = v / (1.0 - b2**t)
        z = z - lr * m_hat / (np.sqrt(v_hat) + eps)

    return ReconstructionTrace(
        err_history=errs,
        loss_history=losses,
        final_image=best_z / PIXEL_SCALE,
        iterations_run=len(errs),
        seed=cfg.seed,
        diverged=diverged,
    )


def relative_err(x_tilde: np.ndarray, x: np.ndarray, bank: FilterBank) -> float:
    """||S x_tilde - S x|| / ||S x|| over all coefficients."""
    Sx = scatter(x, bank).data
    denom = float(np.linalg.norm(Sx))
    if denom == 0.0:
        raise ValueError("relative error undefined: ||S x|| = 0")
    St = scatter(x_tilde, bank).data
    return float(np.linalg.norm(St - Sx) / denom)


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """10*log10(1 / MSE) for [0, 1]-ranged images; +inf when identical."""
    aa, bb = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    if aa.shape != bb.shape:
        raise ValueError(f"shape mismatch {aa.shape} vs {bb.shape}")
    mse = float(np.mean((aa - bb) ** 2))
    if mse == 0.0:
        return float("inf")
    return 10.0 * np.log10(1.0 / mse)
