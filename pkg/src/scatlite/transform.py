"""First-order scattering: spectral convolution, modulus, low-pass, 2^J
subsampling.

The subsampling is spectral: averaging the 2^J x 2^J periodization blocks of
a spectrum and taking a small inverse DFT is mathematically identical to
decimating the filtered signal on the full grid, but never materializes the
full-resolution averaged map.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .filterbank import FilterBank, FilterBankConfig

__all__ = [
    "ScatteringCoeffs",
    "scatter",
    "coefficient_count",
    "translate",
    "LAYOUT",
]

LAYOUT = "per channel: [x*phi, |x*psi_{j,theta}|*phi for j asc, theta asc]"


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("SCATLITE_THREADS", "1")))
    except ValueError:
        return 1


def fft2(a: np.ndarray) -> np.ndarray:
    return sfft.fft2(a, workers=_workers())


def ifft2(a: np.ndarray) -> np.ndarray:
    return sfft.ifft2(a, workers=_workers())


@dataclass(frozen=True)
class ScatteringCoeffs:
    """Sx: (C*(1+|Theta|*J), N/2^J, N/2^J) real coefficients.

    Channel order per input channel follows ``LAYOUT``.  ``config_hash``
    binds the tensor to the bank configuration (and its normalization
    convention) that produced it.
    """

    data: np.ndarray
    config_hash: str
    layout: str = LAYOUT


def _as_channels(x: np.ndarray) -> np.ndarray:
    """Accept (H, W) or (C, H, W); return (C, H, W) float64."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim == 2:
        a = a[None]
    if a.ndim != 3 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square (C, N, N) or (N, N) input, got {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("non-finite input values")
    return a


def fold_spectrum(v: np.ndarray, k: int) -> np.ndarray:
    """Average the k x k periodization blocks: the spectrum of the k-fold
    decimated signal."""
    n = v.shape[-1]
    lead = v.shape[:-2]
    return v.reshape(lead + (k, n // k, k, n // k)).mean(axis=(-4, -2))


def scatter(x: np.ndarray, bank: FilterBank, *, reflect_pad: bool = False) -> ScatteringCoeffs:
    """Compute Sx for every input channel.

    With ``reflect_pad`` the input is reflect-padded by 2^J pixels per side
    before the (periodic) transform and the coefficient border is cropped
    off; the bank must then be built for the padded grid size.  All analytic
    guarantees are stated for the periodic (default) path.
    """
    a = _as_channels(x)
    cfg = bank.config
    J = cfg.scale_J
    k = 1 << J

    if reflect_pad:
        pad = k
        if cfg.grid_size != a.shape[-1] + 2 * pad:
            raise ValueError(
                f"reflect_pad needs a bank built at {a.shape[-1] + 2 * pad}, "
                f"bank has {cfg.grid_size}"
            )
        a = np.pad(a, ((0, 0), (pad, pad), (pad, pad)), mode="reflect")
    elif cfg.grid_size != a.shape[-1]:
        raise ValueError(f"input grid {a.shape[-1]} != bank grid {cfg.grid_size}")

    psis = bank.stack
    phi = bank.low_pass
    out = []
    for ch in a:
        X = fft2(ch)
        low = ifft2(fold_spectrum(X * phi, k)).real
        U = np.abs(ifft2(X[None] * psis))
        band = ifft2(fold_spectrum(fft2(U) * phi[None], k)).real
        out.append(np.concatenate([low[None], band], axis=0))
    data = np.concatenate(out, axis=0)

    if reflect_pad:
        data = data[:, 1:-1, 1:-1]
    return ScatteringCoeffs(data=data, config_hash=cfg.config_hash())


def coefficient_count(config: FilterBankConfig) -> int:
    """Coefficients per input channel: (1 + |Theta|*J) * N^2 / 2^(2J)."""
    config.validate()
    n, J, L = config.grid_size, config.scale_J, config.num_angles
    return (1 + L * J) * (n * n) // (1 << (2 * J))


def translate(x: np.ndarray, a) -> np.ndarray:
    """Circular grid shift by the integer pair a: y(u) = x(u - a)."""
    ax0, ax1 = int(a[0]), int(a[1])
    arr = np.asarray(x)
    return np.roll(arr, (ax0, ax1), axis=(-2, -1))
