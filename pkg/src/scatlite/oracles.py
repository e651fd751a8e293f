"""Analytic verification oracles.

Two closed-form facts about Gaussian filter banks are checked numerically
elsewhere in the test suite:

* Gaussian-blob identity: for a signal with spectrum exp(-omega^T Sigma
  omega) and a pure Gabor filter, |x * psi| is proportional to x * |psi|,
  and |psi| itself has a Gaussian (envelope) spectrum -- so the whole
  scattering output has a modulus-free closed form, channel by channel, up
  to one proportionality constant per channel.

* Translation stability: shifting x by a moves each band-pass output by a
  unimodular phase up to an error controlled by the filter's spectral
  concentration: lhs <= ||x|| * sqrt(4 eps^2 + ||a||^2 eta0^2), where
  |psi_hat| <= eps outside the ball of radius eta0 around its central
  frequency.  The inequality is guaranteed on the grid when max|psi_hat|
  <= 1, which holds for bank-normalized filters.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .filterbank import FilterBank, Family, envelope_spectrum
from .transform import ScatteringCoeffs, fft2, fold_spectrum, ifft2

__all__ = [
    "BlobSpec",
    "StabilityReport",
    "blob_hat",
    "blob_signal",
    "analytic_blob_scatter",
    "translation_bound_check",
    "translation_lhs",
    "translate_exact",
]

ALIAS_WARN_FRACTION = 0.01  # boundary amplitude vs peak that flags aliasing


@dataclass(frozen=True)
class BlobSpec:
    """Gaussian blob with spectrum exp(-omega^T Sigma omega)."""

    sigma_matrix: np.ndarray
    grid_size: int

    def validate(self) -> None:
        sig = np.asarray(self.sigma_matrix, dtype=np.float64)
        if sig.shape != (2, 2):
            raise ValueError(f"sigma_matrix must be 2x2, got {sig.shape}")
        if abs(sig[0, 1] - sig[1, 0]) > 1e-12:
            raise ValueError("sigma_matrix must be symmetric to 1e-12")
        if np.linalg.eigvalsh(sig).min() < -1e-12:
            raise ValueError("sigma_matrix must be positive semidefinite")
        if self.grid_size < 2:
            raise ValueError("grid_size must be >= 2")


@dataclass(frozen=True)
class StabilityReport:
    lhs: float
    rhs: float
    eta0: float
    epsilon: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def _omega_grid(n: int):
    w = 2.0 * np.pi * np.fft.fftfreq(n)
    return np.meshgrid(w, w, indexing="ij")


def blob_hat(spec: BlobSpec) -> np.ndarray:
    """exp(-omega^T Sigma omega) sampled on the DFT grid."""
    sig = np.asarray(spec.sigma_matrix, dtype=np.float64)
    w1, w2 = _omega_grid(spec.grid_size)
    return np.exp(-(sig[0, 0] * w1**2 + 2.0 * sig[0, 1] * w1 * w2 + sig[1, 1] * w2**2))


def blob_signal(spec: BlobSpec) -> np.ndarray:
    """Real blob image (N, N), peak-normalized to 1.

    When Sigma is so small that the spectrum has not decayed below 1% of its
    peak by the Nyquist boundary, unit-step sampling folds spectral copies
    onto each other (the spatial signal aliases) and a warning is emitted.
    Sigma = 0 is the extreme case -- spectrum identically 1, i.e. the
    discrete delta / Dirac-comb limit -- and is additionally flagged as
    degenerate; rank-deficient Sigma yields a line signal and trips the same
    aliasing warning through its undecayed direction."""
    spec.validate()
    sig = np.asarray(spec.sigma_matrix, dtype=np.float64)
    hat = blob_hat(spec)
    x = ifft2(hat).real
    peak = x.max()
    if peak <= 0:
        raise ValueError("degenerate blob: nonpositive peak")

    eigs = np.linalg.eigvalsh(sig)
    if eigs.max() <= 1e-15:
        warnings.warn(
            "Sigma = 0 is the Dirac-comb limit: spectrum identically 1, "
            "signal degenerates to the grid delta", stacklevel=2)
    # spectral mass left at the Nyquist boundary of the grid (spectrum peak
    # is 1 at omega = 0)
    nyq = spec.grid_size // 2
    boundary = max(float(hat[nyq, :].max()), float(hat[:, nyq].max()))
    if boundary > ALIAS_WARN_FRACTION:
        warnings.warn(
            f"Sigma too small: spectrum at the Nyquist boundary is "
            f"{boundary:.2%} of peak (> {ALIAS_WARN_FRACTION:.0%}); the "
            f"sampled signal aliases", stacklevel=2)
    return x / peak


def analytic_blob_scatter(spec: BlobSpec, bank: FilterBank) -> ScatteringCoeffs:
    """Closed-form scattering of a Gaussian blob, Gabor banks only.

    Each band channel is x * (|psi_{j,theta}| * phi_J) computed purely by
    Gaussian spectral products (no modulus), subsampled exactly like the
    numeric transform; channels are defined up to one proportionality
    constant each, so compare with cosine similarity or a fitted scalar."""
    spec.validate()
    cfg = bank.config
    if cfg.family != Family.GABOR:
        raise ValueError(
            "analytic_blob_scatter requires a Gabor bank: the closed form "
            "relies on pure Gaussian envelopes, and the Morlet zero-mean "
            "correction breaks the modulus identity"
        )
    if spec.grid_size != cfg.grid_size:
        raise ValueError("blob grid and bank grid differ")

    n, J, L = cfg.grid_size, cfg.scale_J, cfg.num_angles
    k = 1 << J
    xh = blob_hat(spec)
    phi = bank.low_pass
    chans = [ifft2(fold_spectrum(xh * phi, k)).real]
    for j in range(J):
        for theta in cfg.angles:
            env = envelope_spectrum(n, j, theta, cfg.sigma0, cfg.slant)
            chans.append(ifft2(fold_spectrum(xh * env * phi, k)).real)
    return ScatteringCoeffs(data=np.stack(chans), config_hash=cfg.config_hash())


def translate_exact(x: np.ndarray, a) -> np.ndarray:
    """Translation by a real-valued pair via an exact spectral phase shift.
    Integer shifts reproduce the circular roll; fractional shifts may leave
    a tiny imaginary residue at the Nyquist row/column, which is dropped."""
    arr = np.asarray(x, dtype=np.float64)
    n = arr.shape[-1]
    w1, w2 = _omega_grid(n)
    phase = np.exp(-1j * (w1 * float(a[0]) + w2 * float(a[1])))
    return ifft2(fft2(arr) * phase).real


def _filter_and_center(bank: FilterBank, j: int, theta_index: int,
                       unit_energy: bool):
    h = bank.band_pass[(j, theta_index)]
    if unit_energy:
        h = h / np.sqrt(np.mean(np.abs(h) ** 2))  # spatial l2 norm = 1
    n = h.shape[0]
    w1, w2 = _omega_grid(n)
    pk = int(np.argmax(np.abs(h)))
    return h, (w1.flat[pk], w2.flat[pk]), w1, w2


def translation_lhs(x: np.ndarray, a, bank: FilterBank, j: int,
                    theta_index: int) -> float:
    """|| x_a * psi - exp(-i omega_c . a) (x * psi) || without the tail-radius
    machinery (usable at any scale, including filters too wide for a valid
    eta0 on the grid)."""
    h, wc, w1, w2 = _filter_and_center(bank, j, theta_index, unit_energy=False)
    n = h.shape[0]
    X = fft2(np.asarray(x, dtype=np.float64))
    shift = np.exp(-1j * (w1 * float(a[0]) + w2 * float(a[1])))
    ref = np.exp(-1j * (wc[0] * float(a[0]) + wc[1] * float(a[1])))
    return float(np.linalg.norm((shift - ref) * X * h) / n)


def translation_bound_check(x: np.ndarray, a, bank: FilterBank, j: int,
                            theta_index: int, tail_eps: float,
                            unit_energy: bool = False) -> StabilityReport:
    """Measure (eta0, eps) for psi_{j,theta} on the grid and compare the
    realized phase-corrected translation error against
    ||x|| * sqrt(4 eps^2 + ||a||^2 eta0^2).

    eta0 is the largest principal-coordinate distance from the spectral peak
    among grid frequencies where |psi_hat| > tail_eps; eps is the measured
    maximum outside that ball.  Raises when no such radius exists inside the
    Nyquist disc (tail_eps too small for this filter/grid)."""
    if tail_eps <= 0:
        raise ValueError("tail_eps must be positive")
    h, wc, w1, w2 = _filter_and_center(bank, j, theta_index, unit_energy)
    n = h.shape[0]

    dist = np.hypot(w1 - wc[0], w2 - wc[1])
    above = np.abs(h) > tail_eps
    eta0 = float(dist[above].max()) if above.any() else 0.0
    if eta0 >= np.pi:
        raise ValueError(
            f"tail_eps={tail_eps} too small on this grid: |psi_hat| exceeds it "
            f"out to radius {eta0:.2f} >= pi, no valid ball inside the Nyquist disc"
        )
    outside = dist > eta0
    epsilon = float(np.abs(h[outside]).max()) if outside.any() else 0.0

    xr = np.asarray(x, dtype=np.float64)
    X = fft2(xr)
    shift = np.exp(-1j * (w1 * float(a[0]) + w2 * float(a[1])))
    ref = np.exp(-1j * (wc[0] * float(a[0]) + wc[1] * float(a[1])))
    lhs = float(np.linalg.norm((shift - ref) * X * h) / n)

    norm_x = float(np.linalg.norm(xr))
    norm_a = float(np.hypot(float(a[0]), float(a[1])))
    rhs = norm_x * float(np.sqrt(4.0 * epsilon**2 + norm_a**2 * eta0**2))
    return StabilityReport(lhs=lhs, rhs=rhs, eta0=eta0, epsilon=epsilon)
