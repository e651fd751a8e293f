"""
Filter bank tour: synthesis, geometry, and the frame audit
==========================================================

Builds the default directional Gaussian filter bank in the frequency
domain, inspects its geometry, and runs the Littlewood-Paley energy
audit that certifies it as a near-tight frame.
"""

import numpy as np

from scatlite import (FilterBankConfig, Family, build_filter_bank,
                      littlewood_paley)

# The bank is configured by value; equal configs hash equally, so
# coefficient files can be checked against the bank that made them.
cfg = FilterBankConfig(grid_size=128, scale_J=3, num_angles=8)
bank = build_filter_bank(cfg)
print(f"config hash        : {bank.config_hash()}")
print(f"band-pass filters  : {len(bank.band_pass)} (J={cfg.scale_J} scales "
      f"x {cfg.num_angles} angles)")
print(f"band-pass rescale  : {bank.bandpass_scale:.6f}")

# Each band-pass spectrum is a real array peaked near xi0 / 2^j rotated
# by theta_l = pi * l / L.  Larger j means lower central frequency.
for j in range(cfg.scale_J):
    h = bank.band_pass[(j, 0)]
    w = np.fft.fftfreq(cfg.grid_size) * 2 * np.pi
    peak = np.unravel_index(np.argmax(h), h.shape)
    print(f"scale j={j}: peak |psi_hat| = {h.max():.4f} at "
          f"omega = ({w[peak[0]]:+.3f}, {w[peak[1]]:+.3f})")

# The low-pass spectrum equals 1 at DC, so local averages are preserved.
print(f"low-pass at DC     : {bank.low_pass[0, 0]:.6f}")

# The audit evaluates the energy sum at every frequency inside the
# Nyquist disc.  The headline convention includes the reflected spectra
# (real signals see both half-planes); the single-sided sum is reported
# alongside and is necessarily lopsided for directional filters.
rep = littlewood_paley(bank)
print(f"frame deviation    : eps0 = {rep.epsilon0:.4f} "
      f"(energy in [{rep.min_energy:.4f}, {rep.max_energy:.4f}])")
print(f"single-sided range : [{rep.min_energy_single_sided:.4f}, "
      f"{rep.max_energy_single_sided:.4f}]")

# The Gabor variant keeps a small residual at DC; the default Morlet
# correction removes it exactly.
gabor = build_filter_bank(FilterBankConfig(grid_size=128, scale_J=3,
                                           family=Family.GABOR))
for name, b in (("morlet", bank), ("gabor", gabor)):
    dc = max(abs(h[0, 0]) for h in b.band_pass.values())
    print(f"{name:6s} worst band-pass DC value: {dc:.2e}")
