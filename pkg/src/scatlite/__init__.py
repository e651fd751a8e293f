"""scatlite: first-order scattering transforms for images.

Gaussian-derived (Gabor/Morlet) filter banks built in the frequency domain,
FFT-based scattering coefficients with 2^J subsampling, Littlewood-Paley
frame audits, analytic Gaussian-blob and translation-stability oracles, and
ADAM gradient-descent inversion of the representation.
"""
from .filterbank import (Family, FilterBank, FilterBankConfig,
                         LittlewoodPaleyReport, band_pass_spectrum,
                         build_filter_bank, dump_filters, envelope_spectrum,
                         littlewood_paley, low_pass_spectrum)
from .io import (bilinear_resize, center_crop, load_image, load_tensor,
                 save_image, save_tensor)
from .oracles import (BlobSpec, StabilityReport, analytic_blob_scatter,
                      blob_hat, blob_signal, translate_exact,
                      translation_bound_check, translation_lhs)
from .reconstruct import (Init, ReconstructionConfig, ReconstructionTrace,
                          psnr, reconstruct, relative_err, scatter_jvp,
                          scatter_vjp)
from .transform import (ScatteringCoeffs, coefficient_count, scatter,
                        translate)

__version__ = "0.1.0"

__all__ = [
    "Family",
    "FilterBank",
    "FilterBankConfig",
    "LittlewoodPaleyReport",
    "band_pass_spectrum",
    "build_filter_bank",
    "dump_filters",
    "envelope_spectrum",
    "littlewood_paley",
    "low_pass_spectrum",
    "ScatteringCoeffs",
    "coefficient_count",
    "scatter",
    "translate",
    "Init",
    "ReconstructionConfig",
    "ReconstructionTrace",
    "reconstruct",
    "relative_err",
    "psnr",
    "scatter_jvp",
    "scatter_vjp",
    "BlobSpec",
    "StabilityReport",
    "analytic_blob_scatter",
    "blob_hat",
    "blob_signal",
    "translate_exact",
    "translation_bound_check",
    "translation_lhs",
    "bilinear_resize",
    "center_crop",
    "load_image",
    "load_tensor",
    "save_image",
    "save_tensor",
    "__version__",
]
