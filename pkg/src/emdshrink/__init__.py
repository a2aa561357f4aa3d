"""EMD-domain speech denoising with NormalShrink thresholding, plus the
Wiener and wavelet-shrinkage baselines and an output-SNR benchmark."""

__version__ = "0.1.0"

from .signal_core import (Frame, NoiseSpec, Signal, add_awgn, segment, snr_db,
                          snr_out_paper)
from .emd import (BoundaryPolicy, ImfDecomposition, InsufficientExtrema,
                  SiftConfig, decompose, find_extrema, mean_envelope,
                  reconstruct, sift_one_imf, spline_envelope)
from .shrinkage import (Flavor, ThresholdMethod, ThresholdSpec, hard_threshold,
                        mad_sigma, normal_shrink_threshold, soft_threshold,
                        universal_threshold)
from .pipeline import (DenoiseConfig, DenoiseTrace, Dominance, FrameDecision,
                       NoisePolicy, classify_frame, denoise_emd_normalshrink,
                       denoise_emd_universal, estimate_noise_sigma)
from .baselines import (DwtConfig, HaarPyramid, WienerConfig, dwt_forward,
                        dwt_inverse, universal_dwt_denoise, wiener_denoise)
from .io_wav import AudioFile, WavError, load_wav, save_wav
