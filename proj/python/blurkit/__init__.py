"""Defocus-blur region detection toolkit.

Thin wrapper over the C++ core: sharpness maps from DCT-coefficient
statistics, pulse-coupled neural network segmentation, precision/recall
evaluation and EDAS ranking.
"""

from ._blurkit import (
    BlurMapConfig,
    DcrParams,
    FormatError,
    IoError,
    PcnnParams,
    PipelineConfig,
    RefineParams,
    bilateral_filter,
    blur_map,
    compose,
    config_help,
    connected_components,
    convolve,
    dct2,
    edas_rank,
    f_alpha,
    gaussian_kernel,
    load_gray,
    make_fixture,
    parse_config,
    pcnn_run,
    pr_curve,
    precision_recall,
    save_pgm,
    segment,
)

__all__ = [
    "BlurMapConfig",
    "DcrParams",
    "FormatError",
    "IoError",
    "PcnnParams",
    "PipelineConfig",
    "RefineParams",
    "bilateral_filter",
    "blur_map",
    "compose",
    "config_help",
    "connected_components",
    "convolve",
    "dct2",
    "edas_rank",
    "f_alpha",
    "gaussian_kernel",
    "load_gray",
    "make_fixture",
    "parse_config",
    "pcnn_run",
    "pr_curve",
    "precision_recall",
    "save_pgm",
    "segment",
]

__version__ = "1.0.0"
