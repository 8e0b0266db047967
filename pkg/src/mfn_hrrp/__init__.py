"""Mask/features/noise decomposition and metrics for high-resolution range profiles."""

from .core import CoiMask, Dataset, DatasetFormatError, MfnComponents, RangeProfile, load_dataset, save_dataset
from .decomposition import DecompositionParams, DegenerateInputError, mfn_decompose
from .metrics import DecomposedProfile, MetricSpec, UndefinedMetricError, cos_f, cosine, decompose, mse, mse_f, top_metric
from .segmentation import SegmentationParams, coi_mask, lrp_meters, tlop

__all__ = [
    "CoiMask", "Dataset", "DatasetFormatError", "MfnComponents", "RangeProfile",
    "load_dataset", "save_dataset", "DecompositionParams", "DegenerateInputError",
    "mfn_decompose", "DecomposedProfile", "MetricSpec", "UndefinedMetricError",
    "cos_f", "cosine", "decompose", "mse", "mse_f", "top_metric",
    "SegmentationParams", "coi_mask", "lrp_meters", "tlop",
]
