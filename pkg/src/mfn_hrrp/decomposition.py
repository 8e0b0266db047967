"""Mask / features / noise decomposition of a range profile."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import CoiMask, MfnComponents, RangeProfile
from .segmentation import SegmentationParams, coi_mask


class DegenerateInputError(ValueError):
    """Raised when an operation needs a non-empty COI and gets none."""


@dataclass(frozen=True)
class DecompositionParams:
    sigma: float = 0.5
    seg: SegmentationParams = field(default_factory=SegmentationParams)
    decay_rate: float = 2.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not self.decay_rate > 0:
            raise ValueError("decay_rate must be positive")


def mean_coi_amplitude(rp: RangeProfile, mask: CoiMask) -> float:
    if mask.empty:
        raise DegenerateInputError("mean over an empty COI mask")
    return float(rp.cells[mask.bits].mean())


def distance_to_coi(coi) -> np.ndarray:
    """Index distance from every cell to the nearest COI cell."""
    coi = np.asarray(coi, dtype=bool)
    ones = np.flatnonzero(coi)
    if ones.size == 0:
        raise DegenerateInputError("distance to an empty COI")
    idx = np.arange(coi.size)
    right = np.searchsorted(ones, idx).clip(max=ones.size - 1)
    left = (right - 1).clip(min=0)
    return np.minimum(np.abs(ones[right] - idx), np.abs(idx - ones[left]))


def smooth_with_distance(m, coi, decay_rate: float = 2.0) -> np.ndarray:
    """Soft target mask: 1 on the COI, ``exp(-decay_rate * dist)`` elsewhere.

    ``m`` only fixes the support (its own scale is normalized away).
    Far cells underflow to 0 once ``decay_rate * dist`` exceeds ~745.
    """
    coi = np.asarray(coi, dtype=bool)
    if np.asarray(m).shape != coi.shape:
        raise ValueError("m and coi must have the same length")
    return np.exp(-decay_rate * distance_to_coi(coi))


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Sampled Gaussian of std ``sigma`` cells, radius ceil(4 sigma), unit sum."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    radius = max(1, math.ceil(4 * sigma))
    t = np.arange(-radius, radius + 1)
    k = np.exp(-0.5 * (t / sigma) ** 2)
    return k / k.sum()


def gaussian_filter_1d(x, sigma: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    k = gaussian_kernel(sigma)
    radius = k.size // 2
    padded = np.pad(x, radius, mode="edge")
    return np.convolve(padded, k, mode="valid")


def mfn_decompose(rp: RangeProfile, params: DecompositionParams = DecompositionParams(),
                  mask: CoiMask | None = None) -> MfnComponents:
    """Split ``rp`` into (m, f, n) with f + n == rp.

    A profile with no cells of interest is pure noise: m = f = 0, n = rp.
    Pass ``mask`` to reuse a segmentation computed elsewhere.
    """
    if mask is None:
        mask = coi_mask(rp, params.seg)
    cells = rp.cells
    if mask.empty:
        zero = np.zeros_like(cells)
        return MfnComponents(zero, zero, cells.copy(), params.sigma)
    m = mean_coi_amplitude(rp, mask) * mask.bits
    soft = smooth_with_distance(m, mask.bits, params.decay_rate)
    f = gaussian_filter_1d(cells * soft, params.sigma)
    return MfnComponents(m, f, cells - f, params.sigma)
