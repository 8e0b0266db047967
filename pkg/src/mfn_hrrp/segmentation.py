"""Cells of interest, LRP and TLOP.

The cells of interest (COI) of a profile are found by smoothing with a
moving average, thresholding at a fraction of the smoothed maximum, then
closing small gaps. The length of the first object in the resulting mask
is the profile's LRP; TLOP is what a rectangle of the ship's dimensions
should project to at a given aspect.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import CoiMask, RangeProfile


@dataclass(frozen=True)
class SegmentationParams:
    uniform_window: int = 5
    threshold_frac: float = 0.5
    close_gap_cells: int = 14

    def __post_init__(self):
        if self.uniform_window < 1 or self.uniform_window % 2 == 0:
            raise ValueError("uniform_window must be an odd positive integer")
        if not 0.0 < self.threshold_frac <= 1.0:
            raise ValueError("threshold_frac must lie in (0, 1]")
        if self.close_gap_cells < 1:
            raise ValueError("close_gap_cells must be a positive integer")


def uniform_filter(x, window: int) -> np.ndarray:
    """Centered moving average with edge replication."""
    x = np.asarray(x, dtype=float)
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be odd and positive, got {window}")
    if window > x.size:
        raise ValueError(f"window {window} exceeds signal length {x.size}")
    if window == 1:
        return x.copy()
    half = window // 2
    padded = np.pad(x, half, mode="edge")
    return sliding_window_view(padded, window).mean(axis=1)


def morph_close(bits, gap: int) -> np.ndarray:
    """Binary closing that fills interior zero runs shorter than ``gap``.

    Dilation then erosion with a flat element of ``gap`` cells. The
    signal is zero-padded by ``gap`` cells on each side so runs touching
    the profile ends are never filled.
    """
    bits = np.asarray(bits).astype(bool)
    if gap < 1:
        raise ValueError("gap must be a positive integer")
    if gap == 1 or bits.size == 0:
        return bits.copy()
    padded = np.pad(bits, gap)
    # element {0..gap-1}: dilation looks back, erosion looks forward
    dilated = sliding_window_view(np.pad(padded, (gap - 1, 0)), gap).any(axis=1)
    closed = sliding_window_view(np.pad(dilated, (0, gap - 1)), gap).all(axis=1)
    return closed[gap:-gap]


def threshold_mask(smoothed, threshold_frac: float) -> np.ndarray:
    smoothed = np.asarray(smoothed, dtype=float)
    peak = smoothed.max(initial=0.0)
    if peak <= 0:
        return np.zeros(smoothed.shape, dtype=bool)
    return smoothed >= threshold_frac * peak


def coi_bits(cells, params: SegmentationParams = SegmentationParams()) -> np.ndarray:
    cells = np.asarray(cells, dtype=float)
    window = min(params.uniform_window, cells.size - (cells.size % 2 == 0))
    smoothed = uniform_filter(cells, window)
    return morph_close(threshold_mask(smoothed, params.threshold_frac), params.close_gap_cells)


def coi_mask(rp: RangeProfile, params: SegmentationParams = SegmentationParams()) -> CoiMask:
    """Segment the target cells of ``rp``. An all-zero profile gives an empty mask."""
    return CoiMask(coi_bits(rp.cells, params))


def tlop(asp_deg, length_m, width_m):
    """Projected length of a ``length_m`` x ``width_m`` rectangle seen at ``asp_deg``."""
    a = np.deg2rad(asp_deg)
    return length_m * np.abs(np.cos(a)) + width_m * np.abs(np.sin(a))


def lrp_meters(mask: CoiMask, delta_r_m: float) -> float:
    return mask.lrp_cells * delta_r_m
