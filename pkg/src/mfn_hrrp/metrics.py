"""Profile similarity metrics and the aspect-windowed top metric."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .core import CoiMask, MfnComponents, RangeProfile
from .decomposition import DecompositionParams, mfn_decompose
from .segmentation import coi_mask


class UndefinedMetricError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DecomposedProfile:
    rp: RangeProfile
    comps: MfnComponents
    mask: CoiMask

    @property
    def aspect_deg(self) -> float:
        return self.rp.aspect_deg


def decompose(rp: RangeProfile, params: DecompositionParams = DecompositionParams()) -> DecomposedProfile:
    mask = coi_mask(rp, params.seg)
    return DecomposedProfile(rp, mfn_decompose(rp, params, mask=mask), mask)


def _check_lengths(x1, x2):
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != x2.shape:
        raise ValueError(f"length mismatch: {x1.shape} vs {x2.shape}")
    return x1, x2


def mse(x1, x2) -> float:
    """Squared Euclidean distance (a sum, not a mean)."""
    x1, x2 = _check_lengths(x1, x2)
    d = x1 - x2
    return float(np.dot(d, d))


def cosine(x1, x2) -> float:
    x1, x2 = _check_lengths(x1, x2)
    s1, s2 = np.max(np.abs(x1), initial=0.0), np.max(np.abs(x2), initial=0.0)
    if s1 == 0 or s2 == 0:
        raise UndefinedMetricError("cosine of a zero-norm vector")
    x1, x2 = x1 / s1, x2 / s2
    n1 = np.dot(x1, x1)
    n2 = np.dot(x2, x2)
    # sqrt(n*n) == n exactly, so cosine(x, x) is exactly 1
    return float(np.clip(np.dot(x1, x2) / np.sqrt(n1 * n2), -1.0, 1.0))


def mse_f(d1: DecomposedProfile, d2: DecomposedProfile) -> float:
    """MSE of the f components divided by the mean LRP (cells)."""
    mean_lrp = (d1.mask.lrp_cells + d2.mask.lrp_cells) / 2
    if mean_lrp == 0:
        raise UndefinedMetricError("mse_f with no target in either profile")
    return mse(d1.comps.f, d2.comps.f) / mean_lrp


def centered_features(d: DecomposedProfile) -> np.ndarray:
    """f minus its mean over the profile's own COI."""
    if d.mask.empty:
        return d.comps.f.copy()
    return d.comps.f - d.comps.f[d.mask.bits].mean()


def cos_f(d1: DecomposedProfile, d2: DecomposedProfile) -> float:
    """Cosine of the centered f components over the union of both COIs."""
    union = d1.mask.bits | d2.mask.bits
    if not union.any():
        raise UndefinedMetricError("cos_f with an empty COI union")
    return cosine(centered_features(d1)[union], centered_features(d2)[union])


def mse_raw(d1: DecomposedProfile, d2: DecomposedProfile) -> float:
    return mse(d1.rp.cells, d2.rp.cells)


def mse_lrp(d1: DecomposedProfile, d2: DecomposedProfile) -> float:
    """Raw-profile MSE normalized by mean LRP, the scale-matched baseline."""
    mean_lrp = (d1.mask.lrp_cells + d2.mask.lrp_cells) / 2
    if mean_lrp == 0:
        raise UndefinedMetricError("LRP-normalized mse with no target in either profile")
    return mse_raw(d1, d2) / mean_lrp


def cosine_raw(d1: DecomposedProfile, d2: DecomposedProfile) -> float:
    return cosine(d1.rp.cells, d2.rp.cells)


@dataclass(frozen=True)
class MetricSpec:
    kind: str
    orientation: str

    def __post_init__(self):
        if self.kind not in METRICS:
            raise ValueError(f"unknown metric {self.kind!r}; choose from {sorted(METRICS)}")
        if self.orientation != METRICS[self.kind][1]:
            raise ValueError(f"{self.kind} must be {METRICS[self.kind][1]}d")

    @classmethod
    def of(cls, kind: str) -> "MetricSpec":
        if kind not in METRICS:
            raise ValueError(f"unknown metric {kind!r}; choose from {sorted(METRICS)}")
        return cls(kind, METRICS[kind][1])

    @property
    def fn(self) -> Callable[[DecomposedProfile, DecomposedProfile], float]:
        return METRICS[self.kind][0]

    @property
    def maximize(self) -> bool:
        return self.orientation == "maximize"


METRICS = {
    "mse": (mse_raw, "minimize"),
    "cosine": (cosine_raw, "maximize"),
    "mse_f": (mse_f, "minimize"),
    "cos_f": (cos_f, "maximize"),
}
DEFAULT_METRICS = tuple(METRICS)


def circular_distance_deg(a, b):
    d = np.abs(np.asarray(a, dtype=float) - b) % 360.0
    return np.minimum(d, 360.0 - d)


def top_metric(query: DecomposedProfile, candidates: Iterable[DecomposedProfile],
               spec: MetricSpec, half_window_deg: float = 5.0) -> Optional[float]:
    """Best metric value against candidates within +-half_window_deg of the query aspect.

    Returns None when no candidate is in the window or the metric is
    undefined for all of them.
    """
    best = None
    fn = spec.fn
    for c in candidates:
        if circular_distance_deg(query.aspect_deg, c.aspect_deg) > half_window_deg:
            continue
        try:
            value = fn(query, c)
        except UndefinedMetricError:
            continue
        if best is None or (value > best if spec.maximize else value < best):
            best = value
    return best
