"""Same-ship vs different-ship discriminability benchmark.

Profiles are grouped in aspect bins; inside each bin, pairs of ships of
similar length are compared. For every query profile the top metric is
taken against the other profiles of its own ship (same) and against the
profiles of the paired ship (diff), both within the aspect half-window.
A metric discriminates well when the two means are far apart.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .core import Dataset
from .decomposition import DecompositionParams
from .metrics import DEFAULT_METRICS, MetricSpec, circular_distance_deg, decompose


@dataclass(frozen=True)
class PairingParams:
    bin_width_deg: float = 10.0
    n_pairs_per_bin: int = 10
    n_per_ship_per_bin: int = 30
    length_tol_m: float = 5.0
    min_length_m: float = 50.0
    pairing_seed: int = 0

    def __post_init__(self):
        if not self.bin_width_deg > 0:
            raise ValueError("bin_width_deg must be positive")
        n_bins = 360.0 / self.bin_width_deg
        if abs(n_bins - round(n_bins)) > 1e-9:
            raise ValueError("bin_width_deg must divide 360")
        if self.n_pairs_per_bin < 1 or self.n_per_ship_per_bin < 1:
            raise ValueError("pair and profile counts must be positive")
        if self.length_tol_m < 0 or self.min_length_m < 0:
            raise ValueError("length_tol_m and min_length_m must be non-negative")

    @property
    def n_bins(self) -> int:
        return int(round(360.0 / self.bin_width_deg))


@dataclass(frozen=True)
class ShipPair:
    bin_index: int
    ship_a: str
    ship_b: str
    indices_a: tuple[int, ...]
    indices_b: tuple[int, ...]


@dataclass
class MetricBinStats:
    mean_top_same: Optional[float]
    mean_top_diff: Optional[float]
    relative_evolution: Optional[float]
    n_same: int
    n_diff: int
    absent_same: int
    absent_diff: int

    @property
    def n_comparisons(self) -> int:
        return self.n_same + self.n_diff


@dataclass
class BinReport:
    bin_index: int
    n_pairs: int
    metrics: dict[str, MetricBinStats] = field(default_factory=dict)


def bin_by_aspect(ds: Dataset, bin_width_deg: float = 10.0) -> dict[int, list[int]]:
    n_bins = int(round(360.0 / bin_width_deg))
    bins: dict[int, list[int]] = {}
    for i, p in enumerate(ds):
        b = min(int(math.floor(p.aspect_deg / bin_width_deg)), n_bins - 1)
        bins.setdefault(b, []).append(i)
    return bins


def ship_lengths(ds: Dataset) -> dict[str, float]:
    out: dict[str, float] = {}
    for p in ds:
        out.setdefault(p.ship_id, p.ship_length_m)
    return out


def select_pairs(ds: Dataset, params: PairingParams = PairingParams()) -> list[ShipPair]:
    """Length-matched ship pairs per aspect bin, with sampled profile indices."""
    lengths = ship_lengths(ds)
    pairs = []
    for b, idx in sorted(bin_by_aspect(ds, params.bin_width_deg).items()):
        by_ship: dict[str, list[int]] = {}
        for i in idx:
            by_ship.setdefault(ds[i].ship_id, []).append(i)
        eligible = sorted(
            sid for sid, rows in by_ship.items()
            if len(rows) >= params.n_per_ship_per_bin and lengths[sid] >= params.min_length_m
        )
        candidates = [
            (a, c) for a, c in itertools.combinations(eligible, 2)
            if abs(lengths[a] - lengths[c]) <= params.length_tol_m
        ]
        if not candidates:
            continue
        rng = np.random.default_rng([params.pairing_seed, b])
        order = rng.permutation(len(candidates))[: params.n_pairs_per_bin]
        for k in sorted(order):
            a, c = candidates[k]
            pick = lambda rows: tuple(sorted(  # noqa: E731
                int(r) for r in rng.choice(rows, params.n_per_ship_per_bin, replace=False)))
            pairs.append(ShipPair(b, a, c, pick(by_ship[a]), pick(by_ship[c])))
    return pairs


def relative_evolution(mean_top_same, mean_top_diff, orientation: str) -> Optional[float]:
    """Relative same/diff gap, positive when the metric separates ships."""
    if mean_top_same is None or mean_top_diff is None:
        return None
    if orientation == "minimize":
        if mean_top_same == 0:
            return None
        return (mean_top_diff - mean_top_same) / mean_top_same
    if orientation == "maximize":
        if mean_top_diff == 0:
            return None
        return (mean_top_same - mean_top_diff) / abs(mean_top_diff)
    raise ValueError(f"unknown orientation {orientation!r}")


class _Features:
    """Decomposed profiles of a dataset, stacked for vectorized metrics."""

    def __init__(self, ds: Dataset, indices, params: DecompositionParams):
        self.rows = {i: k for k, i in enumerate(indices)}
        decomposed = [decompose(ds[i], params) for i in indices]
        s = ds.s
        self.raw = np.array([d.rp.cells for d in decomposed]).reshape(-1, s)
        self.f = np.array([d.comps.f for d in decomposed]).reshape(-1, s)
        self.bits = np.array([d.mask.bits for d in decomposed]).reshape(-1, s).astype(float)
        self.lrp = np.array([d.mask.lrp_cells for d in decomposed], dtype=float)
        self.aspect = np.array([d.aspect_deg for d in decomposed])
        counts = self.bits.sum(axis=1)
        coi_sum = (self.f * self.bits).sum(axis=1)
        centre = np.divide(coi_sum, counts, out=np.zeros_like(coi_sum), where=counts > 0)
        self.g = self.f - centre[:, None]

    def take(self, indices):
        return np.array([self.rows[i] for i in indices], dtype=int)


def _cosine_matrix(x, y):
    num = x @ y.T
    den = np.sqrt(np.einsum("ij,ij->i", x, x)[:, None] * np.einsum("ij,ij->i", y, y)[None, :])
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(den > 0, num / np.where(den > 0, den, 1), np.nan)
    return np.clip(out, -1.0, 1.0)


def _mse_matrix(x, y):
    d = x[:, None, :] - y[None, :, :]
    return np.einsum("ijk,ijk->ij", d, d)


def _lrp_normalize(values, lrp_q, lrp_c):
    mean_lrp = (lrp_q[:, None] + lrp_c[None, :]) / 2
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(mean_lrp > 0, values / np.where(mean_lrp > 0, mean_lrp, 1), np.nan)


def _cos_f_matrix(g_q, b_q, g_c, b_c):
    # sums over the union U = b_q + b_c - b_q*b_c, expanded into products
    bg_q, bg_c = b_q * g_q, b_c * g_c
    num = bg_q @ g_c.T + g_q @ bg_c.T - bg_q @ bg_c.T
    g2_q, g2_c = g_q * g_q, g_c * g_c
    nq = (b_q * g2_q).sum(1)[:, None] + g2_q @ b_c.T - (b_q * g2_q) @ b_c.T
    nc = (b_c * g2_c).sum(1)[None, :] + b_q @ g2_c.T - b_q @ (b_c * g2_c).T
    den = np.sqrt(nq * nc)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(den > 0, num / np.where(den > 0, den, 1), np.nan)
    return np.clip(out, -1.0, 1.0)


def metric_matrix(kind: str, feats: _Features, q, c, normalize_mse: bool = True) -> np.ndarray:
    """Metric between rows ``q`` and ``c`` of ``feats``; NaN where undefined."""
    if kind == "mse":
        out = _mse_matrix(feats.raw[q], feats.raw[c])
        return _lrp_normalize(out, feats.lrp[q], feats.lrp[c]) if normalize_mse else out
    if kind == "cosine":
        return _cosine_matrix(feats.raw[q], feats.raw[c])
    if kind == "mse_f":
        return _lrp_normalize(_mse_matrix(feats.f[q], feats.f[c]), feats.lrp[q], feats.lrp[c])
    if kind == "cos_f":
        return _cos_f_matrix(feats.g[q], feats.bits[q], feats.g[c], feats.bits[c])
    raise ValueError(f"unknown metric {kind!r}")


def _tops(values, window_ok, maximize):
    """Row-wise extremum over in-window, defined entries; NaN if none."""
    ok = window_ok & ~np.isnan(values)
    fill = -np.inf if maximize else np.inf
    masked = np.where(ok, values, fill)
    best = masked.max(axis=1) if maximize else masked.min(axis=1)
    return np.where(ok.any(axis=1), best, np.nan)


def _pair_tops(feats, spec, own, other, half_window_deg, normalize_mse):
    window = circular_distance_deg(feats.aspect[own][:, None], feats.aspect[own][None, :]) <= half_window_deg
    np.fill_diagonal(window, False)
    same = _tops(metric_matrix(spec.kind, feats, own, own, normalize_mse), window, spec.maximize)
    window = circular_distance_deg(feats.aspect[own][:, None], feats.aspect[other][None, :]) <= half_window_deg
    diff = _tops(metric_matrix(spec.kind, feats, own, other, normalize_mse), window, spec.maximize)
    return same, diff


def _mean(values: list[float]) -> Optional[float]:
    return float(math.fsum(values) / len(values)) if values else None


def discriminability(ds: Dataset, pairs: list[ShipPair],
                     params: DecompositionParams = DecompositionParams(),
                     specs=None, half_window_deg: float = 5.0,
                     normalize_mse: bool = True) -> list[BinReport]:
    """Per-bin mean top metrics for same-ship and cross-ship comparisons.

    Queries come from both ships of each pair and are pooled; the query
    itself never appears among its same-ship candidates. ``mse`` is
    divided by the mean LRP unless ``normalize_mse`` is False.
    """
    specs = [MetricSpec.of(k) for k in DEFAULT_METRICS] if specs is None else list(specs)
    needed = sorted({i for p in pairs for i in p.indices_a + p.indices_b})
    feats = _Features(ds, needed, params)
    acc: dict[int, dict[str, list[list[float]]]] = {}
    n_pairs: dict[int, int] = {}
    for pair in pairs:
        n_pairs[pair.bin_index] = n_pairs.get(pair.bin_index, 0) + 1
        a, b = feats.take(pair.indices_a), feats.take(pair.indices_b)
        per_bin = acc.setdefault(pair.bin_index, {s.kind: [[], [], [0], [0]] for s in specs})
        for spec in specs:
            same_vals, diff_vals, absent_same, absent_diff = per_bin[spec.kind]
            for own, other in ((a, b), (b, a)):
                same, diff = _pair_tops(feats, spec, own, other, half_window_deg, normalize_mse)
                same_vals.extend(same[~np.isnan(same)].tolist())
                diff_vals.extend(diff[~np.isnan(diff)].tolist())
                absent_same[0] += int(np.isnan(same).sum())
                absent_diff[0] += int(np.isnan(diff).sum())
    reports = []
    for b in sorted(acc):
        report = BinReport(b, n_pairs[b])
        for spec in specs:
            same_vals, diff_vals, absent_same, absent_diff = acc[b][spec.kind]
            ms, md = _mean(same_vals), _mean(diff_vals)
            report.metrics[spec.kind] = MetricBinStats(
                ms, md, relative_evolution(ms, md, spec.orientation),
                len(same_vals), len(diff_vals), absent_same[0], absent_diff[0])
        reports.append(report)
    return reports


def mean_relative_evolution(reports: list[BinReport], kind: str) -> Optional[float]:
    """Relative evolution of ``kind`` averaged over bins where it is defined."""
    vals = [r.metrics[kind].relative_evolution for r in reports
            if kind in r.metrics and r.metrics[kind].relative_evolution is not None]
    return _mean(vals)


def sigma_sweep(ds: Dataset, pairs: list[ShipPair], sigmas,
                params: DecompositionParams = DecompositionParams(), specs=None,
                half_window_deg: float = 5.0, normalize_mse: bool = True):
    """Run :func:`discriminability` once per Gaussian width.

    Returns ``{sigma: (reports, {metric: bin-averaged relative evolution})}``.
    """
    sigmas = list(sigmas)
    if not sigmas:
        raise ValueError("sigma list must not be empty")
    specs = [MetricSpec.of(k) for k in DEFAULT_METRICS] if specs is None else list(specs)
    out = {}
    for sigma in sigmas:
        reports = discriminability(ds, pairs, replace(params, sigma=float(sigma)), specs,
                                   half_window_deg, normalize_mse)
        out[float(sigma)] = (reports, {s.kind: mean_relative_evolution(reports, s.kind)
                                       for s in specs})
    return out
