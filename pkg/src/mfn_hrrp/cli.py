"""``mfn-hrrp`` command line: synth, segment, decompose, metrics, bench.

Exit codes: 0 success, 1 usage error, 2 data or configuration error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import os
import sys
import tempfile
from dataclasses import fields
from pathlib import Path

import numpy as np

from .bench import PairingParams, discriminability, select_pairs, sigma_sweep
from .core import DatasetFormatError, format_float, load_dataset, write_dataset
from .decomposition import DecompositionParams
from .metrics import DEFAULT_METRICS, METRICS, MetricSpec, UndefinedMetricError, decompose
from .reference import stratified_aspects
from .segmentation import SegmentationParams, coi_mask, lrp_meters, tlop
from .synth import SceneParams, make_ship, render_fleet

log = logging.getLogger("mfn_hrrp")


class UsageError(Exception):
    pass


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@contextlib.contextmanager
def atomic_write(path):
    """Open ``path`` for writing via a sibling temp file renamed on success."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def _fmt(value) -> str:
    return "" if value is None or (isinstance(value, float) and np.isnan(value)) else format_float(value)


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _build(cls, mapping, what):
    if mapping is None:
        return cls()
    if not isinstance(mapping, dict):
        raise ConfigError(f"{what} must be a JSON object")
    known = {f.name for f in fields(cls)}
    unknown = set(mapping) - known
    if unknown:
        raise ConfigError(f"unknown {what} keys: {sorted(unknown)}")
    try:
        return cls(**mapping)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {what}: {exc}") from exc


def _seg_params(args) -> SegmentationParams:
    return SegmentationParams(args.uniform_window, args.threshold_frac, args.close_gap_cells)


def _decomp_params(args) -> DecompositionParams:
    return DecompositionParams(args.sigma, _seg_params(args), args.decay_rate)


def _add_seg_flags(p):
    d = SegmentationParams()
    p.add_argument("--uniform-window", type=int, default=d.uniform_window)
    p.add_argument("--threshold-frac", type=float, default=d.threshold_frac)
    p.add_argument("--close-gap-cells", type=int, default=d.close_gap_cells)


def _add_decomp_flags(p):
    _add_seg_flags(p)
    d = DecompositionParams()
    p.add_argument("--sigma", type=float, default=d.sigma)
    p.add_argument("--decay-rate", type=float, default=d.decay_rate)


# --- subcommands ---

def fleet_from_config(cfg: dict):
    """Ships, aspects, draws and scene described by a fleet JSON object."""
    if not isinstance(cfg, dict) or "ships" not in cfg:
        raise ConfigError("fleet config needs a 'ships' list")
    scene = _build(SceneParams, cfg.get("scene"), "scene")
    ships = []
    for entry in cfg["ships"]:
        try:
            ships.append(make_ship(entry["ship_id"], entry["length_m"], entry["width_m"],
                                   entry["n_scatterers"], entry["seed"],
                                   entry.get("base_rcs", 1.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid ship entry {entry!r}: {exc}") from exc
    if "aspects" in cfg:
        aspects = [float(a) for a in cfg["aspects"]]
    elif "aspects_per_bin" in cfg:
        aspects = stratified_aspects(int(cfg["aspects_per_bin"]),
                                     float(cfg.get("bin_width_deg", 10.0)),
                                     int(cfg.get("aspect_seed", scene.seed)))
    else:
        raise ConfigError("fleet config needs 'aspects' or 'aspects_per_bin'")
    draws = int(cfg.get("draws_per_aspect", 1))
    return ships, aspects, draws, scene


def cmd_synth(args) -> None:
    ships, aspects, draws, scene = fleet_from_config(_read_json(args.fleet))
    if args.seed is not None:
        scene = SceneParams(**{**scene.__dict__, "seed": args.seed})
    try:
        ds = render_fleet(ships, aspects, draws, scene)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    with atomic_write(args.out) as fh:
        write_dataset(ds, fh)
    log.info("wrote %d profiles to %s", len(ds), args.out)


def cmd_segment(args) -> None:
    ds = load_dataset(args.inp)
    params = _seg_params(args)
    with atomic_write(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row_index", "ship_id", "aspect_deg", "lrp_cells", "lrp_m", "tlop_m"]
                   + [f"b{i}" for i in range(ds.s)])
        for i, rp in enumerate(ds):
            mask = coi_mask(rp, params)
            w.writerow([i, rp.ship_id, _fmt(rp.aspect_deg), mask.lrp_cells,
                        _fmt(lrp_meters(mask, rp.delta_r_m)),
                        _fmt(float(tlop(rp.aspect_deg, rp.ship_length_m, rp.ship_width_m)))]
                       + [int(b) for b in mask.bits])


def cmd_decompose(args) -> None:
    ds = load_dataset(args.inp)
    params = _decomp_params(args)
    with atomic_write(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row_index", "component"] + [f"c{i}" for i in range(ds.s)])
        for i, rp in enumerate(ds):
            comps = decompose(rp, params).comps
            for name in ("m", "f", "n"):
                w.writerow([i, name] + [_fmt(v) for v in getattr(comps, name)])


def _read_pairs(path):
    pairs = []
    with open(path, newline="", encoding="utf-8") as fh:
        for k, row in enumerate(csv.reader(fh)):
            if k == 0 and row[:2] == ["i", "j"]:
                continue
            if row:
                try:
                    pairs.append((int(row[0]), int(row[1])))
                except (ValueError, IndexError) as exc:
                    raise DatasetFormatError(f"bad pair row {row!r}", k + 1) from exc
    return pairs


def cmd_metrics(args) -> None:
    ds_a = load_dataset(args.a)
    ds_b = load_dataset(args.b) if args.b else ds_a
    if ds_a.s != ds_b.s:
        raise ConfigError("datasets have different cell counts")
    params = _decomp_params(args)
    if args.pairs:
        pairs = _read_pairs(args.pairs)
        for i, j in pairs:
            if not (0 <= i < len(ds_a) and 0 <= j < len(ds_b)):
                raise ConfigError(f"pair ({i}, {j}) out of range")
    else:
        pairs = [(i, j) for i in range(len(ds_a)) for j in range(len(ds_b))]
    dec_a = {i: decompose(ds_a[i], params) for i in sorted({i for i, _ in pairs})}
    dec_b = {j: decompose(ds_b[j], params) for j in sorted({j for _, j in pairs})}
    with atomic_write(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "j"] + list(DEFAULT_METRICS))
        for i, j in pairs:
            row = [i, j]
            for kind in DEFAULT_METRICS:
                try:
                    row.append(_fmt(METRICS[kind][0](dec_a[i], dec_b[j])))
                except UndefinedMetricError:
                    row.append("")
            w.writerow(row)


def bench_config(cfg: dict):
    if not isinstance(cfg, dict):
        raise ConfigError("bench config must be a JSON object")
    known = {"pairing", "decomposition", "metrics", "sigmas", "half_window_deg", "normalize_mse"}
    unknown = set(cfg) - known
    if unknown:
        raise ConfigError(f"unknown bench config keys: {sorted(unknown)}")
    pairing = _build(PairingParams, cfg.get("pairing"), "pairing")
    dec = dict(cfg.get("decomposition") or {})
    dec["seg"] = _build(SegmentationParams, dec.get("seg"), "segmentation")
    decomposition = _build(DecompositionParams, dec, "decomposition")
    try:
        specs = [MetricSpec.of(k) for k in cfg.get("metrics", DEFAULT_METRICS)]
        sigmas = [float(s) for s in cfg.get("sigmas", [])]
        if any(s <= 0 for s in sigmas):
            raise ValueError("sigmas must be positive")
        half_window = float(cfg.get("half_window_deg", 5.0))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return pairing, decomposition, specs, sigmas, half_window, bool(cfg.get("normalize_mse", True))


def _write_bins(path, reports, specs, sigma=None):
    with atomic_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        head = ["bin", "metric", "mean_top_same", "mean_top_diff", "relative_evolution", "n"]
        w.writerow((["sigma"] if sigma is not None else []) + head)
        for r in reports:
            for spec in specs:
                st = r.metrics[spec.kind]
                row = [r.bin_index, spec.kind, _fmt(st.mean_top_same), _fmt(st.mean_top_diff),
                       _fmt(st.relative_evolution), st.n_comparisons]
                w.writerow(([_fmt(sigma)] if sigma is not None else []) + row)


def cmd_bench(args) -> None:
    pairing, decomposition, specs, sigmas, half_window, normalize = bench_config(_read_json(args.config))
    if args.seed is not None:
        pairing = PairingParams(**{**pairing.__dict__, "pairing_seed": args.seed})
    ds = load_dataset(args.inp)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    pairs = select_pairs(ds, pairing)
    reports = discriminability(ds, pairs, decomposition, specs, half_window, normalize)
    _write_bins(out / "bins.csv", reports, specs)
    if sigmas:
        sweep = sigma_sweep(ds, pairs, sigmas, decomposition, specs, half_window, normalize)
        with atomic_write(out / "sweep.csv") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["sigma", "metric", "mean_relative_evolution", "n_bins"])
            for sigma, (reps, avg) in sweep.items():
                for spec in specs:
                    n_bins = sum(r.metrics[spec.kind].relative_evolution is not None for r in reps)
                    w.writerow([_fmt(sigma), spec.kind, _fmt(avg[spec.kind]), n_bins])
    log.info("%d pairs over %d bins -> %s", len(pairs), len(reports), out)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mfn-hrrp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="render a synthetic fleet to a dataset CSV")
    p.add_argument("--fleet", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, help="override the scene seed")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("segment", help="COI masks, LRP and TLOP per profile")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    _add_seg_flags(p)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("decompose", help="m, f, n components per profile")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    _add_decomp_flags(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("metrics", help="pairwise metrics between two datasets")
    p.add_argument("--a", required=True)
    p.add_argument("--b")
    p.add_argument("--pairs", help="CSV of i,j row pairs (default: all pairs)")
    p.add_argument("--out", required=True)
    _add_decomp_flags(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bench", help="same-vs-different ship discriminability")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, help="override the pairing seed")
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.subcommand in ("segment", "decompose", "metrics"):
            try:
                _decomp_params(args) if hasattr(args, "sigma") else _seg_params(args)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        args.func(args)
    except UsageError as exc:
        print(f"mfn-hrrp: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, DatasetFormatError, OSError, ValueError) as exc:
        print(f"mfn-hrrp {args.subcommand}: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
