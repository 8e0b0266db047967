"""Seeded reference fleet used by the acceptance suite and the scripts."""

from __future__ import annotations

import numpy as np

from .core import Dataset
from .synth import SceneParams, ShipModel, make_ship, render_fleet

REFERENCE_SEED = 20250501
N_PAIRS = 10
N_SCATTERERS = 60
SCENE = SceneParams(s=256, delta_r_m=1.0, target_start_cell=48,
                    clutter_mean=0.01, speckle_sd=0.3, seed=REFERENCE_SEED)


def reference_ship_entries(n_pairs: int = N_PAIRS, seed: int = REFERENCE_SEED) -> list[dict]:
    """``n_pairs`` pairs of ships 55 m and longer, partners within 3 m.

    Pair base lengths are 15 m apart, so ships of different pairs always
    differ by more than 5 m and only the designed pairs are length-matched.
    Entries use the fleet-JSON ship schema.
    """
    rng = np.random.default_rng(seed)
    entries = []
    for k in range(n_pairs):
        length = 58.0 + 15.0 * k + float(rng.uniform(0.0, 2.0))
        for j, dl in enumerate((0.0, float(rng.uniform(-3.0, 3.0)))):
            ln = length + dl
            w = float(rng.uniform(0.12, 0.2)) * ln
            entries.append({"ship_id": f"ship{2 * k + j:02d}", "length_m": round(ln, 2),
                            "width_m": round(w, 2), "n_scatterers": N_SCATTERERS,
                            "seed": int(rng.integers(2**63))})
    return entries


def reference_ships(n_pairs: int = N_PAIRS, seed: int = REFERENCE_SEED) -> list[ShipModel]:
    return [make_ship(e["ship_id"], e["length_m"], e["width_m"], e["n_scatterers"], e["seed"])
            for e in reference_ship_entries(n_pairs, seed)]


def reference_fleet_config(per_bin: int = 30, n_pairs: int = N_PAIRS) -> dict:
    """Fleet JSON object that renders :func:`reference_dataset` via ``mfn-hrrp synth``."""
    return {
        "scene": dict(SCENE.__dict__),
        "ships": reference_ship_entries(n_pairs),
        "aspects_per_bin": per_bin,
        "bin_width_deg": 10.0,
        "aspect_seed": REFERENCE_SEED,
        "draws_per_aspect": 1,
    }


def stratified_aspects(per_bin: int = 30, bin_width_deg: float = 10.0,
                       seed: int = REFERENCE_SEED) -> list[float]:
    """``per_bin`` uniform aspects inside every bin, ascending."""
    rng = np.random.default_rng([seed, 1])
    n_bins = int(round(360.0 / bin_width_deg))
    out = []
    for b in range(n_bins):
        out.extend(sorted(b * bin_width_deg + rng.uniform(0.0, bin_width_deg, per_bin)))
    return [float(a) for a in out]


def reference_dataset(per_bin: int = 30, n_pairs: int = N_PAIRS,
                      scene: SceneParams = SCENE) -> Dataset:
    return render_fleet(reference_ships(n_pairs), stratified_aspects(per_bin), 1, scene)
