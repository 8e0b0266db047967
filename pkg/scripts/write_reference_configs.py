"""Write fleet.json and bench.json for running the reference benchmark through the CLI.

    python scripts/write_reference_configs.py configs/
    mfn-hrrp synth --fleet configs/fleet.json --out ds.csv
    mfn-hrrp bench --in ds.csv --config configs/bench.json --out results/
"""

import json
import sys
from pathlib import Path

from mfn_hrrp.reference import REFERENCE_SEED, reference_fleet_config

out = Path(sys.argv[1] if len(sys.argv) > 1 else "configs")
out.mkdir(parents=True, exist_ok=True)
(out / "fleet.json").write_text(json.dumps(reference_fleet_config(), indent=2))
(out / "bench.json").write_text(json.dumps({
    "pairing": {"bin_width_deg": 10, "n_pairs_per_bin": 10, "n_per_ship_per_bin": 30,
                "length_tol_m": 5, "min_length_m": 50, "pairing_seed": REFERENCE_SEED},
    "decomposition": {"sigma": 0.5, "decay_rate": 2.0,
                      "seg": {"uniform_window": 5, "threshold_frac": 0.5, "close_gap_cells": 14}},
    "metrics": ["mse", "cosine", "mse_f", "cos_f"],
    "half_window_deg": 5,
    "sigmas": [0.5, 2, 8],
}, indent=2))
print(f"wrote {out}/fleet.json and {out}/bench.json")
