"""Seeded point-scatterer generator for synthetic range profiles.

Each scatterer projects onto the line of sight and deposits its
amplitude into the nearest range cell; exponential clutter is added to
every cell. All randomness is keyed on ``(seed, draw, index)`` so any
single profile can be regenerated on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Dataset, RangeProfile

_SPECKLE_STREAM = 1
_CLUTTER_STREAM = 2


class SceneConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Scatterer:
    along_m: float
    across_m: float
    reflectivity: float


@dataclass(frozen=True)
class ShipModel:
    ship_id: str
    length_m: float
    width_m: float
    scatterers: tuple[Scatterer, ...]
    base_rcs: float = 1.0

    def __post_init__(self):
        if not (0 < self.width_m <= self.length_m):
            raise ValueError("need 0 < width_m <= length_m")
        if len(self.scatterers) < 2:
            raise ValueError("a ship needs at least two scatterers")
        along = np.array([s.along_m for s in self.scatterers])
        tol = 0.05 * self.length_m
        if along.max() < self.length_m / 2 - tol or along.min() > -self.length_m / 2 + tol:
            raise ValueError("each ship end needs a scatterer within 5% of the length")

    def positions(self) -> np.ndarray:
        return np.array([(s.along_m, s.across_m) for s in self.scatterers])

    def reflectivities(self) -> np.ndarray:
        return np.array([s.reflectivity for s in self.scatterers])


@dataclass(frozen=True)
class SceneParams:
    s: int = 256
    delta_r_m: float = 1.0
    target_start_cell: int = 64
    clutter_mean: float = 0.01
    speckle_sd: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.s < 1 or self.delta_r_m <= 0:
            raise ValueError("s and delta_r_m must be positive")
        if self.clutter_mean < 0 or self.speckle_sd < 0:
            raise ValueError("clutter_mean and speckle_sd must be non-negative")
        if self.target_start_cell < 0:
            raise ValueError("target_start_cell must be non-negative")

    def check_fits(self, ship: ShipModel) -> None:
        span = math.ceil(math.hypot(ship.length_m, ship.width_m) / self.delta_r_m)
        if self.target_start_cell + span >= self.s:
            raise SceneConfigError(
                f"ship {ship.ship_id!r} ({span} cells) does not fit after cell "
                f"{self.target_start_cell} in a {self.s}-cell profile")


def make_ship(ship_id: str, length_m: float, width_m: float, n_scatterers: int,
              seed: int, base_rcs: float = 1.0) -> ShipModel:
    """Random rectangle ship with scatterers forced at bow and stern."""
    if n_scatterers < 2:
        raise ValueError("n_scatterers must be at least 2")
    if not (0 < width_m <= length_m) or base_rcs <= 0:
        raise ValueError("invalid ship dimensions or base_rcs")
    rng = np.random.default_rng(seed)
    k = n_scatterers - 2
    along = np.concatenate([[length_m / 2, -length_m / 2],
                            rng.uniform(-length_m / 2, length_m / 2, k)])
    across = np.concatenate([[0.0, 0.0], rng.uniform(-width_m / 2, width_m / 2, k)])
    refl = base_rcs * np.exp(rng.uniform(np.log(0.3), 0.0, n_scatterers))
    scatterers = tuple(Scatterer(float(a), float(c), float(r))
                       for a, c, r in zip(along, across, refl))
    return ShipModel(ship_id, float(length_m), float(width_m), scatterers, float(base_rcs))


def projected_cells(ship: ShipModel, aspect_deg: float, scene: SceneParams) -> np.ndarray:
    """Range cell hit by each scatterer at ``aspect_deg``."""
    a = math.radians(aspect_deg)
    pos = ship.positions()
    offset = pos[:, 0] * math.cos(a) + pos[:, 1] * math.sin(a)
    return scene.target_start_cell + np.rint((offset - offset.min()) / scene.delta_r_m).astype(int)


def render_hrrp(ship: ShipModel, aspect_deg: float, scene: SceneParams,
                draw: int = 0) -> RangeProfile:
    scene.check_fits(ship)
    aspect_deg = float(aspect_deg) % 360.0
    cells = projected_cells(ship, aspect_deg, scene)
    if cells.max() >= scene.s:
        raise SceneConfigError("projection exceeds the profile length")
    n_sc = len(ship.scatterers)
    amp = ship.reflectivities()
    if scene.speckle_sd > 0:
        # scatterer i takes the i-th variate of the (seed, draw) speckle stream
        z = np.random.default_rng([scene.seed, draw, _SPECKLE_STREAM]).standard_normal(n_sc)
        amp = amp * np.exp(scene.speckle_sd * z)
    profile = np.zeros(scene.s)
    np.add.at(profile, cells, amp)
    if scene.clutter_mean > 0:
        # cell i takes the i-th variate of the (seed, draw) clutter stream
        rng = np.random.default_rng([scene.seed, draw, _CLUTTER_STREAM])
        profile += rng.exponential(scene.clutter_mean, scene.s)
    return RangeProfile(profile, aspect_deg, scene.delta_r_m, ship.ship_id,
                        ship.length_m, ship.width_m)


def render_fleet(ships, aspects, draws_per_aspect: int, scene: SceneParams) -> Dataset:
    """All (ship, aspect, draw) combinations in that row order."""
    profiles = []
    for k, ship in enumerate(ships):
        for j, asp in enumerate(aspects):
            for d in range(draws_per_aspect):
                profiles.append(render_hrrp(ship, asp, scene, draw_key(k, j, d)))
    return Dataset(profiles, s=scene.s)


def draw_key(ship_index: int, aspect_index: int, draw: int) -> int:
    return (ship_index << 40) | (aspect_index << 20) | draw
