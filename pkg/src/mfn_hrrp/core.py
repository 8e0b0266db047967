"""Range-profile containers and the dataset CSV format."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

HEADER_PREFIX = ("ship_id", "aspect_deg", "delta_r_m", "ship_length_m", "ship_width_m")


class DatasetFormatError(ValueError):
    """Malformed dataset file; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RangeProfile:
    """One HRRP plus its acquisition metadata.

    Attributes:
        cells: linear, non-negative amplitudes, one per range cell.
        aspect_deg: target heading minus radar azimuth, in [0, 360).
        delta_r_m: range resolution in meters per cell.
        ship_id: opaque target identifier.
        ship_length_m, ship_width_m: rectangle approximation of the target.
    """

    cells: np.ndarray
    aspect_deg: float
    delta_r_m: float = 1.0
    ship_id: str = ""
    ship_length_m: float = 1.0
    ship_width_m: float = 1.0

    def __post_init__(self):
        cells = _frozen(self.cells)
        if cells.ndim != 1 or cells.size < 1:
            raise ValueError("cells must be a non-empty 1-D vector")
        if not np.all(np.isfinite(cells)) or np.any(cells < 0):
            raise ValueError("amplitudes must be finite and non-negative")
        if not 0.0 <= self.aspect_deg < 360.0:
            raise ValueError(f"aspect_deg must lie in [0, 360), got {self.aspect_deg}")
        if not self.delta_r_m > 0:
            raise ValueError("delta_r_m must be positive")
        if not (self.ship_length_m > 0 and self.ship_width_m > 0):
            raise ValueError("ship dimensions must be positive")
        if self.ship_width_m > self.ship_length_m:
            raise ValueError("ship_width_m must not exceed ship_length_m")
        if "," in self.ship_id or "\n" in self.ship_id:
            raise ValueError("ship_id must not contain commas or newlines")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "aspect_deg", float(self.aspect_deg))

    @property
    def s(self) -> int:
        return int(self.cells.size)

    def with_cells(self, cells) -> "RangeProfile":
        """Copy of this profile carrying new amplitudes."""
        return RangeProfile(
            cells, self.aspect_deg, self.delta_r_m, self.ship_id,
            self.ship_length_m, self.ship_width_m,
        )

    def __eq__(self, other):
        if not isinstance(other, RangeProfile):
            return NotImplemented
        return (
            self.meta() == other.meta()
            and np.array_equal(self.cells, other.cells)
        )

    __hash__ = None

    def meta(self) -> tuple:
        return (self.ship_id, self.aspect_deg, self.delta_r_m,
                self.ship_length_m, self.ship_width_m)


@dataclass(frozen=True, eq=False)
class CoiMask:
    """Binary cells-of-interest mask and the length of its first object."""

    bits: np.ndarray
    lrp_cells: int = field(default=-1)

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 1:
            raise ValueError("bits must be 1-D")
        if not np.all((bits == 0) | (bits == 1)):
            raise ValueError("bits must be binary")
        bits = _frozen(bits, dtype=bool)
        lrp = first_run_length(bits)
        if self.lrp_cells not in (-1, lrp):
            raise ValueError(f"lrp_cells={self.lrp_cells} disagrees with bits (first run {lrp})")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "lrp_cells", lrp)

    @property
    def empty(self) -> bool:
        return not self.bits.any()

    def __eq__(self, other):
        if not isinstance(other, CoiMask):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    __hash__ = None


def first_run_length(bits) -> int:
    """Length of the first maximal run of ones, scanning from cell 0."""
    bits = np.asarray(bits, dtype=bool)
    ones = np.flatnonzero(bits)
    if ones.size == 0:
        return 0
    start = ones[0]
    zeros_after = np.flatnonzero(~bits[start:])
    return int(zeros_after[0]) if zeros_after.size else int(bits.size - start)


@dataclass(frozen=True, eq=False)
class MfnComponents:
    """Mask, feature and noise components of one profile."""

    m: np.ndarray
    f: np.ndarray
    n: np.ndarray
    sigma: float

    def __post_init__(self):
        for name in ("m", "f", "n"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        if not (self.m.shape == self.f.shape == self.n.shape) or self.m.ndim != 1:
            raise ValueError("m, f and n must be 1-D vectors of equal length")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        levels = np.unique(self.m[self.m != 0])
        if levels.size > 1 or (levels.size == 1 and levels[0] < 0):
            raise ValueError("m must be a scaled binary mask")


class Dataset(Sequence[RangeProfile]):
    """Ordered collection of profiles sharing one cell count ``s``."""

    def __init__(self, profiles=(), s: int | None = None):
        profiles = tuple(profiles)
        if s is None:
            if not profiles:
                raise ValueError("s is required for an empty dataset")
            s = profiles[0].s
        if s < 1:
            raise ValueError("s must be at least 1")
        for i, p in enumerate(profiles):
            if p.s != s:
                raise ValueError(f"profile {i} has {p.s} cells, expected {s}")
        self._profiles = profiles
        self.s = int(s)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Dataset(self._profiles[i], s=self.s)
        return self._profiles[i]

    def __len__(self) -> int:
        return len(self._profiles)

    def __iter__(self) -> Iterator[RangeProfile]:
        return iter(self._profiles)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.s == other.s and self._profiles == other._profiles

    __hash__ = None

    def __repr__(self):
        return f"Dataset(n={len(self)}, s={self.s})"

    def amplitudes(self) -> np.ndarray:
        """(n, s) array of all amplitudes."""
        if not self._profiles:
            return np.zeros((0, self.s))
        return np.stack([p.cells for p in self._profiles])


def header(s: int) -> list[str]:
    return list(HEADER_PREFIX) + [f"c{i}" for i in range(s)]


def format_float(x: float) -> str:
    # repr round-trips float64 exactly (17 significant digits at most)
    return repr(float(x))


def save_dataset(ds: Dataset, path) -> None:
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            write_dataset(ds, fh)
    except OSError as exc:
        raise OSError(f"cannot write dataset to {path}: {exc}") from exc


def write_dataset(ds: Dataset, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header(ds.s))
    for p in ds:
        writer.writerow(
            [p.ship_id] + [format_float(v) for v in p.meta()[1:]]
            + [format_float(v) for v in p.cells]
        )


def _number(text: str, line: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DatasetFormatError(f"non-numeric value {text!r} in column {column}", line) from None
    if not math.isfinite(value):
        raise DatasetFormatError(f"non-finite value {text!r} in column {column}", line)
    return value


def load_dataset(path) -> Dataset:
    """Read a dataset CSV; errors name the offending line."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = csv.reader(fh)
        try:
            head = next(rows)
        except StopIteration:
            raise DatasetFormatError("missing header", 1) from None
        s = len(head) - len(HEADER_PREFIX)
        if s < 1 or head != header(s):
            raise DatasetFormatError("malformed header", 1)
        profiles = []
        for idx, row in enumerate(rows):
            line = idx + 2
            if not row:
                continue
            if len(row) != len(head):
                raise DatasetFormatError(
                    f"expected {len(head)} columns, found {len(row)}", line)
            meta = [_number(v, line, c) for v, c in zip(row[1:5], HEADER_PREFIX[1:])]
            cells = np.array([_number(v, line, f"c{i}") for i, v in enumerate(row[5:])])
            if np.any(cells < 0):
                bad = int(np.flatnonzero(cells < 0)[0])
                raise DatasetFormatError(f"negative amplitude in column c{bad}", line)
            try:
                profiles.append(RangeProfile(cells, *meta[:2], row[0], *meta[2:]))
            except ValueError as exc:
                raise DatasetFormatError(str(exc), line) from None
    return Dataset(profiles, s=s)
