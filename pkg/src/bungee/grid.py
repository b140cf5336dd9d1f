"""Grid classification, raster export and class-boundary extraction.

A grid covers a rectangle with cell-center sample points. Codes are
stored as an (ny, nx) array with row 0 at the bottom (smallest
imaginary part); PPM output flips rows so the top of the image is the
top of the plane.

Rows are classified one at a time by the shared orbit engine, so the
resulting raster is byte-for-byte identical for any worker count: the
per-row computations are independent and are assembled positionally.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict

import numpy as np

from .expr import FunctionExpr
from .orbit import Classification, ClassifierConfig, DEFAULT_CONFIG, classify_batch

__all__ = [
    "GridSpec",
    "Raster",
    "classify_grid",
    "render_ppm",
    "extract_boundary",
    "render_pbm",
    "raster_to_json",
    "PALETTE",
]


@dataclass(frozen=True)
class GridSpec:
    """A rectangle [re_min, re_max] x [im_min, im_max] split into nx*ny cells."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int
    ny: int

    def __post_init__(self) -> None:
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("grid rectangle must have positive extent")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid must have at least one cell per axis")

    @property
    def dx(self) -> float:
        return (self.re_max - self.re_min) / self.nx

    @property
    def dy(self) -> float:
        return (self.im_max - self.im_min) / self.ny

    def points(self) -> np.ndarray:
        """Cell-center sample points as an (ny, nx) complex array."""
        xs = self.re_min + (np.arange(self.nx) + 0.5) * self.dx
        ys = self.im_min + (np.arange(self.ny) + 0.5) * self.dy
        return xs[None, :] + 1j * ys[:, None]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "GridSpec":
        return cls(**data)


@dataclass(frozen=True)
class Raster:
    """Classification codes over a grid; ``codes[j, i]`` is cell (i, j)."""

    spec: GridSpec
    codes: np.ndarray


# RGB per Classification code, indexed by code value.
PALETTE = np.array(
    [
        (0, 0, 0),  # Escaping
        (230, 230, 230),  # Bounded
        (220, 50, 50),  # Bungee
        (60, 60, 200),  # Unresolved
    ],
    dtype=np.uint8,
)


def classify_grid(
    f: FunctionExpr,
    spec: GridSpec,
    cfg: ClassifierConfig = DEFAULT_CONFIG,
    workers: int = 1,
) -> Raster:
    """Classify every cell center of ``spec`` under ``f``.

    ``workers`` sets the thread count; the work split is per row and
    fixed, so output is identical for every worker count.
    """
    if workers < 1:
        raise ValueError("workers must be positive")
    pts = spec.points()
    codes = np.empty((spec.ny, spec.nx), dtype=np.int8)

    def one_row(j: int) -> np.ndarray:
        return classify_batch(f, pts[j], cfg)

    if workers == 1:
        for j in range(spec.ny):
            codes[j] = one_row(j)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for j, row in enumerate(pool.map(one_row, range(spec.ny))):
                codes[j] = row
    return Raster(spec=spec, codes=codes)


def render_ppm(raster: Raster) -> bytes:
    """Encode a raster as a binary PPM (P6) image, top row at im_max."""
    spec = raster.spec
    rgb = PALETTE[raster.codes[::-1]]
    header = f"P6\n{spec.nx} {spec.ny}\n255\n".encode("ascii")
    return header + rgb.tobytes()


def extract_boundary(raster: Raster) -> np.ndarray:
    """Mark cells adjacent to a class change.

    A cell is a boundary cell when at least two distinct resolved
    classes (Escaping, Bounded, Bungee) appear among the cell itself
    and its 4-neighborhood. Unresolved cells are ignored: they neither
    form boundaries nor block them.
    """
    codes = raster.codes
    present_count = np.zeros(codes.shape, dtype=np.int8)
    for cls in (Classification.ESCAPING, Classification.BOUNDED, Classification.BUNGEE):
        here = codes == int(cls)
        near = here.copy()
        near[1:, :] |= here[:-1, :]
        near[:-1, :] |= here[1:, :]
        near[:, 1:] |= here[:, :-1]
        near[:, :-1] |= here[:, 1:]
        present_count += near
    return present_count >= 2


def render_pbm(mask: np.ndarray) -> bytes:
    """Encode a boolean mask as an ASCII PBM (P1) image, top row first."""
    ny, nx = mask.shape
    lines = [f"P1\n{nx} {ny}"]
    for row in mask[::-1]:
        lines.append(" ".join("1" if v else "0" for v in row))
    return ("\n".join(lines) + "\n").encode("ascii")


def raster_to_json(raster: Raster) -> str:
    """Serialize a raster as JSON: grid spec plus flat row-major codes."""
    doc = {
        "spec": raster.spec.to_dict(),
        "codes": [int(c) for c in raster.codes.ravel()],
    }
    return json.dumps(doc)
