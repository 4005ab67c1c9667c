"""Dyadic cubes in the feature hypercube [-1, 1]^k.

A cube is stored as (dim, depth, integer index per axis), never as float
endpoints: axis i of a depth-d cube spans [p*2^(1-d) - 1, (p+1)*2^(1-d) - 1).
All endpoints are exact doubles for depth <= 52, so membership tests and
serialization round-trip bitwise.

Membership is half-open on every axis except at the global upper boundary
+1, which is closed, so unit-coordinate points belong somewhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams

# Beyond this depth the integer endpoints would stop being exact doubles;
# it also bounds subdivision when duplicated points make a cube unsplittable.
MAX_SPLIT_DEPTH = 52


@dataclass(frozen=True)
class DyadicCube:
    """One axis-aligned dyadic cube, all sides of length 2*2^(-depth)."""

    dim: int
    depth: int
    index: tuple[int, ...]

    def __post_init__(self):
        if self.dim < 1 or len(self.index) != self.dim:
            raise InvalidParams(f"index {self.index} does not match dim {self.dim}")
        if not 0 <= self.depth <= MAX_SPLIT_DEPTH:
            raise InvalidParams(f"depth {self.depth} outside [0, {MAX_SPLIT_DEPTH}]")
        side = 1 << self.depth
        if any(not 0 <= p < side for p in self.index):
            raise InvalidParams(f"axis index outside [0, 2^{self.depth})")

    def bounds(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(lo, hi, hi_closed) arrays; hi_closed marks axes ending at +1."""
        scale = 2.0 ** (1 - self.depth)
        p = np.asarray(self.index, dtype=np.float64)
        lo = p * scale - 1.0
        hi = (p + 1.0) * scale - 1.0
        top = (1 << self.depth) - 1
        closed = np.array([pi == top for pi in self.index], dtype=np.uint8)
        return lo, hi, closed

    @property
    def side(self) -> float:
        return 2.0 ** (1 - self.depth)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "depth": self.depth, "index": list(self.index)}

    @classmethod
    def from_dict(cls, d: dict) -> "DyadicCube":
        return cls(dim=int(d["dim"]), depth=int(d["depth"]),
                   index=tuple(int(p) for p in d["index"]))


def root_cube(dim: int) -> DyadicCube:
    """The full hypercube [-1, 1]^dim."""
    return DyadicCube(dim=dim, depth=0, index=(0,) * dim)


def split_cube(cube: DyadicCube) -> list[DyadicCube]:
    """The 2^k half-side children, in binary-counting order over axes.

    Axis 0 is the low bit: in 2-D the children come out as the quadrants
    (low,low), (high,low), (low,high), (high,high).
    """
    k = cube.dim
    base = tuple(2 * p for p in cube.index)
    children = []
    for c in range(1 << k):
        idx = tuple(base[a] + ((c >> a) & 1) for a in range(k))
        children.append(DyadicCube(dim=k, depth=cube.depth + 1, index=idx))
    return children


def cube_contains(cube: DyadicCube, point: np.ndarray) -> bool:
    """Whether the first ``cube.dim`` coordinates of point lie in the cube."""
    lo, hi, closed = cube.bounds()
    for a in range(cube.dim):
        x = point[a]
        if x < lo[a]:
            return False
        if closed[a]:
            if x > hi[a]:
                return False
        elif x >= hi[a]:
            return False
    return True
