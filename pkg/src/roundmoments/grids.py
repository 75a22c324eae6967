"""Finite precision number systems and neighbor queries.

Three grid kinds are supported: a uniform mesh ``{2*half_gap*z + offset}``, a
binary float system with ``2^m`` points per binade, and an explicit sorted
point set.  Neighbor queries never enumerate the grid; the float system is
resolved by exponent/mantissa arithmetic so realistic mantissa widths
(m = 23) cost the same as toy ones.

All query functions accept scalars or ndarrays and return matching shapes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    AboveGridError,
    BelowGridError,
    ConfigError,
    EmptyRangeError,
    TooManyCellsError,
)

CELL_BUDGET = 100_000_000


@dataclass(frozen=True)
class UniformMesh:
    """Grid ``{2*half_gap*z + offset : z integer}``.

    ``half_gap`` is the worst additive error under round-to-nearest;
    consecutive points are ``2*half_gap`` apart.  The offset is normalized
    into ``[0, 2*half_gap)`` at construction.
    """

    half_gap: float
    offset: float = 0.0

    def __post_init__(self):
        if not self.half_gap > 0.0:
            raise ConfigError("half_gap must be positive")
        step = 2.0 * self.half_gap
        a = math.fmod(self.offset, step)
        if a < 0.0:
            a += step
        if a == step:
            a = 0.0
        object.__setattr__(self, "offset", a)

    @property
    def step(self) -> float:
        return 2.0 * self.half_gap

    def neighbors(self, x):
        x = np.asarray(x, dtype=float)
        step = self.step
        # Keep every point in canonical offset + z*step form: recomputing a
        # returned neighbor must reproduce it bit for bit (idempotence) and
        # negation must mirror exactly on symmetric meshes.
        z = np.floor((x - self.offset) / step)
        z = np.where(self.offset + z * step > x, z - 1.0, z)
        z = np.where(self.offset + (z + 1.0) * step <= x, z + 1.0, z)
        lo = self.offset + z * step
        hi = np.where(lo == x, lo, self.offset + (z + 1.0) * step)
        return lo, hi

    def points_in(self, lo: float, hi: float, budget: int = CELL_BUDGET) -> np.ndarray:
        step = self.step
        z0 = math.ceil((lo - self.offset) / step - 1e-12)
        z1 = math.floor((hi - self.offset) / step + 1e-12)
        if z1 - z0 + 1 > budget:
            raise TooManyCellsError(f"{z1 - z0 + 1} mesh points in range")
        pts = self.offset + step * np.arange(z0, z1 + 1, dtype=float)
        return pts[(pts >= lo) & (pts <= hi)]


@dataclass(frozen=True)
class FloatSystem:
    """Binary float grid: ``2^m`` evenly spaced points on each binade
    ``[2^i, 2^(i+1))`` for ``i = k_min .. k_max-1``, mirrored for negatives,
    plus ``2^m`` subnormal points on ``[0, 2^k_min)`` when enabled (the
    subnormal region otherwise holds only 0).  ``2^k_max`` itself is the
    largest representable magnitude; queries beyond it saturate and are
    flagged through :meth:`saturates`.
    """

    mantissa_bits: int
    k_min: int
    k_max: int
    subnormals: bool = True

    def __post_init__(self):
        if self.mantissa_bits < 1:
            raise ConfigError("mantissa_bits must be >= 1")
        if not self.k_min < self.k_max:
            raise ConfigError("k_min must be < k_max")
        if self.k_min - self.mantissa_bits < -1000 or self.k_max > 1000:
            raise ConfigError("exponent range exceeds double-exact arithmetic")

    @property
    def top(self) -> float:
        return math.ldexp(1.0, self.k_max)

    @property
    def tiny(self) -> float:
        return math.ldexp(1.0, self.k_min)

    def _sub_step(self) -> float:
        if self.subnormals:
            return math.ldexp(1.0, self.k_min - self.mantissa_bits)
        return self.tiny

    def saturates(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.abs(x) > self.top

    def _mag_neighbors(self, ax: np.ndarray):
        """Enclosing lattice magnitudes for ax >= 0 (caller clips at the top)."""
        lo = np.zeros_like(ax)
        hi = np.zeros_like(ax)

        sub = ax < self.tiny
        if np.any(sub):
            step = self._sub_step()
            j = np.floor(ax[sub] / step)
            slo = j * step
            slo = np.where(slo > ax[sub], slo - step, slo)
            shi = np.where(slo == ax[sub], slo, slo + step)
            lo[sub] = slo
            hi[sub] = np.minimum(shi, self.tiny)

        norm = ~sub
        if np.any(norm):
            axn = ax[norm]
            _, e = np.frexp(axn)
            i = e - 1  # axn in [2^i, 2^(i+1))
            base = np.ldexp(1.0, i)
            step = np.ldexp(1.0, i - self.mantissa_bits)
            j = np.floor((axn - base) / step)
            nlo = base + j * step
            nlo = np.where(nlo > axn, nlo - step, nlo)
            nlo = np.where(nlo + step <= axn, nlo + step, nlo)
            nhi = np.where(nlo == axn, nlo, nlo + step)
            lo[norm] = nlo
            hi[norm] = nhi
        return lo, hi

    def neighbors(self, x):
        x0 = np.asarray(x, dtype=float)
        shape = x0.shape
        x = np.atleast_1d(x0).ravel()
        ax = np.minimum(np.abs(x), self.top)
        mlo, mhi = self._mag_neighbors(ax)
        neg = x < 0
        lo = np.where(neg, -mhi, mlo)
        hi = np.where(neg, -mlo, mhi)
        # Saturated queries collapse onto +/- 2^k_max.
        sat_hi = x > self.top
        sat_lo = x < -self.top
        lo = np.where(sat_hi, self.top, lo)
        hi = np.where(sat_hi, self.top, hi)
        lo = np.where(sat_lo, -self.top, lo)
        hi = np.where(sat_lo, -self.top, hi)
        exact_top = np.abs(x) == self.top
        lo = np.where(exact_top, x, lo)
        hi = np.where(exact_top, x, hi)
        return lo.reshape(shape), hi.reshape(shape)

    def _mag_blocks(self):
        """(anchor, step, block_lo, block_hi) runs covering magnitudes [0, top].

        Anchors are always grid points, so lattice enumeration within a
        clipped query range stays on the true grid.
        """
        yield 0.0, self._sub_step(), 0.0, self.tiny
        for i in range(self.k_min, self.k_max):
            blo = math.ldexp(1.0, i)
            yield blo, math.ldexp(1.0, i - self.mantissa_bits), blo, 2.0 * blo

    def points_in(self, lo: float, hi: float, budget: int = CELL_BUDGET) -> np.ndarray:
        chunks = []
        count = 0
        for sign in (-1.0, 1.0):
            a = max(lo, -self.top) if sign < 0 else max(lo, 0.0)
            b = min(hi, 0.0) if sign < 0 else min(hi, self.top)
            if sign < 0:
                a, b = -b, -a
            if a >= b:
                continue
            for anchor, step, blo, bhi in self._mag_blocks():
                c_lo, c_hi = max(a, blo), min(b, bhi)
                if c_hi < c_lo:
                    continue
                j0 = math.ceil((c_lo - anchor) / step - 1e-12)
                j1 = math.floor((c_hi - anchor) / step + 1e-12)
                n = max(0, j1 - j0 + 1)
                count += n
                if count > budget:
                    raise TooManyCellsError("float lattice exceeds cell budget")
                if n:
                    pts = anchor + step * np.arange(j0, j1 + 1, dtype=float)
                    chunks.append(sign * pts)
            if b == self.top:
                chunks.append(np.array([sign * self.top]))
        if not chunks:
            return np.empty(0)
        pts = np.unique(np.concatenate(chunks))
        return pts[(pts >= lo) & (pts <= hi)]


@dataclass(frozen=True)
class ExplicitSet:
    """A strictly increasing finite point set."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ConfigError("explicit grid needs at least 2 points")
        if not np.all(np.diff(pts) > 0):
            raise ConfigError("explicit grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def neighbors(self, x):
        x = np.asarray(x, dtype=float)
        i_lo = np.searchsorted(self.points, x, side="right") - 1
        i_hi = np.searchsorted(self.points, x, side="left")
        if np.any(i_lo < 0):
            raise BelowGridError("no grid point at or below query")
        if np.any(i_hi >= self.points.size):
            raise AboveGridError("no grid point at or above query")
        return self.points[i_lo], self.points[i_hi]

    def points_in(self, lo: float, hi: float, budget: int = CELL_BUDGET) -> np.ndarray:
        i0 = np.searchsorted(self.points, lo, side="left")
        i1 = np.searchsorted(self.points, hi, side="right")
        return self.points[i0:i1]


Grid = Union[UniformMesh, FloatSystem, ExplicitSet]


def floor_to(grid: Grid, x):
    """Largest grid point <= x; equals x exactly when x is on the grid."""
    lo, _ = grid.neighbors(x)
    return lo if np.ndim(x) else float(lo)


def ceil_to(grid: Grid, x):
    """Smallest grid point >= x; mirror of :func:`floor_to`."""
    _, hi = grid.neighbors(x)
    return hi if np.ndim(x) else float(hi)


@dataclass(frozen=True)
class GapStats:
    """Worst relative (eps0) and absolute (delta0) gap over a range.

    ``ceil(x) <= (1 + eps0) * floor(x)`` and ``ceil(x) <= floor(x) + delta0``
    for every x whose cell lies fully inside [lo, hi].  eps0 is infinite
    when some cell in range touches or straddles zero, where a relative
    model cannot hold.
    """

    eps0: float
    delta0: float
    lo: float
    hi: float


@dataclass(frozen=True)
class FloatCell:
    """A maximal uniformly spaced stretch of a float system."""

    lo: float
    hi: float
    half_gap: float


def float_cells(fs: FloatSystem, lo: float, hi: float) -> list[FloatCell]:
    """Dyadic intervals of ``fs`` intersected with [lo, hi] (0 <= lo < hi).

    Yields the subnormal interval ``[0, 2^k_min)`` and each binade
    ``[2^i, 2^(i+1))``, clipped, each carrying its half gap
    ``2^(i - m - 1)``.  Negative ranges are mirrored by the caller.
    """
    if lo < 0.0 or hi <= lo:
        raise ConfigError("float_cells requires 0 <= lo < hi")
    hi = min(hi, fs.top)
    out = []
    tiny = fs.tiny
    if lo < tiny:
        a, b = lo, min(hi, tiny)
        if b > a:
            out.append(FloatCell(a, b, 0.5 * fs._sub_step()))
    for i in range(fs.k_min, fs.k_max):
        blo = math.ldexp(1.0, i)
        bhi = math.ldexp(1.0, i + 1)
        a, b = max(lo, blo), min(hi, bhi)
        if b > a:
            out.append(FloatCell(a, b, math.ldexp(1.0, i - fs.mantissa_bits - 1)))
    return out


def _cell_stats(cells: Iterable[tuple[float, float]]) -> tuple[float, float]:
    """(eps0, delta0) over explicit cells given as (floor, ceil) pairs."""
    eps0 = 0.0
    delta0 = 0.0
    for p, q in cells:
        delta0 = max(delta0, q - p)
        if p <= 0.0 <= q:
            eps0 = math.inf
        else:
            eps0 = max(eps0, (q - p) / min(abs(p), abs(q)))
    return eps0, delta0


def gap_stats(grid: Grid, lo: float, hi: float) -> GapStats:
    """Gap statistics over all full cells inside [lo, hi]."""
    if not lo < hi:
        raise ConfigError("gap_stats requires lo < hi")

    if isinstance(grid, UniformMesh):
        step = grid.step
        g0 = float(ceil_to(grid, lo))
        g1 = float(floor_to(grid, hi))
        if g1 - g0 < step * (1.0 - 1e-12):
            raise EmptyRangeError("no full cell in range")
        if g0 <= 0.0 <= g1:
            eps0 = math.inf
        elif g0 > 0.0:
            eps0 = step / g0
        else:
            eps0 = step / abs(g1)
        return GapStats(eps0, step, lo, hi)

    if isinstance(grid, FloatSystem):
        eps0 = 0.0
        delta0 = 0.0
        found = False
        for sign in (-1.0, 1.0):
            a = max(lo, 0.0) if sign > 0 else max(-hi, 0.0)
            b = min(hi, grid.top) if sign > 0 else min(-lo, grid.top)
            if b <= a:
                continue
            for anchor, step, blo, bhi in grid._mag_blocks():
                c_lo, c_hi = max(a, blo), min(b, bhi)
                if c_hi <= c_lo:
                    continue
                j0 = math.ceil((c_lo - anchor) / step - 1e-12)
                p0 = anchor + j0 * step
                if p0 + step > c_hi * (1.0 + 1e-15):
                    continue
                found = True
                delta0 = max(delta0, step)
                eps0 = math.inf if p0 == 0.0 else max(eps0, step / p0)
        if not found:
            raise EmptyRangeError("no full cell in range")
        if lo < 0.0 < hi:
            eps0 = math.inf  # cells adjacent to zero are in range
        return GapStats(eps0, delta0, lo, hi)

    if isinstance(grid, ExplicitSet):
        pts = grid.points_in(lo, hi)
        if pts.size < 2:
            raise EmptyRangeError("no full cell in range")
        eps0, delta0 = _cell_stats(zip(pts[:-1], pts[1:]))
        return GapStats(eps0, delta0, lo, hi)

    raise ConfigError(f"unknown grid type {type(grid)!r}")


def parse_grid_config(obj: dict) -> Grid:
    """Build a grid from its JSON-style description."""
    try:
        kind = obj["kind"]
    except (TypeError, KeyError):
        raise ConfigError("grid config must be an object with a 'kind' field")
    if kind == "uniform":
        return UniformMesh(half_gap=float(obj["half_gap"]), offset=float(obj.get("offset", 0.0)))
    if kind == "float":
        return FloatSystem(
            mantissa_bits=int(obj["m"]),
            k_min=int(obj["k_min"]),
            k_max=int(obj["k_max"]),
            subnormals=bool(obj.get("subnormals", True)),
        )
    if kind == "explicit":
        return ExplicitSet(points=np.asarray(obj["points"], dtype=float))
    raise ConfigError(f"unknown grid kind {kind!r}")


def grid_config(grid: Grid) -> dict:
    if isinstance(grid, UniformMesh):
        return {"kind": "uniform", "half_gap": grid.half_gap, "offset": grid.offset}
    if isinstance(grid, FloatSystem):
        return {
            "kind": "float",
            "m": grid.mantissa_bits,
            "k_min": grid.k_min,
            "k_max": grid.k_max,
            "subnormals": grid.subnormals,
        }
    if isinstance(grid, ExplicitSet):
        return {"kind": "explicit", "points": list(map(float, grid.points))}
    raise ConfigError(f"unknown grid type {type(grid)!r}")
