"""Causal geometry of a bounded 1+1D Minkowski window (c = 1).

Spacetime is sampled on a square grid of cells of side ``h``; a cell is
represented by its center.  Row index runs along t, column index along x, so
two cells are spacelike exactly when their column offset exceeds their row
offset.  All set-valued operations work on boolean masks and are exact at the
cell level.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

DEFAULT_MAX_CELLS = 4_000_000

# ray-trace verdicts, ordered so that min/max implement three-valued and/or
MISS, UNKNOWN, HIT = 0, 1, 2


class CausalRelation(enum.Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"


@dataclass(frozen=True)
class Event:
    t: float
    x: float

    def __post_init__(self):
        if not (math.isfinite(self.t) and math.isfinite(self.x)):
            raise ValueError("event coordinates must be finite")


def causal_relation(e1: Event, e2: Event) -> CausalRelation:
    dt = abs(e1.t - e2.t)
    dx = abs(e1.x - e2.x)
    if dx > dt:
        return CausalRelation.SPACELIKE
    if dx == dt:
        return CausalRelation.LIGHTLIKE
    return CausalRelation.TIMELIKE


def _steps(length: float, h: float) -> int:
    q = length / h
    n = round(q)
    if n <= 0 or abs(q - n) > 1e-9 * max(1.0, q):
        raise ValueError(f"{length} is not a positive multiple of h={h}")
    return n


@dataclass(frozen=True)
class Window:
    """The box |t| <= t_max, |x| <= x_max cut into cells of side h."""

    t_max: float
    x_max: float
    h: float
    max_cells: int = DEFAULT_MAX_CELLS

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("cell size must be positive")
        n_rows, n_cols = 2 * _steps(self.t_max, self.h), 2 * _steps(self.x_max, self.h)
        if n_rows * n_cols > self.max_cells:
            raise ValueError(f"window has {n_rows * n_cols} cells, limit is {self.max_cells}")

    @property
    def shape(self) -> tuple[int, int]:
        return 2 * _steps(self.t_max, self.h), 2 * _steps(self.x_max, self.h)

    @property
    def n_cells(self) -> int:
        r, c = self.shape
        return r * c

    def t_centers(self) -> np.ndarray:
        return -self.t_max + (np.arange(self.shape[0]) + 0.5) * self.h

    def x_centers(self) -> np.ndarray:
        return -self.x_max + (np.arange(self.shape[1]) + 0.5) * self.h

    def half_cells(self) -> tuple[np.ndarray, np.ndarray]:
        """Integer cell-center coordinates in units of h/2 (always odd)."""
        r, c = self.shape
        return 2 * np.arange(r) + 1 - r, 2 * np.arange(c) + 1 - c

    def half_units(self, length: float) -> float:
        """A length in units of h/2, snapped to an integer when it is one."""
        q = 2 * length / self.h
        n = round(q)
        return float(n) if abs(q - n) <= 1e-9 * max(1.0, abs(q)) else q

    def cell_of(self, t: float, x: float) -> tuple[int, int]:
        row = int(math.floor((t + self.t_max) / self.h))
        col = int(math.floor((x + self.x_max) / self.h))
        r, c = self.shape
        if not (0 <= row < r and 0 <= col < c):
            raise ValueError(f"event ({t}, {x}) lies outside the window")
        return row, col

    def to_json(self) -> dict:
        return {"t_max": self.t_max, "x_max": self.x_max, "h": self.h}


class Region:
    """A set of cells of a window, stored as a read-only boolean mask."""

    def __init__(self, window: Window, mask: np.ndarray, tag: str = "custom"):
        mask = np.array(mask, dtype=bool)
        if mask.shape != window.shape:
            raise ValueError(f"mask shape {mask.shape} does not match window {window.shape}")
        mask.setflags(write=False)
        self.window = window
        self.mask = mask
        self.tag = tag

    @classmethod
    def from_cells(cls, window: Window, cells: Iterable[tuple[int, int]], tag: str = "custom") -> Region:
        mask = np.zeros(window.shape, dtype=bool)
        r, c = window.shape
        for row, col in cells:
            if not (0 <= row < r and 0 <= col < c):
                raise ValueError(f"cell {(row, col)} lies outside the window")
            mask[row, col] = True
        return cls(window, mask, tag)

    @classmethod
    def empty(cls, window: Window) -> Region:
        return cls(window, np.zeros(window.shape, dtype=bool), "empty")

    @classmethod
    def whole(cls, window: Window) -> Region:
        return cls(window, np.ones(window.shape, dtype=bool), "window")

    @property
    def cells(self) -> list[tuple[int, int]]:
        rows, cols = np.nonzero(self.mask)
        return list(zip(rows.tolist(), cols.tolist()))

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __bool__(self) -> bool:
        return bool(self.mask.any())

    def __contains__(self, cell) -> bool:
        row, col = cell
        r, c = self.window.shape
        return 0 <= row < r and 0 <= col < c and bool(self.mask[row, col])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Region):
            return NotImplemented
        return self.window == other.window and np.array_equal(self.mask, other.mask)

    def __hash__(self) -> int:
        return hash((self.window, self.mask.tobytes()))

    def __repr__(self) -> str:
        return f"Region({self.tag}, {len(self)} cells of {self.window.n_cells})"

    def _other(self, other: Region) -> np.ndarray:
        if other.window != self.window:
            raise ValueError("regions live on different windows")
        return other.mask

    def __or__(self, other: Region) -> Region:
        return Region(self.window, self.mask | self._other(other))

    def __and__(self, other: Region) -> Region:
        return Region(self.window, self.mask & self._other(other))

    def __sub__(self, other: Region) -> Region:
        return Region(self.window, self.mask & ~self._other(other))

    def __le__(self, other: Region) -> bool:
        return not np.any(self.mask & ~self._other(other))

    def __lt__(self, other: Region) -> bool:
        return self <= other and len(self) < len(other)

    def to_json(self) -> dict:
        return {"window": self.window.to_json(), "cells": [list(c) for c in self.cells], "tag": self.tag}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj: dict) -> Region:
        w = obj["window"]
        window = Window(float(w["t_max"]), float(w["x_max"]), float(w["h"]))
        return cls.from_cells(window, [tuple(c) for c in obj["cells"]], obj.get("tag", "custom"))


# ---------------------------------------------------------------------------
# constructors (strict inequalities at cell centers)


def _coords(window: Window) -> tuple[np.ndarray, np.ndarray]:
    tt, xx = window.half_cells()
    return tt[:, None], xx[None, :]


def cylinder(window: Window, a: float, tau: float, center: tuple[float, float] = (0.0, 0.0)) -> Region:
    """{|x - x0| < a, |t - t0| < tau}."""
    tt, xx = _coords(window)
    t0, x0 = window.half_units(center[0]), window.half_units(center[1])
    mask = (np.abs(xx - x0) < window.half_units(a)) & (np.abs(tt - t0) < window.half_units(tau))
    return Region(window, mask, f"cylinder(a={a}, tau={tau})")


def diamond(window: Window, center: tuple[float, float], radius: float) -> Region:
    """{|t - t0| + |x - x0| < radius}."""
    tt, xx = _coords(window)
    t0, x0 = window.half_units(center[0]), window.half_units(center[1])
    mask = np.abs(tt - t0) + np.abs(xx - x0) < window.half_units(radius)
    return Region(window, mask, f"diamond(center={tuple(center)}, r={radius})")


def time_slice(t0: float, tau: float, window: Window) -> Region:
    """Cells with |t - t0| < tau across the full width of the window."""
    tt, xx = _coords(window)
    mask = np.broadcast_to(np.abs(tt - window.half_units(t0)) < window.half_units(tau), window.shape)
    return Region(window, mask, f"slab(t0={t0}, tau={tau})")


def wedge(window: Window, apex: tuple[float, float], side: str = "right") -> Region:
    """Spacelike wedge x - x0 > |t - t0| (``side="right"``) or its mirror image."""
    tt, xx = _coords(window)
    t0, x0 = window.half_units(apex[0]), window.half_units(apex[1])
    sign = {"right": 1, "left": -1}[side]
    mask = sign * (xx - x0) > np.abs(tt - t0)
    return Region(window, mask, f"wedge({side}, apex={tuple(apex)})")


# ---------------------------------------------------------------------------
# mask-level kernels, shared with the qubit-chain net


def complement_mask(mask: np.ndarray) -> np.ndarray:
    """Cells spacelike to every marked cell (unit grid, speed 1).

    In null coordinates u = row + col, v = row - col a pair of cells is
    causally related (or equal) exactly when one dominates the other in both
    coordinates, so the related set is the union of a lower-left and an
    upper-right cumulative OR over the null grid.
    """
    n_rows, n_cols = mask.shape
    rows, cols = np.nonzero(mask)
    size = n_rows + n_cols - 1
    occ = np.zeros((size, size), dtype=bool)
    occ[rows + cols, rows - cols + n_cols - 1] = True
    below = np.logical_or.accumulate(np.logical_or.accumulate(occ, axis=0), axis=1)
    above = np.logical_or.accumulate(np.logical_or.accumulate(occ[::-1, ::-1], axis=0), axis=1)[::-1, ::-1]
    r, c = np.indices(mask.shape)
    u, v = r + c, r - c + n_cols - 1
    return ~(below[u, v] | above[u, v])


def _trace_rays(target: np.ndarray, dt: int, dx: int) -> np.ndarray:
    """Verdict of the slope-1 ray from every cell towards (dt, dx) against ``target``.

    A ray that passes the last row of the target misses.  A ray that leaves
    through a side of the window while rows of the target remain ahead is
    unresolved, unless the target touches that side within those rows: such a
    target is read as truncated by the window and continuing past it.
    """
    n_rows, n_cols = target.shape
    out = np.full(target.shape, MISS, dtype=np.int8)
    occupied = np.nonzero(target.any(axis=1))[0]
    if len(occupied) == 0:
        return out
    lo, hi = occupied[0], occupied[-1]
    edge = target[:, 0] if dx < 0 else target[:, -1]
    # edge_ahead[r]: the target touches the exit side at some row reached after row r
    if dt < 0:
        seen = np.concatenate([[False], np.logical_or.accumulate(edge)[:-1]])
        order = range(n_rows)
    else:
        seen = np.concatenate([np.logical_or.accumulate(edge[::-1])[::-1][1:], [False]])
        order = range(n_rows - 1, -1, -1)
    exit_col = 0 if dx < 0 else n_cols - 1
    for r in order:
        nxt = r + dt
        row = np.full(n_cols, MISS, dtype=np.int8)
        if (dt < 0 and nxt >= lo) or (dt > 0 and nxt <= hi):
            shifted = np.roll(out[nxt], -dx)
            row[:] = shifted
            row[exit_col] = HIT if seen[r] else UNKNOWN
        row[target[r]] = HIT
        out[r] = row
    return out


def dependence_codes(target: np.ndarray) -> np.ndarray:
    """Per-cell verdict of causal dependence on ``target``: HIT, UNKNOWN or MISS.

    A cell depends on the target when both backward rays hit it, or both
    forward rays do.
    """
    back = np.minimum(_trace_rays(target, -1, -1), _trace_rays(target, -1, 1))
    fwd = np.minimum(_trace_rays(target, 1, -1), _trace_rays(target, 1, 1))
    return np.maximum(back, fwd)


# ---------------------------------------------------------------------------
# region-level operations


def _same_window(*regions: Region) -> Window:
    w = regions[0].window
    if any(r.window != w for r in regions):
        raise ValueError("regions live on different windows")
    return w


def causally_depends(o2: Region, o1: Region) -> bool | None:
    """Whether every cell of ``o2`` depends causally on ``o1``.

    Returns None when the window truncates a ray before the answer is decided.
    """
    _same_window(o1, o2)
    if not o2:
        return True
    verdict = int(dependence_codes(o1.mask)[o2.mask].min())
    return {HIT: True, MISS: False, UNKNOWN: None}[verdict]


def domain_of_dependence(o: Region) -> Region:
    if not o:
        raise ValueError("domain of dependence of an empty region")
    return Region(o.window, dependence_codes(o.mask) == HIT, f"D({o.tag})")


def causal_complement(o: Region) -> Region:
    """Cells spacelike to every cell of ``o``."""
    return Region(o.window, complement_mask(o.mask), f"({o.tag})'")


def double_complement(o: Region) -> Region:
    return Region(o.window, complement_mask(complement_mask(o.mask)), f"({o.tag})''")


@dataclass(frozen=True)
class DiamondDecomposition:
    cylinder: Region
    caps_t: Region
    caps_r: Region
    diamond: Region
    domain: Region

    def counts(self) -> dict[str, int]:
        return {
            "cylinder": len(self.cylinder),
            "caps_t": len(self.caps_t),
            "caps_r": len(self.caps_r),
            "diamond": len(self.diamond),
        }

    def tiles(self) -> bool:
        parts = [self.cylinder.mask, self.caps_t.mask, self.caps_r.mask]
        disjoint = sum(p.astype(int) for p in parts).max() <= 1
        return bool(disjoint and np.array_equal(parts[0] | parts[1] | parts[2], self.diamond.mask))


def diamond_decomposition(a: float, tau: float, window: Window) -> DiamondDecomposition:
    """Split C'' of the cylinder {|x| < a, |t| < tau} into C, D(C) \\ C and C'' \\ D(C)."""
    if a <= 0 or tau <= 0:
        raise ValueError("cylinder half-width and half-height must be positive")
    if a + tau > min(window.t_max, window.x_max):
        raise ValueError("the diamond of this cylinder does not fit in the window")
    cyl = cylinder(window, a, tau)
    dom = domain_of_dependence(cyl)
    dia = double_complement(cyl)
    if not dom <= dia:
        raise AssertionError("domain of dependence escapes the causal completion")
    return DiamondDecomposition(
        cylinder=cyl,
        caps_t=Region(window, dom.mask & ~cyl.mask, "caps_t"),
        caps_r=Region(window, dia.mask & ~dom.mask, "caps_r"),
        diamond=Region(window, dia.mask, "diamond"),
        domain=dom,
    )
