"""Disjoint disks filling the open unit square, built constructively.

The construction is inductive: start from the disk of radius 0.49 at the
origin, then repeatedly slice the square into an N x N grid, classify cells
as A (inside a disk), B (disjoint from every disk) or C (crossing a disk
boundary), and drop a disk of radius 0.49/N into every B cell. After n
rounds the covered area is at least 1 - 2^-n, and the closed disks stay
strictly inside the open square and strictly apart from each other, so the
packing has a positive separation margin gamma.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

BASE_RADIUS = 0.49
N_CAP_DEFAULT = 20000


class PackingBudgetError(RuntimeError):
    """The subdivision grid required exceeds the configured cap."""

    def __init__(self, needed: int, cap: int, round_index: int):
        self.needed = needed
        self.cap = cap
        self.round_index = round_index
        super().__init__(
            f"packing budget exceeded: round {round_index} needs grid N={needed} "
            f"but the cap is {cap}"
        )


@dataclass(frozen=True)
class Disk:
    """Closed disk kept strictly inside the open square (-1/2, 1/2)^2."""

    x: float
    y: float
    r: float


@dataclass(frozen=True)
class RoundStats:
    n_grid: int
    count_a: int
    count_b: int
    count_c: int
    c_perimeter: float  # 4 sqrt(2) pi sum(r) at subdivision time


@dataclass(frozen=True)
class SquareClassification:
    """Cell classification of one N x N subdivision.

    b_centers holds the centers of the B cells as an (n_b, 2) array.
    """

    n_grid: int
    count_a: int
    count_b: int
    count_c: int
    b_centers: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.b_centers, dtype=float).reshape(-1, 2)
        arr.flags.writeable = False
        object.__setattr__(self, "b_centers", arr)
        if self.count_a + self.count_b + self.count_c != self.n_grid**2:
            raise ValueError("cell counts do not partition the grid")


@dataclass(frozen=True)
class Packing:
    """Finite family of pairwise disjoint closed disks in the open square."""

    xs: np.ndarray
    ys: np.ndarray
    rs: np.ndarray
    coverage: float
    gamma: float
    rounds: int
    per_round_stats: tuple

    def __post_init__(self):
        for name in ("xs", "ys", "rs"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def count(self) -> int:
        return self.xs.size

    @property
    def disks(self) -> tuple:
        return tuple(Disk(float(x), float(y), float(r)) for x, y, r in zip(self.xs, self.ys, self.rs))

    @property
    def r_min(self) -> float:
        return float(self.rs.min())

    @property
    def r_max(self) -> float:
        return float(self.rs.max())

    def boundary_margins(self) -> np.ndarray:
        """Per-disk distance to the square boundary: 1/2 - max(|x|,|y|) - r."""
        return 0.5 - np.maximum(np.abs(self.xs), np.abs(self.ys)) - self.rs

    def to_json_dict(self) -> dict:
        return {
            "disks": [
                {"x": float(x), "y": float(y), "r": float(r)}
                for x, y, r in zip(self.xs, self.ys, self.rs)
            ],
            "coverage": float(self.coverage),
            "gamma": float(self.gamma),
            "rounds": int(self.rounds),
            "per_round": [
                {
                    "N": s.n_grid,
                    "A": s.count_a,
                    "B": s.count_b,
                    "C": s.count_c,
                    "c_perimeter": s.c_perimeter,
                }
                for s in self.per_round_stats
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _classify(xs, ys, rs, n_grid):
    """Row-streamed exact classification of the N x N grid.

    Cells and disks are both closed sets: a cell is A when its farthest point
    from some center is within that radius, B when its nearest point to every
    center is strictly outside, and C otherwise (it meets a boundary circle).
    Memory is O(N + number of B cells).
    """
    edges = -0.5 + np.arange(n_grid + 1) / n_grid
    centers = -0.5 + (np.arange(n_grid) + 0.5) / n_grid
    r2 = rs * rs
    count_a = 0
    count_c = 0
    b_x = []
    b_y = []
    for j in range(n_grid):
        y0 = edges[j]
        y1 = edges[j + 1]
        dy_min = np.maximum(np.maximum(y0 - ys, ys - y1), 0.0)
        cand = np.nonzero(dy_min <= rs)[0]
        inside = np.zeros(n_grid, dtype=bool)
        touch = np.zeros(n_grid, dtype=bool)
        dy_max = np.maximum(np.abs(ys - y0), np.abs(ys - y1))
        for d in cand:
            xc = xs[d]
            r = rs[d]
            lo = max(int(math.floor((xc - r + 0.5) * n_grid)) - 1, 0)
            hi = min(int(math.ceil((xc + r + 0.5) * n_grid)) + 1, n_grid)
            if lo >= hi:
                continue
            x0 = edges[lo:hi]
            x1 = edges[lo + 1 : hi + 1]
            dx_min = np.maximum(np.maximum(x0 - xc, xc - x1), 0.0)
            dx_max = np.maximum(np.abs(xc - x0), np.abs(xc - x1))
            min2 = dx_min * dx_min + dy_min[d] * dy_min[d]
            max2 = dx_max * dx_max + dy_max[d] * dy_max[d]
            touch[lo:hi] |= min2 <= r2[d]
            inside[lo:hi] |= max2 <= r2[d]
        count_a += int(inside.sum())
        count_c += int(touch.sum()) - int(inside.sum())
        free = ~touch
        nb = int(free.sum())
        if nb:
            b_x.append(centers[free])
            b_y.append(np.full(nb, centers[j]))
    if b_x:
        bx = np.concatenate(b_x)
        by = np.concatenate(b_y)
        b_centers = np.column_stack([bx, by])
    else:
        b_centers = np.zeros((0, 2))
    count_b = b_centers.shape[0]
    return count_a, count_b, count_c, b_centers


def classify_squares(p: Packing, n_grid: int) -> SquareClassification:
    """Classify the cells of the N x N subdivision against a packing.

    Requires N >= 2 and sqrt(2)/N smaller than every disk radius (cells must
    not be able to swallow a disk), matching the construction's standing
    assumption.
    """
    if n_grid < 2:
        raise ValueError(f"need N >= 2, got {n_grid}")
    if math.sqrt(2.0) / n_grid >= p.r_min:
        raise ValueError(
            f"grid too coarse: sqrt(2)/N = {math.sqrt(2.0) / n_grid:.3e} must be "
            f"smaller than the minimum radius {p.r_min:.3e}"
        )
    count_a, count_b, count_c, b_centers = _classify(p.xs, p.ys, p.rs, n_grid)
    return SquareClassification(n_grid, count_a, count_b, count_c, b_centers)


# ---------------------------------------------------------------------------
# separation margin
# ---------------------------------------------------------------------------

def _min_gap_brute(xs, ys, rs) -> float:
    d2 = (xs[:, None] - xs[None, :]) ** 2 + (ys[:, None] - ys[None, :]) ** 2
    gap = np.sqrt(d2) - (rs[:, None] + rs[None, :])
    iu = np.triu_indices(xs.size, k=1)
    return float(gap[iu].min())


def _min_gap_grouped(xs, ys, rs) -> float:
    """Exact min pairwise gap using per-radius nearest-neighbor queries.

    Within a fixed pair of radius values the gap is minimized by the closest
    centers, so one KD-tree query per group pair suffices. The construction
    produces one radius value per round, so the number of groups is tiny.
    """
    values, inverse = np.unique(rs, return_inverse=True)
    if values.size > 64:
        raise ValueError("too many distinct radii for grouped gap search")
    pts = [np.column_stack([xs[inverse == g], ys[inverse == g]]) for g in range(values.size)]
    trees = [cKDTree(p) for p in pts]
    best = math.inf
    for ga in range(values.size):
        for gb in range(ga, values.size):
            if ga == gb:
                if pts[ga].shape[0] < 2:
                    continue
                dist, _ = trees[ga].query(pts[ga], k=2)
                dmin = float(dist[:, 1].min())
            else:
                dist, _ = trees[gb].query(pts[ga], k=1)
                dmin = float(dist.min())
            best = min(best, dmin - float(values[ga] + values[gb]))
    return best


def _gamma(xs, ys, rs) -> float:
    boundary = float((0.5 - np.maximum(np.abs(xs), np.abs(ys)) - rs).min())
    if xs.size < 2:
        return boundary
    if xs.size <= 2000:
        pair = _min_gap_brute(xs, ys, rs)
    else:
        pair = _min_gap_grouped(xs, ys, rs)
    return min(boundary, pair)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def covering_packing(rounds: int, n_cap: int = N_CAP_DEFAULT) -> Packing:
    """Run the inductive construction for the given number of rounds.

    Round 1 is the single disk (0, 0, 0.49). Each later round subdivides with
    the smallest N satisfying both construction constraints (C_perimeter / N below the
    round's 2^-n-2 budget and sqrt(2)/N below the smallest radius), then adds
    a disk of radius 0.49/N at every B-cell center. After n rounds the
    coverage is at least 1 - 2^-n.
    """
    if rounds < 1:
        raise ValueError(f"need rounds >= 1, got {rounds}")
    xs = np.array([0.0])
    ys = np.array([0.0])
    rs = np.array([BASE_RADIUS])
    stats = []
    for n in range(1, rounds):
        c_per = 4.0 * math.sqrt(2.0) * math.pi * float(rs.sum())
        n_budget = math.floor(c_per * 2.0 ** (n + 2)) + 1
        n_radius = math.floor(math.sqrt(2.0) / float(rs.min())) + 1
        n_grid = max(n_budget, n_radius, 2)
        if n_grid > n_cap:
            raise PackingBudgetError(n_grid, n_cap, n + 1)
        count_a, count_b, count_c, b_centers = _classify(xs, ys, rs, n_grid)
        stats.append(RoundStats(n_grid, count_a, count_b, count_c, c_per))
        r_new = BASE_RADIUS / n_grid
        xs = np.concatenate([xs, b_centers[:, 0]])
        ys = np.concatenate([ys, b_centers[:, 1]])
        rs = np.concatenate([rs, np.full(b_centers.shape[0], r_new)])
    coverage = math.pi * float((rs * rs).sum())
    gamma = _gamma(xs, ys, rs)
    if gamma <= 0:
        raise RuntimeError("construction produced a non-positive separation margin")
    if coverage < 1.0 - 2.0 ** (-rounds):
        raise RuntimeError(
            f"coverage {coverage:.6f} below the guaranteed 1 - 2^-{rounds}"
        )
    return Packing(xs, ys, rs, coverage, gamma, rounds, tuple(stats))


def packing_from_disks(disks, rounds: int = 0) -> Packing:
    """Packing from explicit disks (validated); for tests and ad-hoc systems."""
    if not disks:
        raise ValueError("need at least one disk")
    xs = np.array([d[0] if not isinstance(d, Disk) else d.x for d in disks], dtype=float)
    ys = np.array([d[1] if not isinstance(d, Disk) else d.y for d in disks], dtype=float)
    rs = np.array([d[2] if not isinstance(d, Disk) else d.r for d in disks], dtype=float)
    if np.any(rs <= 0):
        raise ValueError("radii must be positive")
    gamma = _gamma(xs, ys, rs)
    if gamma <= 0:
        raise ValueError("disks are not strictly disjoint inside the open square")
    coverage = math.pi * float((rs * rs).sum())
    return Packing(xs, ys, rs, coverage, gamma, rounds, ())


@dataclass(frozen=True)
class PackingStats:
    coverage: float
    gamma: float
    r_min: float
    r_max: float
    count: int


def packing_stats(p: Packing) -> PackingStats:
    """Coverage, separation margin, radius range and disk count."""
    if p.count < 1:
        raise ValueError("empty packing")
    return PackingStats(
        coverage=p.coverage,
        gamma=p.gamma,
        r_min=p.r_min,
        r_max=p.r_max,
        count=p.count,
    )
