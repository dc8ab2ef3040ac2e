"""Annealed grid minimizers for finite N-clusters.

The minimizer approximates perimeter-minimal clusters with prescribed
chamber areas on a pixel grid.  The energy is the smoothed marching-squares
half-sum perimeter (each interface counted once) plus an area penalty;
moves are single-cell relabelings restricted to boundary-adjacent cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from . import _kernels
from ._kernels import PAD
from .errors import InvalidArgumentError
from .grid import (
    GridCluster,
    boundary_connectivity,
    smooth_field,
    triple_point_count,
)

#: minimum grid side for a meaningful discretization
MIN_GRID_SIDE = 128
#: maximum cell budget allowed to be occupied
MAX_FILL_FRACTION = 0.8
#: flagged-failure threshold on relative area deviation
AREA_TOL = 0.01


@dataclass(frozen=True)
class AnnealConfig:
    """Annealing schedule; fully determines the run together with the grid.

    ``area_weight`` is the energy penalty per unit of absolute area
    deviation; ``None`` selects 10x (initial perimeter / domain area) at
    run time.  ``edge_weight`` scales a combinatorial interface-length
    regularizer that keeps chambers compact at the cell scale (the smoothed
    level set is blind to isolated cells and one-cell filaments).  ``n_temps`` geometric cooling steps are taken from the
    initial temperature ``t0``, which is expressed in units of the cell
    size (single-cell moves change the perimeter by O(h)).
    """

    t0: float = 1.0
    cooling: float = 0.93
    sweeps: int = 4
    area_weight: float | None = None
    edge_weight: float = 0.1
    seed: int = 0
    n_temps: int = 90

    def __post_init__(self):
        if not (0.0 < self.cooling < 1.0):
            raise InvalidArgumentError(
                f"cooling factor must lie in (0, 1), got {self.cooling}"
            )
        if self.area_weight is not None and not (self.area_weight > 0.0):
            raise InvalidArgumentError("area-penalty weight must be positive")
        if self.edge_weight < 0.0:
            raise InvalidArgumentError("edge-count weight must be nonnegative")
        if not (self.t0 > 0.0) or self.sweeps < 1 or self.n_temps < 1:
            raise InvalidArgumentError("invalid annealing schedule")


@dataclass(frozen=True)
class MinimizeResult:
    """Best-seen state of one annealing run plus boundary diagnostics."""

    grid: GridCluster
    p_estimate: float
    area_errors: tuple[float, ...]
    boundary_connected: bool
    triple_points: int
    energy: float
    energy_trace: tuple[float, ...]
    converged: bool
    config: AnnealConfig


def _initial_labels(areas, width, height, h):
    """Seed chambers as square blocks packed around the domain center.

    Blocks are laid out on a quadrant spiral nearest the center, which keeps
    the initial support bounded and away from the padded frame.
    """
    lab = np.zeros((height + 2 * PAD, width + 2 * PAD), dtype=np.int64)
    ci, cj = PAD + height // 2, PAD + width // 2
    sides = [max(1, round(math.sqrt(a) / h)) for a in areas]
    # quadrants around the center: (rows above?, cols right of?) the center
    quads = [(False, True), (False, False), (True, False), (True, True)]
    layer_off = [0, 0, 0, 0]
    for k, s in enumerate(sides, start=1):
        q = (k - 1) % 4
        up, right = quads[q]
        off = layer_off[q]
        r0, r1 = (ci - s, ci) if up else (ci, ci + s)
        c0, c1 = (cj + off, cj + off + s) if right else (cj - off - s, cj - off)
        if r0 < PAD or c0 < PAD or r1 > PAD + height or c1 > PAD + width:
            raise InvalidArgumentError(
                f"chamber {k} (side {s} cells) does not fit the grid"
            )
        if (lab[r0:r1, c0:c1] != 0).any():
            raise InvalidArgumentError(
                f"initial block for chamber {k} overlaps a previous one"
            )
        lab[r0:r1, c0:c1] = k
        layer_off[(k - 1) % 4] += s
    return lab


def minimize_n_cluster(
    areas, grid_spec: tuple[int, int, float], cfg: AnnealConfig | None = None
) -> MinimizeResult:
    """Approximate a minimal N-cluster with the given chamber areas.

    ``grid_spec`` is (width, height, h).  Zero areas are dropped (an empty
    chamber is the same cluster); the run is deterministic for a fixed
    config.  Area deviation above 1% of target marks the result as not
    converged rather than raising.
    """
    if cfg is None:
        cfg = AnnealConfig()
    width, height, h = int(grid_spec[0]), int(grid_spec[1]), float(grid_spec[2])
    if min(width, height) < MIN_GRID_SIDE:
        raise InvalidArgumentError(
            f"grid must be at least {MIN_GRID_SIDE} cells per side"
        )
    if not (h > 0.0):
        raise InvalidArgumentError(f"cell size must be positive, got {h}")
    areas = [float(a) for a in areas]
    if any(a < 0.0 for a in areas):
        raise InvalidArgumentError("areas must be nonnegative")
    keep = [a for a in areas if a > 0.0]
    domain_area = width * height * h * h
    if sum(keep) > MAX_FILL_FRACTION * domain_area:
        raise InvalidArgumentError(
            f"total area {sum(keep):g} exceeds {MAX_FILL_FRACTION:.0%} "
            f"of the domain area {domain_area:g}"
        )

    labels = _initial_labels(keep, width, height, h)
    nlab = len(keep) + 1
    fields = np.stack(
        [smooth_field(labels == k) for k in range(nlab)]
    ).astype(float)
    counts = np.array([(labels == k).sum() for k in range(nlab)], dtype=np.int64)
    targets = np.array(
        [0.0] + [a / (h * h) for a in keep]
    )  # target cell counts; label 0 unconstrained (weight only on k >= 1)

    lam = cfg.area_weight
    if lam is None:
        init_perim = 2.0 * sum(
            2.0 * max(1, round(math.sqrt(a) / h)) * h for a in keep
        )
        lam = 10.0 * init_perim / domain_area
    t0 = cfg.t0 * h

    best, energy, trace = _kernels.anneal(
        labels,
        fields,
        counts,
        targets,
        h,
        lam,
        cfg.edge_weight,
        t0,
        cfg.cooling,
        cfg.sweeps,
        cfg.n_temps,
        cfg.seed + 1,
    )
    core = best[PAD:-PAD, PAD:-PAD]
    gc = GridCluster(core, h, targets=tuple(keep))
    achieved = gc.chamber_areas()
    errs = tuple(abs(m - a) / a for m, a in zip(achieved, keep))
    n_comp = boundary_connectivity(gc)
    result = MinimizeResult(
        grid=gc,
        p_estimate=gc.perimeter(),
        area_errors=errs,
        boundary_connected=n_comp == 1,
        triple_points=triple_point_count(gc),
        energy=float(energy),
        energy_trace=tuple(float(e) for e in trace),
        converged=all(e <= AREA_TOL for e in errs),
        config=cfg,
    )
    return result


def p_sequence(
    areas, n_max: int, grid_spec: tuple[int, int, float], cfg: AnnealConfig | None = None
) -> list[float]:
    """Minimal-perimeter estimates p_n for the truncated clusters n = 1..n_max.

    The estimates should be nondecreasing up to discretization slack and
    bounded by the competitor value 2*sqrt(pi) * sum of sqrt(areas).
    """
    if n_max < 1:
        raise InvalidArgumentError(f"n_max must be >= 1, got {n_max}")
    areas = [float(a) for a in areas]
    if len(areas) < n_max:
        raise InvalidArgumentError(
            f"need at least n_max={n_max} areas, got {len(areas)}"
        )
    return [
        minimize_n_cluster(areas[:n], grid_spec, cfg).p_estimate
        for n in range(1, n_max + 1)
    ]


def competitor_bound(sqrt_area_sum: float) -> float:
    """Upper bound 2*sqrt(pi) * sum of sqrt(a_k) from disjoint round disks."""
    return 2.0 * math.sqrt(math.pi) * sqrt_area_sum


class ClusterAnnealer(BaseEstimator):
    """Estimator-style front end for the grid annealer.

    Parameters mirror ``AnnealConfig`` plus the grid geometry; ``fit``
    takes the list of chamber areas and stores the run outputs on
    trailing-underscore attributes.
    """

    def __init__(
        self,
        width=256,
        height=256,
        h=1.0 / 256.0,
        t0=1.0,
        cooling=0.93,
        sweeps=4,
        area_weight=None,
        edge_weight=0.1,
        n_temps=90,
        seed=0,
    ):
        self.width = width
        self.height = height
        self.h = h
        self.t0 = t0
        self.cooling = cooling
        self.sweeps = sweeps
        self.area_weight = area_weight
        self.edge_weight = edge_weight
        self.n_temps = n_temps
        self.seed = seed

    def _config(self) -> AnnealConfig:
        return AnnealConfig(
            t0=self.t0,
            cooling=self.cooling,
            sweeps=self.sweeps,
            area_weight=self.area_weight,
            edge_weight=self.edge_weight,
            seed=self.seed,
            n_temps=self.n_temps,
        )

    def fit(self, areas, y=None):
        result = minimize_n_cluster(
            areas, (self.width, self.height, self.h), self._config()
        )
        self.result_ = result
        self.labels_ = result.grid.labels
        self.p_estimate_ = result.p_estimate
        return self

    def score(self, areas=None, y=None):
        """Negative energy of the fitted state (higher is better)."""
        if not hasattr(self, "result_"):
            raise InvalidArgumentError("estimator is not fitted")
        return -self.result_.energy
