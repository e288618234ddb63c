"""2D drawings: representation, scaling, distances, and generators.

The bundled optimizer is a deliberately small stochastic pairwise scheme:
it stands in for an external stress-optimizing engine so the experiment
harness has a hermetic "good" layout source. External layouts enter via
the id,x,y CSV format.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLayoutError, ParseError
from .graph import DistanceMatrix, Graph


@dataclass(frozen=True, eq=False)
class Layout:
    """Per-vertex 2D coordinates; row i is the position of vertex i."""

    positions: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.positions, dtype=float)
        if p.ndim != 2 or p.shape[1] != 2:
            raise ValueError(f"positions must have shape (n, 2), got {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("layout contains non-finite coordinates")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "positions", p)

    @property
    def n(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True, eq=False)
class LayoutDistances:
    """Symmetric matrix of pairwise Euclidean distances of a drawing."""

    e: np.ndarray

    def __post_init__(self) -> None:
        e = np.asarray(self.e, dtype=float)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {e.shape}")
        if not np.all(np.isfinite(e)):
            raise ValueError("layout distances contain non-finite entries")
        if np.any(np.diagonal(e) != 0.0) or np.any(e < 0.0):
            raise ValueError("layout distances must be nonnegative with zero diagonal")
        if not np.array_equal(e, e.T):
            raise ValueError("layout distances must be symmetric")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "e", e)

    @property
    def n(self) -> int:
        return self.e.shape[0]

    @property
    def max_distance(self) -> float:
        return float(self.e.max())


def pairwise_distances(layout: Layout) -> LayoutDistances:
    """Euclidean distance between every vertex pair."""
    if layout.n < 2:
        raise ValueError(f"need at least 2 vertices, got {layout.n}")
    p = layout.positions
    diff = p[:, None, :] - p[None, :, :]
    e = np.sqrt(np.sum(diff * diff, axis=-1))
    np.fill_diagonal(e, 0.0)
    return LayoutDistances(e)


def scale_layout(layout: Layout, alpha: float) -> Layout:
    """Multiply every coordinate by alpha (> 0, finite)."""
    if not (math.isfinite(alpha) and alpha > 0.0):
        raise ValueError(f"scale factor must be a positive finite real, got {alpha}")
    return Layout(layout.positions * alpha)


def scale_to_max_distance(layout: Layout, target: float) -> Layout:
    """Rescale so the maximum pairwise drawing distance equals target."""
    if not (math.isfinite(target) and target > 0.0):
        raise ValueError(f"target distance must be positive and finite, got {target}")
    current = pairwise_distances(layout).max_distance
    if current == 0.0:
        raise DegenerateLayoutError("all points coincide; layout has no scale")
    return scale_layout(layout, target / current)


def random_layout(n: int, seed: int) -> Layout:
    """n points i.i.d. uniform on the unit square, deterministic per seed."""
    if n < 1:
        raise ValueError(f"need at least 1 vertex, got {n}")
    rng = np.random.default_rng(seed)
    return Layout(rng.random((n, 2)))


def circle_layout(n: int) -> Layout:
    """Vertex i at angle 2*pi*i/n on the unit circle."""
    if n < 2:
        raise ValueError(f"need at least 2 vertices, got {n}")
    angles = 2.0 * np.pi * np.arange(n) / n
    return Layout(np.column_stack([np.cos(angles), np.sin(angles)]))


def optimize_layout(
    graph: Graph,
    distances: DistanceMatrix,
    seed: int = 0,
    iterations: int = 100,
) -> Layout:
    """Improve a random initial drawing by stochastic pairwise relaxation.

    Each update picks a vertex pair and moves both endpoints toward their
    target distance d_ij by a fraction of the exact correction. The fraction
    anneals geometrically from 0.1 to 0.001 over the iterations; one
    iteration performs 15*n pair updates. Pairs are sampled with probability
    proportional to d_ij^-2, matching the weighting the stress metrics
    apply. Deterministic for a fixed (graph, seed, iterations).
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    n = distances.n
    if graph.vertex_count != n:
        raise ValueError(
            f"graph has {graph.vertex_count} vertices but distances are {n}x{n}"
        )
    start = random_layout(n, seed)
    pair_rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(1)[0])

    iu, ju = np.triu_indices(n, 1)
    weights = 1.0 / distances.d[iu, ju] ** 2
    cumulative = np.cumsum(weights)
    cumulative /= cumulative[-1]

    xs = start.positions[:, 0].tolist()
    ys = start.positions[:, 1].tolist()
    target = distances.d.tolist()
    i_list = iu.tolist()
    j_list = ju.tolist()
    updates = 15 * n
    decay = (0.001 / 0.1) ** (1.0 / (iterations - 1)) if iterations > 1 else 1.0
    step = 0.1
    for _ in range(iterations):
        picks = np.searchsorted(cumulative, pair_rng.random(updates), side="right")
        for p in picks.tolist():
            a = i_list[p]
            b = j_list[p]
            dx = xs[a] - xs[b]
            dy = ys[a] - ys[b]
            r = math.sqrt(dx * dx + dy * dy)
            if r < 1e-12:
                # coincident pair: push apart along a fixed axis
                dx, dy, r = 1.0, 0.0, 1.0
            shift = step * (r - target[a][b]) * 0.5 / r
            xs[a] -= shift * dx
            ys[a] -= shift * dy
            xs[b] += shift * dx
            ys[b] += shift * dy
        step *= decay
    return Layout(np.column_stack([xs, ys]))


LAYOUT_CSV_HEADER = "id,x,y"


def write_layout_csv(layout: Layout) -> str:
    """Serialize as id,x,y rows at full double precision (round-trips exactly)."""
    lines = [LAYOUT_CSV_HEADER]
    for i, (x, y) in enumerate(layout.positions.tolist()):
        lines.append(f"{i},{x!r},{y!r}")
    return "\n".join(lines) + "\n"


def read_layout_csv(text: str) -> Layout:
    """Parse the id,x,y format; ids must be exactly 0..n-1, each once."""
    lines = [ln.strip() for ln in text.splitlines()]
    rows = [ln for ln in lines if ln]
    if not rows or rows[0].replace(" ", "") != LAYOUT_CSV_HEADER:
        raise ParseError(f"layout CSV must start with header '{LAYOUT_CSV_HEADER}'")
    coords: dict[int, tuple[float, float]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        parts = [p.strip() for p in row.split(",")]
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected 'id,x,y', got {row!r}")
        try:
            vid = int(parts[0])
            x, y = float(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(f"line {lineno}: malformed layout row {row!r}") from None
        if vid in coords:
            raise ParseError(f"line {lineno}: duplicate row for vertex id {vid}")
        coords[vid] = (x, y)
    n = len(coords)
    for vid in range(n):
        if vid not in coords:
            raise ParseError(f"layout is missing a row for vertex id {vid}")
    return Layout(np.array([coords[i] for i in range(n)], dtype=float))
