"""Cap families on the unit sphere of frequency directions.

A cap family at scale r = lam**(-2/3) is a maximal r-separated set of unit
vectors: pairwise angular separation >= r, covering radius <= 2r.  The
builder lays down a deterministic Fibonacci spiral slightly denser than the
target separation and then prunes it greedily in spiral order, so the result
is reproducible bit for bit and the separation invariant holds by
construction rather than by the spiral's favourable constants.

Angular bookkeeping on a family:

* ring_histogram / annulus_count: occupancy of the thin rings
  [k*alpha, (k+1)*alpha) around a chosen cap,
* greedy_color: first-fit colouring of the angle < alpha conflict graph,
* select_separated: the four-out-of-six pigeonhole selector.
"""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import cKDTree

from .geometry import angle_between
from .scale import ScaleParams


class DegenerateScaleError(ValueError):
    """Cap radius at or above sphere scale; no lattice exists."""


def chord(angle: float) -> float:
    """Euclidean chord length subtending ``angle`` on the unit sphere."""
    return 2.0 * math.sin(0.5 * angle)


def fibonacci_sphere(n: int) -> np.ndarray:
    """n points of the deterministic Fibonacci spiral, shape (n, 3)."""
    if n < 1:
        raise ValueError("need at least one point")
    i = np.arange(n, dtype=float)
    offset = 2.0 / n
    y = i * offset - 1.0 + 0.5 * offset
    rad = np.sqrt(np.clip(1.0 - y * y, 0.0, None))
    phi = i * (math.pi * (3.0 - math.sqrt(5.0)))
    return np.stack([np.cos(phi) * rad, y, np.sin(phi) * rad], axis=-1)


@dataclass(frozen=True)
class Cap:
    index: int
    center: np.ndarray
    color: int | None = None


@dataclass(frozen=True)
class CapFamily:
    """Finite set of unit direction vectors at a common scale."""

    scale: ScaleParams
    centers: np.ndarray                 # (N, 3), unit rows
    colors: np.ndarray | None = None    # (N,) ints once coloured

    def __len__(self) -> int:
        return self.centers.shape[0]

    def __iter__(self):
        for i in range(len(self)):
            color = None if self.colors is None else int(self.colors[i])
            yield Cap(i, self.centers[i], color)

    @property
    def n_colors(self) -> int:
        if self.colors is None:
            raise ValueError("family is not coloured yet")
        return int(self.colors.max(initial=-1)) + 1

    def xi(self) -> np.ndarray:
        """On-shell frequency centers lam * center, shape (N, 3)."""
        return self.scale.lam * self.centers

    def angles_from(self, index: int) -> np.ndarray:
        """Angles from cap ``index`` to every cap (self included, angle 0)."""
        return angle_between(self.centers[index], self.centers)

    def restrict_to_cone(self, axis: np.ndarray, radius: float) -> "CapFamily":
        """Sub-family of caps within angular ``radius`` of ``axis``."""
        keep = angle_between(np.asarray(axis, float), self.centers) <= radius
        colors = None if self.colors is None else self.colors[keep]
        return replace(self, centers=self.centers[keep], colors=colors)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "ux", "uy", "uz", "color"])
            for cap in self:
                writer.writerow([
                    cap.index,
                    repr(float(cap.center[0])),
                    repr(float(cap.center[1])),
                    repr(float(cap.center[2])),
                    "" if cap.color is None else cap.color,
                ])


# a spiral of ~8/r^2 points has covering radius just under r, so pruning to
# r-separation keeps the covering radius of the pruned set under 2r
_DENSITY_FACTOR = 8.0


def build_lattice(scale: ScaleParams) -> CapFamily:
    """Deterministic maximal r-separated cap family for ``scale``."""
    r = scale.r
    if r >= 1.0:
        raise DegenerateScaleError(f"cap radius {r} >= 1, sphere degenerates")
    n_fib = max(16, int(round(_DENSITY_FACTOR / (r * r))))
    pts = fibonacci_sphere(n_fib)

    tree = cKDTree(pts)
    close = tree.query_pairs(chord(r), output_type="ndarray")
    keep = np.ones(n_fib, dtype=bool)
    if close.size:
        # earlier-spiral neighbours of each point among the violating pairs
        earlier: dict[int, list[int]] = {}
        for i, j in close:
            earlier.setdefault(int(j), []).append(int(i))
        for j in sorted(earlier):
            if any(keep[i] for i in earlier[j]):
                keep[j] = False
    return CapFamily(scale=scale, centers=pts[keep])


def min_separation(family: CapFamily) -> float:
    """Smallest pairwise angle in the family (via nearest neighbours)."""
    if len(family) < 2:
        return math.pi
    tree = cKDTree(family.centers)
    dist, _ = tree.query(family.centers, k=2)
    nearest_chord = float(np.min(dist[:, 1]))
    return 2.0 * math.asin(min(1.0, 0.5 * nearest_chord))


def covering_probe(family: CapFamily, probes: np.ndarray) -> float:
    """Largest angular distance from the probe directions to the family."""
    tree = cKDTree(family.centers)
    dist, _ = tree.query(np.asarray(probes, float), k=1)
    worst = float(np.max(dist))
    return 2.0 * math.asin(min(1.0, 0.5 * worst))


# ---------------------------------------------------------------------------
# thin angular rings
# ---------------------------------------------------------------------------

def ring_histogram(family: CapFamily, center_index: int) -> np.ndarray:
    """Occupancy of the rings [k*alpha, (k+1)*alpha) around one cap.

    Entry k counts the other caps whose angle from the center falls in ring
    k; the center itself is excluded.  Summing the histogram is therefore
    exactly len(family) - 1, which the partition tests assert.
    """
    alpha = family.scale.alpha
    angles = family.angles_from(center_index)
    angles = np.delete(angles, center_index)
    rings = np.floor(angles / alpha).astype(np.int64)
    return np.bincount(rings)


def annulus_count(family: CapFamily, center_index: int, k: int) -> int:
    """Number of caps in the thin ring [k*alpha, (k+1)*alpha), k >= 1."""
    if k < 1:
        raise ValueError(f"ring index must be >= 1, got {k}")
    alpha = family.scale.alpha
    angles = family.angles_from(center_index)
    angles = np.delete(angles, center_index)
    return int(np.count_nonzero((angles >= k * alpha) & (angles < (k + 1) * alpha)))


# ---------------------------------------------------------------------------
# conflict graph and colouring
# ---------------------------------------------------------------------------

def conflict_pairs(family: CapFamily) -> np.ndarray:
    """Pairs (i < j) of caps closer than alpha, as an (m, 2) int array."""
    tree = cKDTree(family.centers)
    pairs = tree.query_pairs(chord(family.scale.alpha), output_type="ndarray")
    return pairs.reshape(-1, 2)


def conflict_degrees(family: CapFamily) -> np.ndarray:
    """Degree of each cap in the angle < alpha conflict graph."""
    deg = np.zeros(len(family), dtype=np.int64)
    for i, j in conflict_pairs(family):
        deg[i] += 1
        deg[j] += 1
    return deg


def greedy_color(family: CapFamily) -> CapFamily:
    """First-fit colouring of the conflict graph in ascending cap order.

    Uses at most max_degree + 1 classes; caps sharing a class are >= alpha
    apart because every closer pair is an edge.
    """
    n = len(family)
    adj: dict[int, list[int]] = {}
    for i, j in conflict_pairs(family):
        adj.setdefault(int(i), []).append(int(j))
        adj.setdefault(int(j), []).append(int(i))
    colors = np.full(n, -1, dtype=np.int64)
    for v in range(n):
        used = {colors[w] for w in adj.get(v, ()) if colors[w] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    return replace(family, colors=colors)


# ---------------------------------------------------------------------------
# four separated directions out of six
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeparationResult:
    subset: tuple[int, int, int, int] | None
    dense_pairs: int


def select_separated(dirs: np.ndarray, alpha: float) -> SeparationResult:
    """First 4-subset of six directions that is pairwise >= alpha separated.

    Subsets are scanned in lexicographic order, so the result is
    deterministic.  dense_pairs counts the strictly-closer-than-alpha pairs
    among all fifteen, whatever the search outcome.
    """
    d = np.asarray(dirs, dtype=float)
    if d.shape != (6, 3):
        raise ValueError("expected six 3-vectors")
    ang = {}
    for i, j in itertools.combinations(range(6), 2):
        ang[(i, j)] = float(angle_between(d[i], d[j]))
    dense = sum(1 for v in ang.values() if v < alpha)
    for sub in itertools.combinations(range(6), 4):
        if all(ang[(i, j)] >= alpha
               for i, j in itertools.combinations(sub, 2)):
            return SeparationResult(subset=sub, dense_pairs=dense)
    return SeparationResult(subset=None, dense_pairs=dense)
