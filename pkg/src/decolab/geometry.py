"""Differential geometry of the paraboloid frequency surface.

The surface is tau = |xi|^2 in R^3 x R.  Everything here is elementary but
is the substrate for the transversality experiments: unit normals, their
large-frequency asymptotics, angle bilipschitz control, Gram determinants of
normal triples, and the broad three-wave functional.

Vector conventions: frequency points xi are (..., 3) arrays, normals are
(..., 4) arrays with the time-like component last.  All angle computations
use the half-angle form 2*atan2(|u-v|, |u+v|) on normalized vectors, which
stays accurate for both tiny and near-pi angles.
"""
from __future__ import annotations

import itertools

import numpy as np

#: the 20 unordered triples out of six indices, in lexicographic order
TRIPLES: tuple[tuple[int, int, int], ...] = tuple(
    itertools.combinations(range(6), 3)
)


class DegenerateGeometryError(ValueError):
    """Raised when a configuration carries no usable transversality."""


def _norm(v: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(v * v, axis=-1))


def normal(xi: np.ndarray) -> np.ndarray:
    """Unit normal (-2 xi, 1)/sqrt(1 + 4|xi|^2) of the surface tau = |xi|^2."""
    xi = np.asarray(xi, dtype=float)
    s2 = np.sum(xi * xi, axis=-1, keepdims=True)
    scale = 1.0 / np.sqrt(1.0 + 4.0 * s2)
    return np.concatenate([-2.0 * xi * scale, scale], axis=-1)


def asymptotic_normal(xi: np.ndarray) -> np.ndarray:
    """First-order stand-in (-xi, 1/2)/|xi| for the normal at large frequency."""
    xi = np.asarray(xi, dtype=float)
    s = _norm(xi)
    if np.any(s == 0.0):
        raise ValueError("asymptotic normal undefined at xi = 0")
    s = s[..., np.newaxis]
    return np.concatenate([-xi / s, 0.5 / s], axis=-1)


def normal_defect(xi: np.ndarray) -> np.ndarray:
    """Defect vector normal(xi) - asymptotic_normal(xi); size O(|xi|^-2)."""
    return normal(xi) - asymptotic_normal(xi)


def normal_residual(xi: np.ndarray) -> np.ndarray:
    """Euclidean size of the normal defect.  Decays like |xi|^-2 / 8."""
    return _norm(normal_defect(xi))


def angle_between(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Angle between vectors of any common dimension, in [0, pi].

    Inputs need not be normalized; zero vectors are a domain error.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu = _norm(u)[..., np.newaxis]
    nv = _norm(v)[..., np.newaxis]
    if np.any(nu == 0.0) or np.any(nv == 0.0):
        raise ValueError("angle undefined for zero vectors")
    a = u / nu
    b = v / nv
    return 2.0 * np.arctan2(_norm(a - b), _norm(a + b))


def bilipschitz_ratio(xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Ratio angle(n(xi), n(eta)) / angle(xi, eta).

    For coincident directions the ratio is 1 by the continuity convention
    when the normals also coincide, and +inf when they do not (parallel
    frequencies at different radii have distinct normals).
    """
    theta_dir = angle_between(xi, eta)
    theta_nor = angle_between(normal(xi), normal(eta))
    theta_dir = np.asarray(theta_dir, dtype=float)
    theta_nor = np.asarray(theta_nor, dtype=float)
    zero = theta_dir == 0.0
    out = np.where(zero,
                   np.where(theta_nor == 0.0, 1.0, np.inf),
                   theta_nor / np.where(zero, 1.0, theta_dir))
    if out.ndim == 0:
        return float(out)
    return out


def gram_det3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Gram determinant of three unit vectors via the pairwise-cosine form.

    det G = 1 - cab^2 - cac^2 - cbc^2 + 2 cab cac cbc, with cxy the cosine
    of the angle between x and y.  Inputs are assumed unit; the identity is
    cross-checked against the brute 3x3 determinant in the test suite.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    cab = np.sum(a * b, axis=-1)
    cac = np.sum(a * c, axis=-1)
    cbc = np.sum(b * c, axis=-1)
    return 1.0 - cab * cab - cac * cac - cbc * cbc + 2.0 * cab * cac * cbc


def wedge3_norm(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """|a ^ b ^ c| for unit vectors: sqrt of the Gram determinant, clipped.

    The clip removes the negative-epsilon noise a degenerate triple leaves
    behind in floating point.
    """
    return np.sqrt(np.clip(gram_det3(a, b, c), 0.0, None))


def mixed_minor4(c1: np.ndarray, c2: np.ndarray, c3: np.ndarray,
                 c4: np.ndarray) -> np.ndarray:
    """Absolute 4x4 determinant of four column 4-vectors."""
    cols = np.stack(
        [np.asarray(c, dtype=float) for c in (c1, c2, c3, c4)], axis=-1
    )
    if cols.shape[-2:] != (4, 4):
        raise ValueError(f"need four 4-vectors, got stacked shape {cols.shape}")
    return np.abs(np.linalg.det(cols))


def min_triple(values: np.ndarray) -> float:
    """min over triples {i<j<k} of |F_i F_j F_k|^(1/3) for six magnitudes.

    Algebraic fact used by the broad functional: this minimum never exceeds
    (prod_m |F_m|^(1/2))^(1/3), because each index sits in exactly 10 of the
    20 triples and the minimum is at most the geometric mean.
    """
    v = np.abs(np.asarray(values, dtype=float))
    if v.shape != (6,):
        raise ValueError("expected six magnitudes")
    prods = [v[i] * v[j] * v[k] for (i, j, k) in TRIPLES]
    return float(np.min(prods) ** (1.0 / 3.0))


def broad3(values: np.ndarray, normals: np.ndarray) -> float:
    """Broad three-wave functional of six magnitudes and six unit normals.

    min over triples of |F_i F_j F_k|^(1/3) / |n_i ^ n_j ^ n_k|^(1/3); a
    triple whose wedge vanishes carries no transversality and is skipped.
    All twenty wedges zero means the configuration is degenerate.
    """
    v = np.abs(np.asarray(values, dtype=float))
    if v.shape != (6,):
        raise ValueError("expected six magnitudes")
    n = np.asarray(normals, dtype=float)
    if n.shape[0] != 6 or n.ndim != 2:
        raise ValueError("expected six normals")
    best = None
    for (i, j, k) in TRIPLES:
        w = float(wedge3_norm(n[i], n[j], n[k]))
        if w == 0.0:
            continue
        q = (v[i] * v[j] * v[k]) ** (1.0 / 3.0) / w ** (1.0 / 3.0)
        if best is None or q < best:
            best = q
    if best is None:
        raise DegenerateGeometryError("all 20 normal triples have zero wedge")
    return best
