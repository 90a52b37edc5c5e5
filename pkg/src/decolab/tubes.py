"""Parabolic tubes in the space-time cell and their overlap statistics.

A cap with on-shell center xi (|xi| ~ lam) generates the tube

    T = { (t, x) : |x - 2 t xi| <= rho, |t| <= t_half, |x| <= x_half }

inside the cell Q = {|t| <= t_half} x {|x| <= x_half}; the truncated variant
additionally removes the axial core |x| <= rho/4.  Note the proportions: the
cross-section radius rho equals twice the spatial half-width of the cell, so
tubes here are fat slabs that all meet near t = 0.  The boundary-layer
fraction below quantifies exactly that.

All volume and overlap estimates are importance-sampled Monte Carlo against
the analytic cylinder envelope, with counter-based keyed streams so results
do not depend on evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .caps import CapFamily, conflict_degrees
from .rng import keyed_rng
from .scale import ScaleParams


class ConfigError(ValueError):
    """Experiment configuration outside its supported envelope."""


class DensityError(ValueError):
    """Density precondition for a multiplicity experiment failed."""


#: exact fraction of the cell taken by the layer |t| <= lam**(-3/2)/16
BOUNDARY_LAYER_FRACTION = 0.125

MIN_SAMPLES = 1000


@dataclass(frozen=True)
class Tube:
    scale: ScaleParams
    xi: np.ndarray            # frequency center, shape (3,)
    truncated: bool = False
    cap_index: int = -1


@dataclass(frozen=True)
class MCEstimate:
    value: float
    stderr: float
    samples: int


def tube_for_cap(family: CapFamily, index: int, truncated: bool = False) -> Tube:
    return Tube(scale=family.scale, xi=family.xi()[index],
                truncated=truncated, cap_index=index)


def membership(tube: Tube, t: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Vectorized containment test; t is (...,), x is (..., 3)."""
    s = tube.scale
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    axial = x - 2.0 * t[..., np.newaxis] * tube.xi
    r_ax = np.sqrt(np.sum(axial * axial, axis=-1))
    r_x = np.sqrt(np.sum(x * x, axis=-1))
    ok = (r_ax <= s.rho) & (np.abs(t) <= s.t_half) & (r_x <= s.x_half)
    if tube.truncated:
        ok &= r_x > 0.25 * s.rho
    return ok


def cylinder_volume(scale: ScaleParams) -> float:
    """Volume of the sampling envelope: rho-ball cross-section, full height."""
    return (4.0 / 3.0) * math.pi * scale.rho ** 3 * (2.0 * scale.t_half)


def nested_ball_volume(scale: ScaleParams) -> float:
    """Closed-form volume of the static (xi = 0) full tube.

    With xi = 0 the axial constraint is |x| <= rho, which strictly contains
    the cell ball |x| <= x_half = rho/2, so the tube is ball(rho/2) times the
    full time interval: (4/3) pi (rho/2)^3 * lam**(-3/2).
    """
    return (4.0 / 3.0) * math.pi * (0.5 * scale.rho) ** 3 * (2.0 * scale.t_half)


def _ball(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform points of the unit 3-ball."""
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    u = rng.random(n) ** (1.0 / 3.0)
    return v * u[:, np.newaxis]


def sample_cylinder(tube: Tube, n: int, rng: np.random.Generator
                    ) -> tuple[np.ndarray, np.ndarray]:
    """Uniform samples of the cylinder envelope around the tube axis."""
    s = tube.scale
    t = rng.uniform(-s.t_half, s.t_half, size=n)
    x = 2.0 * t[:, np.newaxis] * tube.xi + s.rho * _ball(rng, n)
    return t, x


def _binomial_estimate(hits: int, n: int, volume: float) -> MCEstimate:
    p = hits / n
    return MCEstimate(value=p * volume,
                      stderr=math.sqrt(p * (1.0 - p) / n) * volume,
                      samples=n)


def mc_volume(tube: Tube, samples: int, seed: int) -> MCEstimate:
    """Monte Carlo tube volume via rejection against the cylinder envelope."""
    if samples < MIN_SAMPLES:
        raise ConfigError(f"need >= {MIN_SAMPLES} samples, got {samples}")
    rng = keyed_rng(seed, "tube-volume", repr(tube.scale.lam), tube.cap_index,
                    int(tube.truncated))
    t, x = sample_cylinder(tube, samples, rng)
    hits = int(np.count_nonzero(membership(tube, t, x)))
    return _binomial_estimate(hits, samples, cylinder_volume(tube.scale))


def pair_overlap_bound(scale: ScaleParams, delta: float) -> float:
    """Analytic overlap bound rho^3 * min(rho/(lam*delta), lam**(-3/2)).

    delta is the angular separation of the two caps; delta = 0 selects the
    time-truncation branch lam**(-3/2).
    """
    if delta < 0:
        raise ValueError("angular separation must be >= 0")
    time_branch = scale.lam ** (-1.5)
    if delta == 0.0:
        m = time_branch
    else:
        m = min(scale.rho / (scale.lam * delta), time_branch)
    return scale.rho ** 3 * m


def mc_pair_overlap(t1: Tube, t2: Tube, samples: int, seed: int) -> MCEstimate:
    """|T1 cap T2| estimated by sampling T1's envelope, testing both tubes."""
    if samples < MIN_SAMPLES:
        raise ConfigError(f"need >= {MIN_SAMPLES} samples, got {samples}")
    if t1.scale != t2.scale:
        raise ConfigError("tubes live at different scales")
    rng = keyed_rng(seed, "pair-overlap", repr(t1.scale.lam), t1.cap_index,
                    t2.cap_index)
    t, x = sample_cylinder(t1, samples, rng)
    both = membership(t1, t, x) & membership(t2, t, x)
    return _binomial_estimate(int(np.count_nonzero(both)), samples,
                              cylinder_volume(t1.scale))


# ---------------------------------------------------------------------------
# whole-family machinery
# ---------------------------------------------------------------------------

def multiplicity_counts(scale: ScaleParams, xis: np.ndarray, truncated: bool,
                        t: np.ndarray, x: np.ndarray,
                        chunk: int = 256) -> np.ndarray:
    """M(t, x): how many of the family's tubes contain each sample point.

    The cell and core constraints are tube-independent, so M factors into an
    in-cell indicator times a per-tube axial count, computed in chunks to
    bound memory.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    n = t.shape[0]
    r_x = np.sqrt(np.sum(x * x, axis=-1))
    cell = (np.abs(t) <= scale.t_half) & (r_x <= scale.x_half)
    if truncated:
        cell &= r_x > 0.25 * scale.rho
    counts = np.zeros(n, dtype=np.int64)
    rho2 = scale.rho ** 2
    for lo in range(0, xis.shape[0], chunk):
        block = xis[lo:lo + chunk]                      # (B, 3)
        diff = x[:, np.newaxis, :] - 2.0 * t[:, np.newaxis, np.newaxis] * block
        counts += np.count_nonzero(
            np.sum(diff * diff, axis=-1) <= rho2, axis=1
        )
    return np.where(cell, counts, 0)


def density_check(family: CapFamily, c_star: float = 0.5) -> bool:
    """Every cap must have more than c_star * D neighbours within alpha."""
    if len(family) == 0:
        raise ValueError("density check on an empty family")
    counts = conflict_degrees(family)
    return bool(np.min(counts) > c_star * family.scale.D)


@dataclass(frozen=True)
class MultiplicityResult:
    threshold: float              # c * D
    fraction_below: float         # union-measure fraction with M < threshold
    union_ratio: float            # |union T| / (D^-1 sum |T|) = D * mean(1/M)
    m_min: int
    m_max: int
    m_mean_weighted: float        # mean of M under the union measure
    samples: int


def multiplicity_experiment(family: CapFamily, samples: int, seed: int,
                            c: float = 0.5, c_star: float = 0.5,
                            truncated: bool = True) -> MultiplicityResult:
    """Multiplicity statistics over the union of the family's tubes.

    Sampling is a uniform mixture over tubes with 1/M reweighting, which
    turns tube-uniform draws into union-uniform expectations.  Requires the
    angular density precondition; families of isolated caps are rejected.
    """
    if not density_check(family, c_star):
        raise DensityError("family fails the angular density precondition")
    if samples < MIN_SAMPLES:
        raise ConfigError(f"need >= {MIN_SAMPLES} samples, got {samples}")
    xis = family.xi()
    n_caps = len(family)
    threshold = c * family.scale.D

    collected_m: list[np.ndarray] = []
    total = 0
    replicate = 0
    while total < samples:
        rng = keyed_rng(seed, "multiplicity", repr(family.scale.lam), replicate)
        batch = min(4096, samples - total) * 2
        idx = rng.integers(0, n_caps, size=batch)
        t = rng.uniform(-family.scale.t_half, family.scale.t_half, size=batch)
        x = 2.0 * t[:, np.newaxis] * xis[idx] + family.scale.rho * _ball(rng, batch)
        # accept proposals landing in their own tube
        axial = x - 2.0 * t[:, np.newaxis] * xis[idx]
        r_ax = np.sqrt(np.sum(axial * axial, axis=-1))
        r_x = np.sqrt(np.sum(x * x, axis=-1))
        ok = (r_ax <= family.scale.rho) & (r_x <= family.scale.x_half)
        if truncated:
            ok &= r_x > 0.25 * family.scale.rho
        t, x = t[ok], x[ok]
        if t.shape[0] == 0:
            replicate += 1
            continue
        m = multiplicity_counts(family.scale, xis, truncated, t, x)
        collected_m.append(m[: samples - total])
        total += collected_m[-1].shape[0]
        replicate += 1

    m = np.concatenate(collected_m).astype(float)
    w = 1.0 / m                           # union-measure weights
    wsum = float(np.sum(w))
    below = float(np.sum(w * (m < threshold)) / wsum)
    return MultiplicityResult(
        threshold=threshold,
        fraction_below=below,
        union_ratio=float(family.scale.D * np.mean(w)),
        m_min=int(m.min()),
        m_max=int(m.max()),
        m_mean_weighted=float(np.sum(w * m) / wsum),
        samples=int(m.shape[0]),
    )


@dataclass(frozen=True)
class CSCheck:
    lhs: float
    rhs: float
    multiplicity: int

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs


def pointwise_cs_check(scale: ScaleParams, xis: np.ndarray, truncated: bool,
                       amps: np.ndarray, t: float, x: np.ndarray) -> CSCheck:
    """|sum over covering tubes of a|^2 <= M * sum |a|^2 at one point.

    An instance of Cauchy-Schwarz, so the inequality is exact; the checker
    compares the two float sides without tolerance.
    """
    t_arr = np.asarray([t], dtype=float)
    x_arr = np.asarray(x, dtype=float).reshape(1, 3)
    amps = np.asarray(amps)
    r_x = float(np.linalg.norm(x_arr[0]))
    active = np.zeros(xis.shape[0], dtype=bool)
    in_cell = abs(t) <= scale.t_half and r_x <= scale.x_half
    if truncated:
        in_cell = in_cell and r_x > 0.25 * scale.rho
    if in_cell:
        diff = x_arr - 2.0 * t_arr[:, np.newaxis, np.newaxis] * xis
        active = np.sum(diff[0] * diff[0], axis=-1) <= scale.rho ** 2
    m = int(np.count_nonzero(active))
    s = complex(np.sum(amps[active]))
    lhs = abs(s) ** 2
    rhs = m * float(np.sum(np.abs(amps[active]) ** 2))
    return CSCheck(lhs=lhs, rhs=rhs, multiplicity=m)


def boundary_layer_mc(scale: ScaleParams, samples: int, seed: int) -> MCEstimate:
    """MC fraction of the cell with |t| <= lam**(-3/2)/16 and |x| <= 2 rho.

    The spatial condition is vacuous (2 rho = 4 x_half), so the exact value
    is the time fraction 1/8; the estimator still tests both conditions.
    """
    if samples < MIN_SAMPLES:
        raise ConfigError(f"need >= {MIN_SAMPLES} samples, got {samples}")
    rng = keyed_rng(seed, "boundary-layer", repr(scale.lam))
    t = rng.uniform(-scale.t_half, scale.t_half, size=samples)
    x = scale.x_half * _ball(rng, samples)
    layer = (np.abs(t) <= scale.lam ** (-1.5) / 16.0) \
        & (np.sqrt(np.sum(x * x, axis=-1)) <= 2.0 * scale.rho)
    hits = int(np.count_nonzero(layer))
    return _binomial_estimate(hits, samples, 1.0)


# ---------------------------------------------------------------------------
# overlap sum over a family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnnulusRow:
    j: int                    # dyadic index: separations in [2^j, 2^(j+1)) alpha
    delta: float              # left edge of the dyadic angular band
    pair_count: int
    sampled_pairs: int
    mean_overlap: float
    analytic_bound: float     # rho^4 / (lam * delta) at the band's left edge


@dataclass(frozen=True)
class L2SumResult:
    n_caps: int
    tube_volume: MCEstimate
    diagonal: float
    off_diagonal: float
    total: float              # S = diagonal + 2 * sum of unordered overlaps
    rows: tuple[AnnulusRow, ...]


def l2_sum(family: CapFamily, seed: int, samples_per_pair: int = 2048,
           n_anchors: int = 32, max_pairs_per_annulus: int = 48,
           truncated: bool = True) -> L2SumResult:
    """Overlap sum S = sum over ordered cap pairs of |T cap T'|.

    The diagonal uses one volume estimate (all on-shell tubes are congruent
    by rotation).  Off-diagonal pairs are grouped into dyadic angular bands;
    each band's mean overlap is estimated on a keyed-random panel of pairs
    anchored at a fixed subset of caps, then extrapolated by the exact pair
    count of the band.  Desk-scale families only.
    """
    n = len(family)
    if n < 2:
        raise ConfigError("overlap sum needs at least two caps")
    if n > 10_000:
        raise ConfigError("family too large; restrict to a local cone first")
    alpha = family.scale.alpha

    vol = mc_volume(tube_for_cap(family, 0, truncated), max(20_000, samples_per_pair),
                    seed)

    # exact pair counts per dyadic band, chunked over rows
    centers = family.centers
    jmax = max(1, int(math.ceil(math.log(math.pi / alpha, 2.0))) + 1)
    pair_counts = np.zeros(jmax + 1, dtype=np.int64)
    for lo in range(0, n, 256):
        blk = centers[lo:lo + 256]
        cosang = np.clip(blk @ centers.T, -1.0, 1.0)
        ang = np.arccos(cosang)
        # count each unordered pair once: row gi against columns > gi
        for bi in range(blk.shape[0]):
            gi = lo + bi
            row = ang[bi, gi + 1:]
            if row.size == 0:
                continue
            idx = np.floor(np.log2(np.maximum(row, 1e-300) / alpha)).astype(int)
            idx = np.clip(idx, 0, jmax)
            pair_counts += np.bincount(idx, minlength=jmax + 1)

    # panel of sampled pairs per band
    rng = keyed_rng(seed, "l2-anchors", repr(family.scale.lam))
    anchors = rng.choice(n, size=min(n, n_anchors), replace=False)
    band_pairs: dict[int, list[tuple[int, int]]] = {}
    for a in anchors:
        ang = family.angles_from(int(a))
        for j_idx in np.nonzero(ang > 0)[0]:
            band = int(np.clip(math.floor(math.log2(ang[j_idx] / alpha)), 0, jmax))
            band_pairs.setdefault(band, []).append((int(a), int(j_idx)))

    rows = []
    off_total = 0.0
    for j in range(jmax + 1):
        count = int(pair_counts[j])
        if count == 0:
            continue
        cand = band_pairs.get(j, [])
        if not cand:
            continue
        pick = keyed_rng(seed, "l2-band", repr(family.scale.lam), j)
        take = min(len(cand), max_pairs_per_annulus)
        chosen = [cand[i] for i in pick.choice(len(cand), size=take, replace=False)]
        overlaps = []
        for (i1, i2) in chosen:
            est = mc_pair_overlap(tube_for_cap(family, i1, truncated),
                                  tube_for_cap(family, i2, truncated),
                                  samples_per_pair, seed)
            overlaps.append(est.value)
        mean_ov = float(np.mean(overlaps))
        delta = (2.0 ** j) * alpha
        rows.append(AnnulusRow(
            j=j, delta=delta, pair_count=count, sampled_pairs=take,
            mean_overlap=mean_ov,
            analytic_bound=family.scale.rho ** 4 / (family.scale.lam * delta),
        ))
        off_total += mean_ov * count

    diagonal = n * vol.value
    return L2SumResult(
        n_caps=n,
        tube_volume=vol,
        diagonal=diagonal,
        off_diagonal=2.0 * off_total,
        total=diagonal + 2.0 * off_total,
        rows=tuple(rows),
    )
