"""Experiment harness: reports, the experiment registry, scale ladders.

Every experiment is a deterministic function of (lam, seed, samples) plus
explicit options, and returns an ExperimentReport.  Reports carry three
kinds of verdicts:

* PASS / FAIL for exact identities and closed-form oracles,
* OBSERVATIONAL for measured quantities compared against claimed rates.

Canonical report JSON is byte-stable: keys are sorted, floats print by
repr, and the measured wall time is nulled out (it is the one field a
re-run cannot reproduce; the human-readable text format still shows it).
"""
from __future__ import annotations

import dataclasses
import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import caps, geometry, ledger, phase, shell, tubes
from .rng import keyed_rng
from .scale import LAMBDA_EXPONENTS, ScaleParams, derive
from .tubes import ConfigError

DEFAULT_SEED = 7
DEFAULT_LAM = 256.0

#: the dyadic frequency ladder used by the rate experiments
LADDER_LAMS = tuple(float(2 ** k) for k in range(6, 13))

#: shorter ladder for the sampled-field probe, which is guarded to lam <= 64
PROBE_LAMS = (4.0, 8.0, 16.0, 32.0, 64.0)

PASS = "PASS"
FAIL = "FAIL"
OBSERVATIONAL = "OBSERVATIONAL"


class UnknownExperimentError(KeyError):
    """Requested experiment name is not in the registry."""


@dataclass(frozen=True)
class Verdict:
    name: str
    status: str
    detail: str = ""


def _ok(name: str, cond: bool, detail: str = "") -> Verdict:
    return Verdict(name, PASS if cond else FAIL, detail)


def _obs(name: str, detail: str) -> Verdict:
    return Verdict(name, OBSERVATIONAL, detail)


def _jsonify(obj):
    """Conservative conversion to JSON-serializable values."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.generic):
        return _jsonify(obj.item())
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj)!r} into a report")


@dataclass(frozen=True)
class ExperimentReport:
    experiment: str
    lam: float | None
    seed: int
    params: dict
    results: dict
    verdicts: tuple[Verdict, ...]
    wall_time_s: float | None = None

    @property
    def has_fail(self) -> bool:
        return any(v.status == FAIL for v in self.verdicts)

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "lam": self.lam,
            "seed": self.seed,
            "params": _jsonify(self.params),
            "results": _jsonify(self.results),
            "verdicts": [
                {"name": v.name, "status": v.status, "detail": v.detail}
                for v in self.verdicts
            ],
            # deliberately nulled: canonical reports are byte-reproducible
            "wall_time_s": None,
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2,
                          allow_nan=False) + "\n"

    def text(self) -> str:
        lines = [f"experiment: {self.experiment}"]
        if self.lam is not None:
            lines.append(f"lam: {self.lam:g}")
        lines.append(f"seed: {self.seed}")
        for k in sorted(self.params):
            lines.append(f"param {k}: {self.params[k]}")
        for k in sorted(self.results):
            v = self.results[k]
            if k == "rows" and isinstance(v, list):
                lines.append(f"rows: {len(v)} entries")
                continue
            lines.append(f"{k}: {_jsonify(v)}")
        for v in self.verdicts:
            detail = f"  ({v.detail})" if v.detail else ""
            lines.append(f"[{v.status}] {v.name}{detail}")
        if self.wall_time_s is not None:
            lines.append(f"wall time: {self.wall_time_s:.3f} s (not part of "
                         "the canonical report)")
        return "\n".join(lines) + "\n"

    def csv_rows(self) -> list[dict]:
        rows = self.results.get("rows")
        if not rows:
            raise ValueError(f"experiment {self.experiment} has no row table")
        return [_jsonify(r) for r in rows]

    def csv(self) -> str:
        rows = self.csv_rows()
        cols = list(rows[0].keys())
        out = [",".join(cols)]
        for r in rows:
            out.append(",".join(_csv_cell(r.get(c)) for c in cols))
        return "\n".join(out) + "\n"

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.canonical_json())

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.csv())


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


# ---------------------------------------------------------------------------
# ladder fits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LadderFit:
    slope: float
    intercept: float
    n_points: int
    max_log_residual: float


def fit_slope(lams, values) -> LadderFit:
    """Least-squares slope of log(value) against log(lam)."""
    x = np.asarray(lams, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.shape[0] < 3:
        raise ValueError("ladder fit needs >= 3 aligned points")
    if np.any(y <= 0) or np.any(x <= 0):
        raise ValueError("ladder fit needs positive scales and values")
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    resid = np.log(y) - (slope * np.log(x) + intercept)
    return LadderFit(slope=float(slope), intercept=float(intercept),
                     n_points=int(x.shape[0]),
                     max_log_residual=float(np.max(np.abs(resid))))


# ---------------------------------------------------------------------------
# shared draws
# ---------------------------------------------------------------------------

def _unit_vectors(rng: np.random.Generator, n: int, dim: int = 3) -> np.ndarray:
    v = rng.normal(size=(n, dim))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _clustered_dirs(rng: np.random.Generator, n: int, radius: float
                    ) -> np.ndarray:
    """n unit vectors within angular ``radius`` of a random axis."""
    axis = _unit_vectors(rng, 1)[0]
    out = [axis]
    for _ in range(n - 1):
        tang = rng.normal(size=3)
        tang -= axis * float(np.dot(tang, axis))
        tang /= np.linalg.norm(tang)
        ang = radius * rng.random()
        out.append(math.cos(ang) * axis + math.sin(ang) * tang)
    return np.asarray(out)


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

def _exp_scale_table(lam, seed, samples):
    s = derive(lam)
    dev_alpha = abs(s.alpha - s.c0 * lam ** -0.625) / s.alpha
    dev_height = abs(2.0 * s.t_half - lam ** -1.5) / (2.0 * s.t_half)
    dev_d = abs(s.D ** 12 - lam) / lam
    exact_xhalf = s.x_half == 0.5 * s.rho
    results = {
        "snapshot": s.snapshot(),
        "exponents": {k: str(v) for k, v in LAMBDA_EXPONENTS.items()},
        "alpha_rel_dev": dev_alpha,
        "cell_height_rel_dev": dev_height,
        "d_twelfth_power_rel_dev": dev_d,
    }
    verdicts = (
        _ok("alpha_closed_form", dev_alpha <= 1e-12, f"rel dev {dev_alpha:.2e}"),
        _ok("x_half_is_half_rho", exact_xhalf, "exact float equality"),
        _ok("cell_height", dev_height <= 1e-12, f"rel dev {dev_height:.2e}"),
        _ok("d_twelfth_power", dev_d <= 1e-12, f"rel dev {dev_d:.2e}"),
    )
    return ExperimentReport("scale-table", lam, seed, {"samples": samples},
                            results, verdicts)


def _exp_ledger_goldens(lam, seed, samples):
    rows = ledger.checkpoint_table()
    ok = all(r.match for r in rows)
    scs = ledger.scenarios()
    table = [
        {
            "name": r.name,
            "derived_lam": str(r.derived_lam),
            "derived_d": "" if r.derived_d is None else str(r.derived_d),
            "golden_lam": str(r.golden_lam),
            "golden_d": "" if r.golden_d is None else str(r.golden_d),
            "match": r.match,
        }
        for r in rows
    ]
    totals = {
        name: {
            "lam": str(ledger.sum_exponents(sc)[0]),
            "d": str(ledger.sum_exponents(sc)[1]),
            "driving": sc.driving,
        }
        for name, sc in scs.items()
    }
    n_match = sum(1 for r in rows if r.match)
    results = {
        "rows": table,
        "scenario_totals": totals,
        "n_checkpoints": len(rows),
        "n_matching": n_match,
        "epsilon_policy": ledger.EPSILON_POLICY,
    }
    verdicts = (
        _ok("all_checkpoints_match", ok, f"{n_match}/{len(rows)} rows match"),
    )
    return ExperimentReport("ledger-goldens", None, seed,
                            {"samples": samples}, results, verdicts)


def _exp_geometry_residual(lam, seed, samples):
    s = derive(lam)
    rng = keyed_rng(seed, "geometry-residual", repr(float(lam)))
    xi = lam * _unit_vectors(rng, samples)
    res = geometry.normal_residual(xi)
    u = 1.0 / (4.0 * lam * lam)
    closed = u / (math.sqrt(1.0 + u) + 1.0)   # sqrt(1+u) - 1, stable form
    spread = float((res.max() - res.min()) / closed)
    mean_ratio = float(np.mean(res) / closed)
    # the defect norm itself bottoms out at float noise ~1e-16
    tol = max(1e-6, 1e-13 / closed)
    results = {
        "mean_residual": float(np.mean(res)),
        "closed_form": closed,
        "mean_over_closed": mean_ratio,
        "spread_over_closed": spread,
        "times_eight_lam_sq": closed * 8.0 * lam * lam,
    }
    verdicts = (
        _ok("direction_independent", spread <= tol,
            f"relative spread {spread:.2e} over {samples} directions"),
        _ok("matches_closed_form", abs(mean_ratio - 1.0) <= tol,
            f"mean/closed = {mean_ratio:.12f}"),
        _obs("second_order_size",
             f"residual * 8 lam^2 = {closed * 8 * lam * lam:.8f}"),
    )
    return ExperimentReport("geometry-residual", lam, seed,
                            {"samples": samples}, results, verdicts)


def _exp_bilipschitz(lam, seed, samples):
    s = derive(lam)
    rng = keyed_rng(seed, "bilipschitz", repr(float(lam)))
    u = _unit_vectors(rng, samples)
    v = _unit_vectors(rng, samples)
    fixed = geometry.bilipschitz_ratio(lam * u, lam * v)
    violations = int(np.count_nonzero((fixed < 0.5) | (fixed > 2.0)))
    # same directions at independent shell radii: reported, not gated
    r1 = rng.uniform(0.5 * lam, 2.0 * lam, size=samples)
    r2 = rng.uniform(0.5 * lam, 2.0 * lam, size=samples)
    band = geometry.bilipschitz_ratio(r1[:, None] * u, r2[:, None] * v)
    results = {
        "min_ratio_fixed": float(np.min(fixed)),
        "max_ratio_fixed": float(np.max(fixed)),
        "violations_fixed": violations,
        "min_ratio_band": float(np.min(band)),
        "max_ratio_band": float(np.max(band)),
    }
    verdicts = (
        _ok("fixed_radius_in_band", violations == 0,
            f"{violations} of {samples} ratios outside [1/2, 2]"),
        _obs("free_radius_range",
             f"[{results['min_ratio_band']:.3f}, "
             f"{results['max_ratio_band']:.3f}] over the shell annulus"),
    )
    return ExperimentReport("bilipschitz", lam, seed, {"samples": samples},
                            results, verdicts)


def _exp_gram_identity(lam, seed, samples):
    s = derive(lam)
    rng = keyed_rng(seed, "gram-identity", repr(float(lam)))
    # generic unit 4-vectors
    v = rng.normal(size=(samples, 3, 4))
    v /= np.linalg.norm(v, axis=-1, keepdims=True)
    closed = geometry.gram_det3(v[:, 0], v[:, 1], v[:, 2])
    brute = np.linalg.det(v @ np.transpose(v, (0, 2, 1)))
    diff_generic = float(np.max(np.abs(closed - brute)))
    # nearly parallel normals of r-clustered frequencies (tiny wedges)
    base = _unit_vectors(rng, samples)
    tri = []
    for _ in range(3):
        d = base + s.r * rng.normal(size=(samples, 3))
        tri.append(geometry.normal(lam * d / np.linalg.norm(d, axis=-1,
                                                            keepdims=True)))
    n = np.stack(tri, axis=1)
    closed_c = geometry.gram_det3(n[:, 0], n[:, 1], n[:, 2])
    brute_c = np.linalg.det(n @ np.transpose(n, (0, 2, 1)))
    diff_clustered = float(np.max(np.abs(closed_c - brute_c)))
    worst = max(diff_generic, diff_clustered)
    results = {
        "max_abs_diff_generic": diff_generic,
        "max_abs_diff_clustered": diff_clustered,
        "min_gram_clustered": float(np.min(closed_c)),
    }
    verdicts = (
        _ok("cosine_form_equals_det", worst <= 1e-12,
            f"worst abs diff {worst:.2e} over {2 * samples} triples"),
    )
    return ExperimentReport("gram-identity", lam, seed, {"samples": samples},
                            results, verdicts)


_TRIPLE_IDX = np.asarray(geometry.TRIPLES)


def _exp_broad3_identity(lam, seed, samples):
    s = derive(lam)
    rng = keyed_rng(seed, "broad3-identity", repr(float(lam)))
    mags = np.exp(rng.normal(size=(samples, 6)))
    prods = (mags[:, _TRIPLE_IDX[:, 0]]
             * mags[:, _TRIPLE_IDX[:, 1]]
             * mags[:, _TRIPLE_IDX[:, 2]])
    mt = np.min(prods, axis=1) ** (1.0 / 3.0)
    geo = np.prod(mags, axis=1) ** (1.0 / 6.0)
    ok_rows = mt <= geo * (1.0 + 1e-12)
    margin = float(np.min(geo / mt))
    # consistency of the scalar helper against the vectorized path
    check = min(200, samples)
    helper_dev = max(
        abs(geometry.min_triple(mags[i]) - float(mt[i])) for i in range(check)
    )
    # the functional stays finite and positive on random normal sextuples
    dirs = rng.normal(size=(check, 6, 4))
    dirs /= np.linalg.norm(dirs, axis=-1, keepdims=True)
    vals = [geometry.broad3(mags[i], dirs[i]) for i in range(check)]
    finite = all(math.isfinite(v) and v > 0 for v in vals)
    results = {
        "min_margin": margin,
        "helper_max_dev": float(helper_dev),
        "n_functional_checks": check,
        "functional_min": float(min(vals)),
        "functional_max": float(max(vals)),
    }
    verdicts = (
        _ok("min_triple_leq_geometric_mean", bool(np.all(ok_rows)),
            f"min margin {margin:.6f} over {samples} draws"),
        _ok("helper_matches_vectorized", helper_dev <= 1e-12,
            f"max dev {helper_dev:.2e}"),
        _ok("functional_finite_positive", finite,
            f"{check} sextuples evaluated"),
    )
    return ExperimentReport("broad3-identity", lam, seed,
                            {"samples": samples}, results, verdicts)


def _exp_mixed_minor(lam, seed, samples):
    s = derive(lam)
    rng = keyed_rng(seed, "mixed-minor", repr(float(lam)))
    base = _unit_vectors(rng, samples)
    dirs = []
    for _ in range(4):
        d = base + s.r * rng.normal(size=(samples, 3))
        dirs.append(d / np.linalg.norm(d, axis=-1, keepdims=True))
    a1, a2, a3 = (geometry.asymptotic_normal(lam * d) for d in dirs[:3])
    xi4 = lam * dirs[3]
    rho4 = geometry.normal_defect(xi4)
    det = geometry.mixed_minor4(a1, a2, a3, rho4)
    # wedge via the brute Gram determinant: the cosine closed form assumes
    # unit columns, and these carry norm sqrt(1 + 1/(4 lam^2))
    stacked = np.stack([a1, a2, a3], axis=1)
    gram = stacked @ np.transpose(stacked, (0, 2, 1))
    wedge = np.sqrt(np.clip(np.linalg.det(gram), 0.0, None))
    rho_norm = np.linalg.norm(rho4, axis=-1)
    bound = wedge * rho_norm
    hadamard = bool(np.all(det <= bound * (1.0 + 1e-6) + 1e-18))
    # the defect points exactly against the large-frequency limit vector
    a4 = geometry.asymptotic_normal(xi4)
    anti = math.pi - geometry.angle_between(rho4, a4)
    max_anti = float(np.max(np.abs(anti)))
    ratio = float(np.max((det + 1e-18) / (bound + 1e-18)))
    results = {
        "max_abs_det": float(np.max(det)),
        "mean_abs_det": float(np.mean(det)),
        "max_det_over_bound": ratio,
        "max_antiparallel_dev": max_anti,
        "det_times_lam_10_3": float(np.max(det) * lam ** (10.0 / 3.0)),
    }
    verdicts = (
        _ok("hadamard_inequality", hadamard,
            f"max det/bound = {ratio:.6f}"),
        _ok("defect_antiparallel_to_limit", max_anti <= 1e-6,
            f"max deviation from pi: {max_anti:.2e} rad"),
        _obs("clustered_minor_size",
             f"max |det| * lam^(10/3) = "
             f"{results['det_times_lam_10_3']:.3e}"),
    )
    return ExperimentReport("mixed-minor", lam, seed, {"samples": samples},
                            results, verdicts)


def _exp_cap_lattice(lam, seed, samples):
    s = derive(lam)
    fam = caps.build_lattice(s)
    n = len(fam)
    sep = caps.min_separation(fam)
    rng = keyed_rng(seed, "cap-lattice-probes", repr(float(lam)))
    probes = _unit_vectors(rng, samples)
    cov = caps.covering_probe(fam, probes)
    lo, hi = lam ** (4.0 / 3.0), 16.0 * lam ** (4.0 / 3.0)
    results = {
        "n_caps": n,
        "min_separation": sep,
        "separation_over_r": sep / s.r,
        "covering_radius_probe": cov,
        "covering_over_r": cov / s.r,
        "count_window": [lo, hi],
    }
    verdicts = (
        _ok("pairwise_separated", sep >= s.r,
            f"min angle / r = {sep / s.r:.4f}"),
        _ok("covering_within_2r", cov <= 2.0 * s.r,
            f"probed covering / r = {cov / s.r:.4f} ({samples} probes)"),
        _ok("count_in_window", lo <= n <= hi,
            f"{n} caps vs [{lo:.0f}, {hi:.0f}]"),
    )
    return ExperimentReport("cap-lattice", lam, seed, {"samples": samples},
                            results, verdicts)


def _exp_annulus_partition(lam, seed, samples):
    s = derive(lam)
    fam = caps.build_lattice(s)
    n = len(fam)
    rng = keyed_rng(seed, "annulus-partition", repr(float(lam)))
    indices = sorted({0, int(rng.integers(n))})
    partition_ok = True
    spot_ok = True
    heads = {}
    for idx in indices:
        hist = caps.ring_histogram(fam, idx)
        partition_ok &= int(hist.sum()) == n - 1
        for k in range(1, min(4, hist.shape[0])):
            spot_ok &= caps.annulus_count(fam, idx, k) == int(hist[k])
        heads[str(idx)] = [int(v) for v in hist[:16]]
    results = {
        "n_caps": n,
        "center_indices": indices,
        "histogram_heads": heads,
    }
    verdicts = (
        _ok("rings_partition_family", partition_ok,
            f"histogram sums equal n-1 = {n - 1}"),
        _ok("ring_counts_agree", spot_ok, "bincount vs direct ring count"),
    )
    return ExperimentReport("annulus-partition", lam, seed,
                            {"samples": samples}, results, verdicts)


def _exp_greedy_coloring(lam, seed, samples):
    s = derive(lam)
    rng = keyed_rng(seed, "greedy-coloring", repr(float(lam)))
    # a synthetic sub-alpha cluster: the lattice itself is r-separated with
    # r >> alpha, so its conflict graph is empty and proves nothing
    dirs = _clustered_dirs(rng, samples, 3.0 * s.alpha)
    fam = caps.CapFamily(scale=s, centers=dirs)
    colored = caps.greedy_color(fam)
    pairs = caps.conflict_pairs(fam)
    deg = caps.conflict_degrees(fam)
    proper = all(
        int(colored.colors[i]) != int(colored.colors[j]) for i, j in pairs
    )
    max_deg = int(deg.max(initial=0))
    results = {
        "n_dirs": len(fam),
        "n_conflict_pairs": int(pairs.shape[0]),
        "max_degree": max_deg,
        "n_colors": colored.n_colors,
    }
    verdicts = (
        _ok("proper_coloring", proper,
            f"{pairs.shape[0]} conflict edges checked"),
        _ok("first_fit_bound", colored.n_colors <= max_deg + 1,
            f"{colored.n_colors} colors vs degree bound {max_deg + 1}"),
        _ok("nontrivial_graph", pairs.shape[0] > 0,
            "cluster produced conflict edges"),
    )
    return ExperimentReport("greedy-coloring", lam, seed,
                            {"samples": samples}, results, verdicts)


def _exp_select_four(lam, seed, samples):
    s = derive(lam)
    rows = []
    ok_recheck = True
    generic_found = 0
    cluster_blocked = 0
    for kind in ("generic", "clustered5"):
        for rep in range(samples):
            sx = phase.sample_sextuple(s, seed, rep, kind)
            res = caps.select_separated(sx.directions(), s.alpha)
            if res.subset is not None:
                d = sx.directions()
                for i in res.subset:
                    for j in res.subset:
                        if i < j:
                            ang = float(geometry.angle_between(d[i], d[j]))
                            ok_recheck &= ang >= s.alpha
                if kind == "generic":
                    generic_found += 1
            elif kind == "clustered5":
                cluster_blocked += 1
            rows.append({
                "kind": kind,
                "replicate": rep,
                "found": res.subset is not None,
                "subset": "" if res.subset is None
                else "-".join(map(str, res.subset)),
                "dense_pairs": res.dense_pairs,
            })
    results = {
        "rows": rows,
        "generic_found": generic_found,
        "cluster_blocked": cluster_blocked,
        "n_per_kind": samples,
    }
    verdicts = (
        _ok("selected_subsets_separated", ok_recheck,
            "all returned 4-subsets re-verified pairwise >= alpha"),
        _ok("generic_always_selectable", generic_found == samples,
            f"{generic_found}/{samples} generic draws"),
        _ok("five_cluster_blocks_selection", cluster_blocked == samples,
            f"{cluster_blocked}/{samples} clustered draws blocked"),
    )
    return ExperimentReport("select-four", lam, seed, {"samples": samples},
                            results, verdicts)


def _exp_tube_volume(lam, seed, samples):
    s = derive(lam)
    fam = caps.build_lattice(s)
    tube = tubes.tube_for_cap(fam, 0)
    est = tubes.mc_volume(tube, samples, seed)
    est_tr = tubes.mc_volume(tubes.tube_for_cap(fam, 0, truncated=True),
                             samples, seed)
    env = tubes.cylinder_volume(s)
    results = {
        "volume": est.value,
        "stderr": est.stderr,
        "volume_truncated": est_tr.value,
        "stderr_truncated": est_tr.stderr,
        "envelope_volume": env,
        "hit_fraction": est.value / env,
        "volume_times_lam3": est.value * lam ** 3,
    }
    verdicts = (
        _ok("inside_envelope", 0.0 < est.value <= env,
            f"hit fraction {est.value / env:.4f}"),
        _ok("truncation_shrinks", est_tr.value <= est.value + 3.0 *
            math.hypot(est.stderr, est_tr.stderr),
            "core removal cannot grow the volume"),
        _obs("normalized_volume",
             f"volume * lam^3 = {est.value * lam ** 3:.4f}"),
    )
    return ExperimentReport("tube-volume", lam, seed, {"samples": samples},
                            results, verdicts)


def _exp_nested_ball(lam, seed, samples):
    s = derive(lam)
    tube = tubes.Tube(scale=s, xi=np.zeros(3))
    est = tubes.mc_volume(tube, samples, seed)
    exact = tubes.nested_ball_volume(s)
    z = (est.value - exact) / est.stderr if est.stderr > 0 else math.inf
    results = {
        "estimate": est.value,
        "stderr": est.stderr,
        "exact": exact,
        "z_score": z,
        "expected_hit_fraction": 0.125,
    }
    verdicts = (
        _ok("matches_closed_form", abs(z) <= 3.0, f"z = {z:.3f}"),
    )
    return ExperimentReport("nested-ball", lam, seed, {"samples": samples},
                            results, verdicts)


def _exp_boundary_layer(lam, seed, samples):
    s = derive(lam)
    est = tubes.boundary_layer_mc(s, samples, seed)
    exact = tubes.BOUNDARY_LAYER_FRACTION
    z = (est.value - exact) / est.stderr if est.stderr > 0 else math.inf
    results = {
        "estimate": est.value,
        "stderr": est.stderr,
        "exact": exact,
        "z_score": z,
    }
    verdicts = (
        _ok("matches_exact_fraction", abs(z) <= 3.0, f"z = {z:.3f}"),
    )
    return ExperimentReport("boundary-layer", lam, seed, {"samples": samples},
                            results, verdicts)


def _exp_pair_overlap(lam, seed, samples):
    s = derive(lam)
    fam = caps.build_lattice(s)
    ang = fam.angles_from(0)
    ang[0] = math.inf                      # exclude the anchor itself
    rows = []
    all_within = True
    target = s.r
    while target < 2.0:
        j = int(np.argmin(np.abs(ang - min(target, math.pi * 0.9))))
        delta = float(ang[j])
        est = tubes.mc_pair_overlap(tubes.tube_for_cap(fam, 0),
                                    tubes.tube_for_cap(fam, j),
                                    samples, seed)
        bound = tubes.pair_overlap_bound(s, delta)
        within = est.value <= bound + 3.0 * est.stderr
        all_within &= within
        rows.append({
            "lam": lam,
            "pair": f"0-{j}",
            "delta": delta,
            "estimate": est.value,
            "stderr": est.stderr,
            "bound": bound,
            "ratio": est.value / bound,
        })
        target *= 8.0
    b_delta = tubes.pair_overlap_bound(s, 1.0)
    b_time = s.rho ** 3 * s.lam ** -1.5
    branch_dev = abs(b_delta - b_time) / b_time
    results = {
        "rows": rows,
        "branch_dev_at_delta_1": branch_dev,
        "n_pairs": len(rows),
    }
    verdicts = (
        _ok("estimates_below_bound", all_within,
            f"{len(rows)} separations, all within 3 sigma of the bound"),
        _ok("branch_continuity", branch_dev <= 1e-12,
            f"relative branch gap at delta=1: {branch_dev:.2e}"),
    )
    return ExperimentReport("pair-overlap", lam, seed, {"samples": samples},
                            results, verdicts)


def _exp_l2_sum(lam, seed, samples):
    s = derive(lam)
    fam = caps.build_lattice(s)
    if len(fam) > 8000:
        theta = 2.0 * math.sqrt(2000.0 / len(fam))
        fam = fam.restrict_to_cone(fam.centers[0], theta)
    res = tubes.l2_sum(fam, seed, samples_per_pair=samples)
    rows = [
        {
            "lam": lam,
            "pair": f"band-{r.j}",
            "delta": r.delta,
            "estimate": r.mean_overlap,
            "stderr": "",
            "bound": r.analytic_bound,
            "ratio": (r.mean_overlap / r.analytic_bound
                      if r.analytic_bound > 0 else math.inf),
            "pair_count": r.pair_count,
            "sampled_pairs": r.sampled_pairs,
        }
        for r in res.rows
    ]
    results = {
        "rows": rows,
        "n_caps": res.n_caps,
        "diagonal": res.diagonal,
        "off_diagonal": res.off_diagonal,
        "total": res.total,
        "off_over_diagonal": res.off_diagonal / res.diagonal,
        "tube_volume": res.tube_volume.value,
    }
    verdicts = (
        _ok("total_dominates_diagonal", res.total >= res.diagonal > 0.0,
            f"off/diag = {res.off_diagonal / res.diagonal:.4f}"),
        _obs("overlap_sum",
             f"S = {res.total:.6e} over {res.n_caps} caps"),
    )
    return ExperimentReport("l2-sum", lam, seed, {"samples": samples},
                            results, verdicts)


def _exp_multiplicity(lam, seed, samples):
    s = derive(lam)
    rng = keyed_rng(seed, "multiplicity-family", repr(float(lam)))
    n_caps = 24
    dirs = _clustered_dirs(rng, n_caps, 0.5 * s.alpha)
    fam = caps.CapFamily(scale=s, centers=dirs)
    res = tubes.multiplicity_experiment(fam, samples, seed)
    # fat-tube fact: at t = 0 every tube of the family contains the whole
    # admissible x-ball, so the multiplicity there is the full family size
    x0 = np.asarray([0.35 * s.rho, 0.0, 0.0])
    m_center = int(tubes.multiplicity_counts(
        s, fam.xi(), True, np.asarray([0.0]), x0[np.newaxis, :])[0])
    amps = rng.normal(size=n_caps) + 1j * rng.normal(size=n_caps)
    cs = tubes.pointwise_cs_check(s, fam.xi(), True, amps, 0.0, x0)
    results = {
        "n_caps": n_caps,
        "threshold": res.threshold,
        "fraction_below": res.fraction_below,
        "union_ratio": res.union_ratio,
        "m_min": res.m_min,
        "m_max": res.m_max,
        "m_mean_weighted": res.m_mean_weighted,
        "m_at_center": m_center,
        "cs_lhs": cs.lhs,
        "cs_rhs": cs.rhs,
        "cs_multiplicity": cs.multiplicity,
    }
    verdicts = (
        _ok("center_multiplicity_full", m_center == n_caps,
            f"M(0, x0) = {m_center} of {n_caps}"),
        _ok("pointwise_cauchy_schwarz", cs.ok,
            f"lhs {cs.lhs:.6e} <= rhs {cs.rhs:.6e}"),
        _obs("sub_threshold_mass",
             f"fraction with M < {res.threshold:.3f}: {res.fraction_below}"),
        _obs("union_ratio", f"D * mean(1/M) = {res.union_ratio:.6f}"),
    )
    return ExperimentReport("multiplicity", lam, seed, {"samples": samples},
                            results, verdicts)


def _exp_phase_coverage(lam, seed, samples):
    s = derive(lam)
    rng = keyed_rng(seed, "phase-family", repr(float(lam)))
    dense_fam = caps.CapFamily(scale=s,
                               centers=_clustered_dirs(rng, 16, 0.5 * s.alpha))
    rows = []
    paired_exact = True
    cluster_narrow = True
    robust_seen = True
    for kind in ("generic", "paired", "perturbed", "clustered5"):
        for rep in range(samples):
            sx = phase.sample_sextuple(s, seed, rep, kind)
            m6 = phase.mu6(sx)
            basket = phase.classify_basket(sx)
            tp = phase.tp_dichotomy(sx)
            rn = phase.rn_classify(sx, None)
            if kind == "paired":
                g = phase.grad_xprime(sx)
                paired_exact &= (m6 == 0.0 and float(g[0]) == 0.0
                                 and float(g[1]) == 0.0
                                 and tp.label == "paired")
            if kind == "clustered5":
                cluster_narrow &= rn.label == "narrow"
            rows.append({
                "seed": seed,
                "kind": kind,
                "replicate": rep,
                "mu6": m6,
                "basket": basket,
                "label": tp.label,
                "witness": "" if tp.witness is None
                else "-".join(map(str, tp.witness)),
                "rn_label": rn.label,
                "cluster_sizes": "/".join(map(str, rn.cluster_sizes)),
            })
    # a dense family flips the first branch of the dichotomy
    sx = phase.sample_sextuple(s, seed, 0, "generic")
    rn_dense = phase.rn_classify(sx, dense_fam)
    robust_seen = rn_dense.label == "robust"
    label_counts: dict[str, int] = {}
    for r in rows:
        key = f"{r['kind']}:{r['label']}"
        label_counts[key] = label_counts.get(key, 0) + 1
    results = {
        "rows": rows,
        "label_counts": label_counts,
        "dense_family_max_count": rn_dense.max_alpha_count,
    }
    verdicts = (
        _ok("paired_draws_exact", paired_exact,
            "mu6 == 0.0, grad == 0, label 'paired' on every paired draw"),
        _ok("five_cluster_is_narrow", cluster_narrow,
            f"{samples} clustered draws"),
        _ok("dense_family_is_robust", robust_seen,
            f"max alpha-cap count {rn_dense.max_alpha_count} "
            f"> {rn_dense.density_threshold:.3f}"),
    )
    return ExperimentReport("phase-coverage", lam, seed, {"samples": samples},
                            results, verdicts)


def _exp_paired_identities(lam, seed, samples):
    s = derive(lam)
    rng = keyed_rng(seed, "paired-identities", repr(float(lam)))
    exact_zero = True
    perm_invariant = True
    for rep in range(samples):
        sx = phase.sample_sextuple(s, seed, rep, "paired")
        exact_zero &= phase.mu6(sx) == 0.0
        g = phase.grad_xprime(sx)
        exact_zero &= float(g[0]) == 0.0 and float(g[1]) == 0.0
        gen = phase.sample_sextuple(s, seed, rep, "generic")
        base = phase.mu6(gen)
        p1 = rng.permutation(3)
        p2 = rng.permutation(3) + 3
        shuffled = np.vstack([gen.xi[p1], gen.xi[p2]])
        perm_invariant &= phase.mu6(
            phase.Sextuple(scale=s, xi=shuffled)) == base
        swapped = np.vstack([gen.xi[3:], gen.xi[:3]])
        perm_invariant &= phase.mu6(
            phase.Sextuple(scale=s, xi=swapped)) == base
    results = {
        "n_paired": samples,
        "n_permutation_checks": 2 * samples,
    }
    verdicts = (
        _ok("paired_sums_vanish", exact_zero,
            f"mu6 and both gradient components exactly 0.0, {samples} draws"),
        _ok("mu6_permutation_invariant", perm_invariant,
            "within-block shuffles and block swap leave mu6 bit-identical"),
    )
    return ExperimentReport("paired-identities", lam, seed,
                            {"samples": samples}, results, verdicts)


def _exp_anisotropic_roundtrip(lam, seed, samples):
    s = derive(lam)
    rng = keyed_rng(seed, "anisotropic", repr(float(lam)))
    pts = rng.uniform(-0.5, 0.5, size=(samples, 4))
    back = shell.anisotropic_inverse(s, shell.anisotropic_forward(s, pts))
    dev = float(np.max(np.abs(back - pts) / (1.0 + np.abs(pts))))
    jac = shell.jacobian(s)
    jac_prod = lam ** 1.5 * (lam ** 0.5) ** 3
    jac_dev = abs(jac - jac_prod) / jac
    results = {
        "max_roundtrip_dev": dev,
        "jacobian": jac,
        "jacobian_rel_dev": jac_dev,
    }
    verdicts = (
        _ok("roundtrip_identity", dev <= 1e-12, f"max rel dev {dev:.2e}"),
        _ok("jacobian_consistent", jac_dev <= 1e-12,
            f"lam^3 vs factor product: rel dev {jac_dev:.2e}"),
    )
    return ExperimentReport("anisotropic-roundtrip", lam, seed,
                            {"samples": samples}, results, verdicts)


def _exp_hyperplane_shell(lam, seed, samples):
    s = derive(lam)
    rows = []
    all_ok = True
    for tau in (0.0, 0.3, 0.45):
        poly = shell.hyperplane_poly(tau)
        bf = shell.band_fraction(s, poly, samples, seed, tag=f"hyper-{tau}")
        exact = shell.hyperplane_fraction_exact(bf.beta, tau)
        z = (bf.fraction - exact) / bf.stderr if bf.stderr > 0 else math.inf
        all_ok &= abs(z) <= 3.0
        rows.append({
            "lam": lam,
            "D": s.D,
            "degree": 1,
            "beta": bf.beta,
            "fraction": bf.fraction,
            "stderr": bf.stderr,
            "fraction_times_D": bf.fraction * s.D,
            "tau": tau,
            "exact": exact,
            "z": z,
        })
    results = {"rows": rows}
    verdicts = (
        _ok("matches_exact_fraction", all_ok,
            f"{len(rows)} offsets, all within 3 sigma of min(1, 2 beta)"),
    )
    return ExperimentReport("hyperplane-shell", lam, seed,
                            {"samples": samples}, results, verdicts)


def _exp_shell_ensemble(lam, seed, samples):
    s = derive(lam)
    rows = []
    sane = True
    for degree in range(1, shell.max_degree(s) + 1):
        for bf in shell.ensemble_fractions(s, degree, 6, samples, seed):
            sane &= 0.0 <= bf.fraction <= 1.0
            rows.append({
                "lam": lam,
                "D": s.D,
                "degree": degree,
                "beta": bf.beta,
                "fraction": bf.fraction,
                "stderr": bf.stderr,
                "fraction_times_D": bf.fraction * s.D,
            })
    mean_by_deg = {}
    for degree in range(1, shell.max_degree(s) + 1):
        vals = [r["fraction"] for r in rows if r["degree"] == degree]
        mean_by_deg[str(degree)] = float(np.mean(vals))
    results = {
        "rows": rows,
        "degree_cap": shell.max_degree(s),
        "mean_fraction_by_degree": mean_by_deg,
    }
    verdicts = (
        _ok("fractions_in_range", sane, f"{len(rows)} ensemble members"),
        _obs("band_occupancy",
             f"mean fraction by degree: {mean_by_deg}"),
    )
    return ExperimentReport("shell-ensemble", lam, seed,
                            {"samples": samples}, results, verdicts)


# ---------------------------------------------------------------------------
# the desk decoupling probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeResult:
    lam: float
    n_caps: int
    grid_per_axis: int
    t_points: int
    n_points: int
    ratio_random: float
    ratio_focusing: float


def decoupling_probe(scale: ScaleParams, seed: int, grid_factor: int = 6,
                     t_points: int = 8,
                     family: caps.CapFamily | None = None) -> ProbeResult:
    """Sampled L6 size of a random superposition of on-shell waves.

    The field is F(t, x) = sum over caps of a_n exp(i(t |xi_n|^2 + x.xi_n)),
    sampled on a midpoint grid over the unit spatial box (ball-masked) times
    a short time window.  The reference is the flat count (sum |a_n|^2)^1/2,
    exact for a single cap since each summand has constant modulus.  Guarded
    to lam <= 64: the grid and matrix sizes grow quickly beyond that.
    """
    if scale.lam > 64:
        raise ConfigError("probe supports lam <= 64 only")
    if grid_factor < 4:
        raise ConfigError("grid factor below 4 undersamples the field")
    if family is None:
        family = caps.build_lattice(scale)
    xis = family.xi()
    n = len(family)
    rng = keyed_rng(seed, "probe", repr(float(scale.lam)), n)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=n)

    n_axis = max(4, int(round(grid_factor * math.sqrt(scale.lam))))
    ax = (np.arange(n_axis) + 0.5) / n_axis - 0.5
    t_ax = ((np.arange(t_points) + 0.5) / t_points - 0.5) / scale.lam
    mods2 = np.sum(xis * xis, axis=-1)

    # tensor split: (t, x1) against (x2, x3), joined by one matmul per panel
    ph1 = (t_ax[:, np.newaxis, np.newaxis] * mods2
           + ax[np.newaxis, :, np.newaxis] * xis[:, 0])
    ph2 = (ax[:, np.newaxis, np.newaxis] * xis[:, 1]
           + ax[np.newaxis, :, np.newaxis] * xis[:, 2])
    m2 = np.exp(1j * ph2).reshape(-1, n).T                # (n, nx^2)

    # spatial ball mask |x| <= 1/2, flattened in (x1, x2, x3) order
    r2 = (ax[:, None, None] ** 2 + ax[None, :, None] ** 2
          + ax[None, None, :] ** 2)
    mask = (r2 <= 0.25).reshape(n_axis, -1)               # (nx, nx^2)

    ratios = {}
    for tag, amps in (("random", np.exp(1j * phases)),
                      ("focusing", np.ones(n, dtype=complex))):
        m1 = (np.exp(1j * ph1) * amps).reshape(-1, n)     # (nt*nx, n)
        field = m1 @ m2                                   # (nt*nx, nx^2)
        p6 = (field.real ** 2 + field.imag ** 2) ** 3
        p6 = p6.reshape(t_points, n_axis, -1)
        masked_mean = float(np.mean(p6[:, mask]))
        ratios[tag] = masked_mean ** (1.0 / 6.0) / math.sqrt(n)
    n_points = t_points * int(np.count_nonzero(mask))
    return ProbeResult(lam=scale.lam, n_caps=n, grid_per_axis=n_axis,
                       t_points=t_points, n_points=n_points,
                       ratio_random=ratios["random"],
                       ratio_focusing=ratios["focusing"])


def _exp_probe_single_cap(lam, seed, samples, grid_factor=6):
    s = derive(lam)
    one = caps.CapFamily(scale=s, centers=np.asarray([[0.0, 0.0, 1.0]]))
    res = decoupling_probe(s, seed, grid_factor=grid_factor, family=one)
    dev = max(abs(res.ratio_random - 1.0), abs(res.ratio_focusing - 1.0))
    results = {
        "ratio_random": res.ratio_random,
        "ratio_focusing": res.ratio_focusing,
        "max_dev_from_one": dev,
        "n_points": res.n_points,
    }
    verdicts = (
        _ok("single_cap_ratio_is_one", dev <= 1e-13,
            f"max |ratio - 1| = {dev:.2e}"),
    )
    return ExperimentReport("probe-single-cap", lam, seed,
                            {"samples": samples, "grid_factor": grid_factor},
                            results, verdicts)


def _exp_probe_curve(lam, seed, samples, grid_factor=6):
    s = derive(lam)
    res = decoupling_probe(s, seed, grid_factor=grid_factor)
    d_half = s.D ** 0.5
    results = {
        "n_caps": res.n_caps,
        "grid_per_axis": res.grid_per_axis,
        "n_points": res.n_points,
        "ratio_random": res.ratio_random,
        "ratio_focusing": res.ratio_focusing,
        "ratio_random_over_sqrt_d": res.ratio_random / d_half,
        "ratio_focusing_over_sqrt_d": res.ratio_focusing / d_half,
    }
    verdicts = (
        _obs("random_phase_ratio",
             f"{res.ratio_random:.4f} over {res.n_caps} caps"),
        _obs("focusing_ratio",
             f"{res.ratio_focusing:.4f}; / sqrt(D) = "
             f"{res.ratio_focusing / d_half:.4f}"),
    )
    return ExperimentReport("probe-curve", lam, seed,
                            {"samples": samples, "grid_factor": grid_factor},
                            results, verdicts)


# ---------------------------------------------------------------------------
# registry and runners
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Experiment:
    name: str
    fn: Callable
    needs_lam: bool
    default_lam: float
    default_samples: int
    ladder_metric: str | None
    ladder_lams: tuple[float, ...]
    summary: str


REGISTRY: dict[str, Experiment] = {}


def _register(name, fn, default_samples, summary, needs_lam=True,
              default_lam=DEFAULT_LAM, ladder_metric=None,
              ladder_lams=LADDER_LAMS):
    REGISTRY[name] = Experiment(name=name, fn=fn, needs_lam=needs_lam,
                                default_lam=default_lam,
                                default_samples=default_samples,
                                ladder_metric=ladder_metric,
                                ladder_lams=tuple(ladder_lams),
                                summary=summary)


_register("scale-table", _exp_scale_table, 0,
          "derived lengths against their closed forms")
_register("ledger-goldens", _exp_ledger_goldens, 0,
          "re-derive every exponent checkpoint", needs_lam=False)
_register("geometry-residual", _exp_geometry_residual, 20_000,
          "normal vs its large-frequency limit",
          ladder_metric="mean_residual")
_register("bilipschitz", _exp_bilipschitz, 100_000,
          "normal-map angle distortion on the sphere of one radius",
          ladder_metric="max_ratio_fixed")
_register("gram-identity", _exp_gram_identity, 50_000,
          "cosine-form Gram determinant vs brute determinant")
_register("broad3-identity", _exp_broad3_identity, 50_000,
          "geometric-mean bound for the minimal amplitude triple")
_register("mixed-minor", _exp_mixed_minor, 20_000,
          "clustered 4-column minors with one defect column",
          ladder_metric="max_abs_det")
_register("cap-lattice", _exp_cap_lattice, 20_000,
          "separated cap family: separation, covering, count",
          ladder_metric="n_caps")
_register("annulus-partition", _exp_annulus_partition, 0,
          "thin angular rings partition the family")
_register("greedy-coloring", _exp_greedy_coloring, 64,
          "first-fit coloring of a sub-alpha cluster")
_register("select-four", _exp_select_four, 200,
          "four separated directions out of six")
_register("tube-volume", _exp_tube_volume, 200_000,
          "Monte Carlo tube volume in the cell",
          ladder_metric="volume")
_register("nested-ball", _exp_nested_ball, 200_000,
          "static tube against its closed-form volume")
_register("boundary-layer", _exp_boundary_layer, 200_000,
          "exact 1/8 time-layer fraction of the cell")
_register("pair-overlap", _exp_pair_overlap, 100_000,
          "pairwise tube overlap against the analytic bound")
_register("l2-sum", _exp_l2_sum, 2_048,
          "overlap sum over a family, dyadic bands")
_register("multiplicity", _exp_multiplicity, 20_000,
          "covering multiplicity over a dense family's union")
_register("phase-coverage", _exp_phase_coverage, 100,
          "sextuple classifications across sampler kinds")
_register("paired-identities", _exp_paired_identities, 2_000,
          "exact vanishing and permutation invariance of the block sums")
_register("anisotropic-roundtrip", _exp_anisotropic_roundtrip, 50_000,
          "box-to-frequency scaling roundtrip and Jacobian")
_register("hyperplane-shell", _exp_hyperplane_shell, 200_000,
          "band of a hyperplane against the exact fraction")
_register("shell-ensemble", _exp_shell_ensemble, 40_000,
          "band fractions for random low-degree polynomials")
_register("probe-single-cap", _exp_probe_single_cap, 0,
          "one-cap sanity: sampled L6 ratio is exactly one",
          default_lam=64.0)
_register("probe-curve", _exp_probe_curve, 0,
          "sampled L6 ratio of a full superposition",
          default_lam=64.0, ladder_metric="ratio_random",
          ladder_lams=PROBE_LAMS)


def experiment_names() -> tuple[str, ...]:
    return tuple(REGISTRY)


def run_experiment(name: str, lam: float | None = None,
                   seed: int = DEFAULT_SEED, samples: int | None = None,
                   **opts) -> ExperimentReport:
    """Run one registered experiment and stamp the measured wall time."""
    try:
        exp = REGISTRY[name]
    except KeyError:
        raise UnknownExperimentError(name) from None
    if exp.needs_lam:
        lam = float(lam if lam is not None else exp.default_lam)
    else:
        lam = None
    n = int(samples if samples is not None else exp.default_samples)
    t0 = time.perf_counter()
    rep = exp.fn(lam=lam, seed=seed, samples=n, **opts)
    return dataclasses.replace(rep, wall_time_s=time.perf_counter() - t0)


def run_ladder(name: str, lams=None, seed: int = DEFAULT_SEED,
               samples: int | None = None,
               slope_window: tuple[float, float] | None = None,
               **opts) -> ExperimentReport:
    """Run an experiment across a frequency ladder and fit the rate."""
    try:
        exp = REGISTRY[name]
    except KeyError:
        raise UnknownExperimentError(name) from None
    if exp.ladder_metric is None:
        raise ValueError(f"experiment {name} declares no ladder metric")
    if lams is None:
        lams = exp.ladder_lams
    t0 = time.perf_counter()
    values = []
    rows = []
    failures = 0
    for lam in lams:
        rep = run_experiment(name, lam, seed, samples, **opts)
        failures += sum(1 for v in rep.verdicts if v.status == FAIL)
        val = float(rep.results[exp.ladder_metric])
        values.append(val)
        rows.append({"lam": float(lam), exp.ladder_metric: val})
    fit = fit_slope(lams, values)
    results = {
        "metric": exp.ladder_metric,
        "rows": rows,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "max_log_residual": fit.max_log_residual,
        "per_lam_verdict_failures": failures,
    }
    verdicts = [
        _ok("per_lam_experiments_clean", failures == 0,
            f"{failures} FAIL verdicts across {len(list(lams))} rungs"),
    ]
    if slope_window is not None:
        lo, hi = slope_window
        verdicts.append(_ok("slope_in_window", lo <= fit.slope <= hi,
                            f"slope {fit.slope:.4f} vs [{lo}, {hi}]"))
    else:
        verdicts.append(_obs("fitted_slope", f"{fit.slope:.4f}"))
    report = ExperimentReport(
        experiment=f"ladder:{name}", lam=None, seed=seed,
        params={"lams": [float(x) for x in lams],
                "samples": samples, **_jsonify(opts)},
        results=results, verdicts=tuple(verdicts),
    )
    return dataclasses.replace(report,
                               wall_time_s=time.perf_counter() - t0)
