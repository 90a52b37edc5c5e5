import math

import numpy as np
import pytest

from decolab import caps, scale, tubes
from decolab.rng import keyed_rng


def _clustered_family(lam=256.0, n=24, spread=0.5, key="tubes-cluster"):
    """Synthetic dense family: n directions inside a spread*alpha cone."""
    s = scale.derive(lam)
    rng = keyed_rng(11, key, n)
    axis = np.array([0.0, 0.0, 1.0])
    out = [axis]
    for _ in range(n - 1):
        t = rng.normal(size=3)
        t -= t @ axis * axis
        t /= np.linalg.norm(t)
        theta = spread * s.alpha * rng.random()
        out.append(math.cos(theta) * axis + math.sin(theta) * t)
    return caps.CapFamily(scale=s, centers=np.array(out))


@pytest.fixture(scope="module")
def fam():
    return _clustered_family()


def test_membership_handcrafted_points():
    s = scale.derive(256.0)
    tube = tubes.Tube(scale=s, xi=np.array([s.lam, 0.0, 0.0]))
    # cell center is inside the full tube but excised from the truncated one
    assert tubes.membership(tube, np.array([0.0]), np.zeros((1, 3)))[0]
    trunc = tubes.Tube(scale=s, xi=tube.xi, truncated=True)
    assert not tubes.membership(trunc, np.array([0.0]), np.zeros((1, 3)))[0]
    x = np.array([[0.0, 0.3 * s.rho, 0.0]])
    assert tubes.membership(trunc, np.array([0.0]), x)[0]
    # outside the time slab, outside the spatial ball
    assert not tubes.membership(tube, np.array([2.0 * s.t_half]),
                                np.zeros((1, 3)))[0]
    far = np.array([[0.9 * s.rho, 0.0, 0.0]])   # 0.9 rho = 1.8 x_half
    assert not tubes.membership(tube, np.array([0.0]), far)[0]


def test_membership_follows_the_moving_axis():
    s = scale.derive(256.0)
    xi = np.array([s.lam, 0.0, 0.0])
    tube = tubes.Tube(scale=s, xi=xi)
    t = 0.8 * s.t_half
    on_axis = 2.0 * t * xi
    # the moving center at t = 0.8 t_half sits at 0.8 rho > x_half, so the
    # point is axial-true but cell-false
    assert np.linalg.norm(on_axis) > s.x_half
    assert not tubes.membership(tube, np.array([t]), on_axis[None, :])[0]


def test_volume_closed_forms():
    s = scale.derive(64.0)
    assert tubes.cylinder_volume(s) == pytest.approx(
        (4.0 / 3.0) * math.pi * s.rho ** 3 * s.lam ** -1.5, rel=1e-13)
    assert tubes.nested_ball_volume(s) == pytest.approx(
        tubes.cylinder_volume(s) / 8.0, rel=1e-13)


def test_mc_volume_is_deterministic_and_guarded():
    s = scale.derive(64.0)
    tube = tubes.Tube(scale=s, xi=np.array([s.lam, 0.0, 0.0]), cap_index=0)
    a = tubes.mc_volume(tube, 5000, seed=3)
    b = tubes.mc_volume(tube, 5000, seed=3)
    assert a == b
    c = tubes.mc_volume(tube, 5000, seed=4)
    assert c != a
    with pytest.raises(tubes.ConfigError):
        tubes.mc_volume(tube, 10, seed=3)


def test_static_tube_matches_nested_ball_volume():
    s = scale.derive(256.0)
    tube = tubes.Tube(scale=s, xi=np.zeros(3), cap_index=-1)
    est = tubes.mc_volume(tube, 100_000, seed=5)
    assert abs(est.value - tubes.nested_ball_volume(s)) <= 3.0 * est.stderr


def test_pair_overlap_bound_branches():
    s = scale.derive(256.0)
    time_branch = s.rho ** 3 * s.lam ** -1.5
    assert tubes.pair_overlap_bound(s, 0.0) == time_branch
    # tiny separation still clips to the time branch
    assert tubes.pair_overlap_bound(s, 1e-9) == time_branch
    # the branches cross at delta = rho * sqrt(lam) = 1
    lo = tubes.pair_overlap_bound(s, 1.0 - 1e-12)
    hi = tubes.pair_overlap_bound(s, 1.0)
    assert abs(lo - hi) <= 1e-12 * hi
    # angular branch decays like 1/delta
    b1 = tubes.pair_overlap_bound(s, 2.0)
    b2 = tubes.pair_overlap_bound(s, 4.0)
    assert b1 == pytest.approx(2.0 * b2, rel=1e-12)
    with pytest.raises(ValueError):
        tubes.pair_overlap_bound(s, -1.0)


def test_mc_pair_overlap_self_is_volume():
    s = scale.derive(64.0)
    tube = tubes.Tube(scale=s, xi=np.array([s.lam, 0.0, 0.0]), cap_index=0)
    vol = tubes.mc_volume(tube, 50_000, seed=7)
    ovl = tubes.mc_pair_overlap(tube, tube, 50_000, seed=7)
    assert abs(vol.value - ovl.value) <= 4.0 * (vol.stderr + ovl.stderr)


def test_mc_pair_overlap_rejects_mixed_scales():
    t1 = tubes.Tube(scale=scale.derive(64.0), xi=np.zeros(3))
    t2 = tubes.Tube(scale=scale.derive(128.0), xi=np.zeros(3))
    with pytest.raises(tubes.ConfigError):
        tubes.mc_pair_overlap(t1, t2, 5000, seed=0)
    t3 = tubes.Tube(scale=scale.derive(64.0), xi=np.ones(3))
    with pytest.raises(tubes.ConfigError):
        tubes.mc_pair_overlap(t1, t3, 10, seed=0)


def test_multiplicity_counts_handcrafted(fam):
    s = fam.scale
    xis = fam.xi()
    # interior core point at t = 0 lies in every tube of the cluster
    pt_x = np.array([[0.35 * s.rho, 0.0, 0.0]])
    m = tubes.multiplicity_counts(s, xis, True, np.array([0.0]), pt_x)
    assert m[0] == len(fam)
    # the excised core kills the same point for the truncated count at x ~ 0
    m0 = tubes.multiplicity_counts(s, xis, True, np.array([0.0]),
                                   np.zeros((1, 3)))
    assert m0[0] == 0
    # out of the time slab: count is zero regardless of geometry
    m1 = tubes.multiplicity_counts(s, xis, False, np.array([3.0 * s.t_half]),
                                   pt_x)
    assert m1[0] == 0
    # late-time corner away from the cluster axis (axis ~ e3): no tube left
    late = np.array([0.999 * s.t_half])
    corner = np.array([[0.499 * s.rho, 0.0, 0.0]])
    m2 = tubes.multiplicity_counts(s, xis, False, late, corner)
    assert m2[0] == 0


def test_density_check_and_guards(fam):
    assert tubes.density_check(fam)
    sparse = caps.build_lattice(scale.derive(64.0))
    assert not tubes.density_check(sparse)
    empty = caps.CapFamily(scale=fam.scale, centers=np.zeros((0, 3)))
    with pytest.raises(ValueError):
        tubes.density_check(empty)


def test_multiplicity_experiment_statistics(fam):
    res = tubes.multiplicity_experiment(fam, samples=4000, seed=13)
    assert res.samples == 4000
    assert res.m_min >= 1
    assert res.m_max <= len(fam)
    # the weighted mean is a float quotient, so allow rounding slack
    assert res.m_min - 1e-9 <= res.m_mean_weighted <= res.m_max + 1e-9
    # threshold c*D < 1 at desk scale, and M >= 1 always
    assert res.threshold < 1.0
    assert res.fraction_below == 0.0
    assert 0.0 < res.union_ratio <= fam.scale.D
    again = tubes.multiplicity_experiment(fam, samples=4000, seed=13)
    assert res == again


def test_multiplicity_experiment_guards(fam):
    sparse = caps.build_lattice(scale.derive(64.0))
    with pytest.raises(tubes.DensityError):
        tubes.multiplicity_experiment(sparse, samples=2000, seed=0)
    with pytest.raises(tubes.ConfigError):
        tubes.multiplicity_experiment(fam, samples=10, seed=0)


def test_pointwise_cs_is_exact(fam):
    s = fam.scale
    xis = fam.xi()
    rng = keyed_rng(17, "tubes-cs")
    for _ in range(200):
        amps = rng.normal(size=len(fam)) + 1j * rng.normal(size=len(fam))
        t = float(rng.uniform(-s.t_half, s.t_half))
        x = s.x_half * rng.uniform(-1.0, 1.0, size=3)
        chk = tubes.pointwise_cs_check(s, xis, True, amps, t, x)
        assert chk.ok
        assert chk.multiplicity >= 0
    # a point no tube contains gives the trivial 0 <= 0 instance
    chk = tubes.pointwise_cs_check(s, xis, False, amps, 10.0 * s.t_half,
                                   np.zeros(3))
    assert chk.multiplicity == 0 and chk.lhs == 0.0 and chk.rhs == 0.0
    assert chk.ok


def test_boundary_layer_fraction():
    s = scale.derive(256.0)
    est = tubes.boundary_layer_mc(s, 100_000, seed=19)
    sigma = math.sqrt(0.125 * 0.875 / 100_000)
    assert abs(est.value - tubes.BOUNDARY_LAYER_FRACTION) <= 3.0 * sigma
    with pytest.raises(tubes.ConfigError):
        tubes.boundary_layer_mc(s, 10, seed=0)


def test_l2_sum_guards():
    s = scale.derive(64.0)
    single = caps.CapFamily(scale=s, centers=np.array([[0.0, 0.0, 1.0]]))
    with pytest.raises(tubes.ConfigError):
        tubes.l2_sum(single, seed=0)
    huge = caps.CapFamily(scale=s, centers=np.zeros((10_001, 3)))
    with pytest.raises(tubes.ConfigError):
        tubes.l2_sum(huge, seed=0)


def test_l2_sum_bookkeeping():
    fam = caps.build_lattice(scale.derive(8.0))
    res = tubes.l2_sum(fam, seed=23, samples_per_pair=1024, n_anchors=8,
                       max_pairs_per_annulus=8)
    assert res.n_caps == len(fam)
    assert res.diagonal == res.n_caps * res.tube_volume.value
    assert res.total == res.diagonal + res.off_diagonal
    assert res.off_diagonal >= 0.0
    total_pairs = res.n_caps * (res.n_caps - 1) // 2
    assert sum(row.pair_count for row in res.rows) <= total_pairs
    js = [row.j for row in res.rows]
    assert js == sorted(js)
    for row in res.rows:
        assert row.sampled_pairs <= 8
        assert row.analytic_bound == pytest.approx(
            fam.scale.rho ** 4 / (fam.scale.lam * row.delta), rel=1e-13)
    again = tubes.l2_sum(fam, seed=23, samples_per_pair=1024, n_anchors=8,
                         max_pairs_per_annulus=8)
    assert res == again
