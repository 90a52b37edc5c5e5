import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from decolab import caps, phase, scale
from decolab.rng import keyed_rng


S256 = scale.derive(256.0)


def _generic(replicate=0):
    return phase.sample_sextuple(S256, seed=1, replicate=replicate)


def test_sextuple_validation():
    with pytest.raises(ValueError):
        phase.Sextuple(scale=S256, xi=np.zeros((5, 3)))
    bad = np.full((6, 3), S256.lam)          # modulus sqrt(3)*lam > 2 lam
    bad[0] = [S256.lam * 3.0, 0.0, 0.0]
    with pytest.raises(ValueError):
        phase.Sextuple(scale=S256, xi=bad)
    with pytest.raises(ValueError):
        phase.Sextuple(scale=S256, xi=np.full((6, 3), 1e-3))


def test_moduli_and_directions():
    s = _generic()
    mods = s.moduli()
    dirs = s.directions()
    assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0, rtol=1e-13)
    for m in range(6):
        assert mods[m] == pytest.approx(np.linalg.norm(s.xi[m]), rel=1e-15)
        assert 0.5 * S256.lam <= mods[m] <= 2.0 * S256.lam


def test_paired_blocks_cancel_exactly():
    for rep in range(200):
        s = phase.sample_sextuple(S256, seed=2, replicate=rep, kind="paired")
        assert phase.mu6(s) == 0.0
        g = phase.grad_xprime(s)
        assert g[0] == 0.0 and g[1] == 0.0


@given(perm=st.permutations(range(3)))
def test_mu6_invariant_under_within_block_shuffle(perm):
    s = _generic()
    shuffled = np.vstack([s.xi[list(perm)], s.xi[3:]])
    s2 = phase.Sextuple(scale=S256, xi=shuffled)
    assert phase.mu6(s2) == phase.mu6(s)


def test_mu6_invariant_under_block_swap():
    s = _generic()
    swapped = phase.Sextuple(scale=S256, xi=np.vstack([s.xi[3:], s.xi[:3]]))
    assert phase.mu6(swapped) == phase.mu6(s)


def test_classify_basket_boundary_and_branches():
    paired = phase.sample_sextuple(S256, seed=3, replicate=0, kind="paired")
    # mu6 = 0 exactly: the boundary mu6 >= c*sqrt(lam) is included at c = 0
    assert phase.classify_basket(paired, c=0.0) == "B_ge"
    assert phase.classify_basket(paired, c=1e-12) == "B_lt"
    # generic moduli spread makes mu6 of order lam^2 >> sqrt(lam)
    assert phase.classify_basket(_generic()) == "B_ge"


def test_grad_xprime_handcrafted():
    lam = S256.lam
    xi = np.array([
        [lam, 1.0, 2.0], [lam, 3.0, -1.0], [lam, -2.0, 0.5],
        [lam, 0.0, 0.0], [lam, 0.0, 0.0], [lam, 0.0, 0.0],
    ])
    s = phase.Sextuple(scale=S256, xi=xi)
    g = phase.grad_xprime(s)
    assert g[0] == 2.0 and g[1] == 1.5


def test_transverse_dirs_units():
    lam = S256.lam
    xi = np.array([
        [lam, 0.0, 0.0], [0.0, lam, 0.0], [0.0, 0.0, lam],
        [lam, 0.0, 0.0], [lam, 0.0, 0.0], [lam, 0.0, 0.0],
    ])
    u = phase.transverse_dirs(phase.Sextuple(scale=S256, xi=xi))
    assert np.array_equal(u[0], [0.0, 0.0])
    assert np.allclose(u[1], [1.0, 0.0], atol=0.0)
    assert np.allclose(u[2], [0.0, 1.0], atol=0.0)


def test_tp_identity_pairing():
    s = phase.sample_sextuple(S256, seed=4, replicate=0, kind="paired")
    res = phase.tp_dichotomy(s)
    assert res.label == "paired"
    assert res.witness in phase._PERMS
    assert phase.pairing_holds(s, res.witness)


def test_tp_witness_tracks_the_permutation():
    rng = keyed_rng(5, "phase-perm")
    half = phase._shell_points(S256, rng, 3)
    # second block stores half[1], half[2], half[0] at rows 3, 4, 5
    s = phase.Sextuple(scale=S256, xi=np.vstack([half, half[[1, 2, 0]]]))
    res = phase.tp_dichotomy(s)
    assert res.label == "paired"
    assert res.witness == (5, 3, 4)


def test_tp_generic_is_transversal():
    res = phase.tp_dichotomy(_generic())
    assert res.label == "transversal"
    assert res.witness is None
    assert res.grad_norm >= res.grad_threshold


def _balanced_crossed():
    """Blocks with equal moduli and cancelling transverse sums, but the
    transverse directions of one block rotated a quarter turn: no pairing,
    zero gradient."""
    v, h = 0.9 * S256.lam, 0.1 * S256.lam
    xi = np.array([
        [v, h, 0.0], [v, -h, 0.0], [v, 0.0, 0.0],
        [-v, 0.0, h], [-v, 0.0, -h], [-v, 0.0, 0.0],
    ])
    return phase.Sextuple(scale=S256, xi=xi)


def test_tp_neither_branch():
    res = phase.tp_dichotomy(_balanced_crossed())
    assert res.label == "neither"
    assert res.grad_norm == 0.0
    assert res.radial_threshold == 0.0


def test_tp_wide_tolerance_flips_neither_to_paired():
    # inflating C until C*alpha exceeds pi/2 admits the crossed pairing
    res = phase.tp_dichotomy(_balanced_crossed(), C=2e5)
    assert res.label == "paired"


def test_single_linkage_is_transitive():
    a = S256.alpha

    def dir_at(theta):
        return [math.sin(theta), 0.0, math.cos(theta)]

    dirs = np.array([dir_at(0.0), dir_at(0.9 * a), dir_at(1.8 * a),
                     dir_at(1.0)])
    # 0-2 are 1.8 alpha apart, linked only through 1
    assert phase.single_linkage_sizes(dirs, a) == (3, 1)
    assert phase.single_linkage_sizes(dirs, 0.5 * a) == (1, 1, 1, 1)


def test_rn_narrow_on_five_cluster():
    s = phase.sample_sextuple(S256, seed=6, replicate=0, kind="clustered5")
    res = phase.rn_classify(s, None)
    assert res.label == "narrow"
    assert res.cluster_sizes[0] >= 5
    assert res.max_alpha_count == 0


def test_rn_neither_on_generic():
    res = phase.rn_classify(_generic(), None)
    assert res.label == "neither"
    assert res.cluster_sizes == (1, 1, 1, 1, 1, 1)


def _dense_family():
    rng = keyed_rng(7, "phase-family")
    axis = np.array([0.0, 0.0, 1.0])
    out = [axis]
    for _ in range(23):
        t = rng.normal(size=3)
        t -= t @ axis * axis
        t /= np.linalg.norm(t)
        theta = 0.5 * S256.alpha * rng.random()
        out.append(math.cos(theta) * axis + math.sin(theta) * t)
    return caps.CapFamily(scale=S256, centers=np.array(out))


def test_rn_robust_beats_narrow():
    fam = _dense_family()
    res = phase.rn_classify(_generic(), fam)
    assert res.label == "robust"
    assert res.max_alpha_count == 23
    assert res.max_alpha_count > res.density_threshold


def test_sample_sextuple_determinism_and_kinds():
    a = phase.sample_sextuple(S256, seed=8, replicate=3)
    b = phase.sample_sextuple(S256, seed=8, replicate=3)
    assert np.array_equal(a.xi, b.xi)
    c = phase.sample_sextuple(S256, seed=8, replicate=4)
    assert not np.array_equal(a.xi, c.xi)
    with pytest.raises(ValueError):
        phase.sample_sextuple(S256, seed=8, replicate=0, kind="exotic")


def test_perturbed_sampler_stays_on_shell():
    # constructing the Sextuple revalidates the shell bounds every draw
    for rep in range(100):
        phase.sample_sextuple(S256, seed=9, replicate=rep, kind="perturbed")
