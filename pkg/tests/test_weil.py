import cmath
import math
import random

import numpy as np
import pytest

from vvtheta import (
    Axis,
    IndexMismatch,
    MP_IDENTITY,
    MP_S,
    MP_T,
    MP_Z,
    MetaplecticElement,
    RepVector,
    check_isotropic,
    direct_sum,
    discriminant_group,
    down_arrow,
    glue_map,
    identity_vector,
    mp_power,
    overlattice_from_isotropic,
    pair,
    rho_apply,
    rho_generator,
    rho_matrix,
    up_arrow,
    word_decompose,
)


def random_element(rng, steps=6):
    g = MP_IDENTITY
    pool = [MP_T, MP_S, MP_Z, mp_power(MP_T, -1), mp_power(MP_S, -1)]
    for _ in range(steps):
        g = g * rng.choice(pool)
    return g


def test_generator_matrices_a1(a1):
    d = discriminant_group(a1)
    t = rho_generator(d, "T")
    assert np.abs(t - np.diag([1, 1j])).max() < 1e-12
    s = rho_generator(d, "S")
    expected = cmath.exp(-2j * math.pi / 8) / math.sqrt(2) \
        * np.array([[1, 1], [1, -1]])
    assert np.abs(s - expected).max() < 1e-12


def test_generator_matrices_trivial(ii11):
    d = discriminant_group(ii11)
    assert np.abs(rho_generator(d, "T") - np.eye(1)).max() < 1e-12
    assert np.abs(rho_generator(d, "S") - np.eye(1)).max() < 1e-12


def test_relations_all_lattices(test_lattices):
    for lat in test_lattices:
        d = discriminant_group(lat)
        n = d.order
        t = rho_generator(d, "T")
        s = rho_generator(d, "S")
        z = rho_generator(d, "Z")
        assert np.abs(s @ s - z).max() < 1e-10
        assert np.abs(np.linalg.matrix_power(s @ t, 3) - z).max() < 1e-10
        assert np.abs(np.linalg.matrix_power(z, 4) - np.eye(n)).max() < 1e-10
        assert np.abs(s.conj().T @ s - np.eye(n)).max() < 1e-10


def test_dual_is_conjugate(test_lattices):
    for lat in test_lattices:
        d = discriminant_group(lat)
        for gen in ("T", "S"):
            assert np.abs(rho_generator(d, gen, dual=True)
                          - rho_generator(d, gen).conj()).max() < 1e-12


def test_word_decompose_basics():
    assert word_decompose(MP_IDENTITY).tokens == ()
    w = word_decompose(MP_T * MP_S)
    assert w.evaluate().matrix() == (MP_T * MP_S).matrix()
    g = MetaplecticElement(1, 0, 1, 1, 1)
    w = word_decompose(g)
    got = w.evaluate()
    assert got.matrix() == g.matrix()
    assert abs(got.phi(1j) - g.phi(1j)) < 1e-9


def test_word_decompose_random_roundtrip():
    rng = random.Random(7)
    for _ in range(25):
        g = random_element(rng, steps=rng.randint(1, 10))
        w = word_decompose(g)
        got = w.evaluate()
        assert got.matrix() == g.matrix()
        assert got.branch == g.branch
        # word stays short: a few tokens per Euclidean step
        assert len(w) <= 4 * (len(bin(max(abs(g.c), abs(g.d), 2))) + 4)


def test_word_decompose_large_entries():
    g = MetaplecticElement(1, 0, 100, 1, 1)
    w = word_decompose(g)
    got = w.evaluate()
    assert got.matrix() == g.matrix() and got.branch == g.branch
    big = MetaplecticElement(89, 55, 144, 89, -1)  # consecutive Fibonacci
    w = word_decompose(big)
    got = w.evaluate()
    assert got.matrix() == big.matrix() and got.branch == big.branch


def test_branch_tracking_both_lifts():
    plus = MetaplecticElement(0, -1, 1, 0, 1)
    minus = MetaplecticElement(0, -1, 1, 0, -1)
    assert word_decompose(plus).evaluate().branch == 1
    assert word_decompose(minus).evaluate().branch == -1
    assert abs(plus.phi(1j) + minus.phi(1j)) < 1e-12


def test_rho_apply_identity_and_z(a1):
    d = discriminant_group(a1)
    axes = (Axis(d),)
    v = RepVector(axes, {((0,),): 1 + 2j, ((1,),): -0.5j})
    assert (rho_apply(MP_IDENTITY, v) - v).norm_inf() < 1e-12
    # Z acts on A1 by e(-1/4) since -gamma = gamma there
    got = rho_apply(MP_Z, v)
    expected = v.scale(cmath.exp(-2j * math.pi / 4))
    assert (got - expected).norm_inf() < 1e-10


def test_rho_s4_equals_scalar(test_lattices):
    for lat in test_lattices:
        d = discriminant_group(lat)
        s = rho_generator(d, "S")
        phase = cmath.exp(2j * math.pi * (lat.sig_minus - lat.sig_plus) / 2)
        assert np.abs(np.linalg.matrix_power(s, 4)
                      - phase * np.eye(d.order)).max() < 1e-10


def test_representation_property(a2):
    rng = random.Random(5)
    d = discriminant_group(a2)
    for _ in range(5):
        g = random_element(rng)
        h = random_element(rng)
        lhs = rho_matrix(d, g * h)
        rhs = rho_matrix(d, g) @ rho_matrix(d, h)
        assert np.abs(lhs - rhs).max() < 1e-10


@pytest.fixture(scope="module")
def glue(a1, a1_neg):
    lam = direct_sum(a1, a1_neg)
    d = discriminant_group(lam)
    h = check_isotropic(d, [(1, 1)])
    emb = overlattice_from_isotropic(lam, h)
    return glue_map(emb)


def test_arrows_identity_when_trivial(a1):
    from vvtheta import check_isotropic as iso, overlattice_from_isotropic as over

    d = discriminant_group(a1)
    emb = over(a1, iso(d, []))
    gm = glue_map(emb)
    v = RepVector((Axis(gm.small_disc),), {((1,),): 3.0})
    assert (up_arrow(gm, down_arrow(gm, v)) - v).norm_inf() < 1e-12


def test_up_arrow_spreads(glue):
    e0 = RepVector.basis_vector((Axis(glue.big_disc),), ((),))
    lifted = up_arrow(glue, e0)
    assert lifted.coeffs == {((0, 0),): 1 + 0j, ((1, 1),): 1 + 0j}
    doubled = up_arrow(glue, e0.scale(2.0))
    assert (doubled - lifted.scale(2.0)).norm_inf() == 0


def test_down_arrow_kills_nonorthogonal(glue):
    bad = RepVector.basis_vector((Axis(glue.small_disc),), ((1, 0),))
    assert down_arrow(glue, bad).coeffs == {}


def test_down_up_is_glue_order(glue):
    for gamma in glue.big_disc.elements():
        v = RepVector.basis_vector((Axis(glue.big_disc),), (gamma,))
        got = down_arrow(glue, up_arrow(glue, v))
        assert got.coeffs == {(gamma,): complex(glue.glue_order)}


def test_arrow_intertwining(glue):
    rng = random.Random(9)
    words = [MP_T, MP_S] + [random_element(rng) for _ in range(5)]
    for g in words:
        for key in glue.small_disc.elements():
            v = RepVector.basis_vector((Axis(glue.small_disc),), (key,))
            lhs = rho_apply(g, down_arrow(glue, v))
            rhs = down_arrow(glue, rho_apply(g, v))
            assert (lhs - rhs).norm_inf() < 1e-10
        for gamma in glue.big_disc.elements():
            w = RepVector.basis_vector((Axis(glue.big_disc),), (gamma,))
            lhs = rho_apply(g, up_arrow(glue, w))
            rhs = up_arrow(glue, rho_apply(g, w))
            assert (lhs - rhs).norm_inf() < 1e-10


def test_pair_dual_bases(a1):
    d = discriminant_group(a1)
    for gamma in d.elements():
        for delta in d.elements():
            u = RepVector.basis_vector((Axis(d),), (gamma,))
            v = RepVector.basis_vector((Axis(d, dual=True),), (delta,))
            assert pair(u, v) == (1 if gamma == delta else 0)


def test_pair_identity_vector(a1, a2):
    rng = random.Random(4)
    for lat in (a1, a2):
        d = discriminant_group(lat)
        v = RepVector((Axis(d),), {(x,): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                                   for x in d.elements()})
        assert (pair(v, identity_vector(d)) - v).norm_inf() < 1e-12


def test_identity_vector_invariant(a1, a2, a1_plus_a1neg):
    for lat in (a1, a2, a1_plus_a1neg):
        d = discriminant_group(lat)
        idv = identity_vector(d)
        for g in (MP_T, MP_S):
            assert (rho_apply(g, idv) - idv).norm_inf() < 1e-12


def test_pair_with_arrows(glue):
    # <down X, U> = <X, up U> with the raise acting on the dual side
    rng = random.Random(12)
    small, big = glue.small_disc, glue.big_disc
    x = RepVector((Axis(small),), {(k,): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                                   for k in small.elements()})
    u = RepVector((Axis(big, dual=True),),
                  {(k,): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                   for k in big.elements()})
    lhs = pair(down_arrow(glue, x), u)
    rhs = pair(x, up_arrow(glue, u))
    assert abs(lhs - rhs) < 1e-12


def test_pair_nested_identities(glue, a1):
    # <<V,W>_M, U>_L = <W, U (x) V>_{L+M(-1)} = <V, <W,U>_L>_M
    rng = random.Random(13)
    dm = discriminant_group(a1)
    dl = glue.big_disc

    def rand_vec(axes, pools):
        keys = []
        import itertools

        for combo in itertools.product(*pools):
            keys.append(tuple(combo))
        return RepVector(axes, {k: complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                                for k in keys})

    v = rand_vec((Axis(dm),), [dm.elements()])
    w = rand_vec((Axis(dl), Axis(dm, dual=True)), [dl.elements(), dm.elements()])
    u = rand_vec((Axis(dl, dual=True),), [dl.elements()])
    first = pair(pair(v, w, groups=[dm]), u, groups=[dl])
    second = pair(w, u.tensor(v))
    third = pair(v, pair(w, u, groups=[dl]), groups=[dm])
    assert abs(first - second) < 1e-12
    assert abs(second - third) < 1e-12


def test_pair_arrows_commute_with_spectator(glue, a1):
    # raising/lowering on the L-side commutes past a pairing over M
    rng = random.Random(14)
    dm = discriminant_group(a1)
    small, big = glue.small_disc, glue.big_disc
    import itertools

    v = RepVector((Axis(dm),), {(k,): complex(rng.uniform(-1, 1))
                                for k in dm.elements()})
    w_keys = list(itertools.product(big.elements(), dm.elements()))
    w = RepVector((Axis(big), Axis(dm, dual=True)),
                  {k: complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for k in w_keys})
    y_keys = list(itertools.product(small.elements(), dm.elements()))
    y = RepVector((Axis(small), Axis(dm, dual=True)),
                  {k: complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for k in y_keys})
    lhs = pair(v, up_arrow(glue, w), groups=[dm])
    rhs = up_arrow(glue, pair(v, w, groups=[dm]))
    assert (lhs - rhs).norm_inf() < 1e-12
    lhs2 = pair(v, down_arrow(glue, y), groups=[dm])
    rhs2 = down_arrow(glue, pair(v, y, groups=[dm]))
    assert (lhs2 - rhs2).norm_inf() < 1e-12


def test_pair_index_mismatch(a1, a2):
    d1 = discriminant_group(a1)
    d2 = discriminant_group(a2)
    u = RepVector.basis_vector((Axis(d1),), ((0,),))
    v = RepVector.basis_vector((Axis(d2, dual=True),), ((0,),))
    with pytest.raises(IndexMismatch):
        pair(u, v)
    with pytest.raises(IndexMismatch):
        pair(u, u)  # same duality, no complementary axis
