import numpy as np
import pytest

from ovalbent import boolfn, spread, spreadbent
from ovalbent.gf import BinaryField


@pytest.fixture(scope="module")
def field_spec():
    Q = spread.field_pqf(3)
    return spreadbent.SpreadBentSpec(Q, spread.sqrt_diag_g_table(Q))


@pytest.fixture(scope="module")
def kantor_ct_spec():
    # Corollary instance: Q with commutative transpose, G(z) = z * z
    Qk = spread.kantor_chain(3, [1], [1], [0])            # x y^2, symplectic
    C = spread.commutative_from_symplectic(Qk)
    Q = spread.transpose_pqf(C)                           # Q^t = C commutative
    return spreadbent.SpreadBentSpec(Q, spreadbent.g_square_star(Q))


@pytest.fixture(scope="module")
def luneburg_spec():
    Q = spread.luneburg(3)
    return spreadbent.SpreadBentSpec(Q, spread.sqrt_diag_g_table(Q))


def test_field_sqrt_gives_tr_xy(field_spec):
    f = spreadbent.bent_bivariate(field_spec)
    F = field_spec.Q.field
    want = np.array([F.trace(F.mul(x, y)) for y in range(8) for x in range(8)],
                    dtype=np.uint8)
    assert np.array_equal(f.table, want)
    # and the dual equals the function itself
    assert spreadbent.dual_walsh(field_spec) == f


def test_field_dual_routes_and_oval(field_spec):
    routes = spreadbent.dual_routes(field_spec)
    assert routes["walsh_eq_product"] and routes["walsh_eq_chi_swap"]
    oval = spreadbent.line_oval_bivariate(field_spec)
    assert oval.e_size() == 36  # 2^(2m-1) + 2^(m-1)


def test_vertical_line_pairing(field_spec):
    # each point (0, a) lies on the vertical line plus exactly one other
    Q = field_spec.Q
    st = spreadbent.star_table(Q)
    counts = np.zeros(Q.size, dtype=int)
    for z in range(Q.size):
        counts[field_spec.G[z] ^ st[0, z]] += 1
    assert np.all(counts == 1)


def test_g_identity_not_bent():
    Q = spread.field_pqf(3)
    bad = spreadbent.SpreadBentSpec(Q, np.arange(8, dtype=np.int64))
    ok, wit = spreadbent.bent_criterion(bad)
    assert not ok and wit[0] == "not_two_to_one"
    assert not boolfn.is_bent(spreadbent.bent_bivariate(bad))
    with pytest.raises(ValueError):
        spreadbent.line_oval_bivariate(bad)


def test_g_not_permutation_not_bent():
    Q = spread.field_pqf(3)
    bad = spreadbent.SpreadBentSpec(Q, np.zeros(8, dtype=np.int64))
    ok, wit = spreadbent.bent_criterion(bad)
    assert not ok and wit == ("G_not_bijective",)
    assert not boolfn.is_bent(spreadbent.bent_bivariate(bad))


def test_field_square_g_is_bent():
    Q = spread.field_pqf(3)
    F = Q.field
    g2 = np.array([F.sqr(z) for z in range(8)], dtype=np.int64)
    spec = spreadbent.SpreadBentSpec(Q, g2)
    ok, _ = spreadbent.bent_criterion(spec)
    assert ok and boolfn.is_bent(spreadbent.bent_bivariate(spec))


def test_kantor_commutative_transpose(kantor_ct_spec):
    Q = kantor_ct_spec.Q
    Qt = spread.transpose_pqf(Q)
    assert spread.validate_prequasifield(Qt).is_commutative
    # H_b(z) = (z + b) * z has kernel {0, b}: the 2-to-1 argument
    st = spreadbent.star_table(Q)
    for b in range(1, Q.size):
        h = kantor_ct_spec.G ^ st[b, :]
        counts = np.bincount(h, minlength=Q.size)
        assert set(counts[counts > 0].tolist()) == {2}
    an = spreadbent.analyze(kantor_ct_spec)
    assert an["bent"] and an["criterion"] and an["dual_routes_agree"]
    assert an["e_size"] == 36


def test_three_verdicts_agree_on_negatives():
    Q = spread.field_pqf(3)
    rng = np.random.default_rng(2)
    for _ in range(10):
        G = rng.permutation(8).astype(np.int64)
        spec = spreadbent.SpreadBentSpec(Q, G)
        bent = boolfn.is_bent(spreadbent.bent_bivariate(spec))
        crit, _ = spreadbent.bent_criterion(spec)
        assert bent == crit
        if not bent:
            with pytest.raises(ValueError):
                spreadbent.line_oval_bivariate(spec)


def test_luneburg_analysis(luneburg_spec):
    an = spreadbent.analyze(luneburg_spec)
    assert an["bent"] and an["criterion"] and an["dual_routes_agree"]
    assert an["e_size"] == 2**11 + 2**5 == 2080
    assert an["degree"] == 2 and an["quadratic_rank"] == 12


def test_luneburg_covered_set_is_quadric(luneburg_spec):
    # E(O) equals the zero set of q(x, y) = tr(x1 y1 + x2 y2)
    Q = luneburg_spec.Q
    oval = spreadbent.line_oval_bivariate(luneburg_spec)
    bb = Q.b_bit_table()
    want = np.array([1 ^ bb[x, y] for y in range(Q.size) for x in range(Q.size)],
                    dtype=np.uint8)
    assert np.array_equal(oval.e_table, want)


def test_luneburg_ea_equivalent_to_desarguesian(luneburg_spec):
    # same complete quadratic invariants as tr(xy) on 12 bits
    f = spreadbent.bent_bivariate(luneburg_spec)
    F6 = BinaryField(6)
    g = boolfn.BooleanFunction(
        12, [F6.trace(F6.mul(x, y)) for y in range(64) for x in range(64)])
    assert boolfn.degree(f) == boolfn.degree(g) == 2
    assert boolfn.quadratic_rank(f) == boolfn.quadratic_rank(g) == 12


def test_mu_normalization(luneburg_spec):
    Q = luneburg_spec.Q
    st = spreadbent.star_table(Q)
    mu = 13
    spec_mu = spreadbent.SpreadBentSpec(Q, luneburg_spec.G ^ st[mu, :], mu=mu)
    f_mu = spreadbent.bent_bivariate(spec_mu)
    assert boolfn.is_bent(f_mu)
    assert f_mu.table[0 :: Q.size].tolist() == Q.b_bit_table()[mu, :].tolist()
    norm = spreadbent.normalize_mu(spec_mu)
    assert norm.mu == 0 and np.array_equal(norm.G, luneburg_spec.G)
    # f_norm = f_mu + tr(mu y)
    tr_mu_y = np.repeat(Q.b_bit_table()[mu, :], Q.size)
    assert np.array_equal(spreadbent.bent_bivariate(norm).table,
                          f_mu.table ^ tr_mu_y)
    # dual routes on the mu != 0 spec still agree
    routes = spreadbent.dual_routes(spec_mu)
    assert routes["walsh_eq_product"]


def test_shift_action(luneburg_spec):
    Q = luneburg_spec.Q
    oval0 = spreadbent.line_oval_bivariate(luneburg_spec)
    masks = spreadbent.walsh_masks(Q)
    rng = np.random.default_rng(5)
    size = Q.size
    xs = np.arange(size)
    for _ in range(5):
        u, v = int(rng.integers(size)), int(rng.integers(size))
        f_uv, oval_uv = spreadbent.action_linear_shift(luneburg_spec, u, v)
        assert boolfn.is_bent(f_uv)
        assert boolfn.dual(f_uv, masks) == spreadbent.dual_chi_swap(oval_uv)
        et = oval0.e_table.reshape(size, size)
        shifted = np.zeros_like(et)
        shifted[np.ix_(xs ^ u, xs ^ v)] = et
        assert np.array_equal(oval_uv.e_table.reshape(size, size), shifted)
    f00, oval00 = spreadbent.action_linear_shift(luneburg_spec, 0, 0)
    assert f00 == spreadbent.bent_bivariate(luneburg_spec)
    assert np.array_equal(oval00.e_table, oval0.e_table)


def test_correspondence_round_trip(field_spec, luneburg_spec, kantor_ct_spec):
    # Theorem-style one-to-one correspondence: spec -> line oval -> spec
    for spec in (field_spec, luneburg_spec, kantor_ct_spec):
        oval = spreadbent.line_oval_bivariate(spec)
        back = spreadbent.spec_from_line_oval(oval, spec.Q)
        assert np.array_equal(back.G, spec.G) and back.mu == 0
        # a translated oval (c != 0) maps to the shifted function
        _, oval_uv = spreadbent.action_linear_shift(spec, 3, 5)
        assert oval_uv.c == 5
        back2 = spreadbent.spec_from_line_oval(oval_uv, spec.Q)
        oval2 = spreadbent.line_oval_bivariate(back2)
        # translating by (c, 0) cancels the v-star term: only G + u remains
        assert np.array_equal(back2.G, spec.G ^ 3)
        assert oval2.c == 0
        assert boolfn.is_bent(spreadbent.bent_bivariate(back2))


def test_bent_degree_bound(field_spec, luneburg_spec, kantor_ct_spec):
    for spec in (field_spec, luneburg_spec, kantor_ct_spec):
        f = spreadbent.bent_bivariate(spec)
        assert boolfn.degree(f) <= spec.Q.dim


def test_rho_action_and_g0_normalization(field_spec):
    spec_c = spreadbent.action_rho(field_spec, 0)
    assert np.array_equal(spec_c.G, field_spec.G)
    for c in (1, 5):
        spec_c = spreadbent.action_rho(field_spec, c)
        an = spreadbent.analyze(spec_c)
        assert an["bent"] and an["dual_routes_agree"]
    g0 = spreadbent.normalize_g0(field_spec)
    assert g0.G[0] == 0
    assert spreadbent.analyze(g0)["bent"]


def test_aut_action_frobenius(field_spec):
    Q = field_spec.Q
    F = Q.field
    phi = np.array([F.sqr(x) for x in range(8)], dtype=np.int64)
    assert spreadbent.is_automorphism(Q, phi)
    f_phi, e_phi = spreadbent.action_aut(field_spec, phi)
    assert boolfn.is_bent(f_phi)
    d = boolfn.dual(f_phi, spreadbent.walsh_masks(Q))
    swap = (1 ^ e_phi.reshape(8, 8).T).ravel()
    assert np.array_equal(d.table, swap)
    # identity map is a fixed point
    ident = np.arange(8, dtype=np.int64)
    f_id, e_id = spreadbent.action_aut(field_spec, ident)
    assert f_id == spreadbent.bent_bivariate(field_spec)
    with pytest.raises(ValueError):
        spreadbent.action_aut(field_spec, np.array([0, 1, 2, 3, 4, 5, 7, 6]))


def test_gl2_action(field_spec):
    Q = field_spec.Q
    F = Q.field
    masks = spreadbent.walsh_masks(Q)
    rng = np.random.default_rng(11)
    done = 0
    while done < 12:
        M = tuple(int(v) for v in rng.integers(0, 8, size=4))
        if F.mul(M[0], M[3]) ^ F.mul(M[1], M[2]) == 0:
            continue
        frob = int(rng.integers(3))
        f_psi, e_psi = spreadbent.action_gl2(field_spec, M, frob=frob)
        assert boolfn.is_bent(f_psi)
        d = boolfn.dual(f_psi, masks)
        swap = (1 ^ e_psi.reshape(8, 8).T).ravel()
        assert np.array_equal(d.table, swap), (M, frob)
        done += 1
    # identity fixes everything
    f_id, e_id = spreadbent.action_gl2(field_spec, (1, 0, 0, 1))
    assert f_id == spreadbent.bent_bivariate(field_spec)
    with pytest.raises(ValueError):
        spreadbent.action_gl2(field_spec, (1, 1, 1, 1))
    with pytest.raises(ValueError):
        spreadbent.action_gl2(
            spreadbent.SpreadBentSpec(spread.luneburg(3),
                                      spread.sqrt_diag_g_table(spread.luneburg(3))),
            (1, 0, 0, 1))
