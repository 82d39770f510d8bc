"""Bivariate bent functions linear on the members of a spread Sigma(Q).

A function on V x V (V the carrier of a prequasifield Q) that is linear
on every spread member is determined by a map G : V -> V and mu in V:
f(0, y) = B(mu, y) and f(x, x o z) = B(G(z), x).  Truth tables pack the
point (x, y) as x + size*y.

Bentness is equivalent to: G bijective and z -> G(z) + b*z 2-to-1 for
every b != 0 (star = transpose multiplication), and to the 0-or-2 cover
property of the line oval {x=0} u {y = G(z) + x*z} in A(Q^t).  The dual
is computed along three independent routes (Walsh signs, the product
formula, coordinate swap of the covered set) which agree bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import boolfn, kernels, spread as spread_mod
from .spread import Prequasifield


@dataclass(frozen=True)
class SpreadBentSpec:
    Q: Prequasifield
    G: np.ndarray
    mu: int = 0

    def __post_init__(self):
        if self.G.shape != (self.Q.size,):
            raise ValueError("G must be a table over the carrier")


@dataclass(frozen=True)
class BivariateLineOval:
    """The line {x = c} plus size lines {y = offsets[z] + x * z} in A(Q^t)."""
    size: int
    c: int
    offsets: np.ndarray
    e_table: np.ndarray  # uint8 over packed points x + size*y

    def e_size(self) -> int:
        return int(self.e_table.sum())


def star_table(Q: Prequasifield) -> np.ndarray:
    """Multiplication table of the transpose prequasifield Q^t."""
    return spread_mod.transpose_pqf(Q).table


def g_square_star(Q: Prequasifield) -> np.ndarray:
    """G(z) = z * z in the transpose multiplication (the o-polynomial of
    the commutative-transpose construction)."""
    st = star_table(Q)
    return st[np.arange(Q.size), np.arange(Q.size)].copy()


def normalize_mu(spec: SpreadBentSpec) -> SpreadBentSpec:
    """EA-reduction of mu to 0: G(z) gains R_z^*(mu) = mu * z."""
    if spec.mu == 0:
        return spec
    st = star_table(spec.Q)
    return SpreadBentSpec(spec.Q, spec.G ^ st[spec.mu, :], 0)


def walsh_masks(Q: Prequasifield) -> np.ndarray:
    """Spectrum re-indexing for the bivariate inner product B(a,x)+B(b,y)."""
    bm = Q.b_mask_table()
    return (bm[None, :] | (bm[:, None] << Q.dim)).ravel()


def bent_bivariate(spec: SpreadBentSpec) -> boolfn.BooleanFunction:
    """Truth table on 2*dim bits of the spread-linear function."""
    Q = spec.Q
    out = np.zeros(Q.size * Q.size, dtype=np.uint8)
    kernels.bivariate_table_fill(Q.table, spec.G, Q.b_bit_table(), out)
    if spec.mu:
        out[0::Q.size][:] = Q.b_bit_table()[spec.mu, :]
    return boolfn.BooleanFunction(2 * Q.dim, out)


def bent_criterion(spec: SpreadBentSpec):
    """(ok, witness): G bijective and G(z) + b*z 2-to-1 for all b != 0."""
    spec = normalize_mu(spec)
    Q = spec.Q
    if np.unique(spec.G).size != Q.size:
        return False, ("G_not_bijective",)
    st = star_table(Q)
    for b in range(1, Q.size):
        counts = np.bincount(spec.G ^ st[b, :], minlength=Q.size)
        bad = np.nonzero((counts != 0) & (counts != 2))[0]
        if bad.size:
            return False, ("not_two_to_one", b, int(bad[0]))
    return True, None


def line_oval_bivariate(spec: SpreadBentSpec) -> BivariateLineOval:
    spec = normalize_mu(spec)
    ok, witness = bent_criterion(spec)
    if not ok:
        raise ValueError(f"not bent: criterion failed with witness {witness}")
    return _materialize_line_oval(spec.Q, 0, spec.G.copy())


def _materialize_line_oval(Q: Prequasifield, c: int,
                           offsets: np.ndarray) -> BivariateLineOval:
    st = star_table(Q)
    counts = np.zeros(Q.size * Q.size, dtype=np.int64)
    xs = np.arange(Q.size, dtype=np.int64)
    counts[c + Q.size * xs] += 1
    for z in range(Q.size):
        counts[xs + Q.size * (offsets[z] ^ st[:, z])] += 1
    bad = np.nonzero((counts != 0) & (counts != 2))[0]
    if bad.size:
        p = int(bad[0])
        raise ValueError(f"not a line oval: point ({p % Q.size}, {p // Q.size}) "
                         f"lies on {int(counts[p])} lines")
    e_table = (counts > 0).astype(np.uint8)
    assert int(e_table.sum()) == (Q.size * Q.size) // 2 + Q.size // 2
    return BivariateLineOval(Q.size, c, offsets, e_table)


# ---------------------------------------------------------------------------
# dual routes
# ---------------------------------------------------------------------------

def spec_from_line_oval(oval: BivariateLineOval, Q: Prequasifield) -> SpreadBentSpec:
    """Backward direction of the bent <-> line-oval correspondence.

    A line oval in A(Q^t) with vertical line x = c is first translated by
    (c, 0) so its vertical line is x = 0; the offsets of the remaining
    lines are then the G table of the corresponding spread-linear bent
    function.  Inverse of `line_oval_bivariate` (exact when c = 0)."""
    st = star_table(Q)
    return SpreadBentSpec(Q, oval.offsets ^ st[oval.c, :], 0)


def dual_walsh(spec: SpreadBentSpec) -> boolfn.BooleanFunction:
    """Walsh-sign dual of the mu-normalized function (all dual routes
    target the normalized form the incidence statements are phrased for)."""
    spec = normalize_mu(spec)
    return boolfn.dual(bent_bivariate(spec), walsh_masks(spec.Q))


def dual_product(spec: SpreadBentSpec) -> boolfn.BooleanFunction:
    """y^(q-1) prod_z (y*z + x + G(z))^(q-1) with the powers read as zero
    indicators: 0 iff y = 0 or x = G(z) + y*z for some z."""
    spec = normalize_mu(spec)
    ok, witness = bent_criterion(spec)
    if not ok:
        raise ValueError(f"not bent: criterion failed with witness {witness}")
    Q = spec.Q
    out = np.zeros(Q.size * Q.size, dtype=np.uint8)
    kernels.bivariate_product_dual(star_table(Q), spec.G, out)
    return boolfn.BooleanFunction(2 * Q.dim, out)


def dual_chi_swap(oval: BivariateLineOval) -> boolfn.BooleanFunction:
    """1 + chi_E(y, x): complement of the covered set, coordinates swapped."""
    size = oval.size
    t = oval.e_table.reshape(size, size)
    return boolfn.BooleanFunction(2 * (size.bit_length() - 1), (1 ^ t.T).ravel())


def dual_routes(spec: SpreadBentSpec) -> dict:
    """All three dual routes plus their exact agreement flags."""
    dw = dual_walsh(spec)
    dp = dual_product(spec)
    dc = dual_chi_swap(line_oval_bivariate(spec))
    return {"walsh": dw, "product": dp, "chi_swap": dc,
            "walsh_eq_product": dw == dp,
            "walsh_eq_chi_swap": dw == dc}


# ---------------------------------------------------------------------------
# collineation and shift actions
# ---------------------------------------------------------------------------

def action_linear_shift(spec: SpreadBentSpec, u: int, v: int):
    """f + tr(ux + vy); the line oval translates by (v, u)."""
    spec = normalize_mu(spec)
    Q = spec.Q
    f = bent_bivariate(spec)
    mask = Q.b_mask(u) | (Q.b_mask(v) << Q.dim)
    f_uv = boolfn.add_affine(f, mask)
    st = star_table(Q)
    oval_uv = _materialize_line_oval(Q, v, spec.G ^ u ^ st[v, :])
    return f_uv, oval_uv


def action_rho(spec: SpreadBentSpec, c: int) -> SpreadBentSpec:
    """The collineation (x, y) -> (x, y + x o c) replaces G(z) by G(z + c)."""
    spec = normalize_mu(spec)
    zs = np.arange(spec.Q.size)
    return SpreadBentSpec(spec.Q, spec.G[zs ^ c].copy(), 0)


def normalize_g0(spec: SpreadBentSpec) -> SpreadBentSpec:
    """EA-normalization G(0) = 0, reached via c = G^(-1)(0)."""
    spec = normalize_mu(spec)
    zeros = np.nonzero(spec.G == 0)[0]
    if zeros.size != 1:
        raise ValueError("G must be a bijection")
    return action_rho(spec, int(zeros[0]))


def is_automorphism(Q: Prequasifield, phi: np.ndarray) -> bool:
    """phi a GF(2)-linear bijection with phi(x o y) = phi(x) o phi(y)."""
    if np.unique(phi).size != Q.size or phi[0] != 0:
        return False
    images = [int(phi[1 << i]) for i in range(Q.dim)]
    if not np.array_equal(kernels.linear_map_table(images, Q.dim), phi):
        return False
    return bool(np.array_equal(phi[Q.table], Q.table[phi][:, phi]))


def action_aut(spec: SpreadBentSpec, phi: np.ndarray):
    """The collineation (x,y) -> (phi(x), phi(y)) for phi in Aut(Q).

    Returns (transformed function, transformed covered set) where the
    covered set is E(O) mapped through (phi^*)^(-1) per coordinate."""
    spec = normalize_mu(spec)
    Q = spec.Q
    if not is_automorphism(Q, phi):
        raise ValueError("phi is not an automorphism of Q")
    f = bent_bivariate(spec)
    inv_phi = np.zeros(Q.size, dtype=np.int64)
    inv_phi[phi] = np.arange(Q.size)
    xs = np.arange(Q.size)
    idx = inv_phi[xs][None, :] + Q.size * inv_phi[xs][:, None]
    f_phi = boolfn.BooleanFunction(f.k, f.table[idx.ravel()])

    phi_rows = [int(phi[1 << i]) for i in range(Q.dim)]
    star_rows = spread_mod.adjoint(phi_rows, Q)
    phi_star = kernels.linear_map_table(star_rows, Q.dim)
    inv_star = np.zeros(Q.size, dtype=np.int64)
    inv_star[phi_star] = np.arange(Q.size)
    e = line_oval_bivariate(spec).e_table.reshape(Q.size, Q.size)
    e_phi = np.zeros_like(e)
    e_phi[np.ix_(inv_star[xs], inv_star[xs])] = e[np.ix_(xs, xs)]
    return f_phi, e_phi.ravel()


def action_gl2(spec: SpreadBentSpec, mat: tuple[int, int, int, int],
               frob: int = 0):
    """Semilinear plane map psi = sigma^frob followed by the matrix
    [[alpha, beta], [gamma, delta]] acting on row vectors (x, y); needs a
    Desarguesian (field) spread.

    Returns (f o psi^(-1), E') where the covered set of the dual's line
    oval transforms through psi composed with the scalar 1/det, i.e.
    E' = sigma^frob(E) . M / det: decomposing psi into a unimodular part,
    a scalar lambda*I (whose induced action on the dual side is division
    by lambda) and the field automorphism handles a general determinant.
    """
    spec = normalize_mu(spec)
    Q = spec.Q
    if Q.kind != "field":
        raise ValueError("GL(2,q)<sigma> acts on the Desarguesian spread")
    F = Q.field
    alpha, beta, gamma, delta = mat
    det = F.mul(alpha, delta) ^ F.mul(beta, gamma)
    if det == 0:
        raise ValueError("singular matrix")
    inv_det = F.inv(det)

    def frob_pow(x: int) -> int:
        for _ in range(frob % F.deg):
            x = F.sqr(x)
        return x

    def psi(x: int, y: int, scale: int) -> tuple[int, int]:
        x, y = frob_pow(x), frob_pow(y)
        return (F.mul(scale, F.mul(x, alpha) ^ F.mul(y, gamma)),
                F.mul(scale, F.mul(x, beta) ^ F.mul(y, delta)))

    size = Q.size
    perm = np.zeros(size * size, dtype=np.int64)       # the plane map psi
    perm_e = np.zeros(size * size, dtype=np.int64)     # psi scaled by 1/det
    for x in range(size):
        for y in range(size):
            nx, ny = psi(x, y, 1)
            perm[x + size * y] = nx + size * ny
            sx, sy = F.mul(nx, inv_det), F.mul(ny, inv_det)
            perm_e[x + size * y] = sx + size * sy

    f = bent_bivariate(spec)
    f_psi_table = np.zeros_like(f.table)
    f_psi_table[perm] = f.table          # f'(psi(p)) = f(p)
    f_psi = boolfn.BooleanFunction(f.k, f_psi_table)

    e = line_oval_bivariate(spec).e_table
    e_psi = np.zeros_like(e)
    e_psi[perm_e] = e
    return f_psi, e_psi


# ---------------------------------------------------------------------------
# report helpers
# ---------------------------------------------------------------------------

def analyze(spec: SpreadBentSpec) -> dict:
    """Verdicts and invariants used by the CLI report."""
    spec0 = normalize_mu(spec)
    f = bent_bivariate(spec0)
    bent = boolfn.is_bent(f)
    crit, witness = bent_criterion(spec0)
    out = {
        "bent": bent,
        "criterion": crit,
        "criterion_witness": witness,
        "verdicts_agree": bent == crit,
    }
    if bent:
        routes = dual_routes(spec0)
        oval = line_oval_bivariate(spec0)
        out["dual_routes_agree"] = bool(routes["walsh_eq_product"]
                                        and routes["walsh_eq_chi_swap"])
        out["lineoval_ok"] = True
        out["e_size"] = oval.e_size()
        out["degree"] = boolfn.degree(f)
        assert out["degree"] <= spec.Q.dim, "bent degree exceeds k/2"
        if out["degree"] <= 2:
            out["quadratic_rank"] = boolfn.quadratic_rank(f)
    else:
        try:
            line_oval_bivariate(spec0)
            out["lineoval_ok"] = True
        except ValueError:
            out["lineoval_ok"] = False
        out["verdicts_agree"] = out["verdicts_agree"] and not out["lineoval_ok"]
    return out
