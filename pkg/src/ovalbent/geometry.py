"""Ovals, line ovals and hyperovals in the plane coordinatized by K.

Points of AG(2,q) are elements of K = GF(2^2m); lines are the sets
L(u, mu) = {x : T(u x) + mu = 0} with u on the unit circle and mu in F.
The projective closure adds one point at infinity per parallel class,
tagged by the circle index of u.

`verify_oval` is the brute-force collinearity oracle of the package:
everything faster has to agree with it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import boolfn, kernels
from .gf import FieldParams


class AffineLineK(NamedTuple):
    u: int   # unit-circle element of K, the normal direction of the line
    mu: int  # F-index; the line is {x : T(u x) = mu}

    def contains(self, x: int, params: FieldParams) -> bool:
        return params.trace_rel(params.K.mul(self.u, x)) == self.mu


@dataclass(frozen=True)
class LineOval:
    """q+1 mutually non-parallel lines covering each point 0 or 2 times."""
    lines: tuple[AffineLineK, ...]
    e_set: frozenset[int]
    point_sets: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class Oval:
    """q+1 (oval) or q+2 (hyperoval) points, no three collinear."""
    points: frozenset[int]
    infinite: frozenset[int]  # circle indices of points at infinity
    nucleus: int | None = None


# ---------------------------------------------------------------------------
# incidence machinery
# ---------------------------------------------------------------------------

def line_points(line: AffineLineK, params: FieldParams) -> frozenset[int]:
    """The q points of L(u, mu), materialized."""
    basis = params.line_trace_basis()[params.s_index[line.u]]
    tvals = kernels.linear_map_table(basis, params.n)
    return frozenset(np.nonzero(tvals == line.mu)[0].tolist())


def line_cover_counts(lines: Iterable[AffineLineK], params: FieldParams) -> np.ndarray:
    """For every point of K, how many of the given lines pass through it."""
    lines = list(lines)
    basis = params.line_trace_basis()
    rows = np.array([basis[params.s_index[ln.u]] for ln in lines], dtype=np.int64)
    gvals = np.array([ln.mu for ln in lines], dtype=np.int64)
    return kernels.line_cover_counts(rows, params.n, gvals)


def verify_line_oval(lines: Iterable[AffineLineK], params: FieldParams):
    """Strong line-oval check: every point of K on 0 or 2 of the lines.

    This is the form whose projective closure has the line at infinity as
    nucleus.  Returns (ok, witness_point_or_None, counts).
    """
    counts = line_cover_counts(lines, params)
    bad = np.nonzero((counts != 0) & (counts != 2))[0]
    if bad.size:
        return False, int(bad[0]), counts
    return True, None, counts


def verify_no_three_concurrent(lines: Iterable[AffineLineK], params: FieldParams):
    """Projective line-oval check: no three lines share a point, where
    three mutually parallel lines share their point at infinity."""
    lines = list(lines)
    if len(set(lines)) != len(lines):
        raise ValueError("lines must be distinct")
    counts = line_cover_counts(lines, params)
    bad = np.nonzero(counts >= 3)[0]
    if bad.size:
        return False, ("affine", int(bad[0]))
    per_u: dict[int, int] = {}
    for ln in lines:
        per_u[ln.u] = per_u.get(ln.u, 0) + 1
        if per_u[ln.u] >= 3:
            return False, ("infinite", params.s_index[ln.u])
    return True, None


def direction_tag(d: int, params: FieldParams) -> int:
    """Circle index of the point at infinity of lines with direction d."""
    if d == 0:
        raise ValueError("zero direction")
    u = params.polar_decompose(d).u
    return params.s_index[params.conjugate(u)]


# ---------------------------------------------------------------------------
# collinearity oracle
# ---------------------------------------------------------------------------

def verify_oval(points: Iterable[int], params: FieldParams,
                infinite: Iterable[int] = ()):
    """Exhaustive check that no three of the given projective points are
    collinear.  Points at infinity are circle-index tags.

    Returns (ok, witness) where the witness lists the offending triple,
    affine points as ints and infinite ones as ("inf", tag).  The witness
    is the lexicographically smallest failure in (affine, infinite) order.
    """
    pts = sorted(points)
    inf = sorted(infinite)
    if len(set(pts)) != len(pts) or len(set(inf)) != len(inf):
        raise ValueError("points must be distinct")
    total = len(pts) + len(inf)
    if total not in (params.q + 1, params.q + 2):
        raise ValueError(f"expected q+1 or q+2 points, got {total}")

    arr = np.array(pts, dtype=np.int64)
    i, j, k = kernels.collinear_scan(arr, params.conj_table(),
                                     params.K.log, params.K.exp, params.K.order)
    if i >= 0:
        return False, (pts[i], pts[j], pts[k])
    # two affine + one infinite: collinear iff the tag matches the direction
    for t in inf:
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                if direction_tag(pts[a] ^ pts[b], params) == t:
                    return False, (pts[a], pts[b], ("inf", t))
    # three infinite points always share the line at infinity
    if len(inf) >= 3:
        return False, (("inf", inf[0]), ("inf", inf[1]), ("inf", inf[2]))
    return True, None


def verify_nucleus_zero(points: Iterable[int], params: FieldParams):
    """Every line through 0 meets the point set exactly once, i.e. the
    polar units of the points exhaust the circle."""
    pts = list(points)
    if any(p == 0 for p in pts):
        return False, 0
    units = [params.polar_decompose(p).u for p in pts]
    if len(set(units)) != len(units) or len(units) != params.q + 1:
        seen: dict[int, int] = {}
        for p, u in zip(pts, units):
            if u in seen:
                return False, (seen[u], p)
            seen[u] = p
        return False, None
    return True, None


# ---------------------------------------------------------------------------
# point/line duality (an oval <-> the lines T(p x) = 1)
# ---------------------------------------------------------------------------

def dual_points_to_lines(points: Iterable[int], params: FieldParams) -> list[AffineLineK]:
    """Lines {x : T(p x) = 1}, one per point; points must be nonzero.

    With p = lam * u this is L(u, 1/lam).  The point set is an oval iff
    the image passes `verify_no_three_concurrent`.
    """
    out = []
    for p in points:
        if p == 0:
            raise ValueError("duality requires nonzero points")
        lam, u = params.polar_decompose(p)
        out.append(AffineLineK(u, params.F.inv(lam)))
    return out


def dual_lines_to_points(lines: Iterable[AffineLineK], params: FieldParams) -> list[int]:
    """Inverse of `dual_points_to_lines`: L(u, mu) -> u / mu, mu != 0."""
    out = []
    for ln in lines:
        if ln.mu == 0:
            raise ValueError("a line through 0 has no dual point")
        out.append(params.K.mul(ln.u, int(params.embed[params.F.inv(ln.mu)])))
    return out


# ---------------------------------------------------------------------------
# ovals from circle maps, rho-polynomials, catalogs
# ---------------------------------------------------------------------------

def oval_from_g(g, params: FieldParams) -> Oval:
    """Points u/g(u) (projective closure of the dual of the line oval).

    Requires g to come from a bent function; by the line-oval law this is
    exactly the 0-or-2 cover property of the lines L(u, g(u)), which is
    what gets checked.  Zeros of g contribute points at infinity.
    """
    from .niho import UnitCircleMap  # local import to keep layering acyclic
    assert isinstance(g, UnitCircleMap)
    lines = [AffineLineK(int(u), int(gv)) for u, gv in zip(params.S, g.values)]
    ok, witness, _ = verify_line_oval(lines, params)
    if not ok:
        raise ValueError(f"g is not bent: point {witness} lies on an odd "
                         f"number of lines L(u, g(u))")
    points, infinite = set(), set()
    for j, gv in enumerate(g.values):
        if gv == 0:
            infinite.add(j)
        else:
            points.add(params.K.mul(int(params.S[j]),
                                    params.K.inv(int(params.embed[gv]))))
    return Oval(frozenset(points), frozenset(infinite), nucleus=0)


def rho_from_g(g, params: FieldParams) -> np.ndarray:
    """rho(u) = 1/g(u); requires g nowhere zero on the circle."""
    if np.any(g.values == 0):
        raise ValueError("rho-polynomial requires g nonzero on the circle")
    return np.array([params.F.inv(int(v)) for v in g.values], dtype=np.int64)


def g_from_rho(rho: np.ndarray, params: FieldParams):
    from .niho import UnitCircleMap
    if np.any(rho == 0):
        raise ValueError("rho-polynomials are nowhere zero")
    vals = np.array([params.F.inv(int(v)) for v in rho], dtype=np.int64)
    return UnitCircleMap(params.m, vals)


def rho_subiaco(params: FieldParams) -> np.ndarray:
    """rho(x) = x^5 / (x^10 + x^6 + x^5 + x^4 + 1) on the unit circle."""
    K, q1 = params.K, params.q + 1
    out = np.zeros(q1, dtype=np.int64)
    for j in range(q1):
        u5 = int(params.S[(5 * j) % q1])
        den = (int(params.S[(10 * j) % q1]) ^ int(params.S[(6 * j) % q1])
               ^ u5 ^ int(params.S[(4 * j) % q1]) ^ 1)
        val = K.mul(u5, K.inv(den))
        out[j] = params.project[val]
    return out


def rho_adelaide(params: FieldParams) -> np.ndarray:
    """rho(x) = x (x^(1/3) + 1)^3 / (x + 1)^3 on the circle, rho(1) = 1."""
    if params.m % 2 != 0:
        raise ValueError("the Adelaide catalog needs m even")
    K, q1 = params.K, params.q + 1
    inv3 = pow(3, -1, q1)
    out = np.zeros(q1, dtype=np.int64)
    out[0] = 1
    for j in range(1, q1):
        u = int(params.S[j])
        cube_root = int(params.S[(j * inv3) % q1])
        num = K.mul(u, K.pow(cube_root ^ 1, 3))
        den = K.pow(u ^ 1, 3)
        out[j] = params.project[K.mul(num, K.inv(den))]
    return out


def fisher_schmidt_points(params: FieldParams) -> set[int]:
    """The point set {u + u^3 + u^-3 : u in S} (hyperoval with 0 added)."""
    q1 = params.q + 1
    return {int(params.S[j]) ^ int(params.S[(3 * j) % q1])
            ^ int(params.S[(-3 * j) % q1]) for j in range(q1)}


CATALOG_NAMES = ("conic_like_S", "subiaco", "adelaide", "fisher_schmidt")


def catalog_oval(name: str, params: FieldParams) -> Oval:
    """Named hyperovals as point sets (all contain the point 0)."""
    if name == "conic_like_S":
        pts = {int(u) for u in params.S}
    elif name == "subiaco":
        rho = rho_subiaco(params)
        pts = {params.K.mul(int(params.S[j]), int(params.embed[rho[j]]))
               for j in range(params.q + 1)}
    elif name == "adelaide":
        rho = rho_adelaide(params)
        pts = {params.K.mul(int(params.S[j]), int(params.embed[rho[j]]))
               for j in range(params.q + 1)}
    elif name == "fisher_schmidt":
        pts = fisher_schmidt_points(params)
    else:
        raise ValueError(f"unknown catalog entry {name!r}; "
                         f"have {CATALOG_NAMES}")
    if len(pts) != params.q + 1 or 0 in pts:
        raise AssertionError(f"catalog {name} did not produce q+1 nonzero points")
    return Oval(frozenset(pts | {0}), frozenset(), nucleus=None)


# ---------------------------------------------------------------------------
# the oval -> bent function map
# ---------------------------------------------------------------------------

def bent_from_oval(oval: Oval, params: FieldParams) -> boolfn.BooleanFunction:
    """f(x) = tr(x / v) on each ray vF, for an oval with nucleus 0.

    Evaluates both the pointwise rule and the explicit polynomial form
    and asserts they agree table-exactly; returns the table.
    """
    if oval.infinite:
        raise ValueError("all points must be affine")
    if oval.nucleus != 0:
        raise ValueError("the construction needs the nucleus at 0")
    pts = sorted(oval.points)
    ok, _ = verify_oval(pts, params)
    if not ok:
        raise ValueError("point set is not an oval")
    ok, wit = verify_nucleus_zero(pts, params)
    if not ok:
        raise ValueError(f"0 is not the nucleus: witness {wit}")

    K, F = params.K, params.F
    table = np.zeros(K.size, dtype=np.uint8)
    trf = F.trace_table()
    lams = np.arange(1, params.q, dtype=np.int64)
    for v in pts:
        rad, u = params.polar_decompose(v)
        xs = K.mul_vec(params.embed[lams], u)
        table[xs] = trf[F.mul_vec(lams, F.inv(rad))]

    # explicit polynomial form: sum over v of
    #   [(x^(q^2-q) - v^(q^2-q))^(q^2-1) + 1] * sum_j (x/v)^(2^j)
    pw = K.pow_table(params.q * params.q - params.q)
    frob = np.arange(K.size, dtype=np.int64)
    acc = frob.copy()
    sq = K.pow_table(2)
    for _ in range(params.m - 1):
        frob = sq[frob]
        acc = acc ^ frob
    xs_all = np.arange(K.size, dtype=np.int64)
    poly = np.zeros(K.size, dtype=np.int64)
    for v in pts:
        ratios = K.mul_vec(xs_all, K.inv(v))
        poly ^= np.where(pw == pw[v], acc[ratios], 0)
    assert np.all(poly <= 1), "polynomial form must produce bits"
    assert np.array_equal(poly.astype(np.uint8), table), \
        "polynomial form must match the pointwise table"
    return boolfn.BooleanFunction(params.n, table)


# ---------------------------------------------------------------------------
# JSON formats
# ---------------------------------------------------------------------------

def oval_to_json(oval: Oval, params: FieldParams) -> str:
    return json.dumps({
        "kind": "oval",
        "m": params.m,
        "points": sorted(oval.points),
        "infinite": sorted(oval.infinite),
        "nucleus": oval.nucleus,
    }, sort_keys=True)


def oval_from_json(text: str) -> tuple[int, Oval]:
    d = json.loads(text)
    if d.get("kind") != "oval":
        raise ValueError("not an oval JSON document")
    return d["m"], Oval(frozenset(d["points"]), frozenset(d["infinite"]),
                        d.get("nucleus"))


def line_oval_to_json(lines: Iterable[AffineLineK], params: FieldParams) -> str:
    return json.dumps({
        "kind": "line_oval",
        "m": params.m,
        "lines": sorted([params.s_index[ln.u], ln.mu] for ln in lines),
    }, sort_keys=True)


def line_oval_from_json(text: str, params: FieldParams) -> list[AffineLineK]:
    d = json.loads(text)
    if d.get("kind") != "line_oval":
        raise ValueError("not a line-oval JSON document")
    if d["m"] != params.m:
        raise ValueError("field size mismatch")
    return [AffineLineK(int(params.S[j]), mu) for j, mu in d["lines"]]
