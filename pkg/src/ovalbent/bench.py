"""Benchmark of the JIT kernels against their pure-numpy fallbacks.

Runs each hot kernel on a representative workload under both backends
and prints a timing table.  Numba timings exclude the first (compiling)
call.
"""

from __future__ import annotations

import time

import numpy as np

from . import kernels, niho, spread, spreadbent
from .gf import field_make
from .niho import NihoSpec


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _workloads(walsh_bits: int):
    rng = np.random.default_rng(0)
    w0 = rng.integers(-1, 2, size=1 << walsh_bits, dtype=np.int64)
    t0 = rng.integers(0, 2, size=1 << walsh_bits, dtype=np.uint8)

    p6 = field_make(6)
    g6 = niho.g_of_spec(NihoSpec("binomial_3", 6), p6)
    rows6 = p6.line_trace_basis()

    Ql = spread.luneburg(3)
    Gl = spread.sqrt_diag_g_table(Ql)
    st = spreadbent.star_table(Ql)
    bbit = Ql.b_bit_table()

    pts = np.array(sorted(geometry_points(p6)), dtype=np.int64)

    def walsh():
        kernels.walsh_inplace(w0.copy())

    def mobius():
        kernels.mobius_inplace(t0.copy())

    def niho_fill():
        out = np.zeros(p6.K.size, dtype=np.uint8)
        kernels.niho_table_fill(p6.S, g6.values, p6.embed,
                                p6.K.log, p6.K.exp, p6.K.order,
                                p6.F.log, p6.F.exp, p6.F.order,
                                p6.F.trace_table(), out)

    def product_dual():
        out = np.zeros(p6.K.size, dtype=np.uint8)
        kernels.univariate_product_dual(p6.S, p6.embed[g6.values],
                                        p6.conj_table(), p6.K.log, p6.K.exp,
                                        p6.K.order, out)

    def cover():
        kernels.line_cover_counts(rows6, p6.n, g6.values)

    def biv_fill():
        out = np.zeros(Ql.size * Ql.size, dtype=np.uint8)
        kernels.bivariate_table_fill(Ql.table, Gl, bbit, out)

    def biv_dual():
        out = np.zeros(Ql.size * Ql.size, dtype=np.uint8)
        kernels.bivariate_product_dual(st, Gl, out)

    def collinear():
        kernels.collinear_scan(pts, p6.conj_table(), p6.K.log, p6.K.exp,
                               p6.K.order)

    return [
        (f"walsh_inplace (2^{walsh_bits})", walsh),
        (f"mobius_inplace (2^{walsh_bits})", mobius),
        ("niho_table_fill (m=6)", niho_fill),
        ("univariate_product_dual (m=6)", product_dual),
        ("line_cover_counts (m=6)", cover),
        ("bivariate_table_fill (luneburg m=3)", biv_fill),
        ("bivariate_product_dual (luneburg m=3)", biv_dual),
        ("collinear_scan (m=6 hyperoval)", collinear),
    ]


def geometry_points(params):
    from . import geometry
    return geometry.fisher_schmidt_points(params) | {0}


def run(walsh_bits: int = 18, repeats: int = 3) -> list[dict]:
    rows = []
    prev = kernels.active_backend()
    try:
        for name, fn in _workloads(walsh_bits):
            entry = {"kernel": name}
            for backend in kernels.backends():
                kernels.set_backend(backend)
                if backend == "numba":
                    fn()  # compile outside the timed region
                entry[backend] = _time(fn, repeats)
            rows.append(entry)
    finally:
        kernels.set_backend(prev)
    return rows


def format_table(rows: list[dict]) -> str:
    have_numba = any("numba" in r for r in rows)
    out = []
    head = f"{'kernel':<38} {'numpy (ms)':>12}"
    if have_numba:
        head += f" {'numba (ms)':>12} {'speedup':>9}"
    out.append(head)
    out.append("-" * len(head))
    for r in rows:
        line = f"{r['kernel']:<38} {r['numpy'] * 1e3:>12.3f}"
        if have_numba:
            line += f" {r['numba'] * 1e3:>12.3f} {r['numpy'] / r['numba']:>8.1f}x"
        out.append(line)
    if not have_numba:
        out.append("(numba unavailable or disabled; numpy path only)")
    return "\n".join(out)
