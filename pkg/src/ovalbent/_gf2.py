"""GF(2) linear algebra on int-mask rows (bit j of row i = entry [i][j])."""

from __future__ import annotations


def identity(n: int) -> list[int]:
    return [1 << i for i in range(n)]


def apply(mat: list[int], x: int) -> int:
    """Row-vector action x -> x * mat."""
    acc = 0
    i = 0
    while x:
        if x & 1:
            acc ^= mat[i]
        x >>= 1
        i += 1
    return acc


def matmul(a: list[int], b: list[int]) -> list[int]:
    """Composition: apply(matmul(a, b), x) == apply(b, apply(a, x))."""
    return [apply(b, row) for row in a]


def transpose(rows: list[int], ncols: int) -> list[int]:
    out = [0] * ncols
    for i, row in enumerate(rows):
        for j in range(ncols):
            if (row >> j) & 1:
                out[j] |= 1 << i
    return out


def rank(rows: list[int]) -> int:
    pivots: list[int] = []
    for row in rows:
        for p in pivots:
            row = min(row, row ^ p)
        if row:
            pivots.append(row)
    return len(pivots)


def inv(rows: list[int], n: int) -> list[int]:
    """Inverse of an n x n matrix; raises ValueError if singular."""
    aug = [rows[i] | (1 << (n + i)) for i in range(n)]
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if (aug[i] >> col) & 1), None)
        if piv is None:
            raise ValueError("singular matrix over GF(2)")
        aug[r], aug[piv] = aug[piv], aug[r]
        for i in range(n):
            if i != r and (aug[i] >> col) & 1:
                aug[i] ^= aug[r]
        r += 1
    mask = (1 << n) - 1
    return [row >> n & mask for row in aug]
