"""Linear algebra over the prime field F_p.

A deliberately separate code path from the integer routines: the mod-p
re-runs of the pairing grids use only what is here.
"""

from __future__ import annotations

from typing import Sequence


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def rref(rows: Sequence[Sequence[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon basis of the row space mod p, with pivot columns."""
    M = [[x % p for x in r] for r in rows]
    M = [r for r in M if any(r)]
    piv = []
    r = 0
    for c in range(ncols):
        sel = next((i for i in range(r, len(M)) if M[i][c]), None)
        if sel is None:
            continue
        M[r], M[sel] = M[sel], M[r]
        inv = pow(M[r][c], p - 2, p)
        M[r] = [(x * inv) % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                row = M[r]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], row)]
        piv.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], piv


def rank(rows: Sequence[Sequence[int]], ncols: int, p: int) -> int:
    return len(rref(rows, ncols, p)[0])


def nullspace(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {x : A x^T = 0} over F_p."""
    R, piv = rref(rows, ncols, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    out = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for i, c in enumerate(piv):
            x[c] = (-R[i][f]) % p
        out.append(x)
    return out


def left_nullspace(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {y : y A = 0} over F_p."""
    m = len(rows)
    cols = [[rows[i][j] for i in range(m)] for j in range(ncols)]
    return nullspace(cols, m, p)


def coords(basis: Sequence[Sequence[int]], pivots: Sequence[int], v: Sequence[int], p: int) -> list[int] | None:
    """Coordinates of v in an RREF basis, or None if v is outside the span."""
    w = [x % p for x in v]
    out = []
    for row, c in zip(basis, pivots):
        q = w[c]
        out.append(q)
        if q:
            w = [(a - q * b) % p for a, b in zip(w, row)]
    if any(w):
        return None
    return out
