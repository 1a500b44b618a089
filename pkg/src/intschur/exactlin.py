"""Exact linear algebra over the integers.

Vectors are rows and matrices are lists of rows of Python ints, so every
entry is arbitrary precision.  Lattices are free submodules of Z^N stored
by a basis in row Hermite normal form, which makes equality of lattices a
plain comparison of bases.

Elimination always pivots on the entry of smallest absolute value and
reduces by floor division (a Euclid step per pass), which keeps entry
growth under control on the small dense inputs this package produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import NamedTuple, Sequence

Matrix = list[list[int]]
Vector = list[int]


class ExactLinError(ValueError):
    pass


@dataclass(frozen=True)
class IntegerMatrix:
    """A rows x cols integer matrix; 0 x n and n x 0 shapes are legal."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ExactLinError("negative dimension")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ExactLinError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ExactLinError("cols must be given for a matrix without rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    def tolist(self) -> Matrix:
        return [list(r) for r in self.entries]


def _rows(A, cols: int | None = None) -> tuple[Matrix, int]:
    if isinstance(A, IntegerMatrix):
        return A.tolist(), A.cols
    if isinstance(A, Lattice):
        return [list(r) for r in A.basis], A.ambient_rank
    rows = [[int(x) for x in r] for r in A]
    if cols is None:
        if not rows:
            raise ExactLinError("cols must be given for a matrix without rows")
        cols = len(rows[0])
    if any(len(r) != cols for r in rows):
        raise ExactLinError("ragged matrix")
    return rows, cols


# ---------------------------------------------------------------- basic ops

def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def transpose(A: Sequence[Sequence[int]], cols: int | None = None) -> Matrix:
    rows, c = _rows(A, cols)
    return [[rows[i][j] for i in range(len(rows))] for j in range(c)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], inner: int | None = None,
           cols: int | None = None) -> Matrix:
    """Product A*B.  `cols` is needed only when B has no rows."""
    if cols is None:
        cols = len(B[0]) if len(B) else 0
    out = []
    for a in A:
        row = [0] * cols
        for k, x in enumerate(a):
            if x:
                b = B[k]
                for j in range(cols):
                    y = b[j]
                    if y:
                        row[j] += x * y
        out.append(row)
    return out


def vecmat(v: Sequence[int], B: Sequence[Sequence[int]], cols: int) -> Vector:
    out = [0] * cols
    for k, x in enumerate(v):
        if x:
            b = B[k]
            for j in range(cols):
                y = b[j]
                if y:
                    out[j] += x * y
    return out


def is_zero(A: Sequence[Sequence[int]]) -> bool:
    return all(x == 0 for r in A for x in r)


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    M = [list(r) for r in A]
    n = len(M)
    if n == 0:
        return 1
    if any(len(r) != n for r in M):
        raise ExactLinError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def _axpy(dst: Vector, q: int, src: Vector) -> None:
    # dst -= q * src, in place
    for j, y in enumerate(src):
        if y:
            dst[j] -= q * y


# ------------------------------------------------------------------ HNF

def _hnf_inplace(H: Matrix, ncols: int, U: Matrix | None) -> list[int]:
    """Row-reduce H in place to Hermite normal form; returns pivot columns."""
    m = len(H)
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            if p != r:
                H[p], H[r] = H[r], H[p]
                if U is not None:
                    U[p], U[r] = U[r], U[p]
            pv = H[r][c]
            clean = True
            for i in range(r + 1, m):
                x = H[i][c]
                if x:
                    q = x // pv
                    _axpy(H[i], q, H[r])
                    if U is not None:
                        _axpy(U[i], q, U[r])
                    if H[i][c]:
                        clean = False
            if clean:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            if U is not None:
                U[r] = [-x for x in U[r]]
        pv = H[r][c]
        for i in range(r):
            x = H[i][c]
            if x < 0 or x >= pv:
                q = x // pv
                _axpy(H[i], q, H[r])
                if U is not None:
                    _axpy(U[i], q, U[r])
        pivots.append(c)
        r += 1
    return pivots


def hnf(A, cols: int | None = None) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form.

    Returns (H, U) with U unimodular and U*A = H.  Pivots are positive and
    entries above each pivot lie in [0, pivot).  Zero rows sit at the bottom.
    """
    rows, c = _rows(A, cols)
    H = [r[:] for r in rows]
    U = identity(len(H))
    _hnf_inplace(H, c, U)
    return H, U


def hnf_basis(A, cols: int | None = None) -> Matrix:
    """Nonzero rows of the HNF of A (a canonical basis of the row lattice)."""
    rows, c = _rows(A, cols)
    H = [r[:] for r in rows if any(r)]
    piv = _hnf_inplace(H, c, None)
    return H[:len(piv)]


def _pivot_cols(H: Matrix) -> list[int]:
    out = []
    for r in H:
        out.append(next(j for j, x in enumerate(r) if x))
    return out


# ------------------------------------------------------------------ lattices

@dataclass(frozen=True)
class Lattice:
    """A free submodule of Z^ambient_rank with basis rows in HNF."""

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, rows, ambient_rank: int | None = None) -> "Lattice":
        rows, c = _rows(rows, ambient_rank)
        return cls(c, tuple(tuple(r) for r in hnf_basis(rows, c)))

    @classmethod
    def zero(cls, n: int) -> "Lattice":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Lattice":
        return cls(n, tuple(tuple(r) for r in identity(n)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def rows(self) -> Matrix:
        return [list(r) for r in self.basis]

    def coordinates(self, v: Sequence[int]) -> Vector | None:
        """Coefficients of v in the basis, or None when v is not in the lattice."""
        return _hnf_coords(self.basis, self.pivots, v)

    @cached_property
    def pivots(self) -> list[int]:
        return _pivot_cols([list(r) for r in self.basis])

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains(self, other: "Lattice") -> bool:
        return all(self.coordinates(r) is not None for r in other.basis)

    def __add__(self, other: "Lattice") -> "Lattice":
        if other.ambient_rank != self.ambient_rank:
            raise ExactLinError("ambient mismatch")
        return Lattice.span(list(self.basis) + list(other.basis), self.ambient_rank)


def _hnf_coords(basis, pivots, v) -> Vector | None:
    w = list(v)
    out = []
    for row, p in zip(basis, pivots):
        x = w[p]
        if x:
            q, rem = divmod(x, row[p])
            if rem:
                return None
            _axpy(w, q, row)
        else:
            q = 0
        out.append(q)
    if any(w):
        return None
    return out


class HNFSolver:
    """Reusable coordinate map for a fixed HNF basis."""

    def __init__(self, basis: Sequence[Sequence[int]]):
        self.basis = [list(r) for r in basis]
        self.pivots = _pivot_cols(self.basis)

    def coords(self, v: Sequence[int]) -> Vector | None:
        return _hnf_coords(self.basis, self.pivots, v)

    def coords_or_raise(self, v: Sequence[int]) -> Vector:
        c = _hnf_coords(self.basis, self.pivots, v)
        if c is None:
            raise ExactLinError("vector is not in the lattice")
        return c


# ------------------------------------------------------------------ kernels

def _kernel_rows(rows: Matrix, ncols: int) -> Matrix:
    """Integer kernel {x : A x^T = 0}, processed one equation at a time.

    K holds a basis of the kernel of the equations seen so far as sparse
    dict rows; each new equation is resolved by a Euclid pass on the values
    it takes on K, and the single surviving nonzero row is dropped.
    """
    K: list[dict[int, int]] = [{j: 1} for j in range(ncols)]
    for a in rows:
        supp = [(j, x) for j, x in enumerate(a) if x]
        if not supp:
            continue
        vals = []
        for k in K:
            s = 0
            if len(k) < len(supp):
                for j, y in k.items():
                    x = a[j]
                    if x:
                        s += x * y
            else:
                for j, x in supp:
                    y = k.get(j)
                    if y:
                        s += x * y
            vals.append(s)
        live = [i for i, s in enumerate(vals) if s]
        if not live:
            continue
        while len(live) > 1:
            p = min(live, key=lambda i: abs(vals[i]))
            pv, kp = vals[p], K[p]
            nxt = [p]
            for i in live:
                if i == p:
                    continue
                q = vals[i] // pv
                ki = K[i]
                for j, y in kp.items():
                    z = ki.get(j, 0) - q * y
                    if z:
                        ki[j] = z
                    else:
                        ki.pop(j, None)
                vals[i] -= q * pv
                if vals[i]:
                    nxt.append(i)
            live = nxt
        K.pop(live[0])
    out = []
    for k in K:
        r = [0] * ncols
        for j, y in k.items():
            r[j] = y
        out.append(r)
    return out


def kernel_basis(A, cols: int | None = None) -> Lattice:
    """The lattice {x in Z^cols : A x^T = 0}; integer kernels are saturated."""
    rows, c = _rows(A, cols)
    return Lattice.span(_kernel_rows(rows, c), c)


def left_kernel(A, cols: int | None = None) -> Lattice:
    """The lattice {y : y A = 0} of relations among the rows of A."""
    rows, c = _rows(A, cols)
    return kernel_basis(transpose(rows, c), len(rows))


def saturate(L: Lattice) -> Lattice:
    """{x : m x in L for some m > 0}, as the double orthogonal complement."""
    if L.rank == 0:
        return L
    perp = _kernel_rows(L.rows(), L.ambient_rank)
    return Lattice.span(_kernel_rows(perp, L.ambient_rank), L.ambient_rank)


def rank_q(A, cols: int | None = None) -> int:
    rows, c = _rows(A, cols)
    return len(hnf_basis(rows, c))


# ------------------------------------------------------------------ SNF

class SmithDecomposition(NamedTuple):
    left: Matrix
    diag: list[int]
    right: Matrix


def _snf(A: Matrix, m: int, n: int, track_inverse: bool = False):
    M = [r[:] for r in A]
    L = identity(m)
    R = identity(n)
    Rinv = identity(n) if track_inverse else None

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]
        for r in R:
            r[i], r[j] = r[j], r[i]
        if Rinv is not None:
            Rinv[i], Rinv[j] = Rinv[j], Rinv[i]

    def col_axpy(dst, q, src):
        # column dst -= q * column src
        for r in M:
            r[dst] -= q * r[src]
        for r in R:
            r[dst] -= q * r[src]
        if Rinv is not None:
            # inverse update: row src += q * row dst
            a, b = Rinv[src], Rinv[dst]
            for j in range(n):
                if b[j]:
                    a[j] += q * b[j]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            pv = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = M[i][t]
                if x:
                    q = x // pv
                    _axpy(M[i], q, M[t])
                    _axpy(L[i], q, L[t])
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = M[t][j]
                if x:
                    col_axpy(j, x // pv, t)
                    if M[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, m):
                    if M[i][t] and (best is None or abs(M[i][t]) < best[0]):
                        best = (abs(M[i][t]), i, 'r')
                for j in range(t, n):
                    if M[t][j] and (best is None or abs(M[t][j]) < best[0]):
                        best = (abs(M[t][j]), j, 'c')
                if best[2] == 'r' and best[1] != t:
                    swap_rows(best[1], t)
                elif best[2] == 'c' and best[1] != t:
                    swap_cols(best[1], t)
                continue
            # pivot must divide the rest of the block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if M[i][j] % pv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad])]
            L[t] = [a + b for a, b in zip(L[t], L[bad])]
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            L[t] = [-x for x in L[t]]
        diag.append(M[t][t])
        t += 1
    diag.extend([0] * (min(m, n) - len(diag)))
    return L, diag, R, Rinv


def snf(A, cols: int | None = None) -> SmithDecomposition:
    """Smith normal form: left*A*right = diag(diag), left/right unimodular."""
    rows, c = _rows(A, cols)
    L, diag, R, _ = _snf(rows, len(rows), c)
    return SmithDecomposition(L, diag, R)


def smith_invariants(A, cols: int | None = None) -> list[int]:
    rows, c = _rows(A, cols)
    rows = hnf_basis(rows, c)
    if not rows:
        return []
    return [d for d in _snf(rows, len(rows), c)[1] if d]


# ------------------------------------------------------------------ solving

def _check_vector(b, m):
    if len(b) != m:
        raise ExactLinError(f"right-hand side has length {len(b)}, expected {m}")


def solvability(A, b: Sequence[int], cols: int | None = None) -> str:
    """'integral', 'rational-only' or 'inconsistent' for A x = b."""
    rows, c = _rows(A, cols)
    _check_vector(b, len(rows))
    if solve_integral(rows, b, c) is not None:
        return "integral"
    # rational consistency: rank of [A | b] equals rank of A
    aug = [r + [int(bi)] for r, bi in zip(rows, b)]
    if rank_q(aug, c + 1) == rank_q(rows, c):
        return "rational-only"
    return "inconsistent"


def solve_integral(A, b: Sequence[int], cols: int | None = None) -> Vector | None:
    """Some x in Z^cols with A x = b, or None.  Use `solvability` for why."""
    rows, c = _rows(A, cols)
    _check_vector(b, len(rows))
    if c == 0:
        return [] if not any(b) else None
    At = transpose(rows, c)
    m = len(rows)
    H = [r[:] for r in At]
    U = identity(c)
    piv = _hnf_inplace(H, m, U)
    y = _hnf_coords(H[:len(piv)], piv, list(b))
    if y is None:
        return None
    x = [0] * c
    for k, yk in enumerate(y):
        if yk:
            for j, u in enumerate(U[k]):
                if u:
                    x[j] += yk * u
    return x


def solve_rational(A, b: Sequence[int], cols: int | None = None) -> list[Fraction] | None:
    rows, c = _rows(A, cols)
    _check_vector(b, len(rows))
    M = [[Fraction(x) for x in r] + [Fraction(bi)] for r, bi in zip(rows, b)]
    piv = []
    r = 0
    for j in range(c):
        p = next((i for i in range(r, len(M)) if M[i][j] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][j]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][j] != 0:
                f = M[i][j]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv.append(j)
        r += 1
    if any(M[i][c] != 0 for i in range(r, len(M))):
        return None
    x = [Fraction(0)] * c
    for i, j in enumerate(piv):
        x[j] = M[i][c]
    return x


# ------------------------------------------------------------------ quotients

class QuotientResult(NamedTuple):
    free_rank: int
    torsion: list[int]
    lift: Matrix


@dataclass(frozen=True)
class QuotientData:
    """Everything known about A/B for B inside A.

    `projection` maps A-coordinates (w.r.t. A.basis) to coordinates of the
    free part; `lift` rows map back.  `torsion_generators` are elements of A
    whose classes generate the torsion subgroup, paired with `torsion`.
    """

    free_rank: int
    torsion: list[int]
    lift: Matrix
    projection: Matrix
    torsion_generators: Matrix


def quotient_data(A: Lattice, B: Lattice) -> QuotientData:
    if A.ambient_rank != B.ambient_rank:
        raise ExactLinError("ambient mismatch")
    C = []
    for r in B.basis:
        co = A.coordinates(r)
        if co is None:
            raise ExactLinError("B is not contained in A")
        C.append(co)
    ra, rb = A.rank, B.rank
    if rb == 0:
        return QuotientData(ra, [], A.rows(), identity(ra), [])
    L, diag, R, Rinv = _snf(C, rb, ra, track_inverse=True)
    adapted = matmul(Rinv, A.rows(), cols=A.ambient_rank)
    torsion = [d for d in diag if d > 1]
    tgens = [adapted[i] for i, d in enumerate(diag) if d > 1]
    proj = [row[rb:] for row in R]
    return QuotientData(ra - rb, torsion, adapted[rb:], proj, tgens)


def lattice_quotient(A: Lattice, B: Lattice) -> QuotientResult:
    """A/B as (free rank, invariant factors > 1, lifts of a free-part basis)."""
    q = quotient_data(A, B)
    return QuotientResult(q.free_rank, q.torsion, q.lift)


def intersect(A: Lattice, B: Lattice) -> Lattice:
    """A ∩ B via the relations between the two bases."""
    n = A.ambient_rank
    if A.rank == 0 or B.rank == 0:
        return Lattice.zero(n)
    stacked = A.rows() + [[-x for x in r] for r in B.basis]
    rel = left_kernel(stacked, n)
    return Lattice.span([vecmat(r[:A.rank], A.rows(), n) for r in rel.basis], n)


def image_lattice(rows, cols: int | None = None) -> Lattice:
    return Lattice.span(rows, cols)
