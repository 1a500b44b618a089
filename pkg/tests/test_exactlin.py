import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ as SZZ
from sympy.matrices.normalforms import smith_normal_form

from intschur import exactlin as el


def matrices(max_dim=6, bound=30):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                               min_size=m, max_size=m)))


def sympy_invariants(A):
    D = smith_normal_form(Matrix(A), domain=SZZ)
    return sorted(abs(D[i, i]) for i in range(min(D.shape)) if D[i, i] != 0)


# ---------------------------------------------------------------- fixed examples

def test_hnf_small_example():
    H, U = el.hnf([[2, 4], [1, 3]])
    assert H == [[1, 1], [0, 2]]
    assert abs(el.determinant(U)) == 1
    assert el.matmul(U, [[2, 4], [1, 3]]) == H


def test_smith_of_diagonal():
    assert el.snf([[2, 0], [0, 3]]).diag[:2] == [1, 6]
    assert el.smith_invariants([[2, 0], [0, 3]]) == [1, 6]


def test_kernel_of_single_row():
    K = el.kernel_basis([[2, 4]])
    assert K.rank == 1
    v = K.basis[0]
    assert tuple(v) in {(2, -1), (-2, 1)}


def test_solve_upper_triangular():
    x = el.solve_integral([[1, 1], [0, 2]], [3, 2])
    assert x == [2, 1]


def test_solve_reports_unsolvable():
    assert el.solve_integral([[2, 0], [0, 2]], [1, 0]) is None
    assert el.solvability([[2, 0], [0, 2]], [1, 0]) != "integral"


def test_quotient_by_coordinate_sublattice():
    A = el.Lattice.span([[1, 0], [0, 2]], 2)
    B = el.Lattice.span([[0, 2]], 2)
    q = el.quotient_data(A, B)
    assert q.free_rank == 1 and q.torsion == []
    assert q.lift == [[1, 0]]


def test_quotient_with_torsion():
    A = el.Lattice.full(2)
    B = el.Lattice.span([[2, 0], [0, 6]], 2)
    r = el.lattice_quotient(A, B)
    assert r.free_rank == 0 and r.torsion == [2, 6]


# ---------------------------------------------------------------- properties

@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hnf_is_unimodular_transform(A):
    n = len(A[0])
    H, U = el.hnf(A, n)
    assert abs(el.determinant(U)) == 1
    assert el.matmul(U, A, cols=n) == H


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hnf_idempotent_and_reduced(A):
    n = len(A[0])
    B = el.hnf_basis(A, n)
    assert el.hnf_basis(B, n) == B
    piv = [next(j for j, x in enumerate(r) if x) for r in B]
    assert piv == sorted(piv) and len(set(piv)) == len(piv)
    for i, (r, p) in enumerate(zip(B, piv)):
        assert r[p] > 0
        for r2 in B[:i]:
            assert 0 <= r2[p] < r[p]


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_smith_matches_sympy(A):
    n = len(A[0])
    assert el.smith_invariants(A, n) == sympy_invariants(A)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_smith_decomposition_is_valid(A):
    n = len(A[0])
    L, diag, R = el.snf(A, n)
    D = el.matmul(el.matmul(L, A, cols=n), R, cols=n)
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            assert x == (diag[i] if i == j and i < len(diag) else 0)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert abs(el.determinant(L)) == 1 and abs(el.determinant(R)) == 1


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(A):
    n = len(A[0])
    K = el.kernel_basis(A, n)
    assert el.rank_q(A, n) + K.rank == n
    assert el.rank_q(A, n) == Matrix(A).rank()
    for v in K.basis:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=5))
def test_saturation(A):
    n = len(A[0])
    L = el.Lattice.span(A, n)
    S = el.saturate(L)
    assert S.rank == L.rank
    assert S.contains(L)
    assert el.saturate(S) == S
    q = el.quotient_data(S, L)
    assert q.free_rank == 0
    assert el.lattice_quotient(el.Lattice.full(n), S).torsion == []


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=5), st.lists(st.integers(-9, 9), min_size=5, max_size=5))
def test_solve_round_trip(A, x):
    n = len(A[0])
    x = x[:n]
    b = [sum(a * y for a, y in zip(row, x)) for row in A]
    sol = el.solve_integral(A, b, n)
    assert sol is not None
    assert [sum(a * y for a, y in zip(row, sol)) for row in A] == b


def test_random_coordinates_in_lattice():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 6)
        rows = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(rng.randint(1, 6))]
        L = el.Lattice.span(rows, n)
        c = [rng.randint(-5, 5) for _ in range(L.rank)]
        v = [sum(ci * r[j] for ci, r in zip(c, L.basis)) for j in range(n)]
        assert L.coordinates(v) == c


def test_intersection_of_coordinate_lattices():
    A = el.Lattice.span([[2, 0], [0, 1]], 2)
    B = el.Lattice.span([[1, 0], [0, 3]], 2)
    assert el.intersect(A, B) == el.Lattice.span([[2, 0], [0, 3]], 2)


def test_error_on_ragged_input():
    with pytest.raises(el.ExactLinError):
        el.hnf([[1, 2], [3]])
