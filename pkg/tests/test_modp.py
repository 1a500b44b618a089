from hypothesis import given, settings, strategies as st
from sympy import GF, Matrix
from sympy.polys.matrices import DomainMatrix

from intschur import modp

primes = st.sampled_from([2, 3, 5, 7])
small = st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=m, max_size=m)))


def test_is_prime():
    assert [p for p in range(20) if modp.is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


@settings(max_examples=100, deadline=None)
@given(small, primes)
def test_rank_matches_sympy(A, p):
    D = DomainMatrix.from_Matrix(Matrix(A)).convert_to(GF(p))
    assert modp.rank(A, len(A[0]), p) == D.rank()


@settings(max_examples=100, deadline=None)
@given(small, primes)
def test_nullspace_and_rank_nullity(A, p):
    n = len(A[0])
    N = modp.nullspace(A, n, p)
    assert len(N) + modp.rank(A, n, p) == n
    for x in N:
        assert all(sum(a * b for a, b in zip(row, x)) % p == 0 for row in A)


@settings(max_examples=100, deadline=None)
@given(small, primes)
def test_coords_in_rref_basis(A, p):
    n = len(A[0])
    R, piv = modp.rref(A, n, p)
    for row in A:
        c = modp.coords(R, piv, row, p)
        assert c is not None
        v = [sum(ci * r[j] for ci, r in zip(c, R)) % p for j in range(n)]
        assert v == [x % p for x in row]
