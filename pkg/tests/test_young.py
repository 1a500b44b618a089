from collections import Counter
from itertools import product
from math import comb

from hypothesis import given, settings, strategies as st

from intschur import young


def brute_ssyt(lam, n):
    """All fillings of lam with entries < n, rows weak, columns strict."""
    cells = [(i, j) for i, r in enumerate(lam) for j in range(r)]
    out = []
    for vals in product(range(n), repeat=len(cells)):
        T = dict(zip(cells, vals))
        if all(T[(i, j)] <= T[(i, j + 1)] for (i, j) in cells if (i, j + 1) in T) and \
                all(T[(i, j)] < T[(i + 1, j)] for (i, j) in cells if (i + 1, j) in T):
            out.append(T)
    return out


def brute_character(lam, n):
    c = Counter()
    for T in brute_ssyt(lam, n):
        c[young.multiset_weight(list(T.values()), n)] += 1
    return c


def brute_lr(lam, mu, n):
    """Expand s_lam * s_mu in n variables by peeling dominant weights."""
    a, b = brute_character(lam, n), brute_character(mu, n)
    prodc = Counter()
    for w1, x in a.items():
        for w2, y in b.items():
            prodc[tuple(p + q for p, q in zip(w1, w2))] += x * y
    out = {}
    while any(prodc.values()):
        top = max(w for w, x in prodc.items() if x and list(w) == sorted(w, reverse=True))
        c = prodc[top]
        nu = young.normalize(top)
        out[nu] = c
        for w, x in brute_character(nu, n).items():
            prodc[w] -= c * x
    return out


def hook_content(lam, n):
    num = den = 1
    conj = young.conjugate(lam)
    for i, r in enumerate(lam):
        for j in range(r):
            num *= n + j - i
            den *= (r - j - 1) + (conj[j] - i - 1) + 1
    return num // den


partition = st.integers(0, 6).flatmap(lambda d: st.sampled_from(list(young.partitions(d))))


@given(partition)
def test_conjugate_is_involution(lam):
    assert young.conjugate(young.conjugate(lam)) == lam
    assert sum(young.conjugate(lam)) == sum(lam)


@given(partition, partition)
def test_dominance_reverses_under_conjugation(a, b):
    if sum(a) == sum(b):
        assert young.dominance_leq(a, b) == young.dominance_leq(young.conjugate(b), young.conjugate(a))


def test_dominance_example():
    assert young.dominance_leq((2, 2), (3, 1))
    assert not young.dominance_leq((3, 1), (2, 2))


def test_partition_counts():
    assert [len(list(young.partitions(d))) for d in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


def test_compositions_order_and_count():
    comps = list(young.compositions(3, 3))
    assert len(comps) == comb(5, 2)
    assert comps == sorted(comps, reverse=True)


def test_box_partitions_count_is_binomial():
    for k in range(5):
        for n in range(k, 7):
            assert len(young.box_partitions(n - k, k)) == comb(n, k)


def test_sigma_examples():
    assert young.sigma_permutation((2,)) == (1, 2)
    assert young.sigma_permutation((1, 1)) == (1, 2)
    assert young.sigma_permutation((2, 1)) == (1, 3, 2)


@given(partition)
def test_sigma_is_permutation_and_inverts_under_conjugation(lam):
    s = young.sigma_permutation(lam)
    assert sorted(s) == list(range(1, sum(lam) + 1))
    t = young.sigma_permutation(young.conjugate(lam))
    assert young.compose_perms(t, s) == tuple(range(1, sum(lam) + 1))


def test_lr_examples():
    assert young.lr_coefficient((1,), (1,), (2,)) == 1
    assert young.lr_coefficient((1,), (1,), (1, 1)) == 1
    assert young.lr_coefficient((1,), (1, 1), (2, 1)) == 1
    assert young.lr_coefficient((2, 1), (2, 1), (3, 2, 1)) == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3).flatmap(lambda a: st.tuples(st.sampled_from(list(young.partitions(a))),
                                                    st.sampled_from(list(young.partitions(4 - a))))))
def test_lr_against_character_expansion(pair):
    lam, mu = pair
    n = 4
    expansion = brute_lr(lam, mu, n)
    for nu in young.partitions(sum(lam) + sum(mu)):
        assert young.lr_coefficient(lam, mu, nu) == expansion.get(nu, 0)


@given(partition, partition)
def test_lr_symmetry(lam, mu):
    for nu in young.partitions(sum(lam) + sum(mu)):
        assert young.lr_coefficient(lam, mu, nu) == young.lr_coefficient(mu, lam, nu)
        assert young.lr_coefficient(lam, mu, nu) == young.lr_coefficient(
            young.conjugate(lam), young.conjugate(mu), young.conjugate(nu))


def test_ssyt_example():
    assert young.ssyt_count((2, 1), 2) == 2


@settings(deadline=None)
@given(partition, st.integers(1, 4))
def test_ssyt_count_hook_content(lam, n):
    expect = hook_content(lam, n) if len(lam) <= n else 0
    assert young.ssyt_count(lam, n) == expect


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4).flatmap(lambda d: st.sampled_from(list(young.partitions(d)))), st.integers(1, 3))
def test_kostka_against_enumeration(lam, n):
    c = brute_character(lam, n)
    for w in young.compositions(sum(lam), n):
        assert young.ssyt_count(lam, n, w) == c.get(w, 0)


def test_parse_and_format_round_trip():
    for lam in [(), (1,), (2, 1), (3, 3, 1)]:
        assert young.parse_partition(young.format_partition(lam)) == lam
    assert young.format_partition(()) == ""


def test_monomial_count():
    assert len(young.monomials(3, 2)) == comb(4, 2)
