"""Partition combinatorics.

Partitions are tuples of positive ints in weakly decreasing order; the
empty tuple is the empty diagram.  Compositions are tuples of non-negative
ints of a fixed length.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterator, Sequence

Partition = tuple[int, ...]
Composition = tuple[int, ...]


def normalize(parts: Sequence[int]) -> Partition:
    """Sort a composition into the partition with the same parts."""
    return tuple(sorted((p for p in parts if p > 0), reverse=True))


def is_partition(parts: Sequence[int]) -> bool:
    return all(p > 0 for p in parts) and all(a >= b for a, b in zip(parts, parts[1:]))


def weight(lam: Sequence[int]) -> int:
    return sum(lam)


def conjugate(lam: Sequence[int]) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p >= j) for j in range(1, lam[0] + 1))


def partitions(d: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of d, largest first in lexicographic order."""
    if max_part is None:
        max_part = d
    if d == 0:
        yield ()
        return
    for first in range(min(d, max_part), 0, -1):
        for rest in partitions(d - first, first):
            yield (first,) + rest


def compositions(d: int, n: int) -> Iterator[Composition]:
    """Length-n compositions of d in lexicographically decreasing order."""
    if n == 0:
        if d == 0:
            yield ()
        return
    for first in range(d, -1, -1):
        for rest in compositions(d - first, n - 1):
            yield (first,) + rest


def box_partitions(m: int, n: int, d: int | None = None) -> list[Partition]:
    """Diagrams with at most n rows and at most m columns.

    Ordered by weight, and within a weight in reverse lexicographic order
    (so (2) comes before (1, 1)); this is a linear extension of dominance
    read from the top.
    """
    weights = range(m * n + 1) if d is None else [d]
    out = []
    for w in weights:
        if w < 0 or w > m * n:
            continue
        out.extend(lam for lam in partitions(w, m) if len(lam) <= n)
    return out


def dominance_leq(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """lam ⊴ mu; diagrams of different weight are never comparable."""
    if sum(lam) != sum(mu):
        return False
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a > b:
            return False
    return True


def sigma_permutation(lam: Sequence[int]) -> tuple[int, ...]:
    """Row reading position -> column reading position, 1-based.

    Box (i, j) is number lam_1+...+lam_{i-1}+j when the diagram is read row
    by row, and lam'_1+...+lam'_{j-1}+i when it is read column by column.
    Entry p-1 of the result is the image of p.
    """
    conj = conjugate(lam)
    col_start = [0]
    for c in conj:
        col_start.append(col_start[-1] + c)
    out = []
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            out.append(col_start[j - 1] + i)
    return tuple(out)


def compose_perms(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """(p o q)(x) = p(q(x)) for 1-based permutations stored as tuples."""
    return tuple(p[q[x] - 1] for x in range(len(q)))


def contains(outer: Sequence[int], inner: Sequence[int]) -> bool:
    if len(inner) > len(outer):
        return False
    return all(i <= o for i, o in zip(inner, outer))


def lr_coefficient(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int]) -> int:
    """Littlewood-Richardson coefficient c^nu_{lam, mu}.

    Counts skew tableaux of shape nu/lam and content mu whose reverse
    reading word (rows top to bottom, each right to left) is a lattice word.
    """
    lam, mu, nu = tuple(lam), tuple(mu), tuple(nu)
    if sum(nu) != sum(lam) + sum(mu) or not contains(nu, lam):
        return 0
    if not mu:
        return 1
    rows = [(i, (lam[i] if i < len(lam) else 0), nu[i]) for i in range(len(nu))]
    cells = [(i, j) for i, lo, hi in rows for j in range(hi - 1, lo - 1, -1)]
    filling: dict[tuple[int, int], int] = {}
    counts = [0] * (len(mu) + 1)

    def rec(pos: int) -> int:
        if pos == len(cells):
            return 1
        i, j = cells[pos]
        total = 0
        right = filling.get((i, j + 1))
        above = filling.get((i - 1, j))
        for v in range(1, len(mu) + 1):
            if counts[v] >= mu[v - 1]:
                continue
            if right is not None and v > right:
                continue
            if above is not None and v <= above:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            filling[(i, j)] = v
            counts[v] += 1
            total += rec(pos + 1)
            counts[v] -= 1
            del filling[(i, j)]
        return total

    return rec(0)


def _horizontal_strips(lam: Partition, size: int, max_rows: int) -> Iterator[Partition]:
    """Partitions nu ⊇ lam with nu/lam a horizontal strip of `size` boxes."""
    rows = list(lam) + [0]
    rows = rows[:max_rows] if len(rows) > max_rows else rows

    def rec(i: int, left: int, acc: list[int]) -> Iterator[Partition]:
        if i == len(rows):
            if left == 0:
                yield normalize(acc)
            return
        cap = left if i == 0 else min(left, rows[i - 1] - rows[i])
        for add in range(cap, -1, -1):
            yield from rec(i + 1, left - add, acc + [rows[i] + add])

    yield from rec(0, size, [])


@lru_cache(maxsize=None)
def kostka(lam: Partition, content: Composition) -> int:
    """Number of SSYT of shape lam with content[i] entries equal to i+1."""
    if sum(lam) != sum(content):
        return 0

    def rec(shape: Partition, k: int) -> int:
        if k == len(content):
            return 1 if shape == lam else 0
        n = 0
        for nxt in _horizontal_strips(shape, content[k], len(lam)):
            if contains(lam, nxt):
                n += rec(nxt, k + 1)
        return n

    return rec((), 0)


def ssyt_count(lam: Sequence[int], n: int, weight: Sequence[int] | None = None) -> int:
    """Semistandard tableaux of shape lam with entries in 1..n.

    With `weight`, the Kostka number for that content instead.
    """
    lam = tuple(lam)
    if weight is not None:
        w = tuple(weight)
        if len(w) > n and any(w[n:]):
            return 0
        return kostka(lam, w[:n] if len(w) >= n else w + (0,) * (n - len(w)))
    if len(lam) > n:
        return 0
    return sum(kostka(lam, c) for c in compositions(sum(lam), n))


def format_partition(lam: Sequence[int]) -> str:
    return ",".join(str(p) for p in lam)


def parse_partition(text: str) -> Partition:
    text = text.strip()
    if not text:
        return ()
    parts = tuple(int(t) for t in text.split(","))
    if not is_partition(parts):
        raise ValueError(f"not a partition: {text!r}")
    return parts


def multiset_weight(index: Sequence[int], n: int) -> tuple[int, ...]:
    """Content of a multi-index with entries in 0..n-1."""
    w = [0] * n
    for i in index:
        w[i] += 1
    return tuple(w)


def monomials(nvars: int, deg: int) -> list[tuple[int, ...]]:
    """Sorted variable multisets of a given degree (monomial basis)."""
    return list(combinations_with_replacement(range(nvars), deg))
