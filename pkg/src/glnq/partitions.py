"""Integer partitions, dominance order, hooks, Kostka matrices, q-binomials.

Partitions are tuples of weakly decreasing positive integers; () is the
empty partition.  Matrix indices run over partitions of a fixed size in
reverse-lexicographic order (largest first), a linear extension of the
dominance order, so Kostka matrices come out unitriangular as stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import SizeMismatch


@lru_cache(maxsize=None)
def enumerate_partitions(m: int) -> tuple:
    """All partitions of m, reverse-lexicographic (largest part first)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m > 30:
        raise ValueError("m exceeds the desk-scale guard of 30")

    def gen(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return tuple(gen(m, m))


def partition_index(lam) -> int:
    return enumerate_partitions(sum(lam)).index(tuple(lam))


def conjugate(lam):
    """Column lengths of the Young diagram."""
    if not lam:
        return ()
    out = []
    for j in range(lam[0]):
        out.append(sum(1 for part in lam if part > j))
    return tuple(out)


def dominates(lam, mu) -> bool:
    """True iff every prefix sum of lam is >= the prefix sum of mu."""
    if sum(lam) != sum(mu):
        raise SizeMismatch(f"|{lam}| != |{mu}|")
    sa = sb = 0
    for k in range(max(len(lam), len(mu))):
        sa += lam[k] if k < len(lam) else 0
        sb += mu[k] if k < len(mu) else 0
        if sa < sb:
            return False
    return True


def hook_stats(lam):
    """(multiset of hook lengths as a sorted tuple, b-statistic)."""
    conj = conjugate(lam)
    hooks = []
    for i, row in enumerate(lam):
        for j in range(row):
            hooks.append(row + conj[j] - i - j - 1)
    b = sum(i * part for i, part in enumerate(lam))
    return tuple(sorted(hooks, reverse=True)), b


def ssyt_count(shape, content) -> int:
    """Number of semistandard Young tableaux of the given shape and content.

    Enumerates tableaux value by value: the cells holding value v must form
    a horizontal strip on top of the cells holding smaller values, which is
    exactly the semistandard condition.  One recursion leaf per tableau.
    """
    shape = tuple(shape)
    content = tuple(content)
    if sum(shape) != sum(content):
        return 0
    nrows = len(shape)

    def strips(profile, count):
        # all profiles reachable from `profile` by adding a horizontal
        # strip of `count` cells inside `shape`
        def place(row, remaining, acc):
            if row == nrows:
                if remaining == 0:
                    yield tuple(acc)
                return
            lo = profile[row]
            hi = min(shape[row], profile[row - 1] if row > 0 else shape[0])
            for new in range(lo, hi + 1):
                if new - lo > remaining:
                    break
                acc.append(new)
                yield from place(row + 1, remaining - (new - lo), acc)
                acc.pop()

        yield from place(0, count, [])

    def count_from(profile, v):
        if v == len(content):
            return 1 if profile == shape else 0
        total = 0
        for nxt in strips(profile, content[v]):
            total += count_from(nxt, v + 1)
        return total

    return count_from((0,) * nrows, 0)


@dataclass(frozen=True)
class KostkaPair:
    """Kostka matrix K and its exact integer inverse H for partitions of m.

    Indexing follows enumerate_partitions(m); K[i][j] = K_{parts[i], parts[j]}
    (shape i, content j) is upper unitriangular, H = K^{-1}.
    """

    m: int
    parts: tuple
    K: tuple
    H: tuple

    def kostka(self, lam, mu) -> int:
        return self.K[self.parts.index(tuple(lam))][self.parts.index(tuple(mu))]

    def inverse(self, mu, lam) -> int:
        return self.H[self.parts.index(tuple(mu))][self.parts.index(tuple(lam))]


@lru_cache(maxsize=None)
def kostka_pair(m: int) -> KostkaPair:
    if m > 12:
        raise ValueError("m exceeds the desk-scale guard of 12")
    parts = enumerate_partitions(m)
    r = len(parts)
    K = [[ssyt_count(parts[i], parts[j]) for j in range(r)] for i in range(r)]
    for i in range(r):
        if K[i][i] != 1:
            raise AssertionError("Kostka diagonal is not unitriangular")
        for j in range(i):
            if K[i][j] != 0:
                raise AssertionError("Kostka matrix not upper triangular")
    # back-substitution for the exact integer inverse of a unitriangular K
    H = [[0] * r for _ in range(r)]
    for j in range(r):
        H[j][j] = 1
        for i in range(j - 1, -1, -1):
            H[i][j] = -sum(K[i][k] * H[k][j] for k in range(i + 1, j + 1))
    for i in range(r):
        for j in range(r):
            chk = sum(K[i][k] * H[k][j] for k in range(r))
            if chk != (1 if i == j else 0):
                raise AssertionError("K*H != I")
    return KostkaPair(m, parts, tuple(map(tuple, K)), tuple(map(tuple, H)))


def q_binomial(n: int, k: int, q: int) -> int:
    """Gaussian binomial: the number of k-spaces of F_q^n, exact."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(q ** (n - i) - 1, q ** (i + 1) - 1)
    assert out.denominator == 1
    return int(out)
