"""GL(n,q) as concrete data: class indices, Jordan-form representatives,
class sizes, full enumeration with element-to-class identification, the
reciprocal involution on classes, and subspace-fixing predicates.

A class index assigns a partition to finitely many monic irreducibles
(never X), with total weighted size n.  Elements of the enumerated group
are stored in a canonical row-major byte encoding.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm

from . import gfq
from .errors import BudgetExceeded, SingularMatrix
from .partitions import conjugate, enumerate_partitions

DEFAULT_MAX_GROUP_ORDER = 250_000


@dataclass(frozen=True)
class ClassIndex:
    """Finite-support map from monic irreducibles (poly tuples) to partitions.

    items is canonically sorted by (degree, coefficients); partitions are
    nonempty tuples of weakly decreasing positive integers.
    """

    items: tuple  # ((poly, partition), ...)

    def get(self, f):
        for g, lam in self.items:
            if g == f:
                return lam
        return ()

    def norm(self) -> int:
        return sum(sum(lam) * (len(g) - 1) for g, lam in self.items)

    def support(self):
        return tuple(g for g, _ in self.items)

    def first_part(self, f) -> int:
        lam = self.get(f)
        return lam[0] if lam else 0

    def __str__(self):
        if not self.items:
            return "{}"
        bits = [f"{gfq.poly_str(g)} -> {list(lam)}" for g, lam in self.items]
        return "{" + ", ".join(bits) + "}"


def make_class_index(pairs) -> ClassIndex:
    items = []
    for f, lam in pairs:
        lam = tuple(lam)
        if not lam:
            continue
        if any(a <= 0 for a in lam) or any(
            lam[i] < lam[i + 1] for i in range(len(lam) - 1)
        ):
            raise ValueError(f"not a partition: {lam}")
        items.append((tuple(f), lam))
    items.sort(key=lambda it: (len(it[0]), it[0]))
    if len({f for f, _ in items}) != len(items):
        raise ValueError("duplicate polynomial in class index")
    return ClassIndex(tuple(items))


def class_index_key(sigma: ClassIndex):
    """Canonical sort key: support degrees, then poly lex, then partition
    reverse-lexicographic (larger partitions first within equal size)."""
    return tuple((len(f) - 1, f, tuple(-p for p in lam)) for f, lam in sigma.items)


def class_star(F, sigma: ClassIndex) -> ClassIndex:
    """The class of the inverses: each polynomial replaced by its reciprocal."""
    return make_class_index((gfq.reciprocal(F, f), lam) for f, lam in sigma.items)


def x_minus_one(F):
    return (F.neg[1], 1)


def group_order(q: int, n: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def enumerate_lambda_n(F, n: int) -> tuple:
    """All class indices of total size n, canonically ordered."""
    polys = []
    for d in range(1, n + 1):
        polys.extend(gfq.enumerate_irreducibles(F, d))
    polys.sort(key=lambda f: (len(f), f))

    out = []

    def rec(idx, remaining, acc):
        if remaining == 0:
            out.append(make_class_index(acc))
            return
        if idx == len(polys):
            return
        f = polys[idx]
        d = len(f) - 1
        rec(idx + 1, remaining, acc)
        for m in range(1, remaining // d + 1):
            for lam in enumerate_partitions(m):
                rec(idx + 1, remaining - m * d, acc + [(f, lam)])

    rec(0, n, [])
    out.sort(key=class_index_key)
    return tuple(out)


def _jordan_block(F, f, k):
    """C(f,k): k-by-k grid of d-by-d blocks, companions on the diagonal and
    identities on the superdiagonal."""
    d = gfq.poly_deg(f)
    C = gfq.companion(F, f)
    size = k * d
    rows = [[0] * size for _ in range(size)]
    for b in range(k):
        for i in range(d):
            for j in range(d):
                rows[b * d + i][b * d + j] = C[i][j]
        if b + 1 < k:
            for i in range(d):
                rows[b * d + i][(b + 1) * d + i] = 1
    return tuple(map(tuple, rows))


def class_rep(F, sigma: ClassIndex):
    """Block-diagonal Jordan-form representative of the class."""
    blocks = []
    for f, lam in sigma.items:
        for part in lam:
            blocks.append(_jordan_block(F, f, part))
    n = sum(len(b) for b in blocks)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        s = len(b)
        for i in range(s):
            for j in range(s):
                rows[off + i][off + j] = b[i][j]
        off += s
    return tuple(map(tuple, rows))


def centralizer_order(F, sigma: ClassIndex) -> int:
    out = Fraction(1)
    for f, lam in sigma.items:
        qf = F.q ** (len(f) - 1)
        conj = conjugate(lam)
        mult = Counter(lam)
        for i, m_i in mult.items():
            s_i = sum(conj[:i])
            for j in range(1, m_i + 1):
                out *= Fraction(qf**s_i) * (1 - Fraction(1, qf**j))
    assert out.denominator == 1 and out > 0
    return int(out)


def class_size(F, sigma: ClassIndex, n: int) -> int:
    order = group_order(F.q, n)
    cent = centralizer_order(F, sigma)
    assert order % cent == 0
    return order // cent


def _poly_at_matrix(F, f, M):
    n = len(M)
    acc = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    for c in reversed(f):
        acc = gfq.mat_mul(F, acc, M)
        if c:
            acc = tuple(
                tuple(F.add[acc[i][j]][c] if i == j else acc[i][j] for j in range(n))
                for i in range(n)
            )
    return acc


def _identify_from_factors(F, M, factors):
    n = len(M)
    pairs = []
    for f, mult in factors:
        if mult == 1:
            pairs.append((f, (1,)))
            continue
        d = gfq.poly_deg(f)
        fM = _poly_at_matrix(F, f, M)
        conj_parts = []
        power = fM
        prev = 0
        while True:
            s = (n - gfq.mat_rank(F, power)) // d
            conj_parts.append(s - prev)
            prev = s
            if s == mult:
                break
            power = gfq.mat_mul(F, power, fM)
        pairs.append((f, conjugate(tuple(conj_parts))))
    sigma = make_class_index(pairs)
    assert sigma.norm() == n
    return sigma


def identify_class(F, M) -> ClassIndex:
    """The unique class index whose class contains M.

    Factors the characteristic polynomial; for each irreducible factor f of
    multiplicity > 1 the partition is recovered from the kernel dimensions
    of powers of f(M) (conjugate-partition prefix sums)."""
    if gfq.mat_det(F, M) == 0:
        raise SingularMatrix("matrix is singular")
    cp = gfq.char_poly(F, M)
    return _identify_from_factors(F, M, gfq.factor_poly(F, cp))


def fixes_t_space_pointwise(F, sigma: ClassIndex, t: int) -> bool:
    """True iff the fixed space (eigenspace at 1) has dimension >= t."""
    return len(sigma.get(x_minus_one(F))) >= t


def stabilizes_t_space(sigma: ClassIndex, t: int) -> bool:
    """True iff some t-dimensional invariant subspace exists: t must be a sum
    deg(f)*c_f with 0 <= c_f <= |sigma(f)| (subset-sum over the primary
    components; every intermediate length is realized by a submodule)."""
    if t < 0:
        return False
    reachable = 1  # bitmask over achievable dimensions
    for f, lam in sigma.items:
        d = len(f) - 1
        cnt = sum(lam)
        acc = reachable
        for c in range(1, cnt + 1):
            acc |= reachable << (d * c)
        reachable = acc
    return bool(reachable >> t & 1)


@dataclass
class ClassInfo:
    sigma: ClassIndex
    rep: tuple
    size: int
    order: int = 0
    det_log: int = 0
    fixed_dim: int = 0


@dataclass
class ClassSystem:
    """Class-level data for GL(n,q), computable without enumerating elements."""

    field: gfq.FieldTable
    n: int
    order: int
    classes: list
    star: list
    omega: list
    id_class: int
    _key_index: dict = dc_field(default_factory=dict, repr=False)

    @property
    def q(self):
        return self.field.q

    def class_id(self, sigma: ClassIndex) -> int:
        return self._key_index[sigma]


def _matrix_order(F, M):
    n = len(M)
    ident = gfq.mat_identity(n)
    x = M
    order = 1
    while x != ident:
        x = gfq.mat_mul(F, x, M)
        order += 1
        assert order <= F.q ** n
    return order


def build_class_system(F, n: int) -> ClassSystem:
    lambdas = enumerate_lambda_n(F, n)
    order = group_order(F.q, n)
    one = x_minus_one(F)
    classes = []
    for sigma in lambdas:
        rep = class_rep(F, sigma)
        info = ClassInfo(sigma=sigma, rep=rep, size=class_size(F, sigma, n))
        info.order = _matrix_order(F, rep)
        info.det_log = F.log[gfq.mat_det(F, rep)]
        info.fixed_dim = len(sigma.get(one))
        classes.append(info)
    assert sum(c.size for c in classes) == order
    key_index = {c.sigma: i for i, c in enumerate(classes)}
    star = [key_index[class_star(F, c.sigma)] for c in classes]
    for i, j in enumerate(star):
        assert star[j] == i
    omega = [
        i
        for i, c in enumerate(classes)
        if star[i] == i
        or class_index_key(c.sigma) < class_index_key(classes[star[i]].sigma)
    ]
    id_sigma = make_class_index([(one, (1,) * n)])
    cs = ClassSystem(
        field=F,
        n=n,
        order=order,
        classes=classes,
        star=star,
        omega=omega,
        id_class=key_index[id_sigma],
    )
    cs._key_index = key_index
    return cs


def exponent(cs: ClassSystem) -> int:
    return lcm(*(c.order for c in cs.classes))


@dataclass
class GroupData:
    """A fully enumerated GL(n,q) with element-to-class lookup."""

    cs: ClassSystem
    elements: list  # canonical byte encodings, ascending
    elem_index: dict
    class_of: list  # element position -> class id
    class_elements: list  # class id -> element positions

    @property
    def field(self):
        return self.cs.field

    @property
    def n(self):
        return self.cs.n

    @property
    def order(self):
        return self.cs.order

    @property
    def classes(self):
        return self.cs.classes

    @property
    def star(self):
        return self.cs.star

    @property
    def omega(self):
        return self.cs.omega

    @property
    def id_class(self):
        return self.cs.id_class

    def matrix(self, idx):
        return gfq.mat_decode(self.elements[idx], self.cs.n)

    def class_of_matrix(self, M) -> int:
        return self.class_of[self.elem_index[gfq.mat_encode(M)]]

    def class_matrices(self, cid):
        n = self.cs.n
        return [gfq.mat_decode(self.elements[e], n) for e in self.class_elements[cid]]


def _enumerate_invertible(F, n):
    """All invertible matrices in ascending row-major order, generated by
    extending row prefixes that stay linearly independent."""
    vectors = list(itertools.product(range(F.q), repeat=n))
    out = []
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv

    def reduce_against(pivots, row):
        row = list(row)
        for pcol, prow in pivots:
            c = row[pcol]
            if c:
                factor = neg[c]
                for k in range(pcol, n):
                    if prow[k]:
                        row[k] = add[row[k]][mul[factor][prow[k]]]
        for col in range(n):
            if row[col]:
                s = inv[row[col]]
                return col, tuple(mul[x][s] for x in row)
        return None

    def rec(rows, pivots):
        if len(rows) == n:
            out.append(gfq.mat_encode(rows))
            return
        for v in vectors:
            red = reduce_against(pivots, v)
            if red is not None:
                rec(rows + [v], pivots + [red])

    rec([], [])
    return out


def build_group_data(F, n, max_order=DEFAULT_MAX_GROUP_ORDER) -> GroupData:
    order = group_order(F.q, n)
    if order > max_order:
        raise BudgetExceeded(f"|GL({n},{F.q})| = {order} exceeds budget {max_order}")
    cs = build_class_system(F, n)
    elements = _enumerate_invertible(F, n)
    assert len(elements) == order
    elem_index = {b: i for i, b in enumerate(elements)}

    # identify every element; memoize by characteristic polynomial (which
    # pins the class whenever it is squarefree)
    cp_class = {}
    cp_factors = {}
    class_of = [0] * order
    class_elements = [[] for _ in cs.classes]
    for pos, b in enumerate(elements):
        M = gfq.mat_decode(b, n)
        cp = gfq.char_poly(F, M)
        cid = cp_class.get(cp, -1)
        if cid < 0:
            factors = cp_factors.get(cp)
            if factors is None:
                factors = gfq.factor_poly(F, cp)
                cp_factors[cp] = factors
            if all(mult == 1 for _, mult in factors):
                sigma = make_class_index((f, (1,)) for f, _ in factors)
                cid = cs.class_id(sigma)
                cp_class[cp] = cid
            else:
                cid = cs.class_id(_identify_from_factors(F, M, factors))
        class_of[pos] = cid
        class_elements[cid].append(pos)

    # the enumerated cell sizes must reproduce the class-size formula
    for cid, info in enumerate(cs.classes):
        assert len(class_elements[cid]) == info.size, (
            f"class {info.sigma}: enumerated {len(class_elements[cid])} != "
            f"formula {info.size}"
        )
    return GroupData(
        cs=cs,
        elements=elements,
        elem_index=elem_index,
        class_of=class_of,
        class_elements=class_elements,
    )


def power_classes(gd: GroupData, cid: int):
    """Class ids of rep^s for s in range(order of the class rep)."""
    cache = getattr(gd, "_pow_cache", None)
    if cache is None:
        cache = {}
        gd._pow_cache = cache
    if cid not in cache:
        F, n = gd.field, gd.n
        rep = gd.classes[cid].rep
        ids = []
        x = gfq.mat_identity(n)
        for _ in range(gd.classes[cid].order):
            ids.append(gd.class_of_matrix(x))
            x = gfq.mat_mul(F, x, rep)
        cache[cid] = tuple(ids)
    return cache[cid]


def inverse_positions(gd: GroupData):
    """Element position of the inverse of every element (lazily cached)."""
    inv = getattr(gd, "_inv_positions", None)
    if inv is None:
        F, n = gd.field, gd.n
        inv = [0] * len(gd.elements)
        for pos, b in enumerate(gd.elements):
            M = gfq.mat_decode(b, n)
            inv[pos] = gd.elem_index[gfq.mat_encode(gfq.mat_inv(F, M))]
        gd._inv_positions = inv
    return inv
