"""Finite fields GF(q) and polynomial/matrix arithmetic over them.

Field elements are integers in [0, q).  For q = p^e the element k stands
for the polynomial over GF(p) whose coefficients are the base-p digits of
k, reduced modulo a fixed monic irreducible of degree e; 0 and 1 are the
additive and multiplicative identities in every encoding.

Polynomials over GF(q) are tuples of element indices, lowest degree
first, with no trailing zeros (the zero polynomial is the empty tuple).
Matrices are tuples of row tuples.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import NotPrimePower, TooLarge, ZeroConstantTerm

MAX_Q = 64
MAX_FACTOR_DEGREE = 12


def _prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p^e, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"q={q} is not a prime power")
    p = 2
    while p * p <= q:
        if q % p == 0:
            e, m = 0, q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise NotPrimePower(f"q={q} is not a prime power")
            return p, e
        p += 1
    return q, 1


# ---------------------------------------------------------------------------
# polynomials over the prime field GF(p), used only to build extension tables

def _pmul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _pmod(a, mod, p):
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, m in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * m) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def _p_irreducible(f, p):
    """Trial division of a monic polynomial over GF(p) by all lower monics."""
    d = len(f) - 1
    for dd in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=dd):
            g = list(tail) + [1]
            r = _pmod(f, g, p)
            if not r:
                return False
    return True


class FieldTable:
    """Arithmetic tables for GF(q) with a fixed generator of GF(q)^*.

    The modulus is the lexicographically least monic irreducible of degree
    e over GF(p), coefficients compared constant term first; alpha is the
    least element index of full multiplicative order.  Instances are
    immutable after construction and safe to share.
    """

    def __init__(self, q: int):
        if not 2 <= q <= MAX_Q:
            raise TooLarge(f"q={q} outside supported range [2, {MAX_Q}]")
        p, e = _prime_power(q)
        self.q = q
        self.p = p
        self.e = e
        if e == 1:
            self.modulus = (0, 1)  # GF(p)[X]/(X) = GF(p)
            add = [[(a + b) % p for b in range(q)] for a in range(q)]
            mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            self.modulus = self._find_modulus(p, e)
            digits = [self._digits(k) for k in range(q)]
            add = [
                [self._undigits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                 for b in range(q)]
                for a in range(q)
            ]
            mul = []
            for a in range(q):
                row = []
                for b in range(q):
                    prod = _pmod(_pmul(digits[a], digits[b], p), self.modulus, p)
                    row.append(self._undigits(prod + [0] * (e - len(prod))))
                mul.append(row)
        self.add = add
        self.mul = mul
        self.neg = [add[a].index(0) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            inv[a] = mul[a].index(1)
        self.inv = inv
        self.alpha = self._find_generator()
        self.exp = [0] * (q - 1)
        self.log = [0] * q  # log[0] unused
        x = 1
        for k in range(q - 1):
            self.exp[k] = x
            self.log[x] = k
            x = mul[x][self.alpha]

    def _digits(self, k):
        p, e = self.p, self.e
        out = []
        for _ in range(e):
            out.append(k % p)
            k //= p
        return out

    def _undigits(self, ds):
        k = 0
        for d in reversed(ds):
            k = k * self.p + d
        return k

    @staticmethod
    def _find_modulus(p, e):
        for tail in itertools.product(range(p), repeat=e):
            f = tuple(tail) + (1,)
            if _p_irreducible(f, p):
                return f
        raise AssertionError("no irreducible modulus found")

    def _find_generator(self):
        target = self.q - 1
        for a in range(1, self.q):
            x, order = a, 1
            while x != 1:
                x = self.mul[x][a]
                order += 1
            if order == target:
                return a
        raise AssertionError("no generator found")

    def pow(self, a, k):
        if a == 0:
            return 0 if k else 1
        return self.exp[(self.log[a] * k) % (self.q - 1)]

    def __repr__(self):
        return f"FieldTable(q={self.q})"


@lru_cache(maxsize=None)
def build_field(q: int) -> FieldTable:
    """Build (and cache) the arithmetic tables for GF(q), 2 <= q <= 64."""
    return FieldTable(q)


# ---------------------------------------------------------------------------
# polynomials over GF(q)

def poly_trim(a):
    a = tuple(a)
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def poly_deg(a):
    return len(a) - 1


def poly_add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = F.add[out[i]][y]
    return poly_trim(out)


def poly_neg(F, a):
    return tuple(F.neg[x] for x in a)


def poly_sub(F, a, b):
    return poly_add(F, a, poly_neg(F, b))


def poly_scale(F, a, c):
    if c == 0:
        return ()
    return tuple(F.mul[x][c] for x in a)


def poly_mul(F, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x:
            row = mul[x]
            for j, y in enumerate(b):
                out[i + j] = add[out[i + j]][row[y]]
    return poly_trim(out)


def poly_divmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db, inv_lead = len(b) - 1, F.inv[b[-1]]
    quot = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = F.mul[a[-1]][inv_lead]
        shift = len(a) - 1 - db
        quot[shift] = c
        for i, m in enumerate(b):
            a[shift + i] = F.add[a[shift + i]][F.neg[F.mul[c][m]]]
        while a and a[-1] == 0:
            a.pop()
    return poly_trim(quot), poly_trim(a)


def poly_mod(F, a, b):
    return poly_divmod(F, a, b)[1]


def poly_eval(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add[F.mul[acc][x]][c]
    return acc


def is_monic(a):
    return bool(a) and a[-1] == 1


def poly_monic(F, a):
    if not a:
        return a
    return poly_scale(F, a, F.inv[a[-1]])


POLY_X = (0, 1)


def monic_polys(F, d):
    """All monic polynomials of degree d, lexicographic by (c0, c1, ...)."""
    for tail in itertools.product(range(F.q), repeat=d):
        yield tail + (1,)


def _irreducible_by_trial(F, f, lower_irreducibles):
    for g in lower_irreducibles:
        if 2 * (len(g) - 1) > len(f) - 1:
            break
        if not poly_mod(F, f, g):
            return False
    return True


def monic_irreducibles(F, d):
    """All monic irreducibles of degree d over GF(q), X included, lex order."""
    cache = getattr(F, "_irr_cache", None)
    if cache is None:
        cache = {}
        F._irr_cache = cache
    if d not in cache:
        lower = []
        for dd in range(1, d // 2 + 1):
            lower.extend(cache.get(dd) or monic_irreducibles(F, dd))
        lower.sort(key=len)
        cache[d] = tuple(
            f for f in monic_polys(F, d) if _irreducible_by_trial(F, f, lower)
        )
    return cache[d]


def enumerate_irreducibles(F, d):
    """The degree-d members of Phi: monic irreducibles excluding X itself."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    return tuple(f for f in monic_irreducibles(F, d) if f != POLY_X)


def is_irreducible(F, f):
    if not is_monic(f):
        return False
    d = poly_deg(f)
    return f in monic_irreducibles(F, d)


def reciprocal(F, f):
    """Monic polynomial whose roots are the inverses of the roots of f."""
    if not f or f[0] == 0:
        raise ZeroConstantTerm("reciprocal needs a nonzero constant term")
    rev = tuple(reversed(f))
    return poly_monic(F, rev)


def factor_poly(F, f):
    """Complete factorization of a monic polynomial into monic irreducibles.

    Returns a tuple of (factor, multiplicity) pairs sorted lexicographically.
    Trial division against enumerated irreducibles; degrees stay desk-scale.
    """
    if not is_monic(f):
        raise ValueError("factor_poly expects a monic polynomial")
    if poly_deg(f) > MAX_FACTOR_DEGREE:
        raise TooLarge(f"degree {poly_deg(f)} exceeds factoring guard")
    out = {}
    rem = f
    d = 1
    while poly_deg(rem) > 0:
        if 2 * d > poly_deg(rem):
            # factors of degree <= deg/2 are exhausted, so rem is irreducible
            out[rem] = out.get(rem, 0) + 1
            break
        for g in monic_irreducibles(F, d):
            while True:
                quot, r = poly_divmod(F, rem, g)
                if r:
                    break
                out[g] = out.get(g, 0) + 1
                rem = quot
            if poly_deg(rem) == 0:
                break
        d += 1
    return tuple(sorted(out.items()))


# ---------------------------------------------------------------------------
# matrices over GF(q)

def mat_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(F, A, B):
    add, mul = F.add, F.mul
    Bc = tuple(zip(*B))
    out = []
    for row in A:
        orow = []
        for col in Bc:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = add[acc][mul[x][y]]
            orow.append(acc)
        out.append(tuple(orow))
    return tuple(out)


def mat_vec(F, A, v):
    add, mul = F.add, F.mul
    out = []
    for row in A:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = add[acc][mul[x][y]]
        out.append(acc)
    return tuple(out)


def mat_sub(F, A, B):
    return tuple(
        tuple(F.add[x][F.neg[y]] for x, y in zip(ra, rb)) for ra, rb in zip(A, B)
    )


def _eliminate(F, rows):
    """Row-reduce a list of row-lists in place; return (rank, det_factor)."""
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    rank = 0
    det_sign_flips = 0
    for col in range(n_cols):
        piv = None
        for r in range(rank, n_rows):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        if piv != rank:
            rows[rank], rows[piv] = rows[piv], rows[rank]
            det_sign_flips += 1
        prow = rows[rank]
        pinv = inv[prow[col]]
        for r in range(rank + 1, n_rows):
            c = rows[r][col]
            if c:
                factor = neg[mul[c][pinv]]
                rr = rows[r]
                for k in range(col, n_cols):
                    if prow[k]:
                        rr[k] = add[rr[k]][mul[factor][prow[k]]]
        rank += 1
        if rank == n_rows:
            break
    return rank, det_sign_flips


def mat_rank(F, A):
    rows = [list(r) for r in A]
    rank, _ = _eliminate(F, rows)
    return rank


def mat_det(F, A):
    rows = [list(r) for r in A]
    n = len(rows)
    rank, flips = _eliminate(F, rows)
    if rank < n:
        return 0
    det = 1
    for i in range(n):
        det = F.mul[det][rows[i][i]]
    if flips % 2:
        det = F.neg[det]
    return det


def mat_inv(F, A):
    n = len(A)
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    rows = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(A)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        rows[col], rows[piv] = rows[piv], rows[col]
        prow = rows[col]
        pinv = inv[prow[col]]
        for k in range(2 * n):
            prow[k] = mul[prow[k]][pinv]
        for r in range(n):
            if r != col and rows[r][col]:
                c = neg[rows[r][col]]
                rr = rows[r]
                for k in range(col, 2 * n):
                    if prow[k]:
                        rr[k] = add[rr[k]][mul[c][prow[k]]]
    return tuple(tuple(r[n:]) for r in rows)


def char_poly(F, A):
    """Characteristic polynomial det(X*I - A), monic, low-to-high coeffs."""
    n = len(A)
    elem = [0] * (n + 1)
    elem[0] = 1
    for k in range(1, n + 1):
        acc = 0
        for subset in itertools.combinations(range(n), k):
            sub = tuple(tuple(A[i][j] for j in subset) for i in subset)
            acc = F.add[acc][mat_det(F, sub)]
        elem[k] = acc
    coeffs = [0] * (n + 1)
    for k in range(n + 1):
        c = elem[k]
        if k % 2:
            c = F.neg[c]
        coeffs[n - k] = c
    return tuple(coeffs)


def companion(F, f):
    """Companion matrix of a monic polynomial: sub-diagonal ones, last
    column the negated coefficients."""
    if not is_monic(f):
        raise ValueError("companion needs a monic polynomial")
    d = poly_deg(f)
    rows = []
    for i in range(d):
        row = [0] * d
        if i > 0:
            row[i - 1] = 1
        row[d - 1] = F.neg[f[i]]
        rows.append(tuple(row))
    return tuple(rows)


def mat_encode(A) -> bytes:
    return bytes(x for row in A for x in row)


def mat_decode(b: bytes, n: int):
    return tuple(tuple(b[i * n + j] for j in range(n)) for i in range(n))


def poly_str(f, var="X"):
    """Human-readable form, highest degree first (for reports)."""
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append(f"{var}" if c == 1 else f"{c}*{var}")
        else:
            terms.append(f"{var}^{i}" if c == 1 else f"{c}*{var}^{i}")
    return " + ".join(terms)
