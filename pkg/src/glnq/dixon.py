"""Exact irreducible character values via modular class-algebra eigenvectors.

The class-multiplication matrices N_i (entries a_{ijk} = number of ways
z_k factors as an element of C_i times an element of C_j) commute, and
their common eigenvectors mod a prime l = 1 (mod exponent) are reductions
of the character columns.  Degrees come from the orthogonality relation
mod l; exact values are recovered per class by discrete Fourier inversion
of the power map, giving nonnegative integer multiplicities of roots of
unity that are lifted into the cyclotomic field of the group exponent.
All randomness-free: splitting sequences are deterministic.
"""

from __future__ import annotations

from math import isqrt

from . import gfq, glq
from .cyclotomic import Cyclo
from .errors import LiftFailure

PRIME_SEARCH_CAP = 100_000_000


# ---------------------------------------------------------------------------
# class multiplication constants

def class_constants(gd: glq.GroupData):
    """N[i][k][j] = a_{ijk}: the coefficient of the class of z_k in the
    product of class sums K_i * K_j."""
    F, n = gd.field, gd.n
    r = len(gd.classes)
    reps = [c.rep for c in gd.classes]
    counts = [[[0] * r for _ in range(r)] for _ in range(r)]  # [i][k][j]
    for i in range(r):
        istar = gd.star[i]
        rows = counts[i]
        for v in gd.class_matrices(istar):
            for k in range(r):
                j = gd.class_of_matrix(gfq.mat_mul(F, v, reps[k]))
                rows[k][j] += 1
    sizes = [c.size for c in gd.classes]
    for i in range(r):
        for k in range(r):
            assert sum(counts[i][k]) == sizes[i]
    return counts


# ---------------------------------------------------------------------------
# primes and modular utilities

def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _primitive_root(ell):
    facs = list(_factorize(ell - 1))
    g = 2
    while True:
        if all(pow(g, (ell - 1) // p, ell) != 1 for p in facs):
            return g
        g += 1


def find_prime(order: int, m: int):
    """Smallest prime l = 1 (mod m) above 2*ceil(sqrt|G|)*max-degree bound,
    together with a primitive root mod l."""
    s = isqrt(order)
    if s * s < order:
        s += 1
    bound = 2 * s * isqrt(order)
    ell = (bound // m + 1) * m + 1
    while ell <= PRIME_SEARCH_CAP:
        if _is_prime(ell):
            return ell, _primitive_root(ell)
        ell += m
    raise LiftFailure(f"no usable prime = 1 mod {m} under {PRIME_SEARCH_CAP}")


def _sqrt_mod(a, ell):
    """Tonelli-Shanks square root mod an odd prime (deterministic)."""
    a %= ell
    if a == 0:
        return 0
    if pow(a, (ell - 1) // 2, ell) != 1:
        raise LiftFailure("degree recovery hit a non-residue")
    if ell % 4 == 3:
        return pow(a, (ell + 1) // 4, ell)
    # write ell-1 = Q * 2^S
    q, s = ell - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (ell - 1) // 2, ell) != ell - 1:
        z += 1
    m_, c, t, r = s, pow(z, q, ell), pow(a, q, ell), pow(a, (q + 1) // 2, ell)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % ell
            i += 1
        b = pow(c, 1 << (m_ - i - 1), ell)
        m_, c = i, b * b % ell
        t, r = t * c % ell, r * b % ell
    return r


# polynomial helpers mod ell: coefficient lists, low to high, trimmed

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul_mod(a, b, ell):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % ell
    return _ptrim(out)


def _pmod_mod(a, b, ell):
    a = _ptrim([x % ell for x in a])
    b = _ptrim([x % ell for x in b])
    assert b, "polynomial modulus is zero"
    db = len(b) - 1
    inv_lead = pow(b[-1], ell - 2, ell)
    while len(a) - 1 >= db and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % ell
        shift = len(a) - 1 - db
        for i, x in enumerate(b):
            a[shift + i] = (a[shift + i] - c * x) % ell
        while a and a[-1] == 0:
            a.pop()
    return a


def _pgcd_mod(a, b, ell):
    a = _ptrim([x % ell for x in a])
    b = _ptrim([x % ell for x in b])
    while b:
        a, b = b, _pmod_mod(a, b, ell)
    if a:
        inv = pow(a[-1], ell - 2, ell)
        a = [x * inv % ell for x in a]
    return a


def _ppow_mod(base, e, mod, ell):
    result = [1]
    base = _pmod_mod(list(base), mod, ell)
    while e:
        if e & 1:
            result = _pmod_mod(_pmul_mod(result, base, ell), mod, ell)
        base = _pmod_mod(_pmul_mod(base, base, ell), mod, ell)
        e >>= 1
    return result


def _distinct_roots(p, ell):
    """All roots in F_ell of a polynomial that splits there (deterministic)."""
    p = list(p)
    xq = _ppow_mod([0, 1], ell, p, ell)
    g = _pgcd_mod([(x - y) % ell for x, y in _zip_pad(xq, [0, 1])], p, ell)
    out = []
    stack = [g]
    while stack:
        h = stack.pop()
        if len(h) <= 1:
            continue
        if len(h) == 2:
            inv = pow(h[1], ell - 2, ell)
            out.append((-h[0] * inv) % ell)
            continue
        a = 0
        while True:
            t = _ppow_mod([a, 1], (ell - 1) // 2, h, ell)
            t = _ptrim([(x - y) % ell for x, y in _zip_pad(t, [1])])
            g2 = _pgcd_mod(t, h, ell)
            if 0 < len(g2) - 1 < len(h) - 1:
                stack.append(g2)
                stack.append(_ptrim(_pdiv_exact(h, g2, ell)))
                break
            a += 1
            assert a < ell
    return sorted(out)


def _zip_pad(a, b):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)


def _pdiv_exact(a, b, ell):
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], ell - 2, ell)
    out = [0] * (len(a) - db)
    while len(a) - 1 >= db and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % ell
        shift = len(a) - 1 - db
        out[shift] = c
        for i, x in enumerate(b):
            a[shift + i] = (a[shift + i] - c * x) % ell
        while a and a[-1] == 0:
            a.pop()
    assert not a
    return out


# dense linear algebra mod ell

def _mat_vec_mod(N, v, ell):
    return tuple(sum(x * y for x, y in zip(row, v)) % ell for row in N)


def _charpoly_mod(A, ell):
    """det(xI - A) mod ell by Lagrange interpolation at x = 0..d."""
    d = len(A)
    xs = list(range(d + 1))
    ys = [_det_mod([[(x if i == j else 0) - A[i][j] for j in range(d)]
                    for i in range(d)], ell) for x in xs]
    # Lagrange interpolation
    coeffs = [0] * (d + 1)
    for i, xi in enumerate(xs):
        num = [1]
        den = 1
        for j, xj in enumerate(xs):
            if i != j:
                num = _pmul_mod(num, [(-xj) % ell, 1], ell)
                den = den * (xi - xj) % ell
        scale = ys[i] * pow(den, ell - 2, ell) % ell
        for k, c in enumerate(num):
            coeffs[k] = (coeffs[k] + scale * c) % ell
    return _ptrim(coeffs)


def _det_mod(rows, ell):
    rows = [list(r) for r in rows]
    n = len(rows)
    det = 1
    for col in range(n):
        piv = None
        for r in range(col, n):
            if rows[r][col] % ell:
                piv = r
                break
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        pv = rows[col][col] % ell
        det = det * pv % ell
        inv = pow(pv, ell - 2, ell)
        for r in range(col + 1, n):
            c = rows[r][col] % ell
            if c:
                f = c * inv % ell
                for k in range(col, n):
                    rows[r][k] = (rows[r][k] - f * rows[col][k]) % ell
    return det % ell


def _solve_mod(A_cols, targets, ell):
    """Solve A x = t for each target; A given by independent columns."""
    rdim = len(A_cols[0])
    d = len(A_cols)
    rows = [
        [A_cols[j][i] for j in range(d)] + [t[i] for t in targets]
        for i in range(rdim)
    ]
    piv_rows = []
    rank = 0
    for col in range(d):
        piv = None
        for r in range(rank, rdim):
            if rows[r][col] % ell:
                piv = r
                break
        assert piv is not None, "dependent basis columns"
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], ell - 2, ell)
        rows[rank] = [x * inv % ell for x in rows[rank]]
        for r in range(rdim):
            if r != rank and rows[r][col] % ell:
                f = rows[r][col]
                rows[r] = [
                    (x - f * y) % ell for x, y in zip(rows[r], rows[rank])
                ]
        piv_rows.append(rank)
        rank += 1
    # consistency: below-rank rows must have zero RHS
    for r in range(rank, rdim):
        assert all(x % ell == 0 for x in rows[r][d:]), "inconsistent solve"
    sols = []
    for idx in range(len(targets)):
        sols.append(tuple(rows[i][d + idx] for i in range(d)))
    return sols


def _kernel_mod(A, ell):
    """Basis of the kernel of a square matrix mod ell."""
    d = len(A)
    rows = [list(r) for r in A]
    pivots = {}
    rank = 0
    for col in range(d):
        piv = None
        for r in range(rank, d):
            if rows[r][col] % ell:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], ell - 2, ell)
        rows[rank] = [x * inv % ell for x in rows[rank]]
        for r in range(d):
            if r != rank and rows[r][col] % ell:
                f = rows[r][col]
                rows[r] = [(x - f * y) % ell for x, y in zip(rows[r], rows[rank])]
        pivots[col] = rank
        rank += 1
    basis = []
    free = [c for c in range(d) if c not in pivots]
    for fc in free:
        vec = [0] * d
        vec[fc] = 1
        for col, prow in pivots.items():
            vec[col] = (-rows[prow][fc]) % ell
        basis.append(tuple(vec))
    return basis


# ---------------------------------------------------------------------------
# eigenvector splitting and lifting

def common_eigenvectors(Ns, ell, skip=()):
    """Split F_ell^r into the common one-dimensional eigenspaces of the
    commuting matrices Ns; returns one vector per eigenspace.

    Kernel vectors sharing an eigenvalue stay together as one subspace to
    be split by later matrices."""
    r = len(Ns[0])
    spaces = [[tuple(1 if i == j else 0 for i in range(r)) for j in range(r)]]
    for idx, N in enumerate(Ns):
        if idx in skip:
            continue
        if all(len(B) == 1 for B in spaces):
            break
        new_spaces = []
        for B in spaces:
            if len(B) == 1:
                new_spaces.append(B)
                continue
            d = len(B)
            images = [_mat_vec_mod(N, b, ell) for b in B]
            rep_cols = _solve_mod(B, images, ell)
            Rep = [[rep_cols[j][i] for j in range(d)] for i in range(d)]
            roots = _distinct_roots(_charpoly_mod(Rep, ell), ell)
            if len(roots) == 1:
                new_spaces.append(B)
                continue
            for z in roots:
                shifted = [
                    [(Rep[i][j] - (z if i == j else 0)) % ell for j in range(d)]
                    for i in range(d)
                ]
                sub = [
                    tuple(
                        sum(kv[j] * B[j][i] for j in range(d)) % ell
                        for i in range(r)
                    )
                    for kv in _kernel_mod(shifted, ell)
                ]
                assert sub
                new_spaces.append(sub)
        spaces = new_spaces
    assert all(len(B) == 1 for B in spaces), "class algebra failed to split"
    return [B[0] for B in spaces]


# ---------------------------------------------------------------------------
# full table recovery

def character_rows(gd: glq.GroupData):
    """(cyclotomic order m, list of (degree, values)) for all irreducibles.

    Rows are canonically sorted by (degree, value key); values are exact
    cyclotomics of order m = exponent of the group.
    """
    r = len(gd.classes)
    sizes = [c.size for c in gd.classes]
    order = gd.order
    star = gd.star
    m = glq.exponent(gd.cs)
    counts = class_constants(gd)
    # N_i acting on coordinate columns: (N_i)[k][j] = a_{ijk} = counts[i][k][j]
    Ns = [counts[i] for i in range(r)]
    ell, w = find_prime(order, m)
    vecs = common_eigenvectors(Ns, ell, skip={gd.id_class})
    assert len(vecs) == r

    id_cls = gd.id_class
    rows = []
    for v in vecs:
        assert v[id_cls] % ell, "eigenvector vanishes at the identity class"
        inv0 = pow(v[id_cls], ell - 2, ell)
        v = [x * inv0 % ell for x in v]
        # |G| = deg^2 * sum_k |C_k| v[k*] v[k]  (orthogonality mod ell)
        S = sum(sizes[k] * v[star[k]] * v[k] for k in range(r)) % ell
        assert S, "degenerate eigenvector"
        deg_sq = order * pow(S, ell - 2, ell) % ell
        d0 = _sqrt_mod(deg_sq, ell)
        deg = min(d0, ell - d0)
        assert 0 < deg * deg <= order
        vals_mod = [deg * v[star[k]] % ell for k in range(r)]
        values = _lift_row(gd, vals_mod, deg, ell, w, m)
        rows.append((deg, values))

    rows.sort(key=lambda t: (t[0], tuple(val.sort_key() for val in t[1])))
    assert sum(d * d for d, _ in rows) == order, "degree check failed"
    return m, rows


def _lift_row(gd, vals_mod, deg, ell, w, m):
    """Exact values of one character from its values mod ell."""
    values = []
    for k in range(len(gd.classes)):
        dk = gd.classes[k].order
        powc = glq.power_classes(gd, k)
        zd = pow(w, (ell - 1) // dk, ell)
        zd_inv = pow(zd, ell - 2, ell)
        dk_inv = pow(dk, ell - 2, ell)
        val = Cyclo.zero(m)
        total = 0
        for u in range(dk):
            acc = 0
            zpow = 1
            zstep = pow(zd_inv, u, ell)
            for s in range(dk):
                acc += vals_mod[powc[s]] * zpow
                zpow = zpow * zstep % ell
            a_u = acc % ell * dk_inv % ell
            if a_u > deg:
                raise LiftFailure(
                    f"root multiplicity {a_u} exceeds degree {deg}"
                )
            if a_u:
                total += a_u
                val = val + Cyclo.root(m, u * (m // dk)) * a_u
        if total != deg:
            raise LiftFailure("multiplicities do not sum to the degree")
        values.append(val)
    return tuple(values)
