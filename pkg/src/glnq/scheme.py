"""The symmetrized conjugacy-class association scheme: eigenvalue matrix
P(lambda, sigma) = |D_sigma| psi_sigma / psi(1), dense primitive-idempotent
verification under a size budget, and weighted spectral (Hoffman-type)
bounds on independent and cross-independent sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import gfq, glq
from .chartab import CharacterTable, SymmetrizedTable
from .cyclotomic import Cyclo
from .errors import BudgetExceeded, DegenerateWeights

DENSE_BUDGET = 500


@dataclass
class SchemeEigen:
    """Exact eigenvalue matrix of the symmetrized scheme."""

    sym: SymmetrizedTable
    P: list  # P[row][col]: Cyclo, real

    @property
    def trivial_row(self):
        return self.sym.trivial_row


def eigenvalue_matrix(sym: SymmetrizedTable) -> SchemeEigen:
    P = []
    for r in range(len(sym.row_labels)):
        deg = sym.psi_degrees[r]
        row = []
        for c in range(len(sym.col_sigmas)):
            val = sym.psi[r][c] * Fraction(sym.d_sizes[c], deg)
            assert val.is_real(), "scheme eigenvalue is not real"
            row.append(val)
        P.append(row)
    # the trivial row must read |D_sigma|
    for c in range(len(sym.col_sigmas)):
        assert P[sym.trivial_row][c] == sym.d_sizes[c]
    return SchemeEigen(sym=sym, P=P)


# ---------------------------------------------------------------------------
# dense idempotent verification (budgeted)

def _psi_class_values(sym: SymmetrizedTable, r):
    """psi value per ungrouped class id."""
    table = sym.table
    cs = table.cs
    vals = [None] * len(cs.classes)
    for c, ids in enumerate(sym.col_class_ids):
        for cid in ids:
            vals[cid] = sym.psi[r][c]
    return vals


def _translation_classes(gd: glq.GroupData):
    """conv[pos][k] = class of u^{-1} z_k where u is the pos-th element."""
    cache = getattr(gd, "_conv_classes", None)
    if cache is None:
        F = gd.field
        inv_pos = glq.inverse_positions(gd)
        reps = [c.rep for c in gd.classes]
        cache = []
        for pos in range(gd.order):
            u_inv = gd.matrix(inv_pos[pos])
            cache.append(
                tuple(
                    gd.class_of_matrix(gfq.mat_mul(F, u_inv, zk)) for zk in reps
                )
            )
        gd._conv_classes = cache
    return cache


def _is_zero_val(v):
    if isinstance(v, Cyclo):
        return v.is_zero()
    return v == 0


def _convolve_class_functions(gd: glq.GroupData, f_vals, g_vals, m):
    """(f * g)(z_k) = sum_u f(u) g(u^{-1} z_k), evaluated per class of z.

    A direct |G|-term sum per class; entries of products of translation-
    invariant matrices equal exactly these convolutions."""
    conv = _translation_classes(gd)
    out = []
    for k in range(len(gd.classes)):
        acc = Cyclo.zero(m)
        for pos in range(gd.order):
            fu = f_vals[gd.class_of[pos]]
            if _is_zero_val(fu):
                continue
            acc = acc + fu * g_vals[conv[pos][k]]
        out.append(acc)
    return out


def idempotent_check(gd: glq.GroupData, sym: SymmetrizedTable) -> dict:
    """Build the merged primitive idempotents E_lambda explicitly and verify
    E_a E_b = delta E_a, the trace/rank identities, completeness, and the
    eigenvector property A_sigma E_lambda = P(lambda, sigma) E_lambda.

    Matrix entries depend only on x^{-1} y, so every matrix identity is an
    identity of |G|-term convolutions, checked exactly per class."""
    if gd.order > DENSE_BUDGET:
        raise BudgetExceeded(f"|G| = {gd.order} exceeds dense budget {DENSE_BUDGET}")
    cs = gd.cs
    n_rows = len(sym.row_labels)
    order = gd.order

    # e_lambda(g) = (chi(1)/|G|) psi(g); E_lambda(x,y) = e_lambda(x^{-1}y)
    e_funcs = []
    for r in range(n_rows):
        scale = Fraction(sym.chi_degrees[r], order)
        e_funcs.append([v * scale for v in _psi_class_values(sym, r)])

    eigen = eigenvalue_matrix(sym)
    report = {"order": order, "rows": n_rows, "ranks": [], "checks": []}

    # pairwise products
    for a in range(n_rows):
        for b in range(n_rows):
            conv = _convolve_class_functions(gd, e_funcs[a], e_funcs[b], sym.table.m)
            target = e_funcs[a] if a == b else [Cyclo.zero(1)] * len(cs.classes)
            for k in range(len(cs.classes)):
                assert conv[k] == target[k], f"E_{a} E_{b} mismatch at class {k}"
    report["checks"].append("idempotent products")

    # trace and rank: trace E = |G| e(identity) = chi(1) psi(1)
    total_rank = 0
    for r in range(n_rows):
        tr = e_funcs[r][cs.id_class] * order
        expected = sym.chi_degrees[r] * sym.psi_degrees[r]
        assert tr == expected
        report["ranks"].append(expected)
        total_rank += expected
    assert total_rank == order
    report["checks"].append("trace/rank sum")

    # completeness: sum E_lambda = identity matrix (delta at identity class)
    for k in range(len(cs.classes)):
        acc = Cyclo.zero(1)
        for r in range(n_rows):
            acc = acc + e_funcs[r][k]
        assert acc == (1 if k == cs.id_class else 0)
    report["checks"].append("completeness")

    # eigenvector property: 1_{D_sigma} * e_lambda = P(lambda, sigma) e_lambda
    for c in range(len(sym.col_sigmas)):
        ind = [
            1 if k in sym.col_class_ids[c] else 0 for k in range(len(cs.classes))
        ]
        for r in range(n_rows):
            conv = _convolve_class_functions(gd, ind, e_funcs[r], sym.table.m)
            for k in range(len(cs.classes)):
                assert conv[k] == eigen.P[r][c] * e_funcs[r][k], (
                    f"A_sigma E mismatch at sigma={c}, lambda={r}, class {k}"
                )
    report["checks"].append("eigenvector property")
    return report


# ---------------------------------------------------------------------------
# weighted spectral bounds

@dataclass
class HoffmanCertificate:
    mode: str  # "independent" | "cross"
    p0: Cyclo
    p_min: Cyclo | None
    p_max_abs: Cyclo | None
    bound_ratio: Fraction | None  # rational when the extremes are rational
    bound_count: Fraction | None  # ratio * |G|
    attaining: list  # row indices achieving the extreme
    p_values: list  # per psi row
    bound_ratio_exact: Cyclo | None = None


def _sign(v: Cyclo) -> int:
    return v.real_sign()


def _lt(a: Cyclo, b: Cyclo) -> bool:
    return _sign(a - b) < 0


def _abs_val(v: Cyclo) -> Cyclo:
    return v if _sign(v) >= 0 else -v


def hoffman_bound(eigen: SchemeEigen, w: dict, mode: str = "independent") -> HoffmanCertificate:
    """Weighted spectral bound from the eigenvalue matrix.

    w maps column indices (merged classes) to exact weights.  The trivial
    row must get positive total weight; independent mode uses the minimum
    eigenvalue, cross mode the largest nontrivial absolute value."""
    sym = eigen.sym
    n_rows = len(sym.row_labels)
    p_vals = []
    for r in range(n_rows):
        acc = Cyclo.zero(1)
        for c, wc in w.items():
            acc = acc + eigen.P[r][c] * wc
        p_vals.append(acc)
    p0 = p_vals[eigen.trivial_row]
    if _sign(p0) <= 0:
        raise DegenerateWeights("trivial-row value is not positive")

    others = [r for r in range(n_rows) if r != eigen.trivial_row]
    p_min, min_rows = None, []
    p_max, max_rows = None, []
    for r in others:
        v = p_vals[r]
        if p_min is None or _lt(v, p_min):
            p_min, min_rows = v, [r]
        elif v == p_min:
            min_rows.append(r)
        av = _abs_val(v)
        if p_max is None or _lt(p_max, av):
            p_max, max_rows = av, [r]
        elif av == p_max:
            max_rows.append(r)

    order = sym.cs.order
    if mode == "independent":
        ratio_c = None
        if _sign(p_min) < 0:
            amin = -p_min
            ratio_c = amin / (p0 + amin)
        attaining = min_rows
    elif mode == "cross":
        ratio_c = p_max / (p0 + p_max)
        attaining = max_rows
    else:
        raise ValueError(f"unknown mode {mode!r}")
    ratio = (
        ratio_c.as_fraction()
        if ratio_c is not None and ratio_c.is_rational()
        else None
    )
    count = ratio * order if ratio is not None else None
    return HoffmanCertificate(
        mode=mode,
        p0=p0,
        p_min=p_min,
        p_max_abs=p_max,
        bound_ratio=ratio,
        bound_count=count,
        attaining=attaining,
        p_values=p_vals,
        bound_ratio_exact=ratio_c,
    )
