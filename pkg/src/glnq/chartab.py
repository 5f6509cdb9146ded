"""Exact character tables of desk-scale GL(n,q): construction, induced and
permutation class functions, class-index labeling by constraint search, the
real symmetrization, and a versioned JSON disk cache.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import dixon, gfq, glq
from .cyclotomic import Cyclo
from .errors import (
    BudgetExceeded,
    LabelingInconsistent,
    NotConstantOnD,
)
from .partitions import enumerate_partitions, hook_stats, q_binomial, ssyt_count

CACHE_FORMAT_VERSION = 1
MAX_CLASSES = 40


@dataclass
class ClassFunction:
    """Values of a class function, aligned with the canonical class order."""

    cs: glq.ClassSystem
    values: tuple

    def inner(self, other: "ClassFunction"):
        """Exact scalar product (1/|G|) sum |C| f conj(g)."""
        acc = None
        for size, a, b in zip(
            (c.size for c in self.cs.classes), self.values, other.values
        ):
            term = _as_cyclo(a, 1) * _conj(b) * size
            acc = term if acc is None else acc + term
        return acc * Fraction(1, self.cs.order)


def _as_cyclo(v, m):
    if isinstance(v, Cyclo):
        return v
    return Cyclo.from_rational(m, v)


def _conj(v):
    if isinstance(v, Cyclo):
        return v.conj()
    return v


@dataclass
class CharacterTable:
    """Exact irreducible character values over the canonical class order."""

    cs: glq.ClassSystem
    m: int  # cyclotomic order = exponent of the group
    degrees: tuple
    rows: tuple  # rows[r][k]: Cyclo value at class k
    labels: list | None = None  # row -> ClassIndex
    label_options: list | None = None  # row -> tuple of ClassIndex survivors
    label_survivors: int = 0
    strata: list | None = None  # row -> tuple over i of lambda(alpha^i)_1
    conj_row: list | None = None  # row pairing under complex conjugation

    @property
    def n_rows(self):
        return len(self.rows)

    def row_label(self, r) -> glq.ClassIndex:
        assert self.labels is not None
        return self.labels[r]


def exponent_of(cs: glq.ClassSystem) -> int:
    return glq.exponent(cs)


def dixon_table(gd: glq.GroupData, max_classes=MAX_CLASSES) -> CharacterTable:
    """Exact table via the modular eigenvector method, fully verified:
    row and column orthogonality hold exactly, conjugate rows pair up."""
    if len(gd.classes) > max_classes:
        raise BudgetExceeded(f"{len(gd.classes)} classes exceed budget {max_classes}")
    m, rows = dixon.character_rows(gd)
    degrees = tuple(d for d, _ in rows)
    values = tuple(vals for _, vals in rows)
    table = CharacterTable(cs=gd.cs, m=m, degrees=degrees, rows=values)
    _verify_orthogonality(table)
    table.conj_row = _conjugate_pairing(table)
    return table


def _verify_orthogonality(table: CharacterTable):
    cs = table.cs
    r = table.n_rows
    sizes = [c.size for c in cs.classes]
    order = cs.order
    # row orthogonality: sum_k |C_k| chi_k conj(chi'_k) = delta |G|
    for a in range(r):
        ra = table.rows[a]
        for b in range(a, r):
            rb = table.rows[b]
            acc = Cyclo.zero(table.m)
            for k in range(r):
                acc = acc + ra[k] * rb[k].conj() * sizes[k]
            expected = order if a == b else 0
            assert acc == expected, f"row orthogonality fails at ({a},{b})"
    # column orthogonality: sum_rows chi(g_k) conj(chi(g_l)) = delta |G|/|C_k|
    for k in range(r):
        for l in range(k, r):
            acc = Cyclo.zero(table.m)
            for a in range(r):
                acc = acc + table.rows[a][k] * table.rows[a][l].conj()
            expected = Fraction(order, sizes[k]) if k == l else Fraction(0)
            assert acc == expected, f"column orthogonality fails at ({k},{l})"
    assert sum(d * d for d in table.degrees) == order


def _conjugate_pairing(table: CharacterTable):
    keyed = {}
    for r, row in enumerate(table.rows):
        keyed[tuple(v.sort_key() for v in row)] = r
    pairing = []
    for r, row in enumerate(table.rows):
        key = tuple(v.conj().sort_key() for v in row)
        pairing.append(keyed[key])
    for r, rr in enumerate(pairing):
        assert pairing[rr] == r
    return pairing


# ---------------------------------------------------------------------------
# class functions: fixed-tuple counts, determinant twists, space counts

def theta_root(cs: glq.ClassSystem, m: int, i: int, det_log: int) -> Cyclo:
    """theta(det^i) as a root of unity of order q-1 inside Q(zeta_m)."""
    q = cs.q
    assert m % (q - 1) == 0
    return Cyclo.root(m, (i * det_log * (m // (q - 1))) % m)


def zeta_character(cs: glq.ClassSystem, t: int, i: int, m: int | None = None) -> ClassFunction:
    """Fixed t-tuple count twisted by theta(det^i): the value at a class with
    fixed-space dimension d is theta(det^i) (q^d-1)(q^d-q)...(q^d-q^{t-1})."""
    if m is None:
        m = exponent_of(cs)
    q = cs.q
    vals = []
    for info in cs.classes:
        d = info.fixed_dim
        count = 1
        for j in range(t):
            count *= q**d - q**j
        count = max(count, 0)
        if count and i % (q - 1):
            vals.append(theta_root(cs, m, i, info.det_log) * count)
        else:
            vals.append(Cyclo.from_rational(m, count))
    return ClassFunction(cs, tuple(vals))


def _rref(F, rows):
    rows = [list(r) for r in rows]
    if not rows:
        return ()
    n_cols = len(rows[0])
    rank = 0
    for col in range(n_cols):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inv[rows[rank][col]]
        rows[rank] = [F.mul[x][inv] for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                c = F.neg[rows[r][col]]
                rows[r] = [
                    F.add[x][F.mul[c][y]] for x, y in zip(rows[r], rows[rank])
                ]
        rank += 1
    return tuple(tuple(r) for r in rows[:rank])


def enumerate_t_spaces(F, n: int, t: int):
    """Canonical (RREF) bases of all t-dimensional subspaces of F_q^n."""
    import itertools

    if t == 0:
        return [()]
    seen = set()
    out = []
    vectors = [v for v in itertools.product(range(F.q), repeat=n) if any(v)]
    for combo in itertools.combinations(vectors, t):
        basis = _rref(F, combo)
        if len(basis) != t:
            continue
        if basis not in seen:
            seen.add(basis)
            out.append(basis)
    out.sort()
    return out


def space_perm_character(cs: glq.ClassSystem, t: int, m: int | None = None) -> ClassFunction:
    """Number of t-spaces fixed (setwise) by each class, by enumeration."""
    F, n = cs.field, cs.n
    if F.q**n > 4096:
        raise BudgetExceeded("subspace enumeration beyond q^n = 4096")
    if m is None:
        m = exponent_of(cs)
    spaces = enumerate_t_spaces(F, n, t)
    assert len(spaces) == q_binomial(n, t, F.q)
    vals = []
    for info in cs.classes:
        g = info.rep
        cnt = 0
        for basis in spaces:
            image = tuple(gfq.mat_vec(F, g, v) for v in basis)
            if _rref(F, image) == basis:
                cnt += 1
        vals.append(Cyclo.from_rational(m, cnt))
    return ClassFunction(cs, tuple(vals))


def hook_degree(F, sigma: glq.ClassIndex, n: int) -> int:
    """Character degree from the q-analog hook-length formula."""
    q = F.q
    num = Fraction(1)
    for i in range(1, n + 1):
        num *= q**i - 1
    den = Fraction(1)
    for f, lam in sigma.items:
        d = len(f) - 1
        hooks, b = hook_stats(lam)
        den /= Fraction(q ** (d * b))
        for h in hooks:
            den *= q ** (d * h) - 1
    out = num / den
    assert out.denominator == 1 and out > 0
    return int(out)


# ---------------------------------------------------------------------------
# parabolic induction

def parabolic_order(q, comp):
    """Order of the block upper-triangular subgroup with diagonal sizes comp."""
    out = 1
    off = 0
    total = sum(comp)
    for c in comp:
        out *= glq.group_order(q, c)
        off += c
    cells = 0
    acc = 0
    for idx, c in enumerate(comp):
        rest = total - acc - c
        cells += c * rest
        acc += c
    return out * q**cells


def induce_parabolic(parts, comp, gd: glq.GroupData, part_groups) -> ClassFunction:
    """Induce the product of class functions on the diagonal blocks from the
    block upper-triangular subgroup up to the full group.

    parts[i] is a ClassFunction on part_groups[i] (= GL(comp[i], q)); the
    value at a class of the big group is the averaged sum of the product of
    block values over all conjugates landing in the subgroup."""
    F = gd.field
    n = gd.n
    assert sum(comp) == n
    m = exponent_of(gd.cs)
    sub_order = parabolic_order(F.q, comp)
    offs = []
    off = 0
    for c in comp:
        offs.append((off, off + c))
        off += c

    def block_upper(M):
        for bi in range(len(comp)):
            lo_i, hi_i = offs[bi]
            for r in range(lo_i, hi_i):
                for c_ in range(0, lo_i):
                    if M[r][c_]:
                        return False
        return True

    values = []
    all_matrices = [gd.matrix(i) for i in range(gd.order)]
    for info in gd.classes:
        g = info.rep
        acc = Cyclo.zero(m)
        for x in all_matrices:
            xg = gfq.mat_mul(F, x, g)
            conj_g = gfq.mat_mul(F, xg, gfq.mat_inv(F, x))
            if not block_upper(conj_g):
                continue
            term = Cyclo.from_rational(m, 1)
            for bi, (lo, hi) in enumerate(offs):
                block = tuple(row[lo:hi] for row in conj_g[lo:hi])
                cid = part_groups[bi].class_of_matrix(block)
                term = term * parts[bi].values[cid]
            acc = acc + term
        values.append(acc * Fraction(1, sub_order))
    return ClassFunction(gd.cs, tuple(values))


# ---------------------------------------------------------------------------
# labeling

def _zeta_multiplicities(table: CharacterTable):
    """mult[(k, i)][row] = multiplicity of the row in the fixed-k-tuple
    class function twisted by det^i; all must be nonnegative integers."""
    cs = table.cs
    q = cs.q
    n = cs.n
    sizes = [c.size for c in cs.classes]
    out = {}
    for i in range(q - 1):
        for k in range(n + 1):
            zf = zeta_character(cs, k, i, table.m)
            mults = []
            for row in table.rows:
                acc = Cyclo.zero(table.m)
                for cid in range(len(sizes)):
                    acc = acc + zf.values[cid] * row[cid].conj() * sizes[cid]
                val = acc * Fraction(1, cs.order)
                fr = val.as_fraction()
                assert fr.denominator == 1 and fr >= 0, "non-integral multiplicity"
                mults.append(int(fr))
            out[(k, i)] = tuple(mults)
    return out


def _row_strata(table: CharacterTable, zmults):
    """strata[r][i] = first part of the label at X - alpha^i, recovered from
    the smallest k whose twisted fixed-tuple character contains the row."""
    cs = table.cs
    q, n = cs.q, cs.n
    strata = []
    for r in range(table.n_rows):
        per_i = []
        for i in range(q - 1):
            k_min = next(k for k in range(n + 1) if zmults[(k, i)][r] > 0)
            per_i.append(n - k_min)
        strata.append(tuple(per_i))
    return strata


def label_table(table: CharacterTable, survivors_cap=100_000) -> CharacterTable:
    """Assign a class index to every row so that (a) degrees match the
    hook-length formula, (b) linear rows match the determinant characters
    exactly, (c) constituent strata match first parts at every X - alpha^i,
    (d) conjugate rows carry reciprocal labels, and (e) assembled Kostka
    combinations reproduce the independently computed t-space counts.
    All satisfying assignments are counted; the canonically first is kept."""
    cs = table.cs
    F, q, n = cs.field, cs.q, cs.n
    m = table.m
    zmults = _zeta_multiplicities(table)
    strata = _row_strata(table, zmults)
    conj_row = table.conj_row or _conjugate_pairing(table)

    lambdas = [c.sigma for c in cs.classes]
    lam_key = {sig: glq.class_index_key(sig) for sig in lambdas}
    lam_star = {sig: glq.class_star(F, sig) for sig in lambdas}
    lam_deg = {sig: hook_degree(F, sig, n) for sig in lambdas}
    lam_strata = {
        sig: tuple(sig.first_part((F.neg[F.exp[i % (q - 1)]], 1)) for i in range(q - 1))
        for sig in lambdas
    }

    # (b): linear rows must equal a determinant character exactly
    forced = {}
    for i in range(q - 1):
        target = tuple(
            theta_root(cs, m, i, info.det_log).sort_key() for info in cs.classes
        )
        for r in range(table.n_rows):
            if table.degrees[r] == 1:
                key = tuple(v.sort_key() for v in table.rows[r])
                if key == target:
                    forced[r] = glq.make_class_index(
                        [((F.neg[F.exp[i % (q - 1)]], 1), (n,))]
                    )
    assert len(forced) == q - 1, "determinant characters not identified"

    candidates = []
    for r in range(table.n_rows):
        if r in forced:
            candidates.append([forced[r]])
            continue
        opts = [
            sig
            for sig in lambdas
            if lam_deg[sig] == table.degrees[r] and lam_strata[sig] == strata[r]
        ]
        if not opts:
            raise LabelingInconsistent(f"no candidate label for row {r}")
        candidates.append(sorted(opts, key=lambda s: lam_key[s]))

    # orbits of rows under conjugation, assigned equivariantly
    orbits = []
    seen = set()
    for r in range(table.n_rows):
        if r in seen:
            continue
        rr = conj_row[r]
        seen.add(r)
        seen.add(rr)
        orbits.append((r, rr))

    space_chars = {
        t: tuple(v.as_fraction() for v in space_perm_character(cs, t, m).values)
        for t in range(0, n // 2 + 1)
    }
    kost_n = {
        (lam, t): ssyt_count(lam, (n - t, t) if t else (n,))
        for lam in enumerate_partitions(n)
        for t in range(0, n // 2 + 1)
    }

    solutions = []
    assignment = {}
    used = set()

    def check_e(assign):
        # assembled Kostka combinations at X-1 must equal the t-space counts
        one = glq.x_minus_one(F)
        rows_at_one = {}
        for r, sig in assign.items():
            if len(sig.items) == 1 and sig.items[0][0] == one:
                rows_at_one[sig.items[0][1]] = r
        for t in range(0, n // 2 + 1):
            acc = [Cyclo.zero(m) for _ in cs.classes]
            for lam, r in rows_at_one.items():
                coeff = kost_n[(lam, t)]
                if coeff:
                    for cid in range(len(cs.classes)):
                        acc[cid] = acc[cid] + table.rows[r][cid] * coeff
            for cid in range(len(cs.classes)):
                if not acc[cid].is_rational() or acc[cid].as_fraction() != space_chars[t][cid]:
                    return False
        return True

    def backtrack(oidx):
        if len(solutions) >= survivors_cap:
            return
        if oidx == len(orbits):
            if check_e(assignment):
                solutions.append(dict(assignment))
            return
        r, rr = orbits[oidx]
        for sig in candidates[r]:
            if sig in used:
                continue
            sig_star = lam_star[sig]
            if r == rr:
                if sig_star != sig:
                    continue
                assignment[r] = sig
                used.add(sig)
                backtrack(oidx + 1)
                used.discard(sig)
                assignment.pop(r, None)
            else:
                if sig_star == sig or sig_star in used:
                    continue
                if sig_star not in candidates[rr]:
                    continue
                assignment[r] = sig
                assignment[rr] = sig_star
                used.add(sig)
                used.add(sig_star)
                backtrack(oidx + 1)
                used.discard(sig)
                used.discard(sig_star)
                assignment.pop(r, None)
                assignment.pop(rr, None)

    backtrack(0)
    if not solutions:
        raise LabelingInconsistent("no labeling satisfies all constraints")

    chosen = solutions[0]
    labels = [chosen[r] for r in range(table.n_rows)]
    options = []
    for r in range(table.n_rows):
        opts = sorted({sol[r] for sol in solutions}, key=lambda s: lam_key[s])
        options.append(tuple(opts))

    # uniqueness sanity: the assignment must be a bijection onto Lambda_n
    assert len(set(labels)) == table.n_rows

    out = CharacterTable(
        cs=cs,
        m=table.m,
        degrees=table.degrees,
        rows=table.rows,
        labels=labels,
        label_options=options,
        label_survivors=len(solutions),
        strata=strata,
        conj_row=conj_row,
    )
    return out


# ---------------------------------------------------------------------------
# symmetrization

@dataclass
class SymmetrizedTable:
    """Real-symmetrized view: rows are chi (self-reciprocal) or chi + chi*,
    columns are merged inverse-closed class pairs."""

    table: CharacterTable
    row_labels: list  # canonical ClassIndex per psi row
    row_chis: list  # tuple of chi-row indices merged into the psi row
    psi: list  # psi[r][c]: Cyclo, per merged column
    psi_degrees: list  # psi(1) as int
    chi_degrees: list  # chi(1) of (either) constituent
    col_sigmas: list  # canonical ClassIndex per merged column
    col_class_ids: list  # tuple of class ids merged into the column
    d_sizes: list  # |D_sigma|
    trivial_row: int

    @property
    def cs(self):
        return self.table.cs

    def row_by_label(self, sigma):
        return self.row_labels.index(sigma)

    def col_by_class(self, cid):
        for c, ids in enumerate(self.col_class_ids):
            if cid in ids:
                return c
        raise KeyError(cid)


def symmetrize(table: CharacterTable) -> SymmetrizedTable:
    if table.labels is None:
        raise LabelingInconsistent("symmetrize requires a labeled table")
    cs = table.cs
    F = cs.field
    label_to_row = {sig: r for r, sig in enumerate(table.labels)}

    # merged columns, one per star-orbit of classes, canonical representative
    col_sigmas, col_ids, d_sizes = [], [], []
    for cid in cs.omega:
        orbit = (cid,) if cs.star[cid] == cid else (cid, cs.star[cid])
        col_sigmas.append(cs.classes[cid].sigma)
        col_ids.append(orbit)
        d_sizes.append(sum(cs.classes[c].size for c in orbit))

    row_labels, row_chis, psi, psi_deg, chi_deg = [], [], [], [], []
    trivial_sigma = glq.make_class_index([(glq.x_minus_one(F), (cs.n,))])
    for r, sig in enumerate(table.labels):
        star_sig = glq.class_star(F, sig)
        if star_sig != sig and glq.class_index_key(star_sig) < glq.class_index_key(sig):
            continue  # the partner row carries the merged character
        chis = (r,) if star_sig == sig else (r, label_to_row[star_sig])
        vals = []
        for c, orbit in enumerate(col_ids):
            per_class = []
            for cid in orbit:
                v = table.rows[chis[0]][cid]
                for extra in chis[1:]:
                    v = v + table.rows[extra][cid]
                per_class.append(v)
            for v in per_class[1:]:
                if v != per_class[0]:
                    raise NotConstantOnD(
                        f"psi not constant on merged class pair {col_sigmas[c]}"
                    )
            if not per_class[0].is_real():
                raise NotConstantOnD(f"psi not real at column {col_sigmas[c]}")
            vals.append(per_class[0])
        row_labels.append(sig)
        row_chis.append(chis)
        psi.append(vals)
        psi_deg.append(sum(table.degrees[x] for x in chis))
        chi_deg.append(table.degrees[r])
    trivial_row = row_labels.index(trivial_sigma)
    return SymmetrizedTable(
        table=table,
        row_labels=row_labels,
        row_chis=row_chis,
        psi=psi,
        psi_degrees=psi_deg,
        chi_degrees=chi_deg,
        col_sigmas=col_sigmas,
        col_class_ids=col_ids,
        d_sizes=d_sizes,
        trivial_row=trivial_row,
    )


# ---------------------------------------------------------------------------
# disk cache

def _sigma_to_json(sigma: glq.ClassIndex):
    return [[list(f), list(lam)] for f, lam in sigma.items]


def _sigma_from_json(data):
    return glq.make_class_index((tuple(f), tuple(lam)) for f, lam in data)


def table_to_json(table: CharacterTable) -> dict:
    cs = table.cs
    return {
        "format_version": CACHE_FORMAT_VERSION,
        "q": cs.q,
        "n": cs.n,
        "modulus": list(cs.field.modulus),
        "alpha": cs.field.alpha,
        "exponent": table.m,
        "classes": [
            {"sigma": _sigma_to_json(c.sigma), "size": c.size} for c in cs.classes
        ],
        "characters": [
            {
                "degree": table.degrees[r],
                **(
                    {"label": _sigma_to_json(table.labels[r])}
                    if table.labels is not None
                    else {}
                ),
                "values": [v.to_strings() for v in table.rows[r]],
            }
            for r in range(table.n_rows)
        ],
        "label_survivors": table.label_survivors,
    }


def save_table(table: CharacterTable, path: str):
    doc = table_to_json(table)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")
    os.replace(tmp, path)


def load_table(path: str, cs: glq.ClassSystem) -> CharacterTable | None:
    """Rebind a cached table to a freshly built class system; returns None on
    any mismatch (version, field modulus, generator, class list)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    F = cs.field
    if (
        doc.get("format_version") != CACHE_FORMAT_VERSION
        or doc.get("q") != cs.q
        or doc.get("n") != cs.n
        or tuple(doc.get("modulus", ())) != F.modulus
        or doc.get("alpha") != F.alpha
    ):
        return None
    cached_classes = [
        (_sigma_from_json(c["sigma"]), c["size"]) for c in doc["classes"]
    ]
    ours = [(c.sigma, c.size) for c in cs.classes]
    if cached_classes != ours:
        return None
    m = doc["exponent"]
    degrees, rows, labels = [], [], []
    for ch in doc["characters"]:
        degrees.append(ch["degree"])
        rows.append(tuple(Cyclo.from_strings(m, vs) for vs in ch["values"]))
        labels.append(_sigma_from_json(ch["label"]) if "label" in ch else None)
    has_labels = all(l is not None for l in labels)
    table = CharacterTable(
        cs=cs,
        m=m,
        degrees=tuple(degrees),
        rows=tuple(rows),
        labels=labels if has_labels else None,
        label_survivors=doc.get("label_survivors", 0),
    )
    assert sum(d * d for d in table.degrees) == cs.order
    table.conj_row = _conjugate_pairing(table)
    if has_labels:
        zm = _zeta_multiplicities(table)
        table.strata = _row_strata(table, zm)
    return table


def cache_path(cache_dir: str, q: int, n: int) -> str:
    return os.path.join(cache_dir, f"chartab_q{q}_n{n}.json")


def default_cache_dir() -> str:
    env = os.environ.get("GLQ_CACHE_DIR")
    if env:
        return env
    base = os.environ.get("XDG_CACHE_HOME", os.path.expanduser("~/.cache"))
    return os.path.join(base, "glnq")
