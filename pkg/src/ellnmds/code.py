"""Linear codes over F_q from generator matrices.

Parameters [n, k, d], dual distance, Singleton defects and the
MDS / NMDS / AMDS classification.  Codes built from curve embeddings keep a
reference to their arc, which enables a second, geometric route to the
minimum distance (n minus the largest hyperplane incidence count); whenever
both routes run they are compared and a mismatch is a hard error.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .curve import EllipticCurve
from .errors import Budget, BudgetExceeded, ensure_budget
from .gf import Field, dot_zero_mask, linear_w_matrix
from .geometry import EllipticArc, arc_make, proj_space_size

LABEL_MDS = "MDS"
LABEL_NMDS = "NMDS"
LABEL_AMDS = "AMDS-not-NMDS"
LABEL_OTHER = "OTHER"


def rref_gf(field: Field, rows):
    """Reduced row echelon form with leftmost pivoting; returns (rref, pivots)."""
    mat = [list(map(int, r)) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(mat)):
            if mat[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = field.inv(mat[rank][col])
        mat[rank] = [field.mul(inv, v) for v in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                c = mat[i][col]
                mat[i] = [field.sub(v, field.mul(c, w)) for v, w in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    return mat, pivots


def rank_gf(field: Field, rows) -> int:
    return len(rref_gf(field, rows)[1])


def parity_check(field: Field, rows):
    """Rows spanning the dual code, from the standard-form construction."""
    rref, pivots = rref_gf(field, rows)
    k = len(pivots)
    n = len(rows[0])
    free = [c for c in range(n) if c not in pivots]
    h = []
    for fc in free:
        vec = [0] * n
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = field.neg(rref[i][fc])
        h.append(vec)
    return h


class LinearCode:
    """A code presented by spanning rows; parameters are computed on demand."""

    def __init__(self, field: Field, rows, arc: EllipticArc | None = None):
        rows = [tuple(int(v) for v in r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("generator matrix must be nonempty")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("ragged generator matrix")
        for r in rows:
            for v in r:
                if not 0 <= v < field.q:
                    raise ValueError(f"entry {v} out of range for GF({field.q})")
        self.field = field
        self.rows = tuple(rows)
        self.n = n
        self.k = rank_gf(field, rows)
        if self.k == 0:
            raise ValueError("zero code has no distance parameters")
        self.arc = arc
        self._d = None
        self._d_dual = None
        self._d_paths = None

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    def to_matrix_text(self) -> str:
        head = f"{self.field.q} {len(self.rows)} {self.n}"
        body = "\n".join(" ".join(str(v) for v in row) for row in self.rows)
        return head + "\n" + body + "\n"

    def __repr__(self):
        return f"LinearCode(q={self.field.q}, n={self.n}, k={self.k})"


def parse_matrix_text(text: str) -> LinearCode:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    q, k, n = (int(t) for t in lines[0].split())
    from .gf import field_of_order

    field = field_of_order(q)
    rows = [[int(t) for t in ln.split()] for ln in lines[1 : k + 1]]
    if len(rows) != k or any(len(r) != n for r in rows):
        raise ValueError("matrix body does not match declared shape")
    return LinearCode(field, rows)


def generator_matrix(curve: EllipticCurve, k: int, budget: Budget | None = None) -> LinearCode:
    """Code spanned by the rows of the k x n matrix of embedded curve points."""
    arc = arc_make(curve, k, budget)
    cols = arc.coords  # (n, k), curve point order with the infinite image last
    rows = cols.T.tolist()
    return LinearCode(curve.field, rows, arc=arc)


def _normalized_rows_iter(q: int, k: int, chunk: int = 1 << 15):
    """Normalized representatives of nonzero x in F_q^k, odometer order."""
    for lead in range(k - 1, -1, -1):
        tail = k - 1 - lead
        total = q**tail
        for start in range(0, total, chunk):
            stop = min(start + chunk, total)
            m = np.arange(start, stop, dtype=np.int64)
            block = np.zeros((stop - start, k), dtype=np.int64)
            block[:, lead] = 1
            rem = m
            for i in range(k - 1, lead, -1):
                block[:, i] = rem % q
                rem = rem // q
            yield block


def _codeword_weights(code: LinearCode, budget: Budget) -> np.ndarray:
    """Hamming weights of one codeword per projective class of messages."""
    from .geometry import proj_reps_cached
    from .gf import dot_zero_mask_digits

    field = code.field
    m = len(code.rows)
    reps = proj_space_size(field.q, m)
    budget.charge("codeword_enumeration", reps * code.n)
    w = linear_w_matrix(field, code.matrix.T)  # dot rows: x . column selections
    cached = proj_reps_cached(field, m)
    if cached is not None:
        _, digits = cached
        return code.n - dot_zero_mask_digits(field, digits, w).sum(axis=1)
    weights = []
    for block in _normalized_rows_iter(field.q, m):
        zero = dot_zero_mask(field, block, w)
        weights.append(code.n - zero.sum(axis=1))
    return np.concatenate(weights)


def min_distance(code: LinearCode, budget: Budget | None = None) -> int:
    """Exact minimum Hamming weight over nonzero codewords.

    Codes carrying an arc are computed geometrically (n minus the largest
    hyperplane incidence count) and cross-checked against direct codeword
    enumeration whenever the budget allows the second pass; a disagreement
    raises immediately.
    """
    if code._d is not None:
        return code._d
    budget = ensure_budget(budget)
    d_geo = None
    d_cw = None
    if code.arc is not None:
        d_geo = code.n - code.arc.max_secant(budget)
        try:
            budget.check("codeword_enumeration",
                         proj_space_size(code.field.q, len(code.rows)) * code.n)
            run_cw = True
        except BudgetExceeded:
            run_cw = False
        if run_cw:
            weights = _codeword_weights(code, budget)
            d_cw = int(weights[weights > 0].min())
            if d_cw != d_geo:
                raise AssertionError(
                    f"distance paths disagree: codewords give {d_cw}, incidences give {d_geo}"
                )
    else:
        weights = _codeword_weights(code, budget)
        d_cw = int(weights[weights > 0].min())
    code._d = d_geo if d_geo is not None else d_cw
    code._d_paths = {"codewords": d_cw, "secants": d_geo}
    return code._d


def weight_distribution(code: LinearCode, budget: Budget | None = None) -> list[int]:
    """Full weight enumerator coefficients A_0..A_n."""
    budget = ensure_budget(budget)
    a = [0] * (code.n + 1)
    a[0] = 1
    if code.arc is not None and code.k == len(code.rows):
        profile = code.arc.secant_profile(budget)
        for s, cnt in enumerate(profile.tolist()):
            if cnt:
                a[code.n - s] += (code.field.q - 1) * cnt
        return a
    weights = _codeword_weights(code, budget)
    binc = np.bincount(weights, minlength=code.n + 1)
    # each nonzero codeword class is hit by q^(rows - rank) message classes
    fiber = code.field.q ** (len(code.rows) - code.k)
    for wgt in range(1, code.n + 1):
        hits = (code.field.q - 1) * int(binc[wgt])
        assert hits % fiber == 0
        a[wgt] += hits // fiber
    return a


def krawtchouk(n: int, q: int, j: int, i: int) -> int:
    return sum(
        (-1) ** s * math.comb(i, s) * math.comb(n - i, j - s) * (q - 1) ** (j - s)
        for s in range(0, min(i, j) + 1)
        if j - s <= n - i
    )


def macwilliams_transform(a: list[int], n: int, k: int, q: int) -> list[int]:
    """Weight distribution of the dual code, exact integer arithmetic."""
    size = q**k
    b = []
    for j in range(n + 1):
        acc = sum(a[i] * krawtchouk(n, q, j, i) for i in range(n + 1))
        if acc % size:
            raise AssertionError("dual weight distribution is not integral")
        b.append(acc // size)
    if b[0] != 1 or any(v < 0 for v in b):
        raise AssertionError("invalid dual weight distribution")
    return b


def dual_min_distance_from_distribution(code: LinearCode, budget: Budget | None = None) -> int:
    b = macwilliams_transform(weight_distribution(code, budget), code.n, code.k, code.field.q)
    for j in range(1, code.n + 1):
        if b[j]:
            return j
    raise AssertionError("dual code has no nonzero word")


def dual_min_distance(code: LinearCode, budget: Budget | None = None) -> int | None:
    """Smallest size of a linearly dependent set of columns of G.

    Subset-rank search with early exit, sizes 1 through k+1.  Returns None
    for full-length-rank codes (n == k) whose dual is the zero code.
    """
    if code._d_dual is not None:
        return code._d_dual
    budget = ensure_budget(budget)
    field = code.field
    cols = code.matrix.T.tolist()
    n, k = code.n, code.k
    if n == k:
        return None
    top = min(k + 1, n)
    budget.charge("dual_subset_rank", sum(math.comb(n, s) for s in range(1, top + 1)))
    for size in range(1, top + 1):
        if size == k + 1:
            code._d_dual = size  # any k+1 columns in a rank-k space are dependent
            return size
        for sub in itertools.combinations(range(n), size):
            if rank_gf(field, [cols[i] for i in sub]) < size:
                code._d_dual = size
                return size
    code._d_dual = top
    return top


@dataclass
class Classification:
    n: int
    k: int
    d: int
    d_dual: int | None
    s: int
    s_dual: int | None
    label: str

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "dDual": self.d_dual,
            "s": self.s,
            "sDual": self.s_dual,
            "label": self.label,
        }


def classify(code: LinearCode, budget: Budget | None = None,
             dual_via_distribution: bool | None = None) -> Classification:
    """Singleton defects of the code and its dual, and the derived label."""
    budget = ensure_budget(budget)
    d = min_distance(code, budget)
    if dual_via_distribution is None:
        dual_via_distribution = code.arc is not None
    if dual_via_distribution and code.k == len(code.rows):
        d_dual = dual_min_distance_from_distribution(code, budget)
        code._d_dual = code._d_dual or d_dual
    else:
        d_dual = dual_min_distance(code, budget)
    s = code.n - code.k + 1 - d
    assert 0 <= s <= max(0, code.n - code.k), "Singleton bound violated"
    if d_dual is None:
        s_dual = None
        label = LABEL_MDS if s == 0 else LABEL_OTHER
    else:
        s_dual = code.k + 1 - d_dual
        if s == 0:
            label = LABEL_MDS
        elif s == 1 and s_dual == 1:
            label = LABEL_NMDS
        elif s == 1 and s_dual >= 2:
            label = LABEL_AMDS
        else:
            label = LABEL_OTHER
    return Classification(code.n, code.k, d, d_dual, s, s_dual, label)


def extend(code: LinearCode, column) -> LinearCode:
    """Code of length n+1 spanned by the rows with one appended column.

    No parameter claims are made; compute them on the result.
    """
    col = [int(v) for v in column]
    if len(col) != len(code.rows):
        raise ValueError(f"column length {len(col)} does not match {len(code.rows)} rows")
    rows = [r + (c,) for r, c in zip(code.rows, col)]
    return LinearCode(code.field, rows)


def project_back(code: LinearCode, h: int) -> LinearCode:
    if h < 0 or h >= code.n:
        raise ValueError("cannot project away that many coordinates")
    rows = [r[: code.n - h] for r in code.rows]
    return LinearCode(code.field, rows)


def same_code(a: LinearCode, b: LinearCode) -> bool:
    if a.field != b.field or a.n != b.n:
        return False
    ra = rref_gf(a.field, a.rows)[0][: a.k]
    rb = rref_gf(b.field, b.rows)[0][: b.k]
    return ra == rb


def h_extendability_oracle(code: LinearCode, h: int, budget: Budget | None = None,
                           prefilter: bool = True) -> bool:
    """Whether an [n+h, k, d+h] extension exists, by search over added columns.

    Columns are taken up to scalar (scaling a column never changes weights).
    With ``prefilter`` the search walks only chains whose every prefix is
    itself a valid extension, which is an exact reduction; without it the
    whole tuple space is tried, which is only feasible for tiny q^k.
    """
    if h < 0:
        raise ValueError("h must be nonnegative")
    if h == 0:
        return True
    budget = ensure_budget(budget)
    field = code.field
    d = min_distance(code, budget)
    weights = _codeword_weights(code, budget)
    reps = np.vstack(list(_normalized_rows_iter(field.q, len(code.rows))))
    w = linear_w_matrix(field, reps)
    nonzero = ~dot_zero_mask(field, reps, w)  # (N_x, N_c) indicator of x.c != 0
    n_cols = nonzero.shape[1]
    if prefilter:
        budget.charge("extendability_chain_search", n_cols * h * len(weights))
    else:
        budget.charge("extendability_brute_force", (n_cols**h) * len(weights))

    if not prefilter:
        for tup in itertools.product(range(n_cols), repeat=h):
            acc = weights.astype(np.int64).copy()
            for c in tup:
                acc += nonzero[:, c]
            if int(acc[weights > 0].min()) == d + h:
                return True
        return False

    nz_mask = weights > 0

    def search(depth: int, acc: np.ndarray, start: int) -> bool:
        if depth == h:
            return True
        target = d + depth + 1
        for c in range(start, n_cols):
            nxt = acc + nonzero[:, c]
            if int(nxt[nz_mask].min()) == target:
                if search(depth + 1, nxt, c):
                    return True
        return False

    return search(0, weights.astype(np.int64), 0)
