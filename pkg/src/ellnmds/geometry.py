"""Projective point sets, the monomial embedding of curves, and arc scans.

Points and hyperplanes of P^{k-1}(F_q) are tuples of k integer encodings,
normalized so the first nonzero coordinate is 1.  The canonical enumeration
walks normalized tuples in increasing big-endian value sum(c_i * q^(k-1-i)),
so (0,...,0,1) always comes first; all scans, reports and greedy choices
follow that order.

The heavy operations (secant profiles, addable-point scans) run on a digit
level matmul engine from :mod:`ellnmds.gf`, chunked to bounded memory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curve import INFINITY, EllipticCurve
from .errors import (
    ArcPropertyViolated,
    BadIndex,
    Budget,
    BudgetExceeded,
    DimensionMismatch,
    KOutOfRange,
    ensure_budget,
)
from .gf import Field, dot_zero_mask, linear_w_matrix

EAGER_VERIFY_LIMIT = 20_000_000  # incidence tests; arc property checked at build below this
_CHUNK_FLOATS = 24_000_000       # working-set bound for scan chunks


def proj_space_size(q: int, k: int) -> int:
    return (q**k - 1) // (q - 1)


def normalize_coords(field: Field, coords) -> tuple[int, ...]:
    coords = [int(c) for c in coords]
    for c in coords:
        if not 0 <= c < field.q:
            raise ValueError(f"encoding {c} out of range")
    lead = next((i for i, c in enumerate(coords) if c != 0), None)
    if lead is None:
        raise ValueError("projective coordinates cannot all vanish")
    if coords[lead] != 1:
        s = field.inv(coords[lead])
        coords = [field.mul(s, c) for c in coords]
    return tuple(coords)


def incidence(field: Field, hyperplane, point) -> bool:
    acc = 0
    for h, x in zip(hyperplane, point):
        acc = field.add(acc, field.mul(int(h), int(x)))
    return acc == 0


def coords_to_enc(coords: np.ndarray, q: int) -> np.ndarray:
    """Big-endian integer key of coordinate rows, unique per normalized point."""
    coords = np.asarray(coords, dtype=np.int64)
    enc = np.zeros(coords.shape[:-1], dtype=np.int64)
    for i in range(coords.shape[-1]):
        enc = enc * q + coords[..., i]
    return enc


def enc_to_coords(enc: np.ndarray, q: int, k: int) -> np.ndarray:
    enc = np.asarray(enc, dtype=np.int64)
    out = np.empty(enc.shape + (k,), dtype=np.int64)
    rem = enc
    for i in range(k - 1, -1, -1):
        out[..., i] = rem % q
        rem = rem // q
    return out


_REPS_CACHE: dict[tuple[int, int, int], tuple[np.ndarray, np.ndarray]] = {}
_REPS_CACHE_MAX_ROWS = 4_000_000


def proj_reps_cached(field: Field, k: int):
    """All normalized representatives plus their digit expansion, cached.

    Only spaces small enough to hold in memory are cached; callers fall back
    to the chunked generator above that size.  Returns (coords, digits) or
    None when the space is too large.
    """
    size = proj_space_size(field.q, k)
    if size > _REPS_CACHE_MAX_ROWS:
        return None
    key = (field.p, field.r, k)
    hit = _REPS_CACHE.get(key)
    if hit is None:
        from .gf import gemm_dtype, rows_digits

        coords = np.vstack(list(proj_reps(field, k)))
        digits = rows_digits(field, coords, gemm_dtype(field, k))
        hit = (coords, digits)
        _REPS_CACHE[key] = hit
    return hit


def proj_reps(field: Field, k: int, chunk_rows: int | None = None):
    """Yield all normalized representatives of P^{k-1}(F_q) in canonical order."""
    q = field.q
    if chunk_rows is None:
        chunk_rows = max(1, _CHUNK_FLOATS // (4 * k))
    for lead in range(k - 1, -1, -1):
        tail = k - 1 - lead
        total = q**tail
        for start in range(0, total, chunk_rows):
            stop = min(start + chunk_rows, total)
            m = np.arange(start, stop, dtype=np.int64)
            coords = np.zeros((stop - start, k), dtype=np.int64)
            coords[:, lead] = 1
            rem = m
            for i in range(k - 1, lead, -1):
                coords[:, i] = rem % q
                rem = rem // q
            yield coords


def psi(field: Field, i: int, x: int, y: int) -> int:
    """Monomial of pole order exactly i at the infinite point.

    Y^s for i = 3s, X*Y^s for i = 3s+2, X^2*Y^s for i = 3s+4.
    """
    if i < 2:
        raise BadIndex(f"monomial index {i} must be at least 2")
    rem = i % 3
    if rem == 0:
        s = i // 3
        return field.pow(y, s)
    if rem == 2:
        s = (i - 2) // 3
        return field.mul(x, field.pow(y, s))
    s = (i - 4) // 3
    return field.mul(field.mul(x, x), field.pow(y, s))


def phi_k(field: Field, point, k: int) -> tuple[int, ...]:
    """Image of a curve point under (1, psi_2, ..., psi_k); infinity maps to e_k."""
    if k < 3:
        raise KOutOfRange(f"embedding dimension k={k} must be at least 3")
    if point is INFINITY:
        return (0,) * (k - 1) + (1,)
    x, y = int(point[0]), int(point[1])
    return (1,) + tuple(psi(field, i, x, y) for i in range(2, k + 1))


class ProjPointSet:
    """An ordered list of distinct normalized points of P^{k-1}(F_q).

    Provides incidence machinery shared by arcs and their extensions.
    Instances are immutable; ``with_point`` returns an extended copy.
    """

    def __init__(self, field: Field, k: int, points):
        self.field = field
        self.k = k
        pts = [normalize_coords(field, p) for p in points]
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        self.points = tuple(pts)
        self.coords = np.array(pts, dtype=np.int64).reshape(len(pts), k)
        self.encs = coords_to_enc(self.coords, field.q)
        self._w = None
        self._profile = None

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def w_matrix(self) -> np.ndarray:
        if self._w is None:
            self._w = linear_w_matrix(self.field, self.coords)
        return self._w

    def with_point(self, coords) -> "ProjPointSet":
        ps = ProjPointSet(self.field, self.k, list(self.points) + [tuple(coords)])
        return ps

    def secant_count(self, hyperplane) -> int:
        h = np.asarray([normalize_coords(self.field, hyperplane)], dtype=np.int64)
        if h.shape[1] != self.k:
            raise DimensionMismatch(f"hyperplane has {h.shape[1]} coords, expected {self.k}")
        return int(dot_zero_mask(self.field, h, self.w_matrix).sum())

    def incident_points(self, hyperplane) -> list[tuple[int, ...]]:
        h = np.asarray([normalize_coords(self.field, hyperplane)], dtype=np.int64)
        mask = dot_zero_mask(self.field, h, self.w_matrix)[0]
        return [self.points[i] for i in np.flatnonzero(mask)]

    def secant_profile(self, budget: Budget | None = None) -> np.ndarray:
        """Histogram over all hyperplanes of the incidence count, length k+1."""
        if self._profile is None:
            profile, _ = secant_scan(self, ensure_budget(budget), collect_fulls=False)
            self._profile = profile
        return self._profile

    def max_secant(self, budget: Budget | None = None) -> int:
        profile = self.secant_profile(budget)
        return int(np.flatnonzero(profile)[-1])

    def profile_json(self, budget: Budget | None = None) -> dict:
        profile = self.secant_profile(budget)
        return {str(i): int(c) for i, c in enumerate(profile)}


class EllipticArc(ProjPointSet):
    """Image of a curve's rational points in P^{k-1}, infinite image last."""

    def __init__(self, curve: EllipticCurve, k: int, points):
        super().__init__(curve.field, k, points)
        self.curve = curve


def secant_count(hyperplane, ps: ProjPointSet) -> int:
    """Number of points of the set incident with the hyperplane."""
    return ps.secant_count(hyperplane)


def arc_make(curve: EllipticCurve, k: int, budget: Budget | None = None) -> EllipticArc:
    """Embed the curve's point list; verifies the no-(k+1)-coplanar property.

    Verification is immediate while #hyperplanes * n stays small and is
    otherwise deferred to the first full scan, which asserts it for free.
    """
    n = curve.n
    if not 3 <= k <= n - 1:
        raise KOutOfRange(f"k={k} outside [3, {n - 1}] for a curve with {n} points")
    field = curve.field
    pts = [phi_k(field, pt, k) for pt in curve.points]
    arc = EllipticArc(curve, k, pts)
    if proj_space_size(field.q, k) * n <= EAGER_VERIFY_LIMIT:
        arc.secant_profile(budget)  # raises ArcPropertyViolated on any overfull plane
    return arc


# ---- scanning engines ------------------------------------------------------


def _scan_chunk_rows(ps: ProjPointSet) -> int:
    width = max(1, ps.n * ps.field.r)
    return max(4096, _CHUNK_FLOATS // width)


def _map_ordered(fn, items, workers: int):
    """Apply fn over items, optionally on worker threads, preserving order.

    The heavy work inside fn is BLAS matmul, which releases the GIL, so
    threads give real concurrency; results merge in submission order to keep
    every downstream choice deterministic regardless of worker count.
    """
    if workers <= 1:
        for item in items:
            yield fn(item)
        return
    from collections import deque
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        pending = deque()
        for item in items:
            pending.append(pool.submit(fn, item))
            while len(pending) > workers + 1:
                yield pending.popleft().result()
        while pending:
            yield pending.popleft().result()


def secant_scan(ps: ProjPointSet, budget: Budget, collect_fulls: bool = True,
                chunk_rows: int | None = None, workers: int = 1):
    """Incidence counts over every hyperplane of P^{k-1}.

    Returns (profile, fulls) where profile[s] counts hyperplanes meeting the
    set in exactly s points and fulls holds the dual coordinates of the
    k-secant ones (empty array when collect_fulls is false).  Raises
    ArcPropertyViolated if any hyperplane exceeds k points.
    """
    field, k, n = ps.field, ps.k, ps.n
    space = proj_space_size(field.q, k)
    budget.charge("hyperplane_scan", space * n)
    profile = np.zeros(k + 1, dtype=np.int64)
    fulls = []
    w = ps.w_matrix
    step = chunk_rows or _scan_chunk_rows(ps)
    cached = proj_reps_cached(field, k)

    def chunks():
        if cached is not None:
            coords_all, digits_all = cached
            for start in range(0, len(coords_all), step):
                sl = slice(start, start + step)
                yield coords_all[sl], digits_all[sl]
        else:
            from .gf import gemm_dtype, rows_digits

            dtype = gemm_dtype(field, k)
            for coords in proj_reps(field, k, step):
                yield coords, rows_digits(field, coords, dtype)

    from .gf import dot_zero_mask_digits

    def work(pair):
        coords, digits = pair
        counts = dot_zero_mask_digits(field, digits, w).sum(axis=1)
        hit = coords[counts == k] if collect_fulls else None
        return counts, coords, hit

    for counts, coords, hit in _map_ordered(work, chunks(), workers):
        top = int(counts.max(initial=0))
        if top > k:
            bad = coords[int(np.argmax(counts))]
            raise ArcPropertyViolated(
                f"hyperplane {tuple(int(c) for c in bad)} meets the set in {top} > k={k} points"
            )
        profile += np.bincount(counts, minlength=k + 1)[: k + 1]
        if hit is not None and len(hit):
            fulls.append(hit)
    full_arr = np.vstack(fulls) if fulls else np.empty((0, k), dtype=np.int64)
    return profile, full_arr


def filter_by_fulls(field: Field, cand: np.ndarray, fulls: np.ndarray,
                    start_batch: int = 32, max_batch: int = 4096) -> np.ndarray:
    """Remove candidate points lying on any of the given hyperplanes.

    Walks the hyperplane list in doubling batches; most candidates die early,
    so the expected work is far below len(cand) * len(fulls).
    """
    if len(cand) == 0 or len(fulls) == 0:
        return cand
    pos = 0
    batch = start_batch
    while pos < len(fulls) and len(cand):
        block = fulls[pos: pos + batch]
        w = linear_w_matrix(field, block)
        on_any = dot_zero_mask(field, cand, w).any(axis=1)
        cand = cand[~on_any]
        pos += len(block)
        batch = min(batch * 2, max_batch)
    return cand


def addable_points(ps: ProjPointSet, budget: Budget | None = None,
                   workers: int = 1) -> list[tuple[int, ...]]:
    """All external points every hyperplane through which meets the set
    in at most k-1 points.

    Enumerates every hyperplane, records the k-secant (full) ones, and
    excludes the union of full hyperplanes together with the set itself.
    Results follow the canonical point order.
    """
    budget = ensure_budget(budget)
    field, k, n = ps.field, ps.k, ps.n
    profile, fulls = secant_scan(ps, budget, workers=workers)
    if ps._profile is None:
        ps._profile = profile
    survivors = []
    own = np.sort(ps.encs)
    for coords in proj_reps(field, k, _scan_chunk_rows(ps)):
        encs = coords_to_enc(coords, field.q)
        cand = coords[~np.isin(encs, own)]
        cand = filter_by_fulls(field, cand, fulls)
        survivors.extend(tuple(int(c) for c in row) for row in cand)
    return survivors


def _combination_chunks(n: int, m: int):
    """Index arrays of all m-subsets of range(n), grouped by smallest member."""
    if m == 1:
        yield np.arange(n, dtype=np.int64)[:, None]
        return
    for first in range(n - m + 1):
        rest = np.array(
            list(_combinations_fixed(first + 1, n, m - 1)), dtype=np.int64
        )
        if len(rest) == 0:
            continue
        block = np.empty((len(rest), m), dtype=np.int64)
        block[:, 0] = first
        block[:, 1:] = rest
        yield block


def _combinations_fixed(start: int, stop: int, m: int):
    import itertools

    return itertools.combinations(range(start, stop), m)


def _null_duals(field: Field, mats: np.ndarray) -> np.ndarray:
    """Cofactor null vector of (k-1) x k stacks; zero rows mean rank < k-1.

    Minors are built bottom-up over the trailing rows so every level reuses
    the previous one instead of re-expanding, which matters at millions of
    stacked subsets.
    """
    import itertools as _it

    m = mats.shape[1]
    k = mats.shape[2]
    level: dict[tuple, np.ndarray] = {
        (j,): mats[:, m - 1, j].copy() for j in range(k)
    }
    for t in range(2, m + 1):
        row = m - t
        nxt: dict[tuple, np.ndarray] = {}
        for cols in _it.combinations(range(k), t):
            acc = None
            for i, col in enumerate(cols):
                sub = cols[:i] + cols[i + 1:]
                term = field.mul_np(mats[:, row, col], level[sub])
                if acc is None:
                    acc = term
                else:
                    acc = field.add_np(acc, term) if i % 2 == 0 else field.sub_np(acc, term)
            nxt[cols] = acc
        level = nxt
    duals = np.empty((len(mats), k), dtype=np.int64)
    all_cols = tuple(range(k))
    for i in range(k):
        sub = all_cols[:i] + all_cols[i + 1:]
        duals[:, i] = level[sub] if i % 2 == 0 else field.neg_np(level[sub])
    return duals


def _normalize_rows(field: Field, coords: np.ndarray) -> np.ndarray:
    """Vectorized projective normalization; rows must be nonzero."""
    coords = np.asarray(coords, dtype=np.int64)
    nz = coords != 0
    lead_idx = np.argmax(nz, axis=1)
    lead = coords[np.arange(len(coords)), lead_idx]
    scale = field.inv_np(lead)
    if field.r == 1:
        return (coords * scale[:, None]) % field.p
    return field.mul_np(coords, scale[:, None])


def _null_space_rows(field: Field, mat: list[list[int]], k: int) -> list[list[int]]:
    """Basis of the right null space of a small matrix over F_q (row lists)."""
    rows = [list(r) for r in mat]
    pivots = []
    rank = 0
    for col in range(k):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = field.inv(rows[rank][col])
        rows[rank] = [field.mul(inv, v) for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                c = rows[i][col]
                rows[i] = [field.sub(v, field.mul(c, w)) for v, w in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(k) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * k
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = field.neg(rows[i][fc])
        basis.append(vec)
    return basis


def full_hyperplanes_via_subsets(ps: ProjPointSet, budget: Budget | None = None) -> np.ndarray:
    """Dual coordinates of every k-secant hyperplane, via (k-1)-subset spans.

    Every hyperplane carrying k points of the set is spanned by one of its
    independent (k-1)-subsets; degenerate subsets (possible only after points
    were added to an arc) contribute their whole pencil instead.  Exact.
    """
    budget = ensure_budget(budget)
    field, k, n = ps.field, ps.k, ps.n
    m = k - 1
    n_subsets = math.comb(n, m)
    budget.charge("subset_span_scan", n_subsets * (n + k * m * m))
    w = ps.w_matrix
    found = []
    for block in _combination_chunks(n, m):
        mats = ps.coords[block]  # (R, m, k)
        duals = _null_duals(field, mats)
        zero_rows = ~duals.any(axis=1)
        if zero_rows.any():
            for idx in np.flatnonzero(zero_rows):
                sub = [list(ps.coords[i]) for i in block[idx]]
                basis = np.asarray(_null_space_rows(field, sub, k), dtype=np.int64)
                for mix in proj_reps(field, len(basis), 1 << 12):
                    combo = np.zeros((len(mix), k), dtype=np.int64)
                    for t in range(len(basis)):
                        combo = field.add_np(combo, field.mul_np(mix[:, t: t + 1], basis[t][None, :]))
                    found.append(_normalize_rows(field, combo))
            duals = duals[~zero_rows]
        if len(duals):
            found.append(_normalize_rows(field, duals))
    if not found:
        return np.empty((0, k), dtype=np.int64)
    all_duals = np.vstack(found)
    encs = coords_to_enc(all_duals, field.q)
    uniq = np.unique(encs)
    coords = enc_to_coords(uniq, field.q, k)
    # keep exactly the k-secant ones
    keep = []
    chunk = _scan_chunk_rows(ps)
    for start in range(0, len(coords), chunk):
        block = coords[start: start + chunk]
        counts = dot_zero_mask(field, block, w).sum(axis=1)
        if counts.max(initial=0) > k:
            raise ArcPropertyViolated("a spanned hyperplane exceeds k incidences")
        keep.append(block[counts == k])
    return np.vstack(keep) if keep else np.empty((0, k), dtype=np.int64)


def addable_filter(ps: ProjPointSet, candidates, budget: Budget | None = None,
                   fulls: np.ndarray | None = None) -> list[tuple[int, ...]]:
    """Addability test restricted to a candidate point list.

    Uses subset-span enumeration of full hyperplanes, so the cost scales with
    C(n, k-1) instead of the hyperplane count of the whole space.  A
    precomputed full-hyperplane array for the same point set may be passed.
    """
    budget = ensure_budget(budget)
    field = ps.field
    cand = np.array([normalize_coords(field, c) for c in candidates], dtype=np.int64)
    if len(cand) == 0:
        return []
    order = np.argsort(coords_to_enc(cand, field.q), kind="stable")
    cand = cand[order]
    cand = cand[~np.isin(coords_to_enc(cand, field.q), ps.encs)]
    if fulls is None:
        fulls = full_hyperplanes_via_subsets(ps, budget)
    survivors = filter_by_fulls(field, cand, fulls)
    return [tuple(int(c) for c in row) for row in survivors]


def max_extension_chain(ps: ProjPointSet, limit: int, budget: Budget | None = None) -> int:
    """Longest chain of point additions preserving the section bound.

    Exact geometric counterpart of h-extendability: a chain step may add any
    point of the ambient space, repeats included, provided no hyperplane then
    collects more than k points counted with multiplicity.  Greedy completion
    can stop early (different choices complete at different sizes), so this
    maximum, not the greedy count, is what matches the code-level oracle.
    Only feasible for small ambient spaces.
    """
    budget = ensure_budget(budget)
    field, k = ps.field, ps.k
    cached = proj_reps_cached(field, k)
    if cached is None:
        raise BudgetExceeded("max_extension_chain", proj_space_size(field.q, k), 0)
    reps, reps_digits = cached
    space = len(reps)
    budget.charge("extension_chain", space * (ps.n + limit) * (limit + 1) * 8)
    from .gf import dot_zero_mask_digits

    base_cols = ps.coords
    w_reps = linear_w_matrix(field, reps)
    memo: dict[tuple, int] = {}

    def explore(extra: tuple, depth: int) -> int:
        if depth == limit:
            return 0
        key = tuple(sorted(extra))
        hit = memo.get(key)
        if hit is not None:
            return hit
        cols = base_cols
        if extra:
            cols = np.vstack([base_cols, enc_to_coords(np.array(key), field.q, k)])
        w = linear_w_matrix(field, cols)
        counts = dot_zero_mask_digits(field, reps_digits, w).sum(axis=1)
        if counts.max(initial=0) > k:
            raise ArcPropertyViolated("multiset section bound exceeded inside a chain")
        fulls = reps[counts == k]
        if len(fulls):
            blocked = dot_zero_mask(field, fulls, w_reps).any(axis=0)
            addable = reps[~blocked]
        else:
            addable = reps
        best = 0
        for row in addable:
            enc = int(coords_to_enc(row[None, :], field.q)[0])
            best = max(best, 1 + explore(extra + (enc,), depth + 1))
            if best == limit - depth:
                break
        memo[key] = best
        return best

    return explore((), 0)


@dataclass
class CompletionResult:
    added: list[tuple[int, ...]]
    complete: bool
    final: ProjPointSet
    strategy: str


def complete_arc(ps: ProjPointSet, max_add: int, budget: Budget | None = None,
                 candidates=None) -> CompletionResult:
    """Greedy completion by addable points, smallest encoding first.

    With ``candidates`` given, each round restricts the search to the still
    unused candidates; adding a point only shrinks the addable set, so this
    stays exact when the initial candidate list covers every addable point.
    """
    if max_add < 0:
        raise ValueError("max_add must be nonnegative")
    budget = ensure_budget(budget)
    added: list[tuple[int, ...]] = []
    current = ps
    pool = candidates
    strategy = "full_scan" if candidates is None else "candidate_filter"

    def addable_now():
        if pool is None:
            return addable_points(current, budget)
        return addable_filter(current, pool, budget)

    addable = addable_now()
    while addable and len(added) < max_add:
        pick = addable[0]
        added.append(pick)
        current = current.with_point(pick)
        if pool is not None:
            pool = [c for c in addable if tuple(c) != pick]
        addable = addable_now()
    return CompletionResult(added=added, complete=not addable, final=current,
                            strategy=strategy)
