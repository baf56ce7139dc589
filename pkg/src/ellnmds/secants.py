"""Lines of the projective plane versus a fixed elliptic cubic.

Two routes to the same classification:

* :func:`line_meet` factors the restriction of the curve equation to one
  line exactly (root finding by exhaustive evaluation) and reports rational
  intersection points with multiplicities.
* :class:`LineSystem` classifies every line of the plane at once from
  incidence counts plus direct tangent enumeration, which is what the
  whole-plane scans and the witness searches run on.

Both work on the squared-away model Y^2 = g(X) internally; the shift back to
the curve's own coordinates is an affine map of the plane, so incidence,
tangency and multiplicities transfer unchanged.

Line duals (a, b, c) encode a + b*X + c*Y = 0; vertical lines have c = 0 and
the line at infinity is (1, 0, 0).  A "trisecant" meets the curve in three
distinct rational points, a "tangent" has a contact of multiplicity at least
two, and a line with exactly two distinct simple rational points cannot occur
against Y^2 = g(X) once the infinite point is accounted for, so the chord
class stays empty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import INFINITY, EllipticCurve
from .errors import PointOnCurve
from .geometry import normalize_coords

KIND_SPARSE = "sparse"
KIND_TANGENT = "tangent"
KIND_TRISECANT = "trisecant"
KIND_CHORD = "chord"

_KIND_BY_CODE = {0: KIND_SPARSE, 1: KIND_TANGENT, 2: KIND_TRISECANT, 3: KIND_CHORD}


@dataclass
class LineMeet:
    dual: tuple[int, int, int]
    kind: str
    points: tuple  # ((x, y) or INFINITY, multiplicity) pairs
    vertical: bool
    at_infinity: bool

    @property
    def rational_count(self) -> int:
        return len(self.points)

    @property
    def multiplicity_sum(self) -> int:
        return sum(m for _, m in self.points)


@dataclass
class LineProfile:
    """Counts over the q+1 rational lines through a point, plus the
    closure-tangency data the classical tangent bounds are about.

    ``tangents`` counts rational lines with a rational double contact; these
    partition the pencil together with the other three counts.  A tangent
    line touching the cubic at a conjugate pair of points is not a rational
    line at all, so the bound of six tangents and the existence of a
    non-vertical one live in ``geometric_tangents`` and
    ``has_nonvertical_tangent``, computed from the slope discriminant without
    leaving F_q.  ``geometric_tangents`` is None in the degenerate case of an
    identically vanishing discriminant.
    """

    point: tuple[int, int, int]
    tangents: int
    trisecants: int
    chords: int
    sparse: int
    geometric_tangents: int | None
    has_nonvertical_tangent: bool

    @property
    def total(self) -> int:
        return self.tangents + self.trisecants + self.chords + self.sparse

    def to_json_dict(self) -> dict:
        return {
            "point": list(self.point),
            "tangents": self.tangents,
            "trisecants": self.trisecants,
            "chords": self.chords,
            "sparse": self.sparse,
            "geometricTangents": self.geometric_tangents,
            "hasNonVerticalTangent": self.has_nonvertical_tangent,
        }


def _short_dual(curve: EllipticCurve, dual) -> tuple[int, int, int]:
    """Map a line dual from curve coordinates to the squared-away plane."""
    f = curve.field
    a, b, c = (int(v) for v in dual)
    h1 = curve._short["h1"]
    h0 = curve._short["h0"]
    return (f.sub(a, f.mul(c, h0)), f.sub(b, f.mul(c, h1)), c)


def _orig_dual(curve: EllipticCurve, dual_short) -> tuple[int, int, int]:
    f = curve.field
    a, b, c = (int(v) for v in dual_short)
    h1 = curve._short["h1"]
    h0 = curve._short["h0"]
    return (f.add(a, f.mul(c, h0)), f.add(b, f.mul(c, h1)), c)


def _cubic_roots_with_multiplicity(field, coeffs):
    """Rational roots of a monic cubic, coefficients (c0, c1, c2) low first."""
    c0, c1, c2 = coeffs
    roots = []
    poly = [c0, c1, c2, 1]
    for x in range(field.q):
        x2 = field.mul(x, x)
        val = field.add(
            field.add(field.mul(x, x2), field.mul(c2, x2)),
            field.add(field.mul(c1, x), c0),
        )
        if val == 0:
            roots.append(x)
    out = []
    for root in roots:
        mult = 0
        work = poly
        while len(work) > 1:
            quot, rem = _synthetic_division(field, work, root)
            if rem != 0:
                break
            mult += 1
            work = quot
        out.append((root, mult))
    return out


def _synthetic_division(field, poly, root):
    """Divide poly (low-first coefficients) by (X - root)."""
    acc = 0
    quot = [0] * (len(poly) - 1)
    for i in range(len(poly) - 1, 0, -1):
        acc = field.add(poly[i], field.mul(acc, root))
        quot[i - 1] = acc
    rem = field.add(poly[0], field.mul(acc, root))
    return quot, rem


def line_meet(curve: EllipticCurve, dual) -> LineMeet:
    """Exact rational intersection of one line with the curve."""
    field = curve.field
    dual_n = normalize_coords(field, dual)
    a, b, c = _short_dual(curve, dual_n)
    A, B, C = curve.short_form()

    def back(x, z):
        return (x, curve.y_unshift(x, z))

    if b == 0 and c == 0:
        return LineMeet(dual_n, KIND_TANGENT, ((INFINITY, 3),), False, True)
    if c == 0:
        x0 = field.neg(field.div(a, b))
        gx = curve.g_of_x(x0)
        z = field.sqrt(gx)
        if z is None:
            points = ((INFINITY, 1),)
            kind = KIND_SPARSE
        elif z == 0:
            points = ((back(x0, 0), 2), (INFINITY, 1))
            kind = KIND_TANGENT
        else:
            points = tuple(sorted(((back(x0, z), 1), (back(x0, field.neg(z)), 1)))) + ((INFINITY, 1),)
            kind = KIND_TRISECANT
        return LineMeet(dual_n, kind, points, True, False)

    m = field.neg(field.div(b, c))
    t = field.neg(field.div(a, c))
    # (mX + t)^2 = g(X): monic cubic X^3 + (A - m^2) X^2 + (B - 2mt) X + (C - t^2)
    c2 = field.sub(A, field.mul(m, m))
    c1 = field.sub(B, field.mul(2 % field.p, field.mul(m, t)))
    c0 = field.sub(C, field.mul(t, t))
    roots = _cubic_roots_with_multiplicity(field, (c0, c1, c2))
    pts = tuple(
        (back(x, field.add(field.mul(m, x), t)), mult) for x, mult in sorted(roots)
    )
    simple = [p for p, mult in pts if mult == 1]
    if any(mult >= 2 for _, mult in pts):
        kind = KIND_TANGENT
    elif len(simple) == 3:
        kind = KIND_TRISECANT
    elif len(simple) == 2:
        kind = KIND_CHORD  # unreachable for Y^2 = g(X); kept for honesty
    else:
        kind = KIND_SPARSE
    return LineMeet(dual_n, kind, pts, False, False)


def point_on_curve(curve: EllipticCurve, point) -> bool:
    p1, p2, p3 = normalize_coords(curve.field, point)
    if p1 == 0:
        return (p1, p2, p3) == (0, 0, 1)
    return curve.is_on_curve(p2, p3)


def lines_through(field, point):
    """All q+1 normalized line duals through a projective plane point."""
    p = normalize_coords(field, point)
    # cross products with the unit vectors span the orthogonal plane
    candidates = [
        (0, field.neg(p[2]), p[1]),
        (p[2], 0, field.neg(p[0])),
        (field.neg(p[1]), p[0], 0),
    ]
    basis = []
    for cand in candidates:
        if any(cand) and _rank2(field, basis + [list(cand)]) == len(basis) + 1:
            basis.append(list(cand))
        if len(basis) == 2:
            break
    duals = set()
    for alpha, beta in [(0, 1)] + [(1, b) for b in range(field.q)]:
        combo = tuple(
            field.add(field.mul(alpha, u), field.mul(beta, v))
            for u, v in zip(basis[0], basis[1])
        )
        duals.add(normalize_coords(field, combo))
    assert len(duals) == field.q + 1
    return sorted(duals, key=lambda d: _enc3(field.q, d))


def _enc3(q, d):
    return (d[0] * q + d[1]) * q + d[2]


def _rank2(field, rows):
    mat = [list(r) for r in rows]
    rank = 0
    for col in range(3):
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
                cc = mat[i][col]
                mat[i] = [field.sub(v, field.mul(cc, w)) for v, w in zip(mat[i], mat[rank])]
        rank += 1
    return rank


# ---- closure tangency via the slope discriminant ---------------------------


def _pdeg(poly) -> int:
    d = len(poly) - 1
    while d > 0 and poly[d] == 0:
        d -= 1
    return d if any(poly) else -1


def _ptrim(poly):
    d = _pdeg(poly)
    return [0] if d < 0 else list(poly[: d + 1])


def _padd(field, a, b):
    n = max(len(a), len(b))
    return _ptrim([
        field.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0)
        for i in range(n)
    ])


def _psub(field, a, b):
    n = max(len(a), len(b))
    return _ptrim([
        field.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0)
        for i in range(n)
    ])


def _pmul(field, a, b):
    if _pdeg(a) < 0 or _pdeg(b) < 0:
        return [0]
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = field.add(out[i + j], field.mul(ai, bj))
    return _ptrim(out)


def _pscale(field, a, s):
    return _ptrim([field.mul(s, v) for v in a])


def _pderiv(field, a):
    return _ptrim([field.mul(i % field.p, a[i]) for i in range(1, len(a))]) if len(a) > 1 else [0]


def _pmod(field, a, b):
    a = list(a)
    db = _pdeg(b)
    inv = field.inv(b[db])
    while _pdeg(a) >= db and db >= 0:
        da = _pdeg(a)
        coef = field.mul(a[da], inv)
        for i in range(db + 1):
            a[da - db + i] = field.sub(a[da - db + i], field.mul(coef, b[i]))
        a = _ptrim(a)
        if _pdeg(a) < 0:
            break
    return _ptrim(a)


def _pgcd(field, a, b):
    a, b = _ptrim(a), _ptrim(b)
    while _pdeg(b) >= 0:
        a, b = b, _pmod(field, a, b)
    return a


def _pdivmod(field, a, b):
    a = list(a)
    db = _pdeg(b)
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    inv = field.inv(b[db])
    quot = [0] * max(1, _pdeg(a) - db + 1)
    while _pdeg(a) >= db:
        da = _pdeg(a)
        coef = field.mul(a[da], inv)
        quot[da - db] = coef
        for i in range(db + 1):
            a[da - db + i] = field.sub(a[da - db + i], field.mul(coef, b[i]))
    return _ptrim(quot), _ptrim(a)


def _distinct_root_count(field, poly) -> int:
    """Number of distinct roots of poly over the algebraic closure.

    Irreducible polynomials over a finite field are separable, so the count
    is the degree of the radical; factors whose multiplicity is divisible by
    the characteristic hide inside gcd(f, f') and are recovered by the
    standard substitution X^p -> X.
    """
    d = _pdeg(poly)
    if d <= 0:
        return 0
    deriv = _pderiv(field, poly)
    if _pdeg(deriv) < 0:
        return _distinct_root_count(field, [poly[i] for i in range(0, d + 1, field.p)])
    g = _pgcd(field, poly, deriv)
    if _pdeg(g) == 0:
        return d
    w, rem = _pdivmod(field, poly, g)
    assert _pdeg(rem) < 0
    y = g
    while True:
        h = _pgcd(field, y, w)
        if _pdeg(h) <= 0:
            break
        y = _pdivmod(field, y, h)[0]
    dy = _pdeg(y)
    assert dy % field.p == 0 or dy == 0
    z = [y[i] for i in range(0, dy + 1, field.p)]
    return _pdeg(w) + _distinct_root_count(field, z)


def _cubic_discriminant_poly(field, a, b, c):
    """Discriminant of X^3 + a X^2 + b X + c where a, b, c are polynomials.

    18abc - 4a^3c + a^2b^2 - 4b^3 - 27c^2, valid in every odd characteristic.
    """
    t1 = _pscale(field, _pmul(field, _pmul(field, a, b), c), 18 % field.p)
    t2 = _pscale(field, _pmul(field, _pmul(field, _pmul(field, a, a), a), c), 4 % field.p)
    t3 = _pmul(field, _pmul(field, a, a), _pmul(field, b, b))
    t4 = _pscale(field, _pmul(field, _pmul(field, b, b), b), 4 % field.p)
    t5 = _pscale(field, _pmul(field, c, c), 27 % field.p)
    return _psub(field, _psub(field, _padd(field, _psub(field, t1, t2), t3), t4), t5)


def geometric_tangents(curve: EllipticCurve, point) -> tuple[int | None, bool]:
    """Tangent lines of the cubic through a point, counted over the closure.

    Returns (count, has_nonvertical); count is None when the slope
    discriminant vanishes identically (then every line of the pencil is
    tangent, which would break the classical bound and is reported as such).
    Tangency contact may happen at conjugate points, so this can exceed the
    number of rational lines with a rational double contact.
    """
    field = curve.field
    p1, p2, p3 = normalize_coords(field, point)
    if point_on_curve(curve, (p1, p2, p3)):
        raise PointOnCurve(f"({p1},{p2},{p3}) lies on the curve")
    A, B, C = curve.short_form()
    if p1 == 1:
        px = p2
        pz = curve.y_shift(p2, p3)
        # slope m is the parameter, intercept t(m) = pz - m px
        t_poly = [pz, field.neg(px)]
        a = [A, 0, field.neg(1)]
        b = _psub(field, [B], _pscale(field, _pmul(field, [0, 1], t_poly), 2 % field.p))
        c = _psub(field, [C], _pmul(field, t_poly, t_poly))
        disc = _cubic_discriminant_poly(field, a, b, c)
        extra = 1 if curve.g_of_x(px) == 0 else 0  # vertical tangency
    else:
        # infinite point: fixed slope, intercept t is the parameter; the
        # infinite line is tangent and passes through every infinite point
        v = field.add(p3, curve._short["h1"]) if p2 == 1 else None
        if v is None:
            raise PointOnCurve("the curve's infinite point is not external")
        a = [field.sub(A, field.mul(v, v))]
        b = _ptrim([B, field.neg(field.mul(2 % field.p, v))])
        c = _psub(field, [C], [0, 0, 1])
        disc = _cubic_discriminant_poly(field, a, b, c)
        extra = 1
    if _pdeg(disc) < 0:
        return None, True
    nonvertical = _distinct_root_count(field, disc)
    return nonvertical + extra, nonvertical > 0


def line_profile(curve: EllipticCurve, point) -> LineProfile:
    """Classification counts of all q+1 lines through an external point."""
    field = curve.field
    p = normalize_coords(field, point)
    if point_on_curve(curve, p):
        raise PointOnCurve(f"{p} lies on the curve")
    counts = {KIND_SPARSE: 0, KIND_TANGENT: 0, KIND_TRISECANT: 0, KIND_CHORD: 0}
    for dual in lines_through(field, p):
        meet = line_meet(curve, dual)
        counts[meet.kind] += 1
    geo, has_nv = geometric_tangents(curve, p)
    if geo is not None and counts[KIND_TANGENT] > geo:
        raise AssertionError("rational tangent count exceeds the closure count")
    return LineProfile(
        point=p,
        tangents=counts[KIND_TANGENT],
        trisecants=counts[KIND_TRISECANT],
        chords=counts[KIND_CHORD],
        sparse=counts[KIND_SPARSE],
        geometric_tangents=geo,
        has_nonvertical_tangent=has_nv,
    )


class LineSystem:
    """Classification of every line of the plane against one curve.

    Lines are indexed in the squared-away model: id = m*q + t for Y = mX + t,
    then q*q + x0 for the verticals, then q*q + q for the line at infinity.
    Point ids follow the same layout (x*q + y, then infinite points by slope,
    then the curve's infinite point last).
    """

    def __init__(self, curve: EllipticCurve):
        self.curve = curve
        field = curve.field
        q = field.q
        self.q = q
        self.n_lines = q * q + q + 1
        A, B, C = curve.short_form()
        pts = curve.affine_points
        xs = np.array([p[0] for p in pts], dtype=np.int64)
        ys_orig = np.array([p[1] for p in pts], dtype=np.int64)
        h1 = curve._short["h1"]
        h0 = curve._short["h0"]
        zs = field.add_np(ys_orig, field.add_np(field.mul_np(np.int64(h1), xs), np.int64(h0)))
        self._xs, self._zs = xs, zs
        self._affine_ids = xs * q + zs

        counts = np.zeros(self.n_lines, dtype=np.int64)
        ms = np.arange(q, dtype=np.int64)
        tt = field.sub_np(zs[None, :], field.mul_np(ms[:, None], xs[None, :]))  # (q, n-1)
        ids = ms[:, None] * q + tt
        counts[: q * q] = np.bincount(ids.ravel(), minlength=q * q)
        self._nonvert_ids = ids
        fiber = np.zeros(q, dtype=np.int64)
        np.add.at(fiber, xs, 1)
        counts[q * q: q * q + q] = fiber + 1  # infinite point joins each vertical
        counts[q * q + q] = 1
        self.counts = counts

        tangent = np.zeros(self.n_lines, dtype=bool)
        # tangent at (x, z), z != 0: slope g'(x) / (2z); at z == 0: the vertical
        gp = field.add_np(
            field.mul_np(np.int64(3 % field.p), field.mul_np(xs, xs)),
            field.add_np(field.mul_np(np.int64(2 % field.p), field.mul_np(np.int64(A), xs)), np.int64(B)),
        )
        nz = zs != 0
        if nz.any():
            twoz = field.mul_np(np.int64(2 % field.p), zs[nz])
            slope = field.mul_np(gp[nz], field.inv_np(twoz))
            t_at = field.sub_np(zs[nz], field.mul_np(slope, xs[nz]))
            tangent[slope * q + t_at] = True
        if (~nz).any():
            tangent[q * q + xs[~nz]] = True
        tangent[q * q + q] = True  # inflection contact at the infinite point
        self.tangent = tangent

        kind = np.zeros(self.n_lines, dtype=np.int8)
        kind[tangent] = 1
        tri = (counts == 3) & ~tangent
        kind[tri] = 2
        two = counts == 2
        if not tangent[two].all():
            raise AssertionError("a two-point line escaped the tangent set")
        if tangent[counts == 3].any():
            raise AssertionError("a three-point line claims tangency")
        self.kind = kind
        self._tri_points_cache: dict[int, tuple] = {}
        self._tri_counts = None
        self._tangent_counts = None
        self._nv_tangent_counts = None

    # ---- id and coordinate conversions -----------------------------------

    def short_dual_to_id(self, dual_short) -> int:
        field = self.curve.field
        a, b, c = dual_short
        q = self.q
        if b == 0 and c == 0:
            return q * q + q
        if c == 0:
            return q * q + field.neg(field.div(a, b))
        m = field.neg(field.div(b, c))
        t = field.neg(field.div(a, c))
        return m * q + t

    def id_to_short_dual(self, line_id: int) -> tuple[int, int, int]:
        field = self.curve.field
        q = self.q
        if line_id == q * q + q:
            return (1, 0, 0)
        if line_id >= q * q:
            return (field.neg(line_id - q * q), 1, 0)
        m, t = divmod(line_id, q)
        return (field.neg(t), field.neg(m), 1)

    def dual_to_id(self, dual_orig) -> int:
        return self.short_dual_to_id(_short_dual(self.curve, normalize_coords(self.curve.field, dual_orig)))

    def id_to_dual(self, line_id: int) -> tuple[int, int, int]:
        return normalize_coords(
            self.curve.field, _orig_dual(self.curve, self.id_to_short_dual(line_id))
        )

    def kind_of(self, dual_orig) -> str:
        return _KIND_BY_CODE[int(self.kind[self.dual_to_id(dual_orig)])]

    def triple_points(self, line_id: int) -> tuple:
        """The three rational points of a trisecant line, curve coordinates."""
        cached = self._tri_points_cache.get(line_id)
        if cached is not None:
            return cached
        if self.kind[line_id] != 2:
            raise ValueError("not a trisecant line")
        curve = self.curve
        field = curve.field
        q = self.q
        if line_id >= q * q:
            x0 = line_id - q * q
            mask = self._xs == x0
            pts = [
                (int(x), curve.y_unshift(int(x), int(z)))
                for x, z in zip(self._xs[mask], self._zs[mask])
            ]
            pts = tuple(sorted(pts)) + (INFINITY,)
        else:
            m, t = divmod(line_id, q)
            zt = field.add_np(field.mul_np(np.int64(m), self._xs), np.int64(t))
            mask = zt == self._zs
            pts = tuple(
                sorted(
                    (int(x), curve.y_unshift(int(x), int(z)))
                    for x, z in zip(self._xs[mask], self._zs[mask])
                )
            )
        self._tri_points_cache[line_id] = pts
        return pts

    # ---- pencils ----------------------------------------------------------

    def _pencil_ids(self, point) -> list[int]:
        """Line ids through a point of the plane, in curve coordinates."""
        curve = self.curve
        field = curve.field
        q = self.q
        p1, p2, p3 = normalize_coords(field, point)
        ids = []
        if p1 == 1:
            x = p2
            z = curve.y_shift(x, p3)
            for m in range(q):
                ids.append(m * q + field.sub(z, field.mul(m, x)))
            ids.append(q * q + x)
        elif p2 == 1:
            # infinite point of slope p3 in curve coordinates
            m_short = field.add(p3, curve._short["h1"])
            ids.extend(m_short * q + t for t in range(q))
            ids.append(q * q + q)
        else:
            ids.extend(q * q + x0 for x0 in range(q))
            ids.append(q * q + q)
        return ids

    def trisecants_through(self, point, require_affine: bool = False,
                           avoid_points=()) -> list[tuple[tuple, tuple]]:
        """Trisecant lines through a point, ordered by normalized dual encoding.

        Returns (dual, triple) pairs in curve coordinates.  ``require_affine``
        drops lines whose triple includes the infinite point; ``avoid_points``
        drops lines meeting any of the given curve points.
        """
        avoid = {INFINITY if p is INFINITY else tuple(p) for p in avoid_points}
        hits = []
        for line_id in self._pencil_ids(point):
            if self.kind[line_id] != 2:
                continue
            triple = self.triple_points(line_id)
            if require_affine and triple[-1] is INFINITY:
                continue
            if avoid and any((p if p is INFINITY else tuple(p)) in avoid for p in triple):
                continue
            dual = self.id_to_dual(line_id)
            hits.append((dual, triple))
        hits.sort(key=lambda pair: _enc3(self.q, pair[0]))
        return hits

    # ---- whole-plane statistics -------------------------------------------

    def _point_accumulate(self, line_mask: np.ndarray) -> np.ndarray:
        """Per-point counts of marked lines through each plane point."""
        q = self.q
        field = self.curve.field
        n_points = q * q + q + 1
        out = np.zeros(n_points, dtype=np.int64)
        marked = np.flatnonzero(line_mask)
        nonvert = marked[marked < q * q]
        if len(nonvert):
            ms = nonvert // q
            ts = nonvert % q
            xs = np.arange(q, dtype=np.int64)
            ys = field.add_np(field.mul_np(ms[:, None], xs[None, :]), ts[:, None])
            ids = xs[None, :] * q + ys
            out[: q * q] += np.bincount(ids.ravel(), minlength=q * q)[: q * q]
            out[q * q: q * q + q] += np.bincount(ms, minlength=q)
        verts = marked[(marked >= q * q) & (marked < q * q + q)]
        if len(verts):
            x0s = verts - q * q
            ids = (x0s[:, None] * q + np.arange(q, dtype=np.int64)[None, :]).ravel()
            out[: q * q] += np.bincount(ids, minlength=q * q)[: q * q]
            out[q * q + q] += len(verts)
        if line_mask[q * q + q]:
            out[q * q: q * q + q + 1] += 1
        return out

    def external_mask(self) -> np.ndarray:
        q = self.q
        mask = np.ones(q * q + q + 1, dtype=bool)
        mask[self._affine_ids] = False
        mask[q * q + q] = False
        return mask

    def point_id_to_proj(self, point_id: int) -> tuple[int, int, int]:
        q = self.q
        curve = self.curve
        if point_id < q * q:
            x, z = divmod(point_id, q)
            return (1, x, curve.y_unshift(x, z))
        if point_id < q * q + q:
            m_short = point_id - q * q
            return (0, 1, curve.field.sub(m_short, curve._short["h1"]))
        return (0, 0, 1)

    def trisecant_counts(self) -> np.ndarray:
        if self._tri_counts is None:
            self._tri_counts = self._point_accumulate(self.kind == 2)
        return self._tri_counts

    def tangent_counts(self) -> np.ndarray:
        if self._tangent_counts is None:
            self._tangent_counts = self._point_accumulate(self.tangent)
        return self._tangent_counts

    def nonvertical_tangent_counts(self) -> np.ndarray:
        if self._nv_tangent_counts is None:
            q = self.q
            mask = self.tangent.copy()
            mask[q * q:] = False  # verticals and the infinite line excluded
            self._nv_tangent_counts = self._point_accumulate(mask)
        return self._nv_tangent_counts


@dataclass
class TrisecantScan:
    min_count: int
    argmin: tuple[int, int, int]
    histogram: dict

    def to_json_dict(self) -> dict:
        return {
            "min": self.min_count,
            "argmin": list(self.argmin),
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def min_trisecants(curve: EllipticCurve, system: LineSystem | None = None) -> TrisecantScan:
    """Minimum trisecant count over all rational points off the curve."""
    system = system or LineSystem(curve)
    counts = system.trisecant_counts()
    mask = system.external_mask()
    external = counts[mask]
    min_count = int(external.min())
    order = np.flatnonzero(mask)
    argmin_id = int(order[int(np.argmin(external))])
    hist_vals, hist_counts = np.unique(external, return_counts=True)
    return TrisecantScan(
        min_count=min_count,
        argmin=system.point_id_to_proj(argmin_id),
        histogram={int(v): int(c) for v, c in zip(hist_vals, hist_counts)},
    )


@dataclass
class TangentStats:
    max_rational_tangents: int
    max_geometric_tangents: int
    degenerate_points: int
    all_affine_have_nonvertical: bool
    first_missing: tuple | None

    def bound_holds(self) -> bool:
        return self.max_geometric_tangents <= 6 and self.degenerate_points == 0


def tangent_statistics(curve: EllipticCurve, system: LineSystem | None = None) -> TangentStats:
    """Closure tangent counts over every external point of the plane.

    Feeds the classical checks: at most six tangent lines through any
    external point, and a non-vertical one through every affine external
    point.
    """
    system = system or LineSystem(curve)
    field = curve.field
    q = field.q
    ext = system.external_mask()
    max_rat = int(system.tangent_counts()[ext].max())
    A, B, C = curve.short_form()
    max_geo = 0
    degenerate = 0
    all_nv = True
    first_missing = None
    two = 2 % field.p
    for pid in np.flatnonzero(ext):
        pid = int(pid)
        if pid < q * q:
            px, pz = divmod(pid, q)
            t_poly = [pz, field.neg(px)]
            a = [A, 0, field.neg(1)]
            b = _psub(field, [B], _pscale(field, _pmul(field, [0, 1], t_poly), two))
            c = _psub(field, [C], _pmul(field, t_poly, t_poly))
            extra = 1 if curve.g_of_x(px) == 0 else 0
            affine = True
        else:
            v = pid - q * q  # slope in the squared-away plane
            a = [field.sub(A, field.mul(v, v))]
            b = _ptrim([B, field.neg(field.mul(two, v))])
            c = _psub(field, [C], [0, 0, 1])
            extra = 1
            affine = False
        disc = _cubic_discriminant_poly(field, a, b, c)
        if _pdeg(disc) < 0:
            degenerate += 1
            continue
        nonvertical = _distinct_root_count(field, disc)
        max_geo = max(max_geo, nonvertical + extra)
        if affine and nonvertical == 0:
            all_nv = False
            if first_missing is None:
                first_missing = system.point_id_to_proj(pid)
    return TangentStats(
        max_rational_tangents=max_rat,
        max_geometric_tangents=max_geo,
        degenerate_points=degenerate,
        all_affine_have_nonvertical=all_nv,
        first_missing=first_missing,
    )


def zero_j_hypotheses_params(p: int, r: int, q: int, j_is_zero: bool, n_is_even: bool) -> bool:
    """Hypothesis gate for the zero-j-invariant trisecant bound."""
    return (
        p > 3
        and q > 9887
        and j_is_zero
        and n_is_even
        and (r % 2 == 0 or p % 3 == 1)
    )


def zero_j_hypotheses(curve: EllipticCurve) -> bool:
    f = curve.field
    return zero_j_hypotheses_params(f.p, f.r, f.q, curve.j == 0, curve.n % 2 == 0)
