"""Plane elliptic curves over F_q of odd order.

Curves are given by the affine equation

    Y^2 + a1*X*Y + a2*Y = X^3 + a3*X^2 + a4*X + a5

with coefficients in F_q.  Note the labelling: relative to the conventional
Weierstrass names (w1, w3, w2, w4, w6) our tuple is (a1, a2, a3, a4, a5) =
(w1, w3, w2, w4, w6).  The unique infinite point of the projective closure is
(0, 0, 1), kept last in the point list.

Rational points are enumerated by an exhaustive x-loop after completing the
square, which is exact and fast enough for every order this package scans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EvenCharacteristic, ScanLimitExceeded, Singular
from .gf import Field, factor_prime_power

SCAN_LIMIT = 169


class _PointAtInfinity:
    """Singleton marker for the infinite point (0, 0, 1)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INFINITY = _PointAtInfinity()


@dataclass(frozen=True)
class CurveSummary:
    p: int
    r: int
    q: int
    coeffs: tuple[int, int, int, int, int]
    n: int
    j: int
    j_is_zero: bool
    n_is_even: bool
    r_parity: int
    p_mod3: int


class EllipticCurve:
    """Nonsingular plane cubic with its enumerated rational points.

    Immutable after construction; safe to share between workers.
    """

    def __init__(self, field: Field, coeffs):
        if field.p == 2:
            raise EvenCharacteristic("curves require odd field order")
        self.field = field
        self.a1, self.a2, self.a3, self.a4, self.a5 = (int(c) for c in coeffs)
        for c in (self.a1, self.a2, self.a3, self.a4, self.a5):
            if not 0 <= c < field.q:
                raise ValueError(f"coefficient encoding {c} out of range")
        self._short = self._complete_square()
        self._invariants = self._discriminant_chain()
        if self._invariants["delta"] == 0:
            raise Singular(
                f"curve {self.coeffs} over GF({field.q}) has vanishing discriminant"
            )
        self.j = self._invariants["j"]
        self._affine = None
        self._n = None

    # ---- basic data -------------------------------------------------------

    @property
    def coeffs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a5)

    def _complete_square(self):
        f = self.field
        inv2 = f.inv(2 % f.p)
        # shift Y -> Y - (a1*X + a2)/2 gives Z^2 = X^3 + A X^2 + B X + C
        h1 = f.mul(self.a1, inv2)
        h0 = f.mul(self.a2, inv2)
        A = f.add(self.a3, f.mul(h1, h1))
        B = f.add(self.a4, f.mul(f.mul(self.a1, self.a2), inv2))
        C = f.add(self.a5, f.mul(h0, h0))
        return {"A": A, "B": B, "C": C, "h1": h1, "h0": h0}

    def short_form(self) -> tuple[int, int, int]:
        """Coefficients (a, b, c) of the squared-away model Y^2 = X^3 + aX^2 + bX + c."""
        s = self._short
        return (s["A"], s["B"], s["C"])

    def y_shift(self, x: int, y: int) -> int:
        """Map an original y to the squared-away model: z = y + (a1*x + a2)/2."""
        f = self.field
        return f.add(y, f.add(f.mul(self._short["h1"], x), self._short["h0"]))

    def y_unshift(self, x: int, z: int) -> int:
        f = self.field
        return f.sub(z, f.add(f.mul(self._short["h1"], x), self._short["h0"]))

    def _discriminant_chain(self):
        f = self.field
        A, B, C = self.short_form()
        b2 = f.mul(self._small(4), A)
        b4 = f.mul(self._small(2), B)
        b6 = f.mul(self._small(4), C)
        # 4*b8 = b2*b6 - b4^2
        b8 = f.mul(f.inv(self._small(4)), f.sub(f.mul(b2, b6), f.mul(b4, b4)))
        c4 = f.sub(f.mul(b2, b2), f.mul(self._small(24), b4))
        delta = f.sub(
            f.add(
                f.neg(f.mul(f.mul(b2, b2), b8)),
                f.mul(self._small(9), f.mul(b2, f.mul(b4, b6))),
            ),
            f.add(
                f.mul(self._small(8), f.mul(b4, f.mul(b4, b4))),
                f.mul(self._small(27), f.mul(b6, b6)),
            ),
        )
        j = 0 if delta == 0 else f.div(f.mul(c4, f.mul(c4, c4)), delta)
        return {"b2": b2, "b4": b4, "b6": b6, "b8": b8, "c4": c4, "delta": delta, "j": j}

    def _small(self, m: int) -> int:
        """Encoding of the integer m reduced into the prime subfield."""
        return m % self.field.p

    # ---- points -----------------------------------------------------------

    def g_of_x(self, x: int) -> int:
        """Right side X^3 + A X^2 + B X + C of the squared-away model."""
        f = self.field
        A, B, C = self.short_form()
        x2 = f.mul(x, x)
        return f.add(f.add(f.mul(x, x2), f.mul(A, x2)), f.add(f.mul(B, x), C))

    def is_on_curve(self, x: int, y: int) -> bool:
        z = self.y_shift(x, y)
        return self.field.mul(z, z) == self.g_of_x(x)

    def _enumerate(self):
        f = self.field
        q = f.q
        xs = np.arange(q, dtype=np.int64)
        A, B, C = self.short_form()
        x2 = f.mul_np(xs, xs)
        x3 = f.mul_np(x2, xs)
        g = f.add_np(f.add_np(x3, f.mul_np(np.int64(A), x2)),
                     f.add_np(f.mul_np(np.int64(B), xs), np.int64(C)))
        roots = f.sqrt_table_np[g]
        pts = []
        h1, h0 = self._short["h1"], self._short["h0"]
        for x in range(q):
            z = int(roots[x])
            if z < 0:
                continue
            shift = f.add(f.mul(h1, x), h0)
            y0 = f.sub(z, shift)
            if z == 0:
                pts.append((x, y0))
            else:
                y1 = f.sub(f.neg(z), shift)
                pts.append((x, min(y0, y1)))
                pts.append((x, max(y0, y1)))
        pts.sort()
        self._affine = tuple(pts)
        self._n = len(pts) + 1
        dev = self._n - (f.q + 1)
        assert dev * dev <= 4 * f.q, "point count outside the Hasse interval"

    @property
    def affine_points(self) -> tuple:
        if self._affine is None:
            self._enumerate()
        return self._affine

    @property
    def points(self) -> tuple:
        """All rational points in canonical order, infinite point last."""
        return self.affine_points + (INFINITY,)

    @property
    def n(self) -> int:
        if self._n is None:
            self._enumerate()
        return self._n

    def summary(self) -> CurveSummary:
        f = self.field
        return CurveSummary(
            p=f.p,
            r=f.r,
            q=f.q,
            coeffs=self.coeffs,
            n=self.n,
            j=self.j,
            j_is_zero=self.j == 0,
            n_is_even=self.n % 2 == 0,
            r_parity=f.r % 2,
            p_mod3=f.p % 3,
        )

    def to_json_dict(self, include_points: bool = True) -> dict:
        d = {
            "q": self.field.q,
            "coeffs": list(self.coeffs),
            "n": self.n,
            "j": self.j,
        }
        if include_points:
            d["points"] = [[x, y] for x, y in self.affine_points] + ["inf"]
        return d

    def __repr__(self):
        return f"EllipticCurve(q={self.field.q}, coeffs={self.coeffs})"

    def __eq__(self, other):
        return (
            isinstance(other, EllipticCurve)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.p, self.field.r, self.coeffs))


def curve_make(field: Field, coeffs) -> EllipticCurve:
    """Validated nonsingular curve with deterministically ordered points."""
    return EllipticCurve(field, coeffs)


def short_curve(field: Field, a: int, b: int, c: int) -> EllipticCurve:
    return EllipticCurve(field, (0, 0, a, b, c))


def j_invariant(curve: EllipticCurve) -> int:
    """The curve's isomorphism invariant; the verified claims only split on
    whether it vanishes."""
    return curve.j


def nq1(q: int) -> int:
    """Largest rational point count of an elliptic curve over F_q.

    Equals q + t + 1 with t = floor(2*sqrt(q)), except q + t when the
    characteristic divides t and the extension degree is odd and >= 3.
    """
    p, r = factor_prime_power(q)
    t = math.isqrt(4 * q)
    if t % p == 0 and r % 2 == 1 and r >= 3:
        return q + t
    return q + t + 1


def curve_scan(field: Field, summary_filter=None, scan_limit: int = SCAN_LIMIT):
    """Yield every nonsingular squared-away curve Y^2 = X^3 + aX^2 + bX + c.

    Deterministic order by the (a, b, c) encodings.  The optional filter is a
    predicate over CurveSummary.
    """
    if field.q > scan_limit:
        raise ScanLimitExceeded(
            f"scan of GF({field.q}) exceeds configured limit {scan_limit}"
        )
    for a in range(field.q):
        for b in range(field.q):
            for c in range(field.q):
                try:
                    curve = EllipticCurve(field, (0, 0, a, b, c))
                except Singular:
                    continue
                if summary_filter is None or summary_filter(curve.summary()):
                    yield curve
