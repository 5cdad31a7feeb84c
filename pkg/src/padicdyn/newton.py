"""Newton polygons, Weierstrass degree and preparation, root valuations.

Convention: the polygon of g = sum a_i x^i is the lower convex hull of
the points (i, v_p(a_i)) for i = 1..K, i.e. the full polygon including
the column of the trivial root at the origin's right.  Some treatments
draw the polygon of g(x)/x instead; that is the same picture shifted one
column left, with identical slope and length data.  All reports produced
here use the unshifted convention.

Completeness discipline: a stored zero coefficient only means "zero to
the stated precision", so it contributes no point but an uncertainty
record (index, valuation lower bound).  The negative part of the polygon
is released only when no uncertain coefficient could dip below the hull
left of the first valuation-zero vertex; otherwise the computation
refuses loudly instead of fabricating root counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import OracleIntegrityError, PreconditionError, PrecisionError
from .padic import INFINITE, vp
from .series import (
    RING_FLOAT,
    RING_INTEGRAL,
    RING_RESIDUE,
    PowerSeries,
    _inv_unit_mod,
    _mul_dense_mod,
)


def weierstrass_degree(g: PowerSeries):
    """Index of the first unit coefficient; None when every coefficient
    up to K reduces to zero (degree >= K+1, undetermined)."""
    p = g.ctx.p
    if g.ring == RING_RESIDUE:
        for i, c in enumerate(g.coeffs, 1):
            if c:
                return i
        return None
    if g.ring == RING_INTEGRAL:
        for i, c in enumerate(g.coeffs, 1):
            if c % p:
                return i
        return None
    for i, c in enumerate(g.coeffs, 1):
        if c.is_zero:
            if c.precision < 1:
                raise PrecisionError(
                    f"coefficient {i} is not known mod p; Weierstrass degree undecidable"
                )
            continue
        if c.valuation < 0:
            raise PreconditionError("Weierstrass degree needs integral coefficients")
        if c.valuation == 0:
            return i
    return None


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull vertices plus the uncertainty bookkeeping needed
    to decide whether the negative part is trustworthy.

    vertices: ((i, v), ...) with strictly increasing i, lower-convex.
    uncertain: ((i, bound), ...) for coefficients only known to vanish to
    valuation `bound`; exact zeros appear nowhere.
    truncation: the ambient K.
    """

    vertices: tuple
    uncertain: tuple
    truncation: int

    @property
    def segments(self):
        """((slope, horizontal length), ...) left to right; slopes are
        exact Fractions and strictly increase."""
        out = []
        for (i1, v1), (i2, v2) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(v2 - v1, i2 - i1), i2 - i1))
        return tuple(out)

    def value_at(self, i):
        """Height of the hull above index i, as an exact Fraction."""
        if not self.vertices:
            raise PreconditionError("empty polygon")
        (i0, v0), (iz, vz) = self.vertices[0], self.vertices[-1]
        if i < i0 or i > iz:
            raise PreconditionError(f"index {i} outside the hull span {i0}..{iz}")
        for (a, va), (b, vb) in zip(self.vertices, self.vertices[1:]):
            if a <= i <= b:
                return Fraction(va) + Fraction(vb - va, b - a) * (i - a)
        return Fraction(vz)

    def to_json(self):
        return {"vertices": [[i, str(Fraction(v))] for i, v in self.vertices]}


def _valuation_points(g: PowerSeries):
    """(known points, uncertain bounds) for the polygon of g."""
    p = g.ctx.p
    N = g.ctx.N
    points, uncertain = [], []
    if g.ring == RING_RESIDUE:
        for i, c in enumerate(g.coeffs, 1):
            if c:
                points.append((i, 0))
    elif g.ring == RING_INTEGRAL:
        for i, c in enumerate(g.coeffs, 1):
            if c:
                points.append((i, vp(c, p)))
            else:
                uncertain.append((i, N))
    else:
        for i, c in enumerate(g.coeffs, 1):
            if c.is_exact_zero:
                continue
            if c.is_zero:
                uncertain.append((i, c.precision))
            else:
                points.append((i, c.valuation))
    return points, uncertain


def newton_polygon(g: PowerSeries) -> NewtonPolygon:
    """Lower convex hull of (i, v_p(a_i)) over the known coefficients."""
    points, uncertain = _valuation_points(g)
    if not points:
        raise PreconditionError(
            "series has no known nonzero coefficient; no Newton polygon"
        )
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            # pop anything on or above the chord to the new point
            if (ax - ox) * (pt[1] - oy) - (ay - oy) * (pt[0] - ox) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return NewtonPolygon(tuple(hull), tuple(uncertain), g.ctx.K)


def negative_part(poly: NewtonPolygon) -> NewtonPolygon:
    """The negative-slope part of the hull, certified complete.

    Requires a valuation-zero vertex within the truncation (otherwise the
    series' Weierstrass degree, where the negative part ends, is not yet
    visible) and refuses when an uncertain coefficient to its left could
    lower the hull.
    """
    for i, v in poly.vertices:
        if v < 0:
            raise PreconditionError(
                "negative part is defined for integral series; "
                f"coefficient {i} has valuation {v}"
            )
    stop = None
    for idx, (i, v) in enumerate(poly.vertices):
        if v == 0:
            stop = idx
            break
    if stop is None:
        raise PrecisionError(
            "no valuation-zero vertex within the truncation; the negative "
            "part of the polygon is incomplete at this K"
        )
    kept = poly.vertices[: stop + 1]
    first_i = poly.vertices[0][0]
    end_i = kept[-1][0]
    for i, bound in poly.uncertain:
        if i >= end_i:
            continue
        if i < first_i:
            raise PrecisionError(
                f"coefficient {i} is unknown below the leftmost known point; "
                "the negative part could change"
            )
        if Fraction(bound) < poly.value_at(i):
            raise PrecisionError(
                f"coefficient {i} is only known to valuation {bound}, below "
                "the current hull; the negative part is not certified"
            )
    return NewtonPolygon(kept, (), poly.truncation)


@dataclass(frozen=True)
class RootValuationMultiset:
    """(valuation, count) pairs read off the negative segments; the
    slope-length dictionary for roots in the open unit disk."""

    entries: tuple

    def to_json(self):
        return {"entries": [[str(lam), count] for lam, count in self.entries]}


def root_valuations(g: PowerSeries) -> RootValuationMultiset:
    neg = negative_part(newton_polygon(g))
    entries = tuple((-slope, length) for slope, length in neg.segments)
    return RootValuationMultiset(entries)


@dataclass(frozen=True)
class LambdaCheckReport:
    equal: bool
    left: RootValuationMultiset
    right: RootValuationMultiset
    n: int
    delta: int

    def to_json(self):
        return {
            "equal": self.equal,
            "left": self.left.to_json()["entries"],
            "right": self.right.to_json()["entries"],
            "n": self.n,
            "delta": self.delta,
        }


def compare_root_polygons(f: PowerSeries, u: PowerSeries, n: int, delta=None) -> LambdaCheckReport:
    """Root-valuation comparison between the n-th iterate of the
    noninvertible series f and the fixed-point series of the matching
    p-power iterate of the invertible series u.

    For a minimal commuting pair the two multisets must coincide, so an
    "unequal" verdict on validated input is a hard failure upstream.
    """
    if delta is None:
        delta = f.ctx.delta
    if n < delta:
        raise PreconditionError(f"need n >= delta, got n={n}, delta={delta}")
    left = root_valuations(f.iterate(n))
    iterate_count = f.ctx.p ** (n - delta)
    right_series = u.iterate(iterate_count) - PowerSeries.identity(u.ctx, u.ring)
    right = root_valuations(right_series)
    return LambdaCheckReport(left == right, left, right, n, delta)


# ---------------------------------------------------------------------------
# Weierstrass preparation


@dataclass(frozen=True)
class WeierstrassFactorization:
    """g = P * U with P monic distinguished of degree wideg(g) and U a
    unit series, exact in (Z/p^N)[x]/x^(K+1).

    distinguished: dense coefficients of P, degree 0..d, last entry 1,
    lower entries divisible by p (and entry 0 always 0: g has no constant
    term, so x divides P).
    unit_constant, unit_tail: U as a unit scalar plus a constant-free
    series.
    """

    distinguished: tuple
    unit_constant: int
    unit_tail: PowerSeries
    residual_p_exp: int
    residual_x_order: int

    @property
    def degree(self):
        return len(self.distinguished) - 1

    def reconstruct(self) -> PowerSeries:
        """P * U, for residual checking; equals the prepared series
        exactly in the working quotient ring."""
        tail = self.unit_tail
        ctx = tail.ctx
        m = ctx.modulus if tail.ring == RING_INTEGRAL else ctx.p
        U = [self.unit_constant] + list(tail.coeffs)
        prod = _mul_dense_mod(list(self.distinguished), U, ctx.K, m)
        return PowerSeries(ctx, tail.ring, prod[1:])

    def to_json(self):
        return {
            "distinguished": list(self.distinguished),
            "unit_constant": self.unit_constant,
            "unit_tail": self.unit_tail.to_json(),
            "residual_precision": {
                "p_exp": self.residual_p_exp,
                "x_order": self.residual_x_order,
            },
        }


def weierstrass_preparation(g: PowerSeries) -> WeierstrassFactorization:
    """Factor g as P * U by fixed-point iteration.

    Writing g = A + x^d W with d = wideg(g), A the sub-degree-d part (all
    coefficients divisible by p) and W a unit series, the unit's inverse
    q = U^(-1) satisfies q = W^(-1) (1 - shift_d(q A)), a p-adic
    contraction: each pass fixes one more base-p digit, so at most N
    passes reach the exact fixed point.  There q*g is exactly monic of
    degree d, which is what makes the returned residual exactly zero in
    the quotient ring.
    """
    if g.ring == RING_FLOAT:
        raise PreconditionError(
            "preparation works in the integral or residue ring; round the "
            "series first if its float coefficients are integral"
        )
    ctx = g.ctx
    K = ctx.K
    d = weierstrass_degree(g)
    if d is None:
        raise PrecisionError(
            f"Weierstrass degree undetermined within K={K}; cannot prepare"
        )
    if 2 * d > K:
        raise PreconditionError(
            f"need wideg(g) <= K - wideg(g) for a useful unit; got d={d}, K={K}"
        )
    m = ctx.modulus if g.ring == RING_INTEGRAL else ctx.p
    gd = [0] + list(g.coeffs)
    A = gd[:d]
    W = gd[d:]
    winv = _inv_unit_mod(W, K, m)
    rounds = ctx.N + 2 if g.ring == RING_INTEGRAL else 3
    q = winv
    for _ in range(rounds):
        qa = _mul_dense_mod(q, A, K, m)
        hi = qa[d:] + [0] * d
        one_minus = [-c % m for c in hi]
        one_minus[0] = (1 - hi[0]) % m
        q_next = _mul_dense_mod(winv, one_minus, K, m)
        if q_next == q:
            break
        q = q_next
    else:
        raise OracleIntegrityError("preparation fixed point failed to stabilize")

    P = _mul_dense_mod(q, gd, K, m)
    if P[d] != 1 or any(P[j] for j in range(d + 1, K + 1)) or P[0] != 0:
        raise OracleIntegrityError("prepared polynomial is not monic distinguished")
    if any(P[j] % ctx.p for j in range(1, d)):
        # distinguished means every sub-leading coefficient is a non-unit
        raise OracleIntegrityError("prepared polynomial fails the valuation pattern")
    U = _inv_unit_mod(q, K, m)
    residual_exp = ctx.N if g.ring == RING_INTEGRAL else 1
    fact = WeierstrassFactorization(
        distinguished=tuple(P[: d + 1]),
        unit_constant=U[0],
        unit_tail=PowerSeries(ctx, g.ring, U[1:]),
        residual_p_exp=residual_exp,
        residual_x_order=K,
    )
    if fact.reconstruct() != g:
        raise OracleIntegrityError("preparation residual is nonzero")
    return fact


# ---------------------------------------------------------------------------
# rendering


def render_ascii(poly: NewtonPolygon) -> str:
    """Small ASCII plot: valuation up, index right, '*' at vertices, '.'
    where the hull crosses integer columns, a dotted tail for the
    undetermined region beyond the last vertex."""
    verts = dict(poly.vertices)
    (i_first, _), (i_last, v_last) = poly.vertices[0], poly.vertices[-1]
    tail_end = min(poly.truncation, i_last + 4)
    vmax = max(v for _, v in poly.vertices)
    vmin = min(0, min(v for _, v in poly.vertices))
    cols = range(1, tail_end + 1)
    lines = []
    for v in range(vmax, vmin - 1, -1):
        row = []
        for i in cols:
            ch = " "
            if i in verts and verts[i] == v:
                ch = "*"
            elif i_first < i < i_last and i not in verts:
                if round(poly.value_at(i)) == v:
                    ch = "."
            elif i_last < i <= tail_end and v == v_last:
                ch = "."
            row.append(ch + " ")
        lines.append(f"{v:>3} |" + "".join(row).rstrip())
    lines.append("    +" + "--" * len(list(cols)))
    ruler = [" "] * (2 * tail_end)
    for i, _ in poly.vertices:
        label = str(i)
        pos = 2 * (i - 1)
        for k, chx in enumerate(label):
            if pos + k < len(ruler):
                ruler[pos + k] = chx
    lines.append("     " + "".join(ruler).rstrip())
    return "\n".join(lines)
