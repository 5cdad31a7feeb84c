"""Independent reference computations for the test suite.

Deliberately slow and structurally different from the library: digit
counting instead of divmod loops, gift wrapping instead of monotone
chains, dense polynomial arithmetic instead of truncation-aware kernels.
Agreement between the two is the point.
"""

from fractions import Fraction
from math import comb


def slow_vp(n, p):
    if n == 0:
        return None
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def kummer_binom_vp(n, k, p):
    """v_p(C(n,k)) = number of carries when adding k and n-k in base p."""
    carries = 0
    carry = 0
    a, b = k, n - k
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        a //= p
        b //= p
    return carries


def lucas_binom_mod(n, k, p):
    """C(n,k) mod p digit by digit."""
    r = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        r = r * comb(a, b) % p
        n //= p
        k //= p
    return r


def poly_mul_mod(a, b, m, limit):
    out = [0] * (limit + 1)
    for i, ai in enumerate(a):
        if i > limit or ai == 0:
            continue
        for j, bj in enumerate(b):
            if i + j > limit:
                break
            out[i + j] = (out[i + j] + ai * bj) % m
    return out


def poly_compose_mod(outer, inner, m, limit):
    """sum outer[i] * inner^i with powers built by repeated full products."""
    out = [0] * (limit + 1)
    power = [1] + [0] * limit
    for i, c in enumerate(outer):
        if i > 0:
            power = poly_mul_mod(power, inner, m, limit)
        if c:
            for j in range(limit + 1):
                out[j] = (out[j] + c * power[j]) % m
    return out


def gift_wrap_lower_hull(points):
    """Strict vertices of the lower convex hull, by angular scan: from
    the leftmost-lowest point repeatedly take the least slope, breaking
    ties toward the farthest point."""
    pts = sorted(set(points))
    best_start = min(pts, key=lambda q: (q[0], q[1]))
    hull = [best_start]
    while True:
        cur = hull[-1]
        best = None
        best_slope = None
        for q in pts:
            if q[0] <= cur[0]:
                continue
            slope = Fraction(q[1] - cur[1], q[0] - cur[0])
            if best is None or slope < best_slope or (
                slope == best_slope and q[0] > best[0]
            ):
                best = q
                best_slope = slope
        if best is None:
            return hull
        hull.append(best)
