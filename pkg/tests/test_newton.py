"""Newton polygons, negative parts, Weierstrass preparation."""

import random
from fractions import Fraction
from math import comb

import pytest

from padicdyn import (
    OracleIntegrityError,
    PadicNumber,
    PowerSeries,
    PreconditionError,
    PrecisionError,
    PrimeContext,
    RING_FLOAT,
    RING_INTEGRAL,
    RING_RESIDUE,
    compare_root_polygons,
    negative_part,
    newton_polygon,
    render_ascii,
    root_valuations,
    weierstrass_degree,
    weierstrass_preparation,
    vp,
)
from oracles import gift_wrap_lower_hull, kummer_binom_vp, slow_vp


def gm(ctx, a):
    return PowerSeries(ctx, RING_INTEGRAL, [comb(a, i) % ctx.modulus
                                            for i in range(1, ctx.K + 1)])


def test_binomial_valuations_pin_figure():
    # the arithmetic facts behind the flagship polygon, checked two ways
    assert slow_vp(5 ** 2 - 1, 2) == 3
    assert kummer_binom_vp(25, 2, 2) == 2 == slow_vp(comb(25, 2), 2)
    assert kummer_binom_vp(25, 4, 2) == 1 == slow_vp(comb(25, 4), 2)
    assert kummer_binom_vp(25, 8, 2) == 0 and comb(25, 8) % 2 == 1


def test_flagship_negative_polygon():
    ctx = PrimeContext(2, 16, 16)
    u = gm(ctx, 5)
    g = u.compose(u) - PowerSeries.identity(ctx)
    poly = newton_polygon(g)
    neg = negative_part(poly)
    assert neg.vertices == ((1, 3), (2, 2), (4, 1), (8, 0))
    assert root_valuations(g).entries == (
        (Fraction(1), 1), (Fraction(1, 2), 2), (Fraction(1, 4), 4))


def test_cube_polygon():
    # (1+x)^3 - 1 = 3x + 3x^2 + x^3 over Z_3
    ctx = PrimeContext(3, 8, 6)
    g = gm(ctx, 3)
    neg = negative_part(newton_polygon(g))
    assert neg.vertices == ((1, 1), (3, 0))
    assert neg.segments == ((Fraction(-1, 2), 2),)
    assert root_valuations(g).entries == ((Fraction(1, 2), 2),)


def test_polygon_matches_gift_wrapping():
    rng = random.Random(31)
    for p, N, K in ((2, 10, 14), (3, 7, 10), (5, 5, 8)):
        ctx = PrimeContext(p, N, K)
        for _ in range(30):
            # all coefficients known: valuation forced below N
            coeffs = []
            for _ in range(K):
                v = rng.randrange(0, N - 1)
                unit = rng.randrange(1, ctx.modulus)
                unit += 1 - unit % p if unit % p == 0 else 0
                coeffs.append(p ** v * unit % ctx.modulus)
            g = PowerSeries(ctx, RING_INTEGRAL, coeffs)
            points = [(i, vp(c, p)) for i, c in enumerate(g.coeffs, 1)]
            want = tuple(gift_wrap_lower_hull(points))
            assert newton_polygon(g).vertices == want


def test_polygon_value_at_interpolates():
    ctx = PrimeContext(2, 10, 8)
    g = PowerSeries(ctx, RING_INTEGRAL, [8, 0, 2, 0, 0, 0, 0, 1])
    poly = newton_polygon(g)
    assert poly.value_at(1) == 3
    assert poly.value_at(3) == 1
    assert poly.value_at(8) == 0
    # between vertices the hull is the chord: (3,1)-(8,0) at i=5
    assert poly.value_at(5) == Fraction(3, 5)


def test_polygon_needs_a_known_point():
    ctx = PrimeContext(2, 3, 4)
    dark = PowerSeries(ctx, RING_INTEGRAL, [0, 0, 0, 0])
    with pytest.raises(PreconditionError):
        newton_polygon(dark)


def test_negative_part_needs_unit_vertex():
    ctx = PrimeContext(2, 6, 4)
    g = PowerSeries(ctx, RING_INTEGRAL, [2, 4, 2, 8])
    with pytest.raises(PrecisionError):
        negative_part(newton_polygon(g))


def test_negative_part_refuses_unknown_left_edge():
    ctx = PrimeContext(2, 6, 4)
    g = PowerSeries(ctx, RING_INTEGRAL, [0, 1, 0, 0])
    with pytest.raises(PrecisionError):
        negative_part(newton_polygon(g))


def test_negative_part_refuses_weak_float_bound():
    # a zero known only mod p^2 cannot support a hull that needs height 3
    ctx = PrimeContext(2, 10, 4)
    coeffs = [
        PadicNumber.make(ctx, 0, 2 ** 5, 10),   # (1, 5)
        PadicNumber.zero_at(ctx, 2),            # bound 2 < hull
        PadicNumber.zero_at(ctx, 9),
        PadicNumber.from_int(ctx, 1),           # (4, 0)
    ]
    g = PowerSeries(ctx, RING_FLOAT, coeffs)
    with pytest.raises(PrecisionError):
        negative_part(newton_polygon(g))
    # with a strong enough bound the same shape passes
    coeffs[1] = PadicNumber.zero_at(ctx, 9)
    ok = negative_part(newton_polygon(PowerSeries(ctx, RING_FLOAT, coeffs)))
    assert ok.vertices == ((1, 5), (4, 0))


def test_negative_part_refuses_negative_valuations():
    ctx = PrimeContext(2, 10, 4)
    g = PowerSeries(ctx, RING_FLOAT, [PadicNumber.from_fraction(ctx, Fraction(1, 2)),
                                      PadicNumber.from_int(ctx, 1)])
    with pytest.raises(PreconditionError):
        negative_part(newton_polygon(g))


def test_weierstrass_degree():
    ctx = PrimeContext(2, 6, 8)
    assert weierstrass_degree(gm(ctx, 2)) == 2
    assert weierstrass_degree(gm(ctx, 2).reduce_mod_p()) == 2
    assert weierstrass_degree(gm(ctx, 5)) == 1
    assert weierstrass_degree(PowerSeries(ctx, RING_INTEGRAL, [2, 4, 8, 2])) is None
    assert weierstrass_degree(gm(ctx, 8).reduce_mod_p()) == 8


def test_wprep_examples():
    ctx = PrimeContext(3, 12, 8)
    g = PowerSeries(ctx, RING_INTEGRAL, [3, 3, 1])
    fact = weierstrass_preparation(g)
    assert fact.distinguished == (0, 3, 3, 1)
    assert fact.unit_constant == 1
    assert fact.reconstruct() == g
    ctx2 = PrimeContext(2, 10, 6)
    g2 = PowerSeries(ctx2, RING_INTEGRAL, [2, 1])
    fact2 = weierstrass_preparation(g2)
    assert fact2.distinguished == (0, 2, 1)
    assert fact2.reconstruct() == g2


def test_wprep_random_residual_and_idempotence():
    rng = random.Random(33)
    for p, N, K in ((2, 8, 12), (3, 6, 10)):
        ctx = PrimeContext(p, N, K)
        for _ in range(15):
            d = rng.randrange(1, K // 2 + 1)
            coeffs = [p * rng.randrange(ctx.modulus // p) for _ in range(K)]
            coeffs[d - 1] = 1 + p * rng.randrange(ctx.modulus // p)
            g = PowerSeries(ctx, RING_INTEGRAL, coeffs)
            fact = weierstrass_preparation(g)
            assert fact.degree == d
            assert fact.reconstruct() == g
            dist = PowerSeries(ctx, RING_INTEGRAL,
                               list(fact.distinguished[1:]) + [0] * (K - d))
            again = weierstrass_preparation(dist)
            assert again.distinguished == fact.distinguished
            assert again.unit_constant == 1
            assert all(c == 0 for c in again.unit_tail.coeffs)


def test_wprep_residue_ring():
    ctx = PrimeContext(2, 4, 10)
    g = PowerSeries(ctx, RING_RESIDUE, [0, 0, 1, 1, 0, 1])
    fact = weierstrass_preparation(g)
    assert fact.degree == 3
    assert fact.reconstruct() == g


def test_wprep_preconditions():
    ctx = PrimeContext(2, 6, 4)
    with pytest.raises(PreconditionError):
        weierstrass_preparation(PowerSeries(ctx, RING_INTEGRAL, [0, 0, 1]))
    with pytest.raises(PrecisionError):
        weierstrass_preparation(PowerSeries(ctx, RING_INTEGRAL, [2, 4, 2, 8]))


def test_lambda_check_gm_pairs():
    ctx = PrimeContext(3, 24, 32)
    f, u = gm(ctx, 3), gm(ctx, 4)
    rep1 = compare_root_polygons(f, u, 1)
    assert rep1.equal and rep1.delta == 1
    rep2 = compare_root_polygons(f, u, 2)
    assert rep2.equal
    want = ((Fraction(1, 2), 2), (Fraction(1, 6), 6))
    assert rep2.left.entries == want
    assert rep2.right.entries == want
    ctx2 = PrimeContext(2, 24, 32)
    f2, u2 = gm(ctx2, 2), gm(ctx2, 5)
    for n in (2, 3):
        rep = compare_root_polygons(f2, u2, n)
        assert rep.equal and rep.delta == 2


def test_lambda_check_needs_n_at_least_delta():
    ctx = PrimeContext(2, 16, 16)
    with pytest.raises(PreconditionError):
        compare_root_polygons(gm(ctx, 2), gm(ctx, 5), 1)


def test_render_ascii_shape():
    ctx = PrimeContext(2, 16, 16)
    u = gm(ctx, 5)
    g = u.compose(u) - PowerSeries.identity(ctx)
    art = render_ascii(negative_part(newton_polygon(g)))
    lines = art.splitlines()
    assert lines[0].endswith("*")
    assert any("8" in ln for ln in lines)
    assert all(len(ln) < 120 for ln in lines)
