from __future__ import annotations

from fractions import Fraction

import pytest

from phinmod.errors import (
    InvalidValuation,
    PrecisionLoss,
    RootLiftingError,
    ValidationError,
    ZeroInput,
)
from phinmod.padic import (
    INF,
    LocalFieldDesc,
    hensel_root,
    newton_slopes,
    poly_eval,
    roots_in_field,
    sample_element,
    sample_unit,
)


# ---------------------------------------------------------------------------
# independent oracles (sympy resultants / polynomial remainders)


def oracle_valuation(desc: LocalFieldDesc, coords) -> Fraction:
    """Valuation via the norm down to Q_p, computed with resultants."""
    import sympy

    th, pi = sympy.symbols("__th __pi")
    x = 0
    for a, row in enumerate(coords):
        for b, c in enumerate(row):
            x += sympy.Rational(Fraction(c)) * pi**a * th**b
    eis = sum(
        sum(sympy.Integer(cb) * th**b for b, cb in enumerate(row)) * pi**i
        for i, row in enumerate(desc.eis_poly)
    )
    unram = sum(sympy.Integer(c) * th**i for i, c in enumerate(desc.unram_poly))
    norm_u = sympy.resultant(eis, x, pi)
    norm = sympy.resultant(unram, norm_u, th)
    norm = sympy.Rational(norm)
    if norm == 0:
        return INF
    num, den = norm.p, norm.q
    v = 0
    while num % desc.p == 0:
        num //= desc.p
        v += 1
    while den % desc.p == 0:
        den //= desc.p
        v -= 1
    return Fraction(v, desc.degree)


def oracle_product_coords(desc: LocalFieldDesc, cx, cy):
    """Product coordinates via sympy polynomial remainders."""
    import sympy

    th, pi = sympy.symbols("__th __pi")

    def lift(coords):
        return sum(
            sympy.Rational(Fraction(c)) * pi**a * th**b
            for a, row in enumerate(coords)
            for b, c in enumerate(row)
        )

    eis = sum(
        sum(sympy.Integer(cb) * th**b for b, cb in enumerate(row)) * pi**i
        for i, row in enumerate(desc.eis_poly)
    )
    unram = sum(sympy.Integer(c) * th**i for i, c in enumerate(desc.unram_poly))
    prod = sympy.expand(lift(cx) * lift(cy))
    if desc.e_l > 1:
        prod = sympy.rem(prod, eis, pi)
    else:
        prod = sympy.rem(prod, eis, pi)
    if desc.f_l > 1:
        prod = sympy.rem(sympy.expand(prod), unram, th)
    else:
        prod = sympy.rem(sympy.expand(prod), unram, th)
    poly = sympy.Poly(prod, pi, th)
    out = [[Fraction(0)] * desc.f_l for _ in range(desc.e_l)]
    for (a, b), coeff in zip(poly.monoms(), poly.coeffs()):
        out[a][b] = Fraction(sympy.Rational(coeff).p, sympy.Rational(coeff).q)
    return out


# ---------------------------------------------------------------------------
# field construction


def test_bad_fields_rejected():
    with pytest.raises(ValidationError):
        LocalFieldDesc(4, 1, 1, (0, 1), ((-4,), (1,)))  # composite p
    with pytest.raises(ValidationError):
        LocalFieldDesc(3, 2, 1, (1, 2, 1), ((-3, 0), (1, 0)))  # (T+1)^2 reducible
    with pytest.raises(ValidationError):
        LocalFieldDesc(3, 1, 2, ((0, 1)), ((-9,), (0,), (1,)))  # constant valuation 2
    with pytest.raises(ValidationError):
        LocalFieldDesc(3, 1, 2, (0, 1), ((-1,), (0,), (1,)))  # constant is a unit


def test_tower_relations(q3_ram, q3_mixed):
    # pi * pi reduces to p under the Eisenstein relation T^2 - p
    pi = q3_ram.uniformizer()
    assert pi * pi == q3_ram.from_int(3)
    # mixed tower: theta satisfies theta^2 + 1 = 0
    th = q3_mixed.unram_gen()
    assert th * th == q3_mixed.from_int(-1)
    assert q3_mixed.uniformizer() ** 2 == q3_mixed.from_int(3)


# ---------------------------------------------------------------------------
# valuation


def test_valuation_basics(q3, q3_ram):
    assert q3.from_int(3).valuation() == 1
    assert q3.from_int(5).valuation() == 0
    assert q3.from_int(18).valuation() == 2
    assert q3.zero().valuation() == INF
    assert q3_ram.uniformizer().valuation() == Fraction(1, 2)
    assert q3.from_rational(Fraction(1, 3)).valuation() == -1
    assert q3.from_rational(Fraction(1, 2)).valuation() == 0


def test_valuation_matches_norm_oracle(q3_ram):
    # element 3 + pi: the minimum-term rule gives 1/2, and so does the
    # independent resultant-norm oracle
    coords = [[3], [1]]
    x = q3_ram.element(coords)
    assert oracle_valuation(q3_ram, coords) == Fraction(1, 2)
    assert x.valuation() == Fraction(1, 2)
    # 1 + pi: unit term dominates
    coords = [[1], [1]]
    assert oracle_valuation(q3_ram, coords) == 0
    assert q3_ram.element(coords).valuation() == 0


def test_valuation_oracle_grid(all_fields):
    cases = [
        [[1]], [[7]], [[-6]], [[Fraction(5, 9)]],
    ]
    for desc in all_fields:
        for base in cases:
            coords = [[0] * desc.f_l for _ in range(desc.e_l)]
            coords[0][0] = base[0][0]
            if desc.e_l > 1:
                coords[1][0] = 2
            if desc.f_l > 1:
                coords[0][1] = 3
            x = desc.element(coords)
            assert x.valuation() == oracle_valuation(desc, coords)


def test_indistinguishable_zero_raises(q3):
    x = q3.from_int(7)
    diff = x - x
    assert diff.is_zero_at_prec()
    assert not diff.is_exact_zero()
    with pytest.raises(PrecisionLoss):
        diff.valuation()


def test_capped_tail_is_invisible(q3):
    # 3^100 at precision 60 cannot be told apart from zero
    tail = q3.from_int(3 ** 100)
    assert tail.is_zero_at_prec()
    with pytest.raises(PrecisionLoss):
        tail.valuation()


# ---------------------------------------------------------------------------
# ring arithmetic


def test_product_matches_sympy_reduction(q3_ram, q3_mixed, q5_unr):
    import itertools

    for desc in (q3_ram, q3_mixed, q5_unr):
        vals = [1, 2, -1]
        shapes = []
        for fill in itertools.product(vals, repeat=min(4, desc.e_l * desc.f_l)):
            coords = [[0] * desc.f_l for _ in range(desc.e_l)]
            flat = [(a, b) for a in range(desc.e_l) for b in range(desc.f_l)]
            for (a, b), c in zip(flat, fill):
                coords[a][b] = c
            shapes.append(coords)
            if len(shapes) >= 6:
                break
        for cx, cy in zip(shapes, reversed(shapes)):
            x = desc.element(cx, INF)
            y = desc.element(cy, INF)
            expected = oracle_product_coords(desc, cx, cy)
            got = (x * y).coefficients()
            assert [list(r) for r in got] == expected


def test_ring_axioms_sampled(all_fields):
    for desc in all_fields:
        xs = [sample_element(desc, Fraction(v, desc.e_l), seed=100 + v) for v in range(-2, 3)]
        for i, x in enumerate(xs):
            for j, y in enumerate(xs):
                assert x * y == y * x
                assert x + y == y + x
                z = xs[(i + j) % len(xs)]
                assert (x + y) * z == x * z + y * z
                assert (x * y) * z == x * (y * z)


def test_multiplicativity_of_valuation(all_fields):
    for desc in all_fields:
        for sv in range(-3, 4):
            for tv in range(-2, 3):
                x = sample_element(desc, Fraction(sv, desc.e_l), seed=sv * 17 + tv)
                y = sample_element(desc, Fraction(tv, desc.e_l), seed=sv - 31 * tv)
                assert (x * y).valuation() == x.valuation() + y.valuation()


def test_ultrametric(all_fields):
    for desc in all_fields:
        a = sample_element(desc, 0, seed=5)
        b = sample_element(desc, 1, seed=6)
        s = a + b
        # distinct valuations: minimum is attained
        assert s.valuation() == 0
        c = sample_element(desc, 1, seed=7)
        t = b + c
        assert t.valuation() >= 1


def test_inverse_roundtrip(all_fields):
    for desc in all_fields:
        one = desc.one()
        for v in range(-2, 3):
            x = sample_element(desc, Fraction(v, desc.e_l), seed=900 + v)
            assert x * x.inverse() == one
            assert x.inverse().valuation() == -x.valuation()


def test_inverse_errors(q3):
    with pytest.raises(ZeroInput):
        q3.zero().inverse()
    x = q3.from_int(2)
    with pytest.raises(PrecisionLoss):
        (x - x).inverse()


def test_rational_embedding(q3):
    half = q3.from_rational(Fraction(1, 2))
    assert half * 2 == q3.one()
    third = q3.from_rational(Fraction(1, 3))
    assert third * 3 == q3.one()
    assert third.valuation() == -1


def test_precision_floor_tracking(q3):
    x = q3.from_int(5)
    y = q3.from_rational(Fraction(1, 3))
    assert x.prec == Fraction(60)
    prod = x * y
    # multiplying by a valuation -1 element lowers the absolute floor
    assert prod.prec == Fraction(59)
    inv = q3.from_int(9).inverse()
    assert inv.prec == Fraction(60 - 4)


# ---------------------------------------------------------------------------
# sampling


def test_sampling_deterministic_and_exact(all_fields):
    for desc in all_fields:
        for tv in (Fraction(0), Fraction(1), Fraction(-2), Fraction(1, desc.e_l)):
            a = sample_element(desc, tv, seed=42)
            b = sample_element(desc, tv, seed=42)
            c = sample_element(desc, tv, seed=43)
            assert a == b
            assert a.valuation() == tv
            assert c.valuation() == tv
    with pytest.raises(InvalidValuation):
        sample_element(LocalFieldDesc(3, 1, 1, (0, 1), ((-3,), (1,))), Fraction(1, 2), seed=1)


def test_sample_unit(q3_mixed):
    u = sample_unit(q3_mixed, seed=77)
    assert u.valuation() == 0


# ---------------------------------------------------------------------------
# Newton polygon and root lifting


def test_roots_linear_split(q3):
    one = q3.one()
    p = q3.from_int(3)
    # (T - 3)(T - 1) = T^2 - 4T + 3
    coeffs = [p, q3.from_int(-4), one]
    roots = roots_in_field(coeffs)
    vals = sorted(r.valuation() for r in roots)
    assert vals == [0, 1]
    for r in roots:
        assert poly_eval(coeffs, r).is_zero_at_prec()


def test_roots_same_valuation_distinct_residues():
    q5 = LocalFieldDesc(5, 1, 1, (0, 1), ((-5,), (1,)))
    one = q5.one()
    # (T - 1)(T - 2) = T^2 - 3T + 2, both roots are units
    coeffs = [q5.from_int(2), q5.from_int(-3), one]
    roots = roots_in_field(coeffs)
    assert len(roots) == 2
    assert sorted([r == q5.from_int(1) for r in roots]) == [False, True]
    assert any(r == q5.from_int(2) for r in roots)


def test_repeated_root_fails_loudly(q3):
    one = q3.one()
    # (T - 1)^2
    coeffs = [one, q3.from_int(-2), one]
    with pytest.raises(RootLiftingError):
        roots_in_field(coeffs)


def test_roots_three_distinct_slopes(q3):
    p = q3.from_int(3)
    pinv = p.inverse()
    one = q3.one()
    # (T - p)(T - 1)(T - 1/p)
    c0 = -(p * one * pinv)
    c1 = p * one + p * pinv + one * pinv
    c2 = -(p + one + pinv)
    coeffs = [c0, c1, c2, one]
    roots = roots_in_field(coeffs)
    assert sorted(r.valuation() for r in roots) == [-1, 0, 1]


def test_roots_in_ramified_field(q3_ram):
    pi = q3_ram.uniformizer()
    one = q3_ram.one()
    coeffs = [pi * one, -(pi + one), one]  # (T - pi)(T - 1)
    roots = roots_in_field(coeffs)
    assert sorted(r.valuation() for r in roots) == [0, Fraction(1, 2)]


def test_newton_slopes_shape(q3):
    one = q3.one()
    coeffs = [q3.from_int(9), q3.from_int(3), one]
    segs, hull = newton_slopes(coeffs)
    assert [(val, ln) for val, ln, _, _ in segs] == [(1, 2)]


def test_hensel_root_quadratic(q2):
    # T^2 - 9 over Q_2 (Hensel from the residue 1)
    one = q2.one()
    coeffs = [q2.from_int(-9), q2.zero(), one]
    x = hensel_root(coeffs, q2.from_int(1))
    assert x * x == q2.from_int(9)
