import json
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from wmt.errors import DenominatorVanishes, NotExpandable
from wmt.laurent import GeneratorSet, LaurentPolynomial, RationalFunction

G = GeneratorSet.standard(1)     # (q, x1, y1)
G2 = GeneratorSet.standard(2)


def mono(q=0, x=0, y=0, c=1):
    return RationalFunction.monomial(G, (q, x, y), c)


def inv(q=0, x=0, y=0):
    return RationalFunction.inverse_binomial(G, (q, x, y))


# strategies ---------------------------------------------------------------

exps = st.tuples(*[st.integers(-2, 2)] * 3)
coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=4)
polys = st.dictionaries(exps, coeffs, max_size=4).map(lambda d: LaurentPolynomial(3, d))
dens = st.lists(exps.filter(any), max_size=2)
rfs = st.builds(lambda p, d: RationalFunction(G, p, d), polys, dens)

POINTS = [
    {"q": Fraction(3), "x1": Fraction(2, 7), "y1": Fraction(5, 11)},
    {"q": Fraction(5), "x1": Fraction(-3, 13), "y1": Fraction(7, 3)},
]


def safe_eval(f, pt):
    try:
        return f.eval_exact(pt)
    except DenominatorVanishes:
        return None


# add ----------------------------------------------------------------------

def test_add_identity():
    f = inv(x=1)
    assert (f + RationalFunction.zero(G)).equals(f)


def test_add_cancellation():
    s = inv(x=1) + mono(x=1, c=-1) * inv(x=1)
    assert s.reduce().is_one()
    assert not s.reduce().den


def test_a1_weyl_sum_core():
    # hand expansion: (1 - x/y) - y^-1 (1 - x y) = (1 - y^-1)(1 + x)
    s = inv(x=1, y=1) - mono(y=-1) * inv(x=1, y=-1)
    expected = RationalFunction(G, ((1 - mono(y=-1)) * (1 + mono(x=1))).num, [(0, 1, 1), (0, 1, -1)])
    assert s.equals(expected)
    assert s.num == expected.num


# mul ----------------------------------------------------------------------

def test_mul_examples():
    one_minus_x = RationalFunction.binomial(G, (0, 1, 0))
    assert (one_minus_x * inv(x=1)).reduce().is_one()
    assert (mono(1, 2, 3) * mono(-1, 1, -5)).num == mono(0, 3, -2).num
    f = (1 + mono(x=1)) * inv(x=1, y=1)
    g = f * RationalFunction.binomial(G, (0, 1, 1))
    r = g.reduce()
    assert not r.den and r.num == (1 + mono(x=1)).num


def test_scale_and_neg():
    f = inv(x=1)
    assert (f.scale(3) - f - f - f).equals(RationalFunction.zero(G))
    assert (-f + f).reduce().is_zero()
    assert (f * 2).equals(f + f)


# reduce -------------------------------------------------------------------

def test_reduce_examples():
    f = RationalFunction(G, LaurentPolynomial(3, {(0, 0, 0): 1, (0, 2, 0): -1}), [(0, 1, 0)])
    r = f.reduce()
    assert not r.den and r.num == (1 + mono(x=1)).num

    g = RationalFunction(G, ((1 - mono(y=-1)) * (1 + mono(x=1))).num, [(0, 0, -1)])
    r = g.reduce()
    assert not r.den and r.num == (1 + mono(x=1)).num

    h = RationalFunction(G, (1 + mono(x=1)).num, [(0, 1, 0)])
    assert h.reduce().den == h.den and h.reduce().num == h.num


def test_reduce_non_primitive_binomial():
    # 1 - x^2 divides 1 - x^6 but 1 - x^4 does not divide 1 - x^6
    p = RationalFunction.binomial(G, (0, 6, 0)).num
    assert RationalFunction(G, p, [(0, 2, 0)]).reduce().den == ()
    assert RationalFunction(G, p, [(0, 4, 0)]).reduce().den == ((0, 4, 0),)


def test_divide_binomial_mixed_exponents():
    m = (1, -2, 3)
    q = LaurentPolynomial(3, {(0, 1, 0): 2, (-1, 0, 4): Fraction(-1, 3), (2, 2, 2): 5})
    p = q.times_binomial(m)
    assert p.divide_binomial(m) == q
    assert (p + LaurentPolynomial.constant(3)).divide_binomial(m) is None


@settings(max_examples=60, deadline=None)
@given(polys, exps.filter(any))
def test_divide_binomial_roundtrip(q, m):
    assert q.times_binomial(m).divide_binomial(m) == q


@settings(max_examples=60, deadline=None)
@given(rfs)
def test_reduce_preserves_equality(f):
    assert f.equals(f.reduce())


# equals / ring laws -------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(rfs, rfs, rfs)
def test_ring_laws(f, g, h):
    assert (f + g).equals(g + f)
    assert (f * g).equals(g * f)
    assert ((f + g) + h).equals(f + (g + h))
    assert ((f * g) * h).equals(f * (g * h))
    assert (f * (g + h)).equals(f * g + f * h)


@settings(max_examples=40, deadline=None)
@given(rfs, rfs)
def test_eval_homomorphism(f, g):
    for pt in POINTS:
        a, b = safe_eval(f, pt), safe_eval(g, pt)
        assume(a is not None and b is not None)
        assert (f + g).eval_exact(pt) == a + b
        assert (f * g).eval_exact(pt) == a * b


def test_orientation_is_a_unit_change():
    f = inv(y=-1)              # stored as -y/(1 - y)
    assert f.den == ((0, 0, 1),)
    pt = POINTS[0]
    assert f.eval_exact(pt) == 1 / (1 - 1 / pt["y1"])


def test_canonical_no_zero_terms():
    p = LaurentPolynomial(3, {(0, 0, 0): 1, (1, 0, 0): 0})
    assert p.terms == {(0, 0, 0): Fraction(1)}
    assert (p - p).terms == {}
    assert LaurentPolynomial(3, {(1, 0, 0): 2}) == LaurentPolynomial(3, {(1, 0, 0): Fraction(4, 2)})


# eval ---------------------------------------------------------------------

def test_eval_examples():
    assert inv(x=1).eval_exact({"q": 7, "x1": Fraction(1, 2), "y1": 3}) == 2
    f = (1 - mono(q=-1, y=1)) * (1 + mono(x=1)) * inv(x=1, y=1) * inv(x=1, y=-1)
    pt = {"q": 2, "y1": Fraction(1, 2), "x1": Fraction(1, 8)}
    # by hand: (3/4)(9/8) / ((15/16)(3/4)) = 6/5
    assert f.eval_exact(pt) == Fraction(6, 5)
    with pytest.raises(DenominatorVanishes):
        inv(x=1).eval_exact({"q": 2, "x1": 1, "y1": 3})


# series -------------------------------------------------------------------

def test_series_geometric():
    s = inv(x=1).series_in_x(10)
    assert sorted(s) == [(k,) for k in range(11)]
    assert all(v.is_one() for v in s.values())
    s = inv(x=1, y=1).series_in_x(8)
    assert all(s[(k,)].equals(mono(y=k)) for k in range(9))


def test_series_truncation_identity():
    # (1 - x) * sum_{k<=K} x^k = 1 - x^{K+1}
    K = 12
    partial = sum((mono(x=k) for k in range(K + 1)), RationalFunction.zero(G))
    assert (RationalFunction.binomial(G, (0, 1, 0)) * partial).equals(
        RationalFunction.binomial(G, (0, K + 1, 0)))
    s = inv(x=1).series_in_x(K)
    total = RationalFunction.zero(G)
    for (k,), v in s.items():
        total = total + v * mono(x=k)
    assert total.equals(partial)


def test_series_keeps_x_free_denominators():
    f = inv(y=1) * inv(x=1)
    s = f.series_in_x(3)
    assert all(v.den == ((0, 0, 1),) for v in s.values())


def test_series_rejects_mixed_signs():
    with pytest.raises(NotExpandable):
        RationalFunction.inverse_binomial(G2, (0, 1, -1, 0, 0)).series_in_x(3)


def test_series_two_variables():
    f = RationalFunction.inverse_binomial(G2, (0, 1, 0, 1, 0)) * \
        RationalFunction.inverse_binomial(G2, (0, 0, 1, 0, 1))
    s = f.series_in_x(5)
    assert len(s) == 21            # k1 + k2 <= 5
    assert s[(2, 3)].equals(RationalFunction.monomial(G2, (0, 0, 0, 2, 3)))


# json / text --------------------------------------------------------------

def test_json_roundtrip_and_format():
    f = (1 - mono(q=-1, y=1)) * (1 + mono(x=1)) * inv(x=1, y=1) * inv(x=1, y=-1)
    data = json.loads(f.to_json())
    assert data["generators"] == ["q", "x1", "y1"]
    assert data["denominator"] == [[0, 1, -1], [0, 1, 1]]
    assert data["numerator"] == sorted(data["numerator"], key=lambda t: t[2])
    assert [-1, 1, [-1, 0, 1]] in data["numerator"]
    assert RationalFunction.from_dict(data).equals(f)
    assert f.to_json() == RationalFunction.from_dict(data).to_json()


def test_text_rendering():
    f = (1 - mono(q=-1, y=1)) * inv(x=1)
    assert f.to_text() == "(-q^-1*y1 + 1) / ((1 - x1))"


def test_generator_mismatch_raises():
    with pytest.raises(ValueError):
        inv(x=1) + RationalFunction.constant(G2)


def test_is_polynomial_in_x():
    assert (inv(y=1) * (1 + mono(x=1))).is_polynomial_in_x()
    assert not inv(x=1, y=1).is_polynomial_in_x()
    assert (RationalFunction.binomial(G, (0, 1, 1)) * inv(x=1, y=1)).is_polynomial_in_x()
