"""The class-one Whittaker function of SL2(F) and its Mellin transform.

Everything is expressed over the rank-one generators (q, x1, y1) with
y1 = q^{-nu} and x1 = q^{-s}.  For t = pi^k one has |t| = q^{-k}, so

    |t|^{-nu-1} = q^k y1^{-k},   |t|^{nu+1} = q^{-k} y1^k.

Measures: vol(O) = 1 for dx, vol(O^x) = 1 for d^x t.  The additive
character has conductor exactly O.
"""

from __future__ import annotations

from .laurent import GeneratorSet, RationalFunction

GENS = GeneratorSet.standard(1)


def _mono(q=0, x=0, y=0, c=1) -> RationalFunction:
    return RationalFunction.monomial(GENS, (q, x, y), c)


def f0_on_cell(v: int) -> RationalFunction:
    """f0(w n(x)) for a unipotent coordinate of valuation v.

    1 when |x| <= 1, else |x|^{-nu-1} with |x| = q^{-v}.
    """
    if v >= 0:
        return _mono()
    return _mono(q=v, y=-v)


def eta_ideal_integral(m: int) -> RationalFunction:
    """Integral of eta(-x) dx over pi^m O: q^{-m} for m >= 0, else 0."""
    if m < 0:
        return RationalFunction.zero(GENS)
    return _mono(q=-m)


def _prefactor() -> RationalFunction:
    """(1 - q^{-1}y) / (1 - y)."""
    return (1 - _mono(q=-1, y=1)) * RationalFunction.inverse_binomial(GENS, (0, 0, 1))


def whittaker_value_integral(k: int) -> RationalFunction:
    """W(a(pi^k)) by the decomposition of N into t^2 O and its shells.

    The inner part x in t^2 O contributes |t|^{-nu-1} vol-weighted character
    integral.  On the shell x in pi^{-j} t^2 O^x, |x| = q^j |t|^2, so
    |t|^{nu+1}|x|^{-nu-1} = |t|^{-nu-1} q^{-j} y^j, and the shell integral
    is the difference of two ideal integrals.  Shells with j > 2k + 1 see a
    nontrivial character on both ideals and vanish.
    """
    outer = _mono(q=k, y=-k)
    total = outer * eta_ideal_integral(2 * k)
    for j in range(1, 2 * k + 2):
        shell = eta_ideal_integral(2 * k - j) - eta_ideal_integral(2 * k - j + 1)
        total = total + outer * _mono(q=-j, y=j) * shell
    return total.reduce()


def whittaker_value_closed(k: int) -> RationalFunction:
    """(1 - q^{-1}y)/(1 - y) * q^{-k}(y^{-k} - y^{k+1}) for k >= 0, else 0."""
    if k < 0:
        return RationalFunction.zero(GENS)
    body = _mono(q=-k, y=-k) - _mono(q=-k, y=k + 1)
    return (_prefactor() * body).reduce()


def coefficient_table(k_max: int, closed: bool = True) -> dict[int, RationalFunction]:
    """k -> W(a(pi^k)) for 0 <= k <= k_max."""
    fn = whittaker_value_closed if closed else whittaker_value_integral
    return {k: fn(k) for k in range(k_max + 1)}


def geometric_sum(c0: RationalFunction, ratio: RationalFunction) -> RationalFunction:
    """sum_{k>=0} c0 * ratio^k for a monomial ratio."""
    (e, c), = ratio.num.terms.items()
    if c != 1 or ratio.den:
        raise ValueError("ratio must be a bare monomial")
    return c0 * RationalFunction.inverse_binomial(c0.gens, e)


def mellin_gl2() -> RationalFunction:
    """I(s) = sum_k W(a(pi^k)) q^k x^k, summed in closed form.

    The closed form of W(a(pi^k)) * q^k x^k splits into two geometric
    progressions in k with ratios x y^{-1} and x y.
    """
    pref = _prefactor()
    first = geometric_sum(pref, _mono(x=1, y=-1))
    second = geometric_sum(pref * _mono(y=1), _mono(x=1, y=1))
    return (first - second).reduce()


def mellin_gl2_expected() -> RationalFunction:
    """(1 - q^{-1}y)(1 + x) / ((1 - xy)(1 - x/y))."""
    num = (1 - _mono(q=-1, y=1)) * (1 + _mono(x=1))
    return RationalFunction(GENS, num.num, [(0, 1, 1), (0, 1, -1)])
