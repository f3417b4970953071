"""Independent checks: truncated lattice sums against closed forms with
exact geometric tail bounds, the two GL2 routes against each other, and
degree-growth probes of the coefficients.

No floating point: a truncation report passes iff
|closed - partial| <= bound holds between exact rationals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import RatioTooLarge
from .laurent import GeneratorSet, RationalFunction, monomial_value, render_rational
from .mellin import SpectralParams, coefficients, mellin_symbolic
from .whittaker_gl2 import whittaker_value_closed, whittaker_value_integral

DEFAULT_RATIO_BOUND = Fraction(1, 2)


@dataclass(frozen=True)
class TruncationReport:
    K: int
    partial: Fraction
    closed: Fraction
    bound: Fraction
    series: str = ""
    rank: int = 0
    assignment: tuple = ()

    @property
    def error(self) -> Fraction:
        return abs(self.closed - self.partial)

    @property
    def passed(self) -> bool:
        return self.error <= self.bound

    def to_dict(self) -> dict:
        return {
            "kind": "truncated_mellin_sum",
            "params": {"series": self.series, "rank": self.rank},
            "assignment": {k: render_rational(v) for k, v in self.assignment},
            "K": self.K,
            "partial": render_rational(self.partial),
            "closed": render_rational(self.closed),
            "bound": render_rational(self.bound),
            "pass": self.passed,
        }


def _tail(rho: Fraction, r: int, K: int) -> Fraction:
    """sum_{n>K} C(n+r-1, r-1) rho^n = (1-rho)^{-r} - (head up to K)."""
    if rho == 0:
        return Fraction(0)
    head = sum((comb(n + r - 1, r - 1) * rho ** n for n in range(K + 1)), Fraction(0))
    return 1 / (1 - rho) ** r - head


def term_ratios(params: SpectralParams, assignment) -> list[list[Fraction]]:
    """|x_alpha q^{-(w nu)_alpha}| for each Weyl term and simple root."""
    sym = mellin_symbolic(params)
    gens = params.gens
    point = tuple(Fraction(assignment[n]) for n in gens.names)
    out = []
    for t in sym.terms:
        row = []
        for i, m in enumerate(t.wnu):
            e = tuple(a + b for a, b in zip(m, params.x_exponent(i)))
            row.append(abs(monomial_value(e, point)))
        out.append(row)
    return out


def truncated_mellin_sum(params: SpectralParams, assignment, K: int,
                         table=None) -> TruncationReport:
    """Partial lattice sum of I(lambda) against its closed form.

    The bound is |C(nu)| sum_w |D(nu,w)| sum_{n>K} C(n+r-1,r-1) rho_w^n,
    with rho_w the largest geometric ratio in the term for w.
    ``table`` may carry precomputed coefficients (at least to degree K).
    """
    assignment = {k: Fraction(v) for k, v in assignment.items()}
    sym = mellin_symbolic(params)
    ratios = term_ratios(params, assignment)
    worst = max(max(row) for row in ratios)
    if worst >= 1:
        raise RatioTooLarge(f"geometric ratio {render_rational(worst)} >= 1")
    table = table if table is not None else coefficients(sym, K)
    gens = params.gens
    point = tuple(assignment[n] for n in gens.names)
    xs = gens.x_indices
    partial = Fraction(0)
    for k, c in table.items():
        if sum(k) > K:
            continue
        xk = Fraction(1)
        for i, ki in zip(xs, k):
            xk *= point[i] ** ki
        if xk:
            partial += c.eval_exact(assignment) * xk
    closed = sym.eval_exact(assignment)
    r = params.rank
    c_abs = abs(sym.c.eval_exact(assignment))
    bound = Fraction(0)
    for t, row in zip(sym.terms, ratios):
        d = abs(monomial_value(t.d_exponent, point))
        bound += d * _tail(max(row), r, K)
    bound *= c_abs
    return TruncationReport(K, partial, closed, bound, params.datum.series, r,
                            tuple(sorted(assignment.items())))


def random_assignment(params: SpectralParams, rng: random.Random,
                      ratio_bound: Fraction = DEFAULT_RATIO_BOUND) -> dict[str, Fraction]:
    """q in {2,3,4,5,7}, y_i rational with C(nu) finite and nonzero, x_i small
    enough that every geometric ratio is at most ``ratio_bound``."""
    gens = params.gens
    q = Fraction(rng.choice([2, 3, 4, 5, 7]))
    a: dict[str, Fraction] = {"q": q}
    for i, eps in enumerate(params.epsilon):
        # y = 1 (or -1 when eps = 1) is a pole of C(nu); y = +-q, q^2 are zeros
        bad = {1, -1, q, -q, q * q} if eps else {1, q}
        while True:
            y = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            if y not in bad:
                break
        a[f"y{i + 1}"] = y
    for i in range(params.rank):
        a[f"x{i + 1}"] = Fraction(1)
    point = tuple(a[n] for n in gens.names)
    sym = mellin_symbolic(params)
    for i in range(params.rank):
        biggest = max(abs(monomial_value(t.wnu[i], point)) for t in sym.terms)
        # x_i = 1/n with n >= biggest / ratio_bound
        n = int(biggest / ratio_bound) + 1 + rng.randint(0, 3)
        a[f"x{i + 1}"] = Fraction(1, n)
    return a


@dataclass
class CrossOracleReport:
    k_max: int
    checked: list
    first_mismatch: int | None

    @property
    def passed(self) -> bool:
        return self.first_mismatch is None

    def to_dict(self) -> dict:
        return {"kind": "gl2_cross_oracle", "k_max": self.k_max,
                "checked": len(self.checked), "first_mismatch": self.first_mismatch,
                "pass": self.passed}


def gl2_cross_oracle(k_max: int, k_min: int = -20) -> CrossOracleReport:
    """Integral decomposition vs closed form of W(a(pi^k)) for k_min <= k <= k_max.

    Negative k must give 0 on both routes.
    """
    checked, first = [], None
    for k in range(k_min, k_max + 1):
        a, b = whittaker_value_integral(k), whittaker_value_closed(k)
        ok = a.equals(b) and (k >= 0 or a.is_zero())
        checked.append(k)
        if not ok and first is None:
            first = k
    return CrossOracleReport(k_max, checked, first)


@dataclass
class GrowthReport:
    series: str
    rank: int
    direction: int
    rows: list            # (k, q_span, y_spans...)
    onset: int | None     # first k from which second differences vanish

    @property
    def passed(self) -> bool:
        n = len(self.rows)
        return self.onset is not None and self.onset <= (n - 1) // 2

    def to_dict(self) -> dict:
        return {"kind": "growth_probe", "params": {"series": self.series, "rank": self.rank},
                "direction": self.direction + 1,
                "rows": [list(r) for r in self.rows], "onset": self.onset, "pass": self.passed}


def degree_spans(f, gens) -> tuple[int, ...]:
    poly = f.num
    return (poly.span(0),) + tuple(poly.span(i) for i in gens.y_indices)


def _onset(rows) -> int | None:
    cols = list(zip(*[r[1:] for r in rows]))
    n = len(rows)
    onset = 0
    for col in cols:
        second = [col[i + 2] - 2 * col[i + 1] + col[i] for i in range(n - 2)]
        last_bad = max((i for i, v in enumerate(second) if v), default=-1)
        onset = max(onset, last_bad + 1)
    return onset if onset <= n - 3 else None


def growth_probe(params: SpectralParams, direction: int, k_max: int, table=None) -> GrowthReport:
    """Numerator degree spans of the coefficient at k * e_direction, 0 <= k <= k_max.

    Passes when second differences are zero from some onset in the first
    half of the range to the end.
    """
    table = table if table is not None else coefficients(mellin_symbolic(params), k_max)
    rows = []
    for k in range(k_max + 1):
        kk = [0] * params.rank
        kk[direction] = k
        rows.append((k,) + degree_spans(table[tuple(kk)], params.gens))
    return GrowthReport(params.datum.series, params.rank, direction, rows, _onset(rows))


def gl2_growth_rows(k_max: int) -> list[tuple[int, ...]]:
    """Spans of the numerator of W(a(pi^k)) in (q, y1)."""
    from .whittaker_gl2 import GENS
    return [(k,) + degree_spans(whittaker_value_closed(k), GENS) for k in range(k_max + 1)]


def _perm_sign(p) -> int:
    inversions = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inversions % 2 else 1


def gln_proposition(n: int) -> RationalFunction:
    """The GL_n Weyl-sum formula written directly over permutations.

    Shares nothing with the root-datum code: W = S_n acting on
    nu = (nu_1..nu_n), alpha_i = e_i - e_{i+1}, (w nu)_i = nu_{w^{-1}(i)},
    w(alpha_i) < 0 iff w(i) > w(i+1), sign(w) from the inversion count.
    A difference nu_a - nu_b (a < b) is nu_{alpha_a} + ... + nu_{alpha_{b-1}},
    so q^{-(nu_a - nu_b)} = y_a ... y_{b-1}.
    """
    from itertools import permutations
    r = n - 1
    gens = GeneratorSet.standard(r)

    def y_exp(a, b):
        e = [0] * len(gens)
        lo, hi, sgn = (a, b, 1) if a < b else (b, a, -1)
        for i in range(lo, hi):
            e[1 + r + i] += sgn
        return e

    c = RationalFunction.constant(gens)
    for i in range(r):
        y = [0] * len(gens)
        y[1 + r + i] = 1
        qy = list(y)
        qy[0] = -1
        c = c * RationalFunction.binomial(gens, tuple(qy)) \
              * RationalFunction.inverse_binomial(gens, tuple(-v for v in y))
    total = RationalFunction.zero(gens)
    for p in permutations(range(n)):
        inv = [0] * n
        for i, pi in enumerate(p):
            inv[pi] = i
        d = [0] * len(gens)
        for i in range(r):
            if p[i] > p[i + 1]:
                d[1 + r + i] -= 1
        den = []
        for i in range(r):
            e = y_exp(inv[i], inv[i + 1])
            e[1 + i] += 1
            den.append(tuple(e))
        total = total + RationalFunction(gens, RationalFunction.monomial(gens, tuple(d), _perm_sign(p)).num, den)
    return c * total
