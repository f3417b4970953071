"""Weyl-sum Mellin symbol of the class-one Whittaker function, diagonal
specialization, Euler factors and the factorization I(s) = L_pi(s) F_nu(s).

Variables over ``GeneratorSet.standard(r)``:

* ``x_i = q^{-lambda_{alpha_i}}``,
* ``y_i = q^{-nu_{alpha_i}}``; for a coroot ``sum c_i coroot_i`` the
  monomial ``q^{-nu_beta}`` is ``prod y_i^{c_i}``.

After specialization all ``x_i`` become one ``x = q^{-s}`` over
``GeneratorSet.diagonal(r)``.

``(w nu)_alpha = <w nu, coroot_alpha> = <nu, w^{-1} coroot_alpha>``, so the
Weyl term for ``w`` carries the coroots of ``w^{-1} Delta``.  The cofactor
``F_nu`` accordingly multiplies over ``Phi \\ w^{-1} Delta``; this is the set
for which the termwise identity with ``L_pi`` holds.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction

from .errors import EpsilonUnsupported, FactorizationFailed, NotEntire
from .laurent import GeneratorSet, RationalFunction
from .root_data import RootDatum, WeylElement, WeylGroup, generate_weyl, negative_simple_set

Exponent = tuple[int, ...]

FNU_ASSUMPTION = ("F_nu product over Phi \\ w^-1(Delta) with q^-(s+nu_beta) per beta; "
                  "(w nu)_alpha = <nu, w^-1 coroot_alpha>")


@dataclass(frozen=True)
class SpectralParams:
    datum: RootDatum

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def epsilon(self) -> tuple[int, ...]:
        return self.datum.epsilon

    @cached_property
    def weyl(self) -> WeylGroup:
        return generate_weyl(self.datum)

    @cached_property
    def gens(self) -> GeneratorSet:
        return GeneratorSet.standard(self.rank)

    @cached_property
    def diagonal_gens(self) -> GeneratorSet:
        return GeneratorSet.diagonal(self.rank)

    def y_exponent(self, coroot, gens: GeneratorSet | None = None) -> Exponent:
        """Exponent vector of q^{-nu_beta} for a coroot in the simple-coroot basis."""
        gens = gens or self.gens
        e = [0] * len(gens)
        for slot, c in zip(gens.y_indices, coroot):
            e[slot] = c
        return tuple(e)

    def x_exponent(self, i: int | None, gens: GeneratorSet | None = None) -> Exponent:
        """x_i (standard) or x (diagonal, i ignored)."""
        gens = gens or self.gens
        e = [0] * len(gens)
        xs = gens.x_indices
        e[xs[0] if len(xs) == 1 else xs[i]] = 1
        return tuple(e)


def _add(a, b):
    return tuple(i + j for i, j in zip(a, b))


def _mono(gens, e, c=1) -> RationalFunction:
    return RationalFunction.monomial(gens, e, c)


def c_factor(params: SpectralParams, gens: GeneratorSet | None = None) -> RationalFunction:
    """prod over simple alpha of
    (1 - (-1)^eps q^{-1} y)(1 - q^{-2} y)^eps / (1 - y^{-(1+eps)}).
    """
    gens = gens or params.gens
    out = RationalFunction.constant(gens)
    for i, eps in enumerate(params.epsilon):
        y = params.y_exponent(params.datum.simple_root(i), gens)
        q1 = _add(y, gens.exponent(q=-1))
        part = 1 - _mono(gens, q1, (-1) ** eps)
        if eps:
            part = part * RationalFunction.binomial(gens, _add(y, gens.exponent(q=-2)))
        den = tuple(-(1 + eps) * v for v in y)
        out = out * part * RationalFunction.inverse_binomial(gens, den)
    return out


def d_factor(w: WeylElement, params: SpectralParams, gens: GeneratorSet | None = None) -> RationalFunction:
    """prod over simple alpha with w(alpha) < 0 of y_alpha^{-(1+eps_alpha)}."""
    gens = gens or params.gens
    e = gens.zero()
    for i in sorted(negative_simple_set(w)):
        y = params.y_exponent(params.datum.simple_root(i), gens)
        e = _add(e, tuple(-(1 + params.epsilon[i]) * v for v in y))
    return _mono(gens, e)


def wnu_exponent(w: WeylElement, i: int, params: SpectralParams,
                 gens: GeneratorSet | None = None) -> Exponent:
    """Exponent of q^{-(w nu)_{alpha_i}}, through the coroot w^{-1}(coroot_i)."""
    winv = params.weyl.inverse(w)
    coroot = winv.act_on_coroot(params.datum.simple_root(i))
    return params.y_exponent(coroot, gens)


def wnu_monomial(w: WeylElement, i: int, params: SpectralParams) -> RationalFunction:
    return _mono(params.gens, wnu_exponent(w, i, params))


@dataclass(frozen=True)
class WeylTerm:
    """sign(w) * D(nu, w) * prod_alpha 1/(1 - x_alpha q^{-(w nu)_alpha})."""

    element: WeylElement
    sign: int
    d_exponent: Exponent
    wnu: tuple[Exponent, ...]

    def function(self, params: SpectralParams, gens: GeneratorSet | None = None) -> RationalFunction:
        gens = gens or params.gens
        den = [_add(params.x_exponent(i, gens), self._cast(params, gens, m))
               for i, m in enumerate(self.wnu)]
        d = self._cast(params, gens, self.d_exponent)
        return RationalFunction(gens, _mono(gens, d, self.sign).num, den)

    @staticmethod
    def _cast(params, gens, e):
        """Move a y-only exponent from standard generators to ``gens``."""
        src = params.gens
        out = [0] * len(gens)
        for a, b in zip(src.y_indices, gens.y_indices):
            out[b] = e[a]
        return tuple(out)


@dataclass(frozen=True)
class MellinSymbol:
    """I(lambda) = C(nu) * sum_w terms[w].

    The summands are kept separately; ``value`` combines them over the
    union of their denominators.
    """

    params: SpectralParams
    c: RationalFunction
    terms: tuple[WeylTerm, ...]
    threads: int = field(default=1, compare=False)

    @property
    def datum(self) -> RootDatum:
        return self.params.datum

    def summands(self, gens: GeneratorSet | None = None) -> list[RationalFunction]:
        fn = lambda t: t.function(self.params, gens)
        if self.threads > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                return list(pool.map(fn, self.terms))
        return [fn(t) for t in self.terms]

    def denominator_factors(self) -> list[Exponent]:
        """Multiset of all summand denominators plus those of C(nu), unreduced."""
        out = list(self.c.den)
        for s in self.summands():
            out.extend(s.den)
        return out

    @cached_property
    def value(self) -> RationalFunction:
        return self.c * _sum(self.summands(), self.params.gens)

    def eval_exact(self, assignment) -> Fraction:
        total = sum((s.eval_exact(assignment) for s in self.summands()), Fraction(0))
        return self.c.eval_exact(assignment) * total

    def to_dict(self, diagonal: bool = False) -> dict:
        fn = specialize_diagonal(self) if diagonal else self.value
        out = fn.to_dict()
        out["provenance"] = {
            "series": self.datum.series, "rank": self.datum.rank,
            "epsilon": list(self.datum.epsilon), "weyl_terms": len(self.terms),
            "diagonal": diagonal,
        }
        return out


def _sum(fs, gens) -> RationalFunction:
    total = RationalFunction.zero(gens)
    for f in fs:
        total = total + f
    return total


def weyl_terms(params: SpectralParams) -> tuple[WeylTerm, ...]:
    out = []
    for w in params.weyl:
        d = d_factor(w, params).num
        (d_exp, _), = d.terms.items()
        wnu = tuple(wnu_exponent(w, i, params) for i in range(params.rank))
        out.append(WeylTerm(w, w.sign, d_exp, wnu))
    return tuple(out)


def mellin_symbolic(params: SpectralParams, threads: int = 1) -> MellinSymbol:
    return MellinSymbol(params, c_factor(params), weyl_terms(params), threads)


def specialize_diagonal(sym: MellinSymbol) -> RationalFunction:
    """Set every x_alpha to a single x."""
    gens = sym.params.diagonal_gens
    c = c_factor(sym.params, gens)
    return c * _sum(sym.summands(gens), gens)


def diagonal_map(params: SpectralParams):
    """Exponent map standard(r) -> diagonal(r): x_i exponents add up."""
    src, dst = params.gens, params.diagonal_gens
    xs, ys = src.x_indices, src.y_indices

    def fn(e):
        return (e[0], sum(e[i] for i in xs)) + tuple(e[i] for i in ys)
    return fn


def _diag_root_factor(params, coroot) -> Exponent:
    """Exponent of x q^{-nu_beta} over the diagonal generators."""
    gens = params.diagonal_gens
    return _add(params.x_exponent(None, gens), params.y_exponent(coroot, gens))


def f_nu(params: SpectralParams, signs: dict[int, int] | None = None) -> RationalFunction:
    """C(nu) sum_w sign(w) D(nu,w) prod_{beta in Phi \\ w^{-1} Delta} (1 - x q^{-nu_beta}).

    Raises NotEntire if an x-dependent denominator survives reduction.
    ``signs`` lets callers override sign(w) by element index (negative
    controls only).
    """
    gens = params.diagonal_gens
    datum = params.datum
    total = RationalFunction.zero(gens)
    for idx, w in enumerate(params.weyl):
        winv = params.weyl.inverse(w)
        image = {winv.act_on_root(datum.simple_root(i)) for i in range(params.rank)}
        term = d_factor(w, params, gens).scale(signs.get(idx, w.sign) if signs else w.sign)
        for beta in datum.roots:
            if beta.root not in image:
                term = term * RationalFunction.binomial(gens, _diag_root_factor(params, beta.coroot))
        total = total + term
    out = (c_factor(params, gens) * total).reduce()
    if not out.is_polynomial_in_x():
        raise NotEntire("F_nu has an x-dependent denominator", out)
    return out


def l_trivial(params: SpectralParams) -> RationalFunction:
    gens = params.diagonal_gens
    return RationalFunction.inverse_binomial(gens, params.x_exponent(None, gens))


def _root_product(params) -> RationalFunction:
    gens = params.diagonal_gens
    return RationalFunction(gens, RationalFunction.constant(gens).num,
                            [_diag_root_factor(params, b.coroot) for b in params.datum.roots])


def l_adjoint(params: SpectralParams) -> RationalFunction:
    """(1 - x)^{-r} prod_{beta in Phi} (1 - x q^{-nu_beta})^{-1}."""
    if any(params.epsilon):
        raise EpsilonUnsupported("adjoint L-factor is only defined here for epsilon = 0")
    return l_trivial(params) ** params.rank * _root_product(params)


def l_pi(params: SpectralParams) -> RationalFunction:
    """L(Ad) / L(triv)^{dim A'} with dim A' = rank."""
    return (l_adjoint(params) / l_trivial(params) ** params.rank).reduce()


def verify_factorization(params: SpectralParams, symbol: MellinSymbol | None = None) -> dict:
    """Exact check of I(s) = L_pi(s) F_nu(s); raises FactorizationFailed.

    For epsilon = 1 only entirety is checked: F_nu has no x-denominators
    and I(s) times the product of its Weyl-sum denominators is polynomial
    in x.
    """
    symbol = symbol or mellin_symbolic(params)
    datum = params.datum
    report = {"status": "pass", "series": datum.series, "rank": datum.rank,
              "epsilon": list(datum.epsilon), "weyl_terms": len(symbol.terms),
              "assumption": FNU_ASSUMPTION}
    diag = specialize_diagonal(symbol)
    fn = f_nu(params)
    if any(datum.epsilon):
        report["check"] = "entirety"
        report["note"] = "experimental/unverified: factorization not defined for epsilon = 1"
        cleared = diag
        for m in [m for m in diag.den if any(m[i] for i in diag.gens.x_indices)]:
            cleared = cleared * RationalFunction.binomial(diag.gens, m)
        if not cleared.is_polynomial_in_x():
            report["status"] = "fail"
            report["residual"] = cleared.reduce().to_dict()
            raise FactorizationFailed("Weyl sum not cleared by its denominators",
                                      cleared, report)
        return report
    report["check"] = "factorization"
    rhs = l_pi(params) * fn
    if not diag.equals(rhs):
        residual = (diag - rhs).reduce()
        report["status"] = "fail"
        report["residual"] = residual.to_dict()
        raise FactorizationFailed("I(s) != L_pi(s) F_nu(s)", residual, report)
    return report


class CoefficientTable:
    """k -> coefficient of prod x_i^{k_i}; zero outside the computed support."""

    def __init__(self, gens: GeneratorSet, K: int, entries: dict[Exponent, RationalFunction]):
        self.gens = gens
        self.K = K
        self.entries = entries

    def __getitem__(self, k) -> RationalFunction:
        k = tuple(k) if not isinstance(k, int) else (k,)
        if any(v < 0 for v in k):
            return RationalFunction.zero(self.gens)
        if sum(k) > self.K:
            raise KeyError(f"{k} lies beyond the truncation bound {self.K}")
        return self.entries.get(k, RationalFunction.zero(self.gens))

    def __iter__(self):
        return iter(sorted(self.entries))

    def items(self):
        return sorted(self.entries.items())

    def __len__(self):
        return len(self.entries)

    def to_dict(self) -> dict:
        return {"K": self.K, "entries": [{"k": list(k), "value": v.to_dict()} for k, v in self.items()]}


def coefficients(sym: MellinSymbol, K: int) -> CoefficientTable:
    """Lattice coefficients of I(lambda) up to total x-degree K.

    Each Weyl summand is expanded with ``series_in_x``; C(nu) multiplies the
    sum at the end and every entry is reduced.
    """
    gens = sym.params.gens
    acc: dict[Exponent, RationalFunction] = {}
    for s in sym.summands():
        for k, v in s.series_in_x(K).items():
            acc[k] = acc[k] + v if k in acc else v
    entries = {}
    for k, v in acc.items():
        v = (sym.c * v).reduce()
        if not v.is_zero():
            entries[k] = v
    return CoefficientTable(gens, K, entries)
