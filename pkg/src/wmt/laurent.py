"""Exact Laurent polynomials and rational functions with factored binomial
denominators.

Every closed form handled by this package has the shape

    N / prod_j (1 - m_j)

with N a Laurent polynomial over Q and m_j monomials in the generators
(q, x_1..x_r, y_1..y_r).  Denominators are kept factored, so no multivariate
gcd is ever needed: identity of two functions is decided by cross
multiplication, and cancellation is exact division by a binomial.

>>> g = GeneratorSet.standard(1)
>>> f = RationalFunction.inverse_binomial(g, g.exponent(x1=1))
>>> (f * RationalFunction.binomial(g, g.exponent(x1=1))).reduce().is_one()
True
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import DenominatorVanishes, NotExpandable

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered generator names; q is always index 0.

    ``standard(r)`` is (q, x1..xr, y1..yr); ``diagonal(r)`` is the
    single-x variant (q, x, y1..yr) used after setting all lambda_alpha = s.
    """

    names: tuple[str, ...]

    @classmethod
    def standard(cls, rank: int) -> GeneratorSet:
        return cls(("q",) + tuple(f"x{i}" for i in range(1, rank + 1))
                   + tuple(f"y{i}" for i in range(1, rank + 1)))

    @classmethod
    def diagonal(cls, rank: int) -> GeneratorSet:
        return cls(("q", "x") + tuple(f"y{i}" for i in range(1, rank + 1)))

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    @property
    def x_indices(self) -> tuple[int, ...]:
        return tuple(i for i, n in enumerate(self.names) if n.startswith("x"))

    @property
    def y_indices(self) -> tuple[int, ...]:
        return tuple(i for i, n in enumerate(self.names) if n.startswith("y"))

    def zero(self) -> Exponent:
        return (0,) * len(self.names)

    def exponent(self, **powers: int) -> Exponent:
        e = [0] * len(self.names)
        for name, p in powers.items():
            e[self.index(name)] = p
        return tuple(e)


def _add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(i + j for i, j in zip(a, b))


def _scale(a: Exponent, k: int) -> Exponent:
    return tuple(k * i for i in a)


def _is_zero(a: Exponent) -> bool:
    return not any(a)


class LaurentPolynomial:
    """Sparse map exponent -> nonzero Fraction."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        self.terms: dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    if len(e) != nvars:
                        raise ValueError("exponent length does not match generator count")
                    self.terms[tuple(e)] = c

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def constant(cls, nvars, c=1):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exp: Exponent, c=1):
        return cls(len(exp), {exp: c})

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None

    def items(self):
        """Terms in canonical (lexicographic exponent) order."""
        return sorted(self.terms.items())

    def __add__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPolynomial._raw(self.nvars, out)

    def __neg__(self):
        return LaurentPolynomial._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> LaurentPolynomial:
        c = Fraction(c)
        if not c:
            return LaurentPolynomial(self.nvars)
        return LaurentPolynomial._raw(self.nvars, {e: c * v for e, v in self.terms.items()})

    def shift(self, exp: Exponent, c=1) -> LaurentPolynomial:
        """Multiply by the monomial c * gen^exp."""
        c = Fraction(c)
        if not c:
            return LaurentPolynomial(self.nvars)
        return LaurentPolynomial._raw(
            self.nvars, {_add(e, exp): c * v for e, v in self.terms.items()})

    def __mul__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        if len(self.terms) < len(other.terms):
            self, other = other, self
        out: dict[Exponent, Fraction] = defaultdict(Fraction)
        for e2, c2 in other.terms.items():
            for e1, c1 in self.terms.items():
                out[_add(e1, e2)] += c1 * c2
        return LaurentPolynomial._raw(self.nvars, {e: c for e, c in out.items() if c})

    def times_binomial(self, m: Exponent) -> LaurentPolynomial:
        """self * (1 - gen^m)."""
        return self - self.shift(m)

    def divide_binomial(self, m: Exponent) -> LaurentPolynomial | None:
        """Exact quotient self / (1 - gen^m), or None if it does not divide.

        The lattice of exponents splits into cosets of Z*m and multiplication
        by (1 - gen^m) acts on each coset separately, as (1 - z) on a
        univariate Laurent polynomial in z.  So the division is exact iff
        the coefficients in every coset sum to zero, and the quotient's
        coefficients are the running partial sums along each coset.
        """
        if _is_zero(m):
            raise ValueError("binomial 1 - 1 has no inverse")
        pivot = next(i for i, v in enumerate(m) if v)
        cosets: dict[Exponent, dict[int, Fraction]] = defaultdict(dict)
        for e, c in self.terms.items():
            t = e[pivot] // m[pivot]
            rep = tuple(a - t * b for a, b in zip(e, m))
            cosets[rep][t] = c
        out: dict[Exponent, Fraction] = {}
        for rep, line in cosets.items():
            if sum(line.values()) != 0:
                return None
            ts = sorted(line)
            running = Fraction(0)
            for t in range(ts[0], ts[-1]):
                running += line.get(t, 0)
                if running:
                    out[_add(rep, _scale(m, t))] = running
        return LaurentPolynomial._raw(self.nvars, out)

    def map_exponents(self, nvars: int, fn: Callable[[Exponent], Exponent]) -> LaurentPolynomial:
        out: dict[Exponent, Fraction] = defaultdict(Fraction)
        for e, c in self.terms.items():
            out[fn(e)] += c
        return LaurentPolynomial._raw(nvars, {e: c for e, c in out.items() if c})

    def evaluate(self, point: tuple[Fraction, ...]) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            total += c * monomial_value(e, point)
        return total

    def span(self, index: int) -> int:
        """max - min exponent of one generator (0 for the zero polynomial)."""
        if not self.terms:
            return 0
        vals = [e[index] for e in self.terms]
        return max(vals) - min(vals)

    def __repr__(self):
        return f"LaurentPolynomial({self.nvars}, {dict(self.items())!r})"


def monomial_value(e: Exponent, point: tuple[Fraction, ...]) -> Fraction:
    v = Fraction(1)
    for base, k in zip(point, e):
        if k:
            if base == 0 and k < 0:
                raise DenominatorVanishes("negative power of a generator assigned 0")
            v *= base ** k
    return v


def _orient(gens: GeneratorSet, m: Exponent) -> tuple[Exponent, bool]:
    """Canonical orientation of a binomial (1 - gen^m) up to a unit.

    The first nonzero exponent, scanning x-slots first and then all slots,
    is made positive.  Factors that admit geometric expansion in x (all
    x-exponents >= 0) therefore keep their orientation.
    """
    order = gens.x_indices + tuple(range(len(m)))
    for i in order:
        if m[i]:
            return (m, False) if m[i] > 0 else (_scale(m, -1), True)
    raise ValueError("zero exponent in binomial factor")


class RationalFunction:
    """numerator / prod (1 - gen^m) over a fixed generator set.

    ``den`` is stored as a sorted tuple of exponent vectors (a multiset).
    Arithmetic never expands a denominator; use :meth:`reduce` to cancel
    factors that divide the numerator exactly.
    """

    __slots__ = ("gens", "num", "den")

    def __init__(self, gens: GeneratorSet, num: LaurentPolynomial,
                 den: Iterable[Exponent] = ()):
        if num.nvars != len(gens):
            raise ValueError("numerator arity does not match generators")
        factors = []
        for m in den:
            m = tuple(m)
            if len(m) != len(gens):
                raise ValueError("denominator arity does not match generators")
            if _is_zero(m):
                raise DenominatorVanishes("denominator factor 1 - 1")
            m, flipped = _orient(gens, m)
            if flipped:
                # 1/(1 - 1/u) = -u/(1 - u)
                num = num.shift(m, -1)
            factors.append(m)
        self.gens = gens
        self.num = num
        self.den: tuple[Exponent, ...] = tuple(sorted(factors))

    @classmethod
    def _raw(cls, gens, num, den):
        f = cls.__new__(cls)
        f.gens, f.num, f.den = gens, num, tuple(sorted(den))
        return f

    # constructors

    @classmethod
    def constant(cls, gens: GeneratorSet, c=1) -> RationalFunction:
        return cls._raw(gens, LaurentPolynomial.constant(len(gens), c), ())

    @classmethod
    def zero(cls, gens: GeneratorSet) -> RationalFunction:
        return cls._raw(gens, LaurentPolynomial(len(gens)), ())

    @classmethod
    def monomial(cls, gens: GeneratorSet, exp: Exponent, c=1) -> RationalFunction:
        return cls._raw(gens, LaurentPolynomial.monomial(tuple(exp), c), ())

    @classmethod
    def polynomial(cls, gens: GeneratorSet, terms: Mapping[Exponent, object]) -> RationalFunction:
        return cls._raw(gens, LaurentPolynomial(len(gens), terms), ())

    @classmethod
    def binomial(cls, gens: GeneratorSet, exp: Exponent) -> RationalFunction:
        """The polynomial 1 - gen^exp."""
        zero = gens.zero()
        return cls.polynomial(gens, {zero: 1, tuple(exp): -1} if not _is_zero(exp) else {})

    @classmethod
    def inverse_binomial(cls, gens: GeneratorSet, exp: Exponent) -> RationalFunction:
        """1 / (1 - gen^exp)."""
        return cls(gens, LaurentPolynomial.constant(len(gens)), [exp])

    # ring operations

    def _check(self, other):
        if self.gens != other.gens:
            raise ValueError(f"generator mismatch: {self.gens.names} vs {other.gens.names}")

    def __add__(self, other: RationalFunction) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(self.gens, other)
        self._check(other)
        if not other.num:
            return self
        if not self.num:
            return other
        a, b = Counter(self.den), Counter(other.den)
        common = a | b
        na = self.num
        for m, k in (common - a).items():
            for _ in range(k):
                na = na.times_binomial(m)
        nb = other.num
        for m, k in (common - b).items():
            for _ in range(k):
                nb = nb.times_binomial(m)
        return RationalFunction._raw(self.gens, na + nb, common.elements())

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(self.gens, -self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(self.gens, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            return self.scale(other)
        self._check(other)
        return RationalFunction._raw(self.gens, self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def scale(self, c) -> RationalFunction:
        return RationalFunction._raw(self.gens, self.num.scale(c), self.den)

    def __pow__(self, k: int) -> RationalFunction:
        if k < 0:
            return self.reciprocal() ** (-k)
        out = RationalFunction.constant(self.gens)
        for _ in range(k):
            out = out * self
        return out

    def reciprocal(self) -> RationalFunction:
        """1/self; requires the numerator to be a single monomial."""
        if len(self.num) != 1:
            raise ValueError("reciprocal needs a monomial numerator")
        (e, c), = self.num.terms.items()
        num = LaurentPolynomial.monomial(_scale(e, -1), 1 / c)
        for m in self.den:
            num = num.times_binomial(m)
        return RationalFunction._raw(self.gens, num, ())

    def __truediv__(self, other) -> RationalFunction:
        if not isinstance(other, RationalFunction):
            return self.scale(1 / Fraction(other))
        return self * other.reciprocal()

    # structure

    def reduce(self) -> RationalFunction:
        """Cancel every denominator binomial that divides the numerator."""
        num = self.num
        if not num:
            return RationalFunction.zero(self.gens)
        kept = []
        for m in self.den:
            q = num.divide_binomial(m)
            if q is None:
                kept.append(m)
            else:
                num = q
        return RationalFunction._raw(self.gens, num, kept)

    def equals(self, other: RationalFunction) -> bool:
        self._check(other)
        a, b = Counter(self.den), Counter(other.den)
        lhs = self.num
        for m in (b - a).elements():
            lhs = lhs.times_binomial(m)
        rhs = other.num
        for m in (a - b).elements():
            rhs = rhs.times_binomial(m)
        return lhs == rhs

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.equals(other)
        if isinstance(other, (int, Fraction)):
            return self.equals(RationalFunction.constant(self.gens, other))
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.equals(RationalFunction.constant(self.gens))

    def is_polynomial_in_x(self) -> bool:
        """After reduction, no denominator factor involves an x-generator."""
        xs = self.gens.x_indices
        return all(not any(m[i] for i in xs) for m in self.reduce().den)

    def relabel(self, gens: GeneratorSet) -> RationalFunction:
        """Same exponent data read over another generator set of equal arity."""
        if len(gens) != len(self.gens):
            raise ValueError("relabel needs equal arity")
        return RationalFunction(gens, LaurentPolynomial._raw(len(gens), dict(self.num.terms)), self.den)

    def substitute(self, gens: GeneratorSet, fn: Callable[[Exponent], Exponent]) -> RationalFunction:
        """Monomial substitution; ``fn`` must be additive on exponents."""
        num = self.num.map_exponents(len(gens), fn)
        return RationalFunction(gens, num, [fn(m) for m in self.den])

    # evaluation

    def _point(self, assignment: Mapping[str, object]) -> tuple[Fraction, ...]:
        missing = [n for n in self.gens.names if n not in assignment]
        if missing:
            raise KeyError(f"unassigned generators: {missing}")
        return tuple(Fraction(assignment[n]) for n in self.gens.names)

    def eval_exact(self, assignment: Mapping[str, object]) -> Fraction:
        point = self._point(assignment)
        value = self.num.evaluate(point)
        for m in self.den:
            d = 1 - monomial_value(m, point)
            if d == 0:
                raise DenominatorVanishes(f"factor 1 - {render_monomial(self.gens, m)} vanishes")
            value /= d
        return value

    def series_in_x(self, K: int) -> dict[Exponent, RationalFunction]:
        """Coefficients of the x-expansion, truncated at total x-degree K.

        Factors without x stay in the coefficient denominators; the others
        must have all x-exponents >= 0 and are expanded geometrically.
        Keys are x-exponent vectors; values have zero x-exponents.
        """
        xs = self.gens.x_indices
        xdeg = lambda e: sum(e[i] for i in xs)
        coeff_den, expand = [], []
        for m in self.den:
            xm = [m[i] for i in xs]
            if not any(xm):
                coeff_den.append(m)
            elif all(v >= 0 for v in xm):
                expand.append(m)
            else:
                raise NotExpandable(f"factor 1 - {render_monomial(self.gens, m)} mixes x-signs")
        if not self.num:
            return {}
        lowest = min(xdeg(e) for e in self.num.terms)
        budget = K - lowest
        series = {self.gens.zero(): Fraction(1)}
        for m in expand:
            d = xdeg(m)
            geo = [_scale(m, j) for j in range(budget // d + 1)]
            out: dict[Exponent, Fraction] = defaultdict(Fraction)
            for e, c in series.items():
                base = xdeg(e)
                for g in geo:
                    if base + xdeg(g) > budget:
                        break
                    out[_add(e, g)] += c
            series = out
        full: dict[Exponent, Fraction] = defaultdict(Fraction)
        for e1, c1 in self.num.terms.items():
            d1 = xdeg(e1)
            for e2, c2 in series.items():
                if d1 + xdeg(e2) <= K:
                    full[_add(e1, e2)] += c1 * c2
        grouped: dict[Exponent, dict[Exponent, Fraction]] = defaultdict(dict)
        for e, c in full.items():
            if c:
                key = tuple(e[i] for i in xs)
                rest = list(e)
                for i in xs:
                    rest[i] = 0
                grouped[key][tuple(rest)] = c
        return {k: RationalFunction._raw(self.gens, LaurentPolynomial._raw(len(self.gens), v), coeff_den)
                for k, v in sorted(grouped.items())}

    # rendering

    def to_dict(self) -> dict:
        return {
            "generators": list(self.gens.names),
            "numerator": [[c.numerator, c.denominator, list(e)] for e, c in self.num.items()],
            "denominator": [list(m) for m in self.den],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> RationalFunction:
        gens = GeneratorSet(tuple(data["generators"]))
        num = LaurentPolynomial(len(gens), {tuple(e): Fraction(n, d) for n, d, e in data["numerator"]})
        return cls(gens, num, [tuple(m) for m in data["denominator"]])

    def to_text(self) -> str:
        num = render_polynomial(self.gens, self.num)
        if not self.den:
            return num
        dens = Counter(self.den)
        parts = []
        for m in sorted(dens):
            s = f"(1 - {render_monomial(self.gens, m)})"
            parts.append(s if dens[m] == 1 else f"{s}^{dens[m]}")
        return f"({num}) / ({'*'.join(parts)})"

    def __repr__(self):
        return f"RationalFunction[{self.to_text()}]"


def render_monomial(gens: GeneratorSet, e: Exponent) -> str:
    parts = []
    for name, k in zip(gens.names, e):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts) if parts else "1"


def render_rational(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_polynomial(gens: GeneratorSet, p: LaurentPolynomial) -> str:
    if not p:
        return "0"
    out = []
    for e, c in p.items():
        mono = render_monomial(gens, e)
        mag = abs(c)
        if mono == "1":
            body = render_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{render_rational(mag)}*{mono}"
        sign = "-" if c < 0 else "+"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text
