"""Sparse multivariate polynomials with exact coefficients.

A monomial is a tuple of ``(generator, exponent)`` pairs sorted by generator.
Generators are any mutually comparable hashables: plain strings for real
polynomials, ``(name, conj_flag)`` pairs for conjugate normal forms.
Coefficients are :class:`fractions.Fraction` or
:class:`pcqe.numbers.GaussianRational`; zero coefficients are never stored.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

Monomial = tuple[tuple[Any, int], ...]

ONE_MONO: Monomial = ()


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        g1, e1 = m1[i]
        g2, e2 = m2[j]
        if g1 == g2:
            out.append((g1, e1 + e2))
            i += 1
            j += 1
        elif g1 < g2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Poly:
    __slots__ = ('terms', '_hash')

    def __init__(self, terms: Mapping[Monomial, Any] | None = None):
        self.terms: dict[Monomial, Any] = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> Poly:
        p = object.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> Poly:
        return cls._raw({ONE_MONO: c} if c else {})

    @classmethod
    def var(cls, g: Hashable, coeff=Fraction(1)) -> Poly:
        return cls._raw({((g, 1),): coeff})

    @classmethod
    def zero(cls) -> Poly:
        return cls._raw({})

    # -- predicates and accessors -------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def constant_value(self, zero=Fraction(0)):
        return self.terms.get(ONE_MONO, zero)

    def variables(self) -> set:
        return {g for m in self.terms for g, _ in m}

    def degree(self, g: Hashable | None = None) -> int:
        """Degree in ``g``, or total degree; ``-1`` for the zero polynomial."""
        if not self.terms:
            return -1
        if g is None:
            return max(mono_degree(m) for m in self.terms)
        return max((e for m in self.terms for h, e in m if h == g), default=0)

    def coefficients_in(self, g: Hashable) -> list[Poly]:
        """Coefficient polynomials ``[c0, c1, ...]`` of ``self`` as univariate in ``g``."""
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            k = 0
            rest = m
            for idx, (h, e) in enumerate(m):
                if h == g:
                    k = e
                    rest = m[:idx] + m[idx + 1:]
                    break
            parts.setdefault(k, {})[rest] = c
        if not parts:
            return [Poly.zero()]
        return [Poly._raw(parts.get(k, {})) for k in range(max(parts) + 1)]

    def __iter__(self) -> Iterator[tuple[Monomial, Any]]:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: Poly) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.const(other)
        if len(other.terms) > len(self.terms):
            self, other = other, self
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Poly) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return Poly.const(other) - self

    def __mul__(self, other: Poly) -> Poly:
        if not isinstance(other, Poly):
            return self.scale(other)
        if not self.terms or not other.terms:
            return Poly.zero()
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c})

    def __rmul__(self, other) -> Poly:
        return self.scale(other)

    def scale(self, c) -> Poly:
        if not c:
            return Poly.zero()
        return Poly._raw({m: k * c for m, k in self.terms.items()})

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError('negative exponent')
        result = Poly.const(Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def map_coeffs(self, f: Callable[[Any], Any]) -> Poly:
        return Poly({m: f(c) for m, c in self.terms.items()})

    def rename(self, f: Callable[[Any], Any]) -> Poly:
        """Apply ``f`` to every generator; ``f`` must be injective on the generators."""
        out: dict = {}
        for m, c in self.terms.items():
            nm = tuple(sorted((f(g), e) for g, e in m))
            out[nm] = c
        return Poly._raw(out)

    def subs(self, mapping: Mapping[Hashable, Poly]) -> Poly:
        """Simultaneously substitute polynomials for generators."""
        if not mapping or not (self.variables() & mapping.keys()):
            return self
        powers: dict = {}

        def power(g, e):
            key = (g, e)
            if key not in powers:
                powers[key] = mapping[g] ** e
            return powers[key]

        result = Poly.zero()
        for m, c in self.terms.items():
            kept = []
            term = None
            for g, e in m:
                if g in mapping:
                    term = power(g, e) if term is None else term * power(g, e)
                else:
                    kept.append((g, e))
            piece = Poly._raw({tuple(kept): c})
            result = result + (piece if term is None else piece * term)
        return result

    def evaluate(self, values: Mapping[Hashable, Any], zero=Fraction(0)):
        total = zero
        for m, c in self.terms.items():
            v = c
            for g, e in m:
                v = v * values[g] ** e
            total = total + v
        return total

    # -- normalization helpers (rational coefficients) -------------------------

    def content(self) -> Fraction:
        """Positive rational ``c`` such that ``self / c`` has coprime integer coefficients."""
        if not self.terms:
            return Fraction(1)
        nums = 0
        dens = 1
        for c in self.terms.values():
            nums = gcd(nums, c.numerator)
            dens = lcm(dens, c.denominator)
        return Fraction(nums, dens)

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(Fraction(other)).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f'Poly({self.terms!r})'

    def sorted_terms(self, key: Callable[[Monomial], Any]) -> list[tuple[Monomial, Any]]:
        return sorted(self.terms.items(), key=lambda mc: key(mc[0]))


def deglex_key(rank: Callable[[Any], Any]) -> Callable[[Monomial], Any]:
    """Sort key putting the deglex-largest monomial first.

    ``rank`` maps a generator to its position; smaller rank means a larger
    generator (``z1 > z2 > ...``).
    """
    def key(m: Monomial):
        vec = sorted((rank(g), e) for g, e in m)
        # larger total degree first; then lexicographically larger exponent
        # vector first, which is lexicographically smaller (rank, -e) sequence
        return (-mono_degree(m), [(r, -e) for r, e in vec] + [(float('inf'), 0)])
    return key


def sum_polys(polys: Iterable[Poly]) -> Poly:
    out = Poly.zero()
    for p in polys:
        out = out + p
    return out
