"""Terms over Q[i] with Re, Im and conjugation, and their unique normal forms.

Two normal forms are provided.  The conjugate normal form is a polynomial in
``z1..zn, conj(z1)..conj(zn)`` over Q[i]; the Cartesian normal form is a pair
``(p1, p2)`` of rational polynomials in ``Re(z1)..Re(zn), Im(z1)..Im(zn)``
standing for ``p1 + I*p2``.  Both are computed bottom-up by polynomial
arithmetic, and both are unique: equal data iff equivalent terms.

Cartesian generators are the strings ``z__re`` and ``z__im``.  These are also
the real variables introduced by purification, so a Cartesian polynomial is
already a polynomial of the real quantifier elimination.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .numbers import GaussianRational, I as I_VALUE
from .poly import Poly, deglex_key

RE_SUFFIX = '__re'
IM_SUFFIX = '__im'

G_ONE = GaussianRational(1)
G_HALF = GaussianRational(Fraction(1, 2))
G_MINUS_HALF_I = GaussianRational(0, Fraction(-1, 2))


class ContextError(ValueError):
    """A variable is missing from the context or the assignment."""


def re_name(z: str) -> str:
    return z + RE_SUFFIX


def im_name(z: str) -> str:
    return z + IM_SUFFIX


def split_real_name(v: str) -> tuple[str, str] | None:
    """``'z__re' -> ('z', 're')``; ``None`` for names without a reserved suffix."""
    if v.endswith(RE_SUFFIX):
        return v[:-len(RE_SUFFIX)], 're'
    if v.endswith(IM_SUFFIX):
        return v[:-len(IM_SUFFIX)], 'im'
    return None


def var_key(name: str):
    """Natural order on variable names, so that ``v2`` precedes ``v10``."""
    return [(0, int(part), '') if part.isdigit() else (1, 0, part)
            for part in re.split(r'(\d+)', name) if part]


def sort_vars(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=var_key))


# -- term AST ------------------------------------------------------------------

class Term:
    __slots__ = ()

    def __add__(self, other: Term) -> Term:
        return Add(self, _as_term(other))

    def __radd__(self, other) -> Term:
        return Add(_as_term(other), self)

    def __sub__(self, other: Term) -> Term:
        return Add(self, Neg(_as_term(other)))

    def __rsub__(self, other) -> Term:
        return Add(_as_term(other), Neg(self))

    def __mul__(self, other: Term) -> Term:
        return Mul(self, _as_term(other))

    def __rmul__(self, other) -> Term:
        return Mul(_as_term(other), self)

    def __neg__(self) -> Term:
        return Neg(self)

    def __pow__(self, n: int) -> Term:
        return Pow(self, n)

    def __str__(self):
        from .printer import print_term
        return print_term(self)


def _as_term(x) -> Term:
    if isinstance(x, Term):
        return x
    if isinstance(x, (int, Fraction)):
        q = Fraction(x)
        return Const(q) if q >= 0 else Neg(Const(-q))
    raise TypeError(f'cannot use {x!r} as a term')


@dataclass(frozen=True, slots=True)
class Const(Term):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, 'value', Fraction(self.value))
        if self.value < 0:
            raise ValueError('constants of the language are non-negative')


@dataclass(frozen=True, slots=True)
class ImagUnit(Term):
    pass


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Neg(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Pow(Term):
    """``base^exp``, shorthand for ``exp``-fold multiplication."""
    base: Term
    exp: int


@dataclass(frozen=True, slots=True)
class RePart(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class ImPart(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class Conj(Term):
    arg: Term


I = ImagUnit()
ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def term_vars(t: Term) -> set[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        match s:
            case Var(name):
                out.add(name)
            case Add(a, b) | Mul(a, b):
                stack.extend((a, b))
            case Neg(a) | RePart(a) | ImPart(a) | Conj(a) | Pow(a, _):
                stack.append(a)
    return out


# -- conjugate normal form ---------------------------------------------------

def _cnf_conj(p: Poly) -> Poly:
    out = {}
    for m, c in p:
        nm = tuple(sorted(((name, 1 - flag), e) for (name, flag), e in m))
        out[nm] = c.conjugate()
    return Poly(out)


@lru_cache(maxsize=1 << 14)
def _cnf_poly(t: Term) -> Poly:
    match t:
        case Const(q):
            return Poly.const(GaussianRational(q))
        case ImagUnit():
            return Poly.const(I_VALUE)
        case Var(name):
            return Poly.var((name, 0), G_ONE)
        case Add(a, b):
            return _cnf_poly(a) + _cnf_poly(b)
        case Neg(a):
            return -_cnf_poly(a)
        case Mul(a, b):
            return _cnf_poly(a) * _cnf_poly(b)
        case Pow(a, n):
            return _cnf_poly(a) ** n if n else Poly.const(G_ONE)
        case Conj(a):
            return _cnf_conj(_cnf_poly(a))
        case RePart(a):
            p = _cnf_poly(a)
            return (p + _cnf_conj(p)).scale(G_HALF)
        case ImPart(a):
            p = _cnf_poly(a)
            return (p - _cnf_conj(p)).scale(G_MINUS_HALF_I)
    raise TypeError(f'not a term: {t!r}')


def _check_ctx(t: Term, ctx: Sequence[str] | None) -> tuple[str, ...]:
    names = term_vars(t)
    if ctx is None:
        return sort_vars(names)
    missing = names - set(ctx)
    if missing:
        raise ContextError(f'variables {sorted(missing)} not in context {list(ctx)}')
    return tuple(ctx)


def cnf_rank(ctx: Sequence[str]):
    index = {z: i for i, z in enumerate(ctx)}
    n = len(ctx)
    return lambda g: index[g[0]] + n * g[1]


def cart_rank(ctx: Sequence[str]):
    index = {z: i for i, z in enumerate(ctx)}
    n = len(ctx)

    def rank(g: str):
        z, part = split_real_name(g)
        return index[z] + (n if part == 'im' else 0)
    return rank


@dataclass(frozen=True)
class PolyCNF:
    """Conjugate normal form: a polynomial in ``z`` and ``conj(z)`` over Q[i]."""
    ctx: tuple[str, ...]
    poly: Poly

    @property
    def coeffs(self) -> dict[tuple[int, ...], GaussianRational]:
        """Exponent vectors over ``(z1..zn, conj(z1)..conj(zn))`` in deglex order."""
        n = len(self.ctx)
        rank = cnf_rank(self.ctx)
        out = {}
        for m, c in self.poly.sorted_terms(deglex_key(rank)):
            vec = [0] * (2 * n)
            for g, e in m:
                vec[rank(g)] = e
            out[tuple(vec)] = c
        return out

    def conjugate(self) -> PolyCNF:
        return PolyCNF(self.ctx, _cnf_conj(self.poly))

    def __add__(self, other: PolyCNF) -> PolyCNF:
        return PolyCNF(self.ctx, self.poly + other.poly)

    def __mul__(self, other: PolyCNF) -> PolyCNF:
        return PolyCNF(self.ctx, self.poly * other.poly)

    def __str__(self):
        from .printer import print_term
        return print_term(cnf_to_term(self.poly, self.ctx))


@dataclass(frozen=True)
class PolyCart:
    """Cartesian normal form ``p1 + I*p2`` with ``p1, p2`` in Q[Re(z), Im(z)]."""
    ctx: tuple[str, ...]
    p1: Poly
    p2: Poly

    def __str__(self):
        from .printer import print_term
        return print_term(cart_to_term(self.p1, self.p2, self.ctx))


def to_conjugate_nf(t: Term, ctx: Sequence[str] | None = None) -> PolyCNF:
    ctx = _check_ctx(t, ctx)
    return PolyCNF(ctx, _cnf_poly(t))


# -- Cartesian normal form ---------------------------------------------------

@lru_cache(maxsize=1 << 14)
def cart_pair(t: Term) -> tuple[Poly, Poly]:
    """Cartesian parts of ``t`` as rational polynomials in ``z__re``, ``z__im``."""
    match t:
        case Const(q):
            return Poly.const(q), Poly.zero()
        case ImagUnit():
            return Poly.zero(), Poly.const(Fraction(1))
        case Var(name):
            return Poly.var(re_name(name)), Poly.var(im_name(name))
        case Add(a, b):
            a1, a2 = cart_pair(a)
            b1, b2 = cart_pair(b)
            return a1 + b1, a2 + b2
        case Neg(a):
            a1, a2 = cart_pair(a)
            return -a1, -a2
        case Mul(a, b):
            a1, a2 = cart_pair(a)
            b1, b2 = cart_pair(b)
            return a1 * b1 - a2 * b2, a1 * b2 + a2 * b1
        case Pow(a, n):
            r1, r2 = Poly.const(Fraction(1)), Poly.zero()
            a1, a2 = cart_pair(a)
            for _ in range(n):
                r1, r2 = r1 * a1 - r2 * a2, r1 * a2 + r2 * a1
            return r1, r2
        case RePart(a):
            return cart_pair(a)[0], Poly.zero()
        case ImPart(a):
            return cart_pair(a)[1], Poly.zero()
        case Conj(a):
            a1, a2 = cart_pair(a)
            return a1, -a2
    raise TypeError(f'not a term: {t!r}')


def to_cartesian_nf(t: Term, ctx: Sequence[str] | None = None) -> PolyCart:
    ctx = _check_ctx(t, ctx)
    p1, p2 = cart_pair(t)
    return PolyCart(ctx, p1, p2)


def _gauss_poly_split(p: Poly) -> tuple[Poly, Poly]:
    return (Poly({m: c.re for m, c in p}), Poly({m: c.im for m, c in p}))


def cnf_to_cart(p: PolyCNF) -> PolyCart:
    mapping = {}
    for z in p.ctx:
        re_, im_ = Poly.var(re_name(z), G_ONE), Poly.var(im_name(z), G_ONE)
        mapping[(z, 0)] = re_ + im_.scale(I_VALUE)
        mapping[(z, 1)] = re_ - im_.scale(I_VALUE)
    p1, p2 = _gauss_poly_split(p.poly.subs(mapping))
    return PolyCart(p.ctx, p1, p2)


def cart_poly_to_cnf_poly(p1: Poly, p2: Poly) -> Poly:
    """``p1 + I*p2`` rewritten in ``z``, ``conj(z)``."""
    combined = p1.map_coeffs(GaussianRational) + p2.map_coeffs(lambda c: GaussianRational(0, c))
    mapping = {}
    for g in combined.variables():
        z, part = split_real_name(g)
        zp, zc = Poly.var((z, 0), G_ONE), Poly.var((z, 1), G_ONE)
        if part == 're':
            mapping[g] = (zp + zc).scale(G_HALF)
        else:
            mapping[g] = (zp - zc).scale(G_MINUS_HALF_I)
    return combined.subs(mapping)


def cart_to_cnf(p: PolyCart) -> PolyCNF:
    return PolyCNF(p.ctx, cart_poly_to_cnf_poly(p.p1, p.p2))


def is_real_term(t: Term) -> bool:
    return cart_pair(t)[1].is_zero()


def term_equiv(t1: Term, t2: Term) -> bool:
    return _cnf_poly(t1) == _cnf_poly(t2)


# -- evaluation --------------------------------------------------------------

def eval_term(t: Term, sigma: Mapping[str, GaussianRational]) -> GaussianRational:
    match t:
        case Const(q):
            return GaussianRational(q)
        case ImagUnit():
            return I_VALUE
        case Var(name):
            try:
                return GaussianRational.coerce(sigma[name])
            except KeyError:
                raise ContextError(f'no value for variable {name}') from None
        case Add(a, b):
            return eval_term(a, sigma) + eval_term(b, sigma)
        case Neg(a):
            return -eval_term(a, sigma)
        case Mul(a, b):
            return eval_term(a, sigma) * eval_term(b, sigma)
        case Pow(a, n):
            return eval_term(a, sigma) ** n
        case RePart(a):
            return GaussianRational(eval_term(a, sigma).re)
        case ImPart(a):
            return GaussianRational(eval_term(a, sigma).im)
        case Conj(a):
            return eval_term(a, sigma).conjugate()
    raise TypeError(f'not a term: {t!r}')


def real_assignment(sigma: Mapping[str, GaussianRational]) -> dict[str, Fraction]:
    """Split a complex assignment into the ``z__re``/``z__im`` real assignment."""
    out = {}
    for z, c in sigma.items():
        c = GaussianRational.coerce(c)
        out[re_name(z)] = c.re
        out[im_name(z)] = c.im
    return out


# -- from polynomials back to terms ------------------------------------------

def _coeff_term(c: GaussianRational) -> tuple[bool, Term | None]:
    """Split a coefficient into (negated, magnitude term); ``None`` means 1."""
    negative = c.re < 0 or (c.re == 0 and c.im < 0)
    if negative:
        c = -c
    if c.im == 0:
        return negative, None if c.re == 1 else Const(c.re)
    if c.re == 0:
        return negative, I if c.im == 1 else Mul(Const(c.im), I)
    im_part: Term = I if abs(c.im) == 1 else Mul(Const(abs(c.im)), I)
    whole = Add(Const(c.re), im_part) if c.im > 0 else Add(Const(c.re), Neg(im_part))
    return negative, whole


def _sum_term(monos: list[tuple[list[Term], GaussianRational]]) -> Term:
    if not monos:
        return ZERO
    # avoid a leading unary minus when some summand is positive
    first_pos = next((k for k, (_, c) in enumerate(monos) if not _coeff_term(c)[0]), 0)
    monos = [monos[first_pos]] + monos[:first_pos] + monos[first_pos + 1:]
    result: Term | None = None
    for factors, c in monos:
        negative, coeff = _coeff_term(c)
        parts = ([coeff] if coeff is not None else []) + factors
        if not parts:
            mono: Term = ONE
        else:
            mono = parts[0]
            for f in parts[1:]:
                mono = Mul(mono, f)
        if result is None:
            result = Neg(mono) if negative else mono
        else:
            result = Add(result, Neg(mono)) if negative else Add(result, mono)
    return result


def _power(base: Term, e: int) -> Term:
    return base if e == 1 else Pow(base, e)


def cnf_to_term(p: Poly, ctx: Sequence[str]) -> Term:
    """Render a conjugate-normal-form polynomial as a term, deglex-largest first."""
    rank = cnf_rank(ctx)
    monos = []
    for m, c in p.sorted_terms(deglex_key(rank)):
        factors = [_power(Conj(Var(z)) if flag else Var(z), e)
                   for (z, flag), e in sorted(m, key=lambda ge: rank(ge[0]))]
        monos.append((factors, GaussianRational.coerce(c)))
    return _sum_term(monos)


def real_poly_to_term(p: Poly, ctx: Sequence[str]) -> Term:
    """Render a polynomial in ``z__re``/``z__im`` using ``Re(z)``/``Im(z)``."""
    rank = cart_rank(ctx)
    monos = []
    for m, c in p.sorted_terms(deglex_key(rank)):
        factors = []
        for g, e in sorted(m, key=lambda ge: rank(ge[0])):
            z, part = split_real_name(g)
            gen = RePart(Var(z)) if part == 're' else ImPart(Var(z))
            factors.append(_power(gen, e))
        monos.append((factors, GaussianRational(c)))
    return _sum_term(monos)


def cart_to_term(p1: Poly, p2: Poly, ctx: Sequence[str]) -> Term:
    if p2.is_zero():
        return real_poly_to_term(p1, ctx)
    imag = Mul(I, real_poly_to_term(p2, ctx))
    if p1.is_zero():
        return imag
    return Add(real_poly_to_term(p1, ctx), imag)


def poly_ctx(*polys: Poly) -> tuple[str, ...]:
    """Complex variables underlying polynomials in either normal form."""
    names = set()
    for g in set().union(*(p.variables() for p in polys)):
        if isinstance(g, tuple):
            names.add(g[0])
        else:
            names.add(split_real_name(g)[0])
    return sort_vars(names)
