"""Text rendering of terms and formulas, and canonical atom normal forms.

The printed syntax is the one accepted by :mod:`pcqe.parser`; printing
followed by parsing gives back the same tree.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Literal

from .numbers import GaussianRational
from .poly import Poly, deglex_key
from .terms import (
    Add, Conj, Const, ImagUnit, ImPart, Mul, Neg, Pow, RePart, Term, Var,
    ZERO, _sum_term, cart_pair, cart_poly_to_cnf_poly, cart_rank, cnf_rank,
    cnf_to_term, cart_to_term, poly_ctx, sort_vars)
from .formulas import (
    And, Atom, Bot, Exists, Forall, Formula, Iff, Implies, Not, Or, RealAtom,
    RelOp, Top, map_atoms)

NF = Literal['conjugate', 'cartesian']

_ADD, _NEG, _MUL, _POW, _ATOM = 1, 2, 3, 4, 5


def _const_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f'{q.numerator}/{q.denominator}'


def _term(t: Term, prec: int) -> str:
    match t:
        case Const(q):
            s = _const_text(q)
            return f'({s})' if q.denominator != 1 and prec >= _POW else s
        case ImagUnit():
            return 'I'
        case Var(name):
            return name
        case Add(a, Neg(b)):
            s = f'{_term(a, _ADD)} - {_term(b, _NEG)}'
            return f'({s})' if prec > _ADD else s
        case Add(a, b):
            s = f'{_term(a, _ADD)} + {_term(b, _NEG)}'
            return f'({s})' if prec > _ADD else s
        case Neg(a):
            s = f'-{_term(a, _NEG)}'
            return f'({s})' if prec > _NEG else s
        case Mul(a, b):
            s = f'{_term(a, _MUL)}*{_term(b, _POW)}'
            return f'({s})' if prec > _MUL else s
        case Pow(a, n):
            s = f'{_term(a, _ATOM)}^{n}'
            return f'({s})' if prec > _POW else s
        case RePart(a):
            return f'Re({_term(a, 0)})'
        case ImPart(a):
            return f'Im({_term(a, 0)})'
        case Conj(a):
            return f'conj({_term(a, 0)})'
    raise TypeError(f'not a term: {t!r}')


def print_term(t: Term) -> str:
    return _term(t, 0)


def plain_poly_to_term(p: Poly) -> Term:
    """Render a polynomial over plain variable names, deglex-largest first."""
    names = sort_vars(p.variables())
    index = {v: i for i, v in enumerate(names)}
    monos = []
    for m, c in p.sorted_terms(deglex_key(index.__getitem__)):
        factors = [Var(g) if e == 1 else Pow(Var(g), e) for g, e in m]
        factors.sort(key=lambda f: index[f.name if isinstance(f, Var) else f.base.name])
        monos.append((factors, GaussianRational.coerce(c)))
    return _sum_term(monos)


_REL_TEXT = {r: r.value for r in RelOp}

# formula precedence: iff < implies < or < and < not < atom
_IFF, _IMP, _OR, _AND, _NOT, _FATOM = 1, 2, 3, 4, 5, 6


def _formula(f: Formula, prec: int) -> str:
    match f:
        case Top():
            return 'T'
        case Bot():
            return 'F'
        case Atom(lhs, rhs, rel):
            return f'{print_term(lhs)} {_REL_TEXT[rel]} {print_term(rhs)}'
        case RealAtom(p, rel):
            return f'{print_term(plain_poly_to_term(p))} {_REL_TEXT[rel]} 0'
        case Not(a):
            return f'not {_formula(a, _NOT)}'
        case And(args) | Or(args):
            if not args:
                return 'T' if isinstance(f, And) else 'F'
            own = _AND if isinstance(f, And) else _OR
            word = ' and ' if isinstance(f, And) else ' or '
            s = word.join(_formula(a, own + 1) for a in args)
            return f'({s})' if prec > own or len(args) == 1 and prec > 0 else s
        case Implies(a, b):
            s = f'{_formula(a, _OR)} -> {_formula(b, _IMP)}'
            return f'({s})' if prec > _IMP else s
        case Iff(a, b):
            s = f'{_formula(a, _IMP)} <-> {_formula(b, _IMP)}'
            return f'({s})' if prec > _IFF else s
        case Exists(v, a) | Forall(v, a):
            word = 'exists' if isinstance(f, Exists) else 'forall'
            s = f'{word} {v} . {_formula(a, 0)}'
            return f'({s})' if prec > 0 else s
    raise TypeError(f'not a formula: {f!r}')


def print_formula(f: Formula, nf: NF | None = None) -> str:
    """Render ``f``; with ``nf`` given, atoms are first put in canonical form."""
    if nf is not None:
        f = canonicalize(f, nf)
    return _formula(f, 0)


# -- canonical atoms ------------------------------------------------------------

def _gauss_scale_to_integral(p: Poly) -> Fraction:
    """Positive rational ``s`` making ``p*s`` primitive with Gaussian-integer coefficients."""
    num = 0
    den = 1
    for _, c in p:
        c = GaussianRational.coerce(c)
        for q in (c.re, c.im):
            if q:
                num = gcd(num, q.numerator)
                den = lcm(den, q.denominator)
    return Fraction(den, num) if num else Fraction(1)


def _leading_coeff(p: Poly, rank) -> GaussianRational:
    return GaussianRational.coerce(p.sorted_terms(deglex_key(rank))[0][1])


def atom_difference(a: Atom | RealAtom) -> tuple[Poly, Poly]:
    """Cartesian pair of ``lhs - rhs``."""
    if isinstance(a, RealAtom):
        return a.poly, Poly.zero()
    l1, l2 = cart_pair(a.lhs)
    r1, r2 = cart_pair(a.rhs)
    return l1 - r1, l2 - r2


def canonical_atom(a: Atom | RealAtom, nf: NF = 'conjugate') -> Atom:
    """``lhs - rhs rel 0`` with the left side in normal form ``nf``.

    Equations and disequations are divided by their leading coefficient;
    ordering atoms are scaled by a positive rational to primitive integer
    coefficients.  Ordering atoms must be real on both sides.
    """
    p1, p2 = atom_difference(a)
    if a.rel.is_ordering and not p2.is_zero():
        raise ValueError(f'ordering atom is not real: {a}')
    ctx = poly_ctx(p1, p2)
    rel = a.rel
    if nf == 'conjugate':
        p = cart_poly_to_cnf_poly(p1, p2)
        rank = cnf_rank(ctx)
        if p.is_zero():
            pass
        elif rel.is_ordering:
            p = p.scale(GaussianRational(_gauss_scale_to_integral(p)))
        else:
            p = p.scale(1 / _leading_coeff(p, rank))
        return Atom(cnf_to_term(p, ctx), ZERO, rel)
    if nf != 'cartesian':
        raise ValueError(f'unknown normal form {nf!r}')
    combined = p1.map_coeffs(GaussianRational) + p2.map_coeffs(lambda c: GaussianRational(0, c))
    if not combined.is_zero():
        if rel.is_ordering:
            combined = combined.scale(GaussianRational(_gauss_scale_to_integral(combined)))
        else:
            combined = combined.scale(1 / _leading_coeff(combined, cart_rank(ctx)))
    q1 = Poly({m: c.re for m, c in combined})
    q2 = Poly({m: c.im for m, c in combined})
    return Atom(cart_to_term(q1, q2, ctx), ZERO, rel)


def canonicalize(f: Formula, nf: NF = 'conjugate') -> Formula:
    return map_atoms(f, lambda a: canonical_atom(a, nf))
