"""Seeded random generators for terms, formulas and assignments used by the tests."""
from __future__ import annotations

import random
from fractions import Fraction

from pcqe.formulas import And, Atom, Not, Or, RealAtom, RelOp
from pcqe.numbers import GaussianRational
from pcqe.poly import Poly
from pcqe.terms import (
    Add, Conj, Const, I, ImPart, Mul, Neg, Pow, RePart, Term, Var)

VARS = ('z', 'w', 'u')
HALF = Const(Fraction(1, 2))


def rational(rng: random.Random, nonneg: bool = False) -> Fraction:
    q = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
    return abs(q) if nonneg else q


def gaussian(rng: random.Random) -> GaussianRational:
    return GaussianRational(rational(rng), rational(rng))


def assignment(rng: random.Random, names=VARS) -> dict:
    return {v: gaussian(rng) for v in names}


def term(rng: random.Random, depth: int = 3, names=VARS) -> Term:
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.5:
            return Var(rng.choice(names))
        if r < 0.75:
            return Const(rational(rng, nonneg=True))
        return I
    k = rng.randrange(7)
    sub = lambda: term(rng, depth - 1, names)
    if k == 0:
        return Add(sub(), sub())
    if k == 1:
        return Mul(sub(), sub())
    if k == 2:
        return Neg(sub())
    if k == 3:
        return Pow(sub(), rng.randint(0, 3))
    if k == 4:
        return RePart(sub())
    if k == 5:
        return ImPart(sub())
    return Conj(sub())


def _rewrite_here(t: Term, rng: random.Random) -> Term:
    """One semantics-preserving rewrite at the root of ``t`` (or ``t`` itself)."""
    options = []
    match t:
        case Add(a, b):
            options += [Add(b, a)]
            if isinstance(a, Add):
                options.append(Add(a.left, Add(a.right, b)))
        case Mul(a, b):
            options += [Mul(b, a)]
            if isinstance(b, Add):
                options.append(Add(Mul(a, b.left), Mul(a, b.right)))
            if isinstance(a, Mul):
                options.append(Mul(a.left, Mul(a.right, b)))
        case Pow(a, n) if n >= 1:
            options.append(Mul(Pow(a, n - 1), a))
        case RePart(a):
            options.append(Mul(HALF, Add(a, Conj(a))))
        case ImPart(a):
            options.append(Mul(Neg(Mul(HALF, I)), Add(a, Neg(Conj(a)))))
        case Conj(Add(a, b)):
            options.append(Add(Conj(a), Conj(b)))
        case Conj(Mul(a, b)):
            options.append(Mul(Conj(a), Conj(b)))
        case Conj(Neg(a)):
            options.append(Neg(Conj(a)))
        case Conj(Conj(a)):
            options.append(a)
        case Conj(a) if a == I:
            options.append(Neg(I))
        case Neg(Neg(a)):
            options.append(a)
    options += [Conj(Conj(t)), Add(t, Const(Fraction(0))), Mul(Const(Fraction(1)), t),
                Neg(Neg(t)), Add(RePart(t), Mul(I, ImPart(t)))]
    return rng.choice(options)


def rewrite(t: Term, rng: random.Random, steps: int = 3) -> Term:
    """Apply ``steps`` random equivalence-preserving rewrites at random positions."""
    for _ in range(steps):
        t = _rewrite_at(t, rng)
    return t


def _rewrite_at(t: Term, rng: random.Random) -> Term:
    children = _children(t)
    if not children or rng.random() < 0.4:
        return _rewrite_here(t, rng)
    k = rng.randrange(len(children))
    new = list(children)
    new[k] = _rewrite_at(children[k], rng)
    return _rebuild(t, new)


def _children(t: Term):
    match t:
        case Add(a, b) | Mul(a, b):
            return [a, b]
        case Neg(a) | RePart(a) | ImPart(a) | Conj(a) | Pow(a, _):
            return [a]
    return []


def _rebuild(t: Term, kids):
    match t:
        case Add():
            return Add(*kids)
        case Mul():
            return Mul(*kids)
        case Pow(_, n):
            return Pow(kids[0], n)
    return type(t)(kids[0])


RELS = list(RelOp)


def complex_qf_formula(rng: random.Random, depth: int = 2, names=VARS):
    if depth == 0 or rng.random() < 0.3:
        rel = rng.choice(RELS)
        return Atom(term(rng, 2, names), term(rng, 2, names), rel)
    k = rng.randrange(3)
    if k == 0:
        return Not(complex_qf_formula(rng, depth - 1, names))
    cls = And if k == 1 else Or
    return cls(tuple(complex_qf_formula(rng, depth - 1, names) for _ in range(rng.randint(2, 3))))


def real_term_atom(rng: random.Random, names=VARS):
    """Atom whose two sides are real terms (so ordering is meaningful)."""
    def real_term():
        t = term(rng, 2, names)
        return rng.choice([RePart(t), ImPart(t), Mul(t, Conj(t))])
    return Atom(real_term(), real_term(), rng.choice(RELS))


def real_poly(rng: random.Random, variables, max_deg: int = 2, terms: int = 3) -> Poly:
    p = Poly.zero()
    for _ in range(rng.randint(1, terms)):
        mono = Poly.const(Fraction(rng.randint(-3, 3)))
        for v in variables:
            e = rng.randint(0, max_deg)
            if e:
                mono = mono * Poly.var(v) ** e
        p = p + mono
    return p


def real_qf_formula(rng: random.Random, variables, depth: int = 2, max_deg: int = 2):
    """Random quantifier-free real formula whose variables have degree <= max_deg per atom."""
    if depth == 0 or rng.random() < 0.35:
        p = real_poly(rng, variables, 1, 3)
        # keep per-variable degree bounded by max_deg
        if max_deg >= 2 and rng.random() < 0.5:
            p = p * real_poly(rng, [rng.choice(list(variables))], 1, 2)
        return RealAtom(p, rng.choice(RELS))
    cls = And if rng.random() < 0.5 else Or
    return cls(tuple(real_qf_formula(rng, variables, depth - 1, max_deg)
                     for _ in range(rng.randint(2, 3))))


def real_atom_term_pair(rng: random.Random, names=VARS):
    """Ordering atom between two real terms."""
    return real_term_atom(rng, names)
