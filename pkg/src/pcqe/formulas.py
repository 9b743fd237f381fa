"""First-order formulas: atoms, connectives, quantifiers, semantics and the
real normal form.

Two kinds of atoms share the connective layer.  :class:`Atom` compares two
terms of the complex language; :class:`RealAtom` is ``poly rel 0`` for a
rational polynomial over real variables (for instance ``z__re``).  Real
normal forms, purified formulas and everything inside the real elimination
use :class:`RealAtom`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .numbers import GaussianRational
from .poly import Poly
from .terms import (
    ContextError, Term, cart_pair, eval_term, real_assignment, sort_vars,
    split_real_name, term_vars, im_name)


class RealnessError(ValueError):
    """An ordering atom compares a term that is not real."""


class RelOp(Enum):
    EQ = '=='
    NE = '!='
    LE = '<='
    LT = '<'
    GE = '>='
    GT = '>'

    @property
    def signs(self) -> frozenset[int]:
        """Signs of ``lhs - rhs`` for which the relation holds."""
        return _SIGNS[self]

    @classmethod
    def from_signs(cls, signs: Iterable[int]) -> RelOp | None:
        """Relation holding exactly on ``signs``; ``None`` for the empty or full set."""
        return _FROM_SIGNS.get(frozenset(signs))

    def negate(self) -> RelOp:
        return RelOp.from_signs({-1, 0, 1} - self.signs)

    def converse(self) -> RelOp:
        """Relation after swapping sides (or negating the polynomial)."""
        return RelOp.from_signs({-s for s in self.signs})

    def holds(self, sign: int) -> bool:
        return sign in self.signs

    @property
    def is_ordering(self) -> bool:
        return self not in (RelOp.EQ, RelOp.NE)


_SIGNS = {
    RelOp.EQ: frozenset({0}), RelOp.NE: frozenset({-1, 1}),
    RelOp.LT: frozenset({-1}), RelOp.LE: frozenset({-1, 0}),
    RelOp.GT: frozenset({1}), RelOp.GE: frozenset({0, 1})}
_FROM_SIGNS = {v: k for k, v in _SIGNS.items()}


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class Formula:
    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return And((self, other))

    def __or__(self, other: Formula) -> Formula:
        return Or((self, other))

    def __invert__(self) -> Formula:
        return Not(self)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def __str__(self):
        from .printer import print_formula
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Bot(Formula):
    pass


TOP = Top()
BOT = Bot()


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    lhs: Term
    rhs: Term
    rel: RelOp


@dataclass(frozen=True, slots=True)
class RealAtom(Formula):
    """``poly rel 0`` over real variables."""
    poly: Poly
    rel: RelOp


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, 'args', tuple(self.args))


@dataclass(frozen=True, slots=True)
class Or(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, 'args', tuple(self.args))


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Exists(Formula):
    var: str
    arg: Formula


@dataclass(frozen=True, slots=True)
class Forall(Formula):
    var: str
    arg: Formula


Quantifier = (Exists, Forall)
AtomTypes = (Atom, RealAtom)


def dual(q: type) -> type:
    return Forall if q is Exists else Exists


def conj(args: Iterable[Formula]) -> Formula:
    args = tuple(args)
    return args[0] if len(args) == 1 else And(args)


def disj(args: Iterable[Formula]) -> Formula:
    args = tuple(args)
    return args[0] if len(args) == 1 else Or(args)


# -- traversal -------------------------------------------------------------------

def children(f: Formula) -> tuple[Formula, ...]:
    match f:
        case And(args) | Or(args):
            return args
        case Not(a) | Exists(_, a) | Forall(_, a):
            return (a,)
        case Implies(a, b) | Iff(a, b):
            return (a, b)
    return ()


def atoms(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, AtomTypes):
            yield g
        else:
            stack.extend(reversed(children(g)))


def map_atoms(f: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    match f:
        case Atom() | RealAtom():
            return fn(f)
        case Top() | Bot():
            return f
        case Not(a):
            return Not(map_atoms(a, fn))
        case And(args):
            return And(tuple(map_atoms(a, fn) for a in args))
        case Or(args):
            return Or(tuple(map_atoms(a, fn) for a in args))
        case Implies(a, b):
            return Implies(map_atoms(a, fn), map_atoms(b, fn))
        case Iff(a, b):
            return Iff(map_atoms(a, fn), map_atoms(b, fn))
        case Exists(v, a):
            return Exists(v, map_atoms(a, fn))
        case Forall(v, a):
            return Forall(v, map_atoms(a, fn))
    raise TypeError(f'not a formula: {f!r}')


def atom_vars(a: Formula) -> set[str]:
    if isinstance(a, Atom):
        return term_vars(a.lhs) | term_vars(a.rhs)
    return set(a.poly.variables())


def all_vars(f: Formula) -> set[str]:
    out: set[str] = set()
    for a in atoms(f):
        out |= atom_vars(a)
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Quantifier):
            out.add(g.var)
        stack.extend(children(g))
    return out


def _free(f: Formula) -> set[str]:
    match f:
        case Atom() | RealAtom():
            return atom_vars(f)
        case Exists(v, a) | Forall(v, a):
            return _free(a) - {v}
    out: set[str] = set()
    for c in children(f):
        out |= _free(c)
    return out


def free_vars(f: Formula) -> tuple[str, ...]:
    return sort_vars(_free(f))


def bound_vars(f: Formula) -> list[str]:
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Quantifier):
            out.append(g.var)
        stack.extend(children(g))
    return out


def is_quantifier_free(f: Formula) -> bool:
    return not bound_vars(f)


def is_prenex(f: Formula) -> bool:
    while isinstance(f, Quantifier):
        f = f.arg
    return is_quantifier_free(f)


def split_prefix(f: Formula) -> tuple[list[tuple[type, str]], Formula]:
    prefix = []
    while isinstance(f, Quantifier):
        prefix.append((type(f), f.var))
        f = f.arg
    return prefix, f


def add_prefix(prefix: Sequence[tuple[type, str]], matrix: Formula) -> Formula:
    for q, v in reversed(prefix):
        matrix = q(v, matrix)
    return matrix


def count_quantifier_alternations(f: Formula) -> int:
    prefix, _ = split_prefix(f)
    return sum(1 for (a, _), (b, _) in zip(prefix, prefix[1:]) if a is not b)


# -- prenex normal form ------------------------------------------------------------

class _Fresh:
    def __init__(self, used: set[str]):
        self.used = set(used)
        self.counter = itertools.count(1)

    def __call__(self, base: str) -> str:
        while True:
            name = f'{base}_{next(self.counter)}'
            if name not in self.used:
                self.used.add(name)
                return name


def rename_free(f: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of ``old`` to ``new`` in complex-language formulas."""
    from .terms import Var, Add, Neg, Mul, Pow, RePart, ImPart, Conj

    def rt(t: Term) -> Term:
        match t:
            case Var(name):
                return Var(new) if name == old else t
            case Add(a, b):
                return Add(rt(a), rt(b))
            case Mul(a, b):
                return Mul(rt(a), rt(b))
            case Neg(a):
                return Neg(rt(a))
            case Pow(a, n):
                return Pow(rt(a), n)
            case RePart(a):
                return RePart(rt(a))
            case ImPart(a):
                return ImPart(rt(a))
            case Conj(a):
                return Conj(rt(a))
        return t

    def go(g: Formula) -> Formula:
        match g:
            case Atom(l, r, rel):
                return Atom(rt(l), rt(r), rel)
            case RealAtom(p, rel):
                return RealAtom(p.rename(lambda v: new if v == old else v), rel)
            case Exists(v, a) | Forall(v, a):
                return g if v == old else type(g)(v, go(a))
            case Top() | Bot():
                return g
            case Not(a):
                return Not(go(a))
            case And(args):
                return And(tuple(go(a) for a in args))
            case Or(args):
                return Or(tuple(go(a) for a in args))
            case Implies(a, b):
                return Implies(go(a), go(b))
            case Iff(a, b):
                return Iff(go(a), go(b))
        raise TypeError(g)
    return go(f)


def prenexify(f: Formula) -> Formula:
    """Move all quantifiers outermost, renaming bound variables on capture."""
    if is_prenex(f):
        return f
    fresh = _Fresh(all_vars(f))
    prefix, matrix = _pnf(f, fresh, set())
    return add_prefix(prefix, matrix)


def _pnf(f: Formula, fresh: _Fresh, taken: set[str]):
    """Return ``(prefix, matrix)``; ``taken`` holds names that bound variables must avoid."""
    match f:
        case Exists(v, a) | Forall(v, a):
            if v in taken:
                new = fresh(v)
                a = rename_free(a, v, new)
                v = new
            prefix, m = _pnf(a, fresh, taken | {v})
            return [(type(f), v)] + prefix, m
        case Not(a):
            prefix, m = _pnf(a, fresh, taken)
            return [(dual(q), v) for q, v in prefix], Not(m)
        case And(args) | Or(args):
            prefix: list = []
            mats = []
            others_free = [_free(a) for a in args]
            for i, a in enumerate(args):
                avoid = set(taken).union(*(others_free[:i] + others_free[i + 1:]))
                avoid |= {v for _, v in prefix}
                p, m = _pnf(a, fresh, avoid)
                prefix += p
                mats.append(m)
            return prefix, type(f)(tuple(mats))
        case Implies(a, b):
            pa, ma = _pnf(a, fresh, taken | _free(b))
            pb, mb = _pnf(b, fresh, taken | _free(a) | {v for _, v in pa})
            return [(dual(q), v) for q, v in pa] + pb, Implies(ma, mb)
        case Iff(a, b):
            if is_quantifier_free(a) and is_quantifier_free(b):
                return [], f
            return _pnf(And((Implies(a, b), Implies(b, a))), fresh, taken)
    return [], f


# -- negation normal form --------------------------------------------------------

def expand_connectives(f: Formula) -> Formula:
    """Rewrite ``->`` and ``<->`` into not/and/or."""
    match f:
        case Implies(a, b):
            return Or((Not(expand_connectives(a)), expand_connectives(b)))
        case Iff(a, b):
            a, b = expand_connectives(a), expand_connectives(b)
            return And((Or((Not(a), b)), Or((a, Not(b)))))
        case Not(a):
            return Not(expand_connectives(a))
        case And(args) | Or(args):
            return type(f)(tuple(expand_connectives(a) for a in args))
        case Exists(v, a) | Forall(v, a):
            return type(f)(v, expand_connectives(a))
    return f


def negate_atom(a: Formula) -> Formula:
    if isinstance(a, RealAtom):
        return RealAtom(a.poly, a.rel.negate())
    if a.rel in (RelOp.EQ, RelOp.NE):
        return Atom(a.lhs, a.rhs, a.rel.negate())
    # ordering atoms over non-real terms are not complementary
    return Not(a)


def nnf(f: Formula, negate: bool = False) -> Formula:
    match f:
        case Top():
            return BOT if negate else TOP
        case Bot():
            return TOP if negate else BOT
        case Atom() | RealAtom():
            return negate_atom(f) if negate else f
        case Not(a):
            return nnf(a, not negate)
        case And(args):
            parts = tuple(nnf(a, negate) for a in args)
            return Or(parts) if negate else And(parts)
        case Or(args):
            parts = tuple(nnf(a, negate) for a in args)
            return And(parts) if negate else Or(parts)
        case Implies() | Iff():
            return nnf(expand_connectives(f), negate)
        case Exists(v, a):
            return Forall(v, nnf(a, True)) if negate else Exists(v, nnf(a))
        case Forall(v, a):
            return Exists(v, nnf(a, True)) if negate else Forall(v, nnf(a))
    raise TypeError(f'not a formula: {f!r}')


# -- semantics ----------------------------------------------------------------------

def eval_real_atom(a: RealAtom, values: Mapping[str, Fraction]) -> bool:
    try:
        v = a.poly.evaluate(values)
    except KeyError as exc:
        raise ContextError(f'no value for variable {exc.args[0]}') from None
    return a.rel.holds(_sign(v))


def _eval_atom(a: Atom, sigma: Mapping[str, GaussianRational]) -> bool:
    if a.rel.is_ordering:
        if not (cart_pair(a.lhs)[1].is_zero() and cart_pair(a.rhs)[1].is_zero()):
            return False
        d = eval_term(a.lhs, sigma) - eval_term(a.rhs, sigma)
        return a.rel.holds(_sign(d.re))
    equal = eval_term(a.lhs, sigma) == eval_term(a.rhs, sigma)
    return equal if a.rel is RelOp.EQ else not equal


def eval_qf(f: Formula, sigma: Mapping[str, GaussianRational]) -> bool:
    """Truth value of a quantifier-free formula under a complex assignment.

    :class:`RealAtom` nodes over ``z__re``/``z__im`` read the parts of
    ``sigma[z]``.
    """
    real = None

    def go(g: Formula) -> bool:
        nonlocal real
        match g:
            case Top():
                return True
            case Bot():
                return False
            case Atom():
                return _eval_atom(g, sigma)
            case RealAtom():
                if real is None:
                    real = real_assignment(sigma)
                return eval_real_atom(g, real)
            case Not(a):
                return not go(a)
            case And(args):
                return all(go(a) for a in args)
            case Or(args):
                return any(go(a) for a in args)
            case Implies(a, b):
                return (not go(a)) or go(b)
            case Iff(a, b):
                return go(a) == go(b)
            case Exists() | Forall():
                raise ValueError('eval_qf needs a quantifier-free formula')
        raise TypeError(f'not a formula: {g!r}')
    return go(f)


def eval_real(f: Formula, values: Mapping[str, Fraction]) -> bool:
    """Truth value of a quantifier-free real formula under a rational assignment."""
    match f:
        case Top():
            return True
        case Bot():
            return False
        case RealAtom():
            return eval_real_atom(f, values)
        case Not(a):
            return not eval_real(a, values)
        case And(args):
            return all(eval_real(a, values) for a in args)
        case Or(args):
            return any(eval_real(a, values) for a in args)
        case Implies(a, b):
            return (not eval_real(a, values)) or eval_real(b, values)
        case Iff(a, b):
            return eval_real(a, values) == eval_real(b, values)
    raise ValueError(f'cannot evaluate {f!r} over the reals')


def sample_quantified(f: Formula, grid: Iterable, sigma: Mapping | None = None,
                      real: bool = False) -> bool | None:
    """Three-valued grid approximation of the quantifier semantics.

    Returns ``True`` only when grid witnesses prove the formula, ``False``
    only when a grid counterexample refutes it, ``None`` (unknown)
    otherwise.  With ``real=True`` the formula is a real formula and the grid
    holds rationals; otherwise the grid holds Gaussian rationals.
    """
    grid = list(grid)
    sigma = dict(sigma or {})

    def go(g: Formula, env: dict) -> bool | None:
        match g:
            case Exists(v, a):
                for c in grid:
                    if go(a, {**env, v: c}) is True:
                        return True
                return None
            case Forall(v, a):
                for c in grid:
                    r = go(a, {**env, v: c})
                    if r is False:
                        return False
                return None
        return eval_real(g, env) if real else eval_qf(g, env)
    return go(f, sigma)


# -- real normal form -----------------------------------------------------------------

def _realify(pair: tuple[Poly, Poly], real_vars: frozenset[str]) -> tuple[Poly, Poly]:
    if not real_vars:
        return pair
    zero = Poly.zero()
    mapping = {im_name(v): zero for v in real_vars}
    return pair[0].subs(mapping), pair[1].subs(mapping)


def _atom_real_nf(a: Atom, lenient: bool, real_vars: frozenset[str]) -> Formula:
    l1, l2 = _realify(cart_pair(a.lhs), real_vars)
    r1, r2 = _realify(cart_pair(a.rhs), real_vars)
    if a.rel.is_ordering:
        if not (l2.is_zero() and r2.is_zero()):
            if lenient:
                return BOT
            raise RealnessError(f'ordering atom with a non-real side: {a}')
        return RealAtom(l1 - r1, a.rel)
    f, g = l1 - r1, l2 - r2
    if g.is_zero():
        return RealAtom(f, a.rel)
    if f.is_zero():
        return RealAtom(g, a.rel)
    if a.rel is RelOp.EQ:
        return And((RealAtom(f, RelOp.EQ), RealAtom(g, RelOp.EQ)))
    return Or((RealAtom(f, RelOp.NE), RealAtom(g, RelOp.NE)))


def to_real_nf(f: Formula, lenient: bool = False,
               real_vars: Iterable[str] = ()) -> Formula:
    """Equivalent formula whose atoms are ``p rel 0`` with ``p`` in Q[Re(z), Im(z)].

    Ordering atoms with a non-real side raise :class:`RealnessError`, or
    become false with ``lenient=True``.  Variables in ``real_vars`` are taken
    to have imaginary part 0 (this is sound only under that assumption).
    Implications and equivalences are expanded.
    """
    real_vars = frozenset(real_vars)

    def go(g: Formula) -> Formula:
        match g:
            case Atom():
                return _atom_real_nf(g, lenient, real_vars)
            case RealAtom() | Top() | Bot():
                return g
            case Not(a):
                return Not(go(a))
            case And(args) | Or(args):
                return type(g)(tuple(go(a) for a in args))
            case Implies(a, b):
                return Or((Not(go(a)), go(b)))
            case Iff(a, b):
                a, b = go(a), go(b)
                return And((Or((Not(a), b)), Or((a, Not(b)))))
            case Exists(v, a) | Forall(v, a):
                return type(g)(v, go(a))
        raise TypeError(f'not a formula: {g!r}')
    return go(f)


def real_atom_is_complex_real(a: RealAtom) -> bool:
    """True when every generator of ``a`` is a ``z__re``/``z__im`` name."""
    return all(split_real_name(v) is not None for v in a.poly.variables())


# -- the real fragment of the text syntax ---------------------------------------

def real_term_poly(t: Term) -> Poly:
    """Rational polynomial of a term without ``I``, ``Re``, ``Im`` or ``conj``."""
    from .terms import Const, Var, Add, Neg, Mul, Pow
    match t:
        case Const(q):
            return Poly.const(q)
        case Var(name):
            return Poly.var(name)
        case Add(a, b):
            return real_term_poly(a) + real_term_poly(b)
        case Neg(a):
            return -real_term_poly(a)
        case Mul(a, b):
            return real_term_poly(a) * real_term_poly(b)
        case Pow(a, n):
            return real_term_poly(a) ** n
    raise ValueError(f'not a real polynomial term: {t}')


def to_real_formula(f: Formula) -> Formula:
    """Turn parsed atoms over plain real variables into :class:`RealAtom` nodes."""
    def conv(a):
        if isinstance(a, RealAtom):
            return a
        return RealAtom(real_term_poly(a.lhs) - real_term_poly(a.rhs), a.rel)
    return map_atoms(f, conv)
