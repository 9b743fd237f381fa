"""Simplification of quantifier-free real formulas.

Atoms are ``poly rel 0`` (:class:`~pcqe.formulas.RealAtom`).  The
simplifier works with sign sets: subsets of ``{-1, 0, 1}`` that a
polynomial may take.  Known facts (assumptions, sibling literals of an
``and``, negated sibling literals of an ``or``) are kept as a map from
normalized polynomials to sign sets and used to evaluate or tighten atoms.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import sympy

from ..formulas import (
    And, BOT, Bot, Exists, Forall, Formula, Not, Or, RealAtom, RelOp,
    TOP, Top, nnf)
from ..poly import Poly, deglex_key
from ..terms import sort_vars

ALL = frozenset({-1, 0, 1})
Signs = frozenset

FACTOR_MAX_TERMS = 400


# -- sign sets -----------------------------------------------------------------

def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_mul(s: Signs, t: Signs) -> Signs:
    return frozenset(a * b for a in s for b in t)


def sign_add(s: Signs, t: Signs) -> Signs:
    out = set()
    for a in s:
        for b in t:
            if a == 0 or a == b:
                out.add(b if a == 0 else a)
            elif b == 0:
                out.add(a)
            else:
                return ALL
    return frozenset(out)


def sign_pow(s: Signs, e: int) -> Signs:
    if e == 0:
        return frozenset({1})
    return frozenset(a ** e for a in s)


def rel_of(signs: Signs) -> RelOp | None:
    return RelOp.from_signs(signs)


# -- normalization ---------------------------------------------------------------

def _lead_key(p: Poly):
    names = sort_vars(p.variables())
    index = {v: i for i, v in enumerate(names)}
    return deglex_key(index.__getitem__)


def normalize_poly(p: Poly) -> tuple[Poly, Fraction]:
    """Primitive integer polynomial with positive leading coefficient, and the
    rational ``c`` with ``p = c * result``."""
    if p.is_zero():
        return p, Fraction(1)
    c = p.content()
    lead = p.sorted_terms(_lead_key(p))[0][1]
    if lead < 0:
        c = -c
    return p.scale(1 / c), c


def make_atom(p: Poly, rel: RelOp) -> Formula:
    """Normalized atom, or a truth value for constant ``p``."""
    if p.is_constant():
        return TOP if rel.holds(_sign(p.constant_value())) else BOT
    q, c = normalize_poly(p)
    return RealAtom(q, rel if c > 0 else rel.converse())


def atom_from_signs(p: Poly, signs: Signs) -> Formula:
    if not signs:
        return BOT
    if signs == ALL:
        return TOP
    return make_atom(p, rel_of(signs))


# -- factorization ---------------------------------------------------------------

@lru_cache(maxsize=1 << 14)
def factor(p: Poly) -> tuple[Fraction, tuple[tuple[Poly, int], ...]]:
    """``p = c * prod(f**m)`` with normalized irreducible factors ``f``."""
    if p.is_constant() or len(p) > FACTOR_MAX_TERMS:
        if p.is_constant():
            return p.constant_value(), ()
        q, c = normalize_poly(p)
        return c, ((q, 1),)
    gens = sort_vars(p.variables())
    symbols = sympy.symbols([f's{i}' for i in range(len(gens))])
    q, c = normalize_poly(p)
    index = {g: i for i, g in enumerate(gens)}
    data = {}
    for m, coeff in q:
        vec = [0] * len(gens)
        for g, e in m:
            vec[index[g]] = e
        data[tuple(vec)] = int(coeff)
    sp = sympy.Poly.from_dict(data, *symbols, domain='ZZ')
    content, factors = sp.factor_list()
    c = c * Fraction(int(content))
    out = []
    for f, mult in factors:
        terms = {}
        for vec, coeff in f.terms():
            mono = tuple((gens[i], e) for i, e in enumerate(vec) if e)
            terms[mono] = Fraction(int(coeff))
        fp, fc = normalize_poly(Poly(terms))
        c = c * fc ** mult
        out.append((fp, mult))
    out.sort(key=lambda fm: (fm[0].degree(), len(fm[0]), repr(sorted(map(str, fm[0].variables())))))
    return c, tuple(out)


# -- knowledge ---------------------------------------------------------------------

class Facts:
    """Immutable map from normalized polynomials to sign sets."""

    __slots__ = ('signs',)

    def __init__(self, signs: Mapping[Poly, Signs] | None = None):
        self.signs = dict(signs or {})

    def get(self, p: Poly) -> Signs:
        return self.signs.get(p, ALL)

    def var_signs(self, v) -> Signs:
        return self.signs.get(Poly.var(v), ALL)

    def poly_signs(self, p: Poly) -> Signs:
        """Sign set of ``p`` (any scaling) from stored facts and monomial propagation."""
        if p.is_constant():
            return frozenset({_sign(p.constant_value())})
        q, c = normalize_poly(p)
        known = self.get(q)
        total = frozenset({0})
        for m, coeff in q:
            s = frozenset({_sign(coeff)})
            for g, e in m:
                s = sign_mul(s, sign_pow(self.var_signs(g), e))
            total = sign_add(total, s)
            if total == ALL:
                break
        known = known & total
        return known if c > 0 else frozenset(-x for x in known)

    def with_(self, p: Poly, signs: Signs) -> Facts:
        q, c = normalize_poly(p)
        if c < 0:
            signs = frozenset(-x for x in signs)
        out = Facts(self.signs)
        out.signs[q] = self.get(q) & signs
        return out

    def merged(self, items: Iterable[tuple[Poly, Signs]]) -> Facts:
        out = Facts(self.signs)
        for q, s in items:
            out.signs[q] = out.get(q) & s
        return out

    def inconsistent(self) -> bool:
        return any(not s for s in self.signs.values())

    def equations(self) -> dict:
        """Substitutions ``v -> value`` from facts ``c*v + d = 0``."""
        subs = {}
        for p, s in self.signs.items():
            if s == frozenset({0}):
                sol = _solve_constant(p)
                if sol is not None:
                    subs.setdefault(sol[0], sol[1])
        return subs


def _solve_constant(p: Poly):
    """``(v, Poly.const(q))`` when ``p`` is ``c*v + d`` with rational ``c != 0``, ``d``."""
    if p.degree() != 1 or len(p.variables()) != 1:
        return None
    (v,) = p.variables()
    c0, c1 = p.coefficients_in(v)
    return v, Poly.const(-c0.constant_value() / c1.constant_value())


_EMPTY = Facts()


def facts_from(assumptions: Iterable[Formula]) -> Facts:
    facts = Facts()
    for a in assumptions:
        if isinstance(a, RealAtom) and not a.poly.is_constant():
            facts = facts.with_(a.poly, a.rel.signs)
    return facts


# -- atoms -------------------------------------------------------------------------

def _substitute(f: Formula, subs: Mapping) -> Formula:
    if not subs:
        return f
    match f:
        case RealAtom(p, rel):
            if p.variables() & subs.keys():
                return make_atom(p.subs(subs), rel)
            return f
        case And(args) | Or(args):
            return type(f)(tuple(_substitute(a, subs) for a in args))
        case Not(a):
            return Not(_substitute(a, subs))
    return f


def _monomials_nonneg(p: Poly, facts: Facts) -> int:
    """1 if every monomial of ``p`` is >= 0 under ``facts``, -1 if every one is <= 0, else 0."""
    signs = set()
    for m, coeff in p:
        s = frozenset({_sign(coeff)})
        for g, e in m:
            s = sign_mul(s, sign_pow(facts.var_signs(g), e))
        signs.add(s)
    if all(s <= {0, 1} for s in signs):
        return 1
    if all(s <= {-1, 0} for s in signs):
        return -1
    return 0


def _monomial_zero(m, facts: Facts) -> Formula:
    """Formula for ``monomial == 0``."""
    parts = [make_atom(Poly.var(g), RelOp.EQ) for g, _ in m if 0 in facts.var_signs(g)]
    return _mk_or(parts)


def simplify_atom(a: RealAtom, facts: Facts, use_factor: bool = True) -> Formula:
    p, rel = a.poly, a.rel
    if p.is_constant():
        return TOP if rel.holds(_sign(p.constant_value())) else BOT
    signs = facts.poly_signs(p)
    allowed = signs & rel.signs
    if not allowed:
        return BOT
    if allowed == signs:
        return TOP
    rel = rel_of(allowed) if rel_of(allowed) else rel
    p_norm, c = normalize_poly(p)
    if c < 0:
        rel = rel.converse()
    p = p_norm
    # sums of individually signed monomials vanish only if every monomial does
    if rel in (RelOp.EQ, RelOp.NE) and len(p) > 1:
        direction = _monomials_nonneg(p, facts)
        if direction:
            zeros = [_monomial_zero(m, facts) for m, _ in p]
            if rel is RelOp.EQ:
                return _mk_and(zeros)
            return _mk_or([_negate(z) for z in zeros])
    if not use_factor or p.degree() <= 1:
        return make_atom(p, rel)
    c, factors = factor(p)
    if len(factors) == 1 and factors[0][1] == 1:
        return make_atom(p, rel)
    if rel is RelOp.EQ:
        return _mk_or([simplify_atom(RealAtom(f, RelOp.EQ), facts, False) for f, _ in factors])
    if rel is RelOp.NE:
        return _mk_and([simplify_atom(RealAtom(f, RelOp.NE), facts, False) for f, _ in factors])
    return _ordering_product(c, factors, rel, facts)


def _ordering_product(c, factors, rel: RelOp, facts: Facts) -> Formula:
    """``c * prod(f**m) rel 0`` for an ordering relation."""
    if c < 0:
        rel = rel.converse()
    strict = rel in (RelOp.LT, RelOp.GT)
    side_conditions = []   # factors that may vanish but do not affect the sign otherwise
    rest = Poly.const(Fraction(1))
    for f, m in factors:
        s = facts.poly_signs(f)
        if m % 2 == 0:
            s = sign_pow(s, 2)
        # factors of strict sign are dropped when they are monomials or
        # definite on their own; others stay as written
        if len(f) == 1 or _EMPTY.poly_signs(f) == s:
            if s == frozenset({1}):
                continue
            if s == frozenset({-1}):
                rel = rel.converse()
                continue
        if m % 2 == 0 and s == frozenset({1}):
            continue
        if s == frozenset({1}) or s == frozenset({-1}):
            rest = rest * f ** m
            continue
        if s <= {0, 1} or s <= {-1, 0}:
            if s <= {-1, 0}:
                rel = rel.converse()
            side_conditions.append(f)
            continue
        rest = rest * f ** m
    core = make_atom(rest, rel)
    if not side_conditions:
        return core
    if strict:
        return _mk_and([make_atom(f, RelOp.NE) for f in side_conditions] + [core])
    return _mk_or([make_atom(f, RelOp.EQ) for f in side_conditions] + [core])


# -- connectives ---------------------------------------------------------------------

def _negate(f: Formula) -> Formula:
    return nnf(f, True)


def _flatten(cls, args: Iterable[Formula]) -> list[Formula]:
    out = []
    for a in args:
        if isinstance(a, cls):
            out.extend(_flatten(cls, a.args))
        else:
            out.append(a)
    return out


def _mk_and(args: Iterable[Formula]) -> Formula:
    out = []
    seen = set()
    for a in _flatten(And, args):
        if isinstance(a, Bot):
            return BOT
        if isinstance(a, Top) or a in seen:
            continue
        seen.add(a)
        out.append(a)
    if not out:
        return TOP
    return out[0] if len(out) == 1 else And(tuple(out))


def _mk_or(args: Iterable[Formula]) -> Formula:
    out = []
    seen = set()
    for a in _flatten(Or, args):
        if isinstance(a, Top):
            return TOP
        if isinstance(a, Bot) or a in seen:
            continue
        seen.add(a)
        out.append(a)
    if not out:
        return BOT
    return out[0] if len(out) == 1 else Or(tuple(out))


def _literal_signs(f: Formula) -> list[tuple[Poly, Signs]]:
    if isinstance(f, RealAtom):
        q, c = normalize_poly(f.poly)
        s = f.rel.signs if c > 0 else f.rel.converse().signs
        return [(q, s)]
    return []


_MAX_ROUNDS = 4


def _simp(f: Formula, facts: Facts, use_factor: bool) -> Formula:
    match f:
        case Top() | Bot():
            return f
        case RealAtom():
            return simplify_atom(f, facts, use_factor)
        case And(args):
            return _simp_junction(And, args, facts, use_factor)
        case Or(args):
            return _simp_junction(Or, args, facts, use_factor)
        case Not(a):
            return _simp(nnf(a, True), facts, use_factor)
    raise TypeError(f'cannot simplify {f!r}')


def _simp_junction(cls, args, facts: Facts, use_factor: bool) -> Formula:
    is_and = cls is And
    mk = _mk_and if is_and else _mk_or
    absorbing = BOT if is_and else TOP
    current = list(args)
    for _ in range(_MAX_ROUNDS):
        parts = []
        for a in current:
            s = _simp(a, facts, use_factor) if isinstance(a, RealAtom) else a
            parts.append(s)
        flat = mk(parts)
        if not isinstance(flat, cls):
            if isinstance(flat, (Top, Bot)):
                return flat
            return _simp(flat, facts, use_factor)
        # gather literal knowledge by polynomial
        lits: dict[Poly, Signs] = {}
        others = []
        for a in flat.args:
            ls = _literal_signs(a)
            if ls:
                q, s = ls[0]
                if is_and:
                    lits[q] = lits.get(q, facts.get(q)) & s
                else:
                    lits[q] = lits.get(q, frozenset()) | (s & facts.get(q))
            else:
                others.append(a)
        atoms_out = []
        for q, s in lits.items():
            if is_and:
                if not s:
                    return BOT
                if s != facts.get(q):
                    atoms_out.append(atom_from_signs(q, s))
            else:
                if s >= facts.get(q):
                    return TOP
                if s:
                    atoms_out.append(atom_from_signs(q, s))
        # context for the remaining arguments
        if is_and:
            inner = facts.merged(lits.items())
        else:
            inner = facts.merged((q, ALL - s) for q, s in lits.items())
        if inner.inconsistent():
            return absorbing
        subs = inner.equations()
        new_others = []
        for a in others:
            a = _substitute(a, subs)
            new_others.append(_simp(a, inner, use_factor))
        if is_and and subs and atoms_out:
            # substitute solved variables into the remaining literals too
            solved = {v for v in subs}
            keep = []
            for at in atoms_out:
                if isinstance(at, RealAtom) and at.rel in (RelOp.EQ, RelOp.NE) \
                        and _solve_constant(at.poly) is not None \
                        and _solve_constant(at.poly)[0] in solved:
                    keep.append(at)
                elif isinstance(at, RealAtom) and at.poly.variables() & solved:
                    keep.append(_substitute(at, subs))
                else:
                    keep.append(at)
            atoms_out = keep
        result = mk(atoms_out + new_others)
        if result == mk(current) or not isinstance(result, cls):
            if isinstance(result, (Top, Bot)) or not isinstance(result, cls):
                return result if isinstance(result, (Top, Bot)) else _simp(result, facts, use_factor)
            return result
        current = list(result.args)
    return mk(current)


def simplify_real(f: Formula, assumptions: Iterable[Formula] = (),
                  factorize: bool = True) -> Formula:
    """Simplify a quantifier-free real formula under assumption atoms.

    The result is equivalent to ``f`` whenever all assumptions hold.
    """
    if isinstance(f, (Exists, Forall)):
        raise ValueError('simplify_real expects a quantifier-free formula')
    assumptions = list(assumptions)
    facts = facts_from(assumptions)
    f = nnf(f)
    subs = facts.equations()
    if subs:
        f = _substitute(f, subs)
    prev = None
    for _ in range(_MAX_ROUNDS):
        if f == prev:
            break
        prev = f
        f = _simp(f, facts, factorize)
    return f
