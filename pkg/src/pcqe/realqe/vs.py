"""Virtual substitution for real quantifier elimination.

Handles quantified variables that occur at most quadratically.  Test points
are ``-oo``, parametric roots ``(p + q*sqrt(d)) / s`` of the atoms' polynomials
and those roots shifted by a positive infinitesimal.  Substituting a root
into ``g rel 0`` multiplies ``g`` by an even power of ``s`` and decides the
sign of the resulting ``A + B*sqrt(d)`` by a case distinction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..formulas import (
    And, Bot, Exists, Formula, Or, RealAtom, RelOp, nnf, split_prefix)
from ..poly import Poly
from .simplify import (
    Facts, _mk_and, _mk_or, facts_from, make_atom, simplify_real)


class DegreeTooHigh(Exception):
    """A quantified variable occurs with degree above 2."""

    def __init__(self, variable: str, atom: Formula):
        super().__init__(f'{variable} occurs with degree > 2 in {atom}')
        self.variable = variable
        self.atom = atom


ONE = Poly.const(Fraction(1))
ZERO = Poly.zero()
EQ, NE, LE, LT, GE, GT = RelOp.EQ, RelOp.NE, RelOp.LE, RelOp.LT, RelOp.GE, RelOp.GT


@dataclass(frozen=True)
class Root:
    """The point ``(p + q*sqrt(d)) / s``, valid under ``guard``; ``eps`` adds an infinitesimal."""
    p: Poly
    q: Poly
    d: Poly
    s: Poly
    guard: Formula
    eps: bool = False


class _MinusInfinity:
    def __repr__(self):
        return '-oo'


MINUS_INF = _MinusInfinity()


# -- atoms and polynomials ----------------------------------------------------------

def _atoms(f: Formula) -> Iterable[RealAtom]:
    match f:
        case RealAtom():
            yield f
        case And(args) | Or(args):
            for a in args:
                yield from _atoms(a)


def _map(f: Formula, fn) -> Formula:
    match f:
        case RealAtom():
            return fn(f)
        case And(args):
            return _mk_and(_map(a, fn) for a in args)
        case Or(args):
            return _mk_or(_map(a, fn) for a in args)
    return f


def _has(f: Formula, x: str) -> bool:
    return any(x in a.poly.variables() for a in _atoms(f))


def _eq(p: Poly) -> Formula:
    return make_atom(p, EQ)


def _all_zero(ps: Sequence[Poly]) -> Formula:
    return _mk_and(_eq(p) for p in ps)


def _some_nonzero(ps: Sequence[Poly]) -> Formula:
    return _mk_or(make_atom(p, NE) for p in ps)


# -- sign of A + B*sqrt(d) ----------------------------------------------------------

def _sqrt_sign(a: Poly, b: Poly, d: Poly, rel: RelOp) -> Formula:
    """``a + b*sqrt(d) rel 0`` assuming ``d >= 0``."""
    if b.is_zero() or d.is_zero():
        return make_atom(a, rel)
    if rel in (GT, GE):
        a, b, rel = -a, -b, (LT if rel is GT else LE)
    norm = a * a - b * b * d
    at = make_atom
    if rel is EQ:
        return _mk_and([at(a * b, LE), at(norm, EQ)])
    if rel is NE:
        return _mk_or([at(a * b, GT), at(norm, NE)])
    if rel is LT:
        return _mk_or([_mk_and([at(a, LT), at(norm, GT)]),
                       _mk_and([at(b, LE), _mk_or([at(a, LT), at(norm, LT)])])])
    # LE
    return _mk_or([_mk_and([at(a, LE), at(norm, GE)]),
                   _mk_and([at(b, LE), at(norm, LE)])])


def _eval_at_root(coeffs: Sequence[Poly], r: Root) -> tuple[Poly, Poly]:
    """``g(r) * s**k`` as ``A + B*sqrt(d)``, with ``k`` even and ``k >= deg g``."""
    deg = len(coeffs) - 1
    k = deg + (deg % 2)
    a_tot, b_tot = ZERO, ZERO
    pa, pb = ONE, ZERO          # (p + q*sqrt(d))**j
    s_pows = [ONE]
    for _ in range(k):
        s_pows.append(s_pows[-1] * r.s)
    for j, c in enumerate(coeffs):
        if not c.is_zero():
            factor = c * s_pows[k - j]
            a_tot = a_tot + factor * pa
            b_tot = b_tot + factor * pb
        pa, pb = pa * r.p + pb * r.q * r.d, pa * r.q + pb * r.p
    return a_tot, b_tot


def _derivative(coeffs: Sequence[Poly]) -> list[Poly]:
    return [c.scale(Fraction(j)) for j, c in enumerate(coeffs)][1:]


def _sub_root(coeffs: Sequence[Poly], rel: RelOp, r: Root) -> Formula:
    if len(coeffs) == 1:
        return make_atom(coeffs[0], rel)
    if not r.eps:
        a, b = _eval_at_root(coeffs, r)
        return _sqrt_sign(a, b, r.d, rel)
    if rel is EQ:
        return _all_zero(coeffs)
    if rel is NE:
        return _some_nonzero(coeffs)
    if rel in (LE, GE):
        strict = LT if rel is LE else GT
        return _mk_or([_sub_root(coeffs, strict, r), _all_zero(coeffs)])
    # g(r + eps) rel 0 for strict rel: decided by the first non-vanishing derivative
    plain = Root(r.p, r.q, r.d, r.s, r.guard)
    return _mk_or([_sub_root(coeffs, rel, plain),
                   _mk_and([_sub_root(coeffs, EQ, plain),
                            _sub_root(_derivative(coeffs), rel, r)])])


def _sub_minus_inf(coeffs: Sequence[Poly], rel: RelOp) -> Formula:
    if rel is EQ:
        return _all_zero(coeffs)
    if rel is NE:
        return _some_nonzero(coeffs)
    if rel in (LE, GE):
        strict = LT if rel is LE else GT
        return _mk_or([_sub_minus_inf(coeffs, strict), _all_zero(coeffs)])
    cases = []
    for j in range(len(coeffs) - 1, -1, -1):
        c = coeffs[j] if j % 2 == 0 else -coeffs[j]
        cases.append(_mk_and([_all_zero(coeffs[j + 1:]), make_atom(c, rel)]))
    return _mk_or(cases)


def _substitute(f: Formula, x: str, point) -> Formula:
    def sub(a: RealAtom) -> Formula:
        if x not in a.poly.variables():
            return a
        coeffs = a.poly.coefficients_in(x)
        if point is MINUS_INF:
            return _sub_minus_inf(coeffs, a.rel)
        return _sub_root(coeffs, a.rel, point)
    return _map(f, sub)


# -- elimination sets ----------------------------------------------------------------

def _roots(f: Poly, x: str, eps: bool) -> list[Root]:
    coeffs = f.coefficients_in(x)
    if len(coeffs) == 2:
        c, b = coeffs
        return [Root(-c, ZERO, ZERO, b, make_atom(b, NE), eps)]
    c, b, a = coeffs
    out = []
    if not a.is_constant():
        out.append(Root(-c, ZERO, ZERO, b, _mk_and([_eq(a), make_atom(b, NE)]), eps))
    disc = b * b - a * c.scale(Fraction(4))
    guard = _mk_and([make_atom(a, NE), make_atom(disc, GE)])
    if disc.is_constant() and disc.constant_value() == 0:
        out.append(Root(-b, ZERO, ZERO, a.scale(Fraction(2)), guard, eps))
    else:
        for sign in (1, -1):
            out.append(Root(-b, ONE.scale(Fraction(sign)), disc, a.scale(Fraction(2)), guard, eps))
    return out


def _check_degree(f: Formula, x: str):
    for a in _atoms(f):
        if a.poly.degree(x) > 2:
            raise DegreeTooHigh(x, a)


def _closed_form(a: RealAtom, x: str) -> Formula:
    """``exists x . a`` for a single atom, without test points."""
    coeffs = a.poly.coefficients_in(x)
    rel = a.rel
    if rel in (LT, LE):
        coeffs = [-c for c in coeffs]
        rel = GT if rel is LT else GE
    if rel is NE:
        return _some_nonzero(coeffs)
    if len(coeffs) == 2:
        c, b = coeffs
        return _mk_or([make_atom(b, NE), make_atom(c, rel)])
    c, b, a2 = coeffs
    disc = b * b - a2 * c.scale(Fraction(4))
    linear = _mk_or([make_atom(b, NE), make_atom(c, rel)])
    if rel is EQ:
        return _mk_or([_mk_and([make_atom(a2, NE), make_atom(disc, GE)]),
                       _mk_and([_eq(a2), linear])])
    return _mk_or([make_atom(a2, GT),
                   _mk_and([_eq(a2), linear]),
                   _mk_and([make_atom(a2, LT), make_atom(disc, rel)])])


def _point_key(r: Root):
    return (r.p, r.q, r.d, r.s, r.eps)


def _best_equation(args: Sequence[Formula], x: str):
    best = None
    for a in args:
        if isinstance(a, RealAtom) and a.rel is EQ and x in a.poly.variables():
            coeffs = a.poly.coefficients_in(x)
            key = (len(coeffs), not coeffs[-1].is_constant(), len(a.poly))
            if best is None or key < best[0]:
                best = (key, a)
    return None if best is None else best[1]


def eliminate_variable(x: str, f: Formula) -> Formula:
    """Quantifier-free equivalent of ``exists x . f`` for quantifier-free NNF ``f``."""
    if isinstance(f, Or):
        return _mk_or(eliminate_variable(x, a) for a in f.args)
    args = list(f.args) if isinstance(f, And) else [f]
    free = [a for a in args if not _has(a, x)]
    bound = [a for a in args if _has(a, x)]
    if not bound:
        return f
    _check_degree(_mk_and(bound), x)
    if len(bound) == 1 and isinstance(bound[0], RealAtom):
        return _mk_and(free + [_closed_form(bound[0], x)])
    eq = _best_equation(bound, x)
    if eq is not None:
        rest = _mk_and(a for a in bound if a is not eq)
        coeffs = eq.poly.coefficients_in(x)
        cases = []
        for r in _roots(eq.poly, x, False):
            cases.append(_mk_and([r.guard, _substitute(rest, x, r)]))
        if not coeffs[-1].is_constant():
            degenerate = _mk_and([_all_zero(coeffs[1:]), _eq(coeffs[0])])
            if not isinstance(degenerate, Bot):
                cases.append(_mk_and([degenerate, eliminate_variable(x, rest)]))
        return _mk_and(free + [_mk_or(cases)])
    g = _mk_and(bound)
    atoms = [a for a in _atoms(g) if x in a.poly.variables()]
    cases = [_substitute(g, x, MINUS_INF)]
    if any(a.rel is not NE for a in atoms):
        seen = set()
        for a in atoms:
            for r in _roots(a.poly, x, a.rel in (LT, GT, NE)):
                key = _point_key(r)
                if key in seen:
                    continue
                seen.add(key)
                cases.append(_mk_and([r.guard, _substitute(g, x, r)]))
    return _mk_and(free + [_mk_or(cases)])


# -- blocks and prefixes ----------------------------------------------------------------

def _var_order(f: Formula, xs: Iterable[str]) -> list[str]:
    args = list(f.args) if isinstance(f, And) else [f]

    def score(x):
        degs = [a.poly.degree(x) for a in _atoms(f) if x in a.poly.variables()]
        gauss = _best_equation(args, x) is not None
        return (max(degs) > 2, not gauss, max(degs), len(degs), x)
    present = [x for x in xs if _has(f, x)]
    return sorted(present, key=score)


DNF_LIMIT = 32


def _split_cases(f: Formula, xs) -> Formula:
    """Disjunctive normal form of the part of ``f`` mentioning ``xs``, when small."""
    if not isinstance(f, And) or not any(isinstance(a, Or) for a in f.args):
        return f
    from .polish import _dnf
    bound = [a for a in f.args if any(_has(a, x) for x in xs)]
    free = [a for a in f.args if not any(_has(a, x) for x in xs)]
    cases = _dnf(_mk_and(bound), DNF_LIMIT)
    if cases is None or len(cases) <= 1:
        return f
    return _mk_or(_mk_and(free + c) for c in cases)


class _Eliminator:
    def __init__(self, facts: Facts, assumptions: Sequence[Formula]):
        self.facts = facts
        self.assumptions = list(assumptions)
        self.cache: dict = {}

    def simplify(self, f: Formula) -> Formula:
        return simplify_real(f, self.assumptions)

    def exists_block(self, xs: frozenset[str], f: Formula) -> Formula:
        key = (xs, f)
        if key in self.cache:
            return self.cache[key]
        if not isinstance(f, Or):
            f = _split_cases(f, xs)
        if isinstance(f, Or):
            result = _mk_or(self.exists_block(xs, a) for a in f.args)
        else:
            order = _var_order(f, xs)
            if not order:
                result = f
            else:
                error = None
                for x in order:
                    try:
                        g = self.simplify(eliminate_variable(x, f))
                        result = self.exists_block(xs - {x}, g)
                        break
                    except DegreeTooHigh as exc:
                        error = error or exc
                else:
                    raise error
        self.cache[key] = result
        return result


def _blocks(prefix):
    blocks = []
    for q, v in prefix:
        if blocks and blocks[-1][0] is q:
            blocks[-1][1].append(v)
        else:
            blocks.append((q, [v]))
    return blocks


def vs_eliminate(psi: Formula, assumptions: Iterable[Formula] = ()) -> Formula:
    """Quantifier-free equivalent of a prenex real formula.

    ``assumptions`` are atoms over free variables; the result is equivalent
    to ``psi`` wherever they all hold.  Raises :class:`DegreeTooHigh` when a
    variable cannot be eliminated by quadratic virtual substitution.
    """
    assumptions = list(assumptions)
    prefix, matrix = split_prefix(psi)
    eliminator = _Eliminator(facts_from(assumptions), assumptions)
    f = eliminator.simplify(nnf(matrix))
    for q, xs in reversed(_blocks(prefix)):
        if q is Exists:
            f = eliminator.exists_block(frozenset(xs), f)
        else:
            f = nnf(eliminator.exists_block(frozenset(xs), eliminator.simplify(nnf(f, True))), True)
        f = eliminator.simplify(f)
    return f
