"""Final tidying of real QE output: bounded disjunctive normal form with
substitution of linear equations inside each conjunct."""
from __future__ import annotations

from typing import Iterable, Sequence

from ..formulas import And, Bot, Formula, Or, RealAtom, RelOp, TOP, Top
from .simplify import _mk_and, _mk_or, make_atom, simplify_real

DNF_LIMIT = 64


def _dnf(f: Formula, limit: int) -> list[list[Formula]] | None:
    """Conjunct lists, or ``None`` when more than ``limit`` would arise."""
    match f:
        case Top():
            return [[]]
        case Bot():
            return []
        case Or(args):
            out = []
            for a in args:
                sub = _dnf(a, limit)
                if sub is None:
                    return None
                out.extend(sub)
                if len(out) > limit:
                    return None
            return out
        case And(args):
            out = [[]]
            for a in args:
                sub = _dnf(a, limit)
                if sub is None:
                    return None
                out = [x + y for x in out for y in sub]
                if len(out) > limit:
                    return None
            return out
    return [[f]]


def _linear_solution(a: Formula):
    """``(v, expr)`` for an equation ``c*v + rest == 0`` with constant ``c`` and ``v`` not in ``rest``."""
    if not isinstance(a, RealAtom) or a.rel is not RelOp.EQ:
        return None
    best = None
    for v in sorted(a.poly.variables(), key=str):
        coeffs = a.poly.coefficients_in(v)
        if len(coeffs) == 2 and coeffs[1].is_constant():
            expr = coeffs[0].scale(-1 / coeffs[1].constant_value())
            key = (len(expr), str(v))
            if best is None or key < best[0]:
                best = (key, v, expr)
    return None if best is None else best[1:]


def _gauss(conjunct: Sequence[Formula], assumptions) -> Formula:
    """Use linear equations to eliminate variables from the other atoms."""
    f = _mk_and(conjunct)
    for _ in range(8):
        if not isinstance(f, And):
            return f
        done = False
        for a in f.args:
            sol = _linear_solution(a)
            if sol is None:
                continue
            v, expr = sol
            others = [b for b in f.args if b is not a]
            if not any(isinstance(b, RealAtom) and v in b.poly.variables() for b in others):
                continue
            new = [make_atom(b.poly.subs({v: expr}), b.rel) if isinstance(b, RealAtom) else b
                   for b in others]
            f = simplify_real(_mk_and([a] + new), assumptions)
            done = True
            break
        if not done:
            return f
    return f


def _size(f: Formula) -> int:
    match f:
        case RealAtom(p, _):
            return 1 + len(p)
        case And(args) | Or(args):
            return sum(_size(a) for a in args)
    return 0


def _max_degree(f: Formula) -> int:
    match f:
        case RealAtom(p, _):
            return p.degree()
        case And(args) | Or(args):
            return max((_max_degree(a) for a in args), default=0)
    return 0


def _rank(f: Formula):
    return (_max_degree(f), _size(f))


def _polish_once(f: Formula, assumptions) -> Formula:
    conjuncts = _dnf(f, DNF_LIMIT)
    if conjuncts is None:
        return f
    parts = []
    for c in conjuncts:
        parts.extend(_solved_cases(c, assumptions, DNF_LIMIT))
        if len(parts) > DNF_LIMIT:
            return f
    parts = [p for p in parts if not isinstance(p, Bot)]
    if any(isinstance(p, Top) for p in parts):
        return TOP
    # drop conjuncts that contain another conjunct
    sets = [frozenset(p.args) if isinstance(p, And) else frozenset([p]) for p in parts]
    keep = []
    for k, s in enumerate(sets):
        if any(t < s or (t == s and j < k) for j, t in enumerate(sets) if j != k):
            continue
        keep.append(parts[k])
    return simplify_real(_mk_or(keep), assumptions, factorize=False)


def _solved_cases(conjunct, assumptions, limit, depth=0) -> list[Formula]:
    """Gauss-reduce a conjunct; split again if factoring produced disjunctions."""
    g = _gauss(conjunct, assumptions)
    if depth > 4:
        return [g]
    cases = _dnf(g, limit)
    if cases is None:
        return [g]
    if len(cases) == 1 and _mk_and(cases[0]) == g:
        return [g]
    out = []
    for c in cases:
        out.extend(_solved_cases(c, assumptions, limit, depth + 1))
    return out


def polish(f: Formula, assumptions: Iterable[Formula] = ()) -> Formula:
    """Equivalent (under ``assumptions``) formula of lower degree or size, if one is found.

    Candidates come from a bounded disjunctive normal form in which every
    conjunct is reduced by its linear equations; the result is kept only if
    it lowers (maximal degree, size).
    """
    assumptions = list(assumptions)
    best = f
    current = f
    for _ in range(4):
        nxt = _polish_once(current, assumptions)
        if nxt == current:
            break
        current = nxt
        if _rank(current) < _rank(best):
            best = current
    return best
