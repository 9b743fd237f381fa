"""Reinterpretation of real results in complex notation.

Within a conjunction, two real equations ``r1 == 0`` and ``r2 == 0`` are
equivalent to the single complex equation ``r1 + I*r2 == 0``.  Which pairs
to merge is decided by a minimum cost partial edge cover of the complete
graph on the equations, where costs are word lengths of the printed atoms.
The cover problem reduces to an exact maximum weight matching.  Inside a
disjunction, real disequations merge dually.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .formulas import (
    And, Atom, Formula, Not, Or, RealAtom, RelOp)
from .printer import NF, atom_difference, canonical_atom, print_formula
from .terms import (
    Add, Conj, Const, ImagUnit, ImPart, Mul, Neg, Pow, RePart, Term, Var, ZERO,
    cart_to_term, poly_ctx, var_key)

DP_VERTEX_LIMIT = 12


class ShapeError(ValueError):
    """An atom handed to the cost graph is not a real equation (or disequation)."""


# -- word length ---------------------------------------------------------------------

def _summands(t: Term, negated: bool, out: list):
    match t:
        case Add(a, b):
            _summands(a, negated, out)
            _summands(b, negated, out)
        case Neg(a):
            out.append((a, not negated))
        case _:
            out.append((t, negated))


def _factors(t: Term, out: list):
    match t:
        case Mul(a, b):
            _factors(a, out)
            _factors(b, out)
        case Pow(a, n):
            out.extend([a] * n)
        case _:
            out.append(t)


def term_length(t: Term) -> int:
    """Symbol count of a term.

    A sum is one ``+`` node over its summands, each negated summand adding
    one unary minus; a product is one ``*`` node over its factors, where a
    power ``b^n`` stands for ``n`` copies of ``b``.
    """
    match t:
        case Const() | ImagUnit() | Var():
            return 1
        case Add():
            parts: list = []
            _summands(t, False, parts)
            return 1 + sum(term_length(s) + neg for s, neg in parts)
        case Neg(a):
            return 1 + term_length(a)
        case Mul() | Pow():
            factors: list = []
            _factors(t, factors)
            if len(factors) == 1:
                return term_length(factors[0])
            if not factors:
                return 1
            return 1 + sum(term_length(f) for f in factors)
        case RePart(a) | ImPart(a) | Conj(a):
            return 1 + term_length(a)
    raise TypeError(f'not a term: {t!r}')


def word_length(a: Atom) -> int:
    """Symbols in ``lhs rel rhs``: both sides plus one for the relation."""
    return term_length(a.lhs) + 1 + term_length(a.rhs)


# -- cost graph ----------------------------------------------------------------------

@dataclass(frozen=True)
class CostGraph:
    atoms: tuple[Formula, ...]
    vertex_cost: tuple[int, ...]
    edge_cost: Mapping[tuple[int, int], int]
    edge_merge: Mapping[tuple[int, int], Atom]
    vertex_atom: tuple[Atom, ...]

    @property
    def n(self) -> int:
        return len(self.atoms)

    def cover_cost(self, selected: Iterable[tuple[int, int]]) -> int:
        selected = list(selected)
        covered = {v for e in selected for v in e}
        return (sum(c for v, c in enumerate(self.vertex_cost) if v not in covered)
                + sum(self.edge_cost[e] for e in selected))


@dataclass(frozen=True)
class PartialEdgeCover:
    selected: frozenset[tuple[int, int]]
    cost: int


def _real_part(a: Formula, rel: RelOp):
    if not isinstance(a, (Atom, RealAtom)) or a.rel is not rel:
        raise ShapeError(f'expected a real {rel.value} atom, got {a}')
    p1, p2 = atom_difference(a)
    if not p2.is_zero():
        raise ShapeError(f'atom is not real: {a}')
    return p1


@lru_cache(maxsize=1 << 14)
def _canonical_cost(p1, p2, rel: RelOp, nf: str) -> tuple[int, Atom]:
    ctx = poly_ctx(p1, p2)
    atom = canonical_atom(Atom(cart_to_term(p1, p2, ctx), ZERO, rel), nf)
    return word_length(atom), atom


def build_cost_graph(atoms: Sequence[Formula], nf: NF = 'conjugate',
                     rel: RelOp = RelOp.EQ) -> CostGraph:
    """Cost graph over real equations (or, with ``rel=NE``, disequations)."""
    reals = [_real_part(a, rel) for a in atoms]
    zero = reals[0] - reals[0] if reals else None
    vcost, vatom = [], []
    for r in reals:
        c, at = _canonical_cost(r, zero, rel, nf)
        vcost.append(c)
        vatom.append(at)
    ecost, emerge = {}, {}
    for i, j in itertools.combinations(range(len(reals)), 2):
        ci, ai = _canonical_cost(reals[i], reals[j], rel, nf)
        cj, aj = _canonical_cost(reals[j], reals[i], rel, nf)
        ecost[(i, j)], emerge[(i, j)] = (ci, ai) if ci <= cj else (cj, aj)
    return CostGraph(tuple(atoms), tuple(vcost), ecost, emerge, tuple(vatom))


# -- matching ------------------------------------------------------------------------

def _matching_dp(n: int, weights: Mapping[tuple[int, int], int]) -> set[tuple[int, int]]:
    adj = [dict() for _ in range(n)]
    for (i, j), w in weights.items():
        adj[i][j] = w
        adj[j][i] = w

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[int, tuple]:
        # mask: vertices still available
        if not mask:
            return 0, ()
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        value, chosen = best(rest)
        for u, w in adj[v].items():
            if rest >> u & 1:
                sub_value, sub_chosen = best(rest & ~(1 << u))
                if sub_value + w > value:
                    value, chosen = sub_value + w, sub_chosen + ((min(u, v), max(u, v)),)
        return value, chosen
    return set(best((1 << n) - 1)[1])


def max_weight_matching(vertices: Iterable[int] | int,
                        weights: Mapping[tuple[int, int], int]) -> set[tuple[int, int]]:
    """Exact maximum weight matching; edges of weight <= 0 are ignored."""
    if isinstance(vertices, int):
        vertices = range(vertices)
    vertices = list(vertices)
    index = {v: k for k, v in enumerate(vertices)}
    pos = {(index[i], index[j]): w for (i, j), w in weights.items() if w > 0 and i != j}
    pos = {(min(e), max(e)): w for e, w in pos.items()}
    if not pos:
        return set()
    if len(vertices) <= DP_VERTEX_LIMIT:
        found = _matching_dp(len(vertices), pos)
    else:
        import networkx as nx
        g = nx.Graph()
        for (i, j), w in pos.items():
            g.add_edge(i, j, weight=w)
        found = {(min(e), max(e)) for e in nx.max_weight_matching(g)}
    return {tuple(sorted((vertices[i], vertices[j]), key=index.__getitem__)) for i, j in found}


# -- minimum cost partial edge cover -----------------------------------------------------

def cheapest_edges(g: CostGraph) -> dict[int, tuple[int, int]]:
    """For every vertex its incident edge of least cost (ties: lowest opposite index)."""
    out = {}
    for v in range(g.n):
        best = None
        for u in range(g.n):
            if u == v:
                continue
            e = (min(u, v), max(u, v))
            key = (g.edge_cost[e], u)
            if best is None or key < best[0]:
                best = (key, e)
        if best is not None:
            out[v] = best[1]
    return out


def mcpec(g: CostGraph) -> PartialEdgeCover:
    """Minimum cost partial edge cover via maximum weight matching."""
    e_v = cheapest_edges(g)
    reduced = [min(g.vertex_cost[v], g.edge_cost[e_v[v]]) if v in e_v else g.vertex_cost[v]
               for v in range(g.n)]
    weights = {e: reduced[e[0]] + reduced[e[1]] - c for e, c in g.edge_cost.items()}
    matching = max_weight_matching(g.n, weights)
    covered = {v for e in matching for v in e}
    selected = set(matching)
    for v in range(g.n):
        if v not in covered and v in e_v and g.edge_cost[e_v[v]] < g.vertex_cost[v]:
            selected.add(e_v[v])
    selected = frozenset(selected)
    return PartialEdgeCover(selected, g.cover_cost(selected))


# -- formulas ------------------------------------------------------------------------

def _is_real_atom(a: Formula, rel: RelOp) -> bool:
    if not isinstance(a, (Atom, RealAtom)) or a.rel is not rel:
        return False
    return atom_difference(a)[1].is_zero()


def _merge_junction(args: Sequence[Formula], rel: RelOp, nf: NF) -> list[Formula]:
    idx = [k for k, a in enumerate(args) if _is_real_atom(a, rel)]
    if len(idx) < 2:
        return [canonical_atom(a, nf) if k in idx else a for k, a in enumerate(args)]
    g = build_cost_graph([args[k] for k in idx], nf, rel)
    cover = mcpec(g)
    placed: dict[int, list[Formula]] = {}
    covered = set()
    for e in sorted(cover.selected):
        covered.update(e)
        placed.setdefault(min(e), []).append(g.edge_merge[e])
    out = []
    where = {k: n for n, k in enumerate(idx)}
    for k, a in enumerate(args):
        if k in where:
            n = where[k]
            out.extend(placed.get(n, []))
            if n not in covered:
                out.append(g.vertex_atom[n])
        else:
            out.append(a)
    return out


def reinterpret_formula(f: Formula, nf: NF = 'conjugate') -> Formula:
    """Merge real equations in conjunctions and disequations in disjunctions.

    All atoms come out in canonical form for ``nf``.
    """
    match f:
        case And(args):
            args = [reinterpret_formula(a, nf) if not isinstance(a, (Atom, RealAtom)) else a
                    for a in _flat(And, args)]
            merged = _merge_junction(args, RelOp.EQ, nf)
            return _junction(And, [_canon(a, nf) for a in merged])
        case Or(args):
            args = [reinterpret_formula(a, nf) if not isinstance(a, (Atom, RealAtom)) else a
                    for a in _flat(Or, args)]
            merged = _merge_junction(args, RelOp.NE, nf)
            return _junction(Or, [_canon(a, nf) for a in merged])
        case Not(a):
            return Not(reinterpret_formula(a, nf))
        case Atom() | RealAtom():
            return canonical_atom(f, nf)
    return f


def _junction(cls, args: list[Formula]) -> Formula:
    unique = list(dict.fromkeys(args))
    return unique[0] if len(unique) == 1 else cls(tuple(unique))


def _flat(cls, args):
    out = []
    for a in args:
        if isinstance(a, cls):
            out.extend(_flat(cls, a.args))
        else:
            out.append(a)
    return out


def _canon(a: Formula, nf: NF) -> Formula:
    if isinstance(a, (Atom, RealAtom)):
        return canonical_atom(a, nf)
    return a


def canonical_order(f: Formula) -> Formula:
    """Sort the arguments of every ``and``/``or`` by their printed text."""
    match f:
        case And(args) | Or(args):
            parts = [canonical_order(a) for a in args]
            parts.sort(key=lambda a: var_key(print_formula(a)))
            return type(f)(tuple(parts))
        case Not(a):
            return Not(canonical_order(a))
    return f
