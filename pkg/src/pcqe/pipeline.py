"""Pseudo-complex quantifier elimination.

A complex formula is brought into real normal form, every complex variable
``z`` is split into the real variables ``z__re`` and ``z__im`` (doubling its
quantifier), the resulting real formula is handed to a real QE backend, and
the answer is translated back with ``Re(z)``/``Im(z)`` and reinterpreted in
complex notation.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .formulas import (
    And, Atom, Bot, Exists, Forall, Formula, Not, Or, RealAtom, RelOp, Top, atoms, bound_vars, free_vars, map_atoms,
    prenexify, to_real_nf)
from .printer import NF, atom_difference
from .reinterpret import canonical_order, reinterpret_formula
from .terms import (
    ContextError, ZERO, im_name, re_name, real_poly_to_term, sort_vars,
    split_real_name)
from .realqe.simplify import simplify_real
from .realqe.polish import polish
from .realqe.vs import vs_eliminate


class NameCollision(ValueError):
    """An auxiliary real variable name is already taken."""


class FreeVariableError(ValueError):
    """A sentence was expected but the formula has free variables."""


class IncompleteSimplification(RuntimeError):
    """Elimination of a sentence did not reduce to true or false."""


# -- purification --------------------------------------------------------------------

@dataclass(frozen=True)
class PurificationMap:
    pairs: dict[str, tuple[str, str]]

    def inverse(self) -> dict[str, tuple[str, str]]:
        out = {}
        for z, (r, i) in self.pairs.items():
            out[r] = (z, 're')
            out[i] = (z, 'im')
        return out


def _complex_vars(phi: Formula) -> set[str]:
    names = set(bound_vars(phi))
    for a in atoms(phi):
        if isinstance(a, RealAtom):
            for g in a.poly.variables():
                split = split_real_name(g)
                if split is None:
                    raise ContextError(f'{g} is not a real or imaginary part variable')
                names.add(split[0])
        else:
            raise TypeError('purify expects a formula in real normal form')
    return names


def purify(phi: Formula) -> tuple[Formula, PurificationMap]:
    """Split complex variables into real and imaginary parts, doubling quantifiers."""
    names = _complex_vars(phi)
    pairs = {}
    for z in sort_vars(names):
        r, i = re_name(z), im_name(z)
        if r in names or i in names:
            raise NameCollision(f'auxiliary name for {z} collides with a variable')
        pairs[z] = (r, i)

    def go(f: Formula) -> Formula:
        match f:
            case Exists(v, a) | Forall(v, a):
                q = type(f)
                return q(pairs[v][0], q(pairs[v][1], go(a)))
            case Not(a):
                return Not(go(a))
            case And(args) | Or(args):
                return type(f)(tuple(go(a) for a in args))
        return f
    return go(phi), PurificationMap(pairs)


def unpurify(psi: Formula, m: PurificationMap | None = None) -> Formula:
    """Replace ``z__re``/``z__im`` by ``Re(z)``/``Im(z)`` in a quantifier-free real formula."""
    inverse = m.inverse() if m is not None else None

    def conv(a):
        if not isinstance(a, RealAtom):
            return a
        for g in a.poly.variables():
            split = split_real_name(g)
            if split is None or (inverse is not None and g not in inverse
                                 and split[0] in m.pairs):
                raise ContextError(f'unknown auxiliary variable {g}')
        ctx = sort_vars(split_real_name(g)[0] for g in a.poly.variables())
        return Atom(real_poly_to_term(a.poly, ctx), ZERO, a.rel)
    return map_atoms(psi, conv)


# -- backends ------------------------------------------------------------------------

@dataclass(frozen=True)
class Backend:
    """``builtin`` virtual substitution or an external command."""
    command: str | None = None
    timeout: float | None = None

    @classmethod
    def parse(cls, spec: str, timeout: float | None = None) -> Backend:
        if spec == 'builtin':
            return cls(None, timeout)
        if spec.startswith('exec:') and spec[5:].strip():
            return cls(spec[5:].strip(), timeout)
        raise ValueError(f'unknown backend {spec!r}; use builtin or exec:<command>')

    @property
    def name(self) -> str:
        return 'builtin' if self.command is None else f'exec:{self.command}'

    def eliminate(self, psi: Formula, assumptions: Sequence[Formula]) -> Formula:
        if self.command is None:
            return vs_eliminate(psi, assumptions)
        from .realqe.external import run_external
        return run_external(psi, self.command, self.timeout)


BUILTIN = Backend()


# -- jobs ----------------------------------------------------------------------------

@dataclass
class QeJob:
    input: Formula
    assumptions: list[Formula] = field(default_factory=list)
    backend: Backend = BUILTIN
    output_nf: NF = 'conjugate'
    lenient: bool = False
    stats: dict = field(default_factory=dict)


def _real_variables(assumptions: Iterable[Formula]) -> set[str]:
    """Variables ``v`` with ``Im(v) == 0`` among the assumptions."""
    out = set()
    for a in assumptions:
        if not isinstance(a, Atom) or a.rel is not RelOp.EQ:
            continue
        p1, p2 = atom_difference(a)
        if not p2.is_zero() or len(p1) != 1 or p1.degree() != 1:
            continue
        (g,) = p1.variables()
        split = split_real_name(g)
        if split and split[1] == 'im':
            out.add(split[0])
    return out


def _conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return [b for a in f.args for b in _conjuncts(a)]
    if isinstance(f, Top):
        return []
    return [f]


def real_assumptions(assumptions: Sequence[Formula], lenient: bool = False) -> list[Formula]:
    out = []
    for a in assumptions:
        out.extend(_conjuncts(to_real_nf(a, lenient)))
    return out


def qe(job: QeJob) -> Formula:
    """Quantifier-free equivalent of ``job.input`` under ``job.assumptions``."""
    stats = job.stats
    stats.setdefault('backend_calls', 0)
    t0 = time.perf_counter()
    phi = prenexify(job.input)
    free = set(free_vars(phi))
    bound = set(bound_vars(phi))
    for a in job.assumptions:
        clash = set(free_vars(a)) & bound
        if clash:
            raise ContextError(f'assumption mentions bound variables {sorted(clash)}')
    real_vars = _real_variables(job.assumptions) & free
    assume = real_assumptions(job.assumptions, job.lenient)
    phi_r = to_real_nf(phi, job.lenient, real_vars)
    psi, m = purify(phi_r)
    t1 = time.perf_counter()
    stats['backend_calls'] += 1
    result = job.backend.eliminate(psi, assume)
    t2 = time.perf_counter()
    result = polish(simplify_real(result, assume), assume)
    back = unpurify(result, m)
    out = canonical_order(reinterpret_formula(back, job.output_nf))
    t3 = time.perf_counter()
    stats['prepare_seconds'] = t1 - t0
    stats['backend_seconds'] = t2 - t1
    stats['finish_seconds'] = t3 - t2
    stats['wall_seconds'] = t3 - t0
    return out


def decide(theta: Formula, backend: Backend = BUILTIN, lenient: bool = False) -> bool:
    free = free_vars(theta)
    if free:
        raise FreeVariableError(f'not a sentence; free variables {list(free)}')
    result = qe(QeJob(theta, backend=backend, lenient=lenient))
    if isinstance(result, Top) or result == And(()):
        return True
    if isinstance(result, Bot) or result == Or(()):
        return False
    raise IncompleteSimplification(f'sentence reduced to {result}')
