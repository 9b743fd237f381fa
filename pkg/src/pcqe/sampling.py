"""Random exact assignments and a sampling test for equivalence of
quantifier-free formulas."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .formulas import Atom, Formula, RelOp, eval_qf, free_vars
from .numbers import GaussianRational
from .printer import atom_difference

_SPECIAL = [Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(2)]


def random_rational(rng: random.Random, sign: int = 0, bound: int = 6) -> Fraction:
    """Small rational, with a bias towards 0 and +-1; ``sign`` forces a strict sign."""
    r = rng.random()
    if r < 0.3:
        q = rng.choice(_SPECIAL)
    elif r < 0.65:
        den = rng.randint(1, 8)
        q = Fraction(rng.randint(-den, den), den)
    else:
        q = Fraction(rng.randint(-bound * 4, bound * 4), rng.randint(1, 4))
    if sign:
        q = abs(q) or Fraction(rng.randint(1, 4), rng.randint(1, 3))
        q = q if sign > 0 else -q
    return q


def random_gaussian(rng: random.Random) -> GaussianRational:
    return GaussianRational(random_rational(rng), random_rational(rng))


def _component_hints(assumptions: Iterable[Formula]) -> dict[str, int | None]:
    """``z__re``/``z__im`` -> forced sign (``0`` means the part is zero) from simple atoms."""
    hints = {}
    for a in assumptions:
        if not isinstance(a, Atom):
            continue
        try:
            p1, p2 = atom_difference(a)
        except Exception:
            continue
        if not p2.is_zero() or len(p1) != 1 or p1.degree() != 1:
            continue
        ((mono, coeff),) = list(p1)
        ((g, _),) = mono
        s = 1 if coeff > 0 else -1
        if a.rel is RelOp.EQ:
            hints[g] = 0
        elif a.rel in (RelOp.GT, RelOp.GE):
            hints[g] = s
        elif a.rel in (RelOp.LT, RelOp.LE):
            hints[g] = -s
    return hints


def sample_assignments(variables: Sequence[str], rng: random.Random,
                       assumptions: Sequence[Formula] = (), count: int = 100,
                       max_tries: int | None = None) -> list[dict[str, GaussianRational]]:
    """``count`` random assignments satisfying all assumption atoms."""
    hints = _component_hints(assumptions)
    out = []
    tries = 0
    max_tries = max_tries or count * 50
    while len(out) < count and tries < max_tries:
        tries += 1
        sigma = {}
        for z in variables:
            parts = []
            for comp in (f'{z}__re', f'{z}__im'):
                h = hints.get(comp)
                parts.append(Fraction(0) if h == 0 else random_rational(rng, h or 0))
            sigma[z] = GaussianRational(*parts)
        if all(eval_qf(a, sigma) for a in assumptions):
            out.append(sigma)
    return out


@dataclass
class SamplingVerdict:
    equivalent: bool
    points: int
    seed: int
    counterexample: dict | None = None


def equivalent_by_sampling(f: Formula, g: Formula, assumptions: Sequence[Formula] = (),
                           points: int = 1000, seed: int = 0) -> SamplingVerdict:
    """Compare two quantifier-free formulas on random points satisfying the assumptions.

    Fewer than ``points`` admissible assignments count as a failure.
    """
    names = sorted(set(free_vars(f)) | set(free_vars(g))
                   | {v for a in assumptions for v in free_vars(a)})
    rng = random.Random(seed)
    checked = 0
    for sigma in sample_assignments(names, rng, assumptions, points):
        checked += 1
        if eval_qf(f, sigma) != eval_qf(g, sigma):
            return SamplingVerdict(False, checked, seed, sigma)
    return SamplingVerdict(checked == points, checked, seed)
