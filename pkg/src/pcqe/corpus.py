"""The bundled examples with their expected results."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .parser import parse
from .pipeline import Backend, BUILTIN, QeJob, qe
from .printer import print_formula
from .sampling import equivalent_by_sampling


def inner_product(v: list[str], w: list[str]) -> str:
    """``sum v_i * conj(w_i)`` as text."""
    return ' + '.join(f'{a}*conj({b})' for a, b in zip(v, w))


def names(prefix: str, n: int) -> list[str]:
    return [f'{prefix}{i}' for i in range(1, n + 1)]


def forall(variables: list[str], body: str) -> str:
    return ''.join(f'forall {x} . ' for x in variables) + body


def orthogonality(n: int) -> str:
    v, w = names('v', n), names('w', n)
    return forall(w, f'{inner_product(v, w)} == 0')


def orthogonality_expected(n: int) -> str:
    return ' and '.join(f'{x} == 0' for x in names('v', n))


def cauchy_schwarz(n: int) -> str:
    v, w = names('v', n), names('w', n)
    vw = inner_product(v, w)
    return forall(w, f'({vw})*conj({vw}) <= ({inner_product(v, v)})*({inner_product(w, w)})')


def _matrix_times(vec: list[str]) -> list[str]:
    return [f'(a{i}1*{vec[0]} + a{i}2*{vec[1]})' for i in (1, 2)]


def self_adjoint_phi1() -> str:
    v, w = names('v', 2), names('w', 2)
    return forall(v + w, f'{inner_product(_matrix_times(v), w)} == {inner_product(v, _matrix_times(w))}')


def self_adjoint_phi2() -> str:
    v = names('v', 2)
    return forall(v, f'Im({inner_product(_matrix_times(v), v)}) == 0')


SELF_ADJOINT_EXPECTED = 'a11 - conj(a11) == 0 and a12 - conj(a21) == 0 and a22 - conj(a22) == 0'


def density() -> str:
    v = names('v', 2)
    av = ['(Re(a)*v1 + b*v2)', '(conj(b)*v1 + (1 - Re(a))*v2)']
    return forall(v, f'{inner_product(av, v)} >= 0')


RC_HIGH_PASS = 'forall s . Re(s) == 0 -> (R*C*s)*conj(R*C*s) < g^2*((R*C*s + 1)*conj(R*C*s + 1))'
RC_HIGH_PASS_ASSUME = ['Re(R) > 0', 'Im(R) == 0', 'Re(C) > 0', 'Im(C) == 0', 'Re(g) > 0', 'Im(g) == 0']

ACTIVE_RC_Q = 'G1*G9*G4*G6*G8 + G1*G9*G5*G7*G2*s + G1*G9*G7*G1*G2*s^2'
ACTIVE_RC = f'forall s . {ACTIVE_RC_Q} == 0 -> Re(s) < 0'
ACTIVE_RC_ASSUME = ([f'Re({x}) > 0' for x in names('G', 9) + ['C1', 'C2']]
                    + [f'Im({x}) == 0' for x in names('G', 9) + ['C1', 'C2']])


@dataclass(frozen=True)
class Example:
    key: str
    number: str
    title: str
    formula: str
    expected: str
    nf: str = 'conjugate'
    assume: tuple[str, ...] = ()
    builtin: bool = True
    optional: bool = False

    def job(self, backend: Backend = BUILTIN, nf: str | None = None) -> QeJob:
        return QeJob(parse(self.formula), [parse(a) for a in self.assume],
                     backend, nf or self.nf)


EXAMPLES: tuple[Example, ...] = (
    Example('cartesian-coordinates', '1', 'Cartesian coordinates',
            'forall z . exists x . exists y . Im(x) == 0 and Im(y) == 0 and z == x + I*y', 'T'),
    Example('roots-of-unity-1', '2', 'Roots of unity, phi1', 'exists z . z^2 + 1 == 0', 'T'),
    Example('roots-of-unity-2', '2', 'Roots of unity, phi2',
            'exists c . forall b . forall a . (a == d and b == c) or (a == c and b == 1) -> b == a^2',
            'd + 1 == 0 or d + I == 0 or d - 1 == 0 or d - I == 0'),
    Example('geometry-counterexample', '3', 'Counterexample for geometry provers',
            'forall x1 . forall x2 . x1^2 + x2^2 == 1 and x1 == 2 -> x2 == 1', 'F'),
    Example('orthogonality', '4', 'Orthogonality (n = 3)', orthogonality(3),
            orthogonality_expected(3)),
    Example('cauchy-schwarz-1', '5', 'Cauchy-Schwarz inequality (n = 1)', cauchy_schwarz(1), 'T'),
    Example('cauchy-schwarz-2', '5', 'Cauchy-Schwarz inequality (n = 2)', cauchy_schwarz(2), 'T'),
    Example('cauchy-schwarz-3', '5', 'Cauchy-Schwarz inequality (n = 3)', cauchy_schwarz(3), 'T',
            optional=True),
    Example('cauchy-schwarz-4', '5', 'Cauchy-Schwarz inequality (n = 4)', cauchy_schwarz(4), 'T',
            builtin=False, optional=True),
    Example('self-adjoint-1', '6', 'Self-adjoint matrices, phi1', self_adjoint_phi1(),
            SELF_ADJOINT_EXPECTED),
    Example('self-adjoint-2', '6', 'Self-adjoint matrices, phi2', self_adjoint_phi2(),
            SELF_ADJOINT_EXPECTED),
    Example('density', '7', 'Density matrices', density(),
            'Re(b)^2 + Im(b)^2 <= Re(a)*(1 - Re(a))', nf='cartesian'),
    Example('rc-high-pass', '8', 'Gain of passive RC high-pass filter', RC_HIGH_PASS,
            'Re(g)^2 - 1 >= 0', nf='cartesian', assume=tuple(RC_HIGH_PASS_ASSUME)),
    Example('active-rc', '9', 'Stability of active RC filter', ACTIVE_RC, 'T',
            assume=tuple(ACTIVE_RC_ASSUME)),
    Example('cover-example', '0', 'Worked reinterpretation example',
            'Re(x) == 0 and Im(x) == 0 and Re(y) == 0 and Im(y) > 0',
            'x == 0 and y + conj(y) == 0 and I*conj(y) - I*y > 0'),
)


def select(pattern: str | None, include_optional: bool = True) -> list[Example]:
    out = []
    for ex in EXAMPLES:
        if not include_optional and ex.optional:
            continue
        if pattern and pattern.lower() not in ex.key and pattern.lower() not in ex.title.lower():
            continue
        out.append(ex)
    return out


@dataclass
class CorpusResult:
    example: Example
    passed: bool
    seconds: float
    result: str | None = None
    error: str | None = None
    points: int = 0


def run_example(ex: Example, backend: Backend = BUILTIN, points: int = 1000,
                seed: int = 0) -> CorpusResult:
    t0 = time.perf_counter()
    try:
        job = ex.job(backend)
        out = qe(job)
    except Exception as exc:  # reported per example
        return CorpusResult(ex, False, time.perf_counter() - t0, error=f'{type(exc).__name__}: {exc}')
    seconds = time.perf_counter() - t0
    verdict = equivalent_by_sampling(out, parse(ex.expected), job.assumptions, points, seed)
    return CorpusResult(ex, verdict.equivalent, seconds, print_formula(out), points=verdict.points)
