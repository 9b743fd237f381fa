"""Acceptance criteria; the conftest prints one PASS/FAIL line per criterion."""
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

from pcqe.corpus import EXAMPLES, cauchy_schwarz, orthogonality, orthogonality_expected
from pcqe.formulas import is_quantifier_free
from pcqe.parser import parse
from pcqe.pipeline import Backend, QeJob, decide, qe
from pcqe.printer import print_formula
from pcqe.reinterpret import build_cost_graph, mcpec, reinterpret_formula
from pcqe.sampling import equivalent_by_sampling

SEED = 20261016
REFERENCE = Backend.parse(f'exec:{sys.executable} -m pcqe.realqe.reference_backend', 1800)


def example(key):
    return next(e for e in EXAMPLES if e.key == key)


def timed(job):
    t0 = time.perf_counter()
    out = qe(job)
    return out, time.perf_counter() - t0


def sampled(out, expected, assumptions=(), points=1000):
    verdict = equivalent_by_sampling(out, parse(expected), assumptions, points, SEED)
    return verdict.equivalent, f'{verdict.points}/{points} points, seed {SEED}'


def equivalence_sentence(out, expected, variables, assumptions=()):
    body = f'({print_formula(out)}) <-> ({expected})'
    if assumptions:
        body = f'({" and ".join(assumptions)}) -> ({body})'
    return parse(''.join(f'forall {v} . ' for v in variables) + body)


def test_criterion_1_cartesian_coordinates(criterion):
    t0 = time.perf_counter()
    truth = decide(parse(example('cartesian-coordinates').formula))
    seconds = time.perf_counter() - t0
    assert criterion(1, 'decide is true in < 10 s', truth and seconds < 10, f'{truth}, {seconds:.2f} s')


def test_criterion_2_roots_of_unity(criterion):
    out1, s1 = timed(example('roots-of-unity-1').job())
    ok1 = criterion(2, 'phi1 is T in < 60 s', print_formula(out1) == 'T' and s1 < 60,
                    f'{print_formula(out1)}, {s1:.2f} s')
    ex = example('roots-of-unity-2')
    out2, s2 = timed(ex.job())
    text = print_formula(out2)
    ok2 = criterion(2, 'phi2 syntactic match in < 60 s', text == ex.expected and s2 < 60,
                    f'{text}, {s2:.2f} s')
    eq, detail = sampled(out2, ex.expected)
    ok3 = criterion(2, 'phi2 sampler equivalence', eq, detail)
    assert ok1 and ok2 and ok3


def test_criterion_3_geometry_counterexample(criterion):
    out, seconds = timed(example('geometry-counterexample').job())
    assert criterion(3, 'F in < 10 s', print_formula(out) == 'F' and seconds < 10,
                     f'{print_formula(out)}, {seconds:.2f} s')


@pytest.mark.slow
@pytest.mark.parametrize('n, budget', [(3, 600), (10, 600)])
def test_criterion_4_orthogonality(criterion, n, budget):
    out, seconds = timed(QeJob(parse(orthogonality(n)), []))
    text = print_formula(out)
    assert criterion(4, f'n = {n} exact', text == orthogonality_expected(n) and seconds < budget,
                     f'{seconds:.2f} s')


@pytest.mark.parametrize('n', [1, 2])
def test_criterion_5_cauchy_schwarz(criterion, n):
    out, seconds = timed(QeJob(parse(cauchy_schwarz(n)), []))
    assert criterion(5, f'n = {n} builtin', print_formula(out) == 'T', f'{seconds:.2f} s')


@pytest.mark.slow
def test_criterion_5_cauchy_schwarz_optional_n3(criterion):
    out, seconds = timed(QeJob(parse(cauchy_schwarz(3)), []))
    assert criterion(5, 'n = 3 builtin (optional)', print_formula(out) == 'T', f'{seconds:.2f} s')


@pytest.mark.slow
@pytest.mark.skipif(not os.environ.get('PCQE_OPTIONAL'),
                    reason='optional; set PCQE_OPTIONAL=1 (needs well over 20 minutes)')
def test_criterion_5_cauchy_schwarz_optional_n4(criterion):
    out, seconds = timed(QeJob(parse(cauchy_schwarz(4)), [], REFERENCE))
    assert criterion(5, 'n = 4 external (optional)', print_formula(out) == 'T', f'{seconds:.2f} s')


@pytest.mark.parametrize('key', ['self-adjoint-1', 'self-adjoint-2'])
def test_criterion_6_self_adjoint(criterion, key):
    ex = example(key)
    out = qe(ex.job())
    eq, detail = sampled(out, ex.expected)
    ok1 = criterion(6, f'{key} sampler equivalence', eq, detail)
    truth = decide(equivalence_sentence(out, ex.expected, ['a11', 'a12', 'a21', 'a22']))
    ok2 = criterion(6, f'{key} decided equivalence', truth)
    assert ok1 and ok2


def test_criterion_7_density(criterion):
    ex = example('density')
    out = qe(ex.job())
    ok1 = criterion(7, 'quantifier-free', is_quantifier_free(out))
    eq, detail = sampled(out, ex.expected, points=2000)
    ok2 = criterion(7, 'sampler equivalence', eq, detail)
    truth = decide(equivalence_sentence(out, ex.expected, ['a', 'b']))
    ok3 = criterion(7, 'decided equivalence', truth)
    assert ok1 and ok2 and ok3


def test_criterion_8_rc_high_pass(criterion):
    ex = example('rc-high-pass')
    job = ex.job()
    out = qe(job)
    eq, detail = sampled(out, ex.expected, job.assumptions)
    ok1 = criterion(8, 'sampler equivalence under the assumptions', eq, detail)
    truth = decide(equivalence_sentence(out, ex.expected, ['R', 'C', 'g'], ex.assume))
    ok2 = criterion(8, 'decided equivalence under the assumptions', truth)
    assert ok1 and ok2


def test_criterion_9_active_rc(criterion):
    out, seconds = timed(example('active-rc').job())
    assert criterion(9, 'T with the builtin backend', print_formula(out) == 'T', f'{seconds:.2f} s')


WORKED = [parse(t) for t in ('Re(x) == 0', 'Im(x) == 0', 'Re(y) == 0')]


def test_criterion_10_cover(criterion):
    g = build_cost_graph(WORKED)
    edges = {(0, 1): 3, (1, 2): 10, (0, 2): 13}
    ok1 = criterion(10, 'edge costs (3, 10, 13)', g.edge_cost == edges, str(g.edge_cost))
    cover = mcpec(g)
    ok2 = criterion(10, 'cover is the edge {Re(x) == 0, Im(x) == 0}', cover.selected == {(0, 1)},
                    str(cover.selected))
    out = reinterpret_formula(parse('Re(x) == 0 and Im(x) == 0 and Re(y) == 0 and Im(y) > 0'))
    got = {print_formula(a) for a in out.args}
    want = {'x == 0', 'y + conj(y) == 0', 'I*conj(y) - I*y > 0'}
    ok3 = criterion(10, 'reinterpreted conjunction', got == want, ' and '.join(sorted(got)))
    assert ok1 and ok2 and ok3


@pytest.mark.xfail(strict=True, reason='no single symbol count yields vertex costs 6, 6, 6 '
                   'together with edge costs 3, 10, 13; x - conj(x) == 0 counts 7')
def test_criterion_10_vertex_costs(criterion):
    g = build_cost_graph(WORKED)
    assert criterion(10, 'vertex costs (6, 6, 6)', g.vertex_cost == (6, 6, 6), str(g.vertex_cost))


PROPERTY_SUITES = {
    'NF uniqueness (1000 terms)': 'test_terms.py::test_nf_uniqueness_under_rewrites',
    'NF soundness (1000 terms x 20)': 'test_terms.py::test_nf_soundness',
    'real-NF preservation (500 x 20)': 'test_formulas.py::test_real_nf_preserves_semantics',
    'purification preserves truth (300 x 20)': 'test_pipeline.py::test_purification_preserves_truth',
    'MCPEC brute force (200 graphs, |V| <= 8)': 'test_reinterpret.py::test_mcpec_is_optimal',
    'matching brute force (|E| <= 12)': 'test_reinterpret.py::test_matching_brute_force',
    'reinterpretation preservation (500 x 20)':
        'test_reinterpret.py::test_reinterpretation_preserves_semantics',
    'VS sampling soundness (300 formulas)': 'test_vs.py::test_sampling_soundness',
}


@pytest.mark.slow
@pytest.mark.parametrize('label', list(PROPERTY_SUITES))
def test_criterion_11_property_suites(criterion, label):
    here = Path(__file__).parent
    proc = subprocess.run([sys.executable, '-m', 'pytest', '-q', '-p', 'no:cacheprovider',
                           str(here / PROPERTY_SUITES[label])],
                          capture_output=True, text=True, cwd=here.parent)
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    assert criterion(11, label, proc.returncode == 0, summary)
