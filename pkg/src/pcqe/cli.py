"""Command-line interface: ``pcqe solve``, ``pcqe decide`` and ``pcqe corpus``."""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .formulas import RealnessError
from .parser import ParseError, parse
from .pipeline import (
    Backend, FreeVariableError, IncompleteSimplification, NameCollision, QeJob,
    decide, qe)
from .printer import print_formula
from .realqe.external import BackendError
from .realqe.vs import DegreeTooHigh
from .terms import ContextError

EXIT_OK, EXIT_USER, EXIT_BACKEND, EXIT_FALSE = 0, 1, 2, 3

HEADERS = ('nf', 'assume', 'backend', 'lenient')


class ProblemFileError(ValueError):
    pass


@dataclass
class ProblemFile:
    formula: str
    assume: list[str] = field(default_factory=list)
    options: dict[str, str] = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str) -> ProblemFile:
        """Header lines ``# key: value`` followed by the formula."""
        assume, options, body = [], {}, []
        for lineno, line in enumerate(text.splitlines(), 1):
            stripped = line.strip()
            if not body and stripped.startswith('#'):
                key, sep, value = stripped[1:].partition(':')
                key, value = key.strip(), value.strip()
                if not sep or key not in HEADERS:
                    raise ProblemFileError(f'line {lineno}: unknown header {stripped!r}')
                if key == 'assume':
                    assume.append(value)
                else:
                    options[key] = value
            elif stripped or body:
                body.append(line)
        return cls('\n'.join(body).strip(), assume, options)


@dataclass
class RunReport:
    result: str
    wall_seconds: float
    backend: str
    backend_calls: int
    nf_used: str


def _truthy(value: str) -> bool:
    if value.lower() in ('1', 'true', 'yes', 'on'):
        return True
    if value.lower() in ('0', 'false', 'no', 'off', ''):
        return False
    raise ProblemFileError(f'expected a boolean, got {value!r}')


def _read(path: str) -> str:
    if path == '-':
        return sys.stdin.read()
    with open(path, encoding='utf-8') as fh:
        return fh.read()


def _job_from(args, problem: ProblemFile) -> QeJob:
    nf = args.nf or problem.options.get('nf', 'conjugate')
    if nf not in ('conjugate', 'cartesian'):
        raise ProblemFileError(f'unknown normal form {nf!r}')
    backend = Backend.parse(args.backend or problem.options.get('backend', 'builtin'), args.timeout)
    lenient = args.lenient or _truthy(problem.options.get('lenient', 'false'))
    assumptions = [parse(a) for a in problem.assume + list(args.assume or [])]
    return QeJob(parse(problem.formula), assumptions, backend, nf, lenient)


def _run(fn, args) -> int:
    try:
        return fn(args)
    except (ParseError, ProblemFileError, RealnessError, FreeVariableError, ContextError,
            NameCollision, OSError, ValueError) as exc:
        print(f'error: {type(exc).__name__}: {exc}', file=sys.stderr)
        return EXIT_USER
    except (BackendError, TimeoutError, DegreeTooHigh) as exc:
        print(f'backend error: {type(exc).__name__}: {exc}', file=sys.stderr)
        return EXIT_BACKEND
    except IncompleteSimplification as exc:
        print(f'internal error: {exc}', file=sys.stderr)
        return EXIT_BACKEND


def cmd_solve(args) -> int:
    problem = ProblemFile.parse(_read(args.path))
    job = _job_from(args, problem)
    t0 = time.perf_counter()
    result = qe(job)
    report = RunReport(print_formula(result), time.perf_counter() - t0, job.backend.name,
                       job.stats.get('backend_calls', 0), job.output_nf)
    if args.json:
        print(json.dumps(asdict(report)))
    else:
        print(report.result)
    return EXIT_OK


def cmd_decide(args) -> int:
    problem = ProblemFile.parse(_read(args.path))
    job = _job_from(args, problem)
    if job.assumptions:
        raise ProblemFileError('decide takes a sentence without assumptions')
    t0 = time.perf_counter()
    truth = decide(job.input, job.backend, job.lenient)
    if args.json:
        print(json.dumps({'result': 'true' if truth else 'false',
                          'wall_seconds': time.perf_counter() - t0,
                          'backend': job.backend.name}))
    else:
        print('true' if truth else 'false')
    return EXIT_OK if truth else EXIT_FALSE


def _corpus_task(payload):
    from .corpus import EXAMPLES, run_example
    key, backend, points, seed = payload
    ex = next(e for e in EXAMPLES if e.key == key)
    return run_example(ex, backend, points, seed)


def cmd_corpus(args) -> int:
    from .corpus import select
    examples = select(args.filter, include_optional=args.optional)
    if not examples:
        print(f'no example matches {args.filter!r}', file=sys.stderr)
        return EXIT_USER
    backend = Backend.parse(args.backend or 'builtin', args.timeout)
    tasks = [(ex.key, backend, args.points, args.seed) for ex in examples]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_corpus_task, tasks))
    else:
        results = [_corpus_task(t) for t in tasks]
    rows = []
    for r in results:
        ex = r.example
        nf = args.nf or ex.nf
        status = 'pass' if r.passed else 'FAIL'
        rows.append({'number': ex.number, 'example': ex.title, 'nf': nf, 'status': status,
                     'seconds': round(r.seconds, 3), 'result': r.result, 'error': r.error})
    if args.json:
        print(json.dumps({'seed': args.seed, 'points': args.points, 'rows': rows}))
    else:
        width = max(len(r['example']) for r in rows)
        print(f'{"#":>2}  {"example":<{width}}  {"normal form":<11}  {"status":<6}  time (s)')
        for r in rows:
            print(f'{r["number"]:>2}  {r["example"]:<{width}}  {r["nf"]:<11}  {r["status"]:<6}  '
                  f'{r["seconds"]:.3f}')
            if r['error']:
                print(f'    {r["error"]}')
        print(f'sampling seed {args.seed}, {args.points} points per example')
    return EXIT_OK if all(r.passed for r in results) else EXIT_USER


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--nf', choices=('conjugate', 'cartesian'))
    common.add_argument('--backend', help='builtin or exec:<command>')
    common.add_argument('--assume', action='append', metavar='ATOM')
    common.add_argument('--lenient', action='store_true',
                        help='treat ordering atoms with non-real sides as false')
    common.add_argument('--json', action='store_true')
    common.add_argument('--timeout', type=float, help='external backend budget in seconds')
    common.add_argument('--seed', type=int, default=0, help='seed of the sampling oracle')

    ap = argparse.ArgumentParser(prog='pcqe', description=__doc__)
    sub = ap.add_subparsers(dest='command', required=True)
    p = sub.add_parser('solve', parents=[common], help='eliminate quantifiers')
    p.add_argument('path', nargs='?', default='-')
    p.set_defaults(fn=cmd_solve)
    p = sub.add_parser('decide', parents=[common], help='decide a sentence')
    p.add_argument('path', nargs='?', default='-')
    p.set_defaults(fn=cmd_decide)
    p = sub.add_parser('corpus', parents=[common], help='run the bundled examples')
    p.add_argument('filter', nargs='?')
    p.add_argument('--points', type=int, default=1000)
    p.add_argument('--jobs', type=int, default=1)
    p.add_argument('--optional', action='store_true', help='include optional examples')
    p.set_defaults(fn=cmd_corpus)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return _run(args.fn, args)


if __name__ == '__main__':
    sys.exit(main())
