import sys

import pytest

from pcqe.formulas import to_real_formula
from pcqe.parser import parse
from pcqe.printer import print_formula
from pcqe.realqe.external import TIMEOUT_ENV, BackendError, backend_timeout, run_external

PY = sys.executable
REFERENCE = [PY, '-m', 'pcqe.realqe.reference_backend']


def real(text):
    return to_real_formula(parse(text))


def test_reference_backend_answers_false():
    assert print_formula(run_external(real('exists x . x^2 + 1 == 0'), REFERENCE)) == 'F'


def test_reference_backend_with_free_variables():
    out = run_external(real('exists x . a*x + b == 0'), REFERENCE)
    assert print_formula(out) == 'a != 0 or b == 0'


def test_command_string_is_split():
    cmd = f'{PY} -m pcqe.realqe.reference_backend'
    assert print_formula(run_external(real('exists x . x == 1'), cmd)) == 'T'


def test_passthrough_returns_quantifier_free_input():
    psi = real('a*b - 1 > 0 or c == 0')
    out = run_external(psi, REFERENCE + ['--passthrough'])
    assert out == psi


def test_malformed_output():
    with pytest.raises(BackendError, match='unreadable'):
        run_external(real('exists x . x == 1'), [PY, '-c', 'print("((")'])


def test_quantified_answer_is_rejected():
    with pytest.raises(BackendError):
        run_external(real('exists x . x == 1'), [PY, '-c', 'print("exists y . y == 0")'])


def test_nonzero_exit_reports_stderr():
    with pytest.raises(BackendError, match='boom'):
        run_external(real('x == 1'), [PY, '-c', 'import sys; sys.stderr.write("boom"); sys.exit(4)'])


def test_missing_program():
    with pytest.raises(BackendError):
        run_external(real('x == 1'), ['/nonexistent/backend'])


def test_timeout(monkeypatch):
    with pytest.raises(TimeoutError):
        run_external(real('x == 1'), [PY, '-c', 'import time; time.sleep(5)'], timeout=0.3)
    monkeypatch.setenv(TIMEOUT_ENV, '0.3')
    assert backend_timeout() == 0.3
    with pytest.raises(TimeoutError):
        run_external(real('x == 1'), [PY, '-c', 'import time; time.sleep(5)'])


def test_default_timeout(monkeypatch):
    monkeypatch.delenv(TIMEOUT_ENV, raising=False)
    assert backend_timeout() == 300.0
