"""Real QE through an external process speaking the text syntax on stdin/stdout."""
from __future__ import annotations

import os
import shlex
import subprocess

from ..formulas import Formula, is_quantifier_free, to_real_formula
from ..parser import ParseError, parse
from ..printer import print_formula

TIMEOUT_ENV = 'PCQE_BACKEND_TIMEOUT_SECS'
DEFAULT_TIMEOUT = 300.0


class BackendError(RuntimeError):
    """The external backend failed or answered with something unusable."""


def backend_timeout(timeout: float | None = None) -> float:
    if timeout is not None:
        return float(timeout)
    return float(os.environ.get(TIMEOUT_ENV, DEFAULT_TIMEOUT))


def run_external(psi: Formula, cmd: str | list[str], timeout: float | None = None) -> Formula:
    """Send ``psi`` to ``cmd`` and parse its quantifier-free answer."""
    argv = shlex.split(cmd) if isinstance(cmd, str) else list(cmd)
    request = print_formula(psi) + '\n'
    try:
        proc = subprocess.run(argv, input=request, capture_output=True, text=True,
                              timeout=backend_timeout(timeout))
    except subprocess.TimeoutExpired:
        raise TimeoutError(f'backend {argv[0]} exceeded {backend_timeout(timeout)} s') from None
    except OSError as exc:
        raise BackendError(f'cannot start backend {argv[0]}: {exc}') from None
    if proc.returncode != 0:
        raise BackendError(f'backend exited with status {proc.returncode}: {proc.stderr.strip()[-500:]}')
    try:
        answer = to_real_formula(parse(proc.stdout, allow_reserved=True))
    except (ParseError, ValueError) as exc:
        raise BackendError(f'unreadable backend output: {exc}') from None
    if not is_quantifier_free(answer):
        raise BackendError('backend answer still contains quantifiers')
    return answer
