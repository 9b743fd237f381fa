import pytest

ACCEPTANCE: list[tuple[int, str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one checked part of an acceptance criterion; returns the verdict."""
    def record(number: int, part: str, ok: bool, detail: str = '') -> bool:
        ACCEPTANCE.append((number, part, ok, detail))
        print(f'criterion {number} [{part}]: {"PASS" if ok else "FAIL"} {detail}'.rstrip())
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section('acceptance criteria')
    numbers = sorted({n for n, *_ in ACCEPTANCE})
    for n in numbers:
        parts = [(part, ok, detail) for m, part, ok, detail in ACCEPTANCE if m == n]
        verdict = 'PASS' if all(ok for _, ok, _ in parts) else 'FAIL'
        terminalreporter.write_line(f'criterion {n:>2}: {verdict}')
        for part, ok, detail in parts:
            terminalreporter.write_line(f'    {"ok  " if ok else "FAIL"} {part}  {detail}'.rstrip())
