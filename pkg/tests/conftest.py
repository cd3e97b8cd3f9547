"""Shared pytest configuration: collects the acceptance verdicts and prints them at the end."""

import pytest

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def verdict():
    """``verdict(number, title)`` returns a context manager that records PASS/FAIL and timing."""
    import contextlib
    import time

    @contextlib.contextmanager
    def record(number: int, title: str, limit: float | None = None):
        start = time.perf_counter()
        ok = False
        try:
            yield
            elapsed = time.perf_counter() - start
            if limit is not None and elapsed >= limit:
                raise AssertionError(f"criterion {number} took {elapsed:.2f} s, limit {limit} s")
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            budget = f" (limit {limit:g} s)" if limit is not None else ""
            line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}  [{elapsed:.2f} s{budget}]"
            ACCEPTANCE[number] = (ok, line)
            print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number][1])
