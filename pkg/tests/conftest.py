import functools

import pytest

from pgl1d.quotient import QuotientContext


@functools.lru_cache(maxsize=None)
def _ctx(k: int, r: int) -> QuotientContext:
    return QuotientContext(k, r)


@pytest.fixture
def ctx_of():
    """Shared contexts; building generators and tables is not free."""
    return _ctx


@functools.lru_cache(maxsize=None)
def _census(k: int, r: int):
    from pgl1d.census import full_partition, report_from_partition
    ctx = _ctx(k, r)
    part = full_partition(ctx)
    return part, report_from_partition(ctx, part, {})


@pytest.fixture
def census_of():
    """(partition, report) of the full group U1/Uk, computed once per session."""
    return _census


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
