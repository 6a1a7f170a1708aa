from __future__ import annotations

import pytest

from ternary_cohomology.exactmath import kernels

ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    with kernels.using_backend(request.param):
        yield request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        text, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}")
