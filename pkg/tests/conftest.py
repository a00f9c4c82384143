import numpy as np
import pytest

ACCEPTANCE_LINES: list = []


def record_acceptance(number: int, passed: bool, detail: str) -> str:
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def family3():
    from fdapprox.limit import build_family
    from fdapprox.scheme import build_scheme, validate_params
    return build_family(build_scheme(validate_params([0, 3, 3, 3], [0, 0, 0, 0], 3)))
