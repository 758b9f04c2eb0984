import numpy as np
import pytest

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def record_criterion(number: int, title: str, ok: bool, detail: str = ""):
    ACCEPTANCE[number] = (title, bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:2d}. {title}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_poly_coeffs(rng, deg, radius=1.0):
    """Coefficients uniform in the disk of the given radius."""
    r = radius * np.sqrt(rng.uniform(size=deg + 1))
    return r * np.exp(2j * np.pi * rng.uniform(size=deg + 1))
