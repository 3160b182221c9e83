import random

import pytest

from syzkit.lattice_fan import matmul

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def random_gl2z(rng: random.Random, steps: int = 6):
    """Random element of GL(2, Z) as a product of elementary matrices."""
    A = ((1, 0), (0, 1))
    for _ in range(steps):
        k = rng.randint(-3, 3)
        E = rng.choice([((1, k), (0, 1)), ((1, 0), (k, 1)), ((0, 1), (1, 0)), ((-1, 0), (0, 1))])
        A = matmul(E, A)
    return A


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, desc = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {desc}")
