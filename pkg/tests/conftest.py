import numpy as np
import pytest

from cayley_wrap.algebra import CdNumber


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_cd(rng, level, scale=1.0):
    return CdNumber(level, scale * rng.normal(size=1 << level))


def random_imaginary(rng, level, max_norm=1.0):
    c = rng.normal(size=1 << level)
    c[0] = 0.0
    c *= max_norm * rng.uniform() / np.linalg.norm(c)
    return CdNumber(level, c)


def dyadic(rng, size=None):
    """Random +-m * 2^e values; products of a few stay exact in binary64."""
    m = rng.integers(1, 16, size=size)
    e = rng.integers(-3, 4, size=size)
    s = rng.choice([-1.0, 1.0], size=size)
    return s * m * np.ldexp(1.0, e)


# one "ACn PASS|FAIL: ..." line per acceptance criterion, echoed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
