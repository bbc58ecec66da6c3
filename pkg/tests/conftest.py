import numpy as np
import pytest

from sepcone.lorentz import random_orthogonal

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record a pass/fail line for an acceptance criterion."""

    def record(number: int, ok: bool, detail: str):
        _ACCEPTANCE[number] = (bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def random_spd(rng: np.random.Generator, k: int, low: float = 0.2, high: float = 3.0) -> np.ndarray:
    Q = random_orthogonal(rng, k)
    return (Q * rng.uniform(low, high, k)) @ Q.T


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
