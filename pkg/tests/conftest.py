import math

import numpy as np
import pytest
from hypothesis import settings

from spectral_census.kernels import HFunction, KernelSpec, builtin_kernel, difference_kernel

settings.register_profile("census", deadline=None, max_examples=60)
settings.load_profile("census")


def custom_kernel():
    """A real kernel with non-constant diagonal: -exp(-(x-y)^2) + 0.5 x y."""
    def evaluate(x, y):
        return -np.exp(-np.sum((x - y) ** 2, axis=-1)) + 0.5 * np.sum(x * y, axis=-1)

    return KernelSpec(1, evaluate, True, "custom")


def two_atom_kernel():
    """h(theta) = 1 - cos(pi theta): zero at 0, 2 at theta = 1."""
    return difference_kernel(HFunction.from_dict({"name": "cos", "dim": 1, "amplitude": -1.0,
                                                  "freq": [math.pi], "offset": 1.0}))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def mexican_hat():
    return builtin_kernel("mexican-hat", dim=1)


ACCEPTANCE_LINES = []


def record_acceptance(label: str, ok: bool, detail: str) -> None:
    """Log a criterion verdict; the lines are printed in the terminal summary."""
    line = f"{'PASS' if ok else 'FAIL'}  criterion {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
