import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from toposq.context import basis_context, build_poset  # noqa: E402

E = np.eye(3)
DEMO_OPERATOR = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 5]], dtype=complex)


def unit(i, n=3):
    return np.eye(n, dtype=complex)[:, i]


def proj(*idx, n=3):
    return np.diag([1.0 if i in idx else 0.0 for i in range(n)]).astype(complex)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def diag3():
    return basis_context(E)


@pytest.fixture
def poset3(diag3):
    """The four-context poset below the standard basis of C^3."""
    return build_poset([diag3])


@pytest.fixture
def named3(poset3):
    """Ids of V (top), V1 = {E11, E22+E33}, V2 = {E22, E11+E33}, V3 = {E33, E11+E22}."""
    from toposq.context import Context

    def ctx(a, b):
        return poset3.id_of(Context((a, b)))

    return {
        "V": poset3.id_of(basis_context(E)),
        "V1": ctx(proj(0), proj(1, 2)),
        "V2": ctx(proj(1), proj(0, 2)),
        "V3": ctx(proj(2), proj(0, 1)),
    }


_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid and report.when == "call":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome, dict(report.user_properties)))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, props in _acceptance:
        status = "PASS" if outcome == "passed" else "FAIL"
        extra = " ".join(f"{k}={v}" for k, v in props.items())
        terminalreporter.write_line(f"[{status}] {name} {extra}".rstrip())
