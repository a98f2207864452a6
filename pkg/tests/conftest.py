import numpy as np
import pytest

from adaptvqe.problem import MolecularProblem, fixture_paths, load_fixture

CHEMICAL_ACCURACY = 1.6e-3


@pytest.fixture(scope="session")
def h2():
    return load_fixture("h2_0.735")


@pytest.fixture(scope="session")
def h2_problems():
    return [MolecularProblem.from_fcidump(p) for p in fixture_paths("h2_*")]


@pytest.fixture(scope="session")
def lih_fc():
    return load_fixture("lih_fc_1.595")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_state(rng, n_qubits):
    v = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return v / np.linalg.norm(v)


# acceptance summary: one line per criterion, printed after the run
ACCEPTANCE_LINES: dict[str, str] = {}


def record_criterion(key: str, passed: bool, detail: str) -> bool:
    ACCEPTANCE_LINES[key] = f"{'PASS' if passed else 'FAIL'}  {key}: {detail}"
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
