"""Statevector VQE and ADAPT-VQE toolkit for small molecular Hamiltonians."""

from .adapt import AdaptConfig, AdaptResult, pool_gradient, run_adapt, run_qeb_adapt
from .ansatz import Ansatz, AnsatzElement, OperatorPool, build_hea, build_pool, build_uccsd
from .estimators import VQE, AdaptVQE
from .exceptions import AdaptVQEError
from .fci import dense_ground_energy, fci_ground_state
from .fermion import build_qubit_hamiltonian, jordan_wigner
from .integrals import MolecularIntegrals, parse_fcidump, read_fcidump, write_fcidump
from .pauli import PauliSum, PauliTerm
from .problem import MolecularProblem, load_fixture
from .sim import Statevector, expectation
from .vqe import run_vqe

__version__ = "0.1.0"

__all__ = [
    "AdaptConfig", "AdaptResult", "AdaptVQE", "AdaptVQEError", "Ansatz", "AnsatzElement", "MolecularIntegrals",
    "MolecularProblem", "OperatorPool", "PauliSum", "PauliTerm", "Statevector", "build_hea", "build_pool",
    "build_qubit_hamiltonian", "build_uccsd", "dense_ground_energy", "expectation", "fci_ground_state",
    "jordan_wigner", "load_fixture", "parse_fcidump", "pool_gradient", "read_fcidump", "run_adapt",
    "run_qeb_adapt", "run_vqe", "VQE", "write_fcidump",
]
