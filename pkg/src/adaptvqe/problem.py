"""A qubit Hamiltonian bundled with its reference determinant and exact baseline."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .fermion import build_qubit_hamiltonian
from .fci import fci_ground_state
from .integrals import (
    MolecularIntegrals,
    SpinOrbitalHamiltonian,
    hf_determinant,
    hf_energy,
    read_fcidump,
    to_spin_orbital,
)
from .pauli import PauliSum

_BOND = re.compile(r"(\d+(?:\.\d+)?)$")

FIXTURE_DIR = Path(__file__).parent / "data" / "fixtures"


@dataclass
class MolecularProblem:
    hamiltonian: PauliSum
    reference_mask: int
    n_electrons: int
    label: str = ""
    bond_length: float | None = None
    integrals: MolecularIntegrals | None = field(default=None, repr=False)
    spin_orbital: SpinOrbitalHamiltonian | None = field(default=None, repr=False)
    _e_hf: float | None = field(default=None, repr=False)
    _e_fci: float | None = field(default=None, repr=False)

    @property
    def n_qubits(self) -> int:
        return self.hamiltonian.n_qubits

    @classmethod
    def from_integrals(cls, m: MolecularIntegrals, label: str = "") -> "MolecularProblem":
        so = to_spin_orbital(m)
        match = _BOND.search(label)
        return cls(
            hamiltonian=build_qubit_hamiltonian(so),
            reference_mask=hf_determinant(m),
            n_electrons=m.n_electrons,
            label=label,
            bond_length=float(match.group(1)) if match else None,
            integrals=m,
            spin_orbital=so,
        )

    @classmethod
    def from_fcidump(cls, path) -> "MolecularProblem":
        label = Path(path).name
        for suffix in (".fcidump", ".FCIDUMP"):
            if label.endswith(suffix):
                label = label[: -len(suffix)]
        return cls.from_integrals(read_fcidump(path), label)

    @property
    def e_hf(self) -> float:
        if self._e_hf is None:
            self._e_hf = hf_energy(self.integrals)
        return self._e_hf

    @property
    def e_fci(self) -> float:
        if self._e_fci is None:
            self._e_fci = fci_ground_state(self.spin_orbital, self.n_electrons, self.integrals.ms2).energy
        return self._e_fci


def fixture_paths(pattern: str = "*.fcidump") -> list[Path]:
    return sorted(FIXTURE_DIR.glob(pattern))


def load_fixture(name: str) -> MolecularProblem:
    path = FIXTURE_DIR / (name if name.endswith(".fcidump") else name + ".fcidump")
    if not path.exists():
        raise FileNotFoundError(os.fspath(path))
    return MolecularProblem.from_fcidump(path)
