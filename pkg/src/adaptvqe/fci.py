"""Exact ground states: Slater-Condon determinant-basis FCI and dense Pauli diagonalization.

The determinant path never touches the Pauli / Jordan-Wigner code, so the two
realizations of the Hamiltonian serve as mutual oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import ResourceError, SectorError
from .integrals import SpinOrbitalHamiltonian
from .pauli import DENSE_QUBIT_CAP, PauliSum

DENSE_SECTOR_LIMIT = 4096


@dataclass(frozen=True)
class SectorBasis:
    n_so: int
    n_electrons: int
    ms2: int
    determinants: tuple[int, ...]

    def __len__(self):
        return len(self.determinants)


@dataclass(frozen=True)
class FciResult:
    energy: float
    vector: np.ndarray
    basis: SectorBasis

    @property
    def dimension(self) -> int:
        return len(self.basis)


def sector_basis(n_so: int, n_electrons: int, ms2: int | None = 0) -> SectorBasis:
    """Determinants with ``n_electrons`` set bits and, unless ``ms2`` is None, fixed 2*S_z.

    Block spin ordering: the low ``n_so/2`` bits are alpha.
    """
    n = n_so // 2
    dets = []
    if ms2 is None:
        dets = [sum(1 << p for p in occ) for occ in combinations(range(n_so), n_electrons)]
    elif (n_electrons + ms2) % 2 == 0:
        n_alpha = (n_electrons + ms2) // 2
        n_beta = n_electrons - n_alpha
        if 0 <= n_alpha <= n and 0 <= n_beta <= n:
            for a in combinations(range(n), n_alpha):
                for b in combinations(range(n, n_so), n_beta):
                    dets.append(sum(1 << p for p in a + b))
    if not dets:
        raise SectorError(f"no determinants with {n_electrons} electrons and MS2={ms2} in {n_so} spin orbitals")
    return SectorBasis(n_so, n_electrons, ms2, tuple(sorted(dets)))


def _occupied(det: int) -> list[int]:
    out = []
    p = 0
    while det:
        if det & 1:
            out.append(p)
        det >>= 1
        p += 1
    return out


def _sign_annihilate(det: int, p: int) -> int:
    # a_p on an ordered determinant picks up (-1)^(occupied orbitals below p)
    return -1 if bin(det & ((1 << p) - 1)).count("1") % 2 else 1


def _excite(det: int, creators, annihilators) -> tuple[int, int]:
    """Apply ``a+_c1 a+_c2 ... a_a1 a_a2 ...`` (rightmost first); return (sign, det) or (0, 0)."""
    sign = 1
    for p in reversed(annihilators):
        if not det >> p & 1:
            return 0, 0
        sign *= _sign_annihilate(det, p)
        det ^= 1 << p
    for p in reversed(creators):
        if det >> p & 1:
            return 0, 0
        sign *= _sign_annihilate(det, p)
        det |= 1 << p
    return sign, det


def sector_hamiltonian(h: SpinOrbitalHamiltonian, basis: SectorBasis) -> np.ndarray:
    """Dense Hamiltonian matrix over ``basis`` from the Slater-Condon rules."""
    g = h.g_phys
    anti = g - g.transpose(0, 1, 3, 2)  # <pq||rs>
    dets = basis.determinants
    dim = len(dets)
    mat = np.zeros((dim, dim))
    occs = [_occupied(d) for d in dets]
    for x, (dx, ox) in enumerate(zip(dets, occs)):
        occ = np.array(ox)
        mat[x, x] = h.e_core + h.h_so[occ, occ].sum() + 0.5 * np.einsum("ijij->", anti[np.ix_(occ, occ, occ, occ)])
        for y in range(x):
            dy = dets[y]
            diff = dx ^ dy
            n_diff = bin(diff).count("1")
            if n_diff == 2:
                (m,) = _occupied(dx & diff)
                (p,) = _occupied(dy & diff)
                sign, out = _excite(dy, [m], [p])
                common = _occupied(dx & dy)
                value = h.h_so[m, p] + sum(anti[m, n, p, n] for n in common)
            elif n_diff == 4:
                m, n = _occupied(dx & diff)
                p, q = _occupied(dy & diff)
                sign, out = _excite(dy, [m, n], [q, p])
                value = anti[m, n, p, q]
            else:
                continue
            assert out == dx
            mat[x, y] = mat[y, x] = sign * value
    return mat


def fci_ground_state(h: SpinOrbitalHamiltonian, n_electrons: int, ms2: int | None = 0) -> FciResult:
    """Lowest eigenpair within the (N, S_z) sector.

    Dense ``eigh`` up to ``DENSE_SECTOR_LIMIT`` determinants, Lanczos above.
    """
    basis = sector_basis(h.n_so, n_electrons, ms2)
    mat = sector_hamiltonian(h, basis)
    if len(basis) <= DENSE_SECTOR_LIMIT:
        w, v = np.linalg.eigh(mat)
        energy, vec = float(w[0]), v[:, 0]
    else:
        w, v = spla.eigsh(sp.csr_matrix(mat), k=1, which="SA", tol=1e-12)
        energy, vec = float(w[0]), v[:, 0]
    return FciResult(energy, vec, basis)


def dense_ground_energy(h: PauliSum, max_qubits: int = DENSE_QUBIT_CAP) -> float:
    """Lowest eigenvalue of the full ``2^n`` matrix of a Hermitian PauliSum."""
    if h.n_qubits > max_qubits:
        raise ResourceError(f"{h.n_qubits} qubits exceeds dense cap of {max_qubits}")
    if h.n_qubits <= 10:
        return float(np.linalg.eigvalsh(h.to_dense(max_qubits))[0])
    w = spla.eigsh(h.to_sparse(), k=1, which="SA", tol=1e-12, return_eigenvectors=False)
    return float(w[0])


def pauli_sector_ground_energy(h: PauliSum, n_electrons: int, ms2: int | None = None) -> float:
    """Lowest eigenvalue of a qubit Hamiltonian restricted to computational-basis states of one sector."""
    basis = sector_basis(h.n_qubits, n_electrons, ms2)
    idx = np.array(basis.determinants)
    block = h.to_sparse()[idx][:, idx].toarray()
    if not np.allclose(block, block.conj().T, atol=1e-12):
        raise ValueError("restricted block is not Hermitian")
    if len(idx) <= DENSE_SECTOR_LIMIT:
        return float(np.linalg.eigvalsh(block)[0])
    return float(spla.eigsh(sp.csr_matrix(block), k=1, which="SA", tol=1e-12, return_eigenvectors=False)[0])
