"""Second-quantized operators, the Jordan-Wigner map and UCCSD excitation lists."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DimensionError, OccupationError
from .integrals import SpinOrbitalHamiltonian
from .pauli import DEFAULT_TOLERANCE, PauliSum, _mul_letters, _PHASES

Factor = tuple[int, bool]  # (mode, is_creation)


class FermionOperator:
    """Sum of products of creation/annihilation operators.

    ``products`` is a list of ``(coeff, factors)`` where ``factors`` is an
    ordered tuple of ``(mode, dagger)`` pairs. No normal ordering is imposed.
    """

    def __init__(self, products: Iterable[tuple[complex, Sequence[Factor]]] = ()):
        self.products = [(complex(c), tuple((int(m), bool(d)) for m, d in f)) for c, f in products]

    @classmethod
    def create(cls, mode: int) -> "FermionOperator":
        return cls([(1.0, [(mode, True)])])

    @classmethod
    def annihilate(cls, mode: int) -> "FermionOperator":
        return cls([(1.0, [(mode, False)])])

    @classmethod
    def product(cls, *factors: Factor, coeff: complex = 1.0) -> "FermionOperator":
        return cls([(coeff, factors)])

    def dagger(self) -> "FermionOperator":
        return FermionOperator(
            (c.conjugate(), tuple((m, not d) for m, d in reversed(f))) for c, f in self.products
        )

    def __add__(self, other):
        return FermionOperator(self.products + other.products)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, FermionOperator):
            return FermionOperator(
                (ca * cb, fa + fb) for ca, fa in self.products for cb, fb in other.products
            )
        return FermionOperator((c * other, f) for c, f in self.products)

    def __rmul__(self, other):
        return self * other

    def max_mode(self) -> int:
        return max((m for _, f in self.products for m, _ in f), default=-1)

    def __repr__(self):
        parts = []
        for c, f in self.products:
            ops = " ".join(f"a{m}^" if d else f"a{m}" for m, d in f)
            parts.append(f"{c} [{ops}]")
        return " + ".join(parts) or "0"


@functools.lru_cache(maxsize=None)
def _ladder_terms(mode: int, dagger: bool, n_so: int) -> tuple[tuple[str, complex], ...]:
    # a_j^dagger -> (X_j - iY_j)/2 Z_{j-1}...Z_0 ;  a_j -> (X_j + iY_j)/2 Z_{j-1}...Z_0
    head = "Z" * mode
    tail = "I" * (n_so - mode - 1)
    sign = -1 if dagger else 1
    return ((head + "X" + tail, 0.5), (head + "Y" + tail, sign * 0.5j))


def _multiply_terms(a, b):
    acc: dict[str, complex] = {}
    for ka, va in a:
        for kb, vb in b:
            power, letters = _mul_letters(ka, kb)
            acc[letters] = acc.get(letters, 0j) + va * vb * _PHASES[power]
    return tuple(acc.items())


def _jw_product(factors: Sequence[Factor], n_so: int):
    terms = (("I" * n_so, 1.0 + 0j),)
    for mode, dagger in factors:
        terms = _multiply_terms(terms, _ladder_terms(mode, dagger, n_so))
    return terms


def jordan_wigner(f: FermionOperator, n_so: int, tol: float = DEFAULT_TOLERANCE) -> PauliSum:
    """Map a fermion operator onto ``n_so`` qubits (qubit ``j`` = spin orbital ``j``)."""
    if f.max_mode() >= n_so or any(m < 0 for _, fs in f.products for m, _ in fs):
        raise DimensionError(f"mode index outside [0, {n_so})")
    acc: dict[str, complex] = {}
    for coeff, factors in f.products:
        for letters, v in _jw_product(factors, n_so):
            acc[letters] = acc.get(letters, 0j) + coeff * v
    return PauliSum(acc, n_qubits=n_so, tol=tol)


def number_operator(n_so: int) -> PauliSum:
    """Total particle number ``sum_j (I - Z_j)/2``."""
    acc = {"I" * n_so: n_so / 2}
    for j in range(n_so):
        acc["I" * j + "Z" + "I" * (n_so - j - 1)] = -0.5
    return PauliSum(acc, n_qubits=n_so)


def sz_operator(n_so: int) -> PauliSum:
    """Total S_z under block spin ordering (alpha first)."""
    n = n_so // 2
    acc = {}
    for j in range(n_so):
        # n_j = (I - Z_j)/2 ; S_z = (n_alpha - n_beta)/2 -> identity parts cancel
        acc["I" * j + "Z" + "I" * (n_so - j - 1)] = -0.25 if j < n else 0.25
    return PauliSum(acc, n_qubits=n_so)


def build_qubit_hamiltonian(h: SpinOrbitalHamiltonian, cutoff: float = 0.0) -> PauliSum:
    """JW image of ``sum h_pq a+_p a_q + 1/2 sum <pq|rs> a+_p a+_q a_s a_r + e_core``."""
    n = h.n_so
    acc: dict[str, complex] = {"I" * n: complex(h.e_core)}

    def accumulate(terms, scale):
        for letters, v in terms:
            acc[letters] = acc.get(letters, 0j) + scale * v

    for p, q in zip(*(x.tolist() for x in np.nonzero(np.abs(h.h_so) > cutoff))):
        accumulate(_jw_product(((p, True), (q, False)), n), h.h_so[p, q])

    pair_cache: dict = {}

    def pair(a, b, dagger):
        key = (a, b, dagger)
        if key not in pair_cache:
            pair_cache[key] = _jw_product(((a, dagger), (b, dagger)), n)
        return pair_cache[key]

    g = h.g_phys
    for p, q, r, s in zip(*(x.tolist() for x in np.nonzero(np.abs(g) > cutoff))):
        if p == q or r == s:
            continue
        terms = _multiply_terms(pair(p, q, True), pair(s, r, False))
        accumulate(terms, 0.5 * g[p, q, r, s])
    # Hermitian by construction; drop round-off imaginary parts
    real = {k: complex(v.real, 0.0) for k, v in acc.items()}
    return PauliSum(real, n_qubits=n)


@dataclass(frozen=True)
class Excitation:
    """Single (``i -> a``) or double (``i<j -> a<b``) spin-orbital excitation."""

    kind: str
    occ: tuple[int, ...]
    virt: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("single", "double"):
            raise ValueError(f"unknown excitation kind {self.kind!r}")
        size = 1 if self.kind == "single" else 2
        if len(self.occ) != size or len(self.virt) != size:
            raise ValueError(f"{self.kind} excitation needs {size} occupied and {size} virtual indices")
        if set(self.occ) & set(self.virt):
            raise ValueError("occupied and virtual indices overlap")
        if list(self.occ) != sorted(self.occ) or list(self.virt) != sorted(self.virt):
            raise ValueError("excitation indices must be sorted")

    @property
    def label(self) -> str:
        return f"{','.join(map(str, self.occ))}->{','.join(map(str, self.virt))}"

    def fermion_operator(self) -> FermionOperator:
        """The excitation ``tau`` itself (not anti-Hermitized)."""
        if self.kind == "single":
            (i,), (a,) = self.occ, self.virt
            return FermionOperator.product((a, True), (i, False))
        (i, j), (a, b) = self.occ, self.virt
        return FermionOperator.product((a, True), (b, True), (j, False), (i, False))


def _occupations(n_so: int, n_electrons: int) -> tuple[list[int], list[int]]:
    if n_electrons > n_so:
        raise OccupationError(f"{n_electrons} electrons do not fit in {n_so} spin orbitals")
    if n_so % 2:
        raise OccupationError("block spin ordering needs an even number of spin orbitals")
    if n_electrons % 2:
        raise OccupationError("closed-shell reference needs an even electron count")
    n, k = n_so // 2, n_electrons // 2
    occ = list(range(k)) + list(range(n, n + k))
    virt = [p for p in range(n_so) if p not in occ]
    return occ, virt


def uccsd_excitations(n_so: int, n_electrons: int) -> list[Excitation]:
    """All spin-conserving singles and S_z-preserving doubles out of the HF determinant."""
    occ, virt = _occupations(n_so, n_electrons)
    n = n_so // 2

    def spin(p):
        return 0 if p < n else 1

    singles = [
        Excitation("single", (i,), (a,))
        for i in occ for a in virt if spin(i) == spin(a)
    ]
    doubles = []
    for x, i in enumerate(occ):
        for j in occ[x + 1:]:
            for y, a in enumerate(virt):
                for b in virt[y + 1:]:
                    if spin(i) + spin(j) == spin(a) + spin(b):
                        doubles.append(Excitation("double", (i, j), (a, b)))
    singles.sort(key=lambda e: (e.occ, e.virt))
    doubles.sort(key=lambda e: (e.occ, e.virt))
    return singles + doubles


def excitation_generator(e: Excitation, n_so: int) -> PauliSum:
    """Anti-Hermitian ``JW(tau - tau^dagger)`` with unit amplitude."""
    tau = e.fermion_operator()
    return jordan_wigner(tau - tau.dagger(), n_so)
