"""Dense statevector simulation and analytic gate-count accounting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import DimensionError, OperatorError
from .pauli import PauliSum, PauliTerm, commutes, is_antihermitian, is_hermitian, pauli_action

NORM_TOL = 1e-10


@dataclass(frozen=True)
class Statevector:
    """``2**n_qubits`` complex amplitudes; qubit 0 is the least-significant index bit."""

    n_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex)
        if amps.shape != (1 << self.n_qubits,):
            raise DimensionError(f"expected {1 << self.n_qubits} amplitudes, got {amps.shape}")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def overlap(self, other: "Statevector") -> complex:
        return complex(np.vdot(self.amps, other.amps))


@dataclass(frozen=True)
class GateCost:
    cnot_count: int = 0
    parameter_count: int = 0

    def __add__(self, other: "GateCost") -> "GateCost":
        return GateCost(self.cnot_count + other.cnot_count, self.parameter_count + other.parameter_count)


def basis_state(n_qubits: int, mask: int) -> Statevector:
    if not 0 <= mask < (1 << n_qubits):
        raise DimensionError(f"mask {mask:#b} does not fit in {n_qubits} qubits")
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[mask] = 1.0
    return Statevector(n_qubits, amps)


def _unit_sign(p: PauliTerm) -> float:
    if abs(p.coeff.imag) > 1e-12 or abs(abs(p.coeff.real) - 1.0) > 1e-12:
        raise OperatorError(f"Pauli exponential needs a real unit coefficient, got {p.coeff}")
    return 1.0 if p.coeff.real > 0 else -1.0


def _exp_pauli(psi: np.ndarray, letters: str, angle: float) -> np.ndarray:
    # exp(i angle P) = cos(angle) I + i sin(angle) P   (P^2 = I)
    perm, phase = pauli_action(letters)
    return np.cos(angle) * psi + (1j * np.sin(angle)) * (phase * psi[perm])


def apply_pauli_exponential(s: Statevector, p: PauliTerm, theta: float) -> Statevector:
    """Return ``exp(i theta P) |s>`` for a Hermitian unit-coefficient Pauli term."""
    if p.n_qubits != s.n_qubits:
        raise DimensionError("term and state sizes differ")
    sign = _unit_sign(p)
    return Statevector(s.n_qubits, _exp_pauli(s.amps, p.letters, sign * theta))


class GeneratorKernel:
    """Precompiled ``exp(theta * g)`` for an anti-Hermitian PauliSum ``g``.

    ``g = sum_k i c_k P_k`` is applied as the single Trotter step
    ``prod_k exp(i theta c_k P_k)`` with terms in sorted-letter order, which
    is exact when the ``P_k`` mutually commute (``self.commuting``).
    """

    def __init__(self, g: PauliSum):
        if not is_antihermitian(g):
            raise OperatorError("generator must be anti-Hermitian")
        self.n_qubits = g.n_qubits
        terms = list(g)
        self.letters = [t.letters for t in terms]
        self.weights = np.array([t.coeff.imag for t in terms])
        self._actions = [pauli_action(t.letters) for t in terms]
        self.commuting = all(
            commutes(a, b) for x, a in enumerate(terms) for b in terms[x + 1:]
        )

    def apply(self, psi: np.ndarray, theta: float) -> np.ndarray:
        for (perm, phase), c in zip(self._actions, self.weights):
            a = theta * c
            psi = np.cos(a) * psi + (1j * np.sin(a)) * (phase * psi[perm])
        return psi

    def apply_generator(self, psi: np.ndarray) -> np.ndarray:
        """``g |psi>`` without exponentiation."""
        out = np.zeros_like(psi)
        for (perm, phase), c in zip(self._actions, self.weights):
            out += (1j * c) * (phase * psi[perm])
        return out


def apply_generator_exponential(s: Statevector, g: Union[PauliSum, GeneratorKernel], theta: float) -> Statevector:
    """Return ``exp(theta g) |s>`` for anti-Hermitian ``g`` (one Trotter step)."""
    kernel = g if isinstance(g, GeneratorKernel) else GeneratorKernel(g)
    if kernel.n_qubits != s.n_qubits:
        raise DimensionError("generator and state sizes differ")
    return Statevector(s.n_qubits, kernel.apply(s.amps, theta))


def apply_cnot(s: Statevector, control: int, target: int) -> Statevector:
    return Statevector(s.n_qubits, cnot_amps(s.amps, s.n_qubits, control, target))


def cnot_amps(psi: np.ndarray, n_qubits: int, control: int, target: int) -> np.ndarray:
    if control == target or not (0 <= control < n_qubits and 0 <= target < n_qubits):
        raise DimensionError(f"invalid CNOT ({control}, {target}) on {n_qubits} qubits")
    idx = np.arange(1 << n_qubits)
    perm = np.where((idx >> control) & 1, idx ^ (1 << target), idx)
    return psi[perm]


def expectation_amps(psi: np.ndarray, h: PauliSum) -> float:
    value = np.vdot(psi, h.to_sparse() @ psi)
    if abs(value.imag) > NORM_TOL * max(1.0, abs(value.real)):
        raise OperatorError(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def expectation(s: Statevector, h: PauliSum) -> float:
    """``<s|h|s>`` for Hermitian ``h``."""
    if not is_hermitian(h):
        raise OperatorError("observable must be Hermitian")
    if h.n_qubits != s.n_qubits:
        raise DimensionError("observable and state sizes differ")
    return expectation_amps(s.amps, h)


def pauli_exponential_cost(p: PauliTerm) -> GateCost:
    """CNOT staircase: ``2 (w - 1)`` CNOTs for a weight-``w`` string, one parameter."""
    return GateCost(max(0, 2 * (p.weight - 1)), 1)


def gate_cost(element) -> GateCost:
    """Analytic cost of a Pauli exponential, a generator exponential, or an ansatz element.

    A generator of ``m`` strings is the product of ``m`` Pauli exponentials
    sharing one parameter.
    """
    if isinstance(element, PauliTerm):
        return pauli_exponential_cost(element)
    if isinstance(element, PauliSum):
        cnots = sum(pauli_exponential_cost(t).cnot_count for t in element)
        return GateCost(cnots, 1)
    cost = getattr(element, "cost", None)
    if isinstance(cost, GateCost):
        return cost
    raise TypeError(f"no gate cost for {type(element).__name__}")
