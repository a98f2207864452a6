"""Parameterized ansatz structures and ADAPT operator pools."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .exceptions import ConfigurationError, DimensionError, OperatorError, PoolError
from .fermion import Excitation, _occupations, excitation_generator, uccsd_excitations
from .pauli import PauliSum, PauliTerm, is_antihermitian
from .sim import GateCost, GeneratorKernel, Statevector, basis_state, cnot_amps, gate_cost, _exp_pauli

KINDS = ("pauli_exponential", "generator_exponential", "hea_rotation_layer", "hea_entangle_layer")


@dataclass
class AnsatzElement:
    """One unit of an ansatz.

    ``payload`` is a PauliTerm (``pauli_exponential``), an anti-Hermitian
    PauliSum (``generator_exponential``), a tuple of rotation axes
    (``hea_rotation_layer``) or a tuple of ``(control, target)`` pairs
    (``hea_entangle_layer``).
    """

    kind: str
    payload: Any
    n_qubits: int
    cost: GateCost
    label: str = ""
    _kernel: Any = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown element kind {self.kind!r}")
        if self.kind == "generator_exponential":
            if not is_antihermitian(self.payload):
                raise OperatorError("generator payload must be anti-Hermitian")
            self._kernel = GeneratorKernel(self.payload)

    @property
    def n_params(self) -> int:
        return self.cost.parameter_count

    @property
    def commuting(self) -> bool:
        """Whether a generator's sub-terms commute (single Trotter step exact)."""
        return self._kernel.commuting if self._kernel is not None else True

    def apply(self, psi: np.ndarray, params: Sequence[float]) -> np.ndarray:
        if self.kind == "generator_exponential":
            return self._kernel.apply(psi, params[0])
        if self.kind == "pauli_exponential":
            sign = 1.0 if self.payload.coeff.real > 0 else -1.0
            return _exp_pauli(psi, self.payload.letters, sign * params[0])
        if self.kind == "hea_rotation_layer":
            k = 0
            for axis in self.payload:
                for q in range(self.n_qubits):
                    # R_axis(theta) = exp(-i theta/2 sigma_axis)
                    letters = "I" * q + axis + "I" * (self.n_qubits - q - 1)
                    psi = _exp_pauli(psi, letters, -0.5 * params[k])
                    k += 1
            return psi
        for control, target in self.payload:
            psi = cnot_amps(psi, self.n_qubits, control, target)
        return psi

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "label": self.label, "cnots": self.cost.cnot_count, "params": self.n_params}
        if self.kind == "generator_exponential":
            out["terms"] = {t.label: [t.coeff.real, t.coeff.imag] for t in self.payload}
        return out


def generator_element(g: PauliSum, label: str = "") -> AnsatzElement:
    return AnsatzElement("generator_exponential", g, g.n_qubits, gate_cost(g), label)


def pauli_element(p: PauliTerm, label: str = "") -> AnsatzElement:
    return AnsatzElement("pauli_exponential", p, p.n_qubits, gate_cost(p), label or p.label)


class Ansatz:
    """Ordered product of elements applied to a reference basis state."""

    def __init__(self, n_qubits: int, elements: Sequence[AnsatzElement] = (), reference_mask: int = 0):
        for el in elements:
            if el.n_qubits != n_qubits:
                raise DimensionError("element register size differs from ansatz")
        self.n_qubits = n_qubits
        self.elements = list(elements)
        self.reference_mask = reference_mask
        self._reference = basis_state(n_qubits, reference_mask).amps

    @property
    def n_parameters(self) -> int:
        return sum(el.n_params for el in self.elements)

    @property
    def cost(self) -> GateCost:
        total = GateCost()
        for el in self.elements:
            total = total + el.cost
        return total

    def extended(self, element: AnsatzElement) -> "Ansatz":
        return Ansatz(self.n_qubits, self.elements + [element], self.reference_mask)

    def prepare_amps(self, params: Sequence[float]) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        if params.shape != (self.n_parameters,):
            raise DimensionError(f"expected {self.n_parameters} parameters, got {params.shape}")
        psi = self._reference
        k = 0
        for el in self.elements:
            psi = el.apply(psi, params[k:k + el.n_params])
            k += el.n_params
        return psi

    def prepare(self, params: Sequence[float]) -> Statevector:
        return Statevector(self.n_qubits, self.prepare_amps(params))

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "reference_mask": self.reference_mask,
            "n_parameters": self.n_parameters,
            "cnot_count": self.cost.cnot_count,
            "elements": [el.to_dict() for el in self.elements],
        }


def build_hea(
    n_qubits: int,
    reps: int = 3,
    axes: Sequence[str] = ("Y", "Z"),
    entanglement: str = "linear",
    reference_mask: int = 0,
) -> Ansatz:
    """Hardware-efficient ansatz: ``reps`` x (rotations, CNOT ladder) + final rotations."""
    axes = tuple(a.upper() for a in axes)
    if not axes:
        raise ConfigurationError("HEA needs at least one rotation axis")
    if any(a not in ("X", "Y", "Z") for a in axes) or len(set(axes)) != len(axes):
        raise ConfigurationError(f"invalid rotation axes {axes!r}")
    if reps < 1:
        raise ConfigurationError("HEA needs reps >= 1")
    if entanglement == "linear":
        pairs = tuple((q, q + 1) for q in range(n_qubits - 1))
    elif entanglement == "full":
        pairs = tuple((a, b) for a in range(n_qubits) for b in range(a + 1, n_qubits))
    else:
        raise ConfigurationError(f"unknown entanglement {entanglement!r}")
    rot = AnsatzElement("hea_rotation_layer", axes, n_qubits, GateCost(0, n_qubits * len(axes)), "R" + "".join(axes))
    ent = AnsatzElement("hea_entangle_layer", pairs, n_qubits, GateCost(len(pairs), 0), entanglement)
    elements = []
    for _ in range(reps):
        elements += [rot, ent]
    elements.append(rot)
    return Ansatz(n_qubits, elements, reference_mask)


def hf_mask(n_so: int, n_electrons: int) -> int:
    occ, _ = _occupations(n_so, n_electrons)
    return sum(1 << p for p in occ)


def build_uccsd(n_so: int, n_electrons: int) -> Ansatz:
    """Trotterized UCCSD: one generator exponential per excitation, HF reference."""
    elements = [
        generator_element(excitation_generator(e, n_so), e.label)
        for e in uccsd_excitations(n_so, n_electrons)
    ]
    return Ansatz(n_so, elements, hf_mask(n_so, n_electrons))


class OperatorPool:
    """Immutable ordered collection of anti-Hermitian generators."""

    FLAVORS = ("fermionic", "qubit", "qeb")

    def __init__(self, flavor: str, generators: Sequence[PauliSum], labels: Sequence[str]):
        if flavor not in self.FLAVORS:
            raise PoolError(f"unknown pool flavor {flavor!r}")
        if len(generators) != len(labels):
            raise PoolError("one label per generator required")
        if not generators:
            raise PoolError("operator pool is empty")
        n = generators[0].n_qubits
        seen = set()
        for g in generators:
            if g.n_qubits != n:
                raise PoolError("pool generators act on different registers")
            if not is_antihermitian(g):
                raise PoolError("pool generators must be anti-Hermitian")
            key = frozenset(g.terms.items())
            if key in seen:
                raise PoolError("duplicate generator in pool")
            seen.add(key)
        self.flavor = flavor
        self.generators = tuple(generators)
        self.labels = tuple(labels)
        self.n_qubits = n
        self._elements = None

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, i) -> PauliSum:
        return self.generators[i]

    def element(self, i: int) -> AnsatzElement:
        """Cached ansatz element for generator ``i``."""
        if self._elements is None:
            self._elements = [None] * len(self)
        if self._elements[i] is None:
            self._elements[i] = generator_element(self.generators[i], self.labels[i])
        return self._elements[i]

    def to_dict(self) -> dict:
        return {
            "flavor": self.flavor,
            "size": len(self),
            "n_qubits": self.n_qubits,
            "generators": [
                {
                    "index": k,
                    "label": lab,
                    "n_terms": len(g),
                    "cnots": gate_cost(g).cnot_count,
                    "terms": {t.label: [t.coeff.real, t.coeff.imag] for t in g},
                }
                for k, (g, lab) in enumerate(zip(self.generators, self.labels))
            ],
        }


def build_fermionic_pool(n_so: int, n_electrons: int) -> OperatorPool:
    excitations = uccsd_excitations(n_so, n_electrons)
    return OperatorPool(
        "fermionic",
        [excitation_generator(e, n_so) for e in excitations],
        [e.label for e in excitations],
    )


def strip_z(letters: str) -> str:
    """Drop Jordan-Wigner parity strings: Z -> I everywhere outside the X/Y support."""
    return letters.replace("Z", "I")


def build_qubit_pool(fermionic: OperatorPool, keep_fraction: float = 0.25, seed: int = 0) -> OperatorPool:
    """Single Pauli-string generators ``i P`` drawn from the fermionic pool.

    Every string in the fermionic generators has its Z letters replaced by
    identities; duplicates are merged (first appearance wins), then
    ``ceil(keep_fraction * count)`` strings are kept via a seeded shuffle and
    returned in their original order.
    """
    if not 0 < keep_fraction <= 1:
        raise ConfigurationError(f"keep_fraction must lie in (0, 1], got {keep_fraction}")
    strings: list[str] = []
    seen = set()
    for g in fermionic.generators:
        for t in g:
            s = strip_z(t.letters)
            if "X" not in s and "Y" not in s:
                continue
            if s not in seen:
                seen.add(s)
                strings.append(s)
    if not strings:
        raise PoolError("no Pauli strings to build a qubit pool from")
    n_keep = math.ceil(keep_fraction * len(strings))
    order = np.random.default_rng(seed).permutation(len(strings))
    kept = sorted(order[:n_keep].tolist())
    if not kept:
        raise PoolError("qubit pool is empty after reduction")
    n = fermionic.n_qubits
    gens = [PauliSum({strings[k]: 1j}, n_qubits=n) for k in kept]
    return OperatorPool("qubit", gens, [strings[k][::-1] for k in kept])


def _q_op(j: int, n: int, dagger: bool) -> PauliSum:
    # Q_j = (X_j + iY_j)/2 ; Q_j^dagger = (X_j - iY_j)/2 ; identities elsewhere
    x = "I" * j + "X" + "I" * (n - j - 1)
    y = "I" * j + "Y" + "I" * (n - j - 1)
    return PauliSum({x: 0.5, y: -0.5j if dagger else 0.5j}, n_qubits=n)


def qubit_excitation_generator(e: Excitation, n_so: int) -> PauliSum:
    """Qubit (Z-string free) analogue of an excitation generator."""
    if e.kind == "single":
        (i,), (k,) = e.occ, e.virt
        fwd = _q_op(k, n_so, True) * _q_op(i, n_so, False)
        back = _q_op(i, n_so, True) * _q_op(k, n_so, False)
    else:
        (i, j), (k, l) = e.occ, e.virt
        fwd = _q_op(k, n_so, True) * _q_op(l, n_so, True) * _q_op(i, n_so, False) * _q_op(j, n_so, False)
        back = _q_op(i, n_so, True) * _q_op(j, n_so, True) * _q_op(k, n_so, False) * _q_op(l, n_so, False)
    return fwd - back


def build_qeb_pool(n_so: int, n_electrons: int) -> OperatorPool:
    excitations = uccsd_excitations(n_so, n_electrons)
    return OperatorPool(
        "qeb",
        [qubit_excitation_generator(e, n_so) for e in excitations],
        [e.label for e in excitations],
    )


def build_pool(flavor: str, n_so: int, n_electrons: int, keep_fraction: float = 0.25, seed: int = 0) -> OperatorPool:
    if flavor == "fermionic":
        return build_fermionic_pool(n_so, n_electrons)
    if flavor == "qubit":
        return build_qubit_pool(build_fermionic_pool(n_so, n_electrons), keep_fraction, seed)
    if flavor == "qeb":
        return build_qeb_pool(n_so, n_electrons)
    raise PoolError(f"unknown pool flavor {flavor!r}")
