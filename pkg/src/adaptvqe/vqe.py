"""Fixed-ansatz VQE driver."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import Ansatz
from .optim import ObjectiveFunction, OptimizerResult, minimize
from .pauli import PauliSum
from .sim import expectation_amps


def energy_function(ansatz: Ansatz, h: PauliSum):
    def energy(theta):
        return expectation_amps(ansatz.prepare_amps(theta), h)

    return energy


@dataclass
class VQEResult:
    energy: float
    parameters: np.ndarray
    n_evaluations: int
    optimizer: OptimizerResult


def run_vqe(
    h: PauliSum,
    ansatz: Ansatz,
    optimizer: str = "fd_bfgs",
    options: dict | None = None,
    x0=None,
) -> VQEResult:
    """Minimize ``<psi(theta)|h|psi(theta)>`` over the ansatz parameters from ``x0`` (default zeros)."""
    x0 = np.zeros(ansatz.n_parameters) if x0 is None else np.asarray(x0, dtype=float)
    obj = ObjectiveFunction(energy_function(ansatz, h), ansatz.n_parameters)
    res = minimize(optimizer, obj, x0, **(options or {}))
    return VQEResult(res.best_value, res.best_parameters, res.n_evaluations, res)
