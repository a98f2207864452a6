"""Estimator-style front ends: hyperparameters in ``__init__``, work in ``fit(problem)``.

``fit`` accepts a :class:`~adaptvqe.problem.MolecularProblem`, a
:class:`~adaptvqe.integrals.MolecularIntegrals` or a path to an FCIDUMP file.
Fitted attributes end in an underscore.
"""

from __future__ import annotations

import os

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .adapt import AdaptConfig, run_adapt, run_qeb_adapt
from .ansatz import Ansatz, build_hea, build_pool, build_uccsd
from .exceptions import ConfigurationError
from .integrals import MolecularIntegrals
from .optim import DEFAULT_MAX_EVALS, check_options
from .problem import MolecularProblem
from .vqe import run_vqe

POOL_OF_ANSATZ = {"adapt-ferm": "fermionic", "adapt-qubit": "qubit", "adapt-qeb": "qeb"}
ANSATZES = ("hea", "uccsd", *POOL_OF_ANSATZ)


def check_problem(problem) -> MolecularProblem:
    """Coerce ``problem`` to a :class:`MolecularProblem`."""
    if isinstance(problem, MolecularProblem):
        return problem
    if isinstance(problem, MolecularIntegrals):
        return MolecularProblem.from_integrals(problem)
    if isinstance(problem, (str, os.PathLike)):
        return MolecularProblem.from_fcidump(problem)
    raise TypeError(f"cannot build a molecular problem from {type(problem).__name__}")


def _options(optimizer, options, max_evals):
    opts = check_options(optimizer, options)
    opts.setdefault("max_evals", max_evals)
    return opts


class _Fitted(BaseEstimator):
    def error(self, e_fci: float | None = None) -> float:
        """``energy_ - E_FCI`` for the fitted problem (or a supplied exact energy)."""
        check_is_fitted(self, "energy_")
        return self.energy_ - (self.problem_.e_fci if e_fci is None else e_fci)


class VQE(_Fitted):
    """Fixed-ansatz VQE.

    Parameters
    ----------
    ansatz : {"uccsd", "hea"}
    optimizer : str
        ``fd_bfgs``, ``nelder_mead`` or ``spsa``.
    optimizer_options : dict, optional
    max_evals : int
        Energy-evaluation budget passed to the optimizer.
    hea_reps, hea_axes, hea_entanglement
        HEA layout (``hea`` only).
    init : {"auto", "zeros", "random"}
        Starting parameters. ``auto`` is zeros for UCCSD and a seeded
        uniform draw in ``[-init_scale, init_scale]`` for the HEA, whose
        all-zero point is a stationary point of the energy.
    init_scale : float
    seed : int
    """

    def __init__(
        self,
        ansatz="uccsd",
        optimizer="fd_bfgs",
        optimizer_options=None,
        max_evals=DEFAULT_MAX_EVALS,
        hea_reps=3,
        hea_axes="YZ",
        hea_entanglement="linear",
        init="auto",
        init_scale=0.1,
        seed=0,
    ):
        self.ansatz = ansatz
        self.optimizer = optimizer
        self.optimizer_options = optimizer_options
        self.max_evals = max_evals
        self.hea_reps = hea_reps
        self.hea_axes = hea_axes
        self.hea_entanglement = hea_entanglement
        self.init = init
        self.init_scale = init_scale
        self.seed = seed

    def _build(self, problem: MolecularProblem) -> Ansatz:
        if self.ansatz == "uccsd":
            u = build_uccsd(problem.n_qubits, problem.n_electrons)
            return Ansatz(problem.n_qubits, u.elements, problem.reference_mask)
        if self.ansatz == "hea":
            return build_hea(problem.n_qubits, self.hea_reps, tuple(self.hea_axes),
                             self.hea_entanglement, problem.reference_mask)
        raise ConfigurationError(f"VQE ansatz must be 'uccsd' or 'hea', got {self.ansatz!r}")

    def _x0(self, n: int) -> np.ndarray:
        mode = self.init
        if mode == "auto":
            mode = "random" if self.ansatz == "hea" else "zeros"
        if mode == "zeros":
            return np.zeros(n)
        if mode == "random":
            return np.random.default_rng(self.seed).uniform(-self.init_scale, self.init_scale, n)
        raise ConfigurationError(f"unknown init {self.init!r}")

    def fit(self, problem, y=None):
        problem = check_problem(problem)
        opts = _options(self.optimizer, self.optimizer_options, self.max_evals)
        if self.optimizer == "spsa":
            opts.setdefault("seed", self.seed)
        circuit = self._build(problem)
        res = run_vqe(problem.hamiltonian, circuit, self.optimizer, opts, self._x0(circuit.n_parameters))
        self.problem_ = problem
        self.ansatz_ = circuit
        self.result_ = res
        self.energy_ = float(res.energy)
        self.parameters_ = np.asarray(res.parameters)
        self.n_parameters_ = circuit.n_parameters
        self.n_cnots_ = circuit.cost.cnot_count
        self.n_evaluations_ = res.n_evaluations
        return self


class AdaptVQE(_Fitted):
    """ADAPT-VQE over a fermionic, qubit or QEB operator pool.

    Parameters
    ----------
    pool : {"fermionic", "qubit", "qeb"}
    epsilon : float
        Gradient-norm stopping threshold.
    max_operators : int
    optimizer, optimizer_options, max_evals
        Inner VQE settings; ``max_evals`` bounds each inner optimization.
    top_k : int
        QEB candidates per iteration (``qeb`` only).
    keep_fraction : float
        Fraction of Pauli strings retained by the qubit pool.
    norm : {"l2", "max"}
    seed : int
        Seeds the qubit-pool reduction and SPSA.
    n_jobs : int
    """

    def __init__(
        self,
        pool="fermionic",
        epsilon=1e-3,
        max_operators=50,
        optimizer="fd_bfgs",
        optimizer_options=None,
        max_evals=DEFAULT_MAX_EVALS,
        top_k=3,
        keep_fraction=0.25,
        norm="l2",
        seed=0,
        n_jobs=1,
    ):
        self.pool = pool
        self.epsilon = epsilon
        self.max_operators = max_operators
        self.optimizer = optimizer
        self.optimizer_options = optimizer_options
        self.max_evals = max_evals
        self.top_k = top_k
        self.keep_fraction = keep_fraction
        self.norm = norm
        self.seed = seed
        self.n_jobs = n_jobs

    def config(self) -> AdaptConfig:
        opts = _options(self.optimizer, self.optimizer_options, self.max_evals)
        if self.optimizer == "spsa":
            opts.setdefault("seed", self.seed)
        return AdaptConfig(
            pool=self.pool, epsilon=self.epsilon, max_operators=self.max_operators,
            optimizer=self.optimizer, optimizer_options=opts, qeb_top_k=self.top_k,
            norm=self.norm, seed=self.seed, n_jobs=self.n_jobs,
        )

    def fit(self, problem, y=None):
        cfg = self.config()
        problem = check_problem(problem)
        pool = build_pool(self.pool, problem.n_qubits, problem.n_electrons, self.keep_fraction, self.seed)
        loop = run_qeb_adapt if self.pool == "qeb" else run_adapt
        res = loop(problem, pool, cfg)
        self.problem_ = problem
        self.pool_ = pool
        self.ansatz_ = res.ansatz
        self.result_ = res
        self.energy_ = res.final_energy
        self.parameters_ = np.asarray(res.final_parameters)
        self.n_parameters_ = res.cost.parameter_count
        self.n_cnots_ = res.cost.cnot_count
        self.n_evaluations_ = res.n_evaluations
        return self


def make_estimator(ansatz: str, **params) -> BaseEstimator:
    """Estimator for a CLI-style ansatz name (``hea``, ``uccsd``, ``adapt-ferm``, ...)."""
    if ansatz in ("hea", "uccsd"):
        return VQE(ansatz=ansatz, **params)
    if ansatz in POOL_OF_ANSATZ:
        return AdaptVQE(pool=POOL_OF_ANSATZ[ansatz], **params)
    raise ConfigurationError(f"unknown ansatz {ansatz!r}; choose from {ANSATZES}")
