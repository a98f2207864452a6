"""ADAPT-VQE: grow an ansatz one pool generator at a time.

Each iteration screens every pool generator by its energy gradient at the
current state, appends the winner with a zero-initialized parameter and
re-optimizes all parameters from the previous optimum. The QEB variant runs
a full inner VQE for each of the top-k candidates and keeps the best one.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .ansatz import Ansatz, OperatorPool
from .exceptions import ConfigurationError, DivergenceError, PoolError
from .optim import DEFAULT_MAX_EVALS, OPTIMIZERS, check_options
from .pauli import PauliSum, commutator, is_antihermitian, is_hermitian
from .sim import GateCost, GeneratorKernel, Statevector, expectation_amps
from .vqe import run_vqe

STOP_REASONS = ("gradient_converged", "max_operators", "stalled")
NORMS = ("l2", "max")


@dataclass
class AdaptConfig:
    """Settings for the ADAPT loops.

    Parameters
    ----------
    pool : str
        Pool flavor the run was configured for (``fermionic``, ``qubit`` or ``qeb``).
    epsilon : float
        Stop once the norm of the pool-gradient vector is at most this.
    max_operators : int
        Hard cap on the number of appended generators.
    optimizer, optimizer_options
        Inner VQE method name and keyword options (see :mod:`adaptvqe.optim`).
    qeb_top_k : int
        Candidates given a full inner VQE per iteration by :func:`run_qeb_adapt`.
    norm : str
        ``"l2"`` (default) or ``"max"`` gradient norm for the stopping rule.
    n_jobs : int
        Threads used for gradient screening and QEB candidates; results do not
        depend on it.
    """

    pool: str = "fermionic"
    epsilon: float = 1e-3
    max_operators: int = 50
    optimizer: str = "fd_bfgs"
    optimizer_options: dict = field(default_factory=dict)
    qeb_top_k: int = 3
    norm: str = "l2"
    seed: int = 0
    n_jobs: int = 1

    def __post_init__(self):
        if self.pool not in OperatorPool.FLAVORS:
            raise ConfigurationError(f"unknown pool flavor {self.pool!r}")
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ConfigurationError(f"epsilon must be positive, got {self.epsilon}")
        if int(self.max_operators) != self.max_operators or self.max_operators < 1:
            raise ConfigurationError(f"max_operators must be an integer >= 1, got {self.max_operators}")
        if int(self.qeb_top_k) != self.qeb_top_k or self.qeb_top_k < 1:
            raise ConfigurationError(f"qeb_top_k must be an integer >= 1, got {self.qeb_top_k}")
        if self.norm not in NORMS:
            raise ConfigurationError(f"norm must be one of {NORMS}, got {self.norm!r}")
        if self.n_jobs < 1:
            raise ConfigurationError("n_jobs must be >= 1")
        if self.optimizer not in OPTIMIZERS:
            raise ConfigurationError(f"unknown optimizer {self.optimizer!r}")
        self.optimizer_options = check_options(self.optimizer, self.optimizer_options)


@dataclass
class AdaptIteration:
    index: int
    selected: int
    label: str
    gradient: float
    gradient_norm: float
    energy: float
    cnot_count: int
    parameter_count: int
    parameters: list
    n_evaluations: int
    n_inner_vqe: int
    repeated: bool = False
    candidates: list = field(default_factory=list)

    @property
    def cost(self) -> GateCost:
        return GateCost(self.cnot_count, self.parameter_count)


@dataclass
class AdaptResult:
    iterations: list
    initial_energy: float
    final_energy: float
    final_parameters: np.ndarray
    stop_reason: str
    final_gradient_norm: float
    ansatz: Ansatz = field(repr=False)
    pool_flavor: str = ""
    config: dict = field(default_factory=dict)

    @property
    def n_iterations(self) -> int:
        return len(self.iterations)

    @property
    def energies(self) -> np.ndarray:
        return np.array([it.energy for it in self.iterations])

    @property
    def n_evaluations(self) -> int:
        return sum(it.n_evaluations for it in self.iterations)

    @property
    def cost(self) -> GateCost:
        return self.ansatz.cost

    def to_dict(self) -> dict:
        return {
            "pool": self.pool_flavor,
            "config": self.config,
            "initial_energy": self.initial_energy,
            "final_energy": self.final_energy,
            "final_parameters": [float(x) for x in self.final_parameters],
            "final_gradient_norm": self.final_gradient_norm,
            "stop_reason": self.stop_reason,
            "n_parameters": self.cost.parameter_count,
            "n_cnots": self.cost.cnot_count,
            "iterations": [asdict(it) for it in self.iterations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        """One row per iteration: the energy / parameter / CNOT trace used for plotting."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "label", "gradient", "gradient_norm", "energy", "n_params", "n_cnots", "n_evals"])
        for it in self.iterations:
            w.writerow([it.index, it.label, f"{it.gradient:.12g}", f"{it.gradient_norm:.12g}",
                        f"{it.energy:.12g}", it.parameter_count, it.cnot_count, it.n_evaluations])
        return buf.getvalue()


def pool_gradient(state, h: PauliSum, a: PauliSum, method: str = "overlap") -> float:
    """Energy gradient ``<psi|[H, A]|psi>`` of appending ``exp(theta A)`` at ``theta = 0``.

    ``method="overlap"`` evaluates ``2 Re <H psi|A psi>``; ``"commutator"``
    builds ``[H, A]`` symbolically and takes its expectation.
    """
    amps = state.amps if isinstance(state, Statevector) else np.asarray(state)
    if not is_hermitian(h):
        raise ConfigurationError("Hamiltonian must be Hermitian")
    if not is_antihermitian(a):
        raise ConfigurationError("generator must be anti-Hermitian")
    if method == "commutator":
        return expectation_amps(amps, commutator(h, a))
    if method != "overlap":
        raise ConfigurationError(f"unknown gradient method {method!r}")
    h_psi = h.to_sparse() @ amps
    return 2.0 * float(np.vdot(h_psi, GeneratorKernel(a).apply_generator(amps)).real)


def _pool_gradients(pool: OperatorPool, h_psi: np.ndarray, psi: np.ndarray, n_jobs: int) -> np.ndarray:
    kernels = [pool.element(i)._kernel for i in range(len(pool))]

    def one(k):
        return 2.0 * float(np.vdot(h_psi, k.apply_generator(psi)).real)

    if n_jobs == 1:
        return np.array([one(k) for k in kernels])
    with ThreadPoolExecutor(n_jobs) as ex:
        return np.array(list(ex.map(one, kernels)))


def _norm(g: np.ndarray, kind: str) -> float:
    return float(np.linalg.norm(g)) if kind == "l2" else float(np.max(np.abs(g)))


def _top_k(g: np.ndarray, k: int) -> list[int]:
    # magnitudes equal to 12 decimals count as ties; the stable sort then favors the lowest index
    return np.argsort(-np.round(np.abs(g), 12), kind="stable")[:k].tolist()


def _adapt(problem, pool: OperatorPool, cfg: AdaptConfig, top_k: int) -> AdaptResult:
    if not isinstance(pool, OperatorPool) or len(pool) == 0:
        raise PoolError("ADAPT needs a nonempty operator pool")
    h = problem.hamiltonian
    if pool.n_qubits != h.n_qubits:
        raise PoolError("pool and Hamiltonian act on different registers")
    if top_k > len(pool):
        raise ConfigurationError(f"qeb_top_k={top_k} exceeds pool size {len(pool)}")
    h_mat = h.to_sparse()
    ansatz = Ansatz(h.n_qubits, [], problem.reference_mask)
    params = np.zeros(0)
    psi = ansatz.prepare_amps(params)
    energy = initial = expectation_amps(psi, h)
    iterations: list[AdaptIteration] = []
    chosen: set[int] = set()
    stop = "max_operators"
    while True:
        grads = _pool_gradients(pool, h_mat @ psi, psi, cfg.n_jobs)
        gnorm = _norm(grads, cfg.norm)
        if gnorm <= cfg.epsilon:
            stop = "gradient_converged"
            break
        if len(ansatz.elements) >= cfg.max_operators:
            stop = "max_operators"
            break
        candidates = _top_k(grads, top_k)
        x0 = np.append(params, 0.0)
        trials = [ansatz.extended(pool.element(i)) for i in candidates]
        options = {"max_evals": DEFAULT_MAX_EVALS, **cfg.optimizer_options}

        def optimize(trial):
            return run_vqe(h, trial, cfg.optimizer, options, x0)

        try:
            if cfg.n_jobs == 1 or len(trials) == 1:
                runs = [optimize(t) for t in trials]
            else:
                with ThreadPoolExecutor(cfg.n_jobs) as ex:
                    runs = list(ex.map(optimize, trials))
        except DivergenceError:
            stop = "stalled"
            break
        # lowest optimized energy wins; ties go to the earlier (lower-index) candidate
        order = sorted(range(len(runs)), key=lambda c: (runs[c].energy, candidates[c]))
        best = order[0]
        sel = candidates[best]
        ansatz = trials[best]
        params = np.asarray(runs[best].parameters, dtype=float)
        energy = runs[best].energy
        psi = ansatz.prepare_amps(params)
        cost = ansatz.cost
        iterations.append(AdaptIteration(
            index=len(iterations) + 1,
            selected=sel,
            label=pool.labels[sel],
            gradient=float(grads[sel]),
            gradient_norm=gnorm,
            energy=float(energy),
            cnot_count=cost.cnot_count,
            parameter_count=cost.parameter_count,
            parameters=[float(x) for x in params],
            n_evaluations=sum(r.n_evaluations for r in runs),
            n_inner_vqe=len(runs),
            repeated=sel in chosen,
            candidates=[[c, float(r.energy)] for c, r in zip(candidates, runs)] if top_k > 1 else [],
        ))
        chosen.add(sel)
    return AdaptResult(
        iterations=iterations,
        initial_energy=float(initial),
        final_energy=float(energy),
        final_parameters=params,
        stop_reason=stop,
        final_gradient_norm=gnorm,
        ansatz=ansatz,
        pool_flavor=pool.flavor,
        config={k: v for k, v in asdict(cfg).items() if k != "n_jobs"},
    )


def run_adapt(problem, pool: OperatorPool, cfg: AdaptConfig | None = None) -> AdaptResult:
    """Standard ADAPT loop: append the generator with the largest ``|gradient|``.

    ``problem`` needs ``hamiltonian`` and ``reference_mask`` attributes.
    """
    return _adapt(problem, pool, cfg or AdaptConfig(pool=pool.flavor), 1)


def run_qeb_adapt(problem, pool: OperatorPool, cfg: AdaptConfig | None = None) -> AdaptResult:
    """QEB loop: full inner VQE for each of the ``qeb_top_k`` largest-gradient candidates."""
    cfg = cfg or AdaptConfig(pool=pool.flavor)
    return _adapt(problem, pool, cfg, cfg.qeb_top_k)
