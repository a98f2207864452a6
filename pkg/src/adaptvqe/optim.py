"""Classical optimizers behind one interface: ``method(f, x0, **config) -> OptimizerResult``.

SPSA is implemented here. Nelder-Mead and BFGS delegate their update rules
to :func:`scipy.optimize.minimize`; this module owns evaluation counting,
budgets, best-point tracking and the central-difference gradient.
"""

from __future__ import annotations

import inspect
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import optimize as sopt

from .exceptions import ConfigurationError, DivergenceError

DEFAULT_MAX_EVALS = 3000


class BudgetExhausted(Exception):
    """Raised inside an objective once its evaluation budget is used up."""


class ObjectiveFunction:
    """Counting wrapper around ``fun(x) -> float``.

    Tracks the best point seen so far and optionally refuses to evaluate past
    ``max_evals``.
    """

    def __init__(self, fun: Callable[[np.ndarray], float], arity: int, max_evals: int | None = None):
        if arity < 1:
            raise ConfigurationError("objective arity must be >= 1")
        self.fun = fun
        self.arity = arity
        self.max_evals = max_evals
        self.n_evaluations = 0
        self.best_x: np.ndarray | None = None
        self.best_value = np.inf

    def __call__(self, x) -> float:
        if self.max_evals is not None and self.n_evaluations >= self.max_evals:
            raise BudgetExhausted
        x = np.array(x, dtype=float)
        value = float(self.fun(x))
        self.n_evaluations += 1
        if not np.isfinite(value):
            raise DivergenceError(f"objective returned {value} at evaluation {self.n_evaluations}")
        if value < self.best_value:
            self.best_value = value
            self.best_x = x
        return value


@dataclass
class OptimizerResult:
    best_parameters: np.ndarray
    best_value: float
    n_evaluations: int
    n_iterations: int
    converged: bool
    trace: list = field(default_factory=list)
    message: str = ""


def _as_objective(f, x0, max_evals=None) -> ObjectiveFunction:
    if isinstance(f, ObjectiveFunction):
        if max_evals is not None:
            f.max_evals = max_evals if f.max_evals is None else min(f.max_evals, max_evals)
        return f
    return ObjectiveFunction(f, len(np.atleast_1d(x0)), max_evals)


def _result(obj: ObjectiveFunction, n_iter: int, converged: bool, trace, message="") -> OptimizerResult:
    return OptimizerResult(
        best_parameters=np.array(obj.best_x),
        best_value=obj.best_value,
        n_evaluations=obj.n_evaluations,
        n_iterations=n_iter,
        converged=converged,
        trace=list(trace),
        message=message,
    )


def finite_difference_gradient(f: Callable, x: Sequence[float], step: float = 1e-6) -> np.ndarray:
    """Central differences; ``2 * len(x)`` evaluations."""
    if step <= 0:
        raise ConfigurationError("finite-difference step must be positive")
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = step
        grad[k] = (f(x + e) - f(x - e)) / (2 * step)
    return grad


def spsa(
    f,
    x0,
    a: float = 0.1,
    c: float = 0.1,
    alpha: float = 0.602,
    gamma: float = 0.101,
    max_iter: int = 200,
    seed: int = 0,
    max_evals: int | None = None,
) -> OptimizerResult:
    """Simultaneous-perturbation stochastic approximation.

    One evaluation at ``x0`` then two per iteration with Rademacher
    perturbations; gains ``a_k = a/(k+1)**alpha`` and ``c_k = c/(k+1)**gamma``.
    The returned point is the best evaluated one.
    """
    obj = _as_objective(f, x0, max_evals)
    rng = np.random.default_rng(seed)
    x = np.array(x0, dtype=float)
    trace = []
    k = 0
    try:
        obj(x)
        for k in range(max_iter):
            ak = a / (k + 1) ** alpha
            ck = c / (k + 1) ** gamma
            delta = rng.choice((-1.0, 1.0), size=x.size)
            f_plus = obj(x + ck * delta)
            f_minus = obj(x - ck * delta)
            # 1/delta_i == delta_i for +-1 perturbations
            x = x - ak * (f_plus - f_minus) / (2 * ck) * delta
            trace.append(obj.best_value)
        k = max_iter
    except BudgetExhausted:
        return _result(obj, k, False, trace, "evaluation budget exhausted")
    return _result(obj, k, True, trace, "max_iter reached")


def nelder_mead(
    f,
    x0,
    tol_f: float = 1e-10,
    tol_x: float = 1e-6,
    max_evals: int = DEFAULT_MAX_EVALS,
    initial_step: float = 0.1,
    adaptive: bool = True,
) -> OptimizerResult:
    """Reflect/expand/contract/shrink simplex search.

    Converges when both the simplex value spread and its extent fall below
    ``tol_f`` and ``tol_x``; hitting ``max_evals`` returns ``converged=False``.
    """
    obj = _as_objective(f, x0, max_evals)
    x0 = np.array(x0, dtype=float)
    simplex = np.vstack([x0] + [x0 + initial_step * e for e in np.eye(x0.size)])
    trace = []

    def cb(xk):
        trace.append(obj.best_value)

    try:
        res = sopt.minimize(
            obj, x0, method="Nelder-Mead", callback=cb,
            options={"xatol": tol_x, "fatol": tol_f, "maxfev": max_evals, "maxiter": 10 * max_evals,
                     "initial_simplex": simplex, "adaptive": adaptive},
        )
    except BudgetExhausted:
        return _result(obj, len(trace), False, trace, "evaluation budget exhausted")
    return _result(obj, int(res.nit), bool(res.success), trace, str(res.message))


def fd_bfgs(
    f,
    x0,
    fd_step: float = 1e-6,
    gtol: float = 1e-8,
    max_iter: int = 500,
    max_evals: int | None = DEFAULT_MAX_EVALS,
) -> OptimizerResult:
    """Quasi-Newton BFGS with central finite-difference gradients and a Wolfe line search.

    A failed line search returns the best point seen with ``converged=False``.
    """
    obj = _as_objective(f, x0, max_evals)
    trace = []

    def cb(xk):
        trace.append(obj.best_value)

    def jac(x):
        return finite_difference_gradient(obj, x, fd_step)

    try:
        res = sopt.minimize(obj, np.array(x0, dtype=float), jac=jac, method="BFGS", callback=cb,
                            options={"gtol": gtol, "maxiter": max_iter})
    except BudgetExhausted:
        return _result(obj, len(trace), False, trace, "evaluation budget exhausted")
    return _result(obj, int(res.nit), bool(res.success), trace, str(res.message))


OPTIMIZERS = {"spsa": spsa, "nelder_mead": nelder_mead, "fd_bfgs": fd_bfgs}


def check_options(method: str, options: dict | None) -> dict:
    """Validate optimizer name and keyword options; unknown keys are rejected."""
    if method not in OPTIMIZERS:
        raise ConfigurationError(f"unknown optimizer {method!r}; choose from {sorted(OPTIMIZERS)}")
    options = dict(options or {})
    allowed = set(inspect.signature(OPTIMIZERS[method]).parameters) - {"f", "x0"}
    unknown = set(options) - allowed
    if unknown:
        raise ConfigurationError(f"unknown {method} options {sorted(unknown)}")
    return options


def minimize(method: str, f, x0, **options) -> OptimizerResult:
    options = check_options(method, options)
    return OPTIMIZERS[method](f, x0, **options)
