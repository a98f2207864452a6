import numpy as np
import pytest

from adaptvqe.ansatz import Ansatz, pauli_element
from adaptvqe.exceptions import ConfigurationError, DivergenceError
from adaptvqe.optim import (
    ObjectiveFunction,
    check_options,
    fd_bfgs,
    finite_difference_gradient,
    minimize,
    nelder_mead,
    spsa,
)
from adaptvqe.pauli import PauliSum, PauliTerm
from adaptvqe.vqe import energy_function


def sphere(x):
    return float(np.sum(np.asarray(x) ** 2))


def test_spsa_sphere():
    res = spsa(sphere, [1.0, 1.0], max_iter=200, seed=3)
    assert res.best_value < 1e-2


@pytest.mark.parametrize("max_iter", [1, 10, 57])
def test_spsa_evaluation_count(max_iter):
    assert spsa(sphere, [0.5, -0.2, 0.1], max_iter=max_iter).n_evaluations == 2 * max_iter + 1


def test_spsa_seeded_trace_bit_exact():
    a = spsa(sphere, [1.0, 2.0], max_iter=50, seed=11)
    b = spsa(sphere, [1.0, 2.0], max_iter=50, seed=11)
    assert a.trace == b.trace
    assert np.array_equal(a.best_parameters, b.best_parameters)


def test_spsa_divergence():
    with pytest.raises(DivergenceError):
        spsa(lambda x: np.nan, [0.0], max_iter=3)


def test_nelder_mead_parabola():
    res = nelder_mead(lambda x: float((x[0] - 2) ** 2), [0.0])
    assert abs(res.best_parameters[0] - 2) < 1e-4
    assert res.converged


def test_nelder_mead_single_parameter_vqe():
    a = Ansatz(1, [pauli_element(PauliTerm("Y", -1.0))], 0)
    f = energy_function(a, PauliSum.from_labels({"Z": 1}))
    # exp(-i theta Y)|0> has <Z> = cos(2 theta), minimum -1
    res = nelder_mead(f, [0.1])
    assert res.best_value == pytest.approx(-1.0, abs=1e-8)


def test_nelder_mead_trace_monotone():
    rosen = lambda x: float((1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2)
    res = nelder_mead(rosen, [-1.2, 1.0])
    assert all(b <= a for a, b in zip(res.trace, res.trace[1:]))


def test_nelder_mead_budget():
    rosen = lambda x: float((1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2)
    res = nelder_mead(rosen, [-1.2, 1.0], max_evals=20)
    assert not res.converged and res.n_evaluations <= 20


def test_bfgs_quadratic_bowl():
    a = np.diag([1.0, 4.0, 9.0])
    f = lambda x: float(x @ a @ x)
    res = fd_bfgs(f, [1.0, -1.0, 0.5])
    assert res.n_iterations <= 20
    assert np.linalg.norm(finite_difference_gradient(f, res.best_parameters)) < 1e-6


def test_bfgs_h2_uccsd(h2):
    from adaptvqe.ansatz import build_uccsd

    u = build_uccsd(4, 2)
    res = fd_bfgs(energy_function(u, h2.hamiltonian), np.zeros(3))
    assert abs(res.best_value - h2.e_fci) < 1e-6


def test_finite_difference_examples():
    count = ObjectiveFunction(lambda x: float(3 * x[0] - 2 * x[1] + x[2]), 3)
    np.testing.assert_allclose(finite_difference_gradient(count, [0.3, 0.1, -2.0]), [3, -2, 1], atol=1e-10)
    assert count.n_evaluations == 6
    assert finite_difference_gradient(lambda x: x[0] ** 2, [3.0])[0] == pytest.approx(6, abs=1e-6)
    with pytest.raises(ConfigurationError):
        finite_difference_gradient(sphere, [1.0], step=0)


@pytest.mark.parametrize("method", ["spsa", "nelder_mead", "fd_bfgs"])
def test_never_worse_than_start_and_best_consistent(method):
    f = lambda x: float(np.cos(3 * x[0]) + np.sin(2 * x[1]) + 0.1 * x[0] ** 2)
    x0 = np.array([0.4, -0.3])
    res = minimize(method, f, x0)
    assert res.best_value <= f(x0)
    assert f(res.best_parameters) == pytest.approx(res.best_value, abs=1e-12)


def test_budget_respected():
    res = fd_bfgs(sphere, np.ones(5), max_evals=7)
    assert res.n_evaluations <= 7 and not res.converged


def test_unknown_options_rejected():
    with pytest.raises(ConfigurationError):
        check_options("spsa", {"learning_rate": 1})
    with pytest.raises(ConfigurationError):
        check_options("cobyla", {})
