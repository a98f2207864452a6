import json

import numpy as np
import pytest

from adaptvqe.adapt import AdaptConfig, pool_gradient, run_adapt, run_qeb_adapt
from adaptvqe.ansatz import Ansatz, build_fermionic_pool, build_pool, build_qeb_pool
from adaptvqe.exceptions import ConfigurationError, PoolError
from adaptvqe.fermion import number_operator
from adaptvqe.pauli import PauliSum
from adaptvqe.sim import Statevector, basis_state, expectation

from conftest import CHEMICAL_ACCURACY, random_state


def test_commuting_generator_has_zero_gradient(rng):
    h = PauliSum.from_labels({"ZZ": 1.0, "XX": 0.5})
    a = PauliSum.from_labels({"YY": 1j})  # YY commutes with ZZ and XX
    s = Statevector(2, random_state(rng, 2))
    assert pool_gradient(s, h, a) == pytest.approx(0, abs=1e-14)


def test_h2_hf_gradients_against_dense(h2):
    pool = build_fermionic_pool(4, 2)
    hf = basis_state(4, h2.reference_mask)
    hd = h2.hamiltonian.to_dense()
    for g, label in zip(pool.generators, pool.labels):
        ad = g.to_dense()
        brute = np.vdot(hf.amps, (hd @ ad - ad @ hd) @ hf.amps).real
        assert pool_gradient(hf, h2.hamiltonian, g) == pytest.approx(brute, abs=1e-12)
        if "," in label:
            assert abs(brute) > 0.1
        else:
            assert abs(brute) < 1e-10


@pytest.mark.property
@pytest.mark.parametrize("flavor", ["fermionic", "qubit", "qeb"])
def test_gradient_methods_and_finite_difference(h2, rng, flavor):
    pool = build_pool(flavor, 4, 2, keep_fraction=1.0)
    for _ in range(3):
        s = Statevector(4, random_state(rng, 4))
        for i, g in enumerate(pool.generators):
            overlap = pool_gradient(s, h2.hamiltonian, g)
            assert pool_gradient(s, h2.hamiltonian, g, method="commutator") == pytest.approx(overlap, abs=1e-10)
            el = pool.element(i)
            e = lambda t: expectation(Statevector(4, el.apply(s.amps, [t])), h2.hamiltonian)
            step = 1e-5
            assert (e(step) - e(-step)) / (2 * step) == pytest.approx(overlap, abs=1e-6)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        AdaptConfig(max_operators=0)
    with pytest.raises(ConfigurationError):
        AdaptConfig(epsilon=0)
    with pytest.raises(ConfigurationError):
        AdaptConfig(qeb_top_k=0)
    with pytest.raises(ConfigurationError):
        AdaptConfig(norm="l1")
    with pytest.raises(ConfigurationError):
        AdaptConfig(optimizer="spsa", optimizer_options={"gtol": 1})


def test_fermionic_h2(h2):
    res = run_adapt(h2, build_fermionic_pool(4, 2), AdaptConfig(epsilon=1e-6))
    assert res.iterations[0].label == "0,2->1,3"
    assert res.n_iterations <= 3
    assert res.stop_reason == "gradient_converged"
    assert abs(res.final_energy - h2.e_fci) < 1e-8


def test_huge_epsilon_stops_immediately(h2):
    res = run_adapt(h2, build_fermionic_pool(4, 2), AdaptConfig(epsilon=1e3))
    assert res.n_iterations == 0 and res.stop_reason == "gradient_converged"
    assert res.final_energy == pytest.approx(h2.e_hf, abs=1e-12)


def test_max_operators_stop(lih_fc):
    pool = build_fermionic_pool(lih_fc.n_qubits, lih_fc.n_electrons)
    res = run_adapt(lih_fc, pool, AdaptConfig(epsilon=1e-8, max_operators=2))
    assert res.n_iterations == 2 and res.stop_reason == "max_operators"


def test_max_norm_is_looser_than_l2(lih_fc):
    pool = build_fermionic_pool(lih_fc.n_qubits, lih_fc.n_electrons)
    l2 = run_adapt(lih_fc, pool, AdaptConfig(epsilon=2e-2, max_operators=20))
    mx = run_adapt(lih_fc, pool, AdaptConfig(epsilon=2e-2, max_operators=20, norm="max"))
    assert mx.n_iterations <= l2.n_iterations


def test_qeb_k1_equals_plain(lih_fc):
    pool = build_qeb_pool(lih_fc.n_qubits, lih_fc.n_electrons)
    plain = run_adapt(lih_fc, pool, AdaptConfig(pool="qeb", max_operators=4))
    k1 = run_qeb_adapt(lih_fc, pool, AdaptConfig(pool="qeb", max_operators=4, qeb_top_k=1))
    assert [it.selected for it in plain.iterations] == [it.selected for it in k1.iterations]
    np.testing.assert_allclose(plain.energies, k1.energies, atol=1e-9)


def test_qeb_h2(h2):
    pool = build_qeb_pool(4, 2)
    res = run_qeb_adapt(h2, pool, AdaptConfig(pool="qeb", qeb_top_k=3))
    assert abs(res.final_energy - h2.e_fci) < CHEMICAL_ACCURACY
    assert all(it.n_inner_vqe == 3 for it in res.iterations)


def test_qeb_top_k_bounded_by_pool(h2):
    with pytest.raises(ConfigurationError):
        run_qeb_adapt(h2, build_qeb_pool(4, 2), AdaptConfig(pool="qeb", qeb_top_k=4))


def test_pool_register_mismatch(h2):
    with pytest.raises(PoolError):
        run_adapt(h2, build_fermionic_pool(6, 2))


@pytest.mark.property
@pytest.mark.parametrize("flavor", ["fermionic", "qeb"])
def test_trace_properties(lih_fc, flavor):
    pool = build_pool(flavor, lih_fc.n_qubits, lih_fc.n_electrons)
    loop = run_qeb_adapt if flavor == "qeb" else run_adapt
    res = loop(lih_fc, pool, AdaptConfig(pool=flavor, max_operators=5, epsilon=1e-6))
    energies = np.r_[res.initial_energy, res.energies]
    assert np.all(np.diff(energies) <= 1e-9)
    n_op = number_operator(lih_fc.n_qubits)
    for k in range(1, res.n_iterations + 1):
        sub = res.ansatz.elements[:k]
        psi = Ansatz(lih_fc.n_qubits, sub, lih_fc.reference_mask).prepare(res.iterations[k - 1].parameters)
        assert expectation(psi, n_op) == pytest.approx(lih_fc.n_electrons, abs=1e-10)
        assert expectation(psi, lih_fc.hamiltonian) == pytest.approx(res.iterations[k - 1].energy, abs=1e-12)


def test_screening_independent_of_jobs(lih_fc):
    pool = build_fermionic_pool(lih_fc.n_qubits, lih_fc.n_electrons)
    a = run_adapt(lih_fc, pool, AdaptConfig(max_operators=3))
    b = run_adapt(lih_fc, pool, AdaptConfig(max_operators=3, n_jobs=4))
    assert a.to_json() == b.to_json()


def test_serialization(h2):
    res = run_adapt(h2, build_fermionic_pool(4, 2), AdaptConfig(epsilon=1e-6))
    doc = json.loads(res.to_json())
    assert doc["stop_reason"] == "gradient_converged"
    assert doc["iterations"][0]["label"] == "0,2->1,3"
    lines = res.to_csv().splitlines()
    assert lines[0].startswith("iteration,label,gradient")
    assert len(lines) == res.n_iterations + 1
