import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adaptvqe.exceptions import DimensionError, ResourceError
from adaptvqe.pauli import (
    PauliSum,
    PauliTerm,
    add,
    commutator,
    commutes,
    is_antihermitian,
    is_hermitian,
    mul,
    scale,
    to_dense,
)

SINGLE = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]),
}


def dense_term(letters, coeff=1.0):
    # independent Kronecker oracle: qubit 0 is the rightmost factor
    m = np.eye(1)
    for ch in reversed(letters):
        m = np.kron(m, SINGLE[ch])
    return coeff * m


letters_st = st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.text("IXYZ", min_size=n, max_size=n), st.text("IXYZ", min_size=n, max_size=n)))
coeff_st = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def test_mul_examples():
    assert mul(PauliTerm("X"), PauliTerm("X")) == PauliTerm("I")
    assert mul(PauliTerm("X"), PauliTerm("Y")) == PauliTerm("Z", 1j)
    # X on qubit 1, Z on qubit 0 times Y on qubit 1
    xz, yi = PauliTerm.from_label("XZ"), PauliTerm.from_label("YI")
    prod = mul(xz, yi)
    assert prod == PauliTerm.from_label("ZZ", 1j)
    np.testing.assert_allclose(to_dense(PauliSum([prod])), to_dense(PauliSum([xz])) @ to_dense(PauliSum([yi])))


def test_mul_size_mismatch():
    with pytest.raises(DimensionError):
        mul(PauliTerm("X"), PauliTerm("XX"))


@pytest.mark.property
@settings(max_examples=200, deadline=None)
@given(letters_st, coeff_st, coeff_st)
def test_mul_matches_dense(pair, ca, cb):
    a, b = PauliTerm(pair[0], ca), PauliTerm(pair[1], cb)
    prod = mul(a, b)
    np.testing.assert_allclose(dense_term(prod.letters, prod.coeff),
                               dense_term(a.letters, ca) @ dense_term(b.letters, cb), atol=1e-14 * (1 + abs(ca * cb)))


def test_commutator_examples():
    x, y = PauliSum.from_labels({"X": 1}), PauliSum.from_labels({"Y": 1})
    assert len(commutator(x, x)) == 0
    assert commutator(x, y) == PauliSum.from_labels({"Z": 2j})


@pytest.mark.property
def test_commutator_two_qubit_brute_force():
    for la, lb in itertools.product(("".join(p) for p in itertools.product("IXYZ", repeat=2)), repeat=2):
        a, b = PauliSum.from_labels({la: 1}), PauliSum.from_labels({lb: 1})
        c = commutator(a, b)
        da, db = dense_term(la[::-1]), dense_term(lb[::-1])
        np.testing.assert_allclose(to_dense(c), da @ db - db @ da, atol=1e-14)
        assert len(c) in (0, 1)
        if len(c):
            (t,) = c
            assert abs(t.coeff) == pytest.approx(2.0)
            assert t.coeff / 2 in (1, -1, 1j, -1j)


@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(letters_st)
def test_commutation_rule_and_antisymmetry(pair):
    a, b = PauliSum.from_labels({pair[0]: 1}), PauliSum.from_labels({pair[1]: 1})
    clash = sum(p != "I" and q != "I" and p != q for p, q in zip(*pair))
    assert (len(commutator(a, b)) == 0) == (clash % 2 == 0)
    assert commutes(PauliTerm(pair[0]), PauliTerm(pair[1])) == (clash % 2 == 0)
    assert commutator(a, b) == -commutator(b, a)


def test_add_and_scale_examples():
    x = PauliSum.from_labels({"X": 1})
    assert add(x, x) == PauliSum.from_labels({"X": 2})
    assert len(add(x, scale(x, -1))) == 0
    lhs = PauliSum.from_labels({"X": 0.5, "Y": 0.5}) + PauliSum.from_labels({"X": 0.5, "Y": -0.5})
    assert lhs == PauliSum.from_labels({"X": 1})


def test_add_dimension_mismatch():
    with pytest.raises(DimensionError):
        add(PauliSum.from_labels({"X": 1}), PauliSum.from_labels({"XX": 1}))


sum_st = st.integers(1, 3).flatmap(lambda n: st.dictionaries(
    st.text("IXYZ", min_size=n, max_size=n), coeff_st, max_size=6).map(lambda d: (n, d)))


@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(sum_st, st.data())
def test_add_commutative_associative(sd, data):
    n, d = sd
    others = [data.draw(st.dictionaries(st.text("IXYZ", min_size=n, max_size=n), coeff_st, max_size=6)) for _ in range(2)]
    a, b, c = (PauliSum(x, n_qubits=n) for x in (d, *others))
    assert (a + b).allclose(b + a, atol=1e-12)
    assert ((a + b) + c).allclose(a + (b + c), atol=1e-11)


@pytest.mark.property
def test_pruning_tolerance():
    s = PauliSum.from_labels({"X": 1.0, "Z": 1e-13})
    assert s.coefficient("Z") == 0 and len(s) == 1
    t = PauliSum.from_labels({"X": 1.0}) + PauliSum.from_labels({"X": -1.0 + 5e-13})
    assert len(t) == 0
    loose = PauliSum({"Z": 1e-8}, n_qubits=1, tol=1e-6)
    assert len(loose) == 0


def test_zero_term_equals_additive_zero():
    assert PauliTerm("XY", 0) == 0
    assert PauliTerm("XY", 0) == PauliTerm("ZZ", 0)
    assert PauliTerm("XY", 0).is_zero()


def test_hermiticity():
    assert is_hermitian(PauliSum.from_labels({"X": 1.0}))
    assert is_antihermitian(PauliSum.from_labels({"X": 1j}))
    assert not is_hermitian(PauliSum.from_labels({"X": 1j}))


def test_to_dense_examples():
    np.testing.assert_array_equal(to_dense(PauliSum.from_labels({"Z": 1})), np.diag([1, -1]))
    np.testing.assert_array_equal(to_dense(PauliSum.from_labels({"X": 1})), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(to_dense(PauliSum.from_labels({"ZZ": 1})), np.diag([1, -1, -1, 1]))


def test_to_dense_qubit_zero_is_lsb():
    # X on qubit 0 flips the lowest index bit
    m = to_dense(PauliSum.from_labels({"IX": 1}))
    assert m[1, 0] == 1 and m[2, 0] == 0


def test_to_dense_cap():
    with pytest.raises(ResourceError):
        to_dense(PauliSum.from_labels({"Z" * 5: 1}), max_qubits=4)


def test_label_rendering():
    t = PauliTerm.from_label("XZIY", -0.5)
    assert str(t) == "(-0.5+0j) * XZIY"
    assert t.letters == "YIZX"
    assert t.weight == 3 and t.support == (0, 2, 3)


def test_sparse_matches_dense(rng):
    labels = {"".join(rng.choice(list("IXYZ"), 3)): complex(rng.normal(), rng.normal()) for _ in range(6)}
    s = PauliSum.from_labels(labels)
    np.testing.assert_allclose(s.to_sparse().toarray(), s.to_dense(), atol=1e-14)
