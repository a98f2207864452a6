import json

import numpy as np
import pytest

from adaptvqe.exceptions import FcidumpParseError, OccupationError
from adaptvqe.fermion import build_qubit_hamiltonian
from adaptvqe.integrals import (
    MolecularIntegrals,
    hf_determinant,
    hf_energy,
    parse_fcidump,
    read_fcidump,
    spin_of,
    to_spin_orbital,
    write_fcidump,
)
from adaptvqe.pauli import is_hermitian
from adaptvqe.problem import FIXTURE_DIR, fixture_paths
from adaptvqe.sim import basis_state, expectation

H2_TEXT = """ &FCI NORB=2,NELEC=2,MS2=0,
  ORBSYM=1,1,
  ISYM=1,
 &END
 0.6757 1 1 1 1
 0.1809 2 1 2 1
 0.6646 2 2 1 1
 0.6986 2 2 2 2
-1.2563 1 1 0 0
-0.4719 2 2 0 0
 0.7137 0 0 0 0
"""


def one_orbital(h=-1.25, g=0.675, core=0.714, n_e=2):
    return MolecularIntegrals(1, n_e, 0, np.array([[h]]), np.full((1, 1, 1, 1), g), core)


def test_header_and_core_energy():
    m = parse_fcidump(" &FCI NORB=2,NELEC=2,MS2=0\n &END\n0.7137 0 0 0 0\n")
    assert m.e_core == 0.7137 and m.n_spatial == 2 and m.n_electrons == 2


def test_eightfold_images():
    m = parse_fcidump(H2_TEXT)
    assert m.g2_chem[0, 0, 0, 0] == 0.6757
    # (21|21) fills all images of the exchange-type integral
    for idx in [(1, 0, 1, 0), (0, 1, 1, 0), (1, 0, 0, 1), (0, 1, 0, 1)]:
        assert m.g2_chem[idx] == 0.1809
    assert m.g2_chem[1, 1, 0, 0] == m.g2_chem[0, 0, 1, 1] == 0.6646
    m.check_symmetry()


def test_fortran_exponent_and_last_duplicate_wins():
    text = "&FCI NORB=1,NELEC=2,MS2=0\n&END\n1.0D-01 1 1 1 1\n2.5d-01 1 1 1 1\n-1.0D0 1 1 0 0\n0.0 0 0 0 0\n"
    m = parse_fcidump(text)
    assert m.g2_chem[0, 0, 0, 0] == 0.25 and m.h1[0, 0] == -1.0


@pytest.mark.parametrize("text, line", [
    ("&FCI NELEC=2,MS2=0\n&END\n", 1),
    ("&FCI NORB=x,NELEC=2\n&END\n", 1),
    ("&FCI NORB=2,NELEC=2\n&END\n0.1 3 1 1 1\n", 3),
    ("&FCI NORB=2,NELEC=2\n&END\n0.1 1 1 1 -1\n", 3),
    ("&FCI NORB=2,NELEC=2\n&END\nabc 1 1 1 1\n", 3),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(FcidumpParseError) as info:
        parse_fcidump(text)
    assert info.value.line == line


def test_missing_file():
    with pytest.raises(FcidumpParseError):
        read_fcidump("/nonexistent/h2.fcidump")


@pytest.mark.parametrize("path", fixture_paths(), ids=lambda p: p.stem)
def test_round_trip_bit_exact(path):
    m = read_fcidump(path)
    again = parse_fcidump(write_fcidump(m))
    assert np.array_equal(m.h1, again.h1)
    assert np.array_equal(m.g2_chem, again.g2_chem)
    assert m.e_core == again.e_core
    m.check_symmetry()


def test_spin_orbital_single_orbital():
    so = to_spin_orbital(one_orbital())
    np.testing.assert_array_equal(so.h_so, np.diag([-1.25, -1.25]))


def test_spin_orbital_index_bookkeeping(h2):
    m = h2.integrals
    so = to_spin_orbital(m)
    # p = alpha0 (0), q = beta0 (2): <pq|pq> = (00|00)
    assert so.g_phys[0, 2, 0, 2] == m.g2_chem[0, 0, 0, 0]


@pytest.mark.parametrize("path", fixture_paths(), ids=lambda p: p.stem)
def test_spin_deltas_and_particle_symmetry(path):
    m = read_fcidump(path)
    so = to_spin_orbital(m)
    n = m.n_spatial
    spin = np.array([spin_of(p, n) for p in range(so.n_so)])
    bad_h = spin[:, None] != spin[None, :]
    assert np.all(so.h_so[bad_h] == 0)
    p, q, r, s = np.ix_(spin, spin, spin, spin)
    forbidden = (p != r) | (q != s)
    assert np.all(so.g_phys[forbidden] == 0)
    np.testing.assert_allclose(so.g_phys, so.g_phys.transpose(1, 0, 3, 2), atol=1e-10)


def test_hf_energy_closed_formula():
    assert hf_energy(one_orbital()) == pytest.approx(0.714 + 2 * -1.25 + 0.675, abs=1e-14)


def test_hf_determinants(h2):
    assert hf_determinant(h2.integrals) == 0b0101
    assert hf_determinant(one_orbital()) == 0b11
    lih = read_fcidump(FIXTURE_DIR / "lih_1.595.fcidump")
    assert [p for p in range(12) if hf_determinant(lih) >> p & 1] == [0, 1, 6, 7]


def test_odd_electrons_rejected():
    with pytest.raises(OccupationError):
        hf_energy(MolecularIntegrals(2, 1, 1, np.zeros((2, 2)), np.zeros((2,) * 4)))


def test_qubit_hamiltonian_hermitian(h2):
    assert is_hermitian(h2.hamiltonian)
    assert max(abs(t.coeff.imag) for t in h2.hamiltonian) < 1e-12


@pytest.mark.parametrize("path", fixture_paths(), ids=lambda p: p.stem)
def test_hf_energy_matches_statevector(path):
    m = read_fcidump(path)
    h = build_qubit_hamiltonian(to_spin_orbital(m))
    assert expectation(basis_state(h.n_qubits, hf_determinant(m)), h) == pytest.approx(hf_energy(m), abs=1e-10)


def test_fixture_provenance():
    prov = json.loads((FIXTURE_DIR / "provenance.json").read_text())
    names = {p.name for p in fixture_paths()}
    assert names == set(prov["files"])
    for name, info in prov["files"].items():
        assert info["basis"] == "sto-3g" and "geometry" in info
        m = read_fcidump(FIXTURE_DIR / name)
        assert hf_energy(m) == pytest.approx(info["e_hf"], abs=1e-8)
