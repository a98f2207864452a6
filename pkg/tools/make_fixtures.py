"""Regenerate the bundled FCIDUMP fixtures.

Requires pyscf, which is NOT a runtime dependency of the package::

    pip install pyscf
    python tools/make_fixtures.py

Writes one FCIDUMP per geometry into ``src/adaptvqe/data/fixtures`` together with
``provenance.json`` holding the generator version, basis, geometry and the
reference RHF / FCI energies computed by pyscf.
"""

import json
from pathlib import Path

import numpy as np
import pyscf
from pyscf import ao2mo, fci, gto, mcscf, scf
from pyscf.tools import fcidump

OUT = Path(__file__).resolve().parents[1] / "src" / "adaptvqe" / "data" / "fixtures"
H2_BONDS = [0.3, 0.5, 0.735, 1.0, 1.25, 1.5, 2.0, 2.5]
LIH_BOND = 1.595


def _mol(atoms, bond):
    return gto.M(
        atom=f"{atoms[0]} 0 0 0; {atoms[1]} 0 0 {bond}",
        basis="sto-3g",
        unit="Angstrom",
        symmetry=False,
        verbose=0,
    )


def full_space(atoms, bond, path):
    mol = _mol(atoms, bond)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    fcidump.from_scf(mf, str(path), tol=1e-15)
    cis = fci.FCI(mf)
    cis.conv_tol = 1e-12
    e_fci = cis.kernel()[0]
    return {
        "molecule": "".join(atoms),
        "bond_length_angstrom": bond,
        "basis": "sto-3g",
        "frozen_core": False,
        "geometry": f"{atoms[0]} 0 0 0; {atoms[1]} 0 0 {bond}",
        "e_hf": float(mf.e_tot),
        "e_fci": float(e_fci),
    }


def frozen_core(atoms, bond, path, ncore=1):
    mol = _mol(atoms, bond)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    norb = mol.nao - ncore
    nelec = mol.nelectron - 2 * ncore
    cas = mcscf.CASCI(mf, norb, nelec)
    h1, ecore = cas.get_h1eff()
    eri = ao2mo.restore(1, cas.get_h2eff(), norb)
    fcidump.from_integrals(str(path), h1, eri, norb, nelec, nuc=ecore, ms=0, tol=1e-15)
    cas.fcisolver.conv_tol = 1e-12
    e_cas = cas.kernel()[0]
    return {
        "molecule": "".join(atoms),
        "bond_length_angstrom": bond,
        "basis": "sto-3g",
        "frozen_core": True,
        "frozen_spatial_orbitals": ncore,
        "geometry": f"{atoms[0]} 0 0 0; {atoms[1]} 0 0 {bond}",
        "e_hf": float(mf.e_tot),
        "e_fci": float(e_cas),
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    meta = {"generator": f"pyscf {pyscf.__version__}", "files": {}}
    for b in H2_BONDS:
        name = f"h2_{b:.3f}.fcidump"
        meta["files"][name] = full_space(("H", "H"), b, OUT / name)
    name = f"lih_{LIH_BOND:.3f}.fcidump"
    meta["files"][name] = full_space(("Li", "H"), LIH_BOND, OUT / name)
    name = f"lih_fc_{LIH_BOND:.3f}.fcidump"
    meta["files"][name] = frozen_core(("Li", "H"), LIH_BOND, OUT / name)
    (OUT / "provenance.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    np.set_printoptions(precision=12)
    main()
