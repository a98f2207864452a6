"""Molecular integrals: FCIDUMP I/O, spin-orbital lift and the Hartree-Fock reference.

Spin orbitals use *block* ordering throughout the package: spin orbital ``p``
with ``p < n_spatial`` is the alpha copy of spatial orbital ``p``, and
``p + n_spatial`` is its beta copy.
"""

from __future__ import annotations

import io
import os
import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .exceptions import FcidumpParseError, OccupationError

SPIN_ORDERING = "block"

_SYM_TOL = 1e-10
_HEADER_KEY = re.compile(r"([A-Za-z0-9_]+)\s*=\s*([^=]*?)(?=,?\s*[A-Za-z0-9_]+\s*=|$)")


@dataclass(frozen=True)
class MolecularIntegrals:
    """Spatial-orbital Hamiltonian in chemists' notation.

    Attributes
    ----------
    n_spatial, n_electrons, ms2 : int
    h1 : ndarray, shape (n, n)
        One-body integrals (Hartree).
    g2_chem : ndarray, shape (n, n, n, n)
        Two-body integrals ``(PQ|RS)`` (Hartree).
    e_core : float
        Nuclear repulsion plus any frozen-core energy (Hartree).
    """

    n_spatial: int
    n_electrons: int
    ms2: int
    h1: np.ndarray
    g2_chem: np.ndarray
    e_core: float = 0.0
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = self.n_spatial
        if n < 1:
            raise ValueError("n_spatial must be positive")
        if self.n_electrons < 1 or self.n_electrons > 2 * n:
            raise OccupationError(f"{self.n_electrons} electrons cannot occupy {n} spatial orbitals")
        if self.h1.shape != (n, n) or self.g2_chem.shape != (n,) * 4:
            raise ValueError("integral tensor shapes do not match n_spatial")

    def check_symmetry(self, tol: float = _SYM_TOL) -> None:
        """Raise ``ValueError`` unless h1 is symmetric and g2 has 8-fold symmetry."""
        g = self.g2_chem
        if not np.allclose(self.h1, self.h1.T, atol=tol, rtol=0):
            raise ValueError("h1 is not symmetric")
        images = [
            g.transpose(1, 0, 2, 3), g.transpose(0, 1, 3, 2), g.transpose(1, 0, 3, 2),
            g.transpose(2, 3, 0, 1), g.transpose(3, 2, 0, 1), g.transpose(2, 3, 1, 0),
            g.transpose(3, 2, 1, 0),
        ]
        for img in images:
            if not np.allclose(g, img, atol=tol, rtol=0):
                raise ValueError("g2_chem lacks 8-fold permutational symmetry")


@dataclass(frozen=True)
class SpinOrbitalHamiltonian:
    """Spin-orbital integrals; ``g_phys[p,q,r,s] = <pq|rs> = (pr|qs)``."""

    n_so: int
    h_so: np.ndarray
    g_phys: np.ndarray
    e_core: float = 0.0


def _parse_header(text: str, line_no: int) -> dict:
    body = text.strip()
    body = re.sub(r"^&FCI", "", body, flags=re.IGNORECASE)
    body = re.sub(r"(&END|/)\s*$", "", body.strip(), flags=re.IGNORECASE)
    out = {}
    for key, value in _HEADER_KEY.findall(body):
        out[key.upper()] = value.strip().rstrip(",")
    for key in ("NORB", "NELEC"):
        if key not in out:
            raise FcidumpParseError(f"header is missing {key}", line_no)
    return out


def _header_int(header: dict, key: str, line_no: int, default=None) -> int:
    if key not in header:
        return default
    try:
        return int(header[key])
    except ValueError:
        raise FcidumpParseError(f"{key}={header[key]!r} is not an integer", line_no) from None


def read_fcidump(path: Union[str, os.PathLike]) -> MolecularIntegrals:
    """Parse the FCIDUMP file at ``path``."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise FcidumpParseError(f"cannot read {os.fspath(path)!r}: {exc.strerror}") from exc
    m = parse_fcidump(raw)
    m.metadata["path"] = os.fspath(path)
    return m


def parse_fcidump(source: Union[str, bytes, io.IOBase]) -> MolecularIntegrals:
    """Parse Molpro-style FCIDUMP text.

    ``source`` may be text, bytes, or an open file. Integral
    indices are 1-based; ``i j 0 0`` is a one-body entry, ``0 0 0 0`` the core
    energy, and anything with all four indices nonzero a two-body ``(ij|kl)``
    entry. Every symmetric image is filled; later entries overwrite earlier
    ones. ORBSYM and ISYM are read but ignored.
    """
    if isinstance(source, io.IOBase):
        raw = source.read()
    else:
        raw = source
    text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    lines = text.splitlines()

    start = next((i for i, ln in enumerate(lines) if ln.strip()), None)
    if start is None or not lines[start].lstrip().upper().startswith("&FCI"):
        raise FcidumpParseError("expected '&FCI' namelist header", (start or 0) + 1)
    header_lines = []
    end = None
    for i in range(start, len(lines)):
        stripped = lines[i].strip()
        header_lines.append(stripped)
        if stripped.upper().endswith("&END") or stripped == "/" or stripped.endswith("/"):
            end = i
            break
    if end is None:
        raise FcidumpParseError("unterminated namelist header (no &END or /)", start + 1)
    header = _parse_header(" ".join(header_lines), start + 1)
    norb = _header_int(header, "NORB", start + 1)
    nelec = _header_int(header, "NELEC", start + 1)
    ms2 = _header_int(header, "MS2", start + 1, default=0)
    if norb < 1:
        raise FcidumpParseError(f"NORB={norb} must be positive", start + 1)

    h1 = np.zeros((norb, norb))
    g2 = np.zeros((norb,) * 4)
    e_core = 0.0
    for line_no, line in enumerate(lines[end + 1:], start=end + 2):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 5:
            raise FcidumpParseError(f"expected 'value i j k l', got {line.strip()!r}", line_no)
        try:
            value = float(fields[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(x) for x in fields[1:])
        except ValueError:
            raise FcidumpParseError(f"cannot parse {line.strip()!r}", line_no) from None
        if any(x < 0 or x > norb for x in (i, j, k, l)):
            raise FcidumpParseError(f"index out of range [0, {norb}] in {line.strip()!r}", line_no)
        if i and j and k and l:
            i, j, k, l = i - 1, j - 1, k - 1, l - 1
            for a, b, c, d in ((i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k)):
                g2[a, b, c, d] = value
                g2[c, d, a, b] = value
        elif i and j and not k and not l:
            h1[i - 1, j - 1] = value
            h1[j - 1, i - 1] = value
        elif not (i or j or k or l):
            e_core = value
        else:
            # orbital energies ("e i 0 0 0") and other partial records carry no Hamiltonian data
            continue
    try:
        return MolecularIntegrals(norb, nelec, ms2, h1, g2, e_core, metadata={"header": header})
    except (OccupationError, ValueError) as exc:
        raise FcidumpParseError(str(exc), start + 1) from None


def write_fcidump(m: MolecularIntegrals, tol: float = 0.0) -> str:
    """Serialize to FCIDUMP text; ``repr`` floats make parse/write round trips bit-exact."""
    n = m.n_spatial
    out = [f" &FCI NORB={n},NELEC={m.n_electrons},MS2={m.ms2},", "  ORBSYM=" + "1," * n, "  ISYM=1,", " &END"]
    g = m.g2_chem
    for i in range(n):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(n):
                for l in range(k + 1):
                    if k * (k + 1) // 2 + l > ij:
                        continue
                    v = g[i, j, k, l]
                    if abs(v) > tol:
                        out.append(f"{float(v)!r} {i + 1} {j + 1} {k + 1} {l + 1}")
    for i in range(n):
        for j in range(i + 1):
            if abs(m.h1[i, j]) > tol:
                out.append(f"{float(m.h1[i, j])!r} {i + 1} {j + 1} 0 0")
    out.append(f"{float(m.e_core)!r} 0 0 0 0")
    return "\n".join(out) + "\n"


def spin_of(p: int, n_spatial: int) -> int:
    """0 for alpha, 1 for beta under block ordering."""
    return 0 if p < n_spatial else 1


def to_spin_orbital(m: MolecularIntegrals) -> SpinOrbitalHamiltonian:
    n = m.n_spatial
    n_so = 2 * n
    h_so = np.zeros((n_so, n_so))
    h_so[:n, :n] = m.h1
    h_so[n:, n:] = m.h1
    # <pq|rs> = (PR|QS) when sigma_p == sigma_r and sigma_q == sigma_s
    phys = m.g2_chem.transpose(0, 2, 1, 3)
    g = np.zeros((n_so,) * 4)
    for s1 in (0, 1):
        for s2 in (0, 1):
            a = slice(s1 * n, (s1 + 1) * n)
            b = slice(s2 * n, (s2 + 1) * n)
            g[a, b, a, b] = phys
    return SpinOrbitalHamiltonian(n_so, h_so, g, float(m.e_core))


def _closed_shell_occ(m: MolecularIntegrals) -> int:
    if m.n_electrons % 2 or m.ms2 != 0:
        raise OccupationError(
            f"closed-shell reference needs even electrons and MS2=0 (got {m.n_electrons}, {m.ms2})"
        )
    return m.n_electrons // 2


def hf_energy(m: MolecularIntegrals) -> float:
    """Closed-shell Hartree-Fock energy of the lowest ``n_electrons/2`` orbitals."""
    n_occ = _closed_shell_occ(m)
    occ = slice(0, n_occ)
    g = m.g2_chem
    coulomb = np.einsum("iijj->", g[occ, occ, occ, occ])
    exchange = np.einsum("ijji->", g[occ, occ, occ, occ])
    return float(m.e_core + 2 * np.trace(m.h1[occ, occ]) + 2 * coulomb - exchange)


def hf_occupied(m: MolecularIntegrals) -> list[int]:
    n_occ = _closed_shell_occ(m)
    return list(range(n_occ)) + [m.n_spatial + i for i in range(n_occ)]


def hf_determinant(m: MolecularIntegrals) -> int:
    """Occupation bitmask of the HF determinant over ``2 * n_spatial`` spin orbitals."""
    return sum(1 << p for p in hf_occupied(m))
