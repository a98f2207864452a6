"""Exact algebra of n-qubit Pauli strings and complex-weighted sums of them.

Conventions
-----------
* ``letters[q]`` is the single-qubit Pauli acting on qubit ``q``.
* Qubit 0 is the least-significant bit of a computational-basis index.
* Text labels are printed with qubit 0 as the *rightmost* character, so the
  term ``X`` on qubit 0 of a 3-qubit register renders as ``IIX``.
"""

from __future__ import annotations

import functools
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

import numpy as np
import scipy.sparse as sp

from .exceptions import DimensionError, ResourceError

DEFAULT_TOLERANCE = 1e-12
DENSE_QUBIT_CAP = 14

_PHASES = (1, 1j, -1, -1j)

# (left, right) -> (power of i, product letter)
_TABLE = {
    "II": (0, "I"), "IX": (0, "X"), "IY": (0, "Y"), "IZ": (0, "Z"),
    "XI": (0, "X"), "XX": (0, "I"), "XY": (1, "Z"), "XZ": (3, "Y"),
    "YI": (0, "Y"), "YX": (3, "Z"), "YY": (0, "I"), "YZ": (1, "X"),
    "ZI": (0, "Z"), "ZX": (1, "Y"), "ZY": (3, "X"), "ZZ": (0, "I"),
}

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@functools.lru_cache(maxsize=1 << 18)
def _mul_letters(a: str, b: str) -> tuple[int, str]:
    power = 0
    out = []
    for pair in map(str.__add__, a, b):
        k, r = _TABLE[pair]
        power += k
        out.append(r)
    return power & 3, "".join(out)


def _check_letters(letters: str) -> None:
    if not letters:
        raise DimensionError("a Pauli string needs at least one qubit")
    bad = set(letters) - set("IXYZ")
    if bad:
        raise ValueError(f"invalid Pauli letters {sorted(bad)!r}")


class PauliTerm:
    """A single Pauli string with a complex coefficient.

    Parameters
    ----------
    letters : str
        One of ``I, X, Y, Z`` per qubit, indexed by qubit number.
    coeff : complex
    """

    __slots__ = ("letters", "coeff")

    def __init__(self, letters: str, coeff: complex = 1.0):
        _check_letters(letters)
        self.letters = letters
        self.coeff = complex(coeff)

    @classmethod
    def from_label(cls, label: str, coeff: complex = 1.0) -> "PauliTerm":
        """Build from a printed label (qubit 0 rightmost)."""
        return cls(label[::-1], coeff)

    @classmethod
    def from_sparse(cls, ops: Mapping[int, str], n_qubits: int, coeff: complex = 1.0) -> "PauliTerm":
        """Build from ``{qubit: letter}``; unspecified qubits carry ``I``."""
        chars = ["I"] * n_qubits
        for q, p in ops.items():
            if not 0 <= q < n_qubits:
                raise DimensionError(f"qubit {q} outside register of {n_qubits}")
            chars[q] = p
        return cls("".join(chars), coeff)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def label(self) -> str:
        return self.letters[::-1]

    @property
    def weight(self) -> int:
        return self.n_qubits - self.letters.count("I")

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, p in enumerate(self.letters) if p != "I")

    def is_zero(self, tol: float = DEFAULT_TOLERANCE) -> bool:
        return abs(self.coeff) <= tol

    def __mul__(self, other):
        if isinstance(other, PauliTerm):
            return mul(self, other)
        if isinstance(other, PauliSum):
            return PauliSum([self]) * other
        return PauliTerm(self.letters, self.coeff * other)

    def __rmul__(self, other):
        return PauliTerm(self.letters, self.coeff * other)

    def __neg__(self):
        return PauliTerm(self.letters, -self.coeff)

    def __add__(self, other):
        return PauliSum([self]) + other

    def __radd__(self, other):
        return PauliSum([self]) + other

    def __sub__(self, other):
        return PauliSum([self]) - other

    def __eq__(self, other):
        if isinstance(other, PauliTerm):
            if self.n_qubits != other.n_qubits:
                return False
            if self.is_zero() and other.is_zero():
                return True
            return self.letters == other.letters and self.coeff == other.coeff
        if isinstance(other, PauliSum):
            return PauliSum([self]) == other
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.letters, self.coeff))

    def __str__(self):
        return f"{self.coeff} * {self.label}"

    def __repr__(self):
        return f"PauliTerm.from_label({self.label!r}, {self.coeff!r})"


def mul(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Product ``a @ b`` of two Pauli terms, tracking the ``±1, ±i`` phase."""
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"cannot multiply {a.n_qubits}- and {b.n_qubits}-qubit terms")
    power, letters = _mul_letters(a.letters, b.letters)
    return PauliTerm(letters, a.coeff * b.coeff * _PHASES[power])


def commutes(a: PauliTerm, b: PauliTerm) -> bool:
    """True when the letter strings commute (coefficients are ignored)."""
    if a.n_qubits != b.n_qubits:
        raise DimensionError("size mismatch")
    clashes = sum(1 for p, q in zip(a.letters, b.letters) if p != "I" and q != "I" and p != q)
    return clashes % 2 == 0


class PauliSum:
    """Linear combination of Pauli strings over a common register.

    Like-letter terms are merged on construction and coefficients with
    magnitude at or below ``tol`` are dropped. Instances are immutable.

    Parameters
    ----------
    terms : iterable of PauliTerm, or mapping ``letters -> coeff``
    n_qubits : int, optional
        Required when ``terms`` is empty.
    tol : float
        Pruning tolerance.
    """

    def __init__(
        self,
        terms: Union[Iterable[PauliTerm], Mapping[str, complex], None] = None,
        n_qubits: int | None = None,
        tol: float = DEFAULT_TOLERANCE,
    ):
        acc: dict[str, complex] = {}
        if isinstance(terms, Mapping):
            items = ((k, complex(v)) for k, v in terms.items())
        else:
            items = ((t.letters, t.coeff) for t in (terms or ()))
        for letters, coeff in items:
            if n_qubits is None:
                _check_letters(letters)
                n_qubits = len(letters)
            elif len(letters) != n_qubits:
                raise DimensionError(f"term {letters!r} does not act on {n_qubits} qubits")
            acc[letters] = acc.get(letters, 0j) + coeff
        if n_qubits is None:
            raise DimensionError("n_qubits is required for an empty PauliSum")
        self._n = int(n_qubits)
        self._tol = float(tol)
        self._terms = {k: v for k, v in acc.items() if abs(v) > tol}
        self._sparse = None

    @classmethod
    def _raw(cls, terms: dict, n_qubits: int, tol: float) -> "PauliSum":
        obj = cls.__new__(cls)
        obj._n = n_qubits
        obj._tol = tol
        obj._terms = {k: v for k, v in terms.items() if abs(v) > tol}
        obj._sparse = None
        return obj

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliSum":
        return cls({"I" * n_qubits: coeff}, n_qubits=n_qubits)

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls(n_qubits=n_qubits)

    @classmethod
    def from_labels(cls, labels: Mapping[str, complex], tol: float = DEFAULT_TOLERANCE) -> "PauliSum":
        """Build from printed labels (qubit 0 rightmost)."""
        return cls({k[::-1]: v for k, v in labels.items()}, tol=tol)

    @property
    def n_qubits(self) -> int:
        return self._n

    @property
    def tol(self) -> float:
        return self._tol

    @property
    def terms(self) -> Mapping[str, complex]:
        """Read-only view ``letters -> coeff``."""
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[PauliTerm]:
        for letters in sorted(self._terms):
            yield PauliTerm(letters, self._terms[letters])

    def __bool__(self):
        return bool(self._terms)

    def coefficient(self, letters: str) -> complex:
        return self._terms.get(letters, 0j)

    def _coerce(self, other) -> "PauliSum":
        if isinstance(other, PauliSum):
            out = other
        elif isinstance(other, PauliTerm):
            out = PauliSum([other], tol=self._tol)
        elif np.isscalar(other):
            out = PauliSum.identity(self._n, other)
        else:
            raise TypeError(f"cannot combine PauliSum with {type(other).__name__}")
        if out.n_qubits != self._n:
            raise DimensionError(f"size mismatch: {self._n} vs {out.n_qubits} qubits")
        return out

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self._terms)
        for k, v in other._terms.items():
            acc[k] = acc.get(k, 0j) + v
        return PauliSum._raw(acc, self._n, self._tol)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + self._coerce(other) * -1

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (PauliSum, PauliTerm)):
            other = self._coerce(other)
            acc: dict[str, complex] = {}
            for ka, va in self._terms.items():
                for kb, vb in other._terms.items():
                    power, letters = _mul_letters(ka, kb)
                    acc[letters] = acc.get(letters, 0j) + va * vb * _PHASES[power]
            return PauliSum._raw(acc, self._n, self._tol)
        c = complex(other)
        return PauliSum._raw({k: v * c for k, v in self._terms.items()}, self._n, self._tol)

    def __rmul__(self, other):
        if isinstance(other, PauliTerm):
            return self._coerce(other) * self
        return self * other

    def __truediv__(self, other):
        return self * (1 / complex(other))

    def dagger(self) -> "PauliSum":
        return PauliSum._raw({k: v.conjugate() for k, v in self._terms.items()}, self._n, self._tol)

    def __eq__(self, other):
        if isinstance(other, PauliTerm):
            other = PauliSum([other], tol=self._tol)
        elif np.isscalar(other):
            other = PauliSum.identity(self._n, other)
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    def allclose(self, other, atol: float = 1e-10) -> bool:
        diff = self - other
        return all(abs(v) <= atol for v in diff._terms.values())

    def max_abs_coeff(self) -> float:
        return max((abs(v) for v in self._terms.values()), default=0.0)

    def to_dense(self, max_qubits: int = DENSE_QUBIT_CAP) -> np.ndarray:
        return to_dense(self, max_qubits)

    def to_sparse(self) -> sp.csr_matrix:
        """Sparse CSR realization, cached on the instance."""
        if self._sparse is None:
            dim = 1 << self._n
            if not self._terms:
                self._sparse = sp.csr_matrix((dim, dim), dtype=complex)
            else:
                rows, cols, data = [], [], []
                for letters, coeff in self._terms.items():
                    perm, phase = pauli_action(letters)
                    rows.append(np.arange(dim))
                    cols.append(perm)
                    data.append(coeff * phase)
                mat = sp.coo_matrix(
                    (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
                    shape=(dim, dim),
                )
                self._sparse = mat.tocsr()
        return self._sparse

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(str(t) for t in self)

    def __repr__(self):
        return f"PauliSum({len(self)} terms on {self._n} qubits)"


def _as_sum(a) -> PauliSum:
    return PauliSum([a]) if isinstance(a, PauliTerm) else a


def add(a: PauliSum, b: PauliSum) -> PauliSum:
    return _as_sum(a) + _as_sum(b)


def scale(a: PauliSum, c: complex) -> PauliSum:
    return _as_sum(a) * c


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """``ab - ba``, merged and pruned."""
    a, b = _as_sum(a), _as_sum(b)
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    # Commuting pairs cancel exactly; anticommuting pairs contribute 2ab.
    acc: dict[str, complex] = {}
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            power, letters = _mul_letters(ka, kb)
            if power & 1:
                acc[letters] = acc.get(letters, 0j) + 2 * va * vb * _PHASES[power]
    return PauliSum._raw(acc, a.n_qubits, a.tol)


def is_hermitian(a: PauliSum, tol: float = DEFAULT_TOLERANCE) -> bool:
    return all(abs(v.imag) <= tol for v in _as_sum(a).terms.values())


def is_antihermitian(a: PauliSum, tol: float = DEFAULT_TOLERANCE) -> bool:
    return all(abs(v.real) <= tol for v in _as_sum(a).terms.values())


def to_dense(a: PauliSum, max_qubits: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """Dense ``2^n x 2^n`` matrix built from Kronecker products."""
    a = _as_sum(a)
    n = a.n_qubits
    if n > max_qubits:
        raise ResourceError(f"{n} qubits exceeds dense cap of {max_qubits}")
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for letters, coeff in a.terms.items():
        mat = np.ones((1, 1), dtype=complex)
        # qubit 0 is the least-significant bit, i.e. the rightmost Kronecker factor
        for p in reversed(letters):
            mat = np.kron(mat, _SINGLE[p])
        out += coeff * mat
    return out


@functools.lru_cache(maxsize=4096)
def pauli_action(letters: str) -> tuple[np.ndarray, np.ndarray]:
    """Index permutation and phases realizing a Pauli string on basis states.

    Returns ``(perm, phase)`` such that ``(P @ psi) == phase * psi[perm]``.
    """
    n = len(letters)
    idx = np.arange(1 << n)
    xmask = sum(1 << q for q, p in enumerate(letters) if p in "XY")
    zbits = [q for q, p in enumerate(letters) if p in "YZ"]
    parity = np.zeros(1 << n, dtype=np.int64)
    for q in zbits:
        parity ^= (idx >> q) & 1
    base = _PHASES[letters.count("Y") & 3]
    perm = idx ^ xmask
    # P|b> = phase(b)|b ^ x>, so (P psi)[c] = phase(c ^ x) psi[c ^ x]
    phase = (base * (1 - 2 * parity))[perm].astype(complex)
    perm.flags.writeable = False
    phase.flags.writeable = False
    return perm, phase
