"""Sparse Pauli-string algebra on an n-qubit register.

Conventions used throughout the package:

* Basis index ``x`` encodes the bitstring little-endian: bit ``i`` of ``x``
  is the value of qubit ``i``.  Bitstrings written as text read qubit 0
  first, so ``"1100"`` means qubits 0 and 1 set.
* A Pauli string is a map ``qubit -> axis`` over its non-identity support.
  Canonical ordering of strings is lexicographic over the sorted
  ``(qubit, axis)`` pairs with ``X < Y < Z``; the identity sorts first.
* Sums carry real coefficients (Hermitian operators).  Commutators of
  Hermitian Pauli sums are anti-Hermitian, so they are returned as the
  Hermitian ``H`` with ``[A, B] = i * H``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_AXES = ("X", "Y", "Z")

# Single-qubit products P*Q -> (power of i, resulting axis or None for I).
_PRODUCT = {
    ("X", "X"): (0, None), ("Y", "Y"): (0, None), ("Z", "Z"): (0, None),
    ("X", "Y"): (1, "Z"), ("Y", "X"): (3, "Z"),
    ("Y", "Z"): (1, "X"), ("Z", "Y"): (3, "X"),
    ("Z", "X"): (1, "Y"), ("X", "Z"): (3, "Y"),
}

DENSE_QUBIT_CAP = 12

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_MATS = {"X": _X, "Y": _Y, "Z": _Z}


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, identity elsewhere.

    ``ops`` holds ``(qubit, axis)`` pairs sorted by qubit.  The empty tuple
    is the identity.
    """

    ops: tuple[tuple[int, str], ...]

    def __post_init__(self):
        seen = set()
        prev = -1
        for q, a in self.ops:
            if q < 0:
                raise ValueError(f"negative qubit index {q}")
            if a not in _AXES:
                raise ValueError(f"invalid axis {a!r} on qubit {q}")
            if q in seen or q <= prev:
                raise ValueError("qubits must be distinct and sorted")
            seen.add(q)
            prev = q

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.ops)

    def axis(self, qubit: int) -> str | None:
        for q, a in self.ops:
            if q == qubit:
                return a
        return None

    def __str__(self) -> str:
        if not self.ops:
            return "I"
        return " ".join(f"{a}{q}" for q, a in self.ops)


def pauli_string(ops: dict[int, str]) -> PauliString:
    """Build a PauliString from a ``{qubit: axis}`` map."""
    return PauliString(tuple(sorted(ops.items())))


def paulis_commute(a: PauliString, b: PauliString) -> bool:
    """Whether two Pauli strings commute.

    Two strings commute exactly when the number of qubits on which they
    carry different non-identity axes is even.
    """
    bmap = dict(b.ops)
    odd = 0
    for q, ax in a.ops:
        other = bmap.get(q)
        if other is not None and other != ax:
            odd ^= 1
    return odd == 0


def pauli_product(a: PauliString, b: PauliString) -> tuple[int, PauliString]:
    """Product ``A @ B`` as ``(k, C)`` with ``A @ B = i**k * C``."""
    bmap = dict(b.ops)
    phase = 0
    out: dict[int, str] = {}
    for q, ax in a.ops:
        other = bmap.pop(q, None)
        if other is None:
            out[q] = ax
        else:
            k, res = _PRODUCT[(ax, other)]
            phase = (phase + k) % 4
            if res is not None:
                out[q] = res
    out.update(bmap)
    return phase, pauli_string(out)


@dataclass(frozen=True)
class PauliSum:
    """Real-coefficient sum of Pauli strings in canonical form."""

    terms: tuple[tuple[float, PauliString], ...]

    def __post_init__(self):
        for c, _ in self.terms:
            if not np.isfinite(c):
                raise ValueError(f"non-finite coefficient {c}")

    def __len__(self) -> int:
        return len(self.terms)


def pauli_sum(terms) -> PauliSum:
    """Canonicalize ``(coefficient, string)`` pairs.

    Duplicate strings are merged, exact-zero coefficients dropped, and
    terms sorted lexicographically by their ``(qubit, axis)`` pairs.
    """
    acc: dict[PauliString, float] = {}
    for c, s in terms:
        acc[s] = acc.get(s, 0.0) + float(c)
    kept = [(c, s) for s, c in acc.items() if c != 0.0]
    kept.sort(key=lambda t: t[1].ops)
    return PauliSum(tuple(kept))


def pauli_commutator(a: PauliString, b: PauliString) -> PauliSum:
    """Commutator of two strings, as ``H`` with ``[A, B] = i * H``.

    Commuting strings give the empty sum.  Anticommuting strings give a
    single term: ``[A, B] = 2 A B = 2 i**k C``, and since ``k`` is odd this
    equals ``i * (2 * i**(k-1) * C)`` with ``i**(k-1) = +/-1`` real.
    """
    if paulis_commute(a, b):
        return pauli_sum([])
    k, c = pauli_product(a, b)
    sign = 1.0 if k % 4 == 1 else -1.0
    return pauli_sum([(2.0 * sign, c)])


def commutator_sum(a: PauliSum, b: PauliSum) -> PauliSum:
    """Commutator of two Hermitian sums, as ``H`` with ``[A, B] = i * H``."""
    parts: list[tuple[float, PauliString]] = []
    for ca, sa in a.terms:
        for cb, sb in b.terms:
            inner = pauli_commutator(sa, sb)
            for c, s in inner.terms:
                parts.append((ca * cb * c, s))
    return pauli_sum(parts)


def string_to_matrix(s: PauliString, n: int) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix of a string; small registers only."""
    _check_dense(n, s.support)
    mat = np.array([[1.0 + 0.0j]])
    smap = dict(s.ops)
    for q in range(n - 1, -1, -1):
        op = _MATS.get(smap.get(q, ""), np.eye(2, dtype=np.complex128))
        mat = np.kron(mat, op)
    return mat


def sum_to_matrix(h: PauliSum, n: int) -> np.ndarray:
    """Dense matrix of a Pauli sum; small registers only."""
    _check_dense(n, h_support(h))
    out = np.zeros((2**n, 2**n), dtype=np.complex128)
    for c, s in h.terms:
        out += c * string_to_matrix(s, n)
    return out


def _check_dense(n: int, support) -> None:
    if n > DENSE_QUBIT_CAP:
        raise ValueError(
            f"register of {n} qubits exceeds dense cap {DENSE_QUBIT_CAP}"
        )
    if support and max(support) >= n:
        raise ValueError(f"operator touches qubit {max(support)} outside register of {n}")


def h_support(h: PauliSum) -> tuple[int, ...]:
    qs: set[int] = set()
    for _, s in h.terms:
        qs.update(s.support)
    return tuple(sorted(qs))


def apply_pauli_string(s: PauliString, amps: np.ndarray, n: int) -> np.ndarray:
    """Matrix-free ``P |psi>`` on a length ``2**n`` amplitude vector.

    Each string is a signed permutation of the basis: X flips a bit, Y
    flips with phase ``+i`` (bit 0) / ``-i`` (bit 1), Z applies a sign.
    """
    dim = 1 << n
    if amps.shape != (dim,):
        raise ValueError(f"amplitude vector has shape {amps.shape}, expected ({dim},)")
    idx = np.arange(dim)
    phase = np.ones(dim, dtype=np.complex128)
    flip = 0
    for q, ax in s.ops:
        if q >= n:
            raise ValueError(f"qubit {q} outside register of {n}")
        bit = (idx >> q) & 1
        if ax == "X":
            flip |= 1 << q
        elif ax == "Y":
            flip |= 1 << q
            phase = phase * np.where(bit == 0, 1j, -1j)
        else:
            phase = phase * np.where(bit == 0, 1.0, -1.0)
    out = np.zeros(dim, dtype=np.complex128)
    out[idx ^ flip] = phase * amps
    return out


def apply_pauli_sum(h: PauliSum, amps: np.ndarray, n: int) -> np.ndarray:
    """Matrix-free ``H |psi>``."""
    out = np.zeros_like(amps, dtype=np.complex128)
    for c, s in h.terms:
        out += c * apply_pauli_string(s, amps, n)
    return out


def norm_of_commutator(a: PauliSum, b: PauliSum, n: int) -> float:
    """Spectral norm of ``[A, B]`` for Hermitian Pauli sums.

    The commutator is ``i * H`` with ``H`` Hermitian, so the norm is the
    largest eigenvalue magnitude of ``H``.  The dense evaluation runs on
    the joint support of the result, which never changes the norm.

    Raises:
        ValueError: if the register exceeds the dense cap.
    """
    if n > DENSE_QUBIT_CAP:
        raise ValueError(
            f"register of {n} qubits exceeds dense cap {DENSE_QUBIT_CAP}"
        )
    h = commutator_sum(a, b)
    if not h.terms:
        return 0.0
    support = h_support(h)
    compact = _compress_support(h, support)
    mat = sum_to_matrix(compact, len(support))
    return float(np.max(np.abs(np.linalg.eigvalsh(mat))))


def _compress_support(h: PauliSum, support: tuple[int, ...]) -> PauliSum:
    relabel = {q: i for i, q in enumerate(support)}
    terms = []
    for c, s in h.terms:
        terms.append((c, pauli_string({relabel[q]: a for q, a in s.ops})))
    return pauli_sum(terms)


@dataclass
class IsingModel:
    """Binary quadratic model over x in {0,1}**n.

    Energy of a bitstring: ``offset + sum_i linear[i] x_i
    + sum_{(i,j)} quadratic[(i,j)] x_i x_j`` with ``i < j``.
    """

    n: int
    linear: tuple[float, ...]
    quadratic: dict[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one variable, got n={self.n}")
        self.linear = tuple(float(v) for v in self.linear)
        if len(self.linear) != self.n:
            raise ValueError(f"{len(self.linear)} linear terms for n={self.n}")
        clean = {}
        for (i, j), w in self.quadratic.items():
            if not (0 <= i < j < self.n):
                raise ValueError(f"quadratic key ({i}, {j}) not ordered within n={self.n}")
            clean[(i, j)] = float(w)
        self.quadratic = clean
        self.offset = float(self.offset)


@dataclass
class DiagonalHamiltonian:
    """Diagonal operator stored as the energy of every basis state."""

    n: int
    energies: np.ndarray

    def __post_init__(self):
        self.energies = np.asarray(self.energies, dtype=np.float64)
        if self.energies.shape != (1 << self.n,):
            raise ValueError(
                f"energy table has shape {self.energies.shape}, expected ({1 << self.n},)"
            )
        if not np.all(np.isfinite(self.energies)):
            raise ValueError("non-finite energies")


MAX_DIAGONAL_QUBITS = 28


def ising_to_diagonal(m: IsingModel, max_qubits: int = MAX_DIAGONAL_QUBITS) -> DiagonalHamiltonian:
    """Expand an Ising model into its full 2**n energy table."""
    if m.n > max_qubits:
        raise ValueError(f"n={m.n} exceeds diagonal expansion limit {max_qubits}")
    idx = np.arange(1 << m.n, dtype=np.int64)
    energies = np.full(idx.shape, m.offset, dtype=np.float64)
    bits = []
    for i in range(m.n):
        b = ((idx >> i) & 1).astype(np.float64)
        bits.append(b)
        if m.linear[i] != 0.0:
            energies += m.linear[i] * b
    for (i, j), w in m.quadratic.items():
        energies += w * bits[i] * bits[j]
    return DiagonalHamiltonian(m.n, energies)


def evaluate(m: IsingModel, x) -> float:
    """Energy of one assignment; ``x`` is a bit sequence or '0'/'1' string."""
    bits = [int(ch) for ch in x]
    if len(bits) != m.n or any(b not in (0, 1) for b in bits):
        raise ValueError(f"assignment {x!r} is not a length-{m.n} bitstring")
    e = m.offset
    for i, b in enumerate(bits):
        e += m.linear[i] * b
    for (i, j), w in m.quadratic.items():
        e += w * bits[i] * bits[j]
    return e


def index_of_bits(bits) -> int:
    """Basis index of a bit sequence (bit i of the index = bits[i])."""
    x = 0
    for i, b in enumerate(bits):
        if int(b) not in (0, 1):
            raise ValueError(f"invalid bit {b!r}")
        x |= int(b) << i
    return x


def bits_of_index(x: int, n: int) -> str:
    """Bitstring of a basis index, qubit 0 first."""
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))
