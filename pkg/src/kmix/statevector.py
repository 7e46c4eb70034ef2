"""Dense statevector simulation with invariant-subspace exponentials.

Amplitudes are a complex128 vector of length 2**n indexed little-endian:
bit ``i`` of the basis index is the value of qubit ``i``.  Public operations
have value semantics (they return a new state); the underscore kernels
mutate a raw amplitude array in place and are shared by the evolution loop.

Rotation conventions:

* ``apply_rx(s, q, theta)``  = exp(-i theta/2 X_q), likewise ``apply_ry``.
* ``apply_xx(s, i, j, beta)`` = exp(-i beta X_i X_j), likewise ``apply_yy``.
  Each equals the analytic two-qubit exponential; the CX-conjugated
  single-qubit rotation circuit realizes the same unitary.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .pauli import DiagonalHamiltonian, PauliString, PauliSum, index_of_bits

DEFAULT_SUBSPACE_CAP = 4096
_LEAK_TOL = 1e-12


@dataclass
class StateVector:
    n: int
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=np.complex128)
        if self.n < 1:
            raise ValueError(f"need at least one qubit, got n={self.n}")
        if self.amps.shape != (1 << self.n,):
            raise ValueError(
                f"amplitude vector has shape {self.amps.shape}, expected ({1 << self.n},)"
            )

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def fidelity(self, other: "StateVector") -> float:
        """|<self|other>|**2."""
        if self.n != other.n:
            raise ValueError(f"register mismatch: {self.n} vs {other.n}")
        return float(np.abs(np.vdot(self.amps, other.amps)) ** 2)


def basis_state(n: int, index: int) -> StateVector:
    if not (0 <= index < (1 << n)):
        raise ValueError(f"basis index {index} outside register of {n} qubits")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n, amps)


def plus_state(n: int) -> StateVector:
    amps = np.full(1 << n, (1 << n) ** -0.5, dtype=np.complex128)
    return StateVector(n, amps)


@lru_cache(maxsize=4096)
def _half_indices(n: int, q: int):
    # Basis indices with bit q clear; partners are offset by 1 << q.
    idx = np.arange(1 << n, dtype=np.int64)
    i0 = idx[((idx >> q) & 1) == 0]
    i0.flags.writeable = False
    return i0


def _rx(amps: np.ndarray, n: int, q: int, theta: float) -> None:
    i0 = _half_indices(n, q)
    i1 = i0 + (1 << q)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    a0, a1 = amps[i0], amps[i1]
    amps[i0] = c * a0 - 1j * s * a1
    amps[i1] = -1j * s * a0 + c * a1


def _ry(amps: np.ndarray, n: int, q: int, theta: float) -> None:
    i0 = _half_indices(n, q)
    i1 = i0 + (1 << q)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    a0, a1 = amps[i0], amps[i1]
    amps[i0] = c * a0 - s * a1
    amps[i1] = s * a0 + c * a1


def _cx(amps: np.ndarray, n: int, control: int, target: int) -> None:
    idx = np.arange(1 << n, dtype=np.int64)
    sel = (((idx >> control) & 1) == 1) & (((idx >> target) & 1) == 0)
    i0 = idx[sel]
    i1 = i0 + (1 << target)
    amps[i0], amps[i1] = amps[i1].copy(), amps[i0].copy()


def _xx(amps: np.ndarray, n: int, i: int, j: int, beta: float) -> None:
    i0 = _half_indices(n, i)
    m = (1 << i) | (1 << j)
    i1 = i0 ^ m
    c, s = np.cos(beta), np.sin(beta)
    a0, a1 = amps[i0], amps[i1]
    amps[i0] = c * a0 - 1j * s * a1
    amps[i1] = c * a1 - 1j * s * a0


def _yy(amps: np.ndarray, n: int, i: int, j: int, beta: float) -> None:
    i0 = _half_indices(n, i)
    m = (1 << i) | (1 << j)
    i1 = i0 ^ m
    # Y_i Y_j |x> carries -1 when bits i, j agree, +1 when they differ.
    sgn = np.where(((i0 >> j) & 1) == 1, 1.0, -1.0)
    c, s = np.cos(beta), np.sin(beta)
    a0, a1 = amps[i0], amps[i1]
    amps[i0] = c * a0 - 1j * s * sgn * a1
    amps[i1] = c * a1 - 1j * s * sgn * a0


def _phase(amps: np.ndarray, energies: np.ndarray, gamma: float) -> None:
    amps *= np.exp(-1j * gamma * energies)


def _pauli_rotation(amps: np.ndarray, n: int, s: PauliString, beta: float) -> None:
    """exp(-i beta P) |psi> for a single string; P**2 = I."""
    from .pauli import apply_pauli_string

    rotated = apply_pauli_string(s, amps, n)
    amps *= np.cos(beta)
    amps -= 1j * np.sin(beta) * rotated


def _check_qubits(n: int, *qs: int) -> None:
    if len(set(qs)) != len(qs):
        raise ValueError(f"qubit indices must be distinct, got {qs}")
    for q in qs:
        if not (0 <= q < n):
            raise ValueError(f"qubit {q} outside register of {n}")


def apply_rx(s: StateVector, q: int, theta: float) -> StateVector:
    _check_qubits(s.n, q)
    out = s.copy()
    _rx(out.amps, out.n, q, theta)
    return out


def apply_ry(s: StateVector, q: int, theta: float) -> StateVector:
    _check_qubits(s.n, q)
    out = s.copy()
    _ry(out.amps, out.n, q, theta)
    return out


def apply_cx(s: StateVector, control: int, target: int) -> StateVector:
    _check_qubits(s.n, control, target)
    out = s.copy()
    _cx(out.amps, out.n, control, target)
    return out


def apply_xx(s: StateVector, i: int, j: int, beta: float) -> StateVector:
    _check_qubits(s.n, i, j)
    out = s.copy()
    _xx(out.amps, out.n, i, j, beta)
    return out


def apply_yy(s: StateVector, i: int, j: int, beta: float) -> StateVector:
    _check_qubits(s.n, i, j)
    out = s.copy()
    _yy(out.amps, out.n, i, j, beta)
    return out


def apply_diagonal(s: StateVector, h: DiagonalHamiltonian, gamma: float) -> StateVector:
    """exp(-i gamma H) for diagonal H; entrywise, no splitting error."""
    if h.n != s.n:
        raise ValueError(f"register mismatch: state {s.n}, hamiltonian {h.n}")
    out = s.copy()
    _phase(out.amps, h.energies, gamma)
    return out


@dataclass(frozen=True)
class SubspaceBasis:
    """Strictly increasing basis indices spanning an invariant subspace."""

    n: int
    indices: tuple[int, ...]

    def __post_init__(self):
        dim = 1 << self.n
        prev = -1
        for x in self.indices:
            if not (0 <= x < dim):
                raise ValueError(f"index {x} outside register of {self.n} qubits")
            if x <= prev:
                raise ValueError("basis indices must be strictly increasing")
            prev = x

    def __len__(self) -> int:
        return len(self.indices)

    def array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.int64)


@lru_cache(maxsize=None)
def _k_hot_indices(n: int, k: int) -> tuple[int, ...]:
    idx = np.arange(1 << n, dtype=np.int64)
    return tuple(int(x) for x in idx[_popcount(idx) == k])


def _popcount(idx: np.ndarray) -> np.ndarray:
    return np.bitwise_count(idx.astype(np.uint64)).astype(np.int64)


def k_hot_basis(n: int, k: int) -> SubspaceBasis:
    """All basis states of Hamming weight exactly k."""
    if not (0 <= k <= n):
        raise ValueError(f"k={k} outside [0, {n}]")
    return SubspaceBasis(n, _k_hot_indices(n, k))


def blocked_basis(n: int, blocks) -> SubspaceBasis:
    """Product basis: each block's qubits at its target weight, other qubits 0.

    ``blocks`` is a sequence of ``(qubits, k)`` pairs with disjoint qubits.
    """
    from itertools import combinations

    seen: set[int] = set()
    for qubits, k in blocks:
        for q in qubits:
            if not (0 <= q < n):
                raise ValueError(f"qubit {q} outside register of {n}")
            if q in seen:
                raise ValueError(f"qubit {q} appears in two blocks")
            seen.add(q)
        if not (0 <= k <= len(qubits)):
            raise ValueError(f"target weight {k} invalid for block of {len(qubits)}")
    indices = [0]
    for qubits, k in blocks:
        patterns = [sum(1 << q for q in combo) for combo in combinations(sorted(qubits), k)]
        indices = [base | p for base in indices for p in patterns]
    return SubspaceBasis(n, tuple(sorted(indices)))


def restrict_to_basis(h: PauliSum, basis: SubspaceBasis) -> np.ndarray:
    """Dense matrix of ``h`` restricted to ``basis``.

    Every Pauli string maps a basis state to a single basis state, so the
    restriction is assembled column by column.  Individual strings may
    point outside the basis as long as those contributions cancel in the
    sum (the XX/YY pairs of an XY mixer do exactly that); a net image
    outside the basis means ``h`` does not preserve the subspace.

    Raises:
        ValueError: if ``h`` leaks out of the subspace.
    """
    idx = basis.array()
    d = len(idx)
    mat = np.zeros((d, d), dtype=np.complex128)
    leaks: dict[tuple[int, int], complex] = {}
    cols = np.arange(d)
    for c, s in h.terms:
        flip = 0
        phase = np.ones(d, dtype=np.complex128)
        for q, ax in s.ops:
            if q >= basis.n:
                raise ValueError(f"operator qubit {q} outside register of {basis.n}")
            bit = (idx >> q) & 1
            if ax == "X":
                flip |= 1 << q
            elif ax == "Y":
                flip |= 1 << q
                phase = phase * np.where(bit == 0, 1j, -1j)
            else:
                phase = phase * np.where(bit == 0, 1.0, -1.0)
        mapped = idx ^ flip
        pos = np.searchsorted(idx, mapped)
        pos_clipped = np.minimum(pos, d - 1)
        outside = idx[pos_clipped] != mapped
        inside = ~outside
        mat[pos_clipped[inside], cols[inside]] += c * phase[inside]
        for col in np.flatnonzero(outside):
            key = (int(mapped[col]), int(col))
            leaks[key] = leaks.get(key, 0.0) + c * phase[col]
    for (target, col), amp in leaks.items():
        if abs(amp) > _LEAK_TOL:
            raise ValueError(
                f"subspace leakage: basis state {int(idx[col])} acquires amplitude "
                f"{amp} on {target} outside the subspace"
            )
    return mat


@dataclass
class SubspaceOperator:
    """Unitary acting on a subspace, identity on its complement."""

    basis: SubspaceBasis
    matrix: np.ndarray


def expm_on_subspace(
    h: PauliSum, basis: SubspaceBasis, beta: float, cap: int = DEFAULT_SUBSPACE_CAP
) -> SubspaceOperator:
    """exp(-i beta h) restricted to an invariant subspace.

    Uses a Hermitian eigendecomposition of the restricted matrix, so the
    result is exact to numerical precision for any beta.
    """
    if len(basis) > cap:
        raise ValueError(f"subspace dimension {len(basis)} exceeds cap {cap}")
    mat = restrict_to_basis(h, basis)
    w, v = np.linalg.eigh(mat)
    u = (v * np.exp(-1j * beta * w)) @ v.conj().T
    return SubspaceOperator(basis, u)


def apply_subspace_operator(s: StateVector, op: SubspaceOperator) -> StateVector:
    if op.basis.n != s.n:
        raise ValueError(f"register mismatch: state {s.n}, operator {op.basis.n}")
    out = s.copy()
    sel = op.basis.array()
    out.amps[sel] = op.matrix @ out.amps[sel]
    return out


def probability_of_set(s: StateVector, targets) -> float:
    """Total probability on a set of basis states.

    Targets may be basis indices or bitstrings (qubit 0 first).
    """
    total = 0.0
    seen: set[int] = set()
    for t in targets:
        x = index_of_bits(t) if isinstance(t, str) else int(t)
        if not (0 <= x < (1 << s.n)):
            raise ValueError(f"target {t!r} outside register of {s.n} qubits")
        if x not in seen:
            seen.add(x)
            total += float(np.abs(s.amps[x]) ** 2)
    return total


def hamming_mass(s: StateVector, blocks) -> float:
    """Probability mass on states meeting every block's target weight.

    ``blocks`` is a sequence of ``(qubits, k)`` pairs; qubits outside all
    blocks are unconstrained.
    """
    idx = np.arange(1 << s.n, dtype=np.int64)
    ok = np.ones(idx.shape, dtype=bool)
    for qubits, k in blocks:
        w = np.zeros(idx.shape, dtype=np.int64)
        for q in qubits:
            if not (0 <= q < s.n):
                raise ValueError(f"qubit {q} outside register of {s.n}")
            w += (idx >> q) & 1
        ok &= w == k
    return float(np.sum(np.abs(s.amps[ok]) ** 2))
