"""Mixer Hamiltonians and their evolution steps.

Sign conventions, fixed once for the whole package:

* XY mixers carry a -1 coefficient:  H = -sum_edges (X_i X_j + Y_i Y_j).
  The blocked Dicke state is then a ground-sector eigenstate (eigenvalue
  -2k(b-k) per block of b qubits at weight k).
* The transverse-field mixer is H = -sum_i X_i, whose ground state is the
  uniform superposition.

A mixer step evolves by exp(-i beta H).  For XY mixers the Trotterized
step applies exp(-i beta * (-1) (XX + YY)) per edge as two commuting
two-qubit exponentials; the exact step applies exp(-i beta H_block) per
block through an eigendecomposition on the block's weight sectors, which
the mixer leaves invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .pauli import PauliSum, pauli_string, pauli_sum
from .statevector import (
    DEFAULT_SUBSPACE_CAP,
    StateVector,
    expm_on_subspace,
    k_hot_basis,
    plus_state,
    _rx,
    _xx,
    _yy,
)


class MixerKind(Enum):
    X = "x"
    XY_BLOCKED = "xy"
    XY_RING = "xy-ring"


@dataclass(frozen=True)
class Block:
    """Qubit group constrained to Hamming weight k.

    Qubit order is meaningful for ring connectivity; full connectivity
    ignores it.
    """

    qubits: tuple[int, ...]
    k: int

    def __post_init__(self):
        if len(self.qubits) == 0:
            raise ValueError("empty block")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate qubits in block {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit in block {self.qubits}")
        if not (0 <= self.k <= len(self.qubits)):
            raise ValueError(
                f"target weight {self.k} outside [0, {len(self.qubits)}]"
            )


@dataclass(frozen=True)
class MixerSpec:
    """Register size, mixer family, and the constraint blocks."""

    n: int
    kind: MixerKind
    blocks: tuple[Block, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.blocks:
            for q in b.qubits:
                if q >= self.n:
                    raise ValueError(f"qubit {q} outside register of {self.n}")
                if q in seen:
                    raise ValueError(f"qubit {q} appears in two blocks")
                seen.add(q)
        if self.kind is not MixerKind.X and not self.blocks:
            raise ValueError("XY mixers need at least one block")

    def block_pairs(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        """Blocks as plain (qubits, k) pairs for subspace helpers."""
        return tuple((b.qubits, b.k) for b in self.blocks)


def full_edges(qubits: tuple[int, ...]) -> list[tuple[int, int]]:
    """All pairs, lexicographic over the sorted qubit list."""
    return list(combinations(sorted(qubits), 2))


def ring_edges(qubits: tuple[int, ...]) -> list[tuple[int, int]]:
    """Nearest neighbours in the given cyclic order, plus the wrap edge.

    Two qubits give a single edge (the wrap edge duplicates it); one qubit
    gives none.
    """
    m = len(qubits)
    if m < 2:
        return []
    if m == 2:
        return [(qubits[0], qubits[1])]
    edges = [(qubits[i], qubits[i + 1]) for i in range(m - 1)]
    edges.append((qubits[-1], qubits[0]))
    return edges


def _edges_for(spec: MixerSpec, block: Block) -> list[tuple[int, int]]:
    if spec.kind is MixerKind.XY_RING:
        return ring_edges(block.qubits)
    return full_edges(block.qubits)


def build_mixer(spec: MixerSpec) -> PauliSum:
    """The mixer Hamiltonian as a Pauli sum."""
    terms: list[tuple[float, object]] = []
    if spec.kind is MixerKind.X:
        for q in range(spec.n):
            terms.append((-1.0, pauli_string({q: "X"})))
        return pauli_sum(terms)
    for block in spec.blocks:
        for i, j in _edges_for(spec, block):
            terms.append((-1.0, pauli_string({i: "X", j: "X"})))
            terms.append((-1.0, pauli_string({i: "Y", j: "Y"})))
    return pauli_sum(terms)


def dicke_state(n: int, k: int) -> StateVector:
    """Uniform superposition of all weight-k basis states."""
    if not (0 <= k <= n):
        raise ValueError(f"k={k} outside [0, {n}]")
    amps = np.zeros(1 << n, dtype=np.complex128)
    sel = k_hot_basis(n, k).array()
    amps[sel] = comb(n, k) ** -0.5
    return StateVector(n, amps)


def initial_state(spec: MixerSpec) -> StateVector:
    """Mixer ground-sector start state.

    X mixer: |+>^n.  XY mixers: product of per-block Dicke states, |0> on
    qubits outside every block.
    """
    if spec.kind is MixerKind.X:
        return plus_state(spec.n)
    amps = np.zeros(1 << spec.n, dtype=np.complex128)
    indices = np.array([0], dtype=np.int64)
    norm2 = 1
    for block in spec.blocks:
        patterns = _block_patterns(block.qubits, block.k)
        indices = (indices[:, None] | patterns[None, :]).ravel()
        norm2 *= len(patterns)
    amps[indices] = norm2**-0.5
    return StateVector(spec.n, amps)


@lru_cache(maxsize=None)
def _block_patterns(qubits: tuple[int, ...], k: int) -> np.ndarray:
    """Basis indices with exactly k of the given qubits set, others clear."""
    pats = sorted(sum(1 << q for q in combo) for combo in combinations(qubits, k))
    out = np.asarray(pats, dtype=np.int64)
    out.flags.writeable = False
    return out


def _trotter_mixer_inplace(amps: np.ndarray, spec: MixerSpec, beta: float) -> None:
    # exp(-i beta H): the -1 mixer coefficient folds into the gate angle.
    if spec.kind is MixerKind.X:
        for q in range(spec.n):
            _rx(amps, spec.n, q, -2.0 * beta)
        return
    for block in spec.blocks:
        for i, j in _edges_for(spec, block):
            _xx(amps, spec.n, i, j, -beta)
            _yy(amps, spec.n, i, j, -beta)


def trotter_mixer_step(s: StateVector, spec: MixerSpec, beta: float) -> StateVector:
    """One first-order product pass over the mixer terms."""
    if spec.n != s.n:
        raise ValueError(f"register mismatch: state {s.n}, mixer {spec.n}")
    out = s.copy()
    _trotter_mixer_inplace(out.amps, spec, beta)
    return out


@lru_cache(maxsize=None)
def _local_sector_eigh(b: int, w: int, edges: tuple[tuple[int, int], ...]):
    """Eigendecomposition of the local-block mixer on its weight-w sector."""
    terms = []
    for i, j in edges:
        terms.append((-1.0, pauli_string({i: "X", j: "X"})))
        terms.append((-1.0, pauli_string({i: "Y", j: "Y"})))
    local = pauli_sum(terms)
    basis = k_hot_basis(b, w)
    if len(basis) > DEFAULT_SUBSPACE_CAP:
        raise ValueError(
            f"sector dimension {len(basis)} exceeds cap {DEFAULT_SUBSPACE_CAP}"
        )
    from .statevector import restrict_to_basis

    mat = restrict_to_basis(local, basis)
    w_eig, v = np.linalg.eigh(mat)
    w_eig.flags.writeable = False
    v.flags.writeable = False
    return w_eig, v


@lru_cache(maxsize=None)
def _block_gather(n: int, qubits: tuple[int, ...], w: int) -> np.ndarray:
    """Full-register index grid: weight-w block patterns x rest assignments.

    Row order follows the block's local weight sector: bit t of a local
    sector index maps to qubits[t], keeping rows aligned with the basis
    used by _local_sector_eigh even when the block order is not ascending.
    """
    locs = k_hot_basis(len(qubits), w).array()
    patterns = np.zeros(len(locs), dtype=np.int64)
    for t, q in enumerate(qubits):
        patterns |= ((locs >> t) & 1) << q
    rest = [q for q in range(n) if q not in qubits]
    r_count = 1 << len(rest)
    rest_idx = np.zeros(r_count, dtype=np.int64)
    for t, q in enumerate(rest):
        rest_idx |= ((np.arange(r_count, dtype=np.int64) >> t) & 1) << q
    grid = patterns[:, None] | rest_idx[None, :]
    grid.flags.writeable = False
    return grid


@lru_cache(maxsize=None)
def _local_edges(spec_kind: MixerKind, qubits: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    # Relabel block qubits to 0..b-1, preserving order for rings.
    relabel = {q: i for i, q in enumerate(qubits)}
    local = tuple(relabel[q] for q in qubits)
    if spec_kind is MixerKind.XY_RING:
        return tuple(ring_edges(local))
    return tuple(full_edges(local))


def _exact_mixer_inplace(amps: np.ndarray, spec: MixerSpec, beta: float) -> None:
    if spec.kind is MixerKind.X:
        # Commuting single-qubit terms: the product form is already exact.
        for q in range(spec.n):
            _rx(amps, spec.n, q, -2.0 * beta)
        return
    for block in spec.blocks:
        b = len(block.qubits)
        edges = _local_edges(spec.kind, block.qubits)
        for w in range(b + 1):
            grid = _block_gather(spec.n, block.qubits, w)
            sub = amps[grid]
            if float(np.sum(np.abs(sub) ** 2)) < 1e-28:
                continue
            evals, v = _local_sector_eigh(b, w, edges)
            u = (v * np.exp(-1j * beta * evals)) @ v.conj().T
            amps[grid] = u @ sub


def exact_mixer_step(s: StateVector, spec: MixerSpec, beta: float) -> StateVector:
    """exp(-i beta H) applied exactly, blockwise over weight sectors."""
    if spec.n != s.n:
        raise ValueError(f"register mismatch: state {s.n}, mixer {spec.n}")
    out = s.copy()
    _exact_mixer_inplace(out.amps, spec, beta)
    return out


def full_xy_spec(n: int, k: int) -> MixerSpec:
    """Single-block fully connected XY mixer over the whole register."""
    return MixerSpec(n, MixerKind.XY_BLOCKED, (Block(tuple(range(n)), k),))


def ring_xy_spec(n: int, k: int) -> MixerSpec:
    """Single-block ring XY mixer over the whole register."""
    return MixerSpec(n, MixerKind.XY_RING, (Block(tuple(range(n)), k),))


def x_spec(n: int, blocks: tuple[Block, ...] = ()) -> MixerSpec:
    """Transverse-field mixer; blocks are kept only to score feasibility."""
    return MixerSpec(n, MixerKind.X, blocks)


def ring_degree_table(n: int, k: int) -> dict[str, int]:
    """Connectivity degree of each weight-k basis state under the ring.

    The degree counts ring edges whose endpoints differ in the bitstring,
    i.e. the number of weight-preserving neighbours the ring mixer couples
    the state to.  Keys are bitstrings with qubit 0 first.
    """
    from .pauli import bits_of_index

    edges = ring_edges(tuple(range(n)))
    table: dict[str, int] = {}
    for x in k_hot_basis(n, k).indices:
        deg = sum(1 for i, j in edges if ((x >> i) & 1) != ((x >> j) & 1))
        table[bits_of_index(x, n)] = deg
    return table


def ring_dicke_residual(n: int, k: int) -> float:
    """|| H_ring |D> - <D|H_ring|D> |D> ||.

    Zero exactly when the Dicke state is a ring-mixer eigenstate (uniform
    connectivity degree across the sector).
    """
    from .pauli import apply_pauli_sum

    spec = ring_xy_spec(n, k)
    h = build_mixer(spec)
    d = dicke_state(n, k)
    hd = apply_pauli_sum(h, d.amps, n)
    expect = float(np.real(np.vdot(d.amps, hd)))
    resid = hd - expect * d.amps
    return float(np.linalg.norm(resid))
