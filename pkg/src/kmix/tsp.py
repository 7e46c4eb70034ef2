"""Permutation-preserving plaquette mixer for tour assignments.

Cities and time slots use an n x n one-hot grid; qubit (u, t) = u * n + t
(city-major).  The mixer term for cities u, v and slots t1, t2 is the
product of two edge operators,

    (X X + Y Y on the slot-t1 pair) * (X X + Y Y on the slot-t2 pair),

which expands into four mutually commuting weight-4 Pauli strings.  The
full mixer sums every plaquette with u < v, t1 < t2.  It commutes with the
projector onto the permutation subspace, so a Trotterized step never leaks
probability out of valid tours.
"""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np

from .pauli import PauliString, PauliSum, pauli_string, pauli_sum, sum_to_matrix
from .statevector import StateVector, probability_of_set


def qubit_index(city: int, slot: int, n: int) -> int:
    if not (0 <= city < n and 0 <= slot < n):
        raise ValueError(f"(city, slot) = ({city}, {slot}) outside {n} x {n} grid")
    return city * n + slot


def plaquettes(n: int) -> list[tuple[int, int, int, int]]:
    """(u, v, t1, t2) with u < v and t1 < t2, lexicographic."""
    return [
        (u, v, t1, t2)
        for u, v in combinations(range(n), 2)
        for t1, t2 in combinations(range(n), 2)
    ]


def plaquette_strings(u: int, v: int, t1: int, t2: int, n: int) -> list[PauliString]:
    """The four commuting strings of one plaquette, in a fixed order."""
    a, b = qubit_index(u, t1, n), qubit_index(v, t1, n)
    c, d = qubit_index(u, t2, n), qubit_index(v, t2, n)
    out = []
    for first, second in (("X", "X"), ("X", "Y"), ("Y", "X"), ("Y", "Y")):
        out.append(pauli_string({a: first, b: first, c: second, d: second}))
    return out


def build_tsp_mixer(n: int) -> PauliSum:
    if n < 2:
        raise ValueError(f"need at least 2 cities, got {n}")
    terms = []
    for u, v, t1, t2 in plaquettes(n):
        for s in plaquette_strings(u, v, t1, t2, n):
            terms.append((1.0, s))
    return pauli_sum(terms)


def permutation_indices(n: int) -> tuple[int, ...]:
    """Basis indices of the n! valid tours (city u visited at slot sigma(u))."""
    out = set()
    for sigma in permutations(range(n)):
        out.add(sum(1 << qubit_index(u, sigma[u], n) for u in range(n)))
    return tuple(sorted(out))


def trotter_tsp_step(s: StateVector, n: int, beta: float) -> StateVector:
    """One product pass exp(-i beta P_1) ... over all plaquette strings.

    Within a plaquette the four strings commute, so each plaquette factor
    is applied without internal splitting error.
    """
    if s.n != n * n:
        raise ValueError(f"state has {s.n} qubits, expected {n * n}")
    from .statevector import _pauli_rotation

    out = s.copy()
    for u, v, t1, t2 in plaquettes(n):
        for string in plaquette_strings(u, v, t1, t2, n):
            _pauli_rotation(out.amps, out.n, string, beta)
    return out


def permutation_mass(s: StateVector, n: int) -> float:
    """Probability mass on valid tours."""
    return probability_of_set(s, permutation_indices(n))


def feasibility_commutation_norm(n: int) -> float:
    """Spectral norm of [H_mixer, P_perm]; zero means exact preservation.

    Dense evaluation, so only small city counts (n**2 <= 12 qubits).
    """
    nq = n * n
    h = sum_to_matrix(build_tsp_mixer(n), nq)
    diag = np.zeros(1 << nq)
    for x in permutation_indices(n):
        diag[x] = 1.0
    hp = h * diag[None, :]
    ph = diag[:, None] * h
    return float(np.linalg.norm(hp - ph, 2))
