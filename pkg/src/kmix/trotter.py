"""First-order product-formula error analysis.

The splitting unit is the edge group: all mixer terms sharing the same
qubit support count as one exponential factor (for XY mixers that is
H_ij = X_i X_j + Y_i Y_j, whose two strings commute).  The first-order
bound for step size t is

    || exp(-i t H) - prod_a exp(-i t H_a) || <= (t**2 / 2) *
        sum_{a < b} || [H_a, H_b] ||,

and the empirical step error is the spectral-norm distance between the
two unitaries restricted to the mixer-invariant feasible subspace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mixers import MixerKind, MixerSpec, exact_mixer_step, trotter_mixer_step
from .pauli import DENSE_QUBIT_CAP, PauliSum, commutator_sum, norm_of_commutator, pauli_sum
from .statevector import SubspaceBasis, basis_state, blocked_basis

EMPIRICAL_QUBIT_CAP = 12


def group_by_support(h: PauliSum) -> list[PauliSum]:
    """Split a sum into exponential factors, one per distinct qubit support."""
    groups: dict[tuple[int, ...], list] = {}
    for c, s in h.terms:
        groups.setdefault(s.support, []).append((c, s))
    return [pauli_sum(groups[key]) for key in sorted(groups)]


@dataclass(frozen=True)
class CommutatorCensus:
    """Pairwise commutation structure of the exponential factors."""

    n: int
    group_count: int
    commuting_pairs: int
    non_commuting_pairs: int
    pair_norms: tuple[tuple[int, int, float], ...] | None
    total_norm: float | None


def census(h: PauliSum, n: int) -> CommutatorCensus:
    """Count commuting/non-commuting factor pairs; norms when n <= 12.

    Commutation is decided exactly through the Pauli algebra: a pair of
    factors commutes when every cross-term commutator cancels.  Spectral
    norms of the non-vanishing commutators require dense evaluation and
    are reported as unavailable past the dense cap.
    """
    groups = group_by_support(h)
    g = len(groups)
    commuting = 0
    hot: list[tuple[int, int]] = []
    for a in range(g):
        for b in range(a + 1, g):
            if len(commutator_sum(groups[a], groups[b])) == 0:
                commuting += 1
            else:
                hot.append((a, b))
    if n <= DENSE_QUBIT_CAP:
        norms = tuple(
            (a, b, norm_of_commutator(groups[a], groups[b], n)) for a, b in hot
        )
        total = float(sum(v for _, _, v in norms))
    else:
        norms = None
        total = None
    return CommutatorCensus(n, g, commuting, len(hot), norms, total)


def first_order_bound(h: PauliSum, n: int, t: float) -> float:
    """(t**2 / 2) * sum over factor pairs of the commutator norms."""
    c = census(h, n)
    if c.total_norm is None:
        raise ValueError(
            f"register of {n} qubits exceeds dense cap {DENSE_QUBIT_CAP}"
        )
    return 0.5 * t * t * c.total_norm


def _step_matrix(spec: MixerSpec, beta: float, basis: SubspaceBasis, step_fn) -> np.ndarray:
    sel = basis.array()
    d = len(sel)
    mat = np.empty((d, d), dtype=np.complex128)
    for col in range(d):
        state = basis_state(spec.n, int(sel[col]))
        out = step_fn(state, spec, beta)
        mat[:, col] = out.amps[sel]
    return mat


def _error_basis(spec: MixerSpec) -> SubspaceBasis:
    if spec.kind is MixerKind.X:
        # No invariant constraint sector; compare on the full register.
        return SubspaceBasis(spec.n, tuple(range(1 << spec.n)))
    return blocked_basis(spec.n, spec.block_pairs())


def empirical_step_error(spec: MixerSpec, beta: float) -> float:
    """Spectral-norm distance of one product pass from the exact step.

    Both unitaries preserve the feasible subspace (the full register for
    the transverse-field mixer), so the comparison is restricted there.
    """
    if spec.n > EMPIRICAL_QUBIT_CAP:
        raise ValueError(
            f"register of {spec.n} qubits exceeds empirical cap {EMPIRICAL_QUBIT_CAP}"
        )
    basis = _error_basis(spec)
    exact = _step_matrix(spec, beta, basis, exact_mixer_step)
    split = _step_matrix(spec, beta, basis, trotter_mixer_step)
    return float(np.linalg.norm(exact - split, 2))


def error_scaling_exponent(spec: MixerSpec, betas) -> float | None:
    """Log-log slope of the empirical step error over a beta grid.

    Returns None when the errors sit at numerical noise (commuting factor
    products, e.g. the transverse-field mixer), where no power law exists.
    """
    bs = [float(b) for b in betas]
    if len(bs) < 2 or any(b <= 0 for b in bs):
        raise ValueError("need at least two positive step sizes")
    errs = [empirical_step_error(spec, b) for b in bs]
    if max(errs) < 1e-12:
        return None
    slope = np.polyfit(np.log(bs), np.log(errs), 1)[0]
    return float(slope)
