"""Commutator census, analytic error bound, and measured step error."""

import itertools
import math

import numpy as np
import pytest

from kmix.mixers import (
    Block,
    MixerKind,
    MixerSpec,
    build_mixer,
    full_xy_spec,
    ring_xy_spec,
    x_spec,
)
from kmix.pauli import pauli_string, pauli_sum, sum_to_matrix
from kmix.trotter import (
    census,
    empirical_step_error,
    error_scaling_exponent,
    first_order_bound,
    group_by_support,
)


def test_group_by_support():
    h = build_mixer(full_xy_spec(3, 1))
    groups = group_by_support(h)
    assert len(groups) == 3
    assert all(len(g) == 2 for g in groups)
    supports = [g.terms[0][1].support for g in groups]
    assert supports == [(0, 1), (0, 2), (1, 2)]


def test_census_full_xy_n4():
    c = census(build_mixer(full_xy_spec(4, 2)), 4)
    assert c.group_count == 6
    assert c.non_commuting_pairs == 12
    assert c.commuting_pairs == 3
    assert c.commuting_pairs + c.non_commuting_pairs == math.comb(6, 2)
    assert c.pair_norms is not None and len(c.pair_norms) == 12
    assert all(v > 0 for _, _, v in c.pair_norms)
    assert c.total_norm == pytest.approx(sum(v for _, _, v in c.pair_norms))


def test_census_formula_and_overlap_rule():
    # edge terms commute exactly when the edges share no qubit, so the
    # non-commuting count is the number of qubit-sharing edge pairs
    for n in range(3, 9):
        c = census(build_mixer(full_xy_spec(n, 1)), n)
        edges = list(itertools.combinations(range(n), 2))
        sharing = sum(
            1
            for a, b in itertools.combinations(edges, 2)
            if set(a) & set(b)
        )
        assert c.non_commuting_pairs == sharing
        assert c.non_commuting_pairs == n * (n - 1) * (n - 2) // 2
        assert c.commuting_pairs + c.non_commuting_pairs == math.comb(len(edges), 2)


def test_census_blocked_additivity():
    spec = MixerSpec(6, MixerKind.XY_BLOCKED, (Block((0, 1, 2), 1), Block((3, 4, 5), 1)))
    combined = census(build_mixer(spec), 6)
    left = census(build_mixer(MixerSpec(6, MixerKind.XY_BLOCKED, (Block((0, 1, 2), 1),))), 6)
    right = census(build_mixer(MixerSpec(6, MixerKind.XY_BLOCKED, (Block((3, 4, 5), 1),))), 6)
    assert combined.group_count == left.group_count + right.group_count
    assert combined.non_commuting_pairs == left.non_commuting_pairs + right.non_commuting_pairs
    # all cross-block pairs commute, so they all land in the commuting count
    cross = left.group_count * right.group_count
    assert combined.commuting_pairs == left.commuting_pairs + right.commuting_pairs + cross
    assert combined.total_norm == pytest.approx(left.total_norm + right.total_norm)


def test_census_past_dense_cap_omits_norms():
    c = census(build_mixer(ring_xy_spec(13, 2)), 13)
    assert c.group_count == 13
    assert c.non_commuting_pairs == 13  # consecutive ring edges share a qubit
    assert c.pair_norms is None and c.total_norm is None


def test_first_order_bound_values():
    h = build_mixer(full_xy_spec(3, 1))
    assert first_order_bound(h, 3, 0.0) == 0.0
    x = build_mixer(x_spec(3))
    assert first_order_bound(x, 3, 0.7) == 0.0

    # dense oracle: each of the three qubit-sharing pair commutators has
    # spectral norm 4, so the bound at t = 0.1 is 0.5 * 0.01 * 12 = 0.06
    groups = group_by_support(h)
    mats = [sum_to_matrix(g, 3) for g in groups]
    total = 0.0
    for a, b in itertools.combinations(range(3), 2):
        total += np.linalg.norm(mats[a] @ mats[b] - mats[b] @ mats[a], 2)
    bound = first_order_bound(h, 3, 0.1)
    assert bound == pytest.approx(0.5 * 0.1**2 * total, abs=1e-12)
    assert bound == pytest.approx(0.06, abs=1e-12)


def test_first_order_bound_register_cap():
    with pytest.raises(ValueError):
        first_order_bound(build_mixer(full_xy_spec(13, 2)), 13, 0.1)


def test_empirical_error_trivial_cases():
    single = MixerSpec(2, MixerKind.XY_BLOCKED, (Block((0, 1), 1),))
    assert empirical_step_error(single, 0.4) < 1e-12
    assert empirical_step_error(x_spec(4), 0.4) < 1e-12
    pair = MixerSpec(4, MixerKind.XY_BLOCKED, (Block((0, 1), 1), Block((2, 3), 1)))
    assert empirical_step_error(pair, 0.4) < 1e-12


def test_empirical_error_positive_and_bounded():
    spec = full_xy_spec(4, 2)
    err = empirical_step_error(spec, 0.1)
    assert err > 1e-6
    assert err <= first_order_bound(build_mixer(spec), 4, 0.1)
    # frozen from a scipy.linalg.expm dense oracle (lexicographic edge order)
    assert err == pytest.approx(0.022037102165709966, abs=1e-12)
    assert empirical_step_error(full_xy_spec(4, 1), 0.1) == pytest.approx(
        0.09408922917911258, abs=1e-12
    )


def test_bound_soundness_sweep():
    for n in (3, 4, 5):
        spec = full_xy_spec(n, max(1, n // 2))
        h = build_mixer(spec)
        for beta in (0.05, 0.1, 0.2, 0.4):
            assert empirical_step_error(spec, beta) <= first_order_bound(h, n, beta)


def test_error_scaling_exponent():
    betas = np.geomspace(0.02, 0.2, 6)
    slope = error_scaling_exponent(full_xy_spec(4, 1), betas)
    assert 1.8 <= slope <= 2.2
    assert error_scaling_exponent(x_spec(4), betas) is None
    pair = MixerSpec(4, MixerKind.XY_BLOCKED, (Block((0, 1), 1), Block((2, 3), 1)))
    assert error_scaling_exponent(pair, betas) is None
    with pytest.raises(ValueError):
        error_scaling_exponent(full_xy_spec(3, 1), [0.1])
    with pytest.raises(ValueError):
        error_scaling_exponent(full_xy_spec(3, 1), [-0.1, 0.2])


def test_half_filled_sector_cancellation():
    # on the k=2 sector of n=4 the pairwise commutator sum vanishes, so the
    # step error picks up an extra order in beta there
    h = build_mixer(full_xy_spec(4, 2))
    groups = group_by_support(h)
    mats = [sum_to_matrix(g, 4) for g in groups]
    lead = np.zeros((16, 16), dtype=complex)
    for a, b in itertools.combinations(range(len(mats)), 2):
        lead += mats[a] @ mats[b] - mats[b] @ mats[a]
    sector = [i for i in range(16) if bin(i).count("1") == 2]
    assert np.linalg.norm(lead[np.ix_(sector, sector)], 2) < 1e-12
    assert np.linalg.norm(lead, 2) > 1.0  # only the sector cancels

    betas = np.geomspace(0.02, 0.2, 6)
    slope = error_scaling_exponent(full_xy_spec(4, 2), betas)
    assert slope > 2.5


def test_empirical_error_register_cap():
    with pytest.raises(ValueError):
        empirical_step_error(full_xy_spec(13, 2), 0.1)
