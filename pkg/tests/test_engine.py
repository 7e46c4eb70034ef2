"""Schedule shape, step angles, and the full evolution loop."""

import math

import numpy as np
import pytest
from scipy.linalg import expm

from kmix.engine import (
    EvolutionMode,
    Schedule,
    evolve,
    schedule_value,
    step_angles,
    success_probability,
)
from kmix.mixers import (
    Block,
    MixerKind,
    MixerSpec,
    build_mixer,
    full_xy_spec,
    initial_state,
    x_spec,
)
from kmix.pauli import DiagonalHamiltonian, pauli_string, pauli_sum, sum_to_matrix
from kmix.problems import (
    brute_force_optimum,
    encode_mcps,
    encode_portfolio,
    feasible_count,
    generate_mcps,
    generate_portfolio,
)
from kmix.statevector import hamming_mass, plus_state


def test_schedule_validation():
    with pytest.raises(ValueError):
        Schedule(-1, 0.5)
    with pytest.raises(ValueError):
        Schedule(10, 0.0)
    with pytest.raises(ValueError):
        Schedule(10, float("inf"))
    assert Schedule(0, 0.5).total_time == 0.0


def test_schedule_endpoints():
    sch = Schedule(10, 0.3)
    assert schedule_value(sch, 0.0) == 0.0
    assert schedule_value(sch, sch.total_time) == pytest.approx(1.0, abs=1e-15)
    assert schedule_value(sch, sch.total_time / 2) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ValueError):
        schedule_value(sch, -0.1)
    with pytest.raises(ValueError):
        schedule_value(sch, sch.total_time + 0.1)


def test_schedule_monotone():
    rng = np.random.default_rng(2)
    for _ in range(50):
        sch = Schedule(int(rng.integers(1, 150)), float(rng.uniform(0.01, 0.9)))
        ts = np.linspace(0.0, sch.total_time, 1000)
        vals = [schedule_value(sch, float(t)) for t in ts]
        assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))
        assert all(0.0 <= v <= 1.0 for v in vals)


def test_step_angles():
    sch = Schedule(10, 0.3)
    # final step: s(T) = 1, so the mixer angle vanishes exactly
    assert step_angles(sch, 10) == (0.0, 0.3)
    beta, gamma = step_angles(sch, 5)  # t = T/2
    assert beta == pytest.approx(0.15, abs=1e-12)
    assert gamma == pytest.approx(0.15, abs=1e-12)
    # frozen closed-form evaluation at l=1
    beta1, gamma1 = step_angles(sch, 1)
    assert beta1 == pytest.approx(0.2995569254011657, abs=1e-15)
    assert gamma1 == pytest.approx(0.00044307459883432, abs=1e-15)
    assert beta1 + gamma1 == pytest.approx(0.3, abs=1e-15)


def test_step_angles_bounds():
    sch = Schedule(5, 0.2)
    with pytest.raises(ValueError):
        step_angles(sch, 0)
    with pytest.raises(ValueError):
        step_angles(sch, 6)


def test_evolve_vanishing_time_is_identity():
    inst = generate_portfolio(4, seed=2)
    enc = encode_portfolio(inst)
    spec = enc.mixer_spec()
    init = initial_state(spec)
    out = evolve(init, spec, enc.hf, Schedule(1, 1e-4), EvolutionMode.TROTTERIZED)
    assert out.fidelity(init) >= 1 - 1e-6


def test_x_mixer_modes_agree():
    inst = generate_portfolio(4, seed=5)
    enc = encode_portfolio(inst, flavor="x")
    spec = enc.mixer_spec()
    init = initial_state(spec)
    sch = Schedule(15, 0.4)
    a = evolve(init, spec, enc.hf, sch, EvolutionMode.EXACT)
    b = evolve(init, spec, enc.hf, sch, EvolutionMode.TROTTERIZED)
    assert float(np.linalg.norm(a.amps - b.amps)) < 1e-10


def test_xy_trotterized_stays_in_subspace():
    inst = generate_mcps(6, 2, seed=2)
    enc = encode_mcps(inst)
    spec = enc.mixer_spec()
    init = initial_state(spec)
    out = evolve(init, spec, enc.hf, Schedule(20, 0.7), EvolutionMode.TROTTERIZED)
    assert 1.0 - hamming_mass(out, spec.block_pairs()) < 1e-10


def test_single_edge_blocks_modes_agree():
    # every block holds one edge: no non-commuting pairs, no product error
    spec = MixerSpec(
        4, MixerKind.XY_BLOCKED, (Block((0, 1), 1), Block((2, 3), 1))
    )
    rng = np.random.default_rng(8)
    hf = DiagonalHamiltonian(4, rng.normal(size=16))
    init = initial_state(spec)
    sch = Schedule(12, 0.6)
    a = evolve(init, spec, hf, sch, EvolutionMode.EXACT)
    b = evolve(init, spec, hf, sch, EvolutionMode.TROTTERIZED)
    assert float(np.linalg.norm(a.amps - b.amps)) < 1e-10


def test_evolve_register_mismatch():
    spec = full_xy_spec(3, 1)
    hf = DiagonalHamiltonian(4, np.zeros(16))
    with pytest.raises(ValueError):
        evolve(plus_state(4), spec, hf, Schedule(1, 0.1), EvolutionMode.EXACT)


def test_success_probability_basics():
    u = plus_state(4)
    assert success_probability(u, ["0000", "1000", "0100"]) == pytest.approx(
        3 / 16, abs=1e-12
    )
    from kmix.statevector import basis_state

    s = basis_state(3, 5)
    assert success_probability(s, [5, 2]) == pytest.approx(1.0, abs=1e-15)


def test_zero_steps_scores_initial_state():
    # with no steps the Dicke start is measured directly, so the success
    # probability is exactly |optima| / |feasible|
    inst = generate_mcps(6, 2, seed=1)
    enc = encode_mcps(inst)
    spec = enc.mixer_spec()
    init = initial_state(spec)
    out = evolve(init, spec, enc.hf, Schedule(0, 0.5), EvolutionMode.EXACT)
    res = brute_force_optimum(enc)
    expected = len(res.optima) / feasible_count(enc)
    assert 0.0 < expected < 1.0
    assert success_probability(out, res.optima) == pytest.approx(expected, abs=1e-12)


def dense_trotter_oracle(enc, spec, sch):
    """Dense replay of the product formula, edge by edge, in spec order."""
    n = spec.n
    state = initial_state(spec).amps.copy()
    edge_mats = []
    for block in spec.blocks:
        from kmix.mixers import full_edges

        for i, j in full_edges(block.qubits):
            xx = sum_to_matrix(pauli_sum([(-1.0, pauli_string({i: "X", j: "X"}))]), n)
            yy = sum_to_matrix(pauli_sum([(-1.0, pauli_string({i: "Y", j: "Y"}))]), n)
            edge_mats.append((xx, yy))
    for l in range(1, sch.p + 1):
        beta, gamma = step_angles(sch, l)
        state = np.exp(-1j * gamma * enc.hf.energies) * state
        for xx, yy in edge_mats:
            state = expm(-1j * beta * xx) @ state
            state = expm(-1j * beta * yy) @ state
    return state / np.linalg.norm(state)


def test_evolve_matches_dense_oracles():
    """Both modes agree with independent dense replays on a real instance."""
    inst = generate_portfolio(4, seed=3)
    enc = encode_portfolio(inst)
    spec = enc.mixer_spec()
    sch = Schedule(3, 0.45)
    init = initial_state(spec)

    trot = evolve(init, spec, enc.hf, sch, EvolutionMode.TROTTERIZED)
    np.testing.assert_allclose(
        trot.amps, dense_trotter_oracle(enc, spec, sch), atol=1e-12
    )

    exact = evolve(init, spec, enc.hf, sch, EvolutionMode.EXACT)
    hmix = sum_to_matrix(build_mixer(spec), spec.n)
    state = init.amps.copy()
    for l in range(1, sch.p + 1):
        beta, gamma = step_angles(sch, l)
        state = np.exp(-1j * gamma * enc.hf.energies) * state
        state = expm(-1j * beta * hmix) @ state
    state /= np.linalg.norm(state)
    np.testing.assert_allclose(exact.amps, state, atol=1e-12)
