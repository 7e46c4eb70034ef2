"""Discretized adiabatic evolution.

The interpolation schedule is s(t) = sin^2((pi/2) sin^2(pi t / (2T))) with
total time T = p * delta_t.  Step l (for l = 1..p) evaluates the schedule
at t = l * delta_t and applies, in order,

    exp(-i gamma_l H_final)   with gamma_l = s(l dt) * dt   (diagonal, exact)
    exp(-i beta_l  H_init)    with beta_l  = (1 - s(l dt)) * dt

so the phase separator acts first within every step and the final step's
mixer angle vanishes (s(T) = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .pauli import DiagonalHamiltonian
from .statevector import StateVector, probability_of_set, _phase
from .mixers import MixerSpec, _exact_mixer_inplace, _trotter_mixer_inplace


@dataclass(frozen=True)
class Schedule:
    p: int
    delta_t: float

    def __post_init__(self):
        if self.p < 0:
            raise ValueError(f"step count must be >= 0, got {self.p}")
        if not (self.delta_t > 0.0 and math.isfinite(self.delta_t)):
            raise ValueError(f"delta_t must be positive and finite, got {self.delta_t}")

    @property
    def total_time(self) -> float:
        return self.p * self.delta_t


def schedule_value(sch: Schedule, t: float) -> float:
    """s(t) on [0, T]; fixed endpoints s(0) = 0, s(T) = 1."""
    total = sch.total_time
    if not (0.0 <= t <= total * (1.0 + 1e-12)):
        raise ValueError(f"t={t} outside [0, {total}]")
    if t == 0.0:
        return 0.0
    inner = math.sin(math.pi * t / (2.0 * total)) ** 2
    return math.sin(math.pi * inner / 2.0) ** 2


def step_angles(sch: Schedule, l: int) -> tuple[float, float]:
    """(beta_l, gamma_l) for step l in 1..p."""
    if not (1 <= l <= sch.p):
        raise ValueError(f"step index {l} outside 1..{sch.p}")
    s = schedule_value(sch, l * sch.delta_t)
    return (1.0 - s) * sch.delta_t, s * sch.delta_t


class EvolutionMode(Enum):
    EXACT = "exact"
    TROTTERIZED = "trotterized"


def evolve(
    init: StateVector,
    spec: MixerSpec,
    hf: DiagonalHamiltonian,
    sch: Schedule,
    mode: EvolutionMode,
) -> StateVector:
    """Run the full discretized evolution and return the final state.

    The diagonal phase separator is applied entrywise in both modes; the
    modes differ only in the mixer exponential.  The returned state is
    normalized once at the end to shed accumulated rounding drift.
    """
    if init.n != spec.n or hf.n != init.n:
        raise ValueError(
            f"register mismatch: state {init.n}, mixer {spec.n}, hamiltonian {hf.n}"
        )
    out = init.copy()
    step = _exact_mixer_inplace if mode is EvolutionMode.EXACT else _trotter_mixer_inplace
    for l in range(1, sch.p + 1):
        beta, gamma = step_angles(sch, l)
        _phase(out.amps, hf.energies, gamma)
        step(out.amps, spec, beta)
    out.amps /= np.linalg.norm(out.amps)
    return out


def success_probability(final: StateVector, optima) -> float:
    """Probability of measuring any optimal basis state."""
    return probability_of_set(final, optima)
