"""Experiment sweeps: configuration, deterministic runner, CSV output.

A sweep is the cross product sizes x instances x mixers x delta_t x steps
for one problem family and one evolution mode.  Instance seeds derive as
``base_seed + instance_index``, identical across sizes, so rows are
replayable from the CSV alone.  Output rows are sorted canonically by
(problem, n, instance_seed, mixer, mode, delta_t, p); wall time is the
only non-deterministic column.

Row-level parallelism is opt-in through the KMIX_WORKERS environment
variable (default 1); results are identical because assembly reorders
rows canonically.
"""

from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

from .engine import EvolutionMode, Schedule, evolve, success_probability
from .mixers import MixerKind, initial_state
from .problems import (
    EncodedProblem,
    brute_force_optimum,
    encode_mcfp,
    encode_mcps,
    encode_portfolio,
    generate_mcfp,
    generate_mcps,
    generate_portfolio,
)
from .statevector import hamming_mass

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "schema_version",
    "problem",
    "n",
    "instance_seed",
    "mixer",
    "mode",
    "delta_t",
    "p",
    "p_opt",
    "leakage",
    "optimal_value",
    "n_optima",
    "runtime_ms",
    "status",
)

DELTA_TS_DEFAULT = (0.01, 0.1, 0.2, 0.3, 0.5, 0.75, 0.8, 0.9)
DELTA_TS_MCPS = (0.001, 0.01, 0.1, 0.2, 0.25, 0.3, 0.5, 0.75, 0.8, 0.9)
STEPS_DEFAULT = (5,) + tuple(range(10, 151, 10))

SIZES_DEFAULT = {
    "portfolio": tuple(range(5, 11)),
    "mcps": tuple(range(5, 15)),
    "mcfp": tuple(range(4, 17)),
}

PROBLEMS = ("portfolio", "mcps", "mcfp")
WORKERS_ENV = "KMIX_WORKERS"
STATE_QUBIT_CAP = 24


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    sizes: tuple[int, ...] = ()
    instances: int = 10
    base_seed: int = 1
    delta_ts: tuple[float, ...] = ()
    steps: tuple[int, ...] = ()
    mixers: tuple[str, ...] = ("xy", "x")
    mode: str = "trotterized"
    output: str = "results.csv"
    penalty: float | None = None
    portfolio_scale: float | None = None
    mcps_ensembles: int | None = None
    mcfp_path_cap: int = 8
    state_qubit_cap: int = STATE_QUBIT_CAP

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {PROBLEMS}, got {self.problem!r}")
        if self.instances < 1:
            raise ValueError(f"instances must be >= 1, got {self.instances}")
        for mixer in self.mixers:
            if mixer not in ("xy", "x"):
                raise ValueError(f"mixer must be 'xy' or 'x', got {mixer!r}")
        if not self.mixers:
            raise ValueError("at least one mixer required")
        if self.mode not in ("exact", "trotterized"):
            raise ValueError(f"mode must be 'exact' or 'trotterized', got {self.mode!r}")
        object.__setattr__(self, "sizes", tuple(int(v) for v in self.sizes) or SIZES_DEFAULT[self.problem])
        dts = tuple(float(v) for v in self.delta_ts)
        if not dts:
            dts = DELTA_TS_MCPS if self.problem == "mcps" else DELTA_TS_DEFAULT
        object.__setattr__(self, "delta_ts", dts)
        object.__setattr__(self, "steps", tuple(int(v) for v in self.steps) or STEPS_DEFAULT)
        for p in self.steps:
            if p < 1:
                raise ValueError(f"step counts must be >= 1, got {p}")
        for dt in self.delta_ts:
            if dt <= 0:
                raise ValueError(f"delta_t must be positive, got {dt}")

    def to_dict(self) -> dict:
        return {
            "problem": self.problem,
            "sizes": list(self.sizes),
            "instances": self.instances,
            "base_seed": self.base_seed,
            "delta_ts": list(self.delta_ts),
            "steps": list(self.steps),
            "mixers": list(self.mixers),
            "mode": self.mode,
            "output": self.output,
            "penalty": self.penalty,
            "portfolio_scale": self.portfolio_scale,
            "mcps_ensembles": self.mcps_ensembles,
            "mcfp_path_cap": self.mcfp_path_cap,
            "state_qubit_cap": self.state_qubit_cap,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(data)
        for key in ("sizes", "delta_ts", "steps", "mixers"):
            if key in kwargs and kwargs[key] is not None:
                kwargs[key] = tuple(kwargs[key])
            elif key in kwargs:
                del kwargs[key]
        return cls(**kwargs)


@dataclass(frozen=True)
class RunRecord:
    problem: str
    n: int
    instance_seed: int
    mixer: str
    mode: str
    delta_t: float
    p: int
    p_opt: float | None
    leakage: float | None
    optimal_value: float | None
    n_optima: int | None
    runtime_ms: float
    status: str

    def sort_key(self):
        return (
            self.problem,
            self.n,
            self.instance_seed,
            self.mixer,
            self.mode,
            self.delta_t,
            self.p,
        )


def _generate(config: ExperimentConfig, n: int, seed: int):
    if config.problem == "portfolio":
        kwargs = {}
        if config.penalty is not None:
            kwargs["penalty"] = config.penalty
        if config.portfolio_scale is not None:
            kwargs["scale"] = config.portfolio_scale
        return generate_portfolio(n, seed, **kwargs)
    if config.problem == "mcps":
        m = config.mcps_ensembles or max(1, -(-n // 4))
        if config.penalty is not None:
            return generate_mcps(n, m, seed, penalty=config.penalty)
        return generate_mcps(n, m, seed)
    if config.penalty is not None:
        return generate_mcfp(n, seed, path_cap=config.mcfp_path_cap, penalty=config.penalty)
    return generate_mcfp(n, seed, path_cap=config.mcfp_path_cap)


def _encode(config: ExperimentConfig, inst, flavor: str) -> EncodedProblem:
    if config.problem == "portfolio":
        return encode_portfolio(inst, flavor)
    if config.problem == "mcps":
        return encode_mcps(inst, flavor)
    return encode_mcfp(inst, flavor)


def _instance_rows(config: ExperimentConfig, n: int, seed: int) -> list[RunRecord]:
    rows: list[RunRecord] = []

    def emit_skip(mixer: str, dt: float, p: int, reason: str) -> None:
        rows.append(
            RunRecord(
                config.problem, n, seed, mixer, config.mode, dt, p,
                None, None, None, None, 0.0, f"skipped:{reason}",
            )
        )

    try:
        inst = _generate(config, n, seed)
        enc_xy = _encode(config, inst, "xy")
    except Exception as exc:  # noqa: BLE001 - reported as a row status
        for mixer in config.mixers:
            for dt in config.delta_ts:
                for p in config.steps:
                    emit_skip(mixer, dt, p, f"generation-failed:{type(exc).__name__}")
        return rows
    n_qubits = enc_xy.n
    if n_qubits > config.state_qubit_cap:
        for mixer in config.mixers:
            for dt in config.delta_ts:
                for p in config.steps:
                    emit_skip(mixer, dt, p, f"state-too-large:{n_qubits}-qubits")
        return rows
    optimum = brute_force_optimum(enc_xy)
    mode = EvolutionMode(config.mode)
    for mixer in config.mixers:
        enc = enc_xy if mixer == "xy" else _encode(config, inst, "x")
        kind = MixerKind.XY_BLOCKED if mixer == "xy" else MixerKind.X
        spec = enc.mixer_spec(kind)
        init = initial_state(spec)
        for dt in config.delta_ts:
            for p in config.steps:
                t0 = time.perf_counter()
                try:
                    final = evolve(init, spec, enc.hf, Schedule(p, dt), mode)
                    # rounding can push probability sums a few ulp outside
                    # [0, 1]; both reported metrics are clamped
                    p_opt = min(1.0, max(0.0, success_probability(final, optimum.optima)))
                    leak = min(1.0, max(0.0, 1.0 - hamming_mass(final, enc.block_pairs())))
                    ms = (time.perf_counter() - t0) * 1000.0
                    rows.append(
                        RunRecord(
                            config.problem, n_qubits, seed, mixer, config.mode,
                            dt, p, p_opt, leak, optimum.value,
                            len(optimum.optima), ms, "ok",
                        )
                    )
                except Exception as exc:  # noqa: BLE001 - reported as a row status
                    ms = (time.perf_counter() - t0) * 1000.0
                    rows.append(
                        RunRecord(
                            config.problem, n_qubits, seed, mixer, config.mode,
                            dt, p, None, None, None, None, ms,
                            f"error:{type(exc).__name__}",
                        )
                    )
    return rows


def _instance_rows_star(args) -> list[RunRecord]:
    return _instance_rows(*args)


def run_experiments(config: ExperimentConfig) -> list[RunRecord]:
    """Execute the sweep; rows come back canonically sorted."""
    tasks = [
        (config, n, config.base_seed + i)
        for n in config.sizes
        for i in range(config.instances)
    ]
    workers = int(os.environ.get(WORKERS_ENV, "1") or "1")
    rows: list[RunRecord] = []
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_instance_rows_star, tasks):
                rows.extend(chunk)
    else:
        for task in tasks:
            rows.extend(_instance_rows_star(task))
    rows.sort(key=RunRecord.sort_key)
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: list[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(
            [
                SCHEMA_VERSION,
                r.problem,
                r.n,
                r.instance_seed,
                r.mixer,
                r.mode,
                _fmt(r.delta_t),
                r.p,
                _fmt(r.p_opt),
                _fmt(r.leakage),
                _fmt(r.optimal_value),
                _fmt(r.n_optima),
                f"{r.runtime_ms:.3f}",
                r.status,
            ]
        )
    return buf.getvalue()


def run_to_csv(config: ExperimentConfig) -> tuple[str, int]:
    """Run a sweep; returns (csv text, count of crashed rows)."""
    rows = run_experiments(config)
    failed = sum(1 for r in rows if r.status.startswith("error:"))
    return rows_to_csv(rows), failed


# ------------------------------------------------------------ analysis ops

def _analysis_spec(mixer: str, n: int, k: int | None, blocks: list[str] | None):
    from .mixers import Block, MixerSpec, full_xy_spec, ring_xy_spec, x_spec

    if blocks:
        parsed = []
        start = 0
        for item in blocks:
            size_s, _, k_s = str(item).partition(":")
            size, kk = int(size_s), int(k_s)
            parsed.append(Block(tuple(range(start, start + size)), kk))
            start += size
        if start != n:
            raise ValueError(f"blocks cover {start} qubits, register has {n}")
        kind = {
            "x": MixerKind.X,
            "xy-full": MixerKind.XY_BLOCKED,
            "xy-blocked": MixerKind.XY_BLOCKED,
            "xy-ring": MixerKind.XY_RING,
        }[mixer]
        return MixerSpec(n, kind, tuple(parsed))
    kk = n // 2 if k is None else k
    if mixer == "x":
        return x_spec(n)
    if mixer == "xy-full" or mixer == "xy-blocked":
        return full_xy_spec(n, kk)
    if mixer == "xy-ring":
        return ring_xy_spec(n, kk)
    raise ValueError(f"unknown mixer {mixer!r}")


def census_report(mixer: str, n: int, k: int | None = None, blocks: list[str] | None = None) -> dict:
    from .mixers import build_mixer
    from .trotter import census

    spec = _analysis_spec(mixer, n, k, blocks)
    c = census(build_mixer(spec), n)
    return {
        "mixer": mixer,
        "n": n,
        "groups": c.group_count,
        "commuting_pairs": c.commuting_pairs,
        "non_commuting_pairs": c.non_commuting_pairs,
        "total_commutator_norm": c.total_norm,
        "norms_available": c.total_norm is not None,
    }


DEFAULT_SCAN_BETAS = (0.025, 0.05, 0.1, 0.2, 0.25)


def error_scan_report(
    mixer: str,
    n: int,
    k: int | None = None,
    blocks: list[str] | None = None,
    betas=DEFAULT_SCAN_BETAS,
) -> dict:
    from .mixers import build_mixer
    from .trotter import empirical_step_error, error_scaling_exponent, first_order_bound

    spec = _analysis_spec(mixer, n, k, blocks)
    h = build_mixer(spec)
    rows = []
    for b in betas:
        rows.append(
            {
                "beta": float(b),
                "empirical": empirical_step_error(spec, float(b)),
                "bound": first_order_bound(h, n, float(b)),
            }
        )
    exponent = error_scaling_exponent(spec, betas)
    return {"mixer": mixer, "n": n, "rows": rows, "exponent": exponent}


def tsp_check_report(cities: int, steps: int = 100, beta: float = 0.1) -> dict:
    from .statevector import basis_state
    from .tsp import (
        feasibility_commutation_norm,
        permutation_indices,
        permutation_mass,
        trotter_tsp_step,
    )

    if cities * cities > 12:
        raise ValueError(f"{cities} cities need {cities * cities} qubits, over the dense cap")
    norm = feasibility_commutation_norm(cities)
    start = basis_state(cities * cities, permutation_indices(cities)[0])
    state = start
    for _ in range(steps):
        state = trotter_tsp_step(state, cities, beta)
    # permutation_mass can exceed 1 by a few ulp; leakage stays in [0, 1]
    leak = min(1.0, max(0.0, 1.0 - permutation_mass(state, cities)))
    return {
        "cities": cities,
        "steps": steps,
        "beta": beta,
        "commutation_norm": norm,
        "leakage": leak,
    }
