"""Problem instance generation, QUBO encodings, and brute-force optima.

Every generator consumes a :class:`~kmix.rng.PortableRng` stream in a fixed,
documented draw order, so an instance is reproducible from ``(family, size
parameters, seed)`` alone.

Encodings come in two flavors that share the same objective:

* ``xy``: hard constraints are left to the mixer blocks; the diagonal
  Hamiltonian carries only the objective (plus capacity penalties for
  multi-commodity flow, which are part of the objective there).
* ``x``: every block constraint is added as a quadratic penalty
  ``P (sum_i x_i - k)**2`` on top of the ``xy`` diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from .mixers import Block, MixerKind, MixerSpec
from .pauli import DiagonalHamiltonian, IsingModel, ising_to_diagonal
from .rng import PortableRng
from .statevector import blocked_basis

PORTFOLIO_PENALTY = 1000.0
PORTFOLIO_SCALE = 0.35
MCFP_PENALTY = 10000.0
MCPS_PENALTY = 1000.0

FLAVORS = ("xy", "x")


@dataclass(frozen=True)
class PortfolioInstance:
    """Pick exactly k of n assets minimizing risk minus return."""

    n: int
    returns: tuple[float, ...]
    cov: tuple[tuple[float, ...], ...]
    risk_weight: float
    k: int
    penalty: float
    seed: int

    def __post_init__(self):
        if len(self.returns) != self.n or len(self.cov) != self.n:
            raise ValueError("returns/cov size mismatch with n")
        if not (1 <= self.k <= self.n - 1):
            raise ValueError(f"k={self.k} outside [1, {self.n - 1}]")


@dataclass(frozen=True)
class MCPSInstance:
    """Two-color paint sequence with per-ensemble color counts.

    ``ensemble_of[i]`` is the ensemble id of car i; ``counts[q]`` is the
    required number of color-1 cars in ensemble q.
    """

    n: int
    ensemble_of: tuple[int, ...]
    counts: tuple[int, ...]
    penalty: float
    seed: int

    def __post_init__(self):
        if len(self.ensemble_of) != self.n:
            raise ValueError("ensemble_of must assign every car")
        m = len(self.counts)
        sizes = [0] * m
        for q in self.ensemble_of:
            if not (0 <= q < m):
                raise ValueError(f"ensemble id {q} outside 0..{m - 1}")
            sizes[q] += 1
        for q, (size, k) in enumerate(zip(sizes, self.counts)):
            if size == 0:
                raise ValueError(f"ensemble {q} is empty")
            if not (0 <= k <= size):
                raise ValueError(f"count {k} invalid for ensemble {q} of size {size}")


@dataclass(frozen=True)
class MCFPInstance:
    """Path-formulated multi-commodity flow on a digraph.

    ``edges[e] = (u, v, capacity, cost)``; parallel arcs are allowed and
    addressed by edge index.  ``commodities[k] = (source, sink, demand)``.
    ``paths[k]`` lists commodity k's admissible simple paths as tuples of
    edge indices; one variable per (commodity, path), commodity-major.
    """

    nodes: int
    edges: tuple[tuple[int, int, int, int], ...]
    commodities: tuple[tuple[int, int, int], ...]
    paths: tuple[tuple[tuple[int, ...], ...], ...]
    penalty: float
    seed: int

    def __post_init__(self):
        for e, (u, v, cap, cost) in enumerate(self.edges):
            if not (0 <= u < self.nodes and 0 <= v < self.nodes):
                raise ValueError(f"edge {e} endpoints outside node range")
            if u == v:
                raise ValueError(f"edge {e} is a self-loop")
        if len(self.paths) != len(self.commodities):
            raise ValueError("one path set per commodity required")
        for k, plist in enumerate(self.paths):
            if len(plist) == 0:
                raise ValueError(f"commodity {k} has an empty path set")
            src, sink, _ = self.commodities[k]
            for path in plist:
                if not path:
                    raise ValueError(f"commodity {k} has an empty path")
                if self.edges[path[0]][0] != src or self.edges[path[-1]][1] != sink:
                    raise ValueError(f"commodity {k} path {path} does not join its endpoints")

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.paths)


@dataclass(frozen=True)
class EncodedProblem:
    """Objective model plus the constraint blocks of one instance."""

    problem: str
    n: int
    model: IsingModel
    blocks: tuple[Block, ...]
    flavor: str

    @cached_property
    def hf(self) -> DiagonalHamiltonian:
        # 2^n energy table; deferred so large-n instances can be encoded
        # and evaluated per-bitstring without allocating it.
        return ising_to_diagonal(self.model)

    def block_pairs(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        return tuple((b.qubits, b.k) for b in self.blocks)

    def mixer_spec(self, kind: MixerKind | None = None) -> MixerSpec:
        """Mixer matching the flavor: blocked XY for 'xy', transverse for 'x'."""
        if kind is None:
            kind = MixerKind.XY_BLOCKED if self.flavor == "xy" else MixerKind.X
        return MixerSpec(self.n, kind, self.blocks)


def _check_flavor(flavor: str) -> None:
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")


def _add_count_penalty(
    linear: list[float],
    quadratic: dict[tuple[int, int], float],
    qubits: tuple[int, ...],
    k: int,
    penalty: float,
) -> float:
    """Accumulate P (sum_{i in qubits} x_i - k)**2; returns the offset part."""
    for a, i in enumerate(sorted(qubits)):
        linear[i] += penalty * (1.0 - 2.0 * k)
        for j in sorted(qubits)[a + 1 :]:
            key = (i, j)
            quadratic[key] = quadratic.get(key, 0.0) + 2.0 * penalty
    return penalty * float(k) ** 2


# ---------------------------------------------------------------- portfolio

def generate_portfolio(
    n: int,
    seed: int,
    penalty: float = PORTFOLIO_PENALTY,
    scale: float = PORTFOLIO_SCALE,
) -> PortfolioInstance:
    """Random instance; draw order: n returns, n*n Gaussian matrix, then k.

    Returns are uniform in [0, scale); the covariance is scale * A^T A / n
    from the Gaussian matrix; k is uniform on [max(1, n//5), max(lo, (2n)//3)].
    ``scale`` sets the objective's energy spread and therefore the phase
    angles gamma * E accumulated per step.  The mixer coefficients are fixed
    at unit magnitude, so spreads much larger than 2*pi/delta_t put the
    large-delta_t schedules into a phase-wrapped regime where the annealing
    trend drowns in oscillation; the default keeps the spread of order one.
    Scaling multiplies draws in place and consumes no extra stream values.
    """
    if n < 2:
        raise ValueError(f"need at least 2 assets, got n={n}")
    if scale <= 0.0:
        raise ValueError(f"scale must be positive, got {scale}")
    rng = PortableRng(seed)
    returns = tuple(scale * rng.uniform() for _ in range(n))
    a = rng.normal_matrix(n, n)
    cov = scale * (a.T @ a) / n
    lo = max(1, n // 5)
    hi = max(lo, min(n - 1, (2 * n) // 3))
    k = rng.randint(lo, hi)
    if max(returns) > penalty:
        raise ValueError("penalty too small to dominate single-asset returns")
    return PortfolioInstance(
        n=n,
        returns=returns,
        cov=tuple(tuple(float(x) for x in row) for row in cov),
        risk_weight=1.0,
        k=k,
        penalty=penalty,
        seed=seed,
    )


def encode_portfolio(inst: PortfolioInstance, flavor: str = "xy") -> EncodedProblem:
    """mu x^T S x - r^T x, with the k-of-n constraint by block or penalty."""
    _check_flavor(flavor)
    n, mu = inst.n, inst.risk_weight
    linear = [mu * inst.cov[i][i] - inst.returns[i] for i in range(n)]
    quadratic: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            w = 2.0 * mu * inst.cov[i][j]
            if w != 0.0:
                quadratic[(i, j)] = w
    offset = 0.0
    blocks = (Block(tuple(range(n)), inst.k),)
    if flavor == "x":
        offset += _add_count_penalty(linear, quadratic, blocks[0].qubits, inst.k, inst.penalty)
    model = IsingModel(n, tuple(linear), quadratic, offset)
    return EncodedProblem("portfolio", n, model, blocks, flavor)


# ------------------------------------------------------------------- paint

def generate_mcps(n: int, m: int, seed: int, penalty: float = MCPS_PENALTY) -> MCPSInstance:
    """Random instance; draw order: car shuffle, then one count per ensemble.

    Cars are split into m near-equal ensembles (sizes differ by at most 1)
    over a Fisher-Yates shuffled car order, so ensemble members are not
    consecutive in the sequence.  Each count is uniform on [0, size].
    """
    if not (1 <= m <= n):
        raise ValueError(f"need 1 <= ensembles <= cars, got m={m}, n={n}")
    rng = PortableRng(seed)
    order = list(range(n))
    rng.shuffle(order)
    sizes = [n // m + (1 if q < n % m else 0) for q in range(m)]
    ensemble_of = [0] * n
    pos = 0
    for q, size in enumerate(sizes):
        for car in order[pos : pos + size]:
            ensemble_of[car] = q
        pos += size
    counts = tuple(rng.randint(0, size) for size in sizes)
    return MCPSInstance(n, tuple(ensemble_of), counts, penalty, seed)


def encode_mcps(inst: MCPSInstance, flavor: str = "xy") -> EncodedProblem:
    """Count color changes along the car sequence: sum_i XOR(x_i, x_{i+1})."""
    _check_flavor(flavor)
    n = inst.n
    linear = [0.0] * n
    quadratic: dict[tuple[int, int], float] = {}
    for i in range(n - 1):
        linear[i] += 1.0
        linear[i + 1] += 1.0
        quadratic[(i, i + 1)] = quadratic.get((i, i + 1), 0.0) - 2.0
    offset = 0.0
    m = len(inst.counts)
    members: list[list[int]] = [[] for _ in range(m)]
    for car, q in enumerate(inst.ensemble_of):
        members[q].append(car)
    blocks = tuple(Block(tuple(sorted(members[q])), inst.counts[q]) for q in range(m))
    if flavor == "x":
        for b in blocks:
            offset += _add_count_penalty(linear, quadratic, b.qubits, b.k, inst.penalty)
    model = IsingModel(n, tuple(linear), quadratic, offset)
    return EncodedProblem("mcps", n, model, blocks, flavor)


# -------------------------------------------------------------------- flow

def enumerate_simple_paths(
    nodes: int,
    edges: tuple[tuple[int, int, int, int], ...],
    source: int,
    sink: int,
) -> list[tuple[int, ...]]:
    """All simple source-sink paths as tuples of edge indices.

    Depth-first search expanding neighbours in ascending (node id, edge id)
    order; a path may not revisit a node.  Parallel arcs yield distinct
    paths.
    """
    out: dict[int, list[tuple[int, int]]] = {}
    for e, (u, v, _, _) in enumerate(edges):
        out.setdefault(u, []).append((v, e))
    for u in out:
        out[u].sort()
    found: list[tuple[int, ...]] = []
    path: list[int] = []
    visited = {source}

    def walk(u: int) -> None:
        for v, e in out.get(u, ()):
            if v == sink:
                found.append(tuple(path + [e]))
            elif v not in visited:
                visited.add(v)
                path.append(e)
                walk(v)
                path.pop()
                visited.remove(v)

    walk(source)
    return found


def truncate_paths(
    edges: tuple[tuple[int, int, int, int], ...],
    paths: list[tuple[int, ...]],
    cap: int,
) -> list[tuple[int, ...]]:
    """Keep the cap cheapest paths (cost, then node sequence); preserve
    enumeration order among the survivors."""
    if len(paths) <= cap:
        return list(paths)

    def key(path: tuple[int, ...]):
        cost = sum(edges[e][3] for e in path)
        seq = (edges[path[0]][0],) + tuple(edges[e][1] for e in path)
        return (cost, seq)

    keep = set(sorted(paths, key=key)[:cap])
    return [p for p in paths if p in keep]


DEFAULT_PATH_CAP = 8


def generate_mcfp(
    n: int, seed: int, path_cap: int = DEFAULT_PATH_CAP, penalty: float = MCFP_PENALTY
) -> MCFPInstance:
    """Random instance with exactly n path variables.

    Topology: one shared sink fed by H hub nodes (H = largest commodity
    path count); commodity k has its own source with arcs to a random
    hub subset, so its simple paths are source -> hub -> sink and the hub
    arcs couple the commodities.  Draw order: path-count composition of n
    (parts uniform on [2, min(cap, remaining-2)], closing part = remainder),
    hub-arc capacity/cost pairs (hub ascending), then per commodity: hub
    subset shuffle, source-arc capacity/cost pairs (hub ascending), demand.
    """
    if n < 2:
        raise ValueError(f"need at least 2 path variables, got n={n}")
    if path_cap < 2:
        raise ValueError(f"path cap must be >= 2, got {path_cap}")
    rng = PortableRng(seed)
    parts: list[int] = []
    remaining = n
    while remaining >= 4:
        parts.append(rng.randint(2, min(path_cap, remaining - 2)))
        remaining -= parts[-1]
    parts.append(remaining)
    hubs = max(parts)
    n_comm = len(parts)
    # Node layout: sources 0..K-1, sink K, hubs K+1..K+H.
    sink = n_comm
    hub_node = [n_comm + 1 + h for h in range(hubs)]
    edges: list[tuple[int, int, int, int]] = []
    for h in range(hubs):
        edges.append((hub_node[h], sink, rng.randint(1, 9), rng.randint(1, 9)))
    commodities: list[tuple[int, int, int]] = []
    for k, m_k in enumerate(parts):
        ids = list(range(hubs))
        rng.shuffle(ids)
        chosen = sorted(ids[:m_k])
        for h in chosen:
            edges.append((k, hub_node[h], rng.randint(1, 9), rng.randint(1, 9)))
        commodities.append((k, sink, rng.randint(1, 9)))
    all_paths = []
    for k, (src, snk, _) in enumerate(commodities):
        found = enumerate_simple_paths(n_comm + 1 + hubs, tuple(edges), src, snk)
        found = truncate_paths(tuple(edges), found, path_cap)
        if len(found) != parts[k]:
            raise ValueError(
                f"commodity {k} enumerated {len(found)} paths, expected {parts[k]}"
            )
        all_paths.append(tuple(found))
    return MCFPInstance(
        nodes=n_comm + 1 + hubs,
        edges=tuple(edges),
        commodities=tuple(commodities),
        paths=tuple(all_paths),
        penalty=penalty,
        seed=seed,
    )


def encode_mcfp(inst: MCFPInstance, flavor: str = "xy") -> EncodedProblem:
    """Path costs plus capacity-equality penalties on every edge.

    Both flavors keep the capacity penalties in the diagonal (they couple
    commodities and are not expressible as block constraints); the 'x'
    flavor additionally pays a one-hot penalty per commodity.
    """
    _check_flavor(flavor)
    n = inst.n
    var_of: list[tuple[int, int]] = []
    offsets = []
    for k, plist in enumerate(inst.paths):
        offsets.append(len(var_of))
        for pi in range(len(plist)):
            var_of.append((k, pi))
    linear = [0.0] * n
    quadratic: dict[tuple[int, int], float] = {}
    offset = 0.0
    for i, (k, pi) in enumerate(var_of):
        linear[i] += float(sum(inst.edges[e][3] for e in inst.paths[k][pi]))
    # Capacity equality: P * (sum of demand-weighted users - capacity)**2 per edge.
    users: list[list[tuple[int, float]]] = [[] for _ in inst.edges]
    for i, (k, pi) in enumerate(var_of):
        d = float(inst.commodities[k][2])
        for e in inst.paths[k][pi]:
            users[e].append((i, d))
    for e, (_, _, cap, _) in enumerate(inst.edges):
        eu = users[e]
        for a, (i, di) in enumerate(eu):
            linear[i] += inst.penalty * (di * di - 2.0 * cap * di)
            for j, dj in eu[a + 1 :]:
                lo, hi = min(i, j), max(i, j)
                quadratic[(lo, hi)] = quadratic.get((lo, hi), 0.0) + 2.0 * inst.penalty * di * dj
        offset += inst.penalty * float(cap) ** 2
    blocks = tuple(
        Block(tuple(range(offsets[k], offsets[k] + len(plist))), 1)
        for k, plist in enumerate(inst.paths)
    )
    if flavor == "x":
        for b in blocks:
            offset += _add_count_penalty(linear, quadratic, b.qubits, b.k, inst.penalty)
    model = IsingModel(n, tuple(linear), quadratic, offset)
    return EncodedProblem("mcfp", n, model, blocks, flavor)


def partition_to_mcfp(values, penalty: float = MCFP_PENALTY) -> MCFPInstance:
    """Balanced-partition reduction: one commodity per value, two shared arcs.

    Both arcs carry capacity sum(values)/2; routing commodity k over arc 0
    assigns value k to the first half.  Zero capacity penalty is achievable
    exactly when a balanced partition exists.  An odd total cannot meet the
    integer capacities and is rejected up front.
    """
    vals = [int(v) for v in values]
    if len(vals) < 1 or any(v <= 0 for v in vals):
        raise ValueError("values must be positive integers")
    total = sum(vals)
    if total % 2 != 0:
        raise ValueError(f"odd total {total} admits no balanced partition")
    half = total // 2
    edges = ((0, 1, half, 1), (0, 1, half, 1))
    commodities = tuple((0, 1, v) for v in vals)
    paths = []
    for _ in vals:
        found = enumerate_simple_paths(2, edges, 0, 1)
        paths.append(tuple(found))
    return MCFPInstance(2, edges, commodities, tuple(paths), penalty, seed=0)


# ------------------------------------------------------------------ optima

TIE_RTOL = 1e-9


def feasible_states(enc: EncodedProblem) -> np.ndarray:
    """Basis indices meeting every block constraint (blocks cover all qubits)."""
    return blocked_basis(enc.n, enc.block_pairs()).array()


def feasible_count(enc: EncodedProblem) -> int:
    return int(np.prod([comb(len(b.qubits), b.k) for b in enc.blocks]))


@dataclass(frozen=True)
class BruteForceResult:
    value: float
    optima: tuple[int, ...]


def brute_force_optimum(enc: EncodedProblem) -> BruteForceResult:
    """Minimum objective over the feasible set, with all tied optima.

    Ties are grouped within a relative tolerance of the minimum to absorb
    floating-point noise between symmetric assignments.
    """
    idx = feasible_states(enc)
    if idx.size == 0:
        raise ValueError("empty feasible set")
    vals = enc.hf.energies[idx]
    best = float(np.min(vals))
    tol = TIE_RTOL * max(1.0, abs(best))
    sel = idx[vals <= best + tol]
    return BruteForceResult(best, tuple(int(x) for x in sel))


# --------------------------------------------------------------- serialize

def instance_to_dict(inst) -> dict:
    if isinstance(inst, PortfolioInstance):
        return {
            "family": "portfolio",
            "n": inst.n,
            "returns": list(inst.returns),
            "cov": [list(r) for r in inst.cov],
            "risk_weight": inst.risk_weight,
            "k": inst.k,
            "penalty": inst.penalty,
            "seed": inst.seed,
        }
    if isinstance(inst, MCPSInstance):
        return {
            "family": "mcps",
            "n": inst.n,
            "ensemble_of": list(inst.ensemble_of),
            "counts": list(inst.counts),
            "penalty": inst.penalty,
            "seed": inst.seed,
        }
    if isinstance(inst, MCFPInstance):
        return {
            "family": "mcfp",
            "nodes": inst.nodes,
            "edges": [list(e) for e in inst.edges],
            "commodities": [list(c) for c in inst.commodities],
            "paths": [[list(p) for p in plist] for plist in inst.paths],
            "penalty": inst.penalty,
            "seed": inst.seed,
        }
    raise TypeError(f"not a problem instance: {type(inst).__name__}")


def instance_from_dict(data: dict):
    family = data.get("family")
    if family == "portfolio":
        return PortfolioInstance(
            n=data["n"],
            returns=tuple(data["returns"]),
            cov=tuple(tuple(r) for r in data["cov"]),
            risk_weight=data["risk_weight"],
            k=data["k"],
            penalty=data["penalty"],
            seed=data["seed"],
        )
    if family == "mcps":
        return MCPSInstance(
            n=data["n"],
            ensemble_of=tuple(data["ensemble_of"]),
            counts=tuple(data["counts"]),
            penalty=data["penalty"],
            seed=data["seed"],
        )
    if family == "mcfp":
        return MCFPInstance(
            nodes=data["nodes"],
            edges=tuple(tuple(e) for e in data["edges"]),
            commodities=tuple(tuple(c) for c in data["commodities"]),
            paths=tuple(tuple(tuple(p) for p in plist) for plist in data["paths"]),
            penalty=data["penalty"],
            seed=data["seed"],
        )
    raise ValueError(f"unknown instance family {family!r}")


def instance_to_json(inst) -> str:
    return json.dumps(instance_to_dict(inst), sort_keys=True)


def instance_from_json(text: str):
    return instance_from_dict(json.loads(text))
