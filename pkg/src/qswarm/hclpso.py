"""Heterogeneous comprehensive learning PSO with pluggable point streams.

The swarm is split into an exploration subpopulation (particles 0..N1-1,
learning only from comprehensive-learning exemplars drawn among themselves)
and an exploitation subpopulation (N1..N-1, learning from exemplars drawn
from the whole swarm plus the global best). The uniform factors that scale
each velocity term are drawn from ``PointStream`` objects, one per role, so
any of them can be swapped for a low-discrepancy sequence.

Arrays are stored particle-major: positions have shape (N, D).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .bench import ObjectiveSpec, seed_for
from .seqgen import PeriodicStream, PointStream, make_stream

ROLES = ("init", "eps1", "eps2", "eps3")


@dataclass(frozen=True)
class Schedule:
    """Linearly varying coefficients over G iterations."""

    G: int

    def w(self, g):
        return 0.99 - 0.79 * g / self.G

    def k(self, g):
        return 3.0 - 0.5 * g / self.G

    def c1(self, g):
        return 2.5 - 2.0 * g / self.G

    def c2(self, g):
        return 0.5 + 2.0 * g / self.G


@dataclass(frozen=True)
class StreamSpec:
    kind: str = "random"
    params: dict = field(default_factory=dict)

    def build(self, dimension: int, seed: int) -> PointStream:
        return make_stream(self.kind, dimension, seed=seed, **self.params)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}


RANDOM = StreamSpec()


@dataclass(frozen=True)
class VariantScheme:
    init: StreamSpec = RANDOM
    eps1: StreamSpec = RANDOM
    eps2: StreamSpec = RANDOM
    eps3: StreamSpec = RANDOM

    def to_dict(self) -> dict:
        return {role: getattr(self, role).to_dict() for role in ROLES}


PRESETS = ("HCLPSO0", "HCLPSO1", "HCLPSO2", "HCLPSO3")


def preset(name: str, lds: Optional[StreamSpec] = None) -> VariantScheme:
    """Named variants: which velocity factors come from the LDS.

    HCLPSO3 (alias Rand) is the original algorithm; HCLPSO1 swaps eps1 and
    eps2, HCLPSO2 swaps eps3, HCLPSO0 swaps all three.
    """
    key = name.upper().replace("_", "")
    if key == "RAND":
        key = "HCLPSO3"
    if key not in PRESETS:
        raise ValueError(f"unknown variant preset {name!r}")
    if key == "HCLPSO3":
        return VariantScheme()
    if lds is None:
        raise ValueError(f"preset {name} needs an LDS stream")
    if key == "HCLPSO1":
        return VariantScheme(eps1=lds, eps2=lds)
    if key == "HCLPSO2":
        return VariantScheme(eps3=lds)
    return VariantScheme(eps1=lds, eps2=lds, eps3=lds)


@dataclass(frozen=True)
class HCLPSOConfig:
    N1: int = 15
    N2: int = 25
    G: int = 7500
    variant: VariantScheme = VariantScheme()
    seed: int = 0
    refresh_gap: int = 7
    pc_min: float = 0.05
    pc_max: float = 0.5
    vmax_fraction: float = 0.2
    clamp_positions: bool = False
    lds_layout: str = "block"

    @property
    def N(self) -> int:
        return self.N1 + self.N2

    def validate(self) -> None:
        if self.N1 < 0 or self.N2 < 0 or self.N < 2:
            raise ValueError("need N1, N2 >= 0 and N1 + N2 >= 2")
        if self.G < 1:
            raise ValueError("G must be >= 1")
        if self.refresh_gap < 1:
            raise ValueError("refresh_gap must be >= 1")
        if self.lds_layout not in LAYOUTS:
            raise ValueError(f"lds_layout must be one of {LAYOUTS}")


@dataclass
class Streams:
    init: PointStream
    eps1: PointStream
    eps2: PointStream
    eps3: PointStream

    def cursors(self) -> dict:
        return {role: getattr(self, role).cursor for role in ROLES}


LAYOUTS = ("block", "sequential")


def build_streams(variant: VariantScheme, dimension: int, seed: int, N1: int = 0, N2: int = 0,
                  layout: str = "sequential") -> Streams:
    """One independent stream per role; random roles get role-specific seeds.

    With ``layout="block"`` every deterministic velocity stream replays a fixed
    block of rows each iteration, so particle i always receives the same
    point: eps1 uses rows [0, N1), eps2 rows [N1, N1+N2) and eps3 rows
    [N1+N2, N1+2*N2) of its sequence. ``"sequential"`` lets the cursor walk
    the sequence for the whole run. Random streams are never replayed.
    """
    if layout not in LAYOUTS:
        raise ValueError(f"layout must be one of {LAYOUTS}")
    rows = {"eps1": (N1, 0), "eps2": (N2, N1), "eps3": (N2, N1 + N2)}
    out = {}
    for role in ROLES:
        spec = getattr(variant, role)
        stream = spec.build(dimension, seed_for(seed, role))
        if layout == "block" and role in rows and spec.kind.lower() != "random" and rows[role][0]:
            stream = PeriodicStream(stream, *rows[role])
        out[role] = stream
    return Streams(**out)


def learning_probabilities(n: int, pc_min: float = 0.05, pc_max: float = 0.5) -> np.ndarray:
    """Pc_i = a + (b - a) (exp(10 i/(N-1)) - 1)/(exp(10) - 1), i = 0..N-1."""
    i = np.arange(n)
    return pc_min + (pc_max - pc_min) * (np.exp(10.0 * i / max(n - 1, 1)) - 1.0) / (np.exp(10.0) - 1.0)


@dataclass
class SwarmState:
    X: np.ndarray
    V: np.ndarray
    fitness: np.ndarray
    pbest: np.ndarray
    pbest_f: np.ndarray
    exemplar: np.ndarray   # (N, D) source-particle index per dimension
    stagnation: np.ndarray
    gbest: np.ndarray
    gbest_f: float
    N1: int
    N2: int
    lower: np.ndarray
    upper: np.ndarray
    pc: np.ndarray
    g: int = 0

    @property
    def N(self) -> int:
        return self.N1 + self.N2

    @property
    def dimension(self) -> int:
        return self.X.shape[1]

    def pool_size(self, i) -> np.ndarray:
        """Exploration particles learn within their own group; others from everyone."""
        i = np.asarray(i)
        return np.where(i < self.N1, self.N1, self.N)


def _evaluate(objective, X) -> np.ndarray:
    f = np.asarray(objective(X), dtype=float)
    if not np.all(np.isfinite(f)):
        raise FloatingPointError("objective returned a non-finite value")
    return f


def init_population(objective, lower, upper, N1: int, N2: int, init_stream: PointStream,
                    rng: np.random.Generator, pc: Optional[np.ndarray] = None) -> SwarmState:
    """X0 = a + u (b - a), one stream point per particle; zero velocities."""
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if np.any(lower >= upper):
        raise ValueError("bounds must satisfy a < b")
    n, d = N1 + N2, lower.size
    if n < 2:
        raise ValueError("population must have at least 2 particles")
    if init_stream.dimension != d:
        raise ValueError(f"init stream has dimension {init_stream.dimension}, problem has {d}")
    u = init_stream.next_points(n)
    X = lower + u * (upper - lower)
    f = _evaluate(objective, X)
    best = int(np.argmin(f))
    state = SwarmState(
        X=X, V=np.zeros_like(X), fitness=f.copy(), pbest=X.copy(), pbest_f=f.copy(),
        exemplar=np.tile(np.arange(n)[:, None], (1, d)), stagnation=np.zeros(n, dtype=np.int64),
        gbest=X[best].copy(), gbest_f=float(f[best]), N1=N1, N2=N2, lower=lower, upper=upper,
        pc=learning_probabilities(n) if pc is None else np.asarray(pc, dtype=float),
    )
    assign_exemplars(state, np.arange(n), rng)
    return state


def _draw_exemplars(state: SwarmState, idx: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    k, d = idx.size, state.dimension
    pool = state.pool_size(idx)
    u = rng.random((3, k, d))
    learn = u[0] < state.pc[idx][:, None]
    # two distinct members of the pool, fitter personal best wins
    a = (u[1] * pool[:, None]).astype(np.int64)
    b = (u[2] * np.maximum(pool - 1, 1)[:, None]).astype(np.int64)
    b += b >= a
    solo = pool == 1
    if solo.any():
        b[solo] = a[solo]
    fa, fb = state.pbest_f[a], state.pbest_f[b]
    ex = np.where(learn, np.where(fa <= fb, a, b), idx[:, None])
    # a particle that would only learn from itself gets one dimension from a peer
    stuck = (ex == idx[:, None]).all(axis=1) & ~solo
    if stuck.any():
        rows = np.flatnonzero(stuck)
        v = rng.random((2, rows.size))
        dims = (v[0] * d).astype(np.int64)
        peer = (v[1] * (pool[rows] - 1)).astype(np.int64)
        peer += peer >= idx[rows]
        ex[rows, dims] = peer
    return ex


def assign_exemplar(state: SwarmState, i: int, rng: np.random.Generator) -> np.ndarray:
    """Exemplar index vector for particle i (the state is not modified)."""
    return _draw_exemplars(state, np.array([i]), rng)[0]


def assign_exemplars(state: SwarmState, idx, rng: np.random.Generator) -> None:
    idx = np.asarray(idx, dtype=np.int64)
    if idx.size:
        state.exemplar[idx] = _draw_exemplars(state, idx, rng)


def step(state: SwarmState, objective, schedule: Schedule, streams: Streams,
         rng: np.random.Generator, config: HCLPSOConfig) -> SwarmState:
    """Advance the swarm by one iteration in place and return it."""
    if state.g >= schedule.G:
        raise RuntimeError("iteration budget exhausted")
    g, n1, n = state.g, state.N1, state.N
    X, V = state.X, state.V
    target = state.pbest[state.exemplar, np.arange(state.dimension)] - X
    w = schedule.w(g)
    if n1:
        e1 = streams.eps1.next_points(n1)
        V[:n1] = w * V[:n1] + schedule.k(g) * e1 * target[:n1]
    if n > n1:
        e2 = streams.eps2.next_points(n - n1)
        e3 = streams.eps3.next_points(n - n1)
        V[n1:] = (w * V[n1:] + schedule.c1(g) * e2 * target[n1:]
                  + schedule.c2(g) * e3 * (state.gbest - X[n1:]))
    vmax = config.vmax_fraction * (state.upper - state.lower)
    np.clip(V, -vmax, vmax, out=V)
    X += V
    if config.clamp_positions:
        np.clip(X, state.lower, state.upper, out=X)
    inside = np.all((X >= state.lower) & (X <= state.upper), axis=1)
    f = np.full(n, np.inf)
    if inside.all():
        f = _evaluate(objective, X)
    elif inside.any():
        f[inside] = _evaluate(objective, X[inside])
    state.fitness = f

    improved = f < state.pbest_f
    state.pbest[improved] = X[improved]
    state.pbest_f[improved] = f[improved]
    state.stagnation[improved] = 0
    state.stagnation[~improved] += 1
    best = int(np.argmin(state.pbest_f))
    if state.pbest_f[best] < state.gbest_f:
        state.gbest_f = float(state.pbest_f[best])
        state.gbest = state.pbest[best].copy()

    stale = np.flatnonzero(state.stagnation >= config.refresh_gap)
    if stale.size:
        assign_exemplars(state, stale, rng)
        state.stagnation[stale] = 0
    state.g += 1
    return state


@dataclass
class RunResult:
    curve: np.ndarray        # best-so-far fitness, length G + 1
    best_x: np.ndarray
    best_f: float
    elapsed: np.ndarray      # wall seconds since start, per curve entry
    stream_use: dict


def run(spec: ObjectiveSpec, config: HCLPSOConfig,
        callback: Optional[Callable[[SwarmState, Streams], None]] = None,
        streams: Optional[Streams] = None) -> RunResult:
    """Full run; ``callback`` sees the state after initialisation and after every step."""
    config.validate()
    lower, upper = spec.bounds
    d = lower.size
    if streams is None:
        streams = build_streams(config.variant, d, config.seed, config.N1, config.N2,
                                config.lds_layout)
    rng = np.random.Generator(np.random.PCG64(seed_for(config.seed, "exemplar")))
    schedule = Schedule(config.G)
    t0 = time.perf_counter()
    curve = np.empty(config.G + 1)
    elapsed = np.empty(config.G + 1)
    state = init_population(spec, lower, upper, config.N1, config.N2, streams.init, rng,
                            learning_probabilities(config.N, config.pc_min, config.pc_max))
    curve[0] = state.gbest_f
    elapsed[0] = time.perf_counter() - t0
    if callback:
        callback(state, streams)
    for g in range(config.G):
        step(state, spec, schedule, streams, rng, config)
        curve[g + 1] = state.gbest_f
        elapsed[g + 1] = time.perf_counter() - t0
        if callback:
            callback(state, streams)
    return RunResult(curve, state.gbest.copy(), state.gbest_f, elapsed, streams.cursors())


def with_seed(config: HCLPSOConfig, seed: int) -> HCLPSOConfig:
    return replace(config, seed=seed)
