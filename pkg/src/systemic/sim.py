"""Euler-Maruyama oracle for the noise-driven consensus dynamics.

Integrates the disagreement (centered) state under per-node white noise and
time-averages its squared norm; the stationary value of that average is the
squared H_2 measure, so the simulation cross-checks the spectral formulas
without touching them.  Noise streams are counter-based (Philox) keyed by
(seed, trial), which makes trials reproducible and order-independent.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .graphs import WeightedGraph, laplacian
from .spectral import graph_spectrum

NOISE_CHUNK_STEPS = 1024


@dataclass(frozen=True)
class SimConfig:
    """Integration settings; x0 is the initial state (defaults to zero).

    Stability needs dt * lambda_max < 2; the burn-in should cover at least
    5 / lambda_2 of mixing time (warned about, not enforced).
    """

    dt: float
    horizon: float
    burn_in: float
    trials: int
    seed: int
    x0: tuple[float, ...] | None = None

    def __post_init__(self):
        if not (self.dt > 0):
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if not (self.horizon > self.burn_in >= 0):
            raise ConfigError(
                f"need horizon > burn_in >= 0, got {self.horizon}, {self.burn_in}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.x0 is not None:
            object.__setattr__(self, "x0", tuple(float(v) for v in self.x0))


def _center(state: np.ndarray) -> np.ndarray:
    return state - state.mean(axis=-1, keepdims=True)


def _validate(graph: WeightedGraph, cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    spectrum = graph_spectrum(graph)  # also enforces connectivity
    lam_max = float(spectrum.eigenvalues[-1])
    lam_2 = float(spectrum.nonzero[0])
    if cfg.dt * lam_max >= 2.0:
        raise ConfigError(
            f"explicit scheme unstable: dt * lambda_max = {cfg.dt * lam_max:.3f} >= 2")
    if cfg.burn_in < 5.0 / lam_2:
        warnings.warn(
            f"burn_in {cfg.burn_in:g} is below the mixing heuristic 5/lambda_2 = "
            f"{5.0 / lam_2:g}; the estimate may be biased", stacklevel=3)
    matrix = laplacian(graph).matrix
    if cfg.x0 is None:
        initial = np.zeros(graph.n)
    else:
        initial = np.asarray(cfg.x0, dtype=float)
        if initial.shape != (graph.n,):
            raise ConfigError(f"x0 has length {initial.shape[0]}, graph has {graph.n} nodes")
    return matrix, initial


def _trial_generators(seed: int, trials: int) -> list[np.random.Generator]:
    mask = (1 << 64) - 1
    return [np.random.Generator(np.random.Philox(key=np.array(
        [seed & mask, trial], dtype=np.uint64))) for trial in range(trials)]


def estimate_h2(graph: WeightedGraph, cfg: SimConfig) -> tuple[float, float]:
    """Monte-Carlo estimate of the squared H_2 measure with its standard error.

    All trials advance in lockstep (vectorized across the trial axis); the
    per-trial time averages are combined by numpy's pairwise-summation mean,
    so results are deterministic for a fixed seed.
    """
    matrix, initial = _validate(graph, cfg)
    n = graph.n
    total_steps = int(round(cfg.horizon / cfg.dt))
    burn_steps = int(round(cfg.burn_in / cfg.dt))
    if total_steps <= burn_steps:
        raise ConfigError("horizon leaves no steps after burn-in")
    sqrt_dt = math.sqrt(cfg.dt)
    step_matrix = np.eye(n) - cfg.dt * matrix
    state = np.tile(_center(initial), (cfg.trials, 1))
    generators = _trial_generators(cfg.seed, cfg.trials)
    sums = np.zeros(cfg.trials)
    kept = 0
    step = 0
    states = np.empty((NOISE_CHUNK_STEPS, cfg.trials, n))
    while step < total_steps:
        chunk = min(NOISE_CHUNK_STEPS, total_steps - step)
        noise = np.stack([g.standard_normal((chunk, n)) for g in generators], axis=1)
        noise -= noise.mean(axis=2, keepdims=True)
        noise *= sqrt_dt
        for local in range(chunk):
            state = state @ step_matrix + noise[local]
            states[local] = state
        first_kept = max(burn_steps - step, 0)
        if first_kept < chunk:
            sums += np.einsum("sij,sij->i", states[first_kept:chunk],
                              states[first_kept:chunk])
            kept += chunk - first_kept
        step += chunk
    per_trial = sums / kept
    estimate = float(np.mean(per_trial))
    if cfg.trials == 1:
        return estimate, math.nan
    stderr = float(np.std(per_trial, ddof=1) / math.sqrt(cfg.trials))
    return estimate, stderr


def simulate_output(graph: WeightedGraph, cfg: SimConfig, trial: int = 0) -> np.ndarray:
    """Disagreement-output path of one trial, shape (steps + 1, n).

    The path depends on x0 only through its centered part, so shifting every
    node's initial value by the same constant leaves the output untouched.
    """
    matrix, initial = _validate(graph, cfg)
    total_steps = int(round(cfg.horizon / cfg.dt))
    sqrt_dt = math.sqrt(cfg.dt)
    step_matrix = np.eye(graph.n) - cfg.dt * matrix
    mask = (1 << 64) - 1
    generator = np.random.Generator(np.random.Philox(key=np.array(
        [cfg.seed & mask, trial], dtype=np.uint64)))
    state = _center(initial)
    path = np.empty((total_steps + 1, graph.n))
    path[0] = state
    step = 0
    while step < total_steps:
        chunk = min(NOISE_CHUNK_STEPS, total_steps - step)
        noise = generator.standard_normal((chunk, graph.n))
        noise -= noise.mean(axis=1, keepdims=True)
        noise *= sqrt_dt
        for local in range(chunk):
            state = state @ step_matrix + noise[local]
            path[step + 1] = state
            step += 1
    return path


def decay_rate(graph: WeightedGraph, cfg: SimConfig) -> float:
    """Fitted exponential decay rate of the noise-free disagreement norm.

    With the disturbance switched off, the disagreement decays like
    exp(-lambda_2 t) once faster modes die out; the rate is fitted by least
    squares on the log-norm over the second half of the horizon.
    """
    matrix, initial = _validate(graph, cfg)
    state = _center(initial)
    norm0 = float(np.linalg.norm(state))
    if norm0 == 0.0:
        raise DomainError("x0 has no disagreement component; nothing decays")
    total_steps = int(round(cfg.horizon / cfg.dt))
    norms = np.empty(total_steps + 1)
    norms[0] = norm0
    for step in range(total_steps):
        state = state - cfg.dt * (matrix @ state)
        norms[step + 1] = np.linalg.norm(state)
    start = total_steps // 2
    if np.any(norms[start:] <= 0.0):
        raise DomainError("disagreement reached zero; shorten the horizon")
    times = cfg.dt * np.arange(start, total_steps + 1)
    slope = np.polyfit(times, np.log(norms[start:]), 1)[0]
    return -float(slope)
