"""Simulated two-register search state and the Grover evolution operators.

The state is a real amplitude vector over the N - m + 1 joint basis states
|window_i XOR query> (x) |i>. The oracle flip is diagonal in that basis and the
diffusion reflects about the uniform vector, so the span is invariant under the
Grover step and the simulation is exact without building a 2**(Q1+Q2) vector.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from qalign.utils.seqdb import HammingMode, HammingTable

logger = logging.getLogger("qalign.qsim")

NORM_TOLERANCE = 1e-9
_TIE_TOLERANCE = 1e-12


class SimulationError(RuntimeError):
    """Base exception for state simulation failures."""


class EmptyTable(SimulationError):
    """A search state cannot be built over an empty table."""


class DomainError(SimulationError):
    """A closed-form quantity is undefined for the given arguments."""


class NormDriftError(SimulationError, AssertionError):
    """Amplitudes drifted away from unit norm."""


@dataclass(frozen=True, slots=True)
class MarkPredicate:
    """Position ``i`` is marked iff ``T[i] == target_distance`` and ``i`` is not excluded."""

    target_distance: int
    excluded_positions: frozenset[int] = frozenset()

    def mask(self, table: HammingTable) -> np.ndarray:
        marked = table.values == self.target_distance
        if self.excluded_positions:
            marked[list(self.excluded_positions)] = False
        return marked

    def excluded_mask(self, n_prime: int) -> np.ndarray:
        excluded = np.zeros(n_prime, dtype=bool)
        if self.excluded_positions:
            excluded[list(self.excluded_positions)] = True
        return excluded

    def holds(self, table: HammingTable, position: int) -> bool:
        return (
            int(table.values[position]) == self.target_distance
            and position not in self.excluded_positions
        )

    def count(self, table: HammingTable) -> int:
        """Number of marked positions in ``table``."""

        if not self.excluded_positions:
            return table.count(self.target_distance)
        return len(set(table.positions(self.target_distance)) - self.excluded_positions)

    def excluding(self, positions: frozenset[int] | set[int]) -> MarkPredicate:
        return MarkPredicate(self.target_distance, self.excluded_positions | frozenset(positions))


@dataclass(frozen=True, slots=True)
class GroverPrediction:
    theta: float
    alpha: float
    k_max: int


@dataclass(slots=True)
class SearchState:
    """Single-owner amplitude vector; operators update it in place and return it."""

    amplitudes: np.ndarray
    table: HammingTable
    oracle_calls: int = 0
    _mask_cache: dict[MarkPredicate, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def n_prime(self) -> int:
        return len(self.amplitudes)

    def marked(self, mark: MarkPredicate) -> np.ndarray:
        cached = self._mask_cache.get(mark)
        if cached is None:
            cached = mark.mask(self.table)
            self._mask_cache[mark] = cached
        return cached

    def probabilities(self) -> np.ndarray:
        return self.amplitudes * self.amplitudes

    def norm_drift(self) -> float:
        return abs(float(np.dot(self.amplitudes, self.amplitudes)) - 1.0)


def init_uniform(table: HammingTable) -> SearchState:
    """Uniform superposition over every window of the table."""

    n_prime = table.n_prime
    if n_prime == 0:
        raise EmptyTable("Cannot build a search state over an empty Hamming table.")
    amplitudes = np.full(n_prime, 1.0 / math.sqrt(n_prime), dtype=np.float64)
    return SearchState(amplitudes=amplitudes, table=table)


def apply_oracle_flip(state: SearchState, mark: MarkPredicate) -> SearchState:
    """Negate marked amplitudes; counts as one oracle query."""

    np.negative(state.amplitudes, out=state.amplitudes, where=state.marked(mark))
    state.oracle_calls += 1
    return state


def apply_diffusion(state: SearchState) -> SearchState:
    """Inversion about the average: ``c_i -> 2 * mean(c) - c_i``."""

    mean = float(state.amplitudes.mean())
    np.subtract(2.0 * mean, state.amplitudes, out=state.amplitudes)
    return state


def _check_norm(state: SearchState | CompressedState) -> None:
    drift = state.norm_drift()
    if drift > NORM_TOLERANCE:
        raise NormDriftError(f"Amplitude norm drifted by {drift:.3e} after {state.oracle_calls} steps")


def grover_step(state: SearchState, mark: MarkPredicate) -> SearchState:
    apply_diffusion(apply_oracle_flip(state, mark))
    _check_norm(state)
    return state


def evolve(state: SearchState, mark: MarkPredicate, k: int) -> SearchState:
    """Apply ``k`` Grover steps."""

    if k < 0:
        raise ValueError("Number of Grover steps must be non-negative.")
    for _ in range(k):
        grover_step(state, mark)
    logger.debug("Evolved %s steps over n_prime=%s (oracle_calls=%s)", k, state.n_prime, state.oracle_calls)
    return state


def marked_probability(state: SearchState, mark: MarkPredicate) -> float:
    return float(state.probabilities()[state.marked(mark)].sum())


def _angles(n_prime: int) -> tuple[float, float]:
    if n_prime < 2:
        raise DomainError(f"Closed form needs at least two windows, got n_prime={n_prime}")
    theta = math.asin(2.0 * math.sqrt(n_prime - 1) / n_prime)
    alpha = math.acos(1.0 / math.sqrt(n_prime))
    return theta, alpha


def predicted_amplitude(n_prime: int, k: int) -> float:
    """Single-target amplitude after ``k`` steps: ``cos(k * theta - alpha)``."""

    theta, alpha = _angles(n_prime)
    return math.cos(k * theta - alpha)


def predicted_marked_probability(n_prime: int, n_targets: int, k: int) -> float:
    """Total marked probability ``sin^2((2k + 1) * theta_t)`` with ``sin^2 theta_t = N_t / n_prime``."""

    if n_prime < 1 or not 0 <= n_targets <= n_prime:
        raise DomainError(f"Invalid target count {n_targets} for n_prime={n_prime}")
    if n_targets == 1 and n_prime >= 2:
        return predicted_amplitude(n_prime, k) ** 2
    theta_t = math.asin(math.sqrt(n_targets / n_prime))
    return math.sin((2 * k + 1) * theta_t) ** 2


def optimal_k(n_prime: int) -> int:
    """Smallest ``k >= 1`` maximizing the single-target amplitude magnitude."""

    theta, alpha = _angles(n_prime)
    best_k, best = 1, -1.0
    for k in range(1, math.ceil(math.pi / 2 * math.sqrt(n_prime)) + 1):
        value = abs(math.cos(k * theta - alpha))
        if value > best + _TIE_TOLERANCE:
            best_k, best = k, value
    return best_k


def grover_prediction(n_prime: int) -> GroverPrediction:
    theta, alpha = _angles(n_prime)
    return GroverPrediction(theta=theta, alpha=alpha, k_max=optimal_k(n_prime))


def rotation_matrix(n_prime: int) -> np.ndarray:
    """Matrix of one Grover step restricted to span{|S>, |R>}, extracted from the simulator.

    Uses a synthetic table whose only zero-distance window sits at position 0.
    """

    if n_prime < 2:
        raise DomainError(f"Rotation needs at least two windows, got n_prime={n_prime}")
    values = np.ones(n_prime, dtype=np.int64)
    values[0] = 0
    table = HammingTable(values=values, mode=HammingMode.BIT, m=1, bits_per_residue=1)
    mark = MarkPredicate(0)

    target = np.zeros(n_prime)
    target[0] = 1.0
    rest = np.full(n_prime, 1.0 / math.sqrt(n_prime - 1))
    rest[0] = 0.0
    basis = (target, rest)

    matrix = np.empty((2, 2))
    for column, vector in enumerate(basis):
        state = SearchState(amplitudes=vector.copy(), table=table)
        grover_step(state, mark)
        for row, probe in enumerate(basis):
            matrix[row, column] = float(np.dot(probe, state.amplitudes))
    return matrix


def measure(state: SearchState, rng: np.random.Generator) -> int:
    """Sample a position with probability ``amplitude**2`` by an inverse-CDF walk.

    The state is consumed: callers restart from ``init_uniform`` afterwards.
    """

    cdf = np.cumsum(state.probabilities())
    draw = rng.random() * cdf[-1]
    position = int(np.searchsorted(cdf, draw, side="right"))
    return min(position, state.n_prime - 1)


@dataclass(slots=True)
class CompressedState:
    """One amplitude per (T[i], excluded) class; exact because equal classes evolve identically."""

    table: HammingTable
    class_of: np.ndarray
    distances: np.ndarray
    excluded: np.ndarray
    counts: np.ndarray
    amplitudes: np.ndarray
    oracle_calls: int = 0

    @property
    def n_prime(self) -> int:
        return self.table.n_prime

    def marked_classes(self, mark: MarkPredicate) -> np.ndarray:
        return (self.distances == mark.target_distance) & ~self.excluded

    def norm_drift(self) -> float:
        return abs(float(np.dot(self.counts, self.amplitudes * self.amplitudes)) - 1.0)

    def expand(self) -> np.ndarray:
        """Dense amplitude vector equivalent to this state."""

        return self.amplitudes[self.class_of]


def init_compressed(table: HammingTable, mark: MarkPredicate) -> CompressedState:
    n_prime = table.n_prime
    if n_prime == 0:
        raise EmptyTable("Cannot build a search state over an empty Hamming table.")
    excluded = mark.excluded_mask(n_prime)
    keys = table.values * 2 + excluded
    unique, class_of, counts = np.unique(keys, return_inverse=True, return_counts=True)
    return CompressedState(
        table=table,
        class_of=class_of,
        distances=unique // 2,
        excluded=(unique % 2).astype(bool),
        counts=counts.astype(np.float64),
        amplitudes=np.full(len(unique), 1.0 / math.sqrt(n_prime), dtype=np.float64),
    )


def compressed_step(state: CompressedState, mark: MarkPredicate) -> CompressedState:
    np.negative(state.amplitudes, out=state.amplitudes, where=state.marked_classes(mark))
    state.oracle_calls += 1
    mean = float(np.dot(state.counts, state.amplitudes)) / state.n_prime
    np.subtract(2.0 * mean, state.amplitudes, out=state.amplitudes)
    _check_norm(state)
    return state


def evolve_compressed(state: CompressedState, mark: MarkPredicate, k: int) -> CompressedState:
    if k < 0:
        raise ValueError("Number of Grover steps must be non-negative.")
    for _ in range(k):
        compressed_step(state, mark)
    return state


def measure_compressed(state: CompressedState, rng: np.random.Generator) -> int:
    """Sample a class by its total probability, then a position uniformly inside it."""

    weights = state.counts * state.amplitudes * state.amplitudes
    cdf = np.cumsum(weights)
    draw = rng.random() * cdf[-1]
    chosen = min(int(np.searchsorted(cdf, draw, side="right")), len(cdf) - 1)
    members = np.flatnonzero(state.class_of == chosen)
    return int(members[rng.integers(len(members))])
