"""Grover search with an a priori unknown number of marked positions."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from qalign.utils import qsim
from qalign.utils.qsim import MarkPredicate
from qalign.utils.seqdb import HammingTable

logger = logging.getLogger("qalign.bbht")

DEFAULT_LAMBDA = 6 / 5
DEFAULT_TIMEOUT_FACTOR = 4.0


def derive_seed(master_seed: int, *key: int) -> int:
    """Stable 64-bit child seed for ``key`` under ``master_seed`` (numpy ``SeedSequence``)."""

    sequence = np.random.SeedSequence(entropy=master_seed & 0xFFFFFFFFFFFFFFFF, spawn_key=tuple(key))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True, slots=True)
class BbhtParams:
    growth_factor: float = DEFAULT_LAMBDA
    timeout_factor: float = DEFAULT_TIMEOUT_FACTOR
    seed: int = 0
    compressed: bool = False

    def __post_init__(self) -> None:
        if not 1.0 < self.growth_factor < 4.0 / 3.0:
            raise ValueError(f"Growth factor must lie in (1, 4/3), got {self.growth_factor}")
        if not self.timeout_factor > 0:
            raise ValueError(f"Timeout factor must be positive, got {self.timeout_factor}")

    def budget(self, n_prime: int) -> int:
        """Oracle calls one run may spend before giving up."""

        return math.ceil(self.timeout_factor * math.sqrt(n_prime))

    def with_seed(self, seed: int) -> BbhtParams:
        return BbhtParams(self.growth_factor, self.timeout_factor, seed, self.compressed)


@dataclass(frozen=True, slots=True)
class Trial:
    iterations: int
    position: int
    success: bool


@dataclass(slots=True)
class BbhtOutcome:
    found: tuple[int, int] | None = None
    oracle_calls: int = 0
    trials: list[Trial] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.found is not None


def _run_trial(
    table: HammingTable,
    mark: MarkPredicate,
    iterations: int,
    rng: np.random.Generator,
    compressed: bool,
) -> int:
    if compressed:
        state = qsim.evolve_compressed(qsim.init_compressed(table, mark), mark, iterations)
        return qsim.measure_compressed(state, rng)
    state = qsim.evolve(qsim.init_uniform(table), mark, iterations)
    return qsim.measure(state, rng)


def bbht_search(table: HammingTable, mark: MarkPredicate, params: BbhtParams) -> BbhtOutcome:
    """Run randomized Grover trials with a growing iteration bound until a marked position is measured.

    Every trial starts from the uniform state. The run gives up once ``params.budget``
    oracle calls are spent; the last trial is shortened so the budget is never exceeded.
    """

    n_prime = table.n_prime
    if n_prime == 0:
        raise qsim.EmptyTable("Cannot search an empty Hamming table.")

    rng = make_rng(params.seed)
    budget = params.budget(n_prime)
    # Never below 2 so a single-window table still spends calls and reaches the budget.
    bound_cap = max(math.sqrt(n_prime), 2.0)
    bound = 1.0
    outcome = BbhtOutcome()

    while outcome.oracle_calls < budget:
        iterations = int(rng.integers(0, math.ceil(bound)))
        iterations = min(iterations, budget - outcome.oracle_calls)
        position = _run_trial(table, mark, iterations, rng, params.compressed)
        outcome.oracle_calls += iterations
        success = mark.holds(table, position)
        outcome.trials.append(Trial(iterations, position, success))
        logger.debug(
            "BBHT trial: bound=%.3f j=%s position=%s success=%s calls=%s",
            bound,
            iterations,
            position,
            success,
            outcome.oracle_calls,
        )
        if success:
            outcome.found = (position, int(table.values[position]))
            return outcome
        bound = min(params.growth_factor * bound, bound_cap)

    logger.debug("BBHT run exhausted its budget of %s oracle calls", budget)
    return outcome
