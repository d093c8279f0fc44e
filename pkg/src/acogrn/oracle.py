"""Exhaustive maximum-correlation circuit search for small instances.

Used as ground truth for the stochastic solver. Every undirected circuit
is visited once in canonical form: gene 0 first and the second gene
smaller than the last.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

from . import _backend
from .aco import ObjectiveMode, objective_matrix
from .correlation import CorrelationMatrix
from .errors import OutOfRange

MIN_GENES = 3
MAX_GENES = 12


@dataclass(frozen=True)
class OracleResult:
    best_order: tuple[int, ...]
    best_score: float
    n_cycles_examined: int
    all_optima: tuple[tuple[int, ...], ...]


def n_cycles(n: int) -> int:
    """Number of undirected Hamiltonian circuits of the complete graph K_n."""
    return math.factorial(n - 1) // 2


def _check_size(n: int) -> None:
    if not MIN_GENES <= n <= MAX_GENES:
        raise OutOfRange(
            f"exhaustive search supports {MIN_GENES} to {MAX_GENES} genes, got {n}")


def enumerate_cycles(n: int) -> Iterator[tuple[int, ...]]:
    """Yield each undirected circuit over ``range(n)`` once, in lexicographic order."""
    _check_size(n)
    for rest in itertools.permutations(range(1, n)):
        if rest[0] < rest[-1]:
            yield (0, *rest)


def brute_force_optimum(corr: CorrelationMatrix,
                        mode: ObjectiveMode | str = ObjectiveMode.RAW,
                        backend: str | None = None) -> OracleResult:
    """Score every circuit and return the maximum with all exact ties.

    ``best_order`` is the lexicographically first optimum.
    """
    _check_size(corr.n)
    kernels = _backend.get_kernels(backend)
    best, optima, count = kernels.brute_force(objective_matrix(corr, mode))
    optima = tuple(tuple(int(i) for i in o) for o in optima)
    return OracleResult(optima[0], float(best), int(count), optima)
