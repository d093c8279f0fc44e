"""Max-Min Ant System for the maximum-correlation Hamiltonian circuit.

Ants walk the complete gene graph, choosing the next gene with probability
proportional to ``trail**alpha * visibility**beta`` over the genes not yet
visited. After every iteration the best tour of that iteration reinforces
its edges and all trails are clamped into ``[tau_min, tau_max]``.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _backend
from ._kernels_py import circuit_sum
from .correlation import CorrelationMatrix
from .errors import EmptyAllowedSet, InvalidParameter, TooFewGenes, ZeroMass

__all__ = [
    "ObjectiveMode",
    "VisibilityMode",
    "AcoParams",
    "PheromoneMatrix",
    "Tour",
    "AcoResult",
    "visibility_transform",
    "transition_probabilities",
    "construct_tour",
    "canonical_order",
    "tour_score",
    "objective_matrix",
    "update_pheromones",
    "run_aco",
    "tour_to_edges",
    "order_to_edges",
]

_MASK32 = 0xFFFFFFFF
_PLACEMENT_STREAM = 0


class ObjectiveMode(str, enum.Enum):
    RAW = "raw"
    ABS = "abs"


class VisibilityMode(str, enum.Enum):
    ABS = "abs"
    SHIFT = "shift"
    POSITIVE = "positive"


# Visibility used when none is requested: it must rank edges the same way
# the objective does, or ants are steered towards strongly negative edges.
_MATCHED_VISIBILITY = {
    ObjectiveMode.RAW: VisibilityMode.POSITIVE,
    ObjectiveMode.ABS: VisibilityMode.ABS,
}


@dataclass(frozen=True)
class AcoParams:
    """Solver settings.

    ``n_ants=None`` means one ant per gene and ``visibility_mode=None``
    picks the visibility matching ``objective_mode``. ``restart_after``
    resets every trail to ``tau_max`` once a trial has gone that many
    iterations without improving its best tour (``None`` disables it).
    ``epsilon_visibility`` floors visibilities; with ``beta=2`` a much
    smaller floor makes negative-correlation edges practically unreachable
    even when the best circuit needs them.
    """

    alpha: float = 1.0
    beta: float = 2.0
    rho: float = 0.5
    n_ants: int | None = None
    n_iterations: int = 100
    n_trials: int = 1
    seed: int = 0
    objective_mode: ObjectiveMode = ObjectiveMode.RAW
    visibility_mode: VisibilityMode | None = None
    epsilon_visibility: float = 0.05
    restart_after: int | None = 10

    def __post_init__(self):
        try:
            object.__setattr__(self, "objective_mode", ObjectiveMode(self.objective_mode))
            if self.visibility_mode is not None:
                object.__setattr__(self, "visibility_mode", VisibilityMode(self.visibility_mode))
        except ValueError as exc:
            raise InvalidParameter(str(exc)) from None
        self.validate()

    def validate(self) -> None:
        def bad(msg):
            raise InvalidParameter(msg)

        for name in ("alpha", "beta", "rho", "epsilon_visibility"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                bad(f"{name} must be a finite real number, got {v!r}")
        if self.alpha < 0:
            bad(f"alpha must be >= 0, got {self.alpha}")
        if self.beta < 0:
            bad(f"beta must be >= 0, got {self.beta}")
        if not 0 < self.rho <= 1:
            bad(f"rho must lie in (0, 1], got {self.rho}")
        if not self.epsilon_visibility > 0:
            bad(f"epsilon_visibility must be > 0, got {self.epsilon_visibility}")
        optional = tuple(k for k in ("n_ants", "restart_after") if getattr(self, k) is not None)
        for name in ("n_iterations", "n_trials") + optional:
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                bad(f"{name} must be a positive integer, got {v!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) \
                or not 0 <= self.seed < 2**64:
            bad(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")

    def resolved(self, n_genes: int) -> "AcoParams":
        """Copy with the instance-dependent defaults filled in."""
        return replace(
            self,
            n_ants=n_genes if self.n_ants is None else self.n_ants,
            visibility_mode=self.visibility_mode or _MATCHED_VISIBILITY[self.objective_mode],
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["objective_mode"] = self.objective_mode.value
        if self.visibility_mode is not None:
            d["visibility_mode"] = self.visibility_mode.value
        return d


@dataclass(eq=False)
class PheromoneMatrix:
    trails: np.ndarray
    tau_min: float
    tau_max: float

    @classmethod
    def initial(cls, n: int, tau_max: float) -> "PheromoneMatrix":
        trails = np.full((n, n), float(tau_max))
        np.fill_diagonal(trails, 0.0)
        return cls(trails, tau_max / (2 * n), float(tau_max))

    @property
    def n(self) -> int:
        return self.trails.shape[0]

    def off_diagonal(self) -> np.ndarray:
        return self.trails[~np.eye(self.n, dtype=bool)]

    def within_bounds(self) -> bool:
        off = self.off_diagonal()
        return bool(np.all(off >= self.tau_min) and np.all(off <= self.tau_max))


@dataclass(frozen=True)
class Tour:
    order: tuple[int, ...]
    score: float

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(i) for i in self.order))

    def is_permutation(self) -> bool:
        return sorted(self.order) == list(range(len(self.order)))

    def edges(self) -> list[tuple[int, int]]:
        o = self.order
        return [(o[k], o[(k + 1) % len(o)]) for k in range(len(o))]

    def undirected_edges(self) -> frozenset:
        return frozenset(frozenset(e) for e in self.edges())


@dataclass(frozen=True)
class AcoResult:
    best_tour: Tour
    score_history: tuple[tuple[int, float], ...]
    params_used: AcoParams
    gene_names: tuple[str, ...]
    best_trial: int = 0


def visibility_transform(corr: CorrelationMatrix | np.ndarray,
                         mode: VisibilityMode | str = VisibilityMode.ABS,
                         epsilon: float = 1e-6) -> np.ndarray:
    """Map correlations to strictly positive visibilities.

    ``abs`` uses ``max(|c|, epsilon)``, ``shift`` uses
    ``max((c + 1) / 2, epsilon)`` and ``positive`` uses ``max(c, epsilon)``.
    The diagonal is zero.
    """
    c = corr.coefficients if isinstance(corr, CorrelationMatrix) else np.asarray(corr, float)
    mode = VisibilityMode(mode)
    if not epsilon > 0:
        raise InvalidParameter(f"epsilon must be > 0, got {epsilon}")
    if mode is VisibilityMode.ABS:
        eta = np.maximum(np.abs(c), epsilon)
    elif mode is VisibilityMode.SHIFT:
        eta = np.maximum((c + 1.0) / 2.0, epsilon)
    else:
        eta = np.maximum(c, epsilon)
    np.fill_diagonal(eta, 0.0)
    return eta


def _trails(pher) -> np.ndarray:
    return pher.trails if isinstance(pher, PheromoneMatrix) else np.asarray(pher, float)


def transition_probabilities(current: int, allowed: Iterable[int], pher, vis,
                             alpha: float, beta: float) -> dict[int, float]:
    """Probability of moving from ``current`` to each gene in ``allowed``.

    Genes outside ``allowed`` have probability zero and are not returned.
    """
    allowed = list(allowed)
    if not allowed:
        raise EmptyAllowedSet(f"no genes left to visit from gene {current}")
    if current in allowed:
        raise ValueError(f"current gene {current} cannot be in the allowed set")
    tau = _trails(pher)
    eta = np.asarray(vis, dtype=np.float64)
    nums = [math.pow(float(tau[current, j]), alpha) * math.pow(float(eta[current, j]), beta)
            for j in allowed]
    total = math.fsum(nums)
    if not total > 0.0:
        raise ZeroMass(f"all transition weights from gene {current} underflowed to zero")
    probs = [x / total for x in nums]
    norm = math.fsum(probs)
    return {j: p / norm for j, p in zip(allowed, probs)}


def _weights(trails: np.ndarray, heuristic: np.ndarray, alpha: float) -> np.ndarray:
    w = np.power(trails, alpha) * heuristic
    np.fill_diagonal(w, 0.0)
    return np.ascontiguousarray(w)


def canonical_order(order: Sequence[int]) -> tuple[int, ...]:
    """Rotate to start at the smallest index and orient so order[1] < order[-1]."""
    order = [int(i) for i in order]
    if len(order) < 3:
        return tuple(sorted(order))
    k = order.index(min(order))
    rot = order[k:] + order[:k]
    if rot[1] > rot[-1]:
        rot = [rot[0]] + rot[:0:-1]
    return tuple(rot)


def objective_matrix(corr: CorrelationMatrix | np.ndarray,
                     mode: ObjectiveMode | str = ObjectiveMode.RAW) -> np.ndarray:
    c = corr.coefficients if isinstance(corr, CorrelationMatrix) else np.asarray(corr, float)
    return np.abs(c) if ObjectiveMode(mode) is ObjectiveMode.ABS else c


def tour_score(order: Sequence[int], corr: CorrelationMatrix | np.ndarray,
               mode: ObjectiveMode | str = ObjectiveMode.RAW) -> float:
    """Sum of correlations along the closed circuit (signed or absolute).

    The sum is taken over the canonical rotation, so every rotation and
    reversal of a circuit scores bit-identically.
    """
    return _score_canonical(canonical_order(order), objective_matrix(corr, mode).tolist())


def _score_canonical(canon: tuple[int, ...], obj_rows: list[list[float]]) -> float:
    return circuit_sum(obj_rows, canon)


def construct_tour(start: int, pher, vis, params: AcoParams,
                   rng: np.random.Generator, corr: CorrelationMatrix | np.ndarray,
                   backend: str | None = None) -> Tour:
    """One ant's walk from ``start`` through every gene and back.

    ``rng`` supplies the n - 1 uniform draws used for roulette selection.
    """
    tau = _trails(pher)
    n = tau.shape[0]
    if n < 3:
        raise TooFewGenes(f"a Hamiltonian circuit needs at least 3 genes, got {n}")
    if not 0 <= start < n:
        raise ValueError(f"start gene {start} out of range for {n} genes")
    heuristic = np.power(np.asarray(vis, dtype=np.float64), params.beta)
    w = _weights(tau, heuristic, params.alpha)
    draws = rng.random((1, n - 1))
    kernels = _backend.get_kernels(backend)
    order = kernels.construct_orders(w, np.array([start], dtype=np.int64), draws)[0]
    return Tour(tuple(order), tour_score(order, corr, params.objective_mode))


def update_pheromones(pher: PheromoneMatrix, best: Tour, params: AcoParams,
                      global_best_score: float | None = None) -> PheromoneMatrix:
    """Evaporate, let ``best`` deposit its score, then clamp into the bounds.

    The bounds are recomputed from the best score seen so far:
    ``tau_max = best / rho`` and ``tau_min = tau_max / (2 n)``. Scores at
    or below zero are floored at ``epsilon_visibility``.
    """
    n = pher.n
    eps = params.epsilon_visibility
    reference = best.score if global_best_score is None else global_best_score
    tau_max = max(reference, eps) / params.rho
    tau_min = tau_max / (2 * n)
    trails = (1.0 - params.rho) * pher.trails
    deposit = max(best.score, eps)
    for i, j in best.edges():
        trails[i, j] += deposit
        trails[j, i] = trails[i, j]
    np.clip(trails, tau_min, tau_max, out=trails)
    np.fill_diagonal(trails, 0.0)
    return PheromoneMatrix(trails, tau_min, tau_max)


def _greedy_score(obj: np.ndarray) -> float:
    # Seed for the initial tau_max: nearest-neighbour tour from gene 0.
    n = obj.shape[0]
    order = [0]
    left = set(range(1, n))
    while left:
        cur = order[-1]
        nxt = max(sorted(left), key=lambda j: obj[cur, j])
        order.append(nxt)
        left.remove(nxt)
    return circuit_sum(obj.tolist(), canonical_order(order))


def _stream(seed: int, trial: int, iteration: int, tag: int) -> np.random.Generator:
    ss = np.random.SeedSequence([seed & _MASK32, seed >> 32, trial, iteration, tag])
    return np.random.Generator(np.random.PCG64(ss))


def _starts(seed: int, trial: int, iteration: int, n: int, m: int) -> np.ndarray:
    rng = _stream(seed, trial, iteration, _PLACEMENT_STREAM)
    if m == n:
        return rng.permutation(n).astype(np.int64)
    return rng.integers(0, n, size=m, dtype=np.int64)


def _draws(seed: int, trial: int, iteration: int, n: int, m: int) -> np.ndarray:
    # Ant a owns sub-stream tag a + 1, independent of how ants are batched.
    out = np.empty((m, n - 1))
    for a in range(m):
        out[a] = _stream(seed, trial, iteration, a + 1).random(n - 1)
    return out


def run_aco(corr: CorrelationMatrix, params: AcoParams | None = None, *,
            workers: int = 1, backend: str | None = None,
            callback: Callable[[int, int, PheromoneMatrix], None] | None = None,
            ) -> AcoResult:
    """Run the Max-Min Ant System and return the best circuit found.

    ``workers`` threads build the ants of an iteration in parallel; the
    result is identical for any worker count. ``callback`` is invoked with
    ``(trial, iteration, pheromones)`` after every pheromone update.
    """
    params = params or AcoParams()
    n = corr.n
    if n < 3:
        raise TooFewGenes(f"a Hamiltonian circuit needs at least 3 genes, got {n}")
    if workers < 1:
        raise InvalidParameter(f"workers must be >= 1, got {workers}")
    params = params.resolved(n)
    kernels = _backend.get_kernels(backend)
    m = params.n_ants

    obj = objective_matrix(corr, params.objective_mode)
    obj_rows = obj.tolist()
    heuristic = np.power(
        visibility_transform(corr, params.visibility_mode, params.epsilon_visibility),
        params.beta)
    np.fill_diagonal(heuristic, 0.0)
    initial_tau_max = max(_greedy_score(obj), params.epsilon_visibility) / params.rho

    chunks = [c for c in np.array_split(np.arange(m), min(workers, m)) if c.size]
    pool = ThreadPoolExecutor(max_workers=len(chunks)) if len(chunks) > 1 else None

    best: Tour | None = None
    best_trial = 0
    history: list[tuple[int, float]] = []
    step = 0
    try:
        for trial in range(params.n_trials):
            pher = PheromoneMatrix.initial(n, initial_tau_max)
            trial_best: Tour | None = None
            stale = 0
            for it in range(params.n_iterations):
                w = _weights(pher.trails, heuristic, params.alpha)
                starts = _starts(params.seed, trial, it, n, m)
                draws = _draws(params.seed, trial, it, n, m)
                if pool is None:
                    orders = kernels.construct_orders(w, starts, draws)
                else:
                    parts = pool.map(
                        lambda idx: kernels.construct_orders(w, starts[idx], draws[idx]),
                        chunks)
                    orders = np.concatenate(list(parts))

                it_best: Tour | None = None
                for order in orders:
                    canon = canonical_order(order)
                    s = _score_canonical(canon, obj_rows)
                    if it_best is None or s > it_best.score:
                        it_best = Tour(canon, s)
                if trial_best is None or it_best.score > trial_best.score:
                    trial_best = it_best
                    stale = 0
                else:
                    stale += 1
                if best is None or it_best.score > best.score:
                    best = it_best
                    best_trial = trial

                pher = update_pheromones(pher, it_best, params, trial_best.score)
                if params.restart_after is not None and stale >= params.restart_after:
                    pher = PheromoneMatrix.initial(n, pher.tau_max)
                    stale = 0
                if callback is not None:
                    callback(trial, it, pher)
                history.append((step, best.score))
                step += 1
    finally:
        if pool is not None:
            pool.shutdown()

    return AcoResult(best, tuple(history), params, corr.gene_names, best_trial)


def order_to_edges(order: Sequence[int], gene_names: Sequence[str]) -> list[tuple[str, str]]:
    n = len(order)
    return [(gene_names[order[k]], gene_names[order[(k + 1) % n]]) for k in range(n)]


def tour_to_edges(result: AcoResult) -> list[tuple[str, str]]:
    """The N successor pairs of the best circuit, closing pair last."""
    return order_to_edges(result.best_tour.order, result.gene_names)
