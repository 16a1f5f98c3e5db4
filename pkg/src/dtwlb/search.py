"""1-NN DTW classification with lower-bound pruning."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from . import _kernels
from .bounds import BoundSpec, evaluate
from .core import TimeSeries, WindowSpec, as_window
from .envelope import Envelope, compute_envelope
from .errors import EmptyTrainingSet, LengthMismatch, MissingLabel

__all__ = [
    "TrainedModel",
    "QueryStats",
    "Prediction",
    "build_model",
    "order_candidates",
    "classify",
    "classify_exhaustive",
]


@dataclass(frozen=True, eq=False)
class TrainedModel:
    train: tuple[TimeSeries, ...]
    envelopes: tuple[Envelope, ...]
    window: WindowSpec
    bound: BoundSpec
    w_eff: int
    matrix: np.ndarray = field(repr=False)

    @property
    def length(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return len(self.train)


@dataclass
class QueryStats:
    dtw_calls: int = 0
    lb_calls: int = 0
    pruned: int = 0
    elapsed: int = 0  # nanoseconds


@dataclass(frozen=True)
class Prediction:
    label: Hashable
    nn_index: int
    nn_distance: float
    stats: QueryStats


def build_model(train: Sequence[TimeSeries], w, bound: BoundSpec | str) -> TrainedModel:
    """Validate the training set and precompute every candidate envelope."""
    train = tuple(train)
    if not train:
        raise EmptyTrainingSet("training set is empty")
    length = len(train[0])
    for idx, s in enumerate(train):
        if len(s) != length:
            raise LengthMismatch(f"training series {idx} has length {len(s)}, expected {length}")
        if s.label is None:
            raise MissingLabel(f"training series {idx} has no label")
    if isinstance(bound, str):
        bound = BoundSpec.parse(bound)
    window = as_window(w)
    w_eff = window.resolve(length)
    envelopes = tuple(compute_envelope(s, w_eff) for s in train)
    matrix = np.stack([s.values for s in train])
    matrix.setflags(write=False)
    return TrainedModel(train, envelopes, window, bound, w_eff, matrix)


def _check_query(model: TrainedModel, query: TimeSeries) -> np.ndarray:
    q = query.values if isinstance(query, TimeSeries) else TimeSeries(query).values
    if q.shape[0] != model.length:
        raise LengthMismatch(f"query length {q.shape[0]} != training length {model.length}")
    return q


def order_candidates(
    model: TrainedModel,
    query: TimeSeries,
    order: str = "euclidean",
    seed: int | None = None,
) -> np.ndarray:
    """Candidate visiting order.

    ``"euclidean"`` sorts by squared Euclidean distance to the query, ties by
    index. ``"random"`` is a seeded permutation.
    """
    q = _check_query(model, query)
    if order == "euclidean":
        dists = _kernels.sq_euclidean_rows(model.matrix, q)
        return np.argsort(dists, kind="stable")
    if order == "random":
        return np.random.default_rng(seed).permutation(len(model.train))
    raise ValueError(f"unknown candidate order {order!r}")


def classify(
    model: TrainedModel,
    query: TimeSeries,
    *,
    order: str = "euclidean",
    seed: int | None = None,
    dtw_abandon: bool = True,
    lb_abandon: bool = False,
) -> Prediction:
    """Nearest neighbour under windowed DTW, pruning with ``model.bound``.

    Candidates whose bound reaches the best-so-far squared distance are
    skipped; the rest get a full DTW (abandoned against the best-so-far when
    ``dtw_abandon``). The best is replaced only on strict improvement, so the
    answer equals :func:`classify_exhaustive` with the same visiting order.

    ``lb_abandon`` turns on running-sum aborts inside LB_Keogh-style loops.
    """
    start = time.perf_counter_ns()
    q = _check_query(model, query)
    perm = order_candidates(model, query, order, seed)
    stats = QueryStats()
    spec = model.bound
    w_eff = model.w_eff
    q_env = compute_envelope(q, w_eff) if spec.needs_query_envelope else None
    best = math.inf
    best_idx = -1
    for idx in perm:
        cand = model.matrix[idx]
        if best < math.inf:
            stats.lb_calls += 1
            lb = evaluate(
                spec, q, cand, w_eff,
                env_b=model.envelopes[idx], env_a=q_env,
                cutoff=best, running_abort=lb_abandon,
            )
            if lb.aborted:
                stats.pruned += 1
                continue
        stats.dtw_calls += 1
        value, abandoned = _kernels.dtw_sq(q, cand, w_eff, best if dtw_abandon else math.inf)
        if not abandoned and value < best:
            best = value
            best_idx = int(idx)
    stats.elapsed = time.perf_counter_ns() - start
    return Prediction(model.train[best_idx].label, best_idx, math.sqrt(best), stats)


def classify_exhaustive(
    model: TrainedModel,
    query: TimeSeries,
    *,
    order: str = "euclidean",
    seed: int | None = None,
) -> Prediction:
    """Reference 1-NN: full DTW against every candidate, no bounds, no abandoning."""
    start = time.perf_counter_ns()
    q = _check_query(model, query)
    perm = order_candidates(model, query, order, seed)
    stats = QueryStats()
    best = math.inf
    best_idx = -1
    for idx in perm:
        stats.dtw_calls += 1
        value, _ = _kernels.dtw_sq(q, model.matrix[idx], model.w_eff, math.inf)
        if value < best:
            best = value
            best_idx = int(idx)
    stats.elapsed = time.perf_counter_ns() - start
    return Prediction(model.train[best_idx].label, best_idx, math.sqrt(best), stats)
