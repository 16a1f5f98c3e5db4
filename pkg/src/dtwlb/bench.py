"""Desk-scale benchmark harness.

Two kinds of measurement:

* tightness: ``lb / DTW`` per pair in the root domain, no abandoning;
* 1-NN classification runs: DTW calls, bound calls, pruned candidates and
  median wall-clock over repetitions. Envelope precomputation happens in
  :func:`~dtwlb.search.build_model`, outside the timed region.

Counts are deterministic; wall-clock is not and is reported only.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .bounds import BoundSpec, evaluate
from .core import TimeSeries, as_values, as_window
from .data import BenchRecord, Dataset
from .envelope import compute_envelope
from .errors import AllPairsDegenerate, LengthMismatch
from .search import Prediction, build_model, classify

__all__ = [
    "BenchRecord",
    "Tightness",
    "Comparison",
    "geometric_mean",
    "measure_tightness",
    "run_classification",
    "sweep_v",
    "compare_bounds",
    "ratios_to",
    "geomean_ratios",
]

KEOGH = BoundSpec("keogh")
DEFAULT_BOUNDS = (
    BoundSpec("kim_sum"),
    BoundSpec("keogh"),
    BoundSpec("improved"),
    BoundSpec("new"),
    BoundSpec.enhanced(5),
)


def geometric_mean(values: Iterable[float]) -> float:
    """``exp(mean(log x))``; any zero makes the result zero."""
    values = list(values)
    if not values:
        raise ValueError("geometric mean of an empty sequence")
    if min(values) <= 0.0:
        return 0.0
    return math.exp(math.fsum(math.log(v) for v in values) / len(values))


@dataclass
class Tightness:
    mean: float
    geomean: float
    ratios: list[float]
    # per pair (index, lb distance, dtw distance); pairs with DTW == 0 are left out
    rows: list[tuple[int, float, float]] = field(default_factory=list, repr=False)


def measure_tightness(pairs: Sequence[tuple], bound: BoundSpec | str, w) -> Tightness:
    """Average ``lb(A, B) / DTW(A, B)`` over ``pairs``, with no abandoning.

    Raises :class:`AllPairsDegenerate` when every pair has DTW == 0.
    """
    if isinstance(bound, str):
        bound = BoundSpec.parse(bound)
    if not pairs:
        raise ValueError("no pairs to measure")
    window = as_window(w)
    rows = []
    for idx, (a, b) in enumerate(pairs):
        x, y = as_values(a), as_values(b)
        if x.shape[0] != y.shape[0]:
            raise LengthMismatch(f"pair {idx}: lengths {x.shape[0]} and {y.shape[0]}")
        w_eff = window.resolve(x.shape[0])
        d, _ = _kernels.dtw_sq(x, y, w_eff, math.inf)
        if d == 0.0:
            continue
        lb = evaluate(bound, x, y, w_eff)
        rows.append((idx, lb.distance, math.sqrt(d)))
    return _summarise(rows)


def _summarise(rows) -> Tightness:
    if not rows:
        raise AllPairsDegenerate("every pair has DTW distance 0")
    ratios = [lb / d for _, lb, d in rows]
    return Tightness(math.fsum(ratios) / len(ratios), geometric_mean(ratios), ratios, rows)


def _cross_tightness(model, test: Dataset, dtw_matrix: np.ndarray) -> Tightness:
    rows = []
    n_train = len(model.train)
    for qi, q in enumerate(test.series):
        q_env = compute_envelope(q, model.w_eff) if model.bound.needs_query_envelope else None
        for ci in range(n_train):
            d = dtw_matrix[qi, ci]
            if d == 0.0:
                continue
            lb = evaluate(
                model.bound, q.values, model.matrix[ci], model.w_eff,
                env_b=model.envelopes[ci], env_a=q_env,
            )
            rows.append((qi * n_train + ci, lb.distance, math.sqrt(d)))
    return _summarise(rows)


def dtw_matrix(train: Dataset, test: Dataset, w) -> np.ndarray:
    """Squared DTW between every test (rows) and train (columns) series."""
    w_eff = as_window(w).resolve(train.length)
    out = np.empty((len(test), len(train)))
    for qi, q in enumerate(test.series):
        for ci, c in enumerate(train.series):
            out[qi, ci], _ = _kernels.dtw_sq(q.values, c.values, w_eff, math.inf)
    return out


def run_classification(
    train: Dataset,
    test: Dataset,
    w,
    bound: BoundSpec | str,
    *,
    repetitions: int = 3,
    order: str = "euclidean",
    seed: int | None = None,
    dtw_abandon: bool = True,
    lb_abandon: bool = False,
    tightness: bool = False,
    dtw_sq: np.ndarray | None = None,
) -> tuple[BenchRecord, list[Prediction]]:
    """Classify every test series; report counts and the median elapsed time.

    With ``tightness=True`` the mean/geomean tightness over all test x train
    pairs is attached (``dtw_sq`` may supply the precomputed DTW matrix).
    """
    if isinstance(bound, str):
        bound = BoundSpec.parse(bound)
    if train.length != test.length:
        raise LengthMismatch(f"train length {train.length} != test length {test.length}")
    model = build_model(train.series, w, bound)
    # first call compiles the kernels; keep it out of the timings
    classify(model, test.series[0], order=order, seed=seed)
    timings = []
    predictions: list[Prediction] = []
    for _ in range(max(1, repetitions)):
        predictions = [
            classify(model, q, order=order, seed=seed, dtw_abandon=dtw_abandon, lb_abandon=lb_abandon)
            for q in test.series
        ]
        timings.append(sum(p.stats.elapsed for p in predictions))
    record = BenchRecord(
        dataset=train.name,
        bound=bound.describe() + ("" if dtw_abandon else "+fulldtw"),
        v=bound.v,
        window_spec=model.window.describe(),
        w_eff=model.w_eff,
        queries=len(test),
        dtw_calls=sum(p.stats.dtw_calls for p in predictions),
        lb_calls=sum(p.stats.lb_calls for p in predictions),
        pruned=sum(p.stats.pruned for p in predictions),
        elapsed_ns=int(statistics.median(timings)),
    )
    if tightness:
        if dtw_sq is None:
            dtw_sq = dtw_matrix(train, test, model.w_eff)
        t = _cross_tightness(model, test, dtw_sq)
        record.tightness_mean, record.tightness_geomean = t.mean, t.geomean
    return record, predictions


def sweep_v(
    train: Dataset,
    test: Dataset,
    w,
    v_values: Sequence[int],
    *,
    repetitions: int = 3,
    dtw_abandon: bool = True,
    tightness: bool = True,
) -> list[BenchRecord]:
    """LB_Keogh baseline followed by one record per ``enhanced:v``."""
    dtw_sq = dtw_matrix(train, test, w) if tightness else None
    specs = [KEOGH] + [BoundSpec.enhanced(v) for v in v_values]
    return [
        run_classification(
            train, test, w, spec, repetitions=repetitions,
            dtw_abandon=dtw_abandon, tightness=tightness, dtw_sq=dtw_sq,
        )[0]
        for spec in specs
    ]


def ratios_to(records: Sequence[BenchRecord], reference: str) -> dict[str, tuple[float, float]]:
    """Per bound, ``(elapsed / reference elapsed, dtw_calls / reference dtw_calls)``."""
    ref = next((r for r in records if r.bound == reference), None)
    if ref is None:
        raise KeyError(f"reference bound {reference!r} not among the records")
    out = {}
    for r in records:
        t = r.elapsed_ns / ref.elapsed_ns if ref.elapsed_ns else math.nan
        c = r.dtw_calls / ref.dtw_calls if ref.dtw_calls else math.nan
        out[r.bound] = (t, c)
    return out


def geomean_ratios(per_dataset: Sequence[dict[str, tuple[float, float]]]) -> dict[str, tuple[float, float]]:
    """Geometric mean over datasets of the ratios produced by :func:`ratios_to`."""
    bounds = sorted({b for d in per_dataset for b in d})
    out = {}
    for b in bounds:
        vals = [d[b] for d in per_dataset if b in d]
        out[b] = (geometric_mean(v[0] for v in vals), geometric_mean(v[1] for v in vals))
    return out


def _rank(values: dict[str, float]) -> dict[str, float]:
    # competition-style average ranks, 1 = smallest
    ordered = sorted(values.items(), key=lambda kv: kv[1])
    ranks = {}
    i = 0
    while i < len(ordered):
        j = i
        while j + 1 < len(ordered) and ordered[j + 1][1] == ordered[i][1]:
            j += 1
        for k in range(i, j + 1):
            ranks[ordered[k][0]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


@dataclass
class Comparison:
    records: list[BenchRecord]
    rank_by_time: dict[str, float]
    rank_by_dtw_calls: dict[str, float]
    time_ratio_to_reference: dict[str, float]
    reference: str | None


def compare_bounds(
    train: Dataset,
    test: Dataset,
    w,
    bounds: Sequence[BoundSpec | str] = DEFAULT_BOUNDS,
    *,
    repetitions: int = 3,
    dtw_abandon: bool = True,
    tightness: bool = True,
    reference: str = "enhanced:5",
) -> Comparison:
    """One classification record per bound plus rankings (1 = fastest).

    ``time_ratio_to_reference`` divides each bound's median elapsed time by
    the reference bound's, when the reference is among ``bounds``.
    """
    specs = [BoundSpec.parse(b) if isinstance(b, str) else b for b in bounds]
    dtw_sq = dtw_matrix(train, test, w) if tightness else None
    records = [
        run_classification(
            train, test, w, s, repetitions=repetitions,
            dtw_abandon=dtw_abandon, tightness=tightness, dtw_sq=dtw_sq,
        )[0]
        for s in specs
    ]
    by_time = _rank({r.bound: r.elapsed_ns for r in records})
    by_calls = _rank({r.bound: r.dtw_calls for r in records})
    ref_name = reference + ("" if dtw_abandon else "+fulldtw")
    if any(r.bound == ref_name for r in records):
        ratios = {b: t for b, (t, _) in ratios_to(records, ref_name).items()}
    else:
        ratios, ref_name = {}, None
    return Comparison(records, by_time, by_calls, ratios, ref_name)
