"""Series and window model, the point cost, and windowed DTW.

Everything is computed in the squared domain: ``point_cost`` is the squared
difference, DTW accumulates squared costs, and the square root is taken only
when a distance is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence, Union

import numpy as np

from . import _kernels
from .errors import EmptySeries, InvalidWindow, LengthMismatch, NonFiniteValue, TooLong

__all__ = [
    "TimeSeries",
    "WindowSpec",
    "DtwResult",
    "as_values",
    "as_window",
    "point_cost",
    "dtw",
    "dtw_oracle",
    "squared_euclidean",
]

ORACLE_MAX_LENGTH = 12


def _checked_array(values) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d series, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptySeries("series must contain at least one value")
    if not np.isfinite(arr).all():
        raise NonFiniteValue("series contains NaN or infinite values")
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A univariate series with an optional class label and source index."""

    values: np.ndarray
    label: Hashable | None = None
    id: int | None = None

    def __post_init__(self):
        arr = _checked_array(self.values)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.shape[0]

    def __repr__(self) -> str:
        return f"TimeSeries(len={len(self)}, label={self.label!r}, id={self.id!r})"


SeriesLike = Union[TimeSeries, Sequence[float], np.ndarray]


def as_values(series: SeriesLike) -> np.ndarray:
    """Return the float64 values of a TimeSeries or an array-like."""
    if isinstance(series, TimeSeries):
        return series.values
    return _checked_array(series)


@dataclass(frozen=True)
class WindowSpec:
    """Warping window, either an absolute width or a fraction of the length.

    Fractions resolve to ``ceil(f * L)``; both kinds are clamped to ``L - 1``,
    where the window no longer constrains anything.
    """

    kind: str
    width: int | None = None
    fraction: float | None = None

    @classmethod
    def absolute(cls, w: int) -> "WindowSpec":
        if isinstance(w, bool) or int(w) != w or w < 0:
            raise InvalidWindow(f"absolute window must be a nonnegative integer, got {w!r}")
        return cls("absolute", width=int(w))

    @classmethod
    def fractional(cls, f: float) -> "WindowSpec":
        f = float(f)
        if not 0.0 <= f <= 1.0:
            raise InvalidWindow(f"window fraction must lie in [0, 1], got {f}")
        return cls("fractional", fraction=f)

    def resolve(self, length: int) -> int:
        if length < 1:
            raise EmptySeries("cannot resolve a window against an empty series")
        if self.kind == "absolute":
            w = self.width
        else:
            w = math.ceil(self.fraction * length)
        return min(length - 1, w)

    def describe(self) -> str:
        if self.kind == "absolute":
            return str(self.width)
        return repr(self.fraction)


def as_window(w) -> WindowSpec:
    """Coerce ``w``: ints are absolute widths, floats are fractions of L."""
    if isinstance(w, WindowSpec):
        return w
    if isinstance(w, (bool, np.bool_)):
        raise InvalidWindow("a boolean is not a window")
    if isinstance(w, (int, np.integer)):
        return WindowSpec.absolute(int(w))
    if isinstance(w, (float, np.floating)):
        return WindowSpec.fractional(float(w))
    raise InvalidWindow(f"cannot interpret {w!r} as a warping window")


@dataclass(frozen=True)
class DtwResult:
    distance: float
    squared: float
    abandoned: bool = False


def point_cost(a: float, b: float) -> float:
    d = a - b
    return d * d


def _pair(a: SeriesLike, b: SeriesLike) -> tuple[np.ndarray, np.ndarray]:
    x, y = as_values(a), as_values(b)
    if x.shape[0] != y.shape[0]:
        raise LengthMismatch(f"series lengths differ: {x.shape[0]} != {y.shape[0]}")
    return x, y


def _cutoff(cutoff: float | None) -> float:
    if cutoff is None:
        return math.inf
    if cutoff < 0 or math.isnan(cutoff):
        raise ValueError(f"cutoff must be a nonnegative number, got {cutoff}")
    return float(cutoff)


def dtw(a: SeriesLike, b: SeriesLike, w=None, cutoff: float | None = None) -> DtwResult:
    """DTW restricted to the band ``|i - j| <= w_eff``.

    ``w=None`` means unconstrained. ``cutoff`` is in the squared domain; if
    every in-window cell of some row exceeds it the computation is abandoned
    and ``squared`` holds that row's minimum, which is ``>= cutoff``.
    """
    x, y = _pair(a, b)
    n = x.shape[0]
    w_eff = n - 1 if w is None else as_window(w).resolve(n)
    sq, abandoned = _kernels.dtw_sq(x, y, w_eff, _cutoff(cutoff))
    return DtwResult(math.sqrt(sq), sq, bool(abandoned))


def dtw_oracle(a: SeriesLike, b: SeriesLike, w=None) -> DtwResult:
    """Minimum cost over explicitly enumerated warping paths.

    Paths start at (0, 0), step right, down or diagonally, stay inside the
    band and end at (L-1, L-1). Costs are added along the path in order, so
    the result is bit-identical to the dynamic program.

    Two cuts keep the enumeration tractable without changing the minimum,
    both relying on costs being nonnegative and float addition monotone:

    * a prefix whose cost plus the cheapest in-band cell of every row (or
      column) still to be entered reaches the best complete path;
    * a prefix arriving at a cell no cheaper than an earlier prefix that
      reached the same cell (both have the same continuations).
    """
    x, y = _pair(a, b)
    n = x.shape[0]
    if n > ORACLE_MAX_LENGTH:
        raise TooLong(f"enumeration oracle supports L <= {ORACLE_MAX_LENGTH}, got {n}")
    w_eff = n - 1 if w is None else as_window(w).resolve(n)
    xs, ys = x.tolist(), y.tolist()
    last = n - 1
    band = [range(max(0, i - w_eff), min(last, i + w_eff) + 1) for i in range(n)]
    row_min = [min(point_cost(xs[i], ys[j]) for j in band[i]) for i in range(n)]
    col_min = [min(point_cost(xs[i], ys[j]) for i in band[j]) for j in range(n)]
    best = math.inf
    reached: dict[tuple[int, int], float] = {}

    def walk(i: int, j: int, acc: float) -> None:
        nonlocal best
        acc = acc + point_cost(xs[i], ys[j])
        if reached.get((i, j), math.inf) <= acc:
            return
        reached[(i, j)] = acc
        if i == last and j == last:
            if acc < best:
                best = acc
            return
        rows = cols = acc
        for r in range(i + 1, n):
            rows = rows + row_min[r]
        for c in range(j + 1, n):
            cols = cols + col_min[c]
        if rows >= best or cols >= best:
            return
        for di, dj in ((1, 1), (1, 0), (0, 1)):
            ni, nj = i + di, j + dj
            if ni <= last and nj <= last and abs(ni - nj) <= w_eff:
                walk(ni, nj, acc)

    walk(0, 0, 0.0)
    return DtwResult(math.sqrt(best), best, False)


def squared_euclidean(a: SeriesLike, b: SeriesLike, cutoff: float | None = None) -> float:
    """Sum of squared differences; stops early once the sum exceeds ``cutoff``."""
    x, y = _pair(a, b)
    return float(_kernels.sq_euclidean(x, y, _cutoff(cutoff)))
