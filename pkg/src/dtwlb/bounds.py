"""Lower bounds on windowed DTW.

Every bound here takes the query ``a`` and the candidate ``b`` and returns a
:class:`BoundResult` in the squared domain that never exceeds
``dtw(a, b, w).squared``. Bounds that accept a ``cutoff`` may stop early once
their running value reaches it; the partial value is then returned with
``aborted=True`` and is itself ``>= cutoff``.

``lb_enhanced`` is the left/right band bound: exact minima over the first and
last ``v`` L-shaped bands of the cost matrix, joined by an LB_Keogh bridge
over the middle columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .core import SeriesLike, _cutoff, _pair, as_values, as_window, point_cost
from .envelope import Envelope, compute_envelope, envelope_oracle
from .errors import (
    EnvelopeWindowMismatch,
    IndexOutOfRange,
    InvalidBound,
    InvalidV,
    LengthMismatch,
    TooLong,
    TooShort,
)

__all__ = [
    "BoundSpec",
    "BoundResult",
    "BOUND_KINDS",
    "lb_kim_sum",
    "lb_yi",
    "lb_keogh",
    "lb_improved",
    "lb_new",
    "band_min_left",
    "band_min_right",
    "lb_enhanced",
    "lb_enhanced_oracle",
    "lb_symmetric_max",
    "cascade_eval",
    "evaluate",
]

BOUND_KINDS = ("kim_sum", "yi", "keogh", "improved", "new", "enhanced")
_ALIASES = {"kim": "kim_sum", "kim_sum": "kim_sum", "kimsum": "kim_sum"}
_SHORT_NAMES = {"kim_sum": "kim"}
ENHANCED_ORACLE_MAX_LENGTH = 64


@dataclass(frozen=True)
class BoundResult:
    squared: float
    aborted: bool = False

    @property
    def distance(self) -> float:
        return math.sqrt(self.squared)


@dataclass(frozen=True)
class BoundSpec:
    """Which bound to evaluate.

    ``kind`` is one of :data:`BOUND_KINDS` or ``"cascade"``; ``v`` is the band
    count of ``enhanced``; ``members`` lists the bounds of a cascade, cheapest
    first. ``symmetric`` evaluates the bound in both directions and keeps the
    larger value.
    """

    kind: str
    v: int | None = None
    members: tuple["BoundSpec", ...] = ()
    symmetric: bool = False

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        if kind == "cascade":
            if not self.members:
                raise InvalidBound("a cascade needs at least one member")
            object.__setattr__(self, "members", tuple(self.members))
            for m in self.members:
                if m.kind == "cascade":
                    raise InvalidBound("cascades cannot be nested")
        elif kind not in BOUND_KINDS:
            raise InvalidBound(f"unknown bound kind {self.kind!r}")
        elif self.members:
            raise InvalidBound(f"{kind} does not take cascade members")
        if kind == "enhanced":
            if self.v is None or isinstance(self.v, bool) or int(self.v) != self.v or self.v < 1:
                raise InvalidV(f"enhanced requires an integer v >= 1, got {self.v!r}")
            object.__setattr__(self, "v", int(self.v))
        elif self.v is not None:
            raise InvalidBound(f"only enhanced takes a v parameter (got v={self.v} for {kind})")

    @classmethod
    def enhanced(cls, v: int) -> "BoundSpec":
        return cls("enhanced", v=v)

    @classmethod
    def cascade(cls, members: Iterable["BoundSpec"]) -> "BoundSpec":
        return cls("cascade", members=tuple(members))

    @classmethod
    def parse(cls, text: str, default_v: int = 5) -> "BoundSpec":
        """Parse ``kim|yi|keogh|improved|new|enhanced[:V]|cascade:a,b,...``.

        A ``sym:`` prefix requests the symmetric (max of both directions) form.
        """
        text = text.strip()
        symmetric = False
        if text.startswith("sym:"):
            symmetric, text = True, text[4:]
        if text.startswith("cascade:"):
            parts = [p for p in text[len("cascade:"):].split(",") if p.strip()]
            members = tuple(cls._parse_single(p, default_v) for p in parts)
            return cls("cascade", members=members, symmetric=symmetric)
        spec = cls._parse_single(text, default_v)
        return cls(spec.kind, v=spec.v, symmetric=symmetric) if symmetric else spec

    @classmethod
    def _parse_single(cls, text: str, default_v: int) -> "BoundSpec":
        name, _, arg = text.strip().partition(":")
        kind = _ALIASES.get(name, name)
        if kind == "enhanced":
            if arg:
                try:
                    v = int(arg)
                except ValueError:
                    raise InvalidBound(f"bad V in {text!r}") from None
            else:
                v = default_v
            return cls.enhanced(v)
        if arg:
            raise InvalidBound(f"{name} takes no parameter ({text!r})")
        return cls(kind)

    def describe(self) -> str:
        if self.kind == "cascade":
            body = "cascade:" + ",".join(m.describe() for m in self.members)
        elif self.kind == "enhanced":
            body = f"enhanced:{self.v}"
        else:
            body = _SHORT_NAMES.get(self.kind, self.kind)
        return "sym:" + body if self.symmetric else body

    def __str__(self) -> str:
        return self.describe()

    @property
    def needs_query_envelope(self) -> bool:
        if self.kind == "cascade":
            return self.symmetric or any(m.needs_query_envelope for m in self.members)
        return self.symmetric and self.kind in ("keogh", "improved", "enhanced")


# ---------------------------------------------------------------------------
# argument plumbing


def _check_envelope(env: Envelope, n: int, w_eff: int | None) -> None:
    if len(env) != n:
        raise LengthMismatch(f"envelope length {len(env)} != series length {n}")
    if w_eff is not None and env.window != w_eff:
        raise EnvelopeWindowMismatch(
            f"envelope was computed for w={env.window}, bound queried at w={w_eff}"
        )


def _resolve(w, n: int) -> int:
    return n - 1 if w is None else as_window(w).resolve(n)


def _result(pair) -> BoundResult:
    value, aborted = pair
    return BoundResult(float(value), bool(aborted))


# ---------------------------------------------------------------------------
# window-independent bounds


def lb_kim_sum(a: SeriesLike, b: SeriesLike) -> BoundResult:
    """Sum of the first, last, minimum and maximum point features.

    A feature is skipped when its index in either series was already used by
    an earlier feature (order: first, last, min, max). Ties in argmin/argmax
    go to the lowest index.
    """
    x, y = _pair(a, b)
    n = x.shape[0]
    if n < 2:
        raise TooShort("lb_kim_sum needs series of length >= 2")
    total = point_cost(x[0], y[0]) + point_cost(x[-1], y[-1])
    used_a, used_b = {0, n - 1}, {0, n - 1}
    for ia, ib in ((int(np.argmin(x)), int(np.argmin(y))), (int(np.argmax(x)), int(np.argmax(y)))):
        if ia in used_a or ib in used_b:
            continue
        total += point_cost(x[ia], y[ib])
        used_a.add(ia)
        used_b.add(ib)
    return BoundResult(float(total))


def lb_yi(a: SeriesLike, b: SeriesLike) -> BoundResult:
    x, y = _pair(a, b)
    return BoundResult(float(_kernels.yi(x, y)))


# ---------------------------------------------------------------------------
# envelope bounds


def lb_keogh(a: SeriesLike, env_b: Envelope, cutoff: float | None = None) -> BoundResult:
    """Sum of squared distances from ``a`` to the envelope of the candidate."""
    x = as_values(a)
    _check_envelope(env_b, x.shape[0], None)
    return _result(_kernels.keogh(x, env_b.upper, env_b.lower, 0.0, _cutoff(cutoff)))


def lb_improved(
    a: SeriesLike,
    b: SeriesLike,
    env_b: Envelope | None = None,
    w=None,
    cutoff: float | None = None,
) -> BoundResult:
    """LB_Keogh(a, b) plus LB_Keogh(b, a') where a' is a projected onto b's envelope.

    The second pass is skipped (``aborted=True``) when the first already
    reaches ``cutoff``.
    """
    x, y = _pair(a, b)
    n = x.shape[0]
    if env_b is None:
        env_b = compute_envelope(y, _resolve(w, n))
    _check_envelope(env_b, n, None if w is None else _resolve(w, n))
    return _improved(x, y, env_b, _cutoff(cutoff), True)


def _improved(x, y, env_b: Envelope, cutoff: float, running: bool) -> BoundResult:
    first, aborted = _kernels.keogh(x, env_b.upper, env_b.lower, 0.0, cutoff if running else math.inf)
    if aborted or first >= cutoff:
        return BoundResult(float(first), True)
    proj = _kernels.projection(x, env_b.upper, env_b.lower)
    up, lo = _kernels.envelope(proj, env_b.window)
    return _result(_kernels.keogh(y, up, lo, first, cutoff if running else math.inf))


def lb_new(a: SeriesLike, b: SeriesLike, w=None, cutoff: float | None = None) -> BoundResult:
    """Exact end points plus, per inner column, the closest in-window point of ``b``."""
    x, y = _pair(a, b)
    n = x.shape[0]
    if n < 2:
        raise TooShort("lb_new needs series of length >= 2")
    return _result(_kernels.lb_new(x, y, _resolve(w, n), _cutoff(cutoff)))


# ---------------------------------------------------------------------------
# left/right bands


def _left_band_cells(i: int, w_eff: int) -> set[tuple[int, int]]:
    lo = max(1, i - w_eff)
    return {(j, i) for j in range(lo, i + 1)} | {(i, k) for k in range(lo, i)}


def _right_band_cells(i: int, w_eff: int, n: int) -> set[tuple[int, int]]:
    hi = min(n, i + w_eff)
    return {(j, i) for j in range(i, hi + 1)} | {(i, k) for k in range(i + 1, hi + 1)}


def _band_min(x, y, cells) -> float:
    # cells are 1-based (index into a, index into b)
    return min(point_cost(x[j - 1], y[k - 1]) for j, k in cells)


def band_min_left(a: SeriesLike, b: SeriesLike, i: int, w=None) -> float:
    """Minimum cost over the i-th left band (1-based ``i``).

    The band holds the cells whose larger index equals ``i`` and whose
    smaller index is within the window of ``i``: column ``i`` above the
    diagonal, row ``i`` left of it. Every warping path crosses it.
    """
    x, y = _pair(a, b)
    n = x.shape[0]
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"band index must be in [1, {n}], got {i}")
    return _band_min(x, y, _left_band_cells(i, _resolve(w, n)))


def band_min_right(a: SeriesLike, b: SeriesLike, i: int, w=None) -> float:
    """Minimum cost over the i-th right band, the mirror image anchored at (L, L)."""
    x, y = _pair(a, b)
    n = x.shape[0]
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"band index must be in [1, {n}], got {i}")
    return _band_min(x, y, _right_band_cells(i, _resolve(w, n), n))


def lb_enhanced(
    a: SeriesLike,
    b: SeriesLike,
    env_b: Envelope | None = None,
    w=None,
    v: int = 5,
    cutoff: float | None = None,
) -> BoundResult:
    """Left/right band bound with tightness parameter ``v``.

    Uses ``min(L // 2, v)`` bands from each end. If the band minima alone
    reach ``cutoff`` the Keogh bridge is skipped and the band sum is returned
    with ``aborted=True``.
    """
    if isinstance(v, bool) or int(v) != v or v < 1:
        raise InvalidV(f"v must be an integer >= 1, got {v!r}")
    x, y = _pair(a, b)
    n = x.shape[0]
    if env_b is None:
        env_b = compute_envelope(y, _resolve(w, n))
        w_eff = env_b.window
    else:
        w_eff = env_b.window if w is None else _resolve(w, n)
        _check_envelope(env_b, n, w_eff)
    return _result(
        _kernels.lb_enhanced(x, y, env_b.upper, env_b.lower, w_eff, int(v), _cutoff(cutoff))
    )


def lb_enhanced_oracle(a: SeriesLike, b: SeriesLike, w=None, v: int = 5) -> float:
    """Column-by-column evaluation from explicitly built band sets (L <= 64)."""
    if isinstance(v, bool) or int(v) != v or v < 1:
        raise InvalidV(f"v must be an integer >= 1, got {v!r}")
    x, y = _pair(a, b)
    n = x.shape[0]
    if n > ENHANCED_ORACLE_MAX_LENGTH:
        raise TooLong(f"oracle supports L <= {ENHANCED_ORACLE_MAX_LENGTH}, got {n}")
    w_eff = _resolve(w, n)
    bands = min(n // 2, int(v))
    env = envelope_oracle(y, w_eff)
    total = 0.0
    for i in range(1, n + 1):
        if i <= bands:
            term = _band_min(x, y, _left_band_cells(i, w_eff))
        elif i > n - bands:
            term = _band_min(x, y, _right_band_cells(i, w_eff, n))
        elif x[i - 1] > env.upper[i - 1]:
            term = point_cost(x[i - 1], env.upper[i - 1])
        elif x[i - 1] < env.lower[i - 1]:
            term = point_cost(x[i - 1], env.lower[i - 1])
        else:
            term = 0.0
        total += term
    return float(total)


# ---------------------------------------------------------------------------
# composition


def _single(spec: BoundSpec, x, y, w_eff: int, env_y, cutoff: float, running: bool) -> BoundResult:
    kind = spec.kind
    cut = cutoff if running else math.inf
    if kind == "kim_sum":
        return lb_kim_sum(x, y)
    if kind == "yi":
        return BoundResult(float(_kernels.yi(x, y)))
    if kind == "new":
        return _result(_kernels.lb_new(x, y, w_eff, cut))
    if env_y is None:
        env_y = compute_envelope(y, w_eff)
    if kind == "keogh":
        return _result(_kernels.keogh(x, env_y.upper, env_y.lower, 0.0, cut))
    if kind == "improved":
        return _improved(x, y, env_y, cutoff, running)
    # enhanced: the post-band abort is part of the algorithm, always active
    return _result(_kernels.lb_enhanced(x, y, env_y.upper, env_y.lower, w_eff, spec.v, cutoff))


def _directed(spec, x, y, w_eff, env_y, cutoff, running) -> BoundResult:
    if spec.kind != "cascade":
        res = _single(spec, x, y, w_eff, env_y, cutoff, running)
        if not res.aborted and res.squared >= cutoff:
            return BoundResult(res.squared, True)
        return res
    best = 0.0
    for member in spec.members:
        res = _single(member, x, y, w_eff, env_y, cutoff, running)
        if res.aborted or res.squared >= cutoff:
            return BoundResult(res.squared, True)
        best = max(best, res.squared)
    return BoundResult(best)


def evaluate(
    spec: BoundSpec,
    a: SeriesLike,
    b: SeriesLike,
    w=None,
    *,
    env_b: Envelope | None = None,
    env_a: Envelope | None = None,
    cutoff: float | None = None,
    running_abort: bool = True,
) -> BoundResult:
    """Evaluate any :class:`BoundSpec` for query ``a`` against candidate ``b``.

    Missing envelopes are computed on the fly. ``aborted`` is set whenever the
    returned value reaches ``cutoff``. With ``running_abort=False`` the
    running-sum aborts inside LB_Keogh-style loops are disabled; the checks
    that belong to the algorithms themselves (after LB_Improved's first pass,
    after LB_Enhanced's bands) stay on.
    """
    x, y = _pair(a, b)
    n = x.shape[0]
    if env_b is not None:
        w_eff = env_b.window if w is None else _resolve(w, n)
        _check_envelope(env_b, n, w_eff)
    else:
        w_eff = _resolve(w, n)
    if env_a is not None:
        _check_envelope(env_a, n, w_eff)
    cut = _cutoff(cutoff)
    first = _directed(spec, x, y, w_eff, env_b, cut, running_abort)
    if not spec.symmetric or first.aborted:
        return first
    second = _directed(spec, y, x, w_eff, env_a, cut, running_abort)
    if second.aborted:
        return second
    return BoundResult(max(first.squared, second.squared))


def lb_symmetric_max(
    spec: BoundSpec,
    a: SeriesLike,
    b: SeriesLike,
    env_a: Envelope | None = None,
    env_b: Envelope | None = None,
    w=None,
    cutoff: float | None = None,
) -> BoundResult:
    """``max(bound(a, b), bound(b, a))``; each direction is admissible, so is the max."""
    sym = spec if spec.symmetric else BoundSpec(spec.kind, spec.v, spec.members, True)
    return evaluate(sym, a, b, w, env_b=env_b, env_a=env_a, cutoff=cutoff)


def cascade_eval(
    specs: Sequence[BoundSpec],
    a: SeriesLike,
    b: SeriesLike,
    envelopes: tuple[Envelope | None, Envelope | None] | Envelope | None = None,
    w=None,
    cutoff: float | None = None,
) -> BoundResult:
    """Evaluate ``specs`` in order and stop at the first one reaching ``cutoff``.

    ``envelopes`` is the candidate envelope, or a ``(query_env, candidate_env)``
    pair. Without an abort the largest member value is returned.
    """
    if isinstance(envelopes, Envelope) or envelopes is None:
        env_a, env_b = None, envelopes
    else:
        env_a, env_b = envelopes
    return evaluate(BoundSpec.cascade(specs), a, b, w, env_b=env_b, env_a=env_a, cutoff=cutoff)
