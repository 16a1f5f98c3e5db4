"""Upper and lower warping envelopes of a series."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import SeriesLike, as_values, as_window

__all__ = ["Envelope", "compute_envelope", "envelope_oracle"]


@dataclass(frozen=True, eq=False)
class Envelope:
    """Running max (``upper``) and min (``lower``) of a series over ``[i-w, i+w]``."""

    upper: np.ndarray
    lower: np.ndarray
    window: int

    def __post_init__(self):
        if self.upper.shape != self.lower.shape:
            raise ValueError("upper and lower envelopes must have the same length")
        self.upper.setflags(write=False)
        self.lower.setflags(write=False)

    def __len__(self) -> int:
        return self.upper.shape[0]


def compute_envelope(b: SeriesLike, w) -> Envelope:
    """Envelope of ``b`` in O(L) regardless of the window width."""
    values = as_values(b)
    w_eff = as_window(w).resolve(values.shape[0])
    upper, lower = _kernels.envelope(values, w_eff)
    return Envelope(upper, lower, w_eff)


def envelope_oracle(b: SeriesLike, w) -> Envelope:
    # plain per-position scan, O(L * w); test reference only
    values = as_values(b).tolist()
    n = len(values)
    w_eff = as_window(w).resolve(n)
    upper, lower = [], []
    for i in range(n):
        chunk = values[max(0, i - w_eff): min(n, i + w_eff + 1)]
        upper.append(max(chunk))
        lower.append(min(chunk))
    return Envelope(np.array(upper), np.array(lower), w_eff)
