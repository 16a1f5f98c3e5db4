"""Windowed DTW, its lower bounds, and lower-bound pruned 1-NN search."""

from .bounds import (
    BoundResult,
    BoundSpec,
    band_min_left,
    band_min_right,
    cascade_eval,
    evaluate,
    lb_enhanced,
    lb_enhanced_oracle,
    lb_improved,
    lb_keogh,
    lb_kim_sum,
    lb_new,
    lb_symmetric_max,
    lb_yi,
)
from .core import DtwResult, TimeSeries, WindowSpec, dtw, dtw_oracle, point_cost, squared_euclidean
from .data import BenchRecord, Dataset, SyntheticSpec, generate, load_ucr, write_results
from .envelope import Envelope, compute_envelope, envelope_oracle
from .search import Prediction, QueryStats, TrainedModel, build_model, classify, classify_exhaustive, order_candidates

__version__ = "0.1.0"
