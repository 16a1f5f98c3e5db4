"""Dataset ingestion, synthetic generators and result files."""

from __future__ import annotations

import contextlib
import csv
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import TimeSeries
from .errors import EmptyFile, InvalidSpec, MissingLabel, ParseError, RaggedLengths

__all__ = [
    "Dataset",
    "SyntheticSpec",
    "BenchRecord",
    "BENCH_COLUMNS",
    "PREDICTION_COLUMNS",
    "load_ucr",
    "write_ucr",
    "znorm",
    "generate",
    "write_results",
    "read_results",
    "write_csv",
]

BENCH_COLUMNS = (
    "dataset", "bound", "v", "window_spec", "w_eff", "queries", "dtw_calls",
    "lb_calls", "pruned", "elapsed_ns", "tightness_mean", "tightness_geomean",
)
PREDICTION_COLUMNS = (
    "query_id", "predicted_label", "true_label", "nn_index", "nn_distance",
    "dtw_calls", "pruned", "elapsed_ns",
)
GENERATORS = ("random_walk", "noisy_sine")


@dataclass(frozen=True, eq=False)
class Dataset:
    name: str
    series: tuple[TimeSeries, ...]

    def __post_init__(self):
        series = tuple(self.series)
        object.__setattr__(self, "series", series)
        if series:
            length = len(series[0])
            for s in series:
                if len(s) != length:
                    raise RaggedLengths(f"{self.name}: series {s.id} has length {len(s)}, expected {length}")
                if s.label is None:
                    raise MissingLabel(f"{self.name}: series {s.id} has no label")

    @property
    def length(self) -> int:
        return len(self.series[0]) if self.series else 0

    @property
    def classes(self) -> frozenset:
        return frozenset(s.label for s in self.series)

    def __len__(self) -> int:
        return len(self.series)

    def split(self, n_train: int) -> tuple["Dataset", "Dataset"]:
        """First ``n_train`` series for training, the rest for testing."""
        if not 0 < n_train < len(self.series):
            raise InvalidSpec(f"cannot split {len(self.series)} series at {n_train}")
        return (
            Dataset(f"{self.name}", self.series[:n_train]),
            Dataset(f"{self.name}", self.series[n_train:]),
        )


def znorm(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    std = values.std()
    if std == 0:
        return values - values.mean()
    return (values - values.mean()) / std


def _sniff_delimiter(line: str) -> str:
    if "\t" in line:
        return "\t"
    if "," in line:
        return ","
    raise ParseError("no comma or tab delimiter found", 1)


def load_ucr(path, name: str | None = None, normalize: bool = False) -> Dataset:
    """Read a UCR-style file: one series per line, label first.

    The delimiter (comma or tab) is taken from the first non-blank line.
    Labels are kept as the exact text tokens.
    """
    path = Path(path)
    text = path.read_text()
    lines = [(no, ln.strip()) for no, ln in enumerate(text.splitlines(), start=1)]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise EmptyFile(f"{path}: no records")
    delim = _sniff_delimiter(lines[0][1])
    series = []
    length = None
    for idx, (no, line) in enumerate(lines):
        tokens = [t.strip() for t in line.split(delim)]
        if len(tokens) < 2:
            raise ParseError("expected a label followed by at least one value", no)
        label, raw = tokens[0], tokens[1:]
        if not label:
            raise ParseError("empty label", no)
        try:
            values = np.array([float(t) for t in raw])
        except ValueError as exc:
            raise ParseError(f"non-numeric value ({exc})", no) from None
        if not np.isfinite(values).all():
            raise ParseError("non-finite value", no)
        if length is None:
            length = values.shape[0]
        elif values.shape[0] != length:
            raise RaggedLengths(f"{path}: line {no} has {values.shape[0]} values, expected {length}")
        if normalize:
            values = znorm(values)
        series.append(TimeSeries(values, label=label, id=idx))
    return Dataset(name or path.stem, tuple(series))


def write_ucr(dataset: Dataset, path, delimiter: str = ",") -> None:
    with open(path, "w", newline="") as fh:
        for s in dataset.series:
            fh.write(delimiter.join([str(s.label)] + [repr(float(x)) for x in s.values]))
            fh.write("\n")


@dataclass(frozen=True)
class SyntheticSpec:
    generator: str = "random_walk"
    n: int = 60
    length: int = 128
    classes: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise InvalidSpec(f"unknown generator {self.generator!r}; choose from {GENERATORS}")
        if not self.n >= self.classes >= 1:
            raise InvalidSpec(f"need n >= classes >= 1, got n={self.n}, classes={self.classes}")
        if self.length < 2:
            raise InvalidSpec(f"length must be >= 2, got {self.length}")

    @classmethod
    def parse(cls, text: str) -> "SyntheticSpec":
        """``random_walk:n=60,len=128,k=3,seed=7``"""
        gen, _, rest = text.partition(":")
        keys = {"n": "n", "len": "length", "length": "length", "k": "classes",
                "classes": "classes", "seed": "seed"}
        kwargs = {}
        for item in filter(None, (p.strip() for p in rest.split(","))):
            key, eq, value = item.partition("=")
            if not eq or key.strip() not in keys:
                raise InvalidSpec(f"bad synthetic parameter {item!r}")
            try:
                kwargs[keys[key.strip()]] = int(value)
            except ValueError:
                raise InvalidSpec(f"parameter {key} must be an integer, got {value!r}") from None
        return cls(gen.strip(), **kwargs)

    def describe(self) -> str:
        return f"{self.generator}:n={self.n},len={self.length},k={self.classes},seed={self.seed}"


def generate(spec: SyntheticSpec) -> Dataset:
    """Seeded synthetic dataset; series ``i`` belongs to class ``i % classes``.

    random_walk: cumulative sum of N(drift_c, 1) steps, class drifts spread
    evenly over [-0.25, 0.25]. noisy_sine: sin with class frequency ``c + 1``
    cycles per series, random phase, plus N(0, 0.3^2) noise.
    """
    rng = np.random.default_rng(spec.seed)
    k, n, length = spec.classes, spec.n, spec.length
    drifts = np.linspace(-0.25, 0.25, k) if k > 1 else np.zeros(1)
    t = np.arange(length) / length
    series = []
    for i in range(n):
        c = i % k
        if spec.generator == "random_walk":
            values = np.cumsum(rng.normal(drifts[c], 1.0, length))
        else:
            phase = rng.uniform(0, 2 * math.pi)
            values = np.sin(2 * math.pi * (c + 1) * t + phase) + rng.normal(0, 0.3, length)
        series.append(TimeSeries(values, label=str(c), id=i))
    return Dataset(spec.describe(), tuple(series))


@dataclass
class BenchRecord:
    dataset: str
    bound: str
    v: int | None
    window_spec: str
    w_eff: int
    queries: int
    dtw_calls: int
    lb_calls: int
    pruned: int
    elapsed_ns: int
    tightness_mean: float | None = None
    tightness_geomean: float | None = None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


@contextlib.contextmanager
def _output(path):
    if str(path) == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_results(records: Iterable[BenchRecord], path) -> None:
    """Write records as CSV with the fixed :data:`BENCH_COLUMNS` header.

    ``path="-"`` writes to stdout.
    """
    with _output(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BENCH_COLUMNS)
        for rec in records:
            row = asdict(rec)
            writer.writerow([_fmt(row[c]) for c in BENCH_COLUMNS])


def read_results(path) -> list[BenchRecord]:
    ints = {"v", "w_eff", "queries", "dtw_calls", "lb_calls", "pruned", "elapsed_ns"}
    floats = {"tightness_mean", "tightness_geomean"}
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != BENCH_COLUMNS:
            raise ParseError(f"unexpected header {reader.fieldnames}", 1)
        for row in reader:
            kwargs = {}
            for f in fields(BenchRecord):
                raw = row[f.name]
                if f.name in ints:
                    kwargs[f.name] = int(raw) if raw != "" else None
                elif f.name in floats:
                    kwargs[f.name] = float(raw) if raw != "" else None
                else:
                    kwargs[f.name] = raw
            out.append(BenchRecord(**kwargs))
    return out


def write_csv(rows: Sequence[Sequence], header: Sequence[str], path) -> None:
    with _output(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])
