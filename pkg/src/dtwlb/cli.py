"""Command line front end: ``dtwlb {classify,tightness,sweep-v,compare}``.

Exit codes: 0 success, 1 data error (unreadable or malformed input), 2 usage
error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import bench
from .bounds import BoundSpec
from .core import WindowSpec
from .data import (
    PREDICTION_COLUMNS,
    Dataset,
    SyntheticSpec,
    generate,
    load_ucr,
    write_csv,
    write_results,
)
from .errors import DTWLBError, InvalidBound, InvalidSpec, InvalidV, InvalidWindow
from .search import build_model, classify

log = logging.getLogger("dtwlb")

DEFAULT_COMPARE = "kim,keogh,improved,new,enhanced:5"
DEFAULT_TIGHTNESS = "kim,yi,keogh,improved,new,enhanced:1,enhanced:2,enhanced:5"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument types


def parse_window(text: str) -> WindowSpec:
    """``5`` is an absolute width, ``0.1`` / ``1.0`` a fraction of the length."""
    text = text.strip()
    try:
        if any(ch in text for ch in ".eE"):
            return WindowSpec.fractional(float(text))
        return WindowSpec.absolute(int(text))
    except (ValueError, InvalidWindow) as exc:
        raise argparse.ArgumentTypeError(f"invalid window {text!r}: {exc}") from None


def parse_v_values(text: str) -> list[int]:
    """``1..20`` or ``1,2,5`` (ranges may be mixed in: ``1..3,5``)."""
    out = []
    try:
        for part in filter(None, (p.strip() for p in text.split(","))):
            if ".." in part:
                lo, hi = (int(x) for x in part.split("..", 1))
                if hi < lo:
                    raise ValueError(f"empty range {part}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid V list {text!r}: {exc}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError(f"V values must be integers >= 1, got {text!r}")
    return out


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def _synthetic(text: str) -> SyntheticSpec:
    try:
        return SyntheticSpec.parse(text)
    except InvalidSpec as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _bound(text: str, v: int) -> BoundSpec:
    try:
        return BoundSpec.parse(text, default_v=v)
    except (InvalidBound, InvalidV) as exc:
        raise UsageError(f"invalid bound {text!r}: {exc}") from None


def _bound_list(values: list[str] | None, default: str, v: int) -> list[BoundSpec]:
    if not values:
        return [_bound(t, v) for t in default.split(",")]
    return [_bound(t, v) for t in values]


# ---------------------------------------------------------------------------
# parser


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter):
    def _get_help_string(self, action):
        text = action.help or ""
        if "default" in text or action.default is argparse.SUPPRESS:
            return text
        if action.default is None:
            return text + " (default: unset)"
        return super()._get_help_string(action)


def build_parser() -> argparse.ArgumentParser:
    fmt = _HelpFormatter
    parser = argparse.ArgumentParser(
        prog="dtwlb",
        description="Windowed DTW lower bounds and pruning 1-NN classification.",
        formatter_class=fmt,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def common(p, *, multi_window: bool, v_option: bool = True):
        src = p.add_argument_group("data")
        src.add_argument("--train", type=Path, default=None, help="UCR-format training file")
        src.add_argument("--test", type=Path, default=None, help="UCR-format test file")
        src.add_argument(
            "--synthetic", type=_synthetic, default=None,
            help="generator spec instead of files, e.g. random_walk:n=60,len=128,k=3,seed=7",
        )
        src.add_argument(
            "--test-fraction", type=float, default=1 / 3,
            help="share of a synthetic dataset held out as queries (the last series)",
        )
        src.add_argument("--znorm", action="store_true", help="z-normalise every series on load")
        if multi_window:
            p.add_argument(
                "--window", type=parse_window, action="append", default=None,
                help="warping window, absolute (5) or fraction of L (0.1); repeatable (default: 0.1)",
            )
        else:
            p.add_argument(
                "--window", type=parse_window, default=WindowSpec.fractional(0.1),
                help="warping window, absolute (5) or fraction of L (0.1)",
            )
        if v_option:
            p.add_argument("--v", type=_positive_int, default=5, help="V for enhanced when the bound has no :V")
        p.add_argument("--output", "-o", default="-", help="output CSV path ('-' for stdout)")

    def timing(p):
        p.add_argument("--repetitions", type=_positive_int, default=3, help="timed repetitions (median reported)")
        p.add_argument(
            "--dtw-abandon", choices=("on", "off", "both"), default="both",
            help="early abandoning inside DTW; 'both' reports each configuration",
        )

    p = sub.add_parser("classify", help="1-NN DTW classification with lower-bound pruning", formatter_class=fmt)
    common(p, multi_window=False)
    p.add_argument("--bound", default="enhanced", help="kim|yi|keogh|improved|new|enhanced[:V]|cascade:a,b,..; sym: prefix for max of both directions")
    p.add_argument("--order", choices=("euclidean", "random"), default="euclidean", help="candidate visiting order")
    p.add_argument("--seed", type=int, default=0, help="seed for --order random")
    p.add_argument("--dtw-abandon", choices=("on", "off"), default="on", help="early abandoning inside DTW")
    p.add_argument("--lb-abandon", action="store_true", help="running-sum aborts inside LB_Keogh-style loops")
    p.add_argument("--jobs", type=_positive_int, default=1, help="worker threads across queries")

    p = sub.add_parser("tightness", help="lb/DTW tightness of bounds over series pairs", formatter_class=fmt)
    common(p, multi_window=True)
    p.add_argument("--pairs", type=Path, default=None, help="UCR-format file; rows 2k and 2k+1 form a pair")
    p.add_argument("--bound", action="append", default=None, help=f"bound to measure; repeatable (default: {DEFAULT_TIGHTNESS})")
    p.add_argument("--max-pairs", type=_positive_int, default=5000, help="cap on test x train pairs")
    p.add_argument("--ratios", default=None, help="per-pair CSV dump (pair_id,bound,w_eff,lb,dtw,ratio)")

    p = sub.add_parser("sweep-v", help="classification time/DTW calls of enhanced:V relative to keogh", formatter_class=fmt)
    common(p, multi_window=True, v_option=False)
    timing(p)
    p.add_argument("--v", dest="v_values", type=parse_v_values, default="1..20", help="V values, e.g. 1..20 or 1,2,5")
    p.add_argument("--no-tightness", action="store_true", help="skip the tightness columns")

    p = sub.add_parser("compare", help="compare bounds by 1-NN classification cost", formatter_class=fmt)
    common(p, multi_window=True)
    timing(p)
    p.add_argument("--bound", action="append", default=None, help=f"bound to compare; repeatable (default: {DEFAULT_COMPARE})")
    p.add_argument("--reference", default="enhanced:5", help="bound the time ratios are normalised by")
    p.add_argument("--no-tightness", action="store_true", help="skip the tightness columns")
    return parser


# ---------------------------------------------------------------------------
# data resolution


def _load_pair(args) -> tuple[Dataset, Dataset]:
    files = args.train is not None or args.test is not None
    if files and args.synthetic is not None:
        raise UsageError("give either --train/--test or --synthetic, not both")
    if args.synthetic is not None:
        data = generate(args.synthetic)
        if args.znorm:
            data = _znormed(data)
        if not 0 < args.test_fraction < 1:
            raise UsageError("--test-fraction must lie strictly between 0 and 1")
        n_test = max(1, round(len(data) * args.test_fraction))
        if n_test >= len(data):
            raise UsageError("synthetic dataset too small to hold out test series")
        return data.split(len(data) - n_test)
    if args.train is None or args.test is None:
        raise UsageError("need both --train and --test (or --synthetic)")
    train = load_ucr(args.train, normalize=args.znorm)
    test = load_ucr(args.test, normalize=args.znorm)
    if train.length != test.length:
        raise DTWLBError(f"train length {train.length} != test length {test.length}")
    return train, test


def _znormed(data: Dataset) -> Dataset:
    from .core import TimeSeries
    from .data import znorm

    return Dataset(data.name, tuple(TimeSeries(znorm(s.values), s.label, s.id) for s in data.series))


def _abandon_modes(choice: str) -> list[bool]:
    return {"on": [True], "off": [False], "both": [True, False]}[choice]


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> int:
    train, test = _load_pair(args)
    bound = _bound(args.bound, args.v)
    model = build_model(train.series, args.window, bound)
    log.info("model: %d series, L=%d, w_eff=%d, bound=%s", len(model), model.length, model.w_eff, bound)

    def one(q):
        return classify(
            model, q, order=args.order, seed=args.seed,
            dtw_abandon=args.dtw_abandon == "on", lb_abandon=args.lb_abandon,
        )

    if args.jobs > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            preds = list(pool.map(one, test.series))
    else:
        preds = [one(q) for q in test.series]

    rows = [
        (qi, p.label, q.label, p.nn_index, p.nn_distance, p.stats.dtw_calls, p.stats.pruned, p.stats.elapsed)
        for qi, (q, p) in enumerate(zip(test.series, preds))
    ]
    write_csv(rows, PREDICTION_COLUMNS, args.output)
    correct = sum(p.label == q.label for q, p in zip(test.series, preds))
    calls = sum(p.stats.dtw_calls for p in preds)
    pruned = sum(p.stats.pruned for p in preds)
    elapsed = sum(p.stats.elapsed for p in preds)
    print(
        f"accuracy={correct / len(preds):.4f} queries={len(preds)} w_eff={model.w_eff} "
        f"bound={bound} dtw_calls={calls} pruned={pruned} elapsed_ms={elapsed / 1e6:.2f}",
        file=sys.stderr,
    )
    return 0


def _tightness_pairs(args):
    sources = sum(x is not None for x in (args.pairs, args.synthetic)) + (args.train is not None or args.test is not None)
    if sources != 1:
        raise UsageError("give exactly one of --pairs, --train/--test, --synthetic")
    if args.pairs is not None or args.synthetic is not None:
        data = load_ucr(args.pairs, normalize=args.znorm) if args.pairs is not None else generate(args.synthetic)
        if args.synthetic is not None and args.znorm:
            data = _znormed(data)
        s = data.series
        if len(s) < 2:
            raise DTWLBError("need at least two series to form a pair")
        return data.name, [(s[i], s[i + 1]) for i in range(0, len(s) - 1, 2)]
    train, test = _load_pair(args)
    pairs = [(q, c) for q in test.series for c in train.series][: args.max_pairs]
    return train.name, pairs


def cmd_tightness(args) -> int:
    name, pairs = _tightness_pairs(args)
    bounds = _bound_list(args.bound, DEFAULT_TIGHTNESS, args.v)
    windows = args.window or [WindowSpec.fractional(0.1)]
    records, dump = [], []
    length = len(pairs[0][0])
    for w in windows:
        w_eff = w.resolve(length)
        for spec in bounds:
            t = bench.measure_tightness(pairs, spec, w)
            records.append(bench.BenchRecord(
                dataset=name, bound=spec.describe(), v=spec.v, window_spec=w.describe(), w_eff=w_eff,
                queries=len(pairs), dtw_calls=0, lb_calls=len(pairs), pruned=0, elapsed_ns=0,
                tightness_mean=t.mean, tightness_geomean=t.geomean,
            ))
            dump.extend((pid, spec.describe(), w_eff, lb, d, lb / d) for pid, lb, d in t.rows)
            log.info("%s w=%s: mean tightness %.4f", spec, w.describe(), t.mean)
    write_results(records, args.output)
    if args.ratios:
        write_csv(dump, ("pair_id", "bound", "w_eff", "lb", "dtw", "ratio"), args.ratios)
    return 0


def cmd_sweep_v(args) -> int:
    train, test = _load_pair(args)
    windows = args.window or [WindowSpec.fractional(0.1)]
    records = []
    for w in windows:
        for abandon in _abandon_modes(args.dtw_abandon):
            recs = bench.sweep_v(
                train, test, w, args.v_values, repetitions=args.repetitions,
                dtw_abandon=abandon, tightness=not args.no_tightness,
            )
            records.extend(recs)
            ratios = bench.ratios_to(recs, recs[0].bound)
            for r in recs[1:]:
                t, c = ratios[r.bound]
                print(f"w={r.w_eff} {r.bound}: time/keogh={t:.3f} dtw_calls/keogh={c:.3f}", file=sys.stderr)
    write_results(records, args.output)
    return 0


def cmd_compare(args) -> int:
    train, test = _load_pair(args)
    bounds = _bound_list(args.bound, DEFAULT_COMPARE, args.v)
    windows = args.window or [WindowSpec.fractional(0.1)]
    records = []
    for w in windows:
        for abandon in _abandon_modes(args.dtw_abandon):
            cmp = bench.compare_bounds(
                train, test, w, bounds, repetitions=args.repetitions,
                dtw_abandon=abandon, tightness=not args.no_tightness, reference=args.reference,
            )
            records.extend(cmp.records)
            for r in cmp.records:
                ratio = cmp.time_ratio_to_reference.get(r.bound)
                extra = f" time/{cmp.reference}={ratio:.3f}" if ratio is not None else ""
                print(
                    f"w={r.w_eff} {r.bound}: rank(time)={cmp.rank_by_time[r.bound]:g} "
                    f"rank(dtw_calls)={cmp.rank_by_dtw_calls[r.bound]:g} dtw_calls={r.dtw_calls}{extra}",
                    file=sys.stderr,
                )
    write_results(records, args.output)
    return 0


COMMANDS = {
    "classify": cmd_classify,
    "tightness": cmd_tightness,
    "sweep-v": cmd_sweep_v,
    "compare": cmd_compare,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dtwlb: error: {exc}", file=sys.stderr)
        return 2
    except (DTWLBError, OSError) as exc:
        print(f"dtwlb: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
