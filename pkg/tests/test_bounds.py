import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtwlb.bounds import (
    BOUND_KINDS,
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
from dtwlb.core import dtw, dtw_oracle, point_cost
from dtwlb.envelope import compute_envelope, envelope_oracle
from dtwlb.errors import (
    EnvelopeWindowMismatch,
    IndexOutOfRange,
    InvalidBound,
    InvalidV,
    LengthMismatch,
    TooLong,
    TooShort,
)

from conftest import random_pairs, series_pair

A4, B4 = [0.0, 1.0, 2.0, 3.0], [3.0, 2.0, 1.0, 0.0]
Z3, O3 = [0.0, 0.0, 0.0], [1.0, 1.0, 1.0]


def all_specs(n):
    specs = [BoundSpec(k) for k in BOUND_KINDS if k != "enhanced"]
    specs += [BoundSpec.enhanced(v) for v in sorted({1, 2, 3, 5, max(1, n // 2)})]
    if n < 2:
        specs = [s for s in specs if s.kind not in ("kim_sum", "new")]
    return specs


# -- worked examples ---------------------------------------------------------


def test_kim_sum_examples():
    # dtw_oracle gives 10 for this pair, so 8 is admissible
    assert lb_kim_sum([0, 1, 2], [2, 3, 4]).squared == 8
    assert dtw_oracle([0, 1, 2], [2, 3, 4]).squared == 10
    assert lb_kim_sum([5, 0, 5], [5, 0, 5]).squared == 0
    a, b = [5, 0, 5, 2], [1, 3, 0, 2]
    values = {evaluate(BoundSpec("kim"), a, b, w).squared for w in range(4)}
    assert len(values) == 1


def test_kim_sum_counts_distinct_features():
    # first 0, last 0, argmin index 1 in both, argmax index 2 in both
    a = [0.0, -2.0, 3.0, 0.0]
    b = [0.0, -1.0, 1.0, 0.0]
    assert lb_kim_sum(a, b).squared == 1 + 4
    # constant series keep only the end points
    assert lb_kim_sum([1, 1, 1, 1], [2, 2, 2, 2]).squared == 2


def test_kim_sum_too_short():
    with pytest.raises(TooShort):
        lb_kim_sum([1.0], [2.0])


def test_yi_examples():
    assert lb_yi([5, 0, 5], [1, 2, 3]).squared == 9
    assert lb_yi([1.5, 2, 2.5], [1, 2, 3]).squared == 0
    assert lb_yi([4, 4], [4, 4]).squared == 0


def test_keogh_examples():
    assert lb_keogh(Z3, compute_envelope(O3, 1)).squared == 3
    assert dtw_oracle(Z3, O3, 1).squared == 3
    assert lb_keogh([2, 2, 2], compute_envelope([1, 3, 1], 1)).squared == 0


def test_keogh_example_against_naive_recomputation():
    env = envelope_oracle(B4, 2)
    assert env.upper.tolist() == [3, 3, 3, 2]
    assert env.lower.tolist() == [1, 0, 0, 0]
    naive = 0.0
    for x, u, l in zip(A4, env.upper, env.lower):
        naive += point_cost(x, u) if x > u else point_cost(x, l) if x < l else 0.0
    assert naive == 2
    assert lb_keogh(A4, compute_envelope(B4, 2)).squared == naive


def test_improved_examples():
    assert lb_improved(Z3, O3, w=1).squared == 3
    assert lb_improved(A4, A4, w=2).squared == 0


def test_new_examples():
    assert lb_new(Z3, O3, 1).squared == 3
    assert lb_new(A4, A4, 2).squared == 0
    # two points: only the exact boundary terms remain
    assert lb_new([0, 5], [2, 1], 1).squared == 4 + 16


def test_band_examples():
    assert band_min_left(A4, B4, 2, 2) == 1
    assert band_min_left(A4, B4, 1, 2) == point_cost(0, 3)
    assert band_min_right(A4, B4, 4, 2) == point_cost(3, 0)
    with pytest.raises(IndexOutOfRange):
        band_min_left(A4, B4, 0, 2)
    with pytest.raises(IndexOutOfRange):
        band_min_right(A4, B4, 5, 2)


def test_band_first_and_last_are_corners(rng):
    for _ in range(50):
        n = int(rng.integers(1, 20))
        a, b = rng.normal(size=n), rng.normal(size=n)
        w = int(rng.integers(0, n))
        assert band_min_left(a, b, 1, w) == point_cost(a[0], b[0])
        assert band_min_right(a, b, n, w) == point_cost(a[-1], b[-1])


def test_enhanced_examples():
    assert lb_enhanced(A4, B4, w=2, v=2).squared == 20
    assert lb_enhanced_oracle(A4, B4, 2, 2) == 20
    assert dtw_oracle(A4, B4, 2).squared == 20
    assert lb_enhanced(Z3, O3, w=1, v=1).squared == 3
    assert lb_enhanced_oracle(Z3, O3, 1, 1) == 3
    for v in (1, 2, 7):
        for w in range(4):
            assert lb_enhanced(A4, A4, w=w, v=v).squared == 0


def test_enhanced_rejects_bad_v():
    with pytest.raises(InvalidV):
        lb_enhanced(A4, B4, w=1, v=0)
    with pytest.raises(InvalidV):
        lb_enhanced_oracle(A4, B4, 1, 0)
    with pytest.raises(InvalidV):
        BoundSpec.enhanced(0)


def test_enhanced_oracle_limit():
    with pytest.raises(TooLong):
        lb_enhanced_oracle(np.zeros(65), np.zeros(65), 3, 2)


def test_enhanced_length_one():
    assert lb_enhanced([1.0], [4.0], w=0, v=3).squared == 9


def test_enhanced_structural_cases(rng):
    for _ in range(100):
        n = int(rng.integers(2, 20))
        a, b = rng.normal(size=n).cumsum(), rng.normal(size=n).cumsum()
        w = int(rng.integers(0, n))
        env = envelope_oracle(b, w)
        keogh_terms = [
            point_cost(x, u) if x > u else point_cost(x, l) if x < l else 0.0
            for x, u, l in zip(a, env.upper, env.lower)
        ]
        ends = point_cost(a[0], b[0]) + point_cost(a[-1], b[-1])
        expected = point_cost(a[0], b[0]) + sum(keogh_terms[1:-1]) + point_cost(a[-1], b[-1])
        assert lb_enhanced_oracle(a, b, w, 1) == pytest.approx(expected, rel=1e-12, abs=1e-12)
        if n % 2 == 0:
            half = n // 2
            bands = sum(band_min_left(a, b, i, w) for i in range(1, half + 1))
            bands += sum(band_min_right(a, b, i, w) for i in range(half + 1, n + 1))
            assert lb_enhanced_oracle(a, b, w, half) == pytest.approx(bands, rel=1e-12, abs=1e-12)
        assert ends <= lb_enhanced_oracle(a, b, w, n) + 1e-12


# -- argument checks ---------------------------------------------------------


def test_length_mismatch_everywhere():
    env = compute_envelope([1, 2], 1)
    with pytest.raises(LengthMismatch):
        lb_keogh([1, 2, 3], env)
    for fn in (lb_kim_sum, lb_yi, lb_new, lb_improved, lb_enhanced):
        with pytest.raises(LengthMismatch):
            fn([1, 2, 3], [1, 2])
    with pytest.raises(LengthMismatch):
        evaluate(BoundSpec("keogh"), [1, 2, 3], [1, 2], 1)


def test_envelope_window_mismatch():
    env = compute_envelope(B4, 1)
    with pytest.raises(EnvelopeWindowMismatch):
        lb_improved(A4, B4, env_b=env, w=2)
    with pytest.raises(EnvelopeWindowMismatch):
        lb_enhanced(A4, B4, env_b=env, w=2, v=2)
    with pytest.raises(EnvelopeWindowMismatch):
        evaluate(BoundSpec("keogh"), A4, B4, 2, env_b=env)


# -- BoundSpec -------------------------------------------------------------


@pytest.mark.parametrize(
    "text, kind, v",
    [("kim", "kim_sum", None), ("yi", "yi", None), ("keogh", "keogh", None),
     ("improved", "improved", None), ("new", "new", None),
     ("enhanced", "enhanced", 5), ("enhanced:3", "enhanced", 3)],
)
def test_spec_parse(text, kind, v):
    spec = BoundSpec.parse(text)
    assert spec.kind == kind and spec.v == v
    assert BoundSpec.parse(spec.describe()) == spec


def test_spec_parse_cascade_and_symmetric():
    spec = BoundSpec.parse("cascade:kim,keogh,enhanced:5")
    assert spec.kind == "cascade"
    assert [m.describe() for m in spec.members] == ["kim", "keogh", "enhanced:5"]
    sym = BoundSpec.parse("sym:enhanced:2")
    assert sym.symmetric and sym.v == 2 and sym.describe() == "sym:enhanced:2"


@pytest.mark.parametrize("text", ["lb_foo", "keogh:3", "enhanced:x", "cascade:"])
def test_spec_parse_errors(text):
    with pytest.raises(InvalidBound):
        BoundSpec.parse(text)


def test_spec_rules():
    with pytest.raises(InvalidBound):
        BoundSpec("keogh", v=3)
    inner = BoundSpec.cascade([BoundSpec("keogh")])
    with pytest.raises(InvalidBound):
        BoundSpec.cascade([inner])
    with pytest.raises(InvalidBound):
        BoundSpec.cascade([])


# -- properties ------------------------------------------------------------


def test_admissible_against_oracle():
    for a, b, w in random_pairs(11, 300, (1, 12)):
        truth = dtw_oracle(a, b, w).squared
        for spec in all_specs(len(a)):
            lb = evaluate(spec, a, b, w).squared
            assert lb <= truth + 1e-9 * max(1.0, truth), (spec, a, b, w)


@settings(max_examples=150, deadline=None)
@given(series_pair(min_len=2, max_len=40))
def test_admissible_property(pair):
    a, b, w = pair
    truth = dtw(a, b, w).squared
    for spec in all_specs(len(a)):
        assert evaluate(spec, a, b, w).squared <= truth + 1e-9 * max(1.0, truth)


@settings(max_examples=200, deadline=None)
@given(series_pair(min_len=1, max_len=40))
def test_enhanced_one_dominates_keogh(pair):
    a, b, w = pair
    env = compute_envelope(b, w)
    assert lb_enhanced(a, b, env_b=env, v=1).squared >= lb_keogh(a, env).squared


@settings(max_examples=150, deadline=None)
@given(series_pair(min_len=2, max_len=40))
def test_improved_and_new_dominate_keogh(pair):
    a, b, w = pair
    env = compute_envelope(b, w)
    keogh = lb_keogh(a, env).squared
    assert lb_improved(a, b, env_b=env).squared >= keogh
    assert lb_new(a, b, w).squared >= keogh


def test_enhanced_matches_oracle_exactly():
    rng = np.random.default_rng(3)
    for n in range(2, 17):
        for w in range(n):
            for v in range(1, n // 2 + 1):
                for _ in range(3):
                    a, b = rng.normal(size=n).cumsum(), rng.normal(size=n).cumsum()
                    assert lb_enhanced(a, b, w=w, v=v).squared == lb_enhanced_oracle(a, b, w, v)


def test_abort_soundness(rng):
    for _ in range(300):
        n = int(rng.integers(2, 60))
        a, b = rng.normal(size=n).cumsum(), rng.normal(size=n).cumsum()
        w = int(rng.integers(0, n))
        env = compute_envelope(b, w)
        for spec in all_specs(n):
            full = evaluate(spec, a, b, w, env_b=env).squared
            cutoff = full * rng.uniform(0, 1.5)
            res = evaluate(spec, a, b, w, env_b=env, cutoff=cutoff)
            if res.aborted:
                assert full >= cutoff and res.squared >= cutoff
            else:
                assert res.squared == full


def test_direct_cutoffs_are_sound(rng):
    for _ in range(200):
        n = int(rng.integers(2, 60))
        a, b = rng.normal(size=n).cumsum(), rng.normal(size=n).cumsum()
        w = int(rng.integers(0, n))
        env = compute_envelope(b, w)
        for fn in (
            lambda c: lb_keogh(a, env, cutoff=c),
            lambda c: lb_improved(a, b, env_b=env, cutoff=c),
            lambda c: lb_new(a, b, w, cutoff=c),
            lambda c: lb_enhanced(a, b, env_b=env, v=3, cutoff=c),
        ):
            full = fn(None)
            assert not full.aborted
            c = full.squared * rng.uniform(0, 1.2)
            res = fn(c)
            if res.aborted:
                assert full.squared >= c
            else:
                assert res.squared == full.squared


def test_window_independence(rng):
    for _ in range(50):
        n = int(rng.integers(2, 30))
        a, b = rng.normal(size=n), rng.normal(size=n)
        for spec in (BoundSpec("kim"), BoundSpec("yi")):
            assert len({evaluate(spec, a, b, w).squared for w in range(n)}) == 1


def test_new_boundary_terms_exact(rng):
    for _ in range(50):
        n = int(rng.integers(2, 30))
        a, b = rng.normal(size=n), rng.normal(size=n)
        w = int(rng.integers(0, n))
        inner = 0.0
        for i in range(1, n - 1):
            lo, hi = max(0, i - w), min(n - 1, i + w)
            inner += min(point_cost(a[i], b[j]) for j in range(lo, hi + 1))
        expected = point_cost(a[0], b[0]) + point_cost(a[-1], b[-1]) + inner
        assert lb_new(a, b, w).squared == pytest.approx(expected, rel=1e-12)


def test_symmetric_max():
    for a, b, w in random_pairs(5, 200, (2, 12)):
        truth = dtw_oracle(a, b, w).squared
        env_a, env_b = compute_envelope(a, w), compute_envelope(b, w)
        for spec in all_specs(len(a)):
            forward = evaluate(spec, a, b, w).squared
            backward = evaluate(spec, b, a, w).squared
            sym = lb_symmetric_max(spec, a, b, env_a, env_b, w).squared
            assert sym == max(forward, backward)
            assert sym <= truth + 1e-9 * max(1.0, truth)
    same = np.array([1.0, 3.0, 2.0, 5.0])
    spec = BoundSpec.enhanced(2)
    assert lb_symmetric_max(spec, same, same, w=1).squared == evaluate(spec, same, same, 1).squared


def test_cascade():
    members = [BoundSpec("kim"), BoundSpec("keogh"), BoundSpec.enhanced(5)]
    a, b = np.array([0.0, 2.0, 1.0, 4.0, 3.0]), np.array([1.0, 0.0, 3.0, 2.0, 5.0])
    kim = lb_kim_sum(a, b).squared
    res = cascade_eval(members, a, b, compute_envelope(b, 2), 2, cutoff=0.0)
    assert res.aborted and res.squared == kim
    values = [evaluate(m, a, b, 2).squared for m in members]
    res = cascade_eval(members, a, b, None, 2)
    assert not res.aborted and res.squared == max(values)
    for m in members:
        assert cascade_eval([m], a, b, None, 2) == evaluate(m, a, b, 2)


@settings(max_examples=100, deadline=None)
@given(series_pair(min_len=2, max_len=30), st.floats(0, 50))
def test_cascade_property(pair, cutoff):
    a, b, w = pair
    members = [BoundSpec("yi"), BoundSpec("keogh"), BoundSpec("new"), BoundSpec.enhanced(2)]
    values = [evaluate(m, a, b, w).squared for m in members]
    res = cascade_eval(members, a, b, None, w, cutoff=cutoff)
    if res.aborted:
        assert max(values) >= cutoff
    else:
        assert res.squared == max(values) and max(values) < cutoff


def test_distance_is_root():
    res = lb_keogh(Z3, compute_envelope(O3, 1))
    assert res.distance == math.sqrt(3)
