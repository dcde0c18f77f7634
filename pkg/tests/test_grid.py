import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from weightlab.grid import (Arc, DyadicInterval, Scope, ValidationError, Weight, arc_average,
                            coarsen, dyadic_intervals, enumerate_arcs, make_weight, sweep,
                            translate, translation_mean, window_max_cover)

from conftest import naive_intervals


def positive(resolution):
    return arrays(np.float64, 1 << resolution,
                  elements=st.floats(0.01, 100.0, allow_nan=False, allow_infinity=False))


def test_make_weight_rejects_wrong_length():
    with pytest.raises(ValidationError, match="length 3"):
        make_weight(2, [1, 2, 3])


@pytest.mark.parametrize("bad, idx", [([1, 0, 2, 3], 1), ([1, 2, -1, 3], 2), ([1, 2, 3, np.nan], 3)])
def test_make_weight_names_offending_index(bad, idx):
    with pytest.raises(ValidationError, match=f"index {idx}"):
        make_weight(2, bad)


def test_weight_is_immutable():
    w = make_weight(1, [1, 3])
    with pytest.raises(ValueError):
        w.values[0] = 5


def test_arc_average_examples():
    w = make_weight(2, [1, 2, 3, 4])
    assert arc_average(w, Arc(3, 2)) == 2.5
    assert arc_average(w, Arc(0, 4)) == 2.5
    assert arc_average(w, Arc(1, 1)) == 2.0


def test_arc_validation():
    with pytest.raises(ValidationError):
        arc_average(make_weight(1, [1, 3]), Arc(2, 1))
    with pytest.raises(ValidationError):
        arc_average(make_weight(1, [1, 3]), Arc(0, 3))


def test_translate_examples():
    assert translate(make_weight(2, [1, 2, 3, 4]), 1).values.tolist() == [4, 1, 2, 3]
    assert translate(make_weight(1, [1, 3]), 2).values.tolist() == [1, 3]


@given(positive(3), st.integers(-20, 20), st.integers(-20, 20))
def test_translate_composes(v, a, b):
    w = Weight(3, v)
    assert translate(translate(w, a), b) == translate(w, a + b)


@given(positive(3), st.integers(0, 7), st.integers(1, 8), st.integers(-10, 10))
def test_arc_average_translation_equivariant(v, start, length, s):
    w = Weight(3, v)
    q = Arc(start, length)
    assert arc_average(translate(w, s), q) == pytest.approx(arc_average(w, q.shifted(-s, 3)), rel=1e-14)


@given(positive(4))
def test_full_circle_average_is_mean(v):
    assert arc_average(Weight(4, v), Arc(0, 16)) == pytest.approx(v.mean(), rel=1e-14)


def test_prefix_average_matches_naive_all_arcs(rng):
    for resolution in (1, 4, 8):
        v = np.exp(rng.normal(size=1 << resolution))
        w = Weight(resolution, v)
        for q in enumerate_arcs(resolution)[:: max(1, len(enumerate_arcs(resolution)) // 2000)]:
            naive = math.fsum(v[q.cells(resolution)]) / q.length
            assert abs(arc_average(w, q) - naive) <= 1e-12 * naive


def test_compensated_average_on_large_grid(rng):
    resolution = 16
    v = np.exp(3 * rng.normal(size=1 << resolution))
    w = Weight(resolution, v)
    q = Arc(12345, 40000)
    assert arc_average(w, q) == pytest.approx(math.fsum(v[q.cells(resolution)]) / q.length, rel=1e-14)


def test_enumerate_arcs_examples():
    assert enumerate_arcs(1, 2) == [Arc(0, 1), Arc(1, 1), Arc(0, 2)]
    assert len(enumerate_arcs(2, 4)) == 13
    assert len(enumerate_arcs(2, 1)) == 4
    with pytest.raises(ValidationError):
        enumerate_arcs(2, 5)


@given(st.integers(0, 6))
def test_enumerate_arcs_unique_and_counted(resolution):
    n = 1 << resolution
    arcs = enumerate_arcs(resolution)
    assert len(set(arcs)) == len(arcs) == n * (n - 1) + 1


@pytest.mark.parametrize("resolution, count", [(0, 1), (2, 7), (3, 15)])
def test_dyadic_interval_counts(resolution, count):
    assert len(dyadic_intervals(resolution)) == count


def test_dyadic_interval_geometry():
    j = DyadicInterval(2, 3)
    assert j.as_arc(4) == Arc(12, 4)
    assert j.parent() == DyadicInterval(1, 1)
    assert j.children() == (DyadicInterval(3, 6), DyadicInterval(3, 7))
    assert j.contains_cell(13, 4) and not j.contains_cell(11, 4)
    with pytest.raises(ValidationError):
        DyadicInterval(0, 0).parent()


@pytest.mark.parametrize("scope", ["grid", "dyadic"])
def test_sweep_matches_naive_enumeration(rng, scope):
    n = 16
    v = rng.normal(size=n)
    expected = sorted((round(v[c].mean(), 12), round(v[c].min(), 12), round(v[c].max(), 12))
                      for c in naive_intervals(n, scope))
    got = []
    for b in sweep({"v": v}, scope, extrema=v):
        got += zip(np.round(b.means["v"], 12), np.round(b.lo, 12), np.round(b.hi, 12))
    assert sorted(got) == expected


def test_sweep2d_matches_naive(rng):
    n = 4
    v = rng.normal(size=(n, n))
    seen = 0
    for b in sweep({"v": v}, Scope.GRID, extrema=v):
        lx, ly = b.length
        xs, ys = b.starts
        for a, x in enumerate(xs):
            for c, y in enumerate(ys):
                block = v[np.ix_((x + np.arange(lx)) % n, (y + np.arange(ly)) % n)]
                assert b.means["v"][a, c] == pytest.approx(block.mean(), abs=1e-13)
                assert b.lo[a, c] == block.min() and b.hi[a, c] == block.max()
                seen += 1
    assert seen == (n * (n - 1) + 1) ** 2


@given(arrays(np.float64, 32, elements=st.floats(-5, 5)), st.integers(1, 32))
def test_window_max_cover(v, length):
    n = v.size
    expected = [max(v[(c - i) % n] for i in range(length)) for c in range(n)]
    assert np.array_equal(window_max_cover(v, length), expected)


def test_coarsen_is_cell_average():
    assert coarsen(np.array([1.0, 3.0, 5.0, 7.0]), 1).tolist() == [2.0, 6.0]
    with pytest.raises(ValidationError):
        coarsen(np.ones(4), 3)


def test_translation_mean_rejects_empty_mask():
    with pytest.raises(ValidationError):
        translation_mean(np.ones((4, 4)), np.zeros(4, dtype=bool))


def test_scope_parse():
    assert Scope.parse("dyadic") is Scope.DYADIC
    with pytest.raises(ValidationError):
        Scope.parse("bogus")


def test_translation_mean_flat_columns_exact(rng):
    v = np.exp(rng.normal(size=64))
    rows = np.stack([np.roll(v, i) for i in range(64)])
    assert np.array_equal(translation_mean(rows), v)
    assert np.array_equal(translation_mean(rows, geometric=True), v)


def test_translation_mean_geometric(rng):
    rows = np.exp(rng.normal(size=(8, 8)))
    expected = np.exp(translation_mean(np.log(rows)))
    assert np.allclose(translation_mean(rows, geometric=True), expected, rtol=1e-14)
