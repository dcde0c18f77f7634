import math

import numpy as np
import pytest
from scipy.integrate import quad
from hypothesis import given, strategies as st

from weightlab.averaging import ga_average
from weightlab.constants import ap_constant, doubling_constant, rhp_sup
from weightlab.families import (BOUNDARY_KINDS, CascadeSpec, cascade_2d, cascade_family,
                                cascade_family_2d, cascade_weight, paper_log_weight,
                                random_family, random_smooth_coefficients, seam_weight,
                                smooth_doubling_bound, smooth_doubling_weight, smooth_family,
                                translate_family, trig_sup)
from weightlab.grid import Scope, ValidationError, coarsen, translate
from weightlab.rng import derive_seed


def test_cascade_pinned_values():
    w = cascade_weight(CascadeSpec(10, 0.3, 42))
    assert ap_constant(w, 2, Scope.DYADIC) == pytest.approx(1.349048895459517, rel=1e-12)
    assert ap_constant(w, 2, Scope.GRID) == pytest.approx(2.4588679529323385, rel=1e-12)
    fam = cascade_family(6, 0.3, 7)
    assert ap_constant(ga_average(fam), 2) == pytest.approx(1.0057747053054804, rel=1e-12)


def test_cascade_deterministic():
    a = cascade_weight(CascadeSpec(8, 0.5, 3))
    assert a == cascade_weight(CascadeSpec(8, 0.5, 3))
    assert a != cascade_weight(CascadeSpec(8, 0.5, 4))


@given(st.integers(0, 10), st.floats(0, 0.95), st.integers(0, 2**63))
def test_cascade_martingale_structure(resolution, delta, seed):
    w = cascade_weight(CascadeSpec(resolution, delta, seed))
    assert w.values.mean() == pytest.approx(1.0, rel=1e-12)
    # coarsening reproduces the shorter cascade with the same stream
    if resolution:
        coarse = cascade_weight(CascadeSpec(resolution - 1, delta, seed))
        assert np.allclose(coarsen(w.values, resolution - 1), coarse.values, rtol=1e-12)


def test_cascade_dyadic_doubling_bound():
    for delta in (0.1, 0.5, 0.8):
        w = cascade_weight(CascadeSpec(9, delta, 1))
        assert doubling_constant(w, Scope.DYADIC) <= 2 * (1 + delta) / (1 - delta) * (1 + 1e-12)


def test_cascade_spec_validation():
    with pytest.raises(ValidationError):
        CascadeSpec(4, 1.0)
    with pytest.raises(ValidationError):
        CascadeSpec(-1, 0.1)
    assert CascadeSpec(3, 0.25, 9).to_json() == {"generator": "cascade", "resolution": 3,
                                                  "delta": 0.25, "seed": 9}


@pytest.mark.parametrize("a", [0.3, 0.5, 0.8])
def test_seam_closed_forms(a):
    for resolution in (4, 6, 8):
        w = seam_weight(resolution, a)
        assert w.values[0] == pytest.approx((1 - a) ** resolution)
        assert w.values[-1] == pytest.approx((1 + a) ** resolution)
        assert doubling_constant(w, Scope.DYADIC) == pytest.approx(2 / (1 - a), rel=1e-12)
        assert ap_constant(w, 2, Scope.DYADIC) == pytest.approx((1 - a * a) ** -resolution, rel=1e-10)
        assert doubling_constant(w, Scope.GRID) >= ((1 + a) / (1 - a)) ** (resolution - 2) / 4
    with pytest.raises(ValidationError):
        seam_weight(4, 1.0)


def test_translate_family_members():
    w = cascade_weight(CascadeSpec(4, 0.5, 2))
    fam = translate_family(w)
    for i in (0, 5, 15):
        assert fam.member(i) == translate(w, i)


def test_trig_sup_bounds():
    assert trig_sup([]) == 0.0
    assert trig_sup([(1.0, 0.0)]) == pytest.approx(1.0, rel=1e-3)
    assert trig_sup([(1.0, 0.0)]) >= 1.0
    # cos + cos 2x peaks at 2 but the l1 sum is also 2; cancellations make the sample tighter
    assert trig_sup([(1.0, 0.0), (0.0, 0.0), (-1.0, 0.0)]) < 2.0
    with pytest.raises(ValidationError):
        trig_sup([(math.nan, 0.0)])


def test_smooth_weight_samples_midpoints():
    w = smooth_doubling_weight(3, [(1.0, 0.0)])
    x = (np.arange(8) + 0.5) / 8
    assert np.allclose(w.values, np.exp(np.cos(2 * np.pi * x)))
    with pytest.raises(ValidationError):
        smooth_doubling_weight(3, [(3.0, 3.0)])


def test_smooth_doubling_stable_in_resolution():
    coeffs = [(1.0, 0.0)]
    values = [doubling_constant(smooth_doubling_weight(r, coeffs)) for r in range(8, 13)]
    assert max(values) / min(values) <= 1.05
    assert max(values) <= smooth_doubling_bound(8, coeffs)


@given(st.integers(0, 2**40), st.integers(1, 5), st.floats(0.1, 4.0))
def test_random_coefficients_budget(seed, degree, budget):
    coeffs = random_smooth_coefficients(seed, degree, budget)
    assert len(coeffs) == degree
    assert sum(abs(a) + abs(b) for a, b in coeffs) == pytest.approx(budget)
    assert trig_sup(coeffs) <= budget * (1 + 1e-12)


def test_smooth_members_obey_bound():
    fam = smooth_family(6, 3)
    for i in range(0, 64, 9):
        coeffs = random_smooth_coefficients(derive_seed(3, i))
        assert fam.member(i) == smooth_doubling_weight(6, coeffs)
        assert doubling_constant(fam.member(i)) <= smooth_doubling_bound(6, coeffs)


@pytest.mark.parametrize("kind", BOUNDARY_KINDS)
def test_boundary_weights_shape(kind):
    w = paper_log_weight(8, kind)
    v = w.values
    assert np.allclose(v, v[::-1])
    right = v[128:]
    if kind == "A1_boundary":
        assert np.all(np.diff(right) > 0)          # 1/log(1/x) grows away from the centre
    else:
        assert np.all(np.diff(right) <= 1e-15)
        assert v.min() == pytest.approx(1.0)


def test_boundary_cell_averages_match_quadrature():
    n = 1 << 6
    w = paper_log_weight(6, "A1_boundary")
    for j in (1, 5, 31):
        exact, _ = quad(lambda x: 1 / math.log(1 / x), j / n, (j + 1) / n)
        assert w.values[n // 2 + j] == pytest.approx(exact * n, rel=1e-10)
    w = paper_log_weight(6, "RHinf_boundary")
    exact, _ = quad(lambda x: max(math.log(1 / x), 1.0), 0, 1 / n)
    assert w.values[n // 2] == pytest.approx(exact * n, rel=1e-8)


@pytest.mark.parametrize("kind, constant", [("A1_boundary", lambda w: ap_constant(w, 1)),
                                            ("RHinf_boundary", lambda w: rhp_sup(w, math.inf))])
def test_boundary_constants_grow(kind, constant):
    values = [constant(paper_log_weight(r, kind)) for r in (6, 8, 10)]
    assert values[0] < values[1] < values[2]


def test_boundary_validation():
    with pytest.raises(ValidationError):
        paper_log_weight(3, "A1_boundary")
    with pytest.raises(ValidationError):
        paper_log_weight(6, "other")


def test_random_family_validation():
    with pytest.raises(ValidationError, match="needs 4 members"):
        random_family([CascadeSpec(2, 0.1, i) for i in range(3)])
    with pytest.raises(ValidationError, match="spec 1"):
        random_family([CascadeSpec(1, 0.1), CascadeSpec(2, 0.1)])
    fam = random_family([{"resolution": 1, "delta": 0.2, "seed": s} for s in (1, 2)])
    assert fam.member(1) == cascade_weight(CascadeSpec(1, 0.2, 2))


def test_cascade_2d():
    w = cascade_2d(4, 0.3, 5)
    assert w.values.shape == (16, 16)
    assert w.values.mean() == pytest.approx(1.0)
    assert w == cascade_2d(4, 0.3, 5)
    # first-level quadrant masses factor as (1 +- dx)(1 +- dy)
    blocks = w.values.reshape(2, 8, 2, 8).mean(axis=(1, 3))
    assert blocks[0, 0] * blocks[1, 1] == pytest.approx(blocks[0, 1] * blocks[1, 0])
    fam = cascade_family_2d(2, 0.3, 1)
    assert fam.members.shape == (4, 4, 4, 4)


def test_translate_family_dyadic_constants_below_grid():
    w = cascade_weight(CascadeSpec(6, 0.5, 8))
    fam = translate_family(w)
    worst = max(ap_constant(fam.member(i), 2, Scope.DYADIC) for i in range(fam.size))
    assert worst <= ap_constant(w, 2, Scope.GRID) * (1 + 1e-12)
