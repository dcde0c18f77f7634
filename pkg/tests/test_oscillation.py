import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from weightlab.constants import ap_constant, iter_ap_functional, rhp_sup
from weightlab.families import CascadeSpec, cascade_weight
from weightlab.grid import Scope, ValidationError, Weight, make_weight
from weightlab.oscillation import (OscKind, beta_constant, iter_osc_functional,
                                   lemma35_crosscheck, osc_constant)

from conftest import naive_beta, naive_blo

W13 = make_weight(1, [1.0, 3.0])


def weights(resolution=4):
    return arrays(np.float64, 1 << resolution,
                  elements=st.floats(0.05, 20.0)).map(lambda v: Weight(resolution, v))


def test_kind_parsing():
    assert OscKind.parse("C2(1.5)") == OscKind("C2", 1.5)
    assert OscKind.parse(" C3 ").name == "C3"
    assert OscKind("C5", 2.0).name == "C5(2)"
    for bad in (("C6", None), ("C2", None), ("C5", 1.0), ("C1", 2.0)):
        with pytest.raises(ValidationError):
            OscKind(*bad)


@pytest.mark.parametrize("scope", ["grid", "dyadic"])
def test_constant_weight(scope):
    w = make_weight(3, np.full(8, 0.2))
    assert osc_constant(w, "C1", scope) == pytest.approx(1.0)
    assert osc_constant(w, "C2(2)", scope) == pytest.approx(1.0)
    assert osc_constant(w, "C5(3)", scope) == pytest.approx(1.0)
    assert osc_constant(w, "C3", scope) == pytest.approx(0.0, abs=1e-15)
    assert osc_constant(w, "C4", scope) == pytest.approx(0.0, abs=1e-15)


def test_two_cell_example():
    assert osc_constant(W13, "C1", Scope.DYADIC) == pytest.approx(2 / math.sqrt(3), rel=1e-15)
    assert osc_constant(W13, "C3", Scope.DYADIC) == pytest.approx(math.log(3) / 2, rel=1e-15)
    assert osc_constant(W13, "C4", Scope.DYADIC) == pytest.approx(math.log(3) / 2, rel=1e-15)


@pytest.mark.parametrize("scope", ["grid", "dyadic"])
def test_c1_equals_a_inf_per_interval(rng, scope):
    w = Weight(5, np.exp(rng.normal(size=32)))
    for (l1, s1, a), (l2, s2, b) in zip(iter_ap_functional(w, math.inf, scope),
                                        iter_osc_functional(w, OscKind("C1"), scope)):
        assert l1 == l2 and np.array_equal(s1, s2)
        assert np.allclose(a, b, rtol=1e-12)


@pytest.mark.parametrize("scope", ["grid", "dyadic"])
@pytest.mark.parametrize("beta", [-2.0, -0.5, 0.7, 3.0])
def test_beta_constant_matches_naive(rng, scope, beta):
    v = np.exp(rng.normal(size=16))
    assert beta_constant(Weight(4, v), beta, scope) == pytest.approx(naive_beta(v, beta, scope), rel=1e-12)


@pytest.mark.parametrize("scope", ["grid", "dyadic"])
def test_osc_kinds_match_naive(rng, scope):
    v = np.exp(rng.normal(size=16))
    w = Weight(4, v)
    assert osc_constant(w, "C3", scope) == pytest.approx(naive_blo(v, "C3", scope), rel=1e-12)
    assert osc_constant(w, "C4", scope) == pytest.approx(naive_blo(v, "C4", scope), rel=1e-12)
    assert osc_constant(w, "C2(3)", scope) == pytest.approx(naive_beta(v, -0.5, scope), rel=1e-12)
    assert osc_constant(w, "C5(2)", scope) == pytest.approx(naive_beta(v, 2.0, scope), rel=1e-12)


def test_beta_zero_is_one():
    assert beta_constant(W13, 0.0) == 1.0


@given(weights(), st.sampled_from(["grid", "dyadic"]))
def test_c3_c4_swap_under_reciprocal(w, scope):
    inv = Weight(w.resolution, 1.0 / w.values)
    assert osc_constant(w, "C3", scope) == pytest.approx(osc_constant(inv, "C4", scope), rel=1e-10, abs=1e-12)


@given(weights(), st.sampled_from(["grid", "dyadic"]))
def test_osc_nonnegative_floor(w, scope):
    assert osc_constant(w, "C1", scope) >= 1 - 1e-12
    assert osc_constant(w, "C3", scope) >= -1e-12


@pytest.mark.parametrize("scope", ["grid", "dyadic"])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_crosscheck_asserted_rows_hold(scope, p):
    for seed in range(6):
        w = cascade_weight(CascadeSpec(6, 0.2 + 0.1 * seed, seed))
        report = lemma35_crosscheck(w, p, scope)
        assert len(report.relations) == 12
        failed = [r.relation for r in report.relations if r.asserted and not r.passed]
        assert not failed
        assert (report.dyadic_doubling is not None) == (scope == "dyadic")


def test_crosscheck_identity_row_and_json():
    report = lemma35_crosscheck(W13, 2.0, "grid")
    first = report.relations[0]
    assert first.relation == "A_inf == C1" and first.passed
    assert first.lhs == pytest.approx(ap_constant(W13, math.inf))
    rows = report.to_json()
    assert set(rows[0]) == {"relation", "lhs", "rhs", "pass", "slack", "asserted", "note"}


def test_unpowered_c5_row_is_reported_only():
    w = cascade_weight(CascadeSpec(8, 0.6, 3))
    report = lemma35_crosscheck(w, 3.0, "grid")
    row = report.relations[-1]
    assert row.relation == "C5 <= RH_p*A_inf" and not row.asserted
    assert row.lhs == pytest.approx(osc_constant(w, "C5(3)"))
    assert row.rhs == pytest.approx(rhp_sup(w, 3.0) * ap_constant(w, math.inf))
    assert report.passed


def test_crosscheck_rejects_endpoint_exponents():
    for p in (1.0, math.inf):
        with pytest.raises(ValidationError):
            lemma35_crosscheck(W13, p)
