import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from weightlab.averaging import (WeightFamily, ap_factor_product, beta_envelope, blo_envelope,
                                 denormalize, ga_average, normalize_logmean,
                                 translation_average, uniform_dyadic_bound)
from weightlab.constants import ap_constant, rhp_constant
from weightlab.families import cascade_family, translate_family
from weightlab.grid import Scope, ValidationError, Weight, make_weight


def families(resolution=3):
    n = 1 << resolution
    return arrays(np.float64, (n, n), elements=st.floats(0.05, 20.0)).map(
        lambda m: WeightFamily(resolution, m))


def naive_ga(members, mask):
    n = members.shape[1]
    out = np.empty(n)
    for c in range(n):
        logs = [math.log(members[i, (c + i) % n]) for i in range(n) if mask[i]]
        out[c] = math.exp(math.fsum(logs) / len(logs))
    return out


def test_family_validation():
    with pytest.raises(ValidationError, match="shape"):
        WeightFamily(2, np.ones((3, 4)))
    with pytest.raises(ValidationError, match="member 1 value at index 2"):
        m = np.ones((4, 4))
        m[1, 2] = -1
        WeightFamily(2, m)
    with pytest.raises(ValidationError, match="no members"):
        WeightFamily(2, np.ones((4, 4)), np.zeros(4))


@given(families())
def test_ga_matches_naive(fam):
    assert np.allclose(ga_average(fam).values, naive_ga(fam.members, fam.mask), rtol=1e-13)


@given(families(), st.lists(st.booleans(), min_size=8, max_size=8))
def test_am_gm_pointwise(fam, mask):
    if not any(mask):
        return
    fam = fam.with_mask(mask)
    assert np.all(ga_average(fam).values <= translation_average(fam).values * (1 + 1e-12))


def test_translate_family_recovers_weight(rng):
    w = Weight(5, np.exp(rng.normal(size=32)))
    fam = translate_family(w)
    assert np.array_equal(ga_average(fam).values, w.values)
    assert np.array_equal(translation_average(fam).values, w.values)


def test_singleton_mask_picks_shifted_member(rng):
    fam = WeightFamily(3, np.exp(rng.normal(size=(8, 8))))
    for i in (0, 3, 7):
        mask = np.zeros(8, dtype=bool)
        mask[i] = True
        one = fam.with_mask(mask)
        expected = np.roll(fam.members[i], -i)
        assert np.allclose(ga_average(one).values, expected, rtol=1e-14)
        assert np.array_equal(translation_average(one).values, expected)


def test_two_member_geometric_mean():
    u = np.array([1.0, 4.0, 9.0, 16.0])
    v = np.array([4.0, 1.0, 1.0, 4.0])
    members = np.stack([u, np.roll(v, 1), u, u])
    fam = WeightFamily(2, members, [True, True, False, False])
    assert np.allclose(ga_average(fam).values, np.sqrt(u * v), rtol=1e-14)


@given(families())
def test_normalisation(fam):
    normalized, record = normalize_logmean(fam)
    assert np.allclose(normalized.logs().mean(axis=1), 0.0, atol=1e-12)
    assert np.allclose(denormalize(normalized, record).members, fam.members, rtol=1e-12)
    scale = ga_average(fam).values / ga_average(normalized).values
    assert np.allclose(scale, record.grand_factor, rtol=1e-12)


def test_factor_product(rng):
    w1 = Weight(4, np.exp(rng.normal(size=16)))
    w2 = Weight(4, np.exp(rng.normal(size=16)))
    w = ap_factor_product(w1, w2, 3.0)
    assert np.allclose(w.values, w1.values / w2.values**2)
    assert ap_factor_product(w1, w2, 1.0) == w1
    with pytest.raises(ValidationError):
        ap_factor_product(w1, Weight(3, np.ones(8)), 2.0)
    with pytest.raises(ValidationError):
        ap_factor_product(w1, w2, math.inf)


def test_factor_product_of_a1_weights_is_ap():
    # A_p <= A_1(w1) * A_1(w2)^(p-1) for w1 * w2^(1-p)
    for seed in range(5):
        fam = cascade_family(5, 0.4, seed)
        w1, w2 = fam.member(0), fam.member(1)
        for p in (1.5, 2.0, 3.0):
            bound = ap_constant(w1, 1, "grid") * ap_constant(w2, 1, "grid") ** (p - 1)
            assert ap_constant(ap_factor_product(w1, w2, p), p, "grid") <= bound * (1 + 1e-12)


def test_uniform_dyadic_bound():
    fam = cascade_family(4, 0.5, 2)
    expected = max(ap_constant(fam.member(i), 2, Scope.DYADIC) for i in range(16))
    assert uniform_dyadic_bound(fam, "A", 2) == expected
    mask = np.zeros(16, dtype=bool)
    mask[5] = True
    assert uniform_dyadic_bound(fam.with_mask(mask), "RH", 2) == rhp_constant(fam.member(5), 2, "dyadic")
    with pytest.raises(ValidationError):
        uniform_dyadic_bound(fam, "B", 2)


def test_coarsen_family():
    fam = cascade_family(4, 0.3, 1)
    c = fam.coarsen(2)
    assert c.resolution == 2
    assert np.allclose(c.members[1], fam.members[4].reshape(4, 4).mean(axis=1))
    with pytest.raises(ValidationError):
        c.coarsen(3)


@pytest.mark.parametrize("beta", [-1.0, 0.5, 2.0])
def test_beta_envelope_holds(beta):
    for seed in range(3):
        res = beta_envelope(cascade_family(5, 0.5, seed), beta)
        assert res.passed and res.arcs == 32 * 31 + 1
        assert res.sup_lhs <= res.global_bound(beta) * (1 + 1e-9)


@pytest.mark.parametrize("which", ["C3", "C4"])
def test_blo_envelope_holds(which):
    for seed in range(3):
        res = blo_envelope(cascade_family(5, 0.5, seed), which)
        assert res.passed
        assert res.sup_lhs <= res.global_bound() + 1e-9
    with pytest.raises(ValidationError):
        blo_envelope(cascade_family(2, 0.5, 0), "C5")


def test_envelope_for_translate_family():
    w = make_weight(3, [1, 2, 3, 4, 5, 6, 7, 8])
    res = blo_envelope(translate_family(w), "C3")
    assert res.passed and res.cb_sup > 0
