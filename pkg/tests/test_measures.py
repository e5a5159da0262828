import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from odoflow.measures import (
    BernoulliParam,
    CylinderState,
    InvalidStateError,
    SignedFunctional,
    TVInterval,
    brute_force_tv_pow2,
    cylinder_mass,
    extend_state,
    kn_mass,
    rn_derivative_on_Kn,
    rn_integral_check,
    state_difference,
    state_from_json,
    state_to_json,
    tv_pushforward_pow2,
    tv_same_tail,
    tv_sigma_vs_identity,
)
from odoflow.words import all_words

from conftest import random_state

params = st.fractions(min_value=F(1, 50), max_value=F(1, 2), max_denominator=50).map(
    BernoulliParam
)


def test_param_domain():
    BernoulliParam(F(1, 2))
    with pytest.raises(ValueError):
        BernoulliParam(F(2, 3))
    with pytest.raises(ValueError):
        BernoulliParam(F(0))
    assert BernoulliParam(F(1, 4)).flow_parameter == 1


def test_cylinder_mass_examples():
    assert cylinder_mass(BernoulliParam(F(1, 3)), (0, 1)) == F(2, 9)
    assert cylinder_mass(BernoulliParam(F(1, 2)), (1, 0, 1)) == F(1, 8)
    assert cylinder_mass(BernoulliParam(F(1, 3)), ()) == 1


@given(params, st.integers(1, 8))
def test_cylinder_masses_sum_to_one(param, n):
    assert sum(cylinder_mass(param, w) for w in all_words(n)) == 1


def test_rn_derivative_examples():
    assert rn_derivative_on_Kn(BernoulliParam(F(1, 3)), 2) == 1
    assert rn_derivative_on_Kn(BernoulliParam(F(1, 3)), 1) == 2
    assert rn_derivative_on_Kn(BernoulliParam(F(1, 4)), 4) == F(1, 9)


@pytest.mark.parametrize(
    "a,expected",
    [(F(1, 2), F(0)), (F(1, 4), F(1)), (F(1, 3), F(2, 3))],
)
def test_tv_sigma_vs_identity_examples(a, expected):
    gap = tv_sigma_vs_identity(BernoulliParam(a))
    assert gap.total == expected
    assert gap.positive_half == gap.negative_half == 1 - 2 * a


@given(params)
def test_tv_sigma_closed_form_matches_series(param):
    # independent oracle: sum the series term by term and bound the remainder
    N = 40
    partial = sum(
        abs(rn_derivative_on_Kn(param, n) - 1) * kn_mass(param, n)
        for n in range(1, N + 1)
    )
    total = tv_sigma_vs_identity(param).total
    assert total == 2 - 4 * param.a
    assert partial <= total
    # remaining terms are below (1 - r^{n-2}) * mass, tail of a geometric sum
    assert total - partial <= (1 - param.a) ** N


def test_rn_integral_examples():
    assert rn_integral_check(BernoulliParam(F(1, 3)), 1) == (F(2, 3), F(1, 3))
    assert rn_integral_check(BernoulliParam(F(1, 2)), 2) == (F(3, 4), F(1, 4))


@given(params, st.integers(1, 30))
def test_rn_integral_sums_to_one(param, n):
    partial, tail = rn_integral_check(param, n)
    assert partial + tail == 1


def test_extend_state_examples():
    p = BernoulliParam(F(1, 3))
    nu = CylinderState.bernoulli(p)
    ext = extend_state(nu, 1)
    assert ext.weight((0,)) == F(1, 3) and ext.weight((1,)) == F(2, 3)
    assert extend_state(nu, 0) is nu
    point = CylinderState.point_mass(BernoulliParam(F(1, 4)), (0,))
    ext2 = extend_state(point, 2)
    assert ext2.weight((0, 0)) == F(1, 4)
    assert ext2.weight((0, 1)) == F(3, 4)
    assert ext2.weight((1, 0)) == 0 and ext2.weight((1, 1)) == 0


@given(params, st.integers(0, 3), st.integers(0, 3), st.integers(0, 10**6))
def test_extend_preserves_normalization(param, depth, extra, seed):
    state = random_state(param, depth, random.Random(seed))
    ext = extend_state(state, depth + extra)
    assert sum(ext.weights.values()) == 1
    assert all(wt >= 0 for wt in ext.weights.values())
    # restriction recovers the original weights
    for w, wt in state.weights.items():
        restricted = sum(v for u, v in ext.weights.items() if u[:depth] == w)
        assert restricted == wt


def test_tv_same_tail_examples():
    p = BernoulliParam(F(1, 3))
    assert tv_same_tail(SignedFunctional(p, 2, {})) == 0
    two_points = SignedFunctional(p, 2, {(0, 0): F(1), (1, 1): F(-1)})
    assert tv_same_tail(two_points) == 2
    state = random_state(p, 2, random.Random(5))
    roundtrip = state_difference(extend_state(state, 4), extend_state(state, 4))
    assert tv_same_tail(roundtrip) == 0


def test_tv_pushforward_bernoulli_matches_lemma():
    p = BernoulliParam(F(1, 3))
    nu = CylinderState.bernoulli(p)
    assert tv_pushforward_pow2(nu, 0, 2) == TVInterval(F(2, 3), F(2, 3))


def test_tv_pushforward_exact_beyond_depth():
    p = BernoulliParam(F(1, 4))
    state = random_state(p, 2, random.Random(1))
    assert tv_pushforward_pow2(state, 3, 4) == TVInterval(F(1), F(1))


def test_tv_pushforward_point_mass_certified():
    p = BernoulliParam(F(1, 3))
    point = CylinderState.point_mass(p, (1, 1))
    widths = []
    intervals = []
    for d in range(10, 15):
        iv = tv_pushforward_pow2(point, 0, d)
        assert iv.width <= 2 * F(2, 3) ** d
        widths.append(iv.width)
        intervals.append(iv)
    assert all(w2 <= w1 for w1, w2 in zip(widths, widths[1:]))
    for iv in intervals:
        assert iv.intersects(intervals[0])
    # cross-check against the rotation oracle
    oracle = brute_force_tv_pow2(point, 0, 12)
    assert intervals[2].intersects(oracle)


def test_tv_pushforward_rejects_small_depth():
    p = BernoulliParam(F(1, 3))
    state = random_state(p, 3, random.Random(2))
    with pytest.raises(ValueError):
        tv_pushforward_pow2(state, 1, 2)
    with pytest.raises(ValueError):
        brute_force_tv_pow2(state, 3, 3)


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("a", [F(1, 3), F(1, 2)])
def test_engine_and_oracle_intersect(a, seed):
    p = BernoulliParam(a)
    state = random_state(p, 4, random.Random(seed))
    for m in range(4):
        engine = tv_pushforward_pow2(state, m, 10)
        oracle = brute_force_tv_pow2(state, m, 10)
        assert engine.intersects(oracle)
        bound = 2 * (1 - a) ** (10 - m)
        assert engine.width <= bound and oracle.width <= bound


def test_oracle_collapses_for_invariant_measure():
    p = BernoulliParam(F(1, 2))
    state = random_state(p, 2, random.Random(3))
    for d in (8, 10, 12):
        iv = brute_force_tv_pow2(state, 3, d)
        assert iv.contains(F(0))
        assert iv.hi <= 2 * F(1, 2) ** (d - 3)


@pytest.mark.parametrize("seed", range(3))
def test_tail_consistency(seed):
    p = BernoulliParam(F(1, 3))
    state = random_state(p, 3, random.Random(seed))
    deeper = extend_state(state, 5)
    for m in (1, 2, 4):
        iv1 = tv_pushforward_pow2(state, m, 10)
        iv2 = tv_pushforward_pow2(deeper, m, 10)
        assert iv1.intersects(iv2)


@given(params, st.integers(0, 4), st.integers(0, 10**6), st.integers(0, 4))
@settings(max_examples=40)
def test_exactness_at_large_m(param, depth, seed, extra):
    state = random_state(param, depth, random.Random(seed))
    m = depth + extra
    iv = tv_pushforward_pow2(state, m, max(depth, m + 1))
    t = param.flow_parameter
    assert iv == TVInterval(t, t)


def test_state_validation():
    p = BernoulliParam(F(1, 3))
    with pytest.raises(InvalidStateError):
        CylinderState(p, 1, {(0,): F(1, 2), (1,): F(1, 3)})
    with pytest.raises(InvalidStateError):
        CylinderState(p, 1, {(0,): F(3, 2), (1,): F(-1, 2)})
    with pytest.raises(InvalidStateError):
        CylinderState(p, 2, {(0,): F(1)})


def test_state_json_roundtrip():
    p = BernoulliParam(F(1, 3))
    state = random_state(p, 3, random.Random(11))
    again = state_from_json(state_to_json(state))
    assert again == state


def test_state_json_rejects_malformed():
    with pytest.raises(InvalidStateError):
        state_from_json('{"a": "1/3", "depth": 1, "weights": {"0": "1/2", "1": "1/3"}}')
    with pytest.raises(InvalidStateError):
        state_from_json('{"a": "1/3", "weights": {}}')
    with pytest.raises(InvalidStateError):
        state_from_json('{"a": "nope", "depth": 0, "weights": {"": "1"}}')
