import random
from fractions import Fraction as F

import pytest

from odoflow.measures import (
    BernoulliParam,
    CylinderState,
    InvalidStateError,
    TVInterval,
    brute_force_tv_pow2,
)
from odoflow.suspension import (
    SuspensionPoint,
    SuspensionState,
    flow_limit_table,
    integer_time_factorization_check,
    point_flow,
    project_height,
    slice_functionals,
    suspension_state_from_json,
    suspension_state_to_json,
    suspension_tv_pow2,
)
from odoflow.words import all_words, odometer_step

from conftest import random_suspension_state


def test_point_flow_examples():
    p = SuspensionPoint((1, 0, 1), F(1, 3))
    assert point_flow(F(0), p).point == p
    start = SuspensionPoint((0, 1, 1), F(0))
    step = point_flow(F(1), start)
    assert step.point == SuspensionPoint(odometer_step((0, 1, 1)).word, F(0))
    halfway = point_flow(F(1, 2), SuspensionPoint((1, 0, 1), F(3, 4)))
    assert halfway.point == SuspensionPoint(odometer_step((1, 0, 1)).word, F(1, 4))


def test_point_flow_carries_tail_shift():
    r = point_flow(F(1), SuspensionPoint((1, 1), F(1, 2)))
    assert r.point.base == (0, 0) and r.tail_shift == 1


def test_point_flow_group_law():
    times = [F(n, 4) for n in range(-6, 7)]
    heights = [F(i, 4) for i in range(4)]
    for w in all_words(3):
        for y in heights:
            p = SuspensionPoint(w, y)
            for s1 in times:
                for s2 in times:
                    once = point_flow(s1 + s2, p)
                    first = point_flow(s2, p)
                    second = point_flow(s1, first.point)
                    assert second.point == once.point
                    assert first.tail_shift + second.tail_shift == once.tail_shift


@pytest.mark.parametrize("k", [-2, 0, 1, 3])
def test_integer_time_factorization(k):
    assert integer_time_factorization_check(k, 4, 2)


def test_project_height():
    p = BernoulliParam(F(1, 3))
    state = random_suspension_state(p, 2, 3, random.Random(4))
    assert project_height(state, 3) is state
    flat = project_height(state, 0)
    assert flat.time_depth == 0
    assert sum(flat.weights.values()) == 1
    two_cells = SuspensionState(p, 0, 1, {((), 0): F(1, 3), ((), 1): F(2, 3)})
    merged = project_height(two_cells, 0)
    assert merged.weights == {((), 0): F(1)}


def test_project_height_preserves_base_marginal():
    p = BernoulliParam(F(2, 5))
    state = random_suspension_state(p, 3, 3, random.Random(9))
    coarse = project_height(state, 1)
    for w in all_words(3):
        before = sum(wt for (u, _), wt in state.weights.items() if u == w)
        after = sum(wt for (u, _), wt in coarse.weights.items() if u == w)
        assert before == after


def test_suspension_tv_stabilizes_at_flow_parameter():
    p = BernoulliParam(F(1, 4))
    state = random_suspension_state(p, 2, 2, random.Random(0))
    for n in (2, 3, 5):
        assert suspension_tv_pow2(state, n, 8) == TVInterval(F(1), F(1))
    uniform = SuspensionState.product(CylinderState.bernoulli(BernoulliParam(F(1, 2)), 2), 1)
    assert suspension_tv_pow2(uniform, 3, 8) == TVInterval(F(0), F(0))


def test_suspension_tv_matches_slice_oracle():
    p = BernoulliParam(F(1, 3))
    state = random_suspension_state(p, 3, 2, random.Random(12))
    iv = suspension_tv_pow2(state, 1, 12)
    lo = hi = F(0)
    for mass, wdict in slice_functionals(state):
        if mass == 0:
            continue
        normalized = CylinderState(p, 3, {w: wt / mass for w, wt in wdict.items()})
        cell = brute_force_tv_pow2(normalized, 1, 12)
        lo += mass * cell.lo
        hi += mass * cell.hi
    assert iv.intersects(TVInterval(lo, min(hi, F(2))))


def test_flow_limit_table():
    p = BernoulliParam(F(2, 5))
    state = random_suspension_state(p, 3, 2, random.Random(2))
    rows = flow_limit_table(state, 6, 8)
    assert [n for n, _ in rows] == list(range(7))
    t = p.flow_parameter
    for n, iv in rows:
        if n >= 3:
            assert iv == TVInterval(t, t)
    with pytest.raises(ValueError):
        flow_limit_table(state, 2, 8)


def test_suspension_state_validation():
    p = BernoulliParam(F(1, 3))
    with pytest.raises(InvalidStateError):
        SuspensionState(p, 1, 1, {((0,), 0): F(1, 2)})
    with pytest.raises(InvalidStateError):
        SuspensionState(p, 1, 1, {((0,), 2): F(1)})


def test_suspension_json_roundtrip():
    p = BernoulliParam(F(1, 3))
    state = random_suspension_state(p, 2, 2, random.Random(8))
    again = suspension_state_from_json(suspension_state_to_json(state))
    assert again == state


def test_suspension_json_rejects_malformed():
    with pytest.raises(InvalidStateError):
        suspension_state_from_json(
            '{"a": "1/3", "base_depth": 1, "time_depth": 0, "weights": {"0:0": "1/2"}}'
        )
