import random
from fractions import Fraction

from odoflow.measures import BernoulliParam, CylinderState
from odoflow.suspension import SuspensionState
from odoflow.characters import StepFunction
from odoflow.words import all_words


def random_state(param: BernoulliParam, depth: int, rng: random.Random) -> CylinderState:
    raw = [rng.randrange(0, 9) for _ in range(1 << depth)]
    if sum(raw) == 0:
        raw[0] = 1
    total = sum(raw)
    return CylinderState(
        param,
        depth,
        {w: Fraction(r, total) for w, r in zip(all_words(depth), raw) if r},
    )


def random_suspension_state(
    param: BernoulliParam, base_depth: int, time_depth: int, rng: random.Random
) -> SuspensionState:
    cells = 1 << time_depth
    raw = {
        (w, i): rng.randrange(0, 7)
        for w in all_words(base_depth)
        for i in range(cells)
    }
    total = sum(raw.values())
    if total == 0:
        raw[(tuple([0] * base_depth), 0)] = total = 1
    return SuspensionState(
        param,
        base_depth,
        time_depth,
        {k: Fraction(v, total) for k, v in raw.items() if v},
    )


def random_step_function(
    param: BernoulliParam, depth: int, rng: random.Random
) -> StepFunction:
    values = {}
    for w in all_words(depth):
        if rng.random() < 0.6:
            values[w] = Fraction(rng.randrange(-6, 7), rng.randrange(1, 5))
    if not values:
        values[tuple([0] * depth)] = Fraction(1)
    return StepFunction(param, depth, values)
