#!/usr/bin/env python3
"""Cross-check the carry-resolution TV engine against the rotation oracle
on random states, printing both certified intervals per cell."""

import random
import sys
from fractions import Fraction

sys.path.insert(0, "src")

from odoflow.measures import BernoulliParam, brute_force_tv_pow2, tv_pushforward_pow2

sys.path.insert(0, "tests")
from conftest import random_state

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
rng = random.Random(seed)

for a in (Fraction(1, 3), Fraction(1, 4), Fraction(1, 2)):
    param = BernoulliParam(a)
    state = random_state(param, 4, rng)
    print(f"a = {a}, random depth-4 state (seed {seed})")
    for m in range(4):
        engine = tv_pushforward_pow2(state, m, 12)
        oracle = brute_force_tv_pow2(state, m, 12)
        ok = "ok" if engine.intersects(oracle) else "MISMATCH"
        print(
            f"  m={m}  engine [{engine.lo}, {engine.hi}]  "
            f"oracle [{oracle.lo}, {oracle.hi}]  {ok}"
        )
    print()
