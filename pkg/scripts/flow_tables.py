#!/usr/bin/env python3
"""Sweep the flow parameter and print the stabilized distance tables.

For each bias a the table of distances at times 2^n locks onto t = 2 - 4a
once n reaches the state's base depth; this script prints the exact tables
for a few parameters side by side.
"""

import random
import sys
from fractions import Fraction

sys.path.insert(0, "src")

from odoflow.measures import BernoulliParam, CylinderState
from odoflow.suspension import SuspensionState, flow_limit_table

from_args = [Fraction(a) for a in sys.argv[1:]] or [
    Fraction(1, 2),
    Fraction(2, 5),
    Fraction(1, 3),
    Fraction(1, 4),
    Fraction(1, 10),
]

rng = random.Random(0)
for a in from_args:
    param = BernoulliParam(a)
    base = CylinderState.bernoulli(param, 3)
    state = SuspensionState.product(base, time_depth=2)
    print(f"a = {a}   (t = {param.flow_parameter})")
    for n, iv in flow_limit_table(state, 7, 10):
        mark = "  <- stabilized" if iv.degenerate and n >= 3 else ""
        print(f"  n={n}  [{iv.lo}, {iv.hi}]{mark}")
    print()
