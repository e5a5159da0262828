"""Flow under the constant ceiling 1: points move up the unit interval at
unit speed and the odometer fires at each wrap.

States live on (depth-n words) x (dyadic height cells); the height marginal
is a step density, the base tail is the Bernoulli product, and each cell
carries Lebesgue measure implicitly.  Integer-time dynamics never split
cells, which is what makes the exact slice decomposition of the flow
distance possible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .measures import (
    ZERO,
    TWO,
    BernoulliParam,
    CylinderState,
    InvalidStateError,
    TVInterval,
    tv_pushforward_pow2,
)
from .rationals import format_rational, parse_rational
from .words import Word, CarryResult, all_words, odometer_pow, word_from_string, word_to_string


@dataclass(frozen=True)
class SuspensionPoint:
    base: Word
    height: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.height < 1:
            raise ValueError("height must lie in [0, 1)")


@dataclass(frozen=True)
class FlowStep:
    """Result of flowing a point: the new point (base within-prefix) plus the
    carry count that escaped the finite base prefix."""

    point: SuspensionPoint
    tail_shift: int


def point_flow(s: Fraction, p: SuspensionPoint) -> FlowStep:
    """Flow for time s: with s + y = n + y' (integer and fractional part),
    the base advances by n odometer steps and the height becomes y'."""
    total = Fraction(s) + p.height
    n = math.floor(total)
    r: CarryResult = odometer_pow(n, p.base)
    return FlowStep(SuspensionPoint(r.word, total - n), r.tail_shift)


def integer_time_factorization_check(k: int, depth: int, time_depth: int) -> bool:
    """Exhaustively verify that integer-time flow is the odometer power on
    the base tensored with the identity on heights: every depth-D word and
    every dyadic cell (checked at its left endpoint and midpoint) maps by
    the odometer power with the height, hence its cell, unchanged."""
    cells = 1 << time_depth
    for w in all_words(depth):
        expected = odometer_pow(k, w)
        for i in range(cells):
            for y in (Fraction(i, cells), Fraction(2 * i + 1, 2 * cells)):
                step = point_flow(Fraction(k), SuspensionPoint(w, y))
                if step.point.base != expected.word:
                    return False
                if step.tail_shift != expected.tail_shift:
                    return False
                if step.point.height != y:
                    return False
    return True


@dataclass(frozen=True)
class SuspensionState:
    """Nonnegative rational weights on (depth-n word, cell index) pairs,
    summing to one; cell i is [i/2^m, (i+1)/2^m)."""

    param: BernoulliParam
    base_depth: int
    time_depth: int
    weights: Mapping[tuple[Word, int], Fraction]

    def __post_init__(self) -> None:
        cells = 1 << self.time_depth
        total = ZERO
        for (w, i), wt in self.weights.items():
            if len(w) != self.base_depth:
                raise InvalidStateError(f"word {w!r} has wrong depth")
            if not 0 <= i < cells:
                raise InvalidStateError(f"cell index {i} out of range")
            if wt < 0:
                raise InvalidStateError(f"negative weight at ({w!r}, {i})")
            total += wt
        if total != 1:
            raise InvalidStateError(f"weights sum to {total}, expected 1")

    def weight(self, w: Word, i: int) -> Fraction:
        return self.weights.get((tuple(w), i), ZERO)

    @classmethod
    def product(
        cls, base: CylinderState, time_depth: int = 0
    ) -> "SuspensionState":
        """Base state tensored with the uniform step density on cells."""
        cells = 1 << time_depth
        weights = {
            (w, i): wt / cells
            for w, wt in base.weights.items()
            for i in range(cells)
        }
        return cls(base.param, base.depth, time_depth, weights)


def project_height(state: SuspensionState, time_depth: int) -> SuspensionState:
    """Conditional expectation onto a coarser dyadic partition: sibling
    cells merge by summation; mass is preserved exactly."""
    if time_depth > state.time_depth:
        raise ValueError("target partition must be coarser")
    if time_depth == state.time_depth:
        return state
    shift = state.time_depth - time_depth
    merged: dict[tuple[Word, int], Fraction] = {}
    for (w, i), wt in state.weights.items():
        key = (w, i >> shift)
        merged[key] = merged.get(key, ZERO) + wt
    return SuspensionState(state.param, state.base_depth, time_depth, merged)


def slice_functionals(
    state: SuspensionState,
) -> list[tuple[Fraction, dict[Word, Fraction]]]:
    """Per height cell: (slice mass, base weights of the slice)."""
    out = []
    for i in range(1 << state.time_depth):
        wdict = {
            w: wt for (w, j), wt in state.weights.items() if j == i and wt != 0
        }
        out.append((sum(wdict.values(), ZERO), wdict))
    return out


def suspension_tv_pow2(state: SuspensionState, n: int, depth: int) -> TVInterval:
    """Certified interval for the distance between the state and its
    composition with the time-2^n flow, via the exact decomposition into
    height slices: the flow distance is the sum, over cells, of the base
    pushforward distances of the slice functionals."""
    if depth < max(state.base_depth, n + 1):
        raise ValueError(
            f"working depth {depth} too small "
            f"(need >= {max(state.base_depth, n + 1)})"
        )
    lo = ZERO
    hi = ZERO
    for mass, wdict in slice_functionals(state):
        if mass == 0:
            continue
        normalized = CylinderState(
            state.param, state.base_depth, {w: wt / mass for w, wt in wdict.items()}
        )
        iv = tv_pushforward_pow2(normalized, n, depth)
        lo += mass * iv.lo
        hi += mass * iv.hi
    return TVInterval(lo, min(hi, TWO))


def flow_limit_table(
    state: SuspensionState, n_max: int, depth: int
) -> list[tuple[int, TVInterval]]:
    """Intervals for the time-2^n flow distances, n = 0..n_max; every entry
    with n >= base depth is the degenerate interval at 2 - 4a."""
    if n_max < state.base_depth:
        raise ValueError("n_max must be at least the base depth")
    rows = []
    for n in range(n_max + 1):
        d = max(depth, state.base_depth, n + 1)
        rows.append((n, suspension_tv_pow2(state, n, d)))
    return rows


# ---------------------------------------------------------------------------
# JSON state files
# ---------------------------------------------------------------------------


def suspension_state_to_json(state: SuspensionState) -> str:
    payload = {
        "a": format_rational(state.param.a),
        "base_depth": state.base_depth,
        "time_depth": state.time_depth,
        "weights": {
            f"{word_to_string(w)}:{i}": format_rational(wt)
            for (w, i), wt in sorted(state.weights.items())
            if wt != 0
        },
    }
    return json.dumps(payload, sort_keys=True)


def suspension_state_from_json(text: str) -> SuspensionState:
    try:
        payload = json.loads(text)
        param = BernoulliParam(parse_rational(payload["a"]))
        base_depth = int(payload["base_depth"])
        time_depth = int(payload["time_depth"])
        weights = {}
        for key, v in payload["weights"].items():
            bits, _, cell = key.partition(":")
            weights[(word_from_string(bits), int(cell))] = parse_rational(v)
    except InvalidStateError:
        raise
    except ValueError as exc:
        if "(0, 1/2]" in str(exc):
            raise
        raise InvalidStateError(f"malformed suspension state file: {exc}") from exc
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidStateError(f"malformed suspension state file: {exc!r}") from exc
    return SuspensionState(param, base_depth, time_depth, weights)
