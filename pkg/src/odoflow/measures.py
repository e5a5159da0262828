"""Exact states on cylinder algebras and the total-variation engine.

A depth-n state assigns a nonnegative rational weight to each depth-n word;
the remaining coordinates implicitly carry the Bernoulli(a) product tail.
Pushforward distances under odometer powers 2^m are produced as certified
rational intervals: weights of atoms whose carry resolves inside the working
depth transfer exactly, and the mass whose carry escapes the prefix is
accounted for by a two-sided error.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .rationals import decimal_str, format_rational, parse_rational
from .words import (
    Word,
    all_words,
    odometer_pow,
    word_from_string,
    word_to_int,
    word_to_string,
)

ZERO = Fraction(0)
ONE = Fraction(1)
TWO = Fraction(2)


class InvalidStateError(ValueError):
    """A state file or weight table violates the state invariants."""


@dataclass(frozen=True)
class BernoulliParam:
    """Bias a of the coin: mu_a = a*delta_0 + (1-a)*delta_1, with 0 < a <= 1/2.

    The associated flow parameter is t = 2 - 4a, so t ranges over [0, 2).
    """

    a: Fraction

    def __post_init__(self) -> None:
        a = Fraction(self.a)
        object.__setattr__(self, "a", a)
        if not (0 < a <= Fraction(1, 2)):
            raise ValueError("a must lie in (0, 1/2]")

    @property
    def flow_parameter(self) -> Fraction:
        return 2 - 4 * self.a

    def bit_mass(self, bit: int) -> Fraction:
        return self.a if bit == 0 else 1 - self.a


def cylinder_mass(param: BernoulliParam, w: Word) -> Fraction:
    """Product-measure mass a^{#zeros} (1-a)^{#ones} of the cylinder of w."""
    ones = sum(w)
    return param.a ** (len(w) - ones) * (1 - param.a) ** ones


@dataclass(frozen=True)
class CylinderState:
    """Normal state on the depth-n algebra: 2^n nonnegative weights summing
    to one, tensored with the implicit Bernoulli tail.  Missing words carry
    weight zero.  Depth 0 is the Bernoulli measure itself."""

    param: BernoulliParam
    depth: int
    weights: Mapping[Word, Fraction]

    def __post_init__(self) -> None:
        total = ZERO
        for w, wt in self.weights.items():
            if len(w) != self.depth:
                raise InvalidStateError(
                    f"weight word {w!r} has wrong depth (expected {self.depth})"
                )
            if wt < 0:
                raise InvalidStateError(f"negative weight at {w!r}")
            total += wt
        if total != 1:
            raise InvalidStateError(f"weights sum to {total}, expected 1")

    def weight(self, w: Word) -> Fraction:
        return self.weights.get(w, ZERO)

    @classmethod
    def bernoulli(cls, param: BernoulliParam, depth: int = 0) -> "CylinderState":
        if depth == 0:
            return cls(param, 0, {(): ONE})
        return cls(
            param, depth, {w: cylinder_mass(param, w) for w in all_words(depth)}
        )

    @classmethod
    def point_mass(cls, param: BernoulliParam, w: Word) -> "CylinderState":
        return cls(param, len(w), {tuple(w): ONE})


@dataclass(frozen=True)
class SignedFunctional:
    """Signed rational weights on depth-n words, common Bernoulli tail."""

    param: BernoulliParam
    depth: int
    weights: Mapping[Word, Fraction]


def tv_same_tail(f: SignedFunctional) -> Fraction:
    """Total-variation norm of a signed functional whose summands share the
    product tail: the plain L1 norm of the weight vector."""
    return sum((abs(wt) for wt in f.weights.values()), ZERO)


def state_difference(lhs: CylinderState, rhs: CylinderState) -> SignedFunctional:
    if lhs.param != rhs.param or lhs.depth != rhs.depth:
        raise ValueError("states must share parameter and depth")
    keys = set(lhs.weights) | set(rhs.weights)
    return SignedFunctional(
        lhs.param, lhs.depth, {w: lhs.weight(w) - rhs.weight(w) for w in keys}
    )


def extend_state(state: CylinderState, depth: int) -> CylinderState:
    """Tensor with one coin per extra coordinate, so that restriction to the
    original algebra recovers the state exactly."""
    if depth < state.depth:
        raise ValueError("cannot extend to a smaller depth")
    if depth == state.depth:
        return state
    extra = depth - state.depth
    tail = _tail_masses(state.param, extra)
    weights: dict[Word, Fraction] = {}
    for w, wt in state.weights.items():
        if wt == 0:
            continue
        for jt in range(1 << extra):
            v = tuple((jt >> i) & 1 for i in range(extra))
            weights[w + v] = wt * tail[jt]
    return CylinderState(state.param, depth, weights)


def _tail_masses(param: BernoulliParam, extra: int) -> list[Fraction]:
    """Masses of the 2^extra coin-tail words, indexed by integer value."""
    vec = [ONE]
    a = param.a
    for _ in range(extra):
        vec = [x * a for x in vec] + [x * (1 - a) for x in vec]
    return vec


# ---------------------------------------------------------------------------
# Radon-Nikodym data of the odometer pushforward
# ---------------------------------------------------------------------------


def rn_derivative_on_Kn(param: BernoulliParam, n: int) -> Fraction:
    """Constant value (a/(1-a))^(n-2) of the pushforward derivative on the
    region whose points have their first zero at position n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (param.a / (1 - param.a)) ** (n - 2)


def kn_mass(param: BernoulliParam, n: int) -> Fraction:
    """Mass a*(1-a)^(n-1) of the first-zero-at-n region."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return param.a * (1 - param.a) ** (n - 1)


@dataclass(frozen=True)
class PushforwardGap:
    """Exact distance between the Bernoulli state and its odometer
    pushforward, split into the positive and negative parts of the
    derivative-minus-one density."""

    total: Fraction
    positive_half: Fraction
    negative_half: Fraction


def tv_sigma_vs_identity(param: BernoulliParam) -> PushforwardGap:
    """Closed-form summation of sum_n |(a/(1-a))^(n-2) - 1| * mass(K_n).

    The n = 1 term contributes ((1-a)/a - 1) * a = 1 - 2a; the n >= 3 terms
    are two geometric series, (1-a)^2 - a^2 = 1 - 2a again; n = 2 vanishes.
    """
    a = param.a
    positive = (rn_derivative_on_Kn(param, 1) - 1) * kn_mass(param, 1)
    negative = (1 - a) ** 2 - a**2
    return PushforwardGap(positive + negative, positive, negative)


def rn_integral_check(param: BernoulliParam, n_terms: int) -> tuple[Fraction, Fraction]:
    """Partial sum of the derivative's integral over the first-zero regions,
    plus the exact closed-form remainder; the two always add to 1."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    partial = sum(
        (rn_derivative_on_Kn(param, n) * kn_mass(param, n) for n in range(1, n_terms + 1)),
        ZERO,
    )
    # each term equals a^(n-1) * (1-a), so the remainder is a^N exactly
    tail = param.a**n_terms
    return partial, tail


# ---------------------------------------------------------------------------
# Certified total-variation intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TVInterval:
    """Rational interval certified to contain a total-variation value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if not (0 <= self.lo <= self.hi <= 2):
            raise ValueError(f"not a valid TV interval: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def intersects(self, other: "TVInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi


def tv_pushforward_pow2(state: CylinderState, m: int, depth: int) -> TVInterval:
    """Certified interval for the distance between the state and its
    composition with the 2^m-th odometer power.

    For m >= depth the distance is exactly 2 - 4a: the state factors as its
    depth-n restriction tensored with the Bernoulli tail, the 2^m power acts
    as the odometer on the tail alone, and the norm is multiplicative under
    tensoring with a state.  The degenerate interval is returned.

    For m < depth the pushforward is resolved atom by atom at an internal
    working depth: atoms whose carry stays inside the prefix transfer their
    weight exactly; the remaining mass (all ones in positions m+1..D) lands
    in a known cylinder but with a shifted tail, contributing at most twice
    its mass of two-sided error.  The internal depth is deepened until that
    mass is at most (1-a)^(depth-m), so the width bound holds uniformly,
    including for states concentrated on all-ones prefixes.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if depth < max(state.depth, m + 1):
        raise ValueError(
            f"working depth {depth} too small (need >= {max(state.depth, m + 1)})"
        )
    t = state.param.flow_parameter
    if m >= state.depth:
        return TVInterval(t, t)

    a = state.param.a
    target = (1 - a) ** (depth - m)
    d_int = max(depth, state.depth)
    while True:
        lo, unresolved = _resolved_tv(state, m, d_int)
        hi = min(lo + 2 * unresolved, TWO)
        if unresolved <= target or hi - lo <= 2 * target:
            return TVInterval(lo, hi)
        d_int += 1


def _resolved_tv(state: CylinderState, m: int, d_int: int) -> tuple[Fraction, Fraction]:
    """Exact total variation of the pushforward difference restricted to the
    depth-d_int algebra (a true lower bound), plus the carry-escaping mass
    (half the two-sided truncation error)."""
    ext = extend_state(state, d_int).weights
    k = 1 << m
    pushed: dict[Word, Fraction] = defaultdict(lambda: ZERO)
    unresolved = ZERO
    for w, wt in ext.items():
        r = odometer_pow(k, w)
        # on overflow the image cylinder is still r.word; only its tail is
        # shifted, so the cylinder-level bookkeeping stays exact
        pushed[r.word] += wt
        if r.overflow:
            unresolved += wt
    lo = ZERO
    for w in set(ext) | set(pushed):
        lo += abs(pushed.get(w, ZERO) - ext.get(w, ZERO))
    return lo, unresolved


def brute_force_tv_pow2(state: CylinderState, m: int, depth: int) -> TVInterval:
    """Independent oracle for tv_pushforward_pow2.

    Models the 2^m-th power as the rotation j -> j + 2^m mod 2^D on the
    exact atom vector; wrap-around places the top slice of mass in the right
    cylinder but with the wrong tail, so the rotated L1 distance is a lower
    bound and the wrapped mass a two-sided error.  Shares no code path with
    the carry-resolution engine.  Intended for working depths up to ~14.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if depth < max(state.depth, m + 1):
        raise ValueError(
            f"working depth {depth} too small (need >= {max(state.depth, m + 1)})"
        )
    a = state.param.a
    target = (1 - a) ** (depth - m)
    k = 1 << m

    vec = [ZERO] * (1 << state.depth)
    for w, wt in state.weights.items():
        vec[word_to_int(w)] = wt
    for _ in range(max(depth, state.depth) - state.depth):
        vec = [v * a for v in vec] + [v * (1 - a) for v in vec]
    while True:
        rotated = vec[-k:] + vec[:-k]
        lo = sum((abs(x - y) for x, y in zip(rotated, vec)), ZERO)
        wrapped = sum(vec[-k:], ZERO)
        hi = min(lo + 2 * wrapped, TWO)
        if wrapped <= target or hi - lo <= 2 * target:
            return TVInterval(lo, hi)
        vec = [v * a for v in vec] + [v * (1 - a) for v in vec]


# ---------------------------------------------------------------------------
# JSON state files
# ---------------------------------------------------------------------------


def state_to_json(state: CylinderState) -> str:
    payload = {
        "a": format_rational(state.param.a),
        "depth": state.depth,
        "weights": {
            word_to_string(w): format_rational(wt)
            for w, wt in sorted(state.weights.items())
            if wt != 0
        },
    }
    return json.dumps(payload, sort_keys=True)


def state_from_json(text: str) -> CylinderState:
    try:
        payload = json.loads(text)
        param = BernoulliParam(parse_rational(payload["a"]))
        depth = int(payload["depth"])
        weights = {
            word_from_string(k): parse_rational(v)
            for k, v in payload["weights"].items()
        }
    except InvalidStateError:
        raise
    except ValueError as exc:
        # out-of-range a is a domain error, not a malformed file
        if "(0, 1/2]" in str(exc):
            raise
        raise InvalidStateError(f"malformed state file: {exc}") from exc
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidStateError(f"malformed state file: {exc!r}") from exc
    return CylinderState(param, depth, weights)


def interval_to_dict(iv: TVInterval, precision: int = 12) -> dict:
    return {
        "lo": format_rational(iv.lo),
        "hi": format_rational(iv.hi),
        "decimal_lo": decimal_str(iv.lo, precision),
        "decimal_hi": decimal_str(iv.hi, precision),
    }
