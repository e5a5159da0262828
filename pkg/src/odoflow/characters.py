"""Root-of-unity eigenfunctions, the dyadic-angle test, and the exact
L2 estimates for odometer powers.

Complex numbers are never materialized: block-constant unitaries are stored
as exponent residues mod a power of two, and every eigenvalue identity is
checked as residue arithmetic.  An exponent table {j: e_j} of order q means
the function takes the value exp(-2*pi*i*e_j/q) on the block of points whose
prefix is the binary representation of j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import mpmath

from .measures import ZERO, BernoulliParam, cylinder_mass
from .suspension import SuspensionPoint
from .words import Word, block_of, index_to_word, odometer_pow, odometer_step


@dataclass(frozen=True)
class DyadicAngle:
    """Angle 2*pi*p/q in lowest terms; dyadic when q is a power of two."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError("denominator must be >= 1")
        g = math.gcd(self.p, self.q)
        object.__setattr__(self, "p", self.p // g)
        object.__setattr__(self, "q", self.q // g)

    @classmethod
    def from_fraction(cls, x: Fraction) -> "DyadicAngle":
        return cls(x.numerator, x.denominator)

    @property
    def turns(self) -> Fraction:
        return Fraction(self.p, self.q)


def dyadic_membership(tau: DyadicAngle) -> bool:
    """Whether the angle is an integer multiple of 2*pi/2^n for some n."""
    return tau.q & (tau.q - 1) == 0


# 2 - 2*cos(2*pi*r/q) is rational exactly when the reduced denominator of
# r/q is one of these (Niven's theorem)
_CHORD_RATIONAL = {
    1: Fraction(0),
    2: Fraction(4),
    3: Fraction(3),
    4: Fraction(2),
    6: Fraction(1),
}


@dataclass(frozen=True)
class ChordSq:
    """Squared chord |e^{2*pi*i*r/q} - 1|^2 = 2 - 2*cos(2*pi*r/q), kept as a
    residue so the zero test is exact; the value itself is rational only for
    reduced denominators 1, 2, 3, 4, 6."""

    residue: int
    modulus: int

    @property
    def is_zero(self) -> bool:
        return self.residue % self.modulus == 0

    @property
    def exact(self) -> Fraction | None:
        f = Fraction(self.residue, self.modulus)
        return _CHORD_RATIONAL.get(f.denominator)

    def decimal(self, digits: int = 30) -> str:
        if self.exact is not None:
            from .rationals import decimal_str

            return decimal_str(self.exact, digits)
        with mpmath.workdps(digits + 15):
            val = 2 - 2 * mpmath.cos(2 * mpmath.pi * self.residue / self.modulus)
            return mpmath.nstr(val, digits)


def orbit_distance_profile(tau: DyadicAngle, n_lo: int, n_hi: int) -> list[ChordSq]:
    """Squared distances |e^{i*tau*2^n} - 1|^2 for n = n_lo..n_hi, computed
    through the residues 2^n * p mod q.  Dyadic angles reach residue zero
    and stay there; otherwise the residues cycle without vanishing."""
    if n_lo > n_hi:
        raise ValueError("empty range")
    return [
        ChordSq((pow(2, n, tau.q) * tau.p) % tau.q, tau.q)
        for n in range(n_lo, n_hi + 1)
    ]


# ---------------------------------------------------------------------------
# Eigenfunctions of the odometer automorphism and of the flow
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootOfUnityFunction:
    """Block-constant unitary of order q: value exp(-2*pi*i*e_j/q) on the
    block whose depth-n prefix is the binary representation of j."""

    order: int
    exponents: Mapping[int, int]

    def __post_init__(self) -> None:
        if self.order < 1 or self.order & (self.order - 1):
            raise ValueError("order must be a power of two")
        object.__setattr__(
            self,
            "exponents",
            {j: e % self.order for j, e in self.exponents.items()},
        )

    def exponent_at(self, w: Word) -> int:
        """Exponent on the block containing the given prefix."""
        return self.exponents[block_of(w).index]


def eigen_unitary(n: int, k: int) -> RootOfUnityFunction:
    """The unitary whose value on block j is exp(-i*j*tau), tau = 2*pi*k/2^n:
    the sum of the block projections weighted by descending roots of unity."""
    if n < 1:
        raise ValueError("n must be >= 1")
    q = 1 << n
    if not 0 <= k < q:
        raise ValueError(f"k must lie in [0, {q})")
    return RootOfUnityFunction(q, {j: (j * k) % q for j in range(q)})


def verify_sigma_eigen(u: RootOfUnityFunction, n: int, k: int) -> bool:
    """Check, in exponent arithmetic, that composing with the inverse
    odometer multiplies u by e^{i*tau}: the odometer sends block j to block
    j+1, so the composed function carries block j's value from block j-1,
    and the identity requires every exponent to drop by k going one block
    forward, uniformly mod 2^n."""
    q = 1 << n
    if u.order != q:
        raise ValueError("order mismatch")
    return all(
        (u.exponents[(j - 1) % q] - u.exponents[j] + k) % q == 0 for j in range(q)
    )


def suspension_eigen_check(
    n: int,
    k: int,
    s: Fraction,
    sample_points: Iterable[SuspensionPoint],
) -> bool:
    """Verify theta_s(u) = e^{i*tau*s} u pointwise for the flow eigenfunction
    u(x, y) = u0(x) e^{-i*tau*y}, tau = 2*pi*k/2^n.

    All phases involved are rational multiples of a full turn, so both sides
    are compared as exact fractions mod 1: with s + y = m + y', the left
    side reads u at (odometer^m x, y') and the right side multiplies the
    value at (x, y) by e^{-i*tau*s} (the time-reversed form of the
    identity; replacing s by -s gives the stated one).
    """
    u0 = eigen_unitary(n, k)
    q = 1 << n
    s = Fraction(s)
    for p in sample_points:
        total = s + p.height
        m = math.floor(total)
        y_prime = total - m
        j = block_of(p.base).index
        j_moved = odometer_pow(m, p.base)
        # phases in turns: u(x, y) = -(e_j + k*y)/q up to integers
        lhs = -Fraction(u0.exponents[block_of(j_moved.word).index], q) - Fraction(k, q) * y_prime
        rhs = -Fraction(k, q) * s - Fraction(u0.exponents[j], q) - Fraction(k, q) * p.height
        if (lhs - rhs) % 1 != 0:
            return False
    return True


def sample_grid(n: int, count: int = 64) -> list[SuspensionPoint]:
    """Deterministic grid of suspension points: blocks cycle through all
    depth-n prefixes while heights sweep [0, 1)."""
    q = 1 << n
    return [
        SuspensionPoint(index_to_word(n, i % q), Fraction(i, count))
        for i in range(count)
    ]


# ---------------------------------------------------------------------------
# Exact L2 estimates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepFunction:
    """Real rational test function depending on the first `depth` coordinates;
    missing words take the value zero."""

    param: BernoulliParam
    depth: int
    values: Mapping[Word, Fraction]

    def value(self, w: Word) -> Fraction:
        return self.values.get(tuple(w[: self.depth]), ZERO)


def l2_norm_sq(f: StepFunction) -> Fraction:
    """Squared 2-norm with respect to the Bernoulli measure."""
    return sum(
        (v * v * cylinder_mass(f.param, w) for w, v in f.values.items()), ZERO
    )


def apply_sigma_pow(f: StepFunction, k: int) -> StepFunction:
    """The composition f(odometer^{-k} x), exact on the algebra of depth
    max(depth, bitlength of k): the within-prefix borrow digits determine
    the first coordinates of the preimage regardless of tail carries."""
    span = max(f.depth, abs(k).bit_length() + (1 if k < 0 else 0), 1)
    values = {}
    for j in range(1 << span):
        w = index_to_word(span, j)
        pre = odometer_pow(-k, w).word
        v = f.value(pre)
        if v != 0:
            values[w] = v
    return StepFunction(f.param, span, values)


def l2_contraction_check(
    f: StepFunction,
) -> tuple[Fraction, Fraction, bool]:
    """Exact check of ||sigma(f)||_2^2 <= ((1-a)/a) ||f||_2^2.

    The left side is the integral of f^2 against the image measure of each
    cylinder, which is the mass of the stepped word (on carry overflow the
    image set is still the stepped cylinder, since the odometer is a
    bijection of the tail).
    """
    if f.depth < 1:
        raise ValueError("depth must be >= 1")
    a = f.param.a
    lhs = sum(
        (
            v * v * cylinder_mass(f.param, odometer_step(w).word)
            for w, v in f.values.items()
        ),
        ZERO,
    )
    bound = (1 - a) / a * l2_norm_sq(f)
    return lhs, bound, lhs <= bound


def l2_pow2_convergence(f: StepFunction, m: int) -> Fraction:
    """Exact value of ||sigma^{2^m} f - f||_2^2; zero whenever the function
    depends only on the first m coordinates, which the 2^m-th power fixes."""
    if m < 0:
        raise ValueError("m must be >= 0")
    shifted = apply_sigma_pow(f, 1 << m)
    span = max(shifted.depth, f.depth)
    total = ZERO
    for j in range(1 << span):
        w = index_to_word(span, j)
        diff = shifted.value(w) - f.value(w)
        if diff != 0:
            total += diff * diff * cylinder_mass(f.param, w)
    return total


def truncate_function(f: StepFunction, depth: int) -> StepFunction:
    """Conditional expectation onto the first `depth` coordinates: average
    the trailing coordinates against the coin measure."""
    if depth >= f.depth:
        return f
    values: dict[Word, Fraction] = {}
    for w, v in f.values.items():
        head, tail = w[:depth], w[depth:]
        contrib = v * cylinder_mass(f.param, tail)
        values[head] = values.get(head, ZERO) + contrib
    return StepFunction(f.param, depth, {w: v for w, v in values.items() if v != 0})


def truncation_bound_check(f: StepFunction, m: int) -> tuple[Fraction, Fraction, bool]:
    """Exact squared-level check of the two-term estimate
    ||sigma^{2^m} f - f||_2 <= (sqrt((1-a)/a) + 1) ||f - E_m f||_2.

    Squaring gives lhs <= (c+1)*r + 2*sqrt(c)*r with c = (1-a)/a and r the
    squared truncation error; the irrational term is compared by squaring
    once more, so the verdict is exact.
    Returns (lhs squared, squared truncation error, verdict).
    """
    c = (1 - f.param.a) / f.param.a
    lhs = l2_pow2_convergence(f, m)
    g = truncate_function(f, m)
    span = max(f.depth, g.depth)
    r = ZERO
    for j in range(1 << span):
        w = index_to_word(span, j)
        diff = f.value(w) - g.value(w)
        if diff != 0:
            r += diff * diff * cylinder_mass(f.param, w)
    # lhs <= (c+1)*r + 2*r*sqrt(c), decided exactly
    base = (c + 1) * r
    ok = lhs <= base or (lhs - base) ** 2 <= (2 * r) ** 2 * c
    return lhs, r, ok
