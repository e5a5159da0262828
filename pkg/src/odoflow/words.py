"""Finite-prefix combinatorics for the binary odometer.

Coordinate convention (used everywhere in this package): position 1 is the
least significant coordinate and is stored first, so a depth-n word
(x1, ..., xn) corresponds to the integer j = x1 + x2*2 + ... + xn*2^(n-1).
Adding one with carry to the right is then ordinary binary increment on j.
"""

from __future__ import annotations

from dataclasses import dataclass

Word = tuple[int, ...]


class InvalidWordError(ValueError):
    pass


def check_word(w: Word) -> None:
    if len(w) == 0:
        raise InvalidWordError("empty word")
    if any(b not in (0, 1) for b in w):
        raise InvalidWordError(f"word entries must be 0 or 1: {w!r}")


def word_from_string(s: str) -> Word:
    """Parse a '0'/'1' string, position 1 first ("110" -> (1, 1, 0))."""
    if any(c not in "01" for c in s):
        raise InvalidWordError(f"not a bit string: {s!r}")
    return tuple(int(c) for c in s)


def word_to_string(w: Word) -> str:
    return "".join(str(b) for b in w)


def word_to_int(w: Word) -> int:
    j = 0
    for i, b in enumerate(w):
        j += b << i
    return j


@dataclass(frozen=True)
class BlockIndex:
    """Identifies the cylinder of points whose first `depth` coordinates are
    the binary representation of `index`."""

    depth: int
    index: int

    def __post_init__(self) -> None:
        if not 0 <= self.index < (1 << self.depth):
            raise InvalidWordError(
                f"block index {self.index} out of range for depth {self.depth}"
            )


def index_to_word(n: int, j: int) -> Word:
    if not 0 <= j < (1 << n):
        raise InvalidWordError(f"index {j} out of range for depth {n}")
    return tuple((j >> i) & 1 for i in range(n))


def block_of(w: Word) -> BlockIndex:
    check_word(w)
    return BlockIndex(len(w), word_to_int(w))


@dataclass(frozen=True)
class CarryResult:
    """Image of a length-n prefix under an odometer power.

    `word` is the within-prefix result.  `tail_shift` counts the carries (or,
    negative, borrows) that escaped past position n; the coordinates beyond
    the prefix are acted on by that many further odometer steps.  On the
    all-ones prefix a single step gives word (0,...,0) with tail_shift 1,
    matching the odometer sending (1,1,1,...) to (0,0,0,...).
    """

    word: Word
    tail_shift: int = 0

    @property
    def resolved(self) -> bool:
        return self.tail_shift == 0

    @property
    def overflow(self) -> bool:
        return self.tail_shift != 0


def odometer_step(w: Word) -> CarryResult:
    """One odometer step: flip leading ones to zero, the first zero to one."""
    check_word(w)
    bits = list(w)
    for i, b in enumerate(bits):
        if b == 0:
            bits[i] = 1
            return CarryResult(tuple(bits))
        bits[i] = 0
    return CarryResult(tuple(bits), tail_shift=1)


def odometer_pow(k: int, w: Word) -> CarryResult:
    """k-fold odometer step (negative k: borrow subtraction), via binary
    addition of k to the word's integer value with carry to the right."""
    check_word(w)
    n = len(w)
    shift, j = divmod(word_to_int(w) + k, 1 << n)
    return CarryResult(index_to_word(n, j), tail_shift=shift)


def first_zero_index(w: Word) -> int | None:
    """Position (1-based) of the first zero; None on the all-ones prefix.

    A point belongs to the region K_n exactly when its first zero sits at
    position n; the all-ones prefix is the truncation of the exceptional
    point (1, 1, 1, ...).
    """
    check_word(w)
    for i, b in enumerate(w):
        if b == 0:
            return i + 1
    return None


def all_words(n: int):
    """Iterate all depth-n words in block-index order."""
    for j in range(1 << n):
        yield index_to_word(n, j)
