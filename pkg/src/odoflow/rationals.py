"""Rational parsing/rendering for the I/O boundary.

All computation in this package is exact `fractions.Fraction` arithmetic;
decimal strings are produced only for display and never feed back in.
"""

from __future__ import annotations

from fractions import Fraction


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x: Fraction, digits: int = 12) -> str:
    """Deterministic fixed-point rendering (round half away from zero)."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    num = abs(x.numerator) * 10**digits
    q, r = divmod(num, x.denominator)
    if 2 * r >= x.denominator:
        q += 1
    whole, frac = divmod(q, 10**digits)
    return f"{sign}{whole}.{str(frac).zfill(digits)}"
