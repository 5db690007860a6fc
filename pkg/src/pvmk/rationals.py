"""Exact rational parsing and formatting ("p/q" strings, ints, floats)."""

from __future__ import annotations

from fractions import Fraction

from .errors import InputParseError


def as_fraction(value) -> Fraction:
    """Coerce *value* to an exact Fraction.

    Accepts ints, Fractions, "p/q" or decimal strings, and floats (taken at
    their exact binary value, so dyadic literals like 0.25 stay exact).
    """
    if isinstance(value, bool):
        raise InputParseError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputParseError(f"not a rational: {value!r}") from exc
    raise InputParseError(f"not a rational: {value!r}")


def rational_str(q) -> str:
    """Render as "p/q", denominator kept even when it is 1."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def is_rational_sequence(values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)
