"""Exact rational helpers: "p/q" serialization and gmpy2 bridging."""
from fractions import Fraction

from gmpy2 import mpq


def as_fraction(value):
    """Coerce ints, Fractions, mpq and "p/q" strings to ``Fraction``.

    Floats are rejected: every quantity in this package is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if type(value).__name__ == "mpq":
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass an int, Fraction or 'p/q' string")
    raise TypeError(f"cannot interpret {value!r} as a rational")


def parse_rational(text):
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"rational strings must be 'p/q' or integers, got {text!r}")
    return Fraction(text)


def format_rational(value):
    """Serialize as "p/q" (always with a denominator, reduced, q > 0)."""
    f = as_fraction(value)
    return f"{f.numerator}/{f.denominator}"


def pretty_rational(value):
    f = as_fraction(value)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def to_mpq(value):
    f = as_fraction(value)
    return mpq(f.numerator, f.denominator)


def mpq_to_fraction(q):
    return Fraction(int(q.numerator), int(q.denominator))
