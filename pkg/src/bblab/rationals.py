"""Helpers for exact rational values and their "p/q" string form.

Every number that crosses a file-format boundary is a string "p" or "p/q";
in memory everything is a ``fractions.Fraction`` (or a plain int where the
value is known integral, e.g. disjunction coefficients).
"""

from fractions import Fraction
from math import gcd


def rat(value) -> Fraction:
    """Parse a rational from an int, Fraction, or a "p/q" / "p" string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not a rational: {value!r}")


def rat_str(value) -> str:
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def rat_vector(values):
    return tuple(rat(v) for v in values)


def vector_str(values):
    return [rat_str(v) for v in values]


def dot(a, b):
    if len(a) != len(b):
        raise ValueError("dot: length mismatch")
    total = Fraction(0)
    for x, y in zip(a, b):
        total += x * y
    return total


def clear_denominators(values):
    """Scale a rational vector to coprime integers; returns (ints, scale).

    ``scale`` is the positive rational with ints == [v * scale for v in values].
    """
    fracs = [Fraction(v) for v in values]
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in fracs]
    g = 0
    for k in ints:
        g = gcd(g, k)
    if g > 1:
        ints = [k // g for k in ints]
        return ints, Fraction(lcm, g)
    return ints, Fraction(lcm)
