"""Scalar utilities shared across the package.

Exact scalars are ``fractions.Fraction`` (or plain ``int``); floating
scalars are ``mpmath.mpf`` at a configurable working precision.  All
user-facing parameters are exact rationals, so floating values only appear
when an infinite series has to be summed numerically.  mpmath interoperates
natively with ``Fraction`` (products and sums promote to ``mpf`` at the
current precision), which lets the same code paths run exactly on rational
data and numerically otherwise.

Rationals are rendered as ``p/q`` strings (or bare integers) in JSON and
tables; floats are rendered with the full working precision.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

import mpmath as mp

from .errors import InputError

#: Default decimal working precision for numeric evaluation.
DEFAULT_DPS = 50

#: Default tolerance used when deciding that a numerically summed series
#: has converged.
DEFAULT_TOL = Fraction(1, 10**30)

Scalar = Union[int, Fraction, mp.mpf]


def parse_rational(value: object) -> Fraction:
    """Parse an exact rational from a string, int, float, or Fraction.

    Strings may look like ``"3"``, ``"-1/2"``, or ``"0.75"``.  Floats are
    parsed via their shortest decimal representation, so the JSON literal
    ``0.1`` becomes exactly ``1/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"expected a rational number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        value = repr(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse {value!r} as a rational: {exc}") from None
    raise InputError(f"cannot parse {value!r} as a rational")


def format_rational(q: Fraction | int) -> str:
    """Render a rational as ``p/q``, or ``p`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def scalar_to_json(x: Scalar) -> object:
    """Convert a scalar to a JSON-friendly value.

    Integers stay integers, other rationals become ``p/q`` strings, and
    floating values become decimal strings at the working precision.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return format_rational(x)
    return mp.nstr(mp.mpf(x), mp.mp.dps, strip_zeros=False)


def to_mpf(x: Scalar) -> mp.mpf:
    """Convert an exact or floating scalar to ``mpf`` at current precision."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def is_exact(x: Scalar) -> bool:
    """True when ``x`` is an exact rational (int or Fraction)."""
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def is_integer(x: Scalar) -> bool:
    """True when ``x`` is an exact integer value."""
    if isinstance(x, int) and not isinstance(x, bool):
        return True
    return isinstance(x, Fraction) and x.denominator == 1


def is_nonneg_integer(x: Scalar) -> bool:
    """True when ``x`` is an exact integer >= 0."""
    return is_integer(x) and x >= 0


def is_nonpos_integer(x: Scalar) -> bool:
    """True when ``x`` is an exact integer <= 0."""
    return is_integer(x) and x <= 0


def exact_div(x, y):
    """Division that keeps exact operands exact.

    Plain ``/`` between two ints produces a float; this routes exact inputs
    through Fraction arithmetic instead, and leaves other types (mpf,
    symbolic) to their own division.  A Fraction numerator over an mpf
    denominator needs an explicit promotion (Fraction refuses the mpf and
    mpf has no reflected division for Fraction).
    """
    if is_exact(x) and is_exact(y):
        return Fraction(x) / Fraction(y)
    try:
        return x / y
    except TypeError:
        return to_mpf(x) / y


def exact_sub(x, y):
    """Subtraction tolerant of a Fraction left operand and an mpf right one.

    mpf defines reflected addition and multiplication for Fraction but not
    reflected subtraction, so ``Fraction - mpf`` raises; rewriting as an
    addition of the negation sidesteps that without losing exactness when
    both sides are exact.
    """
    try:
        return x - y
    except TypeError:
        return x + (-y)


def scalar_is_zero(x: object) -> bool:
    """Zero test that also understands symbolic coefficients.

    Works for int/Fraction/mpf and for any object exposing ``is_zero()``.
    """
    probe = getattr(x, "is_zero", None)
    if callable(probe):
        return bool(probe())
    return x == 0
