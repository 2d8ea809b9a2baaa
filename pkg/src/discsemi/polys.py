"""Dense univariate polynomials with generic coefficients.

A :class:`Poly` stores coefficients from lowest to highest degree in a
trimmed tuple, so the zero polynomial is the empty tuple and has degree -1.
Coefficients may be ints, Fractions, mpmath floats, or
:class:`~discsemi.params.ParamPoly` symbols -- anything closed under
addition and multiplication with itself and with small integers.  This lets
the same polynomial code run exactly on rational data, numerically on
floats, and symbolically on named parameters.

Evaluation uses Horner's scheme and accepts either a scalar or another
Poly, so composition (in particular the argument shift ``p(x + h)``) needs
no separate implementation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .scalars import scalar_is_zero


class Poly:
    """Immutable dense univariate polynomial, coefficients low-to-high."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        coeffs = list(coeffs)
        while coeffs and scalar_is_zero(coeffs[-1]):
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable, leading=1) -> "Poly":
        """The polynomial ``leading * prod_r (x - r)``."""
        result = cls((leading,))
        for r in roots:
            result = result * cls((-r, 1))
        return result

    # -- basic views ----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree of the polynomial; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def coeff(self, i: int):
        """Coefficient of ``x**i`` (0 beyond the stored degree)."""
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    # -- arithmetic -----------------------------------------------------------

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, bool):
            return None
        return cls((other,))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(
            [self.coeff(i) + o.coeff(i) for i in range(n)]
        )

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self.coeffs or not other.coeffs:
                return Poly()
            out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return Poly(out)
        if isinstance(other, bool):
            return NotImplemented
        return Poly([c * other for c in self.coeffs])

    def __rmul__(self, other):
        if isinstance(other, bool):
            return NotImplemented
        return Poly([other * c for c in self.coeffs])

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("Poly powers must be nonnegative integers")
        result = Poly.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(self.coeffs) != len(o.coeffs):
            return False
        return all(
            scalar_is_zero(a - b) for a, b in zip(self.coeffs, o.coeffs)
        )

    def __hash__(self):
        return hash(self.coeffs)

    # -- evaluation and composition --------------------------------------------

    def __call__(self, value):
        """Evaluate at a scalar, or compose when ``value`` is a Poly."""
        result = Poly.zero() if isinstance(value, Poly) else 0
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    def shift(self, h) -> "Poly":
        """The polynomial ``p(x + h)``."""
        return self(Poly((h, 1)))

    def deflate(self, root) -> "Poly":
        """Exact division by ``(x - root)``.

        Raises :class:`ArithmeticError` when ``root`` is not a root, so
        callers can turn an inexact division into a domain-specific error.
        """
        if self.is_zero():
            return Poly()
        quotient = [0] * self.degree
        carry = 0
        for i in range(self.degree, 0, -1):
            carry = self.coeff(i) + root * carry
            quotient[i - 1] = carry
        remainder = self.coeff(0) + root * carry
        if not scalar_is_zero(remainder):
            raise ArithmeticError("deflation remainder is nonzero")
        return Poly(quotient)

    def map_coeffs(self, fn) -> "Poly":
        return Poly([fn(c) for c in self.coeffs])

    # -- rendering --------------------------------------------------------------

    def to_str(self, variable: str = "x") -> str:
        if not self.coeffs:
            return "0"
        pieces = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if scalar_is_zero(c):
                continue
            if i == 0:
                body = f"({c})" if _needs_parens(c) else f"{c}"
            else:
                xpart = variable if i == 1 else f"{variable}^{i}"
                if _is_one(c):
                    body = xpart
                elif _is_minus_one(c):
                    body = f"-{xpart}"
                else:
                    cstr = f"({c})" if _needs_parens(c) else f"{c}"
                    body = f"{cstr}*{xpart}"
            if pieces and not body.startswith("-"):
                pieces.append("+" + body)
            else:
                pieces.append(body)
        return "".join(pieces)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()})"


def _needs_parens(c) -> bool:
    text = str(c)
    return ("+" in text[1:]) or ("-" in text[1:])


def _is_one(c) -> bool:
    try:
        return scalar_is_zero(c - 1)
    except TypeError:
        return False


def _is_minus_one(c) -> bool:
    try:
        return scalar_is_zero(c + 1)
    except TypeError:
        return False


def poly_from_root_offsets(offsets: Iterable, leading=1) -> Poly:
    """The polynomial ``leading * prod_i (x + o_i)`` (roots at ``-o_i``).

    This is the natural builder for Pearson data, where parameter lists
    enter as ``prod_i (x + a_i)``.
    """
    result = Poly((leading,))
    for o in offsets:
        result = result * Poly((o, 1))
    return result


class BiPoly:
    """Polynomial in an outer variable ``t`` with :class:`Poly`-in-``x``
    coefficients, i.e. an element of (coeffs[x])[t].

    The one nontrivial operation is exact synthetic division by ``t - x``,
    which succeeds (zero remainder) exactly when substituting ``t := x``
    annihilates the bipolynomial.  That is how difference quotients like
    ``(p(t) - p(x)) / (t - x)`` are computed as explicit coefficient rows.
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Poly] = ()):
        rows = [r if isinstance(r, Poly) else Poly((r,)) for r in rows]
        while rows and rows[-1].is_zero():
            rows.pop()
        self.rows = tuple(rows)

    @classmethod
    def from_outer(cls, p: Poly) -> "BiPoly":
        """Lift a polynomial in ``t`` (constant in ``x``)."""
        return cls([Poly((c,)) for c in p.coeffs])

    @classmethod
    def from_inner(cls, p: Poly) -> "BiPoly":
        """Lift a polynomial in ``x`` (constant in ``t``)."""
        return cls([p])

    @property
    def degree(self) -> int:
        return len(self.rows) - 1

    def coeff(self, j: int) -> Poly:
        if 0 <= j < len(self.rows):
            return self.rows[j]
        return Poly()

    def __add__(self, other: "BiPoly") -> "BiPoly":
        n = max(len(self.rows), len(other.rows))
        return BiPoly([self.coeff(j) + other.coeff(j) for j in range(n)])

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        n = max(len(self.rows), len(other.rows))
        return BiPoly([self.coeff(j) - other.coeff(j) for j in range(n)])

    def __neg__(self) -> "BiPoly":
        return BiPoly([-r for r in self.rows])

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.rows)

    def evaluate(self, t_value, x_value):
        """Evaluate at concrete (t, x)."""
        result = 0
        for row in reversed(self.rows):
            result = result * t_value + row(x_value)
        return result

    def mul_outer(self, p: Poly) -> "BiPoly":
        """Multiply by a polynomial in ``t``."""
        if self.is_zero() or p.is_zero():
            return BiPoly()
        out = [Poly() for _ in range(len(self.rows) + p.degree)]
        for j, row in enumerate(self.rows):
            for i, c in enumerate(p.coeffs):
                out[i + j] = out[i + j] + row * c
        return BiPoly(out)

    def mul_inner(self, p: Poly) -> "BiPoly":
        """Multiply by a polynomial in ``x``."""
        return BiPoly([row * p for row in self.rows])

    def divide_t_minus_x(self) -> tuple["BiPoly", Poly]:
        """Exact synthetic division by ``t - x``.

        Returns ``(quotient, remainder)`` with
        ``self == (t - x) * quotient + remainder`` and the remainder a
        polynomial in ``x`` alone.  The division is exact (zero remainder)
        iff substituting ``t := x`` yields the zero polynomial.
        """
        x = Poly.x()
        quotient: list[Poly] = [Poly()] * max(len(self.rows) - 1, 0)
        carry = Poly()
        for j in range(len(self.rows) - 1, 0, -1):
            carry = self.coeff(j) + x * carry
            quotient[j - 1] = carry
        remainder = self.coeff(0) + x * carry if self.rows else Poly()
        return BiPoly(quotient), remainder

    def __repr__(self):
        body = ", ".join(f"t^{j}: {row.to_str('x')}" for j, row in enumerate(self.rows))
        return f"BiPoly({body or '0'})"


def falling_coeffs(p: Poly) -> list:
    """Coefficients of ``p`` in the falling-factorial basis.

    Returns ``c_0 .. c_deg`` with ``p(x) = sum_n c_n * x(x-1)...(x-n+1)``,
    using the Stirling-number change of basis on each power.
    """
    from .combin import stirling2

    if p.is_zero():
        return []
    out = [0] * (p.degree + 1)
    for k, ck in enumerate(p.coeffs):
        for n in range(k + 1):
            s = stirling2(k, n)
            if s:
                out[n] = out[n] + ck * s
    return out


def difference_quotient_rows(p: Poly) -> list[Poly]:
    """Coefficient rows of the difference quotient of ``p``.

    Returns ``D_0 .. D_{deg-1}`` (polynomials in ``x``) with

        (p(t) - p(x)) / (t - x)  ==  sum_j t^j * D_j(x),

    computed by exact synthetic division.  The zero and constant polynomials
    give an empty list.
    """
    rows = [Poly((c,)) for c in p.coeffs]
    if rows:
        rows[0] = rows[0] - p
    quotient, remainder = BiPoly(rows).divide_t_minus_x()
    if not remainder.is_zero():
        raise ArithmeticError("difference quotient division left a remainder")
    return [quotient.coeff(j) for j in range(max(p.degree, 0))]
