"""Monic orthogonal polynomials from moment tables.

Two independent routes produce the three-term recurrence

    p_{n+1}(x) = (x - alpha_n) p_n(x) - beta_n p_{n-1}(x),  p_0 = 1,

from a :class:`~discsemi.functional.MomentTable`:

* :func:`recurrence_from_moments` — quotients of leading Hankel
  determinants of the power-basis moment matrix.  Exact arithmetic
  neutralizes the notorious conditioning of this construction at the
  small degrees used here.
* :func:`chebyshev_from_moments` — the modified Chebyshev algorithm run
  directly on the falling-factorial moments (the falling factorials are
  themselves a monic family with recurrence coefficients â_l = l - shift,
  b̂_l = 0, which is what makes the moment table usable as modified
  moments without conversion).

The two are cross-asserted in the test-suite; orthogonality against the
originating functional is the final oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .combin import stirling_convert
from .errors import InputError, MissingParameter, SingularHankel
from .functional import (
    FunctionalSpec,
    MomentTable,
    functional_of_poly,
    moments,
)
from .polys import Poly
from .scalars import (
    DEFAULT_TOL,
    Scalar,
    exact_div,
    exact_sub,
    is_exact,
    scalar_is_zero,
    scalar_to_json,
    to_mpf,
)

#: Largest supported recurrence length; exact determinants stay tractable
#: and the regression families never need more.
MAX_K = 12


@dataclass(frozen=True)
class Recurrence:
    """Monic three-term recurrence coefficients alpha_0.., beta_0..

    beta_0 is the total mass nu_0 (the usual convention making
    L[p_n^2] = beta_0 beta_1 ... beta_n).
    """

    alpha: tuple
    beta: tuple

    def __len__(self) -> int:
        return len(self.alpha)

    def to_json(self) -> dict:
        return {
            "alpha": [scalar_to_json(c) for c in self.alpha],
            "beta": [scalar_to_json(c) for c in self.beta],
        }

    def polynomials(self, n: int) -> list[Poly]:
        """The monic polynomials p_0..p_n generated by the recurrence."""
        if n > len(self.alpha):
            raise InputError(
                f"the recurrence holds {len(self.alpha)} coefficient pairs; "
                f"cannot build p_{n}"
            )
        polys = [Poly.one()]
        for k in range(n):
            nxt = Poly((-self.alpha[k], 1)) * polys[k]
            if k > 0:
                nxt = nxt - polys[k - 1] * self.beta[k]
            polys.append(nxt)
        for k, p in enumerate(polys):
            assert p.degree == k and scalar_is_zero(p.leading() - 1)
        return polys


def _determinant(matrix: list[list]) -> Scalar:
    """Gaussian elimination determinant, exact when the entries are exact."""
    n = len(matrix)
    if n == 0:
        return 1
    rows = [list(r) for r in matrix]
    numeric = any(not is_exact(v) for row in rows for v in row)
    det = 1
    for col in range(n):
        pivot = None
        if numeric:
            best = None
            for r in range(col, n):
                size = abs(to_mpf(rows[r][col]))
                if best is None or size > best:
                    best, pivot = size, r
            if best == 0:
                return 0
        else:
            for r in range(col, n):
                if not scalar_is_zero(rows[r][col]):
                    pivot = r
                    break
            if pivot is None:
                return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        head = rows[col][col]
        det = det * head
        for r in range(col + 1, n):
            factor = exact_div(rows[r][col], head)
            if scalar_is_zero(factor):
                continue
            rows[r] = [
                exact_sub(rows[r][j], factor * rows[col][j])
                for j in range(n)
            ]
    return det


def _hankel(power_moments, k: int, shifted: bool = False) -> Scalar:
    """det of the k x k moment matrix (m_{i+j}); with ``shifted`` the last
    column is advanced by one (m_{i+k} instead of m_{i+k-1})."""
    if k == 0:
        return 1
    rows = []
    for i in range(k):
        row = [power_moments[i + j] for j in range(k - 1)]
        row.append(power_moments[i + (k if shifted else k - 1)])
        rows.append(row)
    return _determinant(rows)


def _check_length(nu: MomentTable, needed: int, K: int):
    if len(nu.values) < needed:
        raise MissingParameter(
            f"building {K} recurrence coefficients needs moments through "
            f"nu_{needed - 1}, table has {len(nu.values)}"
        )


def _check_cap(K: int):
    if not isinstance(K, int) or isinstance(K, bool) or K < 0:
        raise InputError("the recurrence length K must be a nonnegative integer")
    if K > MAX_K:
        raise InputError(f"the recurrence length K is capped at {MAX_K}")


def recurrence_from_moments(nu: MomentTable, K: int) -> Recurrence:
    """alpha_0..alpha_{K-1}, beta_0..beta_{K-1} via Hankel determinants.

    Checks quasi-definiteness through level K+1 and raises
    ``SingularHankel(n)`` at the first vanishing leading determinant.
    """
    _check_cap(K)
    _check_length(nu, 2 * K + 1, K)
    m = stirling_convert(nu)
    H = [_hankel(m, k) for k in range(K + 2)]  # H[0]=1 .. H[K+1]
    for n in range(K + 1):
        if scalar_is_zero(H[n + 1]):
            raise SingularHankel(n)
    t = [_hankel(m, k, shifted=True) for k in range(K + 1)]
    t[0] = 0
    alpha = []
    beta = []
    for n in range(K):
        alpha.append(
            exact_sub(exact_div(t[n + 1], H[n + 1]), exact_div(t[n], H[n]))
        )
        if n == 0:
            beta.append(m[0])
        else:
            beta.append(
                exact_div(H[n + 1] * H[n - 1], H[n] * H[n])
            )
    return Recurrence(tuple(alpha), tuple(beta))


def chebyshev_from_moments(nu: MomentTable, K: int) -> Recurrence:
    """The same coefficients via the modified Chebyshev algorithm.

    The falling-factorial family phi_l (recentred by the table's basis
    shift) serves as the reference system, so the table's entries are the
    modified moments as-is.
    """
    _check_cap(K)
    if K == 0:
        _check_length(nu, 1, K)
        return Recurrence((), ())
    _check_length(nu, 2 * K, K)
    shift = nu.basis_shift

    def ahat(l: int):
        return l - shift

    if scalar_is_zero(nu.values[0]):
        raise SingularHankel(0)
    alpha = [ahat(0) + exact_div(nu.values[1], nu.values[0])]
    beta = [nu.values[0]]
    sigma_prev: dict[int, Scalar] = {}
    sigma_curr = {l: nu.values[l] for l in range(2 * K)}
    for k in range(1, K):
        sigma_next: dict[int, Scalar] = {}
        for l in range(k, 2 * K - k):
            val = exact_sub(
                sigma_curr[l + 1],
                (exact_sub(alpha[k - 1], ahat(l))) * sigma_curr[l],
            )
            if k >= 2:
                val = exact_sub(val, beta[k - 1] * sigma_prev[l])
            sigma_next[l] = val
        if scalar_is_zero(sigma_next[k]):
            raise SingularHankel(k)
        alpha.append(
            ahat(k)
            + exact_sub(
                exact_div(sigma_next[k + 1], sigma_next[k]),
                exact_div(sigma_curr[k], sigma_curr[k - 1]),
            )
        )
        beta.append(exact_div(sigma_next[k], sigma_curr[k - 1]))
        sigma_prev, sigma_curr = sigma_curr, sigma_next
    return Recurrence(tuple(alpha), tuple(beta))


def orthogonality_check(
    spec: FunctionalSpec, rec: Recurrence, K: int, tol: Scalar = DEFAULT_TOL
) -> dict:
    """Gram matrix L[p_i p_j] for i, j <= K against the spec's functional.

    PASS iff every off-diagonal entry is at most tol times the largest
    diagonal entry (exactly zero when the arithmetic is exact) and no
    diagonal entry vanishes.
    """
    polys = rec.polynomials(K)
    table = moments(spec, 2 * K, tol)
    gram = [
        [functional_of_poly(table, polys[i] * polys[j]) for j in range(K + 1)]
        for i in range(K + 1)
    ]
    diagonal = [gram[i][i] for i in range(K + 1)]
    scale = max(abs(to_mpf(d)) for d in diagonal)
    max_off = 0
    for i in range(K + 1):
        for j in range(K + 1):
            if i != j:
                max_off = max(max_off, abs(to_mpf(gram[i][j])))
    ok = (
        all(not scalar_is_zero(d) for d in diagonal)
        and max_off <= to_mpf(tol) * scale
    )
    return {
        "pass": bool(ok),
        "K": K,
        "max_offdiagonal": max_off,
        "diagonal": diagonal,
    }
