"""Recurrence construction from moment tables: the two routes, closed-form
coefficient checks, orthogonality against the originating functional, and
degenerate-table behavior."""

from fractions import Fraction

import pytest
from mpmath import mp

from discsemi.errors import InputError, MissingParameter, SingularHankel
from discsemi.functional import FunctionalSpec, Mass, MomentTable, moments
from discsemi.orthopoly import (
    MAX_K,
    Recurrence,
    chebyshev_from_moments,
    orthogonality_check,
    recurrence_from_moments,
)
from discsemi.scalars import to_mpf
from discsemi.transforms import (
    apply_christoffel,
    apply_geronimus,
    apply_symmetrization,
    apply_uvarov,
)

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


def charlier():
    return FunctionalSpec(a=(), b=(), z=HALF)


def krawtchouk(N=4):
    return FunctionalSpec(a=(-N,), b=(), z=HALF)


def hahn():
    return FunctionalSpec(a=(THIRD, -4), b=(HALF,), z=1)


def max_err(pairs):
    return max(abs(to_mpf(x) - to_mpf(y)) for x, y in pairs)


# -- closed-form coefficients -------------------------------------------------


def test_poisson_type_weight_closed_form():
    with mp.workdps(50):
        z = HALF
        nu = moments(charlier(), 12)
        rec = recurrence_from_moments(nu, 6)
        assert max_err((rec.alpha[n], n + z) for n in range(6)) < 1e-24
        assert max_err((rec.beta[n], n * z) for n in range(1, 6)) < 1e-24
        assert abs(to_mpf(rec.beta[0]) - to_mpf(nu.values[0])) == 0


def test_negative_binomial_weight_closed_form():
    with mp.workdps(50):
        a, z = THIRD, HALF
        nu = moments(FunctionalSpec(a=(a,), b=(), z=z), 12)
        rec = recurrence_from_moments(nu, 6)
        expected_alpha = [(n + (n + a) * z) / (1 - z) for n in range(6)]
        expected_beta = [n * (n + a - 1) * z / (1 - z) ** 2 for n in range(6)]
        assert max_err(zip(rec.alpha, expected_alpha)) < 1e-24
        assert max_err(zip(rec.beta[1:], expected_beta[1:])) < 1e-24


def test_binomial_weight_exact_closed_form():
    # Terminating numerator parameter a = -N specializes the
    # negative-binomial formulas; everything stays rational.
    N, z = 4, HALF
    nu = moments(krawtchouk(N), 8)
    rec = recurrence_from_moments(nu, 4)
    assert rec.alpha == tuple(
        Fraction(n + (n - N) * z, 1 - z) for n in range(4)
    )
    assert rec.beta[0] == Fraction(1, 16)
    assert rec.beta[1:] == tuple(
        Fraction(n * (n - N - 1) * z, (1 - z) ** 2) for n in range(1, 4)
    )


# -- the two routes agree -----------------------------------------------------


def test_routes_agree_exactly_on_rational_tables():
    for spec, K in [(krawtchouk(), 4), (hahn(), 4)]:
        nu = moments(spec, 2 * K)
        assert recurrence_from_moments(nu, K) == chebyshev_from_moments(nu, K)


def test_routes_agree_numerically():
    with mp.workdps(50):
        nu = moments(charlier(), 12)
        r1 = recurrence_from_moments(nu, 6)
        r2 = chebyshev_from_moments(nu, 6)
        assert max_err(zip(r1.alpha + r1.beta, r2.alpha + r2.beta)) < 1e-30


def test_routes_agree_on_shifted_basis():
    base = FunctionalSpec(a=(THIRD, -4), b=(), z=HALF)
    out = apply_symmetrization(base, 2)
    nu = moments(out, 8)
    assert nu.basis_shift == 2
    r1 = recurrence_from_moments(nu, 4)
    r2 = chebyshev_from_moments(nu, 4)
    assert r1 == r2


# -- symmetric window => alpha identically zero -------------------------------


def test_symmetrized_weight_has_zero_alpha():
    out = apply_symmetrization(charlier(), 2)
    nu = moments(out, 8)
    rec = recurrence_from_moments(nu, 4)
    assert all(a == 0 for a in rec.alpha)
    assert all(not b == 0 for b in rec.beta)
    report = orthogonality_check(out, rec, 4)
    assert report["pass"] and report["max_offdiagonal"] == 0


# -- orthogonality checks -----------------------------------------------------


def test_orthogonality_exact_zeros_terminating_families():
    for spec, K in [(krawtchouk(), 3), (hahn(), 4)]:
        nu = moments(spec, 2 * K)
        rec = recurrence_from_moments(nu, K)
        report = orthogonality_check(spec, rec, K)
        assert report["pass"]
        assert report["max_offdiagonal"] == 0
        assert len(report["diagonal"]) == K + 1
        assert all(d != 0 for d in report["diagonal"])


def test_orthogonality_numeric_infinite_weight():
    with mp.workdps(50):
        spec = charlier()
        rec = recurrence_from_moments(moments(spec, 12), 6)
        report = orthogonality_check(spec, rec, 5)
        assert report["pass"]
        assert report["max_offdiagonal"] < 1e-30


def test_orthogonality_k_zero_trivially_passes():
    spec = krawtchouk()
    rec = recurrence_from_moments(moments(spec, 1), 0)
    assert rec == Recurrence((), ())
    assert orthogonality_check(spec, rec, 0)["pass"]


def test_orthogonality_detects_corrupted_coefficients():
    spec = krawtchouk()
    rec = recurrence_from_moments(moments(spec, 8), 4)
    bad = Recurrence(
        rec.alpha[:1] + (rec.alpha[1] + 1,) + rec.alpha[2:], rec.beta
    )
    assert not orthogonality_check(spec, bad, 3)["pass"]


def test_orthogonality_with_point_mass_spec():
    spec = apply_uvarov(krawtchouk(), Fraction(-3, 2), 1)
    nu = moments(spec, 8)
    rec = recurrence_from_moments(nu, 4)
    report = orthogonality_check(spec, rec, 3)
    assert report["pass"] and report["max_offdiagonal"] == 0


# -- degenerate tables --------------------------------------------------------


def test_unit_mass_table_is_singular_at_level_one():
    unit = MomentTable((1, 0, 0, 0, 0))
    with pytest.raises(SingularHankel) as info:
        recurrence_from_moments(unit, 2)
    assert info.value.index == 1
    with pytest.raises(SingularHankel) as info:
        chebyshev_from_moments(unit, 2)
    assert info.value.index == 1


def test_five_point_support_exhausts_at_level_five():
    # A terminating weight on {0..4} is quasi-definite only through
    # degree 4; the level-(K+1) precondition catches K = 5.
    nu = moments(krawtchouk(4), 10)
    with pytest.raises(SingularHankel) as info:
        recurrence_from_moments(nu, 5)
    assert info.value.index == 5
    assert len(recurrence_from_moments(nu, 4)) == 4


def test_zero_total_mass_is_singular_at_level_zero():
    table = MomentTable((0, 1, 2, 3))
    with pytest.raises(SingularHankel) as info:
        recurrence_from_moments(table, 1)
    assert info.value.index == 0
    with pytest.raises(SingularHankel):
        chebyshev_from_moments(table, 1)


# -- invariance under equivalent constructions --------------------------------


def test_equivalent_specs_produce_identical_recurrences():
    spec = hahn()
    omega = Fraction(-3, 2)
    base = recurrence_from_moments(moments(spec, 8), 4)

    with_zero_mass = apply_uvarov(spec, omega, 0)
    assert recurrence_from_moments(moments(with_zero_mass, 8), 4) == base

    divided, _ = apply_geronimus(spec, omega, 1)
    restored = apply_christoffel(divided, omega)
    assert recurrence_from_moments(moments(restored, 8), 4) == base


def test_divided_spec_table_matches_its_own_moments():
    spec = krawtchouk(3)
    divided, table = apply_geronimus(spec, Fraction(-5, 2), 1)
    K = 4
    r_from_table = recurrence_from_moments(
        MomentTable(table.values[: 2 * K + 1], table.basis_shift), K
    )
    r_from_spec = recurrence_from_moments(moments(divided, 2 * K), K)
    assert r_from_table == r_from_spec
    report = orthogonality_check(divided, r_from_table, K)
    assert report["pass"] and report["max_offdiagonal"] == 0


# -- interface ----------------------------------------------------------------


def test_recurrence_json_uses_rational_strings():
    rec = recurrence_from_moments(moments(krawtchouk(), 4), 2)
    body = rec.to_json()
    assert set(body) == {"alpha", "beta"}
    assert body["beta"][0] == "1/16"
    assert all(isinstance(c, (str, int)) for c in body["alpha"] + body["beta"])


def test_polynomials_are_monic_with_correct_degrees():
    rec = recurrence_from_moments(moments(hahn(), 8), 4)
    polys = rec.polynomials(4)
    for n, p in enumerate(polys):
        assert p.degree == n
        assert p.leading() == 1
    with pytest.raises(InputError):
        rec.polynomials(5)


def test_length_cap_and_validation():
    nu = moments(krawtchouk(), 8)
    with pytest.raises(InputError):
        recurrence_from_moments(nu, MAX_K + 1)
    with pytest.raises(InputError):
        chebyshev_from_moments(nu, -1)
    with pytest.raises(MissingParameter):
        recurrence_from_moments(nu, 5)
    with pytest.raises(MissingParameter):
        chebyshev_from_moments(MomentTable((1,)), 1)


def test_mass_only_spec_recurrence():
    # Two point masses alone form a valid discrete functional; its monic
    # orthogonal polynomials stop at degree 2 (which annihilates both
    # points), so level 2 is singular.
    spec = FunctionalSpec(
        a=(),
        b=(),
        z=1,
        scale=0,
        masses=(Mass(Fraction(-1, 2), 1), Mass(Fraction(3, 2), 1)),
    )
    nu = moments(spec, 4)
    rec = recurrence_from_moments(nu, 1)
    assert rec.alpha[0] == HALF  # midpoint of the two masses
    with pytest.raises(SingularHankel) as info:
        recurrence_from_moments(nu, 2)
    assert info.value.index == 2
