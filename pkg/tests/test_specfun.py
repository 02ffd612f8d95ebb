import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zscrew import specfun as sf
from zscrew.errors import DomainError, TruncationError

G0 = sf.EULER_GAMMA


def test_constants_rederive():
    sf.validate_constants()


def test_digamma_values():
    assert sf.digamma(1.0) == pytest.approx(-G0, abs=1e-13)
    assert sf.digamma(0.25) == pytest.approx(
        -G0 - math.pi / 2 - 3 * math.log(2), abs=1e-13)
    assert sf.digamma(2.0) == pytest.approx(1 - G0, abs=1e-13)


def test_digamma_domain():
    with pytest.raises(DomainError):
        sf.digamma(0.0)
    with pytest.raises(DomainError):
        sf.digamma(-3.5)


@given(st.floats(min_value=1e-3, max_value=49.0))
@settings(max_examples=300, deadline=None)
def test_digamma_recurrence(x):
    assert sf._digamma_any(x + 1) - sf._digamma_any(x) == pytest.approx(
        1.0 / x, rel=1e-11, abs=1e-12)


def test_trigamma_values():
    assert sf.trigamma(1.0) == pytest.approx(math.pi**2 / 6, abs=1e-12)
    assert sf.trigamma(0.5) == pytest.approx(math.pi**2 / 2, abs=1e-12)
    assert sf.trigamma(0.25) == pytest.approx(
        math.pi**2 + 8 * sf.CATALAN, abs=1e-11)
    with pytest.raises(DomainError):
        sf.trigamma(-1.0)


def test_trigamma_reflection():
    # psi'(x) + psi'(1-x) = pi^2 / sin^2(pi x) at x = 1/4
    assert sf.trigamma(0.25) + sf.trigamma(0.75) == pytest.approx(
        2 * math.pi**2, abs=1e-10)


def test_lerch_endpoints():
    assert sf.lerch_phi2(0.0, 0.25) == pytest.approx(16.0, abs=1e-14)
    assert sf.lerch_phi2(1.0, 0.25) == pytest.approx(sf.C_QUARTER, abs=1e-12)


def test_lerch_brute_force_oracle():
    z = math.exp(-2)
    n = np.arange(1_000_000, dtype=np.float64)
    brute = float(np.sum(z**n / (n + 0.25) ** 2))
    assert sf.lerch_phi2(z, 0.25) == pytest.approx(brute, abs=1e-12)


@given(st.floats(min_value=0.0, max_value=0.999),
       st.floats(min_value=0.0, max_value=0.999))
@settings(max_examples=200, deadline=None)
def test_lerch_monotone_in_z(z1, z2):
    lo, hi = sorted((z1, z2))
    a = 0.25
    assert sf.lerch_phi2(lo, a) <= sf.lerch_phi2(hi, a) + 1e-12
    assert sf.lerch_phi2(hi, a) <= sf.lerch_phi2(1.0, a) + 1e-12


def test_lerch_domain_and_truncation():
    with pytest.raises(DomainError):
        sf.lerch_phi2(1.5, 0.25)
    with pytest.raises(DomainError):
        sf.lerch_phi2(0.5, -1.0)
    tight = sf.SpecFunAccuracy(abs_tol=1e-13, max_terms=5)
    with pytest.raises(TruncationError):
        sf.lerch_phi2(0.9, 0.25, tight)


def test_catalan_bracketing():
    # alternating partial sums bracket the limit
    s0 = 1.0
    s1 = 1.0 - 1.0 / 9
    assert s1 < sf.catalan() < s0
    # Euler-accelerated alternating series as an independent oracle
    import mpmath as mp

    acc = float(mp.nsum(lambda n: (-1) ** n / (2 * n + 1) ** 2, [0, mp.inf],
                        method="a"))
    assert sf.catalan() == pytest.approx(acc, abs=1e-13)


def test_hurwitz_zeta_nonpos_exact():
    assert sf.hurwitz_zeta_nonpos(2) == pytest.approx(0.25, abs=1e-15)
    # B_2(x) = x^2 - x + 1/6, B_3(x) = x^3 - 3x^2/2 + x/2 at x = 1/4
    b2 = Fraction(1, 16) - Fraction(1, 4) + Fraction(1, 6)
    assert Fraction(-b2, 2) == Fraction(1, 96)
    assert sf.hurwitz_zeta_nonpos(3) == pytest.approx(float(1 / Fraction(96)),
                                                      abs=1e-16)
    b3 = (Fraction(1, 64) - Fraction(3, 2) * Fraction(1, 16)
          + Fraction(1, 2) * Fraction(1, 4))
    assert Fraction(-b3, 3) == Fraction(-1, 64)
    assert sf.hurwitz_zeta_nonpos(4) == pytest.approx(-1 / 64, abs=1e-16)
    # independent route through the analytic continuation
    import mpmath as mp

    for k in (2, 3, 4, 5, 6, 9):
        assert sf.hurwitz_zeta_nonpos(k) == pytest.approx(
            float(mp.zeta(2 - k, mp.mpf(1) / 4)), abs=1e-14)
    with pytest.raises(DomainError):
        sf.hurwitz_zeta_nonpos(1)


def test_bernoulli_poly_recurrence():
    # B_n(x+1) - B_n(x) = n x^{n-1}
    for n in (2, 3, 5, 8):
        x = Fraction(3, 7)
        lhs = sf.bernoulli_poly(n, x + 1) - sf.bernoulli_poly(n, x)
        assert lhs == n * x ** (n - 1)


def test_smallt_expansion_vs_direct():
    for t in np.linspace(0.004, 0.1, 25):
        direct = sf._archimedean_g(t)[0]
        assert sf.g_infty_smallt(float(t), 30) == pytest.approx(
            direct, abs=1e-10)


def test_smallt_leading_behavior():
    # ratio to 2 t log(1/t) approaches 1 like 1 + A/(2 log(1/t))
    prev = math.inf
    for t in (1e-3, 1e-4, 1e-5):
        ratio = sf.g_infty_smallt(t, 30) / (2 * t * math.log(1 / t))
        expected = 1 + sf.A_SMALLT / (2 * math.log(1 / t))
        assert ratio == pytest.approx(expected, abs=5e-3)
        assert ratio < prev
        prev = ratio
    assert sf.A_SMALLT == pytest.approx(math.pi + 4 * math.log(2) + 2, abs=1e-15)


def test_smallt_domain():
    with pytest.raises(DomainError):
        sf.g_infty_smallt(1.5, 10)
    with pytest.raises(DomainError):
        sf.g_infty_smallt(0.05, 1)
    with pytest.raises(TruncationError):
        sf.g_infty_smallt(0.9999 - 0.5, 2, sf.SpecFunAccuracy(abs_tol=1e-14))


def test_complex_digamma_against_mpmath():
    import mpmath as mp

    pts = [0.25 + 0.5j, 0.25 + 50j, 0.25 - 7.3j, 2.0 + 0.1j, 0.25 + 1000j]
    ours = sf.digamma_complex(np.array(pts))
    for p, v in zip(pts, ours):
        ref = complex(mp.digamma(p))
        assert abs(v - ref) < 1e-12 * (1 + abs(ref))


def test_complex_trigamma_against_mpmath():
    import mpmath as mp

    pts = [0.25 + 0.5j, 0.25 + 31.4j, 0.25 - 2j]
    ours = sf.trigamma_complex(np.array(pts))
    for p, v in zip(pts, ours):
        ref = complex(mp.polygamma(1, p))
        assert abs(v - ref) < 1e-12 * (1 + abs(ref))


def test_accuracy_type_invariants():
    with pytest.raises(DomainError):
        sf.SpecFunAccuracy(abs_tol=0.0)
    with pytest.raises(DomainError):
        sf.SpecFunAccuracy(max_terms=0)
