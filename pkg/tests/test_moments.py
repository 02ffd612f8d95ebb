import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zscrew import mangoldt as mg
from zscrew import moments as mo
from zscrew import zerotable as zt
from zscrew.errors import ConditioningError, DomainError

LAMBDA1 = 0.02309570896612103381


def test_transform_rows_low_order():
    tm = mo.transform_matrices(4)
    assert np.allclose(tm.L[0, :3], [1, 0, 0])
    assert np.allclose(tm.L[1, :3], [6, -1, 0])
    assert np.allclose(tm.L[2, :3], [19, -7, 0.5])
    # lambda_4 = 44 mu_0 - 26 mu_1 + 4 mu_2 - mu_3/6
    assert np.allclose(tm.L[3, :4], [44, -26, 4, -1 / 6])
    # mu_1 = 6 lambda_1 - lambda_2 (inverse of the 2x2 block)
    assert np.allclose(tm.M[1, :2], [6, -1])


def test_transform_exact_inverse_n12():
    tm = mo.transform_matrices(12)
    size = 13
    for i in range(size):
        for j in range(size):
            acc = sum(tm.L_exact[i][k] * tm.M_exact[k][j] for k in range(size))
            assert acc == (1 if i == j else 0)
    lm_scale = float((np.abs(tm.L) @ np.abs(tm.M)).max())
    ml_scale = float((np.abs(tm.M) @ np.abs(tm.L)).max())
    assert np.abs(tm.L @ tm.M - np.eye(size)).max() <= 1e-13 * lm_scale
    assert np.abs(tm.M @ tm.L - np.eye(size)).max() <= 1e-13 * ml_scale


@given(st.lists(st.floats(min_value=-10, max_value=10,
                          allow_nan=False, allow_infinity=False),
                min_size=13, max_size=13))
@settings(max_examples=60, deadline=None)
def test_transform_roundtrip_arbitrary(xs):
    tm = mo.transform_matrices(12)
    back = tm.roundtrip_exact(xs)
    assert all(float(b) == pytest.approx(v, abs=1e-12) for b, v in zip(back, xs))


def test_transform_sizes():
    for N in (4, 8):
        tm = mo.transform_matrices(N)
        assert tm.L.shape == (N + 1, N + 1)
    with pytest.raises(DomainError):
        mo.transform_matrices(65)


def test_li_from_moments_examples(moment_seq):
    assert mo.li_from_moments(moment_seq, 1) == pytest.approx(
        moment_seq[0], abs=1e-15)
    assert mo.li_from_moments(moment_seq, 2) == pytest.approx(
        6 * moment_seq[0] - moment_seq[1], abs=1e-13)
    with pytest.raises(DomainError):
        mo.li_from_moments(np.array([1.0]), 5)


def test_moments_from_li_degenerate():
    lam = np.array([0.5, 1.25, 0.7])
    assert mo.moments_from_li(lam, 0) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(DomainError):
        mo.moments_from_li(lam, 3)


def test_moment_values(moment_seq, zeros_table, tail):
    assert moment_seq[0] == pytest.approx(LAMBDA1, abs=1e-7)
    assert all(moment_seq[n] > 0 for n in range(11))
    # mu_0 equals (xi'/xi)(1), evaluated through the zero sum
    had = zt.xi_log_deriv_zero_sum(1.0, zeros_table)
    assert moment_seq[0] == pytest.approx(had, abs=1e-5)


def test_li_triple_route(moment_seq, zeros_table, tail):
    for n in range(1, 7):
        a = zt.li_from_zeros(n, zeros_table, tail)
        b = mo.li_from_moments(moment_seq, n)
        assert a == pytest.approx(b, abs=1e-3)


def test_tcut_stability(psi, zeros_table, moment_seq):
    hyb = mo.HybridPsi(psi, zeros_table)
    short = mo.moment_sequence(hyb, 10, t_cut=40.0)
    for n in range(11):
        assert abs(short[n] - moment_seq[n]) <= short.est_errors[n] \
            + moment_seq.est_errors[n]


def test_moment_tail_bound_recorded(psi, zeros_table):
    hyb = mo.HybridPsi(psi, zeros_table)
    quadr = mo.MomentQuadrature(hyb, 50.0)
    for n in (0, 5, 10):
        assert quadr.tail_bound(n) > 0
        val, err = quadr.mu(n)
        assert err >= quadr.tail_bound(n)
    with pytest.raises(DomainError):
        mo.MomentQuadrature(hyb, 30.0)


def test_hybrid_needs_zeros_beyond_ceiling(psi):
    hyb = mo.HybridPsi(psi)
    with pytest.raises(DomainError):
        hyb(psi.t_max + 1.0)
    assert hyb(1.0) == pytest.approx(psi(1.0), abs=1e-15)


def test_a_from_li(zeros_table, tail):
    lam = np.array([zt.li_from_zeros(n, zeros_table, tail)
                    for n in range(1, 11)])
    a = mo.a_from_li(lam, 10)
    assert a[0] == pytest.approx(lam[0], abs=1e-16)
    assert np.all(a > 0)
    # feeding a back regenerates lambda exactly
    for n in range(10):
        back = (n + 1) * a[n] - sum(a[n - j] * lam[j - 1]
                                    for j in range(1, n + 1))
        assert back == pytest.approx(lam[n], abs=1e-12)
    with pytest.raises(DomainError):
        mo.a_from_li(lam[:3], 10)


def test_b_coeff(zeros_table, tail):
    lam = np.array([zt.li_from_zeros(n, zeros_table, tail)
                    for n in range(1, 11)])
    a = mo.a_from_li(lam, 10)
    assert mo.b_coeff(1, 0, a) > 0
    for n in range(6):
        for k in range(n + 1):
            assert mo.b_coeff(n, k, a) > 0
    # b_{n,n}: empty j-sum leaves only the leading bracket
    n = 4
    lead = (Fraction(math.factorial(n), math.factorial(n) * math.factorial(n + 3))
            * Fraction(math.factorial(n + 1), 1)
            * (Fraction(2 * n - 4 * n - 3, 2) ** 2 + 2 * n + Fraction(15, 4)))
    assert mo.b_coeff(n, n, a) == pytest.approx(float(lead), rel=1e-12)
    with pytest.raises(DomainError):
        mo.b_coeff(3, 5, a)
    with pytest.raises(DomainError):
        mo.b_coeff(8, 0, a[:2])


def test_recurrence_exact_with_from_li_moments(zeros_table, tail):
    lam = np.array([zt.li_from_zeros(n, zeros_table, tail)
                    for n in range(1, 15)])
    a = mo.a_from_li(lam, 14)
    mu = np.array([mo.moments_from_li(lam, n) for n in range(13)])
    for n in range(8):
        # pure float error, amplified by the factorial-scale coefficients
        assert abs(mo.recurrence_residual(n, mu, a)) < 1e-8


def test_recurrence_with_quadrature_moments(moment_seq, zeros_table, tail):
    lam = np.array([zt.li_from_zeros(n, zeros_table, tail)
                    for n in range(1, 9)])
    a = mo.a_from_li(lam, 8)
    for n in range(6):
        assert abs(mo.recurrence_residual(n, moment_seq, a)) <= 1e-4


def test_hankel_small_cases(moment_seq):
    h0 = mo.hankel_det(moment_seq, 0)
    assert h0.det == pytest.approx(moment_seq[0], rel=1e-12)
    assert h0.det > 0
    h1 = mo.hankel_det(moment_seq, 1)
    direct = moment_seq[0] * moment_seq[2] - moment_seq[1] ** 2
    assert h1.det == pytest.approx(direct, rel=1e-10)
    assert h1.det > 0
    h1s = mo.hankel_det(moment_seq, 1, shifted=True)
    directs = moment_seq[1] * moment_seq[3] - moment_seq[2] ** 2
    assert h1s.det == pytest.approx(directs, rel=1e-10)
    with pytest.raises(DomainError):
        mo.hankel_det(moment_seq, 7)


def test_hankel_positivity_with_margin(moment_seq):
    for n in range(6):
        for shifted in (False, True):
            h = mo.hankel_det(moment_seq, n, shifted=shifted)
            assert h.positive_definite
            assert h.det - h.err_bound > 0
            assert h.logdet is not None
            assert h.logdet == pytest.approx(math.log(h.det), abs=1e-8)


def test_hankel_flags_indefinite():
    vals = np.array([1.0, 0.0, -1.0, 0.0, 1.0])
    res = mo.hankel_det(mo.MomentSequence(vals, "quadrature",
                                          np.zeros(5)), 1)
    assert not res.positive_definite
    assert res.det < 0
