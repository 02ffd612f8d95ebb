import math

import numpy as np
import pytest
import sympy

from zscrew import mangoldt as mg
from zscrew import specfun as sf
from zscrew.errors import (CapacityError, DataFormatError, DomainError,
                           InsufficientSamplingError, RangeError)

LOG2 = math.log(2)


def test_lambda_values(mang_small):
    assert mang_small.lam_at(2) == pytest.approx(LOG2, abs=1e-15)
    assert mang_small.lam_at(6) == 0.0
    assert mang_small.lam_at(8) == pytest.approx(LOG2, abs=1e-15)
    assert mang_small.lam_at(9) == pytest.approx(math.log(3), abs=1e-15)
    assert mang_small.lam_at(1) == 0.0


def test_lambda_against_factorization(mang_small, rng):
    for n in rng.integers(2, 10**6, size=200):
        n = int(n)
        fac = sympy.factorint(n)
        expect = math.log(next(iter(fac))) if len(fac) == 1 else 0.0
        assert mang_small.lam_at(n) == pytest.approx(expect, abs=1e-12)


def test_chebyshev_psi_monotone(mang_small):
    vals = [mang_small.chebyshev_psi(x) for x in (10, 100, 1000, 10**4)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    # oracle at 100
    ref = sum(float(sympy.log(list(sympy.factorint(n))[0]))
              for n in range(2, 101) if len(sympy.factorint(n)) == 1)
    assert vals[1] == pytest.approx(ref, abs=1e-10)


def test_build_table_errors():
    with pytest.raises(DomainError):
        mg.build_table(1)
    with pytest.raises(CapacityError):
        mg.build_table(10**7, budget=10**6)


def test_chebyshev_weighted_empty_and_boundary(mang_small):
    assert mg.chebyshev_weighted(0.5, mang_small) == 0.0
    # the n=2 term enters with weight t - log 2 = 0
    assert mg.chebyshev_weighted(LOG2, mang_small) == pytest.approx(0.0, abs=1e-15)


def test_chebyshev_weighted_naive_oracle(mang_small):
    t = 3.0
    naive = math.fsum(
        mang_small.lam_at(n) / math.sqrt(n) * (t - math.log(n))
        for n in range(2, int(math.exp(t)) + 1))
    assert mg.chebyshev_weighted(t, mang_small) == pytest.approx(naive, abs=1e-12)
    with pytest.raises(RangeError):
        mg.chebyshev_weighted(math.log(mang_small.limit) + 1, mang_small)


def test_asymptotic_ratio_small(mang_small):
    assert mg.asymptotic_ratio(0.5, mang_small) == 0.0
    assert abs(mg.asymptotic_ratio(13.0, mang_small) - 1) < 0.05


def test_psi_zero_and_reference_point(mang_small):
    assert mg.psi_prime_side(0.0, mang_small).value == pytest.approx(0, abs=1e-12)
    r = mg.psi_prime_side(0.464002, mang_small)
    assert r.value == pytest.approx(0.0396618, abs=1e-6)
    assert r.est_error >= 0


def test_psi_even_extension(mang_small):
    for t in (0.3, 1.7, 4.2):
        assert (mg.psi_prime_side(t, mang_small).value
                == mg.psi_prime_side(-t, mang_small).value)


def test_psi_continuity_at_thresholds(mang_small):
    eps = 1e-8
    for n in (2, 3, 4, 5, 7, 8, 9):
        t = math.log(n)
        below = mg.psi_prime_side(t - eps, mang_small).value
        above = mg.psi_prime_side(t + eps, mang_small).value
        assert abs(above - below) <= 20 * eps


def test_psi_vector_matches_scalar(mang_small):
    ts = np.array([0.0, 1e-4, 0.02, 0.3, 0.7, 1.3, 5.5, 11.0])
    vec = mg.psi_values(ts, mang_small)
    for t, v in zip(ts, vec):
        assert v == pytest.approx(mg.psi_prime_side(float(t), mang_small).value,
                                  abs=5e-13)


def test_derivative_roots_and_blowup():
    from scipy.optimize import brentq

    r1 = brentq(mg.psi_prime_derivative, 0.05, 0.3, xtol=1e-12)
    r2 = brentq(mg.psi_prime_derivative, 0.3, 0.69, xtol=1e-12)
    assert abs(mg.psi_prime_derivative(0.152631)) <= 1e-4
    assert abs(mg.psi_prime_derivative(0.464002)) <= 1e-4
    assert r1 == pytest.approx(0.152631, abs=1e-5)
    assert r2 == pytest.approx(0.464002, abs=1e-5)
    # artanh(e^{-t/2}) divergence: ~ (1/2) log(4/t), unbounded at 0+
    assert mg.psi_prime_derivative(1e-6) > 5
    assert (mg.psi_prime_derivative(1e-8)
            > mg.psi_prime_derivative(1e-6) + 2.2)
    for bad in (0.0, LOG2, 0.8, -0.1):
        with pytest.raises(DomainError):
            mg.psi_prime_derivative(bad)


def test_derivative_matches_finite_difference(mang_small):
    h = 1e-6
    for t in (0.1, 0.3, 0.6):
        fd = (mg.psi_prime_side(t + h, mang_small).value
              - mg.psi_prime_side(t - h, mang_small).value) / (2 * h)
        assert mg.psi_prime_derivative(t) == pytest.approx(fd, abs=1e-6)


def test_psi_omega_reduction_and_zero(mang_small):
    for t in (0.1, 1.0, 3.0):
        assert (mg.psi_omega_prime_side(t, 0.0, mang_small).value
                == pytest.approx(mg.psi_prime_side(t, mang_small).value,
                                 abs=1e-12))
    for om in np.concatenate((np.arange(-1, -0.5, 0.1),
                              np.arange(-0.4, 1.05, 0.1))):
        assert mg.psi_omega_prime_side(0.0, float(om), mang_small).value \
            == pytest.approx(0.0, abs=1e-12)


def test_psi_omega_half_domain(mang_small):
    with pytest.raises(DomainError):
        mg.psi_omega_prime_side(1.0, -0.5, mang_small)
    # omega = +1/2 dispatches to the dedicated branch
    v = mg.psi_omega_prime_side(1.0, 0.5, mang_small).value
    assert np.isfinite(v)


def test_psi_omega_nonnegative_above_half(mang_small, zeros_table):
    from zscrew.zerotable import psi_omega_zero_side

    t_prime = np.arange(0.05, math.log(mang_small.limit), 0.05)
    for om in (0.5, 0.75, 1.0):
        vals = [mg.psi_omega_prime_side(float(t), om, mang_small).value
                for t in t_prime]
        assert min(vals) > 0
        for t in np.arange(14.0, 20.01, 0.25):
            central, band = psi_omega_zero_side(float(t), om, zeros_table)
            assert central - band > 0


def test_psi_omega_shift_identities(mang_small):
    t = 1.0
    u = np.linspace(0, t, 2001)
    vals = mg.psi_values(u, mang_small)
    shifted = mg.psi_omega_shift((u, vals), 0.5, t)
    direct = mg.psi_omega_prime_side(t, 0.5, mang_small).value
    assert shifted == pytest.approx(direct, abs=1e-6)
    # eta -> 0 reproduces the unshifted value
    assert mg.psi_omega_shift((u, vals), 1e-8, t) == pytest.approx(
        mg.psi_prime_side(t, mang_small).value, abs=1e-7)


def test_psi_omega_shift_semigroup(mang_small):
    t = 2.0
    u = np.linspace(0, t, 4001)
    vals0 = mg.psi_values(u, mang_small)
    v03 = np.array([mg.psi_omega_prime_side(float(x), 0.3, mang_small).value
                    for x in u])
    two_step = mg.psi_omega_shift((u, v03), 0.2, t)
    direct = mg.psi_omega_prime_side(t, 0.5, mang_small).value
    assert two_step == pytest.approx(direct, abs=1e-6)
    one_step = mg.psi_omega_shift((u, vals0), 0.5, t)
    assert one_step == pytest.approx(direct, abs=1e-6)


def test_psi_omega_shift_sampling_errors(mang_small):
    u = np.linspace(0, 1, 51)   # step 0.02: too coarse
    vals = mg.psi_values(u, mang_small)
    with pytest.raises(InsufficientSamplingError):
        mg.psi_omega_shift((u, vals), 0.5, 1.0)
    u2 = np.linspace(0, 0.9, 1801)
    with pytest.raises(InsufficientSamplingError):
        mg.psi_omega_shift((u2, mg.psi_values(u2, mang_small)), 0.5, 1.0)


def test_cache_roundtrip(tmp_path):
    tab = mg.build_table(50_000)
    path = tmp_path / "lam.bin"
    mg.save_cache(tab, str(path))
    back = mg.load_cache(str(path))
    assert back.limit == tab.limit
    assert np.array_equal(back.prime_powers, tab.prime_powers)
    assert np.allclose(back.prefix_a, tab.prefix_a, rtol=0, atol=1e-15)
    assert back.lam_at(49) == pytest.approx(math.log(7), abs=1e-15)
    # corrupted header
    raw = bytearray(path.read_bytes())
    raw[:8] = b"XXXXXXXX"
    bad = tmp_path / "bad.bin"
    bad.write_bytes(bytes(raw))
    with pytest.raises(DataFormatError):
        mg.load_cache(str(bad))


def test_dense_values_cap():
    stub = mg.MangoldtTable(
        limit=2**25, prime_powers=np.array([2], dtype=np.int64),
        log_n=np.array([LOG2]), pw_pos=np.empty(0, dtype=np.int64),
        pw_lam=np.empty(0), prefix_a=np.array([0.49]),
        prefix_b=np.array([0.34]))
    with pytest.raises(CapacityError):
        _ = stub.values


def test_dense_values_small():
    tab = mg.build_table(1000)
    dense = tab.values
    assert dense[8] == pytest.approx(LOG2)
    assert dense[6] == 0.0
    assert dense[997] == pytest.approx(math.log(997))


def test_xi_log_deriv_dirichlet(mang):
    import mpmath as mp

    for s in (1.5, 2.0, 3.0):
        ref = float(1 / (s - 1) + 1 / s - mp.log(mp.pi) / 2
                    + mp.digamma(s / 2) / 2
                    + mp.zeta(s, derivative=1) / mp.zeta(s))
        assert mg.xi_log_deriv_dirichlet(s, mang) == pytest.approx(
            ref, abs=2e-8)
    with pytest.raises(DomainError):
        mg.xi_log_deriv_dirichlet(1.0, mang)
