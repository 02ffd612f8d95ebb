import math

import numpy as np
import pytest

from zscrew import mangoldt as mg
from zscrew import zerotable as zt
from zscrew.errors import DataFormatError, DomainError

LAMBDA1 = 0.02309570896612103381  # 1 + gamma0/2 - log(2 sqrt(pi))


def test_load_basics(zeros_table):
    g = zeros_table.ordinates
    assert 14.0 < g[0] < 14.2
    assert np.all(np.diff(g) > 0)
    assert len(zeros_table) == 100_000
    assert zeros_table.assumed_simple


def test_load_limit(zeros_path):
    tab = zt.load_zeros(zeros_path, 10)
    assert len(tab) == 10


def test_load_rejects_descending(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("14.134725\n21.022040\n20.0\n")
    with pytest.raises(DataFormatError, match="ascending"):
        zt.load_zeros(str(p))


def test_load_parse_error_carries_line(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("# header\n14.134725\nnot-a-number\n")
    with pytest.raises(DataFormatError, match=":3"):
        zt.load_zeros(str(p))


def test_load_density_gate(tmp_path):
    p = tmp_path / "corrupt.txt"
    p.write_text("".join("%.4f\n" % v for v in np.arange(14.1, 400, 1.0)))
    with pytest.raises(DataFormatError, match="density"):
        zt.load_zeros(str(p))


def test_load_first_ordinate_gate(tmp_path):
    p = tmp_path / "off.txt"
    p.write_text("15.5\n21.0\n")
    with pytest.raises(DataFormatError, match="first ordinate"):
        zt.load_zeros(str(p))


def test_tail_sigma2_values():
    est = zt.tail_sigma2(1000.0)
    assert est == pytest.approx(
        (math.log(1000 / (2 * math.pi)) + 1) / (math.pi * 1000), rel=1e-12)
    assert est == pytest.approx(1.93e-3, abs=2e-5)
    assert zt.tail_sigma2(2000.0) < est
    with pytest.raises(DomainError):
        zt.tail_sigma2(50.0)


def test_tail_sigma2_against_explicit_partial(zeros_table):
    g = zeros_table.ordinates
    explicit = 2 * float(np.sum(1 / g[g > 1000] ** 2)) \
        + zt.tail_sigma2(zeros_table.cutoff)
    assert abs(zt.tail_sigma2(1000.0) / explicit - 1) < 0.1


def test_psi_zero_side_basics(zeros_table, tail):
    lo, hi = zt.psi_zero_side(0.0, zeros_table, tail)
    assert lo == 0.0
    assert hi == pytest.approx(2 * tail.est, abs=1e-18)
    sup = 2 * float(np.sum(1 / zeros_table.ordinates**2)) + 2 * tail.est
    assert sup < 0.094
    for t in (0.3, 1.0, 7.7, 30.0):
        lo, hi = zt.psi_zero_side(t, zeros_table, tail)
        assert 0 <= lo <= hi <= 0.094


def test_two_sided_bracketing(zeros_table, tail, mang):
    for t in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
        p = mg.psi_prime_side(t, mang).value
        lo, hi = zt.psi_zero_side(t, zeros_table, tail)
        assert lo <= p <= hi


def test_kernel_identities(psi, rng):
    assert zt.kernel_G(1.3, 0.0, psi) == pytest.approx(0.0, abs=1e-14)
    assert zt.kernel_G(0.0, 0.7, psi) == pytest.approx(0.0, abs=1e-14)
    assert zt.kernel_G(1.3, 1.3, psi) == pytest.approx(2 * psi(1.3), abs=1e-13)
    for _ in range(100):
        t, u = rng.uniform(-3, 3, size=2)
        assert zt.kernel_G(t, u, psi) == pytest.approx(
            zt.kernel_G(u, t, psi), abs=1e-12)


def test_kernel_zero_sum_consistency(zeros_table, tail, psi):
    lo, hi = zt.kernel_G_zero_sum(1.0, 2.0, zeros_table, tail)
    direct = zt.kernel_G(1.0, 2.0, psi)
    assert lo - 1e-9 <= direct <= hi + 1e-9
    assert hi - lo == pytest.approx(8 * tail.est, rel=1e-12)
    # (t,u) = (1,-1) against Psi(1) + Psi(-1) - Psi(2)
    lo2, hi2 = zt.kernel_G_zero_sum(1.0, -1.0, zeros_table, tail)
    alg = psi(1.0) + psi(-1.0) - psi(2.0)
    assert lo2 - 1e-9 <= alg <= hi2 + 1e-9
    # diagonal is a sum of nonnegative terms
    lo3, hi3 = zt.kernel_G_zero_sum(1.7, 1.7, zeros_table, tail)
    assert (lo3 + hi3) / 2 >= 0


def test_kernel_gram_psd(psi, rng):
    worst = np.inf
    for _ in range(50):
        pts = rng.uniform(-3, 3, size=6)
        G = np.array([[zt.kernel_G(t, u, psi) for u in pts] for t in pts])
        worst = min(worst, float(np.linalg.eigvalsh(G).min()))
    assert worst >= -1e-9


def test_li_from_zeros(zeros_table, tail):
    lam1 = zt.li_from_zeros(1, zeros_table, tail)
    assert lam1 == pytest.approx(LAMBDA1, abs=1e-8)
    assert zt.li_from_zeros(2, zeros_table, tail) > 0
    assert zt.li_from_zeros(3, zeros_table, tail) > 0
    with pytest.raises(DomainError):
        zt.li_from_zeros(0, zeros_table, tail)
    with pytest.raises(DomainError):
        zt.li_from_zeros(20_000, zeros_table, tail)


def test_zero_power_sum(zeros_table, tail):
    with pytest.raises(DomainError):
        zt.zero_power_sum(1, zeros_table)
    s2 = zt.zero_power_sum(2, zeros_table, tail)
    lam1 = zt.li_from_zeros(1, zeros_table, tail)
    lam2 = zt.li_from_zeros(2, zeros_table, tail)
    assert s2 == pytest.approx(2 * lam1 - lam2, abs=1e-6)
    assert s2 < 0
    assert abs(zt.zero_power_sum(10, zeros_table, tail)) < 1e-10
    # |sum rho^{-m}| <= 2 sum (1/4+gamma^2)^{-m/2}
    g = zeros_table.ordinates
    bound = 2 * float(np.sum((0.25 + g * g) ** -5))
    assert abs(zt.zero_power_sum(10, zeros_table)) <= bound + 1e-15


def test_xi_log_deriv_zero_sum(zeros_table, mang):
    assert zt.xi_log_deriv_zero_sum(1.0, zeros_table) == pytest.approx(
        LAMBDA1, abs=1e-7)
    assert zt.xi_log_deriv_zero_sum(1.5, zeros_table) == pytest.approx(
        mg.xi_log_deriv_dirichlet(1.5, mang), abs=1e-7)


def test_fourier_identity_at_i(mang, psi):
    # int_0^inf Psi(t) e^{-t} dt = (xi'/xi)(3/2): z = i in the half-plane form
    from zscrew import moments as mo

    t_hi = min(16.0, psi.t_max)
    nodes, wts, vals = mo._panelize(psi, t_hi)
    lhs = float(np.dot(wts * np.exp(-nodes), vals))
    rhs = mg.xi_log_deriv_dirichlet(1.5, mang)
    assert lhs == pytest.approx(rhs, abs=1e-6)


def test_psi_omega_zero_side(zeros_table, mang_small):
    from zscrew.zerotable import psi_omega_zero_side

    for om in (0.0, 0.3, -0.2):
        for t in (0.5, 2.0):
            central, band = psi_omega_zero_side(t, om, zeros_table)
            direct = mg.psi_omega_prime_side(t, om, mang_small).value
            assert abs(central - direct) <= band + 1e-6
