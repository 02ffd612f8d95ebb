"""The Weil explicit formula as an executable identity.

For a test function phi with compact support and a closed-form entire
transform phihat(z) = int phi(t) e^{izt} dt, the formula reads

    sum_gamma phihat(gamma)
        = phihat(i/2) + phihat(-i/2)
          - sum_n Lambda(n)/sqrt(n) [phi(log n) + phi(-log n)]
          - (log pi) phi(0)
          + (1/2pi) int_R Re[digamma(1/4 + iz/2)] phihat(z) dz .

Both sides are computed from independent ingredients: the left from a
zero table, the right from the prime table plus an archimedean
quadrature.  The triangular test function recovers the screw function
pointwise (its transform is (1 - cos(zt))/z^2, the zero-side series of
Psi termwise), so the residual of the formula at a triangle is a direct
numerical check of the prime-side/zero-side agreement through a third,
integral-based route for the archimedean term.

Also implemented: the trigonometric pairings <chi_0, chi_k> of the
localization analysis, whose zero-sum form and closed form (poles +
prime blocks + exponential series + digamma terms) must agree.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from . import specfun
from .errors import DomainError, RangeError
from .mangoldt import LOG_PI, MangoldtTable
from .zerotable import TailModel, ZeroTable, tail_sigma2
from ._sums import pairwise_sum


@dataclass
class TestFunction:
    """Compactly supported test function with a closed-form transform.

    `value` vanishes outside [-support_radius, support_radius]; `transform`
    is its entire Fourier transform (e^{+izt} convention) and must accept
    numpy arrays.  `tail_coeff` and `osc` describe the large-z behavior
    z^2 * transform(z) ~ tail_coeff + sum_j a_j cos(b_j z), which the
    archimedean quadrature uses for its analytic tail.  Sampled functions
    without a closed-form transform are not accepted anywhere.
    """

    support_radius: float
    value: Callable
    transform: Callable
    tail_coeff: float = 0.0
    osc: tuple = ()

    def __post_init__(self):
        if self.support_radius <= 0:
            raise DomainError("support_radius must be positive")


def triangle(t: float) -> TestFunction:
    """Triangular bump of half-width t: (t - |x|)/2 on |x| <= t.

    Transform (1 - cos(zt))/z^2 with removable singularity t^2/2 at 0.
    """
    if t <= 0:
        raise DomainError("triangle requires t > 0")

    def value(x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) <= t, 0.5 * (t - np.abs(x)), 0.0)

    def transform(z):
        z = np.asarray(z)
        w = z * t
        small = np.abs(w) < 1e-4
        zs = np.where(small, 1.0, z)
        main = (1 - np.cos(np.where(small, 0.0, w))) / (zs * zs)
        series = t * t / 2 * (1 - w * w / 12 * (1 - w * w / 30))
        out = np.where(small, series, main)
        return out[()] if out.ndim == 0 else out

    return TestFunction(support_radius=t, value=value, transform=transform,
                        tail_coeff=1.0, osc=((-1.0, t),))


@dataclass
class ExplicitFormulaReport:
    """All terms of one evaluation of the explicit formula."""

    zero_side: float
    archimedean: float
    prime_side: float
    pole_terms: float
    lhs: float
    rhs: float
    residual: float

    @classmethod
    def assemble(cls, zero_side, pole_terms, prime_side, logpi_term,
                 archimedean):
        rhs = pole_terms - prime_side - logpi_term + archimedean
        return cls(zero_side=zero_side, archimedean=archimedean,
                   prime_side=prime_side, pole_terms=pole_terms,
                   lhs=zero_side, rhs=rhs, residual=zero_side - rhs)


def _re_digamma_line(z):
    """Re digamma(1/4 + iz/2) on a real grid."""
    return specfun.digamma_complex(0.25 + 0.5j * np.asarray(z, dtype=float)).real


def archimedean_integral(phi: TestFunction, abs_tol: float = 1e-9,
                         z_max: float | None = None) -> float:
    """(1/2pi) int_R Re[digamma(1/4+iz/2)] phihat(z) dz.

    Composite Gauss-Legendre on [0, Z] (panel width tied to the largest
    oscillation frequency of the transform), plus the analytic tail of
    the asymptotic Re digamma(1/4+iz/2) ~ log(z/2):

      * non-oscillatory part: tail_coeff * [(log(Z/2)+1)/Z + int r/z^2],
      * each cos(bz)/z^2 part: two integration-by-parts boundary terms.

    The leftover is O(log Z / Z^3); Z defaults from abs_tol.
    """
    if z_max is None:
        z_max = max(2000.0, min(40000.0, (20.0 / abs_tol) ** (1 / 3)))
    freqs = [b for _, b in phi.osc] + [phi.support_radius]
    h = min(0.5, math.pi / (2 * max(freqs)))
    n_panels = int(math.ceil(z_max / h))
    # 12-point Gauss-Legendre per panel, all panels vectorized
    x, w = np.polynomial.legendre.leggauss(12)
    edges = np.linspace(0.0, z_max, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    vals = _re_digamma_line(nodes) * np.real(phi.transform(nodes))
    main = float(np.dot(weights, vals))

    Z = z_max
    RZ = float(_re_digamma_line(np.array([Z]))[0])
    R1Z = float((0.5j * specfun.trigamma_complex(0.25 + 0.5j * Z)).real)
    # d/dz Re psi(1/4+iz/2) = Re[(i/2) psi'(1/4+iz/2)]
    tail = 0.0
    if phi.tail_coeff:
        r_int, _ = quad(lambda s: (_re_digamma_line(np.array([Z / s]))[0]
                                   - math.log(Z / (2 * s))) / Z,
                        0.0, 1.0, limit=100)
        tail += phi.tail_coeff * ((math.log(Z / 2) + 1) / Z + r_int)
    for aj, bj in phi.osc:
        ibp1 = -RZ * math.sin(bj * Z) / (bj * Z * Z)
        ibp2 = -(R1Z / (Z * Z) - 2 * RZ / Z ** 3) * math.cos(bj * Z) / bj ** 2
        tail += aj * (ibp1 + ibp2)
    return (main + tail) / math.pi


def explicit_formula_rhs(phi: TestFunction, table: MangoldtTable,
                         acc: specfun.SpecFunAccuracy = specfun.DEFAULT_ACC
                         ) -> ExplicitFormulaReport:
    """Pole, prime, log-pi and archimedean terms of the explicit formula."""
    if math.exp(phi.support_radius) > table.limit + 0.5:
        raise RangeError("prime table does not cover the support")
    pole = complex(phi.transform(0.5j)) + complex(phi.transform(-0.5j))
    if abs(pole.imag) > 1e-9 * (1 + abs(pole.real)):
        raise DomainError("pole terms not real; test function must be even/real")
    k = table.index_for(phi.support_radius)
    logs = table.log_n[:k]
    coef = table.lam_slice(k) * np.exp(-0.5 * logs)
    prime = float(np.dot(coef, phi.value(logs) + phi.value(-logs)))
    logpi_term = LOG_PI * float(phi.value(0.0))
    arch = archimedean_integral(phi, acc.abs_tol)
    return ExplicitFormulaReport.assemble(
        zero_side=math.nan, pole_terms=pole.real, prime_side=prime,
        logpi_term=logpi_term, archimedean=arch)


def explicit_formula_lhs(phi: TestFunction, table: ZeroTable,
                         tail: TailModel | None = None) -> float:
    """Zero side: 2 sum_{0 < gamma <= cutoff} Re phihat(gamma)."""
    vals = np.real(phi.transform(table.ordinates))
    return 2 * pairwise_sum(vals)


def explicit_formula_tail_estimate(phi: TestFunction, tail: TailModel) -> float:
    """1/gamma^2-envelope estimate for the truncated zero side."""
    env = abs(phi.tail_coeff) + sum(abs(a) for a, _ in phi.osc)
    return env * tail.est


def weil_check(phi: TestFunction, mang: MangoldtTable, zeros: ZeroTable,
               acc: specfun.SpecFunAccuracy = specfun.DEFAULT_ACC
               ) -> ExplicitFormulaReport:
    """Both sides of the explicit formula for one test function."""
    rep = explicit_formula_rhs(phi, mang, acc)
    lhs = explicit_formula_lhs(phi, zeros)
    return ExplicitFormulaReport(
        zero_side=lhs, archimedean=rep.archimedean, prime_side=rep.prime_side,
        pole_terms=rep.pole_terms, lhs=lhs, rhs=rep.rhs,
        residual=lhs - rep.rhs)


# ---------------------------------------------------------------------------
# trigonometric pairings <chi_0, chi_k>
# ---------------------------------------------------------------------------

def chi_pairing_lhs(k: int, a: float, table: ZeroTable,
                    tail: TailModel | None = None) -> tuple[float, float]:
    """The two zero sums of the pairing, over +-gamma explicitly.

    sum1 = sum_{+-gamma} (cos(a g)-1)/g^2 * (-1)^k 2a sin(a g)/(k pi + a g)
    sum2 = sum_{+-gamma} (a g cos(a g)-sin(a g))/(a g^3)
                                       * (-1)^k 2a sin(a g)/(k pi + a g)

    and <chi_0, chi_k> = sum1 - sum2.  Terms decay like 1/gamma^3.
    """
    if k < 1 or a <= 0:
        raise DomainError("need k >= 1 and a > 0")
    g = table.ordinates
    near = np.abs(k * math.pi - a * g) < 1e-6
    if near.any():
        warnings.warn("near-resonance: k*pi within 1e-6 of a*gamma at %d "
                      "ordinates" % near.sum(), RuntimeWarning)
    sgn = (-1.0) ** k
    s1 = 0.0
    s2 = 0.0
    for gg in (g, -g):
        f2 = sgn * 2 * a * np.sin(a * gg) / (k * math.pi + a * gg)
        s1 += pairwise_sum((np.cos(a * gg) - 1) / gg ** 2 * f2)
        s2 += pairwise_sum((a * gg * np.cos(a * gg) - np.sin(a * gg))
                           / (a * gg ** 3) * f2)
    return float(s1), float(s2)


def _exp_series_517(k: int, a: float, acc) -> float:
    """8a^2 sum_n (e^{-a(4n+1)} - 2e^{-a(4n+1)/2}) (-1)^{k+1}
    / [(4n+1)(a^2(4n+1)^2 + 4 pi^2 k^2)]."""
    nmax = int(max(8, 80.0 / a + 8))
    q = 4 * np.arange(nmax) + 1.0
    terms = ((np.exp(-a * q) - 2 * np.exp(-a * q / 2))
             / (q * (a * a * q * q + 4 * math.pi ** 2 * k * k)))
    return 8 * a * a * (-1.0) ** (k + 1) * float(np.sum(terms))


def _exp_series_518(k: int, a: float, acc) -> float:
    """8a sum_n (a(4n+1)+2) e^{-a(4n+1)} (-1)^{k+1}
    / [(4n+1)^2 (a^2(4n+1)^2 + 4 pi^2 k^2)]."""
    nmax = int(max(8, 80.0 / a + 8))
    q = 4 * np.arange(nmax) + 1.0
    terms = ((a * q + 2) * np.exp(-a * q)
             / (q * q * (a * a * q * q + 4 * math.pi ** 2 * k * k)))
    return 8 * a * (-1.0) ** (k + 1) * float(np.sum(terms))


def chi_pairing_rhs(k: int, a: float, table: MangoldtTable,
                    acc: specfun.SpecFunAccuracy = specfun.DEFAULT_ACC
                    ) -> tuple[float, float]:
    """Closed forms of the two pairing sums via the explicit formula.

    Every displayed term is evaluated: hyperbolic pole terms, the prime
    blocks over n <= e^a and e^a < n <= e^{2a}, log-pi terms, the
    exponential series, and digamma/trigamma values at 1/4 +- pi i k/(2a)
    and 1/4.
    """
    if k < 1 or a <= 0:
        raise DomainError("need k >= 1 and a > 0")
    if math.exp(2 * a) > table.limit + 0.5:
        raise RangeError("prime table must cover e^{2a}")
    sgn = (-1.0) ** k
    pi2k2 = math.pi ** 2 * k * k
    denom_pole = 4 * pi2k2 + a * a
    cosh_h = math.cosh(a / 2)
    sinh_h = math.sinh(a / 2)
    s_plus = 0.25 + 0.5j * math.pi * k / a
    psi_p = specfun.digamma_complex(s_plus)
    psi_m = specfun.digamma_complex(s_plus.conjugate())
    psi_quarter = specfun.DIGAMMA_QUARTER
    tri_quarter = specfun.trigamma(0.25)

    k1 = table.index_for(a)
    k2 = table.index_for(2 * a)
    logs1 = table.log_n[:k1]
    lam2 = table.lam_slice(k2)
    coef1 = lam2[:k1] * np.exp(-0.5 * logs1)
    logs12 = table.log_n[k1:k2]
    coef12 = lam2[k1:k2] * np.exp(-0.5 * logs12)
    logs2 = table.log_n[:k2]
    coef2 = lam2 * np.exp(-0.5 * logs2)

    # ---- first pairing sum -------------------------------------------------
    s1 = -32 * a * a * sgn * (cosh_h - 1) * sinh_h / denom_pole
    s1 -= float(np.dot(coef1, (a * a / pi2k2)
                       * ((sgn - 2) * np.cos(math.pi * k * logs1 / a) + sgn)))
    s1 -= float(np.dot(coef12, (a * a * sgn / pi2k2)
                       * (np.cos(math.pi * k * logs12 / a) - 1)))
    s1 -= (a * a / pi2k2) * (sgn - 1) * LOG_PI
    s1 += _exp_series_517(k, a, acc)
    s1 += (a * a * sgn * (1 - 2 * sgn) / (4 * pi2k2)) * float((psi_p + psi_m).real)
    s1 += (a * a * sgn / (2 * pi2k2)) * psi_quarter

    # ---- second pairing sum ------------------------------------------------
    s2 = -64 * a * sgn * ((a / 2) * cosh_h - sinh_h) * sinh_h / denom_pole
    s2 -= a * a * float(np.dot(coef2, (sgn / (math.pi ** 3 * k ** 3))
                               * np.sin(math.pi * k * logs2 / a)))
    s2 += a * float(np.dot(coef2, (sgn / pi2k2)
                           * ((logs2 - a) - a * np.cos(math.pi * k * logs2 / a))))
    s2 -= (a * a * sgn / pi2k2) * LOG_PI
    s2 += _exp_series_518(k, a, acc)
    cross = 1j * (psi_p * (1 - 1j * math.pi * k) - psi_m * (1 + 1j * math.pi * k))
    s2 += (a * a * sgn / (4 * math.pi ** 3 * k ** 3)) * float(cross.real)
    s2 += (a * sgn / (4 * pi2k2)) * (2 * a * psi_quarter + tri_quarter)

    return float(s1), float(s2)


def chi_pairing_total(k: int, a: float, table: MangoldtTable,
                      acc: specfun.SpecFunAccuracy = specfun.DEFAULT_ACC
                      ) -> float:
    """<chi_0, chi_k> from the closed forms (sum1 - sum2)."""
    s1, s2 = chi_pairing_rhs(k, a, table, acc)
    return s1 - s2
