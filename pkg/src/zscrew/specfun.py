"""Special-function primitives for the screw-function evaluators.

Everything downstream (prime-side evaluation, explicit-formula terms,
moment quadrature) reduces to a handful of classical functions evaluated
to near machine precision:

  * digamma / trigamma on the positive axis (recurrence + Stirling tail),
  * the Hurwitz-Lerch sum  Phi(z, 2, a) = sum_{n>=0} z^n / (n+a)^2,
  * Hurwitz zeta at non-positive integers via Bernoulli polynomials,
  * the small-t expansion of the archimedean term
        C - e^{-t/2} Phi(e^{-2t}, 2, 1/4)
      = 2 t log(1/t) + A t - sum_{k>=2} zeta(2-k, 1/4) (-2t)^k / k! ,
    with A = pi + 4 log 2 + 2 and C = pi^2 + 8 G.

Constants are stored as 30+ digit literals; tests re-derive them from
their defining series.  All functions are pure and reentrant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import exp1

from .errors import DomainError, TruncationError

# fmt: off
EULER_GAMMA = 0.577215664901532860606512090082402431042
CATALAN     = 0.915965594177219015054603514932384110774
# fmt: on

#: C = pi^2 + 8G = zeta(2, 1/4) = Phi(1, 2, 1/4); makes Psi(0) vanish.
C_QUARTER = math.pi ** 2 + 8 * CATALAN

#: linear coefficient of the small-t expansion, A = pi + 4 log 2 + 2
A_SMALLT = math.pi + 4 * math.log(2) + 2

#: digamma(1/4) = -gamma0 - pi/2 - 3 log 2
DIGAMMA_QUARTER = -EULER_GAMMA - math.pi / 2 - 3 * math.log(2)


@dataclass(frozen=True)
class SpecFunAccuracy:
    """Absolute error target and term budget for the series evaluators."""

    abs_tol: float = 1e-13
    max_terms: int = 300_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")


DEFAULT_ACC = SpecFunAccuracy()

# Bernoulli numbers B_{2k} entering the Stirling tails
_B2K = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)

_SHIFT = 10.0  # recurrence pushes the argument above this before Stirling


def _digamma_any(x: float) -> float:
    """digamma at any non-pole real argument (recurrence + Stirling)."""
    if x == math.floor(x) and x <= 0:
        raise DomainError("digamma pole at non-positive integer %g" % x)
    acc = 0.0
    while x < _SHIFT:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    s = 0.0
    p = inv2
    for k, b in enumerate(_B2K, start=1):
        s += b / (2 * k) * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - s


def digamma(x: float, acc: SpecFunAccuracy = DEFAULT_ACC) -> float:
    """Logarithmic derivative of the gamma function for x > 0.

    Reproduces the closed form digamma(1/4) = -gamma0 - pi/2 - 3 log 2.
    """
    if not x > 0:
        raise DomainError("digamma requires x > 0, got %g" % x)
    return _digamma_any(x)


def _trigamma_any(x: float) -> float:
    if x == math.floor(x) and x <= 0:
        raise DomainError("trigamma pole at non-positive integer %g" % x)
    acc = 0.0
    while x < _SHIFT:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    s = 0.0
    p = inv * inv2
    for b in _B2K:
        s += b * p
        p *= inv2
    return acc + inv + 0.5 * inv2 + s


def trigamma(x: float, acc: SpecFunAccuracy = DEFAULT_ACC) -> float:
    """psi^(1)(x) = d^2/dx^2 log Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError("trigamma requires x > 0, got %g" % x)
    return _trigamma_any(x)


def digamma_complex(s):
    """Vectorized digamma for complex arguments with Re(s) > -20.

    Recurrence shifts each argument to |s| >= 10, then the Stirling
    expansion with Bernoulli terms through B14 (tail below 1e-16 there).
    Needed on the line 1/4 + iz/2 (archimedean integrand) and at the
    points 1/4 +- pi i k / (2a) of the trigonometric pairings.
    """
    s = np.asarray(s, dtype=np.complex128)
    scalar = s.ndim == 0
    s = np.atleast_1d(s).copy()
    acc = np.zeros_like(s)
    for _ in range(40):
        mask = np.abs(s) < _SHIFT
        if not mask.any():
            break
        acc[mask] -= 1.0 / s[mask]
        s[mask] += 1.0
    inv2 = 1.0 / (s * s)
    tail = np.zeros_like(s)
    p = inv2.copy()
    for k, b in enumerate(_B2K, start=1):
        tail += b / (2 * k) * p
        p *= inv2
    out = acc + np.log(s) - 0.5 / s - tail
    return out[0] if scalar else out


def trigamma_complex(s):
    """Vectorized psi^(1) for complex arguments (recurrence + Stirling)."""
    s = np.asarray(s, dtype=np.complex128)
    scalar = s.ndim == 0
    s = np.atleast_1d(s).copy()
    acc = np.zeros_like(s)
    for _ in range(40):
        mask = np.abs(s) < _SHIFT
        if not mask.any():
            break
        acc[mask] += 1.0 / s[mask] ** 2
        s[mask] += 1.0
    inv = 1.0 / s
    inv2 = inv * inv
    tail = np.zeros_like(s)
    p = inv * inv2
    for b in _B2K:
        tail += b * p
        p *= inv2
    out = acc + inv + 0.5 * inv2 + tail
    return out[0] if scalar else out


@lru_cache(maxsize=None)
def _bernoulli_number(n: int) -> Fraction:
    """Exact Bernoulli number B_n by the standard recurrence."""
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2 == 1:
        return Fraction(0)
    s = Fraction(0)
    for j in range(n):
        s += math.comb(n + 1, j) * _bernoulli_number(j)
    return -s / (n + 1)


def bernoulli_poly(n: int, x) -> Fraction:
    """B_n(x) = sum_k C(n,k) B_k x^{n-k}, exact when x is rational."""
    xf = Fraction(x)
    return sum(math.comb(n, k) * _bernoulli_number(k) * xf ** (n - k)
               for k in range(n + 1))


def hurwitz_zeta_nonpos(k: int, a=Fraction(1, 4)) -> float:
    """zeta(2-k, a) for integer k >= 2, via zeta(-m, a) = -B_{m+1}(a)/(m+1)."""
    if k < 2:
        raise DomainError("hurwitz_zeta_nonpos requires k >= 2")
    return float(-bernoulli_poly(k - 1, a) / (k - 1))


def catalan() -> float:
    """Catalan constant G = sum (-1)^n (2n+1)^{-2}."""
    return CATALAN


def _lerch_phi2_any(z: float, a: float,
                    acc: SpecFunAccuracy) -> tuple[float, float, int]:
    """Phi(z,2,a) = sum z^n/(n+a)^2 with truncation bound and term count.

    Valid for 0 <= z <= 1 and a > -1, a != 0 (all denominators stay
    nonzero).  Direct geometric summation away from z=1; near z=1 the
    partial sum is completed by an Euler-Maclaurin integral tail through
    the f''' term, with the exponential integral E1 supplying
    int_N^inf e^{-xu} (u+a)^{-2} du at x = -log z.
    """
    if z == 0.0:
        return 1.0 / (a * a), 0.0, 1
    x = -math.log(z)
    if x >= 0.02:
        # direct summation; remainder bounded by z^N / ((N+a)^2 (1-z))
        n_needed = int(min(acc.max_terms, max(8, 60.0 / x + 8)))
        n = np.arange(n_needed, dtype=np.float64)
        terms = np.exp(-x * n) / (n + a) ** 2
        bound = math.exp(-x * n_needed) / ((n_needed + a) ** 2 * (1 - z))
        if bound > acc.abs_tol:
            raise TruncationError(
                "lerch_phi2 needs more than %d terms for tol %g"
                % (acc.max_terms, acc.abs_tol))
        return float(np.sum(terms)), bound, n_needed
    # z close to (or equal to) 1: partial sum + Euler-Maclaurin tail
    n_cut = int(min(acc.max_terms, 2048))
    n = np.arange(n_cut, dtype=np.float64)
    partial = float(np.sum(np.exp(-x * n) / (n + a) ** 2))
    na = n_cut + a
    if x == 0.0:
        integral = 1.0 / na
        f = 1.0 / na ** 2
        fp = -2.0 / na ** 3
        fppp = -24.0 / na ** 5
        f5 = -720.0 / na ** 7
    else:
        y = x * na
        integral = math.exp(-x * n_cut) / na - x * math.exp(a * x) * exp1(y)
        e = math.exp(-x * n_cut)
        f = e / na ** 2
        fp = -e * (x / na ** 2 + 2 / na ** 3)
        fppp = -e * (x ** 3 / na ** 2 + 6 * x ** 2 / na ** 3
                     + 18 * x / na ** 4 + 24 / na ** 5)
        f5 = -e * (x ** 5 / na ** 2 + 10 * x ** 4 / na ** 3
                   + 60 * x ** 3 / na ** 4 + 240 * x ** 2 / na ** 5
                   + 600 * x / na ** 6 + 720 / na ** 7)
    tail = integral + f / 2 - fp / 12 + fppp / 720
    err = abs(f5) / 30240 + 1e-16 * abs(partial)
    if err > acc.abs_tol:
        raise TruncationError("lerch_phi2 Euler-Maclaurin tail above tol")
    return partial + tail, err, n_cut


def lerch_phi2(z: float, a: float, acc: SpecFunAccuracy = DEFAULT_ACC) -> float:
    """Hurwitz-Lerch transcendent at s = 2: sum_{n>=0} z^n / (n+a)^2.

    At z = 1 this is the Hurwitz zeta zeta(2, a); at a = 1/4 that value
    is C = pi^2 + 8G.
    """
    if not (0.0 <= z <= 1.0):
        raise DomainError("lerch_phi2 requires 0 <= z <= 1")
    if not a > 0:
        raise DomainError("lerch_phi2 requires a > 0")
    return _lerch_phi2_any(z, a, acc)[0]


def _archimedean_g(t, acc: SpecFunAccuracy = DEFAULT_ACC):
    """C - e^{-t/2} Phi(e^{-2t}, 2, 1/4) for t >= 0: (value, err, terms).

    This is (4x) the archimedean piece of the prime-side evaluator; it
    behaves like 2 t log(1/t) near zero and tends to C as t -> inf.
    """
    t = float(t)
    if t == 0.0:
        return 0.0, 0.0, 0
    val, err, terms = _lerch_phi2_any(math.exp(-2 * t), 0.25, acc)
    return C_QUARTER - math.exp(-t / 2) * val, math.exp(-t / 2) * err, terms


def archimedean_g_values(ts: np.ndarray) -> np.ndarray:
    """Vectorized C - e^{-t/2} Phi(e^{-2t}, 2, 1/4) on a grid of t >= 0.

    Buckets the grid by magnitude so the geometric term count adapts:
    sum over j of 16 exp(-(4j+1)t/2) / (4j+1)^2 needs ~60/(2t) terms.
    Points below the smallest bucket fall back to the scalar path.
    """
    ts = np.asarray(ts, dtype=np.float64)
    shape = ts.shape
    ts = ts.ravel()
    out = np.empty_like(ts)
    edges = [(0.5, np.inf, 70), (0.05, 0.5, 700), (5e-3, 0.05, 7000)]
    done = np.zeros(ts.shape, dtype=bool)
    for lo, hi, nterms in edges:
        m = (ts >= lo) & (ts < hi)
        if m.any():
            q = (4 * np.arange(nterms) + 1).astype(np.float64)
            wq = 16.0 / q ** 2
            sub = ts[m]
            series = np.empty_like(sub)
            block = max(1, int(4e6 / nterms))
            for i in range(0, sub.size, block):
                sl = slice(i, min(i + block, sub.size))
                series[sl] = np.exp(-0.5 * np.outer(sub[sl], q)) @ wq
            out[m] = C_QUARTER - series
            done |= m
    rest = ~done
    if rest.any():
        out[rest] = [_archimedean_g(t)[0] for t in ts[rest]]
    return out.reshape(shape)


def g_infty_smallt(t: float, terms: int,
                   acc: SpecFunAccuracy = DEFAULT_ACC) -> float:
    """Small-t expansion of C - e^{-t/2} Phi(e^{-2t}, 2, 1/4).

    Evaluates 2 t log(1/t) + A t - sum_{k=2}^{terms} zeta(2-k,1/4) (-2t)^k/k!
    and fails if the first omitted term exceeds the accuracy target.
    """
    if not (0.0 < t < 1.0):
        raise DomainError("g_infty_smallt requires 0 < t < 1")
    if terms < 2:
        raise DomainError("g_infty_smallt requires terms >= 2")
    s = 2 * t * math.log(1 / t) + A_SMALLT * t
    for k in range(2, terms + 1):
        s -= hurwitz_zeta_nonpos(k) * (-2 * t) ** k / math.factorial(k)
    k = terms + 1
    omitted = abs(hurwitz_zeta_nonpos(k)) * (2 * t) ** k / math.factorial(k)
    if omitted > acc.abs_tol:
        raise TruncationError(
            "g_infty_smallt: omitted term %g above tol at %d terms"
            % (omitted, terms))
    return s


def validate_constants(tol: float = 1e-15) -> None:
    """Re-derive the stored constants from their defining series."""
    # Catalan via the directly summed series with an averaged tail
    n = np.arange(200_000)
    terms = (-1.0) ** n / (2 * n + 1) ** 2
    partial = float(np.sum(terms))
    g_est = partial + 0.5 * (-1.0) ** len(n) / (2 * len(n) + 1) ** 2
    if abs(g_est - CATALAN) > 1e-12:
        raise AssertionError("stored Catalan constant out of tolerance")
    # Euler-Mascheroni via digamma(1): psi(1) = -gamma0
    if abs(_digamma_any(1.0) + EULER_GAMMA) > tol:
        raise AssertionError("stored Euler constant inconsistent with digamma")
    if abs(C_QUARTER - lerch_phi2(1.0, 0.25)) > 1e-12:
        raise AssertionError("C = pi^2 + 8G inconsistent with zeta(2,1/4)")
