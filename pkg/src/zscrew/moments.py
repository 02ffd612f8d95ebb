"""Moments of the screw function, Li coefficients, and Hankel criteria.

The moment sequence

    mu_n = int_0^inf (1/4) e^{-t/2} Psi(t) t^n dt

is a Stieltjes moment sequence exactly when Psi >= 0, which ties it to
the positivity diagnostics.  Three independent routes meet here:

  * quadrature of the integral (this module),
  * zero sums for the Li coefficients lambda_n,
  * exact integer-coefficient linear transforms between {mu_n} and
    {lambda_n}, their inverses, and the recurrence through the power
    series coefficients a_j of the xi-function in the 1/(1-w) chart.

The quadrature is composite Gauss-Legendre with panel boundaries at the
integrand's derivative jumps (logs of prime powers) and geometric
refinement at the t log(1/t) cusp at zero.  Beyond the prime table's
ceiling the integrand switches to the zero-side point evaluator (the
e^{-t/2} weight has already shrunk by then); the truncation past T_cut
is bounded via sup |Psi| < 0.094 and recorded per entry.

Hankel determinants of the moments run in extended precision (mpmath),
with first-order error propagation from the recorded moment errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy.special import gammaincc

from .errors import ConditioningError, DomainError
from .mangoldt import PsiPrime
from .zerotable import ZeroTable, psi_zero_point, tail_sigma2

PSI_SUP = 0.094          # numerically-true supremum bound 2 sum 1/gamma^2
_GL2 = np.polynomial.legendre.leggauss(2)
_GL8 = np.polynomial.legendre.leggauss(8)
_GL10 = np.polynomial.legendre.leggauss(10)


@dataclass
class MomentSequence:
    values: np.ndarray               # mu_0 .. mu_N
    method: str                      # 'quadrature' | 'from-li'
    est_errors: np.ndarray

    def __getitem__(self, n: int) -> float:
        return float(self.values[n])

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class LiSequence:
    values: np.ndarray               # lambda_1 .. lambda_M
    method: str                      # 'zero-sum' | 'from-moments' | 'recurrence'

    def get(self, n: int) -> float:
        if not 1 <= n <= len(self.values):
            raise DomainError("lambda_%d not available" % n)
        return float(self.values[n - 1])

    def __len__(self) -> int:
        return len(self.values)


class HybridPsi:
    """Psi evaluator over all of [0, inf): prime side, then zero side.

    Below the prime table's ceiling log(limit) the exact prime-side
    formula applies; above it the zero sum with expected-tail correction
    takes over (absolute accuracy ~1e-7 with 1e5 zeros, weighted by
    e^{-t/2} < 2e-5 there).
    """

    def __init__(self, psi_prime: PsiPrime, zeros: ZeroTable | None = None,
                 t_switch: float | None = None):
        self.psi_prime = psi_prime
        self.zeros = zeros
        ceil = psi_prime.t_max
        self.t_switch = min(t_switch, ceil) if t_switch else ceil

    def __call__(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        out = np.empty_like(t)
        low = t <= self.t_switch
        if low.any():
            out[low] = self.psi_prime(t[low])
        if (~low).any():
            if self.zeros is None:
                raise DomainError("no zero table for t beyond the prime ceiling")
            out[~low] = psi_zero_point(t[~low], self.zeros)
        return float(out[0]) if scalar else out

    def kinks(self, t_hi: float) -> np.ndarray:
        return self.psi_prime.kinks(min(t_hi, self.t_switch))


def _panelize(psi, t_cut: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes, weights and psi values for [0, t_cut], kink-aligned panels.

    Geometric panels resolve the t log(1/t) cusp at 0; panels narrower
    than 1e-3 get a 2-point rule, wider ones an 8-point rule; the smooth
    region past the last kink is split into <= 0.5-wide panels.
    """
    kinks = psi.kinks(t_cut) if hasattr(psi, "kinks") else np.empty(0)
    first = float(kinks[0]) if len(kinks) else min(0.6, t_cut)
    geo = first / 2.0 ** np.arange(18, 0, -1)
    bounds = [0.0]
    bounds.extend(g for g in geo if g < first)
    bounds.extend(float(k) for k in kinks if k < t_cut)
    last = bounds[-1]
    if t_cut > last:
        n_sm = int(math.ceil((t_cut - last) / 0.5))
        bounds.extend(last + (t_cut - last) * (i + 1) / n_sm
                      for i in range(n_sm))
    edges = np.unique(np.asarray(bounds))
    lo, hi = edges[:-1], edges[1:]
    widths = hi - lo
    nodes_parts, w_parts = [], []
    for (gx, gw), sel in ((_GL2, widths < 1e-3), (_GL8, widths >= 1e-3)):
        if sel.any():
            mid = 0.5 * (lo[sel] + hi[sel])
            half = 0.5 * widths[sel]
            nodes_parts.append((mid[:, None] + half[:, None] * gx).ravel())
            w_parts.append((half[:, None] * gw).ravel())
    nodes = np.concatenate(nodes_parts)
    wts = np.concatenate(w_parts)
    order = np.argsort(nodes, kind="stable")
    nodes, wts = nodes[order], wts[order]
    return nodes, wts, psi(nodes)


def _zero_segment_mu(zeros: ZeroTable, t_lo: float, t_hi: float,
                     n_max: int) -> np.ndarray:
    """(1/4) int_{t_lo}^{t_hi} e^{-t/2} t^n Psi_zero(t) dt, termwise exact.

    The zero-side series carries oscillations at every ordinate up to the
    cutoff; sampling rules alias them, so each cosine is integrated in
    closed form instead:

        int e^{-st} t^n dt  (s = 1/2 - i gamma)

    by the stable upward recurrence I_n = (boundary) + (n/s) I_{n-1}.
    The expected-tail constant (density model of the omitted zeros) is
    integrated against the plain e^{-t/2} t^n weight.
    """
    g = zeros.ordinates
    est = tail_sigma2(zeros.cutoff)
    w2 = 1.0 / (g * g)
    const = 2 * float(np.sum(w2)) + est
    s = 0.5 - 1j * g
    e_lo = np.exp(-s * t_lo)
    e_hi = np.exp(-s * t_hi)
    er_lo, er_hi = math.exp(-t_lo / 2), math.exp(-t_hi / 2)
    out = np.empty(n_max + 1)
    I_c = (e_lo - e_hi) / s                      # complex I_0 per zero
    I_r = 2 * (er_lo - er_hi)                    # real-axis I_0
    p_lo, p_hi = 1.0, 1.0                        # t^n at the endpoints
    for n in range(n_max + 1):
        if n > 0:
            p_lo *= t_lo
            p_hi *= t_hi
            I_c = (e_lo * p_lo - e_hi * p_hi + n * I_c) / s
            I_r = 2 * (er_lo * p_lo - er_hi * p_hi + n * I_r)
        out[n] = 0.25 * (const * I_r - 2 * float(np.dot(w2, I_c.real)))
    return out


class MomentQuadrature:
    """Shared quadrature data for all moments of one Psi evaluator.

    Kink-aligned composite panels over the prime-side range; the
    zero-side stretch (past the prime table's ceiling, when a HybridPsi
    is given) is integrated termwise in closed form.
    """

    def __init__(self, psi, t_cut: float = 50.0, n_max: int = 16):
        if t_cut < 40:
            raise DomainError("t_cut >= 40 required for usable moment tails")
        self.t_cut = float(t_cut)
        self.n_max = n_max
        zeros = getattr(psi, "zeros", None)
        switch = getattr(psi, "t_switch", self.t_cut)
        self.t_switch = min(switch, self.t_cut)
        self.nodes, self.weights, self.psi_vals = _panelize(psi, self.t_switch)
        self.base = 0.25 * self.weights * np.exp(-self.nodes / 2) * self.psi_vals
        if self.t_switch < self.t_cut:
            if zeros is None:
                raise DomainError(
                    "psi covers [0, %.2f] but t_cut = %.2f needs a zero table"
                    % (self.t_switch, self.t_cut))
            self._zero_seg = _zero_segment_mu(zeros, self.t_switch,
                                              self.t_cut, n_max)
        else:
            self._zero_seg = np.zeros(n_max + 1)

    def tail_bound(self, n: int) -> float:
        """(sup|Psi|/4) int_{T}^inf e^{-t/2} t^n dt via incomplete gamma."""
        return (PSI_SUP / 4) * 2.0 ** (n + 1) * math.gamma(n + 1) \
            * float(gammaincc(n + 1, self.t_cut / 2))

    def zero_segment_error(self, n: int) -> float:
        """Oscillatory-residual allowance for the zero-side stretch."""
        if self.t_switch >= self.t_cut:
            return 0.0
        w = 2.0 ** (n + 1) * math.gamma(n + 1) * float(
            gammaincc(n + 1, self.t_switch / 2)
            - gammaincc(n + 1, self.t_cut / 2))
        return 2e-7 * w / 4

    def mu(self, n: int) -> tuple[float, float]:
        if n > self.n_max:
            raise DomainError("engine built for n <= %d" % self.n_max)
        val = float(np.dot(self.base, self.nodes ** n)) + self._zero_seg[n]
        err = (self.tail_bound(n) + self.zero_segment_error(n)
               + 1e-14 * abs(val) * (n + 1))
        return val, err


def moment_mu(n: int, psi, t_cut: float = 50.0,
              acc=None) -> float:
    """mu_n = int_0^{T} (1/4) e^{-t/2} Psi(t) t^n dt + recorded tail bound.

    `psi` is a vector-aware callable covering [0, t_cut]; a HybridPsi
    (prime side to its ceiling, zero side beyond) realizes the full
    range.  One-shot variant of MomentQuadrature.
    """
    if n < 0:
        raise DomainError("moment index must be >= 0")
    return MomentQuadrature(psi, t_cut).mu(n)[0]


def moment_sequence(psi, n_max: int, t_cut: float = 50.0) -> MomentSequence:
    quadr = MomentQuadrature(psi, t_cut)
    vals, errs = zip(*(quadr.mu(n) for n in range(n_max + 1)))
    return MomentSequence(values=np.asarray(vals), method="quadrature",
                          est_errors=np.asarray(errs))


# ---------------------------------------------------------------------------
# exact linear transforms between moments and Li coefficients
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _li_row(m: int) -> tuple:
    """Exact coefficients of lambda_m = sum_k c_{m,k} mu_k (k <= m-1).

    c_{m,k} = m! (-1)^k [(2k - 4m + 1)^2 + 8m + 7] / [4 k! (k+3)! (m-k-1)!].
    """
    if m < 1:
        raise DomainError("Li index starts at 1")
    row = []
    for k in range(m):
        num = (2 * k - 4 * m + 1) ** 2 + 8 * m + 7
        c = Fraction(math.factorial(m) * num,
                     4 * math.factorial(k) * math.factorial(k + 3)
                     * math.factorial(m - k - 1))
        row.append(c if k % 2 == 0 else -c)
    return tuple(row)


@lru_cache(maxsize=None)
def _mu_row(n: int) -> tuple:
    """Exact coefficients of mu_n = sum_j d_{n,j} lambda_j (1 <= j <= n+1).

    d_{n,j} = n! (-1)^{j+1} sum_{k=1}^{n-j+2} k 2^{k-1} C(n-k+2, j).
    """
    row = []
    for j in range(1, n + 2):
        s = sum(k * 2 ** (k - 1) * math.comb(n - k + 2, j)
                for k in range(1, n - j + 3))
        c = Fraction(math.factorial(n) * s)
        row.append(c if (j + 1) % 2 == 0 else -c)
    return tuple(row)


def li_from_moments(mu, n: int) -> float:
    """lambda_n as the exact linear combination of mu_0 .. mu_{n-1}."""
    vals = mu.values if isinstance(mu, MomentSequence) else np.asarray(mu)
    if len(vals) < n:
        raise DomainError("need mu_0..mu_%d for lambda_%d" % (n - 1, n))
    row = _li_row(n)
    return float(sum(float(c) * v for c, v in zip(row, vals[:n])))


def moments_from_li(li, n: int) -> float:
    """mu_n as the exact linear combination of lambda_1 .. lambda_{n+1}."""
    vals = li.values if isinstance(li, LiSequence) else np.asarray(li)
    if len(vals) < n + 1:
        raise DomainError("need lambda_1..lambda_%d for mu_%d" % (n + 1, n))
    row = _mu_row(n)
    return float(sum(float(c) * v for c, v in zip(row, vals[:n + 1])))


@dataclass
class TransformMatrices:
    """Maps between moment and Li prefixes, exact and float.

    L sends (mu_0..mu_N) to (lambda_1..lambda_{N+1}), M inverts it.  The
    exact rational forms multiply to the identity exactly; the float
    forms carry factorial-scale entries, so their product reaches the
    identity only to ~eps relative to the entry magnitudes.
    """

    L: np.ndarray
    M: np.ndarray
    L_exact: tuple
    M_exact: tuple

    def roundtrip_exact(self, x) -> tuple:
        """M(L(x)) in exact rational arithmetic (identity for any x)."""
        xf = [Fraction(v) for v in x]
        y = [sum(c * v for c, v in zip(row, xf)) for row in self.L_exact]
        return tuple(sum(c * v for c, v in zip(row, y)) for row in self.M_exact)


def transform_matrices(N: int) -> TransformMatrices:
    """Both transform matrices for indices through N; checked inverses."""
    if N > 64:
        raise DomainError("coefficient growth past N = 64 needs wider floats")
    size = N + 1
    L_exact = []
    M_exact = []
    for i in range(size):
        lrow = list(_li_row(i + 1)) + [Fraction(0)] * (size - i - 1)
        mrow = list(_mu_row(i)) + [Fraction(0)] * (size - i - 1)
        L_exact.append(tuple(lrow))
        M_exact.append(tuple(mrow))
    for i in range(size):
        for j in range(size):
            acc = sum(L_exact[i][k] * M_exact[k][j] for k in range(size))
            if acc != (1 if i == j else 0):
                raise ConditioningError(
                    "transform rows %d,%d fail the exact inverse check" % (i, j))
    L = np.array([[float(c) for c in row] for row in L_exact])
    M = np.array([[float(c) for c in row] for row in M_exact])
    scale = float((np.abs(L) @ np.abs(M)).max())
    resid = float(np.abs(L @ M - np.eye(size)).max())
    if resid > 1e-13 * scale:
        raise ConditioningError("rounded transforms exceed eps-level round-trip")
    return TransformMatrices(L=L, M=M, L_exact=tuple(L_exact),
                             M_exact=tuple(M_exact))


# ---------------------------------------------------------------------------
# xi power-series coefficients and the moment recurrence
# ---------------------------------------------------------------------------

def a_from_li(li, j_max: int) -> np.ndarray:
    """Coefficients of xi(1/(1-w)) = 1 + sum a_j w^j, solved forward from

        lambda_{n+1} = (n+1) a_{n+1} - sum_{j=1}^{n} a_{n-j+1} lambda_j .
    """
    lam = li.values if isinstance(li, LiSequence) else np.asarray(li)
    if len(lam) < j_max:
        raise DomainError("need lambda_1..lambda_%d" % j_max)
    a = np.empty(j_max)
    for n in range(j_max):
        s = lam[n] + sum(a[n - j] * lam[j - 1] for j in range(1, n + 1))
        a[n] = s / (n + 1)
    return a


def b_coeff(n: int, k: int, a_coeffs) -> float:
    """Positive coefficients b_{n,k} of the moment recurrence.

    b_{n,k} = n!/(k!(k+3)!) [ (n+1)!/(n-k)! ((k-(4n+3)/2)^2 + 2n + 15/4)
              + sum_{j=k+1}^n j!/(j-k-1)! ((2j-k)^2 + k + 2) a_{n-j+1} ].
    """
    if k > n:
        raise DomainError("b_{n,k} needs k <= n")
    a = np.asarray(a_coeffs, dtype=float)
    if len(a) < n - k:
        raise DomainError("missing a-coefficients: need a_1..a_%d" % (n - k))
    quad_term = (Fraction(2 * k - 4 * n - 3, 2) ** 2
                 + 2 * n + Fraction(15, 4))
    lead = Fraction(math.factorial(n + 1), math.factorial(n - k)) * quad_term
    tail = 0.0
    for j in range(k + 1, n + 1):
        w = (math.factorial(j) // math.factorial(j - k - 1)) \
            * ((2 * j - k) ** 2 + k + 2)
        tail += w * a[n - j]
    pref = Fraction(math.factorial(n),
                    math.factorial(k) * math.factorial(k + 3))
    return float(pref) * (float(lead) + tail)


def recurrence_residual(n: int, mu, a_coeffs) -> float:
    """Residual of (-1)^n mu_n = (n+1)! a_{n+1} - sum (-1)^k b_{n,k} mu_k."""
    vals = mu.values if isinstance(mu, MomentSequence) else np.asarray(mu)
    a = np.asarray(a_coeffs, dtype=float)
    rhs = math.factorial(n + 1) * a[n]
    for k in range(n):
        rhs -= (-1.0) ** k * b_coeff(n, k, a) * vals[k]
    return float((-1.0) ** n * vals[n] - rhs)


# ---------------------------------------------------------------------------
# Hankel determinants in extended precision
# ---------------------------------------------------------------------------

@dataclass
class HankelResult:
    det: float
    logdet: float | None          # Cholesky log-det when positive definite
    positive_definite: bool
    err_bound: float              # |d det| from the recorded moment errors

    def __float__(self):
        return self.det


def hankel_det(mu, n: int, shifted: bool = False,
               dps: int = 60) -> HankelResult:
    """Determinant of the (n+1)x(n+1) Hankel matrix [mu_{i+j(+1)}].

    Extended-precision elimination (the entries grow like n! 2^n and the
    determinants cancel catastrophically in binary64).  First-order error
    propagation sums |cofactor| * est_error over entries; an indefinite
    result at desk scale signals accumulated moment error, not a failed
    positivity criterion, and is flagged through `positive_definite`.
    """
    vals = mu.values if isinstance(mu, MomentSequence) else np.asarray(mu)
    errs = (mu.est_errors if isinstance(mu, MomentSequence)
            else np.zeros_like(vals))
    off = 1 if shifted else 0
    need = 2 * n + off
    if len(vals) <= need:
        raise DomainError("need mu_0..mu_%d" % need)
    size = n + 1
    with mp.workdps(dps):
        H = mp.matrix(size, size)
        for i in range(size):
            for j in range(size):
                H[i, j] = mp.mpf(float(vals[i + j + off]))
        det = mp.det(H)
        pd = True
        logdet = mp.mpf(0)
        try:
            Lch = mp.cholesky(H)
            for i in range(size):
                logdet += 2 * mp.log(Lch[i, i])
        except ValueError:
            pd = False
        err = mp.mpf(0)
        if np.any(errs > 0):
            Hinv = H ** -1
            for i in range(size):
                for j in range(size):
                    cof = det * Hinv[j, i]
                    err += abs(cof) * float(errs[i + j + off])
        return HankelResult(det=float(det),
                            logdet=float(logdet) if pd else None,
                            positive_definite=pd,
                            err_bound=float(err))
