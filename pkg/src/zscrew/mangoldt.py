"""Prime-side arithmetic: von Mangoldt table and the screw function Psi.

The central object is

    Psi(t) = 4(e^{t/2} + e^{-t/2} - 2)
             - sum_{n <= e^t} Lambda(n)/sqrt(n) * (t - log n)
             + (t/2) (digamma(1/4) - log pi)
             + (1/4) (C - e^{-t/2} Phi(e^{-2t}, 2, 1/4)),

extended to the real line as an even function (|t| at entry).  The prime
sum is the expensive part; the table stores compensated prefix sums of
Lambda(n)/sqrt(n) and Lambda(n) log(n)/sqrt(n) over the sorted prime
powers, so a single evaluation is two binary searches:

    sum_{n <= e^t} Lambda(n)/sqrt(n) (t - log n) = t*A[k] - B[k].

Membership n <= e^t is decided by log(n) <= t in binary64; a
misclassified boundary point is harmless because its weight vanishes.

Shifted variants Psi_omega (zero-free-region diagnostics) and the shift
identity connecting them are also implemented here.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from . import specfun
from ._sums import kahan_cumsum_into
from .errors import (CapacityError, DataFormatError, DomainError,
                     InsufficientSamplingError, RangeError)

LOG_PI = math.log(math.pi)

#: slope constant of the closed-form derivative of Psi on (0, log 2)
PSI_DERIV_C = (math.pi / 4
               - (specfun.EULER_GAMMA + 3 * math.log(2) + LOG_PI) / 2)

_MEMORY_BUDGET = 2 ** 31          # largest n covered by default
_DENSE_LIMIT = 2 ** 24            # cap for materializing dense Lambda values
_CACHE_MAGIC = b"ZSCREWLM"
_CACHE_VERSION = 1


@dataclass
class MangoldtTable:
    """Sorted prime powers with Lambda values and evaluation prefix sums.

    Lambda(n) equals log(n) at the primes, so only the proper powers
    (positions `pw_pos`, values `pw_lam`) are stored separately; this
    keeps a 2^31 table under 3 GB.
    """

    limit: int
    prime_powers: np.ndarray          # n with Lambda(n) != 0, ascending
    log_n: np.ndarray                 # log of each entry
    pw_pos: np.ndarray                # indices of proper powers p^k, k >= 2
    pw_lam: np.ndarray                # their Lambda = log p
    prefix_a: np.ndarray              # running sums of Lambda(n)/sqrt(n)
    prefix_b: np.ndarray              # running sums of Lambda(n) log(n)/sqrt(n)
    _omega_cache: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.prime_powers)

    def lam_slice(self, k: int) -> np.ndarray:
        """Lambda values of the first k prime powers."""
        out = self.log_n[:k].copy()
        cut = np.searchsorted(self.pw_pos, k)
        out[self.pw_pos[:cut]] = self.pw_lam[:cut]
        return out

    @property
    def lam(self) -> np.ndarray:
        return self.lam_slice(len(self))

    @property
    def values(self) -> np.ndarray:
        """Dense Lambda(0..limit) array; only for small tables."""
        if self.limit > _DENSE_LIMIT:
            raise CapacityError(
                "dense values capped at limit <= %d" % _DENSE_LIMIT)
        dense = np.zeros(self.limit + 1)
        dense[self.prime_powers] = self.lam
        return dense

    def lam_at(self, n: int) -> float:
        """Lambda(n) by binary search (0.0 off the prime powers)."""
        i = int(np.searchsorted(self.prime_powers, n))
        if i >= len(self.prime_powers) or self.prime_powers[i] != n:
            return 0.0
        j = np.searchsorted(self.pw_pos, i)
        if j < len(self.pw_pos) and self.pw_pos[j] == i:
            return float(self.pw_lam[j])
        return float(self.log_n[i])

    def chebyshev_psi(self, x: float) -> float:
        """Chebyshev psi(x) = sum_{n<=x} Lambda(n)."""
        k = int(np.searchsorted(self.prime_powers, int(x), side="right"))
        return float(np.sum(self.lam_slice(k)))

    def index_for(self, t: float) -> int:
        """Number of prime powers with log n <= t."""
        return int(np.searchsorted(self.log_n, t, side="right"))

    def omega_prefixes(self, omega: float):
        """Prefix sums of Lambda/n^{1/2+omega} and its log-weighted twin."""
        key = float(omega)
        if key not in self._omega_cache:
            w = self.lam * np.exp(-(0.5 + omega) * self.log_n)
            a = np.empty(len(w))
            b = np.empty(len(w))
            kahan_cumsum_into(w, a, (0.0, 0.0))
            kahan_cumsum_into(w * self.log_n, b, (0.0, 0.0))
            if len(self._omega_cache) > 3:
                self._omega_cache.clear()
            self._omega_cache[key] = (a, b)
        return self._omega_cache[key]


@dataclass
class PsiEvalResult:
    """Value of a prime-side evaluation with its truncation accounting."""

    value: float
    prime_terms_used: int
    series_terms_used: int
    est_error: float


def _sieve_primes(limit: int) -> np.ndarray:
    """Primes <= limit by a segmented sieve of Eratosthenes (uint32)."""
    root = int(math.isqrt(limit))
    small = np.ones(root + 1, dtype=bool)
    small[:2] = False
    for p in range(2, int(math.isqrt(root)) + 1):
        if small[p]:
            small[p * p::p] = False
    base = np.flatnonzero(small).astype(np.int64)

    seg = 1 << 24
    chunks = []
    for lo in range(2, limit + 1, seg):
        hi = min(lo + seg, limit + 1)
        mark = np.ones(hi - lo, dtype=bool)
        for p in base:
            start = max(p * p, (lo + p - 1) // p * p)
            if start >= hi:
                if p * p >= hi:
                    break
                continue
            mark[start - lo::p] = False
        if lo <= 2:
            mark[:max(0, 2 - lo)] = False
        chunks.append((np.flatnonzero(mark) + lo).astype(np.uint32))
    return np.concatenate(chunks)


def build_table(limit: int, budget: int = _MEMORY_BUDGET) -> MangoldtTable:
    """Sieve [2, limit] and assemble the evaluation table."""
    if limit < 2:
        raise DomainError("build_table requires limit >= 2")
    if limit > budget:
        raise CapacityError(
            "limit %d exceeds memory budget %d" % (limit, budget))

    primes = _sieve_primes(limit)
    # proper prime powers p^k, k >= 2
    extra_n = []
    extra_lam = []
    root = int(math.isqrt(limit))
    for p in primes[primes <= root]:
        p = int(p)
        q = p * p
        lp = math.log(p)
        while q <= limit:
            extra_n.append(q)
            extra_lam.append(lp)
            q *= p
    n = primes
    if extra_n:
        extra = np.asarray(extra_n, dtype=n.dtype)
        order = np.argsort(extra, kind="stable")
        extra = extra[order]
        extra_lam = np.asarray(extra_lam)[order]
        pos = np.searchsorted(n, extra)
        n = np.insert(n, pos, extra)
        pw_pos = (pos + np.arange(len(pos))).astype(np.int64)
        pw_lam = np.asarray(extra_lam)
    else:
        pw_pos = np.empty(0, dtype=np.int64)
        pw_lam = np.empty(0)
    log_n = np.log(n.astype(np.float64))

    prefix_a = np.empty(len(n))
    prefix_b = np.empty(len(n))
    state_a = (0.0, 0.0)
    state_b = (0.0, 0.0)
    step = 1 << 22
    for i in range(0, len(n), step):
        sl = slice(i, min(i + step, len(n)))
        lam = log_n[sl].copy()
        inside = (pw_pos >= sl.start) & (pw_pos < sl.stop)
        lam[pw_pos[inside] - sl.start] = pw_lam[inside]
        w = lam * np.exp(-0.5 * log_n[sl])
        state_a = kahan_cumsum_into(w, prefix_a[sl], state_a)
        state_b = kahan_cumsum_into(w * log_n[sl], prefix_b[sl], state_b)
    return MangoldtTable(limit=int(limit), prime_powers=n, log_n=log_n,
                         pw_pos=pw_pos, pw_lam=pw_lam,
                         prefix_a=prefix_a, prefix_b=prefix_b)


def chebyshev_weighted(t: float, table: MangoldtTable) -> float:
    """phi(t) = sum_{n <= e^t} Lambda(n)/sqrt(n) (t - log n)."""
    if t < 0:
        raise DomainError("chebyshev_weighted requires t >= 0")
    _check_range(t, table)
    k = table.index_for(t)
    if k == 0:
        return 0.0
    return t * table.prefix_a[k - 1] - table.prefix_b[k - 1]


def chebyshev_weighted_values(ts: np.ndarray, table: MangoldtTable) -> np.ndarray:
    """Vectorized phi(t) over a grid (grid must satisfy e^t <= limit)."""
    ts = np.asarray(ts, dtype=np.float64)
    if ts.size and float(ts.max()) > math.log(table.limit) + 1e-12:
        raise RangeError("grid exceeds table range")
    k = np.searchsorted(table.log_n, ts, side="right")
    a = np.concatenate(([0.0], table.prefix_a))
    b = np.concatenate(([0.0], table.prefix_b))
    return ts * a[k] - b[k]


def asymptotic_ratio(t: float, table: MangoldtTable) -> float:
    """phi(t) / (4 e^{t/2}); tends to 1 as t grows."""
    return chebyshev_weighted(t, table) / (4 * math.exp(t / 2))


def _check_range(t: float, table: MangoldtTable) -> None:
    if abs(t) > math.log(table.limit) + 1e-12:
        raise RangeError(
            "e^|t| = %g exceeds table limit %d" % (math.exp(abs(t)), table.limit))


def psi_prime_side(t: float, table: MangoldtTable,
                   acc: specfun.SpecFunAccuracy = specfun.DEFAULT_ACC
                   ) -> PsiEvalResult:
    """Prime-side Psi(t); even extension via |t|."""
    t = abs(float(t))
    _check_range(t, table)
    arch, err, terms = specfun._archimedean_g(t, acc)
    k = table.index_for(t)
    prime_part = t * table.prefix_a[k - 1] - table.prefix_b[k - 1] if k else 0.0
    value = (4 * (math.exp(t / 2) + math.exp(-t / 2) - 2)
             - prime_part
             + t / 2 * (specfun.DIGAMMA_QUARTER - LOG_PI)
             + arch / 4)
    return PsiEvalResult(value, k, terms, err / 4 + 4e-16 * (1 + prime_part))


def psi_values(ts: np.ndarray, table: MangoldtTable) -> np.ndarray:
    """Vectorized prime-side Psi on a grid (even extension applied)."""
    ts = np.abs(np.asarray(ts, dtype=np.float64))
    arch = specfun.archimedean_g_values(ts)
    smooth = (4 * (np.exp(ts / 2) + np.exp(-ts / 2) - 2)
              + ts / 2 * (specfun.DIGAMMA_QUARTER - LOG_PI)
              + arch / 4)
    return smooth - chebyshev_weighted_values(ts, table)


class PsiPrime:
    """Callable prime-side Psi bound to a table; vector aware.

    Carries the kink locations (logs of prime powers) so quadrature
    routines can align panels with the derivative jumps.
    """

    def __init__(self, table: MangoldtTable,
                 acc: specfun.SpecFunAccuracy = specfun.DEFAULT_ACC):
        self.table = table
        self.acc = acc

    def __call__(self, t):
        if np.ndim(t) == 0:
            return psi_prime_side(float(t), self.table, self.acc).value
        return psi_values(np.asarray(t, dtype=float), self.table)

    @property
    def t_max(self) -> float:
        return math.log(self.table.limit)

    def kinks(self, t_hi: float) -> np.ndarray:
        """Ascending logs of prime powers below t_hi."""
        k = self.table.index_for(t_hi)
        return self.table.log_n[:k]


def psi_prime_derivative(t: float) -> float:
    """Closed-form Psi'(t) on (0, log 2), before the first prime term.

    Psi'(t) = 2(e^{t/2} - e^{-t/2}) + c - arctan(e^{t/2}) + artanh(e^{-t/2}),
    c = pi/4 - (gamma0 + 3 log 2 + log pi)/2.  Blows up (+inf) at 0+.
    """
    if not (0.0 < t < math.log(2)):
        raise DomainError("closed-form derivative valid only on (0, log 2)")
    x = math.exp(t / 2)
    return (2 * (x - 1 / x) + PSI_DERIV_C - math.atan(x) + math.atanh(1 / x))


def psi_omega_prime_side(t: float, omega: float, table: MangoldtTable,
                         acc: specfun.SpecFunAccuracy = specfun.DEFAULT_ACC
                         ) -> PsiEvalResult:
    """Shifted variant Psi_omega(t) by its closed form; even in t.

    The generic branch needs |omega| != 1/2 (squared denominators
    1 -+ 2*omega); omega = +1/2 dispatches to the dedicated closed form.
    """
    t = abs(float(t))
    _check_range(t, table)
    if abs(omega - 0.5) < 1e-12:
        return _psi_half(t, table, acc)
    if abs(omega + 0.5) < 1e-12:
        raise DomainError("generic branch undefined at omega = -1/2")

    k = table.index_for(t)
    if k:
        a_pref, b_pref = table.omega_prefixes(omega)
        prime_part = t * a_pref[k - 1] - b_pref[k - 1]
    else:
        prime_part = 0.0
    p = 0.25 + omega / 2
    om2 = 1 - 4 * omega * omega
    bracket = (math.exp((0.5 - omega) * t) / (1 - 2 * omega) ** 2
               + math.exp(-(0.5 + omega) * t) / (1 + 2 * omega) ** 2
               - (4 - 2 * (1 - omega * t) * om2) / om2 ** 2)
    lerch, lerr, terms = specfun._lerch_phi2_any(math.exp(-2 * t), p, acc)
    value = (4 * bracket
             + t / 2 * (specfun._digamma_any(p) - LOG_PI)
             + (specfun._trigamma_any(p)
                - math.exp(-(0.5 + omega) * t) * lerch) / 4
             - prime_part)
    return PsiEvalResult(value, k, terms, lerr / 4 + 4e-16 * (1 + abs(prime_part)))


def _psi_half(t: float, table: MangoldtTable,
              acc: specfun.SpecFunAccuracy) -> PsiEvalResult:
    """Psi_{1/2}(t): the omega = 1/2 closed form (denominators degenerate)."""
    k = table.index_for(t)
    if k:
        a_pref, b_pref = table.omega_prefixes(0.5)
        prime_part = t * a_pref[k - 1] - b_pref[k - 1]
    else:
        prime_part = 0.0
    lerch, lerr, terms = specfun._lerch_phi2_any(math.exp(-2 * t), 0.5, acc)
    value = (0.5 * (t + 1) ** 2 - 1.5 + math.exp(-t)
             - t / 2 * (specfun.EULER_GAMMA + 2 * math.log(2) + LOG_PI)
             + (math.pi ** 2 / 2 - math.exp(-t) * lerch) / 4
             - prime_part)
    return PsiEvalResult(value, k, terms, lerr / 4 + 4e-16 * (1 + abs(prime_part)))


def psi_omega_shift(psi_omega_samples, eta: float, t: float) -> float:
    """Shift identity: Psi_{omega+eta}(t) from samples of Psi_omega.

    Psi_{omega+eta}(t) = e^{-eta t} Psi_omega(t)
                         + 2 eta    int_0^t e^{-eta u} Psi_omega(u) du
                         + eta^2    int_0^t (t-u) e^{-eta u} Psi_omega(u) du

    `psi_omega_samples` is an (u, values) pair on a grid covering [0, t]
    whose last point is t; composite Simpson quadrature on the grid.
    """
    if eta <= 0:
        raise DomainError("shift requires eta > 0")
    u, vals = psi_omega_samples
    u = np.asarray(u, dtype=float)
    vals = np.asarray(vals, dtype=float)
    if u[0] > 1e-12 or u[-1] < t - 1e-9:
        raise InsufficientSamplingError("samples must cover [0, t]")
    m = u <= t + 1e-12
    u, vals = u[m], vals[m]
    if abs(u[-1] - t) > 1e-9:
        raise InsufficientSamplingError("grid must contain the endpoint t")
    if np.max(np.diff(u)) > 2.5e-3:
        raise InsufficientSamplingError("grid step above 2.5e-3")
    w = np.exp(-eta * u) * vals
    i1 = simpson(w, x=u)
    i2 = simpson((t - u) * w, x=u)
    return float(math.exp(-eta * t) * vals[-1] + 2 * eta * i1 + eta * eta * i2)


def xi_log_deriv_dirichlet(s: float, table: MangoldtTable) -> float:
    """(xi'/xi)(s) for real s > 1 from the Dirichlet series over primes.

    1/(s-1) + 1/s - (1/2)log pi + (1/2)digamma(s/2) - sum Lambda(n) n^{-s},
    the prime sum completed past the table by the prime-counting
    asymptotic with the boundary fluctuation term:

        sum_{n>X} Lambda(n)/n^s ~ X^{1-s}/(s-1) - X^{-s}(psi_cheb(X) - X).
    """
    if s <= 1:
        raise DomainError("Dirichlet route needs s > 1")
    lam = table.lam_slice(len(table))
    prime_sum = float(np.dot(lam, np.exp(-s * table.log_n)))
    X = float(table.limit)
    fluct = table.chebyshev_psi(X) - X
    prime_sum += X ** (1 - s) / (s - 1) - X ** (-s) * fluct
    return (1 / (s - 1) + 1 / s - 0.5 * LOG_PI
            + 0.5 * specfun.digamma(s / 2) - prime_sum)


def save_cache(table: MangoldtTable, path: str) -> None:
    """Binary sieve cache: 16-byte header + dense little-endian f8 Lambda."""
    dense = table.values  # raises CapacityError above the dense cap
    with open(path, "wb") as f:
        f.write(_CACHE_MAGIC)
        f.write(struct.pack("<II", _CACHE_VERSION, table.limit))
        f.write(dense.astype("<f8").tobytes())


def load_cache(path: str) -> MangoldtTable:
    """Rebuild a table from a binary sieve cache."""
    with open(path, "rb") as f:
        head = f.read(16)
        if len(head) != 16 or head[:8] != _CACHE_MAGIC:
            raise DataFormatError("bad cache header in %s" % path)
        version, limit = struct.unpack("<II", head[8:])
        if version != _CACHE_VERSION:
            raise DataFormatError("unsupported cache version %d" % version)
        dense = np.frombuffer(f.read(), dtype="<f8")
    if len(dense) != limit + 1:
        raise DataFormatError("cache payload length mismatch")
    n = np.flatnonzero(dense).astype(np.int64)
    lam = dense[n]
    log_n = np.log(n.astype(np.float64))
    pw_pos = np.flatnonzero(np.abs(lam - log_n) > 1e-9).astype(np.int64)
    pw_lam = lam[pw_pos]
    w = lam * np.exp(-0.5 * log_n)
    prefix_a = np.empty(len(n))
    prefix_b = np.empty(len(n))
    kahan_cumsum_into(w, prefix_a, (0.0, 0.0))
    kahan_cumsum_into(w * log_n, prefix_b, (0.0, 0.0))
    return MangoldtTable(limit=int(limit), prime_powers=n, log_n=log_n,
                         pw_pos=pw_pos, pw_lam=pw_lam,
                         prefix_a=prefix_a, prefix_b=prefix_b)
