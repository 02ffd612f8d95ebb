"""Zero-side spectral computations over nontrivial zeta-zero ordinates.

The even extension of the screw function has the everywhere-convergent
representation

    Psi(t) = sum_gamma (1 - cos(gamma t)) / gamma^2 ,

the sum running over all zeros gamma of xi(1/2 - iz) with multiplicity;
by the gamma -> -gamma symmetry every operation here computes
2 * (sum over positive ordinates) of a real pairing.

Sums are truncated at the table cutoff.  The omitted tail is controlled
through the Riemann-von Mangoldt density dN(u) ~ (1/2pi) log(u/2pi) du:
`tail_sigma2` integrates 2/u^2 against it in closed form, giving both a
one-sided interval bound (each omitted Psi term lies in [0, 2/gamma^2])
and, where a point estimate is wanted, an expected-tail correction whose
residual is only the oscillatory fluctuation (~1e-8 at 1e5 zeros).

Ordinates are ingested from plain-text tables, one per line; nothing
here computes zeros from scratch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DataFormatError, DomainError
from ._sums import pairwise_sum

TWO_PI = 2 * math.pi


@dataclass
class ZeroTable:
    """Ascending positive ordinates gamma of xi(1/2 - iz) zeros."""

    ordinates: np.ndarray
    source: str = ""
    assumed_simple: bool = True   # all known zeros are simple; not verifiable
    #                               from ordinates alone

    def __len__(self) -> int:
        return len(self.ordinates)

    @property
    def cutoff(self) -> float:
        return float(self.ordinates[-1])

    def head(self, m: int) -> np.ndarray:
        return self.ordinates[:m]


@dataclass
class TailModel:
    """Bound for the truncated sum sum_{gamma > cutoff} 2/gamma^2."""

    cutoff: float
    mode: str = "density-integral"     # or "none"
    est: float = 0.0

    @classmethod
    def for_table(cls, table: ZeroTable, mode: str = "density-integral"):
        if mode == "none":
            return cls(table.cutoff, "none", 0.0)
        return cls(table.cutoff, mode, tail_sigma2(table.cutoff))


def rvm_count(T) -> float:
    """Riemann-von Mangoldt main term (T/2pi) log(T/2pi) - T/2pi."""
    x = np.asarray(T, dtype=float) / TWO_PI
    return x * np.log(x) - x


def _density_gate(g: np.ndarray) -> None:
    """Zero counts must track the RvM density within +-2."""
    mids = 0.5 * (g[:-1] + g[1:])
    dev = np.arange(1, g.size) - rvm_count(mids)
    worst = float(np.abs(dev).max()) if dev.size else 0.0
    if worst > 2.0:
        raise DataFormatError(
            "ordinate counts deviate from the zero-counting density by %.2f "
            "(corrupt or non-zero data?)" % worst)


def load_zeros(path: str, limit: int | None = None) -> ZeroTable:
    """Read ascending ordinates from a text file (one per line, '#' comments)."""
    vals = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                v = float(s)
            except ValueError:
                raise DataFormatError(
                    "%s:%d: not a decimal ordinate: %r" % (path, lineno, s))
            if vals and v <= vals[-1]:
                raise DataFormatError(
                    "%s:%d: ordinates must be strictly ascending" % (path, lineno))
            vals.append(v)
            if limit is not None and len(vals) >= limit:
                break
    if not vals:
        raise DataFormatError("%s: no ordinates found" % path)
    g = np.asarray(vals)
    if not (14.0 < g[0] < 14.2):
        raise DataFormatError(
            "%s: first ordinate %.6f not in (14.0, 14.2)" % (path, g[0]))
    _density_gate(g)
    return ZeroTable(ordinates=g, source=path)


def tail_sigma2(cutoff: float) -> float:
    """Density-model value of sum_{gamma > cutoff} 2/gamma^2.

    (1/pi) * int_cutoff^inf log(u/2pi)/u^2 du = (log(cutoff/2pi) + 1)/(pi*cutoff).
    """
    if cutoff < 100:
        raise DomainError("tail model needs cutoff >= 100")
    return (math.log(cutoff / TWO_PI) + 1) / (math.pi * cutoff)


def psi_zero_side(t: float, table: ZeroTable,
                  tail: TailModel) -> tuple[float, float]:
    """Interval enclosure of Psi(t) from the zero sum.

    Central value 2 sum_{0 < gamma <= cutoff} (1 - cos(gamma t))/gamma^2;
    every omitted term lies in [0, 2/gamma^2], so the enclosure is
    [central, central + 2*tail.est].
    """
    g = table.ordinates
    central = 2 * pairwise_sum((1 - np.cos(g * t)) / (g * g))
    return central, central + 2 * tail.est


def psi_zero_point(t, table: ZeroTable) -> float:
    """Point estimate: truncated sum plus the expected-tail correction.

    The omitted terms average to the density integral of 2/u^2 (the
    cos part has mean ~0), leaving only an oscillatory residual.
    """
    est = tail_sigma2(table.cutoff)
    g = table.ordinates
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(ts)
    w = 1.0 / (g * g)
    for i in range(0, ts.size, 256):
        sl = slice(i, min(i + 256, ts.size))
        out[sl] = 2 * ((1 - np.cos(np.outer(ts[sl], g))) * w).sum(axis=1)
    out += est
    return float(out[0]) if np.ndim(t) == 0 else out


def kernel_G(t: float, u: float, psi) -> float:
    """Screw kernel G(t,u) = Psi(t) + Psi(u) - Psi(t-u) for even Psi."""
    return psi(t) + psi(u) - psi(t - u)


def kernel_G_zero_sum(t: float, u: float, table: ZeroTable,
                      tail: TailModel) -> tuple[float, float]:
    """Zero-sum kernel sum_gamma (e^{i gamma t}-1)(e^{-i gamma u}-1)/gamma^2.

    Real pairing over +-gamma; each omitted term is bounded by 4/gamma^2
    in modulus, so the interval has width 8*tail.est around the center.
    """
    g = table.ordinates
    vals = (np.cos(g * (t - u)) - np.cos(g * t) - np.cos(g * u) + 1) / (g * g)
    central = 2 * pairwise_sum(vals)
    return central - 4 * tail.est, central + 4 * tail.est


def density_tail(h, cutoff: float) -> float:
    """int_cutoff^inf h(u) dN(u) with dN = (1/2pi) log(u/2pi) du.

    Substituting u = cutoff/x maps to [0, 1]; requires h(u) = O(u^{-2})
    so the transformed integrand is smooth at x = 0.
    """
    c = cutoff

    def f(x):
        if x == 0.0:
            return 0.0
        u = c / x
        return h(u) * math.log(u / TWO_PI) / TWO_PI * c / (x * x)

    val, _ = quad(f, 0.0, 1.0, limit=400, epsabs=1e-13, epsrel=1e-11)
    return val


def _li_angles(g: np.ndarray) -> np.ndarray:
    """arg of (1 - 1/rho) = (-1/2 + i gamma)/(1/2 + i gamma); unit modulus."""
    return np.arctan2(g, g * g - 0.25)


def _li_tail(n: int, cutoff: float) -> float:
    """Density-integral tail of the Li sum beyond the table cutoff."""
    return density_tail(
        lambda u: 4 * math.sin(n * math.atan2(u, u * u - 0.25) / 2) ** 2, cutoff)


def li_from_zeros(n: int, table: ZeroTable, tail: TailModel) -> float:
    """Li coefficient lambda_n = sum_rho (1 - (1-1/rho)^n) from the zeros.

    With rho = 1/2 + i gamma on the critical line, each conjugate pair
    contributes 2(1 - cos(n theta_gamma)) with theta the argument of
    1 - 1/rho.  The density-model tail is added; its own error is the
    oscillatory fluctuation, orders below the truncation it replaces.
    """
    if n < 1:
        raise DomainError("Li coefficients are indexed from 1")
    if n > 10_000:
        raise DomainError("n > 1e4 not supported (tail model degrades)")
    th = _li_angles(table.ordinates)
    val = 2 * pairwise_sum(1 - np.cos(n * th))
    if tail.mode != "none":
        val += _li_tail(n, tail.cutoff)
    return float(val)


def zero_power_sum(m: int, table: ZeroTable,
                   tail: TailModel | None = None) -> float:
    """sum_rho rho^{-m} for m >= 2, conjugate-paired over the table."""
    if m < 2:
        raise DomainError("zero_power_sum requires m >= 2 "
                          "(m = 1 is only conditionally convergent)")
    g = table.ordinates
    r2 = 0.25 + g * g
    val = 2 * pairwise_sum(np.cos(m * np.arctan2(g, 0.5)) * r2 ** (-m / 2))
    if tail is not None and tail.mode != "none":
        val += density_tail(
            lambda u: 2 * math.cos(m * math.atan2(u, 0.5))
            * (0.25 + u * u) ** (-m / 2), tail.cutoff)
    return float(val)


def xi_log_deriv_zero_sum(s: float, table: ZeroTable,
                          with_tail: bool = True) -> float:
    """(xi'/xi)(s) for real s != 1/2 via the Hadamard zero sum.

    Pairing +-gamma in the paper-normalized product gives
    (xi'/xi)(s) = sum_{gamma>0} 2 y / (y^2 + gamma^2),  y = s - 1/2.
    """
    y = s - 0.5
    g = table.ordinates
    val = 2 * y * pairwise_sum(1.0 / (y * y + g * g))
    if with_tail:
        val += density_tail(lambda u: 2 * y / (y * y + u * u), table.cutoff)
    return float(val)


def psi_omega_zero_side(t: float, omega: float,
                        table: ZeroTable) -> tuple[float, float]:
    """Shifted variant from the zero side, with an error band.

    Psi_omega(t) = sum_gamma [ omega t (gamma^2+omega^2) + (gamma^2-omega^2)
                   - e^{-omega t}((gamma^2-omega^2) cos(gamma t)
                                  + 2 gamma omega sin(gamma t)) ]
                   / (gamma^2+omega^2)^2 .

    For omega < 0 the oscillation grows like e^{|omega| t}, which is the
    sign-change mechanism; the band scales accordingly.
    """
    t = abs(float(t))
    g = table.ordinates
    g2 = g * g
    d = g2 + omega * omega
    num = (omega * t * d + (g2 - omega ** 2)
           - math.exp(-omega * t) * ((g2 - omega ** 2) * np.cos(g * t)
                                     + 2 * g * omega * np.sin(g * t)))
    central = 2 * pairwise_sum(num / (d * d))
    est = tail_sigma2(table.cutoff)
    # non-oscillatory expected tail: (omega t + 1) * sum 2/gamma^2 model
    central += (omega * t + 1) * est
    band = (1 + math.exp(-omega * t)) * est
    return central, band
