#!/usr/bin/env python3
"""One-time generator for the bundled table of nontrivial zeta-zero ordinates.

Finds the first N positive ordinates gamma of zeta(1/2 + i*gamma) by a
vectorized Riemann-Siegel scan (main sum + C0 correction), refines each
bracket by vectorized bisection, then polishes:

  * gamma <= MP_POLISH_HEIGHT : secant steps on mpmath.siegelz at dps=20
    (arbitrary precision; these low zeros carry the largest 1/gamma^2 weight)
  * gamma >  MP_POLISH_HEIGHT : one secant step on mpmath.fp.siegelz
    (double precision Riemann-Siegel with higher-order corrections)

The result is validated against the Riemann-von Mangoldt count
(T/2pi)log(T/2pi) - T/2pi (within +-2.2 at every midpoint between
consecutive ordinates) and spot-checked against mpmath.zetazero at a
handful of indices.

Output: one ordinate per line, ascending, 13 decimal digits, with a few
'#' header lines.  Runtime is dominated by the polish phase (~5 min).

Usage: python scripts/generate_zeros.py [N] [outpath]
"""

import sys
import time

import numpy as np
import mpmath as mp

N_ZEROS_DEFAULT = 100_000
MP_POLISH_HEIGHT = 4200.0
SCAN_STEP = 0.004
SCAN_START = 10.0


def theta(t):
    """Riemann-Siegel theta, asymptotic expansion (t >= 10)."""
    return (t / 2 * np.log(t / (2 * np.pi)) - t / 2 - np.pi / 8
            + 1 / (48 * t) + 7 / (5760 * t ** 3) + 31 / (80640 * t ** 5))


def Z(t):
    """Vectorized Riemann-Siegel Z(t), main sum plus C0 term."""
    t = np.asarray(t, dtype=float)
    tau = np.sqrt(t / (2 * np.pi))
    N = tau.astype(np.int64)
    p = tau - N
    th = theta(t)
    nmax = int(N.max())
    n = np.arange(1, nmax + 1)
    ln = np.log(n)
    rs = np.sqrt(n)
    acc = np.zeros_like(t)
    # chunk over points to bound the (points x terms) temporary
    step = max(1, int(4e6 / max(nmax, 1)))
    for i in range(0, t.size, step):
        sl = slice(i, min(i + step, t.size))
        terms = np.cos(th[sl, None] - t[sl, None] * ln[None, :]) / rs[None, :]
        mask = n[None, :] <= N[sl, None]
        acc[sl] = np.einsum("ij,ij->i", terms, mask.astype(float))
    z = 2 * p - 1
    c = np.cos(np.pi * z)
    c = np.where(np.abs(c) < 1e-9, 1e-9, c)  # removable singularity guard
    C0 = np.cos(np.pi * (z * z / 2 + 3.0 / 8)) / c
    return 2 * acc + (-1) ** (N - 1) * (2 * np.pi / t) ** 0.25 * C0


def scan_brackets(t_lo, t_hi, step):
    """Sign-change brackets of Z on [t_lo, t_hi]."""
    brackets = []
    chunk = 400_000
    grid_prev = None
    z_prev = None
    starts = np.arange(t_lo, t_hi, chunk * step)
    for s in starts:
        g = s + step * np.arange(chunk + 1)
        g = g[g <= t_hi + step]
        z = Z(g)
        if grid_prev is not None:
            g = np.concatenate(([grid_prev], g))
            z = np.concatenate(([z_prev], z))
        sign = np.sign(z)
        idx = np.flatnonzero(sign[:-1] * sign[1:] < 0)
        brackets.append(np.column_stack((g[idx], g[idx + 1])))
        grid_prev, z_prev = g[-1], z[-1]
    return np.vstack(brackets)


def bisect_all(br, iters=46):
    """Vectorized bisection of Z on an array of brackets."""
    lo = br[:, 0].copy()
    hi = br[:, 1].copy()
    flo = Z(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = Z(mid)
        left = flo * fm <= 0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        flo = np.where(left, flo, fm)
        if np.max(hi - lo) < 1e-12:
            break
    return 0.5 * (lo + hi)


def polish_fp(g):
    """One secant step on mpmath.fp.siegelz around each g."""
    out = np.empty_like(g)
    h = 5e-5
    for i, x in enumerate(g):
        za = mp.fp.siegelz(x - h)
        zb = mp.fp.siegelz(x + h)
        if zb != za:
            out[i] = x - h - 2 * h * za / (zb - za)
        else:
            out[i] = x
    return out


def polish_mp(g, dps=20):
    """Secant iterations on mp.siegelz until |step| < 1e-13."""
    out = np.empty_like(g)
    with mp.workdps(dps):
        for i, x in enumerate(g):
            a = mp.mpf(x) - mp.mpf("5e-5")
            b = mp.mpf(x) + mp.mpf("5e-5")
            fa, fb = mp.siegelz(a), mp.siegelz(b)
            for _ in range(60):
                if fb == fa:
                    break
                c = b - fb * (b - a) / (fb - fa)
                if abs(c - b) < mp.mpf("1e-13"):
                    b = c
                    break
                a, fa = b, fb
                b, fb = c, mp.siegelz(c)
            out[i] = float(b)
    return out


def rvm_main(T):
    return T / (2 * np.pi) * np.log(T / (2 * np.pi)) - T / (2 * np.pi)


def validate(g):
    assert np.all(np.diff(g) > 0), "ordinates not strictly increasing"
    assert 14.0 < g[0] < 14.2, "first ordinate off"
    mids = 0.5 * (g[:-1] + g[1:])
    counts = np.arange(1, g.size)
    dev = counts - rvm_main(mids)
    print("count deviation vs RvM main term: min %.3f max %.3f" %
          (dev.min(), dev.max()))
    assert np.abs(dev).max() < 2.2, "zero count inconsistent with RvM density"


def spot_check(g):
    idxs = [k for k in (1, 2, 10, 100, 1000, 5000, 20000, len(g)) if k <= len(g)]
    worst = 0.0
    for k in sorted(set(idxs)):
        t0 = time.time()
        ref = float(mp.zetazero(k).imag)
        err = abs(g[k - 1] - ref)
        worst = max(worst, err)
        print("  zetazero(%-6d) = %.10f  ours = %.10f  |diff| = %.2e  (%.1fs)"
              % (k, ref, g[k - 1], err, time.time() - t0))
        assert err < 5e-7, "spot check failed at index %d" % k
    print("spot-check worst |diff| = %.2e" % worst)


def main():
    n_target = int(sys.argv[1]) if len(sys.argv) > 1 else N_ZEROS_DEFAULT
    outpath = sys.argv[2] if len(sys.argv) > 2 else "data/zeros_100k.txt"

    # upper scan height: invert RvM for n_target zeros, generous margin
    t_hi = 80.0
    while rvm_main(t_hi) < n_target + 20:
        t_hi *= 1.05
    print("scanning Z up to t = %.1f (step %g)" % (t_hi, SCAN_STEP))

    t0 = time.time()
    br = scan_brackets(SCAN_START, t_hi, SCAN_STEP)
    print("found %d brackets in %.1fs" % (len(br), time.time() - t0))
    assert len(br) >= n_target, "scan found too few sign changes"

    t0 = time.time()
    g = bisect_all(br)
    print("bisection done in %.1fs" % (time.time() - t0))

    lowmask = g <= MP_POLISH_HEIGHT
    print("polishing %d low zeros with mp.siegelz, %d high with fp.siegelz"
          % (lowmask.sum(), (~lowmask).sum()))
    t0 = time.time()
    g_low = polish_mp(g[lowmask])
    print("  mp polish %.1fs" % (time.time() - t0))
    t0 = time.time()
    g_high = polish_fp(g[~lowmask])
    print("  fp polish %.1fs" % (time.time() - t0))
    g = np.concatenate((g_low, g_high))
    g.sort()
    g = g[:n_target]

    validate(g)
    spot_check(g)

    with open(outpath, "w") as f:
        f.write("# ordinates of the first %d nontrivial zeros of the Riemann "
                "zeta function\n" % n_target)
        f.write("# gamma_n for zeta(1/2 + i gamma_n) = 0, ascending\n")
        f.write("# generated by scripts/generate_zeros.py (Riemann-Siegel "
                "scan + mpmath polish)\n")
        for x in g:
            f.write("%.13f\n" % x)
    print("wrote %s (%d ordinates)" % (outpath, g.size))


if __name__ == "__main__":
    main()
