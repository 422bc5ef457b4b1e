"""Independent brute-force oracles for expected values.

Everything here deliberately avoids the code paths under test: grids,
bisection, golden-section, and central differences only.  Values pinned
in the test files were produced by these functions (at higher resolution
where noted) before the corresponding implementation was written.
"""

import numpy as np

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_min(f, a, b, iters=200):
    c, d = b - _INVPHI * (b - a), a + _INVPHI * (b - a)
    for _ in range(iters):
        if f(c) < f(d):
            b, d = d, c
            c = b - _INVPHI * (b - a)
        else:
            a, c = c, d
            d = a + _INVPHI * (b - a)
    s = 0.5 * (a + b)
    return f(s), s


def cond1_min_dense(n=400_001):
    """Dense grid + golden refinement of |(4-8s) + i(24s^2-24s+4)|."""
    f = lambda s: np.hypot(4.0 - 8.0 * s, 24.0 * s * s - 24.0 * s + 4.0)
    s = np.linspace(0.0, 4.0, n)
    k = int(np.argmin(f(s)))
    return golden_min(f, s[max(k - 1, 0)], s[min(k + 1, n - 1)])


def positive_root_bisect(margin, hi=1.0):
    """Positive root of 32 x^2 + 256 x = margin, by bisection."""
    f = lambda x: 32.0 * x * x + 256.0 * x - margin
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def min_triple_t(lo=0.3, hi=2.0):
    """Golden-section minimum of u^2 + 1/(2 u^2)."""
    return golden_min(lambda u: u * u + 0.5 / (u * u), lo, hi)


def min_x_plus_a_over_x(a, lo=1e-6, hi=50.0):
    """Golden-section minimum of x + a/x over x > 0."""
    return golden_min(lambda x: x + a / x, lo, hi)


def min_two_var_norm(a, b):
    """Numeric minimum of x + a/x + y + b/y over x, y > 0 (separable)."""
    va, xa = min_x_plus_a_over_x(a)
    vb, xb = min_x_plus_a_over_x(b)
    return va + vb, xa, xb


def floor_absj_dense(t, n=801, rounds=4):
    """Floor of the restricted-Jacobian modulus over M_t^3.

    Reduces over the torus fibers: for fixed p = w3 w4 the point exists
    iff |p| + |1-p| <= t and the best denominator max(|w1|, |w3|) is the
    larger root of the leftover norm-sum equation.  Grid over p with
    local re-gridding around the argmin.
    """
    num = lambda P: (3j - 3) * P * P + (2 - 4j) * P + 1j
    re_lo, re_hi, im_lo, im_hi = -0.35, 1.35, -0.45, 0.45
    best = np.inf
    for _ in range(rounds):
        re = np.linspace(re_lo, re_hi, n)
        im = np.linspace(im_lo, im_hi, n)
        P = re[None, :] + 1j * im[:, None]
        feas = np.abs(P) + np.abs(1 - P) <= t
        a = np.abs(1 - P) ** 2
        b = np.abs(P) ** 2
        Rx = 2 * t - 2 * np.sqrt(b)
        Ry = 2 * t - 2 * np.sqrt(a)
        xmax = np.where(feas & (Rx**2 >= 4 * a),
                        (Rx + np.sqrt(np.maximum(Rx**2 - 4 * a, 0))) / 2, -np.inf)
        ymax = np.where(feas & (Ry**2 >= 4 * b),
                        (Ry + np.sqrt(np.maximum(Ry**2 - 4 * b, 0))) / 2, -np.inf)
        den = np.fmax(xmax, ymax)
        with np.errstate(invalid="ignore"):
            J = np.where(feas & (den > 0),
                         np.abs(num(P)) / np.sqrt(np.maximum(den, 1e-300)), np.inf)
        k = int(np.argmin(J))
        best = min(best, float(J.flat[k]))
        parg = P.flat[k]
        dre = (re_hi - re_lo) / (n - 1)
        dim = (im_hi - im_lo) / (n - 1)
        re_lo, re_hi = parg.real - 3 * dre, parg.real + 3 * dre
        im_lo, im_hi = parg.imag - 3 * dim, parg.imag + 3 * dim
    return best


def fd_jacobian(fun, W, step=1e-6):
    """Central-difference Jacobian columns of a C^4 -> C^3 map."""
    W = np.asarray(W, dtype=complex)
    cols = []
    for k in range(4):
        e = np.zeros(4, dtype=complex)
        e[k] = step
        cols.append((fun(W + e) - fun(W - e)) / (2.0 * step))
    return np.stack(cols, axis=1)
