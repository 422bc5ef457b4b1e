"""Pure numpy implementations of the scan hot kernels.

Every function here has a drop-in twin in the compiled backend
(``quadlab.kernels._native``); the package selects one at import time.
All kernels are batch-oriented: points travel as (m, 8) float64 arrays
of real frames (x, y) or (m, 4) complex128 arrays of w-coordinates.
"""

from __future__ import annotations

import numpy as np

#: partner closer than this to its base (in C^4 distance) is treated as
#: the base itself rediscovered, not a collision candidate
DEFAULT_SEPARATION = 1e-3


def project_mt(xy: np.ndarray, t: float) -> np.ndarray:
    """Project raw (x, y) chart points onto M_t^3.

    x is rescaled to radius sqrt((t+1)/2); y is orthogonalized against x
    and rescaled to sqrt((t-1)/2).  Degenerate inputs (zero x, y parallel
    to x) fall back to a deterministic orthogonal direction.
    """
    xy = np.asarray(xy, dtype=float)
    x = xy[:, :4].copy()
    y = xy[:, 4:].copy()
    rx = np.sqrt((t + 1.0) / 2.0)
    ry = np.sqrt((t - 1.0) / 2.0)

    xn = np.linalg.norm(x, axis=1)
    bad = xn < 1e-150
    if np.any(bad):
        x[bad] = 0.0
        x[bad, 0] = 1.0
        xn[bad] = 1.0
    xu = x / xn[:, None]

    y = y - np.sum(y * xu, axis=1, keepdims=True) * xu
    yn = np.linalg.norm(y, axis=1)
    bad = yn < 1e-12
    if np.any(bad):
        # most-orthogonal basis vector, re-orthogonalized
        k = np.argmin(np.abs(xu[bad]), axis=1)
        e = np.zeros((int(bad.sum()), 4))
        e[np.arange(e.shape[0]), k] = 1.0
        e -= np.sum(e * xu[bad], axis=1, keepdims=True) * xu[bad]
        y[bad] = e
        yn[bad] = np.linalg.norm(e, axis=1)
    yu = y / yn[:, None]

    out = np.empty_like(xy)
    out[:, :4] = rx * xu
    out[:, 4:] = ry * yu
    return out


def xy_to_w(xy: np.ndarray) -> np.ndarray:
    """Real frames (x, y) to w-coordinates, batched."""
    xy = np.asarray(xy, dtype=float)
    x, y = xy[:, :4], xy[:, 4:]
    w = np.empty((xy.shape[0], 4), dtype=complex)
    w[:, 0] = (x[:, 0] - y[:, 1]) + 1j * (y[:, 0] + x[:, 1])
    w[:, 1] = (x[:, 0] + y[:, 1]) + 1j * (y[:, 0] - x[:, 1])
    w[:, 2] = (x[:, 2] - y[:, 3]) + 1j * (y[:, 2] + x[:, 3])
    w[:, 3] = (x[:, 2] + y[:, 3]) + 1j * (y[:, 2] - x[:, 3])
    return w


def w_to_xy(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    z1 = (w[:, 0] + w[:, 1]) / 2.0
    z2 = (w[:, 0] - w[:, 1]) / 2j
    z3 = (w[:, 2] + w[:, 3]) / 2.0
    z4 = (w[:, 2] - w[:, 3]) / 2j
    return np.stack(
        [z1.real, z2.real, z3.real, z4.real, z1.imag, z2.imag, z3.imag, z4.imag],
        axis=1,
    )


def quadric_residual(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    return np.abs(w[:, 0] * w[:, 1] + w[:, 2] * w[:, 3] - 1.0)


def abs_restricted_jacobian(w: np.ndarray) -> np.ndarray:
    """|Jacobian| of the restricted map, chart chosen by max(|w1|, |w3|)."""
    w = np.asarray(w, dtype=complex)
    p = w[:, 2] * w[:, 3]
    num = (3j - 3) * p * p + (2 - 4j) * p + 1j
    den = np.maximum(np.abs(w[:, 0]), np.abs(w[:, 2]))
    return np.abs(num) / den


def disc_abs(w: np.ndarray) -> np.ndarray:
    """|discriminant| of the fiber quadratic at p = w3 w4."""
    w = np.asarray(w, dtype=complex)
    p = w[:, 2] * w[:, 3]
    return np.abs(6j * p * p - (2 + 6j) * p + 1)


def partner_data(w: np.ndarray, t: float, separation: float = DEFAULT_SEPARATION):
    """Signed norm excess and shell gap of the best-separated fiber partner.

    For each point, both quadratic roots are formed; roots closer than
    ``separation`` to the base point (in C^4) are discarded as the base
    rediscovered.  Among the remaining partners the one nearest the M_t^3
    shell wins; returns (excess, gap) where gap = |excess| and both are
    +inf when no partner survives.
    """
    w = np.asarray(w, dtype=complex)
    w1, w2, w3, w4 = w[:, 0], w[:, 1], w[:, 2], w[:, 3]
    ok = (np.abs(w1) > 0) & (np.abs(w3) > 0)
    p = w3 * w4
    sq = np.sqrt((6j * p * p - (2 + 6j) * p + 1).astype(complex))
    base = (2j - 1) + (1 - 1j) * p
    with np.errstate(divide="ignore", invalid="ignore"):
        den = (2j - 2) * w3
        excesses = []
        gaps = []
        for sgn in (1.0, -1.0):
            r = (base + sgn * sq) / den
            what2 = (1.0 - w3 * r) / w1
            dist = np.hypot(np.abs(r - w4), np.abs(what2 - w2))
            excess = (
                np.abs(w1) ** 2 + np.abs(what2) ** 2 + np.abs(w3) ** 2 + np.abs(r) ** 2
            ) / 2.0 - t
            valid = ok & (dist >= separation) & np.isfinite(excess)
            excesses.append(np.where(valid, excess, np.inf))
            gaps.append(np.where(valid, np.abs(excess), np.inf))
    g = np.stack(gaps, axis=1)
    e = np.stack(excesses, axis=1)
    pick = np.argmin(g, axis=1)
    rows = np.arange(w.shape[0])
    return e[rows, pick], g[rows, pick]


def objective_absj(xy: np.ndarray, t: float) -> np.ndarray:
    """|restricted Jacobian| after projection to M_t^3 (scan objective)."""
    return abs_restricted_jacobian(xy_to_w(project_mt(xy, t)))


def objective_gap(xy: np.ndarray, t: float, separation: float = DEFAULT_SEPARATION) -> np.ndarray:
    """Partner shell gap after projection to M_t^3 (scan objective)."""
    _, gap = partner_data(xy_to_w(project_mt(xy, t)), t, separation)
    return gap


def objective_disc(xy: np.ndarray, t: float) -> np.ndarray:
    """|fiber-quadratic discriminant| after projection (scan objective)."""
    return disc_abs(xy_to_w(project_mt(xy, t)))
