"""Derivative-free optimizers for the manifold scans.

The scan objectives are cheap batch kernels, so the Nelder-Mead here is
vectorized across simplices: one state tensor holds every start's
simplex and each algorithm stage (reflection, expansion, contraction,
shrink) is evaluated for all starts in a single batched objective call.
A projected finite-difference gradient descent is provided as the
alternative optimizer; both treat the objective as already containing
the manifold projection, so iterates live in the raw chart.
"""

from __future__ import annotations

import numpy as np

_ALPHA, _GAMMA, _BETA, _SIGMA = 1.0, 2.0, 0.5, 0.5


def nelder_mead_batch(
    objective,
    x0: np.ndarray,
    init_step: float = 0.25,
    max_evals: int = 2000,
    ftol: float = 1e-14,
    xtol: float = 1e-12,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Minimize over a batch of starts; returns (xbest, fbest, n_evals).

    ``objective`` maps (k, d) arrays to (k,) values.  ``max_evals`` is a
    per-start budget.  Deterministic: no randomness enters the iteration.
    """
    x0 = np.asarray(x0, dtype=float)
    S, d = x0.shape
    simplex = np.repeat(x0[:, None, :], d + 1, axis=1)
    for j in range(d):
        simplex[:, j + 1, j] += init_step
    fvals = objective(simplex.reshape(-1, d)).reshape(S, d + 1)
    evals = d + 1

    while evals < max_evals:
        order = np.argsort(fvals, axis=1)
        fvals = np.take_along_axis(fvals, order, axis=1)
        simplex = np.take_along_axis(simplex, order[:, :, None], axis=1)

        spread = fvals[:, -1] - fvals[:, 0]
        size = np.max(np.abs(simplex - simplex[:, :1, :]), axis=(1, 2))
        if np.all((spread < ftol) & (size < xtol)):
            break

        worst = simplex[:, -1, :]
        centroid = np.mean(simplex[:, :-1, :], axis=1)
        xr = centroid + _ALPHA * (centroid - worst)
        fr = objective(xr)
        evals += 1

        new_x = xr.copy()
        new_f = fr.copy()

        expand = fr < fvals[:, 0]
        if np.any(expand):
            xe = centroid[expand] + _GAMMA * (centroid[expand] - worst[expand])
            fe = objective(xe)
            better = fe < fr[expand]
            idx = np.flatnonzero(expand)[better]
            new_x[idx] = xe[better]
            new_f[idx] = fe[better]
        evals += 1

        contract = fr >= fvals[:, -2]
        shrink = np.zeros(S, dtype=bool)
        if np.any(contract):
            outside = contract & (fr < fvals[:, -1])
            inside = contract & ~outside
            xc = np.where(
                outside[:, None],
                centroid + _BETA * (xr - centroid),
                centroid + _BETA * (worst - centroid),
            )
            fc = objective(xc[contract])
            evals += 1
            cidx = np.flatnonzero(contract)
            ref = np.where(outside, fr, fvals[:, -1])[cidx]
            ok = fc <= ref
            new_x[cidx[ok]] = xc[cidx[ok]]
            new_f[cidx[ok]] = fc[ok]
            shrink[cidx[~ok]] = True

        keep = ~shrink
        fvals[keep, -1] = new_f[keep]
        simplex[keep, -1, :] = new_x[keep]

        if np.any(shrink):
            best = simplex[shrink, :1, :]
            simplex[shrink, 1:, :] = best + _SIGMA * (simplex[shrink, 1:, :] - best)
            fnew = objective(simplex[shrink, 1:, :].reshape(-1, d)).reshape(-1, d)
            fvals[shrink, 1:] = fnew
            evals += d

    order = np.argsort(fvals, axis=1)
    fvals = np.take_along_axis(fvals, order, axis=1)
    simplex = np.take_along_axis(simplex, order[:, :, None], axis=1)
    return simplex[:, 0, :], fvals[:, 0], evals


def projected_gradient_batch(
    objective,
    x0: np.ndarray,
    max_evals: int = 2000,
    step0: float = 0.1,
    fd_step: float = 1e-7,
    gtol: float = 1e-12,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Finite-difference gradient descent with backtracking, batched.

    The objective embeds the projection to M_t^3, so plain descent in the
    raw chart follows the manifold.  Kept simple: this is the secondary
    optimizer; scans default to Nelder-Mead.
    """
    x = np.asarray(x0, dtype=float).copy()
    S, d = x.shape
    f = objective(x)
    evals = 1
    steps = np.full(S, step0)

    while evals < max_evals:
        grad = np.empty_like(x)
        for j in range(d):
            e = np.zeros(d)
            e[j] = fd_step
            grad[:, j] = (objective(x + e) - objective(x - e)) / (2 * fd_step)
        evals += 2 * d
        gn = np.linalg.norm(grad, axis=1)
        if np.all(gn < gtol):
            break
        direction = -grad / np.maximum(gn, 1e-300)[:, None]

        improved = np.zeros(S, dtype=bool)
        for _ in range(20):
            trial = x + steps[:, None] * direction
            ft = objective(trial)
            evals += 1
            better = ft < f - 1e-16
            x[better] = trial[better]
            f[better] = ft[better]
            improved |= better
            steps[~better] *= 0.5
            steps[better] *= 1.3
            if np.all(improved) or evals >= max_evals:
                break
        if not np.any(improved):
            break
    return x, f, evals


def polish_root(residual, x0: np.ndarray, max_nfev: int = 400) -> np.ndarray:
    """Least-squares polish of a candidate zero of a smooth residual map.

    ``residual`` maps an (d,) point to a small residual vector; used to
    refine scan witnesses once the global phase has found the basin.
    """
    from scipy.optimize import least_squares

    x0 = np.asarray(x0, dtype=float)
    method = "lm" if np.atleast_1d(residual(x0)).size >= x0.size else "trf"
    res = least_squares(residual, x0, method=method,
                        xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_nfev)
    return res.x
