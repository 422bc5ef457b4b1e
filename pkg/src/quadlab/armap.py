"""The Ahern-Rudin map, its holomorphic continuation, and its Jacobians.

The Ahern-Rudin map is the polynomial map

    f : C^2 -> C^3,   f(z, w) = (z, w, w zbar wbar^2 + i z zbar^2 wbar),

a totally real embedding of S^3 = {|z|^2 + |w|^2 = 1}.  Pushing f forward
through (z, w) -> (Re z, Im z, Re w, Im w) and continuing holomorphically
to C^4 gives, in w-coordinates,

    F(w1, w2, w3, w4) = (w1, w3, w2 w3 w4^2 + i w1 w2^2 w4).

F has maximal rank at every point of Q^3, but its restriction Ftilde to
the quadric degenerates on M_t^3 exactly when t >= sqrt((2+sqrt2)/3).
The restricted Jacobian is computed in one of two coordinate charts on
Q^3 (at least one of |w1|, |w3| is nonzero there):

    chart PHI (w1, w3, w4):  J = ((3i-3)p^2 + (2-4i)p + i) / w1,
    chart PSI (w1, w2, w3):  J = ((3i-3)p^2 + (2-4i)p + i) / w3,

with p = w3 w4 (the PSI formula -((3-3i)q^2 + (2i-4)q + 1)/w3 in
q = w1 w2 reduces to this via q = 1 - p).  Both charts vanish together:
their ratio is the nonvanishing factor w1/w3.  The common zero set is
p = (3 +- sqrt2 - i)/6.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .quadric import QuadricPoint, TOL_DERIVED

#: residual bound for "is on Q^3" preconditions of restricted operations
TOL_ON_QUADRIC = 1e-8


def eval_f(z: complex, w: complex) -> np.ndarray:
    """The Ahern-Rudin map at (z, w); returns the image point in C^3."""
    zb, wb = complex(z).conjugate(), complex(w).conjugate()
    return np.array([z, w, w * zb * wb**2 + 1j * z * zb**2 * wb])


def eval_F(W) -> np.ndarray:
    """Holomorphic continuation of the push-forward of f, in w-coordinates.

    Defined on all of C^4; the first two components are w1 and w3 exactly.
    """
    w1, w2, w3, w4 = (complex(v) for v in np.asarray(W, dtype=complex))
    return np.array([w1, w3, w2 * w3 * w4**2 + 1j * w1 * w2**2 * w4])


def jacobian_F(W) -> np.ndarray:
    """Full 3x4 complex Jacobian of F at W (holomorphic derivatives)."""
    w1, w2, w3, w4 = (complex(v) for v in np.asarray(W, dtype=complex))
    row3 = [
        1j * w2**2 * w4,
        w3 * w4**2 + 2j * w1 * w2 * w4,
        w2 * w4**2,
        2 * w2 * w3 * w4 + 1j * w1 * w2**2,
    ]
    return np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], row3],
        dtype=complex,
    )


class Chart(enum.Enum):
    """Coordinate chart on Q^3 used for the restricted Jacobian."""

    PHI = "phi"  # coordinates (w1, w3, w4), needs w1 != 0
    PSI = "psi"  # coordinates (w1, w2, w3), needs w3 != 0


@dataclass(frozen=True)
class ChartJacobian:
    value: complex
    chart: Chart

    def __abs__(self) -> float:
        return abs(self.value)


def _jac_numerator(p: complex) -> complex:
    return (3j - 3) * p * p + (2 - 4j) * p + 1j


def jacobian_restricted(point: QuadricPoint) -> ChartJacobian:
    """Jacobian of the restriction of F to Q^3, in the better chart.

    Chart selection is by max(|w1|, |w3|) with ties to PHI; this only
    affects conditioning, never the zero set.
    """
    if point.quadric_residual > TOL_ON_QUADRIC:
        raise ValueError(
            f"point is not on Q^3 (residual {point.quadric_residual:.3e})"
        )
    p = point.w3 * point.w4
    num = _jac_numerator(p)
    if abs(point.w1) >= abs(point.w3):
        return ChartJacobian(num / point.w1, Chart.PHI)
    return ChartJacobian(num / point.w3, Chart.PSI)


def degeneracy_threshold() -> float:
    """Smallest t for which the restricted map degenerates on M_t^3."""
    return math.sqrt((2.0 + math.sqrt(2.0)) / 3.0)


#: the two zeros of the restricted-Jacobian numerator in p = w3 w4
DEGENERACY_P = (
    (3.0 - math.sqrt(2.0) - 1j) / 6.0,
    (3.0 + math.sqrt(2.0) - 1j) / 6.0,
)


@dataclass(frozen=True)
class DegeneracyWitnesses:
    """Outcome of the closed-form degeneracy construction at level t.

    ``points`` is empty below the threshold; ``norm_floor`` is the global
    minimum of the norm sum over the degeneracy locus, so an empty result
    is certified by ``norm_floor > 2 t``.
    """

    t: float
    points: tuple[QuadricPoint, ...]
    norm_floor: float

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def degeneracy_points_at(t: float) -> DegeneracyWitnesses:
    """Canonical points of M_t^3 where the restricted Jacobian vanishes.

    One witness per branch p = (3 -+ sqrt2 - i)/6 of the zero set, with
    phases fixed by taking w1 and w3 real positive and the modulus split
    chosen as |w3|^2 = |p| with |w1|^2 the larger root of the remaining
    norm-sum equation.  Below the threshold the witness set is empty and
    the certificate is norm_floor > 2t.
    """
    floor = 2.0 * degeneracy_threshold()
    points = []
    for p in DEGENERACY_P:
        q = 1.0 - p  # w1 w2 on the degeneracy branch
        a, b = abs(q) ** 2, abs(p) ** 2
        # norm sum on the branch: x + a/x + y + b/y with x=|w1|^2, y=|w3|^2;
        # park y at sqrt(b) and give x the larger root of x + a/x = R
        R = 2.0 * t - 2.0 * math.sqrt(b)
        disc = R * R - 4.0 * a
        if disc < 0.0:
            continue
        x = (R + math.sqrt(disc)) / 2.0
        w1 = math.sqrt(x)
        w3 = b ** 0.25
        points.append(QuadricPoint(w1, complex(q) / w1, w3, complex(p) / w3))
    return DegeneracyWitnesses(t=t, points=tuple(points), norm_floor=floor)


def fd_jacobian_F(W, step: float = 1e-6) -> np.ndarray:
    """Central-difference approximation of :func:`jacobian_F`.

    Independent check of the analytic matrix; holomorphy makes a real
    step in each coordinate sufficient.
    """
    W = np.asarray(W, dtype=complex)
    cols = []
    for k in range(4):
        e = np.zeros(4, dtype=complex)
        e[k] = step
        cols.append((eval_F(W + e) - eval_F(W - e)) / (2.0 * step))
    return np.stack(cols, axis=1)


def rank_on_quadric(W, tol_rel: float = 1e-8) -> int:
    """Numerical rank of the full Jacobian via singular values."""
    s = np.linalg.svd(jacobian_F(W), compute_uv=False)
    return int(np.sum(s > tol_rel * s[0]))
