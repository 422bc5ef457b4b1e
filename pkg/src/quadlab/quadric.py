"""Geometry of the complex affine quadric and its homogeneous hypersurfaces.

The quadric Q^n = {z_1^2 + ... + z_{n+1}^2 = 1} in C^{n+1} carries the
SO(n+1,R)-orbits

    S^n            (the real points),
    M_t^n = {sum |z_j|^2 = t} ∩ Q^n   for t > 1,

and the Stein domains D_t^n bounded by M_t^n.  Writing z = x + iy with
real vectors x, y, membership in Q^n is ||x||^2 - ||y||^2 = 1, (x,y) = 0,
and M_t^n pins the radii ||x|| = sqrt((t+1)/2), ||y|| = sqrt((t-1)/2);
M_t^n is the tangent sphere bundle over S^n in these coordinates.

For n = 3 we also use coordinates on C^4 in which the quadric becomes a
single bilinear equation:

    w1 = z1 + i z2,  w2 = z1 - i z2,  w3 = z3 + i z4,  w4 = z3 - i z4,
    Q^3 = {w1 w2 + w3 w4 = 1}.

In w-coordinates S^3 is the slice {w2 = conj(w1), w4 = conj(w3)} and
M_t^3 is {sum |w_i|^2 = 2t} ∩ Q^3.  The defect of a point from the S^3
slice is measured by mu = w2 - conj(w1) and eta = w4 - conj(w3); on Q^3

    |w1|^2 + |w2|^2 + |w3|^2 + |w4|^2 = 2 + |mu|^2 + |eta|^2,

so the norm sum is >= 2 with equality exactly on S^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: absolute tolerance enforced at construction time
TOL_QUADRIC = 1e-12
#: tolerance for identities derived through floating-point arithmetic
TOL_DERIVED = 1e-10

_W_COORD_NAMES = ("w1", "w2", "w3", "w4")


def to_w_coords(z) -> np.ndarray:
    """Map z-coordinates of C^4 to w-coordinates.

    Pure linear change of variables; the input need not lie on the
    quadric.  Returns the 4-vector (z1+iz2, z1-iz2, z3+iz4, z3-iz4).
    """
    z = np.asarray(z, dtype=complex)
    if z.shape != (4,):
        raise ValueError(f"expected a 4-vector, got shape {z.shape}")
    return np.array(
        [z[0] + 1j * z[1], z[0] - 1j * z[1], z[2] + 1j * z[3], z[2] - 1j * z[3]]
    )


def from_w_coords(w) -> np.ndarray:
    """Inverse of :func:`to_w_coords` (exact two-sided inverse)."""
    w = np.asarray(w, dtype=complex)
    if w.shape != (4,):
        raise ValueError(f"expected a 4-vector, got shape {w.shape}")
    return np.array(
        [
            (w[0] + w[1]) / 2,
            (w[0] - w[1]) / (2 * 1j),
            (w[2] + w[3]) / 2,
            (w[2] - w[3]) / (2 * 1j),
        ]
    )


def _quadric_scale(w1, w2, w3, w4) -> float:
    # relative slack for points far from the unit scale (fiber partners
    # with tiny w1 or w3 produce large coordinates; the bilinear residual
    # then carries the rounding of the large products)
    return max(1.0, abs(w1 * w2) + abs(w3 * w4))


@dataclass(frozen=True)
class QuadricPoint:
    """A point of Q^3 in w-coordinates, validated at construction.

    The construction tolerance is ``TOL_QUADRIC`` times a scale factor
    that is 1 for points of unit size and grows with the bilinear terms,
    keeping validation meaningful for far-out fiber partners.
    """

    w1: complex
    w2: complex
    w3: complex
    w4: complex

    def __post_init__(self):
        res = self.quadric_residual
        if not res <= TOL_QUADRIC * _quadric_scale(self.w1, self.w2, self.w3, self.w4):
            raise ValueError(f"point is off the quadric: |w1 w2 + w3 w4 - 1| = {res:.3e}")

    @classmethod
    def from_w(cls, w) -> "QuadricPoint":
        w = np.asarray(w, dtype=complex)
        if w.shape != (4,):
            raise ValueError(f"expected a 4-vector, got shape {w.shape}")
        return cls(complex(w[0]), complex(w[1]), complex(w[2]), complex(w[3]))

    @classmethod
    def from_z(cls, z) -> "QuadricPoint":
        return cls.from_w(to_w_coords(z))

    def as_array(self) -> np.ndarray:
        return np.array([self.w1, self.w2, self.w3, self.w4])

    @property
    def quadric_residual(self) -> float:
        return abs(self.w1 * self.w2 + self.w3 * self.w4 - 1)

    @property
    def norm_sum(self) -> float:
        return abs(self.w1) ** 2 + abs(self.w2) ** 2 + abs(self.w3) ** 2 + abs(self.w4) ** 2

    @property
    def mu(self) -> complex:
        return self.w2 - self.w1.conjugate()

    @property
    def eta(self) -> complex:
        return self.w4 - self.w3.conjugate()

    def on_sphere(self, tol: float = TOL_DERIVED) -> bool:
        return abs(self.mu) <= tol and abs(self.eta) <= tol

    def on_mt(self, t: float, tol: float = TOL_DERIVED) -> bool:
        return abs(self.norm_sum - 2.0 * t) <= tol

    def in_ueps(self, eps: float) -> bool:
        return abs(self.mu) < eps and abs(self.eta) < eps

    def in_dt(self, t: float) -> bool:
        return self.norm_sum < 2.0 * t

    def to_real_frame(self) -> "RealFramePoint":
        z = from_w_coords(self.as_array())
        return RealFramePoint(3, z.real.copy(), z.imag.copy())

    def to_json(self) -> list:
        return [[v.real, v.imag] for v in self.as_array()]


@dataclass(frozen=True)
class Residuals:
    """Membership diagnostics of a w-coordinate point.

    ``norm_excess`` is norm_sum/2 - 1; on Q^3 it equals
    (|mu|^2 + |eta|^2)/2, so ``norm_excess < t - 1`` is membership in the
    domain D_t^3 and ``norm_excess == t - 1`` membership in M_t^3.
    """

    quadric_residual: float
    mu: complex
    eta: complex
    norm_excess: float

    def to_json(self) -> dict:
        return {
            "quadric_residual": self.quadric_residual,
            "mu": [self.mu.real, self.mu.imag],
            "eta": [self.eta.real, self.eta.imag],
            "norm_excess": self.norm_excess,
        }


def residuals(point: QuadricPoint) -> Residuals:
    """Slice defect (mu, eta) and norm excess of a quadric point."""
    return Residuals(
        quadric_residual=point.quadric_residual,
        mu=point.mu,
        eta=point.eta,
        norm_excess=point.norm_sum / 2.0 - 1.0,
    )


def _frame_scale(x: np.ndarray, y: np.ndarray) -> float:
    return max(1.0, float(np.dot(x, x)))


@dataclass(frozen=True)
class RealFramePoint:
    """A point x + iy of Q^n given by its real frame (x, y).

    Invariants (validated): ||x||^2 - ||y||^2 = 1 and (x, y) = 0.  The
    dimension n >= 2 counts the quadric, so x and y live in R^{n+1}.
    """

    n: int
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension n must be >= 2, got {self.n}")
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.shape != (self.n + 1,) or y.shape != (self.n + 1,):
            raise ValueError("x and y must be real (n+1)-vectors")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        scale = _frame_scale(x, y)
        hyp = abs(np.dot(x, x) - np.dot(y, y) - 1.0)
        orth = abs(np.dot(x, y))
        if hyp > TOL_QUADRIC * scale or orth > TOL_QUADRIC * scale:
            raise ValueError(
                f"frame is off the quadric: |x.x - y.y - 1| = {hyp:.3e}, |(x,y)| = {orth:.3e}"
            )

    @property
    def z(self) -> np.ndarray:
        return self.x + 1j * self.y

    @property
    def quadric_residual(self) -> float:
        return abs(np.sum(self.z * self.z) - 1.0)

    @property
    def norm_sum(self) -> float:
        """sum |z_j|^2 = ||x||^2 + ||y||^2; equals t on M_t^n."""
        return float(np.dot(self.x, self.x) + np.dot(self.y, self.y))

    def on_mt(self, t: float, tol: float = TOL_DERIVED) -> bool:
        return (
            abs(np.dot(self.x, self.x) - (t + 1.0) / 2.0) <= tol
            and abs(np.dot(self.y, self.y) - (t - 1.0) / 2.0) <= tol
        )

    def on_sphere(self, tol: float = TOL_DERIVED) -> bool:
        return float(np.dot(self.y, self.y)) <= tol * tol

    def to_quadric_point(self) -> QuadricPoint:
        if self.n != 3:
            raise ValueError("w-coordinates exist only for n = 3")
        return QuadricPoint.from_w(to_w_coords(self.z))

    def to_json(self) -> dict:
        return {"n": self.n, "x": self.x.tolist(), "y": self.y.tolist()}


def retract(p: RealFramePoint, s: float) -> RealFramePoint:
    """Deformation retraction of Q^n onto S^n, evaluated at time s.

    (x + iy, s) -> sqrt(1 + s^2 ||y||^2)/||x|| * x + i s y.  At s = 1 this
    is the identity, at s = 0 it lands on S^n, and every intermediate
    point stays on Q^n.  ||x|| > 0 holds automatically on the quadric
    (||x||^2 = 1 + ||y||^2 >= 1).
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"retraction time must lie in [0, 1], got {s}")
    xn2 = float(np.dot(p.x, p.x))
    assert xn2 > 0.0, "||x|| = 0 cannot happen on Q^n"
    yn2 = float(np.dot(p.y, p.y))
    scale = math.sqrt(1.0 + s * s * yn2) / math.sqrt(xn2)
    return RealFramePoint(p.n, scale * p.x, s * p.y)


def _rng(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((int(seed), int(stream))))


def sample_mt_frames(n: int, t: float, count: int, seed: int, stream: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized sampler for M_t^n; returns (X, Y) of shape (count, n+1).

    x is uniform on its sphere (normalized Gaussian); y is uniform on the
    unit sphere of the orthogonal complement of x (Gaussian, project,
    normalize), then scaled.  The law is SO(n+1)-invariant, matching the
    homogeneity of M_t^n.  Deterministic in (seed, stream).
    """
    if n < 2:
        raise ValueError(f"dimension n must be >= 2, got {n}")
    if not t > 1.0:
        raise ValueError(f"M_t^n requires t > 1, got t = {t}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = _rng(seed, stream)
    rx = math.sqrt((t + 1.0) / 2.0)
    ry = math.sqrt((t - 1.0) / 2.0)
    X = rng.standard_normal((count, n + 1))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    Y = rng.standard_normal((count, n + 1))
    Y -= np.sum(Y * X, axis=1, keepdims=True) * X
    bad = np.linalg.norm(Y, axis=1) < 1e-12
    while np.any(bad):  # pragma: no cover - probability ~0
        Y[bad] = rng.standard_normal((int(bad.sum()), n + 1))
        Y[bad] -= np.sum(Y[bad] * X[bad], axis=1, keepdims=True) * X[bad]
        bad = np.linalg.norm(Y, axis=1) < 1e-12
    Y /= np.linalg.norm(Y, axis=1, keepdims=True)
    return rx * X, ry * Y


def sample_mt(n: int, t: float, count: int, seed: int, stream: int = 0) -> list[RealFramePoint]:
    """Sample ``count`` points of M_t^n; see :func:`sample_mt_frames`."""
    X, Y = sample_mt_frames(n, t, count, seed, stream)
    return [RealFramePoint(n, X[i], Y[i]) for i in range(count)]


def sample_sphere(n: int, count: int, seed: int, stream: int = 0) -> list[RealFramePoint]:
    """Uniform samples of S^n (the y = 0 limit of the M_t^n family)."""
    if n < 2:
        raise ValueError(f"dimension n must be >= 2, got {n}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = _rng(seed, stream)
    X = rng.standard_normal((count, n + 1))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    zero = np.zeros(n + 1)
    return [RealFramePoint(n, X[i], zero) for i in range(count)]


def points_to_csv(points) -> str:
    """CSV serialization of w-coordinate points: re/im column pairs."""
    header = ",".join(f"re({c}),im({c})" for c in _W_COORD_NAMES)
    lines = [header]
    for p in points:
        w = p.as_array() if isinstance(p, QuadricPoint) else np.asarray(p, dtype=complex)
        lines.append(",".join(f"{float(v.real)!r},{float(v.imag)!r}" for v in w))
    return "\n".join(lines) + "\n"


def points_from_csv(text: str) -> list[QuadricPoint]:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    out = []
    for ln in lines[1:]:
        vals = [float(v) for v in ln.split(",")]
        if len(vals) != 8:
            raise ValueError("expected 8 columns per point row")
        out.append(QuadricPoint.from_w([complex(vals[2 * i], vals[2 * i + 1]) for i in range(4)]))
    return out
