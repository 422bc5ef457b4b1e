"""Closed-form fibers of the restricted map on Q^3.

Two quadric points W, What share their image under the restriction of F
iff what1 = w1, what3 = w3 and the third components agree.  Eliminating
w2 = (1 - w3 w4)/w1 through the quadric relation turns the remaining
equation into a cubic in what4 that factors as (what4 - w4) times the
quadratic

    (i-1) w3^2 X^2 + ((1-2i) w3 + (i-1) w3^2 w4) X
        + (i + (1-2i) w3 w4 + (i-1) w3^2 w4^2) = 0,

whose solutions are

    what4 = (2i - 1 + (1-i) p +- sqrt(6i p^2 - (2+6i) p + 1)) / ((2i-2) w3),

with p = w3 w4.  Each fiber therefore has at most three points.  When
w1 = 0 or w3 = 0 the fiber is a single point.  The quadratic's
discriminant 6i p^2 - (2+6i) p + 1 vanishes on M_t^3 iff t >= 2/sqrt(3),
and w4 itself solves the quadratic iff the restricted Jacobian vanishes
at W, which on M_t^3 happens iff t >= sqrt((2+sqrt2)/3).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .armap import TOL_ON_QUADRIC, eval_F, jacobian_restricted
from .quadric import QuadricPoint

#: absolute tolerance for identifying a quadratic root with the base w4
DEDUP_TOL = 1e-10
#: |discriminant| below which the two roots are reported as one double root
DOUBLE_ROOT_TOL = 1e-14


def discriminant(p: complex) -> complex:
    """Discriminant 6i p^2 - (2+6i) p + 1 of the fiber quadratic, p = w3 w4."""
    p = complex(p)
    return 6j * p * p - (2 + 6j) * p + 1


def quadratic_coefficients(w3: complex, w4: complex) -> tuple[complex, complex, complex]:
    """Coefficients (a, b, c) of the fiber quadratic in what4."""
    a = (1j - 1) * w3 * w3
    b = (1 - 2j) * w3 + (1j - 1) * w3 * w3 * w4
    c = 1j + (1 - 2j) * w3 * w4 + (1j - 1) * (w3 * w4) ** 2
    return a, b, c


def partner_w4_roots(w3: complex, w4: complex) -> tuple[complex, complex]:
    """Both branches of the quadratic solution formula for what4."""
    p = w3 * w4
    sq = cmath.sqrt(discriminant(p))
    den = (2j - 2) * w3
    base = 2j - 1 + (1 - 1j) * p
    return (base + sq) / den, (base - sq) / den


@dataclass(frozen=True)
class FiberSet:
    """The fiber of the restricted map through ``base``.

    ``partners`` are the other fiber points; ``multiplicities`` is the
    parallel list of root multiplicities (2 marks a double root of the
    quadratic, which is reported once and never collapsed silently).
    ``degenerate`` is set when the base itself solves the quadratic,
    i.e. exactly when the restricted Jacobian vanishes at the base.
    """

    base: QuadricPoint
    partners: tuple[QuadricPoint, ...]
    multiplicities: tuple[int, ...] = field(default=())
    double_root: bool = False
    degenerate: bool = False

    @property
    def size(self) -> int:
        """Number of fiber points counted with root multiplicity."""
        return 1 + sum(self.multiplicities)

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "partners": [p.to_json() for p in self.partners],
            "multiplicities": list(self.multiplicities),
            "double_root": self.double_root,
            "degenerate": self.degenerate,
            "residuals": {
                "base_quadric": self.base.quadric_residual,
                "partner_quadric": [p.quadric_residual for p in self.partners],
                "image_mismatch": [
                    float(np.max(np.abs(eval_F(p.as_array()) - eval_F(self.base.as_array()))))
                    for p in self.partners
                ],
            },
        }


def fiber(base: QuadricPoint) -> FiberSet:
    """Complete fiber of the restricted map over the image of ``base``."""
    if base.quadric_residual > TOL_ON_QUADRIC:
        raise ValueError(f"base is not on Q^3 (residual {base.quadric_residual:.3e})")
    if base.w1 == 0 or base.w3 == 0:
        return FiberSet(base=base, partners=())

    r_plus, r_minus = partner_w4_roots(base.w3, base.w4)
    double = abs(discriminant(base.w3 * base.w4)) < DOUBLE_ROOT_TOL
    roots = [(r_plus, 2)] if double else [(r_plus, 1), (r_minus, 1)]

    partners = []
    mults = []
    degenerate = False
    for r, m in roots:
        if abs(r - base.w4) <= DEDUP_TOL:
            degenerate = True
            continue
        what2 = (1 - base.w3 * r) / base.w1
        partners.append(QuadricPoint(base.w1, what2, base.w3, r))
        mults.append(m)
    return FiberSet(
        base=base,
        partners=tuple(partners),
        multiplicities=tuple(mults),
        double_root=double,
        degenerate=degenerate,
    )


def partner_norm_excess(base: QuadricPoint, t: float) -> float:
    """min over fiber partners of norm_sum/2 - t; +inf when there are none.

    For ``base`` on M_t^3 a positive value certifies that no other fiber
    point lies on M_t^3; a value <= 0 flags a potential injectivity
    failure (0 is an exact collision).
    """
    if abs(base.norm_sum - 2.0 * t) > TOL_ON_QUADRIC:
        raise ValueError(
            f"base is not on M_t^3 for t = {t} (norm sum {base.norm_sum:.12f})"
        )
    fs = fiber(base)
    if not fs.partners:
        return math.inf
    return min(p.norm_sum / 2.0 - t for p in fs.partners)


def triple_point(u: float) -> tuple[QuadricPoint, QuadricPoint, QuadricPoint, float]:
    """The explicit three-point fiber family at parameter u != 0.

    Returns (W_u, W_u', W_u'', t) with all three points on M_t^3 for
    t = u^2 + 1/(2 u^2) and a common image (u, u, 0).  The minimum of t
    over u is sqrt(2), attained at u^2 = 1/sqrt(2).
    """
    if u == 0:
        raise ValueError("u must be nonzero")
    u = float(u)
    t = u * u + 1.0 / (2.0 * u * u)
    wu = QuadricPoint(u, 1.0 / u, u, 0.0)
    wup = QuadricPoint(u, 0.0, u, 1.0 / u)
    wupp = QuadricPoint(u, (1 + 1j) / (2 * u), u, (1 - 1j) / (2 * u))
    return wu, wup, wupp, t


def sample_w4_zero_slice(t: float, count: int, seed: int) -> list[QuadricPoint]:
    """Random M_t^3 points with w4 = 0 (requires 1 < t < 3/2).

    On this slice w1 w2 = 1, so |w1|^2 + 1/|w1|^2 + |w3|^2 = 2t; |w3|^2
    is drawn uniformly from (0, 2(t-1)) and the phases of w1, w3 uniform.
    """
    if not 1.0 < t < 1.5:
        raise ValueError("w4 = 0 slice sampler needs 1 < t < 3/2")
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 4)))
    out = []
    for _ in range(count):
        y = rng.uniform(1e-6, 2.0 * (t - 1.0) - 1e-9)
        R = 2.0 * t - y
        x = (R + math.sqrt(R * R - 4.0)) / 2.0
        ph1, ph3 = cmath.exp(2j * math.pi * rng.random()), cmath.exp(2j * math.pi * rng.random())
        w1 = math.sqrt(x) * ph1
        out.append(QuadricPoint(w1, 1.0 / w1, math.sqrt(y) * ph3, 0.0))
    return out
