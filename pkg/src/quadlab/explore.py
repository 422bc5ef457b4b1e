"""Parameter scans over M_t^3: degeneracy, injectivity, and the empirical
embedding boundary.

A scan is multistart derivative-free minimization of a kernel objective
over M_t^3, parametrized by raw real frames (x, y) in R^8 with the
projection to the manifold baked into the objective.  Global phase:
batched Nelder-Mead from seeded random starts; local phase: a
least-squares polish of the few best candidates (accepted only when it
actually lowers the true objective).  Every reported minimum is
re-verified through the closed-form modules (one route finds, the other
confirms), and scans are deterministic functions of their config.

Scans produce evidence with witnesses, never certificates: a strictly
positive injectivity floor on a sampled set supports the conjecture that
the embedding persists up to the degeneracy threshold, but the question
between the certified bound near 1 and that threshold remains open.
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .arfamily import Poly4, build_G, divisibility_check
from .armap import degeneracy_threshold, jacobian_restricted
from .fibers import fiber, partner_norm_excess
from .optim import nelder_mead_batch, polish_root, projected_gradient_batch
from .quadric import QuadricPoint, sample_mt_frames

#: re-verified |J| below this is a degeneracy
DEGENERACY_TOL = 1e-6
#: re-verified |partner excess| below this is a collision
COLLISION_TOL = 1e-8
#: evidence requires clearing 10x the corresponding tolerance
EVIDENCE_FACTOR = 10.0


class Optimizer(enum.Enum):
    NELDER_MEAD_ON_CHART = "nelder-mead"
    PROJECTED_GRADIENT = "projected-gradient"


class Verdict(enum.Enum):
    EMBEDDING_EVIDENCE = "EMBEDDING_EVIDENCE"
    DEGENERATE = "DEGENERATE"
    COLLISION = "COLLISION"
    UNKNOWN = "UNKNOWN"


class WitnessVerificationError(RuntimeError):
    """A scan minimum failed its independent closed-form re-verification."""


@dataclass(frozen=True)
class ScanConfig:
    t_grid: tuple[float, ...] = ()
    samples_per_t: int = 256
    multistart_count: int = 64
    optimizer: Optimizer = Optimizer.NELDER_MEAD_ON_CHART
    seed: int = 0
    map_source: str | Poly4 = "builtin"
    budget: int = 2000
    separation: float = kernels.DEFAULT_SEPARATION
    workers: int = 1

    def __post_init__(self):
        grid = tuple(float(t) for t in self.t_grid)
        object.__setattr__(self, "t_grid", grid)
        if any(t <= 1.0 for t in grid):
            raise ValueError("every grid value must exceed 1")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("t_grid must be strictly increasing")
        if self.samples_per_t < 1 or self.multistart_count < 1 or self.budget < 1:
            raise ValueError("counts must be >= 1")
        if isinstance(self.map_source, str) and self.map_source != "builtin":
            raise ValueError(f"unknown map_source {self.map_source!r}")

    def to_json(self) -> dict:
        src = self.map_source if isinstance(self.map_source, str) else str(self.map_source)
        return {
            "t_grid": list(self.t_grid),
            "samples_per_t": self.samples_per_t,
            "multistart_count": self.multistart_count,
            "optimizer": self.optimizer.value,
            "seed": self.seed,
            "map_source": src,
            "budget": self.budget,
            "separation": self.separation,
            "workers": self.workers,
        }


@dataclass(frozen=True)
class ScanMinimum:
    """A located scan minimum with its independent confirmation."""

    value: float
    witness: QuadricPoint
    reverified: float

    def __iter__(self):
        return iter((self.value, self.witness))

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "witness": self.witness.to_json(),
            "reverified": self.reverified,
        }


def _starts(t: float, config: ScanConfig, tag: int) -> np.ndarray:
    X, Y = sample_mt_frames(3, t, config.multistart_count, config.seed, stream=tag)
    return np.concatenate([X, Y], axis=1)


def _minimize(objective, x0: np.ndarray, config: ScanConfig):
    if config.optimizer is Optimizer.PROJECTED_GRADIENT:
        return projected_gradient_batch(objective, x0, max_evals=config.budget)
    return nelder_mead_batch(objective, x0, max_evals=config.budget)


def _witness_point(xy: np.ndarray, t: float) -> QuadricPoint:
    w = kernels.xy_to_w(kernels.project_mt(xy[None, :], t))[0]
    return QuadricPoint.from_w(w)


def _jac_residual_factory(t: float):
    def residual(xy):
        w = kernels.xy_to_w(kernels.project_mt(xy[None, :], t))[0]
        p = w[2] * w[3]
        num = (3j - 3) * p * p + (2 - 4j) * p + 1j
        val = num / max(abs(w[0]), abs(w[2]))
        return np.array([val.real, val.imag])

    return residual


def _disc_residual_factory(t: float):
    def residual(xy):
        w = kernels.xy_to_w(kernels.project_mt(xy[None, :], t))[0]
        p = w[2] * w[3]
        val = 6j * p * p - (2 + 6j) * p + 1
        return np.array([val.real, val.imag])

    return residual


def _excess_residual_factory(t: float, r0: complex, separation: float):
    from .fibers import partner_w4_roots

    def residual(xy):
        w = kernels.xy_to_w(kernels.project_mt(xy[None, :], t))[0]
        if w[0] == 0 or w[2] == 0:
            return np.array([1.0])
        roots = partner_w4_roots(w[2], w[3])
        r = min(roots, key=lambda v: abs(v - r0))
        what2 = (1.0 - w[2] * r) / w[0]
        if math.hypot(abs(r - w[3]), abs(what2 - w[1])) < separation:
            return np.array([1.0])
        n = abs(w[0]) ** 2 + abs(what2) ** 2 + abs(w[2]) ** 2 + abs(r) ** 2
        return np.array([n / 2.0 - t])

    return residual


def _polish(objective_1d, residual_factory, cand: np.ndarray, t: float):
    """Least-squares refinement, accepted only when it beats the candidate."""
    best_xy = cand
    best_val = float(objective_1d(cand[None, :])[0])
    try:
        refined = polish_root(residual_factory, cand)
        val = float(objective_1d(refined[None, :])[0])
        if val < best_val:
            best_xy, best_val = refined, val
    except Exception:
        pass
    return best_xy, best_val


def degeneracy_scan(t: float, config: ScanConfig) -> ScanMinimum:
    """Multistart minimization of |restricted Jacobian| over M_t^3."""
    if not t > 1.0:
        raise ValueError("t must exceed 1")
    if not isinstance(config.map_source, str):
        return _fd_rank_scan(t, config)
    obj = lambda xy: kernels.objective_absj(xy, t)
    xb, fb, _ = _minimize(obj, _starts(t, config, tag=1), config)
    order = np.argsort(fb)
    best_xy, best_val = xb[order[0]], float(fb[order[0]])
    for k in order[:4]:
        xy, val = _polish(obj, _jac_residual_factory(t), xb[k], t)
        if val < best_val:
            best_xy, best_val = xy, val
    witness = _witness_point(best_xy, t)
    reverified = abs(jacobian_restricted(witness).value)
    if not math.isclose(reverified, best_val, rel_tol=1e-6, abs_tol=1e-9):
        raise WitnessVerificationError(
            f"degeneracy witness mismatch: scan {best_val:.3e} vs closed form {reverified:.3e}"
        )
    return ScanMinimum(value=best_val, witness=witness, reverified=reverified)


def injectivity_scan(t: float, config: ScanConfig) -> ScanMinimum:
    """Multistart search for fiber partners pinned to the M_t^3 shell.

    The optimizer minimizes the shell gap |norm_sum/2 - t| of the
    best-separated partner; the reported value is the signed excess at
    the winning witness (0 at an exact collision, positive when every
    partner stays outside the shell).
    """
    if not t > 1.0:
        raise ValueError("t must exceed 1")
    if not isinstance(config.map_source, str):
        report = arfamily_scan(config.map_source, (t,), config)
        rec = report.records[0]
        return rec.min_partner_excess
    obj = lambda xy: kernels.objective_gap(xy, t, config.separation)
    xb, fb, _ = _minimize(obj, _starts(t, config, tag=2), config)
    order = np.argsort(fb)
    best_xy, best_gap = xb[order[0]], float(fb[order[0]])
    for k in order[:4]:
        w = kernels.xy_to_w(kernels.project_mt(xb[k][None, :], t))[0]
        from .fibers import partner_w4_roots

        roots = partner_w4_roots(w[2], w[3]) if (w[0] != 0 and w[2] != 0) else ()
        for r0 in roots:
            xy, gap = _polish(obj, _excess_residual_factory(t, r0, config.separation), xb[k], t)
            if gap < best_gap:
                best_xy, best_gap = xy, gap
    excess, gap = kernels.partner_data(
        kernels.xy_to_w(kernels.project_mt(best_xy[None, :], t)), t, config.separation
    )
    witness = _witness_point(best_xy, t)
    signed = float(excess[0])
    # closed-form confirmation: the fiber solver must see a partner at
    # least as close to the M_t^3 shell as the scan claims
    fs = fiber(witness)
    if fs.partners:
        reverified = min(abs(p.norm_sum / 2.0 - t) for p in fs.partners)
    else:
        reverified = math.inf
    if gap[0] != math.inf and reverified > abs(signed) + 1e-6:
        raise WitnessVerificationError(
            f"injectivity witness mismatch: scan gap {abs(signed):.3e} "
            f"vs closed form {reverified:.3e}"
        )
    return ScanMinimum(value=signed, witness=witness, reverified=reverified)


def multiplicity_scan(t: float, config: ScanConfig) -> ScanMinimum:
    """Multistart minimization of the fiber-quadratic |discriminant|."""
    obj = lambda xy: kernels.objective_disc(xy, t)
    xb, fb, _ = _minimize(obj, _starts(t, config, tag=3), config)
    order = np.argsort(fb)
    best_xy, best_val = xb[order[0]], float(fb[order[0]])
    for k in order[:4]:
        xy, val = _polish(obj, _disc_residual_factory(t), xb[k], t)
        if val < best_val:
            best_xy, best_val = xy, val
    witness = _witness_point(best_xy, t)
    from .fibers import discriminant

    reverified = abs(discriminant(witness.w3 * witness.w4))
    if not math.isclose(reverified, best_val, rel_tol=1e-6, abs_tol=1e-9):
        raise WitnessVerificationError("multiplicity witness mismatch")
    return ScanMinimum(value=best_val, witness=witness, reverified=reverified)


def fiber_histogram(t: float, config: ScanConfig) -> dict:
    """Distinct-point fiber sizes over a random sample, multiplicity kept."""
    X, Y = sample_mt_frames(3, t, config.samples_per_t, config.seed, stream=9)
    xy = np.concatenate([X, Y], axis=1)
    W = kernels.xy_to_w(xy)
    hist = {"1": 0, "2": 0, "3": 0, "double_root": 0}
    for row in W:
        fs = fiber(QuadricPoint.from_w(row))
        hist[str(1 + len(fs.partners))] += 1
        if fs.double_root:
            hist["double_root"] += 1
    return hist


@dataclass(frozen=True)
class ScanRecord:
    t: float
    verdict: Verdict
    min_abs_jacobian: ScanMinimum | None = None
    min_partner_excess: ScanMinimum | None = None
    min_disc_abs: ScanMinimum | None = None
    fiber_cardinality_histogram: dict | None = None

    def to_json(self) -> dict:
        out = {"t": self.t, "verdict": self.verdict.value}
        if self.min_abs_jacobian is not None:
            out["min_abs_jacobian"] = self.min_abs_jacobian.to_json()
        if self.min_partner_excess is not None:
            out["min_partner_excess"] = self.min_partner_excess.to_json()
        if self.min_disc_abs is not None:
            out["min_disc_abs"] = self.min_disc_abs.to_json()
        if self.fiber_cardinality_histogram is not None:
            out["fiber_cardinality_histogram"] = self.fiber_cardinality_histogram
        return out


@dataclass(frozen=True)
class ScanReport:
    kind: str
    config: ScanConfig
    records: tuple[ScanRecord, ...]
    empirical_t0_bracket: tuple[float, float] | None = None

    def to_json(self) -> dict:
        from . import __version__

        out = {
            "tool": "quadlab",
            "version": __version__,
            "kind": self.kind,
            "config": self.config.to_json(),
            "backend": kernels.BACKEND,
            "records": [r.to_json() for r in self.records],
        }
        if self.empirical_t0_bracket is not None:
            out["empirical_t0_bracket"] = list(self.empirical_t0_bracket)
        return out

    def to_csv(self) -> str:
        lines = ["t,min_abs_J,min_excess,verdict"]
        for r in self.records:
            jv = r.min_abs_jacobian.value if r.min_abs_jacobian else ""
            ev = r.min_partner_excess.value if r.min_partner_excess else ""
            lines.append(f"{r.t!r},{jv!r},{ev!r},{r.verdict.value}")
        return "\n".join(lines) + "\n"


def _verdict_degeneracy(minimum: ScanMinimum) -> Verdict:
    if minimum.reverified < DEGENERACY_TOL:
        return Verdict.DEGENERATE
    if minimum.value > EVIDENCE_FACTOR * DEGENERACY_TOL:
        return Verdict.EMBEDDING_EVIDENCE
    return Verdict.UNKNOWN


def _verdict_injectivity(minimum: ScanMinimum) -> Verdict:
    gap = abs(minimum.value)
    if gap < COLLISION_TOL and abs(minimum.reverified) < COLLISION_TOL:
        return Verdict.COLLISION
    if gap > EVIDENCE_FACTOR * COLLISION_TOL:
        return Verdict.EMBEDDING_EVIDENCE
    return Verdict.UNKNOWN


def _combined_verdict(t: float, config: ScanConfig) -> tuple[Verdict, ScanRecord]:
    deg = degeneracy_scan(t, config)
    vdeg = _verdict_degeneracy(deg)
    if vdeg is Verdict.DEGENERATE:
        return vdeg, ScanRecord(t=t, verdict=vdeg, min_abs_jacobian=deg)
    inj = injectivity_scan(t, config)
    vinj = _verdict_injectivity(inj)
    verdict = vinj if vinj is not Verdict.EMBEDDING_EVIDENCE else vdeg
    return verdict, ScanRecord(
        t=t, verdict=verdict, min_abs_jacobian=deg, min_partner_excess=inj
    )


def _scan_record(kind: str, t: float, index: int, config: ScanConfig) -> ScanRecord:
    cfg = replace(config, seed=_derive_seed(config.seed, kind, index), workers=1)
    if kind == "degeneracy":
        m = degeneracy_scan(t, cfg)
        return ScanRecord(t=t, verdict=_verdict_degeneracy(m), min_abs_jacobian=m)
    if kind == "injectivity":
        m = injectivity_scan(t, cfg)
        hist = fiber_histogram(t, cfg)
        return ScanRecord(
            t=t,
            verdict=_verdict_injectivity(m),
            min_partner_excess=m,
            fiber_cardinality_histogram=hist,
        )
    if kind == "multiplicity":
        m = multiplicity_scan(t, cfg)
        verdict = Verdict.UNKNOWN if m.reverified < 1e-6 else Verdict.EMBEDDING_EVIDENCE
        return ScanRecord(t=t, verdict=verdict, min_disc_abs=m)
    if kind == "t0":
        _, record = _combined_verdict(t, cfg)
        return record
    raise ValueError(f"unknown scan kind {kind!r}")


def _derive_seed(seed: int, kind: str, index: int) -> int:
    kind_id = {"degeneracy": 1, "injectivity": 2, "multiplicity": 3, "t0": 4, "arfamily": 5}[kind]
    return int(np.random.SeedSequence((seed, kind_id, index)).generate_state(1)[0])


def _scan_one(args):
    kind, t, index, config = args
    return _scan_record(kind, t, index, config)


def scan_grid(kind: str, config: ScanConfig) -> ScanReport:
    """Run one scan kind over the whole grid; parallel over t if asked.

    Task seeds derive deterministically from (seed, kind, index), so the
    report is identical for any worker count.
    """
    tasks = [(kind, t, i, config) for i, t in enumerate(config.t_grid)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_scan_one, tasks))
    else:
        records = [_scan_one(task) for task in tasks]
    return ScanReport(kind=kind, config=config, records=tuple(records))


def empirical_t0(config: ScanConfig, refine_steps: int = 10) -> ScanReport:
    """Bracket the parameter where embedding evidence first fails.

    Evaluates the combined verdict on the grid, finds the first flip away
    from EMBEDDING_EVIDENCE, and bisects inside that cell.  The flip can
    never sit above the degeneracy threshold (the closed-form witnesses
    force DEGENERATE beyond it) and never below the certified bound near
    t = 1.
    """
    if not config.t_grid or len(config.t_grid) < 2:
        raise ValueError("empirical_t0 needs a grid with at least 2 points")
    report = scan_grid("t0", config)
    records = report.records
    flip = None
    for i, rec in enumerate(records):
        if rec.verdict is not Verdict.EMBEDDING_EVIDENCE:
            flip = i
            break
    if flip is None:
        bracket = (config.t_grid[-1], math.inf)
        return ScanReport("t0", config, records, empirical_t0_bracket=bracket)
    if flip == 0:
        bracket = (1.0, config.t_grid[0])
        return ScanReport("t0", config, records, empirical_t0_bracket=bracket)

    lo, hi = config.t_grid[flip - 1], config.t_grid[flip]
    for step in range(refine_steps):
        mid = 0.5 * (lo + hi)
        cfg = replace(config, seed=_derive_seed(config.seed, "t0", 10_000 + step), workers=1)
        verdict, _ = _combined_verdict(mid, cfg)
        if verdict is Verdict.EMBEDDING_EVIDENCE:
            lo = mid
        else:
            hi = mid
    return ScanReport("t0", config, records, empirical_t0_bracket=(lo, hi))


def multiplicity_onset(config: ScanConfig, tol: float = 1e-4) -> tuple[float, float]:
    """Bracket the smallest t whose fibers acquire a double root.

    Bisection on "the discriminant scan reaches (numerically) zero",
    between the grid endpoints.
    """
    if len(config.t_grid) < 2:
        raise ValueError("multiplicity_onset needs a grid with at least 2 points")

    def has_double_root(t: float, step: int) -> bool:
        cfg = replace(config, seed=_derive_seed(config.seed, "multiplicity", step), workers=1)
        return multiplicity_scan(t, cfg).reverified < 1e-8

    lo, hi = config.t_grid[0], config.t_grid[-1]
    if has_double_root(lo, 0):
        raise ValueError("grid starts beyond the multiplicity onset")
    if not has_double_root(hi, 1):
        raise ValueError("grid ends before the multiplicity onset")
    step = 2
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if has_double_root(mid, step):
            hi = mid
        else:
            lo = mid
        step += 1
    return lo, hi


# ---------------------------------------------------------------------------
# general map class: pairwise collision search
# ---------------------------------------------------------------------------


def _pair_objective_factory(gmap, t: float, separation: float):
    def objective(v: np.ndarray) -> np.ndarray:
        v = np.atleast_2d(v)
        xy1 = kernels.project_mt(v[:, :8], t)
        xy2 = kernels.project_mt(v[:, 8:], t)
        W1 = kernels.xy_to_w(xy1)
        W2 = kernels.xy_to_w(xy2)
        dG = np.linalg.norm(gmap.eval_batch(W1) - gmap.eval_batch(W2), axis=1)
        dist = np.linalg.norm(W1 - W2, axis=1)
        return dG + 10.0 * np.maximum(0.0, separation - dist)

    return objective


def _pair_residual_factory(gmap, t: float, separation: float):
    def residual(v: np.ndarray) -> np.ndarray:
        W1 = kernels.xy_to_w(kernels.project_mt(v[None, :8], t))[0]
        W2 = kernels.xy_to_w(kernels.project_mt(v[None, 8:], t))[0]
        dG = gmap(W1) - gmap(W2)
        pen = 10.0 * max(0.0, separation - float(np.linalg.norm(W1 - W2)))
        return np.array([dG[0].real, dG[0].imag, dG[1].real, dG[1].imag,
                         dG[2].real, dG[2].imag, pen])

    return residual


def _triple_u(t: float) -> float:
    # largest u with 2u^2 + 1/u^2 = 2t (exists for t >= sqrt(2))
    return math.sqrt((t + math.sqrt(t * t - 2.0)) / 2.0)


def arfamily_scan(q: Poly4, t_grid, config: ScanConfig, pad=None) -> ScanReport:
    """Pairwise collision search for a general map of the class.

    No closed-form fiber solver exists for general generators, so
    injectivity is probed by minimizing |G(W) - G(W')| over pairs on
    M_t^3 with |W - W'| kept above the separation.  When the generator is
    a polynomial in |z|^2, |w|^2 (so the operator output is divisible by
    zbar wbar), the known triple-fiber collision pair is injected as a
    start whenever it exists at level t.  ``pad`` is forwarded to
    :func:`quadlab.arfamily.build_G` (the builtin map is the padded
    classical generator).
    """
    gmap = build_G(q, pad)
    try:
        divisible = divisibility_check(q)
    except ValueError:
        divisible = False

    records = []
    for i, t in enumerate(t_grid):
        cfg = replace(config, seed=_derive_seed(config.seed, "arfamily", i), workers=1)
        obj = _pair_objective_factory(gmap, t, cfg.separation)
        X1, Y1 = sample_mt_frames(3, t, cfg.multistart_count, cfg.seed, stream=11)
        X2, Y2 = sample_mt_frames(3, t, cfg.multistart_count, cfg.seed, stream=12)
        starts = np.concatenate([X1, Y1, X2, Y2], axis=1)
        if divisible and t >= math.sqrt(2.0) + 1e-12:
            u = _triple_u(t)
            wu = np.array([[u, 1.0 / u, u, 0.0]], dtype=complex)
            wup = np.array([[u, 0.0, u, 1.0 / u]], dtype=complex)
            seedrow = np.concatenate(
                [kernels.w_to_xy(wu)[0], kernels.w_to_xy(wup)[0]]
            )
            starts[0] = seedrow
        xb, fb, _ = _minimize(obj, starts, cfg)
        order = np.argsort(fb)
        k = int(order[0])
        for j in order[:4]:
            refined, val = _polish(obj, _pair_residual_factory(gmap, t, cfg.separation), xb[j], t)
            if val < fb[k]:
                xb[j], fb[j] = refined, val
                k = int(j) if val < fb[k] else k
        k = int(np.argmin(fb))
        v = xb[k]
        W1 = kernels.xy_to_w(kernels.project_mt(v[None, :8], t))[0]
        W2 = kernels.xy_to_w(kernels.project_mt(v[None, 8:], t))[0]
        sep_dist = float(np.linalg.norm(W1 - W2))
        dg = float(np.linalg.norm(gmap(W1) - gmap(W2)))
        witness = QuadricPoint.from_w(W1)
        if dg < COLLISION_TOL and sep_dist >= cfg.separation:
            verdict = Verdict.COLLISION
        elif dg > EVIDENCE_FACTOR * COLLISION_TOL:
            verdict = Verdict.EMBEDDING_EVIDENCE
        else:
            verdict = Verdict.UNKNOWN
        m = ScanMinimum(value=dg, witness=witness, reverified=dg)
        records.append(ScanRecord(t=float(t), verdict=verdict, min_partner_excess=m))
    cfg_out = replace(config, t_grid=tuple(float(t) for t in t_grid), map_source=q)
    return ScanReport(kind="arfamily", config=cfg_out, records=tuple(records))


def _fd_rank_scan(t: float, config: ScanConfig) -> ScanMinimum:
    """Degeneracy measure for general maps: smallest singular value of the
    finite-difference restriction of dG to the quadric tangent space."""
    gmap = build_G(config.map_source)

    def sigma_min(W: np.ndarray) -> float:
        grad = np.array([W[1], W[0], W[3], W[2]])
        basis = _tangent_basis(np.conj(grad))
        h = 1e-6
        cols = [(gmap(W + h * b) - gmap(W - h * b)) / (2 * h) for b in basis]
        return float(np.linalg.svd(np.stack(cols, axis=1), compute_uv=False)[-1])

    def objective(xy: np.ndarray) -> np.ndarray:
        W = kernels.xy_to_w(kernels.project_mt(np.atleast_2d(xy), t))
        return np.array([sigma_min(row) for row in W])

    xb, fb, _ = _minimize(objective, _starts(t, config, tag=13), config)
    k = int(np.argmin(fb))
    witness = _witness_point(xb[k], t)
    val = float(fb[k])
    return ScanMinimum(value=val, witness=witness, reverified=val)


def _tangent_basis(normal: np.ndarray) -> np.ndarray:
    """Hermitian-orthonormal basis of the complement of one C^4 direction.

    Feeding conj(grad) of the quadric polynomial yields a basis of the
    holomorphic tangent space {v : grad . v = 0}.
    """
    g = normal / np.linalg.norm(normal)
    basis = []
    for k in range(4):
        e = np.zeros(4, dtype=complex)
        e[k] = 1.0
        v = e - np.vdot(g, e) * g
        for b in basis:
            v = v - np.vdot(b, v) * b
        n = np.linalg.norm(v)
        if n > 1e-8:
            basis.append(v / n)
    return np.array(basis[:3])
