"""Finite-difference curvature of coordinate-chart metrics.

This module is the independent numerical oracle of the repository: given any
map ``point -> metric components`` it computes Christoffel symbols, the
covariant Riemann tensor, Ricci, and scalar curvature by second-order central
differences, with a Richardson error estimate.  Every closed-form curvature
claim elsewhere in the package is validated against it.

Sign convention: the unit round 2-sphere has scalar curvature +2 (so that
Gauss-Bonnet reads ``integral R dA = 4 pi chi``), and the hyperbolic plane has
scalar curvature -2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DegenerateMetricError, DomainError, UnreliableStepError

# Refuse metric matrices with condition number above this (dense solves only,
# dims <= 8 in practice).
COND_LIMIT = 1e12

Box = Sequence[tuple[float, float]]


@dataclass(frozen=True)
class ChartMetric:
    """A coordinate chart with a pointwise metric-component evaluator.

    ``components(p)`` must return a symmetric positive-definite ``dim x dim``
    array at every queried point.  ``domain_hint`` is an optional coordinate
    box; stencil points are validated against it.  The evaluator must be
    reentrant: all oracle operations are pure and may be called concurrently.
    """

    dim: int
    components: Callable[[np.ndarray], np.ndarray]
    domain_hint: Optional[Box] = None
    name: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError(f"chart dimension must be >= 1, got {self.dim}")
        if self.domain_hint is not None and len(self.domain_hint) != self.dim:
            raise DomainError("domain_hint must have one (lo, hi) pair per coordinate")

    def contains(self, point: np.ndarray) -> bool:
        if self.domain_hint is None:
            return True
        return all(lo <= x <= hi for x, (lo, hi) in zip(point, self.domain_hint))

    def at(self, point) -> np.ndarray:
        """Evaluate, then check symmetry / positive definiteness / conditioning."""
        p = np.asarray(point, dtype=float)
        if p.shape != (self.dim,):
            raise DomainError(f"point has shape {p.shape}, expected ({self.dim},)")
        if not self.contains(p):
            raise DomainError(f"point {p.tolist()} outside domain_hint of chart {self.name!r}")
        g = np.asarray(self.components(p), dtype=float)
        if g.shape != (self.dim, self.dim):
            raise DomainError(f"components returned shape {g.shape}")
        scale = max(1.0, float(np.abs(g).max()))
        if float(np.abs(g - g.T).max()) > 1e-14 * scale:
            raise DegenerateMetricError(f"metric not symmetric at {p.tolist()}")
        g = 0.5 * (g + g.T)
        ev = np.linalg.eigvalsh(g)
        if ev[0] <= 0.0:
            raise DegenerateMetricError(f"metric not positive definite at {p.tolist()}")
        if ev[-1] / ev[0] > COND_LIMIT:
            raise DegenerateMetricError(f"metric condition number {ev[-1]/ev[0]:.3e} exceeds {COND_LIMIT:.0e}")
        return g


@dataclass(frozen=True)
class CurvatureReport:
    """Scalar/Ricci curvature at a point with a Richardson error estimate."""

    point: tuple
    scalar: float
    ricci: np.ndarray = field(repr=False)
    step: float
    estimated_error: float


def _first_derivatives(metric: ChartMetric, p: np.ndarray, h: float) -> np.ndarray:
    """dg[k, i, j] = d_k g_ij by central differences."""
    d = metric.dim
    dg = np.empty((d, d, d))
    for k in range(d):
        e = np.zeros(d)
        e[k] = h
        dg[k] = (metric.at(p + e) - metric.at(p - e)) / (2.0 * h)
    return dg


def _second_derivatives(metric: ChartMetric, p: np.ndarray, h: float):
    """Return (g, dg, d2g) with d2g[k, l, i, j] = d_k d_l g_ij."""
    d = metric.dim
    g0 = metric.at(p)
    plus = np.empty((d, d, d))
    minus = np.empty((d, d, d))
    for k in range(d):
        e = np.zeros(d)
        e[k] = h
        plus[k] = metric.at(p + e)
        minus[k] = metric.at(p - e)
    dg = (plus - minus) / (2.0 * h)
    d2g = np.empty((d, d, d, d))
    for k in range(d):
        d2g[k, k] = (plus[k] - 2.0 * g0 + minus[k]) / (h * h)
        for l in range(k + 1, d):
            ek = np.zeros(d)
            ek[k] = h
            el = np.zeros(d)
            el[l] = h
            mixed = (metric.at(p + ek + el) - metric.at(p + ek - el)
                     - metric.at(p - ek + el) + metric.at(p - ek - el)) / (4.0 * h * h)
            d2g[k, l] = mixed
            d2g[l, k] = mixed
    return g0, dg, d2g


def _inverse(g: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.inv(g)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - caught earlier by .at()
        raise DegenerateMetricError(str(exc)) from exc


def _christoffel_from(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    ginv = _inverse(g)
    # Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    term = np.einsum('ijl->lij', dg) + np.einsum('jil->lij', dg) - dg
    return 0.5 * np.einsum('kl,lij->kij', ginv, term)


def christoffel(metric: ChartMetric, point, step: float = 1e-4) -> np.ndarray:
    """Christoffel symbols ``Gamma[k, i, j]`` at ``point``, central differences.

    Symmetric in the lower indices (i, j) by construction.
    """
    p = np.asarray(point, dtype=float)
    g = metric.at(p)
    dg = _first_derivatives(metric, p, step)
    return _christoffel_from(g, dg)


def riemann(metric: ChartMetric, point, step: float = 1e-4) -> np.ndarray:
    """Fully covariant Riemann tensor ``R[r, s, m, n]`` at ``point``.

    Convention: ``R[r, s, m, n] = 1/2 (d_s d_m g_rn + d_r d_n g_sm
    - d_s d_n g_rm - d_r d_m g_sn) + g_lt (G^l_sm G^t_rn - G^l_sn G^t_rm)``,
    which makes sectional curvatures of round spheres positive.
    """
    p = np.asarray(point, dtype=float)
    g, dg, d2g = _second_derivatives(metric, p, step)
    gam = _christoffel_from(g, dg)
    term1 = 0.5 * (np.transpose(d2g, (2, 0, 1, 3)) + np.transpose(d2g, (0, 2, 3, 1))
                   - np.transpose(d2g, (2, 0, 3, 1)) - np.transpose(d2g, (0, 2, 1, 3)))
    term2 = (np.einsum('lt,lsm,trn->rsmn', g, gam, gam)
             - np.einsum('lt,lsn,trm->rsmn', g, gam, gam))
    return term1 + term2


def ricci(metric: ChartMetric, point, step: float = 1e-4) -> np.ndarray:
    """Ricci tensor ``R[s, n] = g^{rm} Riem[r, s, m, n]``."""
    p = np.asarray(point, dtype=float)
    ginv = _inverse(metric.at(p))
    return np.einsum('rm,rsmn->sn', ginv, riemann(metric, p, step))


def scalar_value(metric: ChartMetric, point, step: float = 1e-4) -> float:
    """Raw single-step scalar curvature (no error estimate)."""
    p = np.asarray(point, dtype=float)
    ginv = _inverse(metric.at(p))
    return float(np.einsum('sn,sn->', ginv, ricci(metric, p, step)))


def scalar_curvature(metric: ChartMetric, point, step: float = 1e-4) -> CurvatureReport:
    """Scalar curvature report at ``point`` with step ``step``.

    The scalar is computed at the requested step; the error is estimated by
    Richardson comparison with step ``2*step``, and a three-level ratio test
    on steps (4h, 2h, h) guards against non-convergent stencils (raises
    UnreliableStepError when the observed order is nowhere near two).
    """
    p = np.asarray(point, dtype=float)
    r_h = scalar_value(metric, p, step)
    r_2h = scalar_value(metric, p, 2.0 * step)
    r_4h = scalar_value(metric, p, 4.0 * step)
    floor = 1e-11 * (1.0 + abs(r_h))
    est = abs(r_2h - r_h) / 3.0 + 1e-14 * (1.0 + abs(r_h))
    if abs(r_2h - r_h) > floor:
        ratio = (r_4h - r_2h) / (r_2h - r_h)
        # second-order stencil: ratio ~ 4; allow generous slack
        if not (1.5 <= ratio <= 12.0):
            raise UnreliableStepError(
                f"Richardson ratio test failed at {p.tolist()} (ratio {ratio:.3f}); "
                f"try a different step than {step:g}")
    ric = ricci(metric, p, step)
    return CurvatureReport(point=tuple(p.tolist()), scalar=r_h, ricci=ric,
                           step=step, estimated_error=est)


def euclidean_chart(dim: int) -> ChartMetric:
    """Flat chart (identity components), mostly for tests."""
    eye = np.eye(dim)
    return ChartMetric(dim=dim, components=lambda p: eye, name=f"euclidean{dim}")


def product_chart(first: ChartMetric, second: ChartMetric, name: str = "") -> ChartMetric:
    """Block-diagonal product of two charts on independent coordinates."""
    d1, d2 = first.dim, second.dim

    def comps(p):
        g = np.zeros((d1 + d2, d1 + d2))
        g[:d1, :d1] = first.components(p[:d1])
        g[d1:, d1:] = second.components(p[d1:])
        return g

    hint = None
    if first.domain_hint is not None and second.domain_hint is not None:
        hint = tuple(first.domain_hint) + tuple(second.domain_hint)
    return ChartMetric(dim=d1 + d2, components=comps, domain_hint=hint,
                       name=name or f"{first.name}x{second.name}")
