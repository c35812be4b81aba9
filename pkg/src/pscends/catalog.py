"""Concrete circle-bundle geometries used for oracle cross-validation.

Each entry packages a base geometry, a connection 1-form written on a chart,
and a builder that assembles the warped total-space chart

    (t, psi, x...)  ->  dt^2 + a(t)^2 (dpsi + A_i(x) dx^i)^2 + b(t)^2 h_ij(x) dx^i dx^j

on which the finite-difference oracle runs.  The fiber coordinate has period
2*pi and the connection restricts to d(psi) on fibers, so a(t) is the fiber
radius (fiber length 2*pi*a(t)).  Curvature-form norms follow the
full-contraction convention of ``bundle_metric``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .bundle_metric import BaseGeometry, WarpProfile, threshold
from .chart_curvature import ChartMetric
from .errors import DomainError

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CatalogEntry:
    """One worked circle-bundle geometry.

    ``connection_form`` maps base coordinates to the 1-form coefficients A_i
    of the chart trivialization (None means the trivial product connection);
    ``base_metric`` maps base coordinates to the matrix h_ij.  ``x_box`` is a
    sampling box for the X-coordinates (fiber angle first, then base), and
    ``reference_points`` are fixed X-points away from chart singularities.
    """

    name: str
    base: BaseGeometry
    connection_desc: str
    base_metric: Callable[[np.ndarray], np.ndarray]
    connection_form: Optional[Callable[[np.ndarray], np.ndarray]]
    x_box: tuple
    reference_points: tuple
    t_hint: tuple = (-0.5, 1e12)
    base_box: tuple = ()

    @property
    def total_dim(self) -> int:
        return self.base.base_dim + 2

    def total_chart(self, profile: WarpProfile) -> ChartMetric:
        """Warped total-space chart metric on coordinates (t, psi, base...)."""
        bd = self.base.base_dim
        dim = bd + 2
        base_metric = self.base_metric
        conn = self.connection_form

        def comps(p):
            t = p[0]
            g = np.zeros((dim, dim))
            g[0, 0] = 1.0
            a = profile.a(t)[0]
            g[1, 1] = a * a
            if bd:
                x = p[2:]
                b = profile.b(t)[0]
                h = base_metric(x)
                g[2:, 2:] = b * b * h
                if conn is not None:
                    A = np.asarray(conn(x), dtype=float)
                    g[1, 2:] = g[2:, 1] = a * a * A
                    g[2:, 2:] += a * a * np.outer(A, A)
            return g

        hint = (self.t_hint, (-1e12, 1e12)) + tuple(self.base_box)
        return ChartMetric(dim=dim, components=comps, domain_hint=hint,
                           name=f"{self.name}[{profile.label}]")

    def random_points(self, rng: np.random.Generator, count: int,
                      t_range=(0.0, 20.0)) -> np.ndarray:
        """Random total-space sample points (t, psi, base...) in the box."""
        lo = np.array([t_range[0]] + [b[0] for b in self.x_box])
        hi = np.array([t_range[1]] + [b[1] for b in self.x_box])
        return rng.uniform(lo, hi, size=(count, lo.size))

    def base_part(self, point) -> np.ndarray:
        return np.asarray(point, dtype=float)[2:]

    def default_coeff(self) -> float:
        """A positivity-safe free coefficient for this entry's dimension."""
        n = self.total_dim
        if n in (2, 3):
            return 1.0
        thr = threshold(n, self.base.omega_sup)
        return 1.0 if math.isinf(thr) else 0.5 * thr


def heisenberg_entry() -> CatalogEntry:
    """Nil-type example: flat 2-torus base, connection dz - x dy.

    The curvature 2-form is -dx^dy, of constant full-contraction norm sqrt(2).
    """
    base = BaseGeometry(base_dim=2,
                        scalar_h=lambda x: 0.0,
                        omega_norm=lambda x: math.sqrt(2.0),
                        omega_sup=math.sqrt(2.0),
                        sample_points=((0.0, 0.0), (0.3, 0.1), (-0.7, 0.9), (1.1, -0.4)),
                        name="heisenberg-base")
    return CatalogEntry(
        name="heisenberg",
        base=base,
        connection_desc="theta = dz - x dy on the periodic chart; d theta = -dx^dy",
        base_metric=lambda x: np.eye(2),
        connection_form=lambda x: np.array([0.0, -x[0]]),
        x_box=((-math.pi, math.pi), (-1.5, 1.5), (-1.5, 1.5)),
        reference_points=((0.2, 0.3, 0.1), (1.0, -0.8, 0.5), (-2.0, 1.2, -1.1),
                          (0.0, 0.0, 0.0), (2.5, -1.3, 1.4)),
        base_box=((-1e6, 1e6), (-1e6, 1e6)),
    )


def hopf_entry() -> CatalogEntry:
    """Circle bundle over the unit round 2-sphere with constant-norm curvature.

    Polar chart away from the poles; connection A = -sqrt(2) cos(theta) dphi,
    so the curvature 2-form is sqrt(2) sin(theta) dtheta^dphi with constant
    full-contraction norm 2.  Reference points keep the polar angle in
    [0.3, pi - 0.3].
    """
    margin = 0.05
    base = BaseGeometry(base_dim=2,
                        scalar_h=lambda x: 2.0,
                        omega_norm=lambda x: 2.0,
                        omega_sup=2.0,
                        sample_points=((0.5, 0.2), (math.pi / 2.0, 1.0), (2.4, -0.7),
                                       (1.1, 2.2)),
                        name="unit-sphere-base")

    def h(x):
        s = math.sin(x[0])
        return np.array([[1.0, 0.0], [0.0, s * s]])

    return CatalogEntry(
        name="hopf",
        base=base,
        connection_desc="theta = dpsi - sqrt(2) cos(polar) dphi over the unit sphere",
        base_metric=h,
        connection_form=lambda x: np.array([0.0, -math.sqrt(2.0) * math.cos(x[0])]),
        x_box=((-math.pi, math.pi), (0.35, math.pi - 0.35), (-math.pi, math.pi)),
        reference_points=((0.1, 0.4, 0.3), (1.3, math.pi / 2.0, -1.0), (-0.7, 2.2, 2.0),
                          (2.0, 0.9, 0.0), (0.0, 2.6, -2.3)),
        base_box=((margin, math.pi - margin), (-1e6, 1e6)),
    )


def _sphere_chart(dim: int, radius: float):
    """Hyperspherical-coordinate round metric of dimension ``dim``."""
    def h(x):
        g = np.zeros((dim, dim))
        r2 = radius * radius
        g[0, 0] = r2
        fac = 1.0
        for i in range(1, dim):
            fac *= math.sin(x[i - 1]) ** 2
            g[i, i] = r2 * fac
        return g
    return h


def trivial_entry(base_dim: int, base_scalar: float = 0.0) -> CatalogEntry:
    """Product bundle (flat connection): flat torus base, or a round sphere.

    ``base_scalar`` is the constant base scalar curvature; it must be 0 for
    base dimension <= 1 (those bases are scalar flat).
    """
    if base_dim not in (0, 1, 2, 3, 4):
        raise DomainError("trivial entries support base dimension 0..4")
    if base_scalar < 0.0:
        raise DomainError("base scalar curvature must be nonnegative")
    if base_scalar > 0.0 and base_dim <= 1:
        raise DomainError("a base of dimension <= 1 is scalar flat; base_scalar must be 0")

    if base_scalar == 0.0:
        base_metric = lambda x, _d=base_dim: np.eye(_d)
        pts = ((),) if base_dim == 0 else tuple(
            tuple(0.3 * (i + 1) * ((-1) ** k) for i in range(base_dim)) for k in range(3))
        box = tuple((-2.0, 2.0) for _ in range(base_dim))
        bbox = tuple((-1e6, 1e6) for _ in range(base_dim))
        kind = "point" if base_dim == 0 else f"flat torus T^{base_dim}"
    else:
        # round sphere with R = d(d-1)/r^2
        radius = math.sqrt(base_dim * (base_dim - 1) / base_scalar)
        base_metric = _sphere_chart(base_dim, radius)
        mid = math.pi / 2.0
        pts = tuple(tuple(mid + 0.15 * ((-1) ** (k + i)) for i in range(base_dim))
                    for k in range(3))
        box = tuple((0.6, math.pi - 0.6) for _ in range(base_dim))
        bbox = tuple((0.05, math.pi - 0.05) for _ in range(base_dim - 1)) + ((-1e6, 1e6),)
        kind = f"round S^{base_dim} of radius {radius:g}"

    base = BaseGeometry(base_dim=base_dim,
                        scalar_h=lambda x, _r=float(base_scalar): _r,
                        omega_norm=lambda x: 0.0,
                        omega_sup=0.0,
                        sample_points=pts,
                        name=kind)
    refs = tuple((0.3 * (k + 1),) + p for k, p in enumerate(pts)) or ((0.2,),)
    return CatalogEntry(
        name=f"trivial{base_dim}" + ("r" if base_scalar else ""),
        base=base,
        connection_desc=f"product bundle over a {kind}; theta = dpsi, flat connection",
        base_metric=base_metric,
        connection_form=None,
        x_box=((-math.pi, math.pi),) + box,
        reference_points=refs,
        base_box=bbox,
    )


def catalog_entries() -> dict:
    """All registered entries, keyed by CLI name."""
    entries = [
        heisenberg_entry(),
        hopf_entry(),
        trivial_entry(0),
        trivial_entry(1),
        trivial_entry(2),
        trivial_entry(2, base_scalar=2.0),
        trivial_entry(4),
    ]
    named = {
        "heisenberg": entries[0],
        "hopf": entries[1],
        "point": entries[2],
        "circle": entries[3],
        "torus2": entries[4],
        "sphere2": entries[5],
        "torus4": entries[6],
    }
    return named


def get_entry(name: str) -> CatalogEntry:
    entries = catalog_entries()
    if name not in entries:
        raise DomainError(f"unknown catalog entry {name!r}; known: {sorted(entries)}")
    return entries[name]


def omega_norm_from_chart(entry: CatalogEntry, x, step: float = 1e-6) -> float:
    """Curvature-form norm recomputed from the chart connection components.

    Central finite differences of A_i give Om_ij = d_i A_j - d_j A_i; the
    norm is the full double contraction with the inverse base metric.  Used
    to validate the entry's stored ``omega_norm`` evaluator.
    """
    bd = entry.base.base_dim
    x = np.asarray(x, dtype=float)
    if entry.connection_form is None or bd == 0:
        return 0.0
    dA = np.empty((bd, bd))
    for i in range(bd):
        e = np.zeros(bd)
        e[i] = step
        dA[i] = (np.asarray(entry.connection_form(x + e))
                 - np.asarray(entry.connection_form(x - e))) / (2.0 * step)
    om = dA - dA.T
    hinv = np.linalg.inv(entry.base_metric(x))
    return float(math.sqrt(np.einsum('ik,jl,ij,kl->', hinv, hinv, om, om)))


def fiber_length(entry: CatalogEntry, profile: WarpProfile, t: float, x,
                 segments: int = 512) -> float:
    """Metric length of the fiber circle through (t, ., x) by quadrature.

    Integrates sqrt(g_psi_psi) over one 2*pi period of the fiber coordinate;
    must equal 2*pi*a(t) by the connection normalization.
    """
    chart = entry.total_chart(profile)
    x = tuple(np.asarray(x, dtype=float))
    psis = np.linspace(0.0, _TWO_PI, segments + 1)
    vals = np.array([math.sqrt(chart.at((t, psi) + x)[1, 1]) for psi in psis])
    return float(np.trapezoid(vals, psis))
