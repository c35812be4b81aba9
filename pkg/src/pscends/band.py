"""Warped bands, the level-set area/potential functional, and width bounds.

The band is ``[-T, T] x V`` with metric ``dt^2 + phi(t)^2 g_V`` where ``(V,
g_V)`` is a closed orientable constant-curvature surface of genus >= 1 and
area ``A_V`` (hyperbolic for genus >= 2, flat for genus 1); its constant
scalar curvature is pinned by Gauss-Bonnet, ``R_V * A_V = 8 pi (1 - genus)``.
Level sets ``{s} x V`` are homothetic copies of the fiber, so their total
curvature is ``R_V * A_V`` independent of the level.

Orientation conventions (all three signs fixed together): the reference
region is ``{t >= 0}``, a candidate region at level ``s`` is ``{t >= s}``, and
the outward normal of a region points toward decreasing t (toward the far
end).  Consequently the mean curvature of the level-``s`` slice with respect
to that outward normal is ``H(s) = -2 phi'(s)/phi(s)``, the functional is

    A(s) = A_V * [ phi(s)^2 + integral_0^s h(t) phi(t)^2 dt ],

and a critical level satisfies ``H(s*) = h(s*)``.  The signed distance to the
middle slice is the identity ``d(t) = t`` in this model; the parameter
``eps2`` survives only through the potential prefactor and the gradient bound
it tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import BoundaryEscapeError, DomainError, HypothesisError
from .families import check_derivatives

_EIGHT_PI = 8.0 * math.pi
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PotentialParams:
    """Parameters of the diverging tangent potential on (-L, L).

    ``h(d) = (1 + eps2) * (n-1) pi / (n L) * tan(pi d / (2 L))`` with
    ``n = dim_n``; it is odd, strictly increasing, and blows up at d -> +-L.
    """

    length: float
    eps2: float = 0.0
    dim_n: int = 3

    def __post_init__(self):
        if self.length <= 0.0:
            raise DomainError("potential length L must be positive")
        if self.eps2 < 0.0:
            raise DomainError("eps2 must be nonnegative")
        if self.dim_n < 2:
            raise DomainError("dim_n must be >= 2")

    @property
    def prefactor(self) -> float:
        n = float(self.dim_n)
        return (1.0 + self.eps2) * (n - 1.0) * math.pi / (n * self.length)


def potential(d, params: PotentialParams):
    """Evaluate the tangent potential; DomainError for |d| >= L."""
    d = np.asarray(d, dtype=float)
    L = params.length
    if np.any(np.abs(d) >= L):
        raise DomainError(f"potential argument must satisfy |d| < L = {L:g}")
    val = params.prefactor * np.tan(math.pi * d / (2.0 * L))
    return float(val) if d.ndim == 0 else val


def potential_derivative(d, params: PotentialParams):
    """d/dd of the potential, written via 1 + tan^2 for pole stability."""
    d = np.asarray(d, dtype=float)
    L = params.length
    if np.any(np.abs(d) >= L):
        raise DomainError(f"potential argument must satisfy |d| < L = {L:g}")
    tau = np.tan(math.pi * d / (2.0 * L))
    val = params.prefactor * (math.pi / (2.0 * L)) * (1.0 + tau * tau)
    return float(val) if d.ndim == 0 else val


def potential_bound_check(params: PotentialParams, grid) -> float:
    """Worst margin of the pointwise potential inequality over ``grid``.

    Checks ``(3/2) h^2 - 2 (1 + eps2) |h'| >= -2 (1 + eps2)^2 pi^2 / (3 L^2)``
    pointwise (the factor (1 + eps2) on |h'| is the extreme gradient bound of
    the smoothed distance).  The chain is the identity tan^2 - sec^2 = -1, so
    the exact margin is identically zero; the return value is pure numerical
    noise and must be >= -1e-10.

    Evaluated in 80-bit extended precision; points close enough to the poles
    that even extended precision would blur the cancellation are escalated to
    mpmath.  Only dim_n = 3 is supported (the inequality constant is specific
    to that case).
    """
    if params.dim_n != 3:
        raise DomainError("potential_bound_check is specific to dim_n = 3")
    grid = np.asarray(grid, dtype=float)
    L = params.length
    if np.any(np.abs(grid) >= L):
        raise DomainError("grid must lie strictly inside (-L, L)")
    e1 = 1.0 + params.eps2

    ld = np.longdouble
    Lx = ld(L)
    ex = ld(e1)
    pix = ld(np.pi)
    c1 = ex * 2.0 * pix / (3.0 * Lx)            # potential prefactor
    c2 = c1 * pix / (2.0 * Lx)                  # derivative prefactor
    K = 2.0 * ex * ex * pix * pix / (3.0 * Lx * Lx)

    x = pix * grid.astype(ld) / (2.0 * Lx)
    tau = np.tan(x)
    sec2 = 1.0 + tau * tau
    margin = 1.5 * (c1 * tau) ** 2 - 2.0 * ex * (c2 * sec2) + K

    # extended-precision roundoff ~ K * eps_ld * sec^2; escalate the rest
    eps_ld = float(np.finfo(ld).eps)
    sec2_cap = 1e-11 / (float(K) * eps_ld * 8.0)
    hot = np.asarray(sec2, dtype=float) > sec2_cap
    worst = float(np.min(margin[~hot])) if np.any(~hot) else math.inf
    if np.any(hot):
        import mpmath as mp
        with mp.workdps(40):
            em = mp.mpf(1) + mp.mpf(repr(params.eps2))
            Lm = mp.mpf(repr(L))
            c1m = em * 2 * mp.pi / (3 * Lm)
            c2m = c1m * mp.pi / (2 * Lm)
            Km = 2 * em * em * mp.pi * mp.pi / (3 * Lm * Lm)
            for d in grid[hot]:
                tm = mp.tan(mp.pi * mp.mpf(repr(float(d))) / (2 * Lm))
                m = 1.5 * (c1m * tm) ** 2 - 2 * em * (c2m * (1 + tm * tm)) + Km
                worst = min(worst, float(m))
    return worst


@dataclass(frozen=True)
class BandModel:
    """Rotationally symmetric band [-T, T] x V with warp factor phi.

    ``phi(t)`` returns ``(value, d1, d2)`` and must be positive on [-T, T].
    ``fiber_scalar`` is derived from Gauss-Bonnet for the constant-curvature
    fiber: ``R_V = 8 pi (1 - genus) / fiber_area``.
    """

    half_width: float
    phi: Callable[[float], tuple]
    genus: int
    fiber_area: float
    label: str = "custom"

    def __post_init__(self):
        if self.half_width <= 0.0:
            raise DomainError("band half-width must be positive")
        if not isinstance(self.genus, (int, np.integer)) or self.genus < 1:
            raise DomainError("fiber genus must be an integer >= 1")
        if self.fiber_area <= 0.0:
            raise DomainError("fiber area must be positive")
        for t in np.linspace(-self.half_width, self.half_width, 33):
            if self.phi(t)[0] <= 0.0:
                raise DomainError(f"warp factor must be positive on the band (phi({t:g}) <= 0)")

    @property
    def fiber_scalar(self) -> float:
        return _EIGHT_PI * (1.0 - self.genus) / self.fiber_area

    @property
    def total_fiber_curvature(self) -> float:
        """Total curvature of any level set (Gauss-Bonnet: 8 pi (1 - genus))."""
        return self.fiber_scalar * self.fiber_area

    def check_consistency(self, rtol: float = 1e-6):
        grid = np.linspace(-0.95 * self.half_width, 0.95 * self.half_width, 25)
        check_derivatives(self.phi, grid, rtol)
        return self

    def area(self, s: float) -> float:
        return self.phi(s)[0] ** 2 * self.fiber_area


def band_scalar(model: BandModel, t):
    """Scalar curvature of the band metric at coordinate t (vectorized).

    ``R(t) = R_V / phi^2 - 4 phi''/phi - 2 (phi'/phi)^2`` under the same sign
    convention as the chart oracle (unit 2-sphere -> +2).
    """
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > model.half_width * (1.0 + 1e-12)):
        raise DomainError(f"|t| must be <= band half-width {model.half_width:g}")
    f, fp, fpp = model.phi(t)
    f = np.asarray(f, dtype=float)
    if np.any(f <= 0.0):
        raise DomainError("warp factor must be positive")
    r = model.fiber_scalar / f ** 2 - 4.0 * np.asarray(fpp) / f - 2.0 * (np.asarray(fp) / f) ** 2
    return float(r) if t.ndim == 0 else r


def functional(model: BandModel, s: float, params: PotentialParams) -> float:
    """Area-plus-weighted-volume functional of the level-s region.

    ``A(s) = A_V [phi(s)^2 + integral_0^s h phi^2 dt]``; the reference level
    s = 0 gives exactly the middle-slice area.
    """
    L = params.length
    if abs(s) >= L:
        raise DomainError(f"level must satisfy |s| < L = {L:g}")
    if abs(s) > model.half_width:
        raise DomainError("level outside the band")
    integral = 0.0
    if s != 0.0:
        integrand = lambda t: potential(t, params) * model.phi(t)[0] ** 2
        integral, _ = quad(integrand, 0.0, s, limit=200)
    return model.fiber_area * (model.phi(s)[0] ** 2 + integral)


@dataclass(frozen=True)
class MuBubbleSolution:
    """Critical level data produced by ``minimize``."""

    level: float
    area: float
    mean_curvature: float
    potential_at_level: float
    second_derivative: float
    total_curvature: float

    def to_dict(self) -> dict:
        return {"level": self.level, "area": self.area,
                "mean_curvature": self.mean_curvature,
                "potential_at_level": self.potential_at_level,
                "second_derivative": self.second_derivative,
                "total_curvature": self.total_curvature}


def _functional_derivative(model: BandModel, s: float, params: PotentialParams) -> float:
    f, fp, _ = model.phi(s)
    return model.fiber_area * (2.0 * f * fp + potential(s, params) * f * f)


def _functional_second(model: BandModel, s: float, params: PotentialParams) -> float:
    f, fp, fpp = model.phi(s)
    h = potential(s, params)
    hp = potential_derivative(s, params)
    return model.fiber_area * (2.0 * fp * fp + 2.0 * f * fpp + hp * f * f + 2.0 * h * f * fp)


def minimize(model: BandModel, params: PotentialParams,
             grid_points: int = 10_001) -> MuBubbleSolution:
    """Globally minimize the functional over the open level interval.

    Dense-grid localization (global verdict), golden-section refinement of the
    winning bracket to 1e-10, then a safeguarded derivative polish (the
    derivative of the functional is available in closed form).  Requires
    L <= T so the whole potential domain lies inside the band.
    """
    L = params.length
    if L > model.half_width * (1.0 + 1e-12):
        raise DomainError("potential length L must not exceed the band half-width")
    if grid_points < 101 or grid_points % 2 == 0:
        raise DomainError("grid_points must be an odd integer >= 101")

    delta = 1e-4 * L
    s_grid = np.linspace(-L + delta, L - delta, grid_points)
    f_grid, fp_grid, _ = model.phi(s_grid)
    f_grid = np.asarray(f_grid, dtype=float)
    h_grid = potential(s_grid, params)
    integrand = h_grid * f_grid ** 2
    # cumulative trapezoid, shifted so the antiderivative vanishes at s = 0
    steps = np.diff(s_grid)
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (integrand[1:] + integrand[:-1]) * steps)))
    mid = grid_points // 2  # s_grid[mid] == 0 for an odd symmetric grid
    values = model.fiber_area * (f_grid ** 2 + (cum - cum[mid]))
    i_best = int(np.argmin(values))

    if i_best in (0, grid_points - 1):
        raise BoundaryEscapeError(
            "functional minimizer sits at the open-interval boundary; "
            "the potential failed to confine the level")

    # golden-section on the bracket, with an exact local re-quadrature of the
    # integral term (fixed Gauss rule on the short interval)
    nodes, weights = np.polynomial.legendre.leggauss(32)
    s_center = s_grid[i_best]

    def local_value(s: float) -> float:
        half = 0.5 * (s - s_center)
        pts = s_center + half * (nodes + 1.0)
        f, _, _ = model.phi(pts)
        integral = half * float(np.sum(weights * potential(pts, params) * np.asarray(f) ** 2))
        return model.fiber_area * model.phi(s)[0] ** 2 + model.fiber_area * integral

    lo, hi = s_grid[i_best - 1], s_grid[i_best + 1]
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = local_value(x1), local_value(x2)
    while hi - lo > 1e-10:
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = local_value(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = local_value(x2)
    s_star = 0.5 * (lo + hi)

    # derivative polish (Newton, safeguarded inside the bracket)
    for _ in range(4):
        g = _functional_derivative(model, s_star, params)
        gp = _functional_second(model, s_star, params)
        if gp <= 0.0:
            break
        step = g / gp
        cand = s_star - step
        if not (s_grid[i_best - 1] <= cand <= s_grid[i_best + 1]):
            break
        s_star = cand
        if abs(step) < 1e-15 * (1.0 + abs(s_star)):
            break

    if min(s_star - s_grid[0], s_grid[-1] - s_star) < 1e-9 * L:
        raise BoundaryEscapeError("refined minimizer escaped to the interval boundary")

    f, fp, _ = model.phi(s_star)
    return MuBubbleSolution(
        level=float(s_star),
        area=float(f * f * model.fiber_area),
        mean_curvature=float(-2.0 * fp / f),
        potential_at_level=potential(s_star, params),
        second_derivative=_functional_second(model, s_star, params),
        total_curvature=model.total_fiber_curvature,
    )


def stability_report(model: BandModel, sol: MuBubbleSolution,
                     params: PotentialParams) -> float:
    """Stability margin of the critical level.

    ``margin = total_curvature - [(3/2) h(s*)^2 - 2 |h'(s*)|] * area``; when
    the band scalar curvature is nonnegative at the level, stability of the
    minimizer makes the margin nonnegative (up to solver tolerance).
    """
    h = sol.potential_at_level
    hp = potential_derivative(sol.level, params)
    return sol.total_curvature - (1.5 * h * h - 2.0 * abs(hp)) * sol.area


def band_width_bound(genus: int, area0: float, r0: float) -> float:
    """Displayed width bound ``pi sqrt(2 A0 / (24 pi (g-1) + 3 r0 A0))``.

    Requires the strict hypothesis ``r0 > -8 pi (genus - 1) / area0``
    (HypothesisError otherwise); the denominator is then positive, so the
    bound is always finite.  For genus 1 it reduces to the area-independent
    ``pi sqrt(2 / (3 r0))``.
    """
    if not isinstance(genus, (int, np.integer)) or genus < 1:
        raise DomainError("genus must be an integer >= 1")
    if area0 <= 0.0:
        raise DomainError("area0 must be positive")
    floor = -_EIGHT_PI * (genus - 1.0) / area0 + 0.0  # normalize -0.0
    if not r0 > floor:
        raise HypothesisError(
            f"need r0 > -8 pi (g-1)/A0 = {floor:.6g}, got r0 = {r0:.6g}")
    return math.pi * math.sqrt(2.0 * area0 / (24.0 * math.pi * (genus - 1.0) + 3.0 * r0 * area0))


@dataclass(frozen=True)
class AuditResult:
    """Outcome of one band-width audit."""

    status: str  # holds | violated | not_applicable
    genus: int
    r0: float
    area0: float
    bound: Optional[float]
    distance: float
    reason: str = ""

    def to_dict(self) -> dict:
        return {"status": self.status, "genus": self.genus, "r0": self.r0,
                "area0": self.area0, "bound": self.bound,
                "distance": self.distance, "reason": self.reason}


def _scalar_minimum(model: BandModel, lo: float, hi: float, grid_points: int) -> float:
    """Minimum of the band scalar curvature over [lo, hi], grid + refinement."""
    from scipy.optimize import minimize_scalar

    ts = np.linspace(lo, hi, grid_points)
    vals = np.asarray(band_scalar(model, ts))
    i = int(np.argmin(vals))
    r0 = float(vals[i])
    a = ts[max(i - 1, 0)]
    b = ts[min(i + 1, grid_points - 1)]
    if b > a:
        res = minimize_scalar(lambda t: band_scalar(model, float(t)),
                              bounds=(a, b), method="bounded",
                              options={"xatol": 1e-10})
        r0 = min(r0, float(res.fun))
    return r0


def band_width_audit(model: BandModel, one_sided: bool = False,
                     grid_points: int = 2001) -> AuditResult:
    """Check the displayed width bound against the band's actual half-width.

    ``r0`` is the minimum of the band scalar curvature (dense grid plus local
    refinement), ``area0`` the middle-slice area; the coordinate t is
    arclength, so the distance from the middle slice to either boundary is
    exactly T (checked numerically as a model lemma in the tests).  The strict
    hypothesis is enforced with a relative slack 1e-12, so an exact equality
    case reports ``not_applicable``.  With ``one_sided=True`` the audit covers
    the doubled variant: it requires the middle slice to have nonnegative mean
    curvature toward the surviving side (phi'(0) >= 0) and takes the minimum
    of the scalar curvature over [0, T] only.
    """
    genus = model.genus
    T = model.half_width
    area0 = model.area(0.0)
    if one_sided and model.phi(0.0)[1] < -1e-12:
        return AuditResult(status="not_applicable", genus=genus, r0=math.nan,
                           area0=area0, bound=None, distance=T,
                           reason="middle slice has negative mean curvature toward the kept side")
    lo = 0.0 if one_sided else -T
    r0 = _scalar_minimum(model, lo, T, grid_points)
    floor = -_EIGHT_PI * (genus - 1.0) / area0 + 0.0
    if not r0 > floor + 1e-12 * (1.0 + abs(floor)):
        return AuditResult(status="not_applicable", genus=genus, r0=r0, area0=area0,
                           bound=None, distance=T,
                           reason=f"hypothesis r0 > {floor:.6g} not strictly met")
    bound = band_width_bound(genus, area0, r0)
    ok = T <= bound + 1e-9 * (1.0 + bound)
    return AuditResult(status="holds" if ok else "violated", genus=genus, r0=r0,
                       area0=area0, bound=bound, distance=T)


@dataclass(frozen=True)
class HypothesisCheck:
    """Result of the area-growth hypothesis check."""

    status: str  # satisfied | not_satisfied | insufficient_data
    threshold: float
    tail_ratio: Optional[float]
    margin: Optional[float]

    def to_dict(self) -> dict:
        return {"status": self.status, "threshold": self.threshold,
                "tail_ratio": self.tail_ratio, "margin": self.margin}


AREA_GROWTH_THRESHOLD = 12.0 / math.pi


def theorem1_hypothesis(area_samples: Sequence[tuple], tail_window: int = 3) -> HypothesisCheck:
    """Check the strict area-growth condition ``liminf A(r)/r^2 < 12/pi``.

    ``area_samples`` is a sequence of (r, A(r)) pairs with strictly increasing
    positive r.  The liminf is estimated by the minimum of A/r^2 over the last
    ``tail_window`` samples; the comparison is strict with relative slack
    1e-12, so samples sitting exactly on the threshold are rejected.  Fewer
    than 3 samples yield ``insufficient_data``.
    """
    samples = [(float(r), float(a)) for r, a in area_samples]
    if len(samples) < 3:
        return HypothesisCheck(status="insufficient_data",
                               threshold=AREA_GROWTH_THRESHOLD,
                               tail_ratio=None, margin=None)
    rs = np.array([r for r, _ in samples])
    if np.any(rs <= 0.0) or np.any(np.diff(rs) <= 0.0):
        raise DomainError("radii must be strictly increasing and positive")
    ratios = np.array([a / (r * r) for r, a in samples])
    window = max(1, min(int(tail_window), len(samples)))
    tail = float(np.min(ratios[-window:]))
    thr = AREA_GROWTH_THRESHOLD
    satisfied = tail < thr * (1.0 - 1e-12)
    return HypothesisCheck(status="satisfied" if satisfied else "not_satisfied",
                           threshold=thr, tail_ratio=tail, margin=thr - tail)
