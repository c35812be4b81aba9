"""Named warp-factor families with closed-form derivatives.

Each family is an evaluator ``t -> (f, f', f'')`` accepting scalars or numpy
arrays.  These feed both the bundle profiles (functions of t >= 0) and the
band models (functions on [-T, T]); the sampled-data variant goes through a
cubic spline whose own derivatives are exact, so the downstream derivative
self-checks hold by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

FAMILY_KINDS = ("constant", "exp", "cosh", "power", "cospow")


@dataclass(frozen=True)
class WarpFamily:
    """Closed-form warp factor ``amp * shape(rate * t)``.

    kinds: constant | exp | cosh | power (amp*(1+t)^rate) | cospow
    (amp*cos(rate*t)^(2/3); constant positive curvature bands).
    """

    kind: str
    amp: float = 1.0
    rate: float = 0.0

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise DomainError(f"unknown warp family {self.kind!r}; choose from {FAMILY_KINDS}")
        if self.amp <= 0.0:
            raise DomainError("warp amplitude must be positive")

    @property
    def label(self) -> str:
        return f"{self.kind}:{self.amp:g},{self.rate:g}"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        a, r = self.amp, self.rate
        if self.kind == "constant":
            f = np.full_like(t, a)
            z = np.zeros_like(t)
            out = (f, z, z.copy())
        elif self.kind == "exp":
            f = a * np.exp(r * t)
            out = (f, r * f, r * r * f)
        elif self.kind == "cosh":
            f = a * np.cosh(r * t)
            out = (f, a * r * np.sinh(r * t), r * r * f)
        elif self.kind == "power":
            u = 1.0 + t
            if np.any(u <= 0.0):
                raise DomainError("power family needs t > -1")
            f = a * u ** r
            out = (f, a * r * u ** (r - 1.0), a * r * (r - 1.0) * u ** (r - 2.0))
        else:  # cospow
            c = np.cos(r * t)
            if np.any(c <= 0.0):
                raise DomainError("cospow family needs |rate*t| < pi/2")
            s = np.sin(r * t)
            f = a * c ** (2.0 / 3.0)
            fp = -(2.0 / 3.0) * a * r * s * c ** (-1.0 / 3.0)
            fpp = -(2.0 / 3.0) * a * r * r * (c ** (2.0 / 3.0) + (s * s / 3.0) * c ** (-4.0 / 3.0))
            out = (f, fp, fpp)
        if t.ndim == 0:
            return tuple(float(v) for v in out)
        return out


class SplineWarp:
    """Warp factor interpolated from samples by a natural cubic spline."""

    def __init__(self, ts, values, label: str = "samples"):
        from scipy.interpolate import CubicSpline

        ts = np.asarray(ts, dtype=float)
        values = np.asarray(values, dtype=float)
        if ts.ndim != 1 or ts.size < 4:
            raise DomainError("need at least 4 samples for a spline warp factor")
        if np.any(np.diff(ts) <= 0.0):
            raise DomainError("sample abscissae must be strictly increasing")
        if np.any(values <= 0.0):
            raise DomainError("warp samples must be positive")
        self._spline = CubicSpline(ts, values)
        self.label = label
        self.t_min = float(ts[0])
        self.t_max = float(ts[-1])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.t_min) or np.any(t > self.t_max):
            raise DomainError(f"spline warp sampled outside [{self.t_min}, {self.t_max}]")
        f = self._spline(t)
        fp = self._spline(t, 1)
        fpp = self._spline(t, 2)
        if t.ndim == 0:
            return float(f), float(fp), float(fpp)
        return f, fp, fpp


def parse_warp_spec(spec: str):
    """Parse ``kind:amp[,rate]`` or ``samples:path.csv`` into an evaluator."""
    if ":" not in spec:
        raise DomainError(f"warp spec {spec!r} must look like 'kind:amp[,rate]'")
    kind, _, rest = spec.partition(":")
    kind = kind.strip()
    if kind == "samples":
        data = np.loadtxt(rest.strip(), delimiter=",", ndmin=2)
        if data.shape[1] < 2:
            raise DomainError("sample file needs two columns: t, value")
        return SplineWarp(data[:, 0], data[:, 1], label=f"samples:{rest.strip()}")
    parts = [s.strip() for s in rest.split(",") if s.strip()]
    try:
        amp = float(parts[0])
        rate = float(parts[1]) if len(parts) > 1 else 0.0
    except (IndexError, ValueError) as exc:
        raise DomainError(f"could not parse warp spec {spec!r}") from exc
    return WarpFamily(kind=kind, amp=amp, rate=rate)


def check_derivatives(evaluator, grid, rtol: float = 1e-6) -> float:
    """Verify supplied first/second derivatives against central differences.

    Returns the worst relative mismatch (normalized by 1 + |derivative|);
    raises DomainError when it exceeds ``rtol``.  This is the self-consistency
    gate for user-supplied evaluators.
    """
    worst = 0.0
    for t in np.asarray(grid, dtype=float):
        h = 3e-5 * (1.0 + abs(t))
        _, d1, d2 = evaluator(t)
        f_p = evaluator(t + h)[0]
        f_m = evaluator(t - h)[0]
        f_0 = evaluator(t)[0]
        fd1 = (f_p - f_m) / (2.0 * h)
        fd2 = (f_p - 2.0 * f_0 + f_m) / (h * h)
        err1 = abs(fd1 - d1) / (1.0 + abs(d1))
        err2 = abs(fd2 - d2) / (1.0 + abs(d2))
        worst = max(worst, err1, err2)
    if worst > rtol:
        raise DomainError(f"supplied derivatives disagree with finite differences "
                          f"(worst relative mismatch {worst:.3e} > {rtol:g})")
    return worst
