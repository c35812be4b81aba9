"""Closed form versus finite-difference oracle on catalog charts.

The agreement table produced here is the repository's primary evidence that
the closed-form scalar curvature is correct on real bundle geometries.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .bundle_metric import WarpProfile, case_profile, scalar_closed_form
from .catalog import CatalogEntry
from .chart_curvature import scalar_value


def agreement_rows(entry: CatalogEntry, profile: WarpProfile, points,
                   step: float = 1e-4) -> list:
    """Rows (t, closed, oracle, rel_err) for the given total-space points.

    The relative error is normalized by 1 + |oracle| so that near-zero
    curvatures do not blow up the comparison.
    """
    chart = entry.total_chart(profile)
    n = entry.total_dim
    base = entry.base
    rows = []
    for p in points:
        p = np.asarray(p, dtype=float)
        t = float(p[0])
        x = entry.base_part(p)
        closed = scalar_closed_form(profile, n, t, base.scalar_h(x), base.omega_norm(x))
        oracle = scalar_value(chart, p, step=step)
        rel = abs(closed - oracle) / (1.0 + abs(oracle))
        rows.append({"t": t, "point": p.tolist(), "closed": closed,
                     "oracle": oracle, "rel_err": rel})
    return rows


def closed_form_vs_oracle(entry: CatalogEntry, coeff: Optional[float] = None,
                          samples: int = 50, seed: int = 0,
                          step: float = 1e-4, t_range=(0.0, 20.0)) -> dict:
    """Random-sample agreement table for one entry's case profile.

    Draws ``samples`` points (t, fiber angle, base...) from the entry's box
    and compares the closed form against the raw oracle at each.
    """
    if coeff is None:
        coeff = entry.default_coeff()
    profile = case_profile(entry.total_dim, coeff)
    rng = np.random.default_rng(seed)
    points = entry.random_points(rng, samples, t_range=t_range)
    rows = agreement_rows(entry, profile, points, step=step)
    return {
        "entry": entry.name,
        "profile": profile.label,
        "coeff": float(coeff),
        "samples": int(samples),
        "seed": int(seed),
        "step": float(step),
        "max_rel_err": max(r["rel_err"] for r in rows),
        "rows": rows,
    }
