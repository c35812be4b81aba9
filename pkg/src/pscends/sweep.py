"""Randomized falsification sweeps over band models.

Model distribution (documented here and echoed into reports for
reproducibility): genus uniform on {1, 2}; warp family uniform over
{constant, exp, cosh, power, cospow} with log-uniform amplitude in [0.5, 2]
and rate/frequency uniform in [0.1, 2] (clipped per family so the warp stays
positive on the band); fiber area log-uniform in [0.5, 8]; half-width uniform
in [0.3, 1.2] (capped for the power and cospow families by their domains).
All draws come from a single seeded generator, so a sweep is a pure function
of (count, seed, flags).
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .band import BandModel, MuBubbleSolution, PotentialParams, band_width_audit, minimize
from .families import FAMILY_KINDS, WarpFamily


def random_band_model(rng: np.random.Generator, genus: Optional[int] = None) -> BandModel:
    """Draw one band model from the documented distribution."""
    g = int(genus) if genus is not None else int(rng.choice((1, 2)))
    kind = str(rng.choice(FAMILY_KINDS))
    amp = float(np.exp(rng.uniform(math.log(0.5), math.log(2.0))))
    rate = float(rng.uniform(0.1, 2.0))
    t_hi = 1.2
    if kind == "power":
        t_hi = 0.95  # (1+t)^p needs t > -1
    elif kind == "cospow":
        t_hi = min(1.2, 1.45 / rate)  # keep |rate*t| < pi/2 with margin
    half_width = float(rng.uniform(0.3, min(1.2, t_hi)))
    area = float(np.exp(rng.uniform(math.log(0.5), math.log(8.0))))
    family = WarpFamily(kind=kind, amp=amp, rate=rate)
    return BandModel(half_width=half_width, phi=family, genus=g,
                     fiber_area=area, label=family.label)


def audit_sweep(count: int, seed: int, one_sided: bool = False,
                grid_points: int = 2001) -> dict:
    """Audit ``count`` random band models against the width bound.

    Returns a summary dict with one row per model; ``violations`` must stay
    at zero (this is the falsification sweep for the width inequality).
    """
    rng = np.random.default_rng(seed)
    rows = []
    applicable = violations = 0
    for index in range(count):
        model = random_band_model(rng)
        result = band_width_audit(model, one_sided=one_sided, grid_points=grid_points)
        if result.status != "not_applicable":
            applicable += 1
        if result.status == "violated":
            violations += 1
        rows.append({"index": index, "label": model.label, "genus": model.genus,
                     "half_width": model.half_width, "fiber_area": model.fiber_area,
                     **result.to_dict()})
    return {"kind": "band-audit", "count": count, "seed": seed, "one_sided": one_sided,
            "applicable": applicable, "violations": violations, "rows": rows,
            "distribution": random_band_model.__doc__ or "",
            "sweep_doc": __doc__ or ""}


def random_solver_model(rng: np.random.Generator, genus: Optional[int] = None
                        ) -> tuple[BandModel, PotentialParams]:
    """Draw a band model plus potential parameters for the level solver.

    Restricted to the smooth families with moderate rates so the critical
    level stays well inside the potential domain.
    """
    g = int(genus) if genus is not None else int(rng.choice((1, 2)))
    kind = str(rng.choice(("constant", "exp", "cosh", "cospow")))
    amp = float(np.exp(rng.uniform(math.log(0.5), math.log(2.0))))
    rate = float(rng.uniform(0.1, 1.5))
    t_hi = 1.2 if kind != "cospow" else min(1.2, 1.45 / rate)
    half_width = float(rng.uniform(0.4, min(1.2, t_hi)))
    area = float(np.exp(rng.uniform(math.log(0.5), math.log(8.0))))
    family = WarpFamily(kind=kind, amp=amp, rate=rate)
    model = BandModel(half_width=half_width, phi=family, genus=g,
                      fiber_area=area, label=family.label)
    length = float(rng.uniform(0.6, 1.0)) * half_width
    eps2 = float(rng.choice((0.0, 0.05, 0.2)))
    return model, PotentialParams(length=length, eps2=eps2)


def solve_random_models(count: int, seed: int, genus: Optional[int] = None
                        ) -> list[tuple[BandModel, PotentialParams, MuBubbleSolution]]:
    """Run the level solver on ``count`` random models (seeded)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        model, params = random_solver_model(rng, genus=genus)
        out.append((model, params, minimize(model, params)))
    return out
