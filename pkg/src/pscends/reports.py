"""Run configuration, report construction, persistence, and CSV emission.

This is the only module with file I/O.  A report is a JSON document with a
mutable header (timestamp only) and a deterministic body: identical config and
seed produce byte-identical bodies.  Floats are serialized with Python's
shortest-repr JSON encoding and CSV columns use 17 significant digits, so
every value round-trips exactly.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .bundle_metric import (case_lower_bound, case_profile, certify, flat_base,
                            scalar_closed_form, threshold)
from .band import (BandModel, PotentialParams, band_width_audit, minimize,
                   stability_report, theorem1_hypothesis)
from .catalog import catalog_entries, get_entry
from .errors import DomainError
from .families import parse_warp_spec
from .oracle_compare import closed_form_vs_oracle
from .sweep import audit_sweep

SCHEMA_VERSION = 1
OUTDIR_ENV = "PSCENDS_OUTDIR"

REPORT_SCHEMA = {
    "type": "object",
    "required": ["header", "schema_version", "config", "results", "provenance"],
    "additionalProperties": False,
    "properties": {
        "header": {
            "type": "object",
            "required": ["created_utc"],
            "properties": {"created_utc": {"type": "string"}},
            "additionalProperties": False,
        },
        "schema_version": {"type": "integer", "minimum": 1},
        "config": {"type": "object"},
        "results": {"type": "object"},
        "provenance": {
            "type": "object",
            "required": ["tool", "version", "seed"],
            "additionalProperties": False,
            "properties": {
                "tool": {"type": "string"},
                "version": {"type": "string"},
                "seed": {"type": "integer"},
            },
        },
    },
}


@dataclass
class RunConfig:
    """Validated parameters for one CLI run.  Unknown keys are rejected."""

    command: str
    entry: Optional[str] = None
    n: Optional[int] = None
    coeff: Optional[float] = None
    omega_sup: Optional[float] = None
    t_max: float = 50.0
    grid_points: int = 2001
    samples: int = 50
    step: float = 1e-4
    genus: int = 2
    fiber_area: float = 1.0
    phi: str = "constant:1"
    half_width: float = 1.0
    band_length: Optional[float] = None
    eps2: float = 0.0
    one_sided: bool = False
    count: int = 100
    kind: str = "band"
    pairs: Optional[str] = None
    samples_csv: Optional[str] = None
    tail_window: int = 3
    seed: int = 0
    report_path: Optional[str] = None
    csv_path: Optional[str] = None
    force: bool = False

    VALID_COMMANDS = ("verify", "certify", "sweep", "band", "catalog", "hypothesis")

    def __post_init__(self):
        if self.command not in self.VALID_COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise DomainError("seed must fit in 64 bits")
        if self.samples < 1 or self.count < 1 or self.grid_points < 2:
            raise DomainError("samples, count and grid_points must be positive")
        if self.t_max <= 0.0 or self.step <= 0.0:
            raise DomainError("t_max and step must be positive")

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def load_config_file(path: str) -> dict:
    """Load a YAML key/value config file (comments welcome)."""
    import yaml

    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise DomainError(f"config file {path} must contain a mapping")
    return data


def build_report(config: RunConfig, results: dict) -> dict:
    return {
        "header": {"created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())},
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "results": results,
        "provenance": {"tool": "pscends", "version": __version__, "seed": int(config.seed)},
    }


def report_body(report: dict) -> dict:
    """Everything except the mutable header (the determinism contract)."""
    return {k: v for k, v in report.items() if k != "header"}


def validate_report(report: dict) -> None:
    import jsonschema

    jsonschema.validate(report, REPORT_SCHEMA)


def _resolve(path: str) -> Path:
    p = Path(path)
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not p.is_absolute():
        p = Path(outdir) / p
    return p


def write_report(report: dict, path: str, force: bool = False) -> Path:
    """Write a report JSON file; existing reports are never overwritten
    without ``force`` (reports are append-only artifacts)."""
    validate_report(report)
    p = _resolve(path)
    if p.exists() and not force:
        raise FileExistsError(f"report {p} exists; pass force=True / --force to replace it")
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return p


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isinf(value) or math.isnan(value):
            return repr(value)
        return format(value, ".17g")
    return str(value)


def emit_plot_data(report: dict, path: str, force: bool = False) -> Path:
    """Write the report's curve data as CSV (17 significant digits).

    Raises DomainError when the report carries no curves: an empty plot file
    is worse than an error.
    """
    curves = report.get("results", {}).get("curves") or {}
    if not curves:
        raise DomainError("report contains no curve data to emit")
    p = _resolve(path)
    if p.exists() and not force:
        raise FileExistsError(f"plot data {p} exists; pass force=True / --force to replace it")
    p.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for name in sorted(curves):
        curve = curves[name]
        cols = curve["columns"]
        lines.append(",".join(["curve"] + list(cols)))
        for row in curve["rows"]:
            lines.append(",".join([name] + [_fmt(v) for v in row]))
    with open(p, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return p


def _base_for(config: RunConfig, n: int):
    if config.entry:
        entry = get_entry(config.entry)
        if entry.total_dim != n:
            raise DomainError(f"entry {config.entry!r} has total dimension "
                              f"{entry.total_dim}, not {n}")
        return entry.base
    omega = config.omega_sup if config.omega_sup is not None else 0.0
    return flat_base(n - 2, omega_sup=omega)


def _run_verify(config: RunConfig) -> dict:
    names = sorted(catalog_entries()) if config.entry in (None, "all") else [config.entry]
    tables = {}
    worst = 0.0
    for name in names:
        entry = get_entry(name)
        coeff = config.coeff if config.coeff is not None else entry.default_coeff()
        table = closed_form_vs_oracle(entry, coeff=coeff, samples=config.samples,
                                      seed=config.seed, step=config.step)
        tables[name] = table
        worst = max(worst, table["max_rel_err"])
    tol = 1e-5
    return {"verdict": "agree" if worst <= tol else "disagree",
            "tolerance": tol, "max_rel_err": worst, "entries": tables}


def _run_certify(config: RunConfig) -> dict:
    if config.n is None or config.coeff is None:
        raise DomainError("certify needs --n and --coeff")
    base = _base_for(config, config.n)
    cert = certify(config.n, config.coeff, base, t_max=config.t_max,
                   grid_points=config.grid_points)
    ts = np.linspace(0.0, config.t_max, min(config.grid_points, 401))
    profile = case_profile(config.n, config.coeff)
    bound = case_lower_bound(config.n, config.coeff, base.omega_sup, ts)
    true_min = [min(scalar_closed_form(profile, config.n, float(t),
                                       base.scalar_h(x), base.omega_norm(x))
                    for x in base.sample_points) for t in ts]
    curves = {"lower_bound": {
        "columns": ["t", "lower_bound", "min_scalar"],
        "rows": [[float(t), float(b), float(m)] for t, b, m in zip(ts, bound, true_min)],
    }}
    return {"verdict": cert.verdict, "certificate": cert.to_dict(), "curves": curves}


def _run_sweep(config: RunConfig) -> dict:
    if config.kind == "band":
        summary = audit_sweep(config.count, config.seed, one_sided=config.one_sided)
        rows = summary.pop("rows")
        curves = {"audit": {
            "columns": ["index", "genus", "half_width", "fiber_area", "r0",
                        "area0", "bound", "status"],
            "rows": [[r["index"], r["genus"], r["half_width"], r["fiber_area"],
                      r["r0"], r["area0"],
                      r["bound"] if r["bound"] is not None else math.nan,
                      r["status"]] for r in rows],
        }}
        verdict = "holds" if summary["violations"] == 0 else "violated"
        return {"verdict": verdict, "summary": summary, "curves": curves}
    if config.kind == "threshold":
        if config.n is None:
            raise DomainError("threshold sweep needs --n")
        omega = config.omega_sup if config.omega_sup is not None else 1.0
        thr = threshold(config.n, omega)
        if math.isinf(thr):
            raise DomainError("flat bundle: no finite threshold to sweep")
        coeffs = np.linspace(1e-3 * thr, 2.0 * thr, config.count)
        rows = [[float(c), float(case_lower_bound(config.n, float(c), omega, 0.0))]
                for c in coeffs]
        curves = {"threshold": {"columns": ["coeff", "bound_at_0"], "rows": rows}}
        return {"verdict": "ok", "threshold": thr, "omega_sup": omega,
                "n": config.n, "curves": curves}
    raise DomainError(f"unknown sweep kind {config.kind!r}")


def _run_band(config: RunConfig) -> dict:
    phi = parse_warp_spec(config.phi)
    model = BandModel(half_width=config.half_width, phi=phi, genus=config.genus,
                      fiber_area=config.fiber_area,
                      label=getattr(phi, "label", config.phi))
    model.check_consistency()
    length = config.band_length if config.band_length is not None else config.half_width
    params = PotentialParams(length=length, eps2=config.eps2)
    sol = minimize(model, params)
    margin = stability_report(model, sol, params)
    audit = band_width_audit(model, one_sided=config.one_sided)
    verdict = "violated" if audit.status == "violated" else "holds"
    return {"verdict": verdict, "solution": sol.to_dict(),
            "stability_margin": margin, "audit": audit.to_dict(),
            "criticality_residual": abs(sol.mean_curvature - sol.potential_at_level)}


def _run_catalog(config: RunConfig) -> dict:
    rows = []
    for name, entry in sorted(catalog_entries().items()):
        rows.append({
            "name": name,
            "total_dim": entry.total_dim,
            "base": entry.base.name,
            "omega_sup": entry.base.omega_sup,
            "connection": entry.connection_desc,
            "reference_points": len(entry.reference_points),
        })
    return {"verdict": "ok", "entries": rows}


def _parse_pairs(text: str) -> list:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        r, _, a = chunk.partition(":")
        pairs.append((float(r), float(a)))
    return pairs


def _run_hypothesis(config: RunConfig) -> dict:
    if config.samples_csv:
        data = np.loadtxt(config.samples_csv, delimiter=",", ndmin=2)
        pairs = [(float(r), float(a)) for r, a in data[:, :2]]
    elif config.pairs:
        pairs = _parse_pairs(config.pairs)
    else:
        raise DomainError("hypothesis needs --pairs or --samples-csv")
    check = theorem1_hypothesis(pairs, tail_window=config.tail_window)
    return {"verdict": check.status, **check.to_dict()}


_RUNNERS = {
    "verify": _run_verify,
    "certify": _run_certify,
    "sweep": _run_sweep,
    "band": _run_band,
    "catalog": _run_catalog,
    "hypothesis": _run_hypothesis,
}


def run(config: RunConfig) -> dict:
    """Execute one configured run and return the report (deterministic body)."""
    results = _RUNNERS[config.command](config)
    report = build_report(config, results)
    validate_report(report)
    return report


def exit_code_for(report: dict) -> int:
    """0 = success/holds, 2 = negative verdict / violation (1 is usage errors)."""
    verdict = report.get("results", {}).get("verdict", "ok")
    if verdict == "insufficient_data":
        return 1
    good = {"ok", "agree", "positive", "holds", "satisfied"}
    return 0 if verdict in good else 2
