"""Command-line entry point.

Exit codes: 0 all checks hold, 1 a verified violation or failed
certificate, 2 usage or configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, bounds, catalog, critplane, exprimm, geometry, quadopt
from . import spaceform as sf
from .errors import (
    ArgumentError,
    DegenerateImmersionError,
    DomainError,
    NumericalFailure,
    ParseError,
    RankDeficiencyError,
    SubcurvError,
    UnsupportedOperation,
)
from .numerics import Tolerances
from .report import dumps, table

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

MANIFOLD_PARAMS = ("dim", "r", "r1", "r2", "r3", "c", "angle")
QUAD_KKT_TOL = 1e-10
QUAD_BRUTE_SLACK = 1e-9
CRIT_RESIDUAL_TOL = 1e-4
CRIT_SCAN_TOL = 1e-3


@dataclass
class RunConfig:
    command: str
    manifold: str | None = None
    expr_file: str | None = None
    ambient: str = "euclidean"
    params: dict = field(default_factory=dict)
    theorem: str = "all"
    samples: int = 100
    directions: int = 1
    seed: int = 0
    tol: Tolerances = field(default_factory=Tolerances)
    point: tuple | None = None
    family: str | None = None
    n: int | None = None
    k: float | None = None
    brute_samples: int = 100_000
    restarts: int = critplane.DEFAULT_RESTARTS
    grid: int = 12
    format: str = "table"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subcurv",
        description="Submanifold curvature and Ricci-inequality verification",
    )
    parser.add_argument("--version", action="version", version=f"subcurv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("table", "json"), default="table")

    def tolerances(p):
        p.add_argument("--tol", type=float, default=None, help="equality / eigenvalue-sign tolerance")
        p.add_argument("--verify-tol", type=float, default=None, help="slack for inequality checks")

    def manifold(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--manifold", help="catalog id (or 'all' for verify)")
        src.add_argument("--expr-file", help="immersion expression file")
        p.add_argument("--ambient", choices=("euclidean", "sphere", "complex"), default="euclidean",
                       help="ambient model for --expr-file")
        for name in MANIFOLD_PARAMS:
            p.add_argument(f"--{name}", type=float if name != "dim" else int, default=None)
        p.add_argument("--point", default=None, help="comma-separated parameter values")

    sub.add_parser("catalog", help="list built-in manifolds").add_argument(
        "--format", choices=("table", "json"), default="table"
    )

    v = sub.add_parser("verify", help="sweep Ricci bounds over sampled points")
    manifold(v)
    v.add_argument("--theorem", choices=("2.1", "3.1", "3.2", "all"), default="all")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--directions", type=int, default=1)
    tolerances(v)
    common(v)

    q = sub.add_parser("quadopt", help="maximize a quadratic family on sum(x) = k")
    q.add_argument("--family", choices=quadopt.FAMILIES, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--k", type=float, required=True)
    q.add_argument("--brute-samples", type=int, default=100_000)
    tolerances(q)
    common(q)

    c = sub.add_parser("critplane", help="minimize sectional curvature over 2-planes")
    manifold(c)
    c.add_argument("--restarts", type=int, default=critplane.DEFAULT_RESTARTS)
    c.add_argument("--grid", type=int, default=12)
    tolerances(c)
    common(c)
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command, format=getattr(args, "format", "table"))
    if args.command == "catalog":
        return cfg
    tol_kwargs = {}
    if args.tol is not None:
        tol_kwargs.update(eq_tol=args.tol, psd_tol=args.tol)
    if args.verify_tol is not None:
        tol_kwargs["verify_tol"] = args.verify_tol
    cfg.tol = Tolerances(**tol_kwargs)
    cfg.seed = args.seed
    if args.command == "quadopt":
        cfg.family, cfg.n, cfg.k, cfg.brute_samples = args.family, args.n, args.k, args.brute_samples
        return cfg
    cfg.manifold, cfg.expr_file, cfg.ambient = args.manifold, args.expr_file, args.ambient
    cfg.params = {k: getattr(args, k) for k in MANIFOLD_PARAMS if getattr(args, k) is not None}
    if args.point is not None:
        try:
            cfg.point = tuple(float(x) for x in args.point.split(","))
        except ValueError:
            raise ArgumentError(f"--point must be comma-separated reals, got {args.point!r}") from None
    if args.command == "verify":
        cfg.theorem, cfg.samples, cfg.directions = args.theorem, args.samples, args.directions
    else:
        cfg.restarts, cfg.grid = args.restarts, args.grid
    return cfg


def _meta(cfg: RunConfig, **extra) -> dict:
    meta = {
        "tool": "subcurv",
        "version": __version__,
        "command": cfg.command,
        "seed": cfg.seed,
        "tolerances": cfg.tol.as_dict(),
    }
    meta.update(extra)
    return meta


def _resolve_manifolds(cfg: RunConfig) -> list:
    """(id, parameters, immersion, ambient) for every manifold the run touches."""
    if cfg.expr_file:
        text = Path(cfg.expr_file).read_text(encoding="utf-8")
        spec = exprimm.parse_file(text)
        imm = spec.to_immersion(name=Path(cfg.expr_file).name)
        if cfg.ambient == "sphere":
            ambient = sf.sphere(imm.dim_ambient, cfg.params.get("c", 1.0))
        elif cfg.ambient == "complex":
            if imm.dim_ambient % 2:
                raise ArgumentError("complex ambient needs an even number of components")
            ambient = sf.complex_euclidean(imm.dim_ambient // 2, cfg.params.get("c", 0.0))
        else:
            ambient = sf.euclidean(imm.dim_ambient)
        params = {"expression": spec.text(), "n": spec.n, "box": [list(b) for b in spec.domain_box],
                  "ambient": ambient.describe()}
        return [(imm.name, params, imm, ambient)]
    ids = list(catalog.CATALOG) if cfg.manifold == "all" else [cfg.manifold]
    out = []
    for mid in ids:
        entry = catalog.get(mid)
        overrides = {} if cfg.manifold == "all" else {
            k: v for k, v in cfg.params.items() if k in entry.defaults
        }
        extra = set(cfg.params) - set(entry.defaults) if cfg.manifold != "all" else set()
        if extra:
            raise ArgumentError(f"manifold {mid!r} does not take {sorted(extra)}")
        params = entry.params(**overrides)
        if "dim" in params:
            params["dim"] = int(params["dim"])
        imm, ambient = entry.builder(**params)
        out.append((mid, dict(params, ambient=ambient.describe()), imm, ambient))
    return out


def _centre(imm) -> np.ndarray:
    return 0.5 * (np.asarray(imm.lower) + np.asarray(imm.upper)) + 0.1 * (
        np.asarray(imm.upper) - np.asarray(imm.lower)
    ) * np.linspace(0.1, 0.3, imm.dim_domain)


def run_verify(cfg: RunConfig):
    theorems = bounds.THEOREMS if cfg.theorem == "all" else (cfg.theorem,)
    results, rows, ok = [], [], True
    for mid, params, imm, ambient in _resolve_manifolds(cfg):
        if cfg.point is not None:
            rng = np.random.default_rng(cfg.seed)
            summary = bounds.SweepSummary(mid, 1, cfg.seed, cfg.directions)
            for X in rng.standard_normal((cfg.directions, imm.dim_domain)):
                summary.reports.append(bounds.verify_point(imm, ambient, cfg.point, X, cfg.tol, theorems))
        else:
            summary = bounds.sweep(imm, ambient, cfg.samples, cfg.seed, cfg.directions, cfg.tol, mid, theorems)
        ok = ok and summary.ok
        d = summary.as_dict(include_reports=False)
        d["parameters"] = params
        d["equality_case"] = {t: abs(g) <= cfg.tol.verify_tol for t, g in summary.worst_gap.items()}
        d["ric_range"] = _range([r.ric for r in summary.reports])
        d["H_norm_sq_range"] = _range([r.h_norm_sq for r in summary.reports])
        d["bound_range"] = {
            t: _range([r.bounds[t] for r in summary.reports if t in r.bounds]) for t in summary.theorems
        }
        results.append(d)
        for t in summary.theorems or ["-"]:
            gap = summary.worst_gap.get(t)
            rows.append({
                "manifold": mid,
                "theorem": t,
                "points": len(summary.reports),
                "ric_max": d["ric_range"][1] if d["ric_range"] else None,
                "bound_min": d["bound_range"].get(t, [None])[0] if t in d["bound_range"] else None,
                "worst_gap": gap,
                "holds": None if gap is None else gap >= -cfg.tol.verify_tol,
                "note": "equality case" if gap is not None and abs(gap) <= cfg.tol.verify_tol else
                        ("no applicable theorem" if gap is None else ""),
                "skipped": len(summary.skipped),
            })
    report = {
        "meta": _meta(cfg, theorem=cfg.theorem, samples=cfg.samples, directions=cfg.directions,
                      point=list(cfg.point) if cfg.point else None, manifold=cfg.manifold or cfg.expr_file),
        "results": results,
        "summary": {"all_hold": ok, "violations": sum(len(r["violations"]) for r in results)},
    }
    cols = ["manifold", "theorem", "points", "ric_max", "bound_min", "worst_gap", "holds", "note", "skipped"]
    return report, table(rows, cols), EXIT_OK if ok else EXIT_VIOLATION


def _range(values):
    return [min(values), max(values)] if values else None


def run_quadopt(cfg: RunConfig):
    fam = quadopt.QuadraticFamily(cfg.family, cfg.n)
    kkt = quadopt.kkt_solve(fam, cfg.k)
    closed = quadopt.closed_form_max(fam, cfg.k)
    cert = quadopt.certify_constrained_max(fam, cfg.k, kkt.point, cfg.tol)
    brute = quadopt.brute_force_max(fam, cfg.k, cfg.brute_samples, cfg.seed)
    kkt_ok = abs(kkt.objective_value - closed) <= QUAD_KKT_TOL * max(1.0, cfg.k * cfg.k)
    brute_ok = brute["empirical_max"] <= closed + QUAD_BRUTE_SLACK
    ok = kkt_ok and brute_ok and cert.is_global_max
    result = {
        "family": fam.family,
        "n": fam.n,
        "k": cfg.k,
        "kkt": kkt.as_dict(),
        "closed_form_max": closed,
        "certificate": cert.as_dict(),
        "brute_force": {"empirical_max": brute["empirical_max"], "arg": brute["arg"], "samples": brute["samples"]},
    }
    report = {
        "meta": _meta(cfg, family=fam.family, n=fam.n, k=cfg.k, brute_samples=cfg.brute_samples, workers=1),
        "results": [result],
        "summary": {"all_hold": ok, "kkt_matches_closed_form": kkt_ok, "brute_force_below_closed_form": brute_ok,
                    "is_global_max": cert.is_global_max},
    }
    row = {
        "family": fam.family, "n": fam.n, "k": cfg.k, "kkt_value": kkt.objective_value,
        "closed_form": closed, "brute_max": brute["empirical_max"],
        "certificate": cert.restricted_hessian_spectrum.definiteness, "global_max": cert.is_global_max,
    }
    return report, table([row], list(row)), EXIT_OK if ok else EXIT_VIOLATION


def run_critplane(cfg: RunConfig):
    if cfg.manifold == "all":
        raise ArgumentError("critplane works on one manifold; 'all' is only valid for verify")
    (mid, params, imm, ambient), *_ = _resolve_manifolds(cfg)
    point = np.asarray(cfg.point) if cfg.point is not None else _centre(imm)
    _, _, curv = geometry.curvature_at(imm, ambient, point, None, cfg.tol)
    plane = critplane.minimize_sectional(curv, cfg.restarts, cfg.seed, cfg.tol)
    residual = critplane.critical_residual(curv, plane, cfg.tol)
    scan = critplane.plane_scan(curv, cfg.grid) if curv.n <= 4 else None
    ok = residual < CRIT_RESIDUAL_TOL and (scan is None or abs(plane.K - scan["min_K"]) < CRIT_SCAN_TOL)
    result = {
        "manifold": mid,
        "parameters": params,
        "point": point,
        "plane": plane.as_dict(),
        "critical_residual": residual,
        "scan_min_K": None if scan is None else scan["min_K"],
    }
    report = {
        "meta": _meta(cfg, manifold=mid, restarts=cfg.restarts, grid=cfg.grid),
        "results": [result],
        "summary": {"all_hold": ok},
    }
    row = {"manifold": mid, "K_min": plane.K, "scan_min": result["scan_min_K"], "residual": residual,
           "converged": plane.converged, "critical": residual < CRIT_RESIDUAL_TOL}
    return report, table([row], list(row)), EXIT_OK if ok else EXIT_VIOLATION


def run_catalog(cfg: RunConfig):
    entries = catalog.listing()
    report = {"meta": {"tool": "subcurv", "version": __version__, "command": "catalog"},
              "results": entries, "summary": {"count": len(entries)}}
    rows = [{"id": e["id"], "ambient": e["ambient"], "lagrangian": e["lagrangian"],
             "totally_real": e["totally_real"], "description": e["description"]} for e in entries]
    return report, table(rows, list(rows[0])), EXIT_OK


COMMANDS = {"verify": run_verify, "quadopt": run_quadopt, "critplane": run_critplane, "catalog": run_catalog}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        report, text, code = COMMANDS[cfg.command](cfg)
    except (ArgumentError, ParseError, UnsupportedOperation, FileNotFoundError) as exc:
        print(f"subcurv: error: {exc}", file=err)
        return EXIT_USAGE
    except (NumericalFailure, DomainError, DegenerateImmersionError, RankDeficiencyError) as exc:
        print(f"subcurv: numerical failure: {exc}", file=err)
        return EXIT_NUMERICAL
    except SubcurvError as exc:
        print(f"subcurv: error: {exc}", file=err)
        return EXIT_USAGE
    out.write(dumps(report) if cfg.format == "json" else text)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except SubcurvError as exc:
        print(f"subcurv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
