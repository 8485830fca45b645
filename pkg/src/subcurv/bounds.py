"""Ricci-curvature upper bounds and their numerical verification.

Three bounds on Ric(X) for a unit tangent vector X of an n-dimensional
submanifold, with c the ambient curvature and |H|^2 the squared mean
curvature:

    "2.1"  real space form:            (n - 1) c     + n^2/4 |H|^2
    "3.1"  totally real, complex form: (n - 1) c / 4 + n^2/4 |H|^2
    "3.2"  Lagrangian, complex form:   (n - 1)/4 (c + n |H|^2)

Each is evaluated only when its hypotheses hold at the point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import spaceform as sf
from .errors import (
    ArgumentError,
    DegenerateImmersionError,
    DomainError,
    FrameConventionError,
    RankDeficiencyError,
)
from .geometry import (
    AdaptedFrame,
    Immersion,
    ShapeData,
    adapted_frame,
    gauss_curvature,
    ricci_direction,
    second_fundamental_form,
)
from .numerics import DEFAULT_TOL, Tolerances

THEOREMS = ("2.1", "3.1", "3.2")

# Added to every computed Ric(X). Tests use it to fake a violation.
_ric_perturbation = 0.0


def bound_value(theorem: str, n: int, c: float, h_norm_sq: float) -> float:
    if theorem not in THEOREMS:
        raise ArgumentError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")
    if n < 2:
        raise ArgumentError(f"bounds need n >= 2, got {n}")
    if h_norm_sq < 0:
        raise ArgumentError("|H|^2 must be non-negative")
    if theorem == "2.1":
        return (n - 1) * c + n * n / 4.0 * h_norm_sq
    if theorem == "3.1":
        return (n - 1) * c / 4.0 + n * n / 4.0 * h_norm_sq
    return (n - 1) / 4.0 * (c + n * h_norm_sq)


@dataclass(frozen=True)
class BoundReport:
    point: tuple
    direction: tuple
    ric: float
    h_norm_sq: float
    n: int
    c: float
    bounds: dict
    verify_tol: float
    totally_real: bool | None = None
    lagrangian: bool | None = None

    @property
    def gaps(self) -> dict:
        return {t: b - self.ric for t, b in self.bounds.items()}

    @property
    def holds(self) -> dict:
        return {t: g >= -self.verify_tol for t, g in self.gaps.items()}

    @property
    def equality(self) -> dict:
        return {t: abs(g) <= self.verify_tol for t, g in self.gaps.items()}

    @property
    def all_hold(self) -> bool:
        return all(self.holds.values())

    def bound(self, theorem: str):
        return self.bounds.get(theorem)

    @property
    def bound_thm21(self):
        return self.bounds.get("2.1")

    @property
    def bound_thm31(self):
        return self.bounds.get("3.1")

    @property
    def bound_thm32(self):
        return self.bounds.get("3.2")

    def as_dict(self) -> dict:
        return {
            "point": list(self.point),
            "direction": list(self.direction),
            "n": self.n,
            "c": self.c,
            "ric": self.ric,
            "H_norm_sq": self.h_norm_sq,
            "totally_real": self.totally_real,
            "lagrangian": self.lagrangian,
            "bounds": dict(self.bounds),
            "gaps": self.gaps,
            "holds": self.holds,
            "equality": self.equality,
        }


def _frame_and_shape(imm, ambient, point, X, tol):
    """Frame, shape data and the complex predicates (None on real ambients)."""
    frame = adapted_frame(imm, ambient, point, X, tol)
    check = None
    if ambient.is_complex:
        check = sf.lagrangian_check(imm, ambient, frame, tol)
        if check["totally_real"]:
            frame = adapted_frame(imm, ambient, point, X, tol, normals="complex")
    shape = second_fundamental_form(imm, ambient, frame, tol)
    return frame, shape, check


def verify_point(
    imm: Immersion,
    ambient: sf.AmbientSpaceForm,
    point,
    X,
    tol: Tolerances = DEFAULT_TOL,
    theorems=THEOREMS,
) -> BoundReport:
    """Compute Ric(X) and every applicable bound at one (point, direction)."""
    frame, shape, check = _frame_and_shape(imm, ambient, point, X, tol)
    curv = gauss_curvature(ambient, frame, shape)
    ric = ricci_direction(curv) + _ric_perturbation
    n = frame.n
    bounds = {}
    if n >= 2:
        if ambient.is_real_space_form and "2.1" in theorems:
            bounds["2.1"] = bound_value("2.1", n, ambient.c, shape.H_norm_sq)
        if check is not None and check["totally_real"] and "3.1" in theorems:
            bounds["3.1"] = bound_value("3.1", n, ambient.c, shape.H_norm_sq)
        if check is not None and check["lagrangian"] and "3.2" in theorems:
            bounds["3.2"] = bound_value("3.2", n, ambient.c, shape.H_norm_sq)
    direction = frame.coords[:, 0]
    return BoundReport(
        point=tuple(float(v) for v in frame.point),
        direction=tuple(float(v) for v in direction),
        ric=float(ric),
        h_norm_sq=float(shape.H_norm_sq),
        n=n,
        c=float(ambient.c),
        bounds=bounds,
        verify_tol=tol.verify_tol,
        totally_real=None if check is None else check["totally_real"],
        lagrangian=None if check is None else check["lagrangian"],
    )


def lagrangian_identities(
    imm: Immersion,
    ambient: sf.AmbientSpaceForm,
    frame: AdaptedFrame,
    shape: ShapeData,
    tol: Tolerances = DEFAULT_TOL,
) -> dict:
    """Residuals of h^i_jk = h^j_ik and A_{Je_j} e_i = -J h(e_i, e_j).

    ``frame`` must use the normal frame {J e_1, ..., J e_n}, so that
    ``shape.h[i, j, k]`` is the component of h(e_j, e_k) along J e_i.
    """
    if not ambient.is_complex:
        raise FrameConventionError("Lagrangian identities need a complex ambient")
    n = frame.n
    jt = sf.apply_J(ambient, frame.tangent)
    if frame.normal.shape[0] != n or np.max(np.abs(frame.normal - jt)) > max(tol.eq_tol, 1e-9):
        raise FrameConventionError("normal frame is not {J e_1, ..., J e_n}")
    h = shape.h
    full_symmetry = float(np.max(np.abs(h - h.transpose(1, 0, 2))))
    worst = 0.0
    for i in range(n):
        for j in range(n):
            shape_op = h[j, i, :] @ frame.tangent  # A_{J e_j} e_i
            h_vec = h[:, i, j] @ frame.normal  # h(e_i, e_j)
            residual = shape_op + sf.apply_J(ambient, h_vec)
            worst = max(worst, float(np.linalg.norm(residual)))
    return {"full_symmetry_residual": full_symmetry, "shape_operator_residual": worst}


def lagrangian_identities_at(imm, ambient, point, tol: Tolerances = DEFAULT_TOL, X=None) -> dict:
    frame = adapted_frame(imm, ambient, point, X, tol, normals="complex")
    shape = second_fundamental_form(imm, ambient, frame, tol)
    return lagrangian_identities(imm, ambient, frame, shape, tol)


@dataclass
class SweepSummary:
    manifold: str
    samples: int
    seed: int
    directions_per_point: int
    reports: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    lagrangian_residuals: dict | None = None

    @property
    def theorems(self) -> list:
        seen = []
        for r in self.reports:
            for t in r.bounds:
                if t not in seen:
                    seen.append(t)
        return sorted(seen)

    @property
    def worst_gap(self) -> dict:
        out = {}
        for r in self.reports:
            for t, g in r.gaps.items():
                out[t] = min(out.get(t, np.inf), g)
        return {t: out[t] for t in sorted(out)}

    @property
    def violations(self) -> list:
        return [r for r in self.reports if not r.all_hold]

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self, include_reports: bool = True) -> dict:
        d = {
            "manifold": self.manifold,
            "samples": self.samples,
            "seed": self.seed,
            "directions_per_point": self.directions_per_point,
            "evaluated": len(self.reports),
            "theorems": self.theorems,
            "worst_gap": self.worst_gap,
            "violations": [r.as_dict() for r in self.violations],
            "skipped": list(self.skipped),
            "lagrangian_residuals": self.lagrangian_residuals,
        }
        if include_reports:
            d["reports"] = [r.as_dict() for r in self.reports]
        return d


SKIPPABLE = (DomainError, DegenerateImmersionError, RankDeficiencyError)


def sweep(
    imm: Immersion,
    ambient: sf.AmbientSpaceForm,
    samples: int,
    seed: int,
    directions_per_point: int = 1,
    tol: Tolerances = DEFAULT_TOL,
    manifold: str = "",
    theorems=THEOREMS,
) -> SweepSummary:
    """Verify the bounds at seeded random interior points and directions.

    Per-point geometric failures are collected in ``skipped`` instead of
    aborting the sweep.
    """
    if samples < 1 or directions_per_point < 1:
        raise ArgumentError("samples and directions_per_point must be >= 1")
    rng = np.random.default_rng(seed)
    points = imm.sample_points(rng, samples)
    directions = rng.standard_normal((samples, directions_per_point, imm.dim_domain))
    summary = SweepSummary(manifold or imm.name, samples, int(seed), directions_per_point)
    residuals = None
    for u, dirs in zip(points, directions):
        try:
            for X in dirs:
                summary.reports.append(verify_point(imm, ambient, u, X, tol, theorems))
            if summary.reports and summary.reports[-1].lagrangian:
                res = lagrangian_identities_at(imm, ambient, u, tol)
                residuals = res if residuals is None else {k: max(residuals[k], v) for k, v in res.items()}
        except SKIPPABLE as exc:
            summary.skipped.append({"point": [float(v) for v in u], "error": str(exc)})
    summary.lagrangian_residuals = residuals
    return summary
