"""Immersions, adapted frames, second fundamental form and curvature.

Sign conventions
----------------
* ``h(X, Y) = (D_X Y)^perp``: the unit sphere with outward normal has
  h = -g.
* ``R(X, Y, Z, W) = <R(X, Y) W, Z>`` so that ``K(e_i, e_j) = R[i, j, i, j]``.
  The Gauss equation then reads
  ``R_ijkl = R~_ijkl + sum_r (h^r_ik h^r_jl - h^r_il h^r_jk)``.

Curvature tensors are numpy arrays indexed ``[i, j, k, l]``; shape data
``h`` is indexed ``[r, i, j]`` with r running over the normal frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import spaceform as sf
from .errors import (
    ArgumentError,
    BoundaryError,
    DegenerateImmersionError,
    FrameConventionError,
    RankDeficiencyError,
)
from .numerics import (
    DEFAULT_TOL,
    Tolerances,
    evaluate_at,
    extend_orthonormal,
    fd_derivatives,
    fd_jacobian,
    fd_second_from_jacobian,
    orthonormalize,
)

MAX_AMBIENT_DIM = 16


@dataclass(frozen=True)
class Immersion:
    """A parametrized submanifold u -> phi(u) in R^m over a box domain.

    ``lower``/``upper`` bound the parameter box. ``jacobian`` is optional;
    when present it is used for first derivatives and differenced once for
    second derivatives, which is more accurate than differencing ``phi``
    twice.
    """

    dim_domain: int
    dim_ambient: int
    evaluator: Callable = field(repr=False)
    lower: tuple
    upper: tuple
    jacobian: Callable | None = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        n, m = self.dim_domain, self.dim_ambient
        if n < 1 or m <= n:
            raise ArgumentError(f"need 1 <= n < m, got n={n}, m={m}")
        if m > MAX_AMBIENT_DIM:
            raise ArgumentError(f"ambient dimension {m} exceeds {MAX_AMBIENT_DIM}")
        if len(self.lower) != n or len(self.upper) != n:
            raise ArgumentError("domain box must have one interval per parameter")
        if any(lo >= hi for lo, hi in zip(self.lower, self.upper)):
            raise ArgumentError("domain box intervals must satisfy lo < hi")

    def __call__(self, u) -> np.ndarray:
        return evaluate_at(self.evaluator, u)

    def check_interior(self, u, margin: float) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.dim_domain,):
            raise ArgumentError(f"expected {self.dim_domain} parameters, got shape {u.shape}")
        reach = margin * np.maximum(1.0, np.abs(u))
        lo, hi = np.asarray(self.lower), np.asarray(self.upper)
        if np.any(u - reach < lo) or np.any(u + reach > hi):
            raise BoundaryError(
                f"point {u.tolist()} is within {margin:g} of the domain boundary", u
            )
        return u

    def derivatives(self, u, tol: Tolerances = DEFAULT_TOL):
        """Jacobian (m, n) and second-derivative tensor (m, n, n) at ``u``."""
        u = self.check_interior(u, 4 * max(tol.fd_step, tol.fd_step2))
        if self.jacobian is not None:
            jac = evaluate_at(self.jacobian, u)
            second = fd_second_from_jacobian(self.jacobian, u, tol.fd_step)
            return jac, second
        return fd_derivatives(self.evaluator, u, tol)

    def jacobian_at(self, u, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
        u = self.check_interior(u, 4 * tol.fd_step)
        if self.jacobian is not None:
            return evaluate_at(self.jacobian, u)
        return fd_jacobian(self.evaluator, u, tol.fd_step)

    def sample_points(self, rng: np.random.Generator, count: int, margin: float = 0.05) -> np.ndarray:
        """Uniform points in the box shrunk by ``margin`` of each side length."""
        lo, hi = np.asarray(self.lower, dtype=float), np.asarray(self.upper, dtype=float)
        pad = margin * (hi - lo)
        return rng.uniform(lo + pad, hi - pad, size=(count, self.dim_domain))


@dataclass(frozen=True)
class AdaptedFrame:
    """Orthonormal tangent and normal frames at one point.

    ``coords[:, i]`` expresses e_i in parameter coordinates, i.e.
    ``tangent[i] = jacobian @ coords[:, i]``.
    """

    point: np.ndarray
    ambient_point: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    coords: np.ndarray
    jacobian: np.ndarray = field(repr=False)
    second: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.tangent.shape[0]

    def orthonormality_error(self) -> float:
        full = np.vstack([self.tangent, self.normal])
        return float(np.max(np.abs(full @ full.T - np.eye(full.shape[0]))))


@dataclass(frozen=True)
class ShapeData:
    h: np.ndarray
    H: np.ndarray
    H_norm_sq: float

    @property
    def codim(self) -> int:
        return self.h.shape[0]


@dataclass(frozen=True)
class CurvatureData:
    """Curvature components in an orthonormal frame (or a coordinate basis)."""

    R: np.ndarray
    basis: str = "frame"

    @property
    def n(self) -> int:
        return self.R.shape[0]

    def symmetry_residuals(self) -> dict:
        R = self.R
        return {
            "antisym_ij": float(np.max(np.abs(R + R.transpose(1, 0, 2, 3)))),
            "antisym_kl": float(np.max(np.abs(R + R.transpose(0, 1, 3, 2)))),
            "pair": float(np.max(np.abs(R - R.transpose(2, 3, 0, 1)))),
            "bianchi": float(
                np.max(np.abs(R + R.transpose(0, 2, 3, 1) + R.transpose(0, 3, 1, 2)))
            ),
        }


def _check_rank(jac: np.ndarray, u, tol: Tolerances):
    s = np.linalg.svd(jac, compute_uv=False)
    if s[-1] < tol.eq_tol * max(1.0, s[0]):
        raise DegenerateImmersionError(
            f"Jacobian is rank deficient at {np.asarray(u).tolist()} (smallest singular value {s[-1]:.3g})"
        )


def pullback_metric(imm: Immersion, point, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    jac = imm.jacobian_at(point, tol)
    _check_rank(jac, point, tol)
    g = jac.T @ jac
    return 0.5 * (g + g.T)


def adapted_frame(
    imm: Immersion,
    ambient: sf.AmbientSpaceForm,
    point,
    X=None,
    tol: Tolerances = DEFAULT_TOL,
    normals: str = "gram-schmidt",
) -> AdaptedFrame:
    """Orthonormal frame with e_1 along ``X`` (parameter coordinates).

    ``normals="complex"`` builds the normal frame as {J e_1, ..., J e_n}
    (completed by Gram-Schmidt if the submanifold is totally real but not
    Lagrangian); it raises FrameConventionError when J e_i is not normal.
    """
    if imm.dim_ambient != ambient.dim:
        raise ArgumentError(
            f"immersion lands in R^{imm.dim_ambient} but the ambient model lives in R^{ambient.dim}"
        )
    u = np.asarray(point, dtype=float)
    jac, second = imm.derivatives(u, tol)
    _check_rank(jac, u, tol)
    p = imm(u)
    n, m = imm.dim_domain, imm.dim_ambient

    radial = None
    if ambient.kind == sf.SPHERE:
        R = ambient.radius
        if abs(np.linalg.norm(p) - R) > tol.eq_tol * max(1.0, R):
            raise ArgumentError("immersion point does not lie on the ambient sphere")
        radial = p / np.linalg.norm(p)
        if m - 1 < n:
            raise ArgumentError("submanifold dimension exceeds that of the ambient sphere")

    columns = [jac[:, a] for a in range(n)]
    if X is not None:
        X = np.asarray(X, dtype=float)
        if X.shape != (n,):
            raise ArgumentError(f"direction must have {n} components")
        pushed = jac @ X
        if np.linalg.norm(pushed) < tol.eq_tol:
            raise ArgumentError("direction X is zero")
        first = [pushed]
    else:
        first = [columns[0]]
    e1 = orthonormalize(first, eq_tol=tol.eq_tol)
    rest = extend_orthonormal(e1, columns, n - 1, eq_tol=1e-6 * max(1.0, np.max(np.abs(jac))))
    tangent = np.array(e1 + rest)

    count = m - n - (1 if radial is not None else 0)
    base = list(tangent) + ([radial] if radial is not None else [])
    seeds: list = []
    if normals == "complex":
        if not ambient.is_complex:
            raise FrameConventionError("complex normal frame requested on a non-complex ambient")
        jt = sf.apply_J(ambient, tangent)
        if np.max(np.abs(jt @ tangent.T)) > max(tol.eq_tol, 1e-6):
            raise FrameConventionError("J maps the tangent space outside the normal space")
        seeds = list(jt)
        normal = list(jt) + extend_orthonormal(base + seeds, np.eye(m), count - n)
    elif normals == "gram-schmidt":
        normal = extend_orthonormal(base, np.eye(m), count) if count else []
    else:
        raise ArgumentError(f"unknown normal frame mode {normals!r}")

    coords = np.linalg.lstsq(jac, tangent.T, rcond=None)[0]
    return AdaptedFrame(
        point=u,
        ambient_point=p,
        tangent=tangent,
        normal=np.array(normal).reshape(count, m),
        coords=coords,
        jacobian=jac,
        second=second,
    )


def second_fundamental_form(
    imm: Immersion, ambient: sf.AmbientSpaceForm, frame: AdaptedFrame, tol: Tolerances = DEFAULT_TOL
) -> ShapeData:
    """Coefficients h^r_ij = <D_{e_i} e_j, e_r> for r over the normal frame.

    Normal vectors of a sphere-ambient frame are tangent to the sphere, so
    projecting onto them already discards the sphere's own radial bending.
    """
    if frame.ambient_point.shape != (imm.dim_ambient,) or frame.point.shape != (imm.dim_domain,):
        raise ArgumentError("frame does not belong to this immersion")
    if np.max(np.abs(imm(frame.point) - frame.ambient_point)) > tol.eq_tol * max(
        1.0, np.max(np.abs(frame.ambient_point))
    ):
        raise ArgumentError("frame base point does not match the immersion")
    C = frame.coords
    # D_{e_i} e_j projected on normals; tangential Christoffel terms drop out.
    hess_frame = np.einsum("mab,ai,bj->mij", frame.second, C, C)
    h = np.einsum("rm,mij->rij", frame.normal, hess_frame)
    h = 0.5 * (h + h.transpose(0, 2, 1))
    H, H_norm_sq = mean_curvature(h, frame.n)
    return ShapeData(h=h, H=H, H_norm_sq=H_norm_sq)


def mean_curvature(shape, n: int):
    """Mean curvature components H^r = trace_r / n and |H|^2."""
    h = shape.h if isinstance(shape, ShapeData) else np.asarray(shape)
    if h.shape[0] == 0:
        return np.zeros(0), 0.0
    H = np.trace(h, axis1=1, axis2=2) / n
    return H, float(np.sum(H * H))


def gauss_curvature(ambient: sf.AmbientSpaceForm, frame: AdaptedFrame, shape: ShapeData) -> CurvatureData:
    if shape.h.shape[1] != frame.n:
        raise ArgumentError("shape data and frame disagree on the dimension")
    Rt = sf.ambient_curvature_tensor(ambient, frame.tangent)
    h = shape.h
    R = Rt + np.einsum("rik,rjl->ijkl", h, h) - np.einsum("ril,rjk->ijkl", h, h)
    return CurvatureData(R=R)


def ricci_direction(curv: CurvatureData) -> float:
    """Ric(e_1) = sum over j >= 2 of R(e_1, e_j, e_1, e_j)."""
    R = curv.R
    return float(sum(R[0, j, 0, j] for j in range(1, curv.n)))


def sectional(curv: CurvatureData, i: int, j: int) -> float:
    if i == j:
        raise ArgumentError("sectional curvature needs two distinct frame indices")
    return float(curv.R[i, j, i, j])


# --- intrinsic oracle --------------------------------------------------------

ORACLE_JAC_STEP = 1e-3
ORACLE_STEP = 2e-3


def _d4(func: Callable, u: np.ndarray, step: float) -> np.ndarray:
    """Fourth-order central partial derivatives; result[..., a] = d/du_a."""
    out = []
    for a in range(u.size):
        e = np.zeros_like(u)
        e[a] = step * max(1.0, abs(u[a]))
        h = e[a]
        out.append((-func(u + 2 * e) + 8 * func(u + e) - 8 * func(u - e) + func(u - 2 * e)) / (12 * h))
    return np.stack(out, axis=-1)


@dataclass(frozen=True)
class CoordinateCurvature:
    """Curvature of the pullback metric in the coordinate basis {d/du_a}."""

    metric: np.ndarray
    christoffel: np.ndarray
    R: np.ndarray

    def in_frame(self, frame: AdaptedFrame) -> CurvatureData:
        E = frame.coords
        return CurvatureData(R=np.einsum("abcd,ai,bj,ck,dl->ijkl", self.R, E, E, E, E))


def christoffel_oracle(imm: Immersion, point, tol: Tolerances = DEFAULT_TOL) -> CoordinateCurvature:
    """Curvature from the induced metric alone, via finite-difference Christoffels.

    Independent of the second fundamental form: only first derivatives of
    the immersion enter, through g = J^T J.
    """
    u = np.asarray(point, dtype=float)
    reach = 4 * ORACLE_STEP + (0 if imm.jacobian is not None else 2 * ORACLE_JAC_STEP)
    imm.check_interior(u, reach)

    if imm.jacobian is not None:
        def jac(v):
            return evaluate_at(imm.jacobian, v)
    else:
        def jac(v):
            return _d4(imm, v, ORACLE_JAC_STEP)

    def metric(v):
        J = jac(v)
        return J.T @ J

    def christoffel(v):
        g = metric(v)
        dg = _d4(metric, v, ORACLE_STEP)  # dg[i, j, a] = d_a g_ij
        # Gamma_{ij,l} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
        lowered = 0.5 * (
            np.einsum("jli->ijl", dg) + np.einsum("ilj->ijl", dg) - np.einsum("ijl->ijl", dg)
        )
        return np.einsum("lm,ijm->lij", np.linalg.inv(g), lowered)

    g = metric(u)
    gam = christoffel(u)
    dgam = _d4(christoffel, u, ORACLE_STEP)  # dgam[l, j, k, i] = d_i Gamma^l_jk
    dgam = np.einsum("ljki->iljk", dgam)
    # R(d_i, d_j) d_k = Rop[i, j, k, l] d_l
    Rop = (
        np.einsum("iljk->ijkl", dgam)
        - np.einsum("jlik->ijkl", dgam)
        + np.einsum("mjk,lim->ijkl", gam, gam)
        - np.einsum("mik,ljm->ijkl", gam, gam)
    )
    # ours[i, j, k, l] = <R(d_i, d_j) d_l, d_k>
    R = np.einsum("ijlm,mk->ijkl", Rop, g)
    return CoordinateCurvature(metric=g, christoffel=gam, R=R)


def curvature_at(
    imm: Immersion,
    ambient: sf.AmbientSpaceForm,
    point,
    X=None,
    tol: Tolerances = DEFAULT_TOL,
    normals: str = "gram-schmidt",
):
    """Frame, shape data and Gauss curvature at one point in one call."""
    frame = adapted_frame(imm, ambient, point, X, tol, normals)
    shape = second_fundamental_form(imm, ambient, frame, tol)
    return frame, shape, gauss_curvature(ambient, frame, shape)


__all__ = [
    "Immersion",
    "AdaptedFrame",
    "ShapeData",
    "CurvatureData",
    "CoordinateCurvature",
    "pullback_metric",
    "adapted_frame",
    "second_fundamental_form",
    "mean_curvature",
    "gauss_curvature",
    "ricci_direction",
    "sectional",
    "christoffel_oracle",
    "curvature_at",
    "RankDeficiencyError",
]
