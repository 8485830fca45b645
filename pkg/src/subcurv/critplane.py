"""Minimizing sectional curvature over tangent 2-planes.

Planes are handled through orthonormal pairs (X, Y) written in the
coordinates of an orthonormal tangent frame, so K(X, Y) = R(X, Y, X, Y)
needs no normalization. A plane is critical when R(U, V)W stays in the
plane for all U, V, W in it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, UnsupportedOperation
from .geometry import CurvatureData
from .numerics import DEFAULT_TOL, Tolerances

MAX_ITER = 500
INITIAL_STEP = 0.1
DEFAULT_RESTARTS = 16


@dataclass(frozen=True)
class TangentPlane:
    X: np.ndarray
    Y: np.ndarray
    K: float
    converged: bool = True
    iterations: int = 0

    def as_dict(self) -> dict:
        return {
            "X": self.X.tolist(),
            "Y": self.Y.tolist(),
            "K": self.K,
            "converged": self.converged,
            "iterations": self.iterations,
        }


def plane_curvature(R: np.ndarray, X, Y) -> float:
    return float(np.einsum("ijkl,i,j,k,l->", R, X, Y, X, Y))


def _check_pair(X, Y, tol: Tolerances):
    X, Y = np.asarray(X, dtype=float), np.asarray(Y, dtype=float)
    gram = np.array([[X @ X, X @ Y], [Y @ X, Y @ Y]])
    if np.max(np.abs(gram - np.eye(2))) > max(tol.eq_tol, 1e-9) * 10:
        raise ArgumentError("plane basis is not orthonormal")
    return X, Y


def _retract(X, Y):
    """Gram-Schmidt back onto orthonormal pairs."""
    X = X / np.linalg.norm(X)
    Y = Y - (Y @ X) * X
    Y = Y - (Y @ X) * X
    return X, Y / np.linalg.norm(Y)


def _projected_gradient(R, X, Y):
    gX = 2 * np.einsum("ajkl,j,k,l->a", R, Y, X, Y)
    gY = 2 * np.einsum("iakl,i,k,l->a", R, X, X, Y)
    # tangent space of the Stiefel manifold at [X Y]: remove the symmetric part
    F = np.stack([X, Y], axis=1)
    G = np.stack([gX, gY], axis=1)
    S = F.T @ G
    G = G - F @ (0.5 * (S + S.T))
    return G[:, 0], G[:, 1]


def _descend(R, X, Y, grad_tol=1e-10):
    K = plane_curvature(R, X, Y)
    step = INITIAL_STEP
    for it in range(1, MAX_ITER + 1):
        gX, gY = _projected_gradient(R, X, Y)
        gnorm = np.sqrt(gX @ gX + gY @ gY)
        if gnorm < grad_tol:
            return X, Y, K, True, it
        while step > 1e-14:
            Xn, Yn = _retract(X - step * gX, Y - step * gY)
            Kn = plane_curvature(R, Xn, Yn)
            if Kn < K:
                break
            step *= 0.5
        else:
            return X, Y, K, True, it
        X, Y, K = Xn, Yn, Kn
    return X, Y, K, False, MAX_ITER


def minimize_sectional(
    curv: CurvatureData, restarts: int = DEFAULT_RESTARTS, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> TangentPlane:
    """Multi-start projected gradient descent of K over orthonormal pairs.

    Returns the lowest plane found; ``converged`` is false when that run hit
    the iteration cap.
    """
    R = np.asarray(curv.R, dtype=float)
    n = R.shape[0]
    if n < 2:
        raise ArgumentError("need at least a 2-dimensional tangent space")
    if restarts < 1:
        raise ArgumentError("restarts must be >= 1")
    if n == 2:
        X, Y = np.eye(2)
        return TangentPlane(X, Y, plane_curvature(R, X, Y), True, 0)
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        Q, _ = np.linalg.qr(rng.standard_normal((n, 2)))
        X, Y, K, conv, its = _descend(R, Q[:, 0], Q[:, 1])
        if best is None or K < best.K:
            best = TangentPlane(X, Y, K, conv, its)
    return best


def critical_residual(curv: CurvatureData, plane: TangentPlane, tol: Tolerances = DEFAULT_TOL) -> float:
    """Largest out-of-plane part of R(U, V)W over unit U, V, W in the plane.

    R(U, V) only depends on U ^ V, so it suffices to take (U, V) = (X, Y);
    W -> (R(X, Y)W)^perp is then linear on the plane and the maximum over
    unit W is its spectral norm. This bounds every basis triple from above
    and does not depend on the chosen basis of the plane.
    """
    X, Y = _check_pair(plane.X, plane.Y, tol)
    R = np.asarray(curv.R, dtype=float)
    P = np.stack([X, Y])
    # <R(X, Y)W, e_a> = R(X, Y, e_a, W)
    cols = np.einsum("ijal,i,j,wl->aw", R, X, Y, P)
    cols = cols - P.T @ (P @ cols)
    return float(np.linalg.norm(cols, 2))


def _givens_planes(angles: np.ndarray, n: int):
    """Orthonormal pairs Q(angles) e_1, Q(angles) e_2 for a batch of angle vectors.

    Q is the product of rotations in the coordinate planes (1, k) and (2, k),
    k = 3..n; angles has shape (batch, 2(n - 2)).
    """
    batch = angles.shape[0]
    X = np.zeros((batch, n))
    Y = np.zeros((batch, n))
    X[:, 0] = 1.0
    Y[:, 1] = 1.0
    col = 0
    for k in range(2, n):
        for base in (0, 1):
            c, s = np.cos(angles[:, col]), np.sin(angles[:, col])
            for V in (X, Y):
                a, b = V[:, base].copy(), V[:, k].copy()
                V[:, base] = c * a - s * b
                V[:, k] = s * a + c * b
            col += 1
    return X, Y


def plane_scan(curv: CurvatureData, grid_resolution: int = 12, refinements: int = 6) -> dict:
    """Exhaustive grid minimum of K over 2-planes, for n <= 4.

    A uniform grid over the 2(n-2) rotation angles is followed by a few
    deterministic zoomed grids around the running best; no gradients are
    used, so the result is independent of ``minimize_sectional``.
    """
    R = np.asarray(curv.R, dtype=float)
    n = R.shape[0]
    if n > 4:
        raise UnsupportedOperation("plane_scan supports n <= 4; use minimize_sectional")
    if n < 2:
        raise ArgumentError("need at least a 2-dimensional tangent space")
    if n == 2:
        X, Y = np.eye(2)
        return {"min_K": plane_curvature(R, X, Y), "X": X, "Y": Y}
    dim = 2 * (n - 2)
    center = np.zeros(dim)
    half = np.full(dim, np.pi / 2)
    best_val, best_angles = np.inf, center
    for level in range(refinements + 1):
        axes = [np.linspace(c - h, c + h, grid_resolution + 1) for c, h in zip(center, half)]
        grid = np.array(np.meshgrid(*axes, indexing="ij")).reshape(dim, -1).T
        X, Y = _givens_planes(grid, n)
        K = np.einsum("ijkl,bi,bj,bk,bl->b", R, X, Y, X, Y, optimize=True)
        i = int(np.argmin(K))
        if K[i] < best_val:
            best_val, best_angles = float(K[i]), grid[i]
        center = best_angles
        half = half * (4.0 / grid_resolution)
    X, Y = _givens_planes(best_angles[None, :], n)
    return {"min_K": best_val, "X": X[0], "Y": Y[0]}
