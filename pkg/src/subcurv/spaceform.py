"""Ambient model spaces and their curvature tensors.

Three concrete models are constructible:

* ``euclidean(m)``: flat R^m.
* ``sphere(m, c)``: the round hypersphere of radius 1/sqrt(c) inside R^m,
  so its own dimension is m - 1 and its sectional curvature is c.
* ``complex_euclidean(n)``: C^n viewed as R^{2n} with coordinates
  (x_1..x_n, y_1..y_n) and J(x, y) = (-y, x). Holomorphic curvature 0.

Curvature tensors follow one convention throughout the package::

    R(X, Y, Z, W) = <R(X, Y) W, Z>,   K(X, Y) = R(X, Y, X, Y)

with R(X, Y)Z the curvature operator of the complex space form written as
c/4 {g(Y,Z)X - g(X,Z)Y + g(JY,Z)JX - g(JX,Z)JY + 2 g(X,JY)JZ}. Under this
choice the holomorphic sectional curvature <R(X,JX)JX, X> equals c and a
real space form has R(X,Y,X,Y) = c for orthonormal X, Y.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, UnsupportedOperation
from .numerics import DEFAULT_TOL, Tolerances

EUCLIDEAN = "euclidean"
SPHERE = "sphere"
COMPLEX_EUCLIDEAN = "complex_euclidean"


def standard_complex_structure(n: int) -> np.ndarray:
    """The 2n x 2n matrix of J(x, y) = (-y, x)."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


@dataclass(frozen=True)
class ComplexStructure:
    n: int
    J: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def standard(cls, n: int) -> "ComplexStructure":
        return cls(n, standard_complex_structure(n))

    def __call__(self, v):
        return self.J @ np.asarray(v, dtype=float)


@dataclass(frozen=True)
class AmbientSpaceForm:
    kind: str
    dim: int
    c: float = 0.0
    complex_structure: ComplexStructure | None = field(default=None, compare=False)

    @property
    def radius(self) -> float:
        if self.kind != SPHERE:
            raise UnsupportedOperation("radius is only defined for the sphere model")
        return 1.0 / np.sqrt(self.c)

    @property
    def is_real_space_form(self) -> bool:
        return self.kind in (EUCLIDEAN, SPHERE)

    @property
    def is_complex(self) -> bool:
        return self.kind == COMPLEX_EUCLIDEAN

    @property
    def model_dim(self) -> int:
        """Dimension of the model manifold itself (m - 1 for the sphere)."""
        return self.dim - 1 if self.kind == SPHERE else self.dim

    def describe(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, "c": self.c}


def euclidean(m: int) -> AmbientSpaceForm:
    if m < 1:
        raise ArgumentError("euclidean dimension must be positive")
    return AmbientSpaceForm(EUCLIDEAN, m, 0.0)


def sphere(m: int, c: float = 1.0) -> AmbientSpaceForm:
    """Sphere of curvature ``c`` realized inside R^m."""
    if not c > 0:
        raise ArgumentError(f"sphere ambient requires c > 0, got {c}")
    if m < 2:
        raise ArgumentError("sphere ambient needs an enclosing space of dimension >= 2")
    return AmbientSpaceForm(SPHERE, m, float(c))


def complex_euclidean(n: int, c: float = 0.0) -> AmbientSpaceForm:
    if c != 0:
        raise UnsupportedOperation(
            "only the flat complex space form (c = 0) is available as a geometric model; "
            "use complex_space_form_curvature for arithmetic with c != 0"
        )
    if n < 1:
        raise ArgumentError("complex dimension must be positive")
    return AmbientSpaceForm(COMPLEX_EUCLIDEAN, 2 * n, 0.0, ComplexStructure.standard(n))


def apply_J(space: AmbientSpaceForm, v) -> np.ndarray:
    if not space.is_complex:
        raise UnsupportedOperation(f"no complex structure on a {space.kind} ambient")
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != space.dim:
        raise ArgumentError(f"vector of length {v.shape[-1]} in a {space.dim}-dimensional ambient")
    return v @ space.complex_structure.J.T


def complex_curvature_operator(c: float, J: np.ndarray, X, Y, Z) -> np.ndarray:
    """R(X, Y)Z for a complex space form of holomorphic curvature ``c``."""
    X, Y, Z = (np.asarray(v, dtype=float) for v in (X, Y, Z))
    JX, JY, JZ = J @ X, J @ Y, J @ Z
    return (c / 4.0) * (
        np.dot(Y, Z) * X
        - np.dot(X, Z) * Y
        + np.dot(JY, Z) * JX
        - np.dot(JX, Z) * JY
        + 2.0 * np.dot(X, JY) * JZ
    )


def complex_space_form_curvature(c: float, J: np.ndarray, X, Y, Z, W) -> float:
    """R(X, Y, Z, W) = <R(X, Y)W, Z> for arbitrary holomorphic curvature ``c``."""
    return float(np.dot(complex_curvature_operator(c, J, X, Y, W), Z))


def _real_form_tensor(c: float, vectors: np.ndarray) -> np.ndarray:
    g = vectors @ vectors.T
    return c * (np.einsum("ik,jl->ijkl", g, g) - np.einsum("il,jk->ijkl", g, g))


def _check_tangent_to_sphere(space, point, vectors, tol):
    if point is None:
        return
    p = np.asarray(point, dtype=float)
    if abs(np.linalg.norm(p) - space.radius) > tol.eq_tol * max(1.0, space.radius):
        raise ArgumentError("base point does not lie on the ambient sphere")
    unit = p / np.linalg.norm(p)
    for v in np.atleast_2d(vectors):
        if abs(np.dot(v, unit)) > tol.eq_tol * max(1.0, np.linalg.norm(v)):
            raise ArgumentError("vector is not tangent to the ambient sphere at the base point")


def ambient_curvature(
    space: AmbientSpaceForm, X, Y, Z, W, point=None, tol: Tolerances = DEFAULT_TOL
) -> float:
    """Ambient curvature R~(X, Y, Z, W).

    For the sphere model, ``point`` (if given) is the base point on the
    sphere and all four vectors must be tangent there.
    """
    vectors = np.array([X, Y, Z, W], dtype=float)
    if space.kind == SPHERE:
        _check_tangent_to_sphere(space, point, vectors, tol)
        return float(_real_form_tensor(space.c, vectors)[0, 1, 2, 3])
    if space.kind == COMPLEX_EUCLIDEAN and space.c != 0:
        return complex_space_form_curvature(space.c, space.complex_structure.J, *vectors)
    return 0.0


def ambient_curvature_tensor(
    space: AmbientSpaceForm, frame_vectors, point=None, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """All components R~(e_i, e_j, e_k, e_l) for the given vectors, shape (n,)*4."""
    vecs = np.atleast_2d(np.asarray(frame_vectors, dtype=float))
    k = vecs.shape[0]
    if space.kind == SPHERE:
        _check_tangent_to_sphere(space, point, vecs, tol)
        return _real_form_tensor(space.c, vecs)
    return np.zeros((k, k, k, k))


def lagrangian_check(imm, space: AmbientSpaceForm, frame, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Totally-real and Lagrangian predicates at the frame's base point.

    ``imm`` is accepted for interface symmetry; the test only needs the
    tangent frame. Returns ``{"totally_real", "lagrangian", "max_residual"}``.
    """
    if not space.is_complex:
        raise UnsupportedOperation(f"Lagrangian check needs a complex ambient, got {space.kind}")
    tangent = np.asarray(frame.tangent, dtype=float)
    jt = apply_J(space, tangent)
    residual = float(np.max(np.abs(jt @ tangent.T))) if tangent.size else 0.0
    totally_real = residual < tol.eq_tol
    n = tangent.shape[0]
    return {
        "totally_real": bool(totally_real),
        "lagrangian": bool(totally_real and 2 * n == space.dim),
        "max_residual": residual,
    }
