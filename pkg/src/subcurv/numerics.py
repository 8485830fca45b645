"""Finite differences, Gram-Schmidt and definiteness tests.

Everything here is a pure function of its inputs. Vectors are 1-d numpy
arrays; a "map" is any callable taking a parameter vector and returning an
array of ambient coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ArgumentError, DomainError, NumericalFailure, RankDeficiencyError

__all__ = [
    "Tolerances",
    "SymmetricSpectrum",
    "DEFAULT_TOL",
    "evaluate_at",
    "fd_derivatives",
    "fd_jacobian",
    "fd_second_from_jacobian",
    "orthonormalize",
    "extend_orthonormal",
    "definiteness",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical knobs shared across the package.

    ``fd_step`` drives first derivatives, ``fd_step2`` second derivatives.
    ``verify_tol`` is the slack allowed when checking an inequality on
    finite-difference curvature and is deliberately looser than ``eq_tol``.
    """

    fd_step: float = 1e-5
    fd_step2: float = 1e-4
    eq_tol: float = 1e-8
    psd_tol: float = 1e-8
    verify_tol: float = 1e-6

    def __post_init__(self):
        for name in ("fd_step", "fd_step2", "eq_tol", "psd_tol", "verify_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ArgumentError(f"tolerance {name} must be positive, got {value!r}")
        if self.eq_tol < np.finfo(float).eps:
            raise ArgumentError("eq_tol below machine epsilon")

    def as_dict(self) -> dict:
        return {
            "fd_step": self.fd_step,
            "fd_step2": self.fd_step2,
            "eq_tol": self.eq_tol,
            "psd_tol": self.psd_tol,
            "verify_tol": self.verify_tol,
        }


DEFAULT_TOL = Tolerances()

NEGATIVE_DEFINITE = "negative-definite"
NEGATIVE_SEMIDEFINITE = "negative-semidefinite"
INDEFINITE = "indefinite"
POSITIVE_SEMIDEFINITE = "positive-semidefinite"
POSITIVE_DEFINITE = "positive-definite"


@dataclass(frozen=True)
class SymmetricSpectrum:
    eigenvalues: tuple
    definiteness: str
    psd_tol: float

    @property
    def max_eigenvalue(self) -> float:
        return self.eigenvalues[-1]

    @property
    def min_eigenvalue(self) -> float:
        return self.eigenvalues[0]

    @property
    def is_negative_semidefinite(self) -> bool:
        return self.max_eigenvalue <= self.psd_tol

    @property
    def is_positive_semidefinite(self) -> bool:
        return self.min_eigenvalue >= -self.psd_tol

    @property
    def is_negative_definite(self) -> bool:
        return self.max_eigenvalue < -self.psd_tol

    @property
    def is_positive_definite(self) -> bool:
        return self.min_eigenvalue > self.psd_tol

    def count_negative(self) -> int:
        return sum(1 for v in self.eigenvalues if v < -self.psd_tol)

    def as_dict(self) -> dict:
        return {"eigenvalues": list(self.eigenvalues), "definiteness": self.definiteness}


def evaluate_at(func: Callable, point) -> np.ndarray:
    """Call ``func(point)`` and turn any failure into a DomainError."""
    point = np.asarray(point, dtype=float)
    try:
        value = np.asarray(func(point), dtype=float)
    except DomainError:
        raise
    except (ArithmeticError, ValueError) as exc:
        raise DomainError(f"map evaluation failed at {point.tolist()}: {exc}", point) from exc
    if not np.all(np.isfinite(value)):
        raise DomainError(f"map returned non-finite values at {point.tolist()}", point)
    return value


def _steps(point: np.ndarray, base: float) -> np.ndarray:
    h = base * np.maximum(1.0, np.abs(point))
    # make x + h - x exact so the stencil spacing carries no rounding
    return (point + h) - point


def fd_jacobian(func: Callable, point, step: float = DEFAULT_TOL.fd_step) -> np.ndarray:
    """Central-difference Jacobian, shape (m, n)."""
    point = np.asarray(point, dtype=float)
    h = _steps(point, step)
    cols = []
    for j in range(point.size):
        e = np.zeros_like(point)
        e[j] = h[j]
        cols.append((evaluate_at(func, point + e) - evaluate_at(func, point - e)) / (2 * h[j]))
    return np.stack(cols, axis=-1)


def fd_derivatives(func: Callable, point, tol: Tolerances = DEFAULT_TOL):
    """Jacobian (m, n) and symmetric second-derivative tensor (m, n, n).

    Both use central differences; the Jacobian with ``tol.fd_step`` and the
    second derivatives with ``tol.fd_step2``, each scaled by
    ``max(1, |coordinate|)``.
    """
    point = np.asarray(point, dtype=float)
    n = point.size
    jac = fd_jacobian(func, point, tol.fd_step)
    h = _steps(point, tol.fd_step2)
    f0 = evaluate_at(func, point)
    second = np.zeros((f0.size, n, n))
    eye = np.eye(n)
    for i in range(n):
        di = h[i] * eye[i]
        # same spacing as the mixed stencil below: 2h, which quarters the roundoff
        second[:, i, i] = (
            evaluate_at(func, point + 2 * di) - 2 * f0 + evaluate_at(func, point - 2 * di)
        ) / (4 * h[i] ** 2)
        for j in range(i + 1, n):
            dj = h[j] * eye[j]
            mixed = (
                evaluate_at(func, point + di + dj)
                - evaluate_at(func, point + di - dj)
                - evaluate_at(func, point - di + dj)
                + evaluate_at(func, point - di - dj)
            ) / (4 * h[i] * h[j])
            second[:, i, j] = mixed
            second[:, j, i] = mixed
    return jac, second


def fd_second_from_jacobian(jac_func: Callable, point, step: float = DEFAULT_TOL.fd_step) -> np.ndarray:
    """Second derivatives by differencing an analytic Jacobian, symmetrized."""
    point = np.asarray(point, dtype=float)
    h = _steps(point, step)
    slices = []
    for j in range(point.size):
        e = np.zeros_like(point)
        e[j] = h[j]
        slices.append((evaluate_at(jac_func, point + e) - evaluate_at(jac_func, point - e)) / (2 * h[j]))
    # slices[j][:, i] = d/du_j d/du_i
    second = np.stack(slices, axis=-1)
    return 0.5 * (second + np.swapaxes(second, 1, 2))


def _identity_inner(a, b):
    return float(np.dot(a, b))


def orthonormalize(
    vectors: Sequence,
    inner_product: Callable | None = None,
    eq_tol: float = DEFAULT_TOL.eq_tol,
) -> list:
    """Classical Gram-Schmidt with one re-orthogonalization pass.

    Raises RankDeficiencyError carrying the index of the first input that is
    (numerically) in the span of its predecessors.
    """
    ip = inner_product or _identity_inner
    basis: list = []
    for index, v in enumerate(vectors):
        w = _residual(np.asarray(v, dtype=float), basis, ip)
        norm = np.sqrt(max(ip(w, w), 0.0))
        scale = np.sqrt(max(ip(v, v), 0.0))
        if norm < eq_tol * max(1.0, scale):
            raise RankDeficiencyError(f"vector {index} is linearly dependent on its predecessors", index)
        basis.append(w / norm)
    return basis


def extend_orthonormal(
    basis: Sequence,
    candidates: Sequence,
    count: int,
    inner_product: Callable | None = None,
    eq_tol: float = 1e-6,
) -> list:
    """Append ``count`` new orthonormal vectors taken from ``candidates``.

    Each step takes the candidate with the largest residual against the
    current basis (first one wins ties), so completion is deterministic and
    never builds a direction out of a nearly dependent vector.
    """
    ip = inner_product or _identity_inner
    basis = [np.asarray(b, dtype=float) for b in basis]
    pool = [np.asarray(v, dtype=float) for v in candidates]
    added = []
    while len(added) < count and pool:
        residuals = [_residual(v, basis, ip) for v in pool]
        norms = [np.sqrt(max(ip(w, w), 0.0)) for w in residuals]
        best = int(np.argmax(norms))
        if norms[best] < eq_tol:
            break
        w = residuals[best] / norms[best]
        basis.append(w)
        added.append(w)
        pool.pop(best)
    if len(added) < count:
        raise RankDeficiencyError(
            f"could only complete {len(added)} of {count} requested directions", len(added)
        )
    return added


def _residual(v: np.ndarray, basis: list, ip) -> np.ndarray:
    w = v.copy()
    for _ in range(2):
        for b in basis:
            w = w - ip(w, b) * b
    return w


def definiteness(matrix, tol: Tolerances = DEFAULT_TOL) -> SymmetricSpectrum:
    """Eigenvalues (ascending) and a definiteness label with ``psd_tol`` slack.

    A zero matrix is both negative- and positive-semidefinite; its label is
    ``negative-semidefinite`` and both ``is_*_semidefinite`` flags are true.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ArgumentError(f"expected a square matrix, got shape {a.shape}")
    a = 0.5 * (a + a.T)
    try:
        eig = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"symmetric eigensolver failed: {exc}") from exc
    if not np.all(np.isfinite(eig)):
        raise NumericalFailure("symmetric eigensolver returned non-finite eigenvalues")
    eig = np.sort(eig)
    slack = tol.psd_tol
    if eig.size == 0:
        label = NEGATIVE_SEMIDEFINITE
    elif eig[-1] < -slack:
        label = NEGATIVE_DEFINITE
    elif eig[-1] <= slack:
        label = NEGATIVE_SEMIDEFINITE
    elif eig[0] > slack:
        label = POSITIVE_DEFINITE
    elif eig[0] >= -slack:
        label = POSITIVE_SEMIDEFINITE
    else:
        label = INDEFINITE
    return SymmetricSpectrum(tuple(float(x) for x in eig), label, slack)
