"""Quadratic objectives maximized over the hyperplane sum(x) = k.

Three families appear in the Ricci estimates, all on R^n with x_1 singled
out and s = x_2 + ... + x_n:

    chen   f(x) = x_1 s
    lagr1  f(x) = x_1 s - (x_2^2 + ... + x_n^2)
    lagr2  f(x) = x_1 s - x_1^2

``lagr2`` also stands in for every relabeled copy f_r, r >= 2, since those
problems are identical up to a permutation of the variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ArgumentError, NumericalFailure
from .numerics import DEFAULT_TOL, SymmetricSpectrum, Tolerances, definiteness

FAMILIES = ("chen", "lagr1", "lagr2")


@dataclass(frozen=True)
class QuadraticFamily:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ArgumentError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if int(self.n) != self.n or self.n < 2:
            raise ArgumentError(f"n must be an integer >= 2, got {self.n}")

    @property
    def hessian(self) -> np.ndarray:
        n = self.n
        H = np.zeros((n, n))
        H[0, 1:] = H[1:, 0] = 1.0
        if self.family == "lagr1":
            H[np.arange(1, n), np.arange(1, n)] = -2.0
        elif self.family == "lagr2":
            H[0, 0] = -2.0
        return H

    def gradient(self, x) -> np.ndarray:
        return self.hessian @ np.asarray(x, dtype=float)


@dataclass(frozen=True)
class KktSolution:
    point: np.ndarray
    multiplier: float
    objective_value: float
    flat_directions: np.ndarray  # rows span the directions of constant objective at the max

    def as_dict(self) -> dict:
        return {
            "point": self.point.tolist(),
            "multiplier": self.multiplier,
            "objective_value": self.objective_value,
            "max_set_dimension": int(self.flat_directions.shape[0]),
        }


@dataclass(frozen=True)
class MaxCertificate:
    tangential_gradient_norm: float
    restricted_hessian_spectrum: SymmetricSpectrum
    is_global_max: bool
    note: str = "restriction concave"

    def as_dict(self) -> dict:
        return {
            "tangential_gradient_norm": self.tangential_gradient_norm,
            "restricted_hessian": self.restricted_hessian_spectrum.as_dict(),
            "is_global_max": self.is_global_max,
            "note": self.note,
        }


def evaluate(fam: QuadraticFamily, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape != (fam.n,):
        raise ArgumentError(f"expected a vector of length {fam.n}, got shape {x.shape}")
    x1, rest = x[0], x[1:]
    value = x1 * rest.sum()
    if fam.family == "lagr1":
        value -= np.dot(rest, rest)
    elif fam.family == "lagr2":
        value -= x1 * x1
    return float(value)


def _evaluate_many(fam: QuadraticFamily, X: np.ndarray) -> np.ndarray:
    x1 = X[:, 0]
    rest = X[:, 1:]
    value = rest.sum(axis=1)
    value *= x1
    if fam.family == "lagr1":
        value -= np.einsum("ij,ij->i", rest, rest)
    elif fam.family == "lagr2":
        value -= x1 * x1
    return value


def hyperplane_basis(n: int) -> np.ndarray:
    """Orthonormal basis (rows) of {x : sum(x) = 0}."""
    ones = np.ones((n, 1)) / np.sqrt(n)
    q, _ = np.linalg.qr(np.hstack([ones, np.eye(n)[:, : n - 1]]))
    return q[:, 1:].T


def kkt_solve(fam: QuadraticFamily, k: float) -> KktSolution:
    """Stationary point of f on sum(x) = k from the KKT linear system.

    The system [[H, -1], [1^T, 0]] [x; lam] = [0; k] is singular for chen and
    lagr2 (their maximizers form an affine flat); the minimum-norm least
    squares solution then picks the equal split of x_2..x_n.
    """
    n = fam.n
    H = fam.hessian
    ones = np.ones(n)
    K = np.zeros((n + 1, n + 1))
    K[:n, :n] = H
    K[:n, n] = -ones
    K[n, :n] = ones
    rhs = np.zeros(n + 1)
    rhs[n] = k
    sol, *_ = np.linalg.lstsq(K, rhs, rcond=None)
    if np.max(np.abs(K @ sol - rhs)) > 1e-9 * max(1.0, abs(k)):
        raise NumericalFailure("KKT system is inconsistent")
    x, lam = sol[:n], float(sol[n])
    # Null space of the KKT matrix restricted to x: constant-objective directions.
    _, s, vt = np.linalg.svd(K)
    null = vt[s < 1e-10 * s[0]][:, :n]
    if null.size:
        q, r = np.linalg.qr(null.T)
        null = q[:, np.abs(np.diag(r)) > 1e-12].T
    else:
        null = np.zeros((0, n))
    return KktSolution(point=x, multiplier=lam, objective_value=evaluate(fam, x), flat_directions=null)


def closed_form_max(fam: QuadraticFamily, k: float) -> float:
    n = fam.n
    if fam.family == "chen":
        return k * k / 4.0
    if fam.family == "lagr1":
        return (n - 1) * k * k / (4.0 * n)
    return k * k / 8.0


def closed_form_point(fam: QuadraticFamily, k: float) -> np.ndarray:
    """Maximizer written out by hand (equal split on the non-unique flats)."""
    n = fam.n
    x = np.empty(n)
    if fam.family == "chen":
        x[0] = k / 2
        x[1:] = k / (2 * (n - 1))
    elif fam.family == "lagr1":
        a = k / (2 * n)
        x[0] = (n + 1) * a
        x[1:] = a
    else:
        x[0] = k / 4
        x[1:] = 3 * k / (4 * (n - 1))
    return x


def certify_constrained_max(
    fam: QuadraticFamily, k: float, point, tol: Tolerances = DEFAULT_TOL
) -> MaxCertificate:
    """First- and second-order test for a maximum of f restricted to sum(x) = k.

    The hyperplane is totally geodesic in R^n, so the restricted second-order
    form is the plain Hessian of f on vectors with zero coordinate sum. The
    restriction is concave whenever that form is negative semidefinite, which
    upgrades a stationary point to a global maximizer.
    """
    x = np.asarray(point, dtype=float)
    if x.shape != (fam.n,):
        raise ArgumentError(f"expected a vector of length {fam.n}")
    if abs(x.sum() - k) > tol.eq_tol * max(1.0, abs(k)):
        raise ArgumentError(f"point is off the hyperplane: sum = {x.sum()!r}, k = {k!r}")
    grad = fam.gradient(x)
    tangential = grad - grad.mean()
    B = hyperplane_basis(fam.n)
    spectrum = definiteness(B @ fam.hessian @ B.T, tol)
    tg = float(np.linalg.norm(tangential))
    ok = tg < tol.eq_tol and spectrum.is_negative_semidefinite
    return MaxCertificate(tg, spectrum, bool(ok))


@lru_cache(maxsize=16)
def _unit_ball_cloud(n: int, size: int, seed: int, worker: int, workers: int) -> np.ndarray:
    """Uniform points in the unit ball of {sum(x) = 0}, expressed in R^n."""
    ss = np.random.SeedSequence([seed]).spawn(workers)[worker]
    rng = np.random.default_rng(ss)
    d = rng.standard_normal((size, n - 1))
    scale = rng.random(size) ** (1.0 / (n - 1)) / np.sqrt(np.einsum("ij,ij->i", d, d))
    d *= scale[:, None]
    cloud = d @ hyperplane_basis(n)
    cloud.flags.writeable = False
    return cloud


def brute_force_max(
    fam: QuadraticFamily, k: float, samples: int, seed: int, workers: int = 1
) -> dict:
    """Best objective value over random points of the hyperplane patch.

    Points are uniform in the (n-1)-ball of radius 4|k| + 4 centred at
    (k/n, ..., k/n) inside sum(x) = k. The KKT point is always part of the
    sample. ``workers`` splits the sample into deterministic sub-streams,
    each seeded from ``seed`` and its worker index.
    """
    if samples < 1:
        raise ArgumentError("samples must be >= 1")
    if workers < 1:
        raise ArgumentError("workers must be >= 1")
    n = fam.n
    centroid = np.full(n, k / n)
    radius = 4 * abs(k) + 4
    kkt = kkt_solve(fam, k).point
    best_val = evaluate(fam, kkt)
    best_arg = kkt
    sizes = [samples // workers + (1 if w < samples % workers else 0) for w in range(workers)]
    for worker, size in enumerate(sizes):
        if size == 0:
            continue
        X = radius * _unit_ball_cloud(n, size, int(seed), worker, workers)
        X += centroid
        vals = _evaluate_many(fam, X)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best_arg = float(vals[i]), X[i]
    return {
        "empirical_max": float(best_val),
        "arg": np.asarray(best_arg),
        "samples": int(samples),
        "seed": int(seed),
        "workers": workers,
    }
