"""Built-in immersions with closed-form reference values.

Each entry knows how to build its immersion and ambient model from a few
parameters and, where the geometry allows, what |H|^2, Ric and the
inequality gaps should be.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import spaceform as sf
from .errors import ArgumentError
from .geometry import Immersion

POLAR_PAD = 0.15
AZIMUTH_PAD = 0.15


def sphere_chart(n: int, r: float):
    """Hyperspherical chart of S^n(r) in R^{n+1} and its Jacobian.

    Parameters are (theta_1, ..., theta_{n-1}, phi) with
    x_k = r sin(theta_1)...sin(theta_{k-1}) cos(theta_k) for k <= n and
    x_{n+1} = r sin(theta_1)...sin(theta_{n-1}) sin(phi).
    """

    def phi(a):
        s, c = np.sin(a), np.cos(a)
        x = np.empty(n + 1)
        prefix = 1.0
        for k in range(n):
            x[k] = prefix * c[k]
            prefix *= s[k]
        x[n] = prefix
        return r * x

    def jac(a):
        s, c = np.sin(a), np.cos(a)
        J = np.zeros((n + 1, n))
        for k in range(n + 1):
            # x_k = prod_{i<k} s_i * (c_k if k < n else 1)
            for j in range(min(k + 1, n)):
                factors = [s[i] for i in range(k) if i != j]
                if j < k:
                    factors.append(c[j])
                    tail = c[k] if k < n else 1.0
                else:
                    tail = -s[k]
                J[k, j] = np.prod(factors) * tail
        return r * J

    lower = tuple([POLAR_PAD] * (n - 1) + [-np.pi + AZIMUTH_PAD])
    upper = tuple([np.pi - POLAR_PAD] * (n - 1) + [np.pi - AZIMUTH_PAD])
    return phi, jac, lower, upper


def _pad(func, before: int, after: int, scale=1.0, tail=None):
    """Embed a map into a bigger space: zeros before/after, optional constant tail."""

    def wrapped(u):
        core = scale * np.asarray(func(u))
        parts = [np.zeros((before,) + core.shape[1:]), core, np.zeros((after,) + core.shape[1:])]
        out = np.concatenate(parts, axis=0)
        if tail is not None and core.ndim == 1:
            out[-1] = tail
        return out

    return wrapped


def sphere(dim: int = 2, r: float = 1.0):
    _positive(r=r)
    _dims(dim, 1)
    phi, jac, lo, hi = sphere_chart(dim, r)
    return Immersion(dim, dim + 1, phi, lo, hi, jac, name=f"sphere(dim={dim}, r={r})"), sf.euclidean(dim + 1)


def equatorial_sphere(dim: int = 2, c: float = 1.0):
    """Totally geodesic S^dim inside the ambient sphere S^{dim+1} of curvature c."""
    _positive(c=c)
    _dims(dim, 1)
    phi, jac, lo, hi = sphere_chart(dim, 1.0 / np.sqrt(c))
    imm = Immersion(dim, dim + 2, _pad(phi, 0, 1), lo, hi, _pad(jac, 0, 1), name="equatorial-sphere")
    return imm, sf.sphere(dim + 2, c)


def small_sphere(dim: int = 2, c: float = 1.0, angle: float = 0.8):
    """The latitude sphere at polar angle ``angle`` in S^{dim+1} of curvature c."""
    _positive(c=c)
    _dims(dim, 1)
    if not 0 < angle <= np.pi / 2:
        raise ArgumentError("angle must lie in (0, pi/2]")
    R = 1.0 / np.sqrt(c)
    phi, jac, lo, hi = sphere_chart(dim, R * np.sin(angle))
    height = R * np.cos(angle)
    imm = Immersion(
        dim, dim + 2, _pad(phi, 0, 1, tail=height), lo, hi, _pad(jac, 0, 1), name="small-sphere"
    )
    return imm, sf.sphere(dim + 2, c)


def cylinder(r: float = 1.0):
    _positive(r=r)

    def phi(u):
        t, z = u
        return np.array([r * np.cos(t), r * np.sin(t), z])

    def jac(u):
        t, _ = u
        return np.array([[-r * np.sin(t), 0.0], [r * np.cos(t), 0.0], [0.0, 1.0]])

    return Immersion(2, 3, phi, (-np.pi, -2.0), (np.pi, 2.0), jac, name="cylinder"), sf.euclidean(3)


def graph(dim: int = 2):
    """The paraboloid u -> (u, |u|^2)."""
    _dims(dim, 1)

    def phi(u):
        return np.append(u, np.dot(u, u))

    def jac(u):
        return np.vstack([np.eye(dim), 2 * np.asarray(u)[None, :]])

    return Immersion(dim, dim + 1, phi, (-1.0,) * dim, (1.0,) * dim, jac, name="graph"), sf.euclidean(dim + 1)


def plane(dim: int = 2):
    """A tilted affine n-plane in R^{n+1}."""
    _dims(dim, 1)
    A = np.vstack([np.eye(dim), np.arange(1, dim + 1, dtype=float)[None, :]])
    offset = np.linspace(0.5, -0.5, dim + 1)

    def phi(u):
        return A @ u + offset

    def jac(u):
        return A.copy()

    return Immersion(dim, dim + 1, phi, (-1.0,) * dim, (1.0,) * dim, jac, name="plane"), sf.euclidean(dim + 1)


def product_spheres(r1: float = 1.0, r2: float = 0.5):
    """S^2(r1) x S^2(r2) in R^6, parameters (theta1, phi1, theta2, phi2)."""
    _positive(r1=r1, r2=r2)
    p1, j1, lo1, hi1 = sphere_chart(2, r1)
    p2, j2, lo2, hi2 = sphere_chart(2, r2)

    def phi(u):
        return np.concatenate([p1(u[:2]), p2(u[2:])])

    def jac(u):
        J = np.zeros((6, 4))
        J[:3, :2] = j1(u[:2])
        J[3:, 2:] = j2(u[2:])
        return J

    return Immersion(4, 6, phi, lo1 + lo2, hi1 + hi2, jac, name="product-spheres"), sf.euclidean(6)


def flat_torus(radii=(1.0, 1.0), extra_complex_dims: int = 0):
    """Product of circles z_k = r_k e^{i theta_k} in C^{n + extra}.

    Coordinates follow the (x_1..x_N, y_1..y_N) layout of the complex
    structure, so with ``extra_complex_dims = 0`` the torus is Lagrangian.
    """
    radii = tuple(float(r) for r in radii)
    _positive(**{f"r{i + 1}": r for i, r in enumerate(radii)})
    n = len(radii)
    if n < 1:
        raise ArgumentError("flat torus needs at least one radius")
    N = n + extra_complex_dims
    rad = np.array(radii)

    def phi(u):
        out = np.zeros(2 * N)
        out[:n] = rad * np.cos(u)
        out[N:N + n] = rad * np.sin(u)
        return out

    def jac(u):
        J = np.zeros((2 * N, n))
        idx = np.arange(n)
        J[idx, idx] = -rad * np.sin(u)
        J[N + idx, idx] = rad * np.cos(u)
        return J

    lo = (-np.pi,) * n
    hi = (np.pi,) * n
    return Immersion(n, 2 * N, phi, lo, hi, jac, name="flat-torus"), sf.complex_euclidean(N)


def real_subspace(dim: int = 2):
    """R^n = {y = 0} inside C^n."""
    _dims(dim, 1)

    def phi(u):
        return np.concatenate([u, np.zeros(dim)])

    def jac(u):
        return np.vstack([np.eye(dim), np.zeros((dim, dim))])

    return (
        Immersion(dim, 2 * dim, phi, (-1.0,) * dim, (1.0,) * dim, jac, name="real-subspace"),
        sf.complex_euclidean(dim),
    )


def lagrangian_graph(dim: int = 2):
    """Graph of the gradient of F(u) = sum(u_i^3)/6 + u_1 |u_{2..n}|^2 in C^n.

    Gradient graphs {(u, grad F(u))} are Lagrangian for J(x, y) = (-y, x);
    this one has a non-diagonal second fundamental form.
    """
    _dims(dim, 2)

    def grad(u):
        g = u * u / 2
        g[0] += np.dot(u[1:], u[1:])
        g[1:] += 2 * u[0] * u[1:]
        return g

    def hess(u):
        H = np.diag(u.astype(float))
        H[0, 1:] = H[1:, 0] = 2 * u[1:]
        H[np.arange(1, dim), np.arange(1, dim)] += 2 * u[0]
        return H

    def phi(u):
        u = np.asarray(u, dtype=float)
        return np.concatenate([u, grad(u)])

    def jac(u):
        return np.vstack([np.eye(dim), hess(np.asarray(u, dtype=float))])

    return (
        Immersion(dim, 2 * dim, phi, (-1.0,) * dim, (1.0,) * dim, jac, name="lagrangian-graph"),
        sf.complex_euclidean(dim),
    )


def _positive(**values):
    for name, v in values.items():
        if not (np.isfinite(v) and v > 0):
            raise ArgumentError(f"{name} must be positive, got {v}")


def _dims(dim, lowest):
    if int(dim) != dim or dim < lowest or dim > 8:
        raise ArgumentError(f"dimension must be an integer in [{lowest}, 8], got {dim}")


# --- registry ------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    description: str
    builder: Callable = field(repr=False)
    defaults: dict = field(default_factory=dict)
    ambient: str = sf.EUCLIDEAN
    lagrangian: bool = False
    totally_real: bool = False
    totally_geodesic: bool = False
    homogeneous: bool = False
    expected: Callable | None = field(default=None, repr=False)

    def params(self, **overrides) -> dict:
        unknown = set(overrides) - set(self.defaults)
        if unknown:
            raise ArgumentError(f"{self.id} does not take parameters {sorted(unknown)}")
        merged = dict(self.defaults)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return merged

    def build(self, **overrides):
        return self.builder(**self.params(**overrides))

    def expected_values(self, **overrides) -> dict:
        if self.expected is None:
            return {}
        return self.expected(**self.params(**overrides))

    def listing(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "ambient": self.ambient,
            "parameters": dict(self.defaults),
            "lagrangian": self.lagrangian,
            "totally_real": self.totally_real,
            "totally_geodesic": self.totally_geodesic,
            "homogeneous": self.homogeneous,
            "expected": _plain(self.expected_values()),
        }


def _sphere_expected(dim, r):
    return {
        "H_norm_sq": 1 / r**2,
        "ric": (dim - 1) / r**2,
        "gap_thm21": (dim - 2) ** 2 / (4 * r**2),
    }


def _small_sphere_expected(dim, c, angle):
    cot2 = 1 / np.tan(angle) ** 2
    return {
        "H_norm_sq": c * cot2,
        "ric": (dim - 1) * c / np.sin(angle) ** 2,
        "gap_thm21": (dim - 2) ** 2 / 4 * c * cot2,
    }


def _torus_expected(radii):
    n = len(radii)
    hn = sum(1 / r**2 for r in radii) / n**2
    return {
        "H_norm_sq": hn,
        "ric": 0.0,
        "bound_thm31": n**2 / 4 * hn,
        "bound_thm32": (n - 1) / 4 * n * hn,
    }


CATALOG = {
    e.id: e
    for e in [
        CatalogEntry(
            "sphere",
            "round sphere S^dim(r) in R^{dim+1}",
            lambda dim, r: sphere(dim, r),
            {"dim": 2, "r": 1.0},
            homogeneous=True,
            expected=_sphere_expected,
        ),
        CatalogEntry(
            "sphere4",
            "round sphere S^4(r) in R^5",
            lambda r: sphere(4, r),
            {"r": 1.0},
            homogeneous=True,
            expected=lambda r: _sphere_expected(4, r),
        ),
        CatalogEntry(
            "cylinder",
            "circular cylinder of radius r in R^3",
            cylinder,
            {"r": 1.0},
            homogeneous=True,
            expected=lambda r: {"H_norm_sq": 1 / (4 * r**2), "ric": 0.0, "gap_thm21": 1 / (4 * r**2)},
        ),
        CatalogEntry(
            "graph",
            "paraboloid u -> (u, |u|^2) in R^{dim+1}",
            graph,
            {"dim": 2},
        ),
        CatalogEntry(
            "plane",
            "tilted affine plane in R^{dim+1}",
            plane,
            {"dim": 2},
            totally_geodesic=True,
            homogeneous=True,
            expected=lambda dim: {"H_norm_sq": 0.0, "ric": 0.0, "gap_thm21": 0.0},
        ),
        CatalogEntry(
            "product-spheres",
            "S^2(r1) x S^2(r2) in R^6",
            product_spheres,
            {"r1": 1.0, "r2": 0.5},
            homogeneous=True,
            expected=lambda r1, r2: {"H_norm_sq": (1 / r1**2 + 1 / r2**2) / 4},
        ),
        CatalogEntry(
            "equatorial-sphere",
            "totally geodesic S^dim in the sphere of curvature c",
            equatorial_sphere,
            {"dim": 2, "c": 1.0},
            ambient=sf.SPHERE,
            totally_geodesic=True,
            homogeneous=True,
            expected=lambda dim, c: {"H_norm_sq": 0.0, "ric": (dim - 1) * c, "gap_thm21": 0.0},
        ),
        CatalogEntry(
            "small-sphere",
            "latitude sphere at polar angle `angle` in the sphere of curvature c",
            small_sphere,
            {"dim": 2, "c": 1.0, "angle": 0.8},
            ambient=sf.SPHERE,
            homogeneous=True,
            expected=_small_sphere_expected,
        ),
        CatalogEntry(
            "clifford-torus",
            "S^1(1) x S^1(1) in C^2 (Lagrangian, flat)",
            lambda: flat_torus((1.0, 1.0)),
            {},
            ambient=sf.COMPLEX_EUCLIDEAN,
            lagrangian=True,
            totally_real=True,
            homogeneous=True,
            expected=lambda: _torus_expected((1.0, 1.0)),
        ),
        CatalogEntry(
            "flat-torus",
            "S^1(r1) x S^1(r2) in C^2 (Lagrangian, flat)",
            lambda r1, r2: flat_torus((r1, r2)),
            {"r1": 1.0, "r2": 2.0},
            ambient=sf.COMPLEX_EUCLIDEAN,
            lagrangian=True,
            totally_real=True,
            homogeneous=True,
            expected=lambda r1, r2: _torus_expected((r1, r2)),
        ),
        CatalogEntry(
            "flat-torus3",
            "S^1(r1) x S^1(r2) x S^1(r3) in C^3 (Lagrangian, flat)",
            lambda r1, r2, r3: flat_torus((r1, r2, r3)),
            {"r1": 1.0, "r2": 1.5, "r3": 2.0},
            ambient=sf.COMPLEX_EUCLIDEAN,
            lagrangian=True,
            totally_real=True,
            homogeneous=True,
            expected=lambda r1, r2, r3: _torus_expected((r1, r2, r3)),
        ),
        CatalogEntry(
            "totally-real-torus",
            "S^1(r1) x S^1(r2) x {0} in C^3 (totally real, not Lagrangian)",
            lambda r1, r2: flat_torus((r1, r2), extra_complex_dims=1),
            {"r1": 1.0, "r2": 2.0},
            ambient=sf.COMPLEX_EUCLIDEAN,
            totally_real=True,
            homogeneous=True,
        ),
        CatalogEntry(
            "lagrangian-graph",
            "gradient graph (u, grad F(u)) in C^dim (Lagrangian, curved)",
            lagrangian_graph,
            {"dim": 2},
            ambient=sf.COMPLEX_EUCLIDEAN,
            lagrangian=True,
            totally_real=True,
        ),
        CatalogEntry(
            "real-subspace",
            "R^dim inside C^dim (Lagrangian, totally geodesic)",
            real_subspace,
            {"dim": 2},
            ambient=sf.COMPLEX_EUCLIDEAN,
            lagrangian=True,
            totally_real=True,
            totally_geodesic=True,
            homogeneous=True,
            expected=lambda dim: {"H_norm_sq": 0.0, "ric": 0.0, "bound_thm31": 0.0, "bound_thm32": 0.0},
        ),
    ]
}


def get(entry_id: str) -> CatalogEntry:
    try:
        return CATALOG[entry_id]
    except KeyError:
        raise ArgumentError(f"unknown manifold {entry_id!r}; known: {', '.join(sorted(CATALOG))}") from None


def listing() -> list:
    return [CATALOG[k].listing() for k in CATALOG]


def _plain(value):
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value
