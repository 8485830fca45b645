import itertools

import numpy as np
import pytest

from subcurv import catalog, geometry
from subcurv import spaceform as sf
from subcurv.errors import ArgumentError, UnsupportedOperation


def _random_tensor_check(space, rng, point=None):
    V = rng.standard_normal((4, space.dim))
    if point is not None:
        V = V - np.outer(V @ point, point) / (point @ point)
    R = sf.ambient_curvature_tensor(space, V, point)
    return R


def _symmetries(R):
    return max(
        np.max(np.abs(R + R.transpose(1, 0, 2, 3))),
        np.max(np.abs(R + R.transpose(0, 1, 3, 2))),
        np.max(np.abs(R - R.transpose(2, 3, 0, 1))),
        np.max(np.abs(R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3))),
    )


def test_euclidean_curvature_vanishes():
    rng = np.random.default_rng(0)
    X, Y, Z, W = rng.standard_normal((4, 3))
    assert sf.ambient_curvature(sf.euclidean(3), X, Y, Z, W) == 0.0


def test_sphere_sectional_is_c():
    space = sf.sphere(3, 1.0)
    X, Y = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    assert sf.ambient_curvature(space, X, Y, X, Y) == pytest.approx(1.0)
    assert sf.ambient_curvature(sf.sphere(3, 4.0), X, Y, X, Y) == pytest.approx(4.0)


def test_sphere_rejects_nontangent_vectors():
    space = sf.sphere(3, 1.0)
    p = np.array([0, 0, 1.0])
    with pytest.raises(ArgumentError):
        sf.ambient_curvature(space, p, [1.0, 0, 0], p, [1.0, 0, 0], point=p)


@pytest.mark.parametrize("c", [0.0, 1.0, -2.5, 4.0])
def test_complex_formula_holomorphic_and_generic(c):
    J = sf.standard_complex_structure(3)
    rng = np.random.default_rng(1)
    for _ in range(20):
        X = rng.standard_normal(6)
        X /= np.linalg.norm(X)
        JX = J @ X
        assert sf.complex_space_form_curvature(c, J, X, JX, X, JX) == pytest.approx(c, abs=1e-12)
        Y = rng.standard_normal(6)
        Y -= (Y @ X) * X + (Y @ JX) * JX
        Y /= np.linalg.norm(Y)
        assert sf.complex_space_form_curvature(c, J, X, Y, X, Y) == pytest.approx(c / 4, abs=1e-12)


def test_complex_formula_tensor_symmetries_brute_force():
    J = sf.standard_complex_structure(2)
    E = np.eye(4)
    R = np.zeros((4, 4, 4, 4))
    for i, j, k, l in itertools.product(range(4), repeat=4):
        R[i, j, k, l] = sf.complex_space_form_curvature(3.0, J, E[i], E[j], E[k], E[l])
    assert _symmetries(R) < 1e-12
    # Kahler: R(JX, JY, Z, W) = R(X, Y, Z, W)
    RJ = np.einsum("ai,bj,abkl->ijkl", J, J, R)
    assert np.max(np.abs(RJ - R)) < 1e-12


@pytest.mark.parametrize("space", [sf.euclidean(4), sf.sphere(4, 2.0)])
def test_real_tensor_symmetries(space):
    rng = np.random.default_rng(3)
    point = None
    if space.kind == sf.SPHERE:
        point = np.array([0, 0, 0, space.radius])
    assert _symmetries(_random_tensor_check(space, rng, point)) < 1e-8


def test_apply_J_examples():
    space = sf.complex_euclidean(1)
    v = sf.apply_J(space, [1.0, 0.0])
    assert np.allclose(v, [0.0, 1.0])
    assert np.allclose(sf.apply_J(space, v), [-1.0, 0.0])
    rng = np.random.default_rng(2)
    space = sf.complex_euclidean(3)
    for w in rng.standard_normal((10, 6)):
        Jw = sf.apply_J(space, w)
        assert np.linalg.norm(Jw) == pytest.approx(np.linalg.norm(w))
        assert abs(Jw @ w) < 1e-12
        assert np.allclose(sf.apply_J(space, Jw), -w)


def test_apply_J_requires_complex_ambient():
    with pytest.raises(UnsupportedOperation):
        sf.apply_J(sf.euclidean(2), [1.0, 0.0])


def test_nonflat_complex_model_unsupported():
    with pytest.raises(UnsupportedOperation):
        sf.complex_euclidean(2, c=1.0)


def test_sphere_needs_positive_curvature():
    with pytest.raises(ArgumentError):
        sf.sphere(3, -1.0)


def _check(imm, space, u):
    frame = geometry.adapted_frame(imm, space, u)
    return sf.lagrangian_check(imm, space, frame)


def test_real_subspace_is_lagrangian():
    imm, space = catalog.real_subspace(2)
    out = _check(imm, space, [0.1, 0.2])
    assert out["lagrangian"] and out["max_residual"] == 0.0


def test_torus_is_lagrangian():
    imm, space = catalog.flat_torus((1.0, 2.0))
    assert _check(imm, space, [0.3, 1.1])["lagrangian"]


def test_totally_real_torus_is_not_lagrangian():
    imm, space = catalog.flat_torus((1.0, 2.0), extra_complex_dims=1)
    out = _check(imm, space, [0.3, 1.1])
    assert out["totally_real"] and not out["lagrangian"]


def test_complex_line_is_not_totally_real():
    # C x {0} inside C^2 with coordinates (x1, x2, y1, y2)
    imm = geometry.Immersion(
        2, 4, lambda u: np.array([u[0], 0.0, u[1], 0.0]), (-1.0, -1.0), (1.0, 1.0)
    )
    assert not _check(imm, sf.complex_euclidean(2), [0.0, 0.0])["totally_real"]


def test_whole_sphere_reproduces_constant_curvature():
    # the identity chart of S^2 inside the curvature-c sphere model of R^3
    c = 2.0
    phi, jac, lo, hi = catalog.sphere_chart(2, 1 / np.sqrt(c))
    imm = geometry.Immersion(2, 3, phi, lo, hi, jac)
    _, shape, curv = geometry.curvature_at(imm, sf.sphere(3, c), [1.0, 0.5])
    assert shape.h.shape[0] == 0
    assert geometry.sectional(curv, 0, 1) == pytest.approx(c, abs=1e-6)
