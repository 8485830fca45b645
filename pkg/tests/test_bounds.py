import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subcurv import bounds, catalog, geometry
from subcurv import spaceform as sf
from subcurv.errors import ArgumentError, FrameConventionError


def test_bound_formulas():
    assert bounds.bound_value("2.1", 2, 0.0, 1.0) == 1.0
    assert bounds.bound_value("3.2", 2, 0.0, 0.5) == 0.25
    assert bounds.bound_value("3.1", 2, 0.0, 0.5) == 0.5
    assert bounds.bound_value("2.1", 3, 1.0, 0.0) == 2.0


def test_bound_validation():
    with pytest.raises(ArgumentError):
        bounds.bound_value("9.9", 2, 0.0, 0.0)
    with pytest.raises(ArgumentError):
        bounds.bound_value("2.1", 1, 0.0, 0.0)
    with pytest.raises(ArgumentError):
        bounds.bound_value("2.1", 2, 0.0, -1.0)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 12), st.floats(-5, 5), st.floats(0, 10))
def test_lagrangian_bound_improves_by_quarter_n_h2(n, c, h2):
    b31 = bounds.bound_value("3.1", n, c, h2)
    b32 = bounds.bound_value("3.2", n, c, h2)
    assert b32 <= b31 + 1e-12
    assert b31 - b32 == pytest.approx(n / 4 * h2, abs=1e-9)
    if h2 == 0:
        assert b31 == pytest.approx((n - 1) * c / 4)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_round_sphere_is_equality_case(r):
    imm, ambient = catalog.sphere(2, r)
    rng = np.random.default_rng(0)
    for u in imm.sample_points(rng, 5):
        rep = bounds.verify_point(imm, ambient, u, rng.standard_normal(2))
        assert rep.ric == pytest.approx(1 / r**2, rel=1e-6)
        assert abs(rep.gaps["2.1"]) < 1e-6
        assert rep.equality["2.1"] and rep.holds["2.1"]
        assert set(rep.bounds) == {"2.1"}


def test_equatorial_sphere():
    imm, ambient = catalog.equatorial_sphere(2, 1.0)
    rep = bounds.verify_point(imm, ambient, [1.0, 0.5], [1.0, 0.0])
    assert rep.ric == pytest.approx(1.0, abs=1e-6)
    assert rep.h_norm_sq < 1e-8
    assert rep.bound_thm21 == pytest.approx(1.0, abs=1e-6)
    assert rep.bound_thm31 is None


def test_clifford_torus_in_c2():
    imm, ambient = catalog.flat_torus((1.0, 1.0))
    rep = bounds.verify_point(imm, ambient, [0.3, 2.0], [1.0, 1.0])
    assert rep.lagrangian and rep.totally_real
    assert rep.ric == pytest.approx(0.0, abs=1e-8)
    assert rep.bound_thm31 == pytest.approx(0.5, abs=1e-8)
    assert rep.bound_thm32 == pytest.approx(0.25, abs=1e-8)
    assert rep.bound_thm21 is None
    assert rep.all_hold
    assert rep.bound_thm32 < rep.bound_thm31


def test_totally_real_torus_gets_only_the_general_bound():
    imm, ambient = catalog.flat_torus((1.0, 2.0), extra_complex_dims=1)
    rep = bounds.verify_point(imm, ambient, [0.3, 2.0], [1.0, 0.0])
    assert rep.totally_real and not rep.lagrangian
    assert set(rep.bounds) == {"3.1"}
    assert rep.bound_thm31 == pytest.approx(0.3125, abs=1e-8)


def test_non_totally_real_gets_no_complex_bound():
    imm = geometry.Immersion(2, 4, lambda u: np.array([u[0], 0.0, u[1], 0.0]), (-1.0, -1.0), (1.0, 1.0))
    rep = bounds.verify_point(imm, sf.complex_euclidean(2), [0.0, 0.0], [1.0, 0.0])
    assert rep.bounds == {}
    assert rep.all_hold


def test_theorem_selection():
    imm, ambient = catalog.flat_torus((1.0, 1.0))
    rep = bounds.verify_point(imm, ambient, [0.3, 2.0], [1.0, 1.0], theorems=("3.2",))
    assert set(rep.bounds) == {"3.2"}


def test_report_dict_is_complete():
    imm, ambient = catalog.sphere(2, 1.0)
    d = bounds.verify_point(imm, ambient, [1.0, 0.2], [1.0, 0.0]).as_dict()
    for key in ("point", "direction", "ric", "H_norm_sq", "bounds", "gaps", "holds", "equality"):
        assert key in d


@pytest.mark.parametrize(
    "entry_id", ["sphere", "sphere4", "small-sphere", "flat-torus", "clifford-torus", "flat-torus3"]
)
def test_direction_invariance_on_homogeneous_manifolds(entry_id):
    imm, ambient = catalog.get(entry_id).build()
    rng = np.random.default_rng(2)
    u = imm.sample_points(rng, 1)[0]
    rics = [bounds.verify_point(imm, ambient, u, X).ric for X in rng.standard_normal((20, imm.dim_domain))]
    assert np.ptp(rics) < 1e-6


# Lagrangian identities


@pytest.mark.parametrize("radii", [(1.0, 1.0), (1.0, 2.0)])
def test_torus_identities(radii):
    imm, ambient = catalog.flat_torus(radii)
    res = bounds.lagrangian_identities_at(imm, ambient, [0.4, -1.0], X=[1.0, 2.0])
    assert res["full_symmetry_residual"] < 1e-6
    assert res["shape_operator_residual"] < 1e-6


def test_real_subspace_identities_vanish():
    imm, ambient = catalog.real_subspace(2)
    res = bounds.lagrangian_identities_at(imm, ambient, [0.1, 0.2])
    assert res == {"full_symmetry_residual": 0.0, "shape_operator_residual": 0.0}


def test_curved_lagrangian_graph_identities():
    imm, ambient = catalog.lagrangian_graph(2)
    frame, shape, _ = geometry.curvature_at(imm, ambient, [0.3, -0.4], normals="complex")
    assert np.max(np.abs(shape.h)) > 0.1
    res = bounds.lagrangian_identities(imm, ambient, frame, shape)
    assert max(res.values()) < 1e-6


def test_wrong_frame_raises():
    imm, ambient = catalog.flat_torus((1.0, 2.0))
    frame = geometry.adapted_frame(imm, ambient, [0.4, -1.0])
    flipped = geometry.AdaptedFrame(
        frame.point, frame.ambient_point, frame.tangent, frame.normal[::-1], frame.coords,
        frame.jacobian, frame.second,
    )
    shape = geometry.second_fundamental_form(imm, ambient, flipped)
    with pytest.raises(FrameConventionError):
        bounds.lagrangian_identities(imm, ambient, flipped, shape)


def test_identities_need_complex_ambient():
    imm, ambient = catalog.sphere(2, 1.0)
    frame, shape, _ = geometry.curvature_at(imm, ambient, [1.0, 0.2])
    with pytest.raises(FrameConventionError):
        bounds.lagrangian_identities(imm, ambient, frame, shape)


# sweeps


def test_sphere4_sweep_gap_is_one():
    imm, ambient = catalog.sphere(4, 1.0)
    summary = bounds.sweep(imm, ambient, 50, seed=1)
    assert summary.ok and not summary.skipped
    gaps = [r.gaps["2.1"] for r in summary.reports]
    assert np.allclose(gaps, 1.0, atol=1e-6)


def test_flat_torus_sweep():
    imm, ambient = catalog.flat_torus((1.0, 1.0))
    summary = bounds.sweep(imm, ambient, 50, seed=1, directions_per_point=2)
    assert summary.ok
    assert len(summary.reports) == 100
    assert summary.theorems == ["3.1", "3.2"]
    assert summary.worst_gap["3.2"] == pytest.approx(0.25, abs=1e-8)
    assert summary.lagrangian_residuals["shape_operator_residual"] < 1e-6


def test_sweep_is_deterministic():
    imm, ambient = catalog.graph(2)
    a = bounds.sweep(imm, ambient, 20, seed=7).as_dict()
    b = bounds.sweep(imm, ambient, 20, seed=7).as_dict()
    assert repr(a) == repr(b)


def test_sweep_collects_skipped_points():
    def phi(u):
        if u[0] > 0.5:
            return np.array([u[0], u[1], np.nan])
        return np.array([u[0], u[1], u[0] ** 2])

    imm = geometry.Immersion(2, 3, phi, (-1.0, -1.0), (1.0, 1.0))
    summary = bounds.sweep(imm, sf.euclidean(3), 30, seed=0)
    assert summary.skipped
    assert len(summary.reports) + len(summary.skipped) == 30
    assert summary.ok


def test_sweep_validation():
    imm, ambient = catalog.graph(2)
    with pytest.raises(ArgumentError):
        bounds.sweep(imm, ambient, 0, seed=0)


def test_perturbation_hook_creates_violation(monkeypatch):
    monkeypatch.setattr(bounds, "_ric_perturbation", 0.5)
    imm, ambient = catalog.sphere(2, 1.0)
    summary = bounds.sweep(imm, ambient, 5, seed=0)
    assert not summary.ok
    assert len(summary.violations) == 5
