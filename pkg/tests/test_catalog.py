import numpy as np
import pytest

from subcurv import catalog, geometry
from subcurv.errors import ArgumentError
from subcurv.numerics import fd_jacobian


def test_ids_unique_and_listed():
    ids = [e["id"] for e in catalog.listing()]
    assert len(ids) == len(set(ids))
    assert {"sphere", "equatorial-sphere", "small-sphere", "clifford-torus", "real-subspace",
            "product-spheres", "cylinder", "graph"} <= set(ids)


def test_clifford_torus_flagged_lagrangian():
    entry = {e["id"]: e for e in catalog.listing()}["clifford-torus"]
    assert entry["lagrangian"] is True


def test_sphere_documents_mean_curvature():
    assert catalog.get("sphere").expected_values(r=2.0)["H_norm_sq"] == pytest.approx(0.25)


def test_unknown_entry_and_parameter():
    with pytest.raises(ArgumentError):
        catalog.get("torus-of-doom")
    with pytest.raises(ArgumentError):
        catalog.get("sphere").params(r1=2.0)


def test_invalid_parameters():
    with pytest.raises(ArgumentError):
        catalog.sphere(2, -1.0)
    with pytest.raises(ArgumentError):
        catalog.small_sphere(2, 1.0, 2.0)


@pytest.mark.parametrize("entry_id", list(catalog.CATALOG))
def test_analytic_jacobians_match_differences(entry_id):
    imm, _ = catalog.get(entry_id).build()
    for u in imm.sample_points(np.random.default_rng(0), 3):
        exact = imm.jacobian_at(u)
        assert np.max(np.abs(exact - fd_jacobian(imm.evaluator, u))) < 1e-7


@pytest.mark.parametrize("entry_id", list(catalog.CATALOG))
def test_expected_values_hold(entry_id):
    entry = catalog.get(entry_id)
    expected = entry.expected_values()
    imm, ambient = entry.build()
    u = imm.sample_points(np.random.default_rng(1), 1)[0]
    _, shape, curv = geometry.curvature_at(imm, ambient, u)
    if "H_norm_sq" in expected:
        assert shape.H_norm_sq == pytest.approx(expected["H_norm_sq"], abs=1e-6)
    if "ric" in expected:
        assert geometry.ricci_direction(curv) == pytest.approx(expected["ric"], abs=1e-6)
    if entry.totally_geodesic:
        assert np.max(np.abs(shape.h)) < 1e-7
