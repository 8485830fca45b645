"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line (visible without -s) and then
asserts, so the summary survives a failing run.
"""

import io
import json
import time

import numpy as np
import pytest

from subcurv import bounds, catalog, critplane, geometry, quadopt
from subcurv import spaceform as sf
from subcurv.cli import RunConfig, run
from subcurv.critplane import TangentPlane
from subcurv.quadopt import QuadraticFamily


def announce(capsys, number, title, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {title}: {detail}")
    assert ok, detail


def test_criterion_1_closed_form_maxima(capsys):
    start = time.perf_counter()
    ks = np.random.default_rng(2024).uniform(-10, 10, 50)
    worst_kkt, worst_excess = 0.0, -np.inf
    for family in quadopt.FAMILIES:
        for n in range(2, 9):
            fam = QuadraticFamily(family, n)
            for k in ks:
                closed = quadopt.closed_form_max(fam, k)
                worst_kkt = max(worst_kkt, abs(quadopt.kkt_solve(fam, k).objective_value - closed))
                brute = quadopt.brute_force_max(fam, k, 100_000, seed=17)
                worst_excess = max(worst_excess, brute["empirical_max"] - closed)
    elapsed = time.perf_counter() - start
    ok = worst_kkt < 1e-10 and worst_excess <= 1e-9 and elapsed < 10
    announce(capsys, 1, "closed-form maxima", ok,
             f"max |kkt - closed| = {worst_kkt:.2e}, max brute excess = {worst_excess:.2e}, {elapsed:.1f} s")


def test_criterion_2_certificates(capsys):
    start = time.perf_counter()
    ks = np.random.default_rng(7).uniform(-10, 10, 50)
    worst_grad, worst_eig, worst_lagr1 = 0.0, -np.inf, -np.inf
    all_certified = True
    for family in quadopt.FAMILIES:
        for n in range(2, 9):
            fam = QuadraticFamily(family, n)
            for k in ks:
                cert = quadopt.certify_constrained_max(fam, k, quadopt.kkt_solve(fam, k).point)
                all_certified &= cert.is_global_max
                worst_grad = max(worst_grad, cert.tangential_gradient_norm)
                top = cert.restricted_hessian_spectrum.max_eigenvalue
                worst_eig = max(worst_eig, top)
                if family == "lagr1":
                    worst_lagr1 = max(worst_lagr1, top)
    elapsed = time.perf_counter() - start
    ok = worst_grad < 1e-8 and worst_eig < 1e-8 and worst_lagr1 < -1e-8 and all_certified and elapsed < 1
    announce(capsys, 2, "maximum certificates", ok,
             f"grad {worst_grad:.2e}, max eig {worst_eig:.2e}, lagr1 max eig {worst_lagr1:.3f}, {elapsed:.2f} s")


def test_criterion_3_sphere_equality(capsys):
    start = time.perf_counter()
    worst = 0.0
    for r in (0.5, 1.0, 2.0):
        imm, ambient = catalog.sphere(2, r)
        rng = np.random.default_rng(3)
        points = imm.sample_points(rng, 20)
        for u, X in zip(points, rng.standard_normal((20, 2))):
            rep = bounds.verify_point(imm, ambient, u, X)
            worst = max(worst, abs(rep.ric - rep.bound_thm21))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-5 and elapsed < 5
    announce(capsys, 3, "S^2(r) equality in the real bound", ok, f"max |Ric - bound| = {worst:.2e}, {elapsed:.2f} s")


def test_criterion_4_equatorial_sphere(capsys):
    start = time.perf_counter()
    imm, ambient = catalog.equatorial_sphere(2, 1.0)
    rng = np.random.default_rng(4)
    reps = [bounds.verify_point(imm, ambient, u, X)
            for u, X in zip(imm.sample_points(rng, 20), rng.standard_normal((20, 2)))]
    ric_err = max(abs(r.ric - 1.0) for r in reps)
    h2 = max(r.h_norm_sq for r in reps)
    gap = max(abs(r.gaps["2.1"]) for r in reps)
    elapsed = time.perf_counter() - start
    ok = ric_err < 1e-5 and h2 < 1e-8 and gap < 1e-5 and elapsed < 5
    announce(capsys, 4, "equatorial sphere in the c = 1 sphere", ok,
             f"|Ric - 1| = {ric_err:.2e}, |H|^2 = {h2:.2e}, |gap| = {gap:.2e}, {elapsed:.2f} s")


@pytest.mark.parametrize(
    "radii, b31, b32",
    [((1.0, 1.0), 0.5, 0.25), ((1.0, 2.0), 0.3125, 0.15625)],
)
def test_criterion_5_lagrangian_improvement(capsys, radii, b31, b32):
    # |H|^2 = (1/r1^2 + 1/r2^2)/4, bound 3.1 = |H|^2, bound 3.2 = |H|^2/2 at n = 2
    start = time.perf_counter()
    imm, ambient = catalog.flat_torus(radii)
    rng = np.random.default_rng(5)
    reps = [bounds.verify_point(imm, ambient, u, X)
            for u, X in zip(imm.sample_points(rng, 20), rng.standard_normal((20, 2)))]
    ric = max(abs(r.ric) for r in reps)
    e31 = max(abs(r.bound_thm31 - b31) for r in reps)
    e32 = max(abs(r.bound_thm32 - b32) for r in reps)
    diff = max(abs((r.bound_thm31 - r.bound_thm32) - r.n / 4 * r.h_norm_sq) for r in reps)
    expected_diff = b31 - b32
    diff_val = max(abs((r.bound_thm31 - r.bound_thm32) - expected_diff) for r in reps)
    holds = all(r.holds["3.2"] and r.bound_thm32 < r.bound_thm31 for r in reps)
    elapsed = time.perf_counter() - start
    ok = ric < 1e-5 and e31 < 1e-6 and e32 < 1e-6 and diff < 1e-6 and diff_val < 1e-6 and holds and elapsed < 5
    announce(capsys, 5, f"Lagrangian bound on torus {radii}", ok,
             f"|Ric| = {ric:.1e}, 3.1 err {e31:.1e}, 3.2 err {e32:.1e}, improvement {expected_diff}, {elapsed:.2f} s")


def test_criterion_6_lagrangian_identities(capsys):
    start = time.perf_counter()
    worst = {}
    cases = {
        "torus(1,1)": catalog.flat_torus((1.0, 1.0)),
        "torus(1,2)": catalog.flat_torus((1.0, 2.0)),
        "R^2 in C^2": catalog.real_subspace(2),
    }
    for name, (imm, ambient) in cases.items():
        rng = np.random.default_rng(6)
        for u, X in zip(imm.sample_points(rng, 100), rng.standard_normal((100, 2))):
            res = bounds.lagrangian_identities_at(imm, ambient, u, X=X)
            worst[name] = max(worst.get(name, 0.0), *res.values())
    elapsed = time.perf_counter() - start
    ok = max(worst.values()) < 1e-6 and elapsed < 10
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    announce(capsys, 6, "Lagrangian identities", ok, f"{detail}, {elapsed:.2f} s")


def test_criterion_7_gauss_vs_oracle(capsys):
    start = time.perf_counter()
    worst = {}
    for entry in catalog.CATALOG.values():
        if entry.ambient != sf.EUCLIDEAN:
            continue
        imm, ambient = entry.build()
        for u in imm.sample_points(np.random.default_rng(7), 20):
            frame, _, curv = geometry.curvature_at(imm, ambient, u)
            oracle = geometry.christoffel_oracle(imm, u).in_frame(frame)
            worst[entry.id] = max(worst.get(entry.id, 0.0), float(np.max(np.abs(curv.R - oracle.R))))
    elapsed = time.perf_counter() - start
    ok = max(worst.values()) < 1e-4 and elapsed < 30
    announce(capsys, 7, "Gauss equation vs intrinsic oracle", ok,
             f"{len(worst)} manifolds, max diff {max(worst.values()):.1e}, {elapsed:.2f} s")


def test_criterion_8_critical_planes(capsys):
    start = time.perf_counter()
    imm, ambient = catalog.product_spheres(1.0, 0.5)
    u = imm.sample_points(np.random.default_rng(8), 1)[0]
    _, _, curv = geometry.curvature_at(imm, ambient, u)
    plane = critplane.minimize_sectional(curv, seed=8)
    scan = critplane.plane_scan(curv)
    residual = critplane.critical_residual(curv, plane)
    e = np.eye(4)
    tilted = critplane.critical_residual(curv, TangentPlane((e[0] + e[2]) / np.sqrt(2), e[1], 0.0))
    elapsed = time.perf_counter() - start
    ok = (abs(plane.K) < 1e-3 and abs(plane.K - scan["min_K"]) < 1e-3 and residual < 1e-4
          and tilted > 0.1 and elapsed < 10)
    announce(capsys, 8, "critical planes on S^2(1) x S^2(1/2)", ok,
             f"K* = {plane.K:.1e}, scan {scan['min_K']:.1e}, residual {residual:.1e}, tilted {tilted:.2f}, "
             f"{elapsed:.2f} s")


def test_criterion_9_catalog_sweeps(capsys):
    cfg = RunConfig(command="verify", manifold="all", samples=100, seed=9, format="json")
    outputs, times, codes = [], [], []
    for _ in range(2):
        buf, err = io.StringIO(), io.StringIO()
        start = time.perf_counter()
        codes.append(run(cfg, buf, err))
        times.append(time.perf_counter() - start)
        outputs.append(buf.getvalue())
    report = json.loads(outputs[0])
    violations = report["summary"]["violations"]
    skipped = sum(len(r["skipped"]) for r in report["results"])
    identical = outputs[0] == outputs[1]
    ok = codes == [0, 0] and violations == 0 and identical and max(times) < 60
    announce(capsys, 9, "full-catalog sweeps", ok,
             f"{len(report['results'])} manifolds, {violations} violations, {skipped} skipped, "
             f"byte-identical {identical}, {max(times):.1f} s per run")
