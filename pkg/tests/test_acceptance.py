"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance and time budget is pinned here.
"""

import cmath
import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from tansec.cli import main
from tansec.linalg import chordal_distance, exact_rank, orthonormal_rows, subspace_intersection
from tansec.newton import NewtonConfig
from tansec.poly import parse_map, parse_poly, random_point, random_rational_point
from tansec.projection import Center, ramification_points, recover_center, roundtrip
from tansec.registry import BUILTINS, FULL_TANGENT, get
from tansec.tangent import (
    EXACT_SYMBOLIC,
    FAILS,
    HOLDS,
    dominance_certificate,
    hessian_contraction_exact,
    p_jacobian_closed,
    p_jacobian_fd,
    p_map,
    tan_is_full,
    tangent_bundle_rank_check,
    tangent_frame,
    tangent_intersection,
)
from tansec.variety import GraphVariety


def graph_of(name: str) -> GraphVariety:
    return get(name).to_variety()


POSITIVE = [graph_of(name) for name in FULL_TANGENT]
PURE_QUADRATIC = [graph_of(n) for n in ("conic", "quadric-pair", "mixed-surface")]
CYLINDER = graph_of("cylinder")


@contextmanager
def criterion(num: int, name: str, budget: float):
    t0 = time.perf_counter()
    try:
        yield
    except Exception:
        print(f"\ncriterion {num:2d} [{name}] FAIL ({time.perf_counter() - t0:.2f}s)")
        raise
    elapsed = time.perf_counter() - t0
    within = elapsed <= budget
    print(
        f"\ncriterion {num:2d} [{name}] {'PASS' if within else 'FAIL'} "
        f"({elapsed:.2f}s, budget {budget:.0f}s)"
    )
    assert within, f"time budget exceeded: {elapsed:.2f}s > {budget}s"


def test_criterion_01_fullness_exact_suite():
    with criterion(1, "fullness exact suite", 1.0):
        c_qp = tan_is_full(graph_of("quadric-pair"))
        assert c_qp.verdict == HOLDS and c_qp.method == EXACT_SYMBOLIC
        assert parse_poly(c_qp.details["determinant"], 2) == parse_poly("4*u1*u2", 2)

        c_mx = tan_is_full(graph_of("mixed-surface"))
        assert c_mx.verdict == HOLDS and c_mx.method == EXACT_SYMBOLIC
        assert parse_poly(c_mx.details["determinant"], 2) == parse_poly("2*u1^2", 2)

        c_cy = tan_is_full(CYLINDER)
        assert c_cy.verdict == FAILS and c_cy.method == EXACT_SYMBOLIC


def test_criterion_02_bundle_rank_cross_check():
    with criterion(2, "bundle rank cross-check", 5.0):
        rng = random.Random(202)
        for vf in BUILTINS:
            g = vf.to_variety().normalized_at_origin()
            T = g.hessian0_exact()
            for _ in range(100):
                xi = random_rational_point(g.n, 100, rng)
                block_rank = tangent_bundle_rank_check(g, xi).rank
                assert block_rank == g.n + exact_rank(hessian_contraction_exact(T, xi))


def test_criterion_03_differential_closed_vs_fd():
    with criterion(3, "closed vs finite-difference differential", 5.0):
        # scalar anchors first
        conic = graph_of("conic")
        perturbed = graph_of("perturbed-conic")
        assert abs(p_jacobian_closed(conic, [0.42])[0, 0] - 0.5) <= 1e-10
        assert abs(p_jacobian_closed(perturbed, [1.0])[0, 0] - Fraction(16, 25)) <= 1e-10
        assert abs(p_jacobian_fd(perturbed, [1.0])[0, 0] - Fraction(16, 25)) <= 1e-8

        rng = random.Random(303)
        for g in POSITIVE:
            done = 0
            while done < 100:
                u = random_point(g.n, 0.4, rng)
                if np.linalg.norm(u) < 0.05:
                    continue
                closed = p_jacobian_closed(g, u)
                fd = p_jacobian_fd(g, u)
                scale = max(1.0, float(np.abs(closed).max()))
                assert np.abs(closed - fd).max() / scale <= 1e-6
                done += 1


def test_criterion_04_dominance_certificates():
    with criterion(4, "dominance certificates", 10.0):
        for i, g in enumerate(POSITIVE):
            cert = dominance_certificate(g, trials=100, rng=random.Random(400 + i), box=0.1)
            assert cert.verdict == HOLDS, f"example {i} should dominate"
        cyl = dominance_certificate(CYLINDER, trials=100, rng=random.Random(404), box=0.1)
        assert cyl.verdict == FAILS
        assert cyl.details["singular_jacobian"] == 100


def test_criterion_05_near_origin_limit():
    with criterion(5, "near-origin limit of the differential", 5.0):
        rng = np.random.default_rng(505)
        for g in POSITIVE:
            for _ in range(10):
                u = rng.normal(size=g.n) + 1j * rng.normal(size=g.n)
                u /= np.linalg.norm(u)
                J = p_jacobian_closed(g, 1e-3 * u)
                assert np.linalg.norm(J - 0.5 * np.eye(g.n)) <= 1e-2
        # exact halving law for purely quadratic graphs
        rng2 = random.Random(505)
        for g in PURE_QUADRATIC:
            for _ in range(10):
                u = random_point(g.n, 0.3, rng2)
                assert np.linalg.norm(p_map(g, u) - u / 2) <= 1e-12


def test_criterion_06_cross_path_agreement():
    with criterion(6, "p map vs frame intersection", 10.0):
        for i, g in enumerate(POSITIVE):
            rng = random.Random(600 + i)
            box = 0.1 / np.sqrt(2 * g.n)
            frame0 = tangent_frame(g, np.zeros(g.n))
            good = 0
            for _ in range(100):
                u = random_point(g.n, box, rng)
                assert np.linalg.norm(u) <= 0.1
                try:
                    point = tangent_intersection(frame0, tangent_frame(g, u))
                    embedded = np.concatenate([[1.0], p_map(g, u), np.zeros(g.n)])
                except Exception:
                    continue
                if chordal_distance(point, embedded) <= 1e-8:
                    good += 1
            assert good >= 95, f"example {i}: only {good}/100 agreements"


def test_criterion_07_curve_roundtrip():
    with criterion(7, "curve roundtrip", 5.0):
        conic = graph_of("conic")
        rt = roundtrip(conic, Center.from_affine([3.0], [5.0]), rng=random.Random(700))
        assert rt.succeeded
        roots = sorted(p[0].real for p in rt.ramification.points)
        assert len(roots) == 2
        assert abs(roots[0] - 1) <= 1e-9 and abs(roots[1] - 5) <= 1e-9
        assert all(abs(p[0].imag) <= 1e-9 for p in rt.ramification.points)
        assert chordal_distance(rt.recovered, [1.0, 3.0, 5.0]) <= 1e-9

        # complex ramification: the locus of (0, 1) is +-i
        R = ramification_points(conic, Center.from_affine([0.0], [1.0]), rng=random.Random(701))
        assert len(R) == 2
        for target in (1j, -1j):
            assert min(abs(p[0] - target) for p in R.points) <= 1e-9


def _random_rational_center(rng: random.Random, n: int) -> Center:
    # prime denominator keeps the center off the discriminant loci: b^2 = d
    # would need 97 | q^2 for a numerator q with |q| < 97
    vals = [Fraction(rng.randint(-96, 96), 97) for _ in range(2 * n)]
    return Center.from_affine([float(v) for v in vals[:n]], [float(v) for v in vals[n:]])


def test_criterion_08_surface_roundtrips():
    with criterion(8, "surface roundtrips", 60.0):
        quadric = graph_of("quadric-pair")
        rng = random.Random(808)
        successes = 0
        for run in range(20):
            P = _random_rational_center(rng, 2)
            (a, b), (c, d) = P.affine()
            R = ramification_points(quadric, P, rng=random.Random(8000 + run))
            # separable quadratic oracle
            exp1 = {a + cmath.sqrt(a * a - c), a - cmath.sqrt(a * a - c)}
            exp2 = {b + cmath.sqrt(b * b - d), b - cmath.sqrt(b * b - d)}
            assert len(R) == 4
            for pt in R.points:
                assert min(abs(pt[0] - e) for e in exp1) <= 1e-8
                assert min(abs(pt[1] - e) for e in exp2) <= 1e-8
            # every pairwise intersection subspace contains P; the transverse
            # ones (diagonal pairs of the 2x2 root grid) equal P
            frames = [tangent_frame(quadric, u) for u in R.points]
            p_hat = P.proj / np.linalg.norm(P.proj)
            for i, j in combinations(range(4), 2):
                X = subspace_intersection(frames[i].matrix, frames[j].matrix)
                q = orthonormal_rows(X)
                assert np.linalg.norm(p_hat - q.T @ (q.conj() @ p_hat)) <= 1e-8
            recovered, report = recover_center(quadric, R)
            if chordal_distance(recovered, P.proj) <= 1e-6:
                successes += 1
        assert successes >= 19, f"quadric-pair recovery {successes}/20"

        mixed = graph_of("mixed-surface")
        successes = 0
        for run in range(20):
            P = _random_rational_center(rng, 2)
            rt = roundtrip(mixed, P, rng=random.Random(8800 + run))
            if rt.succeeded:
                successes += 1
        assert successes >= 19, f"mixed-surface recovery {successes}/20"


def test_criterion_09_negative_control():
    with criterion(9, "cylinder negative control", 10.0):
        rt = roundtrip(CYLINDER, Center.from_affine([0.3, 0.4], [0.5, 0.6]), rng=random.Random(900))
        assert rt.status == "hypothesis_not_met"

        rng = random.Random(901)
        e3 = np.array([0, 0, 1, 0, 0], dtype=complex)
        for _ in range(50):
            F1 = tangent_frame(CYLINDER, random_point(2, 1.0, rng))
            F2 = tangent_frame(CYLINDER, random_point(2, 1.0, rng))
            point = tangent_intersection(F1, F2)
            assert chordal_distance(point, e3) <= 1e-8


def test_criterion_10_report_determinism(tmp_path):
    import contextlib
    import io

    with criterion(10, "machine report determinism", 5.0):
        runs = [
            ("tan-check", "--example", "quadric-pair", "--seed", "11"),
            ("secant-dim", "--example", "conic", "--seed", "11", "--trials", "25"),
            ("dominance", "--example", "mixed-surface", "--seed", "11", "--trials", "25"),
            ("ramify", "--example", "quadric-pair", "--center", "1/4,-1/2,-3/8,5/8", "--seed", "11"),
            ("recover", "--example", "conic", "--center", "3,5", "--seed", "11"),
        ]
        for k, argv in enumerate(runs):
            out1 = tmp_path / f"{k}a.json"
            out2 = tmp_path / f"{k}b.json"
            with contextlib.redirect_stdout(io.StringIO()):
                code1 = main([*argv, "--out", str(out1)])
                code2 = main([*argv, "--out", str(out2)])
            assert code1 == code2
            b1 = out1.read_bytes()
            assert b1 == out2.read_bytes()
            assert json.loads(b1)["seed"] == 11
