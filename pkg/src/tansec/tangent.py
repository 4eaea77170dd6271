"""Tangent frames, fullness and dominance certificates, secant estimates.

Everything here works in a normalized graph chart u -> (u, f(u)) with
f(0) = 0 and f_u(0) = 0.  The central object is the Hessian contraction

    H(u)[i][j] = sum_k f_uu(0)[i][j][k] u_k

whose generic nondegeneracy decides whether the union of tangent spaces fills
the ambient projective space.  "Generic" claims are certified two ways:
exact randomized identity testing where a polynomial identity underlies the
claim, and 95%-of-samples thresholds where only an open dense condition does.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    DegenerateInputError,
    NonTransverseError,
    NotNormalizedError,
    SingularMatrixError,
    SingularTangentJacobianError,
    TansecError,
)
from .linalg import (
    RANK_EPS,
    RankResult,
    exact_det,
    exact_rank_result,
    numerical_rank,
    solve,
    subspace_intersection,
)
from .poly import (
    GaussianRational,
    Polynomial,
    poly_matrix_det,
    random_point,
    random_rational_point,
)
from .variety import GraphVariety

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"

EXACT_SYMBOLIC = "exact_symbolic"
SCHWARTZ_ZIPPEL = "schwartz_zippel"
FLOAT_SAMPLING = "float_sampling"

# fraction of trials that must succeed before a sampled claim is certified
SUCCESS_FRACTION = 0.95


@dataclass
class Certificate:
    """Verdict plus the evidence behind it.

    A sampling verdict of ``holds`` requires successes >= ceil(0.95 trials);
    exact methods prove their verdict outright (a nonzero witness under
    randomized identity testing is itself a proof).  ``error_bound`` is the
    one-sided failure probability reported by identity testing when every
    sample vanished.
    """

    verdict: str
    method: str
    trials: int
    successes: int
    tolerance: float | None = None
    witness: object = None
    error_bound: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS


def _sampled_verdict(successes: int, trials: int) -> str:
    if trials > 0 and successes >= math.ceil(SUCCESS_FRACTION * trials):
        return HOLDS
    if successes == 0:
        return FAILS
    return INCONCLUSIVE


def require_normalized(G) -> None:
    """Graphs must satisfy f(0)=0, f_u(0)=0 exactly; charts do by construction."""
    if isinstance(G, GraphVariety) and not G.normalized:
        raise NotNormalizedError("graph is not normalized at the origin")


# -- tangent frames ---------------------------------------------------------------


@dataclass
class TangentFrame:
    """Basis of the affine cone of the projective tangent space at a point.

    Row 0 holds the homogeneous coordinates [1 : u : f(u)] of the point; row
    j holds the direction [0 : e_j : f_u(u) e_j].  Rows are checked for full
    rank at construction.
    """

    point: np.ndarray
    matrix: np.ndarray


def tangent_frame(G, u) -> TangentFrame:
    u = np.asarray(u, dtype=complex)
    n = G.n
    jet = G.jet_at(u)
    M = np.zeros((n + 1, 2 * n + 1), dtype=complex)
    M[0, 0] = 1.0
    M[0, 1 : n + 1] = u
    M[0, n + 1 :] = jet.value
    for j in range(n):
        M[j + 1, 1 + j] = 1.0
        M[j + 1, n + 1 :] = jet.jacobian[:, j]
    if numerical_rank(M).rank < n + 1:
        raise DegenerateInputError("tangent frame rows are not independent")
    return TangentFrame(point=u, matrix=M)


def tangent_intersection(F1: TangentFrame, F2: TangentFrame, tol: float | None = None) -> np.ndarray:
    """The unique projective point where two tangent spans meet.

    Normalized so the largest-modulus coordinate is 1.  Raises NonTransverse
    when the intersection is not one-dimensional (identical spans included);
    the caller resamples, since single-point intersections are only promised
    for generic pairs.
    """
    X = subspace_intersection(F1.matrix, F2.matrix, tol)
    if X.shape[0] != 1:
        raise NonTransverseError(X.shape[0])
    x = X[0]
    return x / x[int(np.argmax(np.abs(x)))]


# -- Hessian contraction -------------------------------------------------------------


def hessian_contraction(T, u) -> np.ndarray:
    """H(u)[i][j] = sum_k T[i][j][k] u_k for a float tensor T."""
    T = np.asarray(T, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if T.ndim != 3 or T.shape[1] != T.shape[2] or T.shape[2] != u.shape[0]:
        raise ValueError("tensor and point dimensions do not match")
    return np.einsum("ijk,k->ij", T, u)


def hessian_contraction_exact(T, xi) -> list[list[GaussianRational]]:
    n = len(xi)
    xs = [GaussianRational.coerce(x) for x in xi]
    out = []
    for Ti in T:
        row = []
        for j in range(n):
            acc = GaussianRational(0)
            for k in range(n):
                acc = acc + Ti[j][k] * xs[k]
            row.append(acc)
        out.append(row)
    return out


def hessian_poly_matrix(G: GraphVariety) -> list[list[Polynomial]]:
    """H(u) with symbolic entries: linear polynomials in u."""
    T = G.hessian0_exact()
    n = G.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            p = Polynomial.zero(n)
            for k in range(n):
                if T[i][j][k]:
                    p = p + Polynomial.variable(n, k) * T[i][j][k]
            row.append(p)
        out.append(row)
    return out


def _symbolic_witness(det: Polynomial, n: int) -> tuple | None:
    """Deterministic search for a point where the determinant is nonzero."""
    candidates = [tuple(Fraction(1) for _ in range(n)), tuple(Fraction(k + 1) for k in range(n))]
    rng = random.Random(0)
    for _ in range(200):
        for cand in candidates:
            if det.eval_exact(cand):
                return cand
        candidates = [random_rational_point(n, 10 * (n + 1), rng)]
    return None


def tan_is_full(G, trials: int = 100, rng: random.Random | None = None, max_symbolic_dim: int = 4) -> Certificate:
    """Decide whether det H(u) vanishes identically.

    Exact graph inputs are normalized at the origin first.  Dimensions up to
    ``max_symbolic_dim`` expand the determinant symbolically over exact
    scalars; larger ones use randomized identity testing at integer points
    with coordinates in [-B, B], B = 2*n*trials, where any nonzero exact
    evaluation is a proof and an all-zero run reports failure probability
    (n / 2B)^trials.  Chart inputs fall back to float sampling of the
    smallest-to-largest singular value ratio.
    """
    if isinstance(G, GraphVariety):
        Gn = G.normalized_at_origin()
        n = Gn.n
        Hpoly = hessian_poly_matrix(Gn)
        if n <= max_symbolic_dim:
            det = poly_matrix_det(Hpoly)
            if det.is_zero:
                return Certificate(
                    verdict=FAILS,
                    method=EXACT_SYMBOLIC,
                    trials=1,
                    successes=0,
                    details={"determinant": "0"},
                )
            witness = _symbolic_witness(det, n)
            details = {"determinant": det.to_expr()}
            if witness is not None:
                details["determinant_at_witness"] = str(det.eval_exact(witness))
            return Certificate(
                verdict=HOLDS,
                method=EXACT_SYMBOLIC,
                trials=1,
                successes=1,
                witness=witness,
                details=details,
            )
        rng = rng or random.Random(0)
        T = Gn.hessian0_exact()
        B = 2 * n * trials
        for t in range(trials):
            xi = random_rational_point(n, B, rng)
            d = exact_det(hessian_contraction_exact(T, xi))
            if d:
                return Certificate(
                    verdict=HOLDS,
                    method=SCHWARTZ_ZIPPEL,
                    trials=t + 1,
                    successes=1,
                    witness=xi,
                    details={"determinant_at_witness": str(d), "box": B},
                )
        return Certificate(
            verdict=FAILS,
            method=SCHWARTZ_ZIPPEL,
            trials=trials,
            successes=0,
            error_bound=(n / (2 * B)) ** trials,
            details={"box": B},
        )

    # chart input: only float jets are available
    rng = rng or random.Random(0)
    n = G.n
    T = G.hessian0()
    tol = 1e-8
    successes = 0
    witness = None
    for _ in range(trials):
        u = random_point(n, 1.0, rng)
        s = np.linalg.svd(hessian_contraction(T, u), compute_uv=False)
        if s[0] > 0 and s[-1] > tol * s[0]:
            successes += 1
            if witness is None:
                witness = u
    return Certificate(
        verdict=_sampled_verdict(successes, trials),
        method=FLOAT_SAMPLING,
        trials=trials,
        successes=successes,
        tolerance=tol,
        witness=witness,
    )


def tangent_bundle_rank_check(G, xi) -> RankResult:
    """Rank of the block matrix [[E_n, E_n], [H(xi), 0]].

    This is the differential of (u, xi) -> (u + xi, f(u) + f_u(u) xi) at the
    chart origin; its rank must equal n + rank H(xi), which cross-checks the
    fullness test.  Exact inputs take the exact path.
    """
    require_normalized(G)
    n = G.n
    exact_point = all(isinstance(x, (int, Fraction, GaussianRational)) for x in xi)
    if isinstance(G, GraphVariety) and exact_point:
        H = hessian_contraction_exact(G.hessian0_exact(), xi)
        zero = GaussianRational(0)
        one = GaussianRational(1)
        block = []
        for i in range(n):
            row = [one if j == i else zero for j in range(n)]
            block.append(row + row[:])
        for i in range(n):
            block.append(H[i] + [zero] * n)
        return exact_rank_result(block)
    H = hessian_contraction(G.hessian0(), np.asarray(xi, dtype=complex))
    block = np.zeros((2 * n, 2 * n), dtype=complex)
    block[:n, :n] = np.eye(n)
    block[:n, n:] = np.eye(n)
    block[n:, :n] = H
    return numerical_rank(block)


# -- secant dimension ------------------------------------------------------------------


def secant_dim_estimate(
    G, trials: int = 100, rng: random.Random | None = None, box: float = 1.0
) -> tuple[int, Certificate]:
    """Estimate dim Sec X as (max rank of two stacked tangent frames) - 1.

    The tangent space to the secant variety at a generic point of a secant
    line is spanned by the two tangent spaces, so the stacked frame rank
    carries the dimension.  The certificate records the rank distribution;
    it holds when at least 95% of the sampled pairs achieve the maximum.
    """
    rng = rng or random.Random(0)
    n = G.n
    distribution: dict[int, int] = {}
    failures = 0
    for _ in range(trials):
        u = random_point(n, box, rng)
        v = random_point(n, box, rng)
        try:
            stacked = np.vstack([tangent_frame(G, u).matrix, tangent_frame(G, v).matrix])
        except TansecError:
            # chart-backed jets can fail outside their region
            failures += 1
            continue
        r = numerical_rank(stacked).rank
        distribution[r] = distribution.get(r, 0) + 1
    if not distribution:
        return -1, Certificate(
            verdict=INCONCLUSIVE,
            method=FLOAT_SAMPLING,
            trials=trials,
            successes=0,
            tolerance=RANK_EPS,
            details={"evaluation_failures": failures},
        )
    best = max(distribution)
    successes = distribution[best]
    details = {"rank_distribution": {str(k): v for k, v in sorted(distribution.items())}}
    if failures:
        details["evaluation_failures"] = failures
    cert = Certificate(
        verdict=_sampled_verdict(successes, trials),
        method=FLOAT_SAMPLING,
        trials=trials,
        successes=successes,
        tolerance=RANK_EPS,
        details=details,
    )
    return best - 1, cert


# -- the chart-origin projection map p ---------------------------------------------------


def p_map(G, u) -> np.ndarray:
    """Affine coordinates of the point where the tangent space at (u, f(u))
    meets the chart-origin tangent plane C^n x 0: p(u) = u - f_u(u)^-1 f(u)."""
    u = np.asarray(u, dtype=complex)
    jet = G.jet_at(u)
    try:
        correction = solve(jet.jacobian, jet.value)
    except SingularMatrixError as exc:
        raise SingularTangentJacobianError(str(exc)) from exc
    return u - correction


def p_jacobian_closed(G, u) -> np.ndarray:
    """Differential of p in closed form.

    Differentiating p(u) = u - f_u(u)^-1 f(u) directly gives

        dp(eta) = f_u(u)^-1 . f_uu(u)[ f_u(u)^-1 f(u), eta ]

    (the identity terms cancel); the scalar case f = u^2 reproduces 1/2.
    """
    u = np.asarray(u, dtype=complex)
    jet = G.jet_at(u)
    try:
        w = solve(jet.jacobian, jet.value)
        contracted = np.einsum("ikl,k->il", jet.hessian, w)
        return solve(jet.jacobian, contracted)
    except SingularMatrixError as exc:
        raise SingularTangentJacobianError(str(exc)) from exc


def p_jacobian_fd(G, u, h: float = 1e-5) -> np.ndarray:
    """Independent central-difference approximation of the differential of p."""
    u = np.asarray(u, dtype=complex)
    n = G.n
    step = h * max(1.0, float(np.linalg.norm(u)))
    cols = []
    for k in range(n):
        e = np.zeros(n)
        e[k] = step
        cols.append((p_map(G, u + e) - p_map(G, u - e)) / (2 * step))
    return np.column_stack(cols)


def dominance_certificate(
    G, trials: int = 100, rng: random.Random | None = None, box: float = 0.1
) -> Certificate:
    """Certify that u -> p(u) has full-rank differential at random points.

    The sampling box is small because the underlying argument is local; points
    where the graph Jacobian itself is singular are counted separately (their
    generic occurrence signals that the tangent variety is not full).
    """
    require_normalized(G)
    rng = rng or random.Random(0)
    n = G.n
    successes = 0
    singular = 0
    failures = 0
    witness = None
    for _ in range(trials):
        u = random_point(n, box, rng)
        try:
            Jp = p_jacobian_closed(G, u)
        except SingularTangentJacobianError:
            singular += 1
            continue
        except TansecError:
            failures += 1
            continue
        if numerical_rank(Jp).rank == n:
            successes += 1
            if witness is None:
                witness = u
    details = {"full_rank": successes, "singular_jacobian": singular}
    if failures:
        details["evaluation_failures"] = failures
    return Certificate(
        verdict=_sampled_verdict(successes, trials),
        method=FLOAT_SAMPLING,
        trials=trials,
        successes=successes,
        tolerance=RANK_EPS,
        witness=witness,
        details=details,
    )
