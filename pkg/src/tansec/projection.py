"""Linear projection from a point, ramification loci, and center recovery.

For a center P with graph-chart affine coordinates (P1, P2), membership of P
in the tangent space at (u, f(u)) is the equation

    g_P(u) = f(u) + f_u(u) (P1 - u) - P2 = 0,

so the ramification locus of the projection from P is computed by multi-start
damped Newton on g_P — no completeness guarantee, but the start statistics
make partiality visible.  Recovery then intersects tangent frames pairwise at
the found points and takes the consensus cluster; a legitimate run on a
generic center has one dominant cluster, so a split vote is surfaced as
NoConsensus rather than papered over.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    CenterHitError,
    InsufficientPointsError,
    NoConsensusError,
    TansecError,
)
from .linalg import chordal_distance, numerical_rank
from .newton import NewtonConfig, damped_newton
from .poly import random_point
from .tangent import Certificate, tan_is_full, tangent_frame, tangent_intersection
from .errors import NonTransverseError

CONSENSUS_RADIUS = 1e-6
RECOVERY_TOL = 1e-6


class Center:
    """A projection center: a point of P^(2n), usually given in the graph
    chart as affine blocks (P1, P2) of length n each."""

    __slots__ = ("proj", "n")

    def __init__(self, proj, n: int):
        proj = np.asarray(proj, dtype=complex)
        if proj.shape != (2 * n + 1,):
            raise ValueError("projective representative must have length 2n+1")
        if not np.any(proj):
            raise ValueError("projective representative must be nonzero")
        self.proj = proj
        self.n = n

    @classmethod
    def from_affine(cls, p1, p2) -> "Center":
        p1 = np.asarray(p1, dtype=complex)
        p2 = np.asarray(p2, dtype=complex)
        if p1.shape != p2.shape or p1.ndim != 1:
            raise ValueError("affine blocks must be vectors of equal length")
        return cls(np.concatenate([[1.0], p1, p2]), len(p1))

    @classmethod
    def from_projective(cls, coords) -> "Center":
        coords = np.asarray(coords, dtype=complex)
        if coords.ndim != 1 or coords.shape[0] % 2 == 0:
            raise ValueError("projective coordinates must have odd length 2n+1")
        return cls(coords, (coords.shape[0] - 1) // 2)

    def affine(self) -> tuple[np.ndarray, np.ndarray]:
        """Chart-affine blocks (P1, P2); requires a nonzero leading coordinate."""
        lead = self.proj[0]
        if abs(lead) <= 1e-12 * float(np.abs(self.proj).max()):
            raise ValueError("center lies on the hyperplane at infinity of the chart")
        aff = self.proj[1:] / lead
        return aff[: self.n], aff[self.n :]

    def __repr__(self) -> str:
        return f"Center({self.proj.tolist()!r})"


def project(P: Center, x, tol: float = 1e-9) -> np.ndarray:
    """Image of a projective point under the linear projection from P.

    The projection is the fixed surjection C^(2n+1) -> C^(2n) that deletes
    the coordinate of P's largest-modulus entry after subtracting the induced
    multiple of P, so its kernel is exactly the line through P.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != P.proj.shape:
        raise ValueError("point and center live in different spaces")
    k = int(np.argmax(np.abs(P.proj)))
    q = P.proj / P.proj[k]
    y = x - x[k] * q
    if np.linalg.norm(y) <= tol * np.linalg.norm(x):
        raise CenterHitError("point coincides with the projection center")
    return np.delete(y, k)


# -- ramification ------------------------------------------------------------------


def ramification_residual(G, P: Center, u) -> np.ndarray:
    """g_P(u) = f(u) + f_u(u) (P1 - u) - P2; zero iff P lies in the tangent
    space at (u, f(u))."""
    u = np.asarray(u, dtype=complex)
    p1, p2 = P.affine()
    jet = G.jet_at(u)
    return jet.value + jet.jacobian @ (p1 - u) - p2


def ramification_jacobian(G, P: Center, u) -> np.ndarray:
    """dg_P(eta) = f_uu(u)[P1 - u, eta]; the first-order terms cancel."""
    u = np.asarray(u, dtype=complex)
    p1, _ = P.affine()
    jet = G.jet_at(u)
    return np.einsum("ikl,k->il", jet.hessian, p1 - u)


@dataclass
class RamificationSet:
    """Converged, deduplicated solutions of g_P = 0 plus solver statistics.

    An empty ``points`` list is the no-solutions verdict, not an exception;
    ``starts``/``converged`` expose how hard the solver tried.
    """

    points: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    starts: int = 0
    converged: int = 0

    def __len__(self) -> int:
        return len(self.points)

    @property
    def found(self) -> bool:
        return bool(self.points)


def ramification_points(
    G, P: Center, cfg: NewtonConfig | None = None, rng: random.Random | None = None
) -> RamificationSet:
    """Multi-start damped Newton on g_P from complex starts in a box centered
    at P1 (for quadratic graphs the residual is a quadratic centered there, so
    its root basins are symmetric around that point).

    Starts are complex because the locus generally contains non-real points.
    Converged points are sorted lexicographically by (real, imaginary) parts
    before deduplication, so the output does not depend on completion order.
    """
    cfg = cfg or NewtonConfig()
    rng = rng or random.Random(0)
    n = G.n
    p1, _ = P.affine()

    def g(u):
        return ramification_residual(G, P, u)

    def dg(u):
        return ramification_jacobian(G, P, u)

    candidates = []
    converged = 0
    for _ in range(cfg.starts):
        start = p1 + random_point(n, cfg.box, rng)
        try:
            result = damped_newton(g, dg, start, cfg)
        except TansecError:
            # chart-backed jets can fail outside their region; abandon the start
            continue
        if result.converged and result.residual <= cfg.tol:
            candidates.append(result.point)
            converged += 1

    candidates.sort(key=lambda u: tuple((z.real, z.imag) for z in u))
    reps: list[np.ndarray] = []
    for c in candidates:
        if all(np.linalg.norm(c - r) > cfg.dedup_radius for r in reps):
            reps.append(c)
    residuals = [float(np.linalg.norm(g(r))) for r in reps]
    return RamificationSet(points=reps, residuals=residuals, starts=cfg.starts, converged=converged)


def tangent_membership(G, P: Center, u, tol: float | None = None) -> bool:
    """Check that P lies in the tangent space at (u, f(u)): appending P to
    the tangent frame must not raise the rank."""
    frame = tangent_frame(G, u)
    stacked = np.vstack([frame.matrix, P.proj[None, :]])
    return numerical_rank(stacked, tol).rank == G.n + 1


# -- recovery ----------------------------------------------------------------------


def recover_center(G, R: RamificationSet, tol: float = CONSENSUS_RADIUS):
    """Recover the projection center from its ramification locus.

    Every transverse pair of tangent frames at points of R is intersected;
    the resulting projective points are clustered in the chordal metric and
    the consensus of the largest cluster is returned together with spread
    statistics.  Raises InsufficientPoints for |R| < 2 and NoConsensus when
    the largest cluster holds fewer than half of the computed pairs.
    """
    if len(R) < 2:
        raise InsufficientPointsError(f"need at least 2 ramification points, got {len(R)}")
    frames = [tangent_frame(G, u) for u in R.points]
    pair_points = []
    skipped = 0
    for i, j in combinations(range(len(frames)), 2):
        try:
            pair_points.append(tangent_intersection(frames[i], frames[j]))
        except NonTransverseError:
            skipped += 1
    if not pair_points:
        raise NoConsensusError("every frame pair met non-transversally")

    clusters: list[list[int]] = []
    for idx, pt in enumerate(pair_points):
        for cluster in clusters:
            if chordal_distance(pt, pair_points[cluster[0]]) <= tol:
                cluster.append(idx)
                break
        else:
            clusters.append([idx])
    largest = max(clusters, key=len)
    if 2 * len(largest) < len(pair_points):
        raise NoConsensusError(
            f"largest cluster holds {len(largest)} of {len(pair_points)} pairs"
        )

    members = [pair_points[i] for i in largest]
    sums = [sum(chordal_distance(m, other) for other in members) for m in members]
    consensus = members[int(np.argmin(sums))]
    spread = max(
        (chordal_distance(a, b) for a, b in combinations(members, 2)), default=0.0
    )
    report = {
        "pairs_total": len(pair_points) + skipped,
        "pairs_used": len(pair_points),
        "pairs_skipped": skipped,
        "cluster_size": len(largest),
        "spread": spread,
    }
    return consensus, report


@dataclass
class RoundtripReport:
    """Outcome of project -> ramify -> recover against a known center."""

    status: str  # success | failed | hypothesis_not_met | insufficient_points | no_consensus
    fullness: Certificate
    ramification: RamificationSet | None = None
    recovered: np.ndarray | None = None
    distance: float | None = None
    consensus: dict | None = None

    @property
    def succeeded(self) -> bool:
        return self.status == "success"


def roundtrip(
    G,
    P: Center,
    cfg: NewtonConfig | None = None,
    rng: random.Random | None = None,
    trials: int = 100,
    tol: float = RECOVERY_TOL,
) -> RoundtripReport:
    """Chordal distance between P and the center recovered from its own
    ramification locus.

    When the fullness certificate fails, the uniqueness claim does not apply
    and the report says so instead of asserting recovery.
    """
    fullness = tan_is_full(G, trials=trials)
    if not fullness.holds:
        return RoundtripReport(status="hypothesis_not_met", fullness=fullness)
    ram = ramification_points(G, P, cfg, rng)
    try:
        recovered, consensus = recover_center(G, ram)
    except InsufficientPointsError:
        return RoundtripReport(status="insufficient_points", fullness=fullness, ramification=ram)
    except NoConsensusError:
        return RoundtripReport(status="no_consensus", fullness=fullness, ramification=ram)
    distance = chordal_distance(recovered, P.proj)
    return RoundtripReport(
        status="success" if distance <= tol else "failed",
        fullness=fullness,
        ramification=ram,
        recovered=recovered,
        distance=distance,
        consensus=consensus,
    )
