"""Variety representations and chart normalization.

The canonical computational form is a graph u -> (u, f(u)) of an n-fold in
C^(2n); every formula downstream is written in these coordinates.  General
polynomial parametrizations are reduced to that form by a linear change of
coordinates A at a base point, chosen so that A maps the tangent directions
onto the first n coordinates:

    A . Dpsi(u0) = [I_n; 0]

The implied graph map of the chart then has value and differential zero at
the origin.  Its second-order jet at 0 equals the second derivatives of the
last-n block of A.psi at u0 (the chain-rule correction carries the first-order
block of those coordinates, which vanishes there); jets away from 0 get the
full correction term.
"""

from __future__ import annotations

import random

import numpy as np

from .errors import NewtonDivergedError, RankDeficientJacobianError
from .linalg import numerical_rank, solve
from .newton import NewtonConfig, NewtonResult, damped_newton
from .poly import Jet2, PolyMap, Polynomial, random_rational_point

# relative threshold under which a candidate pivot row is skipped
_PIVOT_RATIO = 1e-6


def _drop_affine_part(p: Polynomial) -> Polynomial:
    return Polynomial(p.num_vars, {e: c for e, c in p.terms.items() if sum(e) >= 2})


class GraphVariety:
    """An n-fold embedded as u -> (u, f(u)) in affine C^(2n) inside P^(2n)."""

    __slots__ = ("f", "_hess0_exact")

    def __init__(self, f: PolyMap):
        if f.num_components != f.num_vars:
            raise ValueError("graph map must have as many components as variables")
        self.f = f
        self._hess0_exact = None

    @property
    def n(self) -> int:
        return self.f.num_vars

    @property
    def normalized(self) -> bool:
        """Exact check that f(0) = 0 and f_u(0) = 0."""
        return all(
            all(sum(e) >= 2 for e in p.terms)
            for p in self.f.components
        )

    def normalized_at_origin(self) -> "GraphVariety":
        """Subtract the value and linear part at 0, exactly."""
        if self.normalized:
            return self
        return GraphVariety(PolyMap([_drop_affine_part(p) for p in self.f.components]))

    def jet_at(self, u) -> Jet2:
        return self.f.jet2(np.asarray(u, dtype=complex))

    def hessian0_exact(self):
        if self._hess0_exact is None:
            self._hess0_exact = self.f.hessian0_exact()
        return self._hess0_exact

    def hessian0(self) -> np.ndarray:
        T = self.hessian0_exact()
        n = self.n
        return np.array(
            [[[T[i][j][k].to_complex() for k in range(n)] for j in range(n)] for i in range(n)]
        )

    def embed(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=complex)
        return np.concatenate([u, self.f.value_at(u)])

    def as_param(self) -> "ParamVariety":
        n = self.n
        first = [Polynomial.variable(n, i) for i in range(n)]
        return ParamVariety(PolyMap(first + list(self.f.components)))

    def __repr__(self) -> str:
        return f"GraphVariety({self.f!r})"


class ParamVariety:
    """General polynomial parametrization psi: C^n -> C^(2n).

    Generic immersivity (Jacobian rank n) is certified at construction on the
    exact path at a fixed seeded random rational point; whether psi is
    generically injective is not decided here.
    """

    __slots__ = ("psi",)

    _CERT_SEED = 0
    _CERT_BOUND = 10**6

    def __init__(self, psi: PolyMap):
        if psi.num_components != 2 * psi.num_vars:
            raise ValueError("parametrization must have 2n components for n variables")
        self.psi = psi
        point = random_rational_point(psi.num_vars, self._CERT_BOUND, random.Random(self._CERT_SEED))
        from .linalg import exact_rank

        if exact_rank(psi.jacobian_exact(point)) < psi.num_vars:
            raise RankDeficientJacobianError(
                "parametrization jacobian is rank deficient at a random rational point"
            )

    @property
    def n(self) -> int:
        return self.psi.num_vars

    def __repr__(self) -> str:
        return f"ParamVariety({self.psi!r})"


class NormalizedChart:
    """Local graph chart of a parametrized variety at a base point.

    Coordinates are z = A (psi(w) - psi(u0)); the first n entries are the
    graph parameter v and the last n the graph value.  ``back`` is the exact
    inverse of A (the completed matrix the chart was built from).
    """

    __slots__ = ("psi", "u0", "A", "back", "psi0")

    def __init__(self, psi: PolyMap, u0: np.ndarray, A: np.ndarray, back: np.ndarray):
        self.psi = psi
        self.u0 = u0
        self.A = A
        self.back = back
        self.psi0 = psi.value_at(u0)

    @property
    def n(self) -> int:
        return self.psi.num_vars

    def forward(self, w) -> np.ndarray:
        """Chart coordinates of the parameter point w."""
        w = np.asarray(w, dtype=complex)
        return self.A @ (self.psi.value_at(w) - self.psi0)

    def _solve_parameter(self, v: np.ndarray, cfg: NewtonConfig) -> np.ndarray:
        n = self.n

        def residual(w):
            return self.forward(w)[:n] - v

        def jacobian(w):
            return (self.A @ self.psi.jacobian_at(w))[:n]

        result: NewtonResult = damped_newton(residual, jacobian, self.u0 + v, cfg)
        if not result.converged:
            raise NewtonDivergedError(
                f"chart inversion stalled at residual {result.residual:.3e}"
            )
        return result.point

    def graph_eval(self, v, cfg: NewtonConfig | None = None) -> np.ndarray:
        """Value of the implied graph map at v (last n chart coordinates)."""
        cfg = cfg or NewtonConfig()
        v = np.asarray(v, dtype=complex)
        w = self._solve_parameter(v, cfg)
        return self.forward(w)[self.n :]

    def jet_at(self, v, cfg: NewtonConfig | None = None) -> Jet2:
        """Second-order jet of the implied graph map at v.

        With phi = A (psi - psi(u0)) split into blocks (phi1, phi2) and
        K = Dphi1(w)^-1, the graph map is phi2 after inverting phi1, so

            jac  = Dphi2 K
            hess = D2phi2[K., K.] - (Dphi2 K) D2phi1[K., K.]
        """
        cfg = cfg or NewtonConfig()
        v = np.asarray(v, dtype=complex)
        n = self.n
        w = self._solve_parameter(v, cfg)
        jet = self.psi.jet2(w)
        AJ = self.A @ jet.jacobian
        AH = np.einsum("ab,bjk->ajk", self.A, jet.hessian)
        K = solve(AJ[:n], np.eye(n, dtype=complex))
        value = (self.A @ (jet.value - self.psi0))[n:]
        jac = AJ[n:] @ K
        G1 = np.einsum("ijk,ja,kb->iab", AH[:n], K, K)
        G2 = np.einsum("ijk,ja,kb->iab", AH[n:], K, K)
        hess = G2 - np.einsum("il,lab->iab", jac, G1)
        hess = (hess + hess.transpose(0, 2, 1)) / 2
        return Jet2(value=value, jacobian=jac, hessian=hess)

    def hessian0(self) -> np.ndarray:
        """Second-order jet of the graph map at 0, in closed form."""
        jet = self.psi.jet2(self.u0)
        AH = np.einsum("ab,bjk->ajk", self.A, jet.hessian)
        H = AH[self.n :]
        return (H + H.transpose(0, 2, 1)) / 2

    def to_chart_point(self, x_proj) -> np.ndarray:
        """Transform a projective point of the ambient P^(2n) into chart
        projective coordinates."""
        x = np.asarray(x_proj, dtype=complex)
        return np.concatenate([[x[0]], self.A @ (x[1:] - x[0] * self.psi0)])

    def to_ambient_point(self, y_proj) -> np.ndarray:
        y = np.asarray(y_proj, dtype=complex)
        return np.concatenate([[y[0]], self.back @ y[1:] + y[0] * self.psi0])

    def __repr__(self) -> str:
        return f"NormalizedChart(n={self.n}, u0={self.u0!r})"


def normalize_at(V: ParamVariety, u0) -> NormalizedChart:
    """Build the graph chart of V at the parameter point u0.

    The change of coordinates A is the inverse of [Dpsi(u0) | E], where E
    holds the standard basis vectors of the non-pivot rows; pivot rows are
    picked deterministically (first row whose entry is at least 1e-6 of the
    column maximum during elimination), so graph inputs keep their own
    coordinates and normalized graphs get A = I exactly.
    """
    u0 = np.asarray(u0, dtype=complex)
    psi = V.psi
    n = psi.num_vars
    m = 2 * n
    J = psi.jacobian_at(u0)
    if numerical_rank(J).rank < n:
        raise RankDeficientJacobianError("base point is not immersive")

    W = J.copy()
    pivot_rows: list[int] = []
    for col in range(n):
        avail = [r for r in range(m) if r not in pivot_rows]
        col_abs = np.abs(W[avail, col])
        col_max = float(col_abs.max())
        if col_max == 0.0:
            raise RankDeficientJacobianError("base point is not immersive")
        row = next(r for r, mag in zip(avail, col_abs) if mag >= _PIVOT_RATIO * col_max)
        pivot_rows.append(row)
        for rr in avail:
            if rr != row and W[rr, col] != 0:
                W[rr, :] -= (W[rr, col] / W[row, col]) * W[row, :]

    M = np.zeros((m, m), dtype=complex)
    M[:, :n] = J
    for idx, r in enumerate(sorted(set(range(m)) - set(pivot_rows))):
        M[r, n + idx] = 1.0
    if np.array_equal(M, np.eye(m)):
        A = np.eye(m, dtype=complex)
    else:
        A = np.linalg.inv(M)

    target = np.vstack([np.eye(n), np.zeros((n, n))])
    residual = np.linalg.norm(A @ J - target)
    if residual > 1e-10 * max(1.0, np.linalg.norm(A) * np.linalg.norm(J)):
        raise RankDeficientJacobianError("chart construction is ill-conditioned")
    return NormalizedChart(psi, u0, A, M)


def chart_graph_eval(chart: NormalizedChart, v, cfg: NewtonConfig | None = None) -> np.ndarray:
    return chart.graph_eval(v, cfg)
