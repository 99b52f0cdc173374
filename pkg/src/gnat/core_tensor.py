"""
Brute-force numerical tensor calculus on a single chart.

Every quantity here is computed from raw metric components by central
finite differences, with no knowledge of where the metric came from.  The
closed-form formulas elsewhere in the package are checked against these
routines.

Index conventions (used package-wide):

- ``gamma[k, i, j]``  = Γ^k_{ij}
- ``riem[l, k, i, j]`` = R^l_{kij}, with R(∂_i, ∂_j)∂_k = R^l_{kij} ∂_l and
  R(X, Y) = [∇_X, ∇_Y] - ∇_[X,Y]
- ``ric[j, k]`` = R^i_{kij}
- ``nabla[k, i]`` = (∇_i V)^k
- ``hess[k, i, j]`` = (∇²ξ)(∂_i, ∂_j)^k = (∇_i ∇_j ξ - ∇_{∇_i ∂_j} ξ)^k
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import OutOfDomain, SingularMetric

Array = np.ndarray
VectorField = Callable[[Array], Array]


@dataclass(frozen=True)
class DiffConfig:
    """Finite-difference steps and comparison tolerances.

    ``step_h`` drives every first derivative.  Curvature needs derivatives of
    Christoffel symbols, which are themselves finite differences; the outer
    difference uses the coarser ``step_outer`` so that round-off of the inner
    level is not amplified by 1/step_h twice.
    """

    step_h: float = 1e-5
    step_outer: float = 1e-3
    tol_first: float = 1e-6
    tol_second: float = 1e-4

    def __post_init__(self):
        if not (0.0 < self.step_h < 1.0 and 0.0 < self.step_outer < 1.0):
            raise ValueError("finite-difference steps must lie in (0, 1)")
        if self.tol_first <= 0 or self.tol_second <= 0:
            raise ValueError("tolerances must be positive")


DEFAULT_CONFIG = DiffConfig()


@dataclass(frozen=True)
class MetricField:
    """Chart-local metric: a map from coordinates to a symmetric matrix.

    ``christoffel`` optionally carries analytic Christoffel symbols.  The
    oracle functions in this module never use it; bundle constructions do,
    to avoid stacking one more level of finite differences.
    """

    dim: int
    eval: Callable[[Array], Array]
    domain: Optional[Callable[[Array], bool]] = None
    christoffel: Optional[Callable[[Array], Array]] = None
    name: str = ""

    def __call__(self, p) -> Array:
        p = np.asarray(p, dtype=float)
        if not self.contains(p):
            raise OutOfDomain(f"point {p} outside the domain of {self.name or 'metric'}")
        return self.eval(p)

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,) or not np.all(np.isfinite(p)):
            return False
        return True if self.domain is None else bool(self.domain(p))


def signature(mat: Array) -> tuple[int, int]:
    """Return (number of positive, number of negative) eigenvalues."""
    w = np.linalg.eigvalsh(0.5 * (mat + mat.T))
    return int(np.sum(w > 0)), int(np.sum(w < 0))


def _check_reach(g: MetricField, p: Array, reach: float) -> None:
    for i in range(g.dim):
        for s in (-1.0, 1.0):
            q = p.copy()
            q[i] += s * reach
            if not g.contains(q):
                raise OutOfDomain(f"stencil of radius {reach:g} at {p} leaves the chart")


def _inverse(mat: Array) -> Array:
    scale = max(1.0, float(np.max(np.abs(mat))))
    if abs(np.linalg.det(mat)) < 1e-12 * scale ** mat.shape[0]:
        raise SingularMetric("metric determinant vanishes")
    return np.linalg.inv(mat)


def partials(f: Callable[[Array], Array], p: Array, h: float) -> Array:
    """Central-difference partials; ``out[i]`` is ∂_i f at ``p``."""
    p = np.asarray(p, dtype=float)
    out = []
    for i in range(p.size):
        e = np.zeros_like(p)
        e[i] = h
        out.append((np.asarray(f(p + e)) - np.asarray(f(p - e))) / (2.0 * h))
    return np.array(out)


def directional(f: Callable[[Array], Array], p: Array, v: Array, h: float) -> Array:
    """Central-difference derivative of ``f`` along the vector ``v`` at ``p``."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    return (np.asarray(f(p + h * v)) - np.asarray(f(p - h * v))) / (2.0 * h)


def metric_derivatives(g: MetricField, p, cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
    """``dg[l, i, j]`` = ∂_l g_ij."""
    p = np.asarray(p, dtype=float)
    _check_reach(g, p, cfg.step_h)
    return partials(g.eval, p, cfg.step_h)


def christoffel(g: MetricField, p, cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
    """Christoffel symbols of the second kind, ``gamma[k, i, j]``.

    Raises:
        SingularMetric: if the metric is degenerate at ``p``.
        OutOfDomain: if the difference stencil leaves the chart.
    """
    p = np.asarray(p, dtype=float)
    ginv = _inverse(g(p))
    dg = metric_derivatives(g, p, cfg)
    # lowered[l, i, j] = Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il - ∂_l g_ij)
    lowered = 0.5 * (np.transpose(dg, (2, 0, 1)) + np.transpose(dg, (1, 2, 0)) - dg)
    gamma = np.einsum("kl,lij->kij", ginv, lowered)
    return 0.5 * (gamma + np.transpose(gamma, (0, 2, 1)))


def christoffel_derivatives(g: MetricField, p, cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
    """``dgamma[m, k, i, j]`` = ∂_m Γ^k_ij by nested central differences."""
    p = np.asarray(p, dtype=float)
    _check_reach(g, p, cfg.step_outer + cfg.step_h)
    return partials(lambda q: christoffel(g, q, cfg), p, cfg.step_outer)


def riemann_from(gamma: Array, dgamma: Array) -> Array:
    """Assemble R^l_{kij} from Γ and ∂Γ."""
    # ∂_i Γ^l_{jk} - ∂_j Γ^l_{ik}
    term = np.einsum("iljk->lkij", dgamma) - np.einsum("jlik->lkij", dgamma)
    quad = np.einsum("lim,mjk->lkij", gamma, gamma) - np.einsum("ljm,mik->lkij", gamma, gamma)
    return term + quad


def riemann(g: MetricField, p, cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
    p = np.asarray(p, dtype=float)
    return riemann_from(christoffel(g, p, cfg), christoffel_derivatives(g, p, cfg))


def ricci_from(riem: Array) -> Array:
    ric = np.einsum("ikij->jk", riem)
    return 0.5 * (ric + ric.T)


def ricci(g: MetricField, p, cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
    """Ricci tensor Ric_jk = R^i_{kij}, symmetrised."""
    return ricci_from(riemann(g, p, cfg))


def scalar_curvature(g: MetricField, p, cfg: DiffConfig = DEFAULT_CONFIG) -> float:
    p = np.asarray(p, dtype=float)
    return float(np.einsum("jk,jk->", np.linalg.inv(g(p)), ricci(g, p, cfg)))


def curvature_operator(riem: Array, X, Y, Z) -> Array:
    """Components of R(X, Y)Z."""
    return np.einsum("lkij,i,j,k->l", riem, X, Y, Z)


def sectional_curvature(g: MetricField, p, X, Y, cfg: DiffConfig = DEFAULT_CONFIG) -> float:
    p = np.asarray(p, dtype=float)
    G = g(p)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    num = Y @ G @ curvature_operator(riemann(g, p, cfg), Y, X, X)
    den = (X @ G @ X) * (Y @ G @ Y) - (X @ G @ Y) ** 2
    # g(R(X,Y)Y, X) = g(R(Y,X)X, Y)
    return float(num / den)


def covariant_derivative(g: MetricField, V: VectorField, p, cfg: DiffConfig = DEFAULT_CONFIG,
                         gamma: Optional[Array] = None) -> Array:
    """``nabla[k, i]`` = (∇_i V)^k = ∂_i V^k + Γ^k_{il} V^l."""
    p = np.asarray(p, dtype=float)
    if gamma is None:
        gamma = christoffel(g, p, cfg)
    dV = partials(V, p, cfg.step_h)  # dV[i, k]
    return dV.T + np.einsum("kil,l->ki", gamma, np.asarray(V(p), dtype=float))


def lie_derivative_metric(g: MetricField, V: VectorField, p,
                          cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
    """(L_V g)_ij = V^k ∂_k g_ij + g_kj ∂_i V^k + g_ik ∂_j V^k (coordinate formula)."""
    p = np.asarray(p, dtype=float)
    _check_reach(g, p, cfg.step_h)
    G = g(p)
    dg = partials(g.eval, p, cfg.step_h)
    dV = partials(V, p, cfg.step_h)  # dV[i, k] = ∂_i V^k
    Vp = np.asarray(V(p), dtype=float)
    L = np.einsum("k,kij->ij", Vp, dg) + dV @ G + (dV @ G).T
    return 0.5 * (L + L.T)


def lie_derivative_covariant(g: MetricField, V: VectorField, p,
                             cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
    """(L_V g)(∂_i, ∂_j) = g(∇_i V, ∂_j) + g(∂_i, ∇_j V), an independent second route."""
    p = np.asarray(p, dtype=float)
    G = g(p)
    nab = covariant_derivative(g, V, p, cfg)
    low = G @ nab  # low[j, i] = g_jk (∇_i V)^k
    return low.T + low


def covariant_hessian(g: MetricField, xi: VectorField, p,
                      cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
    """``hess[k, i, j]`` = (∇_i ∇_j ξ - ∇_{∇_i ∂_j} ξ)^k.

    The first slot is the outer differentiation direction.
    """
    p = np.asarray(p, dtype=float)
    _check_reach(g, p, cfg.step_outer + cfg.step_h)
    gamma = christoffel(g, p, cfg)
    nab = covariant_derivative(g, xi, p, cfg, gamma)  # nab[m, j]
    d_nab = partials(lambda q: covariant_derivative(g, xi, q, cfg), p, cfg.step_outer)
    # d_nab[i, k, j] = ∂_i (∇_j ξ)^k
    hess = (np.einsum("ikj->kij", d_nab)
            + np.einsum("kim,mj->kij", gamma, nab)
            - np.einsum("mij,km->kij", gamma, nab))
    return hess
