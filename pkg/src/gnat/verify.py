"""
Oracle-versus-closed-form verification suites on T₁M.

Each suite samples random points (and random fields where the formula
needs them), evaluates a closed form and the matching finite-difference
oracle quantity on g-orthonormal frames, and reports the largest deviation
per block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .base_manifolds import SpaceForm
from .core_tensor import DEFAULT_CONFIG, DiffConfig, christoffel, directional, lie_derivative_metric, ricci
from .tangent_bundle import LiftedField
from .unit_tangent import (KKSpec, chart_for, complete_lift_T1, field_to_chart, horizontal_field,
                           identity_residuals, induced_metric_T1, levi_civita_closed, lie_closed_T1,
                           ricci_closed, sample_t1_points, tangent_basis, tangential_field)

Array = np.ndarray

FIRST_ORDER_TOL = 1e-4
RICCI_TOL = 1e-3
IDENTITY_TOL = 1e-6
SUITES = ("connection", "ricci", "lie", "identities")


@dataclass(frozen=True)
class SuiteReport:
    name: str
    deviations: dict
    tol: float
    samples: int

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values()) if self.deviations else 0.0

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol

    def to_dict(self) -> dict:
        return {"suite": self.name, "tol": self.tol, "samples": self.samples,
                "deviations": {k: float(v) for k, v in sorted(self.deviations.items())},
                "max_deviation": float(self.max_deviation),
                "verdict": "pass" if self.passed else "fail"}


def random_vector_field(n: int, rng: np.random.Generator, scale: float = 1.0) -> Callable[[Array], Array]:
    """A smooth non-affine field: affine part plus quadratic and sine terms."""
    M = scale * rng.normal(size=(n, n))
    c = scale * rng.normal(size=n)
    Q = 0.3 * scale * rng.normal(size=(n, n, n))
    w = rng.normal(size=n)

    def xi(x):
        x = np.asarray(x, dtype=float)
        return M @ x + c + np.einsum("kij,i,j->k", Q, x, x) + 0.2 * scale * np.sin(w * x)

    return xi


def random_lifted_field(sf: SpaceForm, rng: np.random.Generator) -> LiftedField:
    """A field A^i ∂_i^h + B^i ∂_i^t with B orthogonal to u, depending on (x, u)."""
    n = sf.n
    C = rng.normal(size=(n, n))
    Cu = rng.normal(size=(n, n))
    D = 0.5 * rng.normal(size=(n, n, n))
    e = rng.normal(size=n)

    def A(x, u):
        return C @ x + 0.5 * Cu @ u + 0.2 * np.sin(e * x) * u[0]

    def B(x, u):
        v = np.einsum("kij,i,j->k", D, x, u) + np.cos(e * x) + 0.3 * u * u[-1]
        return v - float(u @ sf.metric_at(x) @ v) * u

    return LiftedField(A, B, "random")


def random_kk_spec(rng: np.random.Generator) -> KKSpec:
    """Kaluza-Klein type constants with |a|, |a+c|, |φ| in [0.5, 2], d in [-2, 2]."""
    while True:
        a = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
        s = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
        d = rng.uniform(-2.0, 2.0)
        if 0.5 <= abs(s + d) <= 4.0:
            return KKSpec(float(a), 0.0, float(s - a), float(d))


def _frames(sf: SpaceForm, x, u):
    return sf.orthonormal_frame(x), tangent_basis(sf, x, u)


def _update(acc: dict, key: str, value: float):
    acc[key] = max(acc.get(key, 0.0), float(value))


def connection_suite(sf: SpaceForm, kk: KKSpec, points: int = 30, seed: int = 0,
                     cfg: DiffConfig = DEFAULT_CONFIG) -> SuiteReport:
    """Closed-form connection blocks against oracle Christoffels of the induced metric."""
    rng = np.random.default_rng(seed)
    n = sf.n
    base = sf.metric()
    devs: dict = {}
    for x, u in sample_t1_points(sf, None, points, rng, 0.8):
        X = random_vector_field(n, rng)
        Y = random_vector_field(n, rng)
        chart = chart_for(base, u)
        G = induced_metric_T1(kk, chart, cfg)
        q = chart.chart_point(x, u)
        gam = christoffel(G, q, cfg)
        lifts = {"h": lambda F: horizontal_field(F, n),
                 "t": lambda F: tangential_field(kk, chart, lambda y, v: F(y))}
        for blk in ("hh", "ht", "th", "tt"):
            V = field_to_chart(lifts[blk[0]](X), chart, cfg, check=False)(q)
            W = field_to_chart(lifts[blk[1]](Y), chart, cfg, check=False)
            out = directional(W, q, V, cfg.step_h) + np.einsum("kij,i,j->k", gam, V, W(q))
            h, v = chart.chart_to_hv(q, out, cfg)
            ref = levi_civita_closed(kk, sf, blk, X, Y, x, u, cfg)
            _update(devs, blk, max(np.max(np.abs(h - ref.horizontal)), np.max(np.abs(v - ref.tangential))))
    return SuiteReport("connection", devs, FIRST_ORDER_TOL, points)


def ricci_suite(sf: SpaceForm, kk: KKSpec, points: int = 30, seed: int = 0,
                cfg: DiffConfig = DEFAULT_CONFIG) -> SuiteReport:
    """Closed-form Ricci blocks against the oracle Ricci tensor, on orthonormal frames."""
    rng = np.random.default_rng(seed)
    n = sf.n
    base = sf.metric()
    devs: dict = {}
    z = np.zeros(n)
    for x, u in sample_t1_points(sf, None, points, rng, 0.8):
        chart = chart_for(base, u)
        G = induced_metric_T1(kk, chart, cfg)
        q = chart.chart_point(x, u)
        R = ricci(G, q, cfg)
        g = sf.metric_at(x)
        E, Fp = _frames(sf, x, u)
        H = np.column_stack([chart.hv_to_chart(x, u, E[:, i], z, cfg) for i in range(n)])
        T = np.column_stack([chart.hv_to_chart(x, u, z, Fp[:, j], cfg) for j in range(n - 1)])
        for blk, (P, Q), (A, B) in (("hh", (H, H), (E, E)), ("ht", (H, T), (E, Fp)), ("tt", (T, T), (Fp, Fp))):
            oracle = P.T @ R @ Q
            closed = np.array([[ricci_closed(kk, n, sf.kappa, blk, A[:, i], B[:, j], g, u)
                                for j in range(B.shape[1])] for i in range(A.shape[1])])
            _update(devs, blk, np.max(np.abs(oracle - closed)))
    return SuiteReport("ricci", devs, RICCI_TOL, points)


def lie_suite(sf: SpaceForm, kk: KKSpec, fields: int = 10, points: int = 3, seed: int = 0,
              cfg: DiffConfig = DEFAULT_CONFIG) -> SuiteReport:
    """The four Lie-derivative closed forms against the oracle Lie derivative.

    For each kind, ``fields`` random fields are drawn and each is compared
    at ``points`` random points on all frame pairs.
    """
    rng = np.random.default_rng(seed)
    n = sf.n
    base = sf.metric()
    devs: dict = {}
    z = np.zeros(n)
    for kind in ("tangential", "horizontal", "complete", "general"):
        for _ in range(fields):
            xi = random_vector_field(n, rng)
            lifted = random_lifted_field(sf, rng) if kind == "general" else None
            for x, u in sample_t1_points(sf, None, points, rng, 0.8):
                chart = chart_for(base, u)
                if kind == "tangential":
                    V = tangential_field(kk, chart, lambda y, v, F=xi: F(y))
                elif kind == "horizontal":
                    V = horizontal_field(xi, n)
                elif kind == "complete":
                    V = complete_lift_T1(kk, chart, xi, cfg)
                else:
                    V = lifted
                G = induced_metric_T1(kk, chart, cfg)
                q = chart.chart_point(x, u)
                L = lie_derivative_metric(G, field_to_chart(V, chart, cfg), q, cfg)
                E, Fp = _frames(sf, x, u)
                hvec = [chart.hv_to_chart(x, u, E[:, i], z, cfg) for i in range(n)]
                tvec = [chart.hv_to_chart(x, u, z, Fp[:, j], cfg) for j in range(n - 1)]
                pairs = ([("hh", hvec[i], hvec[j], E[:, i], E[:, j]) for i in range(n) for j in range(n)]
                         + [("ht", hvec[i], tvec[j], E[:, i], Fp[:, j]) for i in range(n) for j in range(n - 1)]
                         + [("tt", tvec[i], tvec[j], Fp[:, i], Fp[:, j])
                            for i in range(n - 1) for j in range(n - 1)])
                for blk, P, Q, Xv, Yv in pairs:
                    ref = lie_closed_T1(kind, kk, sf, x, u, Xv, Yv, xi=xi, field=lifted, cfg=cfg)[blk]
                    _update(devs, f"{kind}:{blk}", abs(float(P @ L @ Q) - ref))
    return SuiteReport("lie", devs, FIRST_ORDER_TOL, fields)


def identities_suite(sf: SpaceForm, kk: KKSpec, points: int = 30, seed: int = 0,
                     cfg: DiffConfig = DEFAULT_CONFIG) -> SuiteReport:
    """Derivative rules of horizontal and tangential lifts acting on functions."""
    rng = np.random.default_rng(seed)
    n = sf.n
    base = sf.metric()
    devs: dict = {}
    for x, u in sample_t1_points(sf, None, points, rng, 0.8):
        c3 = rng.normal(size=n)
        M = rng.normal(size=(n, n))

        def f(y, c3=c3, M=M):
            return float(y @ M @ y + c3 @ y ** 3)

        X = random_vector_field(n, rng)
        Y = random_vector_field(n, rng)
        res = identity_residuals(kk, chart_for(base, u), f, X, Y, x, u, cfg)
        for k, v in res.items():
            _update(devs, k, v)
    return SuiteReport("identities", devs, IDENTITY_TOL, points)


def run_suite(name: str, sf: SpaceForm, kk: KKSpec, samples: int = 30, seed: int = 0,
              cfg: DiffConfig = DEFAULT_CONFIG) -> SuiteReport:
    if name == "connection":
        return connection_suite(sf, kk, samples, seed, cfg)
    if name == "ricci":
        return ricci_suite(sf, kk, samples, seed, cfg)
    if name == "lie":
        return lie_suite(sf, kk, fields=10, points=max(1, samples // 10), seed=seed, cfg=cfg)
    if name == "identities":
        return identities_suite(sf, kk, samples, seed, cfg)
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
