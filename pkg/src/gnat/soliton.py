"""
Ricci solitons Ric + ½ L_V g = λ g on a base space form, on TM and on T₁M.

Two kinds of routine live here: numerical residual checks that run the
oracle on concrete candidates, and the algebraic classification of complete
lift and fiber-preserving potentials on T₁M with a Kaluza-Klein type metric.

Sign convention: λ < 0 is called shrinking and λ > 0 expanding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .base_manifolds import SpaceForm, sample_chart_points, skew_basis
from .core_tensor import (DEFAULT_CONFIG, DiffConfig, lie_derivative_metric, ricci)
from .errors import DegenerateSpec, InvalidSpec
from .tangent_bundle import (ABCSpec, GNaturalSpec, LiftedField, abc_metric_TM, gnat_metric_TM,
                             hv_to_induced)
from .unit_tangent import (KKSpec, chart_for, complete_lift_T1, field_to_chart, induced_metric_T1,
                           iota_tilde, sample_t1_points, tangent_basis)

Array = np.ndarray

RESIDUAL_TOL = 1e-3
LIE_TOL = 1e-4


def soliton_sign(lam: float, tol: float = 0.0) -> str:
    """``shrinking`` for λ < 0, ``steady`` for λ = 0, ``expanding`` for λ > 0."""
    if abs(lam) <= tol:
        return "steady"
    return "shrinking" if lam < 0 else "expanding"


# ---------------------------------------------------------------------------
# algebra of the classification


@dataclass(frozen=True)
class SolitonConstants:
    mu: float
    nu: float
    theta: float


def mu_nu_theta(n: int, kk: KKSpec, kappa: float) -> SolitonConstants:
    """Constants μ, ν, θ of the soliton system on T₁M over curvature κ."""
    a, c, d, ph = kk.a, kk.c, kk.d, kk.phi
    den = 2 * a * (a + c) * ph
    if den == 0:
        raise DegenerateSpec("a (a+c) φ vanishes")
    k = kappa
    mu = (a * a * k * k + 2 * (n - 2) * (a + c) * ph - d * d) / den
    nu = (-a * a * k * k + 2 * (n - 1) * a * ph * k + d * (d - 2 * ph)) / den
    theta = (-a * a * ((n - 2) * ph + d) * k * k
             + d * (2 * n * (a + c) * ph + (n - 1) * d * ph - d * (a + c))) / den
    return SolitonConstants(float(mu), float(nu), float(theta))


def eq1_residual(n: int, kk: KKSpec, kappa: float) -> float:
    """(n-2) a² κ² + 2(n-1) a d κ - n d (2φ - d); zero exactly when θ = ν d."""
    a, d, ph = kk.a, kk.d, kk.phi
    return (n - 2) * a * a * kappa ** 2 + 2 * (n - 1) * a * d * kappa - n * d * (2 * ph - d)


def discriminant(n: int, kk: KKSpec) -> float:
    """d² + 2n(n-2)φd, which must be ≥ 0 for real curvatures in case iv."""
    return kk.d ** 2 + 2 * n * (n - 2) * kk.phi * kk.d


def d_range_admissible(n: int, a: float, c: float, d: float) -> bool:
    """Admissible d for case iv, from the interval description in terms of a + c."""
    s = a + c
    edge = -2 * n * (n - 2) * s / (2 * n * (n - 2) + 1)
    if s < 0:
        return d <= 0 or d >= edge
    return d <= edge or d >= 0


@dataclass(frozen=True)
class ClassificationResult:
    """One admissible family of complete-lift solitons ξ^c̄ on T₁M.

    ``kappa`` is None in case i when no curvature was requested: every κ
    works there, with λ and λ₀ depending on it.  Rows of case iv with a
    negative discriminant carry ``admissible=False`` and no curvature.
    """

    case_tag: str
    kappa: Optional[float]
    lam: Optional[float]
    lambda0: Optional[float]
    admissible: bool
    sign: Optional[str]

    @property
    def constructible(self) -> bool:
        """True when a homothetic field with factor λ₀ exists on the chart."""
        if not self.admissible or self.kappa is None or self.lambda0 is None:
            return False
        return bool(self.kappa == 0 or abs(self.lambda0) < 1e-12)

    def to_dict(self) -> dict:
        return {"case": self.case_tag, "kappa": self.kappa, "lambda": self.lam,
                "lambda0": self.lambda0, "admissible": self.admissible, "sign": self.sign,
                "constructible": self.constructible}


def _result(tag, kappa, lam, lam0) -> ClassificationResult:
    return ClassificationResult(tag, float(kappa), float(lam), float(lam0), True, soliton_sign(lam, 1e-14))


def _matches(k_req: Optional[float], k: float) -> bool:
    return k_req is None or abs(k_req - k) <= 1e-9 * max(1.0, abs(k))


def classify_complete_lift(n: int, kk: KKSpec, kappa: Optional[float] = None) -> list[ClassificationResult]:
    """Complete-lift Ricci solitons (G̃, ξ^c̄, λ) allowed for dimension n and (a, c, d).

    With ``kappa`` given, only the families compatible with that curvature are
    returned; an empty list means none exists.
    """
    kk.require_kk()
    if n < 2:
        raise InvalidSpec("n must be at least 2")
    a, c, d, ph = kk.a, kk.c, kk.d, kk.phi
    out = []
    if n == 2 and d == 0:
        if kappa is None:
            out.append(ClassificationResult("i", None, None, None, True, None))
        else:
            k = kappa
            out.append(_result("i", k, a * k * k / (2 * (a + c) ** 2), k * (a * k - (a + c)) / (a + c) ** 2))
    elif n == 2:
        k = (2 * ph - d) / a
        if _matches(kappa, k):
            out.append(_result("ii", k, 2 / a, 2 / a))
    elif d == 0:
        if _matches(kappa, 0.0):
            out.append(_result("iii", 0.0, (n - 2) / a, (n - 2) / a))
    else:
        disc = discriminant(n, kk)
        if disc < 0:
            if kappa is None:
                out.append(ClassificationResult("iv", None, None, None, False, None))
            return out
        roots = sorted({-((n - 1) * d + s * np.sqrt(disc)) / (a * (n - 2)) for s in (1.0, -1.0)})
        for k in roots:
            if _matches(kappa, k):
                cst = mu_nu_theta(n, kk, k)
                out.append(_result("iv", k, cst.mu, cst.mu - cst.nu))
    return out


@dataclass(frozen=True)
class FiberPreservingRecipe:
    """How to build a fiber-preserving soliton potential V on T₁M.

    V = ξ^c̄ (+ ι̃P when ``allows_iota``) with ξ homothetic of factor
    ``lambda0`` and P a parallel (1,1)-tensor field whose part orthogonal to
    the identity is skew; multiples of the identity drop out since ι̃I = 0.
    """

    case_tag: str
    kappa: float
    lam: float
    lambda0: float
    allows_iota: bool

    @property
    def p_requirement(self) -> str:
        if not self.allows_iota:
            return "none (no iota term)"
        return "parallel, skew-symmetric up to a multiple of the identity"

    def to_dict(self) -> dict:
        return {"case": self.case_tag, "kappa": self.kappa, "lambda": self.lam,
                "lambda0": self.lambda0, "allows_iota": self.allows_iota,
                "P": self.p_requirement, "sign": soliton_sign(self.lam, 1e-14)}


def classify_fiber_preserving(n: int, kk: KKSpec, kappa: float) -> list[FiberPreservingRecipe]:
    """Fiber-preserving soliton recipes on T₁M over the space form of curvature κ.

    An empty list means no fiber-preserving potential gives a soliton.
    """
    rows = classify_complete_lift(n, kk, kappa)
    return [FiberPreservingRecipe(r.case_tag, r.kappa, r.lam, r.lambda0, kk.d == 0)
            for r in rows if r.admissible]


# ---------------------------------------------------------------------------
# candidates and residuals


BUNDLES = ("T1M", "TM", "base")


@dataclass(frozen=True)
class SolitonCandidate:
    """A metric, a potential field and λ.

    ``bundle`` is ``T1M`` (``metric`` a :class:`KKSpec`), ``TM`` (``metric``
    an :class:`ABCSpec` or :class:`GNaturalSpec`) or ``base`` (``metric``
    None).  ``field`` is a :class:`LiftedField` on the bundles and a vector
    field callable on the base; None stands for the zero field.
    """

    bundle: str
    space: SpaceForm
    metric: Union[KKSpec, ABCSpec, GNaturalSpec, None]
    field: object
    lam: float
    label: str = ""

    def __post_init__(self):
        if self.bundle not in BUNDLES:
            raise InvalidSpec(f"bundle must be one of {BUNDLES}")
        want = {"T1M": (KKSpec,), "TM": (ABCSpec, GNaturalSpec), "base": (type(None),)}[self.bundle]
        if not isinstance(self.metric, want):
            raise InvalidSpec(f"metric {type(self.metric).__name__} does not fit bundle {self.bundle}")
        if self.bundle != "base" and self.field is not None and not isinstance(self.field, LiftedField):
            raise InvalidSpec("bundle potentials must be LiftedField instances")
        if self.bundle == "base" and self.field is not None and not callable(self.field):
            raise InvalidSpec("base potentials must be callables")


def complete_lift_candidate(sf: SpaceForm, kk: KKSpec, xi, lam: float, P=None,
                            label: str = "") -> SolitonCandidate:
    """T₁M candidate with V = ξ^c̄ (+ ι̃P)."""
    chart = chart_for(sf.metric(), np.eye(sf.n)[0])
    V = complete_lift_T1(kk, chart, xi)
    if P is not None:
        V = V + iota_tilde(kk, chart, P)
    return SolitonCandidate("T1M", sf, kk, V, lam, label)


@dataclass(frozen=True)
class ResidualReport:
    blocks: dict
    sample_count: int
    tol: float

    @property
    def verdict(self) -> bool:
        return all(v < self.tol for v in self.blocks.values())

    @property
    def max_abs(self) -> float:
        return max(self.blocks.values())

    def to_dict(self) -> dict:
        return {"blocks": {k: float(v) for k, v in sorted(self.blocks.items())},
                "sample_count": self.sample_count, "tol": self.tol,
                "verdict": "pass" if self.verdict else "fail"}


def _block_max(S: Array, n: int, names: tuple[str, str, str], acc: dict):
    for name, blk in zip(names, (S[:n, :n], S[:n, n:], S[n:, n:])):
        acc[name] = max(acc.get(name, 0.0), float(np.max(np.abs(blk))) if blk.size else 0.0)


def t1_frame(sf: SpaceForm, chart, x, u, cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
    """Chart columns of e_i^h (g-orthonormal e_i) followed by f_j^t (f_j ⊥ u)."""
    n = sf.n
    E = sf.orthonormal_frame(x)
    Fp = tangent_basis(sf, x, u)
    z = np.zeros(n)
    cols = [chart.hv_to_chart(x, u, E[:, i], z, cfg) for i in range(n)]
    cols += [chart.hv_to_chart(x, u, z, Fp[:, j], cfg) for j in range(n - 1)]
    return np.column_stack(cols)


def tm_frame(sf: SpaceForm, x, u) -> Array:
    n = sf.n
    E = sf.orthonormal_frame(x)
    gamma = sf.christoffel_at(x)
    z = np.zeros(n)
    cols = [hv_to_induced(gamma, u, E[:, i], z) for i in range(n)]
    cols += [hv_to_induced(gamma, u, z, E[:, i]) for i in range(n)]
    return np.column_stack(cols)


def sample_tm_points(sf: SpaceForm, count: int, rng: np.random.Generator, radius: float = 0.8,
                     fiber_radius: float = 1.5) -> list[tuple[Array, Array]]:
    out = []
    for x in sample_chart_points(sf, count, rng, radius):
        u = sf.unit(x, rng.normal(size=sf.n)) * rng.uniform(0.0, fiber_radius)
        out.append((x, u))
    return out


def _tm_metric_of(metric, base):
    if isinstance(metric, ABCSpec):
        return abc_metric_TM(metric, base)
    return gnat_metric_TM(metric, base)


def soliton_residual(cand: SolitonCandidate, samples: int = 30, seed: int = 0,
                     cfg: DiffConfig = DEFAULT_CONFIG, tol: float = RESIDUAL_TOL,
                     radius: float = 0.8) -> ResidualReport:
    """Max-abs of Ric + ½ L_V G - λ G on orthonormal frame pairs, per block.

    T₁M blocks are ``hh``, ``ht`` and ``tt``; TM blocks ``hh``, ``hv``,
    ``vv``; a base candidate has the single block ``base``.
    """
    if samples < 1:
        raise InvalidSpec("samples must be positive")
    sf = cand.space
    base = sf.metric()
    rng = np.random.default_rng(seed)
    blocks: dict = {}
    n = sf.n
    if cand.bundle == "T1M":
        for x, u in sample_t1_points(sf, None, samples, rng, radius):
            chart = chart_for(base, u)
            G = induced_metric_T1(cand.metric, chart, cfg)
            q = chart.chart_point(x, u)
            M = ricci(G, q, cfg) - cand.lam * G(q)
            if cand.field is not None:
                M = M + 0.5 * lie_derivative_metric(G, field_to_chart(cand.field, chart, cfg), q, cfg)
            F = t1_frame(sf, chart, x, u, cfg)
            _block_max(F.T @ M @ F, n, ("hh", "ht", "tt"), blocks)
    elif cand.bundle == "TM":
        G = _tm_metric_of(cand.metric, base)
        for x, u in sample_tm_points(sf, samples, rng, radius):
            p = np.concatenate([x, u])
            M = ricci(G, p, cfg) - cand.lam * G(p)
            if cand.field is not None:
                M = M + 0.5 * lie_derivative_metric(G, cand.field.chart_field(base, cfg), p, cfg)
            F = tm_frame(sf, x, u)
            _block_max(F.T @ M @ F, n, ("hh", "hv", "vv"), blocks)
    else:
        for x in sample_chart_points(sf, samples, rng, radius):
            M = ricci(base, x, cfg) - cand.lam * base(x)
            if cand.field is not None:
                M = M + 0.5 * lie_derivative_metric(base, cand.field, x, cfg)
            E = sf.orthonormal_frame(x)
            blocks["base"] = max(blocks.get("base", 0.0), float(np.max(np.abs(E.T @ M @ E))))
    return ResidualReport(blocks, samples, tol)


def gc3_check(kk: KKSpec, sf: SpaceForm, V: Optional[LiftedField], lam: float, samples: int = 30,
              seed: int = 0, cfg: DiffConfig = DEFAULT_CONFIG, tol: float = LIE_TOL,
              radius: float = 0.8) -> ResidualReport:
    """Compare the oracle L_V G̃ with the right-hand sides of the T₁M soliton system.

    hh: 2(a+c)(λ-ν) g(X,Y) + 2(λd-θ) g(X,u) g(Y,u); ht: 0; tt: 2a(λ-μ) g(X,Y).
    Only first derivatives enter, so the default tolerance is the first-order one.
    """
    kk.require_kk()
    n = sf.n
    cst = mu_nu_theta(n, kk, sf.kappa)
    a, c, d = kk.a, kk.c, kk.d
    base = sf.metric()
    rng = np.random.default_rng(seed)
    blocks: dict = {}
    for x, u in sample_t1_points(sf, None, samples, rng, radius):
        chart = chart_for(base, u)
        G = induced_metric_T1(kk, chart, cfg)
        q = chart.chart_point(x, u)
        F = t1_frame(sf, chart, x, u, cfg)
        L = (np.zeros((2 * n - 1, 2 * n - 1)) if V is None
             else lie_derivative_metric(G, field_to_chart(V, chart, cfg), q, cfg))
        E = sf.orthonormal_frame(x)
        eu = E.T @ sf.metric_at(x) @ u  # g(e_i, u)
        rhs = np.zeros((2 * n - 1, 2 * n - 1))
        rhs[:n, :n] = 2 * (a + c) * (lam - cst.nu) * np.eye(n) + 2 * (lam * d - cst.theta) * np.outer(eu, eu)
        rhs[n:, n:] = 2 * a * (lam - cst.mu) * np.eye(n - 1)
        _block_max(F.T @ L @ F - rhs, n, ("hh", "ht", "tt"), blocks)
    return ResidualReport(blocks, samples, tol)


# ---------------------------------------------------------------------------
# necessary conditions


@dataclass(frozen=True)
class TangVResult:
    lambda_matches: bool
    fit_residual: float
    verdict: bool

    def to_dict(self) -> dict:
        return {"lambda_matches": self.lambda_matches, "fit_residual": self.fit_residual,
                "verdict": self.verdict}


def tangV_necessary(kk: KKSpec, sf: SpaceForm, V: Optional[LiftedField], lam: float,
                    fibers: int = 10, per_fiber: Optional[int] = None, seed: int = 0,
                    fit_tol: float = 1e-6, radius: float = 0.8) -> TangVResult:
    """Necessary conditions for a T₁M soliton potential V.

    λ must equal μ, and on every fiber the tangential part of V must be
    u ↦ (Q u)^t for some g-skew Q.  Q is fitted by least squares on the
    g-skew basis plus the identity at ``fibers`` random base points.
    """
    kk.require_kk()
    n = sf.n
    mu = mu_nu_theta(n, kk, sf.kappa).mu
    lam_ok = abs(lam - mu) <= 1e-9 * max(1.0, abs(mu))
    rng = np.random.default_rng(seed)
    per_fiber = per_fiber or n * (n - 1) + 4
    worst = 0.0
    for x in sample_chart_points(sf, fibers, rng, radius):
        g = sf.metric_at(x)
        ginv = np.linalg.inv(g)
        basis = [ginv @ E for E in skew_basis(n)] + [np.eye(n)]
        rows, rhs = [], []
        for _ in range(per_fiber):
            u = sf.unit(x, rng.normal(size=n))
            proj = np.eye(n) - np.outer(u, g @ u)  # projection onto {u}^⊥
            B = np.zeros(n) if V is None else np.asarray(V.B(x, u), float)
            rows.append(np.column_stack([proj @ (Q @ u) for Q in basis]))
            rhs.append(proj @ B)
        A = np.vstack(rows)
        b = np.concatenate(rhs)
        coef, *_ = np.linalg.lstsq(A, b, rcond=None)
        worst = max(worst, float(np.max(np.abs(A @ coef - b))))
    return TangVResult(lam_ok, worst, lam_ok and worst < fit_tol)


# ---------------------------------------------------------------------------
# heredity from TM to the base


@dataclass(frozen=True)
class HeredityResult:
    Z0: Callable[[Array], Array]
    lam: float
    case: int


def _heredity_coefficients(spec: GNaturalSpec, n: int, lam_bar: float):
    a1, a2, a3 = (spec.value(f"alpha{i}", 0.0) for i in (1, 2, 3))
    s13 = a1 + a3
    D = a1 * s13 - 2 * a2 ** 2
    if D == 0:
        raise InvalidSpec("alpha1(alpha1+alpha3) - 2 alpha2^2 vanishes at 0")
    al = spec.alpha(0.0)
    b13 = spec.value("beta1", 0.0) + spec.value("beta3", 0.0)
    ds13 = spec.deriv("alpha1", 0.0) + spec.deriv("alpha3", 0.0)
    lam = s13 * (lam_bar * al + b13 + n * ds13) / D
    return al / D, s13, a2, lam


def heredity_project(spec: GNaturalSpec, n: int, Z: LiftedField, lam_bar: float) -> HeredityResult:
    """Base soliton (Z₀, λ) induced by a soliton (G, Z, λ̄) on TM.

    Z₀(x) = α(0)/D · [(α₁+α₃)(0) A(x, 0) + α₂(0) B(x, 0)] with
    D = (α₁(α₁+α₃) - 2α₂²)(0), where A and B are the horizontal and vertical
    components of Z.  When (α₁+α₃)(0) = 0 this reduces to Z₀ = α₂(0) B(x,0)/2
    and λ = 0.
    """
    ratio, s13, a2, lam = _heredity_coefficients(spec, n, lam_bar)
    zero = np.zeros(n)

    def Z0(x):
        return ratio * (s13 * np.asarray(Z.A(x, zero), float) + a2 * np.asarray(Z.B(x, zero), float))

    return HeredityResult(Z0, float(lam), 1 if s13 != 0 else 2)


def gradient_heredity(spec: GNaturalSpec, n: int, fbar: Callable[[Array, Array], float],
                      lam_bar: float) -> tuple[Callable[[Array], float], float]:
    """Base potential f(x) = α(0)/D · f̄(x, 0) and λ, as in :func:`heredity_project`."""
    ratio, _, _, lam = _heredity_coefficients(spec, n, lam_bar)
    zero = np.zeros(n)
    return (lambda x: ratio * float(fbar(np.asarray(x, float), zero))), float(lam)


@dataclass(frozen=True)
class CombVerdict:
    flat: bool
    ricci_max: float
    lie_max: float
    verdict: bool

    def to_dict(self) -> dict:
        return {"flat": self.flat, "ricci_max": self.ricci_max, "lie_max": self.lie_max,
                "verdict": self.verdict}


def comb_soliton_check(abc: ABCSpec, sf: SpaceForm, Z: Optional[LiftedField], lam_bar: float,
                       samples: int = 30, seed: int = 0, cfg: DiffConfig = DEFAULT_CONFIG,
                       ricci_tol: float = RESIDUAL_TOL, lie_tol: float = LIE_TOL) -> CombVerdict:
    """Soliton test for G = a g^s + b g^h + c g^v on TM.

    Such a triple is a soliton exactly when the base is flat and Z is
    homothetic for G with factor λ̄; both conditions are checked with the
    oracle, alongside the Ricci-flatness of (TM, G) that flatness implies.
    """
    base = sf.metric()
    G = abc_metric_TM(abc, base)
    rng = np.random.default_rng(seed)
    ric_max, lie_max = 0.0, 0.0
    for x, u in sample_tm_points(sf, samples, rng):
        p = np.concatenate([x, u])
        F = tm_frame(sf, x, u)
        ric_max = max(ric_max, float(np.max(np.abs(F.T @ ricci(G, p, cfg) @ F))))
        L = -2 * lam_bar * G(p)
        if Z is not None:
            L = L + lie_derivative_metric(G, Z.chart_field(base, cfg), p, cfg)
        lie_max = max(lie_max, float(np.max(np.abs(F.T @ L @ F))))
    flat = sf.kappa == 0
    return CombVerdict(flat, ric_max, lie_max, flat and ric_max < ricci_tol and lie_max < lie_tol)
