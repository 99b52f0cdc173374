"""
Space forms in one conformal chart, and affine vector fields on them.

The metric of curvature κ is g = λ(x)² δ with λ(x) = 1/(1 + κ|x|²/4).  For
κ < 0 the chart is the Poincaré-type ball of radius 2/√(-κ).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .core_tensor import DEFAULT_CONFIG, DiffConfig, MetricField, lie_derivative_metric
from .errors import OutOfDomain

Array = np.ndarray


@dataclass(frozen=True)
class SpaceForm:
    n: int
    kappa: float
    margin: float = 0.05

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("space forms need n >= 2")

    @property
    def domain_radius(self) -> float:
        if self.kappa >= 0:
            return np.inf
        return 2.0 / np.sqrt(-self.kappa) * (1.0 - self.margin)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return x.shape == (self.n,) and bool(np.all(np.isfinite(x))) and float(x @ x) < self.domain_radius ** 2

    def conformal_factor(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return 1.0 / (1.0 + 0.25 * self.kappa * float(x @ x))

    def metric_at(self, x) -> Array:
        return self.conformal_factor(x) ** 2 * np.eye(self.n)

    def christoffel_at(self, x) -> Array:
        """Analytic Γ^k_ij for g = e^{2f} δ: δ^k_i f_j + δ^k_j f_i - δ_ij f_k."""
        x = np.asarray(x, dtype=float)
        df = -0.5 * self.kappa * self.conformal_factor(x) * x
        eye = np.eye(self.n)
        return (np.einsum("ki,j->kij", eye, df) + np.einsum("kj,i->kij", eye, df)
                - np.einsum("ij,k->kij", eye, df))

    def metric(self) -> MetricField:
        """The chart metric as a :class:`MetricField` (carries analytic Γ)."""
        return space_form_metric(self)

    def unit(self, x, v) -> Array:
        """Rescale ``v`` to unit g-length at ``x``."""
        v = np.asarray(v, dtype=float)
        return v / (self.conformal_factor(x) * np.linalg.norm(v))

    def orthonormal_frame(self, x) -> Array:
        """Columns form a g-orthonormal basis of the tangent space at ``x``."""
        return np.eye(self.n) / self.conformal_factor(x)


def space_form_metric(sf: SpaceForm) -> MetricField:
    def evaluate(x):
        if not sf.contains(x):
            raise OutOfDomain(f"{x} outside the chart of curvature {sf.kappa}")
        return sf.metric_at(x)

    return MetricField(dim=sf.n, eval=evaluate, domain=sf.contains,
                       christoffel=sf.christoffel_at, name=f"space form n={sf.n} kappa={sf.kappa:g}")


@dataclass(frozen=True)
class NamedField:
    """Affine vector field ξ(x) = B x + b in chart coordinates."""

    B: Array = field(default=None)
    b: Array = field(default=None)
    label: str = ""

    def __post_init__(self):
        B, b = self.B, self.b
        if B is None and b is None:
            raise ValueError("an affine field needs B or b")
        n = len(b) if B is None else np.asarray(B).shape[0]
        B = np.zeros((n, n)) if B is None else np.asarray(B, dtype=float)
        b = np.zeros(n) if b is None else np.asarray(b, dtype=float)
        if B.shape != (n, n) or b.shape != (n,):
            raise ValueError("dimensions of B and b disagree")
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "b", b)

    @classmethod
    def constant(cls, b, label="constant"):
        return cls(b=np.asarray(b, dtype=float), label=label)

    @classmethod
    def linear(cls, B, label="linear"):
        return cls(B=np.asarray(B, dtype=float), label=label)

    @classmethod
    def affine(cls, B, b, label="affine"):
        return cls(B=np.asarray(B, dtype=float), b=np.asarray(b, dtype=float), label=label)

    @property
    def n(self) -> int:
        return self.b.size

    @property
    def kind(self) -> str:
        if not np.any(self.B):
            return "constant"
        return "linear" if not np.any(self.b) else "affine"

    def __call__(self, x) -> Array:
        return self.B @ np.asarray(x, dtype=float) + self.b

    def jacobian(self, x=None) -> Array:
        """``J[l, k]`` = ∂_k ξ^l (constant for affine fields)."""
        return self.B.copy()

    def __add__(self, other: "NamedField") -> "NamedField":
        return NamedField(B=self.B + other.B, b=self.b + other.b, label=f"{self.label}+{other.label}")

    def scaled(self, s: float) -> "NamedField":
        return NamedField(B=s * self.B, b=s * self.b, label=f"{s:g}*{self.label}")


@dataclass(frozen=True)
class ConformalClass:
    """Result of :func:`conformal_factor`.

    ``kind`` is one of ``killing``, ``homothetic``, ``conformal`` or ``none``.
    ``sigma`` maps a point to the best-fit conformal factor σ with
    L_ξ g ≈ 2σ g; ``lambda0`` is set for homothetic (and Killing) fields.
    """

    kind: str
    lambda0: Optional[float]
    sigma: Optional[Callable[[Array], float]]
    residual: float


def sample_chart_points(sf: SpaceForm, count: int, rng: np.random.Generator,
                        radius: float = 1.0) -> Array:
    """Uniform points in a ball of the chart, kept clear of its boundary."""
    r = min(radius, 0.5 * sf.domain_radius)
    pts = []
    while len(pts) < count:
        x = rng.uniform(-r, r, size=sf.n)
        if float(x @ x) <= r * r:
            pts.append(x)
    return np.array(pts)


def conformal_factor(sf: SpaceForm, xi: Callable[[Array], Array], samples: int = 50,
                     cfg: DiffConfig = DEFAULT_CONFIG, seed: int = 0) -> ConformalClass:
    """Classify ξ as Killing, homothetic, conformal, or none of these.

    At ``samples`` random points the pointwise factor
    σ = tr(g⁻¹ L_ξ g) / (2n) is fitted and the remainder L_ξ g - 2σ g is
    tested against ``cfg.tol_first``.
    """
    g = sf.metric()
    rng = np.random.default_rng(seed)
    sigmas, worst = [], 0.0
    for x in sample_chart_points(sf, samples, rng):
        G = g(x)
        L = lie_derivative_metric(g, xi, x, cfg)
        s = float(np.trace(np.linalg.solve(G, L))) / (2 * sf.n)
        worst = max(worst, float(np.max(np.abs(L - 2 * s * G))))
        sigmas.append(s)

    def sigma(x):
        Gx = g(x)
        return float(np.trace(np.linalg.solve(Gx, lie_derivative_metric(g, xi, x, cfg)))) / (2 * sf.n)

    if worst > cfg.tol_first:
        return ConformalClass("none", None, None, worst)
    sigmas = np.array(sigmas)
    if np.max(np.abs(sigmas)) < cfg.tol_first:
        return ConformalClass("killing", 0.0, sigma, worst)
    if np.ptp(sigmas) < cfg.tol_first:
        return ConformalClass("homothetic", float(np.mean(sigmas)), sigma, worst)
    return ConformalClass("conformal", None, sigma, worst)


def skew_basis(n: int) -> list[Array]:
    """The n(n-1)/2 elementary skew matrices E_ij - E_ji, i < j."""
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n))
            E[i, j], E[j, i] = -1.0, 1.0
            out.append(E)
    return out


def homothetic_catalog(sf: SpaceForm, lambda0: Optional[float] = None) -> list[tuple[NamedField, float]]:
    """Affine homothetic fields of the chart with their factors λ₀.

    On flat space the fields are c·x + A x + b (A skew) with λ₀ = c; the
    catalog lists the dilation, rotation generators and translations.  For
    κ ≠ 0 only the rotation generators appear, all Killing.  Passing
    ``lambda0`` keeps the entries with that factor; on flat space the
    dilation is rescaled to match.
    """
    n = sf.n
    rotations = [(NamedField.linear(E, label=f"rotation{k}"), 0.0)
                 for k, E in enumerate(skew_basis(n))]
    if sf.kappa != 0:
        entries = rotations
        return [e for e in entries if lambda0 is None or e[1] == lambda0]
    translations = [(NamedField.constant(np.eye(n)[i], label=f"translation{i}"), 0.0) for i in range(n)]
    if lambda0 is not None and lambda0 != 0:
        return [(NamedField.linear(lambda0 * np.eye(n), label="dilation"), float(lambda0))]
    dilation = [] if lambda0 == 0 else [(NamedField.linear(np.eye(n), label="dilation"), 1.0)]
    return dilation + rotations + translations


FieldLike = Union[NamedField, Callable[[Array], Array]]
