"""
Geometry of TM in induced coordinates (x^i, u^i).

Vectors on TM are stored either in induced coordinates (a 2n-vector
(δx, δu)) or in the horizontal/vertical frame ((∂_i)^h, (∂_i)^v).  The two are
related by (∂_i)^h = ∂_{x^i} - Γ^k_{ji} u^j ∂_{u^k}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .base_manifolds import NamedField, SpaceForm
from .core_tensor import (DEFAULT_CONFIG, DiffConfig, MetricField, christoffel,
                          covariant_derivative, directional, ricci, partials)
from .errors import DegenerateSpec, InvalidSpec, InvariantViolation, NotFlat

Array = np.ndarray
Scalar = Callable[[float], float]


def _const(v: float) -> Scalar:
    return lambda t: v


_NAMES = ("alpha1", "alpha2", "alpha3", "beta1", "beta2", "beta3")


@dataclass(frozen=True)
class GNaturalSpec:
    """The six coefficient functions of a g-natural metric on TM.

    Each function takes t = g_x(u, u).  ``derivatives`` may map a name to its
    exact derivative; missing ones fall back to a central difference.
    """

    alpha1: Scalar
    alpha2: Scalar
    alpha3: Scalar
    beta1: Scalar
    beta2: Scalar
    beta3: Scalar
    derivatives: dict = field(default_factory=dict)
    step_h: float = 1e-5

    @classmethod
    def constant(cls, alpha1=0.0, alpha2=0.0, alpha3=0.0, beta1=0.0, beta2=0.0, beta3=0.0):
        vals = dict(alpha1=alpha1, alpha2=alpha2, alpha3=alpha3, beta1=beta1, beta2=beta2, beta3=beta3)
        return cls(**{k: _const(float(v)) for k, v in vals.items()},
                   derivatives={k: _const(0.0) for k in vals})

    @classmethod
    def sasaki(cls):
        return cls.constant(alpha1=1.0)

    def value(self, name: str, t: float) -> float:
        return float(getattr(self, name)(t))

    def deriv(self, name: str, t: float) -> float:
        if name in self.derivatives:
            return float(self.derivatives[name](t))
        f, h = getattr(self, name), self.step_h
        if t - h < 0:
            # one-sided second-order stencil at the boundary of [0, ∞)
            return float((-3 * f(t) + 4 * f(t + h) - f(t + 2 * h)) / (2 * h))
        return float((f(t + h) - f(t - h)) / (2 * h))

    def phi_i(self, i: int, t: float) -> float:
        return self.value(f"alpha{i}", t) + t * self.value(f"beta{i}", t)

    def alpha(self, t: float) -> float:
        a1, a2, a3 = (self.value(f"alpha{i}", t) for i in (1, 2, 3))
        return a1 * (a1 + a3) - a2 ** 2

    def phi(self, t: float) -> float:
        p1, p2, p3 = (self.phi_i(i, t) for i in (1, 2, 3))
        return p1 * (p1 + p3) - p2 ** 2

    def classify(self, ts) -> str:
        """'degenerate', 'riemannian' or 'pseudo-riemannian' over the sampled t."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        al = np.array([self.alpha(t) for t in ts])
        ph = np.array([self.phi(t) for t in ts])
        if np.any(np.isclose(al, 0.0, atol=1e-12)) or np.any(np.isclose(ph, 0.0, atol=1e-12)):
            return "degenerate"
        a1 = np.array([self.value("alpha1", t) for t in ts])
        p1 = np.array([self.phi_i(1, t) for t in ts])
        if np.all(a1 > 0) and np.all(p1 > 0) and np.all(al > 0) and np.all(ph > 0):
            return "riemannian"
        return "pseudo-riemannian"

    def check_nondegenerate(self, ts) -> None:
        if self.classify(ts) == "degenerate":
            raise DegenerateSpec("alpha(t) or phi(t) vanishes at a sampled t")

    def frame_blocks(self, g: Array, u: Array) -> tuple[Array, Array, Array]:
        """The hh, hv and vv blocks of G at (x, u) in the h/v frame."""
        gu = g @ u
        t = float(u @ gu)
        uu = np.outer(gu, gu)
        v = {k: self.value(k, t) for k in _NAMES}
        hh = (v["alpha1"] + v["alpha3"]) * g + (v["beta1"] + v["beta3"]) * uu
        hv = v["alpha2"] * g + v["beta2"] * uu
        vv = v["alpha1"] * g + v["beta1"] * uu
        return hh, hv, vv


@dataclass(frozen=True)
class ABCSpec:
    """G = a g^s + b g^h + c g^v with constant a, b, c."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a == 0:
            raise InvalidSpec("a must be nonzero")
        if self.a + self.c == 0:
            raise InvalidSpec("a + c must be nonzero")
        if self.alpha == 0:
            raise InvalidSpec("a(a+c) - b^2 must be nonzero")

    @property
    def alpha(self) -> float:
        return self.a * (self.a + self.c) - self.b ** 2

    def to_gnatural(self) -> GNaturalSpec:
        return GNaturalSpec.constant(alpha1=self.a, alpha2=self.b, alpha3=self.c)

    def frame_matrix(self, g: Array) -> Array:
        return np.block([[(self.a + self.c) * g, self.b * g], [self.b * g, self.a * g]])


# ---------------------------------------------------------------------------
# frames and lifts


def base_christoffel(base: MetricField, x, cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
    """Analytic Christoffel symbols when the base carries them, else the oracle."""
    x = np.asarray(x, dtype=float)
    if base.christoffel is not None:
        return base.christoffel(x)
    return christoffel(base, x, cfg)


def connection_matrix(gamma: Array, u: Array) -> Array:
    """``N[k, i]`` = Γ^k_{ji} u^j, so that (∂_i)^h = ∂_{x^i} - N[k, i] ∂_{u^k}."""
    return np.einsum("kji,j->ki", gamma, u)


def frame_change(gamma: Array, u: Array) -> Array:
    """Columns are the h/v frame vectors written in induced coordinates."""
    n = u.size
    N = connection_matrix(gamma, u)
    return np.block([[np.eye(n), np.zeros((n, n))], [-N, np.eye(n)]])


def induced_to_frame(gamma: Array, u: Array) -> Array:
    """Inverse of :func:`frame_change`."""
    n = u.size
    N = connection_matrix(gamma, u)
    return np.block([[np.eye(n), np.zeros((n, n))], [N, np.eye(n)]])


def hv_to_induced(gamma: Array, u: Array, X: Array, Y: Array) -> Array:
    """Induced components of X^h + Y^v at (x, u)."""
    return np.concatenate([X, Y - connection_matrix(gamma, u) @ X])


def induced_to_hv(gamma: Array, u: Array, vec: Array) -> tuple[Array, Array]:
    n = u.size
    dx, du = vec[:n], vec[n:]
    return dx, du + connection_matrix(gamma, u) @ dx


def _field_value(X, x):
    return np.asarray(X(x) if callable(X) else X, dtype=float)


LIFT_KINDS = ("horizontal", "vertical", "complete", "iota", "star", "canonical", "geodesic")


def lift(kind: str, base: MetricField, x, u, X=None, P=None,
         cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
    """Lift base data to a tangent vector of TM at (x, u), in induced coordinates.

    ``X`` is a vector (or a vector field, required for ``complete``); ``P`` a
    matrix or a matrix-valued field for ``iota``/``star``.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    n = u.size
    zero = np.zeros(n)
    gamma = base_christoffel(base, x, cfg)
    if kind == "horizontal":
        return hv_to_induced(gamma, u, _field_value(X, x), zero)
    if kind == "vertical":
        return hv_to_induced(gamma, u, zero, _field_value(X, x))
    if kind == "canonical":
        return hv_to_induced(gamma, u, zero, u)
    if kind == "geodesic":
        return hv_to_induced(gamma, u, u, zero)
    if kind in ("iota", "star"):
        Pu = _field_value(P, x) @ u
        return hv_to_induced(gamma, u, zero, Pu) if kind == "iota" else hv_to_induced(gamma, u, Pu, zero)
    if kind == "complete":
        if not callable(X):
            raise ValueError("the complete lift needs a vector field")
        nab = covariant_derivative(base, X, x, cfg, gamma)
        return hv_to_induced(gamma, u, _field_value(X, x), nab @ u)
    raise ValueError(f"unknown lift kind {kind!r}; expected one of {LIFT_KINDS}")


@dataclass(frozen=True)
class LiftedField:
    """Vector field A^i (∂_i)^h + B^i (∂_i)^v on TM (or on T₁M).

    ``A`` and ``B`` are functions of (x, u) returning n-vectors.
    """

    A: Callable[[Array, Array], Array]
    B: Callable[[Array, Array], Array]
    label: str = ""

    @classmethod
    def zero(cls, n: int):
        z = lambda x, u: np.zeros(n)
        return cls(z, z, "zero")

    def __add__(self, other: "LiftedField") -> "LiftedField":
        return LiftedField(lambda x, u: self.A(x, u) + other.A(x, u),
                           lambda x, u: self.B(x, u) + other.B(x, u),
                           f"{self.label}+{other.label}")

    def scaled(self, s: float) -> "LiftedField":
        return LiftedField(lambda x, u: s * self.A(x, u), lambda x, u: s * self.B(x, u), f"{s:g}*{self.label}")

    def induced(self, base: MetricField, x, u, cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        gamma = base_christoffel(base, x, cfg)
        return hv_to_induced(gamma, u, np.asarray(self.A(x, u), float), np.asarray(self.B(x, u), float))

    def chart_field(self, base: MetricField, cfg: DiffConfig = DEFAULT_CONFIG) -> Callable[[Array], Array]:
        """The field as a function of the 2n induced coordinates."""
        n = base.dim
        return lambda p: self.induced(base, p[:n], p[n:], cfg)


def complete_lift_TM(xi: Callable[[Array], Array], base: MetricField,
                     cfg: DiffConfig = DEFAULT_CONFIG) -> LiftedField:
    """X^c = X^h + (∇_u X)^v as a :class:`LiftedField`."""
    def B(x, u):
        return covariant_derivative(base, xi, x, cfg, base_christoffel(base, x, cfg)) @ u
    return LiftedField(lambda x, u: _field_value(xi, x), B, "complete")


# ---------------------------------------------------------------------------
# metrics


def _tm_metric(base: MetricField, blocks: Callable[[Array, Array], Array], name: str,
               cfg: DiffConfig) -> MetricField:
    n = base.dim

    def evaluate(p):
        x, u = p[:n], p[n:]
        gamma = base_christoffel(base, x, cfg)
        Einv = induced_to_frame(gamma, u)
        return Einv.T @ blocks(base(x), u) @ Einv

    def domain(p):
        return base.contains(p[:n])

    return MetricField(dim=2 * n, eval=evaluate, domain=domain, name=name)


def classical_lift_frame(kind: str, g: Array) -> Array:
    z = np.zeros_like(g)
    if kind == "sasaki":
        return np.block([[g, z], [z, g]])
    if kind == "horizontal":
        return np.block([[z, g], [g, z]])
    if kind == "vertical":
        return np.block([[g, z], [z, z]])
    raise ValueError(f"unknown classical lift {kind!r}")


def classical_lift_metric(kind: str, base: MetricField, cfg: DiffConfig = DEFAULT_CONFIG) -> MetricField:
    """g^s, g^h or g^v in induced coordinates (g^v is degenerate)."""
    return _tm_metric(base, lambda g, u: classical_lift_frame(kind, g), f"g^{kind[0]}", cfg)


def gnat_metric_TM(spec: GNaturalSpec, base: MetricField, check_ts=None,
                   cfg: DiffConfig = DEFAULT_CONFIG) -> MetricField:
    """The g-natural metric of ``spec`` in induced coordinates.

    Raises DegenerateSpec if α(t) or φ(t) vanishes at one of ``check_ts``
    (default: a grid on [0, 4]).
    """
    spec.check_nondegenerate(np.linspace(0.0, 4.0, 41) if check_ts is None else check_ts)

    def blocks(g, u):
        hh, hv, vv = spec.frame_blocks(g, u)
        return np.block([[hh, hv], [hv.T, vv]])

    return _tm_metric(base, blocks, "g-natural", cfg)


def abc_metric_TM(abc: ABCSpec, base: MetricField, cfg: DiffConfig = DEFAULT_CONFIG) -> MetricField:
    return _tm_metric(base, lambda g, u: abc.frame_matrix(g), f"{abc.a:g}g^s+{abc.b:g}g^h+{abc.c:g}g^v", cfg)


def ricci_zero_section(spec: GNaturalSpec, base: MetricField, x,
                       cfg: DiffConfig = DEFAULT_CONFIG) -> Array:
    """Horizontal block of the Ricci tensor of (TM, G) on the zero section.

    Ric_x is computed by the oracle on the base metric.
    """
    x = np.asarray(x, dtype=float)
    a1, a2, a3 = (spec.value(f"alpha{i}", 0.0) for i in (1, 2, 3))
    s13 = a1 + a3
    ric = ricci(base, x, cfg)
    if s13 != 0:
        D = a1 * s13 - 2 * a2 ** 2
        b13 = spec.value("beta1", 0.0) + spec.value("beta3", 0.0)
        ds13 = spec.deriv("alpha1", 0.0) + spec.deriv("alpha3", 0.0)
        return (D * ric - s13 * (b13 + base.dim * ds13) * base(x)) / spec.alpha(0.0)
    if a2 == 0:
        raise InvalidSpec("(alpha1+alpha3)(0) and alpha2(0) both vanish")
    return 2.0 * ric


# ---------------------------------------------------------------------------
# flat base: Lie derivatives and homothetic fields


def _require_flat(sf: SpaceForm):
    if sf.kappa != 0:
        raise NotFlat(f"base curvature is {sf.kappa}, a flat base is required")


def lie_closed_TM_flat(abc: ABCSpec, sf: SpaceForm, Z: LiftedField, x, u, X, Y,
                       cfg: DiffConfig = DEFAULT_CONFIG) -> dict:
    """Closed-form (L_Z G)(X^a, Y^b) for a, b in {h, v} on a flat base.

    ``X`` and ``Y`` are vectors at x, extended as coordinate-constant fields.
    Derivatives of the components of Z along lifted vectors are taken by
    central differences in (x, u).
    """
    _require_flat(sf)
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    n = sf.n
    a, b, c = abc.a, abc.b, abc.c
    g = sf.metric_at(x)
    gamma = sf.christoffel_at(x)
    h = cfg.step_h
    p = np.concatenate([x, u])

    def comps(q):
        return np.concatenate([Z.A(q[:n], q[n:]), Z.B(q[:n], q[n:])])

    def along(vec):
        d = directional(comps, p, vec, h)
        return d[:n], d[n:]

    XhA, XhB = along(hv_to_induced(gamma, u, X, np.zeros(n)))
    YhA, YhB = along(hv_to_induced(gamma, u, Y, np.zeros(n)))
    XvA, XvB = along(hv_to_induced(gamma, u, np.zeros(n), X))
    YvA, YvB = along(hv_to_induced(gamma, u, np.zeros(n), Y))
    A, B = Z.A(x, u), Z.B(x, u)
    # (L_{∂_i} g)(X, Y) and g(∇_{∂_i} X, Y) for coordinate-constant X, Y
    dg = np.einsum("mil,mj->lij", gamma, g)
    lie_coord = np.einsum("lij,i,j->l", dg + np.transpose(dg, (0, 2, 1)), X, Y)
    nabla_X = np.einsum("kil,l->ik", gamma, X)  # row i: ∇_{∂_i} X
    gX, gY = g @ X, g @ Y

    hh = (((a + c) * A + b * B) @ lie_coord
          + ((a + c) * XhA + b * XhB) @ gY + ((a + c) * YhA + b * YhB) @ gX)
    hv = ((b * A + a * B) @ (nabla_X @ gY)
          + (b * XhA + a * XhB) @ gY + ((a + c) * YvA + b * YvB) @ gX)
    vv = (b * XvA + a * XvB) @ gY + (b * YvA + a * YvB) @ gX
    return {"hh": float(hh), "hv": float(hv), "vv": float(vv)}


def _is_affine(xi, n: int, rng=None, h: float = 1e-3) -> bool:
    if isinstance(xi, NamedField):
        return True
    rng = np.random.default_rng(0) if rng is None else rng
    for _ in range(3):
        x = rng.uniform(-1, 1, n)
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            second = (np.asarray(xi(x + e)) - 2 * np.asarray(xi(x)) + np.asarray(xi(x - e))) / h ** 2
            if np.max(np.abs(second)) > 1e-4:
                return False
    return True


@dataclass(frozen=True)
class HomotheticDataTM:
    """Data (ζ, P, ξ, λ) building a homothetic field on TM over a flat base.

    ζ should satisfy L_ζ g = 2λ(a+c) g; this is not enforced at
    construction (see :meth:`check_zeta`).
    """

    zeta: NamedField
    P: Array
    xi: NamedField
    lam: float

    def __post_init__(self):
        P = np.asarray(self.P, dtype=float)
        object.__setattr__(self, "P", P)
        if not np.allclose(P, -P.T, atol=1e-12):
            raise InvariantViolation("P must be skew-symmetric")
        if not _is_affine(self.xi, P.shape[0]):
            raise InvariantViolation("xi must be affine (its Hessian has to vanish)")

    def check_zeta(self, sf: SpaceForm, abc: ABCSpec, cfg: DiffConfig = DEFAULT_CONFIG) -> bool:
        from .base_manifolds import conformal_factor
        cls = conformal_factor(sf, self.zeta, cfg=cfg)
        target = self.lam * (abc.a + abc.c)
        return cls.lambda0 is not None and abs(cls.lambda0 - target) < 1e-6


def c_tensor_flat(xi) -> Callable[[Array], Array]:
    """C(ξ) = -(∇ξ)ᵀ on a flat Cartesian chart."""
    if isinstance(xi, NamedField):
        C = -xi.jacobian().T
        return lambda x: C
    return lambda x: -partials(xi, np.asarray(x, float), 1e-5)  # rows ∂_i ξ, i.e. Jᵀ


def build_homothetic_TM(data: HomotheticDataTM, abc: ABCSpec) -> LiftedField:
    """The homothetic field on (TM, a g^s + b g^h + c g^v) over flat space.

    Components in the h/v frame (equal to induced coordinates on a flat
    Cartesian base):

        A = (aζ - bξ + [aC(ξ) - bP + λab I] u) / α
        B = (-bζ + (a+c)ξ + [-bC(ξ) + (a+c)P + λ(α - b²) I] u) / α
    """
    a, b, c, al, lam = abc.a, abc.b, abc.c, abc.alpha, data.lam
    P = data.P
    n = P.shape[0]
    C = c_tensor_flat(data.xi)
    eye = np.eye(n)

    def A(x, u):
        lin = a * C(x) - b * P + lam * a * b * eye
        return (a * data.zeta(x) - b * data.xi(x) + lin @ u) / al

    def B(x, u):
        lin = -b * C(x) + (a + c) * P + lam * (al - b ** 2) * eye
        return (-b * data.zeta(x) + (a + c) * data.xi(x) + lin @ u) / al

    return LiftedField(A, B, "homothetic")


def frame_basis(sf_or_base, x) -> Array:
    """Columns: a g-orthonormal basis of the base tangent space at x."""
    if isinstance(sf_or_base, SpaceForm):
        return sf_or_base.orthonormal_frame(x)
    G = sf_or_base(np.asarray(x, float))
    w, V = np.linalg.eigh(G)
    return V / np.sqrt(w)
