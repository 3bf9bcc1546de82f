"""Frame functions on P(H_n) and the inverse quantization maps.

A frame function is stored by its backing operator ``B``: ``f(p) = tr(B p)``.
For n > 2 this representation is faithful, so every identity below is
evaluated exactly on backing operators; Monte Carlo paths exist to check
them against the measure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (ValidationError, as_square, check_density, check_hermitian,
                     hermitian_basis, is_hermitian)
from .projective import ProjectivePoint, cotangent_pairing, mc_integrate, poisson_bracket_at

IS_OBSERVABLE_TOL = 1e-6
PURITY_TOL = 1e-10


def default_kappa(n: int) -> float:
    return float(n + 1)


def _check_kappa(kappa, n):
    kappa = default_kappa(n) if kappa is None else float(kappa)
    if not kappa > 0:
        raise ValidationError(f"kappa must be positive, got {kappa}")
    return kappa


def _check_dim(n):
    if n <= 2:
        raise ValidationError(
            f"dim H = {n}: frame functions represent operators only for n > 2")


@dataclass(frozen=True)
class FrameFunction:
    """f(p) = tr(B p) on P(H_n), with the kappa of the map that produced it.

    ``dims`` is set for functions on a bipartite space H tensor K.
    """

    operator: np.ndarray
    kappa: float | None = None
    dims: tuple[int, int] | None = None

    def __post_init__(self):
        b = as_square(self.operator, "backing operator").copy()
        _check_dim(b.shape[0])
        if self.dims is not None:
            n, m = self.dims
            if n * m != b.shape[0]:
                raise ValidationError(f"dims {self.dims} do not match operator size {b.shape[0]}")
            object.__setattr__(self, "dims", (int(n), int(m)))
        b.setflags(write=False)
        object.__setattr__(self, "operator", b)

    @property
    def dim(self) -> int:
        return self.operator.shape[0]

    @property
    def is_real(self) -> bool:
        return is_hermitian(self.operator, 1e-10)

    @property
    def frame_weight(self) -> complex:
        return complex(np.trace(self.operator))

    def __call__(self, point):
        """Evaluate at a ProjectivePoint, a unit vector, or an (N, n) batch of rows."""
        if isinstance(point, ProjectivePoint):
            point = point.psi
        v = np.asarray(point)
        vals = np.einsum("...i,ij,...j->...", v.conj(), self.operator, v)
        if self.is_real:
            vals = vals.real
        return vals if vals.ndim else vals.item()

    def to_json(self) -> dict:
        from .io import matrix_to_json
        out = matrix_to_json(self.operator, self.dims)
        out["kappa"] = self.kappa
        return out


def observable_to_function(a, kappa: float | None = None) -> FrameFunction:
    """O(A): f_A(p) = kappa tr(A p) + ((1 - kappa)/n) tr(A)."""
    a = check_hermitian(a, name="observable")
    n = a.shape[0]
    _check_dim(n)
    k = _check_kappa(kappa, n)
    b = k * a + ((1 - k) / n) * np.trace(a) * np.eye(n)
    return FrameFunction(b, k)


def operator_to_function(a, kappa: float | None = None) -> FrameFunction:
    """Linear extension of O to arbitrary (non-Hermitian) operators."""
    a = as_square(a)
    n = a.shape[0]
    _check_dim(n)
    k = _check_kappa(kappa, n)
    return FrameFunction(k * a + ((1 - k) / n) * np.trace(a) * np.eye(n), k)


def function_to_observable(f: FrameFunction, kappa: float | None = None) -> np.ndarray:
    """O^{-1}: invert B = kappa A + ((1 - kappa)/n) tr(A) I, using tr B = tr A."""
    n = f.dim
    k = _check_kappa(f.kappa if kappa is None else kappa, n)
    b = f.operator
    return (b - ((1 - k) / n) * np.trace(b) * np.eye(n)) / k


def state_to_density(sigma, kappa: float | None = None) -> FrameFunction:
    """S(sigma).

    For kappa = n + 1 (default) the density is tr(sigma p), normalized
    against the mass-n measure. For any other kappa it is the
    un-renormalized n(n+1)/kappa tr(sigma p) + (kappa - (n+1))/kappa, which
    pairs with the probability measure.
    """
    sigma = check_density(sigma)
    n = sigma.shape[0]
    _check_dim(n)
    k = _check_kappa(kappa, n)
    if k == n + 1:
        return FrameFunction(sigma, k)
    b = (n * (n + 1) / k) * sigma + ((k - (n + 1)) / k) * np.eye(n)
    return FrameFunction(b, k)


def operator_to_density(a) -> FrameFunction:
    """S extended linearly to every operator: S(A)(p) = tr(A p)."""
    return FrameFunction(a, None)


def density_to_state(rho: FrameFunction, kappa: float | None = None) -> np.ndarray:
    """S^{-1}; the exact inverse of :func:`state_to_density` / :func:`operator_to_density`."""
    n = rho.dim
    k = rho.kappa if kappa is None else kappa
    if k is None or float(k) == n + 1:
        return np.array(rho.operator)
    k = _check_kappa(k, n)
    return (k * rho.operator - (k - (n + 1)) * np.eye(n)) / (n * (n + 1))


def exact_integral(f: FrameFunction) -> complex:
    """int f dnu (mass-n measure) = tr of the backing operator."""
    return complex(np.trace(f.operator))


def exact_l2_inner(f: FrameFunction, g: FrameFunction) -> complex:
    """int conj(f) g dnu = (tr(A^H B) + conj(tr A) tr B) / (n + 1)."""
    if f.dim != g.dim:
        raise ValidationError(f"dimension mismatch {f.dim} vs {g.dim}")
    a, b = f.operator, g.operator
    return complex((np.vdot(a, b) + np.conj(np.trace(a)) * np.trace(b)) / (f.dim + 1))


def l2_distance(f: FrameFunction, g: FrameFunction) -> float:
    d = FrameFunction(f.operator - g.operator)
    return float(np.sqrt(exact_l2_inner(d, d).real))


def mc_l2_inner(f: FrameFunction, g: FrameFunction, n_samples: int = 100_000, seed: int = 0):
    return mc_integrate(lambda v: np.conj(f(v)) * g(v), f.dim, "nu", n_samples, seed)


@dataclass(frozen=True)
class PurityReport:
    pure: bool
    squared_norm: float
    target: float
    mc: object = None

    def to_json(self) -> dict:
        out = {"verdict": "pure" if self.pure else "mixed",
               "squared_l2_norm": self.squared_norm, "pure_value": self.target}
        if self.mc is not None:
            out["mc"] = self.mc.to_json()
        return out


def purity_check(rho: FrameFunction, n_samples: int = 0, seed: int = 0) -> PurityReport:
    """Pure iff the squared L2 norm equals 2/(n+1); optional MC estimate alongside."""
    n = rho.dim
    val = exact_l2_inner(rho, rho).real
    target = 2 / (n + 1)
    mc = mc_l2_inner(rho, rho, n_samples, seed) if n_samples else None
    return PurityReport(abs(val - target) <= PURITY_TOL, val, target, mc)


def _require_default_kappa(*fs):
    for f in fs:
        if f.kappa is not None and f.kappa != f.dim + 1:
            raise ValidationError("operation is defined for the kappa = n + 1 convention")


def star_product(f: FrameFunction, g: FrameFunction) -> FrameFunction:
    """f * g = O(O^{-1}(f) O^{-1}(g)) for kappa = n + 1."""
    if f.dim != g.dim:
        raise ValidationError(f"dimension mismatch {f.dim} vs {g.dim}")
    _require_default_kappa(f, g)
    k = default_kappa(f.dim)
    a = function_to_observable(f, k)
    b = function_to_observable(g, k)
    return operator_to_function(a @ b, k)


def star_product_geometric(f: FrameFunction, g: FrameFunction, point: ProjectivePoint,
                           grouping: str = "exact", convention: str = "nu") -> complex:
    """Right-hand side of the geometric star-product expansion at ``point``.

    Poisson bracket and one-form pairing are built from omega and the
    Fubini-Study metric with kappa = n + 1. ``grouping="exact"`` (default)
    uses (fg - int fg + f int g + g int f)/(n+1) with mass-n integrals and
    reproduces the operator product. ``grouping="factored"`` evaluates the
    alternative n/(n+1) (fg/n - int fg - f int g - g int f), kept only to
    measure its disagreement.
    """
    n = f.dim
    k = default_kappa(n)
    pb = poisson_bracket_at(f.operator, g.operator, point, k)
    gg = cotangent_pairing(f.operator, g.operator, point, k)
    fv, gv = f(point), g(point)
    int_f = exact_integral(f)
    int_g = exact_integral(g)
    int_fg = exact_l2_inner(conjugate(f), g)
    if convention == "nu1":
        int_f, int_g, int_fg = int_f / n, int_g / n, int_fg / n
    if grouping == "factored":
        rest = n / (n + 1) * (fv * gv / n - int_fg - fv * int_g - gv * int_f)
    elif grouping == "exact":
        rest = (fv * gv - int_fg + fv * int_g + gv * int_f) / (n + 1)
    else:
        raise ValidationError(f"unknown grouping {grouping!r}")
    return complex(0.5j * pb + 0.5 * gg + rest)


def cstar_norm(f: FrameFunction) -> float:
    """|||f||| = operator norm of O^{-1}(f)."""
    return float(np.linalg.norm(function_to_observable(f, default_kappa(f.dim)), 2))


def conjugate(f: FrameFunction) -> FrameFunction:
    """Pointwise complex conjugate (the star involution)."""
    return FrameFunction(f.operator.conj().T, f.kappa, f.dims)


def poisson_bracket(f: FrameFunction, g: FrameFunction) -> FrameFunction:
    """{f, g} for S-type functions, realized as -i S([tau, tau'])."""
    if f.dim != g.dim:
        raise ValidationError(f"dimension mismatch {f.dim} vs {g.dim}")
    t, s = f.operator, g.operator
    return FrameFunction(-1j * (t @ s - s @ t), None)


def metric_pairing_G(f: FrameFunction, g: FrameFunction):
    """p -> S(tau tau' + tau' tau)(p) - 2 f(p) g(p); returned as a pointwise evaluator."""
    if f.dim != g.dim:
        raise ValidationError(f"dimension mismatch {f.dim} vs {g.dim}")
    t, s = f.operator, g.operator
    sym = FrameFunction(t @ s + s @ t, None)

    def evaluate(point):
        return sym(point) - 2 * f(point) * g(point)

    return evaluate


def metric_pairing_geometric(f: FrameFunction, g: FrameFunction, point: ProjectivePoint,
                             kappa: float = 1.0) -> complex:
    """G(df, dg) at ``point`` from the Fubini-Study metric itself.

    The idempotence identity G(dg, dg) = 2(g - g^2) needs the metric scale
    kappa = 1; the algebraic :func:`metric_pairing_G` equals this value.
    """
    return cotangent_pairing(f.operator, g.operator, point, kappa)


def expectation_pairing(a, sigma, kappa: float | None = None, n_samples: int = 0, seed: int = 0):
    """tr(A sigma) and, when ``n_samples`` > 0, its phase-space integral estimate.

    kappa = n + 1 pairs with the mass-n measure; any other kappa pairs the
    un-renormalized density with the probability measure.
    """
    a = check_hermitian(a)
    sigma = check_density(sigma)
    n = a.shape[0]
    k = _check_kappa(kappa, n)
    exact = float(np.trace(a @ sigma).real)
    if not n_samples:
        return exact, None
    f = observable_to_function(a, k)
    rho = state_to_density(sigma, k)
    conv = "nu" if k == n + 1 else "nu1"
    return exact, mc_integrate(lambda v: f(v) * rho(v), n, conv, n_samples, seed)


@dataclass(frozen=True)
class ObservableFit:
    accepted: bool
    operator: np.ndarray | None
    residual: float

    def __bool__(self):
        return self.accepted


def is_observable(samples, kappa: float | None = None,
                  tol: float = IS_OBSERVABLE_TOL) -> ObservableFit:
    """Decide whether sampled values come from some O(A).

    ``samples`` is a sequence of ``(point, value)``. A Hermitian backing
    operator is fitted by least squares in a Hermitian basis; the candidate
    is accepted iff the max absolute residual is within ``tol``.
    """
    samples = list(samples)
    if not samples:
        raise ValidationError("no samples")
    pts = [s[0] if isinstance(s[0], ProjectivePoint) else ProjectivePoint(s[0]) for s in samples]
    vals = np.array([s[1] for s in samples], dtype=float)
    n = pts[0].dim
    _check_dim(n)
    k = _check_kappa(kappa, n)
    if len(pts) < n * n:
        raise ValidationError(f"need at least n^2 = {n * n} samples, got {len(pts)}")
    basis = hermitian_basis(n)
    design = np.array([[np.vdot(p.psi, g @ p.psi).real for g in basis] for p in pts])
    if np.linalg.matrix_rank(design) < n * n:
        raise ValidationError("sample points do not determine an operator (rank deficient)")
    coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
    resid = float(np.max(np.abs(design @ coef - vals)))
    backing = sum(c * g for c, g in zip(coef, basis))
    a = function_to_observable(FrameFunction(backing, k), k)
    a = (a + a.conj().T) / 2
    if resid <= tol:
        return ObservableFit(True, a, resid)
    return ObservableFit(False, None, resid)
