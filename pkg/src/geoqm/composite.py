"""Bipartite phase space: Segre embedding, diamond product, partial integrals.

Measures: nu_H (mass n), nu_K (mass m) and, on P(H tensor K), nu (mass nm).
With these masses the product-space integral of rho o Seg matches the
big-space integral for every frame function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frame import FrameFunction, exact_integral
from .linalg import ValidationError, partial_trace
from .projective import MCEstimate, ProjectivePoint, accumulate, haar_vectors


@dataclass(frozen=True)
class ProductPoint:
    p1: ProjectivePoint
    p2: ProjectivePoint

    def __post_init__(self):
        if self.p1.dim < 3 or self.p2.dim < 3:
            raise ValidationError("product points need factor dimensions > 2")

    @property
    def dims(self) -> tuple[int, int]:
        return self.p1.dim, self.p2.dim


def _require_dims(f: FrameFunction) -> tuple[int, int]:
    if f.dims is None:
        raise ValidationError("bipartite frame function needs dims (n, m)")
    n, m = f.dims
    if n < 3 or m < 3:
        raise ValidationError(f"factor dimensions must exceed 2, got {f.dims}")
    return n, m


def bipartite(operator, dims, kappa=None) -> FrameFunction:
    """S-type frame function on H tensor K with dims metadata."""
    f = FrameFunction(operator, kappa, tuple(dims))
    _require_dims(f)
    return f


def segre(p1: ProjectivePoint, p2: ProjectivePoint) -> ProjectivePoint:
    """Seg(p1, p2) = p1 tensor p2, represented by psi1 tensor psi2."""
    ProductPoint(p1, p2)
    return ProjectivePoint(np.kron(p1.psi, p2.psi))


def segre_vectors(v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    """Row-wise Kronecker products of two (N, n) and (N, m) batches."""
    return np.einsum("ki,kj->kij", v1, v2).reshape(v1.shape[0], -1)


def pullback(f: FrameFunction):
    """I(f) = Seg^* f as a function of (p1, p2) or of two row batches."""
    _require_dims(f)

    def g(p1, p2=None):
        if isinstance(p1, ProductPoint):
            p1, p2 = p1.p1, p1.p2
        if isinstance(p1, ProjectivePoint):
            return f(segre(p1, p2))
        return f(segre_vectors(np.atleast_2d(p1), np.atleast_2d(p2)))

    return g


def from_product_terms(terms, dims) -> FrameFunction:
    """J: sum_i g1_i(p1) g2_i(p2) -> the frame function tr((sum_i A1_i tensor A2_i) p)."""
    op = sum(np.kron(a.operator, b.operator) for a, b in terms)
    return bipartite(op, dims)


def diamond_product(rho1: FrameFunction, rho2: FrameFunction) -> FrameFunction:
    """rho1 <> rho2 with S^{-1}(rho1 <> rho2) = S_H^{-1}(rho1) tensor S_K^{-1}(rho2)."""
    for r in (rho1, rho2):
        if r.kappa is not None and r.kappa != r.dim + 1:
            raise ValidationError("diamond product needs S-type (kappa = n + 1) factors")
    return bipartite(np.kron(rho1.operator, rho2.operator), (rho1.dim, rho2.dim))


def diamond_kernel(point: ProjectivePoint, v1: np.ndarray, v2: np.ndarray, dims) -> np.ndarray:
    """T(p, p1, p2) = tr[p S_H(p1) tensor S_K(p2)] for batches of p1, p2 rows."""
    n, m = dims
    psi = point.psi.reshape(n, m)
    # tr[p (A tensor B)] = sum psi*_{ab} A_{ac} B_{bd} psi_{cd}
    a = (n + 1) * np.einsum("ki,kj->kij", v1, v1.conj()) - np.eye(n)
    b = (m + 1) * np.einsum("ki,kj->kij", v2, v2.conj()) - np.eye(m)
    return np.einsum("ab,kac,kbd,cd->k", psi.conj(), a, b, psi).real


def diamond_product_mc(rho1: FrameFunction, rho2: FrameFunction, point: ProjectivePoint,
                       n_samples: int = 100_000, seed: int = 0) -> MCEstimate:
    """(rho1 <> rho2)(p) by smearing rho1 rho2 with the kernel T over nu_H x nu_K."""
    dims = (rho1.dim, rho2.dim)
    n, m = dims

    def sampler(rngs, k):
        v1 = haar_vectors(n, k, rngs[0])
        v2 = haar_vectors(m, k, rngs[1])
        return rho1(v1) * rho2(v2) * diamond_kernel(point, v1, v2, dims)

    acc = accumulate(sampler, n_samples, seed, streams=2)
    mass = n * m
    return MCEstimate(float(mass * np.real(acc.mean)),
                      float(mass * np.sqrt(acc.variance / acc.count)), acc.count, seed)


def partial_integral(rho: FrameFunction, side: str = "K") -> FrameFunction:
    """rho_K (integrate out P(K), side="K") or rho_H (side="H"), exactly.

    The backing operator of rho_K is the partial trace tr_K of rho's.
    """
    n, m = _require_dims(rho)
    return FrameFunction(partial_trace(rho.operator, side, (n, m)), None)


def partial_integral_mc(rho: FrameFunction, point: ProjectivePoint, side: str = "K",
                        n_samples: int = 100_000, seed: int = 0) -> MCEstimate:
    """rho_K(p1) = int (rho o Seg)(p1, p2) dnu_K(p2) by sampling the integrated factor."""
    n, m = _require_dims(rho)
    g = pullback(rho)
    if side == "K":
        other = m
        sampler = lambda rng, k: g(np.repeat(point.psi[None], k, 0), haar_vectors(m, k, rng))
    elif side == "H":
        other = n
        sampler = lambda rng, k: g(haar_vectors(n, k, rng), np.repeat(point.psi[None], k, 0))
    else:
        raise ValidationError(f"side must be 'H' or 'K', got {side!r}")
    acc = accumulate(sampler, n_samples, seed)
    return MCEstimate(complex(other * acc.mean) if np.iscomplexobj(acc.mean) else float(other * acc.mean),
                      float(other * np.sqrt(acc.variance / acc.count)), acc.count, seed)


@dataclass(frozen=True)
class ProductIntegral:
    product_space: MCEstimate
    big_space_exact: complex

    @property
    def z_score(self) -> float:
        se = self.product_space.std_error
        diff = abs(complex(self.product_space.value) - self.big_space_exact)
        return diff / se if se > 0 else (0.0 if diff < 1e-12 else np.inf)


def product_space_integral(rho: FrameFunction, n_samples: int = 100_000,
                           seed: int = 0) -> ProductIntegral:
    """Compare int int rho o Seg dnu_H dnu_K (MC) with int rho dnu (exact)."""
    n, m = _require_dims(rho)
    g = pullback(rho)
    acc = accumulate(lambda rngs, k: g(haar_vectors(n, k, rngs[0]), haar_vectors(m, k, rngs[1])),
                     n_samples, seed, streams=2)
    mass = n * m
    mean = acc.mean
    val = complex(mass * mean) if np.iscomplexobj(mean) and np.imag(mean) != 0 else float(mass * np.real(mean))
    est = MCEstimate(val, float(mass * np.sqrt(acc.variance / acc.count)), acc.count, seed)
    return ProductIntegral(est, exact_integral(rho))
