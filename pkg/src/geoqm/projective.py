"""Phase space P(H_n): points, Haar sampling, the Kahler triple and MC integration.

Two measure normalizations are used throughout:

* ``nu1`` -- the unitarily invariant probability measure (total mass 1);
* ``nu``  -- the Liouville normalization ``n * nu1`` (total mass n).

The trace-integral identities (``int tr(B p) dnu = tr B`` and friends) hold
for ``nu``. The general-kappa expectation pairing holds for ``nu1`` together
with the un-renormalized state densities.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .linalg import ValidationError, check_hermitian, projector

CHUNK = 1 << 15


# -- rng --------------------------------------------------------------------


def make_rng(seed) -> np.random.Generator:
    """Counter-based (Philox) generator for an int seed or a SeedSequence."""
    if isinstance(seed, np.random.Generator):
        return seed
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(ss))


def shard_seeds(seed: int, shards: int) -> list[np.random.SeedSequence]:
    """Sub-streams for a shard plan. Shard i of seed s is always the same stream."""
    return np.random.SeedSequence(int(seed)).spawn(int(shards))


def shard_sizes(n_samples: int, shards: int) -> list[int]:
    base, extra = divmod(int(n_samples), int(shards))
    return [base + (i < extra) for i in range(shards)]


# -- points -----------------------------------------------------------------


def canonical_phase(vectors: np.ndarray) -> np.ndarray:
    """Rotate each row so its first nonzero component is real and positive."""
    v = np.atleast_2d(vectors)
    idx = np.argmax(np.abs(v) > 1e-300, axis=1)
    lead = v[np.arange(v.shape[0]), idx]
    phase = np.where(np.abs(lead) > 0, lead / np.where(lead == 0, 1, np.abs(lead)), 1.0)
    out = v * phase.conj()[:, None]
    rows = np.arange(v.shape[0])
    out[rows, idx] = np.abs(lead)
    return out if np.ndim(vectors) == 2 else out[0]


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A point of P(H_n): unit representative psi and its projector |psi><psi|."""

    psi: np.ndarray
    p: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=complex).ravel()
        nrm = np.linalg.norm(psi)
        if nrm == 0:
            raise ValidationError("zero vector does not define a projective point")
        if abs(nrm - 1) > 1e-12:
            psi = psi / nrm
        psi = canonical_phase(psi)
        psi.setflags(write=False)
        p = projector(psi)
        p.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "p", p)

    @property
    def dim(self) -> int:
        return self.psi.size

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.dim == other.dim and bool(np.allclose(self.p, other.p, rtol=0, atol=1e-12))

    __hash__ = None

    @classmethod
    def basis(cls, n: int, i: int) -> "ProjectivePoint":
        e = np.zeros(n, dtype=complex)
        e[i] = 1
        return cls(e)


def haar_vectors(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` Haar-random unit vectors of C^n as rows, canonical phase."""
    z = rng.standard_normal((size, n)) + 1j * rng.standard_normal((size, n))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return canonical_phase(z)


def sample_haar(n: int, rng) -> ProjectivePoint:
    if n < 2:
        raise ValidationError(f"projective space needs n >= 2, got {n}")
    return ProjectivePoint(haar_vectors(n, 1, make_rng(rng))[0])


def d2_distance(p: ProjectivePoint, q: ProjectivePoint) -> float:
    if p.dim != q.dim:
        raise ValidationError(f"dimension mismatch {p.dim} vs {q.dim}")
    a = np.linalg.norm(p.psi) ** 4 + np.linalg.norm(q.psi) ** 4
    val = a - 2 * abs(np.vdot(p.psi, q.psi)) ** 2
    return float(np.sqrt(max(val, 0.0)))


# -- Kahler triple ----------------------------------------------------------


def _comm(a, b):
    return a @ b - b @ a


@dataclass(frozen=True)
class TangentVector:
    """Tangent vector v = -i[A, p] at ``base`` generated by Hermitian ``generator``."""

    base: ProjectivePoint
    generator: np.ndarray

    def __post_init__(self):
        a = check_hermitian(self.generator, 1e-10, "generator")
        if a.shape[0] != self.base.dim:
            raise ValidationError("generator dimension does not match base point")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "generator", a)

    @property
    def vector(self) -> np.ndarray:
        return -1j * _comm(self.generator, self.base.p)


def _same_base(u: TangentVector, v: TangentVector):
    if u.base is not v.base and not np.allclose(u.base.p, v.base.p, atol=1e-12):
        raise ValidationError("tangent vectors live at different base points")


def _kappa(kappa, n):
    kappa = n + 1 if kappa is None else float(kappa)
    if kappa <= 0:
        raise ValidationError(f"kappa must be positive, got {kappa}")
    return kappa


def symplectic_form(u: TangentVector, v: TangentVector, kappa: float | None = None) -> float:
    """omega_p(u, v) = -i kappa tr([A_u, A_v] p)."""
    _same_base(u, v)
    k = _kappa(kappa, u.base.dim)
    return float((-1j * k * np.trace(_comm(u.generator, v.generator) @ u.base.p)).real)


def fubini_study_metric(u: TangentVector, v: TangentVector, kappa: float | None = None) -> float:
    """g_p(u, v) = -kappa tr(([A_u,p][A_v,p] + [A_v,p][A_u,p]) p)."""
    _same_base(u, v)
    p = u.base.p
    k = _kappa(kappa, u.base.dim)
    cu, cv = _comm(u.generator, p), _comm(v.generator, p)
    return float((-k * np.trace((cu @ cv + cv @ cu) @ p)).real)


def complex_structure(v: TangentVector) -> TangentVector:
    """j_p v = i[v, p]; realized by the generator -v since -i[-v, p] = i[v, p]."""
    return TangentVector(v.base, -v.vector)


def tangent_basis(point: ProjectivePoint) -> list[TangentVector]:
    """Real basis of T_p P(H_n) (2n - 2 vectors).

    For each unit vector e orthogonal to psi the generators i(|e><psi| - |psi><e|)
    and |e><psi| + |psi><e| realize the directions e and i e.
    """
    n = point.dim
    psi = point.psi
    q, _ = np.linalg.qr(np.column_stack([psi, np.eye(n, dtype=complex)]))
    perp = q[:, 1:n]
    out = []
    for k in range(n - 1):
        e = perp[:, k]
        out.append(TangentVector(point, 1j * (np.outer(e, psi.conj()) - np.outer(psi, e.conj()))))
        out.append(TangentVector(point, np.outer(e, psi.conj()) + np.outer(psi, e.conj())))
    return out


def _differential(op: np.ndarray, basis: list[TangentVector]) -> np.ndarray:
    # d(tr(op p))(v) = tr(op v)
    return np.array([np.trace(op @ t.vector) for t in basis])


def cotangent_pairing(op_f, op_g, point: ProjectivePoint, kappa: float | None = None) -> complex:
    """Scalar product G(df, dg) of the differentials of f = tr(op_f p), g = tr(op_g p).

    Computed geometrically: components of df, dg on a tangent basis are
    contracted with the inverse of the Fubini-Study Gram matrix.
    """
    basis = tangent_basis(point)
    gram = np.array([[fubini_study_metric(a, b, kappa) for b in basis] for a in basis])
    df = _differential(np.asarray(op_f), basis)
    dg = _differential(np.asarray(op_g), basis)
    return complex(df @ np.linalg.solve(gram, dg))


def poisson_bracket_at(op_f, op_g, point: ProjectivePoint, kappa: float | None = None) -> complex:
    """{f, g}(p) = omega(X_f, X_g) with the convention iota_{X_f} omega = df."""
    basis = tangent_basis(point)
    om = np.array([[symplectic_form(a, b, kappa) for b in basis] for a in basis])
    df = _differential(np.asarray(op_f), basis)
    dg = _differential(np.asarray(op_g), basis)
    # X_f = x^a e_a with omega_{ab} x^a = df_b, so {f, g} = x_f^T omega x_g
    xf = np.linalg.solve(om.T, df)
    xg = np.linalg.solve(om.T, dg)
    return complex(xf @ om @ xg)


# -- measures and Monte Carlo -----------------------------------------------


@dataclass(frozen=True)
class MeasureConvention:
    total_mass: float
    name: str

    @classmethod
    def probability(cls) -> "MeasureConvention":
        return cls(1.0, "nu1")

    @classmethod
    def liouville(cls, n: int) -> "MeasureConvention":
        return cls(float(n), "nu")

    @classmethod
    def resolve(cls, convention, n: int) -> "MeasureConvention":
        if isinstance(convention, MeasureConvention):
            if convention.total_mass not in (1.0, float(n)):
                raise ValidationError(f"total mass must be 1 or {n}")
            return convention
        if convention in ("nu", "liouville"):
            return cls.liouville(n)
        if convention in ("nu1", "probability"):
            return cls.probability()
        raise ValidationError(f"unknown measure convention {convention!r}")


@dataclass(frozen=True)
class MCEstimate:
    value: complex | float
    std_error: float
    n_samples: int
    seed: int

    def to_json(self) -> dict:
        v = complex(self.value)
        value = v.real if v.imag == 0 else {"re": v.real, "im": v.imag}
        return {"value": value, "std_error": float(self.std_error),
                "n_samples": int(self.n_samples), "seed": int(self.seed)}


class Moments:
    """Running mean and centered second moment; mergeable (Chan et al.)."""

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0

    def add_batch(self, x: np.ndarray):
        x = np.asarray(x)
        k = x.shape[0]
        if k == 0:
            return self
        mean = x.mean(axis=0)
        m2 = (np.abs(x - mean) ** 2).sum(axis=0)
        return self.merge_raw(k, mean, m2)

    def merge_raw(self, k, mean, m2):
        if self.count == 0:
            self.count, self.mean, self.m2 = k, mean, m2
            return self
        tot = self.count + k
        delta = mean - self.mean
        self.mean = self.mean + delta * (k / tot)
        self.m2 = self.m2 + m2 + np.abs(delta) ** 2 * (self.count * k / tot)
        self.count = tot
        return self

    def merge(self, other: "Moments"):
        return self.merge_raw(other.count, other.mean, other.m2)

    @property
    def variance(self):
        return self.m2 / max(self.count - 1, 1)


def _run_shard(sampler, size, ss, streams=1):
    rng = make_rng(ss) if streams == 1 else tuple(make_rng(c) for c in ss.spawn(streams))
    acc = Moments()
    left = size
    while left > 0:
        k = min(CHUNK, left)
        acc.add_batch(sampler(rng, k))
        left -= k
    return acc


def accumulate(sampler: Callable[[np.random.Generator, int], np.ndarray], n_samples: int,
               seed: int, shards: int = 1, workers: int | None = None,
               streams: int = 1) -> Moments:
    """Draw ``n_samples`` values via ``sampler(rng, k)`` over a shard plan and merge.

    With ``streams > 1`` the sampler receives a tuple of independent
    generators (one per factor of a product space) instead of one.

    Shard results are merged in shard order so the outcome depends only on
    ``(seed, shards)``, not on ``workers``.
    """
    if n_samples <= 0:
        raise ValidationError("n_samples must be positive")
    if shards < 1:
        raise ValidationError("shards must be >= 1")
    plan = list(zip(shard_sizes(n_samples, shards), shard_seeds(seed, shards)))
    if workers and workers > 1 and shards > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda a: _run_shard(sampler, *a, streams), plan))
    else:
        parts = [_run_shard(sampler, *a, streams) for a in plan]
    total = Moments()
    for part in parts:
        total.merge(part)
    return total


def mc_integrate(f: Callable, n: int, convention="nu", n_samples: int = 100_000,
                 seed: int = 0, *, batched: bool = True, shards: int = 1,
                 workers: int | None = None) -> MCEstimate:
    """Monte Carlo integral of ``f`` over P(H_n).

    With ``batched=True`` (default) ``f`` maps an (N, n) array of unit row
    vectors to N values; otherwise it is called on single ProjectivePoints.
    """
    conv = MeasureConvention.resolve(convention, n)
    if batched:
        sampler = lambda rng, k: np.asarray(f(haar_vectors(n, k, rng)))
    else:
        sampler = lambda rng, k: np.array([f(ProjectivePoint(v)) for v in haar_vectors(n, k, rng)])
    acc = accumulate(sampler, n_samples, seed, shards, workers)
    mass = conv.total_mass
    value = mass * acc.mean
    if np.iscomplexobj(value) and np.imag(value) == 0:
        value = np.real(value)
    se = mass * np.sqrt(acc.variance / acc.count)
    value = complex(value) if np.iscomplexobj(value) else float(value)
    return MCEstimate(value, float(se), int(acc.count), int(seed))
