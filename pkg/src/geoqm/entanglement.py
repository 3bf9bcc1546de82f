"""Entanglement measures and separability criteria on P(H) x P(K).

For a pure bipartite state sigma with marginals sigma_1 = tr_K sigma and
sigma_2 = tr_H sigma, the deviation function is

    F(p1, p2) = tr(sigma p1 (x) p2) - tr(sigma_1 p1) tr(sigma_2 p2)
              = tr(Delta p1 (x) p2),    Delta = sigma - sigma_1 (x) sigma_2,

and E is its L2 norm over nu_H x nu_K. Mixed states enter only through
the convex roof, for which a certified upper bound is computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .composite import _require_dims, bipartite, partial_integral, segre_vectors
from .frame import (FrameFunction, default_kappa, l2_distance,
                    metric_pairing_geometric, observable_to_function, purity_check)
from .linalg import (ValidationError, check_density, hermitian_basis, partial_trace,
                     partial_transpose, projector, schmidt_decomposition)
from .projective import (MCEstimate, accumulate, haar_vectors, make_rng, sample_haar,
                         shard_seeds)

WITNESS_TOL = 1e-10
PROJECTOR_TOL = 1e-10
GEOMETRIC_TOL = 1e-8


def as_bipartite_density(x, dims=None) -> FrameFunction:
    """Accept a bipartite FrameFunction or a density matrix plus dims."""
    if isinstance(x, FrameFunction):
        if x.dims is None and dims is not None:
            x = bipartite(x.operator, dims)
        _require_dims(x)
        check_density(x.operator)
        return x
    if dims is None:
        raise ValidationError("density matrix input needs dims (n, m)")
    return bipartite(check_density(x), dims)


def _pure_vector(rho: FrameFunction) -> np.ndarray:
    if not purity_check(rho).pure:
        raise ValidationError("state is not pure; E is defined on pure states "
                              "(use entanglement_E_convex_roof for mixed states)")
    w, v = np.linalg.eigh(rho.operator)
    return v[:, -1]


def deviation_operator(rho: FrameFunction) -> np.ndarray:
    n, m = _require_dims(rho)
    s = rho.operator
    return s - np.kron(partial_trace(s, "K", (n, m)), partial_trace(s, "H", (n, m)))


def deviation_F(rho: FrameFunction):
    """F_rho on P(H) x P(K) for a pure bipartite density.

    The returned callable takes two (N, n), (N, m) batches of unit rows (or
    single vectors / ProjectivePoints) and evaluates
    rho(p1 (x) p2) - rho_K(p1) rho_H(p2).
    """
    rho = as_bipartite_density(rho)
    _pure_vector(rho)
    rho_k = partial_integral(rho, "K")
    rho_h = partial_integral(rho, "H")

    def F(p1, p2):
        v1 = getattr(p1, "psi", p1)
        v2 = getattr(p2, "psi", p2)
        single = np.ndim(v1) == 1
        v1, v2 = np.atleast_2d(v1), np.atleast_2d(v2)
        out = rho(segre_vectors(v1, v2)) - rho_k(v1) * rho_h(v2)
        return float(out[0]) if single else out

    return F


def mc_deviation_mean(rho: FrameFunction, n_samples: int = 100_000, seed: int = 0) -> MCEstimate:
    """int int F_rho dnu_H dnu_K; vanishes for every pure state."""
    rho = as_bipartite_density(rho)
    n, m = rho.dims
    F = deviation_F(rho)
    acc = accumulate(lambda r, k: F(haar_vectors(n, k, r[0]), haar_vectors(m, k, r[1])),
                     n_samples, seed, streams=2)
    mass = n * m
    return MCEstimate(float(mass * acc.mean), float(mass * np.sqrt(acc.variance / acc.count)),
                      acc.count, seed)


def _moment_matrix(basis):
    # int tr(G_i p) tr(G_k p) dnu = (tr(G_i G_k) + tr G_i tr G_k) / (n + 1)
    n = basis[0].shape[0]
    tr = np.array([np.trace(g).real for g in basis])
    gram = np.array([[np.trace(a @ b).real for b in basis] for a in basis])
    return (gram + np.outer(tr, tr)) / (n + 1)


def entanglement_E_pure_exact(rho, dims=None) -> float:
    """E for a pure state via a Hermitian-basis expansion of Delta.

    Delta = sum c_ij G_i (x) H_j, then
    E^2 = sum c_ij c_kl M^H_ik M^K_jl with the second-moment matrices M.
    """
    rho = as_bipartite_density(rho, dims)
    _pure_vector(rho)
    n, m = rho.dims
    delta = deviation_operator(rho)
    gh, gk = hermitian_basis(n), hermitian_basis(m)
    d4 = delta.reshape(n, m, n, m)
    # c_ij = tr((G_i (x) H_j) Delta)
    c = np.einsum("iab,jcd,bdac->ij", np.array(gh), np.array(gk), d4).real
    e2 = float(np.einsum("ij,ik,jl,kl->", c, _moment_matrix(gh), _moment_matrix(gk), c))
    return float(np.sqrt(max(e2, 0.0)))


def pure_E_from_vector(psi, dims) -> float:
    """E of the pure state psi through its Schmidt coefficients.

    E^2 = (1 - 2 sum l^3 + (sum l^2)^2) / ((n+1)(m+1)), l the squared
    Schmidt coefficients. Used as the fast inner evaluator of the roof search.
    """
    n, m = dims
    psi = np.asarray(psi, dtype=complex)
    s = np.linalg.svd(psi.reshape(n, m) / np.linalg.norm(psi), compute_uv=False)
    lam = s ** 2
    e2 = (1 - 2 * np.sum(lam ** 3) + np.sum(lam ** 2) ** 2) / ((n + 1) * (m + 1))
    return float(np.sqrt(max(e2, 0.0)))


@dataclass(frozen=True)
class EStimate:
    e_squared: MCEstimate
    e: float

    def to_json(self) -> dict:
        return {"E_squared": self.e_squared.to_json(), "E": self.e}


def entanglement_E_pure_mc(rho, n_samples: int = 100_000, seed: int = 0, dims=None) -> EStimate:
    """MC estimate of E^2 = int int |F_rho|^2 dnu_H dnu_K (masses n and m)."""
    rho = as_bipartite_density(rho, dims)
    if n_samples <= 0:
        raise ValidationError("n_samples must be positive")
    n, m = rho.dims
    F = deviation_F(rho)
    acc = accumulate(lambda r, k: F(haar_vectors(n, k, r[0]), haar_vectors(m, k, r[1])) ** 2,
                     n_samples, seed, streams=2)
    mass = n * m
    est = MCEstimate(float(mass * acc.mean), float(mass * np.sqrt(acc.variance / acc.count)),
                     acc.count, seed)
    return EStimate(est, float(np.sqrt(max(est.value, 0.0))))


# -- convex roof -------------------------------------------------------------


@dataclass(frozen=True)
class EnsembleDecomposition:
    """Weights and unit vectors with sum_i w_i |v_i><v_i| = target state."""

    weights: np.ndarray
    vectors: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        v = np.atleast_2d(np.asarray(self.vectors, dtype=complex))
        if w.ndim != 1 or v.shape[0] != w.size or v.shape[1] != self.dims[0] * self.dims[1]:
            raise ValidationError("ensemble weights/vectors/dims are inconsistent")
        keep = w > 0
        w, v = w[keep], v[keep]
        if abs(w.sum() - 1) > 1e-9:
            raise ValidationError(f"ensemble weights sum to {w.sum()!r}")
        v = v / np.linalg.norm(v, axis=1, keepdims=True)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "vectors", v)

    def density(self) -> np.ndarray:
        return np.einsum("k,ki,kj->ij", self.weights, self.vectors, self.vectors.conj())

    def components(self) -> list[FrameFunction]:
        return [bipartite(projector(v), self.dims) for v in self.vectors]

    def average_E(self) -> float:
        return float(sum(w * pure_E_from_vector(v, self.dims)
                         for w, v in zip(self.weights, self.vectors)))

    def scaled(self, factor: float) -> tuple[np.ndarray, np.ndarray]:
        return factor * self.weights, self.vectors

    @staticmethod
    def mixture(parts, dims) -> "EnsembleDecomposition":
        """Union of (weight, ensemble) pairs: a decomposition of sum weight * state."""
        ws, vs = [], []
        for lam, ens in parts:
            ws.append(lam * ens.weights)
            vs.append(ens.vectors)
        return EnsembleDecomposition(np.concatenate(ws), np.concatenate(vs), dims)


def _isometry(z):
    # Z (Z^H Z)^{-1/2}
    u, _, vh = np.linalg.svd(z, full_matrices=False)
    return u @ vh


def _ensemble_from_unitary(wmat, u, dims):
    psi = (wmat @ u.T).T  # rows are unnormalized ensemble members
    p = np.sum(np.abs(psi) ** 2, axis=1)
    return p, psi


def _roof_value(wmat, u, dims):
    p, psi = _ensemble_from_unitary(wmat, u, dims)
    total = 0.0
    for pj, v in zip(p, psi):
        if pj > 1e-15:
            total += pj * pure_E_from_vector(v, dims)
    return total


@dataclass(frozen=True)
class RoofResult:
    upper_bound: float
    ensemble: EnsembleDecomposition
    restarts: int
    values: list = field(default_factory=list)


def entanglement_E_convex_roof(sigma, dims=None, budget: int = 4, seed: int = 0,
                               size: int | None = None, maxiter: int = 200,
                               seed_ensembles=()) -> RoofResult:
    """Certified upper bound on the convex-roof extension of E.

    Candidates: the eigen-ensemble, every caller-supplied ensemble, and
    ``budget`` random isometric rotations of the eigen-ensemble (ensemble
    size ``size``, default the rank) refined by L-BFGS. Restart i always
    uses sub-seed i, so the bound is non-increasing in ``budget``.
    """
    rho = as_bipartite_density(sigma, dims)
    dims = rho.dims
    n, m = dims
    s = rho.operator
    w, v = np.linalg.eigh((s + s.conj().T) / 2)
    keep = w > 1e-13
    w, v = w[keep], v[:, keep]
    r = w.size
    wmat = v * np.sqrt(w)  # nm x r, W W^H = sigma
    k = r if size is None else int(size)
    if not r <= k <= (n * m) ** 2:
        raise ValidationError(f"ensemble size must be in [{r}, {(n * m) ** 2}]")

    candidates = [EnsembleDecomposition(w / w.sum(), v.T, dims)]
    for ens in seed_ensembles:
        if not np.allclose(ens.density(), s, atol=1e-9):
            raise ValidationError("seed ensemble does not decompose the target state")
        candidates.append(ens)
    values = [c.average_E() for c in candidates]

    if r > 1:
        pinv = np.linalg.pinv(wmat)
        starts = []
        for ens in candidates[1:]:
            # rows of U^T: coordinates of sqrt(w_j) v_j in the range of W
            ut = pinv @ (ens.vectors.T * np.sqrt(ens.weights))
            starts.append(_isometry(ut.T))
        for ss in shard_seeds(seed, budget):
            rng = make_rng(ss)
            z = rng.standard_normal((k, r)) + 1j * rng.standard_normal((k, r))
            starts.append(_isometry(z))

        def objective(x, kk):
            z = (x[: kk * r] + 1j * x[kk * r:]).reshape(kk, r)
            return _roof_value(wmat, _isometry(z), dims)

        for u0 in starts:
            kk = u0.shape[0]
            x0 = np.concatenate([u0.real.ravel(), u0.imag.ravel()])
            res = minimize(objective, x0, args=(kk,), method="L-BFGS-B",
                           options={"maxiter": maxiter})
            x = res.x if res.fun <= objective(x0, kk) else x0
            u = _isometry((x[: kk * r] + 1j * x[kk * r:]).reshape(kk, r))
            p, psi = _ensemble_from_unitary(wmat, u, dims)
            keep_j = p > 1e-15
            ens = EnsembleDecomposition(p[keep_j] / p[keep_j].sum(), psi[keep_j], dims)
            candidates.append(ens)
            values.append(ens.average_E())

    best = int(np.argmin(values))
    return RoofResult(float(values[best]), candidates[best], budget, values)


# -- Hilbert-Schmidt measure ---------------------------------------------------


def _unpack(x, K, n, m):
    u = x[:K]
    o = K
    a = x[o:o + K * n] + 1j * x[o + K * n:o + 2 * K * n]
    o += 2 * K * n
    b = x[o:o + K * m] + 1j * x[o + K * m:o + 2 * K * m]
    return u, a.reshape(K, n), b.reshape(K, m)


def _sep_state(x, K, n, m):
    u, a, b = _unpack(x, K, n, m)
    w = np.exp(u - u.max())
    w /= w.sum()
    al = a / np.linalg.norm(a, axis=1, keepdims=True)
    be = b / np.linalg.norm(b, axis=1, keepdims=True)
    xs = np.einsum("ki,kj->kij", al, be).reshape(K, n * m)
    eta = np.einsum("k,ki,kj->ij", w, xs, xs.conj())
    return w, al, be, a, b, xs, eta


def _hs_objective(x, sigma, K, n, m):
    """||eta(x) - sigma||_HS^2 and its gradient."""
    w, al, be, a, b, xs, eta = _sep_state(x, K, n, m)
    R = eta - sigma
    f = float(np.sum(np.abs(R) ** 2))
    h = np.einsum("ki,ij,kj->k", xs.conj(), R, xs).real
    gw = 2 * h
    gu = w * (gw - np.dot(w, gw))
    R4 = R.reshape(n, m, n, m)
    Q = np.einsum("ki,kj->kij", be, be.conj())
    P = np.einsum("ki,kj->kij", al, al.conj())
    M = np.einsum("ibjd,kdb->kij", R4, Q)
    N = np.einsum("ibjd,kji->kbd", R4, P)
    ha = np.einsum("ki,kij,kj->k", al.conj(), M, al).real
    hb = np.einsum("ki,kij,kj->k", be.conj(), N, be).real
    na2 = np.sum(np.abs(a) ** 2, axis=1)
    nb2 = np.sum(np.abs(b) ** 2, axis=1)
    da = (np.einsum("kij,kj->ki", M, a) - ha[:, None] * a) / na2[:, None]
    db = (np.einsum("kij,kj->ki", N, b) - hb[:, None] * b) / nb2[:, None]
    ga = 2 * w[:, None] * 2 * da
    gb = 2 * w[:, None] * 2 * db
    grad = np.concatenate([gu, ga.real.ravel(), ga.imag.ravel(), gb.real.ravel(), gb.imag.ravel()])
    return f, grad


@dataclass(frozen=True)
class DResult:
    upper_bound: float
    hs_distance: float
    separable_state: np.ndarray
    restart_values: list

    def to_json(self) -> dict:
        return {"D_upper": self.upper_bound, "hs_distance": self.hs_distance,
                "restart_values": list(self.restart_values)}


def hs_distance_measure_D(rho, dims=None, budget: int = 4, seed: int = 0,
                          n_terms: int | None = None, maxiter: int = 3000) -> DResult:
    """Upper bound on D = min_eta sqrt(int |rho - eta|^2 dnu) over separable eta.

    eta ranges over mixtures of ``n_terms`` product pure states (default
    2nm, at most (nm)^2), optimized by L-BFGS from ``budget`` random starts.
    The L2 distance is d_HS / sqrt(nm + 1).
    """
    rho = as_bipartite_density(rho, dims)
    n, m = rho.dims
    nm = n * m
    K = 2 * nm if n_terms is None else int(n_terms)
    if not 1 <= K <= nm * nm:
        raise ValidationError(f"n_terms must be in [1, {nm * nm}]")
    sigma = rho.operator
    best, best_eta, vals = np.inf, None, []
    for ss in shard_seeds(seed, budget):
        rng = make_rng(ss)
        x0 = np.concatenate([np.zeros(K), rng.standard_normal(2 * K * (n + m))])
        res = minimize(_hs_objective, x0, args=(sigma, K, n, m), jac=True, method="L-BFGS-B",
                       options={"maxiter": maxiter, "ftol": 1e-16, "gtol": 1e-12, "maxcor": 30})
        eta = _sep_state(res.x, K, n, m)[-1]
        d = float(np.linalg.norm(sigma - eta))
        vals.append(d / np.sqrt(nm + 1))
        if d < best:
            best, best_eta = d, eta
    # the L2 distance of the corresponding densities, exact
    l2 = l2_distance(rho, bipartite(best_eta, (n, m)))
    return DResult(float(l2), float(best), best_eta, vals)


# -- witnesses -------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessFunction:
    """Observable O(A) on P(H (x) K) with its backing Hermitian A."""

    function: FrameFunction
    operator: np.ndarray
    dims: tuple[int, int]

    def __call__(self, v):
        return self.function(v)


def witness_from_operator(a, dims) -> WitnessFunction:
    n, m = dims
    f = observable_to_function(a, default_kappa(n * m))
    f = FrameFunction(f.operator, f.kappa, (n, m))
    return WitnessFunction(f, np.asarray(a, dtype=complex), (n, m))


def witness_construct(rho, dims=None) -> WitnessFunction:
    """Schmidt witness A = l1^2 I - |psi><psi| for an entangled pure state.

    l1 is the largest Schmidt coefficient, so tr(A theta) = l1^2 -
    |<psi|phi1 phi2>|^2 >= 0 on product states and tr(A |psi><psi|) < 0.
    """
    rho = as_bipartite_density(rho, dims)
    psi = _pure_vector(rho)
    coeffs, _, _ = schmidt_decomposition(psi, rho.dims)
    if np.sum(coeffs > 1e-8) < 2:
        raise ValidationError("state is a product state; no witness targets it")
    a = coeffs[0] ** 2 * np.eye(psi.size) - projector(psi)
    return witness_from_operator(a, rho.dims)


@dataclass(frozen=True)
class WitnessEvaluation:
    exact: float
    mc: MCEstimate | None
    violated: bool

    def to_json(self) -> dict:
        return {"exact": self.exact, "mc": None if self.mc is None else self.mc.to_json(),
                "violated": self.violated}


def witness_evaluate(f: WitnessFunction, rho, n_samples: int = 0, seed: int = 0,
                     dims=None) -> WitnessEvaluation:
    """int f rho dnu exactly (tr(A sigma)) and optionally by MC over the mass-nm measure."""
    from .projective import mc_integrate
    rho = as_bipartite_density(rho, dims or f.dims)
    if rho.dims != f.dims:
        raise ValidationError(f"dims mismatch {rho.dims} vs {f.dims}")
    exact = float(np.trace(f.operator @ rho.operator).real)
    mc = None
    if n_samples:
        nm = rho.dim
        mc = mc_integrate(lambda v: f(v) * rho(v), nm, "nu", n_samples, seed)
    return WitnessEvaluation(exact, mc, exact < 0)


def product_expectation_min(a, dims, n_samples: int = 1000, seed: int = 0,
                            random_rank: bool = False) -> float:
    """min over sampled projector pairs P, Q of tr(A P (x) Q)."""
    n, m = dims
    rng = make_rng(seed)
    a4 = np.asarray(a).reshape(n, m, n, m)
    out = np.inf
    for _ in range(n_samples):
        P = _random_projector(n, rng, random_rank)
        Q = _random_projector(m, rng, random_rank)
        out = min(out, float(np.einsum("ibjd,ji,db->", a4, P, Q).real))
    return out


def _random_projector(n, rng, random_rank):
    k = int(rng.integers(1, n + 1)) if random_rank else 1
    z = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    q, _ = np.linalg.qr(z)
    return q @ q.conj().T


@dataclass(frozen=True)
class ProjectorCheck:
    is_projector: bool
    idempotence_error: float
    geometric_max_deviation: float
    geometric_ok: bool

    def __bool__(self):
        return self.is_projector


def projector_condition_check(eta: FrameFunction, n_probes: int = 50, seed: int = 0) -> ProjectorCheck:
    """Is the backing operator of eta an orthogonal projector?

    Exact route: ||tau^2 - tau||_HS. Geometric route: the one-form pairing
    G(d eta, d eta) computed from the Fubini-Study metric (unit scale) is
    compared with 2(eta - eta^2) at ``n_probes`` Haar points.
    """
    if not eta.is_real:
        raise ValidationError("projector condition needs a real function")
    tau = eta.operator
    err = float(np.linalg.norm(tau @ tau - tau))
    rng = make_rng(seed)
    dev = 0.0
    for _ in range(n_probes):
        p = sample_haar(eta.dim, rng)
        g = metric_pairing_geometric(eta, eta, p).real
        val = eta(p)
        dev = max(dev, abs(g - 2 * (val - val ** 2)))
    return ProjectorCheck(err <= PROJECTOR_TOL, err, dev, dev <= GEOMETRIC_TOL)


# -- separability battery --------------------------------------------------------


@dataclass(frozen=True)
class PPTResult:
    ppt: bool
    min_eigenvalue: float
    eigenvector: np.ndarray = field(repr=False, default=None)

    @property
    def verdict(self) -> str:
        return "ppt" if self.ppt else "npt"


def ppt_oracle(sigma, dims=None) -> PPTResult:
    """Partial transpose on the second factor; npt iff min eigenvalue < -1e-10."""
    if isinstance(sigma, FrameFunction):
        dims = dims or sigma.dims
        sigma = sigma.operator
    if dims is None:
        raise ValidationError("ppt_oracle needs dims (n, m)")
    w, v = np.linalg.eigh(partial_transpose(sigma, dims))
    return PPTResult(bool(w[0] >= -1e-10), float(w[0]), v[:, 0])


@dataclass(frozen=True)
class SeparabilityReport:
    verdict: str
    certificate: str | None
    value: float | None
    probes: list

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "certificate": self.certificate,
                "value": self.value, "probes": self.probes}


def sep_necessary_test(rho, dims=None, n_witness_probes: int = 8, seed: int = 0,
                       n_screen: int = 1000) -> SeparabilityReport:
    """Necessary-condition battery: int rho f dnu >= 0 for block-positive probes f.

    Probes: a decomposable witness from the partial transpose (if any
    negative eigenvalue), Schmidt witnesses of the leading eigenvectors,
    and random positive combinations of product projectors. A probe
    certifies entanglement only if its value is below -1e-10 and it
    passes screening on ``n_screen`` sampled projector pairs.
    """
    rho = as_bipartite_density(rho, dims)
    dims = rho.dims
    n, m = dims
    sigma = rho.operator
    rng = make_rng(seed)
    candidates = []
    ppt = ppt_oracle(sigma, dims)
    if not ppt.ppt:
        vv = projector(ppt.eigenvector)
        candidates.append(("ppt-witness", partial_transpose(vv, dims)))
    w, v = np.linalg.eigh(sigma)
    for idx in range(1, min(3, w.size) + 1):
        psi = v[:, -idx]
        coeffs = np.linalg.svd(psi.reshape(n, m), compute_uv=False)
        if np.sum(coeffs > 1e-8) >= 2:
            candidates.append((f"schmidt-witness-{idx}",
                               coeffs[0] ** 2 * np.eye(n * m) - projector(psi)))
    for j in range(n_witness_probes):
        a = np.zeros((n * m, n * m), dtype=complex)
        for _ in range(3):
            a += rng.random() * np.kron(_random_projector(n, rng, True), _random_projector(m, rng, True))
        candidates.append((f"product-positive-{j}", a))

    probes = []
    for i, (name, a) in enumerate(candidates):
        f = witness_from_operator((a + a.conj().T) / 2, dims)
        val = witness_evaluate(f, rho).exact
        probe = {"probe": name, "value": val}
        if val < -WITNESS_TOL:
            screen = product_expectation_min(a, dims, n_screen, seed=int(rng.integers(2 ** 63)),
                                             random_rank=True)
            probe["screen_min"] = screen
            if screen >= -WITNESS_TOL:
                probes.append(probe)
                return SeparabilityReport("entangled-certified", name, val, probes)
        probes.append(probe)
    return SeparabilityReport("consistent-with-separable", None, None, probes)


# -- report -------------------------------------------------------------------------


def entanglement_report(sigma, dims, n_samples: int = 100_000, seed: int = 0,
                        budget: int = 4) -> dict:
    """Full report in the shared JSON layout."""
    rho = as_bipartite_density(sigma, dims)
    seeds = [int(s.generate_state(1, np.uint64)[0]) for s in shard_seeds(seed, 3)]
    pure = purity_check(rho).pure
    out = {"dims": list(rho.dims), "pure": pure}
    if pure:
        out["E_pure_exact"] = entanglement_E_pure_exact(rho)
        out["E_mc"] = entanglement_E_pure_mc(rho, n_samples, seeds[0]).to_json()
    else:
        out["E_pure_exact"] = None
        out["E_mc"] = None
    out["E_roof_upper"] = entanglement_E_convex_roof(rho, budget=budget, seed=seeds[1]).upper_bound
    out["D_upper"] = hs_distance_measure_D(rho, budget=budget, seed=seeds[2]).upper_bound
    sep = sep_necessary_test(rho, seed=seed)
    out["witness_violation"] = {"verdict": sep.verdict, "certificate": sep.certificate,
                                "value": sep.value}
    pt = ppt_oracle(rho)
    out["ppt"] = {"verdict": pt.verdict, "min_eigenvalue": pt.min_eigenvalue}
    out["seeds"] = [int(seed)] + seeds
    return out
