"""Invariant suites per module, run by ``geoqm check``.

Each check returns a :class:`CheckResult`; a suite is a list of them. All
randomness derives from the seed passed in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import composite as cs
from . import entanglement as ent
from . import frame as fr
from . import linalg as la
from . import projective as pj
from . import requant as rq

Z = 3.0


@dataclass(frozen=True)
class CheckResult:
    module: str
    name: str
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {"module": self.module, "name": self.name, "passed": bool(self.passed),
                "detail": self.detail}


def _rng(seed, tag):
    return pj.make_rng(np.random.SeedSequence([int(seed), tag]))


def linear_core(dims, seed=0, **_):
    n, m = dims
    rng = _rng(seed, 1)
    out = []
    worst = 0.0
    for _ in range(50):
        x = la.random_hermitian(n * m, rng) + 1j * la.random_hermitian(n * m, rng)
        b = la.random_hermitian(n, rng)
        lhs = np.trace(la.partial_trace(x, "K", dims) @ b)
        rhs = np.trace(x @ np.kron(b, np.eye(m)))
        worst = max(worst, abs(lhs - rhs))
    out.append(CheckResult("linear-core", "partial-trace duality", worst <= 1e-9, f"max dev {worst:.2e}"))
    s1, s2 = la.random_density(n, rng), la.random_density(m, rng)
    dev = np.max(np.abs(la.partial_trace(la.tensor_product(s1, s2), "K") - s1 * np.trace(s2)))
    out.append(CheckResult("linear-core", "tr_K(s1 x s2) = s1 tr s2", dev <= 1e-12, f"max dev {dev:.2e}"))
    psi = la.random_state_vector(n * m, rng)
    u, v = la.random_unitary(n, rng), la.random_unitary(m, rng)
    c0 = la.schmidt_decomposition(psi, dims)[0]
    c1 = la.schmidt_decomposition(np.kron(u, v) @ psi, dims)[0]
    dev = float(np.max(np.abs(c0 - c1)))
    out.append(CheckResult("linear-core", "Schmidt coefficients local-unitary invariant", dev <= 1e-9,
                           f"max dev {dev:.2e}"))
    return out


def projective(dims, seed=0, n_samples=100_000, **_):
    out = []
    for n in sorted(set(dims)):
        rng = _rng(seed, 2 + n)
        u = la.random_unitary(n, rng)
        worst = 0.0
        for i in range(5):
            a = la.random_hermitian(n, rng)
            au = u.conj().T @ a @ u  # tr(A U p U^H) = tr(U^H A U p)
            e1 = pj.mc_integrate(lambda v: np.einsum("ki,ij,kj->k", v.conj(), a, v).real, n, "nu1",
                                 n_samples, seed + i)
            e2 = pj.mc_integrate(lambda v: np.einsum("ki,ij,kj->k", v.conj(), au, v).real, n, "nu1",
                                 n_samples, seed + 100 + i)
            worst = max(worst, abs(e1.value - e2.value) / np.hypot(e1.std_error, e2.std_error))
        out.append(CheckResult("projective-space", f"sampler unitary invariance n={n}", worst <= 4.0,
                               f"max combined z {worst:.2f}"))
        mass = pj.mc_integrate(lambda v: np.ones(v.shape[0]), n, "nu", 1000, seed)
        out.append(CheckResult("projective-space", f"Liouville mass n={n}",
                               mass.value == n and mass.std_error == 0, f"value {mass.value}"))
        worst = 0.0
        for _ in range(100):
            p = pj.sample_haar(n, rng)
            kappa = 0.1 + 5 * rng.random()
            a = pj.TangentVector(p, la.random_hermitian(n, rng))
            b = pj.TangentVector(p, la.random_hermitian(n, rng))
            ja = pj.complex_structure(a)
            errs = [
                pj.symplectic_form(a, b, kappa) + pj.symplectic_form(b, a, kappa),
                pj.fubini_study_metric(a, b, kappa) - pj.fubini_study_metric(b, a, kappa),
                np.max(np.abs(pj.complex_structure(ja).vector + a.vector)),
                pj.symplectic_form(a, b, kappa) - pj.fubini_study_metric(ja, b, kappa),
            ]
            worst = max(worst, max(abs(e) for e in errs))
        out.append(CheckResult("projective-space", f"Kahler identities n={n}", worst <= 1e-10,
                               f"max dev {worst:.2e}"))
    return out


def frame_functions(dims, seed=0, n_samples=100_000, **_):
    out = []
    for n in sorted(set(dims)):
        rng = _rng(seed, 10 + n)
        worst = 0.0
        b = la.random_hermitian(n, rng) + 1j * la.random_hermitian(n, rng)
        f = fr.FrameFunction(b)
        for _ in range(20):
            u = la.random_unitary(n, rng)
            worst = max(worst, abs(sum(f(u[:, i]) for i in range(n)) - np.trace(b)))
        out.append(CheckResult("frame-functions", f"frame weight constancy n={n}", worst <= 1e-10,
                               f"max dev {worst:.2e}"))
        g = fr.FrameFunction(la.random_hermitian(n, rng))
        e14 = pj.mc_integrate(g, n, "nu", n_samples, seed)
        z14 = abs(e14.value - fr.exact_integral(g)) / e14.std_error
        e15 = fr.mc_l2_inner(f, g, n_samples, seed + 1)
        z15 = abs(e15.value - fr.exact_l2_inner(f, g)) / e15.std_error
        out.append(CheckResult("frame-functions", f"trace-integral formulas n={n}", max(z14, z15) <= Z,
                               f"z = {z14:.2f}, {z15:.2f}"))
        s1, s2 = la.random_density(n, rng), la.random_density(n, rng)
        lhs = np.linalg.norm(s1 - s2)
        rhs = np.sqrt(n + 1) * fr.l2_distance(fr.state_to_density(s1), fr.state_to_density(s2))
        out.append(CheckResult("frame-functions", f"HS/L2 identity n={n}", abs(lhs - rhs) <= 1e-10,
                               f"dev {abs(lhs - rhs):.2e}"))
        pure = fr.purity_check(fr.state_to_density(la.projector(la.random_state_vector(n, rng))))
        mixed = fr.purity_check(fr.state_to_density(la.random_density(n, rng, 2)))
        out.append(CheckResult("frame-functions", f"purity criterion n={n}", pure.pure and not mixed.pure,
                               f"pure {pure.squared_norm:.12f}, mixed {mixed.squared_norm:.6f}"))
        a, c = la.random_hermitian(n, rng), la.random_hermitian(n, rng)
        fa, fc = fr.observable_to_function(a), fr.observable_to_function(c)
        star = fr.star_product(fa, fc)
        dev_op = np.max(np.abs(fr.function_to_observable(star) - a @ c))
        dev_geo = 0.0
        for _ in range(10):
            p = pj.sample_haar(n, rng)
            dev_geo = max(dev_geo, abs(star(p) - fr.star_product_geometric(fa, fc, p, "exact")))
        out.append(CheckResult("frame-functions", f"star product n={n}", dev_op <= 1e-12 and dev_geo <= 1e-8,
                               f"operator dev {dev_op:.2e}, geometric dev {dev_geo:.2e}"))
    return out


def requantization(dims, seed=0, n_samples=100_000, **_):
    out = []
    for n in sorted(set(dims)):
        rng = _rng(seed, 20 + n)
        rec = rq.mc_kernel_completeness(n, n_samples, seed)
        z = _entry_z(rec, np.eye(n))
        # 2n^2 entries share one verdict, hence 4 sigma rather than 3
        out.append(CheckResult("requantization", f"kernel completeness n={n}", z <= 4.0, f"max entry z {z:.2f}"))
        sigma = la.random_density(n, rng)
        rec = rq.mc_reconstruct_state(fr.state_to_density(sigma), n_samples, seed + 1)
        err = np.linalg.norm(rec.estimate - sigma)
        out.append(CheckResult("requantization", f"state reconstruction n={n}", err <= Z * rec.hs_error_scale,
                               f"HS error {err:.2e} vs 3 x {rec.hs_error_scale:.2e}"))
    return out


def _entry_z(rec, exact):
    def z(diff, se):
        return np.where(se > 0, np.abs(diff) / np.where(se > 0, se, 1), np.where(np.abs(diff) > 1e-12, np.inf, 0))
    zr = z(rec.estimate.real - exact.real, rec.std_error_re)
    zi = z(rec.estimate.imag - exact.imag, rec.std_error_im)
    return float(max(zr.max(), zi.max()))


def composite_systems(dims, seed=0, n_samples=100_000, **_):
    n, m = dims
    rng = _rng(seed, 30)
    out = []
    a, b = la.random_hermitian(n, rng), la.random_hermitian(m, rng)
    dev = np.max(np.abs(cs.diamond_product(fr.operator_to_density(a), fr.operator_to_density(b)).operator
                        - la.tensor_product(a, b).matrix))
    out.append(CheckResult("composite-systems", "S intertwines tensor and diamond", dev <= 1e-12, f"dev {dev:.2e}"))
    rho = cs.bipartite(la.random_density(n * m, rng), dims)
    dev = abs(fr.exact_integral(cs.partial_integral(rho, "K")) - fr.exact_integral(rho))
    out.append(CheckResult("composite-systems", "partial integral preserves the integral", dev <= 1e-12,
                           f"dev {dev:.2e}"))
    res = cs.product_space_integral(cs.bipartite(la.random_hermitian(n * m, rng), dims), n_samples, seed)
    out.append(CheckResult("composite-systems", "product-space integration", res.z_score <= Z,
                           f"z {res.z_score:.2f}"))
    return out


def entanglement(dims, seed=0, n_samples=100_000, **_):
    n, m = dims
    rng = _rng(seed, 40)
    out = []
    vals, lu = [], 0.0
    for _ in range(10):
        psi = la.random_state_vector(n * m, rng)
        e = ent.entanglement_E_pure_exact(la.projector(psi), dims)
        uv = np.kron(la.random_unitary(n, rng), la.random_unitary(m, rng))
        lu = max(lu, abs(ent.entanglement_E_pure_exact(la.projector(uv @ psi), dims) - e))
        vals.append(e)
    out.append(CheckResult("entanglement", "E >= 0 and local-unitary invariant",
                           min(vals) >= 0 and lu <= 1e-10, f"min E {min(vals):.3e}, LU dev {lu:.2e}"))
    prod = np.kron(la.random_state_vector(n, rng), la.random_state_vector(m, rng))
    e0 = ent.entanglement_E_pure_exact(la.projector(prod), dims)
    out.append(CheckResult("entanglement", "E vanishes on product states", e0 <= 1e-12, f"E {e0:.2e}"))
    psi = la.random_state_vector(n * m, rng)
    mean = ent.mc_deviation_mean(cs.bipartite(la.projector(psi), dims), n_samples, seed)
    z = abs(mean.value) / mean.std_error
    out.append(CheckResult("entanglement", "deviation function has mean zero", z <= Z, f"z {z:.2f}"))
    rho = cs.bipartite(la.projector(psi), dims)
    w = ent.witness_construct(rho)
    ev = ent.witness_evaluate(w, rho)
    lo = ent.product_expectation_min(w.operator, dims, 200, seed)
    out.append(CheckResult("entanglement", "Schmidt witness", ev.violated and lo >= -1e-10,
                           f"target {ev.exact:.3e}, product min {lo:.3e}"))
    return out


SUITES = {
    "linear-core": linear_core,
    "projective-space": projective,
    "frame-functions": frame_functions,
    "requantization": requantization,
    "composite-systems": composite_systems,
    "entanglement": entanglement,
}


def run_all(dims, seed=0, n_samples=100_000) -> list[CheckResult]:
    results = []
    for suite in SUITES.values():
        results.extend(suite(dims, seed=seed, n_samples=n_samples))
    return results
