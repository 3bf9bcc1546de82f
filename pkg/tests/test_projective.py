import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geoqm import linalg as la
from geoqm import projective as pj
from geoqm.linalg import ValidationError


def _tangent_pair(n, rng):
    p = pj.sample_haar(n, rng)
    return (p, pj.TangentVector(p, la.random_hermitian(n, rng)),
            pj.TangentVector(p, la.random_hermitian(n, rng)))


def test_haar_mean_projector():
    n, N = 3, 100_000

    def sampler(rng, k):
        v = pj.haar_vectors(n, k, rng)
        p = np.einsum("ki,kj->kij", v, v.conj())
        return np.concatenate([p.real, p.imag], axis=1)

    acc = pj.accumulate(sampler, N, seed=5)
    se = np.sqrt(acc.variance / acc.count)
    target = np.concatenate([np.eye(n) / n, np.zeros((n, n))])
    z = np.abs(acc.mean - target) / np.where(se > 0, se, 1)
    assert z.max() < 4.0  # 18 entries, one verdict
    assert np.allclose(acc.mean[n:].diagonal(), 0)


def test_haar_second_moment():
    n = 4
    e = pj.mc_integrate(lambda v: np.abs(v[:, 0]) ** 4, n, "nu1", 100_000, seed=3)
    assert abs(e.value - 2 / (n * (n + 1))) <= 3 * e.std_error


def test_haar_seed_determinism():
    a = pj.haar_vectors(4, 10, pj.make_rng(42))
    b = pj.haar_vectors(4, 10, pj.make_rng(42))
    c = pj.haar_vectors(4, 10, pj.make_rng(43))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sample_haar_rejects_small_dim():
    with pytest.raises(ValidationError):
        pj.sample_haar(1, 0)


def test_projective_point_phase_invariance(rng):
    psi = la.random_state_vector(4, rng)
    assert pj.ProjectivePoint(psi) == pj.ProjectivePoint(np.exp(0.7j) * 3 * psi)
    with pytest.raises(ValidationError):
        pj.ProjectivePoint(np.zeros(3))


def test_d2_distance(rng):
    p = pj.sample_haar(3, rng)
    assert pj.d2_distance(p, p) == pytest.approx(0, abs=1e-7)
    e0, e1 = pj.ProjectivePoint.basis(3, 0), pj.ProjectivePoint.basis(3, 1)
    assert pj.d2_distance(e0, e1) == pytest.approx(np.sqrt(2), abs=1e-15)
    q = pj.sample_haar(3, rng)
    direct = np.sqrt(2 - 2 * abs(np.vdot(p.psi, q.psi)) ** 2)
    assert pj.d2_distance(p, q) == pytest.approx(direct, abs=1e-12)
    # also the HS distance of projectors
    assert pj.d2_distance(p, q) == pytest.approx(np.linalg.norm(p.p - q.p), abs=1e-12)


def test_symplectic_antisymmetric(rng):
    p, u, v = _tangent_pair(4, rng)
    assert pj.symplectic_form(u, u) == pytest.approx(0, abs=1e-14)
    assert pj.symplectic_form(u, v) == pytest.approx(-pj.symplectic_form(v, u), abs=1e-14)


def test_symplectic_matrix_oracle(rng):
    p, u, v = _tangent_pair(3, rng)
    k = 2.5
    direct = (-1j * k * np.trace((u.generator @ v.generator - v.generator @ u.generator) @ p.p)).real
    assert pj.symplectic_form(u, v, k) == pytest.approx(direct, abs=1e-12)


def test_metric_symmetric_positive(rng):
    for _ in range(100):
        p, u, v = _tangent_pair(3, rng)
        assert pj.fubini_study_metric(u, v) == pytest.approx(pj.fubini_study_metric(v, u), abs=1e-12)
        assert pj.fubini_study_metric(u, u) > 0


def test_kahler_compatibility(rng):
    # omega(u, v) = g(j u, v) = -g(u, j v) with the conventions used here
    for _ in range(50):
        p, u, v = _tangent_pair(4, rng)
        k = 0.3 + 4 * rng.random()
        om = pj.symplectic_form(u, v, k)
        assert om == pytest.approx(pj.fubini_study_metric(pj.complex_structure(u), v, k), abs=1e-10)
        assert om == pytest.approx(-pj.fubini_study_metric(u, pj.complex_structure(v), k), abs=1e-10)


def test_complex_structure(rng):
    p, u, v = _tangent_pair(3, rng)
    ju = pj.complex_structure(u)
    assert np.allclose(pj.complex_structure(ju).vector, -u.vector, atol=1e-12)
    zero = pj.TangentVector(p, np.zeros((3, 3)))
    assert np.allclose(pj.complex_structure(zero).vector, 0)
    jv = pj.complex_structure(v)
    assert pj.fubini_study_metric(jv, ju) == pytest.approx(pj.fubini_study_metric(v, u), abs=1e-12)


def test_metric_is_hs_scaled(rng):
    # g_p(u, u) = 2 kappa tr(v v) / 2 for v = -i[A, p]: g(u,u) = kappa tr(v^2)
    p, u, _ = _tangent_pair(4, rng)
    assert pj.fubini_study_metric(u, u, 1.0) == pytest.approx(np.trace(u.vector @ u.vector).real, abs=1e-12)


def test_tangent_vectors_different_bases(rng):
    _, u, _ = _tangent_pair(3, rng)
    _, v, _ = _tangent_pair(3, rng)
    with pytest.raises(ValidationError):
        pj.symplectic_form(u, v)


def test_mc_constant_mass():
    e = pj.mc_integrate(lambda v: np.ones(v.shape[0]), 5, "nu", 1000, seed=0)
    assert e.value == 5 and e.std_error == 0
    e = pj.mc_integrate(lambda v: np.ones(v.shape[0]), 5, "nu1", 1000, seed=0)
    assert e.value == 1


def test_mc_density_integral(rng):
    n = 3
    sigma = la.random_density(n, rng)
    e = pj.mc_integrate(lambda v: np.einsum("ki,ij,kj->k", v.conj(), sigma, v).real, n, "nu", 100_000, 7)
    assert abs(e.value - 1) <= 3 * e.std_error


def test_mc_pure_squared(rng):
    n = 4
    psi = la.random_state_vector(n, rng)
    e = pj.mc_integrate(lambda v: np.abs(v @ psi.conj()) ** 4, n, "nu", 100_000, 11)
    assert abs(e.value - 2 / (n + 1)) <= 3 * e.std_error


def test_mc_unbatched_matches_batched():
    f = lambda p: abs(p.psi[0]) ** 2
    a = pj.mc_integrate(f, 3, "nu1", 2000, seed=9, batched=False)
    b = pj.mc_integrate(lambda v: np.abs(v[:, 0]) ** 2, 3, "nu1", 2000, seed=9)
    assert a.value == pytest.approx(b.value, abs=1e-12)


def test_mc_shards_and_workers_deterministic():
    f = lambda v: np.abs(v[:, 1]) ** 2
    a = pj.mc_integrate(f, 4, "nu", 50_000, seed=1, shards=4)
    b = pj.mc_integrate(f, 4, "nu", 50_000, seed=1, shards=4, workers=4)
    c = pj.mc_integrate(f, 4, "nu", 50_000, seed=1)
    assert a == b
    assert a.n_samples == c.n_samples == 50_000
    assert abs(a.value - c.value) < 5 * a.std_error


def test_mc_errors():
    with pytest.raises(ValidationError):
        pj.mc_integrate(lambda v: v[:, 0], 3, "nu", 0)
    with pytest.raises(ValidationError):
        pj.mc_integrate(lambda v: v[:, 0], 3, "lebesgue", 10)


def test_moments_merge_matches_single_pass(rng):
    x = rng.standard_normal(1000)
    whole = pj.Moments().add_batch(x)
    parts = pj.Moments().add_batch(x[:123])
    parts.merge(pj.Moments().add_batch(x[123:]))
    assert parts.mean == pytest.approx(whole.mean, abs=1e-14)
    assert parts.variance == pytest.approx(np.var(x, ddof=1), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_canonical_phase_idempotent(seed, n):
    v = pj.haar_vectors(n, 5, pj.make_rng(seed))
    assert np.allclose(pj.canonical_phase(v), v, rtol=0, atol=1e-15)
    assert np.all(v[:, 0].imag == 0) and np.all(v[:, 0].real > 0)
    assert np.allclose(np.linalg.norm(v, axis=1), 1)
