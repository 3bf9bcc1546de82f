import numpy as np
import pytest

from geoqm import frame as fr
from geoqm import linalg as la
from geoqm import projective as pj
from geoqm import requant as rq
from geoqm.linalg import ValidationError


def _entry_z(rec, exact):
    d = rec.estimate - exact
    zr = np.abs(d.real) / np.where(rec.std_error_re > 0, rec.std_error_re, 1)
    zi = np.abs(d.imag) / np.where(rec.std_error_im > 0, rec.std_error_im, 1)
    return max(zr.max(), zi.max())


def test_state_kernel_spectrum(rng):
    n = 4
    k = rq.state_kernel(pj.sample_haar(n, rng))
    assert np.trace(k).real == pytest.approx(1, abs=1e-12)
    assert np.allclose(np.linalg.eigvalsh(k), [-1, -1, -1, n], atol=1e-12)


def test_state_kernel_orthogonal_points_rank_one_difference():
    k0 = rq.state_kernel(pj.ProjectivePoint.basis(3, 0))
    k1 = rq.state_kernel(pj.ProjectivePoint.basis(3, 1))
    assert np.linalg.matrix_rank(k0 - k1) == 2
    assert np.allclose(k0 - k1, 4 * np.diag([1, -1, 0]))


def test_observable_kernel(rng):
    p = pj.sample_haar(3, rng)
    assert np.allclose(rq.observable_kernel(p), p.p)
    assert np.allclose(rq.observable_kernel(p, 1.0), 4 * p.p - np.eye(3))
    for k in (0.5, 1.0, 2.2, 4.0):
        assert np.trace(rq.observable_kernel(p, k)).real == pytest.approx(1, abs=1e-12)
    with pytest.raises(ValidationError):
        rq.observable_kernel(p, -1.0)


def test_kernel_completeness():
    rec = rq.mc_kernel_completeness(3, 100_000, seed=2)
    assert _entry_z(rec, np.eye(3)) < 4.0  # 18 entries, one verdict


def test_reconstruct_diagonal_state():
    sigma = np.diag([0.5, 0.3, 0.2])
    rec = rq.mc_reconstruct_state(fr.state_to_density(sigma), 200_000, seed=0)
    assert np.linalg.norm(rec.estimate - sigma) <= 3 * rec.hs_error_scale
    assert np.allclose(rec.estimate, rec.estimate.conj().T, atol=1e-14)


def test_reconstruct_isotropic():
    n = 4
    rec = rq.mc_reconstruct_state(fr.state_to_density(np.eye(n) / n), 100_000, seed=1)
    assert np.linalg.norm(rec.estimate - np.eye(n) / n) <= 3 * rec.hs_error_scale


def test_reconstruct_roundtrip_values(rng):
    sigma = la.random_density(3, rng)
    rho = fr.state_to_density(sigma)
    rec = rq.mc_reconstruct_state(rho, 100_000, seed=3)
    back = fr.FrameFunction(rec.estimate)
    for _ in range(5):
        p = pj.sample_haar(3, rng)
        # |tr((est - sigma) p)| <= ||est - sigma||_HS, which is bounded by the propagated error
        assert abs(back(p) - rho(p)) <= 3 * rec.hs_error_scale


def test_reconstruct_observable(rng):
    a = la.random_hermitian(3, rng)
    rec_default = rq.mc_reconstruct_observable(fr.observable_to_function(a), n_samples=100_000, seed=4)
    rec_one = rq.mc_reconstruct_observable(fr.observable_to_function(a, 1.0), n_samples=100_000, seed=4)
    assert np.linalg.norm(rec_default.estimate - a) <= 3 * rec_default.hs_error_scale
    assert np.linalg.norm(rec_one.estimate - a) <= 3 * rec_one.hs_error_scale
    ident = rq.mc_reconstruct_observable(fr.observable_to_function(np.eye(3)), n_samples=100_000, seed=0)
    assert _entry_z(ident, np.eye(3)) < 4.0


def test_reconstruction_deterministic_and_sharded(rng):
    rho = fr.state_to_density(la.random_density(3, rng))
    a = rq.mc_reconstruct_state(rho, 20_000, seed=9)
    b = rq.mc_reconstruct_state(rho, 20_000, seed=9)
    assert np.array_equal(a.estimate, b.estimate)
    c = rq.mc_reconstruct_state(rho, 20_000, seed=9, shards=4)
    assert np.linalg.norm(c.estimate - fr.density_to_state(rho)) <= 4 * c.hs_error_scale


def test_nearest_density(rng):
    rec = rq.mc_reconstruct_state(fr.state_to_density(la.projector(la.random_state_vector(3, rng))),
                                  2_000, seed=0)
    proj = rec.nearest_density()
    assert proj.projected and la.is_density(proj.estimate)
    assert rec.to_json()["projected_to_density"] is False


def test_zero_samples_rejected(rng):
    with pytest.raises(ValidationError):
        rq.mc_reconstruct_state(fr.state_to_density(np.eye(3) / 3), 0)


def test_reconstruction_unbiased(rng):
    # 30 independent seeds; t-test of the mean error per entry at the 1% level
    from scipy import stats
    n = 3
    sigma = la.random_density(n, rng)
    rho = fr.state_to_density(sigma)
    errs = np.array([rq.mc_reconstruct_state(rho, 20_000, seed=700 + s).estimate - sigma for s in range(30)])
    iu = np.triu_indices(n, 1)
    # independent entries of a Hermitian estimate: real diagonal, real and imaginary upper triangle
    parts = np.concatenate([errs.real[:, range(n), range(n)], errs.real[:, iu[0], iu[1]],
                            errs.imag[:, iu[0], iu[1]]], axis=1)
    pvals = stats.ttest_1samp(parts, 0.0).pvalue
    assert pvals.min() > 0.01
