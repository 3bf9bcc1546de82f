"""Re-quantization: recover operators by smearing functions against kernels.

    sigma = int rho(p) ((n+1) p - I) dnu(p)
    A     = int f_A(p) ((n+1)/kappa p - (n+1-kappa)/(kappa n) I) dnu(p)

Both integrals use the mass-n measure. The Monte Carlo estimators below are
unbiased; they are symmetrized entrywise so the estimate is Hermitian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frame import FrameFunction, _check_kappa
from .linalg import ValidationError
from .projective import ProjectivePoint, accumulate, haar_vectors


def state_kernel(point: ProjectivePoint) -> np.ndarray:
    n = point.dim
    return (n + 1) * point.p - np.eye(n)


def observable_kernel(point: ProjectivePoint, kappa: float | None = None) -> np.ndarray:
    n = point.dim
    k = _check_kappa(kappa, n)
    return ((n + 1) / k) * point.p - ((n + 1 - k) / (k * n)) * np.eye(n)


@dataclass(frozen=True)
class Reconstruction:
    """Operator estimate with per-entry standard errors (real and imaginary parts)."""

    estimate: np.ndarray
    std_error_re: np.ndarray
    std_error_im: np.ndarray
    n_samples: int
    seed: int
    projected: bool = False

    @property
    def hs_error_scale(self) -> float:
        """Propagated error for the HS norm: sqrt(sum of entry variances)."""
        return float(np.sqrt(np.sum(self.std_error_re ** 2 + self.std_error_im ** 2)))

    def nearest_density(self) -> "Reconstruction":
        """Clip negative eigenvalues and renormalize the trace; flagged as projected."""
        w, v = np.linalg.eigh(self.estimate)
        w = np.clip(w, 0, None)
        if w.sum() <= 0:
            raise ValidationError("estimate has no positive part")
        rho = (v * (w / w.sum())) @ v.conj().T
        return Reconstruction(rho, self.std_error_re, self.std_error_im,
                              self.n_samples, self.seed, True)

    def to_json(self) -> dict:
        from .io import matrix_to_json
        return {"estimate": matrix_to_json(self.estimate),
                "std_error": {"re": self.std_error_re.tolist(), "im": self.std_error_im.tolist()},
                "hs_error_scale": self.hs_error_scale,
                "n_samples": self.n_samples, "seed": self.seed,
                "projected_to_density": self.projected}


def _smear(values_fn, coef_p: float, coef_i: float, n: int, n_samples: int, seed: int,
           shards: int = 1) -> Reconstruction:
    # integrand per sample: mass * value * (coef_p p + coef_i I), stored as real/imag parts
    eye = np.eye(n)

    def sampler(rng, k):
        v = haar_vectors(n, k, rng)
        vals = np.asarray(values_fn(v))
        proj = np.einsum("ki,kj->kij", v, v.conj())
        proj = 0.5 * (proj + proj.conj().transpose(0, 2, 1))
        mat = vals[:, None, None] * (coef_p * proj + coef_i * eye)
        return np.concatenate([mat.real, mat.imag], axis=1)

    acc = accumulate(sampler, n_samples, seed, shards)
    mass = float(n)
    mean = mass * acc.mean
    se = mass * np.sqrt(acc.variance / acc.count)
    est = mean[:n] + 1j * mean[n:]
    return Reconstruction(est, se[:n], se[n:], int(acc.count), int(seed))


def mc_reconstruct_state(rho: FrameFunction, n_samples: int = 100_000, seed: int = 0,
                         shards: int = 1) -> Reconstruction:
    """Estimate S^{-1}(rho) = int rho(p) S(p) dnu(p) by Haar sampling."""
    if n_samples <= 0:
        raise ValidationError("n_samples must be positive")
    n = rho.dim
    return _smear(rho, n + 1.0, -1.0, n, n_samples, seed, shards)


def mc_reconstruct_observable(f: FrameFunction, kappa: float | None = None,
                              n_samples: int = 100_000, seed: int = 0,
                              shards: int = 1) -> Reconstruction:
    """Estimate A = int f(p) O(p) dnu(p)."""
    if n_samples <= 0:
        raise ValidationError("n_samples must be positive")
    n = f.dim
    k = _check_kappa(f.kappa if kappa is None else kappa, n)
    return _smear(f, (n + 1) / k, -(n + 1 - k) / (k * n), n, n_samples, seed, shards)


def mc_kernel_completeness(n: int, n_samples: int = 100_000, seed: int = 0) -> Reconstruction:
    """Estimate int S(p) dnu(p), which equals the identity."""
    return _smear(lambda v: np.ones(v.shape[0]), n + 1.0, -1.0, n, n_samples, seed)
