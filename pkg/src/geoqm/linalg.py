"""Dense complex linear algebra on small Hilbert spaces.

Operators are plain ``numpy`` arrays. The only wrapper type is
:class:`BipartiteOperator`, which carries the ``(n, m)`` factorization
needed by partial traces and the entanglement routines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL_HERM = 1e-12
TOL_DENSITY = 1e-10


class ValidationError(ValueError):
    """Raised when an input operator or state violates its contract."""


def as_matrix(a, name: str = "operator") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValidationError(f"{name} must be a 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    return a


def as_square(a, name: str = "operator") -> np.ndarray:
    a = as_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {a.shape}")
    return a


def is_hermitian(a, tol: float = TOL_HERM) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and np.max(np.abs(a - a.conj().T), initial=0.0) <= tol


def check_hermitian(a, tol: float = TOL_HERM, name: str = "operator") -> np.ndarray:
    a = as_square(a, name)
    if not is_hermitian(a, tol):
        dev = np.max(np.abs(a - a.conj().T))
        raise ValidationError(f"{name} is not Hermitian (max |a - a^H| = {dev:.3e})")
    return a


def check_density(a, tol: float = TOL_DENSITY, name: str = "state") -> np.ndarray:
    """Validate a density matrix: Hermitian, eigenvalues >= -tol, unit trace."""
    a = check_hermitian(a, TOL_HERM, name)
    tr = np.trace(a).real
    if abs(tr - 1.0) > tol:
        raise ValidationError(f"{name} has trace {tr!r}, expected 1")
    lo = np.linalg.eigvalsh(a)[0]
    if lo < -tol:
        raise ValidationError(f"{name} is not positive (min eigenvalue {lo:.3e})")
    return a


def is_density(a, tol: float = TOL_DENSITY) -> bool:
    try:
        check_density(a, tol)
    except ValidationError:
        return False
    return True


def projector(psi) -> np.ndarray:
    """|psi><psi| / <psi|psi>."""
    psi = np.asarray(psi, dtype=complex).ravel()
    nrm = np.vdot(psi, psi).real
    if nrm == 0:
        raise ValidationError("zero vector has no projector")
    return np.outer(psi, psi.conj()) / nrm


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product tr(a^H b)."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def hs_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


@dataclass(frozen=True)
class BipartiteOperator:
    """Operator on H (dim n) tensor K (dim m), stored as an (nm, nm) matrix."""

    matrix: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        mat = as_square(self.matrix)
        n, m = (int(d) for d in self.dims)
        if n < 1 or m < 1 or mat.shape[0] != n * m:
            raise ValidationError(f"dims {self.dims} incompatible with shape {mat.shape}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", (n, m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def require_proper(self) -> "BipartiteOperator":
        """Both factors must have dimension > 2 for the frame-function calculus."""
        n, m = self.dims
        if n < 3 or m < 3:
            raise ValidationError(f"factor dimensions must exceed 2, got {self.dims}")
        return self


def tensor_product(a, b) -> BipartiteOperator:
    a = as_square(a, "a")
    b = as_square(b, "b")
    return BipartiteOperator(np.kron(a, b), (a.shape[0], b.shape[0]))


def _split(x, dims) -> tuple[np.ndarray, int, int]:
    if isinstance(x, BipartiteOperator):
        return x.matrix, *x.dims
    if dims is None:
        raise ValidationError("partial trace needs factorization dims (n, m)")
    n, m = dims
    x = as_square(x)
    if x.shape[0] != n * m:
        raise ValidationError(f"dims {dims} incompatible with shape {x.shape}")
    return x, n, m


def partial_trace(x, side: str = "K", dims: tuple[int, int] | None = None) -> np.ndarray:
    """Trace out one factor.

    ``side="K"`` traces over the second factor and returns an operator on H;
    ``side="H"`` traces over the first factor.
    """
    mat, n, m = _split(x, dims)
    t = mat.reshape(n, m, n, m)
    if side == "K":
        return np.einsum("ikjk->ij", t)
    if side == "H":
        return np.einsum("kikj->ij", t)
    raise ValidationError(f"side must be 'H' or 'K', got {side!r}")


def partial_transpose(x, dims: tuple[int, int] | None = None) -> np.ndarray:
    """Transpose on the second factor."""
    mat, n, m = _split(x, dims)
    return mat.reshape(n, m, n, m).transpose(0, 3, 2, 1).reshape(n * m, n * m)


def eigen_decomposition(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order and the matching orthonormal columns."""
    a = check_hermitian(a, 1e-10)
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    return w[::-1].copy(), v[:, ::-1].copy()


def schmidt_decomposition(psi, dims: tuple[int, int], tol: float = 1e-10):
    """Schmidt form of a unit vector in H tensor K.

    Returns ``(coeffs, left, right)`` with descending non-negative ``coeffs``
    and orthonormal columns in ``left`` (n x r) and ``right`` (m x r) such that
    ``psi = sum_i coeffs[i] * kron(left[:, i], right[:, i])``.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    n, m = dims
    if psi.size != n * m:
        raise ValidationError(f"vector of length {psi.size} does not match dims {dims}")
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > tol:
        raise ValidationError(f"Schmidt decomposition needs a unit vector (norm {nrm!r})")
    u, s, vh = np.linalg.svd(psi.reshape(n, m), full_matrices=False)
    return s, u, vh.T


def hermitian_basis(n: int) -> list[np.ndarray]:
    """Orthonormal (Hilbert-Schmidt) basis of n x n Hermitian matrices.

    The first element is I/sqrt(n); the rest are traceless generalized
    Gell-Mann matrices scaled to unit norm.
    """
    if n < 1:
        raise ValidationError("n must be positive")
    basis = [np.eye(n, dtype=complex) / np.sqrt(n)]
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1 / np.sqrt(2)
            basis.append(s)
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = -1j / np.sqrt(2)
            a[k, j] = 1j / np.sqrt(2)
            basis.append(a)
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1.0
        d[l] = -l
        basis.append(np.diag(d / np.sqrt(l * (l + 1))).astype(complex))
    return basis


def hermitian_coefficients(a, basis=None) -> np.ndarray:
    """Real expansion coefficients <G_i, a> of a Hermitian operator."""
    a = as_square(a)
    if basis is None:
        basis = hermitian_basis(a.shape[0])
    return np.array([np.vdot(g, a).real for g in basis])


# random fixtures, shared by tests and the invariant suites


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2


def random_density(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-distributed density matrix of the given rank (full rank by default)."""
    rank = n if rank is None else rank
    z = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = z @ z.conj().T
    return rho / np.trace(rho).real


def random_state_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)


def maximally_entangled(d: int) -> np.ndarray:
    """(1/sqrt(d)) sum_i |i>|i> as a vector of length d*d."""
    return np.eye(d, dtype=complex).ravel() / np.sqrt(d)
