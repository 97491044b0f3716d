"""Dense matrix kernel: Kronecker products, traces, spectra and Haar sampling.

All composite indices are row-major with party 1 as the most significant
factor, so ``kron(a, b)[i*b.rows + j, ...]`` pairs ``a[i]`` with ``b[j]``.
"""
from __future__ import annotations

from functools import reduce
from typing import Iterable

import numpy as np

from .config import TOL
from .errors import DimensionMismatch, InvalidDimension, NotHermitian

Rng = np.random.Generator


def make_rng(seed: int | Iterable[int] | None = None) -> Rng:
    """Seeded generator. Pass ``(seed, trial)`` to derive independent streams."""
    if seed is not None and not isinstance(seed, int):
        seed = [int(s) for s in seed]
    return np.random.default_rng(seed)


def as_matrix(m, dtype=complex) -> np.ndarray:
    a = np.asarray(m, dtype=dtype)
    if a.ndim != 2:
        raise InvalidDimension(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidDimension("matrix has non-finite entries")
    return a


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(mats: Iterable) -> np.ndarray:
    return reduce(kron, mats)


def hermiticity_residual(m: np.ndarray) -> float:
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eigenvalues(m, tol: float = TOL.hermitian) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    Raises
    ------
    NotHermitian
        If ``m`` is not square or ``max|m - m^dagger| > tol``.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NotHermitian(f"matrix is not square: {m.shape}")
    res = hermiticity_residual(m)
    if res > tol:
        raise NotHermitian(f"hermiticity residual {res:.3e} exceeds {tol:.1e}")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def singular_values(m) -> np.ndarray:
    """Descending singular values of a real matrix, length ``min(rows, cols)``.

    Uses LAPACK's divide-and-conquer SVD rather than the Gram-matrix
    eigenproblem: square-rooting eigenvalues of ``m.T @ m`` turns rounding
    noise of order ``eps * sigma_max**2`` into spurious singular values of
    order ``1e-8 * sigma_max``, which breaks 1e-9 Ky Fan comparisons on
    rank-deficient matricizations.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise InvalidDimension(f"expected a 2-d matrix, got shape {m.shape}")
    if 0 in m.shape:
        return np.zeros(0)
    s = np.linalg.svd(m, compute_uv=False)
    return np.clip(s, 0.0, None)


def trace_product(a, b) -> complex:
    """``tr(a @ b)`` as a sum over entry pairs; the product is never formed."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise DimensionMismatch(f"incompatible shapes {a.shape} and {b.shape}")
    return complex(np.einsum("ij,ji->", a, b))


def haar_unitary(dim: int, rng: Rng) -> np.ndarray:
    """Haar-distributed ``dim x dim`` unitary.

    QR of a complex Ginibre matrix, with column phases fixed so that the
    triangular factor has a positive real diagonal (Mezzadri's recipe).
    """
    if dim < 1:
        raise InvalidDimension(f"dim must be >= 1, got {dim}")
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    phases = diag / np.abs(diag)
    return q * phases[np.newaxis, :]


def haar_vector(dim: int, rng: Rng) -> np.ndarray:
    """Haar-random unit vector (normalized complex Gaussian)."""
    if dim < 1:
        raise InvalidDimension(f"dim must be >= 1, got {dim}")
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def unitarity_residual(u) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
