"""Generalized Gell-Mann generators of su(d), normalized to tr(l_a l_b) = 2 delta_ab.

Canonical order: symmetric off-diagonal generators for pairs j<k in
lexicographic order, then the antisymmetric ones in the same pair order,
then the d-1 diagonal ones. For d=2 this is (sigma_x, sigma_y, sigma_z).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import InvalidDimension


@dataclass(frozen=True)
class GeneratorBasis:
    d: int
    generators: np.ndarray  # shape (d*d - 1, d, d), complex

    def __len__(self) -> int:
        return self.generators.shape[0]

    def __getitem__(self, a: int) -> np.ndarray:
        return self.generators[a]

    def __iter__(self):
        return iter(self.generators)


@dataclass(frozen=True)
class BasisReport:
    max_trace: float
    max_orthonormality: float
    max_hermiticity: float

    def ok(self, tol: float = 1e-12) -> bool:
        return max(self.max_trace, self.max_orthonormality, self.max_hermiticity) < tol


@lru_cache(maxsize=None)
def _build(d: int) -> np.ndarray:
    pairs = list(combinations(range(d), 2))
    mats = []
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = m[k, j] = 1.0
        mats.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        mats.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.sqrt(2.0 / (l * (l + 1))) * np.diag(diag).astype(complex))
    out = np.array(mats)
    out.setflags(write=False)
    return out


def generators(d: int) -> GeneratorBasis:
    """The ``d*d - 1`` generators of su(d) in canonical order."""
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidDimension(f"local dimension must be an integer >= 2, got {d!r}")
    return GeneratorBasis(int(d), _build(int(d)))


def verify_basis(basis: GeneratorBasis) -> BasisReport:
    g = np.asarray(basis.generators)
    traces = np.abs(np.einsum("aii->a", g))
    gram = np.einsum("aij,bji->ab", g, g)
    target = 2.0 * np.eye(len(g))
    herm = np.abs(g - np.conj(np.transpose(g, (0, 2, 1))))
    return BasisReport(
        max_trace=float(traces.max(initial=0.0)),
        max_orthonormality=float(np.abs(gram - target).max(initial=0.0)),
        max_hermiticity=float(herm.max(initial=0.0)),
    )


def bloch_coefficients(m: np.ndarray, basis: GeneratorBasis) -> np.ndarray:
    """``tr(m l_a)`` for every generator; real when ``m`` is Hermitian."""
    return np.einsum("ij,aji->a", m, basis.generators)


def reconstruct(trace: complex, coeffs: np.ndarray, basis: GeneratorBasis) -> np.ndarray:
    """Inverse of the expansion ``M = (tr M / d) I + 1/2 sum_a tr(M l_a) l_a``."""
    d = basis.d
    return trace / d * np.eye(d) + 0.5 * np.einsum("a,aij->ij", coeffs, basis.generators)
