"""Correlation tensors, their matricizations and norms.

For a party subset S the correlation tensor has entries
``t[i_s1, ..., i_s|S|] = tr(rho * (l_i_s1 on s1) x ... x (identity elsewhere))``
with generator indices 0-based here (0 = first generator in canonical order).
Entries are stored row-major over S in ascending party order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import numerics
from .config import TOL
from .errors import BadSplit, EmptySubset, KOutOfRange
from .states import DensityMatrix, PartyStructure, as_density, partial_trace
from .su_basis import generators


class ImaginaryResidue(ArithmeticError):
    """Correlation traces came out complex beyond tolerance (non-Hermitian input)."""


@dataclass(frozen=True)
class CorrelationTensor:
    structure: PartyStructure
    subset: tuple[int, ...]
    entries: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.subset)

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.entries.reshape(-1)))


@dataclass(frozen=True)
class Matricization:
    subset: tuple[int, ...]
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    mat: np.ndarray = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.mat.shape

    @property
    def label(self) -> str:
        return "".join(map(str, self.rows)) + "|" + "".join(map(str, self.cols))

    def singular_values(self) -> np.ndarray:
        return numerics.singular_values(self.mat)


@dataclass(frozen=True)
class PurityDecomposition:
    n: int
    d: int
    squared_norms: dict  # subset tuple (empty for the identity term) -> ||T^(S)||_F^2
    total: float

    def weighted(self, subset: tuple[int, ...]) -> float:
        """Contribution of one subset to tr(rho^2)."""
        if not subset:
            return self.d ** -self.n
        m = len(subset)
        return self.squared_norms[subset] / (2**m * self.d ** (self.n - m))

    def by_body(self) -> dict[int, float]:
        """Raw squared-norm sums grouped by subset size (size 0 excluded)."""
        out = {m: 0.0 for m in range(1, self.n + 1)}
        for s, v in self.squared_norms.items():
            if s:
                out[len(s)] += v
        return out


def _contract_generators(reduced: np.ndarray, m: int, d: int) -> np.ndarray:
    g = generators(d).generators
    t = reduced.reshape((d,) * (2 * m))
    for step in range(m):
        rows_left = m - step
        # sum_{i,j} t[i.., j..] * l[j, i]: party row axis sits at 0, column axis at rows_left
        t = np.tensordot(g, t, axes=([2, 1], [0, rows_left]))
        t = np.moveaxis(t, 0, -1)
    return t


def correlation_tensor(state, subset: Iterable[int]) -> CorrelationTensor:
    """Correlation tensor of ``state`` on the parties in ``subset``.

    The state is first reduced to ``subset`` by partial trace, then each
    party's row/column axis pair is contracted against the generator stack.
    No Kronecker products are formed.
    """
    rho = as_density(state)
    s = rho.structure
    subset = tuple(sorted(s.check_parties(subset)))
    if not subset:
        raise EmptySubset("correlation tensor needs a nonempty party subset")
    reduced = partial_trace(rho, subset) if len(subset) < s.n else rho.mat
    t = _contract_generators(reduced, len(subset), s.d)
    imag = float(np.max(np.abs(t.imag))) if t.size else 0.0
    if imag > TOL.imag:
        raise ImaginaryResidue(f"max imaginary part {imag:.2e} exceeds {TOL.imag:.0e}")
    return CorrelationTensor(s, subset, np.ascontiguousarray(t.real))


def full_tensor(state) -> CorrelationTensor:
    rho = as_density(state)
    return correlation_tensor(rho, rho.structure.parties)


def matricize(t: CorrelationTensor, rows: Sequence[int], cols: Sequence[int]) -> Matricization:
    """Unfold ``t`` with row parties ``rows`` and column parties ``cols``.

    Row index of the multi-index is the mixed-radix number formed by the row
    parties' generator indices in the given order (first is most significant),
    likewise for columns.
    """
    rows = tuple(int(p) for p in rows)
    cols = tuple(int(p) for p in cols)
    if not rows or not cols:
        raise BadSplit("both sides of a matricization must be nonempty")
    if len(set(rows + cols)) != len(rows + cols) or set(rows + cols) != set(t.subset):
        raise BadSplit(f"rows {rows} and cols {cols} do not partition {t.subset}")
    pos = {p: i for i, p in enumerate(t.subset)}
    dd = t.entries.shape[0] if t.entries.ndim else 0
    arr = np.transpose(t.entries, [pos[p] for p in rows + cols])
    return Matricization(t.subset, rows, cols, arr.reshape(dd ** len(rows), dd ** len(cols)))


def cut_matrix(t: CorrelationTensor, a1: Sequence[int]) -> Matricization:
    """``T_{A1|A2}``: rows are A1 ascending, columns the rest of ``t.subset`` ascending."""
    a1 = tuple(sorted(a1))
    return matricize(t, a1, tuple(p for p in t.subset if p not in a1))


def frobenius(x) -> float:
    if isinstance(x, CorrelationTensor):
        x = x.entries
    elif isinstance(x, Matricization):
        x = x.mat
    return float(np.linalg.norm(np.asarray(x).reshape(-1)))


def ky_fan(m, k: int) -> float:
    """Sum of the ``k`` largest singular values, ``1 <= k <= min(rows, cols)``."""
    mat = m.mat if isinstance(m, Matricization) else np.asarray(m)
    kmax = min(mat.shape)
    if not 1 <= k <= kmax:
        raise KOutOfRange(f"k={k} outside 1..{kmax}")
    return float(numerics.singular_values(mat)[:k].sum())


def ky_fan_all(m) -> np.ndarray:
    """Ky Fan k-norms for k = 1..min(rows, cols) (cumulative singular value sums)."""
    mat = m.mat if isinstance(m, Matricization) else np.asarray(m)
    return np.cumsum(numerics.singular_values(mat))


def all_subsets(n: int):
    for m in range(1, n + 1):
        yield from combinations(range(1, n + 1), m)


def purity_decomposition(state) -> PurityDecomposition:
    """``tr(rho^2) = 1/d^n + sum_S ||T^(S)||^2 / (2^|S| d^(n-|S|))`` with the per-subset table."""
    rho = as_density(state)
    n, d = rho.n, rho.d
    table = {(): 1.0}
    total = d ** -n
    for subset in all_subsets(n):
        sq = correlation_tensor(rho, subset).frobenius() ** 2
        table[subset] = sq
        total += sq / (2 ** len(subset) * d ** (n - len(subset)))
    return PurityDecomposition(n, d, table, float(total))


def product_tensor(local_vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Outer product of per-party real vectors (helper for rank-1 tensors)."""
    return reduce(np.multiply.outer, [np.asarray(v, dtype=float) for v in local_vectors])
