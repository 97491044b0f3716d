"""Multipartite qudit states: containers, canonical families, noise, validation.

Parties are labelled 1..n throughout the public API. Composite indices put
party 1 in the most significant position.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import numerics
from .config import DIM_CAP, TOL
from .errors import (
    CapExceeded,
    InvalidBipartition,
    InvalidDimension,
    InvalidParty,
    InvalidState,
    NotNormalized,
    OutOfRange,
)


@dataclass(frozen=True)
class PartyStructure:
    n: int
    d: int
    cap: int = DIM_CAP

    def __post_init__(self):
        if self.n < 2:
            raise InvalidDimension(f"need at least 2 parties, got n={self.n}")
        if self.d < 2:
            raise InvalidDimension(f"local dimension must be >= 2, got d={self.d}")
        if self.d**self.n > self.cap:
            raise CapExceeded(f"d^n = {self.d}^{self.n} exceeds the cap {self.cap}")

    @property
    def dim(self) -> int:
        return self.d**self.n

    @property
    def parties(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def check_parties(self, parties: Iterable[int]) -> tuple[int, ...]:
        out = tuple(int(p) for p in parties)
        for p in out:
            if not 1 <= p <= self.n:
                raise InvalidParty(f"party {p} outside 1..{self.n}")
        if len(set(out)) != len(out):
            raise InvalidParty(f"repeated party in {out}")
        return out

    def complement(self, parties: Iterable[int]) -> tuple[int, ...]:
        s = set(parties)
        return tuple(p for p in self.parties if p not in s)


@dataclass(frozen=True)
class PureState:
    structure: PartyStructure
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.structure.dim:
            raise InvalidDimension(f"expected {self.structure.dim} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > TOL.state_norm:
            raise NotNormalized(f"state norm {norm!r} differs from 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def d(self) -> int:
        return self.structure.d


@dataclass(frozen=True)
class DensityMatrix:
    """A ``d^n x d^n`` matrix with party structure. Not validated on construction;
    use :func:`density_matrix` for a checked constructor."""

    structure: PartyStructure
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        dim = self.structure.dim
        if m.shape != (dim, dim):
            raise InvalidDimension(f"expected a {dim}x{dim} matrix, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def d(self) -> int:
        return self.structure.d


@dataclass(frozen=True)
class DensityReport:
    hermiticity: float
    trace_deviation: float
    min_eigenvalue: float
    purity: float
    flags: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.flags


def validate_density(rho) -> DensityReport:
    m = np.asarray(rho.mat if isinstance(rho, DensityMatrix) else rho, dtype=complex)
    herm = numerics.hermiticity_residual(m)
    trace_dev = abs(np.trace(m) - 1.0)
    h = 0.5 * (m + m.conj().T)
    min_eig = float(np.linalg.eigvalsh(h)[0])
    purity = float(np.real(numerics.trace_product(h, h)))
    flags = []
    if herm > TOL.hermitian:
        flags.append("NotHermitian")
    if trace_dev > TOL.trace:
        flags.append("TraceDeviation")
    if min_eig < -TOL.psd:
        flags.append("NotPSD")
    return DensityReport(herm, float(trace_dev), min_eig, purity, tuple(flags))


def density_matrix(mat, n: int, d: int, cap: int = DIM_CAP) -> DensityMatrix:
    """Checked constructor; raises :class:`InvalidState` listing failed checks."""
    rho = DensityMatrix(PartyStructure(n, d, cap), mat)
    report = validate_density(rho)
    if not report.ok:
        raise InvalidState(
            f"invalid density matrix ({', '.join(report.flags)}): hermiticity "
            f"{report.hermiticity:.2e}, trace deviation {report.trace_deviation:.2e}, "
            f"min eigenvalue {report.min_eigenvalue:.2e}"
        )
    return rho


def pure_state(amplitudes, n: int, d: int, cap: int = DIM_CAP) -> PureState:
    return PureState(PartyStructure(n, d, cap), amplitudes)


def pure_to_density(psi: PureState) -> DensityMatrix:
    v = psi.amplitudes
    return DensityMatrix(psi.structure, np.outer(v, v.conj()))


def as_density(state) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return pure_to_density(state)
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def purity(state) -> float:
    if isinstance(state, PureState):
        return 1.0
    m = state.mat
    return float(np.real(numerics.trace_product(m, m)))


# -- canonical families -------------------------------------------------------


def ghz(n: int, d: int = 2, cap: int = DIM_CAP) -> PureState:
    s = PartyStructure(n, d, cap)
    amps = np.zeros(s.dim, dtype=complex)
    step = sum(d**p for p in range(n))  # index of |j...j> is j * (1 + d + ... + d^{n-1})
    amps[np.arange(d) * step] = 1.0 / np.sqrt(d)
    return PureState(s, amps)


def w_state(n: int, cap: int = DIM_CAP) -> PureState:
    s = PartyStructure(n, 2, cap)
    amps = np.zeros(s.dim, dtype=complex)
    amps[[2**p for p in range(n)]] = 1.0 / np.sqrt(n)
    return PureState(s, amps)


def product_state(locals_: Sequence, cap: int = DIM_CAP) -> PureState:
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in locals_]
    if len(vecs) < 2:
        raise InvalidDimension("a product state needs at least 2 parties")
    d = vecs[0].size
    if any(v.size != d for v in vecs):
        raise InvalidDimension("heterogeneous local dimensions are not supported")
    for i, v in enumerate(vecs, start=1):
        if abs(np.linalg.norm(v) - 1.0) > TOL.state_norm:
            raise NotNormalized(f"local vector of party {i} is not normalized")
    return PureState(PartyStructure(len(vecs), d, cap), numerics.kron_all(vecs))


def basis_product(levels: Sequence[int], d: int) -> PureState:
    """Computational basis product state ``|l_1 l_2 ... l_n>``."""
    return product_state([np.eye(d)[l] for l in levels])


def random_pure(structure: PartyStructure, rng: numerics.Rng) -> PureState:
    return PureState(structure, numerics.haar_vector(structure.dim, rng))


def random_product(structure: PartyStructure, rng: numerics.Rng) -> PureState:
    return product_state(
        [numerics.haar_vector(structure.d, rng) for _ in range(structure.n)], structure.cap
    )


def check_cut(structure: PartyStructure, a1: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Validate a bipartition side; returns (A1, A2) both sorted ascending."""
    try:
        a1 = tuple(sorted(structure.check_parties(a1)))
    except InvalidParty as exc:
        raise InvalidBipartition(str(exc)) from exc
    if not a1 or len(a1) == structure.n:
        raise InvalidBipartition(f"A1={a1} must be a nonempty proper subset of 1..{structure.n}")
    return a1, structure.complement(a1)


def bipartitions(n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All 2^(n-1) - 1 unordered cuts, smaller side first (ties: side holding party 1)."""
    parties = tuple(range(1, n + 1))
    out = []
    for size in range(1, n // 2 + 1):
        for a1 in combinations(parties, size):
            if 2 * size == n and 1 not in a1:
                continue
            out.append((a1, tuple(p for p in parties if p not in a1)))
    return out


def cut_label(a1: Sequence[int], a2: Sequence[int]) -> str:
    sep = "," if max(list(a1) + list(a2)) > 9 else ""
    return sep.join(map(str, a1)) + "|" + sep.join(map(str, a2))


def _block_order(structure: PartyStructure, amps: np.ndarray, a1, a2) -> np.ndarray:
    """Amplitude tensor with axes reordered as A1 then A2."""
    t = amps.reshape((structure.d,) * structure.n)
    return np.transpose(t, [p - 1 for p in a1] + [p - 1 for p in a2])


def schmidt_coefficients(psi: PureState, a1: Iterable[int]) -> np.ndarray:
    """Descending singular values of the amplitudes reshaped across A1|A2."""
    s = psi.structure
    a1, a2 = check_cut(s, a1)
    mat = _block_order(s, psi.amplitudes, a1, a2).reshape(s.d ** len(a1), s.d ** len(a2))
    return np.linalg.svd(mat, compute_uv=False)


def random_biseparable_pure(
    structure: PartyStructure, a1: Iterable[int], rng: numerics.Rng
) -> PureState:
    """Haar state on A1 tensored with an independent Haar state on its complement."""
    a1, a2 = check_cut(structure, a1)
    d = structure.d
    v1 = numerics.haar_vector(d ** len(a1), rng)
    v2 = numerics.haar_vector(d ** len(a2), rng)
    block = np.kron(v1, v2).reshape((d,) * structure.n)
    order = [p - 1 for p in a1] + [p - 1 for p in a2]
    natural = np.transpose(block, np.argsort(order))
    return PureState(structure, natural.reshape(-1))


def mix_with_white_noise(state, p: float) -> DensityMatrix:
    """``p * rho + (1 - p) * I / d^n``."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"visibility p={p} outside [0, 1]")
    rho = as_density(state)
    dim = rho.structure.dim
    return DensityMatrix(rho.structure, p * rho.mat + (1.0 - p) / dim * np.eye(dim))


def maximally_mixed(structure: PartyStructure) -> DensityMatrix:
    return DensityMatrix(structure, np.eye(structure.dim) / structure.dim)


def mixture(states: Sequence, weights: Sequence[float]) -> DensityMatrix:
    """Convex combination of states sharing one party structure."""
    rhos = [as_density(s) for s in states]
    w = np.asarray(weights, dtype=float)
    if len(rhos) != len(w) or len(rhos) == 0:
        raise OutOfRange("need one weight per state")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise OutOfRange("weights must be a probability distribution")
    structure = rhos[0].structure
    if any(r.structure != structure for r in rhos):
        raise InvalidDimension("states have different party structures")
    return DensityMatrix(structure, sum(wi * r.mat for wi, r in zip(w, rhos)))


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> np.ndarray:
    """Reduced matrix on the parties in ``keep`` (kept in ascending order)."""
    s = rho.structure
    keep = sorted(s.check_parties(keep))
    n, d = s.n, s.d
    t = rho.mat.reshape((d,) * (2 * n))
    # trace out from the highest party down so remaining axis positions stay valid
    current = n
    for p in reversed(range(1, n + 1)):
        if p in keep:
            continue
        t = np.trace(t, axis1=p - 1, axis2=current + p - 1)
        current -= 1
    m = d ** len(keep)
    return t.reshape(m, m)


def apply_local_unitaries(state, unitaries: Sequence[np.ndarray]):
    """``(U_1 x ... x U_n) state (U_1 x ... x U_n)^dagger``; keeps the state's type."""
    u = numerics.kron_all(unitaries)
    if isinstance(state, PureState):
        return PureState(state.structure, u @ state.amplitudes)
    return DensityMatrix(state.structure, u @ state.mat @ u.conj().T)
