"""Closed-form separability bounds, the four-party GME threshold and verdicts."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import sqrt
from typing import Optional, Sequence

import numpy as np

from .config import TOL
from .correlations import CorrelationTensor, cut_matrix, full_tensor, ky_fan_all, matricize
from .errors import BadParams, KOutOfRange, NotPure, WrongPartyCount
from .states import (
    DensityMatrix,
    PureState,
    as_density,
    bipartitions,
    check_cut,
    cut_label,
    mix_with_white_noise,
    purity,
    validate_density,
)


class BoundId(str, Enum):
    LEMMA1 = "lemma1"
    LEMMA2_SEP = "lemma2sep"
    LEMMA2_ENT = "lemma2ent"
    LEMMA3_SEP = "lemma3sep"
    LEMMA3_ENT = "lemma3ent"
    LEMMA4_SEP = "lemma4sep"
    LEMMA4_ENT = "lemma4ent"
    THM1 = "thm1"
    THM2 = "thm2"
    THM3 = "thm3"
    THM4_ODD = "thm4odd"
    THM4_EVEN = "thm4even"
    BODY1 = "body1"
    BODY2 = "body2"
    BODY3 = "body3"
    BODYN = "bodyn"


_NEEDS_K = {
    BoundId.LEMMA2_ENT, BoundId.LEMMA3_ENT, BoundId.LEMMA4_ENT,
    BoundId.THM1, BoundId.THM4_ODD, BoundId.THM4_EVEN,
}
_NEEDS_N = {BoundId.THM2, BoundId.THM3, BoundId.THM4_ODD, BoundId.THM4_EVEN, BoundId.BODYN}


def _check_k(k, d: int) -> int:
    if k is None or not 1 <= int(k) <= d * d - 1:
        raise BadParams(f"k must lie in 1..{d * d - 1} for d={d}, got {k}")
    return int(k)


def bound(bid, d: int, n: Optional[int] = None, k: Optional[int] = None,
          n_a1: Optional[int] = None) -> float:
    """Right-hand side of the named bound.

    ``lemma*`` ids are four-party results and ignore ``n``. ``thm3`` needs
    ``n_a1`` (size of one side of the cut).
    """
    try:
        bid = BoundId(bid)
    except ValueError as exc:
        raise BadParams(f"unknown bound id {bid!r}") from exc
    if d is None or d < 2:
        raise BadParams(f"d must be >= 2, got {d}")
    if bid in _NEEDS_K:
        k = _check_k(k, d)
    if bid in _NEEDS_N and (n is None or n < 2):
        raise BadParams(f"{bid.value} needs n >= 2, got {n}")

    if bid is BoundId.LEMMA1:
        return 4 * (d - 1) ** 2 / d**2
    if bid in (BoundId.LEMMA2_SEP, BoundId.LEMMA3_SEP):
        return 4 * (d - 1) * sqrt(d * d + d + 1) / d**2
    if bid in (BoundId.LEMMA2_ENT, BoundId.LEMMA3_ENT):
        return 4 * sqrt(k) * (d * d - 1) / d**2
    if bid is BoundId.LEMMA4_SEP:
        return 4 * (d * d - 1) / d**2
    if bid is BoundId.LEMMA4_ENT:
        return 4 * k * (d * d - 1) / d**2
    if bid is BoundId.THM1:
        return theorem1_threshold(d, k)
    if bid is BoundId.THM2:
        return sqrt(2**n * (d - 1) ** n / d**n)
    if bid is BoundId.THM3:
        if n_a1 is None or not 1 <= n_a1 <= n - 1:
            raise BadParams(f"thm3 needs 1 <= n_a1 <= n-1, got n_a1={n_a1}, n={n}")
        return sqrt(2**n * (d**n_a1 - 1) * (d ** (n - n_a1) - 1) / d**n)
    if bid is BoundId.THM4_ODD:
        if n % 2 == 0:
            raise BadParams(f"thm4odd needs odd n, got {n}")
        h = n // 2
        return sqrt(2**n * k * (d**h - 1) * (d ** (n - h) - 1) / d**n)
    if bid is BoundId.THM4_EVEN:
        if n % 2 == 1:
            raise BadParams(f"thm4even needs even n, got {n}")
        return sqrt(2**n * k * (d ** (n // 2) - 1) ** 2 / d**n)
    if bid is BoundId.BODY1:
        return sqrt(2 * (d - 1) / d)
    if bid is BoundId.BODY2:
        return sqrt(4 * (d * d - 1) / d**2)
    if bid is BoundId.BODY3:
        return 2 / d * sqrt(2 * (d**3 - 1) / d)
    if bid is BoundId.BODYN:
        return sqrt(2**n * (d**n - 1) / d**n)
    raise BadParams(f"unhandled bound id {bid}")  # pragma: no cover


def body_bound(order: int, d: int) -> float:
    """Frobenius bound for an ``order``-body correlation tensor of any state."""
    return sqrt(2**order * (d**order - 1) / d**order)


def lemma4_proof_bound(d: int, k: int) -> float:
    """Maximum over the 12|34 case analysis in the proof of the 2-vs-2 lemma.

    Tighter than the stated ``4k(d^2-1)/d^2`` for k >= 2; reported alongside it.
    """
    k = _check_k(k, d)
    two_two = 4 * (d * d - 1) / d**2
    if k == 1:
        return two_two
    return max(4 * (d - 1) * sqrt(k * (d * d + d + 1)) / d**2, two_two)


def theorem1_threshold(d: int, k: int) -> float:
    """``(d-1) [sqrt(d^2+d+1) + 3(d+1) sqrt(k)] / d^2``."""
    if d is None or d < 2:
        raise BadParams(f"d must be >= 2, got {d}")
    k = _check_k(k, d)
    return (d - 1) * (sqrt(d * d + d + 1) + 3 * (d + 1) * sqrt(k)) / d**2


def thm4_id(n: int) -> BoundId:
    return BoundId.THM4_ODD if n % 2 else BoundId.THM4_EVEN


def cut_bound(n: int, d: int, a1_size: int) -> tuple[float, BoundId]:
    """Bound obeyed by a state separable across a cut with ``a1_size`` parties on one side."""
    if n == 4:
        if a1_size in (1, 3):
            bid = BoundId.LEMMA2_SEP if a1_size == 1 else BoundId.LEMMA3_SEP
            return bound(bid, d), bid
        return bound(BoundId.LEMMA4_SEP, d), BoundId.LEMMA4_SEP
    return bound(BoundId.THM3, d, n=n, n_a1=a1_size), BoundId.THM3


# -- average matricization norm ----------------------------------------------


def _four_party_tensor(state) -> CorrelationTensor:
    rho = as_density(state)
    if rho.n != 4:
        raise WrongPartyCount(f"M_k is defined for 4 parties, got n={rho.n}")
    return full_tensor(rho)


def m_k_all(state) -> np.ndarray:
    """``M_k`` for k = 1..d^2-1 (index 0 holds k=1)."""
    t = _four_party_tensor(state)
    total = sum(ky_fan_all(cut_matrix(t, (f,))) for f in (1, 2, 3, 4))
    return total / 4.0


def m_k(state, k: int) -> float:
    """Average of the Ky Fan k-norms of the four one-vs-rest matricizations."""
    rho = as_density(state)
    k = _check_k(k, rho.d) if rho.n == 4 else k
    return float(m_k_all(rho)[k - 1])


# -- verdicts ------------------------------------------------------------------


class VerdictKind(str, Enum):
    GME = "GMECertified"
    CUT = "EntangledAcrossCut"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Row:
    label: str
    k: int
    statistic: float
    threshold: float
    margin: float
    detected: bool


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    rows: tuple[Row, ...]
    purity: float
    pure_state_only: bool = False
    cut: Optional[str] = None
    failed_cuts: tuple[str, ...] = ()

    @property
    def certified(self) -> bool:
        return self.kind is not VerdictKind.INCONCLUSIVE

    @property
    def ks(self) -> tuple[int, ...]:
        return tuple(sorted({r.k for r in self.rows}))

    @property
    def best_margin(self) -> float:
        return max(r.margin for r in self.rows)


def _row(label: str, k: int, value: float, threshold: float) -> Row:
    margin = value - threshold
    # strict inequality; ties within TOL.tie are not detections
    return Row(label, k, float(value), float(threshold), float(margin), bool(margin > TOL.tie))


def _ks(k, kmax: int) -> list[int]:
    if k is None:
        return list(range(1, kmax + 1))
    ks = [int(k)] if np.isscalar(k) else [int(x) for x in k]
    for x in ks:
        if not 1 <= x <= kmax:
            raise KOutOfRange(f"k={x} outside 1..{kmax}")
    return ks


def detect_gme_4partite(state, k=None) -> Verdict:
    """Four-party GME test against the average-matricization threshold.

    ``k`` may be an int, an iterable of ints, or None to sweep every
    k in 1..d^2-1; the state is certified if any requested k detects.
    """
    rho = as_density(state)
    if rho.n != 4:
        raise WrongPartyCount(f"four-party detector applied to n={rho.n}")
    d = rho.d
    values = m_k_all(rho)
    rows = tuple(
        _row("M_k", kk, values[kk - 1], theorem1_threshold(d, kk)) for kk in _ks(k, d * d - 1)
    )
    kind = VerdictKind.GME if any(r.detected for r in rows) else VerdictKind.INCONCLUSIVE
    return Verdict(kind, rows, purity(rho))


def _require_pure(state) -> DensityMatrix:
    if isinstance(state, PureState):
        return as_density(state)
    rho = as_density(state)
    report = validate_density(rho)
    if not report.ok or abs(report.purity - 1.0) > TOL.purity:
        raise NotPure(f"criterion holds for pure states only; purity {report.purity:.12g}")
    return rho


def certify_cut_entanglement_pure(state, a1: Sequence[int], k: int) -> Verdict:
    """Entanglement across A1|A2 when ``||T_{A1|A2}||_k`` beats the separable-cut bound."""
    rho = _require_pure(state)
    a1, a2 = check_cut(rho.structure, a1)
    label = cut_label(a1, a2)
    mat = cut_matrix(full_tensor(rho), a1)
    ks = _ks(k, min(mat.shape))
    limit = bound(BoundId.THM3, rho.d, n=rho.n, n_a1=len(a1))
    norms = ky_fan_all(mat)
    rows = tuple(_row(label, kk, norms[kk - 1], limit) for kk in ks)
    kind = VerdictKind.CUT if any(r.detected for r in rows) else VerdictKind.INCONCLUSIVE
    return Verdict(kind, rows, 1.0, pure_state_only=True, cut=label)


def certify_gme_pure_npartite(state, k: int) -> Verdict:
    """GME certificate for pure states: every cut must beat its separable-cut bound."""
    rho = _require_pure(state)
    kk = int(k)
    t = full_tensor(rho)
    rows, failed = [], []
    for a1, a2 in bipartitions(rho.n):
        mat = cut_matrix(t, a1)
        if not 1 <= kk <= min(mat.shape):
            raise KOutOfRange(f"k={kk} outside 1..{min(mat.shape)} for cut {cut_label(a1, a2)}")
        limit = bound(BoundId.THM3, rho.d, n=rho.n, n_a1=len(a1))
        r = _row(cut_label(a1, a2), kk, ky_fan_all(mat)[kk - 1], limit)
        rows.append(r)
        if not r.detected:
            failed.append(r.label)
    kind = VerdictKind.INCONCLUSIVE if failed else VerdictKind.GME
    return Verdict(kind, tuple(rows), 1.0, pure_state_only=True, failed_cuts=tuple(failed))


@dataclass(frozen=True)
class Theorem4Report:
    cut: str
    k: int
    norm: float
    bound: float
    bound_id: BoundId
    violates_hypothesis: bool
    hypothesis: str = "separable under at least one bipartition (assumed, not verified)"


def theorem4_check(state, party: int, k: int, side: str = "first") -> Theorem4Report:
    """Compare ``||T_{j|rest}||_k`` (side="first") or ``||T_{rest|j}||_k`` (side="last")
    with the odd/even-n bound for states separable somewhere but entangled on that cut."""
    rho = _require_pure(state)
    n = rho.n
    (j,), rest = check_cut(rho.structure, [party])
    if side == "first":
        rows, cols = (j,), rest
    elif side == "last":
        rows, cols = rest, (j,)
    else:
        raise BadParams(f"side must be 'first' or 'last', got {side!r}")
    bid = thm4_id(n)
    limit = bound(bid, rho.d, n=n, k=k)
    mat = matricize(full_tensor(rho), rows, cols)
    value = ky_fan_all(mat)[int(k) - 1]
    return Theorem4Report(
        cut_label(rows, cols), int(k), float(value), limit, bid,
        bool(value - limit > TOL.compare),
    )


# -- white-noise robustness ------------------------------------------------------


@dataclass(frozen=True)
class CriticalVisibility:
    k: int
    p: Optional[float]  # None: not detectable even at p = 1
    iterations: int
    threshold: float

    @property
    def detectable(self) -> bool:
        return self.p is not None


def critical_visibility(state, k: int, tol: float = 1e-6) -> CriticalVisibility:
    """Smallest white-noise visibility p at which the four-party detector fires.

    Bisection on p over actual noisy states; keeps ``lo`` undetected and
    ``hi`` detected, and returns ``hi`` once ``hi - lo <= tol``.
    """
    rho = as_density(state)
    if rho.n != 4:
        raise WrongPartyCount(f"four-party detector applied to n={rho.n}")
    threshold = theorem1_threshold(rho.d, k)

    def fires(p: float) -> bool:
        return detect_gme_4partite(mix_with_white_noise(rho, p), k).certified

    if not fires(1.0):
        return CriticalVisibility(int(k), None, 0, threshold)
    lo, hi, it = 0.0, 1.0, 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fires(mid):
            hi = mid
        else:
            lo = mid
        it += 1
    return CriticalVisibility(int(k), hi, it, threshold)
