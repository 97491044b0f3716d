"""Monte Carlo validation of the closed-form bounds on sampled states.

Each trial draws from its own generator seeded with ``(seed, trial)``, so a
report is reproducible from (bound id, n, d, samples, seed) and trials can
run in any order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional

import numpy as np

from . import numerics
from .config import ORACLE, TOL
from .correlations import (
    correlation_tensor,
    cut_matrix,
    full_tensor,
    ky_fan_all,
    matricize,
    purity_decomposition,
)
from .criteria import BoundId, bound, lemma4_proof_bound, m_k_all, theorem1_threshold, thm4_id
from .errors import BadParams, UnsamplableClass
from .states import (
    PartyStructure,
    apply_local_unitaries,
    as_density,
    bipartitions,
    mixture,
    purity,
    random_biseparable_pure,
    random_product,
    random_pure,
    schmidt_coefficients,
)

EQUALITY_IDS = {BoundId.LEMMA1, BoundId.THM2}
FOUR_PARTY_IDS = {
    BoundId.LEMMA1, BoundId.LEMMA2_SEP, BoundId.LEMMA2_ENT, BoundId.LEMMA3_SEP,
    BoundId.LEMMA3_ENT, BoundId.LEMMA4_SEP, BoundId.LEMMA4_ENT, BoundId.THM1,
}


@dataclass(frozen=True)
class OracleRow:
    k: Optional[int]
    max_observed: float
    bound: float
    violations: int
    worst_margin: float  # min over samples of (bound - observed); for equality, -max|dev|


@dataclass(frozen=True)
class OracleReport:
    bound_id: str
    n: int
    d: int
    samples: int
    seed: int
    kind: str  # "upper" | "equality" | "identity" | "invariance"
    rows: tuple[OracleRow, ...]
    extra: dict = field(default_factory=dict)

    @property
    def violations(self) -> int:
        return sum(r.violations for r in self.rows)

    @property
    def max_observed(self) -> float:
        return max(r.max_observed for r in self.rows)

    @property
    def worst_margin(self) -> float:
        return min(r.worst_margin for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict:
        return {
            "bound_id": self.bound_id, "n": self.n, "d": self.d, "samples": self.samples,
            "seed": self.seed, "kind": self.kind, "violations": self.violations,
            "max_observed": self.max_observed, "worst_margin": self.worst_margin,
            "rows": [r.__dict__ for r in self.rows], "extra": self.extra,
        }


def _other_cuts(n: int, target: tuple[int, ...]):
    t = frozenset(target)
    comp = frozenset(range(1, n + 1)) - t
    return [c for c in bipartitions(n) if frozenset(c[0]) not in (t, comp)]


def _biseparable_entangled_on(structure, target_rows, rng, max_tries=ORACLE.max_resample):
    """Pure state separable across a random cut other than ``target``, checked to
    be entangled across ``target`` (top Schmidt coefficient < 1 - schmidt_tol)."""
    others = _other_cuts(structure.n, target_rows)
    if not others:
        raise UnsamplableClass(f"no cut other than {target_rows} exists for n={structure.n}")
    for _ in range(max_tries):
        a1, _a2 = others[rng.integers(len(others))]
        psi = random_biseparable_pure(structure, a1, rng)
        if schmidt_coefficients(psi, target_rows)[0] < 1.0 - ORACLE.schmidt_tol:
            return psi
    raise UnsamplableClass(f"could not sample a state entangled across {target_rows}")


def _one_vs_rest(n, rng):
    return (int(rng.integers(1, n + 1)),)


def _pair_with_one(n, rng):
    return (1, int(rng.integers(2, n + 1)))


# each sampler returns (state, rows, cols) where rows|cols is the governed matricization
def _sampler(bid: BoundId, s: PartyStructure) -> Callable:
    n = s.n
    parties = s.parties

    def rest(rows):
        return tuple(p for p in parties if p not in rows)

    if bid in (BoundId.LEMMA1, BoundId.THM2):
        return lambda rng: (random_product(s, rng), (1,), rest((1,)))
    if bid is BoundId.LEMMA2_SEP:
        def f(rng):
            r = _one_vs_rest(n, rng)
            return random_biseparable_pure(s, r, rng), r, rest(r)
        return f
    if bid is BoundId.LEMMA3_SEP:
        def f(rng):
            c = _one_vs_rest(n, rng)
            return random_biseparable_pure(s, c, rng), rest(c), c
        return f
    if bid is BoundId.LEMMA4_SEP:
        def f(rng):
            r = _pair_with_one(n, rng)
            return random_biseparable_pure(s, r, rng), r, rest(r)
        return f
    if bid is BoundId.LEMMA2_ENT:
        def f(rng):
            r = _one_vs_rest(n, rng)
            return _biseparable_entangled_on(s, r, rng), r, rest(r)
        return f
    if bid is BoundId.LEMMA3_ENT:
        def f(rng):
            c = _one_vs_rest(n, rng)
            return _biseparable_entangled_on(s, c, rng), rest(c), c
        return f
    if bid is BoundId.LEMMA4_ENT:
        def f(rng):
            r = _pair_with_one(n, rng)
            return _biseparable_entangled_on(s, r, rng), r, rest(r)
        return f
    if bid is BoundId.THM3:
        cuts = bipartitions(n)

        def f(rng):
            a1, a2 = cuts[rng.integers(len(cuts))]
            if rng.integers(2):
                a1, a2 = a2, a1
            return random_biseparable_pure(s, a1, rng), a1, a2
        return f
    if bid in (BoundId.THM4_ODD, BoundId.THM4_EVEN):
        def f(rng):
            j = _one_vs_rest(n, rng)
            psi = _biseparable_entangled_on(s, j, rng)
            return (psi, j, rest(j)) if rng.integers(2) else (psi, rest(j), j)
        return f
    raise UnsamplableClass(f"no sampler for {bid.value}")  # pragma: no cover


def _validate_params(bid: BoundId, n: int, d: int):
    if bid in FOUR_PARTY_IDS and n != 4:
        raise BadParams(f"{bid.value} is a four-party result; got n={n}")
    if bid is BoundId.THM4_ODD and n % 2 == 0:
        raise BadParams(f"thm4odd needs odd n, got {n}")
    if bid is BoundId.THM4_EVEN and n % 2 == 1:
        raise BadParams(f"thm4even needs even n, got {n}")
    if bid is BoundId.BODY3 and n < 3:
        raise BadParams("body3 needs n >= 3")


def _ks(k, d):
    return list(range(1, d * d)) if k is None else [int(k)]


def check_bound(bid, n: int = 4, d: int = 2, k: Optional[int] = None,
                samples: Optional[int] = None, seed: int = 0) -> OracleReport:
    """Sample the hypothesis class of ``bid`` and compare the governed norm to its bound.

    ``k=None`` checks every k in 1..d^2-1.
    """
    bid = BoundId(bid)
    _validate_params(bid, n, d)
    s = PartyStructure(n, d)
    samples = ORACLE.default_samples(d) if samples is None else int(samples)
    if bid in (BoundId.BODY1, BoundId.BODY2, BoundId.BODY3, BoundId.BODYN):
        return _check_body(bid, s, samples, seed)
    if bid is BoundId.THM1:
        return check_detector_soundness(d, k, samples, seed)

    ks = _ks(k, d)
    draw = _sampler(bid, s)
    limits = {kk: bound(bid, d, n=n, k=kk, n_a1=None) for kk in ks} if bid is not BoundId.THM3 else None
    observed = {kk: [] for kk in ks}
    slack = {kk: [] for kk in ks}
    for trial in range(samples):
        rng = numerics.make_rng((seed, trial))
        psi, rows, cols = draw(rng)
        norms = ky_fan_all(matricize(full_tensor(psi), rows, cols))
        for kk in ks:
            lim = limits[kk] if limits else bound(bid, d, n=n, n_a1=len(rows))
            observed[kk].append(norms[kk - 1])
            slack[kk].append(lim - norms[kk - 1])

    kind = "equality" if bid in EQUALITY_IDS else "upper"
    out, extra = [], {}
    for kk in ks:
        obs = np.array(observed[kk])
        sl = np.array(slack[kk])
        if kind == "equality":
            dev = np.abs(sl)
            viol = int(np.sum(dev >= ORACLE.violation_tol))
            margin = -float(dev.max())
        else:
            viol = int(np.sum(sl < -ORACLE.violation_tol))
            margin = float(sl.min())
        lim = limits[kk] if limits else float(np.max(obs + sl))
        out.append(OracleRow(kk, float(obs.max()), float(lim), viol, margin))
        if bid is BoundId.LEMMA4_ENT:
            tight = lemma4_proof_bound(d, kk)
            extra[f"proof_bound_k{kk}"] = tight
            extra[f"proof_bound_violations_k{kk}"] = int(np.sum(obs > tight + ORACLE.violation_tol))
    return OracleReport(bid.value, n, d, samples, seed, kind, tuple(out), extra)


def _check_body(bid: BoundId, s: PartyStructure, samples: int, seed: int) -> OracleReport:
    order = {BoundId.BODY1: 1, BoundId.BODY2: 2, BoundId.BODY3: 3, BoundId.BODYN: s.n}[bid]
    limit = bound(bid, s.d, n=s.n)
    subsets = list(combinations(s.parties, order))
    obs = []
    for trial in range(samples):
        rng = numerics.make_rng((seed, trial))
        rho = as_density(random_pure(s, rng))
        obs.append(max(correlation_tensor(rho, S).frobenius() for S in subsets))
    obs = np.array(obs)
    viol = int(np.sum(obs > limit + ORACLE.violation_tol))
    row = OracleRow(None, float(obs.max()), limit, viol, float((limit - obs).min()))
    return OracleReport(bid.value, s.n, s.d, samples, seed, "upper", (row,))


def _random_biseparable_4(s: PartyStructure, rng):
    cuts = bipartitions(4)
    a1, _ = cuts[rng.integers(len(cuts))]
    return random_biseparable_pure(s, a1, rng)


def check_detector_soundness(d: int = 2, k: Optional[int] = None, samples: Optional[int] = None,
                             seed: int = 0, mixtures: int = 0) -> OracleReport:
    """Run the four-party GME detector on biseparable pure states (all 7 cut
    types) and, optionally, on random convex mixtures of them. Any detection
    is a violation: none of these states is GME."""
    s = PartyStructure(4, d)
    samples = ORACLE.default_samples(d) if samples is None else int(samples)
    ks = _ks(k, d)
    thr = np.array([theorem1_threshold(d, kk) for kk in ks])
    stats = []
    pool = []
    for trial in range(samples):
        rng = numerics.make_rng((seed, trial))
        psi = _random_biseparable_4(s, rng)
        pool.append(psi)
        stats.append(m_k_all(psi)[np.array(ks) - 1])
    for trial in range(mixtures):
        rng = numerics.make_rng((seed, samples + trial))
        m = int(rng.integers(2, 5))
        picks = rng.choice(len(pool), size=m, replace=False)
        rho = mixture([pool[i] for i in picks], rng.dirichlet(np.ones(m)))
        stats.append(m_k_all(rho)[np.array(ks) - 1])
    stats = np.array(stats)
    rows = []
    for j, kk in enumerate(ks):
        margin = thr[j] - stats[:, j]
        rows.append(OracleRow(kk, float(stats[:, j].max()), float(thr[j]),
                              int(np.sum(-margin > TOL.tie)), float(margin.min())))
    return OracleReport(BoundId.THM1.value, 4, d, samples + mixtures, seed, "upper", tuple(rows),
                        {"pure_samples": samples, "mixtures": mixtures})


def check_purity_identity(n: int, d: int, samples: Optional[int] = None, seed: int = 0,
                          mixed: bool = True) -> OracleReport:
    """Reconstruct tr(rho^2) from weighted correlation-tensor norms.

    Haar pure states must give 1; random convex mixtures of 2..4 Haar pure
    states must give their own purity.
    """
    s = PartyStructure(n, d)
    samples = ORACLE.default_samples(d) if samples is None else int(samples)
    devs_pure, devs_mixed = [], []
    for trial in range(samples):
        rng = numerics.make_rng((seed, trial))
        psi = random_pure(s, rng)
        devs_pure.append(abs(purity_decomposition(psi).total - 1.0))
        if mixed:
            m = int(rng.integers(2, 5))
            rho = mixture([random_pure(s, rng) for _ in range(m)], rng.dirichlet(np.ones(m)))
            devs_mixed.append(abs(purity_decomposition(rho).total - purity(rho)))
    rows = [_dev_row(devs_pure, None)]
    if mixed:
        rows.append(_dev_row(devs_mixed, None))
    return OracleReport("purity", n, d, samples, seed, "identity", tuple(rows),
                        {"rows": ["pure", "mixed"][: len(rows)]})


def _dev_row(devs, k) -> OracleRow:
    devs = np.array(devs)
    return OracleRow(k, float(devs.max()), 0.0, int(np.sum(devs >= ORACLE.violation_tol)),
                     -float(devs.max()))


def _spectra(state) -> dict:
    t = full_tensor(state)
    out = {}
    for a1, _ in bipartitions(state.n):
        out[a1] = cut_matrix(t, a1).singular_values()
    if state.n == 4:
        out["M_k"] = m_k_all(state)
    return out


def check_lu_invariance(state, trials: int = 20, seed: int = 0) -> OracleReport:
    """Singular values of every cut matricization (hence every Ky Fan norm and
    M_k) must not move under random local unitaries."""
    rho = as_density(state)
    ref = _spectra(rho)
    drifts = []
    for trial in range(trials):
        rng = numerics.make_rng((seed, trial))
        us = [numerics.haar_unitary(rho.d, rng) for _ in range(rho.n)]
        rotated = _spectra(apply_local_unitaries(rho, us))
        drift = 0.0
        for key, sv in ref.items():
            # compare cumulative sums: these are the Ky Fan norms themselves
            drift = max(drift, float(np.max(np.abs(np.cumsum(rotated[key]) - np.cumsum(sv)))))
        drifts.append(drift)
    return OracleReport("lu", rho.n, rho.d, trials, seed, "invariance", (_dev_row(drifts, None),))


def validation_ids(n: int) -> list[str]:
    """Bound ids run by ``validate --bound all`` for ``n`` parties."""
    ids = []
    if n == 4:
        ids += [b.value for b in (
            BoundId.LEMMA1, BoundId.LEMMA2_SEP, BoundId.LEMMA2_ENT, BoundId.LEMMA3_SEP,
            BoundId.LEMMA3_ENT, BoundId.LEMMA4_SEP, BoundId.LEMMA4_ENT)]
    ids += [BoundId.THM2.value, BoundId.THM3.value, thm4_id(n).value,
            BoundId.BODY1.value, BoundId.BODY2.value]
    if n >= 3:
        ids.append(BoundId.BODY3.value)
    ids += [BoundId.BODYN.value, "purity", "lu"]
    return ids
