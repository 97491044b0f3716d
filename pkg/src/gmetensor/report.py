"""Full analysis of one state: cut norms, M_k verdicts, purity decomposition."""
from __future__ import annotations

from typing import Optional, Sequence

from .config import TOL
from .correlations import cut_matrix, full_tensor, ky_fan_all, purity_decomposition
from .criteria import certify_gme_pure_npartite, cut_bound, detect_gme_4partite
from .errors import KOutOfRange
from .states import as_density, bipartitions, cut_label, mix_with_white_noise, purity


def analyze(state, ks: Optional[Sequence[int]] = None, noise: Optional[float] = None,
            source: str = "<memory>") -> dict:
    """Build the analysis report as a JSON-ready dict.

    ``ks=None`` means every admissible k for each table.
    """
    rho = as_density(state)
    if noise is not None:
        rho = mix_with_white_noise(rho, noise)
    n, d = rho.n, rho.d
    kmax = d * d - 1

    def wanted(limit):
        return [k for k in (ks or range(1, limit + 1)) if 1 <= k <= limit]

    t = full_tensor(rho)
    cut_rows = []
    for a1, a2 in bipartitions(n):
        mat = cut_matrix(t, a1)
        norms = ky_fan_all(mat)
        limit, bid = cut_bound(n, d, len(a1))
        for k in wanted(min(mat.shape)):
            cut_rows.append({
                "cut": cut_label(a1, a2), "k": k, "ky_fan": float(norms[k - 1]),
                "bound": limit, "bound_id": bid.value,
                "exceeds": bool(norms[k - 1] - limit > TOL.tie),
            })

    if ks is not None and not wanted(kmax):
        raise KOutOfRange(f"no requested k in 1..{kmax}: {list(ks)}")
    mk_rows, verdict = [], None
    if n == 4:
        v = detect_gme_4partite(rho, wanted(kmax))
        verdict = v.kind.value
        mk_rows = [{
            "k": r.k, "M_k": r.statistic, "threshold": r.threshold, "margin": r.margin,
            "verdict": "GMECertified" if r.detected else "Inconclusive",
        } for r in v.rows]

    pur = purity(rho)
    npartite = []
    if abs(pur - 1.0) <= TOL.purity:
        for k in wanted(kmax):
            v = certify_gme_pure_npartite(rho, k)
            npartite.append({"k": k, "verdict": v.kind.value, "failed_cuts": list(v.failed_cuts)})

    dec = purity_decomposition(rho)
    dec_rows = [{
        "subset": "".join(map(str, s)) if s else "-",
        "squared_norm": sq,
        "contribution": dec.weighted(s),
    } for s, sq in dec.squared_norms.items()]

    return {
        "input": source,
        "n": n,
        "d": d,
        "noise": noise,
        "purity": pur,
        "verdict": verdict,
        "mk_table": mk_rows,
        "cut_table": cut_rows,
        "npartite_pure": npartite,
        "purity_decomposition": dec_rows,
        "purity_total": dec.total,
        "body_totals": {str(m): v for m, v in dec.by_body().items()},
    }


def format_report(rep: dict) -> str:
    g = "{:.9g}".format
    lines = [f"input: {rep['input']}  n={rep['n']} d={rep['d']}"
             + (f"  noise p={g(rep['noise'])}" if rep["noise"] is not None else ""),
             f"purity tr(rho^2) = {g(rep['purity'])}  (reconstructed {g(rep['purity_total'])})"]
    if rep["mk_table"]:
        lines.append("")
        lines.append(f"{'k':>3}  {'M_k':>14}  {'threshold':>14}  {'margin':>14}  verdict")
        for r in rep["mk_table"]:
            lines.append(f"{r['k']:>3}  {g(r['M_k']):>14}  {g(r['threshold']):>14}  "
                         f"{g(r['margin']):>14}  {r['verdict']}")
        lines.append(f"four-party verdict: {rep['verdict']}")
    if rep["npartite_pure"]:
        lines.append("")
        for r in rep["npartite_pure"]:
            failed = ", ".join(r["failed_cuts"]) or "none"
            lines.append(f"pure-state all-cuts certificate k={r['k']}: {r['verdict']} "
                         f"(cuts not exceeding bound: {failed})")
    lines.append("")
    lines.append(f"{'cut':>10}  {'k':>3}  {'ky_fan':>14}  {'bound':>14}  bound_id")
    for r in rep["cut_table"]:
        lines.append(f"{r['cut']:>10}  {r['k']:>3}  {g(r['ky_fan']):>14}  {g(r['bound']):>14}  "
                     f"{r['bound_id']}{'  *' if r['exceeds'] else ''}")
    lines.append("")
    lines.append("body totals of squared correlation norms: "
                 + ", ".join(f"{m}-body {g(v)}" for m, v in rep["body_totals"].items()))
    return "\n".join(lines)
