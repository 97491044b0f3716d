"""Independent reference computations for the test suite.

Nothing here imports the package's tensor code: generators are typed out
literally for d=2 and d=3, correlation entries are computed as explicit
traces against full Kronecker products, and partial traces as explicit
index sums.
"""
import itertools
from functools import reduce

import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = [SX, SY, SZ]

_s3 = 1 / np.sqrt(3)
GELLMANN = [
    np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex),
    np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex),
    np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex),
    np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=complex),
    np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]], dtype=complex),
    np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], dtype=complex),
    np.diag([1, -1, 0]).astype(complex),
    _s3 * np.diag([1, 1, -2]).astype(complex),
]

LITERAL = {2: PAULIS, 3: GELLMANN}


def tensor_bruteforce(rho, n, d, subset):
    """t[i...] = tr(rho * kron(ops)) over every generator string on ``subset`` (1-based)."""
    gens = LITERAL[d]
    eye = np.eye(d)
    shape = (len(gens),) * len(subset)
    out = np.zeros(shape)
    for idx in itertools.product(range(len(gens)), repeat=len(subset)):
        ops = [eye] * n
        for p, i in zip(subset, idx):
            ops[p - 1] = gens[i]
        val = np.trace(rho @ reduce(np.kron, ops))
        assert abs(val.imag) < 1e-10
        out[idx] = val.real
    return out


def unfold_bruteforce(t, subset, rows, cols):
    """Matricization by the explicit mixed-radix formula, entry by entry."""
    D = t.shape[0]
    pos = {p: i for i, p in enumerate(subset)}
    m = np.zeros((D ** len(rows), D ** len(cols)))
    for idx in itertools.product(range(D), repeat=len(subset)):
        a = 0
        for p in rows:
            a = a * D + idx[pos[p]]
        b = 0
        for p in cols:
            b = b * D + idx[pos[p]]
        m[a, b] = t[idx]
    return m


def partial_trace_bruteforce(rho, n, d, keep):
    keep = sorted(keep)
    drop = [p for p in range(1, n + 1) if p not in keep]
    m = d ** len(keep)
    out = np.zeros((m, m), dtype=complex)
    for kr in itertools.product(range(d), repeat=len(keep)):
        for kc in itertools.product(range(d), repeat=len(keep)):
            total = 0
            for dr in itertools.product(range(d), repeat=len(drop)):
                r = [0] * n
                c = [0] * n
                for p, v in zip(keep, kr):
                    r[p - 1] = v
                for p, v in zip(keep, kc):
                    c[p - 1] = v
                for p, v in zip(drop, dr):
                    r[p - 1] = c[p - 1] = v
                ri = int(np.ravel_multi_index(r, (d,) * n))
                ci = int(np.ravel_multi_index(c, (d,) * n))
                total += rho[ri, ci]
            out[np.ravel_multi_index(kr, (d,) * len(keep)) if keep else 0,
                np.ravel_multi_index(kc, (d,) * len(keep)) if keep else 0] = total
    return out


def ky_fan_svd(m, k):
    return float(np.sort(np.linalg.svd(m, compute_uv=False))[::-1][:k].sum())


def ghz_density(n, d=2):
    v = np.zeros(d**n, dtype=complex)
    for j in range(d):
        v[sum(j * d**p for p in range(n))] = 1 / np.sqrt(d)
    return np.outer(v, v.conj())
