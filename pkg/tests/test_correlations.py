import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gmetensor import numerics, states as S
from gmetensor.correlations import (
    all_subsets, correlation_tensor, cut_matrix, frobenius, full_tensor, ky_fan, ky_fan_all,
    matricize, product_tensor, purity_decomposition,
)
from gmetensor.criteria import body_bound
from gmetensor.errors import BadSplit, EmptySubset, InvalidParty, KOutOfRange

from bruteforce import ghz_density, ky_fan_svd, tensor_bruteforce, unfold_bruteforce

GHZ4_NONZEROS = {
    "zzzz": 1, "xxxx": 1, "yyyy": 1,
    "xxyy": -1, "xyxy": -1, "xyyx": -1, "yxxy": -1, "yxyx": -1, "yyxx": -1,
}  # brute-force Pauli enumeration over 81 strings


def _label(idx):
    return "".join("xyz"[i] for i in idx)


def test_maximally_mixed_tensor_is_zero():
    mm = S.maximally_mixed(S.PartyStructure(3, 3))
    for sub in all_subsets(3):
        assert np.max(np.abs(correlation_tensor(mm, sub).entries)) < 1e-15


def test_single_qubit_bloch_vector():
    t = correlation_tensor(S.basis_product([0, 0], 2), [1])
    assert np.allclose(t.entries, [0, 0, 1])


def test_ghz4_full_tensor():
    t = full_tensor(S.ghz(4, 2)).entries
    nz = {_label(i): t[i] for i in zip(*np.nonzero(np.abs(t) > 1e-12))}
    assert set(nz) == set(GHZ4_NONZEROS)
    for key, val in GHZ4_NONZEROS.items():
        assert abs(nz[key] - val) < 1e-12
    assert abs(np.sum(t**2) - 9) < 1e-12


@pytest.mark.parametrize("subset", [[1], [2, 4], [1, 3, 4], [1, 2, 3, 4]])
def test_matches_bruteforce_qubits(subset, rng):
    rho = S.pure_to_density(S.random_pure(S.PartyStructure(4, 2), rng))
    ours = correlation_tensor(rho, subset).entries
    assert np.max(np.abs(ours - tensor_bruteforce(rho.mat, 4, 2, subset))) < 1e-12


@pytest.mark.parametrize("subset", [[2], [1, 3], [1, 2, 3]])
def test_matches_bruteforce_qutrits(subset, rng):
    psi = S.random_pure(S.PartyStructure(3, 3), rng)
    rho = S.mix_with_white_noise(psi, 0.7)
    ours = correlation_tensor(rho, subset).entries
    assert np.max(np.abs(ours - tensor_bruteforce(rho.mat, 3, 3, subset))) < 1e-12


def test_subset_errors():
    g = S.ghz(3)
    with pytest.raises(EmptySubset):
        correlation_tensor(g, [])
    with pytest.raises(InvalidParty):
        correlation_tensor(g, [4])


def test_matricize_index_map():
    t = full_tensor(S.random_pure(S.PartyStructure(4, 2), np.random.default_rng(5)))
    m = matricize(t, (1, 2), (3, 4))
    # 1-based tensor index (2,3,1,2) -> row 3*(2-1)+3 = 6, col 3*(1-1)+2 = 2
    assert m.mat[6 - 1, 2 - 1] == t.entries[1, 2, 0, 1]


SPLITS = [((1,), (2, 3, 4)), ((1, 2), (3, 4)), ((1, 2, 3), (4,)), ((3,), (1, 2, 4)),
          ((2, 4), (1, 3)), ((4, 1), (3, 2)), ((2, 3, 4), (1,))]


@pytest.mark.parametrize("rows,cols", SPLITS)
def test_matricize_matches_explicit_formula(rows, cols, rng):
    t = full_tensor(S.random_pure(S.PartyStructure(4, 2), rng))
    m = matricize(t, rows, cols)
    ref = unfold_bruteforce(t.entries, t.subset, rows, cols)
    assert np.array_equal(m.mat, ref)
    assert frobenius(m) == pytest.approx(frobenius(t), abs=1e-12)


def test_underlined_three_body_variants(rng):
    t3 = correlation_tensor(S.random_pure(S.PartyStructure(4, 2), rng), [1, 2, 4])
    e = t3.entries
    mid_row = matricize(t3, (2,), (1, 4)).mat  # row i2, col (i1, i4)
    for i1, i2, i4 in itertools.product(range(3), repeat=3):
        assert mid_row[i2, 3 * i1 + i4] == e[i1, i2, i4]
    outer_rows = matricize(t3, (1, 4), (2,)).mat
    for i1, i2, i4 in itertools.product(range(3), repeat=3):
        assert outer_rows[3 * i1 + i4, i2] == e[i1, i2, i4]


def test_bad_split():
    t = full_tensor(S.ghz(4))
    with pytest.raises(BadSplit):
        matricize(t, (1,), (2, 3))
    with pytest.raises(BadSplit):
        matricize(t, (), (1, 2, 3, 4))
    with pytest.raises(BadSplit):
        matricize(t, (1, 1), (2, 3, 4))


def test_rank_one_product_tensor():
    r = np.random.default_rng(1)
    t = S.PartyStructure(4, 2)
    psi = S.random_product(t, r)
    ft = full_tensor(psi)
    assert np.allclose(ft.entries, product_tensor(
        [correlation_tensor(psi, [p]).entries for p in (1, 2, 3, 4)]), atol=1e-12)
    for rows, cols in SPLITS:
        s = matricize(ft, rows, cols).singular_values()
        assert np.sum(s > 1e-10) == 1


def test_frobenius_examples():
    assert frobenius(np.zeros((3, 3))) == 0
    assert frobenius(full_tensor(S.ghz(4))) == pytest.approx(3, abs=1e-12)
    assert frobenius(np.eye(3)) == pytest.approx(np.sqrt(3))


def test_ky_fan_examples():
    m = np.diag([3.0, 2.0, 1.0])
    assert ky_fan(m, 2) == pytest.approx(5)
    r = np.random.default_rng(0).normal(size=(4, 6))
    assert ky_fan(r, 1) == pytest.approx(np.linalg.norm(r, 2))
    with pytest.raises(KOutOfRange):
        ky_fan(m, 4)
    with pytest.raises(KOutOfRange):
        ky_fan(m, 0)


def test_ghz4_one_vs_rest_ky_fan():
    ref = unfold_bruteforce(tensor_bruteforce(ghz_density(4), 4, 2, [1, 2, 3, 4]),
                            [1, 2, 3, 4], [1], [2, 3, 4])
    m = cut_matrix(full_tensor(S.ghz(4)), [1])
    assert np.allclose(m.singular_values(), [2, 2, 1], atol=1e-12)
    for k, val in ((1, 2), (2, 4), (3, 5)):
        assert ky_fan(m, k) == pytest.approx(val, abs=1e-12)
        assert ky_fan_svd(ref, k) == pytest.approx(val, abs=1e-12)


def test_purity_decomposition_ghz4():
    dec = purity_decomposition(S.ghz(4))
    body = dec.by_body()
    assert [round(body[m], 12) for m in (1, 2, 3, 4)] == [0, 6, 0, 9]
    assert abs(dec.total - 1) < 1e-12
    # the six pairwise zz correlations
    for pair in itertools.combinations(range(1, 5), 2):
        assert dec.squared_norms[pair] == pytest.approx(1)


def test_purity_decomposition_mixed():
    s = S.PartyStructure(3, 2)
    assert purity_decomposition(S.maximally_mixed(s)).total == pytest.approx(1 / 8, abs=1e-15)


@given(st.integers(0, 2**32 - 1))
def test_purity_decomposition_pure_qutrits(seed):
    psi = S.random_pure(S.PartyStructure(3, 3), numerics.make_rng(seed))
    assert abs(purity_decomposition(psi).total - 1) < 1e-9


@given(st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_linearity(p, seed):
    r = numerics.make_rng(seed)
    s = S.PartyStructure(3, 2)
    a, b = S.random_pure(s, r), S.random_pure(s, r)
    mix = S.mixture([a, b], [p, 1 - p])
    for sub in all_subsets(3):
        lhs = correlation_tensor(mix, sub).entries
        rhs = p * correlation_tensor(a, sub).entries + (1 - p) * correlation_tensor(b, sub).entries
        assert np.max(np.abs(lhs - rhs)) < 1e-10


@given(st.sampled_from([(3, 2), (4, 2), (2, 3), (3, 3)]), st.integers(0, 2**32 - 1))
def test_lu_covariance_of_singular_values(nd, seed):
    n, d = nd
    r = numerics.make_rng(seed)
    psi = S.random_pure(S.PartyStructure(n, d), r)
    rot = S.apply_local_unitaries(psi, [numerics.haar_unitary(d, r) for _ in range(n)])
    t0, t1 = full_tensor(psi), full_tensor(rot)
    for a1, _ in S.bipartitions(n):
        s0 = cut_matrix(t0, a1).singular_values()
        s1 = cut_matrix(t1, a1).singular_values()
        assert np.max(np.abs(s0 - s1)) < 1e-9


@given(st.sampled_from([(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)]), st.integers(0, 2**32 - 1))
def test_body_bounds_hold(nd, seed):
    n, d = nd
    r = numerics.make_rng(seed)
    psi = S.random_pure(S.PartyStructure(n, d), r)
    rho = S.mix_with_white_noise(psi, float(r.uniform()))
    for sub in all_subsets(n):
        assert correlation_tensor(rho, sub).frobenius() <= body_bound(len(sub), d) + 1e-9


def test_one_body_bound_equality_iff_pure_reduced(rng):
    d = 3
    limit = body_bound(1, d)
    prod = S.random_product(S.PartyStructure(3, d), rng)
    assert correlation_tensor(prod, [2]).frobenius() == pytest.approx(limit, abs=1e-12)
    ent = S.random_pure(S.PartyStructure(3, d), rng)
    assert correlation_tensor(ent, [2]).frobenius() < limit - 1e-6


@given(st.integers(0, 2**32 - 1))
def test_ky_fan_monotone_and_sqrt_k_bound(seed):
    r = numerics.make_rng(seed)
    psi = S.random_pure(S.PartyStructure(4, 2), r)
    m = cut_matrix(full_tensor(psi), [1, 3])
    norms = ky_fan_all(m)
    fro = frobenius(m)
    assert np.all(np.diff(norms) >= -1e-12)
    for k in range(1, len(norms) + 1):
        assert norms[k - 1] <= np.sqrt(k) * fro + 1e-9
