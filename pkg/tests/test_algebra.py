import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causalnets import algebra as alg
from causalnets.suites import factor_library, random_block_algebra, random_commuting_triple

from oracles import kron_commutant_dim, span_dim, word_closure

X, Y, Z, I2 = alg.PAULI_X, alg.PAULI_Y, alg.PAULI_Z, alg.PAULI_I


def rng(seed=0):
    return np.random.default_rng(seed)


# -- closure --------------------------------------------------------------------


def test_closure_of_single_pauli():
    # span{Id, X} (x) Id: X is self-adjoint and squares to Id, so the span is 2-dimensional
    a = alg.algebra_closure([np.kron(X, I2)])
    assert a.dim == 2 == word_closure([np.kron(X, I2)]).shape[0]
    assert a.contains(np.eye(4)) and a.contains(np.kron(X, I2))
    assert not a.contains(np.kron(Z, I2))


def test_closure_trivial_cases():
    assert alg.algebra_closure([], 3).dim == 1
    units = [np.eye(3)[[i]].T @ np.eye(3)[[j]] for i in range(3) for j in range(3)]
    assert alg.algebra_closure(units).is_full


def test_closure_rejects_mismatch():
    with pytest.raises(alg.AlgebraError):
        alg.algebra_closure([np.eye(2), np.eye(3)])
    with pytest.raises(alg.AlgebraError):
        alg.algebra_closure([])


@pytest.mark.parametrize("seed", range(8))
def test_closure_matches_word_oracle(seed):
    r = rng(seed)
    d = int(r.integers(3, 9))
    cut = int(r.integers(1, d))
    block = np.zeros((d, d))
    block[:cut, :cut] = block[cut:, cut:] = 1
    gens = [alg.random_hermitian(d, r) * block, np.kron(alg.random_hermitian(d // 2, r), I2)
            if d % 2 == 0 else alg.random_hermitian(d, r) * block]
    ours = alg.algebra_closure(gens, d)
    assert ours.dim == word_closure(gens).shape[0]
    if not ours.is_full:
        ours.validate()


def test_closure_is_star_algebra():
    r = rng(3)
    gens = [alg.random_hermitian(6, r) * (np.arange(6) < 3)[:, None] * (np.arange(6) < 3)[None, :]]
    a = alg.algebra_closure(gens, 6)
    a.validate()
    for b in a.basis:
        assert a.contains(b.conj().T)


# -- commutant ------------------------------------------------------------------


@pytest.mark.parametrize("method", ["reduced", "dense"])
def test_commutant_of_tensor_factor(method):
    c = alg.commutant(alg.tensor_factor(2, 2, 0), method=method)
    assert c.dim == 4
    assert c.equals(alg.tensor_factor(2, 2, 1))


def test_commutant_trivial_cases():
    assert alg.commutant(alg.MatrixAlgebra.scalars(5)).is_full
    assert alg.commutant(alg.full_algebra(5)).dim == 1


@pytest.mark.parametrize("seed", range(6))
def test_commutant_methods_agree_with_kron_oracle(seed):
    A = random_block_algebra(rng(seed + 10), max_d=10)
    red = alg.commutant(A)
    dense = alg.commutant(A, method="dense")
    assert red.equals(dense)
    assert red.dim == kron_commutant_dim(list(A.basis))


def test_commutant_antitone():
    r = rng(1)
    for _ in range(10):
        b = random_block_algebra(r, max_d=8)
        a = alg.algebra_closure([b.random_element(r)], b.d)
        assert a <= b
        assert alg.commutant(b) <= alg.commutant(a)


def test_triple_commutant():
    r = rng(2)
    for _ in range(10):
        a = random_block_algebra(r, max_d=12)
        c1 = alg.commutant(a)
        assert alg.commutant(alg.commutant(c1)).equals(c1)


# -- bicommutant, join, center --------------------------------------------------


def test_bicommutant_examples():
    xa = alg.algebra_closure([np.kron(X, I2)])
    assert alg.bicommutant(xa).equals(xa)
    assert alg.bicommutant(alg.MatrixAlgebra.scalars(4)).dim == 1
    t = alg.tensor_factor(2, 2, 0)
    assert alg.bicommutant(t).equals(t)


def test_bicommutant_random():
    r = rng(4)
    for _ in range(20):
        a = random_block_algebra(r)
        assert alg.bicommutant(a).equals(a)


def test_join_examples():
    a, b = alg.tensor_factor(2, 2, 0), alg.tensor_factor(2, 2, 1)
    assert alg.join(a, b).is_full
    assert alg.join(a, alg.MatrixAlgebra.scalars(4)).equals(a)
    assert alg.join(a, a).equals(a)
    with pytest.raises(alg.AlgebraError):
        alg.join(a, alg.full_algebra(3))


def test_join_equals_bicommutant_of_union():
    a = alg.algebra_closure([np.kron(X, I2)])
    b = alg.algebra_closure([np.kron(Z, Z)])
    j = alg.join(a, b)
    assert j.dim == word_closure([np.kron(X, I2), np.kron(Z, Z)]).shape[0] == 4
    union_commutant = alg.commutant(alg.algebra_closure(list(a.basis) + list(b.basis), 4))
    assert j.equals(alg.commutant(union_commutant))


@pytest.mark.parametrize("name, a, want", factor_library())
def test_factor_library(name, a, want):
    assert alg.is_factor(a) is want
    # factor iff A and A' generate everything
    assert alg.join(a, alg.commutant(a)).is_full is want


def test_center_examples():
    assert alg.is_factor(alg.tensor_factor(2, 2, 0))
    diag = alg.diagonal_algebra(2)
    assert not alg.is_factor(diag)
    assert alg.center(diag).equals(diag)
    assert alg.is_factor(alg.MatrixAlgebra.scalars(3))


def test_center_of_direct_sum():
    # M_2 (+) M_1 (x) Id_2 inside M_4: center is spanned by the two block identities
    p = np.diag([1, 1, 0, 0]).astype(complex)
    gens = [np.pad(X, ((0, 2), (0, 2))), np.pad(Z, ((0, 2), (0, 2))), np.eye(4) - p]
    a = alg.algebra_closure(gens, 4)
    z = alg.center(a)
    assert z.dim == 2 and z.contains(p)


# -- spectral decomposition and Lueders map -------------------------------------


def test_spectral_examples():
    sd = alg.spectral_decompose(Z)
    assert sorted(sd.eigenvalues) == [-1, 1]
    projs = {v: p for v, p in zip(sd.eigenvalues, sd.projectors)}
    assert np.allclose(projs[1], np.diag([1, 0])) and np.allclose(projs[-1], np.diag([0, 1]))
    sd = alg.spectral_decompose(np.eye(3))
    assert len(sd.eigenvalues) == 1 and np.allclose(sd.projectors[0], np.eye(3))
    with pytest.raises(alg.AlgebraError):
        alg.spectral_decompose(np.array([[0, 1], [0, 0]]))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_spectral_reconstruction(d, seed):
    a = alg.random_hermitian(d, rng(seed))
    sd = alg.spectral_decompose(a)
    assert np.max(np.abs(sd.reconstruct() - a)) < 1e-10
    assert np.allclose(sd.projectors.sum(axis=0), np.eye(d), atol=1e-10)
    for i, p in enumerate(sd.projectors):
        assert np.allclose(p @ p, p, atol=1e-10)
        for q in sd.projectors[i + 1:]:
            assert np.max(np.abs(p @ q)) < 1e-10


def test_degenerate_eigenvalues_cluster():
    a = np.diag([1.0, 1.0 + 1e-10, -2.0])
    assert len(alg.spectral_decompose(a).eigenvalues) == 2


def test_luders_examples():
    plus = alg.DensityState.pure([1, 1])
    out = alg.luders_map(Z, plus)
    assert np.allclose(out.rho, np.eye(2) / 2, atol=1e-15)
    diag = alg.DensityState(np.diag([0.3, 0.7]).astype(complex))
    assert np.allclose(alg.luders_map(Z, diag).rho, diag.rho)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_luders_properties(d, seed):
    r = rng(seed)
    a = alg.random_hermitian(d, r)
    rho = alg.DensityState.random(d, r)
    once = alg.luders_map(a, rho)
    assert abs(np.trace(once.rho) - 1) < 1e-12
    assert np.linalg.eigvalsh(once.rho).min() > -1e-12
    assert np.max(np.abs(alg.luders_map(a, once).rho - once.rho)) < 1e-12


# -- no-signaling -----------------------------------------------------------------


def test_no_signaling_examples():
    bell = alg.DensityState.pure(np.array([1, 0, 0, 1]) / np.sqrt(2))
    res = alg.no_signaling_check(np.kron(Z, I2), np.kron(I2, X), bell)
    assert res.commuting and res.gap < 1e-15
    res = alg.no_signaling_check(X, Z, alg.DensityState.pure([1, 0]))
    assert not res.commuting
    assert np.isclose(res.lhs, 0) and np.isclose(res.rhs, 1) and np.isclose(res.gap, 1)
    r = rng(0)
    rho = alg.DensityState.random(3, r)
    assert alg.no_signaling_check(np.eye(3), alg.random_hermitian(3, r), rho).gap < 1e-15


def test_no_signaling_randomized():
    r = rng(11)
    worst = 0.0
    for _ in range(1000):
        a, b, rho = random_commuting_triple(r)
        res = alg.no_signaling_check(a, b, rho)
        assert res.commuting
        worst = max(worst, res.gap)
    assert worst <= 1e-12


# -- states and independence ------------------------------------------------------


def test_density_state_validation():
    with pytest.raises(alg.AlgebraError):
        alg.DensityState(np.diag([0.5, 0.6]))
    with pytest.raises(alg.AlgebraError):
        alg.DensityState(np.diag([1.5, -0.5]))
    with pytest.raises(alg.AlgebraError):
        alg.DensityState(np.array([[0.5, 1], [0, 0.5]]))


def test_independence_examples():
    mixed = alg.product_state(alg.DensityState.maximally_mixed(2), alg.DensityState.maximally_mixed(3))
    assert np.allclose(mixed.rho, np.eye(6) / 6)
    zero, plus = alg.DensityState.pure([1, 0]), alg.DensityState.pure([1, 1])
    prod = alg.product_state(zero, plus)
    assert np.isclose(prod.expect(np.kron(Z, X)), 1)
    assert alg.statistical_independence_check(prod, zero, plus).passed

    bell = alg.DensityState.pure(np.array([1, 0, 0, 1]) / np.sqrt(2))
    half = alg.DensityState.maximally_mixed(2)
    rep = alg.statistical_independence_check(bell, half, half, observables=[(Z, Z)])
    assert rep.marginals_match and not rep.factorizes
    assert np.isclose(rep.max_factorization_error, 1)


def test_independence_rejects_wrong_shape():
    with pytest.raises(alg.AlgebraError):
        alg.statistical_independence_check(alg.DensityState.maximally_mixed(5),
                                           alg.DensityState.maximally_mixed(2),
                                           alg.DensityState.maximally_mixed(2))


def test_tensor_factors_commute():
    r = rng(6)
    for m, n in [(2, 2), (2, 3), (3, 4)]:
        a = alg.tensor_factor(m, n, 0).random_element(r)
        b = alg.tensor_factor(m, n, 1).random_element(r)
        assert np.max(np.abs(alg.commutator(a, b))) < 1e-12


# -- projectors -----------------------------------------------------------------------


def test_relative_dimension_examples():
    m4 = alg.full_algebra(4)
    p1 = np.diag([1, 0, 0, 0]).astype(complex)
    q1 = np.diag([0, 0, 1, 0]).astype(complex)
    p2 = np.diag([1, 1, 0, 0]).astype(complex)
    assert alg.projector_equivalent(p1, q1, m4)
    assert not alg.projector_equivalent(p1, p2, m4)
    assert alg.relative_dimension(p1, m4) == 1 and alg.relative_dimension(p2, m4) == 2
    fac = alg.tensor_factor(2, 2, 0)
    p = np.kron(np.diag([1, 0]), I2).astype(complex)
    assert alg.relative_dimension(p, fac) == Fraction(1)
    assert np.linalg.matrix_rank(p) == 2


def test_relative_dimension_errors():
    with pytest.raises(alg.AlgebraError):
        alg.relative_dimension(np.diag([1, 0.5, 0, 0]), alg.full_algebra(4))
    with pytest.raises(alg.AlgebraError):
        alg.relative_dimension(np.diag([1, 0, 0, 0]), alg.diagonal_algebra(4))


# -- serialization --------------------------------------------------------------------


def test_json_round_trip():
    a = alg.algebra_closure([np.kron(X, I2), np.kron(I2, Z)])
    obj = json.loads(json.dumps(a.to_json()))
    assert alg.MatrixAlgebra.from_json(obj).equals(a)
    m = alg.random_hermitian(3, rng(0))
    enc = alg.matrix_to_json(m)
    assert len(enc["entries"]) == 9 and len(enc["entries"][0]) == 2
    assert np.array_equal(alg.matrix_from_json(enc), m)
    rho = alg.DensityState.random(3, rng(1))
    assert np.array_equal(alg.DensityState.from_json(rho.to_json()).rho, rho.rho)


def test_dimension_cap():
    with pytest.raises(alg.AlgebraError):
        alg.as_matrix(np.eye(65))
    assert alg.as_matrix(np.eye(65), max_dim=128).shape == (65, 65)
    assert span_dim([np.eye(2), X]) == 2
