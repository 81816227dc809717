from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bvworldline import clifford as cl
from bvworldline.checks import _det_exact


@pytest.fixture(scope="module")
def g():
    return cl.gammas()


def test_shapes_and_eta(g):
    assert len(g) == 10 and all(x.shape == (32, 32) for x in g)
    assert cl.eta() == (-1,) + (1,) * 9


def test_clifford_relation(g):
    I = np.eye(32, dtype=np.int64)
    for mu in range(10):
        for nu in range(10):
            expect = 2 * cl.eta()[mu] * I if mu == nu else 0 * I
            assert np.array_equal(g[mu] @ g[nu] + g[nu] @ g[mu], expect)


def test_chirality_blocks(g):
    G = np.eye(32, dtype=np.int64)
    for x in g:
        G = G @ x
    # the volume element is diagonal and splits 16 + 16
    assert np.array_equal(G, np.diag(np.diag(G)))
    assert set(np.diag(G)[:16]) == {-1} and set(np.diag(G)[16:]) == {1}
    # each γ^μ swaps the two chiralities
    for x in g:
        assert not x[:16, :16].any() and not x[16:, 16:].any()


def test_antisymmetrized_products(g):
    for mu, nu in combinations(range(10), 2):
        assert np.array_equal(cl.gamma_antisym((mu, nu)), (g[mu] @ g[nu] - g[nu] @ g[mu]) // 2)
    for a, b, c in [(0, 1, 2), (3, 5, 9)]:
        assert np.array_equal(cl.gamma_antisym((a, b, c)), g[a] @ g[b] @ g[c])


def test_pairing_matrix_frozen():
    T = cl.build_gamma().T
    assert np.array_equal(T, T.T)
    # frozen: 𝖳 is a signed permutation with determinant 1
    assert _det_exact(T) == 1
    assert np.array_equal(np.abs(T).sum(axis=0), np.ones(32, dtype=np.int64))


def test_bareiss_against_float():
    rng = np.random.default_rng(0)
    for _ in range(20):
        M = rng.integers(-3, 4, size=(5, 5))
        assert _det_exact(M) == round(np.linalg.det(M))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_commute_lemma(k):
    assert cl.commute_lemma_failures(k) == []


@given(st.integers(-50, 50))
def test_binom2(m):
    assert cl.binom2(m) == m * (m - 1) // 2
    assert cl.binom2(m + 1) - cl.binom2(m) == m
