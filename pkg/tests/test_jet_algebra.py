from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bvworldline.jet_algebra import (
    JetPolynomial,
    ModelError,
    Q,
    TruncationParams,
    in_filtration,
    is_total_derivative,
    truncate,
    variational_derivative,
)
from bvworldline.sampling import generator_pool, random_polynomial


def naive_sort_sign(model, codes):
    """Bubble sort with Koszul signs: an independent oracle for monomial products."""
    codes = list(codes)
    sign = 1
    for i in range(len(codes)):
        for j in range(len(codes) - 1 - i):
            a, b = codes[j], codes[j + 1]
            if a > b:
                codes[j], codes[j + 1] = b, a
                if model.parity_of(a) and model.parity_of(b):
                    sign = -sign
    for a, b in zip(codes, codes[1:]):
        if a == b and model.parity_of(a):
            return 0, ()
    return sign, tuple(codes)


def polys(toy, seed, **kw):
    rng = random.Random(seed)
    pool = generator_pool(toy, max_jet=2)
    return random_polynomial(toy, rng, pool, **kw)


def test_generator_gradings(toy):
    c = toy.code("c")
    assert toy.parity_of(c) == 1 and toy.ghost_of(c) == 1
    assert toy.ghost_of(toy.code("c+")) == -2
    assert toy.is_constant(toy.code("dt", 1))
    assert toy.partner_code(toy.code("u", 1)) == toy.code("u+", 1)


def test_odd_square_and_antisymmetry(toy):
    c, up = toy.gen("c"), toy.gen("u+", 0)
    assert (c * c).is_zero()
    assert c * up == -(up * c)


def test_laurent_inverse_cancels(toy):
    u = toy.code("u", 0)
    s, m = toy.mono_mul((u,), (u | 1,))
    assert (s, m) == (1, ())


def test_d_is_annihilated_on_constants(toy):
    assert toy.gen("dt", 0).d().is_zero()


def test_d_of_inverse(toy):
    # ∂(u⁻¹) = −u⁻² ∂u
    u = toy.code("u", 0)
    inv = JetPolynomial(toy, {(u | 1,): Q(1)})
    expect = JetPolynomial(toy, {(u | 1, u | 1, toy.code("u", 0, 1)): Q(-1)})
    assert inv.d() == expect


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=5))
def test_mono_mul_matches_bubble_sort(toy, draws):
    pool = generator_pool(toy, max_jet=2, include_constants=True)
    codes = [pool[d % len(pool)] for d in draws]
    s, m = 1, ()
    for c in codes:
        s2, m = toy.mono_mul(m, (c,))
        s *= s2
        if not s:
            break
    assert (s, m if s else ()) == naive_sort_sign(toy, codes)


@given(st.integers(0, 10**9))
def test_ring_axioms(toy, seed):
    f, g, h = (polys(toy, seed + i, max_degree=3, max_terms=3) for i in range(3))
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    # graded commutativity on homogeneous parts
    for pf, fp in f.parity_parts().items():
        for pg, gp in g.parity_parts().items():
            assert fp * gp == (gp * fp).scale(-1 if pf * pg else 1)


@given(st.integers(0, 10**9))
def test_leibniz(toy, seed):
    f, g = polys(toy, seed, max_degree=3), polys(toy, seed + 7, max_degree=3)
    assert (f * g).d() == f.d() * g + f * g.d()


@given(st.integers(0, 10**9))
def test_total_derivatives_are_recognised(toy, seed):
    f = polys(toy, seed, max_degree=3)
    r = is_total_derivative(f.d())
    assert r.exact
    assert r.witness.d() == f.d()


def test_non_exact_density(toy):
    u0, u1 = toy.gen("u", 0), toy.gen("u", 1)
    # u¹ ∂u⁰ has nonzero Euler-Lagrange derivative
    assert not is_total_derivative(u1 * u0.d()).exact
    assert variational_derivative(u1 * u0.d(), "u", 0).terms


def test_euler_lagrange_kills_total_derivatives(toy):
    f = polys(toy, 3, max_degree=3)
    for comp in range(2):
        assert variational_derivative(f.d(), "u", comp).is_zero()


def test_truncation_weights(toy):
    up, cp = toy.gen("u+", 0), toy.gen("c+")
    assert up.weight() == 1 and cp.weight() == 2
    f = up + cp * cp + toy.gen("u", 0)
    assert truncate(f, 2) == up + toy.gen("u", 0)
    assert in_filtration(cp * cp, 4) and not in_filtration(cp, 4)


def test_truncation_params_validated():
    with pytest.raises(ModelError):
        TruncationParams(K=0)
