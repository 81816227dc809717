from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bvworldline import checks as C
from bvworldline.jet_algebra import Q, TruncationParams
from bvworldline.models import superparticle_model
from bvworldline.sampling import random_polynomial
from bvworldline.simplicial_tw import (
    CochainError,
    SimplexForm,
    TWCochain,
    TWContext,
    chart_tuples,
    cocycle_c,
    compose,
    cosimplicial_pullback,
    d_total_from_g0,
    g0_cochain,
    ggg0_residual,
    monotone_maps,
    omega_model,
    tw_bracket,
    tw_total_diff,
)


def random_form(k, seed):
    m = omega_model(k)
    rng = random.Random(seed)
    pool = [m.code("t", i) for i in range(k + 1)] + [m.code("dt", i) for i in range(k + 1)]
    return SimplexForm.make(k, random_polynomial(m, rng, pool, max_degree=3, max_terms=4))


@pytest.fixture(scope="module")
def ctx():
    return TWContext(superparticle_model(TruncationParams(K=3, N=5, J=2), charts=tuple(range(4))))


def test_monotone_map_counts():
    # |Hom([k],[l])| = C(k+l+1, k+1)
    from math import comb

    for k in range(4):
        for l in range(4):
            assert len(monotone_maps(k, l)) == comb(k + l + 1, k + 1)


def test_normal_form_eliminates_first_vertex():
    f = SimplexForm.t(2, 0)
    assert f == SimplexForm.const(2, 1) - SimplexForm.t(2, 1) - SimplexForm.t(2, 2)
    # Σ dt_i = 0 on the simplex
    assert (SimplexForm.dt(2, 0) + SimplexForm.dt(2, 1) + SimplexForm.dt(2, 2)).is_zero()


@given(st.integers(0, 3), st.integers(0, 10**9))
def test_delta_squared(k, seed):
    a = random_form(k, seed)
    assert a.delta().delta().is_zero()


@given(st.integers(0, 3), st.integers(0, 10**9))
def test_delta_leibniz(k, seed):
    a, b = random_form(k, seed), random_form(k, seed + 1)
    sign = 1
    parts = a.poly.parity_parts()
    lhs = (a * b).delta()
    rhs = SimplexForm.make(k, a.poly.model.zero())
    for p, ap in parts.items():
        A = SimplexForm.make(k, ap)
        sign = -1 if p else 1
        rhs = rhs + A.delta() * b + (A * b.delta()).scale(sign)
    assert lhs == rhs


@given(st.data())
def test_pullback_is_functorial_and_multiplicative(data):
    k, l, n = (data.draw(st.integers(0, 3)) for _ in range(3))
    f = data.draw(st.sampled_from(monotone_maps(k, l)))
    g = data.draw(st.sampled_from(monotone_maps(l, n)))
    a = random_form(n, data.draw(st.integers(0, 10**9)))
    b = random_form(n, data.draw(st.integers(0, 10**9)))
    assert cosimplicial_pullback(compose(g, f), a) == cosimplicial_pullback(f, cosimplicial_pullback(g, a))
    assert cosimplicial_pullback(g, a * b) == cosimplicial_pullback(g, a) * cosimplicial_pullback(g, b)
    assert cosimplicial_pullback(g, a.delta()) == cosimplicial_pullback(g, a).delta()


def test_pullback_rejects_non_monotone():
    with pytest.raises(CochainError):
        cosimplicial_pullback((1, 0), SimplexForm.t(1, 0))


def test_chart_tuples():
    assert chart_tuples(1, range(3)) == [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]
    assert len(chart_tuples(2, range(10))) == 10 + 45 + 120


def test_g0_faces_and_identity(ctx):
    tuples = chart_tuples(2, range(4))
    g0 = g0_cochain(ctx, 2, tuples=tuples)
    assert g0.face_failures(ctx.sp.K) == []
    D = ctx.sp.D(full=False)
    for a in [(2,), (0, 3), (1, 2, 3)]:
        assert not ctx.sp.check_in_tower(d_total_from_g0(ctx, a) + ctx.normalize(D, a)).terms


def test_g0_literal_tower_sign_fails(ctx):
    D = ctx.sp.D(full=False)
    assert ctx.sp.check_in_tower(d_total_from_g0(ctx, (0, 1), sign=1) + ctx.normalize(D, (0, 1))).terms


def test_ggg0_corrected_and_literal(ctx):
    for a in [(1,), (0, 2), (0, 1, 3)]:
        for k in range(len(a)):
            assert not ggg0_residual(ctx, a, k, literal=False).terms
    assert ggg0_residual(ctx, (1,), 0, literal=True).terms


def test_cocycle_c_closed_on_charts(ctx):
    tuples = [(0,), (1,), (0, 1)]
    c = cocycle_c(ctx, tuples)
    dc = tw_total_diff(c)
    assert not ctx.sp.check_in_tower(dc.values[(0,)]).terms
    # on the edge only the form-degree-0 part vanishes
    assert not C._form_degree0(ctx.sp.check_in_tower(dc.values[(0, 1)])).terms


def test_tw_bracket_antisymmetry(ctx):
    sp = ctx.sp
    tuples = [(0,), (0, 1)]
    a = TWCochain(ctx, {t: ctx.normalize(sp.G(), t) for t in tuples})
    b = TWCochain(ctx, {t: ctx.normalize(sp.M(0, 1), t) for t in tuples})
    ab, ba = tw_bracket(a, b), tw_bracket(b, a)
    # both G and M are even with ghost −1 and 0, so (a,b) + (b,a) = 0 needs (|a|+1)(|b|+1) odd
    for t in tuples:
        s = -1 if ((a.values[t].parity() + 1) * (b.values[t].parity() + 1)) % 2 else 1
        assert (ab.values[t] + ba.values[t].scale(s)).is_zero()


def test_cochain_arithmetic(ctx):
    tuples = [(0,), (1,)]
    a = TWCochain(ctx, {t: ctx.sp.x(0) for t in tuples})
    assert (a - a).is_zero()
    assert (a.scale(Q(2)) - a - a).is_zero()
