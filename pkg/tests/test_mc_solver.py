from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bvworldline import checks as C
from bvworldline.jet_algebra import Q, TruncationParams, truncate
from bvworldline.mc_solver import (
    DegreeBounds,
    PsiCoordinates,
    SparseSolver,
    a_star_membership,
    mc_rhs,
    solve_linear,
    to_psi_form,
    verify_curved_mc,
    verify_solution,
)
from bvworldline.models import particle_model, superparticle_model
from bvworldline.simplicial_tw import TWCochain, TWContext, g0_cochain, tw_total_diff


def rank_oracle(rows):
    """Plain Gauss-Jordan over Fractions."""
    A = [[Fraction(x) for x in r] for r in rows]
    rank, ncol = 0, len(A[0]) if A else 0
    for j in range(ncol):
        piv = next((i for i in range(rank, len(A)) if A[i][j]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(len(A)):
            if i != rank and A[i][j]:
                f = A[i][j] / A[rank][j]
                A[i] = [a - f * b for a, b in zip(A[i], A[rank])]
        rank += 1
    return rank


@given(st.integers(0, 10**9))
def test_sparse_solver_matches_gauss(seed):
    rng = random.Random(seed)
    nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
    cols = [[rng.choice([0, 0, 1, -1, 2, Fraction(1, 3)]) for _ in range(nrows)] for _ in range(ncols)]
    rhs = [rng.choice([0, 1, -2]) for _ in range(nrows)]
    s = SparseSolver()
    for j, c in enumerate(cols):
        s.add(j, {("r", i): v for i, v in enumerate(c) if v})
    # rows of the transposed matrix = columns
    assert s.rank == rank_oracle(cols)
    z = s.solve({("r", i): v for i, v in enumerate(rhs) if v})
    solvable = rank_oracle(cols + [rhs]) == rank_oracle(cols)
    assert (z is not None) == solvable
    if z is not None:
        for i in range(nrows):
            assert sum(Q(z.get(j, 0)) * Q(cols[j][i]) for j in range(ncols)) == rhs[i]


def test_degree_bounds_validation():
    with pytest.raises(ValueError):
        DegreeBounds(K=0)
    with pytest.raises(ValueError):
        DegreeBounds(laurent_min=1)
    assert DegreeBounds().as_dict()["K"] == 4


@pytest.fixture(scope="module")
def ctx():
    return TWContext(superparticle_model(TruncationParams(K=3, N=5, J=2)))


def test_psi_coordinates_roundtrip(ctx):
    sp = ctx.sp
    pc = PsiCoordinates(sp)
    for f in [sp.theta_plus(1).comps[3], sp.theta(0, 1).comps[5], sp.M(0, 1), sp.D(full=False)]:
        g = pc.to_psi(f)
        assert truncate(pc.expand(g), sp.K) == truncate(f, sp.K)


def test_psi_coordinates_commute_with_d(ctx):
    sp = ctx.sp
    pc = PsiCoordinates(sp)
    f = sp.theta_plus(0).comps[2] * sp.p(1)
    assert truncate(pc.to_psi(f.d()), sp.K) == truncate(pc.to_psi(pc.to_psi(f).d()), sp.K)


def test_a_star_membership(ctx):
    sp = ctx.sp
    assert a_star_membership(sp, sp.p(0) * sp.xp(1))
    assert a_star_membership(sp, sp.psi(-2).comps[0] * sp.ep())
    assert not a_star_membership(sp, sp.x(0))
    assert not a_star_membership(sp, sp.e() * sp.cp())


def test_particle_curved_mc_orders():
    pm = particle_model()
    res = verify_curved_mc({0: pm.S, 1: pm.G_density}, pm.D, range(4))
    assert [r.ok for r in res] == [True] * 4
    # without the curvature term order 1 fails
    res = verify_curved_mc({0: pm.S, 1: pm.G_density}, pm.D.scale(0), [1])
    assert not res[0].ok


def test_mc_rhs_errors(ctx):
    with pytest.raises(ValueError):
        mc_rhs(0, {})
    with pytest.raises(ValueError):
        mc_rhs(2, {0: None})


def test_zero_target(ctx):
    r = C.run_check("mc.zero_target", C.CheckConfig(K=3, N=5))
    assert r.status == "pass"


def test_solves_an_exact_target(ctx):
    # target = −(δ+𝗌)X₀ for a known X₀ in 𝔸⋆; the solver must find some X with the same image
    sp = ctx.sp
    X0 = TWCochain(ctx, {(0,): ctx.normalize((sp.p(0) * sp.xp(1) * sp.xp(2)).scale(Q(3, 2)), (0,))})
    tgt = tw_total_diff(X0).scale(-1)
    res = solve_linear(ctx, tgt, DegreeBounds(K=3, rounds=1), constraint="A_star")
    assert res.status == "solved"
    assert verify_solution(ctx, res.X, res.Y, {a: truncate(v, 3) for a, v in tgt.values.items()}, 3)


def test_recovers_g0_on_a_chart(ctx):
    # (δ+𝗌)X = −𝖣 − (δ+𝗌)(x⁺p⁺ + ec⁺) has the solution 𝖦₀ − (x⁺p⁺ + ec⁺) inside 𝔸⋆
    sp = ctx.sp
    a = (0,)
    seed = TWCochain(ctx, {a: ctx.normalize(sp.G(), a)})
    tgt = TWCochain(ctx, {a: ctx.normalize(sp.D(), a) + tw_total_diff(seed).values[a]})
    res = solve_linear(ctx, tgt, DegreeBounds(K=3, rounds=1), constraint="A_star")
    assert res.status == "solved" and res.residual_ok
    g0 = g0_cochain(ctx, 0, tuples=[a])
    diff = truncate(g0.values[a] - seed.values[a] - res.X.values[a], 3)
    assert not diff.terms


def test_infeasible_is_reported_not_raised(ctx):
    sp = ctx.sp
    # x is outside 𝔸⋆, so an 𝔸⋆-constrained solve of a generic target has to give up
    tgt = TWCochain(ctx, {(0,): sp.x(0) * sp.c()})
    res = solve_linear(ctx, tgt, DegreeBounds(K=3, rounds=1), constraint="A_star")
    assert res.status == "infeasible_at_bounds" and res.reason


def test_psi_form_is_idempotent(ctx):
    sp = ctx.sp
    f = sp.theta_plus(2).comps[0] * sp.theta(0, 1).comps[1]
    g = to_psi_form(sp, f)
    assert to_psi_form(sp, g) == g


def test_recovers_g0_on_an_edge_and_its_vertices():
    r = C.run_check("mc.recover_g0", C.CheckConfig())
    assert r.status == "pass", r.residual
    assert r.params["solver"]["tuples"] == 3
