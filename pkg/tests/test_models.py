"""Particle and superparticle identities at small cutoffs (the full cutoffs run in the acceptance suite)."""

from __future__ import annotations

import pytest

from bvworldline import checks as C
from bvworldline.brackets import bv_antibracket
from bvworldline.jet_algebra import ModelError, Q, TowerOverflow, TruncationParams, is_total_derivative
from bvworldline.models import LORENTZ_PAIRS, lorentz_index, particle_model, superparticle_model


@pytest.fixture(scope="module")
def pm():
    return particle_model()


@pytest.fixture(scope="module")
def sp():
    return superparticle_model(TruncationParams(K=3, N=5, J=2))


def small(**kw):
    return C.CheckConfig(K=3, N=5, **kw)


def test_particle_explicit_images(pm):
    m, eta = pm.model, pm.eta
    # s e = −∂c, s x^μ = −η^{μμ} c p_μ, s c = 0
    assert pm.s.image(m.code("e")) == -pm.c(1)
    assert pm.s.image(m.code("x", 4)) == -(pm.c() * pm.p(4)).scale(eta[4])
    assert pm.s.image(m.code("c")).is_zero()


@pytest.mark.parametrize("cid", ["particle.hamiltonian", "particle.s_squared", "particle.master",
                                 "particle.covariance", "particle.gauge", "particle.curved_mc"])
def test_particle_checks(cid):
    assert C.run_check(cid, C.CheckConfig()).status == "pass"


def test_particle_G_is_not_closed(pm):
    # (S,G) is nonzero: it is −D, which is not a total derivative
    r = bv_antibracket(pm.S, pm.G_density).density
    assert not is_total_derivative(r).exact
    assert is_total_derivative(r + pm.D).exact


def test_tower_depth_guard():
    with pytest.raises(ModelError):
        superparticle_model(TruncationParams(K=4, N=5, J=2))


@pytest.mark.parametrize("cid", ["super.s_squared", "super.psi_recursion", "super.sQ", "super.q_psi",
                                 "super.D_is_derivative"])
def test_superparticle_small_cutoff(cid):
    assert C.run_check(cid, small()).status == "pass"


def test_sQ_literal_sign_fails_with_witness():
    r = C.run_check("super.sQ_literal", small())
    assert r.status == "fail"
    # the mismatch is exactly the e⁺θ₁ coefficient: 4 ∂(e⁺θ₁)
    assert "e+" in r.residual and "theta1" in r.residual


def test_psi_leading_terms(sp):
    # Ψ₀ starts with ∂θ₀ and Ψ₋₁ with θ⁺₀
    m = sp.model
    psi0 = sp.psi(0).comps[0]
    assert any(m.code("theta0", 0, 1) in mono for mono in psi0.terms)


def test_lorentz_current_antisymmetry(sp):
    assert sp.M(3, 1) == -sp.M(1, 3)
    assert sp.M(2, 2).is_zero()
    assert [lorentz_index(a, b)[0] for a, b in LORENTZ_PAIRS] == list(range(45))
    assert lorentz_index(5, 2)[1] == -1


def test_check_in_tower_guards_shadow(sp):
    # θ beyond N is a shadow generator and must never survive below the cutoff
    shadow = sp.theta(sp.N + 1, shadow=True).comps[0]
    with pytest.raises(TowerOverflow):
        sp.check_in_tower(shadow)


def test_dd_identity_half_coefficient(sp):
    lhs = sp.D(full=False) + sp.s(sp.G())
    B = sp.B((), shift=-1)
    assert not sp.check_in_tower(lhs - B.scale(Q(1, 2))).terms
    assert sp.check_in_tower(lhs + B.scale(Q(1, 2))).terms
