from __future__ import annotations

import pytest

from bvworldline.chevalley import CEComplex, d_squared_failures, eps_coefficient, jacobi_failures, structure_constants
from bvworldline.jet_algebra import TruncationParams
from bvworldline.models import LORENTZ_PAIRS, lorentz_index, superparticle_model


@pytest.fixture(scope="module")
def sp():
    return superparticle_model(TruncationParams(K=3, N=5, J=2))


def test_structure_constants_frozen(sp):
    f = structure_constants(sp.eta)
    a01, _ = lorentz_index(0, 1)
    a12, _ = lorentz_index(1, 2)
    a02, _ = lorentz_index(0, 2)
    # [ρ^{01}, ρ^{12}] = η^{11}ρ^{02}
    assert f[(a01, a12)] == {a02: sp.eta[1]}
    # commuting pairs have no entry
    assert (lorentz_index(0, 1)[0], lorentz_index(2, 3)[0]) not in f
    # antisymmetry
    for (a, b), row in f.items():
        assert f[(b, a)] == {c: -v for c, v in row.items()}


def test_jacobi_and_d_squared(sp):
    assert jacobi_failures(sp.eta) == []
    assert d_squared_failures(CEComplex(sp.model, sp.eta)) == []


def test_ce_degree(sp):
    ce = CEComplex(sp.model, sp.eta)
    for e in ce.generators()[:5]:
        de = ce.d(e)
        assert all(sum(1 for c in m if c >> 13 == sp.model.index["eps"]) == 2 for m in de.terms)


def test_eps_coefficient(sp):
    m = sp.model
    X = sp.x(0)
    f = m.gen("eps", 1) * m.gen("eps", 4) * X + m.gen("eps", 2) * X
    assert eps_coefficient(f, 1, 4) == X
    assert eps_coefficient(f, 1, 2).is_zero()
    assert len(LORENTZ_PAIRS) == 45
