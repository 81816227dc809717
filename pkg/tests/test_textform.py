from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bvworldline.jet_algebra import Q, TruncationParams
from bvworldline.models import superparticle_model
from bvworldline.sampling import generator_pool, random_polynomial
from bvworldline.textform import ParseError, parse, serialize


@pytest.fixture(scope="module")
def sp():
    return superparticle_model(TruncationParams(K=3, N=5, J=2))


@given(st.integers(0, 10**9))
def test_roundtrip(sp, seed):
    m = sp.model
    rng = random.Random(seed)
    f = random_polynomial(m, rng, generator_pool(m, 2, include_constants=True), max_degree=5, inverses=True)
    text = serialize(f)
    assert parse(m, text) == f
    assert serialize(parse(m, text)) == text


def test_zero_and_scalars(sp):
    m = sp.model
    assert parse(m, serialize(m.zero())) == m.zero()
    one = m.one().scale(Q(-3, 4))
    assert parse(m, serialize(one)) == one


def test_parse_is_model_arithmetic(sp):
    m = sp.model
    f = parse(m, serialize(sp.x(0) * sp.p(3) + sp.c().d()))
    assert f == sp.x(0) * sp.p(3) + sp.c().d()


@pytest.mark.parametrize("bad", ["(+ x_0", "(* nosuchfield)", "(+ 1/0)", "(% x_0)"])
def test_parse_errors(sp, bad):
    with pytest.raises(ParseError):
        parse(sp.model, bad)
