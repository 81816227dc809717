"""Seeded random polynomials for property checks."""

from __future__ import annotations

import random

from .jet_algebra import JetPolynomial, ModelAlgebra, Q


def generator_pool(model: ModelAlgebra, max_jet: int = 2, include_constants: bool = False) -> list[int]:
    """Codes of all non-auxiliary generators up to ``max_jet`` (positive powers only)."""
    out = []
    for f in model.fields:
        if f.aux or (f.constant and not include_constants):
            continue
        jets = (0,) if f.constant else range(max_jet + 1)
        for comp in range(f.components):
            for j in jets:
                out.append(model.code(f.name, comp, j))
    return out


def random_monomial(model: ModelAlgebra, rng: random.Random, pool: list[int], degree: int, inverses: bool = False):
    """A nonzero monomial of the given degree, or None if the draw hit an odd square."""
    m: tuple = ()
    for _ in range(degree):
        c = rng.choice(pool)
        if inverses and not c & 1 and model._inv[c >> 13] and not (c >> 1) & 63 and rng.random() < 0.3:
            c |= 1
        s, m = model.mono_mul(m, (c,))
        if not s:
            return None
    return m


def random_polynomial(
    model: ModelAlgebra,
    rng: random.Random,
    pool: list[int] | None = None,
    max_degree: int = 4,
    max_terms: int = 4,
    parity: int | None = None,
    ghost: int | None = None,
    inverses: bool = False,
    max_tries: int = 2000,
) -> JetPolynomial:
    """Random polynomial with rational coefficients.

    With ``parity`` and/or ``ghost`` given, every term has that parity and
    ghost number (homogeneous sample).  Coefficients are small rationals.
    """
    pool = pool if pool is not None else generator_pool(model)
    terms: dict = {}
    want = rng.randint(1, max_terms)
    tries = 0
    while len(terms) < want and tries < max_tries:
        tries += 1
        m = random_monomial(model, rng, pool, rng.randint(1, max_degree), inverses)
        if m is None:
            continue
        info = model.info(m)
        if parity is not None and info[1] != parity:
            continue
        if ghost is not None and info[2] != ghost:
            continue
        num = rng.choice([-3, -2, -1, 1, 2, 3, 5])
        den = rng.choice([1, 1, 1, 2, 3])
        terms[m] = terms.get(m, 0) + Q(num, den)
    return JetPolynomial(model, {m: c for m, c in terms.items() if c})


def random_homogeneous(model: ModelAlgebra, rng: random.Random, pool: list[int] | None = None, **kw) -> JetPolynomial:
    """Homogeneous in parity and ghost: pick a seed monomial, then match its gradings."""
    pool = pool if pool is not None else generator_pool(model)
    while True:
        m = random_monomial(model, rng, pool, rng.randint(1, kw.get("max_degree", 4)))
        if m is None:
            continue
        info = model.info(m)
        f = random_polynomial(model, rng, pool, parity=info[1], ghost=info[2], **kw)
        if f.terms:
            return f


def coupled_pool(model: ModelAlgebra, rng: random.Random, size: int = 3, max_jet: int = 2) -> list[int]:
    """A few generators together with their antifield partners, all jets up to ``max_jet``.

    Drawing f, g, h from one such pool makes their brackets nonzero most of the time.
    """
    bases = [i for i, f in enumerate(model.fields) if not f.aux and not f.constant and model.partner[i] >= 0]
    out: set[int] = set()
    for _ in range(size):
        fi = rng.choice(bases)
        comp = rng.randrange(model.fields[fi].components)
        for g in (fi, model.partner[fi]):
            name = model.fields[g].name
            for j in range(max_jet + 1):
                out.add(model.code(name, comp, j))
    return sorted(out)
