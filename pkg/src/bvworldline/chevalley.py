"""Chevalley-Eilenberg complex of so(9,1) on the odd generators ε_{μν}.

The currents ρ^{κλ} (κ < λ) satisfy
    [ρ^{κλ}, ρ^{μν}] = η^{λμ}ρ^{κν} + η^{κν}ρ^{λμ} − η^{λν}ρ^{κμ} − η^{κμ}ρ^{λν}
and ε_a is the dual basis.  The differential is dε_c = CE_SIGN·½ Σ_{a,b} f_{ab}^c ε_a ε_b
with CE_SIGN = +1: with 𝒮(ε) = 𝒮 + Σ_{μ<ν} M^{μν}ε_{μν} and M placed to the left
of ε, this is the sign for which the ε-degree-2 part of the extended master
equation closes (the opposite sign would need the coupling −M·ε).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .brackets import EvolutionaryVF, bv_antibracket
from .jet_algebra import ODD, JetPolynomial, ModelAlgebra, Q, _add_into, is_total_derivative, truncate
from .models import LORENTZ_PAIRS, lorentz_index

CE_SIGN = 1


def _rho(mu: int, nu: int) -> dict[int, int]:
    """ρ^{μν} expanded on the ordered basis: {index: coefficient}."""
    if mu == nu:
        return {}
    a, s = lorentz_index(mu, nu)
    return {a: s}


@lru_cache(maxsize=None)
def structure_constants(eta: tuple[int, ...]) -> dict[tuple[int, int], dict[int, int]]:
    """f[(a, b)] = {c: f_ab^c} for the ordered basis of pairs."""
    out = {}

    def E(x, y):
        return eta[x] if x == y else 0

    for a, (k, l) in enumerate(LORENTZ_PAIRS):
        for b, (mu, nu) in enumerate(LORENTZ_PAIRS):
            acc: dict[int, int] = {}
            for coef, (x, y) in (
                (E(l, mu), (k, nu)),
                (E(k, nu), (l, mu)),
                (-E(l, nu), (k, mu)),
                (-E(k, mu), (l, nu)),
            ):
                if not coef:
                    continue
                for c, s in _rho(x, y).items():
                    acc[c] = acc.get(c, 0) + coef * s
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                out[(a, b)] = acc
    return out


def jacobi_failures(eta: tuple[int, ...]) -> list[tuple[int, int, int]]:
    """Triples violating the Jacobi identity of the structure constants."""
    f = structure_constants(eta)
    n = len(LORENTZ_PAIRS)
    bad = []

    def br(x: dict, y: dict) -> dict:
        acc: dict[int, int] = {}
        for a, u in x.items():
            for b, v in y.items():
                for c, w in f.get((a, b), {}).items():
                    acc[c] = acc.get(c, 0) + u * v * w
        return {c: v for c, v in acc.items() if v}

    def add(*ds):
        acc: dict[int, int] = {}
        for d in ds:
            for k, v in d.items():
                acc[k] = acc.get(k, 0) + v
        return {k: v for k, v in acc.items() if v}

    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                A, B, C = {a: 1}, {b: 1}, {c: 1}
                if add(br(A, br(B, C)), br(B, br(C, A)), br(C, br(A, B))):
                    bad.append((a, b, c))
    return bad


@dataclass
class CEComplex:
    """The CE differential acting on the ε generators of a model catalog."""

    model: ModelAlgebra
    eta: tuple[int, ...]
    d: EvolutionaryVF = field(init=False)

    def __post_init__(self):
        m = self.model
        f = structure_constants(self.eta)
        images: dict[int, dict] = {}
        for (a, b), row in f.items():
            mono = m.gen("eps", a) * m.gen("eps", b)
            for c, v in row.items():
                _add_into(images.setdefault(m.code("eps", c), {}), mono.terms, Q(CE_SIGN * v, 2))
        self.d = EvolutionaryVF(
            m, {c: JetPolynomial(m, t) for c, t in images.items()}, ODD, 1, name="d_CE"
        )

    def eps(self, a: int) -> JetPolynomial:
        return self.model.gen("eps", a)

    def generators(self) -> list[JetPolynomial]:
        return [self.eps(a) for a in range(len(LORENTZ_PAIRS))]

    def __call__(self, x: JetPolynomial) -> JetPolynomial:
        return ce_diff(self, x)


def ce_diff(ce: CEComplex, x: JetPolynomial) -> JetPolynomial:
    """Chevalley-Eilenberg d; acts only on the ε factors."""
    return ce.d(x)


def d_squared_failures(ce: CEComplex) -> list[int]:
    return [a for a, e in enumerate(ce.generators()) if ce.d(ce.d(e)).terms]


def eps_coefficient(f: JetPolynomial, a: int, b: int) -> JetPolynomial:
    """Coefficient X of ε_a ε_b (a < b) in f = ε_a ε_b X + (other ε-monomials)."""
    m = f.model
    ca, cb = m.code("eps", a), m.code("eps", b)
    eps_field = m.index["eps"]
    out: dict = {}
    for mono, c in f.terms.items():
        eps_codes = [g for g in mono if g >> 13 == eps_field]
        if eps_codes != [ca, cb]:
            continue
        # ε codes sort before every field, so they lead the monomial
        out[tuple(g for g in mono if g >> 13 != eps_field)] = c
    return JetPolynomial(m, out)


@dataclass
class MasterReport:
    degree1: dict[tuple[int, int], bool]
    degree2: dict[tuple[int, int], bool]

    @property
    def ok(self) -> bool:
        return all(self.degree1.values()) and all(self.degree2.values())


def current_density(sp, pairs=None) -> JetPolynomial:
    """Σ_{a} M^a ε_a over the ordered pairs (optionally only the listed indices)."""
    acc: dict = {}
    idx = range(len(LORENTZ_PAIRS)) if pairs is None else pairs
    for a in idx:
        mu, nu = LORENTZ_PAIRS[a]
        _add_into(acc, (sp.M(mu, nu) * sp.model.gen("eps", a)).terms)
    return JetPolynomial(sp.model, acc)


def extended_master_check(sp, ce: CEComplex | None = None, degree1=((0, 1),), degree2=(((0, 1), (1, 2)),)) -> MasterReport:
    """Components of d∫𝒮(ε) + ½(∫𝒮(ε),∫𝒮(ε)) = 0 with 𝒮(ε) − 𝒮 = Σ_{μ<ν} M^{μν}ε_{μν}.

    ε-degree 1 is (∫M, ∫𝒮) ≡ 0, realised as 𝗌M ∈ im∂ + F^K.  For ε-degree 2
    the coefficient of ε_aε_b is computed from the currents that can
    contribute to it.
    """
    ce = ce or CEComplex(sp.model, sp.eta)
    K = sp.K
    d1 = {}
    for mu, nu in degree1:
        d1[(mu, nu)] = is_total_derivative(sp.check_in_tower(sp.s(sp.M(mu, nu)))).exact
    d2 = {}
    f = structure_constants(sp.eta)
    for p1, p2 in degree2:
        a, _ = lorentz_index(*p1)
        b, _ = lorentz_index(*p2)
        a, b = min(a, b), max(a, b)
        # ε_aε_b arises from (M^a ε_a, M^b ε_b) and from dε_c with f_ab^c ≠ 0
        involved = {a, b} | {c for (x, y), row in f.items() if {x, y} == {a, b} for c in row}
        X = current_density(sp, sorted(involved))
        R = ce.d(X) + bv_antibracket(X, X, sp.Kw).density.scale(Q(1, 2))
        coef = truncate(eps_coefficient(R, a, b), K)
        d2[(p1, p2)] = is_total_derivative(sp.check_in_tower(coef)).exact
    return MasterReport(d1, d2)
