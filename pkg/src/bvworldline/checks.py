"""Named verification checks and their reports.

Every check returns one of pass / fail / infeasible_at_bounds / skipped.
A failing check carries a residual witness in canonical text form.  Checks
whose identity is known not to hold literally (see the ledger) still run the
literal statement and report its failure; the corrected statement is a
separate check.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, NamedTuple

import numpy as np

from . import clifford as cl
from .brackets import Functional, bv_antibracket, hamiltonian_vf, soloviev
from .chevalley import CEComplex, d_squared_failures, extended_master_check, jacobi_failures
from .clifford import slash
from .jet_algebra import JetAlgebraError, JetPolynomial, ModelError, Q, TruncationParams, is_total_derivative, truncate
from .mc_solver import (
    DegreeBounds,
    a_star_membership,
    mc_rhs,
    solve_linear,
    verify_curved_mc,
    verify_tw_order1,
)
from .models import LORENTZ_PAIRS, particle_model, superparticle_model
from .sampling import coupled_pool, generator_pool, random_homogeneous, random_polynomial
from .simplicial_tw import (
    SimplexForm,
    TWCochain,
    TWContext,
    chart_tuples,
    cochain_x,
    cocycle_c,
    compose,
    cosimplicial_pullback,
    d_total_from_g0,
    g0_cochain,
    ggg0_residual,
    monotone_maps,
    omega_model,
    tuple_key,
    tw_total_diff,
)
from .textform import parse, serialize

STATUSES = ("pass", "fail", "infeasible_at_bounds", "skipped")


class ConfigError(ValueError):
    """Invalid check configuration (CLI exit code 2)."""


# --------------------------------------------------------------------------
# configuration and reports


@dataclass
class CheckConfig:
    """Overrides; ``None`` means the check's own default."""

    K: int | None = None
    N: int | None = None
    J: int = 2
    kmax: int | None = None
    samples: int = 100
    seed: int = 0
    charts: int = 10
    bounds: dict = field(default_factory=dict)
    timing: bool = True

    def __post_init__(self):
        if self.K is not None and self.K < 1:
            raise ConfigError("ghost cutoff K must be at least 1")
        if self.N is not None and self.N < 0:
            raise ConfigError("tower depth N must be non-negative")
        if self.J < 0 or self.samples < 1 or not 2 <= self.charts <= 10:
            raise ConfigError("need J ≥ 0, samples ≥ 1 and 2 ≤ charts ≤ 10")
        if self.kmax is not None and not 0 <= self.kmax <= 3:
            raise ConfigError("simplex depth must be in 0..3")
        unknown = set(self.bounds) - set(DegreeBounds.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown solver bound(s): {sorted(unknown)}")


@dataclass
class CheckReport:
    check_id: str
    status: str
    params: dict
    residual: str | None
    duration_ms: int
    seed: int | None

    def as_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "status": self.status,
            "params": self.params,
            "residual": self.residual,
            "duration_ms": self.duration_ms,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), ensure_ascii=False)

    def to_text(self) -> str:
        line = f"{self.status.upper():<21} {self.check_id:<28} {self.duration_ms:>8} ms"
        if self.residual:
            line += f"\n    residual: {self.residual}"
        return line


class Outcome(NamedTuple):
    status: str
    residual: str | None = None
    extra: dict | None = None


PASS = Outcome("pass")


@dataclass(frozen=True)
class Params:
    K: int
    N: int
    J: int
    kmax: int
    samples: int
    seed: int
    charts: int
    bounds: tuple

    def echo(self, spec: "CheckSpec") -> dict:
        out = {"K": self.K, "N": self.N, "J": self.J}
        if spec.uses_kmax:
            out["kmax"] = self.kmax
            out["charts"] = self.charts
        if spec.uses_seed:
            out["samples"] = self.samples
        if spec.uses_bounds:
            out["bounds"] = dict(self.bounds)
        return out


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    description: str
    fn: Callable[[Params], Outcome]
    K: int = 6
    N: int = 8
    kmax: int = 2
    min_margin: int = 2  # N − K at least this
    uses_seed: bool = False
    uses_kmax: bool = False
    uses_bounds: bool = False


REGISTRY: dict[str, CheckSpec] = {}


def check(check_id: str, description: str, **kw):
    def deco(fn):
        if check_id in REGISTRY:
            raise ValueError(f"duplicate check {check_id}")
        REGISTRY[check_id] = CheckSpec(check_id, description, fn, **kw)
        return fn

    return deco


def list_checks() -> list[str]:
    return [f"{s.check_id} — {s.description}" for s in REGISTRY.values()]


def resolve(spec: CheckSpec, cfg: CheckConfig) -> Params:
    K = spec.K if cfg.K is None else cfg.K
    if cfg.N is not None:
        N = cfg.N
    else:
        N = spec.N if cfg.K is None else max(spec.N - spec.K + K, K + spec.min_margin)
    if N < K + spec.min_margin:
        raise ConfigError(f"{spec.check_id}: tower depth N={N} too small for K={K} (need N ≥ K+{spec.min_margin})")
    kmax = spec.kmax if cfg.kmax is None else cfg.kmax
    if kmax > cfg.charts - 1:
        raise ConfigError(f"simplex depth {kmax} needs at least {kmax + 1} charts")
    bounds = dict(DegreeBounds(K=K).as_dict())
    bounds.update(cfg.bounds)
    DegreeBounds(**bounds)  # validates
    return Params(K, N, cfg.J, kmax, cfg.samples, cfg.seed, cfg.charts, tuple(sorted(bounds.items())))


def run_check(check_id: str, cfg: CheckConfig) -> CheckReport:
    spec = REGISTRY.get(check_id)
    if spec is None:
        raise ConfigError(f"unknown check id {check_id!r}")
    p = resolve(spec, cfg)
    t0 = time.perf_counter()
    try:
        out = spec.fn(p)
    except (ModelError, ConfigError) as e:
        raise ConfigError(f"{check_id}: {e}") from e
    except JetAlgebraError as e:
        out = Outcome("fail", f"{type(e).__name__}: {e}")
    ms = int(round((time.perf_counter() - t0) * 1000)) if cfg.timing else 0
    if out.status not in STATUSES:
        raise AssertionError(f"bad status {out.status}")
    if out.status == "fail" and not out.residual:
        raise AssertionError(f"{check_id} failed without a witness")
    params = p.echo(spec)
    if out.extra:
        params.update(out.extra)
    return CheckReport(check_id, out.status, params, out.residual if out.status != "pass" else None, ms,
                       p.seed if spec.uses_seed else None)


# --------------------------------------------------------------------------
# shared models (per process)


@lru_cache(maxsize=None)
def _super(K: int, N: int, J: int, charts: int = 10, work: int | None = None):
    return superparticle_model(TruncationParams(K=K, N=N, J=J), charts=tuple(range(charts)), work_cutoff=work)


@lru_cache(maxsize=None)
def _ctx(K: int, N: int, J: int, charts: int = 10, work: int | None = None) -> TWContext:
    return TWContext(_super(K, N, J, charts, work))


@lru_cache(maxsize=None)
def _particle(K: int, J: int):
    return particle_model(TruncationParams(K=K, N=1, J=J))


def _witness(f: JetPolynomial, label: str = "", max_terms: int = 8) -> str:
    n = len(f.terms)
    items = sorted(f.terms.items())[:max_terms]
    text = serialize(JetPolynomial(f.model, dict(items)))
    more = f" (+{n - max_terms} more terms)" if n > max_terms else ""
    return f"{label}: {text}{more}" if label else text + more


def _fail(f: JetPolynomial, label: str) -> Outcome:
    return Outcome("fail", _witness(f, label))


def _nonexact(f: JetPolynomial) -> bool:
    return bool(f.terms) and not is_total_derivative(f).exact


# --------------------------------------------------------------------------
# clifford


@check("clifford.anticommutators", "γ^μγ^ν + γ^νγ^μ = 2η^{μν}Id for all 55 pairs, η of signature (9,1)")
def _c_anti(p: Params) -> Outcome:
    g = cl.gammas()
    et = cl.eta()
    Id = np.eye(cl.DIM, dtype=np.int64)
    if sorted(et) != [-1] + [1] * 9:
        return Outcome("fail", f"signature of η is {et}")
    for mu in range(10):
        for nu in range(mu, 10):
            lhs = g[mu] @ g[nu] + g[nu] @ g[mu]
            rhs = 2 * et[mu] * Id if mu == nu else 0 * Id
            if not np.array_equal(lhs, rhs):
                return Outcome("fail", f"anticommutator ({mu},{nu})")
    return PASS


def _det_exact(M: np.ndarray) -> int:
    """Bareiss fraction-free determinant."""
    A = [[int(x) for x in row] for row in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


@check("clifford.pairing", "𝖳 symmetric, nondegenerate and pairing opposite chiralities")
def _c_pairing(p: Params) -> Outcome:
    T = cl.build_gamma().T
    h = cl.HALF
    if not np.array_equal(T, T.T):
        return Outcome("fail", "𝖳 is not symmetric")
    if np.any(T[:h, :h]) or np.any(T[h:, h:]):
        return Outcome("fail", "𝖳 pairs equal chiralities")
    det = _det_exact(T)
    if det == 0:
        return Outcome("fail", "𝖳 is degenerate")
    return Outcome("pass", extra={"det_T": det})


@check("clifford.adjoint", "𝖳(γ^μα,β) = 𝖳(α,γ^μβ) and 𝖳(γ^{μν}α,β) = −𝖳(α,γ^{μν}β) on all basis pairs")
def _c_adjoint(p: Params) -> Outcome:
    T = cl.build_gamma().T
    for mu in range(10):
        A = cl.gamma_antisym((mu,))
        if not np.array_equal(A.T @ T, T @ A):
            return Outcome("fail", f"γ^{mu} is not 𝖳-self-adjoint")
    for mu, nu in LORENTZ_PAIRS:
        A = cl.gamma_antisym((mu, nu))
        if not np.array_equal(A.T @ T, -(T @ A)):
            return Outcome("fail", f"γ^{{{mu}{nu}}} is not 𝖳-skew")
    return PASS


@check("clifford.commute_lemma", "γ^Sγ^μ − (−1)^kγ^μγ^S = 2Σ±η^{μμ_j}γ^{S∖μ_j} for k = 1, 2, 3, all S and μ")
def _c_lemma(p: Params) -> Outcome:
    for k in (1, 2, 3):
        bad = cl.commute_lemma_failures(k)
        if bad:
            return Outcome("fail", f"k={k}: {bad[:3]}")
    return PASS


# --------------------------------------------------------------------------
# brackets


@check("bracket.axioms", "antisymmetry, Jacobi, ∂-linearity, ghost +1, Soloviev vs BV bracket on random samples",
       K=3, N=5, uses_seed=True)
def _b_axioms(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    m = sp.model
    rng = random.Random(p.seed)
    nontrivial = 0
    for i in range(p.samples):
        pool = coupled_pool(m, rng, 3, min(p.J, 2))
        f, g, h = (random_homogeneous(m, rng, pool, max_degree=4, max_terms=3) for _ in range(3))
        pf, pg = f.parity(), g.parity()
        fg = soloviev(f, g)
        nontrivial += bool(fg.terms)
        s = -1 if ((pf + 1) * (pg + 1)) % 2 else 1
        r = fg + soloviev(g, f).scale(s)
        if r.terms:
            return _fail(r, f"sample {i}: antisymmetry")
        r = soloviev(f, soloviev(g, h)) - soloviev(fg, h) - soloviev(g, soloviev(f, h)).scale(s)
        if r.terms:
            return _fail(r, f"sample {i}: Jacobi")
        d = fg.d()
        for r, what in ((soloviev(f.d(), g) - d, "∂ in the first slot"), (soloviev(f, g.d()) - d, "∂ in the second slot")):
            if r.terms:
                return _fail(r, f"sample {i}: {what}")
        if fg.terms and fg.ghost() != f.ghost() + g.ghost() + 1:
            return _fail(fg, f"sample {i}: ghost {fg.ghost()} ≠ {f.ghost()} + {g.ghost()} + 1")
        r = fg - bv_antibracket(f, g).density
        if _nonexact(r):
            return _fail(r, f"sample {i}: Soloviev and BV brackets differ outside im∂")
    return Outcome("pass", extra={"nonzero_brackets": nontrivial})


# --------------------------------------------------------------------------
# particle


def _particle_codes(pm):
    m = pm.model
    return [m.code(f.name, comp) for f in m.fields if not f.constant for comp in range(f.components)]


@check("particle.hamiltonian", "the Hamiltonian field of ∫S is s₍₀₎+s₍₁₎ on every generator", K=6, N=1, min_margin=-10)
def _p_ham(p: Params) -> Outcome:
    pm = _particle(p.K, p.J)
    for c in _particle_codes(pm):
        r = pm.s_hamiltonian.image(c) - pm.s.image(c)
        if r.terms:
            return _fail(r, f"generator {serialize(pm.model.from_code(c))}")
    return PASS


@check("particle.s_squared", "s² = 0 on every particle generator", K=6, N=1, min_margin=-10)
def _p_s2(p: Params) -> Outcome:
    pm = _particle(p.K, p.J)
    for c in _particle_codes(pm):
        r = pm.s(pm.s.image(c))
        if r.terms:
            return _fail(r, f"s² on {serialize(pm.model.from_code(c))}")
    return PASS


@check("particle.master", "½(∫S,∫S) = 0 exactly", K=6, N=1, min_margin=-10)
def _p_master(p: Params) -> Outcome:
    pm = _particle(p.K, p.J)
    r = bv_antibracket(pm.S, pm.S).density
    return _fail(r, "(S,S)") if _nonexact(r) else PASS


@check("particle.covariance", "(∫S,∫G) = −∫D and (∫G,∫G) = 0", K=6, N=1, min_margin=-10)
def _p_cov(p: Params) -> Outcome:
    pm = _particle(p.K, p.J)
    r = bv_antibracket(pm.S, pm.G_density).density + pm.D
    if _nonexact(r):
        return _fail(r, "(S,G) + D")
    r = bv_antibracket(pm.G_density, pm.G_density).density
    return _fail(r, "(G,G)") if _nonexact(r) else PASS


@check("particle.gauge", "s₍₀₎(∂e⁺ − η^{μν}x⁺_μp_ν) = 0", K=6, N=1, min_margin=-10)
def _p_gauge(p: Params) -> Outcome:
    pm = _particle(p.K, p.J)
    f = pm.ep(1)
    for mu in range(10):
        f = f - (pm.xp(mu) * pm.p(mu)).scale(pm.eta[mu])
    r = pm.s0(f)
    return _fail(r, "s₍₀₎ of the constraint") if r.terms else PASS


@check("particle.curved_mc", "S_u = S + uG solves ½(∫S_u,∫S_u) = −u∫D at every order", K=6, N=1, min_margin=-10)
def _p_curved(p: Params) -> Outcome:
    pm = _particle(p.K, p.J)
    for r in verify_curved_mc({0: pm.S, 1: pm.G_density}, pm.D, range(4)):
        if not r.ok:
            return Outcome("fail", f"order u^{r.order}: {r.witness}")
    return PASS


# --------------------------------------------------------------------------
# superparticle


@check("super.s_squared", "𝗌²(g) ∈ F^K for every generator, θ⁺ₙ included")
def _s_s2(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    for c in sp.generator_codes():
        r = sp.check_in_tower(sp.s(sp.s.image(c)))
        if r.terms:
            return _fail(r, f"𝗌² on {serialize(sp.model.from_code(c))}")
    return Outcome("pass", extra={"generators": len(sp.generator_codes())})


@check("super.psi_recursion", "𝗌Ψₙ = (−1)^{n+1}p_μγ^μΨ_{n+1} − 2e⁺Ψ_{n+2} mod F^K for all representable n")
def _s_psi(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    ns = [n for n in sp.psi_range() if n + 2 <= sp.N - 2]
    for n in ns:
        lhs = sp.psi(n).map(lambda f: sp.s(f))
        sign = -1 if (n + 1) % 2 else 1
        rhs = slash(sp.ps(), sp.psi(n + 1), sp.Kw).scale(sign) - sp.psi(n + 2).lmul(sp.ep(), sp.Kw).scale(2)
        for A, f in enumerate((lhs - rhs).comps):
            r = sp.check_in_tower(f)
            if r.terms:
                return _fail(r, f"Ψ_{n} component {A}")
    return Outcome("pass", extra={"n_range": [ns[0], ns[-1]]})


def _sQ_residual(sp, e_sign: int):
    v = slash(sp.ps(), sp.theta(0), sp.Kw) + sp.theta(1).lmul(sp.ep(), sp.Kw).scale(2 * e_sign)
    return sp.Q_spinor().map(lambda f: sp.s(f)) - v.d()


@check("super.sQ_literal", "𝗌Q = ∂(p_μγ^μθ₀ + 2e⁺θ₁) mod F^K with the +2e⁺θ₁ sign (known to fail, see ledger)")
def _s_sq_lit(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    for A, f in enumerate(_sQ_residual(sp, 1).comps):
        r = sp.check_in_tower(f)
        if r.terms:
            return _fail(r, f"component {A}")
    return PASS


@check("super.sQ", "𝗌Q = ∂(p_μγ^μθ₀ − 2e⁺θ₁) mod F^K and (∫Q,∫𝒮) = 0")
def _s_sq(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    for A, f in enumerate(_sQ_residual(sp, -1).comps):
        r = sp.check_in_tower(f)
        if r.terms:
            return _fail(r, f"component {A}")
    return PASS


def _q_fields(sp):
    Qs = sp.Q_spinor()
    return [hamiltonian_vf(Functional(Qs.comps[A]), sp.Kw) for A in range(cl.HALF)]


@check("super.q_psi", "𝗊Ψₙ = 0 mod F^K for every Ψₙ and every component of Q")
def _s_qpsi(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    for A, q in enumerate(_q_fields(sp)):
        for n in sp.psi_range():
            for B, f in enumerate(sp.psi(n).comps):
                r = sp.check_in_tower(q(f))
                if r.terms:
                    return _fail(r, f"𝗊_{A} Ψ_{n}[{B}]")
    return PASS


@check("super.q_g0", "𝗊𝖦₀ = 0 mod F^K on the charts and one pair", K=6, N=8)
def _s_qg0(p: Params) -> Outcome:
    ctx = _ctx(p.K, p.N, p.J, p.charts)
    sp = ctx.sp
    tuples = [(a,) for a in range(p.charts)] + [(0, 1)]
    g0 = g0_cochain(ctx, 1, tuples=tuples)
    for A, q in enumerate(_q_fields(sp)):
        r = ctx.apply(q, g0)
        for a, v in r.values.items():
            v = sp.check_in_tower(v)
            if v.terms:
                return _fail(v, f"𝗊_{A} on {tuple_key(a)}")
    return PASS


@check("super.D_is_derivative", "the Hamiltonian field of ∫𝖣 is ∂ on every generator")
def _s_dd(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    XD = hamiltonian_vf(Functional(sp.D()))
    m = sp.model
    for c in sp.generator_codes():
        r = XD.image(c) - m.from_code(c).d()
        if r.terms:
            return _fail(r, f"generator {serialize(m.from_code(c))}")
    return PASS


# --------------------------------------------------------------------------
# Lorentz structure and CE


def _E(eta, a, b):
    return eta[a] if a == b else 0


RELATION_PAIRS = (
    ((0, 1), (1, 2)), ((0, 1), (0, 2)), ((1, 2), (2, 3)), ((2, 3), (3, 4)), ((0, 1), (2, 3)),
    ((0, 5), (5, 9)), ((3, 7), (7, 8)), ((1, 4), (2, 4)), ((0, 9), (0, 1)), ((4, 6), (6, 8)),
    ((0, 1), (0, 1)), ((2, 8), (3, 8)),
)
MD_PAIRS = ((0, 1), (2, 5), (3, 9), (4, 7), (6, 8))


@check("ce.sM", "𝗌M^{μν} ∈ im∂ + F^K for all 45 currents", K=6, N=8)
def _ce_sm(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    for mu, nu in LORENTZ_PAIRS:
        r = sp.check_in_tower(sp.s(sp.M(mu, nu)))
        if _nonexact(r):
            return _fail(r, f"𝗌M^{{{mu}{nu}}}")
    return PASS


@check("ce.relations", "(∫M^{κλ},∫M^{μν}) reproduces the so(9,1) structure constants on 12 pairs", K=6, N=8)
def _ce_rel(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    eta = sp.eta
    M = sp.M
    for (k, l), (mu, nu) in RELATION_PAIRS:
        lhs = bv_antibracket(M(k, l), M(mu, nu), sp.Kw).density
        rhs = (
            M(k, nu).scale(_E(eta, l, mu)) + M(l, mu).scale(_E(eta, k, nu))
            - M(k, mu).scale(_E(eta, l, nu)) - M(l, nu).scale(_E(eta, k, mu))
        )
        r = truncate(lhs - rhs, sp.K)
        if _nonexact(r):
            return _fail(r, f"(M^{{{k}{l}}}, M^{{{mu}{nu}}})")
    return Outcome("pass", extra={"pairs": len(RELATION_PAIRS)})


@check("ce.MD", "(∫M^{μν},∫𝖣) ≡ 0 mod im∂ + F^K on 5 pairs", K=6, N=8)
def _ce_md(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    D = sp.D()
    for mu, nu in MD_PAIRS:
        r = sp.check_in_tower(bv_antibracket(sp.M(mu, nu), D, sp.Kw).density)
        if _nonexact(r):
            return _fail(r, f"(M^{{{mu}{nu}}}, D)")
    return PASS


@check("ce.d_squared", "CE d² = 0 on all 45 generators and Jacobi for the structure constants", K=3, N=5)
def _ce_d2(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    if jacobi_failures(sp.eta):
        return Outcome("fail", f"Jacobi fails on {jacobi_failures(sp.eta)[:3]}")
    ce = CEComplex(sp.model, sp.eta)
    bad = d_squared_failures(ce)
    if bad:
        return _fail(ce.d(ce.d(ce.eps(bad[0]))), f"d²ε_{bad[0]}")
    return PASS


@check("ce.extended_master", "ε-degree 1 and 2 parts of the Lorentz-extended master equation (spot pairs)", K=3, N=5)
def _ce_ext(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    rep = extended_master_check(sp, degree1=((0, 1), (2, 7)), degree2=(((0, 1), (1, 2)), ((0, 1), (2, 3))))
    if rep.ok:
        return PASS
    bad = [k for k, v in {**rep.degree1, **rep.degree2}.items() if not v]
    return Outcome("fail", f"failing components {bad}")


# --------------------------------------------------------------------------
# Thom-Whitney


def _omega_monomials(k: int, degree: int) -> list[SimplexForm]:
    m = omega_model(k)
    gens = [m.gen("t", i) for i in range(k + 1)] + [m.gen("dt", i) for i in range(k + 1)]
    out = [SimplexForm.const(k, 1)]
    for d in range(1, degree + 1):
        for combo in combinations(range(len(gens)), d):
            f = m.one()
            for i in combo:
                f = f * gens[i]
            if f.terms:
                out.append(SimplexForm.make(k, f))
    return out


@check("tw.delta_squared", "δ² = 0 on Ω_k for k ≤ 3 (all monomials of degree ≤ 3)", K=4, N=6)
def _tw_d2(p: Params) -> Outcome:
    for k in range(4):
        for f in _omega_monomials(k, 3):
            r = f.delta().delta()
            if not r.is_zero():
                return _fail(r.poly, f"δ² on Ω_{k}")
    return PASS


@check("tw.functoriality", "(g∘f)* = f*g* on generators and f*δ = δf* on forms of degree ≤ 2, "
       "for all monotone arrows between [0]..[3]", K=4, N=6)
def _tw_func(p: Params) -> Outcome:
    # pullbacks are algebra maps, so composition is decided on the generators t_i, dt_i
    gens = {k: _omega_monomials(k, 1) for k in range(4)}
    forms = {k: _omega_monomials(k, 2) for k in range(4)}
    maps = {(k, l): monotone_maps(k, l) for k, l in product(range(4), repeat=2)}
    pairs = 0
    for (k, l), fs in maps.items():
        for f in fs:
            for a in forms[l]:
                if cosimplicial_pullback(f, a).delta() != cosimplicial_pullback(f, a.delta()):
                    return Outcome("fail", f"pullback along {f} does not commute with δ")
            for n in range(4):
                for g in maps[(l, n)]:
                    pairs += 1
                    gf = compose(g, f)
                    for a in gens[n]:
                        if cosimplicial_pullback(gf, a) != cosimplicial_pullback(f, cosimplicial_pullback(g, a)):
                            return Outcome("fail", f"(g∘f)* ≠ f*g* for g={g}, f={f}")
    return Outcome("pass", extra={"composable_pairs": pairs})


def _tuples(p: Params):
    return chart_tuples(p.kmax, range(p.charts))


@check("tw.faces", "face compatibility of 𝖦₀, 𝖼 and 𝗑^μ on all tuples", K=4, N=6, uses_kmax=True)
def _tw_faces(p: Params) -> Outcome:
    ctx = _ctx(p.K, p.N, p.J, p.charts)
    tuples = _tuples(p)
    named = [("𝖦₀", g0_cochain(ctx, p.kmax, tuples=tuples)), ("𝖼", cocycle_c(ctx, tuples))]
    named += [(f"𝗑^{mu}", cochain_x(ctx, mu, tuples)) for mu in range(10)]
    for name, c in named:
        bad = c.face_failures(p.K)
        if bad:
            a, i = bad[0]
            lo = a[:i] + a[i + 1:]
            return _fail(truncate(ctx.face(c.values[a], a, i) - c.values[lo], p.K), f"{name}, face {i} of {tuple_key(a)}")
    return PASS


@check("tw.dd_identity", "𝖣 + 𝗌(x⁺p⁺ + ec⁺) = ½B₋₁ mod F^K", K=4, N=6)
def _tw_dd(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    r = sp.check_in_tower(sp.D(full=False) + sp.s(sp.G()) - sp.B((), shift=-1).scale(Q(1, 2)))
    return _fail(r, "DD") if r.terms else PASS


def _ggg0(p: Params, literal: bool) -> Outcome:
    ctx = _ctx(p.K, p.N, p.J, p.charts)
    tuples = _tuples(p)
    spot = (0, 3, 6, 9) if p.charts == 10 else None
    jobs = [(a, k) for a in tuples for k in range(len(a))]
    if spot is not None and p.kmax < 3:
        jobs.append((spot, 3))
    for a, k in jobs:
        r = ggg0_residual(ctx, a, k, literal)
        if r.terms:
            return _fail(r, f"k={k} on {tuple_key(a)}")
    return Outcome("pass", extra={"cases": len(jobs)})


@check("tw.ggg0_literal", "telescoping identities for 𝗌B^S, k = 0..2 on all tuples plus a k = 3 spot, "
       "k = 0 with −B₋₁ (known to fail, see ledger)", K=4, N=6, uses_kmax=True)
def _tw_ggg0_lit(p: Params) -> Outcome:
    return _ggg0(p, True)


@check("tw.ggg0", "telescoping identities for 𝗌B^S, k = 0..2 on all tuples plus a k = 3 spot, k = 0 with +B₋₁",
       K=4, N=6, uses_kmax=True)
def _tw_ggg0(p: Params) -> Outcome:
    return _ggg0(p, False)


@check("tw.g0_identity", "(δ+𝗌)𝖦₀ = −𝖣 mod F^K on all tuples", K=4, N=6, uses_kmax=True)
def _tw_g0(p: Params) -> Outcome:
    ctx = _ctx(p.K, p.N, p.J, p.charts)
    sp = ctx.sp
    D = sp.D(full=False)
    for a in _tuples(p):
        r = sp.check_in_tower(d_total_from_g0(ctx, a) + ctx.normalize(D, a))
        if r.terms:
            return _fail(r, tuple_key(a))
    return PASS


def _cocycle_residuals(p: Params, tuples):
    """Yield (tuple, label, residual) for (δ+𝗌)𝖼 and (δ+𝗌)𝗑^μ + η^{μμ}𝖼p_μ."""
    ctx = _ctx(p.K, p.N, p.J, p.charts)
    sp = ctx.sp
    c = cocycle_c(ctx, tuples)
    dc = tw_total_diff(c)
    for a in tuples:
        yield a, f"(δ+𝗌)𝖼 on {tuple_key(a)}", sp.check_in_tower(dc.values[a])
    for mu in range(10):
        dx = tw_total_diff(cochain_x(ctx, mu, tuples))
        for a in tuples:
            rhs = ctx.normalize((c.values[a] * sp.p(mu)).scale(-sp.eta[mu]), a)
            yield a, f"(δ+𝗌)𝗑^{mu} on {tuple_key(a)}", sp.check_in_tower(dx.values[a] - rhs)


@check("tw.cocycles_literal", "(δ+𝗌)𝖼 = 0 and (δ+𝗌)𝗑^μ = −η^{μν}𝖼p_ν on all tuples "
       "(known to fail on k ≥ 1, see ledger)", K=4, N=6, kmax=1, uses_kmax=True)
def _tw_coc_lit(p: Params) -> Outcome:
    for _, label, r in _cocycle_residuals(p, _tuples(p)):
        if r.terms:
            return _fail(r, label)
    return PASS


def _form_degree0(f: JetPolynomial) -> JetPolynomial:
    m = f.model
    dts = {m.code("dt", nu) for nu in range(10)}
    return JetPolynomial(m, {k: v for k, v in f.terms.items() if not dts.intersection(k)})


@check("tw.cocycles", "(δ+𝗌)𝖼 = 0 and (δ+𝗌)𝗑^μ = −η^{μν}𝖼p_ν exactly on charts, form-degree-0 part on all tuples",
       K=4, N=6, kmax=1, uses_kmax=True)
def _tw_coc(p: Params) -> Outcome:
    for a, label, r in _cocycle_residuals(p, _tuples(p)):
        r = r if len(a) == 1 else _form_degree0(r)
        if r.terms:
            return _fail(r, label)
    return PASS


# --------------------------------------------------------------------------
# Maurer-Cartan


MC_TUPLES = ((0,), (1,), (0, 1))


@check("mc.order0", "order u⁰: the master equation surrogate 𝗌² ∈ F^K", K=4, N=6)
def _mc0(p: Params) -> Outcome:
    return _s_s2(p)


@check("mc.order1", "order u¹: (δ+𝗌)𝖦₀ = −𝖣 mod im∂ + F^K", K=4, N=6, uses_kmax=True, kmax=1)
def _mc1(p: Params) -> Outcome:
    ctx = _ctx(p.K, p.N, p.J, p.charts)
    g0 = g0_cochain(ctx, p.kmax, tuples=_tuples(p))
    r = verify_tw_order1(ctx, g0, ctx.sp.D(full=False))
    return PASS if r.ok else Outcome("fail", r.witness)


def _rhs1(K: int, J: int, charts: int):
    """−½(𝖦₀,𝖦₀) computed with margin 2 (working cutoff K+2, tower K+3)."""
    ctx = _ctx(K, K + 3, J, charts, K + 2)
    g0 = g0_cochain(ctx, 1, tuples=list(MC_TUPLES))
    return ctx, mc_rhs(1, {0: g0}, ctx.sp.Kw)


@check("mc.rhs_closed", "−½(∫𝖦₀,∫𝖦₀) is (δ+𝗌)-closed mod im∂ + F^K on (0), (1), (0 1)", K=4, N=7, min_margin=3)
def _mc_closed(p: Params) -> Outcome:
    ctx, rhs = _rhs1(p.K, p.J, p.charts)
    sp = ctx.sp
    d = tw_total_diff(rhs.truncate(p.K + 1))
    for a, v in d.values.items():
        v = sp.check_in_tower(v, p.K)
        if _nonexact(v):
            return _fail(v, tuple_key(a))
    degrees = sorted(rhs.truncate(p.K).total_degree())
    return Outcome("pass", extra={"rhs_total_degree": degrees})


@check("mc.solve_g1", "bounded exact solve of (δ+𝗌)𝖦₁ = −½(𝖦₀,𝖦₀) mod F^K (infeasibility allowed)",
       K=4, N=7, min_margin=3, uses_bounds=True)
def _mc_g1(p: Params) -> Outcome:
    ctx, rhs = _rhs1(p.K, p.J, p.charts)
    b = DegreeBounds(**dict(p.bounds))
    # sign convention: solve (δ+𝗌)X + ∂Y = −target with target = −rhs
    res = solve_linear(ctx, rhs.scale(-1), b, constraint="A_star")
    extra = {"solver": res.summary()}
    if res.status == "solved":
        extra["solver"]["in_A_star"] = a_star_in(ctx, res.X, b.K)
        extra["g1_terms"] = {tuple_key(a): len(v.terms) for a, v in sorted(res.X.values.items())}
        return Outcome("pass", extra=extra)
    return Outcome("infeasible_at_bounds", res.reason, extra)


def a_star_in(ctx, X: TWCochain, K: int) -> bool:
    return all(a_star_membership(ctx.sp, v, K) for v in X.values.values())


@check("mc.recover_g0", "solve (δ+𝗌)X = −𝖣 − (δ+𝗌)(x⁺p⁺ + ec⁺) inside 𝔸⋆ on (0), (1), (0 1) and compare with 𝖦₀",
       K=3, N=5,
       uses_bounds=True)
def _mc_recover(p: Params) -> Outcome:
    ctx = _ctx(p.K, p.N, p.J, p.charts)
    sp = ctx.sp
    tuples = list(MC_TUPLES)
    seed = TWCochain(ctx, {a: ctx.normalize(sp.G(), a) for a in tuples})
    dseed = tw_total_diff(seed)
    target = TWCochain(ctx, {a: ctx.normalize(sp.D(), a) + dseed.values[a] for a in tuples})
    bounds = dict(p.bounds)
    bounds.update(K=p.K, rounds=2)
    res = solve_linear(ctx, target, DegreeBounds(**bounds), constraint="A_star")
    extra = {"solver": res.summary()}
    if res.status != "solved":
        return Outcome("fail", f"no solution found: {res.reason}", extra)
    # X − (𝖦₀ − seed) must be (δ+𝗌)-closed mod im∂ + F^K
    g0 = g0_cochain(ctx, 0, tuples=tuples)
    diff = TWCochain(ctx, {a: truncate(g0.values[a] - seed.values[a] - res.X.values[a], p.K + 1) for a in tuples})
    d = tw_total_diff(diff)
    for a, v in d.values.items():
        v = sp.check_in_tower(v, p.K)
        if _nonexact(v):
            return _fail(v, f"difference to 𝖦₀ not closed on {tuple_key(a)}")
    if not a_star_in(ctx, res.X, p.K):
        return Outcome("fail", "solution leaves 𝔸⋆", extra)
    return Outcome("pass", extra=extra)


@check("mc.zero_target", "solve_linear with target 0 returns 0", K=3, N=5)
def _mc_zero(p: Params) -> Outcome:
    ctx = _ctx(p.K, p.N, p.J, p.charts)
    target = TWCochain(ctx, {(0,): ctx.model.zero(), (0, 1): ctx.model.zero()})
    res = solve_linear(ctx, target, DegreeBounds(K=p.K))
    if res.status != "solved" or any(v.terms for v in res.X.values.values()):
        return Outcome("fail", f"status {res.status}")
    return PASS


# --------------------------------------------------------------------------
# text form


@check("io.roundtrip", "parse(serialize(f)) = f on random polynomials", K=3, N=5, uses_seed=True)
def _io_rt(p: Params) -> Outcome:
    sp = _super(p.K, p.N, p.J)
    m = sp.model
    rng = random.Random(p.seed)
    pool = generator_pool(m, p.J, include_constants=True)
    n = max(p.samples, 1000)
    for i in range(n):
        f = random_polynomial(m, rng, pool, max_degree=5, max_terms=5, inverses=True)
        text = serialize(f)
        g = parse(m, text)
        if g != f:
            return Outcome("fail", f"sample {i}: {text}")
        if serialize(g) != text:
            return Outcome("fail", f"sample {i}: serialization not canonical: {text}")
    return Outcome("pass", extra={"polynomials": n})


CHECK_GROUPS = sorted({cid.split(".")[0] for cid in REGISTRY})


def expand_ids(ids: list[str]) -> list[str]:
    """Accept exact ids, group prefixes ("tw" or "tw.*") and "all"."""
    out: list[str] = []
    for cid in ids:
        if cid == "all":
            sel = list(REGISTRY)
        elif cid in REGISTRY:
            sel = [cid]
        else:
            prefix = cid[:-2] if cid.endswith(".*") else cid
            sel = [k for k in REGISTRY if k.split(".")[0] == prefix]
            if not sel:
                raise ConfigError(f"unknown check id {cid!r}")
        out.extend(s for s in sel if s not in out)
    return out
