"""Polynomial forms on simplices and Thom-Whitney cochains over the cover U_μ = {p_μ ≠ 0}.

Ω_k is realised inside a small jet algebra whose only generators are the
constants t_0..t_k (even) and dt_0..dt_k (odd).  The normal form eliminates
t_0 = 1 - Σ t_i and dt_0 = -Σ dt_i.

A Thom-Whitney cochain assigns to every strictly increasing chart tuple
α = (α_0 < ... < α_k) a polynomial in the superparticle algebra whose t/dt
generators are labelled by chart, t_{α_i} being the barycentric coordinate
of vertex i.  The first vertex of the tuple is eliminated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Iterable

from .brackets import EvolutionaryVF, soloviev
from .jet_algebra import (
    EVEN,
    ODD,
    FieldDescriptor,
    JetAlgebraError,
    JetPolynomial,
    ModelAlgebra,
    Q,
    _add_into,
    _mul,
    build_model,
    is_total_derivative,
    truncate,
)


class CochainError(JetAlgebraError):
    pass


def _subst(
    f: JetPolynomial,
    target: ModelAlgebra,
    table: dict[int, dict],
    check: Callable[[int], None] | None = None,
) -> JetPolynomial:
    """Parity-preserving algebra map sending code c to table[c] (terms in ``target``).

    Codes absent from the table are kept.  Mapped factors are moved to the
    front with their Koszul sign; the product of their images is cached.
    """
    model = f.model
    par = model._par
    out: dict = {}
    prod_cache: dict[tuple, dict] = {}
    seen: set[int] = set()
    for m, coef in f.terms.items():
        if check is not None:
            for c in m:
                if c not in seen:
                    seen.add(c)
                    check(c)
        mapped = [c for c in m if c in table]
        if not mapped:
            if target is model or not m:
                _add_into(out, {m: coef})
            else:
                raise CochainError("generator without image in a change of model")
            continue
        sign = 1
        rest = []
        odd_rest = 0
        for c in m:
            odd = par[c >> 13] and not c & 1
            if c in table:
                if odd and odd_rest & 1:
                    sign = -sign
            else:
                rest.append(c)
                if odd:
                    odd_rest += 1
        key = tuple(mapped)
        img = prod_cache.get(key)
        if img is None:
            img = {(): Q(1)}
            for c in mapped:
                img = _mul(target, img, table[c])
                if not img:
                    break
            prod_cache[key] = img
        if not img:
            continue
        _add_into(out, _mul(target, img, {tuple(rest): Q(1)}), sign * coef)
    return JetPolynomial(target, out)


# --------------------------------------------------------------------------
# Ω_k


@lru_cache(maxsize=None)
def omega_model(k: int) -> ModelAlgebra:
    if k < 0:
        raise ValueError("simplex dimension must be non-negative")
    return build_model(
        [
            FieldDescriptor("t", k + 1, 0, EVEN, constant=True, index_style="_"),
            FieldDescriptor("dt", k + 1, 1, ODD, constant=True, index_style="_"),
        ]
    )


def _normal_omega(k: int, f: JetPolynomial) -> JetPolynomial:
    m = omega_model(k)
    t0 = m.code("t", 0)
    dt0 = m.code("dt", 0)
    one_minus = m.one()
    minus_dt = m.zero()
    for i in range(1, k + 1):
        one_minus = one_minus - m.gen("t", i)
        minus_dt = minus_dt - m.gen("dt", i)
    table = {t0: one_minus.terms, dt0: minus_dt.terms}
    return _subst(f, m, table)


@dataclass(frozen=True)
class SimplexForm:
    """Element of Ω_k in normal form (t_0, dt_0 eliminated)."""

    k: int
    poly: JetPolynomial

    @classmethod
    def make(cls, k: int, poly: JetPolynomial) -> "SimplexForm":
        if poly.model is not omega_model(k):
            raise CochainError("form built over the wrong simplex")
        return cls(k, _normal_omega(k, poly))

    @classmethod
    def t(cls, k: int, i: int) -> "SimplexForm":
        return cls.make(k, omega_model(k).gen("t", i))

    @classmethod
    def dt(cls, k: int, i: int) -> "SimplexForm":
        return cls.make(k, omega_model(k).gen("dt", i))

    @classmethod
    def const(cls, k: int, v) -> "SimplexForm":
        return cls(k, omega_model(k).const(v))

    def _same(self, other: "SimplexForm"):
        if self.k != other.k:
            raise CochainError(f"forms on Δ^{self.k} and Δ^{other.k} cannot be combined")

    def __add__(self, other):
        return omega_arith(self, other, "+")

    def __sub__(self, other):
        return omega_arith(self, other, "-")

    def __mul__(self, other):
        return omega_arith(self, other, "*")

    def __neg__(self):
        return SimplexForm(self.k, -self.poly)

    def scale(self, s) -> "SimplexForm":
        return SimplexForm(self.k, self.poly.scale(s))

    def __eq__(self, other):
        return isinstance(other, SimplexForm) and self.k == other.k and self.poly == other.poly

    def __hash__(self):
        return hash((self.k, self.poly))

    def is_zero(self) -> bool:
        return not self.poly.terms

    def degree(self) -> int:
        """Form degree (raises on mixed degree)."""
        return self.poly.ghost() if self.poly.terms else 0

    def delta(self) -> "SimplexForm":
        return omega_delta(self)

    def evaluate_identity(self) -> bool:
        """Check t_0 + ... + t_k = 1 and Σ dt_i = 0 after re-substitution (always true in normal form)."""
        return _normal_omega(self.k, self.poly) == self.poly


def omega_arith(a: SimplexForm, b: SimplexForm, op: str) -> SimplexForm:
    a._same(b)
    if op == "+":
        return SimplexForm(a.k, a.poly + b.poly)
    if op == "-":
        return SimplexForm(a.k, a.poly - b.poly)
    if op == "*":
        return SimplexForm(a.k, a.poly * b.poly)
    raise ValueError(f"unknown operation {op!r}")


@lru_cache(maxsize=None)
def _omega_delta_vf(k: int) -> EvolutionaryVF:
    m = omega_model(k)
    return EvolutionaryVF(m, {m.code("t", i): m.gen("dt", i) for i in range(k + 1)}, ODD, 1, name="delta")


def omega_delta(a: SimplexForm) -> SimplexForm:
    return SimplexForm(a.k, _omega_delta_vf(a.k)(a.poly))


def is_monotone(f: tuple[int, ...], target: int) -> bool:
    return all(0 <= x <= target for x in f) and all(f[i] <= f[i + 1] for i in range(len(f) - 1))


def cosimplicial_pullback(f: tuple[int, ...], a: SimplexForm) -> SimplexForm:
    """Pullback along the monotone map f: [k] → [ℓ], given as (f(0), ..., f(k)).

    f* t_i = Σ_{f(j)=i} t_j and likewise for dt.
    """
    f = tuple(f)
    k = len(f) - 1
    if k < 0 or not is_monotone(f, a.k):
        raise CochainError(f"{f} is not a monotone map into [{a.k}]")
    src = omega_model(a.k)
    dst = omega_model(k)
    table: dict[int, dict] = {}
    for i in range(a.k + 1):
        t = dst.zero()
        d = dst.zero()
        for j, fj in enumerate(f):
            if fj == i:
                t = t + dst.gen("t", j)
                d = d + dst.gen("dt", j)
        table[src.code("t", i)] = t.terms
        table[src.code("dt", i)] = d.terms
    return SimplexForm.make(k, _subst(a.poly, dst, table))


def monotone_maps(k: int, l: int) -> list[tuple[int, ...]]:
    """All monotone maps [k] → [ℓ]."""
    out = []

    def rec(prefix, lo):
        if len(prefix) == k + 1:
            out.append(tuple(prefix))
            return
        for v in range(lo, l + 1):
            rec(prefix + [v], v)

    rec([], 0)
    return out


def compose(g: tuple[int, ...], f: tuple[int, ...]) -> tuple[int, ...]:
    """g ∘ f."""
    return tuple(g[x] for x in f)


# --------------------------------------------------------------------------
# chart tuples and cochains


def check_tuple(alpha: Iterable[int], n_charts: int = 10) -> tuple[int, ...]:
    a = tuple(alpha)
    if not a:
        raise CochainError("chart tuple must be nonempty")
    if any(not 0 <= x < n_charts for x in a) or any(a[i] >= a[i + 1] for i in range(len(a) - 1)):
        raise CochainError(f"chart tuple {a} is not strictly increasing in 0..{n_charts - 1}")
    return a


def chart_tuples(kmax: int, charts: Iterable[int] = range(10)) -> list[tuple[int, ...]]:
    charts = tuple(charts)
    out = []
    for k in range(kmax + 1):
        out.extend(combinations(charts, k + 1))
    return out


def tuple_key(alpha: tuple[int, ...]) -> str:
    return "(" + " ".join(str(a) for a in alpha) + ")"


class TWContext:
    """Thom-Whitney machinery attached to a superparticle model."""

    def __init__(self, sp):
        self.sp = sp
        self.model: ModelAlgebra = sp.model
        self.eta = sp.eta
        m = self.model
        self.delta = EvolutionaryVF(
            m, {m.code("t", nu): m.gen("dt", nu) for nu in range(10)}, ODD, 0, name="delta"
        )
        self.total = self.delta + sp.s
        self._t_codes = {m.code("t", nu): nu for nu in range(10)}
        self._dt_codes = {m.code("dt", nu): nu for nu in range(10)}
        self._pinv = {m.code("p", nu) | 1: nu for nu in range(10)}
        self._F: dict = {}
        self._B: dict = {}
        self._sB: dict = {}

    # forms ------------------------------------------------------------------
    def t(self, nu):
        return self.model.gen("t", nu)

    def dt(self, nu):
        return self.model.gen("dt", nu)

    def q(self, nu: int) -> JetPolynomial:
        """q_ν = t_ν / (2η^{νν} p_ν)."""
        return (self.t(nu) * self.model.gen("p", nu, 0, power=-1)).scale(Q(self.eta[nu], 2))

    def dq(self, nu: int) -> JetPolynomial:
        return (self.dt(nu) * self.model.gen("p", nu, 0, power=-1)).scale(Q(self.eta[nu], 2))

    def normalize(self, f: JetPolynomial, alpha: tuple[int, ...]) -> JetPolynomial:
        """Eliminate t and dt of the first vertex; reject data outside the chart."""
        m = self.model
        a0 = alpha[0]
        rest = alpha[1:]
        one_minus = m.one()
        minus_dt = m.zero()
        for nu in rest:
            one_minus = one_minus - self.t(nu)
            minus_dt = minus_dt - self.dt(nu)
        table = {m.code("t", a0): one_minus.terms, m.code("dt", a0): minus_dt.terms}
        inside = set(alpha)

        def check(c):
            nu = self._t_codes.get(c, self._dt_codes.get(c))
            if nu is not None and nu not in inside:
                raise CochainError(f"form coordinate of chart {nu} on tuple {alpha}")
            nu = self._pinv.get(c)
            if nu is not None and nu not in inside:
                raise CochainError(f"1/p_{nu} appears on tuple {alpha} outside its localization")

        return _subst(f, m, table, check)

    def face(self, f: JetPolynomial, alpha: tuple[int, ...], i: int) -> JetPolynomial:
        """Pullback of a normalized value on α along the i-th face, as a normalized value on α minus α_i."""
        m = self.model
        if i == 0:
            if len(alpha) == 1:
                raise CochainError("a vertex has no faces")
            a1 = alpha[1]
            one_minus = m.one()
            minus_dt = m.zero()
            for nu in alpha[2:]:
                one_minus = one_minus - self.t(nu)
                minus_dt = minus_dt - self.dt(nu)
            table = {m.code("t", a1): one_minus.terms, m.code("dt", a1): minus_dt.terms}
        else:
            ai = alpha[i]
            table = {m.code("t", ai): {}, m.code("dt", ai): {}}
        return _subst(f, m, table)

    # Ψ bilinears --------------------------------------------------------------
    def F(self, S: tuple[int, ...]) -> JetPolynomial:
        """Σ_π sgn(π) q_{π0} δq_{π1} ⋯ δq_{πk} over orderings of S."""
        r = self._F.get(S)
        if r is None:
            acc: dict = {}
            for perm in permutations(range(len(S))):
                sign = _perm_sign(perm)
                term = self.q(S[perm[0]])
                for j in perm[1:]:
                    term = term * self.dq(S[j])
                _add_into(acc, term.terms, sign)
            r = JetPolynomial(self.model, acc)
            self._F[S] = r
        return r

    def B(self, S: tuple[int, ...]) -> JetPolynomial:
        r = self._B.get(S)
        if r is None:
            r = self.sp.B(S)
            self._B[S] = r
        return r

    def B_lower(self, k: int) -> JetPolynomial:
        """Σ_n (−1)^{C(n,2)} 𝖳(Ψ_{−n}, Ψ_{n−1}) (the k = −1 bilinear)."""
        r = self._B.get(("lower", k))
        if r is None:
            r = self.sp.B((), shift=k)
            self._B[("lower", k)] = r
        return r

    def sB(self, S: tuple[int, ...]) -> JetPolynomial:
        r = self._sB.get(S)
        if r is None:
            r = self.sp.s(self.B(S))
            self._sB[S] = r
        return r

    def tower_sum(self, alpha: tuple[int, ...], k: int) -> JetPolynomial:
        """Σ_{ν_0..ν_k} q_{ν_0}δq_{ν_1}⋯δq_{ν_k} Σ_n(−1)^{C(n,2)}𝖳^{ν_0..ν_k}(Ψ_{−n},Ψ_{n−k−2}) on α."""
        acc: dict = {}
        for S in combinations(alpha, k + 1):
            _add_into(acc, _mul(self.model, self.F(S).terms, self.B(S).terms))
        return JetPolynomial(self.model, acc)

    # cochain operations -----------------------------------------------------
    def apply(self, X: EvolutionaryVF, c: "TWCochain") -> "TWCochain":
        return TWCochain(self, {a: self.normalize(X(v), a) for a, v in c.values.items()})

    def total_diff(self, c: "TWCochain") -> "TWCochain":
        return tw_total_diff(c, self.total)


def _perm_sign(perm) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


@dataclass
class TWCochain:
    ctx: TWContext
    values: dict[tuple[int, ...], JetPolynomial]

    @classmethod
    def build(cls, ctx: TWContext, fn: Callable[[tuple[int, ...]], JetPolynomial], tuples) -> "TWCochain":
        return cls(ctx, {a: ctx.normalize(fn(a), a) for a in map(check_tuple, tuples)})

    def _zip(self, other: "TWCochain", op) -> "TWCochain":
        if self.ctx is not other.ctx:
            raise CochainError("cochains over different contexts")
        if self.values.keys() != other.values.keys():
            raise CochainError("chart mismatch between cochains")
        return TWCochain(self.ctx, {a: op(v, other.values[a]) for a, v in self.values.items()})

    def __add__(self, other):
        return self._zip(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._zip(other, lambda x, y: x - y)

    def __neg__(self):
        return TWCochain(self.ctx, {a: -v for a, v in self.values.items()})

    def scale(self, s) -> "TWCochain":
        return TWCochain(self.ctx, {a: v.scale(s) for a, v in self.values.items()})

    def truncate(self, K: int) -> "TWCochain":
        return TWCochain(self.ctx, {a: truncate(v, K) for a, v in self.values.items()})

    def restrict(self, tuples) -> "TWCochain":
        return TWCochain(self.ctx, {a: self.values[a] for a in tuples})

    def is_zero(self, K: int | None = None) -> bool:
        return all(not (truncate(v, K) if K is not None else v).terms for v in self.values.values())

    def nonzero_tuples(self, K: int | None = None, modulo_d: bool = False) -> list[tuple[int, ...]]:
        out = []
        for a, v in self.values.items():
            if K is not None:
                v = truncate(v, K)
            if not v.terms:
                continue
            if modulo_d and is_total_derivative(v).exact:
                continue
            out.append(a)
        return out

    def face_failures(self, K: int | None = None) -> list[tuple[tuple[int, ...], int]]:
        """Faces (α, i) where the pulled-back value differs from the value on α minus α_i."""
        bad = []
        for a, v in self.values.items():
            if len(a) == 1:
                continue
            for i in range(len(a)):
                b = a[:i] + a[i + 1:]
                w = self.values.get(b)
                if w is None:
                    continue
                diff = self.ctx.face(v, a, i) - w
                if K is not None:
                    diff = truncate(diff, K)
                if diff.terms:
                    bad.append((a, i))
        return bad

    def require_faces(self, K: int | None = None):
        bad = self.face_failures(K)
        if bad:
            a, i = bad[0]
            raise CochainError(f"face {i} of tuple {a} is incompatible")

    def total_degree(self) -> set[int]:
        """Ghost plus form degree of every term (dt carries ghost 1 in the unified grading)."""
        out = set()
        for v in self.values.values():
            for g, _ in v.gradings():
                out.add(g)
        return out


def tw_total_diff(c: TWCochain, s: EvolutionaryVF | None = None, check_faces: bool = False) -> TWCochain:
    """(δ + 𝗌) applied chart-wise.

    The form generators sit to the left of all fields in every monomial, so
    a single odd derivation applies 𝗌 to the density factor with the sign
    (−1)^{form degree} automatically.
    """
    if check_faces:
        c.require_faces()
    X = c.ctx.total if s is None else (c.ctx.delta + s)
    return c.ctx.apply(X, c)


def tw_bracket(c1: TWCochain, c2: TWCochain, cutoff: int | None = None) -> TWCochain:
    """Chart-wise Soloviev bracket; t and dt are treated as graded scalars."""
    if c1.ctx is not c2.ctx:
        raise CochainError("bracket of cochains over different contexts")
    if c1.values.keys() != c2.values.keys():
        raise CochainError("chart mismatch in bracket")
    ctx = c1.ctx
    return TWCochain(ctx, {a: ctx.normalize(soloviev(v, c2.values[a], cutoff), a) for a, v in c1.values.items()})


# --------------------------------------------------------------------------
# 𝖦₀ and the cocycles


G0_TOWER_SIGN = -1
"""Sign in front of the ½-term of 𝖦₀; -1 is the value for which (δ+𝗌)𝖦₀ = −𝖣."""


def g0_value(ctx: TWContext, alpha: tuple[int, ...], sign: int = G0_TOWER_SIGN) -> JetPolynomial:
    acc = dict(ctx.sp.G().terms)
    for k in range(len(alpha)):
        _add_into(acc, ctx.tower_sum(alpha, k).terms, Q(sign * (-1) ** k, 2))
    return JetPolynomial(ctx.model, acc)


def g0_cochain(ctx: TWContext, k_max: int, charts=None, sign: int = G0_TOWER_SIGN, tuples=None) -> TWCochain:
    """𝖦₀ = x⁺p⁺ + ec⁺ + sign·½ Σ_k (−1)^k Σ q_{ν_0}δq_{ν_1}⋯δq_{ν_k} Σ_n (−1)^{C(n,2)} 𝖳^{ν_0…ν_k}(Ψ_{−n},Ψ_{n−k−2})."""
    charts = ctx.sp.charts if charts is None else tuple(charts)
    if k_max > len(charts) - 1:
        raise CochainError(f"k_max={k_max} exceeds the cover size {len(charts)}")
    tuples = chart_tuples(k_max, charts) if tuples is None else tuples
    return TWCochain.build(ctx, lambda a: g0_value(ctx, a, sign), tuples)


def d_total_from_g0(ctx: TWContext, alpha: tuple[int, ...], sign: int = G0_TOWER_SIGN) -> JetPolynomial:
    """(δ+𝗌)𝖦₀ on α assembled by the Leibniz rule from cached 𝗌B^S.

    F_S involves only t, dt and p⁻¹, so 𝗌F_S = 0 and 𝗌(F_S B^S) = (−1)^{|S|-1} F_S 𝗌B^S.
    """
    model = ctx.model
    acc = dict(ctx.sp.s(ctx.sp.G()).terms)
    for k in range(len(alpha)):
        for S in combinations(alpha, k + 1):
            F = ctx.F(S)
            coef = Q(sign * (-1) ** k, 2)
            _add_into(acc, _mul(model, ctx.delta(F).terms, ctx.B(S).terms), coef)
            _add_into(acc, _mul(model, F.terms, ctx.sB(S).terms), coef * (-1) ** k)
    return ctx.normalize(JetPolynomial(model, acc), alpha)


def ggg0_residual(ctx: TWContext, alpha: tuple[int, ...], k: int, literal: bool = True) -> JetPolynomial:
    """LHS − RHS of the k-th telescoping identity on α, mod F^K.

    With ``literal`` the k = 0 right-hand side is −B₋₁; otherwise +B₋₁, the sign that holds.
    """
    model = ctx.model
    lhs: dict = {}
    for S in combinations(alpha, k + 1):
        # 𝗌 passes the k odd δq factors of F_S
        _add_into(lhs, _mul(model, ctx.F(S).terms, ctx.sB(S).terms), (-1) ** k)
    if k == 0:
        rhs = ctx.B_lower(-1).scale(-1 if literal else 1)
    else:
        acc: dict = {}
        for S in combinations(alpha, k):
            w = model.one()
            for nu in S:
                w = w * ctx.dq(nu)
            # Σ over orderings of δq ⋯ δq 𝖳^{...} is k! times the ordered term
            fact = 1
            for j in range(2, k + 1):
                fact *= j
            _add_into(acc, _mul(model, w.terms, ctx.B(S).terms), fact)
        rhs = JetPolynomial(model, acc)
    diff = ctx.normalize(JetPolynomial(model, lhs) - rhs, alpha)
    return ctx.sp.check_in_tower(diff)


def cocycle_c(ctx: TWContext, tuples) -> TWCochain:
    """𝖼 = c − Σ_α q_α (p_μ𝖳(γ^μγ^αθ₀,θ₁) + 2e⁺𝖳^α(θ₁,θ₁) − 2e⁺𝖳^α(θ₀,θ₂))."""
    from . import clifford as cl
    from .clifford import pairing, pairing_general

    sp = ctx.sp
    Kw = sp.Kw
    g = cl.gammas()
    th0, th1, th2 = sp.theta(0), sp.theta(1), sp.theta(2)
    inner: dict[int, JetPolynomial] = {}

    def corr(al: int) -> JetPolynomial:
        r = inner.get(al)
        if r is None:
            acc = sp.model.zero()
            for mu in range(10):
                acc = acc + sp.p(mu).mul(pairing_general(g[mu] @ g[al], th0, th1, Kw), Kw)
            acc = acc + sp.ep().mul(pairing((al,), th1, th1, Kw) - pairing((al,), th0, th2, Kw), Kw).scale(2)
            inner[al] = r = acc
        return r

    def val(a):
        acc = sp.c()
        for al in a:
            acc = acc - ctx.q(al) * corr(al)
        return acc

    return TWCochain.build(ctx, val, tuples)


def cochain_x(ctx: TWContext, mu: int, tuples) -> TWCochain:
    """𝗑^μ = x^μ − ½ Σ_α q_α (p_ν𝖳(γ^αγ^νγ^μθ₀,θ₀) − 4e⁺𝖳^{αμ}(θ₀,θ₁))."""
    from . import clifford as cl
    from .clifford import pairing, pairing_general

    sp = ctx.sp
    Kw = sp.Kw
    g = cl.gammas()
    th0, th1 = sp.theta(0), sp.theta(1)

    def corr(al: int) -> JetPolynomial:
        acc = sp.model.zero()
        for nu in range(10):
            acc = acc + sp.p(nu).mul(pairing_general(g[al] @ g[nu] @ g[mu], th0, th0, Kw), Kw)
        if al != mu:
            idx, sgn = ((al, mu), 1) if al < mu else ((mu, al), -1)
            acc = acc - sp.ep().mul(pairing(idx, th0, th1, Kw), Kw).scale(4 * sgn)
        return acc

    def val(a):
        acc = sp.x(mu)
        for al in a:
            acc = acc - (ctx.q(al) * corr(al)).scale(Q(1, 2))
        return acc

    return TWCochain.build(ctx, val, tuples)
