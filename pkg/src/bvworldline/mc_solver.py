"""Curved Maurer-Cartan equation in u, order by order, and a bounded exact solver.

The solver looks for X (and a total-derivative slack Y) with

    (δ+𝗌)X + ∂Y = −target   modulo F^K

on a set of chart tuples, X being restricted to a finite, explicitly
enumerated monomial basis.  The basis is generated from the support of the
target by inverting single generator images (support-driven ansatz); the
linear system over Q is solved by exact sparse elimination with
deterministic pivoting.  A failure only means no solution exists inside the
enumerated basis.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import Iterable

from .brackets import bv_antibracket
from .clifford import HALF, SpinorVector, binom2, slash
from .jet_algebra import JetPolynomial, Q, TowerOverflow, _add_into, _d, _mul, is_total_derivative, truncate
from .models import psi_chirality
from .simplicial_tw import TWCochain, TWContext, _subst, tw_bracket, tw_total_diff

log = logging.getLogger(__name__)


# --------------------------------------------------------------------------
# order-by-order checks


@dataclass
class OrderResult:
    order: int
    ok: bool
    witness: str | None = None


def verify_curved_mc(series: dict[int, JetPolynomial], D: JetPolynomial, orders: Iterable[int]) -> list[OrderResult]:
    """½(∫S_u,∫S_u) = −u∫D order by order, for a plain (particle) series S_u = Σ u^m S_m."""
    out = []
    for m in orders:
        acc = D.model.zero()
        for i in range(m + 1):
            a, b = series.get(i), series.get(m - i)
            if a is None or b is None:
                continue
            acc = acc + bv_antibracket(a, b).density.scale(Q(1, 2))
        if m == 1:
            acc = acc + D
        ex = is_total_derivative(acc)
        out.append(OrderResult(m, ex.exact, None if ex.exact else ex.reason))
    return out


def verify_tw_order0(sp, codes=None) -> OrderResult:
    """Order u⁰ for the superparticle: the master equation surrogate 𝗌² ∈ F^K."""
    for c in codes if codes is not None else sp.generator_codes():
        r = sp.check_in_tower(sp.s(sp.s.image(c)))
        if r.terms:
            return OrderResult(0, False, f"𝗌² fails on {sp.model.describe(c)}")
    return OrderResult(0, True)


def verify_tw_order1(ctx: TWContext, g0: TWCochain, D: JetPolynomial) -> OrderResult:
    """Order u¹: (δ+𝗌)𝖦₀ = −𝖣 on every tuple, mod im ∂ + F^K."""
    sp = ctx.sp
    d = tw_total_diff(g0)
    for a, v in d.values.items():
        r = sp.check_in_tower(v + ctx.normalize(D, a))
        if r.terms and not is_total_derivative(r).exact:
            return OrderResult(1, False, f"tuple {a}: {len(r.terms)} residual terms")
    return OrderResult(1, True)


def mc_rhs(n: int, G: dict[int, TWCochain], cutoff: int | None = None) -> TWCochain:
    """−½ Σ_{j+k=n−1} (𝖦_j, 𝖦_k), chart-wise."""
    if n < 1:
        raise ValueError("the recursion starts at n = 1")
    missing = [j for j in range(n) if j not in G]
    if missing:
        raise ValueError(f"𝖦_j missing for j in {missing}")
    acc = None
    for j in range(n):
        k = n - 1 - j
        term = tw_bracket(G[j], G[k], cutoff)
        acc = term if acc is None else acc + term
    return acc.scale(Q(-1, 2))


def rhs_closed(ctx: TWContext, rhs: TWCochain, K: int | None = None) -> dict[tuple, bool]:
    """(δ+𝗌) rhs ∈ im ∂ + F^K per tuple."""
    sp = ctx.sp
    K = sp.K if K is None else K
    d = tw_total_diff(rhs.truncate(K + 1))
    out = {}
    for a, v in d.values.items():
        v = sp.check_in_tower(v, K)
        out[a] = not v.terms or is_total_derivative(v).exact
    return out


# --------------------------------------------------------------------------
# exact sparse linear algebra


class SparseSolver:
    """Incremental column echelon form over Q.

    Rows are arbitrary hashable keys, numbered in order of first appearance.
    Every stored column has a distinct pivot, its smallest row number, so a
    vector lies in the span exactly when repeatedly cancelling its smallest
    row against the pivots empties it.  Each stored column carries its
    expression in terms of the original columns.
    """

    def __init__(self):
        self._rows: dict = {}
        self.pivots: dict[int, tuple[dict, dict]] = {}

    def _ids(self, col: dict) -> dict[int, object]:
        out = {}
        for r, v in col.items():
            i = self._rows.get(r)
            if i is None:
                i = self._rows[r] = len(self._rows)
            out[i] = Q(v)
        return out

    def _reduce(self, col: dict[int, object], comb: dict) -> tuple[dict, dict]:
        heap = list(col)
        heapq.heapify(heap)
        while heap:
            r = heapq.heappop(heap)
            v = col.get(r)
            if not v:
                continue
            piv = self.pivots.get(r)
            if piv is None:
                return col, comb
            pcol, pcomb = piv
            f = v / pcol[r]
            for s, w in pcol.items():
                nv = col.get(s, 0) - f * w
                if nv:
                    if s not in col:
                        heapq.heappush(heap, s)
                    col[s] = nv
                else:
                    col.pop(s, None)
            for u, w in pcomb.items():
                nv = comb.get(u, 0) - f * w
                if nv:
                    comb[u] = nv
                else:
                    comb.pop(u, None)
        return col, comb

    def add(self, key, col: dict) -> bool:
        """Store a column; False if it depends on the stored ones."""
        col, comb = self._reduce(self._ids(col), {key: Q(1)})
        if not col:
            return False
        self.pivots[min(col)] = (col, comb)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, rhs: dict) -> dict | None:
        """Coefficients z with Σ z_key col_key = rhs, or None."""
        rest, comb = self._reduce(self._ids(rhs), {})
        if rest:
            return None
        return {u: -v for u, v in comb.items() if v}


# --------------------------------------------------------------------------
# Ψ coordinates


def _psi_aux(sp, n: int, jet: int = 0) -> SpinorVector:
    return SpinorVector(psi_chirality(n), [sp.model.gen(f"Psi{n}", A, jet) for A in range(HALF)])


class PsiCoordinates:
    """The triangular change of variables trading θ⁺ₙ and ∂^ℓθₙ (ℓ ≥ 1) for Ψ.

        θ⁺ₙ = ±Ψ_{−n−1} (n ≥ 1),   θ⁺₀ = Ψ_{−1} − ½x⁺γθ₀ − 2c⁺θ₁,
        ∂θₙ = Ψₙ − (−1)^{n+1}x⁺γθ_{n+1} − 2c⁺θ_{n+2}.

    It commutes with ∂ and never lowers antifield weight, so truncation at
    F^K means the same thing on both sides.  ``to_psi`` rewrites into Ψ
    coordinates, ``expand`` substitutes the composites back.
    """

    def __init__(self, sp, cutoff: int | None = None):
        self.sp = sp
        self.model = sp.model
        self.cutoff = sp.Kw if cutoff is None else cutoff
        self._to: dict[int, dict | None] = {}
        self._from: dict[int, dict | None] = {}
        self._aux = {i for i, f in enumerate(self.model.fields) if f.aux}

    # θ⁺ and ∂θ in Ψ coordinates ------------------------------------------
    def _theta_plus_expr(self, n: int) -> SpinorVector:
        sp = self.sp
        if n >= 1:
            v = _psi_aux(sp, -n - 1)
            return -v if binom2(-n) % 2 else v
        return (
            _psi_aux(sp, -1)
            - slash(sp.xps(), sp.theta(0), self.cutoff).scale(Q(1, 2))
            - sp.theta(1).lmul(sp.cp(), self.cutoff).scale(2)
        )

    def _dtheta_expr(self, n: int) -> SpinorVector:
        sp = self.sp
        if n > sp.N - 2:
            raise TowerOverflow(f"∂θ_{n} has no Ψ representative in the instantiated range")
        sign = -1 if n % 2 == 0 else 1
        return (
            _psi_aux(sp, n)
            - slash(sp.xps(), sp.theta(n + 1, shadow=True), self.cutoff).scale(sign)
            - sp.theta(n + 2, shadow=True).lmul(sp.cp(), self.cutoff).scale(2)
        )

    def _to_image(self, code: int) -> dict | None:
        if code in self._to:
            return self._to[code]
        model = self.model
        name = model.fields[code >> 13].name
        r = None
        if not code & 1 and name.startswith("theta"):
            comp = (code >> 7) & 63
            jet = (code >> 1) & 63
            if name.endswith("+"):
                n = int(name[5:-1])
                r = self.sp.w_from_theta_plus(self._theta_plus_expr(n), n).comps[comp].terms
                for _ in range(jet):
                    r = _d(model, r)
                if jet:
                    r = self.to_psi(JetPolynomial(model, r)).terms
            elif jet:
                n = int(name[5:])
                r = self._dtheta_expr(n).comps[comp].terms
                for _ in range(jet - 1):
                    r = _d(model, r)
                r = self.to_psi(JetPolynomial(model, r)).terms
            if r is not None:
                r = truncate(JetPolynomial(model, r), self.cutoff).terms
        self._to[code] = r
        return r

    def to_psi(self, f: JetPolynomial) -> JetPolynomial:
        table = {}
        for m in f.terms:
            for c in m:
                if c not in table:
                    img = self._to_image(c)
                    if img is not None:
                        table[c] = img
        if not table:
            return f
        return truncate(_subst(f, self.model, table), self.cutoff)

    def _from_image(self, code: int) -> dict | None:
        if code in self._from:
            return self._from[code]
        r = None
        if (code >> 13) in self._aux:
            name = self.model.fields[code >> 13].name
            jet = (code >> 1) & 63
            r = self.sp.psi(int(name[3:])).comps[(code >> 7) & 63].terms
            for _ in range(jet):
                r = _d(self.model, r)
            r = truncate(JetPolynomial(self.model, r), self.cutoff).terms
        self._from[code] = r
        return r

    def expand(self, f: JetPolynomial) -> JetPolynomial:
        table = {}
        for m in f.terms:
            for c in m:
                if c not in table:
                    img = self._from_image(c)
                    if img is not None:
                        table[c] = img
        if not table:
            return f
        return truncate(_subst(f, self.model, table), self.cutoff)


def _coords(sp) -> PsiCoordinates:
    pc = getattr(sp, "_psi_coordinates", None)
    if pc is None:
        pc = sp._psi_coordinates = PsiCoordinates(sp)
    return pc


def to_psi_form(sp, f: JetPolynomial) -> JetPolynomial:
    """Normal form of f in Ψ coordinates (truncated at the working cutoff)."""
    return _coords(sp).to_psi(f)


def a_star_membership(sp, f: JetPolynomial, K: int | None = None) -> bool:
    """Is f in 𝔸⋆ + F^K, 𝔸⋆ being generated by ∂^ℓ of p, x⁺, e⁺, c⁺ and Ψₙ?

    The Ψ rewriting never lowers antifield weight, so truncating the normal
    form at K decides membership modulo F^K.  On a chart p⁻¹ is allowed.
    """
    K = sp.K if K is None else K
    allowed = _a_star_fields(sp.model)
    g = truncate(to_psi_form(sp, truncate(f, K)), K)
    return all((c >> 13) in allowed for m in g.terms for c in m)


def _a_star_fields(model) -> set[int]:
    out = {model.index[n] for n in ("p", "x+", "e+", "c+")}
    out |= {i for i, fd in enumerate(model.fields) if fd.aux or fd.constant}
    return out


# --------------------------------------------------------------------------
# bounded solve


@dataclass
class DegreeBounds:
    """Finite box for the ansatz: jets, polynomial degree, Laurent depth, forms, F^K.

    ``max_unknowns`` caps the number of cores and of X columns; the ∂-slack
    columns are not counted against it.
    """

    max_jet: int = 1
    max_degree: int = 6
    laurent_min: int = -3
    max_form: int = 2
    K: int = 4
    rounds: int = 2
    max_unknowns: int = 20000

    def __post_init__(self):
        if self.max_jet < 0 or self.max_degree < 1 or self.max_form < 0 or self.K < 1 or self.rounds < 1:
            raise ValueError("degree bounds must be non-negative (degree, K and rounds at least 1)")
        if self.laurent_min > 0:
            raise ValueError("laurent_min must be ≤ 0")

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class SolveResult:
    status: str  # "solved" | "infeasible_at_bounds"
    X: TWCochain | None
    Y: dict[tuple, JetPolynomial] | None
    unknowns: int
    equations: int
    rank: int
    reason: str = ""
    residual_ok: bool | None = None
    info: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "status": self.status,
            "unknowns": self.unknowns,
            "equations": self.equations,
            "rank": self.rank,
            "reason": self.reason,
            **self.info,
        }


def _mono_ok(model, m: tuple, b: DegreeBounds, allowed: set[int] | None) -> bool:
    info = model.info(m)
    if info[5] > b.max_jet or info[3] > b.K:
        return False
    degree = 0
    form = 0
    laurent: dict[int, int] = {}
    const, par = model._const, model._par
    for c in m:
        fi = c >> 13
        if allowed is not None and fi not in allowed:
            return False
        if c & 1:
            laurent[c] = laurent.get(c, 0) - 1
        elif const[fi]:
            form += par[fi]
        else:
            degree += 1
    if degree > b.max_degree or form > b.max_form:
        return False
    return not laurent or min(laurent.values()) >= b.laurent_min


class _ImageIndex:
    """Ψ-coordinate images of generators under δ+𝗌, keyed by a factor that must divide.

    Jet-0 factors of invertible fields (and Laurent inverses) need not divide
    a target monomial: they are compensated by the inverse power.
    """

    def __init__(self, ctx: TWContext, pc: PsiCoordinates, gens: Iterable[int], K: int):
        model = ctx.model
        self.model = model
        self.by_key: dict[int, list[tuple[int, tuple]]] = {}
        self.wild: list[tuple[int, tuple]] = []
        for g in sorted(gens):
            try:
                img = truncate(pc.to_psi(ctx.total(pc.expand(model.from_code(g)))), K + 1)
            except TowerOverflow:
                continue
            for u in img.terms:
                hard = [c for c in u if not self._soft(c)]
                if hard:
                    self.by_key.setdefault(max(hard), []).append((g, u))
                else:
                    self.wild.append((g, u))

    def _soft(self, c: int) -> bool:
        return bool(c & 1) or (self.model._inv[c >> 13] and not (c >> 1) & 63)

    def preimages(self, t: tuple) -> set[tuple]:
        """Monomials h·t·u⁻¹ for image monomials u of generators h."""
        model = self.model
        out = set()
        pairs = list(self.wild)
        for key in set(t):
            pairs.extend(self.by_key.get(key, ()))
        for h, u in pairs:
            rest = list(t)
            inv = []
            ok = True
            for c in u:
                try:
                    rest.remove(c)
                except ValueError:
                    if not self._soft(c):
                        ok = False
                        break
                    inv.append(c ^ 1)
            if not ok:
                continue
            s, m = model.mono_mul((h,), tuple(rest))
            if s and inv:
                s2, m = model.mono_mul(m, tuple(sorted(inv)))
                s *= s2
            if s:
                out.add(m)
        return out


def _chart_codes(model) -> dict[int, tuple[str, int]]:
    """Codes tied to one chart: t_ν, dt_ν and p_ν⁻¹."""
    out = {}
    for nu in range(10):
        out[model.code("t", nu)] = ("t", nu)
        out[model.code("dt", nu)] = ("t", nu)
        out[model.code("p", nu) | 1] = ("p", nu)
    return out


def _fits(m: tuple, alpha: tuple[int, ...], chart_codes: dict) -> bool:
    """m is a normal-form monomial on α: chart data only from α, no t or dt of the first vertex."""
    for c in m:
        hit = chart_codes.get(c)
        if hit is None:
            continue
        kind, nu = hit
        if nu not in alpha or (kind == "t" and nu == alpha[0]):
            return False
    return True


def _antiderivatives(model, t: tuple) -> set[tuple]:
    """Monomials obtained by lowering one jet order once: the support of a ∂-slack."""
    out = set()
    const = model._const
    for c in set(t):
        if c & 1 or const[c >> 13] or not (c >> 1) & 63:
            continue
        rest = list(t)
        rest.remove(c)
        s, m = model.mono_mul((c - 2,), tuple(rest))
        if s:
            out.add(m)
    return out


def _ansatz_generators(sp, b: DegreeBounds, allowed: set[int] | None) -> list[int]:
    """Jet codes of Ψ-coordinate generators inside the bounds (forms included)."""
    model = sp.model
    out = []
    for i, f in enumerate(model.fields):
        if allowed is not None and i not in allowed:
            continue
        if f.constant:
            if f.name in ("t", "dt"):
                out.extend(model.code(f.name, nu) for nu in range(f.components))
            continue
        name = f.name
        if name.startswith("theta"):
            if name.endswith("+"):
                continue  # eliminated in favour of Ψ
            jets = (0,)  # ∂θ is eliminated in favour of Ψ
        else:
            jets = range(b.max_jet + 1)
        if f.aux and not sp.psi_range().start <= int(name[3:]) < sp.psi_range().stop:
            continue
        for comp in range(f.components):
            for j in jets:
                out.append(model.code(name, comp, j))
    return out


def _form_monomials(model, alpha: tuple[int, ...], max_form: int) -> list[tuple]:
    """Normal-form monomials in t_ν, dt_ν (ν in α minus its first vertex) of total degree ≤ dim α + 1."""
    free = alpha[1:]
    top = len(alpha)
    gens = [(model.code("t", nu), 0) for nu in free] + [(model.code("dt", nu), 1) for nu in free]
    out = [()]
    level = [()]
    for _ in range(top):
        nxt = set()
        for m in level:
            for c, odd in gens:
                if odd and c in m:
                    continue
                if m and c < max(m):
                    continue
                s, mm = model.mono_mul(m, (c,))
                if s and sum(1 for x in mm if model._par[x >> 13]) <= max_form:
                    nxt.add(mm)
        level = sorted(nxt)
        out.extend(level)
    return out


def _strip_forms(model, m: tuple) -> tuple:
    const = model._const
    return tuple(c for c in m if not const[c >> 13])


def solve_linear(
    ctx: TWContext,
    target: TWCochain,
    bounds: DegreeBounds | None = None,
    constraint: str = "none",
) -> SolveResult:
    """Find X, Y with (δ+𝗌)X + ∂Y = −target mod F^K on the target's tuples.

    The ansatz lives in Ψ coordinates: field monomials ("cores") reached
    from the target by inverting generator images, times every form
    monomial on the tuple.  With ``constraint="A_star"`` only generators of
    𝔸⋆ enter the cores.  X is unknown on every tuple, its values on a tuple
    and on its facets being tied by the face maps inside one global system.
    The returned X is in the original coordinates and has been
    re-substituted.
    """
    if constraint not in ("none", "A_star"):
        raise ValueError(f"unknown constraint {constraint!r}")
    b = bounds or DegreeBounds()
    sp = ctx.sp
    model = ctx.model
    K = b.K
    if sp.Kw < K + 1:
        raise ValueError(f"working cutoff {sp.Kw} is too tight for K={K} (need K+1)")
    pc = _coords(sp)
    allowed = _a_star_fields(model) if constraint == "A_star" else None
    tgt = {a: truncate(v, K) for a, v in target.values.items()}
    tuples = sorted(tgt, key=lambda a: (len(a), a))
    if all(not v.terms for v in tgt.values()):
        zero = TWCochain(ctx, {a: model.zero() for a in tgt})
        return SolveResult("solved", zero, {a: model.zero() for a in tgt}, 0, 0, 0, "zero target", True)
    tgt_psi = {a: truncate(pc.to_psi(v), K) for a, v in tgt.items()}
    charts = set().union(*tuples)
    chart_codes = _chart_codes(model)

    # cores: chart-form-free monomials, grown from the target's support
    index = _ImageIndex(ctx, pc, [g for g in _ansatz_generators(sp, b, allowed) if not model._const[g >> 13]], K)
    s_core: dict[tuple, dict] = {}

    def core_image(c: tuple) -> dict:
        r = s_core.get(c)
        if r is None:
            r = s_core[c] = truncate(pc.to_psi(sp.s(pc.expand(model.monomial(c)))), K).terms
        return r

    support = set()
    for v in tgt_psi.values():
        support.update(_strip_forms(model, t) for t in v.terms)
    cores: set[tuple] = set()
    frontier = set(support)
    for rnd in range(b.rounds):
        new = set()
        for t in frontier:
            for m in index.preimages(t):
                if m not in cores and _fits(m, tuple(charts), chart_codes) and _mono_ok(model, m, b, allowed):
                    new.add(m)
        cores |= new
        log.info("solve_linear: round %d, %d cores", rnd, len(cores))
        if len(cores) > b.max_unknowns:
            return SolveResult(
                "infeasible_at_bounds", None, None, len(cores), 0, 0,
                f"core basis exceeds max_unknowns={b.max_unknowns}",
            )
        if rnd == b.rounds - 1:
            break
        # δ(φ)·c on a higher simplex must be cancelled by 𝗌 of another core,
        # so the next round inverts the new cores themselves
        frontier = new - support
        support |= frontier

    faces = []
    for hi in tuples:
        if len(hi) > 1:
            for i in range(len(hi)):
                lo = hi[:i] + hi[i + 1:]
                if lo in tgt:
                    faces.append((hi, i, lo))

    solver = SparseSolver()
    cols = ycols = 0
    delta = ctx.delta
    n_slack = 0
    for a in tuples:
        rows_seen: set[tuple] = set(tgt_psi[a].terms)
        forms = _form_monomials(model, a, b.max_form)
        dforms = {f: delta(model.monomial(f)).terms for f in forms}
        for c in sorted(cores):
            if not _fits(c, a, chart_codes):
                continue
            sc = core_image(c)
            for f in forms:
                s_, m = model.mono_mul(f, c)
                if not s_ or not _mono_ok(model, m, b, allowed):
                    continue
                if cols >= b.max_unknowns:
                    return SolveResult(
                        "infeasible_at_bounds", None, None, cols, 0, solver.rank,
                        f"ansatz exceeds max_unknowns={b.max_unknowns}",
                    )
                mono = JetPolynomial(model, {m: Q(s_)})
                # (δ+𝗌)(f·c) = δf·c + (−1)^{|f|} f·𝗌c, all normal-form on α
                # the unknown multiplies f·c = s_·m
                col_terms = _mul(model, dforms[f], {c: Q(1)}, K)
                fsign = -1 if sum(model._par[x >> 13] for x in f) % 2 else 1
                _add_into(col_terms, _mul(model, {f: Q(1)}, sc, K), fsign)
                col = {(a, r): v for r, v in col_terms.items() if v}
                rows_seen.update(col_terms)
                for hi, i, lo in faces:
                    if hi == a:
                        for r, v in truncate(ctx.face(mono, a, i), K).terms.items():
                            key = ("face", hi, i, r)
                            col[key] = col.get(key, 0) + v
                    elif lo == a and model.info(m)[3] < K:
                        key = ("face", hi, i, m)
                        col[key] = col.get(key, 0) - s_
                col = {r: v for r, v in col.items() if v}
                if col:
                    solver.add(("X", a, m, s_), col)
                cols += 1
        # ∂-slack: antiderivatives of every monomial the equations on α can contain
        slack = set()
        for r in rows_seen:
            slack.update(y for y in _antiderivatives(model, r) if _mono_ok(model, y, b, None))
        n_slack += len(slack)
        for m in sorted(slack):
            img = truncate(JetPolynomial(model, _d(model, {m: Q(1)})), K)
            if img.terms:
                solver.add(("Y", a, m, 1), {(a, r): v for r, v in img.terms.items()})
            ycols += 1
    rhs = {(a, r): -c for a, v in tgt_psi.items() for r, c in v.terms.items()}
    info = {"cores": len(cores), "x_columns": cols, "slack": n_slack, "tuples": len(tuples)}
    cols += ycols
    log.info("solve_linear: %d columns, rank %d, %d target terms", cols, solver.rank, len(rhs))
    z = solver.solve(rhs)
    if z is None:
        return SolveResult(
            "infeasible_at_bounds", None, None, cols, len(rhs), solver.rank,
            "no solution inside the enumerated basis", info=info,
        )
    Xv: dict = {a: {} for a in tgt}
    Yv: dict = {a: {} for a in tgt}
    for (kind, a, m, s_), v in z.items():
        (Xv if kind == "X" else Yv)[a][m] = v * s_
    X = TWCochain(ctx, {a: truncate(pc.expand(JetPolynomial(model, t)), K + 1) for a, t in Xv.items()})
    Y = {a: pc.expand(JetPolynomial(model, t)) for a, t in Yv.items()}
    ok = verify_solution(ctx, X, Y, tgt, K)
    status = "solved" if ok else "infeasible_at_bounds"
    return SolveResult(status, X, Y, cols, len(rhs), solver.rank, "" if ok else "re-substitution failed", ok, info)


def verify_solution(ctx: TWContext, X: TWCochain, Y: dict, target: dict, K: int) -> bool:
    """Re-substitute: (δ+𝗌)X + ∂Y + target ∈ F^K, and the faces of X agree mod F^K."""
    d = tw_total_diff(X)
    for a, t in target.items():
        if ctx.sp.check_in_tower(truncate(d.values[a] + Y[a].d() + t, K), K).terms:
            return False
    return not X.face_failures(K)
