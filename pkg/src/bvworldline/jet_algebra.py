"""Exact graded supercommutative jet algebra.

Generators are the jets ``∂^ℓ ξ`` of the fields and antifields of a model, plus
"constant" generators (simplex coordinates ``t_i``, their differentials
``dt_i``, Chevalley-Eilenberg generators) that the total derivative ignores.
Each generator is packed into a single integer code::

    code = ((field_index << 6 | component) << 6 | jet) << 1 | inverse_bit

so that integer order is the lexicographic order on (field, component, jet),
and a Laurent inverse ``g⁻¹`` sorts directly after ``g``.  A monomial is the
sorted tuple of codes of its factors (repeated for powers); a polynomial is a
dict mapping monomials to exact rationals (``gmpy2.mpq``).
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import gmpy2

Q = gmpy2.mpq

EVEN = 0
ODD = 1

_JET_MAX = 63
_COMP_MAX = 63


class JetAlgebraError(Exception):
    """Base class for errors raised by the jet algebra."""


class ModelError(JetAlgebraError):
    """Invalid field catalog or truncation parameters."""


class ModelMismatch(JetAlgebraError):
    """Operands belong to different models."""


class TowerOverflow(JetAlgebraError):
    """A generator outside the instantiated spinor tower or jet range was requested."""


@dataclass(frozen=True)
class FieldDescriptor:
    name: str
    components: int = 1
    ghost: int = 0
    parity: int = EVEN
    invertible_at_jet0: bool = False
    antifield_of: str | None = None
    # constant generators have no worldline dependence: ∂ annihilates them
    constant: bool = False
    index_style: str = ""
    labels: tuple[str, ...] | None = None
    # auxiliary symbols take part in rewriting only, never in brackets
    aux: bool = False

    @property
    def is_antifield(self) -> bool:
        return self.antifield_of is not None


@dataclass(frozen=True)
class GeneratorDescriptor:
    field: str
    component: int = 0
    jet_order: int = 0


@dataclass(frozen=True)
class TruncationParams:
    """Cutoffs: antifield filtration ``K``, spinor tower ``N``, jet order ``J``."""

    K: int = 6
    N: int = 8
    J: int = 2

    def __post_init__(self):
        if self.K < 1 or self.N < 1 or self.J < 0:
            raise ModelError(f"invalid truncation parameters {self}")


def gen_code(field_index: int, component: int = 0, jet: int = 0) -> int:
    return (((field_index << 6) | component) << 6 | jet) << 1


def code_field(code: int) -> int:
    return code >> 13


def code_component(code: int) -> int:
    return (code >> 7) & _COMP_MAX


def code_jet(code: int) -> int:
    return (code >> 1) & _JET_MAX


class ModelAlgebra:
    """Algebra context: generator order, gradings, Laurent set, caches.

    Read-only after construction apart from memo tables, which only ever
    cache pure functions of their keys.
    """

    def __init__(self, catalog: Iterable[FieldDescriptor], trunc: TruncationParams | None = None):
        fields = tuple(catalog)
        self.trunc = trunc or TruncationParams()
        self.fields = fields
        self.index: dict[str, int] = {}
        for i, f in enumerate(fields):
            if f.name in self.index:
                raise ModelError(f"duplicate field name {f.name!r}")
            if not 1 <= f.components <= _COMP_MAX + 1:
                raise ModelError(f"field {f.name!r}: bad component count {f.components}")
            if f.invertible_at_jet0 and (f.parity != EVEN or f.ghost != 0):
                raise ModelError(f"field {f.name!r}: invertible generators must be even of ghost 0")
            self.index[f.name] = i
        self.partner = [-1] * len(fields)
        for i, f in enumerate(fields):
            if f.antifield_of is None:
                continue
            j = self.index.get(f.antifield_of)
            if j is None:
                raise ModelError(f"antifield {f.name!r} refers to unknown field {f.antifield_of!r}")
            base = fields[j]
            if f.ghost != -1 - base.ghost:
                raise ModelError(
                    f"antifield {f.name!r}: ghost {f.ghost} != -1 - {base.ghost}"
                )
            if f.parity != 1 - base.parity:
                raise ModelError(f"antifield {f.name!r}: parity must be opposite to {base.name!r}")
            if f.components != base.components:
                raise ModelError(f"antifield {f.name!r}: component count differs from {base.name!r}")
            if self.partner[j] != -1:
                raise ModelError(f"field {base.name!r} has two antifields")
            self.partner[i] = j
            self.partner[j] = i
        self._par = [f.parity for f in fields]
        self._gh = [f.ghost for f in fields]
        # antifield weight; negative-ghost auxiliary composites weigh like the antifield they lead with
        self._wt = [(-f.ghost if f.is_antifield or (f.aux and f.ghost < 0) else 0) for f in fields]
        self._const = [f.constant for f in fields]
        self._inv = [f.invertible_at_jet0 for f in fields]
        self._minfo: dict[tuple, tuple] = {}
        self._dcache: dict[tuple, list] = {}
        self._tokens: dict[str, int] | None = None

    # ----------------------------------------------------------------- codes
    def code(self, field: str, component: int = 0, jet: int = 0) -> int:
        fi = self.index[field]
        f = self.fields[fi]
        if not 0 <= component < f.components:
            raise JetAlgebraError(f"{field}: component {component} out of range")
        if jet and f.constant:
            raise JetAlgebraError(f"{field} is constant on the worldline")
        if not 0 <= jet <= _JET_MAX:
            raise TowerOverflow(f"jet order {jet} exceeds {_JET_MAX}")
        return gen_code(fi, component, jet)

    def describe(self, code: int) -> GeneratorDescriptor:
        return GeneratorDescriptor(self.fields[code >> 13].name, code_component(code), code_jet(code))

    def parity_of(self, code: int) -> int:
        return self._par[code >> 13]

    def ghost_of(self, code: int) -> int:
        return self._gh[code >> 13]

    def is_constant(self, code: int) -> bool:
        return self._const[code >> 13]

    def is_antifield_code(self, code: int) -> bool:
        return self.fields[code >> 13].is_antifield

    def partner_code(self, code: int) -> int:
        """Code of the conjugate (field <-> antifield) generator, same component and jet."""
        j = self.partner[code >> 13]
        if j < 0:
            raise JetAlgebraError(f"{self.fields[code >> 13].name} has no conjugate")
        return (j << 13) | (code & 0x1FFF)

    def field_pairs(self) -> list[tuple[int, int]]:
        """(field index, antifield index) for every conjugate pair."""
        return [(i, j) for i, j in enumerate(self.partner) if j >= 0 and not self.fields[i].is_antifield]

    # ------------------------------------------------------------- monomials
    def info(self, m: tuple) -> tuple:
        """(odd codes, parity, ghost, antifield weight, has inverse, max jet)."""
        r = self._minfo.get(m)
        if r is None:
            par, gh, wt = self._par, self._gh, self._wt
            odd = []
            g = w = 0
            hinv = False
            mj = -1
            for c in m:
                fi = c >> 13
                if c & 1:
                    hinv = True
                    g -= gh[fi]
                else:
                    g += gh[fi]
                    w += wt[fi]
                    if par[fi]:
                        odd.append(c)
                if not self._const[fi]:
                    j = (c >> 1) & _JET_MAX
                    if j > mj:
                        mj = j
            r = (tuple(odd), len(odd) & 1, g, w, hinv, mj)
            self._minfo[m] = r
        return r

    def mono_mul(self, m1: tuple, m2: tuple) -> tuple[int, tuple | None]:
        """Product of canonical monomials: (Koszul sign, monomial) or (0, None)."""
        if not m1:
            return 1, m2
        if not m2:
            return 1, m1
        i1 = self.info(m1)
        i2 = self.info(m2)
        o1 = i1[0]
        o2 = i2[0]
        sign = 1
        if o1 and o2:
            n1 = len(o1)
            inv = 0
            for b in o2:
                j = bisect_right(o1, b)
                if j and o1[j - 1] == b:
                    return 0, None
                inv += n1 - j
            if inv & 1:
                sign = -1
        m = tuple(sorted(m1 + m2))
        if i1[4] or i2[4]:
            m = _cancel(m)
        return sign, m

    def mono_partial(self, m: tuple, g: int):
        """Left derivative of a monomial by the generator with (positive) code ``g``."""
        if self._par[g >> 13]:
            try:
                idx = m.index(g)
            except ValueError:
                return None
            par = self._par
            cnt = 0
            for c in m[:idx]:
                if par[c >> 13] and not c & 1:
                    cnt += 1
            return (-1 if cnt & 1 else 1), m[:idx] + m[idx + 1:]
        npos = m.count(g)
        if npos:
            idx = m.index(g)
            return npos, m[:idx] + m[idx + 1:]
        gi = g | 1
        nneg = m.count(gi)
        if nneg:
            idx = m.index(gi)
            return -nneg, m[:idx] + (gi,) + m[idx:]
        return None

    def mono_d(self, m: tuple) -> list:
        """Total derivative of a monomial as a list of (coefficient, monomial)."""
        r = self._dcache.get(m)
        if r is not None:
            return r
        acc: dict[tuple, int] = {}
        const = self._const
        seen = set()
        for c in m:
            base = c & ~1
            if base in seen or const[c >> 13]:
                continue
            seen.add(base)
            if (base >> 1) & _JET_MAX == _JET_MAX:
                raise TowerOverflow("jet order overflow in total derivative")
            p = self.mono_partial(m, base)
            if p is None:
                continue
            s, mm = self.mono_mul((base + 2,), p[1])
            if s:
                acc[mm] = acc.get(mm, 0) + s * p[0]
        r = [(v, k) for k, v in acc.items() if v]
        self._dcache[m] = r
        return r

    def gens_of(self, m: tuple) -> list[int]:
        """Distinct positive generator codes in a monomial, in order."""
        out = []
        last = -1
        for c in m:
            b = c & ~1
            if b != last:
                out.append(b)
                last = b
        return out

    def clear_caches(self):
        self._minfo.clear()
        self._dcache.clear()

    # --------------------------------------------------------- constructors
    def zero(self) -> "JetPolynomial":
        return JetPolynomial(self, {})

    def const(self, value) -> "JetPolynomial":
        v = Q(value)
        return JetPolynomial(self, {(): v} if v else {})

    def one(self) -> "JetPolynomial":
        return self.const(1)

    def gen(self, field: str, component: int = 0, jet: int = 0, power: int = 1) -> "JetPolynomial":
        c = self.code(field, component, jet)
        return self.from_code(c, power)

    def from_code(self, c: int, power: int = 1) -> "JetPolynomial":
        fi = c >> 13
        if power < 0:
            if not (self._inv[fi] and code_jet(c) == 0):
                raise JetAlgebraError(f"{self.fields[fi].name} is not invertible")
            return JetPolynomial(self, {(c | 1,) * (-power): Q(1)})
        if power == 0:
            return self.one()
        if self._par[fi] and power > 1:
            return self.zero()
        return JetPolynomial(self, {(c,) * power: Q(1)})

    def monomial(self, m: tuple, coeff=1) -> "JetPolynomial":
        return JetPolynomial(self, {m: Q(coeff)})


def _cancel(m: tuple) -> tuple:
    out: list[int] = []
    for c in m:
        if c & 1 and out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def build_model(catalog: Iterable[FieldDescriptor], trunc: TruncationParams | None = None) -> ModelAlgebra:
    return ModelAlgebra(catalog, trunc)


# --------------------------------------------------------------------------
# raw dict kernels


def _add_into(acc: dict, terms: dict, scale=1):
    for m, c in terms.items():
        v = acc.get(m)
        v = c * scale if v is None else v + c * scale
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def _mul(model: ModelAlgebra, f: dict, g: dict, cutoff: int | None = None) -> dict:
    acc: dict[tuple, object] = {}
    if not f or not g:
        return acc
    mm = model.mono_mul
    if cutoff is None:
        for m1, c1 in f.items():
            for m2, c2 in g.items():
                s, m = mm(m1, m2)
                if s:
                    v = acc.get(m)
                    acc[m] = s * c1 * c2 if v is None else v + s * c1 * c2
    else:
        info = model.info
        gw = [(m2, c2, info(m2)[3]) for m2, c2 in g.items()]
        for m1, c1 in f.items():
            room = cutoff - info(m1)[3]
            if room <= 0:
                continue
            for m2, c2, w2 in gw:
                if w2 >= room:
                    continue
                s, m = mm(m1, m2)
                if s:
                    v = acc.get(m)
                    acc[m] = s * c1 * c2 if v is None else v + s * c1 * c2
    return {m: c for m, c in acc.items() if c}


def _d(model: ModelAlgebra, f: dict) -> dict:
    acc: dict[tuple, object] = {}
    md = model.mono_d
    for m, c in f.items():
        for k, mm in md(m):
            v = acc.get(mm)
            acc[mm] = k * c if v is None else v + k * c
    return {m: c for m, c in acc.items() if c}


def _partial(model: ModelAlgebra, f: dict, g: int) -> dict:
    acc: dict[tuple, object] = {}
    mp = model.mono_partial
    for m, c in f.items():
        r = mp(m, g)
        if r is None:
            continue
        k, mm = r
        v = acc.get(mm)
        acc[mm] = k * c if v is None else v + k * c
    return {m: c for m, c in acc.items() if c}


def _truncate(model: ModelAlgebra, f: dict, K: int) -> dict:
    info = model.info
    return {m: c for m, c in f.items() if info(m)[3] < K}


# --------------------------------------------------------------------------


class JetPolynomial:
    """Exact rational sum of signed super-monomials over a model's generators."""

    __slots__ = ("model", "terms")

    def __init__(self, model: ModelAlgebra, terms: dict):
        self.model = model
        self.terms = terms

    # arithmetic ------------------------------------------------------------
    def _check(self, other: "JetPolynomial"):
        if other.model is not self.model:
            raise ModelMismatch("polynomials belong to different models")

    def _coerce(self, other) -> "JetPolynomial":
        if isinstance(other, JetPolynomial):
            self._check(other)
            return other
        return self.model.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms)
        return JetPolynomial(self.model, acc)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms, -1)
        return JetPolynomial(self.model, acc)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return JetPolynomial(self.model, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, JetPolynomial):
            self._check(other)
            return JetPolynomial(self.model, _mul(self.model, self.terms, other.terms))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, s) -> "JetPolynomial":
        s = Q(s)
        if not s:
            return self.model.zero()
        return JetPolynomial(self.model, {m: c * s for m, c in self.terms.items()})

    def mul(self, other: "JetPolynomial", cutoff: int | None = None) -> "JetPolynomial":
        """Product, optionally dropping every monomial of antifield weight >= cutoff."""
        self._check(other)
        return JetPolynomial(self.model, _mul(self.model, self.terms, other.terms, cutoff))

    def __pow__(self, n: int):
        r = self.model.one()
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, other):
        if isinstance(other, JetPolynomial):
            return self.model is other.model and self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == self.model.const(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[tuple, object]]:
        return iter(sorted(self.terms.items()))

    def __repr__(self):
        from .textform import serialize

        text = serialize(self)
        if len(text) > 400:
            text = text[:400] + " ..."
        return f"JetPolynomial({text})"

    # gradings ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def gradings(self) -> set[tuple[int, int]]:
        info = self.model.info
        return {(info(m)[2], info(m)[1]) for m in self.terms}

    def ghost(self) -> int:
        g = {gh for gh, _ in self.gradings()}
        if len(g) != 1:
            raise JetAlgebraError(f"not ghost-homogeneous: {sorted(g)}")
        return g.pop()

    def parity(self) -> int:
        p = {pa for _, pa in self.gradings()}
        if len(p) > 1:
            raise JetAlgebraError("not parity-homogeneous")
        return p.pop() if p else EVEN

    def is_homogeneous(self) -> bool:
        return len(self.gradings()) <= 1

    def parity_parts(self) -> dict[int, "JetPolynomial"]:
        info = self.model.info
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(info(m)[1], {})[m] = c
        return {p: JetPolynomial(self.model, t) for p, t in out.items()}

    def weight(self) -> int:
        """Minimal antifield weight over the monomials (0 for the zero polynomial)."""
        info = self.model.info
        return min((info(m)[3] for m in self.terms), default=0)

    def max_jet(self) -> int:
        info = self.model.info
        return max((info(m)[5] for m in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get((), Q(0))

    def generators(self) -> list[int]:
        seen = set()
        for m in self.terms:
            for c in m:
                seen.add(c & ~1)
        return sorted(seen)

    # calculus ---------------------------------------------------------------
    def d(self) -> "JetPolynomial":
        return total_derivative(self)

    def truncate(self, K: int) -> "JetPolynomial":
        return truncate(self, K)

    def subs_zero(self, codes: Iterable[int]) -> "JetPolynomial":
        """Set the given generators to zero."""
        kill = set(codes)
        return JetPolynomial(
            self.model,
            {m: c for m, c in self.terms.items() if not any((x & ~1) in kill for x in m)},
        )


# --------------------------------------------------------------------------
# operations


def poly_arith(f: JetPolynomial, g, op: str) -> JetPolynomial:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown operation {op!r}")


def total_derivative(f: JetPolynomial) -> JetPolynomial:
    return JetPolynomial(f.model, _d(f.model, f.terms))


def d_power(f: JetPolynomial, k: int) -> JetPolynomial:
    t = f.terms
    for _ in range(k):
        t = _d(f.model, t)
    return JetPolynomial(f.model, t)


def partial_derivative(f: JetPolynomial, g: GeneratorDescriptor | int, side: str | None = None) -> JetPolynomial:
    """Graded left derivative with respect to a single generator.

    ``side`` selects the field ("field") or its antifield ("antifield") when
    ``g`` names a field; when ``g`` is a descriptor of an antifield directly,
    ``side`` may be omitted.
    """
    model = f.model
    if isinstance(g, GeneratorDescriptor):
        code = model.code(g.field, g.component, g.jet_order)
        if side == "antifield" and not model.is_antifield_code(code):
            code = model.partner_code(code)
    else:
        code = g & ~1
    return JetPolynomial(model, _partial(model, f.terms, code))


def _variational(model: ModelAlgebra, f: dict, base: int, maxjet: int | None = None) -> dict:
    if maxjet is None:
        info = model.info
        maxjet = max((info(m)[5] for m in f), default=-1)
    r: dict = {}
    for k in range(maxjet, -1, -1):
        pk = _partial(model, f, base + 2 * k)
        if r:
            acc = dict(pk)
            _add_into(acc, _d(model, r), -1)
            r = acc
        else:
            r = pk
    return r


def variational_derivative(f: JetPolynomial, field: str | int, component: int = 0, side: str = "field") -> JetPolynomial:
    """Euler-Lagrange derivative Σ_k (-∂)^k ∂/∂(∂^k ξ)."""
    model = f.model
    if isinstance(field, str):
        code = model.code(field, component)
    else:
        code = field & ~1
    if side == "antifield" and not model.is_antifield_code(code):
        code = model.partner_code(code)
    return JetPolynomial(model, _variational(model, f.terms, code))


def truncate(f: JetPolynomial, K: int) -> JetPolynomial:
    """Drop every monomial of antifield weight >= K (reduce modulo F^K)."""
    if K < 0:
        raise ValueError("K must be >= 0")
    return JetPolynomial(f.model, _truncate(f.model, f.terms, K))


def in_filtration(f: JetPolynomial, K: int) -> bool:
    return not _truncate(f.model, f.terms, K)


class Exactness(NamedTuple):
    exact: bool
    witness: JetPolynomial | None
    reason: str = ""


def _antiderivative(model: ModelAlgebra, A: dict, u: int) -> dict:
    """Y with ∂Y/∂u = A for the generator ``u``; raises ValueError on obstruction."""
    if model.parity_of(u):
        for m in A:
            if u in m:
                raise ValueError("odd generator repeated in top-order coefficient")
        return _mul(model, {(u,): Q(1)}, A)
    out: dict = {}
    ui = u | 1
    for m, c in A.items():
        j = m.count(u) - m.count(ui)
        if j == -1:
            raise ValueError("logarithmic term")
        s, mm = model.mono_mul(m, (u,))
        out[mm] = out.get(mm, 0) + c / (j + 1)
    return {m: c for m, c in out.items() if c}


def is_total_derivative(f: JetPolynomial) -> Exactness:
    """Decide f ∈ ∂A by formal integration of the jet tower, peeling top jets."""
    model = f.model
    info = model.info
    rest = dict(f.terms)
    Y: dict = {}
    if rest.get(()):
        return Exactness(False, None, "nonzero constant term: not decidable without constant")
    while rest:
        top = max(info(m)[5] for m in rest)
        if top <= 0:
            break
        tops = sorted(
            {c & ~1 for m in rest for c in m if not model.is_constant(c) and code_jet(c) == top}
        )
        for v in tops:
            A = _partial(model, rest, v)
            if not A:
                continue
            if any(info(m)[5] >= top for m in A):
                return Exactness(False, None, "nonlinear in top-order jets")
            try:
                Y1 = _antiderivative(model, A, v - 2)
            except ValueError as exc:
                return Exactness(False, None, str(exc))
            _add_into(Y, Y1)
            _add_into(rest, _d(model, Y1), -1)
        if any(info(m)[5] >= top for m in rest):
            return Exactness(False, None, "top-order jets do not integrate")
    if rest:
        if all(info(m)[5] < 0 for m in rest):
            return Exactness(False, None, "constant remainder")
        return Exactness(False, None, "nonzero remainder without derivatives")
    W = JetPolynomial(model, Y)
    assert _d(model, Y) == {m: c for m, c in f.terms.items() if c}
    return Exactness(True, W, "")


def equal_mod_d(f: JetPolynomial, g: JetPolynomial, K: int | None = None) -> Exactness:
    """Test ∫f = ∫g, optionally modulo F^K."""
    h = f - g
    if K is not None:
        h = truncate(h, K)
    return is_total_derivative(h)
