"""The particle and the superparticle in signature (9,1).

Both models share one field catalog layout.  Constant generators come first:
simplex coordinates ``t_ν`` and their differentials ``dt_ν`` (labelled by
the chart index ν ∈ {0..9}), and the Chevalley-Eilenberg generators
``eps_μν``.  Then the particle fields x^μ, p_μ, e, c with their
antifields, the spinor towers θ_n with Darboux antifields, and finally the
auxiliary symbols ``Psi{n}`` used only when rewriting into Ψ normal form.

The spinor antifield generators ``theta{n}+.B`` are Darboux partners of
``theta{n}.B``; the spinor θ⁺_n of opposite chirality is recovered through
the pairing, 𝖳(θ⁺_n, β) = Σ_B w_B β^B.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from . import clifford as cl
from .brackets import EvolutionaryVF, Functional, hamiltonian_vf
from .clifford import HALF, MINUS, PLUS, SpinorVector, binom2, pairing, pairing_general, slash
from .jet_algebra import (
    EVEN,
    ODD,
    FieldDescriptor,
    JetAlgebraError,
    JetPolynomial,
    ModelAlgebra,
    ModelError,
    Q,
    TowerOverflow,
    TruncationParams,
    build_model,
    truncate,
)

DIM = 10
TOWER_MARGIN = 4
LORENTZ_PAIRS = tuple(combinations(range(DIM), 2))
LORENTZ_LABELS = tuple(f"{a}{b}" for a, b in LORENTZ_PAIRS)


def lorentz_index(mu: int, nu: int) -> tuple[int, int]:
    """(component of eps, sign) for the antisymmetric label (μ, ν)."""
    if mu == nu:
        raise ValueError("ε_μμ vanishes")
    if mu < nu:
        return LORENTZ_PAIRS.index((mu, nu)), 1
    return LORENTZ_PAIRS.index((nu, mu)), -1


def theta_chirality(n: int) -> int:
    return PLUS if n % 2 == 0 else MINUS


def psi_chirality(n: int) -> int:
    return PLUS if n % 2 == 0 else MINUS


def _constant_fields(forms: bool, ce: bool) -> list[FieldDescriptor]:
    out = []
    if forms:
        out.append(FieldDescriptor("t", DIM, 0, EVEN, constant=True, index_style="_"))
        out.append(FieldDescriptor("dt", DIM, 1, ODD, constant=True, index_style="_"))
    if ce:
        out.append(
            FieldDescriptor("eps", len(LORENTZ_PAIRS), 1, ODD, constant=True, index_style="_", labels=LORENTZ_LABELS)
        )
    return out


def _particle_fields(p_invertible: bool) -> list[FieldDescriptor]:
    return [
        FieldDescriptor("x", DIM, 0, EVEN, index_style="^"),
        FieldDescriptor("p", DIM, 0, EVEN, invertible_at_jet0=p_invertible, index_style="_"),
        FieldDescriptor("e", 1, 0, EVEN, invertible_at_jet0=True),
        FieldDescriptor("c", 1, 1, ODD),
        FieldDescriptor("x+", DIM, -1, ODD, antifield_of="x", index_style="_"),
        FieldDescriptor("p+", DIM, -1, ODD, antifield_of="p", index_style="^"),
        FieldDescriptor("e+", 1, -1, ODD, antifield_of="e"),
        FieldDescriptor("c+", 1, -2, EVEN, antifield_of="c"),
    ]


def particle_catalog(forms: bool = False, ce: bool = False) -> list[FieldDescriptor]:
    return _constant_fields(forms, ce) + _particle_fields(False)


def superparticle_catalog(
    N: int, forms: bool = True, ce: bool = True, aux: bool = True, psi_top: int | None = None
) -> list[FieldDescriptor]:
    out = _constant_fields(forms, ce) + _particle_fields(True)
    P = N if psi_top is None else psi_top
    for n in range(N + 1):
        out.append(FieldDescriptor(f"theta{n}", HALF, n, (n + 1) % 2, index_style="."))
    for n in range(N + 1):
        out.append(FieldDescriptor(f"theta{n}+", HALF, -1 - n, n % 2, antifield_of=f"theta{n}", index_style="."))
    if aux:
        for n in range(-P - 1, P - 1):
            out.append(FieldDescriptor(f"Psi{n}", HALF, n, (n + 1) % 2, index_style=".", aux=True))
    return out


class _Fields:
    """Shared accessors for the particle fields."""

    model: ModelAlgebra

    @cached_property
    def eta(self) -> tuple[int, ...]:
        return cl.eta()

    def g(self, name: str, comp: int = 0, jet: int = 0) -> JetPolynomial:
        return self.model.gen(name, comp, jet)

    def x(self, mu, jet=0):
        return self.g("x", mu, jet)

    def p(self, mu, jet=0):
        return self.g("p", mu, jet)

    def xp(self, mu, jet=0):
        return self.g("x+", mu, jet)

    def pp(self, mu, jet=0):
        return self.g("p+", mu, jet)

    def e(self, jet=0):
        return self.g("e", 0, jet)

    def e_inv(self):
        return self.model.gen("e", 0, 0, power=-1)

    def c(self, jet=0):
        return self.g("c", 0, jet)

    def ep(self, jet=0):
        return self.g("e+", 0, jet)

    def cp(self, jet=0):
        return self.g("c+", 0, jet)

    def t(self, nu):
        return self.g("t", nu)

    def dt(self, nu):
        return self.g("dt", nu)

    def eps(self, mu, nu) -> JetPolynomial:
        comp, sign = lorentz_index(mu, nu)
        return self.g("eps", comp).scale(sign)

    def pp_sq(self) -> JetPolynomial:
        """η^{μν} p_μ p_ν."""
        acc = self.model.zero()
        for mu in range(DIM):
            acc = acc + (self.p(mu) * self.p(mu)).scale(self.eta[mu])
        return acc

    def G(self) -> JetPolynomial:
        """The covariance density x⁺_μ p⁺^μ + e c⁺."""
        acc = self.e() * self.cp()
        for mu in range(DIM):
            acc = acc + self.xp(mu) * self.pp(mu)
        return acc

    def D_particle(self) -> JetPolynomial:
        acc = -(self.e() * self.ep(1)) + self.cp() * self.c(1)
        for mu in range(DIM):
            acc = acc + self.xp(mu) * self.x(mu, 1) + self.pp(mu) * self.p(mu, 1)
        return acc

    def S_particle(self) -> JetPolynomial:
        S0 = self.pp_sq().mul(self.e()).scale(Q(-1, 2))
        for mu in range(DIM):
            S0 = S0 + self.p(mu) * self.x(mu, 1)
        gauge = self.ep(1)
        for mu in range(DIM):
            gauge = gauge - (self.xp(mu) * self.p(mu)).scale(self.eta[mu])
        return S0 + gauge * self.c()


@dataclass
class ParticleModel(_Fields):
    model: ModelAlgebra
    S: JetPolynomial = field(init=False)
    D: JetPolynomial = field(init=False)

    def __post_init__(self):
        self.S = self.S_particle()
        self.D = self.D_particle()

    @cached_property
    def G_density(self) -> JetPolynomial:
        return self.G()

    @cached_property
    def s(self) -> EvolutionaryVF:
        """s₍₀₎ + s₍₁₎ from its explicit generator images."""
        return EvolutionaryVF(self.model, self.explicit_s_images(), ODD, 1, name="s")

    @cached_property
    def s_hamiltonian(self) -> EvolutionaryVF:
        return hamiltonian_vf(Functional(self.S))

    def explicit_s_images(self) -> dict[int, JetPolynomial]:
        m = self.model
        eta = self.eta
        im: dict[int, JetPolynomial] = {}
        for mu in range(DIM):
            im[m.code("x", mu)] = -(self.c() * self.p(mu)).scale(eta[mu])
            im[m.code("x+", mu)] = -self.p(mu, 1)
            im[m.code("p+", mu)] = (
                self.x(mu, 1)
                - (self.e() * self.p(mu)).scale(eta[mu])
                + (self.c() * self.xp(mu)).scale(eta[mu])
            )
        im[m.code("e")] = -self.c(1)
        im[m.code("e+")] = self.pp_sq().scale(Q(-1, 2))
        cplus = self.ep(1)
        for mu in range(DIM):
            cplus = cplus - (self.xp(mu) * self.p(mu)).scale(eta[mu])
        im[m.code("c+")] = cplus
        return im

    @property
    def s0(self) -> EvolutionaryVF:
        """s₍₀₎ alone (the differential of S₍₀₎)."""
        m = self.model
        eta = self.eta
        im = {m.code("e+"): self.pp_sq().scale(Q(-1, 2))}
        for mu in range(DIM):
            im[m.code("x+", mu)] = -self.p(mu, 1)
            im[m.code("p+", mu)] = self.x(mu, 1) - (self.e() * self.p(mu)).scale(eta[mu])
        return EvolutionaryVF(m, im, ODD, 1, name="s0")


def particle_model(trunc: TruncationParams | None = None, forms: bool = False) -> ParticleModel:
    return ParticleModel(build_model(particle_catalog(forms=forms), trunc or TruncationParams(K=6, N=1, J=2)))


class SuperparticleModel(_Fields):
    """Superparticle algebra with the differential 𝗌 given on all generators.

    Images are computed modulo F^{work_cutoff}; ``work_cutoff`` defaults to
    K+1, which is what makes every identity reported mod F^K exact, since
    𝗌 lowers antifield weight by at most one.
    """

    def __init__(self, trunc: TruncationParams, work_cutoff: int | None = None, charts: tuple[int, ...] | None = None):
        if trunc.N < trunc.K + 2:
            raise ModelError(f"tower cutoff N={trunc.N} must be at least K+2={trunc.K + 2}")
        self.trunc = trunc
        self.K = trunc.K
        self.N = trunc.N
        self.Kw = trunc.K + 1 if work_cutoff is None else work_cutoff
        if self.Kw > self.N - 1:
            raise ModelError(f"working cutoff {self.Kw} needs N >= {self.Kw + 1}")
        self.charts = tuple(range(DIM)) if charts is None else tuple(charts)
        # shadow levels above N let intermediate images be formed; results
        # are screened by check_in_tower, so nothing is silently dropped
        self.N_shadow = trunc.N + TOWER_MARGIN
        self.model = build_model(superparticle_catalog(self.N_shadow, psi_top=trunc.N), trunc)
        self._theta_cache: dict = {}
        self._psi_cache: dict = {}
        self._splus_cache: dict = {}
        self._stheta_cache: dict = {}
        self._P = {chi: self._pairing_block(chi) for chi in (PLUS, MINUS)}
        self.s = EvolutionaryVF(self.model, self._s_image, ODD, 1, cutoff=self.Kw, name="s")

    # spinor fields --------------------------------------------------------
    def _pairing_block(self, chi: int) -> np.ndarray:
        """P with 𝖳(a, b) = Σ a_A P[A,B] b_B for a of chirality -chi, b of chirality chi."""
        P = np.zeros((HALF, HALF), dtype=np.int64)
        for a, b, v in cl.pairing_matrix((), -chi, chi):
            P[a, b] = v
        if not np.array_equal(P @ P.T, np.eye(HALF, dtype=np.int64)):
            raise AssertionError("pairing block is not a signed permutation")
        return P

    def _check_tower(self, n: int, top: int | None = None):
        top = self.N if top is None else top
        if not 0 <= n <= top:
            raise TowerOverflow(f"θ_{n} is outside the instantiated tower 0..{top}")

    def theta(self, n: int, jet: int = 0, shadow: bool = False) -> SpinorVector:
        self._check_tower(n, self.N_shadow if shadow else None)
        key = ("t", n, jet)
        v = self._theta_cache.get(key)
        if v is None:
            v = SpinorVector(theta_chirality(n), [self.g(f"theta{n}", A, jet) for A in range(HALF)])
            self._theta_cache[key] = v
        return v

    def w(self, n: int, jet: int = 0) -> SpinorVector:
        """Darboux antifield generators of θ_n, indexed like θ_n."""
        self._check_tower(n)
        return SpinorVector(theta_chirality(n), [self.g(f"theta{n}+", A, jet) for A in range(HALF)])

    def theta_plus(self, n: int, jet: int = 0) -> SpinorVector:
        key = ("tp", n, jet)
        v = self._theta_cache.get(key)
        if v is None:
            chi = theta_chirality(n)
            v = self.w(n, jet).matrix(self._embed(self._P[chi], chi, -chi))
            self._theta_cache[key] = v
        return v

    @staticmethod
    def _embed(B: np.ndarray, src: int, dst: int) -> np.ndarray:
        M = np.zeros((cl.DIM, cl.DIM), dtype=np.int64)
        r = 0 if dst == PLUS else HALF
        c = 0 if src == PLUS else HALF
        M[r:r + HALF, c:c + HALF] = B
        return M

    def w_from_theta_plus(self, v: SpinorVector, n: int) -> SpinorVector:
        """Invert θ⁺ = P w: w = Pᵀ θ⁺."""
        chi = theta_chirality(n)
        return v.matrix(self._embed(self._P[chi].T, -chi, chi))

    def psi(self, n: int) -> SpinorVector:
        """The composite field Ψ_n."""
        if not -self.N - 1 <= n <= self.N - 2:
            raise TowerOverflow(f"Ψ_{n} is outside the representable range [{-self.N - 1}, {self.N - 2}]")
        v = self._psi_cache.get(n)
        if v is not None:
            return v
        Kw = self.Kw
        if n < -1:
            v = self.theta_plus(-n - 1)
            if binom2(n + 1) % 2:
                v = -v
        elif n == -1:
            v = (
                self.theta_plus(0)
                + slash(self.xps(), self.theta(0), Kw).scale(Q(1, 2))
                + self.theta(1).lmul(self.cp(), Kw).scale(2)
            )
        else:
            v = (
                self.theta(n, 1)
                + slash(self.xps(), self.theta(n + 1), Kw).scale(-1 if n % 2 == 0 else 1)
                + self.theta(n + 2).lmul(self.cp(), Kw).scale(2)
            )
        v = v.truncate(Kw)
        self._psi_cache[n] = v
        return v

    def psi_range(self) -> range:
        return range(-self.N - 1, self.N - 1)

    def xps(self) -> list[JetPolynomial]:
        return [self.xp(mu) for mu in range(DIM)]

    def ps(self) -> list[JetPolynomial]:
        return [self.p(mu) for mu in range(DIM)]

    # the differential ------------------------------------------------------
    def _T(self, idx, a: SpinorVector, b: SpinorVector) -> JetPolynomial:
        return pairing(idx, a, b, self.Kw)

    def _s_theta_vec(self, n: int) -> SpinorVector:
        v = self._stheta_cache.get(n)
        if v is None:
            if n + 2 > self.N_shadow:
                raise TowerOverflow(f"𝗌θ_{n} needs θ_{n + 2}, beyond the shadow tower {self.N_shadow}")
            sign = 1 if (n + 1) % 2 == 0 else -1
            v = slash(self.ps(), self.theta(n + 1, shadow=True), self.Kw).scale(sign)
            v = v - self.theta(n + 2, shadow=True).lmul(self.ep(), self.Kw).scale(2)
            self._stheta_cache[n] = v
        return v

    def s_theta_plus_vec(self, n: int) -> SpinorVector:
        """𝗌θ⁺_n as a spinor (opposite chirality to θ_n)."""
        v = self._splus_cache.get(n)
        if v is not None:
            return v
        Kw = self.Kw
        if n == 0:
            core = slash(self.ps(), self.psi(0), Kw) - self.psi(1).lmul(self.ep(), Kw).scale(2)
            corr = slash(self.xps(), self.theta(0), Kw).scale(Q(1, 2)) + self.theta(1).lmul(self.cp(), Kw).scale(2)
            v = core - corr.map(lambda f: self.s(f))
        else:
            sign = -1 if (n * (n + 1) // 2) % 2 else 1
            inner = slash(self.ps(), self.psi(-n), Kw).scale(-1 if n % 2 else 1) - self.psi(1 - n).lmul(self.ep(), Kw).scale(2)
            v = inner.scale(sign)
        v = v.truncate(Kw)
        self._splus_cache[n] = v
        return v

    def _s_image(self, code: int) -> JetPolynomial | None:
        model = self.model
        f = model.fields[code >> 13]
        comp = (code >> 7) & 63
        name = f.name
        Kw = self.Kw
        eta = self.eta
        if f.constant:
            return None
        if f.aux:
            raise JetAlgebraError("𝗌 is not defined on auxiliary Ψ symbols")
        if name == "p":
            return None
        if name == "x+":
            return -self.p(comp, 1)
        if name == "e+":
            return self.pp_sq().scale(Q(-1, 2))
        if name == "c+":
            acc = self.ep(1)
            for mu in range(DIM):
                acc = acc - (self.xp(mu) * self.p(mu)).scale(eta[mu])
            return acc
        th0, th1, th2 = self.theta(0), self.theta(1), self.theta(2)
        if name == "x":
            mu = comp
            acc = -(self.c() * self.p(mu)).scale(eta[mu])
            g = cl.gammas()
            for nu in range(DIM):
                acc = acc + self.p(nu).mul(pairing_general(g[nu] @ g[mu], th0, th1, Kw), Kw).scale(Q(1, 2))
            acc = acc + self.ep().mul(self._T((mu,), th1, th1) - self._T((mu,), th0, th2), Kw)
            return acc.truncate(Kw)
        if name == "c":
            acc = self.model.zero()
            for mu in range(DIM):
                acc = acc - self.p(mu).mul(self._T((mu,), th1, th1), Kw)
            acc = acc - self.ep().mul(self._T((), th1, th2), Kw).scale(4)
            return acc.truncate(Kw)
        if name == "e":
            acc = -self.c(1)
            for mu in range(DIM):
                acc = acc + self.xp(mu).mul(self._T((mu,), th1, th1), Kw)
            acc = acc - self.cp().mul(self._T((), th1, th2), Kw).scale(4)
            for n in range(0, Kw):
                sign = -1 if binom2(n) % 2 else 1
                acc = acc + self._T((), self.psi(-n), self.theta(n + 1)).scale(2 * sign)
            return acc.truncate(Kw)
        if name == "p+":
            mu = comp
            # the particle term η^{μν} c x⁺_ν is kept: s² fails without it (see ledger)
            acc = self.x(mu, 1) - (self.e() * self.p(mu)).scale(eta[mu])
            acc = acc + (self.c() * self.xp(mu)).scale(eta[mu])
            g = cl.gammas()
            for nu in range(DIM):
                acc = acc + self.xp(nu).mul(pairing_general(g[nu] @ g[mu], th0, th1, Kw), Kw).scale(Q(1, 2))
            acc = acc - self.cp().mul(self._T((mu,), th1, th1), Kw) + self.cp().mul(self._T((mu,), th0, th2), Kw)
            acc = acc + self._T((mu,), self.psi(0), th0).scale(Q(1, 2))
            for n in range(1, Kw):
                sign = -1 if binom2(n) % 2 else 1
                acc = acc + self._T((mu,), self.psi(-n), self.theta(n)).scale(sign)
            return acc.truncate(Kw)
        if name.startswith("theta"):
            if name.endswith("+"):
                n = int(name[5:-1])
                if n >= Kw:
                    return None
                wv = self.w_from_theta_plus(self.s_theta_plus_vec(n), n)
                return wv.comps[comp]
            n = int(name[5:])
            return self._s_theta_vec(n).comps[comp]
        raise JetAlgebraError(f"no 𝗌-image for field {name!r}")

    @cached_property
    def _shadow_fields(self) -> frozenset[int]:
        m = self.model
        out = set()
        for n in range(self.N + 1, self.N_shadow + 1):
            out.add(m.index[f"theta{n}"])
            out.add(m.index[f"theta{n}+"])
        return frozenset(out)

    def uses_shadow(self, f: JetPolynomial, K: int | None = None) -> bool:
        K = self.K if K is None else K
        sh = self._shadow_fields
        info = self.model.info
        for mono in f.terms:
            if info(mono)[3] < K and any((c >> 13) in sh for c in mono):
                return True
        return False

    def check_in_tower(self, f: JetPolynomial, K: int | None = None) -> JetPolynomial:
        """Truncate to F^K and raise TowerOverflow if θ_n with n > N survives."""
        K = self.K if K is None else K
        f = truncate(f, K)
        if self.uses_shadow(f, K):
            raise TowerOverflow(f"result involves θ_n with n > N={self.N} below antifield weight {K}")
        return f

    def generator_codes(self, max_theta: int | None = None, max_theta_plus: int | None = None) -> list[int]:
        """Jet-0 codes of every non-constant, non-auxiliary generator."""
        m = self.model
        out = []
        top = self.N if max_theta is None else max_theta
        topp = self.N if max_theta_plus is None else max_theta_plus
        for fi, f in enumerate(m.fields):
            if f.constant or f.aux:
                continue
            if f.name.startswith("theta"):
                n = int(f.name[5:].rstrip("+"))
                if n > (topp if f.name.endswith("+") else top):
                    continue
            for comp in range(f.components):
                out.append(m.code(f.name, comp))
        return out

    # named densities ---------------------------------------------------------
    def D(self, full: bool = True) -> JetPolynomial:
        """𝖣 = D_particle + Σ_n 𝖳(θ⁺_n, ∂θ_n); the tower sum runs over all instantiated n."""
        acc = dict(self.D_particle().terms)
        top = self.N if full else min(self.N, self.Kw - 2)
        from .jet_algebra import _add_into, _mul

        for n in range(top + 1):
            w = self.w(n)
            th = self.theta(n, 1)
            for A in range(HALF):
                _add_into(acc, _mul(self.model, w.comps[A].terms, th.comps[A].terms))
        return JetPolynomial(self.model, acc)

    def Q_spinor(self) -> SpinorVector:
        """Supersymmetry charge Q = θ⁺₀ − ½ x⁺_μ γ^μ θ₀ ∈ 𝕊₋."""
        return self.theta_plus(0) - slash(self.xps(), self.theta(0), self.Kw).scale(Q(1, 2))

    def sQ_expected(self) -> SpinorVector:
        """∂(p_μγ^μθ₀ + 2e⁺θ₁)."""
        v = slash(self.ps(), self.theta(0), self.Kw) + self.theta(1).lmul(self.ep(), self.Kw).scale(2)
        return v.d()

    def M(self, mu: int, nu: int) -> JetPolynomial:
        """Lorentz current M^{μν}.

        ``a^{[μ} b^{ν]}`` is the plain antisymmetrization a^μ b^ν − a^ν b^μ,
        and the tower term carries the spinor generator ½γ^{μν}:
        M^{μν} = η^{λ[μ}x^{ν]}x⁺_λ − η^{λ[μ}p⁺^{ν]}p_λ − ½ Σ_n 𝖳^{μν}(θ⁺_n, θ_n).
        This is the normalization for which 𝗌M^{μν} ∈ im ∂ and the currents
        close on so(9,1) with unit structure constants.
        """
        if mu == nu:
            return self.model.zero()
        if mu > nu:
            return -self.M(nu, mu)
        key = (mu, nu)
        cache = self.__dict__.setdefault("_M_cache", {})
        if key in cache:
            return cache[key]
        eta = self.eta
        acc = (
            (self.x(nu) * self.xp(mu)).scale(eta[mu])
            - (self.x(mu) * self.xp(nu)).scale(eta[nu])
            - (self.pp(nu) * self.p(mu)).scale(eta[mu])
            + (self.pp(mu) * self.p(nu)).scale(eta[nu])
        )
        from .jet_algebra import _add_into

        terms = dict(acc.terms)
        for n in range(self.N + 1):
            _add_into(terms, pairing((mu, nu), self.theta_plus(n), self.theta(n)).terms, Q(-1, 2))
        out = JetPolynomial(self.model, terms)
        cache[key] = out
        return out

    def B(self, S: tuple[int, ...], shift: int | None = None) -> JetPolynomial:
        """Σ_n (−1)^{C(n,2)} 𝖳^{S}(Ψ_{−n}, Ψ_{n−|S|−1}) mod F^{work cutoff}."""
        k = len(S) - 1 if shift is None else shift
        acc: dict = {}
        from .jet_algebra import _add_into

        lo, hi = self.psi_range().start, self.psi_range().stop - 1
        for n in range(-hi, -lo + 1):
            a, b = -n, n - k - 2
            if not (lo <= a <= hi and lo <= b <= hi):
                continue
            if max(0, -a) + max(0, -b) >= self.Kw:
                continue
            sign = -1 if binom2(n) % 2 else 1
            _add_into(acc, pairing(S, self.psi(a), self.psi(b), self.Kw).terms, sign)
        return JetPolynomial(self.model, acc)

    def B_range_complete(self, k: int) -> bool:
        """True when every n-term of B_k with weight below the working cutoff is representable."""
        lo, hi = -self.N - 1, self.N - 2
        for n in range(-3 * self.N, 3 * self.N):
            a, b = -n, n - k - 2
            if max(0, -a) + max(0, -b) >= self.Kw:
                continue
            if not (lo <= a <= hi and lo <= b <= hi):
                return False
        return True


def superparticle_model(trunc: TruncationParams | None = None, charts=None, work_cutoff: int | None = None) -> SuperparticleModel:
    return SuperparticleModel(trunc or TruncationParams(K=6, N=8, J=2), work_cutoff, charts)
