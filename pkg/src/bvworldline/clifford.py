"""Spin(9,1) spinors on H ⊗ Λ*R³ with exact integer matrices.

Basis of the 32-dimensional spinor space: index ``16*b + 4*s + q`` where
``b`` is the chirality block (0 for even exterior degree, 1 for odd),
``s`` runs over the exterior monomials of that block and ``q`` over the
quaternion units (1, i, j, k).  Even block monomials: 1, e12, e13, e23;
odd block: e1, e2, e3, e123.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .jet_algebra import JetPolynomial, _add_into, _mul

# exterior monomials as bitmasks over {e1, e2, e3}
EVEN_SUBSETS = (0b000, 0b011, 0b101, 0b110)
ODD_SUBSETS = (0b001, 0b010, 0b100, 0b111)
SUBSETS = EVEN_SUBSETS + ODD_SUBSETS
DIM = 32
HALF = 16
PLUS = +1
MINUS = -1


def basis_index(subset: int, quat: int) -> int:
    return 4 * SUBSETS.index(subset) + quat


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _ext_ops():
    """ε(e_i), ι(e_i) on Λ*R³ in subset order, as 8×8 integer matrices."""
    eps, iota = [], []
    for i in range(3):
        bit = 1 << i
        E = np.zeros((8, 8), dtype=np.int64)
        I = np.zeros((8, 8), dtype=np.int64)
        for col, S in enumerate(SUBSETS):
            sign = -1 if _popcount(S & (bit - 1)) & 1 else 1
            if S & bit:
                I[SUBSETS.index(S ^ bit), col] = sign
            else:
                E[SUBSETS.index(S | bit), col] = sign
        eps.append(E)
        iota.append(I)
    return eps, iota


# quaternion multiplication table: unit a * unit b = sign * unit c
_QMUL = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quat_left(a: int) -> np.ndarray:
    M = np.zeros((4, 4), dtype=np.int64)
    for b in range(4):
        s, c = _QMUL[a, b]
        M[c, b] = s
    return M


def quat_right(a: int) -> np.ndarray:
    M = np.zeros((4, 4), dtype=np.int64)
    for b in range(4):
        s, c = _QMUL[b, a]
        M[c, b] = s
    return M


def _on_spinors(ext: np.ndarray, quat: np.ndarray) -> np.ndarray:
    # index = 4*subset + quat, so the exterior factor is the outer one
    return np.kron(ext, quat)


@dataclass(frozen=True)
class CliffordData:
    gammas: tuple[np.ndarray, ...]
    T: np.ndarray
    eta: tuple[int, ...]
    c_plus: tuple[np.ndarray, ...] = field(repr=False, default=())
    c_minus: tuple[np.ndarray, ...] = field(repr=False, default=())


def _build() -> CliffordData:
    eps, iota = _ext_ops()
    cp = [iota[i] + eps[i] for i in range(3)]
    cm = [iota[i] - eps[i] for i in range(3)]
    one = np.eye(4, dtype=np.int64)
    g = [None] * 10
    g[1] = _on_spinors(cp[0], one)
    for mu, a in ((2, 1), (3, 2), (4, 3)):
        g[mu] = _on_spinors(cm[0], quat_left(a))
    g[5] = _on_spinors(cp[1], one)
    for mu, a in ((6, 1), (7, 2), (8, 3)):
        g[mu] = _on_spinors(cm[1], quat_right(a))
    g[9] = _on_spinors(cp[2], one)
    g[0] = _on_spinors(cm[2], one)
    for m in g:
        m.setflags(write=False)
    eta = []
    Id = np.eye(DIM, dtype=np.int64)
    for mu in range(10):
        sq = g[mu] @ g[mu]
        if np.array_equal(sq, Id):
            eta.append(1)
        elif np.array_equal(sq, -Id):
            eta.append(-1)
        else:
            raise AssertionError(f"gamma^{mu} does not square to a scalar")
    # T(α,β) = ⟨c⁻₁c⁻₂ α, β̄⟩ with the graded inner product of Λ*R³;
    # Re(a b̄) = δ_ab on quaternion units
    c12 = cm[0] @ cm[1]
    T = np.zeros((DIM, DIM), dtype=np.int64)
    for si, S in enumerate(SUBSETS):
        img = c12[:, si]
        for sj, R in enumerate(SUBSETS):
            val = 0
            for ti, U in enumerate(SUBSETS):
                if img[ti]:
                    val += img[ti] * exterior_inner(U, R)
            if val:
                for q in range(4):
                    T[4 * si + q, 4 * sj + q] = val
    T.setflags(write=False)
    return CliffordData(tuple(g), T, tuple(eta), tuple(cp), tuple(cm))


def _wedge_sign(U: int, R: int) -> int:
    """Sign of e_U ∧ e_R relative to the ordered monomial e_{U∪R}."""
    inv = 0
    for r in range(3):
        if R >> r & 1:
            inv += _popcount(U >> (r + 1))
    return -1 if inv & 1 else 1


def exterior_inner(S: int, R: int) -> int:
    """⟨e_S, e_R⟩ = (-1)^{C(k,2)} 𝕋(e_S ∧ e_R) on monomials of Λ*R³."""
    if S & R or (S | R) != 0b111:
        return 0
    k = _popcount(S)
    sign = -1 if (k * (k - 1) // 2) & 1 else 1
    return sign * _wedge_sign(S, R)


@lru_cache(maxsize=1)
def build_gamma() -> CliffordData:
    return _build()


def gammas() -> tuple[np.ndarray, ...]:
    return build_gamma().gammas


def eta() -> tuple[int, ...]:
    return build_gamma().eta


@lru_cache(maxsize=None)
def gamma_antisym(indices: tuple[int, ...]) -> np.ndarray:
    """Antisymmetrized product γ^{μ₁…μₖ} as an exact integer matrix."""
    indices = tuple(indices)
    if len(set(indices)) != len(indices):
        raise ValueError(f"repeated index in {indices}")
    if any(not 0 <= m <= 9 for m in indices):
        raise ValueError(f"index out of range in {indices}")
    k = len(indices)
    if k == 0:
        return np.eye(DIM, dtype=np.int64)
    g = build_gamma().gammas
    acc = np.zeros((DIM, DIM), dtype=np.int64)
    for j, m in enumerate(indices):
        rest = indices[:j] + indices[j + 1:]
        term = g[m] @ gamma_antisym(rest)
        acc += term if j % 2 == 0 else -term
    if np.any(acc % k):
        raise ArithmeticError(f"antisymmetrization of {indices} is not integral")
    out = acc // k
    out.setflags(write=False)
    return out


def binom2(m: int) -> int:
    """C(m,2) = m(m-1)/2 for every integer m."""
    return m * (m - 1) // 2


def check_commute_identity(indices: tuple[int, ...], mu: int) -> bool:
    """γ^{S}γ^μ − (−1)^k γ^μγ^{S} = 2 Σⱼ (−1)^{k−j} η^{μμⱼ} γ^{S∖μⱼ}."""
    g = build_gamma().gammas
    et = build_gamma().eta
    k = len(indices)
    A = gamma_antisym(indices)
    lhs = A @ g[mu] - (-1) ** k * (g[mu] @ A)
    rhs = np.zeros((DIM, DIM), dtype=np.int64)
    for j, mj in enumerate(indices, start=1):
        if mj == mu:
            rest = indices[: j - 1] + indices[j:]
            rhs += 2 * (-1) ** (k - j) * et[mu] * gamma_antisym(rest)
    return bool(np.array_equal(lhs, rhs))


def commute_lemma_failures(k: int, max_tuples: int | None = None) -> list[tuple]:
    """All (indices, μ) at level k violating the commutation lemma."""
    bad = []
    for n, idx in enumerate(combinations(range(10), k)):
        if max_tuples is not None and n >= max_tuples:
            break
        for mu in range(10):
            if not check_commute_identity(idx, mu):
                bad.append((idx, mu))
    return bad


# --------------------------------------------------------------------------
# sparse 16×16 blocks for acting on spinor vectors of polynomials


def block(M: np.ndarray, src: int, dst: int) -> np.ndarray:
    """Sub-block of a 32×32 matrix from chirality ``src`` to chirality ``dst``."""
    r = 0 if dst == PLUS else HALF
    c = 0 if src == PLUS else HALF
    return M[r:r + HALF, c:c + HALF]


def sparse_rows(M: np.ndarray) -> tuple[tuple[tuple[int, int], ...], ...]:
    return tuple(tuple((int(j), int(M[i, j])) for j in np.nonzero(M[i])[0]) for i in range(M.shape[0]))


@lru_cache(maxsize=None)
def gamma_action(indices: tuple[int, ...], src: int) -> tuple[int, tuple]:
    """(target chirality, sparse rows) of γ^{indices} restricted to chirality ``src``."""
    dst = src if len(indices) % 2 == 0 else -src
    return dst, sparse_rows(block(gamma_antisym(tuple(indices)), src, dst))


@lru_cache(maxsize=None)
def pairing_matrix(indices: tuple[int, ...], chi_a: int, chi_b: int) -> tuple:
    """Sparse entries (a, b, value) of 𝖳^{indices}(α, β) for chiralities of α, β."""
    A = gamma_antisym(tuple(indices))
    M = A.T @ build_gamma().T
    sub = block(M, chi_b, chi_a)  # rows: α component, columns: β component
    out = []
    for a in range(HALF):
        for b in np.nonzero(sub[a])[0]:
            out.append((a, int(b), int(sub[a, b])))
    return tuple(out)


def component_label(chirality: int, a: int) -> str:
    names = {0: "1", 1: "i", 2: "j", 3: "k"}
    subs = EVEN_SUBSETS if chirality == PLUS else ODD_SUBSETS
    S = subs[a // 4]
    ext = "".join(str(i + 1) for i in range(3) if S >> i & 1) or "0"
    return f"{names[a % 4]}e{ext}"


# --------------------------------------------------------------------------
# spinors with polynomial components


class SpinorVector:
    """Chirality-tagged 16-component vector of jet polynomials."""

    __slots__ = ("chirality", "comps")

    def __init__(self, chirality: int, comps):
        if chirality not in (PLUS, MINUS):
            raise ValueError("chirality must be +1 or -1")
        comps = tuple(comps)
        if len(comps) != HALF:
            raise ValueError("a spinor has 16 components")
        self.chirality = chirality
        self.comps = comps

    @property
    def model(self):
        return self.comps[0].model

    @classmethod
    def zero(cls, model, chirality: int) -> "SpinorVector":
        return cls(chirality, [model.zero()] * HALF)

    def _same(self, other: "SpinorVector"):
        if other.chirality != self.chirality:
            raise ValueError("chirality mismatch")

    def __add__(self, other: "SpinorVector") -> "SpinorVector":
        self._same(other)
        return SpinorVector(self.chirality, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "SpinorVector") -> "SpinorVector":
        self._same(other)
        return SpinorVector(self.chirality, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self) -> "SpinorVector":
        return SpinorVector(self.chirality, [-a for a in self.comps])

    def scale(self, s) -> "SpinorVector":
        return SpinorVector(self.chirality, [a.scale(s) for a in self.comps])

    def lmul(self, f, cutoff: int | None = None) -> "SpinorVector":
        """Multiply every component by the polynomial ``f`` from the left."""
        return SpinorVector(self.chirality, [f.mul(a, cutoff) for a in self.comps])

    def map(self, fn) -> "SpinorVector":
        return SpinorVector(self.chirality, [fn(a) for a in self.comps])

    def truncate(self, K: int) -> "SpinorVector":
        return self.map(lambda a: a.truncate(K))

    def d(self) -> "SpinorVector":
        return self.map(lambda a: a.d())

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.comps)

    def __eq__(self, other):
        return (
            isinstance(other, SpinorVector)
            and self.chirality == other.chirality
            and all(a == b for a, b in zip(self.comps, other.comps))
        )

    def gamma(self, indices) -> "SpinorVector":
        """γ^{indices} applied to the vector (antisymmetrized product)."""
        dst, rows = gamma_action(tuple(indices), self.chirality)
        return self._apply_rows(dst, rows)

    def matrix(self, M: np.ndarray) -> "SpinorVector":
        """Apply an arbitrary chirality-homogeneous 32×32 integer matrix."""
        for dst in (PLUS, MINUS):
            if np.any(block(M, self.chirality, dst)):
                other = block(M, self.chirality, -dst)
                if np.any(other):
                    raise ValueError("matrix does not preserve chirality blocks")
                return self._apply_rows(dst, sparse_rows(block(M, self.chirality, dst)))
        return SpinorVector.zero(self.model, self.chirality)

    def _apply_rows(self, dst: int, rows) -> "SpinorVector":
        model = self.model
        out = []
        for row in rows:
            acc: dict = {}
            for j, v in row:
                _add_into(acc, self.comps[j].terms, v)
            out.append(JetPolynomial(model, acc))
        return SpinorVector(dst, out)


def slash(coeffs, v: SpinorVector, cutoff: int | None = None) -> SpinorVector:
    """Σ_μ a_μ γ^μ v with the coefficient polynomials a_μ placed on the left."""
    model = v.model
    acc = [dict() for _ in range(HALF)]
    for mu, a in enumerate(coeffs):
        if a.is_zero():
            continue
        g = v.gamma((mu,))
        for i, comp in enumerate(g.comps):
            if comp.terms:
                _add_into(acc[i], _mul(model, a.terms, comp.terms, cutoff))
    return SpinorVector(-v.chirality, [JetPolynomial(model, t) for t in acc])


def pairing(indices, alpha: SpinorVector, beta: SpinorVector, cutoff: int | None = None):
    """𝖳^{indices}(α, β) = 𝖳(γ^{indices} α, β), with components multiplied in order."""
    indices = tuple(indices)
    need = -beta.chirality if len(indices) % 2 == 0 else beta.chirality
    if alpha.chirality != need:
        raise ValueError(f"chirality mismatch for pairing with {len(indices)} indices")
    model = alpha.model
    acc: dict = {}
    for a, b, v in pairing_matrix(indices, alpha.chirality, beta.chirality):
        x = alpha.comps[a].terms
        y = beta.comps[b].terms
        if x and y:
            _add_into(acc, _mul(model, x, y, cutoff), v)
    return JetPolynomial(model, acc)


def pairing_general(M: np.ndarray, alpha: SpinorVector, beta: SpinorVector, cutoff: int | None = None):
    """𝖳(M α, β) for an arbitrary chirality-homogeneous matrix M."""
    Mt = M.T @ build_gamma().T
    sub = block(Mt, beta.chirality, alpha.chirality)
    model = alpha.model
    acc: dict = {}
    for a in range(HALF):
        x = alpha.comps[a].terms
        if not x:
            continue
        for b in np.nonzero(sub[a])[0]:
            y = beta.comps[int(b)].terms
            if y:
                _add_into(acc, _mul(model, x, y, cutoff), int(sub[a, b]))
    return JetPolynomial(model, acc)
