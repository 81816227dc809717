"""Soloviev and Batalin-Vilkovisky antibrackets, evolutionary vector fields."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .jet_algebra import (
    JetAlgebraError,
    JetPolynomial,
    ModelAlgebra,
    ModelMismatch,
    _add_into,
    _d,
    _mul,
    _partial,
    _variational,
    code_jet,
    is_total_derivative,
    truncate,
)


def _sign(e: int) -> int:
    return -1 if e & 1 else 1


def _by_parity(f: JetPolynomial) -> list[tuple[int, dict]]:
    info = f.model.info
    parts: dict[int, dict] = {}
    for m, c in f.terms.items():
        parts.setdefault(info(m)[1], {})[m] = c
    return sorted(parts.items())


def _jets_by_slot(model: ModelAlgebra, f: dict) -> dict[int, set[int]]:
    """Map base code (jet 0) -> set of jet orders present in f."""
    out: dict[int, set[int]] = {}
    const = model._const
    for m in f:
        for c in m:
            if const[c >> 13]:
                continue
            j = (c >> 1) & 63
            base = (c & ~1) - 2 * j
            out.setdefault(base, set()).add(j)
    return out


def _dpow(model: ModelAlgebra, f: dict, k: int) -> dict:
    for _ in range(k):
        f = _d(model, f)
    return f


def _soloviev_homog(model: ModelAlgebra, f: dict, pf: int, g: dict, cutoff: int | None) -> dict:
    out: dict = {}
    fs = _jets_by_slot(model, f)
    gs = _jets_by_slot(model, g)
    par = model._par
    for base_f, kset in fs.items():
        fi = base_f >> 13
        partner = model.partner[fi]
        if partner < 0:
            continue
        base_g = (partner << 13) | (base_f & 0x1FFF)
        lset = gs.get(base_g)
        if not lset:
            continue
        is_anti = model.fields[fi].is_antifield
        # pa(ξ^a) refers to the field of the conjugate pair
        pa_field = par[partner] if is_anti else par[fi]
        s = _sign((pf + 1) * pa_field)
        if is_anti:
            s *= _sign(pf)
        for k in kset:
            P = _partial(model, f, base_f + 2 * k)
            if not P:
                continue
            for l in lset:
                R = _partial(model, g, base_g + 2 * l)
                if not R:
                    continue
                term = _mul(model, _dpow(model, P, l), _dpow(model, R, k), cutoff)
                _add_into(out, term, s)
    return out


def soloviev(f: JetPolynomial, g: JetPolynomial, cutoff: int | None = None) -> JetPolynomial:
    """Soloviev antibracket [[f, g]] of densities.

    With ``cutoff`` every product of antifield weight >= cutoff is dropped,
    so the result is exact modulo F^cutoff.
    """
    if f.model is not g.model:
        raise ModelMismatch("bracket of polynomials from different models")
    model = f.model
    out: dict = {}
    for pf, fpart in _by_parity(f):
        _add_into(out, _soloviev_homog(model, fpart, pf, g.terms, cutoff))
    return JetPolynomial(model, out)


def _var_table(model: ModelAlgebra, f: dict) -> dict[int, dict]:
    slots = _jets_by_slot(model, f)
    out = {}
    for base, jets in slots.items():
        if model.partner[base >> 13] < 0:
            continue
        v = _variational(model, f, base, max(jets))
        if v:
            out[base] = v
    return out


def _bv_homog(model: ModelAlgebra, f: dict, pf: int, g: dict, cutoff: int | None) -> dict:
    out: dict = {}
    vf = _var_table(model, f)
    vg = _var_table(model, g)
    par = model._par
    for base_f, Df in vf.items():
        fi = base_f >> 13
        partner = model.partner[fi]
        base_g = (partner << 13) | (base_f & 0x1FFF)
        Dg = vg.get(base_g)
        if Dg is None:
            continue
        is_anti = model.fields[fi].is_antifield
        pa_field = par[partner] if is_anti else par[fi]
        s = _sign((pf + 1) * pa_field)
        if is_anti:
            s *= _sign(pf)
        _add_into(out, _mul(model, Df, Dg, cutoff), s)
    return out


@dataclass(frozen=True)
class Functional:
    """∫f: a density taken modulo total derivatives."""

    density: JetPolynomial

    @property
    def model(self) -> ModelAlgebra:
        return self.density.model

    def equals(self, other: "Functional | JetPolynomial", K: int | None = None) -> bool:
        o = other.density if isinstance(other, Functional) else other
        h = self.density - o
        if K is not None:
            h = truncate(h, K)
        return is_total_derivative(h).exact

    def is_zero(self, K: int | None = None) -> bool:
        h = self.density if K is None else truncate(self.density, K)
        return is_total_derivative(h).exact

    def __add__(self, other: "Functional") -> "Functional":
        return Functional(self.density + other.density)

    def __sub__(self, other: "Functional") -> "Functional":
        return Functional(self.density - other.density)

    def __neg__(self) -> "Functional":
        return Functional(-self.density)

    def scale(self, s) -> "Functional":
        return Functional(self.density.scale(s))


def _density(F) -> JetPolynomial:
    return F.density if isinstance(F, Functional) else F


def bv_antibracket(F, G, cutoff: int | None = None) -> Functional:
    """(∫f, ∫g) through the variational derivative pairing."""
    f = _density(F)
    g = _density(G)
    if f.model is not g.model:
        raise ModelMismatch("bracket of functionals from different models")
    model = f.model
    out: dict = {}
    for pf, fpart in _by_parity(f):
        _add_into(out, _bv_homog(model, fpart, pf, g.terms, cutoff))
    return Functional(JetPolynomial(model, out))


def transgress(G, F, cutoff: int | None = None) -> Functional:
    """The transgression ∫f ↦ (∫G, ∫f)."""
    return bv_antibracket(G, F, cutoff)


# --------------------------------------------------------------------------


class EvolutionaryVF:
    """Graded derivation commuting with ∂, fixed by its values on 0-jets.

    ``images`` maps positive jet-0 generator codes to polynomials, or is a
    callable returning the image (or None for zero).  Images of constant
    generators (simplex coordinates, their differentials) are allowed and
    are not prolonged.  ``cutoff`` drops products of antifield weight at or
    above it during application.
    """

    def __init__(
        self,
        model: ModelAlgebra,
        images: Mapping[int, JetPolynomial] | Callable[[int], JetPolynomial | None],
        parity: int,
        ghost: int | None = None,
        cutoff: int | None = None,
        name: str = "",
    ):
        self.model = model
        self.parity = parity & 1
        self.ghost = ghost
        self.cutoff = cutoff
        self.name = name
        self._provider = images if callable(images) else None
        self._images: dict[int, dict] = {}
        if not callable(images):
            for c, v in images.items():
                if v.model is not model:
                    raise ModelMismatch("vector field image from a different model")
                self._images[c & ~1] = v.terms
        self._prolonged: dict[int, dict] = {}

    def base_image(self, code: int) -> dict:
        code &= ~1
        r = self._images.get(code)
        if r is None:
            if self._provider is None:
                return {}
            v = self._provider(code)
            r = {} if v is None else v.terms
            if self.cutoff is not None:
                info = self.model.info
                r = {m: c for m, c in r.items() if info(m)[3] < self.cutoff}
            self._images[code] = r
        return r

    def image(self, code: int) -> JetPolynomial:
        """pr X applied to the generator ``code`` (any jet order)."""
        return JetPolynomial(self.model, self._image_terms(code & ~1))

    def _image_terms(self, code: int) -> dict:
        r = self._prolonged.get(code)
        if r is not None:
            return r
        j = code_jet(code)
        if j == 0 or self.model.is_constant(code):
            r = self.base_image(code)
        else:
            r = _d(self.model, self._image_terms(code - 2))
        self._prolonged[code] = r
        return r

    def apply_terms(self, f: dict, cutoff: int | None = None) -> dict:
        model = self.model
        cut = self.cutoff if cutoff is None else cutoff
        gens = set()
        for m in f:
            for c in m:
                gens.add(c & ~1)
        out: dict = {}
        for c in sorted(gens):
            img = self._image_terms(c)
            if not img:
                continue
            P = _partial(model, f, c)
            if P:
                _add_into(out, _mul(model, img, P, cut))
        return out

    def __call__(self, f: JetPolynomial, cutoff: int | None = None) -> JetPolynomial:
        if f.model is not self.model:
            raise ModelMismatch("vector field applied to a polynomial from another model")
        return JetPolynomial(self.model, self.apply_terms(f.terms, cutoff))

    def __add__(self, other: "EvolutionaryVF") -> "EvolutionaryVF":
        if other.parity != self.parity:
            raise JetAlgebraError("sum of vector fields of different parity")
        a, b = self, other

        def imgs(code):
            t = dict(a.base_image(code))
            _add_into(t, b.base_image(code))
            return JetPolynomial(a.model, t)

        cut = None if a.cutoff is None and b.cutoff is None else min(
            x for x in (a.cutoff, b.cutoff) if x is not None
        )
        return EvolutionaryVF(a.model, imgs, a.parity, a.ghost, cut, f"{a.name}+{b.name}")


def apply_vf(X: EvolutionaryVF, f: JetPolynomial, cutoff: int | None = None) -> JetPolynomial:
    return X(f, cutoff)


def hamiltonian_vf(F, cutoff: int | None = None) -> EvolutionaryVF:
    """Hamiltonian vector field of a functional.

    Normalised as X_F = (-1)^{pa(F)} (∫F, -), so that for even F this is the
    adjoint action and for the odd density D it is the total derivative.
    """
    f = _density(F)
    model = f.model
    pf = f.parity()
    try:
        gh = f.ghost() + 1
    except JetAlgebraError:
        gh = None
    table = _var_table(model, f.terms)
    images: dict[int, JetPolynomial] = {}
    par = model._par
    for base, v in table.items():
        # v = δ_{base} F; it is the image of the conjugate generator
        partner = model.partner_code(base)
        is_anti = model.fields[base >> 13].is_antifield
        if is_anti:
            # δ^b F is the image of the field ξ^b
            pa_b = par[partner >> 13]
            s = _sign((pf + 1) * pa_b)
        else:
            pa_b = par[base >> 13]
            s = _sign(pf) * _sign((pf + 1) * pa_b)
        if cutoff is not None:
            info = model.info
            v = {m: c for m, c in v.items() if info(m)[3] < cutoff}
        images[partner] = JetPolynomial(model, {m: c * s for m, c in v.items()})
    return EvolutionaryVF(model, images, pf + 1, gh, cutoff)


def commutator_vf_on(X: EvolutionaryVF, Y: EvolutionaryVF, f: JetPolynomial) -> JetPolynomial:
    """[X, Y] f = X(Y f) − (−1)^{|X||Y|} Y(X f)."""
    return X(Y(f)) - Y(X(f)).scale(_sign(X.parity * Y.parity))
