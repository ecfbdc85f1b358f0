"""Differential operators with exact coefficients, in two coordinate models.

Geometric (``trig``) model: functions live on the torus of the root
lattice; the commuting derivation basis is E_t = z_t d/dz_t where
z_t = exp of the pairing with the t-th lattice basis vector.  Every root
exponential is then a Laurent monomial and the coefficient functions

    f_a   = (1/2) (z^b + 1)/(z^b - 1)       (b = lattice exponent of a)
    phi_a = 1/4 - f_a^2 = -z^b/(z^b - 1)^2

are Laurent-rational.  Affine (``rat``) model: the rational limit, with
plain partial derivatives and f_a = 1/(a, x), phi_a = -f_a^2.

Operators are normal-ordered: a finite map from derivative multi-indices
to coefficients, all coefficients standing left of all derivations.  Two
coefficient algebras implement the same small interface:

* FCoeffs   -- polynomials in the f_a over the scalar field.  The
  derivations act polynomially (d f = c - d f^2), so the whole recurrence
  machinery stays polynomial; exact zero tests substitute the f_a by
  their rational realizations, where the relations between the f_a hold.
* RatCoeffs -- LaurentRat coefficients, used for the Schroedinger and
  radial operators and the gauge conjugation (full-pairing functions).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .exact import Scalar
from .laurent import LaurentContext, LaurentRat, lp_add, lp_mul, lp_smul
from .mpoly import MPoly
from .rootsys import GRS, Vec

MODELS = ("trig", "rat")

_RATCTX: dict = {}
_FALG: dict = {}
_RALG: dict = {}


def rat_context_for(grs: GRS, model: str) -> LaurentContext:
    """One shared Laurent context per (system, model)."""
    key = (grs, model)
    ctx = _RATCTX.get(key)
    if ctx is None:
        if model == "trig":
            names = tuple(f"z{t+1}" for t in range(grs.dim))
            ctx = LaurentContext(grs.field, names, "mult")
        else:
            ctx = LaurentContext(grs.field, grs.coord_names, "add")
        _RATCTX[key] = ctx
    return ctx


def fcoeffs(grs: GRS, model: str) -> "FCoeffs":
    key = (grs, model)
    alg = _FALG.get(key)
    if alg is None:
        alg = FCoeffs(grs, model)
        _FALG[key] = alg
    return alg


def ratcoeffs(grs: GRS, model: str) -> "RatCoeffs":
    key = (grs, model)
    alg = _RALG.get(key)
    if alg is None:
        alg = RatCoeffs(grs, model)
        _RALG[key] = alg
    return alg


# ---------------------------------------------------------------------------
# coefficient algebras


class FCoeffs:
    """Coefficients polynomial in the root functions of one system."""

    kind = "froot"

    def __init__(self, grs: GRS, model: str):
        if model not in MODELS:
            raise ValueError(f"unknown model {model!r}")
        self.grs = grs
        self.model = model
        self.field = grs.field
        self.proots = grs.positive_roots
        self.nf = len(self.proots)
        self.nd = grs.dim
        self.fvars = tuple(f"f{i}" for i in range(self.nf))
        self.zero = MPoly.zero(self.field, self.fvars)
        self.one = MPoly.const(self.field, self.fvars, 1)
        self._fv = MPoly.variables(self.field, self.fvars)
        # derivation of f_a by slot t:  u[t][a] + w[t][a] * f_a^2
        quarter = self.field.from_fraction(Fraction(1, 4))
        self._du = []
        self._dw = []
        for t in range(self.nd):
            ut, wt = [], []
            for a in self.proots:
                if model == "trig":
                    lat = grs.lattice_coords(a)[t]
                    ut.append(self.field.scalar(lat) * quarter)
                    wt.append(self.field.scalar(-lat))
                else:
                    coeff = self.field.from_fraction(a[t])
                    ut.append(self.field.zero)
                    wt.append(-coeff)
            self._du.append(ut)
            self._dw.append(wt)
        self._rat: LaurentContext | None = None
        self._frat: list[LaurentRat] | None = None
        self._mono_cache: dict = {}

    def f(self, idx: int) -> MPoly:
        return self._fv[idx]

    def phi(self, idx: int) -> MPoly:
        sq = self._fv[idx] * self._fv[idx]
        if self.model == "trig":
            return MPoly.const(self.field, self.fvars, Fraction(1, 4)) - sq
        return -sq

    def from_scalar(self, s) -> MPoly:
        return MPoly.const(self.field, self.fvars, s)

    def derive(self, c: MPoly, t: int) -> MPoly:
        out = self.zero
        du, dw = self._du[t], self._dw[t]
        for a in range(self.nf):
            da = c.derivative(self.fvars[a])
            if da.is_zero():
                continue
            u, w = du[a], dw[a]
            piece = self.zero
            if not u.is_zero():
                piece = piece + da * u
            if not w.is_zero():
                piece = piece + da * (self._fv[a] * self._fv[a]) * w
            out = out + piece
        return out

    def is_structural_zero(self, c: MPoly) -> bool:
        return c.is_zero()

    # -- exact realization as rational functions

    def rat_context(self) -> LaurentContext:
        if self._rat is None:
            self._rat = rat_context_for(self.grs, self.model)
            frat = []
            ctx = self._rat
            for a in self.proots:
                if self.model == "trig":
                    b = self.grs.lattice_coords(a)
                    num = {b: self.field.from_fraction(Fraction(1, 2)),
                           (0,) * self.nd: self.field.from_fraction(Fraction(1, 2))}
                    den = {b: self.field.one, (0,) * self.nd: -self.field.one}
                else:
                    num = {(0,) * self.nd: self.field.one}
                    den = {}
                    for t, c in enumerate(a):
                        if c:
                            e = [0] * self.nd
                            e[t] = 1
                            den[tuple(e)] = self.field.from_fraction(c)
                frat.append(ctx.ratio(num, den))
            self._frat = frat
        return self._rat

    def _monomial_rat(self, expo) -> LaurentRat:
        got = self._mono_cache.get(expo)
        if got is not None:
            return got
        ctx = self.rat_context()
        if not any(expo):
            out = ctx.one
        else:
            a = next(i for i, e in enumerate(expo) if e)
            prev = list(expo)
            prev[a] -= 1
            out = self._monomial_rat(tuple(prev)) * self._frat[a]
        self._mono_cache[expo] = out
        return out

    def to_ratfun(self, c: MPoly) -> LaurentRat:
        ctx = self.rat_context()
        total = ctx.zero
        for e in sorted(c.terms, key=lambda e: (sum(e), e)):
            total = total + self._monomial_rat(e).scale(c.terms[e])
        return total

    def is_zero(self, c: MPoly) -> bool:
        """Exact zero test of the realized rational function."""
        if c.is_zero():
            return True
        if len(c.terms) == 1:
            return False  # a single monomial in the f_a never vanishes
        return self.to_ratfun(c).is_zero()


class RatCoeffs:
    """LaurentRat coefficients over a shared context."""

    kind = "ratfun"

    def __init__(self, grs: GRS, model: str):
        self.grs = grs
        self.model = model
        self.field = grs.field
        self.nd = grs.dim
        self.ctx = rat_context_for(grs, model)
        self.zero = self.ctx.zero
        self.one = self.ctx.one

    def from_scalar(self, s) -> LaurentRat:
        return self.ctx.scalar(s)

    def derive(self, c: LaurentRat, t: int) -> LaurentRat:
        return c.derive(t)

    def is_structural_zero(self, c: LaurentRat) -> bool:
        return c.is_zero()

    def is_zero(self, c: LaurentRat) -> bool:
        return c.is_zero()

    # full-pairing root functions

    def root_exponential2(self, a: Vec) -> tuple:
        """Exponent of z for exp(2 (a, x)) in the trig model."""
        b = self.grs.lattice_coords(a)
        return tuple(2 * x for x in b)

    def coth_full(self, a: Vec) -> LaurentRat:
        """coth of the full pairing with root a (trig) or its rational limit."""
        if self.model == "trig":
            b2 = self.root_exponential2(a)
            zero = (0,) * self.nd
            return self.ctx.ratio({b2: self.field.one, zero: self.field.one},
                                  {b2: self.field.one, zero: -self.field.one})
        den = {}
        for t, c in enumerate(a):
            if c:
                e = [0] * self.nd
                e[t] = 1
                den[tuple(e)] = self.field.from_fraction(c)
        return self.ctx.ratio({(0,) * self.nd: self.field.one}, den)

    def inv_sin2_full(self, a: Vec) -> LaurentRat:
        """1/sinh^2 of the full pairing (trig) or 1/(a,x)^2 (rat)."""
        c = self.coth_full(a)
        return c * c - self.one if self.model == "trig" else c * c


# ---------------------------------------------------------------------------
# normal-ordered operators


def _sub_multiindices(a):
    """All s <= a with the product of per-slot binomials."""
    out = [((0,) * len(a), 1)]
    for t, at in enumerate(a):
        if not at:
            continue
        nxt = []
        for s, c in out:
            for j in range(at + 1):
                s2 = list(s)
                s2[t] = j
                nxt.append((tuple(s2), c * math.comb(at, j)))
        out = nxt
    return out


_SUBMI_CACHE: dict = {}


def sub_multiindices(a):
    got = _SUBMI_CACHE.get(a)
    if got is None:
        got = _sub_multiindices(a)
        _SUBMI_CACHE[a] = got
    return got


class EulerOp:
    """Normal-ordered differential operator over a coefficient algebra."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms=None):
        self.alg = alg
        self.terms = {}
        if terms:
            for a, c in terms.items():
                if not alg.is_structural_zero(c):
                    self.terms[tuple(a)] = c

    def _same(self, other: "EulerOp"):
        if self.alg is not other.alg:
            raise ValueError("operators over different coefficient algebras")

    @classmethod
    def zero(cls, alg):
        return cls(alg)

    @classmethod
    def identity(cls, alg):
        return cls(alg, {(0,) * alg.nd: alg.one})

    def order(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            got = out.get(a)
            s = c if got is None else got + c
            if self.alg.is_structural_zero(s):
                out.pop(a, None)
            else:
                out[a] = s
        return EulerOp._wrap(self.alg, out)

    def __neg__(self):
        return EulerOp._wrap(self.alg, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self.__add__(other.__neg__())

    def scale_coeff(self, c) -> "EulerOp":
        """Multiply every coefficient on the left by c."""
        if self.alg.is_structural_zero(c):
            return EulerOp.zero(self.alg)
        out = {}
        for a, ca in self.terms.items():
            s = c * ca
            if not self.alg.is_structural_zero(s):
                out[a] = s
        return EulerOp._wrap(self.alg, out)

    def scale_scalar(self, s) -> "EulerOp":
        return self.scale_coeff(self.alg.from_scalar(s))

    @staticmethod
    def _wrap(alg, terms):
        op = EulerOp.__new__(EulerOp)
        op.alg = alg
        op.terms = terms
        return op

    def compose(self, other: "EulerOp") -> "EulerOp":
        """Normal-ordered product self . other (Leibniz expansion)."""
        self._same(other)
        alg = self.alg
        out: dict = {}
        dcache: dict = {}

        def derived(b, d):
            if not any(d):
                return other.terms[b]
            got = dcache.get((b, d))
            if got is not None:
                return got
            t = next(i for i, x in enumerate(d) if x)
            lower = list(d)
            lower[t] -= 1
            base = derived(b, tuple(lower))
            val = None if base is None else alg.derive(base, t)
            if val is not None and alg.is_structural_zero(val):
                val = None
            dcache[(b, d)] = val
            return val

        for a, ca in self.terms.items():
            for s, binom in sub_multiindices(a):
                d = tuple(x - y for x, y in zip(a, s))
                for b, cb in other.terms.items():
                    dc = derived(b, d)
                    if dc is None:
                        continue
                    piece = ca * dc
                    if binom != 1:
                        piece = piece * binom
                    key = tuple(x + y for x, y in zip(s, b))
                    got = out.get(key)
                    tot = piece if got is None else got + piece
                    if alg.is_structural_zero(tot):
                        out.pop(key, None)
                    else:
                        out[key] = tot
        return EulerOp._wrap(alg, out)

    def commutator(self, other: "EulerOp") -> "EulerOp":
        return self.compose(other) - other.compose(self)

    def is_zero(self) -> bool:
        """Exact zero test (realizes froot coefficients as functions)."""
        return all(self.alg.is_zero(c) for c in self.terms.values())

    def nonzero_witness(self):
        """A (multi-index, residue) pair certifying the operator is nonzero."""
        for a in sorted(self.terms):
            c = self.terms[a]
            if not self.alg.is_zero(c):
                if isinstance(self.alg, FCoeffs):
                    return a, self.alg.to_ratfun(c)
                return a, c
        return None

    def __eq__(self, other):
        if not isinstance(other, EulerOp):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("operators are not hashable")

    def principal_symbol(self, xi_names=None) -> MPoly:
        """Top-order part as a polynomial in dual variables.

        Requires the top-order coefficients to be scalars.
        """
        field = self.alg.field
        nd = self.alg.nd
        names = xi_names or tuple(f"s{t+1}" for t in range(nd))
        order = self.order()
        out = MPoly.zero(field, names)
        for a, c in self.terms.items():
            if sum(a) != order:
                continue
            if isinstance(c, MPoly):
                if c.degree() > 0:
                    raise ValueError("nonconstant principal symbol")
                s = c.constant_term()
            elif isinstance(c, LaurentRat):
                s = c.as_scalar()
            else:
                s = field.scalar(c)
            out = out + MPoly(field, names, {a: s})
        return out

    def map_coeffs(self, fn) -> "EulerOp":
        out = {}
        for a, c in self.terms.items():
            v = fn(c)
            if not self.alg.is_structural_zero(v):
                out[a] = v
        return EulerOp._wrap(self.alg, out)

    def double(self) -> "EulerOp":
        """Conjugate by the dilation z -> z^2 (trig RatCoeffs only)."""
        if not isinstance(self.alg, RatCoeffs) or self.alg.model != "trig":
            raise ValueError("doubling needs trig LaurentRat coefficients")
        half = self.alg.field.from_fraction(Fraction(1, 2))
        out = {}
        for a, c in self.terms.items():
            out[a] = c.double_exponents().scale(half ** sum(a))
        return EulerOp._wrap(self.alg, out)

    def render(self) -> str:
        """Deterministic text form: sorted multi-indices, canonical coefficients."""
        if not self.terms:
            return "0"
        alg = self.alg
        if isinstance(alg, RatCoeffs):
            dnames = ([f"E{t+1}" for t in range(alg.nd)] if alg.model == "trig"
                      else [f"d_{n}" for n in alg.ctx.vars])
        else:
            dnames = ([f"E{t+1}" for t in range(alg.nd)] if alg.model == "trig"
                      else [f"d_{n}" for n in alg.grs.coord_names])
        parts = []
        for a in sorted(self.terms, key=lambda a: (sum(a), a), reverse=True):
            c = self.terms[a]
            mono = "*".join(n if p == 1 else f"{n}^{p}"
                            for n, p in zip(dnames, a) if p)
            cs = str(c)
            if mono:
                cs = f"({cs})*{mono}" if not (cs == "1") else mono
            parts.append(cs)
        return " + ".join(parts)

    def __repr__(self):
        return f"EulerOp[{len(self.terms)} terms, order {self.order()}]"


# ---------------------------------------------------------------------------
# constructions


def directional(alg, v) -> EulerOp:
    """First-order operator: derivative along the vector v."""
    grs = alg.grs
    if alg.model == "trig":
        coeffs = grs.euler_coefficients(v)
    else:
        d = grs.dim
        unit = [Fraction(0)] * d
        coeffs = []
        for t in range(d):
            unit[t] = Fraction(1)
            coeffs.append(grs.pairing(v, tuple(unit)))
            unit[t] = Fraction(0)
    terms = {}
    for t, c in enumerate(coeffs):
        if not c.is_zero():
            a = [0] * alg.nd
            a[t] = 1
            terms[tuple(a)] = alg.from_scalar(c)
    return EulerOp(alg, terms)


def compose(a: EulerOp, b: EulerOp) -> EulerOp:
    return a.compose(b)


def commutator(a: EulerOp, b: EulerOp) -> EulerOp:
    return a.commutator(b)


def laplacian(alg) -> EulerOp:
    """Second-order operator of the deformed form (no potential)."""
    grs = alg.grs
    field = grs.field
    nd = alg.nd
    terms: dict = {}
    if alg.model == "trig":
        basis = grs.lattice_basis
        for s in range(nd):
            for u in range(s, nd):
                c = grs.pairing(basis[s], basis[u])
                if u != s:
                    c = 2 * c
                if c.is_zero():
                    continue
                a = [0] * nd
                a[s] += 1
                a[u] += 1
                terms[tuple(a)] = alg.from_scalar(c)
    else:
        for s in range(nd):
            for u in range(s, nd):
                c = grs.gram[s][u]
                if u != s:
                    c = 2 * c
                if c.is_zero():
                    continue
                a = [0] * nd
                a[s] += 1
                a[u] += 1
                terms[tuple(a)] = alg.from_scalar(c)
    return EulerOp(alg, terms)


def potential_coefficients(grs: GRS) -> dict:
    """Coupling of each positive root in the Schroedinger potential:
    m_a (m_a + 2 m_{2a} + 1) (a, a)."""
    out = {}
    for a in grs.positive_roots:
        ma = grs.mult[a]
        two = tuple(2 * c for c in a)
        m2 = grs.mult.get(two, grs.field.zero)
        out[a] = ma * (ma + 2 * m2 + 1) * grs.pairing(a, a)
    return out


def build_schrodinger(grs: GRS, model: str = "trig") -> EulerOp:
    """The deformed Schroedinger operator: minus the deformed Laplacian
    plus the multiplicity-weighted inverse-square potential."""
    alg = ratcoeffs(grs, model)
    op = -laplacian(alg)
    zero_mi = (0,) * alg.nd
    pot = alg.zero
    for a, c in sorted(potential_coefficients(grs).items()):
        if c.is_zero():
            continue
        pot = pot + alg.inv_sin2_full(a).scale(c)
    if not pot.is_zero():
        op = op + EulerOp(alg, {zero_mi: pot})
    return op


def build_radial(grs: GRS, model: str = "trig") -> EulerOp:
    """Radial form: minus the deformed Laplacian plus the first-order
    drift  2 sum_a m_a coth(a, x) d_a  (cot replaced by its rational
    limit 1/(a, x) in the rat model)."""
    alg = ratcoeffs(grs, model)
    op = -laplacian(alg)
    for a in sorted(grs.positive_roots):
        ma = grs.mult[a]
        if ma.is_zero():
            continue
        drift = directional(alg, a).scale_coeff(alg.coth_full(a).scale(2 * ma))
        op = op + drift
    return op


def log_psi0_gradient(alg: RatCoeffs) -> list[LaurentRat]:
    """Slot-wise derivatives of log of the ground-state factor
    prod sin^(-m_a)(a, x) in the chosen model."""
    grs = alg.grs
    out = []
    for t in range(alg.nd):
        total = alg.zero
        for a in grs.positive_roots:
            ma = grs.mult[a]
            if ma.is_zero():
                continue
            if alg.model == "trig":
                w = alg.coth_full(a).scale(ma * grs.lattice_coords(a)[t])
            else:
                w = alg.coth_full(a).scale(ma * grs.field.from_fraction(a[t]))
            total = total + w
        out.append(-total)
    return out


def conjugate_by_psi0(grs: GRS, op: EulerOp) -> EulerOp:
    """Conjugation psi0^(-1) . op . psi0 computed from the logarithmic
    derivative of psi0 (psi0 itself is never materialized)."""
    alg = op.alg
    if not isinstance(alg, RatCoeffs):
        raise ValueError("conjugation needs LaurentRat coefficients")
    grad = log_psi0_gradient(alg)
    shifted = []
    for t in range(alg.nd):
        a = [0] * alg.nd
        a[t] = 1
        terms = {tuple(a): alg.one}
        if not grad[t].is_zero():
            terms[(0,) * alg.nd] = grad[t]
        shifted.append(EulerOp(alg, terms))
    power_cache: dict = {(0,) * alg.nd: EulerOp.identity(alg)}

    def conj_multi(a):
        got = power_cache.get(a)
        if got is not None:
            return got
        t = next(i for i, x in enumerate(a) if x)
        lower = list(a)
        lower[t] -= 1
        val = shifted[t].compose(conj_multi(tuple(lower)))
        power_cache[a] = val
        return val

    total = EulerOp.zero(alg)
    for a, c in op.terms.items():
        total = total + conj_multi(a).scale_coeff(c)
    return total


def to_ratfun_op(op: EulerOp) -> EulerOp:
    """Realize a froot-coefficient operator over LaurentRat coefficients."""
    alg = op.alg
    if isinstance(alg, RatCoeffs):
        return op
    alg.rat_context()
    rat = ratcoeffs(alg.grs, alg.model)
    out = {}
    for a, c in op.terms.items():
        v = alg.to_ratfun(c)
        if not v.is_zero():
            out[a] = v
    return EulerOp._wrap(rat, out)
