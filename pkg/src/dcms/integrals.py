"""Admissibility identity, quantum-integral recurrence and commutativity.

The recurrence lives entirely in the froot coefficient algebra, so all
intermediate arithmetic is polynomial; zero tests on final differences
go through the exact rational realization.
"""

from __future__ import annotations

from fractions import Fraction

from .diffop import EulerOp, directional, fcoeffs
from .linalg import rank
from .mpoly import MPoly
from .rootsys import CLASSICAL, GRS, UnsupportedFamilyError


class IntegralFamily:
    """Memoized recurrence state for one system and model."""

    def __init__(self, grs: GRS, model: str = "trig"):
        self.grs = grs
        self.model = model
        self.alg = fcoeffs(grs, model)
        self._nabla: dict = {}
        self._integral: dict = {}
        self._orbit = None
        # per positive root: multiplicity, deformed pairings with everything
        self._mult = [grs.mult[a] for a in grs.positive_roots]

    @property
    def orbit(self):
        if self._orbit is None:
            self._orbit = self.grs.homogeneous_orbit()
        return self._orbit

    def nabla(self, v, p: int) -> EulerOp:
        """The recurrent operators: nabla(v, 1) is the directional
        derivative; each next level subtracts the multiplicity-weighted
        f_a terms over the positive roots, reflecting the orbit label
        with the euclidean reflection."""
        if p < 1:
            raise ValueError("p must be >= 1")
        v = tuple(Fraction(c) for c in v)
        key = (v, p)
        got = self._nabla.get(key)
        if got is not None:
            return got
        if v not in set(self.orbit):
            raise ValueError(f"{v} is not in the homogeneous orbit")
        g, alg = self.grs, self.alg
        if p == 1:
            out = directional(alg, v)
        else:
            dv = directional(alg, v)
            out = dv.compose(self.nabla(v, p - 1))
            for idx, a in enumerate(g.positive_roots):
                c = self._mult[idx] * g.pairing(a, v)
                if c.is_zero():
                    continue
                w = g.reflect_euclid(a, v)
                diff = self.nabla(v, p - 1) - self.nabla(w, p - 1)
                if not diff.terms:
                    continue
                out = out - diff.scale_coeff(alg.f(idx) * c)
        self._nabla[key] = out
        return out

    def integral(self, p: int) -> EulerOp:
        """Orbit-summed quantum integral of level p."""
        if self.grs.family not in CLASSICAL:
            raise UnsupportedFamilyError(
                "integrals are only constructed for the classical families")
        got = self._integral.get(p)
        if got is not None:
            return got
        g = self.grs
        total = EulerOp.zero(self.alg)
        for v in self.orbit:
            vv = g.pairing(v, v)
            total = total + self.nabla(v, p).scale_scalar(g.field.one / vv)
        self._integral[p] = total
        return total

    def radial_l2(self) -> EulerOp:
        """Second integral written directly as Laplacian-plus-drift."""
        g, alg = self.grs, self.alg
        total = EulerOp.zero(alg)
        for v in self.orbit:
            dv = directional(alg, v)
            total = total + dv.compose(dv).scale_scalar(g.field.one / g.pairing(v, v))
        orbit_factor = self.orbit_factor()
        for idx, a in enumerate(g.positive_roots):
            c = 2 * orbit_factor * self._mult[idx]
            if c.is_zero():
                continue
            total = total - directional(alg, a).scale_coeff(alg.f(idx) * c)
        return total

    def orbit_factor(self):
        """sum over the orbit of <a,v>^2 / (<v,v> <a,a>), the same scalar
        for every root by orbit transitivity (1 for one-sided orbits,
        2 for sign-symmetric ones)."""
        g = self.grs
        a = g.positive_roots[0]
        aa = g.euclid(a, a)
        total = Fraction(0)
        for v in self.orbit:
            av = g.euclid(a, v)
            total += av * av / (g.euclid(v, v) * aa)
        return g.field.from_fraction(total)


_FAMILIES: dict = {}


def integral_family(grs: GRS, model: str = "trig") -> IntegralFamily:
    key = (grs, model)
    fam = _FAMILIES.get(key)
    if fam is None:
        fam = IntegralFamily(grs, model)
        _FAMILIES[key] = fam
    return fam


def nabla(grs: GRS, v, p: int, model: str = "trig") -> EulerOp:
    return integral_family(grs, model).nabla(v, p)


def integral(grs: GRS, p: int, model: str = "trig") -> EulerOp:
    return integral_family(grs, model).integral(p)


# ---------------------------------------------------------------------------
# admissibility identity


def _pair_poly(grs: GRS, alg, trig: bool) -> MPoly:
    """The pair sum over non-proportional positive roots, written in the
    froot algebra: trig uses (4 f_a f_b - 1), the rational limit f_a f_b."""
    field = grs.field
    proots = grs.positive_roots
    total = alg.zero
    four = field.scalar(4)
    d = len(proots[0]) if proots else 0
    for i, a in enumerate(proots):
        for j in range(i + 1, len(proots)):
            b = proots[j]
            # skip proportional pairs (present in the BC-like families)
            if all(a[t] * b[s] == a[s] * b[t]
                   for t in range(d) for s in range(t + 1, d)):
                continue
            c = grs.mult[a] * grs.mult[b] * grs.pairing(a, b)
            if c.is_zero():
                continue
            fab = alg.f(i) * alg.f(j)
            if trig:
                total = total + (fab * four - alg.one) * c
            else:
                total = total + fab * c
    return total


def main_identity_residue(grs: GRS, model: str = "trig"):
    """Exact residue of the admissibility identity (None when it holds).

    Trig form: sum over non-proportional positive pairs of
    m_a m_b (a,b) (coth coth - 1), written at half arguments via the f_a;
    rat form: the same sum with 1/(a,x)(b,x).
    """
    alg = fcoeffs(grs, model)
    poly = _pair_poly(grs, alg, trig=(model == "trig"))
    if poly.is_zero():
        return None
    r = alg.to_ratfun(poly)
    return None if r.is_zero() else r


def main_identity_check(grs: GRS, both_models: bool = True) -> bool:
    if main_identity_residue(grs, "trig") is not None:
        return False
    if both_models and main_identity_residue(grs, "rat") is not None:
        return False
    return True


# ---------------------------------------------------------------------------
# structural relations


def prop1_check(grs: GRS, v, p: int, model: str = "trig") -> bool:
    """Commutation relation of the second integral with nabla(v, p):
    [L2, nabla(v,p)] = (v,v) sum_a m_a <a,a>/<v,v> phi_a
                        (nabla(v,p) - nabla(reflected v, p))."""
    fam = integral_family(grs, model)
    g, alg = grs, fam.alg
    v = tuple(Fraction(c) for c in v)
    l2 = fam.integral(2)
    lhs = l2.commutator(fam.nabla(v, p))
    vv = g.pairing(v, v)
    vve = g.euclid(v, v)
    rhs = EulerOp.zero(alg)
    for idx, a in enumerate(g.positive_roots):
        ma = g.mult[a]
        if ma.is_zero():
            continue
        w = g.reflect_euclid(a, v)
        diff = fam.nabla(v, p) - fam.nabla(w, p)
        if not diff.terms:
            continue
        c = vv * ma * g.field.from_fraction(g.euclid(a, a) / vve)
        rhs = rhs + diff.scale_coeff(alg.phi(idx) * c)
    return (lhs - rhs).is_zero()


def commute_check(grs: GRS, p: int, q: int, model: str = "trig",
                  quick_samples: int = 0):
    """Exact vanishing of [L_p, L_q]; returns (ok, witness)."""
    fam = integral_family(grs, model)
    comm = fam.integral(p).commutator(fam.integral(q))
    if not comm.terms:
        return True, None
    w = comm.nonzero_witness()
    return (w is None), w


def odd_vanishing_check(grs: GRS, p: int, model: str = "trig") -> bool:
    """For sign-symmetric orbits the odd-level integrals vanish."""
    fam = integral_family(grs, model)
    return fam.integral(p).is_zero()


def leading_symbols(grs: GRS, levels) -> list[MPoly]:
    """Leading symbols of the integrals: sum over the orbit of
    (pairing with v)^p / (v,v), a polynomial in dual variables."""
    field = grs.field
    d = grs.dim
    names = tuple(f"s{t+1}" for t in range(d))
    xi = MPoly.variables(field, names)
    out = []
    orbit = grs.homogeneous_orbit()
    for p in levels:
        total = MPoly.zero(field, names)
        for v in orbit:
            unit = [Fraction(0)] * d
            lin = MPoly.zero(field, names)
            for t in range(d):
                unit[t] = Fraction(1)
                c = grs.pairing(v, tuple(unit))
                unit[t] = Fraction(0)
                if not c.is_zero():
                    lin = lin + xi[t] * c
            total = total + (lin ** p) * (field.one / grs.pairing(v, v))
        out.append(total)
    return out


def independence_count(grs: GRS, levels) -> int:
    """Rank of the Jacobian of the leading symbols (functional
    independence certificate)."""
    field = grs.field
    symbols = leading_symbols(grs, levels)
    d = grs.dim
    names = symbols[0].vars if symbols else ()
    # evaluate Jacobian rank at a generic-enough rational point by rows of
    # polynomials: use the symbolic matrix over the rational function field
    # in the dual variables via a fresh parameter field
    from .exact import ParamField

    ext = ParamField(tuple(field.names) + tuple(f"s{t+1}" for t in range(d)))
    bind = {n: ext.param(n) for n in field.names}
    rows = []
    for s in symbols:
        row = []
        for t in range(d):
            der = s.derivative(names[t])
            val = ext.zero
            for e, c in der.terms.items():
                term = c.substitute(bind, ext)
                for tt, pw in enumerate(e):
                    if pw:
                        term = term * ext.param(f"s{tt+1}") ** pw
                val = val + term
            row.append(val)
        rows.append(row)
    return rank(rows, ext)
