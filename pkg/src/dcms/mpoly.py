"""Sparse multivariate polynomials over a Scalar coefficient field.

Exponents are nonnegative integer tuples; coefficients are Scalars and no
zero coefficient is ever stored.  Graded-lex order drives leading-term
queries, plain lex drives the leading-monomial queries used for
triangularity arguments.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import ParamField, Scalar


def _grlex(e):
    return (sum(e), e)


class MPoly:
    __slots__ = ("field", "vars", "terms", "_hash")

    def __init__(self, field: ParamField, varnames: tuple[str, ...], terms=None):
        self.field = field
        self.vars = tuple(varnames)
        t = {}
        if terms:
            for e, c in terms.items():
                if any(x < 0 for x in e):
                    raise ValueError("negative exponent in MPoly")
                c = field.scalar(c)
                if not c.is_zero():
                    t[tuple(e)] = c
        self.terms = t
        self._hash = None

    # -- constructors

    @classmethod
    def zero(cls, field, varnames):
        return cls(field, varnames)

    @classmethod
    def const(cls, field, varnames, value):
        return cls(field, varnames, {(0,) * len(varnames): field.scalar(value)})

    @classmethod
    def variable(cls, field, varnames, name):
        e = [0] * len(varnames)
        e[varnames.index(name)] = 1
        return cls(field, varnames, {tuple(e): field.one})

    @classmethod
    def variables(cls, field, varnames):
        return tuple(cls.variable(field, varnames, n) for n in varnames)

    def _same_space(self, other: "MPoly"):
        if self.field is not other.field or self.vars != other.vars:
            raise ValueError("polynomials from different spaces")

    # -- predicates and structure

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def coefficient(self, expo) -> Scalar:
        return self.terms.get(tuple(expo), self.field.zero)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * len(self.vars), self.field.zero)

    def leading_grlex(self):
        e = max(self.terms, key=_grlex)
        return e, self.terms[e]

    def leading_lex(self):
        e = max(self.terms)
        return e, self.terms[e]

    def homogeneous_part(self, d: int) -> "MPoly":
        return MPoly(self.field, self.vars,
                     {e: c for e, c in self.terms.items() if sum(e) == d})

    # -- arithmetic

    def _coerce(self, other):
        if isinstance(other, MPoly):
            self._same_space(other)
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return MPoly.const(self.field, self.vars, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return self._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.__add__(o.__neg__())

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            c = self.field.scalar(other)
            if c.is_zero():
                return self._wrap({})
            return self._wrap({e: cc * c for e, cc in self.terms.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.terms, o.terms
        if len(b) < len(a):
            a, b = b, a
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e)
                s = ca * cb if s is None else s + ca * cb
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return self._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = MPoly.const(self.field, self.vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def _wrap(self, terms: dict) -> "MPoly":
        p = MPoly.__new__(MPoly)
        p.field = self.field
        p.vars = self.vars
        p.terms = terms
        p._hash = None
        return p

    # -- calculus and substitution

    def derivative(self, name: str) -> "MPoly":
        v = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[v]:
                e2 = e[:v] + (e[v] - 1,) + e[v + 1:]
                s = out.get(e2)
                s = c * e[v] if s is None else s + c * e[v]
                if not s.is_zero():
                    out[e2] = s
                else:
                    out.pop(e2, None)
        return self._wrap(out)

    def substitute(self, bindings: dict) -> "MPoly":
        """Substitute MPoly or Scalar values for a subset of the variables."""
        subs = {}
        for name, val in bindings.items():
            v = self.vars.index(name)
            if isinstance(val, MPoly):
                self._same_space(val)
                subs[v] = val
            else:
                subs[v] = MPoly.const(self.field, self.vars, val)
        out = MPoly.zero(self.field, self.vars)
        pow_cache: dict = {}
        for e, c in self.terms.items():
            rest = tuple(0 if v in subs else x for v, x in enumerate(e))
            term = MPoly(self.field, self.vars, {rest: c})
            for v, val in subs.items():
                if e[v]:
                    key = (v, e[v])
                    p = pow_cache.get(key)
                    if p is None:
                        p = val ** e[v]
                        pow_cache[key] = p
                    term = term * p
            out = out + term
        return out

    def eval_scalars(self, values) -> Scalar:
        vals = [self.field.scalar(v) for v in values]
        total = self.field.zero
        for e, c in self.terms.items():
            term = c
            for v, p in zip(vals, e):
                if p:
                    term = term * v ** p
            total = total + term
        return total

    # -- structure

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            if isinstance(other, (int, Fraction, Scalar)):
                return self == MPoly.const(self.field, self.vars, other)
            return NotImplemented
        return (self.field is other.field and self.vars == other.vars
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, tuple(sorted(self.terms.items(),
                                                       key=lambda t: t[0]))))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex, reverse=True):
            c = self.terms[e]
            mono = "*".join(n if p == 1 else f"{n}^{p}"
                            for n, p in zip(self.vars, e) if p)
            cs = str(c)
            if mono:
                if c.is_one():
                    term = mono
                elif cs == "-1":
                    term = "-" + mono
                else:
                    if "+" in cs or (" - " in cs) or "/" in cs:
                        cs = f"({cs})"
                    term = f"{cs}*{mono}"
            else:
                if "+" in cs or " - " in cs:
                    cs = f"({cs})"
                term = cs
            if parts and not term.startswith("-"):
                parts.append("+ " + term)
            elif parts:
                parts.append("- " + term[1:])
            else:
                parts.append(term)
        return " ".join(parts)

    def __repr__(self):
        return f"MPoly({self})"


def poly_substitute(f: MPoly, bindings: dict) -> MPoly:
    return f.substitute(bindings)


def divisible_by_linear(p: MPoly, coeffs) -> bool:
    """Exact divisibility of p by the linear form sum(coeffs[i] * var_i).

    Decided by eliminating one variable along the hyperplane; valid because
    a nonzero linear form is irreducible.
    """
    coeffs = [p.field.scalar(c) for c in coeffs]
    pivot = next((i for i, c in enumerate(coeffs) if not c.is_zero()), None)
    if pivot is None:
        raise ValueError("zero linear form")
    cp = coeffs[pivot]
    repl = MPoly.zero(p.field, p.vars)
    for i, c in enumerate(coeffs):
        if i != pivot and not c.is_zero():
            repl = repl - MPoly.variable(p.field, p.vars, p.vars[i]) * (c / cp)
    return p.substitute({p.vars[pivot]: repl}).is_zero()
