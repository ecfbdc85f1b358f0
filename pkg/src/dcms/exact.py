"""Exact scalar arithmetic over parameter fields.

A Scalar is a rational function num/den where num and den are sparse
multivariate polynomials with arbitrary-precision integer coefficients in a
fixed tuple of parameter names (the empty tuple gives plain rationals).
Every Scalar is stored reduced: gcd(num, den) = 1 (including integer
content) and the graded-lex leading coefficient of den is positive, so
equality is plain structural comparison and zero-testing is trivial.

Raw polynomials are dicts mapping exponent tuples to nonzero ints.  The
helpers below (prefix ``ip_``) implement ring arithmetic, exact division
and a primitive-PRS gcd; they are deliberately free-standing so the hot
paths avoid any object overhead.
"""

from __future__ import annotations

import math
from fractions import Fraction

Expo = tuple  # exponent tuple, one entry per parameter

# ---------------------------------------------------------------------------
# raw integer polynomials


def ip_const(nvars: int, c: int) -> dict:
    return {(0,) * nvars: c} if c else {}


def ip_var(nvars: int, idx: int) -> dict:
    e = [0] * nvars
    e[idx] = 1
    return {tuple(e): 1}


def _grlex(e: Expo):
    return (sum(e), e)


def ip_add(a: dict, b: dict) -> dict:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def ip_neg(a: dict) -> dict:
    return {e: -c for e, c in a.items()}


def ip_sub(a: dict, b: dict) -> dict:
    return ip_add(a, ip_neg(b)) if b else a


def ip_mul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if len(b) < len(a):
        a, b = b, a
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def ip_mul_int(a: dict, c: int) -> dict:
    if c == 0:
        return {}
    if c == 1:
        return a
    return {e: cc * c for e, cc in a.items()}


def ip_pow(a: dict, n: int) -> dict:
    if n == 0:
        nv = len(next(iter(a))) if a else 0
        return ip_const(nv, 1)
    out = a
    for _ in range(n - 1):
        out = ip_mul(out, a)
    return out


def ip_lead(a: dict) -> tuple[Expo, int]:
    e = max(a, key=_grlex)
    return e, a[e]


def ip_int_content(a: dict) -> int:
    g = 0
    for c in a.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def ip_is_one(a: dict) -> bool:
    if len(a) != 1:
        return False
    (e, c), = a.items()
    return c == 1 and not any(e)


def ip_exact_div(a: dict, b: dict) -> dict:
    """Quotient a/b, raising ValueError when the division is not exact."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    if ip_is_one(b):
        return a
    eb, cb = ip_lead(b)
    q: dict = {}
    r = dict(a)
    while r:
        er, cr = ip_lead(r)
        e = tuple(x - y for x, y in zip(er, eb))
        if any(x < 0 for x in e) or cr % cb:
            raise ValueError("inexact polynomial division")
        c = cr // cb
        q[e] = q.get(e, 0) + c
        for eb2, cb2 in b.items():
            e2 = tuple(x + y for x, y in zip(e, eb2))
            s = r.get(e2, 0) - c * cb2
            if s:
                r[e2] = s
            else:
                r.pop(e2, None)
    return q


def _positive_lead(a: dict) -> dict:
    if a and ip_lead(a)[1] < 0:
        return ip_neg(a)
    return a


def _mono_content(a: dict) -> Expo:
    it = iter(a)
    m = list(next(it))
    for e in it:
        for i, x in enumerate(e):
            if x < m[i]:
                m[i] = x
        if not any(m):
            break
    return tuple(m)


def _strip(a: dict) -> tuple[int, Expo, dict]:
    """Split off integer content and monomial content."""
    c = ip_int_content(a)
    m = _mono_content(a)
    if c == 1 and not any(m):
        return 1, m, a
    out = {tuple(x - y for x, y in zip(e, m)): cc // c for e, cc in a.items()}
    return c, m, out


def _uni_view(a: dict, v: int) -> dict:
    """View a as univariate in variable v with polynomial coefficients."""
    out: dict = {}
    for e, c in a.items():
        d = e[v]
        e0 = e[:v] + (0,) + e[v + 1:]
        coeff = out.setdefault(d, {})
        coeff[e0] = coeff.get(e0, 0) + c
    return {d: {e: c for e, c in coeff.items() if c} for d, coeff in out.items() if coeff}


def _uni_collapse(u: dict, v: int) -> dict:
    out: dict = {}
    for d, coeff in u.items():
        for e, c in coeff.items():
            out[e[:v] + (d,) + e[v + 1:]] = c
    return out


def _prem(F: dict, G: dict, _v: int) -> dict:
    """Pseudo-remainder of univariate views F, G (polynomial coefficients)."""
    dG = max(G)
    lg = G[dG]
    R = F
    while R:
        dR = max(R)
        if dR < dG:
            break
        lr = R[dR]
        Rn = {d: ip_mul(c, lg) for d, c in R.items() if d != dR}
        for d, c in G.items():
            if d == dG:
                continue
            dd = d + dR - dG
            s = ip_sub(Rn.get(dd, {}), ip_mul(c, lr))
            if s:
                Rn[dd] = s
            else:
                Rn.pop(dd, None)
        R = Rn
    return R


def ip_gcd(a: dict, b: dict) -> dict:
    """Gcd over Z[params], normalized to positive leading coefficient."""
    if not a:
        return _positive_lead(b)
    if not b:
        return _positive_lead(a)
    ca, ma, A = _strip(a)
    cb, mb, B = _strip(b)
    c = math.gcd(ca, cb)
    m = tuple(min(x, y) for x, y in zip(ma, mb))
    base = ip_mul_int({m: 1}, c)
    if ip_is_one(A) or ip_is_one(B):
        return base
    nv = len(m)
    common = [v for v in range(nv)
              if any(e[v] for e in A) and any(e[v] for e in B)]
    if not common:
        # primitive polynomials in disjoint variables share no factor
        return base
    v = min(common, key=lambda v: min(max(e[v] for e in A), max(e[v] for e in B)))
    FA, FB = _uni_view(A, v), _uni_view(B, v)
    contA = {}
    for coeff in FA.values():
        contA = ip_gcd(contA, coeff)
    contB = {}
    for coeff in FB.values():
        contB = ip_gcd(contB, coeff)
    gamma = ip_gcd(contA, contB)
    F = {d: ip_exact_div(cf, contA) for d, cf in FA.items()}
    G = {d: ip_exact_div(cf, contB) for d, cf in FB.items()}
    if max(F) < max(G):
        F, G = G, F
    while True:
        R = _prem(F, G, v)
        if not R:
            res = _uni_collapse(G, v)
            break
        if max(R) == 0:
            res = ip_const(nv, 1)
            break
        contR = {}
        for coeff in R.values():
            contR = ip_gcd(contR, coeff)
        F, G = G, {d: ip_exact_div(cf, contR) for d, cf in R.items()}
    _, _, res = _strip(res)
    return _positive_lead(ip_mul(base, res))


def ip_to_str(a: dict, names: tuple[str, ...]) -> str:
    if not a:
        return "0"
    parts = []
    for e in sorted(a, key=_grlex, reverse=True):
        c = a[e]
        mono = "*".join(
            n if p == 1 else f"{n}^{p}" for n, p in zip(names, e) if p)
        if mono:
            if c == 1:
                term = mono
            elif c == -1:
                term = "-" + mono
            else:
                term = f"{c}*{mono}"
        else:
            term = str(c)
        if parts and not term.startswith("-"):
            parts.append("+ " + term)
        elif parts:
            parts.append("- " + term[1:])
        else:
            parts.append(term)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# scalar field


class ParamField:
    """The field Q(p1, ..., pr) of rational functions in named parameters."""

    _interned: dict[tuple[str, ...], "ParamField"] = {}

    def __new__(cls, names: tuple[str, ...] = ()):
        names = tuple(names)
        inst = cls._interned.get(names)
        if inst is None:
            inst = super().__new__(cls)
            inst.names = names
            inst.nvars = len(names)
            inst.zero = Scalar(inst, {}, ip_const(len(names), 1), _reduced=True)
            inst.one = Scalar(inst, ip_const(len(names), 1),
                              ip_const(len(names), 1), _reduced=True)
            cls._interned[names] = inst
        return inst

    def __repr__(self):
        return f"ParamField{self.names}"

    def param(self, name: str) -> "Scalar":
        idx = self.names.index(name)
        return Scalar(self, ip_var(self.nvars, idx),
                      ip_const(self.nvars, 1), _reduced=True)

    def params(self) -> tuple["Scalar", ...]:
        return tuple(self.param(n) for n in self.names)

    def scalar(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field is not self:
                if value.field.nvars == 0:
                    return self.from_fraction(value.as_fraction())
                raise ValueError("scalar from a different parameter field")
            return value
        if isinstance(value, Fraction):
            return self.from_fraction(value)
        if isinstance(value, int):
            if value == 0:
                return self.zero
            return Scalar(self, ip_const(self.nvars, value),
                          ip_const(self.nvars, 1), _reduced=True)
        raise TypeError(f"cannot coerce {value!r} to Scalar")

    def from_fraction(self, fr: Fraction) -> "Scalar":
        fr = Fraction(fr)
        return Scalar(self, ip_const(self.nvars, fr.numerator),
                      ip_const(self.nvars, fr.denominator), _reduced=True)


class Scalar:
    """Reduced rational function over the integers in declared parameters."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: ParamField, num: dict, den: dict, *, _reduced=False):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if not num:
                den = ip_const(field.nvars, 1)
            else:
                g = ip_gcd(num, den)
                if not ip_is_one(g):
                    num = ip_exact_div(num, g)
                    den = ip_exact_div(den, g)
                if ip_lead(den)[1] < 0:
                    num, den = ip_neg(num), ip_neg(den)
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    # -- predicates

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return ip_is_one(self.num) and ip_is_one(self.den)

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return ip_is_one(self.den)

    # -- arithmetic

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field:
                if other.field.nvars == 0:
                    return self.field.from_fraction(other.as_fraction())
                if self.field.nvars == 0:
                    return NotImplemented
                raise ValueError("mixed parameter fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.num:
            return o
        if not o.num:
            return self
        if self.den == o.den:
            return Scalar(self.field, ip_add(self.num, o.num), self.den)
        return Scalar(self.field,
                      ip_add(ip_mul(self.num, o.den), ip_mul(o.num, self.den)),
                      ip_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, ip_neg(self.num), self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.__add__(o.__neg__())

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.num or not o.num:
            return self.field.zero
        if self.is_one():
            return o
        if o.is_one():
            return self
        return Scalar(self.field, ip_mul(self.num, o.num),
                      ip_mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("scalar division by zero")
        return Scalar(self.field, ip_mul(self.num, o.den),
                      ip_mul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __pow__(self, n: int):
        if n == 0:
            return self.field.one
        if n < 0:
            if not self.num:
                raise ZeroDivisionError("inverting zero scalar")
            return Scalar(self.field, ip_pow(self.den, -n), ip_pow(self.num, -n))
        return Scalar(self.field, ip_pow(self.num, n), ip_pow(self.den, n),
                      _reduced=True)

    # -- structure

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return (self.field is other.field and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(sorted(self.num.items())),
                               tuple(sorted(self.den.items()))))
        return self._hash

    def as_fraction(self) -> Fraction:
        if any(any(e) for e in self.num) or any(any(e) for e in self.den):
            raise ValueError("scalar is not a constant")
        n = self.num.get((0,) * self.field.nvars, 0)
        d = self.den[(0,) * self.field.nvars]
        return Fraction(n, d)

    def substitute(self, bindings: dict, target: ParamField) -> "Scalar":
        """Map each parameter to a Scalar of the target field."""
        values = []
        for name in self.field.names:
            v = bindings.get(name)
            if v is None:
                if name not in target.names:
                    raise ValueError(f"no binding for parameter {name}")
                v = target.param(name)
            values.append(target.scalar(v))
        num = _ip_eval(self.num, values, target)
        den = _ip_eval(self.den, values, target)
        if den.is_zero():
            raise ZeroDivisionError("substitution hits a pole")
        return num / den

    def __str__(self):
        names = self.field.names
        ns = ip_to_str(self.num, names)
        if ip_is_one(self.den):
            return ns
        ds = ip_to_str(self.den, names)
        if len(self.num) > 1:
            ns = f"({ns})"
        if len(self.den) > 1 or "*" in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"Scalar({self})"


def _ip_eval(a: dict, values: list[Scalar], target: ParamField) -> Scalar:
    total = target.zero
    for e, c in a.items():
        term = target.scalar(c)
        for v, p in zip(values, e):
            if p:
                term = term * v ** p
        total = total + term
    return total


QQ = ParamField(())


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Dispatch helper for the four field operations."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")
