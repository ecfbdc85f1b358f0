"""Laurent polynomials and rational functions in geometric variables.

A Laurent polynomial is a dict mapping integer exponent tuples (either
sign) to Scalar coefficients.  A LaurentRat keeps its denominator as a
multiset of interned polynomial factors rather than an expanded product:
all arithmetic then needs only polynomial multiplication, exact division
against known factors, and cross-multiplication for equality -- never a
multivariate gcd.  Zero testing is exact (empty numerator).

Two derivation models share this module: ``mult`` (Euler derivations
E_t = z_t d/dz_t, used for exponential coordinates) and ``add`` (plain
partial derivatives, used for the rational limit).
"""

from __future__ import annotations

import heapq
from fractions import Fraction

from .exact import ParamField, Scalar


def _grlex(e):
    return (sum(e), e)


# ---------------------------------------------------------------------------
# raw Laurent polynomials: dict[expo tuple -> Scalar]


def lp_add(a: dict, b: dict) -> dict:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for e, c in b.items():
        s = out.get(e)
        s = c if s is None else s + c
        if s.is_zero():
            out.pop(e, None)
        else:
            out[e] = s
    return out


def lp_neg(a: dict) -> dict:
    return {e: -c for e, c in a.items()}


def lp_sub(a: dict, b: dict) -> dict:
    return lp_add(a, lp_neg(b)) if b else a


def lp_mul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
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
    return out


def lp_smul(a: dict, c: Scalar) -> dict:
    if c.is_zero():
        return {}
    if c.is_one():
        return a
    return {e: cc * c for e, cc in a.items()}


def lp_shift(a: dict, mono) -> dict:
    if not any(mono):
        return a
    return {tuple(x + y for x, y in zip(e, mono)): c for e, c in a.items()}


def lp_double(a: dict) -> dict:
    return {tuple(2 * x for x in e): c for e, c in a.items()}


def lp_exact_div(a: dict, b: dict, cap: int | None = None):
    """Quotient a/b in the Laurent ring, or None when not exact.

    Heap-driven elimination in graded-lex order; the step cap guards
    against the non-terminating expansions an inexact Laurent division
    would produce.
    """
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return {}
    if len(b) == 1:
        (eb, cb), = b.items()
        return {tuple(x - y for x, y in zip(e, eb)): c / cb for e, c in a.items()}
    lead = max(b, key=_grlex)
    lc = b[lead]
    tail = [(e, c) for e, c in b.items() if e != lead]
    if cap is None:
        cap = 16 * len(a) + 256
    heap = [((-sum(e),) + tuple(-x for x in e), e) for e in a]
    heapq.heapify(heap)
    pending = dict(a)
    q: dict = {}
    steps = 0
    while heap:
        key, e = heapq.heappop(heap)
        c = pending.pop(e, None)
        if c is None or c.is_zero():
            continue
        steps += 1
        if steps > cap:
            return None
        qe = tuple(x - y for x, y in zip(e, lead))
        qc = c / lc
        q[qe] = qc
        for et, ct in tail:
            e2 = tuple(x + y for x, y in zip(qe, et))
            prev = pending.get(e2)
            nxt = -qc * ct if prev is None else prev - qc * ct
            if nxt.is_zero():
                pending.pop(e2, None)
            else:
                if prev is None:
                    heapq.heappush(heap, ((-sum(e2),) + tuple(-x for x in e2), e2))
                pending[e2] = nxt
    return q


def lp_to_str(a: dict, names) -> str:
    if not a:
        return "0"
    parts = []
    for e in sorted(a, key=_grlex, reverse=True):
        c = a[e]
        mono = "*".join(n if p == 1 else f"{n}^{p}"
                        for n, p in zip(names, e) if p)
        cs = str(c)
        if mono:
            if c.is_one():
                term = mono
            elif cs == "-1":
                term = "-" + mono
            else:
                if "+" in cs or " - " in cs or "/" in cs:
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


# ---------------------------------------------------------------------------
# interned denominator factors


class Factor:
    """Canonical denominator factor: monic, monomial-content-free."""

    __slots__ = ("terms", "index", "_str")

    def __init__(self, terms: dict, index: int):
        self.terms = terms
        self.index = index
        self._str = None

    def __repr__(self):
        return f"Factor#{self.index}"


class LaurentContext:
    """Shared arithmetic context: variables, model, factor registry."""

    def __init__(self, field: ParamField, varnames, model: str = "mult"):
        if model not in ("mult", "add"):
            raise ValueError("model must be 'mult' or 'add'")
        self.field = field
        self.vars = tuple(varnames)
        self.nvars = len(self.vars)
        self.model = model
        self._factors: dict = {}
        self._factor_list: list[Factor] = []
        self._power_cache: dict = {}
        self.zero = LaurentRat(self, {}, ())
        self.one = LaurentRat(self, {(0,) * self.nvars: field.one}, ())

    # -- construction helpers

    def scalar(self, value) -> "LaurentRat":
        c = self.field.scalar(value)
        if c.is_zero():
            return self.zero
        return LaurentRat(self, {(0,) * self.nvars: c}, ())

    def monomial(self, expo, coeff=1) -> "LaurentRat":
        c = self.field.scalar(coeff)
        if c.is_zero():
            return self.zero
        return LaurentRat(self, {tuple(expo): c}, ())

    def from_poly(self, terms: dict) -> "LaurentRat":
        return LaurentRat(self, {e: self.field.scalar(c) for e, c in terms.items()
                                 if not self.field.scalar(c).is_zero()}, ())

    def intern_factor(self, terms: dict):
        """Canonicalize a polynomial and return (unit_mono, unit_scalar, Factor).

        terms == z^unit_mono * unit_scalar * factor.terms with the factor
        monic in graded-lex order and free of monomial content.
        """
        if not terms:
            raise ZeroDivisionError("zero denominator factor")
        mono = tuple(min(e[i] for e in terms) for i in range(self.nvars))
        shifted = lp_shift(terms, tuple(-x for x in mono))
        lead = max(shifted, key=_grlex)
        lc = shifted[lead]
        if not lc.is_one():
            shifted = {e: c / lc for e, c in shifted.items()}
        key = tuple(sorted((e, hash(c)) for e, c in shifted.items()))
        fac = self._factors.get(key)
        if fac is None:
            fac = Factor(shifted, len(self._factor_list))
            self._factors[key] = fac
            self._factor_list.append(fac)
        return mono, lc, fac

    def ratio(self, num_terms: dict, den_terms: dict) -> "LaurentRat":
        mono, lc, fac = self.intern_factor(den_terms)
        num = {tuple(x - y for x, y in zip(e, mono)): c / lc
               for e, c in num_terms.items() if not c.is_zero()}
        return LaurentRat(self, num, ((fac, 1),))._cancel()

    def factor_power(self, fac: Factor, n: int) -> dict:
        if n == 0:
            return {(0,) * self.nvars: self.field.one}
        key = (fac.index, n)
        p = self._power_cache.get(key)
        if p is None:
            p = lp_mul(self.factor_power(fac, n - 1), fac.terms)
            self._power_cache[key] = p
        return p

    def expand_bag(self, bag) -> dict:
        out = {(0,) * self.nvars: self.field.one}
        for fac, n in bag:
            out = lp_mul(out, self.factor_power(fac, n))
        return out

    def derive_poly(self, a: dict, t: int) -> dict:
        """Derivation of a Laurent polynomial in variable slot t."""
        out = {}
        if self.model == "mult":
            for e, c in a.items():
                if e[t]:
                    out[e] = c * e[t]
        else:
            for e, c in a.items():
                if e[t]:
                    e2 = e[:t] + (e[t] - 1,) + e[t + 1:]
                    s = out.get(e2)
                    s = c * e[t] if s is None else s + c * e[t]
                    if s.is_zero():
                        out.pop(e2, None)
                    else:
                        out[e2] = s
        return out


class LaurentRat:
    """Rational function num / prod(factor^e) over a LaurentContext."""

    __slots__ = ("ctx", "num", "den", "_hash")

    def __init__(self, ctx: LaurentContext, num: dict, den: tuple):
        self.ctx = ctx
        self.num = num
        self.den = tuple(sorted(den, key=lambda p: p[0].index)) if den else ()
        self._hash = None

    # -- predicates

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_scalar(self) -> bool:
        if self.den or len(self.num) > 1:
            return False
        return not self.num or not any(next(iter(self.num)))

    def as_scalar(self) -> Scalar:
        if not self.num:
            return self.ctx.field.zero
        red = self.reduce_full()
        if red.den or len(red.num) != 1 or any(next(iter(red.num))):
            raise ValueError("not a scalar")
        return next(iter(red.num.values()))

    # -- cancellation

    def _cancel(self) -> "LaurentRat":
        if not self.num or not self.den:
            return self
        num = self.num
        new_den = []
        changed = False
        for fac, n in self.den:
            while n > 0:
                q = lp_exact_div(num, fac.terms, cap=8 * len(num) + 64)
                if q is None:
                    break
                num, n = q, n - 1
                changed = True
            if n:
                new_den.append((fac, n))
        if not changed:
            return self
        return LaurentRat(self.ctx, num, tuple(new_den))

    def reduce_full(self) -> "LaurentRat":
        return self._cancel()

    # -- arithmetic

    def __add__(self, other: "LaurentRat") -> "LaurentRat":
        if not isinstance(other, LaurentRat):
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            return LaurentRat(self.ctx, lp_add(self.num, other.num), self.den)._cancel()
        da = dict((f.index, (f, n)) for f, n in self.den)
        db = dict((f.index, (f, n)) for f, n in other.den)
        lcm = {}
        for idx, (f, n) in da.items():
            lcm[idx] = (f, n)
        for idx, (f, n) in db.items():
            if idx not in lcm or lcm[idx][1] < n:
                lcm[idx] = (f, n)
        missing_a = [(f, n - da.get(idx, (f, 0))[1]) for idx, (f, n) in lcm.items()
                     if n > da.get(idx, (f, 0))[1]]
        missing_b = [(f, n - db.get(idx, (f, 0))[1]) for idx, (f, n) in lcm.items()
                     if n > db.get(idx, (f, 0))[1]]
        na = lp_mul(self.num, self.ctx.expand_bag(missing_a)) if missing_a else self.num
        nb = lp_mul(other.num, self.ctx.expand_bag(missing_b)) if missing_b else other.num
        return LaurentRat(self.ctx, lp_add(na, nb), tuple(lcm.values()))._cancel()

    def __neg__(self):
        return LaurentRat(self.ctx, lp_neg(self.num), self.den)

    def __sub__(self, other):
        if not isinstance(other, LaurentRat):
            return NotImplemented
        return self.__add__(other.__neg__())

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(self.ctx.field.scalar(other))
        if not isinstance(other, LaurentRat):
            return NotImplemented
        if not self.num or not other.num:
            return self.ctx.zero
        bag: dict = {}
        for f, n in self.den:
            bag[f.index] = (f, n)
        for f, n in other.den:
            if f.index in bag:
                bag[f.index] = (f, bag[f.index][1] + n)
            else:
                bag[f.index] = (f, n)
        return LaurentRat(self.ctx, lp_mul(self.num, other.num),
                          tuple(bag.values()))._cancel()

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "LaurentRat":
        if c.is_zero():
            return self.ctx.zero
        if c.is_one():
            return self
        return LaurentRat(self.ctx, lp_smul(self.num, c), self.den)

    def inverse(self) -> "LaurentRat":
        if not self.num:
            raise ZeroDivisionError("inverting zero")
        den = self.ctx.expand_bag(self.den)
        mono, lc, fac = self.ctx.intern_factor(self.num)
        num = {tuple(x - y for x, y in zip(e, mono)): c / lc for e, c in den.items()}
        return LaurentRat(self.ctx, num, ((fac, 1),))._cancel()

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(self.ctx.field.one / self.ctx.field.scalar(other))
        if not isinstance(other, LaurentRat):
            return NotImplemented
        return self.__mul__(other.inverse())

    def derive(self, t: int) -> "LaurentRat":
        ctx = self.ctx
        dnum = ctx.derive_poly(self.num, t)
        if not self.den:
            return LaurentRat(ctx, dnum, ())
        distinct = [f for f, _ in self.den]
        prod_all = ctx.expand_bag([(f, 1) for f in distinct])
        total = lp_mul(dnum, prod_all) if dnum else {}
        for i, (f, n) in enumerate(self.den):
            df = ctx.derive_poly(f.terms, t)
            if not df:
                continue
            rest = [(g, 1) for j, (g, _) in enumerate(self.den) if j != i]
            piece = lp_mul(self.num, lp_smul(df, ctx.field.scalar(n)))
            if rest:
                piece = lp_mul(piece, ctx.expand_bag(rest))
            total = lp_sub(total, piece)
        den = tuple((f, n + 1) for f, n in self.den)
        return LaurentRat(ctx, total, den)._cancel()

    def double_exponents(self) -> "LaurentRat":
        """Pull back along z -> z^2 (the dilation x -> 2x downstairs)."""
        ctx = self.ctx
        num = lp_double(self.num)
        den = []
        for f, n in self.den:
            mono, lc, fac = ctx.intern_factor(lp_double(f.terms))
            num = lp_shift(lp_smul(num, (ctx.field.one / lc) ** n),
                           tuple(-n * x for x in mono))
            den.append((fac, n))
        return LaurentRat(ctx, num, tuple(den))

    def substitute_params(self, bindings: dict, target_field: ParamField) -> "LaurentRat":
        ctx2 = LaurentContext(target_field, self.ctx.vars, self.ctx.model)
        num = {}
        for e, c in self.num.items():
            c2 = c.substitute(bindings, target_field)
            if not c2.is_zero():
                num[e] = c2
        den = []
        for f, n in self.den:
            terms = {e: c.substitute(bindings, target_field)
                     for e, c in f.terms.items()}
            mono, lc, fac = ctx2.intern_factor({e: c for e, c in terms.items()
                                                if not c.is_zero()})
            num = lp_shift(lp_smul(num, (target_field.one / lc) ** n),
                           tuple(-n * x for x in mono))
            den.append((fac, n))
        return LaurentRat(ctx2, num, tuple(den))._cancel()

    # -- structure

    def __eq__(self, other):
        if not isinstance(other, LaurentRat):
            return NotImplemented
        if self.ctx is not other.ctx:
            raise ValueError("mixed Laurent contexts")
        if self.den == other.den:
            return self.num == other.num
        # cross-multiply: a/b == c/d  iff  a*d - c*b == 0
        diff = self - other
        return not diff.num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(sorted(self.num.items())),
                               tuple((f.index, n) for f, n in self.den)))
        return self._hash

    def __str__(self):
        ns = lp_to_str(self.num, self.ctx.vars)
        if not self.den:
            return ns
        parts = []
        for f, n in self.den:
            fs = lp_to_str(f.terms, self.ctx.vars)
            parts.append(f"({fs})" + (f"^{n}" if n > 1 else ""))
        ds = "*".join(parts)
        if len(self.num) > 1:
            ns = f"({ns})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"LaurentRat({self})"


def ratfun_is_zero(f: LaurentRat) -> bool:
    """Exact zero test: the reduced numerator is the zero polynomial."""
    return f.is_zero()
