"""Exact coefficient arithmetic.

The tower is Q -> Q[params] -> Q(params) -> Q(params)[r]/(r^2 - q): multivariate
polynomials over the rationals in the context's named parameters, their fraction
field, and at most one quadratic extension generator per context.  Everything is
kept in a canonical form (expanded monomials, gcd-reduced fractions, denominator
integer-primitive with positive leading coefficient), so equality of scalars is
plain structural equality.

Polynomials are dicts mapping exponent tuples (one slot per context parameter,
in declaration order) to nonzero Fractions.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd as _igcd

from .errors import ConstraintViolation, DivisionByZero, InconsistentRadical, UnknownName

__all__ = ["Domain", "ParamContext", "Scalar", "arith", "is_zero", "substitute"]


# ---------------------------------------------------------------------------
# polynomial layer: dict[exponent tuple -> Fraction]

def _p_zero():
    return {}


def _p_const(c, nv):
    c = Fraction(c)
    if c == 0:
        return {}
    return {(0,) * nv: c}


def _p_var(i, nv):
    e = [0] * nv
    e[i] = 1
    return {tuple(e): Fraction(1)}


def _p_add(f, g):
    out = dict(f)
    for m, c in g.items():
        s = out.get(m)
        if s is None:
            out[m] = c
        else:
            s = s + c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def _p_neg(f):
    return {m: -c for m, c in f.items()}


def _p_sub(f, g):
    return _p_add(f, _p_neg(g))


def _p_scale(f, c):
    c = Fraction(c)
    if not c:
        return {}
    return {m: c * k for m, k in f.items()}


def _p_mul(f, g):
    if not f or not g:
        return {}
    if len(f) > len(g):
        f, g = g, f
    out = {}
    for mf, cf in f.items():
        for mg, cg in g.items():
            m = tuple(a + b for a, b in zip(mf, mg))
            s = out.get(m)
            if s is None:
                out[m] = cf * cg
            else:
                s = s + cf * cg
                if s:
                    out[m] = s
                else:
                    del out[m]
    return out


def _p_nvars(f):
    for m in f:
        return len(m)
    return 0  # zero polynomial carries no shape; callers pass nv explicitly


def _p_is_const(f):
    return all(all(e == 0 for e in m) for m in f)


def _p_const_value(f):
    if not f:
        return Fraction(0)
    (m, c), = f.items()
    return c


def _p_lead(f):
    return max(f)


def _p_content_signed(f):
    """Fraction c so that f/c has coprime integer coefficients and positive
    leading (lex-largest monomial) coefficient."""
    num = 0
    den = 1
    for c in f.values():
        num = _igcd(num, abs(c.numerator))
        den = den * c.denominator // _igcd(den, c.denominator)
    c = Fraction(num, den)
    if f[_p_lead(f)] < 0:
        c = -c
    return c


def _p_max_var(f):
    """Largest variable index with a positive exponent, or -1."""
    best = -1
    for m in f:
        for i in range(len(m) - 1, best, -1):
            if m[i]:
                best = i
                break
    return best


def _p_uni(f, v):
    """View f as univariate in variable v: dict degree -> coefficient poly."""
    out = {}
    for m, c in f.items():
        d = m[v]
        key = list(m)
        key[v] = 0
        key = tuple(key)
        coeff = out.setdefault(d, {})
        coeff[key] = coeff.get(key, Fraction(0)) + c
    return {d: {m: c for m, c in coeff.items() if c} for d, coeff in out.items() if coeff}


def _p_shift(f, v, k):
    out = {}
    for m, c in f.items():
        e = list(m)
        e[v] += k
        out[tuple(e)] = c
    return out


def _p_divexact(f, g):
    """Exact multivariate division; g must divide f."""
    if not f:
        return {}
    q = {}
    r = dict(f)
    lg = _p_lead(g)
    cg = g[lg]
    while r:
        lr = _p_lead(r)
        if any(a < b for a, b in zip(lr, lg)):
            raise ArithmeticError("inexact polynomial division")
        m = tuple(a - b for a, b in zip(lr, lg))
        c = r[lr] / cg
        q[m] = c
        r = _p_sub(r, _p_mul({m: c}, g))
    return q


def _p_primitive(f):
    if not f:
        return f
    return _p_scale(f, 1 / _p_content_signed(f))


def _p_gcd(f, g):
    """Primitive multivariate gcd with positive leading coefficient."""
    if not f:
        return _p_primitive(g)
    if not g:
        return _p_primitive(f)
    f = _p_primitive(f)
    g = _p_primitive(g)
    if f == g:
        return f
    v = max(_p_max_var(f), _p_max_var(g))
    if v < 0:
        return _p_const(1, len(next(iter(f))))
    cont_f = _p_list_gcd(list(_p_uni(f, v).values()))
    cont_g = _p_list_gcd(list(_p_uni(g, v).values()))
    cont = _p_gcd(cont_f, cont_g)
    fp = _p_divexact(f, cont_f)
    gp = _p_divexact(g, cont_g)
    # primitive pseudo-remainder sequence in the top variable
    if _p_deg(fp, v) < _p_deg(gp, v):
        fp, gp = gp, fp
    while gp:
        r = _p_prem(fp, gp, v)
        fp, gp = gp, _p_primitive(r)
    fp = _p_divexact(fp, _p_list_gcd(list(_p_uni(fp, v).values())))
    return _p_primitive(_p_mul(cont, fp))


def _p_list_gcd(polys):
    out = {}
    for p in polys:
        out = _p_gcd(out, p)
        if _p_is_const(out) and out:
            break
    return out


def _p_deg(f, v):
    return max((m[v] for m in f), default=-1)


def _p_prem(f, g, v):
    """Pseudo-remainder of f by g with respect to variable v."""
    df = _p_deg(f, v)
    dg = _p_deg(g, v)
    gu = _p_uni(g, v)
    lg = gu[dg]
    r = dict(f)
    e = df - dg + 1
    while r:
        dr = _p_deg(r, v)
        if dr < dg:
            break
        ru = _p_uni(r, v)
        lr = ru[dr]
        r = _p_sub(_p_mul(r, lg), _p_mul(_p_shift(lr, v, dr - dg), g))
        e -= 1
    for _ in range(e):
        r = _p_mul(r, lg)
    return r


def _p_subs(f, nv_new, keep, values):
    """Substitute values (dict old index -> Fraction) and reindex kept
    variables via keep (dict old index -> new index)."""
    out = {}
    for m, c in f.items():
        coeff = c
        e = [0] * nv_new
        for i, exp in enumerate(m):
            if not exp:
                continue
            if i in values:
                coeff = coeff * values[i] ** exp
            else:
                e[keep[i]] = exp
        if not coeff:
            continue
        key = tuple(e)
        s = out.get(key, Fraction(0)) + coeff
        if s:
            out[key] = s
        elif key in out:
            del out[key]
    return out


def _p_eval_scalar(f, value_of_var, one):
    """Evaluate a polynomial with Scalar-valued variables. one is the target
    context's unit Scalar."""
    total = one * 0
    for m, c in f.items():
        term = one * c
        for i, exp in enumerate(m):
            for _ in range(exp):
                term = term * value_of_var(i)
        total = total + term
    return total


def _p_str(f, names):
    if not f:
        return "0"
    parts = []
    for m in sorted(f, reverse=True):
        c = f[m]
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append("%s^%d" % (names[i], e))
        if not factors:
            body = str(abs(c))
        else:
            body = "*".join(factors)
            a = abs(c)
            if a != 1:
                body = "%s*%s" % (a, body)
        parts.append(("- " if c < 0 else "+ ") + body)
    s = " ".join(parts)
    if s.startswith("+ "):
        s = s[2:]
    elif s.startswith("- "):
        s = "-" + s[2:]
    return s


# ---------------------------------------------------------------------------
# rational functions: pairs (num, den) in canonical form

def _rf_make(num, den, nv):
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return ({}, _p_const(1, nv))
    if not _p_is_const(den):
        g = _p_gcd(num, den)
        if g and not (_p_is_const(g) and _p_const_value(g) == 1):
            num = _p_divexact(num, g)
            den = _p_divexact(den, g)
    c = _p_content_signed(den)
    if c != 1:
        num = _p_scale(num, 1 / c)
        den = _p_scale(den, 1 / c)
    return (num, den)


def _rf_is_one_den(rf):
    num, den = rf
    return _p_is_const(den) and _p_const_value(den) == 1


def _rf_add(a, b, nv):
    an, ad = a
    bn, bd = b
    if ad == bd:
        return _rf_make(_p_add(an, bn), ad, nv)
    return _rf_make(_p_add(_p_mul(an, bd), _p_mul(bn, ad)), _p_mul(ad, bd), nv)


def _rf_neg(a):
    return (_p_neg(a[0]), a[1])


def _rf_mul(a, b, nv):
    an, ad = a
    bn, bd = b
    if not an or not bn:
        return ({}, _p_const(1, nv))
    return _rf_make(_p_mul(an, bn), _p_mul(ad, bd), nv)


def _rf_div(a, b, nv):
    bn, bd = b
    if not bn:
        raise DivisionByZero("division by zero scalar")
    an, ad = a
    return _rf_make(_p_mul(an, bd), _p_mul(ad, bn), nv)


# ---------------------------------------------------------------------------


class Domain:
    """Allowed rational values of one parameter."""

    __slots__ = ("kind", "values", "lo", "hi", "lo_open", "hi_open", "excluded")

    def __init__(self, kind, values=None, lo=None, hi=None, lo_open=False,
                 hi_open=False, excluded=()):
        self.kind = kind  # 'free' | 'finite' | 'interval'
        self.values = tuple(values) if values is not None else None
        self.lo = lo
        self.hi = hi
        self.lo_open = lo_open
        self.hi_open = hi_open
        self.excluded = frozenset(Fraction(x) for x in excluded)

    @classmethod
    def free(cls, excluded=()):
        return cls("free", excluded=excluded)

    @classmethod
    def sign(cls):
        return cls("finite", values=(Fraction(1), Fraction(-1)))

    @classmethod
    def finite(cls, values):
        return cls("finite", values=tuple(Fraction(v) for v in values))

    @classmethod
    def interval(cls, lo, hi, lo_open=False, hi_open=False, excluded=()):
        return cls("interval", lo=lo, hi=hi, lo_open=lo_open, hi_open=hi_open,
                   excluded=excluded)

    @property
    def is_finite(self):
        return self.kind == "finite"

    @property
    def is_sign(self):
        return self.kind == "finite" and set(self.values) == {1, -1}

    def allows(self, value):
        value = Fraction(value)
        if self.kind == "finite":
            return value in self.values
        if value in self.excluded:
            return False
        if self.kind == "interval":
            if self.lo is not None:
                if value < self.lo or (self.lo_open and value == self.lo):
                    return False
            if self.hi is not None:
                if value > self.hi or (self.hi_open and value == self.hi):
                    return False
        return True

    def sample(self, rng):
        if self.kind == "finite":
            return rng.choice(self.values)
        for _ in range(1000):
            num = rng.randint(-12, 12)
            den = rng.randint(1, 6)
            v = Fraction(num, den)
            if self.kind == "interval":
                lo = self.lo if self.lo is not None else Fraction(-13)
                hi = self.hi if self.hi is not None else Fraction(13)
                span = hi - lo
                v = lo + abs(v) % 1 * span if span < 26 else v
            if self.allows(v):
                return v
        raise ConstraintViolation("could not sample domain")

    def describe(self):
        if self.kind == "finite":
            if self.is_sign:
                return "sign"
            return "{%s}" % ", ".join(str(v) for v in self.values)
        if self.kind == "free":
            base = "free"
        else:
            lo = "-inf" if self.lo is None else str(self.lo)
            hi = "inf" if self.hi is None else str(self.hi)
            base = "%s%s, %s%s" % ("(" if (self.lo_open or self.lo is None) else "[",
                                   lo, hi,
                                   ")" if (self.hi_open or self.hi is None) else "]")
        if self.excluded:
            base += " \\ {%s}" % ", ".join(str(v) for v in sorted(self.excluded))
        return base

    def __eq__(self, other):
        return (isinstance(other, Domain)
                and (self.kind, self.values, self.lo, self.hi, self.lo_open,
                     self.hi_open, self.excluded)
                == (other.kind, other.values, other.lo, other.hi, other.lo_open,
                    other.hi_open, other.excluded))

    def __hash__(self):
        return hash((self.kind, self.values, self.lo, self.hi, self.lo_open,
                     self.hi_open, self.excluded))

    def __repr__(self):
        return "Domain(%s)" % self.describe()


class ParamContext:
    """Named parameters with domains, plus at most one radical generator
    r with a defining relation r^2 = q, q a polynomial in the parameters."""

    __slots__ = ("params", "domains", "radical_name", "radicand", "_index",
                 "_zero", "_one")

    def __init__(self, params=(), radicals=()):
        names = []
        domains = {}
        for name, dom in params:
            if name in domains:
                raise ConstraintViolation("duplicate parameter %r" % name)
            names.append(name)
            domains[name] = dom
        self.params = tuple(names)
        self.domains = domains
        self._index = {name: i for i, name in enumerate(self.params)}
        radicals = list(radicals)
        if len(radicals) > 1:
            raise ConstraintViolation("at most one radical per context")
        if radicals:
            rname, radicand = radicals[0]
            if rname in domains:
                raise ConstraintViolation("radical name %r clashes with parameter" % rname)
            poly = self._coerce_radicand(radicand)
            self.radical_name = rname
            self.radicand = poly
        else:
            self.radical_name = None
            self.radicand = None
        self._zero = None
        self._one = None

    def _coerce_radicand(self, radicand):
        if isinstance(radicand, Scalar):
            if radicand.ctx.params != self.params:
                raise ConstraintViolation("radicand context mismatch")
            if not radicand._rad_is_zero() or not _rf_is_one_den(radicand.re):
                raise ConstraintViolation("radicand must be a polynomial in the parameters")
            return radicand.re[0]
        if isinstance(radicand, dict):
            return radicand
        return _p_const(Fraction(radicand), len(self.params))

    # -- scalar constructors ------------------------------------------------

    @property
    def nvars(self):
        return len(self.params)

    def zero(self):
        if self._zero is None:
            self._zero = self.const(0)
        return self._zero

    def one(self):
        if self._one is None:
            self._one = self.const(1)
        return self._one

    def const(self, c):
        nv = self.nvars
        return Scalar(self, (_p_const(c, nv), _p_const(1, nv)), None)

    def param(self, name):
        if name == self.radical_name:
            return self.radical()
        if name not in self._index:
            raise UnknownName(name)
        nv = self.nvars
        return Scalar(self, (_p_var(self._index[name], nv), _p_const(1, nv)), None)

    def radical(self):
        if self.radical_name is None:
            raise UnknownName("context has no radical")
        nv = self.nvars
        return Scalar(self, ({}, _p_const(1, nv)),
                      (_p_const(1, nv), _p_const(1, nv)))

    def names(self):
        out = list(self.params)
        if self.radical_name:
            out.append(self.radical_name)
        return out

    def parse(self, text):
        from .parsing import parse_scalar
        return parse_scalar(self, text)

    # -- structure ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, ParamContext)
                and self.params == other.params
                and all(self.domains[k] == other.domains[k] for k in self.params)
                and self.radical_name == other.radical_name
                and self.radicand == other.radicand)

    def __hash__(self):
        return hash((self.params, self.radical_name))

    def __repr__(self):
        bits = ["%s: %s" % (n, self.domains[n].describe()) for n in self.params]
        if self.radical_name:
            bits.append("%s = sqrt(%s)" % (self.radical_name,
                                           _p_str(self.radicand, self.params)))
        return "ParamContext{%s}" % "; ".join(bits)

    def check_binding(self, name, value):
        dom = self.domains.get(name)
        if dom is None:
            raise UnknownName(name)
        if not dom.allows(value):
            raise ConstraintViolation(
                "%s = %s violates domain %s" % (name, value, dom.describe()))

    def sign_branches(self):
        """All assignments of the finite-domain parameters (each branch is a
        {name: Fraction} map; a single empty branch when there are none)."""
        finite = [n for n in self.params if self.domains[n].is_finite]
        branches = [{}]
        for name in finite:
            new = []
            for values in branches:
                for v in self.domains[name].values:
                    b = dict(values)
                    b[name] = v
                    new.append(b)
            branches = new
        return branches

    def sample_bindings(self, rng, include_finite=True):
        out = {}
        for name in self.params:
            dom = self.domains[name]
            if dom.is_finite and not include_finite:
                continue
            out[name] = dom.sample(rng)
        return out

    # -- substitution -------------------------------------------------------

    def bind(self, bindings, check_domains=True):
        """Substitute rational values for a subset of the parameters.

        Returns (new_ctx, mapper) where mapper sends scalars of this context
        to scalars of new_ctx.  The radical may be bound too (its radicand
        must then become fully numeric and match the bound value squared).
        """
        bindings = {k: Fraction(v) for k, v in bindings.items()}
        rad_value = None
        if self.radical_name is not None and self.radical_name in bindings:
            rad_value = bindings.pop(self.radical_name)
        for name, value in bindings.items():
            if name not in self._index:
                raise UnknownName(name)
            if check_domains:
                self.check_binding(name, value)

        values = {self._index[n]: v for n, v in bindings.items()}
        keep_names = [n for n in self.params if n not in bindings]
        keep = {self._index[n]: i for i, n in enumerate(keep_names)}
        nv_new = len(keep_names)

        new_radicals = ()
        if self.radicand is not None:
            new_radicand = _p_subs(self.radicand, nv_new, keep, values)
            if rad_value is not None:
                if not _p_is_const(new_radicand):
                    raise InconsistentRadical(
                        "cannot bind radical before its radicand is numeric")
                want = _p_const_value(new_radicand)
                if rad_value * rad_value != want:
                    raise InconsistentRadical(
                        "%s^2 = %s but radicand evaluates to %s"
                        % (self.radical_name, rad_value * rad_value, want))
            else:
                new_radicals = ((self.radical_name, new_radicand),)
        new_ctx = ParamContext(
            [(n, self.domains[n]) for n in keep_names], new_radicals)

        one_new = _p_const(1, nv_new)

        def mapper(s):
            if s.ctx is not self and s.ctx != self:
                raise ConstraintViolation("scalar from foreign context")
            num = _p_subs(s.re[0], nv_new, keep, values)
            den = _p_subs(s.re[1], nv_new, keep, values)
            re = _rf_make(num, den, nv_new)
            if s.rad is None:
                return Scalar(new_ctx, re, None)
            rnum = _p_subs(s.rad[0], nv_new, keep, values)
            rden = _p_subs(s.rad[1], nv_new, keep, values)
            rad = _rf_make(rnum, rden, nv_new)
            if rad_value is not None:
                re = _rf_add(re, _rf_mul(rad, (_p_const(rad_value, nv_new), one_new),
                                         nv_new), nv_new)
                return Scalar(new_ctx, re, None)
            if not rad[0]:
                return Scalar(new_ctx, re, None)
            return Scalar(new_ctx, re, rad)

        return new_ctx, mapper

    def bind_scalars(self, target_ctx, bindings):
        """Map this context's scalars into target_ctx, sending each parameter
        to a Scalar of target_ctx (given explicitly, or matched by name)."""
        value_of = {}
        for name in self.params:
            if name in bindings:
                v = bindings[name]
                if not isinstance(v, Scalar):
                    v = target_ctx.const(v)
                elif v.ctx is not target_ctx and v.ctx != target_ctx:
                    raise ConstraintViolation("binding scalar from foreign context")
                value_of[self._index[name]] = v
            else:
                value_of[self._index[name]] = target_ctx.param(name)
        rad_image = None
        if self.radical_name is not None:
            one = target_ctx.one()
            radicand_image = _p_eval_scalar(self.radicand,
                                            lambda i: value_of[i], one)
            if self.radical_name in bindings:
                rad_image = bindings[self.radical_name]
                if not isinstance(rad_image, Scalar):
                    rad_image = target_ctx.const(rad_image)
                if not (rad_image * rad_image - radicand_image).is_zero():
                    raise InconsistentRadical("bound radical does not square to radicand")
            elif target_ctx.radical_name is not None:
                target_radicand = Scalar(
                    target_ctx, (target_ctx.radicand, _p_const(1, target_ctx.nvars)), None)
                if not (target_radicand - radicand_image).is_zero():
                    raise InconsistentRadical("radicand does not match target context radical")
                rad_image = target_ctx.radical()
            else:
                raise InconsistentRadical("target context lacks a radical for %r"
                                          % self.radical_name)

        one = target_ctx.one()

        def mapper(s):
            num = _p_eval_scalar(s.re[0], lambda i: value_of[i], one)
            den = _p_eval_scalar(s.re[1], lambda i: value_of[i], one)
            out = num / den
            if s.rad is not None and s.rad[0]:
                rnum = _p_eval_scalar(s.rad[0], lambda i: value_of[i], one)
                rden = _p_eval_scalar(s.rad[1], lambda i: value_of[i], one)
                out = out + (rnum / rden) * rad_image
            return out

        return mapper


class Scalar:
    """Element a + b*r of the fraction field (b = 0 when the context has no
    radical in play); r^2 equals the context radicand."""

    __slots__ = ("ctx", "re", "rad")

    def __init__(self, ctx, re, rad):
        self.ctx = ctx
        self.re = re
        if rad is not None and not rad[0]:
            rad = None
        self.rad = rad

    # -- helpers ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.ctx is self.ctx or other.ctx == self.ctx:
                return other
            raise ConstraintViolation("scalar context mismatch")
        if isinstance(other, (int, Fraction)):
            return self.ctx.const(other)
        return NotImplemented

    def _rad_is_zero(self):
        return self.rad is None or not self.rad[0]

    def _rad_rf(self):
        if self.rad is not None:
            return self.rad
        return ({}, _p_const(1, self.ctx.nvars))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        nv = self.ctx.nvars
        re = _rf_add(self.re, other.re, nv)
        if self._rad_is_zero() and other._rad_is_zero():
            return Scalar(self.ctx, re, None)
        rad = _rf_add(self._rad_rf(), other._rad_rf(), nv)
        return Scalar(self.ctx, re, rad)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        rad = None if self.rad is None else _rf_neg(self.rad)
        return Scalar(self.ctx, _rf_neg(self.re), rad)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        nv = self.ctx.nvars
        if self._rad_is_zero() and other._rad_is_zero():
            return Scalar(self.ctx, _rf_mul(self.re, other.re, nv), None)
        a, b = self.re, self._rad_rf()
        c, d = other.re, other._rad_rf()
        q = (self.ctx.radicand, _p_const(1, nv))
        re = _rf_add(_rf_mul(a, c, nv), _rf_mul(_rf_mul(b, d, nv), q, nv), nv)
        rad = _rf_add(_rf_mul(a, d, nv), _rf_mul(b, c, nv), nv)
        return Scalar(self.ctx, re, rad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def inv(self):
        nv = self.ctx.nvars
        if self.is_zero():
            raise DivisionByZero("inverse of zero scalar")
        if self._rad_is_zero():
            num, den = self.re
            return Scalar(self.ctx, _rf_make(den, num, nv), None)
        a, b = self.re, self._rad_rf()
        q = (self.ctx.radicand, _p_const(1, nv))
        norm = _rf_add(_rf_mul(a, a, nv),
                       _rf_neg(_rf_mul(_rf_mul(b, b, nv), q, nv)), nv)
        if not norm[0]:
            raise DivisionByZero("radicand is a perfect square; element not invertible here")
        inv_norm = _rf_make(norm[1], norm[0], nv)
        return Scalar(self.ctx, _rf_mul(a, inv_norm, nv),
                      _rf_neg(_rf_mul(b, inv_norm, nv)))

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        out = self.ctx.one()
        for _ in range(k):
            out = out * self
        return out

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.re[0] and self._rad_is_zero()

    def is_one(self):
        return self._rad_is_zero() and self.re == self.ctx.one().re

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.ctx is not other.ctx and self.ctx != other.ctx:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.key())

    def key(self):
        """Hashable canonical key (context-local)."""
        def freeze(rf):
            return tuple(sorted(rf[0].items())), tuple(sorted(rf[1].items()))
        return (freeze(self.re), None if self.rad is None else freeze(self.rad))

    def is_constant(self):
        ok = _p_is_const(self.re[0]) and _p_is_const(self.re[1])
        return ok and self._rad_is_zero()

    def as_fraction(self):
        if not self.is_constant():
            raise ConstraintViolation("scalar %s is not numeric" % self)
        if not self.re[0]:
            return Fraction(0)
        return _p_const_value(self.re[0]) / _p_const_value(self.re[1])

    # -- substitution -------------------------------------------------------

    def substitute(self, bindings, check_domains=True):
        _, mapper = self.ctx.bind(bindings, check_domains=check_domains)
        return mapper(self)

    # -- display ------------------------------------------------------------

    def __str__(self):
        names = self.ctx.params
        bits = []
        num, den = self.re
        if num:
            s = _p_str(num, names)
            if not _rf_is_one_den(self.re):
                s = "(%s)/(%s)" % (s, _p_str(den, names))
            bits.append(s)
        if not self._rad_is_zero():
            rnum, rden = self.rad
            rs = _p_str(rnum, names)
            if not _rf_is_one_den(self.rad):
                rs = "(%s)/(%s)" % (rs, _p_str(rden, names))
            if rs == "1":
                rs = self.ctx.radical_name
            elif rs == "-1":
                rs = "-" + self.ctx.radical_name
            elif len(rnum) > 1 or not _rf_is_one_den(self.rad):
                rs = "(%s)*%s" % (rs, self.ctx.radical_name)
            else:
                rs = "%s*%s" % (rs, self.ctx.radical_name)
            if bits and not rs.startswith("-"):
                bits.append("+ " + rs)
            else:
                bits.append(rs)
        if not bits:
            return "0"
        return " ".join(bits)

    def __repr__(self):
        return "Scalar(%s)" % self

    def __bool__(self):
        return not self.is_zero()


EMPTY_CONTEXT = ParamContext()


# ---------------------------------------------------------------------------
# spec surface helpers


def arith(a, b, op):
    """Dispatch arithmetic by name; op in {add, sub, mul, div, neg, inv}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    raise ValueError("unknown op %r" % op)


def is_zero(s):
    return s.is_zero()


def substitute(s, bindings):
    return s.substitute(bindings)


def vanishes_on_branches(s):
    """True iff s is identically zero on every finite-domain branch of its
    context (sign parameters etc. substituted exhaustively)."""
    branches = s.ctx.sign_branches()
    if len(branches) == 1 and not branches[0]:
        return s.is_zero()
    return all(s.substitute(b).is_zero() for b in branches)


def random_scalar(ctx, rng, depth=2):
    """Small random scalar for property tests."""
    if depth == 0 or not ctx.params:
        return ctx.const(Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
    op = rng.randint(0, 3)
    if op == 0:
        return ctx.param(rng.choice(ctx.params))
    a = random_scalar(ctx, rng, depth - 1)
    b = random_scalar(ctx, rng, depth - 1)
    if op == 1:
        return a + b
    if op == 2:
        return a * b
    return a - b
