"""One text grammar shared by the algebra, triple and certificate catalogs.

Scalar expressions use ordinary infix syntax over integer/fraction literals,
parameter names, + - * / ^ and sqrt(...); parsing is exact, no floating point.
Catalog declarations:

    algebra NAME super_dim (m, n)
      params { p : free; eps : sign; rho : sqrt(expr); kappa : free \\ {0} }
      brackets { [b1, f1] = f1; ... }
      automorphism { params {...} matrix [[...], ...] constraints { c; d } }

    triple ID super_dim (m, n) params {...} label "..."
      left = NAME(p = p)            # or  left { [b1,f1] = f1; ... }
      right { [ft1, ft1] = eps*bt1; ... }

    cert ID params {...} from TRIPLE_ID(p = p) to TRIPLE_ID(...) matrix [[...], ...]

'#' starts a comment.  Semicolons between items are optional separators.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .scalars import Domain, ParamContext, Scalar

__all__ = ["parse_scalar", "parse_catalog", "Tokenizer"]

_PUNCT = ("(", ")", "[", "]", "{", "}", ",", ";", ":", "=", "+", "-", "*", "/",
          "^", "\\")


class Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return "Token(%s, %r)" % (self.kind, self.value)


class Tokenizer:
    def __init__(self, text):
        self.tokens = []
        line, col = 1, 1
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch == "\n":
                line += 1
                col = 1
                i += 1
                continue
            if ch in " \t\r":
                i += 1
                col += 1
                continue
            if ch == "#":
                while i < n and text[i] != "\n":
                    i += 1
                continue
            if ch == '"':
                j = i + 1
                while j < n and text[j] != '"':
                    j += 1
                if j >= n:
                    raise ParseError("unterminated string", line, col)
                self.tokens.append(Token("string", text[i + 1:j], line, col))
                col += j - i + 1
                i = j + 1
                continue
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.tokens.append(Token("int", int(text[i:j]), line, col))
                col += j - i
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(Token("name", text[i:j], line, col))
                col += j - i
                i = j
                continue
            if ch in _PUNCT:
                self.tokens.append(Token(ch, ch, line, col))
                i += 1
                col += 1
                continue
            raise ParseError("unexpected character %r" % ch, line, col)
        self.pos = 0

    def peek(self, k=0):
        if self.pos + k < len(self.tokens):
            return self.tokens[self.pos + k]
        return Token("eof", None, -1, -1)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            raise ParseError("expected %s%s, got %r"
                             % (kind, "" if value is None else " %r" % value,
                                tok.value), tok.line, tok.col)
        return tok

    def accept(self, kind, value=None):
        tok = self.peek()
        if tok.kind == kind and (value is None or tok.value == value):
            self.pos += 1
            return tok
        return None

    def at(self, kind, value=None):
        tok = self.peek()
        return tok.kind == kind and (value is None or tok.value == value)


# ---------------------------------------------------------------------------
# expression ASTs


def parse_expr(tz):
    return _expr(tz)


def _expr(tz):
    node = _term(tz)
    while True:
        if tz.accept("+"):
            node = ("add", node, _term(tz))
        elif tz.accept("-"):
            node = ("sub", node, _term(tz))
        else:
            return node


def _term(tz):
    node = _factor(tz)
    while True:
        if tz.accept("*"):
            node = ("mul", node, _factor(tz))
        elif tz.accept("/"):
            node = ("div", node, _factor(tz))
        else:
            return node


def _factor(tz):
    if tz.accept("-"):
        return ("neg", _factor(tz))
    if tz.accept("+"):
        return _factor(tz)
    return _power(tz)


def _power(tz):
    base = _atom(tz)
    if tz.accept("^"):
        neg = bool(tz.accept("-"))
        tok = tz.expect("int")
        return ("pow", base, -tok.value if neg else tok.value)
    return base


def _atom(tz):
    tok = tz.peek()
    if tok.kind == "int":
        tz.next()
        return ("num", Fraction(tok.value))
    if tok.kind == "name":
        tz.next()
        if tok.value == "sqrt":
            tz.expect("(")
            inner = _expr(tz)
            tz.expect(")")
            return ("sqrt", inner)
        return ("name", tok.value)
    if tok.kind == "(":
        tz.next()
        node = _expr(tz)
        tz.expect(")")
        return node
    raise ParseError("expected expression, got %r" % tok.value, tok.line, tok.col)


def eval_ast(ast, ctx, env=None):
    """Evaluate an expression AST to a Scalar of ctx.  env maps extra names
    to Scalars (used for generator-free contexts like matrix bindings)."""
    kind = ast[0]
    if kind == "num":
        return ctx.const(ast[1])
    if kind == "name":
        name = ast[1]
        if env and name in env:
            return env[name]
        return ctx.param(name)
    if kind == "add":
        return eval_ast(ast[1], ctx, env) + eval_ast(ast[2], ctx, env)
    if kind == "sub":
        return eval_ast(ast[1], ctx, env) - eval_ast(ast[2], ctx, env)
    if kind == "mul":
        return eval_ast(ast[1], ctx, env) * eval_ast(ast[2], ctx, env)
    if kind == "div":
        return eval_ast(ast[1], ctx, env) / eval_ast(ast[2], ctx, env)
    if kind == "neg":
        return -eval_ast(ast[1], ctx, env)
    if kind == "pow":
        return eval_ast(ast[1], ctx, env) ** ast[2]
    if kind == "sqrt":
        inner = eval_ast(ast[1], ctx, env)
        if ctx.radical_name is not None:
            r = ctx.radical()
            if (r * r - inner).is_zero():
                return r
        if inner.is_constant():
            v = inner.as_fraction()
            num, den = v.numerator, v.denominator
            rn = _isqrt_exact(num)
            rd = _isqrt_exact(den)
            if rn is not None and rd is not None:
                return ctx.const(Fraction(rn, rd))
        raise ParseError("sqrt(%s) does not match the context radical" % inner)
    raise ParseError("bad expression node %r" % (kind,))


def _isqrt_exact(k):
    if k < 0:
        return None
    from math import isqrt
    r = isqrt(k)
    return r if r * r == k else None


def parse_scalar(ctx, text):
    tz = Tokenizer(text)
    ast = parse_expr(tz)
    if not tz.at("eof"):
        tok = tz.peek()
        raise ParseError("trailing input %r" % tok.value, tok.line, tok.col)
    return eval_ast(ast, ctx)


def eval_generator_combo(ast, ctx, genmap):
    """Evaluate an AST as a linear combination of generators.

    genmap maps generator names to basis indices.  Returns {index: Scalar}.
    A pure scalar value is only allowed when it is zero.
    """
    scal, vec = _eval_combo(ast, ctx, genmap)
    if scal is not None and not scal.is_zero():
        raise ParseError("bracket value has a non-generator term %s" % scal)
    return {k: v for k, v in vec.items() if not v.is_zero()}


def _eval_combo(ast, ctx, genmap):
    """Returns (scalar_part or None, {gen_index: Scalar})."""
    kind = ast[0]
    if kind == "name" and ast[1] in genmap:
        return None, {genmap[ast[1]]: ctx.one()}
    if kind in ("num", "name", "sqrt"):
        return eval_ast(ast, ctx), {}
    if kind in ("add", "sub"):
        s1, v1 = _eval_combo(ast[1], ctx, genmap)
        s2, v2 = _eval_combo(ast[2], ctx, genmap)
        sign = 1 if kind == "add" else -1
        out = dict(v1)
        for k, c in v2.items():
            out[k] = out.get(k, ctx.zero()) + sign * c
        if s1 is None and s2 is None:
            s = None
        else:
            s = (s1 if s1 is not None else ctx.zero()) \
                + sign * (s2 if s2 is not None else ctx.zero())
        return s, out
    if kind == "neg":
        s, v = _eval_combo(ast[1], ctx, genmap)
        return (None if s is None else -s), {k: -c for k, c in v.items()}
    if kind == "mul":
        s1, v1 = _eval_combo(ast[1], ctx, genmap)
        s2, v2 = _eval_combo(ast[2], ctx, genmap)
        if v1 and v2:
            raise ParseError("product of generators in a bracket value")
        if v1:
            if s2 is None:
                s2 = ctx.zero()
            return (None if s1 is None else s1 * s2), {k: c * s2 for k, c in v1.items()}
        if v2:
            if s1 is None:
                s1 = ctx.zero()
            return (None if s2 is None else s1 * s2), {k: s1 * c for k, c in v2.items()}
        return eval_ast(ast, ctx), {}
    if kind == "div":
        s1, v1 = _eval_combo(ast[1], ctx, genmap)
        s2, v2 = _eval_combo(ast[2], ctx, genmap)
        if v2:
            raise ParseError("division by a generator")
        if s2 is None:
            s2 = ctx.zero()
        return (None if s1 is None else s1 / s2), {k: c / s2 for k, c in v1.items()}
    if kind == "pow":
        s, v = _eval_combo(ast[1], ctx, genmap)
        if v:
            raise ParseError("power of a generator")
        return eval_ast(ast, ctx), {}
    raise ParseError("bad expression node %r" % (kind,))


# ---------------------------------------------------------------------------
# domains and params blocks


def _parse_number(tz):
    neg = bool(tz.accept("-"))
    tok = tz.expect("int")
    value = Fraction(tok.value)
    if tz.accept("/"):
        value /= tz.expect("int").value
    return -value if neg else value


def _parse_bound(tz):
    if tz.at("name", "inf"):
        tz.next()
        return None
    if tz.at("-") and tz.peek(1).kind == "name" and tz.peek(1).value == "inf":
        tz.next()
        tz.next()
        return None
    return _parse_number(tz)


def _parse_exclusions(tz):
    if not tz.accept("\\"):
        return ()
    tz.expect("{")
    out = [_parse_number(tz)]
    while tz.accept(","):
        out.append(_parse_number(tz))
    tz.expect("}")
    return tuple(out)


def _parse_domain(tz):
    """Returns Domain or ('radical', ast)."""
    if tz.at("name", "sign"):
        tz.next()
        return Domain.sign()
    if tz.at("name", "free"):
        tz.next()
        return Domain.free(excluded=_parse_exclusions(tz))
    if tz.at("name", "sqrt"):
        tz.next()
        tz.expect("(")
        ast = parse_expr(tz)
        tz.expect(")")
        return ("radical", ast)
    if tz.at("{"):
        tz.next()
        values = [_parse_number(tz)]
        while tz.accept(","):
            values.append(_parse_number(tz))
        tz.expect("}")
        return Domain.finite(values)
    open_tok = tz.next()
    if open_tok.kind not in ("(", "["):
        raise ParseError("expected a domain", open_tok.line, open_tok.col)
    lo = _parse_bound(tz)
    tz.expect(",")
    hi = _parse_bound(tz)
    close_tok = tz.next()
    if close_tok.kind not in (")", "]"):
        raise ParseError("expected ) or ]", close_tok.line, close_tok.col)
    return Domain.interval(lo, hi,
                           lo_open=(open_tok.kind == "(" or lo is None),
                           hi_open=(close_tok.kind == ")" or hi is None),
                           excluded=_parse_exclusions(tz))


def _parse_params_block(tz):
    """params { name : domain ; ... } -> (param list, radical list with ASTs)."""
    params = []
    radicals = []
    tz.expect("{")
    while not tz.accept("}"):
        name = tz.expect("name").value
        tz.expect(":")
        dom = _parse_domain(tz)
        if isinstance(dom, tuple) and dom[0] == "radical":
            radicals.append((name, dom[1]))
        else:
            params.append((name, dom))
        tz.accept(";")
    return params, radicals


def build_context(params, radicals):
    """Assemble a ParamContext; radical radicands are expression ASTs in the
    declared parameters."""
    base = ParamContext(params)
    if not radicals:
        return base
    built = []
    for name, ast in radicals:
        radicand = eval_ast(ast, base)
        built.append((name, radicand))
    return ParamContext(params, built)


# ---------------------------------------------------------------------------
# declarations


class AlgebraDecl:
    def __init__(self, name, m, n, ctx, brackets, autos, comment=None):
        self.name = name
        self.m = m
        self.n = n
        self.ctx = ctx
        self.brackets = brackets  # list of (gen, gen, ast)
        self.autos = autos        # list of AutoBranchDecl
        self.comment = comment


class AutoBranchDecl:
    def __init__(self, params, radicals, matrix, constraints):
        self.params = params
        self.radicals = radicals
        self.matrix = matrix          # [[ast]]
        self.constraints = constraints  # [ast]


class TripleDecl:
    def __init__(self, ident, m, n, ctx, left, right, label=None):
        self.id = ident
        self.m = m
        self.n = n
        self.ctx = ctx
        self.left = left    # ("ref", name, {param: ast}) | ("inline", brackets)
        self.right = right
        self.label = label


class CertDecl:
    def __init__(self, ident, ctx, source, target, matrix):
        self.id = ident
        self.ctx = ctx
        self.source = source  # (triple_id, {param: ast})
        self.target = target
        self.matrix = matrix


def _parse_superdim(tz):
    tz.expect("name", "super_dim")
    tz.expect("(")
    m = tz.expect("int").value
    tz.expect(",")
    n = tz.expect("int").value
    tz.expect(")")
    return m, n


def _parse_brackets_block(tz):
    out = []
    tz.expect("{")
    while not tz.accept("}"):
        tz.expect("[")
        a = tz.expect("name").value
        tz.expect(",")
        b = tz.expect("name").value
        tz.expect("]")
        tz.expect("=")
        ast = parse_expr(tz)
        out.append((a, b, ast))
        tz.accept(";")
    return out


def _parse_matrix(tz):
    tz.expect("name", "matrix")
    tz.expect("[")
    rows = []
    while True:
        tz.expect("[")
        row = [parse_expr(tz)]
        while tz.accept(","):
            row.append(parse_expr(tz))
        tz.expect("]")
        rows.append(row)
        if not tz.accept(","):
            break
    tz.expect("]")
    return rows


def _parse_ref(tz):
    name = tz.expect("name").value
    bindings = {}
    tz.expect("(")
    if not tz.at(")"):
        while True:
            pname = tz.expect("name").value
            tz.expect("=")
            bindings[pname] = parse_expr(tz)
            if not tz.accept(","):
                break
    tz.expect(")")
    return name, bindings


def _parse_side(tz):
    if tz.accept("="):
        name, bindings = _parse_ref(tz)
        return ("ref", name, bindings)
    return ("inline", _parse_brackets_block(tz))


def _parse_algebra(tz):
    name = tz.expect("name").value
    m, n = _parse_superdim(tz)
    params, radicals = [], []
    brackets = []
    autos = []
    comment = None
    while True:
        if tz.accept("name", "params"):
            params, radicals = _parse_params_block(tz)
        elif tz.accept("name", "brackets"):
            brackets = _parse_brackets_block(tz)
        elif tz.accept("name", "comment"):
            comment = tz.expect("string").value
        elif tz.accept("name", "automorphism"):
            tz.expect("{")
            a_params, a_radicals = [], []
            if tz.accept("name", "params"):
                a_params, a_radicals = _parse_params_block(tz)
            matrix = _parse_matrix(tz)
            constraints = []
            if tz.accept("name", "constraints"):
                tz.expect("{")
                while not tz.accept("}"):
                    constraints.append(parse_expr(tz))
                    tz.accept(";")
            tz.expect("}")
            autos.append(AutoBranchDecl(a_params, a_radicals, matrix, constraints))
        else:
            break
    ctx = build_context(params, radicals)
    return AlgebraDecl(name, m, n, ctx, brackets, autos, comment)


def _parse_triple(tz):
    ident = tz.expect("name").value
    m, n = _parse_superdim(tz)
    params, radicals = [], []
    label = None
    left = right = None
    while True:
        if tz.accept("name", "params"):
            params, radicals = _parse_params_block(tz)
        elif tz.accept("name", "label"):
            label = tz.expect("string").value
        elif tz.accept("name", "left"):
            left = _parse_side(tz)
        elif tz.accept("name", "right"):
            right = _parse_side(tz)
        else:
            break
    if left is None or right is None:
        tok = tz.peek()
        raise ParseError("triple %s needs left and right sides" % ident,
                         tok.line, tok.col)
    ctx = build_context(params, radicals)
    return TripleDecl(ident, m, n, ctx, left, right, label)


def _parse_cert(tz):
    ident = tz.expect("name").value
    params, radicals = [], []
    source = target = None
    matrix = None
    while True:
        if tz.accept("name", "params"):
            params, radicals = _parse_params_block(tz)
        elif tz.accept("name", "from"):
            source = _parse_ref(tz)
        elif tz.accept("name", "to"):
            target = _parse_ref(tz)
        elif tz.at("name", "matrix"):
            matrix = _parse_matrix(tz)
        else:
            break
    if source is None or target is None or matrix is None:
        tok = tz.peek()
        raise ParseError("cert %s needs from, to and matrix" % ident,
                         tok.line, tok.col)
    ctx = build_context(params, radicals)
    return CertDecl(ident, ctx, source, target, matrix)


def parse_catalog(text):
    """Parse a catalog file into declaration objects."""
    tz = Tokenizer(text)
    decls = []
    while not tz.at("eof"):
        tok = tz.expect("name")
        if tok.value == "algebra":
            decls.append(_parse_algebra(tz))
        elif tok.value == "triple":
            decls.append(_parse_triple(tz))
        elif tok.value == "cert":
            decls.append(_parse_cert(tz))
        else:
            raise ParseError("expected algebra/triple/cert, got %r" % tok.value,
                             tok.line, tok.col)
    return decls


# ---------------------------------------------------------------------------
# rendering (round-trip support)


def render_params(ctx):
    bits = []
    for name in ctx.params:
        bits.append("%s : %s" % (name, ctx.domains[name].describe()))
    if ctx.radical_name is not None:
        from .scalars import _p_str
        bits.append("%s : sqrt(%s)" % (ctx.radical_name,
                                       _p_str(ctx.radicand, ctx.params)))
    return "params { %s }" % "; ".join(bits)


def render_combo(names, comps):
    """Render {index: Scalar} as a + joined generator combination."""
    bits = []
    for k in sorted(comps):
        s = str(comps[k])
        if s == "1":
            term = names[k]
        elif s == "-1":
            term = "-" + names[k]
        else:
            term = "(%s)*%s" % (s, names[k])
        bits.append(term)
    if not bits:
        return "0"
    out = bits[0]
    for term in bits[1:]:
        if term.startswith("-"):
            out += " - " + term[1:]
        else:
            out += " + " + term
    return out


def render_brackets(names, bracket_items):
    bits = []
    for (i, j), comps in bracket_items:
        bits.append("[%s, %s] = %s" % (names[i], names[j],
                                       render_combo(names, comps)))
    return "brackets { %s }" % "; ".join(bits)
