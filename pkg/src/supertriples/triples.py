"""Manin supertriples and their Drinfel'd superdoubles.

A triple holds the two subalgebra tensors F_{IJ}^K and F~^{IJ}_K over one
shared parameter context.  The double's mixed brackets are always generated
from them, never entered by hand:

    [X_I, X~^J] = F~^{JK}_I X_K + F_{KI}^J X~^K
"""

from __future__ import annotations

from .algebra import Grading, SuperAlgebra, check_jacobi
from .errors import DimensionMismatch
from .forms import canonical_form

__all__ = ["ManinTriple", "DoubleAlgebra", "build_double",
           "check_compatibility", "t_dual"]


class ManinTriple:
    __slots__ = ("S", "S_dual", "ctx", "id", "label")

    def __init__(self, S, S_dual, ident=None, label=None):
        if S.superdim() != S_dual.superdim():
            raise DimensionMismatch("subalgebra superdimensions differ")
        if S.ctx is not S_dual.ctx and S.ctx != S_dual.ctx:
            raise DimensionMismatch("subalgebras must share a context")
        self.S = S
        self.S_dual = S_dual
        self.ctx = S.ctx
        self.id = ident
        self.label = label

    @property
    def grading(self):
        return self.S.grading

    def superdim(self):
        return self.S.superdim()

    def substitute(self, bindings, check_domains=True):
        return ManinTriple(self.S.substitute(bindings, check_domains),
                           self.S_dual.substitute(bindings, check_domains),
                           ident=self.id, label=self.label)

    def tensor_equal(self, other):
        return (self.S.tensor_equal(other.S)
                and self.S_dual.tensor_equal(other.S_dual))

    def __repr__(self):
        return "ManinTriple(%s: %s | %s)" % (self.id or "?",
                                             self.S.describe_brackets(),
                                             self.S_dual.describe_brackets())


class DoubleAlgebra(SuperAlgebra):
    """The double on the dual homogeneous basis (b, f, b~, f~); provenance
    keeps the generating triple."""

    __slots__ = ("triple",)

    def __init__(self, grading, ctx, F, parity, names, name, triple):
        super().__init__(grading, ctx, F, parity=parity, names=names, name=name)
        self.triple = triple

    def half_grading(self):
        return self.triple.grading

    def canonical_b(self):
        m, n = self.triple.superdim()
        return canonical_form(m, n)

    def substitute(self, bindings, check_domains=True):
        return build_double(self.triple.substitute(bindings, check_domains))


def build_double(triple):
    """Assemble the double tensor from the two subalgebra tensors."""
    S, Sd = triple.S, triple.S_dual
    m, n = S.superdim()
    h = m + n
    d = 2 * h
    ctx = triple.ctx
    zero = ctx.zero()
    F = [[[zero for _ in range(d)] for _ in range(d)] for _ in range(d)]

    for (i, j, k, c) in S.nonzero():
        F[i][j][k] = c
    for (i, j, k, c) in Sd.nonzero():
        F[h + i][h + j][h + k] = c

    # mixed brackets per the double formula, then graded antisymmetry
    parity = S.parity + Sd.parity
    for i in range(h):
        for jj in range(h):
            comps = {}
            # F~^{JK}_I X_K
            for k in range(h):
                c = Sd.F[jj][k][i]
                if not c.is_zero():
                    comps[k] = comps.get(k, zero) + c
            # F_{KI}^J X~^K
            for k in range(h):
                c = S.F[k][i][jj]
                if not c.is_zero():
                    comps[h + k] = comps.get(h + k, zero) + c
            if comps:
                sign = 1 if (parity[i] * parity[h + jj]) % 2 else -1
                for k, c in comps.items():
                    F[i][h + jj][k] = c
                    F[h + jj][i][k] = c if sign == 1 else -c

    names = S.grading.names(False) + S.grading.names(True)
    return DoubleAlgebra(Grading(2 * m, 2 * n), ctx, F, parity,
                         names, "DD(%s)" % (triple.id or "?"), triple)


def check_compatibility(triple):
    """Full graded Jacobi residuals of the double; empty means the pair is a
    Manin supertriple."""
    return check_jacobi(build_double(triple))


def t_dual(triple):
    """The dual triple (S~|S).

    The transported tensors coincide with the originals (the f -> -f sign of
    the T map cancels on grading-consistent entries), so only roles swap.
    The doubles are isomorphic via the certificate C = B.
    """
    new_s = SuperAlgebra(triple.S_dual.grading, triple.ctx, triple.S_dual.F,
                         parity=triple.S_dual.parity,
                         names=triple.S.grading.names(False),
                         name=triple.S_dual.name, dual_role=False)
    new_sd = SuperAlgebra(triple.S.grading, triple.ctx, triple.S.F,
                          parity=triple.S.parity,
                          names=triple.S.grading.names(True),
                          name=triple.S.name, dual_role=True)
    return ManinTriple(new_s, new_sd,
                       ident=("Tdual(%s)" % triple.id) if triple.id else None,
                       label=triple.label)
