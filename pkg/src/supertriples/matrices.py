"""Small exact linear algebra helpers, over Fractions and over Scalars."""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionMismatch
from .scalars import Scalar

# ---------------------------------------------------------------------------
# Fraction matrices (lists of lists)


def f_identity(d):
    return [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]


def f_matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    if len(a[0]) != k:
        raise DimensionMismatch("matmul %dx%d by %dx%d" % (n, len(a[0]), k, m))
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if not c:
                continue
            bt = b[t]
            for j in range(m):
                if bt[j]:
                    oi[j] += c * bt[j]
    return out


def f_transpose(a):
    return [list(col) for col in zip(*a)]


def f_rref(rows):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def f_rank(rows):
    return len(f_rref(rows)[0])


def f_inv(a):
    d = len(a)
    aug = [list(a[i]) + [Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    r = 0
    for c in range(d):
        pivot = None
        for i in range(r, d):
            if aug[i][c]:
                pivot = i
                break
        if pivot is None:
            raise DimensionMismatch("singular matrix")
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(d):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        r += 1
    return [row[d:] for row in aug]


def f_solve(a, b):
    """Solve a x = b exactly; returns (particular solution, nullspace basis)
    or None when inconsistent.  a: list of rows, b: list of Fractions."""
    n = len(a)
    m = len(a[0]) if a else 0
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    rows, pivots = f_rref(aug)
    for row in rows:
        if all(x == 0 for x in row[:m]) and row[m]:
            return None
    sol = [Fraction(0)] * m
    pivot_cols = [c for c in pivots if c < m]
    for row, c in zip(rows, pivots):
        if c < m:
            sol[c] = row[m]
    free_cols = [c for c in range(m) if c not in pivot_cols]
    null = []
    for fc in free_cols:
        vec = [Fraction(0)] * m
        vec[fc] = Fraction(1)
        for row, c in zip(rows, pivots):
            if c < m:
                vec[c] = -row[fc]
        null.append(vec)
    return sol, null


# ---------------------------------------------------------------------------
# Scalar matrices


def s_identity(ctx, d):
    one, zero = ctx.one(), ctx.zero()
    return [[one if i == j else zero for j in range(d)] for i in range(d)]


def s_zero_matrix(ctx, rows, cols):
    zero = ctx.zero()
    return [[zero] * cols for _ in range(rows)]


def s_matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    if len(a[0]) != k:
        raise DimensionMismatch("matmul %dx%d by %dx%d" % (n, len(a[0]), k, m))
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                x = a[i][t]
                y = b[t][j]
                if x.is_zero() or y.is_zero():
                    continue
                term = x * y
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else a[0][0].ctx.zero())
        out.append(row)
    return out


def s_transpose(a):
    return [list(col) for col in zip(*a)]


def s_inv(a):
    """Gauss-Jordan inverse over the scalar field."""
    d = len(a)
    ctx = a[0][0].ctx
    aug = [list(a[i]) + list(s_identity(ctx, d)[i]) for i in range(d)]
    r = 0
    for c in range(d):
        pivot = None
        for i in range(r, d):
            if not aug[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            raise DimensionMismatch("singular scalar matrix")
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c].inv()
        aug[r] = [x * pv for x in aug[r]]
        for i in range(d):
            if i != r and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        r += 1
    return [row[d:] for row in aug]


def s_map(a, fn):
    return [[fn(x) for x in row] for row in a]


def s_to_fractions(a):
    return [[x.as_fraction() for x in row] for row in a]


def s_from_fractions(ctx, a):
    return [[ctx.const(x) for x in row] for row in a]


def s_equal(a, b):
    if len(a) != len(b) or len(a[0]) != len(b[0]):
        return False
    for ra, rb in zip(a, b):
        for x, y in zip(ra, rb):
            if not (x - y).is_zero():
                return False
    return True
