"""Matrix factorizations of the quadric q = xy in ambient coordinates.

A factorization is a pair of square form matrices with A B = B A = q I.
The distinguished example is the 4x4 linear matrix

        ( y  z  w  0 )
    N = ( 0 -x  0  w )
        ( 0  0 -x -z )
        ( 0  0  0  y )

with det N = (xy)^2, presenting a rank-2 Ulrich sheaf on X = {xy = 0};
its partner is the adjugate divided by xy.  Determinants and adjugates are
computed by exact cofactor expansion; divisibility only ever involves the
monomial powers of q = xy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import QQ, RatMatrix, hstack, rank, vstack
from .monomials import Form, h0_exponents

X4, Y4, Z4, W4 = (Form.variable(4, n) for n in ("x", "y", "z", "w"))
Q_DEFAULT = X4 * Y4


def form_matrix(rows) -> tuple:
    """Normalize a nested sequence into a tuple-of-tuples of 4-variable forms."""
    out = []
    for row in rows:
        r = []
        for f in row:
            if isinstance(f, Form):
                if f.num_vars != 4 and not f.is_zero:
                    raise ValueError("matrix entries must be ambient forms")
                r.append(f if f.num_vars == 4 or not f.is_zero else Form.zero(4))
            elif isinstance(f, (int, Fraction)):
                r.append(Form.constant(4, f))
            else:
                raise ValueError("matrix entries must be forms or rationals")
        out.append(tuple(r))
    n = len(out)
    if any(len(r) != n for r in out):
        raise ValueError("matrix must be square")
    return tuple(out)


def mat_mul(a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            s = Form.zero(4)
            for k in range(n):
                if not a[i][k].is_zero and not b[k][j].is_zero:
                    s = s + a[i][k] * b[k][j]
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def scalar_matrix(q: Form, n: int):
    return tuple(tuple(q if i == j else Form.zero(4) for j in range(n)) for i in range(n))


def determinant(a) -> Form:
    """Cofactor expansion along the first column (matrices here are 4x4)."""
    n = len(a)
    if n == 1:
        return a[0][0]
    total = Form.zero(4)
    for i in range(n):
        if a[i][0].is_zero:
            continue
        minor = tuple(tuple(a[r][c] for c in range(1, n)) for r in range(n) if r != i)
        term = a[i][0] * determinant(minor)
        total = total + term if i % 2 == 0 else total - term
    return total


def adjugate(a):
    n = len(a)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(tuple(a[r][c] for c in range(n) if c != j)
                          for r in range(n) if r != i)
            cof = determinant(minor)
            if (i + j) % 2 == 1:
                cof = -cof
            out[j][i] = cof
    return tuple(tuple(r) for r in out)


def divide_by_monomial_power(f: Form, q: Form, power: int) -> Form:
    """Exact division of f by q^power where q^power is a single monomial
    (q = xy here); raises if not divisible."""
    if power == 0:
        return f
    qp = q ** power
    if len(qp.terms) != 1:
        raise ValueError("divisor must be a monomial power")
    (qexp, qc) = qp.terms[0]
    if f.is_zero:
        return f
    d = {}
    for e, c in f.terms:
        ne = tuple(a - b for a, b in zip(e, qexp))
        if any(x < 0 for x in ne):
            raise ValueError("no adjugate partner")
        d[ne] = c / qc
    return Form.from_dict(4, d)


@dataclass(frozen=True)
class MFPair:
    a: tuple
    b: tuple
    q: Form

    @property
    def size(self) -> int:
        return len(self.a)


def verify_mf(pair: MFPair) -> bool:
    """A B = B A = q I as exact polynomial identities."""
    n = pair.size
    target = scalar_matrix(pair.q, n)
    return mat_mul(pair.a, pair.b) == target and mat_mul(pair.b, pair.a) == target


def partner_from_adjugate(a, q: Form = Q_DEFAULT):
    """B = adj(A) / q^(n/2 - 1), so that A B = q I; requires det A = q^(n/2)."""
    a = form_matrix(a)
    n = len(a)
    if n % 2:
        raise ValueError("matrix size must be even")
    det = determinant(a)
    if det != q ** (n // 2):
        raise ValueError(f"det A must equal q^{n // 2}")
    adj = adjugate(a)
    b = tuple(tuple(divide_by_monomial_power(f, q, n // 2 - 1) for f in row) for row in adj)
    pair = MFPair(a, b, q)
    if not verify_mf(pair):
        raise ValueError("no adjugate partner")
    return b


def ulrich_example_matrix(component: int = 1):
    """The distinguished 4x4 linear presentation matrix; component 2 is the
    x <-> y swap (the two sheaves are exchanged by swapping the planes)."""
    x, y, z, w = X4, Y4, Z4, W4
    zero = Form.zero(4)
    n = form_matrix([
        [y, z, w, zero],
        [zero, -x, zero, w],
        [zero, zero, -x, -z],
        [zero, zero, zero, y],
    ])
    if component == 1:
        return n
    if component == 2:
        swapped = []
        for row in n:
            r = []
            for f in row:
                r.append(Form.from_dict(4, {(e[1], e[0], e[2], e[3]): c for e, c in f.terms}))
            swapped.append(tuple(r))
        return tuple(swapped)
    raise ValueError("component must be 1 or 2")


def is_linear_matrix(a) -> bool:
    return all(f.is_zero or f.degree == 1 for row in a for f in row)


def ulrich_linear_check(a, q: Form = Q_DEFAULT) -> bool:
    """All entries homogeneous linear and det A = q^(n/2)."""
    a = form_matrix(a)
    if not is_linear_matrix(a):
        return False
    n = len(a)
    if n % 2:
        return False
    return determinant(a) == q ** (n // 2)


def rank_at_point(a, point) -> int:
    """Exact rank of the evaluated matrix at a point of P3."""
    pt = [QQ(c) for c in point]
    if all(c == 0 for c in pt):
        raise ValueError("the zero tuple is not a point of P3")
    rows = [[f.evaluate(pt) for f in row] for row in a]
    return rank(RatMatrix.from_rows(rows))


SAMPLE_POINTS = (
    # 4 on L = {x = y = 0}
    ((0, 0, 1, 0), "L"),
    ((0, 0, 0, 1), "L"),
    ((0, 0, 1, 1), "L"),
    ((0, 0, 1, -1), "L"),
    # 2 on H1 \ L (x = 0, y != 0)
    ((0, 1, 0, 0), "H1"),
    ((0, 1, 1, 2), "H1"),
    # 2 on H2 \ L
    ((1, 0, 0, 0), "H2"),
    ((1, 0, 2, 1), "H2"),
    # 4 off X (xy != 0)
    ((1, 1, 0, 0), "off"),
    ((1, 1, 1, 1), "off"),
    ((1, 2, 3, 4), "off"),
    ((2, 1, 1, 0), "off"),
)


def _p3_mult_matrix(f: Form, d_from: int, d_to: int) -> RatMatrix:
    src = h0_exponents(4, d_from)
    tgt = h0_exponents(4, d_to)
    tindex = {e: i for i, e in enumerate(tgt)}
    out = [[QQ(0)] * len(src) for _ in range(len(tgt))]
    if not f.is_zero:
        if f.degree != d_to - d_from:
            raise ValueError("degree bookkeeping error")
        for col, m in enumerate(src):
            for e, c in f.terms:
                out[tindex[tuple(a + b for a, b in zip(m, e))]][col] += c
    return RatMatrix(len(tgt), len(src), tuple(tuple(r) for r in out))


def cokernel_hilbert(a, t: int) -> int:
    """h0(coker(A)(t)) for a linear square matrix A: O(-1)^n -> O^n on P3,
    exactly n * h0(O_P3(t)) - rank of the H0-level matrix at twist t."""
    a = form_matrix(a)
    if not is_linear_matrix(a):
        raise ValueError("entries must be homogeneous linear")
    n = len(a)
    dim_t = len(h0_exponents(4, t))
    if t < 0:
        return 0
    blocks = []
    for i in range(n):
        blocks.append(hstack(*[_p3_mult_matrix(a[i][j], t - 1, t) for j in range(n)]))
    return n * dim_t - rank(vstack(*blocks))


@dataclass(frozen=True)
class MFReport:
    det: Form
    partner_linear: bool
    ranks_at_samples: tuple     # ((point, locus, rank), ...)
    hilbert: tuple              # ((t, h0), ...)


def mf_report(component: int = 1, tmin: int = -1, tmax: int = 2) -> MFReport:
    a = ulrich_example_matrix(component)
    b = partner_from_adjugate(a)
    ranks = tuple((pt, locus, rank_at_point(a, pt)) for pt, locus in SAMPLE_POINTS)
    hil = tuple((t, cokernel_hilbert(a, t)) for t in range(tmin, tmax + 1))
    return MFReport(determinant(a), is_linear_matrix(b), ranks, hil)
