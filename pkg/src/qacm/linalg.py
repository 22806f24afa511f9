"""Exact linear algebra over the rationals.

Matrices carry ``fractions.Fraction`` entries and every result is exact.
Rank and kernel are computed by fraction-free elimination on rows scaled to
primitive integer vectors, stored sparsely (most cohomology-level matrices
here are monomial maps with a handful of nonzeros per column).  Pivoting is
deterministic: smallest unprocessed column, then the row with the fewest
nonzeros, then the smallest row index, so identical inputs always produce
identical bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

QQ = Fraction


def _fr(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"matrix entries must be rational, got {type(x).__name__}")


@dataclass(frozen=True)
class RatMatrix:
    """Dense immutable matrix of rationals; ``data`` is a tuple of row tuples."""

    rows: int
    cols: int
    data: tuple

    @staticmethod
    def from_rows(rows) -> "RatMatrix":
        data = tuple(tuple(_fr(x) for x in row) for row in rows)
        n = len(data)
        m = len(data[0]) if n else 0
        if any(len(r) != m for r in data):
            raise ValueError("ragged rows")
        return RatMatrix(n, m, data)

    @staticmethod
    def zero(rows: int, cols: int) -> "RatMatrix":
        z = QQ(0)
        return RatMatrix(rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "RatMatrix":
        return RatMatrix(n, n, tuple(tuple(QQ(1 if i == j else 0) for j in range(n)) for i in range(n)))

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows and self.cols
                         else tuple(() for _ in range(self.cols)) if self.cols else ())

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        zero = QQ(0)
        one = QQ(1)
        out = []
        for r in self.data:
            acc = [zero] * other.cols
            for j, a in enumerate(r):
                if not a:
                    continue
                orow = other.data[j]
                if a == one:
                    for t, b in enumerate(orow):
                        if b:
                            acc[t] += b
                else:
                    for t, b in enumerate(orow):
                        if b:
                            acc[t] += a * b
            out.append(tuple(acc))
        return RatMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in +")
        return RatMatrix(self.rows, self.cols,
                         tuple(tuple(a + b for a, b in zip(r1, r2))
                               for r1, r2 in zip(self.data, other.data)))

    def __neg__(self) -> "RatMatrix":
        return self.scale(QQ(-1))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def scale(self, s) -> "RatMatrix":
        s = _fr(s)
        return RatMatrix(self.rows, self.cols, tuple(tuple(s * x for x in r) for r in self.data))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def apply(self, vec) -> tuple:
        """Matrix times a column vector given as a sequence."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * _fr(b) for a, b in zip(r, vec)) for r in self.data)


def hstack(*mats: RatMatrix) -> RatMatrix:
    mats = [m for m in mats]
    if not mats:
        raise ValueError("hstack of nothing")
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("hstack: row count mismatch")
    data = tuple(tuple(x for m in mats for x in m.data[i]) for i in range(rows))
    return RatMatrix(rows, sum(m.cols for m in mats), data)


def vstack(*mats: RatMatrix) -> RatMatrix:
    mats = [m for m in mats]
    if not mats:
        raise ValueError("vstack of nothing")
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("vstack: column count mismatch")
    data = tuple(r for m in mats for r in m.data)
    return RatMatrix(sum(m.rows for m in mats), cols, data)


def block_diag(*mats: RatMatrix) -> RatMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[QQ(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            row = out[r0 + i]
            mrow = m.data[i]
            for j in range(m.cols):
                row[c0 + j] = mrow[j]
        r0 += m.rows
        c0 += m.cols
    return RatMatrix(rows, cols, tuple(tuple(r) for r in out))


# ---------------------------------------------------------------------------
# sparse fraction-free elimination


def _int_rows(m: RatMatrix):
    """Rows as sparse primitive-integer dicts {col: int}; scaling rows does not
    change rank or kernel."""
    out = []
    for r in m.data:
        den = 1
        for x in r:
            xd = x.denominator
            if xd != 1:
                den = den * xd // gcd(den, xd)
        if den == 1:
            ints = {j: x.numerator for j, x in enumerate(r) if x}
        else:
            ints = {j: int(x * den) for j, x in enumerate(r) if x}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
            if g == 1:
                break
        if g > 1:
            ints = {j: v // g for j, v in ints.items()}
        out.append(ints)
    return out


def _strip(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def _eliminate(rows, cols: int):
    """Forward elimination (r := p*r - f*piv on each affected row); returns the
    pivot list [(pivot_col, pivot_row_dict)] in increasing column order.

    Invariant: rows still unpivoted have zero entries in every processed
    column, so each pivot row only involves its pivot column and later ones.
    """
    remaining = list(range(len(rows)))
    pivots = []
    for col in range(cols):
        cand = [i for i in remaining if rows[i].get(col)]
        if not cand:
            continue
        i0 = min(cand, key=lambda i: (len(rows[i]), i))
        piv = rows[i0]
        p = piv[col]
        remaining = [i for i in remaining if i != i0]
        for i in cand:
            if i == i0:
                continue
            r = rows[i]
            f = r[col]
            new = {}
            for j, v in r.items():
                new[j] = v * p
            for j, v in piv.items():
                w = new.get(j, 0) - f * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            rows[i] = _strip(new)
        pivots.append((col, piv))
    return pivots


def rank(m: RatMatrix) -> int:
    """Exact rank; deterministic."""
    return len(_eliminate(_int_rows(m), m.cols))


@dataclass(frozen=True)
class Subspace:
    """A linear subspace given by a basis matrix whose columns are independent."""

    ambient_dim: int
    basis: RatMatrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise ValueError("basis rows must equal ambient dimension")
        if rank(self.basis) != self.basis.cols:
            raise ValueError("basis columns are dependent")

    @property
    def dim(self) -> int:
        return self.basis.cols


def kernel_basis(m: RatMatrix) -> Subspace:
    """Exact null space of ``m``: dim = cols - rank, m @ basis = 0 entrywise.

    Basis vectors are primitive integer vectors (first nonzero positive), one
    per free column in increasing column order.
    """
    rows = _int_rows(m)
    pivots = _eliminate(rows, m.cols)
    pivot_cols = [c for c, _ in pivots]
    pivot_set = set(pivot_cols)
    free = [c for c in range(m.cols) if c not in pivot_set]
    vectors = []
    for fcol in free:
        v = {fcol: QQ(1)}
        for col, prow in reversed(pivots):
            s = QQ(0)
            for j, a in prow.items():
                if j != col and j in v:
                    s += a * v[j]
            if s:
                v[col] = -s / prow[col]
        den = 1
        for x in v.values():
            den = den * x.denominator // gcd(den, x.denominator)
        iv = {j: int(x * den) for j, x in v.items()}
        g = 0
        for x in iv.values():
            g = gcd(g, x)
        if g > 1:
            iv = {j: x // g for j, x in iv.items()}
        lead = min(iv)
        if iv[lead] < 0:
            iv = {j: -x for j, x in iv.items()}
        vectors.append(iv)
    data = tuple(tuple(QQ(vec.get(i, 0)) for vec in vectors) for i in range(m.cols))
    return Subspace(m.cols, RatMatrix(m.cols, len(vectors), data))


def kernel_dim(m: RatMatrix) -> int:
    return m.cols - rank(m)


def image_dim_of_composite(a: RatMatrix, restricted_to: Subspace) -> int:
    """dim(a restricted to the given subspace of its source)."""
    if restricted_to.ambient_dim != a.cols:
        raise ValueError("dimension mismatch: subspace ambient dim != matrix cols")
    return rank(a @ restricted_to.basis)
