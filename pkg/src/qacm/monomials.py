"""Monomial models for line-bundle cohomology on P1 and P2.

Coordinates, fixed once for the whole package: ambient P3 has (x, y, z, w)
with the two planes H1 = {x = 0}, H2 = {y = 0}; each plane carries chart
coordinates (u, v, w) where u is the restriction of the *other* plane's
equation and (v, w) = (z, w); the common line L = {u = 0} has coordinates
(v, w).

H0(O(d)) is spanned by ordinary monomials of degree d; the top cohomology
(H2 on P2, H1 on P1) is spanned by "dual" Laurent monomials with every
exponent <= -1 summing to d.  Multiplication by a form acts on dual bases by
the contraction rule: a product monomial with any exponent >= 0 is zero.
All bases are ordered reverse-lexicographically by exponent vector, so every
matrix is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .linalg import QQ, RatMatrix

VAR_NAMES = {2: ("v", "w"), 3: ("u", "v", "w"), 4: ("x", "y", "z", "w")}


def _fr(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"coefficients must be rational, got {type(x).__name__}")


@dataclass(frozen=True)
class Form:
    """A homogeneous polynomial: ``terms`` maps exponent tuples to nonzero
    rational coefficients, stored as a reverse-lex sorted tuple of pairs."""

    num_vars: int
    terms: tuple

    @staticmethod
    def from_dict(num_vars: int, coeffs: dict) -> "Form":
        if num_vars not in VAR_NAMES:
            raise ValueError(f"unsupported variable count {num_vars}")
        clean = {}
        deg = None
        for exp, c in coeffs.items():
            c = _fr(c)
            if c == 0:
                continue
            exp = tuple(int(e) for e in exp)
            if len(exp) != num_vars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp}")
            d = sum(exp)
            if deg is None:
                deg = d
            elif d != deg:
                raise ValueError("form is not homogeneous")
            clean[exp] = clean.get(exp, QQ(0)) + c
        clean = {e: c for e, c in clean.items() if c != 0}
        return Form(num_vars, tuple(sorted(clean.items(), reverse=True)))

    @staticmethod
    def zero(num_vars: int) -> "Form":
        return Form(num_vars, ())

    @staticmethod
    def monomial(num_vars: int, exp, coeff=1) -> "Form":
        return Form.from_dict(num_vars, {tuple(exp): coeff})

    @staticmethod
    def variable(num_vars: int, name: str) -> "Form":
        names = VAR_NAMES[num_vars]
        if name not in names:
            raise ValueError(f"no variable {name!r} among {names}")
        exp = tuple(1 if n == name else 0 for n in names)
        return Form(num_vars, ((exp, QQ(1)),))

    @staticmethod
    def constant(num_vars: int, c) -> "Form":
        c = _fr(c)
        if c == 0:
            return Form.zero(num_vars)
        return Form(num_vars, (((0,) * num_vars, c),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        """Total degree, or None for the zero form."""
        return sum(self.terms[0][0]) if self.terms else None

    def coeff(self, exp) -> Fraction:
        exp = tuple(exp)
        for e, c in self.terms:
            if e == exp:
                return c
        return QQ(0)

    def __add__(self, other: "Form") -> "Form":
        if self.num_vars != other.num_vars:
            raise ValueError("variable-count mismatch")
        d = dict(self.terms)
        for e, c in other.terms:
            d[e] = d.get(e, QQ(0)) + c
        if self.terms and other.terms and sum(self.terms[0][0]) != sum(other.terms[0][0]):
            raise ValueError("adding forms of different degrees")
        return Form(self.num_vars, tuple(sorted(((e, c) for e, c in d.items() if c != 0), reverse=True)))

    def __neg__(self) -> "Form":
        return Form(self.num_vars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Form):
            if self.num_vars != other.num_vars:
                raise ValueError("variable-count mismatch")
            d = {}
            for e1, c1 in self.terms:
                for e2, c2 in other.terms:
                    e = tuple(a + b for a, b in zip(e1, e2))
                    d[e] = d.get(e, QQ(0)) + c1 * c2
            return Form(self.num_vars, tuple(sorted(((e, c) for e, c in d.items() if c != 0), reverse=True)))
        c = _fr(other)
        if c == 0:
            return Form.zero(self.num_vars)
        return Form(self.num_vars, tuple((e, c * v) for e, v in self.terms))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Form":
        if n < 0:
            raise ValueError("negative power")
        out = Form.constant(self.num_vars, 1)
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, point) -> Fraction:
        pt = [_fr(x) for x in point]
        if len(pt) != self.num_vars:
            raise ValueError("point dimension mismatch")
        total = QQ(0)
        for e, c in self.terms:
            v = c
            for x, k in zip(pt, e):
                for _ in range(k):
                    v *= x
            total += v
        return total

    def drop_variable(self, index: int) -> "Form":
        """Substitute variable ``index`` := 0 and reindex onto one fewer variable."""
        d = {}
        for e, c in self.terms:
            if e[index] == 0:
                d[e[:index] + e[index + 1:]] = c
        return Form.from_dict(self.num_vars - 1, d)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = VAR_NAMES[self.num_vars]
        parts = []
        for e, c in self.terms:
            factors = []
            for name, k in zip(names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def restrict_to_line(f: Form) -> Form:
    """Plane form (u, v, w) with u := 0, as a binary form on L in (v, w)."""
    if f.num_vars != 3:
        raise ValueError("expected a plane form in (u, v, w)")
    return f.drop_variable(0)


def restrict_to_plane(f: Form, side: int) -> Form:
    """Ambient form in (x, y, z, w) restricted to H_side via the chart
    (u, v, w): on H1 set x := 0, u := y; on H2 set y := 0, u := x."""
    if f.num_vars != 4:
        raise ValueError("expected an ambient form in (x, y, z, w)")
    kill = 0 if side == 1 else 1
    keep = 1 if side == 1 else 0
    d = {}
    for (ex, ey, ez, ew), c in f.terms:
        e4 = (ex, ey, ez, ew)
        if e4[kill] != 0:
            continue
        d[(e4[keep], ez, ew)] = c
    return Form.from_dict(3, d)


# ---------------------------------------------------------------------------
# binary forms on L


def binary_gcd(f: Form, g: Form) -> Form:
    """gcd of two binary forms in (v, w), up to a scalar; gcd(0, g) = g."""
    for h in (f, g):
        if h.num_vars != 2:
            raise ValueError("binary_gcd expects forms in (v, w)")
    if f.is_zero:
        return g
    if g.is_zero:
        return f

    def split(h):
        # h = v^av * w^aw * core with core(1,0) != 0 and core(0,1) != 0
        av = min(e[0] for e, _ in h.terms)
        aw = min(e[1] for e, _ in h.terms)
        deg = h.degree - av - aw
        coeffs = [QQ(0)] * (deg + 1)  # coefficient of v^(deg-i) w^i
        for (e0, e1), c in h.terms:
            coeffs[e1 - aw] = c
        return av, aw, coeffs

    av1, aw1, p = split(f)
    av2, aw2, q = split(g)

    def poly_mod(a, b):
        # univariate remainder, dense lists low..high are reversed here: store
        # coefficients with index = w-exponent, so the "leading" term is index 0.
        a = a[:]
        while len(a) >= len(b) and any(x != 0 for x in a):
            while a and a[0] == 0:
                a.pop(0)
            if len(a) < len(b):
                break
            factor = a[0] / b[0]
            for i in range(len(b)):
                a[i] -= factor * b[i]
            a.pop(0)
        while a and a[0] == 0:
            a.pop(0)
        return a

    a, b = p, q
    while b:
        a, b = b, poly_mod(a, b)
    core = a
    deg = len(core) - 1
    d = {}
    for i, c in enumerate(core):
        if c != 0:
            d[(deg - i, i)] = c
    result = Form.from_dict(2, d)
    av, aw = min(av1, av2), min(aw1, aw2)
    if av or aw:
        result = result * Form.monomial(2, (av, aw))
    return result


def binary_forms_common_zero_free(forms) -> bool:
    """True iff the binary forms have no common zero on L (over the algebraic
    closure): their gcd is a nonzero constant."""
    g = Form.zero(2)
    for f in forms:
        g = binary_gcd(g, f)
        if not g.is_zero and g.degree == 0:
            return True
    return not g.is_zero and g.degree == 0


# ---------------------------------------------------------------------------
# graded pieces

P1 = "P1"
P2 = "P2"
_SPACE_DIM = {P1: 1, P2: 2}
_SPACE_NVARS = {P1: 2, P2: 3}


@lru_cache(maxsize=None)
def h0_exponents(num_vars: int, d: int) -> tuple:
    """Exponent vectors of the degree-d monomials, reverse-lex sorted."""
    if d < 0:
        return ()

    def rec(nv, total):
        if nv == 1:
            yield (total,)
            return
        for k in range(total + 1):
            for rest in rec(nv - 1, total - k):
                yield (k,) + rest

    return tuple(sorted(rec(num_vars, d), reverse=True))


@lru_cache(maxsize=None)
def dual_exponents(num_vars: int, d: int) -> tuple:
    """Exponent vectors with every entry <= -1 summing to d, reverse-lex sorted."""
    base = h0_exponents(num_vars, -d - num_vars)
    return tuple(sorted((tuple(-1 - e for e in exp) for exp in base), reverse=True))


@dataclass(frozen=True)
class GradedPiece:
    """A cohomology group H^i(space, O(d)) with its ordered monomial basis."""

    space: str
    i: int
    d: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self) -> dict:
        return {e: k for k, e in enumerate(self.basis)}


def space_dim(space: str) -> int:
    if space not in _SPACE_DIM:
        raise ValueError(f"unknown space {space!r}")
    return _SPACE_DIM[space]


def cohomology_dim(space: str, i: int, d: int) -> int:
    """Closed-form h^i(space, O(d)) for space in {P1, P2}."""
    n = space_dim(space)
    if i > n or i < 0:
        raise ValueError(f"cohomology index {i} out of range for {space}")
    if space == P2:
        if i == 0:
            return comb(d + 2, 2) if d >= 0 else 0
        if i == 1:
            return 0
        return comb(-d - 1, 2) if d <= -3 else 0
    if i == 0:
        return d + 1 if d >= 0 else 0
    return -d - 1 if d <= -2 else 0


@lru_cache(maxsize=None)
def basis(space: str, i: int, d: int) -> GradedPiece:
    """Monomial basis of H^i(space, O(d)); empty for the vanishing groups."""
    n = space_dim(space)
    if i > n or i < 0:
        raise ValueError(f"cohomology index {i} out of range for {space}")
    nv = _SPACE_NVARS[space]
    if i == 0:
        b = h0_exponents(nv, d)
    elif i == n:
        b = dual_exponents(nv, d)
    else:
        b = ()
    piece = GradedPiece(space, i, d, b)
    assert piece.dim == cohomology_dim(space, i, d)
    return piece


def multiplication_matrix(f: Form, frm: GradedPiece) -> RatMatrix:
    """Matrix of multiplication by ``f``: H^i(O(d)) -> H^i(O(d + deg f)),
    rows indexed by the target basis, columns by the source basis.  On dual
    bases a product monomial with any exponent >= 0 contracts to zero."""
    nv = _SPACE_NVARS[frm.space]
    if not f.is_zero and f.num_vars != nv:
        raise ValueError("variable-count mismatch between form and graded piece")
    shift = f.degree if not f.is_zero else 0
    target = basis(frm.space, frm.i, frm.d + shift)
    out = [[QQ(0)] * frm.dim for _ in range(target.dim)]
    if f.is_zero or frm.dim == 0 or target.dim == 0:
        return RatMatrix(target.dim, frm.dim, tuple(tuple(r) for r in out))
    top = frm.i == space_dim(frm.space)
    tindex = target.index()
    for col, m in enumerate(frm.basis):
        for e, c in f.terms:
            prod = tuple(a + b for a, b in zip(m, e))
            if top and any(x >= 0 for x in prod):
                continue
            out[tindex[prod]][col] += c
    return RatMatrix(target.dim, frm.dim, tuple(tuple(r) for r in out))


@lru_cache(maxsize=None)
def restriction_matrix(d: int) -> RatMatrix:
    """H0(P2, O(d)) -> H0(L, O(d)) by u := 0 (monomials with positive
    u-exponent die); surjective for d >= 0, empty for d < 0."""
    src = basis(P2, 0, d)
    tgt = basis(P1, 0, d)
    out = [[QQ(0)] * src.dim for _ in range(tgt.dim)]
    tindex = tgt.index()
    for col, (a, b, c) in enumerate(src.basis):
        if a == 0:
            out[tindex[(b, c)]][col] = QQ(1)
    return RatMatrix(tgt.dim, src.dim, tuple(tuple(r) for r in out))


def euler_char_p2(d: int) -> int:
    """chi(O_{P2}(d)) = (d+1)(d+2)/2 as a polynomial in d."""
    return (d + 1) * (d + 2) // 2


def euler_char_p1(d: int) -> int:
    return d + 1
