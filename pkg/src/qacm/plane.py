"""Sheaves on a projective plane, given by explicit graded presentations.

Every sheaf here is the cokernel of a map of split bundles

    0 -> O(b) --column of forms--> O(a_1) + ... + O(a_n) -> F -> 0

(or just a split bundle, with no relation).  Three flavours:

* ``SplitBundle``    -- a direct sum of line bundles;
* ``CIIdealSheaf``   -- the twisted ideal sheaf I_Z(m) of the complete
  intersection Z = V(f1, f2), via its Koszul presentation;
* ``ExtensionBundle``-- the rank-2 bundle G sitting in
  0 -> O(k) -> G -> I_Z(c-k) -> 0, obtained by extending the Koszul
  presentation of I_Z(c-k) by one more form h (the extension class);
  G is locally free exactly when (f1, f2, h) have no common zero.

Cohomology of F(t) is read off the presentation: h0 is the cokernel
dimension at H0 level, h1 the kernel dimension of the relation at H2 level
(dual monomial bases), h2 the cokernel dimension at H2 level; h1 of plane
line bundles vanishes, which makes this exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InternalCheckError
from .linalg import (QQ, RatMatrix, hstack, image_dim_of_composite,
                     kernel_basis, kernel_dim, rank, vstack)
from .monomials import (P1, P2, Form, GradedPiece, basis, binary_forms_common_zero_free,
                        cohomology_dim, euler_char_p2, multiplication_matrix,
                        restriction_matrix, restrict_to_line as form_on_line)

U = Form.variable(3, "u")
V = Form.variable(3, "v")
W = Form.variable(3, "w")


# ---------------------------------------------------------------------------
# complete-intersection subschemes


@dataclass(frozen=True)
class CISubscheme:
    """Zero-dimensional Z = V(f1, f2) in the plane.  ``points`` optionally
    records ((v, w), multiplicity) data when Z lies on L = {u = 0} and was
    built from explicit points; several checks need it."""

    f1: Form
    f2: Form
    points: tuple = None

    @property
    def degrees(self):
        return (self.f1.degree, self.f2.degree)

    @property
    def degree(self) -> int:
        return self.f1.degree * self.f2.degree

    def is_collinear(self) -> bool:
        """Z is cut out by u and a binary form in (v, w)."""
        return (self.f1 == U and not any(e[0] for e, _ in self.f2.terms)) or \
               (self.f2 == U and not any(e[0] for e, _ in self.f1.terms))

    def collinear_binary_form(self) -> Form:
        if not self.is_collinear():
            raise ValueError("subscheme is not collinear on u = 0")
        g = self.f2 if self.f1 == U else self.f1
        return form_on_line(g)


def _ideal_piece_matrix(f1: Form, f2: Form, d: int) -> RatMatrix:
    """Columns spanning the degree-d piece of the ideal (f1, f2) inside the
    monomial coordinates of H0(P2, O(d))."""
    blocks = []
    for f in (f1, f2):
        if d - f.degree >= 0:
            blocks.append(multiplication_matrix(f, basis(P2, 0, d - f.degree)))
        else:
            blocks.append(RatMatrix.zero(cohomology_dim(P2, 0, d), 0))
    return hstack(*blocks)


def ci_from_forms(f1: Form, f2: Form, points=None) -> CISubscheme:
    """Validate that (f1, f2) is a regular sequence (Z zero-dimensional) by
    Hilbert-function stabilization and return the subscheme."""
    for f in (f1, f2):
        if f.is_zero or f.num_vars != 3 or f.degree < 1:
            raise ValueError("Z not zero-dimensional: generators must be nonconstant plane forms")
    d1, d2 = f1.degree, f2.degree
    for d in (d1 + d2 - 1, d1 + d2):
        expected = cohomology_dim(P2, 0, d) - d1 * d2
        if rank(_ideal_piece_matrix(f1, f2, d)) != expected:
            raise ValueError("Z not zero-dimensional")
    return CISubscheme(f1, f2, points)


def ci_from_line_points(pts) -> CISubscheme:
    """Collinear subscheme on L from ((v, w), multiplicity) pairs: the ideal
    (u, prod (w_i v - v_i w)^mu_i)."""
    pts = tuple(((Fraction(v), Fraction(w)), int(m)) for (v, w), m in pts)
    if not pts:
        raise ValueError("need at least one point")
    seen = set()
    for (v, w), m in pts:
        if (v, w) == (0, 0):
            raise ValueError("invalid point [0:0]")
        key = (v / w, 1) if w != 0 else (1, 0)
        if key in seen:
            raise ValueError("repeated point; use a multiplicity instead")
        seen.add(key)
        if m < 1:
            raise ValueError("multiplicity must be >= 1")
    g = Form.constant(2, 1)
    for (v, w), m in pts:
        lin = Form.from_dict(2, {(1, 0): w, (0, 1): -v})
        g = g * lin ** m
    g3 = Form.from_dict(3, {(0,) + e: c for e, c in g.terms})
    return CISubscheme(U, g3, pts)


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Presentation:
    target_twists: tuple        # twists a_i of the free cover
    relation_twist: object      # twist b of the single relation, or None
    relation: tuple             # column of plane forms, one per target summand

    @property
    def rank(self) -> int:
        return len(self.target_twists) - (0 if self.relation_twist is None else 1)


@dataclass(frozen=True)
class SplitBundle:
    side: int
    twists: tuple

    @property
    def rank(self) -> int:
        return len(self.twists)

    def presentation(self) -> Presentation:
        return Presentation(self.twists, None, ())


@dataclass(frozen=True)
class CIIdealSheaf:
    """I_Z(m) with Koszul presentation 0 -> O(m-d1-d2) -> O(m-d1)+O(m-d2)."""

    side: int
    ci: CISubscheme
    m: int

    @property
    def rank(self) -> int:
        return 1

    def presentation(self) -> Presentation:
        d1, d2 = self.ci.degrees
        return Presentation((self.m - d1, self.m - d2), self.m - d1 - d2,
                            (-self.ci.f2, self.ci.f1))


@dataclass(frozen=True)
class ExtensionBundle:
    """Rank-2 bundle from 0 -> O(k) -> G -> I_Z(c-k) -> 0 with extension
    class realized by the form h of degree 2k - c + d1 + d2."""

    side: int
    c: int
    k: int
    ci: CISubscheme
    h: Form

    @property
    def rank(self) -> int:
        return 2

    def presentation(self) -> Presentation:
        c, k = self.c, self.k
        d1, d2 = self.ci.degrees
        return Presentation((c - k - d1, c - k - d2, k), c - k - d1 - d2,
                            (-self.ci.f2, self.ci.f1, self.h))


PlaneSheaf = (SplitBundle, CIIdealSheaf, ExtensionBundle)


def make_split_bundle(side: int, twists) -> SplitBundle:
    twists = tuple(sorted((int(t) for t in twists), reverse=True))
    if not twists:
        raise ValueError("twist list must be non-empty")
    if side not in (1, 2):
        raise ValueError("side must be 1 or 2")
    return SplitBundle(side, twists)


def make_ci_ideal(f1: Form, f2: Form, m: int, side: int = 2, points=None) -> CIIdealSheaf:
    return CIIdealSheaf(side, ci_from_forms(f1, f2, points), int(m))


def no_common_zero(forms) -> bool:
    """True iff the plane forms have no common zero on P2.  Exact: three (or
    more) forms with empty zero locus contain a regular sequence, so the
    quotient vanishes in degree sum(deg) - 2; a common zero keeps every
    graded piece of the quotient positive."""
    forms = [f for f in forms]
    if any(f.is_zero for f in forms):
        forms = [f for f in forms if not f.is_zero]
    if not forms:
        return False
    if any(f.degree == 0 for f in forms):
        return True
    d = sum(f.degree for f in forms) - 2
    blocks = [multiplication_matrix(f, basis(P2, 0, d - f.degree)) for f in forms]
    return rank(hstack(*blocks)) == cohomology_dim(P2, 0, d)


def _auto_extension_form(ci: CISubscheme, deg_h: int) -> Form:
    """Deterministic first h of degree deg_h with (f1, f2, h) common-zero
    free: support sizes 1..3 over the monomial basis in order, coefficients
    from (1, -1, 2, -2)."""
    if deg_h == 0:
        return Form.constant(3, 1)
    mons = basis(P2, 0, deg_h).basis
    for support in range(1, 4):
        for pos in itertools.combinations(range(len(mons)), support):
            for coefs in itertools.product((1, -1, 2, -2), repeat=support):
                h = Form.from_dict(3, {mons[p]: c for p, c in zip(pos, coefs)})
                if no_common_zero([ci.f1, ci.f2, h]):
                    return h
    raise ValueError("no extension class of the required degree is locally free")


def make_extension_bundle(c: int, k: int, ci: CISubscheme, h="auto", side: int = 2) -> ExtensionBundle:
    c, k = int(c), int(k)
    if k < 0:
        raise ValueError("k must be >= 0")
    if ci.degree != c - k or c - k < 1:
        raise ValueError(f"deg(Z) = {ci.degree} must equal c - k = {c - k} >= 1")
    d1, d2 = ci.degrees
    deg_h = 2 * k - c + d1 + d2
    if deg_h < 0:
        raise ValueError("no locally free extension: the class space is zero")
    if isinstance(h, str) and h == "auto":
        h = _auto_extension_form(ci, deg_h)
    if not isinstance(h, Form) or h.num_vars != 3:
        raise ValueError("h must be a plane form or 'auto'")
    if h.is_zero or h.degree != deg_h:
        raise ValueError(f"h must be a nonzero form of degree {deg_h}")
    if not no_common_zero([ci.f1, ci.f2, h]):
        raise ValueError("extension not locally free (Cayley-Bacharach violated by h)")
    return ExtensionBundle(side, c, k, ci, h)


# ---------------------------------------------------------------------------
# cohomology from the presentation


def _mult_block(f: Form, piece: GradedPiece, d_to: int) -> RatMatrix:
    """multiplication_matrix with an explicit target degree, so zero entries
    of a presentation column still produce correctly shaped blocks."""
    if f.is_zero or piece.d + (f.degree or 0) != d_to:
        if not f.is_zero:
            raise ValueError("degree bookkeeping error in presentation")
        return RatMatrix.zero(cohomology_dim(piece.space, piece.i, d_to), piece.dim)
    return multiplication_matrix(f, piece)


def relation_h0_matrix(sheaf, t: int) -> RatMatrix:
    """H0-level matrix of the relation at twist t: H0(O(b+t)) -> sum H0(O(a_i+t))."""
    pres = sheaf.presentation()
    if pres.relation_twist is None:
        return RatMatrix.zero(sum(cohomology_dim(P2, 0, a + t) for a in pres.target_twists), 0)
    src = basis(P2, 0, pres.relation_twist + t)
    return vstack(*[_mult_block(f, src, a + t) for f, a in zip(pres.relation, pres.target_twists)])


def relation_h2_matrix(sheaf, t: int) -> RatMatrix:
    """H2-level (dual monomial) matrix of the relation at twist t."""
    pres = sheaf.presentation()
    if pres.relation_twist is None:
        return RatMatrix.zero(sum(cohomology_dim(P2, 2, a + t) for a in pres.target_twists), 0)
    src = basis(P2, 2, pres.relation_twist + t)
    return vstack(*[_mult_block(f, src, a + t) for f, a in zip(pres.relation, pres.target_twists)])


def euler_char(sheaf, t: int) -> int:
    pres = sheaf.presentation()
    chi = sum(euler_char_p2(a + t) for a in pres.target_twists)
    if pres.relation_twist is not None:
        chi -= euler_char_p2(pres.relation_twist + t)
    return chi


def cohomology(sheaf, i: int, t: int) -> int:
    """Exact h^i(F(t)) for a presented plane sheaf."""
    if i not in (0, 1, 2):
        raise ValueError("cohomology index must be 0, 1 or 2")
    pres = sheaf.presentation()
    if isinstance(sheaf, SplitBundle):
        return sum(cohomology_dim(P2, i, a + t) for a in sheaf.twists)
    if i == 0:
        total = sum(cohomology_dim(P2, 0, a + t) for a in pres.target_twists)
        return total - rank(relation_h0_matrix(sheaf, t))
    m2 = relation_h2_matrix(sheaf, t)
    if i == 1:
        h1 = kernel_dim(m2)
        if isinstance(sheaf, CIIdealSheaf) and sheaf.ci.is_collinear():
            d = sheaf.m + t
            if d >= -1 and h1 != max(0, sheaf.ci.degree - d - 1):
                raise InternalCheckError("collinear ideal-sheaf h1 disagrees with its closed form")
        return h1
    total = sum(cohomology_dim(P2, 2, a + t) for a in pres.target_twists)
    return total - rank(m2)


@dataclass(frozen=True)
class CohRow:
    t: int
    h0: int
    h1: int
    h2: int

    @property
    def chi(self) -> int:
        return self.h0 - self.h1 + self.h2


@dataclass(frozen=True)
class CohTable:
    rows: tuple

    def h1_column(self):
        return tuple(r.h1 for r in self.rows)

    def as_dicts(self):
        return [dict(t=r.t, h0=r.h0, h1=r.h1, h2=r.h2, chi=r.chi) for r in self.rows]


def coh_table(sheaf, tmin: int, tmax: int) -> CohTable:
    rows = []
    for t in range(tmin, tmax + 1):
        h0, h1, h2 = (cohomology(sheaf, i, t) for i in (0, 1, 2))
        row = CohRow(t, h0, h1, h2)
        if row.chi != euler_char(sheaf, t):
            raise InternalCheckError("chi mismatch between table and presentation")
        rows.append(row)
    return CohTable(tuple(rows))


def chern(sheaf):
    """(c1, c2) of a rank-2 sheaf."""
    if isinstance(sheaf, SplitBundle) and sheaf.rank == 2:
        a, b = sheaf.twists
        return (a + b, a * b)
    if isinstance(sheaf, ExtensionBundle):
        return (sheaf.c, sheaf.k * (sheaf.c - sheaf.k) + sheaf.ci.degree)
    raise ValueError("chern data needs a rank-2 split bundle or extension bundle")


# ---------------------------------------------------------------------------
# Cayley-Bacharach


def _point_condition_rows(point, mult: int, d: int):
    """Linear conditions on H0(P2, O(d)) for vanishing to the given order at
    the point [0 : v0 : w0] of L, via derivatives of the restriction to L."""
    (v0, w0) = point
    rows = []
    mons = basis(P2, 0, d).basis
    for j in range(mult):
        row = []
        for (a, b, c) in mons:
            if a != 0:
                row.append(QQ(0))
                continue
            if w0 != 0:
                # d^j/dv^j of v^b w0^c at v = v0
                if b < j:
                    row.append(QQ(0))
                else:
                    coef = QQ(1)
                    for s in range(j):
                        coef *= (b - s)
                    row.append(coef * v0 ** (b - j) * w0 ** c)
            else:
                # point [0:1:0]: the condition is on the w^j coefficient
                coef = QQ(1)
                for s in range(j):
                    coef *= (c - s)
                row.append(coef * v0 ** b if c == j else QQ(0))
        rows.append(row)
    return rows


def h0_ideal_of_points(points, d: int) -> int:
    """h0 of the ideal sheaf of a collinear subscheme given by point data,
    computed by vanishing conditions (not by a Koszul presentation)."""
    if d < 0:
        return 0
    rows = []
    for point, mult in points:
        rows.extend(_point_condition_rows(point, mult, d))
    n = cohomology_dim(P2, 0, d)
    if not rows:
        return n
    return n - rank(RatMatrix.from_rows(rows))


def cb_condition_check(c: int, k: int, ci: CISubscheme) -> bool:
    """Cayley-Bacharach for the pair (c, k): every colength-1 subscheme Z' of
    the collinear Z must satisfy h0(I_{Z'}(c - 2k - 3)) = 0."""
    if not ci.is_collinear():
        raise ValueError("Cayley-Bacharach check needs a collinear subscheme")
    d = c - 2 * k - 3
    if d < 0:
        return True
    if ci.points is None:
        raise ValueError("explicit point data required for a nonnegative twist")
    for drop in range(len(ci.points)):
        sub = []
        for idx, (pt, mult) in enumerate(ci.points):
            m = mult - 1 if idx == drop else mult
            if m > 0:
                sub.append((pt, m))
        if h0_ideal_of_points(sub, d) != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# restriction to L and trivialization


@dataclass(frozen=True)
class Trivialization:
    """Splitting data for F|_L = O_L(c1) + O_L(c2) (c1 >= c2): ``rows[e]`` is
    a tuple of binary forms, one per presentation summand, expressing the
    projection onto the O_L(c_e) factor; zero forms mark impossible degrees."""

    degrees: tuple
    rows: tuple

    @property
    def c(self) -> int:
        return self.degrees[0] - self.degrees[-1]

    @property
    def shift(self) -> int:
        return -self.degrees[-1]


def _line_presentation(sheaf):
    pres = sheaf.presentation()
    rel = tuple(form_on_line(f) for f in pres.relation)
    return pres.target_twists, pres.relation_twist, rel


def _line_relation_matrix(sheaf, t: int, i: int) -> RatMatrix:
    """H^i-level (i = 0 or 1) matrix of the restricted relation on L."""
    targets, b, rel = _line_presentation(sheaf)
    if b is None:
        return RatMatrix.zero(sum(cohomology_dim(P1, i, a + t) for a in targets), 0)
    src = basis(P1, i, b + t)
    return vstack(*[_mult_block(f, src, a + t) for f, a in zip(rel, targets)])


def line_h0_dim(sheaf, t: int) -> int:
    """h0(F|_L(t)) from the restricted presentation (hypercohomology on P1)."""
    targets, b, rel = _line_presentation(sheaf)
    total = sum(cohomology_dim(P1, 0, a + t) for a in targets)
    if b is None:
        return total
    return total - rank(_line_relation_matrix(sheaf, t, 0)) + kernel_dim(_line_relation_matrix(sheaf, t, 1))


def line_h1_dim(sheaf, t: int) -> int:
    targets, b, rel = _line_presentation(sheaf)
    total = sum(cohomology_dim(P1, 1, a + t) for a in targets)
    if b is None:
        return total
    return total - rank(_line_relation_matrix(sheaf, t, 1))


def _splitting_degrees(sheaf) -> tuple:
    """Splitting type of F|_L by successive differences of h0(F|_L(s))."""
    targets, b, rel = _line_presentation(sheaf)
    r = sheaf.rank
    deg = sum(targets) - (b if b is not None else 0)
    bound = sum(abs(a) for a in targets) + (abs(b) if b is not None else 0) + abs(deg) + 4
    degrees = []
    prev = line_h0_dim(sheaf, -bound - 1)
    if prev != 0:
        raise ValueError("restriction to the line is not a vector bundle")
    threshold = 1
    for s in range(-bound, bound + 1):
        cur = line_h0_dim(sheaf, s)
        delta = cur - prev
        while delta >= threshold and len(degrees) < r:
            degrees.append(-s)
            threshold += 1
        prev = cur
        if len(degrees) == r:
            break
    if len(degrees) != r or sum(degrees) != deg:
        raise ValueError("restriction to the line has torsion (not locally free along L)")
    return tuple(degrees)


def _hom_row_candidates(sheaf, e: int):
    """All rows (r_1, ..., r_n) of binary forms, deg r_i = e - a_i, with
    sum r_i * rel_i = 0: the sheaf maps F|_L -> O_L(e).  Returned in the
    deterministic order produced by kernel extraction."""
    targets, b, rel = _line_presentation(sheaf)
    cols = []
    col_meta = []
    for i, a in enumerate(targets):
        for m in basis(P1, 0, e - a).basis:
            col_meta.append((i, m))
    if b is None:
        vectors = [[QQ(1) if k == j else QQ(0) for k in range(len(col_meta))]
                   for j in range(len(col_meta))]
    else:
        con_dim = cohomology_dim(P1, 0, e - b)
        rows = [[QQ(0)] * len(col_meta) for _ in range(con_dim)]
        tgt = basis(P1, 0, e - b)
        tindex = tgt.index()
        for col, (i, m) in enumerate(col_meta):
            if rel[i].is_zero:
                continue
            prod = Form.monomial(2, m) * rel[i]
            for exp, cf in prod.terms:
                rows[tindex[exp]][col] = rows[tindex[exp]][col] + cf
        ker = kernel_basis(RatMatrix.from_rows(rows) if con_dim else RatMatrix.zero(0, len(col_meta)))
        vectors = [ker.basis.column(j) for j in range(ker.dim)]
    out = []
    for vec in vectors:
        parts = [dict() for _ in targets]
        for val, (i, m) in zip(vec, col_meta):
            if val:
                parts[i][m] = val
        out.append(tuple(Form.from_dict(2, p) if p else Form.zero(2) for p in parts))
    return out


def _rows_surjective(row_list) -> bool:
    """The combined map sum O(a_i) -> sum O(e_j) given by the rows is onto as
    a sheaf map iff the maximal minors have no common zero on L."""
    if len(row_list) == 1:
        return binary_forms_common_zero_free(list(row_list[0]))
    n = len(row_list[0])
    minors = []
    for i, j in itertools.combinations(range(n), 2):
        r, s = row_list[0], row_list[1]
        minors.append(r[i] * s[j] - r[j] * s[i])
    return binary_forms_common_zero_free(minors)


def trivialize_on_line(sheaf) -> Trivialization:
    """Explicit splitting F|_L = O_L(c1) + O_L(c2) for a rank-2 sheaf that is
    locally free along L; the normalized type is (c1 - c2, 0)."""
    if sheaf.rank != 2:
        raise ValueError("trivialization needs a rank-2 sheaf")
    if isinstance(sheaf, CIIdealSheaf):
        raise ValueError("not a simple-type restriction")
    c1, c2 = _splitting_degrees(sheaf)
    lo_candidates = _hom_row_candidates(sheaf, c2)
    hi_candidates = _hom_row_candidates(sheaf, c1)
    chosen = None
    if c1 > c2:
        if len(lo_candidates) != 1:
            raise InternalCheckError("expected a unique projection to the low factor")
        lo = lo_candidates[0]
        for hi in hi_candidates:
            if _rows_surjective([hi, lo]):
                chosen = (hi, lo)
                break
    else:
        for hi, lo in itertools.combinations(hi_candidates, 2):
            if _rows_surjective([hi, lo]):
                chosen = (hi, lo)
                break
    if chosen is None:
        raise ValueError("not a simple-type restriction")
    triv = Trivialization((c1, c2), chosen)
    for t in range(-c1 - 4, 5):
        model = cohomology_dim(P1, 0, c1 + t) + cohomology_dim(P1, 0, c2 + t)
        if model != line_h0_dim(sheaf, t):
            raise InternalCheckError("trivialized model disagrees with presentation dimensions")
    return triv


def trivialized_restriction_matrix(sheaf, triv: Trivialization, t: int) -> RatMatrix:
    """Matrix of H0(F(t)) -> H0(O_L(c1+t)) + H0(O_L(c2+t)) on presentation
    coordinates (sections of the free cover); the relation's image maps to 0."""
    pres = sheaf.presentation()
    blocks = []
    for e, row in zip(triv.degrees, triv.rows):
        row_blocks = []
        for a, r in zip(pres.target_twists, row):
            restr = restriction_matrix(a + t)
            target_dim = cohomology_dim(P1, 0, e + t)
            if r.is_zero:
                row_blocks.append(RatMatrix.zero(target_dim, restr.cols))
            else:
                row_blocks.append(_mult_block(r, basis(P1, 0, a + t), e + t) @ restr)
        blocks.append(hstack(*row_blocks))
    return vstack(*blocks)


@dataclass(frozen=True)
class LineRestriction:
    """Restriction data of F(t) to L: explicit H0/H1 models of F|_L(t) in
    trivialized coordinates, the H0-level restriction matrix (on sections of
    the free cover of F), and the dimension of ker(H1(F(t)) -> H1(F|_L(t)))."""

    t: int
    h0_pieces: tuple
    h1_pieces: tuple
    matrix: RatMatrix
    h1_kernel_dim: int


def h1_restriction_kernel_dim(sheaf, t: int) -> int:
    """dim ker(H1(F(t)) -> H1(F|_L(t))) = dim of the image of multiplication
    by u: H1(F(t-1)) -> H1(F(t)), computed on the H2-level kernel model."""
    pres = sheaf.presentation()
    if pres.relation_twist is None:
        return 0
    b = pres.relation_twist
    ker = kernel_basis(relation_h2_matrix(sheaf, t - 1))
    if ker.dim == 0:
        return 0
    u_mult = multiplication_matrix(U, basis(P2, 2, b + t - 1))
    return image_dim_of_composite(u_mult, ker)


def _trivialize_rank1_ideal(sheaf: CIIdealSheaf) -> Trivialization:
    """I_Z(m)|_L for Z disjoint from L is the line bundle O_L(m); one hom row."""
    fl1, fl2 = form_on_line(sheaf.ci.f1), form_on_line(sheaf.ci.f2)
    if not binary_forms_common_zero_free([fl1, fl2]):
        raise ValueError("restriction has torsion along L and no torsion-aware model")
    (m,) = _splitting_degrees(sheaf)
    for row in _hom_row_candidates(sheaf, m):
        if _rows_surjective([row]):
            for t in range(-m - 4, 5):
                if cohomology_dim(P1, 0, m + t) != line_h0_dim(sheaf, t):
                    raise InternalCheckError(
                        "trivialized model disagrees with presentation dimensions")
            return Trivialization((m,), (row,))
    raise InternalCheckError("no trivializing row for a line-bundle restriction")


def restrict_to_line(sheaf, t: int) -> LineRestriction:
    if isinstance(sheaf, CIIdealSheaf):
        triv = _trivialize_rank1_ideal(sheaf)
    elif isinstance(sheaf, SplitBundle) and sheaf.rank != 2:
        rows = tuple(tuple(Form.constant(2, 1) if i == j else Form.zero(2)
                           for j in range(sheaf.rank)) for i in range(sheaf.rank))
        triv = Trivialization(sheaf.twists, rows)
    else:
        triv = trivialize_on_line(sheaf)
    h0_pieces = tuple(basis(P1, 0, e + t) for e in triv.degrees)
    h1_pieces = tuple(basis(P1, 1, e + t) for e in triv.degrees)
    return LineRestriction(t, h0_pieces, h1_pieces,
                           trivialized_restriction_matrix(sheaf, triv, t),
                           h1_restriction_kernel_dim(sheaf, t))


# ---------------------------------------------------------------------------
# recovering Z from an extension bundle


def _normalize_form(f: Form) -> Form:
    """Scale to primitive integer coefficients with positive leading term."""
    if f.is_zero:
        return f
    den = 1
    for _, c in f.terms:
        den = den * c.denominator // gcd(den, c.denominator)
    nums = [int(c * den) for _, c in f.terms]
    g = 0
    for x in nums:
        g = gcd(g, x)
    lead = f.terms[0][1]
    scale = QQ(den, g if g else 1)
    if lead < 0:
        scale = -scale
    return f * scale


def recover_subscheme(g: ExtensionBundle) -> CISubscheme:
    """Recover Z from G when c <= 2k: the unique section of G(-k) has a free
    cokernel presentation whose 2x2 minors generate Z's ideal."""
    if not isinstance(g, ExtensionBundle):
        raise ValueError("recovery needs an extension bundle")
    if g.c > 2 * g.k:
        raise ValueError("section not unique")
    pres = g.presentation()
    t = -g.k
    dims = [cohomology_dim(P2, 0, a + t) for a in pres.target_twists]
    if sum(dims) != 1 or cohomology(g, 0, t) != 1:
        raise InternalCheckError("expected a one-dimensional space of sections at twist -k")
    section = tuple(Form.constant(3, 1) if d == 1 else Form.zero(3) for d in dims)
    minors = []
    for i, j in itertools.combinations(range(len(pres.relation)), 2):
        m = pres.relation[i] * section[j] - pres.relation[j] * section[i]
        if not m.is_zero:
            minors.append(_normalize_form(m))
    if len(minors) != 2:
        raise InternalCheckError("expected exactly two nonzero recovery minors")
    minors.sort(key=lambda f: f.degree)
    return ci_from_forms(minors[0], minors[1])


def ideal_piece_matrix(ci: CISubscheme, d: int) -> RatMatrix:
    return _ideal_piece_matrix(ci.f1, ci.f2, d)


def ideals_match(a: CISubscheme, b: CISubscheme, up_to: int) -> bool:
    """Equality of the graded pieces of the two ideals in all degrees <= up_to."""
    for d in range(0, up_to + 1):
        ma, mb = ideal_piece_matrix(a, d), ideal_piece_matrix(b, d)
        ra, rb = rank(ma), rank(mb)
        if ra != rb or rank(hstack(ma, mb)) != ra:
            return False
    return True


def ideal_contains(ci: CISubscheme, f: Form) -> bool:
    d = f.degree
    m = ideal_piece_matrix(ci, d)
    vec = [QQ(0)] * cohomology_dim(P2, 0, d)
    idx = basis(P2, 0, d).index()
    for e, c in f.terms:
        vec[idx[e]] = c
    return rank(hstack(m, RatMatrix.from_rows([[v] for v in vec]))) == rank(m)
