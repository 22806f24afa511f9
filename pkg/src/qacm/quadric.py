"""Kernel sheaves on the reducible quadric X = H1 + H2 in P3.

A kernel sheaf K is the kernel of the difference-of-restrictions surjection

    0 -> K -> F_split + F_other -> (F_split)|_L -> 0

where F_split is a split rank-2 bundle O(c) + O on one plane, F_other a
rank-2 bundle on the other plane whose restriction to L also splits as
O_L(c) + O_L, and the two restrictions are glued by an isomorphism e of
O_L(c) + O_L (identity, diagonal, or upper triangular).

Cohomology of K(t) comes from the long exact sequence.  h1 is computed two
independent ways and cross-checked at every twist:

* fast path: h1(K(t)) equals the dimension of the image of multiplication
  by u on H1(F_other(t-1)) -> H1(F_other(t)) (the kernel of the H1-level
  restriction of the non-split side), computed on the dual-monomial model;
* full path: coker of the assembled H0-level matrix plus the kernel of the
  H1-level restriction computed by a zig-zag through the presentation.

Rank-one sheaves (extension of a line bundle on one plane by a line bundle
on the other) are handled by closed dimension formulas: the connecting maps
vanish because plane line bundles have no middle cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InternalCheckError
from .linalg import (QQ, RatMatrix, block_diag, hstack, kernel_basis, kernel_dim,
                     rank, vstack)
from .monomials import (P1, P2, Form, basis, cohomology_dim, dual_exponents,
                        euler_char_p1, multiplication_matrix, restrict_to_plane)
from .plane import (CohRow, CohTable, SplitBundle, Trivialization, chern,
                    ci_from_forms, ci_from_line_points, cohomology as
                    plane_cohomology, euler_char as plane_euler_char,
                    h1_restriction_kernel_dim, make_extension_bundle,
                    make_split_bundle, relation_h0_matrix, relation_h2_matrix,
                    trivialize_on_line, trivialized_restriction_matrix)

U_FORM = Form.variable(3, "u")
AMBIENT_LINEAR = tuple(Form.variable(4, n) for n in ("x", "y", "z", "w"))


# ---------------------------------------------------------------------------
# gluing data


@dataclass(frozen=True)
class GluingData:
    """Automorphism-shaped isomorphism of O_L(c) + O_L used to glue the two
    restrictions: (s_hi, s_lo) -> (alpha s_hi + beta s_lo, delta s_lo)."""

    kind: str                 # "identity" | "diagonal" | "upper"
    alpha: Fraction = QQ(1)
    delta: Fraction = QQ(1)
    beta: Form = None         # binary form of degree c, upper only

    def describe(self) -> str:
        if self.kind == "identity":
            return "id"
        if self.kind == "diagonal":
            return f"diag({self.alpha},{self.delta})"
        return f"upper({self.alpha},{self.delta},{self.beta})"


def identity_gluing() -> GluingData:
    return GluingData("identity")


def diagonal_gluing(alpha, delta) -> GluingData:
    alpha, delta = QQ(alpha), QQ(delta)
    if alpha == 0 or delta == 0:
        raise ValueError("gluing scalars must be nonzero")
    return GluingData("diagonal", alpha, delta)


def upper_gluing(alpha, delta, beta: Form) -> GluingData:
    alpha, delta = QQ(alpha), QQ(delta)
    if alpha == 0 or delta == 0:
        raise ValueError("gluing scalars must be nonzero")
    if not isinstance(beta, Form) or beta.num_vars != 2:
        raise ValueError("beta must be a binary form on L")
    return GluingData("upper", alpha, delta, beta)


# ---------------------------------------------------------------------------
# kernel sheaves


@dataclass(eq=False)
class KernelSheaf:
    split: SplitBundle
    other: object
    e: GluingData
    c: int
    triv_split: Trivialization
    triv_other: Trivialization
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def split_side(self) -> int:
        return self.split.side


def make_kernel_sheaf(f_split: SplitBundle, f_other, e: GluingData = None) -> KernelSheaf:
    """Validate the gluing data and the matching of splitting types on L."""
    if e is None:
        e = identity_gluing()
    if not isinstance(f_split, SplitBundle) or f_split.rank != 2:
        raise ValueError("the split side must be a rank-2 split bundle")
    c = f_split.twists[0]
    if f_split.twists != (c, 0) or c < 0:
        raise ValueError("split side must be normalized to twists (c, 0) with c >= 0")
    if getattr(f_other, "rank", None) != 2:
        raise ValueError("the other side must have rank 2")
    if f_other.side == f_split.side:
        raise ValueError("the two sides must live on different planes")
    triv_split = trivialize_on_line(f_split)
    triv_other = trivialize_on_line(f_other)
    if triv_other.degrees != (c, 0):
        raise ValueError(
            f"mismatched splitting types on L: split side gives (c, 0) = ({c}, 0), "
            f"other side gives {triv_other.degrees}")
    if e.kind == "upper":
        needed = c
        deg = e.beta.degree if not e.beta.is_zero else None
        if not e.beta.is_zero and deg != needed:
            raise ValueError(f"upper gluing form must have degree {needed}")
    return KernelSheaf(f_split, f_other, e, c, triv_split, triv_other)


def _gluing_matrix(k: KernelSheaf, t: int) -> RatMatrix:
    hi = cohomology_dim(P1, 0, k.c + t)
    lo = cohomology_dim(P1, 0, t)
    e = k.e
    if e.kind == "identity":
        return RatMatrix.identity(hi + lo)
    top = RatMatrix.identity(hi).scale(e.alpha)
    bot = RatMatrix.identity(lo).scale(e.delta)
    if e.kind == "diagonal":
        return block_diag(top, bot)
    if e.beta.is_zero:
        beta_block = RatMatrix.zero(hi, lo)
    else:
        beta_block = multiplication_matrix(e.beta, basis(P1, 0, t))
    upper = hstack(top, beta_block)
    lower = hstack(RatMatrix.zero(lo, hi), bot)
    return vstack(upper, lower)


def _assembled_matrix(k: KernelSheaf, t: int) -> RatMatrix:
    """H0-level matrix of (e o restriction of F_split, -restriction of F_other)
    on sections of the two free covers, into the trivialized model of F|_L(t)."""
    key = ("U", t)
    if key not in k._cache:
        r_s = trivialized_restriction_matrix(k.split, k.triv_split, t)
        r_o = trivialized_restriction_matrix(k.other, k.triv_other, t)
        k._cache[key] = hstack(_gluing_matrix(k, t) @ r_s, -r_o)
    return k._cache[key]


def _other_relation_rank_h0(k: KernelSheaf, t: int) -> int:
    key = ("relrank", t)
    if key not in k._cache:
        k._cache[key] = rank(relation_h0_matrix(k.other, t))
    return k._cache[key]


def _assembled_rank(k: KernelSheaf, t: int) -> int:
    key = ("Urank", t)
    if key not in k._cache:
        k._cache[key] = rank(_assembled_matrix(k, t))
    return k._cache[key]


def h0(k: KernelSheaf, t: int) -> int:
    key = ("h0", t)
    if key not in k._cache:
        u = _assembled_matrix(k, t)
        k._cache[key] = (u.cols - _assembled_rank(k, t)) - _other_relation_rank_h0(k, t)
    return k._cache[key]


def _u_lift_matrix(b_twist: int, t: int) -> RatMatrix:
    """Section of multiplication by u on top cohomology: dual monomial
    (a, b, c) of H2(O(bt)) -> (a-1, b, c) in H2(O(bt-1))."""
    src = dual_exponents(3, b_twist + t)
    tgt = dual_exponents(3, b_twist + t - 1)
    tindex = {e: i for i, e in enumerate(tgt)}
    out = [[QQ(0)] * len(src) for _ in range(len(tgt))]
    for col, (a, b, c) in enumerate(src):
        out[tindex[(a - 1, b, c)]][col] = QQ(1)
    return RatMatrix(len(tgt), len(src), tuple(tuple(r) for r in out))


def _line_dual_inclusion(b_twist: int, t: int) -> RatMatrix:
    """Inclusion of H1(O_L(b+t)) into H2(O_{P2}(b+t-1)) as the dual monomials
    with u-exponent exactly -1."""
    tgt = dual_exponents(3, b_twist + t - 1)
    cols = [i for i, e in enumerate(tgt) if e[0] == -1]
    out = [[QQ(0)] * len(cols) for _ in range(len(tgt))]
    for j, i in enumerate(cols):
        out[i][j] = QQ(1)
    return RatMatrix(len(tgt), len(cols), tuple(tuple(r) for r in out))


def _h1_kernel_of_line_map_full(k: KernelSheaf, t: int) -> int:
    """dim ker(H1(F_other(t)) -> H1(F_other|_L(t))) by the zig-zag through the
    presentation: lift along u, push through the relation at t-1, and kill the
    image of the restricted relation.  Independent of the fast path."""
    pres = k.other.presentation()
    if pres.relation_twist is None:
        return 0
    b = pres.relation_twist
    ker = kernel_basis(relation_h2_matrix(k.other, t))
    if ker.dim == 0:
        return 0
    lift = _u_lift_matrix(b, t)
    a_mat = relation_h2_matrix(k.other, t - 1) @ (lift @ ker.basis)
    d_mat = relation_h2_matrix(k.other, t - 1) @ _line_dual_inclusion(b, t)
    combined = hstack(a_mat, d_mat)
    return kernel_dim(combined) - kernel_dim(d_mat)


def h1(k: KernelSheaf, t: int) -> int:
    """h1(K(t)); the fast multiplication-image path and the full long-exact-
    sequence bookkeeping must agree, else an internal error is raised."""
    key = ("h1", t)
    if key not in k._cache:
        fast = h1_restriction_kernel_dim(k.other, t)
        u = _assembled_matrix(k, t)
        coker = u.rows - _assembled_rank(k, t)
        full = coker + _h1_kernel_of_line_map_full(k, t)
        if fast != full:
            raise InternalCheckError(
                f"LES inconsistency at twist {t}: fast path {fast}, full path {full}")
        k._cache[key] = fast
    return k._cache[key]


def euler_char(k: KernelSheaf, t: int) -> int:
    line = euler_char_p1(k.c + t) + euler_char_p1(t)
    return plane_euler_char(k.split, t) + plane_euler_char(k.other, t) - line


def h2(k: KernelSheaf, t: int) -> int:
    return euler_char(k, t) - h0(k, t) + h1(k, t)


def h2_direct(k: KernelSheaf, t: int) -> int:
    """Independent route for h2(K(t)): coker of the H1-level restriction plus
    the top cohomology of the two components."""
    h1_line = cohomology_dim(P1, 1, k.c + t) + cohomology_dim(P1, 1, t)
    h1_other = plane_cohomology(k.other, 1, t)
    rank_v = h1_other - _h1_kernel_of_line_map_full(k, t)
    return (h1_line - rank_v) + plane_cohomology(k.split, 2, t) + plane_cohomology(k.other, 2, t)


def cohomology(k: KernelSheaf, i: int, t: int) -> int:
    if i == 0:
        return h0(k, t)
    if i == 1:
        return h1(k, t)
    if i == 2:
        return h2(k, t)
    raise ValueError("cohomology index must be 0, 1 or 2")


def verify_h2(k: KernelSheaf, t: int) -> None:
    if h2(k, t) != h2_direct(k, t):
        raise InternalCheckError(f"LES inconsistency in h2 at twist {t}")


def coh_table(k: KernelSheaf, tmin: int, tmax: int) -> CohTable:
    rows = []
    for t in range(tmin, tmax + 1):
        row = CohRow(t, h0(k, t), h1(k, t), h2(k, t))
        if row.chi != euler_char(k, t):
            raise InternalCheckError("chi mismatch in kernel-sheaf table")
        rows.append(row)
    return CohTable(tuple(rows))


# ---------------------------------------------------------------------------
# aCM / Ulrich


@dataclass(frozen=True)
class ACMReport:
    is_acm: bool
    table: CohTable
    window: tuple
    out_of_window_reason: str


def acm_window(k: KernelSheaf, margin: int = 8) -> tuple:
    pres = k.other.presentation()
    k_bound = max(0, *pres.target_twists)
    return (-k.c - k_bound - margin, 6)


def acm_check(k: KernelSheaf, margin: int = 8) -> ACMReport:
    """h1(K(t)) at every twist of the window [-c - k' - margin, 6]; vanishing
    outside is forced by the presentation twists and duality."""
    lo, hi = acm_window(k, margin)
    table = coh_table(k, lo, hi)
    is_acm = all(r.h1 == 0 for r in table.rows)
    pres = k.other.presentation()
    if pres.relation_twist is None:
        reason = ("both components are split, so their middle cohomology vanishes "
                  "and the H0-level restriction is onto at every twist")
    else:
        b = pres.relation_twist
        reason = (f"h1(K(t)) is bounded by h1 of the non-split side, which sits inside "
                  f"the top cohomology of O({b}) twists (zero for t >= {-b - 2}) and is "
                  f"dual to twists >= {-k.c - 2 - b - 2} on the other end; the window "
                  f"covers [{-k.c - 2}, {-b - 2}] with margin {margin}")
    return ACMReport(is_acm, table, (lo, hi), reason)


@dataclass(frozen=True)
class UlrichResult:
    is_ulrich: bool
    t0: int
    h0_after: int


def ulrich_check(k: KernelSheaf, margin: int = 8) -> UlrichResult:
    """t0 = max twist with h0(K(t0)) = 0; Ulrich iff h0 jumps to
    deg(X) * rank = 4 right after."""
    lo, hi = acm_window(k, margin)
    if h0(k, lo) != 0:
        raise ValueError("window too small: h0 does not vanish at its low end")
    t0 = lo
    for t in range(lo, hi + 1):
        if h0(k, t) == 0:
            t0 = t
        else:
            break
    after = h0(k, t0 + 1)
    return UlrichResult(after == 4, t0, after)


def restriction_invariants(k: KernelSheaf):
    """((c1, c2) on H1, (c1, c2) on H2), the Chern pairs of the two restrictions."""
    by_side = {k.split.side: chern(k.split), k.other.side: chern(k.other)}
    return (by_side[1], by_side[2])


# ---------------------------------------------------------------------------
# gluing variation


@dataclass(frozen=True)
class GluingVariationRow:
    gluing: str
    table: CohTable
    equal_to_identity: bool


def gluing_variation_report(k: KernelSheaf, gluings, tmin: int = None, tmax: int = None):
    """Cohomology tables of the same (F_split, F_other) pair under different
    gluings.  Diagonal gluings must match the identity (scalar automorphisms
    lift to the split side); upper rows are reported without assertion."""
    if tmin is None or tmax is None:
        tmin, tmax = acm_window(k)
    base = coh_table(make_kernel_sheaf(k.split, k.other, identity_gluing()), tmin, tmax)
    rows = []
    for g in gluings:
        kg = make_kernel_sheaf(k.split, k.other, g)
        table = coh_table(kg, tmin, tmax)
        equal = table == base
        if g.kind == "diagonal" and not equal:
            raise InternalCheckError("diagonal gluing produced a different table than identity")
        rows.append(GluingVariationRow(g.describe(), table, equal))
    return rows


# ---------------------------------------------------------------------------
# global generation of 0-regular kernel sheaves


def _plane_linear_mult(sheaf, side: int, linear: Form, t: int) -> RatMatrix:
    """Multiplication by the restriction of an ambient linear form on the
    sections of the free cover of a plane sheaf: twist t -> t + 1."""
    f3 = restrict_to_plane(linear, side)
    pres = sheaf.presentation()
    blocks = []
    for a in pres.target_twists:
        src = basis(P2, 0, a + t)
        if f3.is_zero:
            blocks.append(RatMatrix.zero(cohomology_dim(P2, 0, a + t + 1), src.dim))
        else:
            blocks.append(multiplication_matrix(f3, src))
    return block_diag(*blocks)


def global_generation_surjective(k: KernelSheaf) -> bool:
    """Is H0(K) (x) H0(O_X(1)) -> H0(K(1)) onto?  Guaranteed when K is
    0-regular.  Computed on explicit section representatives."""
    u0 = _assembled_matrix(k, 0)
    u1 = _assembled_matrix(k, 1)
    v0 = kernel_basis(u0)
    target_dim = u1.cols - rank(u1)
    columns = []
    for linear in AMBIENT_LINEAR:
        m = block_diag(_plane_linear_mult(k.split, k.split.side, linear, 0),
                       _plane_linear_mult(k.other, k.other.side, linear, 0))
        prod = m @ v0.basis
        if not (u1 @ prod).is_zero():
            raise InternalCheckError("multiplication did not preserve kernel sections")
        columns.append(prod)
    rel1 = relation_h0_matrix(k.other, 1)
    split_dim1 = sum(cohomology_dim(P2, 0, a + 1) for a in k.split.twists)
    embedded = vstack(RatMatrix.zero(split_dim1, rel1.cols), rel1)
    total = hstack(*columns, embedded)
    return rank(total) == target_dim


# ---------------------------------------------------------------------------
# rank-one sheaves


@dataclass(frozen=True)
class RankOneSheaf:
    """Extension of O_{H_(3-i)}(b) by O_{H_i}(a) on X; ``extension_class`` is
    informational (dimensions do not depend on it)."""

    inner_side: int
    a: int
    b: int
    extension_class: str = "nonzero"


def rank_one_cohomology(r: RankOneSheaf, i: int, t: int) -> int:
    """The long exact sequence splits dimensionally (plane line bundles have
    no middle cohomology), so every h^q is the sum of the two plane terms;
    in particular h1 vanishes identically."""
    if i not in (0, 1, 2):
        raise ValueError("cohomology index must be 0, 1 or 2")
    return cohomology_dim(P2, i, r.a + t) + cohomology_dim(P2, i, r.b + t)


def rank_one_table(r: RankOneSheaf, tmin: int, tmax: int) -> CohTable:
    return CohTable(tuple(
        CohRow(t, *(rank_one_cohomology(r, i, t) for i in (0, 1, 2)))
        for t in range(tmin, tmax + 1)))


# ---------------------------------------------------------------------------
# the two distinguished families


def point_extension_kernel(component: int, e: GluingData = None) -> KernelSheaf:
    """The Ulrich pair: an extension of the twisted ideal sheaf of a point off
    L by O_X.  Component 1 carries the point on H1, component 2 on H2."""
    if component not in (1, 2):
        raise ValueError("component must be 1 or 2")
    point_side = 1 if component == 1 else 2
    split_side = 3 - point_side
    ci = ci_from_forms(Form.variable(3, "v"), Form.variable(3, "w"))
    g = make_extension_bundle(1, 0, ci, h="auto", side=point_side)
    f_split = make_split_bundle(split_side, (1, 0))
    return make_kernel_sheaf(f_split, g, e)


def collinear_extension_kernel(c: int, k: int, points, h="auto",
                               split_side: int = 1, e: GluingData = None) -> KernelSheaf:
    """The collinear family: split O(c) + O on one plane against the rank-2
    extension bundle G built from a degree-(c-k) subscheme of L."""
    ci = ci_from_line_points(points)
    g = make_extension_bundle(c, k, ci, h=h, side=3 - split_side)
    f_split = make_split_bundle(split_side, (c, 0))
    return make_kernel_sheaf(f_split, g, e)


def split_pair_kernel(c: int, e: GluingData = None) -> KernelSheaf:
    """O(c) + O against O(c) + O: the split sheaf O_X(c) + O_X."""
    return make_kernel_sheaf(make_split_bundle(1, (c, 0)),
                             make_split_bundle(2, (c, 0)), e)
