from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qacm.descriptor import (DCIForms, DCIPoints, DExt, DGluing, DIdeal,
                             DKernel, DLBSum, DRankOne, DescriptorParseError,
                             build, parse, parse_ambient_form, parse_and_build,
                             to_text)
from qacm.monomials import Form, h0_exponents
from qacm.quadric import KernelSheaf, RankOneSheaf

QQ = Fraction


# ---------------------------------------------------------------------------
# examples


def test_parse_split_bundle():
    assert parse("O(3)+O(0)@H1") == DLBSum((3, 0), 1)


def test_parse_kernel_request():
    d = parse("K(F1=O(3)+O(0)@H1,F2=G(c=3,k=1,Z=[u,v*w],h=auto)@H2,e=id)")
    assert isinstance(d, DKernel)
    assert d.f1 == DLBSum((3, 0), 1)
    assert isinstance(d.f2, DExt) and (d.f2.c, d.f2.k) == (3, 1)
    assert d.e.kind == "identity"


def test_build_kernel_request():
    k = parse_and_build("K(F1=O(3)+O(0)@H1,F2=G(c=3,k=1,Z=[u,v*w],h=auto)@H2,e=id)")
    assert isinstance(k, KernelSheaf)
    assert k.c == 3


def test_semantic_degree_error():
    with pytest.raises(ValueError, match="c - k"):
        parse_and_build("G(c=1,k=2,Z=[u,v],h=auto)@H2")


def test_locally_free_error_on_build():
    # parses fine; the constructor rejects the class (vanishes on Z)
    text = "G(c=3,k=1,Z=[u,v*w],h=v^2)@H2"
    assert isinstance(parse(text), DExt)
    with pytest.raises(ValueError, match="Cayley-Bacharach"):
        parse_and_build(text)


def test_parse_rank_one():
    assert parse("R1(side=2,a=-1,b=0)") == DRankOne(2, -1, 0)
    assert isinstance(build(parse("R1(side=2,a=-1,b=0)")), RankOneSheaf)


def test_parse_points():
    d = parse("I(points([0:1:3];[0:1:5]))(2)@H2")
    assert d == DIdeal(DCIPoints(((QQ(0), QQ(1), QQ(3)), (QQ(0), QQ(1), QQ(5)))), 2, 2)
    obj = build(d)
    assert obj.ci.points is not None


def test_points_off_line_rejected_at_build():
    with pytest.raises(ValueError, match="u = 0"):
        parse_and_build("I(points([1:0:0]))(1)@H1")


def test_parse_gluings():
    d = parse("K(F1=O(0)+O(0)@H1,F2=O(0)+O(0)@H2,e=diag(2,3))")
    assert d.e == DGluing("diagonal", QQ(2), QQ(3))
    d2 = parse("K(F1=O(3)+O(0)@H1,F2=O(3)+O(0)@H2,e=upper(1,1,v^3))")
    assert d2.e.kind == "upper" and d2.e.beta.degree == 3


def test_parse_rational_coefficients():
    d = parse("I([u,3/2*v^2+w^2])(0)@H1")
    f2 = d.ci.f2
    assert f2.coeff((0, 2, 0)) == QQ(3, 2)


def test_whitespace_insensitive():
    a = parse("K( F1 = O(1)+O(0)@H1 , F2 = O(1)+O(0)@H2 , e = id )")
    b = parse("K(F1=O(1)+O(0)@H1,F2=O(1)+O(0)@H2,e=id)")
    assert a == b


def test_ambient_form_parser():
    f = parse_ambient_form("x*y - z^2")
    assert f.num_vars == 4 and f.degree == 2
    with pytest.raises(DescriptorParseError):
        parse_ambient_form("x*u")


# ---------------------------------------------------------------------------
# errors


@pytest.mark.parametrize("bad", [
    "", "O(", "O(3)@H3", "Q(3)", "O(3)@H1 junk", "points",
    "K(F1=O(0)@H1,F2=O(0)@H1,e=id)",
    "K(F1=R1(side=1,a=0,b=0),F2=O(0)@H2,e=id)",
    "G(c=2,k=0,Z=[u,v*w],h=1/0)@H1",
    "O(2)+@H1", "I([u])(0)@H1", "R1(side=3,a=0,b=0)",
    "K(F1=K(F1=O(0)@H1,F2=O(0)@H2,e=id),F2=O(0)@H2,e=id)",
])
def test_parse_errors_are_positioned(bad):
    with pytest.raises(DescriptorParseError) as err:
        parse(bad)
    assert err.value.line >= 1 and err.value.col >= 1
    lines = bad.split("\n")
    assert err.value.line <= max(1, len(lines))
    assert err.value.col <= len(lines[err.value.line - 1]) + 1


def test_deep_nesting_is_a_parse_error():
    text = "K(F1=" * 64 + "O(0)@H1" + ")" * 64
    with pytest.raises(DescriptorParseError):
        parse(text)


# ---------------------------------------------------------------------------
# round-trip property


def _form(num_vars, degree):
    mons = h0_exponents(num_vars, degree)
    return st.lists(st.integers(-3, 3), min_size=len(mons), max_size=len(mons)).map(
        lambda cs: Form.from_dict(num_vars, dict(zip(mons, cs)))).filter(
        lambda f: not f.is_zero)


def _forms3():
    return st.integers(1, 3).flatmap(lambda d: _form(3, d))


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=9)
planes = st.sampled_from([1, 2])


def _ci():
    return st.one_of(
        st.tuples(_forms3(), _forms3()).map(lambda t: DCIForms(*t)),
        st.lists(st.tuples(rationals, rationals), min_size=1, max_size=3).map(
            lambda pts: DCIPoints(tuple((QQ(0), a, b) for a, b in pts))),
    )


def _lbsum(plane):
    return st.lists(st.integers(-5, 5), min_size=1, max_size=3).map(
        lambda ts: DLBSum(tuple(ts), plane))


def _ideal(plane):
    return st.tuples(_ci(), st.integers(-3, 3)).map(lambda t: DIdeal(t[0], t[1], plane))


def _ext(plane):
    return st.tuples(st.integers(0, 4), st.integers(0, 3), _ci(),
                     st.one_of(st.just("auto"), _forms3())).map(
        lambda t: DExt(t[0], t[1], t[2], t[3], plane))


def _gluing():
    nonzero = rationals.filter(lambda q: q != 0)
    return st.one_of(
        st.just(DGluing("identity")),
        st.tuples(nonzero, nonzero).map(lambda t: DGluing("diagonal", *t)),
        st.tuples(nonzero, nonzero, st.integers(0, 3).flatmap(lambda d: _form(2, d))).map(
            lambda t: DGluing("upper", t[0], t[1], t[2])),
    )


def _plane_sheaf(plane):
    return st.one_of(_lbsum(plane), _ideal(plane), _ext(plane))


descriptors = st.one_of(
    planes.flatmap(_plane_sheaf),
    st.tuples(planes, st.booleans()).flatmap(
        lambda t: st.tuples(_plane_sheaf(t[0]), _plane_sheaf(3 - t[0]), _gluing()).map(
            lambda s: DKernel(s[0], s[1], s[2]))),
    st.tuples(planes, st.integers(-6, 6), st.integers(-6, 6)).map(
        lambda t: DRankOne(*t)),
)


@given(descriptors)
@settings(max_examples=150, deadline=None)
def test_print_parse_roundtrip(node):
    text = to_text(node)
    assert parse(text) == node
    assert to_text(parse(text)) == text


# ---------------------------------------------------------------------------
# totality fuzz


@given(st.text(max_size=60))
@settings(max_examples=300, deadline=None)
def test_parse_is_total_on_arbitrary_text(text):
    try:
        parse(text)
    except DescriptorParseError:
        pass


@given(st.text(alphabet="OIGKR12()[]+-*/^,;:=@Hvuwzcke points auto diag", max_size=50))
@settings(max_examples=400, deadline=None)
def test_parse_is_total_on_grammar_alphabet(text):
    try:
        parse(text)
    except DescriptorParseError:
        pass
