from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import H2, H11, TORUS
from oracles import origami_genus, origami_zero_orders
from flatlas.errors import BadIndex, Disconnected, NonBijective, ParseError
from flatlas.origami import (
    Origami,
    Permutation,
    StratumSignature,
    canonical_origami,
    check_origami,
    cylinder_proportion,
    horizontal_cylinders,
    is_isomorphic,
    parse_origami,
    parse_word,
    serialize_origami,
    sl2z_apply,
    sl2z_orbit,
    stratum_of,
    transpose,
    twist_cylinder,
    validate_origami,
    vertical_cylinders,
)


@st.composite
def origamis(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    r = draw(st.permutations(range(n)))
    u = draw(st.permutations(range(n)))
    o = Origami.from_images(r, u)
    assume(validate_origami(o).valid)
    return o


def relabeled(o, perm):
    """Conjugate of ``o`` by a square relabeling ``perm``."""
    inv = [0] * o.n
    for i, p in enumerate(perm):
        inv[p] = i
    r = [perm[o.r(inv[j])] for j in range(o.n)]
    u = [perm[o.u(inv[j])] for j in range(o.n)]
    return Origami.from_images(r, u)


# --- permutations ---------------------------------------------------------------------


def test_permutation_composition_is_right_to_left():
    a = Permutation.from_cycles([(0, 1)], 3)
    b = Permutation.from_cycles([(1, 2)], 3)
    assert (a * b)(2) == a(b(2)) == 0
    assert (b * a)(2) == 1


def test_permutation_cycles_sorted_by_minimum():
    p = Permutation.from_cycles([(3, 4), (1, 0, 2)], 6)
    assert p.cycles() == [(0, 2, 1), (3, 4), (5,)]
    assert p.cycle_string() == "(0,2,1)(3,4)"
    assert Permutation.identity(2).cycle_string() == "()"


def test_permutation_parse_one_based():
    assert Permutation.parse("(1,2)", 3, one_based=True) == Permutation.from_cycles([(0, 1)], 3)


def test_non_bijections_are_rejected():
    with pytest.raises(NonBijective):
        Permutation.from_cycles([(0, 1), (1, 2)], 3)
    bad = Origami(2, Permutation((0, 0)), Permutation((0, 1)))
    assert validate_origami(bad).errors == ("NonBijective",)
    with pytest.raises(NonBijective):
        check_origami(bad)


# --- text format ------------------------------------------------------------------------


def test_origami_text_round_trip():
    text = "origami n=4 r=(0,1,2,3) u=(0,2)"
    o = parse_origami(text)
    assert o == H11
    assert serialize_origami(o) == text
    assert parse_origami("origami  n=4   r=(0,1,2,3)(4)  u=( 0 , 2 )".replace("(4)", "")) == H11


def test_origami_text_one_based():
    assert parse_origami("origami n=3 r=(1,2) u=(1,3)", one_based=True) == H2


@pytest.mark.parametrize("bad", ["origami n=3 r=(0,1)", "origami n=x r=() u=()", "torus"])
def test_origami_text_errors(bad):
    with pytest.raises(ParseError):
        parse_origami(bad)


# --- validation and strata ----------------------------------------------------------------


def test_validate_examples():
    assert validate_origami(TORUS).valid
    assert validate_origami(H2).valid
    rep = validate_origami(Origami.from_cycles(2, [], []))
    assert not rep.valid and "Disconnected" in rep.errors
    with pytest.raises(Disconnected):
        check_origami(Origami.from_cycles(2, [], []))


def test_stratum_examples():
    assert stratum_of(TORUS) == (StratumSignature.abelian([]), 1)
    assert stratum_of(H2) == (StratumSignature.abelian([2]), 2)
    assert stratum_of(H11) == (StratumSignature.abelian([1, 1]), 2)


def test_regular_marked_points_are_ignored():
    # two-square torus: commutator is the identity, so both vertices are regular
    o = Origami.from_cycles(2, [(0, 1)], [])
    assert stratum_of(o) == (StratumSignature.abelian([]), 1)


def test_signature_text():
    assert str(StratumSignature.parse("2,1,1")) == "H(2,1^2)"
    assert StratumSignature.parse("H(1^4)") == StratumSignature.abelian([1, 1, 1, 1])
    q = StratumSignature.parse("Q(2,1,-1^3)")
    assert q.flavor == "quadratic" and q.genus == 1 and str(q) == "Q(2,1,-1^3)"
    assert StratumSignature.parse("Q(2^2,-1^4)").genus == 1
    assert StratumSignature.abelian([2, 1, 1]).dimension == 8


@given(origamis())
def test_stratum_matches_corner_gluing(o):
    sig, genus = stratum_of(o)
    r = [o.r(i) for i in range(o.n)]
    u = [o.u(i) for i in range(o.n)]
    assert list(sig.orders) == origami_zero_orders(o.n, r, u)
    assert genus == origami_genus(o.n, r, u)
    assert sum(sig.orders) == 2 * genus - 2


# --- cylinders --------------------------------------------------------------------------------


def test_cylinder_examples():
    (c,) = horizontal_cylinders(TORUS)
    assert (c.height, c.circumference, c.bottom, c.top) == (1, 1, (), ())
    assert sorted((c.height, c.circumference) for c in horizontal_cylinders(H2)) == [(1, 1), (1, 2)]


@given(origamis())
def test_cylinders_partition_squares(o):
    for cyls in (horizontal_cylinders(o), vertical_cylinders(o)):
        assert sum(c.height * c.circumference for c in cyls) == o.n
        seen = [x for c in cyls for x in c.squares]
        assert sorted(seen) == list(range(o.n))
        for c in cyls:
            assert all(len(row) == c.circumference for row in c.rows)
            assert c.is_simple == (len(c.bottom) == 1 and len(c.top) == 1)


def test_vertical_cylinders_are_horizontal_cylinders_of_the_quarter_turn():
    assert transpose(H2) == sl2z_apply(H2, "S")
    assert transpose(H2) == Origami.from_images([H2.u.inverse()(i) for i in range(3)], [H2.r(i) for i in range(3)])


# --- twists and the SL(2,Z) action ---------------------------------------------------------------


def test_twist_examples():
    assert is_isomorphic(twist_cylinder(TORUS, 0, 5), TORUS)
    cyls = horizontal_cylinders(H2)
    long = next(i for i, c in enumerate(cyls) if c.circumference == 2)
    assert stratum_of(twist_cylinder(H2, long, 1))[0] == StratumSignature.abelian([2])
    with pytest.raises(BadIndex):
        twist_cylinder(H2, 7, 1)


@given(origamis(), st.data())
def test_twist_properties(o, data):
    cyls = horizontal_cylinders(o)
    i = data.draw(st.integers(0, len(cyls) - 1))
    k = data.draw(st.integers(-5, 5))
    t = twist_cylinder(o, i, k)
    assert stratum_of(t) == stratum_of(o)
    assert [(c.height, c.circumference) for c in horizontal_cylinders(t)] == [
        (c.height, c.circumference) for c in cyls
    ]
    assert is_isomorphic(twist_cylinder(o, i, cyls[i].circumference), o)
    assert twist_cylinder(t, i, -k) == o


@given(origamis())
def test_shear_is_twisting_every_cylinder_by_its_height(o):
    twisted = o
    for i, c in enumerate(horizontal_cylinders(o)):
        twisted = twist_cylinder(twisted, i, c.height)
    assert is_isomorphic(sl2z_apply(o, "T"), twisted)


@given(origamis())
def test_group_relations(o):
    assert sl2z_apply(o, "SSSS") == o
    assert sl2z_apply(o, ["T", "T^-1"]) == o
    assert sl2z_apply(o, ["S", "S^-1"]) == o
    # letters act on labelled squares, so relations hold up to relabeling
    assert is_isomorphic(sl2z_apply(o, "STSTST"), sl2z_apply(o, "SS"))
    assert sl2z_apply(o, "S^-1TS^-1TS^-1T") == o
    assert stratum_of(sl2z_apply(o, "STS^-1T")) == stratum_of(o)


@given(origamis())
def test_shear_orbit_returns(o):
    bound = o.n * max(c.circumference for c in horizontal_cylinders(o))
    seen = {canonical_origami(o)}
    x = o
    for _ in range(bound):
        x = sl2z_apply(x, "T")
        if canonical_origami(x) in seen:
            break
        seen.add(canonical_origami(x))
    else:
        pytest.fail("no repeat within the bound")


def test_parse_word():
    assert parse_word("ST^-1 S⁻¹") == ["S", "T^-1", "S^-1"]


def test_orbit_examples():
    assert len(sl2z_orbit(TORUS)) == 1
    orbit = sl2z_orbit(H2)
    assert len(orbit) == 3  # every 3-square origami in H(2)
    assert len(sl2z_orbit(H11)) == len({canonical_origami(x) for x in sl2z_orbit(H11)})


@given(origamis(max_n=6), st.permutations(range(6)))
def test_canonical_origami_ignores_labels(o, perm):
    perm = [p for p in perm if p < o.n]
    assert canonical_origami(relabeled(o, perm)) == canonical_origami(o)


# --- cylinder proportions ---------------------------------------------------------------------------


def test_proportion_examples():
    hs = horizontal_cylinders(H2)
    vs = vertical_cylinders(H2)
    short = next(i for i, c in enumerate(hs) if c.circumference == 1)
    for x in range(len(vs)):
        assert cylinder_proportion(H2, x, range(len(hs))) == 1
        assert cylinder_proportion(H2, x, []) == 0
    # the short horizontal cylinder is square 2, which meets only the long vertical cylinder
    long_v = next(i for i, c in enumerate(vs) if c.circumference == 2)
    short_v = 1 - long_v
    assert cylinder_proportion(H2, long_v, [short]) == Fraction(1, 2)
    assert cylinder_proportion(H2, short_v, [short]) == 0
    with pytest.raises(BadIndex):
        cylinder_proportion(H2, 9, [])


@given(origamis(), st.data())
def test_proportion_additive_and_monotone(o, data):
    hs = horizontal_cylinders(o)
    vs = vertical_cylinders(o)
    x = data.draw(st.integers(0, len(vs) - 1))
    a = set(data.draw(st.lists(st.integers(0, len(hs) - 1), unique=True)))
    b = set(range(len(hs))) - a
    pa, pb = cylinder_proportion(o, x, a), cylinder_proportion(o, x, b)
    assert pa + pb == 1
    assert 0 <= pa <= 1
    assert cylinder_proportion(o, x, a | {0}) >= pa
