from fractions import Fraction as F

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from laxkit import (
    Carrier,
    FuzzyRel,
    NonexpansivePair,
    StructureError,
    companion,
    compose,
    converse,
    diagonal,
    graph,
    is_hemimetric,
    is_nonexpansive_pair,
    is_pseudometric,
    sup_distance,
)
from laxkit.core import parse_unit, sat_add, sat_sub, table_le


@st.composite
def unit_fraction(draw):
    den = draw(st.sampled_from([1, 2, 3, 4, 5, 6, 8]))
    return F(draw(st.integers(0, den)), den)


@st.composite
def carrier(draw, prefix, max_size=4):
    size = draw(st.integers(1, max_size))
    return Carrier(tuple(f"{prefix}{i}" for i in range(size)))


@st.composite
def rel(draw, source, target):
    rows = tuple(
        tuple(draw(unit_fraction()) for _ in target.elements)
        for _ in source.elements
    )
    return FuzzyRel(source, target, rows)


@st.composite
def rel_pair_chain(draw):
    a = draw(carrier("a"))
    b = draw(carrier("b"))
    c = draw(carrier("c"))
    return draw(rel(a, b)), draw(rel(b, c))


@st.composite
def rel_triple_chain(draw):
    a, b, c, d = (draw(carrier(p)) for p in "abcd")
    return draw(rel(a, b)), draw(rel(b, c)), draw(rel(c, d))


@st.composite
def function_between(draw, source, target):
    return {a: draw(st.sampled_from(target.elements)) for a in source.elements}


def test_scalar_saturation():
    assert sat_add(F(3, 5), F(7, 10)) == 1
    assert sat_add(F(1, 4), F(1, 4)) == F(1, 2)
    assert sat_sub(F(1, 4), F(1, 2)) == 0
    assert sat_sub(F(9, 10), F(1, 20)) == F(17, 20)


def test_parse_unit_exact_decimals():
    assert parse_unit("0.2") == F(1, 5)
    assert parse_unit("7/10") == F(7, 10)
    with pytest.raises(StructureError):
        parse_unit("3/2")
    with pytest.raises(StructureError):
        parse_unit("zebra")


def test_compose_diagonal_is_unit():
    a = Carrier.of("x", "y")
    b = Carrier.of("u", "v", "w")
    r = FuzzyRel(a, b, ((F(1, 3), F(0), F(1)), (F(2, 5), F(1, 2), F(1, 6))))
    assert compose(r, diagonal(b)) == r
    assert compose(diagonal(a), r) == r


def test_compose_truncates():
    a, b, c = Carrier.of("a"), Carrier.of("b"), Carrier.of("c")
    r = FuzzyRel(a, b, ((F(3, 5),),))
    s = FuzzyRel(b, c, ((F(7, 10),),))
    assert compose(r, s).at("a", "c") == 1


def test_compose_two_by_two_hand_case():
    a = Carrier.of("a1", "a2")
    b = Carrier.of("b1", "b2")
    c = Carrier.of("c1", "c2")
    r = FuzzyRel(a, b, ((F(1, 5), F(9, 10)), (F(1), F(1, 10))))
    s = FuzzyRel(b, c, ((F(3, 10), F(1)), (F(2, 5), F(0))))
    got = compose(r, s)
    # brute-force oracle over the middle carrier
    for x in a.elements:
        for z in c.elements:
            expected = min(
                sat_add(r.at(x, y), s.at(y, z)) for y in b.elements
            )
            assert got.at(x, z) == expected
    assert got.at("a1", "c1") == F(1, 2)


def test_compose_empty_middle_is_all_one():
    a = Carrier.of("x")
    empty = Carrier(())
    c = Carrier.of("z")
    r = FuzzyRel(a, empty, ((),))
    s = FuzzyRel(empty, c, ())
    assert compose(r, s).at("x", "z") == 1


def test_compose_carrier_mismatch():
    a, b = Carrier.of("x"), Carrier.of("y")
    r = FuzzyRel(a, b, ((F(0),),))
    with pytest.raises(StructureError):
        compose(r, r)


def test_converse_examples():
    a = Carrier.of("a")
    b = Carrier.of("b1", "b2")
    r = FuzzyRel(a, b, ((F(1, 5), F(9, 10)),))
    assert converse(r).values == ((F(1, 5),), (F(9, 10),))
    assert converse(converse(r)) == r
    assert converse(diagonal(b)) == diagonal(b)


def test_graph_examples():
    a = Carrier.of("x", "y")
    assert graph({e: e for e in a.elements}, a, a) == diagonal(a)
    single_a, single_b = Carrier.of("a"), Carrier.of("b")
    g = graph({"a": "b"}, single_a, single_b, F(1, 4))
    assert g.values == ((F(1, 4),),)
    with pytest.raises(StructureError):
        graph({"x": "z", "y": "x"}, a, a)


def test_hemimetric_examples():
    a = Carrier.of("x", "y")
    assert is_hemimetric(diagonal(a))
    assert is_pseudometric(diagonal(a))
    asym = FuzzyRel(a, a, ((F(0), F(3, 10)), (F(4, 5), F(0))))
    assert is_hemimetric(asym)
    assert not is_pseudometric(asym)
    xyz = Carrier.of("x", "y", "z")
    broken = FuzzyRel(xyz, xyz, (
        (F(0), F(9, 10), F(1)),
        (F(0), F(0), F(1, 20)),
        (F(0), F(0), F(0)),
    ))
    # 1 > 9/10 (+) 1/20 = 19/20, so the triangle inequality fails
    assert not is_hemimetric(broken)


def test_companion_examples():
    a = Carrier.of("a1", "a2")
    b = Carrier.of("b")
    f = {"a1": F(9, 10), "a2": F(2, 5)}
    all_one = FuzzyRel.constant(a, b, F(1))
    assert companion(all_one, f) == {"b": F(0)}
    assert companion(diagonal(a), f) == f
    r = FuzzyRel(a, b, ((F(1, 5),), (F(1, 10),)))
    assert companion(r, f) == {"b": F(7, 10)}


def test_companion_empty_source():
    empty = Carrier(())
    b = Carrier.of("b")
    r = FuzzyRel(empty, b, ())
    assert companion(r, {}) == {"b": F(0)}


def test_sup_distance_examples():
    a = Carrier.of("x", "y")
    assert sup_distance(diagonal(a), diagonal(a)) == 0
    assert sup_distance(diagonal(a, F(1, 3)), diagonal(a)) == F(1, 3)
    r = FuzzyRel(a, a, ((F(0), F(1, 2)), (F(1), F(1, 4))))
    s = FuzzyRel(a, a, ((F(1, 8), F(1, 2)), (F(0), F(3, 4))))
    assert sup_distance(r, s) == max(
        abs(r.at(x, y) - s.at(x, y)) for x in a.elements for y in a.elements
    ) == 1


def test_nonexpansive_pair_construction():
    a = Carrier.of("a1", "a2")
    b = Carrier.of("b")
    r = FuzzyRel(a, b, ((F(1, 5),), (F(1, 10),)))
    f = {"a1": F(9, 10), "a2": F(2, 5)}
    pair = NonexpansivePair.from_left(r, f)
    assert pair.g_table() == {"b": F(7, 10)}
    with pytest.raises(StructureError):
        NonexpansivePair.from_tables(r, f, {"b": F(0)})


@settings(max_examples=60, deadline=None)
@given(rel_triple_chain())
def test_composition_associative(chain):
    r, s, t = chain
    assert compose(compose(r, s), t) == compose(r, compose(s, t))


@settings(max_examples=60, deadline=None)
@given(rel_pair_chain())
def test_diagonal_two_sided_unit(pair):
    r, _ = pair
    assert compose(r, diagonal(r.target)) == r
    assert compose(diagonal(r.source), r) == r


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_graph_composition_lemma(data):
    a = data.draw(carrier("a"))
    b = data.draw(carrier("b"))
    f = data.draw(function_between(a, b))
    gr = graph(f, a, b)
    assert diagonal(b).entrywise_le(compose(converse(gr), gr))
    assert compose(gr, converse(gr)).entrywise_le(diagonal(a))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_reindexing_is_graph_sandwich(data):
    a, b = data.draw(carrier("a")), data.draw(carrier("b"))
    a2, b2 = data.draw(carrier("u")), data.draw(carrier("v"))
    f = data.draw(function_between(a, a2))
    g = data.draw(function_between(b, b2))
    r = data.draw(rel(a2, b2))
    reindexed = FuzzyRel.from_function(a, b, lambda x, y: r.at(f[x], g[y]))
    sandwich = compose(compose(graph(f, a, a2), r), converse(graph(g, b, b2)))
    assert reindexed == sandwich


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_companion_is_least_valid_completion(data):
    a, b = data.draw(carrier("a")), data.draw(carrier("b"))
    r = data.draw(rel(a, b))
    f = {x: data.draw(unit_fraction()) for x in a.elements}
    g = {y: data.draw(unit_fraction()) for y in b.elements}
    least = companion(r, f)
    assert is_nonexpansive_pair(r, f, g) == table_le(least, g, b)
    assert is_nonexpansive_pair(r, f, least)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_composition_monotone(data):
    a, b, c = data.draw(carrier("a")), data.draw(carrier("b")), data.draw(carrier("c"))
    r2 = data.draw(rel(a, b))
    s = data.draw(rel(b, c))
    shrink = {x: data.draw(unit_fraction()) for x in a.elements}
    r1 = FuzzyRel.from_function(a, b, lambda x, y: sat_sub(r2.at(x, y), shrink[x]))
    assert compose(r1, s).entrywise_le(compose(r2, s))
