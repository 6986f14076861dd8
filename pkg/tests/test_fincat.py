"""Finite-category layer checked against raw finite-set function tables.

The workhorse chart has four objects of sizes 0, 1, 2 and 4 and every
function between them as an arrow.  Arrow names carry their point maps,
so composition, weak limits and slices are recomputed from plain dicts
next to the assertions they back.
"""

from functools import lru_cache

import pytest
from hypothesis import given
from hypothesis import strategies as st

from doctrines.fincat import (
    ABSENT,
    FOUND,
    NOT_WEAK,
    STRICT,
    WEAK_ONLY,
    Cone,
    classify_cone,
    classify_weak_pullback,
    enumerate_weak_products,
    enumerate_weak_pullbacks,
    find_equivalence,
    full_subcategory,
    iso_classes,
    iso_pairs,
    iter_cones,
    poset_reflection,
    slice_category,
    validate_category,
    validate_functor,
)
from doctrines.fixtures import chart3, finset_chart, preorder_dup_chart
from doctrines.report import InputError

SIZES = {"0": 0, "1": 1, "B": 2, "Q": 4}


@lru_cache(maxsize=None)
def big():
    return chart3()


@lru_cache(maxsize=None)
def mini():
    return finset_chart({"1": 1, "B": 2})


def test_chart_holds_every_function():
    cat = big().cat
    assert set(cat.objects) == set(SIZES)
    assert len(cat.arrows) == 305
    for x in cat.objects:
        for y in cat.objects:
            assert len(cat.hom(x, y)) == SIZES[y] ** SIZES[x]


def test_composition_is_function_composition():
    ch = big()
    cat = ch.cat
    for f in cat.arrows:
        pts = ch.points[cat.src[f]]
        for y in cat.objects:
            for g in cat.hom(cat.tgt[f], y):
                composed = {p: ch.maps[g][ch.maps[f][p]] for p in pts}
                assert ch.maps[cat.comp(g, f)] == composed


def test_identities_fix_every_point():
    ch = big()
    for x, pts in ch.points.items():
        assert ch.maps[ch.cat.ident(x)] == {p: p for p in pts}


def test_validate_category_names_the_broken_law():
    cat = mini().cat
    ok = validate_category(cat.objects, cat.arrows, cat.src, cat.tgt, cat.identities, cat.compose)
    assert ok == []

    broken = dict(cat.compose)
    broken[(cat.ident("B"), "1>B:0")] = "1>B:1"
    diags = validate_category(cat.objects, cat.arrows, cat.src, cat.tgt, cat.identities, broken)
    assert "left-identity: 1>B:0" in diags

    broken = dict(cat.compose)
    broken[("B>B:00", "B>B:11")] = "B>B:11"
    diags = validate_category(cat.objects, cat.arrows, cat.src, cat.tgt, cat.identities, broken)
    assert any(d.startswith("associativity:") for d in diags)

    broken = dict(cat.compose)
    del broken[("B>1:00", "1>B:0")]
    diags = validate_category(cat.objects, cat.arrows, cat.src, cat.tgt, cat.identities, broken)
    assert "compose-missing: (B>1:00, 1>B:0)" in diags


def test_doubled_product_census():
    ch = big()
    cat = ch.cat
    cones = {x: enumerate_weak_products(cat, (x, x)) for x in cat.objects}
    assert {x: len(v) for x, v in cones.items()} == {"0": 1, "1": 3, "B": 24, "Q": 0}

    # A doubled product of the two-point object is a four-point apex whose
    # legs jointly enumerate all four point pairs, hence strict.
    for cone, kind in cones["B"]:
        assert cone.apex == "Q"
        assert kind == STRICT
        pairs = {(ch.maps[cone.legs[0]][q], ch.maps[cone.legs[1]][q]) for q in ch.points["Q"]}
        assert len(pairs) == 4

    by_apex = {c.apex: kind for c, kind in cones["1"]}
    assert by_apex == {"1": STRICT, "B": WEAK_ONLY, "Q": WEAK_ONLY}


def test_weak_cone_search_matches_direct_classification():
    cat = big().cat
    for feet in [("1", "1"), ("B", "B"), ("B", "1")]:
        brute = {
            (c, classify_cone(cat, c))
            for c in iter_cones(cat, feet)
            if classify_cone(cat, c) != NOT_WEAK
        }
        assert set(enumerate_weak_products(cat, feet)) == brute


def test_pullback_classification_matches_preimage_oracle():
    cat = big().cat
    f, g = "Q>B:0011", "1>B:0"
    # The set pullback is {q : f(q) = b0} x {point}, two elements.
    assert classify_weak_pullback(cat, f, g, Cone("B", ("Q", "1"), ("B>Q:01", "B>1:00"))) == STRICT
    # A square hitting only q0 misses the competitor pair through q1.
    assert classify_weak_pullback(cat, f, g, Cone("B", ("Q", "1"), ("B>Q:00", "B>1:00"))) == NOT_WEAK
    # A surjective but non-injective cover has two mediators for q0.
    assert (
        classify_weak_pullback(cat, f, g, Cone("Q", ("Q", "1"), ("Q>Q:0101", "Q>1:0000")))
        == WEAK_ONLY
    )


def test_pullback_enumeration_matches_brute_force():
    cat = mini().cat
    for f in cat.arrows:
        for g in cat.arrows:
            if cat.tgt[f] != cat.tgt[g]:
                continue
            brute = set()
            for apex in cat.objects:
                for u in cat.hom(apex, cat.src[f]):
                    for v in cat.hom(apex, cat.src[g]):
                        if cat.comp(f, u) != cat.comp(g, v):
                            continue
                        sq = Cone(apex, (cat.src[f], cat.src[g]), (u, v))
                        kind = classify_weak_pullback(cat, f, g, sq)
                        if kind != NOT_WEAK:
                            brute.add((sq, kind))
            assert set(enumerate_weak_pullbacks(cat, f, g)) == brute


def test_kernel_pair_of_a_half_split_map_is_not_internal():
    # The pullback of the two projections would need eight points; no
    # object is large enough to cover that many competitor pairs.
    cat = big().cat
    assert enumerate_weak_pullbacks(cat, "Q>B:0011", "Q>B:0101") == []


def test_slice_objects_are_arrows_into_the_base():
    cat = big().cat
    scat, forget = slice_category(cat, "B")
    assert len(scat.objects) == 23
    assert validate_functor(forget) == []
    for m in scat.arrows[:50]:
        for k in scat.arrows:
            if scat.src[k] != scat.tgt[m]:
                continue
            assert forget.ar[scat.comp(k, m)] == cat.comp(forget.ar[k], forget.ar[m])


def test_slice_over_the_point_validates():
    cat = mini().cat
    scat, forget = slice_category(cat, "1")
    assert set(scat.objects) == {"1>1:0", "B>1:00"}
    assert (
        validate_category(scat.objects, scat.arrows, scat.src, scat.tgt, scat.identities, scat.compose)
        == []
    )
    assert validate_functor(forget) == []


def test_poset_reflection_merges_mutually_reachable_objects():
    pre = preorder_dup_chart()
    pos, rep = poset_reflection(pre)
    assert rep["x"] == rep["x2"] == "[x]"
    assert set(pos.elements) == {"[x]", "[y]", "[z]"}
    assert pos.le("[x]", "[y]") and pos.le("[x]", "[z]")
    assert not pos.le("[y]", "[z]") and not pos.le("[z]", "[y]")


def test_preorder_has_duplicate_weak_products():
    pre = preorder_dup_chart()
    cones = enumerate_weak_products(pre, ("y", "z"))
    assert {c.apex for c, _ in cones} == {"x", "x2"}
    assert all(kind == STRICT for _, kind in cones)
    assert iso_classes(pre) == [("x", "x2"), ("y",), ("z",)]


def test_full_subcategory_drops_routes_through_the_removed_object():
    cat = big().cat
    sub = full_subcategory(cat, ("0", "B", "Q"))
    # 4 arrows into the point, 7 out of it, identity counted twice.
    assert len(sub.arrows) == 305 - 10
    assert (
        validate_category(sub.objects, sub.arrows, sub.src, sub.tgt, sub.identities, sub.compose)
        == []
    )


def test_function_chart_objects_are_rigid():
    cat = big().cat
    assert iso_classes(cat) == [("0",), ("1",), ("B",), ("Q",)]
    assert len(iso_pairs(cat, "B", "B")) == 2


def test_equivalence_found_between_preorder_and_its_skeleton():
    pre = preorder_dup_chart()
    skel = full_subcategory(pre, ("x", "y", "z"))
    res = find_equivalence(pre, skel)
    assert res.status == FOUND
    assert validate_functor(res.forward) == []
    assert validate_functor(res.backward) == []
    for x in pre.objects:
        u = res.unit[x]
        assert pre.src[u] == x
        assert pre.tgt[u] == res.backward.ob[res.forward.ob[x]]
        assert iso_pairs(pre, pre.src[u], pre.tgt[u])


def test_equivalence_absent_when_class_counts_differ():
    assert find_equivalence(big().cat, mini().cat).status == ABSENT


def test_unknown_object_raises():
    with pytest.raises(InputError):
        slice_category(mini().cat, "missing")


@given(st.data())
def test_cone_classification_is_mirror_symmetric(data):
    cat = big().cat
    legs = cat.hom("Q", "B")
    u = data.draw(st.sampled_from(legs))
    v = data.draw(st.sampled_from(legs))
    straight = classify_cone(cat, Cone("Q", ("B", "B"), (u, v)))
    mirrored = classify_cone(cat, Cone("Q", ("B", "B"), (v, u)))
    assert straight == mirrored
