"""Fixture charts and completions checked against set-theoretic oracles.

Weak subobjects on a chart of plain functions are image subsets, so the
slice-and-collapse construction can be cross-checked against inclusion
tables, and partial equivalence spans against closure properties of
their pair images.
"""

from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from doctrines.doctrine import check_biased_elementary, comprehension_classify
from doctrines.fincat import (
    Cone,
    iso_classes,
    poset_reflection,
    slice_category,
    validate_category,
)
from doctrines.fixtures import (
    CHART3,
    FIXTURE_NAMES,
    NOCOMP,
    Per,
    build_fixture,
    chart3,
    cone_functors,
    enumerate_pers,
    equalizer_equality,
    exact_completion,
    finset_chart,
    nonexistential_fixture,
    preorder_dup_chart,
    subobjects,
    terminal_chart,
    validate_per,
    weak_subobject_class,
    weak_subobject_witness,
    weak_subobjects,
)
from doctrines.irrelevance import check_rbp_pi_coincide
from doctrines.report import PREMISE_FAILURE, ChartTooShallow, InputError

BB = Cone("Q", ("B", "B"), ("Q>B:0011", "Q>B:0101"))


@lru_cache(maxsize=None)
def big():
    return chart3()


@lru_cache(maxsize=None)
def psi_big():
    return weak_subobjects(big())


def parse_subset(name):
    inner = name.strip("{}")
    return frozenset(inner.split(",")) if inner else frozenset()


def test_subset_fibers_are_powersets():
    ch = big()
    doc = subobjects(ch)
    for x, size in [("0", 0), ("1", 1), ("B", 2), ("Q", 4)]:
        lat = doc.fib(x)
        assert len(lat.elements) == 2**size
        assert parse_subset(lat.top) == frozenset(ch.points[x])


def test_subset_reindex_is_preimage():
    ch = big()
    doc = subobjects(ch)
    for a in ["Q>B:0011", "B>Q:12", "Q>Q:0120", "1>B:1"]:
        table = doc.rx(a).table
        for elem, value in table.items():
            expect = {p for p in ch.points[ch.cat.src[a]] if ch.maps[a][p] in parse_subset(elem)}
            assert parse_subset(value) == expect


def test_equalizer_equality_values():
    eq = equalizer_equality(big())
    assert eq.value(BB) == "{q0,q3}"
    assert eq.value(Cone("B", ("1", "1"), ("B>1:00", "B>1:00"))) == "{b0,b1}"
    assert eq.value(Cone("1", ("1", "1"), ("1>1:0", "1>1:0"))) == "{10}"


def test_weak_subobjects_on_functions_are_image_subsets():
    doc, eq = psi_big()
    assert [len(doc.fib(x).elements) for x in ("0", "1", "B", "Q")] == [1, 2, 4, 16]
    assert eq.value(BB) == "{q0,q3}"
    assert check_biased_elementary(doc, eq).passed


def test_weak_subobjects_match_the_slice_reflection():
    ch = big()
    sliced, _forget = slice_category(ch.cat, "B")
    pos, rep = poset_reflection(sliced)
    assert len(pos.elements) == 4
    for f in sliced.objects:
        for g in sliced.objects:
            assert pos.le(rep[f], rep[g]) == (ch.image(f) <= ch.image(g))


def test_factorization_through_images_on_the_big_object():
    # Spot-check the image criterion driving the fast route: a function
    # factors through another exactly when its image is contained.
    ch = big()
    cat = ch.cat
    sample = [a for a in cat.arrows if cat.tgt[a] == "Q"][::9]
    for f in sample:
        for g in sample:
            factors = any(
                cat.comp(g, h) == f for h in cat.hom(cat.src[f], cat.src[g])
            )
            assert factors == (ch.image(f) <= ch.image(g))


def test_weak_subobject_witness_round_trip():
    ch = big()
    doc, _eq = psi_big()
    for x in ("1", "B", "Q"):
        for elem in doc.fib(x).elements:
            w = weak_subobject_witness(ch, x, elem)
            assert weak_subobject_class(ch, w) == elem


def test_weak_subobjects_on_a_bare_preorder():
    pre = preorder_dup_chart()
    doc, eq = weak_subobjects(pre)
    assert {x: len(doc.fib(x).elements) for x in pre.objects} == {
        "x": 1,
        "x2": 1,
        "y": 2,
        "z": 2,
    }
    assert check_biased_elementary(doc, eq).passed


def test_comprehensions_are_full_for_weak_subobjects():
    doc, eq = psi_big()
    rep = check_rbp_pi_coincide(doc, eq)
    assert rep.passed
    assert rep.by_verdict(PREMISE_FAILURE) == ()


def test_chart_without_an_empty_object_cannot_comprehend_the_empty_subset():
    cat, doc, eq = build_fixture(NOCOMP)
    candidates = [c for c in cat.arrows if cat.tgt[c] == "B"]
    assert not any(comprehension_classify(doc, "{}", c)["is_comprehension"] for c in candidates)


def test_fixture_registry_builds_everything():
    for name in FIXTURE_NAMES:
        cat, doc, eq = build_fixture(name)
        assert cat.objects
        if doc is not None:
            assert check_biased_elementary(doc, eq).passed
    with pytest.raises(InputError):
        build_fixture("UNKNOWN")


def test_weak_subobjects_need_internal_meets():
    with pytest.raises(ChartTooShallow, match="image realizing the meet"):
        weak_subobjects(finset_chart({"1": 1, "B": 2}))


def test_generic_subobjects_need_pullbacks():
    with pytest.raises(InputError, match="missing pullback"):
        subobjects(finset_chart({"1": 1, "B": 2}).cat)


def test_generic_subobjects_match_subsets_on_a_small_chart():
    ch = finset_chart({"0": 0, "1": 1, "B": 2})
    fast = subobjects(ch)
    slow = subobjects(ch.cat)
    for x in ("0", "1", "B"):
        assert len(slow.fib(x).elements) == len(fast.fib(x).elements)
    # The order agrees with subset inclusion through representatives.
    lat = slow.fib("B")
    images = {e: ch.image(e.strip("[]")) for e in lat.elements}
    for a in lat.elements:
        for b in lat.elements:
            assert lat.le(a, b) == (images[a] <= images[b])


def test_per_validation_census():
    cat = big().cat
    pers = enumerate_pers(cat)
    by_carrier = {}
    for per in pers:
        by_carrier[per.carrier] = by_carrier.get(per.carrier, 0) + 1
    # Carrier B: pair images must contain the diagonal and be symmetric,
    # leaving the diagonal (2 + 14 spans) and the full relation (24
    # bijections); carrier 1: one span per source object; carrier 0: the
    # empty span.  The four-point object has no internal doubled product.
    assert by_carrier == {"0": 1, "1": 3, "B": 40}
    assert len(pers) == 44


def test_per_diagnostics_name_the_missing_witness():
    cat = big().cat
    bad = Per("B", "Q>B:0001", "Q>B:0011")
    assert validate_per(cat, bad) == ["missing-symmetry-witness"]
    good = Per("B", "Q>B:0011", "Q>B:0101")
    assert validate_per(cat, good) == []


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_per_validation_matches_the_closure_oracle(data):
    cat = big().cat
    digits = st.text(alphabet="01", min_size=4, max_size=4)
    c1 = data.draw(digits)
    c2 = data.draw(digits)
    per = Per("B", f"Q>B:{c1}", f"Q>B:{c2}")
    pairs = set(zip(c1, c2))
    expected = set()
    if not {("0", "0"), ("1", "1")} <= pairs:
        expected.add("missing-reflexivity-witness")
    if {(b, a) for a, b in pairs} != pairs:
        expected.add("missing-symmetry-witness")
    assert set(validate_per(cat, per)) == expected


def test_cone_functors_on_the_point_feet():
    cf = cone_functors(big(), ("1", "1"))
    assert set(cf.cone_classes.elements) == {"[(0; 0>1:, 0>1:)]", "[(1; 1>1:0, 1>1:0)]"}
    assert set(cf.u.values()) == set(cf.cone_classes.elements)
    for name, cls in cf.u.items():
        assert cf.m[cls] == name
    for cls, name in cf.m.items():
        assert cf.u[name] == cls


def test_cone_functors_on_the_doubled_two_point_object():
    cf = cone_functors(big(), ("B", "B"))
    assert len(cf.cone_classes.elements) == 16
    assert cf.product == BB
    # Every internal cone is classified, including degenerate ones.
    assert len(cf.class_of_cone) == 1 + 4 + 16 + 256


def test_exact_completion_of_the_terminal_chart():
    cat = exact_completion(terminal_chart().cat)
    assert cat.objects == ("P0.1",)
    assert (
        validate_category(cat.objects, cat.arrows, cat.src, cat.tgt, cat.identities, cat.compose)
        == []
    )


def test_exact_completion_of_a_two_object_chart():
    cat = exact_completion(finset_chart({"1": 1, "B": 2}).cat)
    # Both pers live on the point carrier and are isomorphic.
    assert len(cat.objects) == 2
    assert (
        validate_category(cat.objects, cat.arrows, cat.src, cat.tgt, cat.identities, cat.compose)
        == []
    )
    assert len(iso_classes(cat)) == 1


def test_exact_completion_shape_on_the_function_chart():
    cat = exact_completion(big().cat)
    assert len(cat.objects) == 44
    assert len(cat.arrows) == 3093
    # Quotient cardinalities 0, 1 and 2 give three isomorphism classes.
    assert sorted(len(c) for c in iso_classes(cat)) == [1, 16, 27]


def test_diamond_fixture_is_biased_elementary():
    cat, doc, eq = nonexistential_fixture()
    rep = check_biased_elementary(doc, eq)
    assert rep.passed
    assert len(rep.by_verdict("pass")) >= 6
