"""Proof-irrelevance machinery checked on the subset doctrine.

Over the function chart the legs of every doubled product are jointly
injective, so reindexing-based irrelevance holds for every subset; over
the weak-only cones it cuts down to the subsets that are constant on the
fibers of the legs.  Both facts are recomputed from point maps below.
"""

from functools import lru_cache

import pytest

from doctrines.fincat import Cone, enumerate_weak_products
from doctrines.fixtures import (
    CHAIN2,
    CHART3,
    NOCOMP,
    TRIV,
    build_fixture,
    nonexistential_fixture,
    weak_subobjects,
    chart3,
)
from doctrines.irrelevance import (
    check_rbp_pi_coincide,
    is_rbp,
    pi_elements,
    strict_fiber,
    transport,
)
from doctrines.report import ChartTooShallow, InputError

BB = Cone("Q", ("B", "B"), ("Q>B:0011", "Q>B:0101"))


@lru_cache(maxsize=None)
def subset_fixture():
    return build_fixture(CHART3)


def test_point_feet_have_two_irrelevant_elements():
    cat, doc, eq = subset_fixture()
    for cone, _kind in enumerate_weak_products(cat, ("1", "1")):
        if cone.apex == "Q":
            # No doubled product of the four-point apex is internal, and
            # the cone itself is weak, so nothing certifies its fiber.
            with pytest.raises(ChartTooShallow):
                pi_elements(doc, eq, cone)
            continue
        lat = pi_elements(doc, eq, cone)
        top = doc.fib(cone.apex).top
        assert set(lat.elements) == {"{}", top}


def test_doubled_two_point_feet_keep_the_whole_fiber():
    cat, doc, eq = subset_fixture()
    for cone, _kind in enumerate_weak_products(cat, ("B", "B")):
        lat = pi_elements(doc, eq, cone)
        assert set(lat.elements) == set(doc.fib("Q").elements)


def test_rbp_on_a_weak_cone_is_constancy_on_leg_fibers():
    cat, doc, eq = subset_fixture()
    weak = Cone("B", ("1", "1"), ("B>1:00", "B>1:00"))
    for beta in doc.fib("B").elements:
        ok, witness = is_rbp(doc, weak, beta)
        assert ok == (beta in ("{}", "{b0,b1}"))
        if not ok:
            assert "parallel pair" in witness


def test_equality_is_rbp_on_every_internal_cone():
    fixtures = [build_fixture(n) for n in (TRIV, CHAIN2, CHART3)]
    fixtures.append(nonexistential_fixture())
    for cat, doc, eq in fixtures:
        for x in cat.objects:
            for cone, _kind in enumerate_weak_products(cat, (x, x)):
                ok, witness = is_rbp(doc, cone, eq.value(cone))
                assert ok, witness


def test_irrelevant_elements_are_rbp():
    cat, doc, eq = subset_fixture()
    for feet in [("1", "1"), ("B", "B")]:
        for cone, _kind in enumerate_weak_products(cat, feet):
            try:
                elements = pi_elements(doc, eq, cone).elements
            except ChartTooShallow:
                continue
            for e in elements:
                assert is_rbp(doc, cone, e)[0]


def test_strict_fiber_counts_and_round_trips():
    cat, doc, eq = subset_fixture()
    sf = strict_fiber(doc, eq, ("B", "B"))
    assert len(sf.classes.elements) == 16
    assert len(sf.cones) == 24
    for c in sf.cones:
        for name, e in sf.representatives[c].items():
            there = transport(sf, sf.canonical, c, sf.representatives[sf.canonical][name])
            assert there == e
            assert transport(sf, c, sf.canonical, e) == sf.representatives[sf.canonical][name]

    small = strict_fiber(doc, eq, ("1", "1"))
    assert len(small.classes.elements) == 2
    assert len(small.cones) == 3


def test_strict_fiber_on_weak_subobjects_matches_subsets():
    psi_doc, psi_eq = weak_subobjects(chart3())
    sf = strict_fiber(psi_doc, psi_eq, ("B", "B"))
    assert len(sf.classes.elements) == 16
    assert len(strict_fiber(psi_doc, psi_eq, ("1", "1")).classes.elements) == 2


def test_classes_agree_across_cones():
    cat, doc, eq = subset_fixture()
    for feet in [("1", "1"), ("B", "B")]:
        sf = strict_fiber(doc, eq, feet)
        reference = None
        for cone in sf.cones:
            try:
                elements = pi_elements(doc, eq, cone).elements
            except ChartTooShallow:
                # Indexed by transport only; its classes are the adopted ones.
                elements = tuple(sf.representatives[cone].values())
            names = {sf.class_of(cone, e) for e in elements}
            if reference is None:
                reference = names
            assert names == reference


def test_class_lookup_rejects_foreign_elements():
    cat, doc, eq = subset_fixture()
    sf = strict_fiber(doc, eq, ("1", "1"))
    weak = Cone("B", ("1", "1"), ("B>1:00", "B>1:00"))
    with pytest.raises(InputError, match="not a proof-irrelevant class element"):
        sf.class_of(weak, "{b0}")


def test_missing_diagram_on_a_weak_cone_raises():
    cat, doc, eq = build_fixture(NOCOMP)
    weak = Cone("B", ("1", "1"), ("B>1:00", "B>1:00"))
    with pytest.raises(ChartTooShallow, match="proof-irrelevance diagram"):
        pi_elements(doc, eq, weak)


def test_strict_cone_without_diagram_certifies_the_fiber():
    # The diamond chart has no doubled product of the big apex, but both
    # doubled cones are strict, so the whole fiber counts as irrelevant.
    cat, doc, eq = nonexistential_fixture()
    cone = Cone("W", ("X", "X"), ("p1", "p2"))
    assert set(pi_elements(doc, eq, cone).elements) == set(doc.fib("W").elements)


def test_rbp_and_irrelevance_coincide_on_subsets():
    cat, doc, eq = subset_fixture()
    rep = check_rbp_pi_coincide(doc, eq)
    assert rep.passed, rep.render()
