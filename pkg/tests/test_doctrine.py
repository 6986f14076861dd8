"""Elementary-doctrine checkers pinned to hand-computed subset examples.

Fibers over the function chart are powersets and reindexing is preimage,
so expected verdicts are recomputed from frozenset algebra in the test
body.  The diamond-fiber chart supplies the negative side: equality
satisfying the biased axioms while Frobenius fails.
"""

from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from doctrines.doctrine import (
    ChoiceOfWeakProducts,
    EqualityAssignment,
    StrictDelta,
    check_biased_elementary,
    check_derived_lemma33,
    check_strict_elementary,
    comprehension_classify,
    derive_from_choice,
    descent_elements,
    existential_report,
    has_comprehensive_diagonals_biased,
    implicational_report,
    slice_doctrine,
    universal_report,
)
from doctrines.fincat import Cone
from doctrines.fixtures import (
    CHAIN2,
    CHART3,
    TRIV,
    build_fixture,
    chart3,
    equalizer_equality,
    nonexistential_fixture,
)
from doctrines.report import FAIL, PASS, SHALLOW, ChartTooShallow, InputError

BB = Cone("Q", ("B", "B"), ("Q>B:0011", "Q>B:0101"))


@lru_cache(maxsize=None)
def subset_fixture():
    return build_fixture(CHART3)


def parse_subset(name):
    inner = name.strip("{}")
    return frozenset(inner.split(",")) if inner else frozenset()


def test_subset_equality_passes_the_biased_axioms():
    for name in (TRIV, CHAIN2, CHART3):
        cat, doc, eq = build_fixture(name)
        rep = check_biased_elementary(doc, eq)
        assert rep.passed, rep.render()
        assert rep.by_verdict(FAIL) == ()


def test_shrunken_equality_fails_reflexivity():
    cat, doc, eq = subset_fixture()
    mutated = dict(eq.table)
    mutated[BB] = "{q3}"
    rep = check_biased_elementary(doc, EqualityAssignment(mutated))
    hits = [
        f
        for f in rep.by_verdict(FAIL)
        if f.law == "reflexivity" and f.subject == f"B @ {BB.label()}"
    ]
    # The only internal diagonal hits (b0, b0), which the mutant dropped.
    assert hits and hits[0].detail == "witness d = B>Q:03"


def test_inflated_equality_fails_descent_completeness():
    cat, doc, eq = subset_fixture()
    mutated = dict(eq.table)
    mutated[BB] = "{q0,q1,q2,q3}"
    rep = check_biased_elementary(doc, EqualityAssignment(mutated))
    hits = [f for f in rep.by_verdict(FAIL) if f.law == "descent-completeness"]
    assert any(f.subject == f"B @ {BB.label()}" for f in hits)
    # Recheck one witness by hand: alpha = {b0} pulls to {q0,q1} on the
    # left and {q0,q2} on the right, and {q0,q1} is not inside {q0,q2}.
    witness = next(f for f in hits if f.subject == f"B @ {BB.label()}")
    assert witness.detail.startswith("witness alpha = ")


def test_descent_elements_match_the_preimage_oracle():
    ch = chart3()
    cat, doc, eq = subset_fixture()
    l1, l2 = (ch.maps[leg] for leg in BB.legs)
    for beta in doc.fib("Q").elements:
        bset = parse_subset(beta)
        expect = []
        for alpha in doc.fib("B").elements:
            aset = parse_subset(alpha)
            pulled1 = {q for q in ch.points["Q"] if l1[q] in aset}
            pulled2 = {q for q in ch.points["Q"] if l2[q] in aset}
            if pulled1 & bset <= pulled2:
                expect.append(alpha)
        assert sorted(descent_elements(doc, BB, beta)) == sorted(expect)


def chart3_choice():
    cat, doc, eq = subset_fixture()
    cones = {
        ("0", "0"): Cone("0", ("0", "0"), ("0>0:", "0>0:")),
        ("0", "1"): Cone("0", ("0", "1"), ("0>0:", "0>1:")),
        ("0", "B"): Cone("0", ("0", "B"), ("0>0:", "0>B:")),
        ("1", "0"): Cone("0", ("1", "0"), ("0>1:", "0>0:")),
        ("1", "1"): Cone("1", ("1", "1"), ("1>1:0", "1>1:0")),
        ("1", "B"): Cone("B", ("1", "B"), ("B>1:00", "B>B:01")),
        ("B", "0"): Cone("0", ("B", "0"), ("0>B:", "0>0:")),
        ("B", "1"): Cone("B", ("B", "1"), ("B>B:01", "B>1:00")),
        ("B", "B"): BB,
    }
    arrows = {}
    for f in cat.arrows:
        key = (cat.src[f], cat.src[f])
        tkey = (cat.tgt[f], cat.tgt[f])
        if key not in cones or tkey not in cones:
            continue
        c_s, c_t = cones[key], cones[tkey]
        fg = [
            h
            for h in cat.hom(c_s.apex, c_t.apex)
            if cat.comp(c_t.legs[0], h) == cat.comp(f, c_s.legs[0])
            and cat.comp(c_t.legs[1], h) == cat.comp(f, c_s.legs[1])
        ]
        arrows[(f, f)] = fg[0]
    return ChoiceOfWeakProducts(cones=cones, arrows=arrows)


def test_equality_derived_from_chosen_products_matches_equalizers():
    cat, doc, eq = subset_fixture()
    derived = derive_from_choice(doc, chart3_choice(), {"0": "{}", "1": "{10}", "B": "{q0,q3}"})
    assert derived.table == equalizer_equality(chart3()).table


def test_derivation_rejects_equality_without_a_reflexive_diagonal():
    cat, doc, eq = subset_fixture()
    with pytest.raises(InputError, match="condition \\(i\\) fails for B"):
        derive_from_choice(doc, chart3_choice(), {"0": "{}", "1": "{10}", "B": "{q1,q2}"})


def test_strict_checker_accepts_chosen_products():
    cat, doc, eq = subset_fixture()
    sd = StrictDelta(cones=chart3_choice().cones, delta={"0": "{}", "1": "{10}", "B": "{q0,q3}"})
    rep = check_strict_elementary(doc, sd)
    assert rep.passed, rep.render()
    assert rep.counts()[PASS] > 10
    # The squared product of the doubled two-point object has sixteen
    # points, so its box check stays out of reach on this chart.
    assert any(f.subject == "(B, B)" for f in rep.by_verdict(SHALLOW))


def test_strict_checker_flags_a_non_reflexive_equality():
    cat, doc, eq = subset_fixture()
    sd = StrictDelta(cones=chart3_choice().cones, delta={"0": "{}", "1": "{10}", "B": "{q0}"})
    rep = check_strict_elementary(doc, sd)
    hits = [f for f in rep.by_verdict(FAIL) if f.law == "diagonal-reflexivity"]
    assert hits and hits[0].subject == "B"


def test_derived_inequalities_follow_from_the_axioms():
    cat, doc, eq = subset_fixture()
    assert check_derived_lemma33(doc, eq).passed
    mutated = dict(eq.table)
    mutated[BB] = "{q0}"
    assert not check_derived_lemma33(doc, EqualityAssignment(mutated)).passed


def test_comprehension_flags_on_subsets():
    cat, doc, eq = subset_fixture()
    # The point b0 comprehends {b0} with a unique factorization.
    assert comprehension_classify(doc, "{b0}", "1>B:0") == {
        "is_comprehension": True,
        "strict": True,
        "weak": False,
        "full": True,
    }
    # A constant endomap onto b0 also comprehends it, but factorizations
    # through it are no longer unique.
    assert comprehension_classify(doc, "{b0}", "B>B:00") == {
        "is_comprehension": True,
        "strict": False,
        "weak": True,
        "full": True,
    }
    # A three-point subset has no injective cover, yet a surjection from
    # the four-point object still comprehends it weakly.
    assert comprehension_classify(doc, "{q0,q1,q2}", "Q>Q:0120")["is_comprehension"]
    # The point does not comprehend the full two-point subset: the
    # identity cannot factor through it.
    assert not comprehension_classify(doc, "{b0,b1}", "1>B:0")["is_comprehension"]


def test_diagonals_are_comprehensive_for_subset_equality():
    cat, doc, eq = subset_fixture()
    assert has_comprehensive_diagonals_biased(doc, eq) == (True, "")
    mutated = dict(eq.table)
    mutated[BB] = "{q0,q1,q2,q3}"
    ok, witness = has_comprehensive_diagonals_biased(doc, EqualityAssignment(mutated))
    assert not ok and "relates" in witness


def test_subset_doctrine_has_both_quantifiers():
    cat, doc, eq = subset_fixture()
    assert existential_report(doc, eq).passed
    assert universal_report(doc, eq).passed


def test_diamond_fiber_fails_frobenius_but_nothing_else():
    cat, doc, eq = nonexistential_fixture()
    assert check_biased_elementary(doc, eq).passed
    rep = existential_report(doc, eq)
    fails = rep.by_verdict(FAIL)
    assert fails and all(f.law == "frobenius" for f in fails)
    assert any(f.detail == "alpha = m, beta = b" for f in fails)
    # Left adjoints themselves exist: meet-and-top-preserving maps of
    # finite semilattices always have them.
    assert all(f.verdict == PASS for f in rep.findings if f.law == "left-adjoint")


def test_diamond_projections_still_have_right_adjoints():
    # Universal quantification only ranges over projections, and the
    # greatest preimage of each diamond projection exists pointwise: the
    # failure of adjoints in this fixture is specific to Frobenius.
    cat, doc, eq = nonexistential_fixture()
    rep = universal_report(doc, eq)
    assert rep.passed
    assert all(f.verdict == PASS for f in rep.findings if f.law == "right-adjoint")


def test_implication_census_on_the_diamond():
    cat, doc, eq = nonexistential_fixture()
    rep = implicational_report(doc)
    fails = rep.by_verdict(FAIL)
    # Meeting with an atom of the diamond cannot reach below it exactly,
    # so precisely the three atoms lack implications.
    assert {f.subject for f in fails} == {"W : a", "W : b", "W : c"}


def test_slice_doctrine_needs_internal_weak_pullbacks():
    cat, doc, eq = subset_fixture()
    with pytest.raises(ChartTooShallow):
        slice_doctrine(doc, eq, "1")


def test_slice_doctrine_over_the_empty_object():
    cat, doc, eq = subset_fixture()
    sdoc, seq = slice_doctrine(doc, eq, "0")
    assert list(sdoc.base.objects) == ["0>0:"]
    assert check_biased_elementary(sdoc, seq).passed


@settings(max_examples=16, deadline=None)
@given(st.data())
def test_biased_checker_rejects_random_equality_mutations(data):
    cat, doc, eq = subset_fixture()
    value = data.draw(st.sampled_from(sorted(doc.fib("Q").elements)))
    mutated = dict(eq.table)
    mutated[BB] = value
    rep = check_biased_elementary(doc, EqualityAssignment(mutated))
    if value == eq.table[BB]:
        assert rep.passed
    else:
        assert not rep.passed
