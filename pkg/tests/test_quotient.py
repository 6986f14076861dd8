"""Quotients and the quotient completion on the function chart.

The subset doctrine makes every claim checkable by hand: a relation class
over the doubled two-point object is a subset of the four pair points, an
equivalence relation is one that is reflexive, symmetric, and transitive
on those points, and the quotient of the full relation is the map to the
point.  The completion tests freeze the full census: four objects, three
isomorphism classes, and a single arrow class from equality to the full
relation that carries the identity.
"""

from functools import lru_cache

import pytest
from hypothesis import given
from hypothesis import strategies as st

from doctrines.doctrine import EqualityAssignment
from doctrines.fincat import Cone, find_equivalence, iso_classes
from doctrines.fixtures import (
    CHART3,
    NOCOMP,
    TRIV,
    build_fixture,
    chart3,
    enumerate_pers,
    equalizer_equality,
    exact_completion,
    finset_chart,
    nonexistential_fixture,
    per_to_rel,
    rel_to_per,
    subset_doctrine,
    weak_subobjects,
)
from doctrines.order import identity_map
from doctrines.doctrine import DoctrineMorphism
from doctrines.fincat import FunctorData
from doctrines.quotient import (
    PEquivRel,
    check_QD,
    completion_skeleton,
    equality_relation,
    find_quotient,
    is_left_covering,
    is_p_equiv_rel,
    is_quotient,
    kernel,
    lift_left_covering,
    quotient_completion,
    quotient_flags,
    rel_from_slice,
    rel_to_slice,
    relations_on,
    slice_quotient_commute,
)
from doctrines.report import FAIL, PASS, PREMISE_FAILURE, SHALLOW, ChartTooShallow, InputError

BB = Cone("Q", ("B", "B"), ("Q>B:0011", "Q>B:0101"))
DELTA = "{q0,q3}"
FULL = "{q0,q1,q2,q3}"


@lru_cache(maxsize=None)
def subset_fixture():
    return build_fixture(CHART3)


@lru_cache(maxsize=None)
def subset_completion():
    cat, doc, eq = subset_fixture()
    return quotient_completion(doc, eq)


@lru_cache(maxsize=None)
def psi_fixture():
    return weak_subobjects(chart3())


def identity_morphism(doc):
    cat = doc.base
    fd = FunctorData(cat, cat, {o: o for o in cat.objects}, {a: a for a in cat.arrows})
    return DoctrineMorphism(fd, {o: identity_map(doc.fib(o)) for o in cat.objects})


# The four pair points of Q, as coordinates over the two points of B.
Q_PAIRS = {"q0": (0, 0), "q1": (0, 1), "q2": (1, 0), "q3": (1, 1)}


def pointwise_equiv(name: str) -> bool:
    pairs = {Q_PAIRS[p] for p in name.strip("{}").split(",") if p}
    if not all((i, i) in pairs for i in (0, 1)):
        return False
    if not all((j, i) in pairs for i, j in pairs):
        return False
    return all(
        (i, k) in pairs
        for i, j in pairs
        for j2, k in pairs
        if j == j2
    )


def test_relation_laws_match_the_point_oracle_on_named_subsets():
    cat, doc, eq = subset_fixture()
    assert is_p_equiv_rel(doc, eq, "B", DELTA)[0]
    assert is_p_equiv_rel(doc, eq, "B", FULL)[0]
    ok, witness = is_p_equiv_rel(doc, eq, "B", "{q0,q1,q3}")
    assert not ok
    assert witness == "symmetry: swap transport gives {q0,q2,q3}"


@given(st.sets(st.sampled_from(sorted(Q_PAIRS)), max_size=4))
def test_relation_laws_match_the_point_oracle(points):
    cat, doc, eq = subset_fixture()
    name = "{" + ",".join(sorted(points)) + "}"
    ok, _witness = is_p_equiv_rel(doc, eq, "B", name)
    assert ok == pointwise_equiv(name)


def test_relation_validation_rejects_foreign_input():
    cat, doc, eq = subset_fixture()
    with pytest.raises(InputError, match="unknown object"):
        is_p_equiv_rel(doc, eq, "Z", DELTA)
    with pytest.raises(InputError, match="not a relation class"):
        is_p_equiv_rel(doc, eq, "B", "{b0}")


def test_relations_on_the_two_point_object():
    cat, doc, eq = subset_fixture()
    rels = relations_on(doc, eq, "B")
    assert [r.relation for r in rels] == [FULL, DELTA]
    assert equality_relation(doc, eq, "B").relation == DELTA


def test_kernels_of_collapse_section_and_identity():
    cat, doc, eq = subset_fixture()
    assert kernel(doc, eq, "B>1:00").relation == FULL
    assert kernel(doc, eq, "B>B:01").relation == DELTA
    point = kernel(doc, eq, "1>B:0")
    assert point.carrier == "1" and point.relation == "{10}"
    with pytest.raises(InputError, match="unknown arrow"):
        kernel(doc, eq, "B>B:99")


def test_quotients_of_equality_and_of_the_full_relation():
    cat, doc, eq = subset_fixture()
    assert find_quotient(doc, eq, equality_relation(doc, eq, "B")).arrow == "B>B:01"
    full = PEquivRel("B", equality_relation(doc, eq, "B").fiber, FULL)
    cert = find_quotient(doc, eq, full)
    assert cert.arrow == "B>1:00"
    assert dict(cert.factorizations)["B>1:00"] == "1>1:0"
    ok, note = is_quotient(doc, eq, "B>1:00", full)
    assert ok and "factored" in note
    ok, why = is_quotient(doc, eq, "B>B:01", full)
    assert not ok and "is not below the kernel" in why
    with pytest.raises(InputError, match="does not start at"):
        is_quotient(doc, eq, "1>B:0", full)


def test_full_relation_has_no_quotient_without_the_point():
    # Remove the point object: the collapse target is gone and no map
    # out of the two-point object can factor both constants uniquely.
    chart = finset_chart({"B": 2, "Q": 4})
    doc, eq = subset_doctrine(chart), equalizer_equality(chart)
    rels = relations_on(doc, eq, "B")
    full = [r for r in rels if r.relation == FULL][0]
    assert find_quotient(doc, eq, full) is None
    delta = [r for r in rels if r.relation == DELTA][0]
    assert find_quotient(doc, eq, delta).arrow == "B>B:01"


def test_collapse_quotient_is_effective_stable_and_of_effective_descent():
    cat, doc, eq = subset_fixture()
    full = PEquivRel("B", equality_relation(doc, eq, "B").fiber, FULL)
    flags = quotient_flags(doc, eq, "B>1:00", full)
    assert flags["effective"][0], flags["effective"][1]
    assert flags["effective-descent"][0]
    assert "2 descent element(s)" in flags["effective-descent"][1]
    assert flags["stable"][0], flags["stable"][1]


def test_completion_census_on_subsets():
    cat, doc, eq = subset_fixture()
    qc = subset_completion()
    assert qc.base.objects == ("(0, {})", "(1, {10})", f"(B, {FULL})", f"(B, {DELTA})")
    assert len(iso_classes(qc.base)) == 3
    assert set(completion_skeleton(qc).objects) == {"(0, {})", "(1, {10})", f"(B, {DELTA})"}
    assert qc.projective == {"0": "(0, {})", "1": "(1, {10})", "B": f"(B, {DELTA})"}
    # one arrow class from equality to the full relation, led by the identity
    (cls,) = qc.base.hom(f"(B, {DELTA})", f"(B, {FULL})")
    assert qc.rep_of[cls] == "B>B:01"
    assert set(qc.members_of[cls]) == {"B>B:00", "B>B:01", "B>B:10", "B>B:11"}
    # the fiber over the full relation is the descent data, a two-chain
    assert qc.doc.fib(f"(B, {FULL})").elements == ("{}", "{b0,b1}")
    assert qc.doc.fib(f"(B, {DELTA})").elements == doc.fib("B").elements


def test_canonical_morphism_is_classified_all_the_way_to_quotients():
    for qc in (subset_completion(), quotient_completion(*psi_fixture())):
        assert all(ok for ok, _wit in qc.flags.values()), qc.flags
    cat, doc, eq = build_fixture(TRIV)
    qct = quotient_completion(doc, eq)
    assert all(ok for ok, _wit in qct.flags.values())


def test_completion_rejects_a_non_elementary_doctrine():
    cat, doc, eq = subset_fixture()
    mutated = dict(eq.table)
    mutated[BB] = "{q0}"
    with pytest.raises(InputError, match="not biased elementary"):
        quotient_completion(doc, EqualityAssignment(mutated))


def test_completion_needs_some_doubled_cone():
    chart = finset_chart({"B": 2})
    with pytest.raises(ChartTooShallow, match="doubled weak product"):
        quotient_completion(subset_doctrine(chart), equalizer_equality(chart))


def test_completion_passes_the_quotient_laws():
    for qc in (subset_completion(), quotient_completion(*psi_fixture())):
        rep = check_QD(qc)
        assert rep.passed, rep.render()
        # the missing pair fiber of the source shows up as the one gap
        shallow = rep.by_verdict(SHALLOW)
        assert [f.subject for f in shallow] == [f"((B, {DELTA}), (B, {DELTA}))"]
    cat, doc, eq = build_fixture(TRIV)
    rep = check_QD(quotient_completion(doc, eq))
    assert rep.passed and not rep.by_verdict(SHALLOW)


def test_equality_to_full_quotient_is_certified_in_the_completion():
    rep = check_QD(subset_completion())
    subject = f"B>B:01|(B, {DELTA})|(B, {FULL})"
    laws = {f.law for f in rep.findings if f.subject == subject and f.verdict == PASS}
    assert laws == {"quotient-universal", "quotient-effective", "quotient-descent", "quotient-stable"}


def test_diamond_completion_reports_missing_comprehensions():
    cat, doc, eq = nonexistential_fixture()
    qd = quotient_completion(doc, eq)
    assert qd.base.objects == ("(X, top)",)
    assert not qd.flags["EqD"][0]
    rep = check_QD(qd)
    assert not rep.passed
    assert {f.law for f in rep.by_verdict(FAIL)} == {"strict-comprehensions"}


def test_canonical_morphism_is_a_left_covering():
    qc = subset_completion()
    rep = is_left_covering(qc.restricted, qc.restricted_eq, qc.doc, qc.eqn, qc.canonical)
    assert rep.passed and not rep.by_verdict(PREMISE_FAILURE), rep.render()
    covers = [f for f in rep.findings if f.law == "product-cover" and f.verdict == PASS]
    assert covers, rep.render()


def test_left_covering_premises_fail_without_comprehensions():
    cat, doc, eq = build_fixture(NOCOMP)
    rep = is_left_covering(doc, eq, doc, eq, identity_morphism(doc))
    premises = rep.by_verdict(PREMISE_FAILURE)
    assert premises and "no full comprehension" in premises[0].detail


def test_lift_of_the_canonical_morphism_is_the_identity_up_to_iso():
    qc = subset_completion()
    lifted, rep = lift_left_covering(qc, qc.canonical, qc)
    assert rep.passed, rep.render()
    laws = {f.law for f in rep.findings}
    assert {"lift-quotient", "lift-classified", "lift-agreement", "lift-naturality", "lift-fiber-agreement"} <= laws
    assert all(f.verdict == PASS for f in rep.findings if f.law == "lift-classified")
    # objectwise the lift returns the completion's own objects
    assert lifted.functor.ob[f"(B, {FULL})"] == f"(B, {FULL})"
    assert lifted.functor.ob[f"(B, {DELTA})"] == f"(B, {DELTA})"


def test_lift_rejects_morphisms_from_elsewhere():
    qc = subset_completion()
    cat, doc, eq = build_fixture(TRIV)
    qct = quotient_completion(doc, eq)
    with pytest.raises(InputError, match="must start at"):
        lift_left_covering(qc, qct.canonical, qct)


def test_lift_gate_requires_the_covering_premises():
    cat, doc, eq = build_fixture(NOCOMP)
    qcn = quotient_completion(doc, eq)
    with pytest.raises(InputError, match="not a left covering"):
        lift_left_covering(qcn, qcn.canonical, qcn)


def test_slice_presentation_round_trips():
    cat, doc, eq = subset_fixture()
    rels = relations_on(doc, eq, "B")
    for anchor in ("B>1:00", "B>B:01"):
        ker = kernel(doc, eq, anchor)
        lat = doc.fib(ker.fiber.canonical.apex)
        for sigma in rels:
            if not lat.le(sigma.relation, ker.relation):
                continue
            sl = rel_to_slice(doc, eq, anchor, sigma)
            assert sl.note == ""
            back = rel_from_slice(doc, eq, sl)
            assert back.relation == sigma.relation
    # equality below the kernel of the identity comes back through the diagonal
    sl = rel_to_slice(doc, eq, "B>B:01", equality_relation(doc, eq, "B"))
    assert sl.comprehension == "B>Q:03"
    with pytest.raises(InputError, match="is not below the kernel"):
        rel_to_slice(doc, eq, "B>B:01", [r for r in rels if r.relation == FULL][0])


def test_per_presentations_keep_their_relation_class():
    chart = chart3()
    psi = psi_fixture()
    for per in enumerate_pers(chart.cat):
        rel = per_to_rel(chart, per, psi=psi)
        again = per_to_rel(chart, rel_to_per(chart, rel), psi=psi)
        assert (again.carrier, again.relation) == (rel.carrier, rel.relation)


def test_slicing_commutes_with_completing_over_the_two_point_object():
    cat, doc, eq = subset_fixture()
    rep = slice_quotient_commute(doc, eq, "B")
    assert rep.passed, rep.render()
    counts = rep.counts()
    assert counts["fail"] == 0 and counts["premise-failure"] == 0
    # nine objects on each side: the census of relations over the slices
    assert len([f for f in rep.findings if f.law == "round-trip-left"]) == 9
    assert len([f for f in rep.findings if f.law == "round-trip-right"]) == 9
    with pytest.raises(InputError, match="unknown object"):
        slice_quotient_commute(doc, eq, "Z")


def test_slice_comparison_demands_the_existential_premise():
    cat, doc, eq = nonexistential_fixture()
    rep = slice_quotient_commute(doc, eq, "X")
    premises = rep.by_verdict(PREMISE_FAILURE)
    assert len(premises) == 3
    assert any("not existential: frobenius" in f.detail for f in premises)
    assert not rep.by_verdict(FAIL)


def test_completion_base_is_equivalent_to_the_exact_completion():
    cat, doc, eq = subset_fixture()
    result = find_equivalence(exact_completion(cat), subset_completion().base)
    assert result.status == "found"
