"""Proof-irrelevant elements, rbp predicates, and strict fibers.

A predicate over a weak-product apex is rbp when its reindexings along
parallel arrows that agree on all projections coincide.  Proof-irrelevant
elements are the descent data against the conjunction of pulled equalities
in the coordinate-mixing diagram over the apex; the computation dedupes
diagrams by the conjunct values they contribute, verifies that every
internal diagram yields the same set, and falls back to the whole fiber
on strict cones, whose mediating arrows make the descent condition a
substitution.  Strict fibers collect the proof-irrelevant classes of all
internal cones over a foot list behind one canonical hub cone with
certified transport isomorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterator, Mapping

from .doctrine import Doctrine, EqualityAssignment, _mediators, descent_elements
from .fincat import STRICT, Cone, FinCategory, classify_cone, enumerate_weak_products
from .order import InfSemilattice, semilattice
from .report import (
    FAIL,
    PASS,
    PREMISE_FAILURE,
    SHALLOW,
    ChartTooShallow,
    Finding,
    InputError,
    Report,
    report,
)


@dataclass(frozen=True)
class PiDiagram:
    """One internal instance of the coordinate-mixing diagram over a cone.

    main is the cone whose apex W carries the elements under test,
    doubling is a weak product of (W, W) with apex U, foot_cones[i] is a
    weak product of the i-th foot with itself, and ties[i]: U -> W_i
    satisfies q_1 after tie = p_i after r_1 and q_2 after tie = p_i
    after r_2.
    """

    main: Cone
    doubling: Cone
    foot_cones: tuple[Cone, ...]
    ties: tuple[str, ...]


def is_rbp(doc: Doctrine, cone: Cone, beta: str) -> tuple[bool, str]:
    """Whether reindexings of beta agree along projection-agreeing parallel pairs."""
    cat = doc.base
    w = cone.apex
    if beta not in doc.fib(w).elements:
        raise InputError(f"{beta} is not in the fiber over {w}")
    for z in cat.objects:
        groups: dict[tuple[str, ...], tuple[str, str]] = {}
        for h in cat.hom(z, w):
            key = tuple(cat.comp(leg, h) for leg in cone.legs)
            val = doc.apply(h, beta)
            seen = groups.get(key)
            if seen is None:
                groups[key] = (h, val)
            elif seen[1] != val:
                return False, f"parallel pair ({seen[0]}, {h}) from {z}"
    return True, ""


def enumerate_pi_diagrams(cat: FinCategory, cone: Cone) -> Iterator[PiDiagram]:
    """All internal coordinate-mixing diagrams over the cone, lazily.

    Yields in a deterministic order.  The family is a product over foot
    positions of (doubled foot cone, tie arrow) choices, so it can be
    large; callers that only need the descent sets should dedupe by the
    pulled conjunct values instead of materializing the family.
    """
    w = cone.apex
    for doubling, _cls in enumerate_weak_products(cat, (w, w)):
        r1, r2 = doubling.legs
        options: list[list[tuple[Cone, str]]] = []
        for leg in cone.legs:
            want = (cat.comp_list(leg, r1), cat.comp_list(leg, r2))
            per_foot: list[tuple[Cone, str]] = []
            foot = cat.tgt[leg]
            for q, _qcls in enumerate_weak_products(cat, (foot, foot)):
                for t in _mediators(cat, doubling.apex, q, want):
                    per_foot.append((q, t))
            if not per_foot:
                options = []
                break
            options.append(per_foot)
        if len(options) != len(cone.legs):
            continue
        for combo in iproduct(*options):
            yield PiDiagram(cone, doubling, tuple(q for q, _ in combo), tuple(t for _, t in combo))


def _conjunct_values(doc: Doctrine, eq: EqualityAssignment, cone: Cone, doubling: Cone) -> list[str]:
    """Distinct meets of pulled equalities over all tie choices for one doubling cone.

    Returns an empty list when some foot admits no (doubled cone, tie)
    pair, in which case the doubling cone supports no diagram at all.
    """
    cat = doc.base
    r1, r2 = doubling.legs
    u_obj = doubling.apex
    lat_u = doc.fib(u_obj)
    value_sets: list[set[str]] = []
    for leg in cone.legs:
        want = (cat.comp_list(leg, r1), cat.comp_list(leg, r2))
        foot = cat.tgt[leg]
        values: set[str] = set()
        for q, _qcls in enumerate_weak_products(cat, (foot, foot)):
            d_q = eq.value(q)
            for t in _mediators(cat, u_obj, q, want):
                values.add(doc.apply(t, d_q))
        if not values:
            return []
        value_sets.append(values)
    meets = {lat_u.meet_all(choice) for choice in iproduct(*(sorted(v) for v in value_sets))}
    return sorted(meets)


def pi_elements(doc: Doctrine, eq: EqualityAssignment, cone: Cone) -> InfSemilattice:
    """The sub-semilattice of proof-irrelevant elements over the cone's apex.

    Computes the descent set for one internal diagram and verifies that
    every internal diagram (deduped by conjunct value) yields the same
    set, aborting loudly on disagreement.  A strict cone with no internal
    diagram certifies the whole fiber; a non-strict cone with no diagram
    raises ChartTooShallow.
    """
    cat = doc.base
    w = cone.apex
    lat_w = doc.fib(w)
    agreed: frozenset[str] | None = None
    first_desc = ""
    for doubling, _cls in enumerate_weak_products(cat, (w, w)):
        for beta in _conjunct_values(doc, eq, cone, doubling):
            got = frozenset(descent_elements(doc, doubling, beta))
            desc = f"doubling {doubling.label()} with conjunct {beta}"
            if agreed is None:
                agreed = got
                first_desc = desc
            elif got != agreed:
                raise InputError(
                    f"proof-irrelevance disagrees across diagrams over {cone.label()}: "
                    f"{first_desc} gives {sorted(agreed)}, {desc} gives {sorted(got)}"
                )
    if agreed is None:
        if classify_cone(cat, cone) == STRICT:
            agreed = frozenset(lat_w.elements)
        else:
            raise ChartTooShallow(cone.label(), "internal proof-irrelevance diagram")
    members = sorted(agreed)
    pairs = [(a, b) for a in members for b in members if lat_w.le(a, b)]
    return semilattice(members, pairs)


@dataclass(eq=False)
class StrictFiber:
    """Proof-irrelevant classes over a foot list, indexed by internal cones.

    classes is the class lattice as seen on the canonical cone;
    representatives[cone][class name] is the proof-irrelevant element of
    that cone's apex fiber in the class.  Cones whose own diagrams are out
    of the chart are indexed by transporting the canonical classes along
    connecting arrows when those exist in both directions; cones with no
    connecting arrows are left out.
    """

    feet: tuple[str, ...]
    classes: InfSemilattice
    canonical: Cone
    cones: tuple[Cone, ...]
    representatives: Mapping[Cone, Mapping[str, str]]

    def class_of(self, cone: Cone, elem: str) -> str:
        reps = self.representatives.get(cone)
        if reps is None:
            raise InputError(f"cone {cone.label()} is not indexed in this strict fiber")
        for name, e in reps.items():
            if e == elem:
                return name
        raise InputError(f"{elem} is not a proof-irrelevant class element of {cone.label()}")


def _unique_restriction(doc: Doctrine, arrows: list[str], elems: tuple[str, ...], what: str) -> dict[str, str]:
    """Common restriction of the reindexings along the arrows; unique by rbp."""
    tables = []
    for h in arrows:
        tables.append({e: doc.apply(h, e) for e in elems})
    for other in tables[1:]:
        if other != tables[0]:
            raise InputError(f"transport mismatch along {what}: {tables[0]} vs {other}")
    return tables[0]


def strict_fiber(doc: Doctrine, eq: EqualityAssignment, feet) -> StrictFiber:
    """Classes of proof-irrelevant elements over the feet with transports.

    The first cone (in enumeration order) that admits proof-irrelevant
    elements becomes the canonical hub; every other indexed cone carries
    an order-isomorphism onto the hub classes, certified by identity
    round trips.  A transport that fails to be an isomorphism is reported
    as an error, never repaired.
    """
    cat = doc.base
    feet = tuple(feet)
    all_cones = [c for c, _ in enumerate_weak_products(cat, feet)]
    if not all_cones:
        raise ChartTooShallow(str(feet), "internal weak product cone")
    pi_of: dict[Cone, InfSemilattice] = {}
    for c in all_cones:
        try:
            pi_of[c] = pi_elements(doc, eq, c)
        except ChartTooShallow:
            continue
    if not pi_of:
        raise ChartTooShallow(str(feet), "cone admitting proof-irrelevant elements")
    canonical = next(c for c in all_cones if c in pi_of)
    hub = pi_of[canonical]

    representatives: dict[Cone, dict[str, str]] = {canonical: {e: e for e in hub.elements}}
    cones: list[Cone] = [canonical]
    for c in all_cones:
        if c == canonical:
            continue
        into = _mediators(cat, canonical.apex, c, canonical.legs)
        back = _mediators(cat, c.apex, canonical, c.legs)
        if not into or not back:
            if c in pi_of:
                raise ChartTooShallow(c.label(), "connecting arrows to the canonical cone")
            continue
        if c in pi_of:
            own = pi_of[c].elements
        else:
            own = tuple(sorted({doc.apply(k, e) for k in back for e in hub.elements}))
        fwd = _unique_restriction(doc, into, own, f"{c.label()} -> {canonical.label()}")
        rev = _unique_restriction(doc, back, hub.elements, f"{canonical.label()} -> {c.label()}")
        for e in own:
            if fwd[e] not in hub.elements:
                raise InputError(f"transport of {e} from {c.label()} leaves the class lattice")
            if rev[fwd[e]] != e:
                raise InputError(f"transport round trip broken at {e} on {c.label()}")
        for d in hub.elements:
            if fwd.get(rev[d]) != d:
                raise InputError(f"transport round trip broken at class {d} towards {c.label()}")
        lat_c = doc.fib(c.apex)
        for a in own:
            for b in own:
                if lat_c.le(a, b) != hub.le(fwd[a], fwd[b]):
                    raise InputError(f"transport between {c.label()} and {canonical.label()} is not an order isomorphism")
        representatives[c] = {d: rev[d] for d in hub.elements}
        cones.append(c)
    return StrictFiber(feet, hub, canonical, tuple(cones), representatives)


def transport(sf: StrictFiber, from_cone: Cone, to_cone: Cone, elem: str) -> str:
    """Carry a proof-irrelevant element from one indexed cone to another."""
    name = sf.class_of(from_cone, elem)
    reps = sf.representatives.get(to_cone)
    if reps is None:
        raise InputError(f"cone {to_cone.label()} is not indexed in this strict fiber")
    return reps[name]


def check_rbp_pi_coincide(doc: Doctrine, eq: EqualityAssignment) -> Report:
    """Per internal binary cone, whether the rbp set equals the proof-irrelevant set.

    The coincidence needs full comprehensions and comprehensive diagonals;
    when the doctrine lacks them the report opens with a premise failure
    and the comparisons are still printed for information.
    """
    from .doctrine import _has_full_comprehensions, has_comprehensive_diagonals_biased

    cat = doc.base
    fs: list[Finding] = []
    ok_comp, wit_comp = _has_full_comprehensions(doc)
    if not ok_comp:
        fs.append(Finding(PREMISE_FAILURE, "premises", "doctrine", f"no full comprehension at {wit_comp}"))
    else:
        ok_diag, wit_diag = has_comprehensive_diagonals_biased(doc, eq)
        if not ok_diag:
            fs.append(Finding(PREMISE_FAILURE, "premises", "doctrine", f"diagonals not comprehensive: {wit_diag}"))

    premised = not fs
    for x in cat.objects:
        for y in cat.objects:
            for cone, _cls in enumerate_weak_products(cat, (x, y)):
                subject = f"{cone.label()} over ({x}, {y})"
                lat_w = doc.fib(cone.apex)
                rbp_set = frozenset(b for b in lat_w.elements if is_rbp(doc, cone, b)[0])
                try:
                    pi_set = frozenset(pi_elements(doc, eq, cone).elements)
                except ChartTooShallow as exc:
                    fs.append(Finding(SHALLOW, "rbp-pi-coincide", subject, exc.missing))
                    continue
                if pi_set == rbp_set:
                    fs.append(Finding(PASS, "rbp-pi-coincide", subject, f"{len(pi_set)} element(s)"))
                else:
                    verdict = FAIL if premised else PREMISE_FAILURE
                    fs.append(
                        Finding(
                            verdict,
                            "rbp-pi-coincide",
                            subject,
                            f"rbp {sorted(rbp_set)} vs proof-irrelevant {sorted(pi_set)}",
                        )
                    )
    return report("rbp-pi-coincidence", fs)
