"""Internal equivalence relations, their quotients, and the quotient completion.

Everything here is chart-relative in the same sense as the base checkers.
An equivalence relation is a proof-irrelevant class over a doubled weak
product, a quotient is an internal arrow certified against every internal
competitor whose kernel the chart can express, and the completion only
materializes objects whose relation data is expressible.  Relations on a
completed object are handled through their pair presentation: a relation
on (X, rho) is a relation mu on X above rho, so the laws of the completion
reduce to finite checks over the source chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .doctrine import (
    Doctrine,
    DoctrineMorphism,
    EqualityAssignment,
    StrictDelta,
    _comprehension_tables,
    _comprehensions_of,
    _doubled_cones,
    _has_full_comprehensions,
    _mediators,
    check_biased_elementary,
    check_strict_elementary,
    comprehension_classify,
    descent_elements,
    descent_poset,
    existential_report,
    has_comprehensive_diagonals_biased,
    morphism_classify,
)
from .fincat import (
    STRICT,
    Cone,
    FinCategory,
    FunctorData,
    enumerate_weak_products,
    enumerate_weak_pullbacks,
    full_subcategory,
    iso_classes,
    iso_pairs,
    slice_category,
    validate_functor,
)
from .irrelevance import StrictFiber, strict_fiber
from .order import InfSemilattice, MonotoneMap, is_meet_preserving, left_adjoint
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


@dataclass(eq=False)
class PEquivRel:
    """An internal equivalence relation presented as a proof-irrelevant class.

    carrier is the base object, fiber the strict fiber over the doubled
    carrier, and relation one of its class names.
    """

    carrier: str
    fiber: StrictFiber
    relation: str

    def label(self) -> str:
        return f"({self.carrier}, {self.relation})"


def _value_along(doc: Doctrine, u_obj: str, composites, sf: StrictFiber, cls: str) -> str:
    """Reindex a class representative along a span, through the canonical cone.

    Any mediating arrow realizes the span; proof irrelevance makes the
    choice immaterial, and a genuine disagreement is reported, not
    repaired.
    """
    cat = doc.base
    cone = sf.canonical
    hs = _mediators(cat, u_obj, cone, tuple(composites))
    if not hs:
        raise ChartTooShallow(f"span {tuple(composites)} from {u_obj}", f"mediating arrow into {cone.label()}")
    rep = sf.representatives[cone][cls]
    vals = {doc.apply(h, rep) for h in hs}
    if len(vals) > 1:
        raise InputError(f"transport of {cls} along {tuple(composites)} is ambiguous: {sorted(vals)}")
    return vals.pop()


def _delta_class(eq: EqualityAssignment, sf: StrictFiber) -> str:
    return sf.class_of(sf.canonical, eq.value(sf.canonical))


def _pair_class(doc: Doctrine, sf_src: StrictFiber, f1: str, f2: str, sf_tgt: StrictFiber, cls: str) -> str:
    """Class of a relation pulled back along a parallel pair of arrows."""
    cat = doc.base
    cone = sf_src.canonical
    u1, u2 = cone.legs
    value = _value_along(doc, cone.apex, (cat.comp(f1, u1), cat.comp(f2, u2)), sf_tgt, cls)
    return sf_src.class_of(cone, value)


def _equiv_verdict(doc: Doctrine, x: str, sf: StrictFiber, relation: str) -> tuple[bool, str]:
    cat = doc.base
    cone = sf.canonical
    lat_w = doc.fib(cone.apex)
    lat_x = doc.fib(x)
    ident = cat.ident(x)

    refl = _value_along(doc, x, (ident, ident), sf, relation)
    if not lat_x.le(lat_x.top, refl):
        return False, f"reflexivity: diagonal reindexing gives {refl}"

    swapped = _value_along(doc, cone.apex, (cone.legs[1], cone.legs[0]), sf, relation)
    if not lat_w.le(swapped, relation):
        return False, f"symmetry: swap transport gives {swapped}"

    triples = enumerate_weak_products(cat, (x, x, x))
    for t, _cls in triples:
        t1, t2, t3 = t.legs
        v12 = _value_along(doc, t.apex, (t1, t2), sf, relation)
        v23 = _value_along(doc, t.apex, (t2, t3), sf, relation)
        v13 = _value_along(doc, t.apex, (t1, t3), sf, relation)
        lat_t = doc.fib(t.apex)
        if not lat_t.le(lat_t.meet_all((v12, v23)), v13):
            return False, f"transitivity: cone {t.label()}"
    note = "" if triples else "transitivity unchecked: no internal weak product over the tripled object"
    return True, note


def is_p_equiv_rel(doc: Doctrine, eq: EqualityAssignment, x: str, relation: str) -> tuple[bool, str]:
    """Reflexivity, symmetry, and transitivity of a class over the doubled object.

    Laws are evaluated on representatives: reflexivity along a diagonal
    mediator, symmetry along the swapped projections, transitivity over
    every internal weak product of the tripled object.  With no tripled
    cone the transitivity clause is vacuous and the note says so.
    """
    cat = doc.base
    if x not in cat.objects:
        raise InputError(f"unknown object {x}")
    sf = strict_fiber(doc, eq, (x, x))
    if relation not in sf.classes.elements:
        raise InputError(f"{relation} is not a relation class over {x}")
    return _equiv_verdict(doc, x, sf, relation)


def _relations_from(doc: Doctrine, x: str, sf: StrictFiber) -> list[PEquivRel]:
    return [
        PEquivRel(x, sf, cls)
        for cls in sf.classes.elements
        if _equiv_verdict(doc, x, sf, cls)[0]
    ]


def relations_on(doc: Doctrine, eq: EqualityAssignment, x: str) -> tuple[PEquivRel, ...]:
    """Every internal equivalence relation on the object, in class order."""
    if x not in doc.base.objects:
        raise InputError(f"unknown object {x}")
    sf = strict_fiber(doc, eq, (x, x))
    return tuple(_relations_from(doc, x, sf))


def equality_relation(doc: Doctrine, eq: EqualityAssignment, x: str) -> PEquivRel:
    """The equality class on an object, as a relation."""
    sf = strict_fiber(doc, eq, (x, x))
    return PEquivRel(x, sf, _delta_class(eq, sf))


def kernel(doc: Doctrine, eq: EqualityAssignment, f: str) -> PEquivRel:
    """The relation identifying exactly what the arrow identifies."""
    cat = doc.base
    if f not in cat.src:
        raise InputError(f"unknown arrow {f}")
    x, y = cat.src[f], cat.tgt[f]
    sfx = strict_fiber(doc, eq, (x, x))
    sfy = strict_fiber(doc, eq, (y, y))
    cls = _pair_class(doc, sfx, f, f, sfy, _delta_class(eq, sfy))
    return PEquivRel(x, sfx, cls)


@dataclass(eq=False)
class Quotient:
    """Certificate that an arrow coequalizes a relation.

    factorizations pairs each internal competitor with its unique fill;
    skipped lists competitors whose kernels the chart cannot express,
    which are reported rather than silently compared.
    """

    arrow: str
    relation: PEquivRel
    factorizations: tuple[tuple[str, str], ...]
    skipped: tuple[str, ...]


def _kernel_tools(doc: Doctrine, eq: EqualityAssignment):
    """Per-call caches for pair fibers and kernel classes."""
    sf_cache: dict[str, Optional[StrictFiber]] = {}
    kern: dict[str, Optional[str]] = {}

    def sf_of(x: str) -> Optional[StrictFiber]:
        if x not in sf_cache:
            try:
                sf_cache[x] = strict_fiber(doc, eq, (x, x))
            except ChartTooShallow:
                sf_cache[x] = None
        return sf_cache[x]

    def kernel_of(g: str) -> Optional[str]:
        if g not in kern:
            sfx = sf_of(doc.base.src[g])
            sfy = sf_of(doc.base.tgt[g])
            if sfx is None or sfy is None:
                kern[g] = None
            else:
                kern[g] = _pair_class(doc, sfx, g, g, sfy, _delta_class(eq, sfy))
        return kern[g]

    return sf_of, kernel_of


def _quotient_certificate(doc, eq, q, rel, kernel_of):
    cat = doc.base
    lat_w = doc.fib(rel.fiber.canonical.apex)
    kq = kernel_of(q)
    if kq is None:
        return None, f"kernel of {q} is not expressible on the chart"
    if not lat_w.le(rel.relation, kq):
        return None, f"{rel.label()} is not below the kernel of {q}"
    facts: list[tuple[str, str]] = []
    skipped: list[str] = []
    for g in cat.arrows:
        if cat.src[g] != rel.carrier:
            continue
        kg = kernel_of(g)
        if kg is None:
            skipped.append(g)
            continue
        if not lat_w.le(rel.relation, kg):
            continue
        hs = [h for h in cat.hom(cat.tgt[q], cat.tgt[g]) if cat.comp(h, q) == g]
        if len(hs) != 1:
            return None, f"competitor {g} admits {len(hs)} factorization(s)"
        facts.append((g, hs[0]))
    return Quotient(q, rel, tuple(facts), tuple(skipped)), ""


def is_quotient(doc: Doctrine, eq: EqualityAssignment, q: str, rel: PEquivRel) -> tuple[bool, str]:
    """Whether the arrow is a quotient of the relation, with a reason."""
    cat = doc.base
    if q not in cat.src:
        raise InputError(f"unknown arrow {q}")
    if cat.src[q] != rel.carrier:
        raise InputError(f"{q} does not start at {rel.carrier}")
    _sf_of, kernel_of = _kernel_tools(doc, eq)
    cert, why = _quotient_certificate(doc, eq, q, rel, kernel_of)
    if cert is None:
        return False, why
    note = f"factored {len(cert.factorizations)} competitor(s)"
    if cert.skipped:
        note += f"; skipped {len(cert.skipped)} with off-chart kernels"
    return True, note


def find_quotient(doc: Doctrine, eq: EqualityAssignment, rel: PEquivRel) -> Optional[Quotient]:
    """First certified quotient of the relation, identity first; None when absent."""
    cat = doc.base
    _sf_of, kernel_of = _kernel_tools(doc, eq)
    cands = [q for q in cat.arrows if cat.src[q] == rel.carrier]
    cands.sort(key=lambda q: (0 if q == cat.ident(rel.carrier) else 1, cat.tgt[q], q))
    for q in cands:
        cert, _why = _quotient_certificate(doc, eq, q, rel, kernel_of)
        if cert is not None:
            return cert
    return None


def _flags_with(doc, eq, q, rel, sf_of, kernel_of) -> dict[str, tuple[bool, str]]:
    cat = doc.base
    x, y = cat.src[q], cat.tgt[q]
    out: dict[str, tuple[bool, str]] = {}
    kq = kernel_of(q)
    if kq is None:
        raise ChartTooShallow(q, "an internal expression of the kernel")
    out["effective"] = (kq == rel.relation, f"kernel class {kq} vs relation {rel.relation}")

    des = descent_elements(doc, rel.fiber.canonical, rel.relation)
    lat_x = doc.fib(x)
    lat_y = doc.fib(y)
    table = doc.rx(q).table
    probs: list[str] = []
    image = [table[b] for b in lat_y.elements]
    if len(set(image)) != len(image):
        probs.append("not injective")
    if set(image) != set(des):
        probs.append("image differs from the descent data")
    if not probs:
        for b1 in lat_y.elements:
            for b2 in lat_y.elements:
                if lat_y.le(b1, b2) != lat_x.le(table[b1], table[b2]):
                    probs.append(f"order mismatch at ({b1}, {b2})")
                    break
            if probs:
                break
    out["effective-descent"] = (not probs, "; ".join(probs) or f"{len(des)} descent element(s)")

    bad = ""
    checked = 0
    gaps: list[str] = []
    for f in cat.arrows:
        if cat.tgt[f] != y:
            continue
        squares = enumerate_weak_pullbacks(cat, q, f)
        if not squares:
            gaps.append(f"no internal square with {f}")
            continue
        sq = squares[0][0]
        pulled = sq.legs[1]
        kp = kernel_of(pulled)
        if kp is None:
            gaps.append(f"kernel of the pullback along {f} is off the chart")
            continue
        prel = PEquivRel(sq.apex, sf_of(sq.apex), kp)
        cert, why = _quotient_certificate(doc, eq, pulled, prel, kernel_of)
        if cert is None:
            bad = f"pullback along {f}: {why}"
            break
        checked += 1
    note = f"checked {checked} square(s)"
    if gaps:
        note += "; " + "; ".join(gaps)
    out["stable"] = (not bad, bad or note)
    return out


def quotient_flags(doc: Doctrine, eq: EqualityAssignment, q: str, rel: PEquivRel) -> dict[str, tuple[bool, str]]:
    """Effectiveness, effective descent, and stability of one quotient arrow.

    Stability pulls the arrow back along every internal arrow into its
    target and asks the pulled arrow to be a quotient of its own kernel;
    squares or kernels the chart lacks are noted, not failed.
    """
    if q not in doc.base.src:
        raise InputError(f"unknown arrow {q}")
    if doc.base.src[q] != rel.carrier:
        raise InputError(f"{q} does not start at {rel.carrier}")
    sf_of, kernel_of = _kernel_tools(doc, eq)
    return _flags_with(doc, eq, q, rel, sf_of, kernel_of)


def has_effective_stable_quotients(doc: Doctrine, eqn: EqualityAssignment) -> tuple[bool, str]:
    """Whether every internal equivalence relation has a good quotient.

    Good means a certified quotient that is effective, of effective
    descent, and stable.  Carriers without an internal doubled cone are
    outside the quantifier.
    """
    cat = doc.base
    sf_of, kernel_of = _kernel_tools(doc, eqn)
    checked = 0
    for x in cat.objects:
        sf = sf_of(x)
        if sf is None:
            continue
        for rel in _relations_from(doc, x, sf):
            found = None
            cands = [q for q in cat.arrows if cat.src[q] == x]
            cands.sort(key=lambda q: (0 if q == cat.ident(x) else 1, cat.tgt[q], q))
            for q in cands:
                cert, _why = _quotient_certificate(doc, eqn, q, rel, kernel_of)
                if cert is not None:
                    found = cert
                    break
            if found is None:
                return False, f"no internal quotient of {rel.label()}"
            flags = _flags_with(doc, eqn, found.arrow, rel, sf_of, kernel_of)
            for law, (ok, wit) in flags.items():
                if not ok:
                    return False, f"{rel.label()}: {law}: {wit}"
            checked += 1
    return True, f"checked {checked} relation(s)"


def morphism_preserves_quotients(src_doc, src_eqn, tgt_doc, tgt_eqn, m) -> tuple[bool, str]:
    """Whether the images of certified quotients are again quotients.

    Relations are transported through the image of the source pair cone;
    relations or cones the target chart cannot express are skipped with a
    note.
    """
    cat = src_doc.base
    fd = m.functor
    sf_of, kernel_of = _kernel_tools(src_doc, src_eqn)
    checked = 0
    skipped: list[str] = []
    for x in cat.objects:
        sf = sf_of(x)
        if sf is None:
            continue
        for rel in _relations_from(src_doc, x, sf):
            found = None
            cands = [q for q in cat.arrows if cat.src[q] == x]
            cands.sort(key=lambda q: (0 if q == cat.ident(x) else 1, cat.tgt[q], q))
            for q in cands:
                cert, _why = _quotient_certificate(src_doc, src_eqn, q, rel, kernel_of)
                if cert is not None:
                    found = cert
                    break
            if found is None:
                continue
            cone = sf.canonical
            image = Cone(fd.ob[cone.apex], (fd.ob[x], fd.ob[x]), (fd.ar[cone.legs[0]], fd.ar[cone.legs[1]]))
            try:
                sft = strict_fiber(tgt_doc, tgt_eqn, (fd.ob[x], fd.ob[x]))
                cls = sft.class_of(image, m.fiber_maps[cone.apex].table[rel.relation])
            except (ChartTooShallow, InputError):
                skipped.append(rel.label())
                continue
            ok, why = is_quotient(tgt_doc, tgt_eqn, fd.ar[found.arrow], PEquivRel(fd.ob[x], sft, cls))
            if not ok:
                return False, f"image of the quotient of {rel.label()}: {why}"
            checked += 1
    note = f"checked {checked} quotient(s)"
    if skipped:
        note += "; skipped " + ", ".join(skipped)
    return True, note


@dataclass(eq=False)
class QuotientCompletion:
    """The doctrine of descent data over internal equivalence relations.

    base has one object per materialized relation and one arrow per class
    of compatible source arrows; doc and eqn are its fibers, reindexings,
    and equality.  restricted is the full sub-doctrine of the source on
    the carriers that bear relations, canonical the constant-relation
    morphism out of it, and flags its classification.
    """

    source: Doctrine
    source_eq: EqualityAssignment
    restricted: Doctrine
    restricted_eq: EqualityAssignment
    base: FinCategory
    doc: Doctrine
    eqn: EqualityAssignment
    relations: Mapping[str, tuple[PEquivRel, ...]]
    object_of: Mapping[tuple[str, str], str]
    rel_of: Mapping[str, PEquivRel]
    projective: Mapping[str, str]
    rep_of: Mapping[str, str]
    members_of: Mapping[str, tuple[str, ...]]
    arrow_class: Mapping[tuple[str, str, str], str]
    canonical: DoctrineMorphism
    flags: Mapping[str, tuple[bool, str]]


def quotient_completion(doc: Doctrine, eq: EqualityAssignment) -> QuotientCompletion:
    """Complete a biased elementary doctrine by its internal relations.

    Objects are pairs (carrier, relation class); arrows are source arrows
    that respect the relations, identified when the relations cannot tell
    them apart; the fiber over (X, rho) is the descent data of rho.  The
    identification is only sound when identified arrows reindex descent
    data identically and reindexing respects descent, so both are checked
    exhaustively before anything is built.
    """
    cat = doc.base
    pre = check_biased_elementary(doc, eq)
    if not pre.passed:
        bad = pre.by_verdict(FAIL)[0]
        raise InputError(f"not biased elementary: {bad.law} at {bad.subject}")

    relations: dict[str, tuple[PEquivRel, ...]] = {}
    sf_by: dict[str, StrictFiber] = {}
    for x in cat.objects:
        try:
            sf = strict_fiber(doc, eq, (x, x))
        except ChartTooShallow:
            continue
        sf_by[x] = sf
        relations[x] = tuple(_relations_from(doc, x, sf))
    if not any(relations.values()):
        raise ChartTooShallow("quotient completion", "an internal doubled weak product over any object")
    carriers = [x for x in cat.objects if relations.get(x)]

    objs: list[str] = []
    object_of: dict[tuple[str, str], str] = {}
    rel_of: dict[str, PEquivRel] = {}
    fibers: dict[str, InfSemilattice] = {}
    des_of: dict[str, tuple[str, ...]] = {}
    projective: dict[str, str] = {}
    for x in carriers:
        for rel in relations[x]:
            name = f"({x}, {rel.relation})"
            objs.append(name)
            object_of[(x, rel.relation)] = name
            rel_of[name] = rel
            fibers[name] = descent_poset(doc, rel.fiber.canonical, rel.relation)
            des_of[name] = fibers[name].elements
        key = (x, _delta_class(eq, sf_by[x]))
        if key not in object_of:
            raise InputError(f"equality over {x} is not an internal equivalence relation")
        projective[x] = object_of[key]

    pair_cache: dict[tuple[str, str, str], str] = {}

    def pair_cls(f1: str, f2: str, tgt_rel: PEquivRel) -> str:
        key = (f1, f2, tgt_rel.relation)
        got = pair_cache.get(key)
        if got is None:
            got = _pair_class(doc, sf_by[cat.src[f1]], f1, f2, tgt_rel.fiber, tgt_rel.relation)
            pair_cache[key] = got
        return got

    arrows: list[str] = []
    src: dict[str, str] = {}
    tgt: dict[str, str] = {}
    rep_of: dict[str, str] = {}
    members_of: dict[str, tuple[str, ...]] = {}
    arrow_class: dict[tuple[str, str, str], str] = {}
    for o1 in objs:
        r1 = rel_of[o1]
        lat1 = doc.fib(r1.fiber.canonical.apex)
        for o2 in objs:
            r2 = rel_of[o2]
            ident1 = cat.ident(r1.carrier)
            quals = [f for f in cat.hom(r1.carrier, r2.carrier) if lat1.le(r1.relation, pair_cls(f, f, r2))]
            quals.sort(key=lambda f: (0 if f == ident1 else 1, f))
            for f in quals:
                rf = doc.rx(f).table
                des1 = set(des_of[o1])
                for beta in des_of[o2]:
                    if rf[beta] not in des1:
                        raise InputError(
                            f"reindexing along {f} does not respect descent data between {o1} and {o2}"
                        )
            mat = {
                (f, g): lat1.le(r1.relation, pair_cls(f, g, r2))
                for f in quals
                for g in quals
            }
            for f in quals:
                for g in quals:
                    if mat[(f, g)] != mat[(g, f)]:
                        raise InputError(
                            f"arrow identification between {o1} and {o2} is not symmetric at ({f}, {g})"
                        )
                    for h in quals:
                        if mat[(f, g)] and mat[(g, h)] and not mat[(f, h)]:
                            raise InputError(
                                f"arrow identification between {o1} and {o2} is not transitive at ({f}, {g}, {h})"
                            )
            done: set[str] = set()
            for f in quals:
                if f in done:
                    continue
                blk = [g for g in quals if mat[(f, g)]]
                done.update(blk)
                rf = doc.rx(f).table
                for g in blk[1:]:
                    rg = doc.rx(g).table
                    for beta in des_of[o2]:
                        if rf[beta] != rg[beta]:
                            raise InputError(f"identified arrows {f} and {g} reindex {beta} differently")
                name = f"{f}|{o1}|{o2}"
                arrows.append(name)
                src[name] = o1
                tgt[name] = o2
                rep_of[name] = f
                members_of[name] = tuple(blk)
                for g in blk:
                    arrow_class[(o1, o2, g)] = name

    identities = {o: arrow_class[(o, o, cat.ident(rel_of[o].carrier))] for o in objs}
    compose: dict[tuple[str, str], str] = {}
    by_src: dict[str, list[str]] = {o: [] for o in objs}
    for a in arrows:
        by_src[src[a]].append(a)
    for a in arrows:
        for b in by_src[tgt[a]]:
            o1, o3 = src[a], tgt[b]
            got = None
            for f in members_of[a]:
                for g in members_of[b]:
                    cls_name = arrow_class.get((o1, o3, cat.comp(g, f)))
                    if cls_name is None:
                        raise InputError(f"composite of {b} after {a} leaves the identified arrow classes")
                    if got is None:
                        got = cls_name
                    elif got != cls_name:
                        raise InputError(f"composition not class-independent between {b} and {a}")
            compose[(b, a)] = got
    base = FinCategory(tuple(objs), tuple(arrows), src, tgt, identities, compose)

    reindex: dict[str, MonotoneMap] = {}
    for a in arrows:
        rt = doc.rx(rep_of[a]).table
        reindex[a] = MonotoneMap(fibers[tgt[a]], fibers[src[a]], {b: rt[b] for b in des_of[tgt[a]]})
    qdoc = Doctrine(base, fibers, reindex)

    eq_table: dict[Cone, str] = {}
    for o in base.objects:
        rel = rel_of[o]
        for cone, _cls in enumerate_weak_products(base, (o, o)):
            a1, a2 = cone.legs
            w = rel_of[cone.apex].carrier
            vals = {
                _value_along(doc, w, (m1, m2), rel.fiber, rel.relation)
                for m1 in members_of[a1]
                for m2 in members_of[a2]
            }
            if len(vals) > 1:
                raise InputError(f"equality over {cone.label()} depends on representatives: {sorted(vals)}")
            value = vals.pop()
            if value not in fibers[cone.apex].elements:
                raise InputError(f"equality over {cone.label()} is not descent data on the apex")
            eq_table[cone] = value
    qeq = EqualityAssignment(eq_table)

    rcat = full_subcategory(cat, carriers)
    rdoc = Doctrine(rcat, {x: doc.fiber[x] for x in carriers}, {a: doc.reindex[a] for a in rcat.arrows})
    rtable: dict[Cone, str] = {}
    for x in carriers:
        d_cls = _delta_class(eq, sf_by[x])
        for cone, _cls in enumerate_weak_products(rcat, (x, x)):
            got = eq.table.get(cone)
            if got is None:
                got = _value_along(doc, cone.apex, cone.legs, sf_by[x], d_cls)
            rtable[cone] = got
    req = EqualityAssignment(rtable)

    j_ob = {x: projective[x] for x in rcat.objects}
    j_ar: dict[str, str] = {}
    for f in rcat.arrows:
        name = arrow_class.get((projective[cat.src[f]], projective[cat.tgt[f]], f))
        if name is None:
            raise InputError(f"{f} does not respect equality between {cat.src[f]} and {cat.tgt[f]}")
        j_ar[f] = name
    fiber_maps: dict[str, MonotoneMap] = {}
    for x in rcat.objects:
        lat = rdoc.fib(x)
        tgt_lat = fibers[projective[x]]
        if set(tgt_lat.elements) != set(lat.elements):
            raise InputError(f"descent data of the equality over {x} is not the whole fiber")
        fiber_maps[x] = MonotoneMap(lat, tgt_lat, {e: e for e in lat.elements})
    canonical = DoctrineMorphism(FunctorData(rcat, base, j_ob, j_ar), fiber_maps)
    flags = morphism_classify(rdoc, req, qdoc, qeq, canonical)

    return QuotientCompletion(
        source=doc,
        source_eq=eq,
        restricted=rdoc,
        restricted_eq=req,
        base=base,
        doc=qdoc,
        eqn=qeq,
        relations={x: relations[x] for x in carriers},
        object_of=object_of,
        rel_of=rel_of,
        projective=projective,
        rep_of=rep_of,
        members_of=members_of,
        arrow_class=arrow_class,
        canonical=canonical,
        flags=flags,
    )


def completion_skeleton(qc: QuotientCompletion) -> FinCategory:
    """One object per isomorphism class of the completion's base."""
    keep = [cls[0] for cls in iso_classes(qc.base)]
    return full_subcategory(qc.base, keep)


def _cbar_quotient(qc: QuotientCompletion, arrow: str, mu: PEquivRel) -> tuple[bool, str]:
    """Certify a completion arrow as a quotient of a pair-presented relation.

    Kernels of completion arrows are always expressible: the kernel of a
    class with representative g into (Y, sigma) is the pullback of sigma
    along (g, g), so no competitor is skipped.
    """
    base = qc.base
    doc = qc.source
    o1 = base.src[arrow]
    r1 = qc.rel_of[o1]
    lat_w = doc.fib(r1.fiber.canonical.apex)
    if mu.carrier != r1.carrier:
        raise InputError(f"{mu.label()} does not live on the source of {arrow}")
    if mu.relation not in r1.fiber.classes.elements:
        raise InputError(f"{mu.relation} is not a relation class over {r1.carrier}")

    def kernel_cls(a: str) -> str:
        t = qc.rel_of[base.tgt[a]]
        return _pair_class(doc, r1.fiber, qc.rep_of[a], qc.rep_of[a], t.fiber, t.relation)

    if not lat_w.le(mu.relation, kernel_cls(arrow)):
        return False, f"{mu.label()} is not below the kernel of {arrow}"
    count = 0
    for g in base.arrows:
        if base.src[g] != o1:
            continue
        if not lat_w.le(mu.relation, kernel_cls(g)):
            continue
        hs = [h for h in base.hom(base.tgt[arrow], base.tgt[g]) if base.comp(h, arrow) == g]
        if len(hs) != 1:
            return False, f"competitor {g} admits {len(hs)} factorization(s)"
        count += 1
    return True, f"factored {count} competitor(s)"


def check_QD(qc: QuotientCompletion) -> Report:
    """Verify the completion is elementary with well-behaved quotients.

    Chosen products are the first internal cones of the completion's own
    chart; the strict elementary checker runs on them, objects without a
    doubled cone are reported as too shallow.  Every fiber element must
    have a full strict comprehension, diagonals must be comprehensive,
    and every pair-presented relation must have a universal, effective,
    stable quotient of effective descent.
    """
    base = qc.base
    doc = qc.source
    fs: list[Finding] = []

    cones: dict[tuple[str, str], Cone] = {}
    for o1 in base.objects:
        for o2 in base.objects:
            found = enumerate_weak_products(base, (o1, o2))
            if found:
                cones[(o1, o2)] = found[0][0]
    delta = {o: qc.eqn.value(cones[(o, o)]) for o in base.objects if (o, o) in cones}
    fs.extend(check_strict_elementary(qc.doc, StrictDelta(cones, delta)).findings)
    for o in base.objects:
        if (o, o) not in cones:
            fs.append(Finding(SHALLOW, "chosen-product", f"({o}, {o})", "no internal product cone in the completion"))

    for o in base.objects:
        for alpha in qc.doc.fib(o).elements:
            win = ""
            for c in base.arrows:
                if base.tgt[c] != o:
                    continue
                got = comprehension_classify(qc.doc, alpha, c)
                if got["is_comprehension"] and got["strict"] and got["full"]:
                    win = c
                    break
            if win:
                fs.append(Finding(PASS, "strict-comprehensions", f"{o} : {alpha}", f"comprehension {win}"))
            else:
                fs.append(
                    Finding(FAIL, "strict-comprehensions", f"{o} : {alpha}", "no full strict comprehension in the completion")
                )

    ok, wit = has_comprehensive_diagonals_biased(qc.doc, qc.eqn)
    fs.append(Finding(PASS if ok else FAIL, "comprehensive-diagonals", "completion", wit))

    for x in qc.relations:
        rels = qc.relations[x]
        if not rels:
            continue
        sf = rels[0].fiber
        lat_w = doc.fib(sf.canonical.apex)
        ident = doc.base.ident(x)
        for rho in rels:
            for mu in rels:
                if not lat_w.le(rho.relation, mu.relation):
                    continue
                o_rho = qc.object_of[(x, rho.relation)]
                o_mu = qc.object_of[(x, mu.relation)]
                q = qc.arrow_class[(o_rho, o_mu, ident)]
                ok, wit = _cbar_quotient(qc, q, mu)
                fs.append(Finding(PASS if ok else FAIL, "quotient-universal", q, wit))

                eff = _pair_class(doc, sf, ident, ident, sf, mu.relation)
                fs.append(Finding(PASS if eff == mu.relation else FAIL, "quotient-effective", q, f"kernel class {eff}"))

                src_lat = qc.doc.fib(o_mu)
                tgt_lat = qc.doc.fib(o_rho)
                table = qc.doc.rx(q).table
                desc = set(descent_elements(doc, sf.canonical, mu.relation))
                probs: list[str] = []
                image = [table[b] for b in src_lat.elements]
                if len(set(image)) != len(image):
                    probs.append("not injective")
                if set(image) != desc:
                    probs.append("image differs from the descent data")
                if not probs:
                    for b1 in src_lat.elements:
                        for b2 in src_lat.elements:
                            if src_lat.le(b1, b2) != tgt_lat.le(table[b1], table[b2]):
                                probs.append(f"order mismatch at ({b1}, {b2})")
                                break
                        if probs:
                            break
                fs.append(
                    Finding(
                        PASS if not probs else FAIL,
                        "quotient-descent",
                        q,
                        "; ".join(probs) or f"{len(desc)} descent element(s)",
                    )
                )

                bad = ""
                checked = 0
                gaps: list[str] = []
                for big in base.arrows:
                    if base.tgt[big] != o_mu:
                        continue
                    squares = enumerate_weak_pullbacks(base, q, big)
                    if not squares:
                        gaps.append(big)
                        continue
                    sq = squares[0][0]
                    pulled = sq.legs[1]
                    prel = qc.rel_of[sq.apex]
                    tau = qc.rel_of[base.src[big]]
                    nu = PEquivRel(
                        prel.carrier,
                        prel.fiber,
                        _pair_class(doc, prel.fiber, qc.rep_of[pulled], qc.rep_of[pulled], tau.fiber, tau.relation),
                    )
                    ok2, why2 = _cbar_quotient(qc, pulled, nu)
                    if not ok2:
                        bad = f"pullback along {big}: {why2}"
                        break
                    checked += 1
                note = f"checked {checked} square(s)"
                if gaps:
                    note += "; no internal square along " + ", ".join(gaps)
                fs.append(Finding(FAIL if bad else PASS, "quotient-stable", q, bad or note))
    return report("quotient-completion", fs)


def _first_strict(cat: FinCategory, feet) -> Optional[Cone]:
    for cone, cls in enumerate_weak_products(cat, tuple(feet)):
        if cls == STRICT:
            return cone
    return None


def _first_strict_comprehension(doc: Doctrine, obj: str, alpha: str) -> Optional[str]:
    for c in doc.base.arrows:
        if doc.base.tgt[c] != obj:
            continue
        got = comprehension_classify(doc, alpha, c)
        if got["is_comprehension"] and got["strict"]:
            return c
    return None


def is_left_covering(src_doc, src_eq, tgt_doc, tgt_eq, m: DoctrineMorphism) -> Report:
    """Whether the morphism covers products, equality, and comprehensions by quotients.

    The source must have full comprehensions and comprehensive diagonals;
    failing that the report carries premise-failure findings and stops.
    Pairings and comprehension comparisons land in strict target cones,
    and each induced arrow must be a quotient of its kernel.
    """
    cat = src_doc.base
    tcat = tgt_doc.base
    fd = m.functor
    if fd.source is not cat or fd.target is not tcat:
        raise InputError("morphism functor does not connect the two doctrine bases")
    bad = validate_functor(fd)
    if bad:
        raise InputError("; ".join(bad))
    for x in cat.objects:
        if x not in m.fiber_maps:
            raise InputError(f"no fiber map for object {x}")

    fs: list[Finding] = []
    ok_c, wit_c = _has_full_comprehensions(src_doc)
    if not ok_c:
        fs.append(Finding(PREMISE_FAILURE, "premises", "source doctrine", f"no full comprehension at {wit_c}"))
    ok_d, wit_d = has_comprehensive_diagonals_biased(src_doc, src_eq)
    if not ok_d:
        fs.append(Finding(PREMISE_FAILURE, "premises", "source doctrine", f"diagonals not comprehensive: {wit_d}"))
    if fs:
        return report("left-covering", fs)

    sf_of, kernel_of = _kernel_tools(tgt_doc, tgt_eq)

    def quotient_verdict(q: str) -> tuple[str, str]:
        kq = kernel_of(q)
        if kq is None:
            return SHALLOW, f"kernel of {q} is off the chart"
        rel = PEquivRel(tcat.src[q], sf_of(tcat.src[q]), kq)
        cert, why = _quotient_certificate(tgt_doc, tgt_eq, q, rel, kernel_of)
        if cert is None:
            return FAIL, f"{q} is not a quotient of its kernel: {why}"
        return PASS, f"{q} quotients its kernel over {len(cert.factorizations)} competitor(s)"

    for x in cat.objects:
        for y in cat.objects:
            for cone, _cls in enumerate_weak_products(cat, (x, y)):
                subject = f"{cone.label()} over ({x}, {y})"
                strictc = _first_strict(tcat, (fd.ob[x], fd.ob[y]))
                if strictc is None:
                    fs.append(Finding(SHALLOW, "product-cover", subject, "no strict product cone in the target chart"))
                    continue
                want = (fd.ar[cone.legs[0]], fd.ar[cone.legs[1]])
                qs = _mediators(tcat, fd.ob[cone.apex], strictc, want)
                if len(qs) != 1:
                    raise InputError(f"strict cone {strictc.label()} mediates {len(qs)} ways for {subject}")
                verdict, detail = quotient_verdict(qs[0])
                fs.append(Finding(verdict, "product-cover", subject, detail))

    for x in cat.objects:
        okm = is_meet_preserving(m.fiber_maps[x])
        fs.append(Finding(PASS if okm else FAIL, "meet-preservation", x, "" if okm else "meets or top broken"))
    for x in cat.objects:
        for p in _doubled_cones(cat, x):
            subject = p.label()
            strictc = _first_strict(tcat, (fd.ob[x], fd.ob[x]))
            if strictc is None:
                fs.append(Finding(SHALLOW, "equality-preservation", subject, "no strict doubled cone in the target chart"))
                continue
            want = (fd.ar[p.legs[0]], fd.ar[p.legs[1]])
            qs = _mediators(tcat, fd.ob[p.apex], strictc, want)
            if len(qs) != 1:
                raise InputError(f"strict cone {strictc.label()} mediates {len(qs)} ways for {subject}")
            sent = m.fiber_maps[p.apex].table[src_eq.value(p)]
            pulled = tgt_doc.apply(qs[0], tgt_eq.value(strictc))
            if sent == pulled:
                fs.append(Finding(PASS, "equality-preservation", subject, ""))
            else:
                fs.append(Finding(FAIL, "equality-preservation", subject, f"sends equality to {sent}, expected {pulled}"))

    tables = _comprehension_tables(src_doc)
    for x in cat.objects:
        for alpha in src_doc.fib(x).elements:
            for c in _comprehensions_of(src_doc, x, alpha, tables):
                subject = f"{x} : {alpha} via {c}"
                sent = m.fiber_maps[x].table[alpha]
                target_c = _first_strict_comprehension(tgt_doc, fd.ob[x], sent)
                if target_c is None:
                    fs.append(Finding(SHALLOW, "comprehension-cover", subject, f"no strict comprehension of {sent} in the target"))
                    continue
                image = fd.ar[c]
                us = [
                    u
                    for u in tcat.hom(fd.ob[cat.src[c]], tcat.src[target_c])
                    if tcat.comp(target_c, u) == image
                ]
                if not us:
                    fs.append(Finding(FAIL, "comprehension-cover", subject, f"{image} does not factor through {target_c}"))
                    continue
                verdict, detail = quotient_verdict(us[0])
                fs.append(Finding(verdict, "comprehension-cover", subject, detail))
    return report("left-covering", fs)


def _transport_relation(qc: QuotientCompletion, m: DoctrineMorphism, target: QuotientCompletion, x: str, rel: PEquivRel):
    """Carry a source relation across the morphism into the target's base.

    Preferred route: reindex the representative through an internal pair
    cone of the restricted source and classify the image in the target.
    When the restricted chart has no such cone the relation is carried
    verbatim, which needs the image carrier and fibers to be the source's
    own; otherwise the chart is too shallow to transport.
    """
    fd = m.functor
    rcat = qc.restricted.base
    base_obj = fd.ob[x]
    x_t = target.rel_of[base_obj].carrier
    trels = target.relations.get(x_t)
    if not trels:
        raise ChartTooShallow(f"({x}, {rel.relation})", f"relations over the image carrier {x_t}")
    sft = trels[0].fiber
    rset = set(rcat.arrows)
    for cone in rel.fiber.cones:
        if cone.apex not in rcat.objects or cone.legs[0] not in rset or cone.legs[1] not in rset:
            continue
        rep = rel.fiber.representatives[cone][rel.relation]
        sent = m.fiber_maps[cone.apex].table[rep]
        v = target.rel_of[fd.ob[cone.apex]].carrier
        r1 = target.rep_of[fd.ar[cone.legs[0]]]
        r2 = target.rep_of[fd.ar[cone.legs[1]]]
        try:
            return x_t, sft, sft.class_of(Cone(v, (x_t, x_t), (r1, r2)), sent)
        except InputError:
            continue
    if (
        x_t == x
        and rel.relation in sft.classes.elements
        and all(m.fiber_maps[x].table.get(e) == e for e in qc.restricted.fib(x).elements)
    ):
        return x_t, sft, rel.relation
    raise ChartTooShallow(f"({x}, {rel.relation})", "a transport route for the relation onto the target")


def lift_left_covering(
    qc: QuotientCompletion, m: DoctrineMorphism, target: QuotientCompletion
) -> tuple[DoctrineMorphism, Report]:
    """Extend a left covering morphism from the restricted source to the completion.

    Each non-constant relation is transported into the target and its
    object is sent to the codomain of the canonical target quotient;
    arrows and fiber elements follow by the uniqueness the quotients
    provide.  The report classifies the lift and verifies that composing
    it with the canonical morphism is naturally isomorphic to the input,
    with componentwise witnesses.
    """
    rcat = qc.restricted.base
    fd = m.functor
    if fd.source is not rcat:
        raise InputError("the morphism must start at the completion's restricted source")
    if fd.target is not target.base:
        raise InputError("the morphism must land in the target completion")
    lc = is_left_covering(qc.restricted, qc.restricted_eq, target.doc, target.eqn, m)
    blocking = lc.by_verdict(FAIL) + lc.by_verdict(PREMISE_FAILURE)
    if blocking:
        raise InputError(f"not a left covering: {blocking[0].line()}")

    fs: list[Finding] = []
    fob: dict[str, str] = {}
    q_of: dict[str, str] = {}
    for x in qc.relations:
        for rel in qc.relations[x]:
            o = qc.object_of[(x, rel.relation)]
            base_obj = fd.ob[x]
            if o == qc.projective[x]:
                fob[o] = base_obj
                q_of[o] = target.base.ident(base_obj)
                continue
            x_t, sft, mu = _transport_relation(qc, m, target, x, rel)
            if target.rel_of[base_obj].carrier != x_t:
                raise InputError(f"relation transport for {o} lands off the image carrier")
            mu_obj = target.object_of.get((x_t, mu))
            if mu_obj is None:
                raise ChartTooShallow(o, "the transported relation as an internal equivalence relation")
            q_name = target.arrow_class.get((base_obj, mu_obj, target.source.base.ident(x_t)))
            if q_name is None:
                raise InputError(f"transported relation of {o} is not above the image relation")
            ok, wit = _cbar_quotient(target, q_name, PEquivRel(x_t, sft, mu))
            fs.append(Finding(PASS if ok else FAIL, "lift-quotient", o, wit))
            fob[o] = mu_obj
            q_of[o] = q_name

    far: dict[str, str] = {}
    for a in qc.base.arrows:
        o1, o2 = qc.base.src[a], qc.base.tgt[a]
        rhs = target.base.comp(q_of[o2], fd.ar[qc.rep_of[a]])
        cands = [h for h in target.base.hom(fob[o1], fob[o2]) if target.base.comp(h, q_of[o1]) == rhs]
        if len(cands) != 1:
            raise InputError(f"transport of {a} across the quotients is not unique ({len(cands)} candidates)")
        far[a] = cands[0]
    fibs: dict[str, MonotoneMap] = {}
    for o in qc.base.objects:
        x = qc.rel_of[o].carrier
        lat_src = qc.doc.fib(o)
        lat_tgt = target.doc.fib(fob[o])
        table: dict[str, str] = {}
        for alpha in lat_src.elements:
            sent = m.fiber_maps[x].table[alpha]
            cands = [b for b in lat_tgt.elements if target.doc.apply(q_of[o], b) == sent]
            if len(cands) != 1:
                raise InputError(f"descent transport of {alpha} at {o} is not unique ({len(cands)} candidates)")
            table[alpha] = cands[0]
        fibs[o] = MonotoneMap(lat_src, lat_tgt, table)
    lifted = DoctrineMorphism(FunctorData(qc.base, target.base, fob, far), fibs)

    flags = morphism_classify(qc.doc, qc.eqn, target.doc, target.eqn, lifted)
    for law in ("PD", "ED", "EqD", "QD"):
        ok, wit = flags[law]
        fs.append(Finding(PASS if ok else FAIL, "lift-classified", law, wit))

    j = qc.canonical
    theta: dict[str, str] = {}
    for x in rcat.objects:
        c_ob = fob[j.functor.ob[x]]
        m_ob = fd.ob[x]
        pairs = iso_pairs(target.base, c_ob, m_ob)
        if not pairs:
            fs.append(Finding(FAIL, "lift-agreement", x, f"no internal isomorphism between {c_ob} and {m_ob}"))
            continue
        theta[x] = pairs[0][0]
        fs.append(Finding(PASS, "lift-agreement", x, f"isomorphism {pairs[0][0]}"))
    nat_bad = ""
    checked = 0
    for a in rcat.arrows:
        x1, x2 = rcat.src[a], rcat.tgt[a]
        if x1 not in theta or x2 not in theta:
            continue
        lhs = target.base.comp(theta[x2], far[j.functor.ar[a]])
        rhs = target.base.comp(fd.ar[a], theta[x1])
        if lhs != rhs:
            nat_bad = f"square at {a}: {lhs} vs {rhs}"
            break
        checked += 1
    fs.append(
        Finding(FAIL if nat_bad else PASS, "lift-naturality", "composite against the input", nat_bad or f"checked {checked} square(s)")
    )
    fib_bad = ""
    checked = 0
    for x in rcat.objects:
        if x not in theta:
            continue
        rt = target.doc.rx(theta[x]).table
        for alpha in qc.restricted.fib(x).elements:
            left = fibs[j.functor.ob[x]].table[j.fiber_maps[x].table[alpha]]
            right = rt[m.fiber_maps[x].table[alpha]]
            if left != right:
                fib_bad = f"{x} : {alpha} gives {left} and {right}"
                break
            checked += 1
        if fib_bad:
            break
    fs.append(
        Finding(
            FAIL if fib_bad else PASS,
            "lift-fiber-agreement",
            "composite against the input",
            fib_bad or f"checked {checked} element(s)",
        )
    )
    return lifted, report("left-covering-lift", fs)


@dataclass(eq=False)
class SliceRelation:
    """A relation presented as a subobject of a doubled product, over an anchor.

    anchor is the arrow whose kernel hosts the data, comprehension the
    arrow carving out the kernel, legs its two projections, element the
    restricted relation.  note records identities the chart could not
    settle.
    """

    anchor: str
    comprehension: str
    legs: tuple[str, str]
    element: str
    note: str = ""


def rel_to_slice(doc: Doctrine, eq: EqualityAssignment, x: str, sigma: PEquivRel) -> SliceRelation:
    """Restrict a relation below the kernel of an arrow to the kernel's comprehension.

    Verifies reflexivity through every internal section, symmetry through
    every internal swap, and that descent data along the comprehension
    legs matches the relation's own descent data.
    """
    cat = doc.base
    if x not in cat.src:
        raise InputError(f"unknown arrow {x}")
    if sigma.carrier != cat.src[x]:
        raise InputError(f"{sigma.label()} does not live on the source of {x}")
    rho = kernel(doc, eq, x)
    cone = rho.fiber.canonical
    lat_w = doc.fib(cone.apex)
    if sigma.relation not in rho.fiber.classes.elements:
        raise InputError(f"{sigma.relation} is not a relation class over {sigma.carrier}")
    if not lat_w.le(sigma.relation, rho.relation):
        raise InputError(f"{sigma.label()} is not below the kernel of {x}")

    c = ""
    for cand in cat.arrows:
        if cat.tgt[cand] != cone.apex:
            continue
        if comprehension_classify(doc, rho.relation, cand)["is_comprehension"]:
            c = cand
            break
    if not c:
        raise ChartTooShallow(f"kernel of {x}", "an internal weak comprehension")
    c_obj = cat.src[c]
    legs = (cat.comp(cone.legs[0], c), cat.comp(cone.legs[1], c))
    element = doc.apply(c, sigma.relation)
    lat_c = doc.fib(c_obj)
    lat_x = doc.fib(sigma.carrier)

    ident = cat.ident(sigma.carrier)
    ts = [t for t in cat.hom(sigma.carrier, c_obj) if cat.comp(legs[0], t) == ident and cat.comp(legs[1], t) == ident]
    if not ts:
        raise InputError(f"the kernel comprehension admits no reflexivity section over {sigma.carrier}")
    for t in ts:
        if not lat_x.le(lat_x.top, doc.apply(t, element)):
            raise InputError(f"restricted relation is not reflexive along {t}")
    notes: list[str] = []
    ss = [s for s in cat.hom(c_obj, c_obj) if cat.comp(legs[0], s) == legs[1] and cat.comp(legs[1], s) == legs[0]]
    if not ss:
        notes.append("symmetry unchecked: no internal swap over the comprehension")
    for s in ss:
        if not lat_c.le(doc.apply(s, element), element):
            raise InputError(f"restricted relation is not symmetric along {s}")

    des = set(descent_elements(doc, cone, sigma.relation))
    slice_des = {
        alpha
        for alpha in lat_x.elements
        if lat_c.le(lat_c.meet_all((doc.apply(legs[0], alpha), element)), doc.apply(legs[1], alpha))
    }
    if des != slice_des:
        raise InputError(f"descent data along the comprehension disagrees at {sorted(des ^ slice_des)}")

    la = left_adjoint(doc.rx(c))
    if la is None:
        notes.append("no left adjoint along the comprehension")
    else:
        rc = doc.rx(c).table
        off = [b for b in lat_w.elements if la.table[rc[b]] != lat_w.meet_all((b, rho.relation))]
        if off:
            notes.append(f"existential identity deviates at {len(off)} element(s), first at {off[0]}")
    return SliceRelation(anchor=x, comprehension=c, legs=legs, element=element, note="; ".join(notes))


def rel_from_slice(doc: Doctrine, eq: EqualityAssignment, r: SliceRelation) -> PEquivRel:
    """Recover the relation a slice presentation restricts.

    The comprehension's reindexing is inverted on classes by its left
    adjoint; the result must be an internal equivalence relation with the
    same descent data, anything else is an input error.
    """
    cat = doc.base
    x = cat.src[r.anchor]
    sf = strict_fiber(doc, eq, (x, x))
    c_obj = cat.src[r.comprehension]
    lat_c = doc.fib(c_obj)
    if r.element not in lat_c.elements:
        raise InputError(f"{r.element} is not in the fiber over {c_obj}")
    mm = MonotoneMap(
        sf.classes,
        lat_c,
        {cls: doc.apply(r.comprehension, cls) for cls in sf.classes.elements},
    )
    la = left_adjoint(mm)
    if la is None:
        raise InputError("no existential transport along the comprehension")
    cls = la.table[r.element]
    ok, wit = _equiv_verdict(doc, x, sf, cls)
    if not ok:
        raise InputError(f"slice data does not induce an equivalence relation: {wit}")
    lat_x = doc.fib(x)
    des = set(descent_elements(doc, sf.canonical, cls))
    slice_des = {
        alpha
        for alpha in lat_x.elements
        if lat_c.le(lat_c.meet_all((doc.apply(r.legs[0], alpha), r.element)), doc.apply(r.legs[1], alpha))
    }
    if des != slice_des:
        raise InputError(f"descent data along the comprehension disagrees at {sorted(des ^ slice_des)}")
    return PEquivRel(x, sf, cls)


def slice_quotient_commute(doc: Doctrine, eq: EqualityAssignment, a_obj: str) -> Report:
    """Compare slicing before and after completing, over one anchor object.

    Builds the completion of the sliced doctrine and the slice of the
    completion over the anchor's constant relation, constructs comparison
    functors both ways, and verifies they are mutually inverse up to
    natural isomorphism, fiberwise included.  A doctrine that fails the
    existential or comprehension premises gets premise-failure findings
    instead of a construction attempt.
    """
    cat = doc.base
    if a_obj not in cat.objects:
        raise InputError(f"unknown object {a_obj}")
    fs: list[Finding] = []
    ex = existential_report(doc, eq)
    if not ex.passed:
        bad = ex.by_verdict(FAIL)[0]
        fs.append(Finding(PREMISE_FAILURE, "premises", "doctrine", f"not existential: {bad.law} at {bad.subject}"))
    ok_c, wit_c = _has_full_comprehensions(doc)
    if not ok_c:
        fs.append(Finding(PREMISE_FAILURE, "premises", "doctrine", f"no full comprehension at {wit_c}"))
    ok_d, wit_d = has_comprehensive_diagonals_biased(doc, eq)
    if not ok_d:
        fs.append(Finding(PREMISE_FAILURE, "premises", "doctrine", f"diagonals not comprehensive: {wit_d}"))
    if fs:
        return report("slice-quotient-commute", fs)

    qc = quotient_completion(doc, eq)
    if not qc.relations.get(a_obj):
        raise ChartTooShallow(a_obj, "relations over the anchor object")

    scat, forget = slice_category(cat, a_obj)
    sdoc = Doctrine(
        scat,
        {o: doc.fiber[cat.src[o]] for o in scat.objects},
        {a: doc.reindex[forget.ar[a]] for a in scat.arrows},
    )
    se_table: dict[Cone, str] = {}
    for o in scat.objects:
        x = cat.src[o]
        pairs = enumerate_weak_products(scat, (o, o))
        if not pairs:
            continue
        if not qc.relations.get(x):
            raise ChartTooShallow(o, "equality transport onto the slice")
        sfx = qc.relations[x][0].fiber
        d_cls = _delta_class(eq, sfx)
        for cone, _c in pairs:
            se_table[cone] = _value_along(
                doc, cat.src[cone.apex], (forget.ar[cone.legs[0]], forget.ar[cone.legs[1]]), sfx, d_cls
            )
    seq = EqualityAssignment(se_table)
    qsl = quotient_completion(sdoc, seq)

    pobj = qc.projective[a_obj]
    rcat2, forget2 = slice_category(qc.base, pobj)

    m_ob: dict[str, str] = {}
    mu_of: dict[str, str] = {}
    for sobj in qsl.relations:
        x = cat.src[sobj]
        sfx = qc.relations[x][0].fiber
        ssf = qsl.relations[sobj][0].fiber
        scone = ssf.canonical
        under = (forget.ar[scone.legs[0]], forget.ar[scone.legs[1]])
        v = cat.src[scone.apex]
        mm = MonotoneMap(
            sfx.classes,
            doc.fib(v),
            {cls: _value_along(doc, v, under, sfx, cls) for cls in sfx.classes.elements},
        )
        la = left_adjoint(mm)
        if la is None:
            raise InputError(f"no existential transport for relations on {sobj}")
        for rel in qsl.relations[sobj]:
            o_hat = qsl.object_of[(sobj, rel.relation)]
            mu = la.table[rel.relation]
            mu_o = qc.object_of.get((x, mu))
            if mu_o is None:
                raise InputError(f"transported relation of {o_hat} is not an internal equivalence relation")
            name = qc.arrow_class.get((mu_o, pobj, sobj))
            if name is None:
                raise InputError(f"{sobj} does not descend to the quotient of {mu_o}")
            m_ob[o_hat] = name
            mu_of[o_hat] = mu

    m_ar: dict[str, str] = {}
    r2arrows = set(rcat2.arrows)
    for a in qsl.base.arrows:
        o1, o2 = qsl.base.src[a], qsl.base.tgt[a]
        s1 = qsl.rel_of[o1].carrier
        s2 = qsl.rel_of[o2].carrier
        k = forget.ar[qsl.rep_of[a]]
        kcls = qc.arrow_class.get(
            (qc.object_of[(cat.src[s1], mu_of[o1])], qc.object_of[(cat.src[s2], mu_of[o2])], k)
        )
        if kcls is None:
            raise InputError(f"image of {a} does not respect the transported relations")
        name = f"{kcls}|{m_ob[o1]}|{m_ob[o2]}"
        if name not in r2arrows:
            raise InputError(f"image of {a} does not commute over the anchor")
        m_ar[a] = name

    n_ob: dict[str, str] = {}
    for robj in rcat2.objects:
        rel_src = qc.rel_of[qc.base.src[robj]]
        s = qc.rep_of[robj]
        srels = qsl.relations.get(s)
        if not srels:
            raise ChartTooShallow(robj, f"slice relations over {s}")
        ssf = srels[0].fiber
        scone = ssf.canonical
        val = _value_along(
            doc,
            cat.src[scone.apex],
            (forget.ar[scone.legs[0]], forget.ar[scone.legs[1]]),
            rel_src.fiber,
            rel_src.relation,
        )
        got = qsl.object_of.get((s, ssf.class_of(scone, val)))
        if got is None:
            raise InputError(f"transported relation of {robj} is not an internal slice equivalence relation")
        n_ob[robj] = got

    n_ar: dict[str, str] = {}
    for ra in rcat2.arrows:
        r1, r2 = rcat2.src[ra], rcat2.tgt[ra]
        src_rel = qc.rel_of[qc.base.src[r1]]
        tgt_rel = qc.rel_of[qc.base.src[r2]]
        k_rep = qc.rep_of[forget2.ar[ra]]
        lat_w = doc.fib(src_rel.fiber.canonical.apex)
        chosen = ""
        for cand in qsl.base.arrows:
            if qsl.base.src[cand] != n_ob[r1] or qsl.base.tgt[cand] != n_ob[r2]:
                continue
            k_p = forget.ar[qsl.rep_of[cand]]
            mixed = _pair_class(doc, src_rel.fiber, k_rep, k_p, tgt_rel.fiber, tgt_rel.relation)
            if lat_w.le(src_rel.relation, mixed):
                chosen = cand
                break
        if not chosen:
            raise InputError(f"no slice arrow tracks {ra}")
        n_ar[ra] = chosen

    for o_hat in qsl.base.objects:
        left = set(qsl.doc.fib(o_hat).elements)
        right = set(qc.doc.fib(qc.base.src[m_ob[o_hat]]).elements)
        if left == right:
            fs.append(Finding(PASS, "fiber-agreement", o_hat, f"{len(left)} element(s)"))
        else:
            fs.append(Finding(FAIL, "fiber-agreement", o_hat, f"descent data differ at {sorted(left ^ right)}"))

    for law, fdta in (
        ("functor-left", FunctorData(qsl.base, rcat2, m_ob, m_ar)),
        ("functor-right", FunctorData(rcat2, qsl.base, n_ob, n_ar)),
    ):
        probs = validate_functor(fdta)
        fs.append(Finding(PASS if not probs else FAIL, law, "comparison", "; ".join(probs)))

    theta_l: dict[str, str] = {}
    for o_hat in qsl.base.objects:
        back = n_ob[m_ob[o_hat]]
        pairs = iso_pairs(qsl.base, back, o_hat)
        if not pairs:
            fs.append(Finding(FAIL, "round-trip-left", o_hat, f"no internal isomorphism between {back} and {o_hat}"))
            continue
        theta_l[o_hat] = pairs[0][0]
        fs.append(Finding(PASS, "round-trip-left", o_hat, f"isomorphism {pairs[0][0]}"))
    bad = ""
    checked = 0
    for a in qsl.base.arrows:
        o1, o2 = qsl.base.src[a], qsl.base.tgt[a]
        if o1 not in theta_l or o2 not in theta_l:
            continue
        lhs = qsl.base.comp(theta_l[o2], n_ar[m_ar[a]])
        rhs = qsl.base.comp(a, theta_l[o1])
        if lhs != rhs:
            bad = f"square at {a}: {lhs} vs {rhs}"
            break
        checked += 1
    fs.append(Finding(FAIL if bad else PASS, "naturality-left", "sliced completion", bad or f"checked {checked} square(s)"))
    bad = ""
    checked = 0
    for o_hat in qsl.base.objects:
        if o_hat not in theta_l:
            continue
        rt = qsl.doc.rx(theta_l[o_hat]).table
        back_els = set(qsl.doc.fib(n_ob[m_ob[o_hat]]).elements)
        right_els = set(qc.doc.fib(qc.base.src[m_ob[o_hat]]).elements)
        for alpha in qsl.doc.fib(o_hat).elements:
            if alpha not in right_els or alpha not in back_els:
                continue
            if rt[alpha] != alpha:
                bad = f"{o_hat} : {alpha} returns as {rt[alpha]}"
                break
            checked += 1
        if bad:
            break
    fs.append(Finding(FAIL if bad else PASS, "fiber-round-trip-left", "sliced completion", bad or f"checked {checked} element(s)"))

    theta_r: dict[str, str] = {}
    for robj in rcat2.objects:
        back = m_ob[n_ob[robj]]
        pairs = iso_pairs(rcat2, back, robj)
        if not pairs:
            fs.append(Finding(FAIL, "round-trip-right", robj, f"no internal isomorphism between {back} and {robj}"))
            continue
        theta_r[robj] = pairs[0][0]
        fs.append(Finding(PASS, "round-trip-right", robj, f"isomorphism {pairs[0][0]}"))
    bad = ""
    checked = 0
    for ra in rcat2.arrows:
        r1, r2 = rcat2.src[ra], rcat2.tgt[ra]
        if r1 not in theta_r or r2 not in theta_r:
            continue
        lhs = rcat2.comp(theta_r[r2], m_ar[n_ar[ra]])
        rhs = rcat2.comp(ra, theta_r[r1])
        if lhs != rhs:
            bad = f"square at {ra}: {lhs} vs {rhs}"
            break
        checked += 1
    fs.append(Finding(FAIL if bad else PASS, "naturality-right", "sliced quotients", bad or f"checked {checked} square(s)"))
    bad = ""
    checked = 0
    for robj in rcat2.objects:
        if robj not in theta_r:
            continue
        rt = qc.doc.rx(forget2.ar[theta_r[robj]]).table
        back_els = set(qc.doc.fib(qc.base.src[m_ob[n_ob[robj]]]).elements)
        left_els = set(qsl.doc.fib(n_ob[robj]).elements)
        for alpha in qc.doc.fib(qc.base.src[robj]).elements:
            if alpha not in left_els or alpha not in back_els:
                continue
            if rt[alpha] != alpha:
                bad = f"{robj} : {alpha} returns as {rt[alpha]}"
                break
            checked += 1
        if bad:
            break
    fs.append(Finding(FAIL if bad else PASS, "fiber-round-trip-right", "sliced quotients", bad or f"checked {checked} element(s)"))
    return report("slice-quotient-commute", fs)
