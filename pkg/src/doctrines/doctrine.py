"""Doctrines on finite charts: fibered meet-semilattices with reindexing.

A Doctrine pairs a base chart with one inf-semilattice per object and one
meet-preserving monotone map per arrow, contravariantly.  Equality data
comes in two forms.  A StrictDelta fixes one strict product cone per object
pair plus an equality element on each doubled product.  An
EqualityAssignment gives an equality element on every internal weak
product of a doubled object.  The checkers decide the strict and biased
elementary axioms by exhaustive enumeration over internal witnesses and
report one verdict per (object, cone, law) instance; a quantifier with no
internal witness reports "vacuous" rather than silently passing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .fincat import (
    NOT_WEAK,
    STRICT,
    Cone,
    FinCategory,
    FunctorData,
    classify_cone,
    enumerate_weak_products,
    slice_category,
    validate_cone,
    validate_functor,
)
from .order import (
    InfSemilattice,
    MonotoneMap,
    is_meet_preserving,
    left_adjoint,
    right_adjoint,
    semilattice,
    validate_monotone,
)
from .report import (
    FAIL,
    PASS,
    PREMISE_FAILURE,
    SHALLOW,
    VACUOUS,
    ChartTooShallow,
    Finding,
    InputError,
    Report,
    report,
)


@dataclass(eq=False)
class Doctrine:
    """Contravariant assignment of fibers to objects and reindexings to arrows.

    For an arrow a: X -> Y the reindexing map runs fiber(Y) -> fiber(X).
    """

    base: FinCategory
    fiber: Mapping[str, InfSemilattice]
    reindex: Mapping[str, MonotoneMap]

    def fib(self, obj: str) -> InfSemilattice:
        try:
            return self.fiber[obj]
        except KeyError:
            raise InputError(f"no fiber for object {obj}") from None

    def rx(self, arrow: str) -> MonotoneMap:
        try:
            return self.reindex[arrow]
        except KeyError:
            raise InputError(f"no reindexing for arrow {arrow}") from None

    def apply(self, arrow: str, elem: str) -> str:
        try:
            return self.rx(arrow).table[elem]
        except KeyError:
            raise InputError(f"element {elem} not in the fiber reindexed by {arrow}") from None

    def top(self, obj: str) -> str:
        return self.fib(obj).top

    def le(self, obj: str, a: str, b: str) -> bool:
        return self.fib(obj).le(a, b)

    def meet(self, obj: str, a: str, b: str) -> str:
        return self.fib(obj).meet_of(a, b)


@dataclass(eq=False)
class EqualityAssignment:
    """Equality element per internal weak product cone over a doubled object."""

    table: Mapping[Cone, str]

    def value(self, cone: Cone) -> str:
        try:
            return self.table[cone]
        except KeyError:
            raise InputError(f"no equality element for cone {cone.label()}") from None


@dataclass(eq=False)
class StrictDelta:
    """Chosen strict product cones per object pair plus equality elements.

    delta[X] lives in the fiber over the apex of cones[(X, X)].  Both
    mappings may be partial when the chart lacks a product; checkers
    report the gap per pair instead of guessing.
    """

    cones: Mapping[tuple[str, str], Cone]
    delta: Mapping[str, str]


@dataclass(eq=False)
class ChoiceOfWeakProducts:
    """A chosen weak product cone per object pair and arrows f x g between them."""

    cones: Mapping[tuple[str, str], Cone]
    arrows: Mapping[tuple[str, str], str]


@dataclass(eq=False)
class DoctrineMorphism:
    """A base functor with one fiber map per source object.

    fiber_maps[X] runs fiber(X) of the source doctrine into
    fiber(F X) of the target doctrine.
    """

    functor: FunctorData
    fiber_maps: Mapping[str, MonotoneMap]


def validate_doctrine(doc: Doctrine) -> list[str]:
    """Diagnostics for the doctrine laws; empty iff they all hold.

    Checks coverage, typing, monotonicity, meet and top preservation,
    identity reindexings, and contravariant functoriality on every
    composable pair of base arrows.
    """
    cat = doc.base
    diags: list[str] = []
    for x in cat.objects:
        if x not in doc.fiber:
            diags.append(f"fiber-missing: {x}")
    for a in cat.arrows:
        if a not in doc.reindex:
            diags.append(f"reindex-missing: {a}")
    if diags:
        return diags

    for a in cat.arrows:
        m = doc.reindex[a]
        if m.source != doc.fiber[cat.tgt[a]] or m.target != doc.fiber[cat.src[a]]:
            diags.append(f"reindex-typing: {a} is not a map fiber({cat.tgt[a]}) -> fiber({cat.src[a]})")
            continue
        bad = validate_monotone(m)
        if bad:
            diags.extend(f"reindex({a}) {d}" for d in bad[:3])
            continue
        if not is_meet_preserving(m):
            diags.append(f"reindex-not-meet-preserving: {a}")
    if diags:
        return diags

    for x in cat.objects:
        t = doc.reindex[cat.ident(x)].table
        if any(t[e] != e for e in doc.fiber[x].elements):
            diags.append(f"reindex-identity: {cat.ident(x)} does not act as the identity")

    budget = 5
    for (g, f), c in cat.compose.items():
        rf = doc.reindex[f].table
        rg = doc.reindex[g].table
        rc = doc.reindex[c].table
        for gamma in doc.fiber[cat.tgt[g]].elements:
            if rc[gamma] != rf[rg[gamma]]:
                diags.append(
                    f"functoriality: reindex({g} after {f}) disagrees with "
                    f"reindex({f}) after reindex({g}) at {gamma}"
                )
                budget -= 1
                break
        if budget == 0:
            diags.append("functoriality: further violations suppressed")
            break
    return diags


def _doubled_cones(cat: FinCategory, x: str) -> list[Cone]:
    return [cone for cone, _ in enumerate_weak_products(cat, (x, x))]


def _mediators(cat: FinCategory, u_obj: str, cone: Cone, composites: tuple[str, ...]) -> list[str]:
    """Arrows h: u_obj -> cone.apex with cone.legs[i] after h == composites[i]."""
    out = []
    for h in cat.hom(u_obj, cone.apex):
        if all(cat.comp(leg, h) == want for leg, want in zip(cone.legs, composites)):
            out.append(h)
    return out


def _mediator_index(cat: FinCategory, u_obj: str, cone: Cone, cache: dict) -> dict[tuple[str, str], list[str]]:
    """Index of hom(u_obj, cone.apex) by the pair of leg composites."""
    key = (u_obj, cone)
    got = cache.get(key)
    if got is None:
        got = {}
        l1, l2 = cone.legs
        for h in cat.hom(u_obj, cone.apex):
            got.setdefault((cat.comp(l1, h), cat.comp(l2, h)), []).append(h)
        cache[key] = got
    return got


def descent_elements(doc: Doctrine, cone: Cone, beta: str) -> list[str]:
    """Elements alpha of fiber(X) with P_p1(alpha) meet beta <= P_p2(alpha)."""
    if len(cone.feet) != 2 or cone.feet[0] != cone.feet[1]:
        raise InputError(f"descent needs a doubled cone, got feet {cone.feet}")
    x = cone.feet[0]
    w = cone.apex
    lat_w = doc.fib(w)
    if beta not in lat_w.elements:
        raise InputError(f"{beta} is not in the fiber over {w}")
    r1 = doc.rx(cone.legs[0]).table
    r2 = doc.rx(cone.legs[1]).table
    return [a for a in doc.fib(x).elements if lat_w.le(lat_w.meet_of(r1[a], beta), r2[a])]


def descent_poset(doc: Doctrine, cone: Cone, beta: str) -> InfSemilattice:
    """The sub-semilattice of fiber(X) cut out by the descent inequality."""
    bad = validate_cone(doc.base, cone)
    if bad:
        raise InputError("; ".join(bad))
    if classify_cone(doc.base, cone) == NOT_WEAK:
        raise InputError(f"cone {cone.label()} is not a weak product")
    members = descent_elements(doc, cone, beta)
    lat = doc.fib(cone.feet[0])
    pairs = [(a, b) for a in members for b in members if lat.le(a, b)]
    des = semilattice(members, pairs)
    assert des.top == lat.top, "descent set lost the top element"
    for a in members:
        for b in members:
            assert des.meet_of(a, b) == lat.meet_of(a, b), "descent set not meet-closed"
    return des


def _transport_equalities(
    doc: Doctrine, chosen: Mapping[str, Cone], delta: Mapping[str, str]
) -> EqualityAssignment:
    """Reindex per-object equality along connecting arrows onto every doubled cone.

    For each internal weak product cone p over (X, X), finds the internal
    arrows h into the chosen cone commuting with the projections and sets
    the cone's equality to the reindexing of delta[X] along h.  Transport
    must be unambiguous; a cone with no connecting arrow raises
    ChartTooShallow.
    """
    cat = doc.base
    table: dict[Cone, str] = {}
    for x in cat.objects:
        cones = _doubled_cones(cat, x)
        if not cones:
            continue
        if x not in chosen or x not in delta:
            raise InputError(f"no chosen product or equality element for object {x}")
        base_cone = chosen[x]
        d_x = delta[x]
        for p in cones:
            hs = _mediators(cat, p.apex, base_cone, p.legs)
            if not hs:
                raise ChartTooShallow(p.label(), f"connecting arrow into {base_cone.label()}")
            values = {doc.apply(h, d_x) for h in hs}
            if len(values) > 1:
                raise InputError(
                    f"transport of equality onto {p.label()} is ambiguous: {sorted(values)}"
                )
            table[p] = values.pop()
    return EqualityAssignment(table)


def equality_from_strict(doc: Doctrine, delta: StrictDelta) -> EqualityAssignment:
    """Equality on every internal doubled cone, reindexed from a strict delta."""
    chosen = {x: delta.cones[(x, x)] for x in doc.base.objects if (x, x) in delta.cones}
    return _transport_equalities(doc, chosen, delta.delta)


def check_strict_elementary(doc: Doctrine, delta: StrictDelta) -> Report:
    """Verdicts for the strict elementary axioms on the chosen products.

    Covers diagonal reflexivity, descent completeness, the box inequality
    delta_X ⊠ delta_Y <= delta_{X x Y}, the two explicit adjunction
    presentations of equality, agreement between the two routes, and
    coherence of equality transported across every other internal strict
    cone for the same pair.
    """
    cat = doc.base
    fs: list[Finding] = []
    objs = sorted(delta.delta)

    for pair, cone in delta.cones.items():
        bad = validate_cone(cat, cone)
        if bad:
            raise InputError(f"chosen cone for {pair}: " + "; ".join(bad))
        if tuple(cone.feet) != pair:
            raise InputError(f"chosen cone for {pair} has feet {cone.feet}")
        if classify_cone(cat, cone) != STRICT:
            raise InputError(f"chosen cone {cone.label()} for {pair} is not strict")

    diagonals: dict[str, list[str]] = {}
    adj_ok: dict[str, Optional[bool]] = {}
    for x in objs:
        cone = delta.cones.get((x, x))
        if cone is None:
            fs.append(Finding(SHALLOW, "chosen-product", f"({x}, {x})", "no strict product cone in the chart"))
            adj_ok[x] = None
            continue
        w = cone.apex
        d_x = delta.delta[x]
        if d_x not in doc.fib(w).elements:
            raise InputError(f"equality element {d_x} for {x} is not in the fiber over {w}")
        lat_x = doc.fib(x)
        lat_w = doc.fib(w)
        p1, p2 = cone.legs
        r1 = doc.rx(p1).table
        r2 = doc.rx(p2).table

        ds = _mediators(cat, x, cone, (cat.ident(x), cat.ident(x)))
        diagonals[x] = ds
        if not ds:
            fs.append(Finding(SHALLOW, "diagonal-reflexivity", x, "no diagonal arrow in the chart"))
        else:
            bad_d = [d for d in ds if not lat_x.le(lat_x.top, doc.apply(d, d_x))]
            if bad_d:
                fs.append(Finding(FAIL, "diagonal-reflexivity", x, f"top not below equality pulled along d={bad_d[0]}"))
            else:
                fs.append(Finding(PASS, "diagonal-reflexivity", x, f"checked {len(ds)} diagonal(s)"))

        bad_a = [a for a in lat_x.elements if not lat_w.le(lat_w.meet_of(r1[a], d_x), r2[a])]
        if bad_a:
            fs.append(Finding(FAIL, "descent-completeness", x, f"witness alpha = {bad_a[0]}"))
        else:
            fs.append(Finding(PASS, "descent-completeness", x, f"all {len(lat_x.elements)} elements descend"))

        # Adjunction route: alpha |-> P_p1(alpha) meet delta is left adjoint to P_d.
        ok: Optional[bool] = None
        if ds:
            ok = True
            witness = ""
            for d in ds:
                rd = doc.rx(d).table
                for a in lat_x.elements:
                    ex_a = lat_w.meet_of(r1[a], d_x)
                    for b in lat_w.elements:
                        if lat_w.le(ex_a, b) != lat_x.le(a, rd[b]):
                            ok = False
                            witness = f"d={d}, alpha={a}, beta={b}"
                            break
                    if not ok:
                        break
                if not ok:
                    break
            fs.append(
                Finding(PASS, "diagonal-adjunction", x, f"checked {len(ds)} diagonal(s)")
                if ok
                else Finding(FAIL, "diagonal-adjunction", x, witness)
            )
        else:
            fs.append(Finding(SHALLOW, "diagonal-adjunction", x, "no diagonal arrow in the chart"))
        adj_ok[x] = ok

        ok_12 = not any(f.verdict == FAIL and f.subject == x and f.law in ("diagonal-reflexivity", "descent-completeness") for f in fs)
        shallow_12 = any(f.verdict == SHALLOW and f.subject == x for f in fs)
        if ok is None or shallow_12:
            fs.append(Finding(VACUOUS, "routes-agree", x, "one route not fully checkable on this chart"))
        elif ok == ok_12:
            fs.append(Finding(PASS, "routes-agree", x, ""))
        else:
            fs.append(Finding(FAIL, "routes-agree", x, f"adjunction route {ok}, condition route {ok_12}"))

    for x in objs:
        cone = delta.cones.get((x, x))
        if cone is None:
            continue
        others = [c for c, cls in enumerate_weak_products(cat, (x, x)) if cls == STRICT and c != cone]
        if not others:
            fs.append(Finding(VACUOUS, "transport-coherence", x, "no other internal strict cone"))
            continue
        bad = ""
        for q in others:
            hs = _mediators(cat, q.apex, cone, q.legs)
            if not hs:
                bad = f"no connecting arrow from {q.label()}"
                break
            values = {doc.apply(h, delta.delta[x]) for h in hs}
            if len(values) > 1:
                bad = f"ambiguous transport onto {q.label()}: {sorted(values)}"
                break
        if bad:
            fs.append(Finding(FAIL, "transport-coherence", x, bad))
        else:
            fs.append(Finding(PASS, "transport-coherence", x, f"checked {len(others)} cone(s)"))

    for x in objs:
        for y in objs:
            subject = f"({x}, {y})"
            c_xy = delta.cones.get((x, y))
            if c_xy is None:
                fs.append(Finding(SHALLOW, "box-compatibility", subject, "no strict product cone in the chart"))
                continue
            p_obj = c_xy.apex
            c_pp = delta.cones.get((p_obj, p_obj))
            missing = []
            if c_pp is None:
                missing.append(f"product of ({p_obj}, {p_obj})")
            if p_obj not in delta.delta:
                missing.append(f"equality element for {p_obj}")
            c_xx = delta.cones.get((x, x))
            c_yy = delta.cones.get((y, y))
            if c_xx is None:
                missing.append(f"product of ({x}, {x})")
            if c_yy is None:
                missing.append(f"product of ({y}, {y})")
            if missing:
                fs.append(Finding(SHALLOW, "box-compatibility", subject, "; ".join(missing)))
                continue
            u_obj = c_pp.apex
            r1, r2 = c_pp.legs
            px, py = c_xy.legs
            m13 = _mediators(cat, u_obj, c_xx, (cat.comp_list(px, r1), cat.comp_list(px, r2)))
            m24 = _mediators(cat, u_obj, c_yy, (cat.comp_list(py, r1), cat.comp_list(py, r2)))
            if not m13 or not m24:
                fs.append(Finding(SHALLOW, "box-compatibility", subject, "no pairing arrows onto the squared product"))
                continue
            lat_u = doc.fib(u_obj)
            rhs = delta.delta[p_obj]
            bad = ""
            for a13 in m13:
                for a24 in m24:
                    box = lat_u.meet_of(doc.apply(a13, delta.delta[x]), doc.apply(a24, delta.delta[y]))
                    if not lat_u.le(box, rhs):
                        bad = f"pairings ({a13}, {a24})"
                        break
                if bad:
                    break
            if bad:
                fs.append(Finding(FAIL, "box-compatibility", subject, bad))
            else:
                fs.append(Finding(PASS, "box-compatibility", subject, f"checked {len(m13) * len(m24)} pairing choice(s)"))

            # Adjunction for the pairing e = <p1, p2, p2>: X x Y -> (X x Y) x Y.
            c_py = delta.cones.get((p_obj, y))
            if c_py is None:
                fs.append(Finding(SHALLOW, "pair-adjunction", subject, f"no product of ({p_obj}, {y})"))
                continue
            t_obj = c_py.apex
            proj1, proj2 = c_py.legs
            es = _mediators(cat, p_obj, c_py, (cat.ident(p_obj), py))
            m23 = _mediators(cat, t_obj, c_yy, (cat.comp_list(py, proj1), proj2))
            if not es or not m23:
                fs.append(Finding(SHALLOW, "pair-adjunction", subject, "pairing arrows missing from the chart"))
                continue
            lat_p = doc.fib(p_obj)
            lat_t = doc.fib(t_obj)
            rp1 = doc.rx(proj1).table
            bad = ""
            for e in es:
                re = doc.rx(e).table
                for a23 in m23:
                    dual = doc.apply(a23, delta.delta[y])
                    for a in lat_p.elements:
                        ex_a = lat_t.meet_of(rp1[a], dual)
                        for b in lat_t.elements:
                            if lat_t.le(ex_a, b) != lat_p.le(a, re[b]):
                                bad = f"e={e}, alpha={a}, beta={b}"
                                break
                        if bad:
                            break
                    if bad:
                        break
                if bad:
                    break
            if bad:
                fs.append(Finding(FAIL, "pair-adjunction", subject, bad))
            else:
                fs.append(Finding(PASS, "pair-adjunction", subject, f"checked {len(es) * len(m23)} pairing choice(s)"))

    return report("strict-elementary", fs)


def check_biased_elementary(doc: Doctrine, eq: EqualityAssignment) -> Report:
    """Verdicts for the four biased elementary conditions, per (object, cone).

    Condition 1 quantifies over internal diagonals, condition 2 over the
    whole fiber, condition 3 over commuting comparisons from every other
    doubled cone, and condition 4 over internal weak products of the apex
    with itself together with the two coordinate-mixing arrows.
    """
    cat = doc.base
    fs: list[Finding] = []
    by_obj: dict[str, list[Cone]] = {}
    for x in cat.objects:
        cones = _doubled_cones(cat, x)
        for p in cones:
            d = eq.value(p)
            if d not in doc.fib(p.apex).elements:
                raise InputError(f"equality for {p.label()} is not in the fiber over {p.apex}")
        if cones:
            by_obj[x] = cones

    med_cache: dict = {}
    for x, cones in by_obj.items():
        for p in cones:
            subject = f"{x} @ {p.label()}"
            w = p.apex
            d_p = eq.value(p)
            lat_x = doc.fib(x)
            lat_w = doc.fib(w)
            p1, p2 = p.legs
            r1 = doc.rx(p1).table
            r2 = doc.rx(p2).table

            ds = _mediators(cat, x, p, (cat.ident(x), cat.ident(x)))
            if not ds:
                fs.append(Finding(VACUOUS, "reflexivity", subject, "no internal diagonal"))
            else:
                bad = [d for d in ds if not lat_x.le(lat_x.top, doc.apply(d, d_p))]
                if bad:
                    fs.append(Finding(FAIL, "reflexivity", subject, f"witness d = {bad[0]}"))
                else:
                    fs.append(Finding(PASS, "reflexivity", subject, f"checked {len(ds)} diagonal(s)"))

            bad_a = [a for a in lat_x.elements if not lat_w.le(lat_w.meet_of(r1[a], d_p), r2[a])]
            if bad_a:
                fs.append(Finding(FAIL, "descent-completeness", subject, f"witness alpha = {bad_a[0]}"))
            else:
                fs.append(Finding(PASS, "descent-completeness", subject, f"all {len(lat_x.elements)} elements descend"))

            checked = 0
            witness = ""
            for xp, other in by_obj.items():
                homs = cat.hom(xp, x)
                for pp in other:
                    d_pp = eq.value(pp)
                    lat_wp = doc.fib(pp.apex)
                    keyed: dict[tuple[str, str], list[str]] = {}
                    for f in homs:
                        keyed.setdefault((cat.comp(f, pp.legs[0]), cat.comp(f, pp.legs[1])), []).append(f)
                    for g in cat.hom(pp.apex, w):
                        matches = keyed.get((cat.comp(p1, g), cat.comp(p2, g)))
                        if matches:
                            checked += len(matches)
                            if not witness and not lat_wp.le(d_pp, doc.apply(g, d_p)):
                                witness = f"source cone {pp.label()}, f = {matches[0]}, g = {g}"
            if checked == 0:
                fs.append(Finding(VACUOUS, "cone-comparison", subject, "no commuting comparison"))
            elif witness:
                fs.append(Finding(FAIL, "cone-comparison", subject, witness))
            else:
                fs.append(Finding(PASS, "cone-comparison", subject, f"checked {checked} comparison(s)"))

            checked = 0
            witness = ""
            for rc, _cls in enumerate_weak_products(cat, (w, w)):
                u_obj = rc.apex
                rr1, rr2 = rc.legs
                lat_u = doc.fib(u_obj)
                index = _mediator_index(cat, u_obj, p, med_cache)
                ts = index.get((cat.comp_list(p1, rr1), cat.comp_list(p1, rr2)), [])
                tps = index.get((cat.comp_list(p2, rr1), cat.comp_list(p2, rr2)), [])
                if not ts or not tps:
                    continue
                lhs_base = doc.apply(rr1, d_p)
                rhs = doc.apply(rr2, d_p)
                for t in ts:
                    mid = lat_u.meet_of(lhs_base, doc.apply(t, d_p))
                    for tp in tps:
                        checked += 1
                        lhs = lat_u.meet_of(mid, doc.apply(tp, d_p))
                        if not witness and not lat_u.le(lhs, rhs):
                            witness = f"r = {rc.label()}, t = {t}, t' = {tp}"
            if checked == 0:
                fs.append(Finding(VACUOUS, "square-descent", subject, "no internal squared cone"))
            elif witness:
                fs.append(Finding(FAIL, "square-descent", subject, witness))
            else:
                fs.append(Finding(PASS, "square-descent", subject, f"checked {checked} square(s)"))

    if not fs:
        fs.append(Finding(VACUOUS, "doubled-cones", "chart", "no internal weak product of any doubled object"))
    return report("biased-elementary", fs)


def check_derived_lemma33(doc: Doctrine, eq: EqualityAssignment) -> Report:
    """Verdicts for the two inequalities that follow from the biased axioms.

    Law span-compatibility: over a weak product V of (X, X'), a squared
    cone U of (V, V), and coordinate-mixing arrows t into the doubled cone
    of X and t' into that of X', the equality of V is below both pulled
    equalities.  Law refinement-monotonicity: along any arrow h commuting
    with the projections of two doubled cones of X, the finer equality is
    below the pulled coarser one.
    """
    cat = doc.base
    fs: list[Finding] = []
    by_obj: dict[str, list[Cone]] = {}
    for x in cat.objects:
        cones = _doubled_cones(cat, x)
        if cones:
            by_obj[x] = cones

    med_cache: dict = {}
    for x, cones_x in by_obj.items():
        for xp, cones_xp in by_obj.items():
            checked = 0
            witness = ""
            for qc, _cls in enumerate_weak_products(cat, (x, xp)):
                q1, q2 = qc.legs
                for rc in _doubled_cones(cat, qc.apex):
                    d_r = eq.value(rc)
                    u_obj = rc.apex
                    rr1, rr2 = rc.legs
                    lat_u = doc.fib(u_obj)
                    a_pair = (cat.comp_list(q1, rr1), cat.comp_list(q1, rr2))
                    b_pair = (cat.comp_list(q2, rr1), cat.comp_list(q2, rr2))
                    for p in cones_x:
                        ts = _mediator_index(cat, u_obj, p, med_cache).get(a_pair, [])
                        if not ts:
                            continue
                        d_p = eq.value(p)
                        for pp in cones_xp:
                            tps = _mediator_index(cat, u_obj, pp, med_cache).get(b_pair, [])
                            if not tps:
                                continue
                            d_pp = eq.value(pp)
                            for t in ts:
                                pulled_t = doc.apply(t, d_p)
                                for tp in tps:
                                    checked += 1
                                    if not witness:
                                        rhs = lat_u.meet_of(pulled_t, doc.apply(tp, d_pp))
                                        if not lat_u.le(d_r, rhs):
                                            witness = (
                                                f"V cone {qc.label()}, U cone {rc.label()}, t = {t}, t' = {tp}"
                                            )
            subject = f"({x}, {xp})"
            if checked == 0:
                fs.append(Finding(VACUOUS, "span-compatibility", subject, "no internal witness diagram"))
            elif witness:
                fs.append(Finding(FAIL, "span-compatibility", subject, witness))
            else:
                fs.append(Finding(PASS, "span-compatibility", subject, f"checked {checked} diagram(s)"))

    for x, cones_x in by_obj.items():
        checked = 0
        witness = ""
        for p in cones_x:
            d_p = eq.value(p)
            for pp in cones_x:
                d_pp = eq.value(pp)
                lat_wp = doc.fib(pp.apex)
                for h in _mediators(cat, pp.apex, p, pp.legs):
                    checked += 1
                    if not witness and not lat_wp.le(d_pp, doc.apply(h, d_p)):
                        witness = f"from {pp.label()} into {p.label()} along h = {h}"
        if checked == 0:
            fs.append(Finding(VACUOUS, "refinement-monotonicity", x, "no connecting arrow"))
        elif witness:
            fs.append(Finding(FAIL, "refinement-monotonicity", x, witness))
        else:
            fs.append(Finding(PASS, "refinement-monotonicity", x, f"checked {checked} arrow(s)"))

    if not fs:
        fs.append(Finding(VACUOUS, "doubled-cones", "chart", "no internal weak product of any doubled object"))
    return report("equality-consequences", fs)


def derive_from_choice(
    doc: Doctrine, choice: ChoiceOfWeakProducts, delta: Mapping[str, str]
) -> EqualityAssignment:
    """Equality assignment induced by per-object equality on chosen products.

    First verifies the sufficient conditions on the chosen data: chosen
    cones are weak products and the product arrows commute with the
    projections; each object has an internal reflexivity diagonal below
    its equality; descent completeness; monotonicity of equality along
    every f x f; and the squared-cone descent condition wherever the chart
    contains the squared product.  Then transports delta along connecting
    arrows onto every internal doubled cone.  Violations raise InputError
    naming the condition; a missing connecting arrow raises
    ChartTooShallow.
    """
    cat = doc.base
    for pair, cone in choice.cones.items():
        bad = validate_cone(cat, cone)
        if bad:
            raise InputError(f"chosen cone for {pair}: " + "; ".join(bad))
        if tuple(cone.feet) != pair:
            raise InputError(f"chosen cone for {pair} has feet {cone.feet}")
        if classify_cone(cat, cone) == NOT_WEAK:
            raise InputError(f"chosen cone {cone.label()} for {pair} is not a weak product")
    for (f, g), fg in choice.arrows.items():
        c_src = choice.cones.get((cat.src[f], cat.src[g]))
        c_tgt = choice.cones.get((cat.tgt[f], cat.tgt[g]))
        if c_src is None or c_tgt is None:
            raise InputError(f"product arrow ({f}, {g}) lacks a chosen cone at one end")
        if cat.comp(c_tgt.legs[0], fg) != cat.comp(f, c_src.legs[0]) or cat.comp(
            c_tgt.legs[1], fg
        ) != cat.comp(g, c_src.legs[1]):
            raise InputError(f"product arrow for ({f}, {g}) does not commute with the projections")

    for x in cat.objects:
        if not _doubled_cones(cat, x):
            continue
        cone = choice.cones.get((x, x))
        if cone is None:
            raise InputError(f"no chosen weak product for ({x}, {x})")
        if x not in delta:
            raise InputError(f"no equality element for object {x}")
        w = cone.apex
        d_x = delta[x]
        lat_x = doc.fib(x)
        lat_w = doc.fib(w)
        if d_x not in lat_w.elements:
            raise InputError(f"equality element {d_x} for {x} is not in the fiber over {w}")
        p1, p2 = cone.legs
        r1 = doc.rx(p1).table
        r2 = doc.rx(p2).table

        ds = _mediators(cat, x, cone, (cat.ident(x), cat.ident(x)))
        if not ds:
            raise ChartTooShallow(f"diagonal of {x}", f"arrow into {cone.label()}")
        if not any(lat_x.le(lat_x.top, doc.apply(d, d_x)) for d in ds):
            raise InputError(f"condition (i) fails for {x}: no diagonal puts top below the equality")

        for a in lat_x.elements:
            if not lat_w.le(lat_w.meet_of(r1[a], d_x), r2[a]):
                raise InputError(f"condition (ii) fails for {x}: witness alpha = {a}")

        c_ww = choice.cones.get((w, w))
        if c_ww is not None:
            u_obj = c_ww.apex
            rr1, rr2 = c_ww.legs
            lat_u = doc.fib(u_obj)
            m13 = _mediators(cat, u_obj, cone, (cat.comp_list(p1, rr1), cat.comp_list(p1, rr2)))
            m24 = _mediators(cat, u_obj, cone, (cat.comp_list(p2, rr1), cat.comp_list(p2, rr2)))
            rhs = doc.apply(rr2, d_x)
            base = doc.apply(rr1, d_x)
            for a13 in m13:
                mid = lat_u.meet_of(base, doc.apply(a13, d_x))
                for a24 in m24:
                    lhs = lat_u.meet_of(mid, doc.apply(a24, d_x))
                    if not lat_u.le(lhs, rhs):
                        raise InputError(
                            f"condition (iv) fails for {x}: squared cone {c_ww.label()}, "
                            f"pairings ({a13}, {a24})"
                        )

    for f in cat.arrows:
        x, y = cat.src[f], cat.tgt[f]
        if not _doubled_cones(cat, x) or not _doubled_cones(cat, y):
            continue
        fg = choice.arrows.get((f, f))
        if fg is None:
            raise InputError(f"choice lacks the product arrow for ({f}, {f})")
        if not doc.fib(choice.cones[(x, x)].apex).le(delta[x], doc.apply(fg, delta[y])):
            raise InputError(f"condition (iii) fails at arrow {f}")

    chosen = {x: c for (x, y), c in choice.cones.items() if x == y}
    return _transport_equalities(doc, chosen, delta)


def comprehension_classify(doc: Doctrine, alpha: str, c: str) -> dict[str, bool]:
    """Flags for c: C -> X as a comprehension of alpha.

    is_comprehension: top_C is below the pulled alpha and every internal
    arrow into X whose pulled alpha is full factors through c.  strict:
    every factorization is unique; weak: some is not.  full: among
    comprehensions, alpha is below every beta whose pullback along c is
    full.
    """
    cat = doc.base
    if c not in cat.src:
        raise InputError(f"unknown arrow {c}")
    x = cat.tgt[c]
    c_obj = cat.src[c]
    lat_x = doc.fib(x)
    if alpha not in lat_x.elements:
        raise InputError(f"{alpha} is not in the fiber over {x}")
    lat_c = doc.fib(c_obj)
    rc = doc.rx(c).table

    holds_at_c = lat_c.le(lat_c.top, rc[alpha])
    exists_all = True
    unique_all = True
    for f in cat.arrows:
        if cat.tgt[f] != x:
            continue
        y = cat.src[f]
        lat_y = doc.fib(y)
        if not lat_y.le(lat_y.top, doc.apply(f, alpha)):
            continue
        hs = [h for h in cat.hom(y, c_obj) if cat.comp(c, h) == f]
        if not hs:
            exists_all = False
        elif len(hs) > 1:
            unique_all = False
    is_comp = holds_at_c and exists_all
    full = is_comp and all(
        lat_x.le(alpha, beta) for beta in lat_x.elements if lat_c.le(lat_c.top, rc[beta])
    )
    return {
        "is_comprehension": is_comp,
        "strict": is_comp and unique_all,
        "weak": is_comp and not unique_all,
        "full": full,
    }


def has_comprehensive_diagonals_biased(doc: Doctrine, eq: EqualityAssignment) -> tuple[bool, str]:
    """Whether top below pulled equality forces the two composites equal.

    Quantifies over every internal doubled cone, every object A, and every
    arrow h from A into the apex.  Returns a counterexample description on
    failure.
    """
    cat = doc.base
    for x in cat.objects:
        for p in _doubled_cones(cat, x):
            d_p = eq.value(p)
            p1, p2 = p.legs
            for a_obj in cat.objects:
                lat_a = doc.fib(a_obj)
                for h in cat.hom(a_obj, p.apex):
                    if lat_a.le(lat_a.top, doc.apply(h, d_p)):
                        f = cat.comp(p1, h)
                        g = cat.comp(p2, h)
                        if f != g:
                            return False, f"cone {p.label()}, h = {h} relates {f} and {g}"
    return True, ""


def _all_weak_cones(cat: FinCategory) -> dict[tuple[str, str], list[Cone]]:
    out: dict[tuple[str, str], list[Cone]] = {}
    for x in cat.objects:
        for y in cat.objects:
            cones = [c for c, _ in enumerate_weak_products(cat, (x, y))]
            if cones:
                out[(x, y)] = cones
    return out


def existential_report(doc: Doctrine, eq: EqualityAssignment) -> Report:
    """Left adjoints along projections, weak Beck-Chevalley, weak Frobenius.

    Adjoint existence is reported per projection of every internal binary
    weak product.  Beck-Chevalley ranges over pairs of cones sharing their
    first foot together with an arrow f into the second foot and a
    connecting arrow g playing 1 x f; the squares are checked on
    proof-irrelevant elements only, as are the Frobenius right factors.
    Mirrored cones make the first-foot squares redundant, so only the
    second projection is quantified.
    """
    from .irrelevance import pi_elements

    cat = doc.base
    fs: list[Finding] = []
    cones = _all_weak_cones(cat)
    if not cones:
        return report("existential", [Finding(VACUOUS, "weak-products", "chart", "no internal weak products")])

    adjoints: dict[tuple[Cone, int], Optional[MonotoneMap]] = {}
    pi_sets: dict[Cone, Optional[tuple[str, ...]]] = {}
    med_cache: dict = {}
    for feet in sorted(cones):
        for p in cones[feet]:
            subject = f"{p.label()} over {feet}"
            for i in (0, 1):
                la = left_adjoint(doc.rx(p.legs[i]))
                adjoints[(p, i)] = la
                fs.append(
                    Finding(PASS, "left-adjoint", f"p{i + 1} of {subject}", "")
                    if la is not None
                    else Finding(FAIL, "left-adjoint", f"p{i + 1} of {subject}", "no left adjoint")
                )
            try:
                pi_sets[p] = pi_elements(doc, eq, p).elements
            except ChartTooShallow as exc:
                pi_sets[p] = None
                fs.append(Finding(SHALLOW, "proof-irrelevance", subject, exc.missing))

    for feet in sorted(cones):
        x1, x2 = feet
        for p in cones[feet]:
            subject = f"{p.label()} over {feet}"
            ex_p = adjoints[(p, 1)]
            pi_p = pi_sets[p]
            if ex_p is None:
                fs.append(Finding(PREMISE_FAILURE, "beck-chevalley", subject, "no left adjoint along p2"))
            elif pi_p is None:
                fs.append(Finding(PREMISE_FAILURE, "beck-chevalley", subject, "proof-irrelevant elements unavailable"))
            else:
                checked = 0
                skipped = 0
                witness = ""
                for (y1, y_obj), others in cones.items():
                    if y1 != x1:
                        continue
                    for pp in others:
                        ex_pp = adjoints[(pp, 1)]
                        by_legs = _mediator_index(cat, pp.apex, p, med_cache)
                        for f in cat.hom(y_obj, x2):
                            want = (pp.legs[0], cat.comp(f, pp.legs[1]))
                            gs = by_legs.get(want, ())
                            if not gs:
                                continue
                            if ex_pp is None:
                                skipped += len(gs)
                                continue
                            rf = doc.rx(f).table
                            for g in gs:
                                rg = doc.rx(g).table
                                for a in pi_p:
                                    checked += 1
                                    if not witness and ex_pp.table[rg[a]] != rf[ex_p.table[a]]:
                                        witness = f"f = {f}, g = {g}, alpha = {a}"
                detail = f"checked {checked} square(s)"
                if skipped:
                    detail += f", skipped {skipped} lacking adjoints"
                if checked == 0:
                    fs.append(Finding(VACUOUS, "beck-chevalley", subject, "no internal square"))
                elif witness:
                    fs.append(Finding(FAIL, "beck-chevalley", subject, witness))
                else:
                    fs.append(Finding(PASS, "beck-chevalley", subject, detail))

            for i in (0, 1):
                ex_i = adjoints[(p, i)]
                label = f"p{i + 1} of {subject}"
                if ex_i is None:
                    fs.append(Finding(PREMISE_FAILURE, "frobenius", label, "no left adjoint"))
                    continue
                if pi_p is None:
                    fs.append(Finding(PREMISE_FAILURE, "frobenius", label, "proof-irrelevant elements unavailable"))
                    continue
                foot = feet[i]
                lat_f = doc.fib(foot)
                lat_w = doc.fib(p.apex)
                ri = doc.rx(p.legs[i]).table
                witness = ""
                checked = 0
                for a in lat_f.elements:
                    for b in pi_p:
                        checked += 1
                        lhs = ex_i.table[lat_w.meet_of(ri[a], b)]
                        rhs = lat_f.meet_of(a, ex_i.table[b])
                        if not witness and lhs != rhs:
                            witness = f"alpha = {a}, beta = {b}"
                if checked == 0:
                    fs.append(Finding(VACUOUS, "frobenius", label, "no proof-irrelevant elements"))
                elif witness:
                    fs.append(Finding(FAIL, "frobenius", label, witness))
                else:
                    fs.append(Finding(PASS, "frobenius", label, f"checked {checked} pair(s)"))

    return report("existential", fs)


def universal_report(doc: Doctrine, eq: EqualityAssignment) -> Report:
    """Right adjoints along projections and the dual weak Beck-Chevalley."""
    from .irrelevance import pi_elements

    cat = doc.base
    fs: list[Finding] = []
    cones = _all_weak_cones(cat)
    if not cones:
        return report("universal", [Finding(VACUOUS, "weak-products", "chart", "no internal weak products")])

    adjoints: dict[tuple[Cone, int], Optional[MonotoneMap]] = {}
    pi_sets: dict[Cone, Optional[tuple[str, ...]]] = {}
    med_cache: dict = {}
    for feet in sorted(cones):
        for p in cones[feet]:
            subject = f"{p.label()} over {feet}"
            for i in (0, 1):
                ra = right_adjoint(doc.rx(p.legs[i]))
                adjoints[(p, i)] = ra
                fs.append(
                    Finding(PASS, "right-adjoint", f"p{i + 1} of {subject}", "")
                    if ra is not None
                    else Finding(FAIL, "right-adjoint", f"p{i + 1} of {subject}", "no right adjoint")
                )
            try:
                pi_sets[p] = pi_elements(doc, eq, p).elements
            except ChartTooShallow as exc:
                pi_sets[p] = None
                fs.append(Finding(SHALLOW, "proof-irrelevance", subject, exc.missing))

    for feet in sorted(cones):
        x1, x2 = feet
        for p in cones[feet]:
            subject = f"{p.label()} over {feet}"
            all_p = adjoints[(p, 1)]
            pi_p = pi_sets[p]
            if all_p is None:
                fs.append(Finding(PREMISE_FAILURE, "beck-chevalley", subject, "no right adjoint along p2"))
                continue
            if pi_p is None:
                fs.append(Finding(PREMISE_FAILURE, "beck-chevalley", subject, "proof-irrelevant elements unavailable"))
                continue
            checked = 0
            skipped = 0
            witness = ""
            for (y1, y_obj), others in cones.items():
                if y1 != x1:
                    continue
                for pp in others:
                    all_pp = adjoints[(pp, 1)]
                    by_legs = _mediator_index(cat, pp.apex, p, med_cache)
                    for f in cat.hom(y_obj, x2):
                        want = (pp.legs[0], cat.comp(f, pp.legs[1]))
                        gs = by_legs.get(want, ())
                        if not gs:
                            continue
                        if all_pp is None:
                            skipped += len(gs)
                            continue
                        rf = doc.rx(f).table
                        for g in gs:
                            rg = doc.rx(g).table
                            for a in pi_p:
                                checked += 1
                                if not witness and all_pp.table[rg[a]] != rf[all_p.table[a]]:
                                    witness = f"f = {f}, g = {g}, alpha = {a}"
            detail = f"checked {checked} square(s)"
            if skipped:
                detail += f", skipped {skipped} lacking adjoints"
            if checked == 0:
                fs.append(Finding(VACUOUS, "beck-chevalley", subject, "no internal square"))
            elif witness:
                fs.append(Finding(FAIL, "beck-chevalley", subject, witness))
            else:
                fs.append(Finding(PASS, "beck-chevalley", subject, detail))

    return report("universal", fs)


def implicational_report(doc: Doctrine) -> Report:
    """Per object and element, presence of a right adjoint to meeting with it."""
    fs: list[Finding] = []
    for x in doc.base.objects:
        lat = doc.fib(x)
        for a in lat.elements:
            m = MonotoneMap(lat, lat, {b: lat.meet_of(a, b) for b in lat.elements})
            ra = right_adjoint(m)
            fs.append(
                Finding(PASS, "implication", f"{x} : {a}", "")
                if ra is not None
                else Finding(FAIL, "implication", f"{x} : {a}", "meet with it has no right adjoint")
            )
    return report("implicational", fs)


def _comprehension_tables(doc: Doctrine) -> dict[str, dict[str, frozenset[str]]]:
    """Per object, per candidate arrow into it, the set of arrows factoring through it."""
    cat = doc.base
    out: dict[str, dict[str, frozenset[str]]] = {}
    into: dict[str, list[str]] = {x: [] for x in cat.objects}
    for a in cat.arrows:
        into[cat.tgt[a]].append(a)
    for x in cat.objects:
        per: dict[str, frozenset[str]] = {}
        for c in into[x]:
            c_obj = cat.src[c]
            seen = set()
            for a_obj in cat.objects:
                for h in cat.hom(a_obj, c_obj):
                    seen.add(cat.comp(c, h))
            per[c] = frozenset(seen)
        out[x] = per
    return out


def _supported_arrows(doc: Doctrine, x: str, alpha: str) -> list[str]:
    """Arrows into x along which the pulled alpha is full."""
    cat = doc.base
    out = []
    for f in cat.arrows:
        if cat.tgt[f] != x:
            continue
        lat_y = doc.fib(cat.src[f])
        if lat_y.le(lat_y.top, doc.apply(f, alpha)):
            out.append(f)
    return out


def _has_full_comprehensions(doc: Doctrine, tables=None) -> tuple[bool, str]:
    """Whether every fiber element admits a full internal comprehension."""
    cat = doc.base
    if tables is None:
        tables = _comprehension_tables(doc)
    for x in cat.objects:
        lat = doc.fib(x)
        for alpha in lat.elements:
            supported = _supported_arrows(doc, x, alpha)
            need = set(supported)
            found = False
            for c in supported:
                if not need <= tables[x][c]:
                    continue
                rc = doc.rx(c).table
                lat_c = doc.fib(cat.src[c])
                if all(lat.le(alpha, beta) for beta in lat.elements if lat_c.le(lat_c.top, rc[beta])):
                    found = True
                    break
            if not found:
                return False, f"{x} : {alpha}"
    return True, ""


def _comprehensions_of(doc: Doctrine, x: str, alpha: str, tables) -> list[str]:
    supported = _supported_arrows(doc, x, alpha)
    need = set(supported)
    return [c for c in supported if need <= tables[x][c]]


def morphism_classify(
    src_doc: Doctrine,
    src_eq: Union[EqualityAssignment, StrictDelta, None],
    tgt_doc: Doctrine,
    tgt_eq: Union[EqualityAssignment, StrictDelta, None],
    m: DoctrineMorphism,
) -> dict[str, tuple[bool, str]]:
    """Cumulative flags for a doctrine morphism, each with a failure witness.

    Naturality is a precondition and raises on violation.  PD asks the
    fiber maps to preserve meets and top and the functor to preserve
    internal binary weak products.  ED adds preservation of equality onto
    the image cones.  EqD adds full comprehensions and comprehensive
    diagonals on both endpoints plus preservation of comprehensions.  QD
    adds quotient completeness of the endpoints and preservation of
    quotients.  Strict equality data is first transported onto every
    internal doubled cone.
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
        fm = m.fiber_maps[x]
        if fm.source != src_doc.fib(x) or fm.target != tgt_doc.fib(fd.ob[x]):
            raise InputError(f"fiber map at {x} has the wrong endpoints")
        missing = validate_monotone(fm)
        if missing:
            raise InputError(f"fiber map at {x}: " + "; ".join(missing))
    for a in cat.arrows:
        x, y = cat.src[a], cat.tgt[a]
        fx = m.fiber_maps[x].table
        fy = m.fiber_maps[y].table
        ra = src_doc.rx(a).table
        rfa = tgt_doc.rx(fd.ar[a]).table
        for gamma in src_doc.fib(y).elements:
            if fx[ra[gamma]] != rfa[fy[gamma]]:
                raise InputError(f"naturality fails at arrow {a}, element {gamma}")

    flags: dict[str, tuple[bool, str]] = {}

    pd_witness = ""
    for x in cat.objects:
        if not is_meet_preserving(m.fiber_maps[x]):
            pd_witness = f"fiber map at {x} does not preserve meets and top"
            break
    if not pd_witness:
        for x in cat.objects:
            for y in cat.objects:
                for p, _cls in enumerate_weak_products(cat, (x, y)):
                    image = Cone(fd.ob[p.apex], (fd.ob[x], fd.ob[y]), (fd.ar[p.legs[0]], fd.ar[p.legs[1]]))
                    if classify_cone(tcat, image) == NOT_WEAK:
                        pd_witness = f"image of {p.label()} is not a weak product"
                        break
                if pd_witness:
                    break
            if pd_witness:
                break
    flags["PD"] = (not pd_witness, pd_witness)

    src_eqn = equality_from_strict(src_doc, src_eq) if isinstance(src_eq, StrictDelta) else src_eq
    tgt_eqn = equality_from_strict(tgt_doc, tgt_eq) if isinstance(tgt_eq, StrictDelta) else tgt_eq

    if not flags["PD"][0]:
        ed = (False, "requires PD")
    elif src_eqn is None or tgt_eqn is None:
        ed = (False, "equality data missing on one endpoint")
    else:
        ed = (True, "")
        for x in cat.objects:
            for p in _doubled_cones(cat, x):
                image = Cone(fd.ob[p.apex], (fd.ob[x], fd.ob[x]), (fd.ar[p.legs[0]], fd.ar[p.legs[1]]))
                if image not in tgt_eqn.table:
                    ed = (False, f"no equality entry for the image of {p.label()}")
                    break
                sent = m.fiber_maps[p.apex].table[src_eqn.value(p)]
                if sent != tgt_eqn.table[image]:
                    ed = (False, f"equality of {p.label()} maps to {sent}, expected {tgt_eqn.table[image]}")
                    break
            if not ed[0]:
                break
    flags["ED"] = ed

    if not ed[0]:
        eqd = (False, "requires ED")
    else:
        src_tables = _comprehension_tables(src_doc)
        tgt_tables = _comprehension_tables(tgt_doc)
        ok, witness = _has_full_comprehensions(src_doc, src_tables)
        if not ok:
            eqd = (False, f"source lacks a full comprehension at {witness}")
        else:
            ok, witness = _has_full_comprehensions(tgt_doc, tgt_tables)
            if not ok:
                eqd = (False, f"target lacks a full comprehension at {witness}")
            else:
                ok, witness = has_comprehensive_diagonals_biased(src_doc, src_eqn)
                if not ok:
                    eqd = (False, f"source diagonals not comprehensive: {witness}")
                else:
                    ok, witness = has_comprehensive_diagonals_biased(tgt_doc, tgt_eqn)
                    if not ok:
                        eqd = (False, f"target diagonals not comprehensive: {witness}")
                    else:
                        eqd = (True, "")
                        for x in cat.objects:
                            lat = src_doc.fib(x)
                            for alpha in lat.elements:
                                for c in _comprehensions_of(src_doc, x, alpha, src_tables):
                                    sent = m.fiber_maps[x].table[alpha]
                                    image_c = fd.ar[c]
                                    got = comprehension_classify(tgt_doc, sent, image_c)
                                    if not got["is_comprehension"]:
                                        eqd = (
                                            False,
                                            f"image of comprehension {c} of {x} : {alpha} is not one",
                                        )
                                        break
                                if not eqd[0]:
                                    break
                            if not eqd[0]:
                                break
    flags["EqD"] = eqd

    if not eqd[0]:
        flags["QD"] = (False, "requires EqD")
    else:
        from .quotient import has_effective_stable_quotients, morphism_preserves_quotients

        ok, witness = has_effective_stable_quotients(src_doc, src_eqn)
        if not ok:
            flags["QD"] = (False, f"source: {witness}")
        else:
            ok, witness = has_effective_stable_quotients(tgt_doc, tgt_eqn)
            if not ok:
                flags["QD"] = (False, f"target: {witness}")
            else:
                ok, witness = morphism_preserves_quotients(src_doc, src_eqn, tgt_doc, tgt_eqn, m)
                flags["QD"] = (ok, witness)
    return flags


def slice_doctrine(
    doc: Doctrine, eq_or_delta: Union[EqualityAssignment, StrictDelta], a_obj: str
) -> tuple[Doctrine, EqualityAssignment]:
    """The doctrine on the slice over a_obj, with transported equality.

    Fibers over a slice object x: X -> a_obj are the fibers over X and
    reindexing along a triangle arrow is reindexing along its underlying
    arrow.  Weak products of a doubled slice object are weak pullbacks of
    x with itself; their equality is the equality of a doubled cone of X
    pulled along a connecting arrow.  Raises ChartTooShallow when the
    chart lacks a weak pullback or a connecting arrow.
    """
    cat = doc.base
    if a_obj not in set(cat.objects):
        raise InputError(f"unknown object {a_obj}")
    eq = equality_from_strict(doc, eq_or_delta) if isinstance(eq_or_delta, StrictDelta) else eq_or_delta
    scat, forget = slice_category(cat, a_obj)
    sfiber = {obj: doc.fib(forget.ob[obj]) for obj in scat.objects}
    sreindex = {arr: doc.rx(forget.ar[arr]) for arr in scat.arrows}
    sdoc = Doctrine(scat, sfiber, sreindex)

    table: dict[Cone, str] = {}
    for x_arr in scat.objects:
        x_obj = forget.ob[x_arr]
        cones = _doubled_cones(scat, x_arr)
        if not cones:
            raise ChartTooShallow(x_arr, f"weak pullback of {x_arr} with itself over {a_obj}")
        parents = _doubled_cones(cat, x_obj)
        for sc in cones:
            u1 = forget.ar[sc.legs[0]]
            u2 = forget.ar[sc.legs[1]]
            w_obj = forget.ob[sc.apex]
            values = set()
            for p in parents:
                for h in _mediators(cat, w_obj, p, (u1, u2)):
                    values.add(doc.apply(h, eq.value(p)))
            if not values:
                raise ChartTooShallow(
                    f"{x_arr} @ {sc.label()}", "connecting arrow into a weak product carrying equality"
                )
            if len(values) > 1:
                raise InputError(f"transported equality ambiguous for {sc.label()}: {sorted(values)}")
            table[sc] = values.pop()
    return sdoc, EqualityAssignment(table)
