"""Truncated finite product completion and the strictified doctrine.

Objects of the completion are nonempty lists of base objects up to a
truncation bound; arrows are component lists together with an index map
sending target positions to source positions.  Homs are generated on
demand because their sizes grow multiplicatively.  The strictification
assigns to every list the proof-irrelevant class fiber over its entries
and reindexes along any base arrow connecting the canonical witness
cones; checks whose diagrams need lists longer than the bound are
reported out of bound instead of silently skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Iterable, Optional

from .doctrine import (
    Doctrine,
    EqualityAssignment,
    _mediators,
    check_biased_elementary,
    existential_report,
    universal_report,
)
from .fincat import Cone, FinCategory, enumerate_weak_products
from .irrelevance import StrictFiber, _conjunct_values, strict_fiber
from .order import MonotoneMap, left_adjoint, right_adjoint
from .report import (
    FAIL,
    OUT_OF_BOUND,
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


@dataclass(frozen=True)
class ListObject:
    """A nonempty list of base objects, the completion's object form."""

    entries: tuple[str, ...]

    def label(self) -> str:
        return "[" + ",".join(self.entries) + "]"


@dataclass(frozen=True)
class ListArrow:
    """A component list with an index map from target slots to source slots.

    components[i] is a base arrow source.entries[index[i]] -> target.entries[i].
    """

    source: ListObject
    target: ListObject
    index: tuple[int, ...]
    components: tuple[str, ...]

    def label(self) -> str:
        comps = ",".join(self.components)
        idx = ",".join(str(i) for i in self.index)
        return f"[{comps}]/({idx})"


def list_object(*entries: str) -> ListObject:
    return ListObject(tuple(entries))


def validate_list_arrow(cat: FinCategory, arr: ListArrow) -> list[str]:
    """Diagnostics for slot counts, index range, and component endpoints."""
    diags: list[str] = []
    n = len(arr.source.entries)
    m = len(arr.target.entries)
    if len(arr.index) != m:
        diags.append(f"index length {len(arr.index)} does not match target length {m}")
    if len(arr.components) != m:
        diags.append(f"component count {len(arr.components)} does not match target length {m}")
    if diags:
        return diags
    for i, (slot, f) in enumerate(zip(arr.index, arr.components)):
        if not 0 <= slot < n:
            diags.append(f"slot {i}: index {slot} outside the source list")
            continue
        if f not in cat.arrows:
            diags.append(f"slot {i}: unknown arrow {f}")
            continue
        if cat.src[f] != arr.source.entries[slot] or cat.tgt[f] != arr.target.entries[i]:
            diags.append(
                f"slot {i}: component {f} is not {arr.source.entries[slot]} -> {arr.target.entries[i]}"
            )
    return diags


def compose_list_arrows(cat: FinCategory, g: ListArrow, f: ListArrow) -> ListArrow:
    """g after f; components compose in the base, index maps compose as functions."""
    if f.target != g.source:
        raise InputError(f"endpoint mismatch: {g.label()} after {f.label()}")
    index = tuple(f.index[slot] for slot in g.index)
    components = tuple(
        cat.comp(g.components[i], f.components[g.index[i]]) for i in range(len(g.index))
    )
    return ListArrow(f.source, g.target, index, components)


def identity_list_arrow(cat: FinCategory, xs: ListObject) -> ListArrow:
    return ListArrow(
        xs,
        xs,
        tuple(range(len(xs.entries))),
        tuple(cat.ident(x) for x in xs.entries),
    )


@dataclass(eq=False)
class ProductCompletion:
    """The lists of length up to the bound with lazily generated homs."""

    cat: FinCategory
    bound: int
    objects: tuple[ListObject, ...]
    _homs: dict = field(default_factory=dict, repr=False)

    def obj(self, entries: Iterable[str]) -> ListObject:
        entries = tuple(entries)
        if not 1 <= len(entries) <= self.bound:
            raise InputError(f"list length {len(entries)} outside 1..{self.bound}")
        for x in entries:
            if x not in self.cat.objects:
                raise InputError(f"unknown object {x} in list")
        return ListObject(entries)

    def concat(self, xs: ListObject, ys: ListObject) -> ListObject:
        return self.obj(xs.entries + ys.entries)

    def ident(self, xs: ListObject) -> ListArrow:
        return identity_list_arrow(self.cat, xs)

    def comp(self, g: ListArrow, f: ListArrow) -> ListArrow:
        return compose_list_arrows(self.cat, g, f)

    def arrow(
        self,
        source: ListObject,
        target: ListObject,
        index: Iterable[int],
        components: Iterable[str],
    ) -> ListArrow:
        arr = ListArrow(source, target, tuple(index), tuple(components))
        diags = validate_list_arrow(self.cat, arr)
        if diags:
            raise InputError(f"bad list arrow {arr.label()}: " + "; ".join(diags))
        return arr

    def hom(self, xs: ListObject, ys: ListObject) -> tuple[ListArrow, ...]:
        cached = self._homs.get((xs, ys))
        if cached is None:
            out = []
            n = len(xs.entries)
            for index in iproduct(range(n), repeat=len(ys.entries)):
                pools = [self.cat.hom(xs.entries[slot], y) for slot, y in zip(index, ys.entries)]
                for components in iproduct(*pools):
                    out.append(ListArrow(xs, ys, index, components))
            cached = self._homs[(xs, ys)] = tuple(out)
        return cached

    def hom_size(self, xs: ListObject, ys: ListObject) -> int:
        """The hom cardinality, computed arithmetically without materializing."""
        n = len(xs.entries)
        total = 0
        for index in iproduct(range(n), repeat=len(ys.entries)):
            size = 1
            for slot, y in zip(index, ys.entries):
                size *= len(self.cat.hom(xs.entries[slot], y))
            total += size
        return total

    def projections(self, xs: ListObject, ys: ListObject) -> tuple[ListArrow, ...]:
        both = self.concat(xs, ys)
        n = len(xs.entries)
        p1 = ListArrow(
            both, xs, tuple(range(n)), tuple(self.cat.ident(x) for x in xs.entries)
        )
        p2 = ListArrow(
            both,
            ys,
            tuple(range(n, n + len(ys.entries))),
            tuple(self.cat.ident(y) for y in ys.entries),
        )
        return p1, p2

    def pairing(self, f: ListArrow, g: ListArrow) -> ListArrow:
        """The unique arrow into the concatenation with the given composites."""
        if f.source != g.source:
            raise InputError(f"pairing sources differ: {f.source.label()} vs {g.source.label()}")
        return ListArrow(
            f.source,
            self.concat(f.target, g.target),
            f.index + g.index,
            f.components + g.components,
        )


@dataclass(eq=False)
class Embedding:
    """The singleton-list functor from the base into the completion."""

    completion: ProductCompletion

    def obj(self, x: str) -> ListObject:
        return self.completion.obj((x,))

    def arr(self, f: str) -> ListArrow:
        cat = self.completion.cat
        if f not in cat.arrows:
            raise InputError(f"unknown arrow {f}")
        return ListArrow(self.obj(cat.src[f]), self.obj(cat.tgt[f]), (0,), (f,))


def product_completion(cat: FinCategory, bound: int = 3) -> tuple[ProductCompletion, Embedding]:
    """The truncated completion and its singleton embedding.

    Concatenation is a strict product whenever the combined length stays
    within the bound; the embedding is full and faithful on singletons
    but does not send weak products of the base to products of lists.
    """
    if bound < 1:
        raise InputError(f"bound {bound} must be at least 1")
    names = sorted(cat.objects)
    objects = [
        ListObject(entries)
        for n in range(1, bound + 1)
        for entries in iproduct(names, repeat=n)
    ]
    completion = ProductCompletion(cat, bound, tuple(objects))
    return completion, Embedding(completion)


@dataclass(eq=False)
class Strictification:
    """Proof-irrelevant class fibers over lists with mediated reindexing.

    Callers are expected to have run the biased checker on (doc, eq)
    first; nothing here re-validates the equality axioms.  Fibers and
    reindex maps are cached, and a list whose feet admit no internal
    witness cone stays usable as an object while every fiber access
    raises the recorded gap.
    """

    doc: Doctrine
    eq: EqualityAssignment
    completion: ProductCompletion
    embedding: Embedding
    _fibers: dict = field(default_factory=dict, repr=False)
    _reindex: dict = field(default_factory=dict, repr=False)
    _deltas: dict = field(default_factory=dict, repr=False)

    @property
    def bound(self) -> int:
        return self.completion.bound

    def fiber(self, xs: ListObject) -> StrictFiber:
        cached = self._fibers.get(xs)
        if isinstance(cached, ChartTooShallow):
            raise cached
        if cached is not None:
            return cached
        try:
            sf = strict_fiber(self.doc, self.eq, xs.entries)
        except ChartTooShallow as exc:
            self._fibers[xs] = exc
            raise
        self._fibers[xs] = sf
        return sf

    def classes(self, xs: ListObject):
        return self.fiber(xs).classes

    def delta(self, xs: ListObject) -> str:
        return delta_list(self, xs)

    def reindex(self, arr: ListArrow) -> MonotoneMap:
        cached = self._reindex.get(arr)
        if cached is None:
            cached = self._reindex[arr] = self._reindex_tables(arr)[0]
        return cached

    def reindex_agreement(self, arr: ListArrow) -> tuple[bool, str]:
        """Whether every connecting arrow induces the same class map."""
        maps = self._reindex_tables(arr)
        for other in maps[1:]:
            if other.table != maps[0].table:
                diff = next(c for c in maps[0].table if maps[0].table[c] != other.table[c])
                return False, f"connecting arrows disagree at class {diff}"
        return True, f"checked {len(maps)} connecting arrow(s)"

    def _reindex_tables(self, arr: ListArrow) -> list[MonotoneMap]:
        cat = self.doc.base
        src = self.fiber(arr.source)
        tgt = self.fiber(arr.target)
        w = src.canonical
        v = tgt.canonical
        composites = tuple(
            cat.comp(arr.components[i], w.legs[arr.index[i]]) for i in range(len(arr.index))
        )
        gs = _mediators(cat, w.apex, v, composites)
        if not gs:
            raise InputError(f"no connecting arrow between witness cones for {arr.label()}")
        reps = tgt.representatives[v]
        out = []
        for g in gs:
            table = {c: src.class_of(w, self.doc.apply(g, reps[c])) for c in tgt.classes.elements}
            out.append(MonotoneMap(tgt.classes, src.classes, table))
        return out


def strictification(doc: Doctrine, eq: EqualityAssignment, bound: int = 3) -> Strictification:
    """The class-fiber doctrine on the truncated completion of the base."""
    completion, embedding = product_completion(doc.base, bound)
    return Strictification(doc, eq, completion, embedding)


def delta_list(st: Strictification, feet) -> str:
    """The equality class of a list, living in the fiber over its doubling.

    Computed as the meet of equalities pulled along ties, once per
    internal doubling of the witness apex, and checked to land in a
    single class across all of them.
    """
    cp = st.completion
    xs = feet if isinstance(feet, ListObject) else cp.obj(tuple(feet))
    cached = st._deltas.get(xs)
    if cached is not None:
        return cached
    doubled_entries = xs.entries + xs.entries
    if len(doubled_entries) > cp.bound:
        raise InputError(f"doubled list for {xs.label()} exceeds bound {cp.bound}")
    sf2 = st.fiber(cp.obj(doubled_entries))
    w = st.fiber(xs).canonical
    cat = st.doc.base
    result: Optional[str] = None
    first = ""
    for doubling, _cls in enumerate_weak_products(cat, (w.apex, w.apex)):
        values = _conjunct_values(st.doc, st.eq, w, doubling)
        if not values:
            continue
        r1, r2 = doubling.legs
        legs = tuple(cat.comp(leg, r1) for leg in w.legs) + tuple(
            cat.comp(leg, r2) for leg in w.legs
        )
        cone = Cone(doubling.apex, doubled_entries, legs)
        for value in values:
            cls = sf2.class_of(cone, value)
            desc = f"doubling {doubling.label()} with conjunct {value}"
            if result is None:
                result = cls
                first = desc
            elif cls != result:
                raise InputError(
                    f"equality class disagrees across diagrams over {xs.label()}: "
                    f"{first} gives {result}, {desc} gives {cls}"
                )
    if result is None:
        raise ChartTooShallow(xs.label(), "internal proof-irrelevance diagram")
    st._deltas[xs] = result
    return result


def _product_algebra(cp: ProductCompletion, xs: ListObject, ys: ListObject) -> tuple[int, str]:
    """Count of verified pairing identities for one concatenation, or a witness."""
    p1, p2 = cp.projections(xs, ys)
    both = cp.concat(xs, ys)
    id_both = cp.ident(both)
    diag_like = cp.pairing(cp.ident(xs), cp.ident(xs)) if xs == ys else None
    checks: list[tuple[str, ListArrow, ListArrow]] = [
        ("<p1,p2> = id", cp.pairing(p1, p2), id_both),
    ]
    if diag_like is not None:
        checks.append(("p1 . <id,id> = id", cp.comp(p1, diag_like), cp.ident(xs)))
        checks.append(("p2 . <id,id> = id", cp.comp(p2, diag_like), cp.ident(xs)))
        swap = cp.pairing(p2, p1)
        checks.append(("swap . swap = id", cp.comp(swap, swap), id_both))
        for tag, h in (("swap", swap), ("<id,id> . p1", cp.comp(diag_like, p1))):
            rebuilt = cp.pairing(cp.comp(p1, h), cp.comp(p2, h))
            checks.append((f"{tag} rebuilds from its composites", rebuilt, h))
    for tag, got, want in checks:
        if got != want:
            return 0, tag
    return len(checks), ""


def _singleton_findings(st: Strictification) -> list[Finding]:
    """Embedding laws: fiber agreement, reindex agreement, functoriality."""
    cat = st.doc.base
    emb = st.embedding
    fs: list[Finding] = []

    reps_at_id: dict[str, dict[str, str]] = {}
    for x in sorted(cat.objects):
        sf = st.fiber(emb.obj(x))
        id_cone = Cone(x, (x,), (cat.ident(x),))
        reps = sf.representatives.get(id_cone)
        if reps is None:
            fs.append(Finding(FAIL, "singleton-fibers", x, "identity cone not indexed"))
            continue
        reps_at_id[x] = dict(reps)
        base = st.doc.fib(x)
        values = sorted(reps.values())
        if values != sorted(set(values)) or set(values) - set(base.elements):
            fs.append(Finding(FAIL, "singleton-fibers", x, "classes do not name base elements"))
            continue
        bad = ""
        for a in sf.classes.elements:
            for b in sf.classes.elements:
                if sf.classes.le(a, b) != base.le(reps[a], reps[b]):
                    bad = f"order mismatch at ({a}, {b})"
                    break
            if bad:
                break
        if bad:
            fs.append(Finding(FAIL, "singleton-fibers", x, bad))
        else:
            fs.append(
                Finding(PASS, "singleton-fibers", x, f"{len(sf.classes.elements)} class(es) match the base fiber")
            )

    tables = {f: st.reindex(emb.arr(f)).table for f in cat.arrows}
    witness = ""
    checked = 0
    for f in sorted(cat.arrows):
        x, y = cat.src[f], cat.tgt[f]
        if x not in reps_at_id or y not in reps_at_id:
            continue
        checked += 1
        rf = st.doc.rx(f).table
        for c, value in tables[f].items():
            if reps_at_id[x][value] != rf[reps_at_id[y][c]]:
                if not witness:
                    witness = f"witness f = {f} at class {c}"
    if witness:
        fs.append(Finding(FAIL, "singleton-reindex", "embedding", witness))
    else:
        fs.append(Finding(PASS, "singleton-reindex", "embedding", f"checked {checked} arrow(s)"))

    witness = ""
    pairs = 0
    for y in cat.objects:
        into = [f for x in cat.objects for f in cat.hom(x, y)]
        out = [g for z in cat.objects for g in cat.hom(y, z)]
        for f in into:
            tf = tables[f]
            for g in out:
                pairs += 1
                tg = tables[g]
                tgf = tables[cat.comp(g, f)]
                for c, value in tgf.items():
                    if tf[tg[c]] != value:
                        if not witness:
                            witness = f"witness g = {g}, f = {f}"
                        break
    if witness:
        fs.append(Finding(FAIL, "reindex-functoriality", "singleton embedding", witness))
    else:
        fs.append(
            Finding(PASS, "reindex-functoriality", "singleton embedding", f"checked {pairs} composable pair(s)")
        )
    return fs


def check_strictification(st: Strictification) -> Report:
    """Strict elementary laws on the truncation, with bound accounting.

    Mirrors the strict checker law for law on every list whose doubling
    stays within the bound, adds the box equality over concatenable
    pairs, and verifies reindex functoriality on the embedded base and
    the structural arrows.  Lists whose diagrams need more room are out
    of bound; lists whose feet outrun the chart are too shallow.
    """
    cp = st.completion
    bound = cp.bound
    fs: list[Finding] = list(_singleton_findings(st))

    half: list[ListObject] = []
    for xs in cp.objects:
        lbl = xs.label()
        pair_subject = f"({lbl}, {lbl})"
        if 2 * len(xs.entries) > bound:
            fs.append(
                Finding(OUT_OF_BOUND, "chosen-product", pair_subject, f"doubled list exceeds bound {bound}")
            )
            continue
        half.append(xs)
        count, bad = _product_algebra(cp, xs, xs)
        if bad:
            fs.append(Finding(FAIL, "chosen-product", pair_subject, f"identity {bad} broken"))
        else:
            fs.append(Finding(PASS, "chosen-product", pair_subject, f"checked {count} pairing identities"))

        try:
            lat_x = st.classes(xs)
            doubled = cp.concat(xs, xs)
            lat_d = st.classes(doubled)
            d_x = st.delta(xs)
        except ChartTooShallow as exc:
            fs.append(Finding(SHALLOW, "diagonal-reflexivity", lbl, exc.missing))
            continue
        p1, p2 = cp.projections(xs, xs)
        diag = cp.pairing(cp.ident(xs), cp.ident(xs))
        r1 = st.reindex(p1).table
        r2 = st.reindex(p2).table
        rd = st.reindex(diag).table

        refl_ok = lat_x.le(lat_x.top, rd[d_x])
        if refl_ok:
            fs.append(Finding(PASS, "diagonal-reflexivity", lbl, "checked 1 diagonal(s)"))
        else:
            fs.append(
                Finding(FAIL, "diagonal-reflexivity", lbl, f"top not below equality pulled along d={diag.label()}")
            )

        bad_a = [a for a in lat_x.elements if not lat_d.le(lat_d.meet_of(r1[a], d_x), r2[a])]
        if bad_a:
            fs.append(Finding(FAIL, "descent-completeness", lbl, f"witness alpha = {bad_a[0]}"))
        else:
            fs.append(
                Finding(PASS, "descent-completeness", lbl, f"all {len(lat_x.elements)} elements descend")
            )

        adj_ok = True
        witness = ""
        for a in lat_x.elements:
            ex_a = lat_d.meet_of(r1[a], d_x)
            for b in lat_d.elements:
                if lat_d.le(ex_a, b) != lat_x.le(a, rd[b]):
                    adj_ok = False
                    witness = f"d={diag.label()}, alpha={a}, beta={b}"
                    break
            if not adj_ok:
                break
        fs.append(
            Finding(PASS, "diagonal-adjunction", lbl, "checked 1 diagonal(s)")
            if adj_ok
            else Finding(FAIL, "diagonal-adjunction", lbl, witness)
        )

        cond_ok = refl_ok and not bad_a
        if adj_ok == cond_ok:
            fs.append(Finding(PASS, "routes-agree", lbl, ""))
        else:
            fs.append(Finding(FAIL, "routes-agree", lbl, f"adjunction route {adj_ok}, condition route {cond_ok}"))

        swap = cp.pairing(p2, p1)
        rs = st.reindex(swap).table
        got = rs[d_x]
        if got == d_x:
            fs.append(Finding(PASS, "transport-coherence", lbl, "checked 1 cone(s)"))
        else:
            fs.append(Finding(FAIL, "transport-coherence", lbl, f"swap transport sends {d_x} to {got}"))

        id_x = {a: a for a in lat_x.elements}
        id_d = {b: b for b in lat_d.elements}
        composites = [
            ("p1 . <id,id>", {c: rd[r1[c]] for c in lat_x.elements}, id_x),
            ("swap . swap", {c: rs[rs[c]] for c in lat_d.elements}, id_d),
            ("<p1,p2>", st.reindex(cp.pairing(p1, p2)).table, id_d),
            ("swap . <id,id>", {c: rd[rs[c]] for c in lat_d.elements}, rd),
        ]
        broken = next((tag for tag, got_t, want_t in composites if got_t != want_t), "")
        if broken:
            fs.append(Finding(FAIL, "reindex-functoriality", lbl, f"composite {broken} disagrees"))
        else:
            fs.append(Finding(PASS, "reindex-functoriality", lbl, f"checked {len(composites)} composite(s)"))

    for xs in half:
        for ys in half:
            subject = f"({xs.label()}, {ys.label()})"
            n, m = len(xs.entries), len(ys.entries)
            if 2 * (n + m) > bound:
                fs.append(
                    Finding(
                        OUT_OF_BOUND, "box-compatibility", subject, f"doubled concatenation exceeds bound {bound}"
                    )
                )
                continue
            try:
                d_x = st.delta(xs)
                d_y = st.delta(ys)
                zz = cp.concat(xs, ys)
                d_z = st.delta(zz)
                lat4 = st.classes(cp.concat(zz, zz))
            except ChartTooShallow as exc:
                fs.append(Finding(SHALLOW, "box-compatibility", subject, exc.missing))
                continue
            r1, r2 = cp.projections(zz, zz)
            q1, q2 = cp.projections(xs, ys)
            t1 = cp.pairing(cp.comp(q1, r1), cp.comp(q1, r2))
            t2 = cp.pairing(cp.comp(q2, r1), cp.comp(q2, r2))
            box = lat4.meet_of(st.reindex(t1).table[d_x], st.reindex(t2).table[d_y])
            if box == d_z:
                fs.append(Finding(PASS, "box-compatibility", subject, f"class {box}"))
            else:
                fs.append(Finding(FAIL, "box-compatibility", subject, f"box {box} vs delta {d_z}"))

    for xs in half:
        for ys in half:
            subject = f"({xs.label()}, {ys.label()})"
            n, m = len(xs.entries), len(ys.entries)
            if n + 2 * m > bound:
                fs.append(
                    Finding(OUT_OF_BOUND, "pair-adjunction", subject, f"augmented list exceeds bound {bound}")
                )
                continue
            try:
                zz = cp.concat(xs, ys)
                lat_t = st.classes(zz)
                d_y = st.delta(ys)
                big = cp.concat(zz, ys)
                lat_b = st.classes(big)
            except ChartTooShallow as exc:
                fs.append(Finding(SHALLOW, "pair-adjunction", subject, exc.missing))
                continue
            q1, q2 = cp.projections(xs, ys)
            e = cp.pairing(cp.ident(zz), q2)
            b1, b2 = cp.projections(zz, ys)
            a23 = cp.pairing(cp.comp(q2, b1), b2)
            re = st.reindex(e).table
            rp1 = st.reindex(b1).table
            dual = st.reindex(a23).table[d_y]
            bad = ""
            for a in lat_t.elements:
                ex_a = lat_b.meet_of(rp1[a], dual)
                for b in lat_b.elements:
                    if lat_b.le(ex_a, b) != lat_t.le(a, re[b]):
                        bad = f"e={e.label()}, alpha={a}, beta={b}"
                        break
                if bad:
                    break
            if bad:
                fs.append(Finding(FAIL, "pair-adjunction", subject, bad))
            else:
                fs.append(Finding(PASS, "pair-adjunction", subject, "checked 1 pairing choice(s)"))

    return report("strictification", fs)


def roundtrip_biased(strict_doc, embedding: Embedding) -> Report:
    """Pull a strict doctrine on lists back along the embedding and recheck.

    strict_doc needs classes/reindex/delta in the Strictification shape.
    The induced equality of every internal doubled cone is the delta of
    the singleton reindexed along the paired projections; when the input
    carries the equality it was built from, the two are compared per
    cone through the identity-cone representatives.
    """
    cp = embedding.completion
    cat = cp.cat
    if cp.bound < 2:
        raise InputError(f"bound {cp.bound} too small for the roundtrip, needs length-2 lists")

    fiber = {x: strict_doc.classes(embedding.obj(x)) for x in cat.objects}
    reindex = {f: strict_doc.reindex(embedding.arr(f)) for f in cat.arrows}
    pulled = Doctrine(cat, fiber, reindex)

    table = {}
    for x in sorted(cat.objects):
        for cone, _cls in enumerate_weak_products(cat, (x, x)):
            arr = cp.pairing(embedding.arr(cone.legs[0]), embedding.arr(cone.legs[1]))
            table[cone] = strict_doc.reindex(arr).table[strict_doc.delta(embedding.obj(x))]
    induced = EqualityAssignment(table)

    fs = list(check_biased_elementary(pulled, induced).findings)

    original = getattr(strict_doc, "eq", None)
    if original is not None:
        for cone in table:
            x = cone.feet[0]
            subject = f"{x} @ {cone.label()}"
            sf = strict_doc.fiber(embedding.obj(cone.apex))
            id_cone = Cone(cone.apex, (cone.apex,), (cat.ident(cone.apex),))
            reps = sf.representatives.get(id_cone)
            got = table[cone] if reps is None else reps[table[cone]]
            want = original.value(cone)
            if got == want:
                fs.append(Finding(PASS, "induced-equality", subject, f"both give {want}"))
            else:
                fs.append(Finding(FAIL, "induced-equality", subject, f"induced {got} vs original {want}"))
    return report("roundtrip-biased", fs)


def _quantifier_pairs(st: Strictification):
    """Concatenation splits with all three fibers available, plus gap findings."""
    cp = st.completion
    usable = []
    gaps: list[Finding] = []
    for xs in cp.objects:
        for ys in cp.objects:
            if len(xs.entries) + len(ys.entries) > cp.bound:
                continue
            subject = f"({xs.label()}, {ys.label()})"
            try:
                st.fiber(xs)
                st.fiber(ys)
                st.fiber(cp.concat(xs, ys))
            except ChartTooShallow as exc:
                gaps.append(Finding(SHALLOW, "proof-irrelevance", subject, exc.missing))
                continue
            usable.append((xs, ys, subject))
    return usable, gaps


def _completion_quantifier_report(st: Strictification, side: str) -> Report:
    cp = st.completion
    cat = st.doc.base
    hand = "left" if side == "existential" else "right"
    adjoint = left_adjoint if side == "existential" else right_adjoint
    law = f"{hand}-adjoint"
    usable, fs = _quantifier_pairs(st)

    adj: dict[tuple[ListObject, ListObject, int], Optional[MonotoneMap]] = {}
    for xs, ys, subject in usable:
        projections = cp.projections(xs, ys)
        for i, proj in enumerate(projections):
            a = adjoint(st.reindex(proj))
            adj[(xs, ys, i)] = a
            label = f"p{i + 1} of {subject}"
            if a is None:
                fs.append(Finding(FAIL, law, label, f"no {hand} adjoint"))
            else:
                fs.append(Finding(PASS, law, label, ""))

    singletons = {(x,): x for x in cat.objects}
    for xs, ys, subject in usable:
        a_p = adj[(xs, ys, 1)]
        if a_p is None:
            fs.append(Finding(PREMISE_FAILURE, "beck-chevalley", subject, "no adjoint along p2"))
            continue
        lat_z = st.classes(cp.concat(xs, ys))
        checked = 0
        skipped = 0
        witness = ""
        y = singletons.get(ys.entries)
        if y is not None:
            for ws, ys2, _subject2 in usable:
                if ws != xs:
                    continue
                w = singletons.get(ys2.entries)
                if w is None:
                    continue
                a_pp = adj.get((xs, ys2, 1))
                for f in cat.hom(w, y):
                    if a_pp is None:
                        skipped += 1
                        continue
                    n = len(xs.entries)
                    g = cp.arrow(
                        cp.concat(xs, ys2),
                        cp.concat(xs, ys),
                        tuple(range(n)) + (n,),
                        tuple(cat.ident(x) for x in xs.entries) + (f,),
                    )
                    rg = st.reindex(g).table
                    rf = st.reindex(st.embedding.arr(f)).table
                    for a in lat_z.elements:
                        checked += 1
                        if not witness and a_pp.table[rg[a]] != rf[a_p.table[a]]:
                            witness = f"f = {f}, g = {g.label()}, alpha = {a}"
        detail = f"checked {checked} square(s)"
        if skipped:
            detail += f", skipped {skipped} lacking adjoints"
        if checked == 0:
            fs.append(Finding(VACUOUS, "beck-chevalley", subject, "no internal square"))
        elif witness:
            fs.append(Finding(FAIL, "beck-chevalley", subject, witness))
        else:
            fs.append(Finding(PASS, "beck-chevalley", subject, detail))

    if side == "existential":
        for xs, ys, subject in usable:
            lat_z = st.classes(cp.concat(xs, ys))
            for i, foot in enumerate((xs, ys)):
                label = f"p{i + 1} of {subject}"
                a_i = adj[(xs, ys, i)]
                if a_i is None:
                    fs.append(Finding(PREMISE_FAILURE, "frobenius", label, "no left adjoint"))
                    continue
                lat_f = st.classes(foot)
                ri = st.reindex(cp.projections(xs, ys)[i]).table
                witness = ""
                checked = 0
                for a in lat_f.elements:
                    for b in lat_z.elements:
                        checked += 1
                        lhs = a_i.table[lat_z.meet_of(ri[a], b)]
                        rhs = lat_f.meet_of(a, a_i.table[b])
                        if not witness and lhs != rhs:
                            witness = f"alpha = {a}, beta = {b}"
                if witness:
                    fs.append(Finding(FAIL, "frobenius", label, witness))
                else:
                    fs.append(Finding(PASS, "frobenius", label, f"checked {checked} pair(s)"))

    return report(f"completion-{side}", fs)


def completion_existential_report(st: Strictification) -> Report:
    """Left adjoints, Beck-Chevalley, and Frobenius along concatenation projections."""
    return _completion_quantifier_report(st, "existential")


def completion_universal_report(st: Strictification) -> Report:
    """Right adjoints and the dual Beck-Chevalley along concatenation projections."""
    return _completion_quantifier_report(st, "universal")


def existential_transfer(doc: Doctrine, eq: EqualityAssignment, st: Strictification) -> Report:
    """Whether each quantifier verdict agrees between the base and the truncation.

    When both sides reject, the sets of failure witnesses are compared
    as well; subjects differ across the two presentations, so matching
    is on the witness details.
    """
    sides = (
        ("existential", existential_report(doc, eq), completion_existential_report(st)),
        ("universal", universal_report(doc, eq), completion_universal_report(st)),
    )
    fs: list[Finding] = []
    for name, base, trunc in sides:
        agree = base.passed == trunc.passed
        detail = (
            f"base {'passes' if base.passed else 'fails'}, "
            f"truncation {'passes' if trunc.passed else 'fails'}"
        )
        fs.append(Finding(PASS if agree else FAIL, f"{name}-agreement", "base vs truncation", detail))
        if not base.passed and not trunc.passed:
            bw = sorted({f.detail for f in base.findings if f.verdict == FAIL and f.detail})
            tw = sorted({f.detail for f in trunc.findings if f.verdict == FAIL and f.detail})
            if bw == tw:
                fs.append(Finding(PASS, f"{name}-witnesses", "base vs truncation", "; ".join(bw)))
            else:
                fs.append(
                    Finding(
                        FAIL,
                        f"{name}-witnesses",
                        "base vs truncation",
                        f"base {bw} vs truncation {tw}",
                    )
                )
    return report("existential-transfer", fs)
