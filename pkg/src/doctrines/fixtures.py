"""Fixture charts and the worked doctrine examples.

Charts carved out of finite sets carry their point tables, so subset
fibers, images and preimages stay cheap table lookups.  On top of those
this module builds the two doctrine families used across the tests
(subset fibers with preimage reindexing, weak-subobject fibers with
weak-pullback reindexing), the correspondence between pseudo equivalence
relations and relation classes, the comparison functors between weak
subobjects of a weak product and cone classes, and a direct completion
whose objects are the internal pseudo equivalence relations.

Weak-subobject fibers come in two implementations.  A FinSetChart gets
the image route: classes are image subsets, reindexing is preimage, both
read off the point tables.  A bare FinCategory gets the generic route:
poset reflection of each slice, reindexing through an internal weak
pullback choice that is checked to be choice-independent.  The image
route is the only one that scales to the four-object finite-set chart;
the tests compare the two on small objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Optional, Union

from .doctrine import Doctrine, EqualityAssignment
from .fincat import (
    STRICT,
    Cone,
    FinCategory,
    category,
    enumerate_weak_products,
    enumerate_weak_pullbacks,
    iter_cones,
    poset_reflection,
    slice_category,
)
from .order import (
    FinitePoset,
    InfSemilattice,
    MonotoneMap,
    identity_map,
    powerset_semilattice,
    semilattice,
    subset_name,
)
from .report import ChartTooShallow, InputError


@dataclass(eq=False)
class FinSetChart:
    """A chart of honest finite sets: every arrow carries its point table."""

    cat: FinCategory
    points: Mapping[str, tuple[str, ...]]
    maps: Mapping[str, Mapping[str, str]]

    def image(self, arrow: str) -> frozenset[str]:
        table = self.maps[arrow]
        return frozenset(table[p] for p in self.points[self.cat.src[arrow]])


ChartLike = Union[FinSetChart, FinCategory]


def _cat_of(chart: ChartLike) -> FinCategory:
    return chart.cat if isinstance(chart, FinSetChart) else chart


def finset_chart(sizes: Mapping[str, int]) -> FinSetChart:
    """The full subcategory of finite sets on named objects of the given sizes.

    Points of an object O are named o0, o1, ... and the arrow realizing a
    function is named "X>Y:" plus the indices of the images of the
    successive source points, so arrow names are collision-free.  The
    build recounts its own arrows against the closed form sum of
    |Y| ** |X| and refuses to hand out a chart that missed one.
    """
    objects = sorted(sizes)
    for o in objects:
        if sizes[o] < 0:
            raise InputError(f"negative size for {o}")
    points = {o: tuple(f"{o.lower()}{i}" for i in range(sizes[o])) for o in objects}
    index = {o: {p: i for i, p in enumerate(points[o])} for o in objects}
    sep = {o: ("," if sizes[o] > 10 else "") for o in objects}

    arrows: list[str] = []
    src: dict[str, str] = {}
    tgt: dict[str, str] = {}
    maps: dict[str, dict[str, str]] = {}
    name_of: dict[tuple[str, str, tuple[str, ...]], str] = {}
    for x in objects:
        for y in objects:
            for images in product(points[y], repeat=len(points[x])):
                code = sep[y].join(str(index[y][p]) for p in images)
                name = f"{x}>{y}:{code}"
                arrows.append(name)
                src[name], tgt[name] = x, y
                maps[name] = dict(zip(points[x], images))
                name_of[(x, y, images)] = name
    assert len(arrows) == sum(sizes[y] ** sizes[x] for x in objects for y in objects)

    identities = {
        o: name_of[(o, o, points[o])]
        for o in objects
    }
    compose: dict[tuple[str, str], str] = {}
    by_pair: dict[tuple[str, str], list[str]] = {}
    for a in arrows:
        by_pair.setdefault((src[a], tgt[a]), []).append(a)
    for (x, y), fs in by_pair.items():
        for (y2, z), gs in by_pair.items():
            if y2 != y:
                continue
            for f in fs:
                for g in gs:
                    images = tuple(maps[g][maps[f][p]] for p in points[x])
                    compose[(g, f)] = name_of[(x, z, images)]
    cat = category(objects, arrows, src, tgt, identities, compose)
    return FinSetChart(cat, points, maps)


def terminal_chart() -> FinSetChart:
    return finset_chart({"1": 1})


def chart3() -> FinSetChart:
    """The finite-set chart on objects of sizes 0, 1, 2 and 4."""
    return finset_chart({"0": 0, "1": 1, "B": 2, "Q": 4})


def _thin_category(objects: Iterable[str], order: Iterable[tuple[str, str]]) -> FinCategory:
    """The category of a preorder: one arrow per related pair."""
    objs = sorted(set(objects))
    rel = set(order) | {(o, o) for o in objs}
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    names = {(a, b): (f"i{a}" if a == b else f"{a}>{b}") for a, b in rel}
    src = {n: a for (a, b), n in names.items()}
    tgt = {n: b for (a, b), n in names.items()}
    identities = {o: names[(o, o)] for o in objs}
    compose = {}
    for (a, b), f in names.items():
        for (b2, c), g in names.items():
            if b2 == b:
                compose[(g, f)] = names[(a, c)]
    return category(objs, sorted(names.values()), src, tgt, identities, compose)


def preorder_dup_chart() -> FinCategory:
    """A four-point preorder whose two bottom points are isomorphic duplicates.

    Both bottom points are weak products of the two top points, so weak
    product cones over that pair of feet exist twice over.
    """
    return _thin_category(
        ("x", "x2", "y", "z"),
        (("x", "x2"), ("x2", "x"), ("x", "y"), ("x", "z"), ("x2", "y"), ("x2", "z")),
    )


def subset_doctrine(chart: FinSetChart) -> Doctrine:
    """Full powerset fibers over the point sets; reindexing is preimage."""
    cat = chart.cat
    fiber: dict[str, InfSemilattice] = {}
    decode: dict[str, Mapping[str, frozenset[str]]] = {}
    for o in cat.objects:
        fiber[o], decode[o] = powerset_semilattice(chart.points[o])
    reindex: dict[str, MonotoneMap] = {}
    for a in cat.arrows:
        x, y = cat.src[a], cat.tgt[a]
        table = {
            name: subset_name(p for p in chart.points[x] if chart.maps[a][p] in members)
            for name, members in decode[y].items()
        }
        reindex[a] = MonotoneMap(fiber[y], fiber[x], table)
    return Doctrine(cat, fiber, reindex)


def equalizer_equality(chart: FinSetChart) -> EqualityAssignment:
    """Equality element per doubled cone: the points where the two legs agree."""
    cat = chart.cat
    table: dict[Cone, str] = {}
    for x in cat.objects:
        for cone, _kind in enumerate_weak_products(cat, (x, x)):
            l1, l2 = cone.legs
            table[cone] = subset_name(
                w for w in chart.points[cone.apex]
                if chart.maps[l1][w] == chart.maps[l2][w]
            )
    return EqualityAssignment(table)


def subobjects(chart: ChartLike) -> Doctrine:
    """Subobject fibers with reindexing by pullback.

    On a finite-set chart the subobjects are the subsets and reindexing is
    preimage.  On a bare category the fibers are classes of internal monos
    ordered by factorization; reindexing and meets then need internal
    strict pullbacks and their absence is an error, not a guess.
    """
    if isinstance(chart, FinSetChart):
        return subset_doctrine(chart)
    return _mono_subobjects(chart)


def _is_mono(cat: FinCategory, m: str) -> bool:
    s = cat.src[m]
    for z in cat.objects:
        seen: dict[str, str] = {}
        for u in cat.hom(z, s):
            c = cat.comp(m, u)
            if seen.setdefault(c, u) != u:
                return False
    return True


def _mono_subobjects(cat: FinCategory) -> Doctrine:
    monos: dict[str, list[str]] = {x: [] for x in cat.objects}
    for m in cat.arrows:
        if _is_mono(cat, m):
            monos[cat.tgt[m]].append(m)

    def factors(m1: str, m2: str) -> bool:
        return any(cat.comp(m2, k) == m1 for k in cat.hom(cat.src[m1], cat.src[m2]))

    fiber: dict[str, InfSemilattice] = {}
    class_of: dict[str, dict[str, str]] = {}
    for x in cat.objects:
        ms = monos[x]
        reps = {m: "[" + min(n for n in ms if factors(m, n) and factors(n, m)) + "]" for m in ms}
        elements = sorted(set(reps.values()))
        leq = {(reps[m], reps[n]) for m in ms for n in ms if factors(m, n)}
        pos = FinitePoset(tuple(elements), frozenset(leq))
        for i, a in enumerate(elements):
            for b in elements[i:]:
                if pos.glb_opt((a, b)) is None:
                    raise InputError(f"missing pullback: no meet of {a} and {b} in subobjects of {x}")
        fiber[x] = semilattice(elements, leq, top=reps[cat.ident(x)])
        class_of[x] = reps

    reindex: dict[str, MonotoneMap] = {}
    for a in cat.arrows:
        x, y = cat.src[a], cat.tgt[a]
        table: dict[str, str] = {}
        for m in monos[y]:
            pulls = [c for c, kind in enumerate_weak_pullbacks(cat, a, m) if kind == STRICT]
            if not pulls:
                raise InputError(f"missing pullback of {m} along {a}")
            got = {class_of[x][c.legs[0]] for c in pulls}
            if len(got) > 1:
                raise InputError(f"pullbacks of {m} along {a} land in different classes: " + ", ".join(sorted(got)))
            cls = got.pop()
            key = class_of[y][m]
            if table.setdefault(key, cls) != cls:
                raise InputError(f"reindexing along {a} is not constant on the class {key}")
        reindex[a] = MonotoneMap(fiber[y], fiber[x], table)
    return Doctrine(cat, fiber, reindex)


def weak_subobjects(chart: ChartLike) -> tuple[Doctrine, EqualityAssignment]:
    """Weak-subobject fibers with a weak equalizer class as equality.

    Fibers are arrows-into-the-object up to mutual factorization; the
    reindexing of a class along an arrow is the class of a weak pullback
    leg.  The finite-set route represents a class by its image subset and
    reindexes by preimage; the generic route enumerates internal weak
    pullbacks and insists every choice lands in the same class.  Both
    raise when the chart is missing a meet, a weak pullback or a weak
    equalizer the doctrine needs.
    """
    if isinstance(chart, FinSetChart):
        return _psi_finset(chart)
    return _psi_generic(chart)


def _psi_finset(chart: FinSetChart) -> tuple[Doctrine, EqualityAssignment]:
    cat = chart.cat
    images: dict[str, dict[str, frozenset[str]]] = {}
    for x in cat.objects:
        fam = {}
        for f in cat.arrows:
            if cat.tgt[f] == x:
                im = chart.image(f)
                fam[subset_name(im)] = im
        images[x] = fam

    fiber: dict[str, InfSemilattice] = {}
    for x in cat.objects:
        fam = images[x]
        names = sorted(fam)
        for i, a in enumerate(names):
            for b in names[i:]:
                inter = fam[a] & fam[b]
                cands = [k for k in names if fam[k] <= inter]
                if not any(all(fam[c] <= fam[k] for c in cands) for k in cands):
                    raise ChartTooShallow(f"{x}: {a} and {b}", "image realizing the meet")
        leq = [(a, b) for a in names for b in names if fam[a] <= fam[b]]
        fiber[x] = semilattice(names, leq, top=subset_name(chart.points[x]))

    reindex: dict[str, MonotoneMap] = {}
    for a in cat.arrows:
        x, y = cat.src[a], cat.tgt[a]
        table = {}
        for name, members in images[y].items():
            pre = subset_name(p for p in chart.points[x] if chart.maps[a][p] in members)
            if pre not in images[x]:
                raise ChartTooShallow(f"{a} on {name}", "image realizing the preimage")
            table[name] = pre
        reindex[a] = MonotoneMap(fiber[y], fiber[x], table)

    eq_table: dict[Cone, str] = {}
    for x in cat.objects:
        for cone, _kind in enumerate_weak_products(cat, (x, x)):
            l1, l2 = cone.legs
            agree = subset_name(
                w for w in chart.points[cone.apex]
                if chart.maps[l1][w] == chart.maps[l2][w]
            )
            if agree not in images[cone.apex]:
                raise ChartTooShallow(cone.label(), "arrow realizing the agreement points")
            eq_table[cone] = agree
    return Doctrine(cat, fiber, reindex), EqualityAssignment(eq_table)


def _psi_generic(cat: FinCategory) -> tuple[Doctrine, EqualityAssignment]:
    fiber: dict[str, InfSemilattice] = {}
    rep_of: dict[str, Mapping[str, str]] = {}
    for x in cat.objects:
        sliced, _forget = slice_category(cat, x)
        pos, rep = poset_reflection(sliced)
        rep_of[x] = rep
        for i, a in enumerate(pos.elements):
            for b in pos.elements[i:]:
                if pos.glb_opt((a, b)) is None:
                    raise ChartTooShallow(f"{x}: {a} and {b}", "weak pullback giving the meet")
        fiber[x] = semilattice(pos.elements, pos.leq, top=rep[cat.ident(x)])

    reindex: dict[str, MonotoneMap] = {}
    for a in cat.arrows:
        x, y = cat.src[a], cat.tgt[a]
        table: dict[str, str] = {}
        for g in cat.arrows:
            if cat.tgt[g] != y:
                continue
            pulls = enumerate_weak_pullbacks(cat, a, g)
            if not pulls:
                raise ChartTooShallow(f"{g} along {a}", "internal weak pullback")
            got = {rep_of[x][cone.legs[0]] for cone, _kind in pulls}
            if len(got) > 1:
                raise InputError(
                    f"weak pullbacks of {g} along {a} land in different classes: " + ", ".join(sorted(got))
                )
            cls = got.pop()
            key = rep_of[y][g]
            if table.setdefault(key, cls) != cls:
                raise InputError(f"reindexing along {a} is not constant on the class {key}")
        reindex[a] = MonotoneMap(fiber[y], fiber[x], table)

    eq_table: dict[Cone, str] = {}
    for x in cat.objects:
        for cone, _kind in enumerate_weak_products(cat, (x, x)):
            l1, l2 = cone.legs
            w = cone.apex
            cands = [e for e in cat.arrows if cat.tgt[e] == w and cat.comp(l1, e) == cat.comp(l2, e)]
            universal = [
                e for e in cands
                if all(
                    any(cat.comp(e, k) == h for k in cat.hom(cat.src[h], cat.src[e]))
                    for h in cands
                )
            ]
            if not universal:
                raise ChartTooShallow(cone.label(), "internal weak equalizer")
            got = {rep_of[w][e] for e in universal}
            if len(got) > 1:
                raise InputError(f"weak equalizers at {cone.label()} land in different classes")
            eq_table[cone] = got.pop()
    return Doctrine(cat, fiber, reindex), EqualityAssignment(eq_table)


def weak_subobject_class(chart: ChartLike, arrow: str) -> str:
    """The weak-subobject fiber element named by an arrow into its target."""
    if isinstance(chart, FinSetChart):
        return subset_name(chart.image(arrow))
    sliced, _forget = slice_category(chart, chart.tgt[arrow])
    _pos, rep = poset_reflection(sliced)
    return rep[arrow]


def weak_subobject_witness(chart: ChartLike, obj: str, elem: str) -> str:
    """Some internal arrow into obj whose weak-subobject class is elem."""
    cat = _cat_of(chart)
    if isinstance(chart, FinSetChart):
        for f in cat.arrows:
            if cat.tgt[f] == obj and subset_name(chart.image(f)) == elem:
                return f
        raise InputError(f"no arrow into {obj} has image {elem}")
    sliced, _forget = slice_category(chart, obj)
    _pos, rep = poset_reflection(sliced)
    for f in cat.arrows:
        if cat.tgt[f] == obj and rep[f] == elem:
            return f
    raise InputError(f"no arrow into {obj} is in the class {elem}")


TRIV = "TRIV"
CHAIN2 = "CHAIN2"
CHART3 = "CHART3"
PREORDER_DUP = "PREORDER-DUP"
NOCOMP = "NOCOMP"
FIXTURE_NAMES = (TRIV, CHAIN2, CHART3, PREORDER_DUP, NOCOMP)


def build_fixture(name: str) -> tuple[FinCategory, Optional[Doctrine], Optional[EqualityAssignment]]:
    """A named base chart, with its doctrine and equality data when it has one.

    TRIV is the one-object chart with a one-element fiber, CHAIN2 the same
    chart with a two-chain fiber, CHART3 the finite-set chart with subset
    fibers, PREORDER-DUP a bare preorder whose weak products come in
    isomorphic duplicates, and NOCOMP a subset doctrine on a chart with no
    empty object, so comprehensions are not full.
    """
    if name == TRIV:
        cat = terminal_chart().cat
        one = semilattice(("top",), [("top", "top")])
        doc = Doctrine(cat, {"1": one}, {cat.ident("1"): identity_map(one)})
        cone = enumerate_weak_products(cat, ("1", "1"))[0][0]
        return cat, doc, EqualityAssignment({cone: "top"})
    if name == CHAIN2:
        cat = terminal_chart().cat
        chain = semilattice(
            ("bot", "top"),
            [("bot", "bot"), ("bot", "top"), ("top", "top")],
        )
        doc = Doctrine(cat, {"1": chain}, {cat.ident("1"): identity_map(chain)})
        cone = enumerate_weak_products(cat, ("1", "1"))[0][0]
        return cat, doc, EqualityAssignment({cone: "top"})
    if name == CHART3:
        chart = chart3()
        return chart.cat, subset_doctrine(chart), equalizer_equality(chart)
    if name == PREORDER_DUP:
        return preorder_dup_chart(), None, None
    if name == NOCOMP:
        chart = finset_chart({"1": 1, "B": 2})
        return chart.cat, subset_doctrine(chart), equalizer_equality(chart)
    raise InputError(f"unknown fixture: {name}")


def nonexistential_fixture() -> tuple[FinCategory, Doctrine, EqualityAssignment]:
    """A doctrine that is biased elementary but fails the existential laws.

    The base is one foot object with a strict product of it with itself
    and no other weak products.  The fiber over the product apex is a
    five-element lattice whose three middle elements meet pairwise to the
    bottom; both projections reindex the three-chain over the foot onto
    the same chain inside it, so every equality axiom holds.  The left
    adjoint along a projection exists, as it must over finite fibers, but
    it sends the meet of two incomparable middle elements strictly below
    the corresponding meet of its values, so the frobenius law fails with
    a two-element witness.
    """
    objects = ("W", "X")
    src = {
        "idX": "X", "d": "X",
        "idW": "W", "s": "W", "e1": "W", "e2": "W", "p1": "W", "p2": "W",
    }
    tgt = {
        "idX": "X", "p1": "X", "p2": "X",
        "idW": "W", "s": "W", "e1": "W", "e2": "W", "d": "W",
    }
    arrows = tuple(sorted(src))
    identities = {"X": "idX", "W": "idW"}
    compose: dict[tuple[str, str], str] = {}
    w_endo = ("idW", "s", "e1", "e2")
    # composites with an identity on either side
    for a in arrows:
        compose[(a, identities[src[a]])] = a
        compose[(identities[tgt[a]], a)] = a
    # d splits both projections and absorbs every endo of W
    compose[("p1", "d")] = "idX"
    compose[("p2", "d")] = "idX"
    for m in ("s", "e1", "e2"):
        compose[(m, "d")] = "d"
    compose[("d", "p1")] = "e1"
    compose[("d", "p2")] = "e2"
    # projections read through the endos
    compose[("p1", "s")] = "p2"
    compose[("p2", "s")] = "p1"
    for p in ("p1", "p2"):
        compose[(p, "e1")] = "p1"
        compose[(p, "e2")] = "p2"
    # endo composition: s is an involution fixing the diagonal retracts
    compose[("s", "s")] = "idW"
    compose[("s", "e1")] = "e1"
    compose[("s", "e2")] = "e2"
    compose[("e1", "s")] = "e2"
    compose[("e2", "s")] = "e1"
    for i in ("e1", "e2"):
        for j in ("e1", "e2"):
            compose[(i, j)] = j
    cat = category(objects, arrows, src, tgt, identities, compose)

    chain = semilattice(
        ("0", "m", "1"),
        [("0", "0"), ("0", "m"), ("0", "1"), ("m", "m"), ("m", "1"), ("1", "1")],
    )
    mids = ("a", "b", "c")
    diamond = semilattice(
        ("bot",) + mids + ("top",),
        [("bot", e) for e in ("bot",) + mids + ("top",)]
        + [(m, m) for m in mids]
        + [(m, "top") for m in mids]
        + [("top", "top")],
    )
    fiber = {"X": chain, "W": diamond}
    proj = {"1": "top", "m": "a", "0": "bot"}
    down = {"top": "1", "a": "m", "b": "0", "c": "0", "bot": "0"}
    swap = {"top": "top", "a": "a", "b": "c", "c": "b", "bot": "bot"}
    collapse = {"top": "top", "a": "a", "b": "bot", "c": "bot", "bot": "bot"}
    reindex = {
        "idX": identity_map(chain),
        "idW": identity_map(diamond),
        "d": MonotoneMap(diamond, chain, down),
        "p1": MonotoneMap(chain, diamond, proj),
        "p2": MonotoneMap(chain, diamond, dict(proj)),
        "s": MonotoneMap(diamond, diamond, swap),
        "e1": MonotoneMap(diamond, diamond, collapse),
        "e2": MonotoneMap(diamond, diamond, dict(collapse)),
    }
    doc = Doctrine(cat, fiber, reindex)
    eq = EqualityAssignment({
        Cone("W", ("X", "X"), ("p1", "p2")): "top",
        Cone("W", ("X", "X"), ("p2", "p1")): "top",
    })
    return cat, doc, eq


@dataclass(frozen=True)
class Per:
    """A pseudo equivalence relation presented by a parallel pair into its carrier."""

    carrier: str
    r1: str
    r2: str

    def label(self) -> str:
        return f"({self.carrier}; {self.r1}, {self.r2})"


def validate_per(cat: FinCategory, per: Per) -> list[str]:
    """Diagnostics for the three relation axioms, witnessed by internal arrows.

    Transitivity quantifies over every internal weak pullback of the legs;
    a chart with none leaves it unchecked rather than failed.
    """
    aset = set(cat.arrows)
    for r in (per.r1, per.r2):
        if r not in aset:
            return [f"unknown-arrow: {r}"]
    diags = []
    if cat.src[per.r1] != cat.src[per.r2]:
        diags.append("legs-not-parallel")
    if cat.tgt[per.r1] != per.carrier or cat.tgt[per.r2] != per.carrier:
        diags.append("legs-not-into-carrier")
    if diags:
        return diags
    rel_obj = cat.src[per.r1]
    idx = cat.ident(per.carrier)
    if not any(
        cat.comp(per.r1, d) == idx and cat.comp(per.r2, d) == idx
        for d in cat.hom(per.carrier, rel_obj)
    ):
        diags.append("missing-reflexivity-witness")
    if not any(
        cat.comp(per.r1, s) == per.r2 and cat.comp(per.r2, s) == per.r1
        for s in cat.hom(rel_obj, rel_obj)
    ):
        diags.append("missing-symmetry-witness")
    if diags:
        return diags
    for cone, _kind in enumerate_weak_pullbacks(cat, per.r2, per.r1):
        u, v = cone.legs
        ok = any(
            cat.comp(per.r1, t) == cat.comp(per.r1, u)
            and cat.comp(per.r2, t) == cat.comp(per.r2, v)
            for t in cat.hom(cone.apex, rel_obj)
        )
        if not ok:
            diags.append(f"missing-transitivity-witness: {cone.label()}")
    return diags


def enumerate_pers(cat: FinCategory) -> list[Per]:
    """All internal pers over carriers whose doubled weak product is internal.

    Carriers without an internal doubled weak product are skipped: their
    relations have no fiber to live in on the completion side, so they
    would only pad this census with objects nothing can compare.
    """
    out = []
    for x in cat.objects:
        if not enumerate_weak_products(cat, (x, x)):
            continue
        for rel_obj in cat.objects:
            if not cat.hom(x, rel_obj):
                continue
            for r1 in cat.hom(rel_obj, x):
                for r2 in cat.hom(rel_obj, x):
                    per = Per(x, r1, r2)
                    if not validate_per(cat, per):
                        out.append(per)
    return out


def per_to_rel(chart: ChartLike, per: Per, psi=None):
    """The relation class of a per over the weak-subobject doctrine.

    Pass a prebuilt (doctrine, equality) pair as psi to skip rebuilding
    it.  The pair of legs is read as an element over whichever indexed
    doubled cone admits a pairing arrow for it.
    """
    from .irrelevance import strict_fiber
    from .quotient import PEquivRel

    cat = _cat_of(chart)
    diags = validate_per(cat, per)
    if diags:
        raise InputError(f"invalid per {per.label()}: " + "; ".join(diags))
    doc, eq = psi if psi is not None else weak_subobjects(chart)
    sf = strict_fiber(doc, eq, (per.carrier, per.carrier))
    rel_obj = cat.src[per.r1]
    for cone in sf.cones:
        for h in cat.hom(rel_obj, cone.apex):
            if cat.comp(cone.legs[0], h) == per.r1 and cat.comp(cone.legs[1], h) == per.r2:
                elem = weak_subobject_class(chart, h)
                return PEquivRel(per.carrier, sf, sf.class_of(cone, elem))
    raise ChartTooShallow(per.label(), "pairing arrow into an indexed doubled cone")


def rel_to_per(chart: ChartLike, rel) -> Per:
    """A per presenting a relation class: a witness postcomposed with the legs."""
    cat = _cat_of(chart)
    cone = rel.fiber.canonical
    elem = rel.fiber.representatives[cone][rel.relation]
    r = weak_subobject_witness(chart, cone.apex, elem)
    return Per(rel.carrier, cat.comp(cone.legs[0], r), cat.comp(cone.legs[1], r))


@dataclass(eq=False)
class ConeFunctors:
    """Comparison between weak subobjects of a weak product and cone classes.

    u sends a proof-irrelevant class (named on the canonical cone) to the
    class of the cone made of its witness postcomposed with the legs; m
    sends a cone class to the class of a mediating arrow into the product.
    Membership in u is the proof-irrelevance gate: an element outside the
    classes is simply not a key, not an error.
    """

    feet: tuple[str, ...]
    product: Cone
    cone_classes: FinitePoset
    class_of_cone: Mapping[Cone, str]
    u: Mapping[str, str]
    m: Mapping[str, str]


def cone_functors(chart: ChartLike, feet: Iterable[str]) -> ConeFunctors:
    """The two comparison maps over the given feet, verified mutually inverse.

    Needs an internal weak product of the feet; the proof-irrelevant
    classes are computed on its strict fiber, so the canonical cone there
    is the product used.  Raises when a round trip misses or the
    comparison fails to be an order isomorphism.
    """
    from .irrelevance import strict_fiber

    cat = _cat_of(chart)
    feet = tuple(feet)
    doc, eq = weak_subobjects(chart)
    sf = strict_fiber(doc, eq, feet)
    prod = sf.canonical

    cones = list(iter_cones(cat, feet))
    reach: dict[Cone, dict[str, set[tuple[str, ...]]]] = {}
    for c in cones:
        reach[c] = {
            z: {
                tuple(cat.comp(leg, h) for leg in c.legs)
                for h in cat.hom(z, c.apex)
            }
            for z in cat.objects
        }

    def below(c: Cone, d: Cone) -> bool:
        return c.legs in reach[d][c.apex]

    reps: dict[Cone, str] = {}
    for c in cones:
        rep = min(d.label() for d in cones if below(c, d) and below(d, c))
        reps[c] = f"[{rep}]"
    names = sorted(set(reps.values()))
    leq = frozenset(
        (reps[c], reps[d]) for c in cones for d in cones if below(c, d)
    )
    classes = FinitePoset(tuple(names), leq)

    u: dict[str, str] = {}
    for cls in sf.classes.elements:
        f = weak_subobject_witness(chart, prod.apex, sf.representatives[prod][cls])
        cone_u = Cone(cat.src[f], feet, tuple(cat.comp(leg, f) for leg in prod.legs))
        u[cls] = reps[cone_u]
    m: dict[str, str] = {}
    for name in names:
        c = min((c for c in cones if reps[c] == name), key=lambda c: c.label())
        hs = [
            h for h in cat.hom(c.apex, prod.apex)
            if all(cat.comp(leg, h) == c.legs[i] for i, leg in enumerate(prod.legs))
        ]
        if not hs:
            raise ChartTooShallow(c.label(), "mediating arrow into the product")
        m[name] = sf.class_of(prod, weak_subobject_class(chart, hs[0]))

    for cls in sf.classes.elements:
        if m[u[cls]] != cls:
            raise InputError(f"comparison round trip broken at the class {cls}")
    for name in names:
        if u[m[name]] != name:
            raise InputError(f"comparison round trip broken at the cone class {name}")
    for a in sf.classes.elements:
        for b in sf.classes.elements:
            if sf.classes.le(a, b) != classes.le(u[a], u[b]):
                raise InputError("comparison is not an order isomorphism")
    return ConeFunctors(feet, prod, classes, reps, u, m)


def exact_completion(cat: FinCategory) -> FinCategory:
    """The category of internal pers and compatibility classes of arrows.

    Objects are the pers of enumerate_pers, named P0.<carrier>, P1.<carrier>
    and so on in enumeration order.  An arrow class is named after its
    least member; two compatible arrows are identified when an internal
    arrow into the target relation object tracks them, closed up
    transitively.  Composition is computed on representatives and checked
    to be independent of the choice on every composable pair of classes,
    which is what forces the category laws here.
    """
    pers = enumerate_pers(cat)
    if not pers:
        raise ChartTooShallow("exact completion", "internal pers")
    obj_name = {per: f"P{i}.{per.carrier}" for i, per in enumerate(pers)}

    reach_cache: dict[tuple[Per, str], set[tuple[str, str]]] = {}

    def reachable_pairs(sigma: Per, z: str) -> set[tuple[str, str]]:
        got = reach_cache.get((sigma, z))
        if got is None:
            s = cat.src[sigma.r1]
            got = {
                (cat.comp(sigma.r1, h), cat.comp(sigma.r2, h))
                for h in cat.hom(z, s)
            }
            reach_cache[(sigma, z)] = got
        return got

    members: dict[tuple[Per, Per], list[str]] = {}
    cls_of: dict[tuple[Per, Per], dict[str, str]] = {}
    for rho in pers:
        for sigma in pers:
            legs = reachable_pairs(sigma, cat.src[rho.r1])
            compat = [
                f for f in cat.hom(rho.carrier, sigma.carrier)
                if (cat.comp(f, rho.r1), cat.comp(f, rho.r2)) in legs
            ]
            tracked = reachable_pairs(sigma, rho.carrier)
            classes: dict[str, str] = {}
            for f in compat:
                if f in classes:
                    continue
                block = [f]
                classes[f] = f
                k = 0
                while k < len(block):
                    g = block[k]
                    k += 1
                    for f2 in compat:
                        if f2 not in classes and ((g, f2) in tracked or (f2, g) in tracked):
                            classes[f2] = f
                            block.append(f2)
            members[(rho, sigma)] = compat
            cls_of[(rho, sigma)] = classes

    arrows: list[str] = []
    src: dict[str, str] = {}
    tgt: dict[str, str] = {}
    arrow_name: dict[tuple[Per, Per, str], str] = {}
    for rho in pers:
        for sigma in pers:
            for rep in sorted(set(cls_of[(rho, sigma)].values())):
                name = f"{obj_name[rho]}-{obj_name[sigma]}:{rep}"
                arrows.append(name)
                src[name], tgt[name] = obj_name[rho], obj_name[sigma]
                arrow_name[(rho, sigma, rep)] = name

    identities = {}
    for per in pers:
        rep = cls_of[(per, per)].get(cat.ident(per.carrier))
        if rep is None:
            raise InputError(f"identity of {per.label()} is not self-compatible")
        identities[obj_name[per]] = arrow_name[(per, per, rep)]

    compose: dict[tuple[str, str], str] = {}
    for rho in pers:
        for sigma in pers:
            f_classes = cls_of[(rho, sigma)]
            if not f_classes:
                continue
            for tau in pers:
                g_classes = cls_of[(sigma, tau)]
                if not g_classes:
                    continue
                out_cls = cls_of[(rho, tau)]
                seen: dict[tuple[str, str], str] = {}
                for f, f_rep in f_classes.items():
                    for g, g_rep in g_classes.items():
                        got = out_cls[cat.comp(g, f)]
                        key = (g_rep, f_rep)
                        if seen.setdefault(key, got) != got:
                            raise InputError(
                                f"composition not class-independent between {rho.label()} and {tau.label()}"
                            )
                for (g_rep, f_rep), got in seen.items():
                    compose[(arrow_name[(sigma, tau, g_rep)], arrow_name[(rho, sigma, f_rep)])] = (
                        arrow_name[(rho, tau, got)]
                    )
    return FinCategory(
        tuple(obj_name[per] for per in pers),
        tuple(arrows),
        src,
        tgt,
        identities,
        compose,
    )
