"""Finitely presented categories as explicit tables.

A FinCategory is a chart: a finite fragment of a possibly infinite
category. Weak-limit classification is exhaustive over internal objects
only, so downstream checkers quantify over the witnesses the chart
actually contains and flag missing ones rather than guessing about the
ambient category.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping, Optional

import numpy as np

from .order import FinitePoset
from .report import InputError

NOT_WEAK = "not_weak"
WEAK_ONLY = "weak_only"
STRICT = "strict"

# a ConeClass is one of the three constants above
ConeClass = str


@dataclass(eq=False)
class FinCategory:
    objects: tuple[str, ...]
    arrows: tuple[str, ...]
    src: Mapping[str, str]
    tgt: Mapping[str, str]
    identities: Mapping[str, str]
    compose: Mapping[tuple[str, str], str]

    def __post_init__(self):
        self.objects = tuple(sorted(self.objects))
        self.arrows = tuple(sorted(self.arrows))
        hom: dict[tuple[str, str], list[str]] = {}
        for a in self.arrows:
            hom.setdefault((self.src[a], self.tgt[a]), []).append(a)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._classify_cache: dict[Cone, str] = {}
        self._cones_cache: dict[tuple[str, ...], list[tuple[Cone, str]]] = {}
        self._iso_classes_cache: Optional[list[tuple[str, ...]]] = None

    def hom(self, x: str, y: str) -> tuple[str, ...]:
        return self._hom.get((x, y), ())

    def comp(self, g: str, f: str) -> str:
        """g after f."""
        try:
            return self.compose[(g, f)]
        except KeyError:
            raise InputError(f"not composable: {g} after {f}") from None

    def comp_list(self, *arrows: str) -> str:
        """Composite of arrows listed outermost first."""
        out = arrows[-1]
        for a in reversed(arrows[:-1]):
            out = self.comp(a, out)
        return out

    def ident(self, x: str) -> str:
        return self.identities[x]

    def tables(self):
        return (self.objects, self.arrows, self.src, self.tgt, self.identities, self.compose)


@dataclass(eq=False)
class FunctorData:
    source: FinCategory
    target: FinCategory
    ob: Mapping[str, str]
    ar: Mapping[str, str]


@dataclass(frozen=True)
class Cone:
    apex: str
    feet: tuple[str, ...]
    legs: tuple[str, ...]

    def label(self) -> str:
        return f"({self.apex}; {', '.join(self.legs)})"


def validate_category(objects, arrows, src, tgt, identities, compose) -> list[str]:
    """Diagnostics for raw category tables; empty iff the laws hold.

    Law checks (closure of composition, typing, identity laws,
    associativity) run vectorized over the composition matrix; each
    violation names the law and a witness.
    """
    diags: list[str] = []
    objs = list(objects)
    ars = list(arrows)
    if len(set(objs)) != len(objs):
        diags.append("duplicate-object-id")
    if len(set(ars)) != len(ars):
        diags.append("duplicate-arrow-id")
    oset, aset = set(objs), set(ars)
    for a in ars:
        if src.get(a) not in oset:
            diags.append(f"bad-source: {a} -> {src.get(a)}")
        if tgt.get(a) not in oset:
            diags.append(f"bad-target: {a} -> {tgt.get(a)}")
    for o in objs:
        i = identities.get(o)
        if i not in aset:
            diags.append(f"missing-identity: {o}")
        elif src[i] != o or tgt[i] != o:
            diags.append(f"identity-not-endo: {o} -> {i}")
    if diags:
        return diags

    n = len(ars)
    ai = {a: i for i, a in enumerate(ars)}
    oi = {o: i for i, o in enumerate(objs)}
    srcs = np.array([oi[src[a]] for a in ars], dtype=np.int32)
    tgts = np.array([oi[tgt[a]] for a in ars], dtype=np.int32)
    C = np.full((n + 1, n + 1), -1, dtype=np.int32)
    for (g, f), h in compose.items():
        if g not in aset or f not in aset or h not in aset:
            diags.append(f"unknown-arrow-in-compose: ({g}, {f}) -> {h}")
            continue
        C[ai[g], ai[f]] = ai[h]
    if diags:
        return diags

    body = C[:n, :n]
    composable = srcs[:, None] == tgts[None, :]
    defined = body >= 0
    for g, f in np.argwhere(composable & ~defined)[:3]:
        diags.append(f"compose-missing: ({ars[g]}, {ars[f]})")
    for g, f in np.argwhere(~composable & defined)[:3]:
        diags.append(f"compose-not-composable: ({ars[g]}, {ars[f]})")
    if diags:
        return diags

    gs, fs = np.nonzero(defined)
    hs = body[gs, fs]
    bad = (srcs[hs] != srcs[fs]) | (tgts[hs] != tgts[gs])
    for k in np.nonzero(bad)[0][:3]:
        diags.append(
            f"compose-ill-typed: ({ars[gs[k]]}, {ars[fs[k]]}) -> {ars[hs[k]]}"
        )

    idx = np.arange(n)
    id_of_src = np.array([ai[identities[src[a]]] for a in ars], dtype=np.int32)
    id_of_tgt = np.array([ai[identities[tgt[a]]] for a in ars], dtype=np.int32)
    for k in np.nonzero(C[idx, id_of_src] != idx)[0][:3]:
        diags.append(f"right-identity: {ars[k]}")
    for k in np.nonzero(C[id_of_tgt, idx] != idx)[0][:3]:
        diags.append(f"left-identity: {ars[k]}")

    # (h.g).f = h.(g.f), chunked over h; -1 indexes the guard row/column of C
    for h in range(n):
        ch = C[h, :n]
        lhs = C[ch][:, :n]
        rhs = C[h][body]
        mask = (ch[:, None] >= 0) & defined
        bad_gf = np.argwhere(mask & (lhs != rhs))
        if bad_gf.size:
            g, f = bad_gf[0]
            diags.append(f"associativity: ({ars[h]}, {ars[g]}, {ars[f]})")
            if len(diags) >= 3:
                break
    return diags


def category(objects, arrows, src, tgt, identities, compose) -> FinCategory:
    diags = validate_category(objects, arrows, src, tgt, identities, compose)
    if diags:
        raise InputError("invalid category: " + "; ".join(diags[:5]))
    return FinCategory(
        tuple(objects), tuple(arrows), dict(src), dict(tgt), dict(identities), dict(compose)
    )


def validate_functor(fd: FunctorData) -> list[str]:
    diags = []
    c, d = fd.source, fd.target
    for x in c.objects:
        if fd.ob.get(x) not in set(d.objects):
            diags.append(f"object-image-missing: {x}")
    for a in c.arrows:
        b = fd.ar.get(a)
        if b is None or b not in set(d.arrows):
            diags.append(f"arrow-image-missing: {a}")
    if diags:
        return diags
    for a in c.arrows:
        if d.src[fd.ar[a]] != fd.ob[c.src[a]] or d.tgt[fd.ar[a]] != fd.ob[c.tgt[a]]:
            diags.append(f"typing-not-preserved: {a}")
    for x in c.objects:
        if fd.ar[c.ident(x)] != d.ident(fd.ob[x]):
            diags.append(f"identity-not-preserved: {x}")
    for (g, f), h in c.compose.items():
        if d.comp(fd.ar[g], fd.ar[f]) != fd.ar[h]:
            diags.append(f"composition-not-preserved: ({g}, {f})")
    return diags


def validate_cone(cat: FinCategory, cone: Cone) -> list[str]:
    diags = []
    if cone.apex not in set(cat.objects):
        diags.append(f"unknown-apex: {cone.apex}")
    if len(cone.feet) != len(cone.legs):
        diags.append("feet-legs-length-mismatch")
    if diags:
        return diags
    for leg, foot in zip(cone.legs, cone.feet):
        if leg not in set(cat.arrows):
            diags.append(f"unknown-leg: {leg}")
        elif cat.src[leg] != cone.apex or cat.tgt[leg] != foot:
            diags.append(f"leg-ill-typed: {leg}")
    return diags


def _competitor_apexes(cat: FinCategory, cone: Cone) -> list[str]:
    # cheap rejections first: few arrows into the apex means a small counter
    return sorted(cat.objects, key=lambda a: (len(cat.hom(a, cone.apex)), a))


def classify_cone(cat: FinCategory, cone: Cone) -> ConeClass:
    """Exhaustive fill-in classification over every internal competitor cone.

    For each apex A the counter of induced leg tuples (legs . h) over
    h: A -> W is compared against the count of all cones over the feet
    with apex A: a miss is not_weak, a double hit forfeits strict.
    """
    cached = cat._classify_cache.get(cone)
    if cached is not None:
        return cached
    diags = validate_cone(cat, cone)
    if diags:
        raise InputError("invalid cone: " + "; ".join(diags))
    unique = True
    for a in _competitor_apexes(cat, cone):
        total = 1
        for foot in cone.feet:
            total *= len(cat.hom(a, foot))
        if total == 0:
            continue
        counter = Counter(
            tuple(cat.comp(leg, h) for leg in cone.legs) for h in cat.hom(a, cone.apex)
        )
        if len(counter) < total:
            cat._classify_cache[cone] = NOT_WEAK
            return NOT_WEAK
        if any(c > 1 for c in counter.values()):
            unique = False
    out = STRICT if unique else WEAK_ONLY
    cat._classify_cache[cone] = out
    return out


def iter_cones(cat: FinCategory, feet: Iterable[str]) -> Iterator[Cone]:
    feet = tuple(feet)
    for apex in cat.objects:
        for legs in product(*(cat.hom(apex, foot) for foot in feet)):
            yield Cone(apex, feet, legs)


def _apex_can_cover(cat: FinCategory, apex: str, feet: tuple[str, ...]) -> bool:
    """Necessary condition for any cone with this apex to be a weak product.

    Every competitor leg tuple out of Z must be hit by some arrow Z -> apex,
    so hom(Z, apex) must be at least as large as the product of the
    hom(Z, foot) sizes whenever that product is nonzero.
    """
    for z in cat.objects:
        total = 1
        for foot in feet:
            total *= len(cat.hom(z, foot))
        if total and len(cat.hom(z, apex)) < total:
            return False
    return True


def iter_weak_cones(cat: FinCategory, feet: Iterable[str]) -> Iterator[tuple[Cone, ConeClass]]:
    feet = tuple(feet)
    for apex in cat.objects:
        if not _apex_can_cover(cat, apex, feet):
            continue
        for legs in product(*(cat.hom(apex, foot) for foot in feet)):
            cone = Cone(apex, feet, legs)
            kind = classify_cone(cat, cone)
            if kind != NOT_WEAK:
                yield cone, kind


def enumerate_weak_products(cat: FinCategory, feet: Iterable[str]) -> list[tuple[Cone, ConeClass]]:
    """All internal cones over the feet that are weak products, apex-sorted."""
    feet = tuple(feet)
    cached = cat._cones_cache.get(feet)
    if cached is None:
        cached = list(iter_weak_cones(cat, feet))
        cat._cones_cache[feet] = cached
    return list(cached)


def classify_weak_pullback(cat: FinCategory, f: str, g: str, square: Cone) -> ConeClass:
    """Fill-in classification of a commuting square over the cospan (f, g).

    The square is a Cone with feet (dom f, dom g); competitors are all
    internal commuting squares over the same cospan.
    """
    if cat.tgt[f] != cat.tgt[g]:
        raise InputError(f"not a cospan: {f}, {g}")
    expected_feet = (cat.src[f], cat.src[g])
    diags = validate_cone(cat, square)
    if diags:
        raise InputError("invalid square: " + "; ".join(diags))
    if square.feet != expected_feet or len(square.legs) != 2:
        raise InputError(f"square feet must be {expected_feet}")
    px, py = square.legs
    if cat.comp(f, px) != cat.comp(g, py):
        raise InputError(f"square does not commute: {f}.{px} != {g}.{py}")
    unique = True
    for a in _competitor_apexes(cat, square):
        total = _matched_pair_count(cat, a, f, g)
        if total == 0:
            continue
        counter = Counter(
            (cat.comp(px, h), cat.comp(py, h)) for h in cat.hom(a, square.apex)
        )
        if len(counter) < total:
            return NOT_WEAK
        if any(c > 1 for c in counter.values()):
            unique = False
    return STRICT if unique else WEAK_ONLY


def _matched_pair_count(cat: FinCategory, z: str, f: str, g: str) -> int:
    """Number of commuting competitor pairs (qx, qy) out of z over the cospan."""
    left = Counter(cat.comp(f, qx) for qx in cat.hom(z, cat.src[f]))
    right = Counter(cat.comp(g, qy) for qy in cat.hom(z, cat.src[g]))
    return sum(n * right[c] for c, n in left.items())


def enumerate_weak_pullbacks(cat: FinCategory, f: str, g: str) -> list[tuple[Cone, ConeClass]]:
    """All internal weak pullback squares over the cospan (f, g), apex-sorted.

    Apexes that cannot cover every competitor pair out of some object are
    skipped before leg enumeration.
    """
    if cat.tgt[f] != cat.tgt[g]:
        raise InputError(f"not a cospan: {f}, {g}")
    feet = (cat.src[f], cat.src[g])
    key = ("pullback", f, g)
    cached = cat._cones_cache.get(key)
    if cached is not None:
        return list(cached)
    out: list[tuple[Cone, ConeClass]] = []
    demand = {z: _matched_pair_count(cat, z, f, g) for z in cat.objects}
    for apex in cat.objects:
        if any(total and len(cat.hom(z, apex)) < total for z, total in demand.items()):
            continue
        by_composite: dict[str, list[str]] = {}
        for v in cat.hom(apex, feet[1]):
            by_composite.setdefault(cat.comp(g, v), []).append(v)
        for u in cat.hom(apex, feet[0]):
            for v in by_composite.get(cat.comp(f, u), ()):
                square = Cone(apex, feet, (u, v))
                kind = classify_weak_pullback(cat, f, g, square)
                if kind != NOT_WEAK:
                    out.append((square, kind))
    cat._cones_cache[key] = out
    return list(out)


def slice_category(cat: FinCategory, a_obj: str) -> tuple[FinCategory, FunctorData]:
    """The slice over a_obj and the forgetful functor back to cat.

    Slice objects keep the id of the arrow into a_obj; a slice arrow
    k from f to g (meaning g.k = f) is named "k|f|g".
    """
    if a_obj not in set(cat.objects):
        raise InputError(f"unknown object: {a_obj}")
    objs = [f for f in cat.arrows if cat.tgt[f] == a_obj]
    arrows = []
    src: dict[str, str] = {}
    tgt: dict[str, str] = {}
    ar_of: dict[str, str] = {}
    for f in objs:
        for g in objs:
            for k in cat.hom(cat.src[f], cat.src[g]):
                if cat.comp(g, k) == f:
                    name = f"{k}|{f}|{g}"
                    arrows.append(name)
                    src[name], tgt[name] = f, g
                    ar_of[name] = k
    identities = {f: f"{cat.ident(cat.src[f])}|{f}|{f}" for f in objs}
    compose = {}
    by_src: dict[str, list[str]] = {}
    for name in arrows:
        by_src.setdefault(src[name], []).append(name)
    for m in arrows:
        for k in by_src.get(tgt[m], ()):
            composite = cat.comp(ar_of[k], ar_of[m])
            compose[(k, m)] = f"{composite}|{src[m]}|{tgt[k]}"
    sliced = FinCategory(tuple(objs), tuple(arrows), src, tgt, identities, compose)
    forget = FunctorData(
        source=sliced,
        target=cat,
        ob={f: cat.src[f] for f in objs},
        ar=dict(ar_of),
    )
    return sliced, forget


def poset_reflection(cat: FinCategory) -> tuple[FinitePoset, dict[str, str]]:
    """Collapse objects connected by arrows both ways; order by arrow existence."""
    reach = {(x, y): bool(cat.hom(x, y)) or x == y for x in cat.objects for y in cat.objects}
    rep: dict[str, str] = {}
    for x in cat.objects:
        cls = min(y for y in cat.objects if reach[(x, y)] and reach[(y, x)])
        rep[x] = f"[{cls}]"
    elements = tuple(sorted(set(rep.values())))
    leq = frozenset(
        (rep[x], rep[y]) for x in cat.objects for y in cat.objects if reach[(x, y)]
    )
    return FinitePoset(elements, leq), rep


def full_subcategory(cat: FinCategory, objs: Iterable[str]) -> FinCategory:
    keep = set(objs)
    arrows = [a for a in cat.arrows if cat.src[a] in keep and cat.tgt[a] in keep]
    aset = set(arrows)
    return FinCategory(
        tuple(sorted(keep)),
        tuple(arrows),
        {a: cat.src[a] for a in arrows},
        {a: cat.tgt[a] for a in arrows},
        {o: cat.ident(o) for o in keep},
        {k: v for k, v in cat.compose.items() if k[0] in aset and k[1] in aset},
    )


def iso_pairs(cat: FinCategory, x: str, y: str) -> list[tuple[str, str]]:
    """All (f, g) with f: x -> y, g: y -> x mutually inverse, sorted."""
    out = []
    for f in cat.hom(x, y):
        for g in cat.hom(y, x):
            if cat.comp(g, f) == cat.ident(x) and cat.comp(f, g) == cat.ident(y):
                out.append((f, g))
    return out


def iso_classes(cat: FinCategory) -> list[tuple[str, ...]]:
    """Isomorphism classes of objects, each sorted, sorted by representative."""
    if cat._iso_classes_cache is not None:
        return list(cat._iso_classes_cache)
    seen: set[str] = set()
    classes = []
    for x in cat.objects:
        if x in seen:
            continue
        cls = [y for y in cat.objects if y == x or iso_pairs(cat, x, y)]
        seen.update(cls)
        classes.append(tuple(sorted(cls)))
    cat._iso_classes_cache = classes
    return list(classes)


FOUND = "found"
ABSENT = "absent"
BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass
class EquivalenceResult:
    status: str
    forward: Optional[FunctorData] = None
    backward: Optional[FunctorData] = None
    unit: Optional[dict[str, str]] = None
    counit: Optional[dict[str, str]] = None


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self) -> bool:
        self.left -= 1
        return self.left >= 0


def _hom_fingerprint(cat: FinCategory, x: str) -> tuple:
    outs = sorted(len(cat.hom(x, y)) for y in cat.objects)
    ins = sorted(len(cat.hom(y, x)) for y in cat.objects)
    return (len(cat.hom(x, x)), tuple(outs), tuple(ins))


def _search_iso(skel1: FinCategory, skel2: FinCategory, budget: _Budget):
    """Backtracking category isomorphism between skeletal categories.

    Returns (ob map, arrow map) or None; None with budget.left < 0 means
    the search was cut short rather than exhausted.
    """
    objs1 = sorted(skel1.objects)
    fp2: dict[str, tuple] = {y: _hom_fingerprint(skel2, y) for y in skel2.objects}

    def assign_arrows(ob: dict[str, str]):
        for x in objs1:
            for y in objs1:
                if len(skel1.hom(x, y)) != len(skel2.hom(ob[x], ob[y])):
                    return None
        arrows1 = [a for a in skel1.arrows if a not in
                   {skel1.ident(o) for o in objs1}]
        ar: dict[str, str] = {skel1.ident(o): skel2.ident(ob[o]) for o in objs1}
        used: set[str] = set(ar.values())

        def consistent(a: str) -> bool:
            for b, fb in list(ar.items()):
                for g, f in ((a, b), (b, a)):
                    if skel1.tgt[f] == skel1.src[g]:
                        h = skel1.comp(g, f)
                        if h in ar and skel2.comp(ar[g], ar[f]) != ar[h]:
                            return False
            # composites with both factors assigned must hit assigned images
            for (g, f), h in skel1.compose.items():
                if h == a and g in ar and f in ar and skel2.comp(ar[g], ar[f]) != ar[a]:
                    return False
            return True

        def rec(i: int):
            if i == len(arrows1):
                return dict(ar)
            a = arrows1[i]
            x, y = ob[skel1.src[a]], ob[skel1.tgt[a]]
            for cand in skel2.hom(x, y):
                if cand in used:
                    continue
                if not budget.spend():
                    return None
                ar[a] = cand
                used.add(cand)
                if consistent(a):
                    got = rec(i + 1)
                    if got is not None:
                        return got
                del ar[a]
                used.discard(cand)
            return None

        return rec(0)

    def rec_ob(i: int, ob: dict[str, str], used: set[str]):
        if i == len(objs1):
            got = assign_arrows(dict(ob))
            return (dict(ob), got) if got is not None else None
        x = objs1[i]
        fx = _hom_fingerprint(skel1, x)
        for y in sorted(skel2.objects):
            if y in used or fp2[y] != fx:
                continue
            if not budget.spend():
                return None
            ob[x] = y
            used.add(y)
            got = rec_ob(i + 1, ob, used)
            if got is not None:
                return got
            del ob[x]
            used.discard(y)
        return None

    return rec_ob(0, {}, set())


def find_equivalence(cat1: FinCategory, cat2: FinCategory, budget: int = 200000) -> EquivalenceResult:
    """Search for an equivalence of categories, with verified witnesses.

    Equivalence of finite categories is isomorphism of skeleta, so the
    search runs on one representative per iso class and the result is
    rebuilt on the full categories. status is "absent" only when the
    search space was exhausted (or iso-class counts differ), and
    "budget-exhausted" when the node limit cut the search short.
    """
    classes1, classes2 = iso_classes(cat1), iso_classes(cat2)
    if len(classes1) != len(classes2):
        return EquivalenceResult(status=ABSENT)
    reps1 = [c[0] for c in classes1]
    reps2 = [c[0] for c in classes2]
    skel1, skel2 = full_subcategory(cat1, reps1), full_subcategory(cat2, reps2)
    tracker = _Budget(budget)
    got = _search_iso(skel1, skel2, tracker)
    if got is None:
        return EquivalenceResult(status=BUDGET_EXHAUSTED if tracker.left < 0 else ABSENT)
    ob_iso, ar_iso = got

    def chosen_isos(cat: FinCategory, classes) -> tuple[dict[str, str], dict[str, str], dict[str, str]]:
        rep, to_rep, from_rep = {}, {}, {}
        for cls in classes:
            r = cls[0]
            for x in cls:
                rep[x] = r
                if x == r:
                    to_rep[x] = cat.ident(x)
                    from_rep[x] = cat.ident(x)
                else:
                    u, uinv = iso_pairs(cat, x, r)[0]
                    to_rep[x], from_rep[x] = u, uinv
        return rep, to_rep, from_rep

    rep1, to1, from1 = chosen_isos(cat1, classes1)
    rep2, to2, from2 = chosen_isos(cat2, classes2)
    ar_iso_inv = {v: k for k, v in ar_iso.items()}
    ob_iso_inv = {v: k for k, v in ob_iso.items()}

    f_ob = {x: ob_iso[rep1[x]] for x in cat1.objects}
    f_ar = {
        a: ar_iso[cat1.comp_list(to1[cat1.tgt[a]], a, from1[cat1.src[a]])]
        for a in cat1.arrows
    }
    g_ob = {y: ob_iso_inv[rep2[y]] for y in cat2.objects}
    g_ar = {
        b: ar_iso_inv[cat2.comp_list(to2[cat2.tgt[b]], b, from2[cat2.src[b]])]
        for b in cat2.arrows
    }
    forward = FunctorData(source=cat1, target=cat2, ob=f_ob, ar=f_ar)
    backward = FunctorData(source=cat2, target=cat1, ob=g_ob, ar=g_ar)
    unit = {x: to1[x] for x in cat1.objects}
    counit = {y: from2[y] for y in cat2.objects}

    assert validate_functor(forward) == []
    assert validate_functor(backward) == []
    for a in cat1.arrows:
        x, y = cat1.src[a], cat1.tgt[a]
        assert cat1.comp(g_ar[f_ar[a]], unit[x]) == cat1.comp(unit[y], a)
    for b in cat2.arrows:
        y, z = cat2.src[b], cat2.tgt[b]
        assert cat2.comp(counit[z], f_ar[g_ar[b]]) == cat2.comp(b, counit[y])
    return EquivalenceResult(
        status=FOUND, forward=forward, backward=backward, unit=unit, counit=counit
    )
