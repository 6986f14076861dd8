"""Truncated product completion checked against pointwise function semantics.

Over the function charts a list arrow induces a genuine map between
products of finite sets, so composition, delta classes, and the box
equality can all be recomputed from point maps and compared with what
the completion machinery produces.
"""

from collections import Counter
from functools import lru_cache
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from doctrines.doctrine import Doctrine, EqualityAssignment
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
from doctrines.order import MonotoneMap, powerset_semilattice, subset_name
from doctrines.report import FAIL, PASS, SHALLOW, ChartTooShallow, InputError
from doctrines.strictify import (
    ListArrow,
    check_strictification,
    compose_list_arrows,
    delta_list,
    existential_transfer,
    product_completion,
    roundtrip_biased,
    strictification,
    validate_list_arrow,
)


@lru_cache(maxsize=None)
def subset_fixture():
    return build_fixture(CHART3)


@lru_cache(maxsize=None)
def sub_strictified(bound: int):
    cat, doc, eq = subset_fixture()
    return strictification(doc, eq, bound)


def _point_map(code: str) -> list[int]:
    """The target point index per source point encoded in a chart arrow name."""
    return [int(d) for d in code.partition(":")[2]]


def _apply_list_arrow(arr, point: tuple[int, ...]) -> tuple[int, ...]:
    """Evaluate a list arrow on a point of the source product, via point maps."""
    return tuple(
        _point_map(arr.components[i])[point[arr.index[i]]] for i in range(len(arr.index))
    )


def _product_points(sizes: dict[str, int], entries: tuple[str, ...]):
    return list(product(*(range(sizes[x]) for x in entries)))


CHART3_SIZES = {"0": 0, "1": 1, "B": 2, "Q": 4}


def test_composition_agrees_with_pointwise_composition():
    cat, doc, eq = subset_fixture()
    cp, _emb = product_completion(cat, 2)
    bb = cp.obj(("B", "B"))
    b = cp.obj(("B",))
    for f in cp.hom(bb, b):
        for g in cp.hom(b, bb):
            gf = compose_list_arrows(cat, g, f)
            assert gf.source == bb and gf.target == bb
            for point in _product_points(CHART3_SIZES, bb.entries):
                step = _apply_list_arrow(f, point)
                assert _apply_list_arrow(gf, point) == _apply_list_arrow(g, step)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_composition_is_associative_and_unital(data):
    cat, doc, eq = build_fixture(NOCOMP)
    cp, _emb = product_completion(cat, 2)
    objs = st.sampled_from(cp.objects)
    xs, ys, zs, ws = (data.draw(objs) for _ in range(4))
    f = data.draw(st.sampled_from(cp.hom(xs, ys)))
    g = data.draw(st.sampled_from(cp.hom(ys, zs)))
    h = data.draw(st.sampled_from(cp.hom(zs, ws)))
    assert cp.comp(h, cp.comp(g, f)) == cp.comp(cp.comp(h, g), f)
    assert cp.comp(f, cp.ident(xs)) == f
    assert cp.comp(cp.ident(ys), f) == f


def test_hom_sizes_are_products_over_index_maps():
    cat, doc, eq = subset_fixture()
    cp, _emb = product_completion(cat, 2)
    bb = cp.obj(("B", "B"))
    assert cp.hom_size(bb, cp.obj(("B",))) == 8
    assert cp.hom_size(cp.obj(("Q", "Q")), cp.obj(("Q", "Q"))) == 262144
    for xs in cp.objects:
        for ys in cp.objects:
            size = cp.hom_size(xs, ys)
            if size <= 2000:
                assert size == len(cp.hom(xs, ys))


def test_embedding_is_full_and_faithful_on_singletons():
    cat, doc, eq = subset_fixture()
    cp, emb = product_completion(cat, 2)
    for x in cat.objects:
        for y in cat.objects:
            image = {emb.arr(f) for f in cat.hom(x, y)}
            assert len(image) == len(cat.hom(x, y))
            assert image == set(cp.hom(emb.obj(x), emb.obj(y)))


def test_embedding_does_not_preserve_weak_products():
    # The two-point feet have an internal weak product with four-point
    # apex; its embedded legs cannot co-factor the pair of projections
    # because a single component arrow would need two different slots.
    cat, doc, eq = subset_fixture()
    cp, emb = product_completion(cat, 2)
    bb = cp.obj(("B", "B"))
    l1, l2 = emb.arr("Q>B:0011"), emb.arr("Q>B:0101")
    p1, p2 = cp.projections(cp.obj(("B",)), cp.obj(("B",)))
    fillers = [
        g
        for g in cp.hom(bb, emb.obj("Q"))
        if cp.comp(l1, g) == p1 and cp.comp(l2, g) == p2
    ]
    assert fillers == []


def test_concatenation_has_unique_pairings():
    cat, doc, eq = build_fixture(NOCOMP)
    cp, _emb = product_completion(cat, 3)
    xs = cp.obj(("B",))
    ys = cp.obj(("B", "1"))
    both = cp.concat(xs, ys)
    p1, p2 = cp.projections(xs, ys)
    for t in (cp.obj(("B",)), cp.obj(("1", "B"))):
        for f in cp.hom(t, xs):
            for g in cp.hom(t, ys):
                got = cp.pairing(f, g)
                assert cp.comp(p1, got) == f
                assert cp.comp(p2, got) == g
        for h in cp.hom(t, both):
            assert cp.pairing(cp.comp(p1, h), cp.comp(p2, h)) == h


def test_input_validation_raises_located_errors():
    cat, doc, eq = subset_fixture()
    with pytest.raises(InputError):
        product_completion(cat, 0)
    cp, _emb = product_completion(cat, 2)
    with pytest.raises(InputError):
        cp.obj(())
    with pytest.raises(InputError):
        cp.obj(("B", "B", "B"))
    with pytest.raises(InputError):
        cp.obj(("Z",))
    with pytest.raises(InputError):
        cp.concat(cp.obj(("B",)), cp.obj(("B", "B")))
    bad = validate_list_arrow(
        cat, ListArrow(cp.obj(("B",)), cp.obj(("Q",)), (2,), ("B>B:01",))
    )
    assert any("index" in d for d in bad)
    f = cp.hom(cp.obj(("B",)), cp.obj(("Q",)))[0]
    g = cp.hom(cp.obj(("B",)), cp.obj(("B",)))[0]
    with pytest.raises(InputError):
        compose_list_arrows(cat, g, f)
    with pytest.raises(InputError):
        cp.pairing(f, cp.hom(cp.obj(("Q",)), cp.obj(("B",)))[0])


def test_singleton_fibers_are_the_base_fibers():
    cat, doc, eq = subset_fixture()
    st3 = sub_strictified(2)
    for x in cat.objects:
        lat = st3.classes(st3.completion.obj((x,)))
        assert set(lat.elements) == set(doc.fib(x).elements)
        for a in lat.elements:
            for b in lat.elements:
                assert lat.le(a, b) == doc.fib(x).le(a, b)


def test_reindex_along_embedded_arrows_is_base_reindex():
    cat, doc, eq = subset_fixture()
    st3 = sub_strictified(2)
    for f in cat.arrows:
        assert dict(st3.reindex(st3.embedding.arr(f)).table) == dict(doc.rx(f).table)


def test_reindex_does_not_depend_on_the_connecting_arrow():
    st3 = sub_strictified(2)
    cp = st3.completion
    bb = cp.obj(("B", "B"))
    arrows = list(cp.hom(bb, cp.obj(("B",)))) + [
        cp.pairing(*cp.projections(cp.obj(("B",)), cp.obj(("B",)))),
        cp.pairing(cp.ident(cp.obj(("B",))), cp.ident(cp.obj(("B",)))),
    ]
    for arr in arrows:
        ok, detail = st3.reindex_agreement(arr)
        assert ok, detail
        assert "connecting arrow" in detail


def test_delta_classes_are_pointwise_equality_subsets():
    # The canonical witness cone over a doubled list lives on a chart
    # apex; the equality class must be exactly the subset of apex points
    # whose two halves agree under the legs.
    cat, doc, eq = subset_fixture()
    st4 = sub_strictified(4)
    cp = st4.completion
    for entries in (("1",), ("B",), ("1", "1"), ("1", "B"), ("B", "1")):
        xs = cp.obj(entries)
        n = len(entries)
        cone = st4.fiber(cp.obj(entries + entries)).canonical
        maps = [_point_map(leg) for leg in cone.legs]
        members = [
            f"{cone.apex.lower()}{p}"
            for p in range(CHART3_SIZES[cone.apex])
            if all(maps[i][p] == maps[n + i][p] for i in range(n))
        ]
        assert st4.delta(xs) == subset_name(members)


def test_delta_list_reports_bound_and_chart_gaps():
    st3 = sub_strictified(2)
    with pytest.raises(InputError, match="exceeds bound"):
        delta_list(st3, ("1", "B"))
    with pytest.raises(ChartTooShallow):
        st3.delta(st3.completion.obj(("Q",)))
    with pytest.raises(ChartTooShallow):
        st3.fiber(st3.completion.obj(("Q", "Q")))


def test_chart3_doctrines_pass_at_bound_two():
    cat, doc, eq = subset_fixture()
    psi, peq = weak_subobjects(chart3())
    for d, e in ((doc, eq), (psi, peq)):
        rep = check_strictification(strictification(d, e, 2))
        assert rep.passed
        assert rep.counts() == {
            "pass": 28,
            "fail": 0,
            "vacuous": 0,
            "out-of-bound": 48,
            "premise-failure": 0,
            "chart-too-shallow": 1,
        }
        shallow = rep.by_verdict(SHALLOW)
        assert [f.subject for f in shallow] == ["[Q]"]


def test_box_census_at_bound_four():
    rep = check_strictification(sub_strictified(4))
    assert rep.passed
    box = [f for f in rep.findings if f.law == "box-compatibility"]
    assert Counter(f.verdict for f in box) == {
        "pass": 8,
        "chart-too-shallow": 8,
        "out-of-bound": 384,
    }
    passing = {f.subject for f in box if f.verdict == PASS}
    assert passing == {
        "([0], [0])",
        "([0], [1])",
        "([0], [B])",
        "([1], [0])",
        "([1], [1])",
        "([1], [B])",
        "([B], [0])",
        "([B], [1])",
    }


def test_mutated_reindex_breaks_functoriality_with_witness():
    cat, doc, eq = subset_fixture()
    st3 = strictification(doc, eq, 2)
    arr = st3.embedding.arr("Q>B:0011")
    table = st3.reindex(arr).table
    a, b = sorted(table)[0], sorted(table)[-1]
    table[a], table[b] = table[b], table[a]
    rep = check_strictification(st3)
    assert not rep.passed
    fails = rep.by_verdict(FAIL)
    assert any(f.law == "reindex-functoriality" and "witness" in f.detail for f in fails)
    assert any(f.law == "singleton-reindex" for f in fails)


def test_roundtrip_reproduces_the_original_equality():
    cat, doc, eq = subset_fixture()
    st3 = sub_strictified(2)
    rep = roundtrip_biased(st3, st3.embedding)
    assert rep.passed
    induced = [f for f in rep.findings if f.law == "induced-equality"]
    assert len(induced) == len(eq.table)
    assert all(f.verdict == PASS for f in induced)


class _SubsetListDoctrine:
    """Subsets of literal products, reindexed by preimage along point maps.

    A hand-built strict doctrine living directly on the lists, used to
    exercise the roundtrip on something that was never produced by the
    strictification machinery.
    """

    def __init__(self, sizes, completion):
        self.sizes = sizes
        self.completion = completion
        self.lattices = {}
        self.decodes = {}
        for xs in completion.objects:
            names = ["".join(map(str, p)) for p in _product_points(sizes, xs.entries)]
            self.lattices[xs], self.decodes[xs] = powerset_semilattice(names)

    def classes(self, xs):
        return self.lattices[xs]

    def reindex(self, arr):
        points = _product_points(self.sizes, arr.source.entries)
        table = {}
        for name, subset in self.decodes[arr.target].items():
            hits = [
                "".join(map(str, p))
                for p in points
                if "".join(map(str, _apply_list_arrow(arr, p))) in subset
            ]
            table[name] = subset_name(hits)
        return MonotoneMap(self.lattices[arr.target], self.lattices[arr.source], table)

    def delta(self, xs):
        points = _product_points(self.sizes, xs.entries)
        return subset_name(
            "".join(map(str, p + p)) for p in points
        )


def test_roundtrip_accepts_a_hand_built_list_doctrine():
    cat, doc, eq = build_fixture(NOCOMP)
    cp, emb = product_completion(cat, 2)
    hand = _SubsetListDoctrine({"1": 1, "B": 2}, cp)
    rep = roundtrip_biased(hand, emb)
    assert rep.passed
    assert not [f for f in rep.findings if f.law == "induced-equality"]


def test_transfer_agrees_on_every_doctrine_fixture():
    fixtures = [build_fixture(n) for n in (TRIV, CHAIN2, CHART3, NOCOMP)]
    fixtures.append(nonexistential_fixture())
    for cat, doc, eq in fixtures:
        rep = existential_transfer(doc, eq, strictification(doc, eq, 2))
        assert rep.passed, rep.render()


def test_transfer_matches_frobenius_witnesses_on_the_diamond():
    cat, doc, eq = nonexistential_fixture()
    rep = existential_transfer(doc, eq, strictification(doc, eq, 2))
    byname = {f.law: f for f in rep.findings}
    assert byname["existential-agreement"].detail == "base fails, truncation fails"
    assert byname["existential-witnesses"].verdict == PASS
    assert byname["existential-witnesses"].detail == "alpha = m, beta = b"
    assert byname["universal-agreement"].detail == "base passes, truncation passes"
