"""Fiber algebra tests.

Derived expectations are computed by frozenset oracles (intersection,
preimage, direct image, brute-force bound search) next to each assertion,
independently of the code under test.
"""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from doctrines.order import (
    MonotoneMap,
    compose_maps,
    glb,
    identity_map,
    is_meet_preserving,
    left_adjoint,
    powerset_semilattice,
    right_adjoint,
    semilattice,
    subset_name,
    validate_monotone,
    validate_semilattice,
)
from doctrines.report import InputError


def two_chain():
    return semilattice(["bot", "top"], [("bot", "bot"), ("bot", "top"), ("top", "top")])


def preimage_map(func, src_atoms, tgt_atoms):
    """Preimage along func: src_atoms -> tgt_atoms, as a map P(tgt) -> P(src)."""
    src_lat, src_dec = powerset_semilattice(src_atoms)
    tgt_lat, tgt_dec = powerset_semilattice(tgt_atoms)
    table = {
        name: subset_name(a for a in src_atoms if func[a] in members)
        for name, members in tgt_dec.items()
    }
    return MonotoneMap(tgt_lat, src_lat, table), src_dec, tgt_dec


def test_validate_two_chain():
    assert validate_semilattice(
        ["bot", "top"], [("bot", "bot"), ("bot", "top"), ("top", "top")]
    ) == []


def test_validate_names_transitivity_witness():
    refl = [(x, x) for x in "abc"]
    diags = validate_semilattice(["a", "b", "c"], refl + [("a", "b"), ("b", "c")])
    assert "transitivity: a <= b <= c but not a <= c" in diags


def test_validate_meet_not_glb():
    diags = validate_semilattice(
        ["bot", "top"],
        [("bot", "bot"), ("bot", "top"), ("top", "top")],
        top="top",
        meet={(a, b): "bot" for a in ("bot", "top") for b in ("bot", "top")},
    )
    assert any(d.startswith("meet-not-glb") for d in diags)


def test_validate_boolean_16():
    lat, decode = powerset_semilattice(["x1", "x2", "x3", "x4"])
    assert validate_semilattice(lat.elements, lat.poset.leq, lat.top, lat.meet) == []
    # oracle: meet is subset intersection, pairwise and on all triples
    for a in lat.elements:
        for b in lat.elements:
            assert decode[lat.meet_of(a, b)] == decode[a] & decode[b]
    for a in lat.elements:
        for b in lat.elements:
            for c in lat.elements:
                assert lat.meet_of(a, lat.meet_of(b, c)) == lat.meet_of(lat.meet_of(a, b), c)


def test_glb_two_chain():
    assert glb(two_chain(), "bot", "top") == "bot"


def test_glb_is_intersection_on_subsets():
    lat, decode = powerset_semilattice(["b1", "b2"])
    got = glb(lat, "{b1}", "{b2}")
    assert decode[got] == decode["{b1}"] & decode["{b2}"]
    assert got == "{}"


def test_glb_with_top_is_identity():
    lat, _ = powerset_semilattice(["x1", "x2", "x3", "x4"])
    for x in lat.elements:
        assert glb(lat, x, lat.top) == x


def test_glb_unknown_element():
    with pytest.raises(InputError):
        glb(two_chain(), "bot", "nope")


def test_identity_is_meet_preserving():
    assert is_meet_preserving(identity_map(two_chain()))


def test_preimage_is_meet_preserving():
    m, _, _ = preimage_map({"b1": "*", "b2": "*"}, ["b1", "b2"], ["*"])
    assert validate_monotone(m) == []
    assert is_meet_preserving(m)


def test_direct_image_not_meet_preserving():
    # image({b1}) & image({b2}) = {*} but image({b1} & {b2}) = {}
    src_lat, src_dec = powerset_semilattice(["b1", "b2"])
    tgt_lat, _ = powerset_semilattice(["*"])
    img = MonotoneMap(
        src_lat, tgt_lat, {n: ("{*}" if members else "{}") for n, members in src_dec.items()}
    )
    assert validate_monotone(img) == []
    assert not is_meet_preserving(img)


def test_left_adjoint_identity():
    lat = two_chain()
    f = left_adjoint(identity_map(lat))
    assert f is not None and f.table == {x: x for x in lat.elements}


def test_left_adjoint_of_preimage_is_direct_image():
    func = {"b1": "*", "b2": "*"}
    m, src_dec, _ = preimage_map(func, ["b1", "b2"], ["*"])
    f = left_adjoint(m)
    assert f is not None
    expected = {
        name: subset_name(func[a] for a in members) for name, members in src_dec.items()
    }
    assert f.table == expected


def test_left_adjoint_of_constant_top():
    lat = two_chain()
    m = MonotoneMap(lat, lat, {"bot": "top", "top": "top"})
    f = left_adjoint(m)
    assert f is not None and f.table == {"bot": "bot", "top": "bot"}


def test_right_adjoint_identity():
    lat = two_chain()
    g = right_adjoint(identity_map(lat))
    assert g is not None and g.table == {x: x for x in lat.elements}


def test_right_adjoint_of_preimage():
    func = {"b1": "*", "b2": "*"}
    m, src_dec, tgt_dec = preimage_map(func, ["b1", "b2"], ["*"])
    g = right_adjoint(m)
    assert g is not None
    # oracle: g(S) is the largest A with preimage(A) a subset of S
    for name, members in src_dec.items():
        best = max(
            (a for a in tgt_dec if {x for x in func if func[x] in tgt_dec[a]} <= members),
            key=lambda a: len(tgt_dec[a]),
        )
        assert g.table[name] == best


def test_adjoints_absent_for_non_top_preserving():
    # everything below top goes to the 3-chain bottom, top lands strictly below
    # the target top: no left adjoint (top fails) and no right adjoint (the
    # candidate set {b : m(b) <= c0} = {{}, {u}, {v}} has no greatest element).
    sq, _ = powerset_semilattice(["u", "v"])
    ch = semilattice(
        ["c0", "c1", "c2"],
        [("c0", "c0"), ("c0", "c1"), ("c0", "c2"), ("c1", "c1"), ("c1", "c2"), ("c2", "c2")],
    )
    m = MonotoneMap(sq, ch, {"{}": "c0", "{u}": "c0", "{v}": "c0", "{u,v}": "c1"})
    assert validate_monotone(m) == []
    assert left_adjoint(m) is None
    assert right_adjoint(m) is None


def test_left_adjoint_preserves_joins():
    # F = image along b -> *; join in a powerset is union
    m, src_dec, tgt_dec = preimage_map({"b1": "*", "b2": "*"}, ["b1", "b2"], ["*"])
    f = left_adjoint(m)
    assert f is not None
    for a, sa in src_dec.items():
        for b, sb in src_dec.items():
            union = subset_name(sa | sb)
            assert f.table[union] == subset_name(tgt_dec[f.table[a]] | tgt_dec[f.table[b]])


ATOMS_A = ("a0", "a1")
ATOMS_B = ("b0", "b1", "b2")
ATOMS_C = ("c0", "c1")


@st.composite
def function_between(draw, src, tgt):
    return {a: draw(st.sampled_from(tgt)) for a in src}


@given(function_between(ATOMS_A, ATOMS_B), function_between(ATOMS_B, ATOMS_C))
def test_preimage_adjoints_compose(f, g):
    # L(m_f . m_g) = L(m_g) . L(m_f) where L is left_adjoint and m_h is preimage along h
    mf, _, _ = preimage_map(f, ATOMS_A, ATOMS_B)
    mg, _, _ = preimage_map(g, ATOMS_B, ATOMS_C)
    lf, lg = left_adjoint(mf), left_adjoint(mg)
    assert lf is not None and lg is not None
    composite = left_adjoint(compose_maps(mf, mg))
    assert composite is not None
    assert composite.table == compose_maps(lg, lf).table


@given(st.sets(st.integers(0, 15), max_size=10))
def test_meet_laws_on_intersection_closed_families(masks):
    # close a random family of bitmask-subsets of a 4-element universe under
    # intersection; glb synthesis must find bitwise-and as the meet
    family = set(masks) | {15}
    changed = True
    while changed:
        changed = False
        for a in list(family):
            for b in list(family):
                if a & b not in family:
                    family.add(a & b)
                    changed = True
    elems = [f"m{n}" for n in sorted(family)]
    leq = [
        (f"m{a}", f"m{b}") for a in sorted(family) for b in sorted(family) if a & b == a
    ]
    assert validate_semilattice(elems, leq) == []
    lat = semilattice(elems, leq)
    assert lat.top == "m15"
    for a in sorted(family):
        for b in sorted(family):
            # meet(a, b) = a & b; commutativity and idempotence follow
            assert lat.meet_of(f"m{a}", f"m{b}") == f"m{a & b}"
            assert lat.meet_of(f"m{a}", f"m{b}") == lat.meet_of(f"m{b}", f"m{a}")
        assert lat.meet_of(f"m{a}", f"m{a}") == f"m{a}"
