"""Finite posets, inf-semilattices, monotone maps, and adjoint search.

This is the fiber algebra everything else consumes. Elements are opaque
string identifiers; the order and the meet are explicit tables, never
recomputed from structure behind the caller's back. The only synthesis
offered is in `semilattice`, which fills in top and meet from `leq` when
they are omitted and every pair has a greatest lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Optional

from .report import InputError


@dataclass(frozen=True)
class FinitePoset:
    elements: tuple[str, ...]
    leq: frozenset[tuple[str, str]]

    def le(self, a: str, b: str) -> bool:
        return (a, b) in self.leq

    def lower_bounds(self, xs: Iterable[str]) -> list[str]:
        xs = tuple(xs)
        return [c for c in self.elements if all(self.le(c, x) for x in xs)]

    def glb_opt(self, xs: Iterable[str]) -> Optional[str]:
        """Greatest lower bound of xs when it exists. glb_opt(()) is the top."""
        lower = self.lower_bounds(xs)
        for g in lower:
            if all(self.le(c, g) for c in lower):
                return g
        return None


@dataclass(frozen=True)
class InfSemilattice:
    poset: FinitePoset
    top: str
    meet: Mapping[tuple[str, str], str]

    @property
    def elements(self) -> tuple[str, ...]:
        return self.poset.elements

    def le(self, a: str, b: str) -> bool:
        return self.poset.le(a, b)

    def meet_of(self, a: str, b: str) -> str:
        return self.meet[(a, b)]

    def meet_all(self, xs: Iterable[str]) -> str:
        out = self.top
        for x in xs:
            out = self.meet[(out, x)]
        return out


@dataclass(frozen=True)
class MonotoneMap:
    source: InfSemilattice
    target: InfSemilattice
    table: Mapping[str, str]

    def __call__(self, x: str) -> str:
        return self.table[x]


def _order_diagnostics(elems: list[str], rel: set[tuple[str, str]]) -> list[str]:
    diags = []
    for a in elems:
        if (a, a) not in rel:
            diags.append(f"reflexivity: missing {a} <= {a}")
    for a, b in sorted(rel):
        if a < b and (b, a) in rel:
            diags.append(f"antisymmetry: both {a} <= {b} and {b} <= {a}")
    by_src: dict[str, list[str]] = {}
    for a, b in rel:
        by_src.setdefault(a, []).append(b)
    for a, b in sorted(rel):
        for c in sorted(by_src.get(b, ())):
            if (a, c) not in rel:
                diags.append(f"transitivity: {a} <= {b} <= {c} but not {a} <= {c}")
    return diags


def _analyze(
    elements: Iterable[str],
    leq: Iterable[tuple[str, str]],
    top: Optional[str],
    meet: Optional[Mapping[tuple[str, str], str]],
) -> tuple[list[str], Optional[str], Optional[dict[tuple[str, str], str]]]:
    diags: list[str] = []
    elems = list(elements)
    if not elems:
        return ["no-elements: a semilattice needs at least a top"], None, None
    seen: set[str] = set()
    for e in elems:
        if e in seen:
            diags.append(f"duplicate-element: {e}")
        seen.add(e)
    rel: set[tuple[str, str]] = set()
    for a, b in leq:
        if a not in seen or b not in seen:
            diags.append(f"unknown-element-in-leq: ({a}, {b})")
        else:
            rel.add((a, b))
    diags.extend(_order_diagnostics(elems, rel))
    if diags:
        return diags, None, None

    poset = FinitePoset(tuple(elems), frozenset(rel))
    if top is None:
        top = poset.glb_opt(())
        if top is None:
            diags.append("no-top: no greatest element")
    elif top not in seen:
        diags.append(f"unknown-element: top {top}")
    else:
        worst = [x for x in elems if not poset.le(x, top)]
        if worst:
            diags.append(f"top-not-greatest: {worst[0]} is not <= {top}")

    table: dict[tuple[str, str], str] = {}
    for a in elems:
        for b in elems:
            g = poset.glb_opt((a, b))
            if meet is not None:
                got = meet.get((a, b))
                if got is None:
                    diags.append(f"meet-missing: ({a}, {b})")
                    continue
                if got not in seen:
                    diags.append(f"unknown-element: meet({a}, {b}) = {got}")
                    continue
                if got != g:
                    diags.append(f"meet-not-glb: meet({a}, {b}) = {got}, glb is {g}")
                    continue
                table[(a, b)] = got
            else:
                if g is None:
                    if a <= b:
                        diags.append(f"no-glb: ({a}, {b})")
                else:
                    table[(a, b)] = g
    if diags:
        return diags, top, None
    return [], top, table


def validate_semilattice(
    elements: Iterable[str],
    leq: Iterable[tuple[str, str]],
    top: Optional[str] = None,
    meet: Optional[Mapping[tuple[str, str], str]] = None,
) -> list[str]:
    """Diagnostics for candidate inf-semilattice tables; empty means valid.

    With `meet` omitted a greatest lower bound is synthesized per pair and a
    pair without one is a diagnostic, not an exception. Same for `top`.
    """
    return _analyze(elements, leq, top, meet)[0]


def semilattice(
    elements: Iterable[str],
    leq: Iterable[tuple[str, str]],
    top: Optional[str] = None,
    meet: Optional[Mapping[tuple[str, str], str]] = None,
) -> InfSemilattice:
    diags, top_out, table = _analyze(elements, leq, top, meet)
    if diags:
        raise InputError("invalid semilattice: " + "; ".join(diags))
    assert top_out is not None and table is not None
    return InfSemilattice(
        poset=FinitePoset(tuple(elements), frozenset(leq)),
        top=top_out,
        meet=table,
    )


def glb(lattice: InfSemilattice, a: str, b: str) -> str:
    for x in (a, b):
        if x not in lattice.elements:
            raise InputError(f"unknown element: {x}")
    return lattice.meet[(a, b)]


def validate_monotone(m: MonotoneMap) -> list[str]:
    diags = []
    for x in m.source.elements:
        if x not in m.table:
            diags.append(f"table-missing: {x}")
        elif m.table[x] not in m.target.elements:
            diags.append(f"unknown-target-element: {m.table[x]}")
    if diags:
        return diags
    for a in m.source.elements:
        for b in m.source.elements:
            if m.source.le(a, b) and not m.target.le(m.table[a], m.table[b]):
                diags.append(f"monotonicity: {a} <= {b} but not {m.table[a]} <= {m.table[b]}")
    return diags


def is_meet_preserving(m: MonotoneMap) -> bool:
    """True iff m sends top to top and meet(a,b) to meet(m a, m b), checked on all pairs."""
    if m.table[m.source.top] != m.target.top:
        return False
    for a in m.source.elements:
        for b in m.source.elements:
            if m.table[m.source.meet_of(a, b)] != m.target.meet_of(m.table[a], m.table[b]):
                return False
    return True


def identity_map(lat: InfSemilattice) -> MonotoneMap:
    return MonotoneMap(lat, lat, {x: x for x in lat.elements})


def compose_maps(outer: MonotoneMap, inner: MonotoneMap) -> MonotoneMap:
    """outer after inner."""
    return MonotoneMap(
        inner.source,
        outer.target,
        {x: outer.table[inner.table[x]] for x in inner.source.elements},
    )


def left_adjoint(m: MonotoneMap) -> Optional[MonotoneMap]:
    """The map F with F(a) <= b iff a <= m(b), when it exists.

    Pointwise search: F(a) must be the least element of {b : a <= m(b)}.
    The candidate is then verified against the biconditional on every pair,
    so a returned map is correct by construction.
    """
    src, tgt = m.source, m.target
    table: dict[str, str] = {}
    for a in tgt.elements:
        cands = [b for b in src.elements if tgt.le(a, m.table[b])]
        least = next((b for b in cands if all(src.le(b, c) for c in cands)), None)
        if least is None:
            return None
        table[a] = least
    for a in tgt.elements:
        for b in src.elements:
            if src.le(table[a], b) != tgt.le(a, m.table[b]):
                return None
    return MonotoneMap(tgt, src, table)


def right_adjoint(m: MonotoneMap) -> Optional[MonotoneMap]:
    """The map G with b <= G(a) iff m(b) <= a, when it exists."""
    src, tgt = m.source, m.target
    table: dict[str, str] = {}
    for a in tgt.elements:
        cands = [b for b in src.elements if tgt.le(m.table[b], a)]
        greatest = next((b for b in cands if all(src.le(c, b) for c in cands)), None)
        if greatest is None:
            return None
        table[a] = greatest
    for a in tgt.elements:
        for b in src.elements:
            if src.le(b, table[a]) != tgt.le(m.table[b], a):
                return None
    return MonotoneMap(tgt, src, table)


def subset_name(members: Iterable[str]) -> str:
    return "{" + ",".join(sorted(set(members))) + "}"


def powerset_semilattice(atoms: Iterable[str]) -> tuple[InfSemilattice, dict[str, frozenset[str]]]:
    """The lattice of all subsets of `atoms` under inclusion, meet = intersection.

    Returns the lattice and the decode table from element name back to subset.
    Element names are brace-wrapped sorted member lists, ordered by size then name.
    """
    base = sorted(set(atoms))
    subsets: list[frozenset[str]] = [frozenset()]
    for k in range(1, len(base) + 1):
        subsets.extend(frozenset(c) for c in combinations(base, k))
    named = sorted(((subset_name(s), s) for s in subsets), key=lambda p: (len(p[1]), p[0]))
    decode = dict(named)
    elems = [n for n, _ in named]
    leq = [(a, b) for a in elems for b in elems if decode[a] <= decode[b]]
    meet = {
        (a, b): subset_name(decode[a] & decode[b])
        for a in elems
        for b in elems
    }
    lat = InfSemilattice(
        poset=FinitePoset(tuple(elems), frozenset(leq)),
        top=subset_name(base),
        meet=meet,
    )
    return lat, decode
