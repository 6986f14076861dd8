"""Command line front end: sectioned doctrine documents, check dispatch, reports.

A document is line oriented.  `#` starts a comment, blank lines are
skipped, and a heading in square brackets opens a section.  Inside a
section every line is a keyword followed by whitespace-separated fields,
so arrow and element names may contain any printable characters except
whitespace and `#`.

    [options]            max-len N | fixture NAME
    [category]           objects A B ... | arrow f X Y | ident X idX
                         | compose g f h   (g after f equals h)
    [fiber X]            elements ... | top t | le a b | meet a b c
    [reindex f]          map e e'   (reindexing along f sends e to e')
    [cones]              cone NAME APEX LEG...
    [equality]           eq CONENAME ELEMENT

A document either builds every embedded structure or reports located
errors; nothing runs on a partially resolved input.  `fixture NAME`
imports a built-in chart in place of the category, fiber, and reindex
sections, and the equality section then overrides the imported equality
cone by cone.  A fiber without meet lines gets its meets synthesized
from the order, with a notice in the report.

Exit status is 0 when no finding fails, 1 when one does, and 2 for
input errors, including charts too shallow to attempt a construction.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .doctrine import (
    Doctrine,
    EqualityAssignment,
    StrictDelta,
    check_biased_elementary,
    check_strict_elementary,
)
from .fincat import (
    STRICT,
    Cone,
    FinCategory,
    enumerate_weak_products,
    find_equivalence,
    validate_category,
    validate_cone,
)
from .fixtures import (
    build_fixture,
    chart3,
    enumerate_pers,
    exact_completion,
    finset_chart,
    nonexistential_fixture,
    per_to_rel,
    rel_to_per,
    terminal_chart,
    weak_subobjects,
)
from .irrelevance import is_rbp, pi_elements, strict_fiber
from .order import (
    InfSemilattice,
    MonotoneMap,
    identity_map,
    semilattice,
    validate_monotone,
)
from .quotient import (
    check_QD,
    find_quotient,
    is_left_covering,
    lift_left_covering,
    quotient_completion,
    quotient_flags,
    relations_on,
    slice_quotient_commute,
)
from .report import (
    FAIL,
    OUT_OF_BOUND,
    PASS,
    SHALLOW,
    VACUOUS,
    ChartTooShallow,
    Finding,
    InputError,
    Report,
    merge,
    report,
)
from .strictify import check_strictification, roundtrip_biased, strictification

COMMANDS = (
    "validate",
    "check-biased",
    "check-strict",
    "rbp",
    "pi",
    "strict-fiber",
    "strictify",
    "complete",
    "flags-of-quotient",
    "left-covering",
    "lift",
    "commute-slice",
    "per",
    "exact-compare",
    "equiv",
)


# ---------------------------------------------------------------------------
# document model


@dataclass(frozen=True)
class FiberSection:
    name: str
    elements: tuple[str, ...]
    le: tuple[tuple[str, str], ...]
    top: Optional[str]
    meet: tuple[tuple[str, str, str], ...]


@dataclass(frozen=True)
class DoctrineDocument:
    """Content of a parsed document, in declaration order, comments dropped."""

    options: tuple[tuple[str, str], ...]
    objects: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]
    idents: tuple[tuple[str, str], ...]
    composites: tuple[tuple[str, str, str], ...]
    fibers: tuple[FiberSection, ...]
    reindexes: tuple[tuple[str, tuple[tuple[str, str], ...]], ...]
    cones: tuple[tuple[str, str, tuple[str, ...]], ...]
    equalities: tuple[tuple[str, str], ...]


@dataclass
class ParseResult:
    document: Optional[DoctrineDocument]
    errors: tuple[str, ...]
    positions: Mapping[tuple, tuple[int, int]] = field(default_factory=dict)


def _tokenize(line: str) -> list[tuple[str, int]]:
    """Tokens with 1-based start columns, comment stripped."""
    cut = line.find("#")
    if cut >= 0:
        line = line[:cut]
    out = []
    col = 0
    for piece in line.split():
        col = line.index(piece, col)
        out.append((piece, col + 1))
        col += len(piece)
    return out


_SECTION_ARITY = {
    "options": 0,
    "category": 0,
    "fiber": 1,
    "reindex": 1,
    "cones": 0,
    "equality": 0,
}


def parse(text: str, path: str = "<document>") -> ParseResult:
    """Parse a document; collect every located syntax error before giving up."""
    errors: list[str] = []
    positions: dict[tuple, tuple[int, int]] = {}

    def err(line: int, col: int, msg: str) -> None:
        errors.append(f"{path}:{line}:{col}: {msg}")

    options: list[tuple[str, str]] = []
    objects: list[str] = []
    arrows: list[tuple[str, str, str]] = []
    idents: list[tuple[str, str]] = []
    composites: list[tuple[str, str, str]] = []
    fibers: list[FiberSection] = []
    fiber_parts: dict[str, dict] = {}
    reindexes: dict[str, list[tuple[str, str]]] = {}
    cones: list[tuple[str, str, tuple[str, ...]]] = []
    equalities: list[tuple[str, str]] = []

    section: Optional[tuple[str, ...]] = None
    seen_sections: set[tuple[str, ...]] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw)
        if not tokens:
            continue
        stripped = raw.split("#")[0].strip()
        first_col = tokens[0][1]
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                err(lineno, first_col, "unterminated section heading")
                section = None
                continue
            head = stripped[1:-1].split()
            if not head or head[0] not in _SECTION_ARITY:
                err(lineno, first_col, f"unknown section {stripped}")
                section = None
                continue
            if len(head) - 1 != _SECTION_ARITY[head[0]]:
                err(lineno, first_col, f"section {head[0]} takes {_SECTION_ARITY[head[0]]} name(s)")
                section = None
                continue
            section = tuple(head)
            if section in seen_sections:
                err(lineno, first_col, f"duplicate definition of section [{' '.join(head)}]")
                section = None
                continue
            seen_sections.add(section)
            if head[0] == "fiber":
                fiber_parts[head[1]] = {
                    "elements": [],
                    "le": [],
                    "top": None,
                    "meet": [],
                    "pos": (lineno, first_col),
                }
            if head[0] == "reindex":
                reindexes[head[1]] = []
                positions[("reindex-section", head[1])] = (lineno, first_col)
            continue
        if section is None:
            err(lineno, first_col, "entry outside any section")
            continue

        kw = tokens[0][0]
        args = [t for t, _c in tokens[1:]]
        pos = (lineno, first_col)

        def arity(n: int, what: str, at_least: bool = False) -> bool:
            if (len(args) >= n) if at_least else (len(args) == n):
                return True
            err(lineno, first_col, f"{kw} takes {what}")
            return False

        if section[0] == "options":
            if kw in ("max-len", "fixture"):
                if arity(1, "one value"):
                    options.append((kw, args[0]))
                    positions[("option", len(options) - 1)] = pos
            else:
                err(lineno, first_col, f"unknown option {kw}")
        elif section[0] == "category":
            if kw == "objects":
                if arity(1, "at least one name", at_least=True):
                    for t, c in tokens[1:]:
                        objects.append(t)
                        positions[("object", len(objects) - 1)] = (lineno, c)
            elif kw == "arrow":
                if arity(3, "a name, a source, and a target"):
                    arrows.append((args[0], args[1], args[2]))
                    positions[("arrow", len(arrows) - 1)] = pos
            elif kw == "ident":
                if arity(2, "an object and an arrow"):
                    idents.append((args[0], args[1]))
                    positions[("ident", len(idents) - 1)] = pos
            elif kw == "compose":
                if arity(3, "three arrows: outer, inner, composite"):
                    composites.append((args[0], args[1], args[2]))
                    positions[("compose", len(composites) - 1)] = pos
            else:
                err(lineno, first_col, f"unknown category entry {kw}")
        elif section[0] == "fiber":
            part = fiber_parts[section[1]]
            if kw == "elements":
                if arity(1, "at least one element", at_least=True):
                    for t, c in tokens[1:]:
                        part["elements"].append(t)
                        positions[("element", section[1], len(part["elements"]) - 1)] = (lineno, c)
            elif kw == "top":
                if arity(1, "one element"):
                    part["top"] = args[0]
                    positions[("top", section[1])] = pos
            elif kw == "le":
                if arity(2, "two elements"):
                    part["le"].append((args[0], args[1]))
                    positions[("le", section[1], len(part["le"]) - 1)] = pos
            elif kw == "meet":
                if arity(3, "two elements and their meet"):
                    part["meet"].append((args[0], args[1], args[2]))
                    positions[("meet", section[1], len(part["meet"]) - 1)] = pos
            else:
                err(lineno, first_col, f"unknown fiber entry {kw}")
        elif section[0] == "reindex":
            if kw == "map":
                if arity(2, "a fiber element and its image"):
                    entries = reindexes[section[1]]
                    entries.append((args[0], args[1]))
                    positions[("map", section[1], len(entries) - 1)] = pos
            else:
                err(lineno, first_col, f"unknown reindex entry {kw}")
        elif section[0] == "cones":
            if kw == "cone":
                if arity(3, "a name, an apex, and at least one leg", at_least=True):
                    cones.append((args[0], args[1], tuple(args[2:])))
                    positions[("cone", len(cones) - 1)] = pos
            else:
                err(lineno, first_col, f"unknown cones entry {kw}")
        elif section[0] == "equality":
            if kw == "eq":
                if arity(2, "a cone name and an element"):
                    equalities.append((args[0], args[1]))
                    positions[("eq", len(equalities) - 1)] = pos
            else:
                err(lineno, first_col, f"unknown equality entry {kw}")

    for name, part in fiber_parts.items():
        declared = set()
        le = list(part["le"])
        for pair in le:
            declared.add(pair)
        for e in part["elements"]:
            if (e, e) not in declared:
                le.append((e, e))
        fibers.append(
            FiberSection(name, tuple(part["elements"]), tuple(le), part["top"], tuple(part["meet"]))
        )
        positions[("fiber-section", name)] = part["pos"]

    if errors:
        return ParseResult(None, tuple(errors), positions)
    doc = DoctrineDocument(
        tuple(options),
        tuple(objects),
        tuple(arrows),
        tuple(idents),
        tuple(composites),
        tuple(fibers),
        tuple((a, tuple(ms)) for a, ms in reindexes.items()),
        tuple(cones),
        tuple(equalities),
    )
    return ParseResult(doc, (), positions)


def print_document(doc: DoctrineDocument) -> str:
    """Canonical text whose parse equals the given document."""
    lines: list[str] = []

    def section(head: str, body: list[str]) -> None:
        if body:
            if lines:
                lines.append("")
            lines.append(f"[{head}]")
            lines.extend(body)

    section("options", [f"{k} {v}" for k, v in doc.options])
    body = []
    if doc.objects:
        body.append("objects " + " ".join(doc.objects))
    body.extend(f"arrow {n} {s} {t}" for n, s, t in doc.arrows)
    body.extend(f"ident {x} {a}" for x, a in doc.idents)
    body.extend(f"compose {g} {f} {h}" for g, f, h in doc.composites)
    section("category", body)
    for fib in doc.fibers:
        body = ["elements " + " ".join(fib.elements)]
        if fib.top is not None:
            body.append(f"top {fib.top}")
        body.extend(f"le {a} {b}" for a, b in fib.le)
        body.extend(f"meet {a} {b} {c}" for a, b, c in fib.meet)
        section(f"fiber {fib.name}", body)
    for arrow, maps in doc.reindexes:
        section(f"reindex {arrow}", [f"map {a} {b}" for a, b in maps])
    section("cones", [f"cone {n} {apex} {' '.join(legs)}" for n, apex, legs in doc.cones])
    section("equality", [f"eq {n} {e}" for n, e in doc.equalities])
    return "\n".join(lines) + "\n" if lines else ""


# ---------------------------------------------------------------------------
# resolution


@dataclass
class BuiltDocument:
    cat: FinCategory
    doctrine: Optional[Doctrine]
    eq: Optional[EqualityAssignment]
    notices: tuple[Finding, ...]
    chart: object = None
    max_len: Optional[int] = None


def _named_fixture(name: str) -> BuiltDocument:
    charts = {
        "TRIV": terminal_chart,
        "CHART3": chart3,
        "NOCOMP": lambda: finset_chart({"1": 1, "B": 2}),
    }
    if name == "PSI-CHART3":
        chart = chart3()
        doc, eq = weak_subobjects(chart)
        return BuiltDocument(doc.base, doc, eq, (), chart)
    if name == "NONEXISTENTIAL":
        cat, doc, eq = nonexistential_fixture()
        return BuiltDocument(cat, doc, eq, ())
    cat, doc, eq = build_fixture(name)
    chart = charts[name]() if name in charts else None
    return BuiltDocument(cat, doc, eq, (), chart)


FIXTURE_NAMES = ("TRIV", "CHAIN2", "CHART3", "PREORDER-DUP", "NOCOMP", "PSI-CHART3", "NONEXISTENTIAL")


def _resolve_cones(
    cat: FinCategory,
    doc: DoctrineDocument,
    positions: Mapping[tuple, tuple[int, int]],
    err: Callable[[tuple, str], None],
) -> dict[str, Cone]:
    named: dict[str, Cone] = {}
    for i, (name, apex, legs) in enumerate(doc.cones):
        key = ("cone", i)
        if name in named:
            err(key, f"duplicate cone name {name}")
            continue
        if apex not in cat.objects:
            err(key, f"unknown apex {apex}")
            continue
        bad = False
        for leg in legs:
            if leg not in cat.arrows:
                err(key, f"unknown leg {leg}")
                bad = True
        if bad:
            continue
        cone = Cone(apex, tuple(cat.tgt[leg] for leg in legs), tuple(legs))
        diags = validate_cone(cat, cone)
        if diags:
            err(key, f"cone {name}: " + "; ".join(diags))
            continue
        internal = enumerate_weak_products(cat, cone.feet)
        if cone not in [c for c, _cls in internal]:
            err(key, f"cone {name} is not an internal weak product over {cone.feet}")
            continue
        named[name] = cone
    return named


def load(text: str, path: str = "<document>") -> tuple[Optional[BuiltDocument], tuple[str, ...]]:
    """Parse and resolve a document into runnable tables, or located errors."""
    parsed = parse(text, path)
    if parsed.document is None:
        return None, parsed.errors
    doc = parsed.document
    positions = parsed.positions
    errors: list[str] = []

    def err(key: tuple, msg: str) -> None:
        line, col = positions.get(key, (1, 1))
        errors.append(f"{path}:{line}:{col}: {msg}")

    opts: dict[str, str] = {}
    for i, (k, v) in enumerate(doc.options):
        if k in opts:
            err(("option", i), f"duplicate option {k}")
        opts[k] = v
    doc_bound: Optional[int] = None
    if "max-len" in opts:
        if opts["max-len"].isdigit() and int(opts["max-len"]) > 0:
            doc_bound = int(opts["max-len"])
        else:
            err(("option", [k for k, _v in doc.options].index("max-len")), "max-len takes a positive integer")

    if "fixture" in opts:
        name = opts["fixture"]
        if name not in FIXTURE_NAMES:
            err(("option", [k for k, _v in doc.options].index("fixture")), f"unknown fixture {name}")
            return None, tuple(errors)
        if doc.objects or doc.arrows or doc.fibers or doc.reindexes:
            errors.append(f"{path}:1:1: a fixture import allows only cones and equality sections")
            return None, tuple(errors)
        built = _named_fixture(name)
        named = _resolve_cones(built.cat, doc, positions, err)
        if doc.equalities and built.eq is None:
            errors.append(f"{path}:1:1: fixture {name} carries no equality to override")
        table = dict(built.eq.table) if built.eq is not None else {}
        for i, (cname, elem) in enumerate(doc.equalities):
            if cname not in named:
                err(("eq", i), f"unknown cone {cname}")
                continue
            cone = named[cname]
            if built.doctrine is not None and elem not in built.doctrine.fib(cone.apex).elements:
                err(("eq", i), f"{elem} is not in the fiber over {cone.apex}")
                continue
            table[cone] = elem
        if errors:
            return None, tuple(errors)
        eq = EqualityAssignment(table) if built.eq is not None else None
        return BuiltDocument(built.cat, built.doctrine, eq, (), built.chart, doc_bound), ()

    if not doc.objects:
        errors.append(f"{path}:1:1: document declares no category")
        return None, tuple(errors)

    seen_obj: set[str] = set()
    for i, x in enumerate(doc.objects):
        if x in seen_obj:
            err(("object", i), f"duplicate object {x}")
        seen_obj.add(x)
    src: dict[str, str] = {}
    tgt: dict[str, str] = {}
    for i, (name, s, t) in enumerate(doc.arrows):
        if name in src:
            err(("arrow", i), f"duplicate arrow {name}")
            continue
        if s not in seen_obj:
            err(("arrow", i), f"unknown source {s}")
            continue
        if t not in seen_obj:
            err(("arrow", i), f"unknown target {t}")
            continue
        src[name] = s
        tgt[name] = t
    identities: dict[str, str] = {}
    for i, (x, a) in enumerate(doc.idents):
        if x not in seen_obj:
            err(("ident", i), f"unknown object {x}")
        elif a not in src:
            err(("ident", i), f"unknown arrow {a}")
        elif x in identities:
            err(("ident", i), f"duplicate identity for {x}")
        else:
            identities[x] = a
    compose: dict[tuple[str, str], str] = {}
    for i, (g, f, h) in enumerate(doc.composites):
        missing = [a for a in (g, f, h) if a not in src]
        if missing:
            err(("compose", i), f"unknown arrow {missing[0]}")
            continue
        if (g, f) in compose:
            err(("compose", i), f"duplicate composite for {g} after {f}")
            continue
        compose[(g, f)] = h
    if errors:
        return None, tuple(errors)
    diags = validate_category(doc.objects, tuple(src), src, tgt, identities, compose)
    if diags:
        errors.extend(f"{path}: category: {d}" for d in diags)
        return None, tuple(errors)
    cat = FinCategory(tuple(doc.objects), tuple(src), src, tgt, identities, compose)

    notices: list[Finding] = []
    doctrine: Optional[Doctrine] = None
    if doc.fibers:
        lattices: dict[str, InfSemilattice] = {}
        for fib in doc.fibers:
            key = ("fiber-section", fib.name)
            if fib.name not in seen_obj:
                err(key, f"unknown object {fib.name}")
                continue
            elems = set()
            for i, e in enumerate(fib.elements):
                if e in elems:
                    err(("element", fib.name, i), f"duplicate element {e}")
                elems.add(e)
            for i, (a, b) in enumerate(fib.le):
                for e in (a, b):
                    if e not in elems:
                        err(("le", fib.name, i), f"unknown element {e}")
            if fib.top is not None and fib.top not in elems:
                err(("top", fib.name), f"unknown element {fib.top}")
            meet_table: Optional[dict[tuple[str, str], str]] = None
            if fib.meet:
                meet_table = {(e, e): e for e in fib.elements}
                for i, (a, b, c) in enumerate(fib.meet):
                    for e in (a, b, c):
                        if e not in elems:
                            err(("meet", fib.name, i), f"unknown element {e}")
                            break
                    else:
                        meet_table[(a, b)] = c
                        meet_table[(b, a)] = c
                missing = [
                    (a, b)
                    for a in fib.elements
                    for b in fib.elements
                    if (a, b) not in meet_table
                ]
                if missing:
                    err(key, f"incomplete meet table: missing {missing[0][0]} {missing[0][1]}")
            else:
                notices.append(
                    Finding(PASS, "meet-synthesis", f"fiber {fib.name}", "meet table synthesized from the order")
                )
            if errors:
                continue
            try:
                lattices[fib.name] = semilattice(fib.elements, fib.le, fib.top, meet_table)
            except InputError as exc:
                err(key, str(exc))
        missing_fibers = [x for x in doc.objects if x not in {f.name for f in doc.fibers}]
        for x in missing_fibers:
            errors.append(f"{path}: doctrine: no fiber section for object {x}")
        if errors:
            return None, tuple(errors)

        reindex: dict[str, MonotoneMap] = {}
        declared = dict(doc.reindexes)
        for arrow, maps in doc.reindexes:
            key = ("reindex-section", arrow)
            if arrow not in src:
                err(key, f"unknown arrow {arrow}")
                continue
            source = lattices[tgt[arrow]]
            target = lattices[src[arrow]]
            table: dict[str, str] = {}
            for i, (a, b) in enumerate(maps):
                if a not in source.elements:
                    err(("map", arrow, i), f"{a} is not in the fiber over {tgt[arrow]}")
                    continue
                if b not in target.elements:
                    err(("map", arrow, i), f"{b} is not in the fiber over {src[arrow]}")
                    continue
                if a in table:
                    err(("map", arrow, i), f"duplicate map entry for {a}")
                    continue
                table[a] = b
            for e in source.elements:
                if e not in table:
                    err(key, f"missing map entry for {e}")
            if errors:
                continue
            m = MonotoneMap(source, target, table)
            diags = validate_monotone(m)
            if diags:
                err(key, "; ".join(diags))
                continue
            reindex[arrow] = m
        for arrow in cat.arrows:
            if arrow in reindex:
                continue
            if arrow in identities.values():
                reindex[arrow] = identity_map(lattices[src[arrow]])
            elif arrow not in declared:
                errors.append(f"{path}: doctrine: no reindex section for arrow {arrow}")
        if errors:
            return None, tuple(errors)
        doctrine = Doctrine(cat, lattices, reindex)
        from .doctrine import validate_doctrine

        diags = validate_doctrine(doctrine)
        if diags:
            errors.extend(f"{path}: doctrine: {d}" for d in diags)
            return None, tuple(errors)

    named = _resolve_cones(cat, doc, positions, err)
    eq: Optional[EqualityAssignment] = None
    if doc.equalities:
        if doctrine is None:
            errors.append(f"{path}: equality: document declares no fibers")
            return None, tuple(errors)
        table = {}
        for i, (cname, elem) in enumerate(doc.equalities):
            if cname not in named:
                err(("eq", i), f"unknown cone {cname}")
                continue
            cone = named[cname]
            if elem not in doctrine.fib(cone.apex).elements:
                err(("eq", i), f"{elem} is not in the fiber over {cone.apex}")
                continue
            if cone in table:
                err(("eq", i), f"duplicate equality for cone {cname}")
                continue
            table[cone] = elem
        if not errors:
            for x in cat.objects:
                for cone, _cls in enumerate_weak_products(cat, (x, x)):
                    if cone not in table:
                        errors.append(
                            f"{path}: equality: no element for internal cone {cone.label()} over ({x}, {x})"
                        )
        if errors:
            return None, tuple(errors)
        eq = EqualityAssignment(table)
    if errors:
        return None, tuple(errors)
    return BuiltDocument(cat, doctrine, eq, tuple(notices), None, doc_bound), ()


# ---------------------------------------------------------------------------
# commands


def _need_doctrine(built: BuiltDocument) -> tuple[Doctrine, EqualityAssignment]:
    if built.doctrine is None:
        raise InputError("the input carries no doctrine")
    if built.eq is None:
        raise InputError("the input carries no equality assignment")
    return built.doctrine, built.eq


def _feet(args) -> tuple[str, ...]:
    if not args.feet:
        raise InputError(f"{args.command} needs --feet")
    return tuple(args.feet.split(","))


def _object(args) -> str:
    if not args.object:
        raise InputError(f"{args.command} needs --object")
    return args.object


def _psi_of(built: BuiltDocument):
    chartlike = built.chart if built.chart is not None else built.cat
    return chartlike, weak_subobjects(chartlike)


def _cmd_validate(built: BuiltDocument, args) -> Report:
    cat = built.cat
    fs = [Finding(PASS, "category", "base", f"{len(cat.objects)} object(s), {len(cat.arrows)} arrow(s)")]
    if built.doctrine is not None:
        for x in cat.objects:
            fs.append(Finding(PASS, "fiber", x, f"{len(built.doctrine.fib(x).elements)} element(s)"))
        fs.append(Finding(PASS, "doctrine", "reindexing", f"{len(cat.arrows)} arrow map(s)"))
    if built.eq is not None:
        fs.append(Finding(PASS, "equality", "assignment", f"{len(built.eq.table)} cone(s)"))
    return report("validate", fs)


def _cmd_check_biased(built: BuiltDocument, args) -> Report:
    return check_biased_elementary(*_need_doctrine(built))


def _cmd_check_strict(built: BuiltDocument, args) -> Report:
    doc, eq = _need_doctrine(built)
    cat = built.cat
    cones: dict[tuple[str, str], Cone] = {}
    delta: dict[str, str] = {}
    for x in cat.objects:
        for cone, cls in enumerate_weak_products(cat, (x, x)):
            if cls == STRICT:
                cones[(x, x)] = cone
                delta[x] = eq.value(cone)
                break
    return check_strict_elementary(doc, StrictDelta(cones, delta))


def _cmd_rbp(built: BuiltDocument, args) -> Report:
    doc, eq = _need_doctrine(built)
    fs = []
    for x in built.cat.objects:
        for cone, _cls in enumerate_weak_products(built.cat, (x, x)):
            ok, wit = is_rbp(doc, cone, eq.value(cone))
            fs.append(Finding(PASS if ok else FAIL, "rbp", cone.label(), wit))
    if not fs:
        fs.append(Finding(VACUOUS, "rbp", "base", "no internal doubled weak products"))
    return report("rbp", fs)


def _cmd_pi(built: BuiltDocument, args) -> Report:
    doc, eq = _need_doctrine(built)
    feet = _feet(args)
    cones = enumerate_weak_products(built.cat, feet)
    if not cones:
        raise ChartTooShallow(f"({', '.join(feet)})", "an internal weak product cone")
    fs = []
    sizes = set()
    counted = 0
    for cone, _cls in cones:
        try:
            lat = pi_elements(doc, eq, cone)
        except ChartTooShallow as exc:
            fs.append(Finding(SHALLOW, "pi-classes", cone.label(), f"missing {exc.missing}"))
            continue
        counted += 1
        sizes.add(len(lat.elements))
        fs.append(
            Finding(PASS, "pi-classes", cone.label(), f"{len(lat.elements)} class(es): {' '.join(lat.elements)}")
        )
    if counted:
        agree = len(sizes) == 1
        fs.append(
            Finding(
                PASS if agree else FAIL,
                "pi-agreement",
                f"({', '.join(feet)})",
                f"{counted} cone(s) with class counts {sorted(sizes)}",
            )
        )
    else:
        fs.append(Finding(SHALLOW, "pi-agreement", f"({', '.join(feet)})", "no cone carries an internal diagram"))
    return report("pi", fs)


def _cmd_strict_fiber(built: BuiltDocument, args) -> Report:
    doc, eq = _need_doctrine(built)
    feet = _feet(args)
    sf = strict_fiber(doc, eq, feet)
    fs = [
        Finding(
            PASS,
            "strict-fiber",
            f"({', '.join(feet)})",
            f"{len(sf.classes.elements)} class(es) on {len(sf.cones)} internal cone(s)",
        ),
        Finding(PASS, "canonical", sf.canonical.label(), f"classes: {' '.join(sf.classes.elements)}"),
    ]
    return report("strict-fiber", fs)


def _cmd_strictify(built: BuiltDocument, args) -> Report:
    doc, eq = _need_doctrine(built)
    st = strictification(doc, eq, args.bound)
    return merge("strictify", [check_strictification(st), roundtrip_biased(st, st.embedding)])


def _cmd_complete(built: BuiltDocument, args) -> Report:
    doc, eq = _need_doctrine(built)
    qc = quotient_completion(doc, eq)
    census = [
        Finding(
            PASS,
            "size",
            "base",
            f"{len(qc.base.objects)} object(s), {len(qc.base.arrows)} arrow class(es)",
        )
    ]
    for o in qc.base.objects:
        census.append(Finding(PASS, "object", o, f"fiber of {len(qc.doc.fib(o).elements)} element(s)"))
    for key in ("PD", "ED", "EqD", "QD"):
        ok, wit = qc.flags[key]
        census.append(Finding(PASS if ok else FAIL, "canonical-flag", key, wit))
    return merge("complete", [report("census", census), check_QD(qc)])


def _cmd_flags_of_quotient(built: BuiltDocument, args) -> Report:
    doc, eq = _need_doctrine(built)
    x = _object(args)
    fs = []
    for rel in relations_on(doc, eq, x):
        cert = find_quotient(doc, eq, rel)
        if cert is None:
            fs.append(Finding(SHALLOW, "quotient", rel.label(), "no internal quotient arrow"))
            continue
        fs.append(Finding(PASS, "quotient", rel.label(), f"arrow {cert.arrow}"))
        for law, (ok, wit) in quotient_flags(doc, eq, cert.arrow, rel).items():
            fs.append(Finding(PASS if ok else FAIL, law, f"{rel.label()} via {cert.arrow}", wit))
    return report("flags-of-quotient", fs)


def _cmd_left_covering(built: BuiltDocument, args) -> Report:
    doc, eq = _need_doctrine(built)
    qc = quotient_completion(doc, eq)
    return is_left_covering(qc.restricted, qc.restricted_eq, qc.doc, qc.eqn, qc.canonical)


def _cmd_lift(built: BuiltDocument, args) -> Report:
    doc, eq = _need_doctrine(built)
    qc = quotient_completion(doc, eq)
    _lifted, rep = lift_left_covering(qc, qc.canonical, qc)
    return rep


def _cmd_commute_slice(built: BuiltDocument, args) -> Report:
    doc, eq = _need_doctrine(built)
    return slice_quotient_commute(doc, eq, _object(args))


def _cmd_per(built: BuiltDocument, args) -> Report:
    chartlike, (psi_doc, psi_eq) = _psi_of(built)
    fs = []
    for per in enumerate_pers(built.cat):
        rel = per_to_rel(chartlike, per, psi=(psi_doc, psi_eq))
        back = per_to_rel(chartlike, rel_to_per(chartlike, rel), psi=(psi_doc, psi_eq))
        stable = (back.carrier, back.relation) == (rel.carrier, rel.relation)
        fs.append(
            Finding(PASS if stable else FAIL, "per-round-trip", per.label(), f"relation {rel.label()}")
        )
    if not fs:
        fs.append(Finding(VACUOUS, "per-round-trip", "base", "no internal pseudo equivalence relations"))
    return report("per", fs)


def _cmd_exact_compare(built: BuiltDocument, args) -> Report:
    chartlike, (psi_doc, psi_eq) = _psi_of(built)
    ec = exact_completion(built.cat)
    qc = quotient_completion(psi_doc, psi_eq)
    res = find_equivalence(ec, qc.base)
    verdict = PASS if res.status == "found" else (OUT_OF_BOUND if res.status == "budget-exhausted" else FAIL)
    finding = Finding(
        verdict,
        "exact-compare",
        "exact completion vs quotient completion base",
        f"equivalence {res.status}; {len(ec.objects)} vs {len(qc.base.objects)} object(s)",
    )
    return report("exact-compare", [finding])


def _cmd_equiv(built: BuiltDocument, args) -> Report:
    if not args.document or not args.fixture:
        raise InputError("equiv compares a document against a fixture; give a document and --fixture")
    other = _named_fixture(args.fixture)
    res = find_equivalence(built.cat, other.cat)
    verdict = PASS if res.status == "found" else (OUT_OF_BOUND if res.status == "budget-exhausted" else FAIL)
    finding = Finding(
        verdict,
        "equiv",
        f"document vs {args.fixture}",
        f"equivalence {res.status}; {len(built.cat.objects)} vs {len(other.cat.objects)} object(s)",
    )
    return report("equiv", [finding])


HANDLERS: dict[str, Callable[[BuiltDocument, argparse.Namespace], Report]] = {
    "validate": _cmd_validate,
    "check-biased": _cmd_check_biased,
    "check-strict": _cmd_check_strict,
    "rbp": _cmd_rbp,
    "pi": _cmd_pi,
    "strict-fiber": _cmd_strict_fiber,
    "strictify": _cmd_strictify,
    "complete": _cmd_complete,
    "flags-of-quotient": _cmd_flags_of_quotient,
    "left-covering": _cmd_left_covering,
    "lift": _cmd_lift,
    "commute-slice": _cmd_commute_slice,
    "per": _cmd_per,
    "exact-compare": _cmd_exact_compare,
    "equiv": _cmd_equiv,
}


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doctrines",
        description="Check doctrine axioms and build completions on finite charts.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run {name}")
        p.add_argument("document", nargs="?", help="path to a doctrine document")
        p.add_argument("--fixture", help="built-in fixture name: " + " ".join(FIXTURE_NAMES))
        p.add_argument("--object", help="object name, for commands anchored at one object")
        p.add_argument("--feet", help="comma-separated object names, e.g. 1,1")
        p.add_argument("--max-len", type=int, dest="max_len", help="list-length bound for strictification")
        p.add_argument("--out", help="write the report to this file instead of stdout")
        p.add_argument(
            "--format",
            choices=("text", "machine-readable"),
            default="text",
            help="report format (default text)",
        )
    return parser


def _echo(args) -> str:
    parts = [args.command]
    if args.document:
        parts.append(args.document)
    if args.fixture:
        parts.extend(["--fixture", args.fixture])
    if args.object:
        parts.extend(["--object", args.object])
    if args.feet:
        parts.extend(["--feet", args.feet])
    if args.max_len is not None:
        parts.extend(["--max-len", str(args.max_len)])
    return "command: " + " ".join(parts) + "\n"


def _resolve_input(args) -> tuple[Optional[BuiltDocument], tuple[str, ...]]:
    if args.document and args.fixture and args.command != "equiv":
        return None, ("give either a document or --fixture, not both",)
    if args.document:
        try:
            with open(args.document, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            return None, (f"cannot read {args.document}: {exc.strerror}",)
        return load(text, args.document)
    if args.fixture:
        if args.fixture not in FIXTURE_NAMES:
            return None, (f"unknown fixture {args.fixture}",)
        return _named_fixture(args.fixture), ()
    return None, ("a document path or --fixture is required",)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    built, errors = _resolve_input(args)
    if built is None:
        for line in errors:
            print(line, file=sys.stderr)
        return 2

    if args.max_len is not None:
        args.bound = args.max_len
    elif built.max_len is not None:
        args.bound = built.max_len
    else:
        args.bound = 3

    try:
        rep = HANDLERS[args.command](built, args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ChartTooShallow as exc:
        print(f"chart too shallow: {exc}", file=sys.stderr)
        return 2

    final = Report(rep.title, built.notices + rep.findings)
    if args.format == "machine-readable":
        body = final.to_machine()
    else:
        body = _echo(args) + final.render()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return final.exit_code


if __name__ == "__main__":
    sys.exit(main())
