"""Closure, graded antisymmetry and graded Jacobi checks for the two symmetry algebras.

Degrees are pairs in Z2 x Z2. The superalgebra is encoded with parity p as
degree (p, 0), so a single rule covers both cases: the bracket of degrees
a and b is a commutator when ``a.b`` is even and an anticommutator when it
is odd, and the Jacobi sign is ``(-1)^(a.b)``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .exactla import SpanBasis
from .model import FIRST_ORDER_COMMUTING, FIRST_ORDER_ANTICOMMUTING, SECOND_ORDER, SPATIAL, GeneratorCatalog
from .parallel import parallel_map
from .scalars import ZERO, Scalar
from .weyl import DiffOperator, bracket_kind, degree_dot, degree_sum, linear_combination

SUPER = "superalgebra"
Z2Z2 = "z2z2"


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    generators: tuple[str, ...]
    degrees: dict
    rule: str

    def __post_init__(self):
        missing = [g for g in self.generators if g not in self.degrees]
        if missing:
            raise ValueError(f"generators without a degree: {missing}")
        if self.rule not in (SUPER, Z2Z2):
            raise ValueError(f"unknown bracket rule {self.rule!r}")

    def degree(self, name: str) -> tuple:
        return self.degrees[name]

    def kind(self, a: str, b: str) -> str:
        return bracket_kind(self.degrees[a], self.degrees[b])

    def sign(self, a: str, b: str) -> int:
        return -1 if degree_dot(self.degrees[a], self.degrees[b]) % 2 else 1

    def target_degree(self, a: str, b: str) -> tuple:
        return degree_sum(self.degrees[a], self.degrees[b])

    def component(self, deg: tuple) -> tuple[str, ...]:
        return tuple(g for g in self.generators if self.degrees[g] == deg)

    def subset(self, names: Iterable[str], name: str | None = None) -> AlgebraSpec:
        names = tuple(n for n in self.generators if n in set(names))
        return AlgebraSpec(name or f"{self.name}-subset", names, {n: self.degrees[n] for n in names}, self.rule)


def superalgebra_spec(include_xt: bool = False) -> AlgebraSpec:
    """N=1 super Schroedinger algebra: Schroedinger generators plus M even, Q, S, X_j odd.

    The tilde-X generators are not part of the super Schroedinger algebra;
    ``include_xt=True`` adds them as even generators for exploration.
    """
    even = [g for g in FIRST_ORDER_COMMUTING if include_xt or not g.startswith("Xt")]
    gens = tuple(even) + FIRST_ORDER_ANTICOMMUTING
    degrees = {g: (0, 0) for g in even}
    degrees.update({g: (1, 0) for g in FIRST_ORDER_ANTICOMMUTING})
    return AlgebraSpec("super", gens, degrees, SUPER)


def z2z2_spec() -> AlgebraSpec:
    """The Z2 x Z2 graded assignment; M is not a generator."""
    degrees = {}
    for g in ("H", "D", "K", "J12", "J13", "J23", "Xt1", "Xt2", "Xt3"):
        degrees[g] = (0, 0)
    for g in SECOND_ORDER:
        if g[0] in "WPG":  # W, Pt, Gt
            degrees[g] = (0, 0)
        else:  # Y, Z
            degrees[g] = (1, 0)
    for j in SPATIAL:
        degrees[f"P{j}"] = (0, 1)
        degrees[f"G{j}"] = (0, 1)
        degrees[f"X{j}"] = (1, 1)
    degrees["Q"] = (1, 0)
    degrees["S"] = (1, 0)
    order = [g for g in FIRST_ORDER_COMMUTING + FIRST_ORDER_ANTICOMMUTING + SECOND_ORDER if g in degrees]
    return AlgebraSpec("z2z2", tuple(order), degrees, Z2Z2)


def get_spec(name: str) -> AlgebraSpec:
    if name in ("super", SUPER):
        return superalgebra_spec()
    if name == Z2Z2:
        return z2z2_spec()
    raise ValueError(f"unknown algebra {name!r} (expected 'super' or 'z2z2')")


# --------------------------------------------------------------------------
# Bracket table
# --------------------------------------------------------------------------


@dataclass
class BracketEntry:
    left: str
    right: str
    kind: str
    expansion: tuple  # ((name, Scalar), ...) in generator order
    closed: bool
    result: DiffOperator
    residual: DiffOperator | None = None
    # expansion uses only generators of the expected degree
    graded: bool = True

    def expansion_text(self) -> list[tuple[str, str]]:
        return [(name, c.render()) for name, c in self.expansion]

    def coefficient(self, name: str) -> Scalar:
        return dict(self.expansion).get(name, ZERO)


@dataclass
class StructureConstants:
    spec: AlgebraSpec
    entries: dict = field(default_factory=dict)
    rank: int = 0
    relations: list = field(default_factory=list)

    def __getitem__(self, pair) -> BracketEntry:
        return self.entries[pair]

    @property
    def closed(self) -> bool:
        return all(e.closed for e in self.entries.values())

    @property
    def graded(self) -> bool:
        return all(e.graded for e in self.entries.values())

    def failures(self) -> list[BracketEntry]:
        return [self.entries[k] for k in sorted(self.entries) if not self.entries[k].closed]

    def ordered(self) -> list[BracketEntry]:
        return [self.entries[k] for k in sorted(self.entries)]

    def appearing(self) -> set[str]:
        """Generators with a nonzero coefficient in some expansion."""
        return {name for e in self.entries.values() for name, _ in e.expansion}

    def payload(self, render=None) -> dict:
        rows = []
        for e in self.ordered():
            row = {
                "left": e.left,
                "right": e.right,
                "kind": e.kind,
                "expansion": [[n, c] for n, c in e.expansion_text()],
                "closed": e.closed,
            }
            if not e.closed and render is not None:
                row["residual"] = render(e.residual)
            rows.append(row)
        return {
            "algebra": self.spec.name,
            "rule": self.spec.rule,
            "generators": sorted(self.spec.generators),
            "degrees": {g: list(self.spec.degrees[g]) for g in sorted(self.spec.generators)},
            "rank": self.rank,
            "closed": self.closed,
            "entries": rows,
        }

    def to_json(self, render=None) -> str:
        return json.dumps(self.payload(render), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["left", "right", "kind", "expansion", "closed"])
        for e in self.ordered():
            exp = ";".join(f"{n}:{c}" for n, c in e.expansion_text())
            w.writerow([e.left, e.right, e.kind, exp, "true" if e.closed else "false"])
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = [
            f"### Structure constants: {self.spec.name} ({self.spec.rule})",
            "",
            "| left | right | kind | bracket |",
            "|---|---|---|---|",
        ]
        for e in self.ordered():
            if not e.expansion and e.closed:
                continue
            sym = "[,]" if e.kind == "commutator" else "{,}"
            body = " + ".join(f"({c})*{n}" for n, c in e.expansion_text()) if e.closed else "NOT CLOSED"
            lines.append(f"| {e.left} | {e.right} | {sym} | {body} |")
        lines.append("")
        lines.append("All brackets not listed vanish.")
        return "\n".join(lines) + "\n"


class _Expander:
    """Span bases over the allowed target generators, one per target degree."""

    def __init__(self, spec: AlgebraSpec, catalog: GeneratorCatalog):
        self.spec = spec
        self.order = {g: k for k, g in enumerate(spec.generators)}
        self.bases: dict = {}
        self.catalog = catalog

    def basis_for(self, deg: tuple) -> SpanBasis:
        key = deg if self.spec.rule == Z2Z2 else None
        if key not in self.bases:
            names = self.spec.component(deg) if key is not None else self.spec.generators
            span = SpanBasis()
            for n in names:
                span.add(n, self.catalog[n].vector())
            self.bases[key] = span
        return self.bases[key]

    def expand(self, op: DiffOperator, deg: tuple):
        coeffs, residual = self.basis_for(deg).expand(op.vector())
        expansion = tuple(sorted(coeffs.items(), key=lambda kv: self.order[kv[0]]))
        graded = all(self.spec.degrees[n] == deg for n, _ in expansion)
        return expansion, residual


def _pair_job(pair, ctx):
    a, b = pair
    spec, catalog = ctx
    A, B = catalog[a], catalog[b]
    AB = A * B
    BA = B * A if a != b else AB
    kind = spec.kind(a, b)
    if kind == "commutator":
        return AB - BA, BA - AB
    return AB + BA, BA + AB


def bracket_table(
    spec: AlgebraSpec, catalog: GeneratorCatalog, workers: int = 1
) -> StructureConstants:
    """Every ordered graded bracket, expanded over the allowed target generators.

    For the z2z2 rule the target is the graded component of the degree sum;
    for the superalgebra rule it is the full generator list. Both orders of
    a pair come from the same two products AB and BA.
    """
    gens = spec.generators
    pairs = [(a, b) for i, a in enumerate(gens) for b in gens[i:]]
    results = parallel_map(_pair_job, pairs, (spec, catalog), workers)
    expander = _Expander(spec, catalog)
    table = StructureConstants(spec)
    for (a, b), (ab, ba) in zip(pairs, results):
        deg = spec.target_degree(a, b)
        kind = spec.kind(a, b)
        table.entries[(a, b)] = _entry(expander, a, b, kind, ab, deg)
        if a != b:
            fwd = table.entries[(a, b)]
            flip = -spec.sign(a, b)  # [[b,a]] = -(-1)^(a.b) [[a,b]]
            if fwd.closed and ba == ab.scale(flip):
                table.entries[(b, a)] = BracketEntry(
                    b, a, kind, tuple((n, c * flip) for n, c in fwd.expansion), True, ba,
                    graded=fwd.graded,
                )
            else:
                table.entries[(b, a)] = _entry(expander, b, a, kind, ba, deg)
    full = SpanBasis()
    for n in gens:
        full.add(n, catalog[n].vector())
    table.rank = full.rank
    table.relations = full.dependent
    return table


def _entry(expander: _Expander, a, b, kind, op: DiffOperator, deg) -> BracketEntry:
    expansion, residual = expander.expand(op, deg)
    graded = all(expander.spec.degrees[n] == deg for n, _ in expansion)
    if residual:
        return BracketEntry(a, b, kind, expansion, False, op, DiffOperator.from_vector(residual), graded)
    return BracketEntry(a, b, kind, expansion, True, op, None, graded)


# --------------------------------------------------------------------------
# Antisymmetry and Jacobi
# --------------------------------------------------------------------------


def antisymmetry_check(
    spec: AlgebraSpec,
    catalog: GeneratorCatalog,
    pairs: Sequence[tuple[str, str]] | None = None,
    table: StructureConstants | None = None,
) -> list[tuple[str, str]]:
    """Pairs violating ``[[a,b]] = -(-1)^(a.b) [[b,a]]`` (computed on operators)."""
    gens = spec.generators
    if pairs is None:
        pairs = [(a, b) for a in gens for b in gens]
    violations = []
    for a, b in pairs:
        if table is not None and (a, b) in table.entries and (b, a) in table.entries:
            ab, ba = table[(a, b)].result, table[(b, a)].result
        else:
            A, B = catalog[a], catalog[b]
            kind = spec.kind(a, b)
            ab = A * B - B * A if kind == "commutator" else A * B + B * A
            ba = B * A - A * B if kind == "commutator" else B * A + A * B
        if ab != ba.scale(-spec.sign(a, b)):
            violations.append((a, b))
    return violations


@dataclass
class JacobiViolation:
    triple: tuple[str, str, str]
    jacobiator: DiffOperator


def _bracket_with(spec: AlgebraSpec, A: DiffOperator, deg_a, B: DiffOperator, deg_b) -> DiffOperator:
    if degree_dot(deg_a, deg_b) % 2:
        return A * B + B * A
    return A * B - B * A


def jacobiator(
    spec: AlgebraSpec,
    catalog: GeneratorCatalog,
    a: str,
    b: str,
    c: str,
    table: StructureConstants | None = None,
    method: str = "direct",
) -> DiffOperator:
    """``[[a,[[b,c]]]] - [[[[a,b]],c]] - (-1)^(a.b) [[b,[[a,c]]]]`` as an operator.

    ``method="direct"`` performs every nested bracket by operator products
    (inner brackets come from the table's cached products when available).
    ``method="expansion"`` is a faster cross-check: each inner bracket is
    replaced by its exact structure-constant expansion and the cached outer
    brackets are combined. It falls back to products when an inner bracket
    did not close or its expansion is not homogeneous.
    """
    dg = spec.degrees
    sab = spec.sign(a, b)
    if method == "expansion" and table is not None:
        parts = []
        for inner, outer_left, sign in (((b, c), a, 1), ((a, b), None, -1), ((a, c), b, -sab)):
            entry = table.entries.get(inner)
            if entry is None or not entry.closed or not entry.graded:
                return jacobiator(spec, catalog, a, b, c, table, "direct")
            for g, coef in entry.expansion:
                key = (outer_left, g) if outer_left is not None else (g, c)
                parts.append((coef * sign, table.entries[key].result))
        return linear_combination(parts)
    if method not in ("direct", "expansion"):
        raise ValueError(f"unknown Jacobi method {method!r}")

    def inner(x, y):
        if table is not None and (x, y) in table.entries:
            return table[(x, y)].result
        return _bracket_with(spec, catalog[x], dg[x], catalog[y], dg[y])

    A, C = catalog[a], catalog[c]
    B = catalog[b]
    bc, ab, ac = inner(b, c), inner(a, b), inner(a, c)
    lhs = _bracket_with(spec, A, dg[a], bc, degree_sum(dg[b], dg[c]))
    r1 = _bracket_with(spec, ab, degree_sum(dg[a], dg[b]), C, dg[c])
    r2 = _bracket_with(spec, B, dg[b], ac, degree_sum(dg[a], dg[c]))
    return lhs - r1 - r2.scale(sab)


def _jacobi_job(triples, ctx):
    spec, catalog, table, method = ctx
    out = []
    for a, b, c in triples:
        jac = jacobiator(spec, catalog, a, b, c, table, method)
        if jac:
            out.append(JacobiViolation((a, b, c), jac))
    return out


def jacobi_check(
    spec: AlgebraSpec,
    catalog: GeneratorCatalog,
    table: StructureConstants | None = None,
    method: str = "direct",
    triples: Iterable[tuple[str, str, str]] | None = None,
    workers: int = 1,
) -> list[JacobiViolation]:
    """Graded Jacobi identity on every ordered triple (lexicographic by name).

    The default evaluates every nested bracket on operators, independent
    of any linear relations among the generators. Without a table the
    method is forced to "direct".
    """
    if table is None:
        method = "direct"
    names = sorted(spec.generators)
    triples = list(product(names, names, names) if triples is None else triples)
    size = max(1, len(triples) // max(1, 8 * workers))
    chunks = [triples[k:k + size] for k in range(0, len(triples), size)]
    found = parallel_map(_jacobi_job, chunks, (spec, catalog, table, method), workers)
    return [v for chunk in found for v in chunk]


# --------------------------------------------------------------------------
# Subalgebras, comparison, rank
# --------------------------------------------------------------------------


def subalgebra_check(
    spec: AlgebraSpec,
    subset: Iterable[str],
    catalog: GeneratorCatalog,
    table: StructureConstants | None = None,
) -> bool:
    """True iff every bracket of the subset expands over the subset (graded for z2z2)."""
    sub = spec.subset(subset)
    expander = _Expander(sub, catalog)
    for a in sub.generators:
        for b in sub.generators:
            if table is not None and (a, b) in table.entries:
                op = table[(a, b)].result
            else:
                op = _bracket_with(spec, catalog[a], spec.degrees[a], catalog[b], spec.degrees[b])
            _, residual = expander.expand(op, sub.target_degree(a, b))
            if residual:
                return False
    return True


def sub_superalgebras(spec: AlgebraSpec | None = None) -> dict[str, tuple[str, ...]]:
    spec = spec or z2z2_spec()
    return {
        "g00+g01": spec.component((0, 0)) + spec.component((0, 1)),
        "g00+g10": spec.component((0, 0)) + spec.component((1, 0)),
    }


@dataclass
class Divergence:
    left: str
    right: str
    super_kind: str
    super_expansion: tuple
    z2z2_kind: str
    z2z2_expansion: tuple

    def payload(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "super": {"kind": self.super_kind, "expansion": [[n, c.render()] for n, c in self.super_expansion]},
            "z2z2": {"kind": self.z2z2_kind, "expansion": [[n, c.render()] for n, c in self.z2z2_expansion]},
        }


def compare_algebras(
    catalog: GeneratorCatalog,
    super_table: StructureConstants | None = None,
    z2z2_table: StructureConstants | None = None,
) -> list[Divergence]:
    """Shared generator pairs whose bracket kind differs between the two algebras."""
    sspec = super_table.spec if super_table is not None else superalgebra_spec()
    zspec = z2z2_table.spec if z2z2_table is not None else z2z2_spec()
    shared = sorted(set(sspec.generators) & set(zspec.generators))
    out = []
    for i, a in enumerate(shared):
        for b in shared[i:]:
            sk, zk = sspec.kind(a, b), zspec.kind(a, b)
            if sk == zk:
                continue
            out.append(
                Divergence(
                    a, b,
                    sk, _lookup_expansion(super_table, sspec, catalog, a, b),
                    zk, _lookup_expansion(z2z2_table, zspec, catalog, a, b),
                )
            )
    return out


def _lookup_expansion(table, spec, catalog, a, b) -> tuple:
    if table is not None and (a, b) in table.entries:
        return table[(a, b)].expansion
    op = _bracket_with(spec, catalog[a], spec.degrees[a], catalog[b], spec.degrees[b])
    expansion, residual = _Expander(spec, catalog).expand(op, spec.target_degree(a, b))
    if residual:
        raise ValueError(f"bracket of {a}, {b} does not close in {spec.name}")
    return expansion


def rank_report(catalog: GeneratorCatalog, names: Sequence[str]) -> dict:
    """Exact rank of the named operators and the linear relations among them."""
    span = SpanBasis()
    for n in names:
        span.add(n, catalog[n].vector())
    return {
        "count": len(names),
        "rank": span.rank,
        "relations": [
            {"generator": label, "combination": [[n, c.render()] for n, c in sorted(combo.items())]}
            for label, combo in span.dependent
        ],
    }
