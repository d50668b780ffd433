"""Finite discrete groupoids given by explicit composition tables.

Objects are identified with identity arrows, so ``units`` is a subset of
``arrows``.  A finite discrete groupoid is automatically Hausdorff and
ample with compact open unit space: every subset is compact open.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import GroupoidValidationError, UsageError

__all__ = [
    "FiniteGroupoid",
    "Violation",
    "full_equivalence_groupoid",
    "groupoid_from_group_action",
    "cyclic_group_table",
    "disjoint_union",
    "is_bisection",
    "load_groupoid_file",
    "groupoid_from_document",
    "resolve_groupoid",
]


@dataclass(frozen=True)
class Violation:
    kind: str
    arrows: tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.arrows:
            return self.kind
        return f"{self.kind}: {', '.join(self.arrows)}"


@dataclass(eq=False)
class FiniteGroupoid:
    """A groupoid presented by its structure maps.

    The constructor does not check the axioms, so broken tables can be
    built on purpose; call :meth:`validate` (or :meth:`check`) to test them.
    ``arrows`` keeps its given order, which fixes the canonical order used
    by enumerations and reports.
    """

    arrows: tuple[str, ...]
    units: frozenset[str]
    src: Mapping[str, str]
    rng: Mapping[str, str]
    inv: Mapping[str, str]
    comp: Mapping[tuple[str, str], str]
    name: str = ""
    _fibers: dict = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.arrows = tuple(self.arrows)
        self.units = frozenset(self.units)
        self.src = dict(self.src)
        self.rng = dict(self.rng)
        self.inv = dict(self.inv)
        self.comp = dict(self.comp)

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (
            set(self.arrows) == set(other.arrows)
            and self.units == other.units
            and self.src == other.src
            and self.rng == other.rng
            and self.inv == other.inv
            and self.comp == other.comp
        )

    __hash__ = None

    @property
    def unit_list(self) -> list[str]:
        return [a for a in self.arrows if a in self.units]

    def range_fiber(self, unit: str) -> list[str]:
        """Arrows with range ``unit``, in arrow order."""
        if self._fibers is None:
            fibers: dict[str, list[str]] = {}
            for a in self.arrows:
                fibers.setdefault(self.rng.get(a), []).append(a)
            self._fibers = fibers
        return self._fibers.get(unit, [])

    def compose(self, a: str, b: str) -> str | None:
        """``a*b`` (first apply b, then a), or None when not composable."""
        return self.comp.get((a, b))

    def is_composable(self, a: str, b: str) -> bool:
        return self.src[a] == self.rng[b]

    def validate(self) -> list[Violation]:
        """Return every violated groupoid axiom; empty means valid."""
        out: list[Violation] = []
        arrows = set(self.arrows)
        if len(arrows) != len(self.arrows):
            seen: set[str] = set()
            dups = [a for a in self.arrows if a in seen or seen.add(a)]
            out.append(Violation("duplicate arrow ids", tuple(dups)))
        for u in sorted(self.units - arrows):
            out.append(Violation("unit is not an arrow", (u,)))
        for a in self.arrows:
            for label, table in (("src", self.src), ("rng", self.rng)):
                if table.get(a) not in self.units:
                    out.append(Violation(f"{label} missing or not a unit", (a,)))
            if self.inv.get(a) not in arrows:
                out.append(Violation("inv missing or not an arrow", (a,)))
        for u in sorted(self.units & arrows):
            if self.src.get(u) != u or self.rng.get(u) != u:
                out.append(Violation("unit does not have itself as src and rng", (u,)))
        if out:
            # the remaining checks need total structure maps
            return out

        for a in self.arrows:
            b = self.inv[a]
            if self.src[b] != self.rng[a] or self.rng[b] != self.src[a]:
                out.append(Violation("inv not compatible with src/rng", (a, b)))
            if self.inv[b] != a:
                out.append(Violation("inv is not an involution", (a, b)))

        for (a, b), c in sorted(self.comp.items()):
            if a not in arrows or b not in arrows or c not in arrows:
                out.append(Violation("composition mentions unknown arrow", (a, b, c)))
            elif self.src[a] != self.rng[b]:
                out.append(Violation("non-composable pair defined", (a, b)))
        if out:
            return out

        for a in self.arrows:
            for b in self.range_fiber(self.src[a]):
                ab = self.comp.get((a, b))
                if ab is None:
                    out.append(Violation("composable pair undefined", (a, b)))
                elif self.rng[ab] != self.rng[a] or self.src[ab] != self.src[b]:
                    out.append(Violation("composite has wrong src/rng", (a, b, ab)))
        if out:
            return out

        for a in self.arrows:
            if self.comp[(self.rng[a], a)] != a or self.comp[(a, self.src[a])] != a:
                out.append(Violation("unit does not act as identity", (a,)))
            b = self.inv[a]
            if self.comp[(a, b)] != self.rng[a]:
                out.append(Violation("a*inv(a) is not rng(a)", (a,)))
            if self.comp[(b, a)] != self.src[a]:
                out.append(Violation("inv(a)*a is not src(a)", (a,)))

        for a in self.arrows:
            for b in self.range_fiber(self.src[a]):
                ab = self.comp[(a, b)]
                for c in self.range_fiber(self.src[b]):
                    if self.comp[(ab, c)] != self.comp[(a, self.comp[(b, c)])]:
                        out.append(Violation("composition not associative", (a, b, c)))
        return out

    def check(self) -> FiniteGroupoid:
        violations = self.validate()
        if violations:
            raise GroupoidValidationError(violations)
        return self

    def to_document(self) -> dict:
        return {
            "units": self.unit_list,
            "arrows": [
                {"id": a, "src": self.src[a], "rng": self.rng[a], "inv": self.inv[a]}
                for a in self.arrows
            ],
            "compose": [[a, b, c] for (a, b), c in self.comp.items()],
        }


def _pair(i, j) -> str:
    return f"({i},{j})"


def full_equivalence_groupoid(n: int) -> FiniteGroupoid:
    """The pair groupoid on {1..n}: one arrow (i,j) from j to i."""
    if not isinstance(n, int) or n < 1:
        raise UsageError(f"n must be a positive integer, got {n!r}")
    idx = range(1, n + 1)
    arrows = [_pair(i, j) for i in idx for j in idx]
    comp = {
        (_pair(i, j), _pair(j, l)): _pair(i, l) for i in idx for j in idx for l in idx
    }
    return FiniteGroupoid(
        arrows=arrows,
        units={_pair(i, i) for i in idx},
        src={_pair(i, j): _pair(j, j) for i in idx for j in idx},
        rng={_pair(i, j): _pair(i, i) for i in idx for j in idx},
        inv={_pair(i, j): _pair(j, i) for i in idx for j in idx},
        comp=comp,
        name=f"Rn:{n}",
    )


def cyclic_group_table(m: int) -> list[list[int]]:
    """Multiplication table of Z/m on elements 0..m-1."""
    return [[(a + b) % m for b in range(m)] for a in range(m)]


def groupoid_from_group_action(
    table: Sequence[Sequence[int]] | Mapping[tuple[Hashable, Hashable], Hashable],
    points: Iterable[Hashable],
    action: Mapping[tuple[Hashable, Hashable], Hashable] | None = None,
    elements: Sequence[Hashable] | None = None,
) -> FiniteGroupoid:
    """Action groupoid of a finite group acting on a finite set.

    ``table`` is either a square list of lists over elements ``0..k-1`` or a
    mapping ``(g, h) -> gh`` (then ``elements`` gives their order).  The
    action maps ``(g, x) -> g.x``; omitted, the action is trivial.  Arrows
    are ``(g, x)`` from x to g.x composing as ``(g, h.x)(h, x) = (gh, x)``.
    """
    if isinstance(table, Mapping):
        mult = dict(table)
        els = list(elements) if elements is not None else sorted({g for g, _ in mult}, key=repr)
    else:
        els = list(range(len(table)))
        mult = {(g, h): table[g][h] for g in els for h in els}
    pts = list(points)
    if action is None:
        action = {(g, x): x for g in els for x in pts}

    for g in els:
        for h in els:
            if mult.get((g, h)) not in els:
                raise UsageError("group table is not closed")
    ids = [e for e in els if all(mult[(e, g)] == g == mult[(g, e)] for g in els)]
    if len(ids) != 1:
        raise UsageError("group table has no identity element")
    e = ids[0]
    for g in els:
        for h in els:
            for k in els:
                if mult[(mult[(g, h)], k)] != mult[(g, mult[(h, k)])]:
                    raise UsageError("group table is not associative")
        if not any(mult[(g, h)] == e for h in els):
            raise UsageError(f"group element {g!r} has no inverse")
    inverse = {g: next(h for h in els if mult[(g, h)] == e) for g in els}
    for g in els:
        for x in pts:
            if action.get((g, x)) not in pts:
                raise UsageError(f"action of {g!r} on {x!r} is undefined or leaves the set")
    for x in pts:
        if action[(e, x)] != x:
            raise UsageError("identity does not act trivially")
        for g in els:
            for h in els:
                if action[(mult[(g, h)], x)] != action[(g, action[(h, x)])]:
                    raise UsageError("not a group action: (gh).x != g.(h.x)")

    def aid(g, x) -> str:
        return f"({g},{x})"

    arrows = [aid(g, x) for x in pts for g in els]
    src = {aid(g, x): aid(e, x) for g in els for x in pts}
    rng = {aid(g, x): aid(e, action[(g, x)]) for g in els for x in pts}
    inv = {aid(g, x): aid(inverse[g], action[(g, x)]) for g in els for x in pts}
    comp = {}
    for h in els:
        for x in pts:
            y = action[(h, x)]
            for g in els:
                comp[(aid(g, y), aid(h, x))] = aid(mult[(g, h)], x)
    return FiniteGroupoid(
        arrows=arrows,
        units={aid(e, x) for x in pts},
        src=src,
        rng=rng,
        inv=inv,
        comp=comp,
    )


def disjoint_union(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    """Disjoint union, relabelling arrows as ``0:a`` and ``1:b``."""
    parts = []
    for tag, g in enumerate((g1, g2)):
        def lab(a, tag=tag):
            return f"{tag}:{a}"

        parts.append(
            (
                [lab(a) for a in g.arrows],
                {lab(u) for u in g.units},
                {lab(a): lab(b) for a, b in g.src.items()},
                {lab(a): lab(b) for a, b in g.rng.items()},
                {lab(a): lab(b) for a, b in g.inv.items()},
                {(lab(a), lab(b)): lab(c) for (a, b), c in g.comp.items()},
            )
        )
    (a1, u1, s1, r1, i1, c1), (a2, u2, s2, r2, i2, c2) = parts
    return FiniteGroupoid(
        arrows=a1 + a2,
        units=u1 | u2,
        src={**s1, **s2},
        rng={**r1, **r2},
        inv={**i1, **i2},
        comp={**c1, **c2},
    )


def is_bisection(g: FiniteGroupoid, u: Iterable[str]) -> bool:
    """True iff src and rng are both injective on ``u``."""
    u = list(dict.fromkeys(u))
    missing = [a for a in u if a not in g.src]
    if missing:
        raise UsageError(f"not arrows of the groupoid: {missing}")
    return len({g.src[a] for a in u}) == len(u) == len({g.rng[a] for a in u})


# ---------------------------------------------------------------------------
# file format


def groupoid_from_document(doc: Mapping) -> FiniteGroupoid:
    """Build a groupoid from ``{units, arrows, compose}`` and validate it.

    Units missing from ``arrows`` are added as identity arrows.  Raises
    :class:`GroupoidValidationError` listing every violation.
    """
    try:
        units = [str(u) for u in doc["units"]]
        arrow_rows = list(doc["arrows"])
        compose = list(doc["compose"])
    except (KeyError, TypeError) as exc:
        raise UsageError(f"groupoid document needs units, arrows and compose: {exc}") from None
    arrows: list[str] = []
    src: dict[str, str] = {}
    rng: dict[str, str] = {}
    inv: dict[str, str] = {}
    for row in arrow_rows:
        try:
            a = str(row["id"])
            src[a], rng[a], inv[a] = str(row["src"]), str(row["rng"]), str(row["inv"])
        except (KeyError, TypeError) as exc:
            raise UsageError(f"bad arrow entry {row!r}: {exc}") from None
        arrows.append(a)
    for u in units:
        if u not in src:
            arrows.append(u)
            src[u] = rng[u] = inv[u] = u
    comp = {}
    for triple in compose:
        if not isinstance(triple, (list, tuple)) or len(triple) != 3:
            raise UsageError(f"compose entries must be [a, b, ab] triples, got {triple!r}")
        a, b, c = (str(x) for x in triple)
        if (a, b) in comp and comp[(a, b)] != c:
            raise GroupoidValidationError([Violation("composition defined twice", (a, b))])
        comp[(a, b)] = c
    return FiniteGroupoid(arrows, set(units), src, rng, inv, comp).check()


def load_groupoid_file(path: str | Path) -> FiniteGroupoid:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read groupoid file {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"groupoid file {path} is not valid JSON: {exc}") from None
    g = groupoid_from_document(doc)
    g.name = str(path)
    return g


def resolve_groupoid(ref: str) -> FiniteGroupoid:
    """``Rn:k`` names the pair groupoid on k points; anything else is a path."""
    if ref.startswith("Rn:"):
        try:
            n = int(ref[3:])
        except ValueError:
            raise UsageError(f"bad built-in groupoid name {ref!r}") from None
        return full_equivalence_groupoid(n)
    return load_groupoid_file(ref)
