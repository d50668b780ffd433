"""Command-line workbench.

Exit codes: 0 = no counterexample / valid, 1 = witness found (the witness is
in the report), 2 = usage or input error, 3 = search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import enumerate_projections, is_diagonal, is_diagonal_preserving
from .errors import BudgetExceededError, GroupoidValidationError, UsageError
from .groupoids import resolve_groupoid
from .kindness import (
    DEFAULT_BUDGET,
    SearchBounds,
    check_ring,
    verify_witness,
    witness_cond1_from_cond2,
    witness_cond2_from_cond1,
)
from .matrices import (
    RingMatrix,
    RingVector,
    conjugation_map,
    householder_from_vector,
    non_monomial_unitary_from_vector,
)
from .rings import RingSpec, parse_ring_spec

EXIT_OK = 0
EXIT_WITNESS = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _ring(text: str) -> RingSpec:
    return parse_ring_spec(text)


def _json_literal(text: str):
    """A JSON literal given inline or as a path to a JSON file."""
    stripped = text.strip()
    if not stripped.startswith("["):
        try:
            stripped = Path(text).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {text}: {exc}") from None
    try:
        return json.loads(stripped)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not a JSON literal: {exc}") from None


def _as_vector(ring: RingSpec, literal) -> RingVector:
    if not isinstance(literal, list) or any(isinstance(x, list) for x in literal):
        raise UsageError("a vector must be a flat JSON list of element strings")
    return RingVector.parse(ring, literal)


def _as_matrix(ring: RingSpec, literal) -> RingMatrix:
    if not isinstance(literal, list) or not all(isinstance(r, list) for r in literal):
        raise UsageError("a matrix must be a JSON list of rows")
    return RingMatrix.parse(ring, literal)


def _non_diagonal_image(U: RingMatrix) -> dict | None:
    """First unit indicator whose image under X -> U X U* is not diagonal."""
    h = conjugation_map(U)
    if is_diagonal_preserving(h):
        return None
    for u in h.source.unit_list:
        img = h.images[u]
        if not is_diagonal(img):
            return {"groupoid": f"Rn:{U.n}", "unit": u, "projection": img.to_document()}
    raise AssertionError("map is not diagonal preserving but all unit images are diagonal")


# ---------------------------------------------------------------------------
# subcommands


def cmd_ring_check(args) -> tuple[int, dict, list[str]]:
    ring = _ring(args.ring)
    bounds = SearchBounds(args.max_len, args.max_height, args.max_dim, args.max_degree)
    conditions = [args.condition] if args.condition else [1, 2, 6]
    reports = [
        check_ring(ring, c, bounds, budget=args.budget, workers=args.workers) for c in conditions
    ]
    docs = [r.to_document(include_timing=args.timing) for r in reports]
    doc = docs[0] if len(docs) == 1 else {"ring": str(ring), "reports": docs}
    lines = []
    for d in docs:
        lines.append(f"{d['ring']}  condition {d['condition']}: {d['verdict']}")
        if "witness" in d:
            lines.append(f"  witness: {json.dumps(d['witness'])}")
        if "certificate" in d:
            lines.append(f"  certificate: {d['certificate']['rule']}"
                         + (f" ({d['certificate'].get('reason')})" if d["certificate"].get("reason") else ""))
        stats = d["stats"]
        lines.append(f"  candidates: {stats['candidates']}")
        if "unitaries" in stats:
            per_dim = ", ".join(f"dim {k}: {v}" for k, v in stats["unitaries"].items())
            lines.append(f"  unitaries found: {per_dim}")
    code = EXIT_WITNESS if any(r.witness is not None for r in reports) else EXIT_OK
    return code, doc, lines


def cmd_groupoid_validate(args) -> tuple[int, dict, list[str]]:
    try:
        g = resolve_groupoid(args.groupoid)
    except GroupoidValidationError as exc:
        violations = [str(v) for v in exc.violations]
        doc = {"groupoid": args.groupoid, "valid": False, "violations": violations}
        return EXIT_WITNESS, doc, [f"{args.groupoid}: invalid"] + [f"  {v}" for v in violations]
    doc = {
        "groupoid": args.groupoid,
        "valid": True,
        "violations": [],
        "arrows": len(g.arrows),
        "units": len(g.units),
    }
    return EXIT_OK, doc, [f"{args.groupoid}: valid ({len(g.arrows)} arrows, {len(g.units)} units)"]


def cmd_algebra_projections(args) -> tuple[int, dict, list[str]]:
    ring = _ring(args.ring)
    g = resolve_groupoid(args.groupoid)
    found = enumerate_projections(
        ring, g, args.max_height, max_degree=args.max_degree, budget=args.budget
    )
    off = [p for p in found if not is_diagonal(p)]
    doc = {
        "ring": str(ring),
        "groupoid": args.groupoid,
        "bounds": {"maxHeight": args.max_height},
        "verdict": "non-diagonal-projection" if off else "all-diagonal",
        "projections": [p.to_document() for p in found],
        "stats": {"projections": len(found), "nonDiagonal": len(off)},
    }
    if off:
        doc["witness"] = off[0].to_document()
    lines = [f"{ring} on {args.groupoid}: {len(found)} projections, {len(off)} not diagonal"]
    for p in found:
        tag = "" if is_diagonal(p) else "  [not diagonal]"
        lines.append(f"  {json.dumps(p.to_document())}{tag}")
    return (EXIT_WITNESS if off else EXIT_OK), doc, lines


def cmd_matrix_probe(args) -> tuple[int, dict, list[str]]:
    ring = _ring(args.ring)
    if (args.matrix is None) == (args.vector is None):
        raise UsageError("give exactly one of --matrix or --vector")
    if args.matrix is not None:
        U = _as_matrix(ring, _json_literal(args.matrix))
        unitary = U.is_unitary()
        doc = {
            "ring": str(ring),
            "matrix": U.to_document(),
            "unitary": unitary,
            "monomial": U.is_monomial(),
            "selfAdjoint": U.is_self_adjoint(),
        }
        if unitary:
            image = _non_diagonal_image(U)
            doc["conjugationDiagonalPreserving"] = image is None
            if image is not None:
                doc["nonDiagonalProjection"] = image
        witness = unitary and not doc["monomial"]
        lines = [f"{k}: {json.dumps(v)}" for k, v in doc.items()]
        return (EXIT_WITNESS if witness else EXIT_OK), doc, lines

    v = _as_vector(ring, _json_literal(args.vector))
    unit = v.is_unit_vector()
    doc = {
        "ring": str(ring),
        "vector": v.to_document(),
        "normSqSum": str(v.norm_sq_sum()),
        "unitVector": unit,
        "nonzeroEntries": len(v.nonzero_indices()),
    }
    if unit:
        doc["householder"] = householder_from_vector(v).to_document()
        if len(v.nonzero_indices()) >= 2:
            doc["nonMonomialUnitary"] = non_monomial_unitary_from_vector(v).to_document()
    witness = "nonMonomialUnitary" in doc
    lines = [f"{k}: {json.dumps(v)}" for k, v in doc.items()]
    return (EXIT_WITNESS if witness else EXIT_OK), doc, lines


def cmd_witness_convert(args) -> tuple[int, dict, list[str]]:
    ring = _ring(args.ring)
    literal = _json_literal(args.witness)
    derived: dict = {}
    if args.condition == 6:
        U = _as_matrix(ring, literal)
        if not verify_witness(6, U):
            raise UsageError("not a condition-6 witness: need a unitary, non-monomial matrix")
        derived["condition3"] = _non_diagonal_image(U)
    else:
        t = _as_vector(ring, literal)
        if not verify_witness(args.condition, t):
            raise UsageError(f"not a condition-{args.condition} witness: {t.to_document()}")
        v = witness_cond1_from_cond2(t) if args.condition == 2 else t
        w = witness_cond2_from_cond1(v)
        U = non_monomial_unitary_from_vector(v)
        assert verify_witness(1, v) and verify_witness(2, w) and verify_witness(6, U)
        derived["condition1"] = v.to_document()
        derived["condition2"] = w.to_document()
        derived["condition6"] = U.to_document()
        derived["condition3"] = _non_diagonal_image(U)
    doc = {
        "ring": str(ring),
        "input": {"condition": args.condition, "witness": literal},
        "derived": derived,
    }
    lines = [f"{ring}: condition-{args.condition} witness verified"]
    lines += [f"  {k}: {json.dumps(v)}" for k, v in derived.items()]
    return EXIT_WITNESS, doc, lines


# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"{n} must be positive")
    return n


def _nonnegative(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"{n} must be >= 0")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kindrings",
        description="Exact checks of kind rings and groupoid convolution algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, search=True):
        p.add_argument("--json", action="store_true", help="emit the machine-readable report")
        p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                       help="maximum number of search candidates")
        if search:
            p.add_argument("--max-height", type=_nonnegative, default=2)
            p.add_argument("--max-degree", type=_nonnegative, default=1,
                           help="degree bound for polynomial rings")

    p = sub.add_parser("ring-check", help="bounded search for unkindness witnesses")
    p.add_argument("ring")
    p.add_argument("--condition", type=int, choices=(1, 2, 6))
    p.add_argument("--max-len", type=_positive, default=3)
    p.add_argument("--max-dim", type=_positive, default=2)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--timing", action="store_true", help="include elapsedMs in stats")
    common(p)
    p.set_defaults(func=cmd_ring_check)

    p = sub.add_parser("groupoid-validate", help="check the groupoid axioms of a table")
    p.add_argument("groupoid", nargs="?")
    p.add_argument("--groupoid", dest="groupoid_opt")
    common(p, search=False)
    p.set_defaults(func=cmd_groupoid_validate)

    p = sub.add_parser("algebra-projections", help="enumerate projections of RG")
    p.add_argument("ring")
    p.add_argument("--groupoid", required=True, help="a groupoid file or Rn:k")
    common(p)
    p.set_defaults(func=cmd_algebra_projections)

    p = sub.add_parser("matrix-probe", help="inspect a matrix or a vector")
    p.add_argument("ring")
    p.add_argument("--matrix", help="JSON rows of element strings, or a file")
    p.add_argument("--vector", help="JSON list of element strings, or a file")
    common(p, search=False)
    p.set_defaults(func=cmd_matrix_probe)

    p = sub.add_parser("witness-convert", help="turn a witness into witnesses for the other conditions")
    p.add_argument("ring")
    p.add_argument("--condition", type=int, choices=(1, 2, 6), required=True)
    p.add_argument("--witness", required=True, help="JSON literal, or a file")
    common(p, search=False)
    p.set_defaults(func=cmd_witness_convert)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "groupoid-validate":
        args.groupoid = args.groupoid or args.groupoid_opt
        if not args.groupoid:
            parser.error("groupoid-validate needs a groupoid file or Rn:k")
    try:
        code, doc, lines = args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        if args.json:
            print(json.dumps({"error": "budget-exceeded", "message": str(exc),
                              "needed": exc.needed, "budget": exc.budget}, indent=2))
        return EXIT_BUDGET
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
