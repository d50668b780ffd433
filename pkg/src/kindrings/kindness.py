"""Deciding (as far as possible) whether a ring is kind.

A conjugation-closed subring R of C is *kind* when every unit vector
(sum of |r_i|^2 equal to 1) has a single nonzero entry.  Equivalent forms
checked here by bounded exhaustive search:

* condition 1: no unit vector with two or more nonzero entries;
* condition 2: ``r_1 = sum_i |r_i|^2`` forces ``r_2 = ... = r_n = 0``;
* condition 6: every unitary matrix over R is monomial.

A search that finds nothing is only evidence; the certificate rules in
:func:`certify_kind` turn it into a proof for the ring families they cover.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import BudgetExceededError, UsageError
from .matrices import RingMatrix, RingVector
from .rings import GaussianIntegers, PolyExt, Quadratic, RingElement, RingSpec

__all__ = [
    "DEFAULT_BUDGET",
    "SearchBounds",
    "SearchResult",
    "search_condition1",
    "search_condition2",
    "search_condition6",
    "witness_cond1_from_cond2",
    "witness_cond2_from_cond1",
    "verify_witness",
    "DiscreteNorm",
    "AdjoinSqrt",
    "AdjoinTranscendental",
    "DirectedUnion",
    "NotCertifiable",
    "certify_kind",
    "certify_directed_union",
    "validate_certificate",
    "QuadraticSplit",
    "quadratic_split",
    "PolyReduction",
    "poly_unit_vector_reduce",
    "is_l_ring_violation",
    "KindnessReport",
    "check_ring",
]

DEFAULT_BUDGET = 5_000_000


@dataclass(frozen=True)
class SearchBounds:
    max_len: int = 3
    max_height: int = 2
    max_dim: int = 2
    max_degree: int = 1

    def __post_init__(self):
        if self.max_len < 1 or self.max_dim < 1:
            raise UsageError("max_len and max_dim must be positive")
        if self.max_height < 0 or self.max_degree < 0:
            raise UsageError("max_height and max_degree must be >= 0")

    def to_document(self, ring: RingSpec) -> dict:
        doc = {"maxLen": self.max_len, "maxHeight": self.max_height, "maxDim": self.max_dim}
        if ring.has_poly():
            doc["maxDegree"] = self.max_degree
        return doc


@dataclass
class SearchResult:
    """Outcome of one bounded search; ``witness`` is None when nothing was found."""

    ring: RingSpec
    condition: int
    witness: RingVector | RingMatrix | None
    stats: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.witness is not None


# ---------------------------------------------------------------------------
# search machinery


class _Table:
    """Enumerated elements with their norm-squares and heights."""

    def __init__(self, ring: RingSpec, max_height: int, max_degree: int):
        self.ring = ring
        self.elements = ring.enumerate_elements(max_height, max_degree)
        self.norms = [x.norm_sq() for x in self.elements]
        self.conjs = [x.conjugate() for x in self.elements]
        self.heights = [x.height for x in self.elements]
        self.nonzero = [bool(x) for x in self.elements]
        self.zero = ring.zero()
        self.one = ring.one()

    def __len__(self):
        return len(self.elements)


def _run_striped(
    n_first: int, workers: int, job: Callable[[range], tuple[tuple | None, dict]]
) -> tuple[tuple | None, dict]:
    """Split first-coordinate indices into stripes and merge the results.

    ``job`` returns ``(best_key, counts)`` for its stripe.  The merge takes
    the minimum key and sums the counts, so the outcome does not depend on
    the number of workers.
    """
    workers = max(1, int(workers))
    stripes = [range(w, n_first, workers) for w in range(min(workers, max(n_first, 1)))]
    if workers == 1 or len(stripes) <= 1:
        results = [job(s) for s in stripes]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, stripes))
    best = None
    counts: dict = {}
    for key, c in results:
        if key is not None and (best is None or key < best):
            best = key
        for k, v in c.items():
            counts[k] = counts.get(k, 0) + v
    return best, counts


def _multisets(start: int, n: int, length: int):
    """Nondecreasing index tuples of the given length with entries >= start."""
    return itertools.combinations_with_replacement(range(start, n), length)


def _check_budget(what: str, needed: int, budget: int):
    if needed > budget:
        raise BudgetExceededError(what, needed, budget)


def search_condition1(
    ring: RingSpec,
    max_len: int,
    max_height: int,
    *,
    max_degree: int = 1,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> SearchResult:
    """Look for a unit vector with at least two nonzero entries.

    Every vector of length <= max_len with entries of height <= max_height
    is covered.  The sum of norm-squares does not depend on the order of
    the entries, so only nondecreasing index tuples are visited; the
    canonical witness (least total height, then lexicographically least)
    is always one of them.
    """
    T = _Table(ring, max_height, max_degree)
    N = len(T)
    needed = sum(math.comb(N + n - 1, n) for n in range(1, max_len + 1))
    _check_budget(f"condition 1 search over {ring}", needed, budget)
    examined = 0
    for length in range(1, max_len + 1):

        def job(stripe: range, length=length):
            best = None
            count = 0
            for i in stripe:
                for rest in _multisets(i, N, length - 1):
                    count += 1
                    idx = (i,) + rest
                    total = T.zero
                    for k in idx:
                        total = total + T.norms[k]
                    if total != T.one or sum(T.nonzero[k] for k in idx) < 2:
                        continue
                    key = (sum(T.heights[k] for k in idx), idx)
                    if best is None or key < best:
                        best = key
            return best, {"candidates": count}

        best, counts = _run_striped(N, workers, job)
        examined += counts.get("candidates", 0)
        if best is not None:
            witness = RingVector(ring, [T.elements[k] for k in best[1]])
            return SearchResult(ring, 1, witness, {"candidates": examined})
    return SearchResult(ring, 1, None, {"candidates": examined})


def search_condition2(
    ring: RingSpec,
    max_len: int,
    max_height: int,
    *,
    max_degree: int = 1,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> SearchResult:
    """Look for ``(r_1, ..., r_n)`` with ``r_1 = sum |r_i|^2`` and some later r_i != 0.

    The condition is symmetric in ``r_2..r_n``, so those are visited as
    nondecreasing index tuples.
    """
    T = _Table(ring, max_height, max_degree)
    N = len(T)
    needed = sum(N * math.comb(N + n - 2, n - 1) for n in range(1, max_len + 1))
    _check_budget(f"condition 2 search over {ring}", needed, budget)
    examined = 0
    for length in range(1, max_len + 1):

        def job(stripe: range, length=length):
            best = None
            count = 0
            for i in stripe:
                target = T.elements[i]
                head = T.norms[i]
                for rest in _multisets(0, N, length - 1):
                    count += 1
                    if not any(T.nonzero[k] for k in rest):
                        continue
                    total = head
                    for k in rest:
                        total = total + T.norms[k]
                    if total != target:
                        continue
                    idx = (i,) + rest
                    key = (sum(T.heights[k] for k in idx), idx)
                    if best is None or key < best:
                        best = key
            return best, {"candidates": count}

        best, counts = _run_striped(N, workers, job)
        examined += counts.get("candidates", 0)
        if best is not None:
            witness = RingVector(ring, [T.elements[k] for k in best[1]])
            return SearchResult(ring, 2, witness, {"candidates": examined})
    return SearchResult(ring, 2, None, {"candidates": examined})


def search_condition6(
    ring: RingSpec,
    max_dim: int,
    max_height: int,
    *,
    max_degree: int = 1,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> SearchResult:
    """Look for a unitary matrix that is not monomial.

    Rows of a unitary matrix are orthonormal, so rows are drawn from the
    unit vectors and each new row must be orthogonal to the previous ones;
    completed matrices are then checked with both ``U U* = I`` and
    ``U* U = I``.  Stats count the unitaries found per dimension.
    """
    T = _Table(ring, max_height, max_degree)
    N = len(T)
    _check_budget(
        f"condition 6 row search over {ring}", sum(N**k for k in range(1, max_dim + 1)), budget
    )
    examined = 0
    unitaries: dict[str, int] = {}
    for dim in range(1, max_dim + 1):
        rows = []
        for idx in itertools.product(range(N), repeat=dim):
            total = T.zero
            for k in idx:
                total = total + T.norms[k]
            if total == T.one:
                rows.append(idx)
        examined += N**dim
        _check_budget(f"condition 6 matrix search over {ring} in dimension {dim}",
                      examined + len(rows) ** dim, budget)

        def orthogonal(r, s):
            acc = T.zero
            for a, b in zip(r, s):
                if T.nonzero[a] and T.nonzero[b]:
                    acc = acc + T.elements[a] * T.conjs[b]
            return acc.is_zero()

        def job(stripe: range, dim=dim, rows=rows):
            best = None
            count = 0
            n_unitary = 0

            def extend(chosen: list[int]):
                nonlocal best, count, n_unitary
                if len(chosen) == dim:
                    count += 1
                    U = RingMatrix(ring, [[T.elements[k] for k in rows[c]] for c in chosen])
                    if not U.is_unitary():
                        return
                    n_unitary += 1
                    if U.is_monomial():
                        return
                    flat = tuple(k for c in chosen for k in rows[c])
                    key = (sum(T.heights[k] for k in flat), flat)
                    if best is None or key < best:
                        best = key
                    return
                for c in range(len(rows)):
                    if all(orthogonal(rows[c], rows[p]) for p in chosen):
                        extend(chosen + [c])

            for first in stripe:
                extend([first])
            return best, {"candidates": count, "unitaries": n_unitary}

        best, counts = _run_striped(len(rows), workers, job)
        examined += counts.get("candidates", 0)
        unitaries[str(dim)] = counts.get("unitaries", 0)
        if best is not None:
            flat = best[1]
            witness = RingMatrix(
                ring, [[T.elements[k] for k in flat[r * dim:(r + 1) * dim]] for r in range(dim)]
            )
            return SearchResult(ring, 6, witness, {"candidates": examined, "unitaries": unitaries})
    return SearchResult(ring, 6, None, {"candidates": examined, "unitaries": unitaries})


SEARCHES = {1: search_condition1, 2: search_condition2, 6: search_condition6}


# ---------------------------------------------------------------------------
# witnesses


def _vector(v) -> RingVector:
    if isinstance(v, RingVector):
        return v
    raise UsageError(f"expected a RingVector, got {type(v).__name__}")


def is_cond1_witness(v: RingVector) -> bool:
    return v.is_unit_vector() and len(v.nonzero_indices()) >= 2


def is_cond2_witness(t: RingVector) -> bool:
    return t.norm_sq_sum() == t[0] and any(x for x in t.entries[1:])


def is_cond6_witness(U: RingMatrix) -> bool:
    return U.is_unitary() and not U.is_monomial()


def verify_witness(condition: int, witness) -> bool:
    if condition == 1:
        return isinstance(witness, RingVector) and is_cond1_witness(witness)
    if condition == 2:
        return isinstance(witness, RingVector) and is_cond2_witness(witness)
    if condition == 6:
        return isinstance(witness, RingMatrix) and is_cond6_witness(witness)
    raise UsageError(f"unknown condition {condition!r}")


def witness_cond1_from_cond2(t: RingVector) -> RingVector:
    """``(1 - r_1, r_2..r_n, r_1, r_2..r_n)``, a unit vector.

    Since ``r_1`` is real, ``|1 - r_1|^2 + sum_{i>=2} |r_i|^2 + sum |r_i|^2``
    collapses to 1.
    """
    t = _vector(t)
    if not is_cond2_witness(t):
        raise UsageError(f"{t.to_document()} is not a condition-2 witness")
    rest = list(t.entries[1:])
    w = RingVector(t.ring, [t.ring.one() - t[0]] + rest + [t[0]] + rest)
    assert is_cond1_witness(w)
    return w


def witness_cond2_from_cond1(v: RingVector) -> RingVector:
    """``(|v_1|^2, v_1 v_2, ..., v_1 v_n)`` after moving a nonzero entry first."""
    v = _vector(v)
    if not is_cond1_witness(v):
        raise UsageError(f"{v.to_document()} is not a condition-1 witness")
    k = v.nonzero_indices()[0]
    lead = v[k]
    others = [x for j, x in enumerate(v.entries) if j != k]
    t = RingVector(v.ring, [lead.norm_sq()] + [lead * x for x in others])
    assert is_cond2_witness(t)
    return t


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class DiscreteNorm:
    """Leaf: |r| < 1 forces r = 0 in this ring."""

    ring: RingSpec

    def to_document(self) -> dict:
        return {"rule": "DiscreteNorm", "ring": str(self.ring)}


@dataclass(frozen=True)
class AdjoinSqrt:
    ring: RingSpec
    base: object
    n: int
    assumption: str | None = None

    def to_document(self) -> dict:
        return {
            "rule": "AdjoinSqrt",
            "ring": str(self.ring),
            "n": self.n,
            "assumption": self.assumption,
            "base": self.base.to_document(),
        }


@dataclass(frozen=True)
class AdjoinTranscendental:
    ring: RingSpec
    base: object

    def to_document(self) -> dict:
        return {"rule": "AdjoinTranscendental", "ring": str(self.ring), "base": self.base.to_document()}


@dataclass(frozen=True)
class DirectedUnion:
    parts: tuple

    def to_document(self) -> dict:
        return {"rule": "DirectedUnion", "parts": [p.to_document() for p in self.parts]}


@dataclass(frozen=True)
class NotCertifiable:
    ring: RingSpec
    reason: str
    witness: RingVector | None = None

    def to_document(self) -> dict:
        doc = {"rule": "NotCertifiable", "ring": str(self.ring), "reason": self.reason}
        if self.witness is not None:
            doc["witness"] = self.witness.to_document()
        return doc


KindCertificate = DiscreteNorm | AdjoinSqrt | AdjoinTranscendental | DirectedUnion


def _inverse_witness(ring: RingSpec, n: int) -> RingVector:
    x = ring.one().div_int(n)
    return RingVector(ring, [x] * (n * n))


def certify_kind(ring: RingSpec):
    """A certificate tree proving ``ring`` kind, or :class:`NotCertifiable`.

    Rules: rings where |r| < 1 forces r = 0 are leaves; adjoining sqrt(n)
    with sqrt(n) outside the fraction field of a kind ring, or a real
    transcendental, keeps the ring kind.  If 1/n lies in the ring the
    all-1/n vector of length n^2 is attached as a counterexample.
    """
    if ring.is_discrete_at_one() == "yes":
        return DiscreteNorm(ring)
    n = ring.inverted_integer()
    if n is not None:
        return NotCertifiable(
            ring, f"1/{n} lies in the ring, so it is not kind", _inverse_witness(ring, n)
        )
    if isinstance(ring, Quadratic):
        base = certify_kind(ring.over)
        if isinstance(base, NotCertifiable):
            return NotCertifiable(ring, f"base ring {ring.over} is not certified")
        assumption = None
        if not ring.over.has_rational_fraction_field():
            assumption = f"caller asserts sqrt({ring.d}) is not in the fraction field of {ring.over}"
        return AdjoinSqrt(ring, base, ring.d, assumption)
    if isinstance(ring, PolyExt):
        base = certify_kind(ring.over)
        if isinstance(base, NotCertifiable):
            return NotCertifiable(ring, f"base ring {ring.over} is not certified")
        return AdjoinTranscendental(ring, base)
    return NotCertifiable(ring, "no certificate rule applies")


def certify_directed_union(rings: Sequence[RingSpec]):
    """Certificate for a ring presented as a directed union of ``rings``."""
    parts = [certify_kind(r) for r in rings]
    bad = [p for p in parts if isinstance(p, NotCertifiable)]
    if not rings:
        raise UsageError("a directed union needs at least one ring")
    if bad:
        return bad[0]
    return DirectedUnion(tuple(parts))


def validate_certificate(cert) -> list[str]:
    """Re-check a certificate tree; returns the problems found (empty = valid)."""
    problems: list[str] = []
    if isinstance(cert, DiscreteNorm):
        if cert.ring.is_discrete_at_one() != "yes":
            problems.append(f"{cert.ring}: DiscreteNorm leaf on a ring that is not discrete at 1")
    elif isinstance(cert, AdjoinSqrt):
        ring = cert.ring
        if not isinstance(ring, Quadratic) or ring.d != cert.n:
            problems.append(f"{ring}: AdjoinSqrt({cert.n}) does not match the ring")
        else:
            if getattr(cert.base, "ring", None) != ring.over:
                problems.append(f"{ring}: base certificate is for a different ring")
            needs = not ring.over.has_rational_fraction_field()
            if needs and not (cert.assumption and ring.assume_sqrt_outside):
                problems.append(f"{ring}: missing assertion that sqrt({cert.n}) is outside the base field")
        problems += validate_certificate(cert.base)
    elif isinstance(cert, AdjoinTranscendental):
        ring = cert.ring
        if not isinstance(ring, PolyExt) or getattr(cert.base, "ring", None) != ring.over:
            problems.append(f"{ring}: AdjoinTranscendental does not match the ring")
        problems += validate_certificate(cert.base)
    elif isinstance(cert, DirectedUnion):
        if not cert.parts:
            problems.append("empty directed union")
        for p in cert.parts:
            problems += validate_certificate(p)
    else:
        problems.append(f"not a certificate: {cert!r}")
    return problems


# ---------------------------------------------------------------------------
# reductions used by the certificate rules


@dataclass(frozen=True)
class QuadraticSplit:
    """``sum |v_i|^2 = rational_part + irrational_part * sqrt(d)`` over the base."""

    rational_part: RingElement
    irrational_part: RingElement
    expanded: RingVector

    def recombined(self, ring: RingSpec) -> RingElement:
        s = ring.parse_element(ring.symbol)
        return ring.coerce(self.rational_part) + ring.coerce(self.irrational_part) * s


def quadratic_split(v: RingVector) -> QuadraticSplit:
    """Split the norm-square sum of a vector over base[sqrt(d)].

    With ``v_i = a_i + b_i sqrt(d)`` the rational part is
    ``sum |a_i|^2 + |d| |b_i|^2`` and the sqrt(d) coefficient is
    ``sum (± a_i conj(b_i) + conj(a_i) b_i)``, with + for d > 0 and - for
    d < 0.  ``expanded`` lists a_i followed by |d| copies of b_i; when v is a
    unit vector it is a unit vector over the base.
    """
    v = _vector(v)
    ring = v.ring
    if not isinstance(ring, (Quadratic, GaussianIntegers)):
        raise UsageError(f"quadratic split needs a quadratic ring, got {ring}")
    B = ring.base
    d = ring.d
    rational = B.zero()
    irrational = B.zero()
    expanded: list[RingElement] = []
    for x in v:
        a = RingElement(B, x.value[0])
        b = RingElement(B, x.value[1])
        rational = rational + a.norm_sq() + b.norm_sq() * abs(d)
        cross = a * b.conjugate()
        irrational = irrational + (cross if d > 0 else -cross) + a.conjugate() * b
        expanded += [a] + [b] * abs(d)
    return QuadraticSplit(rational, irrational, RingVector(B, expanded))


@dataclass(frozen=True)
class PolyReduction:
    """Either the constant base vector, or evidence that v is not a unit vector."""

    reduced: bool
    base_vector: RingVector | None = None
    degree: int | None = None
    top_coefficient: RingElement | None = None


def poly_unit_vector_reduce(v: RingVector) -> PolyReduction:
    """Reduce a vector over base[t] to the base, or refute that it is a unit vector.

    If some entry is nonconstant, of maximal degree D, then the coefficient
    of t^(2D) in ``sum f_i conj(f_i)`` is the sum of the norm-squares of the
    leading coefficients of the degree-D entries, which is nonzero.
    """
    v = _vector(v)
    ring = v.ring
    if not isinstance(ring, PolyExt):
        raise UsageError(f"polynomial reduction needs base[t], got {ring}")
    coeffs = [ring.coefficients(x) for x in v]
    top = max(len(c) - 1 for c in coeffs)
    if top <= 0:
        base = ring.over
        return PolyReduction(True, RingVector(base, [c[0] if c else base.zero() for c in coeffs]))
    leading = ring.over.zero()
    for c in coeffs:
        if len(c) - 1 == top:
            leading = leading + c[-1].norm_sq()
    total = ring.zero()
    for x in v:
        total = total + x.norm_sq()
    direct = ring.coefficients(total)
    assert len(direct) == 2 * top + 1 and direct[-1] == leading and leading
    return PolyReduction(False, None, 2 * top, leading)


def is_l_ring_violation(c: RingVector) -> bool:
    """True iff ``sum c_i^2 = 1`` without a single entry ±1 and the rest 0."""
    c = _vector(c)
    total = c.ring.zero()
    for x in c:
        total = total + x * x
    if total != 1:
        return False
    nz = c.nonzero_indices()
    trivial = len(nz) == 1 and (c[nz[0]] == 1 or c[nz[0]] == -1)
    return not trivial


# ---------------------------------------------------------------------------
# reports


VERDICT_KIND = "kind-certified"
VERDICT_UNKIND = "unkind-witness"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass
class KindnessReport:
    ring: RingSpec
    condition: int
    bounds: SearchBounds
    verdict: str
    witness: RingVector | RingMatrix | None = None
    certificate: object = None
    stats: dict = field(default_factory=dict)
    elapsed_ms: float | None = None

    def to_document(self, *, include_timing: bool = False) -> dict:
        doc = {
            "ring": str(self.ring),
            "condition": self.condition,
            "bounds": self.bounds.to_document(self.ring),
            "verdict": self.verdict,
            "stats": dict(self.stats),
        }
        if self.witness is not None:
            doc["witness"] = self.witness.to_document()
        if self.certificate is not None:
            doc["certificate"] = self.certificate.to_document()
        if include_timing and self.elapsed_ms is not None:
            doc["stats"]["elapsedMs"] = round(self.elapsed_ms, 3)
        return doc


def check_ring(
    ring: RingSpec,
    condition: int,
    bounds: SearchBounds = SearchBounds(),
    *,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> KindnessReport:
    """Run one condition's search and combine it with :func:`certify_kind`."""
    if condition not in SEARCHES:
        raise UsageError(f"condition must be one of 1, 2, 6; got {condition!r}")
    start = time.perf_counter()
    size = bounds.max_dim if condition == 6 else bounds.max_len
    result = SEARCHES[condition](
        ring, size, bounds.max_height, max_degree=bounds.max_degree, budget=budget, workers=workers
    )
    if result.found:
        verdict, cert = VERDICT_UNKIND, None
    else:
        cert = certify_kind(ring)
        if isinstance(cert, NotCertifiable):
            verdict = VERDICT_INCONCLUSIVE
        else:
            verdict = VERDICT_KIND
    elapsed = (time.perf_counter() - start) * 1000
    return KindnessReport(ring, condition, bounds, verdict, result.witness, cert, result.stats, elapsed)
