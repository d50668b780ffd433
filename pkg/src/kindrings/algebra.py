"""The convolution *-algebra of a finite groupoid over an exact ring.

Elements are finitely supported functions on arrows.  With ``r``, ``inv``
and the composition table of the groupoid,

    (f * g)(c) = sum over a with r(a) = r(c) of f(a) g(inv(a) c)

and ``f*(c) = conj(f(inv(c)))``.  Summands whose composite is undefined
contribute nothing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import BudgetExceededError, StarHomomorphismError, UsageError
from .groupoids import FiniteGroupoid, full_equivalence_groupoid
from .matrices import RingMatrix
from .rings import RingElement, RingSpec

__all__ = [
    "AlgebraElement",
    "StarHomomorphism",
    "convolve",
    "star",
    "is_diagonal",
    "is_projection",
    "enumerate_projections",
    "is_normalizer_pair",
    "pair_groupoid_size",
    "to_matrix",
    "from_matrix",
    "is_diagonal_preserving",
]

DEFAULT_BUDGET = 5_000_000


class AlgebraElement:
    """An element of the groupoid algebra R G, stored sparsely."""

    __slots__ = ("groupoid", "ring", "coeffs")

    def __init__(
        self,
        groupoid: FiniteGroupoid,
        ring: RingSpec,
        coeffs: Mapping[str, object] | None = None,
    ):
        clean: dict[str, RingElement] = {}
        for arrow, value in (coeffs or {}).items():
            if arrow not in groupoid.src:
                raise UsageError(f"{arrow!r} is not an arrow of the groupoid")
            value = ring.coerce(value)
            if value:
                clean[arrow] = value
        self.groupoid = groupoid
        self.ring = ring
        self.coeffs = clean

    @classmethod
    def zero(cls, groupoid: FiniteGroupoid, ring: RingSpec) -> AlgebraElement:
        return cls(groupoid, ring)

    @classmethod
    def indicator(
        cls, groupoid: FiniteGroupoid, ring: RingSpec, arrows: Iterable[str] | str
    ) -> AlgebraElement:
        """The indicator 1_U of a set of arrows (or of one arrow)."""
        if isinstance(arrows, str):
            arrows = [arrows]
        return cls(groupoid, ring, {a: 1 for a in arrows})

    @classmethod
    def identity(cls, groupoid: FiniteGroupoid, ring: RingSpec) -> AlgebraElement:
        return cls.indicator(groupoid, ring, groupoid.unit_list)

    def __call__(self, arrow: str) -> RingElement:
        return self.coeffs.get(arrow, self.ring.zero())

    @property
    def support(self) -> list[str]:
        return [a for a in self.groupoid.arrows if a in self.coeffs]

    def _same(self, other: AlgebraElement):
        if not isinstance(other, AlgebraElement):
            raise UsageError(f"expected an algebra element, got {type(other).__name__}")
        if other.groupoid is not self.groupoid and other.groupoid != self.groupoid:
            raise UsageError("algebra elements live on different groupoids")
        if other.ring != self.ring:
            raise UsageError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _new(self, coeffs: dict) -> AlgebraElement:
        out = object.__new__(AlgebraElement)
        out.groupoid = self.groupoid
        out.ring = self.ring
        out.coeffs = {a: v for a, v in coeffs.items() if v}
        return out

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._same(other)
        out = dict(self.coeffs)
        for a, v in other.coeffs.items():
            out[a] = out[a] + v if a in out else v
        return self._new(out)

    def __neg__(self):
        return self._new({a: -v for a, v in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def scale(self, r) -> AlgebraElement:
        r = self.ring.coerce(r)
        return self._new({a: r * v for a, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return convolve(self, other)
        if isinstance(other, (int, RingElement)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, RingElement)):
            return self.scale(other)
        return NotImplemented

    def star(self) -> AlgebraElement:
        return star(self)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (
            self.ring == other.ring
            and (self.groupoid is other.groupoid or self.groupoid == other.groupoid)
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    @property
    def sort_key(self) -> tuple:
        zero = self.ring.zero()
        return tuple(self.coeffs.get(a, zero).sort_key for a in self.groupoid.arrows)

    def to_document(self) -> dict[str, str]:
        return {a: str(self.coeffs[a]) for a in self.support}

    def __repr__(self) -> str:
        body = ", ".join(f"{a}: {v}" for a, v in self.to_document().items())
        return f"AlgebraElement({self.ring}, {{{body}}})"


def convolve(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    f._same(g)
    G = f.groupoid
    out: dict[str, RingElement] = {}
    for a, fa in f.coeffs.items():
        ia = G.inv[a]
        for c in G.range_fiber(G.rng[a]):
            b = G.comp.get((ia, c))
            if b is None:
                continue
            gb = g.coeffs.get(b)
            if gb is None:
                continue
            term = fa * gb
            out[c] = out[c] + term if c in out else term
    return f._new(out)


def star(f: AlgebraElement) -> AlgebraElement:
    inv = f.groupoid.inv
    return f._new({inv[a]: v.conjugate() for a, v in f.coeffs.items()})


def is_diagonal(f: AlgebraElement) -> bool:
    units = f.groupoid.units
    return all(a in units for a in f.coeffs)


def is_projection(f: AlgebraElement) -> bool:
    """True iff f = f * f^*, which forces f self-adjoint and idempotent."""
    ok = f == convolve(f, star(f))
    if ok:
        assert star(f) == f and convolve(f, f) == f
    return ok


def _self_adjoint_slots(groupoid: FiniteGroupoid):
    """Split the arrows into free slots for a self-adjoint function.

    Returns ``(real_slots, pair_slots)``: arrows with inv(a) = a, whose
    value must equal its conjugate, and one representative per pair
    {a, inv(a)}.
    """
    real, pairs, seen = [], [], set()
    for a in groupoid.arrows:
        if a in seen:
            continue
        b = groupoid.inv[a]
        seen.update((a, b))
        if a == b:
            real.append(a)
        else:
            pairs.append((a, b))
    return real, pairs


def enumerate_projections(
    ring: RingSpec,
    groupoid: FiniteGroupoid,
    max_height: int,
    *,
    max_degree: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> list[AlgebraElement]:
    """All projections whose coefficients have height <= max_height.

    Projections are self-adjoint, so only self-adjoint candidates are
    generated; the result is sorted by coefficient keys in arrow order.
    """
    elements = ring.enumerate_elements(max_height, max_degree)
    real_values = [x for x in elements if x.conjugate() == x]
    real, pairs = _self_adjoint_slots(groupoid)
    needed = len(real_values) ** len(real) * len(elements) ** len(pairs)
    if needed > budget:
        raise BudgetExceededError(
            f"projection search over {ring} with max_height={max_height}", needed, budget
        )
    choices = [real_values] * len(real) + [elements] * len(pairs)
    found = []
    for combo in itertools.product(*choices):
        coeffs = dict(zip(real, combo))
        for (a, b), v in zip(pairs, combo[len(real):]):
            coeffs[a] = v
            coeffs[b] = v.conjugate()
        f = AlgebraElement(groupoid, ring, coeffs)
        if is_projection(f):
            found.append(f)
    found.sort(key=lambda f: f.sort_key)
    return found


def is_normalizer_pair(f: AlgebraElement, f2: AlgebraElement) -> bool:
    """Check f f2 f = f, f2 f f2 = f2 and f D f2, f2 D f inside D.

    The last condition is tested on the indicators of single units, which
    span the diagonal subalgebra.
    """
    f._same(f2)
    if convolve(convolve(f, f2), f) != f:
        return False
    if convolve(convolve(f2, f), f2) != f2:
        return False
    for u in f.groupoid.unit_list:
        e = AlgebraElement.indicator(f.groupoid, f.ring, u)
        if not is_diagonal(convolve(convolve(f, e), f2)):
            return False
        if not is_diagonal(convolve(convolve(f2, e), f)):
            return False
    return True


# ---------------------------------------------------------------------------
# R(R_n) = M_n(R)


def pair_groupoid_size(groupoid: FiniteGroupoid) -> int | None:
    """n if ``groupoid`` is the canonical pair groupoid on n points."""
    n = math.isqrt(len(groupoid.arrows))
    if n < 1 or n * n != len(groupoid.arrows):
        return None
    return n if groupoid == full_equivalence_groupoid(n) else None


def _require_pair_groupoid(groupoid: FiniteGroupoid) -> int:
    n = pair_groupoid_size(groupoid)
    if n is None:
        raise UsageError("matrix realisation needs the canonical pair groupoid Rn:k")
    return n


def to_matrix(f: AlgebraElement) -> RingMatrix:
    """Send f to the matrix with (i, j) entry f((i+1, j+1))."""
    n = _require_pair_groupoid(f.groupoid)
    return RingMatrix(
        f.ring, [[f(f"({i},{j})") for j in range(1, n + 1)] for i in range(1, n + 1)]
    )


def from_matrix(A: RingMatrix, groupoid: FiniteGroupoid | None = None) -> AlgebraElement:
    if groupoid is None:
        groupoid = full_equivalence_groupoid(A.n)
    n = _require_pair_groupoid(groupoid)
    if n != A.n:
        raise UsageError(f"matrix of size {A.n} does not match Rn:{n}")
    coeffs = {f"({i + 1},{j + 1})": A[i, j] for i in range(n) for j in range(n)}
    return AlgebraElement(groupoid, A.ring, coeffs)


# ---------------------------------------------------------------------------
# *-homomorphisms presented on arrow indicators


@dataclass
class StarHomomorphism:
    """A linear map R G -> R H given by the images of the indicators 1_a."""

    source: FiniteGroupoid
    target: FiniteGroupoid
    ring: RingSpec
    images: dict[str, AlgebraElement]

    def __post_init__(self):
        missing = [a for a in self.source.arrows if a not in self.images]
        if missing:
            raise UsageError(f"images missing for arrows {missing}")
        for a, img in self.images.items():
            if img.ring != self.ring or (
                img.groupoid is not self.target and img.groupoid != self.target
            ):
                raise UsageError(f"image of {a} is not an element of {self.ring}H")

    def __call__(self, f: AlgebraElement) -> AlgebraElement:
        out = AlgebraElement.zero(self.target, self.ring)
        for a, v in f.coeffs.items():
            out = out + self.images[a].scale(v)
        return out

    def verify(self) -> None:
        """Raise unless the map is multiplicative and star-compatible."""
        G = self.source
        zero = AlgebraElement.zero(self.target, self.ring)
        for a in G.arrows:
            ha = self.images[a]
            if star(ha) != self.images[G.inv[a]]:
                raise StarHomomorphismError(
                    f"h(1_{a})* != h(1_{G.inv[a]})", (a, G.inv[a])
                )
            for b in G.arrows:
                ab = G.comp.get((a, b))
                expected = self.images[ab] if ab is not None else zero
                if convolve(ha, self.images[b]) != expected:
                    raise StarHomomorphismError(
                        f"h(1_{a}) h(1_{b}) != h(1_{a} 1_{b})", (a, b)
                    )


def is_diagonal_preserving(h: StarHomomorphism) -> bool:
    """True iff h sends every unit indicator into the target diagonal.

    ``h`` is first checked to be a *-homomorphism and a
    :class:`StarHomomorphismError` names the first failing pair otherwise.
    """
    h.verify()
    return all(is_diagonal(h.images[u]) for u in h.source.unit_list)


def identity_homomorphism(groupoid: FiniteGroupoid, ring: RingSpec) -> StarHomomorphism:
    images = {a: AlgebraElement.indicator(groupoid, ring, a) for a in groupoid.arrows}
    return StarHomomorphism(groupoid, groupoid, ring, images)
