"""Exact arithmetic in conjugation-closed subrings of the complex numbers.

A ring is described by a frozen :class:`RingSpec` (``Integers()``,
``GaussianIntegers()``, ``Quadratic(d)``, ``Localized(m)``, ``Rationals()``,
``PolyExt(base)``) and its elements are :class:`RingElement` values wrapping
a canonical payload:

======================  ==============================================
ring                    payload
======================  ==============================================
Integers                ``int``
Localized, Rationals    ``Fraction`` in lowest terms
GaussianIntegers        ``(a, b)`` meaning ``a + b*i``
Quadratic(d, base)      ``(a, b)`` of base payloads meaning ``a + b*sqrt(d)``
PolyExt(base)           tuple of base payloads, no trailing zeros
======================  ==============================================

Quadratic elements are formal pairs and are never evaluated numerically,
so ``a + b*sqrt(d) == a' + b'*sqrt(d)`` iff the pairs agree.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .errors import RingParseError, UsageError

__all__ = [
    "RingSpec",
    "Integers",
    "GaussianIntegers",
    "Quadratic",
    "Localized",
    "Rationals",
    "PolyExt",
    "RingElement",
    "parse_ring_spec",
    "square_factor",
]


def _prime_factors(n: int) -> tuple[int, ...]:
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def square_factor(d: int) -> int:
    """Largest k with k*k dividing d."""
    n = abs(d)
    k = 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            k *= p
            n //= p * p
        if n % p == 0:
            n //= p
        p += 1
    return k


def _int_key(x: int) -> tuple:
    return (abs(x), x < 0)


class RingSpec:
    """Base class for ring descriptions.

    Subclasses implement arithmetic on raw payloads; user code works with
    :class:`RingElement` objects obtained from :meth:`element`,
    :meth:`from_int`, :meth:`parse_element` or :meth:`enumerate_elements`.
    """

    # payload-level hooks ---------------------------------------------------
    def _zero(self):
        raise NotImplementedError

    def _from_int(self, k: int):
        raise NotImplementedError

    def _add(self, x, y):
        raise NotImplementedError

    def _neg(self, x):
        raise NotImplementedError

    def _mul(self, x, y):
        raise NotImplementedError

    def _conj(self, x):
        raise NotImplementedError

    def _height(self, x) -> int:
        raise NotImplementedError

    def _key(self, x) -> tuple:
        raise NotImplementedError

    def _div_int(self, x, k: int):
        raise NotImplementedError

    def _as_int(self, x) -> int | None:
        raise NotImplementedError

    def _monomials(self, x) -> list[tuple[Fraction, tuple[str, ...]]]:
        raise NotImplementedError

    def _enumerate(self, max_height: int, max_degree: int) -> Iterable:
        raise NotImplementedError

    def _normalize(self, x):
        return x

    # structure -------------------------------------------------------------
    @property
    def base(self) -> RingSpec | None:
        return None

    def tower(self) -> list[RingSpec]:
        """This ring followed by its bases, outermost first."""
        out: list[RingSpec] = [self]
        while out[-1].base is not None:
            out.append(out[-1].base)
        return out

    def has_poly(self) -> bool:
        return any(isinstance(r, PolyExt) for r in self.tower())

    def is_real(self) -> bool:
        """True when the ring is contained in the real line."""
        raise NotImplementedError

    def has_rational_fraction_field(self) -> bool:
        return False

    def inverted_integer(self) -> int | None:
        """Some n >= 2 with 1/n in the ring, or None if there is none."""
        base = self.base
        return base.inverted_integer() if base is not None else None

    def is_discrete_at_one(self) -> str:
        """'yes' if |r| < 1 forces r = 0, 'no' if not, 'unknown' otherwise.

        'yes' is returned exactly for the families whose norm-squares are
        nonnegative integers.
        """
        raise NotImplementedError

    def generators(self) -> dict[str, object]:
        return {}

    def _lift(self, x: RingElement) -> RingElement:
        """Embed an element of this ring or of one of its bases."""
        if x.spec == self:
            return x
        base = self.base
        if base is None:
            raise UsageError(f"cannot embed {x.spec} into {self}")
        inner = base._lift(x)
        return RingElement(self, self._from_base(inner.value))

    def _from_base(self, payload):
        raise NotImplementedError

    # element construction --------------------------------------------------
    def element(self, payload) -> RingElement:
        return RingElement(self, self._normalize(payload))

    def zero(self) -> RingElement:
        return RingElement(self, self._zero())

    def one(self) -> RingElement:
        return RingElement(self, self._from_int(1))

    def from_int(self, k: int) -> RingElement:
        return RingElement(self, self._from_int(k))

    def coerce(self, x) -> RingElement:
        if isinstance(x, RingElement):
            return self._lift(x)
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, str):
            return self.parse_element(x)
        if isinstance(x, Fraction):
            return self.from_int(x.numerator).div_int(x.denominator)
        raise UsageError(f"cannot interpret {x!r} as an element of {self}")

    def parse_element(self, text: str) -> RingElement:
        return _ElementParser(self, text).parse()

    def enumerate_elements(self, max_height: int, max_degree: int = 1) -> list[RingElement]:
        """All elements of height <= max_height in canonical order.

        The order sorts by height first, so the output for ``h`` is a prefix
        of the output for ``h + 1``.  ``max_degree`` bounds polynomial
        degrees and is ignored by rings without a transcendental generator.
        """
        if max_height < 0:
            raise UsageError("max_height must be >= 0")
        if max_degree < 0:
            raise UsageError("max_degree must be >= 0")
        payloads = set(self._enumerate(max_height, max_degree))
        ordered = sorted(payloads, key=lambda p: (self._height(p), self._key(p)))
        return [RingElement(self, p) for p in ordered]


# ---------------------------------------------------------------------------
# rings with fraction field Q


@dataclass(frozen=True)
class Integers(RingSpec):
    def __str__(self) -> str:
        return "Z"

    def _zero(self):
        return 0

    def _from_int(self, k):
        return k

    def _add(self, x, y):
        return x + y

    def _neg(self, x):
        return -x

    def _mul(self, x, y):
        return x * y

    def _conj(self, x):
        return x

    def _height(self, x):
        return abs(x)

    def _key(self, x):
        return _int_key(x)

    def _div_int(self, x, k):
        if k == 0 or x % k:
            raise UsageError(f"{x}/{k} is not in Z")
        return x // k

    def _as_int(self, x):
        return x

    def _monomials(self, x):
        return [(Fraction(x), ())] if x else []

    def _enumerate(self, max_height, max_degree):
        return range(-max_height, max_height + 1)

    def is_real(self):
        return True

    def has_rational_fraction_field(self):
        return True

    def is_discrete_at_one(self):
        return "yes"


class _FractionRing(RingSpec):
    def _zero(self):
        return Fraction(0)

    def _from_int(self, k):
        return Fraction(k)

    def _add(self, x, y):
        return x + y

    def _neg(self, x):
        return -x

    def _mul(self, x, y):
        return x * y

    def _conj(self, x):
        return x

    def _height(self, x):
        if not x:
            return 0
        return max(abs(x.numerator), x.denominator)

    def _key(self, x):
        return (x.denominator, abs(x.numerator), x < 0)

    def _admits_denominator(self, q: int) -> bool:
        raise NotImplementedError

    def _normalize(self, x):
        x = Fraction(x)
        if not self._admits_denominator(x.denominator):
            raise UsageError(f"{x} is not in {self}")
        return x

    def _div_int(self, x, k):
        if k == 0:
            raise UsageError("division by zero")
        return self._normalize(x / k)

    def _as_int(self, x):
        return x.numerator if x.denominator == 1 else None

    def _monomials(self, x):
        return [(x, ())] if x else []

    def _enumerate(self, max_height, max_degree):
        yield Fraction(0)
        for q in range(1, max_height + 1):
            if not self._admits_denominator(q):
                continue
            for p in range(1, max_height + 1):
                if math.gcd(p, q) == 1:
                    yield Fraction(p, q)
                    yield Fraction(-p, q)

    def is_real(self):
        return True

    def has_rational_fraction_field(self):
        return True

    def is_discrete_at_one(self):
        return "no"


@dataclass(frozen=True)
class Localized(_FractionRing):
    """The ring Z[1/m]: fractions whose denominators have only primes of m."""

    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 2:
            raise UsageError(f"Z[1/m] needs an integer m >= 2, got {self.m!r}")

    def __str__(self) -> str:
        return f"Z[1/{self.m}]"

    @cached_property
    def _primes(self) -> tuple[int, ...]:
        return _prime_factors(self.m)

    def _admits_denominator(self, q):
        for p in self._primes:
            while q % p == 0:
                q //= p
        return q == 1

    def inverted_integer(self):
        return self.m


@dataclass(frozen=True)
class Rationals(_FractionRing):
    def __str__(self) -> str:
        return "Q"

    def _admits_denominator(self, q):
        return True

    def inverted_integer(self):
        return 2


# ---------------------------------------------------------------------------
# quadratic extensions


class _PairRing(RingSpec):
    """Elements a + b*s with s*s = d, a and b in a real base ring."""

    d: int

    @property
    def base(self) -> RingSpec:
        raise NotImplementedError

    @property
    def symbol(self) -> str:
        return "i" if self.d == -1 else f"sqrt({self.d})"

    def _zero(self):
        z = self.base._zero()
        return (z, z)

    def _from_int(self, k):
        return (self.base._from_int(k), self.base._zero())

    def _from_base(self, payload):
        return (payload, self.base._zero())

    def _normalize(self, x):
        a, b = x
        return (self.base._normalize(a), self.base._normalize(b))

    def _add(self, x, y):
        B = self.base
        return (B._add(x[0], y[0]), B._add(x[1], y[1]))

    def _neg(self, x):
        B = self.base
        return (B._neg(x[0]), B._neg(x[1]))

    @cached_property
    def _d_base(self):
        return self.base._from_int(self.d)

    def _mul(self, x, y):
        B = self.base
        a, b = x
        c, e = y
        re_part = B._add(B._mul(a, c), B._mul(self._d_base, B._mul(b, e)))
        ir_part = B._add(B._mul(a, e), B._mul(b, c))
        return (re_part, ir_part)

    def _conj(self, x):
        B = self.base
        a, b = x
        b = B._conj(b)
        return (B._conj(a), B._neg(b) if self.d < 0 else b)

    def _height(self, x):
        return max(self.base._height(x[0]), self.base._height(x[1]))

    def _key(self, x):
        return (self.base._key(x[0]), self.base._key(x[1]))

    def _div_int(self, x, k):
        return (self.base._div_int(x[0], k), self.base._div_int(x[1], k))

    def _as_int(self, x):
        zero = self.base._zero()
        if x[1] != zero:
            return None
        return self.base._as_int(x[0])

    def _monomials(self, x):
        out = list(self.base._monomials(x[0]))
        out += [(c, syms + (self.symbol,)) for c, syms in self.base._monomials(x[1])]
        return out

    def _enumerate(self, max_height, max_degree):
        comps = list(self.base._enumerate(max_height, max_degree))
        return itertools.product(comps, comps)

    def is_real(self):
        return self.d > 0 and self.base.is_real()

    def generators(self):
        B = self.base
        s = (B._zero(), B._from_int(1))
        gens = {self.symbol: s, f"sqrt({self.d})": s}
        return gens


@dataclass(frozen=True)
class GaussianIntegers(_PairRing):
    """Z[i]."""

    d = -1

    def __str__(self) -> str:
        return "Z[i]"

    @property
    def base(self) -> RingSpec:
        return Integers()

    def is_discrete_at_one(self):
        return "yes"


_Q_TYPE = (Integers, Localized, Rationals)


@dataclass(frozen=True)
class Quadratic(_PairRing):
    """The ring base[sqrt(d)] for squarefree d not in {0, 1}.

    Bases with fraction field Q need no further hypothesis since sqrt(d) is
    irrational.  For the other admissible bases (Z[i] and quadratic rings)
    ``assume_sqrt_outside`` must be set, recording the caller's assertion
    that sqrt(d) is not in the fraction field of ``base``.
    """

    d: int
    over: RingSpec = Integers()
    assume_sqrt_outside: bool = False

    def __post_init__(self):
        d = self.d
        if not isinstance(d, int) or d in (0, 1):
            raise UsageError(f"sqrt argument must be an integer other than 0 and 1, got {d!r}")
        k = square_factor(d)
        if k > 1:
            rest = d // (k * k)
            detail = f"{d} = {k}²" if rest == 1 else f"{d} = {k}²·{rest}"
            raise UsageError(f"sqrt argument {d} is not squarefree ({detail})")
        base = self.over
        if isinstance(base, PolyExt) or not isinstance(base, RingSpec):
            raise UsageError(f"cannot adjoin sqrt({d}) to {base}")
        if not isinstance(base, _Q_TYPE):
            if not self.assume_sqrt_outside:
                raise UsageError(
                    f"adjoining sqrt({d}) to {base} needs the assertion that "
                    f"sqrt({d}) lies outside its fraction field"
                )
            if any(isinstance(r, _PairRing) and r.d == d for r in base.tower()):
                raise UsageError(f"sqrt({d}) already lies in {base}")
        elif self.assume_sqrt_outside:
            object.__setattr__(self, "assume_sqrt_outside", False)

    def __str__(self) -> str:
        bang = "!" if self.assume_sqrt_outside else ""
        return f"{self.over}[sqrt{bang} {self.d}]"

    @property
    def base(self) -> RingSpec:
        return self.over

    def generators(self):
        gens = super().generators()
        if self.d != -1:
            gens.pop("i", None)
        return gens

    def is_discrete_at_one(self):
        if isinstance(self.over, Integers):
            return "yes" if self.d < 0 else "no"
        if isinstance(self.over, (Localized, Rationals)) or self.d > 0:
            return "no"
        return "unknown"


# ---------------------------------------------------------------------------
# polynomial extension by a real transcendental


@dataclass(frozen=True)
class PolyExt(RingSpec):
    """base[t] with t a formal real transcendental, fixed by conjugation."""

    over: RingSpec

    def __post_init__(self):
        if not isinstance(self.over, RingSpec):
            raise UsageError(f"not a ring spec: {self.over!r}")

    def __str__(self) -> str:
        return f"{self.over}[t]"

    @property
    def base(self) -> RingSpec:
        return self.over

    @cached_property
    def variable(self) -> str:
        depth = sum(isinstance(r, PolyExt) for r in self.over.tower())
        return "t" if depth == 0 else f"t{depth + 1}"

    def _trim(self, coeffs) -> tuple:
        coeffs = list(coeffs)
        zero = self.over._zero()
        while coeffs and coeffs[-1] == zero:
            coeffs.pop()
        return tuple(coeffs)

    def _normalize(self, x):
        return self._trim(self.over._normalize(c) for c in x)

    def _zero(self):
        return ()

    def _from_int(self, k):
        return self._trim([self.over._from_int(k)])

    def _from_base(self, payload):
        return self._trim([payload])

    def _add(self, x, y):
        B = self.over
        if len(x) < len(y):
            x, y = y, x
        out = list(x)
        for k, c in enumerate(y):
            out[k] = B._add(out[k], c)
        return self._trim(out)

    def _neg(self, x):
        return tuple(self.over._neg(c) for c in x)

    def _mul(self, x, y):
        if not x or not y:
            return ()
        B = self.over
        out = [B._zero()] * (len(x) + len(y) - 1)
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                out[i + j] = B._add(out[i + j], B._mul(a, b))
        return self._trim(out)

    def _conj(self, x):
        return tuple(self.over._conj(c) for c in x)

    def _height(self, x):
        return max((self.over._height(c) for c in x), default=0)

    def _key(self, x):
        return (len(x), tuple(self.over._key(c) for c in x))

    def _div_int(self, x, k):
        return tuple(self.over._div_int(c, k) for c in x)

    def _as_int(self, x):
        if not x:
            return 0
        if len(x) > 1:
            return None
        return self.over._as_int(x[0])

    def _monomials(self, x):
        out = []
        for k, c in enumerate(x):
            power = () if k == 0 else ((self.variable if k == 1 else f"{self.variable}^{k}"),)
            out += [(q, syms + power) for q, syms in self.over._monomials(c)]
        return out

    def _enumerate(self, max_height, max_degree):
        comps = list(self.over._enumerate(max_height, max_degree))
        for coeffs in itertools.product(comps, repeat=max_degree + 1):
            yield self._trim(coeffs)

    def is_real(self):
        return self.over.is_real()

    def is_discrete_at_one(self):
        return "unknown"

    def generators(self):
        B = self.over
        return {self.variable: (B._zero(), B._from_int(1))}

    def coefficients(self, x: RingElement) -> list[RingElement]:
        """Coefficients of ``x`` over the base, constant term first."""
        x = self._lift(x)
        return [RingElement(self.over, c) for c in x.value]

    def from_coefficients(self, coeffs: Iterable) -> RingElement:
        return RingElement(self, self._trim(self.over.coerce(c).value for c in coeffs))


# ---------------------------------------------------------------------------
# elements


class RingElement:
    """An immutable element of a ring described by a :class:`RingSpec`."""

    __slots__ = ("spec", "value")

    def __init__(self, spec: RingSpec, value):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("RingElement is immutable")

    def _other(self, other) -> RingElement | None:
        if isinstance(other, RingElement):
            if other.spec != self.spec:
                raise UsageError(f"ring mismatch: {self.spec} vs {other.spec}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self.spec.from_int(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RingElement(self.spec, self.spec._add(self.value, o.value))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.spec, self.spec._neg(self.value))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RingElement(self.spec, self.spec._mul(self.value, o.value))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = self.spec.one()
        for _ in range(k):
            out = out * self
        return out

    def div_int(self, k: int) -> RingElement:
        """Exact quotient by a nonzero integer; fails if it leaves the ring."""
        return RingElement(self.spec, self.spec._div_int(self.value, k))

    def conjugate(self) -> RingElement:
        return RingElement(self.spec, self.spec._conj(self.value))

    def norm_sq(self) -> RingElement:
        """``|x|^2 = x * conj(x)``, a real element of the same ring."""
        return self * self.conjugate()

    @property
    def height(self) -> int:
        return self.spec._height(self.value)

    @property
    def sort_key(self) -> tuple:
        return (self.spec._height(self.value), self.spec._key(self.value))

    def as_int(self) -> int | None:
        return self.spec._as_int(self.value)

    def is_zero(self) -> bool:
        return self.value == self.spec._zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == self.spec._from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.value))

    def __str__(self) -> str:
        terms = self.spec._monomials(self.value)
        if not terms:
            return "0"
        pieces = []
        for coeff, syms in terms:
            if not syms:
                pieces.append(str(coeff))
            elif coeff == 1:
                pieces.append("*".join(syms))
            elif coeff == -1:
                pieces.append("-" + "*".join(syms))
            else:
                pieces.append(f"{coeff}*" + "*".join(syms))
        out = pieces[0]
        for p in pieces[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self) -> str:
        return f"RingElement({self.spec}, {self})"


# ---------------------------------------------------------------------------
# element expression parser


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class _ElementParser:
    """Recursive-descent evaluator for element literals like ``1/2-3*i``."""

    def __init__(self, spec: RingSpec, text: str):
        self.spec = spec
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        for m in _TOKEN.finditer(text):
            if m.group(1):
                self.tokens.append(("int", m.group(1), m.start(1)))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), m.start(2)))
            elif m.group(3) and not m.group(3).isspace():
                self.tokens.append(("op", m.group(3), m.start(3)))
        self.pos = 0
        self.gens: dict[str, RingElement] = {}
        for ring in spec.tower():
            for name, payload in ring.generators().items():
                self.gens.setdefault(name, spec._lift(RingElement(ring, payload)))

    def error(self, msg: str):
        where = self.tokens[self.pos][2] if self.pos < len(self.tokens) else len(self.text)
        raise RingParseError(f"{msg} in element {self.text!r} of {self.spec}", where)

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def accept(self, value: str) -> bool:
        tok = self.peek()
        if tok is not None and tok[1] == value and tok[0] != "int":
            self.pos += 1
            return True
        return False

    def parse(self) -> RingElement:
        if not self.tokens:
            self.error("empty expression")
        value = self.expr()
        if self.peek() is not None:
            self.error("unexpected token")
        return value

    def expr(self) -> RingElement:
        value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> RingElement:
        value = self.unary()
        while True:
            tok = self.peek()
            if self.accept("*"):
                value = value * self.unary()
            elif self.accept("/"):
                divisor = self.unary().as_int()
                if not divisor:
                    self.error("divisor must be a nonzero integer")
                try:
                    value = value.div_int(divisor)
                except UsageError as exc:
                    self.error(str(exc))
            elif tok is not None and (tok[0] == "name" or tok[1] == "("):
                value = value * self.unary()
            else:
                return value

    def unary(self) -> RingElement:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> RingElement:
        value = self.atom()
        if self.accept("^"):
            tok = self.peek()
            if tok is None or tok[0] != "int":
                self.error("exponent must be a nonnegative integer")
            self.pos += 1
            value = value ** int(tok[1])
        return value

    def atom(self) -> RingElement:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end")
        kind, text, _ = tok
        if kind == "int":
            self.pos += 1
            return self.spec.from_int(int(text))
        if self.accept("("):
            value = self.expr()
            if not self.accept(")"):
                self.error("expected ')'")
            return value
        if kind == "name" and text == "sqrt":
            self.pos += 1
            if not self.accept("("):
                self.error("expected '(' after sqrt")
            sign = -1 if self.accept("-") else 1
            tok = self.peek()
            if tok is None or tok[0] != "int":
                self.error("sqrt takes an integer literal")
            self.pos += 1
            name = f"sqrt({sign * int(tok[1])})"
            if not self.accept(")"):
                self.error("expected ')'")
            if name not in self.gens:
                self.pos -= 1
                self.error(f"{name} is not a generator")
            return self.gens[name]
        if kind == "name":
            if text not in self.gens:
                self.error(f"unknown symbol {text!r}")
            self.pos += 1
            return self.gens[text]
        self.error(f"unexpected {text!r}")


# ---------------------------------------------------------------------------
# ring-spec grammar


_SUFFIX = re.compile(r"\[(?:(i)|sqrt(!?)([+-]?\d+)|1/(\d+)|(t))\]")


def parse_ring_spec(text: str) -> RingSpec:
    """Parse ``Z``, ``Q``, ``Z[i]``, ``Z[sqrt D]``, ``Z[1/M]`` and ``BASE[t]``.

    Whitespace is ignored.  Suffixes may be stacked (``Z[1/2][sqrt -1]``,
    ``Z[sqrt 2][t]``); ``BASE[i]`` over any base other than ``Z`` means
    ``BASE[sqrt -1]``.  ``[sqrt! D]`` records the assertion that sqrt(D) is
    outside the fraction field of a base whose fraction field is not Q.
    """
    positions = [k for k, ch in enumerate(text) if not ch.isspace()]
    s = "".join(text[k] for k in positions)

    def orig(k: int) -> int:
        return positions[k] if k < len(positions) else len(text)

    if not s:
        raise RingParseError("empty ring spec", 0)
    if s[0] == "Z":
        ring: RingSpec = Integers()
    elif s[0] == "Q":
        ring = Rationals()
    else:
        raise RingParseError(f"ring spec must start with 'Z' or 'Q', got {s[0]!r}", orig(0))
    k = 1
    while k < len(s):
        m = _SUFFIX.match(s, k)
        if m is None:
            raise RingParseError(f"malformed suffix {s[k:]!r}", orig(k))
        try:
            if m.group(1):
                if isinstance(ring, Integers):
                    ring = GaussianIntegers()
                else:
                    ring = Quadratic(-1, ring)
            elif m.group(3) is not None:
                ring = Quadratic(int(m.group(3)), ring, assume_sqrt_outside=bool(m.group(2)))
            elif m.group(4) is not None:
                if not isinstance(ring, Integers):
                    raise UsageError("[1/M] may only follow Z")
                ring = Localized(int(m.group(4)))
            else:
                ring = PolyExt(ring)
        except UsageError as exc:
            raise RingParseError(str(exc), orig(k)) from None
        k = m.end()
    return ring
