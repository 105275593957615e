"""Exact elements of Q-linear spans of symbolic reals, with guaranteed signs.

Every value is a finite rational combination of canonical base reals:

* ``1``,
* ``sqrt(r)`` for a squarefree integer ``r > 1``,
* ``pi^k`` for ``k != 0``,
* ``inv(pi-1)`` = 1/(pi - 1).

Distinct canonical base reals are Q-linearly independent (square roots of
distinct squarefree integers are independent over Q, and pi is transcendental
over the algebraic numbers), so a combination is zero exactly when all its
coordinates are zero. Nonzero signs are found by dyadic interval evaluation
with outward rounding, refined until the enclosure excludes zero.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import IndependenceViolation, OutsideSpan, PrecisionExhausted
from .profinite import factorize, format_rational, parse_rational

DEFAULT_MAX_BITS = 4096

_KIND_ORDER = {"one": 0, "sqrt": 1, "pi": 2, "invpim1": 3}


@dataclass(frozen=True)
class BaseReal:
    kind: str
    arg: int = 0

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown base real kind {self.kind!r}")
        if self.kind == "pi" and self.arg == 0:
            raise ValueError("pi^0 is written as 1")
        if self.kind == "sqrt" and (self.arg < 2 or any(e > 1 for e in factorize(self.arg).values())):
            raise ValueError("sqrt base must be a squarefree integer > 1")

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.arg)

    def __str__(self):
        if self.kind == "one":
            return "1"
        if self.kind == "sqrt":
            return f"sqrt({self.arg})"
        if self.kind == "pi":
            return "pi" if self.arg == 1 else f"pi^{self.arg}"
        return "inv(pi-1)"

    def is_laurent(self) -> bool:
        return self.kind in ("one", "pi", "invpim1")


ONE = BaseReal("one")
PI = BaseReal("pi", 1)
INV_PI_MINUS_ONE = BaseReal("invpim1")


def pi_power(k: int) -> BaseReal:
    return ONE if k == 0 else BaseReal("pi", k)


def pi_exponent(b: BaseReal) -> Optional[int]:
    if b.kind == "one":
        return 0
    if b.kind == "pi":
        return b.arg
    return None


@dataclass(frozen=True)
class SpanElement:
    """Finite rational combination of canonical base reals (no zero entries)."""

    coords: Tuple[Tuple[BaseReal, Fraction], ...] = ()

    @classmethod
    def from_map(cls, coords: Mapping[BaseReal, Fraction]) -> "SpanElement":
        items = [(b, Fraction(c)) for b, c in coords.items() if c != 0]
        items.sort(key=lambda bc: bc[0].sort_key())
        return cls(tuple(items))

    @classmethod
    def of(cls, base: BaseReal, coeff=1) -> "SpanElement":
        return cls.from_map({base: Fraction(coeff)})

    def as_dict(self) -> Dict[BaseReal, Fraction]:
        return dict(self.coords)

    def coeff(self, base: BaseReal) -> Fraction:
        for b, c in self.coords:
            if b == base:
                return c
        return Fraction(0)

    def bases(self) -> List[BaseReal]:
        return [b for b, _ in self.coords]

    def is_zero(self) -> bool:
        return not self.coords

    def __add__(self, other: "SpanElement") -> "SpanElement":
        out = self.as_dict()
        for b, c in other.coords:
            out[b] = out.get(b, Fraction(0)) + c
        return SpanElement.from_map(out)

    def __neg__(self) -> "SpanElement":
        return SpanElement(tuple((b, -c) for b, c in self.coords))

    def __sub__(self, other: "SpanElement") -> "SpanElement":
        return self + (-other)

    def scale(self, q) -> "SpanElement":
        q = Fraction(q)
        if q == 0:
            return ZERO
        return SpanElement(tuple((b, c * q) for b, c in self.coords))

    def __str__(self):
        if not self.coords:
            return "0"
        parts = []
        for b, c in self.coords:
            if b == ONE:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(str(b))
            elif c == -1:
                parts.append(f"-{b}")
            else:
                parts.append(f"{format_rational(c)}*{b}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")


ZERO = SpanElement()


def rational(q) -> SpanElement:
    return SpanElement.of(ONE, parse_rational(q))


def sqrt_rational(q) -> SpanElement:
    """sqrt(q) for a positive non-square rational ``q``, in canonical form."""
    q = parse_rational(q)
    if q <= 0:
        raise ValueError("sqrt argument must be positive")
    a, b = q.numerator, q.denominator
    square, free = 1, 1
    for p, e in factorize(a * b).items():
        square *= p ** (e // 2)
        free *= p ** (e % 2)
    if free == 1:
        raise ValueError(f"{q} is the square of a rational")
    # sqrt(a/b) = sqrt(a*b)/b = square*sqrt(free)/b
    return SpanElement.of(BaseReal("sqrt", free), Fraction(square, b))


_BASE_RE = re.compile(
    r"^(?:(?P<sqrt>sqrt\((?P<sq>[^)]+)\))|(?P<inv>inv\(pi-1\))|(?P<pi>pi(?:\^\(?(?P<k>-?\d+)\)?)?))$")


def parse_base(text: str) -> SpanElement:
    """Parse one base-real literal: ``1/2``, ``sqrt(2)``, ``pi``, ``pi^k``, ``inv(pi-1)``."""
    t = text.strip().replace(" ", "")
    m = _BASE_RE.match(t)
    if m is None:
        return rational(t)
    if m.group("sqrt"):
        return sqrt_rational(m.group("sq"))
    if m.group("inv"):
        return SpanElement.of(INV_PI_MINUS_ONE)
    k = int(m.group("k")) if m.group("k") else 1
    return SpanElement.of(pi_power(k))


def parse_real(text) -> SpanElement:
    """Parse a signed sum of ``coeff*base`` terms, e.g. ``"1 - 3/2*sqrt(2)"``."""
    if isinstance(text, SpanElement):
        return text
    if isinstance(text, (int, Fraction)):
        return rational(text)
    t = str(text).replace(" ", "")
    if not t:
        raise ValueError("empty real")
    out = ZERO
    # split on +/- not inside parentheses and not after '^' or '('
    terms, depth, start = [], 0, 0
    for i, ch in enumerate(t):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start and t[i - 1] not in "^*/":
            terms.append(t[start:i])
            start = i
    terms.append(t[start:])
    for term in terms:
        sign = 1
        while term and term[0] in "+-":
            sign = -sign if term[0] == "-" else sign
            term = term[1:]
        if "*" in term:
            coef, base = term.split("*", 1)
            out = out + parse_base(base).scale(sign * parse_rational(coef))
        else:
            out = out + parse_base(term).scale(sign)
    return out


# ---------------------------------------------------------------------------
# interval enclosures (integers scaled by 2**bits)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    precision: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, q) -> bool:
        return self.lo <= Fraction(q) <= self.hi


def _cdiv(a: int, b: int) -> int:
    return -((-a) // b)


def _arctan_inv(x: int, w: int) -> Tuple[int, int]:
    """floor-approximation of 2**w * arctan(1/x) and an error bound in ulps."""
    power = (1 << w) // x
    total, k, sign = 0, 0, 1
    x2 = x * x
    while power:
        total += sign * (power // (2 * k + 1))
        power //= x2
        k += 1
        sign = -sign
    # each term is an exact floor (error < 1); the alternating tail is < 1
    return total, k + 2


@lru_cache(maxsize=64)
def _pi_fixed(bits: int) -> Tuple[int, int]:
    guard = 20
    w = bits + guard
    a, ea = _arctan_inv(5, w)
    b, eb = _arctan_inv(239, w)
    approx = 16 * a - 4 * b
    err = 16 * ea + 4 * eb
    return (approx - err) >> guard, _cdiv(approx + err, 1 << guard)


def _mul_pos(x: Tuple[int, int], y: Tuple[int, int], bits: int) -> Tuple[int, int]:
    return (x[0] * y[0]) >> bits, _cdiv(x[1] * y[1], 1 << bits)


def _recip_pos(x: Tuple[int, int], bits: int) -> Tuple[int, int]:
    if x[0] <= 0:
        raise ArithmeticError("reciprocal of interval touching zero")
    return (1 << (2 * bits)) // x[1], _cdiv(1 << (2 * bits), x[0])


@lru_cache(maxsize=4096)
def _base_fixed(base: BaseReal, bits: int) -> Tuple[int, int]:
    """Enclosure [lo, hi] * 2**-bits of a base real, width at most 2 ulps."""
    if base.kind == "one":
        return 1 << bits, 1 << bits
    if base.kind == "sqrt":
        s = math.isqrt(base.arg << (2 * bits))
        return s, s + 1
    k = abs(base.arg) if base.kind == "pi" else 1
    inner = bits + 24 + 4 * k
    pi = _pi_fixed(inner)
    if base.kind == "invpim1":
        one = 1 << inner
        val = _recip_pos((pi[0] - one, pi[1] - one), inner)
    else:
        val = pi
        for _ in range(k - 1):
            val = _mul_pos(val, pi, inner)
        if base.arg < 0:
            val = _recip_pos(val, inner)
    shift = inner - bits
    return val[0] >> shift, _cdiv(val[1], 1 << shift)


def _fixed(e: SpanElement, w: int) -> Tuple[int, int]:
    lo = hi = 0
    for base, c in e.coords:
        bl, bh = _base_fixed(base, w)
        p, q = c.numerator, c.denominator
        if p > 0:
            lo += (p * bl) // q
            hi += _cdiv(p * bh, q)
        else:
            lo += (p * bh) // q
            hi += _cdiv(p * bl, q)
    return lo, hi


def evaluate(e: SpanElement, bits: int) -> Interval:
    """Interval enclosing the value of ``e`` with width well under 2**(1-bits)."""
    if bits < 8:
        raise ValueError("bits must be >= 8")
    w = bits + 32 + len(e.coords).bit_length()
    lo, hi = _fixed(e, w)
    return Interval(Fraction(lo, 1 << w), Fraction(hi, 1 << w), bits)


def sign(e: SpanElement, max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Exact sign of ``e``; zero iff all coordinates vanish."""
    if not e.coords:
        return 0
    bits = min(32, max_bits)
    while True:
        w = bits + 8
        lo, hi = _fixed(e, w)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if bits >= max_bits:
            raise PrecisionExhausted(max_bits)
        bits = min(2 * bits, max_bits)


def compare(e1: SpanElement, e2: SpanElement, max_bits: int = DEFAULT_MAX_BITS) -> int:
    return sign(e1 - e2, max_bits)


# ---------------------------------------------------------------------------
# spans and multipliers

FINITE = "finite"
LAURENT = "laurent_pi"


@dataclass(frozen=True)
class RealSpan:
    """Either a finite declared basis or the lazy family {pi^k} + {inv(pi-1)}."""

    structure: str = FINITE
    basis: Tuple[BaseReal, ...] = ()

    def __post_init__(self):
        if self.structure not in (FINITE, LAURENT):
            raise ValueError(f"unknown span structure {self.structure!r}")

    def contains(self, e: SpanElement) -> bool:
        if self.structure == LAURENT:
            return all(b.is_laurent() for b in e.bases())
        return set(e.bases()) <= set(self.basis)


@dataclass(frozen=True)
class Gamma:
    """A positive multiplier ``coeff * pi**pi_exp``."""

    coeff: Fraction = Fraction(1)
    pi_exp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.coeff <= 0:
            raise ValueError("gamma must be positive")

    def inverse(self) -> "Gamma":
        return Gamma(1 / self.coeff, -self.pi_exp)

    def is_one(self) -> bool:
        return self.coeff == 1 and self.pi_exp == 0

    def is_rational(self) -> bool:
        return self.pi_exp == 0

    def as_span(self) -> SpanElement:
        return SpanElement.of(pi_power(self.pi_exp), self.coeff)

    def __str__(self):
        if self.pi_exp == 0:
            return format_rational(self.coeff)
        p = "pi" if self.pi_exp == 1 else f"pi^{self.pi_exp}"
        return p if self.coeff == 1 else f"{format_rational(self.coeff)}*{p}"

    @classmethod
    def parse(cls, text) -> "Gamma":
        if isinstance(text, Gamma):
            return text
        e = parse_real(text)
        if len(e.coords) != 1 or pi_exponent(e.coords[0][0]) is None:
            raise ValueError(f"gamma must be q*pi^k, got {text!r}")
        base, c = e.coords[0]
        return cls(c, pi_exponent(base))


def _pi_power_over_pim1(k: int) -> SpanElement:
    """pi^k / (pi - 1) expanded in the Laurent family."""
    out = {INV_PI_MINUS_ONE: Fraction(1)}
    if k >= 0:
        # pi^k = (pi - 1)(pi^(k-1) + ... + 1) + 1
        for i in range(k):
            out[pi_power(i)] = Fraction(1)
    else:
        # 1/(pi^m (pi - 1)) = 1/(pi - 1) - sum_{i=1..m} pi^-i
        for i in range(1, -k + 1):
            out[pi_power(-i)] = Fraction(-1)
    return SpanElement.from_map(out)


def mul_by_gamma(e: SpanElement, gamma: Gamma, span: Optional[RealSpan] = None) -> SpanElement:
    """Exact coordinates of ``gamma * e``; raises OutsideSpan if unrepresentable."""
    gamma = Gamma.parse(gamma)
    span = span or RealSpan(LAURENT if not gamma.is_rational() else FINITE)
    if gamma.is_rational():
        out = e.scale(gamma.coeff)
    else:
        if span.structure != LAURENT:
            raise OutsideSpan(f"{gamma} is not a rational multiplier of a finite span")
        out = ZERO
        for base, c in e.coords:
            k = pi_exponent(base)
            if k is not None:
                out = out + SpanElement.of(pi_power(k + gamma.pi_exp), c)
            elif base == INV_PI_MINUS_ONE:
                out = out + _pi_power_over_pim1(gamma.pi_exp).scale(c)
            else:
                raise OutsideSpan(f"pi * {base} is not in the Laurent span")
        out = out.scale(gamma.coeff)
    if span.structure == FINITE and span.basis and not span.contains(out):
        raise OutsideSpan(f"{out} leaves the span")
    return out


def find_small_relation(bases: Iterable[BaseReal], max_height: int = 100,
                        bits: int = 128) -> Optional[Tuple[BaseReal, BaseReal, Fraction]]:
    """Numeric spot-check for a relation ``b_i = q * b_j`` with small ``q``.

    Returns the offending ``(b_i, b_j, q)`` or None. Only pairwise relations
    with numerator and denominator bounded by ``max_height`` are searched.
    """
    bases = list(dict.fromkeys(bases))
    for i, bi in enumerate(bases):
        ei = evaluate(SpanElement.of(bi), bits)
        for bj in bases[i + 1:]:
            ej = evaluate(SpanElement.of(bj), bits)
            for den in range(1, max_height + 1):
                # bi * den - num * bj == 0 for some |num| <= max_height?
                approx = (ei.lo + ei.hi) / (ej.lo + ej.hi) * den
                for num in {math.floor(approx), math.ceil(approx)}:
                    if num == 0 or abs(num) > max_height:
                        continue
                    diff = evaluate(SpanElement.of(bi, den) - SpanElement.of(bj, num), bits)
                    if diff.lo <= 0 <= diff.hi:
                        return bi, bj, Fraction(num, den)
    return None


def check_independent(values: List[SpanElement], what: str = "values") -> None:
    """Raise IndependenceViolation unless ``values`` are Q-linearly independent."""
    from .linalg import rank

    if any(v.is_zero() for v in values):
        raise IndependenceViolation(f"{what}: zero value in an independence family")
    bases = sorted({b for v in values for b in v.bases()}, key=BaseReal.sort_key)
    rows = [[v.coeff(b) for v in values] for b in bases]
    if rank(rows) < len(values):
        raise IndependenceViolation(f"{what}: {', '.join(map(str, values))} are Q-linearly dependent")
    hit = find_small_relation(bases, max_height=100, bits=128)
    if hit is not None:
        raise IndependenceViolation(f"numeric relation {hit[0]} = {hit[2]} * {hit[1]}")
