"""Exact arithmetic in the profinite integers.

An element of Z^ = prod_p Z_p is stored as a finite map ``prime -> rational``
plus a rational ``default`` that gives the coordinate at every other prime.
Rationals with denominator prime to p are p-adic integers, so this class is
closed under ring operations and exact division, and equality is structural
after normalization.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Tuple

from .errors import InvalidComponent, NotDivisible


def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise TypeError(f"not a rational: {text!r}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> List[int]:
    return sorted(factorize(abs(n))) if n not in (0, 1, -1) else []


def valuation(q: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if q == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def crt(residues: Iterable[Tuple[int, int]]) -> Tuple[int, int]:
    """Combine ``(r_i, m_i)`` with pairwise coprime moduli into ``(r, prod m_i)``."""
    r, m = 0, 1
    for ri, mi in residues:
        # r + m*t == ri (mod mi)
        t = ((ri - r) * pow(m, -1, mi)) % mi if mi > 1 else 0
        r, m = r + m * t, m * mi
        r %= m
    return r, m


def _rational_mod(q: Fraction, modulus: int) -> int:
    return (q.numerator * pow(q.denominator, -1, modulus)) % modulus if modulus > 1 else 0


@dataclass(frozen=True)
class ProfiniteElement:
    """Element of Z^ with finitely many exceptional prime coordinates.

    ``support`` is a sorted tuple of ``(p, coordinate)`` pairs. Construct
    through :func:`from_integer`, :func:`from_prime_component` or
    :meth:`from_parts`, which normalize.
    """

    support: Tuple[Tuple[int, Fraction], ...]
    default: Fraction

    @classmethod
    def from_parts(cls, support: Mapping[int, Fraction], default) -> "ProfiniteElement":
        default = parse_rational(default)
        sup = {int(p): parse_rational(q) for p, q in support.items()}
        for p, q in sup.items():
            if not is_prime(p):
                raise InvalidComponent(f"{p} is not prime")
            if q.denominator % p == 0:
                raise InvalidComponent(f"coordinate {q} is not a {p}-adic integer")
        for p in prime_divisors(default.denominator):
            if p not in sup:
                raise InvalidComponent(
                    f"default {default} is not a {p}-adic integer and prime {p} has no coordinate")
        return cls._normalized(sup, default)

    @classmethod
    def _normalized(cls, sup: Dict[int, Fraction], default: Fraction) -> "ProfiniteElement":
        dden = default.denominator
        kept = tuple(sorted((p, q) for p, q in sup.items() if not (q == default and dden % p != 0)))
        return cls(kept, default)

    def coordinate(self, p: int) -> Fraction:
        for prime, q in self.support:
            if prime == p:
                return q
        return self.default

    def primes(self) -> List[int]:
        return [p for p, _ in self.support]

    # ring structure

    def _combine(self, other: "ProfiniteElement", op) -> "ProfiniteElement":
        primes = set(self.primes()) | set(other.primes())
        sup = {p: op(self.coordinate(p), other.coordinate(p)) for p in primes}
        return ProfiniteElement._normalized(sup, op(self.default, other.default))

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return ProfiniteElement(tuple((p, -q) for p, q in self.support), -self.default)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def is_integer(self) -> bool:
        return not self.support and self.default.denominator == 1

    def __str__(self):
        if not self.support:
            return format_rational(self.default)
        parts = ", ".join(f"{p}: {format_rational(q)}" for p, q in self.support)
        return f"<{parts}; else {format_rational(self.default)}>"

    def to_json(self) -> dict:
        return {
            "support": {str(p): format_rational(q) for p, q in self.support},
            "default": format_rational(self.default),
        }

    @classmethod
    def from_json(cls, data) -> "ProfiniteElement":
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, (int, str)):
            return from_integer(int(data))
        return cls.from_parts({int(k): v for k, v in data.get("support", {}).items()},
                              data.get("default", "0"))


def _coerce(x):
    if isinstance(x, ProfiniteElement):
        return x
    if isinstance(x, int):
        return from_integer(x)
    return NotImplemented


def from_integer(k: int) -> ProfiniteElement:
    return ProfiniteElement((), Fraction(int(k)))


def from_prime_component(p: int, q, default=0) -> ProfiniteElement:
    """Element equal to ``q`` at the prime ``p`` and ``default`` elsewhere."""
    q, default = parse_rational(q), parse_rational(default)
    if not is_prime(p):
        raise InvalidComponent(f"{p} is not prime")
    if q.denominator % p == 0:
        raise InvalidComponent(f"{q} is not a {p}-adic integer")
    bad = set(prime_divisors(default.denominator)) - {p}
    if bad:
        raise InvalidComponent(f"default {default} has denominator primes {sorted(bad)}")
    return ProfiniteElement.from_parts({p: q}, default)


def random_element(rng: random.Random, primes=(2, 3, 5, 7, 11, 13), height: int = 30,
                   max_support: int = 3) -> ProfiniteElement:
    """A seeded random element with a few special primes and a rational default."""
    support = rng.sample(list(primes), rng.randint(0, max_support))
    coords = {}
    for p in support:
        den = rng.choice([d for d in range(1, 13) if d % p])
        coords[p] = Fraction(rng.randint(-height, height), den)
    den = 1
    for p in support:
        if rng.random() < 0.5:
            den *= p ** rng.randint(1, 2)
    return ProfiniteElement.from_parts(coords, Fraction(rng.randint(-height, height), den))


def add(x, y):
    return x + y


def neg(x):
    return -x


def mul(x, y):
    return x * y


def residue(x: ProfiniteElement, n: int) -> int:
    """Image of ``x`` in Z/nZ, as the representative in ``[0, n)``."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    parts = []
    for p, k in factorize(n).items():
        pk = p ** k
        parts.append((_rational_mod(x.coordinate(p), pk), pk))
    return crt(parts)[0]


def is_divisible(x: ProfiniteElement, n: int) -> bool:
    return residue(x, n) == 0


def divide_exact(x: ProfiniteElement, n: int) -> ProfiniteElement:
    """The unique ``y`` with ``n*y == x``; raises NotDivisible otherwise."""
    if n < 1:
        raise ValueError("divisor must be >= 1")
    if residue(x, n) != 0:
        raise NotDivisible(f"{x} is not divisible by {n}")
    sup = {p: q / n for p, q in x.support}
    default = x.default / n
    # every p | n has v_p(x_p) >= v_p(n), so the new default is p-integral
    # wherever it is used; primes of its denominator already sit in the support
    for p in prime_divisors(default.denominator):
        if p not in sup:
            sup[p] = x.coordinate(p) / n
    return ProfiniteElement._normalized(sup, default)


def integer_relation_rank(elements: List[ProfiniteElement]) -> int:
    """Rank over Q of the family ``elements``, seen as coordinate vectors.

    Coordinates are taken at every prime in the union of supports plus the
    shared default coordinate; a Z-linear relation among the elements holds in
    Z^ exactly when it holds on all these coordinates.
    """
    from .linalg import rank

    primes = sorted({p for e in elements for p in e.primes()})
    rows = [[e.coordinate(p) for e in elements] for p in primes]
    rows.append([e.default for e in elements])
    return rank(rows)
