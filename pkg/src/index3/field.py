"""Finite fields GF(p^k) with integer element codes.

An element c0 + c1 x + ... + c_{k-1} x^{k-1} (coefficients in GF(p)) is
encoded as the integer sum(c_i * p**i).  Zero and one keep codes 0 and 1.
The code order is only a total order used for sorting; it carries no
algebraic meaning.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

MAX_ORDER = 2**16


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# Polynomials over GF(p) are coefficient lists, constant term first.

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mi) % p
        _trim(a)
    return a


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if poly[0] % p == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Least monic irreducible of degree k, ordering polynomials by sum c_i p^i.

    Coefficients are returned constant first; the order compares the highest
    non-leading coefficient first, so GF(8) gets x^3 + x + 1.
    """
    if k == 1:
        return (0, 1)
    # rev = (c_{k-1}, ..., c_0) runs through product() in increasing sum c_i p^i
    for rev in product(range(p), repeat=k):
        poly = list(reversed(rev)) + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")


class Field:
    """GF(p^k); build instances with :func:`make_field`."""

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self.primitive = self._find_primitive()
        exp = [1] * (self.q - 1)
        for i in range(1, self.q - 1):
            exp[i] = self._polymul(exp[i - 1], self.primitive)
        log = [-1] * self.q
        for i, x in enumerate(exp):
            log[x] = i
        self._exp = exp
        self._log = log

    def __repr__(self) -> str:
        return f"GF({self.q})" if self.k == 1 else f"GF({self.p}^{self.k})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __reduce__(self):
        return make_field, (self.p, self.k)

    # -- raw code arithmetic ------------------------------------------------

    def digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def from_digits(self, digits) -> int:
        x = 0
        for d in reversed(list(digits)):
            x = x * self.p + d % self.p
        return x

    def _polymul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.from_digits(_poly_mod(prod, list(self.modulus), self.p))

    def _polypow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._polymul(result, a)
            a = self._polymul(a, a)
            e >>= 1
        return result

    def _find_primitive(self) -> int:
        n = self.q - 1
        if n == 1:
            return 1
        factors = prime_factors(n)
        for g in range(2, self.q):
            if all(self._polypow(g, n // r) != 1 for r in factors):
                return g
        raise FieldError("no primitive element found")  # unreachable for a field

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self.from_digits(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        return self.from_digits(-x for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self._exp[-self._log[a] % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return self._exp[self._log[a] * e % (self.q - 1)]

    def exp(self, i: int) -> int:
        return self._exp[i % (self.q - 1)]

    def dlog(self, a: int) -> int:
        if a == 0:
            raise FieldError("discrete log of zero")
        return self._log[a]

    def frobenius(self, a: int, e: int = 1) -> int:
        return self.power(a, self.p ** (e % self.k))

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} out of range for {self!r}")
        return FieldElement(self, code)

    @property
    def elements(self) -> range:
        return range(self.q)

    @property
    def nonzero(self) -> range:
        return range(1, self.q)

    # -- lookup tables for vectorised geometry ------------------------------

    @cached_property
    def add_table(self) -> np.ndarray:
        if self.q > 1024:
            raise FieldError("add table only built for q <= 1024")
        return np.array([[self.add(a, b) for b in range(self.q)] for a in range(self.q)], dtype=np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        if self.q > 1024:
            raise FieldError("mul table only built for q <= 1024")
        return np.array([[self.mul(a, b) for b in range(self.q)] for a in range(self.q)], dtype=np.int64)

    @cached_property
    def inv_table(self) -> np.ndarray:
        return np.array([0] + [self.inv(a) for a in range(1, self.q)], dtype=np.int64)

    def to_json(self) -> dict:
        out = {"p": self.p, "k": self.k}
        if self.k > 1:
            out["modulus"] = list(self.modulus)
        return out


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> Field:
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if not isinstance(k, int) or k < 1:
        raise FieldError(f"degree must be a positive integer, got {k}")
    if p**k > MAX_ORDER:
        raise FieldError(f"q = {p}^{k} exceeds {MAX_ORDER}")
    return Field(p, k, least_irreducible(p, k))


def field_of_order(q: int) -> Field:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                break
            return make_field(p, k)
    raise FieldError(f"{q} is not a prime power")


@dataclass(frozen=True)
class FieldElement:
    field: Field
    code: int

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mixed fields {self.field!r} and {other.field!r}")
            return other.code
        if isinstance(other, int):
            return other % self.field.p if self.field.k == 1 else self.field.element(other).code
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(o, self.code))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.div(self.code, o))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.power(self.code, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.code))

    def dlog(self) -> int:
        return self.field.dlog(self.code)

    def __int__(self) -> int:
        return self.code

    def __repr__(self) -> str:
        return f"{self.code}@{self.field!r}"
