"""Finite fields F_{p^k} for odd p, with elements coded as integers.

An element sum c_i * x^i (0 <= c_i < p) is coded as the integer
sum c_i * p^i, so codes run over range(p**k).  The extension is defined
by a fixed monic irreducible modulus; by default the lexicographically
smallest one (coefficient tuple compared constant-term first), which
makes every construction in the package deterministic.

Full add/mul tables are materialised lazily for small fields; they feed
the numpy/numba kernels in _kernels.py.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, Unsupported

TABLE_MAX_ORDER = 4096  # full q*q tables only below this


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mulmod(a: tuple, b: tuple, modulus: tuple, p: int) -> tuple:
    # dense schoolbook product of coefficient tuples, reduced mod the modulus
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce: modulus is monic of degree k
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(k):
                prod[i - k + j] = (prod[i - k + j] - c * modulus[j]) % p
    out = prod[:k] if len(prod) >= k else prod + [0] * (k - len(prod))
    return tuple(out[:k])


@dataclass(frozen=True)
class FiniteField:
    """Descriptor of F_{p^k}: odd prime p, degree k, monic irreducible modulus.

    The modulus is a coefficient tuple (constant term first, leading 1).
    """

    p: int
    k: int = 1
    modulus: tuple = None  # type: ignore[assignment]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.p == 2:
            raise Unsupported("characteristic 2 is out of scope")
        if not is_prime(self.p):
            raise InvalidInput(f"{self.p} is not prime")
        if self.k < 1:
            raise InvalidInput("extension degree must be >= 1")
        if self.modulus is None:
            object.__setattr__(self, "modulus", default_modulus(self.p, self.k))
        mod = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.k + 1 or mod[-1] != 1:
            raise InvalidInput("modulus must be monic of degree k")
        if self.k > 1 and not _is_irreducible_prime_field(mod, self.p):
            raise InvalidInput("modulus is reducible")

    # -- basic structure ------------------------------------------------
    @property
    def order(self) -> int:
        return self.p ** self.k

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def elements(self):
        return range(self.order)

    def coeffs(self, a: int) -> tuple:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def encode(self, coeffs) -> int:
        a = 0
        for c in reversed(list(coeffs)):
            a = a * self.p + (int(c) % self.p)
        return a

    # -- arithmetic on codes --------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        ca, cb = self.coeffs(a), self.coeffs(b)
        return self.encode((x + y) % self.p for x, y in zip(ca, cb))

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self.encode((-x) % self.p for x in self.coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        mt = self._cache.get("mul")
        if mt is not None:
            return int(mt[a, b])
        return self.encode(_poly_mulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        r, base = 1, a
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.order - 2)

    def frobenius(self, a: int) -> int:
        """x -> x^p, the arithmetic Frobenius of F_{p^k} over F_p."""
        return self.pow(a, self.p)

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        return self.pow(a, (self.order - 1) // 2) == 1

    # -- tables for the vectorised kernels -------------------------------
    def tables(self):
        """(add, mul) full q*q int16 tables; only for small fields."""
        q = self.order
        if q > TABLE_MAX_ORDER:
            raise ResourceWarning(f"field of order {q} too large for full tables")
        cached = self._cache.get("tables")
        if cached is not None:
            return cached
        if self.k == 1:
            idx = np.arange(q, dtype=np.int64)
            add = ((idx[:, None] + idx[None, :]) % self.p).astype(np.int16)
            mul = ((idx[:, None] * idx[None, :]) % self.p).astype(np.int16)
        else:
            add = np.zeros((q, q), dtype=np.int16)
            mul = np.zeros((q, q), dtype=np.int16)
            for a in range(q):
                for b in range(a, q):
                    s = self.add(a, b)
                    add[a, b] = s
                    add[b, a] = s
                    m = self.encode(
                        _poly_mulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p)
                    )
                    mul[a, b] = m
                    mul[b, a] = m
        self._cache["tables"] = (add, mul)
        self._cache["mul"] = mul
        return add, mul

    def neg_table(self):
        q = self.order
        cached = self._cache.get("negt")
        if cached is None:
            cached = np.array([self.neg(a) for a in range(q)], dtype=np.int16)
            self._cache["negt"] = cached
        return cached

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}


def _is_irreducible_prime_field(coeffs: tuple, p: int) -> bool:
    """Exhaustive divisor search; adequate for the small moduli used here."""
    d = len(coeffs) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    # no roots
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        if acc == 0:
            return False
    if d <= 3:
        return True
    # trial division by monic polys of degree 2..d//2 (d <= 6 in practice)
    for e in range(2, d // 2 + 1):
        for code in range(p ** e):
            div = []
            c = code
            for _ in range(e):
                c, r = divmod(c, p)
                div.append(r)
            div.append(1)
            if _poly_divides(div, list(coeffs), p):
                return False
    return True


def _poly_divides(div, target, p):
    rem = list(target)
    dd = len(div) - 1
    inv_lead = pow(div[-1], p - 2, p)
    while len(rem) - 1 >= dd:
        if rem[-1] == 0:
            rem.pop()
            continue
        c = rem[-1] * inv_lead % p
        off = len(rem) - 1 - dd
        for i in range(dd + 1):
            rem[off + i] = (rem[off + i] - c * div[i]) % p
        rem.pop()
    return all(c == 0 for c in rem)


@functools.lru_cache(maxsize=None)
def default_modulus(p: int, k: int) -> tuple:
    """Lexicographically smallest monic irreducible of degree k over F_p."""
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        coeffs = []
        c = code
        for _ in range(k):
            c, r = divmod(c, p)
            coeffs.append(r)
        coeffs.append(1)
        if _is_irreducible_prime_field(tuple(coeffs), p):
            return tuple(coeffs)
    raise AssertionError("no irreducible modulus found")


@functools.lru_cache(maxsize=None)
def GF(p: int, k: int = 1) -> FiniteField:
    """Shared FiniteField instances (so table caches are reused)."""
    return FiniteField(p, k)


def smallest_nonresidue(p: int) -> int:
    """Smallest positive quadratic nonresidue mod p (the fixed unit scale)."""
    for u in range(2, p):
        if pow(u, (p - 1) // 2, p) == p - 1:
            return u
    raise InvalidInput(f"no nonresidue mod {p}; is p an odd prime?")
