"""Monic polynomial algebra over F_{p^k}: factorization and the
reciprocal / self-reciprocal calculus.

Polynomials are immutable coefficient tuples of field codes, constant
term first, leading coefficient 1.  Ordering everywhere is
(degree, coefficient tuple low-to-high), which keeps factorizations and
enumerations reproducible.

A polynomial R with R(0) != 0 has reciprocal R*(T) = T^deg(R) R(1/T).
R is *self-reciprocal* when R* = R on the nose; this forces R(0) = 1.
The normalized partner monic(R*) is what pairs non-self-reciprocal
factors.  T - 1 is the one irreducible with monic(R*) = R but R* != R;
it forms a singleton partner class.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import InvalidInput, ResourceLimit
from .gf import GF, FiniteField

ENUM_BUDGET = 2_000_000  # cap on q**d when sieving irreducibles


@dataclass(frozen=True)
class MonicPoly:
    field: FiniteField
    coeffs: tuple  # field codes, constant first; coeffs[-1] == 1

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        if not c:
            raise InvalidInput("the zero polynomial is not monic")
        if c[-1] != 1:
            raise InvalidInput("leading coefficient must be 1")
        if any(not 0 <= x < self.field.order for x in c):
            raise InvalidInput("coefficient code out of range")
        object.__setattr__(self, "coeffs", c)

    # -- structure -------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def constant(self) -> int:
        return self.coeffs[0]

    def sort_key(self):
        return (self.degree, self.coeffs)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    # -- arithmetic ------------------------------------------------------
    def mul(self, other: "MonicPoly") -> "MonicPoly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        prod = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = F.add(prod[i + j], F.mul(ai, bj))
        return MonicPoly(F, tuple(prod))

    def divmod(self, other: "MonicPoly"):
        """Quotient and remainder; remainder returned as a raw coeff tuple."""
        F = self.field
        rem = list(self.coeffs)
        d = other.degree
        if d == 0:
            return self, ()
        quo = [0] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c:
                quo[i - d] = c
                for j in range(d + 1):
                    rem[i - d + j] = F.sub(rem[i - d + j], F.mul(c, other.coeffs[j]))
        while len(rem) > 1 and rem[-1] == 0:
            rem.pop()
        return quo, tuple(rem)

    def divides(self, other: "MonicPoly") -> bool:
        _, rem = other.divmod(self)
        return rem == (0,)

    def exact_div(self, other: "MonicPoly") -> "MonicPoly":
        quo, rem = self.divmod(other)
        if rem != (0,):
            raise InvalidInput("not an exact division")
        return MonicPoly(self.field, tuple(quo))

    def pow(self, e: int) -> "MonicPoly":
        out = one(self.field)
        for _ in range(e):
            out = out.mul(self)
        return out

    # -- serialization ---------------------------------------------------
    def to_json(self):
        return list(self.coeffs)

    def __str__(self):
        F = self.field
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{'' if c == 1 else c}T")
            else:
                terms.append(f"{'' if c == 1 else c}T^{i}")
        return " + ".join(terms) if terms else "0"


def one(field: FiniteField) -> MonicPoly:
    return MonicPoly(field, (1,))


def variable(field: FiniteField) -> MonicPoly:
    return MonicPoly(field, (0, 1))


def poly(field: FiniteField, coeffs) -> MonicPoly:
    return MonicPoly(field, tuple(int(c) % field.p if field.k == 1 else int(c) for c in coeffs))


def reciprocal(R: MonicPoly) -> MonicPoly:
    """monic(T^deg(R) * R(1/T)): reversed coefficients, renormalized.

    Requires R(0) != 0 (otherwise the reversal drops degree).
    """
    F = R.field
    if R.constant() == 0:
        raise InvalidInput("reciprocal needs a nonzero constant term")
    rev = tuple(reversed(R.coeffs))
    lead_inv = F.inv(rev[-1])
    return MonicPoly(F, tuple(F.mul(lead_inv, c) for c in rev))


def is_self_reciprocal(R: MonicPoly) -> bool:
    """R* = R exactly (palindromic coefficients and R(0) = 1)."""
    return R.constant() != 0 and R.coeffs == tuple(reversed(R.coeffs))


@dataclass(frozen=True)
class Factorization:
    input: MonicPoly
    factors: tuple  # ((MonicPoly irreducible, multiplicity >= 1), ...)

    def __post_init__(self):
        prod = one(self.input.field)
        seen = set()
        for f, m in self.factors:
            assert m >= 1
            assert f.coeffs not in seen, "repeated factor entry"
            seen.add(f.coeffs)
            prod = prod.mul(f.pow(m))
        assert prod.coeffs == self.input.coeffs, "factorization does not multiply back"

    def multiplicity(self, R: MonicPoly) -> int:
        for f, m in self.factors:
            if f.coeffs == R.coeffs:
                return m
        return 0

    def to_json(self):
        return {
            "input": self.input.to_json(),
            "factors": [[f.to_json(), m] for f, m in self.factors],
        }


@functools.lru_cache(maxsize=None)
def _irreducibles_cached(p: int, k: int, d: int) -> tuple:
    field = GF(p, k)
    q = field.order
    if q ** d > ENUM_BUDGET:
        raise ResourceLimit(f"irreducible sieve over q={q}, d={d} exceeds budget")
    smaller = []
    for e in range(1, d // 2 + 1):
        smaller.extend(_irreducibles_cached(p, k, e))
    out = []
    for code in range(q ** d):
        coeffs = []
        c = code
        for _ in range(d):
            c, r = divmod(c, q)
            coeffs.append(r)
        coeffs.append(1)
        cand = MonicPoly(field, tuple(coeffs))
        if d > 1 and any(cand(x) == 0 for x in range(q)):
            continue
        if any(s.divides(cand) for s in smaller if s.degree > 1):
            continue
        out.append(cand)
    return tuple(sorted(out, key=MonicPoly.sort_key))


def enumerate_irreducibles(field: FiniteField, d: int) -> list:
    """All monic irreducibles of degree exactly d, sorted.

    The count is cross-checked against the necklace value
    (1/d) * sum_{e | d} mu(e) q^{d/e}.
    """
    if not 1 <= d <= 6:
        raise InvalidInput("degree must be in 1..6")
    out = list(_irreducibles_cached(field.p, field.k, d))
    assert len(out) == _necklace_count(field.order, d)
    return out


def _necklace_count(q: int, d: int) -> int:
    def mobius(n):
        res, i = 1, 2
        while i * i <= n:
            if n % i == 0:
                n //= i
                if n % i == 0:
                    return 0
                res = -res
            i += 1
        if n > 1:
            res = -res
        return res

    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += mobius(e) * q ** (d // e)
    assert total % d == 0
    return total // d


def factor(P: MonicPoly) -> Factorization:
    """Complete factorization by trial division against enumerated
    irreducibles of degree <= deg/2, then roots; deterministic order.
    """
    if P.degree < 1:
        raise InvalidInput("factor needs degree >= 1")
    field = P.field
    rem = P
    found = {}

    def record(f):
        found[f.coeffs] = found.get(f.coeffs, 0) + 1

    # roots first (cheap for any field size)
    changed = True
    while changed and rem.degree >= 1:
        changed = False
        for x in range(field.order):
            if rem.degree >= 1 and rem(x) == 0:
                lin = MonicPoly(field, (field.neg(x), 1))
                while lin.divides(rem):
                    record(lin)
                    rem = rem.exact_div(lin)
                changed = True
    # remaining part has no roots; trial-divide by higher-degree irreducibles
    d = 2
    while rem.degree > 1:
        if d > rem.degree // 2:
            record(rem)  # irreducible remainder
            rem = one(field)
            break
        for cand in enumerate_irreducibles(field, d):
            while cand.divides(rem):
                record(cand)
                rem = rem.exact_div(cand)
        d += 1
    factors = sorted(
        ((MonicPoly(field, c), m) for c, m in found.items()),
        key=lambda fm: fm[0].sort_key(),
    )
    return Factorization(P, tuple(factors))


@dataclass(frozen=True)
class SRPartition:
    """Irreducible factors of a self-reciprocal polynomial split into the
    self-reciprocal ones and partner classes {R, monic(R*)}.

    nsr_classes entries are (representative, partner, multiplicity) with
    the representative the lexicographically smaller of the two.  The
    partner equals the representative exactly for R = T - 1, whose
    reciprocal is its own negation.
    """

    sr: tuple  # ((MonicPoly, mult), ...)
    nsr_classes: tuple  # ((rep, partner, mult), ...)

    def to_json(self):
        return {
            "sr": [[f.to_json(), m] for f, m in self.sr],
            "nsr_classes": [
                [r.to_json(), s.to_json(), m] for r, s, m in self.nsr_classes
            ],
        }


def sr_partition(F: Factorization) -> SRPartition:
    P = F.input
    if P.constant() == 0 or not is_self_reciprocal(P):
        raise InvalidInput("input polynomial is not self-reciprocal")
    sr = []
    nsr = []
    seen = set()
    for f, m in F.factors:
        if is_self_reciprocal(f):
            sr.append((f, m))
            continue
        if f.coeffs in seen:
            continue
        partner = reciprocal(f)
        assert F.multiplicity(partner) == m, "partner multiplicities differ"
        seen.add(f.coeffs)
        seen.add(partner.coeffs)
        rep, other = sorted((f, partner), key=MonicPoly.sort_key)
        nsr.append((rep, other, m))
    nsr.sort(key=lambda t: t[0].sort_key())
    return SRPartition(tuple(sr), tuple(nsr))
