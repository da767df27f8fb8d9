"""Point counts for the stratified isotropic-subspace loci, the model
surfaces, the local-model special fiber, and the even-orthogonal
comparison.

The ambient for the odd case is the split (2m+1)-dimensional quadratic
space over F_p (H^m plus a norm-form line), base-changed to F_{p^k};
the coordinatewise p-power map sigma is an isometry because the Gram is
defined over F_p.  A maximal isotropic L lies in the locus S when
rank(L ∩ sigma L) >= m - 1; its stratum index is the first r with
L + sigma L + ... + sigma^r L stable.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernels, fqlin, quadspace
from .errors import InvalidInput, ResourceLimit
from .gf import GF, FiniteField, smallest_nonresidue

COUNT_BUDGET = 81


@dataclass(frozen=True)
class FrobSpace:
    """Quadratic F_p-space with its coordinatewise Frobenius on
    F_{p^k}-points; optionally a marked anisotropic vector (even model)."""

    base: quadspace.BilinearSpace  # over F_p
    marked: tuple | None = None  # anisotropic vector for the even model

    def __post_init__(self):
        if self.marked is not None:
            if self.base.quadratic(self.marked) == 0:
                raise InvalidInput("marked vector must be anisotropic")

    def over(self, k: int) -> quadspace.BilinearSpace:
        F = GF(self.base.field.p, k)
        return quadspace.BilinearSpace(F, self.base.gram, kind=self.base.kind)


def odd_split_space(p: int, m: int) -> FrobSpace:
    return FrobSpace(quadspace.split_odd_space(GF(p), m))


def nonsplit_even_space(p: int) -> FrobSpace:
    """4-dimensional nonsplit quadratic space H ⊥ (anisotropic plane),
    with the marked vector spanning the first anisotropic direction."""
    u = smallest_nonresidue(p)
    gram = (
        (0, 1, 0, 0),
        (1, 0, 0, 0),
        (0, 0, 1, 0),
        (0, 0, 0, (-u) % p),
    )
    # <1, -u> is anisotropic: x^2 = u has no solution
    return FrobSpace(
        quadspace.BilinearSpace(GF(p), gram), marked=(0, 0, 1, 0)
    )


@dataclass(frozen=True)
class StratumReport:
    m: int
    p: int
    k: int
    strata: tuple  # ((index, count), ...)
    total: int
    excluded: int  # isotropic subspaces failing the rank condition

    def to_json(self):
        return {
            "m": self.m,
            "p": self.p,
            "k": self.k,
            "strata": {str(i): c for i, c in self.strata},
            "total": self.total,
            "excluded": self.excluded,
        }


def _chain_stratum(F: FiniteField, rows):
    """min r with L^(r) = L^(r+1), L^(r) = L + sigma L + ... + sigma^r L."""
    current = rows
    r = 0
    step = rows
    while True:
        step = fqlin.frobenius_rows(F, step)
        bigger = fqlin.sum_rowspaces(F, current, step)
        if len(bigger) == len(current):
            return r
        current = bigger
        r += 1


def count_S(m: int, p: int, k: int) -> StratumReport:
    """Stratified count of maximal isotropic subspaces L over F_{p^k}
    of the split (2m+1)-space with rank(L ∩ sigma L) >= m - 1."""
    if m not in (0, 1, 2):
        raise InvalidInput("m in {0, 1, 2} expected")
    if p ** k > COUNT_BUDGET:
        raise ResourceLimit(f"field order {p**k} above budget {COUNT_BUDGET}")
    if m == 0:
        return StratumReport(0, p, k, ((0, 1),), 1, 0)
    F = GF(p, k)
    V = quadspace.BilinearSpace(F, quadspace.split_odd_space(GF(p), m).gram)
    counts = {}
    excluded = 0
    for L in quadspace.enumerate_isotropic_subspaces(V, m, max_field=COUNT_BUDGET):
        rows = L.basis
        sig = fqlin.frobenius_rows(F, rows)
        inter_dim = len(rows) + len(sig) - len(fqlin.sum_rowspaces(F, rows, sig))
        if inter_dim < m - 1:
            excluded += 1
            continue
        r = _chain_stratum(F, rows)
        counts[r] = counts.get(r, 0) + 1
    strata = tuple(sorted(counts.items()))
    total = sum(counts.values())
    return StratumReport(m, p, k, strata, total, excluded)


# ---------------------------------------------------------------------------
# hypersurface counts
# ---------------------------------------------------------------------------

def count_hypersurface(monomials, p: int, k: int, nvars: int) -> int:
    """Projective zeros over F_{p^k} of sum c * prod x_i^{e_i}; monomials
    is a list of (coefficient, exponent tuple).  The zero polynomial
    counts all of P^{nvars-1}."""
    if nvars > 5:
        raise InvalidInput("at most 5 variables")
    q = p ** k
    if q > COUNT_BUDGET:
        raise ResourceLimit(f"field order {q} above budget {COUNT_BUDGET}")
    F = GF(p, k)
    monomials = [(c % p, tuple(e)) for c, e in monomials if c % p != 0]
    if not monomials:
        return _kernels.projective_size(q, nvars)
    coefs = [c for c, _ in monomials]
    exps = [e for _, e in monomials]
    return _kernels.hypersurface_count(F, exps, coefs, nvars)


def fermat_count(p: int, k: int) -> int:
    """Points of x0^{p+1} + x1^{p+1} + x2^{p+1} + x3^{p+1} = 0 in P^3."""
    e = p + 1
    mono = [(1, tuple(e if i == j else 0 for i in range(4))) for j in range(4)]
    return count_hypersurface(mono, p, k, 4)


def klingen_count(p: int, k: int) -> int:
    """Points of x0 x3^p - x0^p x3 + x1 x2^p - x1^p x2 = 0 in P^3."""
    mono = [
        (1, (1, 0, 0, p)),
        (-1, (p, 0, 0, 1)),
        (1, (0, 1, p, 0)),
        (-1, (0, p, 1, 0)),
    ]
    return count_hypersurface(mono, p, k, 4)


def local_model_singular(p: int, k: int):
    """Points of the special fiber x1 x4 + x2 x3 = 0 in P^4 where all
    partial derivatives vanish, by enumeration."""
    q = p ** k
    if q > COUNT_BUDGET:
        raise ResourceLimit(f"field order {q} above budget {COUNT_BUDGET}")
    F = GF(p, k)
    out = []
    n = 5
    # scan normalized projective points
    def points():
        for lead in range(n):
            tail = n - 1 - lead
            for it in range(q ** tail):
                x = [0] * n
                x[lead] = 1
                t = it
                for j in range(n - 1, lead, -1):
                    x[j] = t % q
                    t //= q
                yield tuple(x)

    for x in points():
        x1, x2, x3, x4, x5 = x
        val = F.add(F.mul(x1, x4), F.mul(x2, x3))
        if val != 0:
            continue
        # partials: (x4, x3, x2, x1, 0)
        if x4 == 0 and x3 == 0 and x2 == 0 and x1 == 0:
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# even-orthogonal comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EvenModelReport:
    p: int
    per_component: tuple  # (count+, count-)
    images: tuple  # sorted tuples of image line keys per component
    injective: tuple
    rank_condition_all: bool
    target_total: int

    def to_json(self):
        return {
            "p": self.p,
            "per_component": list(self.per_component),
            "injective": list(self.injective),
            "rank_condition_all": self.rank_condition_all,
            "target_total": self.target_total,
        }


def even_model_check(p: int, m: int = 1) -> EvenModelReport:
    """Compare the nonsplit even model with the odd count for m = 1.

    Over F_{p^2}: enumerate isotropic planes L of the 4-dimensional
    nonsplit space, split them into the two families by intersection
    parity with a reference plane, check rank(L ∩ sigma L) = 1, apply
    q(L) = L ∩ reflected(L) and compare image counts with
    count_S(1, p, 2).
    """
    if m != 1:
        raise InvalidInput("the comparison is implemented for m = 1")
    fs = nonsplit_even_space(p)
    F2 = GF(p, 2)
    V = quadspace.BilinearSpace(F2, fs.base.gram)
    planes = quadspace.enumerate_isotropic_subspaces(V, 2)
    if not planes:
        raise InvalidInput("space must split over the quadratic extension")
    ref = planes[0].basis

    def same_family(L):
        inter = fqlin.intersect_rowspaces(F2, L.basis, ref)
        return (len(inter) - 2) % 2 == 0

    # reflection in the marked vector, base-changed
    w = fs.marked
    Qw = V.quadratic(w)
    inv_qw = F2.inv(Qw)
    two = F2.encode((2 % p,))
    n = V.dim
    refl = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        c = F2.mul(F2.mul(two, V.bilinear(e, w)), inv_qw)
        refl.append(tuple(F2.sub(x, F2.mul(c, y)) for x, y in zip(e, w)))
    refl = tuple(refl)

    # the fixed hyperplane of the reflection
    wperp = V.perp((w,))

    counts = [0, 0]
    images = [set(), set()]
    rank_ok = True
    for L in planes:
        rows = L.basis
        sig = fqlin.frobenius_rows(F2, rows)
        inter = len(rows) + len(sig) - len(fqlin.sum_rowspaces(F2, rows, sig))
        if inter != m:
            rank_ok = False
            continue
        reflected = fqlin.row_space_key(F2, fqlin.matmul(F2, rows, refl))
        q_img = fqlin.intersect_rowspaces(F2, rows, reflected)
        assert len(q_img) == m, "q(L) must be a line"
        # the image lies in the fixed hyperplane and is isotropic
        assert fqlin.intersect_rowspaces(F2, q_img, wperp) == q_img
        assert V.quadratic(q_img[0]) == 0
        comp = 0 if same_family(L) else 1
        counts[comp] += 1
        images[comp].add(q_img)
    inj = tuple(len(images[i]) == counts[i] for i in (0, 1))
    target = count_S(1, p, 2).total
    return EvenModelReport(
        p,
        tuple(counts),
        tuple(tuple(sorted(s)) for s in images),
        inj,
        rank_ok,
        target,
    )
