"""Intersection calculus for translated graph cycles in the minuscule
case: polynomial validation, the closed-form fixed-point count and
multiplicity, and two independent brute-force oracles.

The input is a self-reciprocal monic polynomial P over F_p of even
degree 2m+2 with P(0) = 1 (the characteristic-and-minimal polynomial of
an orthogonal operator on the relevant quotient space).  Writing Q_g
for the unique strictly self-reciprocal irreducible factor of odd
multiplicity (when it exists) the closed form is

    fixed_count   = deg(Q_g) * #{monic R : P = R * Q_g * monic(R*)}
    c             = (m(Q_g) + 1) / 2      (always <= 2 here)
    multiplicity  = fixed_count * c

and fixed_count factors as deg(Q_g) * prod (1 + m(R)) over the
{R, monic(R*)} partner classes with distinct members.  The two oracles
recompute fixed points and local lengths on an explicit matrix model:
a companion matrix preserving a nondegenerate symmetric form of
nonsplit type over F_p (only the nonsplit class makes the p-power
Frobenius swap the two families of maximal isotropic subspaces, which
is what the fixed-point locus rank condition requires).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import fqlin, quadspace
from .errors import (
    InternalInvariantViolation,
    InvalidInput,
    RealizationFailure,
    Unsupported,
)
from .ffpoly import Factorization, MonicPoly, factor, is_self_reciprocal, one, reciprocal, sr_partition
from .gf import GF, FiniteField


@dataclass(frozen=True)
class GgpInput:
    p: int
    poly: MonicPoly  # over F_p, the prime field

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def m(self) -> int:
        return (self.degree - 2) // 2


def validate(p: int, coeffs) -> GgpInput:
    """Accept exactly the self-reciprocal monic polynomials of degree
    2, 4 or 6 with nonzero constant term.

    Self-reciprocal is the strict identity P* = P (which forces
    P(0) = 1); anti-palindromic polynomials with P(0) = -1 are the
    characteristic polynomials of improper isometries and are rejected.
    """
    F = GF(p)
    P = MonicPoly(F, tuple(int(c) % p for c in coeffs))
    if P.degree not in (2, 4, 6):
        raise InvalidInput(f"degree {P.degree} not in {{2, 4, 6}}")
    if P.constant() == 0:
        raise InvalidInput("constant term vanishes (operator not invertible)")
    if not is_self_reciprocal(P):
        raise InvalidInput("polynomial is not self-reciprocal")
    return GgpInput(p, P)


def find_Qg(inp: GgpInput):
    """(Q_g, multiplicity) for the unique self-reciprocal irreducible
    factor of odd multiplicity; None when there is no such factor or
    when more than one exists (both mean an empty intersection)."""
    fac = factor(inp.poly)
    part = sr_partition(fac)
    odd = [(f, m) for f, m in part.sr if m % 2 == 1]
    if len(odd) == 1:
        return odd[0]
    return None


def beta_count(inp: GgpInput, Q: MonicPoly) -> int:
    """#{monic R : P = R * Q * monic(R*)}, by direct search over
    exponent vectors on the irreducible factors of P."""
    P = inp.poly
    if not is_self_reciprocal(Q):
        raise InvalidInput("Q must be self-reciprocal")
    if not Q.divides(P):
        raise InvalidInput("Q must divide P")
    fac = factor(P)
    factors = [f for f, _ in fac.factors]
    mults = [m for _, m in fac.factors]
    count = 0
    for exps in product(*[range(m + 1) for m in mults]):
        R = one(P.field)
        for f, e in zip(factors, exps):
            if e:
                R = R.mul(f.pow(e))
        if R.constant() == 0:
            continue
        prod_poly = R.mul(Q).mul(reciprocal(R)) if R.degree > 0 else Q
        if prod_poly.coeffs == P.coeffs:
            count += 1
    return count


def closed_form(inp: GgpInput):
    """(fixed_count, c, multiplicity) from the factorization of P."""
    qg = find_Qg(inp)
    if qg is None:
        return 0, 0, 0
    Q, mq = qg
    fac = factor(inp.poly)
    part = sr_partition(fac)
    fixed = Q.degree
    for rep, partner, m in part.nsr_classes:
        if rep.coeffs != partner.coeffs:
            fixed *= 1 + m
        # a self-paired class (T - 1) has even multiplicity and
        # contributes exactly one divisor split, i.e. factor 1
    c = (mq + 1) // 2
    assert c <= 2, "local length exceeds 2"
    b = beta_count(inp, Q)
    assert fixed == Q.degree * b, "divisor search disagrees with the product formula"
    return fixed, c, fixed * c


# ---------------------------------------------------------------------------
# matrix realization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrthRealization:
    field: FiniteField  # prime field
    op: tuple  # companion matrix of P
    gram: tuple  # invariant nondegenerate symmetric matrix
    nonsplit: bool

    def __post_init__(self):
        F = self.field
        got = fqlin.matmul(
            F, fqlin.matmul(F, fqlin.transpose(self.op), self.gram), self.op
        )
        assert got == self.gram, "certificate failed: form not invariant"
        assert fqlin.det(F, self.gram) != 0


def companion(F: FiniteField, coeffs) -> tuple:
    n = len(coeffs) - 1
    rows = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i + 1][i] = 1
    for i in range(n):
        rows[i][n - 1] = F.neg(coeffs[i])
    return tuple(tuple(r) for r in rows)


def _invariant_symmetric_space(F: FiniteField, C):
    """Basis of {B symmetric : C^T B C = B} as flattened vectors."""
    n = len(C)
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {ij: k for k, ij in enumerate(idx)}
    rows = []
    Ct = fqlin.transpose(C)
    # linear map B -> C^T B C - B on symmetric coordinates
    for k, (a, b) in enumerate(idx):
        B = [[0] * n for _ in range(n)]
        B[a][b] = 1
        B[b][a] = 1
        img = fqlin.matmul(F, fqlin.matmul(F, Ct, fqlin.mat(B)), C)
        vec = []
        for (i, j) in idx:
            vec.append(F.sub(img[i][j], B[i][j]))
        rows.append(tuple(vec))
    ker = fqlin.kernel(F, fqlin.transpose(fqlin.mat(rows)))
    mats = []
    for v in ker:
        B = [[0] * n for _ in range(n)]
        for k, (i, j) in enumerate(idx):
            B[i][j] = v[k]
            B[j][i] = v[k]
        mats.append(tuple(tuple(r) for r in B))
    return mats


def _is_nonsplit(F: FiniteField, B) -> bool:
    """Nonsplit even-dimensional quadratic space: det not equal to
    (-1)^{n/2} times a square."""
    n = len(B)
    d = fqlin.det(F, B)
    if d == 0:
        raise InvalidInput("degenerate form")
    target = F.pow(F.neg(1), n // 2)
    return not F.is_square(F.mul(d, F.inv(target)))


def realize_orthogonal(inp: GgpInput, want_all: bool = False):
    """Companion matrix of P plus an invariant nondegenerate symmetric
    form of nonsplit type.  RealizationFailure if none exists (then no
    orthogonal operator over F_p has this cyclic type)."""
    F = GF(inp.p)
    C = companion(F, inp.poly.coeffs)
    basis = _invariant_symmetric_space(F, C)
    dim = len(basis)
    found = []
    if dim:
        if inp.p ** dim > 200_000:
            raise Unsupported("invariant-form space too large to scan")
        for coeffs in product(range(inp.p), repeat=dim):
            if all(c == 0 for c in coeffs):
                continue
            B = [[0] * len(C) for _ in range(len(C))]
            for c, mat_b in zip(coeffs, basis):
                if c:
                    for i in range(len(C)):
                        for j in range(len(C)):
                            B[i][j] = F.add(B[i][j], F.mul(c, mat_b[i][j]))
            Bt = tuple(tuple(r) for r in B)
            if fqlin.det(F, Bt) != 0 and _is_nonsplit(F, Bt):
                found.append(OrthRealization(F, C, Bt, True))
                if not want_all and len(found) >= 2:
                    break
    if not found:
        raise RealizationFailure(
            "no nondegenerate nonsplit invariant symmetric form", solution_dim=dim
        )
    return found if want_all else found[: 2]


# ---------------------------------------------------------------------------
# the two oracles
# ---------------------------------------------------------------------------

def _splitting_field(inp: GgpInput) -> FiniteField:
    fac = factor(inp.poly)
    D = 1
    for f, _ in fac.factors:
        d = f.degree
        D = D * d // _gcd(D, d)
    if D > 6:
        raise Unsupported("splitting degree above 6")
    F = GF(inp.p, D)
    from .gf import TABLE_MAX_ORDER

    if F.order <= TABLE_MAX_ORDER:
        F.tables()  # warm the multiplication cache once
    return F


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def oracle_dl_fixed_points(inp: GgpInput, real: OrthRealization):
    """Fixed points of the operator on the rank-condition locus: all
    op-invariant totally isotropic (m+1)-subspaces over the splitting
    field with rank(L ∩ sigma L) = m.  Returns (count, subspaces)."""
    FD = _splitting_field(inp)
    n = inp.degree
    m = inp.m
    # base-change op and gram to F_{p^D}: prime-field entries embed as
    # constants (codes are unchanged)
    op = real.op
    V = quadspace.BilinearSpace(FD, real.gram)
    pts = []
    for L in quadspace.invariant_subspaces(V, op, m + 1):
        if not L.is_totally_isotropic():
            continue
        rows = L.basis
        sig = fqlin.frobenius_rows(FD, rows)
        inter = len(rows) * 2 - len(fqlin.sum_rowspaces(FD, rows, sig))
        if inter == m:
            pts.append(L)
    return len(pts), pts


def oracle_multiplicity(inp: GgpInput, real: OrthRealization, points):
    """Sum of local lengths over the fixed points: for each L, the size
    of the Jordan block of op restricted to sigma L at the eigenvalue
    on sigma L / (L ∩ sigma L).  Requires p > c at every point."""
    FD = _splitting_field(inp)
    op = real.op
    total = 0
    for L in points:
        rows = L.basis
        sig = fqlin.frobenius_rows(FD, rows)
        inter = fqlin.intersect_rowspaces(FD, rows, sig)
        # eigenvalue on the 1-dimensional quotient sigmaL / inter
        w = next(r for r in sig if len(fqlin.rref(FD, inter + (r,))[0]) > len(inter))
        img = fqlin.matvec(FD, op, w)  # the row-vector action v -> v . op^T
        lam = None
        for t in range(FD.order):
            cand = tuple(FD.sub(x, FD.mul(t, y)) for x, y in zip(img, w))
            if len(fqlin.rref(FD, inter + (cand,))[0]) == len(inter):
                lam = t
                break
        assert lam is not None and lam != 0, "eigenvalue must be nonzero"
        # restrict op to the span of sig (op-invariant) and measure the
        # Jordan structure at lam
        coords = _restriction_matrix(FD, op, sig)
        mm = len(sig)
        lam_id = [[FD.neg(lam) if i == j else 0 for j in range(mm)] for i in range(mm)]
        A = fqlin.mataddsub(FD, coords, fqlin.mat(lam_id))
        # kernel dims of A^j give the block structure
        kdims = []
        Apow = fqlin.identity(FD, mm)
        for _ in range(mm):
            Apow = fqlin.matmul(FD, Apow, A)
            kdims.append(mm - fqlin.rank(FD, Apow))
        nblocks = kdims[0]
        assert nblocks == 1, "a unique Jordan block is expected at the eigenvalue"
        c = next(j + 1 for j in range(mm) if kdims[j] == (kdims[j + 1] if j + 1 < mm else kdims[-1]))
        if inp.p <= c:
            raise Unsupported("local model requires p > c")
        total += c
    return total


def _restriction_matrix(F: FiniteField, op, rows):
    """Matrix of the operator restricted to the row span, in the given
    row basis (rows must be invariant under v -> v . op^T)."""
    imgs = fqlin.matmul(F, rows, fqlin.transpose(op))
    sol = []
    # solve imgs = coords . rows
    Rt = fqlin.transpose(rows)
    for img in imgs:
        coef = fqlin.solve_right(F, Rt, img)
        assert coef is not None, "span is not invariant"
        sol.append(coef)
    return fqlin.mat(sol)


# ---------------------------------------------------------------------------
# reports and the catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GgpReport:
    p: int
    poly: MonicPoly
    q_g: MonicPoly | None
    fixed_count: int
    c_value: int
    multiplicity: int
    oracle_beta: int
    oracle_dl: int | None
    oracle_mult: int | None
    realization_note: str | None = None

    @property
    def agree(self) -> bool:
        ok = True
        if self.oracle_dl is not None:
            ok = ok and self.oracle_dl == self.fixed_count
        if self.oracle_mult is not None:
            ok = ok and self.oracle_mult == self.multiplicity
        return ok

    def to_json(self):
        return {
            "p": self.p,
            "P": self.poly.to_json(),
            "Qg": self.q_g.to_json() if self.q_g else None,
            "fixed": self.fixed_count,
            "c": self.c_value,
            "multiplicity": self.multiplicity,
            "oracles": {
                "beta": self.oracle_beta,
                "dl": self.oracle_dl,
                "mult": self.oracle_mult,
            },
            "agree": self.agree,
            "note": self.realization_note,
        }


def report(inp: GgpInput, run_oracles: bool = True) -> GgpReport:
    fixed, c, mult = closed_form(inp)
    qg = find_Qg(inp)
    q_poly = qg[0] if qg else None
    beta = beta_count(inp, q_poly) if q_poly is not None else 0
    dl = None
    om = None
    note = None
    if run_oracles:
        try:
            reals = realize_orthogonal(inp)
        except RealizationFailure as exc:
            reals = []
            note = f"realization failed (solution space dim {exc.solution_dim})"
        counts = []
        for real in reals:
            cnt, pts = oracle_dl_fixed_points(inp, real)
            counts.append(cnt)
            if dl is None:
                dl = cnt
                om = oracle_multiplicity(inp, real, pts)
        if len(counts) == 2 and counts[0] != counts[1]:
            raise InternalInvariantViolation(
                "two nonsplit realizations give different fixed counts"
            )
    rep = GgpReport(inp.p, inp.poly, q_poly, fixed, c, mult, beta, dl, om, note)
    if run_oracles and dl is not None and not rep.agree:
        raise InternalInvariantViolation(
            f"oracle disagreement for P = {inp.poly.to_json()}: "
            f"closed ({fixed}, {mult}) vs oracle ({dl}, {om})"
        )
    return rep


def enumerate_valid_inputs(p: int, degree: int):
    """All valid inputs of the given even degree over F_p: palindromic
    coefficient vectors with constant term 1."""
    if degree not in (2, 4, 6):
        raise InvalidInput("degree must be 2, 4 or 6")
    half = degree // 2
    out = []
    for mid in product(range(p), repeat=half):
        # coeffs: 1, a_1, ..., a_half, ..., a_1, 1  (palindrome)
        coeffs = (1,) + mid + tuple(reversed(mid[:-1])) + (1,)
        out.append(validate(p, coeffs))
    return out


def catalog(p: int, degrees=(2, 4, 6), run_oracles: bool = True):
    """Reports for every valid input of the given degrees, oracle-checked."""
    if p not in (3, 5):
        raise Unsupported("catalog computed for p in {3, 5}")
    out = []
    for d in degrees:
        for inp in enumerate_valid_inputs(p, d):
            out.append(report(inp, run_oracles=run_oracles))
    return out
