"""Exact Z_p-lattices in Q_p^n with canonical bases.

A lattice is stored as p^(-scale) * span_{Z_p}(rows of H) where H is an
integer matrix in p-adic Howell/Hermite form: upper triangular, diagonal
entries p^(a_i), entries above a pivot reduced modulo that pivot, and
min a_i = 0.  The pair (scale, H) is a unique representative, and H
alone is a unique representative of the homothety class, which is what
building vertices quotient by.

Everything is integer arithmetic (entries live mod p^K for a certified
K); rational inputs are allowed and normalized on entry.  Only the
valuation of p matters, so rows may be rescaled by p-free rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput

INF = 10 ** 9


def val_p(x, p: int) -> int:
    """p-adic valuation of an int or Fraction (INF for 0)."""
    if x == 0:
        return INF
    if isinstance(x, Fraction):
        return val_p(x.numerator, p) - val_p(x.denominator, p)
    if not isinstance(x, int):
        raise TypeError(f"exact int/Fraction expected, got {type(x).__name__}")
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _strip_p(x: int, p: int) -> int:
    while x % p == 0:
        x //= p
    return x


def red_mod_p(x, p: int) -> int:
    """Reduce a p-integral rational mod p."""
    f = Fraction(x)
    if f.denominator % p == 0:
        raise InvalidInput("not p-integral")
    return f.numerator * pow(f.denominator, -1, p) % p


def _howell_mod(rows, p: int, K: int, n: int):
    """Howell form of the submodule of (Z/p^K)^n generated by rows.

    Returns the sorted pivot rows (list of lists); None in place of a
    full set of n pivots means the module misses a coordinate direction
    mod p^K and the caller must retry with a larger K.
    """
    M = p ** K
    pool = [[x % M for x in r] for r in rows]
    result = []
    for col in range(n):
        # candidates: rows whose leading nonzero entry is at `col`
        best = None
        best_v = None
        for r in pool:
            if any(r[c] for c in range(col)) or r[col] == 0:
                continue
            v = val_p(r[col], p)
            if best is None or v < best_v:
                best, best_v = r, v
        if best is None:
            return None
        pool.remove(best)
        u = _strip_p(best[col], p) % M
        uinv = pow(u, -1, M)
        piv = [x * uinv % M for x in best]  # leading entry now p^best_v
        pv = p ** best_v
        for r in pool:
            if r[col]:
                f = r[col] // pv
                for j in range(col, n):
                    r[j] = (r[j] - f * piv[j]) % M
        # Howell closure: the annihilator multiple opens lower columns
        if best_v > 0:
            extra = [x * (M // pv) % M for x in piv]
            if any(extra):
                pool.append(extra)
        pool = [r for r in pool if any(r)]
        result.append((col, best_v, piv))
    if len(result) != n:
        return None
    # reduce entries above each pivot modulo that pivot
    rows_out = [r for (_, _, r) in result]
    for j in range(n):
        pj = p ** result[j][1]
        for i in range(j):
            f = rows_out[i][j] // pj
            if f:
                for t in range(j, n):
                    rows_out[i][t] = (rows_out[i][t] - f * rows_out[j][t]) % (p ** K)
    return rows_out


def canonical_basis(rows, p: int):
    """(shift, H): span_{Z_p}(rows) = p^shift * span(H) with H canonical.

    rows: iterable of rational/int coordinate rows (any number >= n of
    them); must have full rank n.
    """
    rows = [tuple(r) for r in rows]
    if not rows:
        raise InvalidInput("empty generating set")
    n = len(rows[0])
    if all(isinstance(x, int) for r in rows for x in r):
        m = min((val_p(x, p) for r in rows for x in r if x), default=0)
        q = p ** m
        int_rows = [[x // q for x in r] for r in rows if any(r)]
    else:
        rows = [tuple(Fraction(x) for x in r) for r in rows]
        m = min((val_p(x, p) for r in rows for x in r if x != 0), default=0)
        int_rows = []
        for r in rows:
            scaled = [x / Fraction(p) ** m for x in r]
            den = 1
            for x in scaled:
                den = den * x.denominator // _gcd(den, x.denominator)
            den = _strip_p(den, p)  # p-free part only; a Z_p unit
            int_row = []
            for x in scaled:
                y = x * den
                if y.denominator != 1:
                    raise InvalidInput("entry with p in denominator after scaling")
                int_row.append(y.numerator)
            if any(int_row):
                int_rows.append(int_row)
    K = 6
    while True:
        H = _howell_mod(int_rows, p, K, n)
        if H is not None and all(val_p(H[i][i], p) < K for i in range(n)):
            break
        K *= 2
        if K > 4096:
            raise InvalidInput("generating set is not full rank")
    # the smallest elementary divisor is the min valuation over ALL
    # entries (off-diagonal entries can sit above a larger pivot)
    a_min = min(val_p(x, p) for r in H for x in r if x)
    if a_min:
        q = p ** a_min
        H = [[x // q for x in r] for r in H]
    return m + a_min, tuple(tuple(r) for r in H)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def bareiss_det(A) -> int:
    """Exact determinant of an integer matrix (fraction-free Gauss)."""
    M = [list(map(int, r)) for r in A]
    n = len(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def int_adjugate(A):
    """Adjugate of an integer matrix: adj(A) = det(A) * A^{-1}."""
    n = len(A)
    if n == 1:
        return ((1,),)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [A[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            adj[j][i] = (-1) ** (i + j) * bareiss_det(minor)
    return tuple(tuple(r) for r in adj)


@dataclass(frozen=True)
class QpAmbient:
    """Quadratic or symplectic ambient space over Q_p with a fixed Gram.

    gram entries are Fractions; gram = p^(-denom_pow) * gram_int with
    gram_int integral (extracted once for the integer dual路).
    """

    p: int
    gram: tuple
    kind: str = "symmetric"

    def __post_init__(self):
        g = tuple(tuple(Fraction(x) for x in r) for r in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if self.kind == "symmetric":
            assert all(g[i][j] == g[j][i] for i in range(n) for j in range(n))
        else:
            assert all(g[i][j] == -g[j][i] for i in range(n) for j in range(n))
        s = max(0, -min(val_p(x, self.p) for r in g for x in r if x != 0))
        gi = tuple(tuple(x * self.p ** s for x in r) for r in g)
        if any(x.denominator != 1 for r in gi for x in r):
            raise InvalidInput("gram entries must have p-power denominators")
        gi = tuple(tuple(int(x) for x in r) for r in gi)
        object.__setattr__(self, "_denom_pow", s)
        object.__setattr__(self, "_gram_scaled", gi)

    @property
    def dim(self):
        return len(self.gram)

    def bilinear(self, u, v) -> Fraction:
        acc = Fraction(0)
        for i, ui in enumerate(u):
            if ui:
                row = self.gram[i]
                for j, vj in enumerate(v):
                    if vj and row[j]:
                        acc += Fraction(ui) * row[j] * vj
        return acc

    def quadratic(self, v) -> Fraction:
        return self.bilinear(v, v)


@dataclass(frozen=True)
class PLattice:
    """Full-rank Z_p-lattice p^(-scale) * span(rows of hnf)."""

    ambient: QpAmbient
    scale: int
    hnf: tuple

    @staticmethod
    def from_rows(ambient: QpAmbient, rows, extra_scale: int = 0) -> "PLattice":
        shift, H = canonical_basis(rows, ambient.p)
        return PLattice(ambient, extra_scale - shift, H)

    @staticmethod
    def standard(ambient: QpAmbient) -> "PLattice":
        n = ambient.dim
        return PLattice.from_rows(
            ambient, [[1 if j == i else 0 for j in range(n)] for i in range(n)]
        )

    # -- structure --------------------------------------------------------
    @property
    def p(self) -> int:
        return self.ambient.p

    def key(self):
        return (self.scale, self.hnf)

    def class_key(self):
        """Canonical key of the homothety class p^Z * L."""
        return self.hnf

    def basis_rows(self):
        s = Fraction(1, self.p ** self.scale) if self.scale >= 0 else Fraction(self.p ** -self.scale)
        return tuple(tuple(Fraction(x) * s for x in r) for r in self.hnf)

    def rescale(self, k: int) -> "PLattice":
        """p^k * L."""
        return PLattice(self.ambient, self.scale - k, self.hnf)

    def det_valuation(self) -> int:
        v = -self.ambient.dim * self.scale
        for i in range(self.ambient.dim):
            v += val_p(self.hnf[i][i], self.p)
        return v

    # -- lattice operations ------------------------------------------------
    def dual(self) -> "PLattice":
        """{v : B(v, L) integral}; involutive and containment-reversing."""
        amb = self.ambient
        p = amb.p
        Bi = tuple(tuple(int(x) for x in r) for r in amb._gram_scaled)
        Ht = tuple(zip(*self.hnf))
        A = tuple(
            tuple(sum(Bi[i][t] * Ht[t][j] for t in range(amb.dim)) for j in range(amb.dim))
            for i in range(amb.dim)
        )
        d = bareiss_det(A)
        if d == 0:
            raise InvalidInput("degenerate ambient form")
        a = val_p(d, p)
        adj = int_adjugate(A)
        # L^dual = p^{-(a - scale - denom_pow)} * span(adj rows)
        return PLattice.from_rows(
            amb, adj, extra_scale=a - self.scale - amb._denom_pow
        )

    def add(self, other: "PLattice") -> "PLattice":
        assert self.ambient is other.ambient or self.ambient == other.ambient
        return PLattice.from_rows(
            self.ambient, list(self.basis_rows()) + list(other.basis_rows())
        )

    def intersect(self, other: "PLattice") -> "PLattice":
        return self.dual().add(other.dual()).dual()

    def member(self, vec) -> bool:
        """Is the rational vector in the lattice?"""
        p = self.p
        y = [Fraction(x) * Fraction(p) ** self.scale for x in vec]
        n = self.ambient.dim
        # hnf is upper triangular with pivot (i, i); solve y = c . hnf
        # in increasing column order
        c = [Fraction(0)] * n
        for i in range(n):
            rem = y[i] - sum(c[j] * self.hnf[j][i] for j in range(0, i))
            c[i] = rem / self.hnf[i][i]
        return all(val_p(x, p) >= 0 for x in c)

    def contains(self, other: "PLattice") -> bool:
        return all(self.member(r) for r in other.basis_rows())

    def quotient_length(self, sub: "PLattice") -> int:
        """length_{Z_p}(self / sub) for sub contained in self."""
        v = sub.det_valuation() - self.det_valuation()
        assert v >= 0
        return v

    def to_json(self):
        return {"scale": self.scale, "hnf": [list(r) for r in self.hnf]}


def adapted_quotient(big: PLattice, small: PLattice):
    """Smith-adapted data for big/small (small ⊆ big).

    Returns a list of (a_i, basis_row_i): basis rows of `big` such that
    small = span of p^{a_i} times them; big/small = ⊕ Z_p / p^{a_i}.
    """
    p = big.p
    n = big.ambient.dim
    R = [list(r) for r in big.basis_rows()]  # Fractions
    # coords of small's basis in terms of R
    C = _solve_coords(small.basis_rows(), R, p)
    for row in C:
        assert all(val_p(x, p) >= 0 for x in row), "small not contained in big"
    # Smith normal form over Z_p; column ops update R
    order = []
    done_rows = set()
    done_cols = set()
    for _ in range(n):
        best = None
        for i in range(n):
            if i in done_rows:
                continue
            for j in range(n):
                if j in done_cols:
                    continue
                v = val_p(C[i][j], p)
                if best is None or v < best[0]:
                    best = (v, i, j)
        v, bi, bj = best
        assert v < INF, "small does not have full rank"
        # clear column bj with row ops
        piv = C[bi][bj]
        for i in range(n):
            if i != bi and i not in done_rows and C[i][bj] != 0:
                f = C[i][bj] / piv
                C[i] = [x - f * y for x, y in zip(C[i], C[bi])]
        # clear row bi with column ops; R rows pick up the complement
        for j in range(n):
            if j != bj and j not in done_cols and C[bi][j] != 0:
                f = C[bi][j] / piv  # in Z_p by minimality
                for i in range(n):
                    C[i][j] -= f * C[i][bj]
                # basis change: row bj of R absorbs f * row j
                R[bj] = [x + f * y for x, y in zip(R[bj], R[j])]
        done_rows.add(bi)
        done_cols.add(bj)
        order.append((v, bj))
    return [(v, tuple(R[j])) for v, j in sorted(order, key=lambda t: t[1])]


def _solve_coords(vecs, basis_rows, p):
    """Coordinates of each vec in terms of basis_rows (exact Fractions)."""
    n = len(basis_rows)
    # invert the basis matrix once
    A = [list(r) + [Fraction(1) if j == i else Fraction(0) for j in range(n)]
         for i, r in enumerate(basis_rows)]
    # Gauss-Jordan over Q
    for c in range(n):
        piv = None
        for r in range(c, n):
            if A[r][c] != 0:
                piv = r
                break
        assert piv is not None
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    binv = [row[n:] for row in A]  # inverse of basis matrix (rows x cols)
    out = []
    for v in vecs:
        coords = [sum(Fraction(v[t]) * binv[t][j] for t in range(n)) for j in range(n)]
        out.append(coords)
    return out
