"""Bilinear spaces over finite fields: Witt decomposition, isotropic
subspace counting/enumeration, reflection-orbit checks and invariant
subspaces of cyclic operators.

Subspaces are always carried in reduced row echelon form, which is the
canonical representative used for set semantics throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernels, fqlin
from .errors import InvalidInput, InvalidKind, ResourceLimit, UnsupportedInput
from .ffpoly import MonicPoly, factor
from .gf import FiniteField

SUBSPACE_BUDGET = 1_000_000
FIELD_BUDGET = 81
SCAN_BUDGET = 80_000_000


@dataclass(frozen=True)
class BilinearSpace:
    field: FiniteField
    gram: tuple  # n x n field codes
    kind: str = "symmetric"

    def __post_init__(self):
        g = fqlin.mat(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n > 12:
            raise InvalidInput("dimension capped at 12")
        F = self.field
        if self.kind == "symmetric":
            if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
                raise InvalidInput("gram not symmetric")
        elif self.kind == "alternating":
            if any(g[i][i] != 0 for i in range(n)):
                raise InvalidInput("alternating gram needs zero diagonal")
            if any(g[i][j] != F.neg(g[j][i]) for i in range(n) for j in range(n)):
                raise InvalidInput("gram not alternating")
        else:
            raise InvalidInput(f"unknown kind {self.kind!r}")

    @property
    def dim(self) -> int:
        return len(self.gram)

    def bilinear(self, u, v) -> int:
        F = self.field
        acc = 0
        for i, ui in enumerate(u):
            if ui:
                row = self.gram[i]
                for j, vj in enumerate(v):
                    if vj and row[j]:
                        acc = F.add(acc, F.mul(F.mul(ui, row[j]), vj))
        return acc

    def quadratic(self, v) -> int:
        return self.bilinear(v, v)

    def radical(self):
        return fqlin.kernel(self.field, self.gram)

    def is_nondegenerate(self) -> bool:
        return fqlin.det(self.field, self.gram) != 0

    def perp(self, rows):
        """RREF basis of the perpendicular of the row span."""
        if not rows:
            return fqlin.rref(self.field, fqlin.identity(self.field, self.dim))[0]
        Gv = fqlin.matmul(self.field, fqlin.mat(rows), self.gram)
        return fqlin.kernel(self.field, Gv)

    def to_json(self):
        return {
            "field": self.field.to_json(),
            "gram": [list(r) for r in self.gram],
            "kind": self.kind,
        }


def hyperbolic_plane(field: FiniteField) -> BilinearSpace:
    return BilinearSpace(field, ((0, 1), (1, 0)))


def split_odd_space(field: FiniteField, t: int) -> BilinearSpace:
    """H^t plus a one-dimensional norm-form summand."""
    n = 2 * t + 1
    g = [[0] * n for _ in range(n)]
    for i in range(t):
        g[2 * i][2 * i + 1] = 1
        g[2 * i + 1][2 * i] = 1
    g[n - 1][n - 1] = 1
    return BilinearSpace(field, tuple(tuple(r) for r in g))


def split_even_space(field: FiniteField, t: int) -> BilinearSpace:
    g = [[0] * (2 * t) for _ in range(2 * t)]
    for i in range(t):
        g[2 * i][2 * i + 1] = 1
        g[2 * i + 1][2 * i] = 1
    return BilinearSpace(field, tuple(tuple(r) for r in g))


@dataclass(frozen=True)
class Subspace:
    ambient: BilinearSpace
    basis: tuple  # RREF rows

    def __post_init__(self):
        rows, _ = fqlin.rref(self.ambient.field, fqlin.mat(self.basis)) if self.basis else ((), ())
        if len(rows) != len(self.basis):
            raise InvalidInput("basis rows dependent")
        object.__setattr__(self, "basis", rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def key(self):
        return self.basis

    def is_totally_isotropic(self) -> bool:
        V = self.ambient
        rows = self.basis
        for i in range(len(rows)):
            for j in range(i, len(rows)):
                if V.bilinear(rows[i], rows[j]) != 0:
                    return False
        return True

    def to_json(self):
        return [list(r) for r in self.basis]


@dataclass(frozen=True)
class WittDecomposition:
    radical_dim: int
    witt_index: int
    anisotropic_gram: tuple
    witness: tuple  # columns are the adapted basis; X^T G X = block form

    def block_gram(self, field: FiniteField):
        n = self.radical_dim + 2 * self.witt_index + len(self.anisotropic_gram)
        g = [[0] * n for _ in range(n)]
        off = self.radical_dim
        for i in range(self.witt_index):
            g[off + 2 * i][off + 2 * i + 1] = 1
            g[off + 2 * i + 1][off + 2 * i] = 1
        off += 2 * self.witt_index
        for i, row in enumerate(self.anisotropic_gram):
            for j, x in enumerate(row):
                g[off + i][off + j] = x
        return tuple(tuple(r) for r in g)


def _diagonalize(V: BilinearSpace, rows):
    """Orthogonal basis (list of vectors) of the span of rows; the form
    restricted there must be nondegenerate."""
    F = V.field
    basis = [list(r) for r in rows]
    out = []
    while basis:
        v = None
        for cand in basis:
            if V.quadratic(cand) != 0:
                v = list(cand)
                break
        if v is None:
            # all basis vectors isotropic; polarize a non-orthogonal pair
            found = False
            for i in range(len(basis)):
                for j in range(i + 1, len(basis)):
                    if V.bilinear(basis[i], basis[j]) != 0:
                        v = [F.add(x, y) for x, y in zip(basis[i], basis[j])]
                        found = True
                        break
                if found:
                    break
            if v is None:
                raise InvalidInput("restricted form is degenerate")
        out.append(tuple(v))
        qv = V.quadratic(v)
        inv_qv = F.inv(qv)
        new_basis = []
        for b in basis:
            c = F.mul(V.bilinear(b, v), inv_qv)
            w = tuple(F.sub(x, F.mul(c, y)) for x, y in zip(b, v))
            if any(w):
                new_basis.append(w)
        nb, _ = fqlin.rref(F, tuple(new_basis)) if new_basis else ((), ())
        basis = [list(r) for r in nb]
    return out


def _isotropic_vector(V: BilinearSpace, ortho):
    """Nonzero isotropic vector in the span of an orthogonal basis, or None."""
    F = V.field
    vals = [V.quadratic(v) for v in ortho]
    m = len(ortho)
    if m >= 3:
        a1, a2, a3 = vals[0], vals[1], vals[2]
        for x in range(F.order):
            xx = F.mul(F.mul(x, x), a1)
            for y in range(F.order):
                if F.add(F.add(xx, F.mul(F.mul(y, y), a2)), a3) == 0:
                    return tuple(
                        F.add(F.add(F.mul(x, u), F.mul(y, v)), w)
                        for u, v, w in zip(ortho[0], ortho[1], ortho[2])
                    )
        raise AssertionError("ternary form over a finite field must be isotropic")
    if m == 2:
        target = F.neg(F.mul(vals[1], F.inv(vals[0])))
        for x in range(F.order):
            if F.mul(x, x) == target:
                return tuple(
                    F.add(F.mul(x, u), v) for u, v in zip(ortho[0], ortho[1])
                )
    return None


def witt_decompose(V: BilinearSpace) -> WittDecomposition:
    """Radical / hyperbolic / anisotropic splitting with a congruence
    witness X such that X^T . gram . X is the reassembled block form."""
    if V.kind != "symmetric":
        raise InvalidKind("witt decomposition implemented for symmetric forms")
    F = V.field
    rad = V.radical()
    pivots = {c for row in rad for c in [next(i for i, x in enumerate(row) if x)]}
    complement = tuple(
        tuple(1 if j == i else 0 for j in range(V.dim))
        for i in range(V.dim)
        if i not in pivots
    )
    pairs = []
    current = complement
    while True:
        if not current:
            aniso = []
            break
        ortho = _diagonalize(V, current)
        v = _isotropic_vector(V, ortho)
        if v is None:
            aniso = ortho
            break
        # complete v to a hyperbolic pair inside span(current)
        w = None
        for cand in current:
            if V.bilinear(v, cand) != 0:
                w = cand
                break
        assert w is not None
        c = F.inv(V.bilinear(v, w))
        w = tuple(F.mul(c, x) for x in w)
        two = F.encode((2 % F.p,))
        t = F.neg(F.mul(V.quadratic(w), F.inv(two)))
        w = tuple(F.add(x, F.mul(t, y)) for x, y in zip(w, v))
        pairs.append((v, w))
        # restrict to the perp of (v, w) inside the current span
        perp = V.perp((v, w))
        current = fqlin.intersect_rowspaces(F, perp, current)
    if len(aniso) > 2:
        raise AssertionError("anisotropic part over a finite field has dim <= 2")
    cols = list(rad) + [x for pr in pairs for x in pr] + list(aniso)
    witness = fqlin.transpose(tuple(cols))
    aniso_gram = tuple(
        tuple(V.bilinear(u, v) for v in aniso) for u in aniso
    )
    dec = WittDecomposition(len(rad), len(pairs), aniso_gram, witness)
    # exact congruence check
    X = witness
    got = fqlin.matmul(F, fqlin.matmul(F, fqlin.transpose(X), V.gram), X)
    assert got == dec.block_gram(F), "congruence witness failed"
    return dec


# ---------------------------------------------------------------------------
# isotropic subspace enumeration
# ---------------------------------------------------------------------------

def _normalized_vectors(F: FiniteField, conditions, n, zero_cols, min_pivot):
    """Yield normalized vectors (first nonzero = 1, pivot >= min_pivot,
    zero at zero_cols) satisfying all linear `conditions` (dot = 0).
    Plain Python generator; callers keep the scan small."""
    q = F.order
    free_cols_all = [c for c in range(n) if c not in zero_cols]
    for pivot in range(min_pivot, n):
        if pivot in zero_cols:
            continue
        tail = [c for c in free_cols_all if c > pivot]
        total = q ** len(tail)
        for it in range(total):
            v = [0] * n
            v[pivot] = 1
            t = it
            for c in reversed(tail):
                v[c] = t % q
                t //= q
            if all(fqlin._dot(F, cond, v) == 0 for cond in conditions):
                yield tuple(v)


def enumerate_isotropic_subspaces(
    V: BilinearSpace,
    d: int,
    max_subspaces: int = SUBSPACE_BUDGET,
    max_field: int = FIELD_BUDGET,
):
    """All totally isotropic d-dimensional subspaces, canonical RREF order.

    Enumeration walks RREF matrices row by row (pivots increasing), so
    each subspace appears exactly once; the d = 1 layer is delegated to
    the table kernels when the scan is large.
    """
    if V.kind == "symmetric" and not V.is_nondegenerate():
        raise InvalidInput("nondegenerate space expected")
    F = V.field
    q = F.order
    n = V.dim
    if q > max_field:
        raise ResourceLimit(f"field order {q} above budget {max_field}")
    if d == 0:
        return [Subspace(V, ())]
    if d > n:
        return []
    if _kernels.projective_size(q, n) > SCAN_BUDGET:
        raise ResourceLimit("projective scan above budget")

    if V.kind == "symmetric":
        pts = _kernels.quadric_points(F, V.gram)
        lines = [tuple(int(x) for x in row) for row in pts]
    else:
        lines = list(_normalized_vectors(F, (), n, frozenset(), 0))

    out = []
    count = 0

    def extend(rows, pivots, depth):
        nonlocal count
        if depth == d:
            count += 1
            if count > max_subspaces:
                raise ResourceLimit("subspace budget exceeded")
            out.append(Subspace(V, rows))
            return
        # next row: pivot beyond the last, zero at previous pivot columns,
        # previous rows must already be reduced at the new pivot column
        conds = [fqlin.matvec(F, V.gram, r) for r in rows]
        min_piv = pivots[-1] + 1 if pivots else 0
        for w in _normalized_vectors(F, conds, n, frozenset(pivots), min_piv):
            if V.quadratic(w) != 0:
                continue
            piv = next(i for i, x in enumerate(w) if x)
            if any(r[piv] != 0 for r in rows):
                continue
            extend(rows + (w,), pivots + (piv,), depth + 1)

    if d == 1:
        for v in lines:
            if V.quadratic(v) == 0:
                out.append(Subspace(V, (v,)))
        return out

    for v in lines:
        if V.quadratic(v) != 0:
            continue
        piv = next(i for i, x in enumerate(v) if x)
        extend((v,), (piv,), 1)
    return out


def count_isotropic_subspaces(V: BilinearSpace, d: int, **budget) -> int:
    if V.kind != "symmetric" or not V.is_nondegenerate():
        raise InvalidInput("nondegenerate symmetric space expected")
    return len(enumerate_isotropic_subspaces(V, d, **budget))


def complementary_lagrangians(V: BilinearSpace, W: Subspace) -> int:
    """Number of Lagrangians W' with W' != W and W ∩ W' = 0 in a split
    4-dimensional symmetric space."""
    if V.dim != 4:
        raise InvalidInput("4-dimensional space expected")
    dec = witt_decompose(V)
    if dec.witt_index != 2:
        raise InvalidInput("space is not split")
    if W.dim != 2 or not W.is_totally_isotropic():
        raise InvalidInput("W must be a Lagrangian")
    F = V.field
    count = 0
    for Wp in enumerate_isotropic_subspaces(V, 2):
        if Wp.key() == W.key():
            continue
        if not fqlin.intersect_rowspaces(F, W.basis, Wp.basis):
            count += 1
    return count


def _reflection(V: BilinearSpace, v):
    F = V.field
    qv = V.quadratic(v)
    inv_qv = F.inv(qv)
    n = V.dim
    two = F.encode((2 % F.p,))
    rows = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        c = F.mul(F.mul(two, V.bilinear(e, v)), inv_qv)
        rows.append(tuple(F.sub(x, F.mul(c, y)) for x, y in zip(e, v)))
    return fqlin.mat(rows)  # row i = image of basis vector i


def so_orbit_transitive(V: BilinearSpace, d: int, **budget) -> bool:
    """True iff even-length reflection words reach every isotropic
    d-subspace from the first one (breadth-first orbit closure over
    (subspace, parity) states)."""
    if V.dim % 2 == 0:
        raise InvalidInput("odd-dimensional space expected")
    subs = enumerate_isotropic_subspaces(V, d, **budget)
    if not subs:
        return True
    F = V.field
    # anisotropic reflection vectors: one per projective line, capped
    refl = []
    seen_lines = set()
    for v in _normalized_vectors(F, (), V.dim, frozenset(), 0):
        if V.quadratic(v) != 0 and v not in seen_lines:
            seen_lines.add(v)
            refl.append(_reflection(V, v))
    total = len(subs)
    if 2 * total * len(refl) > 80_000_000:
        raise ResourceLimit("orbit closure above budget")
    index = {s.key(): i for i, s in enumerate(subs)}
    start = (0, 0)
    seen = {start}
    frontier = [start]
    basis_of = [s.basis for s in subs]
    while frontier:
        new_frontier = []
        for (i, parity) in frontier:
            rows = basis_of[i]
            for R in refl:
                img = fqlin.matmul(F, rows, R)
                k = fqlin.row_space_key(F, img)
                j = index[k]
                st = (j, parity ^ 1)
                if st not in seen:
                    seen.add(st)
                    new_frontier.append(st)
        frontier = new_frontier
    return all((i, 0) in seen for i in range(total))


def invariant_subspaces(V: BilinearSpace, M, d: int):
    """All M-invariant d-dimensional subspaces for a cyclic operator M
    (characteristic polynomial = minimal polynomial), via primary
    kernel chains ker Q(M)^a."""
    F = V.field
    M = fqlin.mat(M)
    cp = fqlin.charpoly(F, M)
    mp = fqlin.minpoly(F, M)
    if cp != mp:
        raise UnsupportedInput("operator is not cyclic")
    fac = factor(MonicPoly(F, cp))
    chains = []  # per primary component: list over a of kernel bases
    for Q, m in fac.factors:
        powers = []
        QM = fqlin.eval_poly_at_matrix(F, Q.coeffs, M)
        acc = fqlin.identity(F, len(M))
        for a in range(m + 1):
            if a == 0:
                powers.append(())
            else:
                acc = fqlin.matmul(F, acc, QM)
                ker = fqlin.kernel(F, acc)
                assert len(ker) == a * Q.degree, "kernel chain dimension off"
                powers.append(ker)
        chains.append((Q.degree, m, powers))
    out = []

    def rec(i, dim_so_far, rows):
        if i == len(chains):
            if dim_so_far == d:
                out.append(Subspace(V, fqlin.rref(F, rows)[0] if rows else ()))
            return
        degq, m, powers = chains[i]
        for a in range(m + 1):
            nd = dim_so_far + a * degq
            if nd > d:
                break
            rec(i + 1, nd, rows + tuple(powers[a]))

    rec(0, 0, ())
    out.sort(key=lambda s: s.key())
    return out


def invariant_subspace_total(V: BilinearSpace, M) -> int:
    """Number of invariant subspaces of a cyclic operator, all dims."""
    F = V.field
    fac = factor(MonicPoly(F, fqlin.charpoly(F, fqlin.mat(M))))
    total = 1
    for _, m in fac.factors:
        total *= m + 1
    return total
