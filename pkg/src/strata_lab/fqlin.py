"""Dense exact linear algebra over F_{p^k} on small matrices.

Matrices are tuples of row tuples of field codes.  Everything here is
pure and allocation-light; sizes never exceed ~12, so plain Python is
the right tool (the bulk enumerations live in _kernels.py instead).
"""

from __future__ import annotations

from .gf import FiniteField


def mat(rows):
    return tuple(tuple(int(x) for x in r) for r in rows)


def identity(F: FiniteField, n: int):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def matmul(F: FiniteField, A, B):
    n, m = len(A), len(B[0])
    inner = len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = 0
            for t in range(inner):
                a = A[i][t]
                if a:
                    acc = F.add(acc, F.mul(a, B[t][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def matvec(F: FiniteField, A, v):
    return tuple(
        _dot(F, row, v) for row in A
    )


def _dot(F: FiniteField, a, b):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = F.add(acc, F.mul(x, y))
    return acc


def transpose(A):
    return tuple(zip(*A)) if A else ()


def scal(F: FiniteField, c, A):
    return tuple(tuple(F.mul(c, x) for x in r) for r in A)


def mataddsub(F: FiniteField, A, B, sub=False):
    op = F.sub if sub else F.add
    return tuple(tuple(op(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def rref(F: FiniteField, A):
    """Reduced row echelon form; returns (rref_rows_without_zero_rows, pivots)."""
    rows = [list(r) for r in A]
    nrows, ncols = len(rows), len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in rows[:r]), tuple(pivots)


def rank(F: FiniteField, A):
    if not A:
        return 0
    return len(rref(F, A)[0])


def kernel(F: FiniteField, A):
    """Basis (RREF rows) of the right kernel {v : A v^T = 0}."""
    if not A:
        return ()
    ncols = len(A[0])
    R, pivots = rref(F, A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(R[i][fc])
        basis.append(tuple(v))
    return rref(F, tuple(basis))[0] if basis else ()


def solve_right(F: FiniteField, A, b):
    """One solution v of A v^T = b^T, or None."""
    n = len(A)
    aug = tuple(tuple(A[i]) + (b[i],) for i in range(n))
    R, pivots = rref(F, aug)
    ncols = len(A[0])
    if ncols in pivots:
        return None
    v = [0] * ncols
    for i, pc in enumerate(pivots):
        v[pc] = R[i][-1]
    return tuple(v)


def inverse(F: FiniteField, A):
    n = len(A)
    aug = tuple(tuple(A[i]) + tuple(1 if j == i else 0 for j in range(n)) for i in range(n))
    R, pivots = rref(F, aug)
    if list(pivots) != list(range(n)):
        raise ZeroDivisionError("matrix not invertible")
    return tuple(r[n:] for r in R)


def det(F: FiniteField, A):
    rows = [list(r) for r in A]
    n = len(rows)
    d = 1
    for c in range(n):
        pr = None
        for i in range(c, n):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            return 0
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            d = F.neg(d)
        d = F.mul(d, rows[c][c])
        inv = F.inv(rows[c][c])
        for i in range(c + 1, n):
            if rows[i][c]:
                f = F.mul(inv, rows[i][c])
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[c])]
    return d


def row_space_key(F: FiniteField, A):
    """Canonical hashable key of the row space (its RREF)."""
    return rref(F, A)[0]


def intersect_rowspaces(F: FiniteField, A, B):
    """RREF basis of rowspace(A) ∩ rowspace(B), via dot-annihilators:
    span(A) = rightker(rightker(A)), and intersection of spans is the
    annihilator of the union of the annihilators."""
    if not A or not B:
        return ()
    ka = kernel(F, A)
    kb = kernel(F, B)
    stacked = tuple(ka) + tuple(kb)
    if not stacked:
        n = len(A[0])
        return rref(F, identity(F, n))[0]
    return kernel(F, stacked)


def sum_rowspaces(F: FiniteField, A, B):
    return rref(F, tuple(A) + tuple(B))[0]


def frobenius_rows(F: FiniteField, A):
    """Entrywise x -> x^p; sends a subspace basis to a basis of its
    Frobenius translate."""
    return tuple(tuple(F.frobenius(x) for x in r) for r in A)


def charpoly(F: FiniteField, A):
    """Characteristic polynomial coefficients (constant first, monic),
    via exact Faddeev-LeVerrier-free Hessenberg-free expansion: for the
    tiny sizes here, Leibniz-style Gaussian elimination over F_q[T] is
    overkill, so use the classical minor recursion on companion-sized
    matrices; n <= 12.
    """
    n = len(A)
    # interpolation does not apply over small fields; do the generic
    # division-free Berkowitz algorithm.
    # Berkowitz: returns coefficients highest-degree first; adapt at end.
    vect = [(1,)]  # polynomial 1 as vector (low degree first not needed here)
    C = [1]
    prev = [1]
    for i in range(1, n + 1):
        M = [row[:i] for row in A[:i]]
        # Toeplitz matrix column construction
        R = tuple(A[i - 1][:i - 1],) if i > 1 else ()
        S = tuple(A[j][i - 1] for j in range(i - 1))
        a = A[i - 1][i - 1]
        # powers: R * M^k * S
        pows = []
        if i > 1:
            sub = tuple(tuple(A[r][c] for c in range(i - 1)) for r in range(i - 1))
            vec = S
            for _ in range(i - 1):
                pows.append(_dot(F, R, vec))
                vec = matvec(F, sub, vec)
        # Toeplitz column: [1, -a, -RS, -RMS, ...]
        col = [1, F.neg(a)] + [F.neg(x) for x in pows]
        new = [0] * (len(prev) + 1)
        for j, pc in enumerate(prev):
            if pc:
                for t, cc in enumerate(col):
                    if j + t < len(new) and cc:
                        new[j + t] = F.add(new[j + t], F.mul(pc, cc))
        prev = new
    # prev holds coefficients highest first: T^n + c1 T^{n-1} + ...
    return tuple(reversed(prev))


def minpoly(F: FiniteField, A):
    """Minimal polynomial coefficients (constant first, monic) via the
    first linear dependency among I, A, A^2, ..."""
    n = len(A)
    powers = [identity(F, n)]
    for _ in range(n):
        powers.append(matmul(F, powers[-1], A))
    flat = [tuple(x for row in P for x in row) for P in powers]
    for d in range(1, n + 1):
        # solve c_0 flat[0] + ... + c_{d-1} flat[d-1] = -flat[d]
        Amat = transpose(tuple(flat[:d]))
        b = tuple(F.neg(x) for x in flat[d])
        sol = solve_right(F, Amat, b)
        if sol is not None:
            return tuple(sol) + (1,)
    raise AssertionError("no minimal polynomial found below dimension bound")


def eval_poly_at_matrix(F: FiniteField, coeffs, A):
    """p(A) for coefficient tuple (constant first)."""
    n = len(A)
    out = scal(F, coeffs[-1], identity(F, n))
    for c in reversed(coeffs[:-1]):
        out = matmul(F, out, A)
        if c:
            out = mataddsub(F, out, scal(F, c, identity(F, n)))
    return out
