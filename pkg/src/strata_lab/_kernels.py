"""Hot enumeration kernels over small finite fields.

Field elements are integer codes; arithmetic goes through dense add/mul
tables supplied by gf.FiniteField.tables().  Each kernel has a numba
@njit implementation and a chunked pure-numpy fallback; the active lane
is chosen once at import time:

* default: numba when importable,
* STRATA_LAB_NO_NUMBA=1 (or failed import): numpy.

Both lanes are exercised by the test suite and compared by
benchmarks/bench_kernels.py.

Iteration convention: points of P^{n-1}(F_q) are scanned in normalized
form (first nonzero coordinate equals 1), lead position outermost, the
tail in mixed-radix order with the LAST coordinate fastest.  The scan
order is part of the contract: enumerating kernels return packed arrays
in this canonical order, so results are deterministic across lanes.
"""

from __future__ import annotations

import os

import numpy as np

_FORCED_OFF = os.environ.get("STRATA_LAB_NO_NUMBA", "") not in ("", "0")

if not _FORCED_OFF:
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAVE_NUMBA = False
else:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"

_CHUNK = 1 << 18


# ---------------------------------------------------------------------------
# numba lane
# ---------------------------------------------------------------------------

def _build_numba():
    @njit(cache=True)
    def _quadric_scan(n, q, gram, add_t, mul_t, out):
        """Normalized isotropic vectors of x·gram·x^T = 0; returns count.

        out must be preallocated (max_hits, n); rows are written in scan
        order.  If out is full further hits are counted but not stored.
        """
        x = np.zeros(n, dtype=np.int16)
        hits = 0
        for lead in range(n):
            for i in range(n):
                x[i] = 0
            x[lead] = 1
            tail = n - 1 - lead
            total = 1
            for _ in range(tail):
                total *= q
            for it in range(total):
                t = it
                for j in range(n - 1, lead, -1):
                    x[j] = t % q
                    t //= q
                acc = 0
                for a in range(lead, n):
                    xa = x[a]
                    if xa != 0:
                        for b in range(lead, n):
                            xb = x[b]
                            if xb != 0:
                                acc = add_t[acc, mul_t[mul_t[xa, gram[a, b]], xb]]
                if acc == 0:
                    if hits < out.shape[0]:
                        for j in range(n):
                            out[hits, j] = x[j]
                    hits += 1
        return hits

    @njit(cache=True)
    def _hypersurface_count(n, q, exps, coefs, add_t, mul_t, pow_t):
        """Number of points of P^{n-1}(F_q) where sum of monomials vanishes."""
        x = np.zeros(n, dtype=np.int16)
        count = 0
        nterms = exps.shape[0]
        for lead in range(n):
            for i in range(n):
                x[i] = 0
            x[lead] = 1
            tail = n - 1 - lead
            total = 1
            for _ in range(tail):
                total *= q
            for it in range(total):
                t = it
                for j in range(n - 1, lead, -1):
                    x[j] = t % q
                    t //= q
                acc = 0
                for m in range(nterms):
                    term = coefs[m]
                    for j in range(n):
                        e = exps[m, j]
                        if e:
                            term = mul_t[term, pow_t[x[j], e]]
                    acc = add_t[acc, term]
                if acc == 0:
                    count += 1
        return count

    return _quadric_scan, _hypersurface_count


# ---------------------------------------------------------------------------
# numpy lane
# ---------------------------------------------------------------------------

def _np_tail_block(q, tail, start, stop):
    """Mixed-radix expansion of range(start, stop) into (stop-start, tail)."""
    idx = np.arange(start, stop, dtype=np.int64)
    cols = np.empty((stop - start, tail), dtype=np.int16)
    for j in range(tail - 1, -1, -1):
        cols[:, j] = idx % q
        idx //= q
    return cols


def _np_quadric_scan(n, q, gram, add_t, mul_t, out):
    hits = 0
    for lead in range(n):
        tail = n - 1 - lead
        total = q ** tail
        for start in range(0, total, _CHUNK):
            stop = min(start + _CHUNK, total)
            block = np.zeros((stop - start, n), dtype=np.int16)
            block[:, lead] = 1
            if tail:
                block[:, lead + 1 :] = _np_tail_block(q, tail, start, stop)
            acc = np.zeros(stop - start, dtype=np.int16)
            for a in range(lead, n):
                xa = block[:, a]
                for b in range(lead, n):
                    g = gram[a, b]
                    if g:
                        term = mul_t[mul_t[xa, g], block[:, b]]
                        acc = add_t[acc, term]
            sel = np.nonzero(acc == 0)[0]
            for i in sel:
                if hits < out.shape[0]:
                    out[hits] = block[i]
                hits += 1
    return hits


def _np_hypersurface_count(n, q, exps, coefs, add_t, mul_t, pow_t):
    count = 0
    nterms = exps.shape[0]
    for lead in range(n):
        tail = n - 1 - lead
        total = q ** tail
        for start in range(0, total, _CHUNK):
            stop = min(start + _CHUNK, total)
            block = np.zeros((stop - start, n), dtype=np.int16)
            block[:, lead] = 1
            if tail:
                block[:, lead + 1 :] = _np_tail_block(q, tail, start, stop)
            acc = np.zeros(stop - start, dtype=np.int16)
            for m in range(nterms):
                term = np.full(stop - start, coefs[m], dtype=np.int16)
                for j in range(n):
                    e = exps[m, j]
                    if e:
                        term = mul_t[term, pow_t[block[:, j], e]]
                acc = add_t[acc, term]
            count += int(np.count_nonzero(acc == 0))
    return count


if HAVE_NUMBA:
    _quadric_scan_impl, _hypersurface_count_impl = _build_numba()
else:
    _quadric_scan_impl, _hypersurface_count_impl = _np_quadric_scan, _np_hypersurface_count


# ---------------------------------------------------------------------------
# public wrappers
# ---------------------------------------------------------------------------

def projective_size(q: int, n: int) -> int:
    return (q ** n - 1) // (q - 1)


def quadric_points(field, gram_rows, max_hits=None):
    """All normalized projective points with x·G·x^T = 0, as an int16 array.

    gram_rows is a tuple-of-tuples of field codes (symmetric).
    """
    n = len(gram_rows)
    q = field.order
    add_t, mul_t = field.tables()
    gram = np.array(gram_rows, dtype=np.int16)
    if max_hits is None:
        max_hits = projective_size(q, n)
    out = np.empty((max_hits, n), dtype=np.int16)
    hits = _quadric_scan_impl(n, q, gram, add_t, mul_t, out)
    if hits > out.shape[0]:
        raise AssertionError("quadric scan overflow")
    return out[:hits].copy()


def hypersurface_count(field, exps, coefs, nvars):
    """Projective zero count of sum coefs[m] * prod x_j^exps[m][j]."""
    q = field.order
    add_t, mul_t = field.tables()
    exps = np.asarray(exps, dtype=np.int16).reshape(len(coefs), nvars)
    coefs_arr = np.asarray(coefs, dtype=np.int16)
    max_e = int(exps.max(initial=0))
    pow_t = np.empty((q, max_e + 1), dtype=np.int16)
    for a in range(q):
        pow_t[a, 0] = 1
        for e in range(1, max_e + 1):
            pow_t[a, e] = field.mul(int(pow_t[a, e - 1]), a)
    return int(
        _hypersurface_count_impl(nvars, q, exps, coefs_arr, add_t, mul_t, pow_t)
    )
