import random
from itertools import product

import pytest

from strata_lab import fqlin, quadspace as qs
from strata_lab.errors import InvalidInput, InvalidKind, UnsupportedInput
from strata_lab.ffpoly import poly
from strata_lab.gf import GF

F3 = GF(3)
F5 = GF(5)


def diag(field, *entries):
    n = len(entries)
    return qs.BilinearSpace(
        field, tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))
    )


def brute_isotropic_lines(V):
    """Independent oracle: scan all nonzero vectors."""
    q = V.field.order
    seen = set()
    for vec in product(range(q), repeat=V.dim):
        if any(vec) and V.quadratic(vec) == 0:
            seen.add(fqlin.rref(V.field, (vec,))[0])
    return len(seen)


def brute_max_isotropic_dim(V):
    q = V.field.order
    best = 0
    vectors = [v for v in product(range(q), repeat=V.dim) if any(v)]
    isotropic = [v for v in vectors if V.quadratic(v) == 0]
    # greedy BFS over spans
    from itertools import combinations

    for r in range(1, V.dim + 1):
        found = False
        for combo in combinations(isotropic, r):
            rows, _ = fqlin.rref(V.field, combo)
            if len(rows) != r:
                continue
            sub = qs.Subspace(V, rows)
            if sub.is_totally_isotropic():
                found = True
                break
        if found:
            best = r
        else:
            break
    return best


class TestWitt:
    def test_hyperbolic_plane(self):
        d = qs.witt_decompose(diag(F3, 1, 2))
        assert (d.radical_dim, d.witt_index, len(d.anisotropic_gram)) == (0, 1, 0)

    def test_anisotropic_sum_of_squares(self):
        # -1 is a nonsquare mod 3, so x^2 + y^2 = 0 only at 0
        d = qs.witt_decompose(diag(F3, 1, 1))
        assert (d.witt_index, len(d.anisotropic_gram)) == (0, 2)

    def test_five_squares(self):
        V = diag(F3, 1, 1, 1, 1, 1)
        d = qs.witt_decompose(V)
        assert (d.radical_dim, d.witt_index, len(d.anisotropic_gram)) == (0, 2, 1)
        assert brute_max_isotropic_dim(V) == 2

    def test_congruence_witness_random(self):
        rng = random.Random(5)
        for _ in range(25):
            n = rng.randrange(1, 5)
            g = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    g[i][j] = g[j][i] = rng.randrange(3)
            V = qs.BilinearSpace(F3, tuple(tuple(r) for r in g))
            d = qs.witt_decompose(V)  # witness verified in the function
            assert d.radical_dim + 2 * d.witt_index + len(d.anisotropic_gram) == n

    def test_radical_detected(self):
        V = qs.BilinearSpace(F3, ((0, 0), (0, 1)))
        d = qs.witt_decompose(V)
        assert d.radical_dim == 1 and len(d.anisotropic_gram) == 1

    def test_alternating_rejected(self):
        V = qs.BilinearSpace(F3, ((0, 1), (2, 0)), kind="alternating")
        with pytest.raises(InvalidKind):
            qs.witt_decompose(V)


class TestCounts:
    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_line_counts_match_brute_force(self, p):
        F = GF(p)
        for V in (qs.split_odd_space(F, 1), qs.split_odd_space(F, 2), qs.split_even_space(F, 1)):
            assert qs.count_isotropic_subspaces(V, 1) == brute_isotropic_lines(V)

    @pytest.mark.parametrize("p", [3, 5])
    def test_formula_values(self, p):
        F = GF(p)
        assert qs.count_isotropic_subspaces(qs.split_odd_space(F, 1), 1) == p + 1
        assert qs.count_isotropic_subspaces(qs.split_odd_space(F, 2), 2) == (p + 1) * (p * p + 1)
        assert qs.count_isotropic_subspaces(qs.split_even_space(F, 2), 2) == 2 * (p + 1)

    def test_budget_exceeds_witt_index_gives_zero(self):
        V = qs.split_odd_space(F3, 2)
        assert qs.count_isotropic_subspaces(V, 3) == 0

    def test_enumeration_is_canonical_and_isotropic(self):
        V = qs.split_odd_space(F3, 2)
        subs = qs.enumerate_isotropic_subspaces(V, 2)
        keys = [s.key() for s in subs]
        assert len(set(keys)) == len(keys)
        for s in subs:
            assert s.is_totally_isotropic()
            assert fqlin.rref(F3, s.basis)[0] == s.basis

    def test_hyperbolic_plane_lines_are_axes(self):
        V = qs.hyperbolic_plane(F3)
        subs = qs.enumerate_isotropic_subspaces(V, 1)
        assert sorted(s.basis for s in subs) == [(((0, 1),)), (((1, 0),))]

    def test_field_budget(self):
        from strata_lab.errors import ResourceLimit

        big = qs.split_odd_space(GF(13), 2)
        with pytest.raises(ResourceLimit):
            qs.enumerate_isotropic_subspaces(big, 1, max_field=10)


class TestLagrangians:
    def test_complement_count_independent_of_choice(self):
        V = qs.split_even_space(F3, 2)
        lag = qs.enumerate_isotropic_subspaces(V, 2)
        assert len(lag) == 8
        assert {qs.complementary_lagrangians(V, W) for W in lag} == {3}

    def test_p5(self):
        V = qs.split_even_space(F5, 2)
        W = qs.enumerate_isotropic_subspaces(V, 2)[0]
        assert qs.complementary_lagrangians(V, W) == 5

    def test_non_lagrangian_rejected(self):
        V = qs.split_even_space(F3, 2)
        with pytest.raises(InvalidInput):
            qs.complementary_lagrangians(V, qs.Subspace(V, ((1, 0, 0, 0),)))


class TestOrbit:
    @pytest.mark.parametrize(
        "space,d",
        [("odd1", 1), ("odd2", 1), ("odd2", 2)],
    )
    def test_transitive(self, space, d):
        V = qs.split_odd_space(F3, 1 if space == "odd1" else 2)
        assert qs.so_orbit_transitive(V, d)

    def test_even_dimension_rejected(self):
        with pytest.raises(InvalidInput):
            qs.so_orbit_transitive(qs.split_even_space(F3, 1), 1)


def companion(F, coeffs):
    n = len(coeffs) - 1
    rows = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i + 1][i] = 1
    for i in range(n):
        rows[i][n - 1] = F.neg(coeffs[i])
    return tuple(tuple(r) for r in rows)


class TestInvariantSubspaces:
    def test_distinct_eigenvalues(self):
        C = companion(F3, poly(F3, [2, 0, 1]).coeffs)  # (T-1)(T-2)
        V = diag(F3, 1, 1)
        subs = qs.invariant_subspaces(V, C, 1)
        assert len(subs) == 2

    def test_chain_structure(self):
        P = poly(F3, [1, 0, 1]).pow(3)
        C = companion(F3, P.coeffs)
        V = diag(F3, *([1] * 6))
        dims = {d: len(qs.invariant_subspaces(V, C, d)) for d in range(7)}
        assert dims == {0: 1, 1: 0, 2: 1, 3: 0, 4: 1, 5: 0, 6: 1}

    def test_split_sextic(self):
        F729 = GF(3, 6)
        P = poly(F729, [1])
        from strata_lab.ffpoly import MonicPoly

        for r in (1, 2, 3, 4, 5, 6):
            P = P.mul(MonicPoly(F729, (F729.neg(r), 1)))
        C = companion(F729, P.coeffs)
        V = qs.BilinearSpace(
            F729, tuple(tuple(1 if i == j else 0 for j in range(6)) for i in range(6))
        )
        assert len(qs.invariant_subspaces(V, C, 3)) == 20

    def test_total_count_formula(self):
        P = poly(F3, [1, 0, 1]).pow(2).mul(poly(F3, [1, 1]))
        C = companion(F3, P.coeffs)
        V = diag(F3, *([1] * 5))
        total = sum(len(qs.invariant_subspaces(V, C, d)) for d in range(6))
        assert total == qs.invariant_subspace_total(V, C) == (2 + 1) * (1 + 1)

    def test_invariance_of_output(self):
        P = poly(F3, [1, 0, 1]).pow(2)
        C = companion(F3, P.coeffs)
        V = diag(F3, 1, 1, 1, 1)
        for s in qs.invariant_subspaces(V, C, 2):
            img = fqlin.matmul(F3, s.basis, fqlin.transpose(C))
            assert fqlin.row_space_key(F3, img) == s.basis

    def test_non_cyclic_rejected(self):
        identity2 = ((1, 0), (0, 1))
        with pytest.raises(UnsupportedInput):
            qs.invariant_subspaces(diag(F3, 1, 1), identity2, 1)


class TestLinearAlgebra:
    def test_charpoly_matches_minpoly_on_companions(self):
        rng = random.Random(2)
        for _ in range(30):
            deg = rng.randrange(2, 6)
            coeffs = [rng.randrange(3) for _ in range(deg)] + [1]
            C = companion(F3, tuple(coeffs))
            assert fqlin.charpoly(F3, C) == tuple(coeffs)
            assert fqlin.minpoly(F3, C) == tuple(coeffs)

    def test_intersect_and_sum_dims(self):
        rng = random.Random(9)
        for _ in range(40):
            rows_a = tuple(tuple(rng.randrange(3) for _ in range(5)) for _ in range(2))
            rows_b = tuple(tuple(rng.randrange(3) for _ in range(5)) for _ in range(2))
            A, _ = fqlin.rref(F3, rows_a)
            B, _ = fqlin.rref(F3, rows_b)
            if not A or not B:
                continue
            inter = fqlin.intersect_rowspaces(F3, A, B)
            total = fqlin.sum_rowspaces(F3, A, B)
            assert len(inter) + len(total) == len(A) + len(B)
