import random

import pytest

from strata_lab import ffpoly as fp
from strata_lab.errors import InvalidInput
from strata_lab.gf import GF, FiniteField, default_modulus, smallest_nonresidue


F3 = GF(3)
F5 = GF(5)


def T(field, *coeffs):
    return fp.poly(field, coeffs)


class TestField:
    def test_rejects_char_2_and_composites(self):
        with pytest.raises(Exception):
            FiniteField(2)
        with pytest.raises(InvalidInput):
            FiniteField(9)

    def test_extension_arithmetic(self):
        F9 = GF(3, 2)
        assert F9.modulus == (1, 0, 1)  # lexicographically smallest
        # x has x^2 = -1
        x = F9.encode((0, 1))
        assert F9.mul(x, x) == F9.neg(1)
        for a in range(1, F9.order):
            assert F9.mul(a, F9.inv(a)) == 1

    def test_frobenius_fixes_prime_field(self):
        F27 = GF(3, 3)
        for a in range(3):
            assert F27.frobenius(a) == a
        # frobenius order 3
        b = F27.encode((1, 2, 1))
        assert F27.frobenius(F27.frobenius(F27.frobenius(b))) == b

    def test_default_modulus_irreducible_degree6(self):
        mod = default_modulus(3, 6)
        assert len(mod) == 7 and mod[-1] == 1

    def test_smallest_nonresidue(self):
        assert [smallest_nonresidue(p) for p in (3, 5, 7, 11, 13)] == [2, 2, 3, 2, 2]


class TestReciprocal:
    def test_palindrome_fixed(self):
        assert fp.reciprocal(T(F3, 1, 0, 1)).coeffs == (1, 0, 1)

    def test_cubic_reversal(self):
        # T^3 + 2T + 1 -> T^3 + 2T^2 + 1
        assert fp.reciprocal(T(F3, 1, 2, 0, 1)).coeffs == (1, 0, 2, 1)

    def test_normalization(self):
        # reverse of (2,1,1) is (1,1,2); monic normalization scales by 2
        assert fp.reciprocal(T(F3, 2, 1, 1)).coeffs == (2, 2, 1)

    def test_zero_constant_rejected(self):
        with pytest.raises(InvalidInput):
            fp.reciprocal(T(F3, 0, 1))

    def test_involution_random(self):
        rng = random.Random(7)
        for _ in range(100):
            deg = rng.randrange(1, 6)
            coeffs = [rng.randrange(3) for _ in range(deg)] + [1]
            if coeffs[0] == 0:
                coeffs[0] = 1 + rng.randrange(2)
            P = T(F3, *coeffs)
            assert fp.reciprocal(fp.reciprocal(P)).coeffs == P.coeffs

    def test_strict_self_reciprocal_needs_constant_one(self):
        # T^2 - 1 reverses to itself only after sign normalization
        P = T(F3, 2, 0, 1)
        assert fp.reciprocal(P).coeffs == P.coeffs
        assert not fp.is_self_reciprocal(P)
        assert fp.is_self_reciprocal(T(F3, 1, 2, 1))


class TestFactor:
    def test_cube_of_quadratic(self):
        P = T(F3, 1, 0, 1).pow(3)
        fac = fp.factor(P)
        assert [(f.coeffs, m) for f, m in fac.factors] == [((1, 0, 1), 3)]

    def test_difference_of_squares(self):
        fac = fp.factor(T(F3, 2, 0, 1))  # T^2 - 1
        assert [(f.coeffs, m) for f, m in fac.factors] == [((1, 1), 1), ((2, 1), 1)]

    def test_rootless_cubic_irreducible(self):
        P = T(F3, 1, 2, 0, 1)
        assert all(P(x) != 0 for x in range(3))
        fac = fp.factor(P)
        assert fac.factors == ((P, 1),)

    def test_multiplying_back_random(self):
        rng = random.Random(11)
        for _ in range(60):
            deg = rng.randrange(1, 7)
            coeffs = [rng.randrange(5) for _ in range(deg)] + [1]
            P = T(F5, *coeffs)
            fac = fp.factor(P)  # checked in Factorization.__post_init__
            assert fac.input.coeffs == P.coeffs

    def test_deterministic_order(self):
        P = T(F3, 0, 2, 0, 1).mul(T(F3, 1, 1))  # something mixed
        fac = fp.factor(P)
        keys = [f.sort_key() for f, _ in fac.factors]
        assert keys == sorted(keys)


class TestEnumerateIrreducibles:
    @pytest.mark.parametrize(
        "p,d,count", [(3, 1, 3), (3, 2, 3), (3, 3, 8), (5, 1, 5), (5, 2, 10), (5, 3, 40)]
    )
    def test_necklace_counts(self, p, d, count):
        assert len(fp.enumerate_irreducibles(GF(p), d)) == count

    def test_degree_one_listing(self):
        assert [f.coeffs for f in fp.enumerate_irreducibles(F3, 1)] == [
            (0, 1),
            (1, 1),
            (2, 1),
        ]

    def test_no_small_roots(self):
        for f in fp.enumerate_irreducibles(F3, 3):
            assert all(f(x) != 0 for x in range(3))


class TestSRPartition:
    def test_pure_self_reciprocal(self):
        part = fp.sr_partition(fp.factor(T(F3, 1, 0, 1).pow(3)))
        assert [(f.coeffs, m) for f, m in part.sr] == [((1, 0, 1), 3)]
        assert part.nsr_classes == ()

    def test_paired_quadratics(self):
        P = T(F3, 1, 0, 1).mul(T(F3, 2, 1, 1)).mul(T(F3, 2, 2, 1))
        part = fp.sr_partition(fp.factor(P))
        assert [(f.coeffs, m) for f, m in part.sr] == [((1, 0, 1), 1)]
        assert [(a.coeffs, b.coeffs, m) for a, b, m in part.nsr_classes] == [
            ((2, 1, 1), (2, 2, 1), 1)
        ]

    def test_linear_plus_one(self):
        part = fp.sr_partition(fp.factor(T(F3, 1, 1).pow(2)))
        assert part.sr == ((T(F3, 1, 1), 2),)

    def test_self_paired_class(self):
        # (T - 1)(T + 1) squared: T - 1 is its own (normalized) partner
        P = T(F3, 2, 0, 1).pow(2)
        part = fp.sr_partition(fp.factor(P))
        assert [(f.coeffs, m) for f, m in part.sr] == [((1, 1), 2)]
        assert [(a.coeffs, b.coeffs, m) for a, b, m in part.nsr_classes] == [
            ((2, 1), (2, 1), 2)
        ]

    def test_rejects_non_self_reciprocal(self):
        with pytest.raises(InvalidInput):
            fp.sr_partition(fp.factor(T(F3, 2, 1, 1)))

    def test_closure_property_random(self):
        # products built from factor pairs are self-reciprocal, and their
        # partition is closed under the partner map
        rng = random.Random(3)
        irr2 = fp.enumerate_irreducibles(F3, 2) + fp.enumerate_irreducibles(F3, 3)
        for _ in range(40):
            P = fp.one(F3)
            for _ in range(rng.randrange(1, 3)):
                R = rng.choice(irr2)
                if R.constant() == 0:
                    continue
                P = P.mul(R).mul(fp.reciprocal(R))
            if P.degree == 0:
                continue
            assert fp.is_self_reciprocal(P)
            part = fp.sr_partition(fp.factor(P))
            for rep, partner, m in part.nsr_classes:
                assert fp.reciprocal(rep).coeffs == partner.coeffs
                assert fp.reciprocal(partner).coeffs == rep.coeffs
