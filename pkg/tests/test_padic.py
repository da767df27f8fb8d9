import random
from fractions import Fraction

import pytest

from strata_lab import padic as pa
from strata_lab.errors import InvalidInput, Unsupported
from strata_lab.latqp import PLattice, val_p


class TestHilbert:
    def test_unit_unit_trivial(self):
        for p in (3, 5, 7):
            for u in range(1, p):
                for v in range(1, p):
                    assert pa.hilbert_symbol(u, v, p) == 1

    def test_examples(self):
        assert pa.hilbert_symbol(3, 2, 3) == -1
        assert pa.hilbert_symbol(3, 3, 3) == -1
        assert pa.hilbert_symbol(5, 5, 5) == 1  # (-1|5) = 1

    def test_p2_unsupported(self):
        with pytest.raises(Unsupported):
            pa.hilbert_symbol(1, 1, 2)

    def test_bimultiplicative_symmetric_random(self):
        rng = random.Random(1)
        pool = [1, 2, 3, 5, 6, -1, -2, 9, Fraction(1, 3), Fraction(2, 9), -15]
        for p in (3, 5, 7):
            for _ in range(200):
                a, b, c = (rng.choice(pool) for _ in range(3))
                assert pa.hilbert_symbol(a, b, p) == pa.hilbert_symbol(b, a, p)
                assert pa.hilbert_symbol(a, b * c, p) == pa.hilbert_symbol(
                    a, b, p
                ) * pa.hilbert_symbol(a, c, p)
                assert pa.hilbert_symbol(a, -a, p) == 1


class TestInvariants:
    def test_hyperbolic_plane(self):
        form = pa.PadicDiagForm(3, (1, -1))
        assert pa.hasse_discriminant(form) == (1, pa.square_class(-1, 3))

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_five_dim_space(self, p):
        _, five = pa.standard_spaces(p)
        u = pa.smallest_nonresidue(p)
        h, d = pa.hasse_discriminant(five)
        assert h == 1
        assert d == pa.square_class(-u * p, p)

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_choice_independence(self, p):
        """The invariants do not depend on which nonresidue is chosen."""
        u0 = pa.smallest_nonresidue(p)
        nonres = [u for u in range(2, p) if pa.legendre(u, p) == -1][:3]
        base = pa.hasse_discriminant(pa.PadicDiagForm(p, (-u0 * p, -1, u0, -1, u0)))
        for u in nonres:
            form = pa.PadicDiagForm(p, (-u * p, -1, u, -1, u))
            h, d = pa.hasse_discriminant(form)
            assert h == base[0]
            assert d == base[1]

    def test_six_dim_marks_norm_p_vector(self):
        six, five = pa.standard_spaces(3)
        assert six.distinguished == 0
        assert six.entries[0] == 3  # Q of the marked vector is p
        assert six.entries[1:] == five.entries

    def test_scaled_form_invariants(self):
        # the rescaled five-dimensional form: Hasse 1 for all p; the
        # determinant class is that of -1 (trivial only for p = 1 mod 4)
        for p in (3, 5, 7):
            u = pa.smallest_nonresidue(p)
            _, five = pa.standard_spaces(p)
            h, d = pa.hasse_discriminant(five.scaled(Fraction(1, u * p)))
            assert h == 1
            assert d == pa.square_class(-1, p)


class TestLattices:
    def test_unimodular_selfdual(self):
        amb = pa.QpAmbient(3, tuple(tuple(1 if i == j else 0 for j in range(2)) for i in range(2)))
        L = PLattice.standard(amb)
        assert L.dual().key() == L.key()

    def test_dual_involution_random(self):
        amb = pa.vertex_ambient(3)
        rng = random.Random(4)
        for _ in range(100):
            rows = [
                [Fraction(rng.randrange(-4, 5), 3 ** rng.randrange(2)) for _ in range(5)]
                for _ in range(5)
            ]
            try:
                L = PLattice.from_rows(amb, rows)
            except InvalidInput:
                continue
            assert L.dual().dual().key() == L.key()

    def test_duality_reverses_containment(self):
        std = pa.standard_vertex_lattices(3)
        info = pa.vertex_classify(std[5])
        for M in pa.neighbors(info, "down", 3)[:5]:
            assert std[5].contains(M)
            assert M.dual().contains(std[5].dual())

    def test_standard_types(self):
        for p in (3, 5, 7):
            std = pa.standard_vertex_lattices(p)
            for t in (1, 3, 5):
                info = pa.vertex_classify(std[t])
                assert info is not None and info.type == t

    def test_type3_dual_chain(self):
        std = pa.standard_vertex_lattices(3)
        L = std[3]
        D = L.dual()
        assert L.contains(D) and D.contains(L.rescale(1))
        assert L.quotient_length(D) == 3

    def test_not_vertex(self):
        amb = pa.vertex_ambient(3)
        rows = [[1, 0, 0, 0, 0], [0, 9, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]
        L = PLattice.from_rows(amb, rows)
        assert pa.vertex_classify(L) is None

    def test_quotient_spaces(self):
        std = pa.standard_vertex_lattices(3)
        i3 = pa.vertex_classify(std[3])
        # head quotient of a type-3 lattice: H + line over F_p
        from strata_lab import quadspace as qs

        dec = qs.witt_decompose(i3.omega0)
        assert (dec.radical_dim, dec.witt_index, len(dec.anisotropic_gram)) == (0, 1, 1)
        dec = qs.witt_decompose(i3.omega0p)
        assert (dec.radical_dim, dec.witt_index, len(dec.anisotropic_gram)) == (0, 1, 0)

    def test_serialization(self):
        std = pa.standard_vertex_lattices(3)
        js = std[3].to_json()
        assert set(js) == {"scale", "hnf"}
        assert len(js["hnf"]) == 5


class TestIncidence:
    @pytest.mark.parametrize(
        "t,direction,target,count",
        [
            (1, "up", 5, 8),
            (3, "up", 5, 2),
            (3, "down", 1, 4),
            (5, "down", 1, 40),
            (5, "down", 3, 40),
        ],
    )
    def test_counts_p3(self, t, direction, target, count):
        std = pa.standard_vertex_lattices(3)
        info = pa.vertex_classify(std[t])
        assert len(pa.neighbors(info, direction, target)) == count

    def test_counts_p5(self):
        std = pa.standard_vertex_lattices(5)
        i5 = pa.vertex_classify(std[5])
        assert len(pa.neighbors(i5, "down", 1)) == 156
        assert len(pa.neighbors(i5, "down", 3)) == 156
        i1 = pa.vertex_classify(std[1])
        assert len(pa.neighbors(i1, "up", 5)) == 12

    def test_impossible_combinations_empty(self):
        std = pa.standard_vertex_lattices(3)
        i5 = pa.vertex_classify(std[5])
        assert pa.neighbors(i5, "up", 5) == []
        i1 = pa.vertex_classify(std[1])
        assert pa.neighbors(i1, "down", 1) == []

    def test_types_parity_and_membership(self):
        std = pa.standard_vertex_lattices(3)
        i5 = pa.vertex_classify(std[5])
        for M in pa.neighbors(i5, "down", 3)[:10]:
            info = pa.vertex_classify(M)
            assert info is not None and info.type == 3
            assert std[5].contains(M)
        for M in pa.neighbors(i5, "down", 1)[:10]:
            info = pa.vertex_classify(M)
            assert info is not None and info.type == 1


class TestBall:
    def test_r1_structure(self):
        std = pa.standard_vertex_lattices(3)
        ball = pa.vrt_ball(std[5], 1)
        types = {t: ball.types.count(t) for t in set(ball.types)}
        assert ball.n == 81 and types == {1: 40, 5: 41}
        assert dict(ball.degree_profile(0)) == {1: 40, 5: 40}

    def test_edges_and_labels(self):
        std = pa.standard_vertex_lattices(3)
        ball = pa.vrt_ball(std[5], 1)
        for key, (label_type, label) in ball.edge_labels.items():
            assert label_type == 3
            a, b = tuple(key)
            assert ball.types[a] == 5 and ball.types[b] == 5
            La, Lb = ball.payloads[a], ball.payloads[b]
            assert La.intersect(Lb).key() == label.key()
            info = pa.vertex_classify(label)
            assert info is not None and info.type == 3

    def test_t1_t5_edges_are_containments(self):
        std = pa.standard_vertex_lattices(3)
        ball = pa.vrt_ball(std[5], 1)
        for a in range(ball.n):
            for b in ball.adj[a]:
                if a < b and {ball.types[a], ball.types[b]} == {1, 5}:
                    one = a if ball.types[a] == 1 else b
                    five = b if one == a else a
                    assert ball.payloads[five].contains(ball.payloads[one])

    def test_t5_t5_edges_have_length_one_quotients(self):
        std = pa.standard_vertex_lattices(3)
        ball = pa.vrt_ball(std[5], 1)
        checked = 0
        for key in list(ball.edge_labels)[:8]:
            a, b = tuple(key)
            La, Lb = ball.payloads[a], ball.payloads[b]
            s = La.add(Lb)
            assert s.quotient_length(La) == 1
            assert s.quotient_length(Lb) == 1
            checked += 1
        assert checked

    def test_connectivity_r2(self):
        std = pa.standard_vertex_lattices(3)
        ball = pa.vrt_ball(std[5], 2)
        # every pair is connected through ball edges
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for v in frontier:
                for w in ball.adj[v]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        assert len(seen) == ball.n

    def test_radius_guard(self):
        from strata_lab.errors import ResourceLimit

        std = pa.standard_vertex_lattices(3)
        with pytest.raises(ResourceLimit):
            pa.vrt_ball(std[5], 3)
        std7 = pa.standard_vertex_lattices(7)
        with pytest.raises(ResourceLimit):
            pa.vrt_ball(std7[5], 2)
