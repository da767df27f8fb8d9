from collections import Counter

import pytest

from strata_lab import building as bd
from strata_lab import padic as pa
from strata_lab.errors import NotAVertex, ResourceLimit
from strata_lab.latqp import PLattice


def setup_module(module):
    module.AMB, module.T0 = bd.standard_V0(3)
    module.V0 = bd.vertex_of(module.T0)


class TestVertices:
    def test_standard_self_dual(self):
        assert T0.dual().key() == T0.key()
        assert V0.type == 0

    def test_spec_type2_example(self):
        T1 = PLattice.from_rows(AMB, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 3]])
        assert bd.vertex_of(T1).type == 2

    def test_type4_example(self):
        T = PLattice.from_rows(AMB, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 3, 0], [0, 0, 0, 3]])
        v = bd.vertex_of(T)
        assert v.type == 4
        assert v.rep.dual().key() == v.rep.rescale(1).key()

    def test_homothety_invariance(self):
        for k in (-2, -1, 1, 2):
            assert bd.vertex_of(T0.rescale(k)).key() == V0.key()

    def test_not_a_vertex(self):
        T = PLattice.from_rows(AMB, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 9]])
        with pytest.raises(NotAVertex):
            bd.vertex_of(T)


class TestNeighbors:
    def test_type0_degrees(self):
        c = Counter(w.type for w in bd.sp_neighbors(V0))
        assert c == {4: 40, 2: 40}

    def test_type2_degrees(self):
        T1 = PLattice.from_rows(AMB, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 3]])
        c = Counter(w.type for w in bd.sp_neighbors(bd.vertex_of(T1)))
        assert c == {0: 4, 4: 4}

    def test_type4_degrees(self):
        T = PLattice.from_rows(AMB, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 3, 0], [0, 0, 0, 3]])
        c = Counter(w.type for w in bd.sp_neighbors(bd.vertex_of(T)))
        assert c == {0: 40, 2: 40}

    def test_neighbors_are_nested(self):
        for w in bd.sp_neighbors(V0)[:10]:
            assert w.rep.contains(T0) or T0.contains(w.rep)

    def test_p5_type2_neighbors(self):
        amb5, T = bd.standard_V0(5)
        T1 = PLattice.from_rows(amb5, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 5]])
        c = Counter(w.type for w in bd.sp_neighbors(bd.vertex_of(T1)))
        assert c == {0: 6, 4: 6}


class TestBall:
    def test_r1_shape(self):
        ball = bd.building_ball(V0, 1)
        assert ball.n == 81 and ball.num_edges() == 240
        assert Counter(ball.types) == {0: 1, 4: 40, 2: 40}

    def test_two_simplexes(self):
        ball = bd.building_ball(V0, 1)
        simp = bd.two_simplexes(ball)
        assert len(simp) == 160
        for tri in simp[:20]:
            assert sorted(ball.types[v] for v in tri) == [0, 2, 4]

    def test_radius_guard(self):
        with pytest.raises(ResourceLimit):
            bd.building_ball(V0, 3)


class TestVEOrder:
    @pytest.fixture(scope="class")
    def ball(self):
        return bd.building_ball(V0, 1)

    def test_nsp_less_than_adjacent_hs(self, ball):
        nsp = next(v for v in range(ball.n) if ball.types[v] == 2)
        hs = next(w for w in ball.adj[nsp] if ball.types[w] in (0, 4))
        x = bd.VEElement.vertex(ball, nsp)
        y = bd.VEElement.vertex(ball, hs)
        assert bd.ve_order(ball, x, y) == "less"
        assert bd.ve_order(ball, y, x) == "greater"

    def test_edge_less_than_endpoint(self, ball):
        simp = bd.two_simplexes(ball)[0]
        hs_pair = [v for v in simp if ball.types[v] in (0, 4)]
        e = bd.VEElement.hs_edge(ball, *hs_pair)
        y = bd.VEElement.vertex(ball, hs_pair[0])
        assert bd.ve_order(ball, e, y) == "less"

    def test_nsp_less_than_edge_through_simplex(self, ball):
        simp = bd.two_simplexes(ball)[0]
        nsp = next(v for v in simp if ball.types[v] == 2)
        hs_pair = [v for v in simp if ball.types[v] in (0, 4)]
        e = bd.VEElement.hs_edge(ball, *hs_pair)
        x = bd.VEElement.vertex(ball, nsp)
        assert bd.ve_order(ball, x, e) == "less"

    def test_two_hs_incomparable(self, ball):
        hs = [v for v in range(ball.n) if ball.types[v] in (0, 4)][:2]
        x, y = (bd.VEElement.vertex(ball, v) for v in hs)
        assert bd.ve_order(ball, x, y) == "incomparable"

    def test_strict_partial_order(self, ball):
        elems = bd.ve_elements(ball)[:150]
        rel = {}
        for x in elems:
            for y in elems:
                rel[(x, y)] = bd.ve_order(ball, x, y)
        for x in elems:
            assert rel[(x, x)] == "equal"
        for x in elems:
            for y in elems:
                if rel[(x, y)] == "less":
                    assert rel[(y, x)] == "greater"
        # transitivity: chains have length <= 2 by kind, so check
        # nsp < edge < hs implies nsp < hs
        for x in elems:
            if x.kind != "nsp":
                continue
            for e in elems:
                if e.kind != "edge" or rel.get((x, e)) != "less":
                    continue
                for y in elems:
                    if y.kind == "hs" and rel.get((e, y)) == "less":
                        assert rel[(x, y)] == "less"

    def test_dimension_values(self, ball):
        simp = bd.two_simplexes(ball)[0]
        hs_pair = [v for v in simp if ball.types[v] in (0, 4)]
        nsp = next(v for v in simp if ball.types[v] == 2)
        assert bd.dimension_of(bd.VEElement.vertex(ball, hs_pair[0])) == 2
        assert bd.dimension_of(bd.VEElement.hs_edge(ball, *hs_pair)) == 1
        assert bd.dimension_of(bd.VEElement.vertex(ball, nsp)) == 0


class TestIntersectionPattern:
    def test_patterns_r1(self):
        ball = bd.building_ball(V0, 1)
        hs = [v for v in range(ball.n) if ball.types[v] in (0, 4)]
        root = 0
        edge = sum(1 for y in hs if y != root and bd.intersection_pattern(ball, root, y) == "edge-stratum")
        assert edge == 40

    def test_point_and_empty_r2(self):
        ball = bd.building_ball(V0, 2)
        hs = [v for v in range(ball.n) if ball.types[v] in (0, 4)]
        tallies = Counter(
            bd.intersection_pattern(ball, 0, y) for y in hs if y != 0
        )
        p = 3
        assert tallies["edge-stratum"] == (p + 1) * (p * p + 1)
        assert tallies["point-stratum"] == p * (p + 1) * (p * p + 1)
        assert tallies["empty"] == len(hs) - 1 - tallies["edge-stratum"] - tallies["point-stratum"]

    def test_nsp_component_count(self):
        ball = bd.building_ball(V0, 1)
        nsp = next(v for v in range(ball.n) if ball.types[v] == 2)
        nbrs = bd.sp_neighbors(ball.payloads[nsp])
        assert sum(1 for w in nbrs if w.type in (0, 4)) == 2 * (3 + 1)


class TestCorrespondence:
    def test_search_iso_r1_p3(self):
        bball = bd.building_ball(V0, 1)
        vball = pa.vrt_ball(pa.standard_vertex_lattices(3)[5], 1)
        res = bd.typed_iso_check(bball, vball)
        assert res.found
        # explicit verification of the returned witness
        for a in range(bball.n):
            for b in bball.adj[a]:
                assert res.mapping[b] in vball.adj[res.mapping[a]]

    def test_corrupted_ball_fails_with_certificate(self):
        bball = bd.building_ball(V0, 1)
        vball = pa.vrt_ball(pa.standard_vertex_lattices(3)[5], 1)
        a = next(iter(vball.adj[5]))
        vball.adj[5].discard(a)
        vball.adj[a].discard(5)
        res = bd.typed_iso_check(bball, vball)
        assert not res.found
        assert res.certificate

    def test_functor_images_are_vertices(self):
        amb5 = bd.wedge_ambient(3)
        img = bd.lambda_of(V0.rep, amb5)
        info = pa.vertex_classify(img)
        assert info is not None and info.type == 5
        for w in bd.sp_neighbors(V0)[:6]:
            info = pa.vertex_classify(bd.lambda_of(w.rep, amb5))
            assert info.type == {0: 5, 4: 5, 2: 1}[w.type]

    def test_functor_correspondence_r1(self):
        res = bd.exceptional_correspondence(3, 1)
        assert res.found
