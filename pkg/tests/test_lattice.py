import math

import pytest

from pnav.gridmap import RobotModel, footprint_free
from pnav.lattice import (AXIS_HEADINGS, HEADING_STEP, HEADINGS, SQRT2,
                          CostVector, LatticeEdge, LatticeError, LatticeNode,
                          build_lattice, edge_cost, node_position, validate_edge)

from conftest import free_map, make_map

SMALL = RobotModel(footprint_radius=0.2, camera_clearance_radius=0.4)


def count_kinds(edges):
    a = sum(1 for e in edges if e.kind == "A")
    b = sum(1 for e in edges if e.kind == "B")
    return a, b


class TestBuild:
    def test_single_cell_graph(self):
        g = build_lattice(free_map(1, 1), SMALL, 1.0)
        assert len(g) == 8
        edges = [e for n in g.nodes for e in g.neighbors(n)]
        a, b = count_kinds(edges)
        assert a == 56 and b == 0

    def test_two_cell_type_b(self):
        g = build_lattice(free_map(2, 1), SMALL, 1.0)
        east = g.neighbors(LatticeNode(0, 0, 0))
        assert any(e.kind == "B" and e.dst == LatticeNode(1, 0, 0) for e in east)
        north = g.neighbors(LatticeNode(0, 0, 90))
        assert not any(e.kind == "B" for e in north)

    def test_delta_must_divide_resolution(self):
        with pytest.raises(LatticeError, match="multiple"):
            build_lattice(free_map(4, 4, resolution=0.5), SMALL, 0.75)

    def test_blocked_map_gives_empty_graph(self):
        g = build_lattice(make_map(["##", "##"]), SMALL, 1.0)
        assert len(g) == 0

    def test_obstacle_block_excludes_footprint_overlaps(self):
        rows = [".....",
                ".###.",
                ".###.",
                ".###.",
                "....."]
        wmap = make_map(rows)
        model = RobotModel(footprint_radius=0.6, camera_clearance_radius=1.0)
        g = build_lattice(wmap, model, 1.0)
        # oracle: per-position footprint check
        for ix in range(5):
            for iy in range(5):
                pos = node_position(LatticeNode(ix, iy, 0), wmap, 1.0)
                assert g.has_position(ix, iy) == footprint_free(wmap, pos, 0.6)

    def test_interior_node_edge_counts(self):
        g = build_lattice(free_map(7, 7), SMALL, 1.0)
        a, b = count_kinds(g.neighbors(LatticeNode(3, 3, 0)))
        assert (a, b) == (7, 1)

    def test_node_facing_wall(self):
        g = build_lattice(free_map(3, 3), SMALL, 1.0)
        a, b = count_kinds(g.neighbors(LatticeNode(2, 1, 0)))
        assert (a, b) == (7, 0)

    def test_neighbor_order(self):
        g = build_lattice(free_map(3, 3), SMALL, 1.0)
        edges = g.neighbors(LatticeNode(1, 1, 90))
        kinds = [e.kind for e in edges]
        assert kinds == ["A"] * 7 + ["B"]
        a_headings = [e.dst.heading for e in edges if e.kind == "A"]
        assert a_headings == sorted(a_headings)

    def test_unknown_node_lookup(self):
        g = build_lattice(free_map(2, 2), SMALL, 1.0)
        with pytest.raises(LatticeError):
            g.neighbors(LatticeNode(5, 5, 0))

    def test_corner_counts_match_rederivation(self):
        wmap = make_map(["...", "..#", "..."])
        g = build_lattice(wmap, SMALL, 1.0)
        for node in g.nodes:
            expect_b = 0
            dx, dy = HEADING_STEP[node.heading]
            jx, jy = node.ix + dx, node.iy + dy
            if g.has_position(jx, jy) and 0 <= jx < g.nx and 0 <= jy < g.ny:
                dst = LatticeNode(jx, jy, node.heading)
                cand = LatticeEdge(node, dst, "B",
                                   edge_cost("B", node.heading, 0.0, 1.0))
                if validate_edge(wmap, cand, SMALL.footprint_radius, 1.0):
                    expect_b = 1
            a, b = count_kinds(g.neighbors(node))
            assert a == 7 and b == expect_b

    def test_determinism(self):
        wmap = make_map(["....", ".#..", "....", "..#."])
        g1 = build_lattice(wmap, SMALL, 1.0)
        g2 = build_lattice(wmap, SMALL, 1.0)
        assert g1.dump_json() == g2.dump_json()

    def test_type_b_reversibility_in_free_space(self):
        g = build_lattice(free_map(5, 5), SMALL, 1.0)
        for node in g.nodes:
            for e in g.neighbors(node):
                if e.kind != "B":
                    continue
                back = LatticeNode(e.dst.ix, e.dst.iy, (e.dst.heading + 180) % 360)
                target = LatticeNode(node.ix, node.iy, back.heading)
                assert any(be.dst == target for be in g.neighbors(back)
                           if be.kind == "B")


class TestEdgeCost:
    def test_type_a_free_space(self):
        c = edge_cost("A", 0, 0.0, 1.0)
        assert c == CostVector(0.0, 1, 0.0)

    @pytest.mark.parametrize("heading", sorted(AXIS_HEADINGS))
    def test_type_b_axis(self, heading):
        assert edge_cost("B", heading, 0.0, 1.0) == CostVector(0.0, 0, 1.0)

    @pytest.mark.parametrize("heading", [45, 135, 225, 315])
    def test_type_b_diagonal(self, heading):
        c = edge_cost("B", heading, 0.3, 1.0)
        assert c.w1 == 0.3 and c.w2 == 0 and c.w3 == pytest.approx(SQRT2)

    def test_negative_components_rejected(self):
        with pytest.raises(ValueError):
            CostVector(-0.1, 0, 0.0)

    def test_stored_edges_match_rules(self):
        wmap = make_map(["....", ".#..", "....", "...."])
        model = RobotModel(footprint_radius=0.2, camera_clearance_radius=0.9)
        g = build_lattice(wmap, model, 1.0)
        for node in g.nodes:
            for e in g.neighbors(node):
                phi = g.phi[(e.dst.ix, e.dst.iy)]
                assert e.cost == edge_cost(e.kind, node.heading, phi, 1.0)
                if e.kind == "A":
                    assert (e.src.ix, e.src.iy) == (e.dst.ix, e.dst.iy)
                    assert e.src.heading != e.dst.heading
                else:
                    dx, dy = HEADING_STEP[node.heading]
                    assert (e.dst.ix - e.src.ix, e.dst.iy - e.src.iy) == (dx, dy)
                    assert e.src.heading == e.dst.heading
                assert validate_edge(wmap, e, model.footprint_radius, 1.0)


class TestValidateEdge:
    def test_type_a_free(self):
        wmap = free_map(3, 3)
        e = LatticeEdge(LatticeNode(1, 1, 0), LatticeNode(1, 1, 90), "A",
                        edge_cost("A", 0, 0.0, 1.0))
        assert validate_edge(wmap, e, 0.3, 1.0)

    def test_type_b_through_wall(self):
        wmap = make_map([".#."])
        e = LatticeEdge(LatticeNode(0, 0, 0), LatticeNode(2, 0, 0), "B",
                        edge_cost("B", 0, 0.0, 1.0))
        assert not validate_edge(wmap, e, 0.2, 1.0)

    def test_diagonal_squeeze(self):
        # obstacles diagonal-adjacent: the 45-degree move pinches between them
        wmap = make_map(["#.",
                         ".#"])
        e = LatticeEdge(LatticeNode(0, 0, 45), LatticeNode(1, 1, 45), "B",
                        edge_cost("B", 45, 0.0, 1.0))
        rho = 0.15
        assert not validate_edge(wmap, e, rho, 1.0)
        # oracle: dense 1000-sample sweep agrees
        p0 = node_position(LatticeNode(0, 0, 45), wmap, 1.0)
        p1 = node_position(LatticeNode(1, 1, 45), wmap, 1.0)
        dense_free = all(
            footprint_free(wmap, (p0[0] + t * (p1[0] - p0[0]),
                                  p0[1] + t * (p1[1] - p0[1])), rho)
            for t in (i / 999 for i in range(1000)))
        assert not dense_free

    def test_heading_set_is_exact(self):
        with pytest.raises(ValueError):
            LatticeNode(0, 0, 30)
        assert len(HEADINGS) == 8
