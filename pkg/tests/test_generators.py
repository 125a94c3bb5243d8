from fractions import Fraction as F

import pytest

from kstab.errors import KstabError, ValidationError
from kstab.generators import (corner_ratio, gen_donaldson72, gen_pgl3_family,
                              gen_pgln_simplex, gen_wonderful)
from kstab.polytope import (chamber_intersect, dilate, hull_and_facets,
                            is_delzant, is_w_invariant, lattice_scale,
                            make_delzant_2d, wall_vertex_check)
from kstab.problemfile import parse_problem, serialize_problem
from kstab.rootsys import build_root_system


def V(*xs):
    return tuple(F(x) for x in xs)


class TestWonderful:
    def test_a2_hexagon_and_4gon(self):
        prob = gen_wonderful("A2", (1, 1))
        P = hull_and_facets(prob.vertices)
        assert len(P.vertices) == 6
        rs = build_root_system("A2")
        Pp = chamber_intersect(rs, P)
        assert len(Pp.vertices) == 4

    def test_a1_interval(self):
        prob = gen_wonderful("A1", (1,))
        assert set(prob.vertices) == {V(-1), V(1)}

    def test_regular_point_full_orbit(self):
        prob = gen_wonderful("A2", (2, 1))
        assert len(prob.vertices) == 6
        assert len(set(prob.vertices)) == 6

    def test_wall_point_rejected(self):
        with pytest.raises(ValidationError):
            gen_wonderful("A2", (1, 0))


class TestPglnSimplex:
    def test_n2_symmetric_interval(self):
        prob = gen_pgln_simplex(2)
        assert set(prob.vertices) == {V(-1), V(1)}

    def test_n3_reflected_triangle(self):
        prob = gen_pgln_simplex(3)
        P = hull_and_facets(prob.vertices)
        assert len(P.vertices) == 3
        rs = build_root_system("A2")
        assert is_w_invariant(rs, P)[0]
        # the ray vertex sits on a wall, as the construction demands
        assert not wall_vertex_check(rs, P)[0]

    def test_n2_scaled(self):
        prob = gen_pgln_simplex(2, scale=5)
        assert set(prob.vertices) == {V(-5), V(5)}

    def test_unsupported(self):
        with pytest.raises(KstabError):
            gen_pgln_simplex(4)


class TestDonaldson72:
    def test_corner_ratio_n10(self):
        assert corner_ratio(10) == F(2, 25)

    def test_corner_ratio_limit_bound(self):
        # r_n increases toward 1/12; always strictly below 1/4
        for n in (3, 10, 100, 1000):
            assert corner_ratio(n) < F(1, 4)
            assert corner_ratio(n) < F(1, 12)

    def test_nine_vertices(self):
        prob = gen_donaldson72(10)
        assert len(prob.vertices) == 9
        assert V(F(2, 25), F(2, 25)) in prob.vertices

    def test_delzant_before_and_after_smoothing(self):
        rough = gen_donaldson72(10)
        P = hull_and_facets(rough.vertices)
        scale = lattice_scale(P)
        rep = is_delzant(dilate(P, scale))
        assert not rep.ok
        failing = {v for v, _ in rep.failures}
        # the quarter-cut (B/C type) vertices fail the determinant test
        assert V(25, 0) in failing and V(0, 25) in failing
        smooth = gen_donaldson72(10, smooth=True)
        assert is_delzant(hull_and_facets(smooth.vertices)).ok
        assert smooth.option("smoothing_scale") is not None

    def test_n_too_small(self):
        with pytest.raises(KstabError):
            gen_donaldson72(2)

    def test_roundtrip(self):
        prob = gen_donaldson72(20)
        assert parse_problem(serialize_problem(prob)) == prob


class TestPgl3Family:
    def test_18_vertices_invariant(self):
        prob = gen_pgl3_family(10, 10)
        P = hull_and_facets(prob.vertices)
        assert len(P.vertices) == 18
        rs = build_root_system("A2")
        assert is_w_invariant(rs, P)[0]

    def test_corner_on_diagonal(self):
        prob = gen_pgl3_family(10, 10)
        assert prob.crease.corner[0] == prob.crease.corner[1]

    def test_wall_vertex_check_for_reasonable_s(self):
        rs = build_root_system("A2")
        for s in (1, 5, 20):
            P = hull_and_facets(gen_pgl3_family(s, 10).vertices)
            assert wall_vertex_check(rs, P)[0]

    def test_s_too_small(self):
        with pytest.raises(ValidationError):
            gen_pgl3_family(F(1, 2), 10)

    def test_invariant_for_every_grid_parameter(self):
        rs = build_root_system("A2")
        for s in (1, 5):
            for n in (3, 10, 50):
                P = hull_and_facets(gen_pgl3_family(s, n).vertices)
                assert is_w_invariant(rs, P)[0]

    def test_smoothing_keeps_invariance(self):
        rs = build_root_system("A2")
        prob = gen_pgl3_family(5, 10)
        P = hull_and_facets(prob.vertices)
        res = make_delzant_2d(dilate(P, lattice_scale(P)))
        assert is_delzant(res.polytope).ok
        assert is_w_invariant(rs, res.polytope)[0]
        assert wall_vertex_check(rs, res.polytope)[0]


class TestRoundTrips:
    def test_every_family_roundtrips(self):
        problems = [gen_wonderful("A2", (2, 1)),
                    gen_wonderful("A1", (3,)),
                    gen_pgln_simplex(2, scale=2),
                    gen_pgln_simplex(3),
                    gen_donaldson72(10),
                    gen_donaldson72(10, smooth=True),
                    gen_pgl3_family(5, 10),
                    gen_pgl3_family(F(3, 2), 7)]
        for prob in problems:
            assert parse_problem(serialize_problem(prob)) == prob
