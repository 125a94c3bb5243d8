"""Example generators: wonderful-compactification polytopes, the projective
linear group simplices, and the two corner-cut destabilizer families.

The corner-cut pattern replaces every polygon vertex v by three points
measured in the vertex-local frame of the two primitive incident edge
directions u, w:

    B = v + u/4,   D = v + r*(u + w),   C = v + w/4,

with r = (n-2)/(4*(3*n-5)).  This is the unique affine-equivariant
transplantation of the classical toric corner cut, recorded in the output
metadata.  Generated polytopes stay in their natural (rational)
coordinates so the crease parameter epsilon keeps its meaning across the
scan grid; checks that need lattice data clear denominators and report
the factor.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import KstabError, ValidationError
from .exact import Vec, as_vec, primitive, rat, rat_str, vadd, vscale, vsub
from .polytope import (Polytope, hull_and_facets, polygon_from_ring, ring_of)
from .problemfile import CreaseSpec, Problem
from .rootsys import RootSystem, build_root_system, weyl_orbit

CUT = Fraction(1, 4)  # corner cut parameter along each incident edge


def corner_ratio(n: int) -> Fraction:
    """The diagonal cut depth r_n = (n-2)/(4*(3n-5))."""
    if n < 3:
        raise KstabError("the corner family needs n >= 3")
    return Fraction(n - 2, 4 * (3 * n - 5))


def gen_wonderful(label: str, point) -> Problem:
    """Hull of the Weyl orbit of a point strictly inside the chamber."""
    rs = build_root_system(label)
    pt = as_vec(point)
    if rs.is_toric:
        raise KstabError("wonderful polytopes need a nontrivial Weyl group")
    pairings = [sum(Fraction(w[i]) * pt[i] for i in range(rs.rank))
                for w in rs.wall_normals]
    if any(v == 0 for v in pairings):
        raise ValidationError("point lies on a chamber wall")
    if any(v < 0 for v in pairings):
        raise ValidationError("point lies outside the positive chamber")
    orbit = weyl_orbit(rs, pt)
    return Problem(
        root_system=rs.label, vertices=tuple(sorted(orbit)),
        options=(("family", "wonderful"),
                 ("point", " ".join(rat_str(x) for x in pt))))


def gen_pgln_simplex(n: int, scale=1) -> Problem:
    """The invariant simplex with one vertex on a chamber ray (n in {2, 3})."""
    m = rat(scale)
    if m <= 0:
        raise KstabError("scale must be positive")
    if n == 2:
        rs = build_root_system("A1")
        seed: Vec = (m,)
    elif n == 3:
        rs = build_root_system("A2")
        seed = (m, Fraction(0))
    else:
        raise KstabError("simplex generator supports n in {2, 3}")
    orbit = weyl_orbit(rs, seed)
    return Problem(
        root_system=rs.label, vertices=tuple(sorted(orbit)),
        options=(("family", "pgln-simplex"), ("n", str(n)),
                 ("scale", rat_str(m))))


def _corner_cut_ring(ring: list[Vec], r: Fraction) -> list[Vec]:
    out: list[Vec] = []
    m = len(ring)
    for i, v in enumerate(ring):
        p, q = ring[i - 1], ring[(i + 1) % m]
        u_prev = as_vec(primitive(vsub(p, v)))
        u_next = as_vec(primitive(vsub(q, v)))
        out.append(vadd(v, vscale(CUT, u_prev)))
        out.append(vadd(v, vscale(r, vadd(u_prev, u_next))))
        out.append(vadd(v, vscale(CUT, u_next)))
    return out


def gen_donaldson72(n: int, smooth: bool = False, delta=None) -> Problem:
    """The corner-cut triangle family (9-gon before smoothing).

    The crease corner is the diagonal cut point (r_n, r_n) at the origin
    corner; the pattern is applied at all three triangle corners.  With
    smooth=True the polytope is rescaled to lattice coordinates and every
    non-smooth corner is resolved; the smoothed output carries no crease
    spec (the designated corner is cut away by the resolution).
    """
    r = corner_ratio(n)
    triangle = [as_vec(v) for v in [(0, 0), (1, 0), (0, 1)]]
    ring = _corner_cut_ring(triangle, r)
    poly = polygon_from_ring(ring)
    options = [("family", "donaldson72"), ("n", str(n)),
               ("corner_ratio", rat_str(r)),
               ("pattern", "corner cuts at 1/4 and r_n in edge frames, all corners")]
    crease = CreaseSpec(corner=(r, r), epsilon=Fraction(1, 16),
                        slope=Fraction(1), symmetrize=False)
    if smooth:
        poly, scale = _smooth_to_delzant(poly, delta)
        options.append(("smoothing_scale", str(scale)))
        options.append(("smoothing_rule", "minimal continued-fraction resolution "
                                          "of each non-smooth normal cone"))
        crease = None
    return Problem(root_system="toric:2",
                   vertices=tuple(sorted(poly.vertices)),
                   crease=crease, options=tuple(options))


def gen_pgl3_family(s, n: int, smooth: bool = False, delta=None) -> Problem:
    """Hexagon orbit of (s, s) with the corner-cut pattern at all six
    vertices; exactly Weyl-invariant by construction (18-gon).

    The crease corner is the diagonal cut point (s - r_n, s - r_n).
    """
    s = rat(s)
    if s < 1:
        raise ValidationError("s too small: corner cuts need edges of length >= 1")
    r = corner_ratio(n)
    rs = build_root_system("A2")
    hexagon = hull_and_facets(weyl_orbit(rs, (s, s)))
    ring = ring_of(hexagon)
    poly = polygon_from_ring(_corner_cut_ring(ring, r))
    options = [("family", "pgl3"), ("s", rat_str(s)), ("n", str(n)),
               ("corner_ratio", rat_str(r)),
               ("pattern", "corner cuts at 1/4 and r_n in edge frames, all corners")]
    crease = CreaseSpec(corner=(s - r, s - r), epsilon=Fraction(1, 16),
                        slope=Fraction(1), symmetrize=True)
    if smooth:
        poly, scale = _smooth_to_delzant(poly, delta)
        options.append(("smoothing_scale", str(scale)))
        options.append(("smoothing_rule", "minimal continued-fraction resolution "
                                          "of each non-smooth normal cone"))
        crease = None
    return Problem(root_system="A2",
                   vertices=tuple(sorted(poly.vertices)),
                   crease=crease, options=tuple(options))


def _smooth_to_delzant(poly: Polytope, delta):
    from .polytope import lattice_scale, dilate, make_delzant_2d
    pre = lattice_scale(poly)
    lattice = dilate(poly, pre) if pre != 1 else poly
    result = make_delzant_2d(lattice, delta)
    return result.polytope, pre * result.scale


# ---------------------------------------------------------------------------
# random instance corpus (seeded, for tests and the acceptance suite)

def random_w_invariant_polytope(rs: RootSystem, rng: random.Random,
                                max_coord: int = 4, max_vertices: int = 12) -> Polytope:
    """Random full-dimensional Weyl-invariant lattice polytope."""
    for _ in range(200):
        base = [tuple(rng.randint(-max_coord, max_coord) for _ in range(rs.rank))
                for _ in range(2 if not rs.is_toric else rs.rank + 3)]
        points: set[Vec] = set()
        for b in base:
            points.update(weyl_orbit(rs, b))
        if len(points) <= rs.rank:
            continue
        P = hull_and_facets(points)
        if P.is_full_dim and len(P.vertices) <= max_vertices:
            if rs.is_toric:
                return P
            # the chamber cut needs the origin inside
            from .polytope import contains
            if contains(P, (0,) * rs.rank):
                return P
    raise KstabError("could not sample a suitable invariant polytope")
