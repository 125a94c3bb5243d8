"""Exact integration of polynomials over rational polytopes.

Interior integrals use the lattice Euclidean measure; face integrals use
the measure normalized by the saturated direction lattice of the face, so
no square roots ever appear.  Each polytope is triangulated by pulling
from its lexicographically smallest vertex, each simplex is mapped to the
standard simplex by an exact affine substitution, and monomials are
integrated by the closed form

    integral over the standard simplex of t^a  =  a_1! ... a_s! / (s + |a|)!

scaled by the absolute determinant of the map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import KstabError
from .exact import MPoly, Vec, det, dot, vsub
from .polytope import (OUTER, Facet, Polytope, facet_polytope, facet_vertices,
                       _hull_ring_2d)


@dataclass(frozen=True)
class SimplexDecomposition:
    simplices: tuple[tuple[Vec, ...], ...]
    pulled_from: Vec


def triangulate(P: Polytope, pull: Vec | None = None) -> SimplexDecomposition:
    """Pulling triangulation of a full-dimensional polytope.

    Deterministic: the pulling vertex defaults to the lexicographically
    smallest one.  The optional `pull` argument exists so tests can verify
    triangulation independence of the integrals.
    """
    if not P.is_full_dim:
        raise KstabError("triangulate expects the full-dimensional form")
    v0 = P.vertices[0] if pull is None else tuple(Fraction(x) for x in pull)
    if v0 not in P.vertices:
        raise KstabError("pulling point must be a vertex")
    d = P.dim
    if d == 0:
        raise KstabError("cannot triangulate a point")
    if d == 1:
        return SimplexDecomposition((tuple(sorted(P.vertices)),), v0)
    simplices: list[tuple[Vec, ...]] = []
    for facet in P.facets:
        if dot(facet.normal, v0) == facet.offset:
            continue  # facets through the pulling vertex contribute nothing
        fverts = facet_vertices(P, facet)
        if d == 2:
            simplices.append((v0, fverts[0], fverts[1]))
        else:
            for tri in _facet_triangles_3d(P, facet):
                simplices.append((v0,) + tri)
    return SimplexDecomposition(tuple(simplices), v0)


def _facet_triangles_3d(P: Polytope, facet: Facet) -> list[tuple[Vec, Vec, Vec]]:
    """Fan triangulation of a 2-face of a 3-polytope, pulled from its
    lexicographically smallest vertex."""
    F = facet_polytope(P, facet)
    ring = _hull_ring_2d(list(F.inner.vertices))
    lift = {t: v for t, v in _chart_pairs(F)}
    ring3 = [lift[t] for t in ring]
    base = min(ring3)
    bi = ring3.index(base)
    ring3 = ring3[bi:] + ring3[:bi]
    return [(ring3[0], ring3[i], ring3[i + 1]) for i in range(1, len(ring3) - 1)]


def _chart_pairs(F: Polytope):
    from .polytope import affine_coords
    for v in F.vertices:
        t = affine_coords(F.chart_anchor, F.chart_basis, v)
        yield t, v


def integrate_simplex(verts: tuple[Vec, ...], g: MPoly) -> Fraction:
    """Exact integral of g over a full-dimensional simplex."""
    d = len(verts) - 1
    base = verts[0]
    cols = [vsub(v, base) for v in verts[1:]]
    jac = abs(det([[cols[j][i] for j in range(d)] for i in range(d)]))
    if jac == 0:
        return Fraction(0)
    rows = [[cols[j][i] for j in range(d)] for i in range(len(base))]
    gsub = g.substitute_affine(rows, base)
    total = Fraction(0)
    for e, c in gsub.terms.items():
        num = 1
        for k in e:
            num *= math.factorial(k)
        total += c * Fraction(num, math.factorial(d + sum(e)))
    return jac * total


def integrate_poly(P: Polytope, g: MPoly) -> Fraction:
    """Integral of g over P with the lattice measure of its affine hull.

    Full-dimensional polytopes use the ambient lattice measure; faces are
    pulled back through their saturated-lattice chart (this is exactly the
    face measure), and points evaluate g (counting measure).
    """
    if g.nvars != P.ambient:
        raise KstabError("polynomial and polytope dimensions disagree")
    if P.dim == 0:
        return g.evaluate(P.vertices[0])
    if P.is_full_dim:
        dec = triangulate(P)
        return sum((integrate_simplex(s, g) for s in dec.simplices), Fraction(0))
    rows = [[Fraction(P.chart_basis[j][i]) for j in range(P.dim)]
            for i in range(P.ambient)]
    inner_g = g.substitute_affine(rows, P.chart_anchor)
    return integrate_poly(P.inner, inner_g)


def face_integral(F: Polytope, g: MPoly) -> Fraction:
    """Integral over a face with the lattice-normalized face measure."""
    if F.is_full_dim and F.dim > 0:
        raise KstabError("face_integral expects a lower-dimensional face or a point")
    return integrate_poly(F, g)


def boundary_integral(P: Polytope, g: MPoly, selector: str = OUTER) -> Fraction:
    """Sum of face integrals over the facets matching the selector.

    Selector ``outer`` (default) restricts to facets inside the boundary
    of the uncut polytope, ``wall`` to chamber-wall facets, ``all`` takes
    every facet.
    """
    if selector not in ("outer", "wall", "all"):
        raise KstabError(f"unknown selector {selector!r}")
    total = Fraction(0)
    for f in P.facets:
        if selector != "all" and f.tag != selector:
            continue
        total += face_integral(facet_polytope(P, f), g)
    return total


def volume(P: Polytope) -> Fraction:
    return integrate_poly(P, MPoly.const(P.ambient, 1))
