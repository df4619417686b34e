"""Seeded random and fixed test shapes: simplices, cycles, polytopes, sphere triangulations.

Every random generator takes a ``numpy.random.Generator`` so callers control
reproducibility.  Polytope boundaries come out positively oriented (facet
normals outward).
"""
from __future__ import annotations

import math

import numpy as np
from scipy.spatial import ConvexHull
from scipy.stats import special_ortho_group

from . import geom
from .chain import Chain, boundary, canonicalize, cone_fill
from .errors import DegenerateSimplex


def random_simplex(rng: np.random.Generator, d: int, n: int | None = None, faces: bool = True) -> np.ndarray:
    """Gaussian ``d``-simplex in ``R^n`` (default ``n = d``), resampled until it and its facets are nondegenerate."""
    n = d if n is None else n
    while True:
        v = rng.normal(size=(d + 1, n))
        if geom.is_degenerate(v):
            continue
        if faces and d >= 2 and any(geom.is_degenerate(np.delete(v, i, axis=0)) for i in range(d + 1)):
            continue
        return v


def random_rotation(rng: np.random.Generator, n: int) -> np.ndarray:
    if n == 1:
        return np.ones((1, 1))
    return special_ortho_group.rvs(n, random_state=rng)


def hull_boundary(points: np.ndarray) -> Chain:
    """Outward-oriented simplicial boundary of the convex hull of ``points``.

    The pool is reduced to the hull vertices.  Non-simplicial hull facets are
    split by qhull ("Qt"), which is harmless for everything downstream.
    """
    points = np.asarray(points, dtype=float)
    hull = ConvexHull(points, qhull_options="Qt")
    used = np.unique(hull.simplices)
    remap = {int(old): new for new, old in enumerate(used)}
    pool = points[used]
    inside = pool.mean(axis=0)
    terms = []
    for facet in hull.simplices:
        idx = [remap[int(i)] for i in facet]
        if geom.signed_volume(np.vstack([inside, pool[idx]])) < 0:
            idx[0], idx[1] = idx[1], idx[0]
        terms.append((tuple(idx), 1))
    return canonicalize(Chain(pool, tuple(terms)))


def random_convex_polytope(rng: np.random.Generator, d: int, npts: int | None = None) -> Chain:
    npts = npts or rng.integers(d + 4, 4 * d + 12)
    while True:
        try:
            return hull_boundary(rng.normal(size=(npts, d)))
        except DegenerateSimplex:
            continue


def random_sphere_points(rng: np.random.Generator, npts: int, d: int) -> np.ndarray:
    x = rng.normal(size=(npts, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def random_inscribed_polytope(rng: np.random.Generator, d: int, npts: int | None = None):
    """Hull boundary of random points on a random sphere; returns ``(chain, center, radius)``."""
    npts = npts or int(rng.integers(d + 4, 4 * d + 12))
    center = rng.normal(size=d) * 3.0
    radius = float(rng.uniform(0.5, 4.0))
    pts = center + radius * random_sphere_points(rng, npts, d)
    return hull_boundary(pts), center, radius


def central_triangulation_cycle(rng: np.random.Generator, d: int) -> Chain:
    """A simplex split from an interior point, minus the simplex itself."""
    v = random_simplex(rng, d)
    w = rng.dirichlet(np.ones(d + 1))
    p = w @ v
    outer = canonicalize(Chain(v, ((tuple(range(d + 1)), 1),)))
    inner = cone_fill(boundary(outer), p)
    pool = inner.vertices
    outer = Chain(pool, outer.terms)
    return inner - outer


def retriangulation_cycle(rng: np.random.Generator, d: int) -> Chain:
    """Difference of two fan triangulations (from different vertices) of a random convex polytope.

    In the plane these are two diagonal triangulations of a convex polygon.
    """
    while True:
        surface = random_convex_polytope(rng, d)
        used = sorted({i for idx, _ in surface.terms for i in idx})
        a, b = rng.choice(used, size=2, replace=False)
        cycle = cone_fill(surface, surface.vertices[a]) - cone_fill(surface, surface.vertices[b])
        if not cycle.is_empty():
            return cycle


def polygon_chain(points) -> Chain:
    """Closed polygon as a 1-cycle with edges ``[i, i+1 mod n]``."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    return Chain(pts, tuple(((i, (i + 1) % n), 1) for i in range(n)))


def _segments_cross(p, q, r, s) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(r, s, p), orient(r, s, q)
    d3, d4 = orient(p, q, r), orient(p, q, s)
    return d1 * d2 <= 0 and d3 * d4 <= 0


def is_simple_polygon(points: np.ndarray) -> bool:
    n = len(points)
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_cross(points[i], points[(i + 1) % n], points[j], points[(j + 1) % n]):
                return False
    return True


def equilateral_polygon(rng: np.random.Generator, n: int, max_tries: int = 1_000_000) -> np.ndarray:
    """Simple closed polygon with ``n`` unit edges (vertices as rows).

    Draws ``n - 2`` uniform unit steps, then closes the walk with two unit
    edges (the first of the two circle intersections).  Rejects walks that
    cannot close or that self-intersect.
    """
    if n < 3:
        raise ValueError("a polygon needs at least 3 edges")
    for _ in range(max_tries):
        theta = rng.uniform(0.0, 2.0 * math.pi, size=n - 2)
        steps = np.column_stack([np.cos(theta), np.sin(theta)])
        walk = np.vstack([np.zeros(2), np.cumsum(steps, axis=0)])
        end = walk[-1]
        dist = float(np.linalg.norm(end))
        if dist < 1e-3 or dist > 2.0 - 1e-3:
            continue
        half = end / 2.0
        perp = np.array([-end[1], end[0]]) / dist
        q = half + perp * math.sqrt(1.0 - dist * dist / 4.0)
        pts = np.vstack([walk, q[None, :]])
        if is_simple_polygon(pts):
            return pts
    raise RuntimeError(f"no simple equilateral {n}-gon found in {max_tries} tries")


def unit_bipyramid() -> Chain:
    """Triangular bipyramid with all nine edges of length 1."""
    r = 1.0 / math.sqrt(3.0)
    base = [(r * math.cos(a), r * math.sin(a), 0.0) for a in (0.0, 2 * math.pi / 3, 4 * math.pi / 3)]
    h = math.sqrt(2.0 / 3.0)
    return hull_boundary(np.array(base + [(0.0, 0.0, h), (0.0, 0.0, -h)]))


def octahedron_vertices() -> np.ndarray:
    e = np.eye(3)
    return np.vstack([e, -e])


def icosahedron_vertices() -> np.ndarray:
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    pts = []
    for a in (-1.0, 1.0):
        for b in (-phi, phi):
            pts += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    v = np.array(pts)
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def regular_tetrahedron() -> np.ndarray:
    """Unit-edge regular tetrahedron."""
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    return v / (2.0 * math.sqrt(2.0))


def sphere_triangulation(vertices: np.ndarray) -> Chain:
    """Hull boundary of ``vertices`` projected to the unit sphere (origin must be interior)."""
    chain = hull_boundary(vertices)
    pool = chain.vertices / np.linalg.norm(chain.vertices, axis=1, keepdims=True)
    return Chain(pool, chain.terms)


def random_sphere_triangulation(rng: np.random.Generator, npts: int | None = None) -> Chain:
    """Central projection of a random convex polytope containing the origin."""
    npts = npts or int(rng.integers(8, 60))
    while True:
        pts = rng.normal(size=(npts, 3)) * rng.uniform(0.5, 2.0, size=3)
        pts -= pts.mean(axis=0)
        hull = ConvexHull(pts)
        # origin strictly inside every facet plane
        if np.all(hull.equations[:, -1] < -1e-3):
            return sphere_triangulation(pts)


CUBE_OFF = """OFF
8 6 12
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
4 0 3 2 1
4 4 5 6 7
4 0 1 5 4
4 1 2 6 5
4 2 3 7 6
4 3 0 4 7
"""
