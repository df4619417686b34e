"""Simplicial chains over a shared vertex pool and their centers of mass.

A chain is a formal integer combination of oriented k-simplices whose
vertices are indices into a pool of points in ``R^n``.  Orientation follows
the index order: swapping two indices negates the term.

A full-dimensional chain (``k = n``) is *positively oriented* when its total
signed weight is positive.  Each term contributes ``coefficient *
signed_volume`` as its weight, so a positively listed counter-clockwise
triangle has positive weight.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import geom
from . import simplex as sx
from .errors import DegenerateCone, DegenerateSimplex, DimensionMismatch, OrientationError, ValidationError

#: Relative weight below which a WeightedCenter has no point.
WEIGHT_TOL = 1e-12

Term = tuple[tuple[int, ...], int]


@dataclass(frozen=True, eq=False)
class Chain:
    """Integer chain of ``dim``-simplices over ``vertices``.

    ``combinatorial=True`` marks chains whose simplices may be metrically
    degenerate; boundary and cycle checks still work but metric operations
    refuse them.
    """

    vertices: np.ndarray
    terms: tuple[Term, ...]
    dim: Optional[int] = None
    combinatorial: bool = False

    def __post_init__(self):
        pool = geom.as_points(self.vertices) if len(self.vertices) else np.zeros((0, 1))
        pool = pool.copy()
        pool.setflags(write=False)
        terms = tuple((tuple(int(i) for i in idx), int(c)) for idx, c in self.terms)
        dims = {len(idx) - 1 for idx, _ in terms}
        if len(dims) > 1:
            raise ValidationError(f"terms of mixed dimension {sorted(dims)}")
        dim = self.dim
        if dims:
            (k,) = dims
            if dim is not None and dim != k:
                raise ValidationError(f"declared dimension {dim} but terms have dimension {k}")
            dim = k
        if dim is None:
            raise ValidationError("an empty chain needs an explicit dimension")
        if dim < 0:
            raise ValidationError("chain dimension must be >= 0")
        for idx, c in terms:
            if any(i < 0 or i >= len(pool) for i in idx):
                raise ValidationError(f"term {list(idx)} references a vertex outside the pool of {len(pool)}")
        object.__setattr__(self, "vertices", pool)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "dim", dim)

    @property
    def ambient_dim(self) -> int:
        return self.vertices.shape[1]

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.terms == other.terms
            and self.combinatorial == other.combinatorial
            and self.vertices.shape == other.vertices.shape
            and bool(np.array_equal(self.vertices, other.vertices))
        )

    def __neg__(self):
        return self.replace_terms([(idx, -c) for idx, c in self.terms])

    def __add__(self, other: "Chain") -> "Chain":
        """Sum of two chains on the same pool (canonicalized)."""
        if self.vertices.shape != other.vertices.shape or not np.array_equal(self.vertices, other.vertices):
            raise ValidationError("chains must share one vertex pool to be added")
        if self.dim != other.dim:
            raise ValidationError("chains must have equal dimension to be added")
        return canonicalize(self.replace_terms(self.terms + other.terms))

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def replace_terms(self, terms: Iterable[Term], dim: Optional[int] = None) -> "Chain":
        return Chain(self.vertices, tuple(terms), self.dim if dim is None else dim, self.combinatorial)

    def simplex_vertices(self, idx: Sequence[int]) -> np.ndarray:
        return self.vertices[list(idx)]

    def scale(self) -> float:
        """Bounding-box diagonal of the referenced vertices."""
        used = sorted({i for idx, _ in self.terms for i in idx})
        if not used:
            return 0.0
        p = self.vertices[used]
        return float(np.linalg.norm(p.max(axis=0) - p.min(axis=0)))

    def is_empty(self) -> bool:
        return not self.terms


@dataclass(frozen=True, eq=False)
class WeightedCenter:
    weight: float
    moment: np.ndarray
    point: Optional[np.ndarray] = None

    @property
    def has_point(self) -> bool:
        return self.point is not None


def _sort_sign(idx: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Sorted indices and the sign of the sorting permutation (0 on repeats)."""
    if len(set(idx)) != len(idx):
        return tuple(sorted(idx)), 0
    inversions = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
    return tuple(sorted(idx)), -1 if inversions % 2 else 1


def canonicalize(c: Chain) -> Chain:
    """Sort each term, merge equal vertex sets, drop zero and repeated-vertex terms."""
    acc: dict[tuple[int, ...], int] = {}
    for idx, coef in c.terms:
        key, sign = _sort_sign(idx)
        if sign == 0:
            continue
        acc[key] = acc.get(key, 0) + sign * coef
    return c.replace_terms(sorted((k, v) for k, v in acc.items() if v != 0))


def boundary(c: Chain) -> Chain:
    if c.dim < 1:
        raise ValidationError("boundary needs a chain of dimension >= 1")
    out = []
    for idx, coef in c.terms:
        for i in range(len(idx)):
            out.append((idx[:i] + idx[i + 1:], coef if i % 2 == 0 else -coef))
    return canonicalize(c.replace_terms(out, dim=c.dim - 1))


def is_cycle(c: Chain) -> bool:
    if c.dim == 0:
        # augmented boundary: a 0-chain is a cycle when its coefficients sum to zero
        return sum(coef for _, coef in c.terms) == 0
    return boundary(c).is_empty()


def _find_vertex(pool: np.ndarray, p: np.ndarray, tol: float) -> Optional[int]:
    if len(pool) == 0:
        return None
    dist = np.linalg.norm(pool - p, axis=1)
    i = int(np.argmin(dist))
    return i if dist[i] <= tol else None


def cone_fill(cycle: Chain, apex) -> Chain:
    """Cone over ``cycle`` from ``apex``: each term ``(s, c)`` becomes ``([apex, *s], c)``.

    An apex equal to a pool vertex reuses that vertex, so terms through it
    drop out and the result is a fan triangulation.
    """
    apex = geom.as_point(apex)
    if apex.shape != (cycle.ambient_dim,):
        raise DimensionMismatch(f"apex in R^{apex.size}, chain in R^{cycle.ambient_dim}")
    if not is_cycle(cycle):
        raise ValidationError("cone_fill expects a cycle")
    if cycle.dim + 1 > cycle.ambient_dim:
        raise DimensionMismatch("the cone would exceed the ambient dimension")
    tol = 1e-12 * max(cycle.scale(), 1.0)
    a = _find_vertex(cycle.vertices, apex, tol)
    pool = cycle.vertices
    if a is None:
        pool = np.vstack([pool, apex[None, :]])
        a = len(pool) - 1
    out = Chain(pool, tuple(((a,) + idx, coef) for idx, coef in cycle.terms), cycle.dim + 1, cycle.combinatorial)
    out = canonicalize(out)
    if not out.combinatorial:
        for idx, _ in out.terms:
            if geom.is_degenerate(out.simplex_vertices(idx)):
                raise DegenerateCone(f"cone simplex {list(idx)} is degenerate for apex {apex.tolist()}")
    return out


def _aggregate(c: Chain, point_of: Callable[[sx.Simplex], np.ndarray]) -> WeightedCenter:
    if c.combinatorial:
        raise DegenerateSimplex("metric operations are not defined on a combinatorial-only chain")
    if c.dim != c.ambient_dim:
        raise DimensionMismatch(f"needs a full-dimensional chain; got dimension {c.dim} in R^{c.ambient_dim}")
    n = c.ambient_dim
    weights = np.zeros(len(c.terms))
    moments = np.zeros((len(c.terms), n))
    for t, (idx, coef) in enumerate(c.terms):
        v = c.simplex_vertices(idx)
        try:
            s = sx.Simplex(v)
        except DegenerateSimplex as exc:
            raise DegenerateSimplex(f"term {list(idx)}: {exc}") from None
        w = coef * geom.signed_volume(v)
        weights[t] = w
        moments[t] = w * point_of(s)
    weight = math.fsum(weights)
    moment = np.array([math.fsum(moments[:, j]) for j in range(n)])
    point = None
    if abs(weight) > WEIGHT_TOL * c.scale() ** c.dim:
        point = moment / weight
    return WeightedCenter(weight, moment, point)


def ccm(c: Chain) -> WeightedCenter:
    """Circumcenter of mass: circumcenters weighted by signed volumes."""
    return _aggregate(c, lambda s: sx.circumsphere(s).center)


def centroid_of_mass(c: Chain) -> WeightedCenter:
    """Centroids weighted by signed volumes (center of mass of the solid)."""
    return _aggregate(c, sx.centroid)


def euler_point(c: Chain, t: float) -> WeightedCenter:
    """Aggregate of ``(1 - t) * circumcenter + t * centroid`` per simplex."""
    return _aggregate(c, lambda s: (1.0 - t) * sx.circumsphere(s).center + t * sx.centroid(s))


def default_apex(cycle: Chain) -> np.ndarray:
    used = sorted({i for idx, _ in cycle.terms for i in idx})
    return cycle.vertices[used].mean(axis=0)


def perturbed_apex(cycle: Chain) -> np.ndarray:
    """Default apex moved by ``1e-3 * scale`` along a direction fixed by the pool bytes."""
    digest = hashlib.sha256(np.ascontiguousarray(cycle.vertices).tobytes()).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    u = rng.normal(size=cycle.ambient_dim)
    u /= np.linalg.norm(u)
    return default_apex(cycle) + 1e-3 * cycle.scale() * u


def fill(cycle: Chain, apex=None) -> Chain:
    """Cone filling of an (n-1)-cycle, retrying once with a perturbed apex."""
    if apex is not None:
        return cone_fill(cycle, apex)
    try:
        return cone_fill(cycle, default_apex(cycle))
    except DegenerateCone:
        return cone_fill(cycle, perturbed_apex(cycle))


def _require_boundary_cycle(cycle: Chain):
    if cycle.dim != cycle.ambient_dim - 1:
        raise DimensionMismatch(f"needs an (n-1)-cycle; got dimension {cycle.dim} in R^{cycle.ambient_dim}")
    if not is_cycle(cycle):
        raise ValidationError("chain is not a cycle")


def ccm_cycle_boundary(cycle: Chain, apex=None) -> WeightedCenter:
    """Circumcenter of mass of an (n-1)-cycle, via a cone filling."""
    _require_boundary_cycle(cycle)
    return ccm(fill(cycle, apex))


def cycle_moment_residuals(cycle: Chain) -> tuple[np.ndarray, np.ndarray]:
    """``(sum c Vol o, sum c Vol (m - o))`` over a full-dimensional cycle; both vanish."""
    if not is_cycle(cycle):
        raise ValidationError("chain is not a cycle")
    if cycle.is_empty():
        z = np.zeros(cycle.ambient_dim)
        return z, z.copy()
    circ = ccm(cycle).moment
    cent = centroid_of_mass(cycle).moment
    return circ, cent - circ


def facet_edge_square_sums(c: Chain) -> list[float]:
    return [sx.edge_square_sum(c.simplex_vertices(idx)) for idx, _ in c.terms]


def facet_radius_form(c: Chain) -> list[float]:
    """``R^2 - |o m|^2`` of every term's own circumsphere."""
    return [sx.radius_form(c.simplex_vertices(idx)) for idx, _ in c.terms]


def minkowski_residual(c: Chain) -> np.ndarray:
    """``sum c_i Vol(facet_i) n_i`` over an oriented closed hypersurface.

    A term's normal comes from its index order (see ``geom.oriented_normal``);
    on a consistently oriented boundary all normals point the same way
    (outward for a positively oriented solid).
    """
    _require_hypersurface(c)
    if not is_cycle(c):
        raise OrientationError("facets are not consistently oriented (the boundary of the chain is not empty)")
    n = c.ambient_dim
    parts = np.zeros((len(c.terms), n))
    for t, (idx, coef) in enumerate(c.terms):
        v = c.simplex_vertices(idx)
        if geom.is_degenerate(v):
            raise DegenerateSimplex(f"facet {list(idx)} is degenerate")
        parts[t] = coef * geom.oriented_normal(v) / math.factorial(n - 1)
    return np.array([math.fsum(parts[:, j]) for j in range(n)])


def _require_hypersurface(c: Chain):
    if c.dim != c.ambient_dim - 1:
        raise DimensionMismatch(f"needs an (n-1)-chain; got dimension {c.dim} in R^{c.ambient_dim}")
