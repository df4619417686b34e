"""Spherical circumcenter of mass through the Euclidean lift.

A spherical d-simplex with unit vertices ``v_0..v_d`` in ``R^(d+1)`` is lifted
to the Euclidean (d+1)-simplex ``[0, v_0, ..., v_d]``.  Its circumcenter
``o'`` and volume give the weighted point ``(o'/|o'|, Vol * |o'|)``, which is
just the vector ``Vol * o'``.

Weighted points are summed as vectors.  The result is kept as that raw
vector so that a sum of zero weight (the expected outcome for a cycle
covering the sphere) needs no direction.

In a chain, each term contributes ``coefficient * orientation * Vol * o'``
where ``orientation`` is the sign of ``det[v_0, ..., v_d]``.  This makes the
sum independent of how each term's vertices are listed.  For terms listed in
positive order, it reduces to ``coefficient * Vol * o'``.

The weight ``Vol(lift) * |o'|`` equals ``Vol(chordal simplex) / (2(d+1))``,
where the chordal simplex is the flat simplex on the same vertices.  It does
*not* equal the spherical volume divided by ``2(d+1)``: for a quarter arc the
weight is ``sqrt(2)/4``, while the arc length over 4 is ``pi/8``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from . import geom
from . import simplex as sx
from .chain import Chain, is_cycle
from .errors import DegenerateSimplex, DimensionMismatch, UnsupportedDimension, ValidationError

UNIT_TOL = 1e-12
MASS_TOL = 1e-12


def as_direction(x) -> np.ndarray:
    p = geom.as_point(x)
    if abs(np.linalg.norm(p) - 1.0) > UNIT_TOL:
        raise ValidationError(f"not a unit vector: |x| = {np.linalg.norm(p)!r}")
    return p


@dataclass(frozen=True, eq=False)
class SphericalSimplex:
    """``d+1`` linearly independent unit vectors in ``R^(d+1)``."""

    vertices: np.ndarray

    def __post_init__(self):
        v = geom.as_points(self.vertices).copy()
        m, n = v.shape
        if m != n:
            raise DimensionMismatch(f"a spherical simplex on S^{n - 1} needs {n} vertices; got {m}")
        for row in v:
            as_direction(row)
        # Linear independence of the vertices is nondegeneracy of the lift.
        if geom.is_degenerate(np.vstack([np.zeros(n), v])):
            raise DegenerateSimplex("vertices are linearly dependent (lies on a great subsphere)")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1] - 1

    @property
    def orientation(self) -> int:
        return 1 if np.linalg.det(self.vertices) > 0 else -1


@dataclass(frozen=True, eq=False)
class SphericalMass:
    vector: np.ndarray
    mass: float
    center: Optional[np.ndarray]

    @classmethod
    def from_vector(cls, vector, scale: float = 1.0) -> "SphericalMass":
        vector = np.asarray(vector, dtype=float)
        mass = float(np.linalg.norm(vector))
        center = vector / mass if mass > MASS_TOL * scale else None
        return cls(vector, mass, center)


def as_spherical_simplex(s) -> SphericalSimplex:
    return s if isinstance(s, SphericalSimplex) else SphericalSimplex(s)


def lift(s) -> sx.Simplex:
    """The Euclidean (d+1)-simplex ``[origin, v_0, ..., v_d]``."""
    s = as_spherical_simplex(s)
    return sx.Simplex(np.vstack([np.zeros(s.dim + 1), s.vertices]))


def spherical_weighted_circumcenter(s) -> SphericalMass:
    """Weighted point ``(o'/|o'|, Vol(lift) |o'|)`` stored as ``Vol(lift) * o'``."""
    s = as_spherical_simplex(s)
    lifted = lift(s)
    o = sx.circumsphere(lifted).center
    return SphericalMass.from_vector(lifted.volume * o)


def _term_vectors(terms) -> tuple[np.ndarray, int]:
    vecs = []
    dim = None
    for simplex, coef in terms:
        s = as_spherical_simplex(simplex)
        if dim is not None and s.dim != dim:
            raise DimensionMismatch("spherical simplices of different dimensions")
        dim = s.dim
        if coef == 0:
            raise ValidationError("coefficients must be nonzero")
        vecs.append(coef * s.orientation * spherical_weighted_circumcenter(s).vector)
    return np.array(vecs), dim


def _spherical_terms(c: Chain):
    if c.dim != c.ambient_dim - 1:
        raise DimensionMismatch(f"a spherical chain on S^{c.ambient_dim - 1} has dimension {c.ambient_dim - 1}")
    return [(c.simplex_vertices(idx), coef) for idx, coef in c.terms]


def spherical_ccm(chain: Union[Chain, Iterable[tuple[object, int]]]) -> SphericalMass:
    """Sum of oriented weighted circumcenters over a spherical chain."""
    terms = _spherical_terms(chain) if isinstance(chain, Chain) else list(chain)
    if not terms:
        n = chain.ambient_dim if isinstance(chain, Chain) else 1
        return SphericalMass.from_vector(np.zeros(n))
    vecs, _ = _term_vectors(terms)
    vector = np.array([math.fsum(vecs[:, j]) for j in range(vecs.shape[1])])
    return SphericalMass.from_vector(vector)


def spherical_cycle_residual(cycle: Chain) -> np.ndarray:
    """Raw spherical CCM vector of a d-cycle on S^d (zero in exact arithmetic)."""
    if not is_cycle(cycle):
        raise ValidationError("chain is not a cycle")
    return spherical_ccm(cycle).vector


def chordal_hull_distance(s) -> float:
    """Distance from the origin to the affine hull of the vertices."""
    s = as_spherical_simplex(s)
    n = geom.oriented_normal(s.vertices)
    return abs(float(n @ s.vertices[0])) / float(np.linalg.norm(n))


def chordal_mass_identity(s) -> tuple[float, float]:
    """``(Vol(lift) * |o'|, Vol(chordal simplex) / (2(d+1)))``; the two agree."""
    s = as_spherical_simplex(s)
    lifted = lift(s)
    o = sx.circumsphere(lifted).center
    lhs = lifted.volume * float(np.linalg.norm(o))
    rhs = geom.gram_measure(s.vertices) / (2 * (s.dim + 1))
    return lhs, rhs


def spherical_volume(s) -> float:
    """Arc length (d = 1) or spherical excess (d = 2)."""
    s = as_spherical_simplex(s)
    v = s.vertices
    if s.dim == 1:
        a, b = v
        return 2.0 * math.atan2(np.linalg.norm(a - b), np.linalg.norm(a + b))
    if s.dim == 2:
        total = 0.0
        for i in range(3):
            a, b, c = v[i], v[(i + 1) % 3], v[(i + 2) % 3]
            tb = b - (a @ b) * a
            tc = c - (a @ c) * a
            total += math.atan2(np.linalg.norm(np.cross(tb, tc)), tb @ tc)
        return total - math.pi
    raise UnsupportedDimension(f"spherical volume is implemented for d <= 2; got d = {s.dim}")
