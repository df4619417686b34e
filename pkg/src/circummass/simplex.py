"""Single simplices: circumspheres, centroids and the integrated power functional.

A simplex here is ``k+1`` affinely independent points in ``R^n`` with
``k <= n``.  Everything works for embedded simplices (``k < n``), which is
what makes facet computations inside a hyperplane possible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import geom
from .errors import DegenerateSimplex, DimensionMismatch

MC_CHUNK = 1024
MC_MIN_SAMPLES = 100


@dataclass(frozen=True, eq=False)
class Simplex:
    """Ordered vertex list; rows of ``vertices`` are the points."""

    vertices: np.ndarray

    def __post_init__(self):
        v = geom.as_points(self.vertices).copy()
        v.setflags(write=False)
        k = len(v) - 1
        if k > v.shape[1]:
            raise DimensionMismatch(f"{k}-simplex cannot live in R^{v.shape[1]}")
        if geom.is_degenerate(v):
            raise DegenerateSimplex("vertices are affinely dependent (Gram determinant below threshold)")
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient_dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def volume(self) -> float:
        return geom.gram_measure(self.vertices)

    @property
    def scale(self) -> float:
        return geom.scale(self.vertices)

    def face(self, i: int) -> "Simplex":
        """The face opposite vertex ``i``."""
        return Simplex(np.delete(self.vertices, i, axis=0))

    def __repr__(self):
        return f"Simplex({self.vertices.tolist()!r})"


@dataclass(frozen=True, eq=False)
class Sphere:
    """Sphere full-dimensional inside its carrier affine subspace.

    ``carrier_basis`` has orthonormal columns spanning the directions of the
    carrier; the carrier passes through ``center``.
    """

    center: np.ndarray
    radius_sq: float
    carrier_basis: np.ndarray = field(repr=False)

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius_sq)


@dataclass(frozen=True)
class PowEstimate:
    mean: float
    std_error: float
    samples: int


def as_simplex(s) -> Simplex:
    return s if isinstance(s, Simplex) else Simplex(s)


def centroid(s) -> np.ndarray:
    s = as_simplex(s)
    return s.vertices.mean(axis=0)


def _circumcenter_offset(v: np.ndarray):
    """Offset ``o - v_0`` in extended precision, plus the carrier basis.

    Writing ``o = v_0 + E lam`` with E the edge matrix, the conditions
    ``|o - v_j| = |o - v_0|`` become ``E^T E lam = b`` with
    ``b_j = |v_j - v_0|^2 / 2``.  With ``E = QR`` this is ``R^T y = b`` and
    ``o - v_0 = Q y``.  Two refinement steps with long double residuals
    bring the offset to near-working accuracy even for slivers.
    """
    e = geom.edge_vectors(v)
    q, r = np.linalg.qr(e.T, mode="reduced")
    diag = np.abs(np.diag(r))
    if np.min(diag) < geom.DEGENERACY_TOL * np.max(diag):
        raise DegenerateSimplex("circumsphere system is singular")

    def correction(rhs):
        return q @ scipy.linalg.solve_triangular(r.T, rhs, lower=True)

    el = v[1:].astype(np.longdouble) - v[0].astype(np.longdouble)
    bl = 0.5 * np.einsum("ij,ij->i", el, el)
    x = correction(bl.astype(float)).astype(np.longdouble)
    for _ in range(2):
        x = x + correction((bl - el @ x).astype(float))
    return x, q


def circumsphere(s) -> Sphere:
    """Circumsphere of ``s`` inside its affine hull."""
    s = as_simplex(s)
    v = s.vertices
    if s.dim == 0:
        return Sphere(v[0].copy(), 0.0, np.zeros((s.ambient_dim, 0)))
    x, q = _circumcenter_offset(v)
    return Sphere((v[0] + x).astype(float), float(x @ x), q)


def power_of_point(sphere: Sphere, x) -> float:
    """``|o x|^2 - R^2`` using the full ambient distance."""
    x = geom.as_point(x)
    if x.shape != sphere.center.shape:
        raise DimensionMismatch(f"point in R^{x.size}, sphere in R^{sphere.center.size}")
    d = x - sphere.center
    return float(d @ d) - sphere.radius_sq


def edge_square_sum(vertices: np.ndarray) -> float:
    """Sum of squared pairwise distances."""
    diff = vertices[:, None, :] - vertices[None, :, :]
    return 0.5 * float(np.einsum("ijk,ijk->", diff, diff))


def _require_positive_dim(s: Simplex):
    if s.dim < 1:
        raise DegenerateSimplex("the power functional needs a simplex of dimension >= 1")


def pow_simplex_edges(s) -> float:
    """Integrated power from edge lengths: ``-Vol * sum|v_i v_j|^2 / ((d+1)(d+2))``."""
    s = as_simplex(s)
    _require_positive_dim(s)
    d = s.dim
    return -s.volume * edge_square_sum(s.vertices) / ((d + 1) * (d + 2))


def radius_form(s) -> float:
    """``R^2 - |o m|^2`` for the circumsphere ``(o, R)`` and centroid ``m``.

    Evaluated in long double since both terms can dwarf their difference.
    """
    s = as_simplex(s)
    x, _ = _circumcenter_offset(s.vertices)
    vl = s.vertices.astype(np.longdouble)
    om = vl.mean(axis=0) - (vl[0] + x)
    return float(x @ x - om @ om)


def pow_simplex_circum(s) -> float:
    """Integrated power from the circumsphere: ``-(d+1)/(d+2) * Vol * (R^2 - |o m|^2)``."""
    s = as_simplex(s)
    _require_positive_dim(s)
    d = s.dim
    return -(d + 1) / (d + 2) * s.volume * radius_form(s)


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk])))


def uniform_barycentric(seed: int, chunk: int, count: int, k: int) -> np.ndarray:
    """``count`` uniform points of the standard k-simplex as barycentric rows.

    Sorted-uniform spacings: sort ``k`` uniforms on [0, 1] and take the gaps
    between ``0, u_(1), ..., u_(k), 1``.
    """
    u = np.sort(_chunk_rng(seed, chunk).random((count, k)), axis=1)
    padded = np.concatenate([np.zeros((count, 1)), u, np.ones((count, 1))], axis=1)
    return np.diff(padded, axis=1)


def sample_uniform(s, samples: int, seed: int) -> np.ndarray:
    """Uniform points in ``s``, drawn in chunks of ``MC_CHUNK`` keyed by ``(seed, chunk)``.

    Each chunk has its own counter-based stream, so the result does not depend
    on the order in which chunks are generated.
    """
    s = as_simplex(s)
    if samples < 1:
        raise ValueError("samples must be positive")
    chunks = []
    for c, start in enumerate(range(0, samples, MC_CHUNK)):
        count = min(MC_CHUNK, samples - start)
        chunks.append(uniform_barycentric(seed, c, count, s.dim) @ s.vertices)
    return np.concatenate(chunks, axis=0)


def pow_simplex_mc(s, samples: int, seed: int) -> PowEstimate:
    """Monte Carlo estimate of the integrated power against the circumsphere."""
    s = as_simplex(s)
    _require_positive_dim(s)
    if samples < MC_MIN_SAMPLES:
        raise ValueError(f"pow_simplex_mc needs at least {MC_MIN_SAMPLES} samples")
    sph = circumsphere(s)
    x = sample_uniform(s, samples, seed) - sph.center
    values = np.einsum("ij,ij->i", x, x) - sph.radius_sq
    vol = s.volume
    return PowEstimate(
        mean=vol * float(values.mean()),
        std_error=vol * float(values.std(ddof=1)) / math.sqrt(samples),
        samples=samples,
    )


def hyperfaces_with_normals(s) -> list[tuple[Simplex, np.ndarray]]:
    """Facets ``Delta_i`` (vertex ``i`` omitted) with outward unit normals."""
    s = as_simplex(s)
    if s.dim != s.ambient_dim:
        raise DegenerateSimplex(
            f"outward normals need a full-dimensional simplex; got a {s.dim}-simplex in R^{s.ambient_dim}"
        )
    out = []
    for i in range(s.dim + 1):
        f = s.face(i)
        n = geom.oriented_normal(f.vertices)
        n = n / np.linalg.norm(n)
        if n @ (s.vertices[i] - centroid(f)) > 0:
            n = -n
        out.append((f, n))
    return out


def lemma_residual(s) -> np.ndarray:
    """``sum_i Pow(Delta_i) n_i - 2 Vol (m - o)``; zero up to rounding."""
    s = as_simplex(s)
    if s.dim < 2:
        raise DegenerateSimplex("needs a full-dimensional simplex of dimension >= 2")
    lhs = np.zeros(s.ambient_dim)
    for f, n in hyperfaces_with_normals(s):
        lhs += pow_simplex_edges(f) * n
    o = circumsphere(s).center
    return lhs - 2.0 * s.volume * (centroid(s) - o)
