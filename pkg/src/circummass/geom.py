"""Dense linear algebra helpers and k-volumes of embedded simplices.

Points and vectors are plain float64 numpy arrays.  Vertex lists are
``(m, n)`` arrays: ``m`` points in ``R^n``.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, SingularMatrix, ValidationError

#: Scale-relative threshold below which a pivot or Gram determinant is zero.
DEGENERACY_TOL = 1e-12


def as_point(x) -> np.ndarray:
    p = np.asarray(x, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise DimensionMismatch(f"a point needs shape (n,), n >= 1; got {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValidationError("point coordinates must be finite")
    return p


def as_points(vertices) -> np.ndarray:
    """Validate a vertex list and return it as a ``(m, n)`` float array."""
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] < 1:
        raise DimensionMismatch(
            f"vertices must share one ambient dimension n >= 1; got shape {v.shape}"
        )
    if not np.all(np.isfinite(v)):
        raise ValidationError("vertex coordinates must be finite")
    return v


def edge_vectors(vertices: np.ndarray) -> np.ndarray:
    """Rows ``v_i - v_0`` for ``i = 1..k``."""
    return vertices[1:] - vertices[0]


def scale(vertices: np.ndarray) -> float:
    """Largest pairwise distance among the vertices."""
    if len(vertices) < 2:
        return 0.0
    diff = vertices[:, None, :] - vertices[None, :, :]
    return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", diff, diff))))


def solve_linear(matrix, rhs) -> np.ndarray:
    """Solve ``matrix @ y = rhs`` by LU with partial pivoting.

    Raises SingularMatrix when some pivot of U is below
    ``DEGENERACY_TOL * max|matrix|``.
    """
    a = np.asarray(matrix, dtype=float)
    b = np.asarray(rhs, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"matrix must be square k x k, k >= 1; got {a.shape}")
    if b.shape != (a.shape[0],):
        raise DimensionMismatch(f"rhs must have length {a.shape[0]}; got {b.shape}")
    norm = np.max(np.abs(a))
    if norm == 0.0:
        raise SingularMatrix("zero matrix")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    if np.min(np.abs(np.diag(lu))) < DEGENERACY_TOL * norm:
        raise SingularMatrix("pivot below tolerance; matrix is numerically singular")
    return scipy.linalg.lu_solve((lu, piv), b)


def _edge_qr(vertices: np.ndarray):
    # Thin QR of the n x k edge matrix: E = Q R, so the Gram matrix is R^T R.
    e = edge_vectors(vertices).T
    q, r = np.linalg.qr(e, mode="reduced")
    return q, r


def gram_sqrt_det(vertices: np.ndarray) -> float:
    """``sqrt(det G)`` for the Gram matrix of the edge vectors (k! times the volume)."""
    if len(vertices) == 1:
        return 1.0
    _, r = _edge_qr(vertices)
    return float(abs(np.prod(np.diag(r))))


def is_degenerate(vertices: np.ndarray) -> bool:
    """True when ``det G / scale^(2k)`` is below ``DEGENERACY_TOL``."""
    k = len(vertices) - 1
    if k == 0:
        return False
    s = scale(vertices)
    if s == 0.0:
        return True
    return (gram_sqrt_det(vertices) / s**k) ** 2 < DEGENERACY_TOL


def gram_measure(vertices) -> float:
    """k-dimensional volume of the simplex spanned by ``k+1`` points in ``R^n``.

    Computed as ``sqrt(det G) / k!`` with G the Gram matrix of ``v_i - v_0``;
    degenerate input gives 0.  A single point has measure 1 by convention.
    """
    v = as_points(vertices)
    k = len(v) - 1
    if k > v.shape[1]:
        raise DimensionMismatch(f"{k}-simplex cannot live in R^{v.shape[1]}")
    if k == 0:
        return 1.0
    if is_degenerate(v):
        return 0.0
    return gram_sqrt_det(v) / math.factorial(k)


def signed_volume(vertices) -> float:
    """Oriented volume of ``d+1`` points in ``R^d``: ``det[v_1-v_0, ..., v_d-v_0] / d!``."""
    v = as_points(vertices)
    d = v.shape[1]
    if len(v) != d + 1:
        raise DimensionMismatch(f"need exactly {d + 1} vertices in R^{d}; got {len(v)}")
    return float(np.linalg.det(edge_vectors(v))) / math.factorial(d)


def oriented_normal(vertices) -> np.ndarray:
    """Generalized cross product N of the edges of ``n`` points in ``R^n``.

    ``det[x, v_1-v_0, ..., v_{n-1}-v_0] = x . N`` for every x, hence
    ``|N| = (n-1)! * Vol_{n-1}``.  If the cone ``[a, v_0, ..., v_{n-1}]`` is
    positively oriented then N points away from ``a``.
    """
    v = as_points(vertices)
    n = v.shape[1]
    if len(v) != n:
        raise DimensionMismatch(f"need exactly {n} vertices in R^{n}; got {len(v)}")
    e = edge_vectors(v)
    out = np.empty(n)
    for i in range(n):
        minor = np.delete(e, i, axis=1)
        out[i] = (-1) ** i * (np.linalg.det(minor) if n > 1 else 1.0)
    return out
