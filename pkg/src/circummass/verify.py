"""Randomized verification suites, one per identity.

Each suite draws its shapes from ``SeedSequence([seed, dim])`` streams, so a
suite is reproducible from its seed.  Residuals are returned already divided
by the appropriate power of the shape's scale, so one tolerance fits all
trials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import chain as ch
from . import generators as gen
from . import geom
from . import simplex as sx
from . import spherical as sp
from .errors import DegenerateSimplex


@dataclass
class SuiteResult:
    name: str
    tolerance: float
    residuals: list[float] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)
    limits: list[float] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def add(self, value: float, label: str, tol: Optional[float] = None):
        """Record one residual; ``tol`` overrides the suite tolerance for this entry."""
        self.residuals.append(float(value))
        self.labels.append(label)
        self.limits.append(self.tolerance if tol is None else tol)

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    @property
    def failures(self) -> int:
        return sum(1 for r, lim in zip(self.residuals, self.limits) if not r <= lim)

    @property
    def passed(self) -> bool:
        return bool(self.residuals) and self.failures == 0

    def summary(self) -> dict:
        worst = int(np.argmax(self.residuals)) if self.residuals else None
        return {
            "trials": len(self.residuals),
            "max_residual": self.max_residual,
            "mean_residual": float(np.mean(self.residuals)) if self.residuals else 0.0,
            "failures": self.failures,
            "worst_case": self.labels[worst] if worst is not None else None,
            **self.details,
        }


def _rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *keys]))


def pow_forms(trials: int, seed: int, dims: Sequence[int] = range(1, 7), tol: float = 1e-10) -> SuiteResult:
    """Relative gap between the edge and circumsphere forms of the integrated power."""
    res = SuiteResult("pow-forms", tol)
    positive = 0
    for d in dims:
        rng = _rng(seed, d)
        for t in range(trials):
            v = gen.random_simplex(rng, d, faces=False)
            a, b = sx.pow_simplex_edges(v), sx.pow_simplex_circum(v)
            positive += (a >= 0) + (b >= 0)
            res.add(abs(a - b) / abs(a), f"d={d} trial={t}")
    res.details["nonnegative_values"] = positive
    if positive:
        res.add(math.inf, "nonnegative power")
    return res


def pow_mc(trials: int, seed: int, dims: Sequence[int] = range(1, 5), samples: int = 200_000,
           sigmas: float = 4.0) -> SuiteResult:
    """Monte Carlo integral vs. closed form, in units of the MC standard error."""
    res = SuiteResult("pow-mc", sigmas)
    dims = list(dims)
    for t in range(trials):
        d = dims[t % len(dims)]
        rng = _rng(seed, d, t)
        v = gen.random_simplex(rng, d, faces=False)
        est = sx.pow_simplex_mc(v, samples, seed=int(rng.integers(2**63)))
        res.add(abs(est.mean - sx.pow_simplex_edges(v)) / est.std_error, f"d={d} trial={t}")
    res.details["samples"] = samples
    return res


def lemma(trials: int, seed: int, dims: Sequence[int] = range(2, 6), tol: float = 1e-9) -> SuiteResult:
    """Facet power-weighted normals vs. twice the volume times (centroid - circumcenter)."""
    res = SuiteResult("lemma", tol)
    for d in dims:
        rng = _rng(seed, d)
        for t in range(trials):
            v = gen.random_simplex(rng, d)
            r = np.linalg.norm(sx.lemma_residual(v)) / geom.scale(v) ** (d + 1)
            res.add(r, f"d={d} trial={t}")
    return res


def cycle_moments(trials: int, seed: int, dims: Sequence[int] = (2, 3), tol: float = 1e-9) -> SuiteResult:
    """Both moment sums over random full-dimensional cycles."""
    res = SuiteResult("cycle-moments", tol)
    dims = list(dims)
    for t in range(trials):
        d = dims[t % len(dims)]
        rng = _rng(seed, d, t)
        kind = "central" if t % 2 == 0 else "retriangulation"
        c = gen.central_triangulation_cycle(rng, d) if kind == "central" else gen.retriangulation_cycle(rng, d)
        circ, diff = ch.cycle_moment_residuals(c)
        s = c.scale() ** (d + 1)
        res.add(max(np.linalg.norm(circ), np.linalg.norm(diff)) / s, f"d={d} {kind} trial={t}")
    return res


def filling_independence(trials: int, seed: int, dims: Sequence[int] = (2, 3), tol: float = 1e-9) -> SuiteResult:
    """Distance between CCMs of two cone fillings of one polytope boundary."""
    res = SuiteResult("filling-independence", tol)
    dims = list(dims)
    for t in range(trials):
        d = dims[t % len(dims)]
        rng = _rng(seed, d, t)
        c = gen.random_convex_polytope(rng, d)
        used = sorted({i for idx, _ in c.terms for i in idx})
        pts = c.vertices[used]
        a = rng.dirichlet(np.ones(len(pts))) @ pts
        b = rng.dirichlet(np.ones(len(pts))) @ pts
        pa = ch.ccm_cycle_boundary(c, a).point
        pb = ch.ccm_cycle_boundary(c, b).point
        res.add(np.linalg.norm(pa - pb) / c.scale(), f"d={d} trial={t}")
    return res


def equilateral_polygon(trials: int, seed: int, sizes: Sequence[int] = range(6, 13), tol: float = 1e-9) -> SuiteResult:
    """CCM of unit-edge simple polygons vs. the lamina centroid (absolute, unit edges)."""
    res = SuiteResult("equilateral-polygon", tol)
    sizes = list(sizes)
    for t in range(trials):
        n = sizes[t % len(sizes)]
        rng = _rng(seed, n, t)
        poly = gen.polygon_chain(gen.equilateral_polygon(rng, n))
        filling = ch.fill(poly)
        res.add(np.linalg.norm(ch.ccm(filling).point - ch.centroid_of_mass(filling).point), f"n={n} trial={t}")
    return res


def _polytope_gap(c: ch.Chain) -> float:
    filling = ch.fill(c)
    return float(np.linalg.norm(ch.ccm(filling).point - ch.centroid_of_mass(filling).point)) / c.scale()


def _moved(c: ch.Chain, rng: np.random.Generator) -> ch.Chain:
    q = gen.random_rotation(rng, c.ambient_dim)
    return ch.Chain(c.vertices @ q.T + rng.normal(size=c.ambient_dim), c.terms)


def equilateral_polytopes() -> dict[str, ch.Chain]:
    return {
        "bipyramid": gen.unit_bipyramid(),
        "octahedron": gen.hull_boundary(gen.octahedron_vertices()),
        "icosahedron": gen.hull_boundary(gen.icosahedron_vertices()),
    }


def equilateral_polytope(trials: int, seed: int, tol: float = 1e-9) -> SuiteResult:
    """CCM vs. solid centroid for facet-equilateral polytopes in random rigid positions."""
    res = SuiteResult("equilateral-polytope", tol)
    spread = 0.0
    for name, c in equilateral_polytopes().items():
        sums = ch.facet_edge_square_sums(c)
        spread = max(spread, (max(sums) - min(sums)) / c.scale() ** 2)
        res.add(_polytope_gap(c), f"{name}")
        rng = _rng(seed, len(c.terms))
        for t in range(trials):
            res.add(_polytope_gap(_moved(c, rng)), f"{name} moved trial={t}")
    res.details["facet_sum_spread"] = spread
    return res


def minkowski(trials: int, seed: int, dims: Sequence[int] = (3,), tol: float = 1e-9) -> SuiteResult:
    """Area-weighted outward normals of random convex polytopes."""
    res = SuiteResult("minkowski", tol)
    dims = list(dims)
    for t in range(trials):
        d = dims[t % len(dims)]
        rng = _rng(seed, d, t)
        c = gen.random_convex_polytope(rng, d)
        res.add(np.linalg.norm(ch.minkowski_residual(c)) / c.scale() ** (d - 1), f"d={d} trial={t}")
    return res


def inscribed(trials: int, seed: int, dims: Sequence[int] = (2, 3), tol: float = 1e-9) -> SuiteResult:
    """CCM of a boundary inscribed in a sphere vs. the sphere's center, relative to its radius."""
    res = SuiteResult("inscribed", tol)
    dims = list(dims)
    for t in range(trials):
        d = dims[t % len(dims)]
        rng = _rng(seed, d, t)
        c, z, r = gen.random_inscribed_polytope(rng, d)
        res.add(np.linalg.norm(ch.ccm_cycle_boundary(c).point - z) / r, f"d={d} trial={t}")
    return res


def spherical_cycle(trials: int, seed: int, tol: float = 1e-9, symmetric_tol: float = 1e-12) -> SuiteResult:
    """Spherical CCM vector of random sphere triangulations (and the symmetric ones)."""
    res = SuiteResult("spherical-cycle", tol)
    rng = _rng(seed, 2)
    for t in range(trials):
        res.add(np.linalg.norm(sp.spherical_cycle_residual(gen.random_sphere_triangulation(rng))), f"trial={t}")
    sym = {
        "octahedron": gen.sphere_triangulation(gen.octahedron_vertices()),
        "icosahedron": gen.sphere_triangulation(gen.icosahedron_vertices()),
    }
    for name, c in sym.items():
        res.add(np.linalg.norm(sp.spherical_cycle_residual(c)), name, symmetric_tol)
    res.details["symmetric_tolerance"] = symmetric_tol
    return res


def chordal_mass(trials: int, seed: int, dims: Sequence[int] = range(1, 5), tol: float = 1e-10) -> SuiteResult:
    """Relative gap between lifted weight and chordal volume / (2(d+1))."""
    res = SuiteResult("chordal-mass", tol)
    dims = list(dims)
    for t in range(trials):
        d = dims[t % len(dims)]
        rng = _rng(seed, d, t)
        while True:
            v = gen.random_sphere_points(rng, d + 1, d + 1)
            try:
                lhs, rhs = sp.chordal_mass_identity(v)
                break
            except DegenerateSimplex:
                continue
        res.add(abs(lhs - rhs) / abs(rhs), f"d={d} trial={t}")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "lemma": lemma,
    "cycle-moments": cycle_moments,
    "filling-independence": filling_independence,
    "equilateral-polygon": equilateral_polygon,
    "equilateral-polytope": equilateral_polytope,
    "minkowski": minkowski,
    "inscribed": inscribed,
    "spherical-cycle": spherical_cycle,
    "pow-forms": pow_forms,
    "pow-mc": pow_mc,
    "chordal-mass": chordal_mass,
}


# Smallest admissible value of --dim (polygon size for equilateral-polygon).
MIN_DIM = {
    "lemma": 2,
    "cycle-moments": 2,
    "filling-independence": 2,
    "equilateral-polygon": 3,
    "minkowski": 2,
    "inscribed": 2,
    "pow-forms": 1,
    "pow-mc": 1,
    "chordal-mass": 1,
}


def check_dims(name: str, dims: Sequence[int]) -> None:
    if name in MIN_DIM and (not dims or min(dims) < MIN_DIM[name]):
        raise ValueError(f"{name} needs dimensions >= {MIN_DIM[name]}; got {list(dims)}")


def run_suite(name: str, trials: int, seed: int, dims: Optional[Sequence[int]] = None,
              tol: Optional[float] = None) -> SuiteResult:
    fn = SUITES[name]
    kwargs: dict = {}
    if dims is not None:
        check_dims(name, dims)
        if name == "equilateral-polygon":
            kwargs["sizes"] = dims
        elif name not in ("equilateral-polytope", "spherical-cycle"):
            kwargs["dims"] = dims
    if tol is not None:
        kwargs["sigmas" if name == "pow-mc" else "tol"] = tol
    return fn(trials, seed, **kwargs)
