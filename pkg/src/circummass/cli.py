"""Command line interface: one subcommand per operation, JSON report on stdout.

Exit codes: 0 when the report status is ``pass``, 1 for ``fail`` or a
geometric ``error``, 2 for usage, parse and validation errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from . import chain as ch
from . import simplex as sx
from . import spherical as sp
from . import verify
from .chain import Chain
from .errors import GeometryError, ParseError, UnsupportedDimension, ValidationError
from .io import Report, chain_document, parse_chain, serialize_report

log = logging.getLogger("circummass")

DEFAULT_TOL = {
    "pow": 1e-10,
    "sphere-ccm": 1e-9,
    "sphere-identity": 1e-10,
}


class InputError(Exception):
    """Bad input file or arguments; reported with exit code 2."""


def _read_chain(path: str) -> Chain:
    try:
        data = sys.stdin.buffer.read() if path == "-" else open(path, "rb").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_chain(data)
    except (ParseError, ValidationError) as exc:
        raise InputError(str(exc)) from None


def _apex(text: Optional[str]):
    if text is None:
        return None
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise InputError(f"--apex must be comma-separated numbers; got {text!r}") from None


def _center_dict(wc: ch.WeightedCenter) -> dict:
    return {"weight": wc.weight, "moment": wc.moment, "point": wc.point}


def _filling(c: Chain, apex) -> Chain:
    """The chain itself when full-dimensional, else a cone filling of the (n-1)-cycle."""
    if c.dim == c.ambient_dim:
        return c
    if c.dim == c.ambient_dim - 1:
        if not ch.is_cycle(c):
            raise InputError("an (n-1)-chain must be a cycle to be filled")
        return ch.fill(c, apex)
    raise InputError(f"needs a chain of dimension n or n-1; got {c.dim} in R^{c.ambient_dim}")


def _maybe_plot(args, c: Chain, points: dict, title: str):
    if not getattr(args, "figure", None):
        return
    if c.ambient_dim != 2:
        log.warning("--figure ignored: only planar chains are drawn")
        return
    from .plotting import planar_chain

    planar_chain(c, points, args.figure, title)
    log.info("figure written to %s", args.figure)


def cmd_pow(args) -> Report:
    c = _read_chain(args.input)
    if args.oracle == "mc" and args.samples < sx.MC_MIN_SAMPLES:
        raise InputError(f"--samples must be at least {sx.MC_MIN_SAMPLES}")
    tol = args.tol if args.tol is not None else DEFAULT_TOL["pow"]
    rows = []
    ok = True
    for idx, coef in c.terms:
        v = c.simplex_vertices(idx)
        a, b = sx.pow_simplex_edges(v), sx.pow_simplex_circum(v)
        row = {"vertices": list(idx), "pow_edges": a, "pow_circum": b, "rel_diff": abs(a - b) / abs(a)}
        ok &= row["rel_diff"] <= tol and a < 0 and b < 0
        if args.oracle == "mc":
            est = sx.pow_simplex_mc(v, args.samples, args.seed)
            z = abs(est.mean - a) / est.std_error
            row.update(mc_mean=est.mean, mc_std_error=est.std_error, mc_z=z, mc_agrees=bool(z <= args.sigmas))
            ok &= z <= args.sigmas
        rows.append(row)
    tolerances = {"rel_tol": tol}
    inputs = {"input": args.input, "oracle": args.oracle}
    if args.oracle == "mc":
        tolerances["mc_sigmas"] = args.sigmas
        inputs.update(samples=args.samples, seed=args.seed)
    return Report("pow", inputs, {"terms": rows}, "pass" if ok else "fail", tolerances)


def _center_command(name: str, agg):
    def run(args) -> Report:
        c = _read_chain(args.input)
        apex = _apex(args.apex)
        filling = _filling(c, apex)
        wc = agg(filling, args)
        results = _center_dict(wc)
        results["filled"] = filling is not c
        inputs = {"input": args.input, "apex": apex}
        if name == "euler":
            inputs["t"] = args.t
        _maybe_plot(args, filling, {name: wc.point}, name)
        return Report(name, inputs, results, "pass", {"weight_rel": ch.WEIGHT_TOL})

    return run


cmd_ccm = _center_command("ccm", lambda c, a: ch.ccm(c))
cmd_centroid = _center_command("centroid", lambda c, a: ch.centroid_of_mass(c))
cmd_euler = _center_command("euler", lambda c, a: ch.euler_point(c, a.t))


def cmd_fill(args) -> Report:
    c = _read_chain(args.input)
    apex = _apex(args.apex)
    if not ch.is_cycle(c):
        raise InputError("fill needs a cycle")
    filled = ch.fill(c, apex)
    matches = ch.boundary(filled).terms == c.terms
    results = {"chain": chain_document(filled), "boundary_matches": matches}
    return Report("fill", {"input": args.input, "apex": apex}, results, "pass" if matches else "fail", {})


def cmd_boundary(args) -> Report:
    c = _read_chain(args.input)
    if c.dim < 1:
        raise InputError("boundary needs a chain of dimension >= 1")
    b = ch.boundary(c)
    return Report("boundary", {"input": args.input}, {"chain": chain_document(b), "empty": b.is_empty()}, "pass", {})


def cmd_is_cycle(args) -> Report:
    c = _read_chain(args.input)
    cyc = ch.is_cycle(c)
    return Report("is-cycle", {"input": args.input}, {"is_cycle": cyc}, "pass" if cyc else "fail", {})


def _spherical_input(args) -> Chain:
    c = _read_chain(args.input)
    if args.project:
        if np.any(np.linalg.norm(c.vertices, axis=1) == 0.0):
            raise InputError("cannot project the origin onto the sphere")
        c = Chain(c.vertices / np.linalg.norm(c.vertices, axis=1, keepdims=True), c.terms, c.dim, c.combinatorial)
    try:
        for idx, _ in c.terms:
            sp.SphericalSimplex(c.simplex_vertices(idx))
    except (ValidationError, GeometryError) as exc:
        raise InputError(f"not a spherical chain: {exc}") from None
    return c


def cmd_sphere_ccm(args) -> Report:
    c = _spherical_input(args)
    tol = args.tol if args.tol is not None else DEFAULT_TOL["sphere-ccm"]
    m = sp.spherical_ccm(c)
    cyc = ch.is_cycle(c)
    results = {"vector": m.vector, "mass": m.mass, "center": m.center, "is_cycle": cyc}
    status = "pass"
    if cyc:
        results["cycle_residual"] = m.mass
        status = "pass" if m.mass <= tol else "fail"
    return Report("sphere-ccm", {"input": args.input, "project": args.project}, results, status, {"cycle_residual": tol})


def cmd_sphere_identity(args) -> Report:
    c = _spherical_input(args)
    tol = args.tol if args.tol is not None else DEFAULT_TOL["sphere-identity"]
    rows = []
    worst = 0.0
    for idx, _ in c.terms:
        s = sp.SphericalSimplex(c.simplex_vertices(idx))
        lhs, rhs = sp.chordal_mass_identity(s)
        rel = abs(lhs - rhs) / abs(rhs)
        worst = max(worst, rel)
        row = {"vertices": list(idx), "lifted_weight": lhs, "chordal_form": rhs, "rel_diff": rel}
        try:
            row["spherical_form"] = sp.spherical_volume(s) / (2 * (s.dim + 1))
        except UnsupportedDimension:
            pass
        rows.append(row)
    status = "pass" if worst <= tol else "fail"
    return Report("sphere-identity", {"input": args.input, "project": args.project},
                  {"terms": rows, "max_rel_diff": worst}, status, {"rel_tol": tol})


def cmd_verify(args) -> Report:
    try:
        dims = [int(x) for x in args.dim.split(",")] if args.dim else None
    except ValueError:
        raise InputError(f"--dim must be comma-separated integers; got {args.dim!r}") from None
    if dims is not None:
        try:
            verify.check_dims(args.suite, dims)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    res = verify.run_suite(args.suite, args.trials, args.seed, dims, args.tol)
    inputs = {"suite": args.suite, "trials": args.trials, "seed": args.seed, "dims": dims}
    if args.figure:
        from .plotting import residual_histogram

        residual_histogram(res.residuals, res.tolerance, args.figure, f"verify {args.suite}")
        log.info("figure written to %s", args.figure)
    return Report(f"verify {args.suite}", inputs, res.summary(), "pass" if res.passed else "fail",
                  {"residual": res.tolerance})


def _u64(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be in 0..2^64-1")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circummass", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(name, help_text):
        sp_ = sub.add_parser(name, help=help_text)
        sp_.add_argument("input", help="chain document (JSON) or OFF mesh; '-' for stdin")
        return sp_

    q = with_input("pow", "integrated power of every simplex, both closed forms (optionally vs Monte Carlo)")
    q.add_argument("--oracle", choices=["mc"], default=None)
    q.add_argument("--samples", type=_positive, default=200_000)
    q.add_argument("--seed", type=_u64, default=None)
    q.add_argument("--sigmas", type=float, default=4.0, help="MC agreement bound in standard errors")
    q.add_argument("--tol", type=float, default=None)
    q.set_defaults(func=cmd_pow)

    for name, func, text in (
        ("ccm", cmd_ccm, "circumcenter of mass of a d-chain or of a filled (d-1)-cycle"),
        ("centroid", cmd_centroid, "centroid of mass of a d-chain or of a filled (d-1)-cycle"),
        ("euler", cmd_euler, "Euler point (1-t) circumcenter + t centroid, aggregated"),
    ):
        q = with_input(name, text)
        q.add_argument("--apex", default=None, help="filling apex as x,y,...")
        q.add_argument("--figure", default=None, help="write a PNG/PDF drawing (planar chains)")
        if name == "euler":
            q.add_argument("--t", type=float, required=True)
        q.set_defaults(func=func)

    q = with_input("fill", "cone filling of a cycle")
    q.add_argument("--apex", default=None)
    q.set_defaults(func=cmd_fill)
    with_input("boundary", "boundary chain").set_defaults(func=cmd_boundary)
    with_input("is-cycle", "exit 0 iff the chain is a cycle").set_defaults(func=cmd_is_cycle)

    for name, func, text in (
        ("sphere-ccm", cmd_sphere_ccm, "spherical circumcenter of mass of a chain on the unit sphere"),
        ("sphere-identity", cmd_sphere_identity, "lifted weight vs chordal volume per spherical simplex"),
    ):
        q = with_input(name, text)
        q.add_argument("--project", action="store_true", help="project vertices centrally onto the sphere")
        q.add_argument("--tol", type=float, default=None)
        q.set_defaults(func=func)

    q = sub.add_parser("verify", help="randomized verification suite")
    q.add_argument("suite", choices=sorted(verify.SUITES))
    q.add_argument("--seed", type=_u64, required=True)
    q.add_argument("--trials", type=_positive, default=100)
    q.add_argument("--dim", default=None, help="comma-separated dimensions (polygon sizes for equilateral-polygon)")
    q.add_argument("--tol", type=float, default=None)
    q.add_argument("--figure", default=None, help="write a residual histogram")
    q.set_defaults(func=cmd_verify)
    return p


def _emit(report: Report) -> None:
    sys.stdout.buffer.write(serialize_report(report))
    sys.stdout.flush()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    if args.command == "pow" and args.oracle == "mc" and args.seed is None:
        parser.error("--oracle mc requires --seed")
    try:
        report = args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        _emit(Report(args.command, {}, {"error": str(exc)}, "error", {}))
        return 2
    except GeometryError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        _emit(Report(args.command, {}, {"error": f"{type(exc).__name__}: {exc}"}, "error", {}))
        return 1
    _emit(report)
    if report.status != "pass":
        log.warning("status %s", report.status)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
