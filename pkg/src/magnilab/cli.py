"""Command-line front end emitting plot-ready CSV.

Default output columns are (t, N, value, stderr, closed_form, abs_err,
method, seed); the catalog, interval-weight, and fekete-demo subcommands use
their own documented column sets.  Identical invocations with the same seed
produce byte-identical files regardless of MAGNILAB_THREADS.
"""
from __future__ import annotations

import argparse
import sys

from . import closed_forms, empirical, finite_mag, graph_mag, mc, weight_measures
from .errors import MagnilabError, MetricValidationError
from .spaces import (Circle, FlatTorusUnit, Interval, LineGaussian,
                     LineLaplace, Sphere2, load_distance_csv, load_edge_list,
                     validate_metric)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

HEADER = "t,N,value,stderr,closed_form,abs_err,method,seed"


def _fmt(x) -> str:
    if x is None or x == "":
        return ""
    return f"{float(x):.12g}"


def _row(t, N, value, stderr, closed, method, seed) -> str:
    abs_err = "" if closed in (None, "") else abs(float(value) - float(closed))
    cols = [_fmt(t), "" if N is None else str(N), _fmt(value), _fmt(stderr),
            _fmt(closed) if closed not in (None, "") else "",
            _fmt(abs_err) if abs_err != "" else "", method, str(seed)]
    return ",".join(cols)


def _emit(lines: list[str], path: str | None):
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _t_grid(args) -> list[float]:
    if args.t is not None:
        return [args.t]
    start, stop, count = args.t_grid
    count = int(count)
    if start <= 0 or stop <= 0 or count < 1:
        raise MetricValidationError("t grid must be strictly positive with count >= 1")
    if count == 1:
        return [start]
    if args.t_spacing == "log":
        import math
        ratio = (stop / start) ** (1.0 / (count - 1))
        return [start * ratio**i for i in range(count)]
    step = (stop - start) / (count - 1)
    return [start + step * i for i in range(count)]


def _add_t_args(p):
    p.add_argument("--t", type=float, default=None, help="single scale value")
    p.add_argument("--t-grid", type=float, nargs=3, metavar=("START", "STOP", "COUNT"),
                   default=(1.0, 5.0, 5), help="scale grid")
    p.add_argument("--t-spacing", choices=("linear", "log"), default="linear")


def _add_common(p):
    _add_t_args(p)
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None, help="output CSV path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="magnilab",
                                 description="magnitude computation for metric measure spaces")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("finite", help="magnitude of a finite metric space from a distance CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=("inverse", "series", "all"), default="inverse")
    _add_common(p)

    p = sub.add_parser("graph", help="graph magnitude from an edge list")
    p.add_argument("--edges", required=True)
    p.add_argument("--gamma", choices=("triv", "count"), default="triv")
    p.add_argument("--method", choices=("inverse", "series", "all"), default="inverse")
    _add_common(p)

    p = sub.add_parser("manifold", help="chain-integral terms for an analytic space")
    p.add_argument("--space", required=True,
                   choices=("circle", "sphere", "torus", "interval", "line-gauss", "line-laplace"))
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--measure", choices=("lebesgue", "weight"), default="lebesgue")
    p.add_argument("--method", choices=("mc", "closed", "quadrature", "all"), default="all")
    _add_common(p)

    p = sub.add_parser("weight-check", help="weight-measure partial-sum pattern check")
    p.add_argument("--space", choices=("circle", "sphere"), default="circle")
    p.add_argument("--r", type=float, default=1.0)
    _add_common(p)

    p = sub.add_parser("length-spectrum", help="histogram of total chain length")
    p.add_argument("--space", required=True,
                   choices=("circle", "sphere", "torus", "interval", "line-gauss", "line-laplace"))
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--bins", type=int, default=64)
    p.add_argument("--l-max", type=float, default=None)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)

    p = sub.add_parser("interval-weight", help="boundary-weight interval comparison table")
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)

    p = sub.add_parser("fekete-demo", help="empirical-measure convergence on the sphere")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--m-list", type=int, nargs="+", default=(50, 100, 200, 400))
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)

    p = sub.add_parser("catalog", help="closed forms vs independent oracles")
    _add_t_args(p)
    p.add_argument("--output", default=None)

    return ap


def _make_space(args):
    if args.space == "circle":
        return Circle(args.r)
    if args.space == "sphere":
        return Sphere2(args.r)
    if args.space == "torus":
        return FlatTorusUnit()
    if args.space == "interval":
        return Interval(args.a, args.b, args.measure)
    if args.space == "line-gauss":
        return LineGaussian()
    return LineLaplace()


def _closed_form_term(space, n: int, t: float):
    """Catalog value for a_n, or None if the catalog has no entry."""
    try:
        if isinstance(space, Circle):
            return closed_forms.circle_term(n, space.r, t)
        if isinstance(space, Sphere2):
            return closed_forms.sphere_term(n, space.r, t)
        if isinstance(space, FlatTorusUnit) and n == 1:
            return closed_forms.torus_first_term(t)
        if isinstance(space, Interval) and space.measure == "lebesgue":
            return closed_forms.interval_term(n, t, space.length)
        if isinstance(space, LineLaplace) and n == 1:
            return closed_forms.laplace_line_first_term(t)
        if isinstance(space, LineGaussian):
            if n == 1:
                return closed_forms.gaussian_line_first_term(t)
            if n == 2:
                return closed_forms.gaussian_line_second_term(t)
    except ValueError:
        return None
    return None


def _run_finite(args) -> int:
    space = load_distance_csv(args.input)
    report = validate_metric(space)
    if not report.valid:
        raise MetricValidationError(str(report))
    lines = [HEADER]
    for t in _t_grid(args):
        exact = finite_mag.classical_magnitude(space, t)
        if args.method in ("inverse", "all"):
            lines.append(_row(t, None, exact, 0.0, None, "inverse", args.seed))
        if args.method in ("series", "all"):
            series = finite_mag.neumann_partial(space, t, args.N)
            lines.append(_row(t, args.N, series.partial_sums[args.N], 0.0, exact,
                              "series", args.seed))
    _emit(lines, args.output)
    return EXIT_OK


def _run_graph(args) -> int:
    g = load_edge_list(args.edges)
    lines = [HEADER]
    for t in _t_grid(args):
        if args.gamma == "triv":
            from .spaces import graph_metric
            exact = finite_mag.classical_magnitude(graph_metric(g), t)
            series_val = finite_mag.neumann_partial(graph_metric(g), t, args.N)
        else:
            exact = graph_mag.tilde_magnitude(g, t)
            series_val = graph_mag.tilde_neumann_partial(g, t, args.N)
        if args.method in ("inverse", "all"):
            lines.append(_row(t, None, exact, 0.0, None, "inverse", args.seed))
        if args.method in ("series", "all"):
            lines.append(_row(t, args.N, series_val.partial_sums[args.N], 0.0, exact,
                              "series", args.seed))
    _emit(lines, args.output)
    return EXIT_OK


def _run_manifold(args) -> int:
    space = _make_space(args)
    lines = [HEADER]
    for t in _t_grid(args):
        for n in range(1, args.N + 1):
            closed = _closed_form_term(space, n, t)
            if args.method in ("closed", "all") and closed is not None:
                lines.append(_row(t, n, closed, 0.0, closed, "closed", args.seed))
            if args.method in ("mc", "all"):
                spec = mc.SamplerSpec(space, seed=args.seed, samples=args.samples)
                est = mc.estimate_term(spec, n, t)
                lines.append(_row(t, n, est.value, est.std_error, closed, "mc", args.seed))
    _emit(lines, args.output)
    return EXIT_OK


def _run_weight_check(args) -> int:
    space = Circle(args.r) if args.space == "circle" else Sphere2(args.r)
    lines = [HEADER]
    for t in _t_grid(args):
        rows = weight_measures.weight_partial_magnitude_check(
            space, t, args.N, args.samples, args.seed)
        for r in rows:
            lines.append(_row(t, r.N, r.value, r.std_error, r.target, "mc", args.seed))
    _emit(lines, args.output)
    return EXIT_OK


def _run_length_spectrum(args) -> int:
    space = _make_space(args)
    n = args.n
    if args.l_max is not None:
        l_max = args.l_max
    elif hasattr(space, "diameter"):
        l_max = n * space.diameter
    else:
        l_max = n * 8.0
    spec = mc.SamplerSpec(space, seed=args.seed, samples=args.samples)
    edges, density = mc.estimate_length_density(spec, n, args.bins, l_max)
    lines = [HEADER]
    for i in range(args.bins):
        center = 0.5 * (edges[i] + edges[i + 1])
        closed = None
        if isinstance(space, Circle):
            try:
                closed = float(closed_forms.circle_length_density(n, space.r, center))
            except ValueError:
                pass
        elif isinstance(space, Sphere2):
            try:
                closed = float(closed_forms.sphere_length_density(n, space.r, center))
            except ValueError:
                pass
        elif isinstance(space, LineGaussian) and n == 1:
            import math
            closed = math.sqrt(2 * math.pi) * math.exp(-center * center / 2)
        lines.append(_row(center, n, density[i], 0.0, closed, "mc", args.seed))
    _emit(lines, args.output)
    return EXIT_OK


def _run_interval_weight(args) -> int:
    rows = weight_measures.interval_weight_report(
        args.N, args.L, args.t, samples=args.samples, seed=args.seed)
    lines = ["N,paper_formula,corrected_formula,bruteforce,mc_estimate,mc_stderr"]
    for r in rows:
        lines.append(",".join([str(r.N), _fmt(r.paper_formula), _fmt(r.corrected_formula),
                               _fmt(r.bruteforce), _fmt(r.mc_estimate), _fmt(r.mc_stderr)]))
    _emit(lines, args.output)
    return EXIT_OK


def _run_fekete(args) -> int:
    rows = empirical.fekete_convergence_experiment(args.r, args.m_list, args.N, args.seed)
    lines = [f"# limit constant c = {_fmt(empirical.fekete_constant(args.r))}",
             "m,N,empirical,target,abs_dev"]
    for r in rows:
        lines.append(",".join([str(r.m), str(r.N), _fmt(r.empirical), _fmt(r.target),
                               _fmt(r.abs_dev)]))
    _emit(lines, args.output)
    return EXIT_OK


def _run_catalog(args) -> int:
    rows = closed_forms.catalog_rows(tuple(_t_grid(args)))
    lines = ["space,n,t,closed_form,oracle,abs_diff,citation"]
    for space, n, t, cf, oracle, diff, cite in rows:
        lines.append(",".join([space, str(n), _fmt(t), _fmt(cf), _fmt(oracle),
                               _fmt(diff), f'"{cite}"']))
    _emit(lines, args.output)
    return EXIT_OK


_DISPATCH = {
    "finite": _run_finite,
    "graph": _run_graph,
    "manifold": _run_manifold,
    "weight-check": _run_weight_check,
    "length-spectrum": _run_length_spectrum,
    "interval-weight": _run_interval_weight,
    "fekete-demo": _run_fekete,
    "catalog": _run_catalog,
}


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else EXIT_OK
    try:
        return _DISPATCH[args.command](args)
    except MetricValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (MagnilabError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
