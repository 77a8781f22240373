"""Command-line interface: ``pascal-adic <command> [options]``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 a computation error raised by the library.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import measures as M
from . import subdiagrams as S
from .diagram import Diagram, GenVertex, PascalVertex
from .errors import PascalAdicError
from .export import labels_csv, orbit_json, order_dot, path_records
from .orders import (
    barrier_order,
    canonical_order,
    continuum_order,
    countable_max_order,
    fiber_audit,
    horizontal_zero_segments,
    lift_subdiagram_order,
    max_branching_audit,
    minimal_prefix_count,
    parse_g_table,
)
from .orders.guides import intersection_violations
from .verify import DEFAULT_SEED, SUITES, run_suite
from .vershik import barrier_certificate, fiber_orbit

ORDER_KINDS = ("canonical", "thm41", "thm42", "prop55", "lift")


class InputError(Exception):
    pass


def _rat(text: str) -> Fraction:
    try:
        return M.parse_rational(text)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _window(text: str | None):
    if text is None:
        return None
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError as exc:
        raise InputError(f"window must look like lo:hi, got {text!r}") from exc


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(",")
        return int(a), int(b)
    except ValueError as exc:
        raise InputError(f"expected two integers a,b, got {text!r}") from exc


def _r(x: Fraction) -> str:
    return M.format_rational(x)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- measure -----------------------------------------------------------------------------


def cmd_measure(args) -> tuple[object, int]:
    report: dict = {"type": args.type}
    rows = None
    if args.type == "bernoulli":
        if args.p is None:
            raise InputError("--p is required for bernoulli measures")
        p = M.BernoulliParam(_rat(args.p))
        report["p"] = _r(p.p)
        if args.xmin_level is not None:
            v = M.x_min_level_measure(p, args.xmin_level)
            report["xmin_level"] = {"n": args.xmin_level, "value": _r(v), "float": float(v)}
        if args.cylinder is not None:
            i, j = _pair(args.cylinder)
            v = M.bernoulli_vertex_mass(p, PascalVertex(i, j))
            report["cylinder"] = {"vertex": [i, j], "mass": _r(v)}
        if args.two_sided:
            window = _window(args.window) or (-10, 10)
            t = M.eigen_vector_two_sided(p, window)
            report["two_sided"] = {
                "window": list(window),
                "lambda": _r(t.lam),
                "identity_holds": t.identity_holds,
                "divergent_tail": t.divergent_tail,
                "values": {str(i): _r(x) for i, x in t.values.items()},
            }
        if args.levels is not None:
            rows = []
            for n in range(args.levels + 1):
                total = sum(M.level_masses(p, n), Fraction(0))
                xm = M.x_min_level_measure(p, n)
                rows.append([n, _r(total), _r(xm), float(xm)])
            report["levels"] = [dict(zip(["n", "total", "xmin", "xmin_float"], r)) for r in rows]
            rows = (rows, ["n", "total", "xmin", "xmin_float"])
        if args.sample is not None:
            if args.seed is None:
                raise InputError("--seed is required for sampling")
            paths = M.sample_paths(p, args.depth or 10, args.sample, args.seed)
            report["samples"] = {"prng": M.SAMPLER_PRNG, "seed": args.seed, "endpoints": [list(x.end) for x in paths]}
    else:
        if args.lam is None:
            raise InputError("--lambda is required for eigen measures")
        lam = M.EigenParam(_rat(args.lam))
        report["lambda"] = _r(lam.lam)
        if args.total:
            t = M.mu_lambda_total(lam, args.terms)
            report["total"] = {
                "terms": args.terms,
                "partial": _r(t.partial),
                "infinite": t.infinite,
                "closed_form": None if t.infinite else _r(t.closed_form),
                "remainder": None if t.infinite else _r(t.remainder),
                "remainder_float": None if t.infinite else float(t.remainder),
                "witness": None if t.witness is None else [_r(x) for x in t.witness],
            }
        if args.cylinder is not None:
            i, n = _pair(args.cylinder)
            report["cylinder"] = {"index": i, "level": n, "mass": _r(M.mu_lambda_cylinder(lam, i, n))}
        if args.residual is not None:
            xi = M.eigen_vector_one_sided(lam, args.residual)
            res = M.eigen_residual_one_sided(lam, xi)
            report["residual"] = {"size": args.residual, "max_abs": _r(max(map(abs, res), default=Fraction(0)))}
        if args.restriction is not None:
            r = M.restriction_check(lam, args.restriction, args.depth or 12)
            report["restriction"] = {
                "anchor": args.restriction,
                "p": _r(r.p),
                "ok": r.ok,
                "checked": r.checked,
                "counterexample": None if r.counterexample is None else [str(x) for x in r.counterexample],
            }
    return (report, rows), 0


# -- order -------------------------------------------------------------------------------


def _build_order(args):
    depth = args.depth
    kind = args.kind
    extra: dict = {}
    if kind == "canonical":
        d = _diagram_from_args(args, default_kind="pascal")
        return canonical_order(d), extra
    if kind == "thm42":
        return countable_max_order(depth or 64), extra
    if kind == "thm41":
        c = continuum_order(depth or 512, args.max_dyadic)
        extra["construction"] = c
        return c.order, extra
    if kind == "prop55":
        window = _window(args.window) or (-2, 40)
        d = Diagram.gen2(depth or 56, *window)
        g = parse_g_table(args.g) if args.g else None
        order, barriers = barrier_order(d, g)
        extra["barriers"] = barriers
        return order, extra
    # lift of the countable-max order into a generalized diagram
    window = _window(args.window)
    depth = depth or 16
    inner = countable_max_order(max(depth, 4))
    if window is None:
        outer = Diagram.gen1(depth, hi=args.anchor + depth + 1)
    else:
        outer = Diagram.gen2(depth, *window)
    return lift_subdiagram_order(outer, inner, args.anchor, args.fill), extra


def _diagram_from_args(args, default_kind: str) -> Diagram:
    kind = args.diagram or default_kind
    depth = args.depth or 8
    if kind == "pascal":
        return Diagram.pascal(depth)
    window = _window(args.window)
    if kind == "gen1":
        return Diagram.gen1(depth, hi=window[1] if window else depth + 1)
    if window is None:
        raise InputError("gen2 needs --window lo:hi")
    return Diagram.gen2(depth, *window)


def cmd_order(args):
    order, extra = _build_order(args)
    d = order.diagram
    report: dict = {"kind": args.kind, "name": order.name, "diagram": d.to_descriptor()}
    code = 0
    if args.audit:
        a = fiber_audit(order)
        report["fiber_audit"] = {"checked": a.checked, "ok": a.ok, "violations": [str(v) for v in a.violations[:20]]}
        code |= 0 if a.ok else 1
        if d.is_pascal:
            table = []
            k = 0
            while 4 ** (k + 1) <= d.depth:
                m, n = 4**k, 4 ** (k + 1)
                table.append({"m": m, "n": n, "min": minimal_prefix_count(order, m, n, "min")})
                k += 1
            report["min_prefix_counts"] = table
            rep = max_branching_audit(order)
            report["branching"] = {
                "count": len(rep.branching_vertices),
                "max_per_path": rep.max_per_path,
                "max_turns_per_path": rep.max_turns_per_path,
            }
            report["max_zero_segments_per_row"] = max(
                (len(horizontal_zero_segments(order, y)) for y in range(d.depth)), default=0
            )
        if "construction" in extra:
            c = extra["construction"]
            report["guides"] = [
                {
                    "r": _r(g.r),
                    "start": list(g.start),
                    "stabilization_level": g.stabilization_level,
                    "max_band_distance": round(g.max_band_distance(), 6),
                }
                for g in c.guide_list()
            ]
            report["shift"] = c.shift
            report["separations"] = [round(s.separation, 6) for s in c.steps]
            bad = intersection_violations(c.guides)
            report["intersection_violations"] = len(bad)
            code |= 1 if bad else 0
    if args.barrier_check is not None:
        if "barriers" not in extra:
            raise InputError("--barrier-check needs --kind prop55")
        res = []
        for b in extra["barriers"]:
            if b.n != args.barrier_check:
                continue
            r = barrier_certificate(extra["barriers"], d, b.n, b.i)
            res.append({"n": b.n, "i": b.i, "K": b.K, "hit_all": r.hit_all, "states": r.states})
            code |= 0 if r.hit_all else 1
        if not res:
            raise InputError(f"no barrier set built for n={args.barrier_check}")
        report["barrier_check"] = res
    if args.dot is not None:
        highlight = set()
        if "construction" in extra:
            c = extra["construction"]
            highlight = c.zero_edges | c.one_edges
        with open(args.dot, "w") as fh:
            fh.write(order_dot(order, args.dot_depth, highlight))
        report["dot"] = args.dot
    if args.format == "dot":
        return order_dot(order, args.dot_depth), code
    if args.format == "csv":
        return labels_csv(order, args.dot_depth), code
    return report, code


# -- vershik -----------------------------------------------------------------------------


def cmd_vershik(args):
    args.kind = args.order
    order, _ = _build_order(args)
    a, b = _pair(args.vertex)
    v = order.diagram.vertex(a, b)
    chain = fiber_orbit(order, v, cap=args.cap)
    if args.format != "csv":
        return orbit_json(order, chain) + "\n", 0
    rows = []
    for k, x in enumerate(chain):
        for rec in path_records(order, x):
            rows.append([k, rec["level"], rec["from"], rec["to"], rec["label"]])
    return _csv(rows, ["path", "level", "from", "to", "label"]), 0


# -- band / extend -----------------------------------------------------------------------


def cmd_band(args):
    p = M.BernoulliParam(_rat(args.p))
    eps = _rat(args.epsilon)
    depth = args.depth or 200
    sub, spec = S.build_band_subdiagram(p, eps, depth)
    m = S.band_measure_dp(p, spec, depth)
    rows = [[n, *sub.interval(n)] for n in range(depth + 1)]
    if args.format == "csv":
        return _csv(rows, ["level", "lo", "hi"]), 0
    report = {
        "spec": spec.to_json(),
        "depth": depth,
        "measure": _r(m),
        "measure_float": float(m),
        "certified": m >= 1 - eps,
        "intervals": rows,
    }
    if args.mc is not None:
        from .verify import _mc_band_frequency

        seed = DEFAULT_SEED if args.seed is None else args.seed
        report["monte_carlo"] = {
            "samples": args.mc,
            "seed": seed,
            "prng": M.SAMPLER_PRNG,
            "frequency": _mc_band_frequency(spec, depth, args.mc, seed),
        }
    if args.q is not None:
        dj = S.band_disjointness(p.p, _rat(args.q), args.band_index)
        report["disjointness"] = {"q": args.q, "i": args.band_index, "disjoint": dj.disjoint, "least_index": dj.least_index}
    return report, 0


def cmd_extend(args):
    p = M.BernoulliParam(_rat(args.p))
    r = S.extension_value(args.anchor, p, range(args.n_max + 1))
    rows = [[n, _r(v), float(v)] for n, v in r.rows()]
    if args.format == "csv":
        return _csv(rows, ["n", "partial_value", "float_value"]), 0
    return {
        "anchor": args.anchor,
        "p": _r(p.p),
        "diverged": r.diverged,
        "closed_form": None if r.closed_form is None else _r(r.closed_form),
        "last": {"n": rows[-1][0], "value_float": rows[-1][2]},
        "values": rows,
    }, 0


# -- verify ------------------------------------------------------------------------------


def cmd_verify(args):
    seed = DEFAULT_SEED if args.seed is None else args.seed
    results = run_suite(args.suite, slow=args.slow, seed=seed)
    code = 0 if all(r.passed for r in results) else 1
    if args.json or args.format == "json":
        return {
            "suite": args.suite,
            "passed": code == 0,
            "checks": [{"criterion": r.criterion, "name": r.name, "passed": r.passed, "measured": r.measured} for r in results],
        }, code
    lines = [f"[{'PASS' if r.passed else 'FAIL'}] {r.criterion:>2} {r.name}: {r.measured}" for r in results]
    return "\n".join(lines) + "\n", code


# -- entry point ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, help="last constructed level")
    common.add_argument("--window", help="index window lo:hi for generalized diagrams")
    common.add_argument("--seed", type=int, help="seed for sampling commands")
    common.add_argument("--format", choices=("json", "csv", "dot"), help="default json (text lines for verify)")
    common.add_argument("--out", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="pascal-adic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", parents=[common], help="exact measure computations")
    m.add_argument("--type", choices=("bernoulli", "eigen"), required=True)
    m.add_argument("--p")
    m.add_argument("--lambda", dest="lam")
    m.add_argument("--xmin-level", type=int)
    m.add_argument("--cylinder", help="endpoint i,j (bernoulli) or index,level (eigen)")
    m.add_argument("--total", action="store_true")
    m.add_argument("--terms", type=int, default=60)
    m.add_argument("--residual", type=int, metavar="SIZE")
    m.add_argument("--restriction", type=int, metavar="ANCHOR")
    m.add_argument("--two-sided", action="store_true")
    m.add_argument("--levels", type=int, metavar="N", help="level table for n = 0..N")
    m.add_argument("--sample", type=int, metavar="COUNT")
    m.set_defaults(func=cmd_measure)

    def order_args(sp, flag="--kind"):
        sp.add_argument(flag, choices=ORDER_KINDS, default="canonical")
        sp.add_argument("--diagram", choices=("pascal", "gen1", "gen2"))
        sp.add_argument("--max-dyadic", type=int, default=1)
        sp.add_argument("--g", help='barrier table such as "0,0=1;0,1=2"')
        sp.add_argument("--anchor", type=int, default=1)
        sp.add_argument("--fill", choices=("leftToRight", "outwardFromInner"), default="leftToRight")

    o = sub.add_parser("order", parents=[common], help="build and audit orders")
    order_args(o)
    o.add_argument("--audit", action="store_true")
    o.add_argument("--barrier-check", type=int, metavar="N")
    o.add_argument("--dot", metavar="PATH", help="also write a DOT file")
    o.add_argument("--dot-depth", type=int, help="levels drawn in DOT/CSV output")
    o.set_defaults(func=cmd_order)

    v = sub.add_parser("vershik", parents=[common], help="dump the successor orbit of a fiber")
    order_args(v, "--order")
    v.add_argument("--vertex", required=True, help="i,j or index,level")
    v.add_argument("--cap", type=int, default=10**5)
    v.set_defaults(func=cmd_vershik)

    b = sub.add_parser("band", parents=[common], help="band subdiagram of a Bernoulli measure")
    b.add_argument("--p", required=True)
    b.add_argument("--epsilon", default="1/10")
    b.add_argument("--mc", type=int, metavar="COUNT")
    b.add_argument("--q", help="second parameter for the disjointness test")
    b.add_argument("--band-index", type=int, default=4)
    b.set_defaults(func=cmd_band)

    e = sub.add_parser("extend", parents=[common], help="measure extension partial values")
    e.add_argument("--p", required=True)
    e.add_argument("--anchor", type=int, default=1)
    e.add_argument("--n-max", type=int, default=200)
    e.set_defaults(func=cmd_extend)

    ve = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    ve.add_argument("suite", nargs="?", choices=SUITES, default="all")
    ve.add_argument("--json", action="store_true")
    ve.add_argument("--slow", action="store_true", help="include the depth-2048 guide audit")
    ve.set_defaults(func=cmd_verify)
    return parser


def _render(payload, fmt: str) -> str:
    if isinstance(payload, str):
        return payload
    if isinstance(payload, tuple):
        report, rows = payload
        if fmt == "csv" and rows is not None:
            return _csv(*rows)
        payload = report
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code = args.func(args)
    except (InputError, ValueError, ZeroDivisionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except PascalAdicError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    text = _render(payload, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
