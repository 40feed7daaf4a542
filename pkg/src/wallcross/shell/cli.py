"""``wallcross`` command line.

Every subcommand prints a short text summary, or a JSON document with
``--json``; ``--out`` redirects either to a file.  Exit status is 0 on success,
2 for invalid input or failed checks and 3 when a numerical certificate fails.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from .. import atlas, classes, floer, markov, numeric, tropical
from ..errors import CertificationError, ValidationError
from ..figures import FIGURES, build_figure, propagated_wall_slopes
from ..laurent import format_expr
from ..presets import PRESETS, load_figure, load_preset
from .report import run_report

EXIT_OK, EXIT_INVALID, EXIT_UNCERTIFIED = 0, 2, 3


def plain(x):
    """Convert library values into JSON-friendly data."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [plain(v) for v in items]
    if hasattr(x, "to_data"):
        return plain(x.to_data())
    return str(x)


def emit(args, data, text: str):
    if args.json:
        out = json.dumps(plain(data), indent=2, sort_keys=True) + "\n"
    else:
        out = text.rstrip("\n") + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)


def _pt(p):
    return "(" + ", ".join(str(x) for x in p) + ")"


# --- markov ---------------------------------------------------------------------


def cmd_markov_tree(args):
    tree = markov.markov_tree_with_parents(args.depth)
    triples = sorted(tree, key=lambda t: (max(t.astuple()), t.astuple()))
    data = {
        "depth": args.depth,
        "triples": [t.astuple() for t in triples],
        "edges": [[tree[t].astuple(), t.astuple()] for t in triples if tree[t] is not None],
    }
    lines = [f"{len(triples)} Markov triples within {args.depth} mutations of (1,1,1)"]
    lines += [f"  {t}" + (f"  <- {tree[t]}" if tree[t] is not None else "") for t in triples]
    emit(args, data, "\n".join(lines))


# --- atlas ----------------------------------------------------------------------


def _parse_path(text: str):
    try:
        return [markov.MarkovTriple.of(int(x) for x in part.split(",")) for part in text.split(":")]
    except ValueError:
        raise ValidationError(f"cannot read triple path {text!r}; use a,b,c:a,b,c:...") from None


def _diagram_data(d):
    return {
        "vertices": [[str(x) for x in v] for v in d.vertices],
        "corner_determinants": d.corner_determinants(),
        "cuts": [{"node": [str(x) for x in c.node], "direction": c.direction,
                  "anchor": [str(x) for x in c.boundary_anchor]} for c in d.cuts],
    }


def cmd_atlas_mutate(args):
    path = _parse_path(args.path)
    seq = atlas.mutation_sequence(atlas.mutation_start(Fraction(args.size)), path)
    data = {"steps": [{"triple": t.astuple(), "weights": atlas.weights(d), "diagram": _diagram_data(d)}
                      for t, d in zip(path, seq)]}
    lines = [f"{t}: weights {atlas.weights(d)}, corners {' '.join(_pt(v) for v in d.vertices)}"
             for t, d in zip(path, seq)]
    if args.svg:
        Path(args.svg).write_text(tropical.render_svg(seq[-1], title=f"B{path[-1].weights()}"), encoding="utf-8")
        lines.append(f"wrote {args.svg}")
        data["svg"] = args.svg
    emit(args, data, "\n".join(lines))


# --- chart / classes --------------------------------------------------------------


def cmd_chart_chain(args):
    p = load_preset(args.preset)
    Ws = p.chain()
    steps = [{"chart": s.to_chart.names, "kind": type(s).__name__, "potential": format_expr(W, s.to_chart.ring),
              "terms": len(W)} for s, W in zip(p.steps, Ws)]
    initial = format_expr(p.W0, p.charts[p.initial_chart].ring)
    data = {"preset": p.name, "initial": initial, "steps": steps}
    lines = [f"W0 = {initial}"] + [f"[{','.join(s['chart'])}] ({s['terms']} terms) {s['potential']}" for s in steps]
    if p.compact:
        Wc, chart = p.compact_potential()
        data["compact"] = {"chart": chart.names, "potential": format_expr(Wc, chart.ring)}
        lines.append(f"[{','.join(chart.names)}] {data['compact']['potential']}")
    emit(args, data, "\n".join(lines))


def cmd_classes_enumerate(args):
    p = load_preset(args.preset)
    divisors = args.divisors.split(",") if args.divisors else p.positivity_divisors
    found = classes.enumerate_maslov2(p.table, divisors, p.general_form)
    data = {"preset": p.name, "positivity_divisors": divisors, "classes": [c.as_dict() for c in found],
            "labels": [str(c) for c in found]}
    emit(args, data, f"{len(found)} Maslov index 2 classes\n" + "\n".join(f"  {c}" for c in found))


def cmd_classes_match(args):
    p = load_preset(args.preset)
    found = classes.enumerate_maslov2(p.table, p.positivity_divisors, p.general_form)
    rep = classes.match_monomials(p.final_potential(), p.chart_to_class, p.table, found, p.final_chart.ring)
    entries = [{"monomial": str(e.monomial), "coefficient": e.coefficient, "class": e.cls and str(e.cls),
                "maslov": e.maslov, "flags": e.flags} for e in rep.entries]
    data = {"preset": p.name, "entries": entries, "hit": [str(c) for c in rep.hit],
            "missing": [str(c) for c in rep.missing], "total_multiplicity": rep.total_multiplicity}
    lines = [f"  {e['coefficient']} * {e['monomial']} -> {e['class']}" + (f"  [{'; '.join(e['flags'])}]" if e["flags"] else "")
             for e in entries]
    lines.append(f"{len(rep.hit)} of {len(found)} classes hit, total multiplicity {rep.total_multiplicity}")
    if rep.missing:
        lines.append("missing: " + ", ".join(str(c) for c in rep.missing))
    emit(args, data, "\n".join(lines))


# --- tropical -------------------------------------------------------------------


def _figure(args):
    return build_figure(args.figure) if args.rebuild else load_figure(args.figure)


def cmd_tropical_render(args):
    fig = _figure(args)
    svg = tropical.render_svg(fig.diagram, fig.discs, fig.walls, title=fig.caption)
    target = args.svg or f"{fig.name}.svg"
    Path(target).write_text(svg, encoding="utf-8")
    emit(args, {"figure": fig.name, "svg": target, "discs": len(fig.discs)},
         f"wrote {target} ({len(fig.discs)} discs)")


def cmd_tropical_check(args):
    fig = _figure(args)
    rows = [{"label": d.label, "maslov": tropical.maslov_of_tropical(d), "unbalanced": tropical.check_balanced(d)}
            for d in fig.discs]
    ok = all(r["maslov"] == 2 and not r["unbalanced"] for r in rows)
    emit(args, {"figure": fig.name, "discs": rows, "ok": ok},
         "\n".join(f"  {r['label']}: Maslov {r['maslov']}" for r in rows) + f"\n{'ok' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_tropical_slopes(args):
    s = propagated_wall_slopes()
    emit(args, s, "\n".join(f"{k}: {v}" for k, v in s.items()))


# --- numeric --------------------------------------------------------------------


def _params(args):
    return numeric.DiscParams(c=args.c, r=args.r, t=args.t, theta=args.theta)


def cmd_numeric_certify(args):
    if args.family != "h2b":
        raise ValidationError(f"only the h2b family is solved at t > 0, not {args.family!r}")
    s = numeric.solve_family_H2b(args.m, _params(args), steps=args.steps)
    count = numeric.algebraic_count_H2b(s)
    data = {"solution_set": s, "count": count}
    if s.solutions:
        lines = [f"a = {x.a:.12g}  residual {x.residual:.2e}" for x in s.solutions]
        lines.append(f"theta shift permutation {s.orbit_data['permutation']}, error {s.orbit_data['shift_error']:.2e}")
    else:
        ex = s.orbit_data["exclusion"]
        lines = [f"no solutions: {ex['grid_points']} grid points, minimum residual {ex['min_residual']:.3g}"]
    lines.append(f"count {count}")
    emit(args, data, "\n".join(lines))


def cmd_numeric_limit(args):
    I = [int(x) for x in args.I.split(",") if x]
    d = numeric.limit_disc_p114(I, args.theta, args.c, args.r)
    data = {"I": I, "theta": args.theta, "boundary_deviation": d.boundary_deviation(),
            "torus_deviation": d.torus_deviation(), "avoids_orbifold_point": d.avoids_orbifold_point()}
    emit(args, data, "\n".join(f"{k}: {v}" for k, v in data.items()))


def cmd_numeric_orbits(args):
    sizes = [args.size] if args.size is not None else range(6)
    data = {str(k): {"count": numeric.orbit_count_z5(k), "orbits": numeric.z5_orbits(k)} for k in sizes}
    emit(args, data, "\n".join(f"|I| = {k}: {v['count']} discs in {len(v['orbits'])} orbits" for k, v in data.items()))


def cmd_numeric_asymptotics(args):
    rep = numeric.verify_asymptotics(args.family, m=args.m, p=_params(args))
    emit(args, rep, "\n".join(f"{k}: slope {v:.3f}" for k, v in rep.slopes.items()))


# --- floer ----------------------------------------------------------------------


def _parse_point(text: str) -> dict[str, complex]:
    point = {}
    for part in text.split(","):
        name, sep, value = part.partition("=")
        if not sep:
            raise ValidationError(f"cannot read {part!r}; use name=value")
        try:
            point[name.strip()] = complex(value.strip().replace("i", "j"))
        except ValueError:
            raise ValidationError(f"{value!r} is not a number") from None
    return point


def _floer_setup(p):
    W, chart = p.floer_potential()
    values = {k: Fraction(v) for k, v in p.floer["area_values"].items()}
    return floer.specialize(W, values), list(p.floer["vars"]), chart


def cmd_floer_crit(args):
    p = load_preset(args.preset)
    W, vars, chart = _floer_setup(p)
    pts = floer.critical_points(W, vars, seed=args.seed, threads=args.threads)
    rows = [{"point": pt, "delta2": max(abs(x) for x in floer.pearl_delta2(W, pt, vars))} for pt in pts]
    data = {"preset": p.name, "potential": format_expr(W, chart.ring), "critical_points": rows}
    lines = [f"W = {data['potential']}", f"{len(pts)} critical points"]
    lines += ["  " + ", ".join(f"{k} = {v:.10g}" for k, v in r["point"].items()) + f"   |delta2| {r['delta2']:.1e}"
              for r in rows]
    emit(args, data, "\n".join(lines))


def cmd_floer_delta2(args):
    p = load_preset(args.preset)
    W, vars, _ = _floer_setup(p)
    point = _parse_point(args.at)
    unknown = set(point) - set(vars)
    if unknown or set(vars) - set(point):
        raise ValidationError(f"give a value for exactly {', '.join(vars)}")
    d2 = floer.pearl_delta2(W, point, vars)
    norm = max(abs(x) for x in d2)
    data = {"point": point, "delta2": dict(zip(vars, d2)), "max": norm, "vanishes": norm <= floer.CRIT_TOL}
    emit(args, data, "\n".join(f"{v} dW/d{v} = {x:.6g}" for v, x in zip(vars, d2))
         + f"\ndelta2 {'vanishes' if data['vanishes'] else 'does not vanish'}")


def cmd_floer_inflate(args):
    p = load_preset(args.preset)
    cfg, t = p.inflation, p.table
    j = t.divisors.index(cfg["divisor"])
    pair = {b: t.rows[b][j] for b in t.basis}
    tgt = cfg["target"]
    inf = floer.monotone_inflation(floer.AreaFunctional(cfg["areas"]), pair, t.maslov_row,
                                   Fraction(tgt["ratio"]), (tgt["numerator"], tgt["denominator"]))
    mono = floer.check_monotone(inf.areas, t.maslov_row)
    data = {"divisor": cfg["divisor"], "kappa": inf.kappa, "K": inf.describe(), "areas": inf.areas.areas,
            "monotone": mono}
    emit(args, data, f"inflate along {cfg['divisor']}: {inf.describe()}\n"
         + ", ".join(f"area({k}) = {v}" for k, v in inf.areas.areas.items()) + f"\nmonotone: {mono}")
    return EXIT_OK if mono else EXIT_INVALID


# --- report ---------------------------------------------------------------------


def cmd_report(args):
    rep = run_report(load_preset(args.preset), seed=args.seed, threads=args.threads, numeric=not args.skip_numeric)
    text = rep.to_json()
    if args.json:
        out = text
    else:
        checks = rep.doc["checks"]
        bad = [c for c in checks if not c["ok"]]
        failed_stages = [k for k, v in rep.doc["stages"].items() if isinstance(v, dict) and v.get("failed")]
        out = "\n".join(
            [f"{c['name']}: {'ok' if c['ok'] else 'FAILED'}" for c in checks]
            + [f"stage {k} failed: {rep.doc['stages'][k]['error']}" for k in failed_stages]
            + [f"{len(checks) - len(bad)}/{len(checks)} checks passed"]
        ) + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return rep.exit_code


# --- argument parsing -----------------------------------------------------------------


def _common(p):
    p.add_argument("--json", action="store_true", help="print JSON instead of text")
    p.add_argument("--out", help="write output to this file")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized starts")
    p.add_argument("--threads", type=int, default=1, help="worker threads")


def _preset_arg(p, required=True):
    p.add_argument("--preset", required=required, help=f"built-in ({', '.join(PRESETS)}) or a preset JSON path")


def _disc_args(p):
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--t", type=float, default=1e-3)
    p.add_argument("--theta", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wallcross", description="Wall-crossing computations on almost toric bases.")
    top = parser.add_subparsers(dest="group", required=True)

    def leaf(sub, name, fn, help):
        p = sub.add_parser(name, help=help)
        _common(p)
        p.set_defaults(fn=fn)
        return p

    g = top.add_parser("markov", help="Markov triples").add_subparsers(dest="cmd", required=True)
    leaf(g, "tree", cmd_markov_tree, "triples within N mutations of (1,1,1)").add_argument("--depth", type=int, required=True)

    g = top.add_parser("atlas", help="almost toric base diagrams").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "mutate", cmd_atlas_mutate, "mutate the CP^2 triangle along a path of Markov triples")
    p.add_argument("--path", required=True, help="e.g. 1,1,1:1,1,2:1,2,5")
    p.add_argument("--svg", help="draw the last diagram")
    p.add_argument("--size", default="1", help="side length of the starting triangle")

    g = top.add_parser("chart", help="potentials across walls").add_subparsers(dest="cmd", required=True)
    _preset_arg(leaf(g, "chain", cmd_chart_chain, "potential after each chain step"))

    g = top.add_parser("classes", help="relative classes").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "enumerate", cmd_classes_enumerate, "Maslov index 2 classes")
    _preset_arg(p)
    p.add_argument("--divisors", help="comma-separated positivity divisors (default: the preset's)")
    _preset_arg(leaf(g, "match", cmd_classes_match, "match monomials of the final potential to classes"))

    g = top.add_parser("tropical", help="tropical discs").add_subparsers(dest="cmd", required=True)
    for name, fn, help in (("render", cmd_tropical_render, "draw a figure as SVG"),
                           ("check", cmd_tropical_check, "balancing and Maslov index of each disc")):
        p = leaf(g, name, fn, help)
        p.add_argument("--figure", required=True, help=f"{', '.join(FIGURES)} or a JSON path")
        p.add_argument("--rebuild", action="store_true", help="rebuild the figure instead of loading the asset")
        if name == "render":
            p.add_argument("--svg", help="SVG path (default <figure>.svg)")
    leaf(g, "slopes", cmd_tropical_slopes, "wall directions carried through the other cut")

    g = top.add_parser("numeric", help="holomorphic disc solver").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "certify", cmd_numeric_certify, "solve and count one disc family")
    p.add_argument("--family", default="h2b")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--steps", type=int, default=256, help="continuation steps over the theta period")
    _disc_args(p)
    p = leaf(g, "limit", cmd_numeric_limit, "check a t = 0 limit disc")
    p.add_argument("--I", default="", help="comma-separated subset of 1..5")
    _disc_args(p)
    leaf(g, "orbits", cmd_numeric_orbits, "Z/5 orbit counts").add_argument("--size", type=int)
    p = leaf(g, "asymptotics", cmd_numeric_asymptotics, "log-log slopes as t -> 0")
    p.add_argument("--family", default="h2b")
    p.add_argument("--m", type=int, default=2)
    _disc_args(p)

    g = top.add_parser("floer", help="critical points and the pearl differential").add_subparsers(dest="cmd", required=True)
    _preset_arg(leaf(g, "crit", cmd_floer_crit, "critical points of the preset potential"))
    p = leaf(g, "delta2", cmd_floer_delta2, "delta_2 at a given local system")
    _preset_arg(p)
    p.add_argument("--at", required=True, help="e.g. w=0.125,u=2.25")
    _preset_arg(leaf(g, "inflate", cmd_floer_inflate, "monotone inflation coefficient"))

    p = top.add_parser("report", help="run every check for a preset")
    _common(p)
    _preset_arg(p)
    p.add_argument("--skip-numeric", action="store_true", help="leave out the disc solver stage")
    p.set_defaults(fn=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.fn(args)
    except CertificationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    except (ValidationError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
