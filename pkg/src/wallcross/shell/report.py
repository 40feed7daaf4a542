"""End-to-end report for a preset: chain, classes, numerics, Floer data, inflation."""

from __future__ import annotations

import json
import math
from itertools import combinations
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from ..classes import enumerate_maslov2, match_monomials
from ..errors import CertificationError, ValidationError
from ..floer import AreaFunctional, check_monotone, hf_nonvanishing, monotone_inflation, monotonicity_constant
from ..laurent import format_expr
from ..numeric import (
    DiscParams,
    algebraic_count_H2b,
    is_cyclic_shift,
    limit_disc_p114,
    orbit_count_z5,
    solve_family_H2b,
    verify_asymptotics,
)
from ..presets import Preset

DIGITS = 10


def _num(x: float) -> float:
    return float(round(x, DIGITS)) + 0.0


def _cx(z: complex) -> list[float]:
    return [_num(z.real), _num(z.imag)]


def _q(x: Fraction) -> str:
    return str(Fraction(x))


class Report:
    def __init__(self, name: str):
        self.doc = {"preset": name, "stages": {}, "checks": []}
        self.failures = {"validation": 0, "numeric": 0}

    def check(self, name: str, ok: bool, detail=None):
        entry = {"name": name, "ok": bool(ok)}
        if detail is not None:
            entry["detail"] = detail
        self.doc["checks"].append(entry)
        if not ok:
            self.failures["validation"] += 1

    def stage(self, name, fn):
        try:
            self.doc["stages"][name] = fn()
        except CertificationError as exc:
            self.failures["numeric"] += 1
            self.doc["stages"][name] = {"failed": True, "error": f"{type(exc).__name__}: {exc}"}
        except ValidationError as exc:
            self.failures["validation"] += 1
            self.doc["stages"][name] = {"failed": True, "error": f"{type(exc).__name__}: {exc}"}

    @property
    def exit_code(self) -> int:
        if self.failures["numeric"]:
            return 3
        if self.failures["validation"]:
            return 2
        return 0

    def to_json(self) -> str:
        self.doc["ok"] = self.exit_code == 0
        return json.dumps(self.doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _chain_stage(p: Preset, rep: Report):
    charts = [s.to_chart for s in p.steps]
    Ws = p.chain()
    W = Ws[-1]
    coeffs = sorted(Fraction(c) for _, c in W.items())
    expected = sorted(Fraction(c) for c in p.expect["coefficients"])
    rep.check("chain.final_terms", len(W) == p.expect["final_terms"], len(W))
    rep.check("chain.coefficients", coeffs == expected, [_q(c) for c in coeffs])
    out = {
        "initial": format_expr(p.W0, p.charts[p.initial_chart].ring),
        "steps": [
            {"chart": list(c.names), "potential": format_expr(Wk, c.ring), "terms": len(Wk)}
            for c, Wk in zip(charts, Ws)
        ],
        "coefficient_sum": _q(sum(coeffs)),
    }
    if p.compact:
        Wc, chart = p.compact_potential()
        out["compact"] = {"chart": list(chart.names), "potential": format_expr(Wc, chart.ring)}
    return out


def _classes_stage(p: Preset, rep: Report):
    enum = enumerate_maslov2(p.table, p.positivity_divisors, p.general_form)
    match = match_monomials(p.final_potential(), p.chart_to_class, p.table, enum, p.final_chart.ring)
    missing = [str(c) for c in match.missing]
    rep.check("classes.enumerated", len(enum) == p.expect["enumerated"], len(enum))
    rep.check("classes.matched", len(match.hit) == p.expect["matched"], len(match.hit))
    rep.check("classes.missing", sorted(missing) == sorted(p.expect["missing"]), missing)
    rep.check("classes.flagged", not match.flagged, [str(e.monomial) for e in match.flagged])
    return {
        "enumerated": [str(c) for c in enum],
        "matches": [
            {
                "monomial": str(e.monomial),
                "coefficient": _q(e.coefficient),
                "class": None if e.cls is None else str(e.cls),
                "maslov": e.maslov,
                "enumerated": e.enumerated,
                "flags": e.flags,
            }
            for e in match.entries
        ],
        "missing": missing,
        "total_multiplicity": _q(match.total_multiplicity),
    }


EXPECTED_H2B = {2: (4, 2), 1: (4, 4), 0: (4, 2), -1: (0, 0)}


def _numeric_stage(p: Preset, rep: Report, threads: int):
    cfg = p.numeric
    params = DiscParams(c=float(Fraction(cfg["c"])), r=float(Fraction(cfg["r"])), t=float(Fraction(cfg["t"])))
    steps = int(cfg["theta_grid"])

    def one(m):
        s = solve_family_H2b(m, params, steps=steps)
        return m, s, algebraic_count_H2b(s)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, sorted(EXPECTED_H2B, reverse=True)))
    else:
        results = [one(m) for m in sorted(EXPECTED_H2B, reverse=True)]
    families = {}
    for m, s, count in results:
        n_expected, c_expected = EXPECTED_H2B[m]
        rep.check(f"numeric.h2b[{m}].solutions", len(s.solutions) == n_expected, len(s.solutions))
        rep.check(f"numeric.h2b[{m}].count", count == c_expected, count)
        entry = {"solutions": len(s.solutions), "count": count, "index_set": list(s.index_set)}
        if s.solutions:
            entry["max_residual_below_1e-9"] = max(x.residual for x in s.solutions) <= 1e-9
            entry["a"] = [_cx(x.a) for x in s.solutions]
            entry["permutation"] = s.orbit_data["permutation"]
            entry["shift_error_below_1e-6"] = s.orbit_data["shift_error"] <= 1e-6
            rep.check(f"numeric.h2b[{m}].cyclic_shift",
                      is_cyclic_shift(s.orbit_data["permutation"]) and entry["shift_error_below_1e-6"])
        else:
            ex = s.orbit_data["exclusion"]
            entry["exclusion"] = {"grid_points": ex["grid_points"], "excluded": ex["excluded"],
                                  "min_residual": _num(ex["min_residual"])}
        families[str(m)] = entry
    asym = verify_asymptotics(m=2, p=params)
    slopes = {k: _num(v) for k, v in asym.slopes.items()}
    rep.check("numeric.asymptotics", all(abs(slopes[k] - 0.5) <= 0.1 for k in ("abs_a", "abs_eta0")), slopes)
    worst = 0.0
    for size in range(6):
        for I in combinations(range(1, 6), size):
            for j in range(8):
                d = limit_disc_p114(I, j * math.pi / 4, params.c, params.r)
                worst = max(worst, d.boundary_deviation())
    rep.check("numeric.limit_discs", worst < 1e-10)
    orbit = [orbit_count_z5(k) for k in range(6)]
    rep.check("numeric.z5_counts", orbit == [1, 5, 10, 10, 5, 1], orbit)
    return {
        "params": {"c": cfg["c"], "r": cfg["r"], "t": cfg["t"], "theta_grid": steps},
        "h2b": families,
        "asymptotics": {"t": asym.t, "slopes": slopes, "matching": asym.matching},
        "limit_discs": {"max_boundary_deviation_below_1e-10": worst < 1e-10},
        "z5_counts": orbit,
    }


def _floer_stage(p: Preset, rep: Report, seed: int, threads: int):
    W, chart = p.floer_potential()
    vals = {k: Fraction(v) for k, v in p.floer["area_values"].items()}
    hf = hf_nonvanishing(W, p.floer["vars"], vals, seed=seed, threads=threads)
    pts = hf["critical_points"]
    if "critical_points" in p.expect:
        rep.check("floer.critical_points", len(pts) == p.expect["critical_points"], len(pts))
    rep.check("floer.delta2_vanishes", all(n <= 1e-9 for n in hf["delta2_max"]))
    rep.check("floer.hf_nonvanishing", hf["nonvanishing"])
    return {
        "chart": list(chart.names),
        "area_values": {k: _q(v) for k, v in vals.items()},
        "critical_points": [{k: _cx(v) for k, v in pt.items()} for pt in pts],
        "delta2_below_1e-9": [n <= 1e-9 for n in hf["delta2_max"]],
    }


def _inflation_stage(p: Preset, rep: Report):
    cfg = p.inflation
    t = p.table
    j = t.divisors.index(cfg["divisor"])
    pair = {b: t.rows[b][j] for b in t.basis}
    areas = AreaFunctional({k: Fraction(v) for k, v in cfg["areas"].items()})
    num, den = cfg["target"]["numerator"], cfg["target"]["denominator"]
    target = Fraction(cfg["target"]["ratio"])
    ratio = Fraction(pair[num], pair[den])
    rep.check("inflation.divisor_ratio_exceeds_target", ratio > target, f"{ratio} > {target}")
    inf = monotone_inflation(areas, pair, t.maslov_row, target, (num, den))
    mono = check_monotone(inf.areas, t.maslov_row)
    rep.check("inflation.monotone_after", mono)
    M = monotonicity_constant(inf.areas, t.maslov_row)
    return {
        "divisor": cfg["divisor"],
        "pairings": pair,
        "divisor_ratio": _q(ratio),
        "target": _q(target),
        "kappa": _q(inf.kappa),
        "K": inf.describe(),
        "inflated_areas": {k: _q(v) for k, v in inf.areas.areas.items()},
        "monotonicity_constant": None if M is None else _q(M),
    }


def run_report(p: Preset, seed: int = 0, threads: int = 1, numeric: bool = True) -> Report:
    rep = Report(p.name)
    rep.stage("chain", lambda: _chain_stage(p, rep))
    rep.stage("classes", lambda: _classes_stage(p, rep))
    if numeric and p.numeric:
        rep.stage("numeric", lambda: _numeric_stage(p, rep, threads))
    rep.stage("floer", lambda: _floer_stage(p, rep, seed, threads))
    rep.stage("inflation", lambda: _inflation_stage(p, rep))
    return rep
