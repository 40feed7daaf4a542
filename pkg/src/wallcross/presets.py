"""Preset registry: geometry data shipped as JSON assets and checked against schemas."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .atlas import BaseDiagram, Cut
from .chart import ChangeBasis, Chart, Wall, WallCross, mutation_chain, substitute_chart
from .classes import GeneralForm, IntersectionTable, RelativeClass
from .errors import SchemaError
from .laurent import LaurentExpr, Monomial, from_data

PRESETS = ("cp2-t1425", "p1xp1-t129")
SCHEMA_VERSION = 1


def _package_root():
    return resources.files("wallcross")


@lru_cache(maxsize=None)
def schema(kind: str) -> dict:
    path = _package_root() / "schemas" / f"v{SCHEMA_VERSION}" / f"{kind}.schema.json"
    return json.loads(path.read_text(encoding="utf-8"))


def validate(document, kind: str):
    try:
        jsonschema.validate(document, schema(kind))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{kind} document invalid at {where}: {exc.message}") from None
    return document


def _read_json(path) -> dict:
    try:
        source = path if hasattr(path, "read_text") else Path(path)
        return json.loads(source.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SchemaError(f"asset {path} does not exist") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"asset {path} is not valid JSON: {exc}") from None


def load_table(path) -> IntersectionTable:
    doc = validate(_read_json(path), "table")
    return IntersectionTable(
        basis=doc["basis"],
        divisors=doc["divisors"],
        rows=doc["rows"],
        maslov_row=doc["maslov"],
        anticanonical=doc["anticanonical"],
        name=doc["name"],
    )


def _class(basis, data) -> RelativeClass:
    return RelativeClass.of(basis, **data)


@dataclass
class Preset:
    name: str
    geometry: str
    table: IntersectionTable
    charts: dict[str, Chart]
    initial_chart: str
    W0: LaurentExpr
    steps: list
    positivity_divisors: list[str]
    general_form: GeneralForm
    chart_to_class: dict[str, RelativeClass]
    floer: dict
    inflation: dict
    numeric: dict | None
    figures: dict[str, object]
    expect: dict
    compact: dict | None = None
    source: object = None
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def final_chart(self) -> Chart:
        return self.steps[-1].to_chart if self.steps else self.charts[self.initial_chart]

    def chain(self) -> list[LaurentExpr]:
        return mutation_chain(self.steps, self.W0)

    def final_potential(self) -> LaurentExpr:
        return self.chain()[-1]

    def compact_potential(self) -> tuple[LaurentExpr, Chart]:
        """Final potential rewritten in the compact chart, if the preset has one."""
        W = self.final_potential()
        if not self.compact:
            return W, self.final_chart
        chart = self.charts[self.compact["chart"]]
        rules = {k: from_data(v) for k, v in self.compact["rules"].items()}
        return substitute_chart(W, rules), chart

    def floer_potential(self) -> tuple[LaurentExpr, Chart]:
        name = self.floer["chart"]
        if self.compact and name == self.compact["chart"]:
            return self.compact_potential()
        return self.final_potential(), self.charts[name]


def _build_steps(doc, charts):
    steps = []
    for s in doc["chain"]:
        try:
            src, dst = charts[s["from"]], charts[s["to"]]
        except KeyError as exc:
            raise SchemaError(f"chain step refers to unknown chart {exc.args[0]!r}") from None
        if s["kind"] == "basis":
            steps.append(ChangeBasis(tuple(map(tuple, s["linear"])), src, dst))
        else:
            steps.append(WallCross(Wall(tuple(s["direction"]), Monomial(s["monomial"]), s["orientation"]), src, dst))
    return steps


def _locate(ref: str, base_dir):
    """Resolve an asset reference next to the preset, then inside the package data."""
    if base_dir is not None:
        p = Path(base_dir) / ref
        if p.exists():
            return p
    return _package_root() / "data" / ref


def load_preset(name_or_path) -> Preset:
    """Load a built-in preset by name, or any preset JSON file by path."""
    if str(name_or_path) in PRESETS:
        src = _package_root() / "data" / "presets" / f"{name_or_path}.json"
        base_dir = None
    else:
        src = Path(name_or_path)
        if not src.exists():
            raise SchemaError(f"unknown preset {name_or_path!r}; built-ins are {', '.join(PRESETS)}")
        base_dir = src.parent
    doc = validate(_read_json(src), "preset")
    table = load_table(_locate(doc["table"], base_dir))

    charts = {
        k: Chart(tuple(v["names"]), tuple(v.get("area_symbols", ())), tuple(map(tuple, v.get("lattice", ((1, 0), (0, 1))))))
        for k, v in doc["charts"].items()
    }
    if doc["initial"]["chart"] not in charts:
        raise SchemaError(f"initial chart {doc['initial']['chart']!r} is not declared")
    W0 = charts[doc["initial"]["chart"]].check(from_data(doc["initial"]["potential"]))
    basis = table.basis
    missing = [d for d in doc["positivity_divisors"] if d not in table.divisors]
    if missing:
        raise SchemaError(f"positivity divisors {missing} are not in table {table.name}")
    form = GeneralForm(
        _class(basis, doc["general_form"]["base"]),
        tuple((p, _class(basis, c)) for p, c in doc["general_form"]["generators"]),
    )
    figures = {k: _locate(v, base_dir) for k, v in doc["figures"].items()}
    return Preset(
        name=doc["name"],
        geometry=doc["geometry"],
        table=table,
        charts=charts,
        initial_chart=doc["initial"]["chart"],
        W0=W0,
        steps=_build_steps(doc, charts),
        positivity_divisors=list(doc["positivity_divisors"]),
        general_form=form,
        chart_to_class={k: _class(basis, v) for k, v in doc["chart_to_class"].items()},
        floer=doc["floer"],
        inflation=doc["inflation"],
        numeric=doc.get("numeric"),
        figures=figures,
        expect=doc["expect"],
        compact=doc.get("compact"),
        source=src,
        raw=doc,
    )


# --- figure assets ----------------------------------------------------------


def _q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def diagram_to_data(d: BaseDiagram) -> dict:
    return {
        "vertices": [[_q(x) for x in p] for p in d.vertices],
        "cuts": [
            {"node": [_q(x) for x in c.node], "direction": list(c.direction), "anchor": [_q(x) for x in c.boundary_anchor]}
            for c in d.cuts
        ],
        "marked_fiber": None if d.marked_fiber is None else [_q(x) for x in d.marked_fiber],
    }


def diagram_from_data(data: dict) -> BaseDiagram:
    P = lambda p: tuple(Fraction(x) for x in p)
    return BaseDiagram(
        tuple(P(p) for p in data["vertices"]),
        tuple(Cut(P(c["node"]), tuple(c["direction"]), P(c["anchor"])) for c in data["cuts"]),
        None if data["marked_fiber"] is None else P(data["marked_fiber"]),
    )


@dataclass
class FigureAsset:
    name: str
    caption: str
    diagram: BaseDiagram
    walls: list
    discs: list

    def to_data(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "caption": self.caption,
            "diagram": diagram_to_data(self.diagram),
            "walls": [[[_q(x) for x in p] for p in seg] for seg in self.walls],
            "discs": [d.to_data() for d in self.discs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_data(), indent=1, sort_keys=True) + "\n"


def figure_from_data(doc: dict) -> FigureAsset:
    from .tropical import TropicalDisc

    validate(doc, "discs")
    P = lambda p: tuple(Fraction(x) for x in p)
    return FigureAsset(
        name=doc["name"],
        caption=doc.get("caption", ""),
        diagram=diagram_from_data(doc["diagram"]),
        walls=[(P(a), P(b)) for a, b in doc["walls"]],
        discs=[TropicalDisc.from_data(d) for d in doc["discs"]],
    )


def load_figure(name_or_path) -> FigureAsset:
    p = Path(str(name_or_path))
    if not p.exists():
        p = _package_root() / "data" / "discs" / f"{name_or_path}.json"
    return figure_from_data(_read_json(p))
